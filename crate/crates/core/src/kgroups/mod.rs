//! Split and relative Grothendieck groups, the index, and the maps θ_C and θ_X.

mod verify;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::approx::AddSubcategory;
use crate::dexact::{is_in_relative_structure, t_resolution, Ambient, DSequence};
use crate::error::{Error, Result};
use crate::exactla::{quotient_group, IntMat, K0Presentation};
use crate::fpfun::{functor_resolution, FPPresentation};
use crate::par::Exec;
use crate::repmod::{decompose_pieces, Catalog, Representation};

pub use verify::{
    generate_horseshoe_triples, generate_schanuel_pairs, verify_horseshoe, verify_prop13, verify_schanuel,
    verify_theorem_1_1, verify_theorem_a, HorseshoeTriple, Instance, Report, CAVEAT,
};

/// K₀^sp of the catalog: integer vectors indexed by catalog position.
#[derive(Clone, Debug)]
pub struct SplitK0 {
    catalog: Arc<Catalog>,
}

impl SplitK0 {
    pub fn new(catalog: &Arc<Catalog>) -> SplitK0 {
        SplitK0 {
            catalog: catalog.clone(),
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn rank(&self) -> usize {
        self.catalog.len()
    }

    /// Multiplicity vector of the summands of `m`.
    pub fn split_class(&self, m: &Representation) -> Result<Vec<i64>> {
        let mut v = vec![0; self.rank()];
        for p in decompose_pieces(m)? {
            let k = self
                .catalog
                .identify(&p.module)?
                .ok_or_else(|| Error::UnknownSummand(p.module.dims().to_vec()))?;
            v[k] += 1;
        }
        Ok(v)
    }

    pub fn class_of_blocks(&self, blocks: &[usize]) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        for &b in blocks {
            v[b] += 1;
        }
        v
    }

    /// `Σ (-1)^i [A_i]` over the objects of a sequence.
    pub fn alternating_sum(&self, s: &DSequence) -> Result<Vec<i64>> {
        let mut v = vec![0; self.rank()];
        for i in 0..s.objects().len() {
            let c = match s.blocks(i) {
                Some(b) => self.class_of_blocks(b),
                None => self.split_class(s.object(i))?,
            };
            let sign = if i % 2 == 0 { 1 } else { -1 };
            for (x, y) in v.iter_mut().zip(c) {
                *x += sign * y;
            }
        }
        Ok(v)
    }

    pub fn describe(&self, v: &[i64]) -> String {
        describe_combination(v, |k| self.catalog.label(k).to_string())
    }
}

/// Renders `(-1, 1)` over labels `(P2, P1)` as `[P1] - [P2]`.
pub fn describe_combination(v: &[i64], label: impl Fn(usize) -> String) -> String {
    let mut terms: Vec<(usize, i64)> = v.iter().copied().enumerate().filter(|&(_, c)| c != 0).collect();
    // positive terms first, each group in reverse catalog order (largest objects first)
    terms.sort_by_key(|&(k, c)| (c < 0, std::cmp::Reverse(k)));
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (n, (k, c)) in terms.into_iter().enumerate() {
        let mag = c.unsigned_abs();
        let coeff = if mag == 1 { String::new() } else { format!("{mag}") };
        let term = format!("{coeff}[{}]", label(k));
        if n == 0 {
            if c < 0 {
                out.push('-');
            }
            out.push_str(&term);
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
            out.push_str(&term);
        }
    }
    out
}

/// `Σ (-1)^i [T_i]` over a T-resolution, in coordinates indexed by the members of `t`.
pub fn index_dct(c: &Representation, t: &AddSubcategory, d: usize) -> Result<Vec<i64>> {
    let res = t_resolution(c, t, d)?;
    let mut v = vec![0; t.members().len()];
    for (i, blocks) in res.blocks.iter().enumerate() {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        for b in blocks {
            let pos = t.members().binary_search(b).expect("approximations land in T");
            v[pos] += sign;
        }
    }
    Ok(v)
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// K₀(C, E_X) presented by the enumerated relations.
#[derive(Clone, Debug)]
pub struct RelativeK0 {
    id: u64,
    split: SplitK0,
    x: AddSubcategory,
    relations: Vec<Vec<i64>>,
    /// Label of the sequence behind each relation.
    provenance: Vec<String>,
    presentation: K0Presentation,
}

/// A canonical coset representative in some RelativeK0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexValue {
    k0: u64,
    canonical: Vec<BigInt>,
}

impl IndexValue {
    pub fn canonical(&self) -> &[BigInt] {
        &self.canonical
    }

    pub fn to_i64s(&self) -> Result<Vec<i64>> {
        self.canonical
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Config(format!("coset coordinate {x} overflows"))))
            .collect()
    }
}

fn to_big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Relative Grothendieck group of `ambient` for X, from the members of `family` in E_X.
pub fn build_relative_k0(x: &AddSubcategory, ambient: &Ambient, family: &[DSequence]) -> Result<RelativeK0> {
    build_relative_k0_with(x, ambient, family, Exec::default())
}

pub fn build_relative_k0_with(x: &AddSubcategory, ambient: &Ambient, family: &[DSequence], exec: Exec) -> Result<RelativeK0> {
    let split = SplitK0::new(ambient.catalog());
    let rows = exec.map(family, |s| -> Result<Option<Vec<i64>>> {
        if !is_in_relative_structure(s, x, ambient)? {
            return Ok(None);
        }
        split.alternating_sum(s).map(Some)
    });
    let mut relations: Vec<Vec<i64>> = Vec::new();
    let mut provenance = Vec::new();
    // catalog objects outside the ambient category are not generators
    let inside = ambient.objects();
    for c in (0..split.rank()).filter(|c| !inside.contains(c)) {
        let mut r = vec![0; split.rank()];
        r[c] = 1;
        relations.push(r);
        provenance.push(format!("outside:{}", split.catalog().label(c)));
    }
    for (s, r) in family.iter().zip(rows) {
        if let Some(r) = r? {
            if r.iter().any(|&c| c != 0) && !relations.contains(&r) {
                relations.push(r);
                provenance.push(s.label.clone());
            }
        }
    }
    let n = split.rank();
    let big: Vec<Vec<BigInt>> = relations.iter().map(|r| to_big(r)).collect();
    let presentation = quotient_group(&IntMat::from_rows(n, &big), n);
    Ok(RelativeK0 {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        split,
        x: x.clone(),
        relations,
        provenance,
        presentation,
    })
}

impl RelativeK0 {
    pub fn split(&self) -> &SplitK0 {
        &self.split
    }

    pub fn subcategory(&self) -> &AddSubcategory {
        &self.x
    }

    pub fn relations(&self) -> &[Vec<i64>] {
        &self.relations
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn presentation(&self) -> &K0Presentation {
        &self.presentation
    }

    pub fn free_rank(&self) -> usize {
        self.presentation.free_rank()
    }

    pub fn describe(&self) -> String {
        self.presentation.describe()
    }

    /// π_X of a split class vector.
    pub fn class_of_vector(&self, v: &[i64]) -> IndexValue {
        IndexValue {
            k0: self.id,
            canonical: self.presentation.canonical(&to_big(v)),
        }
    }

    pub fn class_in(&self, m: &Representation) -> Result<IndexValue> {
        Ok(self.class_of_vector(&self.split.split_class(m)?))
    }

    pub fn add(&self, a: &IndexValue, b: &IndexValue) -> IndexValue {
        self.combine(a, b, 1)
    }

    pub fn sub(&self, a: &IndexValue, b: &IndexValue) -> IndexValue {
        self.combine(a, b, -1)
    }

    fn combine(&self, a: &IndexValue, b: &IndexValue, sign: i64) -> IndexValue {
        assert!(a.k0 == self.id && b.k0 == self.id, "cosets from a different group");
        let v: Vec<BigInt> = a
            .canonical
            .iter()
            .zip(&b.canonical)
            .map(|(x, y)| x + y * BigInt::from(sign))
            .collect();
        IndexValue {
            k0: self.id,
            canonical: self.presentation.canonical(&v),
        }
    }

    pub fn zero(&self) -> IndexValue {
        self.class_of_vector(&vec![0; self.split.rank()])
    }

    pub fn is_zero(&self, v: &IndexValue) -> bool {
        v.canonical.iter().all(|x| x == &BigInt::from(0))
    }
}

/// `Σ (-1)^i [A_i]` over the resolution of the presented functor.
pub fn theta_c(p: &FPPresentation, ambient: &Ambient) -> Result<Vec<i64>> {
    let res = functor_resolution(p, ambient)?;
    SplitK0::new(ambient.catalog()).alternating_sum(&res)
}

/// π_X ∘ θ_C.
pub fn theta_x(p: &FPPresentation, k: &RelativeK0, ambient: &Ambient) -> Result<IndexValue> {
    Ok(k.class_of_vector(&theta_c(p, ambient)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dexact::{enumerate_family, FamilyOptions};
    use crate::repmod::{build_catalog, direct_sum, CatalogOptions, Morphism};
    use crate::samples;

    fn a2() -> Arc<Catalog> {
        Arc::new(build_catalog(&samples::a2(), &CatalogOptions::default()).unwrap())
    }

    #[test]
    fn split_classes() {
        let c = a2();
        let k = SplitK0::new(&c);
        let (p1, s1) = (c.module(2).clone(), c.module(1).clone());
        let m = direct_sum(c.algebra(), &[p1, s1.clone(), s1]).unwrap().sum;
        assert_eq!(k.split_class(&m).unwrap(), vec![0, 2, 1]);
        assert_eq!(k.split_class(&Representation::zero(c.algebra())).unwrap(), vec![0, 0, 0]);
        assert_eq!(k.split_class(c.module(0)).unwrap(), vec![1, 0, 0]);
    }

    #[test]
    fn classical_index_a2() {
        let c = a2();
        let proj = AddSubcategory::projectives(&c).unwrap();
        // members (P2, P1) = (S2, P1)
        assert_eq!(index_dct(c.module(1), &proj, 1).unwrap(), vec![-1, 1]);
        assert_eq!(index_dct(c.module(2), &proj, 1).unwrap(), vec![0, 1]);
        assert_eq!(describe_combination(&[-1, 1], |k| ["P2", "P1"][k].to_string()), "[P1] - [P2]");
    }

    #[test]
    fn relative_groups_a2() {
        let c = a2();
        let amb = Ambient::module_category(&c);
        let fam = enumerate_family(&amb, &FamilyOptions::default()).unwrap();
        let proj = AddSubcategory::projectives(&c).unwrap();
        let k = build_relative_k0(&proj, &amb, &fam).unwrap();
        assert!(k.relations().contains(&vec![1, 1, -1]));
        assert_eq!(k.free_rank(), 2);
        assert!(k.presentation().is_free());
        let s1 = k.class_in(c.module(1)).unwrap();
        let rhs = k.sub(&k.class_in(c.module(2)).unwrap(), &k.class_in(c.module(0)).unwrap());
        assert_eq!(s1, rhs);
        assert!(k.is_zero(&k.class_in(&Representation::zero(c.algebra())).unwrap()));

        let all = AddSubcategory::everything(&c);
        let k = build_relative_k0(&all, &amb, &fam).unwrap();
        assert_eq!(k.free_rank(), 3);
        let empty = build_relative_k0(&proj, &amb, &[]).unwrap();
        assert_eq!(empty.free_rank(), 3);
    }

    #[test]
    fn relative_groups_inside_cluster_tilting() {
        let c = Arc::new(build_catalog(&samples::aus_a2(), &CatalogOptions::default()).unwrap());
        let t = AddSubcategory::from_labels(&c, &["P1", "P2", "S3", "S1"], "T").unwrap();
        let amb = Ambient::d_cluster_tilting(&t, 2);
        let fam = enumerate_family(&amb, &FamilyOptions::default()).unwrap();
        // S2 is not an object of add(T), so it contributes nothing
        let k = build_relative_k0(&t, &amb, &fam).unwrap();
        assert_eq!(k.free_rank(), 4);
        assert!(k.is_zero(&k.class_in(c.module(c.find("S2").unwrap())).unwrap()));
        // with X = proj the group is that of the module category
        let proj = AddSubcategory::projectives(&c).unwrap();
        assert_eq!(build_relative_k0(&proj, &amb, &fam).unwrap().describe(), "Z^3");
    }

    #[test]
    fn theta_examples() {
        let c = a2();
        let amb = Ambient::module_category(&c);
        let f = c.hom(2, 1).basis()[0].clone();
        assert_eq!(theta_c(&FPPresentation::new(f), &amb).unwrap(), vec![1, 1, -1]);
        assert_eq!(theta_c(&FPPresentation::new(Morphism::identity(c.module(2))), &amb).unwrap(), vec![0, 0, 0]);
        assert_eq!(theta_c(&FPPresentation::representable(c.module(2)), &amb).unwrap(), vec![0, 0, 1]);
    }
}
