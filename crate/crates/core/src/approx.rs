//! add(T), right approximations and the generating condition.

use std::collections::hash_map::{Entry, HashMap};
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dexact::Ambient;
use crate::error::{Error, Result};
use crate::exactla::{rank_of_vectors, Scalar};
use crate::repmod::{direct_sum, hom_basis, Catalog, DirectSum, Morphism, Representation};

/// add of a finite set of catalog members.
#[derive(Clone, Debug)]
pub struct AddSubcategory {
    catalog: Arc<Catalog>,
    members: Vec<usize>,
    label: String,
}

impl AddSubcategory {
    pub fn new(catalog: &Arc<Catalog>, mut members: Vec<usize>, label: impl Into<String>) -> Result<AddSubcategory> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&m| m >= catalog.len()) {
            return Err(Error::Config(format!("catalog has no object with index {bad}")));
        }
        Ok(AddSubcategory {
            catalog: catalog.clone(),
            members,
            label: label.into(),
        })
    }

    pub fn from_labels(catalog: &Arc<Catalog>, labels: &[&str], label: impl Into<String>) -> Result<AddSubcategory> {
        let members = labels
            .iter()
            .map(|l| catalog.find(l).ok_or_else(|| Error::Config(format!("no catalog object named {l}"))))
            .collect::<Result<Vec<_>>>()?;
        AddSubcategory::new(catalog, members, label)
    }

    pub fn projectives(catalog: &Arc<Catalog>) -> Result<AddSubcategory> {
        AddSubcategory::new(catalog, catalog.projectives()?, "proj")
    }

    pub fn injectives(catalog: &Arc<Catalog>) -> Result<AddSubcategory> {
        AddSubcategory::new(catalog, catalog.injectives()?, "inj")
    }

    pub fn everything(catalog: &Arc<Catalog>) -> AddSubcategory {
        AddSubcategory {
            catalog: catalog.clone(),
            members: (0..catalog.len()).collect(),
            label: "all".into(),
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn is_subset_of(&self, other: &AddSubcategory) -> bool {
        self.members.iter().all(|&m| other.contains(m))
    }

    pub fn module(&self, k: usize) -> &Representation {
        self.catalog.module(self.members[k])
    }

    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.members.iter().map(|&m| self.catalog.label(m)).collect();
        format!("add({})", names.join("+"))
    }
}

/// An evaluation map `⊕ T_j -> C` with one summand per component.
#[derive(Clone, Debug)]
pub struct Approximation {
    pub source: DirectSum,
    /// Catalog index of every summand of the source.
    pub members: Vec<usize>,
    pub components: Vec<Morphism>,
    pub map: Morphism,
}

impl Approximation {
    fn assemble(target: &Representation, catalog: &Catalog, members: Vec<usize>, components: Vec<Morphism>) -> Result<Approximation> {
        let alg = target.algebra();
        let parts: Vec<Representation> = members.iter().map(|&m| catalog.module(m).clone()).collect();
        let source = direct_sum(alg, &parts)?;
        let map = DirectSum::copair(&source, target, &components);
        Ok(Approximation {
            source,
            members,
            components,
            map,
        })
    }

    pub fn target(&self) -> &Representation {
        self.map.target()
    }
}

/// The universal evaluation map: one copy of `T_j` per basis element of Hom(T_j, C).
pub fn right_approximation(x: &AddSubcategory, c: &Representation) -> Result<Approximation> {
    let catalog = x.catalog();
    let mut members = Vec::new();
    let mut components = Vec::new();
    for &m in x.members() {
        let h = hom_basis(catalog.module(m), c)?;
        for b in h.basis() {
            members.push(m);
            components.push(b.clone());
        }
    }
    Approximation::assemble(c, catalog, members, components)
}

/// Drops summands whose component factors through the remaining ones.
///
/// `a_s` factors through the others iff it lies in the span of `a_t ∘ φ` over kept `t != s`
/// and `φ` in a basis of Hom(T_s, T_t). Dropping a redundant summand does not change that
/// span for the others, so one pass suffices.
pub fn minimize(a: &Approximation) -> Result<Approximation> {
    minimize_in(a, None)
}

/// `minimize`, reading hom spaces between members from the catalog's cache when given.
fn minimize_in(a: &Approximation, catalog: Option<&Catalog>) -> Result<Approximation> {
    let target = a.target().clone();
    let alg = target.algebra().clone();
    let field = alg.field();
    let n = a.components.len();
    let mut homs: HashMap<(usize, usize), Vec<Morphism>> = HashMap::new();
    let mut keep = vec![true; n];
    for s in (0..n).rev() {
        let len = a.components[s].flatten().len();
        let mut span = Vec::new();
        for t in (0..n).filter(|&t| t != s && keep[t]) {
            let key = (a.members[s], a.members[t]);
            let basis = match homs.entry(key) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(match catalog {
                    Some(c) => c.hom(key.0, key.1).basis().to_vec(),
                    None => hom_basis(a.components[s].source(), a.components[t].source())?.basis().to_vec(),
                }),
            };
            span.extend(basis.iter().map(|phi| a.components[t].compose(phi).flatten()));
        }
        if span.is_empty() {
            continue;
        }
        let r = rank_of_vectors(field, len, &span);
        span.push(a.components[s].flatten());
        if rank_of_vectors(field, len, &span) == r {
            keep[s] = false;
        }
    }
    let members = (0..n).filter(|&k| keep[k]).map(|k| a.members[k]).collect();
    let components: Vec<Morphism> = (0..n).filter(|&k| keep[k]).map(|k| a.components[k].clone()).collect();
    let parts: Vec<Representation> = components.iter().map(|c| c.source().clone()).collect();
    let source = direct_sum(&alg, &parts)?;
    let map = DirectSum::copair(&source, &target, &components);
    Ok(Approximation {
        source,
        members,
        components,
        map,
    })
}

pub fn minimal_right_approximation(x: &AddSubcategory, c: &Representation) -> Result<Approximation> {
    minimize_in(&right_approximation(x, c)?, Some(x.catalog()))
}

/// Every catalog object of the ambient category admits an admissible deflation from add(X).
pub fn is_generating(x: &AddSubcategory, ambient: &Ambient) -> Result<bool> {
    for c in ambient.objects() {
        let a = right_approximation(x, ambient.catalog().module(c))?;
        if !ambient.is_deflation(&a.map)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct GenInstance {
    pub object: String,
    /// The evaluation approximation is an admissible deflation.
    pub approximation_is_deflation: bool,
    /// A deflation from add(X) was found by direct search.
    pub deflation_found: bool,
}

impl GenInstance {
    pub fn consistent(&self) -> bool {
        self.approximation_is_deflation == self.deflation_found
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GenReport {
    pub subcategory: String,
    pub instances: Vec<GenInstance>,
    /// Objects with no admissible deflation from add(X).
    pub failing: Vec<String>,
}

impl GenReport {
    /// Both halves of the equivalence agree on every object.
    pub fn equivalence_holds(&self) -> bool {
        self.instances.iter().all(GenInstance::consistent)
    }

    pub fn generating(&self) -> bool {
        self.failing.is_empty()
    }
}

/// Searches small sums of members for an admissible deflation onto `c`,
/// independently of the evaluation approximation.
fn search_deflation(x: &AddSubcategory, c: &Representation, ambient: &Ambient, seed: u64) -> Result<bool> {
    let catalog = x.catalog();
    let alg = c.algebra();
    let field = c.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // sources: one or two copies of one member, or one copy each of two members
    let mut sources: Vec<Vec<usize>> = Vec::new();
    for (i, &a) in x.members().iter().enumerate() {
        sources.push(vec![a]);
        sources.push(vec![a, a]);
        for &b in &x.members()[i + 1..] {
            sources.push(vec![a, b]);
        }
    }
    for src in sources {
        let parts: Vec<Representation> = src.iter().map(|&m| catalog.module(m).clone()).collect();
        let sum = direct_sum(alg, &parts)?;
        let h = hom_basis(&sum.sum, c)?;
        if h.dim() == 0 {
            continue;
        }
        let mut candidates: Vec<Morphism> = h.basis().to_vec();
        for _ in 0..4 {
            let coeffs: Vec<Scalar> = (0..h.dim()).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
            candidates.push(h.element(&coeffs));
        }
        for f in candidates {
            if ambient.is_deflation(&f)? {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Instance-wise check that a deflation from add(X) exists exactly when the
/// evaluation approximation is one.
pub fn check_gen(x: &AddSubcategory, ambient: &Ambient) -> Result<GenReport> {
    let mut instances = Vec::new();
    let mut failing = Vec::new();
    for c in ambient.objects() {
        let m = ambient.catalog().module(c);
        let a = right_approximation(x, m)?;
        let approximation_is_deflation = ambient.is_deflation(&a.map)?;
        let deflation_found = search_deflation(x, m, ambient, 0x6e6 + c as u64)?;
        let label = ambient.catalog().label(c).to_string();
        if !approximation_is_deflation {
            failing.push(label.clone());
        }
        instances.push(GenInstance {
            object: label,
            approximation_is_deflation,
            deflation_found,
        });
    }
    Ok(GenReport {
        subcategory: x.describe(),
        instances,
        failing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repmod::{build_catalog, CatalogOptions};
    use crate::samples;

    fn a2_catalog() -> Arc<Catalog> {
        Arc::new(build_catalog(&samples::a2(), &CatalogOptions::default()).unwrap())
    }

    #[test]
    fn approximation_examples() {
        let cat = a2_catalog();
        let x = AddSubcategory::from_labels(&cat, &["P1", "S2"], "proj").unwrap();
        let s1 = cat.module(cat.find("S1").unwrap()).clone();
        let a = right_approximation(&x, &s1).unwrap();
        assert_eq!(a.members, vec![cat.find("P1").unwrap()]);
        assert!(a.map.is_epi());

        let only_p1 = AddSubcategory::from_labels(&cat, &["P1"], "p1").unwrap();
        let s2 = cat.module(cat.find("S2").unwrap()).clone();
        let a = right_approximation(&only_p1, &s2).unwrap();
        assert!(a.source.sum.is_zero());

        let p1 = cat.module(cat.find("P1").unwrap()).clone();
        let a = right_approximation(&x, &p1).unwrap();
        assert!(a.map.is_epi());
        assert!(a.components.iter().any(Morphism::is_iso));
    }

    #[test]
    fn minimize_drops_redundant_copies() {
        let cat = a2_catalog();
        let p1 = cat.find("P1").unwrap();
        let s1 = cat.module(cat.find("S1").unwrap()).clone();
        let h = hom_basis(cat.module(p1), &s1).unwrap();
        let f = h.basis()[0].clone();
        let doubled = Approximation::assemble(&s1, &cat, vec![p1, p1], vec![f.clone(), f.scale(&s1.field().from_i64(2))]).unwrap();
        let m = minimize(&doubled).unwrap();
        assert_eq!(m.members, vec![p1]);
        assert!(m.map.is_epi());
        let again = minimize(&m).unwrap();
        assert_eq!(again.members, m.members);
    }
}
