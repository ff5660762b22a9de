//! Representations of bound quivers and their morphisms.

mod catalog;
mod decompose;
mod hom;
mod iso;

use std::fmt;
use std::sync::Arc;

use crate::algebra::{BoundAlgebra, Path};
use crate::error::{Error, Result};
use crate::exactla::{Field, Mat, Scalar};

pub use catalog::{build_catalog, Catalog, CatalogEntry, CatalogOptions};
pub use decompose::{decompose, decompose_pieces, Piece, Summand};
pub use hom::{hom_basis, HomSpace};
pub use iso::{is_isomorphic, IsoOptions};
pub(crate) use iso::search_span;

/// One vector space per vertex and one matrix per arrow.
#[derive(Clone)]
pub struct Representation {
    alg: Arc<BoundAlgebra>,
    dims: Vec<usize>,
    maps: Vec<Mat>,
}

impl Representation {
    pub fn new(alg: Arc<BoundAlgebra>, dims: Vec<usize>, maps: Vec<Mat>) -> Result<Representation> {
        if dims.len() != alg.n_vertices() || maps.len() != alg.n_arrows() {
            return Err(Error::InvalidRepresentation(format!(
                "expected {} dimensions and {} arrow matrices",
                alg.n_vertices(),
                alg.n_arrows()
            )));
        }
        for (a, m) in alg.quiver().arrows().iter().zip(&maps) {
            if m.field() != alg.field() {
                return Err(Error::FieldMismatch);
            }
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(Error::InvalidRepresentation(format!(
                    "arrow {} needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let rep = Representation { alg, dims, maps };
        for (k, (r, &(s, t))) in rep.alg.relations().iter().zip(rep.alg.relation_endpoints()).enumerate() {
            let mut acc = Mat::zeros(rep.alg.field(), rep.dims[t], rep.dims[s]);
            for (c, arrows) in &r.terms {
                acc.add_scaled(c, &rep.eval_arrows(s, arrows));
            }
            if !acc.is_zero() {
                return Err(Error::InvalidRepresentation(format!("relation {} does not vanish", k + 1)));
            }
        }
        Ok(rep)
    }

    pub(crate) fn new_unchecked(alg: Arc<BoundAlgebra>, dims: Vec<usize>, maps: Vec<Mat>) -> Representation {
        Representation { alg, dims, maps }
    }

    pub fn zero(alg: &Arc<BoundAlgebra>) -> Representation {
        let dims = vec![0; alg.n_vertices()];
        let maps = vec![Mat::zeros(alg.field(), 0, 0); alg.n_arrows()];
        Representation::new_unchecked(alg.clone(), dims, maps)
    }

    pub fn simple(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
        let mut dims = vec![0; alg.n_vertices()];
        dims[v] = 1;
        let maps = alg
            .quiver()
            .arrows()
            .iter()
            .map(|a| Mat::zeros(alg.field(), dims[a.target], dims[a.source]))
            .collect();
        Representation::new_unchecked(alg.clone(), dims, maps)
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn arrow_map(&self, a: usize) -> &Mat {
        &self.maps[a]
    }

    pub fn arrow_maps(&self) -> &[Mat] {
        &self.maps
    }

    /// Matrix of a path given as arrows in traversal order starting at `source`.
    pub fn eval_arrows(&self, source: usize, arrows: &[usize]) -> Mat {
        let mut acc = Mat::identity(self.field(), self.dims[source]);
        for &a in arrows {
            acc = self.maps[a].mul(&acc);
        }
        acc
    }

    pub fn eval_path(&self, p: &Path) -> Mat {
        self.eval_arrows(p.source, &p.arrows)
    }

    /// Ranks of all nontrivial basis paths; an isomorphism invariant.
    pub fn rank_profile(&self) -> Vec<usize> {
        self.alg
            .basis()
            .iter()
            .filter(|p| !p.is_empty())
            .map(|p| self.eval_path(p).rank())
            .collect()
    }

    pub fn is_simple(&self) -> bool {
        self.total_dim() == 1
    }

    pub(crate) fn same_algebra(&self, other: &Representation) -> Result<()> {
        self.alg.check_same(&other.alg)
    }

    /// Offsets of each vertex in the concatenated space `⊕_v M_v`.
    pub fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.dims.len());
        let mut acc = 0;
        for &d in &self.dims {
            out.push(acc);
            acc += d;
        }
        out
    }

    /// Same representation with the basis at each vertex changed by `g_v` (new = g_v * old).
    pub fn transport(&self, g: &[Mat]) -> Option<(Representation, Morphism)> {
        let inv: Vec<Mat> = g.iter().map(Mat::inverse).collect::<Option<_>>()?;
        let maps = self
            .alg
            .quiver()
            .arrows()
            .iter()
            .zip(&self.maps)
            .map(|(a, m)| g[a.target].mul(m).mul(&inv[a.source]))
            .collect();
        let rep = Representation::new_unchecked(self.alg.clone(), self.dims.clone(), maps);
        let iso = Morphism::new_unchecked(self.clone(), rep.clone(), g.to_vec());
        Some((rep, iso))
    }
}

impl PartialEq for Representation {
    /// Equality of concrete data (not isomorphism).
    fn eq(&self, other: &Self) -> bool {
        self.alg.id() == other.alg.id() && self.dims == other.dims && self.maps == other.maps
    }
}

impl Eq for Representation {}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rep{:?}", self.dims)
    }
}

pub fn format_dims(dims: &[usize]) -> String {
    let parts: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Per-vertex linear maps commuting with the arrow actions.
#[derive(Clone)]
pub struct Morphism {
    source: Representation,
    target: Representation,
    maps: Vec<Mat>,
}

impl Morphism {
    pub fn new(source: Representation, target: Representation, maps: Vec<Mat>) -> Result<Morphism> {
        source.same_algebra(&target)?;
        if maps.len() != source.dims.len() {
            return Err(Error::InvalidMorphism("wrong number of vertex maps".into()));
        }
        for (v, m) in maps.iter().enumerate() {
            if m.field() != source.field() {
                return Err(Error::FieldMismatch);
            }
            if m.shape() != (target.dims[v], source.dims[v]) {
                return Err(Error::InvalidMorphism(format!("vertex {} map has the wrong shape", v + 1)));
            }
        }
        let f = Morphism { source, target, maps };
        if let Some(a) = f.first_noncommuting_arrow() {
            return Err(Error::InvalidMorphism(format!(
                "square at arrow {} does not commute",
                f.source.alg.quiver().arrows()[a].name
            )));
        }
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: Representation, target: Representation, maps: Vec<Mat>) -> Morphism {
        Morphism { source, target, maps }
    }

    fn first_noncommuting_arrow(&self) -> Option<usize> {
        self.source.alg.quiver().arrows().iter().enumerate().find_map(|(k, a)| {
            let lhs = self.target.maps[k].mul(&self.maps[a.source]);
            let rhs = self.maps[a.target].mul(&self.source.maps[k]);
            (lhs != rhs).then_some(k)
        })
    }

    pub fn is_valid(&self) -> bool {
        self.first_noncommuting_arrow().is_none()
    }

    pub fn zero(source: &Representation, target: &Representation) -> Morphism {
        let field = source.field();
        let maps = (0..source.dims.len())
            .map(|v| Mat::zeros(field, target.dims[v], source.dims[v]))
            .collect();
        Morphism::new_unchecked(source.clone(), target.clone(), maps)
    }

    pub fn identity(m: &Representation) -> Morphism {
        let maps = m.dims.iter().map(|&d| Mat::identity(m.field(), d)).collect();
        Morphism::new_unchecked(m.clone(), m.clone(), maps)
    }

    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn vertex_map(&self, v: usize) -> &Mat {
        &self.maps[v]
    }

    pub fn vertex_maps(&self) -> &[Mat] {
        &self.maps
    }

    /// `self ∘ g` (apply `g` first).
    pub fn compose(&self, g: &Morphism) -> Morphism {
        assert_eq!(g.target.dims, self.source.dims, "composition of non-composable morphisms");
        let maps = self.maps.iter().zip(&g.maps).map(|(a, b)| a.mul(b)).collect();
        Morphism::new_unchecked(g.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &Morphism) -> Morphism {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.add(b)).collect();
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, other: &Morphism) -> Morphism {
        let maps = self.maps.iter().zip(&other.maps).map(|(a, b)| a.sub(b)).collect();
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, s: &Scalar) -> Morphism {
        let maps = self.maps.iter().map(|a| a.scale(s)).collect();
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn neg(&self) -> Morphism {
        let maps = self.maps.iter().map(Mat::neg).collect();
        Morphism::new_unchecked(self.source.clone(), self.target.clone(), maps)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Mat::is_zero)
    }

    pub fn is_mono(&self) -> bool {
        self.maps.iter().zip(&self.source.dims).all(|(m, &d)| m.rank() == d)
    }

    pub fn is_epi(&self) -> bool {
        self.maps.iter().zip(&self.target.dims).all(|(m, &d)| m.rank() == d)
    }

    pub fn is_iso(&self) -> bool {
        self.source.dims == self.target.dims && self.maps.iter().all(Mat::is_invertible)
    }

    pub fn inverse(&self) -> Option<Morphism> {
        if self.source.dims != self.target.dims {
            return None;
        }
        let maps = self.maps.iter().map(Mat::inverse).collect::<Option<Vec<_>>>()?;
        Some(Morphism::new_unchecked(self.target.clone(), self.source.clone(), maps))
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.maps.iter().map(Mat::rank).collect()
    }

    /// All vertex maps flattened row-major, vertex after vertex.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.maps.iter().flat_map(|m| m.entries().iter().cloned()).collect()
    }

    pub fn from_flat(source: &Representation, target: &Representation, flat: &[Scalar]) -> Morphism {
        let field = source.field();
        let mut maps = Vec::with_capacity(source.dims.len());
        let mut at = 0;
        for v in 0..source.dims.len() {
            let (r, c) = (target.dims[v], source.dims[v]);
            let m = Mat::from_scalars(field, r, c, flat[at..at + r * c].to_vec()).expect("flat morphism data");
            at += r * c;
            maps.push(m);
        }
        Morphism::new_unchecked(source.clone(), target.clone(), maps)
    }

    /// Block matrix of all vertex maps, `⊕ M_v -> ⊕ N_v`.
    pub fn total_matrix(&self) -> Mat {
        let blocks: Vec<&Mat> = self.maps.iter().collect();
        Mat::block_diag(self.source.field(), &blocks)
    }

    /// Retarget onto an equal-data representation (used after cloning through sums).
    pub fn with_ends(&self, source: &Representation, target: &Representation) -> Morphism {
        assert_eq!(source.dims, self.source.dims);
        assert_eq!(target.dims, self.target.dims);
        Morphism::new_unchecked(source.clone(), target.clone(), self.maps.clone())
    }
}

impl PartialEq for Morphism {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target && self.maps == other.maps
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism{:?}->{:?} {:?}", self.source.dims, self.target.dims, self.maps)
    }
}

pub fn kernel(f: &Morphism) -> (Representation, Morphism) {
    let m = &f.source;
    let bases: Vec<Mat> = f.maps.iter().map(Mat::kernel_basis).collect();
    let lefts: Vec<Mat> = bases.iter().map(|b| b.left_inverse().expect("basis columns")).collect();
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let maps = m
        .alg
        .quiver()
        .arrows()
        .iter()
        .zip(&m.maps)
        .map(|(a, ma)| lefts[a.target].mul(ma).mul(&bases[a.source]))
        .collect();
    let k = Representation::new_unchecked(m.alg.clone(), dims, maps);
    let incl = Morphism::new_unchecked(k.clone(), m.clone(), bases);
    (k, incl)
}

pub fn cokernel(f: &Morphism) -> (Representation, Morphism) {
    let n = &f.target;
    // rows of q_v span the annihilator of im f_v
    let qs: Vec<Mat> = f.maps.iter().map(|m| m.transpose().kernel_basis().transpose()).collect();
    let rights: Vec<Mat> = qs.iter().map(|q| q.right_inverse().expect("independent rows")).collect();
    let dims: Vec<usize> = qs.iter().map(Mat::rows).collect();
    let maps = n
        .alg
        .quiver()
        .arrows()
        .iter()
        .zip(&n.maps)
        .map(|(a, na)| qs[a.target].mul(na).mul(&rights[a.source]))
        .collect();
    let c = Representation::new_unchecked(n.alg.clone(), dims, maps);
    let proj = Morphism::new_unchecked(n.clone(), c.clone(), qs);
    (c, proj)
}

/// `f = mono ∘ epi` through the image.
pub fn image(f: &Morphism) -> (Representation, Morphism, Morphism) {
    let n = &f.target;
    let bases: Vec<Mat> = f.maps.iter().map(Mat::column_space_basis).collect();
    let lefts: Vec<Mat> = bases.iter().map(|b| b.left_inverse().expect("basis columns")).collect();
    let dims: Vec<usize> = bases.iter().map(Mat::cols).collect();
    let maps = n
        .alg
        .quiver()
        .arrows()
        .iter()
        .zip(&n.maps)
        .map(|(a, na)| lefts[a.target].mul(na).mul(&bases[a.source]))
        .collect();
    let im = Representation::new_unchecked(n.alg.clone(), dims, maps);
    let epi_maps = lefts.iter().zip(&f.maps).map(|(l, m)| l.mul(m)).collect();
    let epi = Morphism::new_unchecked(f.source.clone(), im.clone(), epi_maps);
    let mono = Morphism::new_unchecked(im.clone(), n.clone(), bases);
    (im, epi, mono)
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub sum: Representation,
    pub summands: Vec<Representation>,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

pub fn direct_sum(alg: &Arc<BoundAlgebra>, parts: &[Representation]) -> Result<DirectSum> {
    for p in parts {
        alg.check_same(&p.alg)?;
    }
    let field = alg.field();
    let n = alg.n_vertices();
    let dims: Vec<usize> = (0..n).map(|v| parts.iter().map(|p| p.dims[v]).sum()).collect();
    let maps = (0..alg.n_arrows())
        .map(|a| {
            let blocks: Vec<&Mat> = parts.iter().map(|p| &p.maps[a]).collect();
            Mat::block_diag(field, &blocks)
        })
        .collect();
    let sum = Representation::new_unchecked(alg.clone(), dims.clone(), maps);
    let mut offsets = vec![0usize; n];
    let mut injections = Vec::with_capacity(parts.len());
    let mut projections = Vec::with_capacity(parts.len());
    for p in parts {
        let mut inj = Vec::with_capacity(n);
        let mut proj = Vec::with_capacity(n);
        for v in 0..n {
            let mut i = Mat::zeros(field, dims[v], p.dims[v]);
            let mut q = Mat::zeros(field, p.dims[v], dims[v]);
            for k in 0..p.dims[v] {
                i.set(offsets[v] + k, k, field.one());
                q.set(k, offsets[v] + k, field.one());
            }
            offsets[v] += p.dims[v];
            inj.push(i);
            proj.push(q);
        }
        injections.push(Morphism::new_unchecked(p.clone(), sum.clone(), inj));
        projections.push(Morphism::new_unchecked(sum.clone(), p.clone(), proj));
    }
    Ok(DirectSum {
        sum,
        summands: parts.to_vec(),
        injections,
        projections,
    })
}

impl DirectSum {
    /// Morphism between sums given by its components `entries[t][s]: src_s -> tgt_t`.
    pub fn matrix(src: &DirectSum, tgt: &DirectSum, entries: &[Vec<Morphism>]) -> Morphism {
        let mut acc = Morphism::zero(&src.sum, &tgt.sum);
        for (t, row) in entries.iter().enumerate() {
            for (s, e) in row.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                let part = tgt.injections[t].compose(e).compose(&src.projections[s]);
                acc = acc.add(&part);
            }
        }
        acc
    }

    /// Morphism out of the sum, with one component per summand.
    pub fn copair(src: &DirectSum, target: &Representation, components: &[Morphism]) -> Morphism {
        let mut acc = Morphism::zero(&src.sum, target);
        for (s, e) in components.iter().enumerate() {
            acc = acc.add(&e.compose(&src.projections[s]));
        }
        acc
    }

    /// Morphism into the sum, with one component per summand.
    pub fn pair(source: &Representation, tgt: &DirectSum, components: &[Morphism]) -> Morphism {
        let mut acc = Morphism::zero(source, &tgt.sum);
        for (t, e) in components.iter().enumerate() {
            acc = acc.add(&tgt.injections[t].compose(e));
        }
        acc
    }
}

/// `f ⊕ g` between the binary sums of the ends.
pub fn sum_of_morphisms(alg: &Arc<BoundAlgebra>, fs: &[Morphism]) -> Result<(DirectSum, DirectSum, Morphism)> {
    let src = direct_sum(alg, &fs.iter().map(|f| f.source.clone()).collect::<Vec<_>>())?;
    let tgt = direct_sum(alg, &fs.iter().map(|f| f.target.clone()).collect::<Vec<_>>())?;
    let n = fs.len();
    let entries: Vec<Vec<Morphism>> = (0..n)
        .map(|t| {
            (0..n)
                .map(|s| {
                    if s == t {
                        fs[s].clone()
                    } else {
                        Morphism::zero(&fs[s].source, &fs[t].target)
                    }
                })
                .collect()
        })
        .collect();
    let m = DirectSum::matrix(&src, &tgt, &entries);
    Ok((src, tgt, m))
}

/// Whether `g` factors as `g = f ∘ h` for some `h` (with `g`, `f` sharing a target).
pub fn factor_through(f: &Morphism, g: &Morphism) -> Option<Morphism> {
    // unknown h: g.source -> f.source, vertexwise f_v h_v = g_v plus commutativity
    let hs = hom_basis(g.source(), f.source()).ok()?;
    if hs.dim() == 0 {
        return g.is_zero().then(|| Morphism::zero(g.source(), f.source()));
    }
    let field = f.source.field();
    let cols: Vec<Vec<Scalar>> = hs.basis().iter().map(|h| f.compose(h).flatten()).collect();
    let n = cols.first().map_or(0, Vec::len);
    let mut a = Mat::zeros(field, n, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            a.set(i, j, x.clone());
        }
    }
    let x = a.solve(&g.flatten()).ok()??;
    Some(hs.element(&x))
}
