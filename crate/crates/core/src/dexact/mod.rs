//! d-exact sequences, d-kernels, resolutions and relative structures.

mod family;
mod resolution;

use std::sync::Arc;

use crate::algebra::{injective_module, projective_module};
use crate::approx::{minimal_right_approximation, right_approximation, AddSubcategory, Approximation};
use crate::error::{Error, Result};
use crate::exactla::{Mat, Scalar};
use crate::repmod::{decompose_pieces, factor_through, format_dims, hom_basis, kernel, Catalog, Morphism, Representation};

pub use family::{enumerate_family, enumerate_left_family, FamilyOptions};
pub use resolution::{certify_dct, projective_resolution, t_resolution, DctReport, TResolution};

/// A complex `A_{d+1} -> ... -> A_1 -> A_0`.
#[derive(Clone, Debug)]
pub struct DSequence {
    d: usize,
    /// `objects[i] = A_i`
    objects: Vec<Representation>,
    /// `maps[i] = ∂_{i+1}: A_{i+1} -> A_i`
    maps: Vec<Morphism>,
    /// Catalog indices of the summands of `A_i`, when known.
    blocks: Vec<Option<Vec<usize>>>,
    pub label: String,
}

impl DSequence {
    pub fn new(d: usize, objects: Vec<Representation>, maps: Vec<Morphism>) -> Result<DSequence> {
        if d == 0 {
            return Err(Error::InvalidSequence("d must be positive".into()));
        }
        if objects.len() != d + 2 || maps.len() != d + 1 {
            return Err(Error::InvalidSequence(format!(
                "a {d}-sequence has {} objects and {} maps",
                d + 2,
                d + 1
            )));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.source().dims() != objects[i + 1].dims() || m.target().dims() != objects[i].dims() {
                return Err(Error::InvalidSequence(format!("map {} has the wrong ends", i + 1)));
            }
        }
        for i in 1..maps.len() {
            if !maps[i - 1].compose(&maps[i]).is_zero() {
                return Err(Error::InvalidSequence(format!("composite of maps {} and {} is nonzero", i + 1, i)));
            }
        }
        let n = objects.len();
        Ok(DSequence {
            d,
            objects,
            maps,
            blocks: vec![None; n],
            label: String::new(),
        })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> DSequence {
        self.label = label.into();
        self
    }

    pub(crate) fn set_blocks(&mut self, i: usize, blocks: Vec<usize>) {
        self.blocks[i] = Some(blocks);
    }

    /// Fills in summand data for the objects that lack it.
    pub fn fill_blocks(&mut self, ambient: &Ambient) -> Result<()> {
        for i in 0..self.objects.len() {
            if self.blocks[i].is_none() {
                let b = ambient
                    .blocks_of(&self.objects[i])?
                    .ok_or_else(|| Error::UnknownSummand(self.objects[i].dims().to_vec()))?;
                self.blocks[i] = Some(b);
            }
        }
        Ok(())
    }

    pub fn blocks(&self, i: usize) -> Option<&[usize]> {
        self.blocks[i].as_deref()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `A_i` for `0 <= i <= d + 1`.
    pub fn object(&self, i: usize) -> &Representation {
        &self.objects[i]
    }

    pub fn objects(&self) -> &[Representation] {
        &self.objects
    }

    /// `∂_i: A_i -> A_{i-1}` for `1 <= i <= d + 1`.
    pub fn differential(&self, i: usize) -> &Morphism {
        &self.maps[i - 1]
    }

    pub fn deflation(&self) -> &Morphism {
        &self.maps[0]
    }

    pub fn inflation(&self) -> &Morphism {
        &self.maps[self.d]
    }

    /// Zero-padded `A = A -> 0 -> ... -> 0`, placed at the top or the bottom.
    pub fn padded_identity(d: usize, a: &Representation, at_top: bool) -> DSequence {
        let zero = Representation::zero(a.algebra());
        let mut objects = vec![zero.clone(); d + 2];
        let (hi, lo) = if at_top { (d + 1, d) } else { (1, 0) };
        objects[hi] = a.clone();
        objects[lo] = a.clone();
        let maps = (0..=d)
            .map(|i| {
                if i == lo {
                    Morphism::identity(a)
                } else {
                    Morphism::zero(&objects[i + 1], &objects[i])
                }
            })
            .collect();
        DSequence::new(d, objects, maps).expect("padded identity is a complex")
    }

    pub fn describe(&self, catalog: &Catalog) -> String {
        let names: Vec<String> = (0..self.objects.len())
            .rev()
            .map(|i| match &self.blocks[i] {
                Some(b) if b.is_empty() => "0".to_string(),
                Some(b) => b.iter().map(|&k| catalog.label(k)).collect::<Vec<_>>().join("+"),
                None => format_dims(self.objects[i].dims()),
            })
            .collect();
        names.join(" -> ")
    }
}

#[derive(Clone, Debug)]
pub enum AmbientKind {
    /// mod Λ with all short exact sequences (d = 1).
    ModuleCategory,
    /// add(T) for a d-cluster-tilting T, with all d-exact sequences.
    DClusterTilting { t: AddSubcategory },
    /// A d-torsion class U inside the d-abelian category add(T).
    DTorsionClass { u: AddSubcategory, t: AddSubcategory },
}

/// The ambient d-exact category, with the objects on which Yoneda exactness is tested.
#[derive(Clone, Debug)]
pub struct Ambient {
    catalog: Arc<Catalog>,
    kind: AmbientKind,
    d: usize,
    left_tests: Vec<Representation>,
    right_tests: Vec<Representation>,
}

/// Which right approximations a d-kernel is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMode {
    Minimal,
    /// Unminimized evaluation maps; gives non-minimal but still left d-exact completions.
    Raw,
}

impl Ambient {
    pub fn module_category(catalog: &Arc<Catalog>) -> Ambient {
        let alg = catalog.algebra();
        let n = alg.n_vertices();
        Ambient {
            catalog: catalog.clone(),
            kind: AmbientKind::ModuleCategory,
            d: 1,
            left_tests: (0..n).map(|v| projective_module(alg, v)).collect(),
            right_tests: (0..n).map(|v| injective_module(alg, v)).collect(),
        }
    }

    pub fn d_cluster_tilting(t: &AddSubcategory, d: usize) -> Ambient {
        let tests: Vec<Representation> = (0..t.members().len()).map(|k| t.module(k).clone()).collect();
        Ambient {
            catalog: t.catalog().clone(),
            kind: AmbientKind::DClusterTilting { t: t.clone() },
            d,
            left_tests: tests.clone(),
            right_tests: tests,
        }
    }

    pub fn d_torsion_class(u: &AddSubcategory, t: &AddSubcategory, d: usize) -> Ambient {
        let tests: Vec<Representation> = (0..u.members().len()).map(|k| u.module(k).clone()).collect();
        Ambient {
            catalog: u.catalog().clone(),
            kind: AmbientKind::DTorsionClass {
                u: u.clone(),
                t: t.clone(),
            },
            d,
            left_tests: tests.clone(),
            right_tests: tests,
        }
    }

    pub fn catalog(&self) -> &Arc<Catalog> {
        &self.catalog
    }

    pub fn kind(&self) -> &AmbientKind {
        &self.kind
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_module_category(&self) -> bool {
        matches!(self.kind, AmbientKind::ModuleCategory)
    }

    fn subcategory(&self) -> Option<&AddSubcategory> {
        match &self.kind {
            AmbientKind::ModuleCategory => None,
            AmbientKind::DClusterTilting { t } => Some(t),
            AmbientKind::DTorsionClass { u, .. } => Some(u),
        }
    }

    /// Catalog indices of the indecomposables of the ambient category.
    pub fn objects(&self) -> Vec<usize> {
        match self.subcategory() {
            None => (0..self.catalog.len()).collect(),
            Some(s) => s.members().to_vec(),
        }
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            AmbientKind::ModuleCategory => "mod".into(),
            AmbientKind::DClusterTilting { t } => format!("{} (d={})", t.describe(), self.d),
            AmbientKind::DTorsionClass { u, t } => format!("{} in {} (d={})", u.describe(), t.describe(), self.d),
        }
    }

    /// Catalog indices of the summands of `m`, or `None` if a summand is not in the catalog.
    pub fn blocks_of(&self, m: &Representation) -> Result<Option<Vec<usize>>> {
        if let Some(b) = self.catalog.blocks_by_hom(m)? {
            return Ok(Some(b));
        }
        let mut out = Vec::new();
        for p in decompose_pieces(m)? {
            match self.catalog.identify(&p.module)? {
                Some(i) => out.push(i),
                None => return Ok(None),
            }
        }
        out.sort_unstable();
        Ok(Some(out))
    }

    fn blocks_in(&self, blocks: &[usize]) -> bool {
        match self.subcategory() {
            None => true,
            Some(s) => blocks.iter().all(|&b| s.contains(b)),
        }
    }

    pub fn contains(&self, m: &Representation) -> Result<bool> {
        if self.subcategory().is_none() {
            return Ok(true);
        }
        Ok(self.blocks_of(m)?.is_some_and(|b| self.blocks_in(&b)))
    }

    fn check_objects(&self, s: &DSequence) -> Result<()> {
        if s.d != self.d {
            return Err(Error::InvalidSequence(format!(
                "sequence has d = {}, ambient has d = {}",
                s.d, self.d
            )));
        }
        if self.subcategory().is_none() {
            return Ok(());
        }
        for (i, a) in s.objects.iter().enumerate() {
            let inside = match &s.blocks[i] {
                Some(b) => self.blocks_in(b),
                None => self.contains(a)?,
            };
            if !inside {
                return Err(Error::ObjectOutsideSubcategory(a.dims().to_vec()));
            }
        }
        Ok(())
    }

    /// Admissible deflations: epimorphisms in mod Λ; otherwise morphisms whose
    /// d-kernel completion is d-exact.
    pub fn is_deflation(&self, f: &Morphism) -> Result<bool> {
        if self.is_module_category() {
            return Ok(f.is_epi());
        }
        let s = match d_kernel(f, self, KernelMode::Minimal) {
            Ok(s) => s,
            Err(Error::NotInSubcategory(_)) | Err(Error::ApproximationNotMonic(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        is_d_exact(&s, self)
    }
}

fn flat_rank(field: crate::exactla::Field, vectors: &[Vec<Scalar>]) -> usize {
    let len = vectors.first().map_or(0, Vec::len);
    crate::exactla::rank_of_vectors(field, len, vectors)
}

/// Rank of `Hom(X, f): Hom(X, A) -> Hom(X, B)` and `dim Hom(X, A)`.
fn post_rank(x: &Representation, f: &Morphism) -> Result<(usize, usize)> {
    let h = hom_basis(x, f.source())?;
    let images: Vec<Vec<Scalar>> = h.basis().iter().map(|b| f.compose(b).flatten()).collect();
    Ok((h.dim(), flat_rank(x.field(), &images)))
}

/// Rank of `Hom(f, X): Hom(B, X) -> Hom(A, X)` and `dim Hom(B, X)`.
fn pre_rank(f: &Morphism, x: &Representation) -> Result<(usize, usize)> {
    let h = hom_basis(f.target(), x)?;
    let images: Vec<Vec<Scalar>> = h.basis().iter().map(|b| b.compose(f).flatten()).collect();
    Ok((h.dim(), flat_rank(x.field(), &images)))
}

fn vertex_ranks(f: &Morphism) -> Vec<usize> {
    f.vertex_maps().iter().map(Mat::rank).collect()
}

/// `0 -> Hom(X, A_{d+1}) -> ... -> Hom(X, A_0)` is exact except possibly at `A_0`.
pub fn left_exact_on(s: &DSequence, tests: &[Representation]) -> Result<bool> {
    let d = s.d;
    for x in tests {
        // r[i] = rank of Hom(X, ∂_i), h[i] = dim Hom(X, A_i)
        let mut r = vec![0usize; d + 3];
        let mut h = vec![0usize; d + 2];
        for i in 1..=d + 1 {
            let (dim, rank) = post_rank(x, s.differential(i))?;
            h[i] = dim;
            r[i] = rank;
        }
        if (1..=d + 1).any(|i| h[i] - r[i] != r[i + 1]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `0 -> Hom(A_0, X) -> ... -> Hom(A_{d+1}, X)` is exact except possibly at `A_{d+1}`.
pub fn right_exact_on(s: &DSequence, tests: &[Representation]) -> Result<bool> {
    let d = s.d;
    for x in tests {
        // r[i] = rank of Hom(∂_i, X), h[i] = dim Hom(A_i, X)
        let mut r = vec![0usize; d + 2];
        let mut h = vec![0usize; d + 2];
        for i in 1..=d + 1 {
            let (dim, rank) = pre_rank(s.differential(i), x)?;
            h[i - 1] = dim;
            r[i] = rank;
        }
        if (0..=d).any(|i| h[i] - r[i + 1] != r[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_left_d_exact(s: &DSequence, ambient: &Ambient) -> Result<bool> {
    ambient.check_objects(s)?;
    if ambient.is_module_category() {
        // Hom(P_v, -) is evaluation at v
        let d = s.d;
        let n = ambient.catalog.algebra().n_vertices();
        let ranks: Vec<Vec<usize>> = (1..=d + 1).map(|i| vertex_ranks(s.differential(i))).collect();
        for v in 0..n {
            for i in 1..=d + 1 {
                let out = ranks[i - 1][v];
                let inc = if i <= d { ranks[i][v] } else { 0 };
                if s.object(i).dims()[v] - out != inc {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    left_exact_on(s, &ambient.left_tests)
}

pub fn is_right_d_exact(s: &DSequence, ambient: &Ambient) -> Result<bool> {
    ambient.check_objects(s)?;
    if ambient.is_module_category() {
        // Hom(-, I_v) is the dual of evaluation at v
        let d = s.d;
        let n = ambient.catalog.algebra().n_vertices();
        let ranks: Vec<Vec<usize>> = (1..=d + 1).map(|i| vertex_ranks(s.differential(i))).collect();
        for v in 0..n {
            for i in 0..=d {
                let out = ranks[i][v];
                let inc = if i >= 1 { ranks[i - 1][v] } else { 0 };
                if s.object(i).dims()[v] - out != inc {
                    return Ok(false);
                }
            }
        }
        return Ok(true);
    }
    right_exact_on(s, &ambient.right_tests)
}

pub fn is_d_exact(s: &DSequence, ambient: &Ambient) -> Result<bool> {
    Ok(is_left_d_exact(s, ambient)? && is_right_d_exact(s, ambient)?)
}

fn approximate(x: &AddSubcategory, c: &Representation, mode: KernelMode) -> Result<Approximation> {
    match mode {
        KernelMode::Minimal => minimal_right_approximation(x, c),
        KernelMode::Raw => right_approximation(x, c),
    }
}

/// d-kernel in add(T) by iterated kernels and right T-approximations.
fn dct_kernel(f: &Morphism, t: &AddSubcategory, d: usize, ambient: &Ambient, mode: KernelMode) -> Result<DSequence> {
    let mut objects = vec![f.target().clone(), f.source().clone()];
    let mut maps = vec![f.clone()];
    let mut blocks: Vec<Option<Vec<usize>>> = vec![None, None];
    let (mut k, mut iota) = kernel(f);
    for _ in 1..d {
        let a = approximate(t, &k, mode)?;
        maps.push(iota.compose(&a.map));
        objects.push(a.source.sum.clone());
        blocks.push(Some(a.members.clone()));
        let (k2, iota2) = kernel(&a.map);
        k = k2;
        iota = iota2;
    }
    let last = ambient.blocks_of(&k)?;
    match last {
        Some(b) if b.iter().all(|&x| t.contains(x)) => blocks.push(Some(b)),
        _ => return Err(Error::NotInSubcategory(k.dims().to_vec())),
    }
    objects.push(k);
    maps.push(iota);
    let mut s = DSequence::new(d, objects, maps)?;
    for (i, b) in blocks.into_iter().enumerate() {
        if let Some(b) = b {
            s.set_blocks(i, b);
        }
    }
    Ok(s)
}

/// Completes `f` to a left d-exact sequence ending in `f`.
pub fn d_kernel(f: &Morphism, ambient: &Ambient, mode: KernelMode) -> Result<DSequence> {
    match &ambient.kind {
        AmbientKind::ModuleCategory => {
            let (k, incl) = kernel(f);
            DSequence::new(1, vec![f.target().clone(), f.source().clone(), k], vec![f.clone(), incl])
        }
        AmbientKind::DClusterTilting { t } => dct_kernel(f, t, ambient.d, ambient, mode),
        AmbientKind::DTorsionClass { u, t } => {
            let outer = Ambient::d_cluster_tilting(t, ambient.d);
            let b = dct_kernel(f, t, ambient.d, &outer, KernelMode::Minimal)?;
            let d = ambient.d;
            let mut objects = vec![f.target().clone(), f.source().clone()];
            let mut maps = vec![f.clone()];
            let mut blocks: Vec<Option<Vec<usize>>> = vec![None, None];
            // a[i]: U_i -> B_i, with a[1] the identity
            let mut prev = Morphism::identity(f.source());
            for i in 2..=d + 1 {
                let bi = b.object(i);
                let a = minimal_right_approximation(u, bi)?;
                if !a.map.is_mono() {
                    return Err(Error::ApproximationNotMonic(bi.dims().to_vec()));
                }
                let fa = b.differential(i).compose(&a.map);
                let g = factor_through(&prev, &fa)
                    .ok_or_else(|| Error::LiftFailed(format!("no lift through the approximation at degree {i}")))?;
                maps.push(g.with_ends(&a.source.sum, &objects[i - 1]));
                objects.push(a.source.sum.clone());
                blocks.push(Some(a.members.clone()));
                prev = a.map;
            }
            let mut s = DSequence::new(d, objects, maps)?;
            for (i, b) in blocks.into_iter().enumerate() {
                if let Some(b) = b {
                    s.set_blocks(i, b);
                }
            }
            Ok(s)
        }
    }
}

/// Membership in the relative structure: `Hom(X_j, A_1) -> Hom(X_j, A_0)` is onto for every member.
pub fn is_in_relative_structure(s: &DSequence, x: &AddSubcategory, ambient: &Ambient) -> Result<bool> {
    if !is_d_exact(s, ambient)? {
        return Err(Error::NotAdmissible);
    }
    deflation_onto_from(s.deflation(), x)
}

/// `Hom(X_j, f)` is surjective for every member `X_j`.
pub(crate) fn deflation_onto_from(f: &Morphism, x: &AddSubcategory) -> Result<bool> {
    for k in 0..x.members().len() {
        let xm = x.module(k);
        let (_, rank) = post_rank(xm, f)?;
        if rank != hom_basis(xm, f.target())?.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}
