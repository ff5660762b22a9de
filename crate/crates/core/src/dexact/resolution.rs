use serde::Serialize;

use crate::approx::{minimal_right_approximation, AddSubcategory};
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::repmod::{hom_basis, kernel, Morphism, Representation};

use super::Ambient;

/// `0 -> T_n -> ... -> T_0 -> C -> 0`, each step a minimal right approximation of the previous syzygy.
#[derive(Clone, Debug)]
pub struct TResolution {
    pub target: Representation,
    /// `terms[i] = T_i`
    pub terms: Vec<Representation>,
    /// Catalog indices of the summands of each `T_i`.
    pub blocks: Vec<Vec<usize>>,
    /// `maps[0]: T_0 -> C`, `maps[i]: T_i -> T_{i-1}`
    pub maps: Vec<Morphism>,
}

impl TResolution {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Resolves `c` by at most `max_terms` minimal approximations; returns the last syzygy too.
fn resolve(c: &Representation, x: &AddSubcategory, max_terms: usize) -> Result<(TResolution, Representation)> {
    let mut res = TResolution {
        target: c.clone(),
        terms: Vec::new(),
        blocks: Vec::new(),
        maps: Vec::new(),
    };
    let mut syzygy = c.clone();
    let mut incl = Morphism::identity(c);
    while !syzygy.is_zero() && res.terms.len() < max_terms {
        let a = minimal_right_approximation(x, &syzygy)?;
        if !a.map.is_epi() {
            return Err(Error::NotGenerating(syzygy.dims().to_vec()));
        }
        res.maps.push(incl.compose(&a.map));
        res.terms.push(a.source.sum.clone());
        res.blocks.push(a.members.clone());
        let (k, i) = kernel(&a.map);
        syzygy = k;
        incl = i;
    }
    Ok((res, syzygy))
}

/// A T-resolution with at most `d + 1` terms; a nonzero syzygy after that is an error.
pub fn t_resolution(c: &Representation, t: &AddSubcategory, d: usize) -> Result<TResolution> {
    let (res, syzygy) = resolve(c, t, d + 1)?;
    if !syzygy.is_zero() {
        return Err(Error::ResolutionTooLong {
            steps: d + 1,
            syzygy: syzygy.dims().to_vec(),
        });
    }
    Ok(res)
}

/// The first `terms` steps of a minimal projective resolution (fewer if it stops).
pub fn projective_resolution(c: &Representation, proj: &AddSubcategory, terms: usize) -> Result<TResolution> {
    Ok(resolve(c, proj, terms)?.0)
}

fn precompose_rank(f: &Morphism, x: &Representation) -> Result<usize> {
    let h = hom_basis(f.target(), x)?;
    let images: Vec<Vec<Scalar>> = h.basis().iter().map(|b| b.compose(f).flatten()).collect();
    let len = images.first().map_or(0, Vec::len);
    Ok(crate::exactla::rank_of_vectors(x.field(), len, &images))
}

/// `dim Ext^i(a, x)` for `1 <= i <= top` from a projective resolution of `a`.
pub fn ext_dims(a: &Representation, x: &Representation, proj: &AddSubcategory, top: usize) -> Result<Vec<usize>> {
    let res = projective_resolution(a, proj, top + 2)?;
    // complex Hom(P_0, X) -> Hom(P_1, X) -> ..., with r[i] the rank of Hom(P_{i-1} <- P_i, X)
    let n = res.terms.len();
    let mut h = Vec::with_capacity(n);
    for p in &res.terms {
        h.push(hom_basis(p, x)?.dim());
    }
    let mut r = vec![0usize; n + 1];
    for i in 1..n {
        r[i] = precompose_rank(&res.maps[i], x)?;
    }
    Ok((1..=top)
        .map(|i| if i < n { h[i] - r[i + 1] - r[i] } else { 0 })
        .collect())
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DctReport {
    pub subcategory: String,
    pub d: usize,
    /// (a) projectives and injectives missing from T.
    pub missing_proj_inj: Vec<String>,
    /// (b) nonvanishing `Ext^i(T_a, T_b)` as `(i, a, b, dim)`.
    pub ext_failures: Vec<(usize, String, String, usize)>,
    /// (c) objects without a resolution `0 -> T_{d-1} -> ... -> T_0 -> C -> 0`.
    pub resolution_failures: Vec<String>,
}

impl DctReport {
    pub fn passes(&self) -> bool {
        self.missing_proj_inj.is_empty() && self.ext_failures.is_empty() && self.resolution_failures.is_empty()
    }

    pub fn failed_items(&self) -> Vec<char> {
        let mut out = Vec::new();
        if !self.missing_proj_inj.is_empty() {
            out.push('a');
        }
        if !self.ext_failures.is_empty() {
            out.push('b');
        }
        if !self.resolution_failures.is_empty() {
            out.push('c');
        }
        out
    }
}

/// Desk-scale certificate that `t` is d-cluster-tilting in mod Λ.
pub fn certify_dct(t: &AddSubcategory, d: usize, ambient: &Ambient) -> Result<DctReport> {
    if !ambient.is_module_category() {
        return Err(Error::Config("certification runs inside the module category".into()));
    }
    let catalog = ambient.catalog();
    let mut report = DctReport {
        subcategory: t.describe(),
        d,
        ..DctReport::default()
    };
    let mut pi = catalog.projectives()?;
    pi.extend(catalog.injectives()?);
    pi.sort_unstable();
    pi.dedup();
    for k in pi {
        if !t.contains(k) {
            report.missing_proj_inj.push(catalog.label(k).to_string());
        }
    }
    let proj = AddSubcategory::projectives(catalog)?;
    if d >= 2 {
        for &a in t.members() {
            for &b in t.members() {
                let dims = ext_dims(catalog.module(a), catalog.module(b), &proj, d - 1)?;
                for (i, &e) in dims.iter().enumerate() {
                    if e != 0 {
                        report
                            .ext_failures
                            .push((i + 1, catalog.label(a).to_string(), catalog.label(b).to_string(), e));
                    }
                }
            }
        }
    }
    for k in ambient.objects() {
        let ok = match resolve(catalog.module(k), t, d) {
            Ok((_, syzygy)) => syzygy.is_zero(),
            Err(Error::NotGenerating(_)) => false,
            Err(e) => return Err(e),
        };
        if !ok {
            report.resolution_failures.push(catalog.label(k).to_string());
        }
    }
    Ok(report)
}
