use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::{Field, Scalar};

use super::hom::{hom_basis, HomSpace};
use super::{Morphism, Representation};

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    /// Random and small searches draw coefficients from `[-coeff_bound, coeff_bound]`.
    pub coeff_bound: i64,
    pub random_trials: usize,
    /// Largest grid searched exhaustively.
    pub exhaustive_limit: usize,
    pub seed: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions {
            coeff_bound: 3,
            random_trials: 24,
            exhaustive_limit: 4096,
            seed: 0x5eed,
        }
    }
}

/// Cheap isomorphism invariants; different invariants certify non-isomorphism.
fn invariants(m: &Representation) -> Result<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let alg = m.algebra();
    let mut socle = Vec::new();
    let mut top = Vec::new();
    for v in 0..alg.n_vertices() {
        let s = Representation::simple(alg, v);
        socle.push(hom_basis(&s, m)?.dim());
        top.push(hom_basis(m, &s)?.dim());
    }
    Ok((m.rank_profile(), socle, top))
}

/// Values of a grid of size at least `size`, as field elements.
fn grid(field: Field, bound: i64, size: usize) -> Vec<Scalar> {
    let s = (2 * bound as usize + 1).max(size);
    match field {
        Field::Prime(p) if (p as usize) <= s => (0..p as i64).map(|v| field.from_i64(v)).collect(),
        _ => {
            let lo = -((s / 2) as i64);
            (0..s as i64).map(|k| field.from_i64(lo + k)).collect()
        }
    }
}

/// Searches the span of a hom basis for an invertible element.
pub(crate) fn find_invertible(
    h: &HomSpace,
    total_dim: usize,
    opts: &IsoOptions,
    is_good: impl Fn(&Morphism) -> bool,
) -> Result<Option<Morphism>> {
    let field = h.source().field();
    search_span(field, h.basis(), |c| h.element(c), total_dim, opts, is_good)
}

/// Searches the span of `basis` for a good element: basis elements, random
/// combinations, then an exhaustive grid when it is small enough. `degree` bounds
/// the degree of the polynomial whose nonvanishing makes an element good.
pub(crate) fn search_span<T: Clone>(
    field: Field,
    basis: &[T],
    combine: impl Fn(&[Scalar]) -> T,
    degree: usize,
    opts: &IsoOptions,
    is_good: impl Fn(&T) -> bool,
) -> Result<Option<T>> {
    let k = basis.len();
    if k == 0 {
        return Ok(None);
    }
    for b in basis {
        if is_good(b) {
            return Ok(Some(b.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for _ in 0..opts.random_trials {
        let c: Vec<Scalar> = (0..k)
            .map(|_| field.from_i64(rng.gen_range(-opts.coeff_bound..=opts.coeff_bound)))
            .collect();
        let f = combine(&c);
        if is_good(&f) {
            return Ok(Some(f));
        }
    }
    // The determinant is a polynomial of degree at most `degree` in each coefficient,
    // so a nonvanishing point exists on any grid with more than `degree` values per axis.
    let values = grid(field, opts.coeff_bound, degree + 1);
    let s = values.len();
    let Some(count) = (0..k).try_fold(1usize, |acc, _| acc.checked_mul(s)) else {
        return Err(Error::SearchExhausted(format!("{s}^{k} grid too large")));
    };
    if count > opts.exhaustive_limit {
        return Err(Error::SearchExhausted(format!(
            "span of dimension {k}, grid of {count} points exceeds the limit {}",
            opts.exhaustive_limit
        )));
    }
    let mut idx = vec![0usize; k];
    loop {
        let c: Vec<Scalar> = idx.iter().map(|&i| values[i].clone()).collect();
        let f = combine(&c);
        if is_good(&f) {
            return Ok(Some(f));
        }
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(None);
            }
            idx[pos] += 1;
            if idx[pos] < s {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// An explicit isomorphism `m -> n`, or `None` when the modules are certified
/// non-isomorphic. Raises `SearchExhausted` when no verdict was reached.
pub fn is_isomorphic(m: &Representation, n: &Representation, opts: &IsoOptions) -> Result<Option<Morphism>> {
    m.same_algebra(n)?;
    if m.dims() != n.dims() {
        return Ok(None);
    }
    if m == n {
        return Ok(Some(Morphism::identity(m)));
    }
    if invariants(m)? != invariants(n)? {
        return Ok(None);
    }
    let h = hom_basis(m, n)?;
    let back = hom_basis(n, m)?;
    let end_m = hom_basis(m, m)?.dim();
    let end_n = hom_basis(n, n)?.dim();
    if h.dim() != back.dim() || h.dim() != end_m || end_m != end_n {
        return Ok(None);
    }
    find_invertible(&h, m.total_dim(), opts, Morphism::is_iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::projective_module;
    use crate::exactla::Mat;
    use crate::repmod::direct_sum;
    use crate::samples;

    #[test]
    fn iso_examples_a2() {
        let a2 = samples::a2();
        let o = IsoOptions::default();
        let p1 = projective_module(&a2, 0);
        let s1 = Representation::simple(&a2, 0);
        let s2 = Representation::simple(&a2, 1);
        assert!(is_isomorphic(&p1, &p1, &o).unwrap().unwrap().is_identity_like());
        assert!(is_isomorphic(&s1, &s2, &o).unwrap().is_none());
        let sum = direct_sum(&a2, &[s1, s2]).unwrap().sum;
        assert!(is_isomorphic(&p1, &sum, &o).unwrap().is_none());
    }

    #[test]
    fn finds_hidden_isomorphism() {
        let a2 = samples::a2();
        let f = a2.field();
        let p1 = projective_module(&a2, 0);
        let s1 = Representation::simple(&a2, 0);
        let m = direct_sum(&a2, &[p1, s1]).unwrap().sum;
        let g = vec![
            Mat::from_i64(f, &[&[2, 1], &[1, 1]]),
            Mat::from_i64(f, &[&[-1]]),
        ];
        let (n, _) = m.transport(&g).unwrap();
        let iso = is_isomorphic(&m, &n, &IsoOptions::default()).unwrap().unwrap();
        assert!(iso.is_iso());
        assert!(iso.is_valid());
    }

    impl Morphism {
        fn is_identity_like(&self) -> bool {
            self.vertex_maps().iter().all(Mat::is_identity)
        }
    }
}
