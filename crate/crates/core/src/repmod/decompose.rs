//! Krull-Schmidt decomposition by Fitting splitting.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactla::scalar::rational_roots;
use crate::exactla::{Mat, Scalar};

use super::hom::{hom_basis, HomSpace};
use super::iso::{is_isomorphic, IsoOptions};
use super::{image, kernel, Morphism, Representation};

/// An indecomposable summand `module` of `M` with `proj ∘ incl = id`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub module: Representation,
    pub incl: Morphism,
    pub proj: Morphism,
}

impl Piece {
    /// The idempotent `incl ∘ proj` of `M` cutting out this summand.
    pub fn idempotent(&self) -> Morphism {
        self.incl.compose(&self.proj)
    }
}

/// Pieces grouped by isomorphism class.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Representation,
    pub multiplicity: usize,
    pub pieces: Vec<Piece>,
}

fn matrix_of_columns(field: crate::exactla::Field, len: usize, cols: &[Vec<Scalar>]) -> Mat {
    let mut a = Mat::zeros(field, len, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            if !x.is_zero() {
                a.set(i, j, x.clone());
            }
        }
    }
    a
}

/// Minimal polynomial of an endomorphism, constant term first, monic.
fn minimal_polynomial(f: &Morphism) -> Vec<Scalar> {
    let field = f.source().field();
    let len = f.flatten().len();
    let id = Morphism::identity(f.source());
    let mut powers = vec![id.flatten()];
    let mut cur = id;
    loop {
        cur = f.compose(&cur);
        let v = cur.flatten();
        let a = matrix_of_columns(field, len, &powers);
        if let Some(c) = a.solve(&v).expect("shapes agree") {
            let mut poly: Vec<Scalar> = c.iter().map(|x| -x).collect();
            poly.push(field.one());
            return poly;
        }
        powers.push(v);
    }
}

fn power(f: &Morphism, e: usize) -> Morphism {
    let maps = f.vertex_maps().iter().map(|m| m.pow(e)).collect();
    Morphism::new_unchecked(f.source().clone(), f.target().clone(), maps)
}

enum Analysis {
    /// `h = (f - λ)^n` is neither zero nor invertible.
    Split(Morphism),
    /// `f - λ` is nilpotent.
    Local(Scalar),
    Unknown,
}

fn analyze(f: &Morphism) -> Analysis {
    let m = f.source();
    let field = m.field();
    let roots = rational_roots(&minimal_polynomial(f), field);
    let Some(lambda) = roots.first() else {
        return Analysis::Unknown;
    };
    let g = f.sub(&Morphism::identity(m).scale(lambda));
    let h = power(&g, m.total_dim());
    if h.is_zero() {
        Analysis::Local(lambda.clone())
    } else {
        Analysis::Split(h)
    }
}

/// `M = ker h ⊕ im h` for a Fitting-stable endomorphism `h`.
fn fitting_split(h: &Morphism) -> (Piece, Piece) {
    let m = h.source();
    let field = m.field();
    let (k, k_incl) = kernel(h);
    let (i, _, i_incl) = image(h);
    let mut pk = Vec::new();
    let mut pi = Vec::new();
    for v in 0..m.dims().len() {
        let phi = Mat::hstack(field, m.dims()[v], &[k_incl.vertex_map(v), i_incl.vertex_map(v)]);
        let inv = phi.inverse().expect("Fitting decomposition");
        let kd = k.dims()[v];
        pk.push(inv.block(0, 0, kd, m.dims()[v]));
        pi.push(inv.block(kd, 0, i.dims()[v], m.dims()[v]));
    }
    let kp = Morphism::new_unchecked(m.clone(), k.clone(), pk);
    let ip = Morphism::new_unchecked(m.clone(), i.clone(), pi);
    (
        Piece {
            module: k,
            incl: k_incl,
            proj: kp,
        },
        Piece {
            module: i,
            incl: i_incl,
            proj: ip,
        },
    )
}

/// End(M) = k·1 + N with N a nilpotent subalgebra certifies that End(M) is local.
fn local_certificate(end: &HomSpace, nilpotents: &[Morphism]) -> bool {
    let field = end.source().field();
    let vecs: Vec<Vec<Scalar>> = nilpotents.iter().map(Morphism::flatten).collect();
    let len = end.source().dims().iter().map(|d| d * d).sum();
    if vecs.is_empty() {
        return true;
    }
    let span = matrix_of_columns(field, len, &vecs).column_space_basis();
    if span.cols() == 0 {
        return true;
    }
    let left = span.left_inverse().expect("independent columns");
    let in_span = |x: &[Scalar]| span.mul_vec(&left.mul_vec(x)) == x;
    let basis: Vec<Morphism> = (0..span.cols())
        .map(|c| Morphism::from_flat(end.source(), end.target(), &span.col(c)))
        .collect();
    for a in &basis {
        for b in &basis {
            if !in_span(&a.compose(b).flatten()) {
                return false;
            }
        }
    }
    // the chain N ⊇ N² ⊇ ... must reach zero
    let mut layer = basis.clone();
    // the layers shrink strictly, so this terminates
    let mut dim = layer.len();
    loop {
        let prods: Vec<Vec<Scalar>> = basis
            .iter()
            .flat_map(|a| layer.iter().map(move |w| a.compose(w).flatten()))
            .collect();
        let next = matrix_of_columns(field, len, &prods).column_space_basis();
        if next.cols() == 0 {
            return true;
        }
        if next.cols() >= dim {
            return false;
        }
        dim = next.cols();
        layer = (0..next.cols())
            .map(|c| Morphism::from_flat(end.source(), end.target(), &next.col(c)))
            .collect();
    }
}

fn find_split(m: &Representation, seed: u64) -> Result<Option<Morphism>> {
    let end = hom_basis(m, m)?;
    if end.dim() <= 1 {
        return Ok(None);
    }
    let field = m.field();
    let basis = end.basis();
    let mut nilpotents = Vec::new();
    let mut all_local = true;
    for f in basis {
        match analyze(f) {
            Analysis::Split(h) => return Ok(Some(h)),
            Analysis::Local(l) => nilpotents.push(f.sub(&Morphism::identity(m).scale(&l))),
            Analysis::Unknown => all_local = false,
        }
    }
    if all_local && local_certificate(&end, &nilpotents) {
        return Ok(None);
    }
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            for c in [1, -1, 2] {
                let f = basis[i].add(&basis[j].scale(&field.from_i64(c)));
                if let Analysis::Split(h) = analyze(&f) {
                    return Ok(Some(h));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..16 {
        let c: Vec<Scalar> = (0..basis.len()).map(|_| field.from_i64(rng.gen_range(-5..=5))).collect();
        if let Analysis::Split(h) = analyze(&end.element(&c)) {
            return Ok(Some(h));
        }
    }
    Err(Error::DecompositionInconclusive(m.dims().to_vec()))
}

/// Indecomposable summands with explicit inclusions and projections.
pub fn decompose_pieces(m: &Representation) -> Result<Vec<Piece>> {
    if m.is_zero() {
        return Ok(Vec::new());
    }
    match find_split(m, 0xdec0)? {
        None => Ok(vec![Piece {
            module: m.clone(),
            incl: Morphism::identity(m),
            proj: Morphism::identity(m),
        }]),
        Some(h) => {
            let (a, b) = fitting_split(&h);
            let mut out = Vec::new();
            for part in [a, b] {
                for p in decompose_pieces(&part.module)? {
                    out.push(Piece {
                        module: p.module,
                        incl: part.incl.compose(&p.incl),
                        proj: p.proj.compose(&part.proj),
                    });
                }
            }
            Ok(out)
        }
    }
}

/// Decomposition grouped into isomorphism classes, in order of first appearance.
pub fn decompose(m: &Representation, opts: &IsoOptions) -> Result<Vec<Summand>> {
    let mut out: Vec<Summand> = Vec::new();
    for p in decompose_pieces(m)? {
        let mut placed = false;
        for s in out.iter_mut() {
            if s.module.dims() == p.module.dims() && is_isomorphic(&s.module, &p.module, opts)?.is_some() {
                s.multiplicity += 1;
                s.pieces.push(p.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            out.push(Summand {
                module: p.module.clone(),
                multiplicity: 1,
                pieces: vec![p],
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::projective_module;
    use crate::repmod::direct_sum;
    use crate::samples;

    #[test]
    fn decompose_examples_a2() {
        let a2 = samples::a2();
        let o = IsoOptions::default();
        let p1 = projective_module(&a2, 0);
        let s1 = Representation::simple(&a2, 0);
        let m = direct_sum(&a2, &[p1.clone(), s1.clone(), s1.clone()]).unwrap().sum;
        let d = decompose(&m, &o).unwrap();
        assert_eq!(d.len(), 2);
        let mut got: Vec<(Vec<usize>, usize)> = d.iter().map(|s| (s.module.dims().to_vec(), s.multiplicity)).collect();
        got.sort();
        assert_eq!(got, vec![(vec![1, 0], 2), (vec![1, 1], 1)]);

        // idempotents are orthogonal and sum to the identity
        let pieces: Vec<&Piece> = d.iter().flat_map(|s| &s.pieces).collect();
        let mut total = Morphism::zero(&m, &m);
        for (i, a) in pieces.iter().enumerate() {
            total = total.add(&a.idempotent());
            for (j, b) in pieces.iter().enumerate() {
                let prod = a.proj.compose(&b.incl);
                if i == j {
                    assert!(prod.is_iso());
                } else {
                    assert!(prod.is_zero());
                }
            }
        }
        assert_eq!(total, Morphism::identity(&m));

        assert_eq!(decompose(&s1, &o).unwrap().len(), 1);
        assert!(decompose(&Representation::zero(&a2), &o).unwrap().is_empty());
    }
}
