use crate::error::Result;
use crate::exactla::{Mat, Scalar};

use super::{Morphism, Representation};

/// A basis of Hom(M, N) together with a coordinate map.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Representation,
    target: Representation,
    basis: Vec<Morphism>,
    /// Left inverse of the matrix whose columns are the flattened basis elements.
    coord: Mat,
}

impl HomSpace {
    pub fn source(&self) -> &Representation {
        &self.source
    }

    pub fn target(&self) -> &Representation {
        &self.target
    }

    pub fn basis(&self) -> &[Morphism] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of a morphism known to lie in this space.
    pub fn coords(&self, f: &Morphism) -> Vec<Scalar> {
        if self.basis.is_empty() {
            return Vec::new();
        }
        self.coord.mul_vec(&f.flatten())
    }

    pub fn element(&self, coeffs: &[Scalar]) -> Morphism {
        assert_eq!(coeffs.len(), self.basis.len(), "coefficient count");
        let mut acc = Morphism::zero(&self.source, &self.target);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(c));
            }
        }
        acc
    }
}

/// Solves the commuting-square system `N(a) f_i = f_j M(a)` for every arrow `a: i -> j`.
pub fn hom_basis(m: &Representation, n: &Representation) -> Result<HomSpace> {
    m.same_algebra(n)?;
    let field = m.field();
    let nv = m.dims.len();
    let mut offsets = Vec::with_capacity(nv);
    let mut unknowns = 0;
    for v in 0..nv {
        offsets.push(unknowns);
        unknowns += n.dims[v] * m.dims[v];
    }
    let var = |v: usize, r: usize, c: usize| offsets[v] + r * m.dims[v] + c;

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for (k, a) in m.alg.quiver().arrows().iter().enumerate() {
        let (i, j) = (a.source, a.target);
        let (ma, na) = (&m.maps[k], &n.maps[k]);
        // entry (p, q) of N(a) f_i - f_j M(a), p in N_j, q in M_i
        for p in 0..n.dims[j] {
            for q in 0..m.dims[i] {
                let mut row = vec![field.zero(); unknowns];
                let mut nonzero = false;
                for t in 0..n.dims[i] {
                    let c = na.get(p, t);
                    if !c.is_zero() {
                        let x = var(i, t, q);
                        row[x] = &row[x] + c;
                        nonzero = true;
                    }
                }
                for t in 0..m.dims[j] {
                    let c = ma.get(t, q);
                    if !c.is_zero() {
                        let x = var(j, p, t);
                        row[x] = &row[x] - c;
                        nonzero = true;
                    }
                }
                if nonzero {
                    rows.push(row);
                }
            }
        }
    }

    let kernel = if rows.is_empty() {
        Mat::identity(field, unknowns)
    } else {
        let sys = Mat::from_scalars(field, rows.len(), unknowns, rows.concat())?;
        sys.kernel_basis()
    };
    let basis: Vec<Morphism> = (0..kernel.cols())
        .map(|c| Morphism::from_flat(m, n, &kernel.col(c)))
        .collect();
    let coord = if basis.is_empty() {
        Mat::zeros(field, 0, unknowns)
    } else {
        kernel.left_inverse().expect("independent kernel basis")
    };
    Ok(HomSpace {
        source: m.clone(),
        target: n.clone(),
        basis,
        coord,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::projective_module;
    use crate::samples;

    #[test]
    fn hom_dims_a2() {
        let a2 = samples::a2();
        let p1 = projective_module(&a2, 0);
        let s1 = Representation::simple(&a2, 0);
        let s2 = Representation::simple(&a2, 1);
        assert_eq!(hom_basis(&p1, &s2).unwrap().dim(), 0);
        assert_eq!(hom_basis(&s1, &s1).unwrap().dim(), 1);
        assert_eq!(hom_basis(&s2, &p1).unwrap().dim(), 1);
        assert_eq!(hom_basis(&s1, &p1).unwrap().dim(), 0);
        for b in hom_basis(&p1, &p1).unwrap().basis() {
            assert!(b.is_valid());
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let aus = samples::aus_a2();
        let p1 = projective_module(&aus, 0);
        let m = super::super::direct_sum(&aus, &[p1.clone(), p1]).unwrap().sum;
        let h = hom_basis(&m, &m).unwrap();
        let f = Scalar::clone(&aus.field().from_i64(3));
        let coeffs: Vec<Scalar> = (0..h.dim()).map(|i| aus.field().from_i64(i as i64 - 1)).collect();
        let x = h.element(&coeffs).scale(&f);
        let back = h.coords(&x);
        let expect: Vec<Scalar> = coeffs.iter().map(|c| c * &f).collect();
        assert_eq!(back, expect);
    }
}
