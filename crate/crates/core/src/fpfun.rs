//! Finitely presented functors, their restrictions to add(X) and resolutions.

use crate::approx::{minimal_right_approximation, AddSubcategory};
use crate::dexact::{d_kernel, Ambient, DSequence, KernelMode};
use crate::error::{Error, Result};
use crate::exactla::{Field, Mat, Scalar};
use crate::repmod::{direct_sum, factor_through, hom_basis, kernel, search_span, DirectSum, IsoOptions, Morphism, Representation};

/// The functor `Coker(C(-, f))` presented by `f: B_1 -> B_0`.
#[derive(Clone, Debug)]
pub struct FPPresentation {
    pub f: Morphism,
    /// Catalog summands of `B_1` and `B_0` when already known.
    known: [Option<Vec<usize>>; 2],
}

impl FPPresentation {
    pub fn new(f: Morphism) -> FPPresentation {
        FPPresentation { f, known: [None, None] }
    }

    /// Records the catalog summands of `B_1` and `B_0`, sparing a decomposition later.
    pub fn with_blocks(mut self, b1: Vec<usize>, b0: Vec<usize>) -> FPPresentation {
        let sorted = |mut v: Vec<usize>| {
            v.sort_unstable();
            Some(v)
        };
        self.known = [sorted(b1), sorted(b0)];
        self
    }

    /// `0 -> B_0`, presenting the representable functor of `B_0`.
    pub fn representable(b0: &Representation) -> FPPresentation {
        let zero = Representation::zero(b0.algebra());
        FPPresentation::new(Morphism::zero(&zero, b0))
    }

    pub fn b1(&self) -> &Representation {
        self.f.source()
    }

    pub fn b0(&self) -> &Representation {
        self.f.target()
    }
}

/// Action of a hom-basis element `φ: X_from -> X_to` as `F(X_to) -> F(X_from)`.
#[derive(Clone, Debug)]
pub struct Action {
    pub from: usize,
    pub to: usize,
    pub index: usize,
    pub matrix: Mat,
}

/// A contravariant functor on add(X), stored by its values on the members.
#[derive(Clone, Debug)]
pub struct RestrictedFunctor {
    x: AddSubcategory,
    dims: Vec<usize>,
    actions: Vec<Action>,
}

/// A natural transformation, one matrix per member.
pub type NatTrans = Vec<Mat>;

impl RestrictedFunctor {
    pub fn subcategory(&self) -> &AddSubcategory {
        &self.x
    }

    /// `dim F(X_j)` for every member.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    fn field(&self) -> Field {
        self.x.catalog().algebra().field()
    }

    fn action(&self, from: usize, to: usize, index: usize) -> &Mat {
        self.actions
            .iter()
            .find(|a| a.from == from && a.to == to && a.index == index)
            .map(|a| &a.matrix)
            .expect("action of a basis element")
    }

    /// `F(ψ ∘ φ) = F(φ) ∘ F(ψ)` on all pairs of hom-basis elements.
    pub fn is_functorial(&self) -> bool {
        let catalog = self.x.catalog();
        let m = self.x.members();
        let field = self.field();
        for j in 0..m.len() {
            for k in 0..m.len() {
                for l in 0..m.len() {
                    let (hjk, hkl, hjl) = (catalog.hom(m[j], m[k]), catalog.hom(m[k], m[l]), catalog.hom(m[j], m[l]));
                    for (s, phi) in hjk.basis().iter().enumerate() {
                        for (t, psi) in hkl.basis().iter().enumerate() {
                            let c = hjl.coords(&psi.compose(phi));
                            let mut lhs = Mat::zeros(field, self.dims[j], self.dims[l]);
                            for (u, cu) in c.iter().enumerate() {
                                if !cu.is_zero() {
                                    lhs.add_scaled(cu, self.action(j, l, u));
                                }
                            }
                            let rhs = self.action(j, k, s).mul(self.action(k, l, t));
                            if lhs != rhs {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

fn columns(field: Field, rows: usize, cols: &[Vec<Scalar>]) -> Mat {
    let mut a = Mat::zeros(field, rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, x) in c.iter().enumerate() {
            a.set(i, j, x.clone());
        }
    }
    a
}

/// `F(X_j) = Coker(Hom(X_j, B_1) -> Hom(X_j, B_0))` with the actions induced by precomposition.
pub fn restrict(p: &FPPresentation, x: &AddSubcategory) -> Result<RestrictedFunctor> {
    let catalog = x.catalog();
    catalog.algebra().check_same(p.f.source().algebra())?;
    let field = catalog.algebra().field();
    let members = x.members();
    let mut homs = Vec::new();
    // quotient maps q_j: Hom(X_j, B_0) -> F(X_j), sections s_j, and images of Hom(X_j, f)
    let mut q = Vec::new();
    let mut s = Vec::new();
    let mut images = Vec::new();
    for &m in members {
        let xm = catalog.module(m);
        let h0 = hom_basis(xm, p.b0())?;
        let h1 = hom_basis(xm, p.b1())?;
        let im: Vec<Vec<Scalar>> = h1.basis().iter().map(|g| h0.coords(&p.f.compose(g))).collect();
        let im = columns(field, h0.dim(), &im);
        let qj = im.transpose().kernel_basis().transpose();
        let sj = if qj.rows() == 0 {
            Mat::zeros(field, h0.dim(), 0)
        } else {
            qj.right_inverse().expect("full row rank")
        };
        q.push(qj);
        s.push(sj);
        images.push(im);
        homs.push(h0);
    }
    let dims: Vec<usize> = q.iter().map(Mat::rows).collect();
    let mut actions = Vec::new();
    for j in 0..members.len() {
        for k in 0..members.len() {
            for (t, phi) in catalog.hom(members[j], members[k]).basis().iter().enumerate() {
                // precomposition Hom(X_k, B_0) -> Hom(X_j, B_0)
                let pre: Vec<Vec<Scalar>> = homs[k].basis().iter().map(|g| homs[j].coords(&g.compose(phi))).collect();
                let pre = columns(field, homs[j].dim(), &pre);
                if !q[j].mul(&pre).mul(&images[k]).is_zero() {
                    return Err(Error::InvalidMorphism("precomposition does not preserve the image".into()));
                }
                actions.push(Action {
                    from: j,
                    to: k,
                    index: t,
                    matrix: q[j].mul(&pre).mul(&s[k]),
                });
            }
        }
    }
    Ok(RestrictedFunctor {
        x: x.clone(),
        dims,
        actions,
    })
}

/// Ranks of the action matrices; equal for isomorphic functors.
fn action_ranks(f: &RestrictedFunctor) -> Vec<usize> {
    f.actions.iter().map(|a| a.matrix.rank()).collect()
}

/// Natural isomorphism `F -> G`, or `None` when certified non-isomorphic.
pub fn functor_iso(f: &RestrictedFunctor, g: &RestrictedFunctor, opts: &IsoOptions) -> Result<Option<NatTrans>> {
    if f.x.members() != g.x.members() {
        return Err(Error::Config("functors live on different subcategories".into()));
    }
    let field = f.field();
    if f.dims != g.dims || action_ranks(f) != action_ranks(g) {
        return Ok(None);
    }
    let n = f.dims.len();
    // unknowns: entries of η_j, row-major, stacked
    let mut offsets = Vec::with_capacity(n);
    let mut unknowns = 0;
    for &d in &f.dims {
        offsets.push(unknowns);
        unknowns += d * d;
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    // η_from F(φ) = G(φ) η_to, both sides F(X_to) -> G(X_from)
    for (af, ag) in f.actions.iter().zip(&g.actions) {
        let (j, k) = (af.from, af.to);
        let (dj, dk) = (f.dims[j], f.dims[k]);
        for r in 0..dj {
            for c in 0..dk {
                let mut row = vec![field.zero(); unknowns];
                for m in 0..dj {
                    let v = af.matrix.get(m, c);
                    if !v.is_zero() {
                        let idx = offsets[j] + r * dj + m;
                        row[idx] = &row[idx] + v;
                    }
                }
                for m in 0..dk {
                    let v = ag.matrix.get(r, m);
                    if !v.is_zero() {
                        let idx = offsets[k] + m * dk + c;
                        row[idx] = &row[idx] - v;
                    }
                }
                rows.push(row);
            }
        }
    }
    let data: Vec<Scalar> = rows.into_iter().flatten().collect();
    let n_rows = data.len() / unknowns.max(1);
    let system = if unknowns == 0 {
        Mat::zeros(field, 0, 0)
    } else {
        Mat::from_scalars(field, n_rows, unknowns, data)?
    };
    let to_nat = |v: &[Scalar]| -> NatTrans {
        (0..n)
            .map(|j| {
                let d = f.dims[j];
                Mat::from_scalars(field, d, d, v[offsets[j]..offsets[j] + d * d].to_vec()).expect("square block")
            })
            .collect()
    };
    if unknowns == 0 {
        return Ok(Some(to_nat(&[])));
    }
    let kernel = system.kernel_basis();
    let basis: Vec<NatTrans> = (0..kernel.cols()).map(|c| to_nat(&kernel.col(c))).collect();
    let combine = |c: &[Scalar]| -> NatTrans {
        let mut acc: NatTrans = f.dims.iter().map(|&d| Mat::zeros(field, d, d)).collect();
        for (ci, b) in c.iter().zip(&basis) {
            if !ci.is_zero() {
                for (a, m) in acc.iter_mut().zip(b) {
                    a.add_scaled(ci, m);
                }
            }
        }
        acc
    };
    let total: usize = f.dims.iter().sum();
    search_span(field, &basis, combine, total, opts, |eta| eta.iter().all(Mat::is_invertible))
}

/// `A_{d+1} -> ... -> A_2 -> B_1 -> B_0`: the presentation followed by its minimal d-kernel.
pub fn functor_resolution(p: &FPPresentation, ambient: &Ambient) -> Result<DSequence> {
    functor_resolution_with(p, ambient, KernelMode::Minimal)
}

pub fn functor_resolution_with(p: &FPPresentation, ambient: &Ambient, mode: KernelMode) -> Result<DSequence> {
    let mut s = d_kernel(&p.f, ambient, mode)?;
    for (i, b) in [(1, &p.known[0]), (0, &p.known[1])] {
        if let (Some(b), None) = (b, s.blocks(i)) {
            s.set_blocks(i, b.clone());
        }
    }
    s.fill_blocks(ambient)?;
    Ok(s)
}

/// A presentation `g: X_1 -> X_0` inside add(X) with `Coker(C(-, g))|_X ≅ Coker(C(-, p.f))|_X`.
///
/// `X_0 -> B_0` is a right X-approximation, and `X_1` approximates the pullback of
/// `X_0 -> B_0 <- B_1`, whose Yoneda image restricted to X is the kernel of the cover.
pub fn x_presentation(p: &FPPresentation, x: &AddSubcategory) -> Result<FPPresentation> {
    let alg = p.b0().algebra().clone();
    let x0 = minimal_right_approximation(x, p.b0())?;
    let ds = direct_sum(&alg, &[x0.source.sum.clone(), p.b1().clone()])?;
    let to_b0 = DirectSum::copair(&ds, p.b0(), &[x0.map.clone(), p.f.neg()]);
    let (e, incl) = kernel(&to_b0);
    let pr = ds.projections[0].compose(&incl);
    let x1 = minimal_right_approximation(x, &e)?;
    Ok(FPPresentation::new(pr.compose(&x1.map)).with_blocks(x1.members, x0.members))
}

/// Horseshoe assembly of a resolution with terms `A_i ⊕ B_i` from resolutions of the outer
/// functors and the component `λ_1: B_1 -> A_0` of the middle presentation.
pub fn horseshoe(res_a: &DSequence, res_b: &DSequence, lambda1: &Morphism) -> Result<DSequence> {
    let d = res_a.d();
    if res_b.d() != d {
        return Err(Error::InvalidSequence("resolutions of different lengths".into()));
    }
    if lambda1.source().dims() != res_b.object(1).dims() || lambda1.target().dims() != res_a.object(0).dims() {
        return Err(Error::InvalidMorphism("connecting map must go B_1 -> A_0".into()));
    }
    let alg = res_a.object(0).algebra().clone();
    let sums: Vec<DirectSum> = (0..=d + 1)
        .map(|i| direct_sum(&alg, &[res_a.object(i).clone(), res_b.object(i).clone()]))
        .collect::<Result<_>>()?;
    // lambda[i]: B_i -> A_{i-1}
    let mut lambda = vec![lambda1.clone()];
    for i in 2..=d + 1 {
        let rhs = lambda[i - 2].compose(res_b.differential(i)).neg();
        let l = factor_through(res_a.differential(i - 1), &rhs)
            .ok_or_else(|| Error::LiftFailed(format!("no lift of the connecting map in degree {i}")))?;
        lambda.push(l);
    }
    let maps: Vec<Morphism> = (1..=d + 1)
        .map(|i| {
            let zero = Morphism::zero(res_a.object(i), res_b.object(i - 1));
            DirectSum::matrix(
                &sums[i],
                &sums[i - 1],
                &[
                    vec![res_a.differential(i).clone(), lambda[i - 1].clone()],
                    vec![zero, res_b.differential(i).clone()],
                ],
            )
        })
        .collect();
    let objects = sums.iter().map(|s| s.sum.clone()).collect();
    let mut s = DSequence::new(d, objects, maps)?;
    for i in 0..=d + 1 {
        if let (Some(a), Some(b)) = (res_a.blocks(i), res_b.blocks(i)) {
            let mut blocks = [a, b].concat();
            blocks.sort_unstable();
            s.set_blocks(i, blocks);
        }
    }
    Ok(s.with_label("horseshoe"))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dexact::is_left_d_exact;
    use crate::repmod::{build_catalog, Catalog, CatalogOptions};
    use crate::samples;

    fn a2() -> Arc<Catalog> {
        Arc::new(build_catalog(&samples::a2(), &CatalogOptions::default()).unwrap())
    }

    fn basis_map(c: &Catalog, from: &str, to: &str) -> Morphism {
        c.hom(c.find(from).unwrap(), c.find(to).unwrap()).basis()[0].clone()
    }

    #[test]
    fn restriction_examples() {
        let c = a2();
        let p = FPPresentation::new(basis_map(&c, "P1", "S1"));
        let proj = AddSubcategory::projectives(&c).unwrap();
        assert!(restrict(&p, &proj).unwrap().is_zero());
        let x = AddSubcategory::from_labels(&c, &["P1", "S2", "S1"], "X").unwrap();
        let f = restrict(&p, &x).unwrap();
        // members are ordered S2, S1, P1
        assert_eq!(f.dims(), &[0, 1, 0]);
        assert!(f.is_functorial());
        let rep = restrict(&FPPresentation::representable(c.module(2)), &x).unwrap();
        let yoneda: Vec<usize> = (0..3).map(|j| c.hom(j, 2).dim()).collect();
        assert_eq!(rep.dims(), &yoneda[..]);
        assert!(rep.is_functorial());
    }

    #[test]
    fn functor_isomorphisms() {
        let c = a2();
        let alg = c.algebra();
        let o = IsoOptions::default();
        let x = AddSubcategory::from_labels(&c, &["P1", "S2", "S1"], "X").unwrap();
        let f = basis_map(&c, "P1", "S1");
        let p = FPPresentation::new(f.clone());
        let p1 = c.module(c.find("P1").unwrap()).clone();
        let pp = direct_sum(alg, &[p1.clone(), p1]).unwrap();
        let q = FPPresentation::new(DirectSum::copair(&pp, f.target(), &[f.clone(), f.clone()]));
        let (fp, fq) = (restrict(&p, &x).unwrap(), restrict(&q, &x).unwrap());
        assert!(functor_iso(&fp, &fp, &o).unwrap().is_some());
        let eta = functor_iso(&fp, &fq, &o).unwrap().unwrap();
        assert!(eta.iter().all(Mat::is_invertible));
        let rep = restrict(&FPPresentation::representable(f.target()), &x).unwrap();
        assert!(functor_iso(&fp, &rep, &o).unwrap().is_none());
    }

    #[test]
    fn presentations_inside_x() {
        let c = a2();
        let o = IsoOptions::default();
        let all = AddSubcategory::everything(&c);
        for x in [
            AddSubcategory::projectives(&c).unwrap(),
            AddSubcategory::from_labels(&c, &["P1", "S1"], "X").unwrap(),
            all.clone(),
        ] {
            for i in 0..c.len() {
                for j in 0..c.len() {
                    for f in c.hom(i, j).basis() {
                        let p = FPPresentation::new(f.clone());
                        let g = x_presentation(&p, &x).unwrap();
                        let blocks = crate::dexact::Ambient::module_category(&c).blocks_of(g.b0()).unwrap().unwrap();
                        assert!(blocks.iter().all(|&b| x.contains(b)));
                        let (fp, fg) = (restrict(&p, &x).unwrap(), restrict(&g, &x).unwrap());
                        assert!(functor_iso(&fp, &fg, &o).unwrap().is_some());
                    }
                }
            }
        }
    }

    #[test]
    fn resolutions() {
        let c = a2();
        let amb = Ambient::module_category(&c);
        let p = FPPresentation::new(basis_map(&c, "P1", "S1"));
        let r = functor_resolution(&p, &amb).unwrap();
        assert_eq!(r.blocks(2).unwrap(), &[c.find("S2").unwrap()]);
        let id = FPPresentation::new(Morphism::identity(c.module(0)));
        let r = functor_resolution(&id, &amb).unwrap();
        assert!(r.object(2).is_zero());
    }

    #[test]
    fn split_horseshoe() {
        let c = a2();
        let amb = Ambient::module_category(&c);
        let pa = FPPresentation::new(basis_map(&c, "P2", "P1"));
        let pb = FPPresentation::representable(c.module(c.find("S2").unwrap()));
        let ra = functor_resolution(&pa, &amb).unwrap();
        let rb = functor_resolution(&pb, &amb).unwrap();
        let lambda = Morphism::zero(rb.object(1), ra.object(0));
        let h = horseshoe(&ra, &rb, &lambda).unwrap();
        for i in 0..3 {
            let want: Vec<usize> = ra.object(i).dims().iter().zip(rb.object(i).dims()).map(|(a, b)| a + b).collect();
            assert_eq!(h.object(i).dims(), &want[..]);
        }
        assert!(is_left_d_exact(&h, &amb).unwrap());
    }
}
