use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;

use dexact::approx::AddSubcategory;
use dexact::dexact::{d_kernel, is_left_d_exact, Ambient, KernelMode};
use dexact::exactla::{quotient_group, Field, IntMat, Mat, Scalar};
use dexact::kgroups::{index_dct, SplitK0};
use dexact::repmod::{build_catalog, direct_sum, Catalog, CatalogOptions, Morphism};
use dexact::samples;

fn field_strategy() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::prime(7).unwrap()), Just(Field::prime(2).unwrap())]
}

fn mat_strategy() -> impl Strategy<Value = Mat> {
    (field_strategy(), 1usize..6, 1usize..6).prop_flat_map(|(f, r, c)| {
        prop::collection::vec(-4i64..=4, r * c).prop_map(move |v| {
            let data: Vec<Scalar> = v.iter().map(|&x| f.from_i64(x)).collect();
            Mat::from_scalars(f, r, c, data).unwrap()
        })
    })
}

fn a3() -> &'static Arc<Catalog> {
    static C: OnceLock<Arc<Catalog>> = OnceLock::new();
    C.get_or_init(|| Arc::new(build_catalog(&samples::a3(), &CatalogOptions::default()).unwrap()))
}

/// A random morphism between two small sums of A3 indecomposables.
fn a3_morphism() -> impl Strategy<Value = Morphism> {
    let n = a3().len();
    (
        prop::collection::vec(0..n, 1..3),
        prop::collection::vec(0..n, 1..3),
        prop::collection::vec(-2i64..=2, 64),
    )
        .prop_map(|(s, t, coeffs)| {
            let c = a3();
            let alg = c.algebra();
            let sum = |ix: &[usize]| direct_sum(alg, &ix.iter().map(|&k| c.module(k).clone()).collect::<Vec<_>>()).unwrap().sum;
            let (src, tgt) = (sum(&s), sum(&t));
            let h = dexact::repmod::hom_basis(&src, &tgt).unwrap();
            let x: Vec<Scalar> = (0..h.dim()).map(|i| alg.field().from_i64(coeffs[i % coeffs.len()])).collect();
            if h.dim() == 0 {
                Morphism::zero(&src, &tgt)
            } else {
                h.element(&x)
            }
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn rank_nullity(a in mat_strategy()) {
        let k = a.kernel_basis();
        prop_assert_eq!(a.rank() + k.cols(), a.cols());
        prop_assert!(a.mul(&k).is_zero());
    }

    #[test]
    fn rank_of_transpose(a in mat_strategy()) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn solve_recovers_consistent_systems(a in mat_strategy(), seed in prop::collection::vec(-3i64..=3, 6)) {
        let f = a.field();
        let x: Vec<Scalar> = (0..a.cols()).map(|i| f.from_i64(seed[i])).collect();
        let b = a.mul_vec(&x);
        let y = a.solve(&b).unwrap().expect("consistent");
        prop_assert_eq!(a.mul_vec(&y), b);
    }

    #[test]
    fn inverse_is_two_sided(a in mat_strategy()) {
        if let Some(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv), Mat::identity(a.field(), a.rows()));
            prop_assert_eq!(inv.mul(&a), Mat::identity(a.field(), a.rows()));
        } else {
            prop_assert!(a.rows() != a.cols() || a.rank() < a.rows());
        }
    }

    #[test]
    fn canonical_representatives(rows in prop::collection::vec(prop::collection::vec(-6i64..=6, 3), 0..4),
                                 v in prop::collection::vec(-9i64..=9, 3),
                                 w in prop::collection::vec(-3i64..=3, 4)) {
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let k = quotient_group(&IntMat::from_rows(3, &big), 3);
        let v: Vec<BigInt> = v.iter().map(|&x| x.into()).collect();
        let c = k.canonical(&v);
        prop_assert_eq!(k.canonical(&c), c.clone());
        prop_assert!(k.same_coset(&v, &c));
        // adding any combination of relations stays in the coset
        let mut shifted = v.clone();
        for (r, &m) in big.iter().zip(&w) {
            for (s, x) in shifted.iter_mut().zip(r) {
                *s += x * BigInt::from(m);
            }
        }
        prop_assert_eq!(k.canonical(&shifted), c);
        prop_assert_eq!(k.free_rank(), 3 - rank_over_q(&big));
    }

    #[test]
    fn kernel_completions_are_left_exact(f in a3_morphism()) {
        let amb = Ambient::module_category(a3());
        for mode in [KernelMode::Minimal, KernelMode::Raw] {
            let s = d_kernel(&f, &amb, mode).unwrap();
            prop_assert!(is_left_d_exact(&s, &amb).unwrap());
            prop_assert!(s.inflation().is_mono());
        }
    }

    #[test]
    fn index_is_additive(ix in prop::collection::vec(0usize..6, 1..4)) {
        let c = a3();
        let proj = AddSubcategory::projectives(c).unwrap();
        let parts: Vec<_> = ix.iter().map(|&k| c.module(k).clone()).collect();
        let sum = direct_sum(c.algebra(), &parts).unwrap().sum;
        let mut want = vec![0i64; proj.members().len()];
        for &k in &ix {
            for (w, x) in want.iter_mut().zip(index_dct(c.module(k), &proj, 1).unwrap()) {
                *w += x;
            }
        }
        prop_assert_eq!(index_dct(&sum, &proj, 1).unwrap(), want);
    }

    #[test]
    fn split_class_counts_summands(ix in prop::collection::vec(0usize..6, 1..4)) {
        let c = a3();
        let k0 = SplitK0::new(c);
        let parts: Vec<_> = ix.iter().map(|&k| c.module(k).clone()).collect();
        let sum = direct_sum(c.algebra(), &parts).unwrap().sum;
        let class = k0.split_class(&sum).unwrap();
        prop_assert_eq!(class.iter().sum::<i64>(), ix.len() as i64);
        for &k in &ix {
            prop_assert_eq!(class[k], ix.iter().filter(|&&j| j == k).count() as i64);
        }
    }
}

fn rank_over_q(rows: &[Vec<BigInt>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let f = Field::Rational;
    let data: Vec<Scalar> = rows.iter().flatten().map(|x| f.from_bigint(x)).collect();
    Mat::from_scalars(f, rows.len(), 3, data).unwrap().rank()
}
