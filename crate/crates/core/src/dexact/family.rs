//! Bounded families of d-exact and left d-exact sequences used by the verification harnesses.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::approx::{minimal_right_approximation, AddSubcategory};
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::par::Exec;
use crate::repmod::{direct_sum, hom_basis, DirectSum, Morphism, Representation};

use super::{d_kernel, is_d_exact, Ambient, AmbientKind, DSequence, KernelMode};

#[derive(Clone, Copy, Debug)]
pub struct FamilyOptions {
    /// Largest multiplicity of one indecomposable in a source or target.
    pub max_multiplicity: usize,
    /// Largest number of distinct indecomposables in a source or target.
    pub max_types: usize,
    /// Random combinations tried per hom space, on top of the basis.
    pub random_combos: usize,
    pub mode: KernelMode,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            max_multiplicity: 2,
            max_types: 2,
            random_combos: 2,
            mode: KernelMode::Raw,
            seed: 0xfa11,
            exec: Exec::default(),
        }
    }
}

/// Multisets of ambient objects with at most `max_types` types and multiplicity `max_multiplicity`.
fn small_sums(objects: &[usize], opts: &FamilyOptions) -> Vec<Vec<usize>> {
    fn go(objects: &[usize], start: usize, types: usize, opts: &FamilyOptions, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if types == opts.max_types {
            return;
        }
        for k in start..objects.len() {
            for m in 1..=opts.max_multiplicity {
                cur.extend(std::iter::repeat_n(objects[k], m));
                go(objects, k + 1, types + 1, opts, cur, out);
                cur.truncate(cur.len() - m);
            }
        }
    }
    let mut out = Vec::new();
    go(objects, 0, 0, opts, &mut Vec::new(), &mut out);
    out
}

struct Sum {
    blocks: Vec<usize>,
    sum: Representation,
}

fn build_sums(ambient: &Ambient, opts: &FamilyOptions) -> Result<Vec<Sum>> {
    let catalog = ambient.catalog();
    small_sums(&ambient.objects(), opts)
        .into_iter()
        .map(|blocks| {
            let parts: Vec<Representation> = blocks.iter().map(|&b| catalog.module(b).clone()).collect();
            let DirectSum { sum, .. } = direct_sum(catalog.algebra(), &parts)?;
            Ok(Sum { blocks, sum })
        })
        .collect()
}

fn candidates(src: &Representation, tgt: &Representation, opts: &FamilyOptions, seed: u64) -> Result<Vec<Morphism>> {
    let h = hom_basis(src, tgt)?;
    if h.dim() == 0 {
        return Ok(Vec::new());
    }
    let field = src.field();
    let mut out = h.basis().to_vec();
    if h.dim() > 1 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..opts.random_combos {
            let c: Vec<Scalar> = (0..h.dim()).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
            let f = h.element(&c);
            if !f.is_zero() {
                out.push(f);
            }
        }
    }
    Ok(out)
}

fn annotate(mut s: DSequence, ambient: &Ambient, top: &[usize], bottom: &[usize]) -> Result<DSequence> {
    s.set_blocks(0, bottom.to_vec());
    s.set_blocks(1, top.to_vec());
    s.fill_blocks(ambient)?;
    Ok(s)
}

/// Key used to drop sequences that repeat the same objects and ranks.
fn signature(s: &DSequence) -> (Vec<Option<Vec<usize>>>, Vec<Vec<usize>>) {
    (s.blocks.clone(), s.maps.iter().map(Morphism::ranks).collect())
}

fn dedup(seqs: Vec<DSequence>) -> Vec<DSequence> {
    let mut seen = HashSet::new();
    seqs.into_iter().filter(|s| seen.insert(signature(s))).collect()
}

/// d-kernel completions of morphisms between small sums; `deflations_only` keeps the d-exact ones.
fn completions(ambient: &Ambient, opts: &FamilyOptions, deflations_only: bool) -> Result<Vec<DSequence>> {
    let sums = build_sums(ambient, opts)?;
    let pairs: Vec<(usize, usize)> = (0..sums.len())
        .flat_map(|i| (0..sums.len()).map(move |j| (i, j)))
        .collect();
    let batches = opts.exec.map(&pairs, |&(i, j)| -> Result<Vec<DSequence>> {
        let (a, b) = (&sums[i], &sums[j]);
        let mut out = Vec::new();
        let seed = opts.seed ^ ((i as u64) << 32 | j as u64);
        for f in candidates(&a.sum, &b.sum, opts, seed)? {
            if deflations_only && ambient.is_module_category() && !f.is_epi() {
                continue;
            }
            let s = match d_kernel(&f, ambient, opts.mode) {
                Ok(s) => s,
                Err(Error::NotInSubcategory(_)) | Err(Error::ApproximationNotMonic(_)) | Err(Error::LiftFailed(_)) => continue,
                Err(e) => return Err(e),
            };
            let s = annotate(s, ambient, &a.blocks, &b.blocks)?;
            if deflations_only && !is_d_exact(&s, ambient)? {
                continue;
            }
            out.push(s.with_label(format!("ker#{i}.{j}")));
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for b in batches {
        all.extend(b?);
    }
    Ok(dedup(all))
}

/// Splices of resolutions: the d-kernel of a minimal projective cover of each object.
fn splices(ambient: &Ambient, opts: &FamilyOptions) -> Result<Vec<DSequence>> {
    let catalog = ambient.catalog();
    let proj = AddSubcategory::projectives(catalog)?;
    let cover = match &ambient.kind {
        AmbientKind::ModuleCategory => proj,
        // projectives of the ambient category: those lying in it
        _ => {
            let inside: Vec<usize> = proj.members().iter().copied().filter(|p| ambient.objects().contains(p)).collect();
            AddSubcategory::new(catalog, inside, "proj")?
        }
    };
    let mut out = Vec::new();
    for c in ambient.objects() {
        let a = minimal_right_approximation(&cover, catalog.module(c))?;
        let s = match d_kernel(&a.map, ambient, opts.mode) {
            Ok(s) => s,
            Err(Error::NotInSubcategory(_)) | Err(Error::ApproximationNotMonic(_)) | Err(Error::LiftFailed(_)) => continue,
            Err(e) => return Err(e),
        };
        let s = annotate(s, ambient, &a.members, &[c])?;
        if is_d_exact(&s, ambient)? {
            out.push(s.with_label(format!("splice:{}", catalog.label(c))));
        }
    }
    Ok(out)
}

/// Identity paddings and, for d = 1, split short exact sequences.
fn split_sequences(ambient: &Ambient) -> Result<Vec<DSequence>> {
    let catalog = ambient.catalog();
    let d = ambient.d();
    let objects = ambient.objects();
    let mut out = Vec::new();
    for &c in &objects {
        let m = catalog.module(c);
        for top in [false, true] {
            let mut s = DSequence::padded_identity(d, m, top);
            for i in 0..s.objects.len() {
                let b = if s.objects[i].is_zero() { vec![] } else { vec![c] };
                s.set_blocks(i, b);
            }
            let at = if top { "top" } else { "bottom" };
            out.push(s.with_label(format!("id:{}@{at}", catalog.label(c))));
        }
    }
    if d == 1 {
        for &a in &objects {
            for &b in &objects {
                let (ma, mb) = (catalog.module(a), catalog.module(b));
                let ds = direct_sum(catalog.algebra(), &[ma.clone(), mb.clone()])?;
                let s = DSequence::new(1, vec![mb.clone(), ds.sum.clone(), ma.clone()], vec![
                    ds.projections[1].clone(),
                    ds.injections[0].clone(),
                ])?;
                let mut s = s.with_label(format!("split:{}+{}", catalog.label(a), catalog.label(b)));
                s.set_blocks(0, vec![b]);
                let mut mid = vec![a, b];
                mid.sort_unstable();
                s.set_blocks(1, mid);
                s.set_blocks(2, vec![a]);
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// The bounded family of d-exact sequences of the ambient category: resolution splices,
/// d-kernel completions of deflations between small sums, and split sequences.
pub fn enumerate_family(ambient: &Ambient, opts: &FamilyOptions) -> Result<Vec<DSequence>> {
    let mut all = splices(ambient, opts)?;
    all.extend(completions(ambient, opts, true)?);
    all.extend(split_sequences(ambient)?);
    Ok(dedup(all))
}

/// d-kernel completions of every candidate morphism between small sums; left d-exact only.
pub fn enumerate_left_family(ambient: &Ambient, opts: &FamilyOptions) -> Result<Vec<DSequence>> {
    completions(ambient, opts, false)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::dexact::is_left_d_exact;
    use crate::repmod::{build_catalog, CatalogOptions};
    use crate::samples;

    #[test]
    fn sum_shapes() {
        let o = FamilyOptions::default();
        let s = small_sums(&[0, 1, 2], &o);
        // 3 objects, 1 or 2 copies: 6 single-type sums and 3 * 4 two-type sums
        assert_eq!(s.len(), 18);
        assert!(s.iter().all(|b| b.windows(2).all(|w| w[0] <= w[1])));
    }

    #[test]
    fn family_a2() {
        let c = Arc::new(build_catalog(&samples::a2(), &CatalogOptions::default()).unwrap());
        let amb = Ambient::module_category(&c);
        let o = FamilyOptions::default();
        let fam = enumerate_family(&amb, &o).unwrap();
        assert!(fam.iter().all(|s| is_d_exact(s, &amb).unwrap()));
        // the non-split sequence S2 -> P1 -> S1 shows up
        let (s2, s1, p1) = (c.find("S2").unwrap(), c.find("S1").unwrap(), c.find("P1").unwrap());
        assert!(fam.iter().any(|s| s.blocks(2) == Some(&[s2][..]) && s.blocks(1) == Some(&[p1][..]) && s.blocks(0) == Some(&[s1][..])));
        let left = enumerate_left_family(&amb, &o).unwrap();
        assert!(left.len() > fam.len() / 2);
        assert!(left.iter().all(|s| is_left_d_exact(s, &amb).unwrap()));
        assert!(left.iter().any(|s| !s.deflation().is_epi()));
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = Arc::new(build_catalog(&samples::a2(), &CatalogOptions::default()).unwrap());
        let amb = Ambient::module_category(&c);
        let seq = FamilyOptions { exec: Exec::Sequential, ..FamilyOptions::default() };
        let par = FamilyOptions { exec: Exec::Parallel, ..FamilyOptions::default() };
        let a: Vec<String> = enumerate_family(&amb, &seq).unwrap().iter().map(|s| s.label.clone()).collect();
        let b: Vec<String> = enumerate_family(&amb, &par).unwrap().iter().map(|s| s.label.clone()).collect();
        assert_eq!(a, b);
    }
}
