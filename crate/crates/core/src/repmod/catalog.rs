use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{injective_module, projective_module, BoundAlgebra};
use crate::error::{Error, Result};
use crate::exactla::{Field, Mat, Scalar};

use super::decompose::decompose_pieces;
use super::hom::{hom_basis, HomSpace};
use super::iso::{is_isomorphic, IsoOptions};
use super::{cokernel, format_dims, image, kernel, Morphism, Representation};

#[derive(Clone, Copy, Debug)]
pub struct CatalogOptions {
    pub dim_cap: usize,
    pub max_objects: usize,
    pub iso: IsoOptions,
}

impl Default for CatalogOptions {
    fn default() -> Self {
        CatalogOptions {
            dim_cap: 30,
            max_objects: 200,
            iso: IsoOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub module: Representation,
    pub label: String,
    /// Every standard name this object answers to (S, P, I in that order).
    pub aliases: Vec<String>,
}

/// Pairwise non-isomorphic indecomposables in canonical order, with cached hom spaces.
#[derive(Debug)]
pub struct Catalog {
    alg: Arc<BoundAlgebra>,
    entries: Vec<CatalogEntry>,
    homs: Vec<OnceLock<HomSpace>>,
    iso: IsoOptions,
}

fn sort_key(m: &Representation) -> (usize, Vec<usize>, Vec<usize>) {
    (m.total_dim(), m.dims().to_vec(), m.rank_profile())
}

struct Closure<'a> {
    objects: Vec<Representation>,
    opts: &'a CatalogOptions,
}

impl Closure<'_> {
    fn absorb(&mut self, m: &Representation) -> Result<()> {
        for piece in decompose_pieces(m)? {
            let p = piece.module;
            if p.total_dim() > self.opts.dim_cap {
                return Err(Error::CatalogCapExceeded(format!(
                    "indecomposable {} exceeds the dimension cap {}",
                    format_dims(p.dims()),
                    self.opts.dim_cap
                )));
            }
            let mut known = false;
            for o in &self.objects {
                if o.dims() == p.dims() && is_isomorphic(o, &p, &self.opts.iso)?.is_some() {
                    known = true;
                    break;
                }
            }
            if !known {
                self.objects.push(p);
                if self.objects.len() > self.opts.max_objects {
                    return Err(Error::CatalogCapExceeded(format!(
                        "more than {} indecomposables",
                        self.opts.max_objects
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Closes the projectives and injectives under kernels, cokernels and images of
/// hom-basis morphisms, decomposing everything, until nothing new appears.
pub fn build_catalog(alg: &Arc<BoundAlgebra>, opts: &CatalogOptions) -> Result<Catalog> {
    let mut cl = Closure {
        objects: Vec::new(),
        opts,
    };
    for v in 0..alg.n_vertices() {
        cl.absorb(&projective_module(alg, v))?;
        cl.absorb(&injective_module(alg, v))?;
    }
    let mut done: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let n = cl.objects.len();
        let mut progressed = false;
        for i in 0..n {
            for j in 0..n {
                if !done.insert((i, j)) {
                    continue;
                }
                progressed = true;
                let h = hom_basis(&cl.objects[i], &cl.objects[j])?;
                for f in h.basis() {
                    cl.absorb(&kernel(f).0)?;
                    cl.absorb(&cokernel(f).0)?;
                    cl.absorb(&image(f).0)?;
                }
            }
        }
        if !progressed && cl.objects.len() == n {
            break;
        }
    }
    Catalog::assemble(alg, cl.objects, opts.iso)
}

impl Catalog {
    /// Validates a user-supplied list of indecomposables.
    pub fn from_modules(alg: &Arc<BoundAlgebra>, modules: Vec<Representation>, iso: IsoOptions) -> Result<Catalog> {
        for (i, m) in modules.iter().enumerate() {
            alg.check_same(m.algebra())?;
            let pieces = decompose_pieces(m)?;
            if pieces.len() != 1 {
                return Err(Error::InvalidRepresentation(format!(
                    "catalog member {} is not indecomposable",
                    format_dims(m.dims())
                )));
            }
            for o in &modules[..i] {
                if o.dims() == m.dims() && is_isomorphic(o, m, &iso)?.is_some() {
                    return Err(Error::InvalidRepresentation(format!(
                        "catalog members {} repeat an isomorphism class",
                        format_dims(m.dims())
                    )));
                }
            }
        }
        Catalog::assemble(alg, modules, iso)
    }

    fn assemble(alg: &Arc<BoundAlgebra>, mut objects: Vec<Representation>, iso: IsoOptions) -> Result<Catalog> {
        objects.sort_by_cached_key(sort_key);
        let n = alg.n_vertices();
        let proj: Vec<Representation> = (0..n).map(|v| projective_module(alg, v)).collect();
        let inj: Vec<Representation> = (0..n).map(|v| injective_module(alg, v)).collect();
        let mut entries = Vec::with_capacity(objects.len());
        for (k, m) in objects.into_iter().enumerate() {
            let mut aliases = Vec::new();
            if m.total_dim() == 1 {
                let v = m.dims().iter().position(|&d| d == 1).expect("one-dimensional");
                aliases.push(format!("S{}", v + 1));
            }
            for (prefix, family) in [("P", &proj), ("I", &inj)] {
                for (v, x) in family.iter().enumerate() {
                    if x.dims() == m.dims() && is_isomorphic(x, &m, &iso)?.is_some() {
                        aliases.push(format!("{prefix}{}", v + 1));
                    }
                }
            }
            let label = aliases.first().cloned().unwrap_or_else(|| format!("M{}", k + 1));
            entries.push(CatalogEntry {
                module: m,
                label,
                aliases,
            });
        }
        let homs = (0..entries.len() * entries.len()).map(|_| OnceLock::new()).collect();
        Ok(Catalog {
            alg: alg.clone(),
            entries,
            homs,
            iso,
        })
    }

    pub fn algebra(&self) -> &Arc<BoundAlgebra> {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn module(&self, i: usize) -> &Representation {
        &self.entries[i].module
    }

    pub fn label(&self, i: usize) -> &str {
        &self.entries[i].label
    }

    pub fn iso_options(&self) -> &IsoOptions {
        &self.iso
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        self.homs[i * self.entries.len() + j]
            .get_or_init(|| hom_basis(self.module(i), self.module(j)).expect("same algebra"))
    }

    /// Index of the entry with this label or alias.
    pub fn find(&self, name: &str) -> Option<usize> {
        self.entries
            .iter()
            .position(|e| e.label == name)
            .or_else(|| self.entries.iter().position(|e| e.aliases.iter().any(|a| a == name)))
    }

    pub fn find_by_dims(&self, dims: &[usize]) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.module(i).dims() == dims).collect()
    }

    /// Catalog index of an indecomposable module.
    pub fn identify(&self, m: &Representation) -> Result<Option<usize>> {
        for i in self.find_by_dims(m.dims()) {
            if is_isomorphic(self.module(i), m, &self.iso)?.is_some() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Summands of `m` guessed from `dim Hom(M_i, m)` and certified by an invertible map
    /// from the guessed sum. `None` when the guess or the certificate fails.
    pub fn blocks_by_hom(&self, m: &Representation) -> Result<Option<Vec<usize>>> {
        let n = self.len();
        let q = Field::Rational;
        let mut h = Mat::zeros(q, n, n);
        let mut counts = Vec::with_capacity(n);
        let mut homs = Vec::with_capacity(n);
        for i in 0..n {
            for j in 0..n {
                h.set(i, j, q.from_i64(self.hom(i, j).dim() as i64));
            }
            let hm = hom_basis(self.module(i), m)?;
            counts.push(q.from_i64(hm.dim() as i64));
            homs.push(hm);
        }
        let Some(sol) = h.solve(&counts)? else {
            return Ok(None);
        };
        let Some(mult) = sol.iter().map(|x| x.to_integer().and_then(|v| v.to_usize())).collect::<Option<Vec<usize>>>() else {
            return Ok(None);
        };
        let copies: Vec<usize> = mult.iter().enumerate().flat_map(|(j, &k)| std::iter::repeat_n(j, k)).collect();
        for v in 0..m.dims().len() {
            if copies.iter().map(|&j| self.module(j).dims()[v]).sum::<usize>() != m.dims()[v] {
                return Ok(None);
            }
        }
        let field = m.field();
        let mut rng = ChaCha8Rng::seed_from_u64(0xb10c);
        for _ in 0..3 {
            let maps: Vec<Morphism> = copies
                .iter()
                .map(|&j| {
                    let c: Vec<Scalar> = (0..homs[j].dim()).map(|_| field.from_i64(rng.gen_range(-50..=50))).collect();
                    homs[j].element(&c)
                })
                .collect();
            let iso = (0..m.dims().len()).all(|v| {
                let blocks: Vec<&Mat> = maps.iter().map(|f| f.vertex_map(v)).collect();
                m.dims()[v] == 0 || Mat::hstack(field, m.dims()[v], &blocks).is_invertible()
            });
            if iso {
                return Ok(Some(copies));
            }
        }
        Ok(None)
    }

    pub fn projectives(&self) -> Result<Vec<usize>> {
        (0..self.alg.n_vertices())
            .map(|v| {
                self.identify(&projective_module(&self.alg, v))?
                    .ok_or_else(|| Error::UnknownSummand(projective_module(&self.alg, v).dims().to_vec()))
            })
            .collect()
    }

    pub fn injectives(&self) -> Result<Vec<usize>> {
        (0..self.alg.n_vertices())
            .map(|v| {
                self.identify(&injective_module(&self.alg, v))?
                    .ok_or_else(|| Error::UnknownSummand(injective_module(&self.alg, v).dims().to_vec()))
            })
            .collect()
    }
}
