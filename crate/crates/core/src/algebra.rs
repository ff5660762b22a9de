//! Bound quiver algebras kQ/I.
//!
//! Paths are stored in traversal order: `Path { source, arrows: [a, b] }` means
//! "first a, then b", which the `.alg` format writes as `b*a`.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{Field, Mat, Scalar};
use crate::repmod::Representation;

pub const DEFAULT_PATH_BOUND: usize = 64;
const PATH_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    n_vertices: usize,
    arrows: Vec<Arrow>,
}

impl Quiver {
    /// Vertices are `0..n_vertices`.
    pub fn new(n_vertices: usize, arrows: Vec<Arrow>) -> Result<Quiver> {
        for (i, a) in arrows.iter().enumerate() {
            if a.source >= n_vertices || a.target >= n_vertices {
                return Err(Error::InvalidQuiver(format!(
                    "arrow {} has an endpoint outside 0..{n_vertices}",
                    a.name
                )));
            }
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::InvalidQuiver(format!("duplicate arrow name {}", a.name)));
            }
        }
        Ok(Quiver { n_vertices, arrows })
    }

    /// Linearly oriented A_n: 0 -> 1 -> ... -> n-1, arrows named a1, a2, ...
    pub fn linear_a(n: usize) -> Quiver {
        let arrows = (0..n.saturating_sub(1))
            .map(|i| Arrow {
                name: format!("a{}", i + 1),
                source: i,
                target: i + 1,
            })
            .collect();
        Quiver::new(n, arrows).expect("valid linear quiver")
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    fn path_target(&self, source: usize, arrows: &[usize]) -> Option<usize> {
        let mut at = source;
        for &a in arrows {
            let arrow = self.arrows.get(a)?;
            if arrow.source != at {
                return None;
            }
            at = arrow.target;
        }
        Some(at)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Path {
        Path {
            source: v,
            arrows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

/// A linear combination of parallel paths (arrow indices in traversal order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl Relation {
    pub fn zero_path(arrows: Vec<usize>, field: Field) -> Relation {
        Relation {
            terms: vec![(field.one(), arrows)],
        }
    }
}

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// Sparse coordinates over the path basis.
pub type Coords = Vec<(usize, Scalar)>;

#[derive(Debug)]
pub struct BoundAlgebra {
    id: u64,
    quiver: Quiver,
    relations: Vec<Relation>,
    relation_endpoints: Vec<(usize, usize)>,
    field: Field,
    basis: Vec<Path>,
    /// `between[i][j]`: indices into `basis` of the paths from i to j.
    between: Vec<Vec<Vec<usize>>>,
    /// Reduction of every path of length at most `stable_length`.
    reductions: HashMap<Path, Coords>,
    stable_length: usize,
}

impl PartialEq for BoundAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for BoundAlgebra {}

fn all_paths_from(q: &Quiver, v: usize, max_len: usize, out: &mut Vec<Path>) -> Result<()> {
    let mut frontier = vec![Path::trivial(v)];
    out.push(Path::trivial(v));
    for _ in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let end = q.path_target(p.source, &p.arrows).expect("valid path");
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.source == end {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path { source: v, arrows });
                }
            }
        }
        out.extend(next.iter().cloned());
        if out.len() > PATH_CAP {
            return Err(Error::InfiniteDimensional {
                bound: max_len,
                paths: out.len(),
            });
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(())
}

impl BoundAlgebra {
    pub fn build(quiver: Quiver, relations: Vec<Relation>, field: Field) -> Result<Arc<BoundAlgebra>> {
        BoundAlgebra::build_with_bound(quiver, relations, field, DEFAULT_PATH_BOUND)
    }

    pub fn build_with_bound(
        quiver: Quiver,
        relations: Vec<Relation>,
        field: Field,
        bound: usize,
    ) -> Result<Arc<BoundAlgebra>> {
        let mut relation_endpoints = Vec::with_capacity(relations.len());
        for (ri, r) in relations.iter().enumerate() {
            let mut ends = None;
            if r.terms.is_empty() {
                return Err(Error::InvalidRelation(format!("relation {} is empty", ri + 1)));
            }
            for (c, arrows) in &r.terms {
                if c.field() != field {
                    return Err(Error::FieldMismatch);
                }
                if arrows.len() < 2 {
                    return Err(Error::InvalidRelation(format!(
                        "relation {} has a term of length {} (admissible relations need length at least 2)",
                        ri + 1,
                        arrows.len()
                    )));
                }
                let source = quiver.arrows.get(arrows[0]).map(|a| a.source).ok_or_else(|| {
                    Error::InvalidRelation(format!("relation {} uses an unknown arrow", ri + 1))
                })?;
                let target = quiver.path_target(source, arrows).ok_or_else(|| {
                    Error::InvalidRelation(format!("relation {} contains a non-composable path", ri + 1))
                })?;
                match ends {
                    None => ends = Some((source, target)),
                    Some(e) if e != (source, target) => {
                        return Err(Error::InvalidRelation(format!(
                            "relation {} mixes paths with different endpoints",
                            ri + 1
                        )))
                    }
                    _ => {}
                }
            }
            relation_endpoints.push(ends.expect("nonempty"));
        }

        let n = quiver.n_vertices;
        for len in 1..=bound {
            if let Some(alg) = Self::try_length(&quiver, &relations, &relation_endpoints, field, len)? {
                return Ok(Arc::new(alg));
            }
        }
        let mut count = Vec::new();
        for v in 0..n {
            all_paths_from(&quiver, v, bound, &mut count)?;
        }
        Err(Error::InfiniteDimensional {
            bound,
            paths: count.len(),
        })
    }

    /// Works in kQ modulo paths longer than `len`. Succeeds when every path of
    /// length `len` lies in the truncated ideal.
    fn try_length(
        quiver: &Quiver,
        relations: &[Relation],
        relation_endpoints: &[(usize, usize)],
        field: Field,
        len: usize,
    ) -> Result<Option<BoundAlgebra>> {
        let n = quiver.n_vertices;
        let mut paths = Vec::new();
        for v in 0..n {
            all_paths_from(quiver, v, len, &mut paths)?;
        }
        // group by (source, target)
        let mut classes: HashMap<(usize, usize), Vec<Path>> = HashMap::new();
        for p in paths {
            let t = quiver.path_target(p.source, &p.arrows).expect("valid");
            classes.entry((p.source, t)).or_default().push(p);
        }

        let mut basis = Vec::new();
        let mut between = vec![vec![Vec::new(); n]; n];
        let mut reductions: HashMap<Path, Coords> = HashMap::new();

        let mut keys: Vec<(usize, usize)> = classes.keys().copied().collect();
        keys.sort();
        for (i, j) in keys {
            let mut class = classes.remove(&(i, j)).expect("present");
            // longest first, then lexicographic: pivots fall on long paths
            class.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.arrows.cmp(&b.arrows)));
            let col_of: HashMap<&Path, usize> = class.iter().enumerate().map(|(k, p)| (p, k)).collect();

            let mut rows: Vec<Vec<Scalar>> = Vec::new();
            for (r, &(rs, rt)) in relations.iter().zip(relation_endpoints) {
                let min_len = r.terms.iter().map(|(_, a)| a.len()).min().unwrap_or(0);
                if min_len > len {
                    continue;
                }
                let room = len - min_len;
                let mut prefixes = Vec::new();
                all_paths_from(quiver, i, room, &mut prefixes)?;
                for pre in prefixes.iter().filter(|p| quiver.path_target(i, &p.arrows) == Some(rs)) {
                    let suffix_room = room - pre.len();
                    let mut suffixes = Vec::new();
                    all_paths_from(quiver, rt, suffix_room, &mut suffixes)?;
                    for suf in suffixes {
                        if quiver.path_target(rt, &suf.arrows) != Some(j) {
                            continue;
                        }
                        let mut row = vec![field.zero(); class.len()];
                        let mut nonzero = false;
                        for (c, arrows) in &r.terms {
                            let total = pre.len() + arrows.len() + suf.len();
                            if total > len {
                                continue;
                            }
                            let mut full = pre.arrows.clone();
                            full.extend_from_slice(arrows);
                            full.extend_from_slice(&suf.arrows);
                            let path = Path { source: i, arrows: full };
                            let k = col_of[&path];
                            row[k] = &row[k] + c;
                            nonzero = true;
                        }
                        if nonzero {
                            rows.push(row);
                        }
                    }
                }
            }

            let (pivots, reduced) = if rows.is_empty() {
                (Vec::new(), None)
            } else {
                let m = Mat::from_scalars(field, rows.len(), class.len(), rows.concat())?;
                let r = m.rref();
                (r.pivots.clone(), Some(r.reduced))
            };
            if class.iter().enumerate().any(|(k, p)| p.len() == len && !pivots.contains(&k)) {
                return Ok(None);
            }
            let mut local = HashMap::new();
            for (k, p) in class.iter().enumerate() {
                if !pivots.contains(&k) {
                    let idx = basis.len();
                    basis.push(p.clone());
                    between[i][j].push(idx);
                    local.insert(k, idx);
                }
            }
            for (k, p) in class.iter().enumerate() {
                if let Some(&idx) = local.get(&k) {
                    reductions.insert(p.clone(), vec![(idx, field.one())]);
                }
            }
            if let Some(reduced) = reduced {
                for (row, &pk) in pivots.iter().enumerate() {
                    let mut coords = Vec::new();
                    for (&k, &idx) in &local {
                        let v = reduced.get(row, k);
                        if !v.is_zero() {
                            coords.push((idx, -v));
                        }
                    }
                    coords.sort_by_key(|(i, _)| *i);
                    reductions.insert(class[pk].clone(), coords);
                }
            }
        }
        Ok(Some(BoundAlgebra {
            id: NEXT_ALGEBRA_ID.fetch_add(1, Ordering::Relaxed),
            quiver: quiver.clone(),
            relations: relations.to_vec(),
            relation_endpoints: relation_endpoints.to_vec(),
            field,
            basis,
            between,
            reductions,
            stable_length: len,
        }))
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn n_vertices(&self) -> usize {
        self.quiver.n_vertices
    }

    pub fn n_arrows(&self) -> usize {
        self.quiver.arrows.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Path] {
        &self.basis
    }

    /// Basis indices of the paths from `i` to `j`.
    pub fn paths_between(&self, i: usize, j: usize) -> &[usize] {
        &self.between[i][j]
    }

    pub fn path_target(&self, p: &Path) -> usize {
        self.quiver.path_target(p.source, &p.arrows).expect("valid path")
    }

    /// Coordinates of an arbitrary path over the basis; zero for paths of
    /// length beyond the stabilisation length.
    pub fn reduce(&self, p: &Path) -> Coords {
        if p.len() > self.stable_length {
            return Vec::new();
        }
        self.reductions.get(p).cloned().unwrap_or_default()
    }

    /// Product "first basis[a], then basis[b]" (zero when not composable).
    pub fn mul_basis(&self, a: usize, b: usize) -> Coords {
        let (pa, pb) = (&self.basis[a], &self.basis[b]);
        if self.path_target(pa) != pb.source {
            return Vec::new();
        }
        let mut arrows = pa.arrows.clone();
        arrows.extend_from_slice(&pb.arrows);
        self.reduce(&Path {
            source: pa.source,
            arrows,
        })
    }

    pub fn check_same(&self, other: &BoundAlgebra) -> Result<()> {
        if self.id == other.id {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn path_name(&self, p: &Path) -> String {
        if p.arrows.is_empty() {
            return format!("e{}", p.source + 1);
        }
        let names: Vec<&str> = p.arrows.iter().rev().map(|&a| self.quiver.arrows[a].name.as_str()).collect();
        names.join("*")
    }

    pub(crate) fn relation_endpoints(&self) -> &[(usize, usize)] {
        &self.relation_endpoints
    }
}

impl fmt::Display for BoundAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "kQ/I over {} with {} vertices, {} arrows, dimension {}",
            self.field,
            self.n_vertices(),
            self.n_arrows(),
            self.dim()
        )
    }
}

pub fn projective_module(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let n = alg.n_vertices();
    let field = alg.field();
    let dims: Vec<usize> = (0..n).map(|w| alg.paths_between(v, w).len()).collect();
    let maps = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            let src = alg.paths_between(v, a.source);
            let tgt = alg.paths_between(v, a.target);
            let mut m = Mat::zeros(field, tgt.len(), src.len());
            for (c, &p) in src.iter().enumerate() {
                let mut arrows = alg.basis()[p].arrows.clone();
                arrows.push(ai);
                for (idx, s) in alg.reduce(&Path { source: v, arrows }) {
                    let r = tgt.iter().position(|&t| t == idx).expect("target basis");
                    m.set(r, c, s);
                }
            }
            m
        })
        .collect();
    Representation::new_unchecked(alg.clone(), dims, maps)
}

pub fn injective_module(alg: &Arc<BoundAlgebra>, v: usize) -> Representation {
    let n = alg.n_vertices();
    let field = alg.field();
    let dims: Vec<usize> = (0..n).map(|w| alg.paths_between(w, v).len()).collect();
    let maps = alg
        .quiver()
        .arrows()
        .iter()
        .enumerate()
        .map(|(ai, a)| {
            // (alpha . phi)(q) = phi(alpha then q)
            let src = alg.paths_between(a.source, v);
            let tgt = alg.paths_between(a.target, v);
            let mut m = Mat::zeros(field, tgt.len(), src.len());
            for (r, &q) in tgt.iter().enumerate() {
                let mut arrows = vec![ai];
                arrows.extend_from_slice(&alg.basis()[q].arrows);
                for (idx, s) in alg.reduce(&Path {
                    source: a.source,
                    arrows,
                }) {
                    let c = src.iter().position(|&t| t == idx).expect("source basis");
                    m.set(r, c, s);
                }
            }
            m
        })
        .collect();
    Representation::new_unchecked(alg.clone(), dims, maps)
}
