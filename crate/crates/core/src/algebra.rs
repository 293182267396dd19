//! Bound quiver algebras and their finite-dimensional representations.
//!
//! Conventions: a path is written left to right (`[a, b]` means "a, then b"),
//! representations are covariant (an arrow `a: v -> w` acts as a matrix
//! `M_v -> M_w` on column vectors) and maps compose right to left. With
//! these, the indecomposable projective `P_v` is spanned by the basis paths
//! starting at `v`, `Hom(P_v, M) = M_v`, and an element `x` made of paths
//! `w -> v` induces the map `P_v -> P_w`, `q |-> x q`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactlin::{add_mod, inv_mod, is_odd_prime, mul_mod, neg_mod, Matrix};

/// Default cap on path length when searching for a finite basis.
pub const DEFAULT_PATH_CAP: usize = 32;
/// Budget for the number of paths enumerated while building a basis.
const PATH_BUDGET: usize = 500_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid quiver: {0}")]
    Quiver(String),
    #[error("invalid relation: {0}")]
    Relation(String),
    #[error("ideal is not admissible: no finite basis below path length {0}")]
    NotAdmissible(usize),
    #[error("invalid representation: {0}")]
    Representation(String),
    #[error("modules live over different algebras")]
    AlgebraMismatch,
    #[error("decomposition not certified after {tries} attempts (seed {seed}); partial split into {parts} pieces")]
    Decomposition { seed: u64, tries: usize, parts: usize },
    #[error("{0}")]
    Other(String),
}

pub type Result<T, E = AlgebraError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<Arrow>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if vertices[..i].contains(v) {
                return Err(AlgebraError::Quiver(format!("duplicate vertex '{v}'")));
            }
        }
        for (i, a) in arrows.iter().enumerate() {
            if arrows[..i].iter().any(|b| b.name == a.name) {
                return Err(AlgebraError::Quiver(format!("duplicate arrow '{}'", a.name)));
            }
            if a.source >= vertices.len() || a.target >= vertices.len() {
                return Err(AlgebraError::Quiver(format!("arrow '{}' has a missing endpoint", a.name)));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == label)
    }

    pub fn arrow(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    pub fn opposite(&self) -> Quiver {
        let arrows = self
            .arrows
            .iter()
            .map(|a| Arrow { name: a.name.clone(), source: a.target, target: a.source })
            .collect();
        Quiver { vertices: self.vertices.clone(), arrows }
    }
}

/// A path: its start vertex and the arrows traversed, left to right.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub start: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn trivial(v: usize) -> Self {
        Path { start: v, arrows: vec![] }
    }

    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn end(&self, q: &Quiver) -> usize {
        self.arrows.last().map_or(self.start, |&a| q.arrows[a].target)
    }

    /// Path through the named arrows, checking composability.
    pub fn from_names(q: &Quiver, names: &[&str]) -> Result<Self> {
        let mut arrows = Vec::new();
        for n in names {
            arrows.push(q.arrow(n).ok_or_else(|| AlgebraError::Relation(format!("unknown arrow '{n}'")))?);
        }
        let Some(&first) = arrows.first() else {
            return Err(AlgebraError::Relation("empty path needs a vertex".into()));
        };
        let p = Path { start: q.arrows[first].source, arrows };
        p.check(q)?;
        Ok(p)
    }

    pub fn check(&self, q: &Quiver) -> Result<()> {
        let mut at = self.start;
        for &a in &self.arrows {
            let arr = q.arrows.get(a).ok_or_else(|| AlgebraError::Relation(format!("arrow index {a}")))?;
            if arr.source != at {
                return Err(AlgebraError::Relation(format!("arrow '{}' does not compose", arr.name)));
            }
            at = arr.target;
        }
        Ok(())
    }

    pub fn concat(&self, other: &Path) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Path { start: self.start, arrows }
    }

    pub fn reversed(&self, q: &Quiver) -> Path {
        Path { start: self.end(q), arrows: self.arrows.iter().rev().copied().collect() }
    }

    pub fn display(&self, q: &Quiver) -> String {
        if self.arrows.is_empty() {
            format!("e_{}", q.vertices[self.start])
        } else {
            self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join("*")
        }
    }

    fn names<'a>(&self, q: &'a Quiver) -> Vec<&'a str> {
        self.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect()
    }
}

/// A linear combination of parallel paths of one common length.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    pub terms: Vec<(u32, Path)>,
}

impl Relation {
    pub fn monomial(p: Path) -> Self {
        Relation { terms: vec![(1, p)] }
    }

    pub fn binomial(a: Path, b: Path, p: u32) -> Self {
        Relation { terms: vec![(1, a), (p - 1, b)] }
    }
}

/// Per (start, end, length) data used to reduce paths to normal form.
#[derive(Debug, Clone)]
enum Block {
    /// Every path of this shape lies in the ideal.
    Full,
    Sub {
        /// All paths of this shape, lexicographically descending.
        paths: Vec<Path>,
        col: HashMap<Path, usize>,
        rref: Matrix,
        pivots: Vec<usize>,
    },
}

/// A finite-dimensional quotient of a path algebra by homogeneous relations,
/// together with a path basis and multiplication table.
#[derive(Clone)]
pub struct Algebra {
    p: u32,
    quiver: Quiver,
    relations: Vec<Relation>,
    basis: Vec<Path>,
    ends: Vec<usize>,
    index: HashMap<Path, usize>,
    blocks: HashMap<(usize, usize, usize), Block>,
    mult: Vec<Vec<(usize, u32)>>,
    /// `paths_from[v][y]`: basis indices of paths `v -> y`, ascending.
    paths_from: Vec<Vec<Vec<usize>>>,
    /// Position of a basis index inside its `paths_from` list.
    local_pos: Vec<usize>,
    max_len: usize,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.quiver == other.quiver && self.relations == other.relations
    }
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Algebra(p={}, {} vertices, {} arrows, {} relations, dim {})",
            self.p,
            self.quiver.vertices.len(),
            self.quiver.arrows.len(),
            self.relations.len(),
            self.dim()
        )
    }
}

/// An element of the algebra, as coordinates in the path basis.
pub type Elem = Vec<u32>;

impl Algebra {
    pub fn new(p: u32, quiver: Quiver, relations: Vec<Relation>) -> Result<Self> {
        Self::with_cap(p, quiver, relations, DEFAULT_PATH_CAP)
    }

    pub fn with_cap(p: u32, quiver: Quiver, relations: Vec<Relation>, cap: usize) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(AlgebraError::Other(format!("{p} is not an odd prime")));
        }
        let mut rels = Vec::new();
        for r in relations {
            let mut terms: Vec<(u32, Path)> = Vec::new();
            for (c, path) in r.terms {
                path.check(&quiver)?;
                let c = c % p;
                if c == 0 {
                    continue;
                }
                if let Some(t) = terms.iter_mut().find(|t| t.1 == path) {
                    t.0 = add_mod(t.0, c, p);
                } else {
                    terms.push((c, path));
                }
            }
            terms.retain(|t| t.0 != 0);
            if terms.is_empty() {
                continue;
            }
            let (s, e, l) = (terms[0].1.start, terms[0].1.end(&quiver), terms[0].1.len());
            for (_, t) in &terms {
                if t.start != s || t.end(&quiver) != e {
                    return Err(AlgebraError::Relation("paths in a relation must be parallel".into()));
                }
                if t.len() != l {
                    return Err(AlgebraError::Relation("relations must be homogeneous (paths of one length)".into()));
                }
                if t.len() < 2 {
                    return Err(AlgebraError::Relation("relation paths must have length >= 2".into()));
                }
            }
            rels.push(Relation { terms });
        }
        let mut alg = Algebra {
            p,
            quiver,
            relations: rels,
            basis: vec![],
            ends: vec![],
            index: HashMap::new(),
            blocks: HashMap::new(),
            mult: vec![],
            paths_from: vec![],
            local_pos: vec![],
            max_len: 0,
        };
        alg.build_basis(cap)?;
        alg.build_tables();
        Ok(alg)
    }

    pub fn prime(&self) -> u32 {
        self.p
    }
    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }
    pub fn num_vertices(&self) -> usize {
        self.quiver.vertices.len()
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn path_basis(&self) -> &[Path] {
        &self.basis
    }
    pub fn max_path_len(&self) -> usize {
        self.max_len
    }
    pub fn basis_start(&self, i: usize) -> usize {
        self.basis[i].start
    }
    pub fn basis_end(&self, i: usize) -> usize {
        self.ends[i]
    }
    pub fn basis_index(&self, p: &Path) -> Option<usize> {
        self.index.get(p).copied()
    }
    pub fn paths_between(&self, from: usize, to: usize) -> &[usize] {
        &self.paths_from[from][to]
    }
    pub fn local_pos(&self, i: usize) -> usize {
        self.local_pos[i]
    }

    fn sort_key(&self, p: &Path) -> (usize, Vec<String>, usize) {
        (p.len(), p.names(&self.quiver).into_iter().map(String::from).collect(), p.start)
    }

    fn lex_desc(&self, paths: &mut [Path]) {
        paths.sort_by(|a, b| self.sort_key(b).cmp(&self.sort_key(a)));
    }

    fn all_paths(&self, u: usize, v: usize, len: usize, budget: &mut usize) -> Result<Vec<Path>> {
        let mut out = Vec::new();
        let mut stack = vec![(u, Vec::<usize>::new())];
        while let Some((at, arrows)) = stack.pop() {
            if arrows.len() == len {
                if at == v {
                    out.push(Path { start: u, arrows });
                }
                continue;
            }
            for (ai, a) in self.quiver.arrows.iter().enumerate() {
                if a.source == at {
                    let mut next = arrows.clone();
                    next.push(ai);
                    stack.push((a.target, next));
                }
            }
            if *budget == 0 {
                return Err(AlgebraError::NotAdmissible(len));
            }
            *budget -= 1;
        }
        Ok(out)
    }

    fn build_basis(&mut self, cap: usize) -> Result<()> {
        let nv = self.num_vertices();
        let q = self.quiver.clone();
        let p = self.p;
        let mut basis_by_len: Vec<Vec<Path>> = vec![(0..nv).map(Path::trivial).collect()];
        let arrow_paths: Vec<Path> =
            (0..q.arrows.len()).map(|a| Path { start: q.arrows[a].source, arrows: vec![a] }).collect();
        for len in 0..=1usize {
            let list = if len == 0 { basis_by_len[0].clone() } else { arrow_paths.clone() };
            let mut groups: BTreeMap<(usize, usize), Vec<Path>> = BTreeMap::new();
            for path in list {
                groups.entry((path.start, path.end(&q))).or_default().push(path);
            }
            for ((u, v), mut paths) in groups {
                self.lex_desc(&mut paths);
                let col = paths.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
                let n = paths.len();
                self.blocks.insert((u, v, len), Block::Sub { paths, col, rref: Matrix::zeros(p, 0, n), pivots: vec![] });
            }
        }
        basis_by_len.push(arrow_paths);
        let mut budget = PATH_BUDGET;
        let mut len = 2;
        loop {
            if basis_by_len[len - 1].is_empty() {
                break;
            }
            if len > cap {
                return Err(AlgebraError::NotAdmissible(cap));
            }
            let prev: std::collections::HashSet<&Path> = basis_by_len[len - 1].iter().collect();
            let mut cand: BTreeMap<(usize, usize), usize> = BTreeMap::new();
            for bp in &basis_by_len[len - 1] {
                let end = bp.end(&q);
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.source != end {
                        continue;
                    }
                    let suffix = Path { start: q.arrows[bp.arrows[0]].target, arrows: [&bp.arrows[1..], &[ai]].concat() };
                    if prev.contains(&suffix) {
                        *cand.entry((bp.start, a.target)).or_default() += 1;
                    }
                }
            }
            let mut new_basis = Vec::new();
            for (&(u, v), _) in &cand {
                let mut paths = self.all_paths(u, v, len, &mut budget)?;
                self.lex_desc(&mut paths);
                let col: HashMap<Path, usize> = paths.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect();
                let n = paths.len();
                let mut rows: Vec<Vec<u32>> = Vec::new();
                let mut push_path = |rows: &mut Vec<Vec<u32>>, path: &Path| {
                    let mut r = vec![0u32; n];
                    r[col[path]] = 1;
                    rows.push(r);
                };
                // prefix by an arrow: a * I_{len-1}(a.target, v)
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.source != u {
                        continue;
                    }
                    let pre = Path { start: u, arrows: vec![ai] };
                    self.extend_rows(&mut rows, &col, n, (a.target, v, len - 1), |x| pre.concat(x), &mut push_path, &mut budget)?;
                }
                // suffix by an arrow: I_{len-1}(u, a.source) * a
                for (ai, a) in q.arrows.iter().enumerate() {
                    if a.target != v {
                        continue;
                    }
                    let suf = Path { start: a.source, arrows: vec![ai] };
                    self.extend_rows(&mut rows, &col, n, (u, a.source, len - 1), |x| x.concat(&suf), &mut push_path, &mut budget)?;
                }
                for r in &self.relations {
                    let t0 = &r.terms[0].1;
                    if t0.start == u && t0.end(&q) == v && t0.len() == len {
                        let mut row = vec![0u32; n];
                        for (c, t) in &r.terms {
                            row[col[t]] = add_mod(row[col[t]], *c, p);
                        }
                        rows.push(row);
                    }
                }
                let mut m = Matrix::zeros(p, rows.len(), n);
                for (i, r) in rows.iter().enumerate() {
                    for (j, &x) in r.iter().enumerate() {
                        m.set(i, j, x);
                    }
                }
                let (rr, pivots) = m.rref();
                if pivots.len() == n {
                    self.blocks.insert((u, v, len), Block::Full);
                    continue;
                }
                let rref = rr.block(0, 0, pivots.len(), n);
                let is_piv: Vec<bool> = (0..n).map(|j| pivots.contains(&j)).collect();
                for (j, path) in paths.iter().enumerate() {
                    if !is_piv[j] {
                        new_basis.push(path.clone());
                    }
                }
                self.blocks.insert((u, v, len), Block::Sub { paths, col, rref, pivots });
            }
            basis_by_len.push(new_basis);
            len += 1;
        }
        self.max_len = basis_by_len.iter().rposition(|b| !b.is_empty()).unwrap_or(0);
        let mut basis: Vec<Path> = basis_by_len.into_iter().flatten().collect();
        basis.sort_by(|a, b| self.sort_key(a).cmp(&self.sort_key(b)));
        self.ends = basis.iter().map(|b| b.end(&q)).collect();
        self.index = basis.iter().cloned().enumerate().map(|(i, b)| (b, i)).collect();
        self.basis = basis;
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_rows(
        &self,
        rows: &mut Vec<Vec<u32>>,
        col: &HashMap<Path, usize>,
        n: usize,
        key: (usize, usize, usize),
        f: impl Fn(&Path) -> Path,
        push_path: &mut impl FnMut(&mut Vec<Vec<u32>>, &Path),
        budget: &mut usize,
    ) -> Result<()> {
        match self.blocks.get(&key) {
            None | Some(Block::Full) => {
                let (s, e, l) = key;
                for x in self.all_paths(s, e, l, budget)? {
                    push_path(rows, &f(&x));
                }
            }
            Some(Block::Sub { paths, rref, .. }) => {
                for i in 0..rref.rows() {
                    let mut r = vec![0u32; n];
                    for (j, x) in paths.iter().enumerate() {
                        let c = rref.get(i, j);
                        if c != 0 {
                            r[col[&f(x)]] = c;
                        }
                    }
                    rows.push(r);
                }
            }
        }
        Ok(())
    }

    /// Normal form of an arbitrary path, as a sparse combination of basis indices.
    pub fn reduce_path(&self, path: &Path) -> Vec<(usize, u32)> {
        if let Some(&i) = self.index.get(path) {
            return vec![(i, 1)];
        }
        let key = (path.start, path.end(&self.quiver), path.len());
        match self.blocks.get(&key) {
            None | Some(Block::Full) => vec![],
            Some(Block::Sub { paths, col, rref, pivots }) => {
                let Some(&c) = col.get(path) else { return vec![] };
                let Some(k) = pivots.iter().position(|&pc| pc == c) else {
                    return vec![(self.index[path], 1)];
                };
                let mut out = Vec::new();
                for (j, x) in paths.iter().enumerate() {
                    if j == c {
                        continue;
                    }
                    let v = rref.get(k, j);
                    if v != 0 {
                        out.push((self.index[x], neg_mod(v, self.p)));
                    }
                }
                out
            }
        }
    }

    fn build_tables(&mut self) {
        let d = self.dim();
        let nv = self.num_vertices();
        let mut mult = vec![vec![]; d * d];
        for i in 0..d {
            for j in 0..d {
                if self.ends[i] != self.basis[j].start {
                    continue;
                }
                let prod = self.basis[i].concat(&self.basis[j]);
                mult[i * d + j] = self.reduce_path(&prod);
            }
        }
        self.mult = mult;
        let mut paths_from = vec![vec![vec![]; nv]; nv];
        let mut local_pos = vec![0; d];
        for i in 0..d {
            let list: &mut Vec<usize> = &mut paths_from[self.basis[i].start][self.ends[i]];
            local_pos[i] = list.len();
            list.push(i);
        }
        self.paths_from = paths_from;
        self.local_pos = local_pos;
    }

    /// Product of two basis elements (`i` then `j`).
    pub fn mult_basis(&self, i: usize, j: usize) -> &[(usize, u32)] {
        &self.mult[i * self.dim() + j]
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.dim()]
    }

    pub fn basis_elem(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn idempotent(&self, v: usize) -> Elem {
        self.basis_elem(self.index[&Path::trivial(v)])
    }

    pub fn arrow_elem(&self, a: usize) -> Elem {
        let path = Path { start: self.quiver.arrows[a].source, arrows: vec![a] };
        self.basis_elem(self.index[&path])
    }

    pub fn path_elem(&self, path: &Path) -> Elem {
        let mut e = self.zero();
        for (i, c) in self.reduce_path(path) {
            e[i] = add_mod(e[i], c, self.p);
        }
        e
    }

    pub fn mul(&self, x: &[u32], y: &[u32]) -> Elem {
        let d = self.dim();
        let p = self.p;
        let mut out = vec![0u32; d];
        for (i, &a) in x.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in y.iter().enumerate() {
                if b == 0 || self.ends[i] != self.basis[j].start {
                    continue;
                }
                let ab = mul_mod(a, b, p);
                for &(k, c) in &self.mult[i * d + j] {
                    out[k] = add_mod(out[k], mul_mod(ab, c, p), p);
                }
            }
        }
        out
    }

    pub fn add(&self, x: &[u32], y: &[u32]) -> Elem {
        x.iter().zip(y).map(|(&a, &b)| add_mod(a, b, self.p)).collect()
    }

    pub fn scale(&self, x: &[u32], c: u32) -> Elem {
        x.iter().map(|&a| mul_mod(a, c, self.p)).collect()
    }

    pub fn neg(&self, x: &[u32]) -> Elem {
        x.iter().map(|&a| neg_mod(a, self.p)).collect()
    }

    pub fn is_zero_elem(x: &[u32]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// Coefficient of the trivial path `e_v` in `x`.
    pub fn trivial_coeff(&self, x: &[u32], v: usize) -> u32 {
        x[self.index[&Path::trivial(v)]]
    }

    /// Inverse of a unit of the local ring `e_v A e_v`.
    pub fn local_inverse(&self, x: &[u32], v: usize) -> Option<Elem> {
        let lam = self.trivial_coeff(x, v);
        if lam == 0 {
            return None;
        }
        // x = lam (e + n) with n nilpotent; (e + n)^{-1} = sum (-n)^k
        let li = inv_mod(lam, self.p);
        let e = self.idempotent(v);
        let mut n = self.scale(x, li);
        n = self.add(&n, &self.neg(&e));
        let mn = self.neg(&n);
        let mut term = e.clone();
        let mut acc = e;
        for _ in 0..=self.max_len {
            term = self.mul(&term, &mn);
            if Self::is_zero_elem(&term) {
                break;
            }
            acc = self.add(&acc, &term);
        }
        Some(self.scale(&acc, li))
    }

    pub fn elem_display(&self, x: &[u32]) -> String {
        let terms: Vec<String> = x
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let s = self.basis[i].display(&self.quiver);
                if c == 1 {
                    s
                } else {
                    format!("{}*{}", crate::exactlin::signed(c, self.p), s)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// The opposite algebra: arrows and relation paths reversed.
    pub fn opposite(&self) -> Result<Algebra> {
        let q = self.quiver.opposite();
        let rels = self
            .relations
            .iter()
            .map(|r| Relation { terms: r.terms.iter().map(|(c, t)| (*c, t.reversed(&self.quiver))).collect() })
            .collect();
        Algebra::new(self.p, q, rels)
    }

    /// Transport an element to the opposite algebra `op` (reverse every path).
    pub fn to_opposite(&self, op: &Algebra, x: &[u32]) -> Elem {
        let mut out = op.zero();
        for (i, &c) in x.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let rev = self.basis[i].reversed(&self.quiver);
            for (k, d) in op.reduce_path(&rev) {
                out[k] = add_mod(out[k], mul_mod(c, d, self.p), self.p);
            }
        }
        out
    }

    /// `k[eps] (x) self`: a loop `eps_v` at every vertex, `eps_v^2 = 0` and
    /// `eps_v a = a eps_w` for every arrow `a: v -> w`.
    pub fn dual_numbers_extension(&self) -> Result<Algebra> {
        let p = self.p;
        let mut arrows = self.quiver.arrows.clone();
        let base = arrows.len();
        for (v, label) in self.quiver.vertices.iter().enumerate() {
            let mut name = format!("eps_{label}");
            while arrows.iter().any(|a| a.name == name) {
                name.push('\'');
            }
            arrows.push(Arrow { name, source: v, target: v });
        }
        let q = Quiver::new(self.quiver.vertices.clone(), arrows)?;
        let mut rels = self.relations.clone();
        for v in 0..self.num_vertices() {
            rels.push(Relation::monomial(Path { start: v, arrows: vec![base + v, base + v] }));
        }
        for (ai, a) in self.quiver.arrows.iter().enumerate() {
            let left = Path { start: a.source, arrows: vec![base + a.source, ai] };
            let right = Path { start: a.source, arrows: vec![ai, base + a.target] };
            rels.push(Relation::binomial(left, right, p));
        }
        Algebra::new(p, q, rels)
    }

    /// Index of the loop `eps_v` in an algebra built by `dual_numbers_extension`
    /// from an algebra with `base_arrows` arrows.
    pub fn eps_arrow(base_arrows: usize, v: usize) -> usize {
        base_arrows + v
    }
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

/// A finite-dimensional representation: one matrix per arrow.
#[derive(Clone)]
pub struct Module {
    pub alg: Arc<Algebra>,
    pub dims: Vec<usize>,
    pub mats: Vec<Matrix>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module{:?}", self.dims)
    }
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        same_alg(&self.alg, &other.alg) && self.dims == other.dims && self.mats == other.mats
    }
}

pub fn same_alg(a: &Arc<Algebra>, b: &Arc<Algebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A module homomorphism, one matrix per vertex (`target_v x source_v`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub mats: Vec<Matrix>,
}

impl Module {
    pub fn new(alg: Arc<Algebra>, dims: Vec<usize>, mats: Vec<Matrix>) -> Result<Self> {
        let q = alg.quiver();
        if dims.len() != q.num_vertices() || mats.len() != q.arrows.len() {
            return Err(AlgebraError::Representation("wrong number of dimensions or matrices".into()));
        }
        for (a, m) in q.arrows.iter().zip(&mats) {
            if m.shape() != (dims[a.target], dims[a.source]) {
                return Err(AlgebraError::Representation(format!(
                    "arrow '{}' needs a {}x{} matrix, got {}x{}",
                    a.name,
                    dims[a.target],
                    dims[a.source],
                    m.rows(),
                    m.cols()
                )));
            }
            if m.prime() != alg.prime() {
                return Err(AlgebraError::Representation("matrix over the wrong field".into()));
            }
        }
        let m = Module { alg, dims, mats };
        for (k, r) in m.alg.relations().iter().enumerate() {
            let mut acc: Option<Matrix> = None;
            for (c, path) in &r.terms {
                let t = m.act_path(path).scale(*c);
                acc = Some(match acc {
                    None => t,
                    Some(a) => a.add(&t),
                });
            }
            if !acc.map_or(true, |a| a.is_zero()) {
                return Err(AlgebraError::Representation(format!("relation {k} does not vanish")));
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(alg: Arc<Algebra>, dims: Vec<usize>, mats: Vec<Matrix>) -> Self {
        Module { alg, dims, mats }
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        let p = alg.prime();
        let mats = alg.quiver().arrows.iter().map(|_| Matrix::zeros(p, 0, 0)).collect();
        Module { alg: alg.clone(), dims: vec![0; alg.num_vertices()], mats }
    }

    pub fn simple(alg: &Arc<Algebra>, v: usize) -> Self {
        let p = alg.prime();
        let mut dims = vec![0; alg.num_vertices()];
        dims[v] = 1;
        let mats = alg.quiver().arrows.iter().map(|a| Matrix::zeros(p, dims[a.target], dims[a.source])).collect();
        Module { alg: alg.clone(), dims, mats }
    }

    /// The indecomposable projective at `v`.
    pub fn projective(alg: &Arc<Algebra>, v: usize) -> Self {
        Self::proj_sum(alg, &[v])
    }

    /// `P_{v_1} (+) ... (+) P_{v_k}`; at vertex `y` the basis is the paths
    /// `v_j -> y`, summand by summand.
    pub fn proj_sum(alg: &Arc<Algebra>, verts: &[usize]) -> Self {
        let p = alg.prime();
        let nv = alg.num_vertices();
        let dims: Vec<usize> = (0..nv).map(|y| verts.iter().map(|&v| alg.paths_between(v, y).len()).sum()).collect();
        let mut mats = Vec::new();
        for (ai, a) in alg.quiver().arrows.iter().enumerate() {
            let ae = alg.arrow_elem(ai);
            let ai_idx = ae.iter().position(|&c| c == 1).unwrap();
            let mut m = Matrix::zeros(p, dims[a.target], dims[a.source]);
            let (mut off_s, mut off_t) = (0, 0);
            for &v in verts {
                let src = alg.paths_between(v, a.source);
                for (k, &q) in src.iter().enumerate() {
                    for &(r, c) in alg.mult_basis(q, ai_idx) {
                        m.add_at(off_t + alg.local_pos(r), off_s + k, c);
                    }
                }
                off_s += src.len();
                off_t += alg.paths_between(v, a.target).len();
            }
            mats.push(m);
        }
        Module { alg: alg.clone(), dims, mats }
    }

    /// The algebra as a module over itself.
    pub fn regular(alg: &Arc<Algebra>) -> Self {
        let verts: Vec<usize> = (0..alg.num_vertices()).collect();
        Self::proj_sum(alg, &verts)
    }

    pub fn prime(&self) -> u32 {
        self.alg.prime()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn act_path(&self, path: &Path) -> Matrix {
        let mut m = Matrix::identity(self.prime(), self.dims[path.start]);
        for &a in &path.arrows {
            m = self.mats[a].mul(&m);
        }
        m
    }

    /// Actions of all basis paths, indexed like the path basis.
    pub fn basis_actions(&self) -> Vec<Matrix> {
        let alg = &self.alg;
        let mut out: Vec<Matrix> = Vec::with_capacity(alg.dim());
        for (i, b) in alg.path_basis().iter().enumerate() {
            let m = if b.arrows.is_empty() {
                Matrix::identity(self.prime(), self.dims[b.start])
            } else {
                let prefix = Path { start: b.start, arrows: b.arrows[..b.len() - 1].to_vec() };
                let k = alg.basis_index(&prefix).expect("path basis is prefix closed");
                debug_assert!(k < i);
                self.mats[*b.arrows.last().unwrap()].mul(&out[k])
            };
            out.push(m);
        }
        out
    }

    /// Action of an element supported on paths `from -> to`.
    pub fn act_elem(&self, actions: &[Matrix], x: &[u32], from: usize, to: usize) -> Matrix {
        let mut m = Matrix::zeros(self.prime(), self.dims[to], self.dims[from]);
        for &i in self.alg.paths_between(from, to) {
            if x[i] != 0 {
                m.add_assign_scaled(&actions[i], x[i]);
            }
        }
        m
    }

    pub fn dim_vector(&self) -> Vec<usize> {
        self.dims.clone()
    }
}

impl Hom {
    pub fn zero(src: &Module, tgt: &Module) -> Hom {
        let p = src.prime();
        Hom { mats: (0..src.dims.len()).map(|v| Matrix::zeros(p, tgt.dims[v], src.dims[v])).collect() }
    }

    pub fn identity(m: &Module) -> Hom {
        Hom { mats: m.dims.iter().map(|&d| Matrix::identity(m.prime(), d)).collect() }
    }

    /// `self o other`
    pub fn compose(&self, other: &Hom) -> Hom {
        Hom { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn add(&self, other: &Hom) -> Hom {
        Hom { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &Hom) -> Hom {
        Hom { mats: self.mats.iter().zip(&other.mats).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn scale(&self, c: u32) -> Hom {
        Hom { mats: self.mats.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn neg(&self) -> Hom {
        Hom { mats: self.mats.iter().map(|a| a.neg()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.mats.iter().all(|m| m.is_zero())
    }

    pub fn is_iso(&self) -> bool {
        self.mats.iter().all(|m| m.is_invertible())
    }

    pub fn is_mono(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_epi(&self) -> bool {
        self.mats.iter().all(|m| m.rank() == m.rows())
    }

    /// Commuting squares for every arrow.
    pub fn is_hom(&self, src: &Module, tgt: &Module) -> bool {
        let q = src.alg.quiver();
        for (v, m) in self.mats.iter().enumerate() {
            if m.shape() != (tgt.dims[v], src.dims[v]) {
                return false;
            }
        }
        q.arrows.iter().enumerate().all(|(ai, a)| {
            tgt.mats[ai].mul(&self.mats[a.source]) == self.mats[a.target].mul(&src.mats[ai])
        })
    }

    pub fn flatten(&self) -> Vec<u32> {
        self.mats.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn unflatten(src: &Module, tgt: &Module, v: &[u32]) -> Hom {
        let p = src.prime();
        let mut off = 0;
        let mut mats = Vec::new();
        for y in 0..src.dims.len() {
            let (r, c) = (tgt.dims[y], src.dims[y]);
            mats.push(Matrix::from_vec(p, r, c, v[off..off + r * c].to_vec()));
            off += r * c;
        }
        Hom { mats }
    }

    pub fn rank(&self) -> usize {
        self.mats.iter().map(|m| m.rank()).sum()
    }
}

/// Basis of `Hom(m, n)` via one nullspace computation.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<Hom>> {
    if !same_alg(&m.alg, &n.alg) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let p = m.prime();
    let nv = m.dims.len();
    let mut off = vec![0usize; nv + 1];
    for v in 0..nv {
        off[v + 1] = off[v] + n.dims[v] * m.dims[v];
    }
    let nvars = off[nv];
    if nvars == 0 {
        return Ok(vec![]);
    }
    let q = m.alg.quiver();
    let neqs: usize = q.arrows.iter().map(|a| n.dims[a.target] * m.dims[a.source]).sum();
    let mut eq = Matrix::zeros(p, neqs, nvars);
    let mut row = 0;
    for (ai, a) in q.arrows.iter().enumerate() {
        let (v, w) = (a.source, a.target);
        let (ma, na) = (&m.mats[ai], &n.mats[ai]);
        // (N(a) f_v - f_w M(a))[i][j] = 0 for i < n_w, j < m_v
        for i in 0..n.dims[w] {
            for j in 0..m.dims[v] {
                for k in 0..n.dims[v] {
                    let c = na.get(i, k);
                    if c != 0 {
                        eq.add_at(row, off[v] + k * m.dims[v] + j, c);
                    }
                }
                for k in 0..m.dims[w] {
                    let c = ma.get(k, j);
                    if c != 0 {
                        eq.add_at(row, off[w] + i * m.dims[w] + k, neg_mod(c, p));
                    }
                }
                row += 1;
            }
        }
    }
    Ok(eq.nullspace().into_iter().map(|v| Hom::unflatten(m, n, &v)).collect())
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    Ok(hom_space(m, n)?.len())
}

/// A submodule given by a basis (columns) at each vertex, plus its action.
fn submodule_from_bases(ambient: &Module, bases: Vec<Matrix>) -> (Module, Hom) {
    let q = ambient.alg.quiver();
    let p = ambient.prime();
    let dims: Vec<usize> = bases.iter().map(|b| b.cols()).collect();
    let mut mats = Vec::new();
    for (ai, a) in q.arrows.iter().enumerate() {
        let img = ambient.mats[ai].mul(&bases[a.source]);
        let x = bases[a.target]
            .solve(&img)
            .expect("shapes agree")
            .unwrap_or_else(|| panic!("subspace not closed under arrow '{}'", a.name));
        mats.push(x);
    }
    let _ = p;
    let sub = Module::new_unchecked(ambient.alg.clone(), dims, mats);
    (sub, Hom { mats: bases })
}

pub fn kernel(f: &Hom, src: &Module) -> (Module, Hom) {
    let bases = f.mats.iter().map(|m| m.kernel_matrix()).collect();
    submodule_from_bases(src, bases)
}

pub fn image(f: &Hom, tgt: &Module) -> (Module, Hom) {
    let bases = f.mats.iter().map(|m| m.column_basis()).collect();
    submodule_from_bases(tgt, bases)
}

/// Quotient of `tgt` by the image of `f`: the module, the projection and a
/// linear (not module) section of the projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Module,
    pub proj: Hom,
    pub section: Vec<Matrix>,
}

pub fn cokernel(f: &Hom, tgt: &Module) -> Quotient {
    let p = tgt.prime();
    let q = tgt.alg.quiver();
    let mut proj = Vec::new();
    let mut section = Vec::new();
    for (v, fm) in f.mats.iter().enumerate() {
        let n = tgt.dims[v];
        let b = fm.column_basis();
        let r = b.cols();
        let aug = b.hstack(&Matrix::identity(p, n));
        let (_, piv) = aug.rref();
        let extra: Vec<usize> = piv.iter().filter(|&&c| c >= r).map(|&c| c - r).collect();
        let e = Matrix::identity(p, n).select_cols(&extra);
        let t = b.hstack(&e);
        let tinv = t.inverse().expect("basis extension is invertible");
        proj.push(tinv.block(r, 0, n - r, n));
        section.push(e);
    }
    let dims: Vec<usize> = section.iter().map(|s| s.cols()).collect();
    let mats = q
        .arrows
        .iter()
        .enumerate()
        .map(|(ai, a)| proj[a.target].mul(&tgt.mats[ai]).mul(&section[a.source]))
        .collect();
    Quotient { module: Module::new_unchecked(tgt.alg.clone(), dims, mats), proj: Hom { mats: proj }, section }
}

/// `rad(m)`: the sum of the images of all arrows.
pub fn radical(m: &Module) -> (Module, Hom) {
    let p = m.prime();
    let q = m.alg.quiver();
    let mut bases = Vec::new();
    for y in 0..m.dims.len() {
        let mut acc = Matrix::zeros(p, m.dims[y], 0);
        for (ai, a) in q.arrows.iter().enumerate() {
            if a.target == y {
                acc = acc.hstack(&m.mats[ai]);
            }
        }
        bases.push(acc.column_basis());
    }
    submodule_from_bases(m, bases)
}

pub fn top(m: &Module) -> Quotient {
    let (_, incl) = radical(m);
    cokernel(&incl, m)
}

pub fn direct_sum(ms: &[Module]) -> Result<Module> {
    let Some(first) = ms.first() else {
        return Err(AlgebraError::Other("direct sum of no modules needs an algebra".into()));
    };
    let mut acc = first.clone();
    for m in &ms[1..] {
        if !same_alg(&acc.alg, &m.alg) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        acc = sum2(&acc, m);
    }
    Ok(acc)
}

pub fn sum2(a: &Module, b: &Module) -> Module {
    let dims = a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect();
    let mats = a.mats.iter().zip(&b.mats).map(|(x, y)| x.block_diag(y)).collect();
    Module::new_unchecked(a.alg.clone(), dims, mats)
}

/// Inclusions and projections of `a (+) b`.
pub fn sum2_maps(a: &Module, b: &Module) -> (Hom, Hom, Hom, Hom) {
    let p = a.prime();
    let nv = a.dims.len();
    let mut ia = vec![];
    let mut ib = vec![];
    let mut pa = vec![];
    let mut pb = vec![];
    for v in 0..nv {
        let (x, y) = (a.dims[v], b.dims[v]);
        let idx = Matrix::identity(p, x);
        let idy = Matrix::identity(p, y);
        ia.push(idx.vstack(&Matrix::zeros(p, y, x)));
        ib.push(Matrix::zeros(p, x, y).vstack(&idy));
        pa.push(idx.hstack(&Matrix::zeros(p, x, y)));
        pb.push(Matrix::zeros(p, y, x).hstack(&idy));
    }
    (Hom { mats: ia }, Hom { mats: ib }, Hom { mats: pa }, Hom { mats: pb })
}

/// Block hom `a1 (+) a2 -> b1 (+) b2` from four components.
pub fn block_hom(f11: &Hom, f12: &Hom, f21: &Hom, f22: &Hom) -> Hom {
    let mats = (0..f11.mats.len())
        .map(|v| {
            f11.mats[v].hstack(&f12.mats[v]).vstack(&f21.mats[v].hstack(&f22.mats[v]))
        })
        .collect();
    Hom { mats }
}

// ---------------------------------------------------------------------------
// Projective modules and maps between them
// ---------------------------------------------------------------------------

/// A matrix of algebra elements describing a map between sums of
/// indecomposable projectives. Entry `(r, c)` is made of paths
/// `rows[r] -> cols[c]` and gives the component `P_{cols[c]} -> P_{rows[r]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElemMatrix {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub entries: Vec<Elem>,
}

impl ElemMatrix {
    pub fn zero(alg: &Algebra, rows: &[usize], cols: &[usize]) -> Self {
        ElemMatrix { rows: rows.to_vec(), cols: cols.to_vec(), entries: vec![alg.zero(); rows.len() * cols.len()] }
    }

    pub fn identity(alg: &Algebra, verts: &[usize]) -> Self {
        let mut m = Self::zero(alg, verts, verts);
        for (i, &v) in verts.iter().enumerate() {
            m.entries[i * verts.len() + i] = alg.idempotent(v);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Elem {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Elem {
        let n = self.cols.len();
        &mut self.entries[r * n + c]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| Algebra::is_zero_elem(e))
    }

    /// `self o other`
    pub fn compose(&self, alg: &Algebra, other: &ElemMatrix) -> ElemMatrix {
        assert_eq!(self.cols, other.rows, "compose: summand mismatch");
        let mut out = Self::zero(alg, &self.rows, &other.cols);
        for r in 0..self.rows.len() {
            for c in 0..other.cols.len() {
                let mut acc = alg.zero();
                for k in 0..self.cols.len() {
                    let (a, b) = (self.get(r, k), other.get(k, c));
                    if Algebra::is_zero_elem(a) || Algebra::is_zero_elem(b) {
                        continue;
                    }
                    acc = alg.add(&acc, &alg.mul(a, b));
                }
                *out.get_mut(r, c) = acc;
            }
        }
        out
    }

    pub fn add(&self, alg: &Algebra, other: &ElemMatrix) -> ElemMatrix {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| alg.add(a, b)).collect();
        ElemMatrix { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    pub fn scale(&self, alg: &Algebra, c: u32) -> ElemMatrix {
        let entries = self.entries.iter().map(|a| alg.scale(a, c)).collect();
        ElemMatrix { rows: self.rows.clone(), cols: self.cols.clone(), entries }
    }

    pub fn neg(&self, alg: &Algebra) -> ElemMatrix {
        self.scale(alg, alg.prime() - 1)
    }

    pub fn transpose_op(&self, alg: &Algebra, op: &Algebra) -> ElemMatrix {
        let (nr, nc) = (self.rows.len(), self.cols.len());
        let mut out = ElemMatrix::zero(op, &self.cols, &self.rows);
        for r in 0..nr {
            for c in 0..nc {
                *out.get_mut(c, r) = alg.to_opposite(op, self.get(r, c));
            }
        }
        out
    }

    /// Select a sub-block of summands.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> ElemMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        ElemMatrix {
            rows: rows.iter().map(|&r| self.rows[r]).collect(),
            cols: cols.iter().map(|&c| self.cols[c]).collect(),
            entries,
        }
    }

    /// Stack blocks `[[a, b], [c, d]]`.
    pub fn blocks(a: &ElemMatrix, b: &ElemMatrix, c: &ElemMatrix, d: &ElemMatrix) -> ElemMatrix {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        let rows: Vec<usize> = a.rows.iter().chain(&c.rows).copied().collect();
        let cols: Vec<usize> = a.cols.iter().chain(&b.cols).copied().collect();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for r in 0..a.rows.len() {
            for k in 0..a.cols.len() {
                entries.push(a.get(r, k).clone());
            }
            for k in 0..b.cols.len() {
                entries.push(b.get(r, k).clone());
            }
        }
        for r in 0..c.rows.len() {
            for k in 0..c.cols.len() {
                entries.push(c.get(r, k).clone());
            }
            for k in 0..d.cols.len() {
                entries.push(d.get(r, k).clone());
            }
        }
        ElemMatrix { rows, cols, entries }
    }

    /// The module map between the canonical representations of the sums.
    pub fn to_hom(&self, alg: &Arc<Algebra>) -> Hom {
        let p = alg.prime();
        let nv = alg.num_vertices();
        let mut mats = Vec::with_capacity(nv);
        for y in 0..nv {
            let tdims: Vec<usize> = self.rows.iter().map(|&w| alg.paths_between(w, y).len()).collect();
            let sdims: Vec<usize> = self.cols.iter().map(|&v| alg.paths_between(v, y).len()).collect();
            let mut m = Matrix::zeros(p, tdims.iter().sum(), sdims.iter().sum());
            let mut soff = 0;
            for (c, &v) in self.cols.iter().enumerate() {
                let mut toff = 0;
                for (r, &_w) in self.rows.iter().enumerate() {
                    let x = self.get(r, c);
                    if !Algebra::is_zero_elem(x) {
                        for (k, &qi) in alg.paths_between(v, y).iter().enumerate() {
                            for (i, &xi) in x.iter().enumerate() {
                                if xi == 0 {
                                    continue;
                                }
                                for &(t, cc) in alg.mult_basis(i, qi) {
                                    m.add_at(toff + alg.local_pos(t), soff + k, mul_mod(xi, cc, p));
                                }
                            }
                        }
                    }
                    toff += tdims[r];
                }
                soff += sdims[c];
            }
            mats.push(m);
        }
        Hom { mats }
    }
}

/// Split a vector of `(P_{w_1} (+) ... )_v` into one element per summand.
pub fn vector_to_elems(alg: &Algebra, verts: &[usize], v: usize, vec: &[u32]) -> Vec<Elem> {
    let mut off = 0;
    let mut out = Vec::with_capacity(verts.len());
    for &w in verts {
        let idx = alg.paths_between(w, v);
        let mut e = alg.zero();
        for (k, &i) in idx.iter().enumerate() {
            e[i] = vec[off + k];
        }
        off += idx.len();
        out.push(e);
    }
    out
}

pub fn elems_to_vector(alg: &Algebra, verts: &[usize], v: usize, elems: &[Elem]) -> Vec<u32> {
    let mut out = Vec::new();
    for (j, &w) in verts.iter().enumerate() {
        for &i in alg.paths_between(w, v) {
            out.push(elems[j][i]);
        }
    }
    out
}

/// The map `P_{v_1} (+) ... -> target` sending the j-th generator to `gens[j]`
/// (a vector in `target_{v_j}`).
pub fn hom_from_proj(verts: &[usize], target: &Module, gens: &[Vec<u32>]) -> Hom {
    let acts = target.basis_actions();
    hom_from_proj_with(verts, target, gens, &acts)
}

pub fn hom_from_proj_with(verts: &[usize], target: &Module, gens: &[Vec<u32>], acts: &[Matrix]) -> Hom {
    let alg = &target.alg;
    let p = alg.prime();
    let nv = alg.num_vertices();
    let mut mats = Vec::with_capacity(nv);
    for y in 0..nv {
        let sdim: usize = verts.iter().map(|&v| alg.paths_between(v, y).len()).sum();
        let mut m = Matrix::zeros(p, target.dims[y], sdim);
        let mut off = 0;
        for (j, &v) in verts.iter().enumerate() {
            for (k, &qi) in alg.paths_between(v, y).iter().enumerate() {
                let col = acts[qi].mul_vec(&gens[j]);
                for (r, &x) in col.iter().enumerate() {
                    m.set(r, off + k, x);
                }
            }
            off += alg.paths_between(v, y).len();
        }
        mats.push(m);
    }
    Hom { mats }
}

/// Generator images of a map out of a sum of projectives.
pub fn gens_of(verts: &[usize], alg: &Algebra, f: &Hom) -> Vec<Vec<u32>> {
    (0..verts.len()).map(|j| f.mats[verts[j]].col(generator_col(alg, verts, j))).collect()
}

/// Column of the j-th generator inside `(P_{v_1} (+) ...)_{v_j}`.
pub fn generator_col(alg: &Algebra, verts: &[usize], j: usize) -> usize {
    let v = verts[j];
    let off: usize = verts[..j].iter().map(|&w| alg.paths_between(w, v).len()).sum();
    off + alg.local_pos(alg.basis_index(&Path::trivial(v)).unwrap())
}

/// Projective cover: summand vertices, generator vectors, and the epimorphism.
#[derive(Clone, Debug)]
pub struct Cover {
    pub verts: Vec<usize>,
    pub gens: Vec<Vec<u32>>,
    pub epi: Hom,
}

pub fn projective_cover(m: &Module) -> Cover {
    let t = top(m);
    let mut verts = Vec::new();
    let mut gens = Vec::new();
    for v in 0..m.dims.len() {
        for j in 0..t.section[v].cols() {
            verts.push(v);
            gens.push(t.section[v].col(j));
        }
    }
    let epi = hom_from_proj(&verts, m, &gens);
    Cover { verts, gens, epi }
}

/// Minimal projective resolution `... -> P_1 -> P_0 -> m`, `len + 1` terms.
#[derive(Clone, Debug)]
pub struct Resolution {
    /// `terms[k]` = summand vertices of `P_k`.
    pub terms: Vec<Vec<usize>>,
    /// `diffs[k]: P_{k+1} -> P_k`.
    pub diffs: Vec<ElemMatrix>,
    /// Generator images of the augmentation `P_0 -> m`.
    pub aug: Vec<Vec<u32>>,
    /// Syzygies `Omega^k m` (before stripping projective summands), `k = 0..=len`.
    pub syzygies: Vec<Module>,
}

/// Minimal resolution with terms `P_0 .. P_len`.
pub fn minimal_resolution(m: &Module, len: usize) -> Resolution {
    let alg = m.alg.clone();
    let cov = projective_cover(m);
    let mut terms = vec![cov.verts.clone()];
    let mut diffs = Vec::new();
    let mut syz = vec![m.clone()];
    let mut prev_verts = cov.verts.clone();
    let mut prev_epi = cov.epi;
    let mut prev_src = Module::proj_sum(&alg, &prev_verts);
    for _ in 0..len {
        let (k, incl) = kernel(&prev_epi, &prev_src);
        let c = projective_cover(&k);
        // generator images inside the previous projective
        let mut cols = Vec::new();
        for (j, &v) in c.verts.iter().enumerate() {
            let vec = incl.mats[v].mul_vec(&c.gens[j]);
            cols.push(vector_to_elems(&alg, &prev_verts, v, &vec));
        }
        let mut d = ElemMatrix::zero(&alg, &prev_verts, &c.verts);
        for (j, col) in cols.into_iter().enumerate() {
            for (r, e) in col.into_iter().enumerate() {
                *d.get_mut(r, j) = e;
            }
        }
        syz.push(k);
        terms.push(c.verts.clone());
        diffs.push(d.clone());
        prev_src = Module::proj_sum(&alg, &c.verts);
        prev_epi = d.to_hom(&alg);
        prev_verts = c.verts;
    }
    Resolution { terms, diffs, aug: cov.gens, syzygies: syz }
}

/// Matrix of `Hom(P, n) -> Hom(P', n)` induced by `d: P' -> P`, in generator
/// coordinates (`Hom(P_{v_1} (+) ..., n) = n_{v_1} (+) ...`).
pub fn hom_into_matrix(d: &ElemMatrix, n: &Module, acts: &[Matrix]) -> Matrix {
    let p = n.prime();
    let roff: Vec<usize> = prefix_sums(d.rows.iter().map(|&w| n.dims[w]));
    let coff: Vec<usize> = prefix_sums(d.cols.iter().map(|&v| n.dims[v]));
    let mut m = Matrix::zeros(p, *coff.last().unwrap(), *roff.last().unwrap());
    for (c, &v) in d.cols.iter().enumerate() {
        for (r, &w) in d.rows.iter().enumerate() {
            let x = d.get(r, c);
            if Algebra::is_zero_elem(x) {
                continue;
            }
            let a = n.act_elem(acts, x, w, v);
            m.set_block(coff[c], roff[r], &a);
        }
    }
    m
}

pub(crate) fn prefix_sums(it: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut out = vec![0];
    for x in it {
        out.push(out.last().unwrap() + x);
    }
    out
}

/// `dim Ext^i(m, n)` from the minimal resolution.
pub fn ext(m: &Module, n: &Module, i: usize) -> Result<usize> {
    if !same_alg(&m.alg, &n.alg) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let res = minimal_resolution(m, i + 1);
    Ok(ext_from_resolution(&res, n, i))
}

pub fn ext_from_resolution(res: &Resolution, n: &Module, i: usize) -> usize {
    let acts = n.basis_actions();
    let dim_hom = |k: usize| res.terms[k].iter().map(|&v| n.dims[v]).sum::<usize>();
    let delta = |k: usize| hom_into_matrix(&res.diffs[k], n, &acts);
    let ker = if i < res.diffs.len() { dim_hom(i) - delta(i).rank() } else { dim_hom(i) };
    let im = if i == 0 { 0 } else { delta(i - 1).rank() };
    ker - im
}

/// A module with its projective summands split off.
#[derive(Clone, Debug)]
pub struct Stripped {
    /// Complement without projective summands.
    pub module: Module,
    pub incl: Hom,
    /// Retraction onto the complement along the projective part.
    pub retr: Hom,
    /// Vertices of the removed projective summands, with multiplicity.
    pub projective: Vec<usize>,
}

/// Split off all projective summands.
pub fn strip_projectives(m: &Module) -> Result<Stripped> {
    let alg = m.alg.clone();
    let p = alg.prime();
    let nv = alg.num_vertices();
    let mut cur = m.clone();
    let mut incl = Hom::identity(m);
    let mut retr = Hom::identity(m);
    let mut found = Vec::new();
    for v in 0..nv {
        if cur.dims[v] == 0 {
            continue;
        }
        let pv = Module::projective(&alg, v);
        let hs = hom_space(&cur, &pv)?;
        if hs.is_empty() {
            continue;
        }
        let epos = alg.local_pos(alg.basis_index(&Path::trivial(v)).unwrap());
        // pairing[k][j] = e_v coefficient of h_k(basis vector j of cur_v)
        let mut pair = Matrix::zeros(p, hs.len(), cur.dims[v]);
        for (k, h) in hs.iter().enumerate() {
            for j in 0..cur.dims[v] {
                pair.set(k, j, h.mats[v].get(epos, j));
            }
        }
        let (_, col_piv) = pair.rref();
        let r = col_piv.len();
        if r == 0 {
            continue;
        }
        let (_, row_piv) = pair.transpose().rref();
        let verts = vec![v; r];
        let gens: Vec<Vec<u32>> = col_piv
            .iter()
            .map(|&j| {
                let mut e = vec![0u32; cur.dims[v]];
                e[j] = 1;
                e
            })
            .collect();
        let g = hom_from_proj(&verts, &cur, &gens);
        // H: cur -> P_v^r; H G is invertible on P_v^r, so cur = im G (+) ker H
        let mut hm = Vec::new();
        for y in 0..nv {
            let mut stacked = Matrix::zeros(p, 0, cur.dims[y]);
            for &k in &row_piv {
                stacked = stacked.vstack(&hs[k].mats[y]);
            }
            hm.push(stacked);
        }
        let h = Hom { mats: hm };
        let hg = h.compose(&g);
        let (k, kincl) = kernel(&h, &cur);
        let mut rm = Vec::new();
        for y in 0..nv {
            let inv = hg.mats[y].inverse().expect("H G invertible at every vertex");
            let e = Matrix::identity(p, cur.dims[y]).sub(&g.mats[y].mul(&inv).mul(&h.mats[y]));
            let x = kincl.mats[y].solve(&e).expect("shapes").expect("projection lands in ker H");
            rm.push(x);
        }
        let kretr = Hom { mats: rm };
        incl = incl.compose(&kincl);
        retr = kretr.compose(&retr);
        cur = k;
        found.extend(verts);
    }
    Ok(Stripped { module: cur, incl, retr, projective: found })
}

pub fn is_projective(m: &Module) -> Result<bool> {
    Ok(strip_projectives(m)?.module.is_zero())
}

/// `Omega^k m` with projective summands removed.
pub fn syzygy(m: &Module, k: usize) -> Result<Module> {
    let mut cur = m.clone();
    for _ in 0..k {
        let c = projective_cover(&cur);
        let src = Module::proj_sum(&cur.alg, &c.verts);
        cur = kernel(&c.epi, &src).0;
    }
    Ok(strip_projectives(&cur)?.module)
}

/// Vector-space dual, a module over the opposite algebra `op`.
pub fn dual(m: &Module, op: &Arc<Algebra>) -> Module {
    let mats = m.mats.iter().map(|x| x.transpose()).collect();
    Module::new_unchecked(op.clone(), m.dims.clone(), mats)
}

/// Auslander-Bridger transpose over the opposite algebra `op`.
pub fn transpose(m: &Module, op: &Arc<Algebra>) -> Module {
    let alg = &m.alg;
    let res = minimal_resolution(m, 1);
    let d = &res.diffs[0];
    let dt = d.transpose_op(alg, op);
    let tgt = Module::proj_sum(op, &dt.rows);
    let f = dt.to_hom(op);
    cokernel(&f, &tgt).module
}

// ---------------------------------------------------------------------------
// Isomorphism and decomposition
// ---------------------------------------------------------------------------

const ISO_SEED: u64 = 0x5eed_1505;

fn random_combination(basis: &[Hom], rng: &mut ChaCha8Rng, p: u32) -> Hom {
    let mut acc = basis[0].scale(rng.gen_range(0..p));
    for b in &basis[1..] {
        acc = acc.add(&b.scale(rng.gen_range(0..p)));
    }
    acc
}

/// Search `Hom(m, n)` for a vertexwise invertible element.
pub fn find_iso(m: &Module, n: &Module) -> Result<Option<Hom>> {
    if !same_alg(&m.alg, &n.alg) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    if m.dims != n.dims {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(Hom::zero(m, n)));
    }
    let basis = hom_space(m, n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let p = m.prime();
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..24 {
        let f = random_combination(&basis, &mut rng, p);
        if f.is_iso() {
            return Ok(Some(f));
        }
    }
    // deterministic fallback over a spanning set and its pairwise sums
    for (i, b) in basis.iter().enumerate() {
        if b.is_iso() {
            return Ok(Some(b.clone()));
        }
        for c in basis.iter().skip(i + 1) {
            for s in 1..p.min(8) {
                let f = b.add(&c.scale(s));
                if f.is_iso() {
                    return Ok(Some(f));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_isomorphic(m: &Module, n: &Module) -> Result<bool> {
    Ok(find_iso(m, n)?.is_some())
}

/// Result of a Fitting decomposition.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parts: Vec<Module>,
    /// Inclusions of the parts into the original module.
    pub inclusions: Vec<Hom>,
    pub seed: u64,
}

/// Certify that `End(m)` is local with residue field `F_p`.
pub fn has_local_endomorphisms(m: &Module) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    let p = m.prime();
    let ends = hom_space(m, m)?;
    let v0 = m.dims.iter().position(|&d| d > 0).unwrap();
    let d0 = m.dims[v0] as u32;
    if d0 % p == 0 {
        return Ok(false);
    }
    let id = Hom::identity(m);
    let mut nil: Vec<Hom> = Vec::new();
    for e in &ends {
        let lam = mul_mod(e.mats[v0].trace(), inv_mod(d0 % p, p), p);
        nil.push(e.sub(&id.scale(lam)));
    }
    // the nilpotent candidates must span a codimension-1 subspace
    let span = |hs: &[Hom]| -> Matrix {
        let cols: Vec<Vec<u32>> = hs.iter().map(|h| h.flatten()).collect();
        let n = cols.first().map_or(0, |c| c.len());
        Matrix::from_cols(p, n, &cols)
    };
    let nb = span(&nil).column_basis();
    if nb.cols() + 1 != ends.len() {
        return Ok(false);
    }
    let nbasis: Vec<Hom> = (0..nb.cols()).map(|j| Hom::unflatten(m, m, &nb.col(j))).collect();
    // N^k = 0 for some k
    let mut power = nbasis.clone();
    for _ in 0..=m.total_dim() {
        if power.iter().all(|h| h.is_zero()) {
            return Ok(true);
        }
        let mut next = Vec::new();
        for a in &power {
            for b in &nbasis {
                next.push(a.compose(b));
            }
        }
        let sb = span(&next).column_basis();
        power = (0..sb.cols()).map(|j| Hom::unflatten(m, m, &sb.col(j))).collect();
        if power.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Eigenvalues in `F_p` of an endomorphism, over all vertices.
fn eigenvalues(f: &Hom, p: u32) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for m in &f.mats {
        let n = m.rows();
        if n == 0 {
            continue;
        }
        for lam in 0..p {
            if out.contains(&lam) {
                continue;
            }
            if m.sub(&Matrix::scalar(p, n, lam)).rank() < n {
                out.push(lam);
                if out.len() >= n {
                    break;
                }
            }
        }
    }
    out
}

pub fn decompose(m: &Module, seed: u64) -> Result<Decomposition> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done: Vec<(Module, Hom)> = Vec::new();
    let mut todo = vec![(m.clone(), Hom::identity(m))];
    const TRIES: usize = 40;
    while let Some((cur, incl)) = todo.pop() {
        if cur.is_zero() {
            continue;
        }
        if has_local_endomorphisms(&cur)? {
            done.push((cur, incl));
            continue;
        }
        let ends = hom_space(&cur, &cur)?;
        let n = cur.total_dim() as u64;
        let mut split = None;
        'tries: for _ in 0..TRIES {
            let f = random_combination(&ends, &mut rng, cur.prime());
            // shift by each eigenvalue of f, then take the Fitting component
            for lam in eigenvalues(&f, cur.prime()) {
                let g = f.sub(&Hom::identity(&cur).scale(lam));
                let gnn = Hom { mats: g.mats.iter().map(|x| x.pow(n)).collect() };
                let r = gnn.rank();
                if r > 0 && r < cur.total_dim() {
                    split = Some(gnn);
                    break 'tries;
                }
            }
        }
        let Some(fnn) = split else {
            return Err(AlgebraError::Decomposition { seed, tries: TRIES, parts: done.len() + todo.len() + 1 });
        };
        let (im, im_incl) = image(&fnn, &cur);
        let (ke, ke_incl) = kernel(&fnn, &cur);
        todo.push((ke, incl.compose(&ke_incl)));
        todo.push((im, incl.compose(&im_incl)));
    }
    done.sort_by_key(|(x, _)| (x.total_dim(), x.dims.clone()));
    let (parts, inclusions) = done.into_iter().unzip();
    Ok(Decomposition { parts, inclusions, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg_a1() -> Arc<Algebra> {
        // vertices 0..3, alpha1: 1->0, beta1: 1->3, alpha3: 3->2, beta1 alpha3 = 0
        let q = Quiver::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![
                Arrow { name: "alpha1".into(), source: 1, target: 0 },
                Arrow { name: "beta1".into(), source: 1, target: 3 },
                Arrow { name: "alpha3".into(), source: 3, target: 2 },
            ],
        )
        .unwrap();
        let r = Relation::monomial(Path::from_names(&q, &["beta1", "alpha3"]).unwrap());
        Arc::new(Algebra::new(101, q, vec![r]).unwrap())
    }

    fn dual_numbers() -> Arc<Algebra> {
        let q = Quiver::new(vec!["0".into()], vec![]).unwrap();
        Arc::new(Algebra::new(101, q, vec![]).unwrap().dual_numbers_extension().unwrap())
    }

    #[test]
    fn path_basis_counts() {
        let a = alg_a1();
        assert_eq!(a.dim(), 7);
        let l = dual_numbers();
        assert_eq!(l.dim(), 2);
        assert_eq!(a.dual_numbers_extension().unwrap().dim(), 14);
        let q = Quiver::new(vec!["x".into(), "y".into()], vec![]).unwrap();
        let triv = Algebra::new(101, q, vec![]).unwrap();
        assert_eq!(triv.dim(), 2);
        assert!(triv.path_basis().iter().all(|p| p.is_trivial()));
    }

    #[test]
    fn non_admissible_rejected() {
        let q = Quiver::new(vec!["0".into()], vec![Arrow { name: "x".into(), source: 0, target: 0 }]).unwrap();
        assert!(matches!(Algebra::with_cap(101, q, vec![], 8), Err(AlgebraError::NotAdmissible(_))));
    }

    #[test]
    fn projective_p1() {
        let a = alg_a1();
        let p1 = Module::projective(&a, 1);
        assert_eq!(p1.dims, vec![1, 1, 0, 1]);
        let (rad, _) = radical(&p1);
        assert_eq!(rad.dims, vec![1, 0, 0, 1]);
        assert_eq!(hom_dim(&p1, &p1).unwrap(), 1);
        assert_eq!(hom_dim(&Module::simple(&a, 1), &Module::simple(&a, 0)).unwrap(), 0);
    }

    #[test]
    fn ext_examples() {
        let a = alg_a1();
        assert_eq!(ext(&Module::simple(&a, 1), &Module::simple(&a, 0), 1).unwrap(), 1);
        let k = dual_numbers();
        let s = Module::simple(&k, 0);
        for i in 0..5 {
            assert_eq!(ext(&s, &s, i).unwrap(), 1);
        }
        let p = Module::projective(&a, 1);
        for i in 1..4 {
            assert_eq!(ext(&p, &Module::simple(&a, 0), i).unwrap(), 0);
        }
    }

    #[test]
    fn syzygy_and_transpose_over_dual_numbers() {
        let k = dual_numbers();
        let s = Module::simple(&k, 0);
        for j in 1..4 {
            assert!(is_isomorphic(&syzygy(&s, j).unwrap(), &s).unwrap());
        }
        let op = Arc::new(k.opposite().unwrap());
        let t = transpose(&s, &op);
        assert!(is_isomorphic(&t, &Module::simple(&op, 0)).unwrap());
        let top_k = top(&Module::projective(&k, 0)).module;
        assert_eq!(top_k.dims, vec![1]);
    }

    #[test]
    fn decompose_examples() {
        let a = alg_a1();
        let p1 = Module::projective(&a, 1);
        let two = sum2(&p1, &p1);
        let d = decompose(&two, 7).unwrap();
        assert_eq!(d.parts.len(), 2);
        assert!(d.parts.iter().all(|x| is_isomorphic(x, &p1).unwrap()));
        let l = Arc::new(a.dual_numbers_extension().unwrap());
        let lp1 = Module::projective(&l, 1);
        let d = decompose(&lp1, 7).unwrap();
        assert_eq!(d.parts.len(), 1);
        assert_eq!(d.parts[0].total_dim(), 6);
    }

    #[test]
    fn strip_projective_summands() {
        let a = alg_a1();
        let m = sum2(&Module::simple(&a, 1), &Module::projective(&a, 3));
        let st = strip_projectives(&m).unwrap();
        assert_eq!(st.projective, vec![3]);
        assert!(is_isomorphic(&st.module, &Module::simple(&a, 1)).unwrap());
        assert_eq!(st.retr.compose(&st.incl), Hom::identity(&st.module));
        assert!(st.retr.is_hom(&m, &st.module));
    }
}
