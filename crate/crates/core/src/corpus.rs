//! The tilted algebra `A`, its hereditary partner `B` (linear `A_{2n+2}`),
//! their dual-number extensions `Lambda = k[eps] (x) A`, `Gamma = k[eps] (x) B`,
//! the functor data between them and the Gorenstein projective `Gamma`-modules.
//!
//! Vertices are labelled `0 .. 2n+1`. `A` has arrows `alpha_{2i+1}: 2i+1 -> 2i`
//! and `beta_{2i+1}: 2i+1 -> 2i+3` with `beta alpha = 0`; `B` has arrows
//! `b_j: j -> j+1`.

use std::collections::VecDeque;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;

use crate::algebra::{
    self, Algebra, Arrow, ElemMatrix, Hom, Module, Path, Quiver, Relation,
};
use crate::complexes::{Complex, ProjChainMap, ProjComplex};
use crate::exactlin::{Matrix, DEFAULT_PRIME};
use crate::functors::FunctorData;
use crate::Result;

fn labels(n: usize) -> Vec<String> {
    (0..2 * n + 2).map(|i| i.to_string()).collect()
}

/// The tilted algebra `A` for `n >= 1`.
pub fn algebra_a(n: usize, p: u32) -> Result<Algebra> {
    let mut arrows = Vec::new();
    for i in 0..=n {
        arrows.push(Arrow { name: format!("alpha{}", 2 * i + 1), source: 2 * i + 1, target: 2 * i });
        if i < n {
            arrows.push(Arrow { name: format!("beta{}", 2 * i + 1), source: 2 * i + 1, target: 2 * i + 3 });
        }
    }
    let q = Quiver::new(labels(n), arrows)?;
    let mut rels = Vec::new();
    for i in 0..n {
        let b = format!("beta{}", 2 * i + 1);
        let a = format!("alpha{}", 2 * i + 3);
        rels.push(Relation::monomial(Path::from_names(&q, &[&b, &a])?));
    }
    Ok(Algebra::new(p, q, rels)?)
}

/// The path algebra `B` of the linearly oriented quiver `0 -> 1 -> ... -> 2n+1`.
pub fn algebra_b(n: usize, p: u32) -> Result<Algebra> {
    let arrows = (0..2 * n + 1).map(|j| Arrow { name: format!("b{j}"), source: j, target: j + 1 }).collect();
    Ok(Algebra::new(p, Quiver::new(labels(n), arrows)?, vec![])?)
}

/// Element of `alg` given by a path of arrow names.
fn path(alg: &Algebra, names: &[&str]) -> algebra::Elem {
    alg.path_elem(&Path::from_names(alg.quiver(), names).expect("corpus path"))
}

fn single(alg: &Algebra, row: usize, col: usize, x: algebra::Elem) -> ElemMatrix {
    let mut m = ElemMatrix::zero(alg, &[row], &[col]);
    *m.get_mut(0, 0) = x;
    m
}

fn chain(entries: Vec<(i64, ElemMatrix)>) -> ProjChainMap {
    ProjChainMap { maps: entries.into_iter().collect() }
}

/// `F: D(B) -> D(A)` with `F(Q_{2i+1}) = P_{2i+1}[-1]` and
/// `F(Q_{2i}) = P_{2i} -> P_{2i+1}` in degrees 0, 1.
pub fn functor_f(n: usize, a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<FunctorData> {
    let mut images = Vec::new();
    for v in 0..2 * n + 2 {
        if v % 2 == 1 {
            images.push(ProjComplex::stalk(&[v], 1));
        } else {
            let d = single(a, v + 1, v, path(a, &[&format!("alpha{}", v + 1)]));
            images.push(ProjComplex { lo: 0, terms: vec![vec![v], vec![v + 1]], diffs: vec![d] });
        }
    }
    let mut maps = Vec::new();
    for j in 0..2 * n + 1 {
        if j % 2 == 0 {
            // T_{j+1} -> T_j is the identity of P_{j+1} in degree 1
            maps.push(chain(vec![(1, ElemMatrix::identity(a, &[j + 1]))]));
        } else {
            // T_{j+1} -> T_j is beta_j: P_{j+2} -> P_j in degree 1
            maps.push(chain(vec![(1, single(a, j, j + 2, path(a, &[&format!("beta{j}")])))]));
        }
    }
    FunctorData::new(b.clone(), a.clone(), images, maps)
}

/// A quasi-inverse `G: D(A) -> D(B)` of [`functor_f`], in degrees `[-1, 0]`.
pub fn functor_g(n: usize, a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<FunctorData> {
    let p = b.prime();
    let bj = |j: usize| path(b, &[&format!("b{j}")]);
    let mut images = Vec::new();
    for v in 0..2 * n + 2 {
        if v % 2 == 0 {
            let d = single(b, v, v + 1, bj(v));
            images.push(ProjComplex { lo: -1, terms: vec![vec![v + 1], vec![v]], diffs: vec![d] });
        } else {
            let mut d = ElemMatrix::zero(b, &[v - 1], &[v, v - 1]);
            *d.get_mut(0, 1) = b.idempotent(v - 1);
            images.push(ProjComplex { lo: -1, terms: vec![vec![v, v - 1], vec![v - 1]], diffs: vec![d] });
        }
    }
    let mut maps = Vec::new();
    for arrow in &a.quiver().arrows {
        let (s, t) = (arrow.source, arrow.target);
        if arrow.name.starts_with("alpha") {
            // G(P_t) -> G(P_s), t = s - 1 even
            let mut m = ElemMatrix::zero(b, &[s, t], &[s]);
            *m.get_mut(0, 0) = b.idempotent(s);
            *m.get_mut(1, 0) = bj(t);
            maps.push(chain(vec![(-1, m), (0, ElemMatrix::identity(b, &[t]))]));
        } else {
            // beta_s: s -> t = s + 2; G(P_t) -> G(P_s)
            let mut m = ElemMatrix::zero(b, &[s, s - 1], &[t, t - 1]);
            *m.get_mut(0, 0) = path(b, &[&format!("b{s}"), &format!("b{}", s + 1)]);
            *m.get_mut(0, 1) = b.scale(&bj(s), p - 1);
            maps.push(chain(vec![(-1, m)]));
        }
    }
    FunctorData::new(a.clone(), b.clone(), images, maps)
}

/// `S (x) m`: the `B`-module `m` with `eps` acting by zero.
pub fn s_tensor(m: &Module, ext: &Arc<Algebra>) -> Module {
    let p = m.prime();
    let mut mats = m.mats.clone();
    for &d in &m.dims {
        mats.push(Matrix::zeros(p, d, d));
    }
    Module::new(ext.clone(), m.dims.clone(), mats).expect("S (x) m satisfies the relations")
}

/// `k[eps] (x) m`, basis `1 (x) m` followed by `eps (x) m`.
pub fn keps_tensor(m: &Module, ext: &Arc<Algebra>) -> Module {
    let p = m.prime();
    let dims: Vec<usize> = m.dims.iter().map(|d| 2 * d).collect();
    let mut mats: Vec<Matrix> = m.mats.iter().map(|x| x.block_diag(x)).collect();
    for &d in &m.dims {
        let mut e = Matrix::zeros(p, 2 * d, 2 * d);
        e.set_block(d, 0, &Matrix::identity(p, d));
        mats.push(e);
    }
    Module::new(ext.clone(), dims, mats).expect("k[eps] (x) m satisfies the relations")
}

/// The `Gamma`-module `y (+) x` with `eps` given by `h: x -> y`.
pub fn eps_extension(h: &Hom, x: &Module, y: &Module, ext: &Arc<Algebra>) -> Module {
    let p = x.prime();
    let dims: Vec<usize> = y.dims.iter().zip(&x.dims).map(|(a, b)| a + b).collect();
    let mut mats: Vec<Matrix> = y.mats.iter().zip(&x.mats).map(|(a, b)| a.block_diag(b)).collect();
    for v in 0..dims.len() {
        let mut e = Matrix::zeros(p, dims[v], dims[v]);
        e.set_block(0, y.dims[v], &h.mats[v]);
        mats.push(e);
    }
    Module::new(ext.clone(), dims, mats).expect("eps extension satisfies the relations")
}

/// A short exact sequence `0 -> sub --f--> mid --g--> quot -> 0`.
#[derive(Clone, Debug)]
pub struct Ses {
    pub sub: Module,
    pub mid: Module,
    pub quot: Module,
    pub f: Hom,
    pub g: Hom,
}

/// A Gorenstein projective `Gamma`-module `M(i, l)` attached to the
/// indecomposable `B`-module with top `i` and length `l`.
#[derive(Clone, Debug)]
pub struct GpModule {
    pub i: usize,
    pub l: usize,
    pub module: Module,
    /// `0 -> S (x) Q_i -> M(i, l) -> S (x) Q_{i+l} -> 0`, absent when `i + l = 2n + 2`.
    pub ses: Option<Ses>,
}

/// Everything needed to rerun the worked example for a given `n`.
pub struct Family {
    pub n: usize,
    pub a: Arc<Algebra>,
    pub b: Arc<Algebra>,
    pub lambda: Arc<Algebra>,
    pub gamma: Arc<Algebra>,
    pub f: FunctorData,
    pub g: FunctorData,
    pub f_ext: FunctorData,
    pub g_ext: FunctorData,
    pub modules: Vec<GpModule>,
}

impl Family {
    pub fn new(n: usize, p: u32) -> Result<Self> {
        if n == 0 {
            return Err(crate::Error::Parse("the example needs n >= 1".into()));
        }
        let a = Arc::new(algebra_a(n, p)?);
        let b = Arc::new(algebra_b(n, p)?);
        let lambda = Arc::new(a.dual_numbers_extension()?);
        let gamma = Arc::new(b.dual_numbers_extension()?);
        let f = functor_f(n, &a, &b)?;
        let g = functor_g(n, &a, &b)?;
        let f_ext = f.dual_numbers_extension(&gamma, &lambda)?;
        let g_ext = g.dual_numbers_extension(&lambda, &gamma)?;
        let top = 2 * n + 2;
        let mut modules = Vec::new();
        for i in 0..top {
            for l in 1..=top - i {
                let qi = Module::projective(&b, i);
                if i + l == top {
                    modules.push(GpModule { i, l, module: s_tensor(&qi, &gamma), ses: None });
                    continue;
                }
                let j = i + l;
                let qj = Module::projective(&b, j);
                let names: Vec<String> = (i..j).map(|k| format!("b{k}")).collect();
                let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
                let incl = single(&b, i, j, path(&b, &refs)).to_hom(&b);
                let mid = eps_extension(&incl, &qj, &qi, &gamma);
                let sub = s_tensor(&qi, &gamma);
                let quot = s_tensor(&qj, &gamma);
                let (fm, gm) = split_maps(&qi, &qj);
                modules.push(GpModule {
                    i,
                    l,
                    module: mid.clone(),
                    ses: Some(Ses { sub, mid, quot, f: fm, g: gm }),
                });
            }
        }
        Ok(Family { n, a, b, lambda, gamma, f, g, f_ext, g_ext, modules })
    }

    pub fn default_prime(n: usize) -> Result<Self> {
        Self::new(n, DEFAULT_PRIME)
    }

    pub fn module(&self, i: usize, l: usize) -> Option<&GpModule> {
        self.modules.iter().find(|m| m.i == i && m.l == l)
    }

    /// The tilting complex `(+) (P_{2i+1} (+) tau^{-1} S_{2i})`, one summand per vertex of `B`.
    pub fn tilting_summands(&self) -> Vec<ProjComplex> {
        self.f.images.clone()
    }

    /// `S (x) P_v` over `Lambda`.
    pub fn s_tensor_p(&self, v: usize) -> Module {
        s_tensor(&Module::projective(&self.a, v), &self.lambda)
    }

    /// `S (x) Q_v` over `Gamma`.
    pub fn s_tensor_q(&self, v: usize) -> Module {
        s_tensor(&Module::projective(&self.b, v), &self.gamma)
    }

    /// Pullback of `S (x) P_{2i} -> S (x) P_{2i+1} <<- k[eps] (x) P_{2i+1}`.
    pub fn pullback_n(&self, i: usize) -> Result<Module> {
        let (v, w) = (2 * i, 2 * i + 1);
        let a = &self.a;
        let pv = Module::projective(a, v);
        let pw = Module::projective(a, w);
        let alpha = single(a, w, v, path(a, &[&format!("alpha{w}")])).to_hom(a);
        let sv = s_tensor(&pv, &self.lambda);
        let sw = s_tensor(&pw, &self.lambda);
        let kw = keps_tensor(&pw, &self.lambda);
        let bottom = Hom { mats: alpha.mats.clone() };
        // k[eps] (x) P_w -> S (x) P_w kills the eps (x) part
        let p = a.prime();
        let mut quot = Vec::new();
        for d in &pw.dims {
            quot.push(Matrix::identity(p, *d).hstack(&Matrix::zeros(p, *d, *d)));
        }
        let right = Hom { mats: quot };
        Ok(pullback(&bottom, &sv, &right, &kw, &sw).0)
    }

    /// Indecomposable `A`- and `B`-modules (both quivers are trees).
    pub fn indecomposables_a(&self) -> Vec<Module> {
        tree_indecomposables(&self.a)
    }

    pub fn indecomposables_b(&self) -> Vec<Module> {
        tree_indecomposables(&self.b)
    }
}

fn split_maps(y: &Module, x: &Module) -> (Hom, Hom) {
    let p = y.prime();
    let mut f = Vec::new();
    let mut g = Vec::new();
    for v in 0..y.dims.len() {
        let (a, b) = (y.dims[v], x.dims[v]);
        f.push(Matrix::identity(p, a).vstack(&Matrix::zeros(p, b, a)));
        g.push(Matrix::zeros(p, b, a).hstack(&Matrix::identity(p, b)));
    }
    // eps-components are determined by the vertex maps; nothing else to add
    (Hom { mats: f }, Hom { mats: g })
}

/// Pullback of `f: x -> z <- y: g`, with its two projections.
pub fn pullback(f: &Hom, x: &Module, g: &Hom, y: &Module, z: &Module) -> (Module, Hom, Hom) {
    let s = algebra::sum2(x, y);
    let diff = Hom { mats: f.mats.iter().zip(&g.mats).map(|(a, b)| a.hstack(&b.neg())).collect() };
    debug_assert!(diff.is_hom(&s, z));
    let (k, incl) = algebra::kernel(&diff, &s);
    let (_, _, px, py) = algebra::sum2_maps(x, y);
    (k, px.compose(&incl), py.compose(&incl))
}

/// One representation per simple path of the underlying graph of a tree
/// quiver, one-dimensional at each vertex on the path; paths that violate a
/// relation are dropped. For trees with monomial relations along which the
/// algebra is gentle, these are all the indecomposables.
pub fn tree_indecomposables(alg: &Arc<Algebra>) -> Vec<Module> {
    let q = alg.quiver();
    let nv = q.num_vertices();
    let p = alg.prime();
    let mut adj = vec![Vec::new(); nv];
    for a in &q.arrows {
        adj[a.source].push(a.target);
        adj[a.target].push(a.source);
    }
    let mut out = Vec::new();
    for u in 0..nv {
        // BFS parents from u
        let mut parent = vec![usize::MAX; nv];
        parent[u] = u;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if parent[y] == usize::MAX {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        for w in u..nv {
            if parent[w] == usize::MAX {
                continue;
            }
            let mut on = vec![false; nv];
            let mut x = w;
            on[x] = true;
            while x != u {
                x = parent[x];
                on[x] = true;
            }
            let dims: Vec<usize> = on.iter().map(|&b| b as usize).collect();
            let mats = q
                .arrows
                .iter()
                .map(|a| {
                    let mut m = Matrix::zeros(p, dims[a.target], dims[a.source]);
                    let on_path = on[a.source] && on[a.target] && (parent[a.source] == a.target || parent[a.target] == a.source);
                    if on_path && a.source != a.target {
                        m.set(0, 0, 1);
                    }
                    m
                })
                .collect();
            if let Ok(m) = Module::new(alg.clone(), dims, mats) {
                out.push(m);
            }
        }
    }
    out
}

/// Expected data generated alongside the corpus.
#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub i: usize,
    pub l: usize,
    pub dims: Vec<usize>,
    /// `S (x) Q_i` when the `B`-module is projective.
    pub projective_b_module: bool,
    /// Vertex dimensions of the two end terms of the sequence, sub first.
    pub ses_ends: Option<(Vec<usize>, Vec<usize>)>,
    pub expected_gp: bool,
    /// Known stable image: `S (x) P_i` (odd `i`, `i + l = 2n+2`) or the pullback (even `i`).
    pub known_image: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub n: usize,
    pub prime: u32,
    pub dims: [usize; 4],
    pub entries: Vec<ManifestEntry>,
}

impl Family {
    pub fn manifest(&self) -> Manifest {
        let top = 2 * self.n + 2;
        let entries = self
            .modules
            .iter()
            .map(|m| ManifestEntry {
                i: m.i,
                l: m.l,
                dims: m.module.dims.clone(),
                projective_b_module: m.ses.is_none(),
                ses_ends: m.ses.as_ref().map(|s| (s.sub.dims.clone(), s.quot.dims.clone())),
                expected_gp: true,
                known_image: if m.i + m.l == top && m.i % 2 == 1 {
                    Some(format!("S(x)P_{}", m.i))
                } else if m.i + m.l == top {
                    Some(format!("pullback at {}", m.i))
                } else {
                    None
                },
            })
            .collect();
        Manifest {
            n: self.n,
            prime: self.a.prime(),
            dims: [self.a.dim(), self.b.dim(), self.lambda.dim(), self.gamma.dim()],
            entries,
        }
    }
}

// ---------------------------------------------------------------------------
// Random objects
// ---------------------------------------------------------------------------

/// Random element of `e_from A e_to` built from nontrivial paths.
fn random_radical_elem(alg: &Algebra, from: usize, to: usize, rng: &mut impl Rng) -> algebra::Elem {
    let mut e = alg.zero();
    for &k in alg.paths_between(from, to) {
        if !alg.path_basis()[k].is_trivial() && rng.gen_bool(0.6) {
            e[k] = rng.gen_range(0..alg.prime());
        }
    }
    e
}

/// Cokernel of a random map between sums of at most `max_summands`
/// indecomposable projectives.
pub fn random_module(alg: &Arc<Algebra>, max_summands: usize, rng: &mut impl Rng) -> Module {
    let nv = alg.num_vertices();
    let rows: Vec<usize> = (0..rng.gen_range(1..=max_summands)).map(|_| rng.gen_range(0..nv)).collect();
    let cols: Vec<usize> = (0..rng.gen_range(0..=max_summands)).map(|_| rng.gen_range(0..nv)).collect();
    let mut em = ElemMatrix::zero(alg, &rows, &cols);
    for (r, &v) in rows.iter().enumerate() {
        for (c, &w) in cols.iter().enumerate() {
            *em.get_mut(r, c) = random_radical_elem(alg, v, w, rng);
        }
    }
    let h = em.to_hom(alg);
    algebra::cokernel(&h, &Module::proj_sum(alg, &rows)).module
}

/// Random two-term complex `X^lo -> X^{lo+1}` with `lo` in `{-1, 0}`.
pub fn random_complex(alg: &Arc<Algebra>, max_summands: usize, rng: &mut impl Rng) -> Result<Complex> {
    let lo = rng.gen_range(-1..=0);
    let x0 = random_module(alg, max_summands, rng);
    let x1 = random_module(alg, max_summands, rng);
    let basis = algebra::hom_space(&x0, &x1)?;
    let mut d = Hom::zero(&x0, &x1);
    for b in &basis {
        d = d.add(&b.scale(rng.gen_range(0..alg.prime())));
    }
    Ok(Complex::new(alg.clone(), lo, vec![x0, x1], vec![d])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{homology, minimize};

    #[test]
    fn dimensions() {
        for (n, dims) in [(1, [7, 10, 14, 20]), (2, [12, 21, 24, 42])] {
            let c = Family::default_prime(n).unwrap();
            assert_eq!(c.manifest().dims, dims);
        }
    }

    #[test]
    fn module_counts() {
        assert_eq!(Family::default_prime(1).unwrap().modules.len(), 10);
        assert_eq!(Family::default_prime(2).unwrap().modules.len(), 21);
    }

    #[test]
    fn m31_is_s_tensor_q3() {
        let c = Family::default_prime(1).unwrap();
        let m = c.module(3, 1).unwrap();
        assert!(m.ses.is_none());
        assert_eq!(m.module, c.s_tensor_q(3));
    }

    #[test]
    fn sequences_are_exact() {
        let c = Family::default_prime(2).unwrap();
        for m in &c.modules {
            let Some(s) = &m.ses else { continue };
            assert!(s.f.is_hom(&s.sub, &s.mid) && s.g.is_hom(&s.mid, &s.quot));
            assert!(s.f.is_mono() && s.g.is_epi());
            assert!(s.g.compose(&s.f).is_zero());
            let total: usize = s.mid.total_dim();
            assert_eq!(total, s.sub.total_dim() + s.quot.total_dim());
        }
    }

    #[test]
    fn g_inverts_f() {
        let c = Family::default_prime(1).unwrap();
        let gf = c.f.compose(&c.g).unwrap();
        for v in 0..4 {
            let m = minimize(&c.b, &gf.images[v]).complex;
            assert_eq!(m, ProjComplex::stalk(&[v], 0), "vertex {v}");
        }
        let fg = c.g.compose(&c.f).unwrap();
        for v in 0..4 {
            let m = minimize(&c.a, &fg.images[v]).complex;
            assert_eq!(m, ProjComplex::stalk(&[v], 0), "vertex {v}");
        }
    }

    #[test]
    fn f_image_of_even_projective_resolves_tau_inverse() {
        let c = Family::default_prime(1).unwrap();
        let t = c.f.images[0].to_complex(&c.a);
        let h = homology(&t, 1);
        assert_eq!(h.dims, vec![0, 1, 0, 1]);
        assert!(homology(&t, 0).is_zero());
    }

    #[test]
    fn indecomposable_counts() {
        let c = Family::default_prime(1).unwrap();
        assert_eq!(c.indecomposables_b().len(), 10);
        assert_eq!(c.indecomposables_a().len(), 8);
        for m in c.indecomposables_a() {
            assert!(algebra::has_local_endomorphisms(&m).unwrap());
        }
    }
}
