//! Bounded complexes of representations, chain maps, cones, truncations,
//! projective resolutions, and Hom in the homotopy and derived categories.
//!
//! Differentials raise degree: `d^i: C^i -> C^{i+1}`. The shift is
//! `(C[n])^i = C^{i+n}` with differential `(-1)^n d`. The cone of
//! `f: X -> Y` has `cone^i = X^{i+1} (+) Y^i` and differential
//! `[[-d_X, 0], [f, d_Y]]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{
    self, cokernel, hom_from_proj, hom_into_matrix, hom_space, kernel, prefix_sums, projective_cover, same_alg,
    vector_to_elems, Algebra, ElemMatrix, Hom, Module, Quotient,
};
use crate::exactlin::{neg_mod, Matrix};
use crate::{Error, Result};

/// A bounded complex; `terms[k]` sits in degree `lo + k`.
#[derive(Clone, Debug)]
pub struct Complex {
    pub alg: Arc<Algebra>,
    pub lo: i64,
    pub terms: Vec<Module>,
    /// `diffs[k]: terms[k] -> terms[k + 1]`
    pub diffs: Vec<Hom>,
}

/// Degreewise maps; missing degrees are zero. For maps of nonzero degree `n`
/// (elements of `Hom(X, Y[n])`), the key is the source degree and the value
/// maps `X^i -> Y^{i+n}`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChainMap {
    pub maps: BTreeMap<i64, Hom>,
}

fn sign(n: i64, p: u32) -> u32 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        p - 1
    }
}

impl Complex {
    pub fn new(alg: Arc<Algebra>, lo: i64, terms: Vec<Module>, diffs: Vec<Hom>) -> Result<Self> {
        if diffs.len() + 1 != terms.len() && !(terms.is_empty() && diffs.is_empty()) {
            return Err(Error::Complex("need one differential between consecutive terms".into()));
        }
        for t in &terms {
            if !same_alg(&t.alg, &alg) {
                return Err(algebra::AlgebraError::AlgebraMismatch.into());
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            if !d.is_hom(&terms[k], &terms[k + 1]) {
                return Err(Error::Complex(format!("d^{} is not a module map", lo + k as i64)));
            }
            if k > 0 && !d.compose(&diffs[k - 1]).is_zero() {
                return Err(Error::Complex(format!("d^{} d^{} != 0", lo + k as i64, lo + k as i64 - 1)));
            }
        }
        Ok(Complex { alg, lo, terms, diffs })
    }

    pub fn zero(alg: &Arc<Algebra>) -> Self {
        Complex { alg: alg.clone(), lo: 0, terms: vec![], diffs: vec![] }
    }

    pub fn from_module(m: &Module, deg: i64) -> Self {
        Complex { alg: m.alg.clone(), lo: deg, terms: vec![m.clone()], diffs: vec![] }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, i: i64) -> Module {
        if i < self.lo || i > self.hi() {
            Module::zero(&self.alg)
        } else {
            self.terms[(i - self.lo) as usize].clone()
        }
    }

    pub fn dims(&self, i: i64) -> Vec<usize> {
        if i < self.lo || i > self.hi() {
            vec![0; self.alg.num_vertices()]
        } else {
            self.terms[(i - self.lo) as usize].dims.clone()
        }
    }

    /// `d^i: C^i -> C^{i+1}` (zero outside the window).
    pub fn diff(&self, i: i64) -> Hom {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            zero_hom(&self.alg, &self.dims(i), &self.dims(i + 1))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    /// Degrees of the first and last nonzero terms.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.terms.iter().position(|t| !t.is_zero())?;
        let last = self.terms.iter().rposition(|t| !t.is_zero())?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    /// Rebuild on the window `[lo, hi]` (terms outside become zero).
    pub fn window(&self, lo: i64, hi: i64) -> Complex {
        if hi < lo {
            return Complex::zero(&self.alg);
        }
        let terms: Vec<Module> = (lo..=hi).map(|i| self.term(i)).collect();
        let diffs = (lo..hi).map(|i| self.diff(i)).collect();
        Complex { alg: self.alg.clone(), lo, terms, diffs }
    }

    /// Drop zero terms at both ends.
    pub fn trim(&self) -> Complex {
        match self.support() {
            None => Complex::zero(&self.alg),
            Some((a, b)) => self.window(a, b),
        }
    }
}

pub(crate) fn zero_hom(alg: &Arc<Algebra>, src: &[usize], tgt: &[usize]) -> Hom {
    let p = alg.prime();
    Hom { mats: src.iter().zip(tgt).map(|(&s, &t)| Matrix::zeros(p, t, s)).collect() }
}

impl ChainMap {
    pub fn identity(c: &Complex) -> Self {
        let maps = c.terms.iter().enumerate().map(|(k, t)| (c.lo + k as i64, Hom::identity(t))).collect();
        ChainMap { maps }
    }

    /// Component `X^i -> Y^{i+n}` for a map of degree `n`.
    pub fn get_deg(&self, i: i64, x: &Complex, y: &Complex, n: i64) -> Hom {
        match self.maps.get(&i) {
            Some(h) => h.clone(),
            None => zero_hom(&x.alg, &x.dims(i), &y.dims(i + n)),
        }
    }

    pub fn get(&self, i: i64, x: &Complex, y: &Complex) -> Hom {
        self.get_deg(i, x, y, 0)
    }

    /// `self o other` for degree-0 maps `other: X -> Y`, `self: Y -> Z`.
    pub fn compose(&self, other: &ChainMap, x: &Complex, y: &Complex, z: &Complex) -> ChainMap {
        let mut maps = BTreeMap::new();
        let (lo, hi) = (x.lo.min(z.lo), x.hi().max(z.hi()));
        for i in lo..=hi {
            let h = self.get(i, y, z).compose(&other.get(i, x, y));
            if !h.mats.iter().all(|m| m.rows() == 0 || m.cols() == 0) {
                maps.insert(i, h);
            }
        }
        ChainMap { maps }
    }

    pub fn add(&self, other: &ChainMap, x: &Complex, y: &Complex) -> ChainMap {
        let mut maps = BTreeMap::new();
        for i in x.lo..=x.hi() {
            maps.insert(i, self.get(i, x, y).add(&other.get(i, x, y)));
        }
        ChainMap { maps }
    }

    pub fn neg(&self) -> ChainMap {
        ChainMap { maps: self.maps.iter().map(|(&i, h)| (i, h.neg())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.maps.values().all(|h| h.is_zero())
    }

    pub fn is_chain_map(&self, x: &Complex, y: &Complex) -> bool {
        let lo = x.lo.min(y.lo) - 1;
        let hi = x.hi().max(y.hi()) + 1;
        for i in lo..=hi {
            let f = self.get(i, x, y);
            if !f.is_hom(&x.term(i), &y.term(i)) {
                return false;
            }
            let lhs = y.diff(i).compose(&f);
            let rhs = self.get(i + 1, x, y).compose(&x.diff(i));
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

pub fn shift(c: &Complex, n: i64) -> Complex {
    let s = sign(n, c.alg.prime());
    Complex {
        alg: c.alg.clone(),
        lo: c.lo - n,
        terms: c.terms.clone(),
        diffs: c.diffs.iter().map(|d| d.scale(s)).collect(),
    }
}

/// Shift a chain map along with its complexes (no sign).
pub fn shift_map(f: &ChainMap, n: i64) -> ChainMap {
    ChainMap { maps: f.maps.iter().map(|(&i, h)| (i - n, h.clone())).collect() }
}

pub struct Cone {
    pub cone: Complex,
    /// `Y -> cone(f)`
    pub incl: ChainMap,
    /// `cone(f) -> X[1]`
    pub proj: ChainMap,
}

pub fn cone(f: &ChainMap, x: &Complex, y: &Complex) -> Cone {
    let alg = x.alg.clone();
    let lo = (x.lo - 1).min(y.lo);
    let hi = (x.hi() - 1).max(y.hi());
    let mut terms = Vec::new();
    let mut incl = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for i in lo..=hi {
        let (a, b) = (x.term(i + 1), y.term(i));
        let (ia, ib, pa, _pb) = algebra::sum2_maps(&a, &b);
        terms.push(algebra::sum2(&a, &b));
        incl.insert(i, ib);
        proj.insert(i, pa);
        let _ = ia;
    }
    let mut diffs = Vec::new();
    for i in lo..hi {
        let dx = x.diff(i + 1).neg();
        let z = zero_hom(&alg, &y.dims(i), &x.dims(i + 2));
        let fi = f.get(i + 1, x, y);
        let dy = y.diff(i);
        diffs.push(algebra::block_hom(&dx, &z, &fi, &dy));
    }
    let cone = Complex { alg, lo, terms, diffs };
    Cone { cone, incl: ChainMap { maps: incl }, proj: ChainMap { maps: proj } }
}

pub fn brutal_truncate_geq(c: &Complex, m: i64) -> Complex {
    if m > c.hi() {
        return Complex::zero(&c.alg);
    }
    c.window(m.max(c.lo), c.hi())
}

pub fn brutal_truncate_lt(c: &Complex, m: i64) -> Complex {
    if m <= c.lo {
        return Complex::zero(&c.alg);
    }
    c.window(c.lo, (m - 1).min(c.hi()))
}

/// `H^i(c)` with its construction data.
pub struct Homology {
    pub module: Module,
    /// Cycles `Z^i` and their inclusion into `C^i`.
    pub cycles: Module,
    pub cycles_incl: Hom,
    /// Projection `Z^i -> H^i` with a linear section.
    pub quotient: Quotient,
}

pub fn homology_data(c: &Complex, i: i64) -> Homology {
    let term = c.term(i);
    let (z, zi) = kernel(&c.diff(i), &term);
    let din = c.diff(i - 1);
    let mut mats = Vec::new();
    for v in 0..z.dims.len() {
        mats.push(zi.mats[v].solve(&din.mats[v]).expect("shapes").expect("image lies in cycles"));
    }
    let q = cokernel(&Hom { mats }, &z);
    Homology { module: q.module.clone(), cycles: z, cycles_incl: zi, quotient: q }
}

pub fn homology(c: &Complex, i: i64) -> Module {
    homology_data(c, i).module
}

pub fn is_acyclic(c: &Complex) -> bool {
    (c.lo..=c.hi()).all(|i| homology(c, i).is_zero())
}

/// Map induced on `H^i`.
pub fn homology_map(f: &ChainMap, x: &Complex, y: &Complex, i: i64) -> Hom {
    let hx = homology_data(x, i);
    let hy = homology_data(y, i);
    let fi = f.get(i, x, y);
    let mut mats = Vec::new();
    for v in 0..x.alg.num_vertices() {
        let s = hx.cycles_incl.mats[v].mul(&hx.quotient.section[v]);
        let img = fi.mats[v].mul(&s);
        let z = hy.cycles_incl.mats[v].solve(&img).expect("shapes").expect("chain maps preserve cycles");
        mats.push(hy.quotient.proj.mats[v].mul(&z));
    }
    Hom { mats }
}

pub fn is_quasi_iso(f: &ChainMap, x: &Complex, y: &Complex) -> bool {
    let lo = x.lo.min(y.lo);
    let hi = x.hi().max(y.hi());
    (lo..=hi).all(|i| homology_map(f, x, y, i).is_iso())
}

/// Good truncation at degree zero: `D^0 = coker d^{-1}`, `D^i = C^i` for
/// `i > 0`. Negative homology is checked in degrees `>= check_from`.
pub fn good_truncate_geq0_from(c: &Complex, check_from: i64) -> Result<(Complex, ChainMap)> {
    for i in check_from.max(c.lo)..0 {
        if !homology(c, i).is_zero() {
            return Err(Error::NegativeHomology(i));
        }
    }
    let q = cokernel(&c.diff(-1), &c.term(0));
    let hi = c.hi().max(0);
    let mut terms = vec![q.module.clone()];
    let mut diffs = Vec::new();
    let mut maps = BTreeMap::new();
    maps.insert(0, q.proj.clone());
    if hi > 0 {
        let d0 = c.diff(0);
        let mats = (0..c.alg.num_vertices()).map(|v| d0.mats[v].mul(&q.section[v])).collect();
        diffs.push(Hom { mats });
        for i in 1..=hi {
            terms.push(c.term(i));
            maps.insert(i, Hom::identity(&c.term(i)));
            if i < hi {
                diffs.push(c.diff(i));
            }
        }
    }
    let d = Complex { alg: c.alg.clone(), lo: 0, terms, diffs };
    Ok((d, ChainMap { maps }))
}

pub fn good_truncate_geq0(c: &Complex) -> Result<(Complex, ChainMap)> {
    good_truncate_geq0_from(c, c.lo)
}

// ---------------------------------------------------------------------------
// Hom in the homotopy category
// ---------------------------------------------------------------------------

/// Flattened layout of `Hom^n(X, Y) = prod_i Hom_k(X^i, Y^{i+n})` (all
/// vertexwise matrices, not only module maps).
struct Layout {
    degs: Vec<i64>,
    offs: Vec<usize>,
    total: usize,
}

fn layout(x: &Complex, y: &Complex, n: i64) -> Layout {
    let mut degs = Vec::new();
    let mut offs = vec![0];
    for i in x.lo..=x.hi() {
        let (a, b) = (x.dims(i), y.dims(i + n));
        let sz: usize = a.iter().zip(&b).map(|(s, t)| s * t).sum();
        degs.push(i);
        offs.push(offs.last().unwrap() + sz);
    }
    Layout { total: *offs.last().unwrap(), degs, offs }
}

fn flatten_family(l: &Layout, fam: &BTreeMap<i64, Hom>) -> Vec<u32> {
    let mut out = vec![0u32; l.total];
    for (k, &i) in l.degs.iter().enumerate() {
        if let Some(h) = fam.get(&i) {
            let f = h.flatten();
            out[l.offs[k]..l.offs[k] + f.len()].copy_from_slice(&f);
        }
    }
    out
}

fn unflatten_family(l: &Layout, x: &Complex, y: &Complex, n: i64, v: &[u32]) -> ChainMap {
    let mut maps = BTreeMap::new();
    for (k, &i) in l.degs.iter().enumerate() {
        let (src, tgt) = (x.term(i), y.term(i + n));
        let h = Hom::unflatten(&src, &tgt, &v[l.offs[k]..l.offs[k + 1]]);
        if !h.is_zero() {
            maps.insert(i, h);
        }
    }
    ChainMap { maps }
}

/// Module-map basis of `Hom^n` as (degree, hom) pairs.
fn hom_basis(x: &Complex, y: &Complex, n: i64) -> Result<Vec<(i64, Hom)>> {
    let mut out = Vec::new();
    for i in x.lo..=x.hi() {
        let (a, b) = (x.term(i), y.term(i + n));
        if a.is_zero() || b.is_zero() {
            continue;
        }
        for h in hom_space(&a, &b)? {
            out.push((i, h));
        }
    }
    Ok(out)
}

/// `D(f)^i = d_Y f^i - (-1)^n f^{i+1} d_X` as a flattened degree `n+1` family.
fn total_differential(x: &Complex, y: &Complex, n: i64, deg: i64, h: &Hom, l1: &Layout) -> Vec<u32> {
    let p = x.alg.prime();
    let mut fam = BTreeMap::new();
    // contribution d_Y^{deg+n} h into Hom(X^deg, Y^{deg+n+1})
    let a = y.diff(deg + n).compose(h);
    fam.insert(deg, a);
    // contribution -(-1)^n h d_X^{deg-1} into Hom(X^{deg-1}, Y^{deg+n})
    let b = h.compose(&x.diff(deg - 1)).scale(neg_mod(sign(n, p), p));
    fam.insert(deg - 1, b);
    flatten_family(l1, &fam)
}

pub struct HomK {
    pub dim: usize,
    /// Representatives of a basis, as families `X^i -> Y^{i+n}`.
    pub basis: Vec<ChainMap>,
}

/// `Hom_K(X, Y[n])` as `H^n` of the total Hom complex.
pub fn hom_k(x: &Complex, y: &Complex, n: i64) -> Result<HomK> {
    let p = x.alg.prime();
    let basis_n = hom_basis(x, y, n)?;
    let basis_prev = hom_basis(x, y, n - 1)?;
    let l0 = layout(x, y, n);
    let l1 = layout(x, y, n + 1);
    if basis_n.is_empty() {
        return Ok(HomK { dim: 0, basis: vec![] });
    }
    let dn_cols: Vec<Vec<u32>> = basis_n.iter().map(|(i, h)| total_differential(x, y, n, *i, h, &l1)).collect();
    let dn = Matrix::from_cols(p, l1.total, &dn_cols);
    let z = dn.nullspace();
    // cycles in the ambient coordinates of degree n
    let amb: Vec<Vec<u32>> = basis_n
        .iter()
        .map(|(i, h)| {
            let mut fam = BTreeMap::new();
            fam.insert(*i, h.clone());
            flatten_family(&l0, &fam)
        })
        .collect();
    let e = Matrix::from_cols(p, l0.total, &amb);
    let zcols: Vec<Vec<u32>> = z.iter().map(|c| e.mul_vec(c)).collect();
    let bcols: Vec<Vec<u32>> =
        basis_prev.iter().map(|(i, h)| total_differential(x, y, n - 1, *i, h, &l0)).collect();
    let bmat = Matrix::from_cols(p, l0.total, &bcols);
    let zmat = Matrix::from_cols(p, l0.total, &zcols);
    let rb = bmat.rank();
    let joint = bmat.hstack(&zmat);
    let (_, piv) = joint.rref();
    let nb = bcols.len();
    let reps: Vec<ChainMap> = piv
        .iter()
        .filter(|&&c| c >= nb)
        .map(|&c| unflatten_family(&l0, x, y, n, &zcols[c - nb]))
        .collect();
    debug_assert_eq!(reps.len(), z.len() - rb);
    Ok(HomK { dim: reps.len(), basis: reps })
}

/// Whether a family `X^i -> Y^{i+n}` is null-homotopic.
pub fn is_null_homotopic(f: &ChainMap, x: &Complex, y: &Complex, n: i64) -> Result<bool> {
    let p = x.alg.prime();
    let l0 = layout(x, y, n);
    let basis_prev = hom_basis(x, y, n - 1)?;
    let bcols: Vec<Vec<u32>> =
        basis_prev.iter().map(|(i, h)| total_differential(x, y, n - 1, *i, h, &l0)).collect();
    let bmat = Matrix::from_cols(p, l0.total, &bcols);
    let v = flatten_family(&l0, &f.maps);
    Ok(bmat.solve_vec(&v).is_some())
}

// ---------------------------------------------------------------------------
// Complexes of projectives
// ---------------------------------------------------------------------------

/// A bounded complex of projectives, each term a list of summand vertices
/// and each differential an element matrix. `terms[k]` is in degree `lo + k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjComplex {
    pub lo: i64,
    pub terms: Vec<Vec<usize>>,
    /// `diffs[k]: terms[k] -> terms[k + 1]` (rows = target summands).
    pub diffs: Vec<ElemMatrix>,
}

/// Chain map between complexes of projectives, keyed by degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProjChainMap {
    pub maps: BTreeMap<i64, ElemMatrix>,
}

impl ProjComplex {
    pub fn empty() -> Self {
        ProjComplex { lo: 0, terms: vec![], diffs: vec![] }
    }

    /// A single projective `P_{v_1} (+) ...` in degree `deg`.
    pub fn stalk(verts: &[usize], deg: i64) -> Self {
        ProjComplex { lo: deg, terms: vec![verts.to_vec()], diffs: vec![] }
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.terms.len() as i64 - 1
    }

    pub fn term(&self, i: i64) -> &[usize] {
        if i < self.lo || i > self.hi() {
            &[]
        } else {
            &self.terms[(i - self.lo) as usize]
        }
    }

    pub fn diff(&self, alg: &Algebra, i: i64) -> ElemMatrix {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            ElemMatrix::zero(alg, self.term(i + 1), self.term(i))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_empty())
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        let a = self.terms.iter().position(|t| !t.is_empty())?;
        let b = self.terms.iter().rposition(|t| !t.is_empty())?;
        Some((self.lo + a as i64, self.lo + b as i64))
    }

    pub fn window(&self, alg: &Algebra, lo: i64, hi: i64) -> ProjComplex {
        if hi < lo {
            return ProjComplex::empty();
        }
        ProjComplex {
            lo,
            terms: (lo..=hi).map(|i| self.term(i).to_vec()).collect(),
            diffs: (lo..hi).map(|i| self.diff(alg, i)).collect(),
        }
    }

    pub fn trim(&self, alg: &Algebra) -> ProjComplex {
        match self.support() {
            None => ProjComplex::empty(),
            Some((a, b)) => self.window(alg, a, b),
        }
    }

    pub fn check(&self, alg: &Algebra) -> Result<()> {
        for k in 0..self.diffs.len() {
            let d = &self.diffs[k];
            if d.cols != self.terms[k] || d.rows != self.terms[k + 1] {
                return Err(Error::Complex("differential does not match terms".into()));
            }
            for r in 0..d.rows.len() {
                for c in 0..d.cols.len() {
                    for (i, &x) in d.get(r, c).iter().enumerate() {
                        if x != 0 && (alg.basis_start(i) != d.rows[r] || alg.basis_end(i) != d.cols[c]) {
                            return Err(Error::Complex("entry made of paths between the wrong vertices".into()));
                        }
                    }
                }
            }
            if k > 0 && !self.diffs[k].compose(alg, &self.diffs[k - 1]).is_zero() {
                return Err(Error::Complex("d^2 != 0".into()));
            }
        }
        Ok(())
    }

    pub fn to_complex(&self, alg: &Arc<Algebra>) -> Complex {
        Complex {
            alg: alg.clone(),
            lo: self.lo,
            terms: self.terms.iter().map(|t| Module::proj_sum(alg, t)).collect(),
            diffs: self.diffs.iter().map(|d| d.to_hom(alg)).collect(),
        }
    }

    pub fn shift(&self, alg: &Algebra, n: i64) -> ProjComplex {
        let s = sign(n, alg.prime());
        ProjComplex { lo: self.lo - n, terms: self.terms.clone(), diffs: self.diffs.iter().map(|d| d.scale(alg, s)).collect() }
    }

    /// Total number of indecomposable summands.
    pub fn size(&self) -> usize {
        self.terms.iter().map(|t| t.len()).sum()
    }

    pub fn from_resolution(res: &algebra::Resolution) -> ProjComplex {
        let len = res.terms.len();
        let terms: Vec<Vec<usize>> = res.terms.iter().rev().cloned().collect();
        let diffs: Vec<ElemMatrix> = res.diffs.iter().rev().cloned().collect();
        ProjComplex { lo: -(len as i64 - 1), terms, diffs }
    }
}

impl ProjChainMap {
    pub fn identity(alg: &Algebra, c: &ProjComplex) -> Self {
        let maps = c.terms.iter().enumerate().map(|(k, t)| (c.lo + k as i64, ElemMatrix::identity(alg, t))).collect();
        ProjChainMap { maps }
    }

    pub fn get(&self, alg: &Algebra, i: i64, x: &ProjComplex, y: &ProjComplex) -> ElemMatrix {
        self.maps.get(&i).cloned().unwrap_or_else(|| ElemMatrix::zero(alg, y.term(i), x.term(i)))
    }

    /// `self o other`
    pub fn compose(&self, alg: &Algebra, other: &ProjChainMap, x: &ProjComplex, y: &ProjComplex, z: &ProjComplex) -> ProjChainMap {
        let mut maps = BTreeMap::new();
        let lo = x.lo.min(y.lo).min(z.lo);
        let hi = x.hi().max(y.hi()).max(z.hi());
        for i in lo..=hi {
            if x.term(i).is_empty() || z.term(i).is_empty() {
                continue;
            }
            maps.insert(i, self.get(alg, i, y, z).compose(alg, &other.get(alg, i, x, y)));
        }
        ProjChainMap { maps }
    }

    pub fn is_chain_map(&self, alg: &Algebra, x: &ProjComplex, y: &ProjComplex) -> bool {
        let lo = x.lo.min(y.lo) - 1;
        let hi = x.hi().max(y.hi()) + 1;
        (lo..=hi).all(|i| {
            let f = self.get(alg, i, x, y);
            if f.rows != y.term(i) || f.cols != x.term(i) {
                return false;
            }
            y.diff(alg, i).compose(alg, &f) == self.get(alg, i + 1, x, y).compose(alg, &x.diff(alg, i))
        })
    }

    pub fn to_chain_map(&self, alg: &Arc<Algebra>) -> ChainMap {
        ChainMap { maps: self.maps.iter().map(|(&i, m)| (i, m.to_hom(alg))).collect() }
    }

    pub fn shift(&self, n: i64) -> ProjChainMap {
        ProjChainMap { maps: self.maps.iter().map(|(&i, m)| (i - n, m.clone())).collect() }
    }
}

/// Element matrix of a module map between sums of projectives.
pub fn hom_to_elem_matrix(alg: &Algebra, src: &[usize], tgt: &[usize], h: &Hom) -> ElemMatrix {
    let gens = algebra::gens_of(src, alg, h);
    let mut m = ElemMatrix::zero(alg, tgt, src);
    for (c, &v) in src.iter().enumerate() {
        for (r, e) in vector_to_elems(alg, tgt, v, &gens[c]).into_iter().enumerate() {
            *m.get_mut(r, c) = e;
        }
    }
    m
}

/// Chain map of module complexes between complexes of projectives, as
/// element matrices; `n` is the degree (`X^i -> Y^{i+n}`).
pub fn chain_map_to_proj(alg: &Algebra, f: &ChainMap, x: &ProjComplex, y: &ProjComplex, n: i64) -> ProjChainMap {
    let mut maps = BTreeMap::new();
    for (&i, h) in &f.maps {
        if x.term(i).is_empty() || y.term(i + n).is_empty() {
            continue;
        }
        maps.insert(i, hom_to_elem_matrix(alg, x.term(i), y.term(i + n), h));
    }
    ProjChainMap { maps }
}

/// Cone of a degree-0 map of complexes of projectives.
pub fn proj_cone(alg: &Algebra, f: &ProjChainMap, x: &ProjComplex, y: &ProjComplex) -> ProjComplex {
    let lo = (x.lo - 1).min(y.lo);
    let hi = (x.hi() - 1).max(y.hi());
    let mut terms = Vec::new();
    for i in lo..=hi {
        terms.push(x.term(i + 1).iter().chain(y.term(i)).copied().collect());
    }
    let mut diffs = Vec::new();
    for i in lo..hi {
        let dx = x.diff(alg, i + 1).neg(alg);
        let z = ElemMatrix::zero(alg, x.term(i + 2), y.term(i));
        let fi = f.get(alg, i + 1, x, y);
        let dy = y.diff(alg, i);
        diffs.push(ElemMatrix::blocks(&dx, &z, &fi, &dy));
    }
    ProjComplex { lo, terms, diffs }
}

/// A projective resolution of a complex with its comparison map.
pub struct ProjResolution {
    pub proj: ProjComplex,
    /// Quasi-isomorphism (in degrees `> window_lo`) to the resolved complex.
    pub map: ChainMap,
    pub window_lo: i64,
}

/// Minimal projective resolution of a bounded complex, computed degree by
/// degree from the top: `P^i` covers the cycles of the partial cone in
/// degree `i` modulo boundaries coming from `C^{i-1}`.
pub fn projective_resolution(c: &Complex, window_lo: i64) -> Result<ProjResolution> {
    let alg = c.alg.clone();
    let nv = alg.num_vertices();
    let Some((slo, top)) = c.support() else {
        return Ok(ProjResolution { proj: ProjComplex::empty(), map: ChainMap::default(), window_lo });
    };
    // built from the top down
    let mut terms_rev: Vec<Vec<usize>> = Vec::new();
    let mut diffs_rev: Vec<ElemMatrix> = Vec::new();
    let mut maps = BTreeMap::new();
    let mut next_verts: Vec<usize> = vec![];
    let mut next_mod = Module::zero(&alg);
    let mut next_diff: Option<Hom> = None; // d_P^{i+1}
    let mut next_f = zero_hom(&alg, &vec![0; nv], &c.dims(top + 1));
    let mut i = top;
    while i >= window_lo {
        let ci = c.term(i);
        let src = algebra::sum2(&next_mod, &ci);
        // D(p, x) = (d_P p, f p - d_C x) into P^{i+2} (+) C^{i+1}
        let p2 = if terms_rev.len() >= 2 { terms_rev[terms_rev.len() - 2].clone() } else { vec![] };
        let p2_mod = Module::proj_sum(&alg, &p2);
        let tgt_mod = algebra::sum2(&p2_mod, &c.term(i + 1));
        let d11 = next_diff.clone().unwrap_or_else(|| zero_hom(&alg, &next_mod.dims, &p2_mod.dims));
        let d12 = zero_hom(&alg, &ci.dims, &p2_mod.dims);
        let d21 = next_f.clone();
        let d22 = c.diff(i).neg();
        let big = algebra::block_hom(&d11, &d12, &d21, &d22);
        debug_assert!(big.is_hom(&src, &tgt_mod));
        let (z, zi) = kernel(&big, &src);
        // boundaries from C^{i-1}: x' |-> (0, d_C x')
        let dprev = c.diff(i - 1);
        let mut bm = Vec::new();
        for v in 0..nv {
            let col = Matrix::zeros(alg.prime(), next_mod.dims[v], dprev.mats[v].cols()).vstack(&dprev.mats[v]);
            bm.push(zi.mats[v].solve(&col).expect("shapes").expect("boundaries are cycles"));
        }
        let q = cokernel(&Hom { mats: bm }, &z);
        let cov = projective_cover(&q.module);
        let verts = cov.verts.clone();
        if verts.is_empty() && i <= slo {
            break;
        }
        let mut dcols: Vec<Vec<algebra::Elem>> = Vec::new();
        let mut fgens: Vec<Vec<u32>> = Vec::new();
        for (j, &v) in verts.iter().enumerate() {
            let zvec = q.section[v].mul_vec(&cov.gens[j]);
            let w = zi.mats[v].mul_vec(&zvec);
            let (pp, xx) = w.split_at(next_mod.dims[v]);
            let neg: Vec<u32> = pp.iter().map(|&a| neg_mod(a, alg.prime())).collect();
            dcols.push(vector_to_elems(&alg, &next_verts, v, &neg));
            fgens.push(xx.to_vec());
        }
        let mut d = ElemMatrix::zero(&alg, &next_verts, &verts);
        for (j, col) in dcols.into_iter().enumerate() {
            for (r, e) in col.into_iter().enumerate() {
                *d.get_mut(r, j) = e;
            }
        }
        let f = hom_from_proj(&verts, &ci, &fgens);
        maps.insert(i, f.clone());
        let pm = Module::proj_sum(&alg, &verts);
        if !terms_rev.is_empty() {
            diffs_rev.push(d.clone());
        }
        terms_rev.push(verts.clone());
        next_diff = Some(d.to_hom(&alg));
        next_mod = pm;
        next_verts = verts;
        next_f = f;
        i -= 1;
    }
    let lo = top - terms_rev.len() as i64 + 1;
    terms_rev.reverse();
    diffs_rev.reverse();
    let proj = ProjComplex { lo, terms: terms_rev, diffs: diffs_rev };
    Ok(ProjResolution { proj, map: ChainMap { maps }, window_lo })
}

/// `dim Hom_D(X, Y[n])`, computed from a projective resolution of `X` and
/// generator coordinates for `Hom(P^i, Y^{i+n})`.
pub fn hom_d(x: &Complex, y: &Complex, n: i64) -> Result<usize> {
    let Some((ylo, _)) = y.support() else { return Ok(0) };
    if x.support().is_none() {
        return Ok(0);
    }
    let res = projective_resolution(x, hom_d_window(ylo, n))?;
    Ok(hom_d_with(&res.proj, y, n, &x.alg))
}

/// Resolution cutoff for `Hom_D(-, Y[n])` when `Y` starts in degree `ylo`.
pub fn hom_d_window(ylo: i64, n: i64) -> i64 {
    (ylo + n - 2).min(ylo - n - 2)
}

fn gen_layout(pc: &ProjComplex, y: &Complex, m: i64) -> (Vec<i64>, Vec<usize>) {
    let degs: Vec<i64> = (pc.lo..=pc.hi()).collect();
    let offs = prefix_sums(degs.iter().map(|&i| {
        let d = y.dims(i + m);
        pc.term(i).iter().map(|&v| d[v]).sum::<usize>()
    }));
    (degs, offs)
}

/// Matrix of `D: Hom^m(P, Y) -> Hom^{m+1}(P, Y)` in generator coordinates.
fn gen_differential(pc: &ProjComplex, y: &Complex, m: i64, alg: &Arc<Algebra>) -> Matrix {
    let p = alg.prime();
    let (degs, o0) = gen_layout(pc, y, m);
    let (_, o1) = gen_layout(pc, y, m + 1);
    let mut mat = Matrix::zeros(p, *o1.last().unwrap(), *o0.last().unwrap());
    let s = neg_mod(sign(m, p), p);
    for (k, &i) in degs.iter().enumerate() {
        // d_Y^{i+m} g^i
        let dy = y.diff(i + m);
        let mut r = o1[k];
        let mut c = o0[k];
        let ydims0 = y.dims(i + m);
        let ydims1 = y.dims(i + m + 1);
        for &v in pc.term(i) {
            mat.set_block(r, c, &dy.mats[v]);
            r += ydims1[v];
            c += ydims0[v];
        }
        // -(-1)^m g^{i+1} d_P^i
        if k + 1 < degs.len() {
            let yt = y.term(i + m + 1);
            let acts = yt.basis_actions();
            let h = hom_into_matrix(&pc.diff(alg, i), &yt, &acts).scale(s);
            mat.set_block(o1[k], o0[k + 1], &h);
        }
    }
    mat
}

pub fn hom_d_with(pc: &ProjComplex, y: &Complex, n: i64, alg: &Arc<Algebra>) -> usize {
    let dn = gen_differential(pc, y, n, alg);
    let dprev = gen_differential(pc, y, n - 1, alg);
    dn.cols() - dn.rank() - dprev.rank()
}

/// Both sides of the localization comparison `Hom_K(X, Y[n]) -> Hom_D(X, Y[n])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Comparison {
    pub hom_k: usize,
    pub hom_d: usize,
    pub rank: usize,
    pub hypothesis: bool,
}

impl Comparison {
    pub fn is_iso(&self) -> bool {
        self.hom_k == self.hom_d && self.rank == self.hom_k
    }
    pub fn is_injective(&self) -> bool {
        self.rank == self.hom_k
    }
}

/// Whether `Ext^t(X^i, Y^j) = 0` for all `j < i` and `1 <= t <= bound`.
pub fn perpendicular(x: &Complex, y: &Complex, bound: usize) -> Result<bool> {
    for i in x.lo..=x.hi() {
        let xi = x.term(i);
        if xi.is_zero() {
            continue;
        }
        let res = algebra::minimal_resolution(&xi, bound + 1);
        for j in y.lo..=y.hi().min(i - 1) {
            let yj = y.term(j);
            if yj.is_zero() {
                continue;
            }
            for t in 1..=bound {
                if algebra::ext_from_resolution(&res, &yj, t) != 0 {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn localization_compare(x: &Complex, y: &Complex, n: i64) -> Result<Comparison> {
    let alg = x.alg.clone();
    let p = alg.prime();
    let bound = ((x.hi() - y.lo).max(0) as usize) + n.unsigned_abs() as usize + 2;
    let hypothesis = perpendicular(x, y, bound)?;
    let hk = hom_k(x, y, n)?;
    let Some((ylo, _)) = y.support() else {
        return Ok(Comparison { hom_k: hk.dim, hom_d: 0, rank: 0, hypothesis });
    };
    let res = projective_resolution(x, hom_d_window(ylo, n).min(x.lo - 1))?;
    let pc = &res.proj;
    let hd = hom_d_with(pc, y, n, &alg);
    let dprev = gen_differential(pc, y, n - 1, &alg);
    let (degs, offs) = gen_layout(pc, y, n);
    let mut cols = Vec::new();
    for f in &hk.basis {
        let mut v = vec![0u32; *offs.last().unwrap()];
        for (k, &i) in degs.iter().enumerate() {
            let fi = f.get_deg(i, x, y, n);
            let verts = pc.term(i);
            let gens = match res.map.maps.get(&i) {
                Some(h) => algebra::gens_of(verts, &alg, h),
                None => verts.iter().map(|&vv| vec![0; x.dims(i)[vv]]).collect(),
            };
            let mut off = offs[k];
            for (j, &vv) in verts.iter().enumerate() {
                let img = fi.mats[vv].mul_vec(&gens[j]);
                v[off..off + img.len()].copy_from_slice(&img);
                off += img.len();
            }
        }
        cols.push(v);
    }
    let qm = Matrix::from_cols(p, *offs.last().unwrap(), &cols);
    let rank = dprev.hstack(&qm).rank() - dprev.rank();
    Ok(Comparison { hom_k: hk.dim, hom_d: hd, rank, hypothesis })
}

// ---------------------------------------------------------------------------
// Minimization of complexes of projectives
// ---------------------------------------------------------------------------

/// A minimized complex together with homotopy-inverse comparison maps.
pub struct Minimized {
    pub complex: ProjComplex,
    /// `original -> minimized`
    pub to_min: ProjChainMap,
    /// `minimized -> original`
    pub from_min: ProjChainMap,
}

fn find_unit(alg: &Algebra, d: &ElemMatrix) -> Option<(usize, usize)> {
    for r in 0..d.rows.len() {
        for c in 0..d.cols.len() {
            if d.rows[r] == d.cols[c] && alg.trivial_coeff(d.get(r, c), d.rows[r]) != 0 {
                return Some((r, c));
            }
        }
    }
    None
}

/// Cancel all contractible summands `P --unit--> P` by Gaussian elimination.
pub fn minimize(alg: &Algebra, c: &ProjComplex) -> Minimized {
    let mut cur = c.clone();
    let mut to_min = ProjChainMap::identity(alg, c);
    let mut from_min = ProjChainMap::identity(alg, c);
    loop {
        let mut hit = None;
        for k in 0..cur.diffs.len() {
            if let Some(rc) = find_unit(alg, &cur.diffs[k]) {
                hit = Some((k, rc));
                break;
            }
        }
        let Some((k, (r, cc))) = hit else { break };
        let i = cur.lo + k as i64;
        let (next, f, g) = eliminate(alg, &cur, i, r, cc);
        to_min = f.compose(alg, &to_min, c, &cur, &next);
        from_min = from_min.compose(alg, &g, &next, &cur, c);
        cur = next;
    }
    let trimmed = cur.trim(alg);
    Minimized { complex: trimmed, to_min, from_min }
}

/// One elimination step at `d^i` entry `(r, c)`.
fn eliminate(alg: &Algebra, cx: &ProjComplex, i: i64, r: usize, c: usize) -> (ProjComplex, ProjChainMap, ProjChainMap) {
    let d = cx.diff(alg, i);
    let v = d.rows[r];
    let phi_inv = alg.local_inverse(d.get(r, c), v).expect("unit entry");
    let keep_c: Vec<usize> = (0..d.cols.len()).filter(|&j| j != c).collect();
    let keep_r: Vec<usize> = (0..d.rows.len()).filter(|&j| j != r).collect();
    // d' = eps - gamma phi^{-1} delta
    let mut dn = d.select(&keep_r, &keep_c);
    for (a, &kr) in keep_r.iter().enumerate() {
        let g = d.get(kr, c);
        if Algebra::is_zero_elem(g) {
            continue;
        }
        let gp = alg.mul(g, &phi_inv);
        for (b, &kc) in keep_c.iter().enumerate() {
            let del = d.get(r, kc);
            if Algebra::is_zero_elem(del) {
                continue;
            }
            let t = alg.mul(&gp, del);
            let e = dn.get_mut(a, b);
            *e = alg.add(e, &alg.neg(&t));
        }
    }
    let mut out = cx.clone();
    let ki = (i - cx.lo) as usize;
    out.terms[ki] = keep_c.iter().map(|&j| d.cols[j]).collect();
    out.terms[ki + 1] = keep_r.iter().map(|&j| d.rows[j]).collect();
    out.diffs[ki] = dn;
    if ki > 0 {
        let prev = &cx.diffs[ki - 1];
        let all: Vec<usize> = (0..prev.cols.len()).collect();
        out.diffs[ki - 1] = prev.select(&keep_c, &all);
    }
    if ki + 1 < cx.diffs.len() {
        let nxt = &cx.diffs[ki + 1];
        let all: Vec<usize> = (0..nxt.rows.len()).collect();
        out.diffs[ki + 1] = nxt.select(&all, &keep_r);
    }
    // comparison maps; identity away from degrees i, i+1
    let mut f = ProjChainMap::identity(alg, cx);
    let mut g = ProjChainMap::identity(alg, &out);
    let id_i = ElemMatrix::identity(alg, &d.cols);
    let all_c: Vec<usize> = (0..d.cols.len()).collect();
    f.maps.insert(i, id_i.select(&keep_c, &all_c));
    let id_i1 = ElemMatrix::identity(alg, &d.rows);
    let all_r: Vec<usize> = (0..d.rows.len()).collect();
    let mut f1 = id_i1.select(&keep_r, &all_r);
    for (a, &kr) in keep_r.iter().enumerate() {
        let gam = d.get(kr, c);
        if !Algebra::is_zero_elem(gam) {
            *f1.get_mut(a, r) = alg.neg(&alg.mul(gam, &phi_inv));
        }
    }
    f.maps.insert(i + 1, f1);
    let mut g0 = id_i.select(&all_c, &keep_c);
    for (b, &kc) in keep_c.iter().enumerate() {
        let del = d.get(r, kc);
        if !Algebra::is_zero_elem(del) {
            *g0.get_mut(c, b) = alg.neg(&alg.mul(&phi_inv, del));
        }
    }
    g.maps.insert(i, g0);
    g.maps.insert(i + 1, id_i1.select(&all_r, &keep_r));
    (out, f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Arrow, Path, Quiver, Relation};

    fn dual_numbers() -> Arc<Algebra> {
        let q = Quiver::new(vec!["0".into()], vec![]).unwrap();
        Arc::new(Algebra::new(101, q, vec![]).unwrap().dual_numbers_extension().unwrap())
    }

    fn alg_a1() -> Arc<Algebra> {
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

    #[test]
    fn resolution_of_dual_numbers_simple() {
        let k = dual_numbers();
        let s = Complex::from_module(&Module::simple(&k, 0), 0);
        let res = projective_resolution(&s, -3).unwrap();
        assert_eq!(res.proj.lo, -3);
        assert_eq!(res.proj.terms, vec![vec![0]; 4]);
        assert!(res.proj.check(&k).is_ok());
        let pc = res.proj.to_complex(&k);
        assert!(res.map.is_chain_map(&pc, &s));
        for i in -2..=0 {
            assert!(homology_map(&res.map, &pc, &s, i).is_iso());
        }
    }

    #[test]
    fn cone_of_tau_inverse_map() {
        let a = alg_a1();
        // P_0 --alpha1--> P_1 in degrees 0, 1; cone has homology in degree 0
        let mut d = ElemMatrix::zero(&a, &[1], &[0]);
        *d.get_mut(0, 0) = a.arrow_elem(0);
        let pc = ProjComplex { lo: -1, terms: vec![vec![0], vec![1]], diffs: vec![d] };
        let c = pc.to_complex(&a);
        assert!(homology(&c, -1).is_zero());
        assert_eq!(homology(&c, 0).dims, vec![0, 1, 0, 1]);
        let res = projective_resolution(&c, -4).unwrap();
        let r = res.proj.trim(&a);
        assert_eq!(r.terms, pc.terms);
        let e = r.diffs[0].get(0, 0);
        assert!(e == &a.arrow_elem(0) || e == &a.neg(&a.arrow_elem(0)));
    }

    #[test]
    fn hom_k_and_hom_d_of_stalks() {
        let a = alg_a1();
        let p1 = Complex::from_module(&Module::projective(&a, 1), 0);
        for n in -2..=2 {
            let expect = usize::from(n == 0);
            assert_eq!(hom_k(&p1, &p1, n).unwrap().dim, expect);
            assert_eq!(hom_d(&p1, &p1, n).unwrap(), expect);
        }
        let s1 = Complex::from_module(&Module::simple(&a, 1), 0);
        let s0 = Complex::from_module(&Module::simple(&a, 0), 0);
        assert_eq!(hom_d(&s1, &s0, 1).unwrap(), 1);
        assert_eq!(hom_k(&s1, &s0, 1).unwrap().dim, 0);
    }

    #[test]
    fn minimize_cancels_identity() {
        let a = alg_a1();
        let d = ElemMatrix::identity(&a, &[1]);
        let pc = ProjComplex { lo: 0, terms: vec![vec![1], vec![1]], diffs: vec![d] };
        let m = minimize(&a, &pc);
        assert!(m.complex.is_zero());
    }
}
