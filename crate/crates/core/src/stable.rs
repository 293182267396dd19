//! The stable category and the stable functor of a non-negative functor.
//!
//! For a module `X`, `F` is applied to a projective resolution of `X` of
//! length at least `width + 2`; the result is exact in degrees `>= -1` and
//! is (after optional minimization) a complex `C` of projectives. Then
//! `M_X = coker(C^{-1} -> C^0)` and `U_X = sigma_{>=1} C`, giving the
//! truncation triangle `U_X -> F(X) -> M_X -> U_X[1]`.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{self, Algebra, Hom, Module, Quotient, Stripped};
use crate::complexes::{self, minimize, ChainMap, Complex, Minimized, ProjChainMap, ProjComplex};
use crate::exactlin::{neg_mod, Matrix};
use crate::functors::{lift_to_resolutions, FunctorData, NonNegReport, Resolved};
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Homs modulo projectives
// ---------------------------------------------------------------------------

/// Flattened maps `x -> y` factoring through a projective, as matrix columns.
pub fn factoring_subspace(x: &Module, y: &Module) -> Result<Matrix> {
    let p = x.prime();
    let n: usize = x.dims.iter().zip(&y.dims).map(|(a, b)| a * b).sum();
    let cov = algebra::projective_cover(y);
    let py = Module::proj_sum(&y.alg, &cov.verts);
    let cols: Vec<Vec<u32>> = algebra::hom_space(x, &py)?.iter().map(|h| cov.epi.compose(h).flatten()).collect();
    Ok(Matrix::from_cols(p, n, &cols))
}

/// `dim Hom(x, y)` modulo maps factoring through projectives.
pub fn stable_hom_dim(x: &Module, y: &Module) -> Result<usize> {
    Ok(algebra::hom_dim(x, y)? - factoring_subspace(x, y)?.rank())
}

pub fn is_stably_zero(h: &Hom, x: &Module, y: &Module) -> Result<bool> {
    let sub = factoring_subspace(x, y)?;
    let v = Matrix::from_cols(x.prime(), sub.rows(), &[h.flatten()]);
    Ok(sub.hstack(&v).rank() == sub.rank())
}

pub fn stably_equal(a: &Hom, b: &Hom, x: &Module, y: &Module) -> Result<bool> {
    is_stably_zero(&a.sub(b), x, y)
}

/// Isomorphism in the stable category: strip projective summands, then compare.
pub fn stable_iso(x: &Module, y: &Module) -> Result<bool> {
    let sx = algebra::strip_projectives(x)?.module;
    let sy = algebra::strip_projectives(y)?.module;
    Ok(algebra::is_isomorphic(&sx, &sy)?)
}

// ---------------------------------------------------------------------------
// The stable functor
// ---------------------------------------------------------------------------

/// Functor data with a verified non-negativity certificate.
#[derive(Clone, Debug)]
pub struct StableFunctor {
    pub data: FunctorData,
    pub certificate: NonNegReport,
}

/// How the truncation triangle is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Minimal resolution, minimized image.
    Minimal,
    /// Minimal resolution padded by a split summand `P_v --1--> P_v`, image not minimized.
    Padded(usize),
}

/// `U_X -> F(X) -> M_X -> U_X[1]` together with the data used to build it.
#[derive(Clone, Debug)]
pub struct TruncationTriangle {
    pub resolved: Resolved,
    /// `F` applied to the resolution.
    pub raw: ProjComplex,
    /// The complex `C` (raw or minimized) and comparison maps with `raw`.
    pub complex: ProjComplex,
    pub to_c: ProjChainMap,
    pub from_c: ProjChainMap,
    /// `coker(C^{-1} -> C^0)` as a quotient of `C^0`.
    pub coker: Quotient,
    /// `U_X = sigma_{>=1} C`.
    pub u: ProjComplex,
    /// `M_X` with projective summands removed.
    pub stripped: Stripped,
}

impl TruncationTriangle {
    /// The stable image `M_X` (no projective summands).
    pub fn module(&self) -> &Module {
        &self.stripped.module
    }

    /// `M_X` before stripping projective summands.
    pub fn raw_module(&self) -> &Module {
        &self.coker.module
    }

    /// `pi_X: F(X) -> M_X[0]`, as the chain map `C -> coker[0]`.
    pub fn pi(&self) -> ChainMap {
        ChainMap { maps: [(0, self.coker.proj.clone())].into_iter().collect() }
    }

    /// `i_X: U_X -> C`, the inclusion of the brutal truncation.
    pub fn i(&self, alg: &Arc<Algebra>) -> ProjChainMap {
        ProjChainMap::identity(alg, &self.u)
    }
}

/// Induced map on degree-zero cokernels of a chain map `C_x -> C_y`.
fn induced_on_coker(h0: &Hom, cx: &Quotient, cy: &Quotient) -> Hom {
    let mats = (0..h0.mats.len()).map(|v| cy.proj.mats[v].mul(&h0.mats[v]).mul(&cx.section[v])).collect();
    Hom { mats }
}

impl StableFunctor {
    pub fn new(data: FunctorData) -> Result<Self> {
        let certificate = data.non_negativity()?;
        if !(certificate.images_ok && certificate.simples_ok) {
            return Err(Error::Stable(format!("functor is not non-negative (witness {:?})", certificate.witness)));
        }
        Ok(StableFunctor { data, certificate })
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.data.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.data.target
    }

    /// Resolution length used for stable images.
    pub fn resolution_length(&self) -> usize {
        (self.data.width() + 2) as usize
    }

    pub fn triangle(&self, x: &Module) -> Result<TruncationTriangle> {
        self.triangle_with(x, Strategy::Minimal)
    }

    pub fn triangle_with(&self, x: &Module, strategy: Strategy) -> Result<TruncationTriangle> {
        let base = Resolved::minimal(x, self.resolution_length());
        let resolved = match strategy {
            Strategy::Minimal => base,
            Strategy::Padded(v) => base.with_split_summand(v),
        };
        self.triangle_from(resolved, strategy == Strategy::Minimal)
    }

    pub fn triangle_from(&self, resolved: Resolved, minimal: bool) -> Result<TruncationTriangle> {
        let t = self.target().clone();
        let raw = self.data.apply_proj(&resolved.complex);
        let (complex, to_c, from_c) = if minimal {
            let Minimized { complex, to_min, from_min } = minimize(&t, &raw);
            (complex, to_min, from_min)
        } else {
            (raw.clone(), ProjChainMap::identity(&t, &raw), ProjChainMap::identity(&t, &raw))
        };
        let c0 = Module::proj_sum(&t, complex.term(0));
        let d = complex.diff(&t, -1).to_hom(&t);
        let coker = algebra::cokernel(&d, &c0);
        let u = complex.window(&t, 1, complex.hi().max(0)).trim(&t);
        let stripped = algebra::strip_projectives(&coker.module)?;
        Ok(TruncationTriangle { resolved, raw, complex, to_c, from_c, coker, u, stripped })
    }

    /// `\bar F(x)`.
    pub fn stable_image(&self, x: &Module) -> Result<Module> {
        Ok(self.triangle(x)?.module().clone())
    }

    /// Map `M_x -> M_y` induced by a chain map `raw_x -> raw_y`, before stripping.
    pub fn induced_raw(&self, h: &ProjChainMap, tx: &TruncationTriangle, ty: &TruncationTriangle) -> Hom {
        let t = self.target();
        let h0 = ty
            .to_c
            .get(t, 0, &ty.raw, &ty.complex)
            .compose(t, &h.get(t, 0, &tx.raw, &ty.raw))
            .compose(t, &tx.from_c.get(t, 0, &tx.complex, &tx.raw));
        induced_on_coker(&h0.to_hom(t), &tx.coker, &ty.coker)
    }

    /// Stripped version of [`Self::induced_raw`].
    pub fn induced(&self, h: &ProjChainMap, tx: &TruncationTriangle, ty: &TruncationTriangle) -> Hom {
        let b = self.induced_raw(h, tx, ty);
        ty.stripped.retr.compose(&b).compose(&tx.stripped.incl)
    }

    /// `\bar F(phi): M_x -> M_y` for `phi: x -> y`, between the given triangles.
    pub fn stable_image_map(&self, phi: &Hom, tx: &TruncationTriangle, ty: &TruncationTriangle) -> Result<Hom> {
        let lift = lift_to_resolutions(self.source(), phi, &tx.resolved, &ty.resolved)?;
        let fl = self.data.apply_proj_map(&lift, &tx.resolved.complex, &ty.resolved.complex);
        Ok(self.induced(&fl, tx, ty))
    }

    /// Exact sequence `0 -> M_x -> M_y (+) P -> M_z (+) Q -> 0` for a short exact
    /// sequence `0 -> x --f--> y --g--> z -> 0`.
    pub fn exact_sequence_image(&self, f: &Hom, g: &Hom, x: &Module, y: &Module, z: &Module) -> Result<ExactImage> {
        check_ses(f, g, x, y, z)?;
        let src = self.source().clone();
        let t = self.target().clone();
        let len = self.resolution_length();
        let rx = Resolved::minimal(x, len);
        let rz = Resolved::minimal(z, len);
        let (ry, p_map, q_map) = horseshoe(&src, f, g, &rx, &rz, y)?;
        // F applied to the degreewise split sequence of resolutions
        let (fx, fy, fz) = (
            self.data.apply_proj(&rx.complex),
            self.data.apply_proj(&ry.complex),
            self.data.apply_proj(&rz.complex),
        );
        let fp = self.data.apply_proj_map(&p_map, &rx.complex, &ry.complex);
        let fq = self.data.apply_proj_map(&q_map, &ry.complex, &rz.complex);
        // good truncations as complexes of modules: coker in degree 0, projectives above
        let (cx, kx) = truncated(&t, &fx);
        let (cy, ky) = truncated(&t, &fy);
        let (cz, kz) = truncated(&t, &fz);
        let p = chain_on_truncations(&t, &fp, &fx, &fy, &kx, &ky, &cx, &cy);
        let q = chain_on_truncations(&t, &fq, &fy, &fz, &ky, &kz, &cy, &cz);
        if !p.is_chain_map(&cx, &cy) || !q.is_chain_map(&cy, &cz) {
            return Err(Error::Stable("truncated maps are not chain maps".into()));
        }
        // r = (p, 0): P_X -> cone(q)[-1]; q p = 0 on the nose
        let cq = complexes::cone(&q, &cy, &cz);
        let cq1 = complexes::shift(&cq.cone, -1);
        let mut rmaps = BTreeMap::new();
        for i in cx.lo..=cx.hi() {
            let pi = p.get(i, &cx, &cy);
            let zpart = complexes::zero_hom(&t, &cx.dims(i), &cz.dims(i - 1));
            let mats = pi.mats.iter().zip(&zpart.mats).map(|(a, b)| a.vstack(b)).collect();
            rmaps.insert(i, Hom { mats });
        }
        let r = ChainMap { maps: rmaps };
        if !r.is_chain_map(&cx, &cq1) {
            return Err(Error::Stable("r is not a chain map".into()));
        }
        let cr = complexes::cone(&r, &cx, &cq1).cone;
        if !complexes::is_acyclic(&cr) {
            return Err(Error::Stable("cone(r) is not acyclic".into()));
        }
        // 0 -> cr^{-1} -> cr^0 -> cr^1 -> V -> 0, V = image of d^1, projective
        let (c_m1, c0, c1) = (cr.term(-1), cr.term(0), cr.term(1));
        let d_m1 = cr.diff(-1);
        let d0 = cr.diff(0);
        let d1 = cr.diff(1);
        let (vmod, vincl) = algebra::image(&d1, &cr.term(2));
        let vcov = algebra::projective_cover(&vmod);
        if vcov.verts.iter().map(|&w| Module::projective(&t, w).total_dim()).sum::<usize>() != vmod.total_dim() {
            return Err(Error::Stable("V is not projective".into()));
        }
        // section V -> cr^1 of the corestriction of d^1
        let mut gens = Vec::new();
        for (j, &w) in vcov.verts.iter().enumerate() {
            let target = vincl.mats[w].mul_vec(&vcov.gens[j]);
            gens.push(d1.mats[w].solve_vec(&target).ok_or_else(|| Error::Stable("section lift failed".into()))?);
        }
        let lift = algebra::hom_from_proj(&vcov.verts, &c1, &gens);
        let inv: Vec<Matrix> = vcov.epi.mats.iter().map(|m| m.inverse().expect("cover of a projective is an iso")).collect();
        let section = Hom { mats: lift.mats.iter().zip(&inv).map(|(a, b)| a.mul(b)).collect() };
        // assemble 0 -> cr^{-1} --(0, d^{-1})--> V (+) cr^0 --[s | d^0]--> cr^1 -> 0
        let middle = algebra::sum2(&vmod, &c0);
        let iota = Hom {
            mats: (0..t.num_vertices())
                .map(|v| Matrix::zeros(t.prime(), vmod.dims[v], c_m1.dims[v]).vstack(&d_m1.mats[v]))
                .collect(),
        };
        // negate the M_z summand so the edge map is q^0 itself
        let sign = z_sign(&t, &cx, &cy, &cz);
        let pi = Hom { mats: (0..t.num_vertices()).map(|v| sign.mats[v].mul(&section.mats[v].hstack(&d0.mats[v]))).collect() };
        let seq = ExactImage {
            left: c_m1.clone(),
            middle,
            right: c1.clone(),
            iota,
            pi,
            v: vcov.verts.clone(),
            p_extra: cx.term(1),
            q_extra: (cx.term(2), cy.term(1)),
            a: p.get(0, &cx, &cy),
            u: q.get(0, &cy, &cz),
            m: [cx.term(0), cy.term(0), cz.term(0)],
            resolutions: [rx, ry, rz],
        };
        if !seq.is_exact() {
            return Err(Error::Stable("assembled sequence is not exact".into()));
        }
        Ok(seq)
    }
}

impl StableFunctor {
    /// Whether the edge maps `a`, `u` of an exact image agree stably with
    /// `\bar F(f)`, `\bar F(g)`, both on the horseshoe triangles and after
    /// transport to the minimal ones.
    pub fn edges_match(&self, e: &ExactImage, f: &Hom, g: &Hom) -> Result<bool> {
        let [rx, ry, rz] = &e.resolutions;
        let tri: Vec<TruncationTriangle> =
            [rx, ry, rz].iter().map(|r| self.triangle_from((*r).clone(), false)).collect::<Result<_>>()?;
        let mins: Vec<TruncationTriangle> =
            [rx, ry, rz].iter().map(|r| self.triangle(&r.module)).collect::<Result<_>>()?;
        for (k, (edge, phi)) in [(&e.a, f), (&e.u, g)].into_iter().enumerate() {
            let (s, t) = (&tri[k], &tri[k + 1]);
            if s.raw_module() != &e.m[k] || t.raw_module() != &e.m[k + 1] {
                return Err(Error::Stable("horseshoe cokernels differ from the triangle cokernels".into()));
            }
            let edge = t.stripped.retr.compose(edge).compose(&s.stripped.incl);
            let canon = self.stable_image_map(phi, s, t)?;
            if !stably_equal(&edge, &canon, s.module(), t.module())? {
                return Ok(false);
            }
            // transport to the minimal triangles
            let (ms, mt) = (&mins[k], &mins[k + 1]);
            let cs = self.stable_image_map(&Hom::identity(&s.resolved.module), s, ms)?;
            let ct = self.stable_image_map(&Hom::identity(&t.resolved.module), t, mt)?;
            let lhs = ct.compose(&edge);
            let rhs = self.stable_image_map(phi, ms, mt)?.compose(&cs);
            if !stably_equal(&lhs, &rhs, s.module(), mt.module())? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Sign automorphism of `cr^1 = P_X^2 (+) P_Y^1 (+) P_Z^0` negating the `P_Z^0` part.
fn z_sign(t: &Arc<Algebra>, cx: &Complex, cy: &Complex, cz: &Complex) -> Hom {
    let p = t.prime();
    let mats = (0..t.num_vertices())
        .map(|v| {
            let a = cx.dims(2)[v] + cy.dims(1)[v];
            let b = cz.dims(0)[v];
            Matrix::identity(p, a).block_diag(&Matrix::scalar(p, b, neg_mod(1, p)))
        })
        .collect();
    Hom { mats }
}

fn check_ses(f: &Hom, g: &Hom, x: &Module, y: &Module, z: &Module) -> Result<()> {
    let ok = f.is_hom(x, y)
        && g.is_hom(y, z)
        && f.is_mono()
        && g.is_epi()
        && g.compose(f).is_zero()
        && y.total_dim() == x.total_dim() + z.total_dim();
    if ok {
        Ok(())
    } else {
        Err(Error::Stable("input sequence is not exact".into()))
    }
}

/// Horseshoe resolution of `y` from resolutions of `x` and `z`, with the
/// degreewise split inclusion and projection.
fn horseshoe(
    alg: &Arc<Algebra>,
    f: &Hom,
    g: &Hom,
    rx: &Resolved,
    rz: &Resolved,
    y: &Module,
) -> Result<(Resolved, ProjChainMap, ProjChainMap)> {
    let (cx, cz) = (&rx.complex, &rz.complex);
    let lo = cx.lo.min(cz.lo);
    let terms: Vec<Vec<usize>> = (lo..=0).map(|i| cx.term(i).iter().chain(cz.term(i)).copied().collect()).collect();
    // lambda: P_z^0 -> y lifting the augmentation of z through g
    let ex = rx.augmentation();
    let mut aug: Vec<Vec<u32>> = rx.aug.iter().enumerate().map(|(j, a)| f.mats[cx.term(0)[j]].mul_vec(a)).collect();
    for (j, &v) in cz.term(0).iter().enumerate() {
        let l = g.mats[v].solve_vec(&rz.aug[j]).ok_or_else(|| Error::Stable("g is not onto".into()))?;
        aug.push(l);
    }
    let lam = algebra::hom_from_proj(cz.term(0), y, &aug[cx.term(0).len()..]);
    // theta^i: P_z^i -> P_x^{i+1}, block (1, 2) of d_y^i
    let mut thetas: BTreeMap<i64, algebra::ElemMatrix> = BTreeMap::new();
    for i in (lo..0).rev() {
        let dz = cz.diff(alg, i);
        let mut theta = algebra::ElemMatrix::zero(alg, cx.term(i + 1), cz.term(i));
        for (j, &v) in cz.term(i).iter().enumerate() {
            let need: Vec<u32> = if i == -1 {
                // f eps_x theta = -lambda d_z on the generator
                let col: Vec<algebra::Elem> = (0..dz.rows.len()).map(|r| dz.get(r, j).clone()).collect();
                let vec0 = algebra::elems_to_vector(alg, cz.term(0), v, &col);
                let acc: Vec<u32> = lam.mats[v].mul_vec(&vec0).iter().map(|&b| neg_mod(b, alg.prime())).collect();
                let pre = f.mats[v].solve_vec(&acc).ok_or_else(|| Error::Stable("horseshoe: not in image of f".into()))?;
                ex.mats[v].solve_vec(&pre).ok_or_else(|| Error::Stable("horseshoe: augmentation lift failed".into()))?
            } else {
                // d_x theta^i = -theta^{i+1} d_z^i
                let th1 = &thetas[&(i + 1)];
                let comp = th1.compose(alg, &dz);
                let col: Vec<algebra::Elem> = (0..comp.rows.len()).map(|r| alg.neg(comp.get(r, j))).collect();
                let target = algebra::elems_to_vector(alg, cx.term(i + 2), v, &col);
                let dx = cx.diff(alg, i + 1).to_hom(alg);
                dx.mats[v].solve_vec(&target).ok_or_else(|| Error::Stable("horseshoe: lifting failed".into()))?
            };
            for (r, e) in algebra::vector_to_elems(alg, cx.term(i + 1), v, &need).into_iter().enumerate() {
                *theta.get_mut(r, j) = e;
            }
        }
        thetas.insert(i, theta);
    }
    let mut diffs = Vec::new();
    for i in lo..0 {
        let dx = cx.diff(alg, i);
        let dz = cz.diff(alg, i);
        let z21 = algebra::ElemMatrix::zero(alg, cz.term(i + 1), cx.term(i));
        diffs.push(algebra::ElemMatrix::blocks(&dx, &thetas[&i], &z21, &dz));
    }
    let complex = ProjComplex { lo, terms, diffs };
    complex.check(alg)?;
    let mut pm = BTreeMap::new();
    let mut qm = BTreeMap::new();
    for i in lo..=0 {
        let (a, b) = (cx.term(i), cz.term(i));
        let mut inc = algebra::ElemMatrix::zero(alg, complex.term(i), a);
        for k in 0..a.len() {
            *inc.get_mut(k, k) = alg.idempotent(a[k]);
        }
        let mut pr = algebra::ElemMatrix::zero(alg, b, complex.term(i));
        for k in 0..b.len() {
            *pr.get_mut(k, a.len() + k) = alg.idempotent(b[k]);
        }
        pm.insert(i, inc);
        qm.insert(i, pr);
    }
    let ry = Resolved { module: y.clone(), complex, aug };
    Ok((ry, ProjChainMap { maps: pm }, ProjChainMap { maps: qm }))
}

/// Good truncation at degree zero of a complex of projectives, as a complex
/// of modules, with the cokernel data.
fn truncated(t: &Arc<Algebra>, c: &ProjComplex) -> (Complex, Quotient) {
    let c0 = Module::proj_sum(t, c.term(0));
    let coker = algebra::cokernel(&c.diff(t, -1).to_hom(t), &c0);
    let hi = c.hi().max(0);
    let mut terms = vec![coker.module.clone()];
    let mut diffs = Vec::new();
    for i in 1..=hi {
        terms.push(Module::proj_sum(t, c.term(i)));
    }
    // d^0 factors through the cokernel
    if hi >= 1 {
        let d0 = c.diff(t, 0).to_hom(t);
        diffs.push(Hom { mats: (0..t.num_vertices()).map(|v| d0.mats[v].mul(&coker.section[v])).collect() });
    }
    for i in 1..hi {
        diffs.push(c.diff(t, i).to_hom(t));
    }
    (Complex { alg: t.clone(), lo: 0, terms, diffs }, coker)
}

#[allow(clippy::too_many_arguments)]
fn chain_on_truncations(
    t: &Arc<Algebra>,
    h: &ProjChainMap,
    x: &ProjComplex,
    y: &ProjComplex,
    kx: &Quotient,
    ky: &Quotient,
    cx: &Complex,
    cy: &Complex,
) -> ChainMap {
    let mut maps = BTreeMap::new();
    maps.insert(0, induced_on_coker(&h.get(t, 0, x, y).to_hom(t), kx, ky));
    for i in 1..=cx.hi().max(cy.hi()) {
        if cx.term(i).is_zero() && cy.term(i).is_zero() {
            continue;
        }
        maps.insert(i, h.get(t, i, x, y).to_hom(t));
    }
    ChainMap { maps }
}

/// The output of [`StableFunctor::exact_sequence_image`].
#[derive(Clone, Debug)]
pub struct ExactImage {
    /// `M_x` (the raw stable image from the chosen triangle).
    pub left: Module,
    /// `V (+) P_X^1 (+) M_y`.
    pub middle: Module,
    /// `P_X^2 (+) P_Y^1 (+) M_z`.
    pub right: Module,
    pub iota: Hom,
    pub pi: Hom,
    /// Summands of the projective `V`.
    pub v: Vec<usize>,
    pub p_extra: Module,
    pub q_extra: (Module, Module),
    /// Edge components `a: M_x -> M_y` and `u: M_y -> M_z`.
    pub a: Hom,
    pub u: Hom,
    /// Raw stable images of `x`, `y`, `z` from the horseshoe triangles.
    pub m: [Module; 3],
    pub resolutions: [Resolved; 3],
}

impl ExactImage {
    pub fn is_exact(&self) -> bool {
        self.iota.is_hom(&self.left, &self.middle)
            && self.pi.is_hom(&self.middle, &self.right)
            && self.iota.is_mono()
            && self.pi.is_epi()
            && self.pi.compose(&self.iota).is_zero()
            && self.middle.total_dim() == self.left.total_dim() + self.right.total_dim()
    }

    /// `P = V (+) P_X^1` and `Q = P_X^2 (+) P_Y^1` are projective.
    pub fn extras_projective(&self) -> Result<bool> {
        Ok(algebra::is_projective(&self.p_extra)?
            && algebra::is_projective(&self.q_extra.0)?
            && algebra::is_projective(&self.q_extra.1)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Arrow, Quiver};
    use crate::corpus::Family;

    fn dual_numbers() -> Arc<Algebra> {
        let q = Quiver::new(vec!["0".into()], vec![]).unwrap();
        let k = Algebra::new(101, q, vec![]).unwrap();
        Arc::new(k.dual_numbers_extension().unwrap())
    }

    #[test]
    fn stable_end_of_k_over_dual_numbers() {
        let a = dual_numbers();
        let k = Module::simple(&a, 0);
        assert_eq!(stable_hom_dim(&k, &k).unwrap(), 1);
        let r = Module::projective(&a, 0);
        assert_eq!(stable_hom_dim(&r, &k).unwrap(), 0);
    }

    #[test]
    fn omega_one_on_k() {
        let a = dual_numbers();
        let sf = StableFunctor::new(FunctorData::omega(&a, 1)).unwrap();
        let k = Module::simple(&a, 0);
        assert!(stable_iso(&sf.stable_image(&k).unwrap(), &k).unwrap());
    }

    #[test]
    fn identity_strips_projectives() {
        let q = Quiver::new(
            vec!["0".into(), "1".into()],
            vec![Arrow { name: "a".into(), source: 1, target: 0 }],
        )
        .unwrap();
        let alg = Arc::new(Algebra::new(101, q, vec![]).unwrap());
        let sf = StableFunctor::new(FunctorData::identity(&alg)).unwrap();
        let x = algebra::sum2(&Module::simple(&alg, 1), &Module::projective(&alg, 0));
        let m = sf.stable_image(&x).unwrap();
        assert!(algebra::is_isomorphic(&m, &Module::simple(&alg, 1)).unwrap());
    }

    #[test]
    fn shifted_data_is_rejected() {
        let a = dual_numbers();
        assert!(StableFunctor::new(FunctorData::omega(&a, -1)).is_err());
    }

    #[test]
    fn builtin_odd_projective_images() {
        let c = Family::default_prime(1).unwrap();
        let sf = StableFunctor::new(c.f_ext.clone()).unwrap();
        for v in [1, 3] {
            let n = sf.stable_image(&c.s_tensor_q(v)).unwrap();
            assert!(stable_iso(&n, &c.s_tensor_p(v)).unwrap(), "vertex {v}");
        }
        let n0 = sf.stable_image(&c.module(0, 4).unwrap().module).unwrap();
        assert!(stable_iso(&n0, &c.pullback_n(0).unwrap()).unwrap());
    }

    #[test]
    fn identity_map_goes_to_identity() {
        let c = Family::default_prime(1).unwrap();
        let sf = StableFunctor::new(c.f_ext.clone()).unwrap();
        let x = &c.module(1, 2).unwrap().module;
        let tx = sf.triangle(x).unwrap();
        let b = sf.stable_image_map(&Hom::identity(x), &tx, &tx).unwrap();
        let m = tx.module();
        assert!(stably_equal(&b, &Hom::identity(m), m, m).unwrap());
    }

    #[test]
    fn exact_image_of_corpus_sequence() {
        let c = Family::default_prime(1).unwrap();
        let sf = StableFunctor::new(c.f_ext.clone()).unwrap();
        let s = c.module(0, 1).unwrap().ses.clone().unwrap();
        let e = sf.exact_sequence_image(&s.f, &s.g, &s.sub, &s.mid, &s.quot).unwrap();
        assert!(e.is_exact());
        assert!(e.extras_projective().unwrap());
        assert!(sf.edges_match(&e, &s.f, &s.g).unwrap());
    }
}
