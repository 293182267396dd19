//! Gorenstein projective modules, perpendicular checks, cosyzygies and
//! projective dimension.
//!
//! Gorenstein projectivity is tested with the totally reflexive criterion
//! truncated at a depth `d`: `Ext^i(X, A) = 0` and `Ext^i(Tr X, A^op) = 0`
//! for `1 <= i <= d`. A refutation is definitive; a positive answer only
//! certifies the checked depth.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{self, Algebra, Hom, Module};
use crate::complexes::{self, Complex};
use crate::stable::StableFunctor;
use crate::{Error, Result};

pub const DEFAULT_DEPTH: usize = 8;

/// `true` iff `Ext^i(x, P_v) = 0` for every vertex `v` and `m < i <= d`.
pub fn perp_check(x: &Module, m: usize, d: usize) -> Result<bool> {
    if d <= m {
        return Ok(true);
    }
    let res = algebra::minimal_resolution(x, d + 1);
    for v in 0..x.alg.num_vertices() {
        let pv = Module::projective(&x.alg, v);
        for i in m + 1..=d {
            if algebra::ext_from_resolution(&res, &pv, i) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `dim Ext^i(x, A)` for `1 <= i <= d`, `A` the regular module.
pub fn ext_regular(x: &Module, d: usize) -> Vec<usize> {
    let res = algebra::minimal_resolution(x, d + 1);
    let reg = Module::regular(&x.alg);
    (1..=d).map(|i| algebra::ext_from_resolution(&res, &reg, i)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// `Ext^i(X, A)`.
    Module,
    /// `Ext^i(Tr X, A^op)`.
    Transpose,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    GpUpToDepth(usize),
    Refuted { degree: usize, side: Side },
}

#[derive(Clone, Debug, Serialize)]
pub struct GpReport {
    pub dims: Vec<usize>,
    pub depth: usize,
    pub ext_left: Vec<usize>,
    pub ext_right: Vec<usize>,
    pub verdict: Verdict,
}

impl GpReport {
    pub fn is_gp(&self) -> bool {
        matches!(self.verdict, Verdict::GpUpToDepth(_))
    }
}

pub fn is_gorenstein_projective(x: &Module, d: usize) -> Result<GpReport> {
    if d == 0 {
        return Err(Error::Gorenstein("depth must be at least 1".into()));
    }
    let op = Arc::new(x.alg.opposite()?);
    let ext_left = ext_regular(x, d);
    let tr = algebra::transpose(x, &op);
    let ext_right = ext_regular(&tr, d);
    let verdict = if let Some(i) = ext_left.iter().position(|&e| e != 0) {
        Verdict::Refuted { degree: i + 1, side: Side::Module }
    } else if let Some(i) = ext_right.iter().position(|&e| e != 0) {
        Verdict::Refuted { degree: i + 1, side: Side::Transpose }
    } else {
        Verdict::GpUpToDepth(d)
    };
    Ok(GpReport { dims: x.dims.clone(), depth: d, ext_left, ext_right, verdict })
}

/// Recompute a refutation's nonzero Ext group as `Hom_D(X[0], A[i])` (or the
/// transpose analogue). Returns `true` for non-refuted reports.
pub fn verify_refutation(x: &Module, report: &GpReport) -> Result<bool> {
    let Verdict::Refuted { degree, side } = report.verdict else { return Ok(true) };
    let m = match side {
        Side::Module => x.clone(),
        Side::Transpose => algebra::transpose(x, &Arc::new(x.alg.opposite()?)),
    };
    let reg = Module::regular(&m.alg);
    let h = complexes::hom_d(&Complex::from_module(&m, 0), &Complex::from_module(&reg, 0), degree as i64)?;
    Ok(h != 0)
}

/// `Omega^{-1} x` as `Tr Omega Tr x`, projective summands removed.
pub fn cosyzygy(x: &Module) -> Result<Module> {
    let op = Arc::new(x.alg.opposite()?);
    let tr = algebra::transpose(x, &op);
    let om = algebra::syzygy(&tr, 1)?;
    let back = algebra::transpose(&om, &x.alg);
    Ok(algebra::strip_projectives(&back)?.module)
}

/// `0 -> X^i -> P^{i+1} -> X^{i+1} -> 0` for `i < d`.
#[derive(Clone, Debug)]
pub struct CosyzygySequence {
    pub modules: Vec<Module>,
    pub projectives: Vec<Module>,
    pub embeddings: Vec<Hom>,
    pub quotients: Vec<Hom>,
}

/// Left `add(A)`-approximation `x -> P` with the projective part of the
/// cokernel folded back into `P`.
fn cosyzygy_step(x: &Module) -> Result<(Module, Hom, Module, Hom)> {
    let alg = &x.alg;
    let mut verts = Vec::new();
    let mut rows: Vec<Hom> = Vec::new();
    for v in 0..alg.num_vertices() {
        for h in algebra::hom_space(x, &Module::projective(alg, v))? {
            verts.push(v);
            rows.push(h);
        }
    }
    let p = Module::proj_sum(alg, &verts);
    let mats = (0..alg.num_vertices())
        .map(|y| {
            let mut acc = crate::exactlin::Matrix::zeros(alg.prime(), 0, x.dims[y]);
            for h in &rows {
                acc = acc.vstack(&h.mats[y]);
            }
            acc
        })
        .collect();
    let e = Hom { mats };
    if !e.is_mono() {
        return Err(Error::Gorenstein("module is not torsionless".into()));
    }
    let q = algebra::cokernel(&e, &p);
    let st = algebra::strip_projectives(&q.module)?;
    // P' = preimage of the non-projective part
    let proj_part = Hom::identity(&q.module).sub(&st.incl.compose(&st.retr)).compose(&q.proj);
    let (pp, kincl) = algebra::kernel(&proj_part, &p);
    let emb = Hom {
        mats: (0..alg.num_vertices())
            .map(|y| {
                kincl.mats[y]
                    .solve(&e.mats[y])
                    .ok()
                    .flatten()
                    .ok_or_else(|| Error::Gorenstein("embedding does not factor".into()))
            })
            .collect::<Result<_>>()?,
    };
    let quo = st.retr.compose(&q.proj).compose(&kincl);
    Ok((pp, emb, st.module, quo))
}

pub fn cosyzygy_sequence(x: &Module, d: usize) -> Result<CosyzygySequence> {
    let rep = is_gorenstein_projective(x, d)?;
    if !rep.is_gp() {
        return Err(Error::Gorenstein(format!("not Gorenstein projective: {:?}", rep.verdict)));
    }
    let mut seq = CosyzygySequence { modules: vec![x.clone()], projectives: vec![], embeddings: vec![], quotients: vec![] };
    for i in 0..d {
        let cur = seq.modules.last().unwrap();
        let (p, emb, next, quo) = cosyzygy_step(cur)?;
        let exact = emb.is_hom(cur, &p)
            && quo.is_hom(&p, &next)
            && emb.is_mono()
            && quo.is_epi()
            && quo.compose(&emb).is_zero()
            && p.total_dim() == cur.total_dim() + next.total_dim();
        if !exact || !algebra::is_projective(&p)? {
            return Err(Error::Gorenstein(format!("step {i} is not a short exact sequence with projective middle")));
        }
        if !algebra::is_isomorphic(&next, &cosyzygy(cur)?)? {
            return Err(Error::Gorenstein(format!("step {i} disagrees with Tr Omega Tr")));
        }
        if !perp_check(&next, 0, d - i - 1)? {
            return Err(Error::Gorenstein(format!("cosyzygy {} fails the perpendicular check", i + 1)));
        }
        seq.projectives.push(p);
        seq.embeddings.push(emb);
        seq.quotients.push(quo);
        seq.modules.push(next);
    }
    Ok(seq)
}

/// Projective dimension, or `None` when it exceeds `bound`.
pub fn projdim(x: &Module, bound: usize) -> Option<usize> {
    let res = algebra::minimal_resolution(x, bound + 1);
    match res.terms.iter().rposition(|t| !t.is_empty()) {
        None => Some(0),
        Some(k) if k <= bound => Some(k),
        Some(_) => None,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationReport {
    pub source: GpReport,
    pub image: GpReport,
    /// `(m, perp over source, perp over target)` for `m < depth`.
    pub perp: Vec<(usize, bool, bool)>,
    pub preserved: bool,
}

pub fn gp_preservation_check(f: &StableFunctor, x: &Module, d: usize) -> Result<PreservationReport> {
    let source = is_gorenstein_projective(x, d)?;
    let img = f.stable_image(x)?;
    let image = is_gorenstein_projective(&img, d)?;
    let mut perp = Vec::new();
    for m in 0..d {
        perp.push((m, perp_check(x, m, d)?, perp_check(&img, m, d)?));
    }
    let preserved = (!source.is_gp() || image.is_gp()) && perp.iter().all(|&(_, a, b)| !a || b);
    Ok(PreservationReport { source, image, perp, preserved })
}

#[derive(Clone, Debug, Serialize)]
pub struct FindimRow {
    pub dims: Vec<usize>,
    pub projdim: Option<usize>,
    pub image_projdim: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FindimReport {
    pub width: usize,
    pub rows: Vec<FindimRow>,
    /// Largest finite projective dimension over the inputs and over their images.
    pub findim_source: usize,
    pub findim_images: usize,
    pub ok: bool,
}

/// `pd F(x) <= pd x <= pd F(x) + n` on every input with finite projective dimension.
pub fn findim_bounds_check(f: &StableFunctor, modules: &[Module], bound: usize) -> Result<FindimReport> {
    let n = f.data.width() as usize;
    let mut rows = Vec::new();
    for x in modules {
        let pd = projdim(x, bound);
        let img = f.stable_image(x)?;
        let ipd = projdim(&img, bound + n);
        let ok = match (pd, ipd) {
            (Some(a), Some(b)) => b <= a && a <= b + n,
            (None, None) => true,
            // a finite side forces the other to be finite
            _ => false,
        };
        rows.push(FindimRow { dims: x.dims.clone(), projdim: pd, image_projdim: ipd, ok });
    }
    let findim_source = rows.iter().filter_map(|r| r.projdim).max().unwrap_or(0);
    let findim_images = rows.iter().filter_map(|r| r.image_projdim).max().unwrap_or(0);
    let ok = rows.iter().all(|r| r.ok);
    Ok(FindimReport { width: n, rows, findim_source, findim_images, ok })
}

/// Largest finite projective dimension in a list.
pub fn findim_over(modules: &[Module], bound: usize) -> usize {
    modules.iter().filter_map(|m| projdim(m, bound)).max().unwrap_or(0)
}

pub fn opposite_arc(alg: &Arc<Algebra>) -> Result<Arc<Algebra>> {
    Ok(Arc::new(alg.opposite()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quiver;
    use crate::corpus::Family;

    fn dual_numbers() -> Arc<Algebra> {
        let q = Quiver::new(vec!["0".into()], vec![]).unwrap();
        let k = Algebra::new(101, q, vec![]).unwrap();
        Arc::new(k.dual_numbers_extension().unwrap())
    }

    #[test]
    fn k_over_dual_numbers_is_gp() {
        let a = dual_numbers();
        let k = Module::simple(&a, 0);
        assert!(perp_check(&k, 0, 6).unwrap());
        let r = is_gorenstein_projective(&k, 8).unwrap();
        assert_eq!(r.verdict, Verdict::GpUpToDepth(8));
        assert_eq!(projdim(&k, 5), None);
        let seq = cosyzygy_sequence(&k, 4).unwrap();
        for (p, m) in seq.projectives.iter().zip(&seq.modules[1..]) {
            assert_eq!(p.total_dim(), 2);
            assert!(algebra::is_isomorphic(m, &k).unwrap());
        }
    }

    #[test]
    fn simple_over_a_is_refuted() {
        let c = Family::default_prime(1).unwrap();
        let s1 = Module::simple(&c.a, 1);
        assert!(!perp_check(&s1, 0, 4).unwrap());
        let r = is_gorenstein_projective(&s1, 2).unwrap();
        assert!(!r.is_gp());
        assert!(verify_refutation(&s1, &r).unwrap());
    }

    #[test]
    fn projectives() {
        let c = Family::default_prime(1).unwrap();
        let p = Module::projective(&c.a, 2);
        assert!(is_gorenstein_projective(&p, 3).unwrap().is_gp());
        assert_eq!(projdim(&p, 3), Some(0));
    }

    #[test]
    fn s_tensor_p1_cosyzygies() {
        let c = Family::default_prime(1).unwrap();
        let x = c.s_tensor_p(1);
        let seq = cosyzygy_sequence(&x, 4).unwrap();
        assert_eq!(seq.modules.len(), 5);
        assert!(!algebra::syzygy(&seq.modules[1], 1).unwrap().is_zero());
    }

    #[test]
    fn double_opposite() {
        let c = Family::default_prime(1).unwrap();
        let op = opposite_arc(&c.a).unwrap();
        assert!(algebra::same_alg(&opposite_arc(&op).unwrap(), &c.a));
    }
}
