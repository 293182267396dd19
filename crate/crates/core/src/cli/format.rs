//! The JSON definition format. See `docs/FORMAT.md` for the grammar.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, Arrow, ElemMatrix, Elem, Module, Path, Quiver, Relation};
use crate::complexes::{Complex, ProjChainMap, ProjComplex};
use crate::corpus::Family;
use crate::exactlin::{Matrix, DEFAULT_PRIME};
use crate::functors::FunctorData;
use crate::{Error, Result};

/// `[coefficient, "path"]`; the path is arrow names separated by spaces, or
/// `@v` for the trivial path at vertex `v`.
pub type TermDef = (i64, String);
pub type ElemDef = Vec<TermDef>;
pub type ElemMatrixDef = Vec<Vec<ElemDef>>;
pub type MatrixDef = Vec<Vec<i64>>;

#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FieldDef {
    pub prime: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ArrowDef {
    pub name: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum AlgebraDef {
    Quiver {
        vertices: Vec<String>,
        #[serde(default)]
        arrows: Vec<ArrowDef>,
        #[serde(default)]
        relations: Vec<Vec<TermDef>>,
    },
    DualNumbers { dual_numbers_of: String },
    Opposite { opposite_of: String },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct PresentationDef {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: ElemMatrixDef,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum ModuleDef {
    Explicit {
        algebra: String,
        dims: Vec<usize>,
        #[serde(default)]
        arrows: BTreeMap<String, MatrixDef>,
    },
    Projective { algebra: String, projective: String },
    Simple { algebra: String, simple: String },
    Presentation { algebra: String, presentation: PresentationDef },
    Sum { sum: Vec<String> },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TermRef {
    Named(String),
    Inline(Box<ModuleDef>),
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ComplexDef {
    pub algebra: String,
    pub lo: i64,
    pub terms: Vec<TermRef>,
    /// One map per differential: vertex label to matrix; missing vertices are zero.
    #[serde(default)]
    pub diffs: Vec<BTreeMap<String, MatrixDef>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProjComplexDef {
    pub lo: i64,
    pub terms: Vec<Vec<String>>,
    #[serde(default)]
    pub diffs: Vec<ElemMatrixDef>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum FunctorDef {
    Explicit {
        source: String,
        target: String,
        images: BTreeMap<String, ProjComplexDef>,
        #[serde(default)]
        arrow_maps: BTreeMap<String, BTreeMap<String, ElemMatrixDef>>,
    },
    DualNumbers { dual_numbers_of: String, source: String, target: String },
    Compose { compose: Vec<String> },
    Shift { shift: String, by: i64 },
    Omega { omega: String, k: i64 },
}

/// A definition file as written on disk.
#[derive(Clone, Debug, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct DefinitionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDef>,
    #[serde(default)]
    pub algebras: BTreeMap<String, AlgebraDef>,
    #[serde(default)]
    pub modules: BTreeMap<String, ModuleDef>,
    #[serde(default)]
    pub complexes: BTreeMap<String, ComplexDef>,
    #[serde(default)]
    pub functors: BTreeMap<String, FunctorDef>,
}

/// Validated objects, keyed by name.
#[derive(Clone, Debug, Default)]
pub struct Definitions {
    pub prime: u32,
    pub algebras: BTreeMap<String, Arc<Algebra>>,
    pub modules: BTreeMap<String, Module>,
    pub complexes: BTreeMap<String, Complex>,
    pub functors: BTreeMap<String, FunctorData>,
}

fn err(loc: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{loc}: {msg}"))
}

pub fn is_prime(p: u32) -> bool {
    crate::exactlin::is_odd_prime(p)
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

fn vertex(alg: &Algebra, label: &str, loc: &str) -> Result<usize> {
    alg.quiver().vertex(label).ok_or_else(|| err(loc, format!("unknown vertex '{label}'")))
}

fn parse_path(q: &Quiver, s: &str, loc: &str) -> Result<Path> {
    let s = s.trim();
    if let Some(v) = s.strip_prefix('@') {
        let v = q.vertex(v).ok_or_else(|| err(loc, format!("unknown vertex '{v}'")))?;
        return Ok(Path::trivial(v));
    }
    let names: Vec<&str> = s.split_whitespace().collect();
    if names.is_empty() {
        return Err(err(loc, "empty path"));
    }
    for n in &names {
        if q.arrow(n).is_none() {
            return Err(err(loc, format!("unknown arrow '{n}'")));
        }
    }
    Path::from_names(q, &names).map_err(|e| err(loc, e))
}

fn path_string(q: &Quiver, p: &Path) -> String {
    if p.is_trivial() {
        format!("@{}", q.vertices[p.start])
    } else {
        p.arrows.iter().map(|&a| q.arrows[a].name.as_str()).collect::<Vec<_>>().join(" ")
    }
}

fn reduce(c: i64, p: u32) -> u32 {
    c.rem_euclid(p as i64) as u32
}

/// Parse an element whose paths all run `from -> to`.
fn parse_elem(alg: &Algebra, def: &ElemDef, from: usize, to: usize, loc: &str) -> Result<Elem> {
    let q = alg.quiver();
    let mut out = alg.zero();
    for (c, s) in def {
        let path = parse_path(q, s, loc)?;
        if path.start != from || path.end(q) != to {
            return Err(err(
                loc,
                format!("path '{s}' does not run {} -> {}", q.vertices[from], q.vertices[to]),
            ));
        }
        let e = alg.scale(&alg.path_elem(&path), reduce(*c, alg.prime()));
        out = alg.add(&out, &e);
    }
    Ok(out)
}

fn elem_def(alg: &Algebra, x: &[u32]) -> ElemDef {
    x.iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (c as i64, path_string(alg.quiver(), &alg.path_basis()[k])))
        .collect()
}

fn parse_elem_matrix(alg: &Algebra, def: &ElemMatrixDef, rows: &[usize], cols: &[usize], loc: &str) -> Result<ElemMatrix> {
    if def.len() != rows.len() || def.iter().any(|r| r.len() != cols.len()) {
        return Err(err(loc, format!("expected a {}x{} element matrix", rows.len(), cols.len())));
    }
    let mut m = ElemMatrix::zero(alg, rows, cols);
    for (r, row) in def.iter().enumerate() {
        for (c, e) in row.iter().enumerate() {
            *m.get_mut(r, c) = parse_elem(alg, e, rows[r], cols[c], &format!("{loc}[{r}][{c}]"))?;
        }
    }
    Ok(m)
}

fn elem_matrix_def(alg: &Algebra, m: &ElemMatrix) -> ElemMatrixDef {
    (0..m.rows.len()).map(|r| (0..m.cols.len()).map(|c| elem_def(alg, m.get(r, c))).collect()).collect()
}

fn parse_matrix(p: u32, rows: usize, cols: usize, def: &MatrixDef, loc: &str) -> Result<Matrix> {
    // an all-empty matrix may be written as []
    if rows * cols == 0 && def.iter().all(|r| r.is_empty()) {
        return Ok(Matrix::zeros(p, rows, cols));
    }
    Matrix::from_rows_shape(p, rows, cols, def).map_err(|e| err(loc, e))
}

fn parse_algebra(name: &str, def: &AlgebraDef, p: u32, done: &BTreeMap<String, Arc<Algebra>>) -> Result<Option<Algebra>> {
    let loc = format!("algebras.{name}");
    match def {
        AlgebraDef::Quiver { vertices, arrows, relations } => {
            let mut qa = Vec::new();
            for a in arrows {
                let end = |v: &str| {
                    vertices.iter().position(|x| x == v).ok_or_else(|| err(&loc, format!("arrow '{}': unknown vertex '{v}'", a.name)))
                };
                qa.push(Arrow { name: a.name.clone(), source: end(&a.from)?, target: end(&a.to)? });
            }
            let q = Quiver::new(vertices.clone(), qa).map_err(|e| err(&loc, e))?;
            let mut rels = Vec::new();
            for (k, r) in relations.iter().enumerate() {
                let rloc = format!("{loc}.relations[{k}]");
                let mut terms = Vec::new();
                for (c, s) in r {
                    terms.push((reduce(*c, p), parse_path(&q, s, &rloc)?));
                }
                rels.push(Relation { terms });
            }
            Ok(Some(Algebra::new(p, q, rels).map_err(|e| err(&loc, e))?))
        }
        AlgebraDef::DualNumbers { dual_numbers_of } => match done.get(dual_numbers_of) {
            Some(a) => Ok(Some(a.dual_numbers_extension().map_err(|e| err(&loc, e))?)),
            None => Ok(None),
        },
        AlgebraDef::Opposite { opposite_of } => match done.get(opposite_of) {
            Some(a) => Ok(Some(a.opposite().map_err(|e| err(&loc, e))?)),
            None => Ok(None),
        },
    }
}

/// Resolve definitions that may refer to each other, in dependency order.
fn resolve_all<D, T>(
    kind: &str,
    defs: &BTreeMap<String, D>,
    mut step: impl FnMut(&str, &D, &BTreeMap<String, T>) -> Result<Option<T>>,
    mut missing: impl FnMut(&D) -> Vec<String>,
) -> Result<BTreeMap<String, T>> {
    let mut done: BTreeMap<String, T> = BTreeMap::new();
    loop {
        let mut progress = false;
        for (name, d) in defs {
            if done.contains_key(name) {
                continue;
            }
            if let Some(t) = step(name, d, &done)? {
                done.insert(name.clone(), t);
                progress = true;
            }
        }
        if done.len() == defs.len() {
            return Ok(done);
        }
        if !progress {
            let (name, d) = defs.iter().find(|(n, _)| !done.contains_key(*n)).unwrap();
            let refs: Vec<String> = missing(d).into_iter().filter(|r| !defs.contains_key(r)).collect();
            let what = if refs.is_empty() { "cyclic reference".to_string() } else { format!("unknown name '{}'", refs[0]) };
            return Err(err(&format!("{kind}.{name}"), what));
        }
    }
}

impl Definitions {
    pub fn algebra(&self, name: &str) -> Result<&Arc<Algebra>> {
        self.algebras.get(name).ok_or_else(|| Error::Parse(format!("unknown algebra '{name}'")))
    }

    pub fn functor(&self, name: &str) -> Result<&FunctorData> {
        self.functors.get(name).ok_or_else(|| Error::Parse(format!("unknown functor '{name}'")))
    }

    /// A module by name, or `S<v>`, `P<v>` over `alg` (simple, projective).
    pub fn module(&self, name: &str, alg: Option<&str>) -> Result<Module> {
        if let Some(m) = self.modules.get(name) {
            return Ok(m.clone());
        }
        if let Some(a) = alg {
            let a = self.algebra(a)?;
            for (prefix, proj) in [("S", false), ("P", true)] {
                if let Some(v) = name.strip_prefix(prefix).and_then(|v| a.quiver().vertex(v)) {
                    return Ok(if proj { Module::projective(a, v) } else { Module::simple(a, v) });
                }
            }
        }
        Err(Error::Parse(format!("unknown module '{name}'")))
    }

    /// A complex by name, or a module name taken as a stalk complex in degree 0.
    pub fn complex(&self, name: &str, alg: Option<&str>) -> Result<Complex> {
        if let Some(c) = self.complexes.get(name) {
            return Ok(c.clone());
        }
        Ok(Complex::from_module(&self.module(name, alg)?, 0))
    }

    pub fn algebra_name(&self, alg: &Arc<Algebra>) -> Option<&str> {
        self.algebras
            .iter()
            .find(|(_, a)| Arc::ptr_eq(a, alg))
            .or_else(|| self.algebras.iter().find(|(_, a)| ***a == **alg))
            .map(|(n, _)| n.as_str())
    }

    pub fn parse_str(s: &str, prime: Option<u32>) -> Result<Self> {
        let file: DefinitionFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_file(&file, prime)
    }

    pub fn from_file(file: &DefinitionFile, prime: Option<u32>) -> Result<Self> {
        let p = prime.or(file.field.as_ref().map(|f| f.prime)).unwrap_or(DEFAULT_PRIME);
        if !is_prime(p) {
            return Err(Error::Parse(format!("field.prime: {p} is not an odd prime")));
        }
        let algebras: BTreeMap<String, Arc<Algebra>> = resolve_all(
            "algebras",
            &file.algebras,
            |name, d, done: &BTreeMap<String, Arc<Algebra>>| Ok(parse_algebra(name, d, p, done)?.map(Arc::new)),
            |d| match d {
                AlgebraDef::DualNumbers { dual_numbers_of } => vec![dual_numbers_of.clone()],
                AlgebraDef::Opposite { opposite_of } => vec![opposite_of.clone()],
                _ => vec![],
            },
        )?;
        let mut defs = Definitions { prime: p, algebras, ..Default::default() };
        defs.modules = resolve_all(
            "modules",
            &file.modules,
            |name, d, done: &BTreeMap<String, Module>| defs.parse_module(&format!("modules.{name}"), d, done),
            |d| match d {
                ModuleDef::Sum { sum } => sum.clone(),
                _ => vec![],
            },
        )?;
        for (name, c) in &file.complexes {
            let cx = defs.parse_complex(&format!("complexes.{name}"), c)?;
            defs.complexes.insert(name.clone(), cx);
        }
        defs.functors = resolve_all(
            "functors",
            &file.functors,
            |name, d, done: &BTreeMap<String, FunctorData>| defs.parse_functor(&format!("functors.{name}"), d, done),
            |d| match d {
                FunctorDef::DualNumbers { dual_numbers_of, .. } => vec![dual_numbers_of.clone()],
                FunctorDef::Compose { compose } => compose.clone(),
                FunctorDef::Shift { shift, .. } => vec![shift.clone()],
                _ => vec![],
            },
        )?;
        Ok(defs)
    }

    fn alg_at(&self, name: &str, loc: &str) -> Result<&Arc<Algebra>> {
        self.algebras.get(name).ok_or_else(|| err(loc, format!("unknown algebra '{name}'")))
    }

    fn parse_module(&self, loc: &str, d: &ModuleDef, done: &BTreeMap<String, Module>) -> Result<Option<Module>> {
        let m = match d {
            ModuleDef::Explicit { algebra, dims, arrows } => {
                let alg = self.alg_at(algebra, loc)?;
                let q = alg.quiver();
                if dims.len() != q.num_vertices() {
                    return Err(err(loc, format!("dims: expected {} entries", q.num_vertices())));
                }
                for name in arrows.keys() {
                    if q.arrow(name).is_none() {
                        return Err(err(loc, format!("unknown arrow '{name}'")));
                    }
                }
                let mut mats = Vec::new();
                for a in &q.arrows {
                    let (r, c) = (dims[a.target], dims[a.source]);
                    mats.push(match arrows.get(&a.name) {
                        Some(def) => parse_matrix(alg.prime(), r, c, def, &format!("{loc}.arrows.{}", a.name))?,
                        None => Matrix::zeros(alg.prime(), r, c),
                    });
                }
                Module::new(alg.clone(), dims.clone(), mats).map_err(|e| err(loc, e))?
            }
            ModuleDef::Projective { algebra, projective } => {
                let alg = self.alg_at(algebra, loc)?;
                Module::projective(alg, vertex(alg, projective, loc)?)
            }
            ModuleDef::Simple { algebra, simple } => {
                let alg = self.alg_at(algebra, loc)?;
                Module::simple(alg, vertex(alg, simple, loc)?)
            }
            ModuleDef::Presentation { algebra, presentation } => {
                let alg = self.alg_at(algebra, loc)?;
                let rows = presentation.rows.iter().map(|v| vertex(alg, v, loc)).collect::<Result<Vec<_>>>()?;
                let cols = presentation.cols.iter().map(|v| vertex(alg, v, loc)).collect::<Result<Vec<_>>>()?;
                let em = parse_elem_matrix(alg, &presentation.entries, &rows, &cols, &format!("{loc}.presentation.entries"))?;
                crate::algebra::cokernel(&em.to_hom(alg), &Module::proj_sum(alg, &rows)).module
            }
            ModuleDef::Sum { sum } => {
                let mut parts = Vec::new();
                for n in sum {
                    match done.get(n) {
                        Some(m) => parts.push(m.clone()),
                        None => return Ok(None),
                    }
                }
                if parts.is_empty() {
                    return Err(err(loc, "empty sum"));
                }
                crate::algebra::direct_sum(&parts).map_err(|e| err(loc, e))?
            }
        };
        Ok(Some(m))
    }

    fn parse_complex(&self, loc: &str, d: &ComplexDef) -> Result<Complex> {
        let alg = self.alg_at(&d.algebra, loc)?;
        let mut terms = Vec::new();
        for (k, t) in d.terms.iter().enumerate() {
            let tloc = format!("{loc}.terms[{k}]");
            let m = match t {
                TermRef::Named(n) => self.modules.get(n).cloned().ok_or_else(|| err(&tloc, format!("unknown module '{n}'")))?,
                TermRef::Inline(def) => self
                    .parse_module(&tloc, def, &self.modules)?
                    .ok_or_else(|| err(&tloc, "unresolved reference"))?,
            };
            if !crate::algebra::same_alg(&m.alg, alg) {
                return Err(err(&tloc, format!("module is not over '{}'", d.algebra)));
            }
            terms.push(m);
        }
        if d.diffs.len() + 1 != terms.len() && !(terms.is_empty() && d.diffs.is_empty()) {
            return Err(err(loc, format!("{} terms need {} differentials", terms.len(), terms.len().saturating_sub(1))));
        }
        let mut diffs = Vec::new();
        for (k, dm) in d.diffs.iter().enumerate() {
            let dloc = format!("{loc}.diffs[{k}]");
            for v in dm.keys() {
                vertex(alg, v, &dloc)?;
            }
            let (s, t) = (&terms[k], &terms[k + 1]);
            let mut mats = Vec::new();
            for (v, label) in alg.quiver().vertices.iter().enumerate() {
                mats.push(match dm.get(label) {
                    Some(def) => parse_matrix(alg.prime(), t.dims[v], s.dims[v], def, &format!("{dloc}.{label}"))?,
                    None => Matrix::zeros(alg.prime(), t.dims[v], s.dims[v]),
                });
            }
            let h = crate::algebra::Hom { mats };
            if !h.is_hom(s, t) {
                return Err(err(&dloc, "not a module homomorphism"));
            }
            diffs.push(h);
        }
        Complex::new(alg.clone(), d.lo, terms, diffs).map_err(|e| err(loc, e))
    }

    fn parse_proj_complex(&self, alg: &Algebra, d: &ProjComplexDef, loc: &str) -> Result<ProjComplex> {
        let terms = d
            .terms
            .iter()
            .map(|t| t.iter().map(|v| vertex(alg, v, loc)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        if d.diffs.len() + 1 != terms.len() && !terms.is_empty() {
            return Err(err(loc, format!("{} terms need {} differentials", terms.len(), terms.len() - 1)));
        }
        let mut diffs = Vec::new();
        for (k, dm) in d.diffs.iter().enumerate() {
            diffs.push(parse_elem_matrix(alg, dm, &terms[k + 1], &terms[k], &format!("{loc}.diffs[{k}]"))?);
        }
        let pc = ProjComplex { lo: d.lo, terms, diffs };
        pc.check(alg).map_err(|e| err(loc, e))?;
        Ok(pc)
    }

    fn parse_functor(&self, loc: &str, d: &FunctorDef, done: &BTreeMap<String, FunctorData>) -> Result<Option<FunctorData>> {
        let f = match d {
            FunctorDef::Explicit { source, target, images, arrow_maps } => {
                let src = self.alg_at(source, loc)?;
                let tgt = self.alg_at(target, loc)?;
                let q = src.quiver();
                for v in images.keys() {
                    vertex(src, v, &format!("{loc}.images"))?;
                }
                for a in arrow_maps.keys() {
                    if q.arrow(a).is_none() {
                        return Err(err(&format!("{loc}.arrow_maps"), format!("unknown arrow '{a}'")));
                    }
                }
                let mut ims = Vec::new();
                for label in &q.vertices {
                    let iloc = format!("{loc}.images.{label}");
                    let def = images.get(label).ok_or_else(|| err(&iloc, "missing image"))?;
                    ims.push(self.parse_proj_complex(tgt, def, &iloc)?);
                }
                let mut maps = Vec::new();
                for a in &q.arrows {
                    let aloc = format!("{loc}.arrow_maps.{}", a.name);
                    let (tw, tv) = (&ims[a.target], &ims[a.source]);
                    let mut pm = ProjChainMap::default();
                    if let Some(degs) = arrow_maps.get(&a.name) {
                        for (deg, m) in degs {
                            let i: i64 = deg.parse().map_err(|_| err(&aloc, format!("'{deg}' is not a degree")))?;
                            let em = parse_elem_matrix(tgt, m, tv.term(i), tw.term(i), &format!("{aloc}.{deg}"))?;
                            pm.maps.insert(i, em);
                        }
                    }
                    maps.push(pm);
                }
                FunctorData::new(src.clone(), tgt.clone(), ims, maps).map_err(|e| err(loc, e))?
            }
            FunctorDef::DualNumbers { dual_numbers_of, source, target } => {
                let Some(base) = done.get(dual_numbers_of) else { return Ok(None) };
                let (s, t) = (self.alg_at(source, loc)?, self.alg_at(target, loc)?);
                base.dual_numbers_extension(s, t).map_err(|e| err(loc, e))?
            }
            FunctorDef::Compose { compose } => {
                let mut parts = Vec::new();
                for n in compose {
                    match done.get(n) {
                        Some(f) => parts.push(f),
                        None => return Ok(None),
                    }
                }
                let Some((first, rest)) = parts.split_first() else { return Err(err(loc, "empty composite")) };
                let mut acc = (*first).clone();
                for g in rest {
                    acc = acc.compose(g).map_err(|e| err(loc, e))?;
                }
                acc
            }
            FunctorDef::Shift { shift, by } => match done.get(shift) {
                Some(f) => f.shifted(*by),
                None => return Ok(None),
            },
            FunctorDef::Omega { omega, k } => FunctorData::omega(self.alg_at(omega, loc)?, *k),
        };
        Ok(Some(f))
    }

    // -----------------------------------------------------------------------
    // Serialization (always in explicit form)
    // -----------------------------------------------------------------------

    fn name_of(&self, alg: &Arc<Algebra>) -> String {
        self.algebra_name(alg).unwrap_or("?").to_string()
    }

    pub fn module_def(&self, m: &Module) -> ModuleDef {
        let q = m.alg.quiver();
        let arrows = q
            .arrows
            .iter()
            .zip(&m.mats)
            .filter(|(_, x)| !x.is_zero())
            .map(|(a, x)| (a.name.clone(), x.to_rows()))
            .collect();
        ModuleDef::Explicit { algebra: self.name_of(&m.alg), dims: m.dims.clone(), arrows }
    }

    pub fn complex_def(&self, c: &Complex) -> ComplexDef {
        let q = c.alg.quiver();
        let diffs = c
            .diffs
            .iter()
            .map(|h| {
                h.mats
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(v, x)| (q.vertices[v].clone(), x.to_rows()))
                    .collect()
            })
            .collect();
        ComplexDef {
            algebra: self.name_of(&c.alg),
            lo: c.lo,
            terms: c.terms.iter().map(|t| TermRef::Inline(Box::new(self.module_def(t)))).collect(),
            diffs,
        }
    }

    pub fn proj_complex_def(alg: &Algebra, c: &ProjComplex) -> ProjComplexDef {
        let q = alg.quiver();
        ProjComplexDef {
            lo: c.lo,
            terms: c.terms.iter().map(|t| t.iter().map(|&v| q.vertices[v].clone()).collect()).collect(),
            diffs: c.diffs.iter().map(|d| elem_matrix_def(alg, d)).collect(),
        }
    }

    pub fn functor_def(&self, f: &FunctorData) -> FunctorDef {
        let (sq, t) = (f.source.quiver(), &f.target);
        let images = sq.vertices.iter().zip(&f.images).map(|(v, c)| (v.clone(), Self::proj_complex_def(t, c))).collect();
        let arrow_maps = sq
            .arrows
            .iter()
            .zip(&f.arrow_maps)
            .map(|(a, m)| {
                let degs = m.maps.iter().filter(|(_, e)| !e.is_zero()).map(|(i, e)| (i.to_string(), elem_matrix_def(t, e))).collect();
                (a.name.clone(), degs)
            })
            .collect();
        FunctorDef::Explicit { source: self.name_of(&f.source), target: self.name_of(&f.target), images, arrow_maps }
    }

    pub fn algebra_def(alg: &Algebra) -> AlgebraDef {
        let q = alg.quiver();
        AlgebraDef::Quiver {
            vertices: q.vertices.clone(),
            arrows: q
                .arrows
                .iter()
                .map(|a| ArrowDef { name: a.name.clone(), from: q.vertices[a.source].clone(), to: q.vertices[a.target].clone() })
                .collect(),
            relations: alg
                .relations()
                .iter()
                .map(|r| r.terms.iter().map(|(c, p)| (*c as i64, path_string(q, p))).collect())
                .collect(),
        }
    }

    pub fn to_file(&self) -> DefinitionFile {
        DefinitionFile {
            field: Some(FieldDef { prime: self.prime }),
            algebras: self.algebras.iter().map(|(n, a)| (n.clone(), Self::algebra_def(a))).collect(),
            modules: self.modules.iter().map(|(n, m)| (n.clone(), self.module_def(m))).collect(),
            complexes: self.complexes.iter().map(|(n, c)| (n.clone(), self.complex_def(c))).collect(),
            functors: self.functors.iter().map(|(n, f)| (n.clone(), self.functor_def(f))).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("definitions serialize")
    }

    /// Objects agree name by name.
    pub fn same_objects(&self, other: &Definitions) -> bool {
        let algs = self.algebras.len() == other.algebras.len()
            && self.algebras.iter().all(|(n, a)| other.algebras.get(n).is_some_and(|b| **a == **b));
        let mods = self.modules == other.modules;
        let cx = self.complexes.len() == other.complexes.len()
            && self.complexes.iter().all(|(n, c)| {
                other.complexes.get(n).is_some_and(|d| {
                    *c.alg == *d.alg && c.lo == d.lo && c.terms == d.terms && c.diffs == d.diffs
                })
            });
        let fs = self.functors.len() == other.functors.len()
            && self.functors.iter().all(|(n, f)| {
                other.functors.get(n).is_some_and(|g| {
                    *f.source == *g.source && *f.target == *g.target && f.images == g.images && f.arrow_maps == g.arrow_maps
                })
            });
        self.prime == other.prime && algs && mods && cx && fs
    }

    /// The worked example as named definitions.
    pub fn builtin(c: &Family) -> Self {
        let mut d = Definitions { prime: c.a.prime(), ..Default::default() };
        for (n, a) in [("A", &c.a), ("B", &c.b), ("Lambda", &c.lambda), ("Gamma", &c.gamma)] {
            d.algebras.insert(n.into(), a.clone());
        }
        for (n, f) in [("F", &c.f), ("G", &c.g), ("F_ext", &c.f_ext), ("G_ext", &c.g_ext)] {
            d.functors.insert(n.into(), f.clone());
        }
        for m in &c.modules {
            d.modules.insert(format!("M_{}_{}", m.i, m.l), m.module.clone());
            if let Some(s) = &m.ses {
                d.complexes.insert(format!("ses_{}_{}", m.i, m.l), ses_complex(s));
            }
        }
        for v in 0..c.a.num_vertices() {
            d.modules.insert(format!("S_tensor_P{v}"), c.s_tensor_p(v));
            d.modules.insert(format!("S_tensor_Q{v}"), c.s_tensor_q(v));
        }
        for i in 0..=c.n {
            if let Ok(m) = c.pullback_n(i) {
                d.modules.insert(format!("pullback_{i}"), m);
            }
        }
        d
    }
}

/// `0 -> sub -> mid -> quot -> 0` as a complex in degrees `-1, 0, 1`.
pub fn ses_complex(s: &crate::corpus::Ses) -> Complex {
    Complex {
        alg: s.mid.alg.clone(),
        lo: -1,
        terms: vec![s.sub.clone(), s.mid.clone(), s.quot.clone()],
        diffs: vec![s.f.clone(), s.g.clone()],
    }
}
