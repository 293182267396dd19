//! Command-line front end: argument parsing, verb dispatch and output.

pub mod format;
pub mod render;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{self, Algebra, Module};
use crate::complexes::{self, minimize, Complex};
use crate::corpus::{self, Family};
use crate::exactlin::{Matrix, DEFAULT_PRIME};
use crate::functors::{self, Generation, Resolved};
use crate::gorenstein::{self, Verdict};
use crate::stable::{self, StableFunctor};
use crate::{Error, Result};

pub use format::{DefinitionFile, Definitions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "stabfun", version, about = "Stable functors of derived equivalences over bound quiver algebras")]
pub struct Cli {
    /// Definition file (JSON); the built-in worked example is used when absent.
    #[arg(long, global = true)]
    pub defs: Option<std::path::PathBuf>,
    /// Size parameter of the built-in example.
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Field characteristic (odd prime); overrides the definition file.
    #[arg(long, global = true)]
    pub prime: Option<u32>,
    #[arg(long, global = true, default_value_t = gorenstein::DEFAULT_DEPTH)]
    pub depth: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ModuleArg {
    #[arg(long)]
    pub module: String,
    /// Algebra for the `S<v>` / `P<v>` shorthands.
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Debug, Args)]
pub struct PairArg {
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub algebra: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal projective resolution of a module.
    Resolve {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long)]
        length: Option<usize>,
    },
    /// dim Ext^i(from, to).
    Ext {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long)]
        degree: usize,
    },
    /// dim Hom in the homotopy category, Hom_K(X, Y[shift]).
    HomK {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// dim Hom in the derived category, Hom_D(X, Y[shift]).
    HomD {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Compare Hom_K and Hom_D through the localization map.
    CompareKd {
        #[command(flatten)]
        pair: PairArg,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Check that the images of a functor form a tilting complex.
    TiltingCheck {
        #[arg(long)]
        candidate: String,
    },
    /// Quiver presentation of the endomorphism algebra of a tilting complex.
    Endo {
        #[arg(long)]
        candidate: String,
    },
    /// Apply functor data to a module (through its projective resolution).
    Apply {
        #[arg(long)]
        functor: String,
        #[command(flatten)]
        m: ModuleArg,
    },
    /// Stable image of a module.
    StableImage {
        #[arg(long)]
        functor: String,
        #[command(flatten)]
        m: ModuleArg,
    },
    /// Action of the stable functor on stable Hom spaces.
    StableMap {
        #[arg(long)]
        functor: String,
        #[command(flatten)]
        pair: PairArg,
    },
    /// Image of a short exact sequence (a three-term complex).
    ExactImage {
        #[arg(long)]
        functor: String,
        #[arg(long)]
        ses: String,
    },
    /// Gorenstein projectivity up to the given depth.
    GpCheck {
        #[command(flatten)]
        m: ModuleArg,
    },
    /// Cosyzygy sequence of a Gorenstein projective module.
    Cosyzygy {
        #[command(flatten)]
        m: ModuleArg,
    },
    /// Projective dimension.
    Projdim {
        #[command(flatten)]
        m: ModuleArg,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Projective dimension bounds along a stable functor.
    FindimCheck {
        #[arg(long)]
        functor: String,
        /// Comma-separated module names; all indecomposables of a tree source when absent.
        #[arg(long, value_delimiter = ',')]
        modules: Vec<String>,
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Indecomposable summands.
    Decompose {
        #[command(flatten)]
        m: ModuleArg,
    },
    /// Emit the built-in worked example and its manifest.
    Corpus,
}

/// Output of one verb.
pub struct Report {
    pub table: String,
    pub json: Value,
    pub dot: Option<String>,
}

/// Failure kinds mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Operation(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Operation(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Operation(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(m),
            other => Failure::Operation(other.to_string()),
        }
    }
}

type Run<T> = std::result::Result<T, Failure>;

/// Run the program on the given arguments; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        Err(Failure::Operation(m)) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

pub fn execute(cli: &Cli) -> Run<String> {
    execute_with(cli, None)
}

/// Like [`execute`], with the definition file given as text instead of `--defs`.
pub fn execute_with(cli: &Cli, defs_text: Option<&str>) -> Run<String> {
    let report = dispatch(cli, defs_text)?;
    Ok(match cli.format {
        OutputFormat::Table => report.table,
        OutputFormat::Json => serde_json::to_string_pretty(&report.json).expect("json") + "\n",
        OutputFormat::Dot => report.dot.ok_or_else(|| Failure::Usage("this command has no DOT output".into()))?,
    })
}

fn load(cli: &Cli, defs_text: Option<&str>) -> Run<(Definitions, Option<Family>)> {
    if let Some(p) = cli.prime {
        if !format::is_prime(p) {
            return Err(Failure::Usage(format!("--prime {p} is not an odd prime")));
        }
    }
    if let Some(text) = defs_text {
        return Ok((Definitions::parse_str(text, cli.prime)?, None));
    }
    match &cli.defs {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let defs = Definitions::parse_str(&text, cli.prime).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok((defs, None))
        }
        None => {
            if cli.n == 0 {
                return Err(Failure::Usage("--n must be at least 1".into()));
            }
            let c = Family::new(cli.n, cli.prime.unwrap_or(DEFAULT_PRIME))?;
            Ok((Definitions::builtin(&c), Some(c)))
        }
    }
}

fn module_json(defs: &Definitions, m: &Module) -> Value {
    serde_json::to_value(defs.module_def(m)).expect("json")
}

fn stable_functor(defs: &Definitions, name: &str) -> Run<StableFunctor> {
    Ok(StableFunctor::new(defs.functor(name)?.clone())?)
}

/// Functor whose images are the tilting candidate.
fn candidate<'a>(defs: &'a Definitions, name: &str) -> Run<&'a functors::FunctorData> {
    let name = if name == "T_example" { "F" } else { name };
    Ok(defs.functor(name)?)
}

fn verdict_string(v: &Verdict) -> String {
    match v {
        Verdict::GpUpToDepth(d) => format!("GP-up-to-depth {d}"),
        Verdict::Refuted { degree, side } => format!("refuted (degree {degree}, {side:?})"),
    }
}

fn pd_string(p: Option<usize>) -> String {
    p.map_or("> bound".into(), |k| k.to_string())
}

fn dispatch(cli: &Cli, defs_text: Option<&str>) -> Run<Report> {
    let (defs, section) = load(cli, defs_text)?;
    let d = cli.depth;
    if d == 0 {
        return Err(Failure::Usage("--depth must be at least 1".into()));
    }
    let module = |m: &ModuleArg| -> Run<Module> { Ok(defs.module(&m.module, m.algebra.as_deref())?) };
    let name_alg = |alg: &Arc<Algebra>| defs.algebra_name(alg).unwrap_or("?").to_string();
    match &cli.command {
        Command::Resolve { m, length } => {
            let x = module(m)?;
            let len = length.unwrap_or(d);
            let res = algebra::minimal_resolution(&x, len);
            let pc = complexes::ProjComplex::from_resolution(&res);
            let mut table = format!("minimal resolution of {} (length <= {len})\n", m.module);
            table += &render::proj_complex_table(&x.alg, &pc);
            let json = json!({
                "module": m.module,
                "algebra": name_alg(&x.alg),
                "length": len,
                "resolution": Definitions::proj_complex_def(&x.alg, &pc),
            });
            Ok(Report { table, json, dot: None })
        }
        Command::Ext { pair, degree } => {
            let a = defs.module(&pair.from, pair.algebra.as_deref())?;
            let b = defs.module(&pair.to, pair.algebra.as_deref().or(defs.algebra_name(&a.alg)))?;
            let e = algebra::ext(&a, &b, *degree)?;
            Ok(Report {
                table: format!("dim Ext^{degree}({}, {}) = {e}\n", pair.from, pair.to),
                json: json!({"from": pair.from, "to": pair.to, "degree": degree, "dim": e}),
                dot: None,
            })
        }
        Command::HomK { pair, shift } | Command::HomD { pair, shift } | Command::CompareKd { pair, shift } => {
            let x = defs.complex(&pair.from, pair.algebra.as_deref())?;
            let y = defs.complex(&pair.to, pair.algebra.as_deref().or(defs.algebra_name(&x.alg)))?;
            let (f, t, n) = (&pair.from, &pair.to, *shift);
            match &cli.command {
                Command::HomK { .. } => {
                    let h = complexes::hom_k(&x, &y, n)?.dim;
                    Ok(Report {
                        table: format!("dim Hom_K({f}, {t}[{n}]) = {h}\n"),
                        json: json!({"from": f, "to": t, "shift": n, "dim": h}),
                        dot: None,
                    })
                }
                Command::HomD { .. } => {
                    let h = complexes::hom_d(&x, &y, n)?;
                    Ok(Report {
                        table: format!("dim Hom_D({f}, {t}[{n}]) = {h}\n"),
                        json: json!({"from": f, "to": t, "shift": n, "dim": h}),
                        dot: None,
                    })
                }
                _ => {
                    let c = complexes::localization_compare(&x, &y, n)?;
                    let table = format!(
                        "Hom_K({f}, {t}[{n}]) = {}\nHom_D({f}, {t}[{n}]) = {}\nrank of comparison = {}\nhypothesis: {}\niso: {}, injective: {}\n",
                        c.hom_k,
                        c.hom_d,
                        c.rank,
                        c.hypothesis,
                        c.is_iso(),
                        c.is_injective()
                    );
                    let json = json!({
                        "from": f, "to": t, "shift": n, "hom_k": c.hom_k, "hom_d": c.hom_d, "rank": c.rank,
                        "hypothesis": c.hypothesis, "iso": c.is_iso(), "injective": c.is_injective(),
                    });
                    Ok(Report { table, json, dot: None })
                }
            }
        }
        Command::TiltingCheck { candidate: name } => {
            let f = candidate(&defs, name)?;
            let rep = functors::check_tilting(&f.target, &f.images, d)?;
            let gen = match rep.generates {
                Generation::Yes(k) => json!({"found": true, "depth": k}),
                Generation::Unknown => json!({"found": false, "depth": Value::Null}),
            };
            let gen_s = match rep.generates {
                Generation::Yes(k) => format!("generates (found at depth {k})"),
                Generation::Unknown => format!("generation unknown up to depth {d}"),
            };
            let table = format!(
                "candidate {name} over {}: {} summands\nself-orthogonal: {}{}\n{gen_s}\n",
                name_alg(&f.target),
                f.images.len(),
                rep.self_orthogonal,
                rep.witness.map_or(String::new(), |(a, b, n)| format!(" (Hom_K(T{a}, T{b}[{n}]) != 0)")),
            );
            let json = json!({
                "candidate": name, "self_orthogonal": rep.self_orthogonal, "witness": rep.witness, "generation": gen,
                "tilting": rep.self_orthogonal && matches!(rep.generates, Generation::Yes(_)),
            });
            Ok(Report { table, json, dot: None })
        }
        Command::Endo { candidate: name } => {
            let f = candidate(&defs, name)?;
            let e = functors::endomorphism_presentation(&f.target, &f.images)?;
            let mut table = format!("End of {name}: {} vertices, dimension {}\n", e.vertices, e.dim_end);
            for (a, b) in &e.arrows {
                writeln!(table, "  arrow {a} -> {b}").unwrap();
            }
            let nrel: usize = e.relations.iter().map(|r| r.len()).sum();
            writeln!(table, "  {nrel} relation(s); presentation dimension {}", e.dim_presentation).unwrap();
            writeln!(table, "  linear A_{}: {}", e.vertices, e.is_linear_an()).unwrap();
            let mut dot = String::from("digraph End {\n");
            for v in 0..e.vertices {
                writeln!(dot, "  \"{v}\";").unwrap();
            }
            for (a, b) in &e.arrows {
                writeln!(dot, "  \"{a}\" -> \"{b}\";").unwrap();
            }
            dot.push_str("}\n");
            let json = json!({
                "candidate": name, "vertices": e.vertices, "arrows": e.arrows, "relations": e.relations,
                "dim_end": e.dim_end, "dim_presentation": e.dim_presentation, "linear": e.is_linear_an(),
            });
            Ok(Report { table, json, dot: Some(dot) })
        }
        Command::Apply { functor, m } => {
            let f = defs.functor(functor)?;
            let x = module(m)?;
            let len = (f.width() + 2) as usize;
            let r = Resolved::minimal(&x, len);
            let img = minimize(&f.target, &f.apply_proj(&r.complex)).complex;
            let c = img.to_complex(&f.target);
            let mut hom = Vec::new();
            for i in -1..=c.hi() {
                let h = complexes::homology(&c, i);
                if !h.is_zero() {
                    hom.push((i, h.dims.clone()));
                }
            }
            let mut table = format!("{functor}({}) from a resolution of length {len}, minimized\n", m.module);
            table += &render::proj_complex_table(&f.target, &img);
            for (i, dims) in &hom {
                writeln!(table, "  H^{i} = {}", render::dims_string(&f.target, dims)).unwrap();
            }
            let json = json!({
                "functor": functor, "module": m.module, "resolution_length": len,
                "image": Definitions::proj_complex_def(&f.target, &img),
                "homology_from_degree_minus_1": hom,
            });
            Ok(Report { table, json, dot: None })
        }
        Command::StableImage { functor, m } => {
            let sf = stable_functor(&defs, functor)?;
            let x = module(m)?;
            let t = sf.triangle(&x)?;
            let img = t.module();
            let gp = if img.is_zero() { None } else { Some(gorenstein::is_gorenstein_projective(img, d)?) };
            let mut table = format!("stable image of {} under {functor}\n", m.module);
            writeln!(table, "  dims: {}", render::dims_string(sf.target(), &img.dims)).unwrap();
            writeln!(table, "  removed projective summands: {}", render::summands_string(sf.target(), &t.stripped.projective)).unwrap();
            writeln!(table, "  U (degrees >= 1):").unwrap();
            table += &render::proj_complex_table(sf.target(), &t.u);
            let json = json!({
                "functor": functor, "module": m.module, "image": module_json(&defs, img),
                "projective_summands": t.stripped.projective.iter().map(|&v| sf.target().quiver().vertices[v].clone()).collect::<Vec<_>>(),
                "u": Definitions::proj_complex_def(sf.target(), &t.u),
                "gp": gp.map(|g| verdict_string(&g.verdict)),
            });
            let dot = render::module_dot(&format!("{functor}({})", m.module), img);
            Ok(Report { table, json, dot: Some(dot) })
        }
        Command::StableMap { functor, pair } => {
            let sf = stable_functor(&defs, functor)?;
            let x = defs.module(&pair.from, pair.algebra.as_deref())?;
            let y = defs.module(&pair.to, pair.algebra.as_deref().or(defs.algebra_name(&x.alg)))?;
            let (tx, ty) = (sf.triangle(&x)?, sf.triangle(&y)?);
            let src_dim = stable::stable_hom_dim(&x, &y)?;
            let tgt_dim = stable::stable_hom_dim(tx.module(), ty.module())?;
            let fact = stable::factoring_subspace(tx.module(), ty.module())?;
            let mut cols = Vec::new();
            for h in algebra::hom_space(&x, &y)? {
                cols.push(sf.stable_image_map(&h, &tx, &ty)?.flatten());
            }
            let images = Matrix::from_cols(sf.target().prime(), fact.rows(), &cols);
            let rank = fact.hstack(&images).rank() - fact.rank();
            let table = format!(
                "stable Hom({}, {}) has dimension {src_dim}\nstable Hom of the images has dimension {tgt_dim}\nrank of the induced map: {rank}\n",
                pair.from, pair.to
            );
            let json = json!({
                "functor": functor, "from": pair.from, "to": pair.to,
                "stable_hom": src_dim, "stable_hom_images": tgt_dim, "rank": rank,
                "faithful": rank == src_dim, "full": rank == tgt_dim,
            });
            Ok(Report { table, json, dot: None })
        }
        Command::ExactImage { functor, ses } => {
            let sf = stable_functor(&defs, functor)?;
            let c: &Complex = defs.complexes.get(ses).ok_or_else(|| Failure::Usage(format!("unknown complex '{ses}'")))?;
            if c.terms.len() != 3 {
                return Err(Failure::Usage(format!("'{ses}' must have exactly three terms")));
            }
            let (f, g) = (&c.diffs[0], &c.diffs[1]);
            let e = sf.exact_sequence_image(f, g, &c.terms[0], &c.terms[1], &c.terms[2])?;
            let edges = sf.edges_match(&e, f, g)?;
            let t = sf.target();
            let table = format!(
                "0 -> {} -> {} -> {} -> 0\n  exact: {}\n  P, Q projective: {}\n  edge classes agree with the stable functor: {edges}\n",
                render::dims_string(t, &e.left.dims),
                render::dims_string(t, &e.middle.dims),
                render::dims_string(t, &e.right.dims),
                e.is_exact(),
                e.extras_projective()?,
            );
            let json = json!({
                "functor": functor, "ses": ses,
                "left": module_json(&defs, &e.left), "middle": module_json(&defs, &e.middle), "right": module_json(&defs, &e.right),
                "v": e.v.iter().map(|&v| t.quiver().vertices[v].clone()).collect::<Vec<_>>(),
                "exact": e.is_exact(), "projective_extras": e.extras_projective()?, "edges_match": edges,
            });
            let dot = render::modules_dot(
                ses,
                &[("left".into(), e.left.clone()), ("middle".into(), e.middle.clone()), ("right".into(), e.right.clone())],
            );
            Ok(Report { table, json, dot: Some(dot) })
        }
        Command::GpCheck { m } => {
            let x = module(m)?;
            let r = gorenstein::is_gorenstein_projective(&x, d)?;
            let table = format!(
                "{}: {}\n  Ext^i(X, A), i = 1..{d}: {:?}\n  Ext^i(Tr X, A^op), i = 1..{d}: {:?}\n",
                m.module,
                verdict_string(&r.verdict),
                r.ext_left,
                r.ext_right
            );
            let json = json!({"module": m.module, "report": r, "verdict": verdict_string(&r.verdict)});
            Ok(Report { table, json, dot: None })
        }
        Command::Cosyzygy { m } => {
            let x = module(m)?;
            let s = gorenstein::cosyzygy_sequence(&x, d)?;
            let mut table = format!("cosyzygy sequence of {} to depth {d}\n", m.module);
            for (i, (p, next)) in s.projectives.iter().zip(&s.modules[1..]).enumerate() {
                writeln!(
                    table,
                    "  0 -> X^{i} -> {} -> X^{} {} -> 0",
                    render::dims_string(&x.alg, &p.dims),
                    i + 1,
                    render::dims_string(&x.alg, &next.dims)
                )
                .unwrap();
            }
            let json = json!({
                "module": m.module,
                "modules": s.modules.iter().map(|y| module_json(&defs, y)).collect::<Vec<_>>(),
                "projectives": s.projectives.iter().map(|y| y.dims.clone()).collect::<Vec<_>>(),
            });
            let named: Vec<(String, Module)> = s.modules.iter().enumerate().map(|(i, y)| (format!("X^{i}"), y.clone())).collect();
            Ok(Report { table, json, dot: Some(render::modules_dot(&m.module, &named)) })
        }
        Command::Projdim { m, bound } => {
            let x = module(m)?;
            let b = bound.unwrap_or(d);
            let pd = gorenstein::projdim(&x, b);
            Ok(Report {
                table: format!("pd {} = {}\n", m.module, pd_string(pd)),
                json: json!({"module": m.module, "bound": b, "projdim": pd}),
                dot: None,
            })
        }
        Command::FindimCheck { functor, modules, bound } => {
            let sf = stable_functor(&defs, functor)?;
            let b = bound.unwrap_or(d);
            let (names, xs): (Vec<String>, Vec<Module>) = if modules.is_empty() {
                if !is_tree(sf.source()) {
                    return Err(Failure::Usage("--modules is required unless the source quiver is a tree".into()));
                }
                corpus::tree_indecomposables(sf.source())
                    .into_iter()
                    .map(|m| (render::dims_string(sf.source(), &m.dims), m))
                    .unzip()
            } else {
                let src = defs.algebra_name(sf.source()).map(str::to_string);
                let xs = modules.iter().map(|n| defs.module(n, src.as_deref())).collect::<Result<Vec<_>>>()?;
                (modules.clone(), xs)
            };
            let rep = gorenstein::findim_bounds_check(&sf, &xs, b)?;
            let target_findim = is_tree(sf.target()).then(|| gorenstein::findim_over(&corpus::tree_indecomposables(sf.target()), b));
            let mut table = format!("pd X, pd F(X) with width n = {}\n", rep.width);
            for (n, r) in names.iter().zip(&rep.rows) {
                writeln!(table, "  {n:<24} {:>7} {:>7}  {}", pd_string(r.projdim), pd_string(r.image_projdim), if r.ok { "ok" } else { "FAIL" }).unwrap();
            }
            writeln!(table, "findim over the inputs: {}", rep.findim_source).unwrap();
            if let Some(t) = target_findim {
                writeln!(table, "findim over the indecomposables of the target: {t}").unwrap();
            }
            writeln!(table, "bounds hold: {}", rep.ok).unwrap();
            let json = json!({"functor": functor, "names": names, "report": rep, "target_findim": target_findim});
            Ok(Report { table, json, dot: None })
        }
        Command::Decompose { m } => {
            let x = module(m)?;
            let dec = algebra::decompose(&x, cli.seed)?;
            let mut table = format!("{} = {} indecomposable summand(s) (seed {})\n", m.module, dec.parts.len(), dec.seed);
            for part in &dec.parts {
                writeln!(table, "  {}", render::dims_string(&x.alg, &part.dims)).unwrap();
            }
            let json = json!({
                "module": m.module, "seed": dec.seed,
                "parts": dec.parts.iter().map(|y| module_json(&defs, y)).collect::<Vec<_>>(),
            });
            let named: Vec<(String, Module)> = dec.parts.iter().enumerate().map(|(i, y)| (format!("part {i}"), y.clone())).collect();
            Ok(Report { table, json, dot: Some(render::modules_dot(&m.module, &named)) })
        }
        Command::Corpus => {
            let c = match section {
                Some(c) => c,
                None => Family::new(cli.n, cli.prime.unwrap_or(defs.prime))?,
            };
            let cdefs = Definitions::builtin(&c);
            let man = c.manifest();
            let mut table = format!(
                "worked example, n = {}, p = {}\n  dim A = {}, dim B = {}, dim Lambda = {}, dim Gamma = {}\n",
                c.n, man.prime, man.dims[0], man.dims[1], man.dims[2], man.dims[3]
            );
            writeln!(table, "  {} Gorenstein projective Gamma-modules M(i,l):", man.entries.len()).unwrap();
            for e in &man.entries {
                writeln!(
                    table,
                    "    M({},{})  dims {:?}  {}",
                    e.i,
                    e.l,
                    e.dims,
                    e.known_image.as_deref().unwrap_or(if e.projective_b_module { "" } else { "extension" })
                )
                .unwrap();
            }
            let json = json!({"definitions": cdefs.to_file(), "manifest": man});
            let named: Vec<(String, Module)> = c.modules.iter().map(|m| (format!("M({},{})", m.i, m.l), m.module.clone())).collect();
            Ok(Report { table, json, dot: Some(render::modules_dot("corpus", &named)) })
        }
    }
}

fn is_tree(alg: &Algebra) -> bool {
    let q = alg.quiver();
    let n = q.num_vertices();
    if q.arrows.len() + 1 != n || q.arrows.iter().any(|a| a.source == a.target) {
        return false;
    }
    // connected with n - 1 edges
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for a in &q.arrows {
        let (x, y) = (find(&mut parent, a.source), find(&mut parent, a.target));
        if x == y {
            return false;
        }
        parent[x] = y;
    }
    true
}


impl From<algebra::AlgebraError> for Failure {
    fn from(e: algebra::AlgebraError) -> Self {
        Error::from(e).into()
    }
}
