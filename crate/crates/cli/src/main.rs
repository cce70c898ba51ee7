use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use ddouble::acceptance::{self, block_census, Suite};
use ddouble::arlab::emit_component;
use ddouble::catalog::{block, build};
use ddouble::dalgebra::{Ctx, DoubleContext};
use ddouble::hopfbim::{induce_bimodule_guarded, twist_matrices_guarded, verify_hopf_bimodule, DIM_GUARD};
use ddouble::label::IndecLabel;
use ddouble::modrep::{decompose_with, EngineConfig, ModuleRep, ModuleRepJson};
use ddouble::factor::DEFAULT_DEGREE_CAP;
use ddouble::tensor_theorems::{all_simples, band_tensor_procedure, closed_form, engine_tensor, green_table, TensorResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Closed,
    Engine,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Parser, Debug)]
#[command(name = "ddouble", version, about = "Exact computations with modules over the Drinfel'd double D(Λ_{n,d})")]
struct Cli {
    #[arg(long, global = true)]
    n: Option<usize>,
    #[arg(long, global = true)]
    d: Option<usize>,
    /// seed for the splitting engine
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// largest degree handed to the polynomial factorizer
    #[arg(long, global = true, default_value_t = DEFAULT_DEGREE_CAP)]
    degree_cap: usize,
    /// refuse Hopf bimodules whose underlying space exceeds this dimension
    #[arg(long, global = true, default_value_t = DIM_GUARD)]
    dim_guard: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Simple dimensions, block census and quiver summary
    Info,
    /// Build modules from labels
    Module {
        #[command(subcommand)]
        cmd: ModuleCmd,
    },
    /// Decompose a tensor product of two indecomposables
    Tensor {
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Decompose a module given as JSON (file or stdin)
    Decompose { file: Option<PathBuf> },
    /// Pairwise tensor products of a list of labels (all simples by default)
    GreenTable {
        labels: Vec<String>,
        #[arg(long)]
        modulo_projectives: bool,
    },
    /// Window of the stable AR component around a label
    Ar {
        #[arg(long)]
        seed_label: String,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Twist data of the Hopf bimodule induced from L(u,j) and P(u,j)
    HopfBimodule {
        #[arg(long)]
        u: usize,
        #[arg(long)]
        j: usize,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long, value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
    },
}

#[derive(Subcommand, Debug)]
enum ModuleCmd {
    Build { label: String },
}

struct Run {
    n: Option<usize>,
    d: Option<usize>,
    format: Format,
    engine: EngineConfig,
    dim_guard: usize,
}

impl Run {
    fn ctx(&self) -> Result<Ctx> {
        let (Some(n), Some(d)) = (self.n, self.d) else {
            bail!("--n and --d are required for this command");
        };
        Ok(DoubleContext::new(n, d)?)
    }

    fn no_dot(&self, what: &str) -> Result<()> {
        if self.format == Format::Dot {
            bail!("{what} has no dot output");
        }
        Ok(())
    }
}

fn emit(out: &mut String, v: &Value) {
    out.push_str(&serde_json::to_string_pretty(v).expect("json"));
    out.push('\n');
}

fn parse_label(ctx: &Ctx, s: &str) -> Result<IndecLabel> {
    Ok(IndecLabel::parse(ctx, s)?.canonical(ctx)?)
}

fn cmd_info(r: &Run, out: &mut String) -> Result<bool> {
    r.no_dot("info")?;
    let ctx = r.ctx()?;
    let (n, d) = (ctx.n, ctx.d);
    let mut simples = Vec::new();
    for u in 0..n {
        for j in 0..n {
            let dim = ctx.simple_dim(u, j);
            simples.push(json!({"u": u, "j": j, "dim": dim, "projective": dim == d}));
        }
    }
    let projective_simples = simples.iter().filter(|s| s["projective"] == true).count();
    let (isolated, cycles) = block_census(&ctx);
    let mut blocks = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for u in 0..n {
        for j in 0..n {
            if ctx.simple_dim(u, j) == d || seen.contains(&(u, j)) {
                continue;
            }
            let b = block(&ctx, u, j);
            for &v in &b.orbit {
                seen.insert((u, v));
            }
            blocks.push(json!({"u": u, "vertices": b.orbit, "dims": b.dims}));
        }
    }
    if r.format == Format::Json {
        emit(
            out,
            &json!({
                "n": n, "d": d,
                "simples": simples,
                "projective_simples": projective_simples,
                "isolated_vertices": isolated,
                "cycles": cycles,
                "blocks": blocks,
            }),
        );
        return Ok(true);
    }
    out.push_str(&format!("D(Λ_{{{n},{d}}}): dim {}, {} simples\n", ctx.dim(), n * n));
    out.push_str("simple dimensions (rows u, columns j):\n");
    for u in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:>3}", ctx.simple_dim(u, j))).collect();
        out.push_str(&format!("  u={u:<3}{}\n", row.join("")));
    }
    out.push_str(&format!("projective simples: {projective_simples}\n"));
    out.push_str(&format!("isolated vertices: {isolated}\n"));
    let mut sizes = std::collections::BTreeMap::new();
    for c in &cycles {
        *sizes.entry(*c).or_insert(0usize) += 1;
    }
    for (size, count) in &sizes {
        out.push_str(&format!("{count} block(s) on {size} vertices\n"));
    }
    out.push_str("quiver:\n");
    for b in &blocks {
        let verts: Vec<String> = b["vertices"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
        let dims: Vec<String> = b["dims"].as_array().unwrap().iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("  u={}: cycle {} with dims {}\n", b["u"], verts.join("→"), dims.join(",")));
    }
    Ok(true)
}

fn cmd_module_build(r: &Run, label: &str, out: &mut String) -> Result<bool> {
    r.no_dot("module build")?;
    let ctx = r.ctx()?;
    let l = parse_label(&ctx, label)?;
    let m = build(&ctx, &l)?;
    if r.format == Format::Json {
        emit(out, &serde_json::to_value(m.to_json())?);
    } else {
        out.push_str(&format!("{} dim {}\n", l.render(&ctx), m.dim()));
        for (w, k) in m.weight_multiset() {
            out.push_str(&format!("  weight {w} × {k}\n"));
        }
    }
    Ok(true)
}

fn closed_or_procedure(ctx: &Ctx, a: &IndecLabel, b: &IndecLabel, cfg: &EngineConfig) -> Result<TensorResult> {
    if a.is_band() {
        return Ok(band_tensor_procedure(ctx, a, b, cfg)?);
    }
    if b.is_band() {
        return Ok(band_tensor_procedure(ctx, b, a, cfg)?);
    }
    Ok(closed_form(ctx, a, b)?)
}

fn cmd_tensor(r: &Run, left: &str, right: &str, mode: Mode, out: &mut String) -> Result<bool> {
    r.no_dot("tensor")?;
    let ctx = r.ctx()?;
    let a = parse_label(&ctx, left)?;
    let b = parse_label(&ctx, right)?;
    let closed = match mode {
        Mode::Engine => None,
        _ => Some(closed_or_procedure(&ctx, &a, &b, &r.engine)?),
    };
    let engine = match mode {
        Mode::Closed => None,
        _ => {
            eprintln!("decomposing {} ⊗ {} ...", a.render(&ctx), b.render(&ctx));
            Some(engine_tensor(&ctx, &a, &b, &r.engine)?)
        }
    };
    let verdict = match (&closed, &engine) {
        (Some(c), Some(e)) => Some(c.matches(&ctx, e)),
        _ => None,
    };
    if r.format == Format::Json {
        let mut v = json!({"left": a.render(&ctx), "right": b.render(&ctx)});
        if let Some(c) = &closed {
            v["closed"] = json!({
                "summands": serde_json::to_value(c.decomposition.to_json(&ctx).summands)?,
                "modulo_projectives": c.modulo_projectives,
                "source": serde_json::to_value(c.source)?,
            });
        }
        if let Some(e) = &engine {
            v["engine"] = serde_json::to_value(e.to_json(&ctx))?;
        }
        if let Some(ok) = verdict {
            v["verdict"] = json!(if ok { "MATCH" } else { "MISMATCH" });
        }
        emit(out, &v);
    } else {
        if let Some(c) = &closed {
            let tail = if c.modulo_projectives { " (modulo projectives)" } else { "" };
            out.push_str(&format!("closed: {}{tail}\n", c.decomposition.render(&ctx)));
        }
        if let Some(e) = &engine {
            out.push_str(&format!("engine: {}\n", e.render(&ctx)));
        }
        if let Some(ok) = verdict {
            out.push_str(if ok { "MATCH\n" } else { "MISMATCH\n" });
        }
    }
    Ok(verdict.unwrap_or(true))
}

fn cmd_decompose(r: &Run, file: Option<&PathBuf>, out: &mut String) -> Result<bool> {
    r.no_dot("decompose")?;
    let text = match file {
        Some(p) => std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?,
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            s
        }
    };
    let mj: ModuleRepJson = serde_json::from_str(&text).context("parsing module JSON")?;
    if r.n.is_some_and(|n| n != mj.n) || r.d.is_some_and(|d| d != mj.d) {
        bail!("module is over (n,d) = ({},{}), not the requested algebra", mj.n, mj.d);
    }
    let ctx = DoubleContext::new(mj.n, mj.d)?;
    let m = ModuleRep::from_json(&ctx, &mj)?;
    eprintln!("decomposing a module of dimension {} ...", m.dim());
    let dec = decompose_with(&m, &r.engine)?;
    if r.format == Format::Json {
        emit(out, &serde_json::to_value(dec.to_json(&ctx))?);
    } else {
        out.push_str(&format!("{}\n", dec.render(&ctx)));
    }
    Ok(true)
}

fn cmd_green_table(r: &Run, labels: &[String], modp: bool, out: &mut String) -> Result<bool> {
    r.no_dot("green-table")?;
    let ctx = r.ctx()?;
    let labels = if labels.is_empty() {
        all_simples(&ctx)
    } else {
        labels.iter().map(|s| parse_label(&ctx, s)).collect::<Result<Vec<_>>>()?
    };
    eprintln!("tabulating {} products ...", labels.len() * (labels.len() + 1) / 2);
    let t = green_table(&ctx, &labels, modp, &r.engine)?;
    if r.format == Format::Json {
        emit(out, &serde_json::to_value(&t)?);
    } else {
        out.push_str(&t.to_text());
    }
    Ok(true)
}

fn cmd_ar(r: &Run, seed_label: &str, radius: usize, out: &mut String) -> Result<bool> {
    let ctx = r.ctx()?;
    let l = parse_label(&ctx, seed_label)?;
    let w = emit_component(&ctx, &l, radius)?;
    match r.format {
        Format::Json => emit(out, &serde_json::to_value(&w)?),
        Format::Dot => out.push_str(&w.to_dot()),
        Format::Text => {
            out.push_str(&format!("component of {} ({})\n", w.seed, w.kind));
            out.push_str(&format!("nodes: {}\n", w.nodes.join(", ")));
            for e in &w.edges {
                out.push_str(&format!("  {} → {}\n", e.from, e.to));
            }
            for (m, t) in &w.translations {
                out.push_str(&format!("  τ {m} = {t}\n"));
            }
            for i in &w.identifications {
                out.push_str(&format!("  {i}\n"));
            }
        }
    }
    Ok(true)
}

fn cmd_hopf(r: &Run, u: usize, j: usize, out: &mut String) -> Result<bool> {
    r.no_dot("hopf-bimodule")?;
    let ctx = r.ctx()?;
    if u >= ctx.n || j >= ctx.n {
        bail!("u and j must lie in 0..{}", ctx.n);
    }
    eprintln!("inducing the bimodule of L({u},{j}) ...");
    let bim = induce_bimodule_guarded(&ddouble::catalog::simple(&ctx, u, j), r.dim_guard)?;
    let axioms = verify_hopf_bimodule(&bim);
    let tw = twist_matrices_guarded(&ctx, u, j, r.dim_guard)?;
    let ok = axioms.is_empty() && tw.mismatches.is_empty();
    if r.format == Format::Json {
        let mut v = json!({
            "twist": serde_json::to_value(tw.to_json(&ctx))?,
            "axiom_failures": axioms,
            "closed_form_mismatches": tw.mismatches,
        });
        if let Some(p) = &tw.projective {
            v["pi_lower_triangular"] = json!(p.pi_lower_triangular);
        }
        emit(out, &v);
    } else {
        out.push_str(&format!("L({u},{j}): N = {}\n", tw.n_dim));
        out.push_str(&format!("axioms: {}\n", if axioms.is_empty() { "ok".into() } else { axioms.join("; ") }));
        out.push_str("R:\n");
        for row in &tw.r {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&format!("  [{}]\n", cells.join(", ")));
        }
        if let Some(p) = &tw.projective {
            out.push_str(&format!("P({u},{j}): Π lower triangular: {}\n", p.pi_lower_triangular));
        }
        if tw.mismatches.is_empty() {
            out.push_str("closed forms: ok\n");
        } else {
            for m in &tw.mismatches {
                out.push_str(&format!("mismatch: {m}\n"));
            }
        }
    }
    Ok(ok)
}

fn cmd_selftest(r: &Run, suite: SuiteArg, out: &mut String) -> Result<bool> {
    r.no_dot("selftest")?;
    let suite = match suite {
        SuiteArg::Fast => Suite::Fast,
        SuiteArg::Full => Suite::Full,
    };
    let mut progress = |s: &str| eprintln!("{s}");
    let reports = acceptance::run(suite, &r.engine, &mut progress);
    let ok = reports.iter().all(|c| c.pass || c.skipped);
    if r.format == Format::Json {
        emit(out, &json!({"suite": serde_json::to_value(suite)?, "pass": ok, "criteria": serde_json::to_value(&reports)?}));
    } else {
        for c in &reports {
            out.push_str(&c.line());
            out.push('\n');
            for f in c.detail.iter().take(6) {
                out.push_str(&format!("    {f}\n"));
            }
        }
    }
    Ok(ok)
}

fn run(cli: &Cli, out: &mut String) -> Result<bool> {
    let r = Run {
        n: cli.n,
        d: cli.d,
        format: cli.format,
        engine: EngineConfig { seed: cli.seed, degree_cap: cli.degree_cap },
        dim_guard: cli.dim_guard,
    };
    match &cli.cmd {
        Cmd::Info => cmd_info(&r, out),
        Cmd::Module { cmd: ModuleCmd::Build { label } } => cmd_module_build(&r, label, out),
        Cmd::Tensor { left, right, mode } => cmd_tensor(&r, left, right, *mode, out),
        Cmd::Decompose { file } => cmd_decompose(&r, file.as_ref(), out),
        Cmd::GreenTable { labels, modulo_projectives } => cmd_green_table(&r, labels, *modulo_projectives, out),
        Cmd::Ar { seed_label, radius } => cmd_ar(&r, seed_label, *radius, out),
        Cmd::HopfBimodule { u, j } => cmd_hopf(&r, *u, *j, out),
        Cmd::Selftest { suite } => cmd_selftest(&r, *suite, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let res = run(&cli, &mut out);
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    let _ = lock.write_all(out.as_bytes());
    let _ = lock.flush();
    match res {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", anyhow!(e));
            ExitCode::from(2)
        }
    }
}
