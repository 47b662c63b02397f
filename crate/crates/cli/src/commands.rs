use std::fmt::Write as _;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use maslov_core::flow::{check_partition_independence, spectral_flow, FlowOptions, FnFamily};
use maslov_core::gap::{gap, projector_gap};
use maslov_core::maslov::{
    catenation_check, cayley_symplectic, compare_splittings, maslov_index, maslov_properties_check, naturality_check,
    splitting_from_metric, MaslovOptions, SplitCurve,
};
use maslov_core::random;
use maslov_core::relation::{
    compressed_spectrum, relation_fredholm, relation_spectrum, spectral_projection, spectral_projection_eig, Spectrum,
};
use maslov_core::{c, linalg, Tolerances};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::error::{CliError, CliResult};
use crate::report::{flow_csv, json_bytes, Emit, Outputs};
use crate::scenario::{self, Scenario};

#[derive(Debug, Parser)]
#[command(name = "maslov", version, about = "Maslov indices, spectral flow and gaps from JSON scenarios")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maslov index of a curve of Lagrangian pairs.
    Maslov(Action),
    /// Spectral flow of a matrix or pencil family through a co-oriented curve.
    Sf(Action),
    /// Gaps between pairs of subspaces.
    Gap(Action),
    /// Spectrum, Fredholm data and spectral projection of a linear relation.
    Relations(Action),
    /// Every property check that applies to the scenario.
    Check(Action),
}

#[derive(Debug, Args)]
pub struct Action {
    #[command(subcommand)]
    pub action: Compute,
}

#[derive(Debug, Subcommand)]
pub enum Compute {
    Compute { scenario: PathBuf },
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Initial uniform grid size for spectral flow.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Maximum bisection depth below the initial grid.
    #[arg(long, global = true)]
    pub refine_max: Option<usize>,
    #[arg(long, global = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, global = true)]
    pub tol_cross: Option<f64>,
    #[arg(long, global = true)]
    pub quad_nodes: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Emit::Csv)]
    pub emit: Emit,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Seed for the randomized parts of `check`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Also write the scenario with defaults filled in and frames orthonormalized.
    #[arg(long, global = true)]
    pub dump_normalized: bool,
}

#[derive(Debug, Default)]
pub struct RunOutput {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

fn apply_flags(sc: &mut Scenario, f: &Flags) {
    let mut tol = sc.tolerances();
    if let Some(x) = f.tol_rank {
        tol.rank_tol = x;
    }
    if let Some(x) = f.tol_cross {
        tol.cross_tol = x;
    }
    if let Some(x) = f.quad_nodes {
        tol.quad_nodes = x;
    }
    sc.tolerances = Some(tol);
    if f.samples.is_some() {
        sc.samples = f.samples;
    }
    if f.refine_max.is_some() {
        sc.refine_max = f.refine_max;
    }
}

fn flow_options(sc: &Scenario) -> CliResult<FlowOptions> {
    let d = FlowOptions::default();
    let o = FlowOptions { samples: sc.samples.unwrap_or(d.samples), refine_max: sc.refine_max.unwrap_or(d.refine_max), ..d };
    if o.samples < 2 {
        return Err(CliError::Invalid(format!("samples = {} < 2", o.samples)));
    }
    Ok(o)
}

pub fn run(cli: &Cli) -> CliResult<RunOutput> {
    let (Command::Maslov(a) | Command::Sf(a) | Command::Gap(a) | Command::Relations(a) | Command::Check(a)) = &cli.command;
    let Compute::Compute { scenario: path } = &a.action;
    let mut sc = scenario::load(path)?;
    apply_flags(&mut sc, &cli.flags);
    let tol = sc.tolerances();
    tol.validate()?;
    let mut out = Outputs::default();
    let mut text = String::new();
    match &cli.command {
        Command::Maslov(_) => maslov(&sc, &tol, cli.flags.emit, &mut text, &mut out)?,
        Command::Sf(_) => sf(&sc, &tol, cli.flags.emit, &mut text, &mut out)?,
        Command::Gap(_) => gaps(&sc, cli.flags.emit, &mut text, &mut out)?,
        Command::Relations(_) => relations(&sc, &tol, cli.flags.emit, &mut text, &mut out)?,
        Command::Check(_) => check(&sc, &tol, cli.flags.seed, cli.flags.emit, &mut text, &mut out)?,
    }
    if cli.flags.dump_normalized {
        out.add("normalized.json", json_bytes(&scenario::normalized(&sc)?)?);
    }
    let files = out.write_all(&cli.flags.out)?;
    for f in &files {
        let _ = writeln!(text, "wrote {}", f.display());
    }
    Ok(RunOutput { stdout: text, files })
}

fn maslov(sc: &Scenario, tol: &Tolerances, emit: Emit, text: &mut String, out: &mut Outputs) -> CliResult<()> {
    let curve = sc.curve()?;
    let opts = MaslovOptions { flow: flow_options(sc)?, ..MaslovOptions::default() };
    let r = maslov_index(&*curve, tol, &opts)?;
    let _ = writeln!(text, "Mas = {}", r.value);
    match (&r.via_uv, &r.uv_error) {
        (Some(v), _) => {
            let _ = writeln!(text, "via U V^-1 = {v}");
        }
        (None, Some(e)) => {
            let _ = writeln!(text, "via U V^-1 skipped: {e}");
        }
        _ => {}
    }
    let max_cond = r.cond_trace.iter().map(|x| x.1).fold(0.0, f64::max);
    let _ = writeln!(
        text,
        "segments = {}, bisected = {}, samples = {}, continuity refinements = {}, max cond(J) = {max_cond:.3}",
        r.flow.segments.len(),
        r.flow.refined_total,
        r.flow.samples.len(),
        r.grid_refinements
    );
    if r.interpolated {
        let _ = writeln!(text, "interpolated = true (explicit frames joined by generator geodesics)");
    }
    match emit {
        Emit::Csv => out.add("crossings.csv", flow_csv(&r.flow)?),
        Emit::Json => out.add(
            "report.json",
            json_bytes(&json!({
                "command": "maslov",
                "name": sc.name,
                "mas": r.value,
                "via_uv": r.via_uv,
                "uv_error": r.uv_error,
                "segments": r.flow.segments,
                "nu_trace": r.flow.nu_trace,
                "cond_trace": r.cond_trace,
                "circle_defect": r.circle_defect,
                "interpolated": r.interpolated,
                "samples": r.flow.samples,
            }))?,
        ),
    }
    Ok(())
}

fn sf(sc: &Scenario, tol: &Tolerances, emit: Emit, text: &mut String, out: &mut Outputs) -> CliResult<()> {
    let (a, b, fam) = sc.family()?;
    let curve = sc.contour()?;
    let family = FnFamily::new(a, b, |s| fam.operator(s));
    let r = spectral_flow(&family, &curve, tol, &flow_options(sc)?)?;
    let _ = writeln!(text, "SF = {}", r.total);
    let _ = writeln!(text, "segments = {}, bisected = {}, samples = {}", r.segments.len(), r.refined_total, r.samples.len());
    match emit {
        Emit::Csv => out.add("flow.csv", flow_csv(&r)?),
        Emit::Json => out.add(
            "report.json",
            json_bytes(&json!({
                "command": "sf",
                "name": sc.name,
                "sf": r.total,
                "segments": r.segments,
                "nu_trace": r.nu_trace,
                "samples": r.samples,
            }))?,
        ),
    }
    Ok(())
}

fn gaps(sc: &Scenario, emit: Emit, text: &mut String, out: &mut Outputs) -> CliResult<()> {
    let pairs = sc.pairs()?;
    let mut reports = Vec::new();
    for (k, (m, n)) in pairs.iter().enumerate() {
        let g = gap(m, n)?;
        let prefix = if pairs.len() > 1 { format!("pair {k}: ") } else { String::new() };
        let _ = writeln!(text, "{prefix}gap = {:.6}  delta(M,N) = {:.6}  delta(N,M) = {:.6}", g.gap, g.delta_mn, g.delta_nm);
        reports.push(g);
    }
    if emit == Emit::Json {
        out.add("report.json", json_bytes(&json!({ "command": "gap", "name": sc.name, "gaps": reports }))?);
    }
    Ok(())
}

fn fmt_z(z: num_complex::Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn relations(sc: &Scenario, tol: &Tolerances, emit: Emit, text: &mut String, out: &mut Outputs) -> CliResult<()> {
    let rel = sc.relation()?;
    let spec = relation_spectrum(&rel, tol)?;
    match &spec {
        Spectrum::WholePlane { reason } => {
            let _ = writeln!(text, "spectrum = whole plane ({reason})");
        }
        Spectrum::Discrete { eigenvalues, infinite, indeterminacy } => {
            let list: Vec<String> = eigenvalues.iter().map(|(z, m)| format!("{} (x{m})", fmt_z(*z))).collect();
            let _ = writeln!(text, "spectrum = [{}], infinite = {infinite}, dim A(0) = {indeterminacy}", list.join(", "));
        }
    }
    let fr = relation_fredholm(&rel, tol)?;
    let _ = writeln!(text, "kernel = {}, cokernel = {}, index = {}", fr.kernel_dim, fr.coker_dim, fr.index);
    let mut projection = None;
    if let Some(w) = &sc.window {
        let p = spectral_projection(&rel, w, tol)?;
        let inside = compressed_spectrum(&rel, w, tol)?;
        let list: Vec<String> = inside.iter().map(|z| fmt_z(*z)).collect();
        let _ = writeln!(text, "rank P_N = {}, spectrum in N = [{}]", p.rank, list.join(", "));
        projection = Some(json!({ "rank": p.rank, "p": scenario::matrix_spec(&p.p), "inside": inside }));
    }
    if emit == Emit::Json {
        out.add(
            "report.json",
            json_bytes(&json!({ "command": "relations", "name": sc.name, "spectrum": spec, "fredholm": fr, "projection": projection }))?,
        );
    }
    Ok(())
}

struct Checks {
    rows: Vec<(bool, String, String)>,
}

impl Checks {
    fn push(&mut self, pass: bool, name: &str, detail: String) {
        self.rows.push((pass, name.to_string(), detail));
    }
}

fn check(sc: &Scenario, tol: &Tolerances, seed: u64, emit: Emit, text: &mut String, out: &mut Outputs) -> CliResult<()> {
    let mut ck = Checks { rows: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if sc.lambda.is_some() || sc.mu.is_some() {
        let curve = sc.curve()?;
        let curve: &dyn SplitCurve = &*curve;
        let opts = MaslovOptions { flow: flow_options(sc)?, ..MaslovOptions::default() };
        let r = maslov_index(curve, tol, &opts)?;
        ck.push(r.routes_agree(), "block operator vs U V^-1", format!("{} vs {:?}", r.value, r.via_uv));
        let p = maslov_properties_check(curve, tol, &opts)?;
        ck.push(p.reversed == -p.value, "reversal", format!("{} vs {}", p.reversed, p.value));
        ck.push(p.there_and_back == 0, "curve then reverse", format!("{}", p.there_and_back));
        ck.push(p.reparametrized == p.value, "reparametrization", format!("{} vs {}", p.reparametrized, p.value));
        let f = &p.flip;
        ck.push(
            f.holds,
            "flipping, sum = dim(start) - dim(end)",
            format!("{} + {} vs {} - {}", f.mas_lm, f.mas_ml, f.dim_start, f.dim_end),
        );
        ck.push(
            f.mas_lm + f.mas_ml == f.dim_end as i64 - f.dim_start as i64,
            "flipping, sum = dim(end) - dim(start)",
            format!("{} + {} vs {} - {}", f.mas_lm, f.mas_ml, f.dim_end, f.dim_start),
        );
        let bx = &p.boxplus;
        ck.push(bx.all_equal && bx.index_equal, "boxplus", format!("({}, {}, {}), index equal {}", bx.mas, bx.mas_boxplus, bx.mas_flipped, bx.index_equal));
        ck.push(p.phase_natural == p.value, "scalar phase naturality", format!("{} vs {}", p.phase_natural, p.value));
        let (a, b) = curve.interval();
        let cat = catenation_check(curve, 0.5 * (a + b), tol, &opts)?;
        ck.push(cat.holds, "catenation at midpoint", format!("{} = {} + {}", cat.whole, cat.first, cat.second));
        // Random Cayley transforms of the scenario's form.
        let sp = curve.at(a)?.splitting.space().clone();
        let n = sp.dim();
        let a0 = random::hermitian(n, 0.5, &mut rng) * c(0.0, 1.0);
        let a1 = random::hermitian(n, 0.5, &mut rng) * c(0.0, 1.0);
        let omega_fixed = {
            let other = curve.at(b)?;
            linalg::norm2(&(other.splitting.space().omega() - sp.omega())) <= 1e-12 * linalg::norm2(sp.omega())
        };
        if omega_fixed {
            let l = |s: f64| cayley_symplectic(&sp, &(&a0 + &a1 * c(s, 0.0))).expect("I - K/2 is invertible for small K");
            let (m0, m1) = naturality_check(curve, l, tol, &opts)?;
            ck.push(m0 == m1, "naturality under random symplectic L_s", format!("{m0} vs {m1}"));
        }
        let g1 = random::hpd(n, 0.5, 2.0, &mut rng);
        let alt = |_: f64, s: &maslov_core::symplectic::SymplecticSpace| Ok(Arc::new(splitting_from_metric(s, &g1, tol)?));
        let cmp = compare_splittings(curve, alt, tol, &opts)?;
        ck.push(cmp.equal, "splitting from a random inner product", format!("{} vs {}, max cond(J) = {:.3}", cmp.mas0, cmp.mas1, cmp.max_cond_j));
        ck.push(r.circle_defect < 1e-8, "block spectrum on the unit circle", format!("defect {:.2e}", r.circle_defect));
    }
    if sc.family.is_some() {
        let (a, b, fam) = sc.family()?;
        let curve = sc.contour()?;
        let family = FnFamily::new(a, b, |s| fam.operator(s));
        let fo = flow_options(sc)?;
        match check_partition_independence(&family, &curve, tol, &fo) {
            Ok((r0, r1)) => ck.push(true, "partition independence", format!("{} = {}", r0.total, r1.total)),
            Err(maslov_core::Error::PartitionDependence { coarse, refined }) => {
                ck.push(false, "partition independence", format!("{coarse} vs {refined}"))
            }
            Err(e) => return Err(e.into()),
        }
        let fwd = spectral_flow(&family, &curve, tol, &fo)?.total;
        let rev = spectral_flow(&family, &curve.reversed(), tol, &fo)?.total;
        ck.push(rev == -fwd, "co-orientation reversal", format!("{rev} vs {fwd}"));
    }
    if sc.pairs.is_some() {
        for (k, (m, n)) in sc.pairs()?.iter().enumerate() {
            let g = gap(m, n)?;
            let back = gap(n, m)?;
            ck.push(g.gap == back.gap, &format!("pair {k}: gap symmetry"), format!("{:.3e}", (g.gap - back.gap).abs()));
            let pg = projector_gap(m, n)?;
            ck.push((g.gap - pg).abs() < 1e-10, &format!("pair {k}: projector form"), format!("{:.3e}", (g.gap - pg).abs()));
            let gc = gap(&m.complement(), &n.complement())?.gap;
            ck.push((g.gap - gc).abs() < 1e-9, &format!("pair {k}: complements"), format!("{:.3e}", (g.gap - gc).abs()));
        }
    }
    if sc.relation.is_some() {
        let rel = sc.relation()?;
        if let Some(w) = &sc.window {
            let p = spectral_projection(&rel, w, tol)?;
            let pe = spectral_projection_eig(&rel, w)?;
            let d = linalg::norm2(&(&p.p - &pe));
            ck.push(d < 1e-8, "quadrature vs eigenvector projection", format!("{d:.2e}"));
            let idem = linalg::norm2(&(&p.p * &p.p - &p.p));
            ck.push(idem < 1e-8, "P^2 = P", format!("{idem:.2e}"));
        }
        let fr = relation_fredholm(&rel, tol)?;
        ck.push(fr.pair_consistent, "relation index vs pair index", format!("index {}", fr.index));
    }
    if ck.rows.is_empty() {
        return Err(CliError::Invalid("scenario has nothing to check".into()));
    }
    for (pass, name, detail) in &ck.rows {
        let _ = writeln!(text, "{} {name}: {detail}", if *pass { "PASS" } else { "FAIL" });
    }
    let failed = ck.rows.iter().filter(|r| !r.0).count();
    let _ = writeln!(text, "checks: {} passed, {failed} failed", ck.rows.len() - failed);
    if emit == Emit::Json {
        let rows: Vec<_> = ck.rows.iter().map(|(p, n, d)| json!({ "name": n, "pass": p, "detail": d })).collect();
        out.add("report.json", json_bytes(&json!({ "command": "check", "name": sc.name, "seed": seed, "checks": rows }))?);
    }
    Ok(())
}
