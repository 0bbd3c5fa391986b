//! Command-line front end.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde_json::json;

use crate::classify::{class_of_type, events_csv, scan_family, DiagonalFamily, ScanFamily, ScanOptions, StructureFamily};
use crate::curve::{ClosedFormCurve, CurveJets, PolyCurve};
use crate::envelope::{
    discriminant_mesh, envelope_mesh, hyperplane_family, singular_locus, write_atomic, write_locus_obj, write_mesh_obj,
    LocusSource, NormalFormFamily,
};
use crate::error::{Error, Result};
use crate::flags::{c_integrality_residual, d_integrality_residual, flag_from_frame_recentered, reconstruct_series};
use crate::frames::{integrate_on_grid, legendre_residuals, osculating_frame_field, CurvatureData, Frame, FrameField, StructureCurve};
use crate::jets::{
    codim_adapted, codim_osculating, detect_type, detect_type_exact, dual_type, enumerate_generic_types, enumeration_csv,
    schubert_number, EnumMode, TypeDetection, TypeVector,
};
use crate::poly::{BiPoly, Poly};
use crate::scalar::{rational_from_f64, snap_rational, Rational};
use crate::spaceform::{GeometryKind, SpaceForm};
use crate::verify;
use config::{ClosedFormId, CurveSpec, GridSpec, RunConfig};
use report::{Arithmetic, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "framecurve", version, about = "Framed curves in space forms: types, frames, envelopes and bifurcations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration (a previous report is accepted too).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for grid computations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type and codimensions of the configured curve at (t, λ).
    Type {
        #[arg(long, allow_negative_numbers = true)]
        t: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Builds the frame field on the t grid and writes a frame table.
    Frame {
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Envelope mesh and singular locus of the tangent hyperplane family.
    Envelope {
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
    },
    /// Discriminant mesh of the normal form of a type.
    NormalForm {
        #[arg(long = "type", value_name = "A1,A2,A3")]
        ty: String,
    },
    /// Bifurcation scan of a one-parameter family.
    Scan,
    /// Table of generic types up to a codimension budget.
    Enumerate {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 2)]
        budget: u32,
        #[arg(long, default_value = "ordinary")]
        mode: String,
    },
    /// Runs the acceptance suite.
    Verify {
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<u32>,
    },
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        // a second initialisation in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::InvalidType(_) => EXIT_CONFIG,
                _ => EXIT_NUMERIC,
            }
        }
    }
}

struct Ctx {
    cfg: RunConfig,
    out: PathBuf,
}

impl Ctx {
    fn path(&self, p: &Path) -> PathBuf {
        self.out.join(p)
    }

    fn finish(&self, report: &Report) -> Result<()> {
        let path = self.path(&self.cfg.outputs.report);
        report.write(&path)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn execute(cli: &Cli) -> Result<i32> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let out = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&out).map_err(|e| Error::Config(format!("{}: {e}", out.display())))?;
    let ctx = Ctx { cfg, out };
    match &cli.command {
        Command::Type { t, lambda } => cmd_type(&ctx, t.unwrap_or(ctx.cfg.query.t), lambda.unwrap_or(ctx.cfg.query.lambda)),
        Command::Frame { lambda } => cmd_frame(&ctx, lambda.unwrap_or(ctx.cfg.query.lambda)),
        Command::Envelope { lambda } => cmd_envelope(&ctx, lambda.unwrap_or(ctx.cfg.query.lambda)),
        Command::NormalForm { ty } => cmd_normal_form(&ctx, ty),
        Command::Scan => cmd_scan(&ctx),
        Command::Enumerate { n, budget, mode } => cmd_enumerate(&ctx, n.unwrap_or(ctx.cfg.n), *budget, mode),
        Command::Verify { criterion } => cmd_verify(&ctx, *criterion),
    }
}

fn parse_type(s: &str) -> Result<TypeVector> {
    let parts: std::result::Result<Vec<u32>, _> = s.trim_matches(|c| c == '(' || c == ')').split(',').map(|p| p.trim().parse()).collect();
    let a = parts.map_err(|_| Error::InvalidType(format!("cannot parse {s:?}")))?;
    TypeVector::new(a)
}

fn curve_spec(cfg: &RunConfig) -> Result<&CurveSpec> {
    cfg.curve.as_ref().ok_or_else(|| Error::Config("this command needs a `curve` entry".into()))
}

fn exact_param(x: f64) -> Rational {
    snap_rational(x, 1000, 1e-12).unwrap_or_else(|| rational_from_f64(x))
}

fn bipolys(specs: &[config::PolySpec]) -> Result<Vec<BiPoly>> {
    specs.iter().map(config::PolySpec::to_bipoly).collect()
}

fn kappa_at(specs: &[config::PolySpec; 3], lambda: &Rational) -> Result<[Poly<Rational>; 3]> {
    let k = bipolys(specs)?;
    Ok([k[0].at_lambda(lambda), k[1].at_lambda(lambda), k[2].at_lambda(lambda)])
}

fn closed_form(id: ClosedFormId, param: Option<f64>) -> ClosedFormCurve {
    match id {
        ClosedFormId::Helix => ClosedFormCurve::helix(),
        ClosedFormId::UnitCircle | ClosedFormId::CircleRadial => ClosedFormCurve::unit_circle(),
        ClosedFormId::Clifford => ClosedFormCurve::clifford(param.unwrap_or(0.6)),
        ClosedFormId::HyperbolicSpiral => ClosedFormCurve::hyperbolic_spiral(param.unwrap_or(0.75)),
    }
}

/// The configured curve at `λ`, as a jet provider in the ambient model.
fn ambient_curve(cfg: &RunConfig, lambda: f64) -> Result<(Box<dyn CurveJets>, Arithmetic)> {
    let l = exact_param(lambda);
    match curve_spec(cfg)? {
        CurveSpec::Polynomial { components } => {
            let c = bipolys(components)?.iter().map(|p| p.at_lambda(&l)).collect();
            Ok((Box::new(PolyCurve::new(c)), Arithmetic::Exact))
        }
        CurveSpec::ClosedForm { id, param } => Ok((Box::new(closed_form(*id, *param)), Arithmetic::Floating)),
        CurveSpec::Diagonal { diag } => {
            let d: Vec<Poly<Rational>> = bipolys(diag)?.iter().map(|p| p.at_lambda(&l)).collect();
            let series = reconstruct_series(&d);
            Ok((Box::new(PolyCurve::new(series.iter().map(|row| row[0].clone()).collect())), Arithmetic::Exact))
        }
        CurveSpec::Curvature { .. } => Err(Error::Config("curvature data has no ambient closed form; use `frame`".into())),
    }
}

fn space_form(cfg: &RunConfig) -> Result<SpaceForm> {
    SpaceForm::new(cfg.geometry, cfg.n)
}

type FieldSource = (FrameField, Option<Box<dyn CurveJets>>, Arithmetic);

/// The frame field of the configured curve on the t grid, and the curve
/// itself when the field is its osculating frame.
fn frame_field(cfg: &RunConfig, lambda: f64) -> Result<FieldSource> {
    let sf = space_form(cfg)?;
    let grid = cfg.grids.t.nodes();
    match curve_spec(cfg)? {
        CurveSpec::ClosedForm { id: ClosedFormId::CircleRadial, .. } => {
            Ok((FrameField::circle_radial(&grid), Some(Box::new(ClosedFormCurve::unit_circle())), Arithmetic::Floating))
        }
        CurveSpec::Curvature { kappa } => {
            let curv = CurvatureData::polynomial(cfg.geometry, kappa_at(kappa, &exact_param(lambda))?);
            let field = integrate_on_grid(&Frame::standard(sf), &curv, &grid, cfg.tolerances.ode_tol)?;
            Ok((field, None, Arithmetic::Floating))
        }
        CurveSpec::Diagonal { .. } if cfg.geometry != GeometryKind::Euclidean => {
            Err(Error::Config("diagonal data describes an affine curve; use geometry euclidean".into()))
        }
        _ => {
            let (curve, _) = ambient_curve(cfg, lambda)?;
            let field = osculating_frame_field(curve.as_ref(), &grid, &sf, cfg.r_max, cfg.tolerances.rank_tol)?;
            Ok((field, Some(curve), Arithmetic::Floating))
        }
    }
}

fn type_json(d: &TypeDetection) -> serde_json::Value {
    json!({
        "type": d.ty,
        "confidence": d.confidence,
        "schubert": schubert_number(&d.ty),
        "codim_D": codim_adapted(&d.ty),
        "codim_C": codim_osculating(&d.ty),
        "dual_type": dual_type(&d.ty),
    })
}

fn type_line(label: &str, d: &TypeDetection) -> String {
    format!(
        "{label} {} schubert {} codim_D {} codim_C {} dual {} ({})",
        d.ty,
        schubert_number(&d.ty),
        codim_adapted(&d.ty),
        codim_osculating(&d.ty),
        dual_type(&d.ty),
        d.confidence.as_str()
    )
}

fn detect(curve: &dyn CurveJets, t: f64, cfg: &RunConfig, exact: bool) -> Result<TypeDetection> {
    if exact {
        detect_type_exact(curve, &exact_param(t), cfg.r_max)
    } else {
        detect_type(curve, t, cfg.r_max, cfg.tolerances.rank_tol)
    }
}

fn cmd_type(ctx: &Ctx, t: f64, lambda: f64) -> Result<i32> {
    let cfg = &ctx.cfg;
    let mut results = serde_json::Map::new();
    results.insert("t".into(), json!(t));
    results.insert("lambda".into(), json!(lambda));
    let arithmetic = match curve_spec(cfg)? {
        CurveSpec::Curvature { kappa } => {
            let sc = StructureCurve::new(cfg.geometry, kappa_at(kappa, &exact_param(lambda))?);
            let curve = detect(&sc.curve_jets(), t, cfg, true)?;
            let dual = detect(&sc.dual_jets(), t, cfg, true)?;
            println!("{}", type_line("curve", &curve));
            println!("{}", type_line("frame-dual", &dual));
            println!("class {}", class_of_type(&dual.ty));
            results.insert("curve".into(), type_json(&curve));
            results.insert("frame_dual".into(), type_json(&dual));
            results.insert("class".into(), json!(class_of_type(&dual.ty)));
            Arithmetic::Exact
        }
        _ => {
            let (curve, arithmetic) = ambient_curve(cfg, lambda)?;
            let d = detect(curve.as_ref(), t, cfg, arithmetic == Arithmetic::Exact)?;
            println!("{}", type_line("curve", &d));
            results.insert("curve".into(), type_json(&d));
            arithmetic
        }
    };
    let mut report = Report::new("type", cfg, arithmetic);
    report.results = serde_json::Value::Object(results);
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

fn max_of(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, f64::max)
}

fn cmd_frame(ctx: &Ctx, lambda: f64) -> Result<i32> {
    let cfg = &ctx.cfg;
    let (field, curve, arithmetic) = frame_field(cfg, lambda)?;
    let d = space_form(cfg)?.ambient_dim();
    let mut csv = String::from("t");
    for j in 0..d {
        for i in 0..d {
            let _ = write!(csv, ",e{j}_{i}");
        }
    }
    csv.push_str(",gram_defect\n");
    for k in 0..field.len() {
        let _ = write!(csv, "{:.17e}", field.params()[k]);
        let m = field.matrix(k);
        for j in 0..d {
            for i in 0..d {
                let _ = write!(csv, ",{:.17e}", m[(i, j)]);
            }
        }
        let _ = writeln!(csv, ",{:.3e}", field.frame(k).gram_defect());
    }
    let path = ctx.path(&cfg.outputs.frames);
    write_atomic(&path, csv.as_bytes())?;
    println!("wrote {} ({} frames)", path.display(), field.len());

    let mut report = Report::new("frame", cfg, arithmetic);
    report.output(&cfg.outputs.frames);
    report.residual("gram_defect", field.max_gram_defect());
    if let Some(c) = &curve {
        report.residual("legendre", max_of(legendre_residuals(c.as_ref(), &field)?));
    }
    let segments = flag_from_frame_recentered(&field, &field.frame(0))?;
    report.residual("c_integrality", max_of(segments.iter().flat_map(|s| c_integrality_residual(s, &[]))));
    report.residual("d_integrality", max_of(segments.iter().flat_map(|s| d_integrality_residual(s, &[]))));
    report.results = json!({ "lambda": lambda, "frames": field.len(), "chart_segments": segments.len() });
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

fn cmd_envelope(ctx: &Ctx, lambda: f64) -> Result<i32> {
    let cfg = &ctx.cfg;
    if cfg.n != 2 {
        return Err(Error::Config("envelopes are built for n = 2".into()));
    }
    let (field, _, arithmetic) = frame_field(cfg, lambda)?;
    let fam = hyperplane_family(&field);
    let mesh = envelope_mesh(&fam, &cfg.grids.s.nodes(), cfg.tolerances.mesh_tol)?;
    let window = (cfg.grids.s.min, cfg.grids.s.max);
    let locus = singular_locus(LocusSource::Family(&fam), window, cfg.tolerances.mesh_tol);
    let (mesh_path, locus_path) = (ctx.path(&cfg.outputs.mesh), ctx.path(&cfg.outputs.locus));
    write_mesh_obj(&mesh, &mesh_path, false)?;
    write_locus_obj(&locus, cfg.geometry, &locus_path)?;
    println!("wrote {} ({} vertices, {} faces)", mesh_path.display(), mesh.vertex_count(), mesh.faces.len());
    println!("wrote {} ({} polylines)", locus_path.display(), locus.len());

    let mut report = Report::new("envelope", cfg, arithmetic);
    report.output(&cfg.outputs.mesh);
    report.output(&cfg.outputs.locus);
    report.residual("incidence", mesh.max_residual());
    report.residual("model", mesh.max_model_residual());
    report.residual("gram_defect", field.max_gram_defect());
    report.results = json!({
        "lambda": lambda,
        "vertices": mesh.vertex_count(),
        "faces": mesh.faces.len(),
        "degenerate_params": mesh.degenerate_params,
        "locus_polylines": locus.len(),
    });
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

/// Grid nodes with `0` added when the range straddles it, so the mesh passes
/// through the normal form's singular point.
fn nodes_through_zero(g: &GridSpec) -> Vec<f64> {
    let mut nodes = g.nodes();
    if g.min < 0.0 && g.max > 0.0 && !nodes.contains(&0.0) {
        nodes.push(0.0);
        nodes.sort_by(f64::total_cmp);
    }
    nodes
}

fn cmd_normal_form(ctx: &Ctx, ty: &str) -> Result<i32> {
    let cfg = &ctx.cfg;
    let nf = NormalFormFamily::new(parse_type(ty)?)?;
    let (ts, ss) = (nodes_through_zero(&cfg.grids.t), nodes_through_zero(&cfg.grids.s));
    let mesh = discriminant_mesh(&nf, &ts, &ss, cfg.tolerances.mesh_tol);
    let locus = singular_locus(LocusSource::NormalForm { nf: &nf, t_grid: &ts }, (cfg.grids.s.min, cfg.grids.s.max), cfg.tolerances.mesh_tol);
    let (mesh_path, locus_path) = (ctx.path(&cfg.outputs.mesh), ctx.path(&cfg.outputs.locus));
    write_mesh_obj(&mesh, &mesh_path, false)?;
    write_locus_obj(&locus, GeometryKind::Euclidean, &locus_path)?;
    println!("wrote {} ({} vertices, {} faces)", mesh_path.display(), mesh.vertex_count(), mesh.faces.len());
    println!("wrote {} ({} polylines)", locus_path.display(), locus.len());

    let mut report = Report::new("normal-form", cfg, Arithmetic::Floating);
    report.output(&cfg.outputs.mesh);
    report.output(&cfg.outputs.locus);
    report.residual("incidence", mesh.max_residual());
    report.results = json!({
        "type": nf.a,
        "class": class_of_type(&nf.a),
        "vertices": mesh.vertex_count(),
        "faces": mesh.faces.len(),
        "locus_polylines": locus.len(),
    });
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

fn cmd_scan(ctx: &Ctx) -> Result<i32> {
    let cfg = &ctx.cfg;
    let family: Box<dyn ScanFamily> = match curve_spec(cfg)? {
        CurveSpec::Curvature { kappa } => {
            let k = bipolys(kappa)?;
            Box::new(StructureFamily { kind: cfg.geometry, kappa: [k[0].clone(), k[1].clone(), k[2].clone()] })
        }
        CurveSpec::Diagonal { diag } => Box::new(DiagonalFamily { diag: bipolys(diag)? }),
        _ => return Err(Error::Config("scan needs a curvature or diagonal family".into())),
    };
    let (g, l) = (cfg.grids.t, cfg.grids.lambda);
    let opts = ScanOptions {
        t_range: (g.min, g.max),
        t_count: g.count,
        lambda_range: (l.min, l.max),
        lambda_count: l.count,
        r_max: cfg.r_max,
        rank_tol: cfg.tolerances.rank_tol,
        ..ScanOptions::default()
    };
    let result = scan_family(family.as_ref(), &opts);
    let path = ctx.path(&cfg.outputs.events);
    write_atomic(&path, events_csv(&result.events).as_bytes())?;
    let momentary = result.momentary().count();
    println!("wrote {} ({} events, {} momentary)", path.display(), result.events.len(), momentary);

    let mut report = Report::new("scan", cfg, Arithmetic::Mixed);
    report.output(&cfg.outputs.events);
    report.events = result.events.clone();
    report.results = json!({
        "options": result.options,
        "momentary": momentary,
        "strata": result.strata,
        "degenerate": result.degenerate,
    });
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

fn cmd_enumerate(ctx: &Ctx, n: usize, budget: u32, mode: &str) -> Result<i32> {
    let cfg = &ctx.cfg;
    let mode: EnumMode = mode.parse()?;
    let types = enumerate_generic_types(n, budget, mode);
    let csv = enumeration_csv(&types);
    print!("{csv}");
    let path = ctx.path(&cfg.outputs.enumeration);
    write_atomic(&path, csv.as_bytes())?;
    let mut report = Report::new("enumerate", cfg, Arithmetic::Exact);
    report.output(&cfg.outputs.enumeration);
    report.results = json!({ "n": n, "budget": budget, "mode": mode, "types": types });
    ctx.finish(&report)?;
    Ok(EXIT_OK)
}

fn cmd_verify(ctx: &Ctx, criterion: Option<u32>) -> Result<i32> {
    let cfg = &ctx.cfg;
    let outcomes = match criterion {
        Some(id) => vec![verify::run_criterion(id, cfg.seed)
            .ok_or_else(|| Error::Config(format!("no criterion {id}; known: {:?}", verify::criterion_ids())))?],
        None => verify::run_all(cfg.seed),
    };
    for o in &outcomes {
        println!("{}", verify::summary_line(o));
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let mut report = Report::new("verify", cfg, Arithmetic::Mixed);
    report.results = json!({ "passed": passed, "criteria": outcomes });
    ctx.finish(&report)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY })
}
