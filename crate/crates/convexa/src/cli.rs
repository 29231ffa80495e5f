use crate::meshio::{read_mesh, write_mesh, MeshFormat};
use crate::report::{self, csv_table, reports_csv, reports_text, sig12, Artifact};
use crate::spec::{parse_base, parse_space, parse_surface, space_periods, SurfaceSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use convexa_core::fixtures;
use convexa_core::immersion::AffinePlane;
use convexa_core::spaces::{pinching_ratio, AmbientSpace, Surface2D};
use convexa_core::sweep::{classify, ClassifyOptions, EventKind, Verdict};
use convexa_core::verify::{
    adjudicate_ii_coefficient, bonnet_diameter_bound, comparability_check,
    convex_curve_radius_check, equator_curvature_bound, equator_profile, equator_theta_spread,
    heisenberg_plane_bound, pinching_inequality_check, verify_equator, VerificationReport,
};
use convexa_core::GeomError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

/// Exit code for malformed input.
pub const EXIT_INPUT: i32 = 2;
/// Exit code for an Undetermined classification.
pub const EXIT_UNDETERMINED: i32 = 3;
/// Smallest accepted grid size.
pub const MIN_GRID: usize = 8;
/// θ values whose curvature profiles must agree.
const THETA_SPREAD_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "convexa",
    version,
    about = "Curvature verifiers and sweep classifier for Killing submersions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimality, K_e and the curvature bound of Berger-sphere equators.
    EquatorVerify(EquatorArgs),
    /// Principal-curvature bound for affine planes in Heisenberg space.
    HeisPlanes(HeisPlanesArgs),
    /// Curvature bound and minimality of vertical planes in Heisenberg space.
    VerticalPlanes(VerticalPlanesArgs),
    /// Comparability of Berger metrics with a multiple of the round metric.
    Comparability(ComparabilityArgs),
    /// Pinching ratio of base surfaces.
    Pinching(PinchingArgs),
    /// Pinching/Bonnet arithmetic and enclosing radius of convex curves.
    Inequalities(InequalitiesArgs),
    /// Topological type of a triangulated surface by a foliation sweep.
    Classify(ClassifyArgs),
    /// Writes a bundled test mesh.
    GenFixture(GenFixtureArgs),
    /// Aggregates the JSON artifacts of earlier runs.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Directory receiving the JSON artifact and any CSV tables.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// File stem of the artifact; defaults to the command name.
    #[arg(long)]
    pub name: Option<String>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct EquatorArgs {
    /// Berger space, e.g. `berger kappa=4 tau=0.5`; overrides --kappa/--tau.
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Equator rotation angle; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub theta: Vec<f64>,
    /// Surface spec `equator theta=<f>`; repeatable, added to --theta.
    #[arg(long)]
    pub surface: Vec<String>,
    /// Samples per axis of the [0, 2π]² parameter grid.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Fixed y of the emitted curvature profile.
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    pub profile_y: f64,
    #[arg(long, default_value_t = 101)]
    pub profile_points: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HeisPlanesArgs {
    /// Bundle curvature; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Vec<f64>,
    /// Number of random affine planes added to the horizontal and vertical ones.
    #[arg(long, default_value_t = 20)]
    pub random: usize,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    /// Half width of the parameter square of each plane.
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    /// Extra planes (`heis-plane a= b= c= d=` or `vertical-plane dir=`); repeatable.
    #[arg(long)]
    pub surface: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerticalPlanesArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Vec<f64>,
    /// Base-line directions π·i/count, i < count.
    #[arg(long, default_value_t = 12)]
    pub count: usize,
    /// Signed distance of the base line from the origin; repeatable.
    #[arg(long, allow_negative_numbers = true)]
    pub offset: Vec<f64>,
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, default_value_t = 1.0)]
    pub half_width: f64,
    /// Extra planes `vertical-plane dir=<f> [offset=<f>]`; repeatable.
    #[arg(long)]
    pub surface: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ComparabilityArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Vec<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PinchingArgs {
    /// Base surface (`sphere r=<f>` or `capped l=<f> blend=<f> [eps=<f>]`); repeatable.
    #[arg(long)]
    pub base: Vec<String>,
    /// Product space whose base is added to the list; repeatable.
    #[arg(long)]
    pub space: Vec<String>,
    #[arg(long, default_value_t = 2001)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct InequalitiesArgs {
    /// `kappa_minus,kappa_plus` pair; repeatable.
    #[arg(long)]
    pub pair: Vec<String>,
    /// Curvature lower bound for the diameter bound; repeatable.
    #[arg(long)]
    pub bonnet: Vec<f64>,
    /// Curvature of a test circle of radius 1/c; repeatable.
    #[arg(long)]
    pub circle: Vec<f64>,
    #[arg(long, default_value_t = 360)]
    pub segments: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// OFF or OBJ mesh.
    #[arg(long)]
    pub mesh: Option<PathBuf>,
    /// Surface spec `custom mesh=<path>`.
    #[arg(long)]
    pub surface: Option<String>,
    /// Ambient space; overrides the mesh's `# space:` header.
    #[arg(long)]
    pub space: Option<String>,
    /// Sweep step; defaults to the height range over 256.
    #[arg(long)]
    pub dt: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenFixtureArgs {
    /// Fixture name, or `all` to write every fixture into --out as a directory.
    pub name: String,
    /// Output file (or directory with `all`); stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mesh_format: Option<MeshFormatArg>,
    /// Number of 4-to-1 refinements.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeshFormatArg {
    Off,
    Obj,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding JSON artifacts.
    #[arg(long)]
    pub dir: PathBuf,
    /// Summary JSON path; stdout if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary CSV path.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Anything that ends a command before a report exists.
#[derive(Debug)]
pub struct InputError(pub String);

impl From<GeomError> for InputError {
    fn from(e: GeomError) -> Self {
        Self(e.to_string())
    }
}

impl From<crate::spec::SpecError> for InputError {
    fn from(e: crate::spec::SpecError) -> Self {
        Self(e.0)
    }
}

type CmdResult<T> = Result<T, InputError>;

fn input<T>(msg: impl Into<String>) -> CmdResult<T> {
    Err(InputError(msg.into()))
}

/// What a command produced: the artifact, human-readable text and named CSV tables.
pub struct Outcome {
    pub artifact: Artifact,
    pub text: String,
    pub tables: Vec<(String, String)>,
}

fn check_grid(n: usize, what: &str) -> CmdResult<()> {
    if n < MIN_GRID {
        return input(format!("{what} must be at least {MIN_GRID}, got {n}"));
    }
    Ok(())
}

fn or_default(v: &[f64], default: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        default.to_vec()
    } else {
        v.to_vec()
    }
}

fn positive(x: f64, what: &str) -> CmdResult<()> {
    if !(x > 0.0 && x.is_finite()) {
        return input(format!("{what} must be positive and finite, got {x}"));
    }
    Ok(())
}

pub fn equator_verify(a: &EquatorArgs) -> CmdResult<Outcome> {
    let (kappa, tau) = match &a.space {
        Some(s) => match parse_space(s)? {
            AmbientSpace::Berger(b) => (b.kappa(), b.tau()),
            _ => return input("equator-verify needs a Berger space"),
        },
        None => match (a.kappa, a.tau) {
            (Some(k), Some(t)) => (k, t),
            _ => return input("equator-verify needs --kappa and --tau (or --space)"),
        },
    };
    convexa_core::spaces::BergerSphere::new(kappa, tau)?;
    check_grid(a.grid, "--grid")?;
    check_grid(a.profile_points, "--profile-points")?;
    let mut thetas = a.theta.clone();
    for s in &a.surface {
        match parse_surface(s)? {
            SurfaceSpec::Equator { theta } => thetas.push(theta),
            _ => return input(format!("`{s}` is not an equator")),
        }
    }
    if thetas.is_empty() {
        thetas.push(0.0);
    }
    if thetas.iter().any(|t| !t.is_finite()) {
        return input("theta must be finite");
    }

    let mut reports = thetas
        .par_iter()
        .map(|&th| verify_equator(kappa, tau, th, a.grid))
        .collect::<Result<Vec<_>, _>>()?;
    let adj = adjudicate_ii_coefficient(kappa, tau, thetas[0], a.grid)?;
    reports.push(adj.report.clone());
    let mut spread = None;
    if thetas.len() > 1 {
        let s = equator_theta_spread(kappa, tau, &thetas, a.profile_points)?;
        let mut r = VerificationReport::new("equator-theta-invariance")
            .param("kappa", kappa)
            .param("tau", tau)
            .param("thetas", thetas.len() as f64);
        r.residual(s, THETA_SPREAD_TOL, "profile spread across theta");
        reports.push(r);
        spread = Some(s);
    }
    let profile = equator_profile(kappa, tau, thetas[0], a.profile_y, a.profile_points)?;
    let table = csv_table(
        &["x", "k1", "k2", "H", "Ke_oracle", "Ke_closed"],
        profile.iter().map(|r| {
            [r.x, r.k1, r.k2, r.h, r.ke_oracle, r.ke_closed]
                .iter()
                .map(|v| sig12(*v))
                .collect()
        }),
    );
    let details = json!({
        "kappa": kappa,
        "tau": tau,
        "thetas": thetas,
        "curvature_bound": equator_curvature_bound(kappa, tau),
        "adjudication": adj,
        "theta_spread": spread,
        "profile": { "theta": thetas[0], "y": a.profile_y, "rows": profile.len() },
    });
    let artifact = Artifact::new("equator-verify", reports, details);
    let mut text = reports_text(&artifact.reports);
    let chosen = match adj.consistent.as_slice() {
        [c] => format!("{c:?}"),
        [] => "none".into(),
        _ => "both".into(),
    };
    let _ = writeln!(
        text,
        "II coefficient consistent with K_e: {chosen}; bound {}",
        sig12(equator_curvature_bound(kappa, tau))
    );
    Ok(Outcome {
        artifact,
        text,
        tables: vec![("profile".into(), table)],
    })
}

fn plane_from_spec(s: &str, half_width: f64) -> CmdResult<(String, AffinePlane)> {
    let plane = match parse_surface(s)? {
        SurfaceSpec::HeisPlane { a, b, c, d } => AffinePlane::new(a, b, c, d)?,
        SurfaceSpec::VerticalPlane { dir, offset } => AffinePlane::vertical(dir, offset),
        _ => return input(format!("`{s}` is not a plane")),
    };
    Ok((s.to_string(), plane.with_half_width(half_width)))
}

fn plane_reports(
    taus: &[f64],
    planes: &[(String, AffinePlane)],
    grid: usize,
) -> CmdResult<Vec<VerificationReport>> {
    let jobs: Vec<(f64, usize)> = taus
        .iter()
        .flat_map(|&t| (0..planes.len()).map(move |i| (t, i)))
        .collect();
    let reports = jobs
        .par_iter()
        .map(|&(t, i)| {
            heisenberg_plane_bound(t, &planes[i].1, grid).map(|mut r| {
                r.note(format!("plane: {}", planes[i].0));
                r
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(reports)
}

fn check_taus(taus: &[f64]) -> CmdResult<()> {
    for &t in taus {
        if !(t.is_finite() && t != 0.0) {
            return input(format!("tau must be finite and nonzero, got {t}"));
        }
    }
    Ok(())
}

/// The horizontal plane, the vertical plane `y = 0`, then `count` seeded random planes.
pub fn default_planes(count: usize, seed: u64) -> Vec<(String, f64, f64, f64, f64)> {
    let mut out = vec![
        ("horizontal z=0".to_string(), 0.0, 0.0, 1.0, 0.0),
        ("vertical y=0".to_string(), 0.0, 1.0, 0.0, 0.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < count + 2 {
        let (a, b, c, d): (f64, f64, f64, f64) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if (a * a + b * b + c * c).sqrt() > 0.1 {
            out.push((format!("random #{}", out.len() - 1), a, b, c, d));
        }
    }
    out
}

pub fn heis_planes(a: &HeisPlanesArgs) -> CmdResult<Outcome> {
    let taus = or_default(&a.tau, &[0.3, 0.5, 1.0]);
    check_taus(&taus)?;
    check_grid(a.grid, "--grid")?;
    positive(a.half_width, "--half-width")?;
    let mut planes = Vec::new();
    for (label, pa, pb, pc, pd) in default_planes(a.random, a.seed) {
        planes.push((
            format!("{label}: heis-plane a={pa} b={pb} c={pc} d={pd}"),
            AffinePlane::new(pa, pb, pc, pd)?.with_half_width(a.half_width),
        ));
    }
    for s in &a.surface {
        planes.push(plane_from_spec(s, a.half_width)?);
    }
    let reports = plane_reports(&taus, &planes, a.grid)?;
    let details = json!({ "taus": taus, "planes": planes.len(), "grid": a.grid, "seed": a.seed });
    let artifact = Artifact::new("heis-planes", reports, details);
    Ok(Outcome {
        text: reports_text(&artifact.reports),
        artifact,
        tables: vec![],
    })
}

pub fn vertical_planes(a: &VerticalPlanesArgs) -> CmdResult<Outcome> {
    let taus = or_default(&a.tau, &[0.3, 0.5, 1.0]);
    check_taus(&taus)?;
    check_grid(a.grid, "--grid")?;
    positive(a.half_width, "--half-width")?;
    let offsets = or_default(&a.offset, &[0.0, 0.5]);
    let mut planes = Vec::new();
    for i in 0..a.count {
        let dir = PI * i as f64 / a.count as f64;
        for &off in &offsets {
            planes.push((
                format!("vertical-plane dir={dir} offset={off}"),
                AffinePlane::vertical(dir, off).with_half_width(a.half_width),
            ));
        }
    }
    for s in &a.surface {
        match parse_surface(s)? {
            SurfaceSpec::VerticalPlane { .. } => planes.push(plane_from_spec(s, a.half_width)?),
            _ => return input(format!("`{s}` is not a vertical plane")),
        }
    }
    if planes.is_empty() {
        return input("no planes selected");
    }
    let reports = plane_reports(&taus, &planes, a.grid)?;
    let details = json!({ "taus": taus, "planes": planes.len(), "grid": a.grid });
    let artifact = Artifact::new("vertical-planes", reports, details);
    Ok(Outcome {
        text: reports_text(&artifact.reports),
        artifact,
        tables: vec![],
    })
}

pub fn comparability(a: &ComparabilityArgs) -> CmdResult<Outcome> {
    let kappas = or_default(&a.kappa, &[1.0, 4.0, 9.0]);
    let taus = or_default(&a.tau, &[0.25, 1.0]);
    if a.samples == 0 {
        return input("--samples must be positive");
    }
    let jobs: Vec<(f64, f64)> = kappas
        .iter()
        .flat_map(|&k| taus.iter().map(move |&t| (k, t)))
        .collect();
    for &(k, t) in &jobs {
        convexa_core::spaces::BergerSphere::new(k, t)?;
    }
    let reports = jobs
        .par_iter()
        .map(|&(k, t)| comparability_check(k, t, a.samples, a.seed))
        .collect::<Result<Vec<_>, _>>()?;
    let artifact = Artifact::new(
        "comparability",
        reports,
        json!({ "samples": a.samples, "seed": a.seed }),
    );
    Ok(Outcome {
        text: reports_text(&artifact.reports),
        artifact,
        tables: vec![],
    })
}

pub fn pinching(a: &PinchingArgs) -> CmdResult<Outcome> {
    let mut bases: Vec<(String, Surface2D)> = Vec::new();
    for s in &a.base {
        bases.push((s.clone(), parse_base(s)?));
    }
    for s in &a.space {
        match parse_space(s)? {
            AmbientSpace::Product(p) => bases.push((s.clone(), p.base)),
            _ => return input(format!("`{s}` has no base surface")),
        }
    }
    if bases.is_empty() {
        for s in ["sphere r=1", "capped l=10 blend=1"] {
            bases.push((s.to_string(), parse_base(s)?));
        }
    }
    if a.samples < 2 {
        return input("--samples must be at least 2");
    }
    let mut reports = Vec::new();
    let mut rows = Vec::new();
    for (label, base) in &bases {
        let p = pinching_ratio(base, a.samples)?;
        let mut r = VerificationReport::new("pinching")
            .param("kappa_minus", p.kappa_minus)
            .param("kappa_plus", p.kappa_plus)
            .param("ratio", p.ratio)
            .param("samples", a.samples as f64);
        r.note(format!("base: {label}"));
        r.note(if p.ratio > 0.25 {
            "1/4-pinched"
        } else {
            "not 1/4-pinched"
        });
        reports.push(r);
        rows.push(json!({ "base": label, "ratio": p }));
    }
    let artifact = Artifact::new("pinching", reports, json!({ "bases": rows }));
    Ok(Outcome {
        text: reports_text(&artifact.reports),
        artifact,
        tables: vec![],
    })
}

fn parse_pair(s: &str) -> CmdResult<(f64, f64)> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(a), Ok(b)) => Ok((a, b)),
            _ => input(format!("bad --pair `{s}`")),
        },
        _ => input(format!(
            "--pair expects `kappa_minus,kappa_plus`, got `{s}`"
        )),
    }
}

/// Vertices of a regular `n`-gon inscribed in the circle of radius `r`.
pub fn circle_polyline(r: f64, n: usize) -> Vec<[f64; 2]> {
    (0..n)
        .map(|i| {
            let (s, c) = (2.0 * PI * i as f64 / n as f64).sin_cos();
            [r * c, r * s]
        })
        .collect()
}

pub fn inequalities(a: &InequalitiesArgs) -> CmdResult<Outcome> {
    let pairs = if a.pair.is_empty() {
        vec![(1.0, 1.0), (0.2, 1.0), (0.26, 1.0)]
    } else {
        a.pair
            .iter()
            .map(|s| parse_pair(s))
            .collect::<CmdResult<_>>()?
    };
    let bonnet = or_default(&a.bonnet, &[2.0, 2.5, 4.0]);
    let circles = or_default(&a.circle, &[2.2, 2.5, 4.0]);
    if a.segments < 3 {
        return input("--segments must be at least 3");
    }
    let mut reports = Vec::new();
    let mut details = Vec::new();
    for (km, kp) in pairs {
        let c = pinching_inequality_check(km, kp)?;
        let mut r = VerificationReport::new("pinching-inequality")
            .param("kappa_minus", km)
            .param("kappa_plus", kp)
            .param("ratio", c.ratio)
            .param("injectivity_length", c.injectivity_length)
            .param("bonnet_length", c.bonnet_length);
        r.bound_slack(c.slack);
        r.note(if c.contradiction_possible {
            "ratio <= 1/4: the length window is non-empty"
        } else {
            "ratio > 1/4: injectivity and Bonnet lengths are incompatible"
        });
        reports.push(r);
        details.push(json!({ "pinching": c }));
    }
    for c in bonnet {
        let d = bonnet_diameter_bound(c)?;
        reports.push(
            VerificationReport::new("bonnet-diameter")
                .param("c", c)
                .param("bound", d),
        );
    }
    for c in circles {
        positive(c, "--circle")?;
        let chk = convex_curve_radius_check(&circle_polyline(1.0 / c, a.segments), c)?;
        let mut r = VerificationReport::new("convex-curve-radius")
            .param("c", c)
            .param("segments", a.segments as f64)
            .param("radius", chk.radius)
            .param("bound", chk.bound)
            .param("tolerance", chk.tolerance);
        r.bound_slack(chk.bound + chk.tolerance - chk.radius);
        r.pass = chk.pass;
        if !chk.pass {
            r.note("enclosing radius exceeds 1/c plus twice the segment length");
        }
        reports.push(r);
        details.push(json!({ "radius": chk }));
    }
    let artifact = Artifact::new("inequalities", reports, json!({ "checks": details }));
    Ok(Outcome {
        text: reports_text(&artifact.reports),
        artifact,
        tables: vec![],
    })
}

/// Exit code of a classification verdict.
pub fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Sphere | Verdict::PlaneTopEnd | Verdict::PlaneBottomEnd => 0,
        Verdict::NonEmbedded => 1,
        Verdict::Undetermined => EXIT_UNDETERMINED,
    }
}

pub fn classify_mesh(a: &ClassifyArgs) -> CmdResult<Outcome> {
    let path = match (&a.mesh, &a.surface) {
        (Some(p), None) => p.clone(),
        (None, Some(s)) => match parse_surface(s)? {
            SurfaceSpec::Custom { mesh } => mesh,
            _ => return input("classify needs a `custom mesh=<path>` surface"),
        },
        (Some(_), Some(_)) => return input("give either --mesh or --surface, not both"),
        (None, None) => return input("classify needs --mesh"),
    };
    let file = read_mesh(&path).map_err(InputError)?;
    let spec = match (&a.space, &file.space) {
        (Some(s), _) | (None, Some(s)) => s.clone(),
        (None, None) => return input("mesh has no `# space:` header and no --space was given"),
    };
    let space = parse_space(&spec)?;
    if let Some(dt) = a.dt {
        positive(dt, "--dt")?;
    }
    let mesh = file.into_mesh(space_periods(&space));
    let res = classify(&mesh, &space, ClassifyOptions { dt: a.dt })?;

    let mut r = VerificationReport::new("classify")
        .param("triangles", mesh.triangles.len() as f64)
        .param("dt", res.diagnostics.dt)
        .param(
            "intersecting_pairs",
            res.diagnostics.intersecting_pairs as f64,
        );
    r.pass = verdict_exit(res.verdict) == 0;
    r.note(format!("verdict: {}", res.verdict.name()));
    let mut text = format!("{}\n", res.verdict.name());
    let kinds = [
        EventKind::Birth,
        EventKind::Death,
        EventKind::Merge,
        EventKind::Split,
        EventKind::Ambiguous,
        EventKind::ConvexityFailure,
        EventKind::SelfIntersection,
    ];
    let counts: Vec<String> = kinds
        .iter()
        .map(|k| format!("{k:?}={}", res.count(*k)))
        .collect();
    let _ = writeln!(text, "events: {}", counts.join(" "));
    for e in res
        .events
        .iter()
        .filter(|e| e.kind != EventKind::ConvexityFailure)
    {
        let _ = writeln!(text, "  t={} {:?} #{}", sig12(e.t), e.kind, e.id);
    }
    for n in &res.diagnostics.notes {
        let _ = writeln!(text, "note: {n}");
    }
    let table = csv_table(
        &["t", "kind", "id"],
        res.events
            .iter()
            .map(|e| vec![sig12(e.t), format!("{:?}", e.kind), e.id.to_string()]),
    );
    let details = json!({ "mesh": path.display().to_string(), "space": spec, "result": res });
    let mut artifact = Artifact::new("classify", vec![r], details);
    artifact.exit_code = verdict_exit(res.verdict);
    Ok(Outcome {
        artifact,
        text,
        tables: vec![("events".into(), table)],
    })
}

fn fixture_text(name: &str, refine: usize, format: MeshFormat) -> CmdResult<String> {
    let f = match fixtures::by_name(name) {
        Some(f) => f?,
        None => {
            return input(format!(
                "unknown fixture `{name}`; available: {}",
                fixtures::FIXTURE_NAMES.join(", ")
            ))
        }
    };
    let mut mesh = f.mesh;
    for _ in 0..refine {
        mesh = mesh.refine();
    }
    Ok(write_mesh(&mesh, &f.space_spec, format))
}

fn write_file(path: &Path, text: &str) -> CmdResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| InputError(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn gen_fixture(a: &GenFixtureArgs) -> CmdResult<i32> {
    let fmt = |p: Option<&Path>| match a.mesh_format {
        Some(MeshFormatArg::Obj) => MeshFormat::Obj,
        Some(MeshFormatArg::Off) => MeshFormat::Off,
        None => p.and_then(MeshFormat::from_path).unwrap_or(MeshFormat::Off),
    };
    if a.name == "all" {
        let Some(dir) = &a.out else {
            return input("gen-fixture all needs --out <dir>");
        };
        let ext = match fmt(None) {
            MeshFormat::Off => "off",
            MeshFormat::Obj => "obj",
        };
        for name in fixtures::FIXTURE_NAMES {
            let text = fixture_text(name, a.refine, fmt(None))?;
            write_file(&dir.join(format!("{name}.{ext}")), &text)?;
        }
        return Ok(0);
    }
    let text = fixture_text(&a.name, a.refine, fmt(a.out.as_deref()))?;
    match &a.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    Ok(0)
}

pub fn report_dir(a: &ReportArgs) -> CmdResult<report::Summary> {
    let entries =
        std::fs::read_dir(&a.dir).map_err(|e| InputError(format!("{}: {e}", a.dir.display())))?;
    let mut names: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    names.sort();
    let mut artifacts = Vec::new();
    let mut profiles = Vec::new();
    for p in &names {
        let file = p
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .to_string();
        match p.extension().and_then(|e| e.to_str()) {
            Some("json") => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
                let mut doc: Value = serde_json::from_str(&text)
                    .map_err(|e| InputError(format!("{}: {e}", p.display())))?;
                if doc["schema"] == report::ARTIFACT_SCHEMA {
                    report::strip_metadata(&mut doc);
                    artifacts.push((file, doc));
                }
            }
            Some("csv") if file.contains("profile") => profiles.push(file),
            _ => {}
        }
    }
    if artifacts.is_empty() {
        return input(format!("no artifacts in {}", a.dir.display()));
    }
    Ok(report::summarize(&artifacts, &profiles))
}

/// Writes the artifact and tables, prints stdout, and returns the exit code.
fn emit(command: &str, out: &OutputArgs, o: Outcome) -> CmdResult<i32> {
    let stem = out.name.clone().unwrap_or_else(|| command.to_string());
    if let Some(dir) = &out.out {
        write_file(&dir.join(format!("{stem}.json")), &o.artifact.to_json())?;
        for (suffix, table) in &o.tables {
            write_file(&dir.join(format!("{stem}_{suffix}.csv")), table)?;
        }
    }
    match out.format {
        Format::Text => print!("{}", o.text),
        Format::Json => print!("{}", o.artifact.to_json()),
        Format::Csv => print!("{}", reports_csv(&o.artifact)),
    }
    Ok(o.artifact.exit_code)
}

/// Caps the worker pool at `CONVEXA_THREADS` when set.
pub fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var("CONVEXA_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| format!("CONVEXA_THREADS must be a positive integer, got `{v}`"))?;
        if n == 0 {
            return Err("CONVEXA_THREADS must be positive".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}

pub fn run(cli: Cli) -> i32 {
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    let res = match &cli.command {
        Command::EquatorVerify(a) => {
            equator_verify(a).and_then(|o| emit("equator-verify", &a.output, o))
        }
        Command::HeisPlanes(a) => heis_planes(a).and_then(|o| emit("heis-planes", &a.output, o)),
        Command::VerticalPlanes(a) => {
            vertical_planes(a).and_then(|o| emit("vertical-planes", &a.output, o))
        }
        Command::Comparability(a) => {
            comparability(a).and_then(|o| emit("comparability", &a.output, o))
        }
        Command::Pinching(a) => pinching(a).and_then(|o| emit("pinching", &a.output, o)),
        Command::Inequalities(a) => {
            inequalities(a).and_then(|o| emit("inequalities", &a.output, o))
        }
        Command::Classify(a) => classify_mesh(a).and_then(|o| emit("classify", &a.output, o)),
        Command::GenFixture(a) => gen_fixture(a),
        Command::Report(a) => report_dir(a).and_then(|s| {
            let mut text = serde_json::to_string_pretty(&s.json).expect("summary serializes");
            text.push('\n');
            match &a.out {
                Some(p) => write_file(p, &text)?,
                None => print!("{text}"),
            }
            if let Some(p) = &a.csv {
                write_file(p, &s.csv)?;
            }
            Ok(s.exit_code)
        }),
    };
    match res {
        Ok(code) => code,
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}
