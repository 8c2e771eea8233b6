mod input;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gaussmap::arrangement::{arrangement_json, classify_shape, polygon_profile, star_profile, LayerProfile, Shape};
use gaussmap::chord::{
    chord_signs, diagram_index_degree, extract_diagram, free_chords, realize_diagram, realize_index_degree,
    ChordDiagram, Hemisphere,
};
use gaussmap::degree::{degree_identities, degree_independence_check, normal_degree, star_degree};
use gaussmap::index::{
    curvature_by_index_integration_jobs, is_admissible, middle_vertex_index, polygon_index, HeightDirection,
};
use gaussmap::mesh::{analyze_mesh, critical_point_census, general_direction, load_off, three_cp_analysis};
use gaussmap::sampling;
use gaussmap::sphere::{crossing_count, polar_polygon, SphericalPolygon, UnitVec, TAU};
use gaussmap::star::{
    angle_deficit, curvature_parts, gauss_image, inflection_faces, project_to_sphere, transverse_plane, VertexStar,
};
use gaussmap::verify::{run_suite, star_direction, Suite, AREA_TOL};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use input::{read_input, wrong_kind, Input};

const SCHEMA_VERSION: &str = "1";
const GAUSS_BONNET_TOL: f64 = 1e-9;

/// Discrete Gauss map invariants of vertex stars, spherical polygons and
/// closed triangle meshes.
///
/// Reports are JSON on standard output. Exit status is 0 on success, 2 when
/// an identity check fails and 1 on usage, input or geometry errors.
#[derive(Parser)]
#[command(name = "gaussmap", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Seed for every random choice (directions, samples, verification cases)
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Monte Carlo samples for the curvature estimate of analyze-star
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// Output layout
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
    /// Height direction "x,y,z" (normalized); analyze-mesh accepts it more than once.
    /// Without it a general direction is drawn from the seed.
    #[arg(long, global = true, value_parser = parse_xi, allow_hyphen_values = true)]
    xi: Vec<[f64; 3]>,
    /// Worker threads; results do not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Curvature, curvature parts, Gauss image shape and layers of a star;
    /// index, degree and windings with --xi; Monte Carlo curvature with --samples
    AnalyzeStar { file: PathBuf },
    /// Gauss image of a star, or polar polygon of a spherical polygon, with
    /// its winding layers
    GaussImage {
        file: PathBuf,
        /// Include the arrangement (nodes, segments, faces) for plotting
        #[arg(long)]
        dump_arrangement: bool,
    },
    /// Shape class of the Gauss image of a star
    Classify { file: PathBuf },
    /// Critical point index of a star or polygon at ξ
    Index { file: PathBuf },
    /// Normal degree and winding numbers of a star or polygon at ξ
    Degree { file: PathBuf },
    /// Chord diagram of a simple polygon (or the projection of a star) at an admissible ξ
    NormalForm { file: PathBuf },
    /// Simple polygon realizing a chord diagram, or an (index, degree) pair at ξ = (0,0,1)
    Realize {
        /// Chord diagram JSON {"r", "pi", ...}
        #[arg(long, conflicts_with_all = ["index", "degree"])]
        diagram: Option<PathBuf>,
        #[arg(long, requires = "degree", allow_hyphen_values = true)]
        index: Option<i64>,
        #[arg(long, requires = "index", allow_hyphen_values = true)]
        degree: Option<i64>,
    },
    /// Per-vertex curvature, shape, index and degree of a closed OFF mesh,
    /// with the Gauss-Bonnet, index-sum and degree-sum identities
    AnalyzeMesh {
        file: PathBuf,
        /// Number of seeded directions when no --xi is given
        #[arg(long, default_value_t = 1)]
        directions: usize,
        /// Require exactly three critical points and check their index and degree
        #[arg(long)]
        three_cp: bool,
    },
    /// Run seeded verification suites
    Verify {
        /// Suite name or "all"
        #[arg(long, default_value = "all")]
        suite: String,
        /// Random cases per suite (fixture cases come on top)
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
}

fn parse_xi(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected \"x,y,z\", got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
    }
    Ok(out)
}

pub enum Failure {
    Usage(String),
    Io(String),
    Lib(gaussmap::Error),
}

impl From<gaussmap::Error> for Failure {
    fn from(e: gaussmap::Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "UsageError",
            Failure::Io(_) => "IoError",
            Failure::Lib(e) => e.code(),
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Io(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }

    fn exit(&self) -> u8 {
        match self {
            Failure::Lib(e) if e.is_validation() => 2,
            _ => 1,
        }
    }
}

/// A report plus the identity checks that failed while building it.
struct Report {
    fields: Map<String, Value>,
    violations: Vec<String>,
}

impl Report {
    fn new(command: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("command".into(), json!(command));
        Report {
            fields,
            violations: Vec::new(),
        }
    }

    fn set(&mut self, key: &str, v: impl serde::Serialize) {
        self.fields
            .insert(key.into(), serde_json::to_value(v).expect("serializable"));
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }

    fn finish(mut self) -> (Value, u8) {
        let ok = self.violations.is_empty();
        self.set("ok", ok);
        let v = std::mem::take(&mut self.violations);
        self.set("violations", v);
        self.set("schema_version", SCHEMA_VERSION);
        (Value::Object(self.fields), if ok { 0 } else { 2 })
    }
}

fn envelope(f: &Failure) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "error": { "code": f.code(), "message": f.message() },
    })
}

struct Ctx {
    seed: u64,
    samples: Option<u64>,
    xis: Vec<UnitVec>,
    jobs: usize,
}

impl Ctx {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn single_xi(&self) -> Result<Option<UnitVec>, Failure> {
        match self.xis.len() {
            0 => Ok(None),
            1 => Ok(Some(self.xis[0])),
            n => Err(Failure::Usage(format!("this command takes one --xi, got {n}"))),
        }
    }

    fn star_xi(&self, s: &VertexStar) -> Result<HeightDirection, Failure> {
        let xi = match self.single_xi()? {
            Some(xi) => xi,
            None => star_direction(&mut self.rng(), s),
        };
        Ok(HeightDirection::certify(xi, s)?)
    }

    fn polygon_xi(&self, w: &SphericalPolygon) -> Result<UnitVec, Failure> {
        Ok(match self.single_xi()? {
            Some(xi) => xi,
            None => sampling::general_direction(&mut self.rng(), w, 1e-6),
        })
    }
}

/// Merge the tagged shape object into the report: "shape" plus its details.
fn put_shape(r: &mut Report, s: &VertexStar) {
    let shape = classify_shape(s).unwrap_or_else(|e| Shape::Unclassified { reason: e.to_string() });
    if let Value::Object(m) = serde_json::to_value(shape).expect("serializable") {
        r.fields.extend(m);
    }
}

fn put_layers(r: &mut Report, p: &LayerProfile) {
    r.set("algebraic_area", p.algebraic_area);
    r.set("C_plus", p.c_plus);
    r.set("C_minus", p.c_minus);
    r.set("chi_plus", p.chi_plus);
    r.set("chi_minus", p.chi_minus);
    r.set("layers_are_disks", p.layers_are_disks());
    r.set("I", p.i_turns);
    r.set("c", p.c_parity);
    r.set("winding_shift", p.shift);
}

fn analyze_star(ctx: &Ctx, s: &VertexStar) -> Result<Report, Failure> {
    let mut r = Report::new("analyze-star");
    let k = angle_deficit(s);
    let parts = curvature_parts(s);
    r.set("valence", s.valence());
    r.set(
        "reflex_faces",
        (0..s.valence())
            .filter(|&f| s.faces()[f].is_reflex())
            .collect::<Vec<_>>(),
    );
    r.set("K", k);
    r.set("K_plus", parts.k_plus);
    r.set("K_minus", parts.k_minus);
    put_shape(&mut r, s);
    let inf = inflection_faces(s)?;
    r.set("inflection_faces", inf.faces());
    r.set("transverse_plane", transverse_plane(s));
    r.set("crossing_count", crossing_count(&project_to_sphere(s)?)?);
    let (_, profile) = star_profile(s)?;
    put_layers(&mut r, &profile);
    let residual = profile.algebraic_area - k;
    r.set("egregium_residual", residual);
    r.check(residual.abs() < AREA_TOL, || {
        format!("algebraic area of the Gauss image differs from K by {residual:e}")
    });
    r.check(profile.i_turns == inf.weighted, || {
        format!(
            "right turns of the Gauss image {} differ from the weighted inflection count {}",
            profile.i_turns, inf.weighted
        )
    });
    if !ctx.xis.is_empty() {
        let hd = ctx.star_xi(s)?;
        put_index_degree(&mut r, s, &hd)?;
    }
    if let Some(n) = ctx.samples {
        let mc = curvature_by_index_integration_jobs(s, n, ctx.seed, ctx.jobs);
        let z = if mc.std_error > 0.0 {
            (mc.estimate - k) / mc.std_error
        } else {
            0.0
        };
        let mut v = serde_json::to_value(mc).expect("serializable");
        v["z"] = json!(z);
        r.set("monte_carlo", v);
    }
    Ok(r)
}

fn put_index_degree(r: &mut Report, s: &VertexStar, hd: &HeightDirection) -> Result<(), Failure> {
    let idx = middle_vertex_index(s, &hd.xi)?;
    let deg = star_degree(s, &hd.xi)?;
    r.set("xi", hd.xi);
    r.set("generality_margin", hd.generality_margin);
    r.set("index", idx.above_index);
    r.set("M", idx.middle_count);
    r.check(idx.agrees, || {
        format!(
            "above index {} differs from 1 − M/2 with M = {}",
            idx.above_index, idx.middle_count
        )
    });
    r.set("degree", deg.degree);
    r.set("gamma_longitude", deg.gamma_longitude);
    r.set("w_plus", deg.w_plus);
    r.set("w_minus", deg.w_minus);
    Ok(())
}

fn gauss_image_cmd(inp: &Input, dump: bool) -> Result<Report, Failure> {
    let mut r = Report::new("gauss-image");
    let (image, (arr, profile)) = match inp {
        Input::Star(s) => (gauss_image(s)?, star_profile(s)?),
        Input::Polygon(w) => {
            let wp = polar_polygon(w)?;
            let prof = polygon_profile(&wp)?;
            (wp, prof)
        }
        other => return Err(wrong_kind(other, "a star or polygon")),
    };
    r.set("input", inp.kind());
    r.set("gauss_image", &image);
    put_layers(&mut r, &profile);
    r.set("arrangement_faces", arr.faces().len());
    r.set("area_residual", arr.area_residual());
    if dump {
        r.set("arrangement", arrangement_json(&arr, Some(&profile)));
    }
    Ok(r)
}

fn classify_cmd(s: &VertexStar) -> Result<Report, Failure> {
    let mut r = Report::new("classify");
    put_shape(&mut r, s);
    let inf = inflection_faces(s)?;
    r.set("inflection_faces", inf.faces());
    r.set("I", inf.weighted);
    r.set(
        "reflex_faces",
        (0..s.valence())
            .filter(|&f| s.faces()[f].is_reflex())
            .collect::<Vec<_>>(),
    );
    r.set("K", angle_deficit(s));
    Ok(r)
}

fn index_cmd(ctx: &Ctx, inp: &Input) -> Result<Report, Failure> {
    let mut r = Report::new("index");
    r.set("input", inp.kind());
    match inp {
        Input::Star(s) => {
            let hd = ctx.star_xi(s)?;
            let idx = middle_vertex_index(s, &hd.xi)?;
            r.set("xi", hd.xi);
            r.set("generality_margin", hd.generality_margin);
            r.set("index", idx.above_index);
            r.set("M", idx.middle_count);
            r.check(idx.agrees, || {
                format!(
                    "above index {} differs from 1 − M/2 with M = {}",
                    idx.above_index, idx.middle_count
                )
            });
        }
        Input::Polygon(w) => {
            let xi = ctx.polygon_xi(w)?;
            r.set("xi", xi);
            r.set("index", polygon_index(w, &xi)?);
        }
        other => return Err(wrong_kind(other, "a star or polygon")),
    }
    Ok(r)
}

fn degree_cmd(ctx: &Ctx, inp: &Input) -> Result<Report, Failure> {
    let mut r = Report::new("degree");
    r.set("input", inp.kind());
    let (xi, rep, w) = match inp {
        Input::Star(s) => {
            let hd = ctx.star_xi(s)?;
            (hd.xi, star_degree(s, &hd.xi)?, None)
        }
        Input::Polygon(w) => {
            let xi = ctx.polygon_xi(w)?;
            (xi, degree_identities(w, &xi)?, Some(w))
        }
        other => return Err(wrong_kind(other, "a star or polygon")),
    };
    r.set("xi", xi);
    r.set("degree", rep.degree);
    r.set("index", rep.index);
    r.set("w_plus", rep.w_plus);
    r.set("w_minus", rep.w_minus);
    r.set("c", rep.c_parity);
    r.set("gamma_longitude", rep.gamma_longitude);
    if let Some(w) = w {
        let longitudes: Vec<f64> = (0..8).map(|k| 0.3 + k as f64 * TAU / 8.0).collect();
        let same = degree_independence_check(w, &xi, &longitudes);
        r.set("meridian_independent", same);
        r.check(same, || "degree depends on the half meridian".into());
    }
    Ok(r)
}

fn admissible_xi(ctx: &Ctx, w: &SphericalPolygon) -> Result<UnitVec, Failure> {
    if let Some(xi) = ctx.single_xi()? {
        return Ok(xi);
    }
    let mut rng = ctx.rng();
    for _ in 0..1000 {
        let xi = sampling::general_direction(&mut rng, w, 1e-6);
        if is_admissible(&xi, w) {
            return Ok(xi);
        }
    }
    Err(gaussmap::Error::NotAdmissible.into())
}

fn put_diagram(r: &mut Report, d: &ChordDiagram) -> Result<(i64, i64), Failure> {
    let free = free_chords(d, Hemisphere::Upper);
    r.set("diagram", d);
    r.set("free_upper_chords", &free);
    match free.first() {
        Some(&anchor) => {
            let signs = chord_signs(d, anchor)?;
            r.set("anchor", anchor);
            r.set("N_plus", signs.n_plus);
            r.set("N_minus", signs.n_minus);
        }
        None => r.set("anchor", Value::Null),
    }
    let (i, deg) = if d.r() == 0 { (1, 0) } else { diagram_index_degree(d)? };
    r.set("diagram_index", i);
    if d.r() > 0 {
        r.set("diagram_degree", deg);
    }
    Ok((i, deg))
}

fn normal_form_cmd(ctx: &Ctx, inp: &Input) -> Result<Report, Failure> {
    let mut r = Report::new("normal-form");
    r.set("input", inp.kind());
    let w = match inp {
        Input::Star(s) => project_to_sphere(s)?,
        Input::Polygon(w) => w.clone(),
        other => return Err(wrong_kind(other, "a star or polygon")),
    };
    let xi = admissible_xi(ctx, &w)?;
    let d = extract_diagram(&w, &xi)?;
    r.set("xi", xi);
    let (i, deg) = put_diagram(&mut r, &d)?;
    let gi = polygon_index(&w, &xi)?;
    let gd = normal_degree(&w, &xi, 0.0)?;
    r.set("index", gi);
    r.set("degree", gd);
    r.check(gi == i, || {
        format!("diagram index {i} differs from the polygon index {gi}")
    });
    // without chords the diagram fixes only |d| = 1
    let agrees = if d.r() == 0 { gd.abs() == 1 } else { gd == deg };
    r.check(agrees, || {
        format!("diagram degree {deg} differs from the normal degree {gd}")
    });
    Ok(r)
}

fn measure(r: &mut Report, w: &SphericalPolygon) -> Result<(i64, i64), Failure> {
    let xi = UnitVec::Z;
    let i = polygon_index(w, &xi)?;
    let d = normal_degree(w, &xi, 0.0)?;
    r.set("polygon", w);
    r.set("xi", xi);
    r.set("crossing_count", crossing_count(w)?);
    r.set("index", i);
    r.set("degree", d);
    Ok((i, d))
}

fn realize_cmd(diagram: Option<&Path>, pair: Option<(i64, i64)>) -> Result<Report, Failure> {
    let mut r = Report::new("realize");
    match (diagram, pair) {
        (Some(path), None) => {
            let d = match read_input(path)? {
                Input::Diagram(d) => d,
                other => return Err(wrong_kind(&other, "a chord diagram")),
            };
            let (i, deg) = put_diagram(&mut r, &d)?;
            let w = realize_diagram(&d)?;
            let (mi, md) = measure(&mut r, &w)?;
            r.check(mi == i, || format!("realized index {mi}, diagram says {i}"));
            let agrees = if d.r() == 0 { md.abs() == 1 } else { md == deg };
            r.check(agrees, || format!("realized degree {md}, diagram says {deg}"));
        }
        (None, Some((i, d))) => {
            let w = realize_index_degree(i, d)?;
            r.set("requested_index", i);
            r.set("requested_degree", d);
            let (mi, md) = measure(&mut r, &w)?;
            r.check((mi, md) == (i, d), || {
                format!("realized (i, d) = ({mi}, {md}), requested ({i}, {d})")
            });
        }
        _ => {
            return Err(Failure::Usage(
                "realize needs --diagram FILE or --index I --degree D".into(),
            ))
        }
    }
    Ok(r)
}

fn analyze_mesh_cmd(ctx: &Ctx, path: &Path, directions: usize, three_cp: bool) -> Result<Report, Failure> {
    let m = load_off(path)?;
    let xis = if ctx.xis.is_empty() {
        let mut rng = ctx.rng();
        (0..directions)
            .map(|_| general_direction(&m, &mut rng))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        ctx.xis.clone()
    };
    let rep = analyze_mesh(&m, &xis, ctx.jobs)?;
    let mut census = Vec::with_capacity(xis.len());
    for xi in &xis {
        census.push(critical_point_census(&m, xi)?);
    }
    let mut r = Report::new("analyze-mesh");
    if let Value::Object(fields) = serde_json::to_value(&rep).expect("serializable") {
        r.fields.extend(fields);
    }
    r.set("critical_points", &census);
    r.check(rep.gauss_bonnet_residual.abs() < GAUSS_BONNET_TOL, || {
        format!("total curvature differs from 2πχ by {:e}", rep.gauss_bonnet_residual)
    });
    for (j, (&is, &ds)) in rep.index_sums.iter().zip(&rep.degree_sums).enumerate() {
        r.check(is == rep.chi, || {
            format!("direction {j}: index sum {is} but χ = {}", rep.chi)
        });
        r.check(ds == 0, || format!("direction {j}: degree sum {ds}"));
    }
    if three_cp {
        let verdicts = xis
            .iter()
            .map(|xi| three_cp_analysis(&m, xi))
            .collect::<Result<Vec<_>, _>>()?;
        r.set("three_critical_points", verdicts);
    }
    Ok(r)
}

fn verify_cmd(ctx: &Ctx, suite: &str, n: usize) -> Result<Report, Failure> {
    let mut r = Report::new("verify");
    if suite == "all" {
        let reports: Vec<_> = Suite::ALL
            .iter()
            .map(|&s| run_suite(s, n, ctx.seed, ctx.jobs))
            .collect();
        for rep in &reports {
            r.check(rep.ok(), || {
                format!(
                    "{}: {} of {} cases failed",
                    rep.suite.name(),
                    rep.failed,
                    rep.passed + rep.failed
                )
            });
        }
        r.set("passed", reports.iter().map(|x| x.passed).sum::<usize>());
        r.set("failed", reports.iter().map(|x| x.failed).sum::<usize>());
        r.set("suites", reports);
    } else {
        let s: Suite = suite
            .parse()
            .map_err(|e: gaussmap::Error| Failure::Usage(e.to_string()))?;
        let rep = run_suite(s, n, ctx.seed, ctx.jobs);
        r.check(rep.ok(), || {
            format!(
                "{}: {} of {} cases failed",
                s.name(),
                rep.failed,
                rep.passed + rep.failed
            )
        });
        if let Value::Object(fields) = serde_json::to_value(&rep).expect("serializable") {
            r.fields.extend(fields);
        }
    }
    Ok(r)
}

fn need_star(inp: Input) -> Result<VertexStar, Failure> {
    match inp {
        Input::Star(s) => Ok(s),
        other => Err(wrong_kind(&other, "a vertex star")),
    }
}

fn run(cli: Cli) -> Result<Report, Failure> {
    let xis = cli
        .common
        .xi
        .iter()
        .map(|a| UnitVec::try_from(*a))
        .collect::<Result<Vec<_>, _>>()?;
    let ctx = Ctx {
        seed: cli.common.seed,
        samples: cli.common.samples,
        xis,
        jobs: cli.common.jobs.max(1),
    };
    match cli.command {
        Command::AnalyzeStar { file } => analyze_star(&ctx, &need_star(read_input(&file)?)?),
        Command::GaussImage { file, dump_arrangement } => gauss_image_cmd(&read_input(&file)?, dump_arrangement),
        Command::Classify { file } => classify_cmd(&need_star(read_input(&file)?)?),
        Command::Index { file } => index_cmd(&ctx, &read_input(&file)?),
        Command::Degree { file } => degree_cmd(&ctx, &read_input(&file)?),
        Command::NormalForm { file } => normal_form_cmd(&ctx, &read_input(&file)?),
        Command::Realize { diagram, index, degree } => realize_cmd(diagram.as_deref(), index.zip(degree)),
        Command::AnalyzeMesh {
            file,
            directions,
            three_cp,
        } => analyze_mesh_cmd(&ctx, &file, directions, three_cp),
        Command::Verify { suite, n } => verify_cmd(&ctx, &suite, n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            let text = e.render().to_string();
            let first = text
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            let f = Failure::Usage(first.to_string());
            println!("{}", output::render(&envelope(&f), false));
            return ExitCode::from(1);
        }
    };
    let pretty = cli.common.output == OutputFormat::Pretty;
    match run(cli) {
        Ok(report) => {
            let (v, code) = report.finish();
            println!("{}", output::render(&v, pretty));
            ExitCode::from(code)
        }
        Err(f) => {
            println!("{}", output::render(&envelope(&f), pretty));
            ExitCode::from(f.exit())
        }
    }
}
