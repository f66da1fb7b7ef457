use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::{json, Value};

use morselab_core::automata::{self, Automaton};
use morselab_core::cayley::{build_ball, snapshot, BallOptions, CayleyBall, GeodesicPath, SmallCancellationGroup, VertexId};
use morselab_core::diagrams::{self, DiskDiagram, SearchOptions};
use morselab_core::metrics::{contraction_constant, intersection_function};
use morselab_core::mltg::{self, audit_aux_path, build_aux_path};
use morselab_core::rational::{parse_q, Q};
use morselab_core::smallcancel::{self, FunctionSample, SymmetrizedClosure};
use morselab_core::walks::{self, Step, StepMeasure};
use morselab_core::{parse_presentation, Exec, Presentation, Word};

use crate::artifact::{sha256_hex, Outcome, Table};
use crate::error::CliError;
use crate::{BallSource, Command, DiagramAction, FsaAction, MltgAction};

pub struct Ctx {
    pub seed: u64,
    pub budget_mb: usize,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pieces { .. } => "pieces",
            Command::Check { .. } => "check",
            Command::Ball { .. } => "ball",
            Command::Dist { .. } => "dist",
            Command::Geo { .. } => "geo",
            Command::Rho { .. } => "rho",
            Command::Contraction { .. } => "contraction",
            Command::Diagram { action: DiagramAction::Check { .. } } => "diagram-check",
            Command::Diagram { action: DiagramAction::Classify { .. } } => "diagram-classify",
            Command::Diagram { action: DiagramAction::Search { .. } } => "diagram-search",
            Command::Mltg { action: MltgAction::Sweep { .. } } => "mltg-sweep",
            Command::Auxpath { .. } => "auxpath",
            Command::Fsa { action: FsaAction::Build { .. } } => "fsa-build",
            Command::Fsa { action: FsaAction::Count { .. } } => "fsa-count",
            Command::Fsa { action: FsaAction::Check { .. } } => "fsa-check",
            Command::Walk { .. } => "walk",
            Command::Qab { .. } => "qab",
        }
    }

    /// Files whose contents enter the config hash.
    pub fn inputs(&self) -> Vec<PathBuf> {
        let src = |b: &BallSource| b.file.iter().chain(&b.snapshot).cloned().collect::<Vec<_>>();
        match self {
            Command::Pieces { file } | Command::Ball { file, .. } | Command::Rho { file, .. } => vec![file.clone()],
            Command::Check { file, f, .. } => std::iter::once(file).chain(f).cloned().collect(),
            Command::Dist { ball, .. }
            | Command::Geo { ball, .. }
            | Command::Contraction { ball, .. }
            | Command::Auxpath { ball, .. }
            | Command::Qab { ball, .. }
            | Command::Mltg { action: MltgAction::Sweep { ball, .. } } => src(ball),
            Command::Walk { ball, mu, .. } => src(ball).into_iter().chain([mu.clone()]).collect(),
            Command::Diagram { action } => match action {
                DiagramAction::Check { diagram, presentation } => std::iter::once(diagram).chain(presentation).cloned().collect(),
                DiagramAction::Classify { diagram } => vec![diagram.clone()],
                DiagramAction::Search { file, .. } => vec![file.clone()],
            },
            Command::Fsa { action } => match action {
                FsaAction::Build { file, .. } => vec![file.clone()],
                FsaAction::Count { automaton, .. } => vec![automaton.clone()],
                FsaAction::Check { automaton, presentation, .. } => vec![automaton.clone(), presentation.clone()],
            },
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn load_presentation(path: &Path) -> Result<Presentation, CliError> {
    Ok(parse_presentation(&read(path)?)?)
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    Ok(serde_json::from_str(&read(path)?)?)
}

fn build(p: Presentation, radius: usize, budget_mb: usize) -> Result<CayleyBall, CliError> {
    let letters = p.alphabet().size();
    let g = SmallCancellationGroup::new(p)?;
    let opts = BallOptions::default().with_budget_mb(budget_mb, letters);
    Ok(build_ball(&g, radius, &opts)?)
}

fn load_ball(src: &BallSource, ctx: &Ctx) -> Result<CayleyBall, CliError> {
    match (&src.snapshot, &src.file) {
        (Some(s), _) => {
            let f = fs::File::open(s).map_err(|e| CliError::io(s, e))?;
            snapshot::read_ball(std::io::BufReader::new(f)).map_err(|e| CliError::io(s, e))
        }
        (None, Some(file)) => build(load_presentation(file)?, src.radius, ctx.budget_mb),
        (None, None) => Err(CliError::Usage("a presentation file or --snapshot is required".into())),
    }
}

fn word(p: &Presentation, s: &str) -> Result<Word, CliError> {
    Ok(p.parse_word(s)?)
}

fn vertex(ball: &CayleyBall, s: &str) -> Result<VertexId, CliError> {
    let w = word(ball.presentation(), s)?;
    ball.vertex_of(&w).ok_or_else(|| CliError::Input(format!("{s:?} leaves the ball of radius {}", ball.radius())))
}

fn constant(c: i64, domain: usize) -> FunctionSample {
    FunctionSample::constant(Q::from_integer(c), domain.max(1))
}

pub fn dispatch(cmd: &Command, ctx: &Ctx) -> Result<Outcome, CliError> {
    match cmd {
        Command::Pieces { file } => pieces(&load_presentation(file)?),
        Command::Check { file, lambda, f } => check(&load_presentation(file)?, lambda.as_deref(), f.as_deref()),
        Command::Ball { file, radius, snapshot } => ball(file, *radius, snapshot.as_deref(), ctx),
        Command::Dist { ball, from, to } => {
            let b = load_ball(ball, ctx)?;
            let (x, y) = (vertex(&b, from)?, vertex(&b, to)?);
            Outcome::json(json!({ "from": from, "to": to, "distance": b.distance(x, y)? }))
        }
        Command::Geo { ball, from, to } => {
            let b = load_ball(ball, ctx)?;
            let g = b.geodesic(vertex(&b, from)?, vertex(&b, to)?)?;
            let p = b.presentation();
            let mut t = Table::new(vec!["index", "vertex", "normal_form"]);
            for (i, &v) in g.vertices.iter().enumerate() {
                t.push(vec![i.to_string(), v.to_string(), p.format_word(&b.normal_form(v))]);
            }
            Ok(Outcome::json(json!({ "from": from, "to": to, "length": g.len(), "word": p.format_word(&g.word) }))?.with_table(t))
        }
        Command::Rho { file, path, tmax } => rho(&load_presentation(file)?, path, *tmax),
        Command::Contraction { ball, geodesic } => {
            let b = load_ball(ball, ctx)?;
            let w = word(b.presentation(), geodesic)?;
            let g = GeodesicPath::from_word(&b, b.identity(), &w)
                .ok_or_else(|| CliError::Input(format!("{geodesic:?} leaves the ball")))?;
            if !b.is_geodesic_word(&w) {
                return Err(CliError::Input(format!("{geodesic:?} is not geodesic")));
            }
            Outcome::json(contraction_constant(&b, &g, Exec::Parallel)?)
        }
        Command::Diagram { action } => diagram(action),
        Command::Mltg { action: MltgAction::Sweep { ball, scales, len, q, bound, budget } } => {
            let b = load_ball(ball, ctx)?;
            let scales = parse_scales(scales)?;
            let f = constant(*bound, b.presentation().max_relator_len());
            let rows = mltg::sweep(&b, *q, &f, &scales, *len, *budget, Exec::Parallel)?;
            let mut t = Table::new(vec!["L", "words", "truncated", "loops", "max_q_prime", "max_rho", "max_hausdorff"]);
            for r in &rows {
                t.push(vec![
                    r.l.to_string(),
                    r.words.to_string(),
                    r.truncated.to_string(),
                    r.loops.to_string(),
                    r.max_q_prime.map_or("inf".into(), |q| q.to_string()),
                    r.max_rho.to_string(),
                    r.max_hausdorff.to_string(),
                ]);
            }
            Ok(Outcome::json(json!({ "radius": b.radius(), "length": len, "rows": rows }))?.with_table(t))
        }
        Command::Auxpath { ball, gamma, scale } => {
            let b = load_ball(ball, ctx)?;
            let p = b.presentation().clone();
            let ap = build_aux_path(&b, &p, &word(&p, gamma)?, *scale)?;
            let audit = audit_aux_path(&ap, &p, &b)?;
            Outcome::json(json!({ "word": p.format_word(&ap.path.word), "aux_path": ap, "audit": audit }))
        }
        Command::Fsa { action } => fsa(action, ctx),
        Command::Walk { ball, mu, steps, count, k, exact, bound } => walk(ball, mu, *steps, *count, *k, *exact, *bound, ctx),
        Command::Qab { ball, gamma, beta, blocks } => {
            let b = load_ball(ball, ctx)?;
            qab(&b, gamma, beta, *blocks)
        }
    }
}

fn pieces(p: &Presentation) -> Result<Outcome, CliError> {
    let closure = SymmetrizedClosure::new(p);
    let table = smallcancel::pieces(p, &closure);
    let mut t = Table::new(vec!["relator", "relator_len", "max_piece_len", "piece"]);
    let mut rows = Vec::new();
    for r in &table.rows {
        let piece = r
            .witness
            .as_ref()
            .map(|w| p.format_word(&Word(closure.members()[w.member].word.0[..w.len].to_vec())))
            .unwrap_or_default();
        t.push(vec![r.relator.to_string(), r.relator_len.to_string(), r.max_piece_len.to_string(), piece.clone()]);
        rows.push(json!({ "row": r, "piece": piece }));
    }
    Ok(Outcome::json(json!({ "relators": rows }))?.with_table(t))
}

fn read_function(path: &Path) -> Result<FunctionSample, CliError> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_path(path)?;
    let mut values = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let t: usize = rec.get(0).and_then(|s| s.trim().parse().ok()).ok_or_else(|| CliError::Input(format!("row {}: bad t", i + 1)))?;
        if t != i + 1 {
            return Err(CliError::Input(format!("row {}: expected t = {}, found {t}", i + 1, i + 1)));
        }
        values.push(parse_q(rec.get(1).unwrap_or("").trim())?);
    }
    Ok(FunctionSample::from_values(values))
}

fn check(p: &Presentation, lambda: Option<&str>, f: Option<&Path>) -> Result<Outcome, CliError> {
    let (report, extra) = match (lambda, f) {
        (Some(l), _) => (smallcancel::check_cprime_lambda(p, parse_q(l)?), Value::Null),
        (None, Some(path)) => {
            let r = smallcancel::check_cprime_f(p, &read_function(path)?)?;
            (r.report, serde_json::to_value(&r.induced_bound)?)
        }
        (None, None) => return Err(CliError::Usage("--lambda or --f is required".into())),
    };
    let witness = report.witness.as_ref().map(|w| {
        json!({
            "relator": w.relator,
            "relator_word": p.format_word(&w.relator_word),
            "piece": p.format_word(&w.piece),
            "piece_len": w.piece_len,
            "relator_len": w.relator_len,
        })
    });
    let mut result = json!({ "verdict": report.verdict, "witness": witness });
    if !extra.is_null() {
        result["induced_bound"] = extra;
    }
    let mut out = Outcome::json(result)?;
    out.passed = Some(report.verdict.passed());
    Ok(out)
}

fn ball(file: &Path, radius: usize, snap: Option<&Path>, ctx: &Ctx) -> Result<Outcome, CliError> {
    let b = build(load_presentation(file)?, radius, ctx.budget_mb)?;
    let sizes = b.sphere_sizes();
    let mut t = Table::new(vec!["n", "sphere", "ball"]);
    let mut total = 0;
    for (n, s) in sizes.iter().enumerate() {
        total += s;
        t.push(vec![n.to_string(), s.to_string(), total.to_string()]);
    }
    let mut result = json!({ "radius": radius, "vertices": b.len(), "sphere_sizes": sizes });
    if let Some(path) = snap {
        let mut bytes = Vec::new();
        snapshot::write_ball(&b, &mut bytes).map_err(|e| CliError::io(path, e))?;
        fs::write(path, &bytes).map_err(|e| CliError::io(path, e))?;
        result["snapshot_sha256"] = json!(sha256_hex(&bytes));
    }
    Ok(Outcome::json(result)?.with_table(t))
}

fn rho(p: &Presentation, path: &str, tmax: Option<usize>) -> Result<Outcome, CliError> {
    let w = word(p, path)?;
    let tmax = tmax.unwrap_or(p.max_relator_len()).max(1);
    let prof = intersection_function(p, &w, tmax);
    let mut t = Table::new(vec!["t", "rho", "subword", "member", "path_start"]);
    for s in 1..=tmax {
        let (sub, member, start) = match &prof.witnesses[s - 1] {
            Some(x) => (p.format_word(&x.subword), p.format_word(&x.member), x.path_start.to_string()),
            None => Default::default(),
        };
        t.push(vec![s.to_string(), prof.at(s).to_string(), sub, member, start]);
    }
    Ok(Outcome::json(json!({ "path": path, "profile": prof }))?.with_table(t))
}

fn diagram(action: &DiagramAction) -> Result<Outcome, CliError> {
    match action {
        DiagramAction::Check { diagram, presentation } => {
            let d: DiskDiagram = load_json(diagram)?;
            let p = presentation.as_deref().map(load_presentation).transpose()?;
            let v = diagrams::validate_diagram(&d, p.as_ref())?;
            let mut out = Outcome::json(&v)?;
            out.passed = Some(v.verdict.passed());
            Ok(out)
        }
        DiagramAction::Classify { diagram } => {
            let d: DiskDiagram = load_json(diagram)?;
            Outcome::json(json!({ "shape": diagrams::classify_bigon(&d)? }))
        }
        DiagramAction::Search { file, boundary, max_faces } => {
            let p = load_presentation(file)?;
            let opts = SearchOptions { max_faces: *max_faces, ..SearchOptions::default() };
            let found = diagrams::search_small_diagrams(&p, &word(&p, boundary)?, &opts)?;
            let minimal = diagrams::minimal_area(&found).into_iter().cloned().collect::<Vec<_>>();
            Outcome::json(json!({ "boundary": boundary, "count": found.len(), "diagrams": found, "minimal": minimal }))
        }
    }
}

fn fsa(action: &FsaAction, ctx: &Ctx) -> Result<Outcome, CliError> {
    match action {
        FsaAction::Build { file, radius, horizon, window, bound, max_states } => {
            let b = build(load_presentation(file)?, *radius, ctx.budget_mb)?;
            let p = b.presentation();
            let g = automata::geodesic_automaton(&b, *horizon)?;
            let mut result = json!({ "geodesic": g });
            let mut final_automaton = g.automaton.clone();
            if let Some(l) = window {
                let f = constant(*bound, p.max_relator_len());
                let w = automata::window_product(&g.automaton, p, *l, &f, *max_states)?;
                final_automaton = w.automaton.clone();
                result["window"] = serde_json::to_value(&w)?;
                result["bound"] = json!(bound);
            }
            let mut out = Outcome::json(result)?;
            out.files.push(("automaton.json".into(), serde_json::to_vec_pretty(&final_automaton)?));
            out.files.push(("automaton.dot".into(), final_automaton.to_dot(p.alphabet()).into_bytes()));
            Ok(out)
        }
        FsaAction::Count { automaton, n } => {
            let a: Automaton = load_json(automaton)?;
            let report = automata::count_accepted(&a, *n);
            let mut t = Table::new(vec!["n", "count"]);
            for (i, c) in report.counts.iter().enumerate() {
                t.push(vec![i.to_string(), c.to_string()]);
            }
            Ok(Outcome::json(&report)?.with_table(t))
        }
        FsaAction::Check { automaton, presentation, word: w } => {
            let a: Automaton = load_json(automaton)?;
            let p = load_presentation(presentation)?;
            let accepted = automata::accepts(&a, &word(&p, w)?).map_err(CliError::Automaton)?;
            Outcome::json(json!({ "word": w, "accepted": accepted }))
        }
    }
}

#[derive(Deserialize)]
struct MuFile {
    support: Vec<MuStep>,
    #[serde(default)]
    generating: bool,
}

#[derive(Deserialize)]
struct MuStep {
    word: String,
    probability: String,
}

#[allow(clippy::too_many_arguments)]
fn walk(
    src: &BallSource,
    mu: &Path,
    steps: usize,
    count: u64,
    k: usize,
    exact: bool,
    bound: Option<i64>,
    ctx: &Ctx,
) -> Result<Outcome, CliError> {
    let b = load_ball(src, ctx)?;
    let p = b.presentation();
    let spec: MuFile = load_json(mu)?;
    let support = spec
        .support
        .iter()
        .map(|s| Ok(Step { word: word(p, &s.word)?, probability: parse_q(&s.probability)? }))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mu = StepMeasure::new(support, ctx.seed, spec.generating)?;
    let report = walks::sample_walks(&b, &mu, k, steps, count, Exec::Parallel)?;
    let nu = report.measure.to_measure();
    let mut result = json!({
        "k": k,
        "steps": steps,
        "count": count,
        "exited": report.measure.exited,
        "unexited": report.unexited,
        "exit_steps": report.exit_steps,
        "counts": report.measure.counts,
    });
    if report.measure.exited > 0 {
        let d = walks::stationarity_defect(&b, &nu, &mu)?;
        result["defect"] = json!({
            "value": d.defect.to_string(),
            "approx": d.defect_f64(),
            "classified": d.classified,
            "excluded": d.excluded,
            "excluded_mass": d.excluded_mass.to_string(),
        });
        if let Some(c) = bound {
            let f = constant(c, p.max_relator_len());
            result["morse_frequency"] = json!(walks::morse_direction_frequency(&b, &nu, &f).to_string());
        }
    }
    let law = if exact { Some(walks::exact_exit_measure(&b, &mu, k, 200_000)?) } else { None };
    if let Some(law) = &law {
        let d = walks::stationarity_defect(&b, law, &mu)?;
        result["exact_defect"] = json!(d.defect.to_string());
    }
    let mut header = vec!["vertex", "normal_form", "count", "frequency"];
    if law.is_some() {
        header.push("exact");
    }
    let mut t = Table::new(header);
    for v in b.sphere(k) {
        let mut row = vec![
            v.to_string(),
            p.format_word(&b.normal_form(v)),
            report.measure.counts.get(&v).copied().unwrap_or(0).to_string(),
            nu.at(v).to_string(),
        ];
        if let Some(law) = &law {
            row.push(law.at(v).to_string());
        }
        t.push(row);
    }
    Ok(Outcome::json(result)?.with_table(t))
}

fn qab(b: &CayleyBall, gamma: &str, beta: &str, blocks: usize) -> Result<Outcome, CliError> {
    let p = b.presentation();
    let geo = |s: &str| -> Result<GeodesicPath, CliError> {
        let w = word(p, s)?;
        if !b.is_geodesic_word(&w) {
            return Err(CliError::Input(format!("{s:?} is not geodesic")));
        }
        GeodesicPath::from_word(b, b.identity(), &w).ok_or_else(|| CliError::Input(format!("{s:?} leaves the ball")))
    };
    let q = walks::build_qab(b, &geo(gamma)?, &geo(beta)?, blocks)?;
    let projections = q.block_projections(b, Exec::Parallel)?;
    let gammas: Vec<_> = q.segments.iter().filter(|s| s.kind == walks::SegmentKind::Gamma).collect();
    let mut separation = Vec::new();
    for pair in gammas.windows(2) {
        separation.push(json!({ "from": pair[0].index, "to": pair[1].index, "distance": q.segment_distance(b, pair[0], pair[1])? }));
    }
    let mut t = Table::new(vec!["block", "projection_diameter"]);
    for r in &projections {
        t.push(vec![r.block.to_string(), r.diameter.to_string()]);
    }
    Ok(Outcome::json(json!({
        "word": p.format_word(&q.path.word),
        "path": q,
        "projections": projections,
        "separation": separation,
    }))?
    .with_table(t))
}

fn parse_scales(s: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Input(format!("bad scale range {s:?}"));
    match s.split_once("..") {
        Some((a, b)) => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a == 0 || a > b {
                return Err(bad());
            }
            Ok((a..=b).collect())
        }
        None => Ok(vec![s.trim().parse().map_err(|_| bad())?]),
    }
}
