//! Subcommand implementations over a resolved session: an algebra, a table
//! of named modules, and a seed. Check-style subcommands set a verdict that
//! drives the exit code; computation-style subcommands always pass unless
//! the computation itself is impossible.

use crate::expr;
use crate::report::{cache_load, cache_store, content_key, dims_json, dims_text, Report};
use serde_json::{json, Value};
use stabmod::gmod::{joker, random_module, schema as module_schema, unit_module};
use stabmod::hopf::schema as algebra_schema;
use stabmod::localize::{
    build_local_unit, glue, localize, mv_check, postnikov, restriction_datum,
    windowed_stably_iso, Side, Window,
};
use stabmod::margolis::{is_free, margolis_homology};
use stabmod::picard::{detection_check, is_invertible, local_invariant, PicElement};
use stabmod::spectrum::{a1_membership, is_cover, support_profile};
use stabmod::stable::{omega, omega_inv, resolve, stable_ext, strip_free};
use stabmod::{AlgebraRef, GradedModule};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// Everything a run needs, resolved from flags and the environment.
pub struct RunConfig {
    pub command: Command,
    pub preset: Option<String>,
    pub algebra_file: Option<PathBuf>,
    pub module_files: Vec<PathBuf>,
    pub seed: u64,
    pub json_output: bool,
    pub threads: usize,
    pub cache_dir: Option<PathBuf>,
}

/// The parsed subcommand with its own arguments.
#[derive(Debug, Clone)]
pub enum Command {
    Validate,
    Margolis { expr: String },
    FreeCheck { expr: String },
    Strip { expr: String },
    Omega { expr: String, power: i64 },
    Ext { source: String, target: String, s_range: (i64, i64), window: (i64, i64) },
    Tensor { left: String, right: String },
    Dual { expr: String },
    Support { expr: String },
    CoverCheck { cover: Vec<(usize, usize)> },
    Localize { expr: String, segment: (usize, usize), side: Side, window: (i64, i64) },
    Postnikov { expr: String, split: usize, window: (i64, i64) },
    MvCheck { source: String, target: String, cover: Vec<(usize, usize)>, window: (i64, i64) },
    Glue { expr: String, cover: Vec<(usize, usize)>, window: (i64, i64) },
    PicCheck { exprs: Vec<String>, cover: Option<Vec<(usize, usize)>> },
    Resolve { expr: String, stages: usize, t_cut: Option<i64> },
}

/// Failures outside the report flow: `Usage` exits 2, `Fail` exits 1.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Fail(String),
}

use RunError::{Fail, Usage};

/// Execute the config and return the process exit code.
pub fn run(config: &RunConfig) -> i32 {
    match dispatch(config) {
        Ok(report) => {
            report.emit(config.json_output);
            if report.pass {
                0
            } else {
                1
            }
        }
        Err(Usage(msg)) => {
            eprintln!("usage error: {msg}");
            2
        }
        Err(Fail(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn dispatch(config: &RunConfig) -> Result<Report, RunError> {
    if config.threads == 0 {
        return Err(Usage("--threads must be at least 1".into()));
    }
    let session = Session::open(config)?;
    if let Some(dir) = &config.cache_dir {
        if let Some(hit) = cache_load(dir, &session.key) {
            return Ok(hit);
        }
    }
    let mut report = session.execute(&config.command)?;
    report.json["command"] = json!(command_name(&config.command));
    report.json["algebra"] = json!(session.algebra.name());
    report.json["seed"] = json!(config.seed);
    if let Some(dir) = &config.cache_dir {
        cache_store(dir, &session.key, &report);
    }
    Ok(report)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Margolis { .. } => "margolis",
        Command::FreeCheck { .. } => "free-check",
        Command::Strip { .. } => "strip",
        Command::Omega { .. } => "omega",
        Command::Ext { .. } => "ext",
        Command::Tensor { .. } => "tensor",
        Command::Dual { .. } => "dual",
        Command::Support { .. } => "support",
        Command::CoverCheck { .. } => "cover-check",
        Command::Localize { .. } => "localize",
        Command::Postnikov { .. } => "postnikov",
        Command::MvCheck { .. } => "mv-check",
        Command::Glue { .. } => "glue",
        Command::PicCheck { .. } => "pic-check",
        Command::Resolve { .. } => "resolve",
    }
}

const RESERVED: [&str; 6] = ["unit", "joker", "J", "rand", "S", "O"];

struct Session {
    algebra: AlgebraRef,
    env: BTreeMap<String, GradedModule>,
    key: String,
}

impl Session {
    /// Load the algebra and the named module table, and derive the cache key
    /// from everything that determines the report.
    fn open(config: &RunConfig) -> Result<Session, RunError> {
        let mut key_parts: Vec<String> = vec![
            env!("CARGO_PKG_VERSION").to_string(),
            format!("{:?}", config.command),
            config.seed.to_string(),
        ];
        let algebra: AlgebraRef = match (&config.preset, &config.algebra_file) {
            (Some(name), None) => {
                key_parts.push(format!("preset:{name}"));
                stabmod::preset(name).map_err(|e| Usage(format!("preset '{name}': {e}")))?
            }
            (None, Some(path)) => {
                let raw = std::fs::read_to_string(path)
                    .map_err(|e| Usage(format!("reading {}: {e}", path.display())))?;
                key_parts.push(format!("algebra:{raw}"));
                let alg = algebra_schema::from_json(&raw)
                    .map_err(|e| Usage(format!("algebra {}: {e}", path.display())))?;
                AlgebraRef::new(alg)
            }
            (None, None) => return Err(Usage("choose an algebra: --preset or --algebra".into())),
            (Some(_), Some(_)) => {
                return Err(Usage("--preset and --algebra are mutually exclusive".into()))
            }
        };
        let mut env = BTreeMap::new();
        env.insert("unit".to_string(), unit_module(&algebra));
        if algebra.name() == "A1" {
            env.insert("joker".to_string(), joker());
            env.insert("J".to_string(), joker());
        }
        env.insert("rand".to_string(), random_module(&algebra, config.seed));
        for path in &config.module_files {
            let stem = path
                .file_stem()
                .and_then(|s| s.to_str())
                .ok_or_else(|| Usage(format!("no usable file stem in {}", path.display())))?
                .to_string();
            if RESERVED.contains(&stem.as_str()) {
                return Err(Usage(format!("module name '{stem}' is reserved")));
            }
            let raw = std::fs::read_to_string(path)
                .map_err(|e| Usage(format!("reading {}: {e}", path.display())))?;
            key_parts.push(format!("module:{stem}:{raw}"));
            let m = module_schema::from_json(&raw, &algebra)
                .map_err(|e| Usage(format!("module {}: {e}", path.display())))?;
            if env.insert(stem.clone(), m).is_some() {
                return Err(Usage(format!("module name '{stem}' given twice")));
            }
        }
        let parts: Vec<&str> = key_parts.iter().map(String::as_str).collect();
        Ok(Session { algebra, env, key: content_key(&parts) })
    }

    fn eval(&self, text: &str) -> Result<GradedModule, RunError> {
        expr::eval(text, &self.env).map_err(Usage)
    }

    fn execute(&self, command: &Command) -> Result<Report, RunError> {
        match command {
            Command::Validate => self.validate(),
            Command::Margolis { expr } => self.margolis(expr),
            Command::FreeCheck { expr } => self.free_check(expr),
            Command::Strip { expr } => self.strip(expr),
            Command::Omega { expr, power } => self.omega(expr, *power),
            Command::Ext { source, target, s_range, window } => {
                self.ext(source, target, *s_range, *window)
            }
            Command::Tensor { left, right } => self.tensor(left, right),
            Command::Dual { expr } => self.dual(expr),
            Command::Support { expr } => self.support(expr),
            Command::CoverCheck { cover } => self.cover_check(cover),
            Command::Localize { expr, segment, side, window } => {
                self.localize_cmd(expr, *segment, *side, *window)
            }
            Command::Postnikov { expr, split, window } => self.postnikov_cmd(expr, *split, *window),
            Command::MvCheck { source, target, cover, window } => {
                self.mv_check_cmd(source, target, cover, *window)
            }
            Command::Glue { expr, cover, window } => self.glue_cmd(expr, cover, *window),
            Command::PicCheck { exprs, cover } => self.pic_check(exprs, cover.as_deref()),
            Command::Resolve { expr, stages, t_cut } => self.resolve_cmd(expr, *stages, *t_cut),
        }
    }

    fn header(&self, report: &mut Report) {
        let a = &self.algebra;
        report.line(format!(
            "algebra: {} (dimension {}, top degree {}, operations {})",
            a.name(),
            a.dims().iter().sum::<usize>(),
            a.top(),
            a.margolis_count()
        ));
        report.field("dimension", json!(a.dims().iter().sum::<usize>()));
        report.field("top", json!(a.top()));
        report.field("operations", json!(a.margolis_count()));
    }

    fn validate(&self) -> Result<Report, RunError> {
        let mut report = Report::new();
        self.header(&mut report);
        let v = self.algebra.validate();
        let mut axioms = Vec::new();
        for check in &v.checks {
            match &check.failure {
                None => report.line(format!("axiom {}: pass", check.axiom)),
                Some(f) => report.line(format!("axiom {}: FAIL ({})", check.axiom, f.detail)),
            }
            axioms.push(json!({
                "axiom": check.axiom,
                "pass": check.passed(),
                "detail": check.failure.as_ref().map(|f| f.detail.clone()),
            }));
        }
        report.field("axioms", Value::Array(axioms));
        report.verdict(v.all_pass());
        Ok(report)
    }

    fn margolis(&self, expr: &str) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("module dims: {}", dims_text(&m.dims_list())));
        report.field("module_dims", dims_json(&m.dims_list()));
        let mut rows = Vec::new();
        for k in 1..=self.algebra.margolis_count() {
            let h = margolis_homology(&m, k).map_err(|e| Fail(format!("operation {k}: {e}")))?;
            let dims: Vec<(i64, usize)> =
                m.degrees().map(|d| (d, h.dim(d))).filter(|&(_, n)| n > 0).collect();
            report.line(format!("H(M; p_{k}): {}", dims_text(&dims)));
            rows.push(json!({"op": k, "dims": dims_json(&dims)}));
        }
        report.field("homology", Value::Array(rows));
        Ok(report)
    }

    fn free_check(&self, expr: &str) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let free = is_free(&m);
        let (reduced, ranks) = strip_free(&m);
        let agree = free == reduced.is_zero();
        let mut report = Report::new();
        report.line(format!("module dims: {}", dims_text(&m.dims_list())));
        report.field("module_dims", dims_json(&m.dims_list()));
        report.line(format!("free: {}", if free { "yes" } else { "no" }));
        report.field("free", json!(free));
        let rank_list: Vec<(i64, usize)> = ranks.into_iter().collect();
        report.line(format!("free generator degrees: {}", dims_text(&rank_list)));
        report.field("free_ranks", dims_json(&rank_list));
        report.line(format!("residual dims: {}", dims_text(&reduced.dims_list())));
        report.field("residual_dims", dims_json(&reduced.dims_list()));
        if !agree {
            report.line("integral detector and stripping disagree");
        }
        report.field("detectors_agree", json!(agree));
        report.verdict(free && agree);
        Ok(report)
    }

    /// Shared tail for subcommands whose answer is a module.
    fn module_result(&self, label: &str, m: &GradedModule, report: &mut Report) {
        report.line(format!("{label} dims: {}", dims_text(&m.dims_list())));
        report.field(
            "result_dims",
            dims_json(&m.dims_list()),
        );
        let encoded: Value = serde_json::from_str(&module_schema::to_json(m))
            .expect("module schema serializes");
        report.field("result", encoded);
    }

    fn strip(&self, expr: &str) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let (reduced, ranks) = strip_free(&m);
        let mut report = Report::new();
        report.line(format!("input dims: {}", dims_text(&m.dims_list())));
        report.field("input_dims", dims_json(&m.dims_list()));
        let rank_list: Vec<(i64, usize)> = ranks.into_iter().collect();
        report.line(format!("free generator degrees: {}", dims_text(&rank_list)));
        report.field("free_ranks", dims_json(&rank_list));
        self.module_result("reduced", &reduced, &mut report);
        Ok(report)
    }

    fn omega(&self, expr: &str, power: i64) -> Result<Report, RunError> {
        let mut m = self.eval(expr)?;
        for _ in 0..power.abs() {
            m = if power > 0 { omega(&m) } else { omega_inv(&m) };
        }
        let mut report = Report::new();
        report.line(format!("syzygy power: {power}"));
        report.field("power", json!(power));
        self.module_result("result", &m, &mut report);
        Ok(report)
    }

    fn ext(
        &self,
        source: &str,
        target: &str,
        (s_lo, s_hi): (i64, i64),
        (t_lo, t_hi): (i64, i64),
    ) -> Result<Report, RunError> {
        let src = self.eval(source)?;
        let tgt = self.eval(target)?;
        let chart = stable_ext(&src, &tgt, s_lo..=s_hi, t_lo..=t_hi);
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("chart rectangle: s {s_lo}:{s_hi}, t {t_lo}:{t_hi}"));
        report.field("s_range", json!([s_lo, s_hi]));
        report.field("t_range", json!([t_lo, t_hi]));
        for s in (s_lo..=s_hi).rev() {
            let mut row = format!("s={s:>3} |");
            for t in t_lo..=t_hi {
                let d = chart.dim(s, t);
                match d {
                    0 => row.push('.'),
                    1..=9 => write!(row, "{d}").expect("write to string"),
                    _ => row.push('*'),
                }
            }
            report.line(row);
        }
        let mut footer = format!("t=      {t_lo}..{t_hi}");
        if t_hi - t_lo > 60 {
            footer.push_str(" (wide)");
        }
        report.line(footer);
        let entries: Vec<Value> =
            chart.nonzero().into_iter().map(|(s, t, d)| json!([s, t, d])).collect();
        report.line(format!("nonzero entries: {}", entries.len()));
        report.field("entries", Value::Array(entries));
        Ok(report)
    }

    fn tensor(&self, left: &str, right: &str) -> Result<Report, RunError> {
        let a = self.eval(left)?;
        let b = self.eval(right)?;
        let m = a.tensor(&b).map_err(|e| Fail(e.to_string()))?;
        let mut report = Report::new();
        report.line(format!("left dims: {}", dims_text(&a.dims_list())));
        report.field("left_dims", dims_json(&a.dims_list()));
        report.line(format!("right dims: {}", dims_text(&b.dims_list())));
        report.field("right_dims", dims_json(&b.dims_list()));
        self.module_result("tensor", &m, &mut report);
        Ok(report)
    }

    fn dual(&self, expr: &str) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let mut report = Report::new();
        report.line(format!("input dims: {}", dims_text(&m.dims_list())));
        report.field("input_dims", dims_json(&m.dims_list()));
        self.module_result("dual", &m.dual(), &mut report);
        Ok(report)
    }

    fn support(&self, expr: &str) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let profile = support_profile(&m);
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("module dims: {}", dims_text(&m.dims_list())));
        report.field("module_dims", dims_json(&m.dims_list()));
        let indices = profile.indices();
        report.line(format!(
            "concentration: {{{}}}",
            indices.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
        ));
        report.field("concentration", json!(indices));
        if self.algebra.name() == "A1" {
            let supp = a1_membership(&m).map_err(|e| Fail(e.to_string()))?;
            report.line(format!("points: {{{}}}", supp.points().join(", ")));
            report.line(format!("closed: {}", if supp.is_closed() { "yes" } else { "no" }));
            report.field("points", json!(supp.points()));
            report.field("closed", json!(supp.is_closed()));
        }
        Ok(report)
    }

    fn cover_check(&self, cover: &[(usize, usize)]) -> Result<Report, RunError> {
        let n = self.algebra.margolis_count();
        let ok = is_cover(n, cover);
        let mut report = Report::new();
        self.header(&mut report);
        let segs: Vec<Value> = cover.iter().map(|&(a, b)| json!([a, b])).collect();
        report.field("segments", Value::Array(segs));
        report.line(format!("cover: {}", if ok { "yes" } else { "no" }));
        report.field("cover", json!(ok));
        report.pass = ok;
        Ok(report)
    }

    fn localize_cmd(
        &self,
        expr: &str,
        segment: (usize, usize),
        side: Side,
        (lo, hi): (i64, i64),
    ) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let window = Window::new(lo, hi).map_err(|e| Usage(e.to_string()))?;
        let unit = build_local_unit(&self.algebra, segment, side, window)
            .map_err(|e| Fail(format!("building the local unit: {e}")))?;
        let (loc, w) = localize(&m, &unit).map_err(|e| Fail(format!("localizing: {e}")))?;
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("segment: {}:{}", segment.0, segment.1));
        report.field("segment", json!([segment.0, segment.1]));
        report.line(format!("model dims: {}", dims_text(&unit.model().dims_list())));
        report.field("model_dims", dims_json(&unit.model().dims_list()));
        report.line(format!("localized dims: {}", dims_text(&loc.dims_list())));
        report.field("localized_dims", dims_json(&loc.dims_list()));
        let (cl, ch) = w.certified(side);
        report.line(format!("window: {}:{} (margin {})", w.lo, w.hi, w.margin));
        report.line(format!("certified degrees: {cl}:{ch}"));
        report.field("window", json!([w.lo, w.hi]));
        report.field("margin", json!(w.margin));
        report.field("certified", json!([cl, ch]));
        let mut rows = Vec::new();
        for k in 1..=self.algebra.margolis_count() {
            let h = margolis_homology(&loc, k).map_err(|e| Fail(format!("operation {k}: {e}")))?;
            let dims: Vec<(i64, usize)> = (cl..=ch).map(|d| (d, h.dim(d))).filter(|&(_, n)| n > 0).collect();
            report.line(format!("H(L; p_{k}) on certified degrees: {}", dims_text(&dims)));
            rows.push(json!({"op": k, "dims": dims_json(&dims)}));
        }
        report.field("homology", Value::Array(rows));
        Ok(report)
    }

    fn postnikov_cmd(
        &self,
        expr: &str,
        split: usize,
        (lo, hi): (i64, i64),
    ) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let window = Window::new(lo, hi).map_err(|e| Usage(e.to_string()))?;
        let p = postnikov(&m, split, &window).map_err(|e| Fail(e.to_string()))?;
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("split after operation: {split}"));
        report.field("split", json!(split));
        for (name, part, w) in [
            ("colocal", p.colocal(), p.colocal_window()),
            ("local", p.local(), p.local_window()),
        ] {
            report.line(format!("{name} dims: {}", dims_text(&part.dims_list())));
            report.line(format!("{name} window: {}:{} (margin {})", w.lo, w.hi, w.margin));
            report.field(&format!("{name}_dims"), dims_json(&part.dims_list()));
            report.field(&format!("{name}_window"), json!([w.lo, w.hi]));
            report.field(&format!("{name}_margin"), json!(w.margin));
        }
        let comp = p
            .local_map()
            .compose(p.colocal_map())
            .map_err(|e| Fail(e.to_string()))?;
        let fiber_ok = stabmod::stable::is_stably_trivial(&comp);
        report.line(format!(
            "fiber composite stably trivial: {}",
            if fiber_ok { "yes" } else { "no" }
        ));
        report.field("fiber_trivial", json!(fiber_ok));
        report.verdict(fiber_ok);
        Ok(report)
    }

    fn mv_check_cmd(
        &self,
        source: &str,
        target: &str,
        cover: &[(usize, usize)],
        (lo, hi): (i64, i64),
    ) -> Result<Report, RunError> {
        let src = self.eval(source)?;
        let tgt = self.eval(target)?;
        let window = Window::new(lo, hi).map_err(|e| Usage(e.to_string()))?;
        let check = mv_check(&src, &tgt, cover, &window).map_err(|e| Fail(e.to_string()))?;
        let mut report = Report::new();
        self.header(&mut report);
        for line in check.table().lines() {
            report.line(line.to_string());
        }
        let mirrored: Value =
            serde_json::from_str(&check.to_json()).expect("check report serializes");
        report.field("check", mirrored);
        report.verdict(check.pass);
        Ok(report)
    }

    fn glue_cmd(
        &self,
        expr: &str,
        cover: &[(usize, usize)],
        (lo, hi): (i64, i64),
    ) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let window = Window::new(lo, hi).map_err(|e| Usage(e.to_string()))?;
        let datum =
            restriction_datum(&m, cover, &window).map_err(|e| Fail(format!("restricting: {e}")))?;
        let (glued, gw) = glue(&datum).map_err(|e| Fail(format!("gluing: {e}")))?;
        let cut = gw.certified_hi().min(m.hi() + 1);
        let ok = windowed_stably_iso(&glued, &m, cut);
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("module dims: {}", dims_text(&m.dims_list())));
        report.field("module_dims", dims_json(&m.dims_list()));
        for (i, (x, w)) in datum.locals().iter().enumerate() {
            report.line(format!(
                "local {i} dims: {} (window {}:{})",
                dims_text(&x.dims_list()),
                w.lo,
                w.hi
            ));
        }
        let locals: Vec<Value> = datum
            .locals()
            .iter()
            .map(|(x, w)| json!({"dims": dims_json(&x.dims_list()), "window": [w.lo, w.hi]}))
            .collect();
        report.field("locals", Value::Array(locals));
        report.line(format!("glued dims: {}", dims_text(&glued.dims_list())));
        report.field("glued_dims", dims_json(&glued.dims_list()));
        report.line(format!("compared below degree: {cut}"));
        report.field("compared_below", json!(cut));
        report.line(format!("round trip recovers the module: {}", if ok { "yes" } else { "no" }));
        report.field("round_trip", json!(ok));
        report.verdict(ok);
        Ok(report)
    }

    fn pic_check(
        &self,
        exprs: &[String],
        cover: Option<&[(usize, usize)]>,
    ) -> Result<Report, RunError> {
        let n = self.algebra.margolis_count();
        let singletons: Vec<(usize, usize)> = (1..=n).map(|k| (k, k)).collect();
        let cover = cover.unwrap_or(&singletons);
        let mut report = Report::new();
        self.header(&mut report);
        let mut sample: Vec<PicElement> = Vec::new();
        let mut rows = Vec::new();
        let mut all_invertible = true;
        for (i, text) in exprs.iter().enumerate() {
            let m = self.eval(text)?;
            match is_invertible(&m) {
                Some(x) => {
                    let inv = local_invariant(&x);
                    report.line(format!(
                        "element {i} ({text}): invertible, degrees {:?}",
                        inv.degrees()
                    ));
                    rows.push(json!({
                        "expr": text,
                        "invertible": true,
                        "degrees": inv.degrees(),
                    }));
                    sample.push(x);
                }
                None => {
                    all_invertible = false;
                    report.line(format!("element {i} ({text}): not invertible"));
                    rows.push(json!({"expr": text, "invertible": false}));
                }
            }
        }
        report.field("elements", Value::Array(rows));
        if !all_invertible {
            report.verdict(false);
            return Ok(report);
        }
        let check = detection_check(&sample, cover).map_err(|e| match e {
            stabmod::picard::PicError::BadPartition(msg) => Usage(msg),
            other => Fail(other.to_string()),
        })?;
        report.line(format!(
            "separated pairs: {}, collisions: {}",
            check.dims["separated"], check.dims["collisions"]
        ));
        if let Some(msg) = &check.first_failure {
            report.line(format!("finding: {msg}"));
            report.field("finding", json!(msg));
        }
        report.field("separated", json!(check.dims["separated"]));
        report.field("collisions", json!(check.dims["collisions"]));
        report.verdict(check.pass);
        Ok(report)
    }

    fn resolve_cmd(
        &self,
        expr: &str,
        stages: usize,
        t_cut: Option<i64>,
    ) -> Result<Report, RunError> {
        let m = self.eval(expr)?;
        let (reduced, _) = strip_free(&m);
        if reduced.is_zero() {
            return Err(Fail("nothing to resolve: the module is free".into()));
        }
        let t_cut =
            t_cut.unwrap_or_else(|| reduced.hi() + 2 * stages as i64 + self.algebra.top() as i64);
        let res = resolve(&reduced, stages, t_cut);
        let mut report = Report::new();
        self.header(&mut report);
        report.line(format!("module dims: {}", dims_text(&reduced.dims_list())));
        report.field("module_dims", dims_json(&reduced.dims_list()));
        report.line(format!("degree cutoff: {t_cut}"));
        report.field("degree_cutoff", json!(t_cut));
        let mut stage_rows = Vec::new();
        for s in 0..=res.stages() {
            let gens = res.free(s).gens();
            let mut by_degree: BTreeMap<i64, usize> = BTreeMap::new();
            for &t in gens {
                *by_degree.entry(t).or_insert(0) += 1;
            }
            let listed: Vec<(i64, usize)> = by_degree.into_iter().collect();
            report.line(format!("stage {s} generators: {}", dims_text(&listed)));
            stage_rows.push(json!({"s": s, "generators": dims_json(&listed)}));
        }
        report.field("stages", Value::Array(stage_rows));
        let minimal = res.is_minimal();
        report.line(format!("minimal: {}", if minimal { "yes" } else { "no" }));
        report.field("minimal", json!(minimal));
        report.verdict(minimal);
        Ok(report)
    }
}
