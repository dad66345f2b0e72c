//! Command-line front end for the `condensed` binary.
//!
//! Exit codes: 0 pass, 1 fail (witness printed), 2 inconclusive, 64 malformed
//! input.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::{partition_compare, FinMap, Order};
use crate::modules::{
    forget_presheaf, locconst_module, module_discreteness_report, CantorHomModule, FinModule, FinModuleJson,
    FinRing, ModuleTowerPresheaf,
};
use crate::presheaf::{
    colimit_condition_report, counit_iso_report, parse_presheaf, standard_kind, DiscretenessReport,
    OracleOptions, TowerPresheaf, Verdict, Witness, DEFAULT_SECTION_BUDGET,
};
use crate::quotients::{dq_diagram, verify_limit_cone, TestCone, DEFAULT_DQ_BOUND};
use crate::tower::{standard_tower, validate_tower, StandardTower, Tower};
use crate::verify::{run_verify, VerifyConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "condensed", version, about = "Discreteness checks for presheaves on truncated profinite towers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run both discreteness oracles at every depth up to --depth.
    CheckDiscrete(CheckArgs),
    /// Print the quotient lattice of a tower and check its limit cone.
    Inspect(InspectArgs),
    /// Run the invariant suites.
    Verify(VerifyArgs),
    /// Re-run the check recorded in a replay file.
    Replay(ReplayArgs),
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Most sections enumerated at any single tower.
    #[arg(long, default_value_t = DEFAULT_SECTION_BUDGET as u64, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args, Clone)]
pub struct CheckArgs {
    /// Built-in name (cantor, point, eventually_constant:k) or a tower JSON file.
    #[arg(long)]
    pub tower: String,
    /// locconst:k, const:k, broken:k, towerhom:<tower>, towerhom-mod:cantor,
    /// or locconst-mod:<ring>:<module>.
    #[arg(long)]
    pub presheaf: String,
    /// Deepest truncation checked; a file tower defaults to its own depth.
    #[arg(long)]
    pub depth: Option<usize>,
    /// Where a failing run writes its reproduction file.
    #[arg(long)]
    pub replay: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct InspectArgs {
    #[arg(long)]
    pub tower: String,
    #[arg(long)]
    pub depth: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct VerifyArgs {
    /// Random cases per randomised invariant.
    #[arg(long, default_value_t = 100)]
    pub cases: usize,
    /// Add a presheaf that is not product-preserving to the corpus.
    #[arg(long)]
    pub broken: bool,
    /// Same as --format json.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args, Clone)]
pub struct ReplayArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// What a command printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(e: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses and runs a command line (first item is the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            return if code == EXIT_PASS {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match cli.command {
        Command::CheckDiscrete(a) => cmd_check_discrete(&a),
        Command::Inspect(a) => cmd_inspect(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Replay(a) => cmd_replay(&a),
    }
}

/// A built-in tower at `depth`, or a tower read from a JSON file.
pub fn load_tower(src: &str, depth: Option<usize>) -> Result<Tower> {
    if let Ok(kind) = standard_kind(src) {
        // the point has no levels worth stacking
        if kind == StandardTower::Point {
            return Ok(Tower::point());
        }
        return Ok(standard_tower(kind, depth.unwrap_or(2)));
    }
    let path = Path::new(src);
    if !path.exists() {
        return Err(Error::Malformed(format!("{src:?} is neither a built-in tower nor a file")));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{src}: {e}")))?;
    let t: Tower = serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{src}: {e}")))?;
    let problems = validate_tower(&t);
    if let Some(p) = problems.first() {
        return Err(Error::Malformed(format!("{src}: level {}: {}", p.level, p.message)));
    }
    Ok(match depth {
        Some(d) => t.at_depth(d),
        None => t,
    })
}

fn load_ring(src: &str) -> Result<FinRing> {
    if let Some(n) = src.strip_prefix('z').and_then(|n| n.parse::<usize>().ok()) {
        if n == 0 {
            return Err(Error::Malformed("z0 is not a finite ring".into()));
        }
        return Ok(FinRing::zmod(n));
    }
    let text = std::fs::read_to_string(src).map_err(|e| Error::Malformed(format!("{src}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{src}: {e}")))
}

fn load_module(ring: FinRing, src: &str) -> Result<FinModule> {
    match src {
        "regular" => return Ok(FinModule::regular(ring)),
        "zero" => return Ok(FinModule::zero_module(ring)),
        _ => {}
    }
    if let Some(k) = src.strip_prefix("power").and_then(|k| k.parse::<usize>().ok()) {
        return Ok(FinModule::power(ring, k));
    }
    let text = std::fs::read_to_string(src).map_err(|e| Error::Malformed(format!("{src}: {e}")))?;
    let j: FinModuleJson = serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{src}: {e}")))?;
    FinModule::from_json(ring, j)
}

/// Presheaf of sets or of modules, as named on the command line.
pub enum LoadedPresheaf {
    Sets(Box<dyn TowerPresheaf>),
    Modules(Box<dyn ModuleTowerPresheaf>),
}

/// Like [`parse_presheaf`], plus `towerhom-mod:cantor` and
/// `locconst-mod:<ring>:<module>`. A ring is `z<n>` or a JSON file; a module
/// is `regular`, `zero`, `power<k>` or a JSON file.
pub fn load_presheaf(src: &str) -> Result<LoadedPresheaf> {
    if src == "towerhom-mod:cantor" {
        return Ok(LoadedPresheaf::Modules(Box::new(CantorHomModule::new())));
    }
    if let Some(rest) = src.strip_prefix("locconst-mod:") {
        let (ring, module) = rest
            .split_once(':')
            .ok_or_else(|| Error::Malformed("expected locconst-mod:<ring>:<module>".into()))?;
        let ring = load_ring(ring)?;
        return Ok(LoadedPresheaf::Modules(Box::new(locconst_module(load_module(ring, module)?))));
    }
    parse_presheaf(src).map(LoadedPresheaf::Sets)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthEntry {
    pub depth: usize,
    pub verdict: Verdict,
    pub consistent: bool,
    pub reports: Vec<DiscretenessReport>,
    /// Set when an oracle refused the presheaf.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub tower: String,
    pub presheaf: String,
    pub budget: usize,
    pub seed: u64,
    pub depths: Vec<DepthEntry>,
    pub verdict: Verdict,
    pub consistent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Minimal reproduction of a failed check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayFile {
    pub presheaf: String,
    pub tower: Tower,
    pub budget: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn error_verdict(e: &Error) -> Verdict {
    match e {
        Error::BoundExceeded { .. } => Verdict::Inconclusive,
        // an oracle that cannot glue sections has found a failure
        _ => Verdict::Fail,
    }
}

fn check_one(p: &LoadedPresheaf, t: &Tower, opts: &OracleOptions) -> DepthEntry {
    let one = std::slice::from_ref(t);
    let runs: Vec<Result<DiscretenessReport>> = match p {
        LoadedPresheaf::Sets(x) => vec![
            counit_iso_report(x.as_ref(), one, opts),
            colimit_condition_report(x.as_ref(), t, opts),
        ],
        LoadedPresheaf::Modules(xm) => {
            let x = forget_presheaf(xm.as_ref());
            let mut v = vec![counit_iso_report(&x, one, opts)];
            match module_discreteness_report(xm.as_ref(), t, opts) {
                Ok(c) => {
                    v.push(Ok(c.set));
                    v.push(Ok(c.module));
                }
                Err(e) => v.push(Err(e)),
            }
            v
        }
    };
    let verdicts: Vec<Verdict> = runs
        .iter()
        .map(|r| match r {
            Ok(r) => r.verdict,
            Err(e) => error_verdict(e),
        })
        .collect();
    let error = runs.iter().find_map(|r| r.as_ref().err().map(Error::to_string));
    DepthEntry {
        depth: t.depth(),
        verdict: verdicts.iter().copied().fold(Verdict::Pass, Verdict::combine),
        consistent: verdicts.windows(2).all(|w| w[0] == w[1]),
        reports: runs.into_iter().filter_map(Result::ok).collect(),
        error,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => EXIT_PASS,
        Verdict::Fail => EXIT_FAIL,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn presheaf_label(p: &LoadedPresheaf) -> String {
    match p {
        LoadedPresheaf::Sets(x) => x.name(),
        LoadedPresheaf::Modules(x) => x.name(),
    }
}

pub fn cmd_check_discrete(a: &CheckArgs) -> Outcome {
    let p = match load_presheaf(&a.presheaf) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let top = match load_tower(&a.tower, a.depth) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(e),
    };
    let opts = OracleOptions {
        budget: a.common.budget as usize,
        ..OracleOptions::default()
    };
    let depths: Vec<DepthEntry> = (0..=top.depth()).map(|d| check_one(&p, &top.truncate(d), &opts)).collect();
    let verdict = depths.iter().map(|d| d.verdict).fold(Verdict::Pass, Verdict::combine);
    let consistent = depths.iter().all(|d| d.consistent);
    let witness = depths
        .iter()
        .flat_map(|d| d.reports.iter())
        .find_map(|r| r.witness.clone());
    let report = CheckReport {
        tower: top.name().to_string(),
        presheaf: presheaf_label(&p),
        budget: opts.budget,
        seed: a.common.seed,
        depths,
        verdict,
        consistent,
        witness,
    };
    // disagreeing oracles count as a failure
    let code = if consistent { verdict_code(verdict) } else { EXIT_FAIL };
    let mut stderr = String::new();
    if code == EXIT_FAIL {
        let failing = report.depths.iter().find(|d| d.verdict == Verdict::Fail || !d.consistent);
        let replay = ReplayFile {
            presheaf: a.presheaf.clone(),
            tower: failing.map_or(top.clone(), |d| top.truncate(d.depth)),
            budget: opts.budget,
            witness: report.witness.clone(),
            error: failing.and_then(|d| d.error.clone()),
        };
        let path = a.replay.clone().unwrap_or_else(|| PathBuf::from("condensed-replay.json"));
        match std::fs::write(&path, serde_json::to_string_pretty(&replay).expect("serializable")) {
            Ok(()) => stderr = format!("replay written to {}\n", path.display()),
            Err(e) => stderr = format!("could not write replay file {}: {e}\n", path.display()),
        }
    }
    let stdout = match a.common.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => render_check(&report),
    };
    Outcome { code, stdout, stderr }
}

fn render_check(r: &CheckReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "tower {}  presheaf {}  budget {}", r.tower, r.presheaf, r.budget);
    for d in &r.depths {
        let _ = writeln!(s, "depth {}: {:?}{}", d.depth, d.verdict, if d.consistent { "" } else { "  (oracles disagree)" });
        for rep in &d.reports {
            for st in &rep.stats {
                let _ = write!(
                    s,
                    "  {:<8} {:<13} index {} ({} objects)  source {}  target {}  hit {}  collapsed {}",
                    format!("{:?}", rep.oracle).to_lowercase(),
                    format!("{:?}", rep.verdict),
                    st.index,
                    st.index_objects,
                    st.source_size,
                    st.target_size,
                    st.hit,
                    st.collapsed
                );
                if let Some(b) = st.exhausted_budget {
                    let _ = write!(s, "  budget {b} exhausted");
                }
                s.push('\n');
            }
        }
        if let Some(e) = &d.error {
            let _ = writeln!(s, "  error: {e}");
        }
    }
    let _ = writeln!(s, "verdict: {:?}  consistent: {}", r.verdict, r.consistent);
    if let Some(w) = &r.witness {
        let _ = writeln!(s, "witness ({:?}) at depth {}: {}", w.kind, w.tower.depth(), w.description);
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InspectReport {
    pub tower: Tower,
    pub threads: usize,
    pub quotients: Vec<(usize, Vec<usize>)>,
    /// `(finer, coarser)` covering pairs.
    pub hasse: Vec<(usize, usize)>,
    pub cone_commutes: bool,
    pub cones_checked: usize,
    pub limit_cone_ok: bool,
}

pub fn cmd_inspect(a: &InspectArgs) -> Outcome {
    let t = match load_tower(&a.tower, a.depth) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(e),
    };
    let at = Arc::new(t.clone());
    let d = match dq_diagram(&at, DEFAULT_DQ_BOUND) {
        Ok(d) => d,
        Err(e) => return Outcome::usage(e),
    };
    let parts: Vec<_> = d.quotients.iter().map(|q| q.on_threads()).collect();
    let le = |i: usize, j: usize| matches!(partition_compare(&parts[i], &parts[j]), Ok(Order::Le));
    let n = parts.len();
    let hasse: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| le(i, j) && !(0..n).any(|k| le(i, k) && le(k, j)))
        .collect();
    let mut r = crate::corpus::rng(a.common.seed);
    let cones: Vec<TestCone> = (0..32)
        .map(|_| {
            let apex = r.gen_range(0..=4);
            let pick = FinMap {
                dom: apex,
                cod: t.top_size(),
                table: (0..apex).map(|_| r.gen_range(0..t.top_size().max(1))).collect(),
            };
            TestCone {
                apex,
                legs: d.cone.iter().map(|leg| leg.after(&pick)).collect(),
            }
        })
        .filter(|c| c.apex == 0 || t.top_size() > 0)
        .collect();
    let limit_cone_ok = verify_limit_cone(&d, &cones).unwrap_or(false);
    let report = InspectReport {
        threads: t.num_threads(),
        quotients: d.quotients.iter().map(|q| (q.level(), q.partition().as_slice().to_vec())).collect(),
        hasse,
        cone_commutes: d.cone_commutes(),
        cones_checked: cones.len(),
        limit_cone_ok,
        tower: t,
    };
    let code = if report.cone_commutes && report.limit_cone_ok { EXIT_PASS } else { EXIT_FAIL };
    let stdout = match a.common.format {
        Format::Json => serde_json::to_string_pretty(&report).expect("serializable") + "\n",
        Format::Text => {
            let mut s = String::new();
            let t = &report.tower;
            let _ = writeln!(s, "tower {}  depth {}  levels {:?}", t.name(), t.depth(), t.levels());
            let _ = writeln!(s, "threads: {}", report.threads);
            let _ = writeln!(s, "quotients: {}", report.quotients.len());
            for (i, (level, labels)) in report.quotients.iter().enumerate() {
                let _ = writeln!(s, "  q{i}: level {level} {labels:?}");
            }
            let edges: Vec<String> = report.hasse.iter().map(|(i, j)| format!("q{i}<q{j}")).collect();
            let _ = writeln!(s, "hasse: {}", edges.join(" "));
            let _ = writeln!(
                s,
                "limit cone: commutes {}  {} test cones factor uniquely: {}",
                report.cone_commutes, report.cones_checked, report.limit_cone_ok
            );
            s
        }
    };
    Outcome { code, stdout, stderr: String::new() }
}

pub fn cmd_verify(a: &VerifyArgs) -> Outcome {
    let cfg = VerifyConfig {
        seed: a.common.seed,
        budget: a.common.budget as usize,
        random_cases: a.cases,
        include_broken: a.broken,
    };
    let rep = run_verify(&cfg);
    let code = if rep.passed { EXIT_PASS } else { EXIT_FAIL };
    let stdout = if a.json || a.common.format == Format::Json {
        serde_json::to_string_pretty(&rep).expect("serializable") + "\n"
    } else {
        let mut s = String::new();
        for r in &rep.results {
            let _ = write!(
                s,
                "{} {:<10} {:<52} {:>6} cases",
                if r.passed() { "ok  " } else { "FAIL" },
                r.suite,
                r.invariant,
                r.cases
            );
            if let Some(d) = &r.detail {
                let _ = write!(s, "  {} violations, first: {d}", r.violations);
            }
            s.push('\n');
        }
        let _ = writeln!(s, "{}", if rep.passed { "all invariants hold" } else { "violated invariants found" });
        s
    };
    let stderr = rep
        .failures()
        .map(|r| format!("violated: {} / {}\n", r.suite, r.invariant))
        .collect();
    Outcome { code, stdout, stderr }
}

/// Re-runs the recorded check at the recorded tower. Exits 1 when the
/// recorded witness (or error) is reproduced, 0 when it is not.
pub fn cmd_replay(a: &ReplayArgs) -> Outcome {
    let text = match std::fs::read_to_string(&a.file) {
        Ok(t) => t,
        Err(e) => return Outcome::usage(format!("{}: {e}", a.file.display())),
    };
    let rf: ReplayFile = match serde_json::from_str(&text) {
        Ok(r) => r,
        Err(e) => return Outcome::usage(format!("{}: {e}", a.file.display())),
    };
    let p = match load_presheaf(&rf.presheaf) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let opts = OracleOptions {
        budget: rf.budget,
        ..OracleOptions::default()
    };
    let entry = check_one(&p, &rf.tower, &opts);
    let found = entry.reports.iter().find_map(|r| r.witness.clone());
    let reproduced = match (&rf.witness, &rf.error) {
        (Some(w), _) => found.as_ref() == Some(w),
        (None, Some(e)) => entry.error.as_ref() == Some(e),
        (None, None) => !entry.consistent,
    };
    let code = if reproduced { EXIT_FAIL } else { EXIT_PASS };
    let stdout = match a.format {
        Format::Json => serde_json::to_string_pretty(&entry).expect("serializable") + "\n",
        Format::Text => format!(
            "{} on {} (depth {}): {:?}, recorded failure {}\n",
            rf.presheaf,
            rf.tower.name(),
            rf.tower.depth(),
            entry.verdict,
            if reproduced { "reproduced" } else { "not reproduced" }
        ),
    };
    Outcome { code, stdout, stderr: String::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("condensed").chain(args.iter().copied()))
    }

    #[test]
    fn locconst_passes() {
        let o = run_args(&["check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "locconst:2"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.contains("consistent: true"));
    }

    #[test]
    fn towerhom_fails_with_witness() {
        let dir = tempfile::tempdir().unwrap();
        let replay = dir.path().join("r.json");
        let o = run_args(&[
            "check-discrete", "--tower", "cantor", "--depth", "3", "--presheaf", "towerhom:cantor",
            "--replay", replay.to_str().unwrap(),
        ]);
        assert_eq!(o.code, 1);
        assert!(o.stdout.contains("identity tower map"));
        let again = run_args(&["replay", replay.to_str().unwrap()]);
        assert_eq!(again.code, 1, "{}", again.stdout);
    }

    #[test]
    fn point_tower_always_passes() {
        for p in ["locconst:3", "towerhom:cantor", "const:2"] {
            let o = run_args(&["check-discrete", "--tower", "point", "--presheaf", p]);
            assert_eq!(o.code, 0, "{p}: {}", o.stdout);
        }
    }

    #[test]
    fn malformed_input() {
        assert_eq!(run_args(&["check-discrete", "--tower", "nowhere", "--presheaf", "locconst:2"]).code, 64);
        assert_eq!(run_args(&["check-discrete", "--tower", "cantor", "--presheaf", "bogus:2"]).code, 64);
        assert_eq!(run_args(&["frobnicate"]).code, 64);
        assert_eq!(run_args(&["check-discrete", "--tower", "cantor", "--presheaf", "locconst:2", "--budget", "0"]).code, 64);
    }

    #[test]
    fn small_budget_is_inconclusive() {
        let o = run_args(&["check-discrete", "--tower", "cantor", "--depth", "2", "--presheaf", "locconst:2", "--budget", "3"]);
        assert_eq!(o.code, 2, "{}", o.stdout);
    }

    #[test]
    fn inspect_counts() {
        for (tower, depth, count) in [("point", "0", 1), ("cantor", "2", 15), ("eventually_constant:3", "2", 5)] {
            let o = run_args(&["inspect", "--tower", tower, "--depth", depth, "--format", "json"]);
            assert_eq!(o.code, 0);
            let r: InspectReport = serde_json::from_str(&o.stdout).unwrap();
            assert_eq!(r.quotients.len(), count, "{tower}");
        }
    }

    #[test]
    fn module_names() {
        let o = run_args(&["check-discrete", "--tower", "cantor", "--depth", "2", "--presheaf", "locconst-mod:z2:regular"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        let o = run_args(&["check-discrete", "--tower", "cantor", "--depth", "2", "--presheaf", "towerhom-mod:cantor",
            "--replay", tempfile::tempdir().unwrap().path().join("r.json").to_str().unwrap()]);
        assert_eq!(o.code, 1, "{}", o.stdout);
    }
}
