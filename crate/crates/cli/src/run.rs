//! Command-line arguments and dispatch to the library procedures.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dselim::bounds::{ritt_order_bound, BDelta, BoundConfig, BoundValue, Bounds};
use dselim::budget::Budget;
use dselim::elim::{
    deepening_consistency, iterative_deepening_eliminate, plain_power_membership, sigma_power_membership,
    sigma_power_search, truncated_consistency, witness_refute, ElimError, ElimOptions, EliminationReport, Schedule,
    SearchOrder,
};
use dselim::seq::{is_partial_solution, unroll_recurrence};
use dselim::GroundField;

use crate::parse::{bdelta_from, parse, ProblemFile};
use crate::report::{LevelOut, Report};

pub const EXIT_DEFINITIVE: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dsx", version, about = "Elimination and consistency checks for differential-difference systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is 1 in the truncated prolongation?
    Consistency {
        #[command(flatten)]
        common: Common,
        /// Check this single level only.
        #[arg(long, conflicts_with = "max_level")]
        level: Option<u32>,
        /// Deepen through levels 0..=max-level.
        #[arg(long)]
        max_level: Option<u32>,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Coupled)]
        schedule: ScheduleArg,
    },
    /// Search for a consequence in the x-unknowns alone.
    Eliminate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
        #[arg(long, value_enum, default_value_t = ScheduleArg::Coupled)]
        schedule: ScheduleArg,
    },
    /// Search for S^m(f^m) in the prolongation, f the file's target.
    Member {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        m_max: u32,
        /// Base level of a single search.
        #[arg(long, default_value_t = 0, conflicts_with = "max_level")]
        level: u32,
        /// Search all base levels 0..=max-level as well.
        #[arg(long)]
        max_level: Option<u32>,
        #[arg(long, value_enum, default_value_t = SearchOrderArg::PowerFirst)]
        search_order: SearchOrderArg,
        /// Test f^m without the shift.
        #[arg(long, conflicts_with = "max_level")]
        plain: bool,
    },
    /// Check the file's window against the system, and refute the target
    /// if one is given.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Extend the window by this many entries first.
        #[arg(long)]
        unroll: Option<usize>,
        /// Partial-solution length to check; the largest the window allows
        /// by default.
        #[arg(long)]
        length: Option<usize>,
    },
    /// Evaluate a bound function, e.g. `bounds --fn tau0 n=1 s=1 h=1`.
    Bounds {
        /// g, f, c, l, tau0, train, final or ritt.
        #[arg(long = "fn")]
        function: String,
        /// Parameters as key=value.
        params: Vec<String>,
        /// Work in tower arithmetic throughout.
        #[arg(long)]
        magnitude: bool,
        /// Plug for `final`, e.g. "affine a=1 b=1 c=1 e=0".
        #[arg(long)]
        bdelta: Option<String>,
        /// Problem file whose bdelta statement supplies the plug.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem file.
    pub file: PathBuf,
    /// Ground field, overriding the file.
    #[arg(long, value_enum)]
    pub field: Option<FieldArg>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Reduction steps allowed per level.
    #[arg(long)]
    pub budget_steps: Option<u64>,
    /// Wall-clock seconds allowed per level.
    #[arg(long)]
    pub budget_seconds: Option<f64>,
    /// Include the certificate in the report.
    #[arg(long)]
    pub certificate: bool,
    /// Include elapsed time in the report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    #[value(name = "QQ")]
    Qq,
    #[value(name = "QQ_t")]
    QqT,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScheduleArg {
    Coupled,
    Independent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SearchOrderArg {
    PowerFirst,
    LevelFirst,
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Outcome {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: format!("error: {}\n", msg.into()) }
    }

    fn report(code: i32, report: &Report, format: Format) -> Outcome {
        let stdout = match format {
            Format::Json => report.to_json() + "\n",
            Format::Text => report.to_text(),
        };
        Outcome { code, stdout, stderr: String::new() }
    }
}

impl Common {
    fn options(&self, schedule: ScheduleArg) -> ElimOptions {
        let mut budget = Budget::default();
        if let Some(s) = self.budget_steps {
            budget.max_steps = s;
        }
        if let Some(secs) = self.budget_seconds {
            budget.max_time = Duration::try_from_secs_f64(secs).unwrap_or(Duration::MAX);
        }
        let schedule = match schedule {
            ScheduleArg::Coupled => Schedule::Coupled,
            ScheduleArg::Independent => Schedule::Independent,
        };
        ElimOptions { budget, certificate: self.certificate, schedule }
    }

    fn load(&self) -> Result<ProblemFile, Outcome> {
        let text = std::fs::read_to_string(&self.file)
            .map_err(|e| Outcome::usage(format!("cannot read {}: {}", self.file.display(), e)))?;
        let field = self.field.map(|f| match f {
            FieldArg::Qq => GroundField::Q,
            FieldArg::QqT => GroundField::Qt,
        });
        parse(&text, field).map_err(|e| Outcome::usage(format!("{}:{}", self.file.display(), e)))
    }
}

fn exit_code(r: &EliminationReport) -> i32 {
    if r.verdict.is_definitive() {
        EXIT_DEFINITIVE
    } else {
        EXIT_INCONCLUSIVE
    }
}

fn finish(command: &str, common: &Common, ground: GroundField, res: Result<EliminationReport, ElimError>) -> Outcome {
    match res {
        Ok(r) => {
            let report = Report::from_elim(command, ground.to_string(), &r, common.certificate, common.timings);
            Outcome::report(exit_code(&r), &report, common.format)
        }
        Err(ElimError::Budget { last_completed, exceeded }) => {
            let report = Report {
                command: command.into(),
                field: Some(ground.to_string()),
                verdict: "budget-exceeded".into(),
                definitive: false,
                last_completed_level: last_completed.map(LevelOut::from),
                message: Some(exceeded.to_string()),
                ..Report::default()
            };
            Outcome::report(EXIT_BUDGET, &report, common.format)
        }
        Err(e) => Outcome::usage(e.to_string()),
    }
}

pub fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Consistency { common, level, max_level, schedule } => {
            let p = match common.load() {
                Ok(p) => p,
                Err(o) => return o,
            };
            let opts = common.options(schedule);
            let sys = p.system();
            let res = match level {
                Some(l) => truncated_consistency(&sys, l, &opts),
                None => deepening_consistency(&sys, max_level.unwrap_or(2), &opts),
            };
            finish("consistency", &common, p.ground, res)
        }
        Command::Eliminate { common, max_level, schedule } => {
            let p = match common.load() {
                Ok(p) => p,
                Err(o) => return o,
            };
            let res = iterative_deepening_eliminate(&p.system(), max_level, &common.options(schedule));
            finish("eliminate", &common, p.ground, res)
        }
        Command::Member { common, m_max, level, max_level, search_order, plain } => {
            let p = match common.load() {
                Ok(p) => p,
                Err(o) => return o,
            };
            let Some(f) = p.target.clone() else {
                return Outcome::usage("member needs a `target` statement");
            };
            let opts = common.options(ScheduleArg::Coupled);
            let sys = p.system();
            let res = match (plain, max_level) {
                (true, _) => plain_power_membership(&f, &sys, m_max, level, &opts),
                (false, Some(ml)) => {
                    let order = match search_order {
                        SearchOrderArg::PowerFirst => SearchOrder::PowerFirst,
                        SearchOrderArg::LevelFirst => SearchOrder::LevelFirst,
                    };
                    sigma_power_search(&f, &sys, m_max, ml, order, &opts)
                }
                (false, None) => sigma_power_membership(&f, &sys, m_max, level, &opts),
            };
            finish("member", &common, p.ground, res)
        }
        Command::Verify { common, unroll, length } => {
            let p = match common.load() {
                Ok(p) => p,
                Err(o) => return o,
            };
            verify(&common, &p, unroll, length)
        }
        Command::Bounds { function, params, magnitude, bdelta, file, format } => {
            bounds(&function, &params, magnitude, bdelta.as_deref(), file.as_ref(), format)
        }
    }
}

fn verify(common: &Common, p: &ProblemFile, unroll: Option<usize>, length: Option<usize>) -> Outcome {
    let sys = p.system();
    let w = match p.point() {
        Some(Ok(w)) => w,
        Some(Err(e)) => return Outcome::usage(e.to_string()),
        None => return Outcome::usage("verify needs at least one `window` statement"),
    };
    let w = match unroll {
        Some(steps) => match unroll_recurrence(&sys, &w, steps) {
            Ok(w) => w,
            Err(e) => return Outcome::usage(e.to_string()),
        },
        None => w,
    };
    let h = sys.max_sigma_order() as usize;
    let ell = length.unwrap_or(w.width().saturating_sub(h));
    let partial = match is_partial_solution(&sys, &w, ell) {
        Ok(b) => b,
        Err(e) => return Outcome::usage(e.to_string()),
    };
    let window: BTreeMap<String, Vec<String>> = w
        .components()
        .map(|&(fam, idx)| {
            let entries = w.window((fam, idx)).expect("listed component").iter().map(|e| e.to_string()).collect();
            (format!("{}{}", fam.letter(), idx), entries)
        })
        .collect();
    let (verdict, code) = match &p.target {
        Some(f) => match witness_refute(f, &sys, &w) {
            Ok(true) => ("refuted", EXIT_DEFINITIVE),
            Ok(false) => ("not-refuted", EXIT_INCONCLUSIVE),
            Err(e) => return Outcome::usage(e.to_string()),
        },
        None if partial => ("partial-solution", EXIT_DEFINITIVE),
        None => ("not-a-partial-solution", EXIT_DEFINITIVE),
    };
    let report = Report {
        command: "verify".into(),
        field: Some(p.ground.to_string()),
        verdict: verdict.into(),
        definitive: code == EXIT_DEFINITIVE,
        length: Some(ell),
        partial_solution: Some(partial),
        window: Some(window),
        ..Report::default()
    };
    Outcome::report(code, &report, common.format)
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, u64>, String> {
    let mut out = BTreeMap::new();
    for item in raw {
        let (k, v) = item.split_once('=').ok_or_else(|| format!("expected key=value, got `{}`", item))?;
        let v: u64 = v.parse().map_err(|_| format!("`{}` is not a nonnegative integer", v))?;
        if out.insert(k.to_string(), v).is_some() {
            return Err(format!("parameter {} given twice", k));
        }
    }
    Ok(out)
}

fn take(params: &BTreeMap<String, u64>, names: &[&str]) -> Result<Vec<u64>, String> {
    if let Some(k) = params.keys().find(|k| !names.contains(&k.as_str())) {
        return Err(format!("unexpected parameter {} (expected {})", k, names.join(", ")));
    }
    names.iter().map(|n| params.get(*n).copied().ok_or_else(|| format!("missing parameter {}", n))).collect()
}

fn plug_from_text(text: &str) -> Result<Box<dyn BDelta>, String> {
    let mut words = text.split_whitespace();
    let name = words.next().ok_or("empty bdelta")?;
    let params = parse_params(&words.map(String::from).collect::<Vec<_>>())?;
    Ok(Box::new(bdelta_from(name, &params)?))
}

fn bounds(
    function: &str,
    raw: &[String],
    magnitude: bool,
    bdelta: Option<&str>,
    file: Option<&PathBuf>,
    format: Format,
) -> Outcome {
    let params = match parse_params(raw) {
        Ok(p) => p,
        Err(e) => return Outcome::usage(e),
    };
    let b = Bounds::new(if magnitude { BoundConfig::magnitude() } else { BoundConfig::default() });
    let mut report = Report {
        command: "bounds".into(),
        function: Some(function.into()),
        params: Some(params.clone()),
        magnitude: Some(magnitude),
        ..Report::default()
    };
    let value: Result<BoundValue, String> = (|| {
        Ok(match function {
            "g" => {
                let v = take(&params, &["n", "r", "d"])?;
                b.g_bound(v[0], v[1], v[2])
            }
            "f" => {
                let v = take(&params, &["n", "r", "m", "d"])?;
                b.f_bound(v[0], v[1], v[2], v[3])
            }
            "c" => {
                let v = take(&params, &["n", "r", "m", "d"])?;
                b.c_bound(v[0], v[1], v[2], v[3])
            }
            "l" => {
                let v = take(&params, &["n", "r", "d"])?;
                b.l_bound(v[0], v[1], v[2])
            }
            "tau0" => {
                let v = take(&params, &["n", "s", "h"])?;
                b.tau0(v[0], v[1], v[2])
            }
            "ritt" => {
                let v = take(&params, &["n", "s"])?;
                BoundValue::from(ritt_order_bound(v[0], v[1]))
            }
            "train" => {
                let v = take(&params, &["n", "s", "h", "d"])?;
                let trace = b.train(v[0], v[1], v[2], v[3]);
                report.a = Some(trace.a.iter().map(|x| x.to_string()).collect());
                report.tau = Some(trace.tau.iter().map(|x| x.to_string()).collect());
                trace.result
            }
            "final" => {
                let v = take(&params, &["r", "s", "h", "d"])?;
                let plug = match (bdelta, file) {
                    (Some(text), _) => plug_from_text(text)?,
                    (None, Some(path)) => {
                        let text =
                            std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {}", path.display(), e))?;
                        let p = parse(&text, None).map_err(|e| format!("{}:{}", path.display(), e))?;
                        Box::new(p.bdelta.ok_or("the problem file has no bdelta statement")?)
                    }
                    (None, None) => return Err("final needs a plug: pass --bdelta or --file".into()),
                };
                report.bdelta = Some(plug.name());
                b.final_b(v[0], v[1], v[2], v[3], plug.as_ref())
            }
            other => return Err(format!("unknown bound function `{}`", other)),
        })
    })();
    let value = match value {
        Ok(v) => v,
        Err(e) => return Outcome::usage(e),
    };
    let code = if matches!(value, BoundValue::Unbounded) { EXIT_BUDGET } else { EXIT_DEFINITIVE };
    report.verdict = if code == EXIT_DEFINITIVE { "computed" } else { "unbounded" }.into();
    report.definitive = code == EXIT_DEFINITIVE;
    report.value = Some(value.to_string());
    match format {
        Format::Json => Outcome::report(code, &report, format),
        Format::Text => {
            let mut stdout = format!("{}\n", value);
            if let (Some(a), Some(tau)) = (&report.a, &report.tau) {
                stdout.push_str(&format!("A: {}\ntau: {}\n", a.join(", "), tau.join(", ")));
            }
            Outcome { code, stdout, stderr: String::new() }
        }
    }
}
