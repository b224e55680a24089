//! Command-line front end for the `lmcalc` checks and exports.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use lmcalc::correlators::{
    build_series, check_commutativity, check_linear_relations, top_from_series, FamilyFile, SeriesFile,
    TopCorrelatorFamily, TruncatedSeries, TupleSelection,
};
use lmcalc::enumerative::cross_check;
use lmcalc::fan::{verify_fan, verify_forgetful};
use lmcalc::homology::{verify_action, ActionTable};
use lmcalc::partitions::LabelSet;
use lmcalc::ring::graded_dimensions;
use lmcalc::suite::{canonical_json, export, run_suite, ExportKind, ExportParams, SuiteConfig, SuiteName};

#[derive(Parser)]
#[command(name = "lmcalc", version, about = "Exact checks on permutohedral varieties and matrix correlators")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Poincaré polynomials by two methods, with ring ranks for small n.
    Poincare {
        #[arg(long, default_value_t = 8)]
        n: usize,
        /// Also compare ring ranks up to this many labels.
        #[arg(long, default_value_t = 4)]
        ring_max: usize,
    },
    /// Fan smoothness, face lattice, sampled completeness and forgetful maps.
    Fan {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
    },
    /// Graded ranks of the ring on labels 1..n.
    Ring {
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// The five well-definedness checks of the module action.
    Homology {
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Use the sign-flipped action table (expected to fail).
        #[arg(long)]
        flipped: bool,
    },
    /// Checks on correlator families and series stored as JSON.
    Correlators(CorrelatorArgs),
    /// Run verification suites.
    Verify {
        #[arg(default_value = "all")]
        suite: String,
        /// Larger bounds and exhaustive tuple checks.
        #[arg(long)]
        deep: bool,
        /// Override the correlator truncation order.
        #[arg(long)]
        order: Option<usize>,
        /// Override the label-count bounds of the selected suites.
        #[arg(long)]
        n: Option<usize>,
        /// Report wall time (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Write canonical JSON for partitions, fan, ring-dims or series.
    Export {
        kind: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        order: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[command(group(ArgGroup::new("mode").required(true).multiple(false)))]
struct CorrelatorArgs {
    /// Family file to check against the relations and the series condition.
    #[arg(long, group = "mode")]
    check: Option<PathBuf>,
    /// Series file to check and convert to a family.
    #[arg(long, group = "mode")]
    from_series: Option<PathBuf>,
    /// Family file to send through the series and back.
    #[arg(long, group = "mode")]
    roundtrip: Option<PathBuf>,
    /// Highest level checked; defaults to the file's order.
    #[arg(long)]
    order: Option<usize>,
    /// Check every index tuple instead of sorted representatives.
    #[arg(long)]
    exhaustive: bool,
}

struct Outcome {
    passed: bool,
    value: Value,
    text: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.common.format {
                Format::Json => print!("{}", canonical_json(&out.value)),
                Format::Text => print!("{}", out.text),
            }
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

fn bounded(name: &str, n: usize, min: usize, max: usize) -> Result<()> {
    if n < min || n > max {
        bail!("--{name} {n} is outside {min}..={max}");
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.common.seed;
    match &cli.command {
        Command::Poincare { n, ring_max } => {
            bounded("n", *n, 1, 20)?;
            bounded("ring-max", *ring_max, 0, 6)?;
            let report = cross_check(*n, *ring_max);
            let mut text = String::new();
            for row in &report.rows {
                text.push_str(&format!("p_{} = {}", row.n, row.display));
                if let Some(dims) = &row.ring {
                    text.push_str(&format!("   ring ranks {dims:?}"));
                }
                text.push('\n');
            }
            for f in &report.failures {
                text.push_str(&format!("FAIL {f}\n"));
            }
            text.push_str(&format!("{} poincare n <= {}\n", status(report.passed()), n));
            Ok(Outcome {
                passed: report.passed(),
                value: json!(report),
                text,
            })
        }
        Command::Fan { n, samples } => {
            bounded("n", *n, 1, 6)?;
            let labels = LabelSet::range(*n);
            let fan = verify_fan(&labels, *samples, seed);
            let forgetful = (*n >= 2).then(|| verify_forgetful(&labels));
            let passed = fan.passed() && forgetful.as_ref().is_none_or(|f| f.passed());
            let text = format!(
                "{} fan n = {}: {} cones, {} maximal (expected {}), {} non-smooth, {} face mismatches, {}/{} samples located\n{} forgetful coherence\n",
                status(fan.passed()),
                n,
                fan.cone_count,
                fan.maximal_cones,
                fan.expected_maximal_cones,
                fan.non_smooth.len(),
                fan.face_mismatches.len(),
                fan.completeness.samples - fan.completeness.failures.len(),
                fan.completeness.samples,
                status(forgetful.as_ref().is_none_or(|f| f.passed())),
            );
            Ok(Outcome {
                passed,
                value: json!({"seed": seed, "fan": fan, "forgetful": forgetful, "passed": passed}),
                text,
            })
        }
        Command::Ring { n } => {
            bounded("n", *n, 1, 6)?;
            let dims = graded_dimensions(&LabelSet::range(*n));
            let report = cross_check(*n, 0);
            let p = &report.rows[*n - 1].generating_function;
            let expected: Vec<usize> = (0..*n).map(|k| p.coeff(k).try_into().expect("small")).collect();
            let passed = dims == expected;
            Ok(Outcome {
                passed,
                value: json!({"n": n, "dimensions": dims, "poincare": expected, "passed": passed}),
                text: format!("{} ring n = {n}: ranks {dims:?}, Poincaré coefficients {expected:?}\n", status(passed)),
            })
        }
        Command::Homology { n, flipped } => {
            bounded("n", *n, 1, 5)?;
            let table = if *flipped { ActionTable::FlippedBeta } else { ActionTable::Standard };
            let report = verify_action(&LabelSet::range(*n), table);
            let mut text = String::new();
            for (name, o) in report.outcomes() {
                text.push_str(&format!("{} {name}: {} checked, {} failures\n", status(o.passed()), o.checked, o.failures.len()));
            }
            Ok(Outcome {
                passed: report.passed(),
                value: json!(report),
                text,
            })
        }
        Command::Correlators(args) => correlators(args),
        Command::Verify {
            suite,
            deep,
            order,
            n,
            timing,
        } => {
            let name: SuiteName = suite.parse()?;
            let mut config = if *deep { SuiteConfig::deep() } else { SuiteConfig::default() };
            config.seed = seed;
            if let Some(o) = order {
                config.correlator_order = *o;
            }
            if let Some(n) = *n {
                let all = name == SuiteName::All;
                if all || name == SuiteName::Poincare {
                    config.poincare_n_max = n;
                }
                if all || name == SuiteName::Ring {
                    config.ring_n_max = n;
                }
                if all || name == SuiteName::Fan {
                    config.fan_n_max = n;
                    config.forgetful_n_max = n;
                }
                if all || name == SuiteName::Lemma {
                    config.lemma_n_max = n;
                }
            }
            let start = Instant::now();
            let mut report = run_suite(name, &config)?;
            if *timing {
                report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
            }
            Ok(Outcome {
                passed: report.passed,
                value: serde_json::to_value(&report)?,
                text: report.to_text(),
            })
        }
        Command::Export {
            kind,
            n,
            order,
            dim,
            out,
        } => {
            let kind: ExportKind = kind.parse()?;
            let text = export(
                kind,
                &ExportParams {
                    n: *n,
                    order: *order,
                    dim: *dim,
                    seed,
                },
            )?;
            match out {
                Some(path) => {
                    fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                    Ok(Outcome {
                        passed: true,
                        value: json!({"written": path.display().to_string()}),
                        text: format!("wrote {}\n", path.display()),
                    })
                }
                None => Ok(Outcome {
                    passed: true,
                    value: serde_json::from_str(&text)?,
                    text,
                }),
            }
        }
    }
}

/// A file without an explicit order takes `--order` when given.
fn read_family(path: &Path, order: Option<usize>) -> Result<TopCorrelatorFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut file: FamilyFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    if file.order.is_none() {
        file.order = order;
    }
    Ok(TopCorrelatorFamily::from_file(&file)?)
}

fn read_series(path: &Path) -> Result<TruncatedSeries> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file: SeriesFile = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(TruncatedSeries::from_file(&file)?)
}

fn selection(args: &CorrelatorArgs) -> TupleSelection {
    if args.exhaustive {
        TupleSelection::Exhaustive
    } else {
        TupleSelection::Representatives
    }
}

fn order_for(args: &CorrelatorArgs, file_order: usize) -> Result<usize> {
    let order = args.order.unwrap_or(file_order);
    if order > file_order {
        bail!("--order {order} exceeds the order {file_order} of the input");
    }
    Ok(order)
}

fn correlators(args: &CorrelatorArgs) -> Result<Outcome> {
    let sel = selection(args);
    if let Some(path) = &args.check {
        let family = read_family(path, args.order)?;
        let order = order_for(args, family.order())?;
        let lin = check_linear_relations(&family, order, sel)?;
        let comm = if order >= 2 {
            Some(check_commutativity(&build_series(&family, order)?, None)?)
        } else {
            None
        };
        let comm_ok = comm.as_ref().is_none_or(|c| c.passed());
        let passed = lin.passed() && comm_ok;
        let text = format!(
            "{} linear relations to level {order}: {} tuples, {} relations, {} failures\n{} series condition\n",
            status(lin.passed()),
            lin.tuples,
            lin.relations,
            lin.failure_count,
            status(comm_ok)
        );
        return Ok(Outcome {
            passed,
            value: json!({"linear_relations": lin, "commutativity": comm, "passed": passed}),
            text,
        });
    }
    if let Some(path) = &args.from_series {
        let series = read_series(path)?;
        let order = order_for(args, series.order())?;
        let comm = check_commutativity(&series, None)?;
        let family = top_from_series(&series)?;
        let lin = check_linear_relations(&family, order, sel)?;
        let passed = comm.passed() && lin.passed();
        let text = format!(
            "{} series condition: {} failures\n{} linear relations of the family: {} failures\n",
            status(comm.passed()),
            comm.failure_count,
            status(lin.passed()),
            lin.failure_count
        );
        return Ok(Outcome {
            passed,
            value: json!({"commutativity": comm, "family": family.to_file(), "linear_relations": lin, "passed": passed}),
            text,
        });
    }
    let path = args.roundtrip.as_ref().expect("one mode is required");
    let family = read_family(path, args.order)?;
    let order = order_for(args, family.order())?;
    let series = build_series(&family, family.order())?;
    let back = top_from_series(&series)?;
    let passed = back == family;
    Ok(Outcome {
        passed,
        value: json!({"order": order, "series": series.to_file(), "identical": passed}),
        text: format!("{} family to series and back at order {}\n", status(passed), family.order()),
    })
}
