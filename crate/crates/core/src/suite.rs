//! Verification suites over all modules, their reports, and canonical JSON
//! exports.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::correlators::{
    build_from_commuting, build_series, check_commutativity, check_linear_relations, check_top_relations,
    noncommuting_pair, noncommuting_series, product_family, random_commuting_matrices, scalar_series,
    solve_order_by_order, top_from_series, CorrelatorError, Matrix, Parity, SuperIndexSet, TopCorrelatorFamily,
    TupleSelection,
};
use crate::enumerative::{poincare_gf, poincare_strata, QPolynomial};
use crate::fan::{export_fan, verify_fan, verify_forgetful};
use crate::homology::{verify_action, verify_cap_maps, verify_technical_lemma, ActionTable};
use crate::partitions::{enumerate_partitions, good_family, partition_from_good_family, LabelSet};
use crate::rational::factorial;
use crate::ring::graded_dimensions;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SuiteError {
    #[error("unknown suite {0:?}; expected poincare, fan, ring, lemma, correlators or all")]
    UnknownSuite(String),
    #[error("unknown export kind {0:?}; expected partitions, fan, ring-dims or series")]
    UnknownExport(String),
    #[error("{name} = {value} is outside {min}..={max}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    #[error(transparent)]
    Correlator(#[from] CorrelatorError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteName {
    Poincare,
    Fan,
    Ring,
    Lemma,
    Correlators,
    All,
}

impl SuiteName {
    pub const INDIVIDUAL: [SuiteName; 5] = [
        SuiteName::Poincare,
        SuiteName::Fan,
        SuiteName::Ring,
        SuiteName::Lemma,
        SuiteName::Correlators,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::Poincare => "poincare",
            SuiteName::Fan => "fan",
            SuiteName::Ring => "ring",
            SuiteName::Lemma => "lemma",
            SuiteName::Correlators => "correlators",
            SuiteName::All => "all",
        }
    }
}

impl std::str::FromStr for SuiteName {
    type Err = SuiteError;
    fn from_str(s: &str) -> Result<Self, SuiteError> {
        Self::INDIVIDUAL
            .into_iter()
            .chain([SuiteName::All])
            .find(|n| n.as_str() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

/// Bounds, sample counts and seeds for every suite.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub poincare_n_max: usize,
    pub ring_n_max: usize,
    pub fan_n_max: usize,
    pub fan_samples: usize,
    pub forgetful_n_max: usize,
    pub lemma_n_max: usize,
    pub correlator_order: usize,
    pub correlator_indices: usize,
    pub correlator_dim: usize,
    pub correlator_families: usize,
    pub tuple_selection: TupleSelection,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            poincare_n_max: 8,
            ring_n_max: 5,
            fan_n_max: 5,
            fan_samples: 500,
            forgetful_n_max: 4,
            lemma_n_max: 4,
            correlator_order: 5,
            correlator_indices: 3,
            correlator_dim: 3,
            correlator_families: 2,
            tuple_selection: TupleSelection::Representatives,
        }
    }
}

impl SuiteConfig {
    /// Larger bounds and exhaustive tuple checks.
    pub fn deep() -> Self {
        SuiteConfig {
            poincare_n_max: 12,
            ring_n_max: 6,
            fan_n_max: 6,
            lemma_n_max: 5,
            forgetful_n_max: 5,
            correlator_families: 4,
            tuple_selection: TupleSelection::Exhaustive,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        let bounds: [(&'static str, usize, usize, usize); 10] = [
            ("poincare_n_max", self.poincare_n_max, 1, 16),
            ("ring_n_max", self.ring_n_max, 1, 6),
            ("fan_n_max", self.fan_n_max, 1, 6),
            ("fan_samples", self.fan_samples, 1, 100_000),
            ("forgetful_n_max", self.forgetful_n_max, 2, 5),
            ("lemma_n_max", self.lemma_n_max, 2, 5),
            ("correlator_order", self.correlator_order, 2, 6),
            ("correlator_indices", self.correlator_indices, 1, 4),
            ("correlator_dim", self.correlator_dim, 1, 4),
            ("correlator_families", self.correlator_families, 1, 16),
        ];
        for (name, value, min, max) in bounds {
            if value < min || value > max {
                return Err(SuiteError::OutOfRange { name, value, min, max });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub details: Value,
}

impl CheckResult {
    fn new(name: &str, passed: bool, summary: impl Into<String>, details: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            summary: summary.into(),
            details,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: SuiteName,
    pub version: String,
    pub config: SuiteConfig,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Only filled in on request, since it breaks reproducible output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("report serializes"))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("lmcalc {} suite {} seed {}\n", self.version, self.suite.as_str(), self.config.seed);
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{tag} {}: {}", c.name, c.summary);
        }
        if let Some(ms) = self.wall_time_ms {
            let _ = writeln!(out, "wall time {ms} ms");
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks FAILED" });
        out
    }
}

/// Pretty JSON with sorted object keys and a trailing newline.
pub fn canonical_json(value: &Value) -> String {
    // serde_json's map is ordered by key unless `preserve_order` is enabled
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

pub fn run_suite(name: SuiteName, config: &SuiteConfig) -> Result<Report, SuiteError> {
    config.validate()?;
    let suites: Vec<SuiteName> = match name {
        SuiteName::All => SuiteName::INDIVIDUAL.to_vec(),
        one => vec![one],
    };
    let mut checks = Vec::new();
    for s in suites {
        let part = match s {
            SuiteName::Poincare => poincare_checks(config),
            SuiteName::Fan => fan_checks(config),
            SuiteName::Ring => ring_checks(config),
            SuiteName::Lemma => lemma_checks(config),
            SuiteName::Correlators => correlator_checks(config)?,
            SuiteName::All => unreachable!("expanded above"),
        };
        checks.extend(part.into_iter().map(|mut c| {
            c.name = format!("{}.{}", s.as_str(), c.name);
            c
        }));
    }
    Ok(Report {
        suite: name,
        version: VERSION.to_string(),
        config: config.clone(),
        passed: checks.iter().all(|c| c.passed),
        checks,
        wall_time_ms: None,
    })
}

fn poly(n: usize) -> (QPolynomial, QPolynomial) {
    (
        poincare_gf(n).expect("n is positive"),
        poincare_strata(n).expect("n is positive"),
    )
}

const KNOWN_POINCARE: [&[i64]; 5] = [&[1], &[1, 1], &[1, 4, 1], &[1, 11, 11, 1], &[1, 26, 66, 26, 1]];

fn poincare_checks(config: &SuiteConfig) -> Vec<CheckResult> {
    let rows: Vec<(usize, QPolynomial, QPolynomial)> = (1..=config.poincare_n_max)
        .map(|n| {
            let (a, b) = poly(n);
            (n, a, b)
        })
        .collect();
    let disagree: Vec<usize> = rows.iter().filter(|(_, a, b)| a != b).map(|r| r.0).collect();
    let agreement = CheckResult::new(
        "methods_agree",
        disagree.is_empty(),
        format!("generating function and strata count agree for n = 1..{}", config.poincare_n_max),
        json!({
            "disagreeing_n": disagree,
            "polynomials": rows.iter().map(|(n, a, _)| json!({"n": n, "p": a, "display": a.to_string()})).collect::<Vec<_>>(),
        }),
    );
    let known_bad: Vec<usize> = rows
        .iter()
        .filter(|(n, a, _)| *n <= KNOWN_POINCARE.len() && *a != QPolynomial::from_i64(KNOWN_POINCARE[n - 1]))
        .map(|r| r.0)
        .collect();
    let known = CheckResult::new(
        "known_values",
        known_bad.is_empty(),
        format!("p_4 = {}", rows.get(3).map_or(String::new(), |r| r.1.to_string())),
        json!({ "mismatched_n": known_bad }),
    );
    let topo_bad: Vec<usize> = rows
        .iter()
        .filter(|(n, a, _)| {
            let h2 = BigInt::from(2).pow(*n as u32) - BigInt::from(*n as u64) - BigInt::one();
            let h2 = if *n == 1 { BigInt::zero() } else { h2 };
            a.eval(&BigInt::one()) != factorial(*n) || a.coeff(1) != h2
        })
        .map(|r| r.0)
        .collect();
    let topology = CheckResult::new(
        "euler_characteristic_and_h2",
        topo_bad.is_empty(),
        "p_n(1) = n! and the q coefficient is 2^n - n - 1",
        json!({ "mismatched_n": topo_bad }),
    );
    let shape_bad: Vec<usize> = rows
        .iter()
        .filter(|(n, a, _)| !a.is_palindromic() || !a.has_nonnegative_coefficients() || a.degree() != Some(n - 1))
        .map(|r| r.0)
        .collect();
    let shape = CheckResult::new(
        "palindromic",
        shape_bad.is_empty(),
        "palindromic with nonnegative coefficients and degree n - 1",
        json!({ "mismatched_n": shape_bad }),
    );
    vec![agreement, known, topology, shape]
}

fn ring_checks(config: &SuiteConfig) -> Vec<CheckResult> {
    let rows: Vec<Value> = (1..=config.ring_n_max)
        .map(|n| {
            let dims = graded_dimensions(&LabelSet::range(n));
            let (p, _) = poly(n);
            let expected: Vec<usize> = (0..n).map(|k| usize::try_from(p.coeff(k)).expect("small")).collect();
            json!({"n": n, "dimensions": dims, "expected": expected, "passed": dims == expected})
        })
        .collect();
    let passed = rows.iter().all(|r| r["passed"] == json!(true));
    vec![CheckResult::new(
        "dimensions_match_poincare",
        passed,
        format!("graded ranks equal Poincaré coefficients for n = 1..{}", config.ring_n_max),
        Value::Array(rows),
    )]
}

fn fan_checks(config: &SuiteConfig) -> Vec<CheckResult> {
    let reports: Vec<_> = (1..=config.fan_n_max)
        .map(|n| verify_fan(&LabelSet::range(n), config.fan_samples, config.seed.wrapping_add(n as u64)))
        .collect();
    let fan = CheckResult::new(
        "smooth_complete_fan",
        reports.iter().all(|r| r.passed()),
        format!(
            "smoothness, n! maximal cones, face lattice and {} located samples per n for n = 1..{}",
            config.fan_samples, config.fan_n_max
        ),
        json!(reports
            .iter()
            .map(|r| json!({
                "n": r.n,
                "cones": r.cone_count,
                "maximal_cones": r.maximal_cones,
                "expected_maximal_cones": r.expected_maximal_cones,
                "non_smooth": r.non_smooth,
                "wrong_dimension": r.wrong_dimension,
                "face_mismatches": r.face_mismatches.len(),
                "facet_mismatches": r.facet_mismatches,
                "samples": r.completeness.samples,
                "sample_failures": r.completeness.failures,
                "passed": r.passed(),
            }))
            .collect::<Vec<_>>()),
    );
    let forgetful: Vec<_> = (2..=config.forgetful_n_max).map(|n| verify_forgetful(&LabelSet::range(n))).collect();
    let coherence = CheckResult::new(
        "forgetful_coherence",
        forgetful.iter().all(|r| r.passed()),
        format!("forgetful and section maps for |B| = 2..{}", config.forgetful_n_max),
        json!(forgetful),
    );
    let bad: Vec<String> = (1..=config.forgetful_n_max)
        .flat_map(|n| enumerate_partitions(&LabelSet::range(n)))
        // the empty family of the one-block partition does not record its labels
        .filter(|tau| tau.len() > 1)
        .filter(|tau| partition_from_good_family(&good_family(tau)).ok().as_ref() != Some(tau))
        .map(|tau| tau.to_string())
        .collect();
    let round_trip = CheckResult::new(
        "good_family_round_trip",
        bad.is_empty(),
        format!("partition to good family and back for |B| <= {}", config.forgetful_n_max),
        json!({ "failures": bad }),
    );
    vec![fan, coherence, round_trip]
}

fn lemma_checks(config: &SuiteConfig) -> Vec<CheckResult> {
    let reports: Vec<_> = (1..=config.lemma_n_max).map(|n| verify_technical_lemma(&LabelSet::range(n))).collect();
    let lemma = CheckResult::new(
        "action_well_defined",
        reports.iter().all(|r| r.passed()),
        format!("five action checks for |B| = 1..{}", config.lemma_n_max),
        json!(reports),
    );
    let labels = LabelSet::range(config.lemma_n_max.min(4));
    let flipped = verify_action(&labels, ActionTable::FlippedBeta);
    let caught = !flipped.descent.passed() || !flipped.commutativity.passed();
    let control = CheckResult::new(
        "flipped_sign_is_caught",
        caught,
        format!(
            "flipped table at |B| = {}: {} descent and {} commutativity failures",
            labels.len(),
            flipped.descent.failures.len(),
            flipped.commutativity.failures.len()
        ),
        json!({
            "descent_failures": flipped.descent.failures.len(),
            "commutativity_failures": flipped.commutativity.failures.len(),
            "linear_annihilation_failures": flipped.linear_annihilation.failures.len(),
        }),
    );
    let caps: Vec<_> = (1..=config.lemma_n_max.min(4)).map(|n| verify_cap_maps(&LabelSet::range(n))).collect();
    let cap = CheckResult::new(
        "cap_maps_inverse",
        caps.iter().all(|r| r.passed()),
        "homology and cohomology maps are mutually inverse modulo relations",
        json!(caps),
    );
    vec![lemma, control, cap]
}

/// Labels `1..=k`, the first even and the rest odd.
fn mixed_index(k: usize) -> SuperIndexSet {
    SuperIndexSet::new((1..=k as u32).map(|a| (a, if a == 1 { Parity::Even } else { Parity::Odd }))).expect("distinct")
}

fn correlator_checks(config: &SuiteConfig) -> Result<Vec<CheckResult>, SuiteError> {
    let order = config.correlator_order;
    let dim = config.correlator_dim;
    let sel = config.tuple_selection;
    let even = SuperIndexSet::even(config.correlator_indices);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut forward = Vec::new();
    let mut converse = Vec::new();
    let mut solved = Vec::new();
    let mut trips = Vec::new();
    for _ in 0..config.correlator_families {
        let mats = random_commuting_matrices(config.correlator_indices, dim, rng.gen());
        let family = build_from_commuting(&even, order, &mats)?;
        let lin = check_linear_relations(&family, order, sel)?;
        let top = check_top_relations(&family, order, sel)?;
        let series = build_series(&family, order)?;
        let comm = check_commutativity(&series, None)?;
        forward.push(json!({
            "linear": lin.passed(), "top": top.passed(), "commutativity": comm.passed(),
            "relations": lin.relations, "failures": lin.failures, "series_failures": comm.failures,
        }));
        trips.push(top_from_series(&series)? == family);

        let index = mixed_index(config.correlator_indices);
        let s = scalar_series(&index, dim, order, 2, rng.gen());
        let comm = check_commutativity(&s, None)?;
        let back = top_from_series(&s)?;
        let lin = check_linear_relations(&back, order, sel)?;
        converse.push(json!({"commutativity": comm.passed(), "linear": lin.passed(), "failures": lin.failures}));
        trips.push(build_series(&back, order)? == s);

        let g = solve_order_by_order(&even, order, &mats, rng.gen())?;
        let lin = check_linear_relations(&g, order, sel)?;
        let comm = check_commutativity(&build_series(&g, order)?, None)?;
        solved.push(json!({"linear": lin.passed(), "commutativity": comm.passed(), "failures": lin.failures}));
    }
    let all_true = |rows: &[Value], keys: &[&str]| rows.iter().all(|r| keys.iter().all(|k| r[*k] == json!(true)));
    let mut out = vec![
        CheckResult::new(
            "commuting_families_pass",
            all_true(&forward, &["linear", "top", "commutativity"]),
            format!("{} families, order {order}, dim {dim}, {} indices", forward.len(), config.correlator_indices),
            Value::Array(forward),
        ),
        CheckResult::new(
            "passing_series_give_passing_families",
            all_true(&converse, &["commutativity", "linear"]),
            "scalar combinations of commuting matrices over mixed-parity indices",
            Value::Array(converse),
        ),
        CheckResult::new(
            "solved_families_pass",
            all_true(&solved, &["linear", "commutativity"]),
            "families extended level by level from commuting one-point values",
            Value::Array(solved),
        ),
        CheckResult::new(
            "series_round_trip",
            trips.iter().all(|&t| t),
            format!("series to family and back at order {order}"),
            json!(trips),
        ),
    ];
    out.push(negative_control(order)?);
    Ok(out)
}

fn negative_control(order: usize) -> Result<CheckResult, SuiteError> {
    let (a, b) = noncommuting_pair();
    let family: TopCorrelatorFamily = product_family(&SuperIndexSet::even(2), order, &[a, b])?;
    let lin = check_linear_relations(&family, order, TupleSelection::Representatives)?;
    let series = noncommuting_series(order);
    let comm = check_commutativity(&series, None)?;
    let lin_series = check_linear_relations(&top_from_series(&series)?, order, TupleSelection::Representatives)?;
    let comm_family = check_commutativity(&build_series(&family, order)?, None)?;
    let caught = !lin.passed() && !comm.passed() && !lin_series.passed() && !comm_family.passed();
    Ok(CheckResult::new(
        "noncommuting_control_fails",
        caught,
        format!(
            "{} relation and {} series failures for a non-commuting pair",
            lin.failure_count, comm.failure_count
        ),
        json!({
            "relation_failures": lin.failure_count,
            "series_failures": comm.failure_count,
            "relation_failures_from_series": lin_series.failure_count,
            "series_failures_from_family": comm_family.failure_count,
        }),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportKind {
    Partitions,
    Fan,
    RingDims,
    Series,
}

impl std::str::FromStr for ExportKind {
    type Err = SuiteError;
    fn from_str(s: &str) -> Result<Self, SuiteError> {
        match s {
            "partitions" => Ok(ExportKind::Partitions),
            "fan" => Ok(ExportKind::Fan),
            "ring-dims" => Ok(ExportKind::RingDims),
            "series" => Ok(ExportKind::Series),
            _ => Err(SuiteError::UnknownExport(s.to_string())),
        }
    }
}

/// Export parameters; `n` is the label count, or the number of indices for
/// series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExportParams {
    pub n: usize,
    pub order: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Default for ExportParams {
    fn default() -> Self {
        ExportParams {
            n: 3,
            order: 5,
            dim: 2,
            seed: 0,
        }
    }
}

/// Canonical JSON text for the requested object.
pub fn export(kind: ExportKind, params: &ExportParams) -> Result<String, SuiteError> {
    let check = |name: &'static str, value: usize, min: usize, max: usize| {
        if value < min || value > max {
            Err(SuiteError::OutOfRange { name, value, min, max })
        } else {
            Ok(())
        }
    };
    let value = match kind {
        ExportKind::Partitions => {
            check("n", params.n, 1, 7)?;
            json!(enumerate_partitions(&LabelSet::range(params.n)))
        }
        ExportKind::Fan => {
            check("n", params.n, 1, 7)?;
            json!(export_fan(&LabelSet::range(params.n)))
        }
        ExportKind::RingDims => {
            check("n", params.n, 1, 6)?;
            json!(graded_dimensions(&LabelSet::range(params.n)))
        }
        ExportKind::Series => {
            check("n", params.n, 1, 4)?;
            check("order", params.order, 1, 6)?;
            check("dim", params.dim, 1, 4)?;
            let mats: Vec<Matrix> = random_commuting_matrices(params.n, params.dim, params.seed);
            let family = build_from_commuting(&SuperIndexSet::even(params.n), params.order, &mats)?;
            json!(build_series(&family, params.order)?.to_file())
        }
    };
    Ok(canonical_json(&value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SuiteConfig {
        SuiteConfig {
            poincare_n_max: 6,
            ring_n_max: 4,
            fan_n_max: 3,
            fan_samples: 50,
            forgetful_n_max: 3,
            lemma_n_max: 3,
            correlator_order: 3,
            correlator_indices: 2,
            correlator_dim: 2,
            correlator_families: 1,
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn small_suites_pass() {
        let r = run_suite(SuiteName::All, &small()).unwrap();
        for c in &r.checks {
            assert!(c.passed, "{} {}", c.name, c.summary);
        }
        assert!(r.to_text().contains("PASS poincare.known_values: p_4 = q^3 + 11q^2 + 11q + 1"));
        assert_eq!(r.to_json(), run_suite(SuiteName::All, &small()).unwrap().to_json());
    }

    #[test]
    fn bad_config() {
        let c = SuiteConfig {
            ring_n_max: 9,
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(SuiteName::Ring, &c), Err(SuiteError::OutOfRange { .. })));
        assert!("bogus".parse::<SuiteName>().is_err());
        assert_eq!("lemma".parse::<SuiteName>(), Ok(SuiteName::Lemma));
    }

    #[test]
    fn exports() {
        let p = |n| ExportParams { n, ..ExportParams::default() };
        let parts: Value = serde_json::from_str(&export(ExportKind::Partitions, &p(3)).unwrap()).unwrap();
        assert_eq!(parts.as_array().unwrap().len(), 13);
        let dims = export(ExportKind::RingDims, &p(4)).unwrap();
        assert_eq!(serde_json::from_str::<Vec<usize>>(&dims).unwrap(), vec![1, 11, 11, 1]);
        assert!(dims.ends_with("]\n"));
        let fan: Value = serde_json::from_str(&export(ExportKind::Fan, &p(2)).unwrap()).unwrap();
        let cones = fan["cones"].as_array().unwrap();
        assert_eq!(cones.iter().filter(|c| c["generators"].as_array().unwrap().len() == 1).count(), 2);
        assert_eq!(cones.len(), 3);
        let s = export(ExportKind::Series, &ExportParams::default()).unwrap();
        assert_eq!(s, export(ExportKind::Series, &ExportParams::default()).unwrap());
    }
}
