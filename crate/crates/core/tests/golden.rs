//! Committed tables of ring ranks and Poincaré polynomials.

use std::collections::BTreeMap;

use lmcalc::enumerative::{poincare_gf, poincare_strata, QPolynomial};
use lmcalc::partitions::LabelSet;
use lmcalc::ring::graded_dimensions;

fn load(name: &str) -> BTreeMap<usize, Vec<i64>> {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn ring_dimensions_match_golden() {
    let golden = load("ring_dims.json");
    assert_eq!(golden.len(), 5);
    for (n, dims) in golden {
        let got: Vec<i64> = graded_dimensions(&LabelSet::range(n)).into_iter().map(|d| d as i64).collect();
        assert_eq!(got, dims, "n = {n}");
    }
}

#[test]
fn poincare_polynomials_match_golden() {
    let golden = load("poincare.json");
    assert_eq!(golden.len(), 8);
    for (n, coeffs) in golden {
        let expected = QPolynomial::from_i64(&coeffs);
        assert_eq!(poincare_gf(n).unwrap(), expected, "n = {n}");
        assert_eq!(poincare_strata(n).unwrap(), expected, "n = {n}");
    }
}
