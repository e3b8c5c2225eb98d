//! Predicted vs. true Newton polygons, and the large-`p` limit scan.

use std::collections::BTreeMap;

use num_prime::nt_funcs::is_prime64;
use serde::Serialize;

use crate::geometry::hodge_polygon;
use crate::json::{serialize_rational, serialize_rationals};
use crate::oracle::{oracle_np, OracleOptions, OracleReport};
use crate::polygon::PolygonData;
use crate::slopes::{max_deviation_from_hodge, predicted_np, FamilyParams};
use crate::{Error, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Match,
    Mismatch,
    OracleSkipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    pub params: FamilyParams,
    pub predicted: PolygonData,
    pub hodge: PolygonData,
    pub oracle: Option<PolygonData>,
    pub verdict: Verdict,
    /// Oracle slope minus predicted slope, per unit segment.
    #[serde(serialize_with = "serialize_rationals")]
    pub deviations: Vec<Rational>,
    /// `p` exceeds the bound, so a mismatch would contradict a theorem.
    pub certified: bool,
    pub warnings: Vec<String>,
}

impl ComparisonReport {
    /// A mismatch that matters: the prediction is certified and disagrees.
    pub fn is_failure(&self) -> bool {
        self.certified && self.verdict == Verdict::Mismatch
    }
}

/// Compares against an oracle run, or reports the prediction alone when
/// `oracle` is `None`.
pub fn compare_with(n: u32, p: u64, t: u64, oracle: Option<&OracleReport>) -> Result<ComparisonReport> {
    let params = FamilyParams::new(n, p, Some(t))?;
    let prediction = predicted_np(n, p)?;
    let hodge = hodge_polygon(n)?;
    let mut warnings = prediction.warnings.clone();
    let (oracle_poly, verdict, deviations) = match oracle {
        Some(r) => {
            if r.params != params {
                return Err(Error::invalid("oracle report is for different parameters"));
            }
            let dev = r.polygon.slope_deviations(&prediction.polygon).expect("both have 2n+1 slopes");
            let verdict = if r.polygon == prediction.polygon { Verdict::Match } else { Verdict::Mismatch };
            if !prediction.certified {
                warnings.push("comparison below the prime bound is informational".to_string());
            }
            warnings.extend(r.warnings.iter().cloned());
            (Some(r.polygon.clone()), verdict, dev)
        }
        None => (None, Verdict::OracleSkipped, Vec::new()),
    };
    Ok(ComparisonReport {
        params,
        predicted: prediction.polygon,
        hodge,
        oracle: oracle_poly,
        verdict,
        deviations,
        certified: prediction.certified,
        warnings,
    })
}

pub fn compare(n: u32, p: u64, t: u64, opts: &OracleOptions) -> Result<ComparisonReport> {
    let report = oracle_np(n, p, t, opts)?;
    compare_with(n, p, t, Some(&report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitScanRow {
    pub p: u64,
    /// `p mod n`.
    pub residue: u64,
    #[serde(serialize_with = "serialize_rational")]
    pub max_dev: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct LimitScan {
    pub n: u32,
    pub rows: Vec<LimitScanRow>,
    /// Within each residue class the deviation is identically zero or
    /// strictly decreasing in `p`.
    pub decreasing_within_classes: bool,
}

/// Maximal predicted-vs-Hodge slope deviation for every prime in
/// `lo..=hi` with `p > n`.
pub fn scan_limit(n: u32, lo: u64, hi: u64) -> Result<LimitScan> {
    if lo > hi {
        return Err(Error::invalid(format!("empty prime range {lo}..{hi}")));
    }
    let rows: Vec<LimitScanRow> = (lo.max(n as u64 + 1)..=hi)
        .filter(|&p| is_prime64(p))
        .map(|p| {
            Ok(LimitScanRow { p, residue: p % n as u64, max_dev: max_deviation_from_hodge(n, p)? })
        })
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<u64, Vec<&Rational>> = BTreeMap::new();
    for r in &rows {
        classes.entry(r.residue).or_default().push(&r.max_dev);
    }
    let decreasing_within_classes = classes.values().all(|devs| {
        devs.iter().all(|d| num_traits::Zero::is_zero(*d)) || devs.windows(2).all(|w| w[0] > w[1])
    });
    Ok(LimitScan { n, rows, decreasing_within_classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    #[test]
    fn scan_n3() {
        let scan = scan_limit(3, 5, 101).unwrap();
        assert!(scan.decreasing_within_classes);
        for r in &scan.rows {
            let want = if r.residue == 1 { rat(0, 1) } else { rat(14, 3 * (r.p as i64 - 1)) };
            assert_eq!(r.max_dev, want, "p = {}", r.p);
        }
        assert_eq!(scan.rows.first().unwrap().p, 5);
        assert_eq!(scan.rows.last().unwrap().p, 101);
    }

    #[test]
    fn ordinary_comparison_matches() {
        let r = compare(3, 7, 2, &OracleOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Match);
        assert!(r.deviations.iter().all(num_traits::Zero::is_zero));
    }

    #[test]
    fn skipped_oracle() {
        let r = compare_with(3, 47, 1, None).unwrap();
        assert_eq!(r.verdict, Verdict::OracleSkipped);
        assert!(r.certified);
    }
}
