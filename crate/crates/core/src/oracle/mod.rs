//! Ground truth: the L-polynomial of `f_t = x^n + y + t/(xy)` over `F_p`
//! computed from exact toric sums, and its Newton polygon.
//!
//! Only `S_1..S_{n+1}` of `f_t` and `S_1..S_n` of the companion are needed;
//! the remaining coefficients come from the functional equation.

pub mod lpoly;
pub mod sums;

use serde::Serialize;

use crate::cyclo::CycInt;
use crate::geometry::hodge_polygon;
use crate::json::serialize_opt_rationals;
use crate::polygon::PolygonData;
use crate::slopes::{predicted_np, FamilyParams};
use crate::{Error, Rational, Result};

pub use lpoly::{complete_by_functional_equation, lpoly_from_power_sums, newton_polygon_of, Completion};
pub use sums::{
    toric_sum, toric_sum_with, trace_histogram, ConvolutionContext, SumAlgorithm, SumOptions, SumSpec,
    CONVOLUTION_MAX_FIELD, NAIVE_MAX_PAIRS,
};

/// Reciprocal roots must satisfy `|β| = p` to this relative accuracy.
pub const PURITY_TOLERANCE: f64 = 1e-6;

/// `L(f, T)^{-1} = Σ (-1)^j e_j T^j` over `F_{p^a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LPolynomial {
    pub p: u64,
    pub a: u32,
    pub coeffs: Vec<CycInt>,
}

impl LPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct OracleOptions {
    pub algorithm: SumAlgorithm,
    /// Largest extension degree for direct sums of `f_t`; at least `n + 1` is
    /// always used. Larger values add redundant cross-checks and allow the
    /// direct fallback when the companion is degenerate.
    pub max_k: Option<usize>,
    pub mem_budget_bytes: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompletionMethod {
    FunctionalEquation,
    Direct,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompletionInfo {
    pub method: CompletionMethod,
    /// Companion index used to solve for the top coefficient.
    pub pivot: Option<usize>,
    /// Largest `k` with a directly computed `S_k(f_t)`.
    pub direct_max_k: usize,
    /// Coefficients confirmed by two independent routes.
    pub cross_checked: Vec<usize>,
    /// `e_{2n+2} = 0`, when enough sums were computed to see it.
    pub vanishes_above_degree: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub params: FamilyParams,
    pub algorithm: SumAlgorithm,
    pub lpoly: LPolynomial,
    /// `ord_q e_j`, `null` for vanishing coefficients.
    #[serde(serialize_with = "serialize_opt_rationals")]
    pub coefficient_ords: Vec<Option<Rational>>,
    pub polygon: PolygonData,
    pub hodge: PolygonData,
    /// Newton polygon on or above the Hodge polygon, same endpoints.
    pub hodge_ok: bool,
    /// Predicted slopes, when `p > n`.
    pub predicted: Option<PolygonData>,
    /// Agreement with the prediction where it is a theorem (`p` above the bound).
    pub prediction_match: Option<bool>,
    /// Agreement with the prediction below the bound; informational only.
    pub informational_match: Option<bool>,
    pub completion: CompletionInfo,
    /// `max_j | |β_j|/p - 1 |` under `ζ ↦ e^{2πi/p}`.
    pub purity_max_deviation: f64,
    pub purity_ok: bool,
    pub warnings: Vec<String>,
}

/// Low power sums of `f_t` (`k = 1..=kf`) and its companion (`k = 1..=kc`),
/// sharing one field setup per extension degree.
pub fn power_sums(
    n: u32,
    p: u64,
    t: u64,
    kf: usize,
    kc: usize,
    algorithm: SumAlgorithm,
    opts: &SumOptions,
) -> Result<(Vec<CycInt>, Vec<CycInt>)> {
    let mut sf = Vec::with_capacity(kf);
    let mut sc = Vec::with_capacity(kc);
    for k in 1..=kf.max(kc) {
        let mut specs = Vec::new();
        if k <= kf {
            specs.push(SumSpec::family(n, p, k, t));
        }
        if k <= kc {
            specs.push(SumSpec::companion(n, p, k, t));
        }
        let hists: Vec<Vec<u64>> = match algorithm {
            SumAlgorithm::Naive => specs
                .iter()
                .map(|s| trace_histogram(s, algorithm, opts))
                .collect::<Result<_>>()?,
            SumAlgorithm::Convolution => {
                let ctx = ConvolutionContext::new(p, k, opts)?;
                specs.iter().map(|s| ctx.histogram(s)).collect::<Result<_>>()?
            }
        };
        let mut it = hists.iter().map(|h| CycInt::from_histogram(p, h));
        if k <= kf {
            sf.push(it.next().unwrap());
        }
        if k <= kc {
            sc.push(it.next().unwrap());
        }
    }
    Ok((sf, sc))
}

/// `e_0..e_K` of `f_t` from direct sums `S_1..S_K`, no functional equation.
pub fn direct_coefficients(n: u32, p: u64, t: u64, k_max: usize, algorithm: SumAlgorithm, opts: &SumOptions) -> Result<Vec<CycInt>> {
    let (sf, _) = power_sums(n, p, t, k_max, 0, algorithm, opts)?;
    lpoly_from_power_sums(p, &sf)
}

/// Whether `S_k` over `F_{p^k}` is within the engine's domain.
pub fn sum_is_feasible(p: u64, k: usize, algorithm: SumAlgorithm) -> bool {
    let q = (p as u128).checked_pow(k as u32);
    match (algorithm, q) {
        (_, None) => false,
        (SumAlgorithm::Naive, Some(q)) => q.checked_mul(q).map_or(false, |q2| q2 <= NAIVE_MAX_PAIRS),
        (SumAlgorithm::Convolution, Some(q)) => q <= CONVOLUTION_MAX_FIELD as u128,
    }
}

pub fn oracle_np(n: u32, p: u64, t: u64, opts: &OracleOptions) -> Result<OracleReport> {
    let params = FamilyParams::new(n, p, Some(t))?;
    let nu = n as usize;
    let deg = 2 * nu + 1;
    let sum_opts = SumOptions { mem_budget_bytes: opts.mem_budget_bytes };
    let kf = opts.max_k.unwrap_or(nu + 1).max(nu + 1);
    if !sum_is_feasible(p, nu + 1, opts.algorithm) {
        return Err(Error::DomainTooLarge {
            what: "p^(n+1) for the oracle",
            size: (p as u128).saturating_pow(n + 1),
            bound: match opts.algorithm {
                SumAlgorithm::Naive => NAIVE_MAX_PAIRS,
                SumAlgorithm::Convolution => CONVOLUTION_MAX_FIELD as u128,
            },
        });
    }
    let kf = (nu + 1..=kf).take_while(|&k| sum_is_feasible(p, k, opts.algorithm)).last().unwrap();

    let (sf, sc) = power_sums(n, p, t, kf, nu, opts.algorithm, &sum_opts)?;
    let e_f = lpoly_from_power_sums(p, &sf)?;
    let e_c = lpoly_from_power_sums(p, &sc)?;

    let vanishes_above_degree = (kf > deg).then(|| e_f[deg + 1..].iter().all(CycInt::is_zero));
    let mut warnings = Vec::new();
    let (info, coeffs) = match complete_by_functional_equation(nu, p, &e_f, &e_c) {
        Ok(c) => (
            CompletionInfo {
                method: CompletionMethod::FunctionalEquation,
                pivot: Some(c.pivot),
                direct_max_k: kf,
                cross_checked: c.cross_checked,
                vanishes_above_degree,
            },
            c.coeffs,
        ),
        Err(Error::Degenerate(msg)) if sum_is_feasible(p, deg, opts.algorithm) => {
            warnings.push(format!("functional equation unusable ({msg}); using direct sums"));
            let direct = if kf >= deg {
                e_f[..=deg].to_vec()
            } else {
                direct_coefficients(n, p, t, deg, opts.algorithm, &sum_opts)?
            };
            let info = CompletionInfo {
                method: CompletionMethod::Direct,
                pivot: None,
                direct_max_k: kf.max(deg),
                cross_checked: Vec::new(),
                vanishes_above_degree,
            };
            (info, direct)
        }
        Err(e) => return Err(e),
    };
    if coeffs[deg].is_zero() {
        return Err(Error::Inconsistent(format!("e_{deg} vanishes; the L-polynomial has lower degree")));
    }
    if info.vanishes_above_degree == Some(false) {
        return Err(Error::Inconsistent(format!("e_{} is non-zero", deg + 1)));
    }

    let lpoly = LPolynomial { p, a: 1, coeffs };
    let (polygon, coefficient_ords) = newton_polygon_of(&lpoly.coeffs, 1)?;
    let hodge = hodge_polygon(n)?;
    let hodge_ok = polygon.lies_on_or_above(&hodge);

    let prediction = if p > n as u64 { Some(predicted_np(n, p)?) } else { None };
    let (prediction_match, informational_match) = match &prediction {
        Some(pr) if pr.certified => (Some(pr.polygon == polygon), None),
        Some(pr) => (None, Some(pr.polygon == polygon)),
        None => (None, None),
    };

    let purity_max_deviation = lpoly::purity_deviations(&lpoly.coeffs, p as f64, 1)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max);

    Ok(OracleReport {
        params,
        algorithm: opts.algorithm,
        lpoly,
        coefficient_ords,
        polygon,
        hodge,
        hodge_ok,
        predicted: prediction.map(|pr| pr.polygon),
        prediction_match,
        informational_match,
        completion: info,
        purity_max_deviation,
        purity_ok: purity_max_deviation < PURITY_TOLERANCE,
        warnings,
    })
}

/// `ord_p` of `b_m = (-1)^m e_m`.
pub fn coefficient_ord(report: &OracleReport, m: usize) -> Option<Rational> {
    report.coefficient_ords.get(m).cloned().flatten()
}

/// The companion's coefficients `e_0..e_K` (used by tests of the relation).
pub fn companion_coefficients(n: u32, p: u64, t: u64, k_max: usize, algorithm: SumAlgorithm) -> Result<Vec<CycInt>> {
    let (_, sc) = power_sums(n, p, t, 0, k_max, algorithm, &SumOptions::default())?;
    lpoly_from_power_sums(p, &sc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn run(n: u32, p: u64, t: u64) -> OracleReport {
        oracle_np(n, p, t, &OracleOptions::default()).unwrap()
    }

    #[test]
    fn n2_p3_is_ordinary() {
        let r = run(2, 3, 1);
        let want: Vec<Rational> = (0..5).map(|i| rat(i, 2)).collect();
        assert_eq!(r.polygon.slopes(), &want[..]);
        assert!(r.hodge_ok && r.purity_ok);
        assert_eq!(r.lpoly.degree(), 5);
    }

    #[test]
    fn direct_sums_confirm_completion() {
        let opts = OracleOptions { max_k: Some(6), ..Default::default() };
        let r = oracle_np(2, 5, 1, &opts).unwrap();
        assert_eq!(r.completion.method, CompletionMethod::FunctionalEquation);
        assert_eq!(r.completion.cross_checked, vec![4, 5]);
        assert_eq!(r.completion.vanishes_above_degree, Some(true));
    }

    #[test]
    fn engines_give_the_same_report() {
        let a = run(2, 5, 3);
        let b = oracle_np(2, 5, 3, &OracleOptions { algorithm: SumAlgorithm::Naive, ..Default::default() }).unwrap();
        assert_eq!(a.lpoly, b.lpoly);
    }

    #[test]
    fn small_prime_below_n() {
        // p = 2 < n = 3: no prediction, but the polygon is still bounded by Hodge.
        let r = run(3, 2, 1);
        assert!(r.predicted.is_none() && r.hodge_ok);
    }
}
