//! Rigorous lower bounds for the growth constant mu_3 = lim w_n^(1/n).
//!
//! Two routes, both valid because direct sums of 3-stack-sortable
//! permutations are 3-stack-sortable (the sequence is supermultiplicative):
//!   - root bound: mu_3 >= w_n^(1/n) for every n;
//!   - indecomposable bound: with W~ = W/(1+W) the generating function of
//!     sum-indecomposable permutations, W~(t) < 1 for 0 < t < 1/mu_3, so the
//!     t where any partial sum of W~ reaches 1 gives mu_3 >= 1/t.
//! Plus checks of the binomial-bound conjecture w_n <= C(4n, n) (refuted by
//! any bound above 256/27) and log-convexity of the sequence.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use stacksort_core::{CoefficientSeries, Provenance};
use stacksort_numeric::{bits_for_digits, BigFloat};

#[derive(Debug, thiserror::Error)]
pub enum BoundsError {
    #[error("series is empty")]
    Empty,
    #[error("negative coefficient in the indecomposable series at n = {0} (implementation bug)")]
    NegativeIndecomposable(usize),
    #[error("partial sums never reach 1 on the bracket (got {0})")]
    BracketTooSmall(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, BoundsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BoundMethod {
    #[serde(rename = "root")]
    Root,
    #[serde(rename = "indecomposable")]
    Indecomposable,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct BoundReport {
    pub method: BoundMethod,
    pub n_used: usize,
    /// Decimal rendering of the bound at the working precision.
    pub bound_value: String,
    pub bound_f64: f64,
    /// The root of the partial sum (indecomposable method only).
    pub t_c: Option<String>,
    /// True when derived from exact-certified coefficients.
    pub certified: bool,
}

fn certified(series: &CoefficientSeries) -> bool {
    series.provenance == Provenance::ExactCertified
}

/// mu_3 >= w_n^(1/n).
pub fn root_bound(series: &CoefficientSeries, n: usize, digits: u32) -> Result<BoundReport> {
    if series.is_empty() || n < 1 || n > series.len() {
        return Err(BoundsError::InvalidInput(format!(
            "root bound needs 1 <= n <= {}",
            series.len()
        )));
    }
    let prec = bits_for_digits(digits + 10);
    let w = BigFloat::from_bigint(series.coeff(n), prec);
    let bound = (&w.ln() / &BigFloat::from_u64(n as u64, prec)).exp();
    Ok(BoundReport {
        method: BoundMethod::Root,
        n_used: n,
        bound_value: bound.to_decimal(digits as usize),
        bound_f64: bound.to_f64(),
        t_c: None,
        certified: certified(series),
    })
}

/// Coefficients of W~ = W/(1+W): w~_n = w_n - sum_{j=1}^{n-1} w~_j w_{n-j}.
/// For a counting series the results must stay nonnegative (they count the
/// sum-indecomposable permutations).
pub fn indecomposable_series(series: &CoefficientSeries) -> Result<CoefficientSeries> {
    if series.is_empty() {
        return Err(BoundsError::Empty);
    }
    let w = &series.coeffs;
    let mut wt: Vec<BigInt> = Vec::with_capacity(w.len());
    for n in 1..=w.len() {
        let mut acc = w[n - 1].clone();
        for j in 1..n {
            acc -= &wt[j - 1] * &w[n - j - 1];
        }
        wt.push(acc);
    }
    if let Some(i) = wt.iter().position(|v| v.is_negative()) {
        return Err(BoundsError::NegativeIndecomposable(i + 1));
    }
    Ok(CoefficientSeries {
        name: format!("{}-indecomposable", series.name),
        coeffs: wt,
        provenance: series.provenance,
    })
}

/// Reconstruct W from W~ via W = W~/(1 - W~): w_n = w~_n + sum w~_j w_{n-j}.
pub fn recompose(series: &CoefficientSeries) -> CoefficientSeries {
    let wt = &series.coeffs;
    let mut w: Vec<BigInt> = Vec::with_capacity(wt.len());
    for n in 1..=wt.len() {
        let mut acc = wt[n - 1].clone();
        for j in 1..n {
            acc += &wt[j - 1] * &w[n - j - 1];
        }
        w.push(acc);
    }
    CoefficientSeries {
        name: series.name.clone(),
        coeffs: w,
        provenance: series.provenance,
    }
}

/// Signed division variant of the W <-> W~ identity for algebraic sanity
/// checks on non-counting inputs (where negative coefficients are fine).
pub fn indecomposable_series_unchecked(coeffs: &[BigInt]) -> Vec<BigInt> {
    let mut wt: Vec<BigInt> = Vec::with_capacity(coeffs.len());
    for n in 1..=coeffs.len() {
        let mut acc = coeffs[n - 1].clone();
        for j in 1..n {
            acc -= &wt[j - 1] * &coeffs[n - j - 1];
        }
        wt.push(acc);
    }
    wt
}

/// Find t_c where the partial sum of W~ reaches 1 (bisection to 1e-12) and
/// report mu_3 >= 1/t_c. The default bracket (0, 0.2) widens automatically
/// for very short series whose partial sums stay small that far out.
pub fn indecomposable_bound(series: &CoefficientSeries, digits: u32) -> Result<BoundReport> {
    let wt = indecomposable_series(series)?;
    let prec = bits_for_digits(digits.max(20) + 10);
    let coeffs: Vec<BigFloat> = wt
        .coeffs
        .iter()
        .map(|c| BigFloat::from_bigint(c, prec))
        .collect();
    let one = BigFloat::from_i64(1, prec);
    let horner = |t: &BigFloat| -> BigFloat {
        let mut acc = BigFloat::zero(prec);
        for c in coeffs.iter().rev() {
            acc = &(&acc * t) + c;
        }
        &acc * t
    };
    // increasing in t: widen the bracket until the sum passes 1
    let mut hi = BigFloat::parse("0.2", prec).unwrap();
    let mut widenings = 0;
    while horner(&hi).cmp_val(&one) == std::cmp::Ordering::Less {
        widenings += 1;
        if widenings > 8 {
            return Err(BoundsError::BracketTooSmall(horner(&hi).to_f64()));
        }
        hi = &hi * &BigFloat::from_i64(2, prec);
    }
    let mut lo = BigFloat::zero(prec);
    // bisection to absolute 1e-12 on t
    let tol = BigFloat::parse("1e-12", prec).unwrap();
    while (&hi - &lo).cmp_val(&tol) == std::cmp::Ordering::Greater {
        let mid = {
            let (m, e) = (&hi + &lo).to_parts();
            BigFloat::from_parts(m, e - 1, prec)
        };
        if horner(&mid).cmp_val(&one) == std::cmp::Ordering::Less {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let t_c = &(&hi + &lo) / &BigFloat::from_i64(2, prec);
    let bound = &one / &t_c;
    Ok(BoundReport {
        method: BoundMethod::Indecomposable,
        n_used: series.len(),
        bound_value: bound.to_decimal(digits as usize),
        bound_f64: bound.to_f64(),
        t_c: Some(t_c.to_decimal(digits as usize)),
        certified: certified(series),
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ConjectureReport {
    /// First n with w_n > C(4n, n), if any.
    pub binomial_first_violation: Option<usize>,
    /// A rigorous lower bound above 256/27 refutes the binomial conjecture
    /// asymptotically.
    pub binomial_refuted_by_bound: bool,
    pub refuting_bound: Option<f64>,
    /// Ratios w_{n+1}/w_n nondecreasing over the whole computed range.
    pub log_convex: bool,
    pub log_convexity_first_violation: Option<usize>,
}

/// The binomial-bound and log-convexity checks. `rigorous_bound` is an
/// already-established lower bound on mu_3 (for the asymptotic refutation).
pub fn conjecture_checks(series: &CoefficientSeries, rigorous_bound: Option<f64>) -> Result<ConjectureReport> {
    if series.is_empty() {
        return Err(BoundsError::Empty);
    }
    let w = &series.coeffs;
    let mut binom_violation = None;
    for (i, wn) in w.iter().enumerate() {
        let n = (i + 1) as u64;
        if wn > &binomial(4 * n, n) {
            binom_violation = Some(i + 1);
            break;
        }
    }
    // log-convex: w_{n+1}/w_n nondecreasing, cross-multiplied exactly
    let mut lc_violation = None;
    for n in 1..w.len().saturating_sub(1) {
        // compare w_{n+1}/w_n <= w_{n+2}/w_{n+1}
        let lhs = &w[n] * &w[n];
        let rhs = &w[n - 1] * &w[n + 1];
        if lhs > rhs {
            lc_violation = Some(n);
            break;
        }
    }
    let threshold = 256.0 / 27.0;
    let refuted = rigorous_bound.map(|b| b > threshold).unwrap_or(false);
    Ok(ConjectureReport {
        binomial_first_violation: binom_violation,
        binomial_refuted_by_bound: refuted,
        refuting_bound: rigorous_bound.filter(|b| *b > threshold),
        log_convex: lc_violation.is_none(),
        log_convexity_first_violation: lc_violation,
    })
}

fn binomial(n: u64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(vals: &[u64]) -> CoefficientSeries {
        CoefficientSeries {
            name: "w".into(),
            coeffs: vals.iter().map(|&v| BigInt::from(v)).collect(),
            provenance: Provenance::ExactCertified,
        }
    }

    const W13: [u64; 13] = [
        1, 2, 6, 24, 114, 606, 3494, 21426, 137901, 922862, 6377818, 45281958, 328969075,
    ];

    #[test]
    fn indecomposable_prefix() {
        let wt = indecomposable_series(&series(&W13)).unwrap();
        let expect: Vec<u64> = vec![1, 1, 3];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(wt.coeffs[i], BigInt::from(*e), "wt_{}", i + 1);
        }
    }

    #[test]
    fn round_trip_recomposition() {
        let s = series(&W13);
        let wt = indecomposable_series(&s).unwrap();
        let back = recompose(&wt);
        assert_eq!(back.coeffs, s.coeffs);
    }

    #[test]
    fn single_term_w_equals_t() {
        // W = t: W~ = t - t^2 + t^3 - ... as an algebraic identity
        let coeffs = vec![BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        let wt = indecomposable_series_unchecked(&coeffs);
        let expect: Vec<i64> = vec![1, -1, 1, -1];
        for (a, b) in wt.iter().zip(expect) {
            assert_eq!(a, &BigInt::from(b));
        }
    }

    #[test]
    fn trivial_bounds() {
        let s = series(&[1]);
        let rb = root_bound(&s, 1, 20).unwrap();
        assert_eq!(rb.bound_f64, 1.0);
        // w~_1 = 1: partial sum reaches 1 at t = 1 after bracket widening
        let ib = indecomposable_bound(&s, 20).unwrap();
        assert!((ib.bound_f64 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn thirteen_term_bounds_and_ordering() {
        let s = series(&W13);
        let rb = root_bound(&s, 13, 30).unwrap();
        // w_13^(1/13) = 328969075^(1/13) ~ 4.52
        assert!((rb.bound_f64 - 328969075f64.powf(1.0 / 13.0)).abs() < 1e-10);
        let ib = indecomposable_bound(&s, 30).unwrap();
        assert!(ib.bound_f64 > rb.bound_f64, "indecomposable must dominate");
        assert!(ib.certified);
    }

    #[test]
    fn conjecture_checks_on_prefix() {
        let s = series(&W13);
        let report = conjecture_checks(&s, Some(9.4854)).unwrap();
        assert_eq!(report.binomial_first_violation, None); // holds at small n
        assert!(report.binomial_refuted_by_bound); // 9.4854 > 256/27
        assert!(report.log_convex);
    }

    #[test]
    fn log_convexity_violation_detected() {
        // 1, 10, 100, 200: ratios 10, 10, 2 decrease at the end
        let report = conjecture_checks(&series(&[1, 10, 100, 200]), None).unwrap();
        assert!(!report.log_convex);
        assert_eq!(report.log_convexity_first_violation, Some(2));
    }

    #[test]
    fn uncertified_series_flagged() {
        let mut s = series(&W13);
        s.provenance = Provenance::Approximate;
        let rb = root_bound(&s, 13, 20).unwrap();
        assert!(!rb.certified);
    }
}
