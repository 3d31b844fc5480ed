//! Singularity locations and exponents from a fitted approximant, and
//! ensemble statistics across a family of approximants.
//!
//! The singularities of the ODE solution sit at the zeros z_i of Q_M. At a
//! simple zero the non-integer indicial root is
//!   rho_i = M - 1 - Q_{M-1}(z_i) / (z_i Q_M'(z_i)),
//! giving the local behaviour (1 - t/z_i)^rho_i. Note rho is the exponent in
//! that normalisation: a series behaving like (1-mu t)^-theta has rho = -theta,
//! so the tabulated positive "exponents" of generating-function analysis are
//! rho itself.

use crate::fit::{fit_approximant, HolonomicApproximant, SeriesData};
use crate::roots::{aberth_roots, eval};
use crate::spec::ApproximantSpec;
use crate::{DaError, Result};
use rayon::prelude::*;
use stacksort_numeric::{bits_for_digits, BigFloat, Complex};

#[derive(Debug, Clone)]
pub struct SingularityEstimate {
    pub location: Complex,
    /// Indicial exponent rho in (1 - t/z)^rho; only at simple roots.
    pub exponent: Option<BigFloat>,
    pub simple_root: bool,
    /// |Q_M(z)| at the reported root.
    pub residual: BigFloat,
}

/// All roots of Q_M with exponents at the simple ones, nearest-origin first.
/// `near_tol_rel` decides when two roots count as a (near-)multiple root.
pub fn find_singularities(
    appr: &HolonomicApproximant,
    precision_digits: u32,
) -> Result<Vec<SingularityEstimate>> {
    find_singularities_with_tol(appr, precision_digits, 1e-6)
}

pub fn find_singularities_with_tol(
    appr: &HolonomicApproximant,
    precision_digits: u32,
    near_tol_rel: f64,
) -> Result<Vec<SingularityEstimate>> {
    let prec = bits_for_digits(precision_digits + 10);
    let m = appr.order();
    let qm = appr.q_poly_float(m, prec);
    if qm.iter().all(|c| c.is_zero()) {
        return Err(DaError::InvalidInput("Q_M is identically zero".into()));
    }
    let roots = aberth_roots(&qm, prec)?;
    let qm_deriv: Vec<BigFloat> = (1..qm.len())
        .map(|i| &qm[i] * &BigFloat::from_u64(i as u64, prec))
        .collect();
    let qm1 = appr.q_poly_float(m - 1, prec);

    let mut out: Vec<SingularityEstimate> = Vec::with_capacity(roots.len());
    for (i, z) in roots.iter().enumerate() {
        // near-multiple detection: another root within near_tol_rel * |z|
        let zabs = z.abs();
        let cut = &zabs * &BigFloat::from_f64(near_tol_rel, prec);
        let simple = roots.iter().enumerate().all(|(j, other)| {
            i == j || (z - other).abs().cmp_val(&cut) == std::cmp::Ordering::Greater
        });
        let exponent = if simple && !z.is_zero() {
            let zqm = z * &eval(&qm_deriv, z);
            if zqm.is_zero() {
                None
            } else {
                let ratio = &eval(&qm1, z) / &zqm;
                let rho = &BigFloat::from_u64((m - 1) as u64, prec) - &ratio.re;
                Some(rho.with_prec(bits_for_digits(precision_digits)))
            }
        } else {
            None
        };
        out.push(SingularityEstimate {
            location: z.clone(),
            exponent,
            simple_root: simple,
            residual: eval(&qm, z).abs(),
        });
    }
    out.sort_by(|a, b| a.location.abs().cmp_val(&b.location.abs()));
    Ok(out)
}

#[derive(Debug)]
pub struct MemberSummary {
    pub spec: ApproximantSpec,
    pub dominant: Option<SingularityEstimate>,
    pub skipped: Option<String>,
}

#[derive(Debug)]
pub struct EnsembleStats {
    pub n_specs: usize,
    pub n_fitted: usize,
    pub n_cluster: usize,
    pub location_mean: BigFloat,
    pub location_std: BigFloat,
    pub exponent_mean: Option<BigFloat>,
    pub exponent_std: Option<BigFloat>,
    pub members: Vec<MemberSummary>,
}

/// Fit every spec, take each approximant's nearest-origin singularity, keep
/// the cluster around the median (relative tolerance `cluster_tol`), and
/// report mean/stddev after outlier rejection. The cluster must cover at
/// least 80% of the fitted members.
pub fn ensemble_scan(
    series: &SeriesData,
    specs: &[ApproximantSpec],
    precision_digits: u32,
    cluster_tol: f64,
) -> Result<EnsembleStats> {
    if specs.len() < 10 {
        return Err(DaError::InvalidInput(format!(
            "ensemble needs at least 10 specs, got {}",
            specs.len()
        )));
    }
    let members: Vec<MemberSummary> = specs
        .par_iter()
        .map(|spec| match fit_approximant(series, spec) {
            Err(e) => MemberSummary {
                spec: spec.clone(),
                dominant: None,
                skipped: Some(e.to_string()),
            },
            Ok(appr) => match find_singularities(&appr, precision_digits) {
                Err(e) => MemberSummary {
                    spec: spec.clone(),
                    dominant: None,
                    skipped: Some(e.to_string()),
                },
                Ok(sings) => {
                    let dominant = sings.into_iter().find(|s| !s.location.is_zero());
                    MemberSummary {
                        spec: spec.clone(),
                        dominant,
                        skipped: None,
                    }
                }
            },
        })
        .collect();

    let fitted: Vec<&SingularityEstimate> =
        members.iter().filter_map(|m| m.dominant.as_ref()).collect();
    if fitted.is_empty() {
        return Err(DaError::EnsembleCollapse("no member produced a dominant root".into()));
    }
    let prec = bits_for_digits(precision_digits + 10);
    // cluster on |z| around the median
    let mut mags: Vec<BigFloat> = fitted.iter().map(|s| s.location.abs()).collect();
    mags.sort_by(|a, b| a.cmp_val(b));
    let median = mags[mags.len() / 2].clone();
    let tol = &median * &BigFloat::from_f64(cluster_tol, prec);
    let cluster: Vec<&&SingularityEstimate> = fitted
        .iter()
        .filter(|s| {
            (&s.location.abs() - &median)
                .abs()
                .cmp_val(&tol)
                .is_le()
        })
        .collect();
    if cluster.len() * 5 < fitted.len() * 4 {
        return Err(DaError::NoCluster(format!(
            "{} of {} fitted members share the dominant singularity",
            cluster.len(),
            fitted.len()
        )));
    }

    let locs: Vec<BigFloat> = cluster.iter().map(|s| s.location.re.clone()).collect();
    let (location_mean, location_std) = robust_mean_std(&locs, prec);
    let exps: Vec<BigFloat> = cluster
        .iter()
        .filter_map(|s| s.exponent.clone())
        .collect();
    let (exponent_mean, exponent_std) = if exps.is_empty() {
        (None, None)
    } else {
        let (m, s) = robust_mean_std(&exps, prec);
        (Some(m), Some(s))
    };

    Ok(EnsembleStats {
        n_specs: specs.len(),
        n_fitted: fitted.len(),
        n_cluster: cluster.len(),
        location_mean,
        location_std,
        exponent_mean,
        exponent_std,
        members,
    })
}

/// Mean and standard deviation after median-absolute-deviation rejection
/// (cut factor 3).
pub fn robust_mean_std(values: &[BigFloat], prec: u32) -> (BigFloat, BigFloat) {
    assert!(!values.is_empty());
    let mut sorted: Vec<BigFloat> = values.iter().map(|v| v.with_prec(prec)).collect();
    sorted.sort_by(|a, b| a.cmp_val(b));
    let median = sorted[sorted.len() / 2].clone();
    let mut devs: Vec<BigFloat> = sorted.iter().map(|v| (v - &median).abs()).collect();
    devs.sort_by(|a, b| a.cmp_val(b));
    let mad = devs[devs.len() / 2].clone();
    let keep: Vec<&BigFloat> = if mad.is_zero() {
        sorted.iter().collect()
    } else {
        let cut = &mad * &BigFloat::from_i64(3, prec);
        sorted
            .iter()
            .filter(|v| (*v - &median).abs().cmp_val(&cut).is_le())
            .collect()
    };
    let n = BigFloat::from_u64(keep.len() as u64, prec);
    let mut sum = BigFloat::zero(prec);
    for v in &keep {
        sum = &sum + v;
    }
    let mean = &sum / &n;
    let mut var = BigFloat::zero(prec);
    for v in &keep {
        let d = *v - &mean;
        var = &var + &(&d * &d);
    }
    var = &var / &n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::One;

    fn geometric(mu: u64, terms: usize) -> SeriesData {
        let mut v = Vec::with_capacity(terms);
        let mut x = BigInt::one();
        for _ in 0..terms {
            v.push(x.clone());
            x *= mu;
        }
        SeriesData::from_integers(&v)
    }

    #[test]
    fn geometric_pole_location_and_exponent() {
        let spec = ApproximantSpec {
            order: 1,
            q_degrees: vec![1, 1],
            p_degree: 0,
        };
        let appr = fit_approximant(&geometric(2, 12), &spec).unwrap();
        let sing = find_singularities(&appr, 40).unwrap();
        let dom = &sing[0];
        assert!((dom.location.re.to_f64() - 0.5).abs() < 1e-35);
        // 1/(1-2t) = (1-2t)^-1: rho = -1
        let rho = dom.exponent.as_ref().unwrap().to_f64();
        assert!((rho + 1.0).abs() < 1e-30, "rho = {rho}");
    }

    #[test]
    fn rational_ensemble_has_zero_variance() {
        // keep Q_1 at its minimal degree so every member is well-posed
        let specs: Vec<ApproximantSpec> = (0..10)
            .map(|i| ApproximantSpec {
                order: 1,
                q_degrees: vec![1 + i % 3, 1],
                p_degree: i / 3,
            })
            .collect();
        let stats = ensemble_scan(&geometric(3, 16), &specs, 40, 1e-6).unwrap();
        assert_eq!(stats.n_cluster, stats.n_fitted);
        let third = 1.0 / 3.0;
        assert!((stats.location_mean.to_f64() - third).abs() < 1e-30);
        assert!(stats.location_std.to_f64() < 1e-28);
    }
}
