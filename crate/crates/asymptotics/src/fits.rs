//! Windowed least-fits: solve small exactly determined systems through
//! successive windows of coefficients or ratios.
//!
//! Coefficient form (window of 5 by default, 3/4/6-parameter variants):
//!   d_n = log w_n - n log mu = t1 + t2 log n + t3 loglog n + t4/log n + t5/log^2 n
//! with t2 -> -alpha-1 (plotted vs 1/n) and t3 -> beta-1 (vs 1/log n).
//!
//! Ratio form (window of 4):
//!   e_n = (r_n/mu - 1) n = t1 + t2/log n + t3/log^2 n + t4/log^3 n
//! with t1 -> -alpha-1 (vs 1/n) and t2 -> beta-1 (vs 1/log n).

use crate::estimators::{Abscissa, EstimatorSeries};
use crate::{AsymptoticsError, PrecSeries, Result};
use stacksort_numeric::BigFloat;

/// One fitted parameter across all windows; values[i] belongs to the window
/// centred at n = start_n + i.
#[derive(Debug, Clone)]
pub struct ParameterTrack {
    pub name: String,
    pub start_n: usize,
    pub values: Vec<BigFloat>,
    pub abscissa: Abscissa,
}

/// Gaussian elimination with partial pivoting on a dense system.
pub(crate) fn solve_dense(
    mut m: Vec<Vec<BigFloat>>,
    mut rhs: Vec<BigFloat>,
) -> std::result::Result<Vec<BigFloat>, ()> {
    let n = m.len();
    for r in 0..n {
        let pivot = (r..n)
            .max_by(|&a, &b| m[a][r].abs().cmp_val(&m[b][r].abs()))
            .ok_or(())?;
        if m[pivot][r].is_zero() {
            return Err(());
        }
        m.swap(r, pivot);
        rhs.swap(r, pivot);
        for rr in r + 1..n {
            if m[rr][r].is_zero() {
                continue;
            }
            let f = &m[rr][r] / &m[r][r];
            for c in r..n {
                m[rr][c] = &m[rr][c] - &(&f * &m[r][c]);
            }
            rhs[rr] = &rhs[rr] - &(&f * &rhs[r]);
        }
    }
    let prec = rhs[0].prec();
    let mut x = vec![BigFloat::zero(prec); n];
    for r in (0..n).rev() {
        let mut acc = rhs[r].clone();
        for c in r + 1..n {
            acc = &acc - &(&m[r][c] * &x[c]);
        }
        x[r] = &acc / &m[r][r];
    }
    Ok(x)
}

/// Basis functions of the coefficient-side model, in parameter order
/// t1, t2 log n, t3 loglog n, t4/log n, t5/log^2 n, t6/log^3 n (truncated to
/// `params`).
fn coeff_basis(n: usize, params: usize, prec: u32) -> Vec<BigFloat> {
    let nf = BigFloat::from_u64(n as u64, prec);
    let log = nf.ln();
    let loglog = log.ln();
    let one = BigFloat::from_i64(1, prec);
    let inv_log = &one / &log;
    let mut basis = vec![
        one.clone(),
        log.clone(),
        loglog,
        inv_log.clone(),
        &inv_log * &inv_log,
        &(&inv_log * &inv_log) * &inv_log,
    ];
    basis.truncate(params);
    basis
}

/// Fit d_n = log w_n - n log mu through successive windows of `params`
/// consecutive coefficients (params in 3..=6; the paper's quintuple fit is
/// params = 5). Returns one track per parameter.
pub fn windowed_fit_coeffs(
    series: &PrecSeries,
    mu: &BigFloat,
    params: usize,
) -> Result<Vec<ParameterTrack>> {
    if !(3..=6).contains(&params) {
        return Err(AsymptoticsError::InvalidInput(
            "coefficient fit supports 3..=6 parameters".into(),
        ));
    }
    // loglog needs log n > 1, so n >= 3; windows are centred
    let first_n = 3;
    if series.len() < first_n + params {
        return Err(AsymptoticsError::TooShort {
            need: first_n + params,
            have: series.len(),
        });
    }
    let prec = series.prec.max(mu.prec());
    let log_mu = mu.ln();
    let d: Vec<BigFloat> = (1..=series.len())
        .map(|n| {
            let nf = BigFloat::from_u64(n as u64, prec);
            &series.at(n).abs().ln() - &(&nf * &log_mu)
        })
        .collect();

    let half = (params - 1) / 2;
    let mut tracks: Vec<Vec<BigFloat>> = vec![Vec::new(); params];
    let lo = (first_n + half).max(1 + half);
    let hi = series.len() - (params - 1 - half);
    for center in lo..=hi {
        let window: Vec<usize> = (center - half..center - half + params).collect();
        let m: Vec<Vec<BigFloat>> = window
            .iter()
            .map(|&n| coeff_basis(n, params, prec))
            .collect();
        let rhs: Vec<BigFloat> = window.iter().map(|&n| d[n - 1].clone()).collect();
        let sol = solve_dense(m, rhs).map_err(|_| AsymptoticsError::SingularWindow(center))?;
        for (t, v) in tracks.iter_mut().zip(sol) {
            t.push(v);
        }
    }
    let abscissae = [
        Abscissa::OneOverN,    // t1
        Abscissa::OneOverN,    // t2 -> -alpha-1
        Abscissa::OneOverLogN, // t3 -> beta-1
        Abscissa::OneOverLogN,
        Abscissa::OneOverLogN,
        Abscissa::OneOverLogN,
    ];
    Ok(tracks
        .into_iter()
        .enumerate()
        .map(|(i, values)| ParameterTrack {
            name: format!("t{}", i + 1),
            start_n: lo,
            values,
            abscissa: abscissae[i],
        })
        .collect())
}

/// Fit e_n = (r_n/mu - 1) n through successive windows of 4 ratios.
pub fn windowed_fit_ratios(
    ratios: &EstimatorSeries,
    mu: &BigFloat,
    params: usize,
) -> Result<Vec<ParameterTrack>> {
    if !(2..=5).contains(&params) {
        return Err(AsymptoticsError::InvalidInput(
            "ratio fit supports 2..=5 parameters".into(),
        ));
    }
    if ratios.values.len() < params + 1 {
        return Err(AsymptoticsError::TooShort {
            need: params + 1,
            have: ratios.values.len(),
        });
    }
    let prec = ratios.values[0].prec().max(mu.prec());
    let one = BigFloat::from_i64(1, prec);
    // e_n from the ratio sequence
    let e: Vec<(usize, BigFloat)> = ratios
        .values
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let n = ratios.start_n + i;
            let nf = BigFloat::from_u64(n as u64, prec);
            (n, &(&(r / mu) - &one) * &nf)
        })
        .collect();

    let basis = |n: usize| -> Vec<BigFloat> {
        let nf = BigFloat::from_u64(n as u64, prec);
        let inv_log = &one / &nf.ln();
        let mut b = vec![one.clone()];
        let mut cur = one.clone();
        for _ in 1..params {
            cur = &cur * &inv_log;
            b.push(cur.clone());
        }
        b
    };

    let half = (params - 1) / 2;
    let lo = e[0].0.max(2) + half;
    let hi = e.last().unwrap().0 - (params - 1 - half);
    let mut tracks: Vec<Vec<BigFloat>> = vec![Vec::new(); params];
    for center in lo..=hi {
        let window: Vec<usize> = (center - half..center - half + params).collect();
        let m: Vec<Vec<BigFloat>> = window.iter().map(|&n| basis(n)).collect();
        let rhs: Vec<BigFloat> = window
            .iter()
            .map(|&n| e[n - e[0].0].1.clone())
            .collect();
        let sol = solve_dense(m, rhs).map_err(|_| AsymptoticsError::SingularWindow(center))?;
        for (t, v) in tracks.iter_mut().zip(sol) {
            t.push(v);
        }
    }
    let abscissae = [
        Abscissa::OneOverN,    // t1 -> -alpha-1
        Abscissa::OneOverLogN, // t2 -> beta-1
        Abscissa::OneOverLogN,
        Abscissa::OneOverLogN,
        Abscissa::OneOverLogN,
    ];
    Ok(tracks
        .into_iter()
        .enumerate()
        .map(|(i, values)| ParameterTrack {
            name: format!("t{}r", i + 1),
            start_n: lo,
            values,
            abscissa: abscissae[i],
        })
        .collect())
}
