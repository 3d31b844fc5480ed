//! Simultaneous polynomial root finding (Aberth-Ehrlich) in high-precision
//! complex arithmetic, with Newton-polygon initial radii so wildly scaled
//! coefficients start near their root shells.

use crate::{DaError, Result};
use stacksort_numeric::{BigFloat, Complex};

/// All complex roots of sum c_i z^i (c = coeffs, c.len() = deg+1). Exact
/// zero roots from trailing zero coefficients are returned directly.
pub fn aberth_roots(coeffs: &[BigFloat], prec: u32) -> Result<Vec<Complex>> {
    let mut c: Vec<BigFloat> = coeffs.iter().map(|v| v.with_prec(prec)).collect();
    while let Some(last) = c.last() {
        if last.is_zero() && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    if c.len() <= 1 {
        return Err(DaError::InvalidInput("constant polynomial has no roots".into()));
    }
    // factor out z^v
    let val = c.iter().take_while(|v| v.is_zero()).count();
    let mut roots = vec![Complex::zero(prec); val];
    let c = &c[val..];
    let deg = c.len() - 1;
    if deg == 0 {
        return Ok(roots);
    }

    let mut z = initial_guesses(c, prec);
    let deriv: Vec<BigFloat> = (1..=deg)
        .map(|i| &c[i] * &BigFloat::from_u64(i as u64, prec))
        .collect();

    let conv_cut = -(prec as i64) + 10;
    let max_iter = 60 + 12 * deg;
    let mut frozen = vec![false; deg];
    for _ in 0..max_iter {
        let mut moved = false;
        for i in 0..deg {
            if frozen[i] {
                continue;
            }
            let pz = eval(c, &z[i]);
            let dz = eval(&deriv, &z[i]);
            if pz.is_zero() {
                frozen[i] = true;
                continue;
            }
            if dz.is_zero() {
                // nudge off a critical point
                let eps = BigFloat::from_parts(1.into(), z[i].abs().ilog2() - 20, prec);
                z[i] = &z[i] + &Complex::new(eps.clone(), eps);
                moved = true;
                continue;
            }
            let newton = &pz / &dz;
            let mut repel = Complex::zero(prec);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    let diff = &z[i] - zj;
                    if diff.is_zero() {
                        continue;
                    }
                    repel = &repel + &(&Complex::from_real(BigFloat::from_i64(1, prec)) / &diff);
                }
            }
            let denom = &Complex::from_real(BigFloat::from_i64(1, prec)) - &(&newton * &repel);
            let step = if denom.is_zero() { newton } else { &newton / &denom };
            let next = &z[i] - &step;
            let scale = z[i].abs();
            let tol = if scale.is_zero() {
                conv_cut
            } else {
                scale.ilog2() + conv_cut
            };
            if step.abs().magnitude_below(tol) {
                frozen[i] = true;
            } else {
                moved = true;
            }
            z[i] = next;
        }
        if !moved || frozen.iter().all(|&f| f) {
            roots.extend(z);
            return Ok(roots);
        }
    }
    // report residuals for diagnosis
    let worst = z
        .iter()
        .map(|zi| eval(c, zi).abs().to_f64())
        .fold(0.0f64, f64::max);
    Err(DaError::RootFinding(format!(
        "no convergence after {max_iter} iterations (worst residual {worst:.3e})"
    )))
}

pub fn eval(coeffs: &[BigFloat], z: &Complex) -> Complex {
    let prec = z.re.prec();
    let mut acc = Complex::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &(&acc * z) + &Complex::from_real(c.clone());
    }
    acc
}

/// Newton-polygon radii: the upper convex hull of (i, log2 |c_i|) splits the
/// indices into shells; each segment supplies its roots' starting radius.
fn initial_guesses(c: &[BigFloat], prec: u32) -> Vec<Complex> {
    let deg = c.len() - 1;
    let logs: Vec<Option<f64>> = c
        .iter()
        .map(|v| {
            if v.is_zero() {
                None
            } else {
                Some(v.ilog2() as f64)
            }
        })
        .collect();
    // upper hull over defined points
    let pts: Vec<(usize, f64)> = logs
        .iter()
        .enumerate()
        .filter_map(|(i, l)| l.map(|v| (i, v)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(x, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep the hull upper-convex
            if (y2 - y1) * ((x - x1) as f64) <= (y - y1) * ((x2 - x1) as f64) {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    let mut guesses = Vec::with_capacity(deg);
    let golden = 0.3819660112501051f64;
    let mut angle_seed = 0.61;
    for seg in hull.windows(2) {
        let (i1, l1) = seg[0];
        let (i2, l2) = seg[1];
        let k = i2 - i1;
        // |c_i1 / c_i2|^(1/k)
        let r_log2 = (l1 - l2) / k as f64;
        let r = BigFloat::from_f64(r_log2.exp2().clamp(1e-12, 1e12), prec);
        for j in 0..k {
            angle_seed = (angle_seed + golden) % 1.0;
            let t = BigFloat::from_f64(2.0 * (j as f64 + angle_seed) / k as f64, prec);
            guesses.push(Complex::from_polar_pi(&r, &t));
        }
    }
    // fill any shortfall (degenerate hulls) on a unit-ish circle
    while guesses.len() < deg {
        angle_seed = (angle_seed + golden) % 1.0;
        let t = BigFloat::from_f64(2.0 * angle_seed, prec);
        guesses.push(Complex::from_polar_pi(&BigFloat::from_f64(1.5, prec), &t));
    }
    guesses.truncate(deg);
    guesses
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bf(v: f64) -> BigFloat {
        BigFloat::from_f64(v, 200)
    }

    fn sort_by_abs(mut roots: Vec<Complex>) -> Vec<Complex> {
        roots.sort_by(|a, b| a.abs().cmp_val(&b.abs()));
        roots
    }

    #[test]
    fn quadratic_real_roots() {
        // (z - 2)(z - 3) = 6 - 5z + z^2
        let roots = sort_by_abs(aberth_roots(&[bf(6.0), bf(-5.0), bf(1.0)], 200).unwrap());
        assert!((roots[0].re.to_f64() - 2.0).abs() < 1e-40);
        assert!((roots[1].re.to_f64() - 3.0).abs() < 1e-40);
        for r in &roots {
            assert!(r.im.magnitude_below(-150));
        }
    }

    #[test]
    fn complex_pair() {
        // z^2 + 1
        let roots = aberth_roots(&[bf(1.0), bf(0.0), bf(1.0)], 200).unwrap();
        for r in &roots {
            assert!(r.re.magnitude_below(-150));
            assert!((r.im.to_f64().abs() - 1.0).abs() < 1e-40);
        }
    }

    #[test]
    fn scaled_shells_converge() {
        // roots at 1e-4 and 1e4: coefficients span 8 orders of magnitude
        // (z - 1e-4)(z - 1e4) = 1 - (1e4 + 1e-4) z + z^2
        let roots = sort_by_abs(
            aberth_roots(&[bf(1.0), bf(-(1e4 + 1e-4)), bf(1.0)], 200).unwrap(),
        );
        assert!((roots[0].re.to_f64() - 1e-4).abs() < 1e-30);
        assert!((roots[1].re.to_f64() - 1e4).abs() < 1e-20);
    }

    #[test]
    fn zero_roots_factored() {
        // z^2 (z - 1)
        let roots = sort_by_abs(aberth_roots(&[bf(0.0), bf(0.0), bf(-1.0), bf(1.0)], 128).unwrap());
        assert!(roots[0].is_zero());
        assert!(roots[1].is_zero());
        assert!((roots[2].re.to_f64() - 1.0).abs() < 1e-25);
    }

    #[test]
    fn wilkinson_ish_degree_12_residuals() {
        // p(z) = prod_{k=1..12} (z - k/10): build coefficients exactly
        let prec = 350;
        let mut coeffs = vec![BigFloat::from_i64(1, prec)];
        for k in 1..=12i64 {
            let root = &BigFloat::from_i64(k, prec)
                / &BigFloat::from_i64(10, prec);
            let mut next = vec![BigFloat::zero(prec); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &root);
            }
            coeffs = next;
        }
        let roots = sort_by_abs(aberth_roots(&coeffs, prec).unwrap());
        for (i, r) in roots.iter().enumerate() {
            let expect = (i as f64 + 1.0) / 10.0;
            assert!(
                (r.re.to_f64() - expect).abs() < 1e-30,
                "root {i}: {}",
                r.re.to_f64()
            );
            // residual at the root is tiny relative to the leading coefficient
            let res = eval(&coeffs, r).abs();
            assert!(res.magnitude_below(-260), "residual {:?}", res);
        }
    }
}
