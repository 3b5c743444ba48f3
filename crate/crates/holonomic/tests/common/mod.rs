//! Deliberately simple independent implementations used as oracles by the
//! integration suites: direct-summation evaluation, dense-scan root
//! finding, textbook polynomial long division, and fixed-grid angle
//! accumulation. Each one avoids the code paths of the library routine it
//! checks.

#![allow(dead_code)] // each test binary uses a subset

use std::f64::consts::TAU;

/// Evaluates `mean + Σ_k a_k cos(kt) + b_k sin(kt)` by direct summation.
pub fn eval_direct(mean: f64, coeffs: &[(f64, f64)], t: f64) -> f64 {
    let mut acc = mean;
    for (i, (a, b)) in coeffs.iter().enumerate() {
        let kt = (i + 1) as f64 * t;
        acc += a * kt.cos() + b * kt.sin();
    }
    acc
}

/// Horner evaluation of a polynomial given ascending coefficients.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// Textbook long division by a monic divisor: returns (quotient,
/// remainder), both in ascending coefficients, remainder untrimmed.
pub fn long_division(p: &[f64], q: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let dq = q.len() - 1;
    assert!(dq >= 1, "divisor must be non-constant");
    assert!((q[dq] - 1.0).abs() < 1e-12, "divisor must be monic");
    let mut rem = p.to_vec();
    let mut quot = vec![0.0; p.len().saturating_sub(dq)];
    for i in (dq..p.len()).rev() {
        let factor = rem[i];
        quot[i - dq] = factor;
        for j in 0..=dq {
            rem[i - dq + j] -= factor * q[j];
        }
    }
    rem.truncate(dq);
    (quot, rem)
}

/// Roots of `f(t) = level` on `[0, 2π)` by dense scan plus bisection.
/// Tangential contacts without a sign change are missed by design; the
/// callers discard degenerate levels.
pub fn dense_roots(f: impl Fn(f64) -> f64, level: f64, samples: usize) -> Vec<f64> {
    let g = |t: f64| f(t) - level;
    let step = TAU / samples as f64;
    let mut roots = Vec::new();
    let mut prev_t = 0.0;
    let mut prev_v = g(0.0);
    for i in 1..=samples {
        let t = if i == samples { TAU } else { i as f64 * step };
        let v = g(t);
        if prev_v == 0.0 {
            roots.push(prev_t);
        } else if prev_v * v < 0.0 {
            let (mut lo, mut hi) = (prev_t, t);
            let (mut glo, _) = (prev_v, v);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if glo * gm < 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push(0.5 * (lo + hi) % TAU);
        }
        prev_t = t;
        prev_v = v;
    }
    roots.sort_by(f64::total_cmp);
    roots
}

/// Winding of `(x(t) - p.0, y(t) - p.1)` by summing angle increments on a
/// fixed dense grid. Returns the raw turn count before rounding.
pub fn dense_winding(
    x: impl Fn(f64) -> f64,
    y: impl Fn(f64) -> f64,
    p: (f64, f64),
    samples: usize,
) -> f64 {
    let mut total = 0.0;
    let at = |t: f64| (x(t) - p.0, y(t) - p.1);
    let (mut px, mut py) = at(0.0);
    for i in 1..=samples {
        let t = TAU * i as f64 / samples as f64;
        let (cx, cy) = at(t);
        total += (px * cy - py * cx).atan2(px * cx + py * cy);
        px = cx;
        py = cy;
    }
    total / TAU
}

/// Smallest cyclic distance between two parameters in `[0, 2π)`.
pub fn cyclic_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
