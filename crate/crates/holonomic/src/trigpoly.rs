//! Periodic trigonometric polynomials on `[0, 2π)`: evaluation, exact
//! derivatives, products, and certified root isolation on level sets.

use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Samples per unit of trigonometric degree in the dense isolation scan.
const SCAN_BASE: usize = 64;

/// Extra oversampling factor guarding against sign changes that a coarser
/// scan would step over near shallow crossings.
const SCAN_OVERSAMPLE: usize = 4;

/// Bisection stops once the bracket width (in `t`) is below this.
const ROOT_WIDTH_TOL: f64 = 1e-13;

/// Isolated roots closer than this (cyclically, in `t`) are merged.
const ROOT_MERGE_TOL: f64 = 1e-9;

/// A crossing counts as transversal only when `|f'(t)|` exceeds this factor
/// times `1 +` the L¹ coefficient norm of `f'`.
pub const TRANSVERSAL_SLOPE_FACTOR: f64 = 1e-8;

/// A level within this factor times `1 +` the L¹ coefficient norm of a
/// critical value is rejected as degenerate rather than silently classified.
pub const DEGENERATE_LEVEL_FACTOR: f64 = 1e-8;

/// Errors from level-set operations on trigonometric polynomials.
#[derive(Debug, Clone, PartialEq)]
pub enum TrigPolyError {
    /// The operation needs a non-constant function.
    ConstantInput,
    /// The requested level sits too close to a critical value, so crossings
    /// there are not reliably transversal. `gap` is the offending distance.
    DegenerateLevel { level: f64, gap: f64 },
    /// A coefficient was NaN or infinite.
    NonFinite,
}

impl fmt::Display for TrigPolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrigPolyError::ConstantInput => {
                write!(f, "operation requires a non-constant trigonometric polynomial")
            }
            TrigPolyError::DegenerateLevel { level, gap } => write!(
                f,
                "level {level} is within {gap:.3e} of a critical value; crossings are not transversal"
            ),
            TrigPolyError::NonFinite => write!(f, "coefficients must be finite"),
        }
    }
}

impl std::error::Error for TrigPolyError {}

/// A real trigonometric polynomial `mean + Σ_k a_k cos(kt) + b_k sin(kt)`,
/// stored in canonical form: the trailing harmonic is nonzero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrigPoly {
    mean: f64,
    coeffs: Vec<(f64, f64)>,
}

impl<'de> Deserialize<'de> for TrigPoly {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Repr {
            mean: f64,
            coeffs: Vec<(f64, f64)>,
        }
        let repr = Repr::deserialize(deserializer)?;
        TrigPoly::new(repr.mean, repr.coeffs).map_err(serde::de::Error::custom)
    }
}

impl TrigPoly {
    /// Builds a polynomial from its mean and harmonic coefficients
    /// `[(a_1, b_1), ...]`, validating finiteness and trimming trailing
    /// zero harmonics.
    pub fn new(mean: f64, coeffs: Vec<(f64, f64)>) -> Result<TrigPoly, TrigPolyError> {
        if !mean.is_finite() || coeffs.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(TrigPolyError::NonFinite);
        }
        Ok(Self::from_parts(mean, coeffs))
    }

    /// Internal constructor for coefficients already known to be finite.
    fn from_parts(mean: f64, mut coeffs: Vec<(f64, f64)>) -> TrigPoly {
        while coeffs.last() == Some(&(0.0, 0.0)) {
            coeffs.pop();
        }
        TrigPoly { mean, coeffs }
    }

    /// The constant function `c`.
    pub fn constant(c: f64) -> TrigPoly {
        Self::from_parts(c, Vec::new())
    }

    /// The single harmonic `a cos(kt) + b sin(kt)` with `k ≥ 1`.
    pub fn harmonic(k: usize, a: f64, b: f64) -> TrigPoly {
        assert!(k >= 1, "harmonic frequency must be at least 1");
        let mut coeffs = vec![(0.0, 0.0); k];
        coeffs[k - 1] = (a, b);
        Self::from_parts(0.0, coeffs)
    }

    /// Draws a polynomial of the given trigonometric degree with mean and
    /// coefficients uniform in `[-amplitude, amplitude]`. Deterministic in
    /// the seed; the top harmonic is redrawn if it lands exactly at zero so
    /// the stated degree always holds.
    pub fn random(seed: u64, degree: usize, amplitude: f64) -> TrigPoly {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draw = |rng: &mut ChaCha8Rng| rng.random_range(-amplitude..=amplitude);
        let mean = draw(&mut rng);
        let mut coeffs: Vec<(f64, f64)> =
            (0..degree).map(|_| (draw(&mut rng), draw(&mut rng))).collect();
        if degree > 0 {
            while coeffs[degree - 1] == (0.0, 0.0) {
                coeffs[degree - 1] = (draw(&mut rng), draw(&mut rng));
            }
        }
        Self::from_parts(mean, coeffs)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Harmonic coefficients `(a_k, b_k)` for `k = 1..=degree`.
    pub fn coeffs(&self) -> &[(f64, f64)] {
        &self.coeffs
    }

    /// Trigonometric degree: the index of the highest nonzero harmonic,
    /// zero for constants.
    pub fn degree(&self) -> usize {
        self.coeffs.len()
    }

    /// L¹ norm of all coefficients; an upper bound for `|f(t)|`.
    pub fn coefficient_norm(&self) -> f64 {
        self.mean.abs() + self.coeffs.iter().map(|(a, b)| a.abs() + b.abs()).sum::<f64>()
    }

    /// Evaluates at `t` using the angle-addition recurrence for
    /// `cos(kt), sin(kt)`, so one `sin_cos` call serves every harmonic.
    pub fn evaluate(&self, t: f64) -> f64 {
        let (s1, c1) = t.sin_cos();
        let mut ck = 1.0;
        let mut sk = 0.0;
        let mut acc = self.mean;
        for &(a, b) in &self.coeffs {
            let next_c = ck * c1 - sk * s1;
            let next_s = sk * c1 + ck * s1;
            ck = next_c;
            sk = next_s;
            acc += a * ck + b * sk;
        }
        acc
    }

    /// Exact derivative: the harmonic `(a_k, b_k)` maps to `(k b_k, -k a_k)`
    /// and the mean drops.
    pub fn derivative(&self) -> TrigPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| {
                let k = (i + 1) as f64;
                (k * b, -k * a)
            })
            .collect();
        Self::from_parts(0.0, coeffs)
    }

    /// Rescales by a constant factor.
    pub fn scale(&self, factor: f64) -> TrigPoly {
        Self::from_parts(
            self.mean * factor,
            self.coeffs.iter().map(|&(a, b)| (a * factor, b * factor)).collect(),
        )
    }

    /// Pointwise product, expanded back into harmonics by the
    /// product-to-sum identities; degrees add.
    pub fn mul(&self, other: &TrigPoly) -> TrigPoly {
        let n = self.coeffs.len() + other.coeffs.len();
        let mut mean = self.mean * other.mean;
        let mut out = vec![(0.0f64, 0.0f64); n];
        for (i, &(a, b)) in other.coeffs.iter().enumerate() {
            out[i].0 += self.mean * a;
            out[i].1 += self.mean * b;
        }
        for (i, &(a, b)) in self.coeffs.iter().enumerate() {
            out[i].0 += other.mean * a;
            out[i].1 += other.mean * b;
        }
        for (ji, &(a1, b1)) in self.coeffs.iter().enumerate() {
            let j = ji + 1;
            for (ki, &(a2, b2)) in other.coeffs.iter().enumerate() {
                let k = ki + 1;
                let cc = a1 * a2;
                let ss = b1 * b2;
                let sc = b1 * a2;
                let cs = a1 * b2;
                // cos·cos and sin·sin feed cos((j±k)t); sin·cos and cos·sin
                // feed sin((j±k)t), with sin(-mt) = -sin(mt) at j < k.
                out[j + k - 1].0 += 0.5 * (cc - ss);
                out[j + k - 1].1 += 0.5 * (sc + cs);
                if j == k {
                    mean += 0.5 * (cc + ss);
                } else {
                    let m = j.abs_diff(k);
                    let sign = if j > k { 1.0 } else { -1.0 };
                    out[m - 1].0 += 0.5 * (cc + ss);
                    out[m - 1].1 += 0.5 * sign * (sc - cs);
                }
            }
        }
        Self::from_parts(mean, out)
    }

    /// Parameters of all critical points, i.e. the roots of the derivative.
    /// Empty for constants.
    pub(crate) fn critical_parameters(&self) -> Vec<f64> {
        if self.degree() == 0 {
            return Vec::new();
        }
        self.derivative().isolate_roots(0.0)
    }

    /// Values taken at critical points; the degenerate-level guard compares
    /// requested levels against these.
    pub(crate) fn critical_values(&self) -> Vec<f64> {
        self.critical_parameters().into_iter().map(|t| self.evaluate(t)).collect()
    }

    /// Dense cyclic scan plus bisection. Returns the sorted parameters in
    /// `[0, 2π)` where `f(t) = level` changes sign, without classifying
    /// them; tangencies that never change sign are invisible here and are
    /// the caller's concern via the critical-value guard.
    pub(crate) fn isolate_roots(&self, level: f64) -> Vec<f64> {
        let samples = SCAN_BASE * self.degree().max(1) * SCAN_OVERSAMPLE;
        let step = TAU / samples as f64;
        let values: Vec<f64> =
            (0..samples).map(|i| self.evaluate(i as f64 * step) - level).collect();
        let mut roots: Vec<f64> = Vec::new();
        for i in 0..samples {
            let v0 = values[i];
            let v1 = values[(i + 1) % samples];
            if v0 == 0.0 {
                roots.push(i as f64 * step);
                continue;
            }
            if v1 == 0.0 {
                continue; // recorded as the next cell's left endpoint
            }
            if v0.signum() * v1.signum() < 0.0 {
                let t0 = i as f64 * step;
                roots.push(self.bisect_root(level, t0, t0 + step, v0));
            }
        }
        roots.sort_by(f64::total_cmp);
        self.merge_close_roots(level, roots)
    }

    fn bisect_root(&self, level: f64, mut lo: f64, mut hi: f64, mut vlo: f64) -> f64 {
        for _ in 0..60 {
            if hi - lo < ROOT_WIDTH_TOL {
                break;
            }
            let mid = 0.5 * (lo + hi);
            let vm = self.evaluate(mid) - level;
            if vm == 0.0 {
                return mid;
            }
            if vm.signum() == vlo.signum() {
                lo = mid;
                vlo = vm;
            } else {
                hi = mid;
            }
        }
        (0.5 * (lo + hi)).rem_euclid(TAU)
    }

    fn merge_close_roots(&self, level: f64, roots: Vec<f64>) -> Vec<f64> {
        let mut merged: Vec<f64> = Vec::with_capacity(roots.len());
        for t in roots {
            match merged.last().copied() {
                Some(prev) if t - prev < ROOT_MERGE_TOL => {
                    if (self.evaluate(t) - level).abs() < (self.evaluate(prev) - level).abs() {
                        *merged.last_mut().unwrap() = t;
                    }
                }
                _ => merged.push(t),
            }
        }
        // The scan is cyclic: a root straddling 2π shows up at both ends.
        if merged.len() > 1 {
            let first = merged[0];
            let last = *merged.last().unwrap();
            if first + TAU - last < ROOT_MERGE_TOL {
                if (self.evaluate(last) - level).abs() < (self.evaluate(first) - level).abs() {
                    merged[0] = last;
                }
                merged.pop();
            }
        }
        merged
    }

    /// All solutions of `f(t) = level` in `[0, 2π)`, each classified by the
    /// sign of `f'` there. Rejects levels that come too close to a critical
    /// value, so every returned root is certifiably transversal.
    pub fn roots_on_level(&self, level: f64) -> Result<Vec<ParamRoot>, TrigPolyError> {
        let critical = self.critical_values();
        self.roots_on_level_given_critical(level, &critical)
    }

    /// Same as [`roots_on_level`](Self::roots_on_level) with the critical
    /// values supplied by the caller, so repeated queries against one
    /// function (grid sweeps) skip the prepass.
    pub(crate) fn roots_on_level_given_critical(
        &self,
        level: f64,
        critical_values: &[f64],
    ) -> Result<Vec<ParamRoot>, TrigPolyError> {
        if self.degree() == 0 {
            return Err(TrigPolyError::ConstantInput);
        }
        let scale = 1.0 + self.coefficient_norm();
        let gap = critical_values
            .iter()
            .map(|c| (c - level).abs())
            .min_by(f64::total_cmp)
            .unwrap_or(f64::INFINITY);
        if gap <= DEGENERATE_LEVEL_FACTOR * scale {
            return Err(TrigPolyError::DegenerateLevel { level, gap });
        }
        let deriv = self.derivative();
        let slope_tol = TRANSVERSAL_SLOPE_FACTOR * (1.0 + deriv.coefficient_norm());
        let mut out = Vec::new();
        for t in self.isolate_roots(level) {
            let slope = deriv.evaluate(t);
            if slope.abs() <= slope_tol {
                // The critical-value guard above should have caught this;
                // degrade loudly rather than misclassify the crossing.
                return Err(TrigPolyError::DegenerateLevel { level, gap });
            }
            out.push(ParamRoot {
                t,
                kind: RootKind::Transversal { rising: slope > 0.0 },
                residual: (self.evaluate(t) - level).abs(),
            });
        }
        Ok(out)
    }

    /// Critical points with their type, read off from the sign changes of
    /// the derivative: a rising zero of `f'` is a local minimum.
    pub fn critical_points(&self) -> Result<Vec<CriticalPoint>, TrigPolyError> {
        if self.degree() == 0 {
            return Err(TrigPolyError::ConstantInput);
        }
        let roots = self.derivative().roots_on_level(0.0)?;
        Ok(roots
            .into_iter()
            .map(|root| {
                let extremum = match root.kind {
                    RootKind::Transversal { rising: true } => Extremum::Minimum,
                    _ => Extremum::Maximum,
                };
                CriticalPoint { t: root.t, extremum, residual: root.residual }
            })
            .collect())
    }
}

impl std::ops::Add for &TrigPoly {
    type Output = TrigPoly;

    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = vec![(0.0, 0.0); n];
        for (i, &(a, b)) in self.coeffs.iter().enumerate() {
            coeffs[i] = (a, b);
        }
        for (i, &(a, b)) in rhs.coeffs.iter().enumerate() {
            coeffs[i].0 += a;
            coeffs[i].1 += b;
        }
        TrigPoly::from_parts(self.mean + rhs.mean, coeffs)
    }
}

impl std::ops::Sub for &TrigPoly {
    type Output = TrigPoly;

    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self + &rhs.scale(-1.0)
    }
}

/// Crossing type at a root of `f(t) = level`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootKind {
    /// `f' ≠ 0` at the root; `rising` records the sign of the slope.
    Transversal { rising: bool },
    /// `f'` vanishes within tolerance; the level is effectively critical.
    Tangential,
}

/// A solution of `f(t) = level`, with the defect `|f(t) - level|` left by
/// root refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRoot {
    pub t: f64,
    pub kind: RootKind,
    pub residual: f64,
}

/// Local extremum type at a critical point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremum {
    Minimum,
    Maximum,
}

/// A critical point of a trigonometric polynomial; `residual` is `|f'(t)|`
/// after refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub t: f64,
    pub extremum: Extremum,
    pub residual: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin() -> TrigPoly {
        TrigPoly::harmonic(1, 0.0, 1.0)
    }

    #[test]
    fn canonical_form_trims_zero_harmonics() {
        let f = TrigPoly::new(1.5, vec![(0.0, 2.0), (0.0, 0.0), (0.0, 0.0)]).unwrap();
        assert_eq!(f.degree(), 1);
        assert_eq!(f.coeffs(), &[(0.0, 2.0)]);
    }

    #[test]
    fn rejects_non_finite_coefficients() {
        assert_eq!(
            TrigPoly::new(f64::NAN, vec![]).unwrap_err(),
            TrigPolyError::NonFinite
        );
        assert_eq!(
            TrigPoly::new(0.0, vec![(f64::INFINITY, 0.0)]).unwrap_err(),
            TrigPolyError::NonFinite
        );
    }

    #[test]
    fn evaluates_basic_harmonics() {
        assert_eq!(TrigPoly::constant(3.0).evaluate(1.234), 3.0);
        let f = sin();
        assert!((f.evaluate(std::f64::consts::FRAC_PI_2) - 1.0).abs() < 1e-15);
        assert!(f.evaluate(0.0).abs() < 1e-15);
        let g = TrigPoly::harmonic(2, 1.0, 0.0); // cos 2t
        assert!((g.evaluate(std::f64::consts::PI) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn evaluation_is_periodic() {
        let f = TrigPoly::random(7, 6, 1.0);
        for i in 0..10 {
            let t = 0.613 * i as f64;
            assert!((f.evaluate(t) - f.evaluate(t + TAU)).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_of_sin_is_cos() {
        let d = sin().derivative();
        assert_eq!(d.coeffs(), &[(1.0, 0.0)]);
        assert_eq!(d.mean(), 0.0);
        let dd = d.derivative();
        assert_eq!(dd.coeffs(), &[(0.0, -1.0)]);
    }

    #[test]
    fn second_derivative_of_harmonic_scales_by_minus_k_squared() {
        let f = TrigPoly::harmonic(2, 0.0, 1.0); // sin 2t
        let dd = f.derivative().derivative();
        // f'' + 4 f = 0 holds exactly in coefficients.
        let sum = &dd + &f.scale(4.0);
        assert_eq!(sum.degree(), 0);
        assert_eq!(sum.mean(), 0.0);
    }

    #[test]
    fn products_expand_by_half_angle_identities() {
        let s = sin();
        let c = TrigPoly::harmonic(1, 1.0, 0.0);
        let s2 = s.mul(&s); // (1 - cos 2t) / 2
        assert_eq!(s2.mean(), 0.5);
        assert_eq!(s2.coeffs(), &[(0.0, 0.0), (-0.5, 0.0)]);
        let sc = s.mul(&c); // sin(2t) / 2
        assert_eq!(sc.mean(), 0.0);
        assert_eq!(sc.coeffs(), &[(0.0, 0.0), (0.0, 0.5)]);
    }

    #[test]
    fn product_evaluation_matches_pointwise_product() {
        let f = TrigPoly::random(11, 4, 1.0);
        let g = TrigPoly::random(12, 3, 2.0);
        let fg = f.mul(&g);
        assert_eq!(fg.degree(), 7);
        for i in 0..24 {
            let t = TAU * i as f64 / 24.0;
            assert!((fg.evaluate(t) - f.evaluate(t) * g.evaluate(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn sin_crosses_zero_twice() {
        let roots = sin().roots_on_level(0.0).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].t.abs() < 1e-10);
        assert!((roots[1].t - std::f64::consts::PI).abs() < 1e-10);
        assert_eq!(roots[0].kind, RootKind::Transversal { rising: true });
        assert_eq!(roots[1].kind, RootKind::Transversal { rising: false });
        assert!(roots.iter().all(|r| r.residual < 1e-11));
    }

    #[test]
    fn level_outside_range_has_no_roots() {
        assert!(sin().roots_on_level(2.0).unwrap().is_empty());
    }

    #[test]
    fn critical_level_is_rejected() {
        match sin().roots_on_level(1.0) {
            Err(TrigPolyError::DegenerateLevel { level, .. }) => assert_eq!(level, 1.0),
            other => panic!("expected degenerate level, got {other:?}"),
        }
    }

    #[test]
    fn constant_input_is_rejected() {
        assert_eq!(
            TrigPoly::constant(1.0).roots_on_level(0.5).unwrap_err(),
            TrigPolyError::ConstantInput
        );
        assert_eq!(
            TrigPoly::constant(1.0).critical_points().unwrap_err(),
            TrigPolyError::ConstantInput
        );
    }

    #[test]
    fn critical_points_of_sin() {
        let crits = sin().critical_points().unwrap();
        assert_eq!(crits.len(), 2);
        assert!((crits[0].t - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert_eq!(crits[0].extremum, Extremum::Maximum);
        assert!((crits[1].t - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-10);
        assert_eq!(crits[1].extremum, Extremum::Minimum);
    }

    #[test]
    fn critical_points_of_second_harmonic() {
        let crits = TrigPoly::harmonic(2, 0.0, 1.0).critical_points().unwrap();
        assert_eq!(crits.len(), 4);
        let kinds: Vec<_> = crits.iter().map(|c| c.extremum).collect();
        assert_eq!(
            kinds,
            vec![Extremum::Maximum, Extremum::Minimum, Extremum::Maximum, Extremum::Minimum]
        );
    }

    #[test]
    fn random_is_deterministic_in_seed() {
        let f = TrigPoly::random(42, 10, 1.0);
        let g = TrigPoly::random(42, 10, 1.0);
        assert_eq!(f, g);
        assert_eq!(f.degree(), 10);
        assert_ne!(TrigPoly::random(43, 10, 1.0), f);
        assert!(f.coefficient_norm() <= 21.0);
    }

    #[test]
    fn serde_round_trip_preserves_coefficients() {
        let f = TrigPoly::random(5, 4, 2.0);
        let json = serde_json::to_string(&f).unwrap();
        let back: TrigPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(f, back);
        assert!(json.starts_with("{\"mean\":"));
    }

    #[test]
    fn serde_rejects_non_finite() {
        let err = serde_json::from_str::<TrigPoly>("{\"mean\":null,\"coeffs\":[]}");
        assert!(err.is_err());
    }
}
