//! Real polynomials with simple real roots, strictly interlaced pairs, the
//! Euclidean division step that drives the degree recursion, and the
//! substitution of `d/dt` into a polynomial.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::trigpoly::TrigPoly;

/// Maximum relative defect allowed when `(x - c)q - r` is compared against
/// `p` coefficientwise after a division step.
pub const DIVISION_RESIDUAL_TOL: f64 = 1e-9;

/// Redraw threshold for random root sets: the smallest gap between
/// consecutive roots must be at least this factor times the spread.
const MIN_ROOT_GAP_FACTOR: f64 = 1e-6;

/// Errors from interlaced-pair construction and the division lemma.
#[derive(Debug, Clone, PartialEq)]
pub enum PolyError {
    /// Interlacing needs exactly one more `a`-root than `b`-roots.
    ArityMismatch { a_count: usize, b_count: usize },
    /// The root sequences fail strict alternation.
    NotInterlaced,
    /// The division step needs a pair with at least two `a`-roots.
    PairTooSmall { n: usize },
    /// A structural claim about the division step failed numerically; the
    /// witness carries the offending pair and remainder.
    LemmaViolation(Box<LemmaWitness>),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ArityMismatch { a_count, b_count } => write!(
                f,
                "expected one more a-root than b-roots, got {a_count} and {b_count}"
            ),
            PolyError::NotInterlaced => write!(f, "root sequences do not strictly interlace"),
            PolyError::PairTooSmall { n } => {
                write!(f, "division step needs at least two a-roots, got {n}")
            }
            PolyError::LemmaViolation(w) => {
                write!(f, "division lemma violated: {} (c = {}, remainder = {:?})", w.reason, w.c, w.remainder)
            }
        }
    }
}

impl std::error::Error for PolyError {}

/// Witness data for a failed division-lemma check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaWitness {
    pub a_roots: Vec<f64>,
    pub b_roots: Vec<f64>,
    pub c: f64,
    pub remainder: RealPoly,
    pub reason: String,
}

/// A real polynomial in ascending coefficient order. Canonical form trims
/// trailing zeros, so the zero polynomial has no coefficients at all.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl<'de> Deserialize<'de> for RealPoly {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Repr {
            coeffs: Vec<f64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.coeffs.iter().any(|c| !c.is_finite()) {
            return Err(serde::de::Error::custom("coefficients must be finite"));
        }
        Ok(RealPoly::new(repr.coeffs))
    }
}

impl RealPoly {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros. Callers are expected to pass finite values.
    pub fn new(mut coeffs: Vec<f64>) -> RealPoly {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn zero() -> RealPoly {
        RealPoly { coeffs: Vec::new() }
    }

    pub fn one() -> RealPoly {
        RealPoly { coeffs: vec![1.0] }
    }

    /// The monic polynomial `Π (x - r_i)`, built by repeated multiplication
    /// with linear factors. An empty root list gives the constant `1`.
    pub fn from_roots(roots: &[f64]) -> RealPoly {
        roots.iter().fold(Self::one(), |acc, &r| acc.mul_linear(r))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<f64> {
        self.coeffs.last().copied()
    }

    /// Ascending coefficients; empty for the zero polynomial.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Multiplies by the linear factor `(x - c)`.
    pub fn mul_linear(&self, c: f64) -> RealPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i + 1] += a;
            out[i] -= c * a;
        }
        Self::new(out)
    }

    pub fn sub(&self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = vec![0.0; n];
        for (i, &a) in self.coeffs.iter().enumerate() {
            out[i] += a;
        }
        for (i, &b) in rhs.coeffs.iter().enumerate() {
            out[i] -= b;
        }
        Self::new(out)
    }

    pub fn scale(&self, factor: f64) -> RealPoly {
        Self::new(self.coeffs.iter().map(|c| c * factor).collect())
    }
}

/// Checks strict alternation `a_1 < b_1 < a_2 < ... < b_{n-1} < a_n` of two
/// ascending root sequences. Sequences of the wrong relative length are an
/// error, not merely "not interlaced".
pub fn is_interlaced(a: &[f64], b: &[f64]) -> Result<bool, PolyError> {
    if a.len() != b.len() + 1 {
        return Err(PolyError::ArityMismatch { a_count: a.len(), b_count: b.len() });
    }
    Ok((0..b.len()).all(|i| a[i] < b[i] && b[i] < a[i + 1]))
}

/// A pair of monic polynomials `(p, q)` with strictly interlaced simple
/// real roots: `deg p = n`, `deg q = n - 1`, and between consecutive roots
/// of `p` sits exactly one root of `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacedPair {
    a_roots: Vec<f64>,
    b_roots: Vec<f64>,
    p: RealPoly,
    q: RealPoly,
}

impl Serialize for InterlacedPair {
    fn serialize<S>(&self, serializer: S) -> Result<S::Ok, S::Error>
    where
        S: serde::Serializer,
    {
        #[derive(Serialize)]
        struct Repr<'a> {
            a_roots: &'a [f64],
            b_roots: &'a [f64],
        }
        Repr { a_roots: &self.a_roots, b_roots: &self.b_roots }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for InterlacedPair {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        #[derive(Deserialize)]
        struct Repr {
            a_roots: Vec<f64>,
            b_roots: Vec<f64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        if repr.a_roots.iter().chain(&repr.b_roots).any(|r| !r.is_finite()) {
            return Err(serde::de::Error::custom("roots must be finite"));
        }
        InterlacedPair::new(repr.a_roots, repr.b_roots).map_err(serde::de::Error::custom)
    }
}

impl InterlacedPair {
    /// Validates interlacing of the ascending root sequences and expands
    /// both monic polynomials.
    pub fn new(a_roots: Vec<f64>, b_roots: Vec<f64>) -> Result<InterlacedPair, PolyError> {
        if !is_interlaced(&a_roots, &b_roots)? {
            return Err(PolyError::NotInterlaced);
        }
        let p = RealPoly::from_roots(&a_roots);
        let q = RealPoly::from_roots(&b_roots);
        Ok(InterlacedPair { a_roots, b_roots, p, q })
    }

    /// Number of `a`-roots; `p` has degree `n` and `q` has degree `n - 1`.
    pub fn n(&self) -> usize {
        self.a_roots.len()
    }

    pub fn a_roots(&self) -> &[f64] {
        &self.a_roots
    }

    pub fn b_roots(&self) -> &[f64] {
        &self.b_roots
    }

    pub fn p(&self) -> &RealPoly {
        &self.p
    }

    pub fn q(&self) -> &RealPoly {
        &self.q
    }
}

/// One Euclidean division step `p = (x - c)q - r`. Root sums give
/// `c = Σ a_i - Σ b_i` without coefficient cancellation; the top two
/// coefficients of `(x - c)q - p` cancel exactly by construction and are
/// dropped, leaving the remainder `r` of degree at most `n - 2`. The
/// remainder is returned unnormalized (its leading coefficient is the
/// positive scale the recursion divides out later).
pub fn divide_step(pair: &InterlacedPair) -> (f64, RealPoly) {
    let n = pair.n();
    let c =
        pair.a_roots.iter().sum::<f64>() - pair.b_roots.iter().sum::<f64>();
    let mut r = vec![0.0; n + 1];
    for (i, &qi) in pair.q.coeffs().iter().enumerate() {
        r[i + 1] += qi;
        r[i] -= c * qi;
    }
    for (i, &pi) in pair.p.coeffs().iter().enumerate() {
        r[i] -= pi;
    }
    r.truncate(n.saturating_sub(1));
    (c, RealPoly::new(r))
}

/// Result of a certified division step: the shift `c`, the unnormalized
/// remainder with its positive leading scale, the remainder's roots, and
/// the next interlaced pair `(b-roots, remainder roots)` of the recursion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisionReport {
    pub c: f64,
    pub remainder: RealPoly,
    pub scale: f64,
    pub remainder_roots: Vec<f64>,
    pub next_pair: InterlacedPair,
}

/// Certifies the structural claims of the division step for a pair with
/// `n ≥ 2`: the remainder has degree exactly `n - 2` with positive leading
/// coefficient, `(x - c)q - r` reconstructs `p` to relative accuracy
/// [`DIVISION_RESIDUAL_TOL`], the remainder changes sign strictly inside
/// every interval of consecutive `q`-roots, and the resulting root
/// sequences interlace again. Any failed claim is a [`PolyError::LemmaViolation`]
/// carrying the witness.
pub fn verify_division_lemma(pair: &InterlacedPair) -> Result<DivisionReport, PolyError> {
    let n = pair.n();
    if n < 2 {
        return Err(PolyError::PairTooSmall { n });
    }
    let (c, remainder) = divide_step(pair);
    let violation = |reason: String| {
        PolyError::LemmaViolation(Box::new(LemmaWitness {
            a_roots: pair.a_roots.clone(),
            b_roots: pair.b_roots.clone(),
            c,
            remainder: remainder.clone(),
            reason,
        }))
    };

    if remainder.degree() != Some(n - 2) {
        return Err(violation(format!(
            "remainder degree {:?}, expected {}",
            remainder.degree(),
            n - 2
        )));
    }
    let scale = remainder.leading().expect("degree checked above");
    if scale <= 0.0 {
        return Err(violation(format!("remainder leading coefficient {scale} is not positive")));
    }

    let recon = pair.q.mul_linear(c).sub(&remainder);
    let p_max = pair.p.coeffs().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let defect = recon
        .sub(&pair.p)
        .coeffs()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if defect > DIVISION_RESIDUAL_TOL * p_max {
        return Err(violation(format!(
            "reconstruction defect {defect:.3e} exceeds tolerance at scale {p_max:.3e}"
        )));
    }

    let b = &pair.b_roots;
    let mut roots = Vec::with_capacity(n - 2);
    for w in b.windows(2) {
        match bracketed_root(&remainder, w[0], w[1]) {
            Some(root) if w[0] < root && root < w[1] => roots.push(root),
            _ => {
                return Err(violation(format!(
                    "no strict sign change of the remainder in ({}, {})",
                    w[0], w[1]
                )))
            }
        }
    }
    if !is_interlaced(b, &roots)? {
        return Err(violation("remainder roots do not interlace the divisor roots".into()));
    }
    let next_pair =
        InterlacedPair::new(b.clone(), roots.clone()).expect("interlacing checked above");
    Ok(DivisionReport { c, remainder, scale, remainder_roots: roots, next_pair })
}

/// Bisects a sign change of `poly` in `(lo, hi)`, or `None` when the
/// endpoint values do not strictly bracket zero.
fn bracketed_root(poly: &RealPoly, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut vlo = poly.eval(lo);
    let vhi = poly.eval(hi);
    if vlo == 0.0 || vhi == 0.0 || vlo.signum() == vhi.signum() {
        return None;
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // interval at floating-point resolution
        }
        let vm = poly.eval(mid);
        if vm == 0.0 {
            return Some(mid);
        }
        if vm.signum() == vlo.signum() {
            lo = mid;
            vlo = vm;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Substitutes `d/dt` into `poly` and applies the resulting constant-
/// coefficient operator to `f`. Differentiation acts on the `k`-th harmonic
/// as the 2×2 block `D_k = [[0, k], [-k, 0]]`, so `poly(D_k)` is evaluated
/// by Horner's rule per frequency; the mean is scaled by `poly(0)`.
pub fn apply_operator(poly: &RealPoly, f: &TrigPoly) -> TrigPoly {
    let mean = poly.eval(0.0) * f.mean();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let k = (i + 1) as f64;
            let (mut m11, mut m12, mut m21, mut m22) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
            for &cj in poly.coeffs().iter().rev() {
                let (n11, n12) = (-k * m12, k * m11);
                let (n21, n22) = (-k * m22, k * m21);
                m11 = n11 + cj;
                m12 = n12;
                m21 = n21;
                m22 = n22 + cj;
            }
            (m11 * a + m12 * b, m21 * a + m22 * b)
        })
        .collect();
    TrigPoly::new(mean, coeffs).expect("operator coefficients stay finite")
}

/// Draws `2n - 1` points uniform in `[-spread, spread]`, redrawing until
/// consecutive gaps clear [`MIN_ROOT_GAP_FACTOR`]` × spread`, and splits
/// them alternately into `n` a-roots and `n - 1` b-roots. Deterministic in
/// the seed.
pub fn random_interlaced_pair(seed: u64, n: usize, spread: f64) -> InterlacedPair {
    assert!(n >= 1, "a pair needs at least one a-root");
    assert!(spread > 0.0, "spread must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut vals: Vec<f64> =
            (0..2 * n - 1).map(|_| rng.random_range(-spread..=spread)).collect();
        vals.sort_by(f64::total_cmp);
        let gap_ok = vals.windows(2).all(|w| w[1] - w[0] >= MIN_ROOT_GAP_FACTOR * spread);
        if !gap_ok {
            continue;
        }
        let a: Vec<f64> = vals.iter().copied().step_by(2).collect();
        let b: Vec<f64> = vals.iter().copied().skip(1).step_by(2).collect();
        return InterlacedPair::new(a, b).expect("alternating split interlaces");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(a: &[f64], b: &[f64]) -> InterlacedPair {
        InterlacedPair::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn from_roots_expands_exactly() {
        assert_eq!(RealPoly::from_roots(&[]).coeffs(), &[1.0]);
        assert_eq!(RealPoly::from_roots(&[-1.0, 1.0]).coeffs(), &[-1.0, 0.0, 1.0]);
        assert_eq!(
            RealPoly::from_roots(&[1.0, 2.0, 3.0]).coeffs(),
            &[-6.0, 11.0, -6.0, 1.0]
        );
    }

    #[test]
    fn canonical_form_trims_zeros() {
        let p = RealPoly::new(vec![1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.coeffs(), &[1.0, 2.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RealPoly::new(vec![0.0, 0.0]).is_zero());
        assert_eq!(RealPoly::zero().degree(), None);
    }

    #[test]
    fn horner_matches_direct_evaluation() {
        let p = RealPoly::new(vec![-6.0, 11.0, -6.0, 1.0]);
        for x in [-2.0, 0.0, 1.0, 2.0, 3.0, 4.5] {
            let direct = (x - 1.0) * (x - 2.0) * (x - 3.0);
            assert!((p.eval(x) - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn interlacing_predicate() {
        assert!(is_interlaced(&[0.0], &[]).unwrap());
        assert!(is_interlaced(&[-1.0, 1.0], &[0.0]).unwrap());
        assert!(!is_interlaced(&[-1.0, 1.0], &[1.5]).unwrap());
        assert!(!is_interlaced(&[-1.0, 1.0], &[-1.0]).unwrap());
        assert_eq!(
            is_interlaced(&[0.0], &[1.0]).unwrap_err(),
            PolyError::ArityMismatch { a_count: 1, b_count: 1 }
        );
    }

    #[test]
    fn divide_step_worked_examples() {
        // (x² - 1) / x: c = 0, r = 1.
        let (c, r) = divide_step(&pair(&[-1.0, 1.0], &[0.0]));
        assert_eq!(c, 0.0);
        assert_eq!(r.coeffs(), &[1.0]);

        // (x³ - x) / (x² - ¼): c = 0, r = ¾ x.
        let (c, r) = divide_step(&pair(&[-1.0, 0.0, 1.0], &[-0.5, 0.5]));
        assert_eq!(c, 0.0);
        assert_eq!(r.coeffs(), &[0.0, 0.75]);

        // (x - a) / 1: c = a, r = 0.
        let (c, r) = divide_step(&pair(&[2.5], &[]));
        assert_eq!(c, 2.5);
        assert!(r.is_zero());
    }

    #[test]
    fn division_lemma_on_cubic() {
        let report = verify_division_lemma(&pair(&[-1.0, 0.0, 1.0], &[-0.5, 0.5])).unwrap();
        assert_eq!(report.c, 0.0);
        assert_eq!(report.scale, 0.75);
        assert_eq!(report.remainder_roots.len(), 1);
        assert!(report.remainder_roots[0].abs() < 1e-12);
        assert_eq!(report.next_pair.a_roots(), &[-0.5, 0.5]);
    }

    #[test]
    fn division_lemma_base_case_is_vacuous() {
        let report = verify_division_lemma(&pair(&[-1.0, 1.0], &[0.0])).unwrap();
        assert_eq!(report.remainder.degree(), Some(0));
        assert_eq!(report.scale, 1.0);
        assert!(report.remainder_roots.is_empty());
        assert_eq!(report.next_pair.n(), 1);
    }

    #[test]
    fn division_lemma_rejects_single_root_pairs() {
        assert_eq!(
            verify_division_lemma(&pair(&[1.0], &[])).unwrap_err(),
            PolyError::PairTooSmall { n: 1 }
        );
    }

    #[test]
    fn operator_x_is_differentiation_bit_for_bit() {
        let f = TrigPoly::random(3, 8, 1.5);
        let x = RealPoly::new(vec![0.0, 1.0]);
        assert_eq!(apply_operator(&x, &f), f.derivative());
    }

    #[test]
    fn operator_on_first_harmonic_matches_hand_expansion() {
        // (d² - 1) sin t = -2 sin t, exactly in coefficients.
        let p = RealPoly::new(vec![-1.0, 0.0, 1.0]);
        let f = TrigPoly::harmonic(1, 0.0, 1.0);
        let g = apply_operator(&p, &f);
        assert_eq!(g.mean(), 0.0);
        assert_eq!(g.coeffs(), &[(0.0, -2.0)]);
    }

    #[test]
    fn operator_respects_polynomial_products() {
        let f = TrigPoly::random(9, 6, 1.0);
        let p = RealPoly::from_roots(&[1.0, -2.0]);
        let seq = apply_operator(
            &RealPoly::from_roots(&[1.0]),
            &apply_operator(&RealPoly::from_roots(&[-2.0]), &f),
        );
        let joint = apply_operator(&p, &f);
        assert_eq!(joint.degree(), seq.degree());
        for (l, r) in joint.coeffs().iter().zip(seq.coeffs()) {
            assert!((l.0 - r.0).abs() < 1e-12 && (l.1 - r.1).abs() < 1e-12);
        }
        assert!((joint.mean() - seq.mean()).abs() < 1e-12);
    }

    #[test]
    fn operator_mean_scales_by_constant_term() {
        let p = RealPoly::new(vec![3.0, 0.0, 1.0]);
        let f = TrigPoly::constant(2.0);
        let g = apply_operator(&p, &f);
        assert_eq!(g.mean(), 6.0);
        assert_eq!(g.degree(), 0);
    }

    #[test]
    fn random_pairs_are_deterministic_and_interlaced() {
        let p1 = random_interlaced_pair(7, 6, 1.0);
        let p2 = random_interlaced_pair(7, 6, 1.0);
        assert_eq!(p1, p2);
        assert_eq!(p1.n(), 6);
        assert!(is_interlaced(p1.a_roots(), p1.b_roots()).unwrap());
        assert_ne!(random_interlaced_pair(8, 6, 1.0), p1);
        assert_eq!(random_interlaced_pair(1, 1, 1.0).n(), 1);
    }

    #[test]
    fn pair_construction_rejects_bad_input() {
        assert_eq!(
            InterlacedPair::new(vec![0.0, 1.0], vec![2.0]).unwrap_err(),
            PolyError::NotInterlaced
        );
        assert_eq!(
            InterlacedPair::new(vec![0.0], vec![1.0]).unwrap_err(),
            PolyError::ArityMismatch { a_count: 1, b_count: 1 }
        );
    }

    #[test]
    fn serde_round_trips() {
        let pair = random_interlaced_pair(11, 4, 2.0);
        let json = serde_json::to_string(&pair).unwrap();
        let back: InterlacedPair = serde_json::from_str(&json).unwrap();
        assert_eq!(pair, back);
        assert!(json.starts_with("{\"a_roots\":"));

        let p = RealPoly::new(vec![1.0, 0.5]);
        let j = serde_json::to_string(&p).unwrap();
        assert_eq!(j, "{\"coeffs\":[1.0,0.5]}");
        assert_eq!(serde_json::from_str::<RealPoly>(&j).unwrap(), p);
        assert!(serde_json::from_str::<InterlacedPair>("{\"a_roots\":[0.0,1.0],\"b_roots\":[2.0]}").is_err());
    }
}
