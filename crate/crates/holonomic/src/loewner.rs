//! Instances pairing an interlaced polynomial pair with a periodic
//! function, machine checks for each step of the non-negativity argument
//! (crossing directions, extremum pairing on lines, deformation events,
//! the division recursion), and randomized sweep harnesses.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::child_seed;
use crate::polyops::{
    apply_operator, divide_step, random_interlaced_pair, verify_division_lemma, InterlacedPair,
    PolyError, RealPoly,
};
use crate::trigpoly::{TrigPoly, TrigPolyError, TRANSVERSAL_SLOPE_FACTOR};
use crate::winding::{
    grid_rotation_numbers, Curve, Direction, Point, WindingError, LEVEL_PERTURBATION_FACTOR,
};

/// Relative tolerance for the operator identity `p̂f = (q̂f)' - c·q̂f - r̂f`
/// certified at instance construction.
pub const OPERATOR_IDENTITY_TOL: f64 = 1e-9;

/// Relative magnitude of the coefficient noise added to `f` when a trial
/// hits an unresolvable degeneracy and is retried.
pub const F_PERTURBATION_FACTOR: f64 = 1e-7;

/// Retry budget per trial for degenerate draws.
const MAX_ATTEMPTS: usize = 8;

/// Errors from instance construction and verification.
#[derive(Debug, Clone, PartialEq)]
pub enum LoewnerError {
    /// The drawn data does not produce a certifiable instance (constant
    /// function, failed operator identity, or a non-immersed curve).
    DegenerateInstance { reason: String },
    /// A deformation event candidate sits where the height derivative
    /// vanishes, so its crossing cannot be certified.
    TangentialEvent { level: f64, gap: f64 },
    Poly(PolyError),
    Winding(WindingError),
}

impl fmt::Display for LoewnerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoewnerError::DegenerateInstance { reason } => {
                write!(f, "degenerate instance: {reason}")
            }
            LoewnerError::TangentialEvent { level, gap } => write!(
                f,
                "deformation event at level {level} is tangential within {gap:.3e}"
            ),
            LoewnerError::Poly(e) => write!(f, "{e}"),
            LoewnerError::Winding(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LoewnerError {}

impl From<PolyError> for LoewnerError {
    fn from(e: PolyError) -> Self {
        LoewnerError::Poly(e)
    }
}

impl From<WindingError> for LoewnerError {
    fn from(e: WindingError) -> Self {
        LoewnerError::Winding(e)
    }
}

fn degenerate(reason: impl Into<String>) -> LoewnerError {
    LoewnerError::DegenerateInstance { reason: reason.into() }
}

/// An interlaced pair applied to a periodic function: the curve
/// `γ = (p̂f, q̂f)` together with the division data `p = (x - c)q - r` and
/// the operator images needed by the deformation argument.
#[derive(Debug, Clone)]
pub struct LoewnerInstance {
    pair: InterlacedPair,
    f: TrigPoly,
    c: f64,
    remainder: RealPoly,
    p_of_f: TrigPoly,
    q_of_f: TrigPoly,
    r_of_f: TrigPoly,
    curve: Curve,
}

impl LoewnerInstance {
    /// Applies the operators, certifies the division identity on the
    /// operator images, and validates the curve.
    pub fn build(pair: InterlacedPair, f: TrigPoly) -> Result<LoewnerInstance, LoewnerError> {
        if f.degree() == 0 {
            return Err(degenerate("constant function"));
        }
        let (c, remainder) = divide_step(&pair);
        let p_of_f = apply_operator(pair.p(), &f);
        let q_of_f = apply_operator(pair.q(), &f);
        let r_of_f = apply_operator(&remainder, &f);
        let recon = &(&q_of_f.derivative() - &q_of_f.scale(c)) - &r_of_f;
        let defect = (&recon - &p_of_f).coefficient_norm();
        let scale = 1.0 + p_of_f.coefficient_norm();
        if defect > OPERATOR_IDENTITY_TOL * scale {
            return Err(degenerate(format!(
                "operator identity defect {defect:.3e} at scale {scale:.3e}"
            )));
        }
        let curve = Curve::new(p_of_f.clone(), q_of_f.clone())
            .map_err(|e| degenerate(format!("curve rejected: {e}")))?;
        Ok(LoewnerInstance { pair, f, c, remainder, p_of_f, q_of_f, r_of_f, curve })
    }

    pub fn pair(&self) -> &InterlacedPair {
        &self.pair
    }

    pub fn f(&self) -> &TrigPoly {
        &self.f
    }

    pub fn n(&self) -> usize {
        self.pair.n()
    }

    /// The shift of the division step `p = (x - c)q - r`.
    pub fn c(&self) -> f64 {
        self.c
    }

    /// The unnormalized remainder `r`.
    pub fn remainder(&self) -> &RealPoly {
        &self.remainder
    }

    /// `p̂f`, the horizontal component of the curve.
    pub fn p_of_f(&self) -> &TrigPoly {
        &self.p_of_f
    }

    /// `q̂f`, the height component of the curve.
    pub fn q_of_f(&self) -> &TrigPoly {
        &self.q_of_f
    }

    /// `r̂f`, the operator image of the remainder.
    pub fn r_of_f(&self) -> &TrigPoly {
        &self.r_of_f
    }

    /// The curve `γ = (p̂f, q̂f)`.
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    /// End curve `Γ₁ = (-c·q̂f - r̂f, q̂f)` of the linear deformation
    /// `Γ_s = ((1-s)(q̂f)' - c·q̂f - r̂f, q̂f)` that starts at `γ`.
    pub fn deformed_end_curve(&self) -> Result<Curve, LoewnerError> {
        let x1 = &self.q_of_f.scale(-self.c) - &self.r_of_f;
        Curve::new(x1, self.q_of_f.clone())
            .map_err(|e| degenerate(format!("deformed end curve rejected: {e}")))
    }

    /// The next curve of the recursion, `(q̂f, r̂f)`. The end curve of the
    /// deformation is its image under `[[-c, -1], [1, 0]]` (determinant 1),
    /// so rotation numbers transfer. Fails for `n = 1`, where `r = 0`.
    pub fn next_curve(&self) -> Result<Curve, LoewnerError> {
        Curve::new(self.q_of_f.clone(), self.r_of_f.clone())
            .map_err(|e| degenerate(format!("next curve rejected: {e}")))
    }
}

/// A parameter/time pair where the deformation sweeps through the base
/// point, with the transversality determinant certified positive. The
/// rotation number drops by one at each event as `s` increases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeformationEvent {
    pub s: f64,
    pub t: f64,
    pub determinant: f64,
    pub delta_r: i64,
}

/// All parameters `(s, t) ∈ (0,1) × [0,2π)` where `Γ_s(t) = p`. Along the
/// level `q̂f(τ) = p.y` the first coordinate is affine in `s`, so each
/// transversal root contributes at most one event, at
/// `s = 1 - (p.x + c·p.y + r̂f(τ)) / (q̂f)'(τ)`; the deformation
/// determinant there is `((q̂f)'(τ))² > 0`.
pub fn deformation_events(
    inst: &LoewnerInstance,
    p: Point,
) -> Result<Vec<DeformationEvent>, LoewnerError> {
    let g0 = inst.curve();
    if !g0.is_farther_than(p, g0.off_curve_tolerance()) {
        return Err(WindingError::OnCurve { x: p.x, y: p.y }.into());
    }
    let g1 = inst.deformed_end_curve()?;
    if !g1.is_farther_than(p, g1.off_curve_tolerance()) {
        return Err(WindingError::OnCurve { x: p.x, y: p.y }.into());
    }
    let roots = inst.q_of_f.roots_on_level(p.y).map_err(|e| match e {
        TrigPolyError::DegenerateLevel { level, gap } => {
            LoewnerError::TangentialEvent { level, gap }
        }
        other => degenerate(format!("level roots: {other}")),
    })?;
    let dg = inst.q_of_f.derivative();
    let slope_tol = TRANSVERSAL_SLOPE_FACTOR * (1.0 + dg.coefficient_norm());
    let mut events = Vec::new();
    for root in roots {
        let slope = dg.evaluate(root.t);
        if slope.abs() <= slope_tol {
            return Err(LoewnerError::TangentialEvent { level: p.y, gap: slope.abs() });
        }
        let num = p.x + inst.c * p.y + inst.r_of_f.evaluate(root.t);
        let s = 1.0 - num / slope;
        if s > 0.0 && s < 1.0 {
            events.push(DeformationEvent { s, t: root.t, determinant: slope * slope, delta_r: -1 });
        }
    }
    events.sort_by(|a, b| a.s.total_cmp(&b.s).then(a.t.total_cmp(&b.t)));
    Ok(events)
}

/// Outcome of certifying one deformation: rotation numbers at both ends,
/// the event list, and whether the bookkeeping closed up.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeformationCheck {
    pub r_start: i64,
    pub r_end: i64,
    /// Rotation number of the next recursion curve about the pulled-back
    /// base point; must equal `r_end`.
    pub r_next_image: i64,
    pub events: Vec<DeformationEvent>,
    pub drop_matches: bool,
    pub determinants_positive: bool,
    pub linear_image_matches: bool,
    pub monotone: bool,
    pub perturbed: bool,
}

impl DeformationCheck {
    pub fn all_hold(&self) -> bool {
        self.drop_matches
            && self.determinants_positive
            && self.linear_image_matches
            && self.monotone
    }
}

/// Certifies one step of the induction at a base point: counts the
/// deformation events, checks `r_start - r_end` equals the event count
/// with every determinant positive, and checks that the end curve carries
/// the same rotation number as the next recursion curve about the
/// pulled-back point (the two are related by a determinant-one linear
/// map).
pub fn verify_monotone_deformation(
    inst: &LoewnerInstance,
    p: Point,
) -> Result<DeformationCheck, LoewnerError> {
    if inst.n() < 2 {
        return Err(PolyError::PairTooSmall { n: inst.n() }.into());
    }
    let events = deformation_events(inst, p)?;
    let g1 = inst.deformed_end_curve()?;
    let next = inst.next_curve()?;
    let (r_start, e0) = inst.curve().rotation_number_ray_robust(p)?;
    let (r_end, e1) = g1.rotation_number_ray_robust(p)?;
    // Γ₁ = L(q̂f, r̂f) with L = [[-c, -1], [1, 0]], so compare against the
    // next curve at L⁻¹p = (p.y, -p.x - c·p.y).
    let pulled_back = Point::new(p.y, -p.x - inst.c * p.y);
    let (r_next_image, e2) = next.rotation_number_ray_robust(pulled_back)?;
    Ok(DeformationCheck {
        r_start,
        r_end,
        r_next_image,
        drop_matches: r_start - r_end == events.len() as i64,
        determinants_positive: events.iter().all(|e| e.determinant > 0.0),
        linear_image_matches: r_next_image == r_end,
        monotone: r_start >= r_end,
        perturbed: e0.is_some() || e1.is_some() || e2.is_some(),
        events,
    })
}

/// One certified record of the claim-one mechanism at a set of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClaimCheck {
    /// Rotation numbers aligned with the input points; `None` marks points
    /// excluded by the tube or by an unresolvable level.
    pub rotations: Vec<Option<i64>>,
    pub min_rotation: Option<i64>,
    pub excluded: usize,
    /// Transversal crossings whose direction matched the sign of the
    /// horizontal coordinate.
    pub crossings_certified: usize,
    pub violations: Vec<Violation>,
}

/// Certifies the first claim for `γ = (f', f)` at the given points: both
/// rotation algorithms agree, values are non-negative, and on every level
/// met the crossing direction matches the sign rule (upward exactly at
/// `x > 0`) with balanced up/down counts — which is the whole mechanism
/// forcing non-negativity for holonomic curves.
pub fn verify_claim1(f: &TrigPoly, points: &[Point]) -> Result<ClaimCheck, LoewnerError> {
    let curve = Curve::holonomic(f).map_err(|e| match e {
        WindingError::NotImmersed { min_speed } => {
            degenerate(format!("holonomic curve not immersed (min speed {min_speed:.3e})"))
        }
        other => LoewnerError::Winding(other),
    })?;
    let mut check = ClaimCheck {
        rotations: Vec::with_capacity(points.len()),
        min_rotation: None,
        excluded: 0,
        crossings_certified: 0,
        violations: Vec::new(),
    };
    let mut levels: Vec<f64> = Vec::new();
    for &p in points {
        match curve.rotation_number_ray_robust(p) {
            Ok((r, _)) => {
                match curve.rotation_number_angle(p) {
                    Ok((ang, residual)) => {
                        if ang != r {
                            check.violations.push(Violation {
                                trial: 0,
                                kind: "algorithm_mismatch".into(),
                                point: Some([p.x, p.y]),
                                value: (r - ang) as f64,
                            });
                        }
                        if residual > 0.05 {
                            check.violations.push(Violation {
                                trial: 0,
                                kind: "angle_residual".into(),
                                point: Some([p.x, p.y]),
                                value: residual,
                            });
                        }
                    }
                    Err(_) => {} // tube recheck differences are excluded above
                }
                if r < 0 {
                    check.violations.push(Violation {
                        trial: 0,
                        kind: "negative_rotation".into(),
                        point: Some([p.x, p.y]),
                        value: r as f64,
                    });
                }
                check.min_rotation = Some(check.min_rotation.map_or(r, |m: i64| m.min(r)));
                check.rotations.push(Some(r));
                levels.push(p.y);
            }
            Err(_) => {
                check.excluded += 1;
                check.rotations.push(None);
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    for level in levels {
        let events = match curve.crossings_with_line(level) {
            Ok(e) => e,
            Err(_) => continue, // the robust path already covered this row
        };
        let mut ups = 0usize;
        let mut downs = 0usize;
        for e in &events {
            let up = e.direction == Direction::Up;
            if up {
                ups += 1;
            } else {
                downs += 1;
            }
            if up != (e.x_pos > 0.0) {
                check.violations.push(Violation {
                    trial: 0,
                    kind: "crossing_direction".into(),
                    point: Some([e.x_pos, level]),
                    value: e.x_pos,
                });
            } else {
                check.crossings_certified += 1;
            }
        }
        if ups != downs {
            check.violations.push(Violation {
                trial: 0,
                kind: "crossing_balance".into(),
                point: None,
                value: ups as f64 - downs as f64,
            });
        }
    }
    Ok(check)
}

/// One certified pairing on a horizontal line: the crossing that raises
/// the count toward the base point is followed (cyclically in `t`) by a
/// crossing that cancels it, strictly farther along the ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BolPairing {
    pub t_bad: f64,
    pub t_fix: f64,
    pub x_bad: f64,
    pub x_fix: f64,
    /// Signed separation in the direction that must be positive.
    pub margin: f64,
    pub wrapped: bool,
}

/// Report of the extremum-pairing certificate for `γ = (f'' - f, f')`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BolReport {
    pub point: Point,
    /// True when the base level is positive and the mirrored leftward-ray
    /// form of the pairing was certified instead.
    pub mirrored: bool,
    pub ray_crossings: usize,
    pub pairings: Vec<BolPairing>,
    pub violations: Vec<Violation>,
}

/// Certifies the pairing mechanism on the line through `p`: writing
/// `g(t) = f(t) - p.y·t`, crossings of the line are extrema of `g`, and
/// after a downward ray crossing the next extremum is an upward crossing
/// strictly farther right (for `p.y ≤ 0`; for `p.y > 0` the mirrored
/// statement on the leftward ray is certified and flagged).
pub fn verify_bol_pairing(f: &TrigPoly, p: Point) -> Result<BolReport, LoewnerError> {
    let x_comp = &f.derivative().derivative() - f;
    let curve = Curve::new(x_comp, f.derivative()).map_err(|e| match e {
        WindingError::NotImmersed { min_speed } => {
            degenerate(format!("curve not immersed (min speed {min_speed:.3e})"))
        }
        other => LoewnerError::Winding(other),
    })?;
    if !curve.is_farther_than(p, curve.off_curve_tolerance()) {
        return Err(WindingError::OnCurve { x: p.x, y: p.y }.into());
    }
    let events = curve.crossings_with_line(p.y)?;
    let mirrored = p.y > 0.0;
    let on_ray = |x: f64| if mirrored { x < p.x } else { x > p.x };
    let bad_direction = if mirrored { Direction::Up } else { Direction::Down };
    let mut report = BolReport {
        point: p,
        mirrored,
        ray_crossings: events.iter().filter(|e| on_ray(e.x_pos)).count(),
        pairings: Vec::new(),
        violations: Vec::new(),
    };
    let ups = events.iter().filter(|e| e.direction == Direction::Up).count();
    if ups * 2 != events.len() {
        report.violations.push(Violation {
            trial: 0,
            kind: "crossing_balance".into(),
            point: Some([p.x, p.y]),
            value: ups as f64 * 2.0 - events.len() as f64,
        });
    }
    for (i, e) in events.iter().enumerate() {
        if !on_ray(e.x_pos) || e.direction != bad_direction {
            continue;
        }
        let wrapped = i + 1 == events.len();
        let nxt = events[(i + 1) % events.len()];
        let margin =
            if mirrored { e.x_pos - nxt.x_pos } else { nxt.x_pos - e.x_pos };
        let paired = nxt.direction != bad_direction && on_ray(nxt.x_pos) && margin > 0.0;
        if paired {
            report.pairings.push(BolPairing {
                t_bad: e.t,
                t_fix: nxt.t,
                x_bad: e.x_pos,
                x_fix: nxt.x_pos,
                margin,
                wrapped,
            });
        } else {
            report.violations.push(Violation {
                trial: 0,
                kind: "bol_pairing".into(),
                point: Some([e.x_pos, p.y]),
                value: margin,
            });
        }
    }
    Ok(report)
}

/// One stage of the division recursion: the certified step data and the
/// pair it hands to the next stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainStage {
    pub c: f64,
    pub scale: f64,
    pub pair: InterlacedPair,
}

/// Runs the division recursion down to a single root, certifying every
/// step; the chain for a pair with `n` roots has length `n - 1`.
pub fn recursion_chain(pair: &InterlacedPair) -> Result<Vec<ChainStage>, PolyError> {
    let mut stages = Vec::new();
    let mut current = pair.clone();
    while current.n() >= 2 {
        let report = verify_division_lemma(&current)?;
        stages.push(ChainStage {
            c: report.c,
            scale: report.scale,
            pair: report.next_pair.clone(),
        });
        current = report.next_pair;
    }
    Ok(stages)
}

/// A certified failure found by a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    pub kind: String,
    pub point: Option<[f64; 2]>,
    pub value: f64,
}

/// A perturbation a sweep applied to keep a trial non-degenerate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    pub trial: u64,
    pub context: String,
    pub magnitude: f64,
}

/// Aggregated outcome of a randomized sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub seed: u64,
    pub n: usize,
    pub f_degree: usize,
    pub trials: u64,
    pub points_tested: u64,
    pub points_excluded: u64,
    /// Minimum certified rotation number seen, `0` when none was computed.
    pub min_rotation: i64,
    pub crossings_certified: u64,
    pub violations: Vec<Violation>,
    pub perturbations: Vec<Perturbation>,
    /// Trials still degenerate after the retry budget.
    pub unresolved_trials: Vec<u64>,
    pub elapsed_ms: u64,
}

/// Parameters shared by the sweep harnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: u64,
    /// Largest pair size drawn in random-pair sweeps.
    pub n_max: usize,
    /// Trigonometric degree of every drawn function.
    pub f_degree: usize,
    pub amplitude: f64,
    pub grid: (usize, usize),
    /// Grid bounds inflate the curve's bounding box by this factor.
    pub margin: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 42,
            trials: 100,
            n_max: 8,
            f_degree: 10,
            amplitude: 1.0,
            grid: (20, 20),
            margin: 1.2,
        }
    }
}

fn inflate(b: [f64; 4], margin: f64) -> [f64; 4] {
    let cx = 0.5 * (b[0] + b[2]);
    let cy = 0.5 * (b[1] + b[3]);
    let hw = 0.5 * (b[2] - b[0]) * margin;
    let hh = 0.5 * (b[3] - b[1]) * margin;
    [cx - hw, cy - hh, cx + hw, cy + hh]
}

#[derive(Default)]
struct TrialOutcome {
    points: u64,
    excluded: u64,
    min: Option<i64>,
    crossings: u64,
    violations: Vec<Violation>,
    perturbations: Vec<Perturbation>,
    unresolved: bool,
}

impl TrialOutcome {
    fn note_min(&mut self, r: i64) {
        self.min = Some(self.min.map_or(r, |m| m.min(r)));
    }
}

fn merge_outcomes(
    cfg: &SweepConfig,
    n: usize,
    outcomes: Vec<TrialOutcome>,
    started: Instant,
) -> VerificationReport {
    let mut report = VerificationReport {
        seed: cfg.seed,
        n,
        f_degree: cfg.f_degree,
        trials: cfg.trials,
        points_tested: 0,
        points_excluded: 0,
        min_rotation: 0,
        crossings_certified: 0,
        violations: Vec::new(),
        perturbations: Vec::new(),
        unresolved_trials: Vec::new(),
        elapsed_ms: started.elapsed().as_millis() as u64,
    };
    let mut min: Option<i64> = None;
    for (trial, out) in outcomes.into_iter().enumerate() {
        report.points_tested += out.points;
        report.points_excluded += out.excluded;
        report.crossings_certified += out.crossings;
        if let Some(m) = out.min {
            min = Some(min.map_or(m, |cur| cur.min(m)));
        }
        report.violations.extend(out.violations);
        report.perturbations.extend(out.perturbations);
        if out.unresolved {
            report.unresolved_trials.push(trial as u64);
        }
    }
    report.min_rotation = min.unwrap_or(0);
    report
}

enum PairSource<'a> {
    Random { n_max: usize },
    Fixed(&'a InterlacedPair),
}

/// Draws the function for an attempt: the base draw on the first attempt,
/// plus seeded coefficient noise of relative size
/// [`F_PERTURBATION_FACTOR`] on retries.
fn attempt_function(
    base: &TrigPoly,
    tseed: u64,
    attempt: usize,
    degree: usize,
    amplitude: f64,
    trial: u64,
    perturbations: &mut Vec<Perturbation>,
) -> TrigPoly {
    if attempt == 0 {
        return base.clone();
    }
    let magnitude = F_PERTURBATION_FACTOR * amplitude;
    perturbations.push(Perturbation {
        trial,
        context: format!("function-coefficients-attempt-{attempt}"),
        magnitude,
    });
    let noise = TrigPoly::random(child_seed(tseed, 5, attempt as u64), degree, magnitude);
    base + &noise
}

fn run_grid_trial(
    cfg: &SweepConfig,
    source: &PairSource<'_>,
    certify_directions: bool,
    trial: u64,
) -> TrialOutcome {
    let tseed = child_seed(cfg.seed, 1, trial);
    let pair = match source {
        PairSource::Random { n_max } => {
            let mut shape_rng = ChaCha8Rng::seed_from_u64(child_seed(tseed, 2, 0));
            let n = shape_rng.random_range(1..=*n_max);
            random_interlaced_pair(child_seed(tseed, 3, 0), n, 1.0)
        }
        PairSource::Fixed(p) => (*p).clone(),
    };
    let f_base = TrigPoly::random(child_seed(tseed, 4, 0), cfg.f_degree, cfg.amplitude);
    let mut out = TrialOutcome::default();
    for attempt in 0..MAX_ATTEMPTS {
        let f = attempt_function(
            &f_base,
            tseed,
            attempt,
            cfg.f_degree,
            cfg.amplitude,
            trial,
            &mut out.perturbations,
        );
        let inst = match LoewnerInstance::build(pair.clone(), f) {
            Ok(inst) => inst,
            Err(_) => continue,
        };
        let bounds = inflate(inst.curve().bounding_box(), cfg.margin);
        let (nx, ny) = cfg.grid;
        let grid = grid_rotation_numbers(inst.curve(), bounds, nx, ny);
        if grid.unresolved > 0 {
            continue;
        }
        for iy in &grid.perturbed_rows {
            out.perturbations.push(Perturbation {
                trial,
                context: format!("grid-row-{iy}"),
                magnitude: LEVEL_PERTURBATION_FACTOR * inst.curve().vertical_extent(),
            });
        }
        for (idx, value) in grid.values.iter().enumerate() {
            let Some(r) = *value else { continue };
            out.points += 1;
            out.note_min(r);
            if r < 0 {
                let ix = idx % nx;
                let iy = idx / nx;
                let px = bounds[0] + (bounds[2] - bounds[0]) * ix as f64 / (nx - 1) as f64;
                let py = bounds[1] + (bounds[3] - bounds[1]) * iy as f64 / (ny - 1) as f64;
                out.violations.push(Violation {
                    trial,
                    kind: "negative_rotation".into(),
                    point: Some([px, py]),
                    value: r as f64,
                });
            }
        }
        out.excluded += grid.excluded as u64;
        if certify_directions {
            certify_crossing_directions(inst.curve(), bounds, ny, trial, &mut out);
        }
        return out;
    }
    out.unresolved = true;
    out
}

/// The claim-one sign rule on every resolvable grid level: upward
/// crossings exactly where the horizontal coordinate is positive, with
/// balanced up/down counts.
fn certify_crossing_directions(
    curve: &Curve,
    bounds: [f64; 4],
    ny: usize,
    trial: u64,
    out: &mut TrialOutcome,
) {
    for iy in 0..ny {
        let level = bounds[1] + (bounds[3] - bounds[1]) * iy as f64 / (ny - 1) as f64;
        let events = match curve.crossings_with_line(level) {
            Ok(e) => e,
            Err(_) => continue,
        };
        let mut ups = 0usize;
        for e in &events {
            let up = e.direction == Direction::Up;
            ups += up as usize;
            if up == (e.x_pos > 0.0) {
                out.crossings += 1;
            } else {
                out.violations.push(Violation {
                    trial,
                    kind: "crossing_direction".into(),
                    point: Some([e.x_pos, level]),
                    value: e.x_pos,
                });
            }
        }
        if ups * 2 != events.len() {
            out.violations.push(Violation {
                trial,
                kind: "crossing_balance".into(),
                point: None,
                value: ups as f64 * 2.0 - events.len() as f64,
            });
        }
    }
}

/// Randomized sweep of the full statement: random interlaced pairs and
/// random functions, rotation numbers over an inflated bounding-box grid.
pub fn verify_theorem(cfg: &SweepConfig) -> VerificationReport {
    let started = Instant::now();
    let source = PairSource::Random { n_max: cfg.n_max };
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_grid_trial(cfg, &source, false, trial))
        .collect();
    merge_outcomes(cfg, cfg.n_max, outcomes, started)
}

/// Sweep with a fixed pair and random functions; optionally certifies the
/// claim-one crossing-direction rule on every grid level (valid only for
/// the pair `(x, 1)`, whose curves are `(f', f)`).
pub fn fixed_pair_sweep(
    pair: &InterlacedPair,
    cfg: &SweepConfig,
    certify_directions: bool,
) -> VerificationReport {
    let started = Instant::now();
    let source = PairSource::Fixed(pair);
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_grid_trial(cfg, &source, certify_directions, trial))
        .collect();
    merge_outcomes(cfg, pair.n(), outcomes, started)
}

/// The pair `(x, 1)`, whose instances are the holonomic curves `(f', f)`.
pub fn claim1_pair() -> InterlacedPair {
    InterlacedPair::new(vec![0.0], vec![]).expect("single root interlaces trivially")
}

/// The pair `(x² - 1, x)`, whose instances are the curves `(f'' - f, f')`.
pub fn claim2_pair() -> InterlacedPair {
    InterlacedPair::new(vec![-1.0, 1.0], vec![0.0]).expect("roots interlace")
}

/// Randomized sweep of the extremum-pairing certificate on curves
/// `(f'' - f, f')` at base points with non-positive level.
pub fn bol_sweep(cfg: &SweepConfig) -> VerificationReport {
    let started = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let tseed = child_seed(cfg.seed, 6, trial);
            let f_base = TrigPoly::random(child_seed(tseed, 4, 0), cfg.f_degree, cfg.amplitude);
            let mut out = TrialOutcome::default();
            for attempt in 0..MAX_ATTEMPTS {
                let f = attempt_function(
                    &f_base,
                    tseed,
                    attempt,
                    cfg.f_degree,
                    cfg.amplitude,
                    trial,
                    &mut out.perturbations,
                );
                let curve = match Curve::new(&f.derivative().derivative() - &f, f.derivative()) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let b = inflate(curve.bounding_box(), cfg.margin);
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(tseed, 7, attempt as u64));
                let p = Point::new(
                    rng.random_range(b[0]..=b[2]),
                    // The as-stated claim covers non-positive levels.
                    rng.random_range(b[1].min(-1e-3)..=0.0),
                );
                match verify_bol_pairing(&f, p) {
                    Ok(mut report) => {
                        out.points += 1;
                        out.crossings += report.pairings.len() as u64;
                        for v in &mut report.violations {
                            v.trial = trial;
                        }
                        out.violations.extend(report.violations);
                        return out;
                    }
                    Err(_) => continue,
                }
            }
            out.unresolved = true;
            out
        })
        .collect();
    merge_outcomes(cfg, claim2_pair().n(), outcomes, started)
}

/// Randomized dual-algorithm agreement sweep on holonomic curves: every
/// certified base point must get identical rotation numbers from the
/// ray-crossing and angle-accumulation algorithms, with angle residual
/// below `0.05` turns.
pub fn dual_agreement_sweep(cfg: &SweepConfig, points_per_curve: usize) -> VerificationReport {
    let started = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let tseed = child_seed(cfg.seed, 9, trial);
            let f_base = TrigPoly::random(child_seed(tseed, 4, 0), cfg.f_degree, cfg.amplitude);
            let mut out = TrialOutcome::default();
            for attempt in 0..MAX_ATTEMPTS {
                let f = attempt_function(
                    &f_base,
                    tseed,
                    attempt,
                    cfg.f_degree,
                    cfg.amplitude,
                    trial,
                    &mut out.perturbations,
                );
                let curve = match Curve::holonomic(&f) {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                let b = inflate(curve.bounding_box(), cfg.margin.max(1.5));
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(tseed, 8, attempt as u64));
                let mut accepted = 0usize;
                for _ in 0..points_per_curve * 4 {
                    if accepted == points_per_curve {
                        break;
                    }
                    let p =
                        Point::new(rng.random_range(b[0]..=b[2]), rng.random_range(b[1]..=b[3]));
                    let ray = match curve.rotation_number_ray_robust(p) {
                        Ok((r, _)) => r,
                        Err(_) => {
                            out.excluded += 1;
                            continue;
                        }
                    };
                    let (ang, residual) = match curve.rotation_number_angle(p) {
                        Ok(v) => v,
                        Err(_) => {
                            out.excluded += 1;
                            continue;
                        }
                    };
                    accepted += 1;
                    out.points += 1;
                    out.note_min(ray);
                    if ang != ray {
                        out.violations.push(Violation {
                            trial,
                            kind: "algorithm_mismatch".into(),
                            point: Some([p.x, p.y]),
                            value: (ray - ang) as f64,
                        });
                    }
                    if residual > 0.05 {
                        out.violations.push(Violation {
                            trial,
                            kind: "angle_residual".into(),
                            point: Some([p.x, p.y]),
                            value: residual,
                        });
                    }
                }
                return out;
            }
            out.unresolved = true;
            out
        })
        .collect();
    merge_outcomes(cfg, claim1_pair().n(), outcomes, started)
}

/// Randomized sweep of the deformation bookkeeping on instances with
/// `n ≥ 2`: event counts match the rotation-number drop, determinants are
/// positive, and the end curve agrees with the next recursion curve.
pub fn deformation_sweep(cfg: &SweepConfig, points_per_instance: usize) -> VerificationReport {
    assert!(cfg.n_max >= 2, "deformation sweep needs pairs with n ≥ 2");
    let started = Instant::now();
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let tseed = child_seed(cfg.seed, 11, trial);
            let mut shape_rng = ChaCha8Rng::seed_from_u64(child_seed(tseed, 2, 0));
            let n = shape_rng.random_range(2..=cfg.n_max);
            let pair = random_interlaced_pair(child_seed(tseed, 3, 0), n, 1.0);
            let f_base = TrigPoly::random(child_seed(tseed, 4, 0), cfg.f_degree, cfg.amplitude);
            let mut out = TrialOutcome::default();
            'attempts: for attempt in 0..MAX_ATTEMPTS {
                let f = attempt_function(
                    &f_base,
                    tseed,
                    attempt,
                    cfg.f_degree,
                    cfg.amplitude,
                    trial,
                    &mut out.perturbations,
                );
                let inst = match LoewnerInstance::build(pair.clone(), f) {
                    Ok(inst) => inst,
                    Err(_) => continue,
                };
                let g1 = match inst.deformed_end_curve() {
                    Ok(c) => c,
                    Err(_) => continue,
                };
                if inst.next_curve().is_err() {
                    continue;
                }
                let b0 = inst.curve().bounding_box();
                let b1 = g1.bounding_box();
                let b = inflate(
                    [
                        b0[0].min(b1[0]),
                        b0[1].min(b1[1]),
                        b0[2].max(b1[2]),
                        b0[3].max(b1[3]),
                    ],
                    cfg.margin,
                );
                let mut rng = ChaCha8Rng::seed_from_u64(child_seed(tseed, 12, attempt as u64));
                let mut accepted = 0usize;
                let mut attempt_out = TrialOutcome::default();
                for _ in 0..points_per_instance * 10 {
                    if accepted == points_per_instance {
                        break;
                    }
                    let p =
                        Point::new(rng.random_range(b[0]..=b[2]), rng.random_range(b[1]..=b[3]));
                    match verify_monotone_deformation(&inst, p) {
                        Ok(check) => {
                            accepted += 1;
                            attempt_out.points += 1;
                            attempt_out.note_min(check.r_start.min(check.r_end));
                            if check.perturbed {
                                attempt_out.perturbations.push(Perturbation {
                                    trial,
                                    context: "deformation-ray-level".into(),
                                    magnitude: LEVEL_PERTURBATION_FACTOR
                                        * inst.curve().vertical_extent(),
                                });
                            }
                            for (flag, kind, value) in [
                                (
                                    check.drop_matches,
                                    "deformation_drop",
                                    (check.r_start - check.r_end) as f64
                                        - check.events.len() as f64,
                                ),
                                (check.determinants_positive, "deformation_determinant", 0.0),
                                (
                                    check.linear_image_matches,
                                    "deformation_linear_image",
                                    (check.r_next_image - check.r_end) as f64,
                                ),
                                (
                                    check.monotone,
                                    "deformation_monotone",
                                    (check.r_start - check.r_end) as f64,
                                ),
                            ] {
                                if !flag {
                                    attempt_out.violations.push(Violation {
                                        trial,
                                        kind: kind.into(),
                                        point: Some([p.x, p.y]),
                                        value,
                                    });
                                }
                            }
                        }
                        Err(LoewnerError::Winding(WindingError::OnCurve { .. }))
                        | Err(LoewnerError::Winding(WindingError::DegenerateRay { .. }))
                        | Err(LoewnerError::TangentialEvent { .. }) => {
                            attempt_out.excluded += 1;
                        }
                        Err(_) => continue 'attempts,
                    }
                }
                if accepted == 0 {
                    continue;
                }
                out.points += attempt_out.points;
                out.excluded += attempt_out.excluded;
                out.crossings += attempt_out.crossings;
                if let Some(m) = attempt_out.min {
                    out.note_min(m);
                }
                out.violations.extend(attempt_out.violations);
                out.perturbations.extend(attempt_out.perturbations);
                return out;
            }
            out.unresolved = true;
            out
        })
        .collect();
    merge_outcomes(cfg, cfg.n_max, outcomes, started)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sin() -> TrigPoly {
        TrigPoly::harmonic(1, 0.0, 1.0)
    }

    fn small_cfg() -> SweepConfig {
        SweepConfig {
            seed: 42,
            trials: 6,
            n_max: 3,
            f_degree: 4,
            amplitude: 1.0,
            grid: (6, 6),
            margin: 1.2,
        }
    }

    #[test]
    fn claim1_instance_is_the_holonomic_curve() {
        let inst = LoewnerInstance::build(claim1_pair(), sin()).unwrap();
        assert_eq!(inst.c(), 0.0);
        assert!(inst.remainder().is_zero());
        assert_eq!(inst.p_of_f(), &sin().derivative());
        assert_eq!(inst.q_of_f(), &sin());
        assert_eq!(inst.curve().rotation_number_ray(Point::new(0.0, 0.0)).unwrap(), 1);
    }

    #[test]
    fn claim2_instance_applies_second_order_operator() {
        let inst = LoewnerInstance::build(claim2_pair(), sin()).unwrap();
        assert_eq!(inst.c(), 0.0);
        assert_eq!(inst.remainder().coeffs(), &[1.0]);
        assert_eq!(inst.p_of_f().coeffs(), &[(0.0, -2.0)]); // -2 sin t
        assert_eq!(inst.q_of_f(), &sin().derivative());
        assert_eq!(inst.r_of_f(), &sin());
    }

    #[test]
    fn constant_functions_are_degenerate() {
        assert!(matches!(
            LoewnerInstance::build(claim1_pair(), TrigPoly::constant(1.0)),
            Err(LoewnerError::DegenerateInstance { .. })
        ));
    }

    #[test]
    fn next_curve_fails_at_the_recursion_base() {
        let inst = LoewnerInstance::build(claim1_pair(), sin()).unwrap();
        assert!(inst.next_curve().is_err()); // r = 0 for n = 1
    }

    #[test]
    fn deformation_events_on_the_ellipse() {
        let inst = LoewnerInstance::build(claim2_pair(), sin()).unwrap();
        // Near the center no event is swept.
        let none = deformation_events(&inst, Point::new(0.1, 0.2)).unwrap();
        assert!(none.is_empty());
        // Between the ellipse (-2 sin, cos) and the circle (-sin, cos)
        // exactly one event passes.
        let one = deformation_events(&inst, Point::new(1.5, 0.2)).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].s > 0.0 && one[0].s < 1.0);
        assert!((one[0].s - 0.4691).abs() < 1e-3);
        assert!(one[0].determinant > 0.0);
        assert_eq!(one[0].delta_r, -1);
    }

    #[test]
    fn monotone_deformation_on_claim2_instance() {
        let inst = LoewnerInstance::build(claim2_pair(), sin()).unwrap();
        let check = verify_monotone_deformation(&inst, Point::new(1.5, 0.2)).unwrap();
        assert_eq!(check.r_start, 1);
        assert_eq!(check.r_end, 0);
        assert_eq!(check.events.len(), 1);
        assert!(check.all_hold());

        let inner = verify_monotone_deformation(&inst, Point::new(0.1, 0.2)).unwrap();
        assert_eq!(inner.r_start, 1);
        assert_eq!(inner.r_end, 1);
        assert!(inner.events.is_empty());
        assert!(inner.all_hold());
    }

    #[test]
    fn deformation_needs_two_roots() {
        let inst = LoewnerInstance::build(claim1_pair(), sin()).unwrap();
        assert!(matches!(
            verify_monotone_deformation(&inst, Point::new(0.0, 0.0)),
            Err(LoewnerError::Poly(PolyError::PairTooSmall { n: 1 }))
        ));
    }

    #[test]
    fn claim1_on_the_unit_circle() {
        let points = [Point::new(0.0, 0.3), Point::new(2.0, 0.3), Point::new(-2.5, -0.4)];
        let check = verify_claim1(&sin(), &points).unwrap();
        assert_eq!(check.rotations, vec![Some(1), Some(0), Some(0)]);
        assert_eq!(check.min_rotation, Some(0));
        assert!(check.violations.is_empty());
        assert!(check.crossings_certified >= 4);
    }

    #[test]
    fn bol_pairing_on_the_sine_wave() {
        let report = verify_bol_pairing(&sin(), Point::new(-3.0, -0.5)).unwrap();
        assert!(!report.mirrored);
        assert_eq!(report.ray_crossings, 2);
        assert_eq!(report.pairings.len(), 1);
        assert!(report.violations.is_empty());
        let p = report.pairings[0];
        assert!((p.t_bad - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-9);
        assert!((p.t_fix - 4.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-9);
        assert!((p.x_bad + 3.0f64.sqrt()).abs() < 1e-9);
        assert!((p.x_fix - 3.0f64.sqrt()).abs() < 1e-9);
        assert!(p.margin > 3.0);
    }

    #[test]
    fn bol_pairing_mirrors_above_the_axis() {
        let report = verify_bol_pairing(&sin(), Point::new(3.0, 0.5)).unwrap();
        assert!(report.mirrored);
        assert_eq!(report.pairings.len(), 1);
        assert!(report.violations.is_empty());
        let p = report.pairings[0];
        assert!(p.wrapped);
        assert!(p.x_fix < p.x_bad);
        assert!(p.margin > 3.0);
    }

    #[test]
    fn recursion_chain_of_the_cubic_pair() {
        let pair = InterlacedPair::new(vec![-1.0, 0.0, 1.0], vec![-0.5, 0.5]).unwrap();
        let chain = recursion_chain(&pair).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[0].c, 0.0);
        assert_eq!(chain[0].scale, 0.75);
        assert_eq!(chain[0].pair.a_roots(), &[-0.5, 0.5]);
        assert_eq!(chain[1].scale, 0.25);
        assert_eq!(chain[1].pair.n(), 1);
    }

    #[test]
    fn theorem_sweep_runs_clean_on_a_small_config() {
        let report = verify_theorem(&small_cfg());
        assert_eq!(report.trials, 6);
        assert!(report.points_tested > 0);
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.unresolved_trials.is_empty());
        assert!(report.min_rotation >= 0);
    }

    #[test]
    fn sweeps_are_deterministic() {
        let a = verify_theorem(&small_cfg());
        let b = verify_theorem(&small_cfg());
        assert_eq!(a.points_tested, b.points_tested);
        assert_eq!(a.min_rotation, b.min_rotation);
        assert_eq!(a.violations, b.violations);
        assert_eq!(a.perturbations, b.perturbations);
    }

    #[test]
    fn claim_sweeps_certify_directions() {
        let cfg = SweepConfig { trials: 4, ..small_cfg() };
        let report = fixed_pair_sweep(&claim1_pair(), &cfg, true);
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.crossings_certified > 0);
        assert_eq!(report.n, 1);
    }

    #[test]
    fn bol_sweep_runs_clean() {
        let cfg = SweepConfig { trials: 8, ..small_cfg() };
        let report = bol_sweep(&cfg);
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.points_tested >= 7);
    }

    #[test]
    fn dual_sweep_agrees() {
        let cfg = SweepConfig { trials: 4, ..small_cfg() };
        let report = dual_agreement_sweep(&cfg, 12);
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.points_tested >= 40);
    }

    #[test]
    fn deformation_sweep_runs_clean() {
        let cfg = SweepConfig { trials: 4, n_max: 3, ..small_cfg() };
        let report = deformation_sweep(&cfg, 4);
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.points_tested > 0);
    }

    #[test]
    fn report_serde_round_trips() {
        let report = verify_theorem(&SweepConfig { trials: 2, ..small_cfg() });
        let json = serde_json::to_string(&report).unwrap();
        let back: VerificationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert!(json.starts_with("{\"seed\":42,"));
    }
}
