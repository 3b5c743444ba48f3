//! Closed plane curves from pairs of trigonometric polynomials: certified
//! point–curve distances, transversal line crossings, rotation numbers by
//! two independent algorithms, and region maps over grids of base points.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::trigpoly::{Extremum, RootKind, TrigPoly, TrigPolyError};

/// Cached samples per curve; distance screening and bounding boxes come
/// from these.
pub const SAMPLE_COUNT: usize = 4096;

/// Points closer to the curve than this factor times its diameter are
/// rejected: rotation numbers are only certified outside the tube.
pub const OFF_CURVE_FACTOR: f64 = 1e-6;

/// Magnitude of the level perturbation (relative to the vertical extent)
/// used when a ray level collides with a critical value. One order below
/// [`OFF_CURVE_FACTOR`] so both perturbed levels stay inside the exclusion
/// tube and therefore carry the same rotation number as the original point.
pub const LEVEL_PERTURBATION_FACTOR: f64 = 1e-7;

/// Minimum certified speed, relative to the speed bound, below which a
/// curve is rejected as not immersed.
pub const IMMERSION_FACTOR: f64 = 1e-6;

/// Grid cells whose rotation number could not be certified carry this
/// value in a [`RegionMap`].
pub const REGION_SENTINEL: i64 = -9999;

/// Tolerance factor for the vertical-axis crossing certificate.
pub const AXIS_DEFECT_FACTOR: f64 = 1e-8;

/// Hard cap on adaptive subdivisions in the angle-accumulation algorithm.
const MAX_ANGLE_INTERVALS: usize = 1 << 21;

/// A base point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }
}

/// Errors from curve construction and rotation-number queries.
#[derive(Debug, Clone, PartialEq)]
pub enum WindingError {
    /// The base point lies inside the exclusion tube around the curve.
    OnCurve { x: f64, y: f64 },
    /// The horizontal line through the base point passes too close to a
    /// critical value of the height component, so crossings there cannot
    /// be certified transversal.
    DegenerateRay { level: f64, gap: f64 },
    /// Adaptive angle accumulation hit its subdivision cap.
    NonConvergent { intervals: usize },
    /// The parametrization has a certified speed minimum too close to
    /// zero; tangent directions are meaningless there.
    NotImmersed { min_speed: f64 },
}

impl fmt::Display for WindingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindingError::OnCurve { x, y } => {
                write!(f, "point ({x}, {y}) lies within the exclusion tube of the curve")
            }
            WindingError::DegenerateRay { level, gap } => write!(
                f,
                "level {level} passes within {gap:.3e} of a critical value of the height component"
            ),
            WindingError::NonConvergent { intervals } => {
                write!(f, "angle accumulation exceeded {intervals} subdivisions")
            }
            WindingError::NotImmersed { min_speed } => {
                write!(f, "curve is not certifiably immersed (minimum speed {min_speed:.3e})")
            }
        }
    }
}

impl std::error::Error for WindingError {}

fn map_level_error(err: TrigPolyError, level: f64) -> WindingError {
    match err {
        TrigPolyError::DegenerateLevel { level, gap } => WindingError::DegenerateRay { level, gap },
        // A constant height component cannot belong to an immersed closed
        // curve, and non-finite coefficients are rejected at construction;
        // treat both defensively as a degenerate ray.
        _ => WindingError::DegenerateRay { level, gap: 0.0 },
    }
}

/// Horizontal ray direction for signed crossing counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RayDirection {
    Right,
    Left,
}

/// Crossing direction of the curve through a horizontal line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    Up,
    Down,
}

/// A transversal crossing of the curve through a horizontal line:
/// parameter, horizontal position, and direction of passage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    pub t: f64,
    pub x_pos: f64,
    pub direction: Direction,
}

/// A closed plane curve `t ↦ (x(t), y(t))` certified to be an immersion.
///
/// Construction caches uniform samples, a speed bound, the exact minimum
/// speed (via the critical points of the speed), the critical values of
/// the height component, and the harmonic expansion of `x x' + y y'` used
/// by exact distance queries.
#[derive(Debug, Clone)]
pub struct Curve {
    x: TrigPoly,
    y: TrigPoly,
    dx: TrigPoly,
    dy: TrigPoly,
    xy_dot: TrigPoly,
    samples: Vec<(f64, f64, f64)>,
    speed_bound: f64,
    min_speed: f64,
    y_critical: Vec<f64>,
    bbox: [f64; 4],
    diameter: f64,
}

impl Curve {
    /// Validates that `(x, y)` parametrizes an immersed closed curve and
    /// precomputes the caches.
    pub fn new(x: TrigPoly, y: TrigPoly) -> Result<Curve, WindingError> {
        let dx = x.derivative();
        let dy = y.derivative();
        let speed_bound = dx.coefficient_norm().hypot(dy.coefficient_norm());
        let min_speed = pair_min_norm(&dx, &dy);
        if min_speed <= IMMERSION_FACTOR * (1.0 + speed_bound) {
            return Err(WindingError::NotImmersed { min_speed });
        }

        let mut samples = Vec::with_capacity(SAMPLE_COUNT);
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for i in 0..SAMPLE_COUNT {
            let t = TAU * i as f64 / SAMPLE_COUNT as f64;
            let px = x.evaluate(t);
            let py = y.evaluate(t);
            bbox[0] = bbox[0].min(px);
            bbox[1] = bbox[1].min(py);
            bbox[2] = bbox[2].max(px);
            bbox[3] = bbox[3].max(py);
            samples.push((t, px, py));
        }
        let diameter = (bbox[2] - bbox[0]).hypot(bbox[3] - bbox[1]);
        let xy_dot = &x.mul(&dx) + &y.mul(&dy);
        let y_critical = y.critical_values();
        Ok(Curve { x, y, dx, dy, xy_dot, samples, speed_bound, min_speed, y_critical, bbox, diameter })
    }

    /// The curve `(f', f)` swept by a function and its derivative.
    pub fn holonomic(f: &TrigPoly) -> Result<Curve, WindingError> {
        Curve::new(f.derivative(), f.clone())
    }

    pub fn x_component(&self) -> &TrigPoly {
        &self.x
    }

    pub fn y_component(&self) -> &TrigPoly {
        &self.y
    }

    pub fn point_at(&self, t: f64) -> (f64, f64) {
        (self.x.evaluate(t), self.y.evaluate(t))
    }

    /// Sampled bounding box `[x0, y0, x1, y1]`.
    pub fn bounding_box(&self) -> [f64; 4] {
        self.bbox
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn vertical_extent(&self) -> f64 {
        self.bbox[3] - self.bbox[1]
    }

    /// Exact minimum of `|γ'(t)|`, computed at construction.
    pub fn min_speed(&self) -> f64 {
        self.min_speed
    }

    /// Radius of the exclusion tube around the curve.
    pub fn off_curve_tolerance(&self) -> f64 {
        OFF_CURVE_FACTOR * self.diameter
    }

    /// Exact distance from a point to the curve: the global minimum of
    /// `|γ(t) - p|` sits at a critical point of the squared distance, and
    /// those are the roots of the trigonometric polynomial
    /// `(γ(t) - p)·γ'(t)`, isolated directly.
    pub fn min_distance(&self, p: Point) -> f64 {
        let phi = &(&self.xy_dot - &self.dx.scale(p.x)) - &self.dy.scale(p.y);
        let dist_at = |t: f64| (self.x.evaluate(t) - p.x).hypot(self.y.evaluate(t) - p.y);
        if phi.degree() == 0 {
            // The squared distance has a (numerically) vanishing derivative
            // everywhere: constant distance, e.g. the center of a circle.
            return dist_at(0.0);
        }
        let roots = phi.isolate_roots(0.0);
        if roots.is_empty() {
            // Periodicity guarantees critical points; if cancellation hid
            // them all, fall back to the sampled minimum.
            return self
                .samples
                .iter()
                .map(|&(_, sx, sy)| (sx - p.x).hypot(sy - p.y))
                .min_by(f64::total_cmp)
                .unwrap();
        }
        roots.into_iter().map(dist_at).min_by(f64::total_cmp).unwrap()
    }

    /// Certified test that the point is strictly farther than `dist` from
    /// every curve point. Screens against the cached samples with a speed
    /// bound, then refines only the parameter intervals that could dip
    /// below `dist`. Ties at floating-point resolution count as "not
    /// farther", the conservative answer for exclusion tubes.
    pub fn is_farther_than(&self, p: Point, dist: f64) -> bool {
        let step = TAU / SAMPLE_COUNT as f64;
        let slack = 0.5 * self.speed_bound * step;
        // Cheap bounding-box rejection: the true curve stays within the
        // sampled box inflated by the sample slack.
        let clear = dist + slack;
        if p.x < self.bbox[0] - clear
            || p.x > self.bbox[2] + clear
            || p.y < self.bbox[1] - clear
            || p.y > self.bbox[3] + clear
        {
            return true;
        }

        let mut suspicious: Vec<(f64, f64, f64, f64)> = Vec::new();
        let mut min_d = f64::INFINITY;
        for i in 0..SAMPLE_COUNT {
            let (t0, x0, y0) = self.samples[i];
            let d0 = (x0 - p.x).hypot(y0 - p.y);
            if d0 <= dist {
                return false;
            }
            min_d = min_d.min(d0);
            let (x1, y1) = if i + 1 == SAMPLE_COUNT {
                (self.samples[0].1, self.samples[0].2)
            } else {
                (self.samples[i + 1].1, self.samples[i + 1].2)
            };
            let d1 = (x1 - p.x).hypot(y1 - p.y);
            if d0.min(d1) - slack <= dist {
                suspicious.push((t0, t0 + step, d0, d1));
            }
        }
        if min_d - slack > dist {
            return true;
        }

        let mut stack = suspicious;
        while let Some((t0, t1, d0, d1)) = stack.pop() {
            let w = t1 - t0;
            if d0.min(d1) - 0.5 * self.speed_bound * w > dist {
                continue;
            }
            if w < 1e-12 {
                return false; // unresolvable at floating-point resolution
            }
            let tm = 0.5 * (t0 + t1);
            let dm = (self.x.evaluate(tm) - p.x).hypot(self.y.evaluate(tm) - p.y);
            if dm <= dist {
                return false;
            }
            stack.push((t0, tm, d0, dm));
            stack.push((tm, t1, dm, d1));
        }
        true
    }

    fn ensure_off_curve(&self, p: Point) -> Result<(), WindingError> {
        if self.is_farther_than(p, self.off_curve_tolerance()) {
            Ok(())
        } else {
            Err(WindingError::OnCurve { x: p.x, y: p.y })
        }
    }

    /// All transversal crossings of the horizontal line `y = level`,
    /// ordered by parameter.
    pub fn crossings_with_line(&self, level: f64) -> Result<Vec<CrossingEvent>, WindingError> {
        let roots = self
            .y
            .roots_on_level_given_critical(level, &self.y_critical)
            .map_err(|e| map_level_error(e, level))?;
        Ok(roots
            .into_iter()
            .map(|root| {
                let rising = matches!(root.kind, RootKind::Transversal { rising: true });
                CrossingEvent {
                    t: root.t,
                    x_pos: self.x.evaluate(root.t),
                    direction: if rising { Direction::Up } else { Direction::Down },
                }
            })
            .collect())
    }

    /// Signed count of curve crossings of the horizontal ray from `p`:
    /// on the rightward ray upward crossings count `+1` and downward
    /// crossings `-1`; on the leftward ray the signs flip. Both give the
    /// rotation number of the curve about `p`.
    pub fn rotation_number_ray_directed(
        &self,
        p: Point,
        dir: RayDirection,
    ) -> Result<i64, WindingError> {
        self.ensure_off_curve(p)?;
        self.ray_sum(p, dir)
    }

    fn ray_sum(&self, p: Point, dir: RayDirection) -> Result<i64, WindingError> {
        let events = self.crossings_with_line(p.y)?;
        let mut sum = 0i64;
        for e in &events {
            let counted = match dir {
                RayDirection::Right => e.x_pos > p.x,
                RayDirection::Left => e.x_pos < p.x,
            };
            if counted {
                let up = e.direction == Direction::Up;
                sum += if up == (dir == RayDirection::Right) { 1 } else { -1 };
            }
        }
        Ok(sum)
    }

    /// Rotation number about `p` by the ray-crossing algorithm (rightward
    /// ray).
    pub fn rotation_number_ray(&self, p: Point) -> Result<i64, WindingError> {
        self.rotation_number_ray_directed(p, RayDirection::Right)
    }

    /// Ray-crossing rotation number with the degenerate-level fallback:
    /// when the line through `p` grazes a critical value, both levels
    /// `p.y ± ε` are tried (ε = [`LEVEL_PERTURBATION_FACTOR`] × vertical
    /// extent, well inside the exclusion tube) and must agree. Returns the
    /// perturbation magnitude actually used, if any.
    pub fn rotation_number_ray_robust(
        &self,
        p: Point,
    ) -> Result<(i64, Option<f64>), WindingError> {
        self.ensure_off_curve(p)?;
        match self.ray_sum(p, RayDirection::Right) {
            Ok(v) => Ok((v, None)),
            Err(WindingError::DegenerateRay { level, gap }) => {
                let eps = LEVEL_PERTURBATION_FACTOR * self.vertical_extent();
                let hi = self.ray_sum(Point::new(p.x, p.y + eps), RayDirection::Right);
                let lo = self.ray_sum(Point::new(p.x, p.y - eps), RayDirection::Right);
                match (hi, lo) {
                    (Ok(a), Ok(b)) if a == b => Ok((a, Some(eps))),
                    _ => Err(WindingError::DegenerateRay { level, gap }),
                }
            }
            Err(e) => Err(e),
        }
    }

    /// Rotation number about `p` by adaptive angle accumulation, together
    /// with the residual `|raw - rounded|` of the total angle in turns.
    /// Fully independent of the ray-crossing path: no root isolation, no
    /// crossing classification.
    pub fn rotation_number_angle(&self, p: Point) -> Result<(i64, f64), WindingError> {
        self.ensure_off_curve(p)?;
        angle_winding(&self.x, &self.y, p)
    }

    /// Winding number of the tangent `(x'(t), y'(t))` about the origin
    /// (the Whitney index of the immersion).
    pub fn whitney_winding(&self) -> Result<i64, WindingError> {
        if self.min_speed <= OFF_CURVE_FACTOR * (1.0 + self.speed_bound) {
            return Err(WindingError::OnCurve { x: 0.0, y: 0.0 });
        }
        angle_winding(&self.dx, &self.dy, Point::new(0.0, 0.0)).map(|(w, _)| w)
    }

    /// Certificate that the curve meets the vertical axis exactly at the
    /// critical points of its height component, horizontally, and oriented
    /// rightward at minima and leftward at maxima. The premise is the
    /// holonomic relation `x = y'`, which is also re-checked pointwise.
    pub fn orthogonal_axis_crossings(&self) -> Result<AxisReport, WindingError> {
        let crits = self
            .y
            .critical_points()
            .map_err(|e| map_level_error(e, 0.0))?;
        let x_tol = AXIS_DEFECT_FACTOR * (1.0 + self.x.coefficient_norm());
        let dy_tol = AXIS_DEFECT_FACTOR * (1.0 + self.dy.coefficient_norm());
        let mut crossings = Vec::with_capacity(crits.len());
        for c in crits {
            let tangent = (self.dx.evaluate(c.t), self.dy.evaluate(c.t));
            let axis_defect = self.x.evaluate(c.t).abs();
            let horizontal_defect = tangent.1.abs();
            let oriented_correctly = match c.extremum {
                Extremum::Minimum => tangent.0 > 0.0,
                Extremum::Maximum => tangent.0 < 0.0,
            };
            let pass =
                axis_defect <= x_tol && horizontal_defect <= dy_tol && oriented_correctly;
            crossings.push(AxisCrossing {
                t: c.t,
                extremum: c.extremum,
                tangent,
                axis_defect,
                horizontal_defect,
                oriented_correctly,
                pass,
            });
        }
        let all_pass = crossings.iter().all(|c| c.pass);
        Ok(AxisReport { crossings, all_pass })
    }

    /// Ray crossings condensed for grid rows: horizontal positions with
    /// their rightward-count signs.
    fn signed_crossings(&self, level: f64) -> Result<Vec<(f64, i64)>, WindingError> {
        Ok(self
            .crossings_with_line(level)?
            .into_iter()
            .map(|e| (e.x_pos, if e.direction == Direction::Up { 1 } else { -1 }))
            .collect())
    }

    fn grid_row(&self, level: f64, xs: &[f64]) -> RowCells {
        let count = |list: &[(f64, i64)], px: f64| -> i64 {
            list.iter().filter(|&&(x, _)| x > px).map(|&(_, s)| s).sum()
        };
        let mut cells = RowCells {
            values: Vec::with_capacity(xs.len()),
            excluded: 0,
            unresolved: 0,
            perturbed: false,
        };
        let tol = self.off_curve_tolerance();
        match self.signed_crossings(level) {
            Ok(list) => {
                for &px in xs {
                    if self.is_farther_than(Point::new(px, level), tol) {
                        cells.values.push(Some(count(&list, px)));
                    } else {
                        cells.excluded += 1;
                        cells.values.push(None);
                    }
                }
            }
            Err(_) => {
                let eps = LEVEL_PERTURBATION_FACTOR * self.vertical_extent();
                let hi = self.signed_crossings(level + eps);
                let lo = self.signed_crossings(level - eps);
                match (hi, lo) {
                    (Ok(hi), Ok(lo)) => {
                        cells.perturbed = true;
                        for &px in xs {
                            if !self.is_farther_than(Point::new(px, level), tol) {
                                cells.excluded += 1;
                                cells.values.push(None);
                            } else {
                                let a = count(&hi, px);
                                let b = count(&lo, px);
                                if a == b {
                                    cells.values.push(Some(a));
                                } else {
                                    cells.unresolved += 1;
                                    cells.values.push(None);
                                }
                            }
                        }
                    }
                    _ => {
                        cells.unresolved = xs.len();
                        cells.values = vec![None; xs.len()];
                    }
                }
            }
        }
        cells
    }
}

struct RowCells {
    values: Vec<Option<i64>>,
    excluded: usize,
    unresolved: usize,
    perturbed: bool,
}

/// Outcome of a rotation-number sweep over a grid of base points.
#[derive(Debug, Clone)]
pub struct GridOutcome {
    /// Row-major values, `None` where the point was excluded (inside the
    /// tube) or the level could not be resolved.
    pub values: Vec<Option<i64>>,
    pub excluded: usize,
    pub unresolved: usize,
    /// Rows whose level collided with a critical value and were resolved
    /// by the two-sided perturbation.
    pub perturbed_rows: Vec<usize>,
}

/// Computes rotation numbers on an `nx × ny` grid over `bounds =
/// [x0, y0, x1, y1]` (row-major from the bottom row up). Whole rows share
/// one crossing computation; degenerate levels fall back to the two-sided
/// perturbation per row.
pub fn grid_rotation_numbers(
    curve: &Curve,
    bounds: [f64; 4],
    nx: usize,
    ny: usize,
) -> GridOutcome {
    assert!(nx >= 2 && ny >= 2, "grid needs at least 2×2 nodes");
    let xs: Vec<f64> = (0..nx)
        .map(|i| bounds[0] + (bounds[2] - bounds[0]) * i as f64 / (nx - 1) as f64)
        .collect();
    let mut out = GridOutcome {
        values: Vec::with_capacity(nx * ny),
        excluded: 0,
        unresolved: 0,
        perturbed_rows: Vec::new(),
    };
    for iy in 0..ny {
        let level = bounds[1] + (bounds[3] - bounds[1]) * iy as f64 / (ny - 1) as f64;
        let row = curve.grid_row(level, &xs);
        out.values.extend(row.values);
        out.excluded += row.excluded;
        out.unresolved += row.unresolved;
        if row.perturbed {
            out.perturbed_rows.push(iy);
        }
    }
    out
}

/// A rotation-number map over a rectangular grid, with failed cells
/// marked by `sentinel`. Values are row-major from the bottom row up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub bounds: [f64; 4],
    pub nx: usize,
    pub ny: usize,
    pub values: Vec<i64>,
    pub sentinel: i64,
}

/// Renders the grid sweep into a [`RegionMap`], collapsing excluded and
/// unresolved cells into the sentinel.
pub fn region_map(curve: &Curve, bounds: [f64; 4], nx: usize, ny: usize) -> RegionMap {
    let grid = grid_rotation_numbers(curve, bounds, nx, ny);
    RegionMap {
        bounds,
        nx,
        ny,
        values: grid.values.into_iter().map(|v| v.unwrap_or(REGION_SENTINEL)).collect(),
        sentinel: REGION_SENTINEL,
    }
}

/// One vertical-axis crossing certificate entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisCrossing {
    pub t: f64,
    pub extremum: Extremum,
    pub tangent: (f64, f64),
    pub axis_defect: f64,
    pub horizontal_defect: f64,
    pub oriented_correctly: bool,
    pub pass: bool,
}

/// Certificate that vertical-axis crossings happen exactly at extrema of
/// the height component with the predicted orientation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisReport {
    pub crossings: Vec<AxisCrossing>,
    pub all_pass: bool,
}

/// Winding number of `t ↦ (x(t) - p.x, y(t) - p.y)` about the origin by
/// adaptive angle accumulation: each chord must subtend an angle below
/// `π/2` as seen from the base point, splitting until that holds, then the
/// summed angles are rounded to whole turns.
pub fn angle_winding(x: &TrigPoly, y: &TrigPoly, p: Point) -> Result<(i64, f64), WindingError> {
    let m0 = 32 * x.degree().max(y.degree()).max(1);
    let vec_at = |t: f64| (x.evaluate(t) - p.x, y.evaluate(t) - p.y);
    // Stack of segments, pushed so traversal pops them in ascending t;
    // the accumulation order is fixed and therefore reproducible.
    let mut stack: Vec<(f64, f64, (f64, f64), (f64, f64))> = Vec::with_capacity(m0 + 32);
    let endpoints: Vec<(f64, (f64, f64))> =
        (0..=m0).map(|i| (TAU * i as f64 / m0 as f64, vec_at(TAU * i as f64 / m0 as f64))).collect();
    for i in (0..m0).rev() {
        let (t0, v0) = endpoints[i];
        let (t1, v1) = endpoints[i + 1];
        stack.push((t0, t1, v0, v1));
    }
    let mut total = 0.0f64;
    let mut splits = 0usize;
    while let Some((t0, t1, v0, v1)) = stack.pop() {
        let cross = v0.0 * v1.1 - v0.1 * v1.0;
        let dot = v0.0 * v1.0 + v0.1 * v1.1;
        let ang = cross.atan2(dot);
        if ang.abs() < std::f64::consts::FRAC_PI_2 && dot > 0.0 {
            total += ang;
        } else {
            splits += 1;
            if splits > MAX_ANGLE_INTERVALS {
                return Err(WindingError::NonConvergent { intervals: MAX_ANGLE_INTERVALS });
            }
            let tm = 0.5 * (t0 + t1);
            let vm = vec_at(tm);
            stack.push((tm, t1, vm, v1));
            stack.push((t0, tm, v0, vm));
        }
    }
    let raw = total / TAU;
    let rounded = raw.round();
    Ok((rounded as i64, (raw - rounded).abs()))
}

/// Exact minimum of `|(x(t), y(t))|` over the period: the squared norm has
/// its critical points at roots of `x x' + y y'`, which is again a
/// trigonometric polynomial. Falls back to a dense scan if isolation finds
/// nothing (constant norm).
fn pair_min_norm(x: &TrigPoly, y: &TrigPoly) -> f64 {
    let phi = &x.mul(&x.derivative()) + &y.mul(&y.derivative());
    let norm_at = |t: f64| x.evaluate(t).hypot(y.evaluate(t));
    if phi.degree() == 0 {
        return norm_at(0.0);
    }
    let roots = phi.isolate_roots(0.0);
    if roots.is_empty() {
        return (0..SAMPLE_COUNT)
            .map(|i| norm_at(TAU * i as f64 / SAMPLE_COUNT as f64))
            .min_by(f64::total_cmp)
            .unwrap();
    }
    roots.into_iter().map(norm_at).min_by(f64::total_cmp).unwrap()
}
