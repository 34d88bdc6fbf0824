//! Convex linearly constrained domains and ray/constraint computations.
//!
//! A [`Polytope`] is the set `{x : A·x <= b}`. The proposal mechanisms only
//! ever need two geometric queries: membership up to a tolerance and the
//! largest feasible step along a ray ([`Polytope::max_forward_step`]).
//! The two parametrized benchmark families, [`make_cone`] and
//! [`make_diamond`], are built here as well.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default absolute feasibility tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Rows with `|a_i . v|` below this are treated as parallel to the ray and
/// skipped when computing chord intersections, preventing spurious
/// infinities from division noise.
const RAY_PARALLEL_EPS: f64 = 1e-30;

/// Linear-inequality domain `{x in R^d : A x <= b}`.
///
/// Invariants enforced at construction: all entries finite, `m >= 1`,
/// `d >= 1`, and no all-zero row in `A` (such a row is either vacuous or
/// infeasible and almost certainly a caller bug).
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    a: DMatrix<f64>,
    b: DVector<f64>,
}

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

impl Polytope {
    /// Build from a constraint matrix and offset vector.
    pub fn new(a: DMatrix<f64>, b: DVector<f64>) -> Result<Self> {
        if a.nrows() == 0 || a.ncols() == 0 {
            return Err(Error::InvalidArgument(
                "polytope needs m >= 1 constraints and d >= 1 dimensions".into(),
            ));
        }
        if a.nrows() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                got: b.len(),
            });
        }
        if a.iter().any(|v| !v.is_finite()) || b.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite constraint entry".into()));
        }
        for i in 0..a.nrows() {
            if a.row(i).iter().all(|&v| v == 0.0) {
                return Err(Error::InvalidArgument(format!("all-zero constraint row {i}")));
            }
        }
        Ok(Self { a, b })
    }

    /// Axis-aligned box `lo <= x_i <= hi` in `d` dimensions.
    pub fn bounding_box(d: usize, lo: f64, hi: f64) -> Result<Self> {
        if hi <= lo {
            return Err(Error::InvalidArgument("box needs hi > lo".into()));
        }
        let mut a = DMatrix::zeros(2 * d, d);
        let mut b = DVector::zeros(2 * d);
        for i in 0..d {
            a[(i, i)] = 1.0;
            b[i] = hi;
            a[(d + i, i)] = -1.0;
            b[d + i] = -lo;
        }
        Self::new(a, b)
    }

    pub fn dim(&self) -> usize {
        self.a.ncols()
    }

    pub fn n_constraints(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    /// Slack vector `b - A x`. Nonnegative entries mean the constraint holds.
    pub fn slacks(&self, x: &DVector<f64>) -> DVector<f64> {
        assert_eq!(x.len(), self.dim(), "point dimension mismatch");
        &self.b - &self.a * x
    }

    /// Membership test: `a_i . x <= b_i + tol` for all rows.
    ///
    /// Panics if `x` has the wrong dimension.
    pub fn contains(&self, x: &DVector<f64>, tol: f64) -> bool {
        self.slacks(x).iter().all(|&s| s >= -tol)
    }

    /// Largest step `s` such that `x + s v` stays feasible, per the chord
    /// intersection `s_i = (b_i - a_i.x) / (a_i.v)` over rows with
    /// `a_i.v > 0`. Returns `f64::INFINITY` when no constraint lies ahead.
    ///
    /// Rows nearly parallel to the ray (`|a_i.v| < 1e-30`) are skipped.
    /// Slacks within the feasibility tolerance of zero are clamped so the
    /// result is never negative for a feasible `x`.
    pub fn max_forward_step(&self, x: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
        assert_eq!(v.len(), self.dim(), "direction dimension mismatch");
        if v.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidArgument("zero direction".into()));
        }
        let slacks = self.slacks(x);
        let speeds = &self.a * v;
        let mut smax = f64::INFINITY;
        for i in 0..self.n_constraints() {
            let slack = slacks[i];
            if slack < -DEFAULT_TOL {
                return Err(Error::Infeasible {
                    index: i,
                    violation: -slack,
                });
            }
            let speed = speeds[i];
            if speed.abs() < RAY_PARALLEL_EPS || speed < 0.0 {
                continue;
            }
            let s = slack.max(0.0) / speed;
            if s < smax {
                smax = s;
            }
        }
        Ok(smax)
    }
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.a.nrows())
            .map(|i| self.a.row(i).iter().copied().collect())
            .collect();
        PolytopeJson {
            a: rows,
            b: self.b.iter().copied().collect(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(de)?;
        let m = raw.a.len();
        let d = raw.a.first().map_or(0, Vec::len);
        if raw.a.iter().any(|r| r.len() != d) {
            return Err(serde::de::Error::custom("ragged constraint matrix"));
        }
        let a = DMatrix::from_fn(m, d, |i, j| raw.a[i][j]);
        let b = DVector::from_vec(raw.b);
        Polytope::new(a, b).map_err(serde::de::Error::custom)
    }
}

/// The formula angle used by the cone/diamond constructions.
///
/// The tilted-face inequalities with a raw angle below 45 degrees collapse
/// the feasible set to the origin (`x_i <= tan(t) x_j` in both orders forces
/// `x_i <= tan(t)^2 x_i`), so the opening angle is remapped into (45, 90]
/// degrees. At 90 degrees the shapes degenerate to the simplex / unit box.
pub fn formula_angle_deg(theta_open_deg: f64) -> f64 {
    (90.0 + theta_open_deg) / 2.0
}

/// sin/cos of an angle in degrees, with the 90-degree case exact so the
/// degenerate simplex/box constructions come out bit-exact.
fn sin_cos_deg(deg: f64) -> (f64, f64) {
    if deg == 90.0 {
        (1.0, 0.0)
    } else {
        deg.to_radians().sin_cos()
    }
}

fn check_angle(theta_open_deg: f64) -> Result<()> {
    if !(theta_open_deg > 0.0 && theta_open_deg <= 90.0) {
        return Err(Error::InvalidArgument(format!(
            "opening angle {theta_open_deg} outside (0, 90] degrees"
        )));
    }
    Ok(())
}

/// Drop bit-exact duplicate rows. The tilted-face families collapse to
/// repeated axis constraints at 90 degrees; deduplication makes those
/// degenerate shapes equal the simplex / unit box row-for-row.
fn dedup_rows(rows: Vec<(Vec<f64>, f64)>) -> Vec<(Vec<f64>, f64)> {
    let mut out: Vec<(Vec<f64>, f64)> = Vec::with_capacity(rows.len());
    for r in rows {
        if !out.iter().any(|q| q.0 == r.0 && q.1 == r.1) {
            out.push(r);
        }
    }
    out
}

fn from_rows(rows: Vec<(Vec<f64>, f64)>, d: usize) -> Result<Polytope> {
    let m = rows.len();
    let a = DMatrix::from_fn(m, d, |i, j| rows[i].0[j]);
    let b = DVector::from_fn(m, |i, _| rows[i].1);
    Polytope::new(a, b)
}

/// Simplex with tilted sides: for all ordered pairs `i != j`
/// `cos(t) x_i - sin(t) x_j <= 0`, capped by `sum x_i <= cot(t) + 1`,
/// where `t` is the remapped [`formula_angle_deg`]. Bounded, nonempty
/// interior, contained in the unit box; the extreme rays hit coordinate
/// value exactly 1 on the cap.
pub fn make_cone(d: usize, theta_open_deg: f64) -> Result<Polytope> {
    check_angle(theta_open_deg)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let (sin_t, cos_t) = sin_cos_deg(formula_angle_deg(theta_open_deg));
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let mut row = vec![0.0; d];
            row[i] = cos_t;
            row[j] = -sin_t;
            rows.push((row, 0.0));
        }
    }
    rows.push((vec![1.0; d], cos_t / sin_t + 1.0));
    from_rows(dedup_rows(rows), d)
}

/// Unit box with tilted sides: for all ordered pairs `i != j`
/// `cos(t) x_i - sin(t) x_j <= 0` and
/// `-cos(t) x_i + sin(t) x_j <= sin(t) - cos(t)`, with `t` the remapped
/// [`formula_angle_deg`]. Contains 0 and (1,...,1) as vertices and is
/// contained in the unit box.
pub fn make_diamond(d: usize, theta_open_deg: f64) -> Result<Polytope> {
    check_angle(theta_open_deg)?;
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let (sin_t, cos_t) = sin_cos_deg(formula_angle_deg(theta_open_deg));
    let mut rows = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i == j {
                continue;
            }
            let mut lo = vec![0.0; d];
            lo[i] = cos_t;
            lo[j] = -sin_t;
            rows.push((lo, 0.0));
            let mut hi = vec![0.0; d];
            hi[i] = -cos_t;
            hi[j] = sin_t;
            rows.push((hi, sin_t - cos_t));
        }
    }
    from_rows(dedup_rows(rows), d)
}

/// Exit step of the ray `t (1,...,1)` from the origin: the value used to
/// place target modes along the diagonal. Requires the origin feasible.
pub fn diagonal_exit(p: &Polytope) -> Result<f64> {
    let zero = DVector::zeros(p.dim());
    p.max_forward_step(&zero, &DVector::from_element(p.dim(), 1.0))
}

/// Interior point with all slacks strictly positive.
///
/// Built-in polytopes take the diagonal midpoint `0.5 t* (1,...,1)`; general
/// polytopes fall back to coordinate ascent maximizing the minimum slack.
pub fn interior_point(p: &Polytope) -> Result<DVector<f64>> {
    let d = p.dim();
    let zero = DVector::zeros(d);
    if p.contains(&zero, DEFAULT_TOL) {
        if let Ok(t) = diagonal_exit(p) {
            if t.is_finite() && t > 0.0 {
                let x = DVector::from_element(d, 0.5 * t);
                if p.slacks(&x).iter().all(|&s| s > 0.0) {
                    return Ok(x);
                }
            }
        }
    }
    coordinate_ascent_interior(p)
}

/// Maximize `min_i (b_i - a_i.x)` by cyclic coordinate line searches.
/// The objective is concave piecewise-linear along each coordinate, so a
/// ternary search on a shrinking bracket converges.
fn coordinate_ascent_interior(p: &Polytope) -> Result<DVector<f64>> {
    let d = p.dim();
    let mut x = DVector::zeros(d);
    let min_slack = |x: &DVector<f64>| {
        p.slacks(x)
            .iter()
            .fold(f64::INFINITY, |acc, &s| acc.min(s))
    };
    let mut best = min_slack(&x);
    for _sweep in 0..200 {
        let before = best;
        for k in 0..d {
            let mut lo = -1e3;
            let mut hi = 1e3;
            for _ in 0..200 {
                let m1 = lo + (hi - lo) / 3.0;
                let m2 = hi - (hi - lo) / 3.0;
                let mut x1 = x.clone();
                x1[k] = m1;
                let mut x2 = x.clone();
                x2[k] = m2;
                if min_slack(&x1) < min_slack(&x2) {
                    lo = m1;
                } else {
                    hi = m2;
                }
            }
            let mut cand = x.clone();
            cand[k] = 0.5 * (lo + hi);
            let f = min_slack(&cand);
            if f > best {
                best = f;
                x = cand;
            }
        }
        if best > 0.0 && (best - before).abs() < 1e-12 {
            break;
        }
    }
    if best > 0.0 {
        Ok(x)
    } else {
        Err(Error::NoInteriorPoint)
    }
}
