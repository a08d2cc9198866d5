//! Planar primitives: complex points, exact rotation angles, tolerance-based
//! convex hulls, outward normals and angular ordering.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg};

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{domain, Error, Result};

/// A point of the plane, identified with a complex number.
pub type ComplexValue = Complex64;

/// Euclidean inner product of two plane vectors, `Re(u * conj(v))`.
#[inline]
pub fn inner(u: ComplexValue, v: ComplexValue) -> f64 {
    u.re * v.re + u.im * v.im
}

/// Signed doubled area of the triangle `o, a, b`; positive for a left turn.
#[inline]
pub fn cross(o: ComplexValue, a: ComplexValue, b: ComplexValue) -> f64 {
    let u = a - o;
    let v = b - o;
    u.re * v.im - u.im * v.re
}

pub fn is_finite(z: ComplexValue) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// An exact rotation angle `2π·num/den`, kept reduced with `num/den` in
/// `(-1/2, 1/2]`, i.e. the angle in `(-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RationalAngle {
    num: i64,
    den: i64,
}

impl RationalAngle {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return domain(format!("angle denominator must be positive, got {den}"));
        }
        Ok(Self::normalized(i128::from(num), i128::from(den)))
    }

    pub const fn zero() -> Self {
        RationalAngle { num: 0, den: 1 }
    }

    fn normalized(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (n, d) = (num / g, den / g);
        let mut r = n.rem_euclid(d);
        if 2 * r > d {
            r -= d;
        }
        // reduced and |r| <= d/2, so both fit back into i64 whenever d does
        RationalAngle {
            num: r as i64,
            den: d as i64,
        }
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Fraction of a full turn, in `(-1/2, 1/2]`.
    pub fn turns(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn radians(&self) -> f64 {
        2.0 * PI * self.turns()
    }

    /// `e^{i·angle}` evaluated in floating point.
    pub fn unit(&self) -> ComplexValue {
        ComplexValue::from_polar(1.0, self.radians())
    }

    /// Numerator over `den`, taken in `[0, den)`. `den` must be a multiple of
    /// this angle's denominator.
    pub fn numerator_over(&self, den: u64) -> u64 {
        debug_assert_eq!(den % self.den as u64, 0);
        let scaled = i128::from(self.num) * (den as i128 / i128::from(self.den));
        scaled.rem_euclid(den as i128) as u64
    }

    /// Compares absolute angles `|self|` and `|other|` exactly.
    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        let a = i128::from(self.num.abs()) * i128::from(other.den);
        let b = i128::from(other.num.abs()) * i128::from(self.den);
        a.cmp(&b)
    }
}

impl Add for RationalAngle {
    type Output = RationalAngle;

    fn add(self, rhs: Self) -> Self {
        let num =
            i128::from(self.num) * i128::from(rhs.den) + i128::from(rhs.num) * i128::from(self.den);
        let den = i128::from(self.den) * i128::from(rhs.den);
        Self::normalized(num, den)
    }
}

impl Neg for RationalAngle {
    type Output = RationalAngle;

    fn neg(self) -> Self {
        Self::normalized(-i128::from(self.num), i128::from(self.den))
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `1e-9` times the diagonal of the bounding box of `points`.
pub fn default_tolerance(points: &[ComplexValue]) -> f64 {
    let mut lo = ComplexValue::new(f64::INFINITY, f64::INFINITY);
    let mut hi = ComplexValue::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points {
        lo.re = lo.re.min(p.re);
        lo.im = lo.im.min(p.im);
        hi.re = hi.re.max(p.re);
        hi.im = hi.im.max(p.im);
    }
    if points.is_empty() {
        return 0.0;
    }
    1e-9 * (hi - lo).norm()
}

/// Indices of `points` with near-duplicates removed: a point is dropped when
/// an earlier kept point lies within `tol`.
pub fn dedup_indices(points: &[ComplexValue], tol: f64) -> Vec<usize> {
    let mut kept = Vec::with_capacity(points.len());
    if tol <= 0.0 {
        let mut seen: HashMap<(u64, u64), ()> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            // normalise -0.0 so that it matches 0.0
            let key = ((p.re + 0.0).to_bits(), (p.im + 0.0).to_bits());
            if seen.insert(key, ()).is_none() {
                kept.push(i);
            }
        }
        return kept;
    }
    let cell = |x: f64| (x / tol).floor() as i64;
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, p) in points.iter().enumerate() {
        let (cx, cy) = (cell(p.re), cell(p.im));
        let mut duplicate = false;
        'search: for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = grid.get(&(cx + dx, cy + dy)) {
                    if bucket.iter().any(|&j| (points[j] - p).norm() <= tol) {
                        duplicate = true;
                        break 'search;
                    }
                }
            }
        }
        if !duplicate {
            grid.entry((cx, cy)).or_default().push(i);
            kept.push(i);
        }
    }
    kept
}

fn lex_cmp(a: &ComplexValue, b: &ComplexValue) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Monotone-chain convex hull. Returns indices into `points` of the hull
/// vertices in counterclockwise order, starting at the lexicographically
/// smallest vertex. Points within `tol` of each other are merged (first
/// occurrence wins) and vertices within `tol` of the line through their
/// neighbours are dropped.
pub fn convex_hull_indices(points: &[ComplexValue], tol: f64) -> Result<Vec<usize>> {
    if points.is_empty() {
        return domain("convex hull of an empty point set");
    }
    if tol.is_nan() || tol < 0.0 {
        return domain(format!("tolerance must be non-negative, got {tol}"));
    }
    if let Some(p) = points.iter().find(|p| !is_finite(**p)) {
        return domain(format!("non-finite point {p}"));
    }
    let mut order = dedup_indices(points, tol);
    order.sort_by(|&i, &j| lex_cmp(&points[i], &points[j]));
    if order.len() <= 2 {
        return Ok(order);
    }

    let turns_left = |o: usize, a: usize, b: usize| {
        let (po, pa, pb) = (points[o], points[a], points[b]);
        cross(po, pa, pb) > tol * (pb - po).norm()
    };
    let mut hull: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &i in &order {
        while hull.len() >= 2 && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], i) {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while hull.len() >= lower_len && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], i)
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() == 2 && (points[hull[0]] - points[hull[1]]).norm() <= tol {
        hull.pop();
    }
    Ok(hull)
}

pub fn convex_hull(points: &[ComplexValue], tol: f64) -> Result<Vec<ComplexValue>> {
    Ok(convex_hull_indices(points, tol)?
        .into_iter()
        .map(|i| points[i])
        .collect())
}

/// Distance from `z` to the segment `[a, b]`.
pub fn segment_distance(a: ComplexValue, b: ComplexValue, z: ComplexValue) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let t = (inner(z - a, d) / len2).clamp(0.0, 1.0);
    (z - (a + d * t)).norm()
}

/// Whether `z` lies inside or within `tol` of the convex polygon `hull`
/// (counterclockwise, as returned by [`convex_hull`]).
pub fn hull_contains(hull: &[ComplexValue], z: ComplexValue, tol: f64) -> bool {
    match hull.len() {
        0 => false,
        1 => (z - hull[0]).norm() <= tol,
        2 => segment_distance(hull[0], hull[1], z) <= tol,
        n => (0..n).all(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            cross(a, b, z) >= -tol * (b - a).norm()
        }),
    }
}

fn arg_half_open(z: ComplexValue) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

/// Permutation sorting `points` by `arg(point - center)` ascending in `(-π, π]`.
pub fn angular_order(points: &[ComplexValue], center: ComplexValue) -> Result<Vec<usize>> {
    if let Some(i) = points.iter().position(|p| *p == center) {
        return domain(format!("point {i} coincides with the ordering center"));
    }
    let args: Vec<f64> = points.iter().map(|p| arg_half_open(p - center)).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| args[i].total_cmp(&args[j]));
    Ok(order)
}

/// Unit normal to the line through `e1, e2` pointing away from `interior`.
pub fn outward_normal(
    e1: ComplexValue,
    e2: ComplexValue,
    interior: ComplexValue,
) -> Result<ComplexValue> {
    let d = e2 - e1;
    let len = d.norm();
    if len == 0.0 || !len.is_finite() {
        return Err(Error::Degenerate("normal of a zero-length segment".into()));
    }
    // clockwise perpendicular of the edge direction
    let n = ComplexValue::new(d.im, -d.re) / len;
    let side = inner(n, interior - e1);
    if side.abs() <= 1e-14 * len.max((interior - e1).norm()) {
        return Err(Error::Degenerate(
            "interior point lies on the line through the segment".into(),
        ));
    }
    Ok(if side < 0.0 { n } else { -n })
}
