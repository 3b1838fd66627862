//! Rational polygons in the plane, their fans, and toric resolution.
//!
//! Polygons are stored by vertices in counterclockwise order. The facet
//! through `v_i, v_{i+1}` has outward conormal `(e_y, -e_x)` for the edge
//! direction `e`, scaled to a primitive integer vector, so conormals also run
//! counterclockwise.

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::rational::{ceil_q, fmt_q, frac, gcd_q, q, serde_q, Q};

/// Integer vector in the plane.
pub type Ray = [i128; 2];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("polygon needs at least three vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon is not strictly convex at vertex {0}")]
    NotConvex(usize),
    #[error("repeated vertex {0}")]
    RepeatedVertex(usize),
    #[error("weights {0:?} must be positive with first weight 1")]
    UnsupportedWeights([i128; 3]),
    #[error("the cut does not fit inside the corner at the origin")]
    CutDoesNotFit,
    #[error("fan is not smooth at ray {0}")]
    NotSmooth(usize),
    #[error("the inequalities do not bound a polygon with interior")]
    Degenerate,
    #[error("edge endpoints coincide")]
    ZeroEdge,
}

/// A point with rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point2 {
    pub x: Q,
    pub y: Q,
}

impl Point2 {
    pub fn new(x: Q, y: Q) -> Self {
        Self { x, y }
    }

    pub fn int(x: i128, y: i128) -> Self {
        Self::new(q(x), q(y))
    }

    fn sub(&self, o: &Self) -> (Q, Q) {
        (self.x - o.x, self.y - o.y)
    }
}

impl Serialize for Point2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(2))?;
        seq.serialize_element(&fmt_q(&self.x))?;
        seq.serialize_element(&fmt_q(&self.y))?;
        seq.end()
    }
}

fn cross(a: (Q, Q), b: (Q, Q)) -> Q {
    a.0 * b.1 - a.1 * b.0
}

pub fn det(u: Ray, v: Ray) -> i128 {
    u[0] * v[1] - u[1] * v[0]
}

/// Primitive integer vector along a nonzero rational direction.
pub fn primitive_direction(dx: Q, dy: Q) -> Option<(Ray, Q)> {
    if dx.is_zero() && dy.is_zero() {
        return None;
    }
    let t = gcd_q(&[dx, dy]);
    let w = [(dx / t).to_integer(), (dy / t).to_integer()];
    Some((w, t))
}

/// Affine length of the segment `a b`: the `t` with `b - a = t w`, `w`
/// primitive integral.
pub fn affine_length(a: &Point2, b: &Point2) -> Result<Q, ToricError> {
    let (dx, dy) = b.sub(a);
    primitive_direction(dx, dy).map(|(_, t)| t).ok_or(ToricError::ZeroEdge)
}

/// One edge of a polygon: outward primitive conormal `n` and support value
/// `h`, so the polygon lies in `n . x <= h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Facet {
    pub conormal: Ray,
    #[serde(with = "serde_q")]
    pub support: Q,
}

/// Strictly convex polygon with rational vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope2 {
    vertices: Vec<Point2>,
}

impl Polytope2 {
    /// Accepts either orientation and stores counterclockwise.
    pub fn new(mut vertices: Vec<Point2>) -> Result<Self, ToricError> {
        let n = vertices.len();
        if n < 3 {
            return Err(ToricError::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i] == vertices[(i + 1) % n] {
                return Err(ToricError::RepeatedVertex(i));
            }
        }
        let area2: Q = (0..n)
            .map(|i| {
                let (a, b) = (vertices[i], vertices[(i + 1) % n]);
                a.x * b.y - a.y * b.x
            })
            .sum();
        if area2.is_negative() {
            vertices[1..].reverse();
        }
        for i in 0..n {
            let (a, b, c) = (vertices[(i + n - 1) % n], vertices[i], vertices[(i + 1) % n]);
            if cross(b.sub(&a), c.sub(&b)) <= Q::zero() {
                return Err(ToricError::NotConvex(i));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    /// Facet `i` joins vertex `i` to vertex `i + 1`.
    pub fn facets(&self) -> Vec<Facet> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                let (dx, dy) = b.sub(&a);
                let (w, _) = primitive_direction(dx, dy).expect("distinct vertices");
                let conormal = [w[1], -w[0]];
                let support = q(conormal[0]) * a.x + q(conormal[1]) * a.y;
                Facet { conormal, support }
            })
            .collect()
    }

    pub fn conormals(&self) -> Vec<Ray> {
        self.facets().into_iter().map(|f| f.conormal).collect()
    }

    pub fn fan(&self) -> FanCycle {
        FanCycle { rays: self.conormals() }
    }

    /// Affine length of each edge, in facet order.
    pub fn edge_lengths(&self) -> Vec<Q> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| affine_length(&self.vertices[i], &self.vertices[(i + 1) % n]).expect("distinct"))
            .collect()
    }

    /// `|det|` of the two conormals meeting at each vertex, in vertex order.
    pub fn corner_orders(&self) -> Vec<CornerOrder> {
        let c = self.conormals();
        let n = c.len();
        (0..n)
            .map(|i| CornerOrder {
                vertex: self.vertices[i],
                order: det(c[(i + n - 1) % n], c[i]).abs(),
            })
            .collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.corner_orders().iter().all(|c| c.order == 1)
    }

    /// Whether `p` satisfies every facet inequality.
    pub fn contains(&self, p: &Point2) -> bool {
        self.facets()
            .iter()
            .all(|f| q(f.conormal[0]) * p.x + q(f.conormal[1]) * p.y <= f.support)
    }

    /// Image under `x -> m x + t` for an integer matrix `m`.
    pub fn transform(&self, m: [[i128; 2]; 2], t: Point2) -> Result<Self, ToricError> {
        Self::new(self.vertices.iter().map(|p| apply_affine(m, t, p)).collect())
    }

    /// Intersection of the half-planes `n . x <= h`.
    pub fn from_inequalities(ineqs: &[Facet]) -> Result<Self, ToricError> {
        let mut pts: Vec<Point2> = Vec::new();
        for (i, a) in ineqs.iter().enumerate() {
            for b in &ineqs[i + 1..] {
                let d = det(a.conormal, b.conormal);
                if d == 0 {
                    continue;
                }
                let d = q(d);
                // Cramer on [a.n; b.n] x = [a.h; b.h]
                let x = (a.support * q(b.conormal[1]) - b.support * q(a.conormal[1])) / d;
                let y = (q(a.conormal[0]) * b.support - q(b.conormal[0]) * a.support) / d;
                let p = Point2::new(x, y);
                let inside = ineqs
                    .iter()
                    .all(|f| q(f.conormal[0]) * p.x + q(f.conormal[1]) * p.y <= f.support);
                if inside && !pts.contains(&p) {
                    pts.push(p);
                }
            }
        }
        if pts.len() < 3 {
            return Err(ToricError::Degenerate);
        }
        let hull = convex_hull(pts);
        if hull.len() < 3 {
            return Err(ToricError::Degenerate);
        }
        Self::new(hull)
    }
}

pub fn apply_affine(m: [[i128; 2]; 2], t: Point2, p: &Point2) -> Point2 {
    Point2::new(
        q(m[0][0]) * p.x + q(m[0][1]) * p.y + t.x,
        q(m[1][0]) * p.x + q(m[1][1]) * p.y + t.y,
    )
}

/// Strict convex hull, counterclockwise, collinear points dropped.
pub fn convex_hull(mut pts: Vec<Point2>) -> Vec<Point2> {
    pts.sort_by(|a, b| a.x.cmp(&b.x).then(a.y.cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let turn = |o: &Point2, a: &Point2, b: &Point2| cross(a.sub(o), b.sub(o));
    let mut lower: Vec<Point2> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= Q::zero() {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<Point2> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= Q::zero() {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CornerOrder {
    pub vertex: Point2,
    pub order: i128,
}

/// Weights `(m_1, m_2, m_3)` of a weighted projective plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WeightedProjectiveData {
    pub weights: [i128; 3],
}

impl WeightedProjectiveData {
    pub fn new(weights: [i128; 3]) -> Result<Self, ToricError> {
        if weights.iter().any(|&w| w <= 0) {
            return Err(ToricError::UnsupportedWeights(weights));
        }
        Ok(Self { weights })
    }

    /// `a_i`: product of the other two weights.
    pub fn a(&self) -> [i128; 3] {
        let [x, y, z] = self.weights;
        [y * z, x * z, x * y]
    }

    pub fn product(&self) -> i128 {
        self.weights.iter().product()
    }
}

/// The triangle `T_{q,p}` with vertices `(0,0), (q,0), (0,p)` for weights
/// `(1, p, q)`, `p <= q`.
pub fn wps_polytope(w: &WeightedProjectiveData) -> Result<Polytope2, ToricError> {
    let [m1, m2, m3] = w.weights;
    if m1 != 1 {
        return Err(ToricError::UnsupportedWeights(w.weights));
    }
    let (p, qq) = (m2.min(m3), m2.max(m3));
    Polytope2::new(vec![Point2::int(0, 0), Point2::int(qq, 0), Point2::int(0, p)])
}

/// Removes the interior of `lambda T_{1,l}` (vertices `(0,0), (lambda l, 0),
/// (0, lambda)`) from the corner of `outer` at the origin. The new edge has
/// conormal `-(1, l)`.
pub fn cut_corner(outer: &Polytope2, ell: i128, lambda: Q) -> Result<Polytope2, ToricError> {
    let v = outer.vertices();
    let n = v.len();
    let origin = Point2::int(0, 0);
    let i0 = v.iter().position(|p| *p == origin).ok_or(ToricError::CutDoesNotFit)?;
    let next = v[(i0 + 1) % n];
    let prev = v[(i0 + n - 1) % n];
    // corner must be the positive quadrant: next on the x-axis, prev on the y-axis
    if !(next.y.is_zero() && next.x.is_positive() && prev.x.is_zero() && prev.y.is_positive()) {
        return Err(ToricError::CutDoesNotFit);
    }
    if ell <= 0 || !lambda.is_positive() {
        return Err(ToricError::CutDoesNotFit);
    }
    let on_x = Point2::new(lambda * q(ell), Q::zero());
    let on_y = Point2::new(Q::zero(), lambda);
    if on_x.x >= next.x || on_y.y >= prev.y {
        return Err(ToricError::CutDoesNotFit);
    }
    let mut out = Vec::with_capacity(n + 1);
    for j in 1..n {
        out.push(v[(i0 + j) % n]);
    }
    out.push(on_y);
    out.insert(0, on_x);
    Polytope2::new(out)
}

/// Cyclically ordered conormals, counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FanCycle {
    pub rays: Vec<Ray>,
}

impl FanCycle {
    pub fn new(rays: Vec<Ray>) -> Self {
        Self { rays }
    }

    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    /// `det(u_i, u_{i+1})` for each consecutive pair.
    pub fn determinants(&self) -> Vec<i128> {
        let n = self.rays.len();
        (0..n).map(|i| det(self.rays[i], self.rays[(i + 1) % n])).collect()
    }

    pub fn is_smooth(&self) -> bool {
        self.determinants().iter().all(|&d| d == 1)
    }

    /// Clockwise listing starting at `start`, if present.
    pub fn clockwise_from(&self, start: Ray) -> Option<Vec<Ray>> {
        let n = self.rays.len();
        let i = self.rays.iter().position(|&r| r == start)?;
        Some((0..n).map(|j| self.rays[(i + n - j) % n]).collect())
    }

    /// The `s` with `u_{i-1} + u_{i+1} = -s u_i`: the self-intersection of the
    /// curve of ray `i`.
    pub fn self_intersections(&self) -> Result<Vec<i128>, ToricError> {
        let n = self.rays.len();
        if !self.is_smooth() {
            let i = self.determinants().iter().position(|&d| d != 1).unwrap_or(0);
            return Err(ToricError::NotSmooth(i));
        }
        (0..n)
            .map(|i| {
                let (a, u, b) = (self.rays[(i + n - 1) % n], self.rays[i], self.rays[(i + 1) % n]);
                let s = [a[0] + b[0], a[1] + b[1]];
                // s = -k u, with u primitive
                let k = if u[0] != 0 { -s[0] / u[0] } else { -s[1] / u[1] };
                if [-k * u[0], -k * u[1]] == s {
                    Ok(k)
                } else {
                    Err(ToricError::NotSmooth(i))
                }
            })
            .collect()
    }
}

/// Rays strictly between `u` and `v` (counterclockwise, `det(u, v) > 0`)
/// that make the cone smooth: the vertices of the boundary of the convex hull
/// of the nonzero lattice points of the cone.
pub fn resolve_cone(u: Ray, v: Ray) -> Vec<Ray> {
    let dv = det(u, v);
    if dv <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut w = u;
    loop {
        // det(w, x) = 1
        let g = Integer::extended_gcd(&w[0], &w[1]);
        debug_assert_eq!(g.gcd.abs(), 1);
        // w0 * x1 - w1 * x0 = 1 with x1 = a * s, x0 = -b * s
        let s = g.gcd.signum();
        let x0 = [-g.y * s, g.x * s];
        debug_assert_eq!(det(w, x0), 1);
        let (dx0v, dwv) = (det(x0, v), det(w, v));
        let t = ceil_q(&frac(-dx0v, dwv));
        let x = [x0[0] + t * w[0], x0[1] + t * w[1]];
        if x == v {
            break;
        }
        out.push(x);
        w = x;
    }
    out
}

/// Inserts Hirzebruch-Jung rays at every singular corner.
pub fn hj_resolve(fan: &FanCycle) -> FanCycle {
    let n = fan.rays.len();
    let mut rays = Vec::new();
    for i in 0..n {
        let (u, v) = (fan.rays[i], fan.rays[(i + 1) % n]);
        rays.push(u);
        rays.extend(resolve_cone(u, v));
    }
    FanCycle { rays }
}

pub fn resolve_polytope(p: &Polytope2) -> FanCycle {
    hj_resolve(&p.fan())
}

/// Summary used by the command line and golden files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    pub vertices: Vec<Point2>,
    pub conormals: Vec<Ray>,
    pub self_intersections: Vec<i128>,
}

/// Resolves the cut polygon `T_{2,3} \ lambda T_{1,l}` and lists the fan
/// clockwise from `(0, 1)`.
pub fn resolve_cut_triangle(ell: i128, lambda: Q) -> Result<ResolutionReport, ToricError> {
    let t23 = wps_polytope(&WeightedProjectiveData::new([1, 2, 3])?)?;
    let cut = cut_corner(&t23, ell, lambda)?;
    let fan = resolve_polytope(&cut);
    let cw = FanCycle::new(fan.clockwise_from([0, 1]).ok_or(ToricError::NotSmooth(0))?);
    // self-intersections are orientation independent
    let reversed = FanCycle::new(cw.rays.iter().rev().copied().collect());
    let mut si = reversed.self_intersections()?;
    si.reverse();
    Ok(ResolutionReport {
        vertices: cut.vertices().to_vec(),
        conormals: cw.rays,
        self_intersections: si,
    })
}
