//! Spherical primitives: unit vectors, minor arcs, angles, areas, polar
//! polygons and self-crossings.
//!
//! Degeneracy predicates share one absolute tolerance, [`EPS_GEN`]. Inputs
//! that violate it are rejected; nothing is perturbed silently.

use std::f64::consts::PI;

use nalgebra::{Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Tolerance for antipodality, coplanarity and point-on-circle tests.
pub const EPS_GEN: f64 = 1e-9;

/// Tolerance used when comparing angles.
pub const ANGLE_TOL: f64 = 1e-9;

pub const TAU: f64 = 2.0 * PI;

/// A point on the unit sphere.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct UnitVec(Vec3);

impl UnitVec {
    pub const X: UnitVec = UnitVec(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: UnitVec = UnitVec(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: UnitVec = UnitVec(Vec3::new(0.0, 0.0, 1.0));

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vec(Vec3::new(x, y, z))
    }

    /// Normalizes `v`. Fails on (near) zero or non-finite input.
    pub fn from_vec(v: Vec3) -> Result<Self> {
        let n = v.norm();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::ZeroVector);
        }
        let mut u = v / n;
        // one refinement step keeps |u| within a few ulps of 1
        u /= u.norm();
        Ok(UnitVec(u))
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }
    pub fn y(&self) -> f64 {
        self.0.y
    }
    pub fn z(&self) -> f64 {
        self.0.z
    }

    pub fn v(&self) -> Vec3 {
        self.0
    }

    pub fn to_array(&self) -> [f64; 3] {
        [self.0.x, self.0.y, self.0.z]
    }

    pub fn dot(&self, o: &UnitVec) -> f64 {
        self.0.dot(&o.0)
    }

    pub fn cross(&self, o: &UnitVec) -> Vec3 {
        self.0.cross(&o.0)
    }

    /// Great-circle distance in radians.
    pub fn angle_to(&self, o: &UnitVec) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn rotate(&self, r: &Rotation3<f64>) -> UnitVec {
        UnitVec::from_vec(r * self.0).expect("rotation preserves length")
    }
}

impl std::ops::Neg for UnitVec {
    type Output = UnitVec;
    fn neg(self) -> UnitVec {
        UnitVec(-self.0)
    }
}

impl TryFrom<[f64; 3]> for UnitVec {
    type Error = Error;
    fn try_from(a: [f64; 3]) -> Result<Self> {
        UnitVec::new(a[0], a[1], a[2])
    }
}

impl From<UnitVec> for [f64; 3] {
    fn from(u: UnitVec) -> [f64; 3] {
        u.to_array()
    }
}

/// Oriented minor great-circle arc from `a` to `b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Arc {
    a: UnitVec,
    b: UnitVec,
    normal: UnitVec,
}

impl Arc {
    pub fn new(a: UnitVec, b: UnitVec) -> Result<Self> {
        let c = a.cross(&b);
        if c.norm() <= EPS_GEN {
            return Err(Error::DegenerateEdge(0));
        }
        Ok(Arc {
            a,
            b,
            normal: UnitVec::from_vec(c)?,
        })
    }

    pub fn a(&self) -> UnitVec {
        self.a
    }
    pub fn b(&self) -> UnitVec {
        self.b
    }

    /// Pole of the great circle carrying the arc, a × b normalized.
    pub fn normal(&self) -> UnitVec {
        self.normal
    }

    pub fn length(&self) -> f64 {
        self.a.angle_to(&self.b)
    }

    /// Whether `p`, assumed on the carrying great circle, lies on the closed
    /// arc up to `tol`.
    pub fn spans(&self, p: &UnitVec, tol: f64) -> bool {
        let n = self.normal.v();
        self.a.cross(p).dot(&n) >= -tol && p.cross(&self.b).dot(&n) >= -tol
    }

    /// Angle from `a` to the point `p` measured along the arc direction.
    pub fn param(&self, p: &UnitVec) -> f64 {
        let n = self.normal.v();
        self.a.cross(p).dot(&n).atan2(self.a.dot(p))
    }

    /// Point at angle `t` from `a` along the arc's great circle.
    pub fn point_at(&self, t: f64) -> UnitVec {
        let tan = self.normal.v().cross(&self.a.v());
        UnitVec::from_vec(self.a.v() * t.cos() + tan * t.sin()).expect("unit combination")
    }

    /// Angular distance from `p` to the closed arc.
    pub fn distance_to(&self, p: &UnitVec) -> f64 {
        let n = self.normal.v();
        let off = p.v().dot(&n);
        let proj = p.v() - n * off;
        if proj.norm() > 1e-15 {
            let q = UnitVec::from_vec(proj).unwrap();
            if self.spans(&q, 0.0) {
                return off.abs().clamp(0.0, 1.0).asin();
            }
        }
        p.angle_to(&self.a).min(p.angle_to(&self.b))
    }
}

/// Cyclic list of at least three unit vectors joined by minor arcs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<UnitVec>", into = "Vec<UnitVec>")]
pub struct SphericalPolygon {
    vertices: Vec<UnitVec>,
}

impl SphericalPolygon {
    pub fn new(vertices: Vec<UnitVec>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        for i in 0..n {
            if vertices[i].cross(&vertices[(i + 1) % n]).norm() <= EPS_GEN {
                return Err(Error::DegenerateEdge(i));
            }
        }
        Ok(SphericalPolygon { vertices })
    }

    pub fn from_points(pts: &[[f64; 3]]) -> Result<Self> {
        let v = pts.iter().map(|p| UnitVec::try_from(*p)).collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[UnitVec] {
        &self.vertices
    }

    /// Vertex with cyclic indexing (negative indices allowed).
    pub fn at(&self, i: isize) -> UnitVec {
        let n = self.vertices.len() as isize;
        self.vertices[i.rem_euclid(n) as usize]
    }

    /// Edge `i` from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Arc {
        let n = self.vertices.len();
        Arc::new(self.vertices[i], self.vertices[(i + 1) % n]).expect("validated at construction")
    }

    pub fn edges(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        self.edges().map(|e| e.length()).sum()
    }

    pub fn reversed(&self) -> SphericalPolygon {
        let mut v = self.vertices.clone();
        v.reverse();
        SphericalPolygon { vertices: v }
    }

    pub fn negated(&self) -> SphericalPolygon {
        SphericalPolygon {
            vertices: self.vertices.iter().map(|v| -*v).collect(),
        }
    }

    pub fn rotated(&self, r: &Rotation3<f64>) -> SphericalPolygon {
        SphericalPolygon {
            vertices: self.vertices.iter().map(|v| v.rotate(r)).collect(),
        }
    }

    /// Whether edges `i` and `j` share a vertex.
    pub fn adjacent_edges(&self, i: usize, j: usize) -> bool {
        let n = self.len();
        i == j || (i + 1) % n == j || (j + 1) % n == i
    }

    /// No three vertices on a common great circle.
    pub fn is_general_position(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if det(&v[i], &v[j], &v[k]).abs() <= EPS_GEN {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl TryFrom<Vec<UnitVec>> for SphericalPolygon {
    type Error = Error;
    fn try_from(v: Vec<UnitVec>) -> Result<Self> {
        SphericalPolygon::new(v)
    }
}

impl From<SphericalPolygon> for Vec<UnitVec> {
    fn from(p: SphericalPolygon) -> Vec<UnitVec> {
        p.vertices
    }
}

/// det(a, b, c) = (a × b) · c; positive when a → b → c turns left.
pub fn det(a: &UnitVec, b: &UnitVec, c: &UnitVec) -> f64 {
    a.cross(b).dot(&c.v())
}

/// Unit tangent at `b` pointing along the minor arc towards `a`.
pub fn tangent_towards(b: &UnitVec, a: &UnitVec) -> Result<Vec3> {
    if b.cross(a).norm() <= EPS_GEN {
        return Err(Error::DegenerateWedge);
    }
    let t = a.v() - b.v() * b.dot(a);
    Ok(t / t.norm())
}

/// Counterclockwise angle (about the outward normal `b`) that carries the
/// tangent of arc b→a onto the tangent of arc b→c, in (0, 2π).
pub fn spherical_angle(a: &UnitVec, b: &UnitVec, c: &UnitVec) -> Result<f64> {
    let ta = tangent_towards(b, a)?;
    let tc = tangent_towards(b, c)?;
    let mut ang = ta.cross(&tc).dot(&b.v()).atan2(ta.dot(&tc));
    if ang < 0.0 {
        ang += TAU;
    }
    if ang <= ANGLE_TOL || ang >= TAU - ANGLE_TOL {
        return Err(Error::DegenerateWedge);
    }
    Ok(ang)
}

/// Angle on the left of the path prev → v → next.
pub fn left_angle(prev: &UnitVec, v: &UnitVec, next: &UnitVec) -> Result<f64> {
    spherical_angle(next, v, prev)
}

/// Area of a simple polygon by the excess formula, interior on the left.
pub fn polygon_area_excess(p: &SphericalPolygon) -> Result<f64> {
    if crossing_count(p)? != 0 {
        return Err(Error::NotSimple);
    }
    let n = p.len() as isize;
    let mut sum = 0.0;
    for i in 0..n {
        sum += left_angle(&p.at(i - 1), &p.at(i), &p.at(i + 1))?;
    }
    Ok(sum - (n as f64 - 2.0) * PI)
}

/// w'_i = (w_i × w_{i+1}) / |w_i × w_{i+1}|.
pub fn polar_polygon(w: &SphericalPolygon) -> Result<SphericalPolygon> {
    let n = w.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let c = w.vertices[i].cross(&w.vertices[(i + 1) % n]);
        if c.norm() <= EPS_GEN {
            return Err(Error::DegenerateEdge(i));
        }
        out.push(UnitVec::from_vec(c)?);
    }
    SphericalPolygon::new(out)
}

/// Points common to two minor arcs. Two points are only possible for arcs on
/// one great circle, which is reported as [`Error::SharedGreatCircle`].
pub fn arc_intersection(a1: &Arc, a2: &Arc) -> Result<Vec<UnitVec>> {
    let d = a1.normal().cross(&a2.normal());
    if d.norm() <= EPS_GEN {
        return Err(Error::SharedGreatCircle);
    }
    let p = UnitVec::from_vec(d)?;
    let mut out = Vec::new();
    for q in [p, -p] {
        if a1.spans(&q, EPS_GEN) && a2.spans(&q, EPS_GEN) {
            out.push(q);
        }
    }
    Ok(out)
}

/// A transversal crossing between non-adjacent edges `i < j`.
#[derive(Clone, Copy, Debug)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    /// arc parameter of the point along edge i and edge j
    pub t_i: f64,
    pub t_j: f64,
    pub point: UnitVec,
}

/// All self-crossings of `w`. Touching at or near endpoints is rejected.
pub fn self_crossings(w: &SphericalPolygon) -> Result<Vec<Crossing>> {
    let n = w.len();
    let edges: Vec<Arc> = w.edges().collect();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if w.adjacent_edges(i, j) {
                continue;
            }
            let (ei, ej) = (&edges[i], &edges[j]);
            let pts = match arc_intersection(ei, ej) {
                Ok(p) => p,
                Err(Error::SharedGreatCircle) => {
                    let touch = [ej.a(), ej.b()].iter().any(|p| ei.spans(p, EPS_GEN))
                        || [ei.a(), ei.b()].iter().any(|p| ej.spans(p, EPS_GEN));
                    if touch {
                        return Err(Error::NonTransversal(i, j));
                    }
                    continue;
                }
                Err(e) => return Err(e),
            };
            for p in pts {
                let near_end = [ei.a(), ei.b(), ej.a(), ej.b()]
                    .iter()
                    .any(|q| q.angle_to(&p) <= EPS_GEN);
                if near_end {
                    return Err(Error::NonTransversal(i, j));
                }
                out.push(Crossing {
                    i,
                    j,
                    t_i: ei.param(&p),
                    t_j: ej.param(&p),
                    point: p,
                });
            }
        }
    }
    Ok(out)
}

/// Number of unordered pairs of non-adjacent edges that meet.
pub fn crossing_count(w: &SphericalPolygon) -> Result<usize> {
    Ok(self_crossings(w)?.len())
}

/// Orthonormal tangent frame (e1, e2) at `xi` with e1 × e2 = xi. The first
/// axis is the global x-axis projected to the tangent plane (y-axis when xi
/// is nearly parallel to x).
pub fn tangent_frame(xi: &UnitVec) -> (Vec3, Vec3) {
    let x = xi.v();
    let mut e1 = Vec3::x() - x * x.x;
    if e1.norm() < 1e-6 {
        e1 = Vec3::y() - x * x.y;
    }
    e1 /= e1.norm();
    let e2 = x.cross(&e1);
    (e1, e2)
}

/// A direction `n` with ⟨n, p⟩ > 0 for every `p`, when the points fit in an
/// open hemisphere. The result is the normalized sum of the extreme rays of
/// the closed feasible cone, which lies in its interior.
pub fn open_hemisphere(points: &[UnitVec]) -> Option<UnitVec> {
    let m = points.len();
    if m == 0 {
        return None;
    }
    let feasible = |c: &Vec3| points.iter().all(|p| p.v().dot(c) >= -EPS_GEN);
    let mut acc = Vec3::zeros();
    let mut rays = 0usize;
    for i in 0..m {
        for j in i + 1..m {
            let c = points[i].cross(&points[j]);
            let nc = c.norm();
            if nc <= EPS_GEN {
                continue;
            }
            let c = c / nc;
            for s in [1.0, -1.0] {
                if feasible(&(c * s)) {
                    acc += c * s;
                    rays += 1;
                }
            }
        }
    }
    let strict = |n: &UnitVec| points.iter().all(|p| p.dot(n) > EPS_GEN);
    if rays > 0 {
        if let Ok(n) = UnitVec::from_vec(acc) {
            if strict(&n) {
                return Some(n);
            }
        }
    }
    // all points on (nearly) one ray: the cone is not pointed
    let sum: Vec3 = points.iter().map(|p| p.v()).sum();
    match UnitVec::from_vec(sum) {
        Ok(n) if strict(&n) => Some(n),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(x: f64, y: f64, z: f64) -> UnitVec {
        UnitVec::new(x, y, z).unwrap()
    }

    fn octant() -> SphericalPolygon {
        SphericalPolygon::new(vec![UnitVec::X, UnitVec::Y, UnitVec::Z]).unwrap()
    }

    #[test]
    fn spherical_angle_frame_cases() {
        let (x, y, z) = (UnitVec::X, UnitVec::Y, UnitVec::Z);
        assert!((spherical_angle(&x, &z, &y).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((spherical_angle(&x, &z, &-x).unwrap() - PI).abs() < 1e-12);
        assert!((spherical_angle(&y, &z, &x).unwrap() - 1.5 * PI).abs() < 1e-12);
        assert_eq!(spherical_angle(&z, &z, &x), Err(Error::DegenerateWedge));
        assert_eq!(spherical_angle(&x, &z, &-z), Err(Error::DegenerateWedge));
    }

    #[test]
    fn unit_vec_normalizes() {
        let v = u(3.0, -4.0, 12.0);
        assert!((v.v().norm() - 1.0).abs() < 1e-12);
        assert_eq!(UnitVec::new(0.0, 0.0, 0.0), Err(Error::ZeroVector));
    }

    #[test]
    fn octant_area_and_polar() {
        let p = octant();
        assert!((polygon_area_excess(&p).unwrap() - PI / 2.0).abs() < 1e-12);
        let q = polar_polygon(&p).unwrap();
        let expect = [UnitVec::Z, UnitVec::X, UnitVec::Y];
        for (a, b) in q.vertices().iter().zip(expect.iter()) {
            assert!(a.angle_to(b) < 1e-12);
        }
        let qq = polar_polygon(&q).unwrap();
        // polar of polar is the octant again, shifted by one
        for k in 0..3 {
            assert!(qq.at(k).angle_to(&p.at(k + 1)) < 1e-12);
        }
    }

    #[test]
    fn clockwise_octant_has_complementary_area() {
        let p = octant().reversed();
        let a = polygon_area_excess(&p).unwrap();
        assert!((a - 3.5 * PI).abs() < 1e-12);
    }

    #[test]
    fn small_square_area_vanishes() {
        for &r in &[0.3, 0.1, 0.01] {
            let pts: Vec<UnitVec> = (0..4)
                .map(|k| {
                    let t = k as f64 * PI / 2.0;
                    u(r * t.cos(), r * t.sin(), 1.0)
                })
                .collect();
            let p = SphericalPolygon::new(pts).unwrap();
            let a = polygon_area_excess(&p).unwrap();
            // gnomonic square of half-diagonal r: area close to planar 2r²
            assert!(
                a > 0.0 && (a - 2.0 * r * r).abs() < 4.0 * r.powi(4) + 1e-12,
                "r={r} a={a}"
            );
        }
    }

    #[test]
    fn polar_of_equilateral_triangle_at_45_degrees() {
        let th = PI / 4.0;
        let tri: Vec<UnitVec> = (0..3)
            .map(|k| {
                let p = TAU * k as f64 / 3.0;
                u(th.sin() * p.cos(), th.sin() * p.sin(), th.cos())
            })
            .collect();
        let w = SphericalPolygon::new(tri).unwrap();
        let wp = polar_polygon(&w).unwrap();
        // same cyclic orientation around the pole
        let ang: Vec<f64> = wp.vertices().iter().map(|v| v.y().atan2(v.x())).collect();
        let d1 = (ang[1] - ang[0]).rem_euclid(TAU);
        let d2 = (ang[2] - ang[1]).rem_euclid(TAU);
        assert!((d1 - TAU / 3.0).abs() < 1e-9 && (d2 - TAU / 3.0).abs() < 1e-9);
        // the pole of an edge sits pi/2 away from the edge midpoint, which is
        // closer to the north pole than the vertices
        let mid = UnitVec::from_vec(w.at(0).v() + w.at(1).v()).unwrap();
        assert!((wp.at(0).angle_to(&UnitVec::Z) - (PI / 2.0 - mid.angle_to(&UnitVec::Z))).abs() < 1e-12);
    }

    #[test]
    fn arc_intersection_cases() {
        let eq = Arc::new(UnitVec::X, UnitVec::Y).unwrap();
        let mer = Arc::new(UnitVec::Z, u(1.0, 1.0, -0.2)).unwrap();
        let p = arc_intersection(&eq, &mer).unwrap();
        assert_eq!(p.len(), 1);
        assert!(p[0].z().abs() < 1e-12);
        assert!((p[0].x() - p[0].y()).abs() < 1e-12 && p[0].x() > 0.0);
        let far = Arc::new(-UnitVec::X, -UnitVec::Y).unwrap();
        let up = Arc::new(UnitVec::Y, UnitVec::Z).unwrap();
        assert!(arc_intersection(&far, &up).unwrap().is_empty());
        let eq2 = Arc::new(u(1.0, 0.3, 0.0), u(0.2, 1.0, 0.0)).unwrap();
        assert_eq!(arc_intersection(&eq, &eq2), Err(Error::SharedGreatCircle));
    }

    #[test]
    fn figure_eight_has_one_crossing() {
        // two lobes: the edges 0 and 2 cross at the north pole region
        let p =
            SphericalPolygon::from_points(&[[1.0, 0.3, 0.2], [-1.0, -0.3, 0.2], [-1.0, 0.3, 0.2], [1.0, -0.3, 0.2]])
                .unwrap();
        assert_eq!(crossing_count(&p).unwrap(), 1);
        assert_eq!(crossing_count(&octant()).unwrap(), 0);
        assert_eq!(polygon_area_excess(&p), Err(Error::NotSimple));
    }

    #[test]
    fn touching_edges_are_rejected() {
        // vertex 2 lies exactly on edge 0
        let p = SphericalPolygon::from_points(&[
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.5, 0.5],
            [1.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert!(matches!(crossing_count(&p), Err(Error::NonTransversal(..))));
    }

    #[test]
    fn degenerate_polygons_are_rejected() {
        assert_eq!(
            SphericalPolygon::new(vec![UnitVec::X, -UnitVec::X, UnitVec::Y]).unwrap_err(),
            Error::DegenerateEdge(0)
        );
        assert_eq!(
            SphericalPolygon::new(vec![UnitVec::X, UnitVec::Y]).unwrap_err(),
            Error::TooFewVertices(2)
        );
    }

    #[test]
    fn json_round_trip() {
        let p = octant();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "[[1.0,0.0,0.0],[0.0,1.0,0.0],[0.0,0.0,1.0]]");
        let q: SphericalPolygon = serde_json::from_str(&s).unwrap();
        assert_eq!(p, q);
        assert!(serde_json::from_str::<SphericalPolygon>("[[1,0,0],[1,0,0],[0,1,0]]").is_err());
    }

    #[test]
    fn hemisphere_containment() {
        let pts = [UnitVec::X, UnitVec::Y, UnitVec::Z];
        let n = open_hemisphere(&pts).unwrap();
        assert!(pts.iter().all(|p| p.dot(&n) > 0.0));
        let mut all = pts.to_vec();
        all.push(u(-1.0, -1.0, -1.0));
        assert!(open_hemisphere(&all).is_none());
        // points on a great circle do not fit in an open hemisphere
        let ring: Vec<UnitVec> = (0..5).map(|k| u((k as f64).cos(), (k as f64).sin(), 0.0)).collect();
        assert!(open_hemisphere(&ring).is_none());
        assert!(open_hemisphere(&[UnitVec::X]).is_some());
    }

    #[test]
    fn arc_distance() {
        let a = Arc::new(UnitVec::X, UnitVec::Y).unwrap();
        let p = u(1.0, 1.0, 1.0);
        assert!((a.distance_to(&p) - (1.0f64 / 3f64.sqrt()).asin()).abs() < 1e-12);
        let q = u(-1.0, 0.0, 0.0);
        assert!((a.distance_to(&q) - PI / 2.0).abs() < 1e-12);
    }
}
