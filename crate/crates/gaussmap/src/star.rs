//! Polyhedral vertex stars.
//!
//! A star is a center point and a cyclic list of planar faces around it,
//! counterclockwise with respect to the outward orientation. Each face is
//! stored as the chain of its vertices from one center neighbor to the
//! next, the center itself omitted. A face's corner angle at the center may
//! be reflex; reflex wedges are split at their bisector wherever minor arcs
//! are needed.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere::{det, open_hemisphere, tangent_frame, SphericalPolygon, UnitVec, Vec3, EPS_GEN, TAU};

/// Relative planarity tolerance for faces.
const PLANAR_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    chain: Vec<Vec3>,
    normal: UnitVec,
    alpha: f64,
}

impl Face {
    /// Chain from the first center neighbor to the second, inclusive.
    pub fn chain(&self) -> &[Vec3] {
        &self.chain
    }
    pub fn normal(&self) -> UnitVec {
        self.normal
    }
    /// Interior angle at the center, in (0, 2π).
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn is_reflex(&self) -> bool {
        self.alpha > PI
    }
    pub fn is_triangle(&self) -> bool {
        self.chain.len() == 2
    }
}

/// A minor wedge of the star: the arc from `a` to `b` inside face `face`.
#[derive(Clone, Copy, Debug)]
pub struct Wedge {
    pub face: usize,
    pub a: UnitVec,
    pub b: UnitVec,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VertexStar {
    center: Vec3,
    faces: Vec<Face>,
    dirs: Vec<UnitVec>,
}

/// Curvature split into the part carried by the convex hull cone and the rest.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CurvatureParts {
    pub k_total: f64,
    pub k_plus: f64,
    pub k_minus: f64,
}

/// Inflection classification of the faces of a star.
#[derive(Clone, Debug, PartialEq)]
pub struct Inflections {
    pub is_inflection: Vec<bool>,
    /// convex inflection faces + reflex inflection faces + 2 · reflex
    /// non-inflection faces
    pub weighted: i64,
}

impl Inflections {
    pub fn faces(&self) -> Vec<usize> {
        (0..self.is_inflection.len())
            .filter(|&k| self.is_inflection[k])
            .collect()
    }
}

/// Projection of a star on the unit sphere around its center.
#[derive(Clone, Debug)]
pub struct Projection {
    pub polygon: SphericalPolygon,
    /// face whose wedge starts at each polygon vertex
    pub face_of_vertex: Vec<usize>,
    /// whether the vertex is a bisector inserted into a reflex face
    pub inserted: Vec<bool>,
}

fn newell(points: &[Vec3]) -> Vec3 {
    let n = points.len();
    let mut acc = Vec3::zeros();
    for i in 0..n {
        let a = points[i];
        let b = points[(i + 1) % n];
        acc += a.cross(&b);
    }
    acc
}

fn rotate_in_plane(u: &UnitVec, n: &UnitVec, t: f64) -> UnitVec {
    UnitVec::from_vec(u.v() * t.cos() + n.v().cross(&u.v()) * t.sin()).expect("unit")
}

impl VertexStar {
    /// Builds a star from explicit face chains. Chain `k` runs from the k-th
    /// center neighbor to the next one and must end where chain `k+1` starts.
    pub fn new(center: Vec3, chains: Vec<Vec<Vec3>>) -> Result<Self> {
        let n = chains.len();
        if n < 3 {
            return Err(Error::InvalidStar(format!("need at least 3 faces, got {n}")));
        }
        let mut scale = 0.0f64;
        for ch in &chains {
            for p in ch {
                scale = scale.max((p - center).norm());
            }
        }
        if scale == 0.0 || !scale.is_finite() {
            return Err(Error::InvalidStar("degenerate coordinates".into()));
        }
        let mut faces = Vec::with_capacity(n);
        let mut dirs = Vec::with_capacity(n);
        for (k, ch) in chains.iter().enumerate() {
            if ch.len() < 2 {
                return Err(Error::InvalidStar(format!("face {k} has fewer than 3 corners")));
            }
            let next = &chains[(k + 1) % n];
            if (ch[ch.len() - 1] - next[0]).norm() > 1e-12 * scale {
                return Err(Error::InvalidStar(format!(
                    "face {k} does not end where face {} starts",
                    (k + 1) % n
                )));
            }
            if (ch[0] - center).norm() <= EPS_GEN * scale {
                return Err(Error::ZeroLengthEdge(k));
            }
            let mut poly = Vec::with_capacity(ch.len() + 1);
            poly.push(center);
            poly.extend(ch.iter().copied());
            let nv = newell(&poly);
            let normal = UnitVec::from_vec(nv).map_err(|_| Error::InvalidStar(format!("face {k} has no normal")))?;
            let dev = poly
                .iter()
                .map(|p| (p - center).dot(&normal.v()).abs())
                .fold(0.0, f64::max);
            if dev > PLANAR_TOL * scale {
                return Err(Error::InvalidStar(format!("face {k} is not planar ({dev:e})")));
            }
            let p = ch[0] - center;
            let q = ch[ch.len() - 1] - center;
            let mut alpha = p.cross(&q).dot(&normal.v()).atan2(p.dot(&q));
            if alpha < 0.0 {
                alpha += TAU;
            }
            if alpha <= EPS_GEN || alpha >= TAU - EPS_GEN || (alpha - PI).abs() <= EPS_GEN {
                return Err(Error::InvalidStar(format!("face {k} has a straight or empty corner")));
            }
            faces.push(Face {
                chain: ch.clone(),
                normal,
                alpha,
            });
            dirs.push(UnitVec::from_vec(p)?);
        }
        Ok(VertexStar { center, faces, dirs })
    }

    /// Triangle fan: face k is (center, ring[k], ring[k+1]).
    pub fn from_ring(center: Vec3, ring: &[Vec3]) -> Result<Self> {
        let n = ring.len();
        let chains = (0..n).map(|k| vec![ring[k], ring[(k + 1) % n]]).collect();
        Self::new(center, chains)
    }

    pub fn center(&self) -> Vec3 {
        self.center
    }
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }
    pub fn valence(&self) -> usize {
        self.faces.len()
    }
    /// Ring vertices: the first chain point of every face.
    pub fn ring(&self) -> Vec<Vec3> {
        self.faces.iter().map(|f| f.chain[0]).collect()
    }
    /// Unit directions from the center to the ring vertices.
    pub fn directions(&self) -> &[UnitVec] {
        &self.dirs
    }
    pub fn normals(&self) -> Vec<UnitVec> {
        self.faces.iter().map(|f| f.normal).collect()
    }
    pub fn reflex_flags(&self) -> Vec<bool> {
        self.faces.iter().map(|f| f.is_reflex()).collect()
    }
    pub fn has_reflex(&self) -> bool {
        self.faces.iter().any(|f| f.is_reflex())
    }
    pub fn is_simplicial(&self) -> bool {
        self.faces.iter().all(|f| f.is_triangle())
    }

    /// Bisector direction of face `k`'s corner.
    pub fn bisector(&self, k: usize) -> UnitVec {
        rotate_in_plane(&self.dirs[k], &self.faces[k].normal, self.faces[k].alpha / 2.0)
    }

    /// Direction inside face `k`'s corner at fraction `t` of its angle.
    pub fn corner_direction(&self, k: usize, t: f64) -> UnitVec {
        rotate_in_plane(&self.dirs[k], &self.faces[k].normal, self.faces[k].alpha * t)
    }

    /// Minor wedges in cyclic order; reflex corners contribute two halves.
    pub fn wedges(&self) -> Vec<Wedge> {
        let n = self.valence();
        let mut out = Vec::with_capacity(n + 2);
        for k in 0..n {
            let a = self.dirs[k];
            let b = self.dirs[(k + 1) % n];
            if self.faces[k].is_reflex() {
                let m = self.bisector(k);
                out.push(Wedge { face: k, a, b: m });
                out.push(Wedge { face: k, a: m, b });
            } else {
                out.push(Wedge { face: k, a, b });
            }
        }
        out
    }

    pub fn rotated(&self, r: &nalgebra::Rotation3<f64>) -> Result<VertexStar> {
        let c = r * self.center;
        let chains = self
            .faces
            .iter()
            .map(|f| f.chain.iter().map(|p| r * p).collect())
            .collect();
        VertexStar::new(c, chains)
    }
}

/// K(v) = 2π − Σ α.
pub fn angle_deficit(s: &VertexStar) -> f64 {
    TAU - s.faces.iter().map(|f| f.alpha).sum::<f64>()
}

/// Polygon of face normals in face order.
pub fn gauss_image(s: &VertexStar) -> Result<SphericalPolygon> {
    let n = s.valence();
    for k in 0..n {
        let a = s.faces[k].normal;
        let b = s.faces[(k + 1) % n].normal;
        if a.cross(&b).norm() <= EPS_GEN {
            return Err(Error::AntipodalNormals(k, (k + 1) % n));
        }
    }
    SphericalPolygon::new(s.normals())
}

/// Star projected to the unit sphere, with reflex corners subdivided.
pub fn project_with_flags(s: &VertexStar) -> Result<Projection> {
    let ws = s.wedges();
    let mut verts = Vec::with_capacity(ws.len());
    let mut face_of_vertex = Vec::with_capacity(ws.len());
    let mut inserted = Vec::with_capacity(ws.len());
    let mut prev_face = usize::MAX;
    for w in &ws {
        verts.push(w.a);
        face_of_vertex.push(w.face);
        inserted.push(w.face == prev_face);
        prev_face = w.face;
    }
    let polygon = SphericalPolygon::new(verts)?;
    Ok(Projection {
        polygon,
        face_of_vertex,
        inserted,
    })
}

/// W: directions from the center to the ring, reflex corners subdivided.
pub fn project_to_sphere(s: &VertexStar) -> Result<SphericalPolygon> {
    Ok(project_with_flags(s)?.polygon)
}

/// Polar polygon of W with the repeated normals of split reflex corners
/// collapsed; equals the Gauss image.
pub fn collapsed_polar(w: &SphericalPolygon) -> Result<SphericalPolygon> {
    let v = w.vertices();
    let n = v.len();
    let mut raw = Vec::with_capacity(n);
    for i in 0..n {
        let c = v[i].cross(&v[(i + 1) % n]);
        if c.norm() <= EPS_GEN {
            return Err(Error::DegenerateEdge(i));
        }
        raw.push(UnitVec::from_vec(c)?);
    }
    let mut out: Vec<UnitVec> = Vec::with_capacity(n);
    for i in 0..n {
        if raw[i].angle_to(&raw[(i + n - 1) % n]) > 1e-12 {
            out.push(raw[i]);
        }
    }
    SphericalPolygon::new(out)
}

/// Faces whose two neighbors lie strictly on opposite sides of their plane.
pub fn inflection_faces(s: &VertexStar) -> Result<Inflections> {
    let ws = s.wedges();
    let n = s.valence();
    let m = ws.len();
    // first and last wedge index of each face
    let mut first = vec![0usize; n];
    let mut last = vec![0usize; n];
    for (i, w) in ws.iter().enumerate() {
        if i == 0 || ws[i - 1].face != w.face {
            first[w.face] = i;
        }
        last[w.face] = i;
    }
    let mut flags = Vec::with_capacity(n);
    let mut weighted = 0i64;
    for k in 0..n {
        let nk = s.faces[k].normal;
        let before = ws[(first[k] + m - 1) % m].a;
        let after = ws[(last[k] + 1) % m].b;
        let sb = nk.dot(&before);
        let sa = nk.dot(&after);
        if sb.abs() <= EPS_GEN || sa.abs() <= EPS_GEN {
            return Err(Error::NeighborOnPlane(k));
        }
        let infl = (sb > 0.0) != (sa > 0.0);
        flags.push(infl);
        weighted += match (s.faces[k].is_reflex(), infl) {
            (false, true) => 1,
            (false, false) => 0,
            (true, true) => 1,
            (true, false) => 2,
        };
    }
    Ok(Inflections {
        is_inflection: flags,
        weighted,
    })
}

/// Direction `n` with ⟨n, n_f⟩ > 0 for every face normal, if one exists.
pub fn transverse_plane(s: &VertexStar) -> Option<UnitVec> {
    open_hemisphere(&s.normals())
}

fn convex_hull_2d(pts: &[(f64, f64, usize)]) -> Vec<usize> {
    let mut p: Vec<(f64, f64, usize)> = pts.to_vec();
    p.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.partial_cmp(&b.1).unwrap()));
    if p.len() < 3 {
        return p.iter().map(|q| q.2).collect();
    }
    let cross = |o: &(f64, f64, usize), a: &(f64, f64, usize), b: &(f64, f64, usize)| {
        (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
    };
    let mut lower: Vec<(f64, f64, usize)> = Vec::new();
    for q in &p {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], q) <= 1e-14 {
            lower.pop();
        }
        lower.push(*q);
    }
    let mut upper: Vec<(f64, f64, usize)> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], q) <= 1e-14 {
            upper.pop();
        }
        upper.push(*q);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.iter().map(|q| q.2).collect()
}

/// Boundary fan of the convex cone spanned by the star, or `None` when the
/// cone is all of space. The fan keeps the rotational sense of the star.
pub fn convex_hull_cone(s: &VertexStar) -> Option<VertexStar> {
    let w = project_to_sphere(s).ok()?;
    let neg: Vec<UnitVec> = w.vertices().iter().map(|u| -*u).collect();
    let axis = open_hemisphere(&neg)?;
    let (e1, e2) = tangent_frame(&axis);
    let plane: Vec<(f64, f64, usize)> = w
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, u)| {
            let h = -u.v().dot(&axis.v());
            (u.v().dot(&e1) / h, u.v().dot(&e2) / h, i)
        })
        .collect();
    let mut hull = convex_hull_2d(&plane);
    if hull.len() < 3 {
        return None;
    }
    let mut area = 0.0;
    let n = plane.len();
    for i in 0..n {
        let (a, b) = (plane[i], plane[(i + 1) % n]);
        area += a.0 * b.1 - a.1 * b.0;
    }
    if area < 0.0 {
        hull.reverse();
    }
    let c = s.center;
    let ring: Vec<Vec3> = hull.iter().map(|&i| c + w.vertices()[i].v()).collect();
    VertexStar::from_ring(c, &ring).ok()
}

pub fn curvature_parts(s: &VertexStar) -> CurvatureParts {
    let k = angle_deficit(s);
    let mut kp = match convex_hull_cone(s) {
        Some(cone) => angle_deficit(&cone).max(0.0),
        None => 0.0,
    };
    // a convex star is its own hull; keep K₋ from picking up rounding noise
    if k > kp && k - kp < 1e-12 {
        kp = k;
    }
    CurvatureParts {
        k_total: k,
        k_plus: kp,
        k_minus: k - kp,
    }
}

/// Interior angle of the Gauss image at normal `k`, on the left of the
/// traversal n_{k-1} → n_k → n_{k+1}.
pub fn gauss_angle(s: &VertexStar, k: usize) -> Result<f64> {
    let n = s.valence();
    let nm = s.faces[(k + n - 1) % n].normal;
    let nk = s.faces[k].normal;
    let np = s.faces[(k + 1) % n].normal;
    crate::sphere::spherical_angle(&np, &nk, &nm)
}

/// Turn of polygon `p` at vertex `i`: positive for a left turn.
pub fn turn(p: &SphericalPolygon, i: usize) -> f64 {
    let i = i as isize;
    det(&p.at(i - 1), &p.at(i), &p.at(i + 1))
}

#[derive(Serialize, Deserialize)]
struct StarJson {
    center: [f64; 3],
    ring: Vec<[f64; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    faces: Option<Vec<Vec<[f64; 3]>>>,
}

fn arr(v: &Vec3) -> [f64; 3] {
    [v.x, v.y, v.z]
}

fn vec3(a: &[f64; 3]) -> Vec3 {
    Vec3::new(a[0], a[1], a[2])
}

impl Serialize for VertexStar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let faces = if self.is_simplicial() {
            None
        } else {
            Some(self.faces.iter().map(|f| f.chain.iter().map(arr).collect()).collect())
        };
        StarJson {
            center: arr(&self.center),
            ring: self.ring().iter().map(arr).collect(),
            faces,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for VertexStar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = StarJson::deserialize(de)?;
        let c = vec3(&j.center);
        let ring: Vec<Vec3> = j.ring.iter().map(vec3).collect();
        let star = match j.faces {
            None => VertexStar::from_ring(c, &ring),
            Some(fs) => {
                if fs.len() != ring.len() {
                    return Err(D::Error::custom("faces and ring differ in length"));
                }
                let n = ring.len();
                let mut chains = Vec::with_capacity(n);
                for (k, f) in fs.iter().enumerate() {
                    let ch: Vec<Vec3> = f.iter().map(vec3).collect();
                    let ok = ch.len() >= 2
                        && (ch[0] - ring[k]).norm() <= 1e-12 * (1.0 + ring[k].norm())
                        && (ch[ch.len() - 1] - ring[(k + 1) % n]).norm() <= 1e-12 * (1.0 + ring[(k + 1) % n].norm());
                    if !ok {
                        return Err(D::Error::custom(format!(
                            "face {k} must run from ring[{k}] to ring[{}]",
                            (k + 1) % n
                        )));
                    }
                    chains.push(ch);
                }
                VertexStar::new(c, chains)
            }
        };
        star.map_err(D::Error::custom)
    }
}
