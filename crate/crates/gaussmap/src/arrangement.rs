//! Arrangement of a closed spherical polygon, winding numbers of its
//! complementary faces, layers and the shape of Gauss images.

use std::collections::VecDeque;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sphere::{
    crossing_count, det, self_crossings, tangent_frame, Arc, SphericalPolygon, UnitVec, Vec3, EPS_GEN, TAU,
};
use crate::star::{angle_deficit, gauss_image, inflection_faces, project_to_sphere, VertexStar};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct Node {
    pub point: UnitVec,
    /// polygon vertex index, `None` for crossing points
    pub vertex: Option<usize>,
}

/// Piece of a polygon edge between two consecutive nodes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub edge: usize,
    pub normal: UnitVec,
    pub length: f64,
    /// face on the left and on the right of the traversal direction
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrFace {
    /// half-edges on the boundary, face on their left; half-edge 2s runs
    /// along segment s, 2s + 1 against it
    pub boundary: Vec<usize>,
    pub area: f64,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    nodes: Vec<Node>,
    segments: Vec<Segment>,
    faces: Vec<ArrFace>,
    /// outgoing half-edges at each node, counterclockwise
    around: Vec<Vec<usize>>,
    seed_point: UnitVec,
}

fn ccw_angle(from: &Vec3, to: &Vec3, axis: &Vec3) -> f64 {
    let a = from.cross(to).dot(axis).atan2(from.dot(to));
    if a < 0.0 {
        a + TAU
    } else {
        a
    }
}

impl Arrangement {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }
    pub fn faces(&self) -> &[ArrFace] {
        &self.faces
    }
    pub fn face_areas(&self) -> Vec<f64> {
        self.faces.iter().map(|f| f.area).collect()
    }

    /// Σ face areas − 4π.
    pub fn area_residual(&self) -> f64 {
        self.faces.iter().map(|f| f.area).sum::<f64>() - 4.0 * PI
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.segments.len() as i64 + self.faces.len() as i64
    }

    fn origin(&self, h: usize) -> usize {
        let s = &self.segments[h / 2];
        if h.is_multiple_of(2) {
            s.from
        } else {
            s.to
        }
    }

    /// Unit tangent of half-edge `h` at its origin.
    fn out_dir(&self, h: usize) -> Vec3 {
        let s = &self.segments[h / 2];
        let n = s.normal.v();
        if h.is_multiple_of(2) {
            n.cross(&self.nodes[s.from].point.v())
        } else {
            -n.cross(&self.nodes[s.to].point.v())
        }
    }

    fn face_left_of(&self, h: usize) -> usize {
        let s = &self.segments[h / 2];
        if h.is_multiple_of(2) {
            s.left
        } else {
            s.right
        }
    }

    /// Face containing `x`, found from the nearest point of the curve.
    pub fn locate(&self, x: &UnitVec) -> usize {
        let mut best = (f64::INFINITY, 0usize);
        for (i, s) in self.segments.iter().enumerate() {
            let arc = Arc::new(self.nodes[s.from].point, self.nodes[s.to].point);
            let d = match arc {
                Ok(a) => a.distance_to(x),
                Err(_) => self.nodes[s.from].point.angle_to(x),
            };
            if d < best.0 {
                best = (d, i);
            }
        }
        let s = &self.segments[best.1];
        let a = self.nodes[s.from].point;
        let b = self.nodes[s.to].point;
        let n = s.normal.v();
        let off = x.v().dot(&n);
        let proj = x.v() - n * off;
        let interior = proj.norm() > 1e-12 && {
            let q = proj / proj.norm();
            let ta = a.v().cross(&q).dot(&n);
            let tb = q.cross(&b.v()).dot(&n);
            ta > 1e-12 && tb > 1e-12 && q.dot(&(a.v() + b.v())) > 0.0
        };
        if interior && off.abs() > 0.0 {
            return if off > 0.0 { s.left } else { s.right };
        }
        let node = if x.angle_to(&a) <= x.angle_to(&b) { s.from } else { s.to };
        self.sector_face(node, x)
    }

    fn sector_face(&self, node: usize, x: &UnitVec) -> usize {
        let p = self.nodes[node].point.v();
        let mut dir = x.v() - p * p.dot(&x.v());
        if dir.norm() < 1e-15 {
            dir = self.out_dir(self.around[node][0]);
        }
        let (e1, e2) = tangent_frame(&self.nodes[node].point);
        let ang = |v: &Vec3| {
            let a = v.dot(&e2).atan2(v.dot(&e1));
            if a < 0.0 {
                a + TAU
            } else {
                a
            }
        };
        let ax = ang(&dir);
        // last outgoing half-edge at or before x counterclockwise
        let hs = &self.around[node];
        let mut pick = *hs.last().unwrap();
        for &h in hs {
            if ang(&self.out_dir(h)) <= ax {
                pick = h;
            }
        }
        self.face_left_of(pick)
    }

    /// A point strictly inside `face`, just left of a boundary segment.
    pub fn sample_point(&self, face: usize) -> UnitVec {
        let f = &self.faces[face];
        let h = *f
            .boundary
            .iter()
            .max_by(|a, b| {
                self.segments[**a / 2]
                    .length
                    .partial_cmp(&self.segments[**b / 2].length)
                    .unwrap()
            })
            .unwrap();
        let s = &self.segments[h / 2];
        let mid = UnitVec::from_vec(self.nodes[s.from].point.v() + self.nodes[s.to].point.v())
            .expect("segment shorter than π");
        let side = if h % 2 == 0 { 1.0 } else { -1.0 };
        let delta = 1e-7_f64.max(1e-4 * s.length).min(1e-3);
        UnitVec::from_vec(mid.v() + s.normal.v() * side * delta).unwrap()
    }
}

fn check_vertices_off_edges(wp: &SphericalPolygon) -> Result<()> {
    let n = wp.len();
    for j in 0..n {
        let e = wp.edge(j);
        for i in 0..n {
            if i == j || i == (j + 1) % n {
                continue;
            }
            let p = wp.vertices()[i];
            if p.dot(&e.normal()).abs() <= EPS_GEN && e.spans(&p, EPS_GEN) {
                return Err(Error::DegenerateVertexOnEdge(i));
            }
        }
    }
    Ok(())
}

/// Planar graph on S² traced by `wp`, with its faces.
pub fn build_arrangement(wp: &SphericalPolygon) -> Result<Arrangement> {
    check_vertices_off_edges(wp)?;
    let n = wp.len();
    let crossings = self_crossings(wp)?;
    let mut nodes: Vec<Node> = wp
        .vertices()
        .iter()
        .enumerate()
        .map(|(i, p)| Node {
            point: *p,
            vertex: Some(i),
        })
        .collect();
    let mut cuts: Vec<Vec<(f64, usize)>> = (0..n).map(|i| vec![(0.0, i)]).collect();
    for c in &crossings {
        let id = nodes.len();
        nodes.push(Node {
            point: c.point,
            vertex: None,
        });
        cuts[c.i].push((c.t_i, id));
        cuts[c.j].push((c.t_j, id));
    }
    let mut segments = Vec::new();
    for (e, list) in cuts.iter_mut().enumerate() {
        let arc = wp.edge(e);
        list.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        list.push((arc.length(), (e + 1) % n));
        for w in list.windows(2) {
            segments.push(Segment {
                from: w[0].1,
                to: w[1].1,
                edge: e,
                normal: arc.normal(),
                length: w[1].0 - w[0].0,
                left: usize::MAX,
                right: usize::MAX,
            });
        }
    }
    let mut arr = Arrangement {
        nodes,
        segments,
        faces: Vec::new(),
        around: Vec::new(),
        seed_point: UnitVec::Z,
    };
    let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); arr.nodes.len()];
    for h in 0..2 * arr.segments.len() {
        let o = arr.origin(h);
        let (e1, e2) = tangent_frame(&arr.nodes[o].point);
        let d = arr.out_dir(h);
        let mut a = d.dot(&e2).atan2(d.dot(&e1));
        if a < 0.0 {
            a += TAU;
        }
        around[o].push((a, h));
    }
    arr.around = around
        .into_iter()
        .map(|mut v| {
            v.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            v.into_iter().map(|x| x.1).collect()
        })
        .collect();
    // position of each half-edge in its origin's rotation
    let mut pos = vec![0usize; 2 * arr.segments.len()];
    for hs in &arr.around {
        for (k, &h) in hs.iter().enumerate() {
            pos[h] = k;
        }
    }
    let next = |arr: &Arrangement, h: usize| {
        let t = h ^ 1;
        let v = arr.origin(t);
        let hs = &arr.around[v];
        hs[(pos[t] + hs.len() - 1) % hs.len()]
    };
    let mut face_of = vec![usize::MAX; 2 * arr.segments.len()];
    for start in 0..2 * arr.segments.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let fid = arr.faces.len();
        let mut boundary = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = fid;
            boundary.push(h);
            h = next(&arr, h);
            if h == start {
                break;
            }
            if boundary.len() > 2 * arr.segments.len() {
                return Err(Error::InconsistentCycle);
            }
        }
        let m = boundary.len();
        let mut sum = 0.0;
        for k in 0..m {
            let hin = boundary[k];
            let hout = boundary[(k + 1) % m];
            let v = arr.nodes[arr.origin(hout)].point.v();
            sum += ccw_angle(&arr.out_dir(hout), &arr.out_dir(hin ^ 1), &v);
        }
        let area = sum - (m as f64 - 2.0) * PI;
        arr.faces.push(ArrFace { boundary, area });
    }
    for (s, seg) in arr.segments.iter_mut().enumerate() {
        seg.left = face_of[2 * s];
        seg.right = face_of[2 * s + 1];
    }
    let mut c = Vec3::zeros();
    for e in wp.edges() {
        c += (e.a().v() + e.b().v()).normalize() * e.length();
    }
    arr.seed_point = UnitVec::from_vec(-c).unwrap_or(-wp.vertices()[0]);
    Ok(arr)
}

/// Winding numbers up to a constant: zero on the face holding the point
/// opposite the curve's length-weighted centroid, and one less on the right
/// of every segment than on its left.
pub fn relative_winding(arr: &Arrangement) -> Result<Vec<i64>> {
    let nf = arr.faces.len();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nf];
    for s in &arr.segments {
        adj[s.right].push((s.left, 1));
        adj[s.left].push((s.right, -1));
    }
    let seed = arr.locate(&arr.seed_point);
    let mut w = vec![i64::MIN; nf];
    w[seed] = 0;
    let mut q = VecDeque::from([seed]);
    while let Some(f) = q.pop_front() {
        for &(g, d) in &adj[f] {
            if w[g] == i64::MIN {
                w[g] = w[f] + d;
                q.push_back(g);
            } else if w[g] != w[f] + d {
                return Err(Error::InconsistentCycle);
            }
        }
    }
    if w.contains(&i64::MIN) {
        return Err(Error::InconsistentCycle);
    }
    Ok(w)
}

/// Weighted turn count of a Gauss image. At a vertex whose face has a convex
/// corner a right turn counts 1. At a reflex corner a left turn (an
/// inflection face) counts 1 and a right turn (a non-inflection face)
/// counts 2.
pub fn right_turn_count(wp: &SphericalPolygon, reflex: &[bool]) -> Result<i64> {
    let n = wp.len();
    let mut count = 0i64;
    for i in 0..n {
        let d = det(&wp.at(i as isize - 1), &wp.vertices()[i], &wp.at(i as isize + 1));
        if d.abs() <= EPS_GEN {
            return Err(Error::StraightVertex(i));
        }
        let r = reflex.get(i).copied().unwrap_or(false);
        count += match (r, d < 0.0) {
            (false, true) => 1,
            (false, false) => 0,
            (true, true) => 2,
            (true, false) => 1,
        };
    }
    Ok(count)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LayerProfile {
    /// absolute winding number per arrangement face
    pub winding: Vec<i64>,
    /// components of {w ≥ k} and {w ≤ −k} for k = 1, 2, …
    pub c_plus_k: Vec<usize>,
    pub c_minus_k: Vec<usize>,
    pub c_plus: i64,
    pub c_minus: i64,
    /// Σₖ χ({w ≥ k}) and Σₖ χ({w ≤ −k}); equal to C₊ and C₋ when every
    /// layer is a disk
    pub chi_plus: i64,
    pub chi_minus: i64,
    pub i_turns: i64,
    pub c_parity: i64,
    pub algebraic_area: f64,
    pub shift: i64,
}

impl LayerProfile {
    /// I + 2C₊ − 2C₋ − 2 − 2c.
    pub fn shape_residual(&self) -> i64 {
        self.i_turns + 2 * self.c_plus - 2 * self.c_minus - 2 - 2 * self.c_parity
    }

    /// I + 2χ₊ − 2χ₋ − 2 − 2c, which vanishes for every normalized profile.
    pub fn euler_shape_residual(&self) -> i64 {
        self.i_turns + 2 * self.chi_plus - 2 * self.chi_minus - 2 - 2 * self.c_parity
    }

    /// Whether every layer is a disk, so components and Euler
    /// characteristics agree level by level.
    pub fn layers_are_disks(&self) -> bool {
        self.c_plus == self.chi_plus && self.c_minus == self.chi_minus
    }
}

/// Euler characteristic of the closure of a union of faces. Closures of
/// super- and sublevel sets never pinch at a crossing, so this is also the
/// Euler characteristic of the open set.
fn closure_euler(arr: &Arrangement, member: &[bool]) -> i64 {
    let mut node_in = vec![false; arr.nodes.len()];
    let mut edges = 0i64;
    for s in &arr.segments {
        if member[s.left] || member[s.right] {
            edges += 1;
            node_in[s.from] = true;
            node_in[s.to] = true;
        }
    }
    let faces = member.iter().filter(|&&m| m).count() as i64;
    let nodes = node_in.iter().filter(|&&m| m).count() as i64;
    // a member face with no boundary is the whole sphere
    if edges == 0 {
        return 2 * faces.min(1);
    }
    nodes - edges + faces
}

/// (Σₖ χ({w ≥ k}), Σₖ χ({w ≤ −k})).
pub fn layer_euler(arr: &Arrangement, winding: &[i64]) -> (i64, i64) {
    let max = winding.iter().copied().max().unwrap_or(0);
    let min = winding.iter().copied().min().unwrap_or(0);
    let plus = (1..=max)
        .map(|k| closure_euler(arr, &winding.iter().map(|&w| w >= k).collect::<Vec<_>>()))
        .sum();
    let minus = (1..=-min)
        .map(|k| closure_euler(arr, &winding.iter().map(|&w| w <= -k).collect::<Vec<_>>()))
        .sum();
    (plus, minus)
}

fn components(arr: &Arrangement, member: &[bool]) -> usize {
    let nf = member.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for s in &arr.segments {
        if member[s.left] && member[s.right] {
            let (a, b) = (find(&mut parent, s.left), find(&mut parent, s.right));
            parent[a] = b;
        }
    }
    (0..nf).filter(|&f| member[f] && find(&mut parent, f) == f).count()
}

/// Per-level component counts of the positive and negative layers. Faces
/// count as connected only across a shared segment.
pub fn layers(arr: &Arrangement, winding: &[i64]) -> (Vec<usize>, Vec<usize>) {
    let max = winding.iter().copied().max().unwrap_or(0);
    let min = winding.iter().copied().min().unwrap_or(0);
    let plus = (1..=max)
        .map(|k| components(arr, &winding.iter().map(|&w| w >= k).collect::<Vec<_>>()))
        .collect();
    let minus = (1..=-min)
        .map(|k| components(arr, &winding.iter().map(|&w| w <= -k).collect::<Vec<_>>()))
        .collect();
    (plus, minus)
}

/// Shift the relative winding so that I + 2χ₊ − 2χ₋ = 2 + 2c. Each unit of
/// shift adds 4 to the left side, so the shift is unique.
///
/// Counting layers by Euler characteristic rather than by components keeps
/// the identity true when a layer is an annulus, which happens for some
/// immersed polygons; for disk layers the two counts coincide.
pub fn normalize_winding(arr: &Arrangement, relative: &[i64], i_turns: i64, c_parity: i64) -> Result<LayerProfile> {
    let max = relative.iter().copied().max().unwrap_or(0);
    let min = relative.iter().copied().min().unwrap_or(0);
    let lo = -max - i_turns.abs() - 2;
    let hi = -min + 4;
    for s in lo..=hi {
        let w: Vec<i64> = relative.iter().map(|r| r + s).collect();
        let (chi_plus, chi_minus) = layer_euler(arr, &w);
        if i_turns + 2 * chi_plus - 2 * chi_minus != 2 + 2 * c_parity {
            continue;
        }
        let (cp, cm) = layers(arr, &w);
        let area = w.iter().zip(&arr.faces).map(|(&k, f)| k as f64 * f.area).sum();
        return Ok(LayerProfile {
            winding: w,
            c_plus: cp.iter().sum::<usize>() as i64,
            c_minus: cm.iter().sum::<usize>() as i64,
            c_plus_k: cp,
            c_minus_k: cm,
            chi_plus,
            chi_minus,
            i_turns,
            c_parity,
            algebraic_area: area,
            shift: s,
        });
    }
    Err(Error::NoConsistentShift)
}

/// The polygon W whose polar is `wp`. It is unique up to the antipodal map:
/// w_{i+1} is ±(w′_i × w′_{i+1}), with the sign flipping exactly at the
/// right turns of W′.
pub fn polar_preimage(wp: &SphericalPolygon) -> Result<SphericalPolygon> {
    let n = wp.len();
    let v = wp.vertices();
    let mut out = Vec::with_capacity(n);
    let mut sign = 1.0;
    for i in 0..n {
        let a = v[i];
        let b = v[(i + 1) % n];
        out.push(UnitVec::from_vec(a.cross(&b) * sign).map_err(|_| Error::DegenerateEdge(i))?);
        let d = det(&a, &b, &v[(i + 2) % n]);
        if d.abs() <= EPS_GEN {
            return Err(Error::StraightVertex((i + 1) % n));
        }
        if d < 0.0 {
            sign = -sign;
        }
    }
    // an odd number of right turns closes up with the wrong sign
    if sign < 0.0 {
        return Err(Error::NoConsistentShift);
    }
    // out[i] is w_{i+1}
    out.rotate_right(1);
    SphericalPolygon::new(out)
}

/// Layer profile of `wp` read as the polar polygon of some W with convex
/// corners only.
pub fn polygon_profile(wp: &SphericalPolygon) -> Result<(Arrangement, LayerProfile)> {
    let w = polar_preimage(wp)?;
    let c = crossing_count(&w)? as i64 % 2;
    let i_turns = right_turn_count(wp, &[])?;
    let arr = build_arrangement(wp)?;
    let rel = relative_winding(&arr)?;
    let p = normalize_winding(&arr, &rel, i_turns, c)?;
    Ok((arr, p))
}

/// Layer profile of the Gauss image of a star, with reflex bookkeeping.
pub fn star_profile(s: &VertexStar) -> Result<(Arrangement, LayerProfile)> {
    let g = gauss_image(s)?;
    let w = project_to_sphere(s)?;
    let c = crossing_count(&w)? as i64 % 2;
    let i_turns = inflection_faces(s)?.weighted;
    let arr = build_arrangement(&g)?;
    let rel = relative_winding(&arr)?;
    let p = normalize_winding(&arr, &rel, i_turns, c)?;
    Ok((arr, p))
}

/// ∫ w(W′, ξ) dξ with winding numbers normalized by the shape formula.
pub fn algebraic_area(wp: &SphericalPolygon) -> Result<f64> {
    Ok(polygon_profile(wp)?.1.algebraic_area)
}

/// (∫ max(w, 0), ∫ min(w, 0)): the areas of the positive and negative layers
/// counted with multiplicity.
pub fn layer_areas(arr: &Arrangement, profile: &LayerProfile) -> (f64, f64) {
    let mut pos = 0.0;
    let mut neg = 0.0;
    for (&w, f) in profile.winding.iter().zip(&arr.faces) {
        if w > 0 {
            pos += w as f64 * f.area;
        } else {
            neg += w as f64 * f.area;
        }
    }
    (pos, neg)
}

/// Absolute winding number of `wp` around `xi`.
pub fn winding_at(arr: &Arrangement, profile: &LayerProfile, xi: &UnitVec) -> i64 {
    profile.winding[arr.locate(xi)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriangleVariant {
    ReflexIsInflection,
    ReflexNotInflection,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "shape")]
pub enum Shape {
    ConvexPolygon,
    PseudoQuadrilateral {
        corners: Vec<usize>,
    },
    PseudoTriangle {
        variant: TriangleVariant,
        corners: Vec<usize>,
    },
    PseudoDigon {
        corners: Vec<usize>,
    },
    Unclassified {
        reason: String,
    },
}

/// Shape of a simple Gauss image. Corners are the faces whose normals are
/// vertices of interior angle below π.
pub fn classify_shape(s: &VertexStar) -> Result<Shape> {
    let k = angle_deficit(s);
    if k.abs() <= 1e-9 {
        return Ok(Shape::Unclassified {
            reason: "curvature is zero".into(),
        });
    }
    let g = gauss_image(s)?;
    if crossing_count(&g)? > 0 {
        return Err(Error::SelfIntersectingGaussImage);
    }
    let n = g.len();
    let turns: Vec<f64> = (0..n)
        .map(|i| det(&g.at(i as isize - 1), &g.vertices()[i], &g.at(i as isize + 1)))
        .collect();
    if k > 0.0 {
        if turns.iter().all(|&t| t > 0.0) {
            return Ok(Shape::ConvexPolygon);
        }
        return Ok(Shape::Unclassified {
            reason: "positive curvature with a non-convex Gauss image".into(),
        });
    }
    let corners: Vec<usize> = (0..n).filter(|&i| turns[i] < 0.0).collect();
    let reflex: Vec<usize> = (0..n).filter(|&i| s.faces()[i].is_reflex()).collect();
    let infl = inflection_faces(s)?;
    Ok(match (corners.len(), reflex.len()) {
        (4, 0) => Shape::PseudoQuadrilateral { corners },
        (3, 1) => {
            let variant = if infl.is_inflection[reflex[0]] {
                TriangleVariant::ReflexIsInflection
            } else {
                TriangleVariant::ReflexNotInflection
            };
            Shape::PseudoTriangle { variant, corners }
        }
        (2, _) => Shape::PseudoDigon { corners },
        (c, r) => Shape::Unclassified {
            reason: format!("{c} corners with {r} reflex faces"),
        },
    })
}

#[derive(Serialize)]
struct SegmentDump {
    from: usize,
    to: usize,
    edge: usize,
    normal: [f64; 3],
    left: usize,
    right: usize,
}

#[derive(Serialize)]
struct FaceDump {
    boundary: Vec<i64>,
    area: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    winding: Option<i64>,
}

#[derive(Serialize)]
struct ArrangementDump {
    nodes: Vec<[f64; 3]>,
    segments: Vec<SegmentDump>,
    faces: Vec<FaceDump>,
}

/// Plot-ready description of an arrangement. Face boundaries list segment
/// indices, negative (−s − 1) where the face lies to the segment's right.
pub fn arrangement_json(arr: &Arrangement, profile: Option<&LayerProfile>) -> serde_json::Value {
    let dump = ArrangementDump {
        nodes: arr.nodes.iter().map(|n| n.point.to_array()).collect(),
        segments: arr
            .segments
            .iter()
            .map(|s| SegmentDump {
                from: s.from,
                to: s.to,
                edge: s.edge,
                normal: s.normal.to_array(),
                left: s.left,
                right: s.right,
            })
            .collect(),
        faces: arr
            .faces
            .iter()
            .enumerate()
            .map(|(i, f)| FaceDump {
                boundary: f
                    .boundary
                    .iter()
                    .map(|&h| {
                        if h % 2 == 0 {
                            (h / 2) as i64
                        } else {
                            -((h / 2) as i64) - 1
                        }
                    })
                    .collect(),
                area: f.area,
                winding: profile.map(|p| p.winding[i]),
            })
            .collect(),
    };
    serde_json::to_value(dump).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::star::curvature_parts;

    fn octant() -> SphericalPolygon {
        SphericalPolygon::from_points(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]).unwrap()
    }

    /// Signed change of the winding number along the minor arc p → q.
    fn crossing_oracle(wp: &SphericalPolygon, p: &UnitVec, q: &UnitVec) -> i64 {
        let path = Arc::new(*p, *q).unwrap();
        let mut d = 0;
        for e in wp.edges() {
            if !crate::sphere::arc_intersection(&path, &e).unwrap().is_empty() {
                d += if p.dot(&e.normal()) > 0.0 { -1 } else { 1 };
            }
        }
        d
    }

    #[test]
    fn simple_polygon_has_two_faces() {
        let arr = build_arrangement(&octant()).unwrap();
        assert_eq!(arr.faces().len(), 2);
        assert_eq!(arr.euler_characteristic(), 2);
        let mut areas = arr.face_areas();
        areas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((areas[0] - PI / 2.0).abs() < 1e-12);
        assert!((areas[1] - 3.5 * PI).abs() < 1e-12);
        let w = relative_winding(&arr).unwrap();
        let s = &arr.segments()[0];
        assert_eq!(w[s.left], w[s.right] + 1);
        assert!((algebraic_area(&octant()).unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn crossings_add_faces() {
        for wp in [
            fixtures::figure_eight(),
            fixtures::doubled_polygon(),
            fixtures::triple_polygon(),
        ] {
            let arr = build_arrangement(&wp).unwrap();
            let c = crossing_count(&wp).unwrap();
            assert_eq!(arr.faces().len(), c + 2);
            assert_eq!(arr.euler_characteristic(), 2);
            assert!(arr.area_residual().abs() < 1e-8);
        }
    }

    #[test]
    fn relative_winding_matches_path_crossings() {
        for wp in [
            fixtures::figure_eight(),
            fixtures::doubled_polygon(),
            fixtures::triple_polygon(),
        ] {
            let arr = build_arrangement(&wp).unwrap();
            let w = relative_winding(&arr).unwrap();
            let pts: Vec<UnitVec> = (0..arr.faces().len()).map(|f| arr.sample_point(f)).collect();
            for f in 0..pts.len() {
                assert_eq!(arr.locate(&pts[f]), f);
                for g in 0..pts.len() {
                    if pts[f].cross(&pts[g]).norm() < 1e-6 || pts[f].dot(&pts[g]) < -0.5 {
                        continue;
                    }
                    assert_eq!(w[g] - w[f], crossing_oracle(&wp, &pts[f], &pts[g]));
                }
            }
        }
    }

    #[test]
    fn doubled_polygon_layers() {
        let wp = fixtures::doubled_polygon();
        let (arr, p) = polygon_profile(&wp).unwrap();
        assert_eq!(crossing_count(&polar_preimage(&wp).unwrap()).unwrap(), 3);
        assert_eq!((p.i_turns, p.c_parity, p.c_plus, p.c_minus), (0, 1, 2, 0));
        assert_eq!(p.c_plus_k, vec![1, 1]);
        assert_eq!(winding_at(&arr, &p, &UnitVec::Z), 2);
        assert_eq!(winding_at(&arr, &p, &-UnitVec::Z), 0);
        let mut w = p.winding.clone();
        w.sort();
        w.dedup();
        assert_eq!(w, vec![0, 1, 2]);
        assert_eq!(p.shape_residual(), 0);
    }

    #[test]
    fn triple_polygon_layers() {
        let (arr, p) = polygon_profile(&fixtures::triple_polygon()).unwrap();
        assert_eq!(p.c_parity, 0);
        assert_eq!(winding_at(&arr, &p, &UnitVec::Z), 2);
        assert_eq!(winding_at(&arr, &p, &-UnitVec::Z), -1);
        let mut w = p.winding.clone();
        w.sort();
        w.dedup();
        assert_eq!(w, vec![-1, 0, 1, 2]);
    }

    #[test]
    fn star_profiles() {
        let (arr, p) = star_profile(&fixtures::saddle()).unwrap();
        assert_eq!((p.c_plus, p.c_minus, p.i_turns, p.c_parity), (0, 1, 4, 0));
        assert_eq!(arr.faces().len(), 2);
        assert_eq!(p.winding.iter().min(), Some(&-1));
        assert_eq!(p.winding.iter().max(), Some(&0));

        let (arr, p) = star_profile(&fixtures::monkey_saddle()).unwrap();
        assert_eq!(p.c_minus_k, vec![1, 1]);
        assert_eq!(p.c_plus, 0);
        assert_eq!(p.i_turns, 6);
        assert_eq!(winding_at(&arr, &p, &UnitVec::Z), -2);
        assert_eq!(winding_at(&arr, &p, &-UnitVec::Z), 0);

        let (_, p) = star_profile(&fixtures::dented_peak()).unwrap();
        assert_eq!((p.c_plus, p.c_minus), (1, 1));
    }

    #[test]
    fn egregium_and_parts_on_fixtures() {
        for s in fixtures::all_stars() {
            let (arr, p) = star_profile(&s).unwrap();
            assert_eq!(p.shape_residual(), 0);
            assert!((p.algebraic_area - angle_deficit(&s)).abs() < 1e-8);
            assert!(p.c_plus <= 1);
            let parts = curvature_parts(&s);
            let (pos, neg) = layer_areas(&arr, &p);
            assert!((pos - parts.k_plus).abs() < 1e-8, "{pos} {parts:?}");
            assert!((neg - parts.k_minus).abs() < 1e-8, "{neg} {parts:?}");
        }
    }

    #[test]
    fn shapes() {
        assert_eq!(classify_shape(&fixtures::cube_corner()).unwrap(), Shape::ConvexPolygon);
        let infl = inflection_faces(&fixtures::saddle()).unwrap().faces();
        assert_eq!(
            classify_shape(&fixtures::saddle()).unwrap(),
            Shape::PseudoQuadrilateral { corners: infl }
        );
        assert!(matches!(
            classify_shape(&fixtures::reflex_inflection()).unwrap(),
            Shape::PseudoTriangle {
                variant: TriangleVariant::ReflexIsInflection,
                ..
            }
        ));
        assert!(matches!(
            classify_shape(&fixtures::reflex_non_inflection()).unwrap(),
            Shape::PseudoTriangle {
                variant: TriangleVariant::ReflexNotInflection,
                ..
            }
        ));
        let two = fixtures::two_reflex();
        assert!(matches!(classify_shape(&two).unwrap(), Shape::PseudoDigon { .. }));
        let infl = inflection_faces(&two).unwrap();
        for k in 0..two.valence() {
            if two.faces()[k].is_reflex() {
                assert!(infl.is_inflection[k]);
            }
        }
        assert_eq!(
            classify_shape(&fixtures::dented_peak()),
            Err(Error::SelfIntersectingGaussImage)
        );
        assert!(matches!(
            classify_shape(&fixtures::flat_fan()).unwrap(),
            Shape::Unclassified { .. }
        ));
    }

    #[test]
    fn right_turns_weighted_by_reflex_flags() {
        for s in fixtures::all_stars() {
            let g = gauss_image(&s).unwrap();
            let i = right_turn_count(&g, &s.reflex_flags()).unwrap();
            assert_eq!(i, inflection_faces(&s).unwrap().weighted);
        }
    }

    #[test]
    fn preimage_of_polar_is_original_up_to_sign() {
        let w = fixtures::figure_eight();
        let wp = crate::sphere::polar_polygon(&w).unwrap();
        let back = polar_preimage(&wp).unwrap();
        let same = back
            .vertices()
            .iter()
            .zip(w.vertices())
            .all(|(a, b)| a.angle_to(b) < 1e-12);
        let anti = back
            .vertices()
            .iter()
            .zip(w.vertices())
            .all(|(a, b)| a.angle_to(&-*b) < 1e-12);
        assert!(same || anti);
    }

    #[test]
    fn dump_has_all_parts() {
        let (arr, p) = polygon_profile(&fixtures::figure_eight()).unwrap();
        let j = arrangement_json(&arr, Some(&p));
        assert_eq!(j["faces"].as_array().unwrap().len(), 3);
        assert_eq!(j["nodes"].as_array().unwrap().len(), 5);
        assert!(j["faces"][0]["winding"].is_i64());
    }
}
