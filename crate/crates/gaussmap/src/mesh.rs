//! Closed oriented triangle meshes: OFF input, Euler characteristic,
//! Gauss–Bonnet, index and degree sums, critical point census.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{classify_shape, Shape};
use crate::degree::polar_degree;
use crate::error::{Error, Result};
use crate::index::{above_index, random_direction};
use crate::sphere::{UnitVec, Vec3, EPS_GEN, TAU};
use crate::star::{angle_deficit, curvature_parts, gauss_image, VertexStar};

/// Redraws allowed when looking for a direction general for every vertex.
pub const XI_RETRIES: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ClosedMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    /// ring of each vertex, counterclockwise seen from outside
    rings: Vec<Vec<usize>>,
}

impl ClosedMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            if tri.iter().any(|&i| i >= nv) {
                return Err(Error::ParseError(format!("triangle {t} has an index out of range")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::NonManifold(format!("triangle {t} repeats a vertex")));
            }
            for k in 0..3 {
                let e = (tri[k], tri[(k + 1) % 3]);
                if directed.insert(e, t).is_some() {
                    let undirected = triangles
                        .iter()
                        .filter(|s| {
                            (0..3).any(|j| {
                                let f = (s[j], s[(j + 1) % 3]);
                                f == e || f == (e.1, e.0)
                            })
                        })
                        .count();
                    return Err(if undirected > 2 {
                        Error::NonManifold(format!("edge ({}, {}) has {undirected} triangles", e.0, e.1))
                    } else {
                        Error::InconsistentOrientation(format!("edge ({}, {}) used twice in one direction", e.0, e.1))
                    });
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                return Err(Error::NotClosed(format!("edge ({a}, {b}) has one triangle")));
            }
        }
        // ring of v: (v, a, b) is followed by (v, b, c)
        let mut next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); nv];
        for tri in &triangles {
            for k in 0..3 {
                let v = tri[k];
                next[v].insert(tri[(k + 1) % 3], tri[(k + 2) % 3]);
            }
        }
        let mut rings = Vec::with_capacity(nv);
        for (v, nx) in next.iter().enumerate() {
            if nx.is_empty() {
                return Err(Error::NonManifold(format!("vertex {v} is isolated")));
            }
            let start = *nx.keys().min().unwrap();
            let mut ring = vec![start];
            let mut cur = nx[&start];
            while cur != start {
                ring.push(cur);
                cur = *nx
                    .get(&cur)
                    .ok_or_else(|| Error::NotClosed(format!("link of vertex {v} is open")))?;
                if ring.len() > nx.len() {
                    return Err(Error::NonManifold(format!("link of vertex {v} is not a cycle")));
                }
            }
            if ring.len() != nx.len() {
                return Err(Error::NonManifold(format!("link of vertex {v} has several cycles")));
            }
            rings.push(ring);
        }
        let mesh = ClosedMesh {
            vertices,
            triangles,
            rings,
        };
        for (t, tri) in mesh.triangles.iter().enumerate() {
            if mesh.triangle_normal(t).norm() <= EPS_GEN {
                return Err(Error::NonManifold(format!("triangle {t} = {tri:?} is degenerate")));
            }
        }
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }
    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }
    pub fn edge_count(&self) -> usize {
        3 * self.triangles.len() / 2
    }
    pub fn face_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    fn triangle_normal(&self, t: usize) -> Vec3 {
        let [a, b, c] = self.triangles[t];
        (self.vertices[b] - self.vertices[a]).cross(&(self.vertices[c] - self.vertices[a]))
    }

    /// Mesh translated and scaled so its bounding box has largest side 1.
    pub fn unit_scaled(&self) -> ClosedMesh {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.vertices {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        let c = (lo + hi) / 2.0;
        let s = (hi - lo).max();
        let vertices = self.vertices.iter().map(|p| (p - c) / s).collect();
        ClosedMesh {
            vertices,
            triangles: self.triangles.clone(),
            rings: self.rings.clone(),
        }
    }

    /// Ring neighbors of `v`, counterclockwise seen from outside.
    pub fn ring(&self, v: usize) -> &[usize] {
        &self.rings[v]
    }

    pub fn star(&self, v: usize) -> Result<VertexStar> {
        let ring: Vec<Vec3> = self.rings[v].iter().map(|&u| self.vertices[u]).collect();
        VertexStar::from_ring(self.vertices[v], &ring)
    }

    pub fn stars(&self) -> Result<Vec<VertexStar>> {
        (0..self.vertex_count()).map(|v| self.star(v)).collect()
    }

    /// Directions of all edges, each once; ξ is general for the mesh iff it is
    /// orthogonal to none of them.
    pub fn edge_directions(&self) -> Vec<UnitVec> {
        let mut out = Vec::with_capacity(self.edge_count());
        for tri in &self.triangles {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if a < b {
                    out.push(UnitVec::from_vec(self.vertices[b] - self.vertices[a]).expect("nondegenerate edge"));
                }
            }
        }
        out
    }

    /// min over edges of |⟨ξ, u⟩| for unit edge directions u.
    pub fn generality_margin(&self, xi: &UnitVec) -> f64 {
        self.edge_directions()
            .iter()
            .map(|u| u.dot(xi).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Parse ASCII OFF: "OFF", counts "V F E", vertex lines, "3 i j k" faces.
pub fn parse_off(text: &str) -> Result<ClosedMesh> {
    let mut lines = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::ParseError("empty file".into()))?;
    let mut counts_line = if header == "OFF" {
        lines
            .next()
            .ok_or_else(|| Error::ParseError("missing counts line".into()))?
            .to_string()
    } else if let Some(rest) = header.strip_prefix("OFF") {
        rest.trim().to_string()
    } else {
        return Err(Error::ParseError(format!("expected OFF header, found {header:?}")));
    };
    if counts_line.is_empty() {
        counts_line = lines
            .next()
            .ok_or_else(|| Error::ParseError("missing counts line".into()))?
            .to_string();
    }
    let num = |s: &str, what: &str| -> Result<usize> {
        s.parse::<usize>()
            .map_err(|_| Error::ParseError(format!("bad {what}: {s:?}")))
    };
    let counts: Vec<&str> = counts_line.split_whitespace().collect();
    if counts.len() < 2 {
        return Err(Error::ParseError(format!("bad counts line {counts_line:?}")));
    }
    let nv = num(counts[0], "vertex count")?;
    let nf = num(counts[1], "face count")?;
    let mut vertices = Vec::with_capacity(nv);
    for i in 0..nv {
        let l = lines
            .next()
            .ok_or_else(|| Error::ParseError(format!("missing vertex {i}")))?;
        let c: Vec<f64> = l
            .split_whitespace()
            .take(3)
            .map(|x| {
                x.parse::<f64>()
                    .map_err(|_| Error::ParseError(format!("bad coordinate {x:?} in vertex {i}")))
            })
            .collect::<Result<_>>()?;
        if c.len() != 3 || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::ParseError(format!("vertex {i} needs three finite coordinates")));
        }
        vertices.push(Vec3::new(c[0], c[1], c[2]));
    }
    let mut triangles = Vec::with_capacity(nf);
    for f in 0..nf {
        let l = lines
            .next()
            .ok_or_else(|| Error::ParseError(format!("missing face {f}")))?;
        let idx: Vec<usize> = l
            .split_whitespace()
            .map(|x| num(x, "face index"))
            .collect::<Result<_>>()?;
        if idx.first() != Some(&3) || idx.len() < 4 {
            return Err(Error::ParseError(format!("face {f} is not a triangle")));
        }
        triangles.push([idx[1], idx[2], idx[3]]);
    }
    ClosedMesh::new(vertices, triangles)
}

pub fn load_off(path: &Path) -> Result<ClosedMesh> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::ParseError(format!("{}: {e}", path.display())))?;
    parse_off(&text)
}

pub fn to_off(m: &ClosedMesh) -> String {
    let mut s = format!("OFF\n{} {} 0\n", m.vertex_count(), m.face_count());
    for p in &m.vertices {
        s.push_str(&format!("{} {} {}\n", p.x, p.y, p.z));
    }
    for t in &m.triangles {
        s.push_str(&format!("3 {} {} {}\n", t[0], t[1], t[2]));
    }
    s
}

/// Σ K(v) − 2πχ.
pub fn gauss_bonnet_check(m: &ClosedMesh) -> Result<f64> {
    let total: f64 = m.stars()?.iter().map(angle_deficit).sum();
    Ok(total - TAU * m.euler_characteristic() as f64)
}

fn require_general(m: &ClosedMesh, xi: &UnitVec) -> Result<()> {
    let g = m.generality_margin(xi);
    if g <= EPS_GEN {
        Err(Error::NotGeneral(g))
    } else {
        Ok(())
    }
}

/// A direction general for every vertex of `m`, or NotGeneral after
/// [`XI_RETRIES`] redraws.
pub fn general_direction<R: Rng + ?Sized>(m: &ClosedMesh, rng: &mut R) -> Result<UnitVec> {
    let mut worst = 0.0;
    for _ in 0..XI_RETRIES {
        let xi = random_direction(rng);
        let g = m.generality_margin(&xi);
        if g > EPS_GEN {
            return Ok(xi);
        }
        worst = g;
    }
    Err(Error::NotGeneral(worst))
}

pub fn vertex_index(m: &ClosedMesh, v: usize, xi: &UnitVec) -> Result<i64> {
    above_index(&m.star(v)?, xi)
}

/// Normal degree of the star of `v`, read from its Gauss image.
pub fn vertex_degree(m: &ClosedMesh, v: usize, xi: &UnitVec) -> Result<i64> {
    let g = gauss_image(&m.star(v)?)?;
    Ok(polar_degree(&g, xi, 0.0).0)
}

/// (Σ i(v, ξ), χ).
pub fn index_sum_check(m: &ClosedMesh, xi: &UnitVec) -> Result<(i64, i64)> {
    require_general(m, xi)?;
    let mut sum = 0;
    for v in 0..m.vertex_count() {
        sum += vertex_index(m, v, xi)?;
    }
    Ok((sum, m.euler_characteristic()))
}

/// Σ d(v, ξ).
pub fn degree_sum_check(m: &ClosedMesh, xi: &UnitVec) -> Result<i64> {
    require_general(m, xi)?;
    let mut sum = 0;
    for v in 0..m.vertex_count() {
        sum += vertex_degree(m, v, xi)?;
    }
    Ok(sum)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Maximum,
    Minimum,
    Saddle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPoint {
    pub vertex: usize,
    pub index: i64,
    pub degree: i64,
    pub kind: CriticalKind,
}

/// Vertices with nonzero index for the height ⟨ξ, ·⟩.
pub fn critical_point_census(m: &ClosedMesh, xi: &UnitVec) -> Result<Vec<CriticalPoint>> {
    require_general(m, xi)?;
    let mut out = Vec::new();
    for v in 0..m.vertex_count() {
        let i = vertex_index(m, v, xi)?;
        if i == 0 {
            continue;
        }
        let h = m.vertices[v].dot(&xi.v());
        let kind = if i < 0 {
            CriticalKind::Saddle
        } else if m.rings[v].iter().all(|&u| m.vertices[u].dot(&xi.v()) < h) {
            CriticalKind::Maximum
        } else {
            CriticalKind::Minimum
        };
        out.push(CriticalPoint {
            vertex: v,
            index: i,
            degree: vertex_degree(m, v, xi)?,
            kind,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeCpVerdict {
    pub chi: i64,
    pub maximum: CriticalPoint,
    pub minimum: CriticalPoint,
    pub middle: CriticalPoint,
}

/// With exactly three critical points, the third one v₀ has d(v₀) = 0 and
/// i(v₀) = χ − 2, while the maximum and minimum have degrees +1 and −1.
pub fn three_cp_analysis(m: &ClosedMesh, xi: &UnitVec) -> Result<ThreeCpVerdict> {
    let cps = critical_point_census(m, xi)?;
    if cps.len() != 3 {
        return Err(Error::NotThreeCritical(cps.len()));
    }
    let chi = m.euler_characteristic();
    let find = |k: CriticalKind| cps.iter().copied().find(|c| c.kind == k);
    let (Some(maximum), Some(minimum)) = (find(CriticalKind::Maximum), find(CriticalKind::Minimum)) else {
        return Err(Error::IdentityViolation(
            "three critical points without both extrema".into(),
        ));
    };
    let middle = cps
        .iter()
        .copied()
        .find(|c| c.vertex != maximum.vertex && c.vertex != minimum.vertex)
        .expect("three distinct vertices");
    if chi == 2 {
        return Err(Error::IdentityViolation(
            "a polyhedral sphere has no height function with exactly three critical points".into(),
        ));
    }
    let v = ThreeCpVerdict {
        chi,
        maximum,
        minimum,
        middle,
    };
    if middle.degree != 0 || middle.index != chi - 2 || maximum.degree != 1 || minimum.degree != -1 {
        return Err(Error::IdentityViolation(format!(
            "three critical point conclusions fail: {v:?}"
        )));
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexRecord {
    pub vertex: usize,
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "K_plus")]
    pub k_plus: f64,
    #[serde(rename = "K_minus")]
    pub k_minus: f64,
    pub shape: Shape,
    pub index: Vec<i64>,
    pub degree: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeshReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub chi: i64,
    #[serde(rename = "total_K")]
    pub total_curvature: f64,
    pub gauss_bonnet_residual: f64,
    pub xis: Vec<UnitVec>,
    pub generality_margins: Vec<f64>,
    pub index_sums: Vec<i64>,
    pub degree_sums: Vec<i64>,
    pub vertices: Vec<VertexRecord>,
}

fn vertex_record(m: &ClosedMesh, v: usize, xis: &[UnitVec]) -> Result<VertexRecord> {
    let s = m.star(v)?;
    let parts = curvature_parts(&s);
    let shape = match classify_shape(&s) {
        Ok(sh) => sh,
        Err(e) => Shape::Unclassified { reason: e.to_string() },
    };
    let g = gauss_image(&s)?;
    let mut index = Vec::with_capacity(xis.len());
    let mut degree = Vec::with_capacity(xis.len());
    for xi in xis {
        index.push(above_index(&s, xi)?);
        degree.push(polar_degree(&g, xi, 0.0).0);
    }
    Ok(VertexRecord {
        vertex: v,
        k: parts.k_total,
        k_plus: parts.k_plus,
        k_minus: parts.k_minus,
        shape,
        index,
        degree,
    })
}

/// Per-vertex curvature, shape, index and degree for each probed ξ. The mesh
/// is rescaled to a unit bounding box first; records come in vertex order
/// whatever the number of jobs.
pub fn analyze_mesh(m: &ClosedMesh, xis: &[UnitVec], jobs: usize) -> Result<MeshReport> {
    let m = m.unit_scaled();
    for xi in xis {
        require_general(&m, xi)?;
    }
    let per_vertex = |v: usize| vertex_record(&m, v, xis);
    let vertices: Vec<VertexRecord> = if jobs <= 1 {
        (0..m.vertex_count()).map(per_vertex).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..m.vertex_count())
                .into_par_iter()
                .map(per_vertex)
                .collect::<Result<_>>()
        })?
    };
    let total: f64 = vertices.iter().map(|r| r.k).sum();
    let chi = m.euler_characteristic();
    let index_sums = (0..xis.len())
        .map(|j| vertices.iter().map(|r| r.index[j]).sum())
        .collect();
    let degree_sums = (0..xis.len())
        .map(|j| vertices.iter().map(|r| r.degree[j]).sum())
        .collect();
    Ok(MeshReport {
        vertex_count: m.vertex_count(),
        edge_count: m.edge_count(),
        face_count: m.face_count(),
        chi,
        total_curvature: total,
        gauss_bonnet_residual: total - TAU * chi as f64,
        xis: xis.to_vec(),
        generality_margins: xis.iter().map(|xi| m.generality_margin(xi)).collect(),
        index_sums,
        degree_sums,
        vertices,
    })
}

fn segment_hits_triangle(p: &Vec3, q: &Vec3, t: [&Vec3; 3], skip: Option<&Vec3>) -> bool {
    let d = q - p;
    let e1 = t[1] - t[0];
    let e2 = t[2] - t[0];
    let h = d.cross(&e2);
    let a = e1.dot(&h);
    if a.abs() < 1e-14 {
        return false;
    }
    let s = p - t[0];
    let u = s.dot(&h) / a;
    let qv = s.cross(&e1);
    let v = d.dot(&qv) / a;
    let w = e2.dot(&qv) / a;
    let tol = 1e-9;
    if u < -tol || v < -tol || u + v > 1.0 + tol || w < -tol || w > 1.0 + tol {
        return false;
    }
    let x = p + d * w;
    match skip {
        Some(c) => (x - c).norm() > 1e-7,
        None => true,
    }
}

/// Whether two faces not sharing an edge intersect anywhere except a
/// common vertex. Assumes no four vertices are coplanar.
pub fn triangles_intersect(m: &ClosedMesh, s: usize, t: usize) -> bool {
    let a = m.triangles[s];
    let b = m.triangles[t];
    let shared: Vec<usize> = a.iter().copied().filter(|v| b.contains(v)).collect();
    if shared.len() >= 2 {
        return false;
    }
    let skip = shared.first().map(|&v| &m.vertices[v]);
    let tri = |x: [usize; 3]| [&m.vertices[x[0]], &m.vertices[x[1]], &m.vertices[x[2]]];
    for (x, y) in [(a, b), (b, a)] {
        for k in 0..3 {
            let (p, q) = (&m.vertices[x[k]], &m.vertices[x[(k + 1) % 3]]);
            if segment_hits_triangle(p, q, tri(y), skip) {
                return true;
            }
        }
    }
    false
}

/// Brute-force embeddedness: no two faces meet beyond their shared parts.
pub fn is_embedded(m: &ClosedMesh) -> bool {
    let f = m.face_count();
    (0..f).all(|s| (s + 1..f).all(|t| !triangles_intersect(m, s, t)))
}

/// Signed volume enclosed by the mesh; positive for outward orientation.
pub fn signed_volume(m: &ClosedMesh) -> f64 {
    m.triangles
        .iter()
        .map(|t| m.vertices[t[0]].dot(&m.vertices[t[1]].cross(&m.vertices[t[2]])) / 6.0)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn euler_characteristics() {
        assert_eq!(fixtures::tetrahedron().euler_characteristic(), 2);
        assert_eq!(fixtures::grid_torus(8).euler_characteristic(), 0);
        assert_eq!(fixtures::icosphere(2, 0.0).euler_characteristic(), 2);
        assert_eq!(fixtures::csaszar_torus().euler_characteristic(), 0);
    }

    #[test]
    fn gauss_bonnet_on_fixtures() {
        for m in [
            fixtures::tetrahedron(),
            fixtures::grid_torus(8),
            fixtures::icosphere(1, 0.2),
            fixtures::csaszar_torus(),
        ] {
            assert!(gauss_bonnet_check(&m).unwrap().abs() < 1e-9);
        }
    }

    #[test]
    fn index_and_degree_sums() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for m in [
            fixtures::tetrahedron(),
            fixtures::grid_torus(8),
            fixtures::icosphere(1, 0.3),
            fixtures::csaszar_torus(),
        ] {
            for _ in 0..20 {
                let xi = general_direction(&m, &mut rng).unwrap();
                let (sum, chi) = index_sum_check(&m, &xi).unwrap();
                assert_eq!(sum, chi);
                assert_eq!(degree_sum_check(&m, &xi).unwrap(), 0);
            }
        }
    }

    #[test]
    fn csaszar_is_embedded_with_three_critical_points() {
        let m = fixtures::csaszar_torus();
        assert!(is_embedded(&m));
        assert!(signed_volume(&m) > 0.0);
        let v = three_cp_analysis(&m, &fixtures::csaszar_three_cp_direction()).unwrap();
        assert_eq!((v.maximum.vertex, v.minimum.vertex, v.middle.vertex), (6, 1, 5));
        assert_eq!((v.middle.index, v.middle.degree), (-2, 0));
        let s = m.star(5).unwrap();
        let r = crate::degree::star_degree(&s, &fixtures::csaszar_three_cp_direction()).unwrap();
        assert_eq!((r.w_plus, r.w_minus), (-1, -1));
        assert_eq!(
            crate::index::middle_count(&s, &fixtures::csaszar_three_cp_direction()).unwrap(),
            6
        );
    }

    #[test]
    fn convex_sphere_never_has_three_critical_points() {
        let m = fixtures::icosphere(1, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let xi = general_direction(&m, &mut rng).unwrap();
            assert!(matches!(three_cp_analysis(&m, &xi), Err(Error::NotThreeCritical(2))));
        }
    }

    #[test]
    fn crossed_faces_are_detected() {
        let m = fixtures::tetrahedron();
        assert!(is_embedded(&m));
        let mut verts = m.vertices().to_vec();
        // pull vertex 0 through the opposite face
        verts[0] = Vec3::new(-1.0, -1.0, -1.0) * 0.9 + Vec3::new(-0.2, 0.1, 0.05);
        let bad = ClosedMesh::new(verts, m.triangles().to_vec()).unwrap();
        assert!(signed_volume(&bad) < 0.0 || !is_embedded(&bad));
    }

    #[test]
    fn off_round_trip_and_errors() {
        let m = fixtures::csaszar_torus();
        let back = parse_off(&to_off(&m)).unwrap();
        assert_eq!(back, m);
        assert!(matches!(parse_off("PLY\n"), Err(Error::ParseError(_))));
        let open = "OFF\n4 2 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 2 3\n";
        assert!(matches!(parse_off(open), Err(Error::NotClosed(_))));
        let flipped = "OFF\n4 4 0\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 3 2\n";
        assert!(matches!(parse_off(flipped), Err(Error::InconsistentOrientation(_))));
    }

    #[test]
    fn report_is_job_independent() {
        let m = fixtures::icosphere(1, 0.25);
        let xis = [
            UnitVec::new(0.3, 0.2, 0.9).unwrap(),
            UnitVec::new(-0.5, 0.7, 0.1).unwrap(),
        ];
        let a = analyze_mesh(&m, &xis, 1).unwrap();
        let b = analyze_mesh(&m, &xis, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.index_sums, vec![2, 2]);
        assert_eq!(a.degree_sums, vec![0, 0]);
        assert!(a.gauss_bonnet_residual.abs() < 1e-9);
    }
}
