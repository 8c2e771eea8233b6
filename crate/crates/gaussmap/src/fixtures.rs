//! Hand-built stars, polygons and meshes with known invariants.
//!
//! Coordinates are our own; each fixture's defining property (inflection
//! counts, indices, winding values) is asserted in tests rather than taken
//! on faith.

use std::f64::consts::PI;

use crate::mesh::ClosedMesh;
use crate::sphere::{SphericalPolygon, UnitVec, Vec3, TAU};
use crate::star::VertexStar;

fn v(x: f64, y: f64, z: f64) -> Vec3 {
    Vec3::new(x, y, z)
}

fn polar(lon: f64, lat: f64) -> Vec3 {
    v(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
}

/// Corner of the cube [-1,0]³ at the origin; faces have normals +x, +y, +z.
pub fn cube_corner() -> VertexStar {
    VertexStar::from_ring(
        Vec3::zeros(),
        &[v(-1.0, 0.0, 0.0), v(0.0, -1.0, 0.0), v(0.0, 0.0, -1.0)],
    )
    .unwrap()
}

/// Vertex (1,1,1) of the regular tetrahedron with vertices (±1,±1,±1), even
/// number of minus signs.
pub fn tetrahedron_corner() -> VertexStar {
    VertexStar::from_ring(
        v(1.0, 1.0, 1.0),
        &[v(1.0, -1.0, -1.0), v(-1.0, 1.0, -1.0), v(-1.0, -1.0, 1.0)],
    )
    .unwrap()
}

/// Six coplanar triangles; zero curvature, no Gauss image.
pub fn flat_fan() -> VertexStar {
    let ring: Vec<Vec3> = [0.1, 1.0, 2.2, 3.0, 4.1, 5.3]
        .iter()
        .map(|&t: &f64| v(t.cos(), t.sin(), 0.0))
        .collect();
    VertexStar::from_ring(Vec3::zeros(), &ring).unwrap()
}

/// Simplicial saddle of valence 6 modelled on z = x² − y².
pub fn saddle() -> VertexStar {
    let ring: Vec<Vec3> = (0..6)
        .map(|k| {
            let t = (60.0 * k as f64 + 10.0).to_radians();
            v(t.cos(), t.sin(), 0.5 * (2.0 * t).cos())
        })
        .collect();
    VertexStar::from_ring(Vec3::zeros(), &ring).unwrap()
}

/// Monkey saddle: six ring vertices alternating above and below the center.
/// Heights and angles are jittered so the Gauss image has no vertex on a
/// non-incident edge.
pub fn monkey_saddle() -> VertexStar {
    let t: [f64; 6] = [7.0, 66.0, 128.0, 185.0, 247.0, 305.0];
    let h = [0.5, -0.45, 0.55, -0.5, 0.47, -0.53];
    let ring: Vec<Vec3> = (0..6)
        .map(|k| {
            let t = t[k].to_radians();
            v(t.cos(), t.sin(), h[k])
        })
        .collect();
    VertexStar::from_ring(Vec3::zeros(), &ring).unwrap()
}

/// Local maximum with a dent: the Gauss image has a positive and a negative
/// part.
pub fn dented_peak() -> VertexStar {
    let mut ring: Vec<Vec3> = (0..6)
        .map(|k| {
            let t = (60.0 * k as f64 + 5.0).to_radians();
            v(t.cos(), t.sin(), -0.5 - 0.05 * k as f64)
        })
        .collect();
    ring[0] = v(0.25, 0.03, -0.45);
    VertexStar::from_ring(Vec3::zeros(), &ring).unwrap()
}

/// Reflex face in the plane z = 0 spanning the +x side, plus two faces dipping
/// below it. The reflex face is not an inflection face.
pub fn reflex_non_inflection() -> VertexStar {
    let p = polar(-0.74 * PI, 0.0);
    let q = polar(0.76 * PI, 0.0);
    let a = v(-1.0, 0.05, -0.5);
    VertexStar::new(
        Vec3::zeros(),
        vec![vec![p, v(3.0, 0.1, 0.0), q], vec![q, a], vec![a, p]],
    )
    .unwrap()
}

/// Reflex face in the plane z = 0 whose neighbors leave on opposite sides.
pub fn reflex_inflection() -> VertexStar {
    let p = polar(-0.74 * PI, 0.0);
    let q = polar(0.76 * PI, 0.0);
    let a1 = v(-1.0, 0.35, 0.5);
    let a2 = v(-1.0, -0.3, -0.45);
    VertexStar::new(
        Vec3::zeros(),
        vec![vec![p, v(3.0, 0.1, 0.0), q], vec![q, a1], vec![a1, a2], vec![a2, p]],
    )
    .unwrap()
}

/// Two reflex faces in the planes z = 0 and y = 0, joined by two triangles.
pub fn two_reflex() -> VertexStar {
    let a1 = polar(-0.58 * PI, 0.0);
    let a2 = polar(0.62 * PI, 0.0);
    let bp = v(0.3, 0.0, 0.95);
    let bm = v(0.33, 0.0, -0.94);
    VertexStar::new(
        Vec3::zeros(),
        vec![
            vec![a1, v(3.0, 0.2, 0.0), a2],
            vec![a2, bp],
            vec![bp, v(-3.0, 0.0, 0.1), bm],
            vec![bm, a1],
        ],
    )
    .unwrap()
}

/// All non-degenerate fixture stars.
pub fn all_stars() -> Vec<VertexStar> {
    vec![
        cube_corner(),
        tetrahedron_corner(),
        saddle(),
        monkey_saddle(),
        dented_peak(),
        reflex_non_inflection(),
        reflex_inflection(),
        two_reflex(),
    ]
}

fn cap_curve(n: usize, turns: f64, lobes: f64, theta0: f64, eps: f64) -> SphericalPolygon {
    let pts: Vec<UnitVec> = (0..n)
        .map(|k| {
            let phi = turns * TAU * k as f64 / n as f64;
            let th = theta0 * (1.0 + eps * (lobes * phi).cos());
            UnitVec::new(th.sin() * phi.cos(), th.sin() * phi.sin(), th.cos()).unwrap()
        })
        .collect();
    SphericalPolygon::new(pts).unwrap()
}

/// Locally convex polygon winding twice around the north pole, with three
/// self-crossings.
pub fn doubled_polygon() -> SphericalPolygon {
    cap_curve(14, 2.0, 1.5, 0.5, 0.2)
}

/// Locally convex polygon winding three times around the north pole, with
/// eight self-crossings.
pub fn triple_polygon() -> SphericalPolygon {
    cap_curve(26, 3.0, 4.0 / 3.0, 0.5, 0.2)
}

/// Quadrilateral with two lobes and one crossing.
pub fn figure_eight() -> SphericalPolygon {
    SphericalPolygon::from_points(&[
        [1.0, 0.3, 0.2],
        [-1.0, -0.3, 0.25],
        [-1.0, 0.35, 0.2],
        [1.0, -0.3, 0.15],
    ])
    .unwrap()
}

/// Deterministic noise in [-0.5, 0.5).
fn jitter(k: usize) -> f64 {
    let x = (k as f64 * 12.9898 + 78.233).sin() * 43_758.545_3;
    x - x.floor() - 0.5
}

/// Regular tetrahedron, outward oriented.
pub fn tetrahedron() -> ClosedMesh {
    ClosedMesh::new(
        vec![
            v(1.0, 1.0, 1.0),
            v(1.0, -1.0, -1.0),
            v(-1.0, 1.0, -1.0),
            v(-1.0, -1.0, 1.0),
        ],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
    .unwrap()
}

/// Torus of revolution sampled on an n × n grid, radii 1 and 0.4, with small
/// radial jitter so no two adjacent triangles are coplanar.
pub fn grid_torus(n: usize) -> ClosedMesh {
    let mut verts = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let u = TAU * i as f64 / n as f64;
            let w = TAU * j as f64 / n as f64;
            let r = 0.4 * (1.0 + 0.08 * jitter(i * n + j));
            verts.push(v(
                (1.0 + r * w.cos()) * u.cos(),
                (1.0 + r * w.cos()) * u.sin(),
                r * w.sin(),
            ));
        }
    }
    let id = |i: usize, j: usize| (i % n) * n + (j % n);
    let mut tris = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    ClosedMesh::new(verts, tris).unwrap()
}

/// Icosahedron subdivided `levels` times, vertices pushed to radius
/// 1 + amplitude · noise.
pub fn icosphere(levels: usize, amplitude: f64) -> ClosedMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0),
        (1.0, t, 0.0),
        (-1.0, -t, 0.0),
        (1.0, -t, 0.0),
        (0.0, -1.0, t),
        (0.0, 1.0, t),
        (0.0, -1.0, -t),
        (0.0, 1.0, -t),
        (t, 0.0, -1.0),
        (t, 0.0, 1.0),
        (-t, 0.0, -1.0),
        (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| v(x, y, z).normalize())
    .collect();
    let mut tris: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..levels {
        let mut mid = std::collections::HashMap::new();
        let mut split = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) / 2.0).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * tris.len());
        for [a, b, c] in tris {
            let ab = split(a, b, &mut verts);
            let bc = split(b, c, &mut verts);
            let ca = split(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        tris = next;
    }
    for (k, p) in verts.iter_mut().enumerate() {
        *p *= 1.0 + amplitude * jitter(k);
    }
    ClosedMesh::new(verts, tris).unwrap()
}

/// Császár's seven-vertex embedded torus; every pair of vertices is an edge.
pub fn csaszar_torus() -> ClosedMesh {
    ClosedMesh::new(
        vec![
            v(3.0, -3.0, 0.0),
            v(-3.0, 3.0, 0.0),
            v(-3.0, -3.0, 1.0),
            v(3.0, 3.0, 1.0),
            v(-1.0, -2.0, 3.0),
            v(1.0, 2.0, 3.0),
            v(0.0, 0.0, 15.0),
        ],
        vec![
            [3, 5, 2],
            [3, 2, 4],
            [5, 4, 1],
            [5, 1, 2],
            [4, 2, 6],
            [4, 6, 1],
            [2, 1, 0],
            [2, 0, 6],
            [1, 6, 3],
            [1, 3, 0],
            [6, 0, 5],
            [6, 5, 3],
            [0, 3, 4],
            [0, 4, 5],
        ],
    )
    .unwrap()
}

/// A height direction for which the Császár torus has exactly three critical
/// points: maximum 6, minimum 1, and a monkey saddle at 5.
pub fn csaszar_three_cp_direction() -> UnitVec {
    UnitVec::new(-0.09, -0.45, 0.89).unwrap()
}
