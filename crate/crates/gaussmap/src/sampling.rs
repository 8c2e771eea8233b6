//! Seeded random inputs: rotations, embedded and reflex stars, simple and
//! immersed spherical polygons.

use nalgebra::{Quaternion, Rotation3, UnitQuaternion};
use rand::{Rng, RngExt};
use rand_distr::{Distribution, StandardNormal};

use crate::arrangement::build_arrangement;
use crate::index::random_direction;
use crate::sphere::{crossing_count, det, polar_polygon, self_crossings, SphericalPolygon, UnitVec, Vec3, TAU};
use crate::star::{gauss_image, inflection_faces, project_to_sphere, VertexStar};

/// Uniformly distributed rotation.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation3<f64> {
    loop {
        let q = Quaternion::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        if q.norm() > 1e-6 {
            return UnitQuaternion::from_quaternion(q).to_rotation_matrix();
        }
    }
}

/// Smallest |det| over all vertex triples, a margin for general position.
pub fn general_position_margin(w: &SphericalPolygon) -> f64 {
    let v = w.vertices();
    let n = v.len();
    let mut m = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                m = m.min(det(&v[i], &v[j], &v[k]).abs());
            }
        }
    }
    m
}

fn crossings_clear(w: &SphericalPolygon, margin: f64) -> bool {
    let Ok(cs) = self_crossings(w) else { return false };
    let v = w.vertices();
    let n = v.len();
    cs.iter().all(|c| {
        [(c.i, c.t_i), (c.j, c.t_j)].iter().all(|&(e, t)| {
            let len = v[e].angle_to(&v[(e + 1) % n]);
            t >= margin.sqrt() && len - t >= margin.sqrt()
        })
    })
}

/// W′ in general position, crossings clear of vertices, arrangement healthy.
fn polar_conditioned(wp: &SphericalPolygon, margin: f64) -> bool {
    general_position_margin(wp) >= margin
        && crossings_clear(wp, margin)
        && build_arrangement(wp).is_ok_and(|a| a.area_residual().abs() < 1e-9)
}

/// W and W′ in general position with crossings clear of vertices.
fn well_conditioned(w: &SphericalPolygon, margin: f64) -> bool {
    general_position_margin(w) >= margin
        && crossings_clear(w, margin)
        && polar_polygon(w).is_ok_and(|wp| polar_conditioned(&wp, margin))
}

const MARGIN: f64 = 1e-6;

/// Random closed polygon, generally self-intersecting: a walk with steps of
/// 0.3 to 2.5 radians and random headings.
pub fn random_immersed_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SphericalPolygon {
    loop {
        let mut pts = vec![random_direction(rng)];
        let mut heading = random_direction(rng);
        while pts.len() < n {
            let p = *pts.last().unwrap();
            let t = heading.v() - p.v() * p.dot(&heading);
            if t.norm() < 1e-3 {
                heading = random_direction(rng);
                continue;
            }
            let t = t / t.norm();
            let step = rng.random_range(0.3..2.5);
            let q = UnitVec::from_vec(p.v() * f64::cos(step) + t * f64::sin(step)).unwrap();
            pts.push(q);
            heading = random_direction(rng);
        }
        let Ok(w) = SphericalPolygon::new(pts) else { continue };
        if well_conditioned(&w, MARGIN) {
            return w;
        }
    }
}

fn gnomonic(points: &[(f64, f64)], scale: f64, rot: &Rotation3<f64>) -> Option<SphericalPolygon> {
    let pts: Vec<UnitVec> = points
        .iter()
        .map(|&(x, y)| {
            UnitVec::from_vec(Vec3::new(x * scale, y * scale, 1.0))
                .unwrap()
                .rotate(rot)
        })
        .collect();
    SphericalPolygon::new(pts).ok()
}

fn seg_cross(a: (f64, f64), b: (f64, f64), c: (f64, f64), d: (f64, f64)) -> bool {
    let o = |p: (f64, f64), q: (f64, f64), r: (f64, f64)| (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0);
    (o(a, b, c) > 0.0) != (o(a, b, d) > 0.0) && (o(c, d, a) > 0.0) != (o(c, d, b) > 0.0)
}

/// Simple planar polygon on random points, untangled by 2-opt moves.
fn untangled<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<(f64, f64)> {
    let mut p: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    'outer: loop {
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if seg_cross(p[i], p[i + 1], p[j], p[(j + 1) % n]) {
                    p[i + 1..=j].reverse();
                    continue 'outer;
                }
            }
        }
        return p;
    }
}

/// Random simple spherical polygon with `n` vertices: a planar 2-opt
/// polygon, a wave around a pole, or a convex cap, centrally projected and
/// rotated at random.
pub fn random_simple_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SphericalPolygon {
    loop {
        let rot = random_rotation(rng);
        let kind = rng.random_range(0..3);
        let w = match kind {
            0 => {
                let p = untangled(rng, n);
                gnomonic(&p, rng.random_range(0.5..3.0), &rot)
            }
            1 => {
                let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
                t.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let pts: Vec<UnitVec> = t
                    .iter()
                    .map(|&a| {
                        let h: f64 = rng.random_range(-1.2..1.2);
                        UnitVec::from_vec(Vec3::new(a.cos(), a.sin(), h)).unwrap().rotate(&rot)
                    })
                    .collect();
                SphericalPolygon::new(pts).ok()
            }
            _ => {
                let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..TAU)).collect();
                t.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let rad = rng.random_range(0.2..2.0);
                let p: Vec<(f64, f64)> = t.iter().map(|a| (rad * a.cos(), rad * a.sin())).collect();
                gnomonic(&p, 1.0, &rot)
            }
        };
        let Some(w) = w else { continue };
        if rng.random_bool(0.5) {
            let w = w.reversed();
            if crossing_count(&w).is_ok_and(|c| c == 0) && well_conditioned(&w, MARGIN) {
                return w;
            }
        } else if crossing_count(&w).is_ok_and(|c| c == 0) && well_conditioned(&w, MARGIN) {
            return w;
        }
    }
}

fn star_ok(s: &VertexStar) -> bool {
    // split reflex corners put three vertices of W on one great circle, so
    // only its crossings are checked
    inflection_faces(s).is_ok()
        && gauss_image(s).is_ok_and(|g| polar_conditioned(&g, MARGIN))
        && project_to_sphere(s).is_ok_and(|w| crossings_clear(&w, MARGIN))
}

/// Random embedded simplicial star of the given valence: the cone over a
/// random simple spherical polygon with random edge lengths.
pub fn random_embedded_star<R: Rng + ?Sized>(rng: &mut R, valence: usize) -> VertexStar {
    loop {
        let w = random_simple_polygon(rng, valence);
        let center = Vec3::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        let ring: Vec<Vec3> = w
            .vertices()
            .iter()
            .map(|u| center + u.v() * rng.random_range(0.3..2.0))
            .collect();
        if let Ok(s) = VertexStar::from_ring(center, &ring) {
            if star_ok(&s) {
                return s;
            }
        }
    }
}

/// Random star with one reflex face: a planar face sweeping more than π,
/// closed by triangles whose outer vertices alternate around its plane.
pub fn random_reflex_star<R: Rng + ?Sized>(rng: &mut R) -> VertexStar {
    loop {
        let a = rng.random_range(0.55..0.85) * std::f64::consts::PI;
        let b = rng.random_range(0.55..0.85) * std::f64::consts::PI;
        let p = Vec3::new((-a).cos(), (-a).sin(), 0.0);
        let q = Vec3::new(b.cos(), b.sin(), 0.0);
        let far = Vec3::new(3.0, rng.random_range(-0.3..0.3), 0.0);
        let k = rng.random_range(1..5);
        let mut t: Vec<f64> = (0..k).map(|_| rng.random_range(b..TAU - a)).collect();
        t.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let back: Vec<Vec3> = t
            .iter()
            .map(|&phi| {
                let h: f64 = rng.random_range(0.1..0.8) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                Vec3::new(phi.cos(), phi.sin(), h) * rng.random_range(0.5..1.5)
            })
            .collect();
        let mut chains = vec![vec![p, far, q]];
        let mut prev = q;
        for x in &back {
            chains.push(vec![prev, *x]);
            prev = *x;
        }
        chains.push(vec![prev, p]);
        let rot = random_rotation(rng);
        let Ok(s) = VertexStar::new(Vec3::zeros(), chains) else {
            continue;
        };
        let Ok(s) = s.rotated(&rot) else { continue };
        if s.has_reflex() && star_ok(&s) {
            return s;
        }
    }
}

/// General direction for `w` with margin at least `margin`.
pub fn general_direction<R: Rng + ?Sized>(rng: &mut R, w: &SphericalPolygon, margin: f64) -> UnitVec {
    loop {
        let xi = random_direction(rng);
        if w.vertices().iter().all(|u| u.dot(&xi).abs() > margin) {
            return xi;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 4..10 {
            let w = random_simple_polygon(&mut rng, n);
            assert_eq!(w.len(), n);
            assert_eq!(crossing_count(&w).unwrap(), 0);
            let w = random_immersed_polygon(&mut rng, n);
            assert!(w.is_general_position());
        }
        let s = random_embedded_star(&mut rng, 7);
        assert_eq!(s.valence(), 7);
        let s = random_reflex_star(&mut rng);
        assert!(s.has_reflex());
    }

    #[test]
    fn rotations_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let r = random_rotation(&mut rng);
            assert!((r.matrix().determinant() - 1.0).abs() < 1e-12);
        }
    }
}
