//! Critical point indices of a star or polygon with respect to a height
//! direction, and Monte Carlo recovery of curvature from them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sphere::{SphericalPolygon, UnitVec, Vec3, EPS_GEN};
use crate::star::VertexStar;

/// A height direction certified general for some star.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HeightDirection {
    pub xi: UnitVec,
    /// min over ring directions u of |⟨ξ, u⟩|
    pub generality_margin: f64,
}

impl HeightDirection {
    pub fn certify(xi: UnitVec, s: &VertexStar) -> Result<Self> {
        let m = generality_margin(&xi, s);
        if m > EPS_GEN {
            Ok(HeightDirection {
                xi,
                generality_margin: m,
            })
        } else {
            Err(Error::NotGeneral(m))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub above_index: i64,
    pub middle_count: i64,
    pub agrees: bool,
}

/// Smallest |⟨ξ, u⟩| over the unit directions u from the center to its
/// neighbors, i.e. the height gaps of the star rescaled by edge length.
pub fn generality_margin(xi: &UnitVec, s: &VertexStar) -> f64 {
    s.directions()
        .iter()
        .map(|u| u.dot(xi).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Whether every neighbor has a height different from the center's.
pub fn is_general(xi: &UnitVec, s: &VertexStar) -> (bool, f64) {
    let m = generality_margin(xi, s);
    (m > EPS_GEN, m)
}

fn require_general(xi: &UnitVec, s: &VertexStar) -> Result<()> {
    let (ok, m) = is_general(xi, s);
    if ok {
        Ok(())
    } else {
        Err(Error::NotGeneral(m))
    }
}

/// Split direction for a reflex corner that keeps clear of the level plane.
fn split_direction(s: &VertexStar, k: usize, xi: &UnitVec) -> UnitVec {
    let mut best = s.bisector(k);
    let mut gap = best.dot(xi).abs();
    for t in [1.0 / 3.0, 2.0 / 3.0, 0.25, 0.75, 0.4, 0.6] {
        if gap > 1e-3 {
            break;
        }
        let m = s.corner_direction(k, t);
        if m.dot(xi).abs() > gap {
            gap = m.dot(xi).abs();
            best = m;
        }
    }
    best
}

/// i = 1 − Σ A(e) + Σ A(f) over the fan, reflex corners split in two.
pub fn above_index(s: &VertexStar, xi: &UnitVec) -> Result<i64> {
    require_general(xi, s)?;
    let n = s.valence();
    let below: Vec<bool> = s.directions().iter().map(|u| u.dot(xi) < 0.0).collect();
    let mut sum_e = below.iter().filter(|&&b| b).count() as i64;
    let mut sum_f = 0i64;
    for k in 0..n {
        let (a, b) = (below[k], below[(k + 1) % n]);
        if s.faces()[k].is_reflex() {
            let m = split_direction(s, k, xi).dot(xi) < 0.0;
            sum_e += m as i64;
            sum_f += (a && m) as i64 + (m && b) as i64;
        } else {
            sum_f += (a && b) as i64;
        }
    }
    Ok(1 - sum_e + sum_f)
}

/// Number of face corners the level plane through the center passes
/// through. A convex corner counts once when its two arms straddle the
/// level; a reflex corner counts once when they straddle and twice when not.
pub fn middle_count(s: &VertexStar, xi: &UnitVec) -> Result<i64> {
    require_general(xi, s)?;
    let n = s.valence();
    let h: Vec<f64> = s.directions().iter().map(|u| u.dot(xi)).collect();
    let mut m = 0i64;
    for k in 0..n {
        let straddle = (h[k] > 0.0) != (h[(k + 1) % n] > 0.0);
        m += match (s.faces()[k].is_reflex(), straddle) {
            (false, true) => 1,
            (false, false) => 0,
            (true, true) => 1,
            (true, false) => 2,
        };
    }
    Ok(m)
}

pub fn middle_vertex_index(s: &VertexStar, xi: &UnitVec) -> Result<IndexReport> {
    let m = middle_count(s, xi)?;
    let a = above_index(s, xi)?;
    Ok(IndexReport {
        above_index: a,
        middle_count: m,
        agrees: 2 * a == 2 - m,
    })
}

/// Index of the cone over a spherical polygon: 1 − (sign changes of the
/// height around W) / 2.
pub fn polygon_index(w: &SphericalPolygon, xi: &UnitVec) -> Result<i64> {
    let h: Vec<f64> = w.vertices().iter().map(|u| u.dot(xi)).collect();
    let m = h.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    if m <= EPS_GEN {
        return Err(Error::NotGeneral(m));
    }
    let n = h.len();
    let changes = (0..n).filter(|&i| (h[i] > 0.0) != (h[(i + 1) % n] > 0.0)).count() as i64;
    Ok(1 - changes / 2)
}

/// A vertex on the equator of ξ must have neighbors on opposite sides.
pub fn is_admissible(xi: &UnitVec, w: &SphericalPolygon) -> bool {
    let h: Vec<f64> = w.vertices().iter().map(|u| u.dot(xi)).collect();
    let n = h.len();
    (0..n).all(|i| {
        if h[i].abs() > EPS_GEN {
            return true;
        }
        let a = h[(i + n - 1) % n];
        let b = h[(i + 1) % n];
        a.abs() > EPS_GEN && b.abs() > EPS_GEN && a * b < 0.0
    })
}

/// Uniform random point on the sphere from three normal deviates.
pub fn random_direction<R: Rng + ?Sized>(rng: &mut R) -> UnitVec {
    loop {
        let v = Vec3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        if let Ok(u) = UnitVec::from_vec(v) {
            if v.norm() > 1e-6 {
                return u;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub n_samples: u64,
    pub seed: u64,
    pub jobs: usize,
}

const CHUNK: u64 = 1 << 15;

fn chunk_sums(s: &VertexStar, seed: u64, chunk: u64, count: u64) -> (i64, i64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut sum = 0i64;
    let mut sq = 0i64;
    let mut done = 0u64;
    while done < count {
        let xi = random_direction(&mut rng);
        if let Ok(i) = above_index(s, &xi) {
            sum += i;
            sq += i * i;
            done += 1;
        }
    }
    (sum, sq)
}

/// Estimate of K(v) = ½ ∫ i(v, ξ) dξ from uniform samples of ξ.
///
/// Samples are drawn in fixed-size chunks, each from its own stream of the
/// master seed, so the result does not depend on `jobs`.
pub fn curvature_by_index_integration_jobs(s: &VertexStar, n_samples: u64, seed: u64, jobs: usize) -> McEstimate {
    let chunks = n_samples.div_ceil(CHUNK);
    let count = |c: u64| CHUNK.min(n_samples - c * CHUNK);
    let parts: Vec<(i64, i64)> = if jobs <= 1 {
        (0..chunks).map(|c| chunk_sums(s, seed, c, count(c))).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|c| chunk_sums(s, seed, c, count(c)))
                .collect()
        })
    };
    let (sum, sq) = parts.iter().fold((0i64, 0i64), |a, b| (a.0 + b.0, a.1 + b.1));
    let n = n_samples as f64;
    let mean = sum as f64 / n;
    let var = (sq as f64 / n - mean * mean).max(0.0) * n / (n - 1.0).max(1.0);
    let scale = 2.0 * std::f64::consts::PI;
    McEstimate {
        estimate: scale * mean,
        std_error: scale * (var / n).sqrt(),
        n_samples,
        seed,
        jobs: jobs.max(1),
    }
}

pub fn curvature_by_index_integration(s: &VertexStar, n_samples: u64, seed: u64) -> McEstimate {
    curvature_by_index_integration_jobs(s, n_samples, seed, 1)
}
