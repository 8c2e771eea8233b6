//! Normal degree d(W, ξ): signed crossings of W′ with a half meridian from
//! ξ to −ξ, and its identities with winding numbers and the index.

use serde::Serialize;

use crate::arrangement::{
    build_arrangement, normalize_winding, relative_winding, right_turn_count, star_profile, winding_at,
};
use crate::error::{Error, Result};
use crate::index::polygon_index;
use crate::sphere::{crossing_count, polar_polygon, tangent_frame, SphericalPolygon, UnitVec, EPS_GEN};
use crate::star::{project_to_sphere, VertexStar};

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeReport {
    pub degree: i64,
    /// longitude of the half meridian used, in the frame of `tangent_frame(ξ)`
    pub gamma_longitude: f64,
    pub index: i64,
    pub w_plus: i64,
    pub w_minus: i64,
    pub c_parity: i64,
}

fn require_general(w: &SphericalPolygon, xi: &UnitVec) -> Result<()> {
    let m = w
        .vertices()
        .iter()
        .map(|u| u.dot(xi).abs())
        .fold(f64::INFINITY, f64::min);
    if m <= EPS_GEN {
        Err(Error::NotGeneral(m))
    } else {
        Ok(())
    }
}

/// Signed crossing count of `wp` with the half meridian at `longitude`.
/// Returns `None` if a vertex of `wp` sits on that meridian.
fn meridian_crossings(wp: &SphericalPolygon, xi: &UnitVec, longitude: f64) -> Option<i64> {
    let (e1, e2) = tangent_frame(xi);
    let t = e1 * longitude.cos() + e2 * longitude.sin();
    let m = xi.v().cross(&t);
    let v = wp.vertices();
    if v.iter()
        .any(|p| p.v().dot(&m).abs() <= EPS_GEN && p.v().dot(&t) > -EPS_GEN)
    {
        return None;
    }
    let n = v.len();
    let mut d = 0i64;
    for i in 0..n {
        let (a, b) = (v[i].v(), v[(i + 1) % n].v());
        let (ha, hb) = (a.dot(&m), b.dot(&m));
        if (ha > 0.0) == (hb > 0.0) {
            continue;
        }
        let s = ha / (ha - hb);
        let p = a + (b - a) * s;
        if p.dot(&t) > 0.0 {
            d += if a.cross(&b).dot(&xi.v()) > 0.0 { 1 } else { -1 };
        }
    }
    Some(d)
}

/// Degree of a polar polygon read off a vertex-free half meridian near the
/// requested longitude.
pub fn polar_degree(wp: &SphericalPolygon, xi: &UnitVec, longitude: f64) -> (i64, f64) {
    let mut lon = longitude;
    loop {
        if let Some(d) = meridian_crossings(wp, xi, lon) {
            return (d, lon);
        }
        lon += GOLDEN_ANGLE;
    }
}

/// d(W, ξ) = Σ sign⟨w′_i × w′_{i+1}, ξ⟩ over edges of W′ meeting γ.
pub fn normal_degree(w: &SphericalPolygon, xi: &UnitVec, gamma_longitude: f64) -> Result<i64> {
    require_general(w, xi)?;
    let wp = polar_polygon(w)?;
    Ok(polar_degree(&wp, xi, gamma_longitude).0)
}

/// Whether every listed longitude yields the same degree.
pub fn degree_independence_check(w: &SphericalPolygon, xi: &UnitVec, longitudes: &[f64]) -> bool {
    let ds: Vec<Result<i64>> = longitudes.iter().map(|&l| normal_degree(w, xi, l)).collect();
    ds.iter().all(|d| d.is_ok() && *d == ds[0])
}

fn check(report: &DegreeReport, simple: bool) -> Result<()> {
    let r = report;
    if r.degree != r.w_plus - r.w_minus {
        return Err(Error::IdentityViolation(format!(
            "d = w(ξ) − w(−ξ): {} ≠ {} − {}",
            r.degree, r.w_plus, r.w_minus
        )));
    }
    if r.c_parity + r.index != r.w_plus + r.w_minus {
        return Err(Error::IdentityViolation(format!(
            "c + i = w(ξ) + w(−ξ): {} + {} ≠ {} + {}",
            r.c_parity, r.index, r.w_plus, r.w_minus
        )));
    }
    // d ≡ i + c (mod 2); for an even number of self-crossings d − i is even
    if (r.degree - r.index - r.c_parity) % 2 != 0 {
        return Err(Error::IdentityViolation(format!(
            "d ≡ i + c mod 2: d = {}, i = {}, c = {}",
            r.degree, r.index, r.c_parity
        )));
    }
    if simple && r.degree.abs() > r.index.abs() {
        return Err(Error::IdentityViolation(format!(
            "|d| ≤ |i|: d = {}, i = {}",
            r.degree, r.index
        )));
    }
    Ok(())
}

/// Degree, index and winding numbers of a polygon W at ξ, with the identities
/// between them verified.
pub fn degree_identities(w: &SphericalPolygon, xi: &UnitVec) -> Result<DegreeReport> {
    require_general(w, xi)?;
    let wp = polar_polygon(w)?;
    let (degree, lon) = polar_degree(&wp, xi, 0.0);
    let c = crossing_count(w)? as i64;
    let arr = build_arrangement(&wp)?;
    let rel = relative_winding(&arr)?;
    let profile = normalize_winding(&arr, &rel, right_turn_count(&wp, &[])?, c % 2)?;
    let report = DegreeReport {
        degree,
        gamma_longitude: lon,
        index: polygon_index(w, xi)?,
        w_plus: winding_at(&arr, &profile, xi),
        w_minus: winding_at(&arr, &profile, &-*xi),
        c_parity: c % 2,
    };
    check(&report, c == 0)?;
    Ok(report)
}

/// Same report for a vertex star, read from its Gauss image.
pub fn star_degree(s: &VertexStar, xi: &UnitVec) -> Result<DegreeReport> {
    let w = project_to_sphere(s)?;
    require_general(&w, xi)?;
    let (arr, profile) = star_profile(s)?;
    let g = crate::star::gauss_image(s)?;
    let (degree, lon) = polar_degree(&g, xi, 0.0);
    let report = DegreeReport {
        degree,
        gamma_longitude: lon,
        index: polygon_index(&w, xi)?,
        w_plus: winding_at(&arr, &profile, xi),
        w_minus: winding_at(&arr, &profile, &-*xi),
        c_parity: profile.c_parity,
    };
    check(&report, profile.c_parity == 0 && crossing_count(&w)? == 0)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::index::{above_index, random_direction};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn convex_corner_has_degree_one_inside() {
        let s = fixtures::cube_corner();
        let xi = UnitVec::new(1.0, 1.0, 1.0).unwrap();
        let w = project_to_sphere(&s).unwrap();
        assert_eq!(normal_degree(&w, &xi, 0.0).unwrap(), 1);
        let r = star_degree(&s, &xi).unwrap();
        assert_eq!((r.index, r.degree, r.w_plus, r.w_minus), (1, 1, 1, 0));
        let r = star_degree(&s, &-xi).unwrap();
        assert_eq!((r.index, r.degree), (1, -1));
    }

    #[test]
    fn ordinary_point_has_degree_zero() {
        let s = fixtures::cube_corner();
        let xi = UnitVec::new(1.0, 1.0, -0.5).unwrap();
        let r = star_degree(&s, &xi).unwrap();
        assert_eq!((r.index, r.degree), (0, 0));
    }

    #[test]
    fn doubled_polygon_degree() {
        let wp = fixtures::doubled_polygon();
        let w = crate::arrangement::polar_preimage(&wp).unwrap();
        let r = degree_identities(&w, &UnitVec::Z).unwrap();
        assert_eq!((r.degree, r.w_plus, r.w_minus, r.c_parity), (2, 2, 0, 1));
    }

    #[test]
    fn monkey_saddle_degree() {
        let r = star_degree(&fixtures::monkey_saddle(), &UnitVec::Z).unwrap();
        assert_eq!((r.index, r.w_plus, r.w_minus, r.degree), (-2, -2, 0, -2));
    }

    #[test]
    fn independence_antisymmetry_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for s in fixtures::all_stars() {
            let w = project_to_sphere(&s).unwrap();
            for _ in 0..20 {
                let xi = random_direction(&mut rng);
                let Ok(d) = normal_degree(&w, &xi, 0.0) else { continue };
                let lons: Vec<f64> = (0..8).map(|k| 0.3 + 0.77 * k as f64).collect();
                assert!(degree_independence_check(&w, &xi, &lons));
                assert_eq!(normal_degree(&w, &-xi, 0.0).unwrap(), -d);
                let rot = nalgebra::Rotation3::from_scaled_axis(nalgebra::Vector3::new(0.3, -1.1, 0.7));
                assert_eq!(normal_degree(&w.rotated(&rot), &xi.rotate(&rot), 1.0).unwrap(), d);
            }
        }
    }

    #[test]
    fn star_identities_hold_on_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for s in fixtures::all_stars() {
            for _ in 0..200 {
                let xi = random_direction(&mut rng);
                match star_degree(&s, &xi) {
                    Ok(r) => assert_eq!(r.index, above_index(&s, &xi).unwrap()),
                    Err(Error::NotGeneral(_)) => {}
                    Err(e) => panic!("{e:?}"),
                }
            }
        }
    }

    #[test]
    fn transverse_stars_have_index_plus_minus_degree() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for s in fixtures::all_stars() {
            if crate::star::transverse_plane(&s).is_none() {
                continue;
            }
            for _ in 0..100 {
                let xi = random_direction(&mut rng);
                if let Ok(r) = star_degree(&s, &xi) {
                    assert_eq!(r.index.abs(), r.degree.abs(), "{r:?}");
                }
            }
        }
    }
}
