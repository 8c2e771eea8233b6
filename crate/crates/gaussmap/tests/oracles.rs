//! Library results against independent computations.

use gaussmap::arrangement::{polygon_profile, star_profile};
use gaussmap::fixtures;
use gaussmap::mesh::{self, critical_point_census, load_off, parse_off, to_off, CriticalKind};
use gaussmap::sampling::{random_immersed_polygon, random_simple_polygon};
use gaussmap::sphere::{crossing_count, polar_polygon, polygon_area_excess, SphericalPolygon, UnitVec, Vec3, TAU};
use gaussmap::star::angle_deficit;
use gaussmap::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

fn uniform(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::new(
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        );
        if v.norm() > 1e-9 {
            return v.normalize();
        }
    }
}

/// Signed count of edges of `w` crossed by the minor arc from q to x;
/// written out here without the library's arc predicates.
fn signed_crossings(w: &SphericalPolygon, q: &Vec3, x: &Vec3) -> i64 {
    let v = w.vertices();
    let n = v.len();
    let m = q.cross(x);
    let mut total = 0;
    for i in 0..n {
        let a = v[i].v();
        let b = v[(i + 1) % n].v();
        let e = a.cross(&b);
        let (ha, hb) = (a.dot(&m), b.dot(&m));
        let (hq, hx) = (q.dot(&e), x.dot(&e));
        if (ha > 0.0) != (hb > 0.0) && (hq > 0.0) != (hx > 0.0) {
            // the great circles meet at ±p; require p on both minor arcs
            let p = m.cross(&e);
            let p = if p.dot(&(a + b)) > 0.0 { p } else { -p };
            if p.dot(&(q + x)) > 0.0 {
                total += if hx > 0.0 { 1 } else { -1 };
            }
        }
    }
    total
}

#[test]
fn monte_carlo_area_of_simple_hexagons() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..5 {
        let w = random_simple_polygon(&mut rng, 6);
        let a = polygon_area_excess(&w).unwrap();
        let q = uniform(&mut rng);
        let n = 200_000;
        let mut sum = 0i64;
        for _ in 0..n {
            let x = uniform(&mut rng);
            sum += signed_crossings(&w, &q, &x);
        }
        let mean = sum as f64 / n as f64;
        // the indicator differs from the left region by a constant, 0 or −1
        let frac = mean.rem_euclid(1.0);
        let est = 2.0 * TAU * frac;
        let se = 2.0 * TAU * (frac * (1.0 - frac) / n as f64).sqrt();
        assert!(
            (est - a).abs() < 4.0 * se + 1e-3,
            "estimate {est} vs excess {a} (se {se})"
        );
    }
}

#[test]
fn egregium_at_every_mesh_vertex() {
    for m in [
        fixtures::tetrahedron(),
        fixtures::grid_torus(8),
        fixtures::icosphere(1, 0.3),
        fixtures::csaszar_torus(),
    ] {
        for s in m.stars().unwrap() {
            let (_, p) = star_profile(&s).unwrap();
            assert!((p.algebraic_area - angle_deficit(&s)).abs() < 1e-8);
        }
    }
}

#[test]
fn immersed_area_with_odd_crossings() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut seen = 0;
    while seen < 50 {
        let w = random_immersed_polygon(&mut rng, 7);
        if crossing_count(&w).unwrap().is_multiple_of(2) {
            continue;
        }
        seen += 1;
        let (_, p) = polygon_profile(&polar_polygon(&w).unwrap()).unwrap();
        assert!((p.algebraic_area - (2.0 * TAU - w.length())).abs() < 1e-8);
    }
}

#[test]
fn off_files_load_and_reject() {
    let dir = std::env::temp_dir().join(format!("gaussmap-oracles-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tet.off");
    std::fs::write(&path, to_off(&fixtures::tetrahedron())).unwrap();
    let m = load_off(&path).unwrap();
    assert_eq!((m.vertex_count(), m.face_count(), m.euler_characteristic()), (4, 4, 2));
    assert!((mesh::gauss_bonnet_check(&m).unwrap()).abs() < 1e-12);

    let torus = parse_off(&to_off(&fixtures::grid_torus(8))).unwrap();
    assert_eq!(torus.euler_characteristic(), 0);

    let open = "OFF\n4 3 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n";
    assert!(matches!(parse_off(open), Err(Error::NotClosed(_))));
    let bowtie =
        "OFF\n5 6 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n3 0 1 2\n3 0 2 1\n3 0 1 3\n3 0 3 1\n3 0 1 4\n3 0 4 1\n";
    assert!(matches!(parse_off(bowtie), Err(Error::NonManifold(_))));
    assert!(matches!(load_off(&dir.join("missing.off")), Err(Error::ParseError(_))));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn tetrahedron_has_one_maximum_and_one_minimum() {
    let m = fixtures::tetrahedron();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..50 {
        let xi = mesh::general_direction(&m, &mut rng).unwrap();
        let mut idx: Vec<i64> = (0..4).map(|v| mesh::vertex_index(&m, v, &xi).unwrap()).collect();
        idx.sort();
        assert_eq!(idx, vec![0, 0, 1, 1]);
        let cps = critical_point_census(&m, &xi).unwrap();
        let kinds: Vec<CriticalKind> = cps.iter().map(|c| c.kind).collect();
        assert!(kinds.contains(&CriticalKind::Maximum) && kinds.contains(&CriticalKind::Minimum));
        let degrees: i64 = cps.iter().map(|c| c.degree).sum();
        assert_eq!(degrees, 0);
    }
}

#[test]
fn grid_torus_standing_up_has_four_critical_points() {
    let m = fixtures::grid_torus(8);
    let xi = UnitVec::new(1.0, 0.13, 0.07).unwrap();
    let cps = critical_point_census(&m, &xi).unwrap();
    let count = |k: CriticalKind| cps.iter().filter(|c| c.kind == k).count();
    assert_eq!(cps.len(), 4, "{cps:?}");
    assert_eq!(
        (
            count(CriticalKind::Maximum),
            count(CriticalKind::Minimum),
            count(CriticalKind::Saddle)
        ),
        (1, 1, 2)
    );
    assert!(cps
        .iter()
        .filter(|c| c.kind == CriticalKind::Saddle)
        .all(|c| c.index == -1));
}
