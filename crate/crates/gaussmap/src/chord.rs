//! Equator chord diagrams of simple spherical polygons: extraction, free
//! chords, chord signs, the combinatorial normal degree and realization.
//!
//! Traversal points y_1, …, y_{2r} are the crossings of W with the equator
//! S(ξ) in traversal order, y_1 the first upward crossing after vertex 0.
//! Positions on S(ξ) are numbered counterclockwise about ξ starting from y_1,
//! and Π(k) is the position of y_k. Upper chords join y_{2i+1} and y_{2i+2},
//! lower chords y_{2i} and y_{2i+1}.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::is_admissible;
use crate::sphere::{crossing_count, det, tangent_frame, SphericalPolygon, UnitVec, Vec3, EPS_GEN, TAU};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DiagramJson", into = "DiagramJson")]
pub struct ChordDiagram {
    pi: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    r: usize,
    pi: Vec<usize>,
    #[serde(default)]
    upper: Vec<[usize; 2]>,
    #[serde(default)]
    lower: Vec<[usize; 2]>,
}

impl TryFrom<DiagramJson> for ChordDiagram {
    type Error = Error;
    fn try_from(j: DiagramJson) -> Result<Self> {
        let d = ChordDiagram::from_pi(j.pi)?;
        if d.r() != j.r {
            return Err(Error::ParseError(format!(
                "r = {} but pi has {} entries",
                j.r,
                2 * d.r()
            )));
        }
        let given_u: Vec<(usize, usize)> = j.upper.iter().map(|c| (c[0], c[1])).collect();
        let given_l: Vec<(usize, usize)> = j.lower.iter().map(|c| (c[0], c[1])).collect();
        if (!given_u.is_empty() && given_u != d.upper()) || (!given_l.is_empty() && given_l != d.lower()) {
            return Err(Error::ParseError("chord lists disagree with pi".into()));
        }
        Ok(d)
    }
}

impl From<ChordDiagram> for DiagramJson {
    fn from(d: ChordDiagram) -> Self {
        DiagramJson {
            r: d.r(),
            upper: d.upper().iter().map(|&(a, b)| [a, b]).collect(),
            lower: d.lower().iter().map(|&(a, b)| [a, b]).collect(),
            pi: d.pi,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Hemisphere {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChordSigns {
    pub anchor: usize,
    pub n_plus: usize,
    pub n_minus: usize,
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (lo, hi) = (a.0.min(a.1), a.0.max(a.1));
    let inside = |x: usize| lo < x && x < hi;
    inside(b.0) != inside(b.1) && ![b.0, b.1].contains(&lo) && ![b.0, b.1].contains(&hi)
}

fn non_crossing(chords: &[(usize, usize)]) -> bool {
    (0..chords.len()).all(|i| (i + 1..chords.len()).all(|j| !crosses(chords[i], chords[j])))
}

impl ChordDiagram {
    /// The diagram with no chords: W misses the equator.
    pub fn empty() -> Self {
        ChordDiagram { pi: Vec::new() }
    }

    /// Diagram from Π, given 1-based with Π(1) = 1.
    pub fn from_pi(pi: Vec<usize>) -> Result<Self> {
        let m = pi.len();
        if m == 0 {
            return Ok(Self::empty());
        }
        if !m.is_multiple_of(2) {
            return Err(Error::Unrealizable(format!("odd number of equator points ({m})")));
        }
        let mut seen = vec![false; m + 1];
        for &p in &pi {
            if p == 0 || p > m || seen[p] {
                return Err(Error::Unrealizable("pi is not a permutation of 1..2r".into()));
            }
            seen[p] = true;
        }
        if pi[0] != 1 {
            return Err(Error::Unrealizable("pi must start with 1".into()));
        }
        let d = ChordDiagram { pi };
        if !non_crossing(&d.upper()) {
            return Err(Error::Unrealizable("upper chords cross".into()));
        }
        if !non_crossing(&d.lower()) {
            return Err(Error::Unrealizable("lower chords cross".into()));
        }
        Ok(d)
    }

    pub fn r(&self) -> usize {
        self.pi.len() / 2
    }

    pub fn pi(&self) -> &[usize] {
        &self.pi
    }

    /// (Π(2i+1), Π(2i+2)) for i = 0..r.
    pub fn upper(&self) -> Vec<(usize, usize)> {
        self.pi.chunks(2).map(|c| (c[0], c[1])).collect()
    }

    /// (Π(2i), Π(2i+1)) for i = 1..r, the last wrapping to Π(1).
    pub fn lower(&self) -> Vec<(usize, usize)> {
        let m = self.pi.len();
        (0..self.r())
            .map(|i| (self.pi[2 * i + 1], self.pi[(2 * i + 2) % m]))
            .collect()
    }

    pub fn chords(&self, h: Hemisphere) -> Vec<(usize, usize)> {
        match h {
            Hemisphere::Upper => self.upper(),
            Hemisphere::Lower => self.lower(),
        }
    }

    /// Same diagram with traversal restarted at y_{2j+1} and positions
    /// renumbered from there.
    pub fn restarted(&self, j: usize) -> ChordDiagram {
        let m = self.pi.len();
        let base = self.pi[2 * j % m];
        let pi = (0..m).map(|k| (self.pi[(2 * j + k) % m] + m - base) % m + 1).collect();
        ChordDiagram { pi }
    }
}

/// Chords of one hemisphere whose endpoints are neighbors on the equator.
pub fn free_chords(d: &ChordDiagram, h: Hemisphere) -> Vec<usize> {
    let m = 2 * d.r();
    d.chords(h)
        .iter()
        .enumerate()
        .filter(|(_, &(a, b))| {
            let diff = (a + m - b) % m;
            diff == 1 || diff == m - 1
        })
        .map(|(i, _)| i)
        .collect()
}

/// Signs of the upper chords after renaming the free chord `anchor` to
/// [y_1, y_2]. A chord is positive when Π(2i+1) < Π(2i+2).
pub fn chord_signs(d: &ChordDiagram, anchor: usize) -> Result<ChordSigns> {
    if d.r() == 0 || !free_chords(d, Hemisphere::Upper).contains(&anchor) {
        return Err(Error::AnchorNotFree(anchor));
    }
    let e = d.restarted(anchor);
    let (mut n_plus, mut n_minus) = (0, 0);
    for &(a, b) in &e.upper()[1..] {
        if a < b {
            n_plus += 1;
        } else {
            n_minus += 1;
        }
    }
    Ok(ChordSigns {
        anchor,
        n_plus,
        n_minus,
    })
}

/// (i, d) = (1 − r, −N⁺ + N⁻).
pub fn degree_from_diagram(signs: &ChordSigns) -> (i64, i64) {
    let r = 1 + signs.n_plus + signs.n_minus;
    (1 - r as i64, signs.n_minus as i64 - signs.n_plus as i64)
}

/// Index and degree of a diagram read through its first free upper chord.
pub fn diagram_index_degree(d: &ChordDiagram) -> Result<(i64, i64)> {
    let anchor = *free_chords(d, Hemisphere::Upper)
        .first()
        .ok_or(Error::AnchorNotFree(0))?;
    Ok(degree_from_diagram(&chord_signs(d, anchor)?))
}

/// Chord diagram of a simple polygon with respect to an admissible ξ.
pub fn extract_diagram(w: &SphericalPolygon, xi: &UnitVec) -> Result<ChordDiagram> {
    if !is_admissible(xi, w) {
        return Err(Error::NotAdmissible);
    }
    if crossing_count(w)? != 0 {
        return Err(Error::NotSimple);
    }
    let v = w.vertices();
    let n = v.len();
    let h: Vec<f64> = v.iter().map(|p| p.dot(xi)).collect();
    // (point, upward)
    let mut events: Vec<(Vec3, bool)> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        if h[i].abs() <= EPS_GEN {
            events.push((v[i].v(), h[j] > 0.0));
            continue;
        }
        if h[j].abs() <= EPS_GEN {
            continue;
        }
        if (h[i] > 0.0) != (h[j] > 0.0) {
            let s = h[i] / (h[i] - h[j]);
            events.push((v[i].v() + (v[j].v() - v[i].v()) * s, h[j] > 0.0));
        }
    }
    if events.is_empty() {
        return Ok(ChordDiagram::empty());
    }
    let start = events.iter().position(|e| e.1).ok_or(Error::NotAdmissible)?;
    events.rotate_left(start);
    let (e1, e2) = tangent_frame(xi);
    let lon = |p: &Vec3| p.dot(&e2).atan2(p.dot(&e1));
    let l0 = lon(&events[0].0);
    let rel: Vec<f64> = events.iter().map(|e| (lon(&e.0) - l0).rem_euclid(TAU)).collect();
    let mut order: Vec<usize> = (0..rel.len()).collect();
    order.sort_by(|&a, &b| rel[a].partial_cmp(&rel[b]).unwrap());
    let mut pi = vec![0usize; rel.len()];
    for (pos, &k) in order.iter().enumerate() {
        pi[k] = pos + 1;
    }
    // rem_euclid can put y_1 itself at 2π − tiny; Π(1) = 1 regardless
    if pi[0] != 1 {
        let shift = pi[0] - 1;
        let m = pi.len();
        for p in pi.iter_mut() {
            *p = (*p + m - 1 - shift) % m + 1;
        }
    }
    ChordDiagram::from_pi(pi)
}

fn noncrossing_matchings(m: usize) -> Vec<Vec<(usize, usize)>> {
    fn rec(points: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if points.is_empty() {
            return vec![Vec::new()];
        }
        let first = points[0];
        let mut out = Vec::new();
        for k in (1..points.len()).step_by(2) {
            for inner in rec(&points[1..k]) {
                for outer in rec(&points[k + 1..]) {
                    let mut mm = vec![(first, points[k])];
                    mm.extend(inner.iter().copied());
                    mm.extend(outer.iter().copied());
                    out.push(mm);
                }
            }
        }
        out
    }
    rec(&(1..=m).collect::<Vec<_>>())
}

/// All diagrams with r chords per hemisphere: pairs of non-crossing
/// matchings whose union is one cycle, traversed upward from position 1.
pub fn enumerate_diagrams(r: usize) -> Vec<ChordDiagram> {
    if r == 0 {
        return vec![ChordDiagram::empty()];
    }
    let m = 2 * r;
    let ms = noncrossing_matchings(m);
    let partner = |mm: &Vec<(usize, usize)>| {
        let mut p = vec![0usize; m + 1];
        for &(a, b) in mm {
            p[a] = b;
            p[b] = a;
        }
        p
    };
    let parts: Vec<Vec<usize>> = ms.iter().map(partner).collect();
    let mut out = Vec::new();
    for up in &parts {
        for low in &parts {
            let mut pi = Vec::with_capacity(m);
            let mut x = 1;
            loop {
                pi.push(x);
                let y = up[x];
                pi.push(y);
                x = low[y];
                if x == 1 || pi.len() >= m {
                    break;
                }
            }
            if pi.len() == m && x == 1 {
                out.push(ChordDiagram { pi });
            }
        }
    }
    out
}

/// Whether two diagrams agree up to rotation or reflection of the equator
/// labels and the choice of starting point.
pub fn equivalent(a: &ChordDiagram, b: &ChordDiagram) -> bool {
    if a.r() != b.r() {
        return false;
    }
    if a.r() == 0 {
        return true;
    }
    let m = 2 * a.r();
    let reflect = |d: &ChordDiagram| {
        let pi: Vec<usize> = d.pi.iter().map(|&p| (m + 1 - p) % m + 1).collect();
        ChordDiagram { pi }
    };
    let rb = reflect(b);
    (0..a.r()).any(|j| {
        let s = b.restarted(j);
        let t = rb.restarted(j);
        s == *a || t == *a
    })
}

fn polar_point(lon: f64, lat_deg: f64) -> UnitVec {
    let lat = lat_deg.to_radians();
    UnitVec::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()).unwrap()
}

/// Nesting height of each chord: 0 for chords enclosing no other chord.
fn nesting(chords: &[(usize, usize)]) -> Vec<usize> {
    let span = |c: &(usize, usize)| (c.0.min(c.1), c.0.max(c.1));
    let mut h = vec![0usize; chords.len()];
    let mut idx: Vec<usize> = (0..chords.len()).collect();
    idx.sort_by_key(|&i| span(&chords[i]).1 - span(&chords[i]).0);
    for &i in &idx {
        let (a, b) = span(&chords[i]);
        for &j in &idx {
            let (c, d) = span(&chords[j]);
            if a < c && d < b {
                h[i] = h[i].max(h[j] + 1);
            }
        }
    }
    h
}

/// A simple polygon with the given diagram for ξ = north pole.
///
/// Position m sits at longitude 2π(m − 1)/(2r) + 0.37. Each crossing is an
/// edge between latitudes −1° and +1°; each chord runs at constant latitude
/// over the longitudes between its endpoints, higher for chords enclosing
/// more chords.
pub fn realize_diagram(d: &ChordDiagram) -> Result<SphericalPolygon> {
    let r = d.r();
    if r == 0 {
        return SphericalPolygon::new(
            (0..3)
                .map(|k| polar_point(0.37 + TAU * k as f64 / 3.0, -60.0))
                .collect(),
        );
    }
    let upper = d.upper();
    let lower = d.lower();
    if !non_crossing(&upper) || !non_crossing(&lower) {
        return Err(Error::Unrealizable("chords of one hemisphere cross".into()));
    }
    let m = 2 * r;
    let spacing = TAU / m as f64;
    let lon = |p: usize| spacing * (p - 1) as f64 + 0.37;
    let ramp = (spacing / 4.0).min(5f64.to_radians());
    let step_max = 5f64.to_radians();
    let hu = nesting(&upper);
    let hl = nesting(&lower);
    let depth = hu.iter().chain(&hl).copied().max().unwrap_or(0).max(1);
    let dlat = 12f64.min(60.0 / depth as f64);
    let mut pts: Vec<UnitVec> = Vec::new();
    let chord_path = |a: usize, b: usize, level: usize, sign: f64, pts: &mut Vec<UnitVec>| {
        let lat = sign * (15.0 + level as f64 * dlat);
        let (la, lb) = (lon(a), lon(b));
        let dir = if b > a { 1.0 } else { -1.0 };
        let start = la + dir * ramp;
        let end = lb - dir * ramp;
        let steps = (((end - start).abs() / step_max).ceil() as usize).max(1);
        pts.push(polar_point(la, sign));
        for s in 0..=steps {
            pts.push(polar_point(start + (end - start) * s as f64 / steps as f64, lat));
        }
        pts.push(polar_point(lb, sign));
    };
    for i in 0..r {
        let (a, b) = upper[i];
        pts.push(polar_point(lon(a), -1.0));
        chord_path(a, b, hu[i], 1.0, &mut pts);
        let (c, e) = lower[i];
        debug_assert_eq!(c, b);
        chord_path(c, e, hl[i], -1.0, &mut pts);
        pts.pop();
    }
    let w = SphericalPolygon::new(pts)?;
    let n = w.len();
    for i in 0..n {
        if det(&w.at(i as isize - 1), &w.vertices()[i], &w.at(i as isize + 1)).abs() <= EPS_GEN {
            return Err(Error::Unrealizable(format!("straight vertex {i}")));
        }
    }
    if crossing_count(&w)? != 0 {
        return Err(Error::Unrealizable("lifted chords intersect".into()));
    }
    Ok(w)
}

/// Whether (i, d) can be realized by a simple polygon.
pub fn admissible_pair(i: i64, d: i64) -> bool {
    if i == 1 {
        return d.abs() == 1;
    }
    i < 1 && d.abs() <= i.abs() && (d - i) % 2 == 0
}

/// A simple polygon with index i and normal degree d for ξ = north pole.
pub fn realize_index_degree(i: i64, d: i64) -> Result<SphericalPolygon> {
    if !admissible_pair(i, d) {
        return Err(Error::InadmissiblePair(i, d));
    }
    if i == 1 {
        let t = ChordDiagram::empty();
        let w = realize_diagram(&t)?;
        let got = crate::degree::normal_degree(&w, &UnitVec::Z, 0.0)?;
        return Ok(if got == d { w } else { w.reversed() });
    }
    let r = (1 - i) as usize;
    for cand in enumerate_diagrams(r) {
        if diagram_index_degree(&cand)? == (i, d) {
            return realize_diagram(&cand);
        }
    }
    Err(Error::Unrealizable(format!("no diagram with r = {r} and degree {d}")))
}
