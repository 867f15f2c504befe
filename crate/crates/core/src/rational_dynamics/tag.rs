use num_complex::Complex;
use serde::Serialize;

use super::curve::{segment_intersection, winding_number, CurvePolyline};
use super::pcf::MarkedSphere;
use super::sphere::Chart;
use super::DynamicsError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    /// One side holds no marked point.
    NonEssential,
    /// One side holds exactly one marked point.
    Peripheral,
    NonPeripheral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomotopyTag {
    /// Marked-point indices on each side; the side holding index 0 first.
    pub partition: [Vec<usize>; 2],
    pub kind: CurveKind,
    /// Crossings with each reference arc before reduction.
    pub raw_crossings: Option<Vec<usize>>,
    /// Crossings left after cancelling empty bigons.
    pub crossings: Option<Vec<usize>>,
    /// Whether the reduced word still has adjacent opposite crossings of one
    /// arc (whose bigon contains a marked point).
    pub unresolved: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TagMatch {
    Matches,
    Differs,
    Inconclusive,
}

impl HomotopyTag {
    /// Homotopy comparison rel the marked set, decided only when the data
    /// allow it.
    pub fn compare(&self, other: &HomotopyTag) -> TagMatch {
        if self.partition != other.partition {
            return TagMatch::Differs;
        }
        if self.kind != CurveKind::NonPeripheral {
            return TagMatch::Matches;
        }
        match (&self.crossings, &other.crossings) {
            (Some(a), Some(b)) => {
                let zero = |v: &Vec<usize>| v.iter().all(|&k| k == 0);
                if zero(a) && zero(b) {
                    TagMatch::Matches
                } else if a != b && !self.unresolved && !other.unresolved {
                    TagMatch::Differs
                } else {
                    TagMatch::Inconclusive
                }
            }
            _ => TagMatch::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Crossing<T> {
    /// Position along the curve: segment index plus fraction.
    at: T,
    seg: usize,
    arc: usize,
    arc_seg: usize,
    arc_at: T,
    point: Complex<T>,
    sign: i8,
}

/// Which side of a closed curve each marked point lies on, plus
/// (for reference arcs given) the bigon-reduced crossing counts.
pub fn classify_curve<T: Real>(
    marked: &MarkedSphere<T>,
    curve: &CurvePolyline<T>,
    arcs: Option<&[CurvePolyline<T>]>,
    tol: T,
) -> Result<HomotopyTag, DynamicsError> {
    if !curve.closed || curve.len() < 3 {
        return Err(DynamicsError::InvalidCurve("closed curve expected".into()));
    }
    for (i, p) in marked.points.iter().enumerate() {
        if curve.distance_to(p) < tol {
            return Err(DynamicsError::CurveTooClose { marked: i });
        }
    }
    let mut all: Vec<&CurvePolyline<T>> = vec![curve];
    if let Some(a) = arcs {
        all.extend(a.iter());
    }
    let chart = CurvePolyline::far_chart(&all);
    let z = curve.in_chart(&chart);
    let mp: Vec<Complex<T>> = marked
        .points
        .iter()
        .map(|p| chart.to_plane(p).expect("pole is away from marked points"))
        .collect();
    let inside: Vec<bool> = mp.iter().map(|&p| winding_number(&z, p) != 0).collect();
    let side0 = inside.first().copied().unwrap_or(false);
    let (a, b): (Vec<usize>, Vec<usize>) = (0..mp.len()).partition(|&i| inside[i] == side0);
    let small = a.len().min(b.len());
    let kind = match small {
        0 => CurveKind::NonEssential,
        1 => CurveKind::Peripheral,
        _ => CurveKind::NonPeripheral,
    };
    let (raw, reduced, unresolved) = match arcs {
        Some(arcs) => {
            let (raw, red, unres) = crossings(&chart, &z, arcs, &mp);
            (Some(raw), Some(red), unres)
        }
        None => (None, None, false),
    };
    Ok(HomotopyTag {
        partition: [a, b],
        kind,
        raw_crossings: raw,
        crossings: reduced,
        unresolved,
    })
}

fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

fn crossings<T: Real>(
    chart: &Chart<T>,
    z: &[Complex<T>],
    arcs: &[CurvePolyline<T>],
    marked: &[Complex<T>],
) -> (Vec<usize>, Vec<usize>, bool) {
    let n = z.len();
    let arc_pts: Vec<Vec<Complex<T>>> = arcs.iter().map(|a| a.in_chart(chart)).collect();
    let mut word: Vec<Crossing<T>> = Vec::new();
    for (ai, ap) in arc_pts.iter().enumerate() {
        for j in 0..ap.len().saturating_sub(1) {
            let t = (ap[j], ap[j + 1]);
            let (tlo, thi) = (t.0.re.min(t.1.re), t.0.re.max(t.1.re));
            let (tlo_i, thi_i) = (t.0.im.min(t.1.im), t.0.im.max(t.1.im));
            for i in 0..n {
                let s = (z[i], z[(i + 1) % n]);
                if s.0.re.max(s.1.re) < tlo
                    || s.0.re.min(s.1.re) > thi
                    || s.0.im.max(s.1.im) < tlo_i
                    || s.0.im.min(s.1.im) > thi_i
                {
                    continue;
                }
                if let Some((u, v)) = segment_intersection(s, t) {
                    let sign = if cross(s.1 - s.0, t.1 - t.0) > T::zero() {
                        1
                    } else {
                        -1
                    };
                    word.push(Crossing {
                        at: T::from_usize(i).unwrap() + u,
                        seg: i,
                        arc: ai,
                        arc_seg: j,
                        arc_at: T::from_usize(j).unwrap() + v,
                        point: s.0 + (s.1 - s.0) * u,
                        sign,
                    });
                }
            }
        }
    }
    word.sort_by(|a, b| a.at.partial_cmp(&b.at).unwrap());
    // a crossing exactly at a shared node is seen from both segments
    word.dedup_by(|b, a| b.arc == a.arc && (b.point - a.point).norm() < T::lit(1e-12));
    let count = |w: &[Crossing<T>]| {
        let mut c = vec![0usize; arcs.len()];
        for x in w {
            c[x.arc] += 1;
        }
        c
    };
    let raw = count(&word);

    loop {
        let m = word.len();
        if m < 2 {
            break;
        }
        let mut removed = false;
        for k in 0..m {
            let (p, q) = (word[k], word[(k + 1) % m]);
            if p.arc != q.arc || p.sign == q.sign {
                continue;
            }
            let lp = bigon_loop(z, &arc_pts[p.arc], &p, &q);
            if marked.iter().all(|&mk| winding_number(&lp, mk) == 0) {
                let (i, j) = (k, (k + 1) % m);
                let (hi, lo) = if i > j { (i, j) } else { (j, i) };
                word.remove(hi);
                word.remove(lo);
                removed = true;
                break;
            }
        }
        if !removed {
            break;
        }
    }
    let m = word.len();
    let unresolved = (0..m).any(|k| {
        let (p, q) = (word[k], word[(k + 1) % m]);
        m >= 2 && p.arc == q.arc && p.sign != q.sign
    });
    (raw, count(&word), unresolved)
}

/// Curve from crossing `p` forward to crossing `q`, then back along the arc.
fn bigon_loop<T: Real>(
    z: &[Complex<T>],
    arc: &[Complex<T>],
    p: &Crossing<T>,
    q: &Crossing<T>,
) -> Vec<Complex<T>> {
    let n = z.len();
    let mut lp = vec![p.point];
    let mut i = (p.seg + 1) % n;
    let stop = (q.seg + 1) % n;
    let wraps = q.at <= p.at;
    let mut first = true;
    while i != stop || (first && wraps && p.seg == q.seg) {
        first = false;
        lp.push(z[i]);
        i = (i + 1) % n;
    }
    lp.push(q.point);
    // along the arc from q back to p
    if q.arc_at <= p.arc_at {
        for j in (q.arc_seg + 1)..=p.arc_seg {
            lp.push(arc[j]);
        }
    } else {
        for j in ((p.arc_seg + 1)..=q.arc_seg).rev() {
            lp.push(arc[j]);
        }
    }
    lp
}
