use num_complex::Complex;
use serde::Serialize;

use super::sphere::{dist3, dist3_arc, dist3_segment, sphere_samples, Chart, Point};
use crate::scalar::Real;

/// Polyline on the sphere; segments are chords between consecutive nodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePolyline<T> {
    pub points: Vec<Point<T>>,
    pub closed: bool,
}

impl<T: Real> CurvePolyline<T> {
    pub fn closed(points: Vec<Point<T>>) -> Self {
        CurvePolyline {
            points,
            closed: true,
        }
    }

    pub fn open(points: Vec<Point<T>>) -> Self {
        CurvePolyline {
            points,
            closed: false,
        }
    }

    /// `n` samples of `t ↦ g(t)` on `[0, 1)` (closed) or `[0, 1]` (open).
    pub fn sample<F: Fn(f64) -> Point<T>>(n: usize, closed: bool, g: F) -> Self {
        let denom = if closed { n } else { n - 1 } as f64;
        CurvePolyline {
            points: (0..n).map(|k| g(k as f64 / denom)).collect(),
            closed,
        }
    }

    /// Ellipse `centre + a cos θ + i b sin θ`, counter-clockwise.
    pub fn ellipse(n: usize, centre: Complex<T>, a: T, b: T) -> Self {
        Self::sample(n, true, |t| {
            let th = T::lit(t * std::f64::consts::TAU);
            Point::Finite(centre + Complex::new(a * th.cos(), b * th.sin()))
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xyz(&self) -> Vec<[T; 3]> {
        self.points.iter().map(|p| p.to_xyz()).collect()
    }

    fn segment_count(&self) -> usize {
        match (self.closed, self.points.len()) {
            (_, 0 | 1) => 0,
            (true, n) => n,
            (false, n) => n - 1,
        }
    }

    /// Chordal lengths of the segments.
    pub fn segment_lengths(&self) -> Vec<T> {
        let n = self.points.len();
        (0..self.segment_count())
            .map(|i| self.points[i].chordal(&self.points[(i + 1) % n]))
            .collect()
    }

    pub fn length(&self) -> T {
        self.segment_lengths()
            .into_iter()
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn max_step(&self) -> T {
        self.segment_lengths().into_iter().fold(T::zero(), T::max)
    }

    /// Keep `budget` of the existing nodes, spread evenly by arc length.
    /// Nodes are only selected, never moved.
    pub fn decimate(&self, budget: usize) -> Self {
        let n = self.points.len();
        if n <= budget || budget < 3 {
            return self.clone();
        }
        let lens = self.segment_lengths();
        let mut cum = Vec::with_capacity(n);
        let mut acc = T::zero();
        for i in 0..n {
            cum.push(acc);
            if i < lens.len() {
                acc = acc + lens[i];
            }
        }
        let total = acc;
        let mut keep = Vec::with_capacity(budget);
        let mut j = 0usize;
        let slots = if self.closed { budget } else { budget - 1 };
        for k in 0..budget {
            let target = total * T::from_usize(k).unwrap() / T::from_usize(slots).unwrap();
            while j + 1 < n && cum[j + 1] <= target {
                j += 1;
            }
            let pick = if j + 1 < n && (cum[j + 1] - target) < (target - cum[j]) {
                j + 1
            } else {
                j
            };
            if keep.last() != Some(&pick) {
                keep.push(pick);
            }
        }
        if !self.closed && keep.last() != Some(&(n - 1)) {
            keep.push(n - 1);
        }
        CurvePolyline {
            points: keep.into_iter().map(|i| self.points[i]).collect(),
            closed: self.closed,
        }
    }

    /// Chordal distance from `p` to the polyline.
    pub fn distance_to(&self, p: &Point<T>) -> T {
        let q = p.to_xyz();
        let x = self.xyz();
        let n = x.len();
        if n == 1 {
            return dist3(&q, &x[0]);
        }
        (0..self.segment_count())
            .map(|i| dist3_segment(&q, &x[i], &x[(i + 1) % n]))
            .fold(T::infinity(), T::min)
    }

    /// Like [`Self::distance_to`] but with segments read as great-circle
    /// arcs, so points on a sampled circle of the sphere have distance ~0.
    pub fn arc_distance_to(&self, p: &Point<T>) -> T {
        let q = p.to_xyz();
        let x = self.xyz();
        let n = x.len();
        if n == 1 {
            return dist3(&q, &x[0]);
        }
        (0..self.segment_count())
            .map(|i| dist3_arc(&q, &x[i], &x[(i + 1) % n]))
            .fold(T::infinity(), T::min)
    }

    /// Largest node-to-polyline distance from `self` to `other`.
    pub fn directed_hausdorff(&self, other: &Self) -> T {
        let a = self.xyz();
        let b = other.xyz();
        let m = b.len();
        let segs = other.segment_count();
        let mut worst = T::zero();
        for p in &a {
            let mut best = T::infinity();
            for i in 0..segs.max(1) {
                let d = if segs == 0 {
                    dist3(p, &b[0])
                } else {
                    dist3_segment(p, &b[i], &b[(i + 1) % m])
                };
                if d < best {
                    best = d;
                    if best <= worst {
                        break;
                    }
                }
            }
            worst = worst.max(best);
        }
        worst
    }

    pub fn hausdorff(&self, other: &Self) -> T {
        self.directed_hausdorff(other)
            .max(other.directed_hausdorff(self))
    }

    /// Chart whose pole is far from every given curve.
    pub fn far_chart(curves: &[&Self]) -> Chart<T> {
        let xs: Vec<Vec<[T; 3]>> = curves.iter().map(|c| c.xyz()).collect();
        let mut best = (T::neg_infinity(), Point::Infinity);
        for cand in sphere_samples::<T>(200) {
            let q = cand.to_xyz();
            let d = xs
                .iter()
                .flatten()
                .map(|x| dist3(x, &q))
                .fold(T::infinity(), T::min);
            if d > best.0 {
                best = (d, cand);
            }
        }
        Chart::new(best.1)
    }

    pub fn in_chart(&self, chart: &Chart<T>) -> Vec<Complex<T>> {
        self.points
            .iter()
            .map(|p| chart.to_plane(p).expect("chart pole avoided"))
            .collect()
    }

    /// Pairs of non-adjacent segments that cross, counted in a chart far
    /// from the curve.
    pub fn self_intersections(&self) -> usize {
        let chart = Self::far_chart(&[self]);
        let z = self.in_chart(&chart);
        let n = z.len();
        let segs = self.segment_count();
        let seg = |i: usize| (z[i], z[(i + 1) % n]);
        let mut order: Vec<usize> = (0..segs).collect();
        let lo = |i: usize| seg(i).0.re.min(seg(i).1.re);
        let hi = |i: usize| seg(i).0.re.max(seg(i).1.re);
        order.sort_by(|&a, &b| lo(a).partial_cmp(&lo(b)).unwrap());
        let mut count = 0;
        for (k, &i) in order.iter().enumerate() {
            let h = hi(i);
            for &j in &order[k + 1..] {
                if lo(j) > h {
                    break;
                }
                let adjacent = i.abs_diff(j) == 1 || (self.closed && i.abs_diff(j) == segs - 1);
                if !adjacent && segments_cross(seg(i), seg(j)) {
                    count += 1;
                }
            }
        }
        count
    }
}

fn cross<T: Real>(a: Complex<T>, b: Complex<T>) -> T {
    a.re * b.im - a.im * b.re
}

/// Proper or touching intersection of two planar segments.
pub(crate) fn segments_cross<T: Real>(
    s: (Complex<T>, Complex<T>),
    t: (Complex<T>, Complex<T>),
) -> bool {
    segment_intersection(s, t).is_some()
}

/// Parameters `(u, v)` in `[0,1]²` with `s(u) = t(v)`, if the segments meet.
pub(crate) fn segment_intersection<T: Real>(
    s: (Complex<T>, Complex<T>),
    t: (Complex<T>, Complex<T>),
) -> Option<(T, T)> {
    let r = s.1 - s.0;
    let q = t.1 - t.0;
    let den = cross(r, q);
    let d = t.0 - s.0;
    if den == T::zero() {
        return None;
    }
    let u = cross(d, q) / den;
    let v = cross(d, r) / den;
    if u >= T::zero() && u <= T::one() && v >= T::zero() && v <= T::one() {
        Some((u, v))
    } else {
        None
    }
}

/// Winding number of a closed planar polygon around `p`.
pub fn winding_number<T: Real>(poly: &[Complex<T>], p: Complex<T>) -> i64 {
    let mut w = 0i64;
    let n = poly.len();
    for i in 0..n {
        let a = poly[i] - p;
        let b = poly[(i + 1) % n] - p;
        if a.im <= T::zero() {
            if b.im > T::zero() && cross(a, b) > T::zero() {
                w += 1;
            }
        } else if b.im <= T::zero() && cross(a, b) < T::zero() {
            w -= 1;
        }
    }
    w
}
