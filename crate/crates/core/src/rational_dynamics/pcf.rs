use serde::Serialize;

use super::map::RationalMap;
use super::sphere::Point;
use super::DynamicsError;
use crate::scalar::Real;

/// Distinct marked points on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MarkedSphere<T> {
    pub points: Vec<Point<T>>,
}

impl<T: Real> MarkedSphere<T> {
    pub fn new(points: Vec<Point<T>>, tol: T) -> Result<Self, DynamicsError> {
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i].chordal(&points[j]) < tol {
                    return Err(DynamicsError::MarkedTooClose(i, j));
                }
            }
        }
        Ok(MarkedSphere { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the marked point within `tol` of `p`.
    pub fn find(&self, p: &Point<T>, tol: T) -> Option<usize> {
        self.points.iter().position(|q| q.chordal(p) < tol)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalOrbit<T> {
    pub critical_point: Point<T>,
    /// `f(c), f²(c), ...` up to the first repetition.
    pub orbit: Vec<Point<T>>,
    /// Index in `orbit` of the point that the last image returns to.
    pub returns_to: usize,
    pub closing_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PostCritical<T> {
    pub marked: MarkedSphere<T>,
    pub orbits: Vec<CriticalOrbit<T>>,
    /// Pairs of orbit points at chordal distance in `[tol, 100 tol)`.
    pub ambiguous: Vec<(Point<T>, Point<T>)>,
}

fn sort_key<T: Real>(p: &Point<T>) -> (u8, f64, f64) {
    match p {
        Point::Infinity => (1, 0.0, 0.0),
        Point::Finite(z) => (0, z.re.to_f64().unwrap(), z.im.to_f64().unwrap()),
    }
}

/// Forward orbits of the critical points, each followed until it returns
/// within `tol` of an earlier point. Orbit points are snapped to the real
/// axis or ∞ when within `tol`.
pub fn post_critical<T: Real>(
    f: &RationalMap<T>,
    max_orbit: usize,
    tol: T,
) -> Result<PostCritical<T>, DynamicsError> {
    let mut orbits = Vec::new();
    let mut all: Vec<Point<T>> = Vec::new();
    let mut ambiguous = Vec::new();
    let near = T::lit(100.0) * tol;
    for c in f.critical_points() {
        let mut orbit: Vec<Point<T>> = Vec::new();
        let mut z = f.eval(&c.point).snapped(tol);
        loop {
            let hit = orbit
                .iter()
                .enumerate()
                .map(|(k, p)| (k, p.chordal(&z)))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            if let Some((k, d)) = hit {
                if d < tol {
                    orbits.push(CriticalOrbit {
                        critical_point: c.point,
                        orbit: orbit.clone(),
                        returns_to: k,
                        closing_error: d.to_f64().unwrap(),
                    });
                    break;
                }
                if d < near {
                    ambiguous.push((orbit[k], z));
                }
            }
            if orbit.len() >= max_orbit {
                return Err(DynamicsError::NotPcf { max_orbit });
            }
            orbit.push(z);
            z = f.eval(&z).snapped(tol);
        }
        for p in orbit {
            if all.iter().all(|q| q.chordal(&p) >= tol) {
                all.push(p);
            }
        }
    }
    all.sort_by(|a, b| sort_key(a).partial_cmp(&sort_key(b)).unwrap());
    Ok(PostCritical {
        marked: MarkedSphere::new(all, tol)?,
        orbits,
        ambiguous,
    })
}
