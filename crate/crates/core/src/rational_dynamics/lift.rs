use serde::Serialize;

use super::curve::CurvePolyline;
use super::map::RationalMap;
use super::sphere::{dist3_arc, Point};
use super::DynamicsError;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiftOptions {
    /// Chordal clearance required between the path and critical values.
    pub delta: f64,
    /// Chordal residual `d(f(z_i), w_i)` required at every node.
    pub residual: f64,
    pub max_newton: usize,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions {
            delta: 1e-4,
            residual: 1e-9,
            max_newton: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LiftComponent<T> {
    pub curve: CurvePolyline<T>,
    /// Number of circuits of the image curve per circuit of the component.
    pub degree: usize,
}

fn interp<T: Real>(a: &[T; 3], b: &[T; 3], t: T) -> Point<T> {
    let p = [
        a[0] + (b[0] - a[0]) * t,
        a[1] + (b[1] - a[1]) * t,
        a[2] + (b[2] - a[2]) * t,
    ];
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    Point::from_xyz([p[0] / n, p[1] / n, p[2] / n])
}

fn check_clearance<T: Real>(
    f: &RationalMap<T>,
    nodes: &[Point<T>],
    closed: bool,
    delta: T,
) -> Result<(), DynamicsError> {
    let x: Vec<[T; 3]> = nodes.iter().map(|p| p.to_xyz()).collect();
    let n = x.len();
    let segs = if closed { n } else { n.saturating_sub(1) };
    let cv: Vec<[T; 3]> = f.critical_values().iter().map(|p| p.to_xyz()).collect();
    for c in &cv {
        if n == 1 && super::sphere::dist3(c, &x[0]) < delta {
            return Err(DynamicsError::CriticalValueCollision { t: 0.0 });
        }
        for i in 0..segs {
            if dist3_arc(c, &x[i], &x[(i + 1) % n]) < delta {
                return Err(DynamicsError::CriticalValueCollision {
                    t: i as f64 / segs as f64,
                });
            }
        }
    }
    Ok(())
}

/// Lift the node sequence `w_0, .., w_{n-1}` (plus `w_0` again when
/// `closed`) starting from `seed`, with `f(seed) ≈ w_0`.
fn lift_nodes<T: Real>(
    f: &RationalMap<T>,
    nodes: &[Point<T>],
    closed: bool,
    seed: &Point<T>,
    opts: &LiftOptions,
) -> Result<Vec<Point<T>>, DynamicsError> {
    let tol = T::lit(opts.residual);
    let newton_tol = T::lit(opts.residual * 1e-3);
    let (mut z, _, _) = f
        .solve_near(seed, &nodes[0], opts.max_newton, newton_tol)
        .filter(|(z, _, _)| z.chordal(seed) < T::lit(1e-6))
        .ok_or(DynamicsError::SeedMismatch)?;
    let total = if closed { nodes.len() } else { nodes.len() - 1 };
    let mut out = Vec::with_capacity(total + 1);
    out.push(z);
    let quarter = T::lit(0.25);
    for i in 0..total {
        let a = nodes[i].to_xyz();
        let b = nodes[(i + 1) % nodes.len()].to_xyz();
        let mut s = T::zero();
        let mut h = T::one();
        while s < T::one() {
            h = h.min(T::one() - s);
            let w = interp(&a, &b, s + h);
            let accepted = match f.solve_near(&z, &w, opts.max_newton, newton_tol) {
                Some((zn, first, _)) => {
                    let jump = zn.chordal(&first);
                    let step = first.chordal(&z);
                    if jump <= quarter * step + T::lit(1e-13) {
                        Some(zn)
                    } else {
                        None
                    }
                }
                None => None,
            };
            match accepted {
                Some(zn) => {
                    z = zn;
                    s = s + h;
                    h = (h + h).min(T::one());
                }
                None => {
                    h = h * T::lit(0.5);
                    if h < T::lit(1e-12) {
                        let t = (T::from_usize(i).unwrap() + s) / T::from_usize(total).unwrap();
                        return Err(DynamicsError::StepFailure {
                            t: t.to_f64().unwrap(),
                        });
                    }
                }
            }
        }
        let target = Point::from_xyz(b);
        if f.eval(&z).chordal(&target) > tol {
            let t = T::from_usize(i + 1).unwrap() / T::from_usize(total).unwrap();
            return Err(DynamicsError::StepFailure {
                t: t.to_f64().unwrap(),
            });
        }
        out.push(z);
    }
    Ok(out)
}

/// Lift of a path through `f` by continuation from `seed`.
/// A closed path is lifted once around, ending at a preimage of its start.
pub fn lift_path<T: Real>(
    f: &RationalMap<T>,
    path: &CurvePolyline<T>,
    seed: &Point<T>,
    opts: &LiftOptions,
) -> Result<CurvePolyline<T>, DynamicsError> {
    if path.is_empty() {
        return Ok(CurvePolyline::open(Vec::new()));
    }
    check_clearance(f, &path.points, path.closed, T::lit(opts.delta))?;
    Ok(CurvePolyline::open(lift_nodes(
        f,
        &path.points,
        path.closed,
        seed,
        opts,
    )?))
}

/// All components of `f⁻¹(curve)` for a closed curve, with degrees.
pub fn lift_curve_components<T: Real>(
    f: &RationalMap<T>,
    curve: &CurvePolyline<T>,
    opts: &LiftOptions,
) -> Result<Vec<LiftComponent<T>>, DynamicsError> {
    if !curve.closed || curve.len() < 3 {
        return Err(DynamicsError::InvalidCurve(
            "closed curve with ≥ 3 nodes expected".into(),
        ));
    }
    check_clearance(f, &curve.points, true, T::lit(opts.delta))?;
    let roots = f.preimages(&curve.points[0]);
    if roots.len() != f.degree() {
        return Err(DynamicsError::RootCountMismatch {
            found: roots.len(),
            expected: f.degree(),
        });
    }
    let d = roots.len();
    let mut next = vec![usize::MAX; d];
    let mut lifts: Vec<Vec<Point<T>>> = vec![Vec::new(); d];
    let match_tol = T::lit(1e-6);
    for k in 0..d {
        let mut nodes = lift_nodes(f, &curve.points, true, &roots[k], opts)?;
        let end = nodes.pop().unwrap();
        let (j, dist) = roots
            .iter()
            .enumerate()
            .map(|(j, r)| (j, r.chordal(&end)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if dist > match_tol {
            return Err(DynamicsError::RootCountMismatch {
                found: k,
                expected: d,
            });
        }
        next[k] = j;
        lifts[k] = nodes;
    }
    let mut seen = vec![false; d];
    let mut out = Vec::new();
    for start in 0..d {
        if seen[start] {
            continue;
        }
        let mut pts = Vec::new();
        let mut k = start;
        let mut degree = 0;
        while !seen[k] {
            seen[k] = true;
            pts.extend_from_slice(&lifts[k]);
            degree += 1;
            k = next[k];
        }
        if k != start {
            return Err(DynamicsError::RootCountMismatch {
                found: degree,
                expected: d,
            });
        }
        out.push(LiftComponent {
            curve: CurvePolyline::closed(pts),
            degree,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational_dynamics::poly::Poly;
    use num_complex::Complex;

    fn square() -> RationalMap<f64> {
        RationalMap::new(Poly::real(&[0.0, 0.0, 1.0]), Poly::real(&[1.0])).unwrap()
    }

    #[test]
    fn square_root_of_unit_circle() {
        let f = square();
        let c = CurvePolyline::ellipse(400, Complex::new(0.0, 0.0), 1.0, 1.0);
        let l = lift_path(&f, &c, &Point::real(1.0), &LiftOptions::default()).unwrap();
        assert_eq!(l.len(), 401);
        for (k, p) in l.points.iter().enumerate() {
            let th = std::f64::consts::PI * k as f64 / 400.0;
            assert!(p.chordal(&Point::new(th.cos(), th.sin())) < 1e-9);
        }
    }

    #[test]
    fn circle_of_radius_four() {
        let f = square();
        let c = CurvePolyline::ellipse(300, Complex::new(0.0, 0.0), 4.0, 4.0);
        let comps = lift_curve_components(&f, &c, &LiftOptions::default()).unwrap();
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].degree, 2);
        for p in &comps[0].curve.points {
            assert!((p.finite().unwrap().norm() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn through_critical_value_rejected() {
        let f = square();
        let path = CurvePolyline::sample(11, false, |t| Point::real(t - 0.5));
        assert!(matches!(
            lift_path(&f, &path, &Point::new(0.0, 1.0), &LiftOptions::default()),
            Err(DynamicsError::CriticalValueCollision { .. })
        ));
    }

    #[test]
    fn small_circle_has_degree_one_lifts() {
        let f = crate::rational_dynamics::builtin::lattes::<f64>();
        let c = CurvePolyline::ellipse(200, Complex::new(0.3, 0.4), 0.01, 0.01);
        let comps = lift_curve_components(&f, &c, &LiftOptions::default()).unwrap();
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.degree == 1));
    }
}
