use num_complex::Complex;

use super::curve::CurvePolyline;
use super::exact::ExactSystemInput;
use super::map::{MapSpec, RationalMap};
use super::pcf::MarkedSphere;
use super::sphere::Point;
use crate::annulus_engine::AnnularSystemSpec;
use crate::scalar::Real;

pub const LATTES_MAP_JSON: &str = include_str!("../../data/lattes_map.json");
pub const LATTES_ANNULAR_JSON: &str = include_str!("../../data/lattes_annular.json");
pub const CUBIC_ANNULUS_JSON: &str = include_str!("../../data/cubic_annulus.json");

/// `(z²+1)² / (4z(z-1)(z+1))`.
pub fn lattes<T: Real>() -> RationalMap<T> {
    let spec: MapSpec = serde_json::from_str(LATTES_MAP_JSON).expect("bundled map");
    RationalMap::from_spec(&spec).expect("bundled map is valid")
}

pub fn lattes_annular() -> AnnularSystemSpec {
    serde_json::from_str(LATTES_ANNULAR_JSON).expect("bundled spec")
}

pub fn cubic_annulus() -> AnnularSystemSpec {
    serde_json::from_str(CUBIC_ANNULUS_JSON).expect("bundled spec")
}

/// Geometry of the slit annulus `Ĉ ∖ ([-1,0] ∪ [1,∞])`.
#[derive(Debug, Clone)]
pub struct LattesData<T> {
    pub marked: MarkedSphere<T>,
    /// `|z + 1/2| = 1`.
    pub core: CurvePolyline<T>,
    /// `[-1, 0]` then `[1, ∞]`; they serve both as boundary and reference arcs.
    pub arcs: Vec<CurvePolyline<T>>,
    /// Thin ellipses hugging the inner and outer slit.
    pub proxies: [CurvePolyline<T>; 2],
}

impl<T: Real> LattesData<T> {
    pub fn new(nodes: usize) -> Self {
        let marked = MarkedSphere::new(
            vec![
                Point::real(-1.0),
                Point::real(0.0),
                Point::real(1.0),
                Point::Infinity,
            ],
            T::lit(1e-9),
        )
        .expect("distinct");
        let core = CurvePolyline::ellipse(
            nodes,
            Complex::new(T::lit(-0.5), T::zero()),
            T::one(),
            T::one(),
        );
        let arc_nodes = 257;
        let inner = CurvePolyline::sample(arc_nodes, false, |t| Point::real(-1.0 + t));
        let outer = CurvePolyline::sample(arc_nodes, false, |t| {
            let s = 1.0 - t;
            if s == 0.0 {
                Point::Infinity
            } else {
                Point::real(1.0 / s)
            }
        });
        let inner_proxy = CurvePolyline::ellipse(
            nodes,
            Complex::new(T::lit(-0.5), T::zero()),
            T::lit(0.6),
            T::lit(0.1),
        );
        let outer_proxy = CurvePolyline::closed(
            CurvePolyline::ellipse(
                nodes,
                Complex::new(T::lit(0.5), T::zero()),
                T::lit(0.6),
                T::lit(0.1),
            )
            .points
            .into_iter()
            .map(|p| Point::Finite(p.finite().unwrap().inv()))
            .collect(),
        );
        LattesData {
            marked,
            core,
            arcs: vec![inner, outer],
            proxies: [inner_proxy, outer_proxy],
        }
    }

    pub fn exact_input(&self) -> ExactSystemInput<T> {
        ExactSystemInput {
            marked: self.marked.clone(),
            cores: vec![self.core.clone()],
            boundaries: vec![[self.arcs[0].clone(), self.arcs[1].clone()]],
            arcs: Some(self.arcs.clone()),
        }
    }
}
