use serde::{Deserialize, Serialize};

use super::field::{Domain2D, Field2D};
use crate::error::{Error, Result};

/// Values below this fraction of the amplitude are set to exactly zero.
pub const PHANTOM_CUTOFF: f64 = 1e-14;
/// Largest admissible value on the domain boundary, relative to amplitude.
pub const BOUNDARY_TRACE: f64 = 1e-12;

/// Smooth test function `A exp(-|x - x0|^2 / s^2)`, or a sum of such bumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Phantom {
    GaussianBump {
        center: [f64; 2],
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
    TwoBumps {
        centers: [[f64; 2]; 2],
        width: f64,
        #[serde(default = "one")]
        amplitude: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl Phantom {
    pub fn gaussian(center: [f64; 2], width: f64) -> Self {
        Phantom::GaussianBump {
            center,
            width,
            amplitude: 1.0,
        }
    }

    fn parts(&self) -> (Vec<[f64; 2]>, f64, f64) {
        match self {
            Phantom::GaussianBump {
                center,
                width,
                amplitude,
            } => (vec![*center], *width, *amplitude),
            Phantom::TwoBumps {
                centers,
                width,
                amplitude,
            } => (centers.to_vec(), *width, *amplitude),
        }
    }
}

/// Samples the phantom on the grid after checking that its largest value
/// on the boundary of the domain is below `BOUNDARY_TRACE * A`.
pub fn make_phantom(spec: &Phantom, dom: &Domain2D) -> Result<Field2D> {
    let (centers, s, a) = spec.parts();
    if !(s.is_finite() && s > 0.0) || !a.is_finite() || a == 0.0 {
        return Err(Error::domain("phantom needs a positive width and a nonzero amplitude"));
    }
    let l = dom.half_width();
    let mut trace = 0.0;
    for c in &centers {
        let inside = c[0].abs() < l && c[1].abs() < l;
        if !inside {
            return Err(Error::domain("phantom center lies outside the domain"));
        }
        let d = l - c[0].abs().max(c[1].abs());
        trace += (-d * d / (s * s)).exp();
    }
    if trace >= BOUNDARY_TRACE {
        return Err(Error::domain(format!(
            "phantom boundary trace {trace:.3e} exceeds {BOUNDARY_TRACE:e} of the amplitude; use a narrower width"
        )));
    }
    Field2D::from_fn(*dom, |x, y| {
        let v: f64 = centers
            .iter()
            .map(|c| {
                let r2 = (x - c[0]).powi(2) + (y - c[1]).powi(2);
                let e = (-r2 / (s * s)).exp();
                if e < PHANTOM_CUTOFF {
                    0.0
                } else {
                    e
                }
            })
            .sum();
        a * v
    })
}
