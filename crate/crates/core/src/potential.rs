//! Potentials and Birkhoff sums.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::scalar::Scalar;
use crate::system::{step, Point, SmoothSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialKind {
    ContinuousAnalytic,
    LocallyConstantSymbolic,
    /// −log|det Df|Eᵘ|; only defined on saddle orbits.
    VolumeUnstable,
}

fn one() -> f64 {
    1.0
}

/// Serializable potential descriptor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant {
        value: f64,
    },
    /// `scale · x_axis`.
    Coordinate {
        axis: usize,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Value `values[i]` on the cylinder of symbol i.
    Cylinder {
        values: Vec<f64>,
    },
    /// `horseshoe` for x ≤ 1, `sink` for x ≥ 2, smoothstep in between.
    SinkBump {
        #[serde(default)]
        horseshoe: f64,
        #[serde(default = "one")]
        sink: f64,
    },
    VolumeUnstable,
}

impl PotentialSpec {
    pub fn build<T: Scalar>(&self) -> Result<Potential<T>> {
        Potential::from_spec(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Rule<T> {
    Constant(T),
    Coordinate { axis: usize, scale: T },
    Cylinder(Vec<T>),
    SinkBump { horseshoe: T, sink: T },
    Volume,
}

/// A real function on phase space, tagged with its kind.
#[derive(Clone, Debug, PartialEq)]
pub struct Potential<T> {
    name: String,
    kind: PotentialKind,
    rule: Rule<T>,
}

impl<T: Scalar> Potential<T> {
    pub fn from_spec(spec: &PotentialSpec) -> Result<Self> {
        use PotentialKind::*;
        let (name, kind, rule) = match spec {
            PotentialSpec::Zero => ("zero".to_string(), ContinuousAnalytic, Rule::Constant(T::zero())),
            PotentialSpec::Constant { value } => {
                finite("value", *value)?;
                (format!("constant({value})"), ContinuousAnalytic, Rule::Constant(T::lit(*value)))
            }
            PotentialSpec::Coordinate { axis, scale } => {
                finite("scale", *scale)?;
                if *axis >= crate::linalg::MAX_DIM {
                    return Err(Error::param("axis", "out of range"));
                }
                (
                    format!("coordinate({axis})"),
                    ContinuousAnalytic,
                    Rule::Coordinate {
                        axis: *axis,
                        scale: T::lit(*scale),
                    },
                )
            }
            PotentialSpec::Cylinder { values } => {
                if values.is_empty() {
                    return Err(Error::param("values", "need one value per symbol"));
                }
                for v in values {
                    finite("values", *v)?;
                }
                (
                    "cylinder".to_string(),
                    LocallyConstantSymbolic,
                    Rule::Cylinder(values.iter().map(|&v| T::lit(v)).collect()),
                )
            }
            PotentialSpec::SinkBump { horseshoe, sink } => {
                finite("horseshoe", *horseshoe)?;
                finite("sink", *sink)?;
                (
                    "sink_bump".to_string(),
                    ContinuousAnalytic,
                    Rule::SinkBump {
                        horseshoe: T::lit(*horseshoe),
                        sink: T::lit(*sink),
                    },
                )
            }
            PotentialSpec::VolumeUnstable => ("volume_unstable".to_string(), VolumeUnstable, Rule::Volume),
        };
        Ok(Self { name, kind, rule })
    }

    pub fn zero() -> Self {
        Self::from_spec(&PotentialSpec::Zero).expect("zero potential")
    }

    pub fn constant(value: f64) -> Self {
        Self::from_spec(&PotentialSpec::Constant { value }).expect("finite constant")
    }

    /// Locally constant potential with value `values[i]` on symbol i.
    pub fn cylinder(values: &[f64]) -> Result<Self> {
        Self::from_spec(&PotentialSpec::Cylinder {
            values: values.to_vec(),
        })
    }

    pub fn volume_unstable() -> Self {
        Self::from_spec(&PotentialSpec::VolumeUnstable).expect("volume potential")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> PotentialKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.rule == Rule::Constant(T::zero())
    }

    /// φ(p). Volume potentials are rejected.
    pub fn eval<S: SmoothSystem<T> + ?Sized>(&self, system: &S, p: &Vector<T>) -> Result<T> {
        match &self.rule {
            Rule::Constant(c) => Ok(*c),
            Rule::Coordinate { axis, scale } => Ok(*scale * p[*axis]),
            Rule::Cylinder(values) => {
                let s = system.symbol_at(p).ok_or_else(|| Error::NoCoding {
                    potential: self.name.clone(),
                    system: system.name().to_string(),
                })?;
                values.get(s).copied().ok_or_else(|| {
                    Error::param("values", format!("no value for symbol {s}"))
                })
            }
            Rule::SinkBump { horseshoe, sink } => {
                let t = (p[0] - T::one()).max(T::zero()).min(T::one());
                let w = t * t * (T::lit(3.0) - T::lit(2.0) * t);
                Ok(*horseshoe + (*sink - *horseshoe) * w)
            }
            Rule::Volume => Err(Error::VolumePotential(self.name.clone())),
        }
    }

    /// Minimum over a grid of U with `resolution` nodes per axis.
    pub fn min_on_grid<S: SmoothSystem<T> + ?Sized>(&self, system: &S, resolution: usize) -> Result<T> {
        let per_axis = vec![resolution.max(2); system.dim()];
        let mut best = T::infinity();
        for v in system.region().grid(&per_axis) {
            best = best.min(self.eval(system, &v)?);
        }
        Ok(best)
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, "must be finite"))
    }
}

/// S_nφ(p) = Σ_{k<n} φ(fᵏp).
pub fn birkhoff_sum<T: Scalar, S: SmoothSystem<T> + ?Sized>(
    system: &S,
    phi: &Potential<T>,
    p: &Point<T>,
    n: usize,
) -> Result<T> {
    if phi.kind == PotentialKind::VolumeUnstable {
        return Err(Error::VolumePotential(phi.name.clone()));
    }
    let mut acc = T::zero();
    let mut v = p.coords;
    for k in 0..n {
        acc = acc + phi.eval(system, &v)?;
        if k + 1 < n {
            v = step(system, &v, true).ok_or(Error::Escaped { step: k as i64 + 1 })?;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::catalog::{CatMap, LinearHorseshoe, SinkHorseshoe};

    #[test]
    fn constant_sum() {
        let cat = CatMap::<f64>::standard();
        let phi = Potential::constant(0.3);
        let s = birkhoff_sum(&cat, &phi, &Point::torus(&[0.2, 0.7]), 10).unwrap();
        assert!((s - 3.0).abs() < 1e-12);
    }

    #[test]
    fn coordinate_at_fixed_point() {
        let cat = CatMap::<f64>::standard();
        let phi = Potential::from_spec(&PotentialSpec::Coordinate { axis: 0, scale: 1.0 }).unwrap();
        let s = birkhoff_sum(&cat, &phi, &Point::torus(&[0.0, 0.0]), 5).unwrap();
        assert_eq!(s, 0.0);
    }

    #[test]
    fn cylinder_on_period_two_word() {
        let hs = LinearHorseshoe::<f64>::standard();
        // The period-2 orbit with itinerary 01: y-coordinates solve
        // y1 = 4 y0, y0 = 4 (y1 − 3/4).
        let y0 = 0.2;
        let y1 = 0.8;
        assert!((4.0f64 * (y1 - 0.75) - y0).abs() < 1e-15 && (4.0f64 * y0 - y1).abs() < 1e-15);
        let x0 = 0.6;
        let (a, b) = (0.37, -1.2);
        let phi = Potential::cylinder(&[a, b]).unwrap();
        let s = birkhoff_sum(&hs, &phi, &Point::planar(&[x0, y0]), 2).unwrap();
        assert!((s - (a + b)).abs() < 1e-15);
    }

    #[test]
    fn volume_potential_rejected() {
        let cat = CatMap::<f64>::standard();
        let err = birkhoff_sum(&cat, &Potential::volume_unstable(), &Point::torus(&[0.1, 0.1]), 3);
        assert!(matches!(err, Err(Error::VolumePotential(_))));
    }

    #[test]
    fn sink_bump_values() {
        let sys = SinkHorseshoe::<f64>::standard();
        let phi = Potential::from_spec(&PotentialSpec::SinkBump {
            horseshoe: 0.0,
            sink: 1.0,
        })
        .unwrap();
        assert_eq!(phi.eval(&sys, &[0.5, 0.5, 0.0]).unwrap(), 0.0);
        assert_eq!(phi.eval(&sys, &sys.sink()).unwrap(), 1.0);
        assert_eq!(phi.min_on_grid(&sys, 16).unwrap(), 0.0);
    }
}
