//! JSON instance files. See `docs/instance-schema.md` for the format.

use std::fs;
use std::path::Path;

use advice_soco_core::model::{
    Convex1d, FiniteMetric, FiniteSpace, Instance, Plane, PiecewiseLinear, Polyhedral2d, Quadratic, RealLine,
    Switching, TableCost,
};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    /// Points on a line (`coords`) or an explicit distance matrix (`matrix`).
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        coords: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        matrix: Option<Vec<Vec<f64>>>,
    },
    /// `{0,1}^bits` with `scale · ‖u − u'‖₁`.
    Cube { bits: u32, scale: f64 },
    /// Interval `[lo, hi]`; missing bounds are unbounded.
    Line {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lo: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        hi: Option<f64>,
    },
    Plane,
}

/// A finite table entry: a number or the string `"inf"`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TableValue {
    Finite(f64),
    Word(InfWord),
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub enum InfWord {
    #[serde(rename = "inf")]
    Inf,
}

impl TableValue {
    fn value(self) -> f64 {
        match self {
            TableValue::Finite(v) => v,
            TableValue::Word(InfWord::Inf) => f64::INFINITY,
        }
    }

    fn from_value(v: f64) -> Self {
        if v.is_infinite() {
            TableValue::Word(InfWord::Inf)
        } else {
            TableValue::Finite(v)
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CostSpec {
    Table(Vec<TableValue>),
    Piecewise {
        knots: Vec<f64>,
        slopes: Vec<f64>,
        value_at_first_knot: f64,
    },
    Abs {
        center: f64,
        scale: f64,
        #[serde(default)]
        offset: f64,
    },
    Quadratic {
        curvature: f64,
        center: f64,
        #[serde(default)]
        offset: f64,
    },
    Polyhedral {
        center: [f64; 2],
        axis: [f64; 2],
        alpha: f64,
        penalty: f64,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq, Default)]
#[serde(rename_all = "snake_case")]
pub enum SwitchingSpec {
    #[default]
    Metric,
    HalfSquared,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub space: SpaceSpec,
    pub x0: Value,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    pub costs: Vec<CostSpec>,
    #[serde(default)]
    pub switching: SwitchingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predictions: Option<Vec<Value>>,
}

/// An instance of any supported kind together with its predictions.
#[derive(Debug, Clone)]
pub enum Loaded {
    Finite(Instance<FiniteSpace>, Option<Vec<usize>>),
    Line(Instance<RealLine>, Option<Vec<f64>>),
    Plane(Instance<Plane>, Option<Vec<[f64; 2]>>),
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::config(msg)
}

fn index(v: &Value, what: &str) -> CliResult<usize> {
    v.as_u64()
        .map(|i| i as usize)
        .ok_or_else(|| bad(format!("{what} must be a point index (non-negative integer), got {v}")))
}

fn real(v: &Value, what: &str) -> CliResult<f64> {
    v.as_f64().ok_or_else(|| bad(format!("{what} must be a number, got {v}")))
}

fn pair(v: &Value, what: &str) -> CliResult<[f64; 2]> {
    let arr = v.as_array().filter(|a| a.len() == 2);
    match arr {
        Some(a) => Ok([real(&a[0], what)?, real(&a[1], what)?]),
        None => Err(bad(format!("{what} must be a pair [x, y], got {v}"))),
    }
}

fn switching(s: SwitchingSpec) -> Switching {
    match s {
        SwitchingSpec::Metric => Switching::Metric,
        SwitchingSpec::HalfSquared => Switching::HalfSquared,
    }
}

impl InstanceFile {
    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize") + "\n"
    }

    pub fn load(&self) -> CliResult<Loaded> {
        if let Some(t) = self.horizon {
            if t != self.costs.len() {
                return Err(bad(format!("T = {t} but {} costs are given", self.costs.len())));
            }
        }
        if self.costs.is_empty() {
            return Err(bad("an instance needs at least one round (T >= 1)"));
        }
        let preds = self.predictions.as_deref();
        if let Some(p) = preds {
            if p.len() != self.costs.len() {
                return Err(bad(format!(
                    "{} predictions for an instance of horizon {}",
                    p.len(),
                    self.costs.len()
                )));
            }
        }
        let sw = switching(self.switching);
        match &self.space {
            SpaceSpec::Finite { .. } | SpaceSpec::Cube { .. } => {
                let space = match &self.space {
                    SpaceSpec::Finite { coords: Some(c), matrix: None } => FiniteSpace::from_coords(c.clone())?,
                    SpaceSpec::Finite { coords: None, matrix: Some(m) } => {
                        let n = m.len();
                        if m.iter().any(|row| row.len() != n) {
                            return Err(bad("distance matrix must be square"));
                        }
                        FiniteSpace::from_matrix(n, m.concat())?
                    }
                    SpaceSpec::Finite { .. } => {
                        return Err(bad("finite space needs exactly one of `coords` or `matrix`"))
                    }
                    SpaceSpec::Cube { bits, scale } => FiniteSpace::cube(*bits, *scale)?,
                    _ => unreachable!(),
                };
                let costs = self
                    .costs
                    .iter()
                    .enumerate()
                    .map(|(t, c)| match c {
                        CostSpec::Table(vals) if vals.len() == space.len() => {
                            Ok(TableCost::new(vals.iter().map(|v| v.value()).collect())?)
                        }
                        CostSpec::Table(vals) => Err(bad(format!(
                            "round {}: table has {} entries, space has {} points",
                            t + 1,
                            vals.len(),
                            space.len()
                        ))),
                        _ => Err(bad(format!("round {}: finite spaces take `table` costs", t + 1))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let x0 = index(&self.x0, "x0")?;
                let inst = Instance::with_switching(space, x0, costs, sw)?;
                let preds = preds
                    .map(|p| p.iter().map(|v| index(v, "prediction")).collect::<CliResult<Vec<_>>>())
                    .transpose()?;
                Ok(Loaded::Finite(inst, preds))
            }
            SpaceSpec::Line { lo, hi } => {
                let space = RealLine::new(lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY))?;
                let costs = self
                    .costs
                    .iter()
                    .enumerate()
                    .map(|(t, c)| -> CliResult<Convex1d> {
                        Ok(match c {
                            CostSpec::Piecewise {
                                knots,
                                slopes,
                                value_at_first_knot,
                            } => PiecewiseLinear::new(knots.clone(), slopes.clone(), *value_at_first_knot)?.into(),
                            CostSpec::Abs { center, scale, offset } => {
                                PiecewiseLinear::abs(*center, *scale, *offset)?.into()
                            }
                            CostSpec::Quadratic {
                                curvature,
                                center,
                                offset,
                            } => Quadratic::new(*curvature, *center, *offset)?.into(),
                            _ => {
                                return Err(bad(format!(
                                    "round {}: line spaces take `piecewise`, `abs` or `quadratic` costs",
                                    t + 1
                                )))
                            }
                        })
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let x0 = real(&self.x0, "x0")?;
                let inst = Instance::with_switching(space, x0, costs, sw)?;
                let preds = preds
                    .map(|p| p.iter().map(|v| real(v, "prediction")).collect::<CliResult<Vec<_>>>())
                    .transpose()?;
                Ok(Loaded::Line(inst, preds))
            }
            SpaceSpec::Plane => {
                let costs = self
                    .costs
                    .iter()
                    .enumerate()
                    .map(|(t, c)| match c {
                        CostSpec::Polyhedral {
                            center,
                            axis,
                            alpha,
                            penalty,
                        } => Ok(Polyhedral2d::new(*center, *axis, *alpha, *penalty)?),
                        _ => Err(bad(format!("round {}: the plane takes `polyhedral` costs", t + 1))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                let x0 = pair(&self.x0, "x0")?;
                let inst = Instance::with_switching(Plane, x0, costs, sw)?;
                let preds = preds
                    .map(|p| p.iter().map(|v| pair(v, "prediction")).collect::<CliResult<Vec<_>>>())
                    .transpose()?;
                Ok(Loaded::Plane(inst, preds))
            }
        }
    }

    /// File form of a finite instance.
    pub fn from_finite(inst: &Instance<FiniteSpace>, preds: Option<&[usize]>) -> Self {
        let space = match inst.space.metric() {
            FiniteMetric::Line { coords } => SpaceSpec::Finite {
                coords: Some(coords.clone()),
                matrix: None,
            },
            FiniteMetric::Matrix { n, dist } => SpaceSpec::Finite {
                coords: None,
                matrix: Some(dist.chunks(*n).map(<[f64]>::to_vec).collect()),
            },
            FiniteMetric::Cube { bits, scale } => SpaceSpec::Cube {
                bits: *bits,
                scale: *scale,
            },
        };
        InstanceFile {
            space,
            x0: Value::from(inst.x0),
            horizon: Some(inst.horizon()),
            costs: inst
                .costs
                .iter()
                .map(|f| CostSpec::Table(f.values().iter().map(|&v| TableValue::from_value(v)).collect()))
                .collect(),
            switching: SwitchingSpec::Metric,
            predictions: preds.map(|p| p.iter().map(|&i| Value::from(i)).collect()),
        }
    }

    /// File form of a line instance with piecewise-linear costs.
    pub fn from_line(inst: &Instance<RealLine>, preds: Option<&[f64]>) -> CliResult<Self> {
        let costs = inst
            .costs
            .iter()
            .map(|f| match f {
                Convex1d::Piecewise(p) => Ok(CostSpec::Piecewise {
                    knots: p.knots().to_vec(),
                    slopes: p.slopes().to_vec(),
                    value_at_first_knot: p.value_at_first_knot(),
                }),
                Convex1d::Quadratic(_) => Err(bad("quadratic costs have no file form here")),
            })
            .collect::<CliResult<Vec<_>>>()?;
        let finite = |x: f64| x.is_finite().then_some(x);
        Ok(InstanceFile {
            space: SpaceSpec::Line {
                lo: finite(inst.space.lo),
                hi: finite(inst.space.hi),
            },
            x0: Value::from(inst.x0),
            horizon: Some(inst.horizon()),
            costs,
            switching: SwitchingSpec::Metric,
            predictions: preds.map(|p| p.iter().map(|&x| Value::from(x)).collect()),
        })
    }
}
