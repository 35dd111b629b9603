use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

/// One grid point: parameter name to value.
pub type Point = BTreeMap<String, f64>;

/// Values of one parameter: a scalar, an explicit list, or an inclusive range.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ParamValues {
    Scalar(f64),
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

fn tidy(x: f64) -> f64 {
    // strip accumulated float noise so CSV output is stable
    (x * 1e12).round() / 1e12
}

impl ParamValues {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Self::Scalar(x) => Ok(vec![*x]),
            Self::List(v) if v.is_empty() => bail!("empty parameter list"),
            Self::List(v) => Ok(v.clone()),
            Self::Range { start, stop, step } => {
                if !(*step > 0.0) || stop < start {
                    bail!("range {start}:{stop}:{step} needs step > 0 and stop >= start");
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
                Ok((0..n).map(|i| tidy(start + i as f64 * step)).collect())
            }
        }
    }
}

/// Parse `k=v[,v...]` or `k=start:stop:step`.
pub fn parse_param(s: &str) -> Result<(String, ParamValues)> {
    let (k, v) = s.split_once('=').with_context(|| format!("parameter '{s}' is not key=value"))?;
    let k = k.trim();
    if k.is_empty() {
        bail!("parameter '{s}' has an empty name");
    }
    let num = |t: &str| -> Result<f64> { t.trim().parse().with_context(|| format!("bad number '{t}' in '{s}'")) };
    let parts: Vec<&str> = v.split(':').collect();
    let values = match parts.as_slice() {
        [a, b, c] => ParamValues::Range { start: num(a)?, stop: num(b)?, step: num(c)? },
        [single] => {
            let list = single.split(',').map(num).collect::<Result<Vec<_>>>()?;
            if list.len() == 1 {
                ParamValues::Scalar(list[0])
            } else {
                ParamValues::List(list)
            }
        }
        _ => bail!("parameter '{s}' must be a list or start:stop:step"),
    };
    Ok((k.to_string(), values))
}

/// Cartesian product in lexicographic parameter order, first name slowest.
pub fn expand(params: &BTreeMap<String, ParamValues>) -> Result<Vec<Point>> {
    let mut points = vec![Point::new()];
    for (k, v) in params {
        let vals = v.values().with_context(|| format!("parameter '{k}'"))?;
        points = points
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |x| {
                    let mut q = p.clone();
                    q.insert(k.clone(), *x);
                    q
                })
            })
            .collect();
    }
    Ok(points)
}
