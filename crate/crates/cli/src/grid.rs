//! Sweep grids: `name=start:stop[:step]` or `name=v1,v2,...`.

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub values: Vec<f64>,
}

fn number(s: &str) -> Result<f64, CliError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad grid value '{s}'")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("bad grid value '{s}'")))
    }
}

/// Parses one axis. `default_name` applies when the argument has no `name=`.
pub fn parse_axis(arg: &str, default_name: Option<&str>) -> Result<Axis, CliError> {
    let (name, body) = match arg.split_once('=') {
        Some((n, b)) => (n.trim().to_string(), b),
        None => match default_name {
            Some(d) => (d.to_string(), arg),
            None => return Err(CliError::Usage(format!("grid '{arg}' needs name=values"))),
        },
    };
    if name.is_empty() {
        return Err(CliError::Usage(format!("grid '{arg}' has an empty name")));
    }
    let body = body.trim();
    let values = if body.is_empty() {
        Vec::new()
    } else if body.contains(':') {
        let parts: Vec<f64> = body.split(':').map(number).collect::<Result<_, _>>()?;
        let (start, stop, step) = match parts[..] {
            [a, b] => (a, b, 1.0),
            [a, b, c] => (a, b, c),
            _ => {
                return Err(CliError::Usage(format!(
                    "grid range '{body}' is not start:stop[:step]"
                )))
            }
        };
        if step <= 0.0 {
            return Err(CliError::Usage(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if stop < start {
            Vec::new()
        } else {
            // stop is inclusive when it lies on the lattice up to rounding
            let count = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        }
    } else {
        body.split(',').map(number).collect::<Result<_, _>>()?
    };
    if values.is_empty() {
        return Err(CliError::Usage(format!("grid '{arg}' is empty")));
    }
    Ok(Axis { name, values })
}

/// Cartesian product with the first axis varying slowest.
pub fn points(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out
}

pub fn as_count(name: &str, v: f64) -> Result<u64, CliError> {
    if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
        Ok(v as u64)
    } else {
        Err(CliError::Usage(format!(
            "{name} must be a nonnegative integer, got {v}"
        )))
    }
}
