//! Literal parsers for command-line values.

use std::str::FromStr;

use num_complex::Complex64;

fn real(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let x: f64 = t.parse().map_err(|_| format!("`{t}` is not a number"))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{t}` is not finite"))
    }
}

/// "re,im", or a bare real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex64);

impl FromStr for ComplexArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(',').collect();
        let z = match parts.as_slice() {
            [re] => Complex64::new(real(re)?, 0.0),
            [re, im] => Complex64::new(real(re)?, real(im)?),
            _ => return Err(format!("malformed complex literal `{s}` (expected re,im)")),
        };
        Ok(ComplexArg(z))
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorArg(pub Vec<f64>);

impl FromStr for VectorArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(real)
            .collect::<Result<_, _>>()
            .map(VectorArg)
    }
}

/// "start:stop:count:{lin|geom}", a single real, or a comma list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct GridArg(pub Vec<f64>);

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if !s.contains(':') {
            return s.parse::<VectorArg>().map(|v| GridArg(v.0));
        }
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, count, kind] = parts.as_slice() else {
            return Err(format!(
                "malformed grid `{s}` (expected start:stop:count:lin|geom)"
            ));
        };
        let (a, b) = (real(start)?, real(stop)?);
        let count: usize = count
            .trim()
            .parse()
            .ok()
            .filter(|c| *c >= 1)
            .ok_or_else(|| format!("grid count `{count}` must be a positive integer"))?;
        let step = |k: usize| k as f64 / (count - 1).max(1) as f64;
        let mut pts: Vec<f64> = match *kind {
            "lin" => (0..count).map(|k| a + (b - a) * step(k)).collect(),
            "geom" => {
                if !(a > 0.0 && b > 0.0) {
                    return Err(format!("geometric grid `{s}` needs positive endpoints"));
                }
                let ratio = (b / a).powf(1.0 / (count - 1).max(1) as f64);
                (0..count).map(|k| a * ratio.powi(k as i32)).collect()
            }
            other => return Err(format!("unknown grid spacing `{other}` (lin or geom)")),
        };
        if count > 1 {
            pts[count - 1] = b;
        }
        Ok(GridArg(pts))
    }
}

/// Rewrites `key=value` words into `--key=value` so both spellings work.
pub fn normalize_args(args: impl IntoIterator<Item = String>) -> Vec<String> {
    args.into_iter()
        .enumerate()
        .map(|(i, a)| {
            let Some((key, _)) = a.split_once('=') else {
                return a;
            };
            let is_key = key.starts_with(|c: char| c.is_ascii_lowercase())
                && key
                    .chars()
                    .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '-' || c == '_');
            if i > 0 && is_key {
                format!("--{}", a.replacen('_', "-", key.matches('_').count()))
            } else {
                a
            }
        })
        .collect()
}
