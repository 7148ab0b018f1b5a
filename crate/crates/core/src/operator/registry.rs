//! String identifiers for gallery operators.
//!
//! Grammar: `name[:params]` where `params` is a comma-separated list of `key=value` pairs.
//! Symbol operators take either a named symbol (`toeplitz:atilde`) or coefficient pairs
//! `power=value` (`laurent:3=0.5,-1=0.5`). Complex values are written `1`, `-2.5`, `i`,
//! `0.5-1.5i`. The diagonal operator takes a value list (`diag:3,2,1`).

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::operator::gallery::{self, Symbol};
use crate::operator::oracle::ColumnOracle;
use crate::scalar::{c64, C64};

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub name: String,
    pub params: BTreeMap<String, String>,
    /// Positional arguments (symbol names, diagonal values).
    pub args: Vec<String>,
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        let mut parts: Vec<String> = self.args.clone();
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        if !parts.is_empty() {
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

pub const GALLERY: &[(&str, &str)] = &[
    ("schrodinger_t1", "tridiagonal, unit off-diagonals, potential 5 sin(j)^2/sqrt(j) for j <= 10"),
    ("mixed_diag_t2[:seed=S]", "diag(2, 1.5i, -1.25, -1.125i) plus folded bilateral shift, mixed on e1..e9"),
    ("bidiagonal_a", "diagonal 5cos(j)/4 + 2i sin(j), i above, 1 below"),
    ("blockdiag_t", "4x4 block plus bidiagonal tail t_j = 1 + 0.5(sin j + i cos j)"),
    ("toeplitz:SYMBOL", "Toeplitz operator T(a); SYMBOL is a3, atilde, t or power=value pairs"),
    ("laurent:SYMBOL", "Laurent operator L(a), folded onto N"),
    ("shift", "unilateral shift"),
    ("bilateral_shift", "bilateral shift, folded"),
    ("jacobi_t3", "zero diagonal, off-diagonals 3,1,3,1,..."),
    ("pt_h1[:gamma=G]", "x_{n-1} + x_{n+1} + V_n x_n, V_n = cos n + i G sin n on even n"),
    ("feinberg_zee[:g=G,p=P,seed=S]", "random hopping signs, couplings e^{-g} below and e^{g} above"),
    ("hatano_nelson[:g=G,p=P,seed=S]", "asymmetric hopping with random potential +-1"),
    ("diag_harmonic", "diag(1, 1/2, 1/3, ...)"),
    ("diag:V1,V2,...", "diagonal with listed values, the last repeated"),
];

pub fn parse_complex(s: &str) -> Result<C64> {
    let bad = || Error::InvalidInput(format!("cannot parse complex number `{s}`"));
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(bad());
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not the leading one and not part of an exponent
        let bytes = body.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && bytes[k - 1] != b'e' && bytes[k - 1] != b'E' {
                split = Some(k);
                break;
            }
        }
        let imag = |x: &str| -> Result<f64> {
            match x {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => x.parse::<f64>().map_err(|_| bad()),
            }
        };
        return match split {
            Some(k) => Ok(c64(body[..k].parse::<f64>().map_err(|_| bad())?, imag(&body[k..])?)),
            None => Ok(c64(0.0, imag(body)?)),
        };
    }
    Ok(c64(t.parse::<f64>().map_err(|_| bad())?, 0.0))
}

pub fn parse_operator_id(id: &str) -> Result<OperatorSpec> {
    let id = id.trim();
    let (name, rest) = match id.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (id, None),
    };
    if name.is_empty() {
        return Err(Error::UnknownOperator { id: id.into(), reason: "empty name".into() });
    }
    let mut spec = OperatorSpec { name: name.to_string(), params: BTreeMap::new(), args: Vec::new() };
    if let Some(rest) = rest {
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => {
                    if spec.params.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                        return Err(Error::UnknownOperator { id: id.into(), reason: format!("duplicate key `{k}`") });
                    }
                }
                None => spec.args.push(part.to_string()),
            }
        }
    }
    Ok(spec)
}

fn take_f64(spec: &OperatorSpec, key: &str, default: f64) -> Result<f64> {
    match spec.params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::UnknownOperator {
            id: spec.to_string(),
            reason: format!("`{key}` must be a real number, got `{v}`"),
        }),
        None => Ok(default),
    }
}

fn take_u64(spec: &OperatorSpec, key: &str, default: u64) -> Result<u64> {
    match spec.params.get(key) {
        Some(v) => v.parse().map_err(|_| Error::UnknownOperator {
            id: spec.to_string(),
            reason: format!("`{key}` must be an unsigned integer, got `{v}`"),
        }),
        None => Ok(default),
    }
}

fn check_keys(spec: &OperatorSpec, allowed: &[&str], allow_args: bool) -> Result<()> {
    let mut bad: Vec<String> = spec.params.keys().filter(|k| !allowed.contains(&k.as_str())).cloned().collect();
    if !allow_args && !spec.args.is_empty() {
        bad.extend(spec.args.iter().cloned());
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::UnknownOperator {
            id: spec.to_string(),
            reason: format!("unexpected parameters: {}", bad.join(", ")),
        })
    }
}

fn parse_symbol(spec: &OperatorSpec) -> Result<Symbol> {
    if spec.args.len() == 1 && spec.params.is_empty() {
        return match spec.args[0].as_str() {
            "a3" => Ok(gallery::symbol_a3()),
            "atilde" => Ok(gallery::symbol_atilde()),
            "t" => Ok(vec![(1, c64(1.0, 0.0))]),
            "t_plus_tinv" => Ok(vec![(1, c64(1.0, 0.0)), (-1, c64(1.0, 0.0))]),
            other => Err(Error::UnknownOperator { id: spec.to_string(), reason: format!("unknown symbol `{other}`") }),
        };
    }
    if !spec.args.is_empty() || spec.params.is_empty() {
        return Err(Error::UnknownOperator {
            id: spec.to_string(),
            reason: "expected a symbol name or power=value pairs".into(),
        });
    }
    spec.params
        .iter()
        .map(|(k, v)| {
            let p: i64 = k.parse().map_err(|_| Error::UnknownOperator {
                id: spec.to_string(),
                reason: format!("symbol power `{k}` is not an integer"),
            })?;
            Ok((p, parse_complex(v)?))
        })
        .collect()
}

/// Seed carried by the identifier, if any.
pub fn spec_seed(spec: &OperatorSpec) -> Option<u64> {
    spec.params.get("seed").and_then(|s| s.parse().ok())
}

/// Builds the operator; `seed` replaces the identifier's seed when given.
pub fn build_operator(spec: &OperatorSpec, seed: Option<u64>) -> Result<ColumnOracle> {
    let seed_of = |d: u64| -> Result<u64> {
        Ok(match seed {
            Some(s) => s,
            None => take_u64(spec, "seed", d)?,
        })
    };
    let op = match spec.name.as_str() {
        "schrodinger_t1" | "t1" => {
            check_keys(spec, &[], false)?;
            gallery::schrodinger_t1()
        }
        "mixed_diag_t2" | "t2" => {
            check_keys(spec, &["seed"], false)?;
            gallery::mixed_diag_t2(seed_of(1)?)
        }
        "bidiagonal_a" | "operator_a" => {
            check_keys(spec, &[], false)?;
            gallery::bidiagonal_a()
        }
        "blockdiag_t" => {
            check_keys(spec, &[], false)?;
            gallery::blockdiag_t()
        }
        "toeplitz" => gallery::toeplitz(&parse_symbol(spec)?)?,
        "laurent" => gallery::laurent(&parse_symbol(spec)?)?,
        "shift" | "unilateral_shift" => {
            check_keys(spec, &[], false)?;
            gallery::unilateral_shift()
        }
        "bilateral_shift" => {
            check_keys(spec, &[], false)?;
            gallery::bilateral_shift()
        }
        "jacobi_t3" | "t3" => {
            check_keys(spec, &[], false)?;
            gallery::jacobi_t3()
        }
        "pt_h1" | "h1" => {
            check_keys(spec, &["gamma"], false)?;
            gallery::pt_h1(take_f64(spec, "gamma", 1.0)?)
        }
        "feinberg_zee" | "feinberg_zee_h3" | "h3" => {
            check_keys(spec, &["g", "p", "seed"], false)?;
            gallery::feinberg_zee_h3(take_f64(spec, "g", 0.1)?, take_f64(spec, "p", 0.5)?, seed_of(1)?)?
        }
        "hatano_nelson" | "hatano_nelson_h4" | "h4" => {
            check_keys(spec, &["g", "p", "seed"], false)?;
            gallery::hatano_nelson_h4(take_f64(spec, "g", 0.5)?, take_f64(spec, "p", 0.5)?, seed_of(1)?)?
        }
        "diag_harmonic" => {
            check_keys(spec, &[], false)?;
            gallery::diag_harmonic()
        }
        "diag" => {
            check_keys(spec, &[], true)?;
            let vals: Result<Vec<C64>> = spec.args.iter().map(|a| parse_complex(a)).collect();
            gallery::diag_values(&vals?)?
        }
        other => {
            return Err(Error::UnknownOperator {
                id: spec.to_string(),
                reason: format!("no gallery entry named `{other}`"),
            })
        }
    };
    Ok(op.with_name(spec.to_string()))
}

pub fn operator_from_id(id: &str) -> Result<ColumnOracle> {
    build_operator(&parse_operator_id(id)?, None)
}
