//! Text and JSON forms of states, operators, partitions and functionals.
//!
//! | flag          | forms                                                          |
//! |---------------|----------------------------------------------------------------|
//! | `--rho`       | `diag:1/2,1/4,1/4`, `mixed:<d>`, `random:<d>`, JSON matrix     |
//! | `--mu`        | `zero`, `diag:1/4,-1/4,0`, `random:<scale>`, JSON matrix       |
//! | `--partition` | `coords`, `identity`, `groups:0,1|2`, `random:<k>`, JSON       |
//! | `--sym`       | `shannon`, `renyi`, `renyi:<α>`, `zero`, `lincomb:…`, JSON     |
//!
//! JSON may be given inline or as `@path`. A matrix is an array of rows whose
//! entries are numbers or `[re, im]` pairs; a partition is an array of
//! matrices or `{"blocks": [...]}`.

use qinfo_core::linalg::{CMat, Projection, ProjectionPartition, SignedOperator, State, C64};
use qinfo_core::random::{self, SeededRng};
use qinfo_core::rational::{self, Rational};
use qinfo_core::SymmetricInformation;
use serde_json::Value;

use crate::error::CliError;

pub const MATRIX_TOL: f64 = 1e-9;

fn load_json(s: &str) -> Result<Value, CliError> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?,
        None => s.to_string(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::schema(format!("invalid JSON: {e}")))
}

fn is_json(s: &str) -> bool {
    s.starts_with('[') || s.starts_with('{') || s.starts_with('@')
}

fn parse_rationals(list: &str) -> Result<Vec<Rational>, CliError> {
    list.split(',')
        .map(|t| rational::parse(t).ok_or_else(|| CliError::schema(format!("not a rational: {t:?}"))))
        .collect()
}

fn parse_usize(s: &str, what: &str) -> Result<usize, CliError> {
    s.trim().parse().map_err(|_| CliError::schema(format!("{what}: not a count: {s:?}")))
}

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.trim().parse().map_err(|_| CliError::schema(format!("{what}: not a number: {s:?}")))
}

fn entry(v: &Value) -> Result<C64, CliError> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(C64::new(re, im)),
            _ => Err(CliError::schema("matrix entry pair must hold two numbers")),
        },
        Value::String(s) => rational::parse(s)
            .map(|r| C64::new(rational::to_f64(&r), 0.0))
            .ok_or_else(|| CliError::schema(format!("not a number: {s:?}"))),
        _ => Err(CliError::schema("matrix entry must be a number or [re, im]")),
    }
}

pub fn matrix_from_json(v: &Value) -> Result<CMat, CliError> {
    let rows = v.as_array().ok_or_else(|| CliError::schema("matrix must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(CliError::schema("matrix is empty"));
    }
    let mut m = CMat::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| CliError::schema("matrix must be square"))?;
        for (j, x) in row.iter().enumerate() {
            m[(i, j)] = entry(x)?;
        }
    }
    Ok(m)
}

pub fn partition_from_json(v: &Value) -> Result<ProjectionPartition, CliError> {
    let blocks = match v {
        Value::Object(o) => o.get("blocks").ok_or_else(|| CliError::schema("partition object needs \"blocks\""))?,
        other => other,
    };
    let blocks = blocks.as_array().ok_or_else(|| CliError::schema("partition blocks must be an array"))?;
    let mats = blocks.iter().map(matrix_from_json).collect::<Result<Vec<_>, _>>()?;
    ProjectionPartition::from_matrices(mats, MATRIX_TOL).map_err(CliError::domain)
}

pub fn parse_state(s: &str, rng: &mut SeededRng) -> Result<State, CliError> {
    if is_json(s) {
        return State::from_matrix(matrix_from_json(&load_json(s)?)?, MATRIX_TOL).map_err(CliError::domain);
    }
    match s.split_once(':') {
        Some(("diag", list)) => State::from_weights(&parse_rationals(list)?).map_err(CliError::domain),
        Some(("mixed", d)) => Ok(State::maximally_mixed(positive(parse_usize(d, "mixed")?)?)),
        Some(("random", d)) => {
            let d = positive(parse_usize(d, "random")?)?;
            State::from_matrix(random::density_matrix(d, rng), MATRIX_TOL).map_err(CliError::domain)
        }
        _ => Err(CliError::schema(format!("unknown state form {s:?}"))),
    }
}

fn positive(d: usize) -> Result<usize, CliError> {
    if d == 0 {
        return Err(CliError::schema("dimension must be positive"));
    }
    Ok(d)
}

pub fn parse_mu(s: &str, d: usize, rng: &mut SeededRng) -> Result<SignedOperator, CliError> {
    let m = if is_json(s) {
        matrix_from_json(&load_json(s)?)?
    } else {
        match s.split_once(':').unwrap_or((s, "")) {
            ("zero", _) => CMat::zeros(d, d),
            ("diag", list) => {
                let v = parse_rationals(list)?;
                let mut m = CMat::zeros(v.len(), v.len());
                for (i, x) in v.iter().enumerate() {
                    m[(i, i)] = C64::new(rational::to_f64(x), 0.0);
                }
                m
            }
            ("random", scale) => {
                let scale = if scale.is_empty() { 1.0 } else { parse_f64(scale, "random")? };
                random::traceless_hermitian(d, rng) * C64::new(scale, 0.0)
            }
            _ => return Err(CliError::schema(format!("unknown operator form {s:?}"))),
        }
    };
    if m.nrows() != d {
        return Err(CliError::Domain {
            name: "DimensionMismatch".into(),
            message: format!("mu has dimension {}, state has {d}", m.nrows()),
        });
    }
    SignedOperator::new(m, MATRIX_TOL).map_err(CliError::domain)
}

/// `groups:0,1|2` → `[[0, 1], [2]]`.
pub fn parse_groups(list: &str) -> Result<Vec<Vec<usize>>, CliError> {
    list.split('|')
        .map(|g| g.split(',').filter(|t| !t.trim().is_empty()).map(|t| parse_usize(t, "groups")).collect())
        .collect()
}

fn check_indices(groups: &[Vec<usize>], d: usize) -> Result<(), CliError> {
    if let Some(&i) = groups.iter().flatten().find(|&&i| i >= d) {
        return Err(CliError::Domain { name: "DimensionMismatch".into(), message: format!("index {i} out of range for dimension {d}") });
    }
    Ok(())
}

pub fn parse_partition(s: &str, d: usize, rng: &mut SeededRng) -> Result<ProjectionPartition, CliError> {
    let p = if is_json(s) {
        partition_from_json(&load_json(s)?)?
    } else {
        match s.split_once(':').unwrap_or((s, "")) {
            ("coords", _) => ProjectionPartition::coordinates(d),
            ("identity", _) => ProjectionPartition::identity(d),
            ("groups", list) => {
                let groups = parse_groups(list)?;
                check_indices(&groups, d)?;
                ProjectionPartition::from_coordinate_groups(d, &groups, MATRIX_TOL).map_err(CliError::domain)?
            }
            ("random", k) => {
                let k = parse_usize(k, "random")?;
                if k == 0 || k > d {
                    return Err(CliError::Domain { name: "BlockCount".into(), message: format!("{k} blocks in dimension {d}") });
                }
                let u = random::unitary(d, rng);
                let sizes: Vec<usize> = (0..k).map(|i| d / k + usize::from(i < d % k)).collect();
                let mut start = 0;
                let blocks = sizes
                    .iter()
                    .map(|&s| {
                        let p = Projection::from_orthonormal_columns(&u.columns(start, s).into_owned());
                        start += s;
                        p
                    })
                    .collect();
                ProjectionPartition::new(blocks, MATRIX_TOL).map_err(CliError::domain)?
            }
            _ => return Err(CliError::schema(format!("unknown partition form {s:?}"))),
        }
    };
    if p.dim() != d {
        return Err(CliError::Domain { name: "DimensionMismatch".into(), message: format!("partition has dimension {}, state has {d}", p.dim()) });
    }
    Ok(p)
}

fn sym_from_json(v: &Value) -> Result<SymmetricInformation, CliError> {
    let kind = v.get("kind").and_then(Value::as_str).ok_or_else(|| CliError::schema("sym needs \"kind\""))?;
    match kind {
        "shannon" => Ok(SymmetricInformation::Shannon),
        "zero" => Ok(SymmetricInformation::zero()),
        "renyi" => {
            let a = v.get("alpha").and_then(Value::as_f64).ok_or_else(|| CliError::schema("renyi needs \"alpha\""))?;
            SymmetricInformation::renyi(a).map_err(CliError::domain)
        }
        "lincomb" => {
            let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| CliError::schema("lincomb needs \"terms\""))?;
            let terms = terms
                .iter()
                .map(|t| match t.as_array().map(Vec::as_slice) {
                    Some([c, s]) => Ok((c.as_f64().ok_or_else(|| CliError::schema("coefficient must be a number"))?, sym_from_json(s)?)),
                    _ => Err(CliError::schema("lincomb term must be [coefficient, sym]")),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SymmetricInformation::LinComb(terms))
        }
        other => Err(CliError::schema(format!("unknown sym kind {other:?}"))),
    }
}

/// `shannon`, `renyi` (order from `alpha`), `renyi:2`, `zero`, or
/// `lincomb:0.5*shannon+2*renyi:2`.
pub fn parse_sym(s: &str, alpha: Option<f64>) -> Result<SymmetricInformation, CliError> {
    if is_json(s) {
        return sym_from_json(&load_json(s)?);
    }
    if let Some(terms) = s.strip_prefix("lincomb:") {
        let terms = terms
            .split('+')
            .map(|t| {
                let (c, inner) = t.split_once('*').ok_or_else(|| CliError::schema(format!("lincomb term {t:?} needs c*sym")))?;
                Ok((parse_f64(c, "lincomb")?, parse_sym(inner, alpha)?))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        return Ok(SymmetricInformation::LinComb(terms));
    }
    match s.split_once(':').unwrap_or((s, "")) {
        ("shannon", _) => Ok(SymmetricInformation::Shannon),
        ("zero", _) => Ok(SymmetricInformation::zero()),
        ("renyi", "") => {
            let a = alpha.ok_or_else(|| CliError::schema("renyi needs --alpha or renyi:<alpha>"))?;
            SymmetricInformation::renyi(a).map_err(CliError::domain)
        }
        ("renyi", a) => SymmetricInformation::renyi(parse_f64(a, "renyi")?).map_err(CliError::domain),
        _ => Err(CliError::schema(format!("unknown sym form {s:?}"))),
    }
}
