use std::fmt;

use qinfo_core::decompose::{DecomposeError, OracleError};

/// Exit codes: 0 success, 1 I/O, 2 schema, 3 domain, 4 oracle protocol,
/// 5 additivity spot check, 6 verification.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Io(String),
    Schema(String),
    Domain { name: String, message: String },
    Oracle(String),
    Additivity(String),
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Io(_) => 1,
            Self::Schema(_) => 2,
            Self::Domain { .. } => 3,
            Self::Oracle(_) => 4,
            Self::Additivity(_) => 5,
            Self::Verification(_) => 6,
        }
    }

    pub fn schema(msg: impl Into<String>) -> Self {
        Self::Schema(msg.into())
    }

    /// A domain error named after the innermost error variant.
    pub fn domain<E: fmt::Debug + fmt::Display>(e: E) -> Self {
        Self::Domain { name: variant_name(&format!("{e:?}")), message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Io(m) => write!(f, "error[Io]: {m}"),
            Self::Schema(m) => write!(f, "error[Schema]: {m}"),
            Self::Domain { name, message } => write!(f, "error[{name}]: {message}"),
            Self::Oracle(m) => write!(f, "error[OracleProtocol]: {m}"),
            Self::Additivity(m) => write!(f, "error[OracleNotAdditive]: {m}"),
            Self::Verification(m) => write!(f, "error[Verification]: {m}"),
        }
    }
}

/// `Structure(Linalg(NotPositive { .. }))` → `NotPositive`.
fn variant_name(debug: &str) -> String {
    let mut rest = debug;
    loop {
        let end = rest.find(|c: char| !(c.is_alphanumeric() || c == '_')).unwrap_or(rest.len());
        let ident = &rest[..end];
        let tail = &rest[end..];
        match tail.strip_prefix('(') {
            Some(inner) if inner.starts_with(|c: char| c.is_ascii_uppercase()) => rest = inner,
            _ => return ident.to_string(),
        }
    }
}

impl From<DecomposeError> for CliError {
    fn from(e: DecomposeError) -> Self {
        match e {
            DecomposeError::Oracle(OracleError::Protocol(m)) => Self::Oracle(m),
            e @ DecomposeError::OracleNotAdditive { .. } => Self::Additivity(e.to_string()),
            e => Self::domain(e),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn innermost_variant() {
        assert_eq!(variant_name("Structure(Linalg(NotPositive { min_eigenvalue: -1.0 }))"), "NotPositive");
        assert_eq!(variant_name("RankInfeasible { rank_p: 1 }"), "RankInfeasible");
        assert_eq!(variant_name("Oracle(Evaluation(\"x\"))"), "Evaluation");
        assert_eq!(variant_name("NotFaithful"), "NotFaithful");
    }
}
