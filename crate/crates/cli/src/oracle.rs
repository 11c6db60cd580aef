//! Oracle specs: `builtin:<name>` families and `exec:<command>` subprocesses.
//!
//! Subprocess protocol: for each query the CLI writes one line of JSON,
//! `{"dim": d, "blocks": [matrix, …]}`, to the child's stdin and reads one
//! line holding a decimal value from its stdout. Anything else, including
//! end of stream, is a protocol failure.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, ChildStdout, Command, Stdio};

use qinfo_core::decompose::{ConditionalOracle, InformationOracle, NoisyOracle, OracleError};
use qinfo_core::gallery;
use qinfo_core::info::{self, GeneralInformation};
use qinfo_core::linalg::{Projection, ProjectionPartition, SignedOperator, State};

use crate::error::CliError;
use crate::report;
use crate::spec;

pub struct ExecOracle {
    child: Child,
    stdin: ChildStdin,
    stdout: BufReader<ChildStdout>,
    line: String,
}

impl ExecOracle {
    /// Spawns `command`, split on whitespace into program and arguments.
    pub fn spawn(command: &str) -> Result<Self, CliError> {
        let mut parts = command.split_whitespace();
        let program = parts.next().ok_or_else(|| CliError::schema("exec: needs a command"))?;
        let mut child = Command::new(program)
            .args(parts)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| CliError::Oracle(format!("cannot start {program:?}: {e}")))?;
        let stdin = child.stdin.take().expect("piped stdin");
        let stdout = BufReader::new(child.stdout.take().expect("piped stdout"));
        Ok(Self { child, stdin, stdout, line: String::new() })
    }
}

impl InformationOracle for ExecOracle {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        let request = report::partition_request(p).to_string();
        writeln!(self.stdin, "{request}").and_then(|_| self.stdin.flush()).map_err(|e| OracleError::Protocol(format!("write failed: {e}")))?;
        self.line.clear();
        let n = self.stdout.read_line(&mut self.line).map_err(|e| OracleError::Protocol(format!("read failed: {e}")))?;
        if n == 0 {
            return Err(OracleError::Protocol("oracle closed its output".into()));
        }
        let text = self.line.trim();
        text.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| OracleError::Protocol(format!("not a decimal value: {text:?}")))
    }

    fn declared_pure(&self) -> bool {
        false
    }
}

impl Drop for ExecOracle {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// A resolved oracle with the state it is defined over and, for built-in
/// families of the general form, the true `μ`.
pub struct ResolvedOracle {
    pub oracle: Box<dyn InformationOracle>,
    pub state: State,
    pub reference_mu: Option<SignedOperator>,
}

pub struct OracleInputs<'a> {
    pub spec: &'a str,
    pub state: Option<State>,
    pub general: Option<GeneralInformation>,
    pub seed: u64,
}

fn need_state(state: Option<State>) -> Result<State, CliError> {
    state.ok_or_else(|| CliError::schema("this oracle needs --rho"))
}

pub fn resolve(inputs: OracleInputs<'_>) -> Result<ResolvedOracle, CliError> {
    if let Some(cmd) = inputs.spec.strip_prefix("exec:") {
        let state = need_state(inputs.state)?;
        return Ok(ResolvedOracle { oracle: Box::new(ExecOracle::spawn(cmd)?), state, reference_mu: None });
    }
    let name = inputs.spec.strip_prefix("builtin:").ok_or_else(|| CliError::schema(format!("oracle must be builtin:<name> or exec:<command>, got {:?}", inputs.spec)))?;
    let (family, arg) = name.split_once(':').unwrap_or((name, ""));
    match family {
        "general" | "shannon" => {
            let g = match (family, inputs.general) {
                ("general", Some(g)) => g,
                _ => GeneralInformation::symmetric(need_state(inputs.state)?, qinfo_core::SymmetricInformation::Shannon),
            };
            let (state, mu) = (g.state().clone(), g.mu().clone());
            Ok(ResolvedOracle { oracle: Box::new(g), state, reference_mu: Some(mu) })
        }
        "noisy" => {
            let amp: f64 = arg.parse().map_err(|_| CliError::schema(format!("noisy:<amplitude>, got {arg:?}")))?;
            let g = match inputs.general {
                Some(g) => g,
                None => GeneralInformation::symmetric(need_state(inputs.state)?, qinfo_core::SymmetricInformation::Shannon),
            };
            let (state, mu) = (g.state().clone(), g.mu().clone());
            Ok(ResolvedOracle { oracle: Box::new(NoisyOracle::new(g, amp, inputs.seed)), state, reference_mu: Some(mu) })
        }
        "conditional" => {
            let state = need_state(inputs.state)?;
            let d = state.dim();
            let groups = spec::parse_groups(arg)?;
            let support: Vec<usize> = groups.concat();
            if support.is_empty() || support.iter().any(|&i| i >= d) {
                return Err(CliError::schema(format!("conditional:<coordinates> within 0..{d}, got {arg:?}")));
            }
            let event = Projection::coordinate(d, &support);
            let mu = info::conditional_mu(&state, &event).map_err(CliError::domain)?;
            Ok(ResolvedOracle { oracle: Box::new(ConditionalOracle { state: state.clone(), event }), state, reference_mu: Some(mu) })
        }
        "pi-class" => {
            let o = gallery::pi_class_model();
            let state = o.state().clone();
            Ok(ResolvedOracle { oracle: Box::new(o), state, reference_mu: None })
        }
        other => Err(CliError::schema(format!("unknown builtin oracle {other:?}"))),
    }
}
