use clap::{Args, Parser, Subcommand};
use qinfo_core::decompose::{self, ExtractionConfig, ExtractionReport};
use qinfo_core::dilation;
use qinfo_core::gallery::{self, SuiteReport};
use qinfo_core::info::GeneralInformation;
use qinfo_core::linalg::{Projection, ProjectionPartition, State};
use qinfo_core::random::{self, SeededRng};
use qinfo_core::rational::{self, Rational};
use qinfo_core::structure::{self, BooleanStructure};
use qinfo_core::SymmetricInformation;
use serde_json::{json, Value};

use crate::error::CliError;
use crate::oracle::{self, OracleInputs};
use crate::report::{self, cell, num, rat, Format, Output};
use crate::spec;

#[derive(Debug, Parser)]
#[command(name = "qinfo", version, about = "Additive information of projective quantum measurements")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Density operator: diag:p1,p2,…, mixed:<d>, random:<d> or a JSON matrix
    #[arg(long)]
    pub rho: Option<String>,
    /// Traceless Hermitian μ: zero, diag:…, random:<scale> or a JSON matrix
    #[arg(long)]
    pub mu: Option<String>,
    /// Partition: coords, identity, groups:0,1|2, random:<k> or JSON
    #[arg(long)]
    pub partition: Option<String>,
    /// Symmetric part: shannon, renyi[:α], zero, lincomb:c*sym+… or JSON
    #[arg(long)]
    pub sym: Option<String>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also write <prefix>.json and <prefix>.csv
    #[arg(long)]
    pub out: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate I(P) = I_s(ρ(P_i)) + Σ tr(μP_i) log ρ(P_i)
    Info(Common),
    /// Extract μ and I_s from an additive information oracle
    Decompose {
        #[command(flatten)]
        common: Common,
        /// builtin:general|shannon|conditional:<coords>|noisy:<amp>|pi-class, or exec:<command>
        #[arg(long, default_value = "builtin:general")]
        oracle: String,
        /// Cells per structure = 2^level (default: the dimension)
        #[arg(long)]
        level: Option<u32>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Demonstrations: connect, dilate, unbounded, pi-class
    Demo {
        name: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long = "rankP")]
        rank_p: Option<usize>,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Blocks P_1…P_k refining P+Q with P P_l P = P/k
    Dilate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long = "rankP", default_value_t = 1)]
        rank_p: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Axiom suites: khinchin, renyi, counterexamples
    Axioms {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Answer subprocess oracle requests on stdin with I from --rho/--mu/--sym
    #[command(hide = true)]
    OracleServe {
        #[command(flatten)]
        common: Common,
        /// Reply with garbage after this many answers
        #[arg(long)]
        fail_after: Option<usize>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Info(c) => c,
            Command::Decompose { common, .. }
            | Command::Demo { common, .. }
            | Command::Dilate { common, .. }
            | Command::Axioms { common, .. }
            | Command::OracleServe { common, .. } => common,
        }
    }
}

pub fn run(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Info(c) => cmd_info(c),
        Command::Decompose { common, oracle, level, trials } => cmd_decompose(common, oracle, *level, *trials),
        Command::Demo { name, common, k, rank_p, dim, terms } => cmd_demo(name, common, *k, *rank_p, *dim, *terms),
        Command::Dilate { common, dim, rank_p, k } => dilate_report(common, *dim, *rank_p, *k, true),
        Command::Axioms { suite, common, trials } => cmd_axioms(suite, common, *trials),
        Command::OracleServe { .. } => Err(CliError::schema("oracle-serve runs through serve()")),
    }
}

struct Inputs {
    rng: SeededRng,
}

impl Inputs {
    fn new(c: &Common) -> Self {
        Self { rng: random::seeded(c.seed) }
    }

    fn state(&mut self, c: &Common) -> Result<Option<State>, CliError> {
        c.rho.as_deref().map(|s| spec::parse_state(s, &mut self.rng)).transpose()
    }

    fn sym(&self, c: &Common) -> Result<SymmetricInformation, CliError> {
        match (&c.sym, c.alpha) {
            (Some(s), a) => spec::parse_sym(s, a),
            (None, Some(a)) => SymmetricInformation::renyi(a).map_err(CliError::domain),
            (None, None) => Ok(SymmetricInformation::Shannon),
        }
    }

    fn general(&mut self, c: &Common, state: &State) -> Result<GeneralInformation, CliError> {
        let sym = self.sym(c)?;
        let mu = spec::parse_mu(c.mu.as_deref().unwrap_or("zero"), state.dim(), &mut self.rng)?;
        GeneralInformation::new(state.clone(), mu, sym).map_err(CliError::domain)
    }
}

fn cmd_info(c: &Common) -> Result<Output, CliError> {
    let mut inp = Inputs::new(c);
    let state = inp.state(c)?.unwrap_or_else(|| State::from_weights(&[rational::rat(1, 2), rational::rat(1, 2)]).expect("valid"));
    let g = inp.general(c, &state)?;
    let p = spec::parse_partition(c.partition.as_deref().unwrap_or("coords"), state.dim(), &mut inp.rng)?;
    let value = g.evaluate(&p).map_err(CliError::domain)?;
    let probs: Vec<Value> = p
        .blocks()
        .iter()
        .map(|b| state.exact_prob(b).map(|r| rat(&r)).unwrap_or_else(|| num(state.prob(b))))
        .collect();
    let json = json!({
        "command": "info",
        "dim": state.dim(),
        "blocks": p.len(),
        "probabilities": probs,
        "value": num(value),
    });
    let mut table = vec![vec!["block".into(), "probability".into()]];
    for (i, pr) in probs.iter().enumerate() {
        table.push(vec![i.to_string(), pr.to_string().trim_matches('"').to_string()]);
    }
    table.push(vec!["value".into(), cell(value)]);
    Ok(Output::new(json, table))
}

fn extraction_json(r: &ExtractionReport, reference: Option<&qinfo_core::SignedOperator>) -> Value {
    let cells: Vec<Value> = r.cell_measures.iter().map(|(s, m)| json!({ "set": s.to_string(), "m_hat": num(*m) })).collect();
    let sym: Vec<Value> = r
        .sym_samples
        .iter()
        .map(|(d, v)| json!({ "profile": d.probs().iter().map(rat).collect::<Vec<_>>(), "value": num(*v) }))
        .collect();
    let mu_error = match (reference, &r.fitted_mu) {
        (Some(a), Some(b)) => num(a.max_entry_diff(b)),
        _ => Value::Null,
    };
    json!({
        "dim": r.dim,
        "cell_count": r.cell_count,
        "level": r.level,
        "cells": cells,
        "mhat_total": num(r.mhat_total),
        "antisymmetry_residual": num(r.antisymmetry_residual),
        "fitted_mu": r.fitted_mu.as_ref().map(|m| report::matrix(m.matrix())),
        "fit_residual": r.fit_residual.map(num),
        "fit_rank": r.fit_rank,
        "fit_null_dim": r.fit_null_dim,
        "reference_mu_error": mu_error,
        "structures_used": r.structures_used,
        "rank_probes": r.rank_probes,
        "sym_table": sym,
        "additivity": {
            "checks": r.additivity.checks,
            "max_defect": num(r.additivity.max_defect),
            "tolerance": num(r.additivity.tolerance),
            "nontrivial_pairs": r.additivity.nontrivial_pairs,
        },
        "verification": {
            "trials": r.verification.trials,
            "max_residual": num(r.verification.max_residual),
            "tolerance": num(r.verification.tolerance),
            "passed": r.verification.passed,
        },
        "query_count": r.query_count,
        "residual": num(r.residual()),
    })
}

fn cmd_decompose(c: &Common, oracle_spec: &str, level: Option<u32>, trials: usize) -> Result<Output, CliError> {
    let mut inp = Inputs::new(c);
    let state = inp.state(c)?;
    let general = match (&state, oracle_spec) {
        (Some(s), spec) if spec.starts_with("builtin:general") || spec.starts_with("builtin:noisy") => Some(inp.general(c, s)?),
        _ => None,
    };
    let mut resolved = oracle::resolve(OracleInputs { spec: oracle_spec, state, general, seed: c.seed })?;
    let mut config = ExtractionConfig { seed: c.seed, trials, ..ExtractionConfig::default() };
    if let Some(l) = level {
        config.cells = Some(1usize.checked_shl(l).filter(|&n| n <= 1 << 12).ok_or_else(|| CliError::schema("level too large"))?);
    }
    if let Some(t) = c.tol {
        config.verify_tol = t;
    }
    let r = decompose::decompose(&mut *resolved.oracle, &resolved.state, &config)?;
    let mut json = extraction_json(&r, resolved.reference_mu.as_ref());
    json["command"] = json!("decompose");
    json["oracle"] = json!(oracle_spec);
    json["seed"] = json!(c.seed);
    let mut table = vec![vec!["cell".into(), "set".into(), "m_hat".into()]];
    for (i, (s, m)) in r.cell_measures.iter().enumerate() {
        table.push(vec![i.to_string(), s.to_string(), cell(*m)]);
    }
    let mut out = Output::new(json, table);
    if !r.verification.passed {
        out.exit = CliError::Verification(String::new()).exit_code();
    }
    Ok(out)
}

fn cmd_demo(
    name: &str,
    c: &Common,
    k: Option<usize>,
    rank_p: Option<usize>,
    dim: Option<usize>,
    terms: Option<usize>,
) -> Result<Output, CliError> {
    match name {
        "connect" => demo_connect(c, k.unwrap_or(4), dim.unwrap_or(4)),
        "dilate" => dilate_report(c, dim, rank_p.unwrap_or(1), k.unwrap_or(2), false),
        "unbounded" => demo_unbounded(c, terms.unwrap_or(2)),
        "pi-class" => demo_pi_class(c),
        other => Err(CliError::schema(format!("unknown demo {other:?}; expected connect, dilate, unbounded or pi-class"))),
    }
}

/// A structure through the coordinate partition and its transport by a
/// random permutation of `2k` equal slots.
pub fn transported_pair(state: &State, k: usize, rng: &mut SeededRng) -> Result<(BooleanStructure, BooleanStructure), CliError> {
    let (b, _) = BooleanStructure::through(&ProjectionPartition::coordinates(state.dim()), state).map_err(CliError::domain)?;
    let sigma = random::permutation(2 * k, rng);
    let b1 = b.permute(&sigma, k).map_err(CliError::domain)?;
    Ok((b, b1))
}

fn demo_connect(c: &Common, k: usize, d: usize) -> Result<Output, CliError> {
    if k == 0 || d == 0 {
        return Err(CliError::schema("connect needs k ≥ 1 and dim ≥ 1"));
    }
    let mut inp = Inputs::new(c);
    let state = match inp.state(c)? {
        Some(s) => s,
        None => State::from_weights(&vec![rational::rat(1, d as i64); d]).map_err(CliError::domain)?,
    };
    let (b, b1) = transported_pair(&state, k, &mut inp.rng)?;
    let chain = structure::connect_chain(&b, &b1, k).map_err(CliError::domain)?;
    let bound = rational::rat(1, k as i64);
    let mut steps = Vec::new();
    let mut table = vec![vec!["step".into(), "difference".into(), "measure".into(), "within_bound".into()]];
    let mut max_measure = Rational::from_integer(0.into());
    for (i, w) in chain.windows(2).enumerate() {
        let region = structure::difference_region(&w[0], &w[1]);
        let m = region.measure();
        let ok = m <= bound;
        table.push(vec![(i + 1).to_string(), region.to_string(), rational::format(&m), ok.to_string()]);
        steps.push(json!({ "step": i + 1, "difference": region.to_string(), "measure": rat(&m), "within_bound": ok }));
        if m > max_measure {
            max_measure = m;
        }
    }
    let cells = |s: &BooleanStructure| s.cells().iter().map(|c| c.set().to_string()).collect::<Vec<_>>();
    let json = json!({
        "command": "demo connect",
        "k": k,
        "dim": state.dim(),
        "seed": c.seed,
        "start": cells(&b),
        "end": cells(&b1),
        "steps": steps,
        "max_step_measure": rat(&max_measure),
        "bound": rat(&bound),
        "all_within_bound": max_measure <= bound,
        "endpoints_exact": chain.first() == Some(&b) && chain.last() == Some(&b1),
    });
    Ok(Output::new(json, table))
}

fn dilate_report(c: &Common, dim: Option<usize>, rank_p: usize, k: usize, include_blocks: bool) -> Result<Output, CliError> {
    let d = dim.unwrap_or((k * rank_p).max(1));
    let tol = c.tol.unwrap_or(1e-12);
    if rank_p > d || k == 0 || (k - 1) * rank_p > d - rank_p {
        return Err(CliError::domain(dilation::DilationError::RankInfeasible { rank_p, rank_q: d.saturating_sub(rank_p), k }));
    }
    let mut rng = random::seeded(c.seed);
    let u = random::unitary(d, &mut rng);
    let p = Projection::from_orthonormal_columns(&u.columns(0, rank_p).into_owned());
    let q = Projection::from_orthonormal_columns(&u.columns(rank_p, (k - 1) * rank_p).into_owned());
    let blocks = dilation::dilate(&p, &q, k, tol).map_err(CliError::domain)?;
    let audit = dilation::audit(&p, &q, &blocks);
    let rho = State::from_matrix(random::density_commuting_with(p.matrix(), &mut rng), 1e-9).map_err(CliError::domain)?;
    let bound = dilation::check_bound(&rho, &p, &q, &blocks, 1e-9).map_err(CliError::domain)?;
    let mut table =
        vec![vec!["block".into(), "compression_defect".into(), "weight".into(), "bound".into(), "slack".into()]];
    let mut rows = Vec::new();
    for (l, (cd, b)) in audit.compression.iter().zip(&bound.rows).enumerate() {
        table.push(vec![l.to_string(), cell(*cd), cell(b.weight), cell(b.bound), cell(b.slack)]);
        rows.push(json!({
            "block": l,
            "compression_defect": num(*cd),
            "weight": num(b.weight),
            "through_p": num(b.through_p),
            "through_q": num(b.through_q),
            "bound": num(b.bound),
            "slack": num(b.slack),
        }));
    }
    let mut json = json!({
        "command": if include_blocks { "dilate" } else { "demo dilate" },
        "dim": d,
        "rankP": rank_p,
        "k": k,
        "seed": c.seed,
        "orthogonality": num(audit.orthogonality),
        "sum_defect": num(audit.sum_defect),
        "max_defect": num(audit.max_defect()),
        "min_slack": num(bound.min_slack),
        "audit": rows,
    });
    if include_blocks {
        json["P"] = report::projection(&p);
        json["Q"] = report::projection(&q);
        json["blocks"] = Value::Array(blocks.iter().map(report::projection).collect());
    }
    Ok(Output::new(json, table))
}

const EPSILONS: [(i64, i64); 3] = [(1, 4), (1, 16), (1, 256)];

fn unbounded_json(terms: usize, seed: u64) -> Result<(Value, Vec<Vec<String>>), CliError> {
    let b = gallery::band_structure(terms).map_err(CliError::domain)?;
    let ex = gallery::unbounded_example(&b, terms).map_err(CliError::domain)?;
    let rows = ex.chain_values().map_err(CliError::domain)?;
    let decreasing = rows.windows(2).all(|w| w[1].value < w[0].value);
    let mut table = vec![vec!["n".into(), "weight".into(), "mu".into(), "value".into()]];
    let mut chain = Vec::new();
    for r in &rows {
        table.push(vec![r.n.to_string(), rational::format(&r.weight), rational::format(&r.mu), cell(r.value)]);
        chain.push(json!({ "n": r.n, "weight": rat(&r.weight), "mu": rat(&r.mu), "value": num(r.value) }));
    }
    let mut spreads = Vec::new();
    for (i, (a, b)) in EPSILONS.iter().enumerate() {
        let s = ex.epsilon_spread(&rational::rat(*a, *b), 100, seed.wrapping_add(i as u64)).map_err(CliError::domain)?;
        spreads.push(json!({
            "epsilon": rat(&s.epsilon),
            "samples": s.samples,
            "min": num(s.min),
            "max": num(s.max),
            "spread": num(s.spread()),
        }));
    }
    let json = json!({
        "terms": terms,
        "coefficients": ex.coefficients.iter().map(rat).collect::<Vec<_>>(),
        "chain": chain,
        "strictly_decreasing": decreasing,
        "epsilon_spreads": spreads,
    });
    Ok((json, table))
}

fn demo_unbounded(c: &Common, terms: usize) -> Result<Output, CliError> {
    let (mut json, table) = unbounded_json(terms, c.seed)?;
    json["command"] = json!("demo unbounded");
    Ok(Output::new(json, table))
}

fn groups_partition(groups: &[Vec<usize>]) -> ProjectionPartition {
    ProjectionPartition::from_coordinate_groups(6, groups, 1e-12).expect("coordinate groups of the model")
}

fn pi_class_json(seed: u64) -> Result<(Value, Vec<Vec<String>>), CliError> {
    let mut o = gallery::pi_class_model();
    let state = o.state().clone();
    let ex = gallery::exhaustive_coordinate_additivity(&mut o, &state, 0.0).map_err(CliError::domain)?;
    let config = ExtractionConfig { seed, ..ExtractionConfig::default() };
    let r = decompose::decompose(&mut o, &state, &config)?;
    let member = groups_partition(&[vec![0], vec![4], vec![1, 2, 3], vec![5]]);
    use qinfo_core::decompose::InformationOracle;
    let value = o.query(&member).map_err(CliError::domain)?;
    let recon = r.reconstruct(&state, &member);
    let chain = [groups_partition(&[vec![0, 1], vec![4], vec![2, 3, 5]]), groups_partition(&[vec![0], vec![4, 1], vec![2, 3, 5]])];
    let limit = groups_partition(&[vec![0], vec![4], vec![1, 2, 3, 5]]);
    let probe = gallery::partition_chain_probe(&mut o, &chain, &limit, 1e-12).map_err(CliError::domain)?;
    let gap = recon.map(|v| (value - v).abs());
    let json = json!({
        "model": { "rho": ["1/6", "1/6", "1/6", "1/6", "1/3", "0"], "e": 0, "f": 4 },
        "exhaustive": {
            "partitions": ex.partitions,
            "independent_pairs": ex.independent_pairs,
            "max_defect": num(ex.max_defect),
            "violations": ex.violations,
        },
        "extraction": {
            "verification_passed": r.verification.passed,
            "verification_residual": num(r.verification.max_residual),
            "mu_hat_max_entry": r.fitted_mu.as_ref().map(|m| num(m.matrix().iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max))),
        },
        "member": { "groups": "0|4|1,2,3|5", "oracle": num(value), "reconstruction": recon.map(num), "gap": gap.map(num) },
        "general_form_violated": gap.is_some_and(|g| g > 1e-8),
        "chain_probe": {
            "values": probe.values.iter().map(|v| num(*v)).collect::<Vec<_>>(),
            "limit": num(probe.limit_value),
            "gap": num(probe.gap),
        },
    });
    let table = vec![
        vec!["quantity".into(), "value".into()],
        vec!["independent_pairs".into(), ex.independent_pairs.to_string()],
        vec!["additivity_violations".into(), ex.violations.to_string()],
        vec!["member_oracle".into(), cell(value)],
        vec!["member_reconstruction".into(), recon.map(cell).unwrap_or_default()],
    ];
    Ok((json, table))
}

fn demo_pi_class(c: &Common) -> Result<Output, CliError> {
    let (mut json, table) = pi_class_json(c.seed)?;
    json["command"] = json!("demo pi-class");
    Ok(Output::new(json, table))
}

fn suite_json(r: &SuiteReport) -> (Value, Vec<Vec<String>>) {
    let mut table = vec![vec!["check".into(), "passed".into(), "max_defect".into(), "tolerance".into(), "samples".into()]];
    let checks: Vec<Value> = r
        .checks
        .iter()
        .map(|c| {
            table.push(vec![c.name.into(), c.passed.to_string(), cell(c.max_defect), cell(c.tolerance), c.samples.to_string()]);
            json!({
                "check": c.name,
                "passed": c.passed,
                "max_defect": num(c.max_defect),
                "tolerance": num(c.tolerance),
                "samples": c.samples,
                "note": c.note,
            })
        })
        .collect();
    (json!({ "checks": checks, "all_passed": r.all_passed() }), table)
}

fn cmd_axioms(suite: &str, c: &Common, trials: Option<usize>) -> Result<Output, CliError> {
    let inp = Inputs::new(c);
    let (mut json, table) = match suite {
        "khinchin" => {
            let sym = inp.sym(c)?;
            let (mut j, t) = suite_json(&gallery::check_khinchin(&sym, trials.unwrap_or(1000), c.seed));
            j["sym"] = json!(format!("{sym:?}"));
            (j, t)
        }
        "renyi" => {
            let alpha = c.alpha.unwrap_or(2.0);
            SymmetricInformation::renyi(alpha).map_err(CliError::domain)?;
            let (mut j, t) = suite_json(&gallery::renyi_suite(alpha, trials.unwrap_or(100), c.seed));
            j["alpha"] = num(alpha);
            (j, t)
        }
        "counterexamples" => {
            let (unbounded, mut t) = unbounded_json(2, c.seed)?;
            let (pi, t2) = pi_class_json(c.seed)?;
            t.push(Vec::new());
            t.extend(t2);
            (json!({ "unbounded": unbounded, "pi_class": pi, "banach_limit": "skipped: non-constructive" }), t)
        }
        other => return Err(CliError::schema(format!("unknown suite {other:?}; expected khinchin, renyi or counterexamples"))),
    };
    json["command"] = json!(format!("axioms {suite}"));
    json["seed"] = json!(c.seed);
    Ok(Output::new(json, table))
}

/// The `oracle-serve` loop over arbitrary line streams.
pub fn serve(c: &Common, fail_after: Option<usize>, input: impl std::io::BufRead, mut output: impl std::io::Write) -> Result<(), CliError> {
    let mut inp = Inputs::new(c);
    let state = inp.state(c)?.ok_or_else(|| CliError::schema("oracle-serve needs --rho"))?;
    let g = inp.general(c, &state)?;
    let io = |e: std::io::Error| CliError::Io(e.to_string());
    for (answered, line) in input.lines().enumerate() {
        let line = line.map_err(io)?;
        if line.trim().is_empty() {
            continue;
        }
        if fail_after.is_some_and(|n| answered >= n) {
            writeln!(output, "garbage").map_err(io)?;
        } else {
            let v: Value = serde_json::from_str(&line).map_err(|e| CliError::schema(format!("request: {e}")))?;
            let p = spec::partition_from_json(&v)?;
            let value = g.evaluate(&p).map_err(CliError::domain)?;
            writeln!(output, "{value}").map_err(io)?;
        }
        output.flush().map_err(io)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common() -> Common {
        Common { rho: None, mu: None, partition: None, sym: None, alpha: None, seed: 0, tol: None, format: Format::Json, out: None }
    }

    #[test]
    fn info_examples() {
        let mut c = common();
        c.rho = Some("diag:1/2,1/2".into());
        c.partition = Some("coords".into());
        assert_eq!(cmd_info(&c).unwrap().json["value"], json!(1.0));
        c.partition = Some("identity".into());
        assert_eq!(cmd_info(&c).unwrap().json["value"], json!(0.0));
        c.rho = Some("diag:1/2,1/4,1/4".into());
        c.partition = Some("coords".into());
        c.sym = Some("renyi:2".into());
        let v = cmd_info(&c).unwrap().json["value"].as_f64().unwrap();
        assert!((v - -(0.375f64).log2()).abs() < 1e-11);
        assert_eq!(format!("{v:.3}"), "1.415");
    }

    #[test]
    fn general_form_example() {
        let mut c = common();
        c.rho = Some("diag:1/2,1/4,1/4".into());
        c.mu = Some("diag:1/4,-1/4,0".into());
        assert_eq!(cmd_info(&c).unwrap().json["value"], json!(1.75));
    }

    #[test]
    fn serve_answers_lines() {
        let mut c = common();
        c.rho = Some("diag:1/2,1/2".into());
        let p = ProjectionPartition::coordinates(2);
        let input = format!("{}\n{}\n", report::partition_request(&p), report::partition_request(&p));
        let mut out = Vec::new();
        serve(&c, Some(1), input.as_bytes(), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "1\ngarbage\n");
    }

    #[test]
    fn unknown_demo_is_schema_error() {
        assert_eq!(cmd_demo("nope", &common(), None, None, None, None).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn infeasible_dilation_is_domain_error() {
        let e = dilate_report(&common(), Some(3), 2, 2, true).unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }
}
