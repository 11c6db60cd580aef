//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any criterion fails. Reference values are computed here,
//! independently of the library code paths under test.

use std::process::{Command, ExitCode};
use std::time::Instant;

use qinfo_core::borel::IntervalSet;
use qinfo_core::decompose::{self, ConditionalOracle, ExtractionConfig, QueryCounter};
use qinfo_core::dilation;
use qinfo_core::gallery;
use qinfo_core::info::{self, Distribution, GeneralInformation, StepCdf};
use qinfo_core::linalg::{self, CMat, Projection, ProjectionPartition, SignedOperator, State, C64};
use qinfo_core::random::{self, SeededRng};
use qinfo_core::rational::{self, Rational};
use qinfo_core::structure::{self, BooleanStructure};
use qinfo_core::SymmetricInformation;
use rand::Rng;

type Outcome = Result<String, String>;

fn ref_shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum::<f64>() / std::f64::consts::LN_2
}

fn ref_renyi(p: &[f64], a: f64) -> f64 {
    if a == 1.0 {
        return ref_shannon(p);
    }
    p.iter().filter(|&&x| x > 0.0).map(|&x| x.powf(a)).sum::<f64>().log2() / (1.0 - a)
}

/// The four symmetric parts used across trials with their reference evaluators.
fn sym_kind(i: usize) -> (SymmetricInformation, fn(&[f64]) -> f64) {
    match i % 4 {
        0 => (SymmetricInformation::Shannon, ref_shannon),
        1 => (SymmetricInformation::Renyi(0.5), |p| ref_renyi(p, 0.5)),
        2 => (SymmetricInformation::Renyi(2.0), |p| ref_renyi(p, 2.0)),
        _ => (
            SymmetricInformation::LinComb(vec![(0.7, SymmetricInformation::Shannon), (-0.25, SymmetricInformation::Renyi(2.0))]),
            |p| 0.7 * ref_shannon(p) - 0.25 * ref_renyi(p, 2.0),
        ),
    }
}

fn re_trace(a: &CMat, b: &CMat) -> f64 {
    (a * b).trace().re
}

/// `I_s(ρ(P_i)) + Σ tr(μP_i) log ρ(P_i)` straight from the matrices.
fn ref_info(rho: &CMat, mu: &CMat, sym: fn(&[f64]) -> f64, p: &ProjectionPartition) -> f64 {
    let probs: Vec<f64> = p.blocks().iter().map(|b| re_trace(rho, b.matrix())).collect();
    let tail: f64 = p
        .blocks()
        .iter()
        .zip(&probs)
        .filter(|(_, &w)| w > 1e-14)
        .map(|(b, &w)| re_trace(mu, b.matrix()) * w.log2())
        .sum();
    sym(&probs) + tail
}

fn random_partition(d: usize, rng: &mut SeededRng) -> ProjectionPartition {
    let u = random::unitary(d, rng);
    let blocks = rng.random_range(1..=d);
    let mut cuts: Vec<usize> = (1..d).collect();
    for i in 0..cuts.len() {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts.into_iter().take(blocks - 1).collect();
    cuts.sort();
    cuts.insert(0, 0);
    cuts.push(d);
    let projs = cuts.windows(2).map(|w| Projection::from_orthonormal_columns(&u.columns(w[0], w[1] - w[0]).into_owned())).collect();
    ProjectionPartition::new(projs, 1e-9).expect("orthonormal frame blocks")
}

fn random_state(d: usize, rng: &mut SeededRng) -> State {
    State::from_matrix(random::density_matrix(d, rng), 1e-12).expect("density matrix")
}

fn random_mu(d: usize, scale: f64, rng: &mut SeededRng) -> SignedOperator {
    SignedOperator::new(random::traceless_hermitian(d, rng) * C64::new(scale, 0.0), 1e-12).expect("traceless")
}

fn additivity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut worst_ref: f64 = 0.0;
    for t in 0..200u64 {
        let mut rng = random::seeded(1000 + t);
        let (d1, d2) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let (r1, r2) = (random_state(d1, &mut rng), random_state(d2, &mut rng));
        let (p, q) = (random_partition(d1, &mut rng), random_partition(d2, &mut rng));
        let (rho, big_p, big_q) = linalg::tensor_independent_pair(&r1, &r2, &p, &q).map_err(|e| e.to_string())?;
        let mu = random_mu(d1 * d2, 0.5, &mut rng);
        let (sym, reference) = sym_kind(t as usize);
        let g = GeneralInformation::new(rho.clone(), mu.clone(), sym).map_err(|e| e.to_string())?;
        let pq = linalg::product_partition(&big_p, &big_q, 1e-9).map_err(|e| e.to_string())?;
        let ev = |x: &ProjectionPartition| g.evaluate(x).map_err(|e| e.to_string());
        let (ipq, ip, iq) = (ev(&pq)?, ev(&big_p)?, ev(&big_q)?);
        worst = worst.max((ipq - ip - iq).abs());
        for (x, v) in [(&pq, ipq), (&big_p, ip), (&big_q, iq)] {
            worst_ref = worst_ref.max((v - ref_info(rho.matrix(), mu.matrix(), reference, x)).abs());
        }
    }
    let detail = format!("200 pairs, max |I(PQ)-I(P)-I(Q)| = {worst:.2e}, max |I - reference| = {worst_ref:.2e} (tol 1e-9)");
    if worst <= 1e-9 && worst_ref <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct RoundTrip {
    mu_err: f64,
    sym_err: f64,
    verify: f64,
    fits: usize,
    mhat_totals: Vec<f64>,
}

fn round_trip_runs() -> Result<RoundTrip, String> {
    let mut out = RoundTrip { mu_err: 0.0, sym_err: 0.0, verify: 0.0, fits: 0, mhat_totals: Vec::new() };
    for t in 0..50u64 {
        let mut rng = random::seeded(2000 + t);
        let d = 4 + (t as usize % 3);
        let rho = random_state(d, &mut rng);
        let mu = random_mu(d, 0.3, &mut rng);
        let (sym, reference) = sym_kind(t as usize);
        let mut g = GeneralInformation::new(rho.clone(), mu.clone(), sym).map_err(|e| e.to_string())?;
        let config = ExtractionConfig { seed: t, trials: 100, ..ExtractionConfig::default() };
        let r = decompose::decompose(&mut g, &rho, &config).map_err(|e| format!("seed {t}: {e}"))?;
        let fitted = r.fitted_mu.as_ref().ok_or_else(|| format!("seed {t}: no fit"))?;
        out.mu_err = out.mu_err.max(fitted.max_entry_diff(&mu));
        out.fits += 1;
        for (dist, v) in &r.sym_samples {
            out.sym_err = out.sym_err.max((v - reference(&dist.to_f64())).abs());
        }
        out.verify = out.verify.max(r.verification.max_residual);
        if r.verification.trials != 100 {
            return Err(format!("seed {t}: {} held-out partitions", r.verification.trials));
        }
        out.mhat_totals.push(r.mhat_total);
    }
    Ok(out)
}

fn round_trip(runs: &Result<RoundTrip, String>) -> Outcome {
    let r = runs.as_ref().map_err(Clone::clone)?;
    let detail = format!(
        "{} triples (d in 4..6), mu error {:.2e} (tol 1e-8), I_s error {:.2e} (tol 1e-9), verification {:.2e} (tol 1e-8)",
        r.fits, r.mu_err, r.sym_err, r.verify
    );
    if r.fits == 50 && r.mu_err <= 1e-8 && r.sym_err <= 1e-9 && r.verify <= 1e-8 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn mhat_total(runs: &Result<RoundTrip, String>) -> Outcome {
    let mut totals = runs.as_ref().map_err(Clone::clone)?.mhat_totals.clone();
    for t in 0..10u64 {
        let mut rng = random::seeded(3000 + t);
        let d = 3 + (t as usize % 3);
        let rho = random_state(d, &mut rng);
        let event = Projection::coordinate(d, &(0..=(t as usize % (d - 1))).collect::<Vec<_>>());
        let mut o = ConditionalOracle { state: rho.clone(), event };
        let r = decompose::decompose(&mut o, &rho, &ExtractionConfig { seed: t, ..ExtractionConfig::default() })
            .map_err(|e| format!("conditional seed {t}: {e}"))?;
        totals.push(r.mhat_total);
    }
    let mut pi = gallery::pi_class_model();
    let state = pi.state().clone();
    let r = decompose::decompose(&mut pi, &state, &ExtractionConfig::default()).map_err(|e| e.to_string())?;
    totals.push(r.mhat_total);
    let worst = totals.iter().cloned().fold(0.0, f64::max);
    let detail = format!("{} extracted oracles, max |sum of m_hat| = {worst:.2e} (tol 1e-10)", totals.len());
    if worst <= 1e-10 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn structure_invariance() -> Outcome {
    let (mut sym_dev, mut cell_dev, mut ref_dev): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for t in 0..20u64 {
        let mut rng = random::seeded(4000 + t);
        let d = 3 + (t as usize % 3);
        let rho = random_state(d, &mut rng);
        let mu = random_mu(d, 0.4, &mut rng);
        let (sym, _) = sym_kind(t as usize);
        let mut g = GeneralInformation::new(rho.clone(), mu.clone(), sym).map_err(|e| e.to_string())?;
        let b = BooleanStructure::random_uniform(&rho, d, &mut rng).map_err(|e| e.to_string())?;
        let b1 = b.permute_slots(&random::permutation(2 * d, &mut rng)).map_err(|e| e.to_string())?;
        let mut q = QueryCounter::new(&mut g, None);
        let r = decompose::structure_invariance_check(&mut q, &b, &b1).map_err(|e| e.to_string())?;
        if r.matched_cells != d || r.common_profiles == 0 {
            return Err(format!("seed {t}: matched {} cells, {} profiles", r.matched_cells, r.common_profiles));
        }
        sym_dev = sym_dev.max(r.sym_deviation);
        cell_dev = cell_dev.max(r.cell_deviation);
        let e = decompose::extract_on_structure(&mut q, &b1).map_err(|e| e.to_string())?;
        for (c, m) in b1.cells().iter().zip(&e.cells.m_hat) {
            ref_dev = ref_dev.max((m - re_trace(mu.matrix(), c.projection().matrix())).abs());
        }
    }
    let detail = format!(
        "20 permuted pairs, I_s deviation {sym_dev:.2e}, shared-cell m_hat deviation {cell_dev:.2e}, m_hat vs tr(mu B(C)) {ref_dev:.2e} (tol 1e-9)"
    );
    if sym_dev <= 1e-9 && cell_dev <= 1e-9 && ref_dev <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn dilation_grid() -> Outcome {
    let (mut defect, mut slack, mut cases): (f64, f64, usize) = (0.0, f64::INFINITY, 0);
    for k in 1..=5usize {
        for r in 1..=4usize {
            let d = k * r + 1;
            let mut rng = random::seeded((100 * k + r) as u64);
            let u = random::unitary(d, &mut rng);
            let p = Projection::from_orthonormal_columns(&u.columns(0, r).into_owned());
            let q = Projection::from_orthonormal_columns(&u.columns(r, (k - 1) * r).into_owned());
            let blocks = dilation::dilate(&p, &q, k, 1e-12).map_err(|e| format!("k={k} r={r}: {e}"))?;
            let target = p.matrix() * C64::new(1.0 / k as f64, 0.0);
            for b in &blocks {
                defect = defect.max((p.matrix() * b.matrix() * p.matrix() - &target).norm());
            }
            for s in 0..20u64 {
                let mut srng = random::seeded(s);
                let rho = random::density_commuting_with(p.matrix(), &mut srng);
                let bound = re_trace(&rho, p.matrix()) / k as f64 + re_trace(&rho, q.matrix());
                for b in &blocks {
                    slack = slack.min(bound - re_trace(&rho, b.matrix()));
                }
                let state = State::from_matrix(rho, 1e-9).map_err(|e| e.to_string())?;
                let report = dilation::check_bound(&state, &p, &q, &blocks, 1e-9).map_err(|e| e.to_string())?;
                slack = slack.min(report.min_slack);
            }
            cases += 1;
        }
    }
    let detail = format!("{cases} (k, rankP) cases x 20 states, max |PP_lP - P/k| = {defect:.2e} (tol 1e-10), min slack {slack:.2e} (tol -1e-12)");
    if defect <= 1e-10 && slack >= -1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Measure of the set where two structures with the same cell projections disagree.
fn disagreement(a: &BooleanStructure, b: &BooleanStructure) -> Rational {
    let mut region = IntervalSet::empty();
    for c in a.cells() {
        let other = b.cells().iter().find(|o| o.projection().approx_eq(c.projection(), 1e-9)).expect("same cell projections");
        region = region.union(&c.set().symmdiff(other.set()));
    }
    region.measure()
}

fn connectedness() -> Outcome {
    let (mut steps, mut worst_ratio) = (0usize, 0.0f64);
    for t in 0..20u64 {
        let mut rng = random::seeded(5000 + t);
        let d = 2 + (t as usize % 3);
        let rho = random_state(d, &mut rng);
        let b = BooleanStructure::random_uniform(&rho, d, &mut rng).map_err(|e| e.to_string())?;
        for k in [2usize, 4, 8] {
            let b1 = b.permute_slots(&random::permutation(2 * k * d, &mut rng)).map_err(|e| e.to_string())?;
            let chain = structure::connect_chain(&b, &b1, k).map_err(|e| format!("seed {t} k={k}: {e}"))?;
            if chain.first() != Some(&b) || chain.last() != Some(&b1) {
                return Err(format!("seed {t} k={k}: endpoints differ"));
            }
            let bound = rational::rat(1, k as i64);
            for w in chain.windows(2) {
                let m = disagreement(&w[0], &w[1]);
                if m > bound || structure::difference_region(&w[0], &w[1]).measure() > bound {
                    return Err(format!("seed {t} k={k}: step of measure {}", rational::format(&m)));
                }
                worst_ratio = worst_ratio.max(rational::to_f64(&m) * k as f64);
                steps += 1;
            }
        }
    }
    Ok(format!("60 chains, {steps} steps, max step measure x k = {worst_ratio} (bound 1, exact), endpoints exact"))
}

fn shannon_axioms() -> Outcome {
    let mut rng = random::seeded(6000);
    let sym = SymmetricInformation::Shannon;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.random_range(2..=8);
        let p = random::probability_vector(n, false, &mut rng);
        let s = p[0] + p[1];
        let mut merged = vec![s];
        merged.extend_from_slice(&p[2..]);
        let expected = sym.eval(&merged) + s * sym.eval(&[p[0] / s, p[1] / s]);
        worst = worst.max((sym.eval(&p) - expected).abs());
        worst = worst.max((sym.eval(&p) - ref_shannon(&p)).abs());
    }
    let half = sym.eval_distribution(&Distribution::uniform(2));
    let suite = gallery::check_khinchin(&sym, 1000, 6001);
    let detail = format!("1000 distributions, recursivity defect {worst:.2e} (tol 1e-12), I_s(1/2,1/2) = {half}, khinchin suite passed = {}", suite.all_passed());
    if worst <= 1e-12 && half == 1.0 && suite.all_passed() {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_distribution(rng: &mut SeededRng) -> Distribution {
    let n = rng.random_range(2..=6);
    Distribution::new(random::rational_weights(n, 64, rng)).expect("positive weights")
}

fn renyi_coherence() -> Outcome {
    let mut rng = random::seeded(7000);
    let mut limit: f64 = 0.0;
    for _ in 0..100 {
        let p = random::probability_vector(rng.random_range(2..=8), false, &mut rng);
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            limit = limit.max((info::renyi(&p, a) - ref_shannon(&p)).abs());
        }
    }
    let (mut additive, mut matches): (f64, f64) = (0.0, 0.0);
    let mut unit = true;
    for alpha in [0.5, 2.0, 3.0] {
        unit &= info::renyi_functional(&StepCdf::point_mass(1.0), alpha) == 1.0;
        for _ in 0..100 {
            let (p, p1) = (random_distribution(&mut rng), random_distribution(&mut rng));
            let f = info::cdf_of_distribution(&p).map_err(|e| e.to_string())?;
            let f1 = info::cdf_of_distribution(&p1).map_err(|e| e.to_string())?;
            let j = |x: &StepCdf| info::renyi_functional(x, alpha);
            additive = additive.max((j(&f.convolve(&f1)) - j(&f) - j(&f1)).abs());
            // J_α(F_p) = −H_α(p)
            matches = matches.max((j(&f) + ref_renyi(&p.to_f64(), alpha)).abs());
        }
    }
    let detail = format!(
        "renyi(1±1e-6) vs shannon {limit:.2e} (tol 1e-4), J additivity {additive:.2e} (tol 1e-10), J vs -H_alpha {matches:.2e}, J(D_1) = 1 exactly: {unit}"
    );
    if limit <= 1e-4 && additive <= 1e-10 && matches <= 1e-10 && unit {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn counterexamples() -> Outcome {
    let b = gallery::band_structure(2).map_err(|e| e.to_string())?;
    let ex = gallery::unbounded_example(&b, 2).map_err(|e| e.to_string())?;
    let rows = ex.chain_values().map_err(|e| e.to_string())?;
    let expected = [0.0, -4.0 - (15.0f64 / 16.0).log2(), 0.5 * (-16.0 - (1.0 - 2f64.powi(-16)).log2())];
    if rows.len() < 3 {
        return Err(format!("{} chain rows", rows.len()));
    }
    let value_err = rows.iter().zip(expected).map(|(r, e)| (r.value - e).abs()).fold(0.0, f64::max);
    let decreasing = rows[..3].windows(2).all(|w| w[1].value < w[0].value);
    let mut spreads = Vec::new();
    for (i, den) in [4i64, 16, 256].into_iter().enumerate() {
        let s = ex.epsilon_spread(&rational::rat(1, den), 100, i as u64).map_err(|e| e.to_string())?;
        if s.samples != 100 || !s.spread().is_finite() {
            return Err(format!("epsilon 1/{den}: {} samples, spread {}", s.samples, s.spread()));
        }
        spreads.push(format!("{:.3}", s.spread()));
    }

    let mut o = gallery::pi_class_model();
    let state = o.state().clone();
    let ex = gallery::exhaustive_coordinate_additivity(&mut o, &state, 0.0).map_err(|e| e.to_string())?;
    let r = decompose::decompose(&mut o, &state, &ExtractionConfig::default()).map_err(|e| e.to_string())?;
    let member = ProjectionPartition::from_coordinate_groups(6, &[vec![0], vec![4], vec![1, 2, 3], vec![5]], 1e-12).map_err(|e| e.to_string())?;
    use qinfo_core::decompose::InformationOracle;
    let in_pi = o.contains(&member);
    let oracle_value = o.query(&member).map_err(|e| e.to_string())?;
    let gap = r.reconstruct(&state, &member).map(|v| (oracle_value - v).abs()).unwrap_or(0.0);
    let detail = format!(
        "I(P_n) = {:?} (reference error {value_err:.1e}), decreasing {decreasing}, eps spreads {spreads:?}; pi-class: {} independent pairs, {} violations, general-form gap on a member {gap}",
        rows[..3].iter().map(|r| format!("{:.6}", r.value)).collect::<Vec<_>>(),
        ex.independent_pairs,
        ex.violations
    );
    if value_err <= 1e-9 && decreasing && ex.independent_pairs > 0 && ex.violations == 0 && in_pi && gap > 1e-6 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qinfo");
    let runs: &[&[&str]] = &[
        &["info", "--rho", "random:4", "--mu", "random:0.3", "--partition", "random:3", "--sym", "renyi:2", "--seed", "9"],
        &["decompose", "--rho", "random:4", "--mu", "random:0.3", "--seed", "5"],
        &["decompose", "--rho", "diag:1/2,1/4,1/8,1/8", "--oracle", "builtin:conditional:0,1", "--seed", "2"],
        &["demo", "connect", "--k", "4", "--seed", "3"],
        &["demo", "dilate", "--k", "3", "--rankP", "2", "--seed", "4"],
        &["demo", "unbounded", "--terms", "2", "--seed", "1"],
        &["demo", "pi-class"],
        &["dilate", "--k", "2", "--rankP", "1", "--seed", "7"],
        &["axioms", "--suite", "khinchin", "--seed", "8", "--trials", "200"],
        &["axioms", "--suite", "renyi", "--alpha", "3", "--seed", "8"],
        &["axioms", "--suite", "counterexamples"],
    ];
    for args in runs {
        let run = || Command::new(bin).args(*args).output().map_err(|e| e.to_string());
        let (a, b) = (run()?, run()?);
        if !a.status.success() {
            return Err(format!("{args:?} exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)));
        }
        if a.stdout != b.stdout || a.stdout.is_empty() {
            return Err(format!("{args:?} output differs between runs"));
        }
    }
    Ok(format!("{} commands, byte-identical JSON across two runs each", runs.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let runs = round_trip_runs();
    let results: Vec<(&str, Outcome)> = vec![
        ("additivity", additivity()),
        ("decomposition round trip", round_trip(&runs)),
        ("m-total-zero", mhat_total(&runs)),
        ("structure invariance", structure_invariance()),
        ("dilation", dilation_grid()),
        ("connectedness", connectedness()),
        ("shannon axioms", shannon_axioms()),
        ("renyi/J coherence", renyi_coherence()),
        ("counterexamples", counterexamples()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS  {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL  {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
