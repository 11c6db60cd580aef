//! Axiom suites for symmetric informations and constructible counterexamples.
//!
//! * [`check_khinchin`] and [`renyi_suite`] test the characterizing axioms of
//!   Shannon and Rényi informations and of the cdf functional `J_α` on
//!   sampled inputs.
//! * [`unbounded_example`] builds an information with `I_s = 0` whose `μ` is
//!   spread over doubly-exponentially shrinking bands, so `I(P_n, P_n^⊥)`
//!   diverges along `P_n = B([0, 2^{−2^{2n}}))`.
//! * [`PiClassOracle`] is additive, vanishes on generic partitions and is 1 on
//!   the permutation class of `(ê, f̂, P, null blocks…)`, so it is not of the
//!   form `I_s + Σ μ log ρ`.
//! * [`monotone_continuity_probe`] tabulates an oracle along an increasing chain.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::borel::IntervalSet;
use crate::decompose::{InformationOracle, OracleError};
use crate::info::{self, Distribution, GeneralInformation, InfoError, StepCdf, SymmetricInformation};
use crate::linalg::{CMat, LinalgError, Projection, ProjectionPartition, SignedOperator, State};
use crate::random;
use crate::rational::{self, Rational};
use crate::structure::{BooleanStructure, StructureError};
use crate::{decompose, math};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GalleryError {
    #[error("structure does not resolve band {band}")]
    ResolutionTooCoarse { band: usize },
    #[error("term count {n_terms} outside 1..=3")]
    TermCount { n_terms: usize },
    #[error("state is not faithful")]
    NotFaithful,
    #[error("projection {index} has zero state weight")]
    WeightZero { index: usize },
    #[error("ê and f̂ must be orthogonal rank-1 projections")]
    BadPair,
    #[error("chain is not increasing at step {index}")]
    ChainNotMonotone { index: usize },
    #[error("chain partitions {i} and {j} do not commute")]
    ChainNotCommuting { i: usize, j: usize },
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub max_defect: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub note: Option<&'static str>,
}

impl AxiomCheck {
    fn new(name: &'static str, max_defect: f64, tolerance: f64, samples: usize) -> Self {
        Self { name, passed: max_defect <= tolerance, max_defect, tolerance, samples, note: None }
    }

    fn with_note(mut self, note: &'static str) -> Self {
        self.note = Some(note);
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<AxiomCheck>,
}

impl SuiteReport {
    pub fn get(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn random_distribution<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Vec<f64> {
    let m = rng.random_range(2..=max_len);
    random::probability_vector(m, false, rng)
}

/// `|I(p) − I(p_1+p_2, p_3, …) − (p_1+p_2)·I(p_1/s, p_2/s)|`.
pub fn recursivity_defect(sym: &SymmetricInformation, p: &[f64]) -> f64 {
    let s = p[0] + p[1];
    let mut merged = vec![s];
    merged.extend_from_slice(&p[2..]);
    let rhs = sym.eval(&merged) + s * sym.eval(&[p[0] / s, p[1] / s]);
    (sym.eval(p) - rhs).abs()
}

/// `max_p |I(p+h, 1−p−h) − I(p, 1−p)|` on a grid of `p`.
fn binary_modulus(sym: &SymmetricInformation, h: f64) -> f64 {
    let grid = 200;
    (0..=grid)
        .map(|i| i as f64 / grid as f64)
        .filter(|&p| p + h <= 1.0)
        .map(|p| (sym.eval(&[p + h, 1.0 - p - h]) - sym.eval(&[p, 1.0 - p])).abs())
        .fold(0.0, f64::max)
}

/// The Khinchin conditions characterizing Shannon entropy: symmetry,
/// `I(1/2,1/2) = 1`, continuity of `I(p, 1−p)` and recursivity.
///
/// Continuity is a sampled diagnostic: the modulus at step `1e-8` must be
/// under half the modulus at step `1e-4`.
pub fn check_khinchin(sym: &SymmetricInformation, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = random::seeded(seed);
    let mut symmetry: f64 = 0.0;
    let mut recursivity = recursivity_defect(sym, &[0.5, 0.25, 0.25]);
    for _ in 0..trials {
        let p = random_distribution(&mut rng, 8);
        let perm = random::permutation(p.len(), &mut rng);
        let q: Vec<f64> = perm.iter().map(|&i| p[i]).collect();
        symmetry = symmetry.max((sym.eval(&p) - sym.eval(&q)).abs());
        recursivity = recursivity.max(recursivity_defect(sym, &p));
    }
    let half = Rational::new(1.into(), 2.into());
    let normalization = (sym.eval_exact(&[half.clone(), half]) - 1.0).abs();
    let coarse = binary_modulus(sym, 1e-4);
    let fine = binary_modulus(sym, 1e-8);
    let continuity = AxiomCheck {
        name: "continuity",
        passed: fine <= 0.5 * coarse || fine <= 1e-12,
        max_defect: fine,
        tolerance: 0.5 * coarse,
        samples: 201,
        note: Some("sampled modulus, diagnostic only"),
    };
    SuiteReport {
        checks: vec![
            AxiomCheck::new("symmetry", symmetry, 1e-12, trials),
            AxiomCheck::new("normalization", normalization, 0.0, 1),
            continuity,
            AxiomCheck::new("recursivity", recursivity, 1e-12, trials + 1),
        ],
    }
}

/// `F ≥ G` pointwise, compared exactly at every atom location.
pub fn dominates(f: &StepCdf, g: &StepCdf) -> bool {
    let mut xs: Vec<f64> = f.atoms().iter().chain(g.atoms()).map(|a| a.0).collect();
    xs.sort_by(f64::total_cmp);
    let upto = |c: &StepCdf, x: f64| rational::sum(c.atoms().iter().filter(|a| a.0 <= x).map(|a| &a.1));
    xs.iter().all(|&x| upto(f, x) >= upto(g, x))
}

fn random_rational_distribution<R: Rng + ?Sized>(rng: &mut R) -> Distribution {
    let m = rng.random_range(1..=5);
    Distribution::new(random::rational_weights(m, 64, rng)).expect("weights sum to one")
}

/// Merges two random entries; the result is dominated by the input's cdf.
fn merge_random<R: Rng + ?Sized>(p: &Distribution, rng: &mut R) -> Distribution {
    let mut v = p.probs().to_vec();
    let i = rng.random_range(0..v.len());
    let x = v.remove(i);
    let j = rng.random_range(0..v.len());
    v[j] += x;
    Distribution::new(v).expect("merge keeps the sum")
}

/// Axioms of the Rényi information of order `alpha` and of `J_α`.
///
/// Monotonicity is reported in two directions: the one Shannon and Rényi
/// satisfy (`F_p ≥ F_q ⇒ I(p) ≥ I(q)`) and the strict reverse inequality,
/// which is expected to fail.
pub fn renyi_suite(alpha: f64, trials: usize, seed: u64) -> SuiteReport {
    let mut rng = random::seeded(seed);
    let sym = SymmetricInformation::Renyi(alpha);
    let grid = [0.0, 0.5, 1.0, 2.0, 4.0, 64.0];
    let mut additivity: f64 = 0.0;
    let mut monotone: f64 = 0.0;
    let mut limit: f64 = 0.0;
    let mut j_add: f64 = 0.0;
    let mut j_mix: f64 = 0.0;
    let mut j_match: f64 = 0.0;
    let mut shannon_dir: f64 = 0.0;
    let mut reversed_fail = 0usize;
    let mut pairs = 0usize;
    for _ in 0..trials {
        let p = random_rational_distribution(&mut rng);
        let q = random_rational_distribution(&mut rng);
        let t = p.tensor(&q);
        additivity = additivity.max((sym.eval_distribution(&t) - sym.eval_distribution(&p) - sym.eval_distribution(&q)).abs());

        let pf = p.to_f64();
        for w in grid.windows(2) {
            monotone = monotone.max(info::renyi(&pf, w[1]) - info::renyi(&pf, w[0]));
        }
        let h = info::shannon(&pf);
        for a in [1.0 - 1e-6, 1.0 + 1e-6] {
            limit = limit.max((info::renyi(&pf, a) - h).abs());
        }

        let f = info::cdf_of_distribution(&p).expect("positive weights");
        let g = info::cdf_of_distribution(&q).expect("positive weights");
        let jf = info::renyi_functional(&f, alpha);
        let jg = info::renyi_functional(&g, alpha);
        j_add = j_add.max((info::renyi_functional(&f.convolve(&g), alpha) - jf - jg).abs());
        j_match = j_match.max((jf + info::renyi(&pf, alpha)).abs());

        let twin = StepCdf::point_mass(jg);
        let s = rational::rat(rng.random_range(1..8), 8);
        let lhs = info::renyi_functional(&StepCdf::mix(&s, &f, &g), alpha);
        let rhs = info::renyi_functional(&StepCdf::mix(&s, &f, &twin), alpha);
        j_mix = j_mix.max((lhs - rhs).abs());

        if p.len() > 1 {
            let merged = merge_random(&p, &mut rng);
            let fm = info::cdf_of_distribution(&merged).expect("positive weights");
            if dominates(&f, &fm) {
                pairs += 1;
                let ip = sym.eval_distribution(&p);
                let iq = sym.eval_distribution(&merged);
                shannon_dir = shannon_dir.max(iq - ip);
                if ip >= iq {
                    reversed_fail += 1;
                }
            }
        }
    }
    let d1 = (info::renyi_functional(&StepCdf::point_mass(1.0), alpha) - 1.0).abs();
    let half = Rational::new(1.into(), 2.into());
    let normalization = (sym.eval_exact(&[half.clone(), half]) - 1.0).abs();
    let reversed = AxiomCheck {
        name: "monotonicity (reversed direction)",
        passed: reversed_fail == 0,
        max_defect: reversed_fail as f64,
        tolerance: 0.0,
        samples: pairs,
        note: Some("count of dominated pairs violating the reversed strict inequality; expected to fail"),
    };
    SuiteReport {
        checks: vec![
            AxiomCheck::new("product additivity", additivity, 1e-10, trials),
            AxiomCheck::new("normalization", normalization, 1e-12, 1),
            AxiomCheck::new("non-increasing in alpha", monotone.max(0.0), 1e-12, trials),
            AxiomCheck::new("shannon limit", limit, 1e-4, trials),
            AxiomCheck::new("J(D_1) = 1", d1, 0.0, 1),
            AxiomCheck::new("J additivity", j_add, 1e-10, trials),
            AxiomCheck::new("J mixing", j_mix, 1e-9, trials),
            AxiomCheck::new("J matches renyi", j_match, 1e-10, trials),
            AxiomCheck::new("monotonicity (shannon direction)", shannon_dir.max(0.0), 1e-12, pairs)
                .with_note("F_p >= F_q implies I(p) >= I(q)"),
            reversed,
        ],
    }
}

/// `[2^{−2^{2i+2}}, 2^{−2^{2i}})`.
pub fn band(i: usize) -> IntervalSet {
    IntervalSet::interval(rational::pow2_neg(1 << (2 * i + 2)), rational::pow2_neg(1 << (2 * i)))
}

/// `[0, 2^{−2^{2n}})`.
pub fn chain_set(n: usize) -> IntervalSet {
    IntervalSet::interval(Rational::zero(), rational::pow2_neg(1 << (2 * n)))
}

/// Diagonal structure whose cells are `[0, 2^{−2^{2T+2}})`, the bands
/// `T, …, 0` and `[1/2, 1)`, with `ρ` the cell measures.
pub fn band_structure(n_terms: usize) -> Result<BooleanStructure, GalleryError> {
    if !(1..=3).contains(&n_terms) {
        return Err(GalleryError::TermCount { n_terms });
    }
    let mut sets = vec![IntervalSet::interval(Rational::zero(), rational::pow2_neg(1 << (2 * n_terms + 2)))];
    sets.extend((0..=n_terms).rev().map(band));
    sets.push(IntervalSet::interval(rational::rat(1, 2), Rational::one()));
    let d = sets.len();
    let weights: Vec<Rational> = sets.iter().map(IntervalSet::measure).collect();
    let state = State::from_weights(&weights)?;
    let cells = sets.into_iter().enumerate().map(|(i, s)| (s, Projection::coordinate(d, &[i]))).collect();
    Ok(BooleanStructure::new(state, cells)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnboundedRow {
    pub n: usize,
    /// `ρ(P_n) = 2^{−2^{2n}}`.
    pub weight: Rational,
    /// `μ(P_n)`, exactly `2^{1−n}` for `n ≥ 1` and `0` for `n = 0`.
    pub mu: Rational,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonSpread {
    pub epsilon: Rational,
    pub samples: usize,
    pub min: f64,
    pub max: f64,
}

impl EpsilonSpread {
    pub fn spread(&self) -> f64 {
        self.max - self.min
    }
}

/// `I_s = 0`, `μ = −f̂_0 + Σ_{0<i<T} 2^{−i} f̂_i + 2^{1−T} f̂_T` with `f_i` a unit
/// vector in the range of band `i`; the last coefficient carries the tail so
/// that `tr μ = 0` exactly.
#[derive(Debug, Clone)]
pub struct UnboundedExample {
    pub structure: BooleanStructure,
    pub n_terms: usize,
    pub coefficients: Vec<Rational>,
    pub info: GeneralInformation,
}

pub fn unbounded_example(b: &BooleanStructure, n_terms: usize) -> Result<UnboundedExample, GalleryError> {
    if !(1..=3).contains(&n_terms) {
        return Err(GalleryError::TermCount { n_terms });
    }
    if !b.state().is_faithful(0.0) {
        return Err(GalleryError::NotFaithful);
    }
    let d = b.dim();
    let coefficients: Vec<Rational> = (0..=n_terms)
        .map(|i| match i {
            0 => -Rational::one(),
            i if i < n_terms => rational::pow2_neg(i as u32),
            _ => rational::pow2_neg(n_terms as u32 - 1),
        })
        .collect();
    let mut mu = CMat::zeros(d, d);
    for (i, c) in coefficients.iter().enumerate() {
        let p = b.evaluate(&band(i)).map_err(|_| GalleryError::ResolutionTooCoarse { band: i })?;
        if p.rank() == 0 {
            return Err(GalleryError::ResolutionTooCoarse { band: i });
        }
        let f = p.range_basis().column(0).into_owned();
        mu += Projection::rank_one(&f).matrix() * crate::linalg::C64::new(rational::to_f64(c), 0.0);
    }
    for n in 0..=n_terms {
        b.evaluate(&chain_set(n)).map_err(|_| GalleryError::ResolutionTooCoarse { band: n })?;
    }
    let info = GeneralInformation::new(b.state().clone(), SignedOperator::new(mu, 1e-12)?, SymmetricInformation::zero())?;
    Ok(UnboundedExample { structure: b.clone(), n_terms, coefficients, info })
}

impl UnboundedExample {
    /// `I(P_n, P_n^⊥)` for `n = 0, …, T`.
    pub fn chain_values(&self) -> Result<Vec<UnboundedRow>, GalleryError> {
        (0..=self.n_terms)
            .map(|n| {
                let p = self.structure.evaluate(&chain_set(n))?;
                let pair = ProjectionPartition::new(vec![p.clone(), p.complement()], 1e-9)?;
                let value = self.info.evaluate(&pair)?;
                let mu = if n == 0 {
                    Rational::zero()
                } else {
                    rational::sum(&self.coefficients[n..])
                };
                Ok(UnboundedRow { n, weight: chain_set(n).measure(), mu, value })
            })
            .collect()
    }

    /// Values `I(P, P^⊥)` over `samples` random projections with `ρ(P) = ε`.
    pub fn epsilon_spread(&self, epsilon: &Rational, samples: usize, seed: u64) -> Result<EpsilonSpread, GalleryError> {
        let state = self.info.state();
        let d = state.dim();
        let eps = rational::to_f64(epsilon);
        let mut rng = random::seeded(seed);
        let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
        let mut got = 0;
        let mut attempts = 0;
        while got < samples && attempts < 50 * samples {
            attempts += 1;
            let rank = rng.random_range(1..d);
            let order = random::permutation(d, &mut rng);
            let Some(p) = decompose::projection_of_weight(state, rank, eps, Some(&order)) else { continue };
            let v = self.info.evaluate(&ProjectionPartition::new(vec![p.clone(), p.complement()], 1e-8)?)?;
            min = min.min(v);
            max = max.max(v);
            got += 1;
        }
        Ok(EpsilonSpread { epsilon: epsilon.clone(), samples: got, min, max })
    }
}

/// `I(𝐏) = 1` when `𝐏` is, up to order, `(ê, f̂, P, P_1, …, P_n)` with
/// `ρ(P_i) = 0`, else `0`.
///
/// Blocks are compared with `ê`, `f̂` up to ρ-null parts (`ê ≤ P_a` and
/// `ρ(P_a) = ρ(ê)`); exact matching is not additive once `ρ` has a kernel.
#[derive(Debug, Clone)]
pub struct PiClassOracle {
    state: State,
    e: Projection,
    f: Projection,
    tol: f64,
}

impl PiClassOracle {
    pub fn new(state: State, e: Projection, f: Projection, tol: f64) -> Result<Self, GalleryError> {
        if e.rank() != 1 || f.rank() != 1 || (e.matrix() * f.matrix()).norm() > tol {
            return Err(GalleryError::BadPair);
        }
        for (index, p) in [&e, &f].into_iter().enumerate() {
            if state.prob(p) <= tol {
                return Err(GalleryError::WeightZero { index });
            }
        }
        Ok(Self { state, e, f, tol })
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    fn weight_eq(&self, a: &Projection, b: &Projection) -> bool {
        match (self.state.exact_prob(a), self.state.exact_prob(b)) {
            (Some(x), Some(y)) => x == y,
            _ => (self.state.prob(a) - self.state.prob(b)).abs() <= self.tol,
        }
    }

    fn is_null(&self, a: &Projection) -> bool {
        match self.state.exact_prob(a) {
            Some(x) => x.is_zero(),
            None => self.state.prob(a).abs() <= self.tol,
        }
    }

    pub fn contains(&self, p: &ProjectionPartition) -> bool {
        let blocks = p.blocks();
        let matches = |target: &Projection| -> Vec<usize> {
            (0..blocks.len())
                .filter(|&i| target.is_below(&blocks[i], 1e-9) && self.weight_eq(&blocks[i], target))
                .collect()
        };
        let (es, fs) = (matches(&self.e), matches(&self.f));
        for &a in &es {
            for &b in &fs {
                if a == b {
                    continue;
                }
                let positive = (0..blocks.len()).filter(|&i| i != a && i != b && !self.is_null(&blocks[i])).count();
                if positive <= 1 {
                    return true;
                }
            }
        }
        false
    }
}

impl InformationOracle for PiClassOracle {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        Ok(if self.contains(p) { 1.0 } else { 0.0 })
    }
}

/// Dimension-6 model `ρ = diag(1/6, 1/6, 1/6, 1/6, 1/3, 0)`, `ê = e_0`, `f̂ = e_4`.
pub fn pi_class_model() -> PiClassOracle {
    let w = [rational::rat(1, 6), rational::rat(1, 6), rational::rat(1, 6), rational::rat(1, 6), rational::rat(1, 3), Rational::zero()];
    let state = State::from_weights(&w).expect("weights sum to one");
    PiClassOracle::new(state, Projection::coordinate(6, &[0]), Projection::coordinate(6, &[4]), 1e-12)
        .expect("positive orthogonal pair")
}

/// All set partitions of `{0, …, n−1}` (restricted growth strings).
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == labels.len() {
            let mut blocks = vec![Vec::new(); max];
            for (x, &l) in labels.iter().enumerate() {
                blocks[l].push(x);
            }
            out.push(blocks);
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, max.max(l + 1), labels, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(0, 0, &mut labels, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveReport {
    pub partitions: usize,
    pub independent_pairs: usize,
    pub max_defect: f64,
    pub violations: usize,
    /// First violating pair as indices into the set-partition list.
    pub first_violation: Option<(usize, usize)>,
}

/// Additivity `I(𝐏·𝐐) = I(𝐏) + I(𝐐)` over every pair of coordinate partitions
/// that are independent under an exact diagonal state.
pub fn exhaustive_coordinate_additivity(
    oracle: &mut dyn InformationOracle,
    state: &State,
    tol: f64,
) -> Result<ExhaustiveReport, GalleryError> {
    let d = state.dim();
    let weights = state.exact_weights().ok_or(GalleryError::NotFaithful)?.to_vec();
    let parts = set_partitions(d);
    let mass = |s: &[usize]| rational::sum(s.iter().map(|&i| &weights[i]));
    let block_mass: Vec<Vec<Rational>> = parts.iter().map(|p| p.iter().map(|b| mass(b)).collect()).collect();
    let mut values = Vec::with_capacity(parts.len());
    for p in &parts {
        values.push(oracle.query(&ProjectionPartition::from_coordinate_groups(d, p, 1e-12)?)?);
    }
    let mut report =
        ExhaustiveReport { partitions: parts.len(), independent_pairs: 0, max_defect: 0.0, violations: 0, first_violation: None };
    for (i, p) in parts.iter().enumerate() {
        for (j, q) in parts.iter().enumerate() {
            let mut product = Vec::new();
            let mut independent = true;
            'outer: for (a, pa) in p.iter().enumerate() {
                for (b, qb) in q.iter().enumerate() {
                    let cap: Vec<usize> = pa.iter().copied().filter(|x| qb.contains(x)).collect();
                    if mass(&cap) != &block_mass[i][a] * &block_mass[j][b] {
                        independent = false;
                        break 'outer;
                    }
                    if !cap.is_empty() {
                        product.push(cap);
                    }
                }
            }
            if !independent {
                continue;
            }
            report.independent_pairs += 1;
            let v = oracle.query(&ProjectionPartition::from_coordinate_groups(d, &product, 1e-12)?)?;
            let defect = (v - values[i] - values[j]).abs();
            report.max_defect = report.max_defect.max(defect);
            if defect > tol {
                report.violations += 1;
                report.first_violation.get_or_insert((i, j));
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityReport {
    pub values: Vec<f64>,
    pub limit_value: f64,
    /// `|I(𝐏^N) − I(𝐏)|` for the last chain element.
    pub gap: f64,
    /// Largest jump between consecutive values, the limit included.
    pub max_jump: f64,
}

fn tabulate(values: Vec<f64>, limit_value: f64) -> ContinuityReport {
    let gap = values.last().map_or(0.0, |v| (v - limit_value).abs());
    let max_jump = values
        .iter()
        .chain(core::iter::once(&limit_value))
        .collect::<Vec<_>>()
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    ContinuityReport { values, limit_value, gap, max_jump }
}

/// `I(P_n, P_n^⊥)` along `P_1 ≤ P_2 ≤ … ≤ P`; a tabulation, not a certificate.
pub fn monotone_continuity_probe(
    oracle: &mut dyn InformationOracle,
    chain: &[Projection],
    limit: &Projection,
    tol: f64,
) -> Result<ContinuityReport, GalleryError> {
    for (index, w) in chain.iter().chain(core::iter::once(limit)).collect::<Vec<_>>().windows(2).enumerate() {
        if !w[0].is_below(w[1], tol) {
            return Err(GalleryError::ChainNotMonotone { index });
        }
    }
    let pair = |p: &Projection| ProjectionPartition::new(vec![p.clone(), p.complement()], 1e-8);
    let mut values = Vec::with_capacity(chain.len());
    for p in chain {
        values.push(oracle.query(&pair(p)?)?);
    }
    let limit_value = oracle.query(&pair(limit)?)?;
    Ok(tabulate(values, limit_value))
}

/// `I(𝐏^n)` along mutually commuting partitions converging to `𝐏`.
pub fn partition_chain_probe(
    oracle: &mut dyn InformationOracle,
    chain: &[ProjectionPartition],
    limit: &ProjectionPartition,
    tol: f64,
) -> Result<ContinuityReport, GalleryError> {
    let all: Vec<&ProjectionPartition> = chain.iter().chain(core::iter::once(limit)).collect();
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate().skip(i + 1) {
            for pa in a.blocks() {
                for pb in b.blocks() {
                    let c = pa.matrix() * pb.matrix() - pb.matrix() * pa.matrix();
                    if c.norm() > tol {
                        return Err(GalleryError::ChainNotCommuting { i, j });
                    }
                }
            }
        }
    }
    let mut values = Vec::with_capacity(chain.len());
    for p in chain {
        values.push(oracle.query(p)?);
    }
    let limit_value = oracle.query(limit)?;
    Ok(tabulate(values, limit_value))
}

/// Binary entropy `h(t)`, the von Neumann information of `(P, P^⊥)` at `ρ(P) = t`.
pub fn binary_entropy(t: f64) -> f64 {
    math::plogp_inv(t) + math::plogp_inv(1.0 - t)
}
