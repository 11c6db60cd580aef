//! Extraction engine: recover `μ` and `I_s` from a black-box additive information.
//!
//! The pipeline works on equal-measure boolean structures:
//!
//! 1. spot-check additivity on independent cell-aligned pairs;
//! 2. per structure, estimate `m̂(C) = μ(B(C))` for each cell from swap
//!    differences `I(T_VW 𝐀) − I(𝐀) = m(V) − m(W)`, with `λ(A_2) = 2λ(A_1)`;
//! 3. read off `Î_s(𝐩) = I(B(𝐀)) − Σ m̂(A_i) log λ(A_i)` on cell-aligned profiles;
//! 4. fit a traceless Hermitian `μ̂` to all `(B(C), m̂(C))` samples;
//! 5. verify the reconstruction on held-out partitions.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::seq::IndexedRandom;
use rand::Rng;
use thiserror::Error;

use crate::borel::IntervalSet;
use crate::info::{self, Distribution, GeneralInformation, InfoError};
use crate::linalg::{CMat, LinalgError, Projection, ProjectionPartition, SignedOperator, State, C64};
use crate::math;
use crate::random::{self, SeededRng};
use crate::rational::{self, Rational};
use crate::structure::{BooleanStructure, StructureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle protocol failure: {0}")]
    Protocol(String),
    #[error("oracle evaluation failed: {0}")]
    Evaluation(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error("query budget of {budget} exhausted")]
    QueryBudgetExceeded { budget: usize },
    #[error("oracle is not additive: {check} defect {defect:e}")]
    OracleNotAdditive { check: String, defect: f64 },
    #[error("extraction needs at least 3 cells, got {cells}")]
    TooFewCells { cells: usize },
    #[error("extraction needs cells of equal measure")]
    UnequalCells,
    #[error("profile is not cell-aligned")]
    NotCellAligned,
    #[error("Gleason fit needs dimension at least 3, got {dim}")]
    DimensionTooSmall { dim: usize },
    #[error("sample projections leave a {null_dim}-dimensional null space")]
    RankDeficient { null_dim: usize },
    #[error("no samples to fit")]
    NoSamples,
}

/// A black-box real functional on projection partitions.
pub trait InformationOracle {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError>;

    /// Whether repeated queries of the same partition return the same value.
    fn declared_pure(&self) -> bool {
        true
    }
}

impl<T: InformationOracle + ?Sized> InformationOracle for &mut T {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        (**self).query(p)
    }

    fn declared_pure(&self) -> bool {
        (**self).declared_pure()
    }
}

impl InformationOracle for GeneralInformation {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        self.evaluate(p).map_err(|e| OracleError::Evaluation(format!("{e}")))
    }
}

/// `Σ ρ(EP_iE)/ρ(E) · log 1/ρ(P_i)`.
#[derive(Debug, Clone)]
pub struct ConditionalOracle {
    pub state: State,
    pub event: Projection,
}

impl InformationOracle for ConditionalOracle {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        info::conditional_info(&self.state, &self.event, p).map_err(|e| OracleError::Evaluation(format!("{e}")))
    }
}

/// Adds seeded uniform noise in `[−amplitude, amplitude]` to every answer.
#[derive(Debug, Clone)]
pub struct NoisyOracle<O> {
    inner: O,
    amplitude: f64,
    rng: SeededRng,
}

impl<O> NoisyOracle<O> {
    pub fn new(inner: O, amplitude: f64, seed: u64) -> Self {
        Self { inner, amplitude, rng: random::seeded(seed ^ 0x6e6f_6973_7921) }
    }
}

impl<O: InformationOracle> InformationOracle for NoisyOracle<O> {
    fn query(&mut self, p: &ProjectionPartition) -> Result<f64, OracleError> {
        let v = self.inner.query(p)?;
        let u: f64 = self.rng.random::<f64>() * 2.0 - 1.0;
        Ok(v + self.amplitude * u)
    }

    fn declared_pure(&self) -> bool {
        false
    }
}

/// Counts queries against an optional budget. Queries are issued one at a
/// time in program order.
pub struct QueryCounter<'a> {
    oracle: &'a mut dyn InformationOracle,
    count: usize,
    budget: Option<usize>,
}

impl<'a> QueryCounter<'a> {
    pub fn new(oracle: &'a mut dyn InformationOracle, budget: Option<usize>) -> Self {
        Self { oracle, count: 0, budget }
    }

    pub fn query(&mut self, p: &ProjectionPartition) -> Result<f64, DecomposeError> {
        if let Some(budget) = self.budget {
            if self.count >= budget {
                return Err(DecomposeError::QueryBudgetExceeded { budget });
            }
        }
        self.count += 1;
        Ok(self.oracle.query(p)?)
    }

    pub fn count(&self) -> usize {
        self.count
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdditivityReport {
    pub checks: usize,
    pub max_defect: f64,
    pub tolerance: f64,
    /// Whether independent pairs with two nontrivial factors were available
    /// (needs a composite cell count).
    pub nontrivial_pairs: bool,
}

/// Sampled additivity checks through an equal-cell structure.
///
/// For `N = a·b` cells, a random relabelling of the cells is cut into rows and
/// columns, giving independent partitions `𝐀`, `𝐁` with `𝐀·𝐁` the single
/// cells. Always included: `I((1_H)) = 0` and invariance under block order.
pub fn spot_check_additivity(
    q: &mut QueryCounter<'_>,
    b: &BooleanStructure,
    checks: usize,
    tol: f64,
    rng: &mut SeededRng,
) -> Result<AdditivityReport, DecomposeError> {
    let n = b.len();
    let mut max_defect: f64 = 0.0;
    let mut done = 0;
    let fail = |name: &str, defect: f64, max: &mut f64| -> Result<(), DecomposeError> {
        *max = max.max(defect);
        if defect > tol || defect.is_nan() {
            return Err(DecomposeError::OracleNotAdditive { check: String::from(name), defect });
        }
        Ok(())
    };
    let trivial = q.query(&ProjectionPartition::identity(b.dim()))?;
    fail("I((1_H)) = 0", trivial.abs(), &mut max_defect)?;
    done += 1;

    let equal = b.cells().iter().all(|c| c.measure() == b.cells()[0].measure());
    let factor = (2..n).find(|a| n.is_multiple_of(*a) && n / a >= 2).filter(|_| equal);
    for _ in 0..checks {
        let perm = random::permutation(n, rng);
        match factor {
            Some(a) => {
                let c = n / a;
                let rows: Vec<Vec<usize>> = (0..a).map(|i| (0..c).map(|j| perm[i * c + j]).collect()).collect();
                let cols: Vec<Vec<usize>> = (0..c).map(|j| (0..a).map(|i| perm[i * c + j]).collect()).collect();
                let cells: Vec<Vec<usize>> = perm.iter().map(|&x| vec![x]).collect();
                let ia = q.query(&b.group_partition(&rows)?)?;
                let ib = q.query(&b.group_partition(&cols)?)?;
                let iab = q.query(&b.group_partition(&cells)?)?;
                fail("I(P·Q) = I(P) + I(Q)", (iab - ia - ib).abs(), &mut max_defect)?;
            }
            None => {
                let cut = rng.random_range(1..n.max(2));
                let groups = vec![perm[..cut].to_vec(), perm[cut..].to_vec()];
                let i1 = q.query(&b.group_partition(&groups)?)?;
                let i2 = q.query(&b.group_partition(&[groups[1].clone(), groups[0].clone()])?)?;
                fail("permutation invariance", (i1 - i2).abs(), &mut max_defect)?;
            }
        }
        done += 1;
    }
    Ok(AdditivityReport { checks: done, max_defect, tolerance: tol, nontrivial_pairs: factor.is_some() })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellMeasures {
    /// `m̂(C_j)` per cell.
    pub m_hat: Vec<f64>,
    /// `max |d(V,W) + d(W,V)|`.
    pub antisymmetry_residual: f64,
    /// `Σ_j m̂(C_j)`.
    pub total: f64,
}

fn check_equal_cells(b: &BooleanStructure) -> Result<(), DecomposeError> {
    let n = b.len();
    if n < 3 {
        return Err(DecomposeError::TooFewCells { cells: n });
    }
    if b.cells().iter().any(|c| c.measure() != b.cells()[0].measure()) {
        return Err(DecomposeError::UnequalCells);
    }
    Ok(())
}

/// Swap-difference estimate of the nonsymmetric measure on each cell.
///
/// For the ordered pair `(V, W)` the partition is `A_1 = V ∪ S_1` with
/// `k = max(1, ⌊N/4⌋)` cells, `A_2 = W ∪ S_2` with `2k` cells and `A_3` the
/// rest; `T_VW` exchanges `V` and `W`. The fillers `S_1, S_2` are taken
/// cyclically from the remaining cells starting at `V`'s index, so `d(V,W)`
/// and `d(W,V)` come from different partitions.
pub fn extract_cell_measure(q: &mut QueryCounter<'_>, b: &BooleanStructure) -> Result<CellMeasures, DecomposeError> {
    check_equal_cells(b)?;
    let n = b.len();
    let k = (n / 4).max(1);
    let mut d = vec![vec![0.0; n]; n];
    for v in 0..n {
        for w in 0..n {
            if v == w {
                continue;
            }
            let others: Vec<usize> = (0..n).map(|i| (v + i) % n).filter(|&i| i != v && i != w).collect();
            let s1 = &others[..k - 1];
            let s2 = &others[k - 1..3 * k - 2];
            let rest = &others[3 * k - 2..];
            let mut a1 = vec![v];
            a1.extend_from_slice(s1);
            let mut a2 = vec![w];
            a2.extend_from_slice(s2);
            let mut t1 = vec![w];
            t1.extend_from_slice(s1);
            let mut t2 = vec![v];
            t2.extend_from_slice(s2);
            let (mut base, mut swapped) = (vec![a1, a2], vec![t1, t2]);
            if !rest.is_empty() {
                base.push(rest.to_vec());
                swapped.push(rest.to_vec());
            }
            let i0 = q.query(&b.group_partition(&base)?)?;
            let i1 = q.query(&b.group_partition(&swapped)?)?;
            d[v][w] = i1 - i0;
        }
    }
    let mut antisymmetry: f64 = 0.0;
    let mut m_hat = vec![0.0; n];
    for v in 0..n {
        let mut acc = 0.0;
        for w in 0..n {
            if v != w {
                antisymmetry = antisymmetry.max((d[v][w] + d[w][v]).abs());
                acc += 0.5 * (d[v][w] - d[w][v]);
            }
        }
        m_hat[v] = acc / n as f64;
    }
    let total = m_hat.iter().sum();
    Ok(CellMeasures { m_hat, antisymmetry_residual: antisymmetry, total })
}

/// Partitions of `n` into positive parts in decreasing order, optionally
/// limited to `max_parts` parts; lexicographically decreasing.
pub fn integer_partitions(n: usize, max_parts: Option<usize>) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, parts_left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        if parts_left == 0 {
            return;
        }
        for p in (1..=max.min(n)).rev() {
            cur.push(p);
            rec(n - p, p, parts_left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, max_parts.unwrap_or(n), &mut Vec::new(), &mut out);
    out
}

/// Consecutive cell groups with the given sizes.
pub fn consecutive_groups(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut start = 0;
    sizes
        .iter()
        .map(|&s| {
            let g = (start..start + s).collect();
            start += s;
            g
        })
        .collect()
}

/// Extracted `Î_s`, keyed by the decreasing profile with zeros removed.
pub type SymTable = BTreeMap<Vec<Rational>, f64>;

pub fn profile_key(p: &[Rational]) -> Vec<Rational> {
    let mut v: Vec<Rational> = p.iter().filter(|x| !x.is_zero()).cloned().collect();
    v.sort_by(|a, b| b.cmp(a));
    v
}

/// Profiles sampled by [`extract_symmetric`]: every integer partition of
/// the cell count when `N ≤ 16`, else those with at most three parts.
pub fn default_profiles(n: usize) -> Vec<Vec<usize>> {
    if n <= 16 {
        integer_partitions(n, None)
    } else {
        integer_partitions(n, Some(3))
    }
}

/// `Î_s(λ(𝐀)) = I(B(𝐀)) − Σ m̂(A_i) log λ(A_i)` on consecutive-cell partitions.
pub fn extract_symmetric(
    q: &mut QueryCounter<'_>,
    b: &BooleanStructure,
    m_hat: &[f64],
    profiles: &[Vec<usize>],
) -> Result<SymTable, DecomposeError> {
    if m_hat.len() != b.len() {
        return Err(DecomposeError::NotCellAligned);
    }
    let mut table = SymTable::new();
    for sizes in profiles {
        if sizes.iter().sum::<usize>() != b.len() {
            return Err(DecomposeError::NotCellAligned);
        }
        let groups = consecutive_groups(sizes);
        let value = q.query(&b.group_partition(&groups)?)?;
        let measures = b.group_measures(&groups);
        let mut correction = 0.0;
        for (g, m) in groups.iter().zip(&measures) {
            if !m.is_zero() {
                let mass: f64 = g.iter().map(|&j| m_hat[j]).sum();
                correction += mass * rational::log2(m);
            }
        }
        table.insert(profile_key(&measures), value - correction);
    }
    Ok(table)
}

/// Per-structure extraction result.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureExtraction {
    pub cells: CellMeasures,
    pub sym: SymTable,
}

pub fn extract_on_structure(
    q: &mut QueryCounter<'_>,
    b: &BooleanStructure,
) -> Result<StructureExtraction, DecomposeError> {
    let cells = extract_cell_measure(q, b)?;
    let sym = extract_symmetric(q, b, &cells.m_hat, &default_profiles(b.len()))?;
    Ok(StructureExtraction { cells, sym })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    /// Max `|Î_s^B − Î_s^{B₁}|` over common profiles.
    pub sym_deviation: f64,
    pub common_profiles: usize,
    /// Max `|m̂_B(C) − m̂_{B₁}(C′)|` over cells with equal projections.
    pub cell_deviation: f64,
    pub matched_cells: usize,
    /// Max `|m̂_B([0,α)) − m̂_{B₁}([0,α))|` over grid points `α` where
    /// `B([0,α)) = B₁([0,α))`.
    pub prefix_deviation: f64,
    pub shared_prefixes: usize,
}

/// Extracts through two structures over the same state and compares.
pub fn structure_invariance_check(
    q: &mut QueryCounter<'_>,
    b: &BooleanStructure,
    b1: &BooleanStructure,
) -> Result<InvarianceReport, DecomposeError> {
    if (b.state().matrix() - b1.state().matrix()).norm() > crate::structure::MATCH_TOL {
        return Err(StructureError::IncompatibleStates.into());
    }
    let e0 = extract_on_structure(q, b)?;
    let e1 = if b == b1 { e0.clone() } else { extract_on_structure(q, b1)? };
    let mut sym_deviation: f64 = 0.0;
    let mut common_profiles = 0;
    for (key, v) in &e0.sym {
        if let Some(w) = e1.sym.get(key) {
            sym_deviation = sym_deviation.max((v - w).abs());
            common_profiles += 1;
        }
    }
    let mut cell_deviation: f64 = 0.0;
    let mut matched_cells = 0;
    for (i, c) in b.cells().iter().enumerate() {
        let hit = b1
            .cells()
            .iter()
            .position(|o| o.projection().approx_eq(c.projection(), crate::structure::MATCH_TOL));
        if let Some(j) = hit {
            cell_deviation = cell_deviation.max((e0.cells.m_hat[i] - e1.cells.m_hat[j]).abs());
            matched_cells += 1;
        }
    }
    // prefixes [0, α) at every cell boundary of B
    let mut prefix_deviation: f64 = 0.0;
    let mut shared_prefixes = 0;
    let mut boundaries: Vec<Rational> = b
        .cells()
        .iter()
        .flat_map(|c| c.set().intervals().iter().flat_map(|(x, y)| [x.clone(), y.clone()]))
        .filter(|x| !x.is_zero())
        .collect();
    boundaries.sort();
    boundaries.dedup();
    for alpha in boundaries {
        let prefix = IntervalSet::interval(Rational::zero(), alpha);
        let (Ok(in0), Ok(in1)) = (b.cells_in(&prefix), b1.cells_in(&prefix)) else { continue };
        let p0 = b.evaluate(&prefix)?;
        let p1 = b1.evaluate(&prefix)?;
        if !p0.approx_eq(&p1, crate::structure::MATCH_TOL) {
            continue;
        }
        let m0: f64 = in0.iter().map(|&j| e0.cells.m_hat[j]).sum();
        let m1: f64 = in1.iter().map(|&j| e1.cells.m_hat[j]).sum();
        prefix_deviation = prefix_deviation.max((m0 - m1).abs());
        shared_prefixes += 1;
    }
    Ok(InvarianceReport {
        sym_deviation,
        common_profiles,
        cell_deviation,
        matched_cells,
        prefix_deviation,
        shared_prefixes,
    })
}

/// Orthonormal (Hilbert–Schmidt) basis of traceless Hermitian `d × d`
/// matrices: generalized Gell-Mann matrices.
pub fn traceless_basis(d: usize) -> Vec<CMat> {
    let mut out = Vec::with_capacity(d * d - 1);
    let s = 1.0 / math::sqrt(2.0);
    for j in 0..d {
        for k in (j + 1)..d {
            let mut sym = CMat::zeros(d, d);
            sym[(j, k)] = C64::new(s, 0.0);
            sym[(k, j)] = C64::new(s, 0.0);
            out.push(sym);
            let mut anti = CMat::zeros(d, d);
            anti[(j, k)] = C64::new(0.0, -s);
            anti[(k, j)] = C64::new(0.0, s);
            out.push(anti);
        }
    }
    for l in 1..d {
        let norm = 1.0 / math::sqrt((l * (l + 1)) as f64);
        let mut diag = CMat::zeros(d, d);
        for m in 0..l {
            diag[(m, m)] = C64::new(norm, 0.0);
        }
        diag[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(diag);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GleasonFit {
    pub mu: SignedOperator,
    /// `max_k |tr(μ̂X_k) − v_k|`.
    pub residual: f64,
    /// Rank of the design matrix; `d² − 1` when the samples span.
    pub rank: usize,
    /// Directions of traceless Hermitian space left undetermined (the fit is
    /// minimum-norm along them).
    pub null_dim: usize,
    pub samples: usize,
}

/// Rank of the design `tr(G_b X_k)` over the traceless basis `G_b`.
pub fn design_rank(observables: &[&CMat], d: usize) -> usize {
    if observables.is_empty() || d < 2 {
        return 0;
    }
    let (a, _) = design(observables, d);
    let svd = a.svd(false, false);
    rank_of(&svd.singular_values)
}

fn design(observables: &[&CMat], d: usize) -> (DMatrix<f64>, Vec<CMat>) {
    let basis = traceless_basis(d);
    let a = DMatrix::from_fn(observables.len(), basis.len(), |k, j| {
        crate::linalg::trace_product(&basis[j], observables[k]).re
    });
    (a, basis)
}

fn rank_of(sv: &nalgebra::DVector<f64>) -> usize {
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > 1e-9 * top && s > 0.0).count()
}

/// Least squares over linear samples `tr(μ X_k) = v_k`; minimum-norm when
/// the samples do not span, unless `strict`.
pub fn fit_linear(samples: &[(CMat, f64)], strict: bool) -> Result<GleasonFit, DecomposeError> {
    let first = samples.first().ok_or(DecomposeError::NoSamples)?;
    let d = first.0.nrows();
    let observables: Vec<&CMat> = samples.iter().map(|(x, _)| x).collect();
    let (a, basis) = design(&observables, d);
    let n = basis.len();
    let v = nalgebra::DVector::from_iterator(samples.len(), samples.iter().map(|(_, x)| *x));
    let svd = a.clone().svd(true, true);
    let rank = rank_of(&svd.singular_values);
    if strict && rank < n {
        return Err(DecomposeError::RankDeficient { null_dim: n - rank });
    }
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let coeffs = svd.solve(&v, 1e-9 * top).map_err(|e| OracleError::Evaluation(String::from(e)))?;
    let mut mu = CMat::zeros(d, d);
    for (c, g) in coeffs.iter().zip(&basis) {
        mu += g * C64::new(*c, 0.0);
    }
    mu = (&mu + mu.adjoint()) * C64::new(0.5, 0.0);
    let fitted = &a * &coeffs;
    let residual = (fitted - v).iter().map(|x| x.abs()).fold(0.0, f64::max);
    Ok(GleasonFit { mu: SignedOperator::new(mu, 1e-9)?, residual, rank, null_dim: n - rank, samples: samples.len() })
}

/// Least-squares traceless Hermitian `μ̂` with `tr(μ̂P_k) ≈ v_k`.
pub fn gleason_fit(samples: &[(Projection, f64)]) -> Result<GleasonFit, DecomposeError> {
    let first = samples.first().ok_or(DecomposeError::NoSamples)?;
    let d = first.0.dim();
    if d < 3 {
        return Err(DecomposeError::DimensionTooSmall { dim: d });
    }
    let linear: Vec<(CMat, f64)> = samples.iter().map(|(p, v)| (p.matrix().clone(), *v)).collect();
    fit_linear(&linear, true)
}

/// Reconstruction `Î_s(λ(𝐀)) + Σ μ̂(B(A_i)) log λ(A_i)` from fitted artifacts.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub mu: Option<SignedOperator>,
    pub sym: SymTable,
}

impl Reconstruction {
    /// Value on cell groups of `b`; `cell_mu` overrides `μ̂(B(C))` per cell
    /// when no operator was fitted.
    pub fn value(&self, b: &BooleanStructure, groups: &[Vec<usize>], cell_mu: Option<&[f64]>) -> Option<f64> {
        let measures = b.group_measures(groups);
        let sym = *self.sym.get(&profile_key(&measures))?;
        let mut value = sym;
        for (g, m) in groups.iter().zip(&measures) {
            if m.is_zero() {
                continue;
            }
            let mass: f64 = match (&self.mu, cell_mu) {
                (Some(mu), _) => g.iter().map(|&j| mu.value(b.cells()[j].projection())).sum(),
                (None, Some(cm)) => g.iter().map(|&j| cm[j]).sum(),
                (None, None) => return None,
            };
            value += mass * rational::log2(m);
        }
        Some(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub trials: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Compares oracle and reconstruction on random held-out partitions: random
/// groupings of cells (profiles drawn from the table) cycling through the
/// base structure and fresh random uniform structures. With a fitted `μ̂`,
/// every fourth draw is instead a random two-block rank probe. Draws the
/// reconstruction cannot evaluate are skipped, up to `4·trials` draws.
#[allow(clippy::too_many_arguments)]
pub fn verify_decomposition(
    q: &mut QueryCounter<'_>,
    recon: &Reconstruction,
    base: &BooleanStructure,
    base_cell_mu: &[f64],
    fresh: &[BooleanStructure],
    trials: usize,
    tol: f64,
    rng: &mut SeededRng,
) -> Result<VerificationReport, DecomposeError> {
    let state = base.state();
    let d = state.dim();
    let n = base.len();
    let profiles: Vec<Vec<usize>> = default_profiles(n).into_iter().filter(|p| p.len() > 1).collect();
    let mut max_residual: f64 = 0.0;
    let mut done = 0;
    if profiles.is_empty() {
        return Ok(VerificationReport { trials: 0, max_residual, tolerance: tol, passed: true });
    }
    let pool: Vec<&BooleanStructure> = if recon.mu.is_some() {
        core::iter::once(base).chain(fresh.iter()).collect()
    } else {
        vec![base]
    };
    for t in 0..4 * trials {
        if done == trials {
            break;
        }
        if let (Some(mu), 3) = (&recon.mu, t % 4) {
            let j = rng.random_range(1..n);
            let r = rng.random_range(1..d.max(2));
            let order = random::permutation(d, rng);
            let tr = rational::rat(j as i64, n as i64);
            let tf = rational::to_f64(&tr);
            let key = profile_key(&[tr.clone(), Rational::from_integer(1.into()) - &tr]);
            let (Some(p), Some(&is)) = (projection_of_weight(state, r, tf, Some(&order)), recon.sym.get(&key)) else {
                continue;
            };
            let expected = is + mu.value(&p) * (rational::log2(&tr) - math::log2(1.0 - tf));
            let pair = ProjectionPartition::from_blocks_unchecked(vec![p.clone(), p.complement()]);
            let actual = q.query(&pair)?;
            max_residual = max_residual.max((actual - expected).abs());
            done += 1;
            continue;
        }
        let b = pool[t % pool.len()];
        let sizes = profiles.choose(rng).expect("nonempty").clone();
        let perm = random::permutation(n, rng);
        let mut start = 0;
        let groups: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&s| {
                let g = perm[start..start + s].to_vec();
                start += s;
                g
            })
            .collect();
        let cell_mu = core::ptr::eq(b, base).then_some(base_cell_mu);
        let Some(expected) = recon.value(b, &groups, cell_mu) else { continue };
        let actual = q.query(&b.group_partition(&groups)?)?;
        max_residual = max_residual.max((actual - expected).abs());
        if actual.is_nan() {
            max_residual = f64::INFINITY;
        }
        done += 1;
    }
    Ok(VerificationReport { trials: done, max_residual, tolerance: tol, passed: max_residual <= tol })
}

/// A projection of rank `rank` with `ρ(P) = t`, built in ρ's eigenbasis by
/// walking from the `rank` lowest to the `rank` highest eigenvectors one
/// exchange at a time and rotating inside the exchange that crosses `t`.
/// `order` permutes the exchange sequence. `None` when `t` is out of reach.
pub fn projection_of_weight(state: &State, rank: usize, t: f64, order: Option<&[usize]>) -> Option<Projection> {
    let d = state.dim();
    if rank == 0 || rank >= d {
        return None;
    }
    let (vals, vecs) = crate::linalg::eigh(state.matrix());
    let low: Vec<usize> = (0..rank).collect();
    let high: Vec<usize> = (d - rank..d).collect();
    let outgoing: Vec<usize> = low.iter().copied().filter(|i| !high.contains(i)).collect();
    let mut incoming: Vec<usize> = high.iter().copied().filter(|i| !low.contains(i)).collect();
    if let Some(order) = order {
        incoming = order.iter().filter_map(|&k| incoming.get(k).copied()).collect();
    }
    let mut set = low.clone();
    let mut w: f64 = low.iter().map(|&i| vals[i]).sum();
    let top: f64 = high.iter().map(|&i| vals[i]).sum();
    if t < w - 1e-15 || t > top + 1e-15 {
        return None;
    }
    for (&a, &b) in outgoing.iter().zip(&incoming) {
        let gain = vals[b] - vals[a];
        if t <= w + gain && gain > 0.0 {
            let s2 = ((t - w) / gain).clamp(0.0, 1.0);
            let (c, s) = (math::sqrt(1.0 - s2), math::sqrt(s2));
            let mut cols = CMat::zeros(d, rank);
            let mut k = 0;
            for &i in set.iter().filter(|&&i| i != a) {
                cols.set_column(k, &vecs.column(i));
                k += 1;
            }
            let v = vecs.column(a) * C64::new(c, 0.0) + vecs.column(b) * C64::new(s, 0.0);
            cols.set_column(k, &v);
            return Some(Projection::from_orthonormal_columns(&cols));
        }
        w += gain;
        let pos = set.iter().position(|&i| i == a).expect("outgoing index is in the set");
        set[pos] = b;
    }
    None
}

/// Linear samples `tr(μX) = v` that see the component of `μ` along
/// `ρ − 1/d`, which no cell of an equal-measure structure does (every such
/// cell has `tr((ρ − 1/d)P) = 0`).
///
/// * Grid probes: `(P, P⊥)` with `ρ(P) = t = j/N` and `rank(P)/d ≠ t`; by
///   structure independence of `I_s`, `μ(P) = (I(P,P⊥) − Î_s(t,1−t)) / log(t/(1−t))`.
/// * Rank pairs: `P`, `Q` of ranks `r`, `r+1` and equal weight `a ≠ 1/2`;
///   `I_s` cancels and `μ(P) − μ(Q) = (I(P,P⊥) − I(Q,Q⊥)) / log(a/(1−a))`.
pub fn rank_probes(
    q: &mut QueryCounter<'_>,
    state: &State,
    sym: &SymTable,
    n_cells: usize,
    max_probes: usize,
) -> Result<Vec<(CMat, f64)>, DecomposeError> {
    let d = state.dim();
    let mut out = Vec::new();
    let one = Rational::from_integer(1.into());
    let mut grid = Vec::new();
    for j in 1..n_cells {
        if 2 * j == n_cells {
            continue;
        }
        for r in 1..d {
            if r * n_cells == j * d {
                continue;
            }
            let gap = math::abs(j as f64 / n_cells as f64 - r as f64 / d as f64);
            grid.push((gap, j, r));
        }
    }
    grid.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for (_, j, r) in grid {
        if out.len() >= max_probes {
            return Ok(out);
        }
        let t = rational::rat(j as i64, n_cells as i64);
        let tf = rational::to_f64(&t);
        let Some(p) = projection_of_weight(state, r, tf, None) else { continue };
        let Some(&is) = sym.get(&profile_key(&[t.clone(), &one - &t])) else { continue };
        let value = q.query(&ProjectionPartition::from_blocks_unchecked(vec![p.clone(), p.complement()]))?;
        let ratio = rational::log2(&t) - math::log2(1.0 - tf);
        out.push((p.matrix().clone(), (value - is) / ratio));
    }
    let (vals, _) = crate::linalg::eigh(state.matrix());
    for r in 1..d.saturating_sub(1) {
        if out.len() >= max_probes {
            break;
        }
        // weights reachable by both ranks: [L_{r+1}, H_r]
        let lo: f64 = vals[..r + 1].iter().sum();
        let hi: f64 = vals[d - r..].iter().sum();
        if hi - lo < 1e-3 {
            continue;
        }
        let mut a = lo + 0.5 * (hi - lo);
        if math::abs(a - 0.5) < 0.1 * (hi - lo) {
            a = lo + 0.25 * (hi - lo);
        }
        if math::abs(a - 0.5) < 1e-3 {
            continue;
        }
        let (Some(p), Some(pq)) = (projection_of_weight(state, r, a, None), projection_of_weight(state, r + 1, a, None))
        else {
            continue;
        };
        let ip = q.query(&ProjectionPartition::from_blocks_unchecked(vec![p.clone(), p.complement()]))?;
        let iq = q.query(&ProjectionPartition::from_blocks_unchecked(vec![pq.clone(), pq.complement()]))?;
        let ratio = math::log2(a) - math::log2(1.0 - a);
        out.push((p.matrix() - pq.matrix(), (ip - iq) / ratio));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionConfig {
    /// Equal cells per structure; defaults to the dimension (rank-1 cells).
    pub cells: Option<usize>,
    pub seed: u64,
    pub trials: usize,
    pub spot_checks: usize,
    /// Cap on the number of structures used for the fit.
    pub max_structures: usize,
    pub query_budget: Option<usize>,
    pub additivity_tol: f64,
    pub extraction_tol: f64,
    pub fit_tol: f64,
    pub verify_tol: f64,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            cells: None,
            seed: 0,
            trials: 100,
            spot_checks: 16,
            max_structures: 64,
            query_budget: None,
            additivity_tol: 1e-5,
            extraction_tol: 1e-9,
            fit_tol: 1e-8,
            verify_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractionReport {
    pub dim: usize,
    pub cell_count: usize,
    /// `log2` of the cell count when it is a power of two.
    pub level: Option<u32>,
    /// Cells of the base structure with their `m̂`.
    pub cell_measures: Vec<(IntervalSet, f64)>,
    /// Largest `|Σ_cells m̂|` over all structures used.
    pub mhat_total: f64,
    pub antisymmetry_residual: f64,
    pub fitted_mu: Option<SignedOperator>,
    pub fit_residual: Option<f64>,
    pub fit_rank: Option<usize>,
    /// Directions of `μ` the oracle's answers did not determine.
    pub fit_null_dim: Option<usize>,
    pub structures_used: usize,
    /// Two-block probes added to resolve the `ρ − 1/d` direction.
    pub rank_probes: usize,
    pub sym_samples: Vec<(Distribution, f64)>,
    pub additivity: AdditivityReport,
    pub verification: VerificationReport,
    pub query_count: usize,
}

impl ExtractionReport {
    /// `μ̂` fitted residual plus verification residual, the largest
    /// reconstruction error seen.
    pub fn residual(&self) -> f64 {
        self.verification.max_residual.max(self.fit_residual.unwrap_or(0.0))
    }

    /// `Î_s(ρ(P_i)) + Σ μ̂(P_i) log ρ(P_i)` on an arbitrary partition; `None`
    /// when no `μ̂` was fitted or the outcome profile is not in the table.
    pub fn reconstruct(&self, state: &State, p: &ProjectionPartition) -> Option<f64> {
        let mu = self.fitted_mu.as_ref()?;
        let probs: Vec<Rational> = p
            .blocks()
            .iter()
            .map(|b| state.exact_prob(b).unwrap_or_else(|| rational::approximate(state.prob(b), 1 << 40)))
            .collect();
        let key = profile_key(&probs);
        let sym = self.sym_samples.iter().find(|(dist, _)| profile_key(dist.probs()) == key)?.1;
        let mut value = sym;
        for (b, w) in p.blocks().iter().zip(&probs) {
            let m = mu.value(b);
            if w.is_zero() {
                if m.abs() > info::NULL_MU {
                    return None;
                }
                continue;
            }
            value += m * rational::log2(w);
        }
        Some(value)
    }
}

/// Full pipeline. The base structure is the Fourier structure of `state`;
/// further Haar-random uniform structures are added until the cell
/// projections span the traceless Hermitian matrices (`d ≥ 3`).
pub fn decompose(
    oracle: &mut dyn InformationOracle,
    state: &State,
    config: &ExtractionConfig,
) -> Result<ExtractionReport, DecomposeError> {
    let d = state.dim();
    let n = config.cells.unwrap_or(d);
    let mut rng = random::seeded(config.seed);
    let mut q = QueryCounter::new(oracle, config.query_budget);
    let base = BooleanStructure::fourier(state, n)?;
    check_equal_cells(&base)?;
    let additivity = spot_check_additivity(&mut q, &base, config.spot_checks, config.additivity_tol, &mut rng)?;
    let first = extract_on_structure(&mut q, &base)?;
    let mut mhat_total = first.cells.total.abs();
    let mut antisymmetry = first.cells.antisymmetry_residual;
    let mut samples: Vec<(CMat, f64)> =
        base.cells().iter().zip(&first.cells.m_hat).map(|(c, &m)| (c.projection().matrix().clone(), m)).collect();
    let mut fresh = Vec::new();
    let mut fit = None;
    let mut probes = 0;
    if d >= 3 {
        let target = d * d - 1;
        let rank_of_samples = |s: &[(CMat, f64)]| design_rank(&s.iter().map(|(x, _)| x).collect::<Vec<_>>(), d);
        let mut rank = rank_of_samples(&samples);
        while rank < target && fresh.len() + 1 < config.max_structures {
            let b = BooleanStructure::random_uniform(state, n, &mut rng)?;
            let cm = extract_cell_measure(&mut q, &b)?;
            mhat_total = mhat_total.max(cm.total.abs());
            antisymmetry = antisymmetry.max(cm.antisymmetry_residual);
            samples.extend(b.cells().iter().zip(&cm.m_hat).map(|(c, &m)| (c.projection().matrix().clone(), m)));
            fresh.push(b);
            let next = rank_of_samples(&samples);
            if next == rank {
                break;
            }
            rank = next;
        }
        if rank < target {
            let extra = rank_probes(&mut q, state, &first.sym, n, target - rank + 2)?;
            probes = extra.len();
            samples.extend(extra);
        }
        fit = Some(fit_linear(&samples, false)?);
    }
    let structures_used = 1 + fresh.len();
    while fresh.len() < 3 && fit.is_some() {
        fresh.push(BooleanStructure::random_uniform(state, n, &mut rng)?);
    }
    let recon = Reconstruction { mu: fit.as_ref().map(|f| f.mu.clone()), sym: first.sym.clone() };
    let verification = verify_decomposition(
        &mut q,
        &recon,
        &base,
        &first.cells.m_hat,
        &fresh,
        config.trials,
        config.verify_tol,
        &mut rng,
    )?;
    let sym_samples = first
        .sym
        .iter()
        .map(|(k, v)| (Distribution::new(k.clone()).expect("cell measures form a distribution"), *v))
        .collect();
    let cell_measures = base.cells().iter().zip(&first.cells.m_hat).map(|(c, &m)| (c.set().clone(), m)).collect();
    Ok(ExtractionReport {
        dim: d,
        cell_count: n,
        level: n.is_power_of_two().then(|| n.trailing_zeros()),
        cell_measures,
        mhat_total,
        antisymmetry_residual: antisymmetry,
        fit_residual: fit.as_ref().map(|f| f.residual),
        fit_rank: fit.as_ref().map(|f| f.rank),
        fit_null_dim: fit.as_ref().map(|f| f.null_dim),
        fitted_mu: fit.map(|f| f.mu),
        structures_used,
        rank_probes: probes,
        sym_samples,
        additivity,
        verification,
        query_count: q.count(),
    })
}
