//! Finite-dimensional Hilbert-space objects: states, projections, partitions
//! of unity, physical independence and post-measurement states.
//!
//! Matrices are dense `d × d` complex arrays. Probabilities `ρ(P) = tr ρP` are
//! floats, except that a state built from exact weights also reports exact
//! rational probabilities for coordinate projections.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::math;
use crate::rational::{self, Rational};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("weight list is empty")]
    EmptyWeights,
    #[error("weight {index} is negative")]
    NegativeWeight { index: usize },
    #[error("weights sum to {sum}, not 1")]
    SumNotOne { sum: Rational },
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },
    #[error("trace is {trace}, expected 1")]
    NotUnitTrace { trace: f64 },
    #[error("trace is {trace}, expected 0")]
    NotTraceless { trace: f64 },
    #[error("matrix {index} is not a projection (defect {defect:e})")]
    NotProjection { index: usize, defect: f64 },
    #[error("projections {i} and {j} are not orthogonal (overlap {overlap:e})")]
    NotOrthogonal { i: usize, j: usize, overlap: f64 },
    #[error("projections do not sum to the identity (defect {defect:e})")]
    NotComplete { defect: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("blocks {i} and {j} do not commute (commutator {norm:e})")]
    NonCommuting { i: usize, j: usize, norm: f64 },
    #[error("vector norm is {norm}, expected 1")]
    NotUnitVector { norm: f64 },
    #[error("partition has no blocks")]
    EmptyPartition,
}

/// `tr(AB)` in `O(d²)`.
pub fn trace_product(a: &CMat, b: &CMat) -> C64 {
    let n = a.nrows();
    let mut acc = C64::zero();
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

pub fn hermitian_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).norm()
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn eigh(m: &CMat) -> (Vec<f64>, CMat) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMat::zeros(0, 0));
    }
    let sym = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        vectors.set_column(c, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

/// Orthonormal basis of the column space of `m` by Gram–Schmidt with column
/// pivoting (largest residual norm first, lowest index on ties).
pub fn range_basis(m: &CMat, tol: f64) -> CMat {
    let n = m.nrows();
    let mut residual: Vec<CVec> = (0..m.ncols()).map(|j| m.column(j).into_owned()).collect();
    let mut basis: Vec<CVec> = Vec::new();
    loop {
        let mut best = None;
        let mut best_norm = tol.max(1e-12);
        for (j, r) in residual.iter().enumerate() {
            let nr = r.norm();
            if nr > best_norm * (1.0 + 1e-12) {
                best_norm = nr;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        let q = &residual[j] / C64::new(best_norm, 0.0);
        for r in residual.iter_mut() {
            let c = q.dotc(r);
            *r -= &q * c;
        }
        basis.push(q);
        if basis.len() == n {
            break;
        }
    }
    let mut out = CMat::zeros(n, basis.len());
    for (j, b) in basis.iter().enumerate() {
        out.set_column(j, b);
    }
    out
}

/// Unitary discrete Fourier matrix, `F[j,k] = e^{2πi jk/d} / √d`.
pub fn dft(d: usize) -> CMat {
    let s = 1.0 / math::sqrt(d as f64);
    CMat::from_fn(d, d, |j, k| {
        let t = 2.0 * core::f64::consts::PI * ((j * k) % d) as f64 / d as f64;
        C64::new(math::cos(t) * s, math::sin(t) * s)
    })
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// A density operator: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    matrix: CMat,
    weights: Option<Vec<Rational>>,
}

impl State {
    /// Diagonal state with exact rational weights.
    pub fn from_weights(weights: &[Rational]) -> Result<Self, LinalgError> {
        if weights.is_empty() {
            return Err(LinalgError::EmptyWeights);
        }
        if let Some(index) = weights.iter().position(|w| w.is_negative()) {
            return Err(LinalgError::NegativeWeight { index });
        }
        let sum = rational::sum(weights);
        if !sum.is_one() {
            return Err(LinalgError::SumNotOne { sum });
        }
        let d = weights.len();
        let mut matrix = CMat::zeros(d, d);
        for (i, w) in weights.iter().enumerate() {
            matrix[(i, i)] = real(rational::to_f64(w));
        }
        Ok(Self { matrix, weights: Some(weights.to_vec()) })
    }

    pub fn from_matrix(matrix: CMat, tol: f64) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let defect = hermitian_defect(&matrix);
        if defect > tol {
            return Err(LinalgError::NotHermitian { defect });
        }
        let trace = matrix.trace().re;
        if math::abs(trace - 1.0) > tol {
            return Err(LinalgError::NotUnitTrace { trace });
        }
        let (values, _) = eigh(&matrix);
        if let Some(&min) = values.first() {
            if min < -tol {
                return Err(LinalgError::NotPositive { min_eigenvalue: min });
            }
        }
        Ok(Self { matrix, weights: None })
    }

    /// Maximally mixed state `1/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        let w = vec![rational::rat(1, d as i64); d];
        Self::from_weights(&w).expect("uniform weights are valid")
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Exact diagonal weights, when the state was built from rationals.
    pub fn exact_weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// `ρ(P) = tr ρP`.
    pub fn prob(&self, p: &Projection) -> f64 {
        trace_product(&self.matrix, p.matrix()).re
    }

    /// `tr ρA` for a Hermitian `A`.
    pub fn expectation(&self, a: &CMat) -> f64 {
        trace_product(&self.matrix, a).re
    }

    /// Exact `ρ(P)` when the state has exact weights and `P` is a coordinate
    /// projection (diagonal with entries exactly 0 or 1).
    pub fn exact_prob(&self, p: &Projection) -> Option<Rational> {
        let w = self.weights.as_ref()?;
        let support = p.coordinate_support()?;
        Some(rational::sum(support.iter().map(|&i| &w[i])))
    }

    pub fn tensor(&self, other: &State) -> State {
        let matrix = self.matrix.kronecker(&other.matrix);
        let weights = match (&self.weights, &other.weights) {
            (Some(a), Some(b)) => Some(a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()),
            _ => None,
        };
        State { matrix, weights }
    }

    /// `‖ρA − Aρ‖`.
    pub fn commutator_norm(&self, a: &CMat) -> f64 {
        (&self.matrix * a - a * &self.matrix).norm()
    }

    pub fn is_faithful(&self, tol: f64) -> bool {
        eigh(&self.matrix).0.first().is_some_and(|&v| v > tol)
    }
}

/// Hermitian traceless operator `μ`, evaluated on projections as `μ(P) = tr μP`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignedOperator {
    matrix: CMat,
}

impl SignedOperator {
    pub fn new(matrix: CMat, tol: f64) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let defect = hermitian_defect(&matrix);
        if defect > tol {
            return Err(LinalgError::NotHermitian { defect });
        }
        let trace = matrix.trace().re;
        if math::abs(trace) > tol {
            return Err(LinalgError::NotTraceless { trace });
        }
        Ok(Self { matrix })
    }

    pub fn zero(d: usize) -> Self {
        Self { matrix: CMat::zeros(d, d) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn value(&self, p: &Projection) -> f64 {
        trace_product(&self.matrix, p.matrix()).re
    }

    /// Largest absolute entry difference.
    pub fn max_entry_diff(&self, other: &SignedOperator) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|z| math::cabs(*z)).fold(0.0, f64::max)
    }
}

/// Orthogonal projection.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMat,
    rank: usize,
}

impl Projection {
    pub fn new(matrix: CMat, tol: f64) -> Result<Self, LinalgError> {
        if !matrix.is_square() {
            return Err(LinalgError::NotSquare);
        }
        let herm = hermitian_defect(&matrix);
        let idem = (&matrix * &matrix - &matrix).norm();
        let defect = herm.max(idem);
        if defect > tol {
            return Err(LinalgError::NotProjection { index: 0, defect });
        }
        Ok(Self::from_matrix_unchecked(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMat) -> Self {
        let t = matrix.trace().re;
        let rank = if t <= 0.5 { 0 } else { libm::round(t) as usize };
        Self { matrix, rank }
    }

    /// Projection onto the span of orthonormal columns.
    pub fn from_orthonormal_columns(cols: &CMat) -> Self {
        let matrix = cols * cols.adjoint();
        Self { matrix, rank: cols.ncols() }
    }

    /// `|v⟩⟨v| / ‖v‖²`.
    pub fn rank_one(v: &CVec) -> Self {
        let n = v.norm();
        let u = v / real(n);
        Self { matrix: &u * u.adjoint(), rank: 1 }
    }

    pub fn coordinate(dim: usize, support: &[usize]) -> Self {
        let mut matrix = CMat::zeros(dim, dim);
        let mut rank = 0;
        for &i in support {
            if matrix[(i, i)].re == 0.0 {
                matrix[(i, i)] = C64::one();
                rank += 1;
            }
        }
        Self { matrix, rank }
    }

    pub fn zero(dim: usize) -> Self {
        Self { matrix: CMat::zeros(dim, dim), rank: 0 }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: CMat::identity(dim, dim), rank: dim }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn complement(&self) -> Projection {
        let d = self.dim();
        Projection { matrix: CMat::identity(d, d) - &self.matrix, rank: d - self.rank }
    }

    /// Sum of mutually orthogonal projections (orthogonality is the caller's contract).
    pub fn orthogonal_sum<'a>(dim: usize, parts: impl IntoIterator<Item = &'a Projection>) -> Projection {
        let mut matrix = CMat::zeros(dim, dim);
        let mut rank = 0;
        for p in parts {
            matrix += &p.matrix;
            rank += p.rank;
        }
        Projection { matrix, rank }
    }

    pub fn approx_eq(&self, other: &Projection, tol: f64) -> bool {
        self.dim() == other.dim() && (&self.matrix - &other.matrix).norm() <= tol
    }

    /// Orthonormal basis of the range, `d × rank`.
    pub fn range_basis(&self) -> CMat {
        let mut b = range_basis(&self.matrix, 1e-6);
        if b.ncols() > self.rank {
            b = b.columns(0, self.rank).into_owned();
        }
        b
    }

    /// `P ≤ Q` as `‖PQ − P‖ ≤ tol`.
    pub fn is_below(&self, other: &Projection, tol: f64) -> bool {
        (&self.matrix * &other.matrix - &self.matrix).norm() <= tol
    }

    /// Indices of the diagonal ones, if the matrix is exactly a coordinate projection.
    pub fn coordinate_support(&self) -> Option<Vec<usize>> {
        let d = self.dim();
        let mut support = Vec::new();
        for i in 0..d {
            for j in 0..d {
                let z = self.matrix[(i, j)];
                if i == j {
                    if z == C64::one() {
                        support.push(i);
                    } else if z != C64::zero() {
                        return None;
                    }
                } else if z != C64::zero() {
                    return None;
                }
            }
        }
        Some(support)
    }
}

/// Ordered tuple of mutually orthogonal projections summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPartition {
    blocks: Vec<Projection>,
}

impl ProjectionPartition {
    pub fn new(blocks: Vec<Projection>, tol: f64) -> Result<Self, LinalgError> {
        let first = blocks.first().ok_or(LinalgError::EmptyPartition)?;
        let d = first.dim();
        if let Some(p) = blocks.iter().find(|p| p.dim() != d) {
            return Err(LinalgError::DimensionMismatch { expected: d, found: p.dim() });
        }
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                let overlap = (blocks[i].matrix() * blocks[j].matrix()).norm();
                if overlap > tol {
                    return Err(LinalgError::NotOrthogonal { i, j, overlap });
                }
            }
        }
        let total = Projection::orthogonal_sum(d, &blocks);
        let defect = (total.matrix() - CMat::identity(d, d)).norm();
        if defect > tol {
            return Err(LinalgError::NotComplete { defect });
        }
        Ok(Self { blocks })
    }

    /// Validates raw matrices as projections, then as a partition.
    pub fn from_matrices(mats: Vec<CMat>, tol: f64) -> Result<Self, LinalgError> {
        let mut blocks = Vec::with_capacity(mats.len());
        for (index, m) in mats.into_iter().enumerate() {
            let p = Projection::new(m, tol).map_err(|e| match e {
                LinalgError::NotProjection { defect, .. } => LinalgError::NotProjection { index, defect },
                other => other,
            })?;
            blocks.push(p);
        }
        Self::new(blocks, tol)
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<Projection>) -> Self {
        Self { blocks }
    }

    /// The single-block partition `(1_H)`.
    pub fn identity(d: usize) -> Self {
        Self { blocks: vec![Projection::identity(d)] }
    }

    /// Split into the `d` coordinate rank-1 projections.
    pub fn coordinates(d: usize) -> Self {
        Self { blocks: (0..d).map(|i| Projection::coordinate(d, &[i])).collect() }
    }

    /// Partition from groups of coordinate indices (groups must cover `0..d` disjointly).
    pub fn from_coordinate_groups(d: usize, groups: &[Vec<usize>], tol: f64) -> Result<Self, LinalgError> {
        let blocks = groups.iter().map(|g| Projection::coordinate(d, g)).collect();
        Self::new(blocks, tol)
    }

    pub fn blocks(&self) -> &[Projection] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].dim()
    }

    pub fn probabilities(&self, rho: &State) -> Vec<f64> {
        self.blocks.iter().map(|p| rho.prob(p)).collect()
    }

    /// Blocks reordered by `order` (a permutation of block indices).
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self { blocks: order.iter().map(|&i| self.blocks[i].clone()).collect() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndependenceReport {
    pub independent: bool,
    pub max_commutator: f64,
    pub max_probability_defect: f64,
}

/// Blockwise commutation plus factorization `ρ(P_iQ_j) = ρ(P_i)ρ(Q_j)`.
pub fn physically_independent(
    p: &ProjectionPartition,
    q: &ProjectionPartition,
    rho: &State,
    tol: f64,
) -> Result<IndependenceReport, LinalgError> {
    let d = rho.dim();
    for part in [p, q] {
        if part.dim() != d {
            return Err(LinalgError::DimensionMismatch { expected: d, found: part.dim() });
        }
    }
    let pp = p.probabilities(rho);
    let qp = q.probabilities(rho);
    let mut max_commutator: f64 = 0.0;
    let mut max_defect: f64 = 0.0;
    for (i, pi) in p.blocks().iter().enumerate() {
        for (j, qj) in q.blocks().iter().enumerate() {
            let pq = pi.matrix() * qj.matrix();
            let qp_ = qj.matrix() * pi.matrix();
            max_commutator = max_commutator.max((&pq - &qp_).norm());
            let joint = trace_product(rho.matrix(), &pq).re;
            max_defect = max_defect.max(math::abs(joint - pp[i] * qp[j]));
        }
    }
    Ok(IndependenceReport {
        independent: max_commutator <= tol && max_defect <= tol,
        max_commutator,
        max_probability_defect: max_defect,
    })
}

/// Canonical independent pair: `ρ1⊗ρ2`, `(p_i⊗1)`, `(1⊗q_j)`.
pub fn tensor_independent_pair(
    rho1: &State,
    rho2: &State,
    p: &ProjectionPartition,
    q: &ProjectionPartition,
) -> Result<(State, ProjectionPartition, ProjectionPartition), LinalgError> {
    if p.dim() != rho1.dim() {
        return Err(LinalgError::DimensionMismatch { expected: rho1.dim(), found: p.dim() });
    }
    if q.dim() != rho2.dim() {
        return Err(LinalgError::DimensionMismatch { expected: rho2.dim(), found: q.dim() });
    }
    let (d1, d2) = (rho1.dim(), rho2.dim());
    let id1 = CMat::identity(d1, d1);
    let id2 = CMat::identity(d2, d2);
    let big_p = p
        .blocks()
        .iter()
        .map(|b| Projection { matrix: b.matrix().kronecker(&id2), rank: b.rank() * d2 })
        .collect();
    let big_q = q
        .blocks()
        .iter()
        .map(|b| Projection { matrix: id1.kronecker(b.matrix()), rank: b.rank() * d1 })
        .collect();
    Ok((
        rho1.tensor(rho2),
        ProjectionPartition { blocks: big_p },
        ProjectionPartition { blocks: big_q },
    ))
}

/// `P·Q = (P_iQ_j)` in row-major order, zero-rank blocks retained.
pub fn product_partition(
    p: &ProjectionPartition,
    q: &ProjectionPartition,
    tol: f64,
) -> Result<ProjectionPartition, LinalgError> {
    if p.dim() != q.dim() {
        return Err(LinalgError::DimensionMismatch { expected: p.dim(), found: q.dim() });
    }
    let mut blocks = Vec::with_capacity(p.len() * q.len());
    for (i, pi) in p.blocks().iter().enumerate() {
        for (j, qj) in q.blocks().iter().enumerate() {
            let a = pi.matrix() * qj.matrix();
            let b = qj.matrix() * pi.matrix();
            let norm = (&a - &b).norm();
            if norm > tol {
                return Err(LinalgError::NonCommuting { i, j, norm });
            }
            blocks.push(Projection::from_matrix_unchecked((a + b) * real(0.5)));
        }
    }
    Ok(ProjectionPartition { blocks })
}

/// `ρ_P = Σ ‖P_i e‖² ê_i` with `ê_i` the projector onto `P_i e / ‖P_i e‖`.
pub fn post_measurement_state(e: &CVec, p: &ProjectionPartition, tol: f64) -> Result<State, LinalgError> {
    if e.len() != p.dim() {
        return Err(LinalgError::DimensionMismatch { expected: p.dim(), found: e.len() });
    }
    let norm = e.norm();
    if math::abs(norm - 1.0) > tol {
        return Err(LinalgError::NotUnitVector { norm });
    }
    let d = e.len();
    let mut matrix = CMat::zeros(d, d);
    for b in p.blocks() {
        let v = b.matrix() * e;
        // ‖P_i e‖² · |v̂⟩⟨v̂| = |v⟩⟨v|
        if v.norm() > 0.0 {
            matrix += &v * v.adjoint();
        }
    }
    Ok(State { matrix, weights: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    const TOL: f64 = 1e-10;

    fn diag(values: &[f64]) -> CMat {
        CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&x| real(x))))
    }

    #[test]
    fn make_state_examples() {
        let s = State::from_weights(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(s.matrix(), &diag(&[0.5, 0.5]));
        let s = State::from_weights(&[rat(1, 1)]).unwrap();
        assert_eq!(s.matrix(), &CMat::identity(1, 1));
        let s = State::from_weights(&[rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        assert_eq!(s.matrix().trace().re, 1.0);
        assert!(State::from_matrix(s.matrix().clone(), TOL).is_ok());
    }

    #[test]
    fn make_state_errors() {
        assert!(matches!(
            State::from_weights(&[rat(3, 2), rat(-1, 2)]),
            Err(LinalgError::NegativeWeight { index: 1 })
        ));
        assert!(matches!(State::from_weights(&[rat(1, 2), rat(1, 3)]), Err(LinalgError::SumNotOne { .. })));
        assert!(matches!(State::from_weights(&[]), Err(LinalgError::EmptyWeights)));
    }

    #[test]
    fn partition_examples() {
        let ok = ProjectionPartition::from_matrices(vec![diag(&[1.0, 0.0]), diag(&[0.0, 1.0])], TOL);
        assert!(ok.is_ok());
        assert!(ProjectionPartition::from_matrices(vec![CMat::identity(2, 2)], TOL).is_ok());
        let dup = ProjectionPartition::from_matrices(vec![diag(&[1.0, 0.0]), diag(&[1.0, 0.0])], TOL);
        assert!(matches!(dup, Err(LinalgError::NotOrthogonal { i: 0, j: 1, .. })));
        let bad = ProjectionPartition::from_matrices(vec![diag(&[1.0, 0.0]), diag(&[0.0, 0.5])], TOL);
        assert!(matches!(bad, Err(LinalgError::NotProjection { index: 1, .. })));
        let short = ProjectionPartition::from_matrices(vec![diag(&[1.0, 0.0, 0.0]), diag(&[0.0, 1.0, 0.0])], TOL);
        assert!(matches!(short, Err(LinalgError::NotComplete { .. })));
    }

    #[test]
    fn self_overlap_is_not_independent() {
        let rho = State::from_weights(&[rat(1, 2), rat(1, 2)]).unwrap();
        let p = ProjectionPartition::coordinates(2);
        let r = physically_independent(&p, &p, &rho, TOL).unwrap();
        assert!(!r.independent);
        assert!((r.max_probability_defect - 0.25).abs() < 1e-15);
        let id = ProjectionPartition::identity(2);
        assert!(physically_independent(&p, &id, &rho, TOL).unwrap().independent);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let rho = State::maximally_mixed(3);
        let p = ProjectionPartition::coordinates(2);
        assert!(matches!(
            physically_independent(&p, &p, &rho, TOL),
            Err(LinalgError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn tensor_pair_is_independent() {
        let r1 = State::maximally_mixed(2);
        let r2 = State::maximally_mixed(2);
        let p = ProjectionPartition::coordinates(2);
        let (rho, big_p, big_q) = tensor_independent_pair(&r1, &r2, &p, &p).unwrap();
        assert_eq!(rho.dim(), 4);
        assert!(physically_independent(&big_p, &big_q, &rho, 1e-12).unwrap().independent);
        let prod = product_partition(&big_p, &big_q, TOL).unwrap();
        assert_eq!(prod.len(), 4);
        assert!(prod.blocks().iter().all(|b| b.rank() == 1));

        let (_, _, q_id) = tensor_independent_pair(&r1, &r2, &p, &ProjectionPartition::identity(2)).unwrap();
        assert_eq!(q_id.len(), 1);
        assert!(q_id.blocks()[0].approx_eq(&Projection::identity(4), 0.0));
    }

    #[test]
    fn product_with_identity() {
        let p = ProjectionPartition::coordinates(3);
        let id = ProjectionPartition::identity(3);
        assert_eq!(product_partition(&p, &id, TOL).unwrap(), p);
        assert_eq!(product_partition(&id, &id, TOL).unwrap(), id);
    }

    #[test]
    fn product_rejects_noncommuting() {
        let plus = CVec::from_vec(vec![real(1.0), real(1.0)]);
        let p1 = Projection::rank_one(&plus);
        let q = ProjectionPartition::new(vec![p1.clone(), p1.complement()], TOL).unwrap();
        let p = ProjectionPartition::coordinates(2);
        assert!(matches!(product_partition(&p, &q, TOL), Err(LinalgError::NonCommuting { .. })));
    }

    #[test]
    fn post_measurement_examples() {
        let s = 1.0 / 2f64.sqrt();
        let e = CVec::from_vec(vec![real(s), real(s)]);
        let rho = post_measurement_state(&e, &ProjectionPartition::coordinates(2), TOL).unwrap();
        assert!((rho.matrix() - diag(&[0.5, 0.5])).norm() < 1e-15);

        let id = post_measurement_state(&e, &ProjectionPartition::identity(2), TOL).unwrap();
        assert!((id.matrix() - &e * e.adjoint()).norm() < 1e-15);

        let e1 = CVec::from_vec(vec![real(1.0), real(0.0)]);
        let r1 = post_measurement_state(&e1, &ProjectionPartition::coordinates(2), TOL).unwrap();
        assert_eq!(r1.matrix(), &diag(&[1.0, 0.0]));

        let long = CVec::from_vec(vec![real(1.0), real(1.0)]);
        assert!(matches!(
            post_measurement_state(&long, &ProjectionPartition::coordinates(2), TOL),
            Err(LinalgError::NotUnitVector { .. })
        ));
    }

    #[test]
    fn exact_prob_on_coordinate_projection() {
        let rho = State::from_weights(&[rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let p = Projection::coordinate(3, &[1, 2]);
        assert_eq!(rho.exact_prob(&p), Some(rat(1, 2)));
        let plus = CVec::from_vec(vec![real(1.0), real(1.0), real(0.0)]);
        assert_eq!(rho.exact_prob(&Projection::rank_one(&plus)), None);
    }

    #[test]
    fn range_basis_recovers_rank() {
        let p = Projection::coordinate(4, &[0, 2]);
        let b = p.range_basis();
        assert_eq!(b.ncols(), 2);
        assert!((Projection::from_orthonormal_columns(&b).matrix() - p.matrix()).norm() < 1e-14);
    }

    #[test]
    fn dft_is_unitary() {
        let f = dft(5);
        assert!((f.adjoint() * &f - CMat::identity(5, 5)).norm() < 1e-13);
    }
}
