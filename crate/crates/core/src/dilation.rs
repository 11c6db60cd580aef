//! Dilation: blocks `P_1, …, P_k` refining `P + Q` with `P P_l P = P/k`.
//!
//! In the model space `ℂ^k ⊗ ℂ^r` with basis `e_{l,n}`, the projection `P′`
//! onto `s_n = (e_{1,n} + ⋯ + e_{k,n}) / √k` satisfies `P′ P′_l P′ = P′/k` for
//! the coordinate blocks `P′_l = span{e_{l,n}}`. A partial isometry carrying
//! `range P′` onto `range P` and its model complement onto `range Q` moves the
//! relation into `range(P + Q)`. In finite dimension this needs
//! `rank Q = (k − 1)·rank P`.

use alloc::vec::Vec;

use thiserror::Error;

use crate::linalg::{range_basis, CMat, Projection, State, C64};
use crate::math;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DilationError {
    #[error("rank Q = {rank_q} but k = {k} and rank P = {rank_p} need rank Q = (k-1)·rank P")]
    RankInfeasible { rank_p: usize, rank_q: usize, k: usize },
    #[error("P and Q are not orthogonal (‖PQ‖ = {overlap:e})")]
    NotOrthogonal { overlap: f64 },
    #[error("state does not commute with P (‖ρP − Pρ‖ = {norm:e})")]
    NotCommuting { norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sub-blocks do not sum to P (defect {defect:e})")]
    SubPartitionMismatch { defect: f64 },
    #[error("expected {expected} blocks, found {found}")]
    BlockCount { expected: usize, found: usize },
}

fn check_dims(expected: usize, found: usize) -> Result<(), DilationError> {
    if expected != found {
        return Err(DilationError::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// `k` mutually orthogonal projections with `Σ P_l = P + Q` and `P P_l P = P/k`.
pub fn dilate(p: &Projection, q: &Projection, k: usize, tol: f64) -> Result<Vec<Projection>, DilationError> {
    let d = p.dim();
    check_dims(d, q.dim())?;
    let overlap = (p.matrix() * q.matrix()).norm();
    if overlap > tol {
        return Err(DilationError::NotOrthogonal { overlap });
    }
    let r = p.rank();
    if k == 0 || q.rank() != (k - 1) * r {
        return Err(DilationError::RankInfeasible { rank_p: r, rank_q: q.rank(), k });
    }
    if r == 0 {
        return Ok((0..k).map(|_| Projection::zero(d)).collect());
    }
    let m = k * r;
    let idx = |l: usize, n: usize| l * r + n;

    // model P′ basis s_n and its complement
    let mut s = CMat::zeros(m, r);
    let w = C64::new(1.0 / math::sqrt(k as f64), 0.0);
    for n in 0..r {
        for l in 0..k {
            s[(idx(l, n), n)] = w;
        }
    }
    let complement = range_basis(&(CMat::identity(m, m) - &s * s.adjoint()), 1e-9);
    let complement = complement.columns(0, m - r).into_owned();

    // W = U_P S† + U_Q C†, a partial isometry from the model space onto range(P+Q)
    let up = p.range_basis();
    let uq = q.range_basis();
    let mut iso = &up * s.adjoint();
    if m > r {
        iso += &uq * complement.adjoint();
    }
    let blocks = (0..k)
        .map(|l| {
            let mut cols = CMat::zeros(d, r);
            for n in 0..r {
                cols.set_column(n, &iso.column(idx(l, n)));
            }
            Projection::from_orthonormal_columns(&cols)
        })
        .collect();
    Ok(blocks)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DilationAudit {
    /// `max_{l≠m} ‖P_l P_m‖`.
    pub orthogonality: f64,
    /// `‖Σ P_l − (P + Q)‖`.
    pub sum_defect: f64,
    /// `‖P P_l P − P/k‖` per block.
    pub compression: Vec<f64>,
}

impl DilationAudit {
    pub fn max_defect(&self) -> f64 {
        self.compression.iter().copied().fold(self.orthogonality.max(self.sum_defect), f64::max)
    }
}

/// Frobenius-norm audit of the three identities (bounds the operator norm).
pub fn audit(p: &Projection, q: &Projection, blocks: &[Projection]) -> DilationAudit {
    let d = p.dim();
    let k = blocks.len();
    let mut orthogonality: f64 = 0.0;
    for (i, a) in blocks.iter().enumerate() {
        for b in &blocks[i + 1..] {
            orthogonality = orthogonality.max((a.matrix() * b.matrix()).norm());
        }
    }
    let mut sum = CMat::zeros(d, d);
    for b in blocks {
        sum += b.matrix();
    }
    let sum_defect = (sum - p.matrix() - q.matrix()).norm();
    let target = p.matrix() * C64::new(1.0 / k.max(1) as f64, 0.0);
    let compression =
        blocks.iter().map(|b| (p.matrix() * b.matrix() * p.matrix() - &target).norm()).collect();
    DilationAudit { orthogonality, sum_defect, compression }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    /// `ρ(P_l)`.
    pub weight: f64,
    /// `tr ρ P P_l P`, equal to `ρ(P)/k`.
    pub through_p: f64,
    /// `tr ρ Q P_l Q`, at most `ρ(Q)`.
    pub through_q: f64,
    /// `ρ(P)/k + ρ(Q)`.
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub rows: Vec<BoundRow>,
    pub min_slack: f64,
}

/// `ρ(P_l) ≤ ρ(P)/k + ρ(Q)` for a state commuting with `P`.
pub fn check_bound(
    rho: &State,
    p: &Projection,
    q: &Projection,
    blocks: &[Projection],
    tol: f64,
) -> Result<BoundReport, DilationError> {
    let d = rho.dim();
    check_dims(d, p.dim())?;
    check_dims(d, q.dim())?;
    let norm = rho.commutator_norm(p.matrix());
    if norm > tol {
        return Err(DilationError::NotCommuting { norm });
    }
    let k = blocks.len().max(1) as f64;
    let rp = rho.prob(p);
    let rq = rho.prob(q);
    let rows: Vec<BoundRow> = blocks
        .iter()
        .map(|b| {
            let weight = rho.prob(b);
            let through_p = rho.expectation(&(p.matrix() * b.matrix() * p.matrix()));
            let through_q = rho.expectation(&(q.matrix() * b.matrix() * q.matrix()));
            let bound = rp / k + rq;
            BoundRow { weight, through_p, through_q, bound, slack: bound - weight }
        })
        .collect();
    let min_slack = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(BoundReport { rows, min_slack })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinedDilation {
    /// `Q^s`, consecutive pieces of `Q` with `rank Q^s = (k−1)·rank P^s`.
    pub q_parts: Vec<Projection>,
    /// `blocks[s][l] = P^s_l`.
    pub blocks: Vec<Vec<Projection>>,
    /// `P_l = Σ_s P^s_l`.
    pub totals: Vec<Projection>,
}

/// Dilation of each piece `P^s` of a partition of `P` against its own share
/// `Q^s` of `Q`.
pub fn dilate_refined(
    sub: &[Projection],
    q: &Projection,
    k: usize,
    tol: f64,
) -> Result<RefinedDilation, DilationError> {
    let d = q.dim();
    for s in sub {
        check_dims(d, s.dim())?;
    }
    let p = Projection::orthogonal_sum(d, sub);
    for (i, a) in sub.iter().enumerate() {
        for b in &sub[i + 1..] {
            let overlap = (a.matrix() * b.matrix()).norm();
            if overlap > tol {
                return Err(DilationError::NotOrthogonal { overlap });
            }
        }
    }
    if k == 0 || q.rank() != (k - 1) * p.rank() {
        return Err(DilationError::RankInfeasible { rank_p: p.rank(), rank_q: q.rank(), k });
    }
    let uq = q.range_basis();
    let mut offset = 0;
    let mut q_parts = Vec::with_capacity(sub.len());
    let mut blocks = Vec::with_capacity(sub.len());
    for s in sub {
        let width = (k - 1) * s.rank();
        let qs = Projection::from_orthonormal_columns(&uq.columns(offset, width).into_owned());
        offset += width;
        blocks.push(dilate(s, &qs, k, tol)?);
        q_parts.push(qs);
    }
    let totals = (0..k).map(|l| Projection::orthogonal_sum(d, blocks.iter().map(|b| &b[l]))).collect();
    Ok(RefinedDilation { q_parts, blocks, totals })
}

/// Checks a refined dilation against `Σ_s P^s = P`: returns the largest of the
/// per-piece audits and the audit of the totals against `(P, Q)`.
pub fn audit_refined(sub: &[Projection], q: &Projection, r: &RefinedDilation) -> Result<f64, DilationError> {
    if r.blocks.len() != sub.len() {
        return Err(DilationError::BlockCount { expected: sub.len(), found: r.blocks.len() });
    }
    let d = q.dim();
    let p = Projection::orthogonal_sum(d, sub);
    let mut worst: f64 = 0.0;
    for ((s, qs), b) in sub.iter().zip(&r.q_parts).zip(&r.blocks) {
        worst = worst.max(audit(s, qs, b).max_defect());
    }
    let qsum = Projection::orthogonal_sum(d, &r.q_parts);
    worst = worst.max((qsum.matrix() - q.matrix()).norm());
    Ok(worst.max(audit(&p, q, &r.totals).max_defect()))
}
