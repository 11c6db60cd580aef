//! Boolean structures: measure-compatible maps from a finite algebra of
//! subsets of `[0,1)` to projections.
//!
//! A structure is stored by its atoms ("cells"): disjoint interval sets
//! covering `[0,1)`, each carrying a projection `R_j` with `ρ(R_j) = λ(cell_j)`.
//! Every cell-aligned set `A` then maps to `B(A) = Σ_{cell_j ⊆ A} R_j`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

use crate::borel::{BorelError, IntervalSet, MeasurablePartition};
use crate::linalg::{dft, eigh, CMat, LinalgError, Projection, ProjectionPartition, State, C64};
use crate::math;
use crate::random;
use crate::rational::{self, Rational};

/// Tolerance for `|ρ(R) − λ(cell)|` when the probability is not exact.
pub const MEASURE_TOL: f64 = 1e-12;

/// Tolerance for matching projections of two structures.
pub const MATCH_TOL: f64 = 1e-9;

/// Largest atom grid `connect_chain` will build.
pub const MAX_ATOMS: usize = 1 << 16;

const WEIGHT_DENOMINATOR: u64 = 1 << 40;
const NULL_WEIGHT: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error(transparent)]
    Borel(#[from] BorelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cell {index} is empty")]
    EmptyCell { index: usize },
    #[error("cell {index} has measure {measure} but probability {prob}")]
    MeasureMismatch { index: usize, measure: Rational, prob: f64 },
    #[error("cell index {index} out of range ({count} cells)")]
    CellIndex { index: usize, count: usize },
    #[error("sub-weights sum to {found}, cell measure is {expected}")]
    WeightMismatch { expected: Rational, found: Rational },
    #[error("cell {index} cannot be split into the requested weights")]
    UnsplittableCell { index: usize },
    #[error("set is not a union of cells")]
    NotCellAligned,
    #[error("cells do not refine the grid of {slots} slots")]
    GridMismatch { slots: usize },
    #[error("slot map is not a permutation")]
    NotAPermutation,
    #[error("cell groups must use every cell exactly once")]
    BadGrouping,
    #[error("structures are over different states")]
    IncompatibleStates,
    #[error("structures have no common refinement into matched cells")]
    NoCommonRefinement,
    #[error("{cells} equal cells do not divide dimension {dim}")]
    CellCount { dim: usize, cells: usize },
    #[error("frame is not unitary (defect {defect:e})")]
    NotUnitary { defect: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    set: IntervalSet,
    projection: Projection,
    measure: Rational,
}

impl Cell {
    pub fn set(&self) -> &IntervalSet {
        &self.set
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn measure(&self) -> &Rational {
        &self.measure
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BooleanStructure {
    state: State,
    cells: Vec<Cell>,
}

impl BooleanStructure {
    /// Validates cells: disjoint nonempty sets covering `[0,1)`, projections
    /// summing to the identity, and `ρ(R_j) = λ(cell_j)`.
    pub fn new(state: State, cells: Vec<(IntervalSet, Projection)>) -> Result<Self, StructureError> {
        let d = state.dim();
        for (index, (set, p)) in cells.iter().enumerate() {
            if set.is_empty() {
                return Err(StructureError::EmptyCell { index });
            }
            if p.dim() != d {
                return Err(StructureError::DimensionMismatch { expected: d, found: p.dim() });
            }
        }
        MeasurablePartition::new(cells.iter().map(|(s, _)| s.clone()).collect())?;
        let total = Projection::orthogonal_sum(d, cells.iter().map(|(_, p)| p));
        let defect = (total.matrix() - CMat::identity(d, d)).norm();
        if defect > crate::DEFAULT_TOL {
            return Err(LinalgError::NotComplete { defect }.into());
        }
        let cells: Vec<Cell> = cells
            .into_iter()
            .map(|(set, projection)| Cell { measure: set.measure(), set, projection })
            .collect();
        for (index, c) in cells.iter().enumerate() {
            check_measure(&state, index, &c.projection, &c.measure)?;
        }
        Ok(Self { state, cells })
    }

    /// Structure through a partition: cells `[α_{i−1}, α_i)` with
    /// `α_i = ρ(P_1 + … + P_i)` and `B(cell_i) = P_i`.
    ///
    /// Blocks of zero weight have no interval of their own; they are added to
    /// the previous positive-weight cell (the next one for leading blocks).
    /// The second return value maps every block to its cell.
    pub fn through(p: &ProjectionPartition, state: &State) -> Result<(Self, Vec<usize>), StructureError> {
        let d = state.dim();
        if p.dim() != d {
            return Err(StructureError::DimensionMismatch { expected: d, found: p.dim() });
        }
        let mut weights: Vec<Rational> = p.blocks().iter().map(|b| block_weight(state, b)).collect();
        let positive: Vec<usize> = (0..weights.len()).filter(|&i| weights[i].is_positive()).collect();
        if let Some(&last) = positive.last() {
            let others = rational::sum(positive[..positive.len() - 1].iter().map(|&i| &weights[i]));
            weights[last] = Rational::one() - others;
        }
        let mut block_cell = vec![0usize; weights.len()];
        let mut cell_of = 0usize;
        let mut seen_positive = false;
        for (i, w) in weights.iter().enumerate() {
            if w.is_positive() {
                if seen_positive {
                    cell_of += 1;
                }
                seen_positive = true;
            }
            block_cell[i] = cell_of;
        }
        let cell_measures: Vec<Rational> = positive.iter().map(|&i| weights[i].clone()).collect();
        let sets = MeasurablePartition::consecutive(&cell_measures)?;
        let mut groups: Vec<Vec<&Projection>> = vec![Vec::new(); cell_measures.len()];
        for (i, b) in p.blocks().iter().enumerate() {
            groups[block_cell[i]].push(b);
        }
        let cells = sets
            .blocks()
            .iter()
            .zip(groups)
            .map(|(s, g)| (s.clone(), Projection::orthogonal_sum(d, g)))
            .collect();
        Ok((Self::new(state.clone(), cells)?, block_cell))
    }

    /// Equal-measure structure from the columns of a unitary `frame`.
    ///
    /// The frame is first rotated (pairwise Givens steps) until every column
    /// has ρ-weight `1/d`; cell `c` gets columns `c·d/n .. (c+1)·d/n`.
    pub fn uniform(state: &State, frame: &CMat, n_cells: usize) -> Result<Self, StructureError> {
        let d = state.dim();
        if frame.nrows() != d || frame.ncols() != d {
            return Err(StructureError::DimensionMismatch { expected: d, found: frame.nrows() });
        }
        if n_cells == 0 || !d.is_multiple_of(n_cells) {
            return Err(StructureError::CellCount { dim: d, cells: n_cells });
        }
        let defect = (frame.adjoint() * frame - CMat::identity(d, d)).norm();
        if defect > 1e-9 {
            return Err(StructureError::NotUnitary { defect });
        }
        let balanced = balance_frame(state.matrix(), frame.clone());
        Self::from_columns(state, &balanced, n_cells)
    }

    /// Equal-measure structure from the DFT of ρ's eigenbasis: every column
    /// `Σ_k F_{kj} v_k` has weight `Σ_k λ_k/d = 1/d` without balancing.
    pub fn fourier(state: &State, n_cells: usize) -> Result<Self, StructureError> {
        let d = state.dim();
        if n_cells == 0 || !d.is_multiple_of(n_cells) {
            return Err(StructureError::CellCount { dim: d, cells: n_cells });
        }
        let (_, v) = eigh(state.matrix());
        Self::from_columns(state, &(v * dft(d)), n_cells)
    }

    /// Uniform structure over a Haar-random frame.
    pub fn random_uniform<R: Rng + ?Sized>(state: &State, n_cells: usize, rng: &mut R) -> Result<Self, StructureError> {
        let u = random::unitary(state.dim(), rng);
        Self::uniform(state, &u, n_cells)
    }

    fn from_columns(state: &State, frame: &CMat, n_cells: usize) -> Result<Self, StructureError> {
        let d = state.dim();
        let per = d / n_cells;
        let cells = (0..n_cells)
            .map(|c| {
                let cols = frame.columns(c * per, per).into_owned();
                (IntervalSet::grid_cell(c, n_cells), Projection::from_orthonormal_columns(&cols))
            })
            .collect();
        Self::new(state.clone(), cells)
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.state.dim()
    }

    pub fn measures(&self) -> Vec<Rational> {
        self.cells.iter().map(|c| c.measure.clone()).collect()
    }

    /// `B(A)` for a union of cells `A`.
    pub fn evaluate(&self, a: &IntervalSet) -> Result<Projection, StructureError> {
        let mut parts = Vec::new();
        for c in &self.cells {
            let inside = c.set.intersect(a);
            if inside.is_empty() {
                continue;
            }
            if inside != c.set {
                return Err(StructureError::NotCellAligned);
            }
            parts.push(&c.projection);
        }
        Ok(Projection::orthogonal_sum(self.dim(), parts))
    }

    /// `B(𝐀) = (B(A_1), …, B(A_m))`.
    pub fn evaluate_partition(&self, a: &MeasurablePartition) -> Result<ProjectionPartition, StructureError> {
        let blocks = a.blocks().iter().map(|s| self.evaluate(s)).collect::<Result<Vec<_>, _>>()?;
        Ok(ProjectionPartition::from_blocks_unchecked(blocks))
    }

    /// Cell indices contained in a cell-aligned set.
    pub fn cells_in(&self, a: &IntervalSet) -> Result<Vec<usize>, StructureError> {
        let mut out = Vec::new();
        for (j, c) in self.cells.iter().enumerate() {
            let inside = c.set.intersect(a);
            if inside.is_empty() {
                continue;
            }
            if inside != c.set {
                return Err(StructureError::NotCellAligned);
            }
            out.push(j);
        }
        Ok(out)
    }

    /// Partition `(B(∪_{j∈g_1} cell_j), …)` from groups of cell indices;
    /// every cell must appear in exactly one group. Empty groups give zero blocks.
    pub fn group_partition(&self, groups: &[Vec<usize>]) -> Result<ProjectionPartition, StructureError> {
        self.check_grouping(groups)?;
        let d = self.dim();
        let blocks = groups
            .iter()
            .map(|g| Projection::orthogonal_sum(d, g.iter().map(|&j| &self.cells[j].projection)))
            .collect();
        Ok(ProjectionPartition::from_blocks_unchecked(blocks))
    }

    /// Exact measures `λ(∪_{j∈g} cell_j)` of cell groups.
    pub fn group_measures(&self, groups: &[Vec<usize>]) -> Vec<Rational> {
        groups
            .iter()
            .map(|g| rational::sum(g.iter().map(|&j| &self.cells[j].measure)))
            .collect()
    }

    /// Set `∪_{j∈g} cell_j`.
    pub fn group_set(&self, group: &[usize]) -> IntervalSet {
        group.iter().fold(IntervalSet::empty(), |acc, &j| acc.union(&self.cells[j].set))
    }

    fn check_grouping(&self, groups: &[Vec<usize>]) -> Result<(), StructureError> {
        let mut seen = vec![false; self.cells.len()];
        for &j in groups.iter().flatten() {
            if j >= seen.len() || seen[j] {
                return Err(StructureError::BadGrouping);
            }
            seen[j] = true;
        }
        if seen.iter().all(|&s| s) {
            Ok(())
        } else {
            Err(StructureError::BadGrouping)
        }
    }

    /// Splits cell `index` into consecutive subcells of the given measures.
    ///
    /// The cell projection `R` is split along eigenvectors of the compressed
    /// state `RρR`; each subweight must be a sum of eigen-weights.
    pub fn refine(&self, index: usize, subweights: &[Rational]) -> Result<Self, StructureError> {
        let count = self.cells.len();
        let cell = self.cells.get(index).ok_or(StructureError::CellIndex { index, count })?;
        let found = rational::sum(subweights);
        if found != cell.measure || subweights.iter().any(|w| !w.is_positive()) {
            return Err(StructureError::WeightMismatch { expected: cell.measure.clone(), found });
        }
        let d = self.dim();
        // (eigen-weight, column) pairs spanning the cell
        let pieces: Vec<(f64, CMat)> = match (self.state.exact_weights(), cell.projection.coordinate_support()) {
            (Some(w), Some(support)) => support
                .iter()
                .map(|&i| {
                    let mut col = CMat::zeros(d, 1);
                    col[(i, 0)] = C64::one();
                    (rational::to_f64(&w[i]), col)
                })
                .collect(),
            _ => {
                let basis = cell.projection.range_basis();
                let compressed = basis.adjoint() * self.state.matrix() * &basis;
                let (vals, vecs) = eigh(&compressed);
                let full = &basis * vecs;
                (0..vals.len()).map(|k| (vals[k], full.columns(k, 1).into_owned())).collect()
            }
        };
        let targets: Vec<f64> = subweights.iter().map(rational::to_f64).collect();
        let weights: Vec<f64> = pieces.iter().map(|(w, _)| *w).collect();
        let assign = assign_groups(&weights, &targets).ok_or(StructureError::UnsplittableCell { index })?;
        let mut new_cells: Vec<(IntervalSet, Projection)> = Vec::with_capacity(count + subweights.len());
        for (j, c) in self.cells.iter().enumerate() {
            if j != index {
                new_cells.push((c.set.clone(), c.projection.clone()));
                continue;
            }
            let mut rest = c.set.clone();
            for (g, w) in subweights.iter().enumerate() {
                let (head, tail) = rest.split_prefix(w);
                rest = tail;
                let cols: Vec<&CMat> = pieces
                    .iter()
                    .zip(&assign)
                    .filter(|(_, &a)| a == g)
                    .map(|((_, col), _)| col)
                    .collect();
                let mut m = CMat::zeros(d, d);
                for col in &cols {
                    m += *col * col.adjoint();
                }
                let p = Projection::from_matrix_unchecked(m);
                new_cells.push((head, p));
            }
        }
        let refined = Self::new(self.state.clone(), new_cells).map_err(|e| match e {
            StructureError::MeasureMismatch { .. } => StructureError::UnsplittableCell { index },
            other => other,
        })?;
        Ok(refined)
    }

    /// Slot permutation on the `2k` equal slots: the content of slot `σ(l)` is
    /// moved to slot `l`, `B^σ(A) = B(A − l/2k + σ(l)/2k)` for `A` in slot `l`.
    pub fn permute(&self, sigma: &[usize], k: usize) -> Result<Self, StructureError> {
        if sigma.len() != 2 * k {
            return Err(StructureError::GridMismatch { slots: 2 * k });
        }
        self.permute_slots(sigma)
    }

    /// Slot permutation on `sigma.len()` equal slots (see [`Self::permute`]).
    pub fn permute_slots(&self, sigma: &[usize]) -> Result<Self, StructureError> {
        let n = sigma.len();
        let mut inverse = vec![usize::MAX; n];
        for (l, &s) in sigma.iter().enumerate() {
            if s >= n || inverse[s] != usize::MAX {
                return Err(StructureError::NotAPermutation);
            }
            inverse[s] = l;
        }
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let mut moved = IntervalSet::empty();
            for s in 0..n {
                let piece = c.set.intersect(&IntervalSet::grid_cell(s, n));
                if piece.is_empty() {
                    continue;
                }
                let shift = rational::rat(inverse[s] as i64 - s as i64, n as i64);
                moved = moved.union(&piece.translate(&shift)?);
            }
            cells.push((moved, c.projection.clone()));
        }
        Self::new(self.state.clone(), cells)
    }

    /// For each cell, the index of the cell of `other` carrying the same
    /// projection (within [`MATCH_TOL`]) and measure.
    pub fn match_cells(&self, other: &Self) -> Option<Vec<usize>> {
        let mut used = vec![false; other.cells.len()];
        let mut out = Vec::with_capacity(self.cells.len());
        for c in &self.cells {
            let j = other
                .cells
                .iter()
                .enumerate()
                .position(|(j, o)| !used[j] && o.measure == c.measure && o.projection.approx_eq(&c.projection, MATCH_TOL))?;
            used[j] = true;
            out.push(j);
        }
        (out.len() == other.cells.len()).then_some(out)
    }
}

/// Points of `[0,1)` where two structures disagree: the union over matched
/// cells of `cell △ cell'`, plus every unmatched cell of either side.
pub fn difference_region(a: &BooleanStructure, b: &BooleanStructure) -> IntervalSet {
    let mut region = IntervalSet::empty();
    let mut used = vec![false; b.cells.len()];
    for c in &a.cells {
        let hit = b
            .cells
            .iter()
            .enumerate()
            .position(|(j, o)| !used[j] && o.projection.approx_eq(&c.projection, MATCH_TOL));
        match hit {
            Some(j) => {
                used[j] = true;
                region = region.union(&c.set.symmdiff(&b.cells[j].set));
            }
            None => region = region.union(&c.set),
        }
    }
    for (j, o) in b.cells.iter().enumerate() {
        if !used[j] {
            region = region.union(&o.set);
        }
    }
    region
}

/// Chain `B = B⁰, …, Bᴺ = B₁` in which consecutive structures differ on a set
/// of measure at most `1/k`.
///
/// Both structures must carry the same cell projections. Cell sets are
/// resolved on a grid of `M ≥ 2k` equal atoms; atoms are put in place by
/// transpositions in lexicographic order, grouped into steps while the
/// touched atoms stay within measure `1/k`.
pub fn connect_chain(
    b: &BooleanStructure,
    b1: &BooleanStructure,
    k: usize,
) -> Result<Vec<BooleanStructure>, StructureError> {
    if k == 0 {
        return Err(StructureError::NoCommonRefinement);
    }
    if b.state.dim() != b1.state.dim() || (b.state.matrix() - b1.state.matrix()).norm() > MATCH_TOL {
        return Err(StructureError::IncompatibleStates);
    }
    if b == b1 {
        return Ok(vec![b.clone()]);
    }
    let matching = b.match_cells(b1).ok_or(StructureError::NoCommonRefinement)?;
    let denominators = b
        .cells
        .iter()
        .chain(b1.cells.iter())
        .flat_map(|c| c.set.intervals().iter().flat_map(|(x, y)| [x.denom().clone(), y.denom().clone()]));
    let mut lcm = BigInt::one();
    for den in denominators {
        lcm = lcm.lcm(&den);
    }
    let lcm = lcm.to_usize().filter(|&l| l <= MAX_ATOMS).ok_or(StructureError::NoCommonRefinement)?;
    let m = lcm * (2 * k).div_ceil(lcm);
    if m > MAX_ATOMS {
        return Err(StructureError::NoCommonRefinement);
    }
    let mut label = vec![usize::MAX; m];
    let mut target = vec![usize::MAX; m];
    for (j, c) in b.cells.iter().enumerate() {
        for a in c.set.atom_indices(m).ok_or(StructureError::NoCommonRefinement)? {
            label[a] = j;
        }
        for a in b1.cells[matching[j]].set.atom_indices(m).ok_or(StructureError::NoCommonRefinement)? {
            target[a] = j;
        }
    }
    // each step may touch at most `budget` atoms (measure budget/m ≤ 1/k)
    let budget = m / k;
    let mut chain = vec![b.clone()];
    let mut touched = vec![false; m];
    let mut touched_count = 0usize;
    for i in 0..m {
        if label[i] == target[i] {
            continue;
        }
        let j = ((i + 1)..m)
            .find(|&j| label[j] == target[i] && label[j] != target[j])
            .ok_or(StructureError::NoCommonRefinement)?;
        let extra = usize::from(!touched[i]) + usize::from(!touched[j]);
        if touched_count + extra > budget {
            chain.push(structure_from_labels(b, &label, m)?);
            touched.iter_mut().for_each(|t| *t = false);
            touched_count = 0;
        }
        for a in [i, j] {
            if !touched[a] {
                touched[a] = true;
                touched_count += 1;
            }
        }
        label.swap(i, j);
    }
    if touched_count > 0 {
        chain.push(structure_from_labels(b, &label, m)?);
    }
    let last = chain.len() - 1;
    chain[last] = b1.clone();
    Ok(chain)
}

fn structure_from_labels(b: &BooleanStructure, label: &[usize], m: usize) -> Result<BooleanStructure, StructureError> {
    let mut atoms: Vec<Vec<usize>> = vec![Vec::new(); b.cells.len()];
    for (a, &l) in label.iter().enumerate() {
        atoms[l].push(a);
    }
    let cells = b
        .cells
        .iter()
        .zip(atoms)
        .map(|(c, at)| (IntervalSet::from_atoms(&at, m), c.projection.clone()))
        .collect();
    BooleanStructure::new(b.state.clone(), cells)
}

fn check_measure(state: &State, index: usize, p: &Projection, measure: &Rational) -> Result<(), StructureError> {
    if let Some(exact) = state.exact_prob(p) {
        if &exact == measure {
            return Ok(());
        }
        return Err(StructureError::MeasureMismatch { index, measure: measure.clone(), prob: rational::to_f64(&exact) });
    }
    let prob = state.prob(p);
    if math::abs(prob - rational::to_f64(measure)) > MEASURE_TOL {
        return Err(StructureError::MeasureMismatch { index, measure: measure.clone(), prob });
    }
    Ok(())
}

/// `ρ(P)` as a rational: exact when available, else the best approximation
/// with denominator at most `2^40`; tiny values are treated as zero.
pub fn block_weight(state: &State, p: &Projection) -> Rational {
    if let Some(w) = state.exact_prob(p) {
        return w;
    }
    let x = state.prob(p);
    if x.abs() <= NULL_WEIGHT {
        Rational::zero()
    } else {
        rational::approximate(x, WEIGHT_DENOMINATOR)
    }
}

/// Rotates pairs of frame columns until every column has ρ-weight `1/d`.
fn balance_frame(rho: &CMat, mut u: CMat) -> CMat {
    let d = u.ncols();
    let t = 1.0 / d as f64;
    let weight = |u: &CMat, j: usize| -> f64 {
        let c = u.column(j);
        (c.adjoint() * rho * c)[(0, 0)].re
    };
    for _ in 0..d {
        let w: Vec<f64> = (0..d).map(|j| weight(&u, j)).collect();
        let hi = (0..d).filter(|&j| w[j] > t).max_by(|&a, &b| w[a].total_cmp(&w[b]).then(b.cmp(&a)));
        let lo = (0..d).filter(|&j| w[j] < t).min_by(|&a, &b| w[a].total_cmp(&w[b]).then(a.cmp(&b)));
        let (Some(i), Some(j)) = (hi, lo) else { break };
        if w[i] - t < 1e-15 && t - w[j] < 1e-15 {
            break;
        }
        let (a, b) = (w[i], w[j]);
        let ui = u.column(i).into_owned();
        let uj = u.column(j).into_owned();
        let x = (ui.adjoint() * rho * &uj)[(0, 0)];
        // phase making the cross term vanish: e^{iφ}x purely imaginary
        let phase = if math::cabs(x) > 0.0 { C64::new(0.0, 1.0) * x.conj() / math::cabs(x) } else { C64::one() };
        let c2 = ((t - b) / (a - b)).clamp(0.0, 1.0);
        let (c, s) = (math::sqrt(c2), math::sqrt(1.0 - c2));
        let new_i = &ui * C64::new(c, 0.0) + &uj * (phase * s);
        let new_j = &uj * C64::new(c, 0.0) - &ui * (phase.conj() * s);
        u.set_column(i, &new_i);
        u.set_column(j, &new_j);
    }
    u
}

/// Assigns each weight to a target group so that group sums match within
/// `1e-12`; zero weights join the first group.
fn assign_groups(weights: &[f64], targets: &[f64]) -> Option<Vec<usize>> {
    const TOL: f64 = 1e-12;
    let mut order: Vec<usize> = (0..weights.len()).filter(|&i| weights[i] > TOL).collect();
    order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
    let mut remaining = targets.to_vec();
    let mut assign = vec![0usize; weights.len()];
    fn dfs(k: usize, order: &[usize], w: &[f64], rem: &mut [f64], assign: &mut [usize]) -> bool {
        if k == order.len() {
            return rem.iter().all(|r| r.abs() <= TOL);
        }
        let i = order[k];
        for g in 0..rem.len() {
            if w[i] <= rem[g] + TOL {
                rem[g] -= w[i];
                assign[i] = g;
                if dfs(k + 1, order, w, rem, assign) {
                    return true;
                }
                rem[g] += w[i];
            }
        }
        false
    }
    dfs(0, &order, weights, &mut remaining, &mut assign).then_some(assign)
}
