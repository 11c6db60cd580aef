//! Information functionals on distributions and projection partitions.
//!
//! Logarithms are base 2. Conventions: `0·log 0 = 0`; a term
//! `μ(P)·log ρ(P)` with `ρ(P) = 0` is zero when `μ(P) = 0` and divergent
//! otherwise.

use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::linalg::{CMat, LinalgError, Projection, ProjectionPartition, SignedOperator, State};
use crate::math;
use crate::rational::{self, Rational};
use crate::structure::BooleanStructure;

/// Probabilities at or below this are treated as zero when computed from matrices.
pub const NULL_WEIGHT: f64 = 1e-14;

/// Largest `|μ(P)|` accepted on a null block.
pub const NULL_MU: f64 = 1e-10;

/// Locations closer than this are merged in a step cdf.
pub const ATOM_MERGE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("block {index} has zero probability but nonzero weight {mu:e}")]
    DivergentTerm { index: usize, mu: f64 },
    #[error("conditioning event has zero probability")]
    ZeroConditioningEvent,
    #[error("distribution is empty")]
    EmptyDistribution,
    #[error("probability {index} is negative")]
    NegativeProbability { index: usize },
    #[error("probabilities sum to {sum}, not 1")]
    SumNotOne { sum: Rational },
    #[error("probability {index} is zero, its logarithm is undefined")]
    ZeroAtom { index: usize },
    #[error("atom masses must be positive and sum to 1")]
    BadMasses,
    #[error("invalid order alpha = {alpha}")]
    InvalidAlpha { alpha: f64 },
}

/// Finite probability vector with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Distribution {
    probs: Vec<Rational>,
}

impl Distribution {
    pub fn new(probs: Vec<Rational>) -> Result<Self, InfoError> {
        if probs.is_empty() {
            return Err(InfoError::EmptyDistribution);
        }
        if let Some(index) = probs.iter().position(|p| p.is_negative()) {
            return Err(InfoError::NegativeProbability { index });
        }
        let sum = rational::sum(&probs);
        if !sum.is_one() {
            return Err(InfoError::SumNotOne { sum });
        }
        Ok(Self { probs })
    }

    pub fn uniform(n: usize) -> Self {
        Self { probs: alloc::vec![rational::rat(1, n as i64); n] }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        rational::to_f64_vec(&self.probs)
    }

    /// Outer product `𝐩⊗𝐪`, row-major.
    pub fn tensor(&self, other: &Self) -> Self {
        let probs = self.probs.iter().flat_map(|p| other.probs.iter().map(move |q| p * q)).collect();
        Self { probs }
    }

    /// Entries sorted in decreasing order.
    pub fn sorted_profile(&self) -> Vec<Rational> {
        let mut v = self.probs.clone();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

/// `Σ p log 1/p`.
pub fn shannon(p: &[f64]) -> f64 {
    p.iter().map(|&x| math::plogp_inv(x)).sum()
}

/// Shannon entropy with exact logarithms of dyadic probabilities.
pub fn shannon_exact(p: &[Rational]) -> f64 {
    p.iter()
        .filter(|x| x.is_positive())
        .map(|x| -rational::to_f64(x) * rational::log2(x))
        .sum()
}

/// Rényi entropy `(1/(1−α)) log Σ p^α`; `α = 1` is Shannon, `α = 0` Hartley,
/// `α = ∞` min-entropy. Zero probabilities are dropped.
pub fn renyi(p: &[f64], alpha: f64) -> f64 {
    if alpha == 1.0 {
        return shannon(p);
    }
    let support = p.iter().copied().filter(|&x| x > 0.0);
    if alpha == 0.0 {
        return math::log2(support.count() as f64);
    }
    if alpha.is_infinite() {
        return -math::log2(support.fold(0.0, f64::max));
    }
    let s: f64 = support.map(|x| math::powf(x, alpha)).sum();
    math::log2(s) / (1.0 - alpha)
}

/// A symmetric information: Shannon, Rényi of order α, or a real linear
/// combination of these.
#[derive(Debug, Clone, PartialEq)]
pub enum SymmetricInformation {
    Shannon,
    Renyi(f64),
    LinComb(Vec<(f64, SymmetricInformation)>),
}

impl SymmetricInformation {
    pub fn renyi(alpha: f64) -> Result<Self, InfoError> {
        if alpha.is_nan() || alpha < 0.0 {
            return Err(InfoError::InvalidAlpha { alpha });
        }
        Ok(Self::Renyi(alpha))
    }

    /// The zero functional.
    pub fn zero() -> Self {
        Self::LinComb(Vec::new())
    }

    pub fn scaled(self, c: f64) -> Self {
        Self::LinComb(alloc::vec![(c, self)])
    }

    pub fn eval(&self, p: &[f64]) -> f64 {
        match self {
            Self::Shannon => shannon(p),
            Self::Renyi(a) => renyi(p, *a),
            Self::LinComb(terms) => terms.iter().map(|(c, s)| c * s.eval(p)).sum(),
        }
    }

    /// Evaluation with exact logarithms where the functional allows it.
    pub fn eval_exact(&self, p: &[Rational]) -> f64 {
        match self {
            Self::Shannon => shannon_exact(p),
            Self::Renyi(a) if *a == 1.0 => shannon_exact(p),
            Self::Renyi(_) => self.eval(&rational::to_f64_vec(p)),
            Self::LinComb(terms) => terms.iter().map(|(c, s)| c * s.eval_exact(p)).sum(),
        }
    }

    pub fn eval_distribution(&self, p: &Distribution) -> f64 {
        self.eval_exact(p.probs())
    }
}

/// Outcome probability of a block: exact when the state allows, else the
/// trace with tiny values snapped to zero.
fn outcome(state: &State, p: &Projection) -> (f64, Option<Rational>) {
    if let Some(w) = state.exact_prob(p) {
        return (rational::to_f64(&w), Some(w));
    }
    let x = state.prob(p);
    if x.abs() <= NULL_WEIGHT {
        (0.0, Some(Rational::zero()))
    } else {
        (x, None)
    }
}

/// `I(𝐏) = I_s(ρ(P_1), …) + Σ μ(P_i) log ρ(P_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralInformation {
    state: State,
    mu: SignedOperator,
    sym: SymmetricInformation,
}

impl GeneralInformation {
    pub fn new(state: State, mu: SignedOperator, sym: SymmetricInformation) -> Result<Self, InfoError> {
        if mu.dim() != state.dim() {
            return Err(InfoError::DimensionMismatch { expected: state.dim(), found: mu.dim() });
        }
        Ok(Self { state, mu, sym })
    }

    /// `μ = 0`: the measurement information `I_s(ρ(P_i))`.
    pub fn symmetric(state: State, sym: SymmetricInformation) -> Self {
        let d = state.dim();
        Self { state, mu: SignedOperator::zero(d), sym }
    }

    pub fn state(&self) -> &State {
        &self.state
    }

    pub fn mu(&self) -> &SignedOperator {
        &self.mu
    }

    pub fn sym(&self) -> &SymmetricInformation {
        &self.sym
    }

    pub fn evaluate(&self, p: &ProjectionPartition) -> Result<f64, InfoError> {
        let d = self.state.dim();
        if p.dim() != d {
            return Err(InfoError::DimensionMismatch { expected: d, found: p.dim() });
        }
        let outcomes: Vec<(f64, Option<Rational>)> = p.blocks().iter().map(|b| outcome(&self.state, b)).collect();
        let all_exact = outcomes.iter().all(|(_, e)| e.is_some());
        let sym = if all_exact {
            let exact: Vec<Rational> = outcomes.iter().map(|(_, e)| e.clone().unwrap()).collect();
            self.sym.eval_exact(&exact)
        } else {
            self.sym.eval(&outcomes.iter().map(|(x, _)| *x).collect::<Vec<_>>())
        };
        let mut nonsym = 0.0;
        for (index, (b, (x, exact))) in p.blocks().iter().zip(&outcomes).enumerate() {
            let mu = self.mu.value(b);
            let log = match exact {
                Some(w) if w.is_zero() => {
                    if mu.abs() > NULL_MU {
                        return Err(InfoError::DivergentTerm { index, mu });
                    }
                    continue;
                }
                Some(w) => rational::log2(w),
                None => math::log2(*x),
            };
            nonsym += mu * log;
        }
        Ok(sym + nonsym)
    }

    /// `I(B(𝐀))` for cell groups of a structure over the same state, with the
    /// exact cell measures `λ(A_i)` standing in for `ρ(B(A_i))`.
    pub fn evaluate_on_structure(&self, b: &BooleanStructure, groups: &[Vec<usize>]) -> Result<f64, InfoError> {
        let measures = b.group_measures(groups);
        let mut value = self.sym.eval_exact(&measures);
        for (index, g) in groups.iter().enumerate() {
            let mu: f64 = g.iter().map(|&j| self.mu.value(b.cells()[j].projection())).sum();
            if measures[index].is_zero() {
                if mu.abs() > NULL_MU {
                    return Err(InfoError::DivergentTerm { index, mu });
                }
                continue;
            }
            value += mu * rational::log2(&measures[index]);
        }
        Ok(value)
    }
}

/// `I_1(𝐏) = Σ ρ(P_i) log 1/ρ(P_i)`.
pub fn von_neumann_info(state: &State, p: &ProjectionPartition) -> Result<f64, InfoError> {
    GeneralInformation::symmetric(state.clone(), SymmetricInformation::Shannon).evaluate(p)
}

/// `μ_E = ρ − EρE/ρ(E)`, the operator turning Shannon measurement information
/// into the conditional information given `E`.
pub fn conditional_mu(state: &State, e: &Projection) -> Result<SignedOperator, InfoError> {
    if e.dim() != state.dim() {
        return Err(InfoError::DimensionMismatch { expected: state.dim(), found: e.dim() });
    }
    let pe = state.prob(e);
    if pe <= NULL_WEIGHT {
        return Err(InfoError::ZeroConditioningEvent);
    }
    let m: CMat = state.matrix() - e.matrix() * state.matrix() * e.matrix() / crate::linalg::C64::new(pe, 0.0);
    Ok(SignedOperator::new(m, 1e-9)?)
}

/// `Σ ρ(E P_i E)/ρ(E) · log 1/ρ(P_i)`.
pub fn conditional_info(state: &State, e: &Projection, p: &ProjectionPartition) -> Result<f64, InfoError> {
    let d = state.dim();
    for found in [e.dim(), p.dim()] {
        if found != d {
            return Err(InfoError::DimensionMismatch { expected: d, found });
        }
    }
    let pe = state.prob(e);
    if pe <= NULL_WEIGHT {
        return Err(InfoError::ZeroConditioningEvent);
    }
    let ere = e.matrix() * state.matrix() * e.matrix();
    let mut value = 0.0;
    for (index, b) in p.blocks().iter().enumerate() {
        let cond = crate::linalg::trace_product(&ere, b.matrix()).re / pe;
        let (x, exact) = outcome(state, b);
        let log = match exact {
            Some(w) if w.is_zero() => {
                if cond.abs() > NULL_WEIGHT {
                    return Err(InfoError::DivergentTerm { index, mu: cond });
                }
                continue;
            }
            Some(w) => rational::log2(&w),
            None => math::log2(x),
        };
        value -= cond * log;
    }
    Ok(value)
}

/// Step distribution function with finitely many atoms `(x, p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepCdf {
    atoms: Vec<(f64, Rational)>,
}

impl StepCdf {
    /// Sorts atoms and merges locations closer than [`ATOM_MERGE`].
    pub fn new(mut atoms: Vec<(f64, Rational)>) -> Result<Self, InfoError> {
        if atoms.is_empty() || atoms.iter().any(|(x, p)| !p.is_positive() || !x.is_finite()) {
            return Err(InfoError::BadMasses);
        }
        if !rational::sum(atoms.iter().map(|(_, p)| p)).is_one() {
            return Err(InfoError::BadMasses);
        }
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut merged: Vec<(f64, Rational)> = Vec::with_capacity(atoms.len());
        for (x, p) in atoms {
            match merged.last_mut() {
                Some(last) if x - last.0 <= ATOM_MERGE => last.1 += p,
                _ => merged.push((x, p)),
            }
        }
        Ok(Self { atoms: merged })
    }

    /// `δ_a`.
    pub fn point_mass(a: f64) -> Self {
        Self { atoms: alloc::vec![(a, Rational::one())] }
    }

    pub fn atoms(&self) -> &[(f64, Rational)] {
        &self.atoms
    }

    /// `F(x) = Σ_{x_i < x} p_i`.
    pub fn at(&self, x: f64) -> Rational {
        rational::sum(self.atoms.iter().filter(|(xi, _)| *xi < x).map(|(_, p)| p))
    }

    /// `F * G`: atoms at `x_i + y_j` with masses `p_i q_j`.
    pub fn convolve(&self, other: &Self) -> Self {
        let atoms = self
            .atoms
            .iter()
            .flat_map(|(x, p)| other.atoms.iter().map(move |(y, q)| (x + y, p * q)))
            .collect();
        Self::new(atoms).expect("convolution of valid cdfs is valid")
    }

    /// `tF + (1−t)G` for `0 < t < 1`.
    pub fn mix(t: &Rational, f: &Self, g: &Self) -> Self {
        let s = Rational::one() - t;
        let atoms = f
            .atoms
            .iter()
            .map(|(x, p)| (*x, p * t))
            .chain(g.atoms.iter().map(|(x, p)| (*x, p * &s)))
            .filter(|(_, p)| p.is_positive())
            .collect();
        Self::new(atoms).expect("mixture of valid cdfs is valid")
    }
}

/// `F_𝐩`: atoms at `log p_i` with masses `p_i`.
pub fn cdf_of_distribution(p: &Distribution) -> Result<StepCdf, InfoError> {
    if let Some(index) = p.probs().iter().position(|x| x.is_zero()) {
        return Err(InfoError::ZeroAtom { index });
    }
    StepCdf::new(p.probs().iter().map(|x| (rational::log2(x), x.clone())).collect())
}

/// `J_1(F) = Σ p x`; `J_α(F) = (1/(α−1)) log Σ p 2^{(α−1)x}`.
pub fn renyi_functional(f: &StepCdf, alpha: f64) -> f64 {
    let weighted = f.atoms.iter().map(|(x, p)| (*x, rational::to_f64(p)));
    if alpha == 1.0 {
        return weighted.map(|(x, p)| p * x).sum();
    }
    let s = alpha - 1.0;
    // shift by the largest exponent so the sum stays in range
    let top = f.atoms.iter().map(|(x, _)| s * x).fold(f64::NEG_INFINITY, f64::max);
    let sum: f64 = weighted.map(|(x, p)| p * math::exp2(s * x - top)).sum();
    (top + math::log2(sum)) / s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{CVec, C64};
    use crate::random;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn dist(p: &[(i64, i64)]) -> Distribution {
        Distribution::new(p.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
    }

    /// Independent reference: natural-log Shannon entropy converted to bits.
    fn shannon_ref(p: &[f64]) -> f64 {
        -p.iter().filter(|&&x| x > 0.0).map(|&x| x * libm::log(x)).sum::<f64>() / core::f64::consts::LN_2
    }

    #[test]
    fn shannon_examples() {
        assert_eq!(shannon(&[0.5, 0.5]), 1.0);
        assert_eq!(shannon(&[1.0]), 0.0);
        assert_eq!(shannon_exact(dist(&[(1, 2), (1, 4), (1, 4)]).probs()), 1.5);
        assert!((shannon(&[0.5, 0.25, 0.25]) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn renyi_examples() {
        for alpha in [0.0, 0.5, 2.0, 3.0, f64::INFINITY] {
            assert!((renyi(&[0.5, 0.5], alpha) - 1.0).abs() < 1e-15);
        }
        assert_eq!(renyi(&[0.5, 0.5, 0.0], 0.0), 1.0);
        assert!((renyi(&[0.5, 0.25, 0.25], 2.0) - (-libm::log2(0.375))).abs() < 1e-15);
        assert!(matches!(SymmetricInformation::renyi(-1.0), Err(InfoError::InvalidAlpha { .. })));
    }

    #[test]
    fn distribution_validation() {
        assert!(matches!(Distribution::new(alloc::vec![]), Err(InfoError::EmptyDistribution)));
        assert!(matches!(
            Distribution::new(alloc::vec![rat(3, 2), rat(-1, 2)]),
            Err(InfoError::NegativeProbability { index: 1 })
        ));
        assert!(matches!(Distribution::new(alloc::vec![rat(1, 2)]), Err(InfoError::SumNotOne { .. })));
    }

    #[test]
    fn general_info_example() {
        let rho = State::from_weights(&[rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let mut m = CMat::zeros(3, 3);
        m[(0, 0)] = C64::new(0.25, 0.0);
        m[(1, 1)] = C64::new(-0.25, 0.0);
        let mu = SignedOperator::new(m, 1e-12).unwrap();
        let g = GeneralInformation::new(rho.clone(), mu, SymmetricInformation::Shannon).unwrap();
        let p = ProjectionPartition::coordinates(3);
        // 1.5 + (1/4)(−1) + (−1/4)(−2)
        assert_eq!(g.evaluate(&p).unwrap(), 1.75);
        assert_eq!(g.evaluate(&ProjectionPartition::identity(3)).unwrap(), 0.0);
        let sym = GeneralInformation::symmetric(rho, SymmetricInformation::Shannon);
        assert_eq!(sym.evaluate(&p).unwrap(), 1.5);
    }

    #[test]
    fn divergent_term_is_reported() {
        let rho = State::from_weights(&[rat(1, 1), rat(0, 1)]).unwrap();
        let mut m = CMat::zeros(2, 2);
        m[(0, 0)] = C64::new(0.5, 0.0);
        m[(1, 1)] = C64::new(-0.5, 0.0);
        let g = GeneralInformation::new(rho.clone(), SignedOperator::new(m, 1e-12).unwrap(), SymmetricInformation::Shannon)
            .unwrap();
        assert!(matches!(
            g.evaluate(&ProjectionPartition::coordinates(2)),
            Err(InfoError::DivergentTerm { index: 1, .. })
        ));
        let zero = GeneralInformation::symmetric(rho, SymmetricInformation::Shannon);
        assert_eq!(zero.evaluate(&ProjectionPartition::coordinates(2)).unwrap(), 0.0);
    }

    #[test]
    fn von_neumann_examples() {
        let rho = State::from_weights(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(von_neumann_info(&rho, &ProjectionPartition::identity(2)).unwrap(), 0.0);
        assert_eq!(von_neumann_info(&rho, &ProjectionPartition::coordinates(2)).unwrap(), 1.0);
        assert!(matches!(
            von_neumann_info(&rho, &ProjectionPartition::coordinates(3)),
            Err(InfoError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conditional_examples() {
        let rho = State::from_weights(&[rat(1, 2), rat(1, 4), rat(1, 4)]).unwrap();
        let p = ProjectionPartition::coordinates(3);
        let id = Projection::identity(3);
        assert_eq!(conditional_info(&rho, &id, &p).unwrap(), von_neumann_info(&rho, &p).unwrap());
        let e = p.blocks()[1].clone();
        assert_eq!(conditional_info(&rho, &e, &p).unwrap(), 2.0);
        let null = State::from_weights(&[rat(1, 1), rat(0, 1), rat(0, 1)]).unwrap();
        assert!(matches!(conditional_info(&null, &e, &p), Err(InfoError::ZeroConditioningEvent)));
    }

    #[test]
    fn conditional_matches_general_form() {
        let mut rng = random::seeded(21);
        for _ in 0..20 {
            let rho = State::from_matrix(random::density_matrix(4, &mut rng), 1e-12).unwrap();
            let u = random::unitary(4, &mut rng);
            let e = Projection::from_orthonormal_columns(&u.columns(0, 2).into_owned());
            let v = random::unitary(4, &mut rng);
            let p = ProjectionPartition::new(
                alloc::vec![
                    Projection::from_orthonormal_columns(&v.columns(0, 1).into_owned()),
                    Projection::from_orthonormal_columns(&v.columns(1, 3).into_owned()),
                ],
                1e-10,
            )
            .unwrap();
            let direct = conditional_info(&rho, &e, &p).unwrap();
            let mu = conditional_mu(&rho, &e).unwrap();
            let g = GeneralInformation::new(rho, mu, SymmetricInformation::Shannon).unwrap();
            assert!((g.evaluate(&p).unwrap() - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn cdf_examples() {
        let one = cdf_of_distribution(&dist(&[(1, 1)])).unwrap();
        assert_eq!(one.atoms(), &[(0.0, rat(1, 1))]);
        let half = cdf_of_distribution(&dist(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(half.atoms(), &[(-1.0, rat(1, 1))]);
        let three = cdf_of_distribution(&dist(&[(1, 2), (1, 4), (1, 4)])).unwrap();
        assert_eq!(three.atoms(), &[(-2.0, rat(1, 2)), (-1.0, rat(1, 2))]);
        assert!(matches!(
            cdf_of_distribution(&dist(&[(1, 1), (0, 1)])),
            Err(InfoError::ZeroAtom { index: 1 })
        ));
        assert_eq!(three.at(-1.5), rat(1, 2));
    }

    #[test]
    fn renyi_functional_examples() {
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            assert_eq!(renyi_functional(&StepCdf::point_mass(1.0), alpha), 1.0);
            assert!((renyi_functional(&StepCdf::point_mass(-3.25), alpha) + 3.25).abs() < 1e-15);
        }
        let f = StepCdf::point_mass(0.75);
        assert_eq!(f.convolve(&StepCdf::point_mass(0.0)), f);
        assert_eq!(StepCdf::point_mass(1.0).convolve(&StepCdf::point_mass(2.0)), StepCdf::point_mass(3.0));
    }

    fn prob_vec() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(0.0f64..1.0, 1..8).prop_map(|v| {
            let s: f64 = v.iter().sum();
            if s == 0.0 {
                let mut w = alloc::vec![0.0; v.len()];
                w[0] = 1.0;
                w
            } else {
                v.iter().map(|x| x / s).collect()
            }
        })
    }

    fn dyadic_dist() -> impl Strategy<Value = Distribution> {
        proptest::collection::vec(1i64..16, 1..6).prop_map(|v| {
            let s: i64 = v.iter().sum();
            Distribution::new(v.iter().map(|&x| rat(x, s)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn shannon_matches_reference(p in prob_vec()) {
            prop_assert!((shannon(&p) - shannon_ref(&p)).abs() < 1e-12);
            prop_assert!(shannon(&p) <= libm::log2(p.len() as f64) + 1e-12);
        }

        #[test]
        fn renyi_is_monotone_in_alpha(p in prob_vec()) {
            let grid = [0.0, 0.5, 1.0, 2.0, 4.0, 64.0];
            for w in grid.windows(2) {
                prop_assert!(renyi(&p, w[1]) <= renyi(&p, w[0]) + 1e-12);
            }
        }

        #[test]
        fn renyi_near_one_is_shannon(p in prob_vec()) {
            for a in [1.0 - 1e-6, 1.0 + 1e-6] {
                prop_assert!((renyi(&p, a) - shannon_ref(&p)).abs() <= 1e-4);
            }
        }

        #[test]
        fn symmetric_parts_are_product_additive(p in dyadic_dist(), q in dyadic_dist(), a in 0.1f64..5.0) {
            let pq = p.tensor(&q);
            for s in [SymmetricInformation::Shannon, SymmetricInformation::Renyi(a)] {
                let lhs = s.eval_distribution(&pq);
                prop_assert!((lhs - s.eval_distribution(&p) - s.eval_distribution(&q)).abs() <= 1e-10);
            }
        }

        #[test]
        fn j_of_cdf_is_negative_renyi(p in dyadic_dist(), a in prop::sample::select(alloc::vec![0.5, 2.0, 3.0])) {
            let f = cdf_of_distribution(&p).unwrap();
            let pf = p.to_f64();
            let direct = libm::log2(pf.iter().map(|x| libm::pow(*x, a)).sum::<f64>()) / (a - 1.0);
            prop_assert!((renyi_functional(&f, a) - direct).abs() < 1e-10);
            prop_assert!((renyi_functional(&f, a) + renyi(&pf, a)).abs() < 1e-10);
        }

        #[test]
        fn j_is_convolution_additive(p in dyadic_dist(), q in dyadic_dist(), a in prop::sample::select(alloc::vec![0.5, 1.0, 2.0, 3.0])) {
            let f = cdf_of_distribution(&p).unwrap();
            let g = cdf_of_distribution(&q).unwrap();
            let lhs = renyi_functional(&f.convolve(&g), a);
            prop_assert!((lhs - renyi_functional(&f, a) - renyi_functional(&g, a)).abs() < 1e-10);
        }

        #[test]
        fn post_measurement_is_a_state(seed in 0u64..1000) {
            let mut rng = random::seeded(seed);
            let u = random::unitary(3, &mut rng);
            let e: CVec = u.column(0).into_owned();
            let p = ProjectionPartition::coordinates(3);
            let rho = crate::linalg::post_measurement_state(&e, &p, 1e-10).unwrap();
            prop_assert!(State::from_matrix(rho.matrix().clone(), 1e-10).is_ok());
        }
    }
}
