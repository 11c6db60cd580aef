//! Exact set algebra on `[0,1)`.
//!
//! Sets are finite unions of half-open intervals with rational endpoints, kept
//! in canonical form (sorted, disjoint, adjacent pieces merged), so structural
//! equality is set equality and measures are exact.

use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BorelError {
    #[error("interval [{a}, {b}) is not inside [0,1]")]
    OutOfRange { a: Rational, b: Rational },
    #[error("interval [{a}, {b}) has reversed endpoints")]
    Reversed { a: Rational, b: Rational },
    #[error("blocks {i} and {j} overlap")]
    Overlap { i: usize, j: usize },
    #[error("blocks cover measure {measure}, not [0,1)")]
    NotCovering { measure: Rational },
    #[error("swap sets are not nested in the first two blocks")]
    NotNested,
    #[error("swap sets have measures {v} and {w}")]
    UnequalMeasure { v: Rational, w: Rational },
    #[error("swap transport needs at least two blocks")]
    TooFewBlocks,
}

/// Finite union of half-open intervals `[a, b)` inside `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntervalSet {
    intervals: Vec<(Rational, Rational)>,
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.intervals.is_empty() {
            return f.write_str("∅");
        }
        for (k, (a, b)) in self.intervals.iter().enumerate() {
            if k > 0 {
                f.write_str(" ∪ ")?;
            }
            write!(f, "[{}, {})", rational::format(a), rational::format(b))?;
        }
        Ok(())
    }
}

impl IntervalSet {
    pub fn empty() -> Self {
        Self { intervals: Vec::new() }
    }

    pub fn full() -> Self {
        Self { intervals: alloc::vec![(Rational::zero(), Rational::one())] }
    }

    /// Validates and normalizes a list of intervals (overlaps are merged).
    pub fn new(intervals: Vec<(Rational, Rational)>) -> Result<Self, BorelError> {
        for (a, b) in &intervals {
            if a > b {
                return Err(BorelError::Reversed { a: a.clone(), b: b.clone() });
            }
            if *a < Rational::zero() || *b > Rational::one() {
                return Err(BorelError::OutOfRange { a: a.clone(), b: b.clone() });
            }
        }
        Ok(Self::normalized(intervals))
    }

    /// `[a, b)`; panics if the endpoints are not `0 ≤ a ≤ b ≤ 1`.
    pub fn interval(a: Rational, b: Rational) -> Self {
        Self::new(alloc::vec![(a, b)]).expect("interval endpoints must satisfy 0 <= a <= b <= 1")
    }

    /// `[i/n, (i+1)/n)`.
    pub fn grid_cell(i: usize, n: usize) -> Self {
        Self::interval(rational::rat(i as i64, n as i64), rational::rat(i as i64 + 1, n as i64))
    }

    fn normalized(mut intervals: Vec<(Rational, Rational)>) -> Self {
        intervals.retain(|(a, b)| a < b);
        intervals.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match out.last_mut() {
                Some(last) if a <= last.1 => {
                    if b > last.1 {
                        last.1 = b;
                    }
                }
                _ => out.push((a, b)),
            }
        }
        Self { intervals: out }
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Exact Lebesgue measure.
    pub fn measure(&self) -> Rational {
        let mut m = Rational::zero();
        for (a, b) in &self.intervals {
            m += b - a;
        }
        m
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        let idx = self.intervals.partition_point(|(a, _)| a <= x);
        idx > 0 && *x < self.intervals[idx - 1].1
    }

    fn combine(&self, other: &Self, keep: impl Fn(bool, bool) -> bool) -> Self {
        let mut points: Vec<&Rational> = Vec::new();
        for (a, b) in self.intervals.iter().chain(other.intervals.iter()) {
            points.push(a);
            points.push(b);
        }
        let zero = Rational::zero();
        let one = Rational::one();
        points.push(&zero);
        points.push(&one);
        points.sort();
        points.dedup();
        let mut out = Vec::new();
        for w in points.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            // membership is constant on each elementary piece, test its left end
            if keep(self.contains_point(lo), other.contains_point(lo)) {
                out.push((lo.clone(), hi.clone()));
            }
        }
        Self::normalized(out)
    }

    pub fn union(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x || y)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && y)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x && !y)
    }

    pub fn symmdiff(&self, other: &Self) -> Self {
        self.combine(other, |x, y| x != y)
    }

    pub fn complement(&self) -> Self {
        Self::full().difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.intersect(other).is_empty()
    }

    /// Shifted copy `A + t`; the result must stay inside `[0,1]`.
    pub fn translate(&self, t: &Rational) -> Result<Self, BorelError> {
        Self::new(self.intervals.iter().map(|(a, b)| (a + t, b + t)).collect())
    }

    /// Splits off the leftmost part of measure `m` (clamped to the whole set).
    pub fn split_prefix(&self, m: &Rational) -> (Self, Self) {
        let mut need = m.clone();
        let mut head = Vec::new();
        let mut tail = Vec::new();
        for (a, b) in &self.intervals {
            let len = b - a;
            if need.is_zero() {
                tail.push((a.clone(), b.clone()));
            } else if len <= need {
                need -= &len;
                head.push((a.clone(), b.clone()));
            } else {
                let cut = a + &need;
                head.push((a.clone(), cut.clone()));
                tail.push((cut, b.clone()));
                need = Rational::zero();
            }
        }
        (Self::normalized(head), Self::normalized(tail))
    }

    /// Indices `i` of the grid atoms `[i/n, (i+1)/n)` making up the set, or
    /// `None` if some endpoint is not a multiple of `1/n`.
    pub fn atom_indices(&self, n: usize) -> Option<Vec<usize>> {
        let scale = Rational::from_integer(num_bigint::BigInt::from(n));
        let mut out = Vec::new();
        for (a, b) in &self.intervals {
            let (sa, sb) = (a * &scale, b * &scale);
            if !sa.is_integer() || !sb.is_integer() {
                return None;
            }
            let lo: usize = num_traits::ToPrimitive::to_usize(sa.numer())?;
            let hi: usize = num_traits::ToPrimitive::to_usize(sb.numer())?;
            out.extend(lo..hi);
        }
        Some(out)
    }

    /// Union of grid atoms `[i/n, (i+1)/n)`.
    pub fn from_atoms(atoms: &[usize], n: usize) -> Self {
        Self::normalized(
            atoms
                .iter()
                .map(|&i| (rational::rat(i as i64, n as i64), rational::rat(i as i64 + 1, n as i64)))
                .collect(),
        )
    }

    pub fn inf(&self) -> Option<&Rational> {
        self.intervals.first().map(|(a, _)| a)
    }
}

/// Ordered tuple of pairwise disjoint sets covering `[0,1)`. Empty blocks are allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasurablePartition {
    blocks: Vec<IntervalSet>,
}

impl MeasurablePartition {
    pub fn new(blocks: Vec<IntervalSet>) -> Result<Self, BorelError> {
        for i in 0..blocks.len() {
            for j in (i + 1)..blocks.len() {
                if !blocks[i].is_disjoint(&blocks[j]) {
                    return Err(BorelError::Overlap { i, j });
                }
            }
        }
        let measure = rational::sum(blocks.iter().map(|b| b.measure()).collect::<Vec<_>>().iter());
        if !measure.is_one() {
            return Err(BorelError::NotCovering { measure });
        }
        Ok(Self { blocks })
    }

    pub fn trivial() -> Self {
        Self { blocks: alloc::vec![IntervalSet::full()] }
    }

    /// Consecutive intervals `[α_{i−1}, α_i)` with `α_i − α_{i−1} = measures[i]`.
    pub fn consecutive(measures: &[Rational]) -> Result<Self, BorelError> {
        let mut lo = Rational::zero();
        let mut blocks = Vec::with_capacity(measures.len());
        for m in measures {
            let hi = &lo + m;
            blocks.push(IntervalSet::new(alloc::vec![(lo.clone(), hi.clone())])?);
            lo = hi;
        }
        Self::new(blocks)
    }

    /// `n` equal cells `[i/n, (i+1)/n)`.
    pub fn grid(n: usize) -> Self {
        Self { blocks: (0..n).map(|i| IntervalSet::grid_cell(i, n)).collect() }
    }

    pub fn blocks(&self) -> &[IntervalSet] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn measures(&self) -> Vec<Rational> {
        self.blocks.iter().map(|b| b.measure()).collect()
    }

    /// `λ(A_i ∩ B_j) = λ(A_i)λ(B_j)` for all pairs, exactly.
    pub fn independent_of(&self, other: &Self) -> bool {
        self.blocks.iter().all(|a| {
            let ma = a.measure();
            other.blocks.iter().all(|b| a.intersect(b).measure() == &ma * b.measure())
        })
    }

    /// `𝐀·𝐁 = (A_i ∩ B_j)` in row-major order.
    pub fn product(&self, other: &Self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .flat_map(|a| other.blocks.iter().map(move |b| a.intersect(b)))
            .collect();
        Self { blocks }
    }

    /// `T_VW 𝐀 = (A_1 △ V △ W, A_2 △ V △ W, A_3, …)`.
    pub fn swap_transport(&self, v: &IntervalSet, w: &IntervalSet) -> Result<Self, BorelError> {
        if self.blocks.len() < 2 {
            return Err(BorelError::TooFewBlocks);
        }
        if !v.is_subset(&self.blocks[0]) || !w.is_subset(&self.blocks[1]) {
            return Err(BorelError::NotNested);
        }
        let (mv, mw) = (v.measure(), w.measure());
        if mv != mw {
            return Err(BorelError::UnequalMeasure { v: mv, w: mw });
        }
        let vw = v.symmdiff(w);
        let mut blocks = self.blocks.clone();
        blocks[0] = blocks[0].symmdiff(&vw);
        blocks[1] = blocks[1].symmdiff(&vw);
        Ok(Self { blocks })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> IntervalSet {
        IntervalSet::interval(rat(a.0, a.1), rat(b.0, b.1))
    }

    #[test]
    fn lebesgue_examples() {
        assert_eq!(IntervalSet::full().measure(), rat(1, 1));
        let a = iv((0, 1), (1, 4)).union(&iv((1, 2), (3, 4)));
        assert_eq!(a.measure(), rat(1, 2));
        assert_eq!(iv((1, 3), (2, 3)).complement().measure(), rat(2, 3));
    }

    #[test]
    fn set_op_examples() {
        let a = iv((0, 1), (1, 2));
        assert!(a.symmdiff(&a).is_empty());
        assert_eq!(a.intersect(&iv((1, 4), (3, 4))), iv((1, 4), (1, 2)));
        assert_eq!(iv((0, 1), (1, 2)).union(&iv((1, 2), (1, 1))), IntervalSet::full());
    }

    #[test]
    fn prefix_and_atoms() {
        let a = iv((0, 1), (1, 4)).union(&iv((1, 2), (3, 4)));
        let (h, t) = a.split_prefix(&rat(3, 8));
        assert_eq!(h, iv((0, 1), (1, 4)).union(&iv((1, 2), (5, 8))));
        assert_eq!(t, iv((5, 8), (3, 4)));
        assert_eq!(a.atom_indices(8), Some(alloc::vec![0, 1, 4, 5]));
        assert_eq!(a.atom_indices(2), None);
        assert_eq!(IntervalSet::from_atoms(&[0, 1, 4, 5], 8), a);
    }

    #[test]
    fn rejects_bad_intervals() {
        assert!(matches!(
            IntervalSet::new(alloc::vec![(rat(1, 2), rat(1, 4))]),
            Err(BorelError::Reversed { .. })
        ));
        assert!(matches!(
            IntervalSet::new(alloc::vec![(rat(1, 2), rat(3, 2))]),
            Err(BorelError::OutOfRange { .. })
        ));
    }

    #[test]
    fn independence_examples() {
        let halves = MeasurablePartition::grid(2);
        let q = MeasurablePartition::grid(4);
        let odd = q.blocks()[0].union(&q.blocks()[2]);
        let b = MeasurablePartition::new(alloc::vec![odd.clone(), odd.complement()]).unwrap();
        assert!(halves.independent_of(&b));
        assert!(!halves.independent_of(&halves));
        assert!(halves.independent_of(&MeasurablePartition::trivial()));
        let prod = halves.product(&b);
        assert_eq!(prod.measures(), alloc::vec![rat(1, 4); 4]);
    }

    #[test]
    fn partition_validation() {
        let a = iv((0, 1), (1, 2));
        assert_eq!(
            MeasurablePartition::new(alloc::vec![a.clone(), a.clone()]),
            Err(BorelError::Overlap { i: 0, j: 1 })
        );
        assert!(matches!(MeasurablePartition::new(alloc::vec![a]), Err(BorelError::NotCovering { .. })));
    }

    #[test]
    fn swap_transport_example() {
        let a = MeasurablePartition::consecutive(&[rat(1, 3), rat(2, 3)]).unwrap();
        let v = iv((0, 1), (1, 6));
        let w = iv((1, 3), (1, 2));
        let t = a.swap_transport(&v, &w).unwrap();
        assert_eq!(t.blocks()[0], iv((1, 6), (1, 2)));
        assert_eq!(t.blocks()[1], iv((0, 1), (1, 6)).union(&iv((1, 2), (1, 1))));
        assert_eq!(t.measures(), alloc::vec![rat(1, 3), rat(2, 3)]);
        assert_eq!(a.swap_transport(&IntervalSet::empty(), &IntervalSet::empty()).unwrap(), a);
    }

    #[test]
    fn swap_transport_errors() {
        let a = MeasurablePartition::consecutive(&[rat(1, 3), rat(2, 3)]).unwrap();
        assert_eq!(a.swap_transport(&iv((1, 2), (2, 3)), &iv((1, 3), (1, 2))), Err(BorelError::NotNested));
        assert!(matches!(
            a.swap_transport(&iv((0, 1), (1, 6)), &iv((1, 3), (2, 3))),
            Err(BorelError::UnequalMeasure { .. })
        ));
        assert_eq!(
            MeasurablePartition::trivial().swap_transport(&IntervalSet::empty(), &IntervalSet::empty()),
            Err(BorelError::TooFewBlocks)
        );
    }

    fn dyadic_set() -> impl Strategy<Value = IntervalSet> {
        (0u32..=8).prop_flat_map(|level| {
            let n = 1u64 << level;
            proptest::collection::vec((0..n, 0..n), 0..5).prop_map(move |pairs| {
                let ivs = pairs
                    .into_iter()
                    .map(|(x, y)| {
                        let (a, b) = if x <= y { (x, y + 1) } else { (y, x + 1) };
                        (rat(a as i64, n as i64), rat(b as i64, n as i64))
                    })
                    .collect();
                IntervalSet::new(ivs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn inclusion_exclusion(a in dyadic_set(), b in dyadic_set()) {
            prop_assert_eq!(a.union(&b).measure() + a.intersect(&b).measure(), a.measure() + b.measure());
            prop_assert_eq!(a.complement().measure(), Rational::one() - a.measure());
            prop_assert_eq!(a.symmdiff(&b), a.union(&b).difference(&a.intersect(&b)));
        }

        #[test]
        fn swap_is_measure_preserving_involution(cut in 1i64..16, v0 in 0i64..16, w0 in 0i64..16, len in 0i64..4) {
            let n = 32;
            let a = MeasurablePartition::consecutive(&[rat(cut, 16), rat(16 - cut, 16)]).unwrap();
            let a1 = &a.blocks()[0];
            let a2 = &a.blocks()[1];
            let v = a1.intersect(&IntervalSet::interval(rat(v0, n), rat((v0 + len).min(n), n)));
            let w = a2.intersect(&IntervalSet::interval(rat(16 + w0, n), rat((16 + w0 + len).min(n), n)));
            prop_assume!(v.measure() == w.measure());
            let t = a.swap_transport(&v, &w).unwrap();
            prop_assert_eq!(t.measures(), a.measures());
            let back = MeasurablePartition::new(t.blocks().to_vec()).unwrap();
            let vt = w.clone();
            let wt = v.clone();
            prop_assert_eq!(back.swap_transport(&vt, &wt).unwrap(), a);
        }
    }
}
