//! Non-dominated archive and the Pareto fitness transform used to turn a
//! multi-objective trajectory score into one selectable scalar.
//!
//! All objectives are minimized. Points are normalized against the archive's
//! running bounds, so the utopia point maps to the origin. The fitness of a
//! point `p` is computed along the ray from the origin through `p̂`: for every
//! archived `â` the factor `t(â) = maxᵢ âᵢ / p̂ᵢ` is the smallest scale at which
//! `t·p̂` becomes weakly dominated by `â`. With `t_dom = min t(â)` the fitness
//! is `1 / t_dom`, which is `≥ 1` exactly when `p̂` is already weakly dominated
//! and `< 1` when `p` pushes the front outward.

use serde::{Deserialize, Serialize};

/// Guard used both as the normalization denominator offset and as the floor
/// applied to normalized coordinates before taking ratios.
pub const EPS: f64 = 1e-9;

/// Objective vector, every coordinate to be minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectivePoint(pub Vec<f64>);

impl ObjectivePoint {
    pub fn new(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| v.is_finite()), "objective values must be finite");
        Self(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for ObjectivePoint {
    fn from(v: Vec<f64>) -> Self {
        Self::new(v)
    }
}

/// `a` dominates `b`: no worse anywhere and strictly better somewhere.
pub fn dominates(a: &ObjectivePoint, b: &ObjectivePoint) -> bool {
    assert_eq!(a.dim(), b.dim(), "dominance between points of different dimension");
    let mut strict = false;
    for (x, y) in a.0.iter().zip(&b.0) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

fn weakly_dominates(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoArchive {
    points: Vec<ObjectivePoint>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ParetoArchive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a ObjectivePoint>) -> Self {
        let mut archive = Self::new();
        for p in points {
            archive.insert(p.clone());
        }
        archive
    }

    pub fn points(&self) -> &[ObjectivePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Running per-dimension `(lower, upper)` over every inserted point, or
    /// `None` before the first insertion.
    pub fn bounds(&self) -> Option<(&[f64], &[f64])> {
        (!self.lower.is_empty()).then_some((&self.lower[..], &self.upper[..]))
    }

    /// Overrides the normalization bounds.
    pub fn set_bounds(&mut self, lower: Vec<f64>, upper: Vec<f64>) {
        assert_eq!(lower.len(), upper.len());
        self.lower = lower;
        self.upper = upper;
    }

    /// Adds `p` unless an archived point weakly dominates it, evicting the
    /// points `p` dominates. Bounds track every point ever offered.
    pub fn insert(&mut self, p: ObjectivePoint) -> bool {
        if self.lower.is_empty() {
            self.lower = p.0.clone();
            self.upper = p.0.clone();
        } else {
            assert_eq!(p.dim(), self.lower.len(), "point dimension does not match archive");
            for (i, v) in p.0.iter().enumerate() {
                self.lower[i] = self.lower[i].min(*v);
                self.upper[i] = self.upper[i].max(*v);
            }
        }
        if self.points.iter().any(|a| weakly_dominates(&a.0, &p.0)) {
            return false;
        }
        self.points.retain(|a| !dominates(&p, a));
        self.points.push(p);
        true
    }

    /// Per-dimension `(v - lower) / (upper - lower + ε)`, clamped at zero.
    pub fn normalize(&self, p: &ObjectivePoint) -> ObjectivePoint {
        let (lo, hi) = self.bounds().expect("normalize called before any insertion");
        assert_eq!(p.dim(), lo.len(), "point dimension does not match archive");
        ObjectivePoint(
            p.0.iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (l, h))| ((v - l) / (h - l + EPS)).max(0.0))
                .collect(),
        )
    }

    fn normalized_floored(&self, p: &ObjectivePoint) -> Vec<f64> {
        self.normalize(p).0.into_iter().map(|v| v.max(EPS)).collect()
    }

    /// Pareto transform fitness of `p` relative to this archive (minimize).
    pub fn fitness(&self, p: &ObjectivePoint) -> f64 {
        assert!(!self.is_empty(), "fitness against an empty archive");
        let floored: Vec<Vec<f64>> = self.points.iter().map(|a| self.normalized_floored(a)).collect();
        fitness_against(&floored, &self.normalized_floored(p))
    }
}

fn fitness_against(archive: &[Vec<f64>], p: &[f64]) -> f64 {
    let t_dom = archive
        .iter()
        .map(|a| a.iter().zip(p).map(|(ai, pi)| ai / pi).fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::INFINITY, f64::min);
    1.0 / t_dom
}

pub fn archive_insert(mut archive: ParetoArchive, p: ObjectivePoint) -> ParetoArchive {
    archive.insert(p);
    archive
}

pub fn normalize(archive: &ParetoArchive, p: &ObjectivePoint) -> ObjectivePoint {
    archive.normalize(p)
}

pub fn paccet_fitness(archive: &ParetoArchive, p: &ObjectivePoint) -> f64 {
    archive.fitness(p)
}

/// Scores produced by [`select_best`] for every candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub index: usize,
    pub fitness: Vec<f64>,
    /// Largest normalized coordinate (Chebyshev distance to the utopia point).
    pub spread: Vec<f64>,
}

/// Picks the candidate with the lowest transform fitness against an archive
/// built from all candidates.
///
/// Every non-dominated candidate sits on that archive and so scores exactly
/// 1; among those the one closest to the utopia point in the Chebyshev sense
/// wins (this is what reaches knee points a weighted sum cannot). Remaining
/// ties go to the sum of normalized coordinates, then `tie_break_cost`, then
/// the lowest index.
pub fn select_best(candidates: &[ObjectivePoint], tie_break_cost: &[f64]) -> Selection {
    assert!(!candidates.is_empty(), "select_best needs at least one candidate");
    assert_eq!(candidates.len(), tie_break_cost.len());
    let archive = ParetoArchive::from_points(candidates);
    let front: Vec<Vec<f64>> = archive.points().iter().map(|a| archive.normalized_floored(a)).collect();
    let mut fitness = Vec::with_capacity(candidates.len());
    let mut spread = Vec::with_capacity(candidates.len());
    let mut total = Vec::with_capacity(candidates.len());
    for c in candidates {
        let n = archive.normalize(c);
        let floored: Vec<f64> = n.0.iter().map(|v| v.max(EPS)).collect();
        fitness.push(fitness_against(&front, &floored));
        spread.push(n.0.iter().copied().fold(0.0, f64::max));
        total.push(n.0.iter().sum::<f64>());
    }
    let index = (0..candidates.len())
        .min_by(|&a, &b| {
            fitness[a]
                .total_cmp(&fitness[b])
                .then(spread[a].total_cmp(&spread[b]))
                .then(total[a].total_cmp(&total[b]))
                .then(tie_break_cost[a].total_cmp(&tie_break_cost[b]))
                .then(a.cmp(&b))
        })
        .unwrap();
    Selection { index, fitness, spread }
}

/// Weighted-sum selector over raw objective values; ties go to the lowest index.
pub fn select_weighted_sum(candidates: &[ObjectivePoint], weights: &[f64]) -> usize {
    assert!(!candidates.is_empty());
    let score = |p: &ObjectivePoint| -> f64 { p.0.iter().zip(weights).map(|(v, w)| v * w).sum() };
    (0..candidates.len())
        .min_by(|&a, &b| score(&candidates[a]).total_cmp(&score(&candidates[b])).then(a.cmp(&b)))
        .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> ObjectivePoint {
        ObjectivePoint::new(v.to_vec())
    }

    #[test]
    fn dominance_examples() {
        assert!(dominates(&pt(&[1.0, 2.0]), &pt(&[2.0, 3.0])));
        assert!(!dominates(&pt(&[1.0, 3.0]), &pt(&[3.0, 1.0])));
        assert!(!dominates(&pt(&[1.0, 2.0]), &pt(&[1.0, 2.0])));
    }

    #[test]
    #[should_panic]
    fn dominance_dimension_mismatch_panics() {
        dominates(&pt(&[1.0]), &pt(&[1.0, 2.0]));
    }

    #[test]
    fn insertion_examples() {
        let a = ParetoArchive::from_points(&[pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]);
        let a2 = archive_insert(a.clone(), pt(&[0.5, 0.5]));
        assert_eq!(a2.len(), 3);
        let a3 = archive_insert(a, pt(&[0.0, 0.0]));
        assert_eq!(a3.points(), &[pt(&[0.0, 0.0])]);

        let b = archive_insert(ParetoArchive::from_points(&[pt(&[1.0, 1.0])]), pt(&[2.0, 2.0]));
        assert_eq!(b.points(), &[pt(&[1.0, 1.0])]);
        assert_eq!(b.bounds().unwrap().1, &[2.0, 2.0]);
    }

    #[test]
    fn duplicate_is_not_archived_twice() {
        let a = ParetoArchive::from_points(&[pt(&[1.0, 0.0]), pt(&[1.0, 0.0])]);
        assert_eq!(a.len(), 1);
    }

    #[test]
    fn normalize_examples() {
        let mut a = ParetoArchive::from_points(&[pt(&[0.0, 0.0])]);
        a.set_bounds(vec![0.0, 0.0], vec![2.0, 4.0]);
        let n = a.normalize(&pt(&[1.0, 2.0]));
        assert!((n.0[0] - 0.5).abs() < 1e-9 && (n.0[1] - 0.5).abs() < 1e-9);
        assert_eq!(a.normalize(&pt(&[0.0, 0.0])).0, vec![0.0, 0.0]);

        let degenerate = ParetoArchive::from_points(&[pt(&[3.0])]);
        assert_eq!(degenerate.normalize(&pt(&[3.0])).0, vec![0.0]);
    }

    #[test]
    #[should_panic]
    fn normalize_without_bounds_panics() {
        ParetoArchive::new().normalize(&pt(&[1.0]));
    }

    #[test]
    #[should_panic]
    fn fitness_on_empty_archive_panics() {
        ParetoArchive::new().fitness(&pt(&[1.0]));
    }

    #[test]
    fn fitness_hand_evaluated() {
        // t(â) = max(1 / 0.25, ε / 0.25) = 4 for both archived extremes
        let mut a = ParetoArchive::from_points(&[pt(&[1.0, 0.0]), pt(&[0.0, 1.0])]);
        a.set_bounds(vec![0.0, 0.0], vec![1.0, 1.0]);
        assert!((a.fitness(&pt(&[0.25, 0.25])) - 0.25).abs() < 1e-12);

        let mut b = ParetoArchive::from_points(&[pt(&[1.0, 1.0])]);
        b.set_bounds(vec![0.0, 0.0], vec![2.0, 2.0]);
        assert!((b.fitness(&pt(&[2.0, 2.0])) - 2.0).abs() < 1e-12);

        assert_eq!(a.fitness(&pt(&[1.0, 0.0])), 1.0);
        assert_eq!(b.fitness(&pt(&[1.0, 1.0])), 1.0);
    }

    #[test]
    fn select_best_examples() {
        assert_eq!(select_best(&[pt(&[3.0, 1.0])], &[0.0]).index, 0);
        let c = [pt(&[2.0, 2.0]), pt(&[1.0, 1.0]), pt(&[3.0, 1.5])];
        assert_eq!(select_best(&c, &[0.0; 3]).index, 1);
    }

    #[test]
    fn knee_beats_extremes() {
        let c = [pt(&[0.0, 1.0]), pt(&[1.0, 0.0]), pt(&[0.4, 0.4]), pt(&[0.9, 0.9])];
        let s = select_best(&c, &[0.0, 1.0, 0.4, 0.9]);
        assert_eq!(s.index, 2);
        assert_eq!(&s.fitness[..3], &[1.0, 1.0, 1.0]);
        assert!(s.fitness[3] > 1.0);
        assert_eq!(select_weighted_sum(&c, &[1.0, 0.0]), 0);
        assert_eq!(select_weighted_sum(&c, &[0.0, 1.0]), 1);
    }

    #[test]
    fn single_objective_reduces_to_argmin() {
        let vals = [5.0, 1.0, 3.0, 1.0 + 1e-12, 7.0];
        let c: Vec<_> = vals.iter().map(|v| pt(&[*v])).collect();
        assert_eq!(select_best(&c, &vals).index, 1);
    }
}
