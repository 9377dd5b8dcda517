//! Fitness assignment.
//!
//! Every scheme maps a population's objective vectors (minimised) to one
//! value per point strictly inside (0, 1), higher meaning fitter. Feasible
//! points land in `[0.01, 0.99]`; infeasible points are squeezed into
//! `[0.001, 0.009]` by ascending violation so that any feasible point
//! outranks any infeasible one.
//!
//! The multi-objective schemes only look at per-criterion orderings, so they
//! are unaffected by monotone transforms of any single criterion.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const FEASIBLE_LOW: f64 = 0.01;
const FEASIBLE_HIGH: f64 = 0.99;
const INFEASIBLE_LOW: f64 = 0.001;
const INFEASIBLE_HIGH: f64 = 0.009;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FitnessScheme {
    /// Linear rescale of a single objective.
    #[default]
    Single,
    /// Front index from recursive non-dominated sorting.
    NonDominated,
    /// Product of per-criterion ranks.
    Hadamard,
    /// Sum of per-criterion ranks.
    Borda,
}

impl FitnessScheme {
    pub const ALL: [FitnessScheme; 4] = [Self::Single, Self::NonDominated, Self::Hadamard, Self::Borda];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Single => "single",
            Self::NonDominated => "nondominated",
            Self::Hadamard => "hadamard",
            Self::Borda => "borda",
        }
    }

    pub fn is_multi_objective(self) -> bool {
        self != Self::Single
    }

    pub(crate) fn check_arity(self, arity: usize) -> Result<()> {
        let ok = match self {
            Self::Single => arity == 1,
            _ => arity >= 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::SchemeArity { scheme: self.as_str(), arity })
        }
    }
}

impl fmt::Display for FitnessScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FitnessScheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|scheme| scheme.as_str() == s)
            .ok_or_else(|| format!("unknown fitness scheme `{s}` (expected single, nondominated, hadamard or borda)"))
    }
}

/// One fitness value per population member, each strictly inside (0, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessAssignment {
    values: Vec<f64>,
}

impl FitnessAssignment {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, index: usize) -> f64 {
        self.values[index]
    }
}

/// Ranks of one criterion, 1 = best. Ties share the lowest rank of their
/// block (competition ranking), e.g. `[2, 1, 2, 3] -> [2, 1, 2, 4]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    ranks: Vec<usize>,
}

impl RankVector {
    pub fn from_values(values: &[f64]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut ranks = vec![0; values.len()];
        for (pos, &idx) in order.iter().enumerate() {
            ranks[idx] = if pos > 0 && values[order[pos - 1]] == values[idx] { ranks[order[pos - 1]] } else { pos + 1 };
        }
        Self { ranks }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }
}

/// `a` dominates `b` when it is no worse in every criterion and strictly
/// better in at least one.
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strictly = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        strictly |= x < y;
    }
    strictly
}

/// Partitions the points into successive non-dominated fronts.
///
/// Front 0 is the non-dominated set of all points, front `k` the
/// non-dominated set once fronts `0..k` are removed. Indices inside a front
/// are ascending.
pub fn nondominated_fronts(objectives: &[Vec<f64>]) -> Vec<Vec<usize>> {
    let n = objectives.len();
    let mut dominated_by = vec![0usize; n];
    let mut dominating: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            if dominates(&objectives[i], &objectives[j]) {
                dominating[i].push(j);
                dominated_by[j] += 1;
            } else if dominates(&objectives[j], &objectives[i]) {
                dominating[j].push(i);
                dominated_by[i] += 1;
            }
        }
    }

    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_by[i] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &i in &current {
            for &j in &dominating[i] {
                dominated_by[j] -= 1;
                if dominated_by[j] == 0 {
                    next.push(j);
                }
            }
        }
        next.sort_unstable();
        fronts.push(current);
        current = next;
    }
    fronts
}

/// Indices of the non-dominated points. Identical points do not dominate
/// each other, so duplicates on the front are all kept.
pub fn pareto_filter(objectives: &[Vec<f64>]) -> Vec<usize> {
    (0..objectives.len()).filter(|&i| !objectives.iter().any(|other| dominates(other, &objectives[i]))).collect()
}

fn is_feasible(objectives: &[f64], constraint: f64) -> bool {
    constraint == 0.0 && objectives.iter().all(|z| z.is_finite())
}

/// Maps scores (lower is better) linearly onto `[low, high]`; all-equal
/// scores land on the midpoint.
fn rescale(scores: &[f64], low: f64, high: f64) -> Vec<f64> {
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    scores
        .iter()
        .map(|&s| {
            let raw = if max > min { (max - s) / (max - min) } else { 0.5 };
            (low + (high - low) * raw).clamp(low, high)
        })
        .collect()
}

/// Scores every feasible point with `score_feasible` (lower is better, given
/// the objective vectors of the feasible subset) and fills in the infeasible
/// band.
fn assign_with(
    objectives: &[Vec<f64>],
    constraints: &[f64],
    score_feasible: impl FnOnce(&[Vec<f64>]) -> Vec<f64>,
) -> Result<FitnessAssignment> {
    if objectives.is_empty() {
        return Err(Error::EmptyPopulation);
    }
    if objectives.len() != constraints.len() {
        return Err(Error::FitnessLength { fitness: constraints.len(), population: objectives.len() });
    }

    let (feasible, infeasible): (Vec<usize>, Vec<usize>) =
        (0..objectives.len()).partition(|&i| is_feasible(&objectives[i], constraints[i]));

    let mut values = vec![0.0; objectives.len()];

    if !feasible.is_empty() {
        let subset: Vec<Vec<f64>> = feasible.iter().map(|&i| objectives[i].clone()).collect();
        let scores = score_feasible(&subset);
        for (&i, f) in feasible.iter().zip(rescale(&scores, FEASIBLE_LOW, FEASIBLE_HIGH)) {
            values[i] = f;
        }
    }

    if !infeasible.is_empty() {
        let violations: Vec<f64> = infeasible.iter().map(|&i| constraints[i]).collect();
        let ranks: Vec<f64> = RankVector::from_values(&violations).ranks().iter().map(|&r| r as f64).collect();
        for (&i, f) in infeasible.iter().zip(rescale(&ranks, INFEASIBLE_LOW, INFEASIBLE_HIGH)) {
            values[i] = f;
        }
    }

    Ok(FitnessAssignment { values })
}

fn criterion_ranks(objectives: &[Vec<f64>]) -> Vec<RankVector> {
    let arity = objectives.first().map_or(0, Vec::len);
    (0..arity)
        .map(|c| {
            let column: Vec<f64> = objectives.iter().map(|z| z[c]).collect();
            RankVector::from_values(&column)
        })
        .collect()
}

/// Ranks the per-point aggregate scores and rescales the ranks.
fn aggregate_ranks(objectives: &[Vec<f64>], combine: impl Fn(f64, f64) -> f64, unit: f64) -> Vec<f64> {
    let per_criterion = criterion_ranks(objectives);
    let scores: Vec<f64> = (0..objectives.len())
        .map(|j| per_criterion.iter().fold(unit, |acc, r| combine(acc, r.ranks()[j] as f64)))
        .collect();
    RankVector::from_values(&scores).ranks().iter().map(|&r| r as f64).collect()
}

fn check_uniform_arity(objectives: &[Vec<f64>], scheme: FitnessScheme) -> Result<()> {
    let arity = objectives.first().map(Vec::len).ok_or(Error::EmptyPopulation)?;
    if let Some(z) = objectives.iter().find(|z| z.len() != arity) {
        return Err(Error::ArityMismatch { expected: arity, found: z.len() });
    }
    scheme.check_arity(arity)
}

/// Single-objective fitness: `(z_max - z) / (z_max - z_min)` over the
/// feasible points, rescaled into `[0.01, 0.99]`.
pub fn single_fitness(objectives: &[f64], constraints: &[f64]) -> Result<FitnessAssignment> {
    let wrapped: Vec<Vec<f64>> = objectives.iter().map(|&z| vec![z]).collect();
    assign_with(&wrapped, constraints, |feasible| feasible.iter().map(|z| z[0]).collect())
}

pub fn nondominated_fitness(objectives: &[Vec<f64>], constraints: &[f64]) -> Result<FitnessAssignment> {
    check_uniform_arity(objectives, FitnessScheme::NonDominated)?;
    assign_with(objectives, constraints, |feasible| {
        let mut scores = vec![0.0; feasible.len()];
        for (k, front) in nondominated_fronts(feasible).iter().enumerate() {
            for &i in front {
                scores[i] = (k + 1) as f64;
            }
        }
        scores
    })
}

/// Rank-product fitness, which favours points near the ends of the front.
pub fn hadamard_fitness(objectives: &[Vec<f64>], constraints: &[f64]) -> Result<FitnessAssignment> {
    check_uniform_arity(objectives, FitnessScheme::Hadamard)?;
    assign_with(objectives, constraints, |feasible| aggregate_ranks(feasible, |a, b| a * b, 1.0))
}

/// Rank-sum fitness.
pub fn borda_fitness(objectives: &[Vec<f64>], constraints: &[f64]) -> Result<FitnessAssignment> {
    check_uniform_arity(objectives, FitnessScheme::Borda)?;
    assign_with(objectives, constraints, |feasible| aggregate_ranks(feasible, |a, b| a + b, 0.0))
}

/// Dispatches to the scheme's fitness function.
pub fn assign(scheme: FitnessScheme, objectives: &[Vec<f64>], constraints: &[f64]) -> Result<FitnessAssignment> {
    match scheme {
        FitnessScheme::Single => {
            check_uniform_arity(objectives, scheme)?;
            let flat: Vec<f64> = objectives.iter().map(|z| z[0]).collect();
            single_fitness(&flat, constraints)
        }
        FitnessScheme::NonDominated => nondominated_fitness(objectives, constraints),
        FitnessScheme::Hadamard => hadamard_fitness(objectives, constraints),
        FitnessScheme::Borda => borda_fitness(objectives, constraints),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn feasible(n: usize) -> Vec<f64> {
        vec![0.0; n]
    }

    fn pts(v: &[(f64, f64)]) -> Vec<Vec<f64>> {
        v.iter().map(|&(a, b)| vec![a, b]).collect()
    }

    #[test]
    fn competition_ranks_share_lowest_rank() {
        assert_eq!(RankVector::from_values(&[2.0, 1.0, 2.0, 3.0]).ranks(), &[2, 1, 2, 4]);
        assert_eq!(RankVector::from_values(&[5.0, 4.0, 3.0]).ranks(), &[3, 2, 1]);
    }

    #[test]
    fn single_fitness_linear_rescale() {
        let f = single_fitness(&[3.0, 1.0, 2.0], &feasible(3)).unwrap();
        for (got, want) in f.values().iter().zip([0.01, 0.99, 0.50]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn single_fitness_equal_objectives_is_half() {
        let f = single_fitness(&[5.0, 5.0], &feasible(2)).unwrap();
        assert_eq!(f.values(), &[0.5, 0.5]);
    }

    #[test]
    fn feasible_outranks_infeasible_regardless_of_objective() {
        let f = single_fitness(&[1.0, 2.0], &[0.0, 1.0]).unwrap();
        assert!(f.get(0) > f.get(1));
        let f = single_fitness(&[10.0, -100.0], &[0.0, 1.0]).unwrap();
        assert!(f.get(0) > f.get(1));
    }

    #[test]
    fn infeasible_band_orders_by_violation() {
        let f = single_fitness(&[0.0, 0.0, 0.0, 7.0], &[3.0, 0.5, f64::INFINITY, 0.0]).unwrap();
        assert!(f.get(1) > f.get(0) && f.get(0) > f.get(2));
        for &v in &f.values()[..3] {
            assert!((INFEASIBLE_LOW..=INFEASIBLE_HIGH).contains(&v));
        }
        assert_abs_diff_eq!(f.get(3), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn single_fitness_rejects_empty_input() {
        assert_eq!(single_fitness(&[], &[]), Err(Error::EmptyPopulation));
    }

    #[test]
    fn fronts_of_small_example() {
        let z = pts(&[(0.0, 0.0), (1.0, 1.0), (0.0, 2.0)]);
        assert_eq!(nondominated_fronts(&z), vec![vec![0], vec![1, 2]]);
        assert_eq!(nondominated_fronts(&pts(&[(4.0, 2.0)])), vec![vec![0]]);
    }

    #[test]
    fn pareto_filter_keeps_identical_points() {
        assert_eq!(pareto_filter(&pts(&[(0.0, 0.0), (1.0, 1.0)])), vec![0]);
        assert_eq!(pareto_filter(&pts(&[(2.0, 2.0); 4])), vec![0, 1, 2, 3]);
    }

    #[test]
    fn hadamard_rank_products() {
        let f = hadamard_fitness(&pts(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]), &feasible(3)).unwrap();
        assert!(f.get(0) > f.get(1) && f.get(2) > f.get(1));
        assert_eq!(f.get(0), f.get(2));

        let f = hadamard_fitness(&pts(&[(1.0, 1.0), (2.0, 2.0)]), &feasible(2)).unwrap();
        assert!(f.get(0) > f.get(1));

        let f = hadamard_fitness(&pts(&[(0.3, 0.4), (0.3, 0.4)]), &feasible(2)).unwrap();
        assert_eq!(f.get(0), f.get(1));
    }

    #[test]
    fn borda_rank_sums() {
        let f = borda_fitness(&pts(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]), &feasible(3)).unwrap();
        assert_eq!(f.values(), &[0.5, 0.5, 0.5]);

        let f = borda_fitness(&pts(&[(1.0, 1.0), (2.0, 2.0)]), &feasible(2)).unwrap();
        assert!(f.get(0) > f.get(1));
    }

    #[test]
    fn borda_ignores_criterion_order() {
        let z = pts(&[(1.0, 9.0), (4.0, 2.0), (3.0, 3.0), (0.5, 7.0)]);
        let swapped: Vec<Vec<f64>> = z.iter().map(|v| vec![v[1], v[0]]).collect();
        assert_eq!(borda_fitness(&z, &feasible(4)), borda_fitness(&swapped, &feasible(4)));
    }

    #[test]
    fn nondominated_fitness_by_front() {
        let f = nondominated_fitness(&pts(&[(0.0, 0.0), (1.0, 1.0), (0.0, 2.0)]), &feasible(3)).unwrap();
        assert!(f.get(0) > f.get(1));
        assert_eq!(f.get(1), f.get(2));

        let f = nondominated_fitness(&pts(&[(1.0, 3.0), (2.0, 2.0), (3.0, 1.0)]), &feasible(3)).unwrap();
        assert_eq!(f.values(), &[0.5, 0.5, 0.5]);
    }

    #[test]
    fn multi_schemes_need_two_criteria() {
        let z = vec![vec![1.0], vec![2.0]];
        assert!(matches!(hadamard_fitness(&z, &feasible(2)), Err(Error::SchemeArity { .. })));
        assert!(matches!(assign(FitnessScheme::Single, &pts(&[(1.0, 2.0)]), &[0.0]), Err(Error::SchemeArity { .. })));
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in FitnessScheme::ALL {
            assert_eq!(s.as_str().parse::<FitnessScheme>().unwrap(), s);
        }
        assert!("pareto".parse::<FitnessScheme>().is_err());
    }
}
