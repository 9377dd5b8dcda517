//! Points in the search space and the generic machinery the solver needs
//! from a representation.
//!
//! The solver never inspects a genotype directly. Everything it needs is
//! exposed through [`Genotype`]: a label, a flat view of the decision
//! variables and a way to rebuild a point of the same shape. Populations may
//! therefore mix representations freely, as long as they share one genotype
//! type (typically an enum over the concrete representations).

use rand::Rng;

use crate::error::{Error, Result};

/// A solution encoding that can take part in plant propagation.
pub trait Genotype: Clone + Send + Sync {
    /// Label of the representation this point uses.
    fn tag(&self) -> &'static str;

    /// Decision variables as a flat vector, in a fixed order.
    fn coordinates(&self) -> Vec<f64>;

    /// A point of the same representation carrying `coords`.
    ///
    /// `coords` always has the length returned by [`Genotype::coordinates`].
    fn with_coordinates(&self, coords: &[f64]) -> Self;

    /// Creates a runner from this point.
    ///
    /// Every coordinate moves by `(2u - 1) * (upper - lower) * (1 - fitness)`
    /// with an independent `u ~ U(0, 1)`, then is clamped back into the
    /// domain. Fit points take short steps, unfit points long ones.
    fn neighbour<R: Rng + ?Sized>(&self, fitness: f64, domain: &Domain<Self>, rng: &mut R) -> Self {
        let lower = domain.lower(self).coordinates();
        let upper = domain.upper(self).coordinates();
        let scale = 1.0 - fitness;
        let moved: Vec<f64> = self
            .coordinates()
            .iter()
            .zip(lower.iter().zip(&upper))
            .map(|(&x, (&lo, &hi))| {
                let u: f64 = rng.gen();
                (x + (2.0 * u - 1.0) * (hi - lo) * scale).clamp(lo, hi)
            })
            .collect();
        self.with_coordinates(&moved)
    }
}

type BoundFn<G> = Box<dyn Fn(&G) -> G + Send + Sync>;

/// Search domain given as a pair of functions returning the lower and upper
/// bound for a particular point, so each representation brings its own box.
pub struct Domain<G> {
    lower: BoundFn<G>,
    upper: BoundFn<G>,
}

impl<G: Genotype> Domain<G> {
    pub fn new(
        lower: impl Fn(&G) -> G + Send + Sync + 'static,
        upper: impl Fn(&G) -> G + Send + Sync + 'static,
    ) -> Self {
        Self { lower: Box::new(lower), upper: Box::new(upper) }
    }

    pub fn lower(&self, point: &G) -> G {
        (self.lower)(point)
    }

    pub fn upper(&self, point: &G) -> G {
        (self.upper)(point)
    }

    pub fn contains(&self, point: &G) -> bool {
        let lower = self.lower(point).coordinates();
        let upper = self.upper(point).coordinates();
        point.coordinates().iter().zip(lower.iter().zip(&upper)).all(|(x, (lo, hi))| lo <= x && x <= hi)
    }
}

impl<G> std::fmt::Debug for Domain<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("Domain { .. }")
    }
}

/// Objective values (all minimised) and constraint violation of one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    /// Zero when feasible, positive otherwise.
    pub constraint: f64,
}

impl Evaluation {
    pub fn new(objectives: Vec<f64>, constraint: f64) -> Self {
        Self { objectives, constraint }
    }
}

/// Something that can score genotypes of type `G`.
///
/// Evaluations must be pure: the solver may call them from several threads
/// at once and in any order.
pub trait Objective<G>: Sync {
    fn evaluate(&self, genotype: &G) -> Result<Evaluation>;
}

impl<G, F> Objective<G> for F
where
    F: Fn(&G) -> Result<Evaluation> + Sync,
{
    fn evaluate(&self, genotype: &G) -> Result<Evaluation> {
        self(genotype)
    }
}

/// A genotype together with its (immutable) evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePoint<G> {
    genotype: G,
    objectives: Vec<f64>,
    constraint: f64,
    generation: usize,
}

impl<G: Genotype> CandidatePoint<G> {
    /// Evaluates `genotype` once and wraps the result.
    pub fn evaluate<O: Objective<G> + ?Sized>(genotype: G, objective: &O, generation: usize) -> Result<Self> {
        let evaluation = objective.evaluate(&genotype)?;
        Ok(Self::from_evaluation(genotype, evaluation, generation))
    }

    /// Non-finite objective values or a NaN violation make the point
    /// infeasible with infinite violation, so it ranks last.
    pub fn from_evaluation(genotype: G, evaluation: Evaluation, generation: usize) -> Self {
        let Evaluation { objectives, constraint } = evaluation;
        let constraint = if objectives.iter().all(|z| z.is_finite()) && !constraint.is_nan() {
            constraint.max(0.0)
        } else {
            f64::INFINITY
        };
        Self { genotype, objectives, constraint, generation }
    }

    pub fn genotype(&self) -> &G {
        &self.genotype
    }

    pub fn objectives(&self) -> &[f64] {
        &self.objectives
    }

    pub fn constraint(&self) -> f64 {
        self.constraint
    }

    pub fn is_feasible(&self) -> bool {
        self.constraint == 0.0
    }

    /// Generation in which the point was created (0 for the initial population).
    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn tag(&self) -> &'static str {
        self.genotype.tag()
    }
}

/// An ordered, non-empty set of points sharing one objective arity.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<G> {
    points: Vec<CandidatePoint<G>>,
}

impl<G: Genotype> Population<G> {
    pub fn new(points: Vec<CandidatePoint<G>>) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyPopulation)?;
        let expected = first.objectives.len();
        if let Some(p) = points.iter().find(|p| p.objectives.len() != expected) {
            return Err(Error::ArityMismatch { expected, found: p.objectives.len() });
        }
        Ok(Self { points })
    }

    /// Evaluates each genotype as a member of the initial population.
    pub fn evaluate<O: Objective<G> + ?Sized>(genotypes: Vec<G>, objective: &O) -> Result<Self> {
        let points =
            genotypes.into_iter().map(|g| CandidatePoint::evaluate(g, objective, 0)).collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[CandidatePoint<G>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.points[0].objectives.len()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CandidatePoint<G>> {
        self.points.iter()
    }

    pub fn objectives(&self) -> Vec<Vec<f64>> {
        self.points.iter().map(|p| p.objectives.clone()).collect()
    }

    pub fn constraints(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.constraint).collect()
    }

    pub fn into_points(self) -> Vec<CandidatePoint<G>> {
        self.points
    }
}

impl<G> std::ops::Index<usize> for Population<G> {
    type Output = CandidatePoint<G>;

    fn index(&self, index: usize) -> &Self::Output {
        &self.points[index]
    }
}
