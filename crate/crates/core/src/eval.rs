//! Batch evaluation of new genotypes.
//!
//! Evaluations are independent and pure, so with the `parallel` feature
//! they run on the rayon pool. Results keep input order either way, which
//! is what makes parallel and sequential runs agree bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::point::{CandidatePoint, Genotype, Objective};

/// Evaluates `genotypes` in order, tagging each with `generation`.
///
/// `parallel` is a request: without the `parallel` feature everything runs
/// on the calling thread.
pub fn evaluate_batch<G, O>(
    genotypes: Vec<G>,
    objective: &O,
    generation: usize,
    parallel: bool,
) -> Result<Vec<CandidatePoint<G>>>
where
    G: Genotype,
    O: Objective<G> + ?Sized,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return genotypes.into_par_iter().map(|g| CandidatePoint::evaluate(g, objective, generation)).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;

    genotypes.into_iter().map(|g| CandidatePoint::evaluate(g, objective, generation)).collect()
}

/// Runs `job` for each index, in parallel when requested and available.
/// Output order follows the indices.
pub fn map_indices<T, F>(count: usize, parallel: bool, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel {
        return (0..count).into_par_iter().map(job).collect();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;

    (0..count).map(job).collect()
}
