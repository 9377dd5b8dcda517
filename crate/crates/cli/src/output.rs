//! CSV files written by the studies: UTF-8, comma separated, LF line
//! endings, header first, reals with 10 significant digits.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use fresa::{format_real, Genotype, RunRecord, TemperatureProfile};

use crate::error::{CliError, Result};
use crate::study::RunSummary;

pub const SUMMARY_FILE: &str = "summary.csv";
pub const POPULATION_FILE: &str = "population.csv";
pub const PARETO_FILE: &str = "pareto.csv";

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn finish(path: &Path, mut w: csv::Writer<File>) -> Result<()> {
    w.flush().map_err(|e| CliError::io(path, e))
}

/// One row per point per generation, ordered by run, generation and
/// position in the population.
pub fn emit_population_csv(records: &[(usize, &RunRecord<TemperatureProfile>)], path: &Path) -> Result<()> {
    let arity = records
        .iter()
        .flat_map(|(_, r)| r.snapshots.first())
        .flat_map(|s| s.points.first())
        .map(|p| p.objectives.len())
        .next()
        .ok_or_else(|| CliError::usage("no population snapshots recorded"))?;

    let mut w = writer(path)?;
    let mut header = vec!["run".to_owned(), "generation".into(), "representation".into(), "genotype".into()];
    header.extend((1..=arity).map(|k| format!("obj{k}")));
    header.push("fitness".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;

    for (run, record) in records {
        for snapshot in &record.snapshots {
            for point in &snapshot.points {
                let mut row = vec![
                    run.to_string(),
                    snapshot.generation.to_string(),
                    point.genotype.tag().to_owned(),
                    point.genotype.encode(),
                ];
                row.extend(point.objectives.iter().map(|&z| format_real(z)));
                row.push(format_real(point.fitness));
                w.write_record(&row).map_err(|e| csv_error(path, e))?;
            }
        }
    }
    finish(path, w)
}

/// Single-objective summary mirroring the repeat-study table: final
/// representation, generation of permanent homogeneity and best `C_B(1)`.
pub fn write_single_summary(summaries: &[RunSummary], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["run", "final_representation", "homogeneous_generation", "best_found"])
        .map_err(|e| csv_error(path, e))?;
    for s in summaries {
        w.write_record([
            s.run.to_string(),
            s.final_representation.clone(),
            s.homogeneous_generation.map(|g| g.to_string()).unwrap_or_default(),
            format_real(s.best_objectives[0]),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(path, w)
}

/// Multi-objective summary: front size and its extent in `C_B(1)` and `C_C(1)`.
pub fn write_multi_summary(summaries: &[RunSummary], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["run", "final_representation", "homogeneous_generation", "front_size", "max_c_b", "min_c_c"])
        .map_err(|e| csv_error(path, e))?;
    for s in summaries {
        w.write_record([
            s.run.to_string(),
            s.final_representation.clone(),
            s.homogeneous_generation.map(|g| g.to_string()).unwrap_or_default(),
            s.front.len().to_string(),
            format_real(s.best_objectives[0]),
            format_real(s.best_objectives[1]),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    finish(path, w)
}

/// Final non-dominated set of every run with `C_B(1)` and `C_C(1)` in
/// physical (not negated) form.
pub fn write_pareto_csv(summaries: &[RunSummary], path: &Path) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(["run", "representation", "genotype", "c_b", "c_c"]).map_err(|e| csv_error(path, e))?;
    for s in summaries {
        for point in &s.front {
            w.write_record([
                s.run.to_string(),
                point.genotype.tag().to_owned(),
                point.genotype.encode(),
                format_real(point.c_b),
                format_real(point.c_c),
            ])
            .map_err(|e| csv_error(path, e))?;
        }
    }
    finish(path, w)
}

/// Prints a fixed-width table of the summaries.
pub fn print_summary(out: &mut impl Write, summaries: &[RunSummary], multi: bool) -> std::io::Result<()> {
    if multi {
        writeln!(
            out,
            "{:>4}  {:<17} {:>11}  {:>5}  {:>8}  {:>8}",
            "run", "final", "homogeneous", "front", "max C_B", "min C_C"
        )?;
    } else {
        writeln!(out, "{:>4}  {:<17} {:>11}  {:>10}", "run", "final", "homogeneous", "best C_B")?;
    }
    for s in summaries {
        let homogeneous = s.homogeneous_generation.map_or_else(|| "-".to_owned(), |g| g.to_string());
        if multi {
            writeln!(
                out,
                "{:>4}  {:<17} {:>11}  {:>5}  {:>8.4}  {:>8.4}",
                s.run,
                s.final_representation,
                homogeneous,
                s.front.len(),
                s.best_objectives[0],
                s.best_objectives[1]
            )?;
            let mut counts = std::collections::BTreeMap::new();
            for p in &s.front {
                *counts.entry(p.genotype.tag()).or_insert(0usize) += 1;
            }
            let counts: Vec<String> = counts.iter().map(|(tag, n)| format!("{tag}: {n}")).collect();
            writeln!(out, "      front by representation: {}", counts.join(", "))?;
        } else {
            writeln!(
                out,
                "{:>4}  {:<17} {:>11}  {:>10.4}",
                s.run, s.final_representation, homogeneous, s.best_objectives[0]
            )?;
        }
    }
    Ok(())
}
