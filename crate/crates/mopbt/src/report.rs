//! Per-algorithm summary tables over a pooled archive: mean ± standard
//! deviation of each run's final hypervolume (×100) and, for two-objective
//! studies, of its front coverage (×100).

use std::io::Write as _;
use std::path::Path;

use mopbt_core::{
    compute_reference_point, coverage, hypervolume, pareto_filter, FrontArchive,
    DEFAULT_COVERAGE_DIVISIONS, REFERENCE_MARGIN,
};

use crate::archive::extend_archive;
use crate::runlog::read_events;
use crate::stats::{mean, sample_std};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub label: String,
    pub runs: usize,
    pub hv_mean_x100: f64,
    pub hv_std_x100: f64,
    /// Only for two-objective archives; the metric is undefined otherwise.
    pub coverage_mean_x100: Option<f64>,
    pub coverage_std_x100: Option<f64>,
}

/// Algorithm label of a run id: everything before the final `_s<seed>`
/// suffix, or the whole id when no such suffix exists.
pub fn algorithm_label(run_id: &str) -> &str {
    if let Some((prefix, suffix)) = run_id.rsplit_once("_s") {
        if !suffix.is_empty() && suffix.bytes().all(|b| b.is_ascii_digit()) {
            return prefix;
        }
    }
    run_id
}

/// Summarizes every algorithm in the archive, in label order. All runs
/// share one pooled reference point, so hypervolumes are comparable.
pub fn summarize(archive: &FrontArchive) -> Result<Vec<AlgorithmSummary>> {
    if archive.is_empty() {
        return Err(Error::Runtime("cannot summarize an empty archive".into()));
    }
    let r = compute_reference_point(archive, REFERENCE_MARGIN)?;
    let k = archive.entries()[0].objectives.len();

    let mut labels: Vec<String> = Vec::new();
    for run in archive.run_ids() {
        let label = algorithm_label(&run).to_owned();
        if !labels.contains(&label) {
            labels.push(label);
        }
    }
    labels.sort();

    let mut summaries = Vec::with_capacity(labels.len());
    for label in labels {
        let mut hvs = Vec::new();
        let mut covs = Vec::new();
        for run in archive.run_ids() {
            if algorithm_label(&run) != label {
                continue;
            }
            let points = archive.run_points(&run);
            let front = pareto_filter(&points)?;
            hvs.push(100.0 * hypervolume(&front, &r)?);
            if k == 2 {
                covs.push(100.0 * coverage(&points, &r, DEFAULT_COVERAGE_DIVISIONS)?);
            }
        }
        summaries.push(AlgorithmSummary {
            label,
            runs: hvs.len(),
            hv_mean_x100: mean(&hvs),
            hv_std_x100: sample_std(&hvs),
            coverage_mean_x100: (k == 2).then(|| mean(&covs)),
            coverage_std_x100: (k == 2).then(|| sample_std(&covs)),
        });
    }
    Ok(summaries)
}

/// Renders the summary as an aligned text table.
pub fn render_table(summaries: &[AlgorithmSummary]) -> String {
    let width = summaries.iter().map(|s| s.label.len()).max().unwrap_or(0).max("algorithm".len());
    let has_coverage = summaries.iter().any(|s| s.coverage_mean_x100.is_some());
    let mut out = String::new();
    out.push_str(&format!("{:width$}  runs  hv*100 (mean +/- std)", "algorithm"));
    if has_coverage {
        out.push_str("  coverage*100 (mean +/- std)");
    }
    out.push('\n');
    for s in summaries {
        out.push_str(&format!(
            "{:width$}  {:>4}  {:>8.2} +/- {:<8.2}",
            s.label, s.runs, s.hv_mean_x100, s.hv_std_x100
        ));
        if let (Some(cm), Some(cs)) = (s.coverage_mean_x100, s.coverage_std_x100) {
            out.push_str(&format!("  {cm:>8.2} +/- {cs:<8.2}"));
        }
        out.push('\n');
    }
    out
}

/// Writes the summary as CSV; coverage columns appear only when defined.
pub fn write_report_csv(path: &Path, summaries: &[AlgorithmSummary]) -> Result<()> {
    let has_coverage = summaries.iter().any(|s| s.coverage_mean_x100.is_some());
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    write!(out, "algorithm,runs,hv_mean_x100,hv_std_x100")?;
    if has_coverage {
        write!(out, ",coverage_mean_x100,coverage_std_x100")?;
    }
    writeln!(out)?;
    for s in summaries {
        write!(out, "{},{},{:.4},{:.4}", s.label, s.runs, s.hv_mean_x100, s.hv_std_x100)?;
        if let (Some(cm), Some(cs)) = (s.coverage_mean_x100, s.coverage_std_x100) {
            write!(out, ",{cm:.4},{cs:.4}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// Pools every `<run>/run.jsonl` under `out_dir` (subdirectory name = run
/// id), writes `report.csv` there, and returns the rendered table.
pub fn report_dir(out_dir: &Path) -> Result<String> {
    let mut run_dirs: Vec<String> = Vec::new();
    for entry in std::fs::read_dir(out_dir)? {
        let entry = entry?;
        if entry.path().join("run.jsonl").is_file() {
            run_dirs.push(entry.file_name().to_string_lossy().into_owned());
        }
    }
    if run_dirs.is_empty() {
        return Err(Error::Runtime(format!(
            "no <run>/run.jsonl files under {}",
            out_dir.display()
        )));
    }
    run_dirs.sort();

    let mut archive = FrontArchive::default();
    for run in &run_dirs {
        let events = read_events(&out_dir.join(run).join("run.jsonl"))?;
        extend_archive(&mut archive, run, &events)?;
    }
    let summaries = summarize(&archive)?;
    write_report_csv(&out_dir.join("report.csv"), &summaries)?;
    Ok(render_table(&summaries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use mopbt_core::{ArchiveEntry, ObjectiveVector};

    fn entry(run: &str, f: Vec<f64>) -> ArchiveEntry {
        ArchiveEntry {
            run: run.to_owned(),
            time_s: 1.0,
            step: 10,
            sol: 0,
            objectives: ObjectiveVector::new(f).unwrap(),
        }
    }

    #[test]
    fn labels_strip_seed_suffixes() {
        assert_eq!(algorithm_label("mo-pbt_s10"), "mo-pbt");
        assert_eq!(algorithm_label("a_s1_s2"), "a_s1");
        assert_eq!(algorithm_label("plain"), "plain");
        assert_eq!(algorithm_label("trailing_s"), "trailing_s");
        assert_eq!(algorithm_label("not_sdigit9x"), "not_sdigit9x");
    }

    #[test]
    fn single_run_has_zero_std() {
        let mut archive = FrontArchive::default();
        archive.push(entry("alg_s0", vec![1.0, 1.0]));
        archive.push(entry("alg_s0", vec![0.5, 0.5]));
        let summaries = summarize(&archive).unwrap();
        assert_eq!(summaries.len(), 1);
        assert_eq!(summaries[0].runs, 1);
        assert_eq!(summaries[0].hv_std_x100, 0.0);
        assert_eq!(summaries[0].coverage_std_x100, Some(0.0));
    }

    #[test]
    fn two_runs_match_hand_arithmetic() {
        // Pooled union of {(1,1)} and {(0,0)} spans [0,1]² so the
        // reference point is (-0.1, -0.1). Final hypervolumes: 1.1² = 1.21
        // and 0.1² = 0.01, i.e. 121 and 1 after scaling. Mean 61,
        // sample std 60·√2.
        let mut archive = FrontArchive::default();
        archive.push(entry("alg_s0", vec![1.0, 1.0]));
        archive.push(entry("alg_s1", vec![0.0, 0.0]));
        let s = &summarize(&archive).unwrap()[0];
        assert_eq!(s.runs, 2);
        assert!((s.hv_mean_x100 - 61.0).abs() < 1e-9, "{}", s.hv_mean_x100);
        assert!((s.hv_std_x100 - 60.0 * 2.0f64.sqrt()).abs() < 1e-9, "{}", s.hv_std_x100);
    }

    #[test]
    fn coverage_is_absent_for_three_objectives() {
        let mut archive = FrontArchive::default();
        archive.push(entry("alg_s0", vec![1.0, 1.0, 1.0]));
        archive.push(entry("alg_s1", vec![0.0, 0.5, 0.0]));
        let summaries = summarize(&archive).unwrap();
        assert!(summaries.iter().all(|s| s.coverage_mean_x100.is_none()));
        let table = render_table(&summaries);
        assert!(!table.contains("coverage"));
    }

    #[test]
    fn csv_omits_coverage_columns_when_undefined() {
        let dir = tempfile::tempdir().unwrap();
        let mut archive = FrontArchive::default();
        archive.push(entry("a_s0", vec![1.0, 1.0, 0.0]));
        let summaries = summarize(&archive).unwrap();
        let path = dir.path().join("report.csv");
        write_report_csv(&path, &summaries).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.lines().next().unwrap(), "algorithm,runs,hv_mean_x100,hv_std_x100");

        let mut flat = FrontArchive::default();
        flat.push(entry("a_s0", vec![1.0, 1.0]));
        write_report_csv(&path, &summarize(&flat).unwrap()).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.lines().next().unwrap().ends_with("coverage_mean_x100,coverage_std_x100"));
    }

    #[test]
    fn summaries_group_runs_by_label_in_order() {
        let mut archive = FrontArchive::default();
        archive.push(entry("zeta_s0", vec![0.5, 0.5]));
        archive.push(entry("alpha_s0", vec![0.4, 0.4]));
        archive.push(entry("alpha_s1", vec![0.3, 0.3]));
        let summaries = summarize(&archive).unwrap();
        let labels: Vec<&str> = summaries.iter().map(|s| s.label.as_str()).collect();
        assert_eq!(labels, vec!["alpha", "zeta"]);
        assert_eq!(summaries[0].runs, 2);
        assert_eq!(summaries[1].runs, 1);
    }
}
