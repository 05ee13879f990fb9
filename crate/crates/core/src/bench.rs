//! Corpus benchmark harness: repeated timed parses per file and aggregate
//! statistics. Timing wraps only the tokenize+parse call (optionally plus
//! semantic analysis), never file I/O or serialization, and runs on the
//! calling thread.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// One corpus file's outcome: parse success and raw per-iteration timings.
#[derive(Clone, Debug)]
pub struct FileResult {
    pub path: PathBuf,
    pub success: bool,
    /// Nanoseconds per timed iteration. Empty when the file could not be
    /// read.
    pub samples: Vec<u64>,
}

impl FileResult {
    /// Mean of this file's samples, in milliseconds.
    pub fn mean_ms(&self) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        let total: u64 = self.samples.iter().sum();
        Some(total as f64 / self.samples.len() as f64 / 1_000_000.0)
    }
}

#[derive(Clone, Debug)]
pub struct BenchmarkReport {
    pub per_file: Vec<FileResult>,
    pub iterations: u32,
    pub warmup: u32,
    /// Whether the timed region included the semantic pass.
    pub analyze: bool,
}

/// Aggregate statistics over per-file mean times, in milliseconds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stats {
    pub average_ms: f64,
    pub min_ms: f64,
    pub max_ms: f64,
}

impl BenchmarkReport {
    /// `"100% (11/11 files)"`: files whose every iteration parsed without
    /// error-severity diagnostics, over all files.
    pub fn success_rate(&self) -> String {
        let total = self.per_file.len();
        let ok = self.per_file.iter().filter(|f| f.success).count();
        let pct = if total == 0 {
            0.0
        } else {
            100.0 * ok as f64 / total as f64
        };
        let pct = if (pct - pct.round()).abs() < 1e-9 {
            format!("{}%", pct.round() as u64)
        } else {
            format!("{pct:.1}%")
        };
        format!("{pct} ({ok}/{total} files)")
    }
}

/// Benchmark every `.qasm` file in `dir`, sorted by name: `warmup` untimed
/// parses, then `iterations` timed ones per file. A file that cannot be
/// read is marked failed with no samples and the run continues.
pub fn run_corpus(
    dir: &Path,
    iterations: u32,
    warmup: u32,
    analyze: bool,
) -> io::Result<BenchmarkReport> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "qasm"))
        .collect();
    paths.sort();

    let mut per_file = Vec::with_capacity(paths.len());
    for path in paths {
        let source = match fs::read_to_string(&path) {
            Ok(s) => s,
            Err(_) => {
                per_file.push(FileResult {
                    path,
                    success: false,
                    samples: Vec::new(),
                });
                continue;
            }
        };
        for _ in 0..warmup {
            run_once(&source, analyze);
        }
        let mut samples = Vec::with_capacity(iterations as usize);
        let mut success = true;
        for _ in 0..iterations {
            let start = Instant::now();
            let clean = run_once(&source, analyze);
            let elapsed = start.elapsed();
            samples.push(elapsed.as_nanos().min(u128::from(u64::MAX)) as u64);
            success &= clean;
        }
        per_file.push(FileResult {
            path,
            success,
            samples,
        });
    }
    Ok(BenchmarkReport {
        per_file,
        iterations,
        warmup,
        analyze,
    })
}

/// One parse (and optional semantic pass); true when no error-severity
/// diagnostics were produced.
fn run_once(source: &str, analyze: bool) -> bool {
    let outcome = crate::parse(source);
    let mut clean = outcome.success;
    if analyze {
        let analysis = crate::semantics::analyze(&outcome.program);
        clean &= !analysis.diagnostics.iter().any(|d| d.is_error());
    }
    clean
}

/// Mean of per-file means plus their extrema, over successful files only.
/// `None` when no successful file has samples.
pub fn compute_stats(report: &BenchmarkReport) -> Option<Stats> {
    let means: Vec<f64> = report
        .per_file
        .iter()
        .filter(|f| f.success)
        .filter_map(FileResult::mean_ms)
        .collect();
    if means.is_empty() {
        return None;
    }
    let average_ms = means.iter().sum::<f64>() / means.len() as f64;
    let min_ms = means.iter().copied().fold(f64::INFINITY, f64::min);
    let max_ms = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some(Stats {
        average_ms,
        min_ms,
        max_ms,
    })
}

/// Fixed-width results table with the four standard rows.
pub fn format_table(report: &BenchmarkReport) -> String {
    let stats = compute_stats(report);
    let ms = |v: Option<f64>| match v {
        Some(v) => format!("{v:.2} ms"),
        None => "n/a".to_string(),
    };
    let rows = [
        ("Success Rate", report.success_rate()),
        ("Average Time", ms(stats.map(|s| s.average_ms))),
        ("Min Time", ms(stats.map(|s| s.min_ms))),
        ("Max Time", ms(stats.map(|s| s.max_ms))),
    ];
    let mut out = String::new();
    out.push_str(&format!("{:<14} {}\n", "Result", "Value"));
    out.push_str(&format!("{}\n", "-".repeat(34)));
    for (label, value) in rows {
        out.push_str(&format!("{label:<14} {value}\n"));
    }
    out
}

/// Raw per-iteration samples as `file,iteration,nanoseconds,success` rows.
pub fn write_csv<W: io::Write>(report: &BenchmarkReport, mut w: W) -> io::Result<()> {
    writeln!(w, "file,iteration,nanoseconds,success")?;
    for file in &report.per_file {
        for (i, ns) in file.samples.iter().enumerate() {
            writeln!(
                w,
                "{},{},{},{}",
                file.path.display(),
                i + 1,
                ns,
                file.success
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic(path: &str, success: bool, means_ns: &[u64]) -> FileResult {
        FileResult {
            path: PathBuf::from(path),
            success,
            samples: means_ns.to_vec(),
        }
    }

    fn report_of(files: Vec<FileResult>) -> BenchmarkReport {
        BenchmarkReport {
            per_file: files,
            iterations: 1,
            warmup: 0,
            analyze: false,
        }
    }

    #[test]
    fn stats_are_mean_of_per_file_means() {
        let report = report_of(vec![
            synthetic("a.qasm", true, &[1_000_000]),
            synthetic("b.qasm", true, &[2_000_000]),
            synthetic("c.qasm", true, &[3_000_000]),
        ]);
        let stats = compute_stats(&report).unwrap();
        assert!((stats.average_ms - 2.0).abs() < 1e-9);
        assert!((stats.min_ms - 1.0).abs() < 1e-9);
        assert!((stats.max_ms - 3.0).abs() < 1e-9);
    }

    #[test]
    fn single_file_min_equals_max_equals_average() {
        let report = report_of(vec![synthetic("a.qasm", true, &[360_000, 360_000])]);
        let stats = compute_stats(&report).unwrap();
        assert_eq!(stats.min_ms, stats.max_ms);
        assert_eq!(stats.min_ms, stats.average_ms);
    }

    #[test]
    fn failed_files_are_excluded_from_stats() {
        let report = report_of(vec![
            synthetic("a.qasm", true, &[1_000_000]),
            synthetic("broken.qasm", false, &[9_000_000]),
        ]);
        let stats = compute_stats(&report).unwrap();
        assert!((stats.average_ms - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_failed_yields_no_stats_and_na_rows() {
        let report = report_of(vec![synthetic("a.qasm", false, &[])]);
        assert!(compute_stats(&report).is_none());
        let table = format_table(&report);
        assert!(table.contains("n/a"), "{table}");
    }

    #[test]
    fn success_rate_formatting() {
        let all = report_of((0..11).map(|i| synthetic(&format!("{i}.qasm"), true, &[1])).collect());
        assert_eq!(all.success_rate(), "100% (11/11 files)");

        let two = report_of(
            (0..11)
                .map(|i| synthetic(&format!("{i}.qasm"), i < 2, &[1]))
                .collect(),
        );
        assert_eq!(two.success_rate(), "18.2% (2/11 files)");
    }

    #[test]
    fn table_has_the_four_row_labels() {
        let report = report_of(vec![synthetic("a.qasm", true, &[420_000])]);
        let table = format_table(&report);
        for label in ["Success Rate", "Average Time", "Min Time", "Max Time"] {
            assert!(table.contains(label), "{table}");
        }
        assert!(table.contains("0.42 ms"), "{table}");
    }

    #[test]
    fn csv_matches_report() {
        let report = report_of(vec![synthetic("a.qasm", true, &[100, 200])]);
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "file,iteration,nanoseconds,success");
        assert_eq!(lines[1], "a.qasm,1,100,true");
        assert_eq!(lines[2], "a.qasm,2,200,true");
    }

    #[test]
    fn run_corpus_times_real_files() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("01_ok.qasm"),
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\nqubit[2] q;\nh q[0];\ncx q[0], q[1];\n",
        )
        .unwrap();
        std::fs::write(dir.path().join("02_broken.qasm"), "qubit q\nh q;\n").unwrap();
        std::fs::write(dir.path().join("notes.txt"), "not a corpus file").unwrap();

        let report = run_corpus(dir.path(), 3, 1, false).unwrap();
        assert_eq!(report.per_file.len(), 2);
        assert!(report.per_file[0].path.ends_with("01_ok.qasm"));
        assert!(report.per_file[0].success);
        assert!(!report.per_file[1].success);
        for f in &report.per_file {
            assert_eq!(f.samples.len(), 3);
        }
        assert_eq!(report.success_rate(), "50% (1/2 files)");
        assert!(compute_stats(&report).is_some());
    }

    #[test]
    fn success_verdict_is_deterministic_across_runs() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("f.qasm"), "OPENQASM 3.0;\nqubit q;\n").unwrap();
        let first = run_corpus(dir.path(), 2, 0, false).unwrap();
        let second = run_corpus(dir.path(), 2, 0, false).unwrap();
        assert_eq!(
            first.per_file[0].success,
            second.per_file[0].success
        );
    }

    #[test]
    fn analyze_flag_extends_the_checked_region() {
        let dir = tempfile::tempdir().unwrap();
        // Parses cleanly but calls an undefined gate.
        std::fs::write(dir.path().join("f.qasm"), "OPENQASM 3.0;\nqubit q;\nfoo q;\n").unwrap();
        let parse_only = run_corpus(dir.path(), 1, 0, false).unwrap();
        assert!(parse_only.per_file[0].success);
        let with_analysis = run_corpus(dir.path(), 1, 0, true).unwrap();
        assert!(!with_analysis.per_file[0].success);
    }

    #[test]
    fn missing_directory_is_an_error() {
        assert!(run_corpus(Path::new("/nonexistent-dir-for-test"), 1, 0, false).is_err());
    }
}
