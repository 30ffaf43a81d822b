//! Corpus loading and the threaded cross-validation runner.
//!
//! A corpus is a directory of `.prob` files. Each file becomes a
//! [`CorpusInstance`]: the problem, the expected status and first torsion
//! power if recorded, and the oracle search bounds that make the
//! brute-force check conclusive for that instance. Engine and oracle then
//! run independently and their answers are compared.

use crate::clock::WallDeadline;
use crate::problem::{parse_problem, ParseError};
use crate::render::TimedOutcome;
use flatkit_core::limits::ResourceLimits;
use flatkit_core::oracle::{cross_validate, CorpusInstance, SearchBounds};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

/// Wall budget for instances marked `heavy;`.
const HEAVY_WALL_BUDGET: Duration = Duration::from_secs(600);

#[derive(Debug)]
pub enum CorpusError {
    Io(PathBuf, std::io::Error),
    Parse(PathBuf, ParseError),
    Empty(PathBuf),
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CorpusError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CorpusError::Parse(p, e) => write!(f, "{}: {e}", p.display()),
            CorpusError::Empty(p) => {
                write!(f, "{}: no .prob files found", p.display())
            }
        }
    }
}

impl std::error::Error for CorpusError {}

/// Reads every `.prob` file in `dir`, sorted by file name, and builds the
/// instances. Oracle bounds default to a witness degree of 2 with the
/// matching multiplier degree when the file does not pin them.
pub fn load_dir(dir: &Path) -> Result<Vec<CorpusInstance>, CorpusError> {
    let entries =
        std::fs::read_dir(dir).map_err(|e| CorpusError::Io(dir.to_path_buf(), e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|r| r.ok().map(|e| e.path()))
        .filter(|p| p.extension().map(|x| x == "prob").unwrap_or(false))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CorpusError::Empty(dir.to_path_buf()));
    }
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CorpusError::Io(path.clone(), e))?;
        let file = parse_problem(&text).map_err(|e| CorpusError::Parse(path.clone(), e))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let bounds = file
            .oracle_bounds
            .unwrap_or_else(|| SearchBounds::recommended(2, &file.problem.presentation));
        let mut limits = ResourceLimits::default();
        if file.heavy {
            limits.wall_budget = Some(HEAVY_WALL_BUDGET);
        }
        out.push(CorpusInstance {
            name,
            problem: file.problem,
            expected: file.expected,
            expected_first_power: file.expected_first_power,
            bounds,
            limits,
            heavy: file.heavy,
        });
    }
    Ok(out)
}

fn run_one(inst: &CorpusInstance) -> TimedOutcome {
    // The instance's wall budget is enforced through a host clock; the
    // engine core only ever sees the abstract deadline.
    let deadline = inst.limits.wall_budget.map(WallDeadline::new);
    let started = Instant::now();
    let report = cross_validate(
        std::slice::from_ref(inst),
        deadline
            .as_ref()
            .map(|d| d as &dyn flatkit_core::limits::Deadline),
    );
    let outcome = report
        .entries
        .into_iter()
        .next()
        .expect("one instance in, one outcome out");
    TimedOutcome {
        outcome,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// Cross-validates the instances, `jobs` at a time, preserving input order
/// in the results. Returns the outcomes and the names of skipped instances.
pub fn run(
    instances: &[CorpusInstance],
    jobs: usize,
    skip_heavy: bool,
) -> (Vec<TimedOutcome>, Vec<String>) {
    let (active, skipped): (Vec<&CorpusInstance>, Vec<&CorpusInstance>) =
        instances.iter().partition(|i| !(skip_heavy && i.heavy));
    let skipped_names = skipped.iter().map(|i| i.name.clone()).collect();

    let jobs = jobs.max(1).min(active.len().max(1));
    if jobs <= 1 {
        let results = active.iter().map(|i| run_one(i)).collect();
        return (results, skipped_names);
    }

    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<TimedOutcome>>> =
        Mutex::new((0..active.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= active.len() {
                    break;
                }
                let timed = run_one(active[i]);
                slots.lock().expect("no panics while holding the lock")[i] = Some(timed);
            });
        }
    });
    let results = slots
        .into_inner()
        .expect("all workers joined")
        .into_iter()
        .map(|s| s.expect("every slot filled"))
        .collect();
    (results, skipped_names)
}

#[cfg(test)]
mod tests {
    use super::*;
    use flatkit_core::flatness::FlatnessStatus;
    use flatkit_core::oracle::Agreement;

    fn write_corpus(dir: &Path) {
        std::fs::create_dir_all(dir).unwrap();
        std::fs::write(
            dir.join("a_blowup.prob"),
            "base y1 y2;\nfiber x;\nideal: x*y1 - y2;\nexpect notflat;\nfirstpower 2;\noracle degree 1 multiplier 2;\n",
        )
        .unwrap();
        std::fs::write(
            dir.join("b_free.prob"),
            "base y1;\nfiber x;\nideal: ;\nexpect flat;\noracle degree 2 multiplier 2;\n",
        )
        .unwrap();
        std::fs::write(
            dir.join("c_heavy_line.prob"),
            "base y1;\nmodule rank 1;\nrow y1;\nexpect notflat;\nfirstpower 1;\noracle degree 1 multiplier 1;\nheavy;\n",
        )
        .unwrap();
        std::fs::write(dir.join("notes.txt"), "not a problem file").unwrap();
    }

    fn temp_dir(tag: &str) -> PathBuf {
        let d = std::env::temp_dir().join(format!("flatkit-corpus-{tag}-{}", std::process::id()));
        let _ = std::fs::remove_dir_all(&d);
        d
    }

    #[test]
    fn loads_sorted_and_ignores_other_files() {
        let dir = temp_dir("load");
        write_corpus(&dir);
        let instances = load_dir(&dir).unwrap();
        let names: Vec<&str> = instances.iter().map(|i| i.name.as_str()).collect();
        assert_eq!(names, ["a_blowup", "b_free", "c_heavy_line"]);
        assert_eq!(instances[0].expected, Some(FlatnessStatus::NotFlat));
        assert_eq!(instances[0].expected_first_power, Some(2));
        assert!(instances[2].heavy);
        assert_eq!(
            instances[2].limits.wall_budget,
            Some(Duration::from_secs(600))
        );
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn parallel_run_preserves_order_and_agrees() {
        let dir = temp_dir("run");
        write_corpus(&dir);
        let instances = load_dir(&dir).unwrap();
        let (results, skipped) = run(&instances, 3, false);
        assert!(skipped.is_empty());
        let names: Vec<&str> = results.iter().map(|t| t.outcome.name.as_str()).collect();
        assert_eq!(names, ["a_blowup", "b_free", "c_heavy_line"]);
        for t in &results {
            assert!(
                !matches!(t.outcome.agreement, Agreement::Mismatch(_)),
                "{}: {:?}",
                t.outcome.name,
                t.outcome.agreement
            );
        }
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn skip_heavy_drops_marked_instances() {
        let dir = temp_dir("skip");
        write_corpus(&dir);
        let instances = load_dir(&dir).unwrap();
        let (results, skipped) = run(&instances, 1, true);
        assert_eq!(results.len(), 2);
        assert_eq!(skipped, ["c_heavy_line"]);
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn missing_directory_is_an_io_error() {
        let e = load_dir(Path::new("/nonexistent/corpus")).unwrap_err();
        assert!(matches!(e, CorpusError::Io(_, _)));
    }
}
