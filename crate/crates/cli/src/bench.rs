//! `bench`: relaxed approximation over a directory, one CSV row per
//! (instance, eps) pair.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use interdict_core::dual::opt_f_exact;
use interdict_core::fptas::approx_opt_f;
use interdict_core::{preprocess, Rat};
use rayon::prelude::*;

use crate::{load_instance, Failure};

pub const HEADER: [&str; 9] = [
    "instance",
    "n",
    "t",
    "eps",
    "f_value",
    "opt_f",
    "ratio",
    "dp_states",
    "wall_ms",
];

struct Row {
    instance: String,
    n: usize,
    t: usize,
    eps: Rat,
    f_value: Rat,
    opt_f: Option<Rat>,
    dp_states: usize,
    wall_ms: u128,
}

impl Row {
    fn ratio(&self) -> String {
        match &self.opt_f {
            Some(o) if o.is_positive() => (&self.f_value / o).to_string(),
            Some(_) if self.f_value.is_zero() => "1".into(),
            _ => String::new(),
        }
    }

    fn record(&self) -> [String; 9] {
        [
            self.instance.clone(),
            self.n.to_string(),
            self.t.to_string(),
            self.eps.to_string(),
            self.f_value.to_string(),
            self.opt_f.as_ref().map_or(String::new(), Rat::to_string),
            self.ratio(),
            self.dp_states.to_string(),
            self.wall_ms.to_string(),
        ]
    }
}

fn list_files(dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let entries = fs::read_dir(dir).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", dir.display()),
    })?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

fn bench_file(
    path: &Path,
    eps_list: &[Rat],
    exact_max_n: usize,
    timing: bool,
) -> Result<Vec<Row>, Failure> {
    let inst = load_instance(path)?;
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let reduced = preprocess(&inst).instance;
    let opt_f = if reduced.n() <= exact_max_n {
        Some(opt_f_exact(&reduced)?.value)
    } else {
        None
    };
    let mut eps_sorted = eps_list.to_vec();
    eps_sorted.sort();
    eps_sorted.dedup();
    eps_sorted
        .into_iter()
        .map(|eps| {
            let start = Instant::now();
            let sol = approx_opt_f(&inst, &eps)?;
            let wall_ms = if timing {
                start.elapsed().as_millis()
            } else {
                0
            };
            Ok(Row {
                instance: name.clone(),
                n: inst.n(),
                t: inst.t(),
                eps,
                f_value: sol.f_value,
                opt_f: opt_f.clone(),
                dp_states: sol.stats.dp_states,
                wall_ms,
            })
        })
        .collect()
}

pub fn run(
    dir: &Path,
    eps_list: &[Rat],
    csv_path: &Path,
    exact_max_n: usize,
    timing: bool,
) -> Result<(), Failure> {
    let files = list_files(dir)?;
    let results: Vec<Result<Vec<Row>, Failure>> = files
        .par_iter()
        .map(|p| bench_file(p, eps_list, exact_max_n, timing))
        .collect();

    let io_fail = |e: csv::Error| Failure {
        code: 1,
        message: format!("{}: {e}", csv_path.display()),
    };
    let mut out = csv::Writer::from_path(csv_path).map_err(io_fail)?;
    out.write_record(HEADER).map_err(io_fail)?;
    let mut rows = 0usize;
    for (path, result) in files.iter().zip(results) {
        match result {
            Ok(batch) => {
                for row in batch {
                    out.write_record(row.record()).map_err(io_fail)?;
                    rows += 1;
                }
            }
            Err(f) => eprintln!("skipping {}: {}", path.display(), f.message),
        }
    }
    out.flush().map_err(|e| Failure {
        code: 1,
        message: format!("{}: {e}", csv_path.display()),
    })?;
    if rows == 0 {
        return Err(Failure {
            code: 1,
            message: "no instance produced a row".into(),
        });
    }
    Ok(())
}
