//! Runs solvers over a directory of instance documents.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use serde_json::{json, Map, Value};

use crate::doc::parse_instance;
use crate::solve::{solve, Algorithm, SolveOptions};

pub const BENCH_VERSION: &str = "delivery-bench/1";
pub const THREADS_ENV: &str = "DELIVERY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("cannot read suite {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("suite {0} contains no .json instances")]
    Empty(PathBuf),
}

/// Worker count: `DELIVERY_THREADS` when set to a positive integer, else the
/// available parallelism.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| thread::available_parallelism().map_or(1, |n| n.get()))
}

pub fn suite_files(dir: &Path) -> Result<Vec<PathBuf>, BenchError> {
    let io = |source| BenchError::Io { path: dir.to_path_buf(), source };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(io)? {
        let path = entry.map_err(io)?.path();
        if path.extension().is_some_and(|e| e == "json") && path.is_file() {
            files.push(path);
        }
    }
    if files.is_empty() {
        return Err(BenchError::Empty(dir.to_path_buf()));
    }
    files.sort();
    Ok(files)
}

fn run_one(path: &Path, algos: &[Algorithm], opts: &SolveOptions) -> Value {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return json!({"error": e.to_string()}),
    };
    let inst = match parse_instance(&text) {
        Ok(i) => i,
        Err(e) => return json!({"error": e.to_string()}),
    };
    let mut results = Map::new();
    for &algo in algos {
        let entry = match solve(&inst, algo, opts) {
            Ok(r) => {
                let mut m = Map::new();
                m.insert("decision".into(), serde_json::to_value(r.decision).expect("decision serializes"));
                m.insert("gamma".into(), Value::from(r.gamma.to_string()));
                m.insert("legs".into(), Value::from(r.schedule.map_or(0, |s| s.legs.len())));
                if let Some(t) = r.diagnostics.elapsed_micros {
                    m.insert("elapsed_micros".into(), Value::from(t as u64));
                }
                Value::Object(m)
            }
            Err(e) => json!({"error": e.to_string()}),
        };
        results.insert(algo.name().into(), entry);
    }
    json!({
        "agents": inst.agents().len(),
        "edges": inst.graph().edge_count(),
        "vertices": inst.graph().vertex_count(),
        "results": results,
    })
}

/// Solves every instance of the suite with each algorithm. Instances run
/// concurrently; the report lists them by file name.
pub fn run_suite(dir: &Path, algos: &[Algorithm], opts: &SolveOptions, threads: usize) -> Result<Value, BenchError> {
    let files = suite_files(dir)?;
    let slots: Vec<Mutex<Option<Value>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    thread::scope(|scope| {
        for _ in 0..threads.clamp(1, files.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(path) = files.get(i) else { break };
                let value = run_one(path, algos, opts);
                *slots[i].lock().expect("no panics while holding the lock") = Some(value);
            });
        }
    });
    let instances: Vec<Value> = files
        .iter()
        .zip(slots)
        .map(|(path, slot)| {
            let mut v = slot.into_inner().expect("lock not poisoned").expect("every instance ran");
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            v.as_object_mut().expect("entries are objects").insert("name".into(), Value::from(name));
            v
        })
        .collect();
    Ok(json!({
        "version": BENCH_VERSION,
        "algorithms": algos.iter().map(|a| a.name()).collect::<Vec<_>>(),
        "instances": instances,
    }))
}
