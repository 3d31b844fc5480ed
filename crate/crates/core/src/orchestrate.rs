//! Per-prime scheduling with checkpoints: plan the primes, farm the
//! independent modular runs across a bounded worker pool, persist each
//! finished residue vector immediately, then CRT and certify. A failed
//! certificate triggers one automatic top-up that computes only new primes.

use crate::certify::{certify, CertificationReport};
use crate::crt::crt_combine;
use crate::engine::{compute_series_mod_p, memory_estimate_bytes, EngineLimits};
use crate::primes::{plan_primes, PrimePlan};
use crate::series::{write_atomic, Checkpoint, CoefficientSeries};
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct ComputeConfig {
    pub n: usize,
    /// Override the heuristic prime count (certification still applies).
    pub prime_count: Option<usize>,
    pub safety_digits: u32,
    pub threads: usize,
    pub memory_budget_bytes: u64,
    pub output_dir: PathBuf,
    pub resume: bool,
}

impl ComputeConfig {
    pub fn new(n: usize, output_dir: PathBuf) -> Self {
        ComputeConfig {
            n,
            prime_count: None,
            safety_digits: 20,
            threads: std::thread::available_parallelism().map(|v| v.get()).unwrap_or(1),
            memory_budget_bytes: 4 << 30,
            output_dir,
            resume: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        if self.threads < 1 {
            return Err(Error::InvalidInput("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub config_hash: String,
    pub n: usize,
    pub primes: Vec<u32>,
    pub product_p: String,
    pub wall_seconds_per_prime: BTreeMap<u32, f64>,
    pub certification: CertificationReport,
    pub provenance: String,
}

pub fn checkpoint_path(dir: &Path, prime: u32) -> PathBuf {
    dir.join("checkpoints").join(format!("prime_{prime}.txt"))
}

/// Compute residue vectors for every plan prime, reusing checkpoints when
/// resuming. Wall times cover only freshly computed primes.
fn compute_residues(
    plan: &PrimePlan,
    cfg: &ComputeConfig,
    times: &Mutex<BTreeMap<u32, f64>>,
) -> Result<Vec<Vec<u32>>> {
    let n = plan.target_n;
    let ckpt_dir = cfg.output_dir.join("checkpoints");
    std::fs::create_dir_all(&ckpt_dir)?;

    let mut ready: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    let mut pending: Vec<u32> = Vec::new();
    for &p in &plan.primes {
        let path = checkpoint_path(&cfg.output_dir, p);
        if cfg.resume && path.exists() {
            match Checkpoint::read_from(&path) {
                Ok(cp) if cp.n == n && cp.prime == p => {
                    ready.insert(p, cp.residues);
                    continue;
                }
                _ => {} // unusable checkpoint: recompute
            }
        }
        pending.push(p);
    }

    // cap concurrent primes by the memory budget; the grid loop inside each
    // prime is itself parallel, so idle workers still help
    let per_prime = memory_estimate_bytes(n).max(1);
    let wave = (cfg.memory_budget_bytes / per_prime).clamp(1, cfg.threads as u64) as usize;
    let limits = EngineLimits {
        memory_budget_bytes: cfg.memory_budget_bytes,
    };

    let results: Mutex<BTreeMap<u32, Vec<u32>>> = Mutex::new(BTreeMap::new());
    for chunk in pending.chunks(wave.max(1)) {
        chunk.par_iter().try_for_each(|&p| -> Result<()> {
            let started = Instant::now();
            let residues = compute_series_mod_p(n, p, &limits)?;
            let cp = Checkpoint {
                prime: p,
                n,
                residues: residues.clone(),
            };
            cp.write_to(&checkpoint_path(&cfg.output_dir, p))?;
            times.lock().unwrap().insert(p, started.elapsed().as_secs_f64());
            results.lock().unwrap().insert(p, residues);
            Ok(())
        })?;
    }
    ready.append(&mut results.into_inner().unwrap());

    Ok(plan
        .primes
        .iter()
        .map(|p| ready.remove(p).expect("every plan prime computed"))
        .collect())
}

/// Full pipeline: plan, per-prime compute, CRT, certify, write artifacts.
/// On a certification failure one top-up of additional primes is attempted;
/// if that also fails the error carries the violating index.
pub fn run_compute(cfg: &ComputeConfig) -> Result<(CoefficientSeries, RunManifest)> {
    cfg.validate()?;
    let mut plan = match cfg.prime_count {
        Some(k) => {
            PrimePlan::from_primes(crate::primes::generate_primes(k, crate::primes::PRIME_BOUND), cfg.n)?
        }
        None => plan_primes(cfg.n, cfg.safety_digits)?,
    };

    let times = Mutex::new(BTreeMap::new());
    let mut top_ups = 0;
    loop {
        let residues = compute_residues(&plan, cfg, &times)?;
        let mut series = crt_combine(&residues, &plan)?;
        let report = certify(&mut series, &plan)?;
        if report.passed {
            let manifest = RunManifest {
                tool_version: env!("CARGO_PKG_VERSION").to_string(),
                config_hash: config_hash(cfg, &plan),
                n: cfg.n,
                primes: plan.primes.clone(),
                product_p: plan.product.to_string(),
                wall_seconds_per_prime: times.lock().unwrap().clone(),
                certification: report,
                provenance: series.provenance.to_string(),
            };
            let coeff_path = cfg.output_dir.join(format!("w_{}.txt", cfg.n));
            series.write_to(&coeff_path)?;
            write_atomic(
                &cfg.output_dir.join(format!("manifest_{}.json", cfg.n)),
                serde_json::to_string_pretty(&manifest)
                    .expect("manifest serializes")
                    .as_bytes(),
            )?;
            return Ok((series, manifest));
        }
        if top_ups >= 1 {
            return Err(Error::CertificationFailed {
                n: report.first_violation.unwrap_or(0),
            });
        }
        // grow the plan by ~25% and compute only the new primes (resume picks
        // up the checkpoints written above)
        let extra = (plan.primes.len() / 4).max(2);
        plan = plan.extended(extra)?;
        top_ups += 1;
    }
}

fn config_hash(cfg: &ComputeConfig, plan: &PrimePlan) -> String {
    // stable FNV-1a over the reproducibility-relevant fields
    let repr = format!(
        "n={};primes={:?};safety={};budget={}",
        cfg.n, plan.primes, cfg.safety_digits, cfg.memory_budget_bytes
    );
    let mut h: u64 = 0xcbf29ce484222325;
    for b in repr.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    format!("{h:016x}")
}
