//! Chunked Haar sampling on a rayon pool.
//!
//! Chunk `c` always draws from stream `c` of the seed, and results are merged
//! in chunk order, so reports do not depend on the worker count.

use anyhow::{Context, Result};
use rayon::prelude::*;
use weylhull_core::iwasawa::{
    check_sampling_input, pinching_pass, project_chunk, summarize, Projection, VerificationReport, CHUNK_SIZE,
};

pub const THREADS_ENV: &str = "WEYLHULL_THREADS";

/// Worker cap from `WEYLHULL_THREADS`; `None` lets rayon decide.
pub fn worker_cap() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => {
            let n: usize = v.trim().parse().with_context(|| format!("{THREADS_ENV}={v:?} is not a count"))?;
            Ok(Some(n.max(1)))
        }
        _ => Ok(None),
    }
}

pub struct Sampled {
    pub report: VerificationReport,
    pub projections: Vec<Vec<f64>>,
}

pub fn sample(h: &[f64], samples: usize, seed: u64, projection: Projection, threads: Option<usize>) -> Result<Sampled> {
    check_sampling_input(h)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let chunks = samples.div_ceil(CHUNK_SIZE);
    let parts = pool.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let count = CHUNK_SIZE.min(samples - c * CHUNK_SIZE);
                project_chunk(h, seed, c as u64, count, projection)
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let projections: Vec<Vec<f64>> = parts.into_iter().flatten().collect();
    let mut report = summarize(h, &projections, seed);
    if projection == Projection::Linear {
        report.pinching = Some(pinching_pass(h, seed)?);
    }
    Ok(Sampled { report, projections })
}

/// One row per sample: index, projected coordinates, permutohedron slack.
pub fn to_csv(h: &[f64], projections: &[Vec<f64>]) -> String {
    let n = h.len();
    let mut out = String::from("sample");
    for k in 1..=n {
        out.push_str(&format!(",x{k}"));
    }
    out.push_str(",slack\n");
    for (s, x) in projections.iter().enumerate() {
        out.push_str(&s.to_string());
        for v in x {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{}\n", weylhull_core::iwasawa::permutohedron_slack(h, x)));
    }
    out
}
