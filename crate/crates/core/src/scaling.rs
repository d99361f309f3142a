//! Doubling-ladder timing of the solver at constant density (`n = m / 4`).

use std::fmt::Write as _;
use std::time::Instant;

use crate::generate::{random_connected, GenerateError};
use crate::solver::{solve, StartPolicy};

#[derive(Debug, Clone, PartialEq)]
pub struct LadderRow {
    pub m: usize,
    pub n: usize,
    pub median_ms: f64,
    /// `median_ms` over the previous rung's; `None` on the first rung.
    pub ratio: Option<f64>,
    pub touches: u64,
    pub leaves: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LadderConfig {
    /// Exponents of `m`, inclusive.
    pub exp_start: u32,
    pub exp_stop: u32,
    pub seed: u64,
    pub reps: usize,
}

impl Default for LadderConfig {
    fn default() -> Self {
        LadderConfig { exp_start: 16, exp_stop: 21, seed: 0, reps: 5 }
    }
}

/// Times every rung once per round, `reps` rounds, and reports per-rung
/// medians. Interleaving keeps a burst of machine noise from landing on all
/// samples of one rung.
pub fn run_ladder(config: &LadderConfig) -> Result<Vec<LadderRow>, GenerateError> {
    let mut graphs = Vec::new();
    for exp in config.exp_start..=config.exp_stop {
        let m = 1usize << exp;
        graphs.push(random_connected((m / 4).max(2), m, config.seed)?);
    }
    // warmup, and the runs whose tree and counters we report
    let reference: Vec<_> =
        graphs.iter().map(|g| solve(g, StartPolicy::FirstEligible).expect("generated graph is connected")).collect();
    let mut times = vec![Vec::with_capacity(config.reps); graphs.len()];
    for _ in 0..config.reps.max(1) {
        for (g, samples) in graphs.iter().zip(&mut times) {
            let t0 = Instant::now();
            let s = solve(g, StartPolicy::FirstEligible).expect("generated graph is connected");
            samples.push(t0.elapsed().as_secs_f64() * 1e3);
            std::hint::black_box(s);
        }
    }
    let mut rows: Vec<LadderRow> = Vec::new();
    for ((g, s), mut samples) in graphs.iter().zip(reference).zip(times) {
        samples.sort_by(f64::total_cmp);
        let median_ms = samples[samples.len() / 2];
        let ratio = rows.last().map(|prev| median_ms / prev.median_ms);
        rows.push(LadderRow { m: g.m(), n: g.n(), median_ms, ratio, touches: s.touches, leaves: s.tree.leaf_count() });
    }
    Ok(rows)
}

/// `m,n,median_ms,ratio` with a header line; the ratio is blank on the first row.
pub fn ladder_csv(rows: &[LadderRow]) -> String {
    let mut out = String::from("m,n,median_ms,ratio\n");
    for row in rows {
        let ratio = row.ratio.map(|r| format!("{r:.3}")).unwrap_or_default();
        let _ = writeln!(out, "{},{},{:.3},{}", row.m, row.n, row.median_ms, ratio);
    }
    out
}
