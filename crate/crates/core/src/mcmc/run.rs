use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphs::{Board, ConstraintGraph};
use crate::homspace::HomMap;
use crate::mcmc::chain::{vacant_spin, Chain, Init};

/// Settings for one chain.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub sweeps: usize,
    /// Leading sweeps ignored by statistics. Defaults to 20% of `sweeps`.
    pub burn_in: Option<usize>,
    pub seed: u64,
    /// RNG stream. Replica `k` of a batch uses stream `k`.
    pub replica: u64,
    pub init: Init,
    pub pins: Vec<(usize, u8)>,
    /// Keep the post-burn-in state after every sweep, encoded in base `q`.
    /// Only for boards with `q^n < 2^64`.
    pub record_states: bool,
    /// Keep a snapshot every this many sweeps.
    pub snapshot_every: Option<usize>,
}

impl RunConfig {
    pub fn new(sweeps: usize, seed: u64, init: Init) -> Self {
        Self {
            sweeps,
            burn_in: None,
            seed,
            replica: 0,
            init,
            pins: Vec::new(),
            record_states: false,
            snapshot_every: None,
        }
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or(self.sweeps / 5).min(self.sweeps)
    }
}

/// Per-sweep measurements of one chain. Entry `k` of each series is taken
/// after sweep `k + 1`.
#[derive(Clone, Debug, Serialize)]
pub struct RunStats {
    pub n_sites: usize,
    pub q: usize,
    pub sweeps: usize,
    pub burn_in: usize,
    pub seed: u64,
    pub replica: u64,
    /// Spin counted as unoccupied, if the constraint graph has one.
    pub vacant: Option<u8>,
    pub occupied: Vec<u32>,
    /// Occupied even and odd sites; present on bipartite boards.
    pub even_occupied: Option<Vec<u32>>,
    pub odd_occupied: Option<Vec<u32>>,
    /// Row-major `sweeps × q` spin counts.
    pub color_counts: Vec<u32>,
    pub updates: u64,
    pub changes: u64,
    pub final_state: HomMap,
    pub snapshots: Vec<(usize, HomMap)>,
    #[serde(skip)]
    pub states: Option<Vec<u64>>,
}

impl RunStats {
    /// Spin counts after sweep `k + 1`.
    pub fn colors_at(&self, k: usize) -> &[u32] {
        &self.color_counts[k * self.q..(k + 1) * self.q]
    }

    /// Fraction of updates that changed a spin.
    pub fn acceptance(&self) -> f64 {
        if self.updates == 0 {
            0.0
        } else {
            self.changes as f64 / self.updates as f64
        }
    }

    /// Time series as CSV: `sweep,occupied[,even,odd],c0,...`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sweep,occupied");
        if self.even_occupied.is_some() {
            out.push_str(",even_occupied,odd_occupied");
        }
        for j in 0..self.q {
            let _ = write!(out, ",c{j}");
        }
        out.push('\n');
        for k in 0..self.occupied.len() {
            let _ = write!(out, "{},{}", k + 1, self.occupied[k]);
            if let (Some(e), Some(o)) = (&self.even_occupied, &self.odd_occupied) {
                let _ = write!(out, ",{},{}", e[k], o[k]);
            }
            for c in self.colors_at(k) {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Runs one chain from `cfg.init`.
pub fn run(g: &Board, h: &ConstraintGraph, lambda: &[f64], cfg: &RunConfig) -> Result<RunStats> {
    let q = h.q();
    let n = g.n_sites();
    if cfg.record_states && (n as f64) * (q as f64).log2() >= 64.0 {
        return Err(Error::InvalidSize("state recording needs q^n < 2^64".into()));
    }
    let mut chain = Chain::new(g, h, lambda, &cfg.init, &cfg.pins, cfg.seed, cfg.replica)?;
    let vacant = vacant_spin(h);
    let burn_in = cfg.burn_in();
    let bipartite = chain.even_counts().is_some();
    let mut occupied = Vec::with_capacity(cfg.sweeps);
    let mut even_occ = Vec::with_capacity(if bipartite { cfg.sweeps } else { 0 });
    let mut odd_occ = Vec::with_capacity(if bipartite { cfg.sweeps } else { 0 });
    let mut color_counts = Vec::with_capacity(cfg.sweeps * q);
    let mut states = cfg.record_states.then(|| Vec::with_capacity(cfg.sweeps - burn_in));
    let mut snapshots = Vec::new();
    for k in 0..cfg.sweeps {
        chain.sweep();
        let counts = chain.counts();
        let vac = vacant.map_or(0, |v| counts[v as usize]);
        occupied.push(n as u32 - vac);
        if let Some(even) = chain.even_counts() {
            let even_vac = vacant.map_or(0, |v| even[v as usize]);
            let even_total: u32 = even.iter().sum();
            let e = even_total - even_vac;
            even_occ.push(e);
            odd_occ.push(n as u32 - vac - e);
        }
        color_counts.extend_from_slice(counts);
        if let Some(st) = states.as_mut() {
            if k >= burn_in {
                st.push(chain.spins().iter().rev().fold(0u64, |code, &c| code * q as u64 + c as u64));
            }
        }
        if cfg.snapshot_every.is_some_and(|every| every > 0 && (k + 1) % every == 0) {
            snapshots.push((k + 1, chain.map()));
        }
    }
    Ok(RunStats {
        n_sites: n,
        q,
        sweeps: cfg.sweeps,
        burn_in,
        seed: cfg.seed,
        replica: cfg.replica,
        vacant,
        occupied,
        even_occupied: bipartite.then_some(even_occ),
        odd_occupied: bipartite.then_some(odd_occ),
        color_counts,
        updates: chain.steps(),
        changes: chain.changes(),
        final_state: chain.map(),
        snapshots,
        states,
    })
}

/// Runs `replicas` independent chains in parallel; replica `k` uses RNG
/// stream `k` and the initial condition `init_for(k)`. Output is in replica
/// order whatever the thread count.
pub fn run_replicas(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[f64],
    base: &RunConfig,
    replicas: usize,
    init_for: impl Fn(usize) -> Init + Sync,
) -> Result<Vec<RunStats>> {
    (0..replicas)
        .into_par_iter()
        .map(|k| {
            let cfg = RunConfig { replica: k as u64, init: init_for(k), ..base.clone() };
            run(g, h, lambda, &cfg)
        })
        .collect()
}

/// Decodes a state recorded with `record_states`.
pub fn decode_state(code: u64, n: usize, q: usize) -> HomMap {
    let mut rest = code;
    let spins = (0..n)
        .map(|_| {
            let c = (rest % q as u64) as u8;
            rest /= q as u64;
            c
        })
        .collect();
    HomMap::new(spins)
}
