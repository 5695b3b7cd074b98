use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::graphs::{Board, ConstraintGraph};
use crate::homspace::{lambda_measure, HomMap, HomSpace};
use crate::mcmc::chain::Init;
use crate::mcmc::run::{decode_state, run, run_replicas, RunConfig, RunStats};

/// Number of bins in reported histograms over `[0, 1]` or `[-1, 1]`.
pub const HISTOGRAM_BINS: usize = 20;

/// Runs whose final `ρ` lands in this window count as undecided.
pub const DIP_WINDOW: (f64, f64) = (0.4, 0.6);

/// `ρ = even/(even + odd)` occupied sites after every sweep; `1/2` when
/// nothing is occupied.
pub fn parity_statistic(stats: &RunStats) -> Result<Vec<f64>> {
    let (Some(e), Some(o)) = (&stats.even_occupied, &stats.odd_occupied) else {
        return Err(Error::BoardNotBipartite);
    };
    Ok(e.iter().zip(o).map(|(&e, &o)| rho(e, o)).collect())
}

fn rho(even: u32, odd: u32) -> f64 {
    if even + odd == 0 {
        0.5
    } else {
        even as f64 / (even + odd) as f64
    }
}

fn histogram(values: &[f64], lo: f64, hi: f64) -> Vec<u32> {
    let mut h = vec![0u32; HISTOGRAM_BINS];
    for &v in values {
        let b = ((v - lo) / (hi - lo) * HISTOGRAM_BINS as f64).floor();
        h[(b.max(0.0) as usize).min(HISTOGRAM_BINS - 1)] += 1;
    }
    h
}

#[derive(Clone, Debug, Serialize)]
pub struct BimodalityReport {
    pub runs: usize,
    pub final_rho: Vec<f64>,
    /// Final `ρ` in [`HISTOGRAM_BINS`] equal bins over `[0, 1]`.
    pub histogram: Vec<u32>,
    /// Fraction of runs ending with `ρ` in [`DIP_WINDOW`].
    pub dip_fraction: f64,
    pub mean_rho: f64,
}

pub fn bimodality_report(runs: &[RunStats]) -> Result<BimodalityReport> {
    if runs.is_empty() {
        return Err(Error::Invalid("no runs".into()));
    }
    let final_rho: Vec<f64> =
        runs.iter().map(|s| parity_statistic(s).map(|r| r.last().copied().unwrap_or(0.5))).collect::<Result<_>>()?;
    let dip = final_rho.iter().filter(|&&r| (DIP_WINDOW.0..=DIP_WINDOW.1).contains(&r)).count();
    Ok(BimodalityReport {
        runs: runs.len(),
        histogram: histogram(&final_rho, 0.0, 1.0),
        dip_fraction: dip as f64 / runs.len() as f64,
        mean_rho: final_rho.iter().sum::<f64>() / runs.len() as f64,
        final_rho,
    })
}

/// Hard-core at activity `lambda` on a bipartite board: even replicas start
/// with the even sublattice full, odd replicas with the odd one.
pub fn hardcore_bimodality(
    g: &Board,
    lambda: f64,
    replicas: usize,
    sweeps: usize,
    seed: u64,
) -> Result<BimodalityReport> {
    let h = ConstraintGraph::hard_core();
    let even = Init::sublattice(&h, true)?;
    let odd = Init::sublattice(&h, false)?;
    let base = RunConfig::new(sweeps, seed, even.clone());
    let runs =
        run_replicas(g, &h, &[lambda, 1.0], &base, replicas, |k| if k % 2 == 0 { even.clone() } else { odd.clone() })?;
    bimodality_report(&runs)
}

#[derive(Clone, Debug, Serialize)]
pub struct WrPoint {
    pub t: f64,
    /// `(green − red)/(green + red)` of each run's final state, 0 when both
    /// are absent.
    pub dominance: Vec<f64>,
    pub mean_abs: f64,
    /// Fraction of runs with `|D| < 1/2`.
    pub central_fraction: f64,
    /// Histogram over `[-1, 1]`.
    pub histogram: Vec<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WrReport {
    pub points: Vec<WrPoint>,
    /// First pair of consecutive `t` values between which the central
    /// fraction drops below 1/2.
    pub onset: Option<(f64, f64)>,
}

/// Hinge (Widom–Rowlinson) at `λ = (t, 1, t)`, every run started all-yellow
/// so any dominance is spontaneous.
pub fn wr_dominance(g: &Board, t_values: &[f64], replicas: usize, sweeps: usize, seed: u64) -> Result<WrReport> {
    let h = ConstraintGraph::hinge();
    let base = RunConfig::new(sweeps, seed, Init::Constant(1));
    let mut points = Vec::with_capacity(t_values.len());
    for &t in t_values {
        let runs = run_replicas(g, &h, &[t, 1.0, t], &base, replicas, |_| Init::Constant(1))?;
        let dominance: Vec<f64> = runs
            .iter()
            .map(|s| {
                let c = s.colors_at(s.sweeps - 1);
                let (green, red) = (c[0] as f64, c[2] as f64);
                if green + red == 0.0 {
                    0.0
                } else {
                    (green - red) / (green + red)
                }
            })
            .collect();
        let n = dominance.len().max(1) as f64;
        points.push(WrPoint {
            t,
            mean_abs: dominance.iter().map(|d| d.abs()).sum::<f64>() / n,
            central_fraction: dominance.iter().filter(|d| d.abs() < 0.5).count() as f64 / n,
            histogram: histogram(&dominance, -1.0, 1.0),
            dominance,
        });
    }
    let onset = points
        .windows(2)
        .find(|w| w[0].central_fraction >= 0.5 && w[1].central_fraction < 0.5)
        .map(|w| (w[0].t, w[1].t));
    Ok(WrReport { points, onset })
}

/// Integrated autocorrelation time by batch means with batches of about
/// `√N` samples. At least 1.
pub fn integrated_time(series: &[f64]) -> f64 {
    let n = series.len();
    let b = (n as f64).sqrt().floor() as usize;
    if b < 2 {
        return 1.0;
    }
    let nb = n / b;
    let used = nb * b;
    let mean = series[..used].iter().sum::<f64>() / used as f64;
    let var = series[..used].iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (used - 1) as f64;
    if var == 0.0 || nb < 2 {
        return 1.0;
    }
    let batch_var = series[..used].chunks(b).map(|c| (c.iter().sum::<f64>() / b as f64 - mean).powi(2)).sum::<f64>()
        / (nb - 1) as f64;
    (b as f64 * batch_var / var).max(1.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiSquare {
    pub statistic: f64,
    /// `statistic / tau`, the value compared against `χ²(df)`.
    pub scaled: f64,
    pub tau: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson χ² of `observed` counts against `probs`, with the statistic
/// divided by `tau` to account for correlated samples.
pub fn chi_square(observed: &[u64], probs: &[f64], tau: f64) -> Result<ChiSquare> {
    if observed.len() != probs.len() {
        return Err(Error::LengthMismatch { expected: probs.len(), got: observed.len() });
    }
    if probs.len() < 2 {
        return Err(Error::Invalid("χ² needs at least two categories".into()));
    }
    let n: u64 = observed.iter().sum();
    let statistic: f64 = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = p * n as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = probs.len() - 1;
    let scaled = statistic / tau;
    let dist = ChiSquared::new(df as f64).map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(ChiSquare { statistic, scaled, tau, df, p_value: dist.sf(scaled) })
}

#[derive(Clone, Debug, Serialize)]
pub struct StateFrequency {
    pub map: HomMap,
    pub expected: f64,
    pub observed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct StationarityReport {
    pub states: Vec<StateFrequency>,
    pub samples: usize,
    pub chi_square: ChiSquare,
}

/// Runs one chain and compares its post-burn-in sweep-end states with the
/// exact λ-measure from enumeration.
pub fn stationarity_check(
    g: &Board,
    h: &ConstraintGraph,
    lambda: &[f64],
    sweeps: usize,
    seed: u64,
) -> Result<StationarityReport> {
    let hs = HomSpace::enumerate(g, h)?;
    let probs = lambda_measure::<f64>(&hs, lambda)?;
    let cfg = RunConfig { record_states: true, ..RunConfig::new(sweeps, seed, Init::RandomGreedy) };
    let stats = run(g, h, lambda, &cfg)?;
    let codes = stats.states.as_ref().expect("states recorded");
    let index: Vec<usize> = codes
        .iter()
        .map(|&c| hs.position(&decode_state(c, g.n_sites(), h.q())).expect("chain stays in hom(G, H)"))
        .collect();
    let mut observed = vec![0u64; hs.len()];
    for &i in &index {
        observed[i] += 1;
    }
    let tau = (0..hs.len())
        .filter(|&k| probs[k] > 0.0 && probs[k] < 1.0)
        .map(|k| integrated_time(&index.iter().map(|&i| (i == k) as u8 as f64).collect::<Vec<_>>()))
        .fold(1.0, f64::max);
    let chi_square = chi_square(&observed, &probs, tau)?;
    Ok(StationarityReport {
        states: hs
            .maps()
            .iter()
            .zip(&probs)
            .zip(&observed)
            .map(|((m, &p), &o)| StateFrequency { map: m.clone(), expected: p, observed: o })
            .collect(),
        samples: index.len(),
        chi_square,
    })
}
