use std::time::Instant;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use homgibbs::classify::{cop_win, dismantle, find_fold, is_fertile};
use homgibbs::graphs::small::connected_classes_up_to;
use homgibbs::graphs::{weak_square, weak_square_projection, Board, ConstraintGraph, WeightVector};
use homgibbs::homspace::count_extensions;
use homgibbs::mcmc::{hardcore_bimodality, stationarity_check};
use homgibbs::scalar::{integer_profile, ratio};
use homgibbs::treegibbs::{
    conditional_spin_check, frozen_coloring, long_range_action_probe, solve_fundamental, weights_to_activities,
    BranchingWalk, SiteContext, SolveOptions, SolveReport,
};
use homgibbs::Rational;

use crate::error::{at, CliError};
use crate::output::Output;

type Res<T> = Result<T, CliError>;

struct Outcome {
    pass: bool,
    details: Value,
}

struct Experiment {
    id: &'static str,
    about: &'static str,
    run: fn() -> Res<Outcome>,
}

const EXPERIMENTS: &[Experiment] = &[
    Experiment {
        id: "hinge-activities",
        about: "weights (4,2,1) on the hinge at r=2 induce activities 49:18:49",
        run: hinge_activities,
    },
    Experiment {
        id: "hinge-multiplicity",
        about: "three invariant hinge measures at 49:18:49",
        run: hinge_multiplicity,
    },
    Experiment {
        id: "conditional-symmetry",
        about: "green and red equally likely among yellow neighbours",
        run: conditional_symmetry,
    },
    Experiment {
        id: "stationary-fractions",
        about: "green fractions 0.59, 0.30, 0.07 of the three hinge walks",
        run: stationary_fractions,
    },
    Experiment {
        id: "dichotomy",
        about: "dismantlable iff cop-win, all connected graphs on <= 5 nodes",
        run: dichotomy,
    },
    Experiment {
        id: "sterile-uniqueness",
        about: "sterile graphs on <= 4 nodes have one invariant measure",
        run: sterile_uniqueness,
    },
    Experiment {
        id: "r1-uniqueness",
        about: "one solution class on the line (r=1) for 100 random graphs",
        run: r1_uniqueness,
    },
    Experiment {
        id: "coloring-threshold",
        about: "K2, K3 and K4 at r=2 around the q=r+1 threshold",
        run: coloring_threshold,
    },
    Experiment {
        id: "weak-square-isolation",
        about: "the first projection is isolated for fold-free graphs on <= 4 nodes",
        run: weak_square_isolation,
    },
    Experiment {
        id: "frozen-rigidity",
        about: "frozen 3-colouring of the binary tree is fixed by its boundary",
        run: frozen_rigidity,
    },
    Experiment {
        id: "mcmc-exactness",
        about: "hard core on K2 at activity 2 visits states 1:2:2",
        run: mcmc_exactness,
    },
    Experiment {
        id: "hardcore-bimodality",
        about: "parity dip on a 31x31 grid at activities 0.5 and 5",
        run: hardcore_bimodality_exp,
    },
    Experiment { id: "scaling-gauge", about: "scaling weights by c scales activities by c^(1-r)", run: scaling_gauge },
    Experiment {
        id: "detailed-balance",
        about: "exact reversibility of 100 random weighted walks",
        run: detailed_balance,
    },
];

pub fn run(id: Option<&str>, list: bool, out: Output) -> Res<()> {
    if list {
        for e in EXPERIMENTS {
            println!("{:<24}{}", e.id, e.about);
        }
        return Ok(());
    }
    let Some(id) = id else {
        return Err(CliError::Config("reproduce: give an experiment id or --list".into()));
    };
    let exp = EXPERIMENTS
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| CliError::Config(format!("reproduce: unknown experiment `{id}` (see --list)")))?;
    let outcome = (exp.run)()?;
    let report = json!({ "id": exp.id, "pass": outcome.pass, "details": outcome.details });
    out.finish(exp.id, &report)?;
    if outcome.pass {
        Ok(())
    } else {
        Err(CliError::Mismatch(format!("{}: {}", exp.id, outcome.details)))
    }
}

fn lib<E: std::fmt::Display>(e: E) -> CliError {
    at("experiment")(e)
}

fn q(values: &[i64]) -> Vec<Rational> {
    values.iter().map(|&v| ratio(v, 1)).collect()
}

/// Connected graph on `2..=max_q` nodes, loops allowed, every pair an edge
/// with probability 1/2.
fn random_connected(rng: &mut ChaCha8Rng, max_q: usize) -> ConstraintGraph {
    loop {
        let n = rng.random_range(2..=max_q);
        let edges: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).filter(|_| rng.random_bool(0.5)).collect();
        if let Ok(h) = ConstraintGraph::new(n, edges) {
            if h.is_connected() {
                return h;
            }
        }
    }
}

fn random_activities(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2.0f64..2.0).exp()).collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    ratio(rng.random_range(1..=30), rng.random_range(1..=30))
}

fn hinge_activities() -> Res<Outcome> {
    let act = weights_to_activities(&ConstraintGraph::hinge(), 2, &q(&[4, 2, 1])).map_err(lib)?;
    let profile: Vec<String> = integer_profile(&act.raw).iter().map(ToString::to_string).collect();
    let raw: Vec<String> = act.raw.iter().map(ToString::to_string).collect();
    Ok(Outcome { pass: profile == ["49", "18", "49"], details: json!({ "raw": raw, "integer_profile": profile }) })
}

fn hinge_report() -> Res<SolveReport<f64>> {
    solve_fundamental(&ConstraintGraph::hinge(), 2, &[49.0, 18.0, 49.0], &SolveOptions::default()).map_err(lib)
}

fn near(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

fn hinge_multiplicity() -> Res<Outcome> {
    let start = Instant::now();
    let rep = hinge_report()?;
    let seconds = start.elapsed().as_secs_f64();
    let profiles: Vec<Vec<f64>> = rep.invariant_solutions().map(|s| s.profile()).collect();
    let has = |w: [f64; 3]| {
        let t: f64 = w.iter().sum();
        profiles.iter().any(|p| near(p, &w.map(|x| x / t), 1e-8))
    };
    let symmetric: Vec<&Vec<f64>> = profiles.iter().filter(|p| (p[0] - p[2]).abs() <= 1e-8).collect();
    let as_six: Vec<Vec<f64>> = symmetric.iter().map(|p| p.iter().map(|x| 6.0 * x / p[0]).collect()).collect();
    let pass =
        profiles.len() >= 3 && has([4.0, 2.0, 1.0]) && has([1.0, 2.0, 4.0]) && !symmetric.is_empty() && seconds < 10.0;
    Ok(Outcome {
        pass,
        details: json!({
            "invariant_count": profiles.len(),
            "profiles": profiles,
            "symmetric_scaled_green_6": as_six,
            "seconds": seconds,
        }),
    })
}

fn conditional_symmetry() -> Res<Outcome> {
    let h = ConstraintGraph::hinge();
    let bw = BranchingWalk::new(&h, 2, WeightVector::new(q(&[4, 2, 1])).map_err(lib)?).map_err(lib)?;
    let green = bw.transition(1, 0) * bw.transition(0, 1) * bw.transition(0, 1);
    let red = bw.transition(1, 2) * bw.transition(2, 1) * bw.transition(2, 1);
    let display = ratio(4, 7) * ratio(1, 9) == green && ratio(1, 7) * ratio(4, 9) == red;
    let ctx = SiteContext { parent: Some(1), children: vec![1, 1] };
    let check = conditional_spin_check(&bw, &ctx).map_err(lib)?;
    let pass = display && green == red && check.walk[0] == check.walk[2] && check.walk == check.gibbs;
    Ok(Outcome {
        pass,
        details: json!({
            "green_path": green.to_string(),
            "red_path": red.to_string(),
            "conditional": check.walk.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
    })
}

fn stationary_fractions() -> Res<Outcome> {
    let h = ConstraintGraph::hinge();
    let rep = hinge_report()?;
    let sym = rep
        .invariant_solutions()
        .map(|s| s.profile())
        .find(|p| (p[0] - p[2]).abs() <= 1e-8)
        .ok_or_else(|| CliError::Mismatch("stationary-fractions: no symmetric solution".into()))?;
    let weightings = [vec![4.0, 2.0, 1.0], sym, vec![1.0, 2.0, 4.0]];
    let targets = [0.59, 0.30, 0.07];
    let mut green = Vec::new();
    for w in &weightings {
        let bw = BranchingWalk::new(&h, 2, WeightVector::new(w.clone()).map_err(lib)?).map_err(lib)?;
        green.push(bw.stationary()[0]);
    }
    let pass = green.iter().zip(targets).all(|(g, t)| (g - t).abs() <= 0.02);
    Ok(Outcome { pass, details: json!({ "weights": weightings, "green": green, "targets": targets }) })
}

fn dichotomy() -> Res<Outcome> {
    let start = Instant::now();
    let graphs = connected_classes_up_to(5);
    let mut exceptions = Vec::new();
    let mut dismantlable = 0;
    for h in &graphs {
        let d = dismantle(h).is_some();
        dismantlable += d as usize;
        if d != cop_win(h).map_err(lib)? {
            exceptions.push(h.edges().to_vec());
        }
    }
    Ok(Outcome {
        pass: exceptions.is_empty(),
        details: json!({
            "graphs": graphs.len(),
            "dismantlable": dismantlable,
            "exceptions": exceptions,
            "seconds": start.elapsed().as_secs_f64(),
        }),
    })
}

fn sterile_uniqueness() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut sterile = 0;
    let mut solves = 0;
    let mut failures = Vec::new();
    for h in connected_classes_up_to(4) {
        if is_fertile(&h).map_err(lib)?.fertile {
            continue;
        }
        sterile += 1;
        for r in [2, 3] {
            for _ in 0..20 {
                let lambda = random_activities(&mut rng, h.q());
                let rep = solve_fundamental(&h, r, &lambda, &SolveOptions::default()).map_err(lib)?;
                solves += 1;
                if rep.invariant_count() != 1 {
                    failures.push(json!({
                        "edges": h.edges(), "r": r, "lambda": lambda,
                        "classes": rep.class_count(), "invariant": rep.invariant_count(),
                    }));
                }
            }
        }
    }
    Ok(Outcome {
        pass: failures.is_empty() && sterile > 0,
        details: json!({ "sterile_graphs": sterile, "solves": solves, "failures": failures }),
    })
}

fn r1_uniqueness() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let h = random_connected(&mut rng, 6);
        let lambda = random_activities(&mut rng, h.q());
        let rep = solve_fundamental(&h, 1, &lambda, &SolveOptions::default()).map_err(lib)?;
        if rep.class_count() != 1 {
            failures.push(json!({ "edges": h.edges(), "lambda": lambda, "classes": rep.class_count() }));
        }
    }
    Ok(Outcome { pass: failures.is_empty(), details: json!({ "graphs": 100, "failures": failures }) })
}

fn coloring_threshold() -> Res<Outcome> {
    let solve = |q: usize, lambda: &[f64]| -> Res<SolveReport<f64>> {
        let h = ConstraintGraph::complete(q).map_err(lib)?;
        solve_fundamental(&h, 2, lambda, &SolveOptions::default()).map_err(lib)
    };
    let k2 = solve(2, &[1.0, 1.0])?;
    let k3 = solve(3, &[1.0, 1.0, 1.0])?;
    let k3_skew = solve(3, &[2.0, 1.0, 1.0])?;
    let k4 = solve(4, &[1.0; 4])?;
    let counts = |r: &SolveReport<f64>| json!({ "classes": r.class_count(), "semi_invariant": r.semi_invariant_count(), "invariant": r.invariant_count() });
    let pass = k2.semi_invariant_count() >= 2
        && k3.semi_invariant_count() == 1
        && k3_skew.semi_invariant_count() >= 2
        && k4.semi_invariant_count() == 1;
    Ok(Outcome {
        pass,
        details: json!({
            "K2_uniform": counts(&k2),
            "K3_uniform": counts(&k3),
            "K3_2_1_1": counts(&k3_skew),
            "K4_uniform": counts(&k4),
        }),
    })
}

fn weak_square_isolation() -> Res<Outcome> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for h in connected_classes_up_to(4) {
        if dismantle(&h).is_some() || find_fold(&h).is_some() {
            continue;
        }
        checked += 1;
        let g = weak_square(&h);
        let pi1 = weak_square_projection(h.q(), 0);
        if !(pi1.is_valid(&g, &h) && pi1.is_isolated(&g, &h)) {
            failures.push(h.edges().to_vec());
        }
    }
    Ok(Outcome {
        pass: checked > 0 && failures.is_empty(),
        details: json!({ "graphs": checked, "failures": failures }),
    })
}

fn frozen_rigidity() -> Res<Outcome> {
    let h = ConstraintGraph::complete(3).map_err(lib)?;
    let cfg = frozen_coloring(2, 3, 4, 0).map_err(lib)?;
    let boundary: Vec<(usize, u8)> =
        cfg.board.tree_level(4).expect("tree board").into_iter().map(|s| (s, cfg.map.spins()[s])).collect();
    let extensions = count_extensions(&cfg.board, &h, &boundary).map_err(lib)?;
    let probe = long_range_action_probe(&h, 2, 6, None).map_err(lib)?;
    let pass = extensions.is_one() && probe.probes.iter().all(|p| p.excluded.len() == 2);
    Ok(Outcome {
        pass,
        details: json!({
            "boundary_sites": boundary.len(),
            "extensions": extensions.to_string(),
            "probe": probe,
        }),
    })
}

fn mcmc_exactness() -> Res<Outcome> {
    let g = Board::complete(2).map_err(lib)?;
    let rep = stationarity_check(&g, &ConstraintGraph::hard_core(), &[2.0, 1.0], 1_000_000, 0).map_err(lib)?;
    Ok(Outcome { pass: rep.chi_square.p_value > 0.001, details: serde_json::to_value(&rep).expect("serializes") })
}

fn hardcore_bimodality_exp() -> Res<Outcome> {
    let g = Board::grid_box(15, 2).map_err(lib)?;
    let low = hardcore_bimodality(&g, 0.5, 200, 10_000, 0).map_err(lib)?;
    let high = hardcore_bimodality(&g, 5.0, 200, 10_000, 0).map_err(lib)?;
    let pass = low.dip_fraction > 0.9 && high.dip_fraction < 0.1;
    let summary = |r: &homgibbs::mcmc::BimodalityReport| json!({ "dip_fraction": r.dip_fraction, "mean_rho": r.mean_rho, "histogram": r.histogram });
    Ok(Outcome {
        pass,
        details: json!({
            "replicas": 200,
            "sweeps": 10_000,
            "seed": 0,
            "lambda_0.5": summary(&low),
            "lambda_5": summary(&high),
        }),
    })
}

fn scaling_gauge() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut failures = 0;
    let mut trials = 0;
    for r in 1..=3usize {
        for _ in 0..20 {
            let h = random_connected(&mut rng, 5);
            let w: Vec<Rational> = (0..h.q()).map(|_| random_rational(&mut rng)).collect();
            let c = random_rational(&mut rng);
            let cw: Vec<Rational> = w.iter().map(|x| x * &c).collect();
            let base = weights_to_activities(&h, r, &w).map_err(lib)?.raw;
            let scaled = weights_to_activities(&h, r, &cw).map_err(lib)?.raw;
            let gauge = (0..r - 1).fold(Rational::one(), |acc, _| acc / &c);
            trials += 1;
            if base.iter().zip(&scaled).any(|(b, s)| b * &gauge != *s) {
                failures += 1;
            }
        }
    }
    Ok(Outcome { pass: failures == 0, details: json!({ "trials": trials, "failures": failures }) })
}

fn detailed_balance() -> Res<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut failures = 0;
    let mut pairs = 0;
    for _ in 0..100 {
        let h = random_connected(&mut rng, 6);
        let r = rng.random_range(1..=4);
        let w: Vec<Rational> = (0..h.q()).map(|_| random_rational(&mut rng)).collect();
        let bw = BranchingWalk::new(&h, r, WeightVector::new(w).map_err(lib)?).map_err(lib)?;
        let pi = bw.stationary();
        let total = pi.iter().fold(Rational::zero(), |a, b| a + b);
        if !total.is_one() {
            failures += 1;
        }
        for i in 0..h.q() {
            for j in i + 1..h.q() {
                pairs += 1;
                if &pi[i] * bw.transition(i, j) != &pi[j] * bw.transition(j, i) {
                    failures += 1;
                }
            }
        }
    }
    Ok(Outcome { pass: failures == 0, details: json!({ "graphs": 100, "pairs": pairs, "failures": failures }) })
}
