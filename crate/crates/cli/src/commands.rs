use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde_json::{json, Value};

use homgibbs::classify::classify as classify_graph;
use homgibbs::graphs::io::{board_to_dot, load_constraint};
use homgibbs::graphs::{
    ActivityVector, Board, BoardSpec, ConstraintGraph, StandardGraph, WeightVector, DEFAULT_SITE_CAP,
};
use homgibbs::homspace::{lambda_measure, site_marginals, EnumOptions, HomMap, HomSpace};
use homgibbs::mcmc::{bimodality_report, render, run_replicas, vacant_spin, Init, RenderStyle, RunConfig, RunStats};
use homgibbs::treegibbs::{
    count_transition, sample_branching_walk, solve_fundamental, ActivityFamily, BranchingWalk, CountKind, SolveOptions,
    TransitionOptions,
};

use crate::error::{at, CliError};
use crate::output::Output;
use crate::{CountArg, HomReport, HomspaceArgs, McmcArgs, SolverFlags, TreeCommand};

type Res<T> = Result<T, CliError>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report serializes")
}

pub fn load_graph(arg: &str, field: &str) -> Res<ConstraintGraph> {
    if arg.ends_with(".json") || Path::new(arg).is_file() {
        load_constraint(arg).map_err(at(field))
    } else {
        StandardGraph::from_str(arg).and_then(|n| ConstraintGraph::standard(&n)).map_err(at(field))
    }
}

pub fn load_board(arg: &str, field: &str) -> Res<Board> {
    BoardSpec::from_str(arg).and_then(|s| Board::build(&s, DEFAULT_SITE_CAP)).map_err(at(field))
}

fn activities(s: &str, q: usize, field: &str) -> Res<Vec<f64>> {
    let v = ActivityVector::parse_list(s).map_err(at(field))?;
    v.expect_len(q).map_err(at(field))?;
    Ok(v.into_inner())
}

fn read_json(path: &str, field: &str) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(at(field))?;
    serde_json::from_str(&text).map_err(at(field))
}

pub fn classify(graph: &str, mut out: Output) -> Res<()> {
    out.input(graph);
    let h = load_graph(graph, "graph")?;
    let report = classify_graph(&h).map_err(at("graph"))?;
    out.finish("classify", &to_value(&report))
}

pub fn homspace(args: &HomspaceArgs, mut out: Output) -> Res<()> {
    out.input(&args.board);
    out.input(&args.graph);
    let g = load_board(&args.board, "board")?;
    let h = load_graph(&args.graph, "graph")?;
    let opts = EnumOptions { search_cap: args.cap, ..EnumOptions::default() };
    let hs = HomSpace::enumerate_with(&g, &h, &opts).map_err(at("homspace"))?;
    let value = match args.report {
        HomReport::Count => json!({ "count": hs.len() }),
        HomReport::Connectivity => to_value(&hs.connectivity()),
        HomReport::Isolated => {
            let maps: Vec<&HomMap> = hs.isolated_maps().into_iter().map(|k| &hs.maps()[k]).collect();
            json!({ "count": hs.len(), "isolated": maps })
        }
        HomReport::Marginals => {
            let lambda = match &args.lambda {
                Some(s) => activities(s, h.q(), "--lambda")?,
                None => vec![1.0; h.q()],
            };
            let measure = lambda_measure::<f64>(&hs, &lambda).map_err(at("homspace"))?;
            json!({ "count": hs.len(), "lambda": lambda, "marginals": site_marginals(&hs, &measure) })
        }
    };
    out.finish("homspace", &value)
}

fn solve_options(f: &SolverFlags) -> SolveOptions {
    SolveOptions {
        starts: f.starts,
        tol: f.tol,
        dedup_tol: f.dedup_tol,
        max_iter: f.max_iter,
        seed: f.seed,
        fixed_point_sweeps: f.fixed_point_sweeps,
    }
}

pub fn treegibbs(cmd: &TreeCommand, mut out: Output) -> Res<()> {
    match cmd {
        TreeCommand::Solve { graph, r, lambda, solver } => {
            out.input(graph);
            out.seed(solver.seed);
            let h = load_graph(graph, "graph")?;
            let lam = activities(lambda, h.q(), "--lambda")?;
            let rep = solve_fundamental(&h, *r, &lam, &solve_options(solver)).map_err(at("solve"))?;
            let mut value = to_value(&rep);
            value["class_count"] = json!(rep.class_count());
            value["invariant_count"] = json!(rep.invariant_count());
            value["semi_invariant_count"] = json!(rep.semi_invariant_count());
            out.finish("solve", &value)
        }
        TreeCommand::Sweep { graph, r, family, t, count, bisect_tol, csv, solver } => {
            out.input(graph);
            out.seed(solver.seed);
            let h = load_graph(graph, "graph")?;
            let fam = match family.as_str() {
                "hinge" => ActivityFamily::hinge(),
                "hard_core" | "hardcore" => ActivityFamily::hard_core(),
                "first_node" => ActivityFamily::first_node(h.q()),
                other => return Err(CliError::Config(format!("--family: unknown family `{other}`"))),
            };
            let grid = t.split(',').map(|x| x.trim().parse::<f64>().map_err(at("--t"))).collect::<Res<Vec<_>>>()?;
            let opts = TransitionOptions {
                solve: solve_options(solver),
                count: match count {
                    CountArg::Invariant => CountKind::Invariant,
                    CountArg::Classes => CountKind::Classes,
                },
                bisect_tol: *bisect_tol,
            };
            let rep = count_transition(&h, *r, &fam, &grid, &opts).map_err(at("sweep"))?;
            let mut table = String::from("t,invariant_count,class_count\n");
            for p in &rep.points {
                table.push_str(&format!("{},{},{}\n", p.t, p.invariant_count, p.class_count));
            }
            if *csv && !out.has_dir() {
                print!("{table}");
                return Ok(());
            }
            out.file("sweep.csv", table.into_bytes());
            out.finish("sweep", &to_value(&rep))
        }
        TreeCommand::Sample { graph, r, w, depth, seed, dot } => {
            out.input(graph);
            out.seed(*seed);
            let h = load_graph(graph, "graph")?;
            let weights = WeightVector::parse_list(w).map_err(at("--w"))?;
            weights.expect_len(h.q()).map_err(at("--w"))?;
            let bw = BranchingWalk::new(&h, *r, weights).map_err(at("--w"))?;
            let cfg = sample_branching_walk(&bw, *depth, *seed).map_err(at("sample"))?;
            let dot_text = board_to_dot(&cfg.board, Some(cfg.map.spins()));
            if *dot && !out.has_dir() {
                print!("{dot_text}");
                return Ok(());
            }
            let value = json!({
                "r": r,
                "depth": depth,
                "seed": seed,
                "root": cfg.root,
                "spins": cfg.map.spins(),
                "edges": cfg.board.edges(),
            });
            out.file("sample.dot", dot_text.into_bytes());
            out.finish("sample", &value)
        }
    }
}

fn parse_init(spec: &str, h: &ConstraintGraph) -> Res<Init> {
    let field = "--init";
    match spec {
        "even" => Init::sublattice(h, true).map_err(at(field)),
        "odd" => Init::sublattice(h, false).map_err(at(field)),
        "random" => Ok(Init::RandomGreedy),
        s if s.starts_with("constant:") => s[9..].parse::<u8>().map(Init::Constant).map_err(at(field)),
        path => {
            let v = read_json(path, field)?;
            let list = v.get("spins").unwrap_or(&v);
            let spins: Vec<u8> = serde_json::from_value(list.clone()).map_err(at(field))?;
            Ok(Init::Given(HomMap::new(spins)))
        }
    }
}

fn stats_value(s: &RunStats, series: bool) -> Value {
    let mut v = to_value(s);
    if !series {
        let obj = v.as_object_mut().expect("object");
        for key in ["occupied", "even_occupied", "odd_occupied", "color_counts"] {
            obj.remove(key);
        }
    }
    let last = s.sweeps.checked_sub(1);
    v["final_occupied"] = json!(last.map(|k| s.occupied[k]));
    v["acceptance"] = json!(s.acceptance());
    v
}

pub fn mcmc_run(args: &McmcArgs, mut out: Output) -> Res<()> {
    out.input(&args.board);
    out.input(&args.graph);
    out.seed(args.seed);
    let g = load_board(&args.board, "--board")?;
    let h = load_graph(&args.graph, "--graph")?;
    let lambda = activities(&args.lambda, h.q(), "--lambda")?;
    if args.replicas == 0 {
        return Err(CliError::Config("--replicas: must be at least 1".into()));
    }
    let bipartite = g.parity().is_some();
    let splittable = bipartite && vacant_spin(&h).is_some();
    let init_spec = args.init.clone().unwrap_or_else(|| if splittable { "split" } else { "random" }.to_string());
    let inits: Vec<Init> = if init_spec == "split" {
        vec![parse_init("even", &h)?, parse_init("odd", &h)?]
    } else {
        if Path::new(&init_spec).is_file() {
            out.input(&init_spec);
        }
        vec![parse_init(&init_spec, &h)?]
    };
    let pins: Vec<(usize, u8)> = match &args.pin {
        Some(p) => {
            out.input(p);
            let v = read_json(p, "--pin")?;
            let list = v.get("pins").unwrap_or(&v);
            serde_json::from_value(list.clone()).map_err(at("--pin"))?
        }
        None => Vec::new(),
    };
    let base = RunConfig { burn_in: args.burn_in, pins, ..RunConfig::new(args.sweeps, args.seed, inits[0].clone()) };
    let runs =
        run_replicas(&g, &h, &lambda, &base, args.replicas, |k| inits[k % inits.len()].clone()).map_err(at("mcmc"))?;

    let mut value = json!({
        "board": args.board,
        "graph": args.graph,
        "lambda": lambda,
        "sweeps": args.sweeps,
        "burn_in": base.burn_in(),
        "replicas": args.replicas,
        "seed": args.seed,
        "init": init_spec,
        "runs": runs.iter().map(|s| stats_value(s, args.series)).collect::<Vec<_>>(),
    });
    if bipartite && vacant_spin(&h).is_some() {
        value["bimodality"] = to_value(&bimodality_report(&runs).map_err(at("mcmc"))?);
    }
    for s in &runs {
        out.file(format!("series/replica_{}.csv", s.replica), s.to_csv().into_bytes());
    }
    if let Some(dir) = &args.render {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let style = if h.is_hard_core() {
            RenderStyle::Parity { occupied: 0 }
        } else {
            RenderStyle::Spins { blank: vacant_spin(&h) }
        };
        for s in &runs {
            let img = render(&g, s.final_state.spins(), style, args.block).map_err(at("--render"))?;
            let path = dir.join(format!("replica_{}.ppm", s.replica));
            img.write_ppm(&path).map_err(at("--render"))?;
        }
    }
    if let Some(path) = &args.out {
        let text = serde_json::to_string_pretty(&value).expect("serializes") + "\n";
        fs::write(path, text).map_err(|e| CliError::io(path, e))?;
    }
    out.finish("mcmc", &value)
}
