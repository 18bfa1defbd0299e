use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use max2csp_core::algo_a::solve_a;
use max2csp_core::algo_b::{build_reduction_tree, iii_depth, solve_b};
use max2csp_core::encode::encode_max_cut;
use max2csp_core::forest::solve_via_induced_forest;
use max2csp_core::formats::{emit_dimacs, parse, parse_mis, Format};
use max2csp_core::generate::{cubic, gnm, union_k5};
use max2csp_core::lp::{
    beta4_of_alpha, beta_of_alpha, dual_a, lp_alpha_table, lp_maximize, rational, table_a, table_b, table_b4,
    verify_dual, EffectTable,
};
use max2csp_core::mis::solve_mis;
use max2csp_core::oracle::{brute_force_solve_with_budget, DEFAULT_BUDGET};
use max2csp_core::treewidth::{
    decomposition_from_reduction_tree, export_pace, solve_dp, validate_decomposition, TreeDecomposition,
};
use max2csp_core::{score_assignment, Error, Instance, Solution};

#[derive(Parser)]
#[command(name = "max2csp", version, about = "Exact Max 2-CSP solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    A,
    B,
    Dp,
    Forest,
    Oracle,
    /// Independent-set branching; needs `--format mis`.
    Mis,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::A => "a",
            Algorithm::B => "b",
            Algorithm::Dp => "dp",
            Algorithm::Forest => "forest",
            Algorithm::Oracle => "oracle",
            Algorithm::Mis => "mis",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Gnm,
    Cubic,
    UnionK5,
}

#[derive(clap::Args)]
struct Input {
    /// Instance file, or `-` for stdin.
    file: PathBuf,
    /// csp, maxcut-dimacs, wcnf or mis.
    #[arg(long, default_value = "csp")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance exactly.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value = "b")]
        algorithm: Algorithm,
        /// Print reduction counts and timing.
        #[arg(long)]
        stats: bool,
        /// Compare with exhaustive search when it fits the budget.
        #[arg(long)]
        oracle_check: bool,
        /// Write the tree decomposition in PACE format.
        #[arg(long, value_name = "FILE")]
        emit_td: Option<PathBuf>,
        /// Accepted for symmetry with the other commands; every solver is
        /// deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive search.
    Oracle {
        #[command(flatten)]
        input: Input,
    },
    /// Print the policy-B reduction tree, one node per line.
    Tree {
        #[command(flatten)]
        input: Input,
    },
    /// Build and check the tree decomposition.
    Tw {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "FILE")]
        emit_td: Option<PathBuf>,
    },
    /// Solve and certify the depth linear programs.
    LpVerify {
        /// Dump a table (a, b or b4) as TSV instead.
        #[arg(long, value_name = "TABLE")]
        tsv: Option<String>,
    },
    /// Solve a batch of generated Max Cut instances in parallel.
    Bench {
        #[arg(value_enum)]
        kind: GraphKind,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 30)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "b")]
        algorithm: Algorithm,
    },
    /// Print a generated graph in DIMACS edge format.
    Generate {
        #[arg(value_enum)]
        kind: GraphKind,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 15)]
        m: usize,
        /// Number of K5 copies.
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e.to_string())
        } else {
            Failure::Internal(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn budget() -> Result<u64, Failure> {
    match std::env::var("MAX2CSP_ORACLE_BUDGET") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Failure::Input(format!("MAX2CSP_ORACLE_BUDGET={s:?} is not a number"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn load(input: &Input) -> Result<(Instance, String), Failure> {
    let text = read_text(&input.file)?;
    Ok((parse(input.format, &text)?, text))
}

fn write_td(path: &Path, td: &TreeDecomposition) -> Result<(), Failure> {
    std::fs::write(path, export_pace(td)).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Colors per vertex, 1-based vertex ids in input order.
fn assignment_line(inst: &Instance, sol: &Solution) -> String {
    let parts: Vec<String> = inst
        .vertices()
        .map(|v| format!("{}:{}", v + 1, sol.assignment.get(v).map_or("?".into(), |c| c.to_string())))
        .collect();
    parts.join(" ")
}

fn solve_with(inst: &Instance, algorithm: Algorithm, text: &str, format: Format) -> Result<(Solution, Option<TreeDecomposition>), Failure> {
    let start = Instant::now();
    Ok(match algorithm {
        Algorithm::A => (solve_a(inst)?, None),
        Algorithm::B => (solve_b(inst)?, None),
        Algorithm::Forest => (solve_via_induced_forest(inst)?, None),
        Algorithm::Dp => {
            let (sol, td) = solve_dp(inst)?;
            (sol, Some(td))
        }
        Algorithm::Oracle => {
            let (score, assignment) = brute_force_solve_with_budget(inst, budget()?)?;
            let mut sol = Solution {
                score,
                assignment,
                stats: Default::default(),
            };
            sol.stats.elapsed = start.elapsed();
            (sol, None)
        }
        Algorithm::Mis => {
            if format != Format::Mis {
                return Err(Failure::Input("--algorithm mis needs --format mis".into()));
            }
            let m = parse_mis(text)?;
            let (score, set) = solve_mis(m.n, &m.edges, &m.weights)?;
            let mut colors = vec![0; m.n];
            for v in set {
                colors[v] = 1;
            }
            let mut sol = Solution {
                score,
                assignment: max2csp_core::Assignment::from_colors(colors),
                stats: Default::default(),
            };
            sol.stats.elapsed = start.elapsed();
            (sol, None)
        }
    })
}

fn cmd_solve(input: &Input, algorithm: Algorithm, stats: bool, oracle_check: bool, emit_td: Option<&Path>) -> Outcome {
    let (inst, text) = load(input)?;
    let (sol, td) = solve_with(&inst, algorithm, &text, input.format)?;
    if score_assignment(&inst, &sol.assignment)? != sol.score {
        return Err(Failure::Internal("returned assignment does not attain the returned score".into()));
    }
    let mut out = String::new();
    writeln!(out, "score={}", sol.score).unwrap();
    writeln!(out, "assignment={}", assignment_line(&inst, &sol)).unwrap();
    writeln!(out, "iii_count={}", sol.stats.iii_count).unwrap();
    writeln!(out, "iii_depth={}", sol.stats.iii_depth).unwrap();
    writeln!(out, "algorithm={}", algorithm.name()).unwrap();
    if stats {
        let [k0, k1, k2, k3] = sol.stats.by_kind;
        writeln!(out, "vertices={}\nedges={}", inst.num_vertices(), inst.num_edges()).unwrap();
        writeln!(out, "reductions_0={k0}\nreductions_i={k1}\nreductions_ii={k2}\nreductions_iii={k3}").unwrap();
        writeln!(out, "color_branches={}", sol.stats.color_branches).unwrap();
        writeln!(out, "elapsed_ms={:.3}", sol.stats.elapsed.as_secs_f64() * 1e3).unwrap();
    }
    if oracle_check {
        match brute_force_solve_with_budget(&inst, budget()?) {
            Ok((best, _)) if best == sol.score => writeln!(out, "oracle_check=pass").unwrap(),
            Ok((best, _)) => {
                return Err(Failure::Internal(format!("solver score {} differs from oracle {best}", sol.score)));
            }
            Err(Error::BudgetExceeded { .. }) => writeln!(out, "oracle_check=skipped").unwrap(),
            Err(e) => return Err(e.into()),
        }
    }
    if let Some(path) = emit_td {
        let td = match td {
            Some(td) => td,
            None => decomposition_from_reduction_tree(&inst, &build_reduction_tree(&inst))?,
        };
        write_td(path, &td)?;
        writeln!(out, "td_width={}", td.width()).unwrap();
    }
    Ok(out)
}

fn cmd_oracle(input: &Input) -> Outcome {
    let (inst, _) = load(input)?;
    let (score, assignment) = brute_force_solve_with_budget(&inst, budget()?)?;
    let sol = Solution {
        score,
        assignment,
        stats: Default::default(),
    };
    Ok(format!("score={score}\nassignment={}\nalgorithm=oracle\n", assignment_line(&inst, &sol)))
}

fn cmd_tree(input: &Input) -> Outcome {
    let (inst, _) = load(input)?;
    let tree = build_reduction_tree(&inst);
    let mut out = format!("iii_count={}\niii_depth={}\n", tree.iii_count(), iii_depth(&tree));
    let roots: Vec<String> = tree.roots().iter().map(|r| (r + 1).to_string()).collect();
    writeln!(out, "roots={}", roots.join(" ")).unwrap();
    for &v in tree.order() {
        let kids: Vec<String> = tree.children(v).iter().map(|c| (c + 1).to_string()).collect();
        writeln!(
            out,
            "node={} kind={} parent={} depth={} children={}",
            v + 1,
            tree.kind(v).expect("tree vertex"),
            tree.parent(v).map_or("-".into(), |p| (p + 1).to_string()),
            tree.node_depth(v),
            if kids.is_empty() { "-".into() } else { kids.join(",") },
        )
        .unwrap();
    }
    Ok(out)
}

fn cmd_tw(input: &Input, emit_td: Option<&Path>) -> Outcome {
    let (inst, _) = load(input)?;
    let tree = build_reduction_tree(&inst);
    let td = decomposition_from_reduction_tree(&inst, &tree)?;
    let problems = validate_decomposition(&inst, &td);
    if let Some(p) = problems.first() {
        return Err(Failure::Internal(format!("constructed decomposition is invalid: {p}")));
    }
    if let Some(path) = emit_td {
        write_td(path, &td)?;
    }
    Ok(format!(
        "width={}\nbags={}\niii_depth={}\nvalid=true\n",
        td.width(),
        td.bags.len(),
        iii_depth(&tree)
    ))
}

fn cmd_lp_verify(tsv: Option<&str>) -> Outcome {
    if let Some(name) = tsv {
        let table = match name {
            "a" => table_a(),
            "b" => table_b(),
            "b4" => table_b4(),
            _ => return Err(Failure::Input(format!("unknown table {name:?} (expected a, b or b4)"))),
        };
        return Ok(table.to_tsv());
    }
    let mut out = String::new();
    let optimum = |t: &EffectTable| -> Result<_, Failure> {
        let sol = lp_maximize(t)?;
        if !sol.certifies(t) {
            return Err(Failure::Internal(format!("simplex result for {} does not certify itself", t.name)));
        }
        Ok(sol)
    };
    let (a, b, b4) = (table_a(), table_b(), table_b4());
    let sa = optimum(&a)?;
    writeln!(out, "tableA={}", sa.value).unwrap();
    writeln!(out, "tableB={}", optimum(&b)?.value).unwrap();
    writeln!(out, "tableB4={}", optimum(&b4)?.value).unwrap();
    writeln!(out, "dualA={}", if verify_dual(&a, &dual_a(), &sa.value) { "pass" } else { "fail" }).unwrap();
    let sb = optimum(&b)?;
    let y: Vec<String> = sb.dual.iter().map(ToString::to_string).collect();
    writeln!(out, "dualB=({}) {}", y.join(", "), if verify_dual(&b, &sb.dual, &sb.value) { "pass" } else { "fail" }).unwrap();
    for s in ["0", "1/20", "1/9", "1/8", "1/7", "1/6", "1/5"] {
        let alpha = rational(s)?;
        let lp = optimum(&lp_alpha_table(&alpha)?)?.value;
        let closed = beta_of_alpha(&alpha)?;
        writeln!(
            out,
            "beta({s})={lp} closed_form={closed} beta4={} {}",
            beta4_of_alpha(&alpha)?,
            if lp == closed { "pass" } else { "fail" }
        )
        .unwrap();
    }
    Ok(out)
}

fn graph(kind: GraphKind, n: usize, m: usize, k: usize, seed: u64) -> Result<(usize, Vec<(usize, usize)>), Failure> {
    Ok(match kind {
        GraphKind::Gnm => (n, gnm(n, m, seed)?),
        GraphKind::Cubic => (n, cubic(n, seed)?),
        GraphKind::UnionK5 => (5 * k, union_k5(k)),
    })
}

fn cmd_bench(kind: GraphKind, n: usize, m: usize, k: usize, count: u64, seed: u64, algorithm: Algorithm) -> Outcome {
    if matches!(algorithm, Algorithm::Mis) {
        return Err(Failure::Input("bench runs Max Cut; pick a, b, dp, forest or oracle".into()));
    }
    let rows: Vec<Result<String, Failure>> = (0..count)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_add(i);
            let (n, edges) = graph(kind, n, m, k, s)?;
            let inst = encode_max_cut(n, &edges, None)?;
            let (sol, _) = solve_with(&inst, algorithm, "", Format::MaxcutDimacs)?;
            Ok(format!(
                "seed={s} n={n} m={} score={} iii_count={} iii_depth={} color_branches={} elapsed_ms={:.3}",
                edges.len(),
                sol.score,
                sol.stats.iii_count,
                sol.stats.iii_depth,
                sol.stats.color_branches,
                sol.stats.elapsed.as_secs_f64() * 1e3
            ))
        })
        .collect();
    let mut out = String::new();
    for row in rows {
        writeln!(out, "{}", row?).unwrap();
    }
    Ok(out)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Solve {
            input,
            algorithm,
            stats,
            oracle_check,
            emit_td,
            seed: _,
        } => cmd_solve(&input, algorithm, stats, oracle_check, emit_td.as_deref()),
        Command::Oracle { input } => cmd_oracle(&input),
        Command::Tree { input } => cmd_tree(&input),
        Command::Tw { input, emit_td } => cmd_tw(&input, emit_td.as_deref()),
        Command::LpVerify { tsv } => cmd_lp_verify(tsv.as_deref()),
        Command::Bench {
            kind,
            n,
            m,
            k,
            count,
            seed,
            algorithm,
        } => cmd_bench(kind, n, m, k, count, seed, algorithm),
        Command::Generate { kind, n, m, k, seed } => {
            let (n, edges) = graph(kind, n, m, k, seed)?;
            Ok(emit_dimacs(n, &edges))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
