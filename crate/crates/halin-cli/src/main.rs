//! `halin` — recognize Halin and D3-reducible graphs, reconstruct
//! certificates, generate test graphs, and cross-check with brute force.
//!
//! Graphs travel as edge lists: one `u v` pair per line, `#` comments.
//! Exit codes: 0 = membership or certificate affirmed, 1 = negative answer,
//! 2 = usage, parse, or size-limit error (details on standard error).

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use halin::engine::ReductionTrace;
use halin::generate::{
    glue_wheels, random_d3_reducible, random_halin, truncated_tetrahedron, wheel, GluingSpec,
};
use halin::oracle::{self, SeparationWitness};
use halin::recognize::{is_d3_reducible, is_dual_planar_3tree, is_halin, is_wheel};
use halin::reconstruct::{halin_decomposition, hamiltonian_cycle, planar_embedding};
use halin::Graph;

#[derive(Parser)]
#[command(name = "halin", version, about = "Halin and D3-reducible graph toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide membership in a reduction-defined graph class.
    Recognize {
        /// Graph class to test for.
        #[arg(long, value_enum, default_value_t = Class::Halin)]
        class: Class,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Reconstruct a Hamiltonian cycle (answers "no" on graphs the
    /// reduction method does not cover).
    Hamiltonian {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Split a Halin graph into its spanning tree and leaf cycle.
    Decompose {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Reconstruct a planar rotation system.
    Embed {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print a generated graph as an edge list.
    Generate(GenerateArgs),
    /// Brute-force cross-checks: Halin membership by exhaustive search plus
    /// a 3-connectivity report (small graphs only).
    Oracle {
        /// Input edge-list file; standard input when omitted.
        path: Option<PathBuf>,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Input edge-list file; standard input when omitted.
    path: Option<PathBuf>,
    /// Also print the reduction events, then the trace as a dot digraph.
    #[arg(long)]
    trace: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum Class {
    /// Halin graphs: a plane tree without degree-2 vertices plus a cycle
    /// through its leaves.
    Halin,
    /// Everything the D3a/D3b reduction rules collapse to K4.
    D3,
    /// Wheels: a hub joined to every vertex of a cycle.
    Wheel,
    /// Duals of planar 3-trees (stacked triangulations).
    Dual3tree,
}

#[derive(Args)]
struct GenerateArgs {
    /// Which family to generate.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Vertex count (wheel count for `glued`; ignored by
    /// `truncated-tetrahedron`).
    #[arg(long, default_value_t = 12)]
    size: usize,
    /// Seed for the random families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    /// The wheel on `size` vertices.
    Wheel,
    /// The truncated tetrahedron (12 vertices, 3-regular, not Halin).
    TruncatedTetrahedron,
    /// A random Halin graph with roughly `size` vertices.
    RandomHalin,
    /// A random D3-reducible graph with exactly `size` vertices.
    RandomD3,
    /// The primal graph of a random gluing of `size` wheels.
    Glued,
}

fn main() -> ExitCode {
    // Die quietly on a closed pipe (`halin embed big.txt | head`) instead
    // of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Recognize { class, input } => {
            let g = load_graph(input.path.as_deref())?;
            let outcome = match class {
                Class::Halin => is_halin(&g),
                Class::D3 => is_d3_reducible(&g),
                Class::Wheel => is_wheel(&g),
                Class::Dual3tree => is_dual_planar_3tree(&g),
            };
            println!("result: {}", yes_no(outcome.accepted));
            if input.trace {
                print_trace(&outcome.trace);
            }
            Ok(exit_for(outcome.accepted))
        }
        Command::Hamiltonian { input } => {
            let g = load_graph(input.path.as_deref())?;
            let found = match hamiltonian_cycle(&g) {
                Some(cycle) => {
                    println!("result: yes");
                    println!("{cycle}");
                    true
                }
                None => {
                    println!("result: no");
                    false
                }
            };
            if input.trace {
                print_trace(&is_d3_reducible(&g).trace);
            }
            Ok(exit_for(found))
        }
        Command::Decompose { input } => {
            let g = load_graph(input.path.as_deref())?;
            let found = match halin_decomposition(&g) {
                Some(split) => {
                    println!("result: yes");
                    print!("{split}");
                    true
                }
                None => {
                    println!("result: no");
                    false
                }
            };
            if input.trace {
                print_trace(&is_halin(&g).trace);
            }
            Ok(exit_for(found))
        }
        Command::Embed { input } => {
            let g = load_graph(input.path.as_deref())?;
            let found = match planar_embedding(&g) {
                Some(rotation) => {
                    println!("result: yes");
                    print!("{rotation}");
                    true
                }
                None => {
                    println!("result: no");
                    false
                }
            };
            if input.trace {
                print_trace(&is_d3_reducible(&g).trace);
            }
            Ok(exit_for(found))
        }
        Command::Generate(args) => {
            let g = generate(&args)?;
            print!("{}", g.serialize_edge_list());
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { path } => {
            let g = load_graph(path.as_deref())?;
            let halin = oracle::brute_force_halin(&g).map_err(|e| e.to_string())?;
            println!("result: {}", yes_no(halin));
            match oracle::brute_force_3connected(&g).map_err(|e| e.to_string())? {
                None => println!("3-connected: yes"),
                Some(witness) => {
                    println!("3-connected: no");
                    println!("witness: {}", describe(&witness));
                }
            }
            Ok(exit_for(halin))
        }
    }
}

fn load_graph(path: Option<&Path>) -> Result<Graph, String> {
    let text = match path {
        Some(p) => std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("standard input: {e}"))?;
            buf
        }
    };
    Graph::parse_edge_list(&text).map_err(|e| e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn exit_for(affirmed: bool) -> ExitCode {
    if affirmed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_trace(trace: &ReductionTrace) {
    for event in trace.events() {
        println!("{event}");
    }
    print!("{}", trace_digraph(trace));
}

/// Renders the trace as a dot digraph: one node per event in order, chained
/// by arrows, so a renderer shows the reduction sequence.
fn trace_digraph(trace: &ReductionTrace) -> String {
    let mut out = String::from("digraph trace {\n");
    for (i, event) in trace.events().iter().enumerate() {
        let label = event.to_string().replace('\\', "\\\\").replace('"', "\\\"");
        out.push_str(&format!("  e{i} [label=\"{label}\"];\n"));
    }
    for i in 1..trace.len() {
        out.push_str(&format!("  e{} -> e{};\n", i - 1, i));
    }
    out.push_str("}\n");
    out
}

fn describe(witness: &SeparationWitness) -> String {
    match witness {
        SeparationWitness::TooFewVertices => "fewer than four vertices".to_string(),
        SeparationWitness::Disconnected => "already disconnected".to_string(),
        SeparationWitness::CutVertex(v) => format!("cut vertex {v}"),
        SeparationWitness::CutPair(u, v) => format!("cut pair {u} {v}"),
    }
}

fn generate(args: &GenerateArgs) -> Result<Graph, String> {
    match args.kind {
        Kind::Wheel => wheel(args.size).map_err(|e| e.to_string()),
        Kind::TruncatedTetrahedron => Ok(truncated_tetrahedron()),
        Kind::RandomHalin => {
            if args.size < 4 {
                return Err("random-halin needs --size of at least 4".to_string());
            }
            let profile = halin_profile(args.size, args.seed);
            random_halin(&profile, args.seed).map_err(|e| e.to_string())
        }
        Kind::RandomD3 => random_d3_reducible(args.size, args.seed, 0.5).map_err(|e| e.to_string()),
        Kind::Glued => {
            if args.size < 1 {
                return Err("glued needs --size of at least 1 wheel".to_string());
            }
            let spec = random_gluing_spec(args.size, args.seed);
            Ok(glue_wheels(&spec).map_err(|e| e.to_string())?.primal)
        }
    }
}

/// Internal-degree profile whose Halin graph has at least `size` vertices:
/// the tree contributes 1 + d0 vertices up front and d - 1 per later entry.
fn halin_profile(size: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15));
    let mut profile = Vec::new();
    let mut predicted = 1usize;
    while predicted < size {
        let d = rng.gen_range(3..=6usize);
        predicted += if profile.is_empty() { d } else { d - 1 };
        profile.push(d);
    }
    profile
}

fn random_gluing_spec(wheels: usize, seed: u64) -> GluingSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(0x517c_c1b7_2722_0a95));
    let sizes: Vec<usize> = (0..wheels).map(|_| rng.gen_range(4..=8usize)).collect();
    let mut free: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&k| if k == 4 { (0..=3).collect() } else { (0..=k - 2).collect() })
        .collect();
    let mut tree = Vec::new();
    for j in 1..wheels {
        let parent = loop {
            let p = rng.gen_range(0..j);
            if !free[p].is_empty() {
                break p;
            }
        };
        let pi = rng.gen_range(0..free[parent].len());
        let fp = free[parent].swap_remove(pi);
        let ji = rng.gen_range(0..free[j].len());
        let fj = free[j].swap_remove(ji);
        tree.push((parent, fp, j, fj));
    }
    GluingSpec { wheels: sizes, gluing_tree: tree }
}
