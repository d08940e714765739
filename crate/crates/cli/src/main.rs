//! `arbor`: feasibility checks, decompositions, reconfiguration sequences
//! and brute-force verification for arborescence packings.
//!
//! Exit codes: 0 success/feasible, 1 infeasible or invalid sequence,
//! 2 usage or parse errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use arbor_core::digraph::ArcSet;
use arbor_core::error::Error;
use arbor_core::io::{self, LoadedInstance};
use arbor_core::oracle::{self, HardSearchParams};
use arbor_core::packing::{self, PackingInstance, Violation};
use arbor_core::reconfig::{self, ReconfigOptions, ReconfigRun};
use arbor_core::{gen, matroid, multiroot};

#[derive(Parser)]
#[command(name = "arbor", version, about = "Arborescence packing reconfiguration toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether S (or the whole arc pool) packs into k arborescences.
    Check {
        instance: PathBuf,
    },
    /// Split a feasible arc set into k arc-disjoint arborescences.
    Decompose {
        instance: PathBuf,
    },
    /// Compute a reconfiguration sequence from S to T.
    Reconfigure {
        instance: PathBuf,
        /// Force multiroot mode; errors if the instance carries a root.
        #[arg(long)]
        multiroot: bool,
        /// Write one Graphviz file per intermediate state into DIR.
        #[arg(long, value_name = "DIR")]
        emit_dot: Option<PathBuf>,
        /// Record tight sets, auxiliary arcs and dicycles per step.
        #[arg(long)]
        trace: bool,
        /// Write the sequence JSON here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Replay a sequence file against an instance.
    Verify {
        instance: PathBuf,
        sequence: PathBuf,
    },
    /// Brute-force ground truth on small instances.
    Oracle {
        instance: Option<PathBuf>,
        /// Exact exchange distance between S and T.
        #[arg(long)]
        distance: bool,
        /// Enumerate the feasible family and test its connectivity.
        #[arg(long)]
        connectivity: bool,
        /// Search small digraphs for detour instances (needs no input file).
        #[arg(long)]
        find_hard: bool,
        /// Arc budget for enumeration.
        #[arg(long, default_value_t = oracle::DEFAULT_ARC_BUDGET)]
        budget: usize,
        /// Stop the hard-instance search after this many witnesses.
        #[arg(long, default_value_t = 1)]
        limit: usize,
    },
    /// Verify the common-basis reconfigurability counterexample.
    MatroidDemo,
    /// Generate a random instance with feasible S and T.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Seed for the generator; the ARBOR_SEED env var takes precedence.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        extra_arcs: usize,
        /// Generate without a fixed root.
        #[arg(long)]
        multiroot: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failure carrying the process exit code.
struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn usage(message: impl Into<String>) -> Self {
        CmdError {
            code: 2,
            message: message.into(),
        }
    }

    fn rejected(message: impl Into<String>) -> Self {
        CmdError {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Infeasible(_) | Error::InvalidSequence(_) => 1,
            _ => 2,
        };
        CmdError {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("arbor: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(command: Command) -> Result<(), CmdError> {
    match command {
        Command::Check { instance } => cmd_check(&instance),
        Command::Decompose { instance } => cmd_decompose(&instance),
        Command::Reconfigure {
            instance,
            multiroot,
            emit_dot,
            trace,
            output,
        } => cmd_reconfigure(&instance, multiroot, emit_dot.as_deref(), trace, output.as_deref()),
        Command::Verify { instance, sequence } => cmd_verify(&instance, &sequence),
        Command::Oracle {
            instance,
            distance,
            connectivity,
            find_hard,
            budget,
            limit,
        } => cmd_oracle(instance.as_deref(), distance, connectivity, find_hard, budget, limit),
        Command::MatroidDemo => cmd_matroid_demo(),
        Command::Gen {
            n,
            k,
            seed,
            extra_arcs,
            multiroot,
            output,
        } => cmd_gen(n, k, seed, extra_arcs, multiroot, output.as_deref()),
    }
}

fn read_instance(path: &Path) -> Result<LoadedInstance, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(io::load_instance(&text)?)
}

fn violation_json(v: &Violation) -> serde_json::Value {
    match v {
        Violation::SelfLoop { arc } => json!({"kind": "self_loop", "arc": arc.0}),
        Violation::Degree {
            vertex,
            indegree,
            expected,
        } => json!({
            "kind": "degree", "vertex": vertex.0,
            "indegree": indegree, "expected": expected,
        }),
        Violation::ArcCount { expected, actual } => {
            json!({"kind": "arc_count", "expected": expected, "actual": actual})
        }
        Violation::Cut { set, cut_arcs } => json!({
            "kind": "cut",
            "set": set.iter().map(|v| v.0).collect::<Vec<_>>(),
            "cut_arcs": cut_arcs.iter().map(|a| a.0).collect::<Vec<_>>(),
        }),
    }
}

/// The arc set a feasibility-style command operates on: S if present,
/// otherwise the whole pool.
fn subject_set(loaded: &LoadedInstance) -> ArcSet {
    loaded
        .s
        .clone()
        .unwrap_or_else(|| loaded.digraph.full_arcs())
}

fn check_verdict(
    loaded: &LoadedInstance,
    set: &ArcSet,
) -> Result<packing::FeasibilityVerdict, CmdError> {
    if loaded.is_multiroot() {
        Ok(multiroot::check_feasible_multiroot(&loaded.digraph, loaded.k, set)?)
    } else {
        let inst = rooted_instance(loaded)?;
        Ok(packing::check_feasible(&inst, set))
    }
}

fn rooted_instance(loaded: &LoadedInstance) -> Result<PackingInstance, CmdError> {
    Ok(PackingInstance::new(loaded.digraph.clone(), loaded.k)?)
}

fn cmd_check(path: &Path) -> Result<(), CmdError> {
    let loaded = read_instance(path)?;
    let set = subject_set(&loaded);
    let verdict = check_verdict(&loaded, &set)?;
    match verdict.violation() {
        None => {
            println!("{}", json!({"feasible": true}));
            Ok(())
        }
        Some(v) => {
            println!(
                "{}",
                json!({"feasible": false, "violation": violation_json(v)})
            );
            Err(CmdError::rejected(format!("infeasible: {v}")))
        }
    }
}

fn cmd_decompose(path: &Path) -> Result<(), CmdError> {
    let loaded = read_instance(path)?;
    let set = subject_set(&loaded);
    let parts: Vec<ArcSet> = if loaded.is_multiroot() {
        multiroot::check_feasible_multiroot(&loaded.digraph, loaded.k, &set)?.require()?;
        let hat = multiroot::HatInstance::build(&loaded.digraph, loaded.k)?;
        let lifted = hat.hat_set(&loaded.digraph, &set)?;
        let dec = packing::decompose(hat.instance(), &lifted)?;
        dec.parts.iter().map(|p| hat.project(p)).collect()
    } else {
        let inst = rooted_instance(&loaded)?;
        packing::decompose(&inst, &set)?.parts
    };
    let lists: Vec<Vec<usize>> = parts
        .iter()
        .map(|p| p.iter().map(|id| id.0).collect())
        .collect();
    println!("{}", json!({ "parts": lists }));
    Ok(())
}

fn cmd_reconfigure(
    path: &Path,
    force_multiroot: bool,
    emit_dot: Option<&Path>,
    trace: bool,
    output: Option<&Path>,
) -> Result<(), CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::usage(format!("cannot read {}: {e}", path.display())))?;
    let file = io::parse_instance(&text)?;
    let loaded = io::validate_instance(&file)?;
    if force_multiroot && !loaded.is_multiroot() {
        return Err(CmdError::usage(
            "--multiroot given but the instance specifies a root",
        ));
    }
    let (Some(s), Some(t)) = (loaded.s.clone(), loaded.t.clone()) else {
        return Err(CmdError::usage("reconfigure needs both S and T"));
    };
    let options = ReconfigOptions {
        strict_checks: true,
        capture_trace: trace,
    };
    let run: ReconfigRun = if loaded.is_multiroot() {
        multiroot::reconfigure_multiroot_with(&loaded.digraph, loaded.k, &s, &t, options)?
    } else {
        let inst = rooted_instance(&loaded)?;
        reconfig::reconfigure_with(&inst, &s, &t, options)?
    };

    let bound = reconfig::length_bound(s.difference(&t).len(), loaded.k);
    let trace_files = trace.then(|| run.trace.iter().map(io::trace_step_file).collect());
    let seq_file = io::sequence_to_file(io::instance_digest(&file), bound, &run.sequence, trace_files);
    let rendered = io::emit_sequence(&seq_file);
    match output {
        Some(out) => fs::write(out, rendered)
            .map_err(|e| CmdError::usage(format!("cannot write {}: {e}", out.display())))?,
        None => println!("{rendered}"),
    }

    if let Some(dir) = emit_dot {
        fs::create_dir_all(dir)
            .map_err(|e| CmdError::usage(format!("cannot create {}: {e}", dir.display())))?;
        for (i, state) in run.sequence.states().iter().enumerate() {
            let dot = io::state_dot(&loaded.digraph, state, &t, &format!("state_{i}"));
            let file = dir.join(format!("state_{i}.dot"));
            fs::write(&file, dot)
                .map_err(|e| CmdError::usage(format!("cannot write {}: {e}", file.display())))?;
        }
    }
    Ok(())
}

fn cmd_verify(instance_path: &Path, sequence_path: &Path) -> Result<(), CmdError> {
    let text = fs::read_to_string(instance_path)
        .map_err(|e| CmdError::usage(format!("cannot read {}: {e}", instance_path.display())))?;
    let file = io::parse_instance(&text)?;
    let loaded = io::validate_instance(&file)?;
    let seq_text = fs::read_to_string(sequence_path)
        .map_err(|e| CmdError::usage(format!("cannot read {}: {e}", sequence_path.display())))?;
    let seq_file = io::parse_sequence(&seq_text)?;

    if seq_file.instance_digest != io::instance_digest(&file) {
        println!("{}", json!({"valid": false, "reason": "instance digest mismatch"}));
        return Err(CmdError::rejected("instance digest mismatch"));
    }
    let (Some(s), Some(t)) = (loaded.s.clone(), loaded.t.clone()) else {
        return Err(CmdError::usage("verify needs both S and T in the instance"));
    };
    let seq = io::sequence_from_file(&loaded.digraph, &s, &seq_file)?;
    let valid = if loaded.is_multiroot() {
        multiroot::verify_sequence_multiroot(&loaded.digraph, loaded.k, &s, &t, &seq)?
    } else {
        let inst = rooted_instance(&loaded)?;
        reconfig::verify_sequence(&inst, &s, &t, &seq)
    };
    println!("{}", json!({"valid": valid, "length": seq.len()}));
    if valid {
        Ok(())
    } else {
        Err(CmdError::rejected("sequence replay failed"))
    }
}

fn cmd_oracle(
    instance: Option<&Path>,
    distance: bool,
    connectivity: bool,
    find_hard: bool,
    budget: usize,
    limit: usize,
) -> Result<(), CmdError> {
    if usize::from(distance) + usize::from(connectivity) + usize::from(find_hard) != 1 {
        return Err(CmdError::usage(
            "pick exactly one of --distance, --connectivity, --find-hard",
        ));
    }
    if find_hard {
        let params = HardSearchParams {
            max_witnesses: limit,
            ..HardSearchParams::default()
        };
        let witnesses = oracle::find_hard(&params)?;
        let rendered: Vec<serde_json::Value> = witnesses
            .iter()
            .map(|w| {
                let file = io::instance_to_file(&w.digraph, w.k, Some(&w.s), Some(&w.t));
                json!({
                    "instance": file,
                    "difference": w.difference,
                    "distance": w.distance,
                })
            })
            .collect();
        println!("{}", json!({ "witnesses": rendered }));
        return Ok(());
    }

    let path = instance.ok_or_else(|| CmdError::usage("this oracle mode needs an instance"))?;
    let loaded = read_instance(path)?;
    if connectivity {
        let nodes = if loaded.is_multiroot() {
            oracle::enumerate_feasible_multiroot(&loaded.digraph, loaded.k, budget)?
        } else {
            oracle::enumerate_feasible(&rooted_instance(&loaded)?, budget)?
        };
        let graph = oracle::ExchangeGraph::build(nodes);
        let connected = graph.is_connected();
        println!(
            "{}",
            json!({"feasible_count": graph.nodes().len(), "connected": connected})
        );
        if connected {
            return Ok(());
        }
        return Err(CmdError::rejected("exchange graph is disconnected"));
    }

    // --distance
    let (Some(s), Some(t)) = (loaded.s.clone(), loaded.t.clone()) else {
        return Err(CmdError::usage("--distance needs both S and T"));
    };
    let dist = if loaded.is_multiroot() {
        oracle::exchange_distance_multiroot(&loaded.digraph, loaded.k, &s, &t, budget)?
    } else {
        oracle::exchange_distance(&rooted_instance(&loaded)?, &s, &t, budget)?
    };
    match dist {
        Some(d) => {
            println!(
                "{}",
                json!({"distance": d, "difference": s.difference(&t).len()})
            );
            Ok(())
        }
        None => {
            println!("{}", json!({"distance": null}));
            Err(CmdError::rejected("no exchange path between S and T"))
        }
    }
}

fn cmd_matroid_demo() -> Result<(), CmdError> {
    let m1 = matroid::build_m1();
    let m2 = matroid::build_m2();
    let ground = m1.ground().clone();
    println!(
        "matroid pair (M1, M2) on {{{}}}",
        (0..ground.len()).map(|i| ground.name(i)).collect::<Vec<_>>().join(", ")
    );
    println!(
        "  M1: {} bases, exchange axiom: {}",
        m1.bases().len(),
        if m1.satisfies_exchange_axiom() { "ok" } else { "VIOLATED" }
    );
    println!(
        "  M2: {} bases, exchange axiom: {}",
        m2.bases().len(),
        if m2.satisfies_exchange_axiom() { "ok" } else { "VIOLATED" }
    );
    let common = matroid::common_bases(&m1, &m2)?;
    println!("  {} common bases:", common.len());
    for b in &common {
        println!("    {}", ground.format_set(*b));
    }
    let report = matroid::rcb_holds(&m1, &m2)?;
    println!(
        "  exchange graph: {}",
        if report.connected {
            "connected (every common basis reachable by single exchanges)"
        } else {
            "disconnected"
        }
    );

    let m1_sq = matroid::k_fold_union(&m1, 2)?;
    let m2_sq = matroid::k_fold_union(&m2, 2)?;
    println!("2-fold unions (2M1, 2M2)");
    println!("  2M1: {} bases", m1_sq.bases().len());
    println!("  2M2: {} bases", m2_sq.bases().len());
    let common2 = matroid::common_bases(&m1_sq, &m2_sq)?;
    println!("  {} common bases:", common2.len());
    for b in &common2 {
        println!("    {}", ground.format_set(*b));
    }
    let report2 = matroid::rcb_holds(&m1_sq, &m2_sq)?;
    if report2.connected {
        println!("  exchange graph: connected");
        return Err(CmdError::rejected(
            "expected the doubled pair to be disconnected",
        ));
    }
    println!(
        "  exchange graph: {} components (single exchanges cannot cross)",
        report2.components.len()
    );
    let a = report2.components[0][0];
    let b = report2.components[1][0];
    println!(
        "  witness pair differing in {} elements: {} vs {}",
        a.difference(b).len(),
        ground.format_set(a),
        ground.format_set(b)
    );
    Ok(())
}

fn cmd_gen(
    n: usize,
    k: usize,
    seed: u64,
    extra_arcs: usize,
    multiroot: bool,
    output: Option<&Path>,
) -> Result<(), CmdError> {
    let seed = match std::env::var("ARBOR_SEED") {
        Ok(text) => text
            .parse()
            .map_err(|_| CmdError::usage("ARBOR_SEED must be an unsigned integer"))?,
        Err(_) => seed,
    };
    if n == 0 {
        return Err(CmdError::usage("n must be at least 1"));
    }
    let params = gen::GenParams {
        n,
        k,
        seed,
        extra_arcs,
        rooted: !multiroot,
    };
    let generated = gen::generate(&params)?;
    let file = io::instance_to_file(
        &generated.digraph,
        k,
        Some(&generated.s),
        Some(&generated.t),
    );
    let rendered = io::emit_instance(&file);
    match output {
        Some(out) => fs::write(out, rendered)
            .map_err(|e| CmdError::usage(format!("cannot write {}: {e}", out.display())))?,
        None => println!("{rendered}"),
    }
    Ok(())
}
