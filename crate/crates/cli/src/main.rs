//! cep: circuit evaluation over finite semirings.
//!
//! Exit status: 0 on success, 1 on a domain error (parse failures, axiom
//! violations, caps), 2 on usage errors.

mod render;

use cep_core::circuit::Circuit;
use cep_core::classify::classify;
use cep_core::cvp::{reduce_boolean_cvp, reduce_cvp_maxplus, verify_maxplus_reduction, BoolCircuit};
use cep_core::fixtures;
use cep_core::gen;
use cep_core::lang::{
    check_quotient_freeness, f_congruence, intersect, pcfg_verdict, product_construction_nonempty,
    syntactic_monoid, Dfa, GrammarWithSlp,
};
use cep_core::phased::{eval_phased, eval_full, FullEval, PhasedOptions, TieBreak};
use cep_core::powerset::{build_power, power_verdict};
use cep_core::rank::{build_rank, check_rank_axioms};
use cep_core::reduction::{
    step1_pipeline, validate_type_assignment, ReductionOptions, Step1Outcome, TypeAssignment,
};
use cep_core::semigroup::FiniteSemigroup;
use cep_core::semiring::{validate_semiring, FiniteSemiring};
use clap::{Parser, Subcommand, ValueEnum};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cep", version, about = "circuit evaluation over finite semirings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum EvalMode {
    Naive,
    Phased,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum RankChoice {
    /// the preorder-condensation construction
    Built,
    /// subset cardinality (power semirings of groups), validated first
    Card,
}

#[derive(Subcommand)]
enum Command {
    /// Validate the axioms of a semiring (or semigroup) table file
    Check {
        file: PathBuf,
    },
    /// Classify circuit evaluation over a semiring
    Classify {
        file: PathBuf,
        #[arg(long)]
        machine: bool,
    },
    /// Evaluate a circuit
    Eval {
        circuit: PathBuf,
        /// Semiring file; defaults to the built-in fixture named in the
        /// circuit header
        #[arg(long)]
        semiring: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "naive")]
        mode: EvalMode,
        /// Per-phase log (phased mode)
        #[arg(long)]
        trace: bool,
        /// Use |R| as the long-product threshold
        #[arg(long)]
        fidelity: bool,
        /// Seeded tie-breaking for inner choices (phased mode)
        #[arg(long)]
        tie_seed: Option<u64>,
        /// Rank function driving the phase bound and trace labels
        #[arg(long, value_enum, default_value = "built")]
        rank: RankChoice,
        #[arg(long)]
        machine: bool,
    },
    /// Run the reduction to a type-admitting circuit, writing artifacts
    Reduce {
        circuit: PathBuf,
        #[arg(long)]
        semiring: Option<PathBuf>,
        #[arg(long)]
        fidelity: bool,
        /// Directory for the emitted circuit and sidecar files
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Build the rank structure of a semiring and check the axioms
    Rank {
        file: PathBuf,
        #[arg(long)]
        machine: bool,
    },
    /// Build the power semiring of a semigroup (writes a semiring file)
    Power {
        file: PathBuf,
        /// Base-size cap (the output has 2^|S|-1 elements)
        #[arg(long, default_value_t = 8)]
        cap: usize,
        /// Output file; stdout when omitted
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the dichotomy verdict computed both ways
        #[arg(long)]
        verdict: bool,
    },
    /// Syntactic monoid of a dfa's language
    Syntactic {
        file: PathBuf,
        #[arg(long)]
        machine: bool,
    },
    /// Intersection non-emptiness of a uniformized grammar with a regular
    /// language
    Intersect {
        grammar: PathBuf,
        dfa: PathBuf,
        /// Reconstruct a witness word when non-empty
        #[arg(long)]
        witness: bool,
        #[arg(long)]
        machine: bool,
    },
    /// Complexity of the intersection problem for the dfa's language
    PcfgVerdict {
        dfa: PathBuf,
        /// Monoid-size cap for materializing the subset quotient
        #[arg(long, default_value_t = 10)]
        cap: usize,
        #[arg(long)]
        machine: bool,
    },
    /// Translate a layered Boolean circuit to (ℕ, max, +) and verify the
    /// layer invariants
    DemoMaxplus {
        /// Boolean circuit file; a random layered circuit when omitted
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 4)]
        width: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Translate a Boolean circuit to the ring Z_d and verify the values
    DemoCvpZd {
        /// Boolean circuit file; a random circuit when omitted
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(short, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 40)]
        gates: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_semiring(path: &Path) -> Result<FiniteSemiring, String> {
    FiniteSemiring::parse(&read(path)?).map_err(|e| e.to_string())
}

fn load_semigroup(path: &Path) -> Result<FiniteSemigroup, String> {
    FiniteSemigroup::parse(&read(path)?).map_err(|e| e.to_string())
}

/// Resolves the semiring for a circuit file: an explicit --semiring file,
/// or the built-in fixture named in the `circuit over <name>` header.
fn semiring_for_circuit(text: &str, flag: &Option<PathBuf>) -> Result<FiniteSemiring, String> {
    if let Some(path) = flag {
        return load_semiring(path);
    }
    let name = text
        .lines()
        .find_map(|l| {
            let toks: Vec<&str> = l.split_whitespace().collect();
            (toks.len() == 3 && toks[0] == "circuit" && toks[1] == "over").then(|| toks[2].to_string())
        })
        .ok_or("circuit file is missing its 'circuit over <semiring>' header")?;
    fixtures::semiring_by_name(&name)
        .ok_or_else(|| format!("'{name}' is not a built-in semiring; pass --semiring <file>"))
}

fn run(cmd: Command) -> Result<(), String> {
    match cmd {
        Command::Check { file } => {
            let text = read(&file)?;
            let header = text
                .lines()
                .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
                .unwrap_or("");
            if header.starts_with("semigroup") {
                FiniteSemigroup::parse(&text).map_err(|e| e.to_string())?;
                println!("ok: valid semigroup");
                return Ok(());
            }
            match FiniteSemiring::parse(&text) {
                Ok(_) => {
                    println!("ok: valid semiring");
                    Ok(())
                }
                Err(cep_core::Error::InvalidAlgebra { .. }) => {
                    // re-derive the full report with witnesses
                    let raw = cep_core::semiring::parse_raw(&text).map_err(|e| e.to_string())?;
                    let report = validate_semiring(&raw);
                    println!("invalid semiring: {} violated axiom(s)", report.violations.len());
                    for v in report.violations.iter().take(20) {
                        println!("  {}", v.describe(&raw.element_names));
                    }
                    Err("semiring axioms violated".into())
                }
                Err(e) => Err(e.to_string()),
            }
        }
        Command::Classify { file, machine } => {
            let sr = load_semiring(&file)?;
            let report = classify(&sr);
            print!("{}", render::classification(&sr, &report, machine));
            Ok(())
        }
        Command::Eval {
            circuit,
            semiring,
            mode,
            trace,
            fidelity,
            tie_seed,
            rank,
            machine,
        } => {
            let text = read(&circuit)?;
            let sr = semiring_for_circuit(&text, &semiring)?;
            let c = Circuit::parse(&text, &sr).map_err(|e| e.to_string())?;
            let opts = ReductionOptions {
                fidelity_threshold: fidelity,
                ..Default::default()
            };
            match mode {
                EvalMode::Naive => {
                    let res = c.eval_naive(&sr);
                    print!("{}", render::eval_result(&sr, &c, &res, machine));
                }
                EvalMode::Phased => {
                    let norm = c.normalize();
                    let identity = sr
                        .multiplicative()
                        .identity()
                        .ok_or("--mode phased needs a multiplicative identity to synthesize the type assignment; use --mode full")?;
                    let types = TypeAssignment::constant(&norm, identity);
                    if !validate_type_assignment(&norm, &sr, &types).is_empty() {
                        return Err("synthesized type assignment is invalid".into());
                    }
                    let rank = rank_structure(&sr, rank)?;
                    let popts = PhasedOptions {
                        tie_break: tie_seed.map_or(TieBreak::LowIndex, TieBreak::Seeded),
                        trace,
                    };
                    let out = eval_phased(&norm, &sr, &types, &rank, &popts)
                        .map_err(|e| e.to_string())?;
                    if trace {
                        print!("{}", render::phase_trace(&sr, &out.trace));
                    }
                    print!("{}", render::eval_result(&sr, &norm, &out.result, machine));
                    if machine {
                        println!("phases: {}", out.phases);
                    } else {
                        println!("({} phase(s))", out.phases);
                    }
                }
                EvalMode::Full => {
                    let full = eval_full(&c, &sr, opts).map_err(|e| e.to_string())?;
                    match &full {
                        FullEval::Refused { report, .. } => {
                            eprintln!(
                                "note: {} is not {{0,1}}-free (circuit evaluation is predicted P-complete); falling back to the naive evaluator",
                                sr.name
                            );
                            if let Some((z, o)) = report.zero_one_witness {
                                eprintln!(
                                    "      witness pair: 0 = {}, 1 = {}",
                                    sr.elem_name(z),
                                    sr.elem_name(o)
                                );
                            }
                        }
                        FullEval::Phased { phases, affine_arity, .. } => {
                            if !machine {
                                eprintln!("note: {} phase(s), affine arity {}", phases, affine_arity);
                            }
                        }
                        FullEval::Immediate { .. } => {}
                    }
                    if machine {
                        println!("value: {}", sr.elem_name(full.value()));
                    } else {
                        println!("{}", sr.elem_name(full.value()));
                    }
                }
            }
            Ok(())
        }
        Command::Reduce {
            circuit,
            semiring,
            fidelity,
            out_dir,
        } => {
            let text = read(&circuit)?;
            let sr = semiring_for_circuit(&text, &semiring)?;
            let c = Circuit::parse(&text, &sr).map_err(|e| e.to_string())?;
            let opts = ReductionOptions {
                fidelity_threshold: fidelity,
                ..Default::default()
            };
            let stem = circuit
                .file_stem()
                .map(|s| s.to_string_lossy().to_string())
                .unwrap_or_else(|| "circuit".into());
            match step1_pipeline(&c, &sr, opts).map_err(|e| e.to_string())? {
                Step1Outcome::Value(v) => {
                    println!("no long monomials; value: {}", sr.elem_name(v));
                }
                Step1Outcome::Typed(tc) => {
                    fs::create_dir_all(&out_dir).map_err(|e| e.to_string())?;
                    let circuit_path = out_dir.join(format!("{stem}.typed.circuit"));
                    fs::write(&circuit_path, tc.circuit.serialize(&sr)).map_err(|e| e.to_string())?;
                    let sidecar_path = out_dir.join(format!("{stem}.typed.txt"));
                    fs::write(&sidecar_path, render::typed_sidecar(&sr, &tc)).map_err(|e| e.to_string())?;
                    println!(
                        "wrote {} ({} gates) and {}",
                        circuit_path.display(),
                        tc.circuit.len(),
                        sidecar_path.display()
                    );
                    println!("affine arity: {}", tc.affine.arity());
                }
            }
            Ok(())
        }
        Command::Rank { file, machine } => {
            let sr = load_semiring(&file)?;
            let rank = build_rank(&sr);
            let violation = check_rank_axioms(&sr, &rank.rank);
            print!("{}", render::rank_report(&sr, &rank, &violation, machine));
            Ok(())
        }
        Command::Power {
            file,
            cap,
            out,
            verdict,
        } => {
            let sg = load_semigroup(&file)?;
            let p = build_power(&sg, cap).map_err(|e| e.to_string())?;
            let text = p.serialize();
            match out {
                Some(path) => {
                    fs::write(&path, &text).map_err(|e| e.to_string())?;
                    println!("wrote {} ({} elements)", path.display(), p.size());
                }
                None => print!("{text}"),
            }
            if verdict {
                let rep = power_verdict(&sg, cap);
                print!("{}", render::power_report(&rep));
            }
            Ok(())
        }
        Command::Syntactic { file, machine } => {
            let d = Dfa::parse(&read(&file)?).map_err(|e| e.to_string())?;
            let r = syntactic_monoid(&d).map_err(|e| e.to_string())?;
            let freeness = check_quotient_freeness(&r, 10);
            let classes = f_congruence(&r, 10).ok().map(|fc| fc.class_count());
            print!("{}", render::syntactic_report(&r, &freeness, classes, machine));
            Ok(())
        }
        Command::Intersect {
            grammar,
            dfa,
            witness,
            machine,
        } => {
            let g = GrammarWithSlp::parse(&read(&grammar)?).map_err(|e| e.to_string())?;
            let d = Dfa::parse(&read(&dfa)?).map_err(|e| e.to_string())?;
            let r = syntactic_monoid(&d).map_err(|e| e.to_string())?;
            let out = intersect(&g, &r, witness).map_err(|e| e.to_string())?;
            let oracle = product_construction_nonempty(&g, &d).map_err(|e| e.to_string())?;
            if oracle != out.nonempty {
                return Err("internal disagreement between the fixpoint and the product oracle".into());
            }
            if machine {
                println!("nonempty: {}", out.nonempty);
                if let Some(w) = &out.witness {
                    println!("witness: {w}");
                }
            } else {
                println!("{}", if out.nonempty { "non-empty" } else { "empty" });
                if let Some(w) = &out.witness {
                    println!("witness: {}", if w.is_empty() { "(empty word)" } else { w });
                }
            }
            Ok(())
        }
        Command::PcfgVerdict { dfa, cap, machine } => {
            let d = Dfa::parse(&read(&dfa)?).map_err(|e| e.to_string())?;
            let report = pcfg_verdict(&d, cap).map_err(|e| e.to_string())?;
            print!("{}", render::pcfg_report(&report, machine));
            Ok(())
        }
        Command::DemoMaxplus {
            file,
            layers,
            width,
            seed,
        } => {
            let bc = match file {
                Some(path) => BoolCircuit::parse(&read(&path)?).map_err(|e| e.to_string())?,
                None => gen::random_layered_bool_circuit(layers, width, seed),
            };
            let red = reduce_cvp_maxplus(&bc).map_err(|e| e.to_string())?;
            let (bool_value, mp_value) = verify_maxplus_reduction(&bc, &red);
            let two_n = cep_core::cvp::BigUint::from(1u32) << red.layers;
            println!("layers: {}", red.layers);
            println!("boolean value: {}", u8::from(bool_value));
            println!("max-plus value: {mp_value}");
            println!("2^layers: {two_n}");
            if bool_value != (mp_value == two_n) {
                return Err("translation invariant violated".into());
            }
            println!("verified: [C]=1 iff [D]=2^n");
            Ok(())
        }
        Command::DemoCvpZd {
            file,
            d,
            gates,
            seed,
        } => {
            let bc = match file {
                Some(path) => BoolCircuit::parse(&read(&path)?).map_err(|e| e.to_string())?,
                None => gen::random_bool_circuit(gates, true, seed),
            };
            let want = bc.output_value();
            let (c, zd) = reduce_boolean_cvp(&bc, d).map_err(|e| e.to_string())?;
            let got = c.eval_naive(&zd).output.expect("translated circuit keeps its output");
            println!("boolean value: {}", u8::from(want));
            println!("z{d} value: {}", zd.elem_name(got));
            let expect = zd.elem_by_name(if want { "1" } else { "0" }).unwrap();
            if got != expect {
                return Err("translation mismatch".into());
            }
            println!("verified: translated value matches under the 0/1 embedding");
            Ok(())
        }
    }
}


/// Builds the requested rank structure, validating the axioms.
fn rank_structure(
    sr: &FiniteSemiring,
    choice: RankChoice,
) -> Result<cep_core::rank::RankStructure, String> {
    match choice {
        RankChoice::Built => Ok(build_rank(sr)),
        RankChoice::Card => {
            let rank: Vec<usize> = sr
                .element_names()
                .iter()
                .map(|n| n.matches(',').count() + 1)
                .collect();
            if let Some(v) = check_rank_axioms(sr, &rank) {
                return Err(format!(
                    "cardinality is not a rank function here: {}",
                    render::describe_rank_violation(sr, &v)
                ));
            }
            Ok(build_rank(sr).with_rank(rank))
        }
    }
}
