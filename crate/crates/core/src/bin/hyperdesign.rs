//! Command-line front end: generation, verification, and pipelines with
//! reproducible seeds and JSON input/output.
//!
//! Exit codes: 0 success or verification pass, 1 verification failure (the
//! verdict is printed on stdout as JSON), 2 usage or input error.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use hyperdesign::divfix::balancer::{balance, balancer, check_auto_div, SyntheticAdapters};
use hyperdesign::divfix::fixer::{make_divisible, FixerMode};
use hyperdesign::divfix::nabla::nabla;
use hyperdesign::divfix::shifter::{
    multishifter, scan_congruences, simple_shifter, FstarDecomposition,
};
use hyperdesign::error::Error;
use hyperdesign::hypergraph::{
    div_vector, is_divisible, is_weakly_regular, shadow, typicality, Divisibility, RGraph,
    TypicalityMode, Vertex,
};
use hyperdesign::json::{CopyJson, HypergraphJson, PackingJson, ResolvableJson, SetFunctionJson};
use hyperdesign::packing::{
    greedy_nibble, k_random_packing, verify_design, verify_packing, well_separation, NibbleOpts,
    PackingVerdict, WellSeparation,
};
use hyperdesign::partite::{resolvable_decomposition, verify_resolvable, ResolvableVerdict};
use hyperdesign::regularise::{regularise, DEFAULT_EDGE_BUDGET};

#[derive(Parser)]
#[command(name = "hyperdesign", version, about = "hypergraph decomposition constructions and verifiers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Divisibility vector of a hypergraph.
    Deg {
        #[arg(long = "in")]
        input: String,
    },
    /// Check (pattern, lambda)-divisibility of a host.
    Divcheck {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Weak regularity test.
    Weakreg {
        #[arg(long = "in")]
        input: String,
    },
    /// Shadow of a hypergraph, with the inherited regularity vector.
    Shadow {
        #[arg(long = "in")]
        input: String,
    },
    /// Typicality certificate.
    Typical {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        h: u64,
        #[arg(long)]
        p: f64,
        /// Sample count; exhaustive when omitted.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate the resolvable partite clique decomposition.
    PartiteGen {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        f: usize,
        #[arg(long)]
        r: usize,
    },
    /// Verify a resolvable partite decomposition.
    PartiteVerify {
        #[arg(long = "in")]
        input: String,
    },
    /// Pack a pattern perfectly into a weakly regular host.
    Regularise {
        #[arg(long = "in")]
        input: String,
        #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
        budget: u64,
    },
    /// Random greedy packing with leftover.
    Nibble {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        kappa: Option<u64>,
        #[arg(long)]
        max_rounds: Option<u64>,
        /// Independent seeds starting at --seed; a summary replaces the packing.
        #[arg(long, default_value_t = 1)]
        trials: u64,
        /// Worker threads for the trials.
        #[arg(long, default_value_t = 1)]
        jobs: u64,
    },
    /// Random pattern placement on every clique of a clique packing.
    Krandom {
        #[arg(long)]
        cliques: String,
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Verify a packing against a host.
    PackVerify {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        packing: String,
    },
    /// Verify an (F, lambda)-design.
    DesignVerify {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        packing: String,
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Well-separation of a packing.
    Wellsep {
        #[arg(long)]
        packing: String,
    },
    /// Build a degree shifter from a pattern and its regularised host.
    ShifterGen {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(long, value_enum, default_value_t = ShifterKind::Simple)]
        kind: ShifterKind,
        #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
        budget: u64,
    },
    /// Verify a shifter artifact's congruence table.
    ShifterVerify {
        #[arg(long = "in")]
        input: String,
    },
    /// Build a balancer for the given moduli.
    BalancerGen {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        k: usize,
        /// Comma-separated moduli b_0..b_k.
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
    },
    /// Balance a set function with a balancer and synthetic adapters.
    Balance {
        #[arg(long)]
        phi: String,
        #[arg(long)]
        balancer: String,
        #[arg(long)]
        h_k: u64,
    },
    /// Automatic divisibility check.
    Autodiv {
        #[arg(long)]
        phi: String,
        /// Comma-separated moduli b_0..b_k.
        #[arg(long)]
        b: String,
        /// Comma-separated vertices of the confinement set K.
        #[arg(long)]
        k_set: String,
    },
    /// Extend every edge of a multigraph into a pattern copy.
    Nabla {
        #[arg(long = "in")]
        input: String,
        #[arg(long)]
        pattern: String,
        /// Comma-separated rooted edge of the pattern.
        #[arg(long)]
        e0: String,
    },
    /// Build the divisibility fixer and answer one input.
    Fixdiv {
        #[arg(long)]
        pattern: String,
        #[arg(long = "in")]
        input: String,
        /// Universe size in abstract mode.
        #[arg(long)]
        n: Option<usize>,
        /// Host graph path for embedded mode.
        #[arg(long)]
        host: Option<String>,
        #[arg(long, default_value_t = 0.25)]
        xi: f64,
        #[arg(long, default_value_t = 0.1)]
        gamma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EDGE_BUDGET)]
        budget: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ShifterKind {
    Simple,
    Multi,
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read_to_string(path)?)
    }
}

fn load_graph(path: &str) -> Result<RGraph, Error> {
    let j: HypergraphJson = serde_json::from_str(&read_input(path)?)?;
    j.to_graph()
}

fn parse_list(text: &str) -> Result<Vec<u64>, Error> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<u64>()
                .map_err(|e| Error::InvalidArgument(format!("bad number {:?}: {}", s, e)))
        })
        .collect()
}

struct Outcome {
    value: serde_json::Value,
    text: String,
    pass: bool,
}

impl Outcome {
    fn pass(value: serde_json::Value, text: impl Into<String>) -> Outcome {
        Outcome { value, text: text.into(), pass: true }
    }

    fn fail(value: serde_json::Value, text: impl Into<String>) -> Outcome {
        Outcome { value, text: text.into(), pass: false }
    }
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Deg { input } => {
            let g = load_graph(input)?;
            let d = div_vector(&g)?;
            Ok(Outcome::pass(json!({ "deg": d.0 }), format!("Deg = {:?}", d.0)))
        }
        Command::Divcheck { input, pattern, lambda } => {
            let hj: HypergraphJson = serde_json::from_str(&read_input(input)?)?;
            let g = hj.to_multigraph()?;
            let f = load_graph(pattern)?;
            match is_divisible(&g, &f, *lambda)? {
                Divisibility::Divisible => {
                    Ok(Outcome::pass(json!({ "divisible": true }), "divisible"))
                }
                Divisibility::Violation { set, count } => Ok(Outcome::fail(
                    json!({ "divisible": false, "witness": set, "count": count }),
                    format!("violation at {:?} with link {}", set, count),
                )),
            }
        }
        Command::Weakreg { input } => {
            let g = load_graph(input)?;
            let w = is_weakly_regular(&g)?;
            if w.regular {
                let s = w.s.unwrap();
                Ok(Outcome::pass(
                    json!({ "regular": true, "s": s }),
                    format!("weakly regular, s = {:?}", s),
                ))
            } else {
                let (i, set, a, b) = w.witness.unwrap();
                Ok(Outcome::fail(
                    json!({ "regular": false, "level": i, "witness": set, "sizes": [a, b] }),
                    "not weakly regular",
                ))
            }
        }
        Command::Shadow { input } => {
            let g = load_graph(input)?;
            let (sh, sp) = shadow(&g)?;
            Ok(Outcome::pass(
                json!({ "shadow": HypergraphJson::from_graph(&sh), "s_prime": sp }),
                format!("shadow has {} edges", sh.len()),
            ))
        }
        Command::Typical { input, h, p, samples, seed } => {
            let g = load_graph(input)?;
            let mode = match samples {
                Some(s) => TypicalityMode::Sampled { samples: *s, seed: *seed },
                None => TypicalityMode::Exhaustive,
            };
            let rep = typicality(&g, *h, *p, mode)?;
            let value = json!({
                "c": rep.c,
                "typical": rep.typical,
                "families_checked": rep.families_checked,
                "sampled": samples.is_some(),
                "seed": seed,
            });
            if rep.typical {
                Ok(Outcome::pass(value, format!("c = {:.6}", rep.c)))
            } else {
                Ok(Outcome::fail(value, "not typical"))
            }
        }
        Command::PartiteGen { q, f, r } => {
            let d = resolvable_decomposition(*q, *f, *r)?;
            Ok(Outcome::pass(
                serde_json::to_value(ResolvableJson::from_decomposition(&d))?,
                format!("{} cliques in {} classes", d.clique_count(), d.classes.len()),
            ))
        }
        Command::PartiteVerify { input } => {
            let j: ResolvableJson = serde_json::from_str(&read_input(input)?)?;
            let d = j.to_decomposition()?;
            match verify_resolvable(&d) {
                ResolvableVerdict::Pass => Ok(Outcome::pass(json!({ "verdict": "pass" }), "pass")),
                ResolvableVerdict::Fail(msg) => {
                    Ok(Outcome::fail(json!({ "verdict": "fail", "violation": msg }), msg))
                }
            }
        }
        Command::Regularise { input, budget } => {
            let f = load_graph(input)?;
            let reg = regularise(&f, *budget)?;
            Ok(Outcome::pass(
                json!({
                    "q": reg.q,
                    "s": reg.s,
                    "fstar": HypergraphJson::from_graph(&reg.fstar),
                    "decomposition": PackingJson::from_packing(&reg.decomposition),
                }),
                format!(
                    "host on {} vertices, {} edges, {} copies",
                    reg.fstar.n(),
                    reg.fstar.len(),
                    reg.decomposition.copies.len()
                ),
            ))
        }
        Command::Nibble { input, pattern, seed, kappa, max_rounds, trials, jobs } => {
            let g = load_graph(input)?;
            let f = load_graph(pattern)?;
            let opts = NibbleOpts {
                max_rounds: *max_rounds,
                separation_kappa: *kappa,
                budget_per_copy: 0,
            };
            if *trials <= 1 {
                let (p, leftover) = greedy_nibble(&g, &f, *seed, &opts)?;
                return Ok(Outcome::pass(
                    json!({
                        "seed": seed,
                        "packing": PackingJson::from_packing(&p),
                        "leftover": HypergraphJson::from_graph(&leftover),
                    }),
                    format!("{} copies, {} leftover edges", p.copies.len(), leftover.len()),
                ));
            }
            // fan independent seeds over worker threads; results in seed order
            let seeds: Vec<u64> = (0..*trials).map(|i| seed + i).collect();
            let jobs = (*jobs).max(1) as usize;
            let mut results: Vec<(u64, usize, usize)> = Vec::with_capacity(seeds.len());
            std::thread::scope(|scope| -> Result<(), Error> {
                let mut handles = Vec::new();
                for chunk in seeds.chunks(seeds.len().div_ceil(jobs)) {
                    let (g, f, opts) = (&g, &f, &opts);
                    handles.push(scope.spawn(move || -> Result<Vec<(u64, usize, usize)>, Error> {
                        let mut out = Vec::new();
                        for &s in chunk {
                            let (p, leftover) = greedy_nibble(g, f, s, opts)?;
                            out.push((s, p.copies.len(), leftover.len()));
                        }
                        Ok(out)
                    }));
                }
                for h in handles {
                    results.extend(h.join().expect("worker panicked")?);
                }
                Ok(())
            })?;
            results.sort_unstable();
            let best = results.iter().min_by_key(|(_, _, l)| *l).copied().unwrap();
            Ok(Outcome::pass(
                json!({
                    "seed": seed,
                    "trials": trials,
                    "results": results.iter().map(|(s, c, l)| json!({
                        "seed": s, "copies": c, "leftover_edges": l,
                    })).collect::<Vec<_>>(),
                    "best_seed": best.0,
                }),
                format!("{} trials, best seed {} leaves {} edges", trials, best.0, best.2),
            ))
        }
        Command::Krandom { cliques, pattern, seed } => {
            let cj: PackingJson = serde_json::from_str(&read_input(cliques)?)?;
            let cliques = cj.to_packing()?;
            let f = load_graph(pattern)?;
            let p = k_random_packing(&cliques, &f, *seed)?;
            Ok(Outcome::pass(
                json!({ "seed": seed, "packing": PackingJson::from_packing(&p) }),
                format!("{} copies", p.copies.len()),
            ))
        }
        Command::PackVerify { input, packing } => {
            let g = load_graph(input)?;
            let pj: PackingJson = serde_json::from_str(&read_input(packing)?)?;
            let p = pj.to_packing()?;
            match verify_packing(&g, &p) {
                PackingVerdict::Decomposition => {
                    Ok(Outcome::pass(json!({ "verdict": "decomposition" }), "decomposition"))
                }
                PackingVerdict::ValidPacking => {
                    Ok(Outcome::pass(json!({ "verdict": "valid-packing" }), "valid packing"))
                }
                PackingVerdict::Violation(msg) => {
                    Ok(Outcome::fail(json!({ "verdict": "violation", "violation": msg }), msg))
                }
            }
        }
        Command::DesignVerify { input, packing, lambda } => {
            let g = load_graph(input)?;
            let pj: PackingJson = serde_json::from_str(&read_input(packing)?)?;
            let p = pj.to_packing()?;
            match verify_design(&g, &p, *lambda) {
                PackingVerdict::Decomposition => {
                    Ok(Outcome::pass(json!({ "verdict": "design" }), "design"))
                }
                PackingVerdict::ValidPacking => Ok(Outcome::fail(
                    json!({ "verdict": "violation", "violation": "incomplete coverage" }),
                    "incomplete coverage",
                )),
                PackingVerdict::Violation(msg) => {
                    Ok(Outcome::fail(json!({ "verdict": "violation", "violation": msg }), msg))
                }
            }
        }
        Command::Wellsep { packing } => {
            let pj: PackingJson = serde_json::from_str(&read_input(packing)?)?;
            let p = pj.to_packing()?;
            match well_separation(&p) {
                WellSeparation::Kappa(k) => {
                    Ok(Outcome::pass(json!({ "kappa": k }), format!("kappa = {}", k)))
                }
                WellSeparation::Ws1Violation { copy_a, copy_b, shared } => Ok(Outcome::fail(
                    json!({ "ws1_violation": { "copy_a": copy_a, "copy_b": copy_b, "shared": shared } }),
                    format!("copies {} and {} share {} vertices", copy_a, copy_b, shared),
                )),
            }
        }
        Command::ShifterGen { pattern, k, kind, budget } => {
            let f = load_graph(pattern)?;
            let reg = regularise(&f, *budget)?;
            let dec = FstarDecomposition::from_regularisation(&reg);
            let roots: Vec<Vertex> = (0..2 * *k as Vertex).collect();
            let h = div_vector(&f)?.0;
            let b = div_vector(&dec.fstar)?.0;
            match kind {
                ShifterKind::Multi => {
                    let ms = multishifter(&f, &dec, *k, &roots)?;
                    Ok(Outcome::pass(
                        json!({
                            "kind": "multi",
                            "k": k,
                            "roots": ms.roots,
                            "h_k": h[*k],
                            "b": b[..=*k],
                            "graph": HypergraphJson::from_multigraph(&ms.graph),
                            "coefficients": ms.coefficients,
                        }),
                        format!("multigraph shifter with {} edges", ms.graph.len()),
                    ))
                }
                ShifterKind::Simple => {
                    let ss = simple_shifter(&f, &dec, *k, &roots, *budget)?;
                    Ok(Outcome::pass(
                        json!({
                            "kind": "simple",
                            "k": k,
                            "roots": ss.roots,
                            "h_k": h[*k],
                            "b": b[..=*k],
                            "graph": HypergraphJson::from_graph(&ss.graph),
                            "decomposition": PackingJson::from_packing(&ss.decomposition),
                            "degeneracy": ss.degeneracy,
                            "degeneracy_bound": ss.degeneracy_bound,
                        }),
                        format!("simple shifter with {} edges", ss.graph.len()),
                    ))
                }
            }
        }
        Command::ShifterVerify { input } => {
            let v: serde_json::Value = serde_json::from_str(&read_input(input)?)?;
            let k = v["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
            let h_k = v["h_k"].as_u64().ok_or_else(|| bad("missing h_k"))?;
            let b: Vec<u64> = serde_json::from_value(v["b"].clone())?;
            let roots: Vec<Vertex> = serde_json::from_value(v["roots"].clone())?;
            let gj: HypergraphJson = serde_json::from_value(v["graph"].clone())?;
            let g = gj.to_multigraph()?;
            let scan = scan_congruences(&g, &roots, k, h_k, &b);
            let mut troubles: Vec<String> = Vec::new();
            if let Some(viol) = &scan.first_violation {
                troubles.push(viol.clone());
            }
            if v["kind"] == "simple" {
                let pj: PackingJson = serde_json::from_value(v["decomposition"].clone())?;
                let p = pj.to_packing()?;
                let simple = gj.to_graph()?;
                if !verify_packing(&simple, &p).is_decomposition() {
                    troubles.push("decomposition does not cover the shifter".to_string());
                }
                match well_separation(&p) {
                    WellSeparation::Kappa(kk) if kk <= 1 => {}
                    other => troubles.push(format!("not 1-well separated: {:?}", other)),
                }
            }
            if troubles.is_empty() {
                Ok(Outcome::pass(json!({ "verdict": "pass", "corners": scan.corners }), "pass"))
            } else {
                Ok(Outcome::fail(
                    json!({ "verdict": "fail", "violations": troubles }),
                    troubles.join("; "),
                ))
            }
        }
        Command::BalancerGen { r, k, b, n } => {
            let b = parse_list(b)?;
            let u: Vec<Vertex> = (0..*n as Vertex).collect();
            let bal = balancer(*r, *k, &b, &u)?;
            Ok(Outcome::pass(
                json!({
                    "r": r,
                    "k": k,
                    "b": b,
                    "u_order": bal.u_order,
                    "tuples": bal.tuples(),
                    "max_tuple_degree": bal.max_tuple_degree,
                    "degree_bound": bal.degree_bound,
                }),
                format!(
                    "{} tuples, max degree {} <= {}",
                    bal.tuple_count(),
                    bal.max_tuple_degree,
                    bal.degree_bound
                ),
            ))
        }
        Command::Balance { phi, balancer: bal_path, h_k } => {
            let pj: SetFunctionJson = serde_json::from_str(&read_input(phi)?)?;
            let phi = pj.to_function()?;
            let v: serde_json::Value = serde_json::from_str(&read_input(bal_path)?)?;
            let r = v["r"].as_u64().ok_or_else(|| bad("missing r"))? as usize;
            let k = v["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
            let b: Vec<u64> = serde_json::from_value(v["b"].clone())?;
            let u: Vec<Vertex> = serde_json::from_value(v["u_order"].clone())?;
            let bal = balancer(r, k, &b, &u)?;
            if let Some(stored) = v.get("tuples") {
                let stored: Vec<(Vec<Vertex>, u64)> = serde_json::from_value(stored.clone())?;
                if stored != bal.tuples() {
                    return Err(bad("balancer artifact does not replay"));
                }
            }
            let aux_base = phi
                .n()
                .max(u.iter().map(|&x| x as usize + 1).max().unwrap_or(0))
                as Vertex;
            let mut source = SyntheticAdapters { aux_base };
            let out = balance(&phi, &bal, *h_k, &mut source)?;
            Ok(Outcome::pass(
                json!({
                    "selection": out.selection.chosen,
                    "balanced": SetFunctionJson::from_function(&out.balanced),
                }),
                format!("{} tuple slots used", out.selection.chosen.len()),
            ))
        }
        Command::Autodiv { phi, b, k_set } => {
            let pj: SetFunctionJson = serde_json::from_str(&read_input(phi)?)?;
            let phi = pj.to_function()?;
            let b = parse_list(b)?;
            let big_k: Vec<Vertex> = parse_list(k_set)?.into_iter().map(|x| x as Vertex).collect();
            let ok = check_auto_div(&phi, &b, &big_k)?;
            if ok {
                Ok(Outcome::pass(json!({ "divisible": true }), "divisible"))
            } else {
                Ok(Outcome::fail(json!({ "divisible": false }), "not divisible"))
            }
        }
        Command::Nabla { input, pattern, e0 } => {
            let hj: HypergraphJson = serde_json::from_str(&read_input(input)?)?;
            let h = hj.to_multigraph()?;
            let f = load_graph(pattern)?;
            let e0: Vec<Vertex> = parse_list(e0)?.into_iter().map(|x| x as Vertex).collect();
            let out = nabla(&h, &f, &e0, None)?;
            Ok(Outcome::pass(
                json!({
                    "tilde": HypergraphJson::from_multigraph(&out.tilde),
                    "core": HypergraphJson::from_graph(&out.core),
                    "decomposition": out.decomposition.iter()
                        .map(|e| CopyJson { role_map: e.role_map.clone() })
                        .collect::<Vec<_>>(),
                    "ledger": out.ledger.iter().map(|f| json!({
                        "vertex": f.vertex, "edge": f.edge, "instance": f.instance, "role": f.role,
                    })).collect::<Vec<_>>(),
                }),
                format!("core has {} edges", out.core.len()),
            ))
        }
        Command::Fixdiv { pattern, input, n, host, xi, gamma, seed, budget } => {
            let f = load_graph(pattern)?;
            let h = load_graph(input)?;
            let reg = regularise(&f, *budget)?;
            let dec = FstarDecomposition::from_regularisation(&reg);
            let mode = match (n, host) {
                (Some(n), None) => FixerMode::Abstract { n: *n },
                (None, Some(path)) => FixerMode::Embedded { host: load_graph(path)?, xi: *xi },
                _ => return Err(bad("specify exactly one of --n (abstract) or --host (embedded)")),
            };
            let fixer = make_divisible(&f, &dec, *gamma, *seed, mode)?;
            let out = fixer.respond(&h)?;
            let d_star = out.d_star()?;
            Ok(Outcome::pass(
                json!({
                    "seed": seed,
                    "d_max_degree": fixer.d_max_degree,
                    "selected_instances": out.selected.len(),
                    "d_star": HypergraphJson::from_graph(&d_star),
                    "leftover_decomposition": PackingJson::from_packing(&out.leftover_decomposition),
                }),
                format!(
                    "selected {} instances; union divisible by the regularised pattern",
                    out.selected.len()
                ),
            ))
        }
    }
}

fn bad(msg: &str) -> Error {
    Error::InvalidArgument(msg.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            let rendered = match cli.format {
                Format::Json => serde_json::to_string_pretty(&outcome.value).unwrap(),
                Format::Text => outcome.text.clone(),
            };
            match &cli.out {
                Some(path) => {
                    // relative output paths land in HYPERDESIGN_OUT_DIR when set
                    let mut target = std::path::PathBuf::from(path);
                    if target.is_relative() {
                        if let Ok(dir) = std::env::var("HYPERDESIGN_OUT_DIR") {
                            target = std::path::PathBuf::from(dir).join(target);
                        }
                    }
                    if let Err(e) = fs::write(&target, rendered + "\n") {
                        eprintln!("error: {}", e);
                        return ExitCode::from(2);
                    }
                }
                None => println!("{}", rendered),
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
