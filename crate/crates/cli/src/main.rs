use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use ramsey_cube::colourings::{
    edit_distance, is_eps_close, structural_no_odd_cycle, BipartitionChoice, CrossChoice, HypercubeColouring,
    KColouredGraph, ProfilePartition,
};
use ramsey_cube::labelling::{find_admissible_labelling, is_admissible, ColouredMultigraph, Labelling, LabellingFailure};
use ramsey_cube::matchings::{classify, enumerate_matchings, enumerate_matchings_large, PerfectMatching};
use ramsey_cube::optimizer::{
    check_graph_constraints, compress, compress_to_fixpoint, f_value, grad_f, kkt_solve, membership, nearest_o_point,
    nearest_o_star_point, numeric_max_norm, quadratic_form_f, shift_check, KktInstance, ProfileVector,
};
use ramsey_cube::structures::{budget_from_env, erdos_gallai_check, find_cycle, largest_odd_connected_matching, CycleSearch};
use ramsey_cube::{Error, Pattern};

const SCHEMA: u32 = 1;

/// Exit codes shared by every subcommand.
mod exit {
    pub const NONE: u8 = 0;
    pub const FOUND: u8 = 1;
    pub const MALFORMED: u8 = 2;
    pub const BUDGET: u8 = 3;
    pub const CRITICAL: u8 = 4;
}

#[derive(Parser)]
#[command(name = "ramsey-cube", version, about = "Hypercube colourings, profiles and the norm-maximisation problem")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Emit a JSON certificate instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Include wall-clock timings in the certificate.
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Perfect matchings of the hypercube.
    #[command(subcommand)]
    Matchings(MatchingsCmd),
    /// Hypercube colourings and graph comparison.
    #[command(subcommand)]
    Colouring(ColouringCmd),
    /// Profile partitions.
    #[command(subcommand)]
    Profile(ProfileCmd),
    /// Cycle and connected-matching searches.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// The objective, compressions, closed forms and the numeric oracle.
    #[command(subcommand)]
    Opt(OptCmd),
    /// Admissible labellings of coloured multigraphs.
    #[command(subcommand)]
    Label(LabelCmd),
}

#[derive(Subcommand)]
enum MatchingsCmd {
    Enumerate {
        #[arg(long)]
        k: usize,
        /// Permit k = 5.
        #[arg(long)]
        allow_large: bool,
        /// Write the matchings here, separated by blank lines.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Classify {
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Cross {
    Least,
    Seeded,
}

#[derive(Subcommand)]
enum ColouringCmd {
    /// Build the hypercube colouring with cliques of size n - 1.
    Build {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Index into the classification of matchings for this k.
        #[arg(long, conflicts_with = "matching")]
        matching_class: Option<usize>,
        /// Matching file.
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Cross::Least)]
        cross: Cross,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural check that no colour class contains C_n.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Per-colour edit distance between two graphs.
    Distance {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        other: PathBuf,
        #[arg(long)]
        eps: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Choice {
    Lowest,
    Seeded,
}

#[derive(Subcommand)]
enum ProfileCmd {
    Compute {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Choice::Lowest)]
        choice: Choice,
        /// Divide the profile by n.
        #[arg(long)]
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Search every colour class for a cycle of the given length.
    Cycles {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, alias = "forbid-cycle")]
        length: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Largest odd connected matching in each colour.
    OddMatching {
        #[arg(long)]
        graph: PathBuf,
        /// Flag colours whose order reaches this bound.
        #[arg(long)]
        bound: Option<usize>,
    },
    /// Circumference against the edge bound on the underlying graph.
    Eg {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        budget: Option<u64>,
    },
}

#[derive(Subcommand)]
enum OptCmd {
    /// F, its quadratic form, the gradient and X(γ) membership.
    F {
        #[arg(long)]
        vec: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
    },
    /// One (π, ρ)-compression, or the compressed fixpoint.
    Compress {
        #[arg(long)]
        vec: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, required_unless_present = "fixpoint")]
        from: Option<String>,
        #[arg(long, required_unless_present = "fixpoint")]
        to: Option<String>,
        #[arg(long)]
        fixpoint: bool,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
    },
    Kkt {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        alpha: Vec<i64>,
        #[arg(long, default_value_t = 0)]
        ell: usize,
    },
    Shift {
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<u32>,
    },
    Maxnorm {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
    },
    NearestO {
        #[arg(long)]
        vec: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Restrict to matching indicators.
        #[arg(long)]
        star: bool,
    },
    CheckGraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t = Choice::Lowest)]
        choice: Choice,
    },
}

#[derive(Subcommand)]
enum LabelCmd {
    Find {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a labelling file (`pattern image` per line) against a multigraph.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        labelling: PathBuf,
    },
}

/// One named check in a certificate.
#[derive(Serialize)]
struct Check {
    name: String,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<u64>,
}

impl Check {
    fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: "pass",
            witness: None,
            budget: None,
        }
    }

    fn fail(name: impl Into<String>, witness: Value) -> Self {
        Check {
            name: name.into(),
            status: "fail",
            witness: Some(witness),
            budget: None,
        }
    }

    fn indefinite(name: impl Into<String>, budget: u64) -> Self {
        Check {
            name: name.into(),
            status: "indefinite",
            witness: None,
            budget: Some(budget),
        }
    }
}

/// What a subcommand hands back for printing.
struct Report {
    exit: u8,
    checks: Vec<Check>,
    result: Value,
    text: String,
}

impl Report {
    fn new(result: Value, text: String) -> Self {
        Report {
            exit: exit::NONE,
            checks: Vec::new(),
            result,
            text,
        }
    }
}

/// Records input files for the digest.
#[derive(Default)]
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> anyhow::Result<String> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
        Ok(text)
    }

    fn digest(self, args: &[String]) -> String {
        let mut h = self.hasher;
        for a in args {
            h.update((a.len() as u64).to_le_bytes());
            h.update(a.as_bytes());
        }
        hex::encode(h.finalize())
    }
}

fn vector_json(x: &ProfileVector<f64>) -> Value {
    Value::Array(
        x.support()
            .into_iter()
            .map(|p| json!([p.to_string(), x.get(&p)]))
            .collect(),
    )
}

fn load_vector(inputs: &mut Inputs, path: &Path, k: Option<usize>) -> anyhow::Result<ProfileVector<f64>> {
    Ok(ProfileVector::<f64>::from_text(&inputs.read(path)?, k)?)
}

fn load_graph(inputs: &mut Inputs, path: &Path) -> anyhow::Result<KColouredGraph> {
    Ok(KColouredGraph::from_text(&inputs.read(path)?)?)
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn parse_pattern(s: &str) -> anyhow::Result<Pattern> {
    Ok(s.parse::<Pattern>()?)
}

fn run_matchings(cmd: MatchingsCmd) -> anyhow::Result<Report> {
    match cmd {
        MatchingsCmd::Enumerate { k, allow_large, out } => {
            let all = if allow_large {
                enumerate_matchings_large(k)?
            } else {
                enumerate_matchings(k)?
            };
            if let Some(path) = out {
                let text: Vec<String> = all.iter().map(PerfectMatching::to_text).collect();
                write_out(&path, &text.join("\n"))?;
            }
            Ok(Report::new(json!({ "k": k, "count": all.len() }), format!("{}\n", all.len())))
        }
        MatchingsCmd::Classify { k } => {
            let c = classify(k)?;
            let text = format!("{}\n", c.classes.len());
            Ok(Report::new(
                json!({ "k": k, "classes": c.classes.len(), "classification": c }),
                text,
            ))
        }
    }
}

fn run_colouring(cmd: ColouringCmd, g: &Global, inputs: &mut Inputs) -> anyhow::Result<Report> {
    match cmd {
        ColouringCmd::Build {
            k,
            n,
            matching_class,
            matching,
            cross,
            out,
        } => {
            if n < 2 {
                bail!(Error::InvalidArgument("n must be at least 2".into()));
            }
            let m = match (matching_class, matching) {
                (_, Some(path)) => PerfectMatching::from_text(&inputs.read(&path)?)?,
                (idx, None) => {
                    let c = classify(k)?;
                    let i = idx.unwrap_or(0);
                    c.classes
                        .get(i)
                        .ok_or_else(|| Error::InvalidArgument(format!("class {i} out of range 0..{}", c.classes.len())))?
                        .representative
                        .clone()
                }
            };
            if m.k() != k {
                bail!(Error::DimensionMismatch { left: k, right: m.k() });
            }
            let choice = match cross {
                Cross::Least => CrossChoice::LeastInDelta,
                Cross::Seeded => CrossChoice::Seeded(g.seed),
            };
            let h = HypercubeColouring::build(&m, n - 1, choice)?;
            let text = h.graph.to_text();
            if let Some(path) = &out {
                write_out(path, &text)?;
            }
            let result = json!({
                "construction": "hypercube",
                "matching": m.edges().iter().map(Pattern::to_string).collect::<Vec<_>>(),
                "clique_size": n - 1,
                "vertices": h.graph.vertex_count(),
            });
            let summary = if out.is_some() {
                format!("{} vertices, clique size {}\n", h.graph.vertex_count(), n - 1)
            } else {
                text
            };
            Ok(Report::new(result, summary))
        }
        ColouringCmd::Verify { graph, n } => {
            let gr = load_graph(inputs, &graph)?;
            let r = structural_no_odd_cycle(&gr, n)?;
            let mut rep = Report::new(
                serde_json::to_value(&r)?,
                format!("structural check for C_{n}: {}\n", if r.passes { "pass" } else { "fail" }),
            );
            for c in &r.per_colour {
                let name = format!("colour {} structure", c.colour);
                rep.checks.push(if c.passes {
                    Check::pass(name)
                } else {
                    Check::fail(name, json!(c.offending_components))
                });
            }
            if !r.passes {
                rep.exit = exit::FOUND;
            }
            Ok(rep)
        }
        ColouringCmd::Distance { graph, other, eps } => {
            let a = load_graph(inputs, &graph)?;
            let b = load_graph(inputs, &other)?;
            let d = edit_distance(&a, &b)?;
            let close = eps.map(|e| is_eps_close(&a, &b, e)).transpose()?;
            let text = format!(
                "{}\n",
                d.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
            );
            Ok(Report::new(json!({ "per_colour": d, "eps": eps, "close": close }), text))
        }
    }
}

fn bipartition(choice: Choice, seed: u64) -> BipartitionChoice {
    match choice {
        Choice::Lowest => BipartitionChoice::LowestVertexSideZero,
        Choice::Seeded => BipartitionChoice::Seeded(seed),
    }
}

fn run_profile(cmd: ProfileCmd, g: &Global, inputs: &mut Inputs) -> anyhow::Result<Report> {
    match cmd {
        ProfileCmd::Compute { graph, choice, n } => {
            let gr = load_graph(inputs, &graph)?;
            let part = ProfilePartition::compute(&gr, &bipartition(choice, g.seed))?;
            let mut rep;
            match n {
                Some(n) if n > 0 => {
                    let v = part.profile().scaled(n as f64);
                    rep = Report::new(json!({ "n": n, "vector": vector_json(&v) }), v.to_text());
                }
                Some(_) => bail!(Error::InvalidArgument("n must be positive".into())),
                None => {
                    let p = part.profile();
                    let entries: Vec<Value> = p.support().iter().map(|(t, c)| json!([t.to_string(), c])).collect();
                    let text: String = p.support().iter().map(|(t, c)| format!("{t} {c}\n")).collect();
                    rep = Report::new(json!({ "profile": entries, "total": p.total() }), text);
                }
            }
            match part.check_observations(&gr) {
                Ok(()) => rep.checks.push(Check::pass("observations")),
                Err(w) => {
                    rep.checks.push(Check::fail("observations", json!(w)));
                    rep.exit = exit::CRITICAL;
                }
            }
            Ok(rep)
        }
    }
}

fn run_verify(cmd: VerifyCmd, inputs: &mut Inputs) -> anyhow::Result<Report> {
    match cmd {
        VerifyCmd::Cycles { graph, length, budget } => {
            let gr = load_graph(inputs, &graph)?;
            let budget = budget.unwrap_or_else(budget_from_env);
            let mut rep = Report::new(Value::Null, String::new());
            let mut results = Vec::new();
            let mut found = false;
            let mut indefinite = false;
            for colour in 0..gr.k() {
                let r = find_cycle(&gr, colour, length, budget)?;
                let name = format!("colour {} C_{length}", colour + 1);
                let line = match &r {
                    CycleSearch::Found { cycle } => {
                        found = true;
                        rep.checks.push(Check::fail(name, json!(cycle)));
                        format!("colour {}: found {:?}\n", colour + 1, cycle)
                    }
                    CycleSearch::Absent { .. } => {
                        rep.checks.push(Check::pass(name));
                        format!("colour {}: none\n", colour + 1)
                    }
                    CycleSearch::Indefinite { budget } => {
                        indefinite = true;
                        rep.checks.push(Check::indefinite(name, *budget));
                        format!("colour {}: indefinite after {budget} expansions\n", colour + 1)
                    }
                };
                rep.text.push_str(&line);
                results.push(json!({ "colour": colour + 1, "search": r }));
            }
            rep.result = json!({ "length": length, "cycle_search_result": results });
            rep.exit = if found {
                exit::FOUND
            } else if indefinite {
                exit::BUDGET
            } else {
                exit::NONE
            };
            Ok(rep)
        }
        VerifyCmd::OddMatching { graph, bound } => {
            let gr = load_graph(inputs, &graph)?;
            let mut rep = Report::new(Value::Null, String::new());
            let mut reports = Vec::new();
            for colour in 0..gr.k() {
                let r = largest_odd_connected_matching(&gr, colour)?;
                rep.text
                    .push_str(&format!("colour {}: {}\n", colour + 1, r.largest_odd_order));
                if let Some(b) = bound {
                    let name = format!("colour {} odd connected matching below {b}", colour + 1);
                    if r.largest_odd_order >= b {
                        rep.checks.push(Check::fail(name, json!(r.largest_odd_order)));
                        rep.exit = exit::FOUND;
                    } else {
                        rep.checks.push(Check::pass(name));
                    }
                }
                reports.push(r);
            }
            rep.result = json!({ "bound": bound, "per_colour": reports });
            Ok(rep)
        }
        VerifyCmd::Eg { graph, m, budget } => {
            let gr = load_graph(inputs, &graph)?;
            let budget = budget.unwrap_or_else(budget_from_env);
            let r = erdos_gallai_check(&gr.underlying(), m, budget)?;
            let mut rep = Report::new(
                serde_json::to_value(&r)?,
                format!(
                    "circumference {}, edges {}, bound {}: {}\n",
                    r.circumference,
                    r.edges,
                    m * r.vertices.saturating_sub(1) / 2,
                    if r.consistent() { "consistent" } else { "VIOLATED" }
                ),
            );
            if r.consistent() {
                rep.checks.push(Check::pass("edge bound"));
            } else {
                rep.checks.push(Check::fail("edge bound", json!(r.longest_cycle)));
                rep.exit = exit::CRITICAL;
            }
            Ok(rep)
        }
    }
}

fn run_opt(cmd: OptCmd, g: &Global, inputs: &mut Inputs) -> anyhow::Result<Report> {
    match cmd {
        OptCmd::F { vec, k, gamma } => {
            let x = load_vector(inputs, &vec, k)?;
            let f = f_value(&x);
            let q = quadratic_form_f(&x);
            let grad = grad_f(&x);
            let m = membership(&x, &gamma);
            let mut rep = Report::new(
                json!({ "f": f, "quadratic_form": q, "gradient": vector_json(&grad), "membership": m }),
                format!("F = {f}\nmember of X({gamma}): {}\n", m.member),
            );
            rep.checks.push(if m.member {
                Check::pass("membership")
            } else {
                Check::fail("membership", serde_json::to_value(&m)?)
            });
            if !m.member {
                rep.exit = exit::FOUND;
            }
            Ok(rep)
        }
        OptCmd::Compress {
            vec,
            k,
            from,
            to,
            fixpoint,
            gamma,
        } => {
            let x = load_vector(inputs, &vec, k)?;
            if fixpoint {
                let fp = compress_to_fixpoint(&x, &gamma);
                let mut rep = Report::new(
                    json!({
                        "point": vector_json(&fp.point),
                        "steps": fp.steps,
                        "compressed": fp.compressed,
                        "diagnostics": fp.diagnostics,
                    }),
                    fp.point.to_text(),
                );
                rep.checks.push(if fp.compressed {
                    Check::pass("compressed")
                } else {
                    Check::fail("compressed", json!(fp.diagnostics))
                });
                Ok(rep)
            } else {
                let (from, to) = (from.expect("required by clap"), to.expect("required by clap"));
                let y = compress(&x, &parse_pattern(&from)?, &parse_pattern(&to)?)?;
                Ok(Report::new(json!({ "point": vector_json(&y) }), y.to_text()))
            }
        }
        OptCmd::Kkt { alpha, ell } => {
            let inst = KktInstance::new(alpha, ell)?;
            let s = kkt_solve::<f64>(&inst);
            let residual = inst.residual(&s.maximiser);
            let text = format!(
                "bound {}\nmaximiser {}\n",
                s.bound,
                s.maximiser.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
            );
            Ok(Report::new(json!({ "instance": inst, "solution": s, "residual": residual }), text))
        }
        OptCmd::Shift { alpha } => {
            let r = shift_check(&alpha)?;
            let mut rep = Report::new(
                serde_json::to_value(&r)?,
                format!("{} <= {}: {} (equality: {})\n", r.lhs, r.rhs, r.holds, r.equality),
            );
            rep.checks.push(if r.holds {
                Check::pass("inequality")
            } else {
                Check::fail("inequality", json!(alpha))
            });
            if !r.holds {
                rep.exit = exit::CRITICAL;
            }
            Ok(rep)
        }
        OptCmd::Maxnorm { k, gamma, restarts } => {
            let r = numeric_max_norm(k, gamma, restarts, g.seed)?;
            let mut rep = Report::new(
                json!({
                    "k": k,
                    "gamma": gamma,
                    "restarts": restarts,
                    "value": r.value,
                    "best_restart": r.best_restart,
                    "certified": r.certified,
                    "point": vector_json(&r.point),
                }),
                format!("{}\n", r.value),
            );
            rep.checks.push(if r.certified {
                Check::pass("certificate")
            } else {
                Check::fail("certificate", vector_json(&r.point))
            });
            if !r.certified {
                rep.exit = exit::CRITICAL;
            }
            Ok(rep)
        }
        OptCmd::NearestO { vec, k, star } => {
            let x = load_vector(inputs, &vec, k)?;
            let n = if star { nearest_o_star_point(&x)? } else { nearest_o_point(&x)? };
            Ok(Report::new(
                json!({ "point": vector_json(&n.point), "distance": n.distance }),
                format!("distance {}\n{}", n.distance, n.point.to_text()),
            ))
        }
        OptCmd::CheckGraph { graph, n, delta, choice } => {
            let gr = load_graph(inputs, &graph)?;
            let r = check_graph_constraints(&gr, n, delta, &bipartition(choice, g.seed))?;
            let mut rep = Report::new(
                json!({ "report": r, "v": vector_json(&r.v) }),
                format!(
                    "hypotheses {}; conclusions {}{}\n",
                    if r.hypotheses.hold { "hold" } else { "fail" },
                    if r.conclusions.hold { "hold" } else { "fail" },
                    if r.critical { " (CRITICAL)" } else { "" }
                ),
            );
            if !r.hypotheses.hold {
                rep.checks.push(Check::pass("not applicable"));
            } else if r.critical {
                rep.checks.push(Check::fail("conclusions", serde_json::to_value(&r.conclusions)?));
                rep.exit = exit::CRITICAL;
            } else {
                rep.checks.push(Check::pass("conclusions"));
            }
            Ok(rep)
        }
    }
}

fn parse_labelling(text: &str, domain: &PerfectMatching) -> anyhow::Result<Labelling> {
    let mut image: Vec<Option<Pattern>> = vec![None; domain.len()];
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [a, b] = parts[..] else {
            bail!(Error::Parse {
                line: i + 1,
                message: "expected `pattern image`".into()
            });
        };
        let (a, b) = (parse_pattern(a)?, parse_pattern(b)?);
        let pos = domain.position(&a).ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("{a} is not an edge of the matching"),
        })?;
        image[pos] = Some(b);
    }
    let image = image
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| anyhow!(Error::InvalidArgument(format!("no image for {}", domain.edges()[i])))))
        .collect::<anyhow::Result<Vec<_>>>()?;
    Ok(Labelling::new(domain.clone(), image)?)
}

fn labelling_text(l: &Labelling) -> String {
    l.domain()
        .edges()
        .iter()
        .zip(l.image())
        .map(|(a, b)| format!("{a} {b}\n"))
        .collect()
}

fn run_label(cmd: LabelCmd, inputs: &mut Inputs) -> anyhow::Result<Report> {
    match cmd {
        LabelCmd::Find { input, out } => {
            let phi = ColouredMultigraph::from_text(&inputs.read(&input)?)?;
            match find_admissible_labelling(&phi) {
                Ok(o) => {
                    let text = labelling_text(&o.labelling);
                    if let Some(path) = &out {
                        write_out(path, &text)?;
                    }
                    let mut rep = Report::new(
                        json!({
                            "labelling": o.labelling.domain().edges().iter().zip(o.labelling.image())
                                .map(|(a, b)| json!([a.to_string(), b.to_string()])).collect::<Vec<_>>(),
                            "bad_edges": o.bad_edges,
                            "repairs": o.repairs,
                        }),
                        text,
                    );
                    rep.checks.push(Check::pass("admissible"));
                    Ok(rep)
                }
                Err(f) => {
                    let mut rep = Report::new(json!({ "failure": f }), String::new());
                    match &f {
                        LabellingFailure::OddCycle { colour, cycle } => {
                            rep.text = format!(
                                "monochromatic odd cycle in colour {}: {}\n",
                                colour + 1,
                                cycle.iter().map(Pattern::to_string).collect::<Vec<_>>().join(" ")
                            );
                            rep.checks.push(Check::fail("no monochromatic odd cycle", serde_json::to_value(&f)?));
                            rep.exit = exit::FOUND;
                        }
                        LabellingFailure::ForbiddenColour { .. } => {
                            bail!(Error::Precondition(serde_json::to_string(&f)?));
                        }
                        LabellingFailure::Critical { message } => {
                            rep.text = format!("CRITICAL: {message}\n");
                            rep.checks.push(Check::fail("admissible", json!(message)));
                            rep.exit = exit::CRITICAL;
                        }
                    }
                    Ok(rep)
                }
            }
        }
        LabelCmd::Check { input, labelling } => {
            let phi = ColouredMultigraph::from_text(&inputs.read(&input)?)?;
            let l = parse_labelling(&inputs.read(&labelling)?, phi.matching())?;
            let v = is_admissible(&l, &phi)?;
            let mut rep = Report::new(
                json!({ "admissible": v.is_none(), "violation": v }),
                match &v {
                    None => "admissible\n".to_string(),
                    Some(v) => format!("edge {} {} of colour {} violates admissibility\n", v.left, v.right, v.colour + 1),
                },
            );
            match v {
                None => rep.checks.push(Check::pass("admissible")),
                Some(v) => {
                    rep.checks.push(Check::fail("admissible", serde_json::to_value(v)?));
                    rep.exit = exit::FOUND;
                }
            }
            Ok(rep)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Matchings(MatchingsCmd::Enumerate { .. }) => "matchings enumerate",
        Command::Matchings(MatchingsCmd::Classify { .. }) => "matchings classify",
        Command::Colouring(ColouringCmd::Build { .. }) => "colouring build",
        Command::Colouring(ColouringCmd::Verify { .. }) => "colouring verify",
        Command::Colouring(ColouringCmd::Distance { .. }) => "colouring distance",
        Command::Profile(ProfileCmd::Compute { .. }) => "profile compute",
        Command::Verify(VerifyCmd::Cycles { .. }) => "verify cycles",
        Command::Verify(VerifyCmd::OddMatching { .. }) => "verify odd-matching",
        Command::Verify(VerifyCmd::Eg { .. }) => "verify eg",
        Command::Opt(OptCmd::F { .. }) => "opt f",
        Command::Opt(OptCmd::Compress { .. }) => "opt compress",
        Command::Opt(OptCmd::Kkt { .. }) => "opt kkt",
        Command::Opt(OptCmd::Shift { .. }) => "opt shift",
        Command::Opt(OptCmd::Maxnorm { .. }) => "opt maxnorm",
        Command::Opt(OptCmd::NearestO { .. }) => "opt nearest-o",
        Command::Opt(OptCmd::CheckGraph { .. }) => "opt check-graph",
        Command::Label(LabelCmd::Find { .. }) => "label find",
        Command::Label(LabelCmd::Check { .. }) => "label check",
    }
}

fn error_exit(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExhausted { .. }) => exit::BUDGET,
        Some(Error::Critical(_)) => exit::CRITICAL,
        _ => exit::MALFORMED,
    }
}

/// Arguments that do not change results are left out of the digest.
fn digest_args() -> Vec<String> {
    let mut out = Vec::new();
    let mut skip_next = false;
    for a in std::env::args().skip(1) {
        if skip_next {
            skip_next = false;
            continue;
        }
        match a.as_str() {
            "--json" | "--timings" => {}
            "--threads" => skip_next = true,
            s if s.starts_with("--threads=") => {}
            _ => out.push(a),
        }
    }
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global.clone();
    if g.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(g.threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(exit::MALFORMED);
        }
    }
    let name = command_name(&cli.command);
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let outcome = match cli.command {
        Command::Matchings(c) => run_matchings(c),
        Command::Colouring(c) => run_colouring(c, &g, &mut inputs),
        Command::Profile(c) => run_profile(c, &g, &mut inputs),
        Command::Verify(c) => run_verify(c, &mut inputs),
        Command::Opt(c) => run_opt(c, &g, &mut inputs),
        Command::Label(c) => run_label(c, &mut inputs),
    };
    let elapsed = start.elapsed();
    let rep = match outcome {
        Ok(r) => r,
        Err(e) => {
            let code = error_exit(&e);
            if g.json {
                let cert = json!({
                    "schema": SCHEMA,
                    "command": name,
                    "error": format!("{e:#}"),
                    "exit_code": code,
                });
                println!("{}", serde_json::to_string_pretty(&cert).expect("json"));
            }
            eprintln!("error: {e:#}");
            return ExitCode::from(code);
        }
    };
    if g.json {
        let mut cert = json!({
            "schema": SCHEMA,
            "command": name,
            "inputs_digest": inputs.digest(&digest_args()),
            "seed": g.seed,
            "checks": rep.checks,
            "result": rep.result,
            "exit_code": rep.exit,
        });
        if g.timings {
            cert["timings"] = json!({ "total_seconds": elapsed.as_secs_f64() });
        }
        println!("{}", serde_json::to_string_pretty(&cert).expect("json"));
    } else {
        print!("{}", rep.text);
        if g.timings {
            eprintln!("elapsed {:.3}s", elapsed.as_secs_f64());
        }
    }
    ExitCode::from(rep.exit)
}
