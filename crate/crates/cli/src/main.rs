use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use domino_orbits::classify::{cell_census, classify_with, normalize_with, orbit_label, Naming, Settings};
use domino_orbits::cycles::{cycles, Convention};
use domino_orbits::operators::{apply, apply_pair, OperatorId};
use domino_orbits::verify::{self, VerifyConfig};
use domino_orbits::{rs, rs_inverse, DominoTableau, SignedPermutation, TableauPair};

const MAX_RANK: usize = 8;

#[derive(Parser, Debug)]
#[command(name = "domino-orbits", version, about = "Domino tableaux and orbital varieties in type D")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Domino Robinson–Schensted tableaux of an element.
    Rs(ElementArgs),
    /// Cycle decomposition of a tableau.
    Cycles(TableauArgs),
    /// Apply a wall-crossing operator (T[a,b], V_C, V_C', H).
    Op {
        name: OperatorId,
        #[command(flatten)]
        input: PairArgs,
    },
    /// Reduce a left tableau to a D-partition shape, with its trace.
    Normalize(TableauArgs),
    /// Orbit label and tableau of one element, or of every element of a rank.
    Classify {
        #[arg(long)]
        rank: usize,
        #[arg(long, allow_hyphen_values = true)]
        element: Option<SignedPermutation>,
    },
    /// Census of classes for a rank.
    Cells {
        #[arg(long)]
        rank: usize,
    },
    /// Run the acceptance checks.
    Verify {
        /// Also sweep operator cell preservation at rank 6.
        #[arg(long)]
        rank_six: bool,
    },
}

#[derive(Args, Debug)]
struct ElementArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true)]
    element: SignedPermutation,
}

#[derive(Args, Debug)]
struct TableauArgs {
    #[arg(long)]
    rank: usize,
    /// Use the left tableau of this element.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tableau", required_unless_present = "tableau")]
    element: Option<SignedPermutation>,
    /// Take the right tableau of the element instead of the left.
    #[arg(long, requires = "element")]
    right: bool,
    /// Serialized tableau, entries `k:r1,c1;r2,c2` separated by spaces.
    #[arg(long)]
    tableau: Option<DominoTableau>,
    /// D or C; both when omitted (cycles only).
    #[arg(long)]
    convention: Option<Convention>,
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    rank: usize,
    #[arg(long, allow_hyphen_values = true, required_unless_present_all = ["left", "right"], conflicts_with_all = ["left", "right"])]
    element: Option<SignedPermutation>,
    #[arg(long, requires = "right")]
    left: Option<DominoTableau>,
    #[arg(long, requires = "left")]
    right: Option<DominoTableau>,
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn check_rank(rank: usize) -> Result<(), Failure> {
    if (1..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("rank must be in 1..={MAX_RANK}, got {rank}")))
    }
}

fn check_element(rank: usize, w: &SignedPermutation) -> Result<(), Failure> {
    check_rank(rank)?;
    if w.rank() != rank {
        return Err(Failure::Usage(format!("element {w} has rank {}, expected {rank}", w.rank())));
    }
    Ok(())
}

fn check_tableau(rank: usize, t: &DominoTableau) -> Result<(), Failure> {
    check_rank(rank)?;
    if t.rank() != rank {
        return Err(Failure::Usage(format!("tableau has rank {}, expected {rank}", t.rank())));
    }
    Ok(())
}

fn tableau_json(t: &DominoTableau) -> Value {
    json!({ "grid": t.render_grid(), "serialized": t.serialize() })
}

fn tableau_text(name: &str, t: &DominoTableau) -> String {
    format!("{name}:\n{}\n{}\n", t.render_grid(), t.serialize())
}

fn pair_output(w: Option<&SignedPermutation>, pair: &TableauPair) -> (String, Value) {
    let shape = pair.left.shape_unchecked().to_string();
    let mut text = String::new();
    if let Some(w) = w {
        text.push_str(&format!("element: {w}\n"));
    }
    text.push_str(&format!("shape: ({shape})\n"));
    text.push_str(&tableau_text("left", &pair.left));
    text.push_str(&tableau_text("right", &pair.right));
    let value = json!({
        "element": w.map(|w| w.to_string()),
        "shape": shape,
        "left": tableau_json(&pair.left),
        "right": tableau_json(&pair.right),
    });
    (text, value)
}

/// Maps a user-facing convention name through the configured naming.
fn parity(conv: Convention, settings: &Settings) -> Convention {
    match settings.naming {
        Naming::Standard => conv,
        Naming::Swapped => conv.other(),
    }
}

fn input_tableau(args: &TableauArgs) -> Result<DominoTableau, Failure> {
    let t = match (&args.element, &args.tableau) {
        (Some(w), _) => {
            check_element(args.rank, w)?;
            let pair = rs(w).map_err(domain)?;
            if args.right {
                pair.right
            } else {
                pair.left
            }
        }
        (None, Some(t)) => t.clone(),
        (None, None) => return Err(Failure::Usage("need --element or --tableau".into())),
    };
    check_tableau(args.rank, &t)?;
    Ok(t)
}

fn run_cycles(args: &TableauArgs, settings: &Settings) -> Result<(String, Value), Failure> {
    let t = input_tableau(args)?;
    let convs: Vec<Convention> = match args.convention {
        Some(c) => vec![c],
        None => vec![Convention::D, Convention::C],
    };
    let mut text = tableau_text("tableau", &t);
    let mut per_conv = Vec::new();
    for name in convs {
        let cs = cycles(&t, parity(name, settings)).map_err(domain)?;
        text.push_str(&format!("convention {name}:\n"));
        let mut list = Vec::new();
        for c in &cs {
            let labels: Vec<String> = c.labels.iter().map(usize::to_string).collect();
            let status = if c.is_anchored() {
                "anchored"
            } else if c.is_open() {
                "open"
            } else {
                "closed"
            };
            let sq = |s: Option<domino_orbits::Square>| s.map(|s| s.to_string());
            text.push_str(&format!("  {{{}}} {status}", labels.join(",")));
            if let (Some(r), Some(a)) = (c.removed_square, c.added_square) {
                text.push_str(&format!(" removes {r} adds {a}"));
            }
            text.push('\n');
            list.push(json!({
                "labels": c.labels,
                "status": status,
                "removed": sq(c.removed_square),
                "added": sq(c.added_square),
            }));
        }
        per_conv.push(json!({ "convention": name.to_string(), "cycles": list }));
    }
    Ok((text, json!({ "tableau": tableau_json(&t), "conventions": per_conv })))
}

fn run_op(name: OperatorId, input: &PairArgs) -> Result<(String, Value), Failure> {
    let (w, pair) = match (&input.element, &input.left, &input.right) {
        (Some(w), _, _) => {
            check_element(input.rank, w)?;
            (Some(w.clone()), rs(w).map_err(domain)?)
        }
        (None, Some(l), Some(r)) => {
            check_tableau(input.rank, l)?;
            check_tableau(input.rank, r)?;
            let pair = TableauPair::new(l.clone(), r.clone()).map_err(|e| Failure::Usage(e.to_string()))?;
            (rs_inverse(&pair).ok(), pair)
        }
        _ => return Err(Failure::Usage("need --element or both --left and --right".into())),
    };
    let (image_w, image) = match input.element.as_ref().and(w.as_ref()) {
        Some(w) => {
            let x = apply(name, w).map_err(domain)?;
            let p = rs(&x).map_err(domain)?;
            (Some(x), p)
        }
        None => {
            let p = apply_pair(name, &pair).map_err(domain)?;
            (rs_inverse(&p).ok(), p)
        }
    };
    let (t_in, v_in) = pair_output(w.as_ref(), &pair);
    let (t_out, v_out) = pair_output(image_w.as_ref(), &image);
    Ok((
        format!("operator: {name}\ninput\n{t_in}output\n{t_out}"),
        json!({ "operator": name.to_string(), "input": v_in, "output": v_out }),
    ))
}

fn run_normalize(args: &TableauArgs, settings: &Settings) -> Result<(String, Value), Failure> {
    let t = input_tableau(args)?;
    let (out, trace) = normalize_with(&t, settings).map_err(domain)?;
    let label = orbit_label(&out).map_err(domain)?;
    let mut text = tableau_text("input", &t);
    let mut steps = Vec::new();
    for s in &trace.steps {
        let cycles: Vec<String> = s
            .cycles
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        text.push_str(&format!("step {}: {} ({}) -> ({})\n", s.convention, cycles.join(" "), s.before, s.after));
        steps.push(json!({
            "convention": s.convention.to_string(),
            "cycles": s.cycles,
            "before": s.before.to_string(),
            "after": s.after.to_string(),
        }));
    }
    text.push_str(&format!("orbit: {label}\n"));
    text.push_str(&tableau_text("tableau", &out));
    Ok((
        text,
        json!({ "input": tableau_json(&t), "steps": steps, "orbit": label.to_string(), "tableau": tableau_json(&out) }),
    ))
}

fn census_json(c: &domino_orbits::classify::Census, with_summary: bool) -> Value {
    let entries: Vec<Value> = c
        .entries
        .iter()
        .map(|e| json!({ "element": e.element.to_string(), "orbit": e.label.to_string(), "tableau": e.tableau.serialize() }))
        .collect();
    if !with_summary {
        return json!({ "rank": c.rank, "entries": entries });
    }
    let shapes: Vec<Value> = c
        .shapes
        .iter()
        .map(|s| {
            json!({
                "shape": s.shape.to_string(),
                "classes": s.classes,
                "tableaux": s.tableaux,
                "numerals": s.numerals.map(|(i, ii)| json!({ "I": i, "II": ii })),
            })
        })
        .collect();
    json!({
        "rank": c.rank,
        "settings": c.settings.to_string(),
        "elements": c.entries.len(),
        "classes": c.class_count(),
        "expected_classes": c.expected_classes,
        "collapse_agreements": c.collapse_agreements,
        "shapes": shapes,
        "failures": c.failures,
        "entries": entries,
    })
}

fn run(cli: &Cli, settings: &Settings) -> Result<(String, Value, bool), Failure> {
    let ok = |(t, v): (String, Value)| (t, v, true);
    match &cli.command {
        Command::Rs(a) => {
            check_element(a.rank, &a.element)?;
            let pair = rs(&a.element).map_err(domain)?;
            Ok(ok(pair_output(Some(&a.element), &pair)))
        }
        Command::Cycles(a) => run_cycles(a, settings).map(ok),
        Command::Op { name, input } => run_op(*name, input).map(ok),
        Command::Normalize(a) => run_normalize(a, settings).map(ok),
        Command::Classify { rank, element: Some(w) } => {
            check_element(*rank, w)?;
            let (label, t) = classify_with(w, settings).map_err(domain)?;
            Ok(ok((
                format!("element: {w}\norbit: {label}\n{}", tableau_text("tableau", &t)),
                json!({ "element": w.to_string(), "orbit": label.to_string(), "tableau": tableau_json(&t) }),
            )))
        }
        Command::Classify { rank, element: None } => {
            check_rank(*rank)?;
            let c = cell_census(*rank, settings).map_err(domain)?;
            if let Some(f) = c.failures.first() {
                return Err(Failure::Domain(f.clone()));
            }
            Ok(ok((c.tsv(), census_json(&c, false))))
        }
        Command::Cells { rank } => {
            check_rank(*rank)?;
            let c = cell_census(*rank, settings).map_err(domain)?;
            let passed = c.passed();
            Ok((format!("{}{}", c.summary(), c.tsv()), census_json(&c, true), passed))
        }
        Command::Verify { rank_six } => {
            let report = verify::run(&VerifyConfig {
                settings: *settings,
                rank_six: *rank_six,
            });
            let value = serde_json::to_value(&report).map_err(domain)?;
            Ok((format!("{report}\n"), value, report.passed()))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::from_env() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli, &settings) {
        Ok((text, value, passed)) => {
            let body = match cli.format {
                Format::Text => text,
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&value).expect("json")),
            };
            if let Err(e) = emit(&cli, &body) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
