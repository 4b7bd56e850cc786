mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use labelspace::dynamics::cofinal::{check_cofinal, check_cofinal_bounded, check_cofinal_sufficient, ProbePath};
use labelspace::dynamics::condition_l::{check_condition_l, condition_l_equivalence_test};
use labelspace::dynamics::disagreeable::{is_class_disagreeable, is_space_disagreeable};
use labelspace::dynamics::flags::theorem_flags;
use labelspace::dynamics::repeatable::{check_repeatable, find_repeatable_connection};
use labelspace::dynamics::sofic::{sofic_stabilization, SoficVerdict};
use labelspace::dynamics::Bounds;
use labelspace::bratteli::bratteli_diagram;
use labelspace::generalized::{
    check_weakly_left_resolving, class_of, decompose_set, lambda_set, minimal_containing, x_set, y_set,
    DEFAULT_LATTICE_CAP,
};
use labelspace::language::{enumerate_words, is_in_language, labels_from};
use labelspace::matrix::{matrix_system, verify_commutation};
use labelspace::par::{set_execution, Execution};
use labelspace::presentations::cross::cross_validate;
use labelspace::presentations::oracles::Oracle;
use labelspace::{Hierarchy, VertexSet, Window, Word};

use input::{InputArgs, Loaded};
use report::{status_line, Format, Report};

const USAGE: u8 = 64;
const FAILURE: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "labelspace", version, about = "Generalized vertices and bounded dynamical checks for labelled graphs")]
struct Cli {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    bounds: BoundArgs,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long, global = true)]
    ell_max: Option<usize>,
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[arg(long, global = true)]
    len_max: Option<usize>,
    #[arg(long, global = true)]
    prefix_len: Option<usize>,
    #[arg(long, global = true)]
    r_max: Option<usize>,
    #[arg(long, global = true)]
    m_max: Option<usize>,
    #[arg(long, global = true)]
    word_len_max: Option<usize>,
}

impl BoundArgs {
    fn resolve(&self) -> Bounds {
        let d = Bounds::default();
        Bounds {
            ell_max: self.ell_max.unwrap_or(d.ell_max),
            n_max: self.n_max.unwrap_or(d.n_max),
            len_max: self.len_max.unwrap_or(d.len_max),
            prefix_len: self.prefix_len.unwrap_or(d.prefix_len),
            r_max: self.r_max.unwrap_or(d.r_max),
            m_max: self.m_max.unwrap_or(d.m_max),
            word_len_max: self.word_len_max.unwrap_or(d.word_len_max),
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Essential, left-resolving and onto checks.
    Validate,
    /// Words of a given length, or membership of one word.
    Language {
        #[arg(long, default_value_t = 3)]
        length: usize,
        /// Only words emitted from this vertex.
        #[arg(long)]
        from: Option<String>,
        /// Test this word instead of listing.
        #[arg(long)]
        contains: Option<String>,
    },
    /// Generalized vertices at one level, with their signatures.
    Classes {
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// Class partitions for levels 1..=ell_max.
    Omega,
    /// Λ, X, Y and the class of a vertex, or the class decomposition of a set.
    Sets {
        #[arg(long)]
        vertex: Option<String>,
        /// Comma separated vertex set to decompose into classes.
        #[arg(long, value_delimiter = ',')]
        set: Vec<String>,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// The (M, I) pair at one level and its commutation check.
    MatrixSystem {
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    Bratteli {
        #[arg(long, default_value_t = 2)]
        k_max: usize,
    },
    #[command(subcommand)]
    Check(Check),
    /// Whether the class partitions stop refining.
    Sofic,
    /// Hypotheses of the simplicity and pure infiniteness theorems.
    Flags {
        /// START:PREFIX:PERIOD, e.g. u::100
        #[arg(long)]
        probe: Vec<String>,
    },
    /// Compares generated words with a language oracle up to n_max.
    CrossValidate {
        #[arg(long, value_enum)]
        oracle: Option<OracleName>,
        /// Bracket pairs for the dyck oracle when not implied by the family.
        #[arg(long)]
        pairs: Option<usize>,
    },
    /// The graph (or window) as JSON or DOT.
    Export,
}

#[derive(Debug, Subcommand)]
enum Check {
    Disagreeable {
        /// Check only the class of this vertex at --ell.
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    Cofinal {
        #[arg(long)]
        probe: Vec<String>,
        /// Run the bounded search at this level only.
        #[arg(long, conflicts_with = "sufficient")]
        ell: Option<usize>,
        /// Run only the strongly-connected singleton test.
        #[arg(long)]
        sufficient: bool,
    },
    Repeatable {
        #[arg(long)]
        vertex: Option<String>,
        #[arg(long, default_value_t = 1)]
        ell: usize,
    },
    /// Every cycle has an exit, on the underlying graph.
    ConditionL {
        /// Also compare with disagreeability of the trivial labelling.
        #[arg(long)]
        equivalence: bool,
    },
    WeaklyLeftResolving {
        #[arg(long, default_value_t = DEFAULT_LATTICE_CAP)]
        lattice_cap: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OracleName {
    Even,
    Dyck,
    X,
}

fn probes(win: &Window, specs: &[String]) -> anyhow::Result<Vec<ProbePath>> {
    let g = win.graph();
    specs
        .iter()
        .map(|spec| {
            let parts: Vec<&str> = spec.split(':').collect();
            let [start, prefix, period] = parts[..] else {
                anyhow::bail!("probe `{spec}` is not START:PREFIX:PERIOD");
            };
            let names = |t: &str| -> anyhow::Result<Vec<String>> {
                Ok(if t.is_empty() { Vec::new() } else { Word::parse(g, t)?.names(g) })
            };
            let (prefix, period) = (names(prefix)?, names(period)?);
            Ok(ProbePath::new(start, &refs(&prefix), &refs(&period)))
        })
        .collect()
}

fn refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn vertex(win: &Window, name: &str) -> anyhow::Result<labelspace::VertexId> {
    Ok(win.graph().vertex(name)?)
}

fn display_words(g: &labelspace::LabelledGraph, words: &[Word]) -> Vec<String> {
    words.iter().map(|w| w.display(g)).collect()
}

/// Deepest level a command examines, used for default window depths.
fn levels(cli: &Cli, bounds: &Bounds) -> usize {
    match &cli.command {
        Command::Classes { ell } | Command::Sets { ell, .. } => *ell,
        Command::MatrixSystem { ell } => ell + 2,
        Command::Language { length, .. } => *length,
        Command::CrossValidate { .. } => bounds.n_max,
        Command::Check(Check::Disagreeable { ell, .. } | Check::Repeatable { ell, .. }) => (*ell).max(bounds.ell_max),
        _ => bounds.ell_max,
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let bounds = cli.bounds.resolve();
    bounds.validate()?;
    let Loaded { window: win, source, oracle } = cli.input.load(levels(cli, &bounds))?;
    let g = win.graph();
    let mut r = Report::new(&cli.command_name(), source, &bounds, &win);
    match &cli.command {
        Command::Validate => {
            let mut v = g.validate();
            if !win.is_finite() {
                // Boundary vertices of a window are sinks or sources by construction.
                v.essential.witness.retain(|name| g.vertex(name).map(|x| win.is_core(x)).unwrap_or(false));
                v.essential.pass = v.essential.witness.is_empty();
            }
            let ok = v.essential.pass && v.left_resolving.pass;
            r.text = format!(
                "essential: {}\nleft_resolving: {}\nonto: {}\n",
                pass(v.essential.pass),
                pass(v.left_resolving.pass),
                pass(v.onto.pass)
            );
            r.dot = Some(g.to_dot());
            r.set(&v, if ok { 0 } else { 1 });
        }
        Command::Language { length, from, contains } => {
            r.param("length", *length);
            if let Some(text) = contains {
                let w = Word::parse(g, text)?;
                if let Some(d) = win.language_depth() {
                    if d < w.len() {
                        Err(labelspace::Error::DepthInsufficient { what: "language membership".into(), needed: w.len(), available: d })?;
                    }
                }
                let yes = is_in_language(g, w.symbols());
                r.text = format!("{}: {}\n", w.display(g), if yes { "in language" } else { "not in language" });
                r.set(&json!({ "word": w.names(g), "in_language": yes }), if yes { 0 } else { 1 });
            } else {
                let words = match from {
                    Some(name) => {
                        let v = vertex(&win, name)?;
                        if !win.exact_out(v, *length) {
                            anyhow::bail!("paths of length {length} from `{name}` leave the window; pass a larger --depth");
                        }
                        labels_from(g, &VertexSet::singleton(v), *length)?
                    }
                    None => {
                        if let Some(d) = win.language_depth() {
                            if d < *length {
                                Err(labelspace::Error::DepthInsufficient { what: "language enumeration".into(), needed: *length, available: d })?;
                            }
                        }
                        enumerate_words(g, *length)?
                    }
                };
                let shown = display_words(g, &words);
                r.text = format!("{} words\n{}\n", shown.len(), shown.join("\n"));
                r.set(&json!({ "from": from, "count": words.len(), "words": shown }), 0);
            }
        }
        Command::Classes { ell } => {
            r.param("ell", *ell);
            let h = Hierarchy::build(&win, *ell)?;
            let doc = h.to_document(*ell);
            r.text = doc
                .classes
                .iter()
                .map(|c| {
                    let sig: Vec<String> = c.signature.iter().map(|w| w.concat()).collect();
                    format!("{} = {{{}}} receives {{{}}}\n", c.name, c.members.join(", "), sig.join(", "))
                })
                .collect();
            r.set(&doc, 0);
        }
        Command::Omega => {
            let h = Hierarchy::build(&win, bounds.ell_max)?;
            let levels: Vec<_> = (1..=bounds.ell_max)
                .map(|l| json!({ "level": l, "size": h.partition(l).len(), "classes": h.partition(l).member_names(g) }))
                .collect();
            r.text = (1..=bounds.ell_max)
                .map(|l| {
                    let parts: Vec<String> = h.partition(l).member_names(g).iter().map(|m| format!("{{{}}}", m.join(", "))).collect();
                    format!("{l}: {}\n", parts.join(" "))
                })
                .collect();
            r.set(&levels, 0);
        }
        Command::Sets { vertex: name, set, ell } => {
            r.param("ell", *ell);
            match (name, set.is_empty()) {
                (Some(name), true) => {
                    let v = vertex(&win, name)?;
                    let doc = json!({
                        "vertex": name,
                        "lambda": display_words(g, &lambda_set(&win, v, *ell)?),
                        "x": g.names(&x_set(&win, v, *ell)?),
                        "y": display_words(g, &y_set(&win, v, *ell)?),
                        "class": g.names(&class_of(&win, v, *ell)?),
                        "minimal_member": g.names(&minimal_containing(&win, v, *ell)?),
                    });
                    r.set(&doc, 0);
                }
                (None, false) => {
                    let names: Vec<&str> = set.iter().map(String::as_str).collect();
                    let a = g.vertex_set(&names)?;
                    let h = Hierarchy::build(&win, *ell)?;
                    let d = decompose_set(&win, &a, *ell)?;
                    let classes: Vec<&str> = d.member_classes.iter().map(|&c| h.partition(*ell).classes[c].name.as_str()).collect();
                    r.set(&json!({ "set": set, "classes": classes, "verified": d.verified }), 0);
                }
                _ => anyhow::bail!("sets needs exactly one of --vertex or --set"),
            }
        }
        Command::MatrixSystem { ell } => {
            r.param("ell", *ell);
            let pair = matrix_system(&win, *ell)?;
            let commutation = verify_commutation(&win, *ell)?;
            let code = commutation.exit_code();
            r.text = format!(
                "rows: {}\ncols: {}\ncommutation: {}\n",
                pair.rows.join(" "),
                pair.cols.join(" "),
                status_line(commutation.status, commutation.scope)
            );
            r.set(&json!({ "pair": pair.to_document(g), "commutation": commutation }), code);
        }
        Command::Bratteli { k_max } => {
            r.param("k_max", *k_max);
            let d = bratteli_diagram(&win, *k_max, bounds.ell_max)?;
            r.text = d
                .levels
                .iter()
                .map(|l| format!("({}, {}): {:?}\n", l.k, l.level, l.sizes))
                .collect();
            r.dot = Some(d.to_dot());
            r.set(&d, 0);
        }
        Command::Check(check) => run_check(check, &win, &bounds, &mut r)?,
        Command::Sofic => {
            let s = sofic_stabilization(&win, bounds.ell_max)?;
            let (line, code) = match s.verdict {
                SoficVerdict::Stabilized { level } => (format!("stabilized at level {level}"), 0),
                SoficVerdict::Growing { strictly: true } => ("strictly growing".to_string(), 2),
                SoficVerdict::Growing { strictly: false } => ("growing".to_string(), 2),
            };
            r.text = format!("sizes: {:?}\n{line}\n", s.sizes);
            r.set(&s, code);
        }
        Command::Flags { probe } => {
            let f = theorem_flags(&win, &bounds, &probes(&win, probe)?)?;
            r.text = [&f.disagreeable, &f.cofinal, &f.repeatable]
                .iter()
                .map(|v| format!("{}: {}\n", v.property, status_line(v.status, v.scope)))
                .chain([&f.simple, &f.purely_infinite].iter().map(|flag| {
                    format!("{} => {}: {}\n", flag.hypotheses.join(" + "), flag.implies, status_line(flag.status, flag.scope))
                }))
                .collect();
            let code = f.exit_code();
            r.set(&f, code);
        }
        Command::CrossValidate { oracle: name, pairs } => {
            let oracle = match name {
                Some(OracleName::Even) => Oracle::Even,
                Some(OracleName::X) => Oracle::X,
                Some(OracleName::Dyck) => match (pairs, oracle) {
                    (Some(n), _) => Oracle::Dyck(*n),
                    (None, Some(o @ Oracle::Dyck(_))) => o,
                    _ => anyhow::bail!("the dyck oracle needs --pairs"),
                },
                None => oracle.ok_or_else(|| anyhow::anyhow!("no oracle for this input; pass --oracle"))?,
            };
            let v = cross_validate(&win, oracle, bounds.n_max)?;
            r.verdict(v);
        }
        Command::Export => unreachable!("handled before loading the report"),
    }
    Ok(r)
}

fn run_check(check: &Check, win: &Window, bounds: &Bounds, r: &mut Report) -> anyhow::Result<()> {
    match check {
        Check::Disagreeable { vertex: Some(name), ell } => {
            r.param("ell", *ell);
            r.verdict(is_class_disagreeable(win, vertex(win, name)?, *ell, bounds)?);
        }
        Check::Disagreeable { vertex: None, .. } => r.verdict(is_space_disagreeable(win, bounds)?),
        Check::Cofinal { probe, ell, sufficient } => {
            let probes = probes(win, probe)?;
            if *sufficient {
                r.verdict(check_cofinal_sufficient(win, bounds)?);
            } else if let Some(l) = ell {
                r.param("ell", *l);
                r.verdict(check_cofinal_bounded(win, *l, bounds, &probes)?);
            } else {
                r.verdict(check_cofinal(win, bounds, &probes)?);
            }
        }
        Check::Repeatable { vertex: Some(name), ell } => {
            r.param("ell", *ell);
            r.verdict(find_repeatable_connection(win, vertex(win, name)?, *ell, bounds)?);
        }
        Check::Repeatable { vertex: None, .. } => r.verdict(check_repeatable(win, bounds)?),
        Check::ConditionL { equivalence } => {
            let dg = win.graph().underlying();
            if *equivalence {
                r.verdict(condition_l_equivalence_test(&dg, bounds)?);
            } else {
                r.verdict(check_condition_l(&dg));
            }
        }
        Check::WeaklyLeftResolving { lattice_cap } => {
            r.param("lattice_cap", *lattice_cap);
            r.verdict(check_weakly_left_resolving(win, bounds.ell_max, bounds.word_len_max, *lattice_cap)?);
        }
    }
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}


impl Cli {
    fn command_name(&self) -> String {
        let check = |c: &Check| match c {
            Check::Disagreeable { .. } => "disagreeable",
            Check::Cofinal { .. } => "cofinal",
            Check::Repeatable { .. } => "repeatable",
            Check::ConditionL { .. } => "condition-l",
            Check::WeaklyLeftResolving { .. } => "weakly-left-resolving",
        };
        match &self.command {
            Command::Validate => "validate".into(),
            Command::Language { .. } => "language".into(),
            Command::Classes { .. } => "classes".into(),
            Command::Omega => "omega".into(),
            Command::Sets { .. } => "sets".into(),
            Command::MatrixSystem { .. } => "matrix-system".into(),
            Command::Bratteli { .. } => "bratteli".into(),
            Command::Check(c) => format!("check {}", check(c)),
            Command::Sofic => "sofic".into(),
            Command::Flags { .. } => "flags".into(),
            Command::CrossValidate { .. } => "cross-validate".into(),
            Command::Export => "export".into(),
        }
    }
}

fn export(cli: &Cli) -> anyhow::Result<String> {
    let bounds = cli.bounds.resolve();
    let win = cli.input.load(bounds.ell_max)?.window;
    Ok(match cli.format {
        Format::Dot => win.graph().to_dot(),
        _ => win.graph().to_json() + "\n",
    })
}

fn emit(cli: &Cli, text: &str) -> anyhow::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| anyhow::anyhow!("cannot write {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn hint(e: &anyhow::Error) -> Option<String> {
    match e.downcast_ref::<labelspace::Error>()? {
        labelspace::Error::DepthInsufficient { needed, .. } => Some(format!("hint: pass --depth {needed} (or larger)")),
        labelspace::Error::VertexCap { .. } => Some(format!("hint: set {} or lower --depth", input::VERTEX_CAP_VAR)),
        labelspace::Error::ClosureBudget { .. } => Some("hint: raise --lattice-cap or lower --ell-max".into()),
        _ => None,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let dot_ok = matches!(cli.command, Command::Export | Command::Validate | Command::Bratteli { .. });
    if cli.format == Format::Dot && !dot_ok {
        eprintln!("error: --format dot is only available for export, validate and bratteli");
        return ExitCode::from(USAGE);
    }
    if cli.sequential {
        set_execution(Execution::Sequential);
    }
    let outcome = if matches!(cli.command, Command::Export) {
        export(&cli).and_then(|text| emit(&cli, &text)).map(|_| 0)
    } else {
        run(&cli).and_then(|r| emit(&cli, &r.render(cli.format)).map(|_| r.exit))
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(h) = hint(&e) {
                eprintln!("{h}");
            }
            ExitCode::from(FAILURE)
        }
    }
}
