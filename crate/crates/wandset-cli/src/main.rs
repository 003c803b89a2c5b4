//! `wandset`: build, query, verify, evaluate and export fragments.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wandset::conch::{gen_stages, verify_roundtrip};
use wandset::formula::{check_formulas, check_translation, eval, fragment_model, parse_labeled, Signature, Translation};
use wandset::instances::{check_cus_axioms, classify_kind, varin};
use wandset::io::{export_fragment, import_fragment};
use wandset::suites::check_core;
use wandset::{build, spec_by_name, BuildMode, Caps, Error, Fragment, ObjKind, Report, SetQuery};

const DEFAULT_MAX_OBJECTS: usize = 1 << 20;
/// Generalized extensionality in the Church suite compares all pairs.
const EXT_LIMIT: usize = 4096;

#[derive(Parser)]
#[command(name = "wandset", version, about = "Finite fragments of wand/set universes")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a fragment and write it as a universe file.
    Build {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        depth: usize,
        #[arg(long, env = "WANDSET_MAX_OBJECTS", default_value_t = DEFAULT_MAX_OBJECTS)]
        max_objects: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Largest bland subset generated in sampled mode.
        #[arg(long, default_value_t = 2)]
        max_card: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Answer a question about one universe file.
    Query {
        #[command(subcommand)]
        q: Query,
    },
    /// Run check suites and print a JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, env = "WANDSET_MAX_OBJECTS", default_value_t = DEFAULT_MAX_OBJECTS)]
        max_objects: usize,
    },
    /// Evaluate the sentences of a file, one per line.
    Eval {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        src: PathBuf,
        /// Which structure the fragment stands for.
        #[arg(long, value_enum, default_value_t = Sig::Ws)]
        signature: Sig,
        /// Free variable binding `NAME=OBJ`; repeatable.
        #[arg(long = "bind")]
        binds: Vec<String>,
    },
    /// Translate sentences; with `--dst`, check that truth is preserved.
    Translate {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        translation: Translation,
        #[arg(long)]
        src: PathBuf,
        #[arg(long)]
        dst: Option<PathBuf>,
    },
    /// Write the membership graph in DOT format.
    Export {
        /// Output file; stdout when absent.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Subcommand)]
enum Query {
    Rank {
        #[arg(long)]
        obj: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    Member {
        #[arg(long)]
        x: String,
        #[arg(long)]
        of: String,
        /// Church specs only: expansive membership.
        #[arg(long)]
        expansive: bool,
        #[arg(long = "in")]
        input: PathBuf,
    },
    Tap {
        #[arg(long)]
        wand: usize,
        #[arg(long)]
        arg: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    Decompose {
        #[arg(long)]
        obj: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
    Kind {
        #[arg(long)]
        obj: String,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Core,
    Conch,
    Church,
    Formula,
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Sig {
    Lt,
    Ws,
    E,
}

/// Failure with its exit code.
struct Fail(u8, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        let code = match e {
            Error::CapExceeded { .. } | Error::DepthCapExceeded { .. } => 2,
            Error::BeyondFragment(_) => 3,
            Error::UnknownSpec(_) => 64,
            _ => 65,
        };
        Fail(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Fail {
    Fail(64, msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(Fail(code, msg)) => {
            eprintln!("wandset: {msg}");
            ExitCode::from(code)
        }
    }
}

struct Out {
    text: String,
    code: u8,
}

impl Out {
    fn ok(text: String) -> Out {
        Out { text, code: 0 }
    }
}

fn read(p: &Path) -> Result<String, Fail> {
    std::fs::read_to_string(p).map_err(|e| Fail(65, format!("{}: {e}", p.display())))
}

fn write(p: &Path, s: &str) -> Result<(), Fail> {
    std::fs::write(p, s).map_err(|e| Fail(73, format!("{}: {e}", p.display())))
}

fn load(p: &Path) -> Result<Fragment, Fail> {
    Ok(import_fragment(&read(p)?)?)
}

fn is_church(f: &Fragment) -> bool {
    f.spec().name().starts_with("church")
}

fn run(cmd: Cmd) -> Result<Out, Fail> {
    match cmd {
        Cmd::Build {
            spec,
            depth,
            max_objects,
            mode,
            max_card,
            out,
        } => {
            let spec = spec_by_name(&spec)?;
            let mode = match mode {
                Mode::Exhaustive => BuildMode::Exhaustive,
                Mode::Sampled => BuildMode::Sampled { max_card },
            };
            let f = build(spec, depth, Caps { max_objects, mode })?;
            if let Some(p) = out {
                write(&p, &export_fragment(&f))?;
            }
            let mut s = String::new();
            for alpha in 0..=depth {
                writeln!(s, "stage {alpha}: {} objects", f.count_before(alpha)).unwrap();
            }
            let found = if depth == 0 { "none".to_string() } else { format!("{}", depth - 1) };
            writeln!(s, "{} objects of ordrank <= {found}", f.len()).unwrap();
            Ok(Out::ok(s))
        }
        Cmd::Query { q } => query(q).map(Out::ok),
        Cmd::Verify {
            suite,
            input,
            max_objects,
        } => verify(suite, &load(&input)?, max_objects),
        Cmd::Eval {
            formula,
            src,
            signature,
            binds,
        } => {
            let sentences = parse_labeled(&read(&formula)?)?;
            let f = load(&src)?;
            let sig = match signature {
                Sig::Lt => Signature::Lt,
                Sig::Ws => Signature::Ws,
                Sig::E => Signature::E,
            };
            let m = fragment_model(&f, sig)?;
            let mut env = Vec::new();
            for b in &binds {
                let (name, obj) = b.split_once('=').ok_or_else(|| usage(format!("bad binding `{b}`")))?;
                // the LT carrier is not the fragment, so only plain indices make sense there
                let x = match sig {
                    Signature::Lt => obj.trim().parse().map_err(|_| usage(format!("bad index in `{b}`")))?,
                    _ => f.resolve_ref(obj)?,
                };
                env.push((name.trim(), x));
            }
            let mut s = String::new();
            for (label, g) in &sentences {
                writeln!(s, "{label}: {}", eval(m.as_ref(), g, &env)?).unwrap();
            }
            Ok(Out::ok(s))
        }
        Cmd::Translate {
            formula,
            translation,
            src,
            dst,
        } => {
            let sentences = parse_labeled(&read(&formula)?)?;
            let sf = load(&src)?;
            match dst {
                None => {
                    let mut s = String::new();
                    for (label, g) in &sentences {
                        writeln!(s, "{label}: {}", translation.apply(g)?).unwrap();
                    }
                    Ok(Out::ok(s))
                }
                Some(d) => {
                    let df = load(&d)?;
                    Ok(report_out(check_translation(translation, &sf, &df, &sentences)?))
                }
            }
        }
        Cmd::Export { dot, input } => {
            let g = to_dot(&load(&input)?);
            match dot {
                Some(p) => {
                    write(&p, &g)?;
                    Ok(Out::ok(String::new()))
                }
                None => Ok(Out::ok(g)),
            }
        }
    }
}

fn query(q: Query) -> Result<String, Fail> {
    Ok(match q {
        Query::Rank { obj, input } => {
            let f = load(&input)?;
            let a = f.resolve_ref(&obj)?;
            format!("{}\n", f.obj(a).ordrank)
        }
        Query::Member {
            x,
            of,
            expansive,
            input,
        } => {
            let f = load(&input)?;
            let (x, a) = (f.resolve_ref(&x)?, f.resolve_ref(&of)?);
            let r = if expansive {
                if !is_church(&f) {
                    return Err(usage("--expansive needs a church spec"));
                }
                varin(&f, x, a)?
            } else {
                f.is_bland(a) && f.members(a).binary_search(&x).is_ok()
            };
            format!("{r}\n")
        }
        Query::Tap { wand, arg, input } => {
            let f = load(&input)?;
            let a = f.resolve_ref(&arg)?;
            match f.tap(wand, a)? {
                Some(c) => format!("{c} {}\n", f.render(c)),
                None => "undefined\n".to_string(),
            }
        }
        Query::Decompose { obj, input } => {
            let f = load(&input)?;
            let (base, path) = f.decompose(f.resolve_ref(&obj)?);
            let path: Vec<String> = path.iter().map(|w| w.to_string()).collect();
            format!("base {base} {}\npath [{}]\n", f.render(base), path.join(", "))
        }
        Query::Kind { obj, input } => {
            let f = load(&input)?;
            if !is_church(&f) {
                return Err(usage("kind needs a church spec"));
            }
            format!("{:?}\n", classify_kind(&f, f.resolve_ref(&obj)?)?)
        }
    })
}

fn verify(suite: Suite, f: &Fragment, max_objects: usize) -> Result<Out, Fail> {
    let needs_exhaustive = matches!(suite, Suite::Conch | Suite::Church);
    if needs_exhaustive && !f.exhaustive() {
        return Err(usage("this suite needs an exhaustive fragment"));
    }
    if suite == Suite::Church && !is_church(f) {
        return Err(usage(format!("the church suite does not apply to {}", f.spec().name())));
    }
    let mut r = Report::new("verify");
    if matches!(suite, Suite::Core | Suite::All) {
        r.extend(prefixed(check_core(f)));
    }
    if suite == Suite::Conch || (suite == Suite::All && f.exhaustive()) {
        let cs = gen_stages(f.spec_ref(), f.depth(), max_objects)?;
        r.extend(prefixed(verify_roundtrip(f, &cs)?));
    }
    if suite == Suite::Church || (suite == Suite::All && f.exhaustive() && is_church(f)) {
        r.extend(prefixed(check_cus_axioms(f, EXT_LIMIT)));
    }
    if matches!(suite, Suite::Formula | Suite::All) {
        r.extend(prefixed(check_formulas(f)?));
    }
    Ok(report_out(r))
}

/// Qualify check names by their suite so a merged report stays unambiguous.
fn prefixed(mut r: Report) -> Report {
    for c in &mut r.checks {
        c.name = format!("{}/{}", r.suite, c.name);
    }
    r
}

fn report_out(r: Report) -> Out {
    let code = if r.passed() { 0 } else { 1 };
    let mut text = serde_json::to_string_pretty(&r).expect("reports serialize");
    text.push('\n');
    Out { text, code }
}

fn to_dot(f: &Fragment) -> String {
    let mut s = String::from("digraph fragment {\n  rankdir=BT;\n");
    for id in 0..f.len() {
        let o = f.obj(id);
        let shape = match o.kind {
            ObjKind::Bland(_) => "ellipse",
            ObjKind::Tapped(_) => "box",
        };
        writeln!(
            s,
            "  n{id} [label=\"{}\", shape={shape}];",
            f.render(id).replace('"', "\\\""),
        )
        .unwrap();
    }
    for id in 0..f.len() {
        match &f.obj(id).kind {
            ObjKind::Bland(m) => {
                for x in m {
                    writeln!(s, "  n{x} -> n{id};").unwrap();
                }
            }
            ObjKind::Tapped(class) => {
                for (w, a) in class {
                    writeln!(s, "  n{a} -> n{id} [style=dashed, label=\"{w}\"];").unwrap();
                }
            }
        }
    }
    s.push_str("}\n");
    s
}
