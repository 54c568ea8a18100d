//! Thin command-line front end: load corpus files, run evaluation, traces,
//! and law suites, and print canonical reports.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use shadowtrace::bicat::Bicat;
use shadowtrace::diagram::boundaries;
use shadowtrace::eval::{validate, value};
use shadowtrace::group::twisted_conjugacy_classes;
use shadowtrace::instances::grbimod::{GrBimod, GrTwo};
use shadowtrace::instances::matmod::MatMod;
use shadowtrace::instances::span::Span;
use shadowtrace::laws::{check_axioms, verify_law, InstanceId, LawId, LawReport};
use shadowtrace::trace::{euler, grbimod_dual, matmod_dual, span_dual, trace, transfer};
use shadowtrace::traces::{hattori_stallings, lefschetz, reidemeister, twisted_trace, IdempotentModule};
use shadowtrace::workspace::Workspace;
use shadowtrace::{Ring, Scalar, ShadowMor};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "shadowtrace", about = "Exact bicategorical traces and string-diagram evaluation")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Args)]
struct FileArgs {
    /// Corpus files; when omitted, every `.st` file in the corpus
    /// directory (`SHADOWTRACE_CORPUS` or `./corpus`) is loaded.
    paths: Vec<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse files and check every diagram's layer interfaces.
    Validate(FileArgs),
    /// Evaluate a diagram under the declared matmod valuation.
    Eval {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value = "matmod-z")]
        instance: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Bicategorical trace of a declared 2-cell, span, or group-ring cell.
    Trace {
        /// Generator with domain `Q… M` and codomain `M P…` (matmod).
        #[arg(long)]
        gen: Option<String>,
        /// The 1-cell to dualize for `--gen`.
        #[arg(long)]
        over: Option<String>,
        /// A dualizable span: the trace tabulates its right leg.
        #[arg(long)]
        span: Option<String>,
        /// A group-ring 1-cell with trivial source group.
        #[arg(long)]
        grcell: Option<String>,
        /// Equivariant endomorphism matrix for `--grcell`.
        #[arg(long)]
        grmat: Option<String>,
        #[arg(long, default_value = "matmod-z")]
        instance: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Euler characteristic: trace of the identity.
    Euler {
        /// Rank of a free one-object matmod cell.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long)]
        span: Option<String>,
        #[arg(long)]
        grcell: Option<String>,
        #[arg(long, default_value = "matmod-z")]
        instance: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Transfer: trace of a diagonal-shaped 2-cell `M -> M P…` (matmod).
    Transfer {
        #[arg(long)]
        gen: String,
        #[arg(long)]
        over: String,
        #[arg(long, default_value = "matmod-z")]
        instance: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Hattori-Stallings trace of a square group-ring matrix.
    Hs {
        #[arg(long)]
        grmat: String,
        /// Optional idempotent cutting the module down.
        #[arg(long)]
        idem: Option<String>,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Twisted trace of a square group-ring matrix.
    Twisted {
        #[arg(long)]
        grmat: String,
        #[arg(long)]
        endo: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Reidemeister trace of an equivariant complex with a twisted self-map.
    Reidemeister {
        #[arg(long)]
        complex: String,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Lefschetz number of a plain complex (or of an augmented one).
    Lefschetz {
        #[arg(long)]
        plain: Option<String>,
        #[arg(long)]
        complex: Option<String>,
        #[command(flatten)]
        files: FileArgs,
    },
    /// Randomized verification of one law (or all laws).
    Laws {
        /// Law name, e.g. `theta-involution`, `sliding`, `cube`;
        /// omit to run every law.
        #[arg(long)]
        law: Option<String>,
        #[arg(long, default_value = "matmod-z")]
        instance: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized verification of the structural axioms.
    Axioms {
        #[arg(long)]
        instance: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn corpus_dir() -> PathBuf {
    std::env::var_os("SHADOWTRACE_CORPUS").map(PathBuf::from).unwrap_or_else(|| "corpus".into())
}

fn load(files: &FileArgs) -> Result<Workspace, String> {
    let paths: Vec<PathBuf> = if files.paths.is_empty() {
        let dir = corpus_dir();
        let mut ps: Vec<PathBuf> = std::fs::read_dir(&dir)
            .map_err(|e| format!("cannot read corpus dir {}: {e}", dir.display()))?
            .filter_map(|x| x.ok())
            .map(|x| x.path())
            .filter(|p| p.extension().is_some_and(|e| e == "st"))
            .collect();
        ps.sort();
        ps
    } else {
        files.paths.clone()
    };
    let mut w = Workspace::new();
    for p in &paths {
        let text =
            std::fs::read_to_string(p).map_err(|e| format!("cannot read {}: {e}", p.display()))?;
        w.parse_into(&p.display().to_string(), &text).map_err(|e| e.to_string())?;
    }
    Ok(w)
}

fn instance_id(s: &str) -> Result<InstanceId, String> {
    InstanceId::parse(s).ok_or_else(|| {
        format!("unknown instance {s} (expected matmod-z, matmod-q, span, grbimod-z, grbimod-q)")
    })
}

fn matmod_ring(s: &str) -> Result<Ring, String> {
    match instance_id(s)? {
        InstanceId::MatModZ => Ok(Ring::Z),
        InstanceId::MatModQ => Ok(Ring::Q),
        _ => Err(format!("{s}: this command needs a matmod instance")),
    }
}

fn mor_json(m: &ShadowMor) -> serde_json::Value {
    json!({
        "src": { "gens": m.src.gens, "labels": m.src.labels },
        "tgt": { "gens": m.tgt.gens, "labels": m.tgt.labels },
        "mat": (0..m.mat.rows)
            .map(|i| (0..m.mat.cols).map(|j| m.mat.get(i, j).to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn print_mor(fmt: Format, m: &ShadowMor) {
    match fmt {
        Format::Machine => println!("{}", mor_json(m)),
        Format::Text => {
            println!("source: {} generators [{}]", m.src.gens, m.src.labels.join(", "));
            println!("target: {} generators [{}]", m.tgt.gens, m.tgt.labels.join(", "));
            println!("matrix:");
            for i in 0..m.mat.rows {
                let row: Vec<String> =
                    (0..m.mat.cols).map(|j| m.mat.get(i, j).to_string()).collect();
                println!("  {}", row.join(" "));
            }
        }
    }
}

fn print_classes(fmt: Format, names: &[String], values: &[Scalar]) {
    match fmt {
        Format::Machine => {
            let obj: serde_json::Map<String, serde_json::Value> = names
                .iter()
                .zip(values)
                .map(|(n, v)| (n.clone(), json!(v.to_string())))
                .collect();
            println!("{}", serde_json::Value::Object(obj));
        }
        Format::Text => {
            for (n, v) in names.iter().zip(values) {
                println!("[{n}] {v}");
            }
        }
    }
}

fn parse_law(s: &str) -> Result<LawId, String> {
    let norm: String = s.chars().filter(|c| *c != '-' && *c != '_').collect();
    if norm.eq_ignore_ascii_case("deformation") {
        return Ok(LawId::MoveInvariance);
    }
    LawId::parse(&norm).ok_or_else(|| format!("unknown law {s}"))
}

fn report_ok(fmt: Format, reps: &[LawReport]) -> bool {
    let mut all_ok = true;
    for r in reps {
        let ok = r.passed();
        all_ok &= ok;
        match fmt {
            Format::Machine => println!(
                "{}",
                json!({
                    "law": format!("{:?}", r.law),
                    "instance": r.instance,
                    "trials": r.trials,
                    "failures": r.failures,
                    "pass": ok,
                })
            ),
            Format::Text => {
                if ok {
                    println!("PASS {:?} [{}] {} trials", r.law, r.instance, r.trials);
                } else {
                    println!(
                        "FAIL {:?} [{}] {} trials, counterexample seeds {:?}",
                        r.law, r.instance, r.trials, r.failures
                    );
                }
            }
        }
    }
    all_ok
}

fn run(cli: Cli) -> Result<bool, String> {
    let fmt = cli.format;
    match cli.cmd {
        Cmd::Validate(files) => {
            let w = load(&files)?;
            let mut ok = true;
            for (name, d) in &w.diagrams {
                match boundaries(d) {
                    Ok((top, bottom)) => match fmt {
                        Format::Machine => println!(
                            "{}",
                            json!({"diagram": name, "top": top.to_string(),
                                   "bottom": bottom.to_string(), "pass": true})
                        ),
                        Format::Text => println!("OK {name}: {top} => {bottom}"),
                    },
                    Err(e) => {
                        ok = false;
                        match fmt {
                            Format::Machine => println!(
                                "{}",
                                json!({"diagram": name, "error": e.to_string(), "pass": false})
                            ),
                            Format::Text => println!("ERROR {name}: {e}"),
                        }
                    }
                }
            }
            Ok(ok)
        }
        Cmd::Eval { diagram, instance, files } => {
            let w = load(&files)?;
            let inst = MatMod::new(matmod_ring(&instance)?);
            let v = w.matmod_valuation(&inst)?;
            let d = w
                .diagrams
                .get(&diagram)
                .ok_or_else(|| format!("unknown diagram {diagram}"))?;
            validate(&inst, d, &v).map_err(|e| e.to_string())?;
            let m = value(&inst, d, &v).map_err(|e| e.to_string())?;
            print_mor(fmt, &m);
            Ok(true)
        }
        Cmd::Trace { gen, over, span, grcell, grmat, instance, files } => {
            let w = load(&files)?;
            if let Some(name) = span {
                let inst = Span;
                let cell = w.span_cell(&name)?;
                let d = span_dual(&inst, &cell)?;
                let m = euler(&inst, &d);
                print_mor(fmt, &m);
                if fmt == Format::Text {
                    let tab: Vec<String> = (0..m.mat.cols)
                        .map(|j| {
                            let row = (0..m.mat.rows)
                                .find(|&i| !m.mat.get(i, j).to_string().eq("0"))
                                .unwrap_or(0);
                            format!("{j} -> {row}")
                        })
                        .collect();
                    println!("tabulation: {}", tab.join(", "));
                }
                Ok(true)
            } else if let Some(name) = grcell {
                let cell = w.gr_cell(&name)?;
                let inst = GrBimod::new(cell.src.ring);
                let d = grbimod_dual(&inst, &cell)?;
                let m = match grmat {
                    Some(fm) => {
                        let f = &w.grmats.get(&fm).ok_or_else(|| format!("unknown grmat {fm}"))?.mat;
                        let two = GrTwo::new(cell.clone(), cell.clone(), f.clone());
                        let uq = inst.unit(&inst.src0(&cell));
                        let up = inst.unit(&inst.tgt0(&cell));
                        trace(&inst, &uq, &up, &two, &d)
                    }
                    None => euler(&inst, &d),
                };
                print_mor(fmt, &m);
                Ok(true)
            } else {
                let gen = gen.ok_or("trace needs --gen, --span, or --grcell")?;
                let over = over.ok_or("--gen needs --over naming the dualized cell")?;
                let inst = MatMod::new(matmod_ring(&instance)?);
                let v = w.matmod_valuation(&inst)?;
                let g = w.gens.get(&gen).ok_or_else(|| format!("unknown generator {gen}"))?;
                if g.dom.last() != Some(&over) || g.cod.first() != Some(&over) {
                    return Err(format!(
                        "generator {gen} must have domain `… {over}` and codomain `{over} …`"
                    ));
                }
                let m_cell = v.cells[&over].clone();
                let d = matmod_dual(&inst, &m_cell)?;
                let fold = |word: &[String]| {
                    let cells: Vec<_> = word.iter().map(|l| v.cells[l].clone()).collect();
                    match cells.split_first() {
                        None => inst.unit(&m_cell.src),
                        Some((h, t)) => {
                            let mut acc = h.clone();
                            for c in t {
                                acc = inst.compose1(&acc, c);
                            }
                            acc
                        }
                    }
                };
                let q = fold(&g.dom[..g.dom.len() - 1]);
                let p = fold(&g.cod[1..]);
                let m = trace(&inst, &q, &p, &v.gens[&gen], &d);
                print_mor(fmt, &m);
                Ok(true)
            }
        }
        Cmd::Euler { rank, span, grcell, instance, files } => {
            if let Some(n) = rank {
                let inst = MatMod::new(matmod_ring(&instance)?);
                let z = shadowtrace::instances::matmod::MatZero { name: "R".into(), elems: 1 };
                let cell =
                    shadowtrace::instances::matmod::MatCell::atomic("M", &z, &z, &[vec![n]]);
                let d = matmod_dual(&inst, &cell)?;
                let m = euler(&inst, &d);
                print_mor(fmt, &m);
                return Ok(true);
            }
            let w = load(&files)?;
            if let Some(name) = span {
                let cell = w.span_cell(&name)?;
                let d = span_dual(&Span, &cell)?;
                print_mor(fmt, &euler(&Span, &d));
                Ok(true)
            } else if let Some(name) = grcell {
                let cell = w.gr_cell(&name)?;
                let inst = GrBimod::new(cell.src.ring);
                let d = grbimod_dual(&inst, &cell)?;
                print_mor(fmt, &euler(&inst, &d));
                Ok(true)
            } else {
                Err("euler needs --rank, --span, or --grcell".into())
            }
        }
        Cmd::Transfer { gen, over, instance, files } => {
            let w = load(&files)?;
            let inst = MatMod::new(matmod_ring(&instance)?);
            let v = w.matmod_valuation(&inst)?;
            let g = w.gens.get(&gen).ok_or_else(|| format!("unknown generator {gen}"))?;
            if g.dom.as_slice() != [over.clone()] || g.cod.first() != Some(&over) {
                return Err(format!(
                    "generator {gen} must have domain `{over}` and codomain `{over} …`"
                ));
            }
            let m_cell = v.cells[&over].clone();
            let d = matmod_dual(&inst, &m_cell)?;
            let p = {
                let cells: Vec<_> = g.cod[1..].iter().map(|l| v.cells[l].clone()).collect();
                match cells.split_first() {
                    None => inst.unit(&m_cell.tgt),
                    Some((h, t)) => {
                        let mut acc = h.clone();
                        for c in t {
                            acc = inst.compose1(&acc, c);
                        }
                        acc
                    }
                }
            };
            let m = transfer(&inst, &p, &v.gens[&gen], &d);
            print_mor(fmt, &m);
            Ok(true)
        }
        Cmd::Hs { grmat, idem, files } => {
            let w = load(&files)?;
            let a = w.grmats.get(&grmat).ok_or_else(|| format!("unknown grmat {grmat}"))?;
            let classes = shadowtrace::group::conjugacy_classes(a.mat.group.clone());
            let names: Vec<String> =
                classes.reps.iter().map(|&r| a.mat.group.elem_names[r].clone()).collect();
            let values = match idem {
                Some(e) => {
                    let em = w.grmats.get(&e).ok_or_else(|| format!("unknown grmat {e}"))?;
                    IdempotentModule::new(em.mat.clone())?.hs(&a.mat)?
                }
                None => hattori_stallings(&a.mat),
            };
            print_classes(fmt, &names, &values);
            Ok(true)
        }
        Cmd::Twisted { grmat, endo, files } => {
            let w = load(&files)?;
            let a = w.grmats.get(&grmat).ok_or_else(|| format!("unknown grmat {grmat}"))?;
            let psi = w.endo(&endo)?;
            let classes = twisted_conjugacy_classes(a.mat.group.clone(), &psi);
            let names: Vec<String> =
                classes.reps.iter().map(|&r| a.mat.group.elem_names[r].clone()).collect();
            print_classes(fmt, &names, &twisted_trace(&a.mat, &psi));
            Ok(true)
        }
        Cmd::Reidemeister { complex, files } => {
            let w = load(&files)?;
            let c = w.twisted_complex(&complex)?;
            let classes = twisted_conjugacy_classes(c.group.clone(), &c.psi);
            let names: Vec<String> =
                classes.reps.iter().map(|&r| c.group.elem_names[r].clone()).collect();
            print_classes(fmt, &names, &reidemeister(&c));
            Ok(true)
        }
        Cmd::Lefschetz { plain, complex, files } => {
            let w = load(&files)?;
            let val = match (plain, complex) {
                (Some(p), _) => lefschetz(&w.plain_complex(&p)?),
                (None, Some(c)) => lefschetz(&w.twisted_complex(&c)?.augment()),
                (None, None) => return Err("lefschetz needs --plain or --complex".into()),
            };
            match fmt {
                Format::Machine => println!("{}", json!({ "lefschetz": val.to_string() })),
                Format::Text => println!("{val}"),
            }
            Ok(true)
        }
        Cmd::Laws { law, instance, trials, seed } => {
            let inst = instance_id(&instance)?;
            let reps: Vec<LawReport> = match law {
                Some(l) => vec![verify_law(parse_law(&l)?, inst, trials, seed)],
                None => LawId::ALL
                    .iter()
                    .map(|&l| verify_law(l, inst, trials, seed))
                    .collect(),
            };
            Ok(report_ok(fmt, &reps))
        }
        Cmd::Axioms { instance, trials, seed } => {
            let insts: Vec<InstanceId> = match instance {
                Some(s) => vec![instance_id(&s)?],
                None => InstanceId::ALL.to_vec(),
            };
            let mut reps = Vec::new();
            for i in insts {
                reps.extend(check_axioms(i, trials, seed));
            }
            Ok(report_ok(fmt, &reps))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
