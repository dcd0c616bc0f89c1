//! `starcalc`: constructions, searches and verification suites over JSON files.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use starcalc::density::{classify_canonical, density_profile, detect_subdivided_clique, mine_gadget};
use starcalc::fixtures;
use starcalc::gadget::{ostar, star, Gadget};
use starcalc::graph::{arc_graph, gaifman, subdivide, subdivided_clique, SubdivisionMode};
use starcalc::hom::{find_isomorphism, is_rigid};
use starcalc::json::{self as js, to_text};
use starcalc::logic::{gra_spec, lemma_ppcomponents_check, orient_lpath, pp_satisfies, reconstruct};
use starcalc::verify::{run_suite, Params, SUITES};
use starcalc::{Error, Graph, HomQuery, LabelTable, Structure};

#[derive(Parser)]
#[command(name = "starcalc", version, about = "Finite relational structures and gadget star products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: Out,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Args)]
struct Out {
    /// Write to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Gaifman graph of a structure.
    Gaifman { input: PathBuf },
    /// Arc graph of a directed structure.
    Arc { input: PathBuf },
    /// Replace every edge of a graph by a path of length r + 1.
    Subdivide {
        input: PathBuf,
        #[arg(long)]
        r: usize,
        /// Subdivide each unordered edge once.
        #[arg(long)]
        undirected: bool,
    },
    /// The subdivided clique K_n^r.
    Clique {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// G ⋆ M for a graph and a gadget.
    Star {
        #[arg(long)]
        graph: PathBuf,
        /// Gadget file, or `fixture:NAME`.
        #[arg(long)]
        gadget: String,
    },
    /// H ⊛ M for a simple graph gadget H.
    Ostar {
        #[arg(long)]
        h: String,
        #[arg(long)]
        gadget: String,
    },
    /// The embedding of M at an edge of G ⋆ M.
    Phi {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        gadget: String,
        /// Edge as `u,v`.
        #[arg(long, value_parser = parse_pair)]
        edge: (usize, usize),
    },
    /// Homomorphisms between two structures.
    Hom {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
        #[arg(long)]
        injective: bool,
        #[arg(long)]
        strong: bool,
        /// Pin `x=y`; repeatable.
        #[arg(long, value_parser = parse_pin)]
        pin: Vec<(usize, usize)>,
        /// Print only the number of homomorphisms.
        #[arg(long, conflicts_with = "exists")]
        count: bool,
        /// Print only whether one exists.
        #[arg(long)]
        exists: bool,
        #[arg(long)]
        limit: Option<usize>,
    },
    /// An isomorphism between two structures, or null.
    Iso { first: PathBuf, second: PathBuf },
    /// Whether the identity is the only endomorphism.
    Rigid { input: PathBuf },
    /// Orientation of a path given with `p` (and optionally `steps`).
    Orient { input: PathBuf },
    /// Satisfaction of a primitive positive formula.
    PpSat {
        #[arg(long)]
        structure: PathBuf,
        #[arg(long)]
        formula: PathBuf,
        /// Comma-separated tuple for the free variables.
        #[arg(long, value_parser = parse_list, default_value = "")]
        tuple: Vec<usize>,
    },
    /// The structure interpreted from the homomorphisms out of a spec.
    Reconstruct {
        input: PathBuf,
        /// Spec file; the graph spec when absent.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// A subdivided clique K_n^r inside an undirected graph.
    Detect {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Largest n with K_n^r inside, for each r.
    Profile {
        input: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_r: usize,
    },
    /// Canonical types of a colouring of pairs.
    Classify {
        /// JSON object from `"i-j"` to a colour, or a built-in name:
        /// constant, first, second, injective, engineered.
        colouring: String,
        #[arg(long)]
        n: usize,
    },
    /// A gadget behind a dense host structure.
    Mine {
        input: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
    },
    /// Run verification suites.
    Verify {
        /// One of the suite names or `all`.
        suite: String,
        #[arg(long)]
        max_vertices: Option<usize>,
        #[arg(long)]
        max_r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// DOT for a graph, or for the Gaifman graph of another structure.
    ExportDot { input: PathBuf },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    match parse_list(s)?[..] {
        [u, v] => Ok((u, v)),
        _ => Err("expected `u,v`".into()),
    }
}

fn parse_pin(s: &str) -> Result<(usize, usize), String> {
    let (x, y) = s.split_once('=').ok_or("expected `x=y`")?;
    Ok((x.trim().parse().map_err(|_| "bad pin")?, y.trim().parse().map_err(|_| "bad pin")?))
}

fn parse_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| x.trim().parse().map_err(|_| format!("`{x}` is not a natural number"))).collect()
}

enum Failure {
    Domain(Error),
    Usage(String),
    Suite,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(m) => Failure::Usage(format!("cannot parse input: {m}")),
            other => Failure::Domain(other),
        }
    }
}

type Run<T = ()> = Result<T, Failure>;

fn read_value(path: &Path) -> Run<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    Ok(js::parse_text(&text)?)
}

fn read_structure(path: &Path) -> Run<Structure> {
    Ok(js::structure_from_json(&read_value(path)?)?)
}

fn read_graph(path: &Path) -> Run<Graph> {
    Ok(Graph::try_from_structure(read_structure(path)?)?)
}

fn read_gadget(spec: &str) -> Run<Gadget> {
    match spec.strip_prefix("fixture:") {
        Some(name) => fixtures::gadget(name).ok_or_else(|| {
            let known: Vec<&str> = fixtures::gadgets().iter().map(|(n, _)| *n).collect();
            Failure::Usage(format!("unknown fixture `{name}`; known: {}", known.join(", ")))
        }),
        None => Ok(js::gadget_from_json(&read_value(Path::new(spec))?)?),
    }
}

fn tags_of(v: &Value) -> Option<LabelTable> {
    js::tags_from_json(v).ok().map(|t| t.into_iter().collect())
}

struct Emit<'a> {
    out: &'a Out,
}

impl Emit<'_> {
    fn text(&self, s: &str) -> Run {
        match &self.out.output {
            Some(p) => fs::write(p, s).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
            None => io::stdout().write_all(s.as_bytes()).map_err(|e| Failure::Usage(e.to_string())),
        }
    }

    fn json(&self, v: &Value) -> Run {
        self.text(&to_text(v))
    }

    /// JSON, or DOT of the graph when `--format dot` is given.
    fn graph(&self, v: &Value, g: &Graph, tags: Option<&LabelTable>) -> Run {
        match self.out.format {
            Format::Json => self.json(v),
            Format::Dot => self.text(&g.to_dot(tags)),
        }
    }
}

fn run(cmd: Command, out: &Out) -> Run {
    let emit = Emit { out };
    match cmd {
        Command::Gaifman { input } => {
            let g = gaifman(&read_structure(&input)?);
            emit.graph(&js::structure_to_json(&g), &g, None)
        }
        Command::Arc { input } => {
            let m = read_structure(&input)?;
            let arc = arc_graph(&m)?;
            let names: Vec<String> = arc.vertices.iter().map(|&x| m.label(x)).collect();
            let g = Graph::try_from_structure(arc.graph.clone().into_structure().with_labels(names))?;
            let mut v = js::structure_to_json(&g);
            v["vertices"] = json!(arc.vertices);
            emit.graph(&v, &g, None)
        }
        Command::Subdivide { input, r, undirected } => {
            let mode = if undirected { SubdivisionMode::Undirected } else { SubdivisionMode::Directed };
            let t = subdivide(&read_graph(&input)?, r, mode)?;
            emit.graph(&js::tagged_to_json(&t.graph, &t.tags), &t.graph, Some(&t.tags))
        }
        Command::Clique { n, r } => {
            let t = subdivided_clique(n, r);
            emit.graph(&js::tagged_to_json(&t.graph, &t.tags), &t.graph, Some(&t.tags))
        }
        Command::Star { graph, gadget } => {
            let s = star(&read_graph(&graph)?, &read_gadget(&gadget)?);
            match Graph::try_from_structure(s.structure.clone()) {
                Ok(g) => emit.graph(&js::star_to_json(&s), &g, Some(&s.tags)),
                Err(_) => emit.graph(&js::star_to_json(&s), &gaifman(&s.structure), Some(&s.tags)),
            }
        }
        Command::Ostar { h, gadget } => emit.json(&js::gadget_to_json(&ostar(&read_gadget(&h)?, &read_gadget(&gadget)?)?)),
        Command::Phi { graph, gadget, edge } => {
            let m = read_gadget(&gadget)?;
            let s = star(&read_graph(&graph)?, &m);
            emit.json(&json!(s.phi(&m, edge.0, edge.1)?))
        }
        Command::Hom { from, to, injective, strong, pin, count, exists, limit } => {
            let (m, n) = (read_structure(&from)?, read_structure(&to)?);
            let mut q = HomQuery::new(&m, &n).injective(injective).strong(strong).pinned(pin);
            if count {
                return emit.text(&format!("{}\n", q.count()?));
            }
            if exists {
                return emit.text(&format!("{}\n", q.exists()?));
            }
            if let Some(l) = limit {
                q = q.limit(l);
            }
            emit.json(&json!(q.maps()?))
        }
        Command::Iso { first, second } => {
            emit.json(&json!(find_isomorphism(&read_structure(&first)?, &read_structure(&second)?)?))
        }
        Command::Rigid { input } => emit.text(&format!("{}\n", is_rigid(&read_structure(&input)?))),
        Command::Orient { input } => {
            let path = js::lpath_from_json(&read_value(&input)?)?;
            let o = orient_lpath(&path);
            let mut v = js::structure_to_json(&o.structure);
            v["witness"] = js::perm_witness_to_json(&o.witness);
            emit.json(&v)
        }
        Command::PpSat { structure, formula, tuple } => {
            let a = read_structure(&structure)?;
            let phi = js::pp_from_json(&read_value(&formula)?)?;
            let sat = pp_satisfies(&a, &tuple, &phi)?;
            let agree = lemma_ppcomponents_check(&a, &tuple, &phi)?;
            emit.json(&json!({"satisfied": sat, "components_agree": agree}))
        }
        Command::Reconstruct { input, spec } => {
            let spec = match spec {
                Some(p) => js::spec_from_json(&read_value(&p)?)?,
                None => gra_spec(),
            };
            emit.json(&js::structure_to_json(&reconstruct(&spec, &read_structure(&input)?)?))
        }
        Command::Detect { input, n, r } => {
            let w = detect_subdivided_clique(&read_graph(&input)?, n, r)?;
            emit.json(&w.map_or(Value::Null, |w| js::witness_to_json(&w)))
        }
        Command::Profile { input, max_n, max_r } => {
            let rows = density_profile(&read_graph(&input)?, max_n, max_r)?;
            emit.json(&json!(rows.iter().map(|&(r, n)| json!({"r": r, "n": n})).collect::<Vec<_>>()))
        }
        Command::Classify { colouring, n } => {
            let types = match colouring.as_str() {
                "constant" => classify_canonical(n, |_, _| (0, 0))?,
                "first" => classify_canonical(n, |i, _| (i, 0))?,
                "second" => classify_canonical(n, |_, j| (0, j))?,
                "injective" => classify_canonical(n, |i, j| (i, j))?,
                "engineered" => classify_canonical(n, |i, j| if (i, j) == (2, 3) { (0, 1) } else { (i, j) })?,
                path => {
                    let v = read_value(Path::new(path))?;
                    let missing = (0..n).flat_map(|i| (i + 1..n).map(move |j| format!("{i}-{j}"))).find(|k| v.get(k).is_none());
                    if let Some(k) = missing {
                        return Err(Failure::Usage(format!("colouring has no entry `{k}`")));
                    }
                    classify_canonical(n, |i, j| v[format!("{i}-{j}")].clone())?
                }
            };
            emit.json(&json!(types.iter().map(|t| t.number()).collect::<Vec<_>>()))
        }
        Command::Mine { input, n, r } => {
            let out = mine_gadget(&read_structure(&input)?, n, r);
            match out.mined {
                Some(m) => emit.json(&js::mined_to_json(&m, &out.stages)),
                None => {
                    for s in &out.stages {
                        eprintln!("{s}");
                    }
                    Err(Failure::Domain(Error::HypothesisFailed("no gadget mined".into())))
                }
            }
        }
        Command::Verify { suite, max_vertices, max_r, seed } => {
            let params = Params { max_vertices, max_r, seed };
            let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite.as_str()] };
            let mut text = String::new();
            let mut ok = true;
            for name in names {
                let report = run_suite(name, &params)
                    .ok_or_else(|| Failure::Usage(format!("unknown suite `{name}`; known: {}, all", SUITES.join(", "))))?;
                ok &= report.passed();
                text.push_str(&format!("{report}\n"));
            }
            emit.text(&text)?;
            if ok {
                Ok(())
            } else {
                Err(Failure::Suite)
            }
        }
        Command::ExportDot { input } => {
            let v = read_value(&input)?;
            let m = js::structure_from_json(&v)?;
            let tags = tags_of(&v);
            let g = Graph::try_from_structure(m.clone()).unwrap_or_else(|_| gaifman(&m));
            emit.text(&g.to_dot(tags.as_ref()))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command, &cli.out) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Suite) => ExitCode::from(3),
    }
}
