use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use antifactor::antifactor::{find, find_via_polynomial, verify, AlphaAssignment, OneFactorChoice};
use antifactor::badness::is_bad;
use antifactor::coloring::{color_by_peeling, edge_color};
use antifactor::counting::{pm_exact, pm_mod};
use antifactor::experiment::{run_exhaustive_mod, run_monte_carlo_mod, SamplingModel};
use antifactor::gen;
use antifactor::gf::FieldCtx;
use antifactor::nullpoly::{build_f, top_coefficient};
use antifactor::BipartiteMultigraph;

/// Perfect matchings, antifactors and residue experiments for regular
/// bipartite multigraphs.
///
/// Graph files use the BMG text format; `-` reads standard input.
/// Exit status: 0 success, 1 a valid negative answer (INFEASIBLE, BAD,
/// invalid choice), 2 usage or input error.
#[derive(Parser)]
#[command(name = "antifactor", version)]
struct Cli {
    /// Emit a single JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for pm, antifactor and experiment (results do not
    /// depend on it).
    #[arg(long, global = true, value_name = "T")]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sizes, regularity, connectivity and multiplicity summary.
    Info { file: PathBuf },

    /// Number of perfect matchings, exact or modulo M.
    Pm {
        file: PathBuf,
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },

    /// Proper edge coloring as `u v copy color` lines (1-indexed vertices,
    /// 0-indexed copies).
    Color { file: PathBuf },

    /// Spanning subgraph with U-degrees 1 and d(v) != alpha(v) mod q.
    ///
    /// The search runs for any q; success is guaranteed only when q is a
    /// prime power and pm is not divisible by q.
    Antifactor {
        file: PathBuf,
        /// `const:<k>` or `list:<k1,k2,...>`; values are reduced mod q.
        #[arg(long)]
        alpha: String,
        /// Modulus; defaults to the degree of the (regular) graph.
        #[arg(long)]
        q: Option<u32>,
        #[arg(long, value_enum, default_value_t = Method::Search)]
        method: Method,
    },

    /// Checks a neighbour choice against alpha.
    Verify {
        file: PathBuf,
        #[arg(long)]
        alpha: String,
        /// Chosen V-vertex for each U-vertex, 1-indexed: `v1,v2,...`.
        #[arg(long)]
        choice: String,
        #[arg(long)]
        q: Option<u32>,
    },

    /// Top coefficient of the certificate polynomial against (-1)^|V| pm.
    Coeff {
        file: PathBuf,
        /// Defaults to `const:0`.
        #[arg(long, default_value = "const:0")]
        alpha: String,
    },

    /// Writes a generated graph in BMG format.
    Gen {
        #[arg(long, value_enum)]
        model: GenModel,
        #[arg(long)]
        len: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Residue distribution of pm over random or enumerated graphs.
    Experiment {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
        /// Ignored by the exhaustive model.
        #[arg(long, default_value_t = 0)]
        samples: u64,
        /// Required by the random models.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = ExpModel::Multigraph)]
        model: ExpModel,
        /// Only count connected graphs.
        #[arg(long)]
        connected: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Residue modulus; defaults to q.
        #[arg(long = "mod", value_name = "M")]
        modulus: Option<u64>,
    },

    /// Decides whether no 3-regular spanning subgraph has pm indivisible by 3.
    Bad { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Search,
    Polynomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenModel {
    K2,
    Cycle,
    Complete,
    Random,
    RandomSimple,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpModel {
    Multigraph,
    Simple,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Rejection budget for `gen --model random-simple`.
const GEN_SIMPLE_TRIES: u64 = 10_000_000;

struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { text, json, code: 0 }
    }
}

type CliResult<T> = std::result::Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn read_graph(path: &PathBuf) -> CliResult<BipartiteMultigraph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("<stdin>: {e}"))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?
    };
    BipartiteMultigraph::parse_bmg(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn modulus_for(g: &BipartiteMultigraph, q: Option<u32>) -> CliResult<u32> {
    match (q, g.regularity()) {
        (Some(0), _) => Err("q must be positive".into()),
        (Some(q), _) => Ok(q),
        (None, Some(d)) => u32::try_from(d).map_err(|_| format!("degree {d} is too large")),
        (None, None) => Err("graph is not regular; pass --q".into()),
    }
}

fn parse_alpha(spec: &str, n_v: usize, q: u32) -> CliResult<AlphaAssignment> {
    let reduce = |s: &str| -> CliResult<u32> {
        let k: u64 = s
            .trim()
            .parse()
            .map_err(|_| format!("bad alpha value {s:?}"))?;
        Ok((k % q as u64) as u32)
    };
    let values = if let Some(k) = spec.strip_prefix("const:") {
        vec![reduce(k)?; n_v]
    } else if let Some(list) = spec.strip_prefix("list:") {
        let vs = list.split(',').map(reduce).collect::<CliResult<Vec<_>>>()?;
        if vs.len() != n_v {
            return Err(format!("alpha lists {} values for {n_v} V-vertices", vs.len()));
        }
        vs
    } else {
        return Err(format!("alpha must be const:<k> or list:<k1,...>, got {spec:?}"));
    };
    AlphaAssignment::new(values, q).map_err(err)
}

fn parse_choice(spec: &str, n_v: usize) -> CliResult<OneFactorChoice> {
    let choice = spec
        .split(',')
        .map(|s| match s.trim().parse::<usize>() {
            Ok(v) if (1..=n_v).contains(&v) => Ok(v - 1),
            _ => Err(format!("bad choice entry {s:?}; expected 1..={n_v}")),
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(OneFactorChoice::new(choice))
}

fn cmd_info(g: &BipartiteMultigraph) -> Outcome {
    let q = g.regularity();
    let q_text = q.map_or("irregular".to_string(), |d| d.to_string());
    let connected = g.is_connected();
    let simple = g.is_simple();
    let text = format!(
        "{} {} q={q_text} {} {}\nmax_multiplicity={}\n",
        g.n_u(),
        g.n_v(),
        if connected { "connected" } else { "disconnected" },
        if simple { "simple" } else { "multigraph" },
        g.max_multiplicity(),
    );
    let json = json!({
        "n_u": g.n_u(),
        "n_v": g.n_v(),
        "q": q,
        "connected": connected,
        "simple": simple,
        "max_multiplicity": g.max_multiplicity(),
    });
    Outcome::ok(text, json)
}

fn cmd_pm(g: &BipartiteMultigraph, modulus: Option<u64>) -> CliResult<Outcome> {
    let value = match modulus {
        Some(m) => pm_mod(g, m).map_err(err)?.to_string(),
        None => pm_exact(g).map_err(err)?.to_string(),
    };
    let json = json!({ "pm": value, "modulus": modulus });
    Ok(Outcome::ok(format!("{value}\n"), json))
}

fn cmd_color(g: &BipartiteMultigraph) -> CliResult<Outcome> {
    let q = g.regularity().ok_or("graph is not regular")?;
    // field order when one exists, otherwise plain integer colors 0..q
    let coloring = match FieldCtx::new(q) {
        Ok(f) => edge_color(g, &f),
        Err(_) => color_by_peeling(g),
    }
    .map_err(err)?;
    let mut text = String::new();
    let mut edges = Vec::new();
    for e in g.edge_instances() {
        let c = coloring.color(e.u, e.v, e.copy as usize).value();
        text.push_str(&format!("{} {} {} {c}\n", e.u + 1, e.v + 1, e.copy));
        edges.push(json!({ "u": e.u + 1, "v": e.v + 1, "copy": e.copy, "color": c }));
    }
    Ok(Outcome::ok(text, json!({ "q": q, "edges": edges })))
}

fn choice_outcome(h: Option<OneFactorChoice>) -> Outcome {
    match h {
        Some(h) => {
            let one_based: Vec<usize> = h.choice().iter().map(|v| v + 1).collect();
            let text = one_based
                .iter()
                .enumerate()
                .map(|(u, v)| format!("{} -> {v}\n", u + 1))
                .collect();
            Outcome::ok(text, json!({ "feasible": true, "choice": one_based }))
        }
        None => Outcome {
            text: "INFEASIBLE\n".into(),
            json: json!({ "feasible": false, "choice": null }),
            code: 1,
        },
    }
}

fn cmd_antifactor(g: &BipartiteMultigraph, alpha: &str, q: Option<u32>, method: Method) -> CliResult<Outcome> {
    let q = modulus_for(g, q)?;
    let alpha = parse_alpha(alpha, g.n_v(), q)?;
    let h = match method {
        Method::Search => find(g, &alpha, q),
        Method::Polynomial => {
            let field = FieldCtx::new(q as u64).map_err(err)?;
            find_via_polynomial(g, &alpha, &field)
        }
    }
    .map_err(err)?;
    Ok(choice_outcome(h))
}

fn cmd_verify(g: &BipartiteMultigraph, alpha: &str, choice: &str, q: Option<u32>) -> CliResult<Outcome> {
    let q = modulus_for(g, q)?;
    let alpha = parse_alpha(alpha, g.n_v(), q)?;
    let h = parse_choice(choice, g.n_v())?;
    let valid = verify(g, &alpha, &h, q).map_err(err)?;
    let degrees = h.degrees(g.n_v());
    Ok(Outcome {
        text: if valid { "VALID\n" } else { "INVALID\n" }.into(),
        json: json!({ "valid": valid, "degrees": degrees }),
        code: if valid { 0 } else { 1 },
    })
}

fn cmd_coeff(g: &BipartiteMultigraph, alpha: &str) -> CliResult<Outcome> {
    let q = g.regularity().ok_or("graph is not regular")?;
    let field = FieldCtx::new(q).map_err(err)?;
    let alpha = parse_alpha(alpha, g.n_v(), field.order())?;
    let coloring = edge_color(g, &field).map_err(err)?;
    let f = build_f(g, &coloring, &alpha, &field).map_err(err)?;
    let top = top_coefficient(&f);
    let p = field.characteristic() as u64;
    let pm = pm_mod(g, p).map_err(err)? as i64;
    let sign = if g.n_v() % 2 == 0 { 1 } else { -1 };
    let expected = field.from_int(sign * pm);
    let matches = top == expected;
    let verdict = if matches { "MATCH" } else { "MISMATCH" };
    let text = format!("{} {} {verdict}\n", top.value(), expected.value());
    let json = json!({
        "q": q,
        "top_coefficient": top.value(),
        "expected": expected.value(),
        "match": matches,
    });
    Ok(Outcome::ok(text, json))
}

fn require<T>(v: Option<T>, flag: &str, model: &str) -> CliResult<T> {
    v.ok_or_else(|| format!("--model {model} requires {flag}"))
}

fn cmd_gen(model: GenModel, len: Option<usize>, n: Option<usize>, q: Option<u64>, seed: Option<u64>) -> CliResult<Outcome> {
    let g = match model {
        GenModel::K2 => gen::k2_multi(require(q, "--q", "k2")?),
        GenModel::Cycle => gen::inflated_cycle(require(len, "--len", "cycle")?, require(q, "--q", "cycle")?).map_err(err)?,
        GenModel::Complete => gen::complete(require(n, "--n", "complete")?),
        GenModel::Random => gen::random_permutation_model(
            require(n, "--n", "random")?,
            require(q, "--q", "random")?,
            require(seed, "--seed", "random")?,
        ),
        GenModel::RandomSimple => {
            let (n, q) = (require(n, "--n", "random-simple")?, require(q, "--q", "random-simple")?);
            let seed = require(seed, "--seed", "random-simple")?;
            gen::random_simple(n, q, seed, GEN_SIMPLE_TRIES)
                .map_err(err)?
                .ok_or_else(|| format!("no simple graph after {GEN_SIMPLE_TRIES} draws"))?
        }
    };
    let rows: Vec<&[u64]> = g.rows().collect();
    let json = json!({ "n_u": g.n_u(), "n_v": g.n_v(), "rows": rows, "bmg": g.to_bmg() });
    Ok(Outcome::ok(g.to_bmg(), json))
}

#[allow(clippy::too_many_arguments)]
fn cmd_experiment(
    q: u64,
    n: usize,
    samples: u64,
    seed: Option<u64>,
    model: ExpModel,
    connected: bool,
    format: Format,
    modulus: Option<u64>,
    force_json: bool,
) -> CliResult<Outcome> {
    let modulus = modulus.unwrap_or(q);
    let report = match model {
        ExpModel::Exhaustive => run_exhaustive_mod(q, n, connected, modulus),
        ExpModel::Multigraph | ExpModel::Simple => {
            let seed = seed.ok_or("random experiment models require --seed")?;
            let m = if matches!(model, ExpModel::Simple) {
                SamplingModel::Simple
            } else {
                SamplingModel::Multigraph
            };
            run_monte_carlo_mod(q, n, samples, seed, m, connected, modulus)
        }
    }
    .map_err(err)?;
    let text = match (format, force_json) {
        (Format::Csv, false) => report.to_csv(),
        _ => report.to_json() + "\n",
    };
    let json = serde_json::to_value(&report).map_err(err)?;
    Ok(Outcome::ok(text, json))
}

fn cmd_bad(g: &BipartiteMultigraph) -> CliResult<Outcome> {
    let b = is_bad(g).map_err(err)?;
    Ok(match b.witness {
        None => Outcome {
            text: "BAD\n".into(),
            json: json!({ "bad": true, "witness": null }),
            code: 1,
        },
        Some(w) => Outcome::ok(
            format!("NOT-BAD\n{}", w.sub.to_bmg()),
            json!({ "bad": false, "witness": { "bmg": w.sub.to_bmg(), "residue": w.residue } }),
        ),
    })
}

fn run(cli: Cli) -> CliResult<Outcome> {
    let json = cli.json;
    match cli.cmd {
        Command::Info { file } => Ok(cmd_info(&read_graph(&file)?)),
        Command::Pm { file, modulus } => cmd_pm(&read_graph(&file)?, modulus),
        Command::Color { file } => cmd_color(&read_graph(&file)?),
        Command::Antifactor { file, alpha, q, method } => cmd_antifactor(&read_graph(&file)?, &alpha, q, method),
        Command::Verify { file, alpha, choice, q } => cmd_verify(&read_graph(&file)?, &alpha, &choice, q),
        Command::Coeff { file, alpha } => cmd_coeff(&read_graph(&file)?, &alpha),
        Command::Gen { model, len, n, q, seed } => cmd_gen(model, len, n, q, seed),
        Command::Experiment {
            q,
            n,
            samples,
            seed,
            model,
            connected,
            format,
            modulus,
        } => cmd_experiment(q, n, samples, seed, model, connected, format, modulus, json),
        Command::Bad { file } => cmd_bad(&read_graph(&file)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let pool = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build(),
        None => rayon::ThreadPoolBuilder::new().build(),
    };
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string(&out.json).expect("json value"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(msg) => {
            eprintln!("error: {}", msg.lines().next().unwrap_or_default());
            ExitCode::from(2)
        }
    }
}
