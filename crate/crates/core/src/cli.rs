//! The `clusterk` command line.
//!
//! Exit codes: 0 on success, 1 on a domain error (the message starts with
//! the error variant), 2 on a usage error. Seeds may be given as a JSON file
//! path, as inline JSON, or as one of the built-ins `@a11`, `@markov`, `@a2`;
//! diagrams and K0 elements likewise accept a path or inline JSON.

use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::annulus::{
    a11_variable, admissible_moduli, canonical_basis_element, casimir, roots_of_unity_residual, solve_moduli,
    tau_identity_residuals, verify_trace_exchange, BasisElement,
};
use crate::bratteli::{
    build_mutation_tree, quotient_to_bratteli, seeds_l_equivalent, BratteliDiagram, EquivalenceMode, ExportFormat,
    DEFAULT_TREE_BUDGET,
};
use crate::cluster::{
    check_positivity, enumerate_cluster_variables, is_finite_type, numeric_mutate, FiniteType, Positivity, Seed,
};
use crate::jones::{
    braid_to_tl, jones_from_bracket, jones_polynomial, kauffman_algebra, kauffman_oracle, verify_tl_relations,
    BraidWord,
};
use crate::k0::{
    bernstein_coordinates, gicar_is_positive, gicar_rho, k0_equal, k0_is_positive, k0_push, qn_contains,
    riesz_interpolate, supernatural_of, trace_state, Equality, GicarElement, GicarPositivity, K0Element,
    Positivity as K0Positivity, DEFAULT_HORIZON,
};
use crate::laurent::{chebyshev_t, LaurentPolynomial};

#[derive(Parser, Debug)]
#[command(name = "clusterk", version, about = "Cluster algebras, Bratteli diagrams, dimension groups and Jones polynomials")]
struct Cli {
    /// Worker threads for the parallel stages (output does not depend on it).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the output to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mutate a seed along a path of directions.
    Mutate(MutateArgs),
    /// Cluster variables, A(1,1) elements and Laurent arithmetic.
    Vars(VarsArgs),
    /// Quotient a mutation tree into a Bratteli diagram.
    Bratteli(BratteliArgs),
    /// Dimension-group computations on a Bratteli diagram.
    K0 {
        #[command(subcommand)]
        action: K0Action,
    },
    /// The GICAR dimension group Z[x].
    Gicar {
        #[command(subcommand)]
        action: GicarAction,
    },
    /// Moduli of the annulus and the admissible set.
    Moduli(ModuliArgs),
    /// Jones polynomial of a closed braid.
    Jones(JonesArgs),
    /// Check the Temperley-Lieb, braid and Markov relations exactly.
    Tlcheck(TlcheckArgs),
}

#[derive(Args, Debug)]
struct MutateArgs {
    #[arg(long)]
    seed: String,
    /// Directions, 1-based, separated by spaces or commas.
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    path: String,
    /// Also run the numeric mutation from these values of the initial variables.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["seed", "a11", "casimir", "basis", "chebyshev", "poly"])))]
struct VarsArgs {
    /// Enumerate the cluster variables of this seed.
    #[arg(long)]
    seed: Option<String>,
    #[arg(long, default_value_t = 3, requires = "seed")]
    depth: usize,
    /// Maximum number of distinct seeds visited.
    #[arg(long, default_value_t = 100_000, requires = "seed")]
    cap: usize,
    /// Decide finite type instead of listing variables.
    #[arg(long, requires = "seed")]
    finite_type: bool,
    #[arg(long, default_value_t = 1000, requires = "finite_type")]
    budget: usize,
    /// A(1,1) variables `x_i` for `i` in `LO:HI`.
    #[arg(long, allow_hyphen_values = true)]
    a11: Option<String>,
    /// The Casimir element of A(1,1).
    #[arg(long)]
    casimir: bool,
    /// `monomial:i:p:q` or `chebyshev:n`.
    #[arg(long)]
    basis: Option<String>,
    /// The Chebyshev polynomial `T_n`.
    #[arg(long)]
    chebyshev: Option<usize>,
    /// A Laurent polynomial such as `3*x1^2*x2^-1 + 1`.
    #[arg(long, allow_hyphen_values = true)]
    poly: Option<String>,
    /// Number of variables (default: highest index used).
    #[arg(long, requires = "poly")]
    nvars: Option<usize>,
    #[arg(long, requires = "poly", conflicts_with_all = ["times", "div"], allow_hyphen_values = true)]
    plus: Option<String>,
    #[arg(long, requires = "poly", conflicts_with = "div", allow_hyphen_values = true)]
    times: Option<String>,
    /// Exact division; fails unless the quotient is a Laurent polynomial.
    #[arg(long, requires = "poly", allow_hyphen_values = true)]
    div: Option<String>,
    /// Evaluate the result at a point, e.g. `1/2,3`.
    #[arg(long, requires = "poly", allow_hyphen_values = true)]
    eval: Option<String>,
}

#[derive(Args, Debug)]
struct BratteliArgs {
    #[arg(long)]
    seed: String,
    #[arg(long, default_value_t = 3)]
    depth: usize,
    /// `literal` or `permuted`.
    #[arg(long, default_value = "literal")]
    mode: String,
    /// `dot`, `json` or `matrices`.
    #[arg(long, default_value = "dot")]
    format: String,
    #[arg(long, default_value_t = DEFAULT_TREE_BUDGET)]
    budget: usize,
    /// Instead of a diagram, report whether this seed is ℓ-equivalent to `--seed`.
    #[arg(long)]
    compare: Option<String>,
}

#[derive(Subcommand, Debug)]
enum K0Action {
    /// Push an element to a later level.
    Push {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        element: String,
        #[arg(long)]
        to: usize,
    },
    /// Decide whether two elements are equal in the limit.
    Equal {
        #[arg(long)]
        diagram: String,
        /// Given twice.
        #[arg(long, required = true)]
        element: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// Decide whether an element is positive in the limit.
    Positive {
        #[arg(long)]
        diagram: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value_t = DEFAULT_HORIZON)]
        horizon: usize,
    },
    /// The canonical trace of a stationary primitive diagram.
    Trace {
        #[arg(long)]
        diagram: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Supernatural number of a periodic factor sequence.
    Supernatural {
        /// The repeating block, e.g. `2,3`.
        #[arg(long)]
        block: String,
        /// Also decide membership of this rational in Q(n).
        #[arg(long, allow_hyphen_values = true)]
        contains: Option<String>,
    },
    /// Interpolate between `a1, a2 <= b1, b2`.
    Riesz {
        #[arg(long, allow_hyphen_values = true)]
        a1: String,
        #[arg(long, allow_hyphen_values = true)]
        a2: String,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
        #[arg(long)]
        nvars: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
enum GicarAction {
    /// The element `x^k (1-x)^(n-k)`.
    Rho {
        #[arg(long, allow_negative_numbers = true)]
        k: i64,
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
    },
    /// Decide positivity on (0, 1).
    Positive {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long, default_value_t = 64)]
        max_degree: usize,
    },
    /// Bernstein coordinates at a degree.
    Coords {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").required(true).args(["t", "sweep", "admissible", "roots", "trace_exchange"])))]
struct ModuliArgs {
    /// Solve for a single modulus `t >= 4`.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// `FROM:TO:COUNT`, evenly spaced.
    #[arg(long)]
    sweep: Option<String>,
    /// The admissible set up to `n_max`.
    #[arg(long)]
    admissible: Option<u32>,
    /// Root-of-unity and τ-identity residuals for `n = 3..=N`.
    #[arg(long)]
    roots: Option<u32>,
    /// Exact trace-exchange identity at a rational `t`.
    #[arg(long, allow_hyphen_values = true)]
    trace_exchange: Option<String>,
}

#[derive(Args, Debug)]
struct JonesArgs {
    #[arg(long)]
    strands: usize,
    /// Letters such as `1 -2 1 -2`.
    #[arg(long, allow_hyphen_values = true, default_value = "")]
    braid: String,
    /// `tl` (Temperley-Lieb trace) or `oracle` (state sum).
    #[arg(long, default_value = "tl")]
    method: String,
    /// Print the Temperley-Lieb image and its trace before the polynomial.
    #[arg(long)]
    show_tl: bool,
}

#[derive(Args, Debug)]
struct TlcheckArgs {
    #[arg(long)]
    n: usize,
    /// Positive rational such as `4` or `2/3`.
    #[arg(long, allow_hyphen_values = true)]
    t: String,
    /// Test relation (b) against this value instead of `t/(1+t)^2`.
    #[arg(long, allow_hyphen_values = true)]
    tau: Option<String>,
}

/// One module operation and a command that reaches it.
#[derive(Clone, Copy, Debug)]
pub struct Operation {
    pub module: &'static str,
    pub name: &'static str,
    pub example: &'static [&'static str],
}

pub const DISPATCH: &[Operation] = &[
    Operation { module: "laurent", name: "lp_add", example: &["vars", "--poly", "x1 + x2", "--plus", "x1"] },
    Operation { module: "laurent", name: "lp_mul", example: &["vars", "--poly", "x1 + 1", "--times", "x1 - 1"] },
    Operation { module: "laurent", name: "lp_div_exact", example: &["vars", "--poly", "x1^2 - 1", "--div", "x1 + 1"] },
    Operation { module: "laurent", name: "lp_eval", example: &["vars", "--poly", "x1*x2^-1", "--eval", "1/2,3"] },
    Operation { module: "laurent", name: "lp_is_nonneg", example: &["vars", "--poly", "x1 + 2*x2"] },
    Operation { module: "laurent", name: "chebyshev_T", example: &["vars", "--chebyshev", "4"] },
    Operation { module: "cluster", name: "matrix_mutate", example: &["mutate", "--seed", "@markov", "--path", "1"] },
    Operation { module: "cluster", name: "seed_mutate", example: &["mutate", "--seed", "@a11", "--path", "1 2 1"] },
    Operation { module: "cluster", name: "numeric_mutate", example: &["mutate", "--seed", "@a11", "--path", "1 2", "--at", "1,2"] },
    Operation { module: "cluster", name: "enumerate_cluster_variables", example: &["vars", "--seed", "@a2", "--depth", "4"] },
    Operation { module: "cluster", name: "check_positivity", example: &["vars", "--seed", "@markov", "--depth", "2"] },
    Operation { module: "cluster", name: "is_finite_type", example: &["vars", "--seed", "@a2", "--finite-type"] },
    Operation { module: "bratteli", name: "build_mutation_tree", example: &["bratteli", "--seed", "@a11", "--depth", "3"] },
    Operation { module: "bratteli", name: "seeds_l_equivalent", example: &["bratteli", "--seed", "@a11", "--compare", r#"{"n":2,"B":[[0,2],[-2,0]],"cluster":["x2","x1"]}"#] },
    Operation { module: "bratteli", name: "quotient_to_bratteli", example: &["bratteli", "--seed", "@markov", "--depth", "2", "--format", "json"] },
    Operation { module: "bratteli", name: "incidence_matrices", example: &["bratteli", "--seed", "@a11", "--depth", "3", "--format", "matrices"] },
    Operation { module: "bratteli", name: "export_diagram", example: &["bratteli", "--seed", "@a11", "--depth", "2", "--format", "dot"] },
    Operation { module: "k0", name: "k0_push", example: &["k0", "push", "--diagram", r#"{"matrix":[[1,1],[1,0]],"repeat":4}"#, "--element", r#"{"level":0,"vector":[1,0]}"#, "--to", "3"] },
    Operation { module: "k0", name: "k0_equal", example: &["k0", "equal", "--diagram", r#"{"matrix":[[1,1],[1,0]],"repeat":4}"#, "--element", r#"{"level":0,"vector":[1,1]}"#, "--element", r#"{"level":1,"vector":[1,0]}"#] },
    Operation { module: "k0", name: "k0_is_positive", example: &["k0", "positive", "--diagram", r#"{"matrix":[[1,1],[1,0]],"repeat":8}"#, "--element", r#"{"level":0,"vector":[2,-1]}"#] },
    Operation { module: "k0", name: "trace_state", example: &["k0", "trace", "--diagram", r#"{"matrix":[[1,1],[1,0]],"repeat":4}"#] },
    Operation { module: "k0", name: "supernatural_of", example: &["k0", "supernatural", "--block", "2,3", "--contains", "5/12"] },
    Operation { module: "k0", name: "gicar_rho", example: &["gicar", "rho", "--k", "1", "--n", "3"] },
    Operation { module: "k0", name: "gicar_is_positive", example: &["gicar", "positive", "--poly", "x^2 - x + 1"] },
    Operation { module: "k0", name: "riesz_interpolate", example: &["k0", "riesz", "--a1", "x1", "--a2", "x2", "--b1", "x1 + x2", "--b2", "2*x1 + x2"] },
    Operation { module: "annulus", name: "a11_variable", example: &["vars", "--a11", "-2:4"] },
    Operation { module: "annulus", name: "casimir", example: &["vars", "--casimir"] },
    Operation { module: "annulus", name: "canonical_basis_element", example: &["vars", "--basis", "chebyshev:3"] },
    Operation { module: "annulus", name: "solve_moduli", example: &["moduli", "--t", "5"] },
    Operation { module: "annulus", name: "admissible_moduli", example: &["moduli", "--admissible", "8"] },
    Operation { module: "annulus", name: "roots_of_unity_check", example: &["moduli", "--roots", "8"] },
    Operation { module: "annulus", name: "verify_trace_exchange", example: &["moduli", "--trace-exchange", "7/13"] },
    Operation { module: "jones", name: "tl_mul", example: &["jones", "--strands", "3", "--braid", "1 2", "--show-tl"] },
    Operation { module: "jones", name: "braid_to_tl", example: &["jones", "--strands", "2", "--braid", "1 -1", "--show-tl"] },
    Operation { module: "jones", name: "markov_trace", example: &["jones", "--strands", "2", "--braid", "1", "--show-tl"] },
    Operation { module: "jones", name: "jones_polynomial", example: &["jones", "--strands", "2", "--braid", "1 1 1"] },
    Operation { module: "jones", name: "kauffman_oracle", example: &["jones", "--strands", "3", "--braid", "1 -2 1 -2", "--method", "oracle"] },
    Operation { module: "jones", name: "verify_tl_relations", example: &["tlcheck", "--n", "3", "--t", "1"] },
];

fn dispatch_help() -> String {
    let mut s = String::from("Operations by subcommand:\n");
    for op in DISPATCH {
        s.push_str(&format!("  {:<10} {}::{}\n", op.example[0], op.module, op.name));
    }
    s
}

enum Failure {
    Usage(String),
    Domain(String),
}

fn domain(e: impl Display) -> Failure {
    Failure::Domain(e.to_string())
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

type Outcome = Result<String, Failure>;

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let command = Cli::command().after_help(dispatch_help());
    let matches = match command.try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => return clap_failure(e, out, err),
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => return clap_failure(e, out, err),
    };
    if cli.threads == 0 {
        let _ = writeln!(err, "error: --threads must be at least 1");
        return 2;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "Io: cannot start thread pool: {e}");
            return 1;
        }
    };
    let result = pool.install(|| execute(&cli.command));
    match result {
        Ok(text) => {
            if let Some(path) = &cli.output {
                if let Err(e) = std::fs::write(path, &text) {
                    let _ = writeln!(err, "Io: cannot write {}: {e}", path.display());
                    return 1;
                }
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            0
        }
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn clap_failure(e: clap::Error, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
            let _ = write!(out, "{}", e.render());
            0
        }
        _ => {
            let _ = write!(err, "{}", e.render());
            if let Some(flags) = valid_flags(&e) {
                let _ = writeln!(err, "valid flags: {flags}");
            }
            2
        }
    }
}

/// Flags of the subcommand named in a usage error, if one can be found.
fn valid_flags(e: &clap::Error) -> Option<String> {
    let text = e.to_string();
    let root = Cli::command();
    let sub = root
        .get_subcommands()
        .find(|s| text.contains(&format!("clusterk {}", s.get_name())))?;
    let flags: Vec<String> = sub
        .get_arguments()
        .filter_map(|a| a.get_long().map(|l| format!("--{l}")))
        .collect();
    Some(flags.join(" "))
}

fn execute(command: &Command) -> Outcome {
    match command {
        Command::Mutate(a) => cmd_mutate(a),
        Command::Vars(a) => cmd_vars(a),
        Command::Bratteli(a) => cmd_bratteli(a),
        Command::K0 { action } => cmd_k0(action),
        Command::Gicar { action } => cmd_gicar(action),
        Command::Moduli(a) => cmd_moduli(a),
        Command::Jones(a) => cmd_jones(a),
        Command::Tlcheck(a) => cmd_tlcheck(a),
    }
}

/// A path, inline JSON, or `@name`.
fn read_source(arg: &str) -> Result<String, Failure> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Domain(format!("Io: cannot read {arg}: {e}")))
}

fn load_seed(arg: &str) -> Result<Seed, Failure> {
    match arg {
        "@a11" => Ok(Seed::annulus()),
        "@markov" => Ok(Seed::markov()),
        "@a2" => Ok(Seed::a2()),
        s if s.starts_with('@') => Err(usage(format!("unknown built-in seed '{s}' (expected @a11, @markov or @a2)"))),
        s => Seed::from_json(&read_source(s)?).map_err(domain),
    }
}

fn load_diagram(arg: &str) -> Result<BratteliDiagram, Failure> {
    BratteliDiagram::from_json(&read_source(arg)?).map_err(domain)
}

fn load_element(arg: &str) -> Result<K0Element, Failure> {
    K0Element::from_json(&read_source(arg)?).map_err(domain)
}

fn parse_rational(s: &str) -> Result<BigRational, Failure> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|_| usage(format!("'{s}' is not a rational number")))
}

fn split_list(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty())
}

fn parse_rationals(s: &str) -> Result<Vec<BigRational>, Failure> {
    split_list(s).map(parse_rational).collect()
}

/// Highest `k` appearing as `x<k>`, at least 1.
fn infer_nvars(texts: &[&str]) -> usize {
    let mut n = 1;
    for t in texts {
        let b = t.as_bytes();
        for i in 0..b.len() {
            if b[i] == b'x' {
                let digits: String = t[i + 1..].chars().take_while(char::is_ascii_digit).collect();
                if let Ok(k) = digits.parse::<usize>() {
                    n = n.max(k);
                }
            }
        }
    }
    n
}

fn parse_poly(text: &str, nvars: usize) -> Result<LaurentPolynomial<BigInt>, Failure> {
    LaurentPolynomial::parse(text, nvars).map_err(domain)
}

fn cmd_mutate(a: &MutateArgs) -> Outcome {
    let seed = load_seed(&a.seed)?;
    let path = split_list(&a.path)
        .map(|t| match t.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(usage(format!("direction '{t}' must be a positive integer"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mutated = seed.mutate_path(&path).map_err(domain)?;
    let mut out = format!("{}\n", mutated.to_json());
    if let Some(at) = &a.at {
        let point = parse_rationals(at)?;
        let mut values = seed.evaluate(&point).map_err(domain)?;
        let mut matrix = seed.matrix().clone();
        for &k in &path {
            values = numeric_mutate(&values, &matrix, k).map_err(domain)?;
            matrix = matrix.mutate(k).map_err(domain)?;
        }
        let symbolic = mutated.evaluate(&point).map_err(domain)?;
        let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
        out.push_str(&format!("values: {}\n", shown.join(", ")));
        out.push_str(&format!("agrees with symbolic: {}\n", values == symbolic));
    }
    Ok(out)
}

fn cmd_vars(a: &VarsArgs) -> Outcome {
    if let Some(seed) = &a.seed {
        let seed = load_seed(seed)?;
        if a.finite_type {
            return Ok(match is_finite_type(&seed, a.budget).map_err(domain)? {
                FiniteType::Finite(n) => format!("Finite({n})\n"),
                FiniteType::ExceededBudget => "ExceededBudget\n".to_string(),
            });
        }
        let vars = enumerate_cluster_variables(&seed, a.depth, a.cap).map_err(domain)?;
        let mut out = String::new();
        for v in &vars {
            out.push_str(&format!("{v}\n"));
        }
        out.push_str(&format!("count: {}\n", vars.len()));
        match check_positivity(vars.iter()) {
            Positivity::Holds => out.push_str("positivity: holds\n"),
            Positivity::Violated(p) => out.push_str(&format!("positivity: violated by {p}\n")),
        }
        return Ok(out);
    }
    if let Some(range) = &a.a11 {
        let (lo, hi) = range
            .split_once(':')
            .and_then(|(l, h)| Some((l.trim().parse::<i64>().ok()?, h.trim().parse::<i64>().ok()?)))
            .ok_or_else(|| usage(format!("--a11 expects LO:HI, got '{range}'")))?;
        let mut out = String::new();
        for i in lo..=hi {
            out.push_str(&format!("x_{i} = {}\n", a11_variable(i).map_err(domain)?));
        }
        return Ok(out);
    }
    if a.casimir {
        return Ok(format!("{}\n", casimir()));
    }
    if let Some(spec) = &a.basis {
        let parts: Vec<&str> = spec.split(':').collect();
        let bad = || usage(format!("--basis expects monomial:i:p:q or chebyshev:n, got '{spec}'"));
        let kind = match parts.as_slice() {
            ["monomial", i, p, q] => BasisElement::Monomial {
                i: i.parse().map_err(|_| bad())?,
                p: p.parse().map_err(|_| bad())?,
                q: q.parse().map_err(|_| bad())?,
            },
            ["chebyshev", n] => BasisElement::Chebyshev { n: n.parse().map_err(|_| bad())? },
            _ => return Err(bad()),
        };
        return Ok(format!("{}\n", canonical_basis_element(kind).map_err(domain)?));
    }
    if let Some(n) = a.chebyshev {
        return Ok(format!("{}\n", chebyshev_t(n)));
    }
    let text = a.poly.as_deref().expect("clap requires one mode");
    let others: Vec<&str> = [&a.plus, &a.times, &a.div].into_iter().flatten().map(String::as_str).collect();
    let mut all = vec![text];
    all.extend(&others);
    let nvars = a.nvars.unwrap_or_else(|| infer_nvars(&all));
    let p = parse_poly(text, nvars)?;
    let result = if let Some(q) = &a.plus {
        p.checked_add(&parse_poly(q, nvars)?).map_err(domain)?
    } else if let Some(q) = &a.times {
        p.checked_mul(&parse_poly(q, nvars)?).map_err(domain)?
    } else if let Some(q) = &a.div {
        p.div_exact(&parse_poly(q, nvars)?).map_err(domain)?
    } else {
        p
    };
    let mut out = format!("{result}\n");
    if let Some(point) = &a.eval {
        let point = parse_rationals(point)?;
        out.push_str(&format!("value: {}\n", result.eval(&point).map_err(domain)?));
    }
    out.push_str(&format!("nonnegative: {}\n", result.is_nonneg()));
    Ok(out)
}

fn cmd_bratteli(a: &BratteliArgs) -> Outcome {
    let mode: EquivalenceMode = a.mode.parse().map_err(usage)?;
    let seed = load_seed(&a.seed)?;
    if let Some(other) = &a.compare {
        let other = load_seed(other)?;
        return Ok(format!("{}\n", seeds_l_equivalent(&seed, &other, mode).map_err(domain)?));
    }
    let format = match a.format.as_str() {
        "matrices" => None,
        f => Some(f.parse::<ExportFormat>().map_err(domain)?),
    };
    let tree = build_mutation_tree(&seed, a.depth, a.budget).map_err(domain)?;
    let quotient = quotient_to_bratteli(&tree, mode).map_err(domain)?;
    let d = &quotient.diagram;
    Ok(match format {
        Some(f) => {
            let mut s = d.export(f);
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
        None => {
            let mut s = String::new();
            for (m, mat) in d.incidence_matrices().iter().enumerate() {
                s.push_str(&format!("level {m} -> {}:\n{mat}\n", m + 1));
            }
            s
        }
    })
}

fn cmd_k0(action: &K0Action) -> Outcome {
    match action {
        K0Action::Push { diagram, element, to } => {
            let d = load_diagram(diagram)?;
            let e = load_element(element)?;
            Ok(format!("{}\n", k0_push(&e, &d, *to).map_err(domain)?.to_json()))
        }
        K0Action::Equal { diagram, element, horizon } => {
            let [x, y] = element.as_slice() else {
                return Err(usage("k0 equal needs --element exactly twice"));
            };
            let d = load_diagram(diagram)?;
            let (x, y) = (load_element(x)?, load_element(y)?);
            Ok(match k0_equal(&x, &y, &d, *horizon).map_err(domain)? {
                Equality::Equal { level } => format!("Equal (at level {level})\n"),
                Equality::NotEqual => "NotEqual\n".into(),
                Equality::Unknown => "Unknown\n".into(),
            })
        }
        K0Action::Positive { diagram, element, horizon } => {
            let d = load_diagram(diagram)?;
            let e = load_element(element)?;
            Ok(match k0_is_positive(&e, &d, *horizon).map_err(domain)? {
                K0Positivity::Positive { level } => format!("Positive (at level {level})\n"),
                K0Positivity::PositiveZero { level } => format!("Positive (zero at level {level})\n"),
                K0Positivity::NotPositive { level, value } => {
                    format!("NotPositive (Perron functional {value:.16e} at level {level})\n")
                }
                K0Positivity::Unknown => "Unknown\n".into(),
            })
        }
        K0Action::Trace { diagram, tol } => {
            let d = load_diagram(diagram)?;
            let state = trace_state(&d, *tol).map_err(domain)?;
            let weights: Vec<String> = state.level0().iter().map(|w| format!("{w:.16e}")).collect();
            Ok(format!(
                "perron value: {:.16e}\nstationary from level: {}\nlevel 0 weights: {}\n",
                state.perron_value,
                state.stationary_from,
                weights.join(" ")
            ))
        }
        K0Action::Supernatural { block, contains } => {
            let block = split_list(block)
                .map(|t| t.parse::<i64>().map_err(|_| usage(format!("'{t}' is not an integer"))))
                .collect::<Result<Vec<_>, _>>()?;
            let n = supernatural_of(&block).map_err(domain)?;
            let mut out = format!("{n}\n");
            if let Some(r) = contains {
                let r = parse_rational(r)?;
                out.push_str(&format!("{r} in Q(n): {}\n", qn_contains(&n, &r)));
            }
            Ok(out)
        }
        K0Action::Riesz { a1, a2, b1, b2, nvars } => {
            let texts = [a1.as_str(), a2, b1, b2];
            let n = nvars.unwrap_or_else(|| infer_nvars(&texts));
            let p = texts.iter().map(|t| parse_poly(t, n)).collect::<Result<Vec<_>, _>>()?;
            Ok(format!("{}\n", riesz_interpolate(&p[0], &p[1], &p[2], &p[3]).map_err(domain)?))
        }
    }
}

fn cmd_gicar(action: &GicarAction) -> Outcome {
    match action {
        GicarAction::Rho { k, n } => Ok(format!("{}\n", gicar_rho(*k, *n).map_err(domain)?)),
        GicarAction::Positive { poly, max_degree } => {
            let p = GicarElement::parse(poly).map_err(domain)?;
            Ok(match gicar_is_positive(&p, *max_degree).map_err(domain)? {
                GicarPositivity::Positive { degree, coordinates } => {
                    let c: Vec<String> = coordinates.iter().map(ToString::to_string).collect();
                    format!("Positive (degree {degree}, coordinates [{}])\n", c.join(", "))
                }
                GicarPositivity::NotPositive { point, value } => {
                    format!("NotPositive (p({point}) = {value})\n")
                }
                GicarPositivity::Unknown => "Unknown\n".into(),
            })
        }
        GicarAction::Coords { poly, degree } => {
            let p = GicarElement::parse(poly).map_err(domain)?;
            match bernstein_coordinates(&p, *degree) {
                Some(c) => {
                    let c: Vec<String> = c.iter().map(ToString::to_string).collect();
                    Ok(format!("[{}]\n", c.join(", ")))
                }
                None => Err(Failure::Domain(format!(
                    "InvalidElement: degree {degree} is below the degree of {p}"
                ))),
            }
        }
    }
}

fn cmd_moduli(a: &ModuliArgs) -> Outcome {
    if let Some(t) = a.t {
        return Ok(format!("{}\n", solve_moduli(t).map_err(domain)?.to_json_row()));
    }
    if let Some(sweep) = &a.sweep {
        let parts: Vec<&str> = sweep.split(':').collect();
        let bad = || usage(format!("--sweep expects FROM:TO:COUNT, got '{sweep}'"));
        let [from, to, count] = parts.as_slice() else {
            return Err(bad());
        };
        let (from, to): (f64, f64) = (from.parse().map_err(|_| bad())?, to.parse().map_err(|_| bad())?);
        let count: usize = count.parse().map_err(|_| bad())?;
        if count == 0 {
            return Err(bad());
        }
        let mut out = String::new();
        for i in 0..count {
            let t = if count == 1 { from } else { from + (to - from) * i as f64 / (count - 1) as f64 };
            out.push_str(&solve_moduli(t).map_err(domain)?.to_json_row());
            out.push('\n');
        }
        return Ok(out);
    }
    if let Some(n_max) = a.admissible {
        let set = admissible_moduli(n_max).map_err(domain)?;
        let mut out = format!("continuous: [{}, inf)\n", set.continuous_from);
        for h in set.discrete {
            out.push_str(&format!("n={} t={:.16e} lambda={:.16e}\n", h.n, h.t, h.lambda));
        }
        return Ok(out);
    }
    if let Some(n_max) = a.roots {
        if n_max < 3 {
            return Err(usage("--roots needs N >= 3"));
        }
        let mut out = String::new();
        for n in 3..=n_max {
            let (complex, real) = tau_identity_residuals::<f64>(n);
            out.push_str(&format!(
                "n={n} roots_of_unity={:.3e} tau_identity={complex:.3e} tau_identity_real_t={real:.3e}\n",
                roots_of_unity_residual::<f64>(n)
            ));
        }
        return Ok(out);
    }
    let t = parse_rational(a.trace_exchange.as_deref().expect("clap requires one mode"))?;
    Ok(format!("{}\n", verify_trace_exchange(&t)))
}

fn cmd_jones(a: &JonesArgs) -> Outcome {
    let w = BraidWord::parse(a.strands, &a.braid).map_err(domain)?;
    let mut out = String::new();
    if a.show_tl {
        let alg = kauffman_algebra(w.strands());
        let image = braid_to_tl(&w);
        out.push_str("image:\n");
        for (d, c) in image.terms() {
            out.push_str(&format!("  {d:?}: {}\n", c.render("A")));
        }
        out.push_str("trace:\n");
        for (k, c) in alg.trace_in_delta(&image) {
            out.push_str(&format!("  delta^{k}: {}\n", c.render("A")));
        }
    }
    let v = match a.method.as_str() {
        "tl" => jones_polynomial(&w).map_err(domain)?,
        "oracle" => {
            let bracket = kauffman_oracle(&w).map_err(domain)?;
            jones_from_bracket(&bracket, w.writhe()).map_err(domain)?
        }
        other => return Err(usage(format!("unknown method '{other}' (expected tl or oracle)"))),
    };
    out.push_str(&format!("{v}\n"));
    Ok(out)
}

fn cmd_tlcheck(a: &TlcheckArgs) -> Outcome {
    let t = parse_rational(&a.t)?;
    let tau = a.tau.as_deref().map(parse_rational).transpose()?;
    let r = verify_tl_relations(a.n, &t, tau).map_err(domain)?;
    Ok(format!(
        "n={} t={} tau={} delta={}\ncommutation: {} ok\nprojection: {} ok\nbraid: {} ok\nmarkov: {} samples ok\n",
        r.n, r.t, r.tau, r.delta, r.commutation_checks, r.projection_checks, r.braid_checks, r.markov_samples
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("clusterk").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn every_operation_is_reachable() {
        for op in DISPATCH {
            let (code, out, err) = call(op.example);
            assert_eq!(code, 0, "{}::{} via {:?}: {err}", op.module, op.name, op.example);
            assert!(!out.is_empty(), "{}::{} printed nothing", op.module, op.name);
        }
        let subcommands: Vec<String> = Cli::command().get_subcommands().map(|s| s.get_name().to_string()).collect();
        for s in &subcommands {
            assert!(DISPATCH.iter().any(|op| op.example[0] == s), "{s} has no operation");
        }
        for module in ["laurent", "cluster", "bratteli", "k0", "annulus", "jones"] {
            assert!(DISPATCH.iter().any(|op| op.module == module));
        }
    }

    #[test]
    fn pinned_outputs() {
        let (code, out, _) = call(&["bratteli", "--seed", "@a11", "--depth", "5", "--format", "json"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"levels\":[1,2,3,4,5,6]"));
        let (code, out, _) = call(&["jones", "--strands", "2", "--braid", "1 1 1"]);
        assert_eq!((code, out.as_str()), (0, "-t^-4 + t^-3 + t^-1\n"));
        let (code, _, err) = call(&["moduli", "--t", "3.9"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("DiscriminantNegative"));
    }

    #[test]
    fn usage_errors() {
        let (code, _, err) = call(&["moduli", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("valid flags:") && err.contains("--trace-exchange"), "{err}");
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["vars"]).0, 2);
        assert_eq!(call(&["moduli", "--t", "5", "--roots", "4"]).0, 2);
        assert_eq!(call(&["jones", "--strands", "2", "--method", "magic"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn domain_errors() {
        let (code, _, err) = call(&["jones", "--strands", "2", "--braid", "3"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("InvalidBraid"));
        let (code, _, err) = call(&["tlcheck", "--n", "3", "--t", "1", "--tau", "1/3"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("RelationViolated"));
        let (code, _, err) = call(&["bratteli", "--seed", "@a11", "--format", "svg"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("UnknownFormat"));
        let (code, _, err) = call(&["mutate", "--seed", r#"{"n":2,"B":[[0,1],[1,0]]}"#]);
        assert_eq!(code, 1);
        assert!(err.starts_with("NotSkewSymmetric"), "{err}");
        let (code, _, err) = call(&["mutate", "--seed", "/nonexistent/seed.json"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("Io"));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        for args in [
            &["bratteli", "--seed", "@markov", "--depth", "3", "--format", "dot"][..],
            &["vars", "--seed", "@markov", "--depth", "3"][..],
            &["jones", "--strands", "3", "--braid", "1 2 -1 2 1", "--method", "oracle"][..],
        ] {
            let one = call(&[&["--threads", "1"][..], args].concat());
            let four = call(&[&["--threads", "4"][..], args].concat());
            assert_eq!(one.0, 0);
            assert_eq!(one, four);
        }
    }

    #[test]
    fn mutation_output() {
        let (_, out, _) = call(&["mutate", "--seed", "@a11", "--path", "1", "--at", "1,2"]);
        assert_eq!(
            out,
            "{\"n\":2,\"B\":[[0,-2],[2,0]],\"cluster\":[\"x1^-1*x2^2 + x1^-1\",\"x2\"]}\nvalues: 5, 2\nagrees with symbolic: true\n"
        );
    }
}
