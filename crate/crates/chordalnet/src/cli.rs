//! File formats, command dispatch and reports.
//!
//! Problem files hold one polynomial per line plus optional `p = `,
//! `n = ` and `order = ` directives; `#` starts a comment. Networks are
//! stored in the line-oriented dump of the network module. DOT output is
//! display-only.

use crate::chordal::{complete_with_order, suggest_order, support_graph, ChordalStructure};
use crate::network::{
    chordal_triangularize, parse_network, print_network, ChordalNetwork, Mode, NetError,
};
use crate::queries;
use crate::ring::{text::parse_poly_at, Poly, Ring};
use crate::rng::Rng;
use std::fmt;
use std::io::Write;

const DEFAULT_PRIME: u64 = 65521;

/// Refuse problem files that declare or imply absurd ring sizes;
/// exponent vectors are dense, so the variable count bounds every
/// allocation made on behalf of untrusted input.
pub const MAX_VARIABLES: usize = 65536;
const USAGE: &str = "usage: chordalnet <command> [options]

commands:
  tri <file> [--mode auto|zerodim|monomial|binomial] [--squarefree]
             [--order natural|mindeg|file:<path>] [--p <prime>]
             [--keep-ineqs] [--out <path>]
      triangularize a polynomial system into a chordal network
  count <net>                  solutions over the algebraic closure
  sample <net> [-k N] [--seed S] [--check <file>]
                               uniform rational sample points
  member <net> <polyfile> [--trials T] [--seed S]
                               probabilistic radical membership
  dim <net>                    dimension of the variety
  top <net> [--out <path>]     top-dimensional subnetwork
  census <net>                 chain counts per dimension
  isolate <net> -d D           chains of dimension D
  components <net> [--max M] [--min-dim D]
                               minimal primes by decreasing dimension
  export-dot <net> [--collapse pairs|a-b,c-d,...]
                               DOT rendering of the network
";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Parse { line: usize, col: usize, msg: String },
    NonPrimeModulus(u64),
    Io(String),
    Net(NetError),
    Query(queries::QueryError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
            CliError::NonPrimeModulus(p) => write!(f, "modulus {p} is not an odd prime below 2^31"),
            CliError::Io(msg) => write!(f, "{msg}"),
            CliError::Net(e) => write!(f, "{e}"),
            CliError::Query(e) => write!(f, "{e}"),
        }
    }
}

impl From<NetError> for CliError {
    fn from(e: NetError) -> Self {
        CliError::Net(e)
    }
}

impl From<queries::QueryError> for CliError {
    fn from(e: queries::QueryError) -> Self {
        CliError::Query(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// A parsed problem file.
#[derive(Debug)]
pub struct Problem {
    pub ring: Ring,
    pub polys: Vec<Poly>,
    pub order: Option<Vec<usize>>,
}

/// Parse a problem file: directives `p = `, `n = `, `order = `, comment
/// lines starting with `#`, and one polynomial per line.
pub fn parse_problem(text: &str, p_override: Option<u64>) -> Result<Problem, CliError> {
    let mut p: Option<u64> = None;
    let mut n: Option<usize> = None;
    let mut order: Option<Vec<usize>> = None;
    let mut poly_lines: Vec<(usize, &str)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let directive = |key: &str| -> Option<&str> {
            let rest = line.strip_prefix(key)?;
            let rest = rest.trim_start();
            rest.strip_prefix('=').map(|v| v.trim())
        };
        if let Some(v) = directive("p") {
            p = Some(v.parse().map_err(|_| CliError::Parse {
                line: lineno,
                col: 1,
                msg: format!("bad modulus '{v}'"),
            })?);
        } else if let Some(v) = directive("n") {
            n = Some(v.parse().map_err(|_| CliError::Parse {
                line: lineno,
                col: 1,
                msg: format!("bad variable count '{v}'"),
            })?);
        } else if let Some(v) = directive("order") {
            let parsed: Result<Vec<usize>, _> = v.split_whitespace().map(|t| t.parse()).collect();
            order = Some(parsed.map_err(|_| CliError::Parse {
                line: lineno,
                col: 1,
                msg: format!("bad order line '{v}'"),
            })?);
        } else {
            poly_lines.push((lineno, line));
        }
    }
    let p = p_override.or(p).unwrap_or(DEFAULT_PRIME);
    if p < 3 || p >= crate::gf::MAX_MODULUS || !crate::gf::is_prime(p) {
        return Err(CliError::NonPrimeModulus(p));
    }
    // Infer n from the largest variable index when absent.
    let mut max_idx: Option<usize> = None;
    for &(lineno, line) in &poly_lines {
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'x' && i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                let mut j = i + 1;
                let mut v: usize = 0;
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    v = v
                        .checked_mul(10)
                        .and_then(|x| x.checked_add((bytes[j] - b'0') as usize))
                        .ok_or(CliError::Parse {
                            line: lineno,
                            col: i + 1,
                            msg: "variable index too large".into(),
                        })?;
                    j += 1;
                }
                max_idx = Some(max_idx.map_or(v, |m| m.max(v)));
                i = j;
            } else {
                i += 1;
            }
        }
    }
    let n = match n {
        Some(n) => n,
        None => max_idx.map_or(1, |m| m + 1),
    };
    if n == 0 {
        return Err(CliError::Parse { line: 1, col: 1, msg: "variable count must be positive".into() });
    }
    if n > MAX_VARIABLES {
        return Err(CliError::Parse {
            line: 1,
            col: 1,
            msg: format!("variable count {n} exceeds the supported maximum {MAX_VARIABLES}"),
        });
    }
    let ring = Ring::new(n, p);
    let mut polys = Vec::new();
    for (lineno, line) in poly_lines {
        let f = parse_poly_at(ring, line, lineno).map_err(|e| CliError::Parse {
            line: e.line,
            col: e.col,
            msg: e.msg,
        })?;
        if !f.is_zero() {
            polys.push(f);
        }
    }
    if let Some(o) = &order {
        validate_order(o, n)?;
    }
    Ok(Problem { ring, polys, order })
}

/// Canonical text form of a problem; `parse_problem` of the output
/// reproduces the same ring, polynomials and order.
pub fn print_problem(problem: &Problem) -> String {
    let mut out = String::new();
    out.push_str(&format!("p = {}\n", problem.ring.p));
    out.push_str(&format!("n = {}\n", problem.ring.n));
    if let Some(order) = &problem.order {
        let rendered: Vec<String> = order.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("order = {}\n", rendered.join(" ")));
    }
    for f in &problem.polys {
        out.push_str(&format!("{f}\n"));
    }
    out
}

fn validate_order(order: &[usize], n: usize) -> Result<(), CliError> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(CliError::Usage(format!(
            "order must list all {n} vertices, got {}",
            order.len()
        )));
    }
    for &v in order {
        if v >= n || seen[v] {
            return Err(CliError::Usage(format!("order is not a permutation of 0..{n}")));
        }
        seen[v] = true;
    }
    Ok(())
}

/// Entry point: returns the process exit code. Exit 0 on success, 1 on
/// domain errors, 2 on usage errors.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match dispatch(args, stdout, stderr) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(stderr, "{msg}");
            let _ = write!(stderr, "{USAGE}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

struct Args {
    positional: Vec<String>,
    flags: Vec<(String, Option<String>)>,
}

impl Args {
    fn parse(args: &[String], with_value: &[&str], boolean: &[&str]) -> Result<Args, CliError> {
        let mut positional = Vec::new();
        let mut flags = Vec::new();
        let mut it = args.iter().peekable();
        while let Some(a) = it.next() {
            if let Some(name) = a.strip_prefix("--").or_else(|| a.strip_prefix('-').filter(|s| s.len() == 1)) {
                if boolean.contains(&name) {
                    flags.push((name.to_string(), None));
                } else if with_value.contains(&name) {
                    let v = it
                        .next()
                        .ok_or_else(|| CliError::Usage(format!("flag --{name} needs a value")))?;
                    flags.push((name.to_string(), Some(v.clone())));
                } else {
                    return Err(CliError::Usage(format!("unknown flag '{a}'")));
                }
            } else {
                positional.push(a.clone());
            }
        }
        Ok(Args { positional, flags })
    }

    fn flag(&self, name: &str) -> Option<&str> {
        self.flags
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .and_then(|(_, v)| v.as_deref())
    }

    fn has(&self, name: &str) -> bool {
        self.flags.iter().any(|(k, _)| k == name)
    }
}

fn dispatch(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let cmd = match args.first() {
        Some(c) => c.as_str(),
        None => return Err(CliError::Usage("missing command".into())),
    };
    let rest = &args[1..];
    match cmd {
        "tri" => cmd_tri(rest, stdout, stderr),
        "count" => cmd_count(rest, stdout, stderr),
        "sample" => cmd_sample(rest, stdout, stderr),
        "member" => cmd_member(rest, stdout, stderr),
        "dim" => cmd_dim(rest, stdout),
        "top" => cmd_top(rest, stdout, stderr),
        "census" => cmd_census(rest, stdout),
        "isolate" => cmd_isolate(rest, stdout),
        "components" => cmd_components(rest, stdout),
        "export-dot" => cmd_export_dot(rest, stdout),
        "help" | "--help" | "-h" => {
            let _ = write!(stdout, "{USAGE}");
            Ok(())
        }
        other => Err(CliError::Usage(format!("unknown command '{other}'"))),
    }
}

/// Chain counts saturate at the u128 ceiling on very long networks.
fn show_count(c: u128) -> String {
    if c == u128::MAX {
        format!(">= {c}")
    } else {
        c.to_string()
    }
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
}

fn load_network(path: &str) -> Result<ChordalNetwork, CliError> {
    Ok(parse_network(&read_file(path)?)?)
}

fn seed_from(args: &Args, stderr: &mut dyn Write) -> Result<Rng, CliError> {
    let seed = match args.flag("seed") {
        Some(s) => s
            .parse::<u64>()
            .map_err(|_| CliError::Usage(format!("bad seed '{s}'")))?,
        None => match std::env::var("CHORDALNET_SEED").ok().and_then(|s| s.parse().ok()) {
            Some(s) => s,
            None => Rng::from_entropy().1,
        },
    };
    let _ = writeln!(stderr, "seed: {seed}");
    Ok(Rng::new(seed))
}

fn cmd_tri(rest: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["mode", "order", "out", "p"], &["squarefree", "keep-ineqs"])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("tri needs a problem file".into()))?;
    let p_override = match args.flag("p") {
        Some(s) => Some(
            s.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("bad prime '{s}'")))?,
        ),
        None => None,
    };
    let problem = parse_problem(&read_file(path)?, p_override)?;
    let mode = match args.flag("mode").unwrap_or("auto") {
        "auto" => Mode::Raw,
        "zerodim" => Mode::ZeroDim,
        "monomial" => Mode::Monomial,
        "binomial" => Mode::Binomial,
        other => return Err(CliError::Usage(format!("unknown mode '{other}'"))),
    };
    let (polys, cs) = prepare(&problem, args.flag("order"))?;
    let net = chordal_triangularize(
        &polys,
        &cs,
        mode,
        args.has("squarefree"),
        args.has("keep-ineqs"),
        crate::ring::DEFAULT_SPAIR_BUDGET,
    )?;
    let _ = writeln!(
        stderr,
        "mode: {}  ranks: {}  nodes: {}  arcs: {}  width: {} (peak {})  chains: {}",
        net.mode.as_str(),
        net.n(),
        net.node_count(),
        net.arc_count(),
        net.width(),
        net.peak_width,
        show_count(queries::chain_count(&net)),
    );
    let text = print_network(&net);
    match args.flag("out") {
        Some(out) => std::fs::write(out, text).map_err(|e| CliError::Io(format!("{out}: {e}")))?,
        None => {
            let _ = write!(stdout, "{text}");
        }
    }
    Ok(())
}

/// Build the completion for the requested order and relabel the system
/// so the order becomes the natural one.
fn prepare(problem: &Problem, order_flag: Option<&str>) -> Result<(Vec<Poly>, ChordalStructure), CliError> {
    let n = problem.ring.n;
    let g = support_graph(n, &problem.polys);
    let order: Vec<usize> = match order_flag {
        None | Some("natural") => match &problem.order {
            Some(o) => o.clone(),
            None => (0..n).collect(),
        },
        Some("mindeg") => suggest_order(&g),
        Some(other) => match other.strip_prefix("file:") {
            Some(path) => {
                let text = read_file(path)?;
                let parsed: Result<Vec<usize>, _> =
                    text.split_whitespace().map(|t| t.parse()).collect();
                parsed.map_err(|_| CliError::Usage(format!("bad order file '{path}'")))?
            }
            None => return Err(CliError::Usage(format!("unknown order '{other}'"))),
        },
    };
    validate_order(&order, n)?;
    let cs = complete_with_order(&g, &order);
    // Relabel so internal variable i is original variable order[i].
    let polys: Vec<Poly> = problem.polys.iter().map(|f| f.relabel(&order)).collect();
    Ok((polys, cs))
}

fn cmd_count(rest: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &[], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("count needs a network file".into()))?;
    let net = load_network(path)?;
    let count = queries::zero_count(&net)?;
    if !count.exact {
        let _ = writeln!(stderr, "warning: network was not built squarefree; count is an upper bound");
    }
    let _ = writeln!(stdout, "{}", count.value);
    Ok(())
}

fn cmd_sample(rest: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["k", "seed", "check"], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("sample needs a network file".into()))?;
    let net = load_network(path)?;
    let k: usize = match args.flag("k") {
        Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad count '{s}'")))?,
        None => 1,
    };
    let check = match args.flag("check") {
        Some(f) => Some(parse_problem(&read_file(f)?, Some(net.ring.p))?),
        None => None,
    };
    let mut rng = seed_from(&args, stderr)?;
    for _ in 0..k {
        let point = queries::sample(&net, &mut rng)?;
        if let Some(problem) = &check {
            for f in &problem.polys {
                if f.eval(&point) != 0 {
                    return Err(CliError::Io(format!(
                        "sample {point:?} does not satisfy {f}"
                    )));
                }
            }
        }
        let rendered: Vec<String> = point.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(stdout, "{}", rendered.join(","));
    }
    Ok(())
}

fn cmd_member(rest: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["trials", "seed"], &[])?;
    let (net_path, poly_path) = match &args.positional[..] {
        [a, b] => (a, b),
        _ => return Err(CliError::Usage("member needs a network file and a polynomial file".into())),
    };
    let net = load_network(net_path)?;
    let problem = parse_problem(&read_file(poly_path)?, Some(net.ring.p))?;
    if problem.ring.n > net.n() {
        return Err(CliError::Usage(format!(
            "polynomial uses {} variables but the network has {}",
            problem.ring.n,
            net.n()
        )));
    }
    if problem.polys.len() != 1 {
        return Err(CliError::Usage(format!(
            "member expects exactly one polynomial, found {}",
            problem.polys.len()
        )));
    }
    // Widen to the network ring if the file declared fewer variables.
    let mut h = Poly::zero(net.ring);
    for (m, c) in problem.polys[0].terms_desc() {
        let mut e = vec![0u32; net.n()];
        e[..m.0.len()].copy_from_slice(&m.0);
        h.add_term(crate::ring::Monomial(e), c);
    }
    let trials: u32 = match args.flag("trials") {
        Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad trial count '{s}'")))?,
        None => 20,
    };
    let mut rng = seed_from(&args, stderr)?;
    let vanishes = queries::radical_member(&net, &h, trials, &mut rng)?;
    let _ = writeln!(stdout, "vanishes: {vanishes}");
    Ok(())
}

fn cmd_dim(rest: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &[], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("dim needs a network file".into()))?;
    let net = load_network(path)?;
    let _ = writeln!(stdout, "{}", queries::dimension(&net));
    Ok(())
}

fn cmd_top(rest: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["out"], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("top needs a network file".into()))?;
    let net = load_network(path)?;
    let top = queries::top_component(&net);
    let _ = writeln!(
        stderr,
        "dimension: {}  chains: {} (of {})",
        queries::dimension(&top),
        show_count(queries::chain_count(&top)),
        show_count(queries::chain_count(&net)),
    );
    let text = print_network(&top);
    match args.flag("out") {
        Some(out) => std::fs::write(out, text).map_err(|e| CliError::Io(format!("{out}: {e}")))?,
        None => {
            let _ = write!(stdout, "{text}");
        }
    }
    Ok(())
}

fn cmd_census(rest: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &[], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("census needs a network file".into()))?;
    let net = load_network(path)?;
    let census = queries::dim_census(&net);
    for (d, count) in census.iter().rev() {
        let _ = writeln!(stdout, "dim {d}: {}", show_count(*count));
    }
    let total: u128 = census.values().fold(0u128, |a, &b| a.saturating_add(b));
    let _ = writeln!(stdout, "total: {}", show_count(total));
    Ok(())
}

fn cmd_isolate(rest: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["d"], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("isolate needs a network file".into()))?;
    let d: isize = match args.flag("d") {
        Some(s) => s.parse().map_err(|_| CliError::Usage(format!("bad dimension '{s}'")))?,
        None => return Err(CliError::Usage("isolate needs -d <dimension>".into())),
    };
    let net = load_network(path)?;
    for chain in queries::isolate_dim(&net, d) {
        let eqs: Vec<String> = chain.equations(&net).iter().map(|f| f.to_string()).collect();
        let _ = writeln!(stdout, "({})", eqs.join(", "));
    }
    Ok(())
}

fn cmd_components(rest: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["max", "min-dim"], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("components needs a network file".into()))?;
    let net = load_network(path)?;
    let max = match args.flag("max") {
        Some(s) => Some(s.parse::<usize>().map_err(|_| CliError::Usage(format!("bad max '{s}'")))?),
        None => None,
    };
    let min_dim = match args.flag("min-dim") {
        Some(s) => {
            Some(s.parse::<usize>().map_err(|_| CliError::Usage(format!("bad min-dim '{s}'")))?)
        }
        None => None,
    };
    let primes = queries::minimal_primes(&net, max, min_dim, crate::ring::DEFAULT_SPAIR_BUDGET)?;
    for prime in &primes {
        let gens: Vec<String> = prime.basis.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(stdout, "dim {}: [{}]", prime.dimension, gens.join(", "));
    }
    let _ = writeln!(stdout, "components: {}", primes.len());
    Ok(())
}

fn cmd_export_dot(rest: &[String], stdout: &mut dyn Write) -> Result<(), CliError> {
    let args = Args::parse(rest, &["collapse"], &[])?;
    let path = args
        .positional
        .first()
        .ok_or_else(|| CliError::Usage("export-dot needs a network file".into()))?;
    let net = load_network(path)?;
    let groups = match args.flag("collapse") {
        Some(spec) => parse_collapse(spec, net.n())?,
        None => (net.min_rank..net.n()).map(|l| vec![l]).collect(),
    };
    let _ = write!(stdout, "{}", export_dot(&net, &groups));
    Ok(())
}

fn parse_collapse(spec: &str, n: usize) -> Result<Vec<Vec<usize>>, CliError> {
    if spec == "pairs" {
        let mut groups = Vec::new();
        let mut l = 0;
        while l < n {
            groups.push((l..n.min(l + 2)).collect());
            l += 2;
        }
        return Ok(groups);
    }
    let mut groups = Vec::new();
    let mut covered = vec![false; n];
    for part in spec.split(',') {
        let group: Vec<usize> = match part.split_once('-') {
            Some((a, b)) => {
                let a: usize =
                    a.parse().map_err(|_| CliError::Usage(format!("bad rank range '{part}'")))?;
                let b: usize =
                    b.parse().map_err(|_| CliError::Usage(format!("bad rank range '{part}'")))?;
                if a > b || b >= n {
                    return Err(CliError::Usage(format!("bad rank range '{part}'")));
                }
                (a..=b).collect()
            }
            None => {
                let a: usize =
                    part.parse().map_err(|_| CliError::Usage(format!("bad rank '{part}'")))?;
                if a >= n {
                    return Err(CliError::Usage(format!("rank {a} out of range")));
                }
                vec![a]
            }
        };
        for &l in &group {
            covered[l] = true;
        }
        groups.push(group);
    }
    for l in 0..n {
        if !covered[l] {
            groups.push(vec![l]);
        }
    }
    groups.sort_by_key(|g| g[0]);
    Ok(groups)
}

/// DOT digraph: one cluster per (possibly collapsed) rank group, node
/// labels listing equations then `/` and the inequations.
pub fn export_dot(net: &ChordalNetwork, groups: &[Vec<usize>]) -> String {
    let mut out = String::new();
    out.push_str("digraph chordalnet {\n  rankdir=TB;\n  node [shape=box];\n");
    for group in groups {
        let members: Vec<usize> = group
            .iter()
            .filter(|&&l| l >= net.min_rank && l < net.n())
            .copied()
            .collect();
        if members.is_empty() {
            continue;
        }
        let label = if members.len() == 1 {
            members[0].to_string()
        } else if members.len() == 2 && members[1] < 10 {
            format!("{}{}", members[0], members[1])
        } else {
            format!("{}-{}", members[0], members[members.len() - 1])
        };
        out.push_str(&format!("  subgraph cluster_{} {{\n    label=\"{}\";\n", members[0], label));
        for &l in &members {
            for &id in net.node_ids(l) {
                let node = net.node(id);
                let eqs: Vec<String> = node.content.eqs.iter().map(|f| f.to_string()).collect();
                let ineqs: Vec<String> = node.content.ineqs.iter().map(|f| f.to_string()).collect();
                let mut label = if eqs.is_empty() { "0".to_string() } else { eqs.join(", ") };
                if !ineqs.is_empty() {
                    label.push_str(" / ");
                    label.push_str(&ineqs.join(", "));
                }
                out.push_str(&format!("    n{} [label=\"{}\"];\n", id, label.replace('"', "\\\"")));
            }
        }
        out.push_str("  }\n");
    }
    for (u, v) in net.arcs() {
        out.push_str(&format!("  n{u} -> n{v};\n"));
    }
    out.push_str("}\n");
    out
}
