//! Command-line front end for `opw-core`.
//!
//! [`run`] parses arguments, executes one command and returns the exit code
//! with the text destined for stdout and stderr. Exit codes are 0 on success,
//! 1 when a verification fails and 2 on a usage error.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use opw_core::arnold::{enumerate_g, ArnoldElement, Pair};
use opw_core::braids::{pentagon_solutions, BraidCaps, BraidContext};
use opw_core::graphs::{census, def_total_differential, tw_differential, Graph, GraphElement};
use opw_core::lie::{lyndon_words, standard_bracketing, Word};
use opw_core::linalg::{solve_combination, Indexer};
use opw_core::moduli::{adelta_basis, is_regular, mzv_form, zeta_numeric, MzvComposition};
use opw_core::scalar::{self, Scalar};
use opw_core::selfcheck;
use opw_core::weights::{
    decompose_bracketing, defect_h0, defect_surjects, export_presentation, grt_image_check, h0, handle_adelta,
    handle_coger, mzv_symbol, q_h0, q_h0_linear, verify_certificate, BraidCeHandle, Cooperad, Form, Presentation,
    ShuffleMode, WeightCaps, WeightsError,
};
use opw_core::words::{alpha_of, parse_bracketing};

/// Result of one invocation.
#[derive(Debug, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
}

type CmdResult = Result<Report, Failure>;

/// Output of a successful command, in both renderings.
struct Report {
    json: Value,
    human: String,
    verified: bool,
}

impl Report {
    fn ok(json: Value, human: String) -> Self {
        Report {
            json,
            human,
            verified: true,
        }
    }
}

impl From<WeightsError> for Failure {
    fn from(e: WeightsError) -> Self {
        match e {
            WeightsError::CapExceeded { .. } | WeightsError::Format(_) | WeightsError::InadmissibleSpec(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Verification(other.to_string()),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn failed<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Verification(e.to_string())
}

#[derive(Parser, Debug)]
#[command(name = "opw", version, about = "Exact computations with algebras of formal weights")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
struct Global {
    /// Largest arity any computation may touch.
    #[arg(long, global = true, default_value_t = 6)]
    max_arity: usize,
    #[arg(long, global = true, default_value_t = 4)]
    max_weight: usize,
    /// Largest Lie length for braid computations.
    #[arg(long, global = true, default_value_t = 4)]
    max_length: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

impl Global {
    fn caps(&self) -> WeightCaps {
        WeightCaps {
            max_arity: self.max_arity,
            max_weight: self.max_weight,
            max_length: self.max_length,
        }
    }

    fn braid(&self) -> BraidContext {
        BraidContext::new(BraidCaps {
            max_n: self.max_arity.min(5),
            max_len: self.max_length,
        })
    }

    fn arity(&self, n: usize) -> Result<(), Failure> {
        if n > self.max_arity {
            return Err(usage(format!(
                "cap exceeded: max-arity = {n} but the cap is {}",
                self.max_arity
            )));
        }
        Ok(())
    }

    fn weight(&self, w: usize) -> Result<(), Failure> {
        if w > self.max_weight {
            return Err(usage(format!(
                "cap exceeded: max-weight = {w} but the cap is {}",
                self.max_weight
            )));
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions of coGer(n) or adelta(n) in every degree.
    Dims {
        cooperad: Algebra,
        #[arg(long)]
        n: usize,
    },
    /// Basis forms of coGer(n) or adelta(n) in one degree.
    Basis {
        cooperad: Algebra,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Normal form of an element such as "w12*w23 - 1/2*w13*w12".
    Normalform {
        #[arg(long)]
        n: usize,
        element: String,
    },
    /// Basis of the pentagon kernel in Lyndon coordinates.
    Pentagon {
        #[arg(long)]
        weight: usize,
    },
    /// Weight presentations.
    Weights {
        #[command(subcommand)]
        command: WeightsCommand,
    },
    /// Multiple zeta value forms and numerics.
    Mzv {
        #[command(subcommand)]
        command: MzvCommand,
    },
    /// Decomposition and injectivity certificates.
    Certify {
        #[command(subcommand)]
        command: CertifyCommand,
    },
    /// Graph complexes.
    Graphs {
        #[command(subcommand)]
        command: GraphsCommand,
    },
    /// Runs the acceptance criteria.
    Selfcheck {
        #[arg(long, value_enum, default_value_t = LevelArg::Full)]
        level: LevelArg,
        /// Run only this criterion.
        #[arg(long)]
        only: Option<usize>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct WeightArgs {
    #[arg(long, value_enum, default_value_t = Handle::Coger)]
    cooperad: Handle,
    #[arg(long)]
    weight: usize,
    /// Admit every pair of subsets as a shuffle spec.
    #[arg(long)]
    general: bool,
}

impl WeightArgs {
    fn mode(&self) -> ShuffleMode {
        if self.general {
            ShuffleMode::General
        } else {
            ShuffleMode::Covering
        }
    }
}

#[derive(Subcommand, Debug)]
enum WeightsCommand {
    H0(WeightArgs),
    #[command(name = "q_h0")]
    QH0(WeightArgs),
    /// Indecomposables using only the linear part of the differential.
    #[command(name = "q_h0_linear")]
    QH0Linear(WeightArgs),
    Defect(WeightArgs),
    /// Writes a presentation as JSON.
    Export {
        #[command(flatten)]
        args: WeightArgs,
        #[arg(long, value_enum, default_value_t = Kind::QH0)]
        kind: Kind,
        #[arg(long)]
        output: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum MzvCommand {
    /// The form of a composition k_1 .. k_r (k_r >= 2) and its adelta coordinates.
    Form { ks: Vec<usize> },
    /// Truncated series value.
    Numeric {
        ks: Vec<usize>,
        #[arg(long, default_value_t = 1e-9)]
        eps: f64,
    },
}

#[derive(Subcommand, Debug)]
enum CertifyCommand {
    /// Certificate for the top form of a bracketing.
    Decompose {
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        alpha: String,
    },
    /// Pentagon classes in the coGer indecomposables.
    Grt {
        #[arg(long)]
        weight: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GraphsCommand {
    /// Graphs with the given vertex counts, up to isomorphism.
    Census {
        #[arg(long)]
        white: usize,
        #[arg(long, default_value_t = 0)]
        black: usize,
        #[arg(long, default_value_t = 4)]
        max_edges: usize,
    },
    /// Differentials of a named graph or a graph in JSON.
    Differential { graph: String },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Algebra {
    Coger,
    Adelta,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Handle {
    Coger,
    Adelta,
    Braidce,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Kind {
    H0,
    #[value(name = "q_h0")]
    QH0,
    #[value(name = "q_h0_linear")]
    QH0Linear,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LevelArg {
    Quick,
    Full,
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let json_mode = cli.global.json;
    match dispatch(&cli) {
        Ok(report) => {
            let mut stdout = if json_mode {
                serde_json::to_string_pretty(&report.json).unwrap_or_default()
            } else {
                report.human
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            Outcome {
                code: if report.verified { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(Failure::Usage(m)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
        Err(Failure::Verification(m)) => Outcome {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {m}\n"),
        },
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let g = cli.global;
    match &cli.command {
        Command::Dims { cooperad, n } => dims(g, *cooperad, *n),
        Command::Basis { cooperad, n, degree } => basis(g, *cooperad, *n, *degree),
        Command::Normalform { n, element } => normalform(g, *n, element),
        Command::Pentagon { weight } => pentagon(g, *weight),
        Command::Weights { command } => weights(g, command),
        Command::Mzv { command } => mzv(g, command),
        Command::Certify { command } => certify(g, command),
        Command::Graphs { command } => graphs(command),
        Command::Selfcheck { level, only } => run_selfcheck(*level, *only),
    }
}

fn algebra_name(a: Algebra) -> &'static str {
    match a {
        Algebra::Coger => "coGer",
        Algebra::Adelta => "adelta",
    }
}

fn algebra_basis(a: Algebra, n: usize, d: usize) -> Vec<ArnoldElement> {
    match a {
        Algebra::Coger => enumerate_g(n, d)
            .iter()
            .map(|m| ArnoldElement::product_of(n, m, Scalar::from_integer(1.into())))
            .collect(),
        Algebra::Adelta => adelta_basis(n, d).basis,
    }
}

fn top_degree(a: Algebra, n: usize) -> usize {
    match a {
        Algebra::Coger => n.saturating_sub(1),
        Algebra::Adelta => n.saturating_sub(2),
    }
}

fn dims(g: Global, a: Algebra, n: usize) -> CmdResult {
    g.arity(n)?;
    if n == 0 || (matches!(a, Algebra::Adelta) && n < 2) {
        return Err(usage(format!("arity {n} is out of range for {}", algebra_name(a))));
    }
    let dims: Vec<usize> = (0..=top_degree(a, n)).map(|d| algebra_basis(a, n, d).len()).collect();
    let human = format!(
        "{}({n}) dimensions by degree: {}",
        algebra_name(a),
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    );
    Ok(Report::ok(
        json!({"cooperad": algebra_name(a), "arity": n, "dims": dims}),
        human,
    ))
}

fn basis(g: Global, a: Algebra, n: usize, d: usize) -> CmdResult {
    g.arity(n)?;
    if n == 0 || d > top_degree(a, n) {
        return Err(usage(format!(
            "degree {d} is out of range for {}({n})",
            algebra_name(a)
        )));
    }
    let b = algebra_basis(a, n, d);
    let human = b.iter().map(|e| e.to_text()).collect::<Vec<_>>().join("\n");
    let json = json!({
        "cooperad": algebra_name(a),
        "arity": n,
        "degree": d,
        "basis": b.iter().map(|e| e.to_json()).collect::<Vec<_>>(),
    });
    Ok(Report::ok(json, if b.is_empty() { "(empty)".into() } else { human }))
}

/// Parses a sum of terms `c*w12*w23`, where generators are `wIJ` or `w(I,J)`.
fn parse_element(text: &str) -> Result<Vec<(Scalar, Vec<Pair>)>, String> {
    let mut terms = Vec::new();
    let mut sign = 1i64;
    let mut current = String::new();
    let flush = |chunk: &str, sign: i64, terms: &mut Vec<(Scalar, Vec<Pair>)>| -> Result<(), String> {
        let chunk = chunk.trim();
        if chunk.is_empty() {
            return Err("empty term".into());
        }
        let mut coef = scalar::int(sign);
        let mut pairs = Vec::new();
        for factor in chunk.split('*').map(str::trim) {
            if let Some(rest) = factor.strip_prefix('w') {
                let (a, b) = if let Some(inner) = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                    let (a, b) = inner.split_once(',').ok_or_else(|| format!("bad generator {factor}"))?;
                    (
                        a.trim().parse().map_err(|_| format!("bad index in {factor}"))?,
                        b.trim().parse().map_err(|_| format!("bad index in {factor}"))?,
                    )
                } else {
                    let digits: Vec<usize> = rest
                        .chars()
                        .map(|c| c.to_digit(10).map(|d| d as usize))
                        .collect::<Option<_>>()
                        .ok_or_else(|| format!("bad generator {factor}"))?;
                    match digits[..] {
                        [a, b] => (a, b),
                        _ => return Err(format!("bad generator {factor}; use w(i,j) for indices above 9")),
                    }
                };
                pairs.push((a, b));
            } else if factor == "1" && chunk != "1" {
                continue;
            } else {
                let c = scalar::parse(factor).ok_or_else(|| format!("bad coefficient {factor}"))?;
                coef *= c;
            }
        }
        terms.push((coef, pairs));
        Ok(())
    };
    let mut depth = 0usize;
    let mut pending = false;
    for ch in text.chars() {
        match ch {
            '(' => {
                depth += 1;
                current.push(ch);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                current.push(ch);
            }
            '+' | '-' if depth == 0 && !current.trim().ends_with('/') => {
                if !current.trim().is_empty() {
                    flush(&current, sign, &mut terms)?;
                    current.clear();
                }
                sign = if ch == '-' { -1 } else { 1 };
                pending = true;
            }
            _ => {
                current.push(ch);
                pending = false;
            }
        }
    }
    if pending || current.trim().is_empty() {
        return Err("expression ends without a term".into());
    }
    flush(&current, sign, &mut terms)?;
    Ok(terms)
}

fn normalform(g: Global, n: usize, text: &str) -> CmdResult {
    g.arity(n)?;
    let terms = parse_element(text).map_err(usage)?;
    for (_, m) in &terms {
        for &(a, b) in m {
            if a == b || a.max(b) > n || a.min(b) == 0 {
                return Err(usage(format!("generator w({a},{b}) does not exist in arity {n}")));
            }
        }
    }
    let oriented: Vec<(Scalar, Vec<Pair>)> = terms
        .into_iter()
        // w_ba = w_ab in the Arnol'd algebra
        .map(|(c, m)| (c, m.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect()))
        .collect();
    let nf = ArnoldElement::normal_form(n, &oriented).map_err(usage)?;
    Ok(Report::ok(nf.to_json(), nf.to_text()))
}

fn word_text(w: &Word) -> String {
    w.iter().map(|&l| if l == 0 { 'x' } else { 'y' }).collect()
}

fn pentagon(g: Global, w: usize) -> CmdResult {
    if w == 0 {
        return Err(usage("weight must be positive"));
    }
    let ctx = g.braid();
    let sols = pentagon_solutions(&ctx, w).map_err(usage)?;
    let words = lyndon_words(2, w);
    let mut index: Indexer<Word> = Indexer::new();
    let images: Vec<_> = words
        .iter()
        .map(|l| standard_bracketing(l).to_sparse(&mut index))
        .collect();
    let mut rows = Vec::new();
    let mut lines = vec![format!("pentagon kernel in weight {w}: dimension {}", sols.len())];
    for psi in &sols {
        let target = psi.to_sparse(&mut index);
        let c = solve_combination(&images, &target).ok_or_else(|| failed("solution outside the Lyndon span"))?;
        let coords: Vec<Value> = words
            .iter()
            .enumerate()
            .filter_map(|(j, l)| {
                c.get(&j)
                    .map(|x| json!({"lyndon": word_text(l), "c": scalar::format(x)}))
            })
            .collect();
        lines.push(
            words
                .iter()
                .enumerate()
                .filter_map(|(j, l)| c.get(&j).map(|x| format!("{}*[{}]", scalar::format(x), word_text(l))))
                .collect::<Vec<_>>()
                .join(" + "),
        );
        rows.push(Value::Array(coords));
    }
    let json = json!({
        "weight": w,
        "lyndon_basis": words.iter().map(word_text).collect::<Vec<_>>(),
        "dim": sols.len(),
        "kernel": rows,
    });
    Ok(Report::ok(json, lines.join("\n")))
}

fn with_handle<T>(g: Global, h: Handle, f: impl FnOnce(&dyn Cooperad) -> Result<T, Failure>) -> Result<T, Failure> {
    match h {
        Handle::Coger => f(&handle_coger(g.caps())),
        Handle::Adelta => f(&handle_adelta(g.caps())),
        Handle::Braidce => f(&BraidCeHandle::new(g.caps())),
    }
}

fn presentation_report(p: &Presentation) -> Report {
    let reps: Vec<&str> = p.representatives.iter().map(|&i| p.labels[i].as_str()).collect();
    let human = format!(
        "{} {} weight {}: {} generators, {} independent relations, dimension {}\nbasis representatives: {}",
        p.handle,
        p.kind.as_str(),
        p.weight,
        p.generators.len(),
        p.relations.len(),
        p.dim,
        if reps.is_empty() {
            "(none)".into()
        } else {
            reps.join(", ")
        }
    );
    Report::ok(p.to_json(), human)
}

/// Convergent compositions of `w`, shortest first.
fn compositions(w: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            if cur.last().is_some_and(|&k| k >= 2) {
                out.push(cur.clone());
            }
            return;
        }
        for k in (1..=rest).rev() {
            cur.push(k);
            go(rest - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(w, &mut Vec::new(), &mut out);
    out.sort_by_key(|c| c.len());
    out
}

fn weights(g: Global, cmd: &WeightsCommand) -> CmdResult {
    match cmd {
        WeightsCommand::H0(a) => with_handle(g, a.cooperad, |h| Ok(presentation_report(&h0(h, a.weight, a.mode())?))),
        WeightsCommand::QH0(a) => with_handle(g, a.cooperad, |h| {
            Ok(presentation_report(&q_h0(h, a.weight, a.mode())?))
        }),
        WeightsCommand::QH0Linear(a) => with_handle(g, a.cooperad, |h| {
            Ok(presentation_report(&q_h0_linear(h, a.weight, a.mode())?))
        }),
        WeightsCommand::Defect(a) => with_handle(g, a.cooperad, |h| {
            let d = defect_h0(h, a.weight)?;
            let q = q_h0(h, a.weight, a.mode())?;
            let surj = defect_surjects(&d, &q);
            let json = json!({
                "handle": h.name(),
                "weight": a.weight,
                "dim": d.dim,
                "truncated_dim": d.truncated.dim,
                "q_h0_dim": q.dim,
                "surjects_onto_q_h0": surj,
            });
            let human = format!(
                "{} defect weight {}: H^0 of the linear complex {}, truncated {}, onto q_h0 (dim {}): {}",
                h.name(),
                a.weight,
                d.dim,
                d.truncated.dim,
                q.dim,
                surj
            );
            Ok(Report {
                json,
                human,
                verified: surj,
            })
        }),
        WeightsCommand::Export { args, kind, output } => with_handle(g, args.cooperad, |h| {
            let p = match kind {
                Kind::H0 => h0(h, args.weight, args.mode())?,
                Kind::QH0 => q_h0(h, args.weight, args.mode())?,
                Kind::QH0Linear => q_h0_linear(h, args.weight, args.mode())?,
            };
            let symbols: Vec<(String, Form)> = if matches!(args.cooperad, Handle::Adelta) {
                compositions(args.weight)
                    .iter()
                    .filter(|ks| ks.iter().sum::<usize>() + 2 <= g.max_arity)
                    .filter_map(|ks| mzv_symbol(h, ks).ok().map(|s| (s.label, s.expansion)))
                    .collect()
            } else {
                Vec::new()
            };
            let v = export_presentation(&p, &symbols, output)?;
            let human = format!(
                "wrote {} ({} generators, {} relation rows, dimension {})",
                output.display(),
                p.generators.len(),
                p.relations.len(),
                p.dim
            );
            Ok(Report::ok(
                json!({"path": output.display().to_string(), "presentation": v}),
                human,
            ))
        }),
    }
}

fn composition(ks: &[usize]) -> Result<MzvComposition, Failure> {
    MzvComposition::new(ks.to_vec()).map_err(|e| {
        usage(format!("{e}; compositions are written k_1 .. k_r with k_r >= 2, so zeta(2,1) in the descending convention is `1 2` here"))
    })
}

fn mzv(g: Global, cmd: &MzvCommand) -> CmdResult {
    match cmd {
        MzvCommand::Form { ks } => {
            let c = composition(ks)?;
            let n = c.weight() + 2;
            g.arity(n)?;
            g.weight(c.weight())?;
            let f = mzv_form(&c).map_err(failed)?;
            let regular = is_regular(&f.form);
            let adelta = handle_adelta(g.caps());
            let coords = adelta.from_arnold(&f.form, n - 2)?;
            let coords_json: Vec<Value> = coords
                .iter()
                .map(|(gen, x)| json!({"generator": adelta.label(gen), "c": scalar::format(x)}))
                .collect();
            let coords_text: Vec<String> = coords
                .iter()
                .map(|(gen, x)| format!("{}*{}", scalar::format(x), adelta.label(gen)))
                .collect();
            let json = json!({
                "composition": c.ks,
                "label": c.label(),
                "form": f.form.to_json(),
                "adelta": {"regular": regular, "coordinates": coords_json},
            });
            let human = format!(
                "{} in arity {n}: {}\nregular (all residues vanish): {regular}\nadelta coordinates: {}",
                c.label(),
                f.form.to_text(),
                coords_text.join(" + ")
            );
            Ok(Report {
                json,
                human,
                verified: regular,
            })
        }
        MzvCommand::Numeric { ks, eps } => {
            let c = composition(ks)?;
            if !(*eps > 0.0) {
                return Err(usage("eps must be positive"));
            }
            let z = zeta_numeric(&c, *eps);
            let json = json!({"composition": c.ks, "value": z.value, "error_bound": z.error_bound, "terms": z.terms});
            let human = format!(
                "zeta({}) = {:.15} (error <= {:.1e}, {} terms)",
                ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","),
                z.value,
                z.error_bound,
                z.terms
            );
            Ok(Report::ok(json, human))
        }
    }
}

fn certify(g: Global, cmd: &CertifyCommand) -> CmdResult {
    match cmd {
        CertifyCommand::Decompose { arity, alpha } => {
            g.arity(*arity)?;
            let l = parse_bracketing(alpha).map_err(usage)?;
            let leaves = l.leaves().len();
            if leaves != *arity {
                return Err(usage(format!(
                    "bracketing {alpha} has {leaves} leaves but the arity is {arity}"
                )));
            }
            let coger = handle_coger(g.caps());
            let cert = decompose_bracketing(&coger, &l)?;
            let form = alpha_of(&l).map_err(usage)?;
            let verified = verify_certificate(&coger, &form, &cert)?;
            let json = json!({
                "bracketing": alpha,
                "arity": arity,
                "prime": l.is_prime(),
                "alpha": form.to_json(),
                "certificate": cert.to_json(),
                "decomposes": cert.decomposes(),
                "verified": verified,
            });
            let human = format!(
                "{alpha}: prime {}, certificate {}, decomposes {}, verified {verified}\nalpha = {}",
                l.is_prime(),
                cert.kind(),
                cert.decomposes(),
                form.to_text()
            );
            Ok(Report { json, human, verified })
        }
        CertifyCommand::Grt { weight } => {
            let coger = handle_coger(g.caps());
            let v = grt_image_check(&coger, &g.braid(), *weight, ShuffleMode::Covering)?;
            let human = format!(
                "weight {weight}: {} pentagon class(es), detected by cocycles {}, rank in q_h0(coGer) {} of {}, injective {}",
                v.classes,
                v.detected(),
                v.q_rank,
                v.q_dim,
                v.injective()
            );
            Ok(Report {
                json: v.to_json(),
                human,
                verified: v.injective(),
            })
        }
    }
}

fn named_graph(text: &str) -> Result<Graph, Failure> {
    match text {
        "tripod" => Ok(Graph::tripod()),
        "crossed-pair" => Ok(Graph::crossed_pair()),
        other => {
            let v: Value = serde_json::from_str(other)
                .map_err(|e| usage(format!("expected tripod, crossed-pair or graph JSON: {e}")))?;
            Graph::from_json(&v).map_err(usage)
        }
    }
}

fn element_text(e: &GraphElement) -> String {
    if e.is_zero() {
        return "0".into();
    }
    e.terms
        .iter()
        .map(|(g, c)| format!("{}*{}", scalar::format(c), g))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn graphs(cmd: &GraphsCommand) -> CmdResult {
    match cmd {
        GraphsCommand::Census {
            white,
            black,
            max_edges,
        } => {
            if *white + *black > 8 || *max_edges > 10 {
                return Err(usage("census is limited to 8 vertices and 10 edges"));
            }
            let gs = census(*white, *black, *max_edges);
            let json = json!({
                "white": white,
                "black": black,
                "max_edges": max_edges,
                "count": gs.len(),
                "graphs": gs.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
            });
            let mut human = vec![format!("{} graphs", gs.len())];
            human.extend(gs.iter().map(|g| g.to_string()));
            Ok(Report::ok(json, human.join("\n")))
        }
        GraphsCommand::Differential { graph } => {
            let g = named_graph(graph)?;
            let e = GraphElement::from_graph(&g);
            let d = tw_differential(&e);
            let total = def_total_differential(&e);
            let json = json!({
                "graph": g.to_json(),
                "differential": d.to_json(),
                "total_differential": total.to_json(),
            });
            let human = format!(
                "d({g}) = {}\n(d + d_H)({g}) = {}",
                element_text(&d),
                element_text(&total)
            );
            Ok(Report::ok(json, human))
        }
    }
}

fn run_selfcheck(level: LevelArg, only: Option<usize>) -> CmdResult {
    let level = match level {
        LevelArg::Quick => selfcheck::Level::Quick,
        LevelArg::Full => selfcheck::Level::Full,
    };
    let verdicts = match only {
        Some(id) => vec![selfcheck::run_one(id, level).ok_or_else(|| usage(format!("no criterion {id}")))?],
        None => selfcheck::run(level),
    };
    let passed = verdicts.iter().filter(|v| v.pass).count();
    let mut human: Vec<String> = verdicts.iter().map(|v| v.line()).collect();
    human.push(format!("{passed} of {} criteria passed", verdicts.len()));
    let json = json!({
        "criteria": verdicts.iter().map(|v| v.to_json()).collect::<Vec<_>>(),
        "passed": passed,
        "total": verdicts.len(),
    });
    Ok(Report {
        json,
        human: human.join("\n"),
        verified: passed == verdicts.len(),
    })
}
