//! mvroot: square roots and related functions of multivectors from the shell.
//!
//! Exit codes: 0 success (an empty root set is a valid answer), 2 usage or
//! input error, 3 internal verification failure.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mvroot::algebra::{blade_product, canonical_order, max_diff};
use mvroot::closed_form::{closed_form_any, is_degenerate, same_root_sets};
use mvroot::equations::{mv_inverse, solve_quadratic, solve_riccati, RiccatiProblem, SignChoice, Solutions};
use mvroot::rep::{basis_rep_table, generate_reps_from_idempotent};
use mvroot::{
    format_mv, is_primary, mv_exp, parse_mv, spectral_sqrt, sqrt_minus_one, Multivector, Representation,
    RootReport, RootStatus, Signature, SqrtConfig,
};

#[derive(Parser)]
#[command(name = "mvroot", version, about = "Square roots of multivectors in Cl(p,q), p+q <= 6")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_algebra(s: &str) -> Result<Signature, String> {
    let (p, q) = s
        .split_once(',')
        .ok_or_else(|| format!("expected p,q but got {s:?}"))?;
    let p: usize = p.trim().parse().map_err(|_| format!("bad p in {s:?}"))?;
    let q: usize = q.trim().parse().map_err(|_| format!("bad q in {s:?}"))?;
    Signature::new(p, q).map_err(|e| e.to_string())
}

#[derive(Args, Clone)]
struct Common {
    /// Algebra as p,q (e.g. 3,0)
    #[arg(long, short, value_parser = parse_algebra)]
    algebra: Signature,
    /// Print JSON instead of text
    #[arg(long)]
    json: bool,
    /// Re-squaring tolerance (relative)
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Largest imaginary residue accepted as real (relative)
    #[arg(long, default_value_t = 1e-9)]
    imag_tol: f64,
    /// Step for the perturbation fallback on defective matrices
    #[arg(long, default_value_t = 1e-6)]
    perturb_eps: f64,
}

impl Common {
    fn cfg(&self) -> SqrtConfig {
        SqrtConfig {
            root_tol: self.tol,
            imag_tol: self.imag_tol,
            perturb_eps: self.perturb_eps,
            ..SqrtConfig::default()
        }
    }
    fn mv(&self, text: &str) -> Result<Multivector, Failure> {
        parse_mv(text, self.algebra).map_err(|e| Failure::usage(format!("{text:?}: {e}")))
    }
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct MethodFlags {
    /// Closed formulas only (n <= 3 and supported 4D shapes)
    #[arg(long)]
    closed_form: bool,
    /// Spectral method only
    #[arg(long)]
    spectral: bool,
    /// Spectral method, cross-checked against a closed form when one applies (default)
    #[arg(long)]
    both: bool,
}

#[derive(ValueEnum, Clone, Copy)]
enum Sign {
    Plus,
    Minus,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// All square roots of a multivector
    Sqrt {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        method: MethodFlags,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Square roots of -1
    SqrtMinusOne {
        #[command(flatten)]
        common: Common,
        /// Use the eigenbasis of this multivector instead of the standard one
        #[arg(long, allow_hyphen_values = true)]
        basis: Option<String>,
    },
    /// Exponential of a multivector
    Exp {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// Inverse of a multivector
    Inverse {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        input: String,
    },
    /// X^2 + AX + XA + B = 0
    SolveQuadratic {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// XAX + CX + XC = B with C central
    SolveRiccati {
        #[command(flatten)]
        common: Common,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        c: String,
        /// Root of BA + C^2 to use from each +- pair
        #[arg(long, value_enum, default_value = "both")]
        sign: Sign,
    },
    /// Print the generator matrices of an algebra
    RepTable {
        #[arg(long, short, value_parser = parse_algebra)]
        algebra: Signature,
        #[arg(long)]
        json: bool,
    },
    /// Check the representation: axioms, homomorphism, round trip
    Verify {
        #[arg(long, short, value_parser = parse_algebra)]
        algebra: Signature,
        #[arg(long)]
        json: bool,
    },
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure { code: 2, msg: msg.into() }
    }
    fn verify(msg: impl Into<String>) -> Self {
        Failure { code: 3, msg: msg.into() }
    }
}

fn algebra_json(s: Signature) -> Value {
    json!({ "p": s.p, "q": s.q })
}

fn exact(a: &Multivector) -> String {
    format_mv(a, 17)
}

fn short(a: &Multivector) -> String {
    format!("{:.6}", a.chop(1e-12))
}

fn check_roots(report: &RootReport, tol: f64) -> Result<(), Failure> {
    for b in report.accepted() {
        let r = max_diff(&b.square(), &report.input);
        if !(r <= tol * (1.0 + report.input.max_abs())) {
            return Err(Failure::verify(format!("root {} re-squares with residual {r:e}", exact(b))));
        }
    }
    Ok(())
}

fn report_json(report: &RootReport, method: &str, cross: &str) -> Value {
    let entry = |e: &mvroot::RootEntry| {
        json!({
            "label": e.label,
            "pattern": e.pattern,
            "root": exact(&e.root),
            "coeffs": e.root.coeffs(),
            "residual": e.residual,
            "max_imag": e.max_imag,
            "status": e.status,
        })
    };
    let d = &report.diagnostics;
    json!({
        "version": env!("CARGO_PKG_VERSION"),
        "algebra": algebra_json(report.input.sig()),
        "input": exact(&report.input),
        "method": method,
        "roots": report.accepted_entries().map(entry).collect::<Vec<_>>(),
        "rejected": report.entries.iter().filter(|e| e.status != RootStatus::Accepted).map(entry).collect::<Vec<_>>(),
        "diagnostics": {
            "path": d.method,
            "eigenvalues": d.eigenvalues.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
            "t_condition": d.t_condition,
            "perturbed_blade": d.perturbed_blade,
            "perturb_eps": d.perturb_eps,
            "cross_check": cross,
        },
    })
}

fn print_report(report: &RootReport, method: &str, cross: &str) {
    let s = report.input.sig();
    println!("Cl({},{})  A = {}", s.p, s.q, short(&report.input));
    println!("method: {method} ({})", report.diagnostics.method);
    if !cross.is_empty() {
        println!("cross-check: {cross}");
    }
    let acc: Vec<_> = report.accepted_entries().collect();
    println!("{} root{}", acc.len(), if acc.len() == 1 { "" } else { "s" });
    let mut shown: Vec<&Multivector> = Vec::new();
    for e in &acc {
        let neg = -&e.root;
        if shown.iter().any(|b| max_diff(b, &neg) <= 1e-9 * (1.0 + b.max_abs())) {
            continue;
        }
        shown.push(&e.root);
        println!("  {:<10} ±({})   residual {:.1e}", e.label, short(&e.root), e.residual);
    }
    let count = |st| report.entries.iter().filter(|e| e.status == st).count();
    let (c, r, d) = (
        count(RootStatus::RejectedComplex),
        count(RootStatus::RejectedResidual),
        count(RootStatus::DegenerateSkipped),
    );
    if c + r + d > 0 {
        println!("rejected: {c} complex, {r} residual, {d} unsettled");
    }
}

fn emit(v: Value) {
    // a closed pipe (e.g. `| head`) is not worth a panic
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&v).expect("json"));
}

fn cmd_sqrt(common: &Common, method: MethodFlags, input: &str) -> Result<(), Failure> {
    let a = common.mv(input)?;
    let cfg = common.cfg();
    let (report, name, cross) = if method.closed_form {
        let r = closed_form_any(&a, &cfg)
            .ok_or_else(|| Failure::usage("no closed form for this algebra or multivector shape"))?;
        (r, "closed form", String::new())
    } else {
        let r = spectral_sqrt(&a, &cfg);
        let cross = if method.spectral {
            String::new()
        } else {
            match closed_form_any(&a, &cfg) {
                None => "no closed form available".into(),
                Some(cf) if is_degenerate(&cf) => "skipped (closed form singular here)".into(),
                Some(cf) => {
                    // only primary roots are unique; the rest were re-squared already
                    fn primary<'r>(rep: &'r RootReport, a: &Multivector) -> Vec<&'r Multivector> {
                        rep.accepted().into_iter().filter(|b| is_primary(a, b, 1e-7)).collect()
                    }
                    check_roots(&cf, cfg.root_tol)?;
                    let (ps, pc) = (primary(&r, &a), primary(&cf, &a));
                    if !same_root_sets(&ps, &pc, 1e-6) {
                        if common.json {
                            emit(report_json(&r, "spectral", "mismatch"));
                        } else {
                            print_report(&r, "spectral", "MISMATCH");
                        }
                        return Err(Failure::verify(format!(
                            "closed form gives {} primary roots, spectral {}; the sets differ",
                            pc.len(),
                            ps.len()
                        )));
                    }
                    if ps.len() == r.accepted().len() && pc.len() == cf.accepted().len() {
                        "agrees with closed form".into()
                    } else {
                        format!(
                            "primary roots agree with closed form ({} of {}); the others lie in continuous families",
                            ps.len(),
                            r.accepted().len()
                        )
                    }
                }
            }
        };
        (r, "spectral", cross)
    };
    check_roots(&report, cfg.root_tol)?;
    if common.json {
        emit(report_json(&report, name, &cross));
    } else {
        print_report(&report, name, &cross);
    }
    Ok(())
}

fn cmd_minus_one(common: &Common, basis: Option<&str>) -> Result<(), Failure> {
    let cfg = common.cfg();
    let g = basis.map(|b| common.mv(b)).transpose()?;
    let report = sqrt_minus_one(common.algebra, g.as_ref(), &cfg);
    check_roots(&report, cfg.root_tol)?;
    if common.json {
        emit(report_json(&report, "spectral", ""));
    } else {
        print_report(&report, "spectral", "");
    }
    Ok(())
}

fn single(common: &Common, op: &str, input: &str, result: Result<Multivector, String>) -> Result<(), Failure> {
    let a = common.mv(input)?;
    if common.json {
        let mut v = json!({
            "version": env!("CARGO_PKG_VERSION"),
            "algebra": algebra_json(common.algebra),
            "input": exact(&a),
            "method": op,
        });
        match &result {
            Ok(x) => v["result"] = json!(exact(x)),
            Err(e) => v["error"] = json!(e),
        }
        emit(v);
    } else {
        match &result {
            Ok(x) => println!("{op}({}) = {}", short(&a), short(x)),
            Err(e) => println!("{op}({}): {e}", short(&a)),
        }
    }
    Ok(())
}

fn print_solutions(common: &Common, what: &str, sol: &Solutions) {
    if common.json {
        emit(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "algebra": algebra_json(common.algebra),
            "equation": what,
            "radicand": exact(&sol.radicand.input),
            "solutions": sol.solutions.iter().map(|s| json!({
                "label": s.label,
                "x": exact(&s.x),
                "residual": s.residual,
            })).collect::<Vec<_>>(),
        }));
    } else {
        println!("{what}");
        println!("radicand {} has {} roots", short(&sol.radicand.input), sol.radicand.accepted().len());
        println!("{} solutions", sol.solutions.len());
        for s in &sol.solutions {
            println!("  {:<10} X = {}   residual {:.1e}", s.label, short(&s.x), s.residual);
        }
    }
}

fn cmd_rep_table(sig: Signature, json_out: bool) -> Result<(), Failure> {
    let rep = Representation::get(sig);
    let kind = rep.class.kind;
    let mats: Vec<Vec<Vec<String>>> = rep
        .table
        .iter()
        .map(|g| {
            (0..g.dim)
                .map(|r| (0..g.dim).map(|c| g.entry_string(r, c, kind)).collect())
                .collect()
        })
        .collect();
    if json_out {
        emit(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "algebra": algebra_json(sig),
            "class": rep.class.to_string(),
            "complex_dim": rep.dim(),
            "generators": mats,
        }));
        return Ok(());
    }
    println!("Cl({},{}) = {}   complex dimension {}", sig.p, sig.q, rep.class, rep.dim());
    for (i, m) in mats.iter().enumerate() {
        let w = m.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        println!("e{}:", i + 1);
        for row in m {
            let cells: Vec<String> = row.iter().map(|s| format!("{s:>w$}")).collect();
            println!("  [ {} ]", cells.join("  "));
        }
    }
    Ok(())
}

fn cmd_verify(sig: Signature, json_out: bool) -> Result<(), Failure> {
    let rep = Representation::get(sig);
    let axioms = rep.axiom_failures();
    let generated = matches!(
        (basis_rep_table(sig), generate_reps_from_idempotent(sig)),
        (Ok(t), Ok(g)) if t == g
    );
    // products of basis blades cover the whole (bilinear) homomorphism check
    let blades = canonical_order(sig.n());
    let mut hom = 0.0f64;
    let mut trip = 0.0f64;
    for &x in &blades {
        let mx = rep.blade_matrix(x);
        let back = rep.matrix_to_mv(mx).map_err(|e| Failure::verify(e.to_string()))?;
        trip = trip.max(max_diff(&back.mv, &Multivector::blade(sig, x, 1.0)).max(back.max_imag()));
        for &y in &blades {
            let (z, s) = blade_product(x, y, sig);
            let d = (rep.blade_matrix(z).map(|v| v.scale(s)) - mx * rep.blade_matrix(y)).norm();
            hom = hom.max(d);
        }
    }
    let ok = axioms.is_empty() && generated && hom <= 1e-12 && trip <= 1e-12;
    if json_out {
        emit(json!({
            "version": env!("CARGO_PKG_VERSION"),
            "algebra": algebra_json(sig),
            "class": rep.class.to_string(),
            "axiom_failures": axioms,
            "generated_equals_table": generated,
            "homomorphism_error": hom,
            "round_trip_error": trip,
            "ok": ok,
        }));
    } else {
        println!("Cl({},{}) = {}", sig.p, sig.q, rep.class);
        println!("squares and anticommutation: {}", if axioms.is_empty() { "ok".into() } else { axioms.join(", ") });
        println!("idempotent construction reproduces table: {}", if generated { "ok" } else { "NO" });
        println!("homomorphism on {} blade pairs: max error {hom:.1e}", blades.len() * blades.len());
        println!("matrix -> multivector round trip: max error {trip:.1e}");
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::verify("representation check failed"))
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Sqrt { common, method, input } => cmd_sqrt(&common, method, &input),
        Cmd::SqrtMinusOne { common, basis } => cmd_minus_one(&common, basis.as_deref()),
        Cmd::Exp { common, input } => {
            let a = common.mv(&input)?;
            let r = mv_exp(&a, &common.cfg()).map_err(|e| e.to_string());
            single(&common, "exp", &input, r)
        }
        Cmd::Inverse { common, input } => {
            let a = common.mv(&input)?;
            let r = mv_inverse(&a).map_err(|e| e.to_string());
            single(&common, "inverse", &input, r)
        }
        Cmd::SolveQuadratic { common, a, b } => {
            let (a, b) = (common.mv(&a)?, common.mv(&b)?);
            let sol = solve_quadratic(&a, &b, &common.cfg()).map_err(|e| Failure::usage(e.to_string()))?;
            print_solutions(&common, "X^2 + AX + XA + B = 0", &sol);
            Ok(())
        }
        Cmd::SolveRiccati { common, a, b, c, sign } => {
            let prob = RiccatiProblem {
                a: common.mv(&a)?,
                b: common.mv(&b)?,
                c: common.mv(&c)?,
                sign: match sign {
                    Sign::Plus => SignChoice::Plus,
                    Sign::Minus => SignChoice::Minus,
                    Sign::Both => SignChoice::Both,
                },
            };
            let sol = solve_riccati(&prob, &common.cfg()).map_err(|e| Failure::usage(e.to_string()))?;
            print_solutions(&common, "XAX + CX + XC = B", &sol);
            Ok(())
        }
        Cmd::RepTable { algebra, json } => cmd_rep_table(algebra, json),
        Cmd::Verify { algebra, json } => cmd_verify(algebra, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("mvroot: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn algebra_argument() {
        let s = parse_algebra("3,1").unwrap();
        assert_eq!((s.p, s.q), (3, 1));
        assert!(parse_algebra(" 0 , 2 ").is_ok());
        assert!(parse_algebra("3").is_err());
        assert!(parse_algebra("4,3").is_err());
        assert!(parse_algebra("a,1").is_err());
    }

    #[test]
    fn method_flags_exclusive() {
        assert!(Cli::try_parse_from(["mvroot", "sqrt", "-a", "3,0", "--spectral", "--closed-form", "1"]).is_err());
        assert!(Cli::try_parse_from(["mvroot", "sqrt", "-a", "3,0", "-1 + e1"]).is_ok());
    }
}
