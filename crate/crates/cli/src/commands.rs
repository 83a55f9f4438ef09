use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use toepfactor::exactnum::{GaussianRational as G, Rational};
use toepfactor::factorize::{classify_diagonal3, decompose, verify_decomposition, ToeplitzDecomposition};
use toepfactor::groebner::{
    buchberger, decision_of, realified_system, Budget, Decision, GbStats, Ideal, OrderKind, TermOrder,
};
use toepfactor::io::{self, AnyDecomposition, AnyMatrix, AnySystem, MatrixScalar};
use toepfactor::matrices::DenseMatrix;
use toepfactor::polysys::{build_toeplitz_product_system, verify_diagonal_certificate, Coeff, MultiPoly, PolySystem};
use toepfactor::search::{lm_search, rationalize, Gauge, SearchConfig};
use toepfactor::toeplitz::{chain_solve, SolveMethod, ToeplitzMatrix};

use crate::args::*;
use crate::error::{CliError, EX_DATAERR, EX_SOFTWARE};
use crate::files::{in_file, read_decomposition, read_matrix, read_text, write_decomposition_dir, write_text};

/// Exit status, text report and JSON report of one command.
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: Value,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome { code: 0, text, json }
    }
}

type Res = Result<Outcome, CliError>;

fn show_matrix<S: MatrixScalar>(m: &DenseMatrix<S>) -> String {
    let cells: Vec<String> = m.entries().iter().map(MatrixScalar::format_token).collect();
    let w = cells.iter().map(String::len).max().unwrap_or(1);
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format!("{:>w$}", cells[i * m.cols() + j])).collect();
        let _ = writeln!(out, "  [{}]", row.join(" "));
    }
    out
}

fn matrix_json<S: MatrixScalar>(m: &DenseMatrix<S>) -> Value {
    Value::from(
        (0..m.rows())
            .map(|i| m.row(i).iter().map(MatrixScalar::format_token).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

fn decomposition_text<S: MatrixScalar>(d: &ToeplitzDecomposition<S>) -> String {
    let mut out = String::new();
    if let Some(p) = &d.prefix {
        let _ = writeln!(out, "P =\n{}", show_matrix(p));
    }
    for (k, t) in d.factors.iter().enumerate() {
        let _ = writeln!(out, "T{} =\n{}", k + 1, show_matrix(&t.to_dense()));
    }
    out
}

fn decomposition_json<S: MatrixScalar>(d: &ToeplitzDecomposition<S>) -> Value {
    json!({
        "provenance": d.provenance,
        "prefix": d.prefix.as_ref().map(matrix_json),
        "factors": d.factors.iter().map(|t| t.coeffs().iter().map(MatrixScalar::format_token).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn exact_matrix(m: AnyMatrix, path: &Path) -> Result<DenseMatrix<G>, CliError> {
    match m {
        AnyMatrix::Exact(m) => Ok(m),
        AnyMatrix::Float(_) => Err(CliError::new(
            EX_DATAERR,
            format!("{}: this command needs an exact (gaussrat) matrix", path.display()),
        )),
    }
}

fn square(m: &AnyMatrix, path: &Path) -> Result<(), CliError> {
    if m.rows() != m.cols() || m.rows() == 0 {
        return Err(CliError::new(
            EX_DATAERR,
            format!("{}: expected a nonempty square matrix, found {}x{}", path.display(), m.rows(), m.cols()),
        ));
    }
    Ok(())
}

fn parse_scalar(s: &str) -> Result<G, CliError> {
    G::parse_token(s).map_err(|(off, msg)| CliError::new(EX_DATAERR, format!("scalar '{s}', offset {}: {msg}", off + 1)))
}

fn real_scalar(s: &str) -> Result<Rational, CliError> {
    let g = parse_scalar(s)?;
    if !g.is_real() {
        return Err(CliError::new(EX_DATAERR, format!("scalar '{s}' must be rational here")));
    }
    Ok(g.re)
}

pub fn factor(a: &FactorArgs) -> Res {
    let any = read_matrix(&a.input)?;
    square(&any, &a.input)?;
    let m = exact_matrix(any, &a.input)?;
    let (d, rep) = decompose(&m)?;
    verify_decomposition(&m, &d, 0.0).map_err(|e| CliError::new(EX_SOFTWARE, format!("decomposition failed its check: {e}")))?;
    let stream = io::write_toepdecomp(&d);
    // the written stream must read back to the same decomposition
    match io::parse_toepdecomp(&stream, 0.0) {
        Ok(AnyDecomposition::Exact(back)) if back == d => {}
        _ => return Err(CliError::new(EX_SOFTWARE, "decomposition did not survive serialization")),
    }
    if let Some(out) = &a.out {
        write_text(out, &stream)?;
    }
    if let Some(dir) = &a.out_dir {
        write_decomposition_dir(dir, &d)?;
    }
    let mut text = String::new();
    let _ = writeln!(text, "n = {}, rank = {}", rep.n, rep.rank);
    let _ = writeln!(
        text,
        "{} Toeplitz factor(s){} via {}",
        rep.factors_used,
        if rep.has_prefix { " after an invertible prefix" } else { "" },
        rep.provenance
    );
    let _ = writeln!(
        text,
        "bounds: known upper {}, invertible {}, generic {}; {}",
        rep.known_upper_bound, rep.invertible_bound, rep.generic_bound, rep.lower_bound_note
    );
    text.push_str(&decomposition_text(&d));
    let json = json!({
        "command": "factor",
        "n": rep.n,
        "rank": rep.rank,
        "factors_used": rep.factors_used,
        "has_prefix": rep.has_prefix,
        "provenance": rep.provenance,
        "known_upper_bound": rep.known_upper_bound,
        "invertible_bound": rep.invertible_bound,
        "generic_bound": rep.generic_bound,
        "lower_bound_note": rep.lower_bound_note,
        "verified": true,
        "decomposition": decomposition_json(&d),
    });
    Ok(Outcome::ok(text, json))
}

pub fn verify(a: &VerifyArgs) -> Res {
    let m = read_matrix(&a.input)?;
    square(&m, &a.input)?;
    let d = read_decomposition(&a.decomp, a.tol)?;
    let result = match (&m, &d) {
        (AnyMatrix::Exact(m), AnyDecomposition::Exact(d)) => verify_decomposition(m, d, 0.0).map(|r| (r, true)),
        (m, AnyDecomposition::Float(d)) => {
            let mc = m.to_complex();
            let scale = mc.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
            verify_decomposition(&mc, d, a.tol * (1.0 + scale)).map(|r| (r, false))
        }
        (AnyMatrix::Float(mc), AnyDecomposition::Exact(d)) => {
            let dc = d.map(|g| g.to_complex());
            let scale = mc.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
            verify_decomposition(mc, &dc, a.tol * (1.0 + scale)).map(|r| (r, false))
        }
    };
    match result {
        Ok((r, exact)) => {
            let how = if exact { "exactly".to_string() } else { format!("max deviation {:e}", r.max_deviation) };
            let text = format!(
                "ok: {} factor(s){} reproduce the matrix {how}\n",
                r.factors,
                if r.has_prefix { " and prefix" } else { "" }
            );
            Ok(Outcome::ok(
                text,
                json!({"command": "verify", "ok": true, "exact": exact, "factors": r.factors, "has_prefix": r.has_prefix, "max_deviation": r.max_deviation}),
            ))
        }
        Err(toepfactor::error::Error::VerificationFailed { row, col, deviation }) => Ok(Outcome {
            code: 1,
            text: format!("mismatch at row {}, column {} (deviation {deviation:e})\n", row + 1, col + 1),
            json: json!({"command": "verify", "ok": false, "row": row + 1, "col": col + 1, "deviation": deviation}),
        }),
        Err(e) => Err(e.into()),
    }
}

pub fn classify_diag3(a: &ClassifyArgs) -> Res {
    let (d, e, f) = (parse_scalar(&a.d)?, parse_scalar(&a.e)?, parse_scalar(&a.f)?);
    let (k, dec) = classify_diagonal3(&d, &e, &f)?;
    let m = DenseMatrix::diag(&[d.clone(), e.clone(), f.clone()]);
    verify_decomposition(&m, &dec, 0.0).map_err(|e| CliError::new(EX_SOFTWARE, e.to_string()))?;
    let text = format!("Toep = {k}\n{}", decomposition_text(&dec));
    let json = json!({
        "command": "classify-diag3",
        "diagonal": [d.to_string(), e.to_string(), f.to_string()],
        "toep": k,
        "decomposition": decomposition_json(&dec),
    });
    Ok(Outcome::ok(text, json))
}

pub fn certify_diag3(a: &CertifyArgs) -> Res {
    let cert = match verify_diagonal_certificate() {
        Ok(c) => c,
        Err(toepfactor::error::Error::CertificateMismatch(diff)) => {
            return Ok(Outcome {
                code: 1,
                text: format!("certificate mismatch; sum q_i p_i - rhs = {diff}\n"),
                json: json!({"command": "certify-diag3", "verified": false, "difference": diff}),
            })
        }
        Err(e) => return Err(e.into()),
    };
    let mut text = format!("verified: sum_{{i=1}}^{{9}} q_i p_i = {}\n", cert.rhs);
    for (i, (p, q)) in cert.system.generators.iter().zip(&cert.multipliers).enumerate() {
        let _ = writeln!(text, "p{} = {p}", i + 1);
        let _ = writeln!(text, "q{} = {q}", i + 1);
    }
    let mut json = json!({
        "command": "certify-diag3",
        "verified": true,
        "rhs": cert.rhs.to_string(),
        "p": cert.system.generators.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "q": cert.multipliers.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
    });
    if let Some(at) = &a.at {
        let (d, e, f) = (real_scalar(&at[0])?, real_scalar(&at[1])?, real_scalar(&at[2])?);
        match cert.scaled(&d, &e, &f)? {
            None => {
                let _ = writeln!(text, "at ({d}, {e}, {f}) the right-hand side vanishes; no conclusion");
                json["at"] = json!({"point": [d.to_string(), e.to_string(), f.to_string()], "applies": false});
            }
            Some(qs) => {
                let vals = [("d", d.clone()), ("e", e.clone()), ("f", f.clone())];
                let ring = cert.system.ring.clone();
                let mut sum = MultiPoly::zero(&ring);
                for (q, p) in qs.iter().zip(&cert.system.generators) {
                    sum = sum.add(&q.mul(&p.substitute_values(&vals)?)?)?;
                }
                let one = sum == MultiPoly::constant(&ring, Rational::one());
                let _ = writeln!(
                    text,
                    "at ({d}, {e}, {f}): sum q_i p_i = {sum}, so diag({d}, {e}, {f}) is not a product of two Toeplitz matrices"
                );
                json["at"] = json!({
                    "point": [d.to_string(), e.to_string(), f.to_string()],
                    "applies": true,
                    "identity_is_one": one,
                    "q": qs.iter().map(|q| q.to_string()).collect::<Vec<_>>(),
                });
                if !one {
                    return Err(CliError::new(EX_SOFTWARE, "specialized certificate does not sum to 1"));
                }
            }
        }
    }
    Ok(Outcome::ok(text, json))
}

enum EitherSystem {
    Rat(PolySystem<Rational>),
    Gauss(PolySystem<G>),
}

fn system_for(m: &DenseMatrix<G>, s: usize) -> Result<EitherSystem, CliError> {
    if m.entries().iter().all(G::is_real) {
        Ok(EitherSystem::Rat(build_toeplitz_product_system(&m.map(|v| v.re.clone()), s)?))
    } else {
        Ok(EitherSystem::Gauss(build_toeplitz_product_system(m, s)?))
    }
}

fn system_json<C: Coeff>(sys: &PolySystem<C>) -> Value {
    json!({
        "n": sys.n,
        "s": sys.s,
        "field": C::FIELD.name(),
        "vars": sys.ring.vars(),
        "generators": sys.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
    })
}

pub fn emit_system(a: &EmitArgs) -> Res {
    let any = read_matrix(&a.input)?;
    square(&any, &a.input)?;
    let m = exact_matrix(any, &a.input)?;
    let sys = system_for(&m, a.s)?;
    let (text_sys, sage, mut json) = match &sys {
        EitherSystem::Rat(s) => (io::write_toepsys(s), io::write_sage(s), system_json(s)),
        EitherSystem::Gauss(s) => (io::write_toepsys(s), io::write_sage(s), system_json(s)),
    };
    json["command"] = json!("emit-system");
    let mut text = String::new();
    match &a.out {
        Some(out) => {
            write_text(out, &text_sys)?;
            let _ = writeln!(text, "wrote {}", out.display());
        }
        None => text.push_str(&text_sys),
    }
    if a.cas.is_some() {
        let target = a.cas_out.clone().or_else(|| a.out.as_ref().map(|o| o.with_extension("sage")));
        match target {
            Some(p) => {
                write_text(&p, &sage)?;
                let _ = writeln!(text, "wrote {}", p.display());
                json["cas_out"] = json!(p.display().to_string());
            }
            None => {
                text.push_str(&sage);
                json["sage"] = json!(sage);
            }
        }
    }
    Ok(Outcome::ok(text, json))
}

fn budget_from(a: &DecideArgs) -> Result<Budget, CliError> {
    let steps = match a.budget {
        Some(b) => b,
        None => match std::env::var("TOEPFACTOR_BUDGET") {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::usage(format!("TOEPFACTOR_BUDGET must be a step count, found '{v}'")))?,
            Err(_) => Budget::default().max_steps,
        },
    };
    Ok(Budget {
        max_steps: steps,
        max_degree: a.max_degree,
    })
}

fn run_decision<C: Coeff>(ideal: Ideal<C>, a: &DecideArgs, budget: &Budget) -> Res {
    let kind = match a.order {
        OrderArg::Degrevlex => OrderKind::DegRevLex,
        OrderArg::Lex => OrderKind::Lex,
    };
    let n = ideal.ring().nvars();
    let ideal = ideal.with_order(TermOrder::new(kind, n))?;
    let started = Instant::now();
    let r = buchberger(&ideal, budget);
    let elapsed = started.elapsed().as_secs_f64();
    let decision = decision_of(&r);
    let stats: GbStats = match &r {
        Ok(gb) => gb.stats,
        Err(e) => e.stats,
    };
    let mut text = format!("decision: {decision}\n");
    let _ = writeln!(text, "field: {}, order: {}, variables: {n}", C::FIELD.name(), kind.name());
    for adj in ideal.adjunctions() {
        let _ = writeln!(text, "adjoined: {adj} = 0");
    }
    let _ = writeln!(text, "stats: {stats}");
    match decision {
        Decision::Factorizable => text.push_str("the ideal is proper, so a factorization exists over the complex numbers\n"),
        Decision::NotFactorizable => text.push_str("1 lies in the ideal: no factorization with this many factors\n"),
        Decision::Inconclusive => {
            let _ = writeln!(text, "budget of {} steps / degree {} exhausted", budget.max_steps, budget.max_degree);
        }
    }
    if let (Some(path), Ok(gb)) = (&a.gb_out, &r) {
        write_text(path, &io::write_toepgb(gb))?;
        let _ = writeln!(text, "wrote {}", path.display());
    }
    let json = json!({
        "command": "decide",
        "decision": decision.name(),
        "field": C::FIELD.name(),
        "order": kind.name(),
        "variables": n,
        "adjoined": ideal.adjunctions().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "budget": {"max_steps": budget.max_steps, "max_degree": budget.max_degree},
        "stats": {
            "pairs_reduced": stats.pairs_reduced,
            "zero_reductions": stats.zero_reductions,
            "reduction_steps": stats.reduction_steps,
            "product_criterion": stats.product_criterion,
            "chain_criterion": stats.chain_criterion,
            "max_degree_seen": stats.max_degree_seen,
            "basis_size": stats.basis_size,
            "pending_pairs": stats.pending_pairs,
        },
        "seconds": elapsed,
    });
    Ok(Outcome {
        code: decision.exit_code(),
        text,
        json,
    })
}

fn with_relations<C: Coeff>(sys: &PolySystem<C>, rels: &[String]) -> Result<Ideal<C>, CliError> {
    let mut ideal = Ideal::from_system(sys);
    for r in rels {
        let p = MultiPoly::parse_expr(&sys.ring, r).map_err(|e| CliError::new(EX_DATAERR, format!("--adjoin '{r}': {e}")))?;
        ideal = ideal
            .with_adjunction(p)
            .map_err(|e| CliError::new(EX_DATAERR, format!("--adjoin '{r}': {e}")))?;
    }
    Ok(ideal)
}

pub fn decide(a: &DecideArgs) -> Res {
    let budget = budget_from(a)?;
    if let Some(path) = &a.system {
        let text = read_text(path)?;
        return match in_file(path, io::parse_toepsys(&text))? {
            AnySystem::Rat(sys) => run_decision(with_relations(&sys, &a.adjoin)?, a, &budget),
            AnySystem::GaussRat(sys) => run_decision(with_relations(&sys, &a.adjoin)?, a, &budget),
        };
    }
    let path = a.input.as_ref().ok_or_else(|| CliError::usage("either --in or --system is required"))?;
    let s = a.s.ok_or_else(|| CliError::usage("--s is required with --in"))?;
    if !a.adjoin.is_empty() {
        return Err(CliError::usage("--adjoin needs a --system file whose variables include the adjoined element"));
    }
    let any = read_matrix(path)?;
    square(&any, path)?;
    let m = exact_matrix(any, path)?;
    if a.realify {
        let (sys, rel) = realified_system(&m, s)?;
        let ideal = Ideal::from_system(&sys).with_adjunction(rel)?;
        return run_decision(ideal, a, &budget);
    }
    match system_for(&m, s)? {
        EitherSystem::Rat(sys) => run_decision(Ideal::from_system(&sys), a, &budget),
        EitherSystem::Gauss(sys) => run_decision(Ideal::from_system(&sys), a, &budget),
    }
}

pub fn search(a: &SearchArgs) -> Res {
    let any = read_matrix(&a.input)?;
    square(&any, &a.input)?;
    let cfg = SearchConfig {
        s: a.s,
        starts: a.starts,
        seed: a.seed,
        max_iters: a.max_iters,
        tol_residual: a.tol,
        tol_step: a.tol_step,
        damping_init: a.damping,
        damping_decay: a.damping_decay,
        gauge: match a.gauge {
            GaugeArg::FixLeading => Gauge::FixLeading,
            GaugeArg::Free => Gauge::Free,
        },
    };
    cfg.validate().map_err(|e| CliError::usage(e.to_string()))?;
    let r = lm_search(&any.to_complex(), &cfg)?;
    let d = r.decomposition();
    let mut text = format!(
        "residual {:e} after {} iteration(s) (best of {} start(s): #{})\n",
        r.residual,
        r.iterations,
        r.starts.len(),
        r.best_start
    );
    let _ = writeln!(text, "converged: {}", r.converged);
    let _ = writeln!(text, "note: {}", r.note);
    text.push_str(&decomposition_text(&d));
    let mut json = json!({
        "command": "search",
        "residual": r.residual,
        "converged": r.converged,
        "iterations": r.iterations,
        "best_start": r.best_start,
        "starts_run": r.starts.len(),
        "starts": r.starts.iter().map(|s| json!({"start": s.start, "residual": s.residual, "iterations": s.iterations, "converged": s.converged})).collect::<Vec<_>>(),
        "note": r.note,
        "decomposition": decomposition_json(&d),
    });
    let mut exact = None;
    if let (Some(maxden), AnyMatrix::Exact(m)) = (a.rationalize, &any) {
        exact = rationalize(&r.factors, m, maxden);
        match &exact {
            Some(e) => {
                let _ = writeln!(text, "rationalized and verified exactly:\n{}", decomposition_text(e));
                json["rationalized"] = decomposition_json(e);
            }
            None => {
                text.push_str("rationalization did not verify exactly; keeping the float factors\n");
                json["rationalized"] = Value::Null;
            }
        }
    }
    if let Some(dir) = &a.out {
        write_decomposition_dir(dir, &d)?;
        if let Some(e) = &exact {
            write_text(&dir.join("rational.toepdecomp"), &io::write_toepdecomp(e))?;
        }
        let _ = writeln!(text, "wrote {}", dir.display());
    }
    Ok(Outcome {
        code: if r.converged { 0 } else { 1 },
        text,
        json,
    })
}

fn column<S: MatrixScalar>(m: &DenseMatrix<S>, n: usize, path: &Path) -> Result<Vec<S>, CliError> {
    if m.rows() != n || m.cols() != 1 {
        return Err(CliError::new(
            EX_DATAERR,
            format!("{}: right-hand side must be {n}x1, found {}x{}", path.display(), m.rows(), m.cols()),
        ));
    }
    Ok(m.column(0))
}

fn methods_json(methods: &[SolveMethod]) -> Value {
    Value::from(
        methods
            .iter()
            .map(|m| match m {
                SolveMethod::Levinson => "levinson",
                SolveMethod::DenseLu => "dense-lu",
            })
            .collect::<Vec<_>>(),
    )
}

pub fn solve(a: &SolveArgs) -> Res {
    let d = read_decomposition(&a.decomp, 1e-9)?;
    let rhs = read_matrix(&a.rhs)?;
    let original = match &a.input {
        Some(p) => Some(read_matrix(p)?),
        None => None,
    };
    let (x_text, x_json, methods, mults, residual) = match (&d, &rhs) {
        (AnyDecomposition::Exact(d), AnyMatrix::Exact(b)) => {
            let n = d.size().unwrap_or(0);
            let b = column(b, n, &a.rhs)?;
            let sol = chain_solve(d, &b)?;
            let xm = DenseMatrix::new(n, 1, sol.x.clone())?;
            let residual = match &original {
                Some(AnyMatrix::Exact(m)) => Some(if m.mul_vec(&sol.x)? == b { 0.0 } else { f64::INFINITY }),
                Some(AnyMatrix::Float(m)) => Some(max_residual(m, &xm.map(|g| g.to_complex()).column(0), &b.iter().map(G::to_complex).collect::<Vec<_>>())?),
                None => None,
            };
            (io::write_toepmat(&xm), matrix_json(&xm), sol.methods, sol.mults, residual)
        }
        _ => {
            let d = match &d {
                AnyDecomposition::Exact(d) => d.map(|g| g.to_complex()),
                AnyDecomposition::Float(d) => d.clone(),
            };
            let n = d.size().unwrap_or(0);
            let b = column(&rhs.to_complex(), n, &a.rhs)?;
            let sol = chain_solve(&d, &b)?;
            let xm = DenseMatrix::new(n, 1, sol.x.clone())?;
            let residual = match &original {
                Some(m) => Some(max_residual(&m.to_complex(), &sol.x, &b)?),
                None => None,
            };
            (io::write_toepmat(&xm), matrix_json(&xm), sol.methods, sol.mults, residual)
        }
    };
    let mut text = String::new();
    let names: Vec<&str> = methods
        .iter()
        .map(|m| match m {
            SolveMethod::Levinson => "levinson",
            SolveMethod::DenseLu => "dense-lu",
        })
        .collect();
    let _ = writeln!(text, "factor solves: {} ({} multiplications)", names.join(", "), mults);
    if let Some(r) = residual {
        let _ = writeln!(text, "max |M x - b| = {r:e}");
    }
    match &a.out {
        Some(p) => {
            write_text(p, &x_text)?;
            let _ = writeln!(text, "wrote {}", p.display());
        }
        None => text.push_str(&x_text),
    }
    Ok(Outcome::ok(
        text,
        json!({"command": "solve", "x": x_json, "methods": methods_json(&methods), "multiplications": mults, "residual": residual}),
    ))
}

fn max_residual(m: &DenseMatrix<Complex64>, x: &[Complex64], b: &[Complex64]) -> Result<f64, CliError> {
    let mx = m.mul_vec(x)?;
    Ok(mx.iter().zip(b).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max))
}

/// Least-squares slope of `log y` against `log x`.
pub fn growth_exponent(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

pub fn bench(a: &BenchArgs) -> Res {
    if a.n_list.is_empty() || a.n_list.contains(&0) {
        return Err(CliError::usage("--n-list needs positive sizes"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut rows = Vec::new();
    let mut text = String::from("      n   levinson_mults         lu_mults    ratio   rel_diff  levinson_ms     lu_ms\n");
    for &n in &a.n_list {
        // diagonally dominant, hence strongly regular
        let coeffs: Vec<Complex64> = (0..2 * n - 1)
            .map(|j| {
                let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                if j == n - 1 {
                    v + Complex64::new(4.0 * n as f64, 0.0)
                } else {
                    v
                }
            })
            .collect();
        let t = ToeplitzMatrix::new(n, coeffs)?;
        let b: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let t0 = Instant::now();
        let (xl, ml) = t.levinson_solve_counted(&b)?;
        let tl = t0.elapsed().as_secs_f64() * 1e3;
        let dense = t.to_dense();
        let t0 = Instant::now();
        let (xd, md) = dense.solve_counted(&b)?;
        let td = t0.elapsed().as_secs_f64() * 1e3;
        let diff = xl.iter().zip(&xd).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max);
        let scale = xd.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let rel = diff / scale;
        let _ = writeln!(
            text,
            "{n:>7} {ml:>16} {md:>16} {:>8.2} {rel:>10.2e} {tl:>12.3} {td:>9.3}",
            md as f64 / ml as f64
        );
        rows.push(json!({"n": n, "levinson_mults": ml, "lu_mults": md, "rel_diff": rel, "levinson_ms": tl, "lu_ms": td}));
    }
    let mut json = json!({"command": "bench", "rows": rows});
    if a.n_list.len() >= 2 {
        let ns: Vec<f64> = a.n_list.iter().map(|&n| n as f64).collect();
        let get = |key: &str| -> Vec<f64> { json["rows"].as_array().expect("rows").iter().map(|r| r[key].as_f64().expect("count")).collect() };
        let el = growth_exponent(&ns, &get("levinson_mults"));
        let ed = growth_exponent(&ns, &get("lu_mults"));
        let _ = writeln!(text, "growth exponent: levinson {el:.3}, dense LU {ed:.3}");
        json["levinson_exponent"] = json!(el);
        json["lu_exponent"] = json!(ed);
    }
    Ok(Outcome::ok(text, json))
}
