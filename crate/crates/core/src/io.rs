//! Text formats: `toepmat v1` matrices, `toepdecomp v1` decompositions,
//! `toepsys v1` polynomial systems and `toepgb v1` bases.
//!
//! Line and column numbers in parse errors are 1-based. Lines starting with
//! `#` and blank lines are skipped everywhere except inside a matrix body.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exactnum::{GaussianRational, Rational};
use crate::factorize::ToeplitzDecomposition;
use crate::groebner::{GroebnerBasis, OrderKind, TermOrder};
use crate::matrices::DenseMatrix;
use crate::polysys::{Coeff, FieldTag, MultiPoly, PolySystem, Ring};
use crate::scalar::Scalar;
use crate::toeplitz::ToeplitzMatrix;

/// Scalars with a `toepmat` field name and token grammar.
pub trait MatrixScalar: Scalar {
    const FIELD_NAME: &'static str;
    fn format_token(&self) -> String;
    /// On failure, the byte offset inside the token and a message.
    fn parse_token(tok: &str) -> std::result::Result<Self, (usize, String)>;
}

impl MatrixScalar for GaussianRational {
    const FIELD_NAME: &'static str = "gaussrat";

    fn format_token(&self) -> String {
        self.to_string()
    }

    fn parse_token(tok: &str) -> std::result::Result<Self, (usize, String)> {
        GaussianRational::parse_token(tok)
    }
}

impl MatrixScalar for Complex64 {
    const FIELD_NAME: &'static str = "complexf64";

    fn format_token(&self) -> String {
        if self.im == 0.0 {
            format!("{:?}", self.re)
        } else if self.im.is_sign_negative() {
            format!("{:?}-{:?}i", self.re, -self.im)
        } else {
            format!("{:?}+{:?}i", self.re, self.im)
        }
    }

    fn parse_token(tok: &str) -> std::result::Result<Self, (usize, String)> {
        let real = |s: &str, at: usize| -> std::result::Result<f64, (usize, String)> {
            if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit() || b"+-.eE".contains(&b)) {
                return Err((at, format!("bad real '{s}'")));
            }
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| (at, format!("bad real '{s}'")))
        };
        let Some(body) = tok.strip_suffix('i') else {
            return real(tok, 0).map(|re| Complex64::new(re, 0.0));
        };
        // split at a sign that is neither leading nor an exponent sign
        let b = body.as_bytes();
        let split = (1..b.len()).rev().find(|&p| (b[p] == b'+' || b[p] == b'-') && !matches!(b[p - 1], b'e' | b'E'));
        match split {
            None => real(body, 0).map(|im| Complex64::new(0.0, im)),
            Some(p) => {
                let re = real(&body[..p], 0)?;
                let im = real(&body[p..], p)?;
                Ok(Complex64::new(re, im))
            }
        }
    }
}

/// A matrix read from a file, in whichever field the header declared.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMatrix {
    Exact(DenseMatrix<GaussianRational>),
    Float(DenseMatrix<Complex64>),
}

impl AnyMatrix {
    pub fn rows(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.rows(),
            AnyMatrix::Float(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            AnyMatrix::Exact(m) => m.cols(),
            AnyMatrix::Float(m) => m.cols(),
        }
    }

    pub fn to_complex(&self) -> DenseMatrix<Complex64> {
        match self {
            AnyMatrix::Exact(m) => m.to_complex(),
            AnyMatrix::Float(m) => m.clone(),
        }
    }
}

/// Lines with their 1-based numbers; skips comments and blanks on request.
struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(src: &'a str) -> Self {
        Lines {
            inner: src.lines().enumerate().peekable(),
            last: 0,
        }
    }

    fn next_raw(&mut self) -> Option<(usize, &'a str)> {
        let (i, l) = self.inner.next()?;
        self.last = i + 1;
        Some((i + 1, l))
    }

    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        loop {
            let (n, l) = self.next_raw()?;
            let t = l.trim();
            if !t.is_empty() && !t.starts_with('#') {
                return Some((n, l));
            }
        }
    }

    fn eof_error(&self, what: &str) -> Error {
        Error::parse(self.last + 1, 1, format!("unexpected end of input, expected {what}"))
    }
}

/// Whitespace-separated tokens with their 1-based columns (in characters).
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (ci, (bi, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((ci, bi)),
            (true, Some((c0, b0))) => {
                out.push((c0 + 1, &line[b0..bi]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c0, b0)) = start {
        out.push((c0 + 1, &line[b0..]));
    }
    out
}

fn parse_usize(tok: (usize, &str), line: usize, what: &str) -> Result<usize> {
    tok.1
        .parse()
        .map_err(|_| Error::parse(line, tok.0, format!("expected {what}, found '{}'", tok.1)))
}

fn parse_header<'a>(lines: &mut Lines<'a>, magic: &str) -> Result<(usize, Vec<(usize, &'a str)>)> {
    let (ln, l) = lines.next_content().ok_or_else(|| lines.eof_error(magic))?;
    let toks = tokens(l);
    if toks.first().map(|t| t.1) != Some(magic) {
        let col = toks.first().map_or(1, |t| t.0);
        return Err(Error::parse(ln, col, format!("expected '{magic}' header")));
    }
    match toks.get(1) {
        Some((_, "v1")) => {}
        Some((c, v)) => return Err(Error::parse(ln, *c, format!("unsupported version '{v}'"))),
        None => return Err(Error::parse(ln, l.len() + 1, "missing version")),
    }
    Ok((ln, toks))
}

fn matrix_body<S: MatrixScalar>(lines: &mut Lines<'_>, rows: usize, cols: usize) -> Result<DenseMatrix<S>> {
    let mut entries = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (ln, l) = lines
            .next_raw()
            .ok_or_else(|| lines.eof_error(&format!("row {} of {rows}", r + 1)))?;
        let toks = tokens(l);
        if toks.len() != cols {
            let col = toks.get(cols).map_or(l.chars().count() + 1, |t| t.0);
            return Err(Error::parse(
                ln,
                col,
                format!("expected {cols} entries, found {}", toks.len()),
            ));
        }
        for (c, t) in toks {
            let v = S::parse_token(t).map_err(|(off, msg)| Error::parse(ln, c + t[..off.min(t.len())].chars().count(), msg))?;
            entries.push(v);
        }
    }
    DenseMatrix::new(rows, cols, entries)
}

fn read_toepmat_block(lines: &mut Lines<'_>) -> Result<AnyMatrix> {
    let (ln, toks) = parse_header(lines, "toepmat")?;
    if toks.len() != 5 {
        let col = toks.get(5).map_or(toks.last().map_or(1, |t| t.0 + t.1.len()), |t| t.0);
        return Err(Error::parse(ln, col, "header is 'toepmat v1 <rows> <cols> <field>'"));
    }
    let rows = parse_usize(toks[2], ln, "row count")?;
    let cols = parse_usize(toks[3], ln, "column count")?;
    match toks[4].1 {
        "gaussrat" => Ok(AnyMatrix::Exact(matrix_body(lines, rows, cols)?)),
        "complexf64" => Ok(AnyMatrix::Float(matrix_body(lines, rows, cols)?)),
        other => Err(Error::parse(ln, toks[4].0, format!("unknown field '{other}'"))),
    }
}

/// Parses one `toepmat v1` matrix; anything after it except comments is an
/// error.
pub fn parse_toepmat(src: &str) -> Result<AnyMatrix> {
    let mut lines = Lines::new(src);
    let m = read_toepmat_block(&mut lines)?;
    if let Some((ln, _)) = lines.next_content() {
        return Err(Error::parse(ln, 1, "trailing content after matrix"));
    }
    Ok(m)
}

pub fn write_toepmat<S: MatrixScalar>(m: &DenseMatrix<S>) -> String {
    let mut out = format!("toepmat v1 {} {} {}\n", m.rows(), m.cols(), S::FIELD_NAME);
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(MatrixScalar::format_token).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// A decomposition read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyDecomposition {
    Exact(ToeplitzDecomposition<GaussianRational>),
    Float(ToeplitzDecomposition<Complex64>),
}

/// `toepdecomp v1 <n> <k> <has_prefix>`, an optional `# provenance: …`
/// comment, then the prefix block (preceded by a `prefix` line) when present
/// and `k` factor blocks, each a `toepmat v1` matrix.
pub fn write_toepdecomp<S: MatrixScalar>(d: &ToeplitzDecomposition<S>) -> String {
    let n = d.size().unwrap_or(0);
    let mut out = format!("toepdecomp v1 {n} {} {}\n", d.factors.len(), d.prefix.is_some());
    if !d.provenance.is_empty() {
        out.push_str(&format!("# provenance: {}\n", d.provenance));
    }
    if let Some(p) = &d.prefix {
        out.push_str("prefix\n");
        out.push_str(&write_toepmat(p));
    }
    for t in &d.factors {
        out.push_str(&write_toepmat(&t.to_dense()));
    }
    out
}

fn into_exact(m: AnyMatrix, ln: usize) -> Result<DenseMatrix<GaussianRational>> {
    match m {
        AnyMatrix::Exact(m) => Ok(m),
        AnyMatrix::Float(_) => Err(Error::parse(ln, 1, "mixed fields in one decomposition")),
    }
}

fn into_float(m: AnyMatrix, ln: usize) -> Result<DenseMatrix<Complex64>> {
    match m {
        AnyMatrix::Float(m) => Ok(m),
        AnyMatrix::Exact(_) => Err(Error::parse(ln, 1, "mixed fields in one decomposition")),
    }
}

/// Parses a `toepdecomp v1` stream. Factor blocks are checked to be
/// Toeplitz (exactly, or within `tol` relative to their largest entry for
/// float blocks).
pub fn parse_toepdecomp(src: &str, tol: f64) -> Result<AnyDecomposition> {
    let mut lines = Lines::new(src);
    let (ln, toks) = parse_header(&mut lines, "toepdecomp")?;
    if toks.len() != 5 {
        return Err(Error::parse(ln, 1, "header is 'toepdecomp v1 <n> <num_factors> <has_prefix>'"));
    }
    let n = parse_usize(toks[2], ln, "matrix size")?;
    let k = parse_usize(toks[3], ln, "factor count")?;
    let has_prefix = match toks[4].1 {
        "true" | "1" => true,
        "false" | "0" => false,
        other => return Err(Error::parse(ln, toks[4].0, format!("expected true or false, found '{other}'"))),
    };
    let mut provenance = String::new();
    // provenance comment, if any, sits right after the header
    let mut blocks: Vec<(usize, AnyMatrix)> = Vec::new();
    let mut prefix: Option<(usize, AnyMatrix)> = None;
    let mut expect_prefix = has_prefix;
    loop {
        let Some(&(i, l)) = lines.inner.peek() else { break };
        let t = l.trim();
        if t.is_empty() || t.starts_with('#') {
            if let Some(p) = t.strip_prefix("# provenance:") {
                provenance = p.trim().to_string();
            }
            lines.next_raw();
            continue;
        }
        if expect_prefix {
            if t != "prefix" {
                return Err(Error::parse(i + 1, 1, "expected 'prefix' tag"));
            }
            lines.next_raw();
            let at = lines.last + 1;
            prefix = Some((at, read_toepmat_block(&mut lines)?));
            expect_prefix = false;
            continue;
        }
        let at = i + 1;
        blocks.push((at, read_toepmat_block(&mut lines)?));
    }
    if expect_prefix {
        return Err(lines.eof_error("prefix block"));
    }
    if blocks.len() != k {
        return Err(Error::parse(lines.last + 1, 1, format!("expected {k} factor blocks, found {}", blocks.len())));
    }
    let check_size = |ln: usize, m: &AnyMatrix| {
        if m.rows() != n || m.cols() != n {
            Err(Error::parse(ln, 1, format!("block is {}x{}, expected {n}x{n}", m.rows(), m.cols())))
        } else {
            Ok(())
        }
    };
    let exact = match blocks.first().or(prefix.as_ref()) {
        Some((_, AnyMatrix::Float(_))) => false,
        _ => true,
    };
    for (ln, m) in prefix.iter().chain(&blocks) {
        check_size(*ln, m)?;
    }
    if exact {
        let prefix = prefix.map(|(ln, m)| into_exact(m, ln)).transpose()?;
        let factors = blocks
            .into_iter()
            .map(|(ln, m)| ToeplitzMatrix::from_dense(&into_exact(m, ln)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyDecomposition::Exact(ToeplitzDecomposition::new(prefix, factors, provenance)))
    } else {
        let prefix = prefix.map(|(ln, m)| into_float(m, ln)).transpose()?;
        let factors = blocks
            .into_iter()
            .map(|(ln, m)| {
                let m = into_float(m, ln)?;
                let scale = m.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
                ToeplitzMatrix::from_dense_tol(&m, tol * (1.0 + scale))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(AnyDecomposition::Float(ToeplitzDecomposition::new(prefix, factors, provenance)))
    }
}

/// A polynomial system read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum AnySystem {
    Rat(PolySystem<Rational>),
    GaussRat(PolySystem<GaussianRational>),
}

fn vars_line(ring: &Ring) -> String {
    format!("vars: {}\n", ring.vars().join(" "))
}

pub fn write_toepsys<C: Coeff>(sys: &PolySystem<C>) -> String {
    let mut out = format!("toepsys v1 n={} s={} field={}\n", sys.n, sys.s, C::FIELD.name());
    out.push_str(&vars_line(&sys.ring));
    for g in &sys.generators {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

fn key_value<'a>(tok: (usize, &'a str), key: &str, ln: usize) -> Result<&'a str> {
    tok.1
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .ok_or_else(|| Error::parse(ln, tok.0, format!("expected {key}=<value>")))
}

fn read_vars(lines: &mut Lines<'_>, field: FieldTag) -> Result<Arc<Ring>> {
    let (ln, l) = lines.next_content().ok_or_else(|| lines.eof_error("vars line"))?;
    let toks = tokens(l);
    if toks.first().map(|t| t.1) != Some("vars:") {
        return Err(Error::parse(ln, toks.first().map_or(1, |t| t.0), "expected 'vars:'"));
    }
    Ring::new(toks[1..].iter().map(|t| t.1.to_string()).collect(), field).map_err(|e| match e {
        Error::BadParameter(msg) => Error::parse(ln, 1, msg),
        other => other,
    })
}

fn read_polys<C: Coeff>(lines: &mut Lines<'_>, ring: &Arc<Ring>) -> Result<Vec<MultiPoly<C>>> {
    let mut out = Vec::new();
    while let Some((ln, l)) = lines.next_content() {
        let p = MultiPoly::parse_expr(ring, l).map_err(|e| match e {
            Error::Parse { col, msg, .. } => Error::parse(ln, col, msg),
            other => other,
        })?;
        out.push(p);
    }
    Ok(out)
}

fn system_from_parts<C: Coeff>(ring: Arc<Ring>, generators: Vec<MultiPoly<C>>, n: usize, s: usize, ln: usize) -> Result<PolySystem<C>> {
    if generators.len() != n * n {
        return Err(Error::parse(ln, 1, format!("expected {} generators, found {}", n * n, generators.len())));
    }
    let deg = s as u32;
    let source = generators
        .iter()
        .map(|g| {
            let rest = g.sub(&g.homogeneous_part(deg)).expect("same ring");
            rest.neg().to_string()
        })
        .collect();
    Ok(PolySystem {
        ring,
        generators,
        n,
        s,
        source,
    })
}

pub fn parse_toepsys(src: &str) -> Result<AnySystem> {
    let mut lines = Lines::new(src);
    let (ln, toks) = parse_header(&mut lines, "toepsys")?;
    if toks.len() != 5 {
        return Err(Error::parse(ln, 1, "header is 'toepsys v1 n=<n> s=<s> field=<rat|gaussrat>'"));
    }
    let n = parse_usize((toks[2].0, key_value(toks[2], "n", ln)?), ln, "n")?;
    let s = parse_usize((toks[3].0, key_value(toks[3], "s", ln)?), ln, "s")?;
    let fname = key_value(toks[4], "field", ln)?;
    let field = FieldTag::from_name(fname).ok_or_else(|| Error::parse(ln, toks[4].0, format!("unknown field '{fname}'")))?;
    let ring = read_vars(&mut lines, field)?;
    Ok(match field {
        FieldTag::Rat => {
            let g = read_polys::<Rational>(&mut lines, &ring)?;
            AnySystem::Rat(system_from_parts(ring, g, n, s, lines.last)?)
        }
        FieldTag::GaussRat => {
            let g = read_polys::<GaussianRational>(&mut lines, &ring)?;
            AnySystem::GaussRat(system_from_parts(ring, g, n, s, lines.last)?)
        }
    })
}

/// `toepgb v1 order=<kind> reduced=true`, the variable line, then one basis
/// element per line. A non-identity variable ranking is recorded in a
/// `# ranking:` comment.
pub fn write_toepgb<C: Coeff>(gb: &GroebnerBasis<C>) -> String {
    let mut out = format!("toepgb v1 order={} reduced=true\n", gb.order.kind.name());
    let perm = gb.order.permutation();
    if perm.iter().enumerate().any(|(i, &p)| i != p) {
        let names: Vec<&str> = perm.iter().map(|&p| gb.ring.vars()[p].as_str()).collect();
        out.push_str(&format!("# ranking: {}\n", names.join(" > ")));
    }
    out.push_str(&format!("# field: {}\n", C::FIELD.name()));
    out.push_str(&vars_line(&gb.ring));
    for p in &gb.polys {
        out.push_str(&format_in_order(&gb.ring, &gb.order.sorted(p)));
        out.push('\n');
    }
    out
}

/// Terms in the given order with the polynomial line grammar.
fn format_in_order<C: Coeff>(ring: &Ring, terms: &[(Vec<u32>, C)]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|(e, c)| {
            let mut t = c.to_string();
            for (v, &k) in ring.vars().iter().zip(e) {
                match k {
                    0 => {}
                    1 => t.push_str(&format!("*{v}")),
                    _ => t.push_str(&format!("*{v}^{k}")),
                }
            }
            t
        })
        .collect();
    parts.join(" + ")
}

/// Reads a `toepgb v1` file with rational coefficients.
pub fn parse_toepgb_rat(src: &str) -> Result<(TermOrder, Arc<Ring>, Vec<MultiPoly<Rational>>)> {
    let mut lines = Lines::new(src);
    let (ln, toks) = parse_header(&mut lines, "toepgb")?;
    if toks.len() != 4 {
        return Err(Error::parse(ln, 1, "header is 'toepgb v1 order=<degrevlex|lex> reduced=true'"));
    }
    let kind_name = key_value(toks[2], "order", ln)?;
    let kind = OrderKind::from_name(kind_name).ok_or_else(|| Error::parse(ln, toks[2].0, format!("unknown order '{kind_name}'")))?;
    if key_value(toks[3], "reduced", ln)? != "true" {
        return Err(Error::parse(ln, toks[3].0, "only reduced bases are supported"));
    }
    let ring = read_vars(&mut lines, FieldTag::Rat)?;
    let polys = read_polys(&mut lines, &ring)?;
    Ok((TermOrder::new(kind, ring.nvars()), ring, polys))
}

/// Sage script checking whether 1 lies in the ideal of `sys`. Coefficients
/// in ℚ(i) use Sage's `I` from `QuadraticField(-1)`.
pub fn write_sage<C: Coeff>(sys: &PolySystem<C>) -> String {
    let vars = sys.ring.vars().join(", ");
    let base = match C::FIELD {
        FieldTag::Rat => "QQ".to_string(),
        FieldTag::GaussRat => "QuadraticField(-1, 'I')".to_string(),
    };
    let mut out = String::new();
    out.push_str(&format!("# toepsys n={} s={} field={}\n", sys.n, sys.s, C::FIELD.name()));
    out.push_str(&format!("K = {base}\n"));
    if C::FIELD == FieldTag::GaussRat {
        out.push_str("I = K.gen()\n");
    }
    out.push_str(&format!("R = PolynomialRing(K, [{}], order='degrevlex')\n", quoted(sys.ring.vars())));
    out.push_str(&format!("{vars}, = R.gens()\n"));
    out.push_str("J = R.ideal([\n");
    for g in &sys.generators {
        out.push_str(&format!("    {},\n", sage_poly(g)));
    }
    out.push_str("])\n");
    out.push_str("G = J.groebner_basis()\n");
    out.push_str("print('not-factorizable' if G == [1] else 'factorizable')\n");
    out
}

fn quoted(vars: &[String]) -> String {
    vars.iter().map(|v| format!("'{v}'")).collect::<Vec<_>>().join(", ")
}

fn sage_poly<C: Coeff>(p: &MultiPoly<C>) -> String {
    if p.is_zero() {
        return "R(0)".into();
    }
    let vars = p.ring().vars();
    let parts: Vec<String> = p
        .sorted_terms()
        .into_iter()
        .map(|(m, c)| {
            let mut t = format!("({})", c.to_string().replace('i', "*I"));
            for (v, &k) in vars.iter().zip(m.exponents()) {
                match k {
                    0 => {}
                    1 => t.push_str(&format!("*{v}")),
                    _ => t.push_str(&format!("*{v}^{k}")),
                }
            }
            t
        })
        .collect();
    parts.join(" + ")
}
