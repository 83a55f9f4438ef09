use num_complex::Complex64;
use serde_json::{json, Value};
use toepfactor::exactnum::GaussianRational as G;
use toepfactor::factorize::{chessboard_diag4, classify_diagonal3, verify_decomposition, ToeplitzDecomposition};
use toepfactor::io::MatrixScalar;
use toepfactor::matrices::DenseMatrix;
use toepfactor::toeplitz::ToeplitzMatrix;
use wasm_bindgen::prelude::*;

fn scalar(s: &str) -> Result<G, String> {
    G::parse_token(s.trim()).map_err(|(_, msg)| format!("'{s}': {msg}"))
}

fn grid(m: &DenseMatrix<G>) -> Value {
    Value::from(
        (0..m.rows())
            .map(|i| m.row(i).iter().map(MatrixScalar::format_token).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

fn report(d: &ToeplitzDecomposition<G>, target: &DenseMatrix<G>) -> Result<Value, String> {
    verify_decomposition(target, d, 0.0).map_err(|e| e.to_string())?;
    Ok(json!({
        "provenance": d.provenance,
        "factors": d.factors.iter().map(|t| grid(&t.to_dense())).collect::<Vec<_>>(),
        "product": grid(&d.product().map_err(|e| e.to_string())?),
    }))
}

/// `{toep, provenance, factors, product}` for `diag(d, e, f)`.
pub fn classify(d: &str, e: &str, f: &str) -> Result<Value, String> {
    let (d, e, f) = (scalar(d)?, scalar(e)?, scalar(f)?);
    let (k, dec) = classify_diagonal3(&d, &e, &f).map_err(|e| e.to_string())?;
    let mut v = report(&dec, &DenseMatrix::diag(&[d, e, f]))?;
    v["toep"] = json!(k);
    Ok(v)
}

/// Chessboard parameters and the three factors of `diag(d1, d2, d3, d4)`.
pub fn chessboard(d: [&str; 4]) -> Result<Value, String> {
    let d = [scalar(d[0])?, scalar(d[1])?, scalar(d[2])?, scalar(d[3])?];
    let (p, dec) = chessboard_diag4(&d).map_err(|e| e.to_string())?;
    let mut v = report(&dec, &DenseMatrix::diag(&d))?;
    v["params"] = json!({
        "a0": p.a0.to_string(), "a6": p.a6.to_string(),
        "b0": p.b0.to_string(), "b6": p.b6.to_string(),
        "c1": p.c1.to_string(), "c5": p.c5.to_string(),
    });
    Ok(v)
}

/// Multiplication counts of Levinson and dense LU on `n×n` systems.
pub fn flop_curve(sizes: &[u32]) -> Result<Value, String> {
    let mut rows = Vec::new();
    for &n in sizes {
        let n = n as usize;
        if !(1..=512).contains(&n) {
            return Err(format!("size {n} outside 1..=512"));
        }
        // t_k = 2^-|k| is positive definite, so every leading minor is nonzero
        let coeffs = (0..2 * n - 1)
            .map(|j| Complex64::new(0.5f64.powi((j as i32 - n as i32 + 1).abs()), 0.0))
            .collect();
        let t = ToeplitzMatrix::new(n, coeffs).map_err(|e| e.to_string())?;
        let b: Vec<Complex64> = (0..n).map(|i| Complex64::new(1.0 + i as f64, 0.0)).collect();
        let (_, lev) = t.levinson_solve_counted(&b).map_err(|e| e.to_string())?;
        let (_, lu) = t.to_dense().solve_counted(&b).map_err(|e| e.to_string())?;
        rows.push(json!({"n": n, "levinson": lev, "lu": lu}));
    }
    Ok(Value::from(rows))
}

fn out(r: Result<Value, String>) -> Result<String, JsError> {
    r.map(|v| v.to_string()).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = classifyDiag3)]
pub fn classify_diag3(d: &str, e: &str, f: &str) -> Result<String, JsError> {
    out(classify(d, e, f))
}

#[wasm_bindgen(js_name = chessboardDiag4)]
pub fn chessboard_diag4_js(d1: &str, d2: &str, d3: &str, d4: &str) -> Result<String, JsError> {
    out(chessboard([d1, d2, d3, d4]))
}

#[wasm_bindgen(js_name = flopCurve)]
pub fn flop_curve_js(sizes: Vec<u32>) -> Result<String, JsError> {
    out(flop_curve(&sizes))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_matches_known_counts() {
        assert_eq!(classify("1", "2", "3").unwrap()["toep"], 3);
        assert_eq!(classify("1", "1", "3").unwrap()["toep"], 2);
        assert_eq!(classify("1/2", "0", "1i").unwrap()["toep"], 2);
        let v = classify("1", "2", "3").unwrap();
        assert_eq!(v["product"], json!([["1", "0", "0"], ["0", "2", "0"], ["0", "0", "3"]]));
        assert!(classify("1", "x", "3").is_err());
    }

    #[test]
    fn chessboard_params() {
        let v = chessboard(["1", "2", "3", "4"]).unwrap();
        let p = &v["params"];
        assert_eq!((p["c5"].as_str(), p["c1"].as_str()), (Some("-6"), Some("-1")));
        assert_eq!((p["b6"].as_str(), p["b0"].as_str()), (Some("-3"), Some("1/2")));
        assert_eq!((p["a6"].as_str(), p["a0"].as_str()), (Some("2"), Some("1/3")));
        assert!(chessboard(["1", "1", "3", "4"]).is_err());
    }

    #[test]
    fn curve_grows_quadratically_against_cubically() {
        let v = flop_curve(&[32, 64]).unwrap();
        let r = |i: usize, k: &str| v[i][k].as_f64().unwrap();
        let lev = (r(1, "levinson") / r(0, "levinson")).log2();
        let lu = (r(1, "lu") / r(0, "lu")).log2();
        assert!(lev < 2.2 && lu > 2.7, "{lev} {lu}");
        assert!(flop_curve(&[0]).is_err());
    }
}
