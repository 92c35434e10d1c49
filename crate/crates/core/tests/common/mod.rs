//! Reference computations that share no code with the library paths they
//! check.
#![allow(dead_code)]

use foinv::knot::SeifertMatrix;

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Signature of `(1-ω)V + (1-ω̄)V^T` at `ω = exp(2πi m/n)`, from floating
/// point eigenvalues of its real `2N x 2N` form. `None` when an eigenvalue is
/// too close to zero to call.
pub fn float_signature(v: &SeifertMatrix, m: i64, n: i64) -> Option<i64> {
    let e = v.entries();
    let d = e.len();
    if d == 0 {
        return Some(0);
    }
    let ang = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
    let (wr, wi) = (ang.cos(), ang.sin());
    // (1-ω)V + (1-ω̄)V^T = A + iB
    let mut big = vec![vec![0.0; 2 * d]; 2 * d];
    for i in 0..d {
        for j in 0..d {
            let (vij, vji) = (e[i][j] as f64, e[j][i] as f64);
            let a = (1.0 - wr) * vij + (1.0 - wr) * vji;
            let b = -wi * vij + wi * vji;
            big[i][j] = a;
            big[d + i][d + j] = a;
            big[i][d + j] = -b;
            big[d + i][j] = b;
        }
    }
    let ev = jacobi_eigenvalues(big);
    if ev.iter().any(|x| x.abs() < 1e-8) {
        return None;
    }
    let s: i64 = ev.iter().map(|x| x.signum() as i64).sum();
    Some(s / 2)
}

/// `det(tV - V^T)` at an integer `t`, by exact Bareiss elimination over
/// `i128`.
pub fn alexander_det_at(v: &SeifertMatrix, t: i128) -> i128 {
    let e = v.entries();
    let n = e.len();
    let mut a: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| t * e[i][j] as i128 - e[j][i] as i128).collect()).collect();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// `|H_1|` of the `n`-fold branched cover as `∏ |Δ(ζ^k)|`, in floating point.
pub fn float_cover_order(v: &SeifertMatrix, n: i64) -> f64 {
    let delta = foinv::knot::alexander_polynomial(v);
    (1..n)
        .map(|k| {
            let a = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let (re, im) = delta.eval_complex(a.cos(), a.sin());
            (re * re + im * im).sqrt()
        })
        .product()
}

/// A Seifert matrix `J + S` with `J` the standard upper-triangular
/// symplectic block and `S` symmetric, so `V - V^T = J - J^T` is unimodular.
pub fn seifert_from_symmetric(genus: usize, sym: &[i64]) -> SeifertMatrix {
    let n = 2 * genus;
    let mut e = vec![vec![0i64; n]; n];
    let mut it = sym.iter().cycle();
    for i in 0..n {
        for j in i..n {
            let x = *it.next().unwrap();
            e[i][j] += x;
            if i != j {
                e[j][i] += x;
            }
        }
    }
    for g in 0..genus {
        e[2 * g][2 * g + 1] += 1;
    }
    SeifertMatrix::new(e).expect("unimodular by construction")
}
