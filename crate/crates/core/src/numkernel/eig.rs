//! Symmetric eigendecomposition: Householder tridiagonalization followed by
//! implicit QL. A cyclic Jacobi solver is kept in tests as a reference.

use super::Mat;
use crate::error::{Error, Result};

#[cfg(test)]
const THRESHOLD: f64 = 1e-12;
#[cfg(test)]
const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order; `vectors` holds the matching eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

impl SymEig {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Column `k` of the eigenvector matrix.
    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }

    /// `V f(Λ) Vᵀ`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> Mat {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let mut out = Mat::zeros(n, n);
        for k in 0..n {
            if fv[k] == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * fv[k];
                if vik == 0.0 {
                    continue;
                }
                for j in i..n {
                    out[(i, j)] += vik * self.vectors[(j, k)];
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out[(i, j)] = out[(j, i)];
            }
        }
        out
    }
}

fn check(a: &Mat) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Precondition(format!(
            "matrix is {}x{}, not square",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.max_abs().max(1.0);
    if !a.is_symmetric(1e-12 * scale) {
        return Err(Error::Precondition("matrix is not symmetric".into()));
    }
    if a.as_slice().iter().any(|x| !x.is_finite()) {
        return Err(Error::Precondition("matrix has non-finite entries".into()));
    }
    Ok(())
}

pub fn eig_sym(a: &Mat) -> Result<SymEig> {
    check(a)?;
    let mut a = a.clone();
    a.symmetrize();
    Ok(tridiagonal_ql(a))
}

/// Householder reduction to tridiagonal form, then QL with implicit shifts
/// (the classic tred2/tql2 pair).
fn tridiagonal_ql(a: Mat) -> SymEig {
    let n = a.rows();
    if n == 0 {
        return SymEig {
            values: vec![],
            vectors: Mat::zeros(0, 0),
        };
    }
    // row-major working copy; v[i][j]
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect();
    let mut d: Vec<f64> = v[n - 1].clone();
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for k in 0..i {
            scale += d[k].abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
                v[j][i] = 0.0;
            }
        } else {
            for k in 0..i {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                v[j][i] = f;
                g = e[j] + v[j][j] * f;
                for k in (j + 1)..i {
                    g += v[k][j] * d[k];
                    e[k] += v[k][j] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[k][j] -= f * e[k] + g * d[k];
                }
                d[j] = v[i - 1][j];
                v[i][j] = 0.0;
            }
        }
        d[i] = h;
    }

    // accumulate transformations
    for i in 0..n - 1 {
        v[n - 1][i] = v[i][i];
        v[i][i] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[k][i + 1] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[k][i + 1] * v[k][j];
                }
                for k in 0..=i {
                    v[k][j] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[k][i + 1] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[n - 1][j];
        v[n - 1][j] = 0.0;
    }
    v[n - 1][n - 1] = 1.0;
    e[0] = 0.0;

    // implicit QL
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m > l {
            loop {
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for row in v.iter_mut() {
                        let h2 = row[i + 1];
                        row[i + 1] = s * row[i] + c * h2;
                        row[i] = c * row[i] - s * h2;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let values = order.iter().map(|&i| d[i]).collect();
    let vectors = Mat::from_fn(n, n, |i, k| v[i][order[k]]);
    SymEig { values, vectors }
}

#[cfg(test)]
fn off_norm(a: &Mat) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            s += a[(i, j)] * a[(i, j)];
        }
    }
    (2.0 * s).sqrt()
}

#[cfg(test)]
fn jacobi(mut a: Mat, mut v: Mat) -> SymEig {
    let n = a.rows();
    let norm = a.frobenius();
    let target = THRESHOLD * norm.max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-18 * norm {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = Mat::from_fn(n, n, |i, k| v[(i, order[k])]);
    SymEig { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn residual(a: &Mat, e: &SymEig) -> (f64, f64) {
        let av = a.matmul(&e.vectors).unwrap();
        let n = a.rows();
        let lam = Mat::from_fn(n, n, |i, j| if i == j { e.values[i] } else { 0.0 });
        let vl = e.vectors.matmul(&lam).unwrap();
        let vtv = e.vectors.transpose().matmul(&e.vectors).unwrap();
        (av.max_abs_diff(&vl), vtv.max_abs_diff(&Mat::identity(n)))
    }

    #[test]
    fn identity_and_diagonal() {
        let e = eig_sym(&Mat::identity(4)).unwrap();
        assert!(e.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
        let d = Mat::from_rows(&[vec![3.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(eig_sym(&d).unwrap().values, vec![1.0, 3.0]);
    }

    #[test]
    fn c5_adjacency_spectrum() {
        let a = Mat::from_fn(5, 5, |i, j| {
            let d = (i + 5 - j) % 5;
            if d == 1 || d == 4 {
                1.0
            } else {
                0.0
            }
        });
        let e = eig_sym(&a).unwrap();
        let lo = 2.0 * (4.0 * PI / 5.0).cos();
        let mid = 2.0 * (2.0 * PI / 5.0).cos();
        let want = [lo, lo, mid, mid, 2.0];
        for (x, w) in e.values.iter().zip(want) {
            assert!((x - w).abs() < 1e-12, "{x} vs {w}");
        }
        let (r, o) = residual(&a, &e);
        assert!(r < 1e-10 && o < 1e-10);
    }

    #[test]
    fn analytic_two_by_two() {
        let (a, b, c) = (2.0, 1.5, -0.7);
        let m = Mat::from_rows(&[vec![a, b], vec![b, c]]).unwrap();
        let e = eig_sym(&m).unwrap();
        let disc = ((a - c) * (a - c) + 4.0 * b * b).sqrt();
        assert!((e.values[0] - (a + c - disc) / 2.0).abs() < 1e-10);
        assert!((e.values[1] - (a + c + disc) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn analytic_three_by_three() {
        // tridiagonal 2,-1: eigenvalues 2 - 2cos(k pi / 4)
        let m = Mat::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        let e = eig_sym(&m).unwrap();
        for k in 1..=3 {
            let want = 2.0 - 2.0 * (k as f64 * PI / 4.0).cos();
            assert!((e.values[k - 1] - want).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_asymmetric() {
        let m = Mat::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eig_sym(&m), Err(Error::Precondition(_))));
    }

    #[test]
    fn ql_matches_jacobi_on_dense_matrices() {
        for n in [1, 2, 7, 20, 33] {
            let m = Mat::from_fn(n, n, |i, j| {
                (((i * 7 + j * 7 + i * j) % 11) as f64 - 5.0) / 11.0
            });
            let ql = eig_sym(&m).unwrap();
            let jac = jacobi(m.clone(), Mat::identity(n));
            for (a, b) in ql.values.iter().zip(&jac.values) {
                assert!((a - b).abs() < 1e-11, "n={n}: {a} vs {b}");
            }
            let (r, o) = residual(&m, &ql);
            assert!(r < 1e-10 && o < 1e-12, "n={n}: {r} {o}");
        }
    }
}
