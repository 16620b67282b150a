//! Small ordinary least squares routines.

use crate::error::{Error, Result};

/// Straight-line fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r2: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    if n < 2 {
        return Err(Error::estimation("line fit needs at least two points"));
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (xi, yi) in x.iter().zip(y) {
        let dx = xi - mx;
        let dy = yi - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::estimation("line fit with constant abscissa"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| {
            let r = yi - intercept - slope * xi;
            r * r
        })
        .sum::<f64>();
    let s2 = if n > 2 { sse / (nf - 2.0) } else { 0.0 };
    let r2 = if syy > 0.0 { 1.0 - sse / syy } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr: (s2 / sxx).sqrt(),
        intercept_stderr: (s2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        r2,
    })
}

/// General least squares solution with coefficient standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct LstsqFit {
    pub coef: Vec<f64>,
    pub stderr: Vec<f64>,
    pub residual_ss: f64,
}

/// Solves `min |X b - y|` by Householder QR. `design` holds the rows of X.
pub fn lstsq(design: &[Vec<f64>], y: &[f64]) -> Result<LstsqFit> {
    let n = design.len();
    assert_eq!(n, y.len());
    let p = design.first().map_or(0, Vec::len);
    if p == 0 || n < p {
        return Err(Error::domain(format!(
            "least squares needs at least {p} rows, got {n}"
        )));
    }
    // column-major copy of X, and y, reduced in place
    let mut a: Vec<Vec<f64>> = (0..p)
        .map(|j| design.iter().map(|r| r[j]).collect())
        .collect();
    let mut b = y.to_vec();
    let scale: Vec<f64> = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();

    for k in 0..p {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= 1e-10 * scale[k].max(f64::MIN_POSITIVE) {
            return Err(Error::domain("rank-deficient design matrix"));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2 = v.iter().map(|t| t * t).sum::<f64>();
        let reflect = |col: &mut [f64]| {
            let d = v.iter().zip(col.iter()).map(|(s, t)| s * t).sum::<f64>();
            let f = 2.0 * d / vnorm2;
            for (c, s) in col.iter_mut().zip(&v) {
                *c -= f * s;
            }
        };
        for col in a.iter_mut().skip(k) {
            reflect(&mut col[k..]);
        }
        reflect(&mut b[k..]);
    }

    // back substitution on R (upper triangle of a, column-major)
    let mut coef = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = b[i];
        for j in i + 1..p {
            s -= a[j][i] * coef[j];
        }
        coef[i] = s / a[i][i];
    }
    let residual_ss = b[p..].iter().map(|v| v * v).sum::<f64>();
    let s2 = if n > p {
        residual_ss / (n - p) as f64
    } else {
        0.0
    };

    // diag((R^T R)^-1) = row norms of R^-1
    let mut rinv = vec![vec![0.0; p]; p];
    for i in 0..p {
        rinv[i][i] = 1.0 / a[i][i];
        for j in (0..i).rev() {
            let mut s = 0.0;
            for k in j + 1..=i {
                s += a[k][j] * rinv[k][i];
            }
            rinv[j][i] = -s / a[j][j];
        }
    }
    let stderr = (0..p)
        .map(|i| (s2 * rinv[i].iter().map(|v| v * v).sum::<f64>()).sqrt())
        .collect();
    Ok(LstsqFit {
        coef,
        stderr,
        residual_ss,
    })
}
