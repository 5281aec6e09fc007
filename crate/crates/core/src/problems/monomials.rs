use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialOptions {
    /// Prepend the constant monomial.
    pub include_intercept: bool,
    pub max_features: usize,
}

impl Default for MonomialOptions {
    fn default() -> Self {
        Self {
            include_intercept: false,
            max_features: 200_000,
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Number of non-constant monomials of degree at most `degree` in `n`
/// variables: `C(n + degree, degree) - 1`.
pub fn monomial_count(n: usize, degree: usize) -> Option<usize> {
    binomial(n + degree, degree).map(|c| c - 1)
}

fn compositions(remaining: usize, parts: usize, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        prefix.push(remaining as u32);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in (0..=remaining).rev() {
        prefix.push(first as u32);
        compositions(remaining - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Exponent vectors with `1 <= |a| <= degree`, graded, lexicographically
/// descending within each degree.
pub fn monomial_exponents(n: usize, degree: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    for deg in 1..=degree {
        compositions(deg, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Evaluates every monomial on each row of `samples` (`N x n`).
pub fn build_monomial_features(samples: &DenseMatrix, degree: usize, options: MonomialOptions) -> Result<DenseMatrix> {
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let n = samples.cols;
    let count = monomial_count(n, degree).ok_or(Error::TooManyFeatures {
        count: usize::MAX,
        limit: options.max_features,
    })? + usize::from(options.include_intercept);
    if count > options.max_features {
        return Err(Error::TooManyFeatures {
            count,
            limit: options.max_features,
        });
    }
    let exponents = monomial_exponents(n, degree);
    let mut data = Vec::with_capacity(samples.rows * count);
    for i in 0..samples.rows {
        let row = samples.row(i);
        if options.include_intercept {
            data.push(1.0);
        }
        for exps in &exponents {
            let mut v = 1.0;
            for (x, &e) in row.iter().zip(exps) {
                if e > 0 {
                    v *= x.powi(e as i32);
                }
            }
            data.push(v);
        }
    }
    Ok(DenseMatrix::from_rows(samples.rows, count, data))
}
