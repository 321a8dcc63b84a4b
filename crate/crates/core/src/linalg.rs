//! Row reduction of operator collections, monomials as coordinates.

use num_complex::Complex64;

use crate::exact::ExactComplex;
use crate::operator::{monomial_cmp, DiffOperator, MultiIndex};

/// Default relative pivot tolerance for floating elimination.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct SpanBasis {
    /// Reduced row-echelon basis, pivots normalized to 1.
    pub basis: Vec<DiffOperator>,
    pub rank: usize,
    /// `basis[i] = sum_j transform[i][j] * ops[j]`.
    pub transform: Vec<Vec<ExactComplex>>,
    /// Pivot monomial of each basis row.
    pub pivots: Vec<MultiIndex>,
    pub inexact: bool,
}

pub fn span_basis(ops: &[DiffOperator]) -> SpanBasis {
    span_basis_with_tol(ops, DEFAULT_RANK_TOL)
}

pub fn rank(ops: &[DiffOperator]) -> usize {
    span_basis(ops).rank
}

fn columns(ops: &[DiffOperator]) -> Vec<MultiIndex> {
    let mut cols: Vec<MultiIndex> = ops.iter().flat_map(|o| o.support()).collect();
    cols.sort_by(monomial_cmp);
    cols.dedup();
    cols
}

pub fn span_basis_with_tol(ops: &[DiffOperator], tol: f64) -> SpanBasis {
    let cols = columns(ops);
    if ops.iter().all(|o| o.is_exact()) {
        exact_rref(ops, &cols)
    } else {
        float_rref(ops, &cols, tol)
    }
}

fn exact_rref(ops: &[DiffOperator], cols: &[MultiIndex]) -> SpanBasis {
    let n = ops.len();
    let w = cols.len();
    let mut rows: Vec<Vec<ExactComplex>> = ops
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let mut r: Vec<ExactComplex> = cols.iter().map(|m| o.coefficient(m)).collect();
            r.extend((0..n).map(|k| ExactComplex::from_int((k == j) as i64)));
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..w {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().unwrap();
        rows[r] = rows[r].iter().map(|x| x * &inv).collect();
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(cols[c]);
        r += 1;
        if r == n {
            break;
        }
    }
    finish(rows, cols, pivots, false)
}

fn float_rref(ops: &[DiffOperator], cols: &[MultiIndex], tol: f64) -> SpanBasis {
    let n = ops.len();
    let w = cols.len();
    let mut rows: Vec<Vec<Complex64>> = ops
        .iter()
        .enumerate()
        .map(|(j, o)| {
            let mut r: Vec<Complex64> = cols.iter().map(|m| o.coefficient(m).to_complex64()).collect();
            r.extend((0..n).map(|k| Complex64::new((k == j) as i64 as f64, 0.0)));
            r
        })
        .collect();
    let scale = rows
        .iter()
        .flat_map(|r| r[..w].iter().map(|z| z.norm()))
        .fold(0.0, f64::max);
    let thresh = tol * scale;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..w {
        if r == n {
            break;
        }
        let (p, best) = (r..n)
            .map(|i| (i, rows[i][c].norm()))
            .fold((r, -1.0), |a, b| if b.1 > a.1 { b } else { a });
        if best <= thresh {
            for row in rows.iter_mut().skip(r) {
                row[c] = Complex64::new(0.0, 0.0);
            }
            continue;
        }
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        rows[r] = rows[r].iter().map(|x| x * inv).collect();
        for i in 0..n {
            if i != r {
                let f = rows[i][c];
                if f.norm() == 0.0 {
                    continue;
                }
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row.iter()) {
                    *x -= f * y;
                }
                rows[i][c] = Complex64::new(0.0, 0.0);
            }
        }
        pivots.push(cols[c]);
        r += 1;
    }
    let rows = rows
        .into_iter()
        .map(|row| {
            row.into_iter()
                .enumerate()
                .map(|(k, z)| {
                    if (k < w && z.norm() <= thresh) || z.norm() == 0.0 {
                        ExactComplex::zero()
                    } else {
                        ExactComplex::approx(z)
                    }
                })
                .collect()
        })
        .collect();
    finish(rows, cols, pivots, true)
}

fn finish(
    rows: Vec<Vec<ExactComplex>>,
    cols: &[MultiIndex],
    pivots: Vec<MultiIndex>,
    inexact: bool,
) -> SpanBasis {
    let rank = pivots.len();
    let w = cols.len();
    let mut basis = Vec::with_capacity(rank);
    let mut transform = Vec::with_capacity(rank);
    for row in rows.into_iter().take(rank) {
        basis.push(DiffOperator::from_terms(
            cols.iter().copied().zip(row[..w].iter().cloned()),
        ));
        transform.push(row[w..].to_vec());
    }
    SpanBasis {
        basis,
        rank,
        transform,
        pivots,
        inexact,
    }
}
