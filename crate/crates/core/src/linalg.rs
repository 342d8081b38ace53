//! Dense exact linear algebra over a [`Field`].
//!
//! Elimination is fraction-free: a row is cleared with `x*row - y*pivot`
//! for the pair returned by [`Field::cancel_pair`], then made primitive.
//! Over a prime field this is ordinary Gauss-Jordan elimination.

use crate::field::Field;

/// Row-reduces `rows` in place. With `full`, pivot columns are also cleared
/// above each pivot (reduced echelon form). Zero rows are dropped; the
/// returned vector holds the pivot column of each remaining row.
pub fn echelon<F: Field>(field: &F, rows: &mut Vec<Vec<F::Elem>>, full: bool) -> Vec<usize> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(found) = (rank..rows.len()).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(rank, found);
        field.normalize(&mut rows[rank]);
        let pivot_row = rows[rank].clone();
        let start = if full { 0 } else { rank + 1 };
        for i in start..rows.len() {
            if i == rank || field.is_zero(&rows[i][col]) {
                continue;
            }
            let (x, y) = field.cancel_pair(&rows[i][col], &pivot_row[col]);
            let row = &mut rows[i];
            for (c, p) in row.iter_mut().zip(&pivot_row) {
                let scaled = if field.is_one(&x) {
                    c.clone()
                } else {
                    field.mul(c, &x)
                };
                *c = if field.is_zero(p) {
                    scaled
                } else {
                    field.sub(&scaled, &field.mul(p, &y))
                };
            }
            field.make_primitive(row);
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

pub fn rank<F: Field>(field: &F, rows: &[Vec<F::Elem>]) -> usize {
    let mut m = rows.to_vec();
    echelon(field, &mut m, false).len()
}

/// Basis of `{v : rows * v = 0}`, each vector normalized.
pub fn nullspace<F: Field>(field: &F, rows: &[Vec<F::Elem>], ncols: usize) -> Vec<Vec<F::Elem>> {
    let mut m: Vec<Vec<F::Elem>> = rows.to_vec();
    let pivots = echelon(field, &mut m, true);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (row, &pc) in m.iter().zip(&pivots) {
            if field.is_zero(&row[free]) {
                continue;
            }
            let a = field.mul(&row[free], &v[free]);
            let (x, y) = field.cancel_pair(&a, &row[pc]);
            if !field.is_one(&x) {
                for e in v.iter_mut() {
                    *e = field.mul(e, &x);
                }
            }
            v[pc] = field.neg(&y);
        }
        field.normalize(&mut v);
        basis.push(v);
    }
    basis
}

/// `rows * v`.
pub fn mat_vec<F: Field>(field: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> Vec<F::Elem> {
    rows.iter()
        .map(|r| {
            r.iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                if field.is_zero(a) || field.is_zero(b) {
                    acc
                } else {
                    field.add(&acc, &field.mul(a, b))
                }
            })
        })
        .collect()
}

/// `true` when `v` lies in the row space of `rows`.
pub fn in_row_space<F: Field>(field: &F, rows: &[Vec<F::Elem>], v: &[F::Elem]) -> bool {
    let r = rank(field, rows);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(field, &ext) == r
}
