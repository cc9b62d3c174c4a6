//! Dense linear algebra over a [`FiniteField`]: row reduction, rank, null space.

use crate::gf::{Elem, FiniteField};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row echelon form in place. Returns the pivot column of each
/// nonzero row; rows past the rank are zeroed.
pub fn rref(f: &FiniteField, m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(sel) = (r..rows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, sel);
        let inv = f.inv(m[r][c]).expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in c..cols {
                    let delta = f.mul(factor, m[r][j]);
                    m[i][j] = f.sub(m[i][j], delta);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(f: &FiniteField, m: &[Vec<Elem>]) -> usize {
    let mut work = m.to_vec();
    rref(f, &mut work).len()
}

/// Rank of the submatrix made of the given columns.
pub fn column_rank(f: &FiniteField, m: &[Vec<Elem>], cols: &[usize]) -> usize {
    let mut sub: Matrix = m.iter().map(|row| cols.iter().map(|&c| row[c]).collect()).collect();
    rref(f, &mut sub).len()
}

/// Basis of `{ x : m x^T = 0 }`, as rows. `cols` is the ambient length.
///
/// Built from the echelon form: each free column contributes one vector with
/// a 1 in that column and the negated pivot entries elsewhere.
pub fn null_space(f: &FiniteField, m: &[Vec<Elem>], cols: usize) -> Matrix {
    let mut work = m.to_vec();
    let pivots = rref(f, &mut work);
    let mut is_pivot = vec![false; cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = f.neg(work[row][free]);
            }
            v
        })
        .collect()
}

pub fn dot(f: &FiniteField, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `a * b^T`.
pub fn mul_transpose(f: &FiniteField, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    a.iter().map(|ra| b.iter().map(|rb| dot(f, ra, rb)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_annihilates() {
        let f = FiniteField::new(3, 1).unwrap();
        let g = vec![vec![1, 1, 1, 0], vec![0, 1, 2, 1]];
        let h = null_space(&f, &g, 4);
        assert_eq!(h.len(), 2);
        for row in mul_transpose(&f, &g, &h) {
            assert!(row.iter().all(|&x| x == 0));
        }
        assert_eq!(rank(&f, &h), 2);
    }

    #[test]
    fn rank_of_dependent_rows() {
        let f = FiniteField::new(2, 2).unwrap();
        let g = vec![vec![1, 2, 3], vec![2, 3, 1]]; // second = x * first
        assert_eq!(rank(&f, &g), 1);
        assert_eq!(column_rank(&f, &g, &[0]), 1);
    }
}
