use crate::ff::{PrimeField, Residue};

use super::{seeded_grid, WallGrid};

/// `det(T(n, m))` over `F_p`, the `(m+1) x (m+1)` Toeplitz matrix whose
/// `(i, j)` entry is `s[n - i + j]`. Indices outside `s` read as zero.
/// Columns are 0-based.
pub fn toeplitz_det(field: &PrimeField, s: &[Residue], n: i64, m: i64) -> Residue {
    if m == -1 {
        return 1;
    }
    if m < -1 {
        return 0;
    }
    let size = (m + 1) as usize;
    let at = |k: i64| -> Residue {
        if k < 0 || k >= s.len() as i64 {
            0
        } else {
            field.reduce(s[k as usize] as i64)
        }
    };
    let mut a: Vec<Vec<Residue>> = (0..size as i64)
        .map(|i| (0..size as i64).map(|j| at(n - i + j)).collect())
        .collect();
    let mut det = 1;
    for col in 0..size {
        let Some(pivot) = (col..size).find(|&r| a[r][col] != 0) else {
            return 0;
        };
        if pivot != col {
            a.swap(pivot, col);
            det = field.neg(det);
        }
        let inv = field.inv(a[col][col]).expect("nonzero pivot");
        det = field.mul(det, a[col][col]);
        let (done, rest) = a.split_at_mut(col + 1);
        let pivot_row = &done[col][col..];
        for row in rest {
            let factor = field.mul(row[col], inv);
            if factor == 0 {
                continue;
            }
            for (x, &p) in row[col..].iter_mut().zip(pivot_row) {
                *x = field.sub(*x, field.mul(factor, p));
            }
        }
    }
    det
}

/// The wall triangle of `s` with every entry computed as a determinant.
pub fn oracle_wall(s: &[Residue], field: &PrimeField) -> WallGrid {
    let mut grid = seeded_grid(s, field);
    let len = s.len() as i64;
    for m in 1..=grid.depth() {
        for n in m..len - m {
            grid.set(m, n, toeplitz_det(field, s, n, m));
        }
    }
    grid
}
