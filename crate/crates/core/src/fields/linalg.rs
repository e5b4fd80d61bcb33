//! Dense Gaussian elimination over a [`Field`].

use crate::fields::field::{Fe, Field};

/// Row-reduces `rows` in place (reduced echelon form) and returns the pivot
/// columns in the order they were found. Columns are scanned left to right.
pub fn rref(field: &Field, rows: &mut Vec<Vec<Fe>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let t = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(*x, field.mul(t, y));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(field: &Field, rows: &[Vec<Fe>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(field, &mut m, ncols).len()
}

/// Basis of `{ v : A v = 0 }` for `A` given by rows, in reduced form: one
/// vector per free column, with a 1 in that column.
pub fn kernel(field: &Field, rows: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let mut m = rows.to_vec();
    let pivots = rref(field, &mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Fe::ZERO; ncols];
            v[free] = field.one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = field.neg(row[free]);
            }
            v
        })
        .collect()
}

/// Reduces `v` against a reduced echelon basis (`rows`, `pivots` from
/// [`rref`]), returning the unique representative vanishing on pivots.
pub fn reduce(field: &Field, rows: &[Vec<Fe>], pivots: &[usize], v: &[Fe]) -> Vec<Fe> {
    let mut out = v.to_vec();
    for (row, &pc) in rows.iter().zip(pivots) {
        let t = out[pc];
        if t.is_zero() {
            continue;
        }
        for (x, &y) in out.iter_mut().zip(row) {
            *x = field.sub(*x, field.mul(t, y));
        }
    }
    out
}

/// Solves `sum_i c_i rows[i] = target`, if possible.
pub fn solve_combination(field: &Field, rows: &[Vec<Fe>], target: &[Fe]) -> Option<Vec<Fe>> {
    let n = rows.len();
    let ncols = target.len();
    // augment each row with an identity block to track the combination
    let mut aug: Vec<Vec<Fe>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = r.clone();
            v.extend((0..n).map(|j| if i == j { field.one() } else { Fe::ZERO }));
            v
        })
        .collect();
    let pivots = rref(field, &mut aug, ncols);
    let mut rest = target.to_vec();
    rest.extend(std::iter::repeat_n(Fe::ZERO, n));
    let red = reduce(field, &aug[..pivots.len()], &pivots, &rest);
    if red[..ncols].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(red[ncols..].iter().map(|&x| field.neg(x)).collect())
}

pub fn mat_mul(field: &Field, a: &[Vec<Fe>], b: &[Vec<Fe>]) -> Vec<Vec<Fe>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| field.sum((0..inner).map(|k| field.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

pub fn determinant(field: &Field, m: &[Vec<Fe>]) -> Fe {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = field.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Fe::ZERO;
        };
        if pr != c {
            a.swap(pr, c);
            det = field.neg(det);
        }
        det = field.mul(det, a[c][c]);
        let inv = field.inv(a[c][c]).unwrap();
        for i in c + 1..n {
            let t = field.mul(a[i][c], inv);
            if t.is_zero() {
                continue;
            }
            for j in c..n {
                let s = field.mul(t, a[c][j]);
                a[i][j] = field.sub(a[i][j], s);
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        let f = Field::new(7, 1).unwrap();
        let e = |n: i64| f.from_int(n);
        let rows = vec![vec![e(1), e(2), e(3)], vec![e(2), e(4), e(6)]];
        let k = kernel(&f, &rows, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s = f.sum(rows[0].iter().zip(v).map(|(&a, &b)| f.mul(a, b)));
            assert!(s.is_zero());
        }
        let c = solve_combination(&f, &rows, &[e(3), e(6), e(9)]).unwrap();
        let got: Vec<Fe> = (0..3)
            .map(|j| f.add(f.mul(c[0], rows[0][j]), f.mul(c[1], rows[1][j])))
            .collect();
        assert_eq!(got, vec![e(3), e(6), e(9)]);
        assert!(solve_combination(&f, &rows, &[e(1), e(0), e(0)]).is_none());
        assert_eq!(determinant(&f, &[vec![e(1), e(2)], vec![e(3), e(4)]]), e(-2));
    }
}
