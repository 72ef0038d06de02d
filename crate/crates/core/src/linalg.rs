//! Exact dense linear algebra over [`Scalar`].

use crate::scalar::{Scalar, ScalarError};

pub type Vector = Vec<Scalar>;
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Scalar::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Scalar::one();
    }
    m
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// Reduced row-echelon form. Pivots are chosen leftmost column first,
/// topmost available row first. Returns the pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut().skip(c) {
            *x = &*x * &inv;
        }
        let prow = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(prow.iter()).skip(c) {
                if !pv.is_zero() {
                    *x -= &(&f * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(rows);
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut w = m.clone();
    rref(&mut w).len()
}

/// Basis of the right null space {v : M v = 0}.
pub fn kernel(m: &Matrix, cols: usize) -> Vec<Vector> {
    let mut w = m.clone();
    let pivots = rref(&mut w);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); cols];
            v[f] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&w[r][f];
            }
            v
        })
        .collect()
}

/// Basis of the row space, in reduced echelon form.
pub fn row_basis(rows: &[Vector]) -> Vec<Vector> {
    if rows.is_empty() {
        return vec![];
    }
    let mut w: Matrix = rows.to_vec();
    let k = rref(&mut w).len();
    w.truncate(k);
    w
}

pub fn same_span(a: &[Vector], b: &[Vector]) -> bool {
    row_basis(a) == row_basis(b)
}

/// Whether `v` lies in the span of `rows`.
pub fn in_span(rows: &[Vector], v: &[Scalar]) -> bool {
    let base = row_basis(rows);
    let mut all = base.clone();
    all.push(v.to_vec());
    row_basis(&all).len() == base.len()
}

pub fn mat_vec(m: &Matrix, v: &[Scalar]) -> Vector {
    m.iter()
        .map(|row| {
            let mut s = Scalar::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    s += &(a * b);
                }
            }
            s
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    out[i][j] += &(&a[i][k] * &bk[j]);
                }
            }
        }
    }
    out
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn determinant(m: &Matrix) -> Scalar {
    let n = m.len();
    let mut w = m.clone();
    let mut det = Scalar::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !w[i][c].is_zero()) else { return Scalar::zero() };
        if p != c {
            w.swap(p, c);
            det = -det;
        }
        det = &det * &w[c][c];
        let inv = w[c][c].inv().unwrap();
        for i in c + 1..n {
            if w[i][c].is_zero() {
                continue;
            }
            let f = &w[i][c] * &inv;
            for j in c..n {
                let t = &f * &w[c][j];
                w[i][j] -= &t;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            row
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Output of [`solve_linear`].
#[derive(Debug, Clone)]
pub struct LinearSolution {
    /// One particular solution per right-hand-side column (free variables
    /// set to zero), or `None` when that column is inconsistent.
    pub solutions: Vec<Option<Vector>>,
    pub kernel: Vec<Vector>,
    pub rank: usize,
}

/// Solve `M X = rhs` column by column.
pub fn solve_linear(m: &Matrix, rhs: &Matrix) -> Result<LinearSolution, ScalarError> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let k = if rhs.is_empty() { 0 } else { rhs[0].len() };
    let mut field = crate::scalar::FieldSpec::Rationals;
    for x in m.iter().chain(rhs.iter()).flatten() {
        field = field.join(x.field())?;
    }
    let mut aug: Matrix = (0..rows)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend(rhs[i].iter().cloned());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    let coef_piv: Vec<usize> = piv.iter().copied().filter(|&c| c < cols).collect();
    let rank = coef_piv.len();
    let mut solutions = Vec::with_capacity(k);
    for j in 0..k {
        let col = cols + j;
        let inconsistent = (rank..rows).any(|r| !aug[r][col].is_zero());
        if inconsistent {
            solutions.push(None);
            continue;
        }
        let mut x = vec![Scalar::zero(); cols];
        for (r, &pc) in coef_piv.iter().enumerate() {
            x[pc] = aug[r][col].clone();
        }
        solutions.push(Some(x));
    }
    Ok(LinearSolution { solutions, kernel: kernel(m, cols), rank })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect()
    }

    #[test]
    fn identity_system() {
        let s = solve_linear(&identity(3), &m(&[&[1], &[0], &[0]])).unwrap();
        assert_eq!(s.rank, 3);
        assert!(s.kernel.is_empty());
        assert_eq!(s.solutions[0].as_ref().unwrap(), &vec![Scalar::one(), Scalar::zero(), Scalar::zero()]);
    }

    #[test]
    fn rank_one_kernel() {
        let s = solve_linear(&m(&[&[1, 1], &[1, 1]]), &m(&[&[0], &[0]])).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.kernel, vec![vec![Scalar::int(-1), Scalar::int(1)]]);
    }

    #[test]
    fn inconsistent_column() {
        let s = solve_linear(&m(&[&[1, 1], &[1, 1]]), &m(&[&[1], &[2]])).unwrap();
        assert!(s.solutions[0].is_none());
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[2, 1], &[5, 3]]);
        assert_eq!(determinant(&a), Scalar::one());
        assert_eq!(mat_mul(&a, &inverse(&a).unwrap()), identity(2));
        assert!(inverse(&m(&[&[1, 2], &[2, 4]])).is_none());
    }
}
