use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Matrix = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn transpose(m: &Matrix, columns: usize) -> Matrix {
    (0..columns).map(|j| m.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn mul(a: &Matrix, b: &Matrix, columns: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..columns)
                .map(|j| row.iter().zip(b).map(|(x, brow)| x * &brow[j]).sum())
                .collect()
        })
        .collect()
}

/// `row[target] -= q · row[source]` on both matrices.
fn sub_rows(h: &mut Matrix, u: &mut Matrix, target: usize, source: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for m in [h, u] {
        let (src, dst) = if source < target {
            let (a, b) = m.split_at_mut(target);
            (&a[source], &mut b[0])
        } else {
            let (a, b) = m.split_at_mut(source);
            (&b[0], &mut a[target])
        };
        for (d, s) in dst.iter_mut().zip(src) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
    }
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U·M = H`. Pivots are positive, entries above a pivot lie in
/// `[0, pivot)`, and zero rows come last.
pub fn hnf(m: &Matrix, columns: usize) -> (Matrix, Matrix) {
    let rows = m.len();
    let mut h = m.clone();
    let mut u = identity(rows);
    let mut r = 0;
    for col in 0..columns {
        if r == rows {
            break;
        }
        loop {
            let pivot = (r..rows)
                .filter(|&i| !h[i][col].is_zero())
                .min_by(|&i, &j| h[i][col].abs().cmp(&h[j][col].abs()));
            let Some(p) = pivot else { break };
            h.swap(r, p);
            u.swap(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if !h[i][col].is_zero() {
                    let q = h[i][col].div_floor(&h[r][col]);
                    sub_rows(&mut h, &mut u, i, r, &q);
                    done &= h[i][col].is_zero();
                }
            }
            if done {
                break;
            }
        }
        if h[r][col].is_zero() {
            continue;
        }
        if h[r][col].is_negative() {
            for x in h[r].iter_mut().chain(u[r].iter_mut()) {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = h[i][col].div_floor(&h[r][col]);
            sub_rows(&mut h, &mut u, i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Determinant by fraction-free elimination.
pub fn determinant(m: &Matrix) -> BigInt {
    let n = m.len();
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

/// An integer solution of `M·x = b`, if one exists.
///
/// With `U·Mᵀ = H`, substituting `x = Uᵀy` turns the system into `Hᵀy = b`,
/// which is triangular and solved by forward substitution with
/// divisibility checks; free coordinates of `y` are set to zero.
pub fn solve_z(m: &Matrix, columns: usize, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.len(), b.len(), "right-hand side length");
    let (h, u) = hnf(&transpose(m, columns), m.len());
    let mut y = vec![BigInt::zero(); columns];
    let mut row = 0;
    for (j, bj) in b.iter().enumerate() {
        // Value of row j of Hᵀ·y using the coordinates fixed so far.
        let partial: BigInt = (0..row).map(|i| &h[i][j] * &y[i]).sum();
        if row < columns && !h[row][j].is_zero() {
            let (q, rem) = (bj - &partial).div_rem(&h[row][j]);
            if !rem.is_zero() {
                return None;
            }
            y[row] = q;
            row += 1;
        } else if partial != *bj {
            return None;
        }
    }
    let x: Vec<BigInt> = (0..columns)
        .map(|j| (0..columns).map(|i| &u[i][j] * &y[i]).sum())
        .collect();
    debug_assert!(m
        .iter()
        .zip(b)
        .all(|(r, bi)| r.iter().zip(&x).map(|(a, v)| a * v).sum::<BigInt>() == *bi));
    Some(x)
}

/// Whether `h` has the row-style Hermite shape produced by [`hnf`].
pub fn is_hermite(h: &Matrix) -> bool {
    let mut last_pivot: Option<usize> = None;
    let mut seen_zero = false;
    for (i, row) in h.iter().enumerate() {
        match row.iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last_pivot.is_some_and(|p| c <= p) || !row[c].is_positive() {
                    return false;
                }
                if h[..i].iter().any(|above| above[c].is_negative() || above[c] >= row[c]) {
                    return false;
                }
                last_pivot = Some(c);
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn small_hnf() {
        let m = mat(&[&[2, 4], &[1, 3]]);
        let (h, u) = hnf(&m, 2);
        assert_eq!(h, mat(&[&[1, 1], &[0, 2]]));
        assert_eq!(mul(&u, &m, 2), h);
        assert_eq!(determinant(&u).abs(), BigInt::one());
        let z = mat(&[&[0, 0], &[0, 0]]);
        assert_eq!(hnf(&z, 2), (z.clone(), identity(2)));
        assert_eq!(hnf(&identity(3), 3), (identity(3), identity(3)));
    }

    #[test]
    fn scalar_systems() {
        assert_eq!(solve_z(&mat(&[&[2]]), 1, &[BigInt::from(4)]), Some(vec![BigInt::from(2)]));
        assert_eq!(solve_z(&mat(&[&[2]]), 1, &[BigInt::from(3)]), None);
        // 6x + 10y = 2 is solvable, 6x + 10y = 1 is not.
        let m = mat(&[&[6, 10]]);
        let x = solve_z(&m, 2, &[BigInt::from(2)]).unwrap();
        assert_eq!(&x[0] * 6 + &x[1] * 10, BigInt::from(2));
        assert_eq!(solve_z(&m, 2, &[BigInt::from(1)]), None);
    }

    #[test]
    fn determinant_values() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[7, 4]])), BigInt::from(1));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&mat(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    }
}
