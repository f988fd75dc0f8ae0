//! Small dense linear algebra: fraction-free elimination over [`Scalar`] and
//! [`Poly`], exact inverses, and a floating rank with singular-value gap data.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{FloatComplex, Scalar};

pub type Matrix = Vec<Vec<Scalar>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Scalar]) -> Vec<Scalar> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn conj_transpose(a: &Matrix) -> Matrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].conj()).collect()).collect()
}

pub fn is_identity(a: &Matrix) -> bool {
    a.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
    })
}

pub fn is_unitary(u: &Matrix) -> bool {
    u.iter().all(|row| row.len() == u.len()) && is_identity(&mat_mul(u, &conj_transpose(u)))
}

/// Hermitian norm squared `Σ |v_i|²`.
pub fn norm_sqr(v: &[Scalar]) -> Scalar {
    v.iter().map(Scalar::norm_sqr).sum()
}

/// Rank by Bareiss fraction-free elimination with row pivoting.
pub fn rank_exact(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Matrix = rows.to_vec();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = Scalar::one();
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, piv);
        let p = m[rank][col].clone();
        let prev_inv = prev.inv().expect("pivots are nonzero");
        for r in rank + 1..nrows {
            let f = m[r][col].clone();
            for c in col..ncols {
                let v = &(&p * &m[r][c]) - &(&f * &m[rank][c]);
                m[r][c] = &v * &prev_inv;
            }
        }
        prev = p;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Inverse by Gauss–Jordan elimination.
pub fn inverse(a: &Matrix) -> Result<Matrix> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let mut m = a.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero()).ok_or(Error::SingularMatrix)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let p_inv = m[col][col].inv()?;
        for c in 0..n {
            m[col][c] = &m[col][c] * &p_inv;
            inv[col][c] = &inv[col][c] * &p_inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let a = &m[r][c] - &(&f * &m[col][c]);
                m[r][c] = a;
                let b = &inv[r][c] - &(&f * &inv[col][c]);
                inv[r][c] = b;
            }
        }
    }
    Ok(inv)
}

/// Determinant of a square polynomial matrix by Bareiss elimination; every
/// division is exact in the polynomial ring.
pub fn det_poly(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// True when every `size × size` minor of `m` is the zero polynomial.
pub fn minors_vanish(m: &[Vec<Poly>], size: usize) -> bool {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    if size > nrows || size > ncols {
        return true;
    }
    let col_sets = combinations(ncols, size);
    combinations(nrows, size).iter().all(|rs| {
        col_sets.iter().all(|cs| {
            let sub: Vec<Vec<Poly>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            det_poly(sub).is_zero()
        })
    })
}

/// Floating rank with the singular values that decided it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatRank {
    pub rank: usize,
    pub singular_values: Vec<f64>,
    /// Smallest kept singular value relative to the largest.
    pub min_kept: Option<f64>,
    /// Largest dropped singular value relative to the largest.
    pub max_dropped: Option<f64>,
}

impl FloatRank {
    /// Ratio between the weakest kept and strongest dropped singular value.
    pub fn gap(&self) -> f64 {
        match (self.min_kept, self.max_dropped) {
            (Some(k), Some(d)) if d > 0.0 => k / d,
            _ => f64::INFINITY,
        }
    }
}

/// Rank of the row span. Rows are scaled to unit length first; singular
/// values below `rel_tol` times the largest are treated as zero.
pub fn rank_float(rows: &[Vec<FloatComplex>], rel_tol: f64) -> FloatRank {
    let ncols = rows.first().map_or(0, Vec::len);
    let kept: Vec<Vec<FloatComplex>> = rows
        .iter()
        .filter_map(|r| {
            let n = r.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            (n > 0.0).then(|| r.iter().map(|x| x / n).collect())
        })
        .collect();
    if kept.is_empty() || ncols == 0 {
        return FloatRank {
            rank: 0,
            singular_values: Vec::new(),
            min_kept: None,
            max_dropped: None,
        };
    }
    let m = DMatrix::from_fn(kept.len(), ncols, |i, j| kept[i][j]);
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv[0];
    let rank = sv.iter().filter(|s| **s > rel_tol * top).count();
    FloatRank {
        rank,
        min_kept: (rank > 0).then(|| sv[rank - 1] / top),
        max_dropped: sv.get(rank).map(|s| s / top),
        singular_values: sv,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::poly;

    fn s(lit: &str) -> Scalar {
        lit.parse().unwrap()
    }

    #[test]
    fn rank_of_dependent_rows() {
        let rows = vec![
            vec![s("1"), s("i"), s("1 * sqrt(2)")],
            vec![s("2"), s("2 i"), s("2 * sqrt(2)")],
            vec![s("0"), s("1"), s("0")],
        ];
        assert_eq!(rank_exact(&rows), 2);
        assert_eq!(rank_exact(&[vec![Scalar::zero(); 3]]), 0);
        assert_eq!(rank_exact(&identity(4)), 4);
    }

    #[test]
    fn inverse_round_trip() {
        let a = vec![
            vec![s("1"), s("i"), s("0")],
            vec![s("0"), s("1 * sqrt(5)"), s("2")],
            vec![s("1/2"), s("0"), s("1")],
        ];
        let inv = inverse(&a).unwrap();
        assert!(is_identity(&mat_mul(&a, &inv)));
        let singular = vec![vec![s("1"), s("2")], vec![s("2"), s("4")]];
        assert_eq!(inverse(&singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn polynomial_determinants() {
        let m = vec![vec![poly("z"), poly("1")], vec![poly("z^2"), poly("z")]];
        assert!(det_poly(m.clone()).is_zero());
        assert!(minors_vanish(&m, 2));
        assert!(!minors_vanish(&m, 1));
        let m = vec![
            vec![poly("0"), poly("1"), poly("z")],
            vec![poly("1"), poly("0"), poly("w")],
            vec![poly("z"), poly("w"), poly("0")],
        ];
        assert_eq!(det_poly(m), poly("2 z w"));
    }

    #[test]
    fn float_rank_gap() {
        let rows = vec![
            vec![FloatComplex::new(1.0, 0.0), FloatComplex::new(0.0, 1.0)],
            vec![FloatComplex::new(2.0, 0.0), FloatComplex::new(0.0, 2.0)],
        ];
        let r = rank_float(&rows, 1e-8);
        assert_eq!(r.rank, 1);
        assert!(r.gap() > 1e4);
    }
}
