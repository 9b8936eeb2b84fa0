//! Dense exact linear algebra over ℚ.

use num::{BigInt, Integer, One, Zero};

use crate::gcalg::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Rank by fraction-free (Bareiss) elimination after clearing denominators row by row.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .map(|r| {
            let l = r.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            r.iter().map(|c| c.numer() * (&l / c.denom())).collect()
        })
        .collect();
    if m.is_empty() {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in col + 1..ncols {
                let v = (&m[r][col] * &m[i][j] - &m[i][col] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[r][col].clone();
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

/// Reduced row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    pub rows: Matrix,
    pub pivots: Vec<usize>,
}

pub fn rref(mut m: Matrix) -> Rref {
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for c in m[r].iter_mut() {
            *c *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *c -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    m.truncate(r);
    Rref { rows: m, pivots }
}

impl Rref {
    /// Reduces `v` modulo the row space, returning the remainder (zero on pivot columns).
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let f = out[p].clone();
            for (c, rv) in out.iter_mut().zip(row) {
                if !rv.is_zero() {
                    *c -= &f * rv;
                }
            }
        }
        out
    }
}

/// Solves `sum_j x_j cols[j] = rhs` for several right-hand sides at once.
/// `cols` are column vectors of length `n`; returns one solution per rhs
/// (`None` where inconsistent). Free variables are set to zero.
pub fn solve_many(cols: &[Vec<Rational>], n: usize, rhs: &[Vec<Rational>]) -> Vec<Option<Vec<Rational>>> {
    let k = cols.len();
    let mut m: Matrix = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.extend(rhs.iter().map(|b| b[i].clone()));
            row
        })
        .collect();
    // eliminate only on the coefficient block
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..n).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for c in m[r].iter_mut() {
            *c *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (c, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *c -= &f * pv;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    (0..rhs.len())
        .map(|b| {
            if (r..n).any(|i| !m[i][k + b].is_zero()) {
                return None;
            }
            let mut x = vec![Rational::zero(); k];
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = m[i][k + b].clone();
            }
            Some(x)
        })
        .collect()
}

pub fn solve(cols: &[Vec<Rational>], n: usize, rhs: &[Rational]) -> Option<Vec<Rational>> {
    solve_many(cols, n, &[rhs.to_vec()]).pop().flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gcalg::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn rank_small() {
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), rat(1, 2), int(1)],
        ];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn solve_small() {
        let cols = vec![vec![int(1), int(0)], vec![int(1), int(1)]];
        let x = solve(&cols, 2, &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let cols = vec![vec![int(1), int(1)]];
        assert!(solve(&cols, 2, &[int(1), int(0)]).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_rref(entries in prop::collection::vec(-3i64..4, 12), d in 1i64..4) {
            let m: Matrix = entries.chunks(4).map(|r| r.iter().map(|&v| rat(v, d)).collect()).collect();
            prop_assert_eq!(rank(&m), rref(m.clone()).pivots.len());
        }
    }
}
