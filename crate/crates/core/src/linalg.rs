//! Exact linear algebra over `Q`, `Z` and `GF(2)`.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<Rat>> {
    rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

/// Reduced row echelon form and pivot columns. Zero rows are dropped.
pub fn rref(mut rows: Vec<Vec<Rat>>) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rat::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let factor = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank_rational(rows: Vec<Vec<Rat>>) -> usize {
    rref(rows).1.len()
}

/// Rank over `Q` of an integer matrix.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rank_rational(to_rational(rows))
}

/// Canonical representatives of `Q^n` modulo the span of some relations:
/// the reduced vector vanishes on the relation pivots, and dropping those
/// coordinates gives an injective map on the quotient.
#[derive(Debug, Clone)]
pub struct QuotientReducer {
    dim: usize,
    basis: Vec<Vec<Rat>>,
    pivots: Vec<usize>,
}

impl QuotientReducer {
    pub fn new(dim: usize, relations: &[Vec<i64>]) -> Self {
        let (basis, pivots) = if relations.is_empty() { (vec![], vec![]) } else { rref(to_rational(relations)) };
        QuotientReducer { dim, basis, pivots }
    }

    pub fn quotient_dim(&self) -> usize {
        self.dim - self.pivots.len()
    }

    /// Coordinates of the class of `v` in the quotient.
    pub fn reduce(&self, v: &[i64]) -> Vec<Rat> {
        let mut w: Vec<Rat> = v.iter().map(|&x| rat(x)).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let factor = w[p].clone();
                for (x, y) in w.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        let mut keep = vec![true; self.dim];
        for &p in &self.pivots {
            keep[p] = false;
        }
        w.into_iter().zip(keep).filter_map(|(x, k)| k.then_some(x)).collect()
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }
}

/// Rank over `GF(2)`.
pub fn rank_mod2(rows: &[Vec<i64>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let words = cols.div_ceil(64);
    let mut bits: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| {
            let mut b = vec![0u64; words];
            for (c, &x) in r.iter().enumerate() {
                if x.rem_euclid(2) == 1 {
                    b[c / 64] |= 1 << (c % 64);
                }
            }
            b
        })
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let (w, m) = (c / 64, 1u64 << (c % 64));
        let Some(p) = (rank..bits.len()).find(|&i| bits[i][w] & m != 0) else { continue };
        bits.swap(rank, p);
        let pivot = bits[rank].clone();
        for (i, row) in bits.iter_mut().enumerate() {
            if i != rank && row[w] & m != 0 {
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Reduction of `v` modulo the `GF(2)` span of `relations`, keeping only the
/// non-pivot coordinates.
pub fn reduce_mod2(v: &[i64], relations: &[Vec<i64>]) -> Vec<i64> {
    let dim = v.len();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for r in relations {
        let mut r: Vec<i64> = r.iter().map(|x| x.rem_euclid(2)).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if r[p] == 1 {
                for (x, y) in r.iter_mut().zip(b) {
                    *x ^= y;
                }
            }
        }
        if let Some(p) = r.iter().position(|&x| x == 1) {
            for (b, _) in basis.iter_mut().zip(&pivots).filter(|(b, _)| b[p] == 1) {
                for (x, y) in b.iter_mut().zip(&r) {
                    *x ^= y;
                }
            }
            basis.push(r);
            pivots.push(p);
        }
    }
    let mut w: Vec<i64> = v.iter().map(|x| x.rem_euclid(2)).collect();
    for (b, &p) in basis.iter().zip(&pivots) {
        if w[p] == 1 {
            for (x, y) in w.iter_mut().zip(b) {
                *x ^= y;
            }
        }
    }
    (0..dim).filter(|c| !pivots.contains(c)).map(|c| w[c]).collect()
}

/// Non-zero invariant factors of an integer matrix (Smith normal form).
/// Panics on `i128` overflow.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i128> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest non-zero entry in the remaining block as pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut changed = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] = a[i][j].checked_sub(q.checked_mul(a[t][j]).unwrap()).unwrap();
                    }
                }
                if a[i][t] != 0 {
                    changed = true;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] = row[j].checked_sub(q.checked_mul(row[t]).unwrap()).unwrap();
                    }
                }
                if a[t][j] != 0 {
                    changed = true;
                }
            }
            if !changed {
                // divisibility: fold in any entry not divisible by the pivot
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            a[t][j] = a[t][j].checked_add(a[i][j]).unwrap();
                        }
                    }
                    None => break,
                }
            } else {
                // move the new smallest entry of row/column t to the pivot
                let mut best = (t, t);
                for i in t..rows {
                    if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                a.swap(t, best.0);
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank of `H_1 = ker ∂₁ / im ∂₂` and its torsion coefficients, from the
/// boundary matrices (`∂₁` is vertices × edges, `∂₂` edges × triangles).
pub fn homology_from_boundaries(d1: &[Vec<i64>], d2: &[Vec<i64>], edge_count: usize) -> (usize, Vec<i128>) {
    let r1 = smith_invariants(d1).len();
    let inv2 = smith_invariants(d2);
    let rank = edge_count - r1 - inv2.len();
    let torsion = inv2.into_iter().filter(|&d| d > 1).collect();
    (rank, torsion)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank(&m), 2);
        assert_eq!(rank_mod2(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 2);
        assert_eq!(rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 3);
    }

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_invariants(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_invariants(&[vec![0, 0], vec![0, 0]]), Vec::<i128>::new());
    }

    #[test]
    fn quotient_reduction() {
        let q = QuotientReducer::new(3, &[vec![1, 1, 0]]);
        assert_eq!(q.quotient_dim(), 2);
        assert!(q.is_zero(&[2, 2, 0]));
        assert!(!q.is_zero(&[1, 0, 0]));
        assert_eq!(q.reduce(&[1, 0, 0]), q.reduce(&[0, -1, 0]));
        assert_eq!(reduce_mod2(&[1, 0, 1], &[vec![1, 1, 0]]), vec![1, 1]);
    }
}
