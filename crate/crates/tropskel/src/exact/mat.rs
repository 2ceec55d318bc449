use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::rat::Rat;
use super::snf::IMat;

/// A dense rational matrix, the carrier for every linear map in the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Rat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        Mat { rows: n, cols, data }
    }

    pub fn from_imat(m: &IMat) -> Self {
        Mat::from_rows(
            (0..m.rows())
                .map(|r| m.row(r).iter().map(|v| Rat::from_big(v.clone())).collect())
                .collect(),
            m.cols(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len(), "mat-vec shape mismatch");
        (0..self.rows).map(|r| super::rat::dot(self.row(r), v)).collect()
    }
}

/// Rank of a list of rational row vectors, by exact Gaussian elimination.
pub fn rank_of_rows(rows: &[Vec<Rat>]) -> usize {
    rref_of_rows(rows).len()
}

/// Reduced row echelon form of the given rows (zero rows dropped).
///
/// Deterministic: pivots are chosen leftmost-first; rows are returned in
/// pivot-column order with pivot entry 1.
pub fn rref_of_rows(rows: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let mut work: Vec<Vec<Rat>> = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for col in 0..cols {
        let Some(k) = work.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let mut pivot_row = work.remove(k);
        let inv = pivot_row[col].recip();
        for v in pivot_row.iter_mut() {
            *v = &*v * &inv;
        }
        for r in work.iter_mut() {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (a, b) in r.iter_mut().zip(&pivot_row) {
                *a = &*a - &(&f * b);
            }
        }
        for b in basis.iter_mut() {
            if b[col].is_zero() {
                continue;
            }
            let f = b[col].clone();
            for (a, p) in b.iter_mut().zip(&pivot_row) {
                *a = &*a - &(&f * p);
            }
        }
        basis.push(pivot_row);
        work.retain(|r| r.iter().any(|v| !v.is_zero()));
    }
    basis
}

/// Scale a rational vector to a primitive integer vector (gcd 1), preserving
/// direction. Returns the zero vector unchanged.
pub fn primitive_integer(v: &[Rat]) -> Vec<BigInt> {
    if v.iter().all(|x| x.is_zero()) {
        return vec![BigInt::zero(); v.len()];
    }
    let mut lcm = BigInt::from(1);
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if gcd.is_zero() || gcd.abs() == BigInt::from(1) {
        return ints;
    }
    ints.iter().map(|x| x / &gcd).collect()
}

/// Solve `x * basis = target` for rational `x`, where `basis` rows are
/// independent. Returns `None` when `target` is outside the row span.
pub fn solve_in_row_span(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    // Gaussian elimination on the transposed system.
    let k = basis.len();
    if k == 0 {
        return if target.iter().all(|v| v.is_zero()) { Some(vec![]) } else { None };
    }
    let n = basis[0].len();
    // Augmented rows: for each coordinate j, equation sum_i x_i basis[i][j] = target[j].
    let mut rows: Vec<Vec<Rat>> = (0..n)
        .map(|j| {
            let mut r: Vec<Rat> = (0..k).map(|i| basis[i][j].clone()).collect();
            r.push(target[j].clone());
            r
        })
        .collect();
    let mut sol = vec![Rat::zero(); k];
    let mut pivots: Vec<(usize, Vec<Rat>)> = Vec::new();
    for col in 0..k {
        let Some(p) = rows.iter().position(|r| !r[col].is_zero()) else {
            continue;
        };
        let pr = rows.remove(p);
        let inv = pr[col].recip();
        let pr: Vec<Rat> = pr.iter().map(|v| v * &inv).collect();
        for r in rows.iter_mut().chain(pivots.iter_mut().map(|(_, r)| r)) {
            if r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (a, b) in r.iter_mut().zip(&pr) {
                *a = &*a - &(&f * b);
            }
        }
        pivots.push((col, pr));
    }
    // Remaining rows must be 0 = 0.
    for r in &rows {
        if r[..k].iter().all(|v| v.is_zero()) && !r[k].is_zero() {
            return None;
        }
    }
    for (col, pr) in &pivots {
        sol[*col] = pr[k].clone();
    }
    // Verify (basis rows independent makes the solution unique when it exists).
    for j in 0..n {
        let mut acc = Rat::zero();
        for i in 0..k {
            acc = &acc + &(&sol[i] * &basis[i][j]);
        }
        if acc != target[j] {
            return None;
        }
    }
    Some(sol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: i64) -> Rat {
        Rat::from_int(v)
    }

    #[test]
    fn rank_of_identity_is_dimension() {
        let rows: Vec<Vec<Rat>> = (0..4)
            .map(|i| (0..4).map(|j| if i == j { r(1) } else { r(0) }).collect())
            .collect();
        assert_eq!(rank_of_rows(&rows), 4);
    }

    #[test]
    fn rank_detects_dependence() {
        let rows = vec![
            vec![r(1), r(2), r(3)],
            vec![r(2), r(4), r(6)],
            vec![r(0), r(1), r(1)],
        ];
        assert_eq!(rank_of_rows(&rows), 2);
    }

    #[test]
    fn primitive_integer_scales() {
        let v = vec![Rat::from_pair(1, 2), Rat::from_pair(-3, 4)];
        assert_eq!(primitive_integer(&v), vec![BigInt::from(2), BigInt::from(-3)]);
        let w = vec![r(4), r(-6)];
        assert_eq!(primitive_integer(&w), vec![BigInt::from(2), BigInt::from(-3)]);
    }

    #[test]
    fn solve_in_row_span_roundtrip() {
        let basis = vec![vec![r(1), r(0), r(2)], vec![r(0), r(1), r(-1)]];
        let target = vec![r(3), r(2), r(4)];
        let sol = solve_in_row_span(&basis, &target).unwrap();
        assert_eq!(sol, vec![r(3), r(2)]);
        let outside = vec![r(0), r(0), r(1)];
        assert!(solve_in_row_span(&basis, &outside).is_none());
    }
}
