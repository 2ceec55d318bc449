//! Integer lattice normal forms: Smith and Hermite normal forms, integer
//! kernels, lattice indices, and right inverses of surjective maps.
//!
//! Everything here is exact over `BigInt`; the algorithms are the classic
//! elimination schemes, adequate at desk scale (ranks <= 8 or so).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A dense integer matrix in row-major order.
#[derive(Clone, PartialEq, Eq)]
pub struct IMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl std::fmt::Debug for IMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IMat[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl IMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in &rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().cloned());
        }
        IMat { rows: n, cols, data }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        IMat::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
            cols,
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.at(i, j) + a * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        for c in 0..self.cols {
            let v = self.at(dst, c) + k * self.at(src, c);
            self.set(dst, c, v);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        for r in 0..self.rows {
            let v = self.at(r, dst) + k * self.at(r, src);
            self.set(r, dst, v);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c);
            self.set(r, c, v);
        }
    }
}

/// Result of a Smith normal form computation: `u * m * v = d` with `u`, `v`
/// unimodular and `d` diagonal, nonnegative, each entry dividing the next.
pub struct Snf {
    pub u: IMat,
    pub d: IMat,
    pub v: IMat,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.at(i, i).is_zero()).count()
    }

    pub fn diag(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.at(i, i).clone()).collect()
    }
}

/// Smith normal form with transform tracking. Total on integer matrices.
pub fn snf(m: &IMat) -> Snf {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IMat::identity(rows);
    let mut v = IMat::identity(cols);

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // Pick the nonzero entry of smallest absolute value in the trailing block.
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if d.at(r, c).is_zero() {
                    continue;
                }
                match &pivot {
                    None => pivot = Some((r, c)),
                    Some((pr, pc)) => {
                        if d.at(r, c).abs() < d.at(*pr, *pc).abs() {
                            pivot = Some((r, c));
                        }
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else {
            break; // trailing block is zero
        };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);

        // Clear row and column t; restart whenever a remainder shrinks the pivot.
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if d.at(r, t).is_zero() {
                    continue;
                }
                let q = -(d.at(r, t) / d.at(t, t));
                d.add_row(r, t, &q);
                u.add_row(r, t, &q);
                if !d.at(r, t).is_zero() {
                    d.swap_rows(t, r);
                    u.swap_rows(t, r);
                    dirty = true;
                }
            }
            for c in t + 1..cols {
                if d.at(t, c).is_zero() {
                    continue;
                }
                let q = -(d.at(t, c) / d.at(t, t));
                d.add_col(c, t, &q);
                v.add_col(c, t, &q);
                if !d.at(t, c).is_zero() {
                    d.swap_cols(t, c);
                    v.swap_cols(t, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }

        // Enforce that the pivot divides every later entry; otherwise fold the
        // offending row in and redo this position.
        let mut offender = None;
        'scan: for r in t + 1..rows {
            for c in t + 1..cols {
                if !(d.at(r, c) % d.at(t, t)).is_zero() {
                    offender = Some(r);
                    break 'scan;
                }
            }
        }
        if let Some(r) = offender {
            let one = BigInt::one();
            d.add_row(t, r, &one);
            u.add_row(t, r, &one);
            continue;
        }

        if d.at(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    // Zero rows/cols may hide negative entries only on the diagonal path; all
    // remaining entries are zero by construction.
    debug_assert!({
        let r = t;
        let mut ok = true;
        for i in r..rows {
            for j in r..cols {
                ok &= d.at(i, j).is_zero();
            }
        }
        ok
    });

    Snf { u, d, v }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`.
///
/// Returns a canonical basis: row-echelon with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped, so the
/// result has exactly `rank` rows. Two row sets span the same lattice iff
/// their HNFs are identical.
pub fn hnf(m: &IMat) -> IMat {
    let mut rows = m.row_vecs();
    let cols = m.cols();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();

    for col in 0..cols {
        loop {
            // Gather rows with nonzero entry in `col` that are not yet pivots.
            let mut idx: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if idx.is_empty() {
                break;
            }
            if idx.len() == 1 {
                let mut r = rows.remove(idx[0]);
                if r[col].is_negative() {
                    for v in r.iter_mut() {
                        *v = -&*v;
                    }
                }
                basis.push(r);
                break;
            }
            // Reduce the others by the row with the smallest |entry|.
            idx.sort_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
            let k = idx[0];
            let pivot = rows[k][col].clone();
            for &i in &idx[1..] {
                let q = &rows[i][col] / &pivot;
                if q.is_zero() {
                    continue;
                }
                for c in 0..cols {
                    let v = &rows[i][c] - &q * &rows[k][c];
                    rows[i][c] = v;
                }
            }
            rows.retain(|r| r.iter().any(|v| !v.is_zero()));
        }
    }

    // Reduce entries above each pivot.
    let pivots: Vec<usize> = basis
        .iter()
        .map(|r| r.iter().position(|v| !v.is_zero()).expect("nonzero basis row"))
        .collect();
    for i in (0..basis.len()).rev() {
        let p = pivots[i];
        let pivot = basis[i][p].clone();
        for j in 0..i {
            let entry = basis[j][p].clone();
            let q = entry.div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for c in 0..basis[i].len() {
                let v = &basis[j][c] - &q * &basis[i][c];
                basis[j][c] = v;
            }
        }
    }

    IMat::from_rows(basis, cols)
}

/// Basis of the saturated lattice `{ x in Z^n : m x = 0 }`, as rows.
pub fn integer_kernel(m: &IMat) -> IMat {
    let s = snf(m);
    let r = s.rank();
    let n = m.cols();
    // Columns r..n of V span the kernel.
    let mut rows = Vec::with_capacity(n - r);
    for c in r..n {
        rows.push((0..n).map(|i| s.v.at(i, c).clone()).collect());
    }
    hnf(&IMat::from_rows(rows, n))
}

/// Index `[Z^k : L]` of the sublattice spanned by the rows of `m` in `Z^k`,
/// or `None` when the rows do not have full rank `k`.
pub fn lattice_index(m: &IMat) -> Option<BigInt> {
    let s = snf(m);
    if s.rank() < m.cols() {
        return None;
    }
    let mut idx = BigInt::one();
    for d in s.diag() {
        idx *= d;
    }
    Some(idx)
}

/// Integer right inverse of a surjective map `q : Z^n -> Z^r`.
///
/// Errors with `InternalConsistency` if `q` is not surjective (its SNF
/// diagonal must be all ones).
pub fn right_inverse(q: &IMat) -> Result<IMat> {
    let s = snf(q);
    let r = q.rows();
    if s.rank() < r || s.diag().iter().any(|d| !d.is_one()) {
        return Err(Error::InternalConsistency(
            "right inverse requested for a non-surjective lattice map".into(),
        ));
    }
    // q = U^-1 (I 0) V^-1, so  R := V [I; 0] U  satisfies q R = I.
    let n = q.cols();
    let mut ir0 = IMat::zero(n, r);
    for i in 0..r {
        ir0.set(i, i, BigInt::one());
    }
    Ok(s.v.mul(&ir0).mul(&s.u))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(m: &IMat) {
        let s = snf(m);
        // U M V = D exactly.
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U M V != D for {m:?}");
        // Divisibility chain and nonnegative diagonal.
        let diag = s.diag();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if !w[0].is_zero() {
                assert!((&w[1] % &w[0]).is_zero(), "divisibility fails: {diag:?}");
            } else {
                assert!(w[1].is_zero(), "zero before nonzero in {diag:?}");
            }
        }
        // Off-diagonal zero.
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    assert!(s.d.at(r, c).is_zero());
                }
            }
        }
        // U and V unimodular.
        assert_eq!(det(&s.u).abs(), BigInt::one());
        assert_eq!(det(&s.v).abs(), BigInt::one());
    }

    /// Cofactor-expansion determinant; the independent oracle for the suite.
    pub(crate) fn det(m: &IMat) -> BigInt {
        let n = m.rows();
        assert_eq!(n, m.cols());
        if n == 0 {
            return BigInt::one();
        }
        if n == 1 {
            return m.at(0, 0).clone();
        }
        let mut acc = BigInt::zero();
        for c in 0..n {
            let a = m.at(0, c);
            if a.is_zero() {
                continue;
            }
            let mut sub = IMat::zero(n - 1, n - 1);
            for i in 1..n {
                let mut jj = 0;
                for j in 0..n {
                    if j == c {
                        continue;
                    }
                    sub.set(i - 1, jj, m.at(i, j).clone());
                    jj += 1;
                }
            }
            let term = a * det(&sub);
            if c % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    #[test]
    fn snf_identity() {
        let m = IMat::identity(2);
        let s = snf(&m);
        assert_eq!(s.diag(), vec![BigInt::one(), BigInt::one()]);
        check_snf(&m);
    }

    #[test]
    fn snf_2468() {
        let m = IMat::from_i64(&[&[2, 4], &[6, 8]]);
        let s = snf(&m);
        assert_eq!(s.diag(), vec![BigInt::from(2), BigInt::from(4)]);
        check_snf(&m);
    }

    #[test]
    fn snf_zero_1x1() {
        let m = IMat::from_i64(&[&[0]]);
        let s = snf(&m);
        assert_eq!(s.diag(), vec![BigInt::zero()]);
        check_snf(&m);
    }

    #[test]
    fn snf_random_matrices() {
        let mut rng = crate::detrand::SplitMix64::new(0x5eed_0001);
        for _ in 0..200 {
            let r = 1 + (rng.next_u64() % 5) as usize;
            let c = 1 + (rng.next_u64() % 5) as usize;
            let mut m = IMat::zero(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, BigInt::from(rng.range_i64(-9, 9)));
                }
            }
            check_snf(&m);
        }
    }

    #[test]
    fn lattice_index_examples() {
        let m = IMat::from_i64(&[&[2, 0], &[0, 1]]);
        assert_eq!(lattice_index(&m), Some(BigInt::from(2)));
        assert_eq!(lattice_index(&IMat::identity(3)), Some(BigInt::one()));
        let m = IMat::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(lattice_index(&m), Some(BigInt::from(2)));
        // Cross-check via SNF shape: diag(1, 2).
        let s = snf(&m);
        assert_eq!(s.diag(), vec![BigInt::from(1), BigInt::from(2)]);
        // Rank-deficient rows have infinite index.
        let m = IMat::from_i64(&[&[1, 1]]);
        assert_eq!(lattice_index(&m), None);
    }

    #[test]
    fn lattice_index_matches_det_oracle() {
        let mut rng = crate::detrand::SplitMix64::new(0x5eed_0002);
        let mut checked = 0;
        while checked < 60 {
            let n = 1 + (rng.next_u64() % 4) as usize;
            let mut m = IMat::zero(n, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, BigInt::from(rng.range_i64(-6, 6)));
                }
            }
            let d = det(&m).abs();
            if d.is_zero() {
                assert_eq!(lattice_index(&m), None);
                continue;
            }
            assert_eq!(lattice_index(&m), Some(d));
            checked += 1;
        }
    }

    #[test]
    fn hnf_is_canonical_per_lattice() {
        // Two bases of the same lattice.
        let a = IMat::from_i64(&[&[2, 1, 0], &[0, 0, 1]]);
        let b = IMat::from_i64(&[&[2, 1, 1], &[0, 0, 1], &[2, 1, 2]]);
        assert_eq!(hnf(&a), hnf(&b));
        // Echelon shape with reduced entries above pivots.
        let h = hnf(&IMat::from_i64(&[&[-1, 0, 1, 0], &[0, 1, 0, 0], &[2, 0, 0, 1]]));
        assert_eq!(h, IMat::from_i64(&[&[1, 0, 1, 1], &[0, 1, 0, 0], &[0, 0, 2, 1]]));
    }

    #[test]
    fn integer_kernel_is_saturated() {
        let m = IMat::from_i64(&[&[1, 0, 1, -2]]);
        let k = integer_kernel(&m);
        assert_eq!(k.rows(), 3);
        for r in 0..k.rows() {
            let prod: BigInt = m.row(0).iter().zip(k.row(r)).map(|(a, b)| a * b).sum();
            assert!(prod.is_zero());
        }
        // Saturation: the kernel basis extends to a basis of Z^4.
        let s = snf(&k);
        assert!(s.diag().iter().all(|d| d.is_one()));
    }

    #[test]
    fn right_inverse_works() {
        let q = IMat::from_i64(&[&[1, 0, 1, 1], &[0, 1, 0, 0], &[0, 0, 2, 1]]);
        let r = right_inverse(&q).unwrap();
        assert_eq!(q.mul(&r), IMat::identity(3));
        let bad = IMat::from_i64(&[&[2, 0]]);
        assert!(right_inverse(&bad).is_err());
    }
}
