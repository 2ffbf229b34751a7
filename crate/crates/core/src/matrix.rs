//! Dense matrices over arbitrary-precision integers, plus the Smith normal
//! form with tracked unimodular transforms.
//!
//! The Smith routine follows the classical elimination scheme: move the
//! smallest-magnitude nonzero entry of the trailing block to the pivot
//! position, clear its row and column by floor division, fold any
//! non-divisible trailing entry into the pivot row, and repeat. Pivot
//! selection is deterministic (smallest absolute value, ties broken by lowest
//! row then lowest column), so decompositions are reproducible byte for byte.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

/// Row-major dense integer matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor used throughout the test suites.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows
                .iter()
                .flat_map(|row| row.iter().map(|&x| BigInt::from(x)))
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a * other.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    /// `self * x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    /// `x^T * self * y` — the bilinear form this matrix represents.
    pub fn pairing(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        assert_eq!(self.rows, x.len());
        assert_eq!(self.cols, y.len());
        let mut acc = BigInt::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            let mut row_acc = BigInt::zero();
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                row_acc += self.get(i, j) * yj;
            }
            acc += xi * row_acc;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Antisymmetric with zero diagonal, over the integers.
    pub fn is_antisymmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).is_zero()
                    && (0..i).all(|j| *self.get(i, j) == -self.get(j, i))
            })
    }

    /// Antisymmetric with zero diagonal, modulo `m`.
    pub fn is_antisymmetric_mod(&self, m: &BigInt) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                self.get(i, i).mod_floor(m).is_zero()
                    && (0..i).all(|j| (self.get(i, j) + self.get(j, i)).mod_floor(m).is_zero())
            })
    }

    /// Entrywise reduction into `[0, m)`.
    pub fn reduced_mod(&self, m: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mod_floor(m)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    /// Keep entries strictly above the diagonal, zero elsewhere.
    pub fn strict_upper(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_i -= q * row_k
    fn row_sub_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.get(k, j);
            let v = self.get(i, j) - delta;
            self.set(i, j, v);
        }
    }

    /// row_i += q * row_k
    fn row_add_mul(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let delta = q * self.get(k, j);
            let v = self.get(i, j) + delta;
            self.set(i, j, v);
        }
    }

    /// row_i += row_k
    fn row_add(&mut self, i: usize, k: usize) {
        for j in 0..self.cols {
            let v = self.get(i, j) + self.get(k, j);
            self.set(i, j, v);
        }
    }

    /// col_j -= q * col_k
    fn col_sub_mul(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let delta = q * self.get(i, k);
            let v = self.get(i, j) - delta;
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }

    /// Determinant by the fraction-free Bareiss scheme (square matrices only).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                match (k + 1..n).find(|&l| !m.get(l, k).is_zero()) {
                    Some(l) => {
                        m.swap_rows(k, l);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                    m.set(i, j, num / &prev);
                }
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        if repr.entries.len() != repr.rows * repr.cols {
            return Err(serde::de::Error::custom("matrix entry count mismatch"));
        }
        let data = repr
            .entries
            .iter()
            .map(|x| BigInt::from_str(x).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntMatrix {
            rows: repr.rows,
            cols: repr.cols,
            data,
        })
    }
}

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal with a
/// non-negative divisor chain `d_1 | d_2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Exact inverse of `v`, tracked through the column operations.
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// The diagonal invariant factors, one per pivot.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

fn find_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs: Option<BigInt> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            let v = d.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            match &best_abs {
                Some(b) if a >= *b => {}
                _ => {
                    best_abs = Some(a);
                    best = Some((i, j));
                }
            }
        }
    }
    best
}

fn find_nondivisible(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let pivot = d.get(t, t);
    for i in t + 1..d.rows() {
        for j in t + 1..d.cols() {
            if !d.get(i, j).mod_floor(pivot).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let lim = rows.min(cols);
    let mut t = 0;
    while t < lim {
        let Some((pi, pj)) = find_pivot(&d, t) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        // Clear column t.
        let mut clean = true;
        for i in t + 1..rows {
            if d.get(i, t).is_zero() {
                continue;
            }
            let (q, r) = d.get(i, t).div_mod_floor(d.get(t, t));
            d.row_sub_mul(i, t, &q);
            u.row_sub_mul(i, t, &q);
            if !r.is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue; // remainders became strictly smaller pivot candidates
        }
        // Clear row t. Column t stays intact: the cleared entries below the
        // pivot are zero, so subtracting multiples of column t only touches
        // row t itself.
        for j in t + 1..cols {
            if d.get(t, j).is_zero() {
                continue;
            }
            let (q, r) = d.get(t, j).div_mod_floor(d.get(t, t));
            d.col_sub_mul(j, t, &q);
            v.col_sub_mul(j, t, &q);
            v_inv.row_add_mul(t, j, &q);
            if !r.is_zero() {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Divisor-chain repair: drag a non-divisible trailing entry into the
        // pivot row and restart this step; the next pivot shrinks to a gcd.
        if let Some((bi, _bj)) = find_nondivisible(&d, t) {
            d.row_add(t, bi);
            u.row_add(t, bi);
            continue;
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    SmithDecomposition {
        u,
        d,
        v,
        v_inv,
        rank: t,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_decomposition(m: &IntMatrix) {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "u*m*v != d for {m:?}");
        assert_eq!(s.u.det().abs(), BigInt::one(), "u not unimodular");
        assert_eq!(s.v.det().abs(), BigInt::one(), "v not unimodular");
        assert_eq!(
            s.v.mul(&s.v_inv),
            IntMatrix::identity(m.cols()),
            "v_inv is not the inverse of v"
        );
        // Diagonal, non-negative, divisor chain.
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero(), "off-diagonal residue");
                }
            }
        }
        let diag: Vec<BigInt> = (0..s.d.rows().min(s.d.cols()))
            .map(|i| s.d.get(i, i).clone())
            .collect();
        for w in diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero(), "zero before nonzero on diagonal");
            }
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!(w[1].mod_floor(&w[0]).is_zero(), "divisor chain broken");
            }
        }
        assert!(diag.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn smith_of_diag_2_3_is_1_6() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.d, IntMatrix::from_i64(&[&[1, 0], &[0, 6]]));
        check_decomposition(&m);
    }

    #[test]
    fn smith_fixed_cases() {
        for m in [
            IntMatrix::from_i64(&[&[0, 0], &[0, 0]]),
            IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]),
            IntMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]),
            IntMatrix::from_i64(&[&[1, -1, 1]]),
            IntMatrix::from_i64(&[&[3], &[6], &[9]]),
            IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]),
        ] {
            check_decomposition(&m);
        }
    }

    #[test]
    fn smith_random_small_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let mut m = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, BigInt::from(rng.gen_range(-8i64..=8)));
                }
            }
            check_decomposition(&m);
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion_on_small_cases() {
        let m = IntMatrix::from_i64(&[&[2, -3], &[4, 5]]);
        assert_eq!(m.det(), BigInt::from(22));
        let m = IntMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(m.det(), BigInt::from(-3));
        let singular = IntMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det(), BigInt::zero());
    }

    #[test]
    fn pairing_is_bilinear() {
        let e = IntMatrix::from_i64(&[&[0, 2, -1], &[-2, 0, 3], &[1, -3, 0]]);
        let a = [BigInt::from(1), BigInt::from(-2), BigInt::from(4)];
        let b = [BigInt::from(3), BigInt::from(0), BigInt::from(-1)];
        let ab = e.pairing(&a, &b);
        let ba = e.pairing(&b, &a);
        assert_eq!(ab, -ba, "antisymmetric form must flip sign");
        let sum: Vec<BigInt> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        assert_eq!(e.pairing(&sum, &b), e.pairing(&a, &b) + e.pairing(&b, &b));
    }

    #[test]
    fn serde_round_trip() {
        let m = IntMatrix::from_i64(&[&[1, -2], &[300000000000, 4]]);
        let json = serde_json::to_string(&m).unwrap();
        let back: IntMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(m, back);
    }
}
