//! Sublattices of Z^n in canonical Hermite normal form.
//!
//! The basis convention is row-style HNF: basis vectors are the rows, pivot
//! columns strictly increase, pivots are positive, and every entry above a
//! pivot is reduced into `[0, pivot)`. Two lattices are equal iff their
//! canonical bases are identical, so `PartialEq` on the stored basis is a
//! complete equality test.

use crate::error::{Error, Result};
use crate::matrix::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// A sublattice of Z^ambient_rank, stored via its canonical HNF basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    ambient_rank: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::zero(0, ambient_rank),
        }
    }

    pub fn full(ambient_rank: usize) -> Self {
        Lattice {
            ambient_rank,
            basis: IntMatrix::identity(ambient_rank),
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.ambient_rank
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.rows() == 0
    }

    /// Canonical HNF basis, one vector per row.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<BigInt>> {
        self.basis.row_vecs()
    }

    /// Exact membership test by reduction against the HNF pivots.
    pub fn contains(&self, v: &[BigInt]) -> bool {
        if v.len() != self.ambient_rank {
            return false;
        }
        let mut v = v.to_vec();
        for r in 0..self.basis.rows() {
            let p = pivot_col(self.basis.row(r)).expect("HNF basis row cannot be zero");
            let (q, rem) = v[p].div_mod_floor(self.basis.get(r, p));
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for j in 0..self.ambient_rank {
                    v[j] -= &q * self.basis.get(r, j);
                }
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.ambient_rank == self.ambient_rank
            && (0..other.basis.rows()).all(|r| self.contains(other.basis.row(r)))
    }

    /// Invariant factors of Z^ambient / self.
    pub fn quotient_shape(&self) -> QuotientShape {
        let s = smith_normal_form(&self.basis);
        let torsion: Vec<BigInt> = s
            .invariant_factors()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect();
        QuotientShape {
            free_rank: self.ambient_rank - s.rank,
            torsion,
        }
    }

    /// Intersection, computed through an integer kernel: a vector lies in both
    /// lattices iff it is an integral combination of both bases at once.
    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        if self.ambient_rank != other.ambient_rank {
            return Err(Error::DimensionMismatch(
                "lattice intersection in different ambient ranks".into(),
            ));
        }
        let n = self.ambient_rank;
        if self.is_zero() || other.is_zero() {
            return Ok(Lattice::zero(n));
        }
        let r1 = self.basis.rows();
        let r2 = other.basis.rows();
        // Columns: coefficients (u, v) with u*B1 = v*B2, i.e. B1^T u - B2^T v = 0.
        let mut m = IntMatrix::zero(n, r1 + r2);
        for i in 0..n {
            for k in 0..r1 {
                m.set(i, k, self.basis.get(k, i).clone());
            }
            for k in 0..r2 {
                m.set(i, r1 + k, -other.basis.get(k, i));
            }
        }
        let coeff_kernel = kernel(&m);
        let vectors: Vec<Vec<BigInt>> = coeff_kernel
            .basis_vectors()
            .into_iter()
            .map(|uv| {
                (0..n)
                    .map(|j| {
                        (0..r1)
                            .map(|k| &uv[k] * self.basis.get(k, j))
                            .sum::<BigInt>()
                    })
                    .collect()
            })
            .collect();
        hermite_basis(n, vectors)
    }
}

fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Canonical HNF lattice spanned by the given vectors. The empty family (or a
/// family of zero vectors) yields the zero lattice.
pub fn hermite_basis(ambient_rank: usize, vectors: Vec<Vec<BigInt>>) -> Result<Lattice> {
    for v in &vectors {
        if v.len() != ambient_rank {
            return Err(Error::DimensionMismatch(format!(
                "expected vectors of length {ambient_rank}, got {}",
                v.len()
            )));
        }
    }
    let mut rest: Vec<Vec<BigInt>> = vectors
        .into_iter()
        .filter(|v| v.iter().any(|x| !x.is_zero()))
        .collect();
    let mut result: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..ambient_rank {
        loop {
            // Deterministic choice: smallest |entry| in this column, first on tie.
            let mut min_idx: Option<usize> = None;
            let mut nonzero = 0usize;
            for (i, row) in rest.iter().enumerate() {
                if row[col].is_zero() {
                    continue;
                }
                nonzero += 1;
                match min_idx {
                    Some(m) if rest[m][col].abs() <= row[col].abs() => {}
                    _ => min_idx = Some(i),
                }
            }
            let Some(min_idx) = min_idx else { break };
            if nonzero == 1 {
                let mut piv = rest.swap_remove(min_idx);
                if piv[col].is_negative() {
                    for x in piv.iter_mut() {
                        *x = -&*x;
                    }
                }
                result.push(piv);
                break;
            }
            let min_row = rest[min_idx].clone();
            for (i, row) in rest.iter_mut().enumerate() {
                if i == min_idx || row[col].is_zero() {
                    continue;
                }
                let q = row[col].div_floor(&min_row[col]);
                for (x, m) in row.iter_mut().zip(&min_row) {
                    *x -= &q * m;
                }
            }
            rest.retain(|row| row.iter().any(|x| !x.is_zero()));
        }
    }
    debug_assert!(rest.iter().all(|r| r.iter().all(Zero::is_zero)));
    // Reduce entries above each pivot into [0, pivot).
    for k in 0..result.len() {
        let p = pivot_col(&result[k]).expect("pivot row is nonzero");
        for k2 in 0..k {
            let q = result[k2][p].div_floor(&result[k][p]);
            if q.is_zero() {
                continue;
            }
            let lower = result[k].clone();
            for (x, m) in result[k2].iter_mut().zip(&lower) {
                *x -= &q * m;
            }
        }
    }
    // An empty row list carries no column count, so the zero lattice needs
    // its ambient width restored explicitly.
    let basis = if result.is_empty() {
        IntMatrix::zero(0, ambient_rank)
    } else {
        IntMatrix::from_rows(result)?
    };
    Ok(Lattice {
        ambient_rank,
        basis,
    })
}

/// Kernel of the column action `x -> a * x`, as a lattice in Z^cols.
pub fn kernel(a: &IntMatrix) -> Lattice {
    let s = smith_normal_form(a);
    let vectors: Vec<Vec<BigInt>> = (s.rank..a.cols()).map(|j| s.v.col_vec(j)).collect();
    hermite_basis(a.cols(), vectors).expect("kernel vectors have ambient length")
}

/// Solutions of the simultaneous congruences `(m * x)_r ≡ 0 (mod moduli_r)`,
/// where modulus 0 demands exact vanishing. This is computed by augmenting
/// one slack column per nonzero modulus and projecting the integer kernel
/// back onto the original coordinates.
pub fn kernel_with_moduli(m: &IntMatrix, moduli: &[BigInt]) -> Result<Lattice> {
    if moduli.len() != m.rows() {
        return Err(Error::DimensionMismatch(
            "one modulus per matrix row required".into(),
        ));
    }
    if moduli.iter().any(|x| x.is_negative()) {
        return Err(Error::InvalidInput("moduli must be non-negative".into()));
    }
    let n = m.cols();
    let slack: Vec<usize> = (0..m.rows()).filter(|&r| !moduli[r].is_zero()).collect();
    let mut a = IntMatrix::zero(m.rows(), n + slack.len());
    for i in 0..m.rows() {
        for j in 0..n {
            a.set(i, j, m.get(i, j).clone());
        }
    }
    for (k, &r) in slack.iter().enumerate() {
        a.set(r, n + k, moduli[r].clone());
    }
    let full = kernel(&a);
    let projected: Vec<Vec<BigInt>> = full
        .basis_vectors()
        .into_iter()
        .map(|v| v[..n].to_vec())
        .collect();
    hermite_basis(n, projected)
}

/// One solution of `(a * x)_r ≡ b_r (mod moduli_r)` (modulus 0 = exact), if any.
pub fn solve_with_moduli(
    a: &IntMatrix,
    moduli: &[BigInt],
    b: &[BigInt],
) -> Result<Option<Vec<BigInt>>> {
    if moduli.len() != a.rows() || b.len() != a.rows() {
        return Err(Error::DimensionMismatch(
            "one modulus and one target entry per row required".into(),
        ));
    }
    let n = a.cols();
    let slack: Vec<usize> = (0..a.rows()).filter(|&r| !moduli[r].is_zero()).collect();
    let mut aug = IntMatrix::zero(a.rows(), n + slack.len());
    for i in 0..a.rows() {
        for j in 0..n {
            aug.set(i, j, a.get(i, j).clone());
        }
    }
    for (k, &r) in slack.iter().enumerate() {
        aug.set(r, n + k, moduli[r].clone());
    }
    let s = smith_normal_form(&aug);
    let c = s.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); aug.cols()];
    for (i, ci) in c.iter().enumerate() {
        if i < s.rank {
            let (q, r) = ci.div_mod_floor(s.d.get(i, i));
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return Ok(None);
        }
    }
    let x_full = s.v.mul_vec(&y);
    Ok(Some(x_full[..n].to_vec()))
}

/// Isomorphism type of a quotient Z^n / L: a free rank plus a divisor chain
/// of torsion orders (each > 1, each dividing the next).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientShape {
    pub free_rank: usize,
    #[serde(with = "crate::serde_util::bigint_vec")]
    pub torsion: Vec<BigInt>,
}

impl QuotientShape {
    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Product of the torsion orders (1 when the quotient is free).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product::<BigInt>().max(BigInt::one())
    }

    /// Distinct primes dividing the torsion order, ascending.
    pub fn torsion_primes(&self) -> Vec<BigInt> {
        let mut n = self.torsion_order();
        let mut primes = Vec::new();
        let mut p = BigInt::from(2);
        while &p * &p <= n {
            if n.mod_floor(&p).is_zero() {
                primes.push(p.clone());
                while n.mod_floor(&p).is_zero() {
                    n /= &p;
                }
            }
            p += 1;
        }
        if n > BigInt::one() {
            primes.push(n);
        }
        primes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn hermite_empty_input_is_zero_lattice() {
        let l = hermite_basis(3, vec![]).unwrap();
        assert!(l.is_zero());
        assert!(l.contains(&[BigInt::zero(), BigInt::zero(), BigInt::zero()]));
    }

    #[test]
    fn hermite_canonical_form_properties() {
        let l = hermite_basis(3, vecs(&[&[3, 0, 0], &[0, 3, 0], &[1, 1, 1]])).unwrap();
        let b = l.basis();
        // Pivots positive and strictly right-moving, entries above reduced.
        let mut last_pivot: Option<usize> = None;
        for r in 0..b.rows() {
            let p = b.row(r).iter().position(|x| !x.is_zero()).unwrap();
            if let Some(lp) = last_pivot {
                assert!(p > lp);
            }
            last_pivot = Some(p);
            assert!(b.get(r, p) > &BigInt::zero());
            for r2 in 0..r {
                assert!(b.get(r2, p) >= &BigInt::zero() && b.get(r2, p) < b.get(r, p));
            }
        }
    }

    #[test]
    fn kernel_with_moduli_spec_case() {
        let m = IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]);
        let moduli = vec![BigInt::from(3), BigInt::from(3)];
        let l = kernel_with_moduli(&m, &moduli).unwrap();
        let expected = hermite_basis(2, vecs(&[&[3, 0], &[0, 3]])).unwrap();
        assert_eq!(l, expected);
    }

    #[test]
    fn kernel_of_skew_rank2_block() {
        // Rows constrain coordinates 2 and 3; coordinate 1 is free.
        let m = IntMatrix::from_i64(&[&[0, 0, 0], &[0, 0, 2], &[0, -2, 0]]);
        let l = kernel_with_moduli(&m, &[BigInt::zero(), BigInt::zero(), BigInt::zero()]).unwrap();
        let expected = hermite_basis(3, vecs(&[&[1, 0, 0]])).unwrap();
        assert_eq!(l, expected);
    }

    #[test]
    fn quotient_shape_of_2_3_block() {
        let l = hermite_basis(2, vecs(&[&[2, 0], &[0, 3]])).unwrap();
        let q = l.quotient_shape();
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.torsion, vec![BigInt::from(6)]);
        assert_eq!(q.torsion_primes(), vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn quotient_shape_counts_free_rank() {
        let l = hermite_basis(3, vecs(&[&[1, 0, 0]])).unwrap();
        let q = l.quotient_shape();
        assert_eq!(q.free_rank, 2);
        assert!(q.is_free());
        assert_eq!(q.torsion_order(), BigInt::one());
    }

    #[test]
    fn membership_brute_force_agreement() {
        // 2x + 3y - z = 0 solutions form a rank-2 lattice.
        let m = IntMatrix::from_i64(&[&[2, 3, -1]]);
        let l = kernel_with_moduli(&m, &[BigInt::zero()]).unwrap();
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                for z in -6i64..=6 {
                    let v = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
                    let satisfied = 2 * x + 3 * y - z == 0;
                    assert_eq!(l.contains(&v), satisfied, "({x},{y},{z})");
                }
            }
        }
    }

    #[test]
    fn kernel_with_moduli_box_oracle_random() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let rows = rng.gen_range(1..=3);
            let mut m = IntMatrix::zero(rows, n);
            for i in 0..rows {
                for j in 0..n {
                    m.set(i, j, BigInt::from(rng.gen_range(-3i64..=3)));
                }
            }
            let moduli: Vec<BigInt> = (0..rows)
                .map(|_| BigInt::from(*[0i64, 2, 3, 5].get(rng.gen_range(0..4)).unwrap()))
                .collect();
            let l = kernel_with_moduli(&m, &moduli).unwrap();
            // Exhaustive box check in both directions.
            let mut coords = vec![-6i64; n];
            loop {
                let v: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
                let mut ok = true;
                for r in 0..rows {
                    let dot: i64 = (0..n)
                        .map(|j| {
                            let e: i64 = m.get(r, j).try_into().unwrap();
                            e * coords[j]
                        })
                        .sum();
                    let md: i64 = (&moduli[r]).try_into().unwrap();
                    ok &= if md == 0 { dot == 0 } else { dot.rem_euclid(md) == 0 };
                }
                assert_eq!(l.contains(&v), ok, "m={m:?} moduli={moduli:?} v={coords:?}");
                // advance box counter
                let mut k = 0;
                loop {
                    if k == n {
                        break;
                    }
                    coords[k] += 1;
                    if coords[k] <= 6 {
                        break;
                    }
                    coords[k] = -6;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        }
    }

    #[test]
    fn intersection_matches_membership() {
        let a = hermite_basis(3, vecs(&[&[2, 0, 0], &[0, 1, 0]])).unwrap();
        let b = hermite_basis(3, vecs(&[&[1, 1, 0], &[0, 3, 0]])).unwrap();
        let c = a.intersect(&b).unwrap();
        for x in -6i64..=6 {
            for y in -6i64..=6 {
                let v = [BigInt::from(x), BigInt::from(y), BigInt::zero()];
                assert_eq!(c.contains(&v), a.contains(&v) && b.contains(&v));
            }
        }
        let z = [BigInt::zero(), BigInt::zero(), BigInt::one()];
        assert!(!c.contains(&z));
    }

    #[test]
    fn solve_with_moduli_finds_witness() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let moduli = vec![BigInt::from(4), BigInt::zero()];
        let b = vec![BigInt::from(2), BigInt::from(6)];
        let x = solve_with_moduli(&a, &moduli, &b).unwrap().unwrap();
        assert_eq!(
            (BigInt::from(2) * &x[0] - BigInt::from(2)).mod_floor(&BigInt::from(4)),
            BigInt::zero()
        );
        assert_eq!(BigInt::from(3) * &x[1], BigInt::from(6));
        // And an inconsistent system.
        let b_bad = vec![BigInt::from(1), BigInt::from(6)];
        assert!(solve_with_moduli(&a, &moduli, &b_bad).unwrap().is_none());
    }

    proptest! {
        #[test]
        fn hermite_is_idempotent_and_span_invariant(
            rows in proptest::collection::vec(
                proptest::collection::vec(-6i64..=6, 3),
                0..5,
            )
        ) {
            let vectors: Vec<Vec<BigInt>> =
                rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
            let l = hermite_basis(3, vectors.clone()).unwrap();
            // Idempotence: re-canonicalizing the basis changes nothing.
            let again = hermite_basis(3, l.basis_vectors()).unwrap();
            prop_assert_eq!(&l, &again);
            // Span invariance: every generator lies in the lattice, and
            // shuffling + adding random combinations keeps the same lattice.
            for v in &vectors {
                prop_assert!(l.contains(v));
            }
            let mut shuffled = vectors.clone();
            shuffled.reverse();
            if vectors.len() >= 2 {
                let combo: Vec<BigInt> = vectors[0]
                    .iter()
                    .zip(&vectors[1])
                    .map(|(a, b)| a + b * BigInt::from(3))
                    .collect();
                shuffled.push(combo);
            }
            let l2 = hermite_basis(3, shuffled).unwrap();
            prop_assert_eq!(l, l2);
        }
    }
}
