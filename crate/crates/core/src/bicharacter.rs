//! Commutation matrices and the alternating bicharacters they induce on `Z^n`.
//!
//! A commutation matrix `q` with entries in the scalar group determines the
//! bicharacter `σ(α, β) = ∏ q[i][j]^(α_i β_j)`. Everything downstream —
//! radicals, square roots, adapted cocycles — is linear algebra over the
//! exponent matrices of `σ`: one antisymmetric integer matrix per free
//! generator and one matrix that is antisymmetric modulo the torsion order.

use crate::error::{Error, Result};
use crate::lattice::{self, Lattice};
use crate::matrix::{smith_normal_form, IntMatrix};
use crate::scalars::{GroupElement, HalfElement, ScalarGroup};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize, Serializer};

/// A raw n×n matrix over the scalar group, prior to validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    n: usize,
    group: ScalarGroup,
    entries: Vec<GroupElement>,
}

impl QMatrix {
    pub fn new(group: ScalarGroup, n: usize, entries: Vec<GroupElement>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(format!(
                "a {n}×{n} matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        let entries = entries
            .into_iter()
            .map(|e| group.element(e.free_exponents().to_vec(), e.torsion_exponent().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(QMatrix { n, group, entries })
    }

    /// Build a full matrix from the strictly upper entries (0-based `i < j`),
    /// filling `q[j][i] = q[i][j]^{-1}` and an identity diagonal. Entries not
    /// supplied default to the identity; duplicates are rejected.
    pub fn from_upper_entries(
        group: ScalarGroup,
        n: usize,
        upper: &[(usize, usize, GroupElement)],
    ) -> Result<Self> {
        let mut entries = vec![group.identity(); n * n];
        let mut seen = vec![false; n * n];
        for (i, j, q) in upper {
            if *i >= *j || *j >= n {
                return Err(Error::InvalidInput(format!(
                    "entry position ({i}, {j}) is not strictly upper triangular in a {n}×{n} matrix (0-based)"
                )));
            }
            if seen[i * n + j] {
                return Err(Error::InvalidInput(format!(
                    "duplicate entry for position ({i}, {j})"
                )));
            }
            seen[i * n + j] = true;
            entries[i * n + j] =
                group.element(q.free_exponents().to_vec(), q.torsion_exponent().clone())?;
            entries[j * n + i] = group.inverse(&entries[i * n + j]);
        }
        Ok(QMatrix { n, group, entries })
    }

    /// The single-parameter family `q[i][j] = q^(b_ij)`: for `t = 0` the base
    /// `q` is a free generator (infinite multiplicative order), for `t ≥ 1`
    /// it is a primitive t-th root of unity. `b` must be antisymmetric and
    /// defaults to the standard form with `b_ij = 1` for `i < j`.
    pub fn uniparameter(n: usize, t: u64, char_two: bool, b: Option<IntMatrix>) -> Result<Self> {
        let b = match b {
            Some(b) => {
                if b.rows() != n || b.cols() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "exponent matrix must be {n}×{n}, got {}×{}",
                        b.rows(),
                        b.cols()
                    )));
                }
                if !b.is_antisymmetric() {
                    return Err(Error::InvalidInput(
                        "the exponent matrix of a single-parameter family must be antisymmetric"
                            .into(),
                    ));
                }
                b
            }
            None => standard_skew_matrix(n),
        };
        let group = if t == 0 {
            ScalarGroup::new(1, BigInt::one(), char_two)?
        } else {
            ScalarGroup::new(0, BigInt::from(t), char_two)?
        };
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let e = b.get(i, j).clone();
                entries.push(if t == 0 {
                    group.element(vec![e], BigInt::zero())?
                } else {
                    group.element(vec![], e)?
                });
            }
        }
        Ok(QMatrix { n, group, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &ScalarGroup {
        &self.group
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupElement {
        &self.entries[i * self.n + j]
    }

    /// Check the two structural requirements — identity diagonal and
    /// `q[i][j] q[j][i] = 1` — and extract the exponent matrices.
    pub fn validate(&self) -> Result<Bicharacter> {
        let n = self.n;
        for i in 0..n {
            if !self.entry(i, i).is_identity() {
                return Err(Error::DiagonalNotIdentity { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if !self.group.mul(self.entry(i, j), self.entry(j, i)).is_identity() {
                    return Err(Error::Antisymmetry { i, j });
                }
            }
        }
        let a = self.group.free_rank();
        let mut free_mats = vec![IntMatrix::zero(n, n); a];
        let mut torsion_mat = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let q = self.entry(i, j);
                for (l, mat) in free_mats.iter_mut().enumerate() {
                    mat.set(i, j, q.free_exponents()[l].clone());
                }
                torsion_mat.set(i, j, q.torsion_exponent().clone());
            }
        }
        debug_assert!(free_mats.iter().all(IntMatrix::is_antisymmetric));
        debug_assert!(torsion_mat.is_antisymmetric_mod(self.group.torsion_order()));
        Ok(Bicharacter {
            n,
            group: self.group.clone(),
            free_mats,
            torsion_mat,
        })
    }
}

/// `b_ij = 1` for `i < j`, `-1` for `i > j`.
pub fn standard_skew_matrix(n: usize) -> IntMatrix {
    let mut b = IntMatrix::zero(n, n);
    for i in 0..n {
        for j in i + 1..n {
            b.set(i, j, BigInt::one());
            b.set(j, i, -BigInt::one());
        }
    }
    b
}

/// A validated alternating bicharacter on `Z^n`, stored through its exponent
/// matrices. Free matrices are antisymmetric over `Z`; the torsion matrix is
/// antisymmetric modulo the torsion order with entries reduced into `[0, m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bicharacter {
    n: usize,
    group: ScalarGroup,
    free_mats: Vec<IntMatrix>,
    torsion_mat: IntMatrix,
}

impl Bicharacter {
    /// Assemble directly from exponent matrices (checked for antisymmetry).
    pub fn from_exponents(
        group: ScalarGroup,
        n: usize,
        free_mats: Vec<IntMatrix>,
        torsion_mat: IntMatrix,
    ) -> Result<Self> {
        if free_mats.len() != group.free_rank() {
            return Err(Error::DimensionMismatch(format!(
                "expected {} free exponent matrices, got {}",
                group.free_rank(),
                free_mats.len()
            )));
        }
        for mat in free_mats.iter().chain(std::iter::once(&torsion_mat)) {
            if mat.rows() != n || mat.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "exponent matrices must be {n}×{n}, got {}×{}",
                    mat.rows(),
                    mat.cols()
                )));
            }
        }
        for mat in &free_mats {
            if !mat.is_antisymmetric() {
                return Err(Error::InvalidInput(
                    "free exponent matrices must be antisymmetric".into(),
                ));
            }
        }
        let m = group.torsion_order().clone();
        if !torsion_mat.is_antisymmetric_mod(&m) {
            return Err(Error::InvalidInput(
                "the torsion exponent matrix must be antisymmetric modulo the torsion order"
                    .into(),
            ));
        }
        Ok(Bicharacter {
            n,
            group,
            free_mats,
            torsion_mat: torsion_mat.reduced_mod(&m),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &ScalarGroup {
        &self.group
    }

    pub fn free_exponent_matrices(&self) -> &[IntMatrix] {
        &self.free_mats
    }

    pub fn torsion_exponent_matrix(&self) -> &IntMatrix {
        &self.torsion_mat
    }

    /// Recover the commutation scalar `q[i][j] = σ(e_i, e_j)`.
    pub fn entry(&self, i: usize, j: usize) -> GroupElement {
        let mut e_i = vec![BigInt::zero(); self.n];
        let mut e_j = vec![BigInt::zero(); self.n];
        e_i[i] = BigInt::one();
        e_j[j] = BigInt::one();
        self.sigma(&e_i, &e_j)
    }

    pub fn sigma(&self, alpha: &[BigInt], beta: &[BigInt]) -> GroupElement {
        assert_eq!(alpha.len(), self.n, "left argument has wrong length");
        assert_eq!(beta.len(), self.n, "right argument has wrong length");
        let free = self
            .free_mats
            .iter()
            .map(|mat| mat.pairing(alpha, beta))
            .collect();
        let torsion = self.torsion_mat.pairing(alpha, beta);
        self.group
            .element(free, torsion)
            .expect("exponent vector length is fixed by construction")
    }

    /// The radical of `σ` restricted to the coordinate subgroup on the
    /// complement of `w`: all vectors supported outside `w` that pair
    /// trivially with every coordinate vector outside `w`. `w` is 0-based,
    /// strictly increasing.
    pub fn radical(&self, w: &[usize]) -> Result<Lattice> {
        validate_support(self.n, w)?;
        let n = self.n;
        let m = self.group.torsion_order();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        let mut moduli: Vec<BigInt> = Vec::new();
        for &i in w {
            let mut unit = vec![BigInt::zero(); n];
            unit[i] = BigInt::one();
            rows.push(unit);
            moduli.push(BigInt::zero());
        }
        let complement: Vec<usize> = (0..n).filter(|j| !w.contains(j)).collect();
        for mat in &self.free_mats {
            for &j in &complement {
                rows.push(mat.col_vec(j));
                moduli.push(BigInt::zero());
            }
        }
        if self.group.has_torsion() {
            for &j in &complement {
                rows.push(self.torsion_mat.col_vec(j));
                moduli.push(m.clone());
            }
        }
        if rows.is_empty() {
            // No constraints at all (trivial scalar group, empty w): the
            // radical is the whole coordinate subgroup.
            let units = complement
                .iter()
                .map(|&j| {
                    let mut unit = vec![BigInt::zero(); n];
                    unit[j] = BigInt::one();
                    unit
                })
                .collect();
            return lattice::hermite_basis(n, units);
        }
        let a = IntMatrix::from_rows(rows)?;
        lattice::kernel_with_moduli(&a, &moduli)
    }

    /// The square root `c` with `c(α, β)^2 = σ(α, β)`, which exists uniquely
    /// within the half-exponent extension exactly when the torsion order is
    /// odd. Free exponents double; on the torsion side the inverse of
    /// doubling is multiplication by `(m+1)/2`.
    pub fn sqrt(&self) -> Result<SqrtBicharacter> {
        if self.group.torsion_order().is_even() {
            return Err(Error::Hypothesis(if self.group.char_two() {
                "the scalar group declares characteristic 2 together with an even torsion \
                 order, but the multiplicative group of a characteristic-2 field has no \
                 even-order elements; the declared group is unsatisfiable over any field"
                    .into()
            } else {
                "the torsion order is even, so -1 lies in the group generated by the \
                 commutation scalars and the bicharacter has no square root within the \
                 group (and the characteristic is not 2)"
                    .into()
            }));
        }
        let m = self.group.torsion_order();
        let half = (m + BigInt::one()) / BigInt::from(2);
        Ok(SqrtBicharacter {
            n: self.n,
            group: self.group.clone(),
            doubled_free_mats: self.free_mats.clone(),
            half_torsion_mat: self.torsion_mat.scale(&half).reduced_mod(m),
        })
    }

    /// A bilinear cocycle `c` with `c(α, β) c(β, α)^{-1} = σ(α, β)`, written
    /// in a basis adapted to the given lattice `s`: Smith reduction of a
    /// basis of `s` yields γ_1, ..., γ_n with `s` spanned by the `d_i γ_i`.
    /// Taking the strictly upper part of `σ`'s Gram matrix in that basis and
    /// transporting back to standard coordinates gives a cocycle that pairs
    /// trivially (on either side) with every vector of `s` against anything
    /// `s` itself pairs `σ`-trivially with. No hypothesis on the scalar
    /// group is needed: validity of `q` already forces `σ(α, α) = 1`, which
    /// is all the construction uses.
    pub fn adapted_cocycle(&self, s: &Lattice) -> Result<AdaptedCocycle> {
        if s.ambient_rank() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "lattice lives in rank {}, bicharacter in rank {}",
                s.ambient_rank(),
                self.n
            )));
        }
        let m = self.group.torsion_order();
        let snf = smith_normal_form(s.basis());
        let gamma = snf.v_inv.clone();
        let v = snf.v.clone();
        let mut orders = snf.invariant_factors();
        orders.resize(self.n, BigInt::zero());

        let transport = |e: &IntMatrix| {
            let p = gamma.mul(e).mul(&gamma.transpose());
            v.mul(&p.strict_upper()).mul(&v.transpose())
        };
        let free_mats: Vec<IntMatrix> = self.free_mats.iter().map(transport).collect();
        let torsion_mat = transport(&self.torsion_mat).reduced_mod(m);
        debug_assert!(free_mats
            .iter()
            .zip(&self.free_mats)
            .all(|(c, e)| c.sub(&c.transpose()) == *e));
        Ok(AdaptedCocycle {
            n: self.n,
            group: self.group.clone(),
            gamma_basis: gamma,
            orders,
            free_mats,
            torsion_mat,
        })
    }

    /// Diagnostic summary of the standing hypothesis (−1 is not a
    /// commutation scalar) together with consistency checks between the
    /// declared field characteristic and the scalar group. Conflicting
    /// declarations are reported, never silently repaired.
    pub fn hypothesis_report(&self, declared_char: Option<u64>) -> HypothesisReport {
        let group = &self.group;
        let minus_one_in_group = group.contains_minus_one();
        let mut flags = Vec::new();
        if let Some(p) = declared_char {
            if group.char_two() && p != 2 {
                flags.push(format!(
                    "the scalar group is marked as characteristic 2 but the declared field \
                     characteristic is {p}"
                ));
            }
            if !group.char_two() && p == 2 {
                flags.push(
                    "the declared field characteristic is 2 but the scalar group is not \
                     marked as characteristic 2"
                        .into(),
                );
            }
            if p != 0 && !is_prime(p) {
                flags.push(format!("the declared field characteristic {p} is not prime"));
            }
        }
        let effective_char = declared_char.or(if group.char_two() { Some(2) } else { None });
        if let Some(p) = effective_char {
            if p != 0
                && group.has_torsion()
                && group.torsion_order().mod_floor(&BigInt::from(p)).is_zero()
            {
                flags.push(format!(
                    "a field of characteristic {p} contains no root of unity of order \
                     divisible by {p}, but the torsion order is {}",
                    group.torsion_order()
                ));
            }
        }
        HypothesisReport {
            minus_one_in_group,
            satisfied: !minus_one_in_group,
            declared_characteristic: declared_char,
            flags,
        }
    }
}

fn validate_support(n: usize, w: &[usize]) -> Result<()> {
    for (k, &i) in w.iter().enumerate() {
        if i >= n {
            return Err(Error::InvalidInput(format!(
                "index {i} out of range for n = {n} (0-based)"
            )));
        }
        if k > 0 && w[k - 1] >= i {
            return Err(Error::InvalidInput(
                "support indices must be strictly increasing".into(),
            ));
        }
    }
    Ok(())
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2 - u64::from(d == 2);
    }
    true
}

/// The square root of a bicharacter; values live in the half-exponent
/// extension of the scalar group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtBicharacter {
    n: usize,
    group: ScalarGroup,
    /// Per free generator: the exponent matrix in the doubled representation
    /// (the value is `generator^(entry/2)`).
    doubled_free_mats: Vec<IntMatrix>,
    half_torsion_mat: IntMatrix,
}

impl SqrtBicharacter {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group(&self) -> &ScalarGroup {
        &self.group
    }

    pub fn doubled_free_matrices(&self) -> &[IntMatrix] {
        &self.doubled_free_mats
    }

    pub fn half_torsion_matrix(&self) -> &IntMatrix {
        &self.half_torsion_mat
    }

    pub fn eval(&self, alpha: &[BigInt], beta: &[BigInt]) -> HalfElement {
        assert_eq!(alpha.len(), self.n, "left argument has wrong length");
        assert_eq!(beta.len(), self.n, "right argument has wrong length");
        let doubled = self
            .doubled_free_mats
            .iter()
            .map(|mat| mat.pairing(alpha, beta))
            .collect();
        let torsion = self.half_torsion_mat.pairing(alpha, beta);
        self.group
            .half_element(doubled, torsion)
            .expect("exponent vector length is fixed by construction")
    }
}

impl Serialize for SqrtBicharacter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            doubled_free_matrices: &'a [IntMatrix],
            half_torsion_matrix: &'a IntMatrix,
        }
        Repr {
            doubled_free_matrices: &self.doubled_free_mats,
            half_torsion_matrix: &self.half_torsion_mat,
        }
        .serialize(s)
    }
}

/// A cocycle splitting of a bicharacter in coordinates adapted to a lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedCocycle {
    n: usize,
    group: ScalarGroup,
    /// Rows are the adapted basis vectors γ_i of `Z^n`.
    gamma_basis: IntMatrix,
    /// `orders[i]` is the invariant factor d_i scaling γ_i into the lattice
    /// (0 where the quotient is free).
    orders: Vec<BigInt>,
    free_mats: Vec<IntMatrix>,
    torsion_mat: IntMatrix,
}

impl AdaptedCocycle {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adapted_basis(&self) -> &IntMatrix {
        &self.gamma_basis
    }

    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn free_exponent_matrices(&self) -> &[IntMatrix] {
        &self.free_mats
    }

    pub fn torsion_exponent_matrix(&self) -> &IntMatrix {
        &self.torsion_mat
    }

    pub fn eval(&self, alpha: &[BigInt], beta: &[BigInt]) -> GroupElement {
        assert_eq!(alpha.len(), self.n, "left argument has wrong length");
        assert_eq!(beta.len(), self.n, "right argument has wrong length");
        let free = self
            .free_mats
            .iter()
            .map(|mat| mat.pairing(alpha, beta))
            .collect();
        let torsion = self.torsion_mat.pairing(alpha, beta);
        self.group
            .element(free, torsion)
            .expect("exponent vector length is fixed by construction")
    }
}

impl Serialize for AdaptedCocycle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            adapted_basis: &'a IntMatrix,
            orders: Vec<String>,
            free_exponent_matrices: &'a [IntMatrix],
            torsion_exponent_matrix: &'a IntMatrix,
        }
        Repr {
            adapted_basis: &self.gamma_basis,
            orders: self.orders.iter().map(|d| d.to_string()).collect(),
            free_exponent_matrices: &self.free_mats,
            torsion_exponent_matrix: &self.torsion_mat,
        }
        .serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    /// Whether −1 occurs among the values the commutation scalars can take.
    pub minus_one_in_group: bool,
    /// The standing hypothesis: −1 is not a commutation scalar.
    pub satisfied: bool,
    pub declared_characteristic: Option<u64>,
    /// Human-readable consistency warnings about the declared field.
    pub flags: Vec<String>,
}
