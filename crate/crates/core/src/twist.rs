//! Reduction of graded twists of commutative polynomial presentations to the
//! quantum-affine machinery.
//!
//! A presentation records generators `r_1..r_n` of a commutative polynomial
//! algebra graded by `Z^m`, with degrees `δ_i`, together with a bicharacter
//! cocycle `c` on `Z^m`. Twisting the multiplication by `c` produces an
//! algebra whose generators commute up to the scalars
//! `q̃_ij = c(δ_i,δ_j) c(δ_j,δ_i)^{-1}`, so the twist embeds into the quantum
//! affine space with matrix `q̃` and the whole stratification analysis
//! applies to that ambient space. The cocycle need not be alternating: only
//! its antisymmetrization survives into `q̃`, which is how a symmetric
//! cocycle yields a commutative ambient space.

use crate::bicharacter::{Bicharacter, QMatrix};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::scalars::{GroupElement, ScalarGroup};
use num_bigint::BigInt;

/// A commutative presentation graded by `Z^m`, plus the twisting cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPresentation {
    n: usize,
    grading_rank: usize,
    degrees: Vec<Vec<BigInt>>,
    group: ScalarGroup,
    cocycle: Vec<GroupElement>,
}

impl GradedPresentation {
    /// `degrees` holds one vector of length `grading_rank` per generator;
    /// `cocycle` is the full `grading_rank × grading_rank` value table
    /// `c(e_i, e_j)` in row-major order.
    pub fn new(
        grading_rank: usize,
        degrees: Vec<Vec<BigInt>>,
        group: ScalarGroup,
        cocycle: Vec<GroupElement>,
    ) -> Result<Self> {
        if degrees.iter().any(|d| d.len() != grading_rank) {
            return Err(Error::DimensionMismatch(format!(
                "every degree vector must have {grading_rank} entries"
            )));
        }
        if cocycle.len() != grading_rank * grading_rank {
            return Err(Error::DimensionMismatch(format!(
                "the cocycle table must have {} entries, got {}",
                grading_rank * grading_rank,
                cocycle.len()
            )));
        }
        let cocycle = cocycle
            .into_iter()
            .map(|e| group.element(e.free_exponents().to_vec(), e.torsion_exponent().clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(GradedPresentation {
            n: degrees.len(),
            grading_rank,
            degrees,
            group,
            cocycle,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grading_rank(&self) -> usize {
        self.grading_rank
    }

    pub fn degrees(&self) -> &[Vec<BigInt>] {
        &self.degrees
    }

    pub fn group(&self) -> &ScalarGroup {
        &self.group
    }

    pub fn cocycle_entry(&self, i: usize, j: usize) -> &GroupElement {
        &self.cocycle[i * self.grading_rank + j]
    }

    /// The degree map as an n×m integer matrix with rows `δ_i`.
    fn degree_matrix(&self) -> IntMatrix {
        let mut d = IntMatrix::zero(self.n, self.grading_rank);
        for (i, row) in self.degrees.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                d.set(i, j, v.clone());
            }
        }
        d
    }

    /// Exponent matrices of the cocycle on `Z^m`: one per free generator,
    /// then the torsion matrix.
    fn cocycle_exponent_matrices(&self) -> (Vec<IntMatrix>, IntMatrix) {
        let m = self.grading_rank;
        let a = self.group.free_rank();
        let mut free = vec![IntMatrix::zero(m, m); a];
        let mut torsion = IntMatrix::zero(m, m);
        for i in 0..m {
            for j in 0..m {
                let e = self.cocycle_entry(i, j);
                for (l, mat) in free.iter_mut().enumerate() {
                    mat.set(i, j, e.free_exponents()[l].clone());
                }
                torsion.set(i, j, e.torsion_exponent().clone());
            }
        }
        (free, torsion)
    }
}

/// The pullback of the twist data along the degree map: the cocycle `c̃` on
/// `Z^n` and the commutation matrix `q̃` of the ambient quantum space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackResult {
    group: ScalarGroup,
    cocycle_free: Vec<IntMatrix>,
    cocycle_torsion: IntMatrix,
    q_tilde: QMatrix,
    sigma: Bicharacter,
}

impl PullbackResult {
    pub fn group(&self) -> &ScalarGroup {
        &self.group
    }

    /// Exponent matrices of `c̃(α,β) = c(ρα, ρβ)` per free generator.
    pub fn cocycle_free_matrices(&self) -> &[IntMatrix] {
        &self.cocycle_free
    }

    pub fn cocycle_torsion_matrix(&self) -> &IntMatrix {
        &self.cocycle_torsion
    }

    /// `c̃` evaluated on a pair of exponent vectors.
    pub fn cocycle_eval(&self, alpha: &[BigInt], beta: &[BigInt]) -> GroupElement {
        let free = self
            .cocycle_free
            .iter()
            .map(|m| m.pairing(alpha, beta))
            .collect();
        let torsion = self.cocycle_torsion.pairing(alpha, beta);
        self.group
            .element(free, torsion)
            .expect("free rank fixed by construction")
    }

    /// The induced commutation matrix `q̃_ij = c̃(ε_i,ε_j) c̃(ε_j,ε_i)^{-1}`.
    pub fn q_tilde(&self) -> &QMatrix {
        &self.q_tilde
    }

    /// The validated bicharacter of `q̃`, ready for stratification.
    pub fn ambient_bicharacter(&self) -> &Bicharacter {
        &self.sigma
    }
}

/// Pull the cocycle back along the degree map and form the ambient
/// commutation matrix.
pub fn pullback_bicharacter(p: &GradedPresentation) -> Result<PullbackResult> {
    let delta = p.degree_matrix();
    let delta_t = delta.transpose();
    let (free_m, torsion_m) = p.cocycle_exponent_matrices();
    let conjugate = |e: &IntMatrix| delta.mul(e).mul(&delta_t);
    let cocycle_free: Vec<IntMatrix> = free_m.iter().map(conjugate).collect();
    let cocycle_torsion = conjugate(&torsion_m).reduced_mod(p.group.torsion_order());

    let n = p.n;
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let free = cocycle_free
                .iter()
                .map(|m| m.get(i, j) - m.get(j, i))
                .collect();
            let torsion = cocycle_torsion.get(i, j) - cocycle_torsion.get(j, i);
            entries.push(p.group.element(free, torsion)?);
        }
    }
    let q_tilde = QMatrix::new(p.group.clone(), n, entries)?;
    let sigma = q_tilde.validate()?;
    Ok(PullbackResult {
        group: p.group.clone(),
        cocycle_free,
        cocycle_torsion,
        q_tilde,
        sigma,
    })
}

/// The twist reduction needs the same scalar hypothesis as the ambient
/// analysis: −1 must not lie in the value group unless the characteristic-2
/// escape is declared.
pub fn twist_hypothesis_check(p: &GradedPresentation) -> Result<()> {
    if p.group.contains_minus_one() {
        return Err(Error::Hypothesis(
            "the twisting cocycle takes values in a group containing -1 (even torsion order, \
             characteristic 2 not declared); the twist cannot be rewritten through the \
             square-root machinery"
                .into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn free_group() -> ScalarGroup {
        ScalarGroup::new(1, BigInt::one(), false).unwrap()
    }

    fn vecs(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    /// The two-generator grading with c(e_1,e_2) = g alternating.
    fn alternating_example() -> GradedPresentation {
        let group = free_group();
        let g = group.free_generator(0);
        let cocycle = vec![
            group.identity(),
            g.clone(),
            group.inverse(&g),
            group.identity(),
        ];
        GradedPresentation::new(
            2,
            vecs(&[&[1, 0], &[0, 1], &[1, 1]]),
            group,
            cocycle,
        )
        .unwrap()
    }

    fn exponent(e: &GroupElement) -> i64 {
        i64::try_from(&e.free_exponents()[0]).unwrap()
    }

    #[test]
    fn zero_degrees_twist_trivially() {
        let group = free_group();
        let g = group.free_generator(0);
        let cocycle = vec![group.identity(), g.clone(), group.inverse(&g), group.identity()];
        let p = GradedPresentation::new(2, vecs(&[&[0, 0], &[0, 0], &[0, 0]]), group, cocycle)
            .unwrap();
        let pb = pullback_bicharacter(&p).unwrap();
        assert!(pb.cocycle_free_matrices()[0].is_zero());
        for i in 0..3 {
            for j in 0..3 {
                assert!(pb.q_tilde().entry(i, j).is_identity());
            }
        }
    }

    #[test]
    fn three_generator_example_matches_the_antisymmetrization() {
        let p = alternating_example();
        let pb = pullback_bicharacter(&p).unwrap();
        assert_eq!(exponent(pb.q_tilde().entry(0, 1)), 2);
        assert_eq!(exponent(pb.q_tilde().entry(0, 2)), 2);
        assert_eq!(exponent(pb.q_tilde().entry(1, 2)), -2);
        assert_eq!(exponent(pb.q_tilde().entry(1, 0)), -2);
        // The pulled-back cocycle stays alternating because the input was.
        assert!(pb.cocycle_free_matrices()[0].is_antisymmetric());
        // Full ambient stratification is available downstream.
        let strata = crate::strata::stratify(pb.ambient_bicharacter()).unwrap();
        assert_eq!(strata.len(), 8);
        let dense = &strata[0];
        assert_eq!(dense.image_dim(), 1);
        assert_eq!(dense.fiber_dim(), 2);
    }

    #[test]
    fn symmetric_cocycles_produce_commutative_ambient_spaces() {
        let group = free_group();
        let g = group.free_generator(0);
        let p = GradedPresentation::new(
            1,
            vecs(&[&[1], &[2], &[3]]),
            group,
            vec![g],
        )
        .unwrap();
        let pb = pullback_bicharacter(&p).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(pb.q_tilde().entry(i, j).is_identity());
            }
        }
        assert!(!pb.cocycle_eval(
            &[BigInt::one(), BigInt::zero(), BigInt::zero()],
            &[BigInt::one(), BigInt::zero(), BigInt::zero()]
        )
        .is_identity());
    }

    #[test]
    fn pullback_is_bilinear() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x7717);
        let p = alternating_example();
        let pb = pullback_bicharacter(&p).unwrap();
        let group = pb.group().clone();
        let rand_vec = |rng: &mut ChaCha8Rng| -> Vec<BigInt> {
            (0..3).map(|_| BigInt::from(rng.gen_range(-3..=3i64))).collect()
        };
        for _ in 0..50 {
            let a = rand_vec(&mut rng);
            let a2 = rand_vec(&mut rng);
            let b = rand_vec(&mut rng);
            let sum: Vec<BigInt> = a.iter().zip(&a2).map(|(x, y)| x + y).collect();
            assert_eq!(
                pb.cocycle_eval(&sum, &b),
                group.mul(&pb.cocycle_eval(&a, &b), &pb.cocycle_eval(&a2, &b))
            );
            assert_eq!(
                pb.cocycle_eval(&b, &sum),
                group.mul(&pb.cocycle_eval(&b, &a), &pb.cocycle_eval(&b, &a2))
            );
        }
    }

    #[test]
    fn hypothesis_check_follows_the_torsion_parity() {
        let odd = ScalarGroup::new(0, BigInt::from(9), false).unwrap();
        let p = GradedPresentation::new(1, vecs(&[&[1]]), odd.clone(), vec![odd.identity()])
            .unwrap();
        assert!(twist_hypothesis_check(&p).is_ok());

        let even = ScalarGroup::new(0, BigInt::from(2), false).unwrap();
        let p2 = GradedPresentation::new(1, vecs(&[&[1]]), even.clone(), vec![even.identity()])
            .unwrap();
        let err = twist_hypothesis_check(&p2).unwrap_err();
        assert!(err.is_hypothesis_violation());

        let char2 = ScalarGroup::new(0, BigInt::from(2), true).unwrap();
        let p3 = GradedPresentation::new(1, vecs(&[&[1]]), char2.clone(), vec![char2.identity()])
            .unwrap();
        assert!(twist_hypothesis_check(&p3).is_ok());
    }

    #[test]
    fn constructor_validates_shapes() {
        let group = free_group();
        assert!(GradedPresentation::new(
            2,
            vecs(&[&[1, 0], &[0, 1, 5]]),
            group.clone(),
            vec![group.identity(); 4]
        )
        .is_err());
        assert!(GradedPresentation::new(
            2,
            vecs(&[&[1, 0]]),
            group.clone(),
            vec![group.identity(); 3]
        )
        .is_err());
    }

    #[test]
    fn torsion_valued_cocycles_reduce_modulo_the_order() {
        let group = ScalarGroup::new(0, BigInt::from(3), false).unwrap();
        let g = group.torsion_generator();
        let p = GradedPresentation::new(
            1,
            vecs(&[&[2], &[1]]),
            group.clone(),
            vec![g],
        )
        .unwrap();
        let pb = pullback_bicharacter(&p).unwrap();
        // c̃ exponent on (e_1, e_2) is 2·1·1 = 2 mod 3; symmetric input makes
        // q̃ trivial.
        assert_eq!(
            pb.cocycle_torsion_matrix().get(0, 1),
            &BigInt::from(2)
        );
        assert!(pb.q_tilde().entry(0, 1).is_identity());
    }
}
