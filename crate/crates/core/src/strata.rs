//! The stratification over coordinate subsets and the fiber (orbit) test.
//!
//! Every subset `w` of the coordinates carries a stratum: the radical
//! sublattice `S_w` of the bicharacter restricted to the coordinate subgroup
//! off `w`, the dimensions of the fiber and image directions it induces, and
//! the subtorus of the diagonal torus cut out by `S_w`. Two points with the
//! same zero pattern lie in the same fiber exactly when their character
//! values agree on `S_w`.

use crate::bicharacter::Bicharacter;
use crate::error::{Error, Result};
use crate::exec;
use crate::lattice::{hermite_basis, Lattice, QuotientShape};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// A closed subgroup of the diagonal torus `(k^×)^n`, encoded by the lattice
/// of characters it kills.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusSubgroup {
    vanishing_lattice: Lattice,
    dimension: usize,
    component_count: BigInt,
}

impl TorusSubgroup {
    pub fn for_lattice(l: &Lattice) -> TorusSubgroup {
        TorusSubgroup {
            vanishing_lattice: l.clone(),
            dimension: l.ambient_rank() - l.rank(),
            component_count: l.quotient_shape().torsion_order(),
        }
    }

    pub fn vanishing_lattice(&self) -> &Lattice {
        &self.vanishing_lattice
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn component_count(&self) -> &BigInt {
        &self.component_count
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    w: Vec<usize>,
    radical: Lattice,
    quotient_shape: QuotientShape,
    perp: TorusSubgroup,
}

impl Stratum {
    /// 0-based coordinates vanishing on the stratum, strictly increasing.
    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn ambient_rank(&self) -> usize {
        self.radical.ambient_rank()
    }

    /// The radical sublattice `S_w`, inside the full `Z^n`.
    pub fn radical_lattice(&self) -> &Lattice {
        &self.radical
    }

    /// Rank of the coordinate subgroup off `w`.
    pub fn gamma_rank(&self) -> usize {
        self.ambient_rank() - self.w.len()
    }

    pub fn image_dim(&self) -> usize {
        self.radical.rank()
    }

    pub fn fiber_dim(&self) -> usize {
        self.gamma_rank() - self.radical.rank()
    }

    /// Isomorphism type of the quotient of the coordinate subgroup off `w`
    /// by the radical.
    pub fn quotient_shape(&self) -> &QuotientShape {
        &self.quotient_shape
    }

    pub fn perp(&self) -> &TorusSubgroup {
        &self.perp
    }
}

/// All subsets of `{0, .., n-1}`, ordered by size and then lexicographically.
pub fn subsets_ordered(n: usize) -> Vec<Vec<usize>> {
    assert!(n < usize::BITS as usize, "subset count overflows");
    let mut subsets: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
        .collect();
    subsets.sort();
    subsets.sort_by_key(Vec::len);
    subsets
}

/// The single stratum attached to the subset `w`.
pub fn stratum_for(b: &Bicharacter, w: &[usize]) -> Result<Stratum> {
    let radical = b.radical(w)?;
    let complement: Vec<usize> = (0..b.n()).filter(|j| !w.contains(j)).collect();
    let restricted: Vec<Vec<BigInt>> = radical
        .basis_vectors()
        .into_iter()
        .map(|row| complement.iter().map(|&j| row[j].clone()).collect())
        .collect();
    let quotient_shape = hermite_basis(complement.len(), restricted)?.quotient_shape();
    let perp = TorusSubgroup::for_lattice(&radical);
    Ok(Stratum {
        w: w.to_vec(),
        radical,
        quotient_shape,
        perp,
    })
}

/// All `2^n` strata in the canonical order.
pub fn stratify(b: &Bicharacter) -> Result<Vec<Stratum>> {
    exec::pmap(subsets_ordered(b.n()), |w| stratum_for(b, &w))
        .into_iter()
        .collect()
}

/// Sequential twin of [`stratify`]; identical output, used as the benchmark
/// baseline and as a determinism cross-check.
pub fn stratify_seq(b: &Bicharacter) -> Result<Vec<Stratum>> {
    exec::seq_map(subsets_ordered(b.n()), |w| stratum_for(b, &w))
        .into_iter()
        .collect()
}

/// The lattice spanned by the coordinate vectors off `w`.
fn coordinate_sublattice(n: usize, w: &[usize]) -> Lattice {
    let units: Vec<Vec<BigInt>> = (0..n)
        .filter(|j| !w.contains(j))
        .map(|j| {
            let mut u = vec![BigInt::zero(); n];
            u[j] = BigInt::one();
            u
        })
        .collect();
    hermite_basis(n, units).expect("unit vectors have ambient length")
}

/// Check, over every nested pair of subsets `v ⊆ w`, that the radical of the
/// larger coordinate subgroup meets the smaller one inside its radical:
/// `S_v ∩ Γ_w ⊆ S_w`. Returns the violating pairs; any violation indicates
/// an implementation bug, so this doubles as a self-test.
pub fn compatibility_check(b: &Bicharacter) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let n = b.n();
    let subsets = subsets_ordered(n);
    let radicals: Vec<Lattice> = exec::pmap(subsets.clone(), |w| b.radical(&w))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut index_of_mask = vec![0usize; 1 << n];
    for (idx, w) in subsets.iter().enumerate() {
        index_of_mask[mask_of(w)] = idx;
    }

    let per_subset = exec::pmap(subsets.clone(), |w| -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
        let w_mask = mask_of(&w);
        let gamma_w = coordinate_sublattice(n, &w);
        let s_w = &radicals[index_of_mask[w_mask]];
        let mut violations = Vec::new();
        let mut sub = w_mask;
        loop {
            sub = sub.wrapping_sub(1) & w_mask;
            // `sub` now ranges over the proper subsets of w, ending at 0.
            let v: Vec<usize> = (0..n).filter(|i| sub >> i & 1 == 1).collect();
            let s_v = &radicals[index_of_mask[sub]];
            let meet = s_v.intersect(&gamma_w)?;
            if !s_w.contains_lattice(&meet) {
                violations.push((v, w.clone()));
            }
            if sub == 0 {
                break;
            }
        }
        Ok(violations)
    });
    let mut all = Vec::new();
    for chunk in per_subset {
        all.extend(chunk?);
    }
    all.sort();
    Ok(all)
}

fn mask_of(w: &[usize]) -> usize {
    w.iter().fold(0usize, |m, &i| m | 1 << i)
}

/// The zero pattern of a point: 0-based indices of vanishing coordinates.
pub fn stratum_of_point(lambda: &[BigRational]) -> Vec<usize> {
    lambda
        .iter()
        .enumerate()
        .filter(|(_, x)| x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// A point of `k^n` together with its derived zero pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointInStratum {
    lambda: Vec<BigRational>,
    w: Vec<usize>,
}

impl PointInStratum {
    pub fn new(lambda: Vec<BigRational>) -> Self {
        let w = stratum_of_point(&lambda);
        PointInStratum { lambda, w }
    }

    pub fn lambda(&self) -> &[BigRational] {
        &self.lambda
    }

    pub fn support(&self) -> &[usize] {
        &self.w
    }

    /// The character value `λ^α`, using rational division for negative
    /// exponents. Defined whenever `α` avoids the zero coordinates, which
    /// holds for every vector of `S_w`.
    pub fn monomial(&self, alpha: &[BigInt]) -> Result<BigRational> {
        if alpha.len() != self.lambda.len() {
            return Err(Error::DimensionMismatch(
                "exponent vector length differs from the point".into(),
            ));
        }
        let mut acc = BigRational::one();
        for (x, e) in self.lambda.iter().zip(alpha) {
            if e.is_zero() {
                continue;
            }
            if x.is_zero() {
                return Err(Error::InvalidInput(
                    "monomial touches a vanishing coordinate".into(),
                ));
            }
            acc *= rational_pow(x, e)?;
        }
        Ok(acc)
    }
}

fn rational_pow(x: &BigRational, e: &BigInt) -> Result<BigRational> {
    let exp = i32::try_from(e)
        .map_err(|_| Error::InvalidInput("exponent magnitude out of range".into()))?;
    Ok(x.pow(exp))
}

/// Outcome of the fiber test for two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberVerdict {
    /// Different zero patterns: the points lie on different strata.
    DifferentStrata {
        left_w: Vec<usize>,
        right_w: Vec<usize>,
    },
    /// The character values agree on all of `S_w`: same fiber.
    Equivalent,
    /// Not equivalent over the rationals, but every discrepancy is a root of
    /// unity of order dividing the torsion of the quotient — a splitting
    /// field large enough to contain those roots merges the two orbits.
    EquivalentOverExtension {
        /// One discrepancy ratio per radical basis vector.
        ratios: Vec<BigRational>,
    },
    /// Distinct fibers, witnessed by one radical vector with differing
    /// character values.
    NotEquivalent {
        alpha: Vec<BigInt>,
        left: BigRational,
        right: BigRational,
    },
}

impl FiberVerdict {
    /// The plain boolean answer over the base field.
    pub fn equivalent(&self) -> bool {
        matches!(self, FiberVerdict::Equivalent)
    }
}

/// Decide whether two points lie in the same fiber: same zero pattern, and
/// equal character values on the radical of their common stratum.
pub fn fiber_equivalent(
    b: &Bicharacter,
    lambda: &[BigRational],
    mu: &[BigRational],
) -> Result<FiberVerdict> {
    if lambda.len() != b.n() || mu.len() != b.n() {
        return Err(Error::DimensionMismatch(format!(
            "points must have {} coordinates",
            b.n()
        )));
    }
    let left = PointInStratum::new(lambda.to_vec());
    let right = PointInStratum::new(mu.to_vec());
    if left.support() != right.support() {
        return Ok(FiberVerdict::DifferentStrata {
            left_w: left.support().to_vec(),
            right_w: right.support().to_vec(),
        });
    }
    let stratum = stratum_for(b, left.support())?;
    let mut ratios = Vec::new();
    for alpha in stratum.radical_lattice().basis_vectors() {
        let lv = left.monomial(&alpha)?;
        let rv = right.monomial(&alpha)?;
        if lv != rv {
            let ratio = &lv / &rv;
            let order_bound = stratum.quotient_shape().torsion_order();
            let is_rational_root_of_unity = ratio == -BigRational::one();
            if !(is_rational_root_of_unity && order_bound.is_even()) {
                return Ok(FiberVerdict::NotEquivalent {
                    alpha,
                    left: lv,
                    right: rv,
                });
            }
            ratios.push(ratio);
        } else {
            ratios.push(BigRational::one());
        }
    }
    if ratios.iter().all(|r| r.is_one()) {
        Ok(FiberVerdict::Equivalent)
    } else {
        Ok(FiberVerdict::EquivalentOverExtension { ratios })
    }
}
