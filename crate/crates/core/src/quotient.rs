//! Twisted monomial terms, the relabeling map between the twisted and plain
//! bases, and the symbolic ideal generators attached to a point of a stratum.
//!
//! The quotient side works in the algebra spanned by basis monomials `x_α`
//! with `x_α x_β = c(α,β) x_{α+β}` for the square-root cocycle `c`. The ideal
//! of a point λ is generated by the vanishing coordinates plus one binomial
//! per basis vector of the radical; because `c` restricts trivially to the
//! radical those binomials carry no cocycle scalar in the `x_α` basis, and
//! the ordered-monomial rendering reintroduces the scalars explicitly.

use crate::bicharacter::SqrtBicharacter;
use crate::error::{Error, Result};
use crate::lattice::{hermite_basis, Lattice};
use crate::scalars::{HalfElement, ScalarGroup, SymbolicCoefficient};
use crate::strata::Stratum;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which monomial basis a term lives in: the twisted product basis (`x_α`)
/// or the plain commutative one (`y_α`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    Twisted,
    Plain,
}

/// One coefficient–monomial pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedTerm {
    basis: BasisKind,
    coefficient: SymbolicCoefficient,
    exponent: Vec<BigInt>,
}

impl TwistedTerm {
    /// The bare monomial `x_α` with coefficient 1.
    pub fn monomial(group: &ScalarGroup, exponent: Vec<BigInt>) -> TwistedTerm {
        let n = exponent.len();
        TwistedTerm {
            basis: BasisKind::Twisted,
            coefficient: group.coeff_one(n),
            exponent,
        }
    }

    /// The generator monomial `x_{ε_i}` (0-based `i`).
    pub fn generator(group: &ScalarGroup, n: usize, i: usize) -> TwistedTerm {
        let mut exponent = vec![BigInt::zero(); n];
        exponent[i] = BigInt::one();
        TwistedTerm::monomial(group, exponent)
    }

    pub fn with_coefficient(
        coefficient: SymbolicCoefficient,
        exponent: Vec<BigInt>,
    ) -> TwistedTerm {
        TwistedTerm {
            basis: BasisKind::Twisted,
            coefficient,
            exponent,
        }
    }

    pub fn basis(&self) -> BasisKind {
        self.basis
    }

    pub fn coefficient(&self) -> &SymbolicCoefficient {
        &self.coefficient
    }

    pub fn exponent(&self) -> &[BigInt] {
        &self.exponent
    }
}

fn coeff_from_half(n: usize, scalar: HalfElement) -> SymbolicCoefficient {
    SymbolicCoefficient {
        rational: BigRational::one(),
        scalar,
        lambda: vec![BigInt::zero(); n],
    }
}

/// Multiply in the twisted basis: exponents add and the coefficient picks up
/// the cocycle value `c(α,β)`.
pub fn twisted_mul(c: &SqrtBicharacter, s: &TwistedTerm, t: &TwistedTerm) -> Result<TwistedTerm> {
    if s.basis != BasisKind::Twisted || t.basis != BasisKind::Twisted {
        return Err(Error::InvalidInput(
            "the twisted product is defined on twisted-basis terms".into(),
        ));
    }
    if s.exponent.len() != c.n() || t.exponent.len() != c.n() {
        return Err(Error::DimensionMismatch(
            "term exponent length differs from the matrix size".into(),
        ));
    }
    let group = c.group();
    let cocycle = coeff_from_half(
        s.coefficient.lambda_exponents().len(),
        c.eval(&s.exponent, &t.exponent),
    );
    let coefficient = group.coeff_mul(&group.coeff_mul(&s.coefficient, &t.coefficient)?, &cocycle)?;
    let exponent = s
        .exponent
        .iter()
        .zip(&t.exponent)
        .map(|(a, b)| a + b)
        .collect();
    Ok(TwistedTerm {
        basis: BasisKind::Twisted,
        coefficient,
        exponent,
    })
}

/// Multiply in the plain basis: exponents add, no cocycle.
pub fn plain_mul(group: &ScalarGroup, s: &TwistedTerm, t: &TwistedTerm) -> Result<TwistedTerm> {
    if s.basis != BasisKind::Plain || t.basis != BasisKind::Plain {
        return Err(Error::InvalidInput(
            "the plain product is defined on plain-basis terms".into(),
        ));
    }
    if s.exponent.len() != t.exponent.len() {
        return Err(Error::DimensionMismatch(
            "term exponent lengths differ".into(),
        ));
    }
    let coefficient = group.coeff_mul(&s.coefficient, &t.coefficient)?;
    let exponent = s
        .exponent
        .iter()
        .zip(&t.exponent)
        .map(|(a, b)| a + b)
        .collect();
    Ok(TwistedTerm {
        basis: BasisKind::Plain,
        coefficient,
        exponent,
    })
}

/// Direction of the basis relabeling: `TwistedToPlain` sends `x_α ↦ y_α`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhiDirection {
    TwistedToPlain,
    PlainToTwisted,
}

/// Relabel a basis monomial between the two sides, keeping coefficient and
/// exponent. The map is linear, not multiplicative; its multiplicativity
/// defect is exactly the cocycle.
pub fn phi_relabel(direction: PhiDirection, term: &TwistedTerm) -> Result<TwistedTerm> {
    let (from, to) = match direction {
        PhiDirection::TwistedToPlain => (BasisKind::Twisted, BasisKind::Plain),
        PhiDirection::PlainToTwisted => (BasisKind::Plain, BasisKind::Twisted),
    };
    if term.basis != from {
        return Err(Error::InvalidInput(
            "relabeling applied to a term from the wrong basis".into(),
        ));
    }
    Ok(TwistedTerm {
        basis: to,
        coefficient: term.coefficient.clone(),
        exponent: term.exponent.clone(),
    })
}

/// The scalar `d` with `x^α := x_1^{α_1} ··· x_n^{α_n} = d · x_α`, computed
/// by folding the twisted product left to right over the generator list.
/// Dividing a term's coefficient by `d` rewrites `x_α` in ordered monomials.
pub fn ordered_form(c: &SqrtBicharacter, alpha: &[BigInt]) -> Result<HalfElement> {
    if alpha.len() != c.n() {
        return Err(Error::DimensionMismatch(
            "exponent length differs from the matrix size".into(),
        ));
    }
    let group = c.group();
    let mut acc = TwistedTerm::monomial(group, vec![BigInt::zero(); c.n()]);
    for (i, k) in alpha.iter().enumerate() {
        let steps = u64::try_from(k).map_err(|_| {
            Error::InvalidInput("ordered form needs exponents in the positive cone".into())
        })?;
        let gen = TwistedTerm::generator(group, c.n(), i);
        for _ in 0..steps {
            acc = twisted_mul(c, &acc, &gen)?;
        }
    }
    Ok(acc.coefficient.scalar().clone())
}

/// A two-term generator `coeff₊ · x_{α₊} − coeff₋ · x_{α₋}` attached to a
/// radical vector `α = α₊ − α₋`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binomial {
    alpha: Vec<BigInt>,
    plus: TwistedTerm,
    minus: TwistedTerm,
}

impl Binomial {
    pub fn alpha(&self) -> &[BigInt] {
        &self.alpha
    }

    pub fn plus(&self) -> &TwistedTerm {
        &self.plus
    }

    pub fn minus(&self) -> &TwistedTerm {
        &self.minus
    }

    /// Rewrite both terms against ordered monomials: each coefficient is
    /// divided by the scalar relating `x_α` to `x^α`.
    pub fn ordered(&self, c: &SqrtBicharacter) -> Result<Binomial> {
        let group = c.group();
        let rescale = |term: &TwistedTerm| -> Result<TwistedTerm> {
            let d = ordered_form(c, &term.exponent)?;
            let inv = coeff_from_half(
                term.coefficient.lambda_exponents().len(),
                group.half_inverse(&d),
            );
            Ok(TwistedTerm {
                basis: term.basis,
                coefficient: group.coeff_mul(&term.coefficient, &inv)?,
                exponent: term.exponent.clone(),
            })
        };
        Ok(Binomial {
            alpha: self.alpha.clone(),
            plus: rescale(&self.plus)?,
            minus: rescale(&self.minus)?,
        })
    }

    /// Divide both coefficients by the coefficient of the lexicographically
    /// larger exponent, the canonical form used to compare presentations.
    /// The two exponents always differ, so there is no tie to break.
    pub fn normalized(&self, group: &ScalarGroup) -> Result<Binomial> {
        let lead = if self.plus.exponent > self.minus.exponent {
            &self.plus
        } else {
            &self.minus
        };
        let inv = group.coeff_inverse(&lead.coefficient)?;
        let rescale = |term: &TwistedTerm| -> Result<TwistedTerm> {
            Ok(TwistedTerm {
                basis: term.basis,
                coefficient: group.coeff_mul(&term.coefficient, &inv)?,
                exponent: term.exponent.clone(),
            })
        };
        Ok(Binomial {
            alpha: self.alpha.clone(),
            plus: rescale(&self.plus)?,
            minus: rescale(&self.minus)?,
        })
    }
}

/// One coordinate of a point: zero, an exact nonzero rational, or a formal
/// symbol λ_i kept symbolic in the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaEntry {
    Zero,
    Rational(BigRational),
    Symbol,
}

impl LambdaEntry {
    pub fn is_zero(&self) -> bool {
        match self {
            LambdaEntry::Zero => true,
            LambdaEntry::Rational(r) => r.is_zero(),
            LambdaEntry::Symbol => false,
        }
    }
}

/// Whether the presentation is taken in the localization at the coordinates
/// off `w` (always exact) or in the affine algebra, where the binomials are
/// accompanied by a saturation annotation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PresentationForm {
    Localized,
    AffineSaturation,
}

/// Symbolic generators of the ideal of a point: the vanishing coordinates
/// plus one binomial per radical basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    w: Vec<usize>,
    binomials: Vec<Binomial>,
    form: PresentationForm,
    saturation: Vec<usize>,
}

impl IdealPresentation {
    /// 0-based coordinates whose generators `x_i` lie in the ideal.
    pub fn w(&self) -> &[usize] {
        &self.w
    }

    pub fn monomial_generators(&self) -> &[usize] {
        &self.w
    }

    pub fn binomials(&self) -> &[Binomial] {
        &self.binomials
    }

    pub fn form(&self) -> PresentationForm {
        self.form
    }

    /// 0-based coordinates to saturate by in the affine form (those off
    /// `w`); empty for the localized form.
    pub fn saturation(&self) -> &[usize] {
        &self.saturation
    }
}

fn split_parts(alpha: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let plus = alpha
        .iter()
        .map(|x| if x.is_positive() { x.clone() } else { BigInt::zero() })
        .collect();
    let minus = alpha
        .iter()
        .map(|x| if x.is_negative() { -x } else { BigInt::zero() })
        .collect();
    (plus, minus)
}

/// The coefficient `λ^e` for a componentwise-nonnegative exponent `e`.
/// Symbolic coordinates accumulate formal exponents; rational ones multiply
/// into the rational part.
fn lambda_power(
    group: &ScalarGroup,
    lambda: &[LambdaEntry],
    e: &[BigInt],
) -> Result<SymbolicCoefficient> {
    let mut rational = BigRational::one();
    let mut exponents = vec![BigInt::zero(); lambda.len()];
    for (j, (entry, k)) in lambda.iter().zip(e).enumerate() {
        if k.is_zero() {
            continue;
        }
        if k.is_negative() {
            return Err(Error::Internal(
                "point coordinate raised to a negative power".into(),
            ));
        }
        match entry {
            LambdaEntry::Symbol => exponents[j] = k.clone(),
            LambdaEntry::Rational(r) if !r.is_zero() => {
                let kk = i32::try_from(k).map_err(|_| {
                    Error::InvalidInput("coordinate exponent out of range".into())
                })?;
                rational *= r.pow(kk);
            }
            _ => {
                return Err(Error::Internal(
                    "radical vector touches a vanishing coordinate".into(),
                ))
            }
        }
    }
    Ok(SymbolicCoefficient {
        rational,
        scalar: group.half_identity(),
        lambda: exponents,
    })
}

/// Generators of the ideal of the point λ on its stratum: `x_i` for the
/// vanishing coordinates, plus for each radical basis vector `α = α₊ − α₋`
/// the binomial `λ^{α₋}·x_{α₊} − λ^{α₊}·x_{α₋}`. No cocycle scalar appears:
/// `c` restricts trivially to radical × complement-coordinate pairs, so
/// `x_{α₋}` times this binomial is monomial–monomial exact.
pub fn psi_generators(
    c: &SqrtBicharacter,
    stratum: &Stratum,
    lambda: &[LambdaEntry],
    form: PresentationForm,
) -> Result<IdealPresentation> {
    let n = stratum.ambient_rank();
    if c.n() != n {
        return Err(Error::DimensionMismatch(
            "cocycle size differs from the stratum's ambient rank".into(),
        ));
    }
    if lambda.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "the point must have {n} coordinates"
        )));
    }
    let found: Vec<usize> = lambda
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_zero())
        .map(|(i, _)| i)
        .collect();
    if found != stratum.w() {
        return Err(Error::ZeroPattern {
            expected: stratum.w().iter().map(|i| i + 1).collect(),
            found: found.iter().map(|i| i + 1).collect(),
        });
    }
    let group = c.group();
    let mut binomials = Vec::new();
    for alpha in stratum.radical_lattice().basis_vectors() {
        let (alpha_plus, alpha_minus) = split_parts(&alpha);
        let plus = TwistedTerm {
            basis: BasisKind::Twisted,
            coefficient: lambda_power(group, lambda, &alpha_minus)?,
            exponent: alpha_plus.clone(),
        };
        let minus = TwistedTerm {
            basis: BasisKind::Twisted,
            coefficient: lambda_power(group, lambda, &alpha_plus)?,
            exponent: alpha_minus,
        };
        binomials.push(Binomial { alpha, plus, minus });
    }
    let saturation = match form {
        PresentationForm::Localized => Vec::new(),
        PresentationForm::AffineSaturation => {
            (0..n).filter(|j| !stratum.w().contains(j)).collect()
        }
    };
    Ok(IdealPresentation {
        w: stratum.w().to_vec(),
        binomials,
        form,
        saturation,
    })
}

/// The radical of a uniparameter matrix written down directly from its
/// closed form, bypassing the kernel machinery: `t·Γ_w` (dropped when the
/// parameter has infinite order), plus the alternating-sign vector over the
/// complement when the complement has odd size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedForm {
    lattice: Lattice,
    spanning: Vec<Vec<BigInt>>,
}

impl ClosedForm {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// The raw spanning vectors as written in the closed form, before
    /// canonicalization.
    pub fn spanning_vectors(&self) -> &[Vec<BigInt>] {
        &self.spanning
    }
}

/// `t` is the multiplicative order of the parameter (0 meaning infinite);
/// even finite orders are outside the closed form and rejected.
pub fn closed_form_oracle(t: u64, n: usize, w: &[usize]) -> Result<ClosedForm> {
    if w.windows(2).any(|p| p[0] >= p[1]) || w.iter().any(|&i| i >= n) {
        return Err(Error::InvalidInput(
            "the subset must be strictly increasing with entries below n".into(),
        ));
    }
    if t > 0 && t % 2 == 0 {
        return Err(Error::InvalidInput(
            "closed form requires the parameter to be a non-root of unity or of odd order".into(),
        ));
    }
    let complement: Vec<usize> = (0..n).filter(|j| !w.contains(j)).collect();
    let mut spanning: Vec<Vec<BigInt>> = Vec::new();
    if t > 0 {
        for &j in &complement {
            let mut v = vec![BigInt::zero(); n];
            v[j] = BigInt::from(t);
            spanning.push(v);
        }
    }
    if complement.len() % 2 == 1 {
        let mut gamma = vec![BigInt::zero(); n];
        for (pos, &j) in complement.iter().enumerate() {
            gamma[j] = if pos % 2 == 0 {
                BigInt::one()
            } else {
                -BigInt::one()
            };
        }
        spanning.push(gamma);
    }
    let lattice = hermite_basis(n, spanning.clone())?;
    Ok(ClosedForm { lattice, spanning })
}
