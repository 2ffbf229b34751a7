//! Deterministic plain-text rendering of scalars, coefficients, and
//! generators.
//!
//! The grammar is fixed: variables are `x[i]` (1-based), basis monomials are
//! `x[a1,...,an]`, point symbols are `l<i>`, the free scalar generators are
//! `q` (or `q1..qa` when there are several), the torsion generator is `u`,
//! and the square roots of the free generators are `p` (or `p1..pa`) with
//! integer exponents — `p^-1` denotes the inverse square root. Factors are
//! joined by `*` in the order rational, scalar, symbols, monomial, and the
//! two terms of a binomial are joined by ` - `, absorbing a negative right
//! coefficient into ` + `.

use crate::bicharacter::SqrtBicharacter;
use crate::error::Result;
use crate::quotient::{Binomial, IdealPresentation, TwistedTerm};
use crate::scalars::{GroupElement, HalfElement, ScalarGroup, SymbolicCoefficient};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// How a term's monomial part is written: as one basis monomial
/// `x[a1,...,an]` or as an ordered product `x[1]^a1*...*x[n]^an`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonomialStyle {
    Basis,
    Ordered,
}

pub fn free_generator_name(group: &ScalarGroup, l: usize) -> String {
    if group.free_rank() == 1 {
        "q".to_string()
    } else {
        format!("q{}", l + 1)
    }
}

pub fn sqrt_generator_name(group: &ScalarGroup, l: usize) -> String {
    if group.free_rank() == 1 {
        "p".to_string()
    } else {
        format!("p{}", l + 1)
    }
}

fn push_power(out: &mut Vec<String>, name: String, exponent: &BigInt) {
    if exponent.is_zero() {
        return;
    }
    if exponent.is_one() {
        out.push(name);
    } else {
        out.push(format!("{name}^{exponent}"));
    }
}

/// A value of the scalar group, e.g. `q^2*u` — or `1` for the identity.
pub fn render_element(group: &ScalarGroup, e: &GroupElement) -> String {
    let mut factors = Vec::new();
    for (l, exp) in e.free_exponents().iter().enumerate() {
        push_power(&mut factors, free_generator_name(group, l), exp);
    }
    push_power(&mut factors, "u".to_string(), e.torsion_exponent());
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// A value of the extended group: square roots carry their doubled exponent,
/// so `p^3` means the free generator to the power 3/2.
pub fn render_half_element(group: &ScalarGroup, h: &HalfElement) -> String {
    let mut factors = Vec::new();
    for (l, exp) in h.doubled_free_exponents().iter().enumerate() {
        push_power(&mut factors, sqrt_generator_name(group, l), exp);
    }
    push_power(&mut factors, "u".to_string(), h.torsion_exponent());
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

fn coefficient_factors(group: &ScalarGroup, c: &SymbolicCoefficient) -> Vec<String> {
    let mut factors = Vec::new();
    if !c.rational().is_one() {
        factors.push(c.rational().to_string());
    }
    for (l, exp) in c.scalar().doubled_free_exponents().iter().enumerate() {
        push_power(&mut factors, sqrt_generator_name(group, l), exp);
    }
    push_power(&mut factors, "u".to_string(), c.scalar().torsion_exponent());
    for (i, exp) in c.lambda_exponents().iter().enumerate() {
        push_power(&mut factors, format!("l{}", i + 1), exp);
    }
    factors
}

/// A coefficient alone, e.g. `-1/2*p^-1*l2`.
pub fn render_coefficient(group: &ScalarGroup, c: &SymbolicCoefficient) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let factors = coefficient_factors(group, c);
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

/// The monomial part alone; empty string for the constant monomial.
pub fn render_monomial(exponent: &[BigInt], style: MonomialStyle) -> String {
    match style {
        MonomialStyle::Basis => {
            if exponent.iter().all(Zero::is_zero) {
                String::new()
            } else {
                let entries: Vec<String> = exponent.iter().map(BigInt::to_string).collect();
                format!("x[{}]", entries.join(","))
            }
        }
        MonomialStyle::Ordered => {
            let mut factors = Vec::new();
            for (i, exp) in exponent.iter().enumerate() {
                push_power(&mut factors, format!("x[{}]", i + 1), exp);
            }
            factors.join("*")
        }
    }
}

/// A full term. The coefficient `1` is dropped in front of a nonempty
/// monomial; a term with the constant monomial renders as its coefficient.
pub fn render_term(group: &ScalarGroup, term: &TwistedTerm, style: MonomialStyle) -> String {
    if term.coefficient().is_zero() {
        return "0".to_string();
    }
    let mut factors = coefficient_factors(group, term.coefficient());
    let monomial = render_monomial(term.exponent(), style);
    if !monomial.is_empty() {
        factors.push(monomial);
    }
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

fn negated(c: &SymbolicCoefficient) -> SymbolicCoefficient {
    SymbolicCoefficient {
        rational: -c.rational().clone(),
        scalar: c.scalar().clone(),
        lambda: c.lambda_exponents().to_vec(),
    }
}

/// `plus - minus`, with a negative rational on the right absorbed into `+`.
pub fn render_binomial(group: &ScalarGroup, b: &Binomial, style: MonomialStyle) -> String {
    let left = render_term(group, b.plus(), style);
    let (sep, right_term);
    if b.minus().coefficient().rational().is_negative() {
        sep = " + ";
        right_term = TwistedTerm::with_coefficient(
            negated(b.minus().coefficient()),
            b.minus().exponent().to_vec(),
        );
    } else {
        sep = " - ";
        right_term = b.minus().clone();
    }
    format!("{left}{sep}{}", render_term(group, &right_term, style))
}

/// All generators of a presentation, coordinate monomials first. The ordered
/// style rewrites each binomial against ordered monomials before printing.
pub fn render_presentation(
    c: &SqrtBicharacter,
    pres: &IdealPresentation,
    style: MonomialStyle,
) -> Result<Vec<String>> {
    let group = c.group();
    let mut out: Vec<String> = pres
        .monomial_generators()
        .iter()
        .map(|&i| format!("x[{}]", i + 1))
        .collect();
    for b in pres.binomials() {
        let rendered = match style {
            MonomialStyle::Basis => render_binomial(group, b, style),
            MonomialStyle::Ordered => render_binomial(group, &b.ordered(c)?, style),
        };
        out.push(rendered);
    }
    Ok(out)
}

/// The saturation annotation of an affine presentation, if any.
pub fn render_saturation(pres: &IdealPresentation) -> Option<String> {
    if pres.saturation().is_empty() {
        return None;
    }
    let product: Vec<String> = pres
        .saturation()
        .iter()
        .map(|&j| format!("x[{}]", j + 1))
        .collect();
    Some(format!("saturate by {}", product.join("*")))
}

/// A rational number in the canonical `a` or `a/b` form.
pub fn render_rational(r: &BigRational) -> String {
    r.to_string()
}
