//! The JSON problem schema and point parsing.
//!
//! A problem file declares the variable count, the scalar group, and exactly
//! one source for the commutation data: an explicit list of strictly upper
//! matrix entries (antisymmetry fills in the rest), a single-parameter
//! shortcut, or a graded-twist block. All indices in files are 1-based.

use crate::bicharacter::QMatrix;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::quotient::LambdaEntry;
use crate::scalars::ScalarGroup;
use crate::serde_util::parse_rational;
use crate::twist::{pullback_bicharacter, GradedPresentation};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub free_rank: usize,
    pub torsion_order: u64,
    #[serde(default)]
    pub char_two: bool,
    #[serde(default)]
    pub declared_char: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EntrySpec {
    pub i: usize,
    pub j: usize,
    #[serde(default)]
    pub free: Vec<i64>,
    #[serde(default)]
    pub torsion: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct UniparameterSpec {
    pub t: u64,
    #[serde(default)]
    pub b: Option<Vec<Vec<i64>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwistSpec {
    pub grading_rank: usize,
    pub degrees: Vec<Vec<i64>>,
    pub cocycle: Vec<EntrySpec>,
}

/// The raw deserialized problem document.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    #[serde(default)]
    pub group: Option<GroupSpec>,
    #[serde(default)]
    pub q: Option<Vec<EntrySpec>>,
    #[serde(default)]
    pub uniparameter: Option<UniparameterSpec>,
    #[serde(default)]
    pub graded_twist: Option<TwistSpec>,
}

/// Commutation data after validation.
#[derive(Clone, Debug)]
pub enum ProblemSource {
    Matrix(QMatrix),
    Twist(GradedPresentation),
}

/// A validated problem: the ambient size, optional declared characteristic,
/// and the source of the commutation matrix.
#[derive(Clone, Debug)]
pub struct Problem {
    n: usize,
    declared_char: Option<u64>,
    uniparameter_t: Option<u64>,
    source: ProblemSource,
}

impl Problem {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn declared_char(&self) -> Option<u64> {
        self.declared_char
    }

    /// The parameter order when the problem came from the single-parameter
    /// shortcut.
    pub fn uniparameter_t(&self) -> Option<u64> {
        self.uniparameter_t
    }

    pub fn source(&self) -> &ProblemSource {
        &self.source
    }

    pub fn is_twist(&self) -> bool {
        matches!(self.source, ProblemSource::Twist(_))
    }

    /// The commutation matrix of the space the stratification runs on: the
    /// declared matrix itself, or the pullback matrix of a twist block.
    pub fn ambient_qmatrix(&self) -> Result<QMatrix> {
        match &self.source {
            ProblemSource::Matrix(q) => Ok(q.clone()),
            ProblemSource::Twist(p) => Ok(pullback_bicharacter(p)?.q_tilde().clone()),
        }
    }
}

fn group_from_spec(spec: &GroupSpec) -> Result<ScalarGroup> {
    if spec.torsion_order == 0 {
        return Err(Error::InvalidInput(
            "torsion_order must be at least 1 (1 means no torsion)".into(),
        ));
    }
    ScalarGroup::new(
        spec.free_rank,
        BigInt::from(spec.torsion_order),
        spec.char_two,
    )
}

fn build_matrix(n: usize, group: ScalarGroup, entries: &[EntrySpec]) -> Result<QMatrix> {
    let mut seen = BTreeSet::new();
    let mut upper = Vec::with_capacity(entries.len());
    for e in entries {
        if e.i < 1 || e.j <= e.i || e.j > n {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) is not strictly upper triangular with 1-based indices up to {n}",
                e.i, e.j
            )));
        }
        if !seen.insert((e.i, e.j)) {
            return Err(Error::InvalidInput(format!(
                "duplicate entry for position ({}, {})",
                e.i, e.j
            )));
        }
        if e.free.len() != group.free_rank() {
            return Err(Error::InvalidInput(format!(
                "entry ({}, {}) has {} free exponents; the group has free rank {}",
                e.i,
                e.j,
                e.free.len(),
                group.free_rank()
            )));
        }
        let value = group.element(
            e.free.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(e.torsion),
        )?;
        upper.push((e.i - 1, e.j - 1, value));
    }
    QMatrix::from_upper_entries(group, n, &upper)
}

fn build_twist(n: usize, group: ScalarGroup, spec: &TwistSpec) -> Result<GradedPresentation> {
    let m = spec.grading_rank;
    if spec.degrees.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} degree vectors, got {}",
            spec.degrees.len()
        )));
    }
    let degrees: Vec<Vec<BigInt>> = spec
        .degrees
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut table = vec![group.identity(); m * m];
    let mut seen = BTreeSet::new();
    for e in &spec.cocycle {
        if e.i < 1 || e.i > m || e.j < 1 || e.j > m {
            return Err(Error::InvalidInput(format!(
                "cocycle position ({}, {}) is outside the 1-based {m}×{m} table",
                e.i, e.j
            )));
        }
        if !seen.insert((e.i, e.j)) {
            return Err(Error::InvalidInput(format!(
                "duplicate cocycle entry for position ({}, {})",
                e.i, e.j
            )));
        }
        if e.free.len() != group.free_rank() {
            return Err(Error::InvalidInput(format!(
                "cocycle entry ({}, {}) has {} free exponents; the group has free rank {}",
                e.i,
                e.j,
                e.free.len(),
                group.free_rank()
            )));
        }
        table[(e.i - 1) * m + (e.j - 1)] = group.element(
            e.free.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(e.torsion),
        )?;
    }
    GradedPresentation::new(m, degrees, group, table)
}

impl ProblemSpec {
    /// Check the exactly-one-source rule and assemble the typed problem.
    pub fn build(&self) -> Result<Problem> {
        if self.n == 0 {
            return Err(Error::InvalidInput("n must be at least 1".into()));
        }
        let sources =
            self.q.is_some() as u8 + self.uniparameter.is_some() as u8
                + self.graded_twist.is_some() as u8;
        if sources != 1 {
            return Err(Error::InvalidInput(
                "exactly one of q, uniparameter, graded_twist must be present".into(),
            ));
        }
        let declared_char = self.group.as_ref().and_then(|g| g.declared_char);
        if let Some(entries) = &self.q {
            let gspec = self.group.as_ref().ok_or_else(|| {
                Error::InvalidInput("an explicit q matrix needs a group block".into())
            })?;
            let matrix = build_matrix(self.n, group_from_spec(gspec)?, entries)?;
            return Ok(Problem {
                n: self.n,
                declared_char,
                uniparameter_t: None,
                source: ProblemSource::Matrix(matrix),
            });
        }
        if let Some(uni) = &self.uniparameter {
            let char_two = self.group.as_ref().map(|g| g.char_two).unwrap_or(false);
            if let Some(gspec) = &self.group {
                let expected = if uni.t == 0 { (1, 1) } else { (0, uni.t) };
                if (gspec.free_rank, gspec.torsion_order) != expected {
                    return Err(Error::InvalidInput(format!(
                        "the group block (free_rank {}, torsion_order {}) is inconsistent with \
                         the single-parameter shortcut t = {}",
                        gspec.free_rank, gspec.torsion_order, uni.t
                    )));
                }
            }
            let b = match &uni.b {
                None => None,
                Some(rows) => {
                    if rows.len() != self.n || rows.iter().any(|r| r.len() != self.n) {
                        return Err(Error::InvalidInput(format!(
                            "the exponent matrix b must be {0}×{0}",
                            self.n
                        )));
                    }
                    let borrowed: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
                    Some(IntMatrix::from_i64(&borrowed))
                }
            };
            let matrix = QMatrix::uniparameter(self.n, uni.t, char_two, b)?;
            return Ok(Problem {
                n: self.n,
                declared_char,
                uniparameter_t: Some(uni.t),
                source: ProblemSource::Matrix(matrix),
            });
        }
        let tw = self.graded_twist.as_ref().expect("source counted above");
        let gspec = self.group.as_ref().ok_or_else(|| {
            Error::InvalidInput("a graded_twist block needs a group block".into())
        })?;
        let presentation = build_twist(self.n, group_from_spec(gspec)?, tw)?;
        Ok(Problem {
            n: self.n,
            declared_char,
            uniparameter_t: None,
            source: ProblemSource::Twist(presentation),
        })
    }
}

/// Parse a problem document from JSON text.
pub fn parse_problem(text: &str) -> Result<Problem> {
    let spec: ProblemSpec = serde_json::from_str(text)
        .map_err(|e| Error::InvalidInput(format!("problem file: {e}")))?;
    spec.build()
}

/// Parse a comma-separated point: `0` marks a vanishing coordinate, `*` a
/// formal symbol, anything else an exact rational `a` or `a/b`.
pub fn parse_lambda(text: &str, n: usize) -> Result<Vec<LambdaEntry>> {
    let entries: Vec<LambdaEntry> = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            if tok == "*" {
                return Ok(LambdaEntry::Symbol);
            }
            let r = parse_rational(tok).map_err(Error::InvalidInput)?;
            if r.is_zero() {
                Ok(LambdaEntry::Zero)
            } else {
                Ok(LambdaEntry::Rational(r))
            }
        })
        .collect::<Result<_>>()?;
    if entries.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} point coordinates, got {}",
            entries.len()
        )));
    }
    Ok(entries)
}

/// Parse a comma-separated list of exact rationals (no symbols allowed).
pub fn parse_rational_point(text: &str, n: usize) -> Result<Vec<BigRational>> {
    let entries: Vec<BigRational> = text
        .split(',')
        .map(|tok| parse_rational(tok.trim()).map_err(Error::InvalidInput))
        .collect::<Result<_>>()?;
    if entries.len() != n {
        return Err(Error::InvalidInput(format!(
            "expected {n} point coordinates, got {}",
            entries.len()
        )));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn explicit_matrix_round_trip() {
        let text = r#"{
            "n": 3,
            "group": {"free_rank": 1, "torsion_order": 1},
            "q": [{"i": 2, "j": 3, "free": [1], "torsion": 0}]
        }"#;
        let problem = parse_problem(text).unwrap();
        assert_eq!(problem.n(), 3);
        assert!(!problem.is_twist());
        let q = problem.ambient_qmatrix().unwrap();
        assert_eq!(q.entry(1, 2).free_exponents(), &[BigInt::one()]);
        assert_eq!(q.entry(2, 1).free_exponents(), &[BigInt::from(-1)]);
        assert!(q.entry(0, 1).is_identity());
        let b = q.validate().unwrap();
        let s = b.radical(&[]).unwrap();
        assert_eq!(s.basis_vectors(), vec![vec![
            BigInt::one(),
            BigInt::zero(),
            BigInt::zero()
        ]]);
    }

    #[test]
    fn uniparameter_shortcut_builds_the_right_group() {
        let generic = parse_problem(r#"{"n": 2, "uniparameter": {"t": 0}}"#).unwrap();
        let q = generic.ambient_qmatrix().unwrap();
        assert_eq!(q.group().free_rank(), 1);
        assert_eq!(generic.uniparameter_t(), Some(0));
        let root = parse_problem(r#"{"n": 2, "uniparameter": {"t": 3}}"#).unwrap();
        let q = root.ambient_qmatrix().unwrap();
        assert_eq!(q.group().free_rank(), 0);
        assert_eq!(q.group().torsion_order(), &BigInt::from(3));
    }

    #[test]
    fn uniparameter_group_consistency_is_checked() {
        let bad = r#"{
            "n": 2,
            "group": {"free_rank": 1, "torsion_order": 1},
            "uniparameter": {"t": 3}
        }"#;
        assert!(parse_problem(bad).is_err());
        let good = r#"{
            "n": 2,
            "group": {"free_rank": 0, "torsion_order": 3},
            "uniparameter": {"t": 3}
        }"#;
        assert!(parse_problem(good).is_ok());
    }

    #[test]
    fn exactly_one_source_required() {
        assert!(parse_problem(r#"{"n": 2}"#).is_err());
        let two = r#"{
            "n": 2,
            "group": {"free_rank": 0, "torsion_order": 1},
            "q": [],
            "uniparameter": {"t": 0}
        }"#;
        assert!(parse_problem(two).is_err());
    }

    #[test]
    fn entry_validation_messages_are_one_based() {
        let bad = r#"{
            "n": 2,
            "group": {"free_rank": 0, "torsion_order": 5},
            "q": [{"i": 2, "j": 1, "torsion": 1}]
        }"#;
        let err = parse_problem(bad).unwrap_err();
        assert!(err.to_string().contains("(2, 1)"));
        let dup = r#"{
            "n": 2,
            "group": {"free_rank": 0, "torsion_order": 5},
            "q": [{"i": 1, "j": 2, "torsion": 1}, {"i": 1, "j": 2, "torsion": 2}]
        }"#;
        assert!(parse_problem(dup).unwrap_err().to_string().contains("duplicate"));
    }

    #[test]
    fn twist_block_parses() {
        let text = r#"{
            "n": 3,
            "group": {"free_rank": 1, "torsion_order": 1},
            "graded_twist": {
                "grading_rank": 2,
                "degrees": [[1, 0], [0, 1], [1, 1]],
                "cocycle": [
                    {"i": 1, "j": 2, "free": [1], "torsion": 0},
                    {"i": 2, "j": 1, "free": [-1], "torsion": 0}
                ]
            }
        }"#;
        let problem = parse_problem(text).unwrap();
        assert!(problem.is_twist());
        let q = problem.ambient_qmatrix().unwrap();
        assert_eq!(q.entry(0, 1).free_exponents(), &[BigInt::from(2)]);
        assert_eq!(q.entry(1, 2).free_exponents(), &[BigInt::from(-2)]);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(parse_problem(r#"{"n": 2, "uniparameter": {"t": 0}, "extra": 1}"#).is_err());
    }

    #[test]
    fn lambda_parsing() {
        let entries = parse_lambda("0, 2/3, *", 3).unwrap();
        assert_eq!(entries[0], LambdaEntry::Zero);
        assert_eq!(
            entries[1],
            LambdaEntry::Rational(BigRational::new(BigInt::from(2), BigInt::from(3)))
        );
        assert_eq!(entries[2], LambdaEntry::Symbol);
        assert!(parse_lambda("1,2", 3).is_err());
        assert!(parse_lambda("1,x,3", 3).is_err());
        assert_eq!(parse_lambda("0/7", 1).unwrap()[0], LambdaEntry::Zero);
        let point = parse_rational_point("1, -4/2", 2).unwrap();
        assert_eq!(point[1], BigRational::from_integer(BigInt::from(-2)));
        assert!(parse_rational_point("*,1", 2).is_err());
    }
}
