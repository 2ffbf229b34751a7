//! Assembled analysis reports.
//!
//! An [`AnalysisReport`] collects, for one problem document, the hypothesis
//! verdicts, one record per coordinate subset (in the fixed size-then-lex
//! order), and an echo of the input. Everything inside is plain data so the
//! report serializes to JSON losslessly and renders to text deterministically.

use crate::bicharacter::{HypothesisReport, SqrtBicharacter};
use crate::error::Result;
use crate::input::{ProblemSource, ProblemSpec};
use crate::lattice::QuotientShape;
use crate::quotient::{psi_generators, LambdaEntry, PresentationForm};
use crate::render::{render_element, render_presentation, render_saturation, MonomialStyle};
use crate::strata::{stratify, Stratum};
use crate::twist::{pullback_bicharacter, GradedPresentation};
use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

/// Everything the analysis knows about one coordinate subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    /// The vanishing set, 1-based for display.
    pub w: Vec<usize>,
    /// Hermite-form basis rows of the radical sublattice S_w.
    #[serde(with = "crate::serde_util::bigint_vec_vec")]
    pub radical_basis: Vec<Vec<BigInt>>,
    pub image_dim: usize,
    pub fiber_dim: usize,
    /// Shape of the support lattice modulo the radical.
    pub quotient_shape: QuotientShape,
    /// Dimension of the torus subgroup cut out by the radical.
    pub perp_dimension: usize,
    #[serde(with = "crate::serde_util::bigint_str")]
    pub perp_components: BigInt,
    /// Set when the declared field characteristic divides the torsion of the
    /// support quotient, so scalars of that order cannot exist in the field.
    pub char_conflict: bool,
    /// Symbolic ideal generators over the localized chart.
    pub psi_localized: Vec<String>,
    /// The same generators presented for the affine chart.
    pub psi_affine: Vec<String>,
    /// Saturation directive accompanying the affine presentation, if any.
    pub saturation: Option<String>,
}

/// The pulled-back commutation data of a graded-twist problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistSection {
    pub grading_rank: usize,
    /// Strictly upper entries of the pulled-back matrix, rendered.
    pub q_tilde: Vec<String>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    /// Echo of the input document.
    pub input: ProblemSpec,
    pub n: usize,
    pub hypothesis: HypothesisReport,
    pub strata: Vec<StratumRecord>,
    pub twist: Option<TwistSection>,
}

/// Run the full analysis for a parsed problem document.
pub fn analyze(spec: &ProblemSpec) -> Result<AnalysisReport> {
    let problem = spec.build()?;
    let q = problem.ambient_qmatrix()?;
    let b = q.validate()?;
    let hypothesis = b.hypothesis_report(problem.declared_char());
    let c = b.sqrt()?;
    let strata = stratify(&b)?;
    let records = strata
        .iter()
        .map(|s| stratum_record(&c, s, problem.declared_char()))
        .collect::<Result<Vec<_>>>()?;
    let twist = match problem.source() {
        ProblemSource::Twist(p) => Some(twist_section(p)?),
        ProblemSource::Matrix(_) => None,
    };
    Ok(AnalysisReport {
        input: spec.clone(),
        n: problem.n(),
        hypothesis,
        strata: records,
        twist,
    })
}

fn stratum_record(
    c: &SqrtBicharacter,
    s: &Stratum,
    declared_char: Option<u64>,
) -> Result<StratumRecord> {
    let n = s.ambient_rank();
    let lambda: Vec<LambdaEntry> = (0..n)
        .map(|i| {
            if s.w().contains(&i) {
                LambdaEntry::Zero
            } else {
                LambdaEntry::Symbol
            }
        })
        .collect();
    let localized = psi_generators(c, s, &lambda, PresentationForm::Localized)?;
    let affine = psi_generators(c, s, &lambda, PresentationForm::AffineSaturation)?;
    let psi_localized = render_presentation(c, &localized, MonomialStyle::Ordered)?;
    let psi_affine = render_presentation(c, &affine, MonomialStyle::Ordered)?;
    let saturation = render_saturation(&affine);
    let torsion_order = s.quotient_shape().torsion_order();
    let char_conflict = match declared_char {
        Some(p) if p >= 2 => (&torsion_order % BigInt::from(p)).is_zero(),
        _ => false,
    };
    Ok(StratumRecord {
        w: s.w().iter().map(|i| i + 1).collect(),
        radical_basis: s.radical_lattice().basis_vectors(),
        image_dim: s.image_dim(),
        fiber_dim: s.fiber_dim(),
        quotient_shape: s.quotient_shape().clone(),
        perp_dimension: s.perp().dimension(),
        perp_components: s.perp().component_count().clone(),
        char_conflict,
        psi_localized,
        psi_affine,
        saturation,
    })
}

fn twist_section(p: &GradedPresentation) -> Result<TwistSection> {
    let pulled = pullback_bicharacter(p)?;
    let q = pulled.q_tilde();
    let group = q.group();
    let n = q.n();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            entries.push(format!(
                "q~[{},{}] = {}",
                i + 1,
                j + 1,
                render_element(group, q.entry(i, j))
            ));
        }
    }
    Ok(TwistSection {
        grading_rank: p.grading_rank(),
        q_tilde: entries,
        note: "the spectrum of the twisted algebra is identified with the spectrum of the \
               ambient quantum space whose commutation matrix is listed above; the records \
               below describe that ambient spectrum"
            .into(),
    })
}

fn format_subset(w: &[usize]) -> String {
    if w.is_empty() {
        "{}".into()
    } else {
        let inner: Vec<String> = w.iter().map(|i| i.to_string()).collect();
        format!("{{{}}}", inner.join(", "))
    }
}

fn format_row(row: &[BigInt]) -> String {
    let inner: Vec<String> = row.iter().map(|x| x.to_string()).collect();
    format!("({})", inner.join(", "))
}

fn format_shape(shape: &QuotientShape) -> String {
    let mut parts = Vec::new();
    if shape.free_rank > 0 {
        if shape.free_rank == 1 {
            parts.push("Z".to_string());
        } else {
            parts.push(format!("Z^{}", shape.free_rank));
        }
    }
    for d in &shape.torsion {
        parts.push(format!("Z/{d}"));
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" x ")
    }
}

impl AnalysisReport {
    /// Deterministic plain-text rendering of the report.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "analysis of a quantum affine space on {} generators", self.n);
        let _ = writeln!(
            out,
            "hypothesis (-1 is not a commutation scalar): {}",
            if self.hypothesis.satisfied {
                "satisfied"
            } else {
                "violated"
            }
        );
        match self.hypothesis.declared_characteristic {
            Some(p) => {
                let _ = writeln!(out, "declared field characteristic: {p}");
            }
            None => {
                let _ = writeln!(out, "declared field characteristic: none");
            }
        }
        for flag in &self.hypothesis.flags {
            let _ = writeln!(out, "  warning: {flag}");
        }
        if let Some(t) = &self.twist {
            let _ = writeln!(out, "graded twist over a rank-{} grading", t.grading_rank);
            for line in &t.q_tilde {
                let _ = writeln!(out, "  {line}");
            }
            let _ = writeln!(out, "  note: {}", t.note);
        }
        let _ = writeln!(out, "strata: {}", self.strata.len());
        for r in &self.strata {
            let _ = writeln!(out);
            let _ = writeln!(out, "stratum w = {}", format_subset(&r.w));
            if r.radical_basis.is_empty() {
                let _ = writeln!(out, "  radical: zero lattice");
            } else {
                let rows: Vec<String> = r.radical_basis.iter().map(|b| format_row(b)).collect();
                let _ = writeln!(out, "  radical basis: {}", rows.join(", "));
            }
            let _ = writeln!(
                out,
                "  image dimension {}, fiber dimension {}",
                r.image_dim, r.fiber_dim
            );
            let _ = writeln!(out, "  support quotient: {}", format_shape(&r.quotient_shape));
            let _ = writeln!(
                out,
                "  orthogonal torus: dimension {}, components {}",
                r.perp_dimension, r.perp_components
            );
            if r.char_conflict {
                let _ = writeln!(
                    out,
                    "  warning: the declared characteristic divides the torsion of the \
                     support quotient; the corresponding scalars do not exist in the field"
                );
            }
            let _ = writeln!(out, "  generators (localized):");
            if r.psi_localized.is_empty() {
                let _ = writeln!(out, "    (none)");
            }
            for g in &r.psi_localized {
                let _ = writeln!(out, "    {g}");
            }
            let _ = writeln!(out, "  generators (affine):");
            if r.psi_affine.is_empty() {
                let _ = writeln!(out, "    (none)");
            }
            for g in &r.psi_affine {
                let _ = writeln!(out, "    {g}");
            }
            if let Some(s) = &r.saturation {
                let _ = writeln!(out, "    {s}");
            }
        }
        out
    }
}
