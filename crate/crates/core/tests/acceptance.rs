//! End-to-end acceptance checks. Each test prints one verdict line; a FAIL
//! line is followed by the panic that carries the same explanation.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qstrata::{
    analyze, bichar_feasibility, parse_problem, selftest, stratify, IntMatrix, ProblemSpec,
    QMatrix,
};

fn verdict(tag: &str, desc: &str, result: Result<(), String>) {
    match result {
        Ok(()) => println!("ACCEPTANCE {tag} {desc}: PASS"),
        Err(e) => {
            println!("ACCEPTANCE {tag} {desc}: FAIL — {e}");
            panic!("ACCEPTANCE {tag} {desc}: FAIL — {e}");
        }
    }
}

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("reading {path}: {e}"))
}

fn suite_result(outcome: qstrata::SuiteOutcome) -> Result<(), String> {
    if outcome.ok() {
        Ok(())
    } else {
        Err(format!(
            "{}: {} of {} checks failed (first: {})",
            outcome.name,
            outcome.failures,
            outcome.trials,
            outcome.first_failure.unwrap_or_default()
        ))
    }
}

#[test]
fn acceptance_01_rank_one_fixture() {
    verdict("1", "rank-one fixture: radical and orthogonal torus", (|| {
        let spec: ProblemSpec = serde_json::from_str(&fixture("p2_skew_n3.json"))
            .map_err(|e| e.to_string())?;
        let report = analyze(&spec).map_err(|e| e.to_string())?;
        let dense = report
            .strata
            .iter()
            .find(|r| r.w.is_empty())
            .ok_or("no dense stratum record")?;
        let expected = vec![vec![BigInt::one(), BigInt::zero(), BigInt::zero()]];
        if dense.radical_basis != expected {
            return Err(format!("radical basis {:?}", dense.radical_basis));
        }
        if dense.perp_dimension != 2 {
            return Err(format!("orthogonal torus dimension {}", dense.perp_dimension));
        }
        if !dense.perp_components.is_one() {
            return Err(format!("component count {}", dense.perp_components));
        }
        Ok(())
    })());
}

#[test]
fn acceptance_02_generic_closed_forms_and_template() {
    verdict("2", "generic-parameter closed forms and symbolic generator", (|| {
        suite_result(selftest::suite_closed_form_generic().map_err(|e| e.to_string())?)?;
        let spec: ProblemSpec =
            serde_json::from_str(&fixture("uniparameter_generic_n3.json"))
                .map_err(|e| e.to_string())?;
        let report = analyze(&spec).map_err(|e| e.to_string())?;
        let dense = &report.strata[0];
        let golden = "p^-1*l2*x[1]*x[3] - l1*l3*x[2]";
        if dense.psi_localized != vec![golden.to_string()] {
            return Err(format!("template {:?}", dense.psi_localized));
        }
        Ok(())
    })());
}

#[test]
fn acceptance_03_odd_order_closed_forms() {
    verdict("3", "odd-order closed forms and power binomials", (|| {
        suite_result(selftest::suite_closed_form_torsion().map_err(|e| e.to_string())?)
    })());
}

#[test]
fn acceptance_04_radical_box_oracle() {
    verdict("4", "radical against box enumeration", (|| {
        suite_result(selftest::suite_radical_box().map_err(|e| e.to_string())?)
    })());
}

#[test]
fn acceptance_05_cocycle_identities() {
    verdict("5", "square-root and adapted cocycle identities", (|| {
        suite_result(selftest::suite_cocycle_properties().map_err(|e| e.to_string())?)
    })());
}

#[test]
fn acceptance_06_restriction_compatibility() {
    verdict("6", "radical restriction compatibility", (|| {
        suite_result(selftest::suite_compatibility().map_err(|e| e.to_string())?)
    })());
}

#[test]
fn acceptance_07_fiber_suite() {
    verdict("7", "fiber moves, separation, equivalence", (|| {
        suite_result(selftest::suite_fiber_orbit().map_err(|e| e.to_string())?)
    })());
}

#[test]
fn acceptance_08a_sign_flip_feasibility_witness_and_bound() {
    verdict(
        "8a",
        "sign-flip feasibility: witness at n=2, exhaustive infeasibility at n=4",
        (|| {
            let b2 = QMatrix::uniparameter(2, 2, false, None)
                .and_then(|q| q.validate())
                .map_err(|e| e.to_string())?;
            let out2 = bichar_feasibility(&b2, 2).map_err(|e| e.to_string())?;
            if !out2.feasible() {
                return Err("no witness at n=2".into());
            }
            let expected = IntMatrix::from_i64(&[&[0, 0], &[2, 0]]);
            if out2.witness() != Some(&expected) {
                return Err(format!("unexpected n=2 witness {:?}", out2.witness()));
            }
            if !out2.routes_agree() {
                return Err("search routes disagree at n=2".into());
            }
            let b4 = QMatrix::uniparameter(4, 2, false, None)
                .and_then(|q| q.validate())
                .map_err(|e| e.to_string())?;
            let out4 = bichar_feasibility(&b4, 2).map_err(|e| e.to_string())?;
            if out4.feasible() {
                return Err("unexpected witness at n=4".into());
            }
            if !out4.was_exhaustive() || out4.space() != 4096 {
                return Err(format!(
                    "n=4 search not exhaustive over 4096 candidates: space {}, searched {}",
                    out4.space(),
                    out4.searched()
                ));
            }
            if !out4.label().contains("n >= 4") {
                return Err(format!("n=4 label: {}", out4.label()));
            }
            if !out4.routes_agree() {
                return Err("search routes disagree at n=4".into());
            }
            Ok(())
        })(),
    );
}

#[test]
fn acceptance_08b_sign_flip_feasibility_witness_at_n3() {
    verdict("8b", "sign-flip feasibility: witness at n=3", (|| {
        let b3 = QMatrix::uniparameter(3, 2, false, None)
            .and_then(|q| q.validate())
            .map_err(|e| e.to_string())?;
        let out3 = bichar_feasibility(&b3, 2).map_err(|e| e.to_string())?;
        if out3.feasible() {
            return Ok(());
        }
        Err(format!(
            "no admissible matrix exists for n=3: the exhaustive sweep covered all {} \
             zero-diagonal candidates over Z/4 and the independent linear-congruence route \
             agrees ({}); the requested witness cannot be produced",
            out3.searched(),
            out3.label()
        ))
    })());
}

#[test]
fn acceptance_09_twist_pullback_and_degenerations() {
    verdict("9", "graded twist pullback and degenerations", (|| {
        let spec: ProblemSpec = serde_json::from_str(&fixture("graded_twist_z2.json"))
            .map_err(|e| e.to_string())?;
        let report = analyze(&spec).map_err(|e| e.to_string())?;
        let twist = report.twist.as_ref().ok_or("missing twist section")?;
        let expected = vec![
            "q~[1,2] = q^2".to_string(),
            "q~[1,3] = q^2".to_string(),
            "q~[2,3] = q^-2".to_string(),
        ];
        if twist.q_tilde != expected {
            return Err(format!("pulled-back matrix {:?}", twist.q_tilde));
        }
        if report.strata.len() != 8 {
            return Err(format!("{} stratum records", report.strata.len()));
        }
        let dense = &report.strata[0];
        let expected_radical = vec![vec![BigInt::one(), BigInt::one(), BigInt::from(-1)]];
        if dense.radical_basis != expected_radical {
            return Err(format!("dense radical {:?}", dense.radical_basis));
        }
        if dense.image_dim != 1 || dense.fiber_dim != 2 {
            return Err(format!(
                "dense dimensions image {} fiber {}",
                dense.image_dim, dense.fiber_dim
            ));
        }
        // Degenerations: an empty cocycle table and a symmetric one both pull
        // back to the commutative matrix, where every stratum has full radical.
        let degenerate = [
            r#"{
                "n": 3,
                "group": {"free_rank": 1, "torsion_order": 1},
                "graded_twist": {
                    "grading_rank": 2,
                    "degrees": [[1, 0], [0, 1], [1, 1]],
                    "cocycle": []
                }
            }"#,
            r#"{
                "n": 3,
                "group": {"free_rank": 1, "torsion_order": 1},
                "graded_twist": {
                    "grading_rank": 1,
                    "degrees": [[1], [2], [1]],
                    "cocycle": [{"i": 1, "j": 1, "free": [1], "torsion": 0}]
                }
            }"#,
        ];
        for (k, text) in degenerate.iter().enumerate() {
            let problem = parse_problem(text).map_err(|e| e.to_string())?;
            let q = problem.ambient_qmatrix().map_err(|e| e.to_string())?;
            let b = q.validate().map_err(|e| e.to_string())?;
            let strata = stratify(&b).map_err(|e| e.to_string())?;
            for s in &strata {
                let full = 3 - s.w().len();
                if s.radical_lattice().rank() != full || s.fiber_dim() != 0 {
                    return Err(format!(
                        "degeneration {k}: stratum {:?} not commutative",
                        s.w()
                    ));
                }
            }
        }
        Ok(())
    })());
}

#[test]
fn acceptance_10_determinism_and_round_trip() {
    verdict("10", "determinism and JSON round-trip", (|| {
        for name in [
            "p2_skew_n3.json",
            "uniparameter_generic_n3.json",
            "uniparameter_t3_n2.json",
            "graded_twist_z2.json",
            "commutative_n2.json",
        ] {
            let spec: ProblemSpec =
                serde_json::from_str(&fixture(name)).map_err(|e| e.to_string())?;
            let first = analyze(&spec).map_err(|e| e.to_string())?;
            let second = analyze(&spec).map_err(|e| e.to_string())?;
            let json_first = serde_json::to_string_pretty(&first).map_err(|e| e.to_string())?;
            let json_second = serde_json::to_string_pretty(&second).map_err(|e| e.to_string())?;
            if json_first != json_second || first.to_text() != second.to_text() {
                return Err(format!("{name}: repeated runs differ"));
            }
            let back: qstrata::AnalysisReport =
                serde_json::from_str(&json_first).map_err(|e| e.to_string())?;
            if back != first {
                return Err(format!("{name}: round trip lost information"));
            }
        }
        Ok(())
    })());
}
