//! Seeded cross-check suites.
//!
//! Each suite pits an engine computation against an independent route to the
//! same answer: closed forms for the two classical parameter families, box
//! enumeration for radical membership, direct identities for the square-root
//! and adapted cocycles, and randomized soundness/separation trials for the
//! fiber relation. All randomness is seeded, so a run is reproducible.

use crate::bicharacter::{Bicharacter, QMatrix};
use crate::error::Result;
use crate::lattice::kernel;
use crate::matrix::IntMatrix;
use crate::quotient::{closed_form_oracle, psi_generators, LambdaEntry, PresentationForm};
use crate::render::{render_binomial, MonomialStyle};
use crate::scalars::ScalarGroup;
use crate::strata::{
    compatibility_check, fiber_equivalent, stratum_for, subsets_ordered, FiberVerdict,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.into(),
            trials: 0,
            failures: 0,
            first_failure: None,
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.trials += 1;
        if !ok {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(describe());
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelfTestReport {
    pub suites: Vec<SuiteOutcome>,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::ok)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!(
                "{}: {} checks, {} failures{}\n",
                s.name,
                s.trials,
                s.failures,
                match &s.first_failure {
                    Some(f) => format!(" (first: {f})"),
                    None => String::new(),
                }
            ));
        }
        out.push_str(if self.passed() {
            "self-test: all suites passed\n"
        } else {
            "self-test: FAILURES\n"
        });
        out
    }
}

/// Run every suite with its fixed seed.
pub fn run_selftest() -> Result<SelfTestReport> {
    Ok(SelfTestReport {
        suites: vec![
            suite_closed_form_generic()?,
            suite_closed_form_torsion()?,
            suite_radical_box()?,
            suite_cocycle_properties()?,
            suite_compatibility()?,
            suite_fiber_orbit()?,
        ],
    })
}

fn unit(n: usize, j: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); n];
    e[j] = BigInt::one();
    e
}

/// A random matrix within the oracle box: n ≤ max_n, free rank ≤ 2, torsion
/// order in {1, 3, 5}, exponents in [−3, 3].
pub(crate) fn random_qmatrix(rng: &mut ChaCha8Rng, max_n: usize) -> Result<QMatrix> {
    let n = rng.gen_range(1..=max_n);
    random_qmatrix_exact(rng, n)
}

pub(crate) fn random_qmatrix_exact(rng: &mut ChaCha8Rng, n: usize) -> Result<QMatrix> {
    let free_rank = rng.gen_range(0..=2usize);
    let torsion = [1i64, 3, 5][rng.gen_range(0..3)];
    let group = ScalarGroup::new(free_rank, BigInt::from(torsion), false)?;
    let mut upper = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let free: Vec<BigInt> = (0..free_rank)
                .map(|_| BigInt::from(rng.gen_range(-3i64..=3)))
                .collect();
            let tor = BigInt::from(rng.gen_range(0..torsion));
            upper.push((i, j, group.element(free, tor)?));
        }
    }
    QMatrix::from_upper_entries(group, n, &upper)
}

fn rank_one_skew_matrix() -> Result<QMatrix> {
    let group = ScalarGroup::new(1, BigInt::one(), false)?;
    let g = group.element(vec![BigInt::one()], BigInt::zero())?;
    QMatrix::from_upper_entries(group, 3, &[(1, 2, g)])
}

/// Generic single parameter: the radical matches the closed form for every
/// subset, up to six generators.
pub fn suite_closed_form_generic() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("closed form, generic parameter");
    for n in 1..=6usize {
        let b = QMatrix::uniparameter(n, 0, false, None)?.validate()?;
        for w in subsets_ordered(n) {
            let s = b.radical(&w)?;
            let oracle = closed_form_oracle(0, n, &w)?;
            out.check(s == *oracle.lattice(), || format!("generic: n={n}, w={w:?}"));
        }
    }
    Ok(out)
}

/// Odd parameter orders: radical matches the closed form, and every pure
/// power row yields the power binomial with scalar coefficient exactly one.
pub fn suite_closed_form_torsion() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("closed form, odd torsion orders");
    let mut power_binomials = 0usize;
    for &t in &[3u64, 5, 7, 9] {
        for n in 1..=5usize {
            let b = QMatrix::uniparameter(n, t, false, None)?.validate()?;
            let c = b.sqrt()?;
            for w in subsets_ordered(n) {
                let s = b.radical(&w)?;
                let oracle = closed_form_oracle(t, n, &w)?;
                out.check(s == *oracle.lattice(), || format!("order {t}: n={n}, w={w:?}"));
                let stratum = stratum_for(&b, &w)?;
                let lambda: Vec<LambdaEntry> = (0..n)
                    .map(|i| {
                        if w.contains(&i) {
                            LambdaEntry::Zero
                        } else {
                            LambdaEntry::Symbol
                        }
                    })
                    .collect();
                let pres = psi_generators(&c, &stratum, &lambda, PresentationForm::Localized)?;
                for bin in pres.binomials() {
                    let support: Vec<usize> = (0..n)
                        .filter(|&i| !bin.alpha()[i].is_zero())
                        .collect();
                    if support.len() == 1 && bin.alpha()[support[0]] == BigInt::from(t) {
                        let j = support[0];
                        let rendered =
                            render_binomial(b.group(), bin, MonomialStyle::Ordered);
                        let expected = format!("x[{0}]^{t} - l{0}^{t}", j + 1);
                        out.check(rendered == expected, || {
                            format!("order {t}: n={n}, w={w:?}: {rendered} != {expected}")
                        });
                        power_binomials += 1;
                    }
                }
            }
        }
    }
    out.check(power_binomials >= 100, || {
        format!("only {power_binomials} power binomials seen")
    });
    Ok(out)
}

fn i64_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| i64::try_from(m.get(i, j)).expect("small exponent"))
                .collect()
        })
        .collect()
}

/// Echelon-basis membership over the integers, all in machine arithmetic.
fn staircase_contains(rows: &[Vec<i64>], alpha: &[i64]) -> bool {
    let mut a = alpha.to_vec();
    for row in rows {
        let p = match row.iter().position(|&x| x != 0) {
            Some(p) => p,
            None => continue,
        };
        let q = a[p] / row[p];
        for (ai, ri) in a.iter_mut().zip(row) {
            *ai -= q * ri;
        }
    }
    a.iter().all(|&x| x == 0)
}

/// Radical membership agrees with direct box enumeration in both directions.
pub fn suite_radical_box() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("radical against box enumeration");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    for trial in 0..100usize {
        let q = random_qmatrix(&mut rng, 4)?;
        let b = q.validate()?;
        let n = q.n();
        let w: Vec<usize> = if rng.gen_bool(0.5) {
            Vec::new()
        } else {
            (0..n).filter(|_| rng.gen_bool(0.4)).collect()
        };
        let s = b.radical(&w)?;
        let basis = i64_rows(s.basis());
        let free: Vec<Vec<Vec<i64>>> =
            b.free_exponent_matrices().iter().map(i64_rows).collect();
        let tor = i64_rows(b.torsion_exponent_matrix());
        let m = i64::try_from(b.group().torsion_order()).expect("small order");
        let complement: Vec<usize> = (0..n).filter(|i| !w.contains(i)).collect();
        let mut alpha = vec![-6i64; n];
        let mut mismatch: Option<Vec<i64>> = None;
        'points: loop {
            let in_gamma = w.iter().all(|&i| alpha[i] == 0);
            let direct = in_gamma
                && complement.iter().all(|&j| {
                    free.iter()
                        .all(|mat| (0..n).map(|i| alpha[i] * mat[i][j]).sum::<i64>() == 0)
                        && (0..n).map(|i| alpha[i] * tor[i][j]).sum::<i64>() % m == 0
                });
            let member = staircase_contains(&basis, &alpha);
            if direct != member {
                mismatch = Some(alpha.clone());
                break 'points;
            }
            let mut k = 0;
            loop {
                if k == n {
                    break 'points;
                }
                alpha[k] += 1;
                if alpha[k] <= 6 {
                    break;
                }
                alpha[k] = -6;
                k += 1;
            }
        }
        out.check(mismatch.is_none(), || {
            format!("trial {trial}: n={n}, w={w:?}, point {mismatch:?}")
        });
    }
    Ok(out)
}

fn cocycle_check_matrix(
    out: &mut SuiteOutcome,
    label: &str,
    b: &Bicharacter,
    rng: &mut ChaCha8Rng,
    trivial_pairs: &mut usize,
    trivial_target: usize,
) -> Result<()> {
    let n = b.n();
    let group = b.group();
    let c = b.sqrt()?;
    for i in 0..n {
        for j in 0..n {
            let ei = unit(n, i);
            let ej = unit(n, j);
            let cij = c.eval(&ei, &ej);
            out.check(group.half_square(&cij) == b.sigma(&ei, &ej), || {
                format!("{label}: square at ({i},{j})")
            });
            let cji = c.eval(&ej, &ei);
            out.check(group.half_mul(&cij, &cji).is_identity(), || {
                format!("{label}: antisymmetry at ({i},{j})")
            });
        }
    }
    for _ in 0..3 {
        let alpha: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-4i64..=4))).collect();
        out.check(c.eval(&alpha, &alpha).is_identity(), || {
            format!("{label}: alternation at {alpha:?}")
        });
    }
    // Values on sigma-trivial pairs, built from the global radical when it is
    // nonzero and by rejection sampling otherwise.
    let s0 = b.radical(&[])?;
    let mut sampled = 0usize;
    let mut attempts = 0usize;
    while sampled < 2 && *trivial_pairs < trivial_target {
        attempts += 1;
        let (alpha, beta): (Vec<BigInt>, Vec<BigInt>) = if s0.rank() > 0 && attempts <= 40 {
            let rows = s0.basis_vectors();
            let mut alpha = vec![BigInt::zero(); n];
            for row in &rows {
                let k = BigInt::from(rng.gen_range(-2i64..=2));
                for (a, r) in alpha.iter_mut().zip(row) {
                    *a += &k * r;
                }
            }
            let beta = (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
            (alpha, beta)
        } else if attempts <= 40 {
            let alpha: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
            let beta: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
            (alpha, beta)
        } else {
            // Guaranteed trivial pair: multiples of one vector pair trivially
            // under any alternating form.
            let alpha: Vec<BigInt> =
                (0..n).map(|_| BigInt::from(rng.gen_range(-3i64..=3))).collect();
            let k = BigInt::from(rng.gen_range(-3i64..=3));
            let beta = alpha.iter().map(|a| a * &k).collect();
            (alpha, beta)
        };
        if !b.sigma(&alpha, &beta).is_identity() {
            continue;
        }
        out.check(c.eval(&alpha, &beta).is_identity(), || {
            format!("{label}: trivial pair {alpha:?}, {beta:?}")
        });
        sampled += 1;
        *trivial_pairs += 1;
    }
    // Exact triviality on S_w × Γ_w for every subset, via basis vectors.
    for w in subsets_ordered(n) {
        let s = b.radical(&w)?;
        for row in s.basis_vectors() {
            for j in (0..n).filter(|j| !w.contains(j)) {
                out.check(c.eval(&row, &unit(n, j)).is_identity(), || {
                    format!("{label}: c on radical, w={w:?}, row {row:?}, j={j}")
                });
            }
        }
    }
    // The adapted construction satisfies the same defining identities.
    let ac = b.adapted_cocycle(&s0)?;
    for i in 0..n {
        for j in 0..n {
            let ei = unit(n, i);
            let ej = unit(n, j);
            let ratio = group.mul(&ac.eval(&ei, &ej), &group.inverse(&ac.eval(&ej, &ei)));
            out.check(ratio == b.sigma(&ei, &ej), || {
                format!("{label}: adapted ratio at ({i},{j})")
            });
        }
    }
    for row in s0.basis_vectors() {
        for j in 0..n {
            out.check(ac.eval(&row, &unit(n, j)).is_identity(), || {
                format!("{label}: adapted vanishing, row {row:?}, j={j}")
            });
        }
    }
    Ok(())
}

/// Square-root and adapted cocycles satisfy their defining identities on the
/// fixture matrices and a fresh batch of random ones.
pub fn suite_cocycle_properties() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("square-root and adapted cocycles");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut trivial_pairs = 0usize;
    let fixtures: Vec<(String, QMatrix)> = vec![
        ("rank-one skew".into(), rank_one_skew_matrix()?),
        ("generic n=3".into(), QMatrix::uniparameter(3, 0, false, None)?),
        ("order 3, n=2".into(), QMatrix::uniparameter(2, 3, false, None)?),
        ("order 5, n=4".into(), QMatrix::uniparameter(4, 5, false, None)?),
    ];
    for (label, q) in &fixtures {
        let b = q.validate()?;
        cocycle_check_matrix(&mut out, label, &b, &mut rng, &mut trivial_pairs, 200)?;
    }
    for trial in 0..100usize {
        let q = random_qmatrix(&mut rng, 4)?;
        let b = q.validate()?;
        let label = format!("random {trial}");
        cocycle_check_matrix(&mut out, &label, &b, &mut rng, &mut trivial_pairs, 200)?;
    }
    out.check(trivial_pairs >= 200, || {
        format!("only {trivial_pairs} sigma-trivial pairs sampled")
    });
    Ok(out)
}

/// Radicals restrict compatibly: S_v ∩ Γ_w ⊆ S_w whenever v ⊆ w.
pub fn suite_compatibility() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("radical restriction compatibility");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut matrices = vec![
        rank_one_skew_matrix()?,
        QMatrix::uniparameter(3, 0, false, None)?,
        QMatrix::uniparameter(2, 3, false, None)?,
    ];
    for _ in 0..50 {
        matrices.push(random_qmatrix(&mut rng, 4)?);
    }
    for (k, q) in matrices.iter().enumerate() {
        let b = q.validate()?;
        let violations = compatibility_check(&b)?;
        out.check(violations.is_empty(), || {
            format!("matrix {k}: violations {violations:?}")
        });
    }
    Ok(out)
}

fn random_nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = loop {
        let x = rng.gen_range(-5i64..=5);
        if x != 0 {
            break x;
        }
    };
    let den = rng.gen_range(1i64..=4);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// λ scaled along an integer vector orthogonal to the radical; lands in the
/// same fiber by construction.
fn orbit_move(
    rng: &mut ChaCha8Rng,
    lambda: &[BigRational],
    orthogonal: &[Vec<BigInt>],
) -> Vec<BigRational> {
    if orthogonal.is_empty() {
        return lambda.to_vec();
    }
    let n = lambda.len();
    let mut u = vec![0i64; n];
    for row in orthogonal {
        let k = rng.gen_range(-2i64..=2);
        for (ui, ri) in u.iter_mut().zip(row) {
            *ui += k * i64::try_from(ri).expect("small kernel entry");
        }
    }
    let r = [
        BigRational::from_integer(BigInt::from(2)),
        BigRational::from_integer(BigInt::from(3)),
        BigRational::new(BigInt::one(), BigInt::from(2)),
        BigRational::from_integer(BigInt::from(-2)),
    ][rng.gen_range(0..4)]
    .clone();
    lambda
        .iter()
        .zip(&u)
        .map(|(l, &e)| {
            if l.is_zero() {
                l.clone()
            } else {
                l * r.pow(i32::try_from(e).expect("small move exponent"))
            }
        })
        .collect()
}

fn lambda_entries(point: &[BigRational]) -> Vec<LambdaEntry> {
    point
        .iter()
        .map(|x| {
            if x.is_zero() {
                LambdaEntry::Zero
            } else {
                LambdaEntry::Rational(x.clone())
            }
        })
        .collect()
}

/// Fiber moves are sound, witnesses separate, the relation is an equivalence,
/// and normalized symbolic generators agree on equivalent points.
pub fn suite_fiber_orbit() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("fiber moves and separation");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    for trial in 0..200usize {
        let size = rng.gen_range(2..=4);
        let q = random_qmatrix_exact(&mut rng, size)?;
        let b = q.validate()?;
        let n = q.n();
        // Prefer a random subset whose radical is nonzero; all-but-one always is.
        let mut w: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        if b.radical(&w)?.rank() == 0 {
            let keep = rng.gen_range(0..n);
            w = (0..n).filter(|&i| i != keep).collect();
        }
        let s = b.radical(&w)?;
        let lambda: Vec<BigRational> = (0..n)
            .map(|i| {
                if w.contains(&i) {
                    BigRational::zero()
                } else {
                    random_nonzero_rational(&mut rng)
                }
            })
            .collect();
        let orthogonal = kernel(s.basis()).basis_vectors();
        let mu = orbit_move(&mut rng, &lambda, &orthogonal);
        let verdict = fiber_equivalent(&b, &lambda, &mu)?;
        out.check(matches!(verdict, FiberVerdict::Equivalent), || {
            format!("trial {trial}: move not recognized: {verdict:?}")
        });
        // Separation: disturb one coordinate that some radical vector sees.
        let rows = s.basis_vectors();
        if let Some(row) = rows.first() {
            let j = (0..n).find(|&j| !row[j].is_zero()).expect("nonzero row");
            let mut nu = lambda.clone();
            nu[j] *= BigRational::from_integer(BigInt::from(2));
            let verdict = fiber_equivalent(&b, &lambda, &nu)?;
            out.check(!verdict.equivalent(), || {
                format!("trial {trial}: separation missed at coordinate {j}")
            });
        }
        // Symbolic generators, once normalized, agree exactly on the pair.
        let c = b.sqrt()?;
        let stratum = stratum_for(&b, &w)?;
        let group = b.group();
        let render_templates = |point: &[BigRational]| -> Result<Vec<String>> {
            let pres = psi_generators(
                &c,
                &stratum,
                &lambda_entries(point),
                PresentationForm::Localized,
            )?;
            pres.binomials()
                .iter()
                .map(|bin| {
                    let canonical = bin.ordered(&c)?.normalized(group)?;
                    Ok(render_binomial(group, &canonical, MonomialStyle::Ordered))
                })
                .collect()
        };
        out.check(render_templates(&lambda)? == render_templates(&mu)?, || {
            format!("trial {trial}: normalized templates differ on an equivalent pair")
        });
    }
    // The relation is an equivalence on constructed triples.
    for trial in 0..100usize {
        let size = rng.gen_range(2..=4);
        let q = random_qmatrix_exact(&mut rng, size)?;
        let b = q.validate()?;
        let n = q.n();
        let w: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let s = b.radical(&w)?;
        let lambda: Vec<BigRational> = (0..n)
            .map(|i| {
                if w.contains(&i) {
                    BigRational::zero()
                } else {
                    random_nonzero_rational(&mut rng)
                }
            })
            .collect();
        let orthogonal = kernel(s.basis()).basis_vectors();
        let mu = orbit_move(&mut rng, &lambda, &orthogonal);
        let nu = orbit_move(&mut rng, &mu, &orthogonal);
        let reflexive = fiber_equivalent(&b, &lambda, &lambda)?;
        out.check(matches!(reflexive, FiberVerdict::Equivalent), || {
            format!("triple {trial}: not reflexive")
        });
        let forward = fiber_equivalent(&b, &lambda, &mu)?.equivalent();
        let backward = fiber_equivalent(&b, &mu, &lambda)?.equivalent();
        out.check(forward && backward, || {
            format!("triple {trial}: not symmetric")
        });
        let chained = fiber_equivalent(&b, &lambda, &nu)?.equivalent();
        out.check(chained, || format!("triple {trial}: not transitive"));
        // Symmetry also on a deliberately separated pair.
        if let Some(row) = s.basis_vectors().first() {
            let j = (0..n).find(|&j| !row[j].is_zero()).expect("nonzero row");
            let mut rho = lambda.clone();
            rho[j] *= BigRational::from_integer(BigInt::from(3));
            let lr = fiber_equivalent(&b, &lambda, &rho)?.equivalent();
            let rl = fiber_equivalent(&b, &rho, &lambda)?.equivalent();
            out.check(lr == rl && !lr, || {
                format!("triple {trial}: separated pair not symmetric")
            });
        }
    }
    Ok(out)
}
