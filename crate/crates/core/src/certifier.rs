//! Resistance certification for Dicke families and code states.
//!
//! A state is `m`-resistant when it stays entangled after losing any `m`
//! parties and becomes fully separable after losing any `m + 1`. For Dicke
//! combinations both sides are decided exactly by the Hankel criterion and a
//! single subset per side suffices by permutation symmetry. For code states
//! every subset is visited: robustness through an explicit PPT witness,
//! fragility through diagonality of the reduction.

use num_bigint::BigUint;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::arrays::{combinations, is_critical_array, state_from_array, CodeArray};
use crate::dicke::{hankel, is_k_mixture, reduce_combo, DickeCombo};
use crate::error::{Error, Result};
use crate::families::FamilySpec;
use crate::scalar::{binomial, sign, ExactScalar};
use crate::separability::{
    dicke_separable, diagonal_fully_separable, ppt_witness, Evidence, HankelEvidence, HankelSide,
    VerdictKind,
};
use crate::tensor::{BasisLabel, DenseOperator, PureVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Certified,
    Refuted,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Certified => "CERTIFIED",
            Outcome::Refuted => "REFUTED",
            Outcome::Inconclusive => "INCONCLUSIVE",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [Outcome::Certified, Outcome::Refuted, Outcome::Inconclusive]
            .into_iter()
            .find(|o| o.as_str() == text)
    }

    /// Process exit status: 0, 1 or 2.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Certified => 0,
            Outcome::Refuted => 1,
            Outcome::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    /// Entanglement of the global symmetric state from its support pattern.
    GlobalGme,
    /// Losing `m` parties must leave an entangled state.
    Robustness,
    /// Losing `m + 1` parties must leave a fully separable state.
    Fragility,
}

impl CheckKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CheckKind::GlobalGme => "global-gme",
            CheckKind::Robustness => "robustness",
            CheckKind::Fragility => "fragility",
        }
    }

    /// Verdict that passes this check.
    pub fn required(self) -> VerdictKind {
        match self {
            CheckKind::GlobalGme | CheckKind::Robustness => VerdictKind::Entangled,
            CheckKind::Fragility => VerdictKind::Separable,
        }
    }
}

/// PPT witness located by the code pipeline, with the context to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeWitness {
    /// Row indices of the agreeing pair.
    pub rows: (usize, usize),
    /// Retained parties (original indices, ascending).
    pub retained: Vec<usize>,
    /// Transposed party, as an original index.
    pub pivot: usize,
    /// Vector on the retained parties.
    pub vector: PureVector,
    pub value: ExactScalar,
    /// Witness candidates evaluated, this one included.
    pub attempts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckEvidence {
    SupportPattern {
        nonzero: Vec<usize>,
        intervening_zero: Option<usize>,
    },
    Hankel {
        mixture: Vec<ExactScalar>,
        hankel: Box<HankelEvidence>,
    },
    Diagonal {
        support: usize,
    },
    OffDiagonal {
        row: BasisLabel,
        col: BasisLabel,
        value: ExactScalar,
    },
    Witness(Box<CodeWitness>),
    WitnessExhausted {
        attempts: usize,
    },
    Precondition {
        reason: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Lost parties, 0-based, ascending.
    pub lost: Vec<usize>,
    pub kind: CheckKind,
    pub verdict: VerdictKind,
    pub evidence: CheckEvidence,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.verdict == self.kind.required()
    }

    /// A decided verdict opposite to the required one.
    pub fn refutes(&self) -> bool {
        self.verdict != VerdictKind::Inconclusive && !self.passed()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    Dicke {
        combo: DickeCombo,
        family: Option<FamilySpec>,
    },
    Code {
        code: CodeArray,
        coeffs: Vec<ExactScalar>,
    },
}

impl Subject {
    pub fn n_parties(&self) -> usize {
        match self {
            Subject::Dicke { combo, .. } => combo.n_qubits(),
            Subject::Code { code, .. } => code.n(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Claim {
    pub m: usize,
    /// Strong resistance (symmetric families only).
    pub strong: bool,
    /// Strict claims abort on failed preconditions.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetCount {
    /// `C(N, size)`.
    pub total: BigUint,
    pub evaluated: usize,
    /// The remaining subsets follow by permutation symmetry.
    pub by_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub robustness: SubsetCount,
    pub fragility: SubsetCount,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Precondition {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub kind: CheckKind,
    pub lost: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub subject: Subject,
    pub claim: Claim,
    pub outcome: Outcome,
    pub coverage: Coverage,
    pub preconditions: Vec<Precondition>,
    pub counterexamples: Vec<Counterexample>,
    pub checks: Vec<Check>,
}

fn assemble(subject: Subject, claim: Claim, coverage: Coverage, preconditions: Vec<Precondition>, checks: Vec<Check>) -> Certificate {
    let counterexamples: Vec<Counterexample> = checks
        .iter()
        .filter(|c| c.refutes())
        .map(|c| Counterexample {
            kind: c.kind,
            lost: c.lost.clone(),
        })
        .collect();
    let outcome = if !counterexamples.is_empty() {
        Outcome::Refuted
    } else if checks.iter().all(Check::passed) {
        Outcome::Certified
    } else {
        Outcome::Inconclusive
    };
    Certificate {
        subject,
        claim,
        outcome,
        coverage,
        preconditions,
        counterexamples,
        checks,
    }
}

fn dicke_check(combo: &DickeCombo, k: usize, kind: CheckKind) -> Result<Check> {
    let n = combo.n_qubits();
    let mix = reduce_combo(combo, k)?;
    let verdict = dicke_separable(&mix)?;
    let Evidence::Hankel(h) = verdict.evidence else {
        unreachable!("the Hankel route always reports Hankel evidence")
    };
    Ok(Check {
        lost: (k..n).collect(),
        kind,
        verdict: verdict.kind,
        evidence: CheckEvidence::Hankel {
            mixture: mix.coeffs().to_vec(),
            hankel: h,
        },
    })
}

fn support_pattern(combo: &DickeCombo) -> Check {
    let nonzero = combo.support();
    let lo = nonzero[0];
    let hi = *nonzero.last().expect("two weights");
    let intervening_zero = (lo + 1..hi).find(|i| !combo.weights().contains_key(i));
    Check {
        lost: Vec::new(),
        kind: CheckKind::GlobalGme,
        verdict: if intervening_zero.is_some() {
            VerdictKind::Entangled
        } else {
            VerdictKind::Inconclusive
        },
        evidence: CheckEvidence::SupportPattern {
            nonzero,
            intervening_zero,
        },
    }
}

/// Strong `m`-resistance of a Dicke combination.
///
/// With `k = N - m`, the `k`-reduction must be entangled and the
/// `(k-1)`-reduction separable. Both must be mixtures of Dicke states (the
/// gap condition), otherwise the claim is rejected, except that an
/// entangled `(k-1)`-reduction refutes the claim on its own.
pub fn certify_dicke_strong(combo: &DickeCombo, m: usize) -> Result<Certificate> {
    let n = combo.n_qubits();
    if m == 0 || m + 2 > n {
        return Err(Error::Precondition(format!(
            "m = {m} must satisfy 1 <= m <= N - 2 for N = {n}"
        )));
    }
    let k = n - m;
    let gap = combo.tightest_gap();
    let robust_ok = is_k_mixture(combo, k);
    let fragile_ok = is_k_mixture(combo, k - 1);
    let mixture_note = |k: usize, ok: bool| Precondition {
        name: format!("{k}-mixture"),
        holds: ok,
        detail: format!(
            "closest support indices {} and {} differ by {}, need > {k}",
            gap.0, gap.1, gap.2
        ),
    };
    let preconditions = vec![mixture_note(k, robust_ok), mixture_note(k - 1, fragile_ok)];
    if !fragile_ok {
        return Err(Error::NotKMixture {
            k: k - 1,
            i: gap.0,
            j: gap.1,
            gap: gap.2,
        });
    }
    let fragility = dicke_check(combo, k - 1, CheckKind::Fragility)?;
    let robustness = if robust_ok {
        dicke_check(combo, k, CheckKind::Robustness)?
    } else if fragility.verdict == VerdictKind::Entangled {
        Check {
            lost: (k..n).collect(),
            kind: CheckKind::Robustness,
            verdict: VerdictKind::Inconclusive,
            evidence: CheckEvidence::Precondition {
                reason: format!(
                    "not a {k}-mixture: indices {} and {} differ by {}",
                    gap.0, gap.1, gap.2
                ),
            },
        }
    } else {
        return Err(Error::NotKMixture {
            k,
            i: gap.0,
            j: gap.1,
            gap: gap.2,
        });
    };
    let coverage = Coverage {
        robustness: SubsetCount {
            total: binomial(n, m),
            evaluated: 1,
            by_symmetry: true,
        },
        fragility: SubsetCount {
            total: binomial(n, m + 1),
            evaluated: 1,
            by_symmetry: true,
        },
    };
    Ok(assemble(
        Subject::Dicke {
            combo: combo.clone(),
            family: None,
        },
        Claim {
            m,
            strong: true,
            strict: true,
        },
        coverage,
        preconditions,
        vec![support_pattern(combo), robustness, fragility],
    ))
}

/// Builds the family member and certifies it at `m` (default `N - kept`).
pub fn certify_family(spec: &FamilySpec, m: Option<usize>) -> Result<Certificate> {
    let combo = spec.build()?;
    let mut cert = certify_dicke_strong(&combo, m.unwrap_or_else(|| spec.default_m()))?;
    cert.subject = Subject::Dicke {
        combo,
        family: Some(spec.clone()),
    };
    Ok(cert)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeOptions {
    /// Reject the claim when the critical-array preconditions fail.
    pub strict: bool,
    /// Evaluate subsets on the rayon pool.
    pub parallel: bool,
}

impl Default for CodeOptions {
    fn default() -> Self {
        CodeOptions {
            strict: true,
            parallel: true,
        }
    }
}

fn complement(n: usize, lost: &[usize]) -> Vec<usize> {
    (0..n).filter(|p| !lost.contains(p)).collect()
}

/// All row pairs `(i, j)`, `i < j`, agreeing on `columns`, in row order.
fn agreeing_pairs(code: &CodeArray, columns: &[usize]) -> Vec<(usize, usize)> {
    let rows = code.rows();
    let mut out = Vec::new();
    for i in 0..rows.len() {
        for j in (i + 1)..rows.len() {
            if columns.iter().all(|&c| rows[i][c] == rows[j][c]) {
                out.push((i, j));
            }
        }
    }
    out
}

/// `e_x - s e_y` on the retained parties, where `x` and `y` are the two rows
/// restricted to `retained` with their pivot symbols exchanged and `s` is
/// the sign of `c_i c_j`. `None` when the exchange leaves `x = y` or the
/// rows already share the pivot symbol.
fn build_witness(
    code: &CodeArray,
    coeffs: &[ExactScalar],
    (i, j): (usize, usize),
    retained: &[usize],
    pivot_pos: usize,
) -> Result<Option<PureVector>> {
    let shape = crate::tensor::SystemShape::new(retained.len(), code.q())?;
    let xr = BasisLabel::new(code.rows()[i].clone(), code.shape())?.restrict(retained);
    let yr = BasisLabel::new(code.rows()[j].clone(), code.shape())?.restrict(retained);
    let (a, b) = (xr.symbols()[pivot_pos], yr.symbols()[pivot_pos]);
    if a == b {
        return Ok(None);
    }
    let x = xr.with_symbol(pivot_pos, b);
    let y = yr.with_symbol(pivot_pos, a);
    if x == y {
        return Ok(None);
    }
    let s = sign(&(&coeffs[i] * &coeffs[j]));
    Ok(Some(PureVector::new(
        shape,
        [(x, ExactScalar::from_integer(1.into())), (y, ExactScalar::from_integer((-s).into()))],
    )?))
}

/// Witness vector for one lost subset from the first row pair agreeing on
/// it. `pivot` is an original party index outside `lost`.
pub fn witness_for_subset(
    code: &CodeArray,
    coeffs: &[ExactScalar],
    lost: &[usize],
    pivot: usize,
) -> Result<PureVector> {
    if coeffs.len() != code.r() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for {} rows",
            coeffs.len(),
            code.r()
        )));
    }
    let retained = complement(code.n(), lost);
    let pivot_pos = retained
        .iter()
        .position(|&p| p == pivot)
        .ok_or_else(|| Error::NoWitness(format!("pivot {pivot} is not a retained party")))?;
    let pair = *agreeing_pairs(code, lost).first().ok_or_else(|| {
        Error::NoWitness(format!(
            "no two rows agree on columns {lost:?}; the repeat condition fails there"
        ))
    })?;
    build_witness(code, coeffs, pair, &retained, pivot_pos)?.ok_or_else(|| {
        Error::NoWitness(format!(
            "rows {} and {} share the symbol at pivot {pivot}",
            pair.0, pair.1
        ))
    })
}

/// Tries row pairs in row order and, for each, pivots from the highest
/// retained party down, until a witness goes negative.
fn search_witness(
    code: &CodeArray,
    coeffs: &[ExactScalar],
    reduced: &DenseOperator,
    lost: &[usize],
) -> Result<std::result::Result<CodeWitness, usize>> {
    let retained = complement(code.n(), lost);
    let mut attempts = 0;
    for pair in agreeing_pairs(code, lost) {
        for pivot_pos in (0..retained.len()).rev() {
            let Some(v) = build_witness(code, coeffs, pair, &retained, pivot_pos)? else {
                continue;
            };
            attempts += 1;
            let verdict = ppt_witness(reduced, pivot_pos, &v)?;
            if verdict.kind == VerdictKind::Entangled {
                let Evidence::Witness { value, .. } = verdict.evidence else {
                    unreachable!("witness route reports witness evidence")
                };
                return Ok(Ok(CodeWitness {
                    rows: pair,
                    retained: retained.clone(),
                    pivot: retained[pivot_pos],
                    vector: v,
                    value,
                    attempts,
                }));
            }
        }
    }
    Ok(Err(attempts))
}

fn robustness_check(code: &CodeArray, coeffs: &[ExactScalar], rho: &DenseOperator, lost: Vec<usize>) -> Result<Check> {
    let reduced = rho.partial_trace(&lost)?;
    if reduced.is_diagonal() {
        return Ok(Check {
            lost,
            kind: CheckKind::Robustness,
            verdict: VerdictKind::Separable,
            evidence: CheckEvidence::Diagonal {
                support: reduced.nnz(),
            },
        });
    }
    let (verdict, evidence) = match search_witness(code, coeffs, &reduced, &lost)? {
        Ok(w) => (VerdictKind::Entangled, CheckEvidence::Witness(Box::new(w))),
        Err(attempts) => (VerdictKind::Inconclusive, CheckEvidence::WitnessExhausted { attempts }),
    };
    Ok(Check {
        lost,
        kind: CheckKind::Robustness,
        verdict,
        evidence,
    })
}

fn fragility_check(code: &CodeArray, coeffs: &[ExactScalar], rho: &DenseOperator, lost: Vec<usize>) -> Result<Check> {
    let reduced = rho.partial_trace(&lost)?;
    let diag = diagonal_fully_separable(&reduced);
    if diag.kind == VerdictKind::Separable {
        return Ok(Check {
            lost,
            kind: CheckKind::Fragility,
            verdict: VerdictKind::Separable,
            evidence: CheckEvidence::Diagonal {
                support: reduced.nnz(),
            },
        });
    }
    let (verdict, evidence) = match search_witness(code, coeffs, &reduced, &lost)? {
        Ok(w) => (VerdictKind::Entangled, CheckEvidence::Witness(Box::new(w))),
        Err(_) => {
            let Evidence::OffDiagonal { row, col, value } = diag.evidence else {
                unreachable!("non-diagonal reductions report an off-diagonal entry")
            };
            (VerdictKind::Inconclusive, CheckEvidence::OffDiagonal { row, col, value })
        }
    };
    Ok(Check {
        lost,
        kind: CheckKind::Fragility,
        verdict,
        evidence,
    })
}

/// Plain `m`-resistance of `sum_i c_i |row_i>`.
///
/// Strict claims require the array to be `(m+1)`-critical with
/// `N >= 2(m+1)`; relaxed claims record the preconditions and run anyway.
pub fn certify_code_resistant(
    code: &CodeArray,
    coeffs: &[ExactScalar],
    m: usize,
    opts: CodeOptions,
) -> Result<Certificate> {
    let n = code.n();
    if m == 0 || m + 1 >= n {
        return Err(Error::Precondition(format!(
            "m = {m} must satisfy 1 <= m <= N - 2 for N = {n}"
        )));
    }
    let k = m + 1;
    let report = is_critical_array(code, k);
    let preconditions = vec![
        Precondition {
            name: format!("critical-array k={k}"),
            holds: report.holds(),
            detail: match &report.violation {
                None => "both conditions hold".to_string(),
                Some(v) => format!("{v:?}"),
            },
        },
        Precondition {
            name: format!("N >= 2k = {}", 2 * k),
            holds: n >= 2 * k,
            detail: format!("N = {n}"),
        },
    ];
    if opts.strict {
        if let Some(p) = preconditions.iter().find(|p| !p.holds) {
            return Err(Error::Precondition(format!("{}: {}", p.name, p.detail)));
        }
    }
    let psi = state_from_array(code, coeffs)?;
    let rho = DenseOperator::outer(&psi);
    let robust_sets = combinations(n, m);
    let fragile_sets = combinations(n, m + 1);
    let run = |sets: Vec<Vec<usize>>, f: fn(&CodeArray, &[ExactScalar], &DenseOperator, Vec<usize>) -> Result<Check>| -> Result<Vec<Check>> {
        if opts.parallel {
            sets.into_par_iter().map(|s| f(code, coeffs, &rho, s)).collect()
        } else {
            sets.into_iter().map(|s| f(code, coeffs, &rho, s)).collect()
        }
    };
    let mut checks = run(robust_sets, robustness_check)?;
    checks.extend(run(fragile_sets, fragility_check)?);
    let coverage = Coverage {
        robustness: SubsetCount {
            total: binomial(n, m),
            evaluated: checks.iter().filter(|c| c.kind == CheckKind::Robustness).count(),
            by_symmetry: false,
        },
        fragility: SubsetCount {
            total: binomial(n, m + 1),
            evaluated: checks.iter().filter(|c| c.kind == CheckKind::Fragility).count(),
            by_symmetry: false,
        },
    };
    debug_assert_eq!(BigUint::from(coverage.robustness.evaluated), coverage.robustness.total);
    debug_assert_eq!(BigUint::from(coverage.fragility.evaluated), coverage.fragility.total);
    Ok(assemble(
        Subject::Code {
            code: code.clone(),
            coeffs: coeffs.to_vec(),
        },
        Claim {
            m,
            strong: false,
            strict: opts.strict,
        },
        coverage,
        preconditions,
        checks,
    ))
}

/// Recomputes every piece of decided evidence from the subject and checks
/// it still supports its verdict.
pub fn revalidate(cert: &Certificate) -> Result<()> {
    let fail = |msg: String| Err(Error::Certificate(msg));
    for check in &cert.checks {
        let tag = format!("{} check on {:?}", check.kind.as_str(), check.lost);
        match (&check.evidence, &cert.subject) {
            (CheckEvidence::Hankel { mixture, hankel: h }, Subject::Dicke { combo, .. }) => {
                let k = cert.subject.n_parties() - check.lost.len();
                let mix = reduce_combo(combo, k)?;
                if mix.coeffs() != mixture.as_slice() {
                    return fail(format!("{tag}: reduced mixture differs"));
                }
                let pair = hankel(&mix);
                if pair.m0 != h.m0 || pair.m1 != h.m1 {
                    return fail(format!("{tag}: Hankel matrices differ"));
                }
                let r0 = pair.m0.psd_report();
                let r1 = pair.m1.psd_report();
                match check.verdict {
                    VerdictKind::Entangled => {
                        let Some((side, idx, value)) = &h.failing else {
                            return fail(format!("{tag}: entangled without a failing coefficient"));
                        };
                        let report = match side {
                            HankelSide::M0 => &r0,
                            HankelSide::M1 => &r1,
                        };
                        if report.coefficients.get(*idx) != Some(value) || !value.is_negative() {
                            return fail(format!("{tag}: failing coefficient does not recompute"));
                        }
                    }
                    VerdictKind::Separable => {
                        if !(r0.is_psd() && r1.is_psd()) {
                            return fail(format!("{tag}: Hankel matrices are not PSD"));
                        }
                    }
                    VerdictKind::Inconclusive => {}
                }
            }
            (CheckEvidence::Witness(w), Subject::Code { code, coeffs }) => {
                let rho = DenseOperator::outer(&state_from_array(code, coeffs)?);
                let reduced = rho.partial_trace(&check.lost)?;
                let pos = w
                    .retained
                    .iter()
                    .position(|&p| p == w.pivot)
                    .ok_or_else(|| Error::Certificate(format!("{tag}: pivot not retained")))?;
                let value = reduced.partial_transpose(pos)?.quadratic_form(&w.vector)?;
                if value != w.value || !value.is_negative() {
                    return fail(format!("{tag}: witness value does not recompute to a negative"));
                }
            }
            (CheckEvidence::Diagonal { support }, Subject::Code { code, coeffs }) => {
                let rho = DenseOperator::outer(&state_from_array(code, coeffs)?);
                let reduced = rho.partial_trace(&check.lost)?;
                if !reduced.is_diagonal() || reduced.nnz() != *support {
                    return fail(format!("{tag}: reduction is not diagonal"));
                }
            }
            (CheckEvidence::SupportPattern { nonzero, intervening_zero }, Subject::Dicke { combo, .. }) => {
                if *nonzero != combo.support() {
                    return fail(format!("{tag}: support differs"));
                }
                if let Some(z) = intervening_zero {
                    let inside = nonzero.first() < Some(z) && nonzero.last() > Some(z);
                    if !inside || combo.weights().contains_key(z) {
                        return fail(format!("{tag}: index {z} is not an intervening zero"));
                    }
                }
            }
            (CheckEvidence::OffDiagonal { row, col, value }, Subject::Code { code, coeffs }) => {
                let rho = DenseOperator::outer(&state_from_array(code, coeffs)?);
                let reduced = rho.partial_trace(&check.lost)?;
                if reduced.entry(row, col) != *value || value.is_zero() {
                    return fail(format!("{tag}: off-diagonal entry does not recompute"));
                }
            }
            (CheckEvidence::WitnessExhausted { .. } | CheckEvidence::Precondition { .. }, _) => {}
            _ => return fail(format!("{tag}: evidence does not match the subject")),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrays::{builtin_ca_10_7_3_3, linear_orthogonal_array, parse_code};
    use crate::families::{psi_n_minus_3, psi_n_minus_4};
    use crate::scalar::{integer, rational};

    fn ones(r: usize) -> Vec<ExactScalar> {
        vec![integer(1); r]
    }

    #[test]
    fn n4_family_at_seven() {
        let combo = psi_n_minus_4(7, &integer(1), &integer(1)).unwrap();
        let cert = certify_dicke_strong(&combo, 3).unwrap();
        assert_eq!(cert.outcome, Outcome::Certified);
        assert_eq!(cert.checks.len(), 3);
        assert_eq!(cert.checks[1].lost, vec![4, 5, 6]);
        assert_eq!(cert.checks[2].lost, vec![3, 4, 5, 6]);
        assert_eq!(cert.coverage.robustness.total, BigUint::from(35u32));
        assert_eq!(cert.coverage.fragility.total, BigUint::from(35u32));
        revalidate(&cert).unwrap();
    }

    #[test]
    fn n3_family_at_the_bound() {
        let combo = psi_n_minus_3(7, &rational(3, 7), &integer(1)).unwrap();
        let cert = certify_dicke_strong(&combo, 4).unwrap();
        assert_eq!(cert.outcome, Outcome::Certified);
        revalidate(&cert).unwrap();
    }

    #[test]
    fn n4_family_refuted_below_its_claim() {
        let combo = psi_n_minus_4(7, &integer(1), &integer(1)).unwrap();
        let cert = certify_dicke_strong(&combo, 2).unwrap();
        assert_eq!(cert.outcome, Outcome::Refuted);
        assert_eq!(cert.counterexamples.len(), 1);
        assert_eq!(cert.counterexamples[0].kind, CheckKind::Fragility);
        assert_eq!(cert.checks[1].verdict, VerdictKind::Inconclusive);
        assert!(!cert.preconditions[0].holds);

        let cert = certify_dicke_strong(&psi_n_minus_4(9, &integer(1), &integer(1)).unwrap(), 4).unwrap();
        assert_eq!(cert.outcome, Outcome::Refuted);
        assert_eq!(cert.counterexamples[0].lost, vec![4, 5, 6, 7, 8]);
        assert_eq!(cert.counterexamples[0].kind, CheckKind::Fragility);
    }

    #[test]
    fn dicke_precondition_errors() {
        let combo = psi_n_minus_4(7, &integer(1), &integer(1)).unwrap();
        assert!(matches!(certify_dicke_strong(&combo, 1), Err(Error::NotKMixture { .. })));
        assert!(certify_dicke_strong(&combo, 0).is_err());
        assert!(certify_dicke_strong(&combo, 6).is_err());
        let combo = psi_n_minus_3(7, &rational(3, 7), &integer(1)).unwrap();
        assert!(matches!(certify_dicke_strong(&combo, 2), Err(Error::NotKMixture { k: 4, .. })));
        // the 3-reduction is entangled, which refutes m = 3 without the 4-reduction
        let cert = certify_dicke_strong(&combo, 3).unwrap();
        assert_eq!(cert.outcome, Outcome::Refuted);
    }

    #[test]
    fn robustness_failure_is_a_counterexample() {
        // GHZ: every reduction is a classical mixture
        let combo = DickeCombo::new(7, [(0, integer(1)), (7, integer(1))]).unwrap();
        let cert = certify_dicke_strong(&combo, 2).unwrap();
        assert_eq!(cert.outcome, Outcome::Refuted);
        assert_eq!(cert.counterexamples[0].kind, CheckKind::Robustness);
        revalidate(&cert).unwrap();
    }

    #[test]
    fn builtin_array_certified() {
        let a = builtin_ca_10_7_3_3();
        let cert = certify_code_resistant(&a, &ones(10), 2, CodeOptions::default()).unwrap();
        assert_eq!(cert.outcome, Outcome::Certified);
        assert!(!cert.claim.strong);
        assert_eq!(cert.coverage.robustness.evaluated, 21);
        assert_eq!(cert.coverage.fragility.evaluated, 35);
        for c in &cert.checks {
            match c.kind {
                CheckKind::Robustness => {
                    let CheckEvidence::Witness(w) = &c.evidence else { panic!() };
                    assert!(w.value.is_negative());
                }
                _ => assert!(matches!(c.evidence, CheckEvidence::Diagonal { .. })),
            }
        }
        revalidate(&cert).unwrap();
    }

    #[test]
    fn builtin_array_strength_gate() {
        let a = builtin_ca_10_7_3_3();
        let r = certify_code_resistant(&a, &ones(10), 3, CodeOptions::default());
        assert!(matches!(r, Err(Error::Precondition(_))));
        let relaxed = CodeOptions {
            strict: false,
            parallel: false,
        };
        let cert = certify_code_resistant(&a, &ones(10), 3, relaxed).unwrap();
        assert_ne!(cert.outcome, Outcome::Certified);
    }

    #[test]
    fn relaxed_claim_below_strength_is_refuted() {
        // losing one party of the builtin array leaves pairs that never agree
        let a = builtin_ca_10_7_3_3();
        let relaxed = CodeOptions {
            strict: false,
            parallel: true,
        };
        let cert = certify_code_resistant(&a, &ones(10), 1, relaxed).unwrap();
        assert_eq!(cert.outcome, Outcome::Refuted);
        assert!(cert.counterexamples.iter().all(|c| c.kind == CheckKind::Fragility));
        revalidate(&cert).unwrap();
    }

    #[test]
    fn orthogonal_array_certified() {
        let oa = linear_orthogonal_array(3, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2]]).unwrap();
        let cert = certify_code_resistant(&oa, &ones(9), 1, CodeOptions::default()).unwrap();
        assert_eq!(cert.outcome, Outcome::Certified);
    }

    #[test]
    fn witness_example_from_builtin_rows() {
        let a = builtin_ca_10_7_3_3();
        let v = witness_for_subset(&a, &ones(10), &[0, 1], 6).unwrap();
        let labels: Vec<(String, ExactScalar)> = v.iter().map(|(l, c)| (l.to_string(), c.clone())).collect();
        assert_eq!(
            labels,
            vec![("00001".to_string(), integer(1)), ("12210".to_string(), integer(-1))]
        );
    }

    #[test]
    fn witness_errors() {
        let a = builtin_ca_10_7_3_3();
        assert!(matches!(witness_for_subset(&a, &ones(10), &[0, 1], 1), Err(Error::NoWitness(_))));
        assert!(witness_for_subset(&a, &ones(9), &[0, 1], 6).is_err());
        let c = parse_code("0000\n1111\n", 2).unwrap();
        assert!(matches!(witness_for_subset(&c, &ones(2), &[0], 3), Err(Error::NoWitness(_))));
        // agreeing rows that share the pivot symbol
        let c = parse_code("0000\n0011\n", 2).unwrap();
        assert!(matches!(witness_for_subset(&c, &ones(2), &[0], 1), Err(Error::NoWitness(_))));
    }

    #[test]
    fn negative_coefficients_flip_the_witness() {
        let a = builtin_ca_10_7_3_3();
        let mut coeffs = ones(10);
        coeffs[1] = integer(-3);
        let v = witness_for_subset(&a, &coeffs, &[0, 1], 6).unwrap();
        assert!(v.iter().all(|(_, c)| c == &integer(1)));
        let cert = certify_code_resistant(&a, &coeffs, 2, CodeOptions::default()).unwrap();
        assert_eq!(cert.outcome, Outcome::Certified);
    }

    #[test]
    fn parallel_and_serial_agree() {
        let a = builtin_ca_10_7_3_3();
        let coeffs: Vec<ExactScalar> = (1..=10).map(|i| rational(i, 3)).collect();
        let par = certify_code_resistant(&a, &coeffs, 2, CodeOptions::default()).unwrap();
        let ser = certify_code_resistant(&a, &coeffs, 2, CodeOptions { strict: true, parallel: false }).unwrap();
        assert_eq!(par, ser);
    }

    #[test]
    fn revalidate_catches_tampering() {
        let a = builtin_ca_10_7_3_3();
        let mut cert = certify_code_resistant(&a, &ones(10), 2, CodeOptions::default()).unwrap();
        if let CheckEvidence::Witness(w) = &mut cert.checks[0].evidence {
            w.value = integer(-1);
        }
        assert!(revalidate(&cert).is_err());

        let combo = psi_n_minus_4(7, &integer(1), &integer(1)).unwrap();
        let mut cert = certify_dicke_strong(&combo, 3).unwrap();
        if let CheckEvidence::Hankel { mixture, .. } = &mut cert.checks[1].evidence {
            mixture[0] = integer(5);
        }
        assert!(revalidate(&cert).is_err());
    }
}
