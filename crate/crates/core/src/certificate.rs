//! JSON form of certificates and byte-exact replay.
//!
//! Party and row indices in documents are 1-based; rationals are `"num/den"`
//! strings; checks appear in lexicographic order of their lost subsets,
//! robustness before fragility.

use serde::{Deserialize, Serialize};

use crate::arrays::parse_code;
use crate::certifier::{
    certify_code_resistant, certify_dicke_strong, revalidate, Certificate, Check, CheckEvidence,
    CodeOptions, Outcome, Subject,
};
use crate::dicke::DickeCombo;
use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec};
use crate::linalg::MatrixDoc;
use crate::scalar::Q;
use crate::separability::VerdictKind;

pub const FORMAT_VERSION: &str = concat!("resist ", env!("CARGO_PKG_VERSION"), " certificate/1");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub version: String,
    pub subject: SubjectDoc,
    pub claim: ClaimDoc,
    pub outcome: String,
    pub order: String,
    pub coverage: CoverageDoc,
    pub preconditions: Vec<PreconditionDoc>,
    pub counterexamples: Vec<CounterexampleDoc>,
    pub checks: Vec<CheckDoc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum SubjectDoc {
    DickeCombo {
        n_qubits: usize,
        family: Option<FamilyDoc>,
        weights: Vec<WeightDoc>,
    },
    Code {
        q: usize,
        n: usize,
        r: usize,
        sha256: String,
        rows: Vec<String>,
        coefficients: Vec<Q>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub name: String,
    pub a2: Option<Q>,
    pub b2: Q,
    pub c2: Option<Q>,
    pub margin: Option<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDoc {
    pub index: usize,
    pub weight: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimDoc {
    pub m: usize,
    pub strong: bool,
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageDoc {
    pub robustness: SubsetCountDoc,
    pub fragility: SubsetCountDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetCountDoc {
    pub subset_size: usize,
    /// Decimal string; binomials overflow machine integers for large `N`.
    pub total: String,
    pub evaluated: usize,
    pub by_symmetry: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreconditionDoc {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleDoc {
    pub kind: String,
    pub lost: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDoc {
    pub lost: Vec<usize>,
    pub kind: String,
    pub verdict: String,
    pub evidence: EvidenceDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailingDoc {
    pub matrix: String,
    pub index: usize,
    pub value: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub label: String,
    pub amplitude: Q,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum EvidenceDoc {
    SupportPattern {
        nonzero: Vec<usize>,
        intervening_zero: Option<usize>,
    },
    Hankel {
        mixture: Vec<Q>,
        m0: MatrixDoc,
        m1: MatrixDoc,
        m0_coefficients: Vec<Q>,
        m1_coefficients: Vec<Q>,
        failing: Option<FailingDoc>,
    },
    Diagonal {
        support: usize,
    },
    OffDiagonal {
        row: String,
        col: String,
        value: Q,
    },
    PptWitness {
        rows: [usize; 2],
        retained: Vec<usize>,
        transposed_party: usize,
        vector: Vec<TermDoc>,
        value: Q,
        attempts: usize,
    },
    WitnessExhausted {
        attempts: usize,
    },
    Precondition {
        reason: String,
    },
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn qs<'a>(v: impl IntoIterator<Item = &'a crate::scalar::ExactScalar>) -> Vec<Q> {
    v.into_iter().map(Q::from).collect()
}

fn evidence_doc(e: &CheckEvidence) -> EvidenceDoc {
    match e {
        CheckEvidence::SupportPattern {
            nonzero,
            intervening_zero,
        } => EvidenceDoc::SupportPattern {
            nonzero: nonzero.clone(),
            intervening_zero: *intervening_zero,
        },
        CheckEvidence::Hankel { mixture, hankel: h } => EvidenceDoc::Hankel {
            mixture: qs(mixture),
            m0: MatrixDoc::from(&h.m0),
            m1: MatrixDoc::from(&h.m1),
            m0_coefficients: qs(&h.m0_report.coefficients),
            m1_coefficients: qs(&h.m1_report.coefficients),
            failing: h.failing.as_ref().map(|(side, index, value)| FailingDoc {
                matrix: side.as_str().to_string(),
                index: *index,
                value: value.into(),
            }),
        },
        CheckEvidence::Diagonal { support } => EvidenceDoc::Diagonal { support: *support },
        CheckEvidence::OffDiagonal { row, col, value } => EvidenceDoc::OffDiagonal {
            row: row.to_string(),
            col: col.to_string(),
            value: value.into(),
        },
        CheckEvidence::Witness(w) => EvidenceDoc::PptWitness {
            rows: [w.rows.0 + 1, w.rows.1 + 1],
            retained: one_based(&w.retained),
            transposed_party: w.pivot + 1,
            vector: w
                .vector
                .iter()
                .map(|(l, a)| TermDoc {
                    label: l.to_string(),
                    amplitude: a.into(),
                })
                .collect(),
            value: (&w.value).into(),
            attempts: w.attempts,
        },
        CheckEvidence::WitnessExhausted { attempts } => EvidenceDoc::WitnessExhausted { attempts: *attempts },
        CheckEvidence::Precondition { reason } => EvidenceDoc::Precondition { reason: reason.clone() },
    }
}

fn check_doc(c: &Check) -> CheckDoc {
    CheckDoc {
        lost: one_based(&c.lost),
        kind: c.kind.as_str().to_string(),
        verdict: c.verdict.as_str().to_string(),
        evidence: evidence_doc(&c.evidence),
    }
}

fn family_doc(spec: &FamilySpec) -> FamilyDoc {
    FamilyDoc {
        name: spec.family.name().to_string(),
        a2: spec.a2.as_ref().map(Q::from),
        b2: (&spec.b2).into(),
        c2: spec.c2.as_ref().map(Q::from),
        margin: spec.margin.as_ref().map(Q::from),
    }
}

pub fn to_doc(cert: &Certificate) -> CertificateDoc {
    let subject = match &cert.subject {
        Subject::Dicke { combo, family } => SubjectDoc::DickeCombo {
            n_qubits: combo.n_qubits(),
            family: family.as_ref().map(family_doc),
            weights: combo
                .weights()
                .iter()
                .map(|(&index, w)| WeightDoc {
                    index,
                    weight: w.into(),
                })
                .collect(),
        },
        Subject::Code { code, coeffs } => SubjectDoc::Code {
            q: code.q(),
            n: code.n(),
            r: code.r(),
            sha256: code.digest(),
            rows: code.to_text().lines().map(str::to_string).collect(),
            coefficients: qs(coeffs),
        },
    };
    let m = cert.claim.m;
    CertificateDoc {
        version: FORMAT_VERSION.to_string(),
        subject,
        claim: ClaimDoc {
            m,
            strong: cert.claim.strong,
            strict: cert.claim.strict,
        },
        outcome: cert.outcome.as_str().to_string(),
        order: "lexicographic".to_string(),
        coverage: CoverageDoc {
            robustness: SubsetCountDoc {
                subset_size: m,
                total: cert.coverage.robustness.total.to_string(),
                evaluated: cert.coverage.robustness.evaluated,
                by_symmetry: cert.coverage.robustness.by_symmetry,
            },
            fragility: SubsetCountDoc {
                subset_size: m + 1,
                total: cert.coverage.fragility.total.to_string(),
                evaluated: cert.coverage.fragility.evaluated,
                by_symmetry: cert.coverage.fragility.by_symmetry,
            },
        },
        preconditions: cert
            .preconditions
            .iter()
            .map(|p| PreconditionDoc {
                name: p.name.clone(),
                holds: p.holds,
                detail: p.detail.clone(),
            })
            .collect(),
        counterexamples: cert
            .counterexamples
            .iter()
            .map(|c| CounterexampleDoc {
                kind: c.kind.as_str().to_string(),
                lost: one_based(&c.lost),
            })
            .collect(),
        checks: cert.checks.iter().map(check_doc).collect(),
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn emit_certificate(cert: &Certificate) -> String {
    let mut text = serde_json::to_string_pretty(&to_doc(cert)).expect("documents always serialize");
    text.push('\n');
    text
}

pub fn parse_certificate(text: &str) -> Result<CertificateDoc> {
    serde_json::from_str(text).map_err(|e| Error::Certificate(format!("unreadable certificate: {e}")))
}

fn family_from_doc(n: usize, doc: &FamilyDoc) -> Result<FamilySpec> {
    Ok(FamilySpec {
        family: doc.name.parse::<Family>()?,
        n,
        a2: doc.a2.as_ref().map(|q| q.0.clone()),
        b2: doc.b2.0.clone(),
        c2: doc.c2.as_ref().map(|q| q.0.clone()),
        margin: doc.margin.as_ref().map(|q| q.0.clone()),
    })
}

/// Reruns the certification a document describes.
pub fn rerun(doc: &CertificateDoc) -> Result<Certificate> {
    match &doc.subject {
        SubjectDoc::DickeCombo {
            n_qubits,
            family,
            weights,
        } => {
            let combo = DickeCombo::new(*n_qubits, weights.iter().map(|w| (w.index, w.weight.0.clone())))?;
            let family = family.as_ref().map(|f| family_from_doc(*n_qubits, f)).transpose()?;
            if let Some(spec) = &family {
                if spec.build()? != combo {
                    return Err(Error::Certificate("family parameters do not produce the recorded weights".into()));
                }
            }
            let mut cert = certify_dicke_strong(&combo, doc.claim.m)?;
            cert.subject = Subject::Dicke { combo, family };
            Ok(cert)
        }
        SubjectDoc::Code {
            q,
            sha256,
            rows,
            coefficients,
            ..
        } => {
            let code = parse_code(&rows.join("\n"), *q)?;
            if &code.digest() != sha256 {
                return Err(Error::Certificate("code digest does not match its rows".into()));
            }
            let coeffs: Vec<_> = coefficients.iter().map(|c| c.0.clone()).collect();
            certify_code_resistant(
                &code,
                &coeffs,
                doc.claim.m,
                CodeOptions {
                    strict: doc.claim.strict,
                    parallel: true,
                },
            )
        }
    }
}

/// Parses, reruns, re-emits and compares byte for byte, then re-validates
/// every decided piece of evidence against the subject.
pub fn replay(text: &str) -> Result<Certificate> {
    let doc = parse_certificate(text)?;
    let cert = rerun(&doc)?;
    let again = emit_certificate(&cert);
    if again != text {
        let at = again
            .bytes()
            .zip(text.bytes())
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| again.len().min(text.len()));
        let line = text[..at.min(text.len())].matches('\n').count() + 1;
        return Err(Error::Certificate(format!(
            "recomputed certificate differs from the document at line {line}"
        )));
    }
    revalidate(&cert)?;
    Ok(cert)
}

/// One-line human summary.
pub fn summary(cert: &Certificate) -> String {
    let what = match &cert.subject {
        Subject::Dicke { combo, family } => match family {
            Some(f) => format!("{} family, N={}", f.family.name(), combo.n_qubits()),
            None => format!("Dicke combination, N={}", combo.n_qubits()),
        },
        Subject::Code { code, .. } => format!("code state r={} N={} q={}", code.r(), code.n(), code.q()),
    };
    let strong = if cert.claim.strong { "strong " } else { "" };
    let passed = cert.checks.iter().filter(|c| c.passed()).count();
    let mut line = format!(
        "{}: {what}, {strong}{}-resistant ({passed}/{} checks passed)",
        cert.outcome.as_str(),
        cert.claim.m,
        cert.checks.len()
    );
    if let Some(c) = cert.counterexamples.first() {
        line.push_str(&format!(
            "; counterexample: {} lost {:?}",
            c.kind.as_str(),
            one_based(&c.lost)
        ));
    }
    if cert.outcome == Outcome::Inconclusive {
        let open: Vec<_> = cert
            .checks
            .iter()
            .filter(|c| c.verdict == VerdictKind::Inconclusive)
            .map(|c| format!("{} {:?}", c.kind.as_str(), one_based(&c.lost)))
            .collect();
        line.push_str(&format!("; undecided: {}", open.join(", ")));
    }
    line
}
