//! Verdict engines: the Hankel criterion for Dicke mixtures, diagonality for
//! full separability, and quadratic-form PPT witnesses.

use num_traits::Signed;

use crate::dicke::{hankel, DickeMixture};
use crate::error::{Error, Result};
use crate::linalg::{PsdReport, SymmetricMatrix};
use crate::scalar::{format_rational, ExactScalar, Limits};
use crate::tensor::{BasisLabel, DenseOperator, PureVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictKind {
    Separable,
    Entangled,
    Inconclusive,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Separable => "SEPARABLE",
            VerdictKind::Entangled => "ENTANGLED",
            VerdictKind::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelSide {
    M0,
    M1,
}

impl HankelSide {
    pub fn as_str(self) -> &'static str {
        match self {
            HankelSide::M0 => "M0",
            HankelSide::M1 => "M1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelEvidence {
    pub m0: SymmetricMatrix,
    pub m1: SymmetricMatrix,
    pub m0_report: PsdReport,
    pub m1_report: PsdReport,
    /// Matrix, coefficient index and the negative coefficient value.
    pub failing: Option<(HankelSide, usize, ExactScalar)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evidence {
    Hankel(Box<HankelEvidence>),
    /// Every off-diagonal entry vanishes; `support` diagonal entries are nonzero.
    Diagonal { support: usize },
    /// A nonzero off-diagonal entry blocks the diagonal route.
    OffDiagonal {
        row: BasisLabel,
        col: BasisLabel,
        value: ExactScalar,
    },
    Witness {
        party: usize,
        vector: PureVector,
        value: ExactScalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub evidence: Evidence,
}

impl Verdict {
    /// Entanglement of a Dicke mixture (a symmetric state) is genuine
    /// multipartite entanglement: symmetric states are either fully
    /// separable or GME.
    pub fn genuinely_multipartite(&self) -> bool {
        self.kind == VerdictKind::Entangled && matches!(self.evidence, Evidence::Hankel(_))
    }
}

/// Separable iff both Hankel matrices are positive semidefinite.
pub fn dicke_separable(mix: &DickeMixture) -> Result<Verdict> {
    if let Some((index, value)) = mix.coeffs().iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(Error::NegativeCoefficient {
            index,
            value: format_rational(value),
        });
    }
    let pair = hankel(mix);
    let m0_report = pair.m0.psd_report();
    let m1_report = pair.m1.psd_report();
    let failing = m0_report
        .first_negative
        .map(|i| (HankelSide::M0, i, m0_report.coefficients[i].clone()))
        .or_else(|| {
            m1_report
                .first_negative
                .map(|i| (HankelSide::M1, i, m1_report.coefficients[i].clone()))
        });
    let kind = if failing.is_some() {
        VerdictKind::Entangled
    } else {
        VerdictKind::Separable
    };
    Ok(Verdict {
        kind,
        evidence: Evidence::Hankel(Box::new(HankelEvidence {
            m0: pair.m0,
            m1: pair.m1,
            m0_report,
            m1_report,
            failing,
        })),
    })
}

/// A diagonal density matrix is a mixture of product basis states. Anything
/// else is left undecided.
pub fn diagonal_fully_separable(rho: &DenseOperator) -> Verdict {
    match rho.first_off_diagonal() {
        None => Verdict {
            kind: VerdictKind::Separable,
            evidence: Evidence::Diagonal { support: rho.nnz() },
        },
        Some((x, y, v)) => Verdict {
            kind: VerdictKind::Inconclusive,
            evidence: Evidence::OffDiagonal {
                row: x.clone(),
                col: y.clone(),
                value: v.clone(),
            },
        },
    }
}

/// Evaluates `v^T rho^{T_party} v`; a negative value proves a negative
/// eigenvalue of the partial transpose and hence entanglement.
pub fn ppt_witness(rho: &DenseOperator, party: usize, v: &PureVector) -> Result<Verdict> {
    let value = rho.partial_transpose(party)?.quadratic_form(v)?;
    let kind = if value.is_negative() {
        VerdictKind::Entangled
    } else {
        VerdictKind::Inconclusive
    };
    Ok(Verdict {
        kind,
        evidence: Evidence::Witness {
            party,
            vector: v.clone(),
            value,
        },
    })
}

pub const PPT_MAX_PARTIES: usize = 6;

/// True iff every bipartite partial transpose is PSD (exact, dense).
pub fn ppt_all_bipartitions(rho: &DenseOperator, limits: &Limits) -> Result<bool> {
    let n = rho.shape().n_parties();
    if n > PPT_MAX_PARTIES {
        return Err(Error::Guard {
            what: "bipartition PPT scan (parties)",
            needed: n.to_string(),
            limit: PPT_MAX_PARTIES,
        });
    }
    if !rho.is_psd(limits)? {
        return Ok(false);
    }
    // each bipartition once: the side without the last party gets transposed
    for mask in 1u32..(1 << (n - 1)) {
        let side: Vec<usize> = (0..n - 1).filter(|p| mask & (1 << p) != 0).collect();
        if !rho.partial_transpose_set(&side)?.is_psd(limits)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::{reduce_combo, DickeCombo};
    use crate::scalar::{integer, rational};
    use crate::tensor::SystemShape;

    fn ket(terms: &[(&str, i64)], parties: usize, dim: usize) -> PureVector {
        let shape = SystemShape::new(parties, dim).unwrap();
        PureVector::new(
            shape,
            terms
                .iter()
                .map(|(s, a)| (BasisLabel::parse(s, shape).unwrap(), integer(*a))),
        )
        .unwrap()
    }

    fn psi_n4(n: usize) -> DickeCombo {
        DickeCombo::new(n, [(1, integer(1)), (n - 1, integer(1))]).unwrap()
    }

    #[test]
    fn hankel_verdicts_for_psi_n4() {
        let sep = dicke_separable(&reduce_combo(&psi_n4(7), 3).unwrap()).unwrap();
        assert_eq!(sep.kind, VerdictKind::Separable);
        let ent = dicke_separable(&reduce_combo(&psi_n4(7), 4).unwrap()).unwrap();
        assert_eq!(ent.kind, VerdictKind::Entangled);
        assert!(ent.genuinely_multipartite());
        let Evidence::Hankel(h) = &ent.evidence else { panic!() };
        let (side, idx, value) = h.failing.clone().unwrap();
        assert_eq!(side, HankelSide::M0);
        assert!(value.is_negative());
        assert_eq!(h.m0_report.coefficients[idx], value);
    }

    #[test]
    fn vacuum_mixture_is_separable() {
        let mix = DickeMixture::new(vec![integer(1), integer(0), integer(0)]).unwrap();
        assert_eq!(dicke_separable(&mix).unwrap().kind, VerdictKind::Separable);
    }

    #[test]
    fn negative_mixture_rejected() {
        let mix = DickeMixture::new(vec![integer(1), integer(-1)]).unwrap();
        assert!(matches!(dicke_separable(&mix), Err(Error::NegativeCoefficient { .. })));
    }

    #[test]
    fn diagonal_route() {
        let ghz = DenseOperator::outer(&ket(&[("000", 1), ("111", 1)], 3, 2));
        assert_eq!(diagonal_fully_separable(&ghz).kind, VerdictKind::Inconclusive);
        let mixed = ghz.partial_trace(&[0]).unwrap();
        let v = diagonal_fully_separable(&mixed);
        assert_eq!(v.kind, VerdictKind::Separable);
        assert_eq!(v.evidence, Evidence::Diagonal { support: 2 });
    }

    #[test]
    fn product_state_passes_every_witness() {
        let prod = DenseOperator::outer(&ket(&[("00", 1), ("01", 1), ("10", 1), ("11", 1)], 2, 2));
        for v in [
            ket(&[("01", 1), ("10", -1)], 2, 2),
            ket(&[("00", 1), ("11", -1)], 2, 2),
            ket(&[("00", 2), ("11", 1), ("10", -3)], 2, 2),
        ] {
            let verdict = ppt_witness(&prod, 1, &v).unwrap();
            assert_eq!(verdict.kind, VerdictKind::Inconclusive);
        }
    }

    #[test]
    fn singlet_witness_and_orthogonal_vector() {
        let singlet = DenseOperator::outer(&ket(&[("01", 1), ("10", -1)], 2, 2));
        let v = ket(&[("00", 1), ("11", 1)], 2, 2);
        let verdict = ppt_witness(&singlet, 1, &v).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Entangled);
        let Evidence::Witness { value, .. } = verdict.evidence else { panic!() };
        assert_eq!(value, integer(-2));

        // off the support of the transposed operator
        let ghz = DenseOperator::outer(&ket(&[("000", 1), ("111", 1)], 3, 2));
        let v = ket(&[("010", 1)], 3, 2);
        let verdict = ppt_witness(&ghz, 2, &v).unwrap();
        assert_eq!(verdict.kind, VerdictKind::Inconclusive);
        assert_eq!(verdict.evidence, Evidence::Witness { party: 2, vector: v, value: integer(0) });
    }

    #[test]
    fn witness_dimension_mismatch() {
        let rho = DenseOperator::outer(&ket(&[("01", 1)], 2, 2));
        let v = ket(&[("010", 1)], 3, 2);
        assert!(ppt_witness(&rho, 0, &v).is_err());
    }

    #[test]
    fn all_bipartitions() {
        let limits = Limits::default();
        let diag = DenseOperator::outer(&ket(&[("010", 1)], 3, 2));
        assert!(ppt_all_bipartitions(&diag, &limits).unwrap());
        let singlet = DenseOperator::outer(&ket(&[("01", 1), ("10", -1)], 2, 2));
        assert!(!ppt_all_bipartitions(&singlet, &limits).unwrap());
        let seven = DenseOperator::outer(&ket(&[("0000000", 1)], 7, 2));
        assert!(matches!(ppt_all_bipartitions(&seven, &limits), Err(Error::Guard { .. })));
    }

    #[test]
    fn reconstructed_separable_mixture_is_ppt() {
        let mix = reduce_combo(&psi_n4(7), 3).unwrap();
        let op = mix.to_operator().unwrap();
        assert!(ppt_all_bipartitions(&op, &Limits::default()).unwrap());
    }

    #[test]
    fn verdicts_ignore_positive_scaling() {
        let mix = reduce_combo(&psi_n4(8), 4).unwrap();
        let base = dicke_separable(&mix).unwrap().kind;
        for (p, q) in [(1, 9), (7, 3), (100, 1)] {
            assert_eq!(dicke_separable(&mix.scaled(&rational(p, q))).unwrap().kind, base);
        }
    }
}
