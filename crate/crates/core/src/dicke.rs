//! Dicke-basis algebra on qubits.
//!
//! Combinations are stored by squared magnitudes `b_i = |c_i|^2`; every
//! downstream criterion depends on those alone once the gap condition holds.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::SymmetricMatrix;
use crate::scalar::{binomial, binomial_q, format_rational, ExactScalar};
use crate::tensor::{BasisLabel, DenseOperator, PureVector, SystemShape};

/// Unnormalized `|D^n_i>`: every weight-`i` bitstring with amplitude 1, plus
/// its squared norm `C(n, i)`.
pub fn dicke_expand(n: usize, i: usize) -> Result<(PureVector, BigUint)> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    let shape = SystemShape::qubits(n)?;
    let mut terms = Vec::new();
    let mut bits = vec![0u8; n];
    weight_strings(&mut bits, 0, i, &mut |b| {
        terms.push((BasisLabel::new(b.to_vec(), shape).expect("qubit label"), BigRational::from_integer(1.into())));
    });
    Ok((PureVector::new(shape, terms)?, binomial(n, i)))
}

fn weight_strings(bits: &mut [u8], pos: usize, ones: usize, emit: &mut impl FnMut(&[u8])) {
    let remaining = bits.len() - pos;
    if ones > remaining {
        return;
    }
    if pos == bits.len() {
        emit(bits);
        return;
    }
    if ones > 0 {
        bits[pos] = 1;
        weight_strings(bits, pos + 1, ones - 1, emit);
    }
    bits[pos] = 0;
    weight_strings(bits, pos + 1, ones, emit);
}

/// Normalized projector `|D^n_i><D^n_i|` in the computational basis.
pub fn dicke_projector(n: usize, i: usize) -> Result<DenseOperator> {
    let (psi, norm2) = dicke_expand(n, i)?;
    let inv = BigRational::new(BigInt::from(1), BigInt::from(norm2));
    Ok(DenseOperator::outer(&psi).scaled(&inv))
}

/// Diagonal-in-Dicke-basis state `sum_s b_s |D^k_s><D^k_s|` on `k` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DickeMixture {
    coeffs: Vec<ExactScalar>,
}

impl DickeMixture {
    /// `coeffs[s]` is the weight on `|D^k_s>`, so `k = coeffs.len() - 1`.
    pub fn new(coeffs: Vec<ExactScalar>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidCombo("a mixture needs k >= 1".into()));
        }
        Ok(DickeMixture { coeffs })
    }

    pub fn k(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn trace(&self) -> ExactScalar {
        self.coeffs.iter().sum()
    }

    pub fn scaled(&self, factor: &ExactScalar) -> DickeMixture {
        DickeMixture {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    fn add_scaled(&mut self, other: &DickeMixture, factor: &ExactScalar) {
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b * factor;
        }
    }

    /// The same state written in the computational basis of `k` qubits.
    pub fn to_operator(&self) -> Result<DenseOperator> {
        let k = self.k();
        let mut acc: Option<DenseOperator> = None;
        for (s, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let term = dicke_projector(k, s)?.scaled(b);
            acc = Some(match acc {
                Some(a) => a.add(&term)?,
                None => term,
            });
        }
        match acc {
            Some(op) => Ok(op),
            None => DenseOperator::from_entries(SystemShape::qubits(k)?, []),
        }
    }
}

/// `Tr_{n-k}(|D^n_i><D^n_i|)` as a mixture on `k` qubits:
/// `coeffs[s] = C(k,s) C(n-k, i-s) / C(n,i)`.
pub fn reduce_dicke(n: usize, i: usize, k: usize) -> Result<DickeMixture> {
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, max: n });
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidCombo(format!("reduction to {k} of {n} qubits")));
    }
    let total = binomial_q(n, i);
    let coeffs = (0..=k)
        .map(|s| {
            if s > i || i - s > n - k {
                ExactScalar::zero()
            } else {
                binomial_q(k, s) * binomial_q(n - k, i - s) / &total
            }
        })
        .collect();
    DickeMixture::new(coeffs)
}

/// `sum_i c_i |D^N_i>` recorded through `b_i = |c_i|^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DickeCombo {
    n_qubits: usize,
    weights: BTreeMap<usize, ExactScalar>,
}

impl DickeCombo {
    /// Zero weights are dropped; at least two must remain.
    pub fn new(n_qubits: usize, weights: impl IntoIterator<Item = (usize, ExactScalar)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, b) in weights {
            if i > n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    max: n_qubits,
                });
            }
            if b.is_negative() {
                return Err(Error::NegativeCoefficient {
                    index: i,
                    value: format_rational(&b),
                });
            }
            if map.insert(i, b).is_some() {
                return Err(Error::InvalidCombo(format!("index {i} given twice")));
            }
        }
        map.retain(|_, b: &mut ExactScalar| !b.is_zero());
        if map.len() < 2 {
            return Err(Error::InvalidCombo(
                "at least two nonzero Dicke weights are required".into(),
            ));
        }
        Ok(DickeCombo {
            n_qubits,
            weights: map,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn weights(&self) -> &BTreeMap<usize, ExactScalar> {
        &self.weights
    }

    pub fn support(&self) -> Vec<usize> {
        self.weights.keys().copied().collect()
    }

    pub fn scaled(&self, factor: &ExactScalar) -> DickeCombo {
        DickeCombo {
            n_qubits: self.n_qubits,
            weights: self.weights.iter().map(|(&i, b)| (i, b * factor)).collect(),
        }
    }

    /// Closest pair of support indices, `(i, j, j - i)`.
    pub fn tightest_gap(&self) -> (usize, usize, usize) {
        let s = self.support();
        s.windows(2)
            .map(|w| (w[0], w[1], w[1] - w[0]))
            .min_by_key(|&(_, _, g)| g)
            .expect("at least two weights")
    }

    /// A state vector with amplitudes `sqrt(b_i)` is irrational in general;
    /// this expands `sum_i t_i |D^N_i>` for caller-chosen rational `t_i`
    /// (the cross-term structure does not depend on the values).
    pub fn expand_with(&self, amplitudes: &BTreeMap<usize, ExactScalar>) -> Result<PureVector> {
        let shape = SystemShape::qubits(self.n_qubits)?;
        let mut terms = Vec::new();
        for (&i, t) in amplitudes {
            let (psi, _) = dicke_expand(self.n_qubits, i)?;
            terms.extend(psi.iter().map(|(l, a)| (l.clone(), a * t)));
        }
        PureVector::new(shape, terms)
    }
}

/// Gap condition: every two distinct support indices differ by more than `k`.
pub fn is_k_mixture(combo: &DickeCombo, k: usize) -> bool {
    combo.tightest_gap().2 > k
}

/// `Tr_{N-k}` of the combination; valid only when cross terms vanish.
pub fn reduce_combo(combo: &DickeCombo, k: usize) -> Result<DickeMixture> {
    let (i, j, gap) = combo.tightest_gap();
    if gap <= k {
        return Err(Error::NotKMixture { k, i, j, gap });
    }
    let mut acc = DickeMixture::new(vec![ExactScalar::zero(); k + 1])?;
    for (&idx, b) in combo.weights() {
        acc.add_scaled(&reduce_dicke(combo.n_qubits, idx, k)?, b);
    }
    Ok(acc)
}

/// The two Hankel matrices of a Dicke mixture.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HankelPair {
    pub m0: SymmetricMatrix,
    pub m1: SymmetricMatrix,
}

/// `a_i = b_i / C(k,i)`; `M0[i][j] = a_{i+j}` of order `floor(k/2)+1`,
/// `M1[i][j] = a_{i+j+1}` of order `floor((k+1)/2)`.
pub fn hankel(mix: &DickeMixture) -> HankelPair {
    let k = mix.k();
    let a: Vec<ExactScalar> = mix
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, b)| b / binomial_q(k, i))
        .collect();
    HankelPair {
        m0: SymmetricMatrix::hankel(k / 2 + 1, |s| a[s].clone()),
        m1: SymmetricMatrix::hankel(k.div_ceil(2), |s| a[s + 1].clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};
    use num_traits::One;

    fn combo(n: usize, w: &[(usize, i64)]) -> DickeCombo {
        DickeCombo::new(n, w.iter().map(|&(i, b)| (i, integer(b)))).unwrap()
    }

    #[test]
    fn expansions() {
        let (v, norm) = dicke_expand(3, 0).unwrap();
        assert_eq!(v.support_size(), 1);
        assert_eq!(norm, BigUint::one());
        let (v, norm) = dicke_expand(3, 1).unwrap();
        let labels: Vec<String> = v.iter().map(|(l, _)| l.to_string()).collect();
        assert_eq!(labels, vec!["001", "010", "100"]);
        assert_eq!(norm, BigUint::from(3u32));
        assert_eq!(dicke_expand(4, 2).unwrap().0.support_size(), 6);
        assert!(dicke_expand(3, 4).is_err());
    }

    #[test]
    fn reduction_coefficients() {
        assert_eq!(
            reduce_dicke(3, 1, 2).unwrap().coeffs(),
            &[rational(1, 3), rational(2, 3), integer(0)]
        );
        assert_eq!(
            reduce_dicke(9, 0, 4).unwrap().coeffs(),
            &[integer(1), integer(0), integer(0), integer(0), integer(0)]
        );
        assert_eq!(
            reduce_dicke(7, 4, 3).unwrap().coeffs(),
            &[rational(1, 35), rational(12, 35), rational(18, 35), rational(4, 35)]
        );
        assert!(reduce_dicke(7, 8, 3).is_err());
        assert!(reduce_dicke(7, 2, 7).is_err());
        assert!(reduce_dicke(7, 2, 0).is_err());
    }

    #[test]
    fn gap_condition() {
        for n in 7..12 {
            assert!(is_k_mixture(&combo(n, &[(0, 1), (n - 3, 1)]), 3));
            assert!(is_k_mixture(&combo(n, &[(1, 1), (n - 1, 1)]), 4));
        }
        assert!(!is_k_mixture(&combo(12, &[(1, 1), (7, 1), (12, 1)]), 5));
        assert!(!is_k_mixture(&combo(6, &[(0, 1), (3, 1)]), 3));
    }

    #[test]
    fn combo_validation() {
        assert!(DickeCombo::new(5, [(1, integer(1))]).is_err());
        assert!(DickeCombo::new(5, [(1, integer(1)), (4, integer(0))]).is_err());
        assert!(DickeCombo::new(5, [(1, integer(1)), (6, integer(1))]).is_err());
        assert!(matches!(
            DickeCombo::new(5, [(1, integer(1)), (4, integer(-1))]),
            Err(Error::NegativeCoefficient { .. })
        ));
    }

    #[test]
    fn psi_n4_three_reduction_at_seven() {
        let mix = reduce_combo(&combo(7, &[(1, 1), (6, 1)]), 3).unwrap();
        assert_eq!(
            mix.coeffs(),
            &[rational(4, 7), rational(3, 7), rational(3, 7), rational(4, 7)]
        );
        assert_eq!(mix.trace(), integer(2));
    }

    #[test]
    fn single_support_reduction_is_linear() {
        let c = combo(9, &[(0, 5), (6, 2)]);
        let mix = reduce_combo(&c, 2).unwrap();
        let mut expected = reduce_dicke(9, 0, 2).unwrap().scaled(&integer(5));
        expected.add_scaled(&reduce_dicke(9, 6, 2).unwrap(), &integer(2));
        assert_eq!(mix, expected);
    }

    #[test]
    fn psi_n3_two_reduction_matches_closed_form() {
        // (a^2 + (N-2) b^2 / C(N,3), 2 C(N-2,2) b^2 / C(N,3), C(N-2,3) b^2 / C(N,3))
        for n in 7..=12usize {
            let mix = reduce_combo(&combo(n, &[(0, 1), (n - 3, 1)]), 2).unwrap();
            let c = binomial_q(n, 3);
            assert_eq!(mix.coeffs()[0], integer(1) + integer(n as i64 - 2) / &c);
            assert_eq!(mix.coeffs()[1], integer(2) * binomial_q(n - 2, 2) / &c);
            assert_eq!(mix.coeffs()[2], binomial_q(n - 2, 3) / &c);
        }
    }

    #[test]
    fn reduction_rejects_surviving_cross_terms() {
        let err = reduce_combo(&combo(7, &[(1, 1), (6, 1)]), 5).unwrap_err();
        assert_eq!(err, Error::NotKMixture { k: 5, i: 1, j: 6, gap: 5 });
    }

    #[test]
    fn hankel_shapes_and_examples() {
        let m3 = hankel(&reduce_combo(&combo(7, &[(1, 1), (6, 1)]), 3).unwrap());
        // a = (4/7, 1/7, 1/7, 4/7)
        let f = rational(1, 7);
        assert_eq!(m3.m0, SymmetricMatrix::from_integers(&[&[4, 1], &[1, 1]]).unwrap().scaled(&f));
        assert_eq!(m3.m1, SymmetricMatrix::from_integers(&[&[1, 1], &[1, 4]]).unwrap().scaled(&f));

        let m4 = hankel(&reduce_combo(&combo(7, &[(1, 1), (6, 1)]), 4).unwrap());
        assert_eq!(m4.m0.order(), 3);
        assert_eq!(m4.m1.order(), 2);
        assert_eq!(
            m4.m0,
            SymmetricMatrix::from_integers(&[&[3, 1, 0], &[1, 0, 1], &[0, 1, 3]])
                .unwrap()
                .scaled(&f)
        );
        assert_eq!(m4.m1, SymmetricMatrix::identity(2).scaled(&f));

        let vac = hankel(&DickeMixture::new(vec![integer(1), integer(0), integer(0)]).unwrap());
        assert_eq!(vac.m0.order(), 2);
        assert_eq!(vac.m1.order(), 1);
        assert!(vac.m0.is_psd() && vac.m1.is_psd());
        assert_eq!(*vac.m1.get(0, 0), integer(0));
    }

    #[test]
    fn hankel_of_k_one() {
        let h = hankel(&DickeMixture::new(vec![integer(1), integer(2)]).unwrap());
        assert_eq!(h.m0.order(), 1);
        assert_eq!(h.m1.order(), 1);
        assert_eq!(*h.m1.get(0, 0), integer(2));
    }

    #[test]
    fn m1_scalar_of_psi_n3_two_reduction() {
        for n in 7..=12i64 {
            let c = combo(n as usize, &[(0, 1), (n as usize - 3, 1)]);
            let h = hankel(&reduce_combo(&c, 2).unwrap());
            assert_eq!(*h.m1.get(0, 0), rational(3 * (n - 3), n * (n - 1)));
        }
    }

    #[test]
    fn mixture_reconstruction_has_right_trace() {
        let mix = reduce_dicke(6, 3, 3).unwrap();
        let op = mix.to_operator().unwrap();
        assert_eq!(op.trace(), integer(1));
        assert_eq!(op.shape().n_parties(), 3);
    }
}
