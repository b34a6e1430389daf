//! Small exact symmetric matrices and the characteristic-coefficient PSD test.
//!
//! A real symmetric matrix is positive semidefinite exactly when every
//! elementary symmetric function of its eigenvalues is nonnegative, i.e. when
//! each `e_i` (the sum of all `i x i` principal minors) satisfies `e_i >= 0`.
//! The coefficients come from the Berkowitz recurrence run over integers after
//! clearing denominators, so no division or pivoting is involved.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{ExactScalar, Q};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricMatrix {
    order: usize,
    data: Vec<ExactScalar>,
}

/// Outcome of the PSD test together with the data that justifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsdReport {
    /// `e_0 = 1, e_1, ..., e_n`.
    pub coefficients: Vec<ExactScalar>,
    /// Smallest `i` with `e_i < 0`, if any.
    pub first_negative: Option<usize>,
}

impl PsdReport {
    pub fn is_psd(&self) -> bool {
        self.first_negative.is_none()
    }
}

impl SymmetricMatrix {
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let order = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {order}",
                    row.len()
                )));
            }
        }
        for i in 0..order {
            for j in (i + 1)..order {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::NotSymmetric {
                        row: i.to_string(),
                        col: j.to_string(),
                    });
                }
            }
        }
        Ok(SymmetricMatrix {
            order,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integers(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// Builds `M[i][j] = f(i + j)` (Hankel structure; symmetric by construction).
    pub fn hankel(order: usize, f: impl Fn(usize) -> ExactScalar) -> Self {
        let mut data = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                data.push(f(i + j));
            }
        }
        SymmetricMatrix { order, data }
    }

    pub fn zeros(order: usize) -> Self {
        SymmetricMatrix {
            order,
            data: vec![ExactScalar::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m.data[i * order + i] = ExactScalar::one();
        }
        m
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.data[i * self.order + j]
    }

    /// Sets `M[i][j]` and `M[j][i]` together.
    pub fn set(&mut self, i: usize, j: usize, value: ExactScalar) {
        self.data[j * self.order + i] = value.clone();
        self.data[i * self.order + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<ExactScalar>> {
        self.data.chunks(self.order.max(1)).take(self.order).map(<[_]>::to_vec).collect()
    }

    pub fn scaled(&self, factor: &ExactScalar) -> Self {
        SymmetricMatrix {
            order: self.order,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    /// Principal submatrix on the given (sorted, distinct) indices.
    pub fn principal(&self, indices: &[usize]) -> Self {
        let order = indices.len();
        let mut data = Vec::with_capacity(order * order);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j).clone());
            }
        }
        SymmetricMatrix { order, data }
    }

    pub fn quadratic_form(&self, v: &[ExactScalar]) -> Result<ExactScalar> {
        if v.len() != self.order {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against matrix of order {}",
                v.len(),
                self.order
            )));
        }
        let mut acc = ExactScalar::zero();
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if !vj.is_zero() {
                    acc += vi * self.get(i, j) * vj;
                }
            }
        }
        Ok(acc)
    }

    /// Determinant by Gaussian elimination over the rationals.
    pub fn determinant(&self) -> ExactScalar {
        let n = self.order;
        let mut a = self.data.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r * n + col].is_zero()) else {
                return ExactScalar::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= &p;
            for r in (col + 1)..n {
                if a[r * n + col].is_zero() {
                    continue;
                }
                let factor = &a[r * n + col] / &p;
                for j in col..n {
                    let delta = &factor * &a[col * n + j];
                    a[r * n + j] -= delta;
                }
            }
        }
        det
    }

    /// `e_0, ..., e_n` where `det(tI - M) = sum_i (-1)^i e_i t^(n-i)`.
    pub fn char_coefficients(&self) -> Vec<ExactScalar> {
        let n = self.order;
        let scale = self
            .data
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self
            .data
            .iter()
            .map(|x| (x * BigRational::from_integer(scale.clone())).to_integer())
            .collect();
        let poly = berkowitz(n, &ints);
        let scale_q = BigRational::from_integer(scale);
        let mut power = ExactScalar::one();
        poly.into_iter()
            .enumerate()
            .map(|(i, c)| {
                let signed = if i % 2 == 0 { c } else { -c };
                let e = BigRational::new(signed, BigInt::one()) / &power;
                power *= &scale_q;
                e
            })
            .collect()
    }

    pub fn psd_report(&self) -> PsdReport {
        let coefficients = self.char_coefficients();
        let first_negative = coefficients.iter().position(|c| c.is_negative());
        PsdReport {
            coefficients,
            first_negative,
        }
    }

    pub fn is_psd(&self) -> bool {
        self.psd_report().is_psd()
    }
}

/// Coefficients of `det(tI - A)`, highest power first, for an integer matrix
/// stored row-major.
fn berkowitz(n: usize, a: &[BigInt]) -> Vec<BigInt> {
    let at = |i: usize, j: usize| &a[i * n + j];
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        // column of the Toeplitz factor: 1, -a_rr, -R C, -R M C, ...
        let mut col = Vec::with_capacity(r + 2);
        col.push(BigInt::one());
        col.push(-at(r, r).clone());
        let mut vec: Vec<BigInt> = (0..r).map(|i| at(i, r).clone()).collect();
        for _ in 0..r {
            let dot: BigInt = (0..r).map(|j| at(r, j) * &vec[j]).sum();
            col.push(-dot);
            vec = (0..r)
                .map(|i| (0..r).map(|j| at(i, j) * &vec[j]).sum())
                .collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, p) in poly.iter().enumerate().take(i + 1) {
                *slot += &col[i - j] * p;
            }
        }
        poly = next;
    }
    poly
}

/// Plain serializable form used in certificates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatrixDoc(pub Vec<Vec<Q>>);

impl From<&SymmetricMatrix> for MatrixDoc {
    fn from(m: &SymmetricMatrix) -> Self {
        MatrixDoc(
            m.rows()
                .into_iter()
                .map(|r| r.into_iter().map(Q).collect())
                .collect(),
        )
    }
}

impl MatrixDoc {
    pub fn to_matrix(&self) -> Result<SymmetricMatrix> {
        SymmetricMatrix::from_rows(
            self.0
                .iter()
                .map(|r| r.iter().map(|q| q.0.clone()).collect())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{integer, rational};
    use proptest::prelude::*;

    /// Sum of all i x i principal minors by subset enumeration.
    fn minor_sums(m: &SymmetricMatrix) -> Vec<ExactScalar> {
        let n = m.order();
        let mut sums = vec![ExactScalar::zero(); n + 1];
        for mask in 0u32..(1 << n) {
            let idx: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            sums[idx.len()] += m.principal(&idx).determinant();
        }
        sums
    }

    fn eigenvalues(m: &SymmetricMatrix) -> Vec<f64> {
        let n = m.order();
        let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let x = m.get(i, j);
            x.numer().to_string().parse::<f64>().unwrap() / x.denom().to_string().parse::<f64>().unwrap()
        });
        dm.symmetric_eigen().eigenvalues.iter().copied().collect()
    }

    fn small_symmetric() -> impl Strategy<Value = SymmetricMatrix> {
        (1usize..=6).prop_flat_map(|n| {
            proptest::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_map(move |raw| {
                let mut m = SymmetricMatrix::zeros(n);
                for i in 0..n {
                    for j in i..n {
                        let (p, q) = raw[i * n + j];
                        m.set(i, j, rational(p, q));
                    }
                }
                m
            })
        })
    }

    /// Gram matrices are PSD; this skews samples toward the interesting side.
    fn gram() -> impl Strategy<Value = SymmetricMatrix> {
        (1usize..=5, 1usize..=4).prop_flat_map(|(n, rank)| {
            proptest::collection::vec(-4i64..=4, n * rank).prop_map(move |raw| {
                let mut m = SymmetricMatrix::zeros(n);
                for i in 0..n {
                    for j in i..n {
                        let s: i64 = (0..rank).map(|t| raw[i * rank + t] * raw[j * rank + t]).sum();
                        m.set(i, j, integer(s));
                    }
                }
                m
            })
        })
    }

    #[test]
    fn identity_is_psd() {
        assert!(SymmetricMatrix::identity(2).is_psd());
    }

    #[test]
    fn two_by_two_with_negative_determinant() {
        let m = SymmetricMatrix::from_integers(&[&[4, 6], &[6, 4]]).unwrap();
        assert_eq!(m.determinant(), integer(-20));
        let report = m.psd_report();
        assert_eq!(report.coefficients, vec![integer(1), integer(8), integer(-20)]);
        assert_eq!(report.first_negative, Some(2));
    }

    #[test]
    fn three_by_three_with_bad_corner_minor() {
        let m = SymmetricMatrix::from_integers(&[&[3, 1, 0], &[1, 0, 1], &[0, 1, 3]]).unwrap();
        assert_eq!(m.principal(&[0, 1]).determinant(), integer(-1));
        assert!(!m.is_psd());
    }

    #[test]
    fn rejects_asymmetric_and_ragged_input() {
        let asym = SymmetricMatrix::from_integers(&[&[1, 2], &[3, 1]]);
        assert!(matches!(asym, Err(Error::NotSymmetric { .. })));
        let ragged = SymmetricMatrix::from_rows(vec![vec![integer(1)], vec![integer(1), integer(2)]]);
        assert!(matches!(ragged, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn quadratic_forms() {
        let id = SymmetricMatrix::identity(2);
        assert_eq!(id.quadratic_form(&[integer(1), integer(0)]).unwrap(), integer(1));
        let swap = SymmetricMatrix::from_integers(&[&[0, 1], &[1, 0]]).unwrap();
        assert_eq!(swap.quadratic_form(&[integer(1), integer(-1)]).unwrap(), integer(-2));
        assert!(swap.quadratic_form(&[integer(1)]).is_err());
    }

    #[test]
    fn empty_matrix_is_psd() {
        let m = SymmetricMatrix::zeros(0);
        assert_eq!(m.char_coefficients(), vec![integer(1)]);
        assert!(m.is_psd());
    }

    proptest! {
        #[test]
        fn berkowitz_matches_minor_sums(m in small_symmetric()) {
            prop_assert_eq!(m.char_coefficients(), minor_sums(&m));
        }

        #[test]
        fn negative_form_implies_not_psd(m in small_symmetric(), v in proptest::collection::vec(-3i64..=3, 6)) {
            let v: Vec<ExactScalar> = v.into_iter().take(m.order()).map(integer).collect();
            if m.quadratic_form(&v).unwrap().is_negative() {
                prop_assert!(!m.is_psd());
            }
        }

        #[test]
        fn gram_matrices_are_psd(m in gram()) {
            prop_assert!(m.is_psd());
        }

        #[test]
        fn agrees_with_float_eigenvalues(m in prop_oneof![small_symmetric(), gram()]) {
            let eig = eigenvalues(&m);
            let min = eig.iter().cloned().fold(f64::INFINITY, f64::min);
            // only decisive when the smallest eigenvalue is clearly away from zero
            if min.abs() > 1e-9 {
                prop_assert_eq!(m.is_psd(), min > 0.0);
            }
        }

        #[test]
        fn positive_scaling_keeps_verdict(m in small_symmetric(), p in 1i64..50, q in 1i64..50) {
            prop_assert_eq!(m.is_psd(), m.scaled(&rational(p, q)).is_psd());
        }
    }
}
