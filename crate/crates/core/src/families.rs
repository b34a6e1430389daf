//! The three Dicke-superposition families and their coefficient rules.
//!
//! * `N-3`: `a|D_0> + b|D_{N-3}>`, `N >= 7`, gated on
//!   `a^2 >= 6(2N-5) / (N(N-1)(N-4)) b^2`.
//! * `N-4`: `a|D_1> + b|D_{N-1}>`, `N >= 7`, any nonzero `a, b`.
//! * `N-5`: `a|D_1> + b|D_7> + c|D_N>`, `N >= 13`, with `a^2` tied to `b^2`
//!   so that `det M1` of the 4-qubit reduction vanishes and `c^2` above the
//!   root of `det M0`.
//!
//! All coefficients are squared magnitudes.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};

use crate::dicke::{hankel, reduce_combo, DickeCombo};
use crate::error::{Error, Result};
use crate::scalar::{binomial_q, format_rational, integer, rational, ExactScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    NMinus3,
    NMinus4,
    NMinus5,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::NMinus3 => "n-3",
            Family::NMinus4 => "n-4",
            Family::NMinus5 => "n-5",
        }
    }

    /// `N - m`: the number of parties kept by the robustness reduction.
    pub fn kept(self) -> usize {
        match self {
            Family::NMinus3 => 3,
            Family::NMinus4 => 4,
            Family::NMinus5 => 5,
        }
    }

    pub fn min_parties(self) -> usize {
        match self {
            Family::NMinus3 | Family::NMinus4 => 7,
            Family::NMinus5 => 13,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "n-3" | "n3" => Ok(Family::NMinus3),
            "n-4" | "n4" => Ok(Family::NMinus4),
            "n-5" | "n5" => Ok(Family::NMinus5),
            other => Err(Error::Family(format!("unknown family `{other}`"))),
        }
    }
}

fn check_parties(family: Family, n: usize) -> Result<()> {
    if n < family.min_parties() {
        return Err(Error::Family(format!(
            "family {family} needs N >= {}, got {n}",
            family.min_parties()
        )));
    }
    Ok(())
}

fn check_positive(name: &str, x: &ExactScalar) -> Result<()> {
    if !x.is_positive() {
        return Err(Error::Family(format!(
            "{name} must be positive, got {}",
            format_rational(x)
        )));
    }
    Ok(())
}

/// `6(2N-5) / (N(N-1)(N-4))`.
pub fn threshold_ratio_n3(n: usize) -> Result<ExactScalar> {
    check_parties(Family::NMinus3, n)?;
    let n = n as i64;
    Ok(rational(6 * (2 * n - 5), n * (n - 1) * (n - 4)))
}

/// Value of `a^2 / b^2` at which `det M0` of the 2-qubit reduction of the
/// `N-3` family vanishes. Diagnostic only; construction is gated on
/// [`threshold_ratio_n3`].
pub fn exact_boundary_n3(n: usize) -> Result<ExactScalar> {
    check_parties(Family::NMinus3, n)?;
    let det_at = |a2: ExactScalar| -> Result<ExactScalar> {
        let combo = DickeCombo::new(n, [(0, a2), (n - 3, integer(1))])?;
        Ok(hankel(&reduce_combo(&combo, 2)?).m0.determinant())
    };
    let d1 = det_at(integer(1))?;
    let d2 = det_at(integer(2))?;
    let slope = &d2 - &d1;
    Ok(&d1 / &slope * integer(-1) + integer(1))
}

pub fn psi_n_minus_3(n: usize, a2: &ExactScalar, b2: &ExactScalar) -> Result<DickeCombo> {
    check_parties(Family::NMinus3, n)?;
    check_positive("b2", b2)?;
    let needed = threshold_ratio_n3(n)? * b2;
    if a2 < &needed {
        return Err(Error::Family(format!(
            "a2 = {} is below the bound {} by {}",
            format_rational(a2),
            format_rational(&needed),
            format_rational(&(&needed - a2))
        )));
    }
    DickeCombo::new(n, [(0, a2.clone()), (n - 3, b2.clone())])
}

pub fn psi_n_minus_4(n: usize, a2: &ExactScalar, b2: &ExactScalar) -> Result<DickeCombo> {
    check_parties(Family::NMinus4, n)?;
    check_positive("a2", a2)?;
    check_positive("b2", b2)?;
    DickeCombo::new(n, [(1, a2.clone()), (n - 1, b2.clone())])
}

/// `C(N-4,5) N (N-3) / (30 C(N,7))`, the forced value of `a^2 / b^2`.
pub fn n5_a2_ratio(n: usize) -> Result<ExactScalar> {
    check_parties(Family::NMinus5, n)?;
    let nn = integer(n as i64);
    Ok(binomial_q(n - 4, 5) * &nn * integer(n as i64 - 3) / (integer(30) * binomial_q(n, 7)))
}

/// Root in `c^2` of `det M0` for the 4-qubit reduction of the `N-5` family.
/// `c^2` only enters the bottom-right entry, so the determinant is affine in
/// it with slope equal to the leading 2x2 minor.
pub fn c2_lower_bound(n: usize, a2: &ExactScalar, b2: &ExactScalar) -> Result<ExactScalar> {
    check_parties(Family::NMinus5, n)?;
    check_positive("b2", b2)?;
    let required = n5_a2_ratio(n)? * b2;
    if a2 != &required {
        return Err(Error::Family(format!(
            "a2 must equal {} for b2 = {}, got {}",
            format_rational(&required),
            format_rational(b2),
            format_rational(a2)
        )));
    }
    let combo = DickeCombo::new(n, [(1, a2.clone()), (7, b2.clone())])?;
    let m0 = hankel(&reduce_combo(&combo, 4)?).m0;
    let slope = m0.principal(&[0, 1]).determinant();
    if !slope.is_positive() {
        return Err(Error::Family(format!(
            "leading 2x2 minor {} is not positive",
            format_rational(&slope)
        )));
    }
    Ok(-m0.determinant() / slope)
}

pub fn psi_n_minus_5(n: usize, b2: &ExactScalar, margin: &ExactScalar) -> Result<DickeCombo> {
    check_parties(Family::NMinus5, n)?;
    check_positive("b2", b2)?;
    if margin <= &ExactScalar::one() {
        return Err(Error::Family(format!(
            "margin must exceed 1, got {}",
            format_rational(margin)
        )));
    }
    let a2 = n5_a2_ratio(n)? * b2;
    let bound = c2_lower_bound(n, &a2, b2)?;
    if !bound.is_positive() {
        return Err(Error::Family(format!(
            "c2 root {} is not positive",
            format_rational(&bound)
        )));
    }
    let c2 = bound * margin;
    psi_n_minus_5_with(n, &a2, b2, &c2)
}

/// `N-5` family with an explicit `c^2`; `a^2` must satisfy the tie to `b^2`.
pub fn psi_n_minus_5_with(
    n: usize,
    a2: &ExactScalar,
    b2: &ExactScalar,
    c2: &ExactScalar,
) -> Result<DickeCombo> {
    check_parties(Family::NMinus5, n)?;
    check_positive("b2", b2)?;
    check_positive("c2", c2)?;
    let required = n5_a2_ratio(n)? * b2;
    if a2 != &required {
        return Err(Error::Family(format!(
            "a2 must equal {}, got {}",
            format_rational(&required),
            format_rational(a2)
        )));
    }
    DickeCombo::new(n, [(1, a2.clone()), (7, b2.clone()), (n, c2.clone())])
}

/// Parameters of one family member as given on a command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub a2: Option<ExactScalar>,
    pub b2: ExactScalar,
    pub c2: Option<ExactScalar>,
    pub margin: Option<ExactScalar>,
}

impl FamilySpec {
    /// Claim the family is built for.
    pub fn default_m(&self) -> usize {
        self.n - self.family.kept()
    }

    /// Missing coefficients fall back to the family's rule: `a2` at the bound
    /// for `N-3`, `a2` from the tie for `N-5`, `c2 = margin * root` with
    /// margin 2.
    pub fn build(&self) -> Result<DickeCombo> {
        match self.family {
            Family::NMinus3 => {
                let a2 = match &self.a2 {
                    Some(a) => a.clone(),
                    None => threshold_ratio_n3(self.n)? * &self.b2,
                };
                psi_n_minus_3(self.n, &a2, &self.b2)
            }
            Family::NMinus4 => {
                let a2 = self
                    .a2
                    .clone()
                    .ok_or_else(|| Error::Family("family n-4 needs a2".into()))?;
                psi_n_minus_4(self.n, &a2, &self.b2)
            }
            Family::NMinus5 => {
                if let Some(a2) = &self.a2 {
                    let required = n5_a2_ratio(self.n)? * &self.b2;
                    if a2 != &required {
                        return Err(Error::Family(format!(
                            "a2 must equal {} for this b2",
                            format_rational(&required)
                        )));
                    }
                }
                match &self.c2 {
                    Some(c2) => {
                        let a2 = n5_a2_ratio(self.n)? * &self.b2;
                        psi_n_minus_5_with(self.n, &a2, &self.b2, c2)
                    }
                    None => {
                        let margin = self.margin.clone().unwrap_or_else(|| integer(2));
                        psi_n_minus_5(self.n, &self.b2, &margin)
                    }
                }
            }
        }
    }
}

/// Human-readable coefficient rules for one family at `N`.
pub fn parameter_summary(family: Family, n: usize, b2: &ExactScalar) -> Result<Vec<String>> {
    check_parties(family, n)?;
    let mut lines = Vec::new();
    match family {
        Family::NMinus3 => {
            lines.push(format!("construction bound a2/b2 >= {}", threshold_ratio_n3(n)?));
            lines.push(format!(
                "exact PSD boundary of the 2-reduction a2/b2 = {} (diagnostic)",
                exact_boundary_n3(n)?
            ));
        }
        Family::NMinus4 => {
            lines.push("any a2 > 0 and b2 > 0".to_string());
        }
        Family::NMinus5 => {
            let ratio = n5_a2_ratio(n)?;
            let a2 = &ratio * b2;
            lines.push(format!("a2/b2 = {ratio}"));
            lines.push(format!(
                "c2 > {} for b2 = {}",
                c2_lower_bound(n, &a2, b2)?,
                b2
            ));
        }
    }
    Ok(lines)
}
