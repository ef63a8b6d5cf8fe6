//! Triangular fuzzy numbers in LR form `(m; alpha; beta)`.
//!
//! Only the operations the sorting pipeline needs are provided: addition,
//! subtraction, scaling by a non-negative scalar, and defuzzification.

use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorCode};

/// A triangular fuzzy number with mode `m`, left spread `alpha` and right
/// spread `beta`. Its support is `[m - alpha, m + beta]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Tfn {
    pub m: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// How a fuzzy number collapses to a real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefuzzMethod {
    /// Triangle centroid `m + (beta - alpha) / 3`.
    #[default]
    Centroid,
    /// `m + (beta + alpha) / 3`, kept for comparison with published figures.
    PaperLiteral,
}

impl DefuzzMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DefuzzMethod::Centroid => "centroid",
            DefuzzMethod::PaperLiteral => "paper-literal",
        }
    }
}

impl std::str::FromStr for DefuzzMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "centroid" => Ok(DefuzzMethod::Centroid),
            "paper-literal" => Ok(DefuzzMethod::PaperLiteral),
            other => Err(Error::new(
                ErrorCode::Schema,
                format!("unknown defuzzification method `{other}`"),
            )),
        }
    }
}

impl Tfn {
    pub const ZERO: Tfn = Tfn { m: 0.0, alpha: 0.0, beta: 0.0 };

    /// Builds a fuzzy number, rejecting negative or non-finite spreads.
    pub fn new(m: f64, alpha: f64, beta: f64) -> Result<Self, Error> {
        if !(m.is_finite() && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::new(
                ErrorCode::Schema,
                format!("fuzzy number ({m}; {alpha}; {beta}) is not finite"),
            ));
        }
        if alpha < 0.0 || beta < 0.0 {
            return Err(Error::new(
                ErrorCode::Schema,
                format!("fuzzy number ({m}; {alpha}; {beta}) has a negative spread"),
            ));
        }
        Ok(Tfn { m, alpha, beta })
    }

    pub const fn crisp(value: f64) -> Self {
        Tfn { m: value, alpha: 0.0, beta: 0.0 }
    }

    pub fn is_crisp(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }

    pub fn lower(&self) -> f64 {
        self.m - self.alpha
    }

    pub fn upper(&self) -> f64 {
        self.m + self.beta
    }

    /// Membership degree of `x`.
    pub fn membership(&self, x: f64) -> f64 {
        if x == self.m {
            1.0
        } else if x < self.m {
            if self.alpha == 0.0 || x <= self.lower() {
                0.0
            } else {
                (x - self.lower()) / self.alpha
            }
        } else if self.beta == 0.0 || x >= self.upper() {
            0.0
        } else {
            (self.upper() - x) / self.beta
        }
    }

    /// `w ⊗ self`; the scalar must be non-negative.
    pub fn scale(self, w: f64) -> Result<Self, Error> {
        if w.is_nan() || w < 0.0 {
            return Err(Error::new(
                ErrorCode::Domain,
                format!("cannot scale a fuzzy number by negative scalar {w}"),
            ));
        }
        Ok(self.scale_unchecked(w))
    }

    pub(crate) fn scale_unchecked(self, w: f64) -> Self {
        Tfn { m: w * self.m, alpha: w * self.alpha, beta: w * self.beta }
    }

    pub fn defuzzify(&self, method: DefuzzMethod) -> f64 {
        match method {
            DefuzzMethod::Centroid => self.m + (self.beta - self.alpha) / 3.0,
            DefuzzMethod::PaperLiteral => self.m + (self.beta + self.alpha) / 3.0,
        }
    }

    /// The crisp number at the mode.
    pub fn without_spreads(self) -> Self {
        Tfn::crisp(self.m)
    }
}

impl Add for Tfn {
    type Output = Tfn;

    fn add(self, rhs: Tfn) -> Tfn {
        Tfn { m: self.m + rhs.m, alpha: self.alpha + rhs.alpha, beta: self.beta + rhs.beta }
    }
}

/// Spreads cross over: the left spread of `a ⊖ b` is `alpha_a + beta_b`.
impl Sub for Tfn {
    type Output = Tfn;

    fn sub(self, rhs: Tfn) -> Tfn {
        Tfn { m: self.m - rhs.m, alpha: self.alpha + rhs.beta, beta: self.beta + rhs.alpha }
    }
}

impl std::iter::Sum for Tfn {
    fn sum<I: Iterator<Item = Tfn>>(iter: I) -> Tfn {
        iter.fold(Tfn::ZERO, Add::add)
    }
}

impl From<f64> for Tfn {
    fn from(value: f64) -> Self {
        Tfn::crisp(value)
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_crisp() {
            write!(f, "{}", self.m)
        } else {
            write!(f, "({}; {}; {})", self.m, self.alpha, self.beta)
        }
    }
}

pub fn tfn_add(a: Tfn, b: Tfn) -> Tfn {
    a + b
}

pub fn tfn_sub(a: Tfn, b: Tfn) -> Tfn {
    a - b
}

pub fn tfn_scale(w: f64, a: Tfn) -> Result<Tfn, Error> {
    a.scale(w)
}

pub fn tfn_defuzzify(a: Tfn, method: DefuzzMethod) -> f64 {
    a.defuzzify(method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(m: f64, a: f64, b: f64) -> Tfn {
        Tfn::new(m, a, b).unwrap()
    }

    #[test]
    fn addition_examples() {
        assert_eq!(t(4.0, 0.75, 0.75) + t(3.0, 0.75, 0.75), t(7.0, 1.5, 1.5));
        assert_eq!(t(2.5, 0.1, 0.4) + Tfn::ZERO, t(2.5, 0.1, 0.4));
        assert_eq!(t(8.0, 0.75, 0.0) + t(0.0, 0.0, 0.75), t(8.0, 0.75, 0.75));
    }

    #[test]
    fn subtraction_cross_couples_spreads() {
        assert_eq!(t(4.0, 1.0, 2.0) - t(1.0, 3.0, 5.0), t(3.0, 6.0, 5.0));
        assert_eq!(t(2.5, 0.1, 0.4) - Tfn::ZERO, t(2.5, 0.1, 0.4));
        let a = t(2.0, 1.0, 1.0);
        assert_eq!(a - a, t(0.0, 2.0, 2.0));
    }

    #[test]
    fn scaling() {
        assert_eq!(tfn_scale(0.3, Tfn::crisp(1.0)).unwrap(), t(0.3, 0.0, 0.0));
        assert_eq!(tfn_scale(0.0, t(5.0, 1.0, 2.0)).unwrap(), Tfn::ZERO);
        assert_eq!(tfn_scale(2.0, t(3.0, 0.75, 0.75)).unwrap(), t(6.0, 1.5, 1.5));
        let err = tfn_scale(-1.0, Tfn::crisp(1.0)).unwrap_err();
        assert_eq!(err.code(), ErrorCode::Domain);
    }

    #[test]
    fn defuzzification() {
        let a = t(7.0, 0.75, 0.75);
        assert_eq!(a.defuzzify(DefuzzMethod::Centroid), 7.0);
        assert_eq!(a.defuzzify(DefuzzMethod::PaperLiteral), 7.5);
        for method in [DefuzzMethod::Centroid, DefuzzMethod::PaperLiteral] {
            assert_eq!(Tfn::crisp(3.25).defuzzify(method), 3.25);
        }
        // centroid of the triangle (7.25, 8, 8)
        let em = t(8.0, 0.75, 0.0);
        assert!((em.defuzzify(DefuzzMethod::Centroid) - (7.25 + 8.0 + 8.0) / 3.0).abs() < 1e-12);
    }

    #[test]
    fn negative_spread_rejected() {
        assert!(Tfn::new(1.0, -0.1, 0.0).is_err());
        assert!(Tfn::new(f64::NAN, 0.0, 0.0).is_err());
    }

    #[test]
    fn membership_shape() {
        let a = t(5.0, 1.0, 2.0);
        assert_eq!(a.membership(5.0), 1.0);
        assert_eq!(a.membership(4.0), 0.0);
        assert_eq!(a.membership(7.5), 0.0);
        assert!((a.membership(4.5) - 0.5).abs() < 1e-12);
        assert!((a.membership(6.0) - 0.5).abs() < 1e-12);
    }

    fn arb_tfn() -> impl Strategy<Value = Tfn> {
        (-50.0..50.0f64, 0.0..5.0f64, 0.0..5.0f64).prop_map(|(m, a, b)| Tfn { m, alpha: a, beta: b })
    }

    fn close(a: Tfn, b: Tfn) -> bool {
        (a.m - b.m).abs() < 1e-12 && (a.alpha - b.alpha).abs() < 1e-12 && (a.beta - b.beta).abs() < 1e-12
    }

    proptest! {
        #[test]
        fn add_commutes_and_associates(a in arb_tfn(), b in arb_tfn(), c in arb_tfn()) {
            prop_assert!(close(a + b, b + a));
            prop_assert!(close((a + b) + c, a + (b + c)));
        }

        #[test]
        fn scale_distributes(w in 0.0..3.0f64, a in arb_tfn(), b in arb_tfn()) {
            let lhs = (a + b).scale(w).unwrap();
            let rhs = a.scale(w).unwrap() + b.scale(w).unwrap();
            prop_assert!(close(lhs, rhs));
        }

        #[test]
        fn defuzzify_is_homogeneous(w in 0.0..3.0f64, a in arb_tfn()) {
            for method in [DefuzzMethod::Centroid, DefuzzMethod::PaperLiteral] {
                let lhs = a.scale(w).unwrap().defuzzify(method);
                prop_assert!((lhs - w * a.defuzzify(method)).abs() < 1e-9);
            }
        }

        #[test]
        fn symmetric_centroid_is_mode(m in -50.0..50.0f64, s in 0.0..5.0f64) {
            prop_assert_eq!(Tfn { m, alpha: s, beta: s }.defuzzify(DefuzzMethod::Centroid), m);
        }
    }
}
