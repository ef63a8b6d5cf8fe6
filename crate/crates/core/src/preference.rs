//! Generalized criteria: preference functions mapping a performance
//! difference to a degree in `[0, 1]`, and their fuzzy extension.

use serde::{Deserialize, Serialize};

use crate::error::{Error, ErrorCode, Result};
use crate::fuzzy::Tfn;

/// The six generalized-criterion shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// Type I: any positive difference is a strict preference.
    Usual,
    /// Type II: strict preference above the indifference threshold `q`.
    UShape,
    /// Type III: linear up to the preference threshold `p`.
    VShape,
    /// Type IV: half preference between `q` and `p`, full above `p`.
    Level,
    /// Type V: linear between `q` and `p`.
    VShapeIndifference,
    /// Type VI: `1 - exp(-d^2 / 2s^2)` for positive differences.
    Gaussian,
}

impl Shape {
    pub fn as_str(self) -> &'static str {
        match self {
            Shape::Usual => "usual",
            Shape::UShape => "u-shape",
            Shape::VShape => "v-shape",
            Shape::Level => "level",
            Shape::VShapeIndifference => "v-shape-indifference",
            Shape::Gaussian => "gaussian",
        }
    }

    pub fn uses_q(self) -> bool {
        matches!(self, Shape::UShape | Shape::Level | Shape::VShapeIndifference)
    }

    pub fn uses_p(self) -> bool {
        matches!(self, Shape::VShape | Shape::Level | Shape::VShapeIndifference)
    }

    pub fn uses_s(self) -> bool {
        matches!(self, Shape::Gaussian)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    #[serde(alias = "max")]
    Maximize,
    #[serde(alias = "min")]
    Minimize,
}

/// A preference function with concrete thresholds. Thresholds a shape does
/// not use are zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preference {
    pub shape: Shape,
    pub q: f64,
    pub p: f64,
    pub s: f64,
    pub direction: Direction,
}

impl Preference {
    pub fn usual() -> Self {
        Preference { shape: Shape::Usual, q: 0.0, p: 0.0, s: 0.0, direction: Direction::Maximize }
    }

    pub fn minimize(mut self) -> Self {
        self.direction = Direction::Minimize;
        self
    }

    pub fn new(shape: Shape, q: f64, p: f64, s: f64, direction: Direction) -> Result<Self> {
        let pref = Preference { shape, q, p, s, direction };
        pref.validate()?;
        Ok(pref)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(Error::new(ErrorCode::Threshold, msg));
        let shape = self.shape.as_str();
        for (name, value) in [("q", self.q), ("p", self.p), ("s", self.s)] {
            if !value.is_finite() || value < 0.0 {
                return err(format!("{shape}: threshold {name} = {value} must be finite and >= 0"));
            }
        }
        if !self.shape.uses_q() && self.q != 0.0 {
            return err(format!("{shape} does not use an indifference threshold (q = {})", self.q));
        }
        if !self.shape.uses_p() && self.p != 0.0 {
            return err(format!("{shape} does not use a preference threshold (p = {})", self.p));
        }
        if !self.shape.uses_s() && self.s != 0.0 {
            return err(format!("{shape} does not use a Gaussian parameter (s = {})", self.s));
        }
        if self.shape.uses_q() && self.shape.uses_p() && self.q > self.p {
            return err(format!("{shape}: q = {} exceeds p = {}", self.q, self.p));
        }
        if self.shape == Shape::VShape && self.p <= 0.0 {
            return err("v-shape needs p > 0".to_string());
        }
        if self.shape == Shape::Gaussian && self.s <= 0.0 {
            return err("gaussian needs s > 0".to_string());
        }
        Ok(())
    }

    /// Preference degree for an already oriented difference `d`.
    pub fn crisp(&self, d: f64) -> f64 {
        match self.shape {
            Shape::Usual => step(d, 0.0),
            Shape::UShape => step(d, self.q),
            Shape::VShape => {
                if d <= 0.0 {
                    0.0
                } else if d >= self.p {
                    1.0
                } else {
                    d / self.p
                }
            }
            Shape::Level => {
                if d <= self.q {
                    0.0
                } else if d <= self.p {
                    0.5
                } else {
                    1.0
                }
            }
            Shape::VShapeIndifference => {
                if d <= self.q {
                    0.0
                } else if d >= self.p {
                    1.0
                } else {
                    (d - self.q) / (self.p - self.q)
                }
            }
            Shape::Gaussian => {
                if d <= 0.0 {
                    0.0
                } else {
                    1.0 - (-d * d / (2.0 * self.s * self.s)).exp()
                }
            }
        }
    }

    /// Oriented difference of two crisp evaluations.
    pub fn difference(&self, a: f64, b: f64) -> f64 {
        match self.direction {
            Direction::Maximize => a - b,
            Direction::Minimize => b - a,
        }
    }

    /// Oriented fuzzy difference `a ⊖ b` (or `b ⊖ a` when minimizing).
    pub fn fuzzy_difference(&self, a: Tfn, b: Tfn) -> Tfn {
        match self.direction {
            Direction::Maximize => a - b,
            Direction::Minimize => b - a,
        }
    }

    /// Preference of `a` over `b` for crisp evaluations.
    pub fn between(&self, a: f64, b: f64) -> f64 {
        self.crisp(self.difference(a, b))
    }

    /// Fuzzy preference of `a` over `b`: with `D = (d; sl; sr)` the oriented
    /// difference, returns `(P(d); P(d) - P(d - sl); P(d + sr) - P(d))`.
    pub fn fuzzy(&self, a: Tfn, b: Tfn) -> Tfn {
        let diff = self.fuzzy_difference(a, b);
        let mid = self.crisp(diff.m);
        let low = self.crisp(diff.m - diff.alpha);
        let high = self.crisp(diff.m + diff.beta);
        Tfn { m: mid, alpha: mid - low, beta: high - mid }
    }
}

fn step(d: f64, threshold: f64) -> f64 {
    if d > threshold {
        1.0
    } else {
        0.0
    }
}

pub fn pref_crisp(spec: &Preference, d: f64) -> f64 {
    spec.crisp(d)
}

pub fn pref_fuzzy(spec: &Preference, a: Tfn, b: Tfn) -> Tfn {
    spec.fuzzy(a, b)
}
