//! Uncertain inputs: evaluations, profiles and thresholds that are crisp,
//! linguistic, interval-valued or drawn from a named distribution.

use rand::Rng;
use rand_distr::{Beta, Distribution as _, Normal, Triangular};

use crate::error::{Error, ErrorCode, Result};
use crate::flows::{check_profile_row, check_within_profiles};
use crate::fuzzy::Tfn;
use crate::preference::{Direction, Preference, Shape};

/// Named distribution family with optional truncation bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distribution {
    Normal { mean: f64, sd: f64, lo: Option<f64>, hi: Option<f64> },
    Triangular { min: f64, mode: f64, max: f64 },
    /// Beta(a, b) rescaled to `[lo, hi]`.
    Beta { a: f64, b: f64, lo: f64, hi: f64 },
}

impl Distribution {
    pub fn family(&self) -> &'static str {
        match self {
            Distribution::Normal { .. } => "normal",
            Distribution::Triangular { .. } => "triangular",
            Distribution::Beta { .. } => "beta",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Distribution::Normal { mean, sd, lo, hi } => {
                mean.is_finite()
                    && sd.is_finite()
                    && sd >= 0.0
                    && lo.is_none_or(f64::is_finite)
                    && hi.is_none_or(f64::is_finite)
                    && match (lo, hi) {
                        (Some(l), Some(h)) => l <= h,
                        _ => true,
                    }
            }
            Distribution::Triangular { min, mode, max } => {
                min.is_finite() && max.is_finite() && min <= mode && mode <= max
            }
            Distribution::Beta { a, b, lo, hi } => {
                a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() && lo.is_finite() && hi.is_finite() && lo <= hi
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::new(ErrorCode::Schema, format!("invalid {} distribution parameters: {self:?}", self.family())))
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            Distribution::Normal { lo, hi, .. } => (lo.unwrap_or(f64::NEG_INFINITY), hi.unwrap_or(f64::INFINITY)),
            Distribution::Triangular { min, max, .. } => (min, max),
            Distribution::Beta { lo, hi, .. } => (lo, hi),
        }
    }

    /// One draw, resampled until it falls inside the declared bounds.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_attempts: u64) -> Result<f64> {
        match *self {
            Distribution::Normal { mean, sd, .. } => {
                let (lo, hi) = self.bounds();
                if sd == 0.0 {
                    return Ok(mean.clamp(lo, hi));
                }
                let normal = Normal::new(mean, sd).map_err(|e| Error::new(ErrorCode::Schema, e.to_string()))?;
                for _ in 0..max_attempts {
                    let v = normal.sample(rng);
                    if (lo..=hi).contains(&v) {
                        return Ok(v);
                    }
                }
                Err(Error::new(
                    ErrorCode::Infeasible,
                    format!("no normal({mean}, {sd}) draw fell within [{lo}, {hi}] after {max_attempts} attempts"),
                ))
            }
            Distribution::Triangular { min, mode, max } => {
                if min == max {
                    return Ok(min);
                }
                let tri = Triangular::new(min, max, mode).map_err(|e| Error::new(ErrorCode::Schema, e.to_string()))?;
                Ok(tri.sample(rng))
            }
            Distribution::Beta { a, b, lo, hi } => {
                let beta = Beta::new(a, b).map_err(|e| Error::new(ErrorCode::Schema, e.to_string()))?;
                Ok(lo + (hi - lo) * beta.sample(rng))
            }
        }
    }

    /// Expected value of the (truncated) distribution, used by the
    /// deterministic mode. Truncated normals use the clamped mean.
    pub fn point_estimate(&self) -> f64 {
        match *self {
            Distribution::Normal { mean, .. } => {
                let (lo, hi) = self.bounds();
                mean.clamp(lo, hi)
            }
            Distribution::Triangular { min, mode, max } => (min + mode + max) / 3.0,
            Distribution::Beta { a, b, lo, hi } => lo + (hi - lo) * a / (a + b),
        }
    }
}

/// An input quantity that may be uncertain.
#[derive(Debug, Clone, PartialEq)]
pub enum StochasticValue {
    Crisp(f64),
    /// Explicit triangular fuzzy number.
    Fuzzy(Tfn),
    /// Linguistic term, resolved against its scale when the problem is read.
    Linguistic { term: String, scale: Option<String>, value: Tfn },
    /// Uniform on `[lo, hi]`.
    Interval(f64, f64),
    Distribution(Distribution),
}

impl StochasticValue {
    pub fn is_random(&self) -> bool {
        match self {
            StochasticValue::Interval(lo, hi) => lo != hi,
            StochasticValue::Distribution(_) => true,
            _ => false,
        }
    }

    pub fn is_fuzzy(&self) -> bool {
        match self {
            StochasticValue::Fuzzy(t) | StochasticValue::Linguistic { value: t, .. } => !t.is_crisp(),
            _ => false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StochasticValue::Crisp(v) if !v.is_finite() => {
                Err(Error::new(ErrorCode::Schema, format!("value {v} is not finite")))
            }
            StochasticValue::Interval(lo, hi) if !(lo.is_finite() && hi.is_finite() && lo <= hi) => {
                Err(Error::new(ErrorCode::Schema, format!("interval [{lo}, {hi}] must satisfy lo <= hi")))
            }
            StochasticValue::Distribution(ref d) => d.validate(),
            _ => Ok(()),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_attempts: u64) -> Result<Tfn> {
        Ok(match self {
            StochasticValue::Crisp(v) => Tfn::crisp(*v),
            StochasticValue::Fuzzy(t) => *t,
            StochasticValue::Linguistic { value, .. } => *value,
            StochasticValue::Interval(lo, hi) => {
                if lo == hi {
                    Tfn::crisp(*lo)
                } else {
                    Tfn::crisp(rng.random_range(*lo..=*hi))
                }
            }
            StochasticValue::Distribution(d) => Tfn::crisp(d.sample(rng, max_attempts)?),
        })
    }

    pub fn point_estimate(&self) -> Tfn {
        match self {
            StochasticValue::Crisp(v) => Tfn::crisp(*v),
            StochasticValue::Fuzzy(t) => *t,
            StochasticValue::Linguistic { value, .. } => *value,
            StochasticValue::Interval(lo, hi) => Tfn::crisp(0.5 * (lo + hi)),
            StochasticValue::Distribution(d) => Tfn::crisp(d.point_estimate()),
        }
    }

    /// Draws a real number; fuzzy kinds are rejected.
    fn sample_real<R: Rng + ?Sized>(&self, rng: &mut R, max_attempts: u64) -> Result<f64> {
        if self.is_fuzzy() {
            return Err(Error::new(ErrorCode::Threshold, "thresholds must be crisp, interval or distribution values"));
        }
        Ok(self.sample(rng, max_attempts)?.m)
    }
}

/// Draws a value; linguistic values resolve through the scale they were
/// read with, other kinds ignore it.
pub fn sample_value<R: Rng + ?Sized>(value: &StochasticValue, rng: &mut R, max_attempts: u64) -> Result<Tfn> {
    value.sample(rng, max_attempts)
}

/// Draws an evaluation that lies within the band spanned by the outer
/// profiles of its criterion.
pub fn sample_evaluation<R: Rng + ?Sized>(
    value: &StochasticValue,
    profiles: &[Tfn],
    rng: &mut R,
    max_attempts: u64,
) -> Result<Tfn> {
    if !value.is_random() {
        let v = value.sample(rng, max_attempts)?;
        check_within_profiles(v, profiles)?;
        return Ok(v);
    }
    for _ in 0..max_attempts {
        let v = value.sample(rng, max_attempts)?;
        if check_within_profiles(v, profiles).is_ok() {
            return Ok(v);
        }
    }
    Err(Error::new(
        ErrorCode::Infeasible,
        format!("no draw of {value:?} fell within the profile range after {max_attempts} attempts"),
    ))
}

/// Preference function whose thresholds may be uncertain.
#[derive(Debug, Clone, PartialEq)]
pub struct PreferenceSpec {
    pub shape: Shape,
    pub q: Option<StochasticValue>,
    pub p: Option<StochasticValue>,
    pub s: Option<f64>,
    pub direction: Direction,
}

impl PreferenceSpec {
    pub fn usual(direction: Direction) -> Self {
        PreferenceSpec { shape: Shape::Usual, q: None, p: None, s: None, direction }
    }

    pub fn crisp(pref: &Preference) -> Self {
        let opt = |used: bool, v: f64| used.then_some(StochasticValue::Crisp(v));
        PreferenceSpec {
            shape: pref.shape,
            q: opt(pref.shape.uses_q(), pref.q),
            p: opt(pref.shape.uses_p(), pref.p),
            s: pref.shape.uses_s().then_some(pref.s),
            direction: pref.direction,
        }
    }

    pub fn is_random(&self) -> bool {
        self.q.as_ref().is_some_and(StochasticValue::is_random) || self.p.as_ref().is_some_and(StochasticValue::is_random)
    }

    /// Structural checks plus feasibility of `q <= p`.
    pub fn validate(&self) -> Result<()> {
        let shape = self.shape.as_str();
        let misuse = |name: &str| Err(Error::new(ErrorCode::Threshold, format!("{shape} does not use threshold {name}")));
        if self.q.is_some() && !self.shape.uses_q() {
            return misuse("q");
        }
        if self.p.is_some() && !self.shape.uses_p() {
            return misuse("p");
        }
        if self.s.is_some() && !self.shape.uses_s() {
            return misuse("s");
        }
        for v in self.q.iter().chain(self.p.iter()) {
            v.validate()?;
            if v.is_fuzzy() || matches!(v, StochasticValue::Linguistic { .. }) {
                return Err(Error::new(ErrorCode::Threshold, "thresholds must be crisp, interval or distribution values"));
            }
        }
        if self.shape.uses_q() && self.shape.uses_p() {
            let range = |v: &Option<StochasticValue>| match v {
                None => (0.0, 0.0),
                Some(StochasticValue::Interval(lo, hi)) => (*lo, *hi),
                Some(StochasticValue::Distribution(d)) => d.bounds(),
                Some(other) => {
                    let m = other.point_estimate().m;
                    (m, m)
                }
            };
            let (q_lo, _) = range(&self.q);
            let (_, p_hi) = range(&self.p);
            if q_lo > p_hi {
                return Err(Error::new(ErrorCode::Threshold, format!("{shape}: q can never be <= p")));
            }
        }
        if !self.is_random() {
            self.point_estimate()?;
        }
        Ok(())
    }

    fn build(&self, q: f64, p: f64) -> Result<Preference> {
        Preference::new(self.shape, q, p, self.s.unwrap_or(0.0), self.direction)
    }

    pub fn point_estimate(&self) -> Result<Preference> {
        let est = |v: &Option<StochasticValue>| v.as_ref().map_or(0.0, |v| v.point_estimate().m);
        self.build(est(&self.q), est(&self.p))
    }

    /// Draws `(q, p)` with rejection until `q <= p`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, max_attempts: u64) -> Result<Preference> {
        if !self.is_random() {
            return self.point_estimate();
        }
        for _ in 0..max_attempts {
            let q = match &self.q {
                Some(v) => v.sample_real(rng, max_attempts)?,
                None => 0.0,
            };
            let p = match &self.p {
                Some(v) => v.sample_real(rng, max_attempts)?,
                None => 0.0,
            };
            if let Ok(pref) = self.build(q, p) {
                return Ok(pref);
            }
        }
        Err(Error::new(
            ErrorCode::Infeasible,
            format!("no threshold draw satisfied q <= p after {max_attempts} attempts"),
        ))
    }
}

pub fn sample_thresholds<R: Rng + ?Sized>(spec: &PreferenceSpec, rng: &mut R, max_attempts: u64) -> Result<Preference> {
    spec.sample(rng, max_attempts)
}

/// Draws one criterion's profiles with rejection until they dominate
/// strictly and their supports are disjoint.
pub fn sample_profiles<R: Rng + ?Sized>(
    row: &[StochasticValue],
    direction: Direction,
    rng: &mut R,
    max_attempts: u64,
) -> Result<Vec<Tfn>> {
    if !row.iter().any(StochasticValue::is_random) {
        let fixed: Vec<Tfn> = row.iter().map(StochasticValue::point_estimate).collect();
        check_profile_row(&fixed, direction)?;
        return Ok(fixed);
    }
    let mut draw = Vec::with_capacity(row.len());
    for _ in 0..max_attempts {
        draw.clear();
        for v in row {
            draw.push(v.sample(rng, max_attempts)?);
        }
        if check_profile_row(&draw, direction).is_ok() {
            return Ok(draw);
        }
    }
    Err(Error::new(
        ErrorCode::Infeasible,
        format!("profile dominance was not reached after {max_attempts} attempts"),
    ))
}
