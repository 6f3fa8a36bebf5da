//! Rules producing the maximum shaking amplitude.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Positive rational coefficient, kept exact so ceilings like 4/3 of a
/// solution size never suffer float rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alpha {
    num: u64,
    den: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlphaParseError {
    #[error("alpha must be a positive rational like 10, 0.5 or 4/3, got {0:?}")]
    Invalid(String),
}

impl Alpha {
    pub fn new(num: u64, den: u64) -> Result<Self, AlphaParseError> {
        if num == 0 || den == 0 {
            return Err(AlphaParseError::Invalid(format!("{num}/{den}")));
        }
        Ok(Alpha { num, den })
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    /// Ceiling of `alpha * x` in exact integer arithmetic.
    fn ceil_mul(&self, x: u64) -> u64 {
        (self.num * x).div_ceil(self.den)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl FromStr for Alpha {
    type Err = AlphaParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || AlphaParseError::Invalid(s.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let num: u64 = num.trim().parse().map_err(|_| bad())?;
            let den: u64 = den.trim().parse().map_err(|_| bad())?;
            return Alpha::new(num, den).map_err(|_| bad());
        }
        if let Some((whole, frac)) = s.split_once('.') {
            let whole: u64 = if whole.is_empty() {
                0
            } else {
                whole.parse().map_err(|_| bad())?
            };
            if frac.is_empty() || frac.len() > 9 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let den = 10u64.pow(frac.len() as u32);
            let num = whole * den + frac.parse::<u64>().map_err(|_| bad())?;
            return Alpha::new(num, den).map_err(|_| bad());
        }
        let num: u64 = s.trim().parse().map_err(|_| bad())?;
        Alpha::new(num, 1).map_err(|_| bad())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QmaxKind {
    /// Same amplitude for every instance: `qmax = ceil(alpha)`.
    Fixed,
    /// Scaled by the label budget: `qmax = max(1, ceil(alpha * k))`.
    ProportionalToK,
    /// Scaled by the current solution size: `qmax = max(1, ceil(alpha * |C|))`.
    ProportionalToSolution,
}

impl QmaxKind {
    pub fn name(&self) -> &'static str {
        match self {
            QmaxKind::Fixed => "fixed",
            QmaxKind::ProportionalToK => "k",
            QmaxKind::ProportionalToSolution => "sol",
        }
    }
}

impl FromStr for QmaxKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixed" => Ok(QmaxKind::Fixed),
            "k" => Ok(QmaxKind::ProportionalToK),
            "sol" => Ok(QmaxKind::ProportionalToSolution),
            other => Err(format!(
                "unknown qmax strategy {other:?}; expected fixed, k or sol"
            )),
        }
    }
}

/// Rule producing the maximum shaking amplitude of the neighbourhood
/// search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QmaxStrategy {
    pub kind: QmaxKind,
    pub alpha: Alpha,
}

impl QmaxStrategy {
    pub fn new(kind: QmaxKind, alpha: Alpha) -> Self {
        QmaxStrategy { kind, alpha }
    }

    pub fn fixed(alpha: Alpha) -> Self {
        Self::new(QmaxKind::Fixed, alpha)
    }

    pub fn proportional_to_k(alpha: Alpha) -> Self {
        Self::new(QmaxKind::ProportionalToK, alpha)
    }

    pub fn proportional_to_solution(alpha: Alpha) -> Self {
        Self::new(QmaxKind::ProportionalToSolution, alpha)
    }

    /// The tuned default: amplitude tracks the current solution size with
    /// coefficient 4/3.
    pub fn default_solution_scaled() -> Self {
        Self::proportional_to_solution(Alpha::new(4, 3).expect("constant is valid"))
    }

    /// Evaluates the rule; the result is always at least 1.
    pub fn eval(&self, k: usize, current_size: usize) -> usize {
        let v = match self.kind {
            QmaxKind::Fixed => self.alpha.ceil_mul(1),
            QmaxKind::ProportionalToK => self.alpha.ceil_mul(k as u64),
            QmaxKind::ProportionalToSolution => self.alpha.ceil_mul(current_size as u64),
        };
        (v as usize).max(1)
    }
}

impl fmt::Display for QmaxStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.name(), self.alpha)
    }
}
