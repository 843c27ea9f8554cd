//! Explicit Chebotarev estimates under GRH for the ring class fields of
//! `Q(sqrt(-p))` adjoined with `zeta_8`, and the thresholds they give for
//! `q_j`. Everything here is `f64`; discriminants are only kept as
//! exponents of 2 and `p`.

use std::f64::consts::{LN_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::arith::is_prime;
use crate::error::{arg_err, Error, Result};
use crate::quad_class::class_number;
use crate::qj_solver::q_condition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldCase {
    #[serde(rename = "Kzeta8")]
    KZeta8,
    #[serde(rename = "L0zeta8")]
    L0Zeta8,
    #[serde(rename = "L1zeta8")]
    L1Zeta8,
}

impl fmt::Display for FieldCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldCase::KZeta8 => "Kzeta8",
            FieldCase::L0Zeta8 => "L0zeta8",
            FieldCase::L1Zeta8 => "L1zeta8",
        })
    }
}

impl FromStr for FieldCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kzeta8" | "k" => Ok(FieldCase::KZeta8),
            "l0zeta8" | "l0" => Ok(FieldCase::L0Zeta8),
            "l1zeta8" | "l1" => Ok(FieldCase::L1Zeta8),
            _ => arg_err(format!("unknown field case {s:?} (expected Kzeta8, L0zeta8 or L1zeta8)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Residue {
    #[serde(rename = "1 mod 4")]
    OneMod4,
    #[serde(rename = "3 mod 8")]
    ThreeMod8,
    #[serde(rename = "7 mod 8")]
    SevenMod8,
}

impl Residue {
    pub fn of(p: u64) -> Self {
        match p % 8 {
            3 => Residue::ThreeMod8,
            7 => Residue::SevenMod8,
            _ => Residue::OneMod4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldInvariants {
    pub case: FieldCase,
    pub p: u64,
    pub p_residue_class: Residue,
    pub h: u64,
    /// Degree over Q.
    pub n: u64,
    /// `log d = logd.0 * log 2 + logd.1 * log p`.
    pub logd: (u64, u64),
    /// Set when only a divisibility `d | 2^a p^b` is known.
    pub upper_bound: bool,
}

impl FieldInvariants {
    pub fn log_d(&self) -> f64 {
        self.logd.0 as f64 * LN_2 + self.logd.1 as f64 * (self.p as f64).ln()
    }
}

/// Degree and discriminant exponents of `K(zeta_8)`, `L_0(zeta_8)` or
/// `L_1(zeta_8)`, where `h` is the class number of `Q(sqrt(-p))`.
pub fn field_invariants(p: u64, case: FieldCase, h: u64) -> Result<FieldInvariants> {
    if p <= 3 || !is_prime(p) {
        return arg_err(format!("{p} is not a prime greater than 3"));
    }
    if h == 0 && case != FieldCase::KZeta8 {
        return arg_err("class number must be positive");
    }
    let residue = Residue::of(p);
    let (n, logd, upper_bound) = match (case, residue) {
        (FieldCase::KZeta8, _) => (8, (16, 4), false),
        (FieldCase::L0Zeta8, Residue::ThreeMod8 | Residue::SevenMod8) => (8 * h, (16 * h, 4 * h), false),
        (FieldCase::L1Zeta8, Residue::ThreeMod8) => (24 * h, (52 * h, 12 * h), false),
        (FieldCase::L0Zeta8, Residue::OneMod4) => (4 * h, (8 * h, 2 * h), false),
        (FieldCase::L1Zeta8, Residue::OneMod4) => (8 * h, (21 * h, 4 * h), true),
        (FieldCase::L1Zeta8, Residue::SevenMod8) => {
            return arg_err(format!("L1zeta8 has no discriminant formula for p = {p} = 7 mod 8"))
        }
    };
    Ok(FieldInvariants { case, p, p_residue_class: residue, h, n, logd, upper_bound })
}

/// `h(-p)` for `p = 3 mod 4` and `h(-4p)` for `p = 1 mod 4`.
pub fn class_number_for(p: u64) -> Result<u64> {
    let d = if p % 4 == 3 { -(p as i64) } else { -4 * p as i64 };
    Ok(class_number(d)? as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub x: f64,
    /// `x / log x`, a lower bound for `li(x) - li(2)` once `x > 2000`.
    pub main_term: f64,
    pub error_term: f64,
    /// Lower bound for `(|G|/|C|) pi_C(x)`.
    pub lower_bound: f64,
    pub positive: bool,
}

impl BoundReport {
    /// `lower_bound * log x / sqrt x`, comparable with `sqrt x - C h log^2 x`.
    pub fn normalized(&self) -> f64 {
        self.lower_bound * self.x.ln() / self.x.sqrt()
    }

    /// The `C` for which `normalized = sqrt x - C h log^2 x`.
    pub fn coefficient(&self, h: u64) -> f64 {
        let lx = self.x.ln();
        (self.x.sqrt() - self.normalized()) / (h as f64 * lx * lx)
    }
}

pub fn cheb_gap_bound(x: f64, inv: &FieldInvariants) -> Result<BoundReport> {
    if !(x > 2.0) || !x.is_finite() {
        return arg_err(format!("x = {x} must be a finite number above 2"));
    }
    let lx = x.ln();
    let error_term = x.sqrt()
        * ((1.0 / PI + 3.0 / lx) * inv.log_d()
            + (lx / (8.0 * PI) + 1.0 / (4.0 * PI) + 6.0 / lx) * inv.n as f64);
    let main_term = x / lx;
    let lower_bound = main_term - error_term;
    Ok(BoundReport { x, main_term, error_term, lower_bound, positive: lower_bound > 0.0 })
}

/// Which lower end `x >= p log^k p` a coefficient family applies from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Family {
    #[serde(rename = "log4")]
    Log4,
    #[serde(rename = "log6")]
    Log6,
}

impl Family {
    pub fn exponent(self) -> i32 {
        match self {
            Family::Log4 => 4,
            Family::Log6 => 6,
        }
    }

    /// `p log^k p`.
    pub fn start(self, p: u64) -> f64 {
        let pf = p as f64;
        pf * pf.ln().powi(self.exponent())
    }
}

/// The constant `C` in `sqrt x - C h log^2 x` for the given field and family.
pub fn envelope_coefficient(case: FieldCase, residue: Residue, family: Family) -> Result<f64> {
    Ok(match (case, residue, family) {
        (FieldCase::L0Zeta8, Residue::OneMod4, Family::Log4) => 1.28,
        (FieldCase::L0Zeta8, _, Family::Log4) => 2.56,
        (FieldCase::L1Zeta8, Residue::OneMod4, Family::Log4) => 2.67,
        (FieldCase::L1Zeta8, Residue::ThreeMod8, Family::Log4) => 7.76,
        (FieldCase::L0Zeta8, Residue::OneMod4, Family::Log6) => 1.12,
        (FieldCase::L0Zeta8, _, Family::Log6) => 2.24,
        (FieldCase::L1Zeta8, Residue::OneMod4, Family::Log6) => 2.33,
        (FieldCase::L1Zeta8, Residue::ThreeMod8, Family::Log6) => 6.80,
        _ => return arg_err(format!("no envelope for {case} with p = {residue:?}")),
    })
}

/// Field cases that carry an envelope for this residue class.
pub fn envelope_cases(residue: Residue) -> &'static [FieldCase] {
    match residue {
        Residue::SevenMod8 => &[FieldCase::L0Zeta8],
        _ => &[FieldCase::L0Zeta8, FieldCase::L1Zeta8],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HBoundMode {
    /// `h ~ sqrt p` (`p = 3 mod 4`) or `2 sqrt p` (`p = 1 mod 4`).
    BrauerSiegel,
    /// `h < sqrt p log p` or `sqrt(4p) log(4p)`.
    Unconditional,
}

impl FromStr for HBoundMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brauer_siegel" | "brauer-siegel" => Ok(HBoundMode::BrauerSiegel),
            "unconditional" => Ok(HBoundMode::Unconditional),
            _ => arg_err(format!("unknown h bound mode {s:?}")),
        }
    }
}

impl HBoundMode {
    pub fn family(self) -> Family {
        match self {
            HBoundMode::BrauerSiegel => Family::Log4,
            HBoundMode::Unconditional => Family::Log6,
        }
    }

    pub fn h_value(self, p: u64) -> f64 {
        let pf = p as f64;
        match (self, p % 4 == 3) {
            (HBoundMode::BrauerSiegel, true) => pf.sqrt(),
            (HBoundMode::BrauerSiegel, false) => 2.0 * pf.sqrt(),
            (HBoundMode::Unconditional, true) => pf.sqrt() * pf.ln(),
            (HBoundMode::Unconditional, false) => (4.0 * pf).sqrt() * (4.0 * pf).ln(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub p: u64,
    pub mode: HBoundMode,
    /// Smallest certified grid point.
    pub x: f64,
    /// `10000 p log^k p`.
    pub threshold: f64,
    pub coefficient: f64,
    pub h: f64,
    /// `sqrt x - C h log^2 x` at the threshold.
    pub margin_at_threshold: f64,
}

impl ThresholdReport {
    pub fn ratio(&self) -> f64 {
        self.x / self.threshold
    }
}

pub const GRID_FACTOR: f64 = 1.1;

fn envelope(x: f64, c: f64, h: f64) -> f64 {
    let lx = x.ln();
    x.sqrt() - c * h * lx * lx
}

/// Walks `x = p log^k p * 1.1^i` up to `10000 p log^k p` and returns the
/// first point where `sqrt x - C h log^2 x > 0` for the largest `C` that
/// applies to `p`, with `h` replaced by the bound of `mode`.
pub fn thm_bound_search(p: u64, mode: HBoundMode) -> Result<ThresholdReport> {
    if p <= 2000 || !is_prime(p) {
        return arg_err(format!("{p} is not a prime above 2000"));
    }
    let residue = Residue::of(p);
    let family = mode.family();
    let mut c: f64 = 0.0;
    for &case in envelope_cases(residue) {
        c = c.max(envelope_coefficient(case, residue, family)?);
    }
    let h = mode.h_value(p);
    let start = family.start(p);
    let threshold = 10000.0 * start;
    let margin_at_threshold = envelope(threshold, c, h);
    if !(margin_at_threshold > 0.0) {
        return Err(Error::Verification(format!(
            "sqrt x - {c} h log^2 x = {margin_at_threshold} is not positive at x = {threshold} for p = {p}"
        )));
    }
    let mut x = start;
    while x < threshold && envelope(x, c, h) <= 0.0 {
        x *= GRID_FACTOR;
    }
    Ok(ThresholdReport { p, mode, x: x.min(threshold), threshold, coefficient: c, h, margin_at_threshold })
}

/// Number of primes `q <= x` with `q = 3 mod 8` and `(p/q) = -1`.
pub fn count_n(p: u64, x: f64) -> Result<u64> {
    if p <= 3 || !is_prime(p) {
        return arg_err(format!("{p} is not a prime greater than 3"));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return arg_err(format!("x = {x} must be finite and non-negative"));
    }
    let top = x.floor() as u64;
    Ok((3..=top).filter(|&q| q_condition(q, p)).count() as u64)
}
