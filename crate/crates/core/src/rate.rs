//! Asymptotic upper bounds on the rate `k/n` of binary codes as functions of
//! the normalized minimum distance `delta = d/n`.
//!
//! | kind              | `f(delta)` for `delta < 1/2`                                       |
//! |-------------------|--------------------------------------------------------------------|
//! | `Mrrw1`           | `min_{0<=u<=1-2delta} 1 + g(u^2) - g(u^2 + 2 delta u + 2 delta)`   |
//! | `Mrrw2`           | `h(1/2 - sqrt(delta (1 - delta)))`                                 |
//! | `EliasBassalygo`  | `1 - h((1 - sqrt(1 - 2 delta)) / 2)`                               |
//! | `Hamming`         | `1 - h(delta / 2)`                                                 |
//! | `GvHeuristic`     | `1 - h(delta)`                                                     |
//!
//! with `h` the binary entropy and `g(u) = h((1 - sqrt(1 - u)) / 2)`. Every
//! kind is `0` for `delta >= 1/2`. The Gilbert-Varshamov curve is an
//! achievability bound; it is used as if it were an upper bound for the
//! heuristic schedule only.

use std::f64::consts::LN_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Absolute accuracy promised by [`evaluate`].
pub const EVAL_TOLERANCE: f64 = 1e-10;

const MRRW1_GRID: usize = 4096;
const GOLDEN_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateBoundKind {
    Mrrw1,
    Mrrw2,
    EliasBassalygo,
    Hamming,
    GvHeuristic,
}

impl RateBoundKind {
    pub const ALL: [RateBoundKind; 5] = [
        RateBoundKind::Mrrw1,
        RateBoundKind::Mrrw2,
        RateBoundKind::EliasBassalygo,
        RateBoundKind::Hamming,
        RateBoundKind::GvHeuristic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RateBoundKind::Mrrw1 => "mrrw1",
            RateBoundKind::Mrrw2 => "mrrw2",
            RateBoundKind::EliasBassalygo => "elias-bassalygo",
            RateBoundKind::Hamming => "hamming",
            RateBoundKind::GvHeuristic => "gv-heuristic",
        }
    }

    pub fn eval_tolerance(self) -> f64 {
        EVAL_TOLERANCE
    }

    /// Whether the kind is a proven (asymptotic) rate bound.
    pub fn is_proven(self) -> bool {
        self != RateBoundKind::GvHeuristic
    }
}

impl fmt::Display for RateBoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RateBoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mrrw1" | "f1" => Ok(RateBoundKind::Mrrw1),
            "mrrw2" | "f2" => Ok(RateBoundKind::Mrrw2),
            "elias-bassalygo" | "eb" | "f3" => Ok(RateBoundKind::EliasBassalygo),
            "hamming" | "f4" => Ok(RateBoundKind::Hamming),
            "gv-heuristic" | "gv" => Ok(RateBoundKind::GvHeuristic),
            other => Err(Error::InvalidArgument(format!("unknown rate bound {other:?}"))),
        }
    }
}

fn check_unit(function: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain { function, value })
    }
}

/// `-x ln x`, extended by continuity to `0` at `x = 0`.
fn neg_x_ln_x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln()
    }
}

fn entropy_unchecked(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    (neg_x_ln_x(u) + neg_x_ln_x(1.0 - u)) / LN_2
}

fn g_unchecked(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    entropy_unchecked((1.0 - (1.0 - u).sqrt()) / 2.0)
}

/// Binary entropy `h(u) = -u log2 u - (1-u) log2 (1-u)`, with `h(0) = h(1) = 0`.
pub fn entropy(u: f64) -> Result<f64> {
    check_unit("entropy", u)?;
    Ok(entropy_unchecked(u))
}

/// `g(u) = h((1 - sqrt(1 - u)) / 2)`.
pub fn g(u: f64) -> Result<f64> {
    check_unit("g", u)?;
    Ok(g_unchecked(u))
}

/// The function minimized in the first MRRW bound. At `u = 0` it is the
/// Elias-Bassalygo bound, at `u = 1 - 2 delta` the second MRRW bound.
pub fn mrrw1_objective(delta: f64, u: f64) -> f64 {
    1.0 + g_unchecked(u * u) - g_unchecked(u * u + 2.0 * delta * u + 2.0 * delta)
}

fn mrrw1(delta: f64) -> f64 {
    let hi = 1.0 - 2.0 * delta;
    let objective = |u: f64| mrrw1_objective(delta, u);
    let at = |i: usize| hi * i as f64 / MRRW1_GRID as f64;

    // Both endpoints are grid points.
    let (best_i, best_val) = (0..=MRRW1_GRID)
        .map(|i| (i, objective(at(i))))
        .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });

    let lo = at(best_i.saturating_sub(1));
    let up = at((best_i + 1).min(MRRW1_GRID));
    let refined = golden_section_min(objective, lo, up, GOLDEN_WIDTH);
    best_val.min(refined).clamp(0.0, 1.0)
}

/// Golden-section search for the minimum of a unimodal function on
/// `[a, b]`; returns the smallest value seen.
fn golden_section_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, width: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut best = f(a).min(f(b)).min(fc).min(fd);
    while b - a > width {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            best = best.min(fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            best = best.min(fd);
        }
    }
    best
}

/// Value of the rate bound `kind` at normalized distance `delta`.
pub fn evaluate(kind: RateBoundKind, delta: f64) -> Result<f64> {
    check_unit("evaluate", delta)?;
    Ok(evaluate_unchecked(kind, delta))
}

pub(crate) fn evaluate_unchecked(kind: RateBoundKind, delta: f64) -> f64 {
    if delta >= 0.5 {
        return 0.0;
    }
    match kind {
        RateBoundKind::Mrrw1 => mrrw1(delta),
        RateBoundKind::Mrrw2 => entropy_unchecked(0.5 - (delta * (1.0 - delta)).sqrt()),
        RateBoundKind::EliasBassalygo => 1.0 - entropy_unchecked((1.0 - (1.0 - 2.0 * delta).sqrt()) / 2.0),
        RateBoundKind::Hamming => 1.0 - entropy_unchecked(delta / 2.0),
        RateBoundKind::GvHeuristic => 1.0 - entropy_unchecked(delta),
    }
}
