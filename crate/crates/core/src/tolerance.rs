//! Tolerance policy and slack helpers.
//!
//! Lemma-item checks use [`ITEM`]; algebraic identities use [`IDENTITY`].
//! Slacks are relative: a nonnegative slack means the relation holds.

/// Default tolerance for transform post-condition checks.
pub const ITEM: f64 = 1e-9;

/// Default tolerance for exact algebraic identities.
pub const IDENTITY: f64 = 1e-12;

fn scale(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs())
}

/// Relative slack of `lhs ≤ rhs`.
pub fn slack_le(lhs: f64, rhs: f64) -> f64 {
    let s = scale(lhs, rhs);
    if s == 0.0 {
        0.0
    } else {
        (rhs - lhs) / s
    }
}

/// Relative slack of `lhs ≥ rhs`.
pub fn slack_ge(lhs: f64, rhs: f64) -> f64 {
    slack_le(rhs, lhs)
}

/// Minus the relative distance between `a` and `b` (0 when equal).
pub fn slack_eq(a: f64, b: f64) -> f64 {
    -rel_diff(a, b)
}

/// `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let s = scale(a, b);
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
