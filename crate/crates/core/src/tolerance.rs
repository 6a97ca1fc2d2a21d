//! Named numerical tolerances.

/// Norm drift allowed across any sequence of period unitaries.
pub const UNITARY: f64 = 1e-10;

/// Agreement between the spectral and grid-quadrature routes.
pub const QUADRATURE: f64 = 1e-10;

/// Identity checks: Parseval, exact phase shifts, unitarity of a single 2x2 block.
pub const IDENTITY: f64 = 1e-12;

/// Below this post-selection probability the outcome is treated as impossible.
pub const POSTSELECT_FLOOR: f64 = 1e-30;

/// Phase budget above which a warning is emitted.
pub const PHASE_BUDGET_WARN: f64 = 0.1;

/// Phase budget above which a run is rejected.
pub const PHASE_BUDGET_MAX: f64 = 1.0;

/// All tolerances as `(name, value)` pairs, for report envelopes.
pub fn all() -> [(&'static str, f64); 6] {
    [
        ("unitary", UNITARY),
        ("quadrature", QUADRATURE),
        ("identity", IDENTITY),
        ("postselect_floor", POSTSELECT_FLOOR),
        ("phase_budget_warn", PHASE_BUDGET_WARN),
        ("phase_budget_max", PHASE_BUDGET_MAX),
    ]
}
