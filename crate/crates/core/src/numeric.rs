//! Small numeric helpers shared by the estimation and descent modules.

/// Ceiling that absorbs floating-point representation noise: a value within
/// 1e-9 (relative) of an integer rounds to that integer instead of up.
///
/// Quantities like `18·D²/ε²` are mathematically integral for many natural
/// inputs but land an ulp above or below the integer in f64 (e.g.
/// `18.0/(0.1*0.1) = 1799.9999999999995`); a bare `ceil` one noise-flip the
/// other way would silently add an iteration.
pub(crate) fn ceil_tolerant(q: f64) -> f64 {
    let r = q.round();
    if (q - r).abs() <= 1e-9 * r.abs().max(1.0) {
        r
    } else {
        q.ceil()
    }
}

/// `dim^(3/2)` computed as `sqrt(dim³)` so that perfect squares stay exact
/// (e.g. `dim = 4` gives exactly 8.0); exact for `dim` up to ~2^17.
pub(crate) fn dim_pow_3_2(dim: usize) -> f64 {
    let d = dim as u64;
    ((d * d * d) as f64).sqrt()
}
