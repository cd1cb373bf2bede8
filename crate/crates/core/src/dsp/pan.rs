/// Square-root pan law: `L = s*sqrt(pos)`, `R = s*sqrt(1-pos)`. `pos` is clamped to `[0, 1]`.
#[inline]
pub fn equal_power_pan(s: f64, pos: f64) -> (f64, f64) {
    let pos = if pos.is_nan() { 0.5 } else { pos.clamp(0.0, 1.0) };
    (s * pos.sqrt(), s * (1.0 - pos).sqrt())
}
