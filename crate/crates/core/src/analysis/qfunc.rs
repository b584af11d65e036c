use libm::erfc;

/// Upper tail of the standard normal, `Q(x) = ½ erfc(x / √2)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * erfc(x / std::f64::consts::SQRT_2)
}

/// Error-floor lower bound `e^{−α}` for uniformly selected neighbours:
/// the probability that a variable is left without any coded symbol.
pub fn error_floor_bound(alpha: f64) -> f64 {
    (-alpha).exp()
}
