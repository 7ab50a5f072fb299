use serde::Serialize;

/// Closed-form regret bounds for a class with the given dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegretBounds {
    /// `8 √(L · BL · T · ln T)`.
    pub optimal: f64,
    /// `e √(L · C · T · ln(T · C))`, the experts learner on the remapped class.
    pub experts_remapped: f64,
    /// `2e √(2 · L · BL · T · ln T)`.
    pub intermediate: f64,
    /// `T ≤ BL`: regret is trivially at most `BL` and the square-root bounds
    /// are not the binding ones.
    pub trivial_regime: bool,
    pub log_base: &'static str,
}

pub fn regret_bounds(l: u32, bl: u32, c: usize, horizon: usize) -> RegretBounds {
    let (l, bl, c, t) = (l as f64, bl as f64, c as f64, horizon.max(1) as f64);
    let e = std::f64::consts::E;
    let log_t = t.ln();
    let log_tc = if c > 0.0 { (t * c).ln().max(0.0) } else { 0.0 };
    RegretBounds {
        optimal: 8.0 * (l * bl * t * log_t).sqrt(),
        experts_remapped: e * (l * c * t * log_tc).sqrt(),
        intermediate: 2.0 * e * (2.0 * l * bl * t * log_t).sqrt(),
        trivial_regime: t <= bl,
        log_base: "natural",
    }
}
