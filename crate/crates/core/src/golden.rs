//! Golden-mean constants that characterize the optimal Hardy setup.

use crate::spinalg::Angle;

/// The golden mean `(1 + √5) / 2`.
pub const TAU: f64 = 1.618_033_988_749_895;

/// Optimal relative angle `θ₀ = 2·arccos(τ^{-1/2})`, where `cos²(θ₀/2) = 1/τ` (≈ 76.3454°).
pub fn theta_zero() -> Angle {
    Angle::from_radians(2.0 * TAU.powf(-0.5).acos())
}

/// Maximum contradiction probability `1/τ⁵` (≈ 0.0901699).
pub fn p_max() -> f64 {
    TAU.powi(-5)
}
