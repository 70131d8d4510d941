//! Wick-renormalized pointwise powers.
//!
//! The stationary pointwise variance of the convolution equals the tadpole
//! constant, E[u₁(x)²] = C₀, so the renormalized square and cube are the
//! plain Hermite corrections applied value by value on the grid:
//! u² − C₀ and u³ − 3C₀u.

use crate::field::LatticeField;

/// Which renormalized power to form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WickOrder {
    /// u² − C₀.
    Square,
    /// u³ − 3C₀u.
    Cube,
}

/// Pointwise Wick power with the caller's tadpole constant.
pub fn wick_power(u: &LatticeField, order: WickOrder, c0: f64) -> LatticeField {
    match order {
        WickOrder::Square => u.map(|v| v * v - c0),
        WickOrder::Cube => u.map(|v| v * v * v - 3.0 * c0 * v),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wick_powers_of_zero() {
        let z = LatticeField::zero(4).unwrap();
        let sq = wick_power(&z, WickOrder::Square, 0.25);
        assert!(sq.values().iter().all(|&v| v == -0.25));
        let cu = wick_power(&z, WickOrder::Cube, 0.25);
        assert!(cu.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn wick_square_subtracts_the_constant_pointwise() {
        let u = LatticeField::from_fn(3, |x| x[0] + 2.0 * x[1]).unwrap();
        let w = wick_power(&u, WickOrder::Square, 1.5);
        for (a, b) in u.values().iter().zip(w.values()) {
            assert!((a * a - 1.5 - b).abs() < 1e-15);
        }
    }
}
