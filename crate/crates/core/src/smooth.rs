//! Quintic smoothstep `s(x) = 6x⁵ − 15x⁴ + 10x³` and its derivatives, clamped
//! to 0 below `x = 0` and 1 above `x = 1`. C² across both joins.

#[inline]
pub fn step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x * x * x * (x * (6.0 * x - 15.0) + 10.0)
    }
}

#[inline]
pub fn step_d1(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        30.0 * x * x * (x - 1.0) * (x - 1.0)
    }
}

#[inline]
pub fn step_d2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        60.0 * x * (x - 1.0) * (2.0 * x - 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_symmetry() {
        assert_eq!(step(0.0), 0.0);
        assert_eq!(step(1.0), 1.0);
        assert!((step(0.5) - 0.5).abs() < 1e-15);
        for k in 1..100 {
            let x = k as f64 / 100.0;
            assert!((step(x) + step(1.0 - x) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for k in 1..20 {
            let x = k as f64 / 20.0;
            let d1 = (step(x + h) - step(x - h)) / (2.0 * h);
            let d2 = (step_d1(x + h) - step_d1(x - h)) / (2.0 * h);
            assert!((d1 - step_d1(x)).abs() < 1e-8);
            assert!((d2 - step_d2(x)).abs() < 1e-7);
        }
    }
}
