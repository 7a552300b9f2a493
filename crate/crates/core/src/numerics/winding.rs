//! Winding number of a sampled closed curve by phase continuation.

use num_complex::Complex64;

use crate::error::IslError;
use crate::Result;

/// Largest phase jump between consecutive samples before the contour counts
/// as under-resolved (a true jump of π is sign-ambiguous).
const MAX_JUMP: f64 = 0.9 * std::f64::consts::PI;

/// Winding number of the closed curve through `samples` (the segment from the
/// last sample back to the first is included). Fails if any sample is zero or
/// a phase jump is too large to resolve unambiguously.
pub fn winding_number(samples: &[Complex64]) -> Result<i64> {
    if samples.len() < 3 {
        return Err(IslError::InvalidInput(
            "winding number needs at least 3 samples".into(),
        ));
    }
    let scale = samples.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let mut total = 0.0f64;
    for i in 0..samples.len() {
        let a = samples[i];
        let b = samples[(i + 1) % samples.len()];
        if a.norm() <= 1e-14 * scale {
            return Err(IslError::UnderResolvedContour(format!(
                "sample {i} vanishes (|z| = {:.3e}); contour passes through zero",
                a.norm()
            )));
        }
        let jump = (b / a).arg();
        if jump.abs() >= MAX_JUMP {
            return Err(IslError::UnderResolvedContour(format!(
                "phase jump {jump:.3} rad between samples {i} and {}; refine the contour",
                (i + 1) % samples.len()
            )));
        }
        total += jump;
    }
    let turns = total / (2.0 * std::f64::consts::PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 0.25 {
        return Err(IslError::UnderResolvedContour(format!(
            "accumulated phase {total:.6} rad is not close to a whole number of turns"
        )));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_once_around() {
        let samples: Vec<Complex64> = (0..64)
            .map(|i| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / 64.0))
            .collect();
        assert_eq!(winding_number(&samples).unwrap(), 1);
    }

    #[test]
    fn duplicate_endpoint_does_not_double_count() {
        let samples: Vec<Complex64> = (0..=64)
            .map(|i| Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * i as f64 / 64.0))
            .collect();
        assert_eq!(winding_number(&samples).unwrap(), 1);
    }

    #[test]
    fn clockwise_two_turns() {
        let samples: Vec<Complex64> = (0..256)
            .map(|i| Complex64::from_polar(0.5, -4.0 * std::f64::consts::PI * i as f64 / 256.0))
            .collect();
        assert_eq!(winding_number(&samples).unwrap(), -2);
    }

    #[test]
    fn curve_not_enclosing_origin() {
        let samples: Vec<Complex64> = (0..64)
            .map(|i| {
                Complex64::new(3.0, 0.0)
                    + Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / 64.0)
            })
            .collect();
        assert_eq!(winding_number(&samples).unwrap(), 0);
    }

    #[test]
    fn under_resolved_contour_is_refused() {
        // Consecutive jumps of 0.95π are too close to the sign ambiguity at π.
        let samples: Vec<Complex64> = (0..3)
            .map(|i| Complex64::from_polar(1.0, 0.95 * std::f64::consts::PI * i as f64))
            .collect();
        assert!(winding_number(&samples).is_err());
    }

    #[test]
    fn zero_sample_is_refused() {
        let samples = vec![
            Complex64::new(1.0, 0.0),
            Complex64::ZERO,
            Complex64::new(0.0, 1.0),
            Complex64::new(-1.0, 0.0),
        ];
        assert!(winding_number(&samples).is_err());
    }
}
