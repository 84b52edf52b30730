use crate::error::AnalysisError;

pub const SBSOD_ITEMS: usize = 15;

/// Mean item score on the 1–7 scale after flipping reverse-keyed items.
pub fn sbsod_score(responses: &[u8], reverse_mask: &[bool]) -> Result<f64, AnalysisError> {
    if responses.len() != SBSOD_ITEMS {
        return Err(AnalysisError::LengthMismatch(responses.len(), SBSOD_ITEMS));
    }
    if reverse_mask.len() != SBSOD_ITEMS {
        return Err(AnalysisError::LengthMismatch(reverse_mask.len(), SBSOD_ITEMS));
    }
    if responses.iter().any(|r| !(1..=7).contains(r)) {
        return Err(AnalysisError::OutOfRange("SBSOD responses must be in 1..=7"));
    }
    let total: u32 = responses
        .iter()
        .zip(reverse_mask)
        .map(|(&r, &rev)| if rev { 8 - r as u32 } else { r as u32 })
        .sum();
    Ok(total as f64 / SBSOD_ITEMS as f64)
}

/// Mean absolute angular error in degrees, wrapped to [0, 180].
pub fn sot_error(responses: &[f64], correct: &[f64]) -> Result<f64, AnalysisError> {
    if responses.len() != correct.len() {
        return Err(AnalysisError::LengthMismatch(responses.len(), correct.len()));
    }
    if responses.is_empty() {
        return Err(AnalysisError::Empty);
    }
    let total: f64 = responses
        .iter()
        .zip(correct)
        .map(|(a, b)| {
            let d = (a - b).abs() % 360.0;
            d.min(360.0 - d)
        })
        .sum();
    Ok(total / responses.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sbsod_examples() {
        assert_eq!(sbsod_score(&[7; 15], &[false; 15]).unwrap(), 7.0);
        let mut mask = [false; 15];
        mask[..7].fill(true);
        assert_eq!(sbsod_score(&[4; 15], &mask).unwrap(), 4.0);
        assert_eq!(sbsod_score(&[7; 15], &[true; 15]).unwrap(), 1.0);
        assert!(matches!(sbsod_score(&[0; 15], &[false; 15]), Err(AnalysisError::OutOfRange(_))));
        assert!(matches!(sbsod_score(&[8; 15], &[false; 15]), Err(AnalysisError::OutOfRange(_))));
        assert!(sbsod_score(&[4; 14], &[false; 15]).is_err());
    }

    #[test]
    fn sot_examples() {
        assert_eq!(sot_error(&[10.0, 350.0], &[0.0, 0.0]).unwrap(), 10.0);
        assert_eq!(sot_error(&[33.0, 120.0], &[33.0, 120.0]).unwrap(), 0.0);
        assert_eq!(sot_error(&[180.0], &[0.0]).unwrap(), 180.0);
        assert_eq!(sot_error(&[-90.0], &[90.0]).unwrap(), 180.0);
        assert_eq!(sot_error(&[725.0], &[0.0]).unwrap(), 5.0);
        assert_eq!(sot_error(&[], &[]), Err(AnalysisError::Empty));
    }
}
