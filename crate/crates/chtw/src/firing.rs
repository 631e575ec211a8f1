//! Firing semantics: excess fields, Heaviside indicators, and partial and
//! integral firing fields.
//!
//! All comparisons are exact floating comparisons against the strict
//! Heaviside step (`theta(0) = 0`): a resource exactly at a threshold does
//! not enable firing, and a blocking resource exactly at its threshold does
//! block. Every function here is pure; cells are independent and can be
//! evaluated in any order.

use thiserror::Error;

use crate::model::HKind;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FiringError {
    #[error("NON_FINITE_INPUT: {0}")]
    NonFiniteInput(String),
    #[error("SHAPE_MISMATCH: {0}")]
    ShapeMismatch(String),
}

/// Strict Heaviside step: 0 for `x <= 0`, 1 for `x > 0`.
pub fn heaviside(x: f64) -> Result<u8, FiringError> {
    if !x.is_finite() {
        return Err(FiringError::NonFiniteInput(format!(
            "heaviside of non-finite value {x}"
        )));
    }
    Ok(u8::from(x > 0.0))
}

/// Excess fields and the partial firing they induce for one H-carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringIntermediates {
    /// Mark excess over the carrier threshold, m - h (or m - b, m - a).
    pub delta: Vec<f64>,
    /// Mark excess over the target's uptake intensity, m - r.
    pub delta_r: Vec<f64>,
    /// Partial firing field, binary.
    pub partial: Vec<u8>,
}

/// Partial firing of one T-brane with one source C-brane, with the excess
/// fields that produced it.
///
/// normal:      theta(m - h) * theta(m - r)
/// blocking:    theta(-(m - b))
/// associative: theta(m - a)
pub fn partial_firing_detail(
    kind: HKind,
    m: &[f64],
    threshold: &[f64],
    rate: &[f64],
) -> Result<FiringIntermediates, FiringError> {
    if m.len() != threshold.len() || m.len() != rate.len() {
        return Err(FiringError::ShapeMismatch(format!(
            "mark/threshold/rate lengths differ: {} / {} / {}",
            m.len(),
            threshold.len(),
            rate.len()
        )));
    }
    let mut delta = Vec::with_capacity(m.len());
    let mut delta_r = Vec::with_capacity(m.len());
    let mut partial = Vec::with_capacity(m.len());
    for i in 0..m.len() {
        let d = m[i] - threshold[i];
        let dr = m[i] - rate[i];
        let bit = match kind {
            HKind::Normal => heaviside(d)? * heaviside(dr)?,
            HKind::Blocking => heaviside(-d)?,
            HKind::Associative => heaviside(d)?,
        };
        delta.push(d);
        delta_r.push(dr);
        partial.push(bit);
    }
    Ok(FiringIntermediates {
        delta,
        delta_r,
        partial,
    })
}

/// Partial firing field of one carrier. The rate array is ignored for
/// blocking and associative carriers (they never take up resource).
pub fn partial_firing(
    kind: HKind,
    m: &[f64],
    threshold: &[f64],
    rate: &[f64],
) -> Result<Vec<u8>, FiringError> {
    partial_firing_detail(kind, m, threshold, rate).map(|d| d.partial)
}

/// Binary firing field of one T-brane over its grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FiringField {
    pub tbrane: String,
    pub values: Vec<u8>,
}

impl FiringField {
    /// Number of cells in which the T-brane fires.
    pub fn fired_cells(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0).count()
    }
}

/// Integral firing: the pointwise product of all partial firing fields of a
/// T-brane. With no incoming H-carriers the empty product makes the brane
/// fire everywhere.
pub fn integral_firing(
    tbrane: &str,
    cells: usize,
    partials: &[Vec<u8>],
) -> Result<FiringField, FiringError> {
    let mut values = vec![1u8; cells];
    for partial in partials {
        if partial.len() != cells {
            return Err(FiringError::ShapeMismatch(format!(
                "partial firing field has {} cells, T-brane '{tbrane}' grid has {cells}",
                partial.len()
            )));
        }
        for (v, p) in values.iter_mut().zip(partial) {
            *v &= p;
        }
    }
    Ok(FiringField {
        tbrane: tbrane.to_string(),
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heaviside_is_strict() {
        assert_eq!(heaviside(0.0).unwrap(), 0);
        assert_eq!(heaviside(-0.0).unwrap(), 0);
        assert_eq!(heaviside(-1.5).unwrap(), 0);
        assert_eq!(heaviside(1e-9).unwrap(), 1);
        assert_eq!(heaviside(7.0).unwrap(), 1);
    }

    #[test]
    fn heaviside_rejects_non_finite() {
        assert!(heaviside(f64::NAN).is_err());
        assert!(heaviside(f64::INFINITY).is_err());
    }

    #[test]
    fn normal_partial_firing() {
        let p = partial_firing(HKind::Normal, &[5.0], &[1.0], &[2.0]).unwrap();
        assert_eq!(p, vec![1]);
        // exactly at the threshold boundary: no firing
        let p = partial_firing(HKind::Normal, &[1.0], &[1.0], &[0.5]).unwrap();
        assert_eq!(p, vec![0]);
        // above threshold but not above the uptake intensity
        let p = partial_firing(HKind::Normal, &[2.0], &[1.0], &[2.0]).unwrap();
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn blocking_partial_firing() {
        assert_eq!(
            partial_firing(HKind::Blocking, &[3.0], &[5.0], &[0.0]).unwrap(),
            vec![1]
        );
        // exactly at the blocking threshold: blocked
        assert_eq!(
            partial_firing(HKind::Blocking, &[5.0], &[5.0], &[0.0]).unwrap(),
            vec![0]
        );
        assert_eq!(
            partial_firing(HKind::Blocking, &[6.0], &[5.0], &[0.0]).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn associative_partial_firing() {
        assert_eq!(
            partial_firing(HKind::Associative, &[6.0], &[2.0], &[0.0]).unwrap(),
            vec![1]
        );
        // rate is ignored for associative carriers
        assert_eq!(
            partial_firing(HKind::Associative, &[6.0], &[2.0], &[100.0]).unwrap(),
            vec![1]
        );
        assert_eq!(
            partial_firing(HKind::Associative, &[2.0], &[2.0], &[0.0]).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn intermediates_expose_excess_fields() {
        let d = partial_firing_detail(HKind::Normal, &[5.0, 1.0], &[1.0, 1.0], &[2.0, 0.5]).unwrap();
        assert_eq!(d.delta, vec![4.0, 0.0]);
        assert_eq!(d.delta_r, vec![3.0, 0.5]);
        assert_eq!(d.partial, vec![1, 0]);
    }

    #[test]
    fn integral_is_pointwise_product() {
        let f = integral_firing("tp", 3, &[vec![1, 1, 0], vec![1, 0, 1]]).unwrap();
        assert_eq!(f.values, vec![1, 0, 0]);
        assert_eq!(f.fired_cells(), 1);
    }

    #[test]
    fn empty_product_fires_everywhere() {
        let f = integral_firing("tp", 4, &[]).unwrap();
        assert_eq!(f.values, vec![1; 4]);
    }

    #[test]
    fn shape_mismatch_reported() {
        assert!(partial_firing(HKind::Normal, &[1.0, 2.0], &[1.0], &[1.0, 1.0]).is_err());
        assert!(integral_firing("tp", 3, &[vec![1, 1]]).is_err());
    }
}
