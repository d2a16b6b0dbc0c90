//! Point sets on the unit circle `R/Z`.

use crate::error::{Error, Result};

/// Circle distance between two points of `[0, 1)`.
///
/// This exact expression (including the `d > 0.5` branch) is shared by
/// the brute-force and swept pair counters so their comparisons against a
/// radius are bit-identical.
#[inline]
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    if d > 0.5 {
        1.0 - d
    } else {
        d
    }
}

/// A non-empty multiset of points on the circle, stored as coordinates in
/// `[0, 1)`. Duplicates are allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    values: Vec<f64>,
}

impl PointSet {
    /// Validates that every coordinate is finite and in `[0, 1)`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyPointSet);
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::NonFiniteCoordinate(v));
            }
            if !(0.0..1.0).contains(&v) {
                return Err(Error::CoordinateOutOfRange(v));
            }
        }
        Ok(Self { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    /// Coordinates sorted ascending. Energies and pair counts run over
    /// this canonical order so that permuting the input cannot change
    /// any floating-point result.
    pub fn sorted_values(&self) -> Vec<f64> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_coordinates() {
        assert!(matches!(PointSet::new(vec![]), Err(Error::EmptyPointSet)));
        assert!(matches!(
            PointSet::new(vec![0.2, 1.0]),
            Err(Error::CoordinateOutOfRange(_))
        ));
        assert!(matches!(
            PointSet::new(vec![-0.1]),
            Err(Error::CoordinateOutOfRange(_))
        ));
        assert!(matches!(
            PointSet::new(vec![f64::NAN]),
            Err(Error::NonFiniteCoordinate(_))
        ));
    }

    #[test]
    fn circ_dist_wraps() {
        assert_eq!(circ_dist(0.1, 0.9), 0.19999999999999996);
        assert_eq!(circ_dist(0.0, 0.5), 0.5);
        assert_eq!(circ_dist(0.25, 0.25), 0.0);
        assert_eq!(circ_dist(0.9, 0.1), circ_dist(0.1, 0.9));
        // Never exceeds 1/2.
        for i in 0..100 {
            for j in 0..100 {
                let d = circ_dist(i as f64 / 100.0, j as f64 / 100.0);
                assert!((0.0..=0.5).contains(&d));
            }
        }
    }

    #[test]
    fn sorted_values_is_a_permutation() {
        let p = PointSet::new(vec![0.9, 0.1, 0.5, 0.1]).unwrap();
        assert_eq!(p.sorted_values(), vec![0.1, 0.1, 0.5, 0.9]);
        assert_eq!(p.len(), 4);
    }
}
