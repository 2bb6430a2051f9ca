use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Axis-aligned box `[lower, upper)` in `R^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Window {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(Error::InvalidParameter(format!(
                "window bounds of lengths {} and {}",
                lower.len(),
                upper.len()
            )));
        }
        if !lower.iter().zip(&upper).all(|(l, u)| l.is_finite() && u.is_finite() && l < u) {
            return Err(Error::InvalidParameter(format!("window needs lower < upper, got {lower:?} and {upper:?}")));
        }
        Ok(Self { lower, upper })
    }

    /// `[0, 1)^dim`.
    pub fn unit(dim: usize) -> Self {
        Self::new(vec![0.0; dim], vec![1.0; dim]).expect("dim > 0")
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn volume(&self) -> f64 {
        self.lower.iter().zip(&self.upper).map(|(l, u)| u - l).product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && x.iter().zip(self.lower.iter().zip(&self.upper)).all(|(v, (l, u))| l <= v && v < u)
    }

    pub fn contains_window(&self, other: &Window) -> bool {
        other.dim() == self.dim()
            && (0..self.dim()).all(|i| self.lower[i] <= other.lower[i] && other.upper[i] <= self.upper[i])
    }

    pub fn intersection(&self, other: &Window) -> Option<Window> {
        if other.dim() != self.dim() {
            return None;
        }
        let lower: Vec<f64> = (0..self.dim()).map(|i| self.lower[i].max(other.lower[i])).collect();
        let upper: Vec<f64> = (0..self.dim()).map(|i| self.upper[i].min(other.upper[i])).collect();
        Window::new(lower, upper).ok()
    }

    /// Smallest box containing both.
    pub fn hull(&self, other: &Window) -> Result<Window> {
        if other.dim() != self.dim() {
            return Err(Error::InvalidParameter("windows of different dimension".into()));
        }
        let lower = (0..self.dim()).map(|i| self.lower[i].min(other.lower[i])).collect();
        let upper = (0..self.dim()).map(|i| self.upper[i].max(other.upper[i])).collect();
        Window::new(lower, upper)
    }

    /// Cuts along `axis` at `at`, which must lie strictly inside.
    pub fn split(&self, axis: usize, at: f64) -> Result<(Window, Window)> {
        if axis >= self.dim() || !(self.lower[axis] < at && at < self.upper[axis]) {
            return Err(Error::InvalidParameter(format!("cannot split axis {axis} at {at}")));
        }
        let mut left_upper = self.upper.clone();
        left_upper[axis] = at;
        let mut right_lower = self.lower.clone();
        right_lower[axis] = at;
        Ok((
            Window::new(self.lower.clone(), left_upper)?,
            Window::new(right_lower, self.upper.clone())?,
        ))
    }

    /// Point at relative position `u ∈ [0, 1)^d`.
    pub fn at(&self, u: &[f64]) -> Vec<f64> {
        (0..self.dim()).map(|i| self.lower[i] + (self.upper[i] - self.lower[i]) * u[i]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_and_volume() {
        assert!(Window::new(vec![0.0], vec![0.0]).is_err());
        assert!(Window::new(vec![0.0, 1.0], vec![1.0]).is_err());
        let w = Window::new(vec![0.0, -1.0], vec![2.0, 1.0]).unwrap();
        assert_eq!(w.volume(), 4.0);
        assert!(w.contains(&[0.0, -1.0]));
        assert!(!w.contains(&[2.0, 0.0]));
    }

    #[test]
    fn split_intersect_hull() {
        let w = Window::unit(2);
        let (a, b) = w.split(0, 0.25).unwrap();
        assert_eq!(a.volume() + b.volume(), 1.0);
        assert!(a.intersection(&b).is_none());
        assert!(w.contains_window(&a) && !a.contains_window(&w));
        assert_eq!(a.hull(&b).unwrap(), w);
        assert!(w.split(1, 1.0).is_err());
    }
}
