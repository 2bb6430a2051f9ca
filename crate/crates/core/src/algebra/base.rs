use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Largest atom count accepted, to keep enumeration feasible.
pub const M_MAX: usize = 12;

/// Finite atom set with positive masses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteBaseSpace {
    labels: Vec<String>,
    masses: Vec<f64>,
}

impl DiscreteBaseSpace {
    /// Atoms labelled `x0, x1, ...`.
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        let labels = (0..masses.len()).map(|i| format!("x{i}")).collect();
        Self::with_labels(labels, masses)
    }

    pub fn with_labels(labels: Vec<String>, masses: Vec<f64>) -> Result<Self> {
        if masses.is_empty() || masses.len() > M_MAX {
            return Err(Error::InvalidParameter(format!("{} atoms, expected 1..={M_MAX}", masses.len())));
        }
        if labels.len() != masses.len() {
            return Err(Error::InvalidParameter("one label per atom".into()));
        }
        if !masses.iter().all(|m| *m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("masses must be positive, got {masses:?}")));
        }
        Ok(Self { labels, masses })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    /// `⟨ψ, φ⟩_μ = Σ ψ_i φ_i μ_i`, bilinear.
    pub fn pairing(&self, psi: &DiscreteField, phi: &DiscreteField) -> Complex64 {
        (0..self.len()).map(|i| psi.0[i] * phi.0[i] * self.masses[i]).sum()
    }

    /// `Σ |f_i|^p μ_i`.
    pub fn lp_norm_pow(&self, f: &DiscreteField, p: f64) -> f64 {
        (0..self.len()).map(|i| f.0[i].norm().powf(p) * self.masses[i]).sum()
    }
}

/// Complex function on the atoms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteField(pub Vec<Complex64>);

impl DiscreteField {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::InvalidParameter("field values must be finite".into()));
        }
        Ok(Self(values))
    }

    pub fn real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conj(&self) -> Self {
        Self(self.0.iter().map(|v| v.conj()).collect())
    }
}

/// One-particle operator: an `M × M` matrix acting on fields.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseOperator(pub DMatrix<Complex64>);

impl BaseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidParameter(format!("{}x{} operator", matrix.nrows(), matrix.ncols())));
        }
        Ok(Self(matrix))
    }

    pub fn identity(m: usize) -> Self {
        Self(DMatrix::identity(m, m))
    }

    pub fn zero(m: usize) -> Self {
        Self(DMatrix::zeros(m, m))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn apply(&self, f: &DiscreteField) -> DiscreteField {
        let v = &self.0 * DVector::from_column_slice(&f.0);
        DiscreteField(v.iter().copied().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(DiscreteBaseSpace::new(vec![]).is_err());
        assert!(DiscreteBaseSpace::new(vec![1.0, 0.0]).is_err());
        assert!(DiscreteBaseSpace::new(vec![1.0; 13]).is_err());
        let b = DiscreteBaseSpace::new(vec![1.0, 2.0]).unwrap();
        assert_eq!(b.labels(), ["x0", "x1"]);
        assert_eq!(b.total_mass(), 3.0);
    }

    #[test]
    fn operator_action_and_pairing() {
        let b = DiscreteBaseSpace::new(vec![1.0, 2.0]).unwrap();
        let f = DiscreteField::real(&[1.0, 3.0]).unwrap();
        let a = BaseOperator::new(DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)))).unwrap();
        assert_eq!(a.apply(&f), DiscreteField::real(&[3.0, 1.0]).unwrap());
        assert_eq!(b.pairing(&f, &f), Complex64::new(19.0, 0.0));
        assert_eq!(b.lp_norm_pow(&f, 2.0), 19.0);
    }
}
