use super::test_function::TestFunction;
use super::window::Window;
use serde::{Deserialize, Serialize};

/// Finite point configuration in `R^d`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub points: Vec<Vec<f64>>,
}

impl Configuration {
    pub fn new(points: Vec<Vec<f64>>) -> Self {
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `γ_Λ`.
    pub fn restrict(&self, w: &Window) -> Configuration {
        Configuration::new(self.points.iter().filter(|x| w.contains(x)).cloned().collect())
    }

    /// `|γ ∩ Λ|`.
    pub fn count_in(&self, w: &Window) -> usize {
        self.points.iter().filter(|x| w.contains(x)).count()
    }

    /// `⟨γ, φ⟩ = Σ_{x ∈ γ} φ(x)`.
    pub fn pairing(&self, phi: &TestFunction) -> f64 {
        self.points.iter().map(|x| phi.eval(x)).sum()
    }

    pub fn has_duplicates(&self) -> bool {
        let mut sorted: Vec<&Vec<f64>> = self.points.iter().collect();
        sorted.sort_by(|a, b| {
            a.iter().zip(b.iter()).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
        });
        sorted.windows(2).any(|p| p[0] == p[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn restriction_and_pairing() {
        let g = Configuration::new(vec![vec![0.1, 0.1], vec![0.6, 0.2], vec![0.9, 0.9]]);
        let (left, _) = Window::unit(2).split(0, 0.5).unwrap();
        assert_eq!(g.count_in(&left), 1);
        assert_eq!(g.restrict(&left).points, vec![vec![0.1, 0.1]]);
        let phi = TestFunction::step(Window::unit(2), vec![(left, 2.0)]).unwrap();
        assert_eq!(g.pairing(&phi), 2.0);
        assert!(!g.has_duplicates());
        assert!(Configuration::new(vec![vec![0.3], vec![0.1], vec![0.3]]).has_duplicates());
    }
}
