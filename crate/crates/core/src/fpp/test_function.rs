use super::window::Window;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Real test function vanishing outside a declared support window.
#[derive(Clone)]
pub enum TestFunction {
    /// `Σ_k c_k 1_{A_k}`; the boxes may overlap, values then add.
    Step { support: Window, pieces: Vec<(Window, f64)> },
    /// An arbitrary callable, cut off outside `support`.
    Smooth { support: Window, f: PointFn },
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Step { support, pieces } => {
                f.debug_struct("Step").field("support", support).field("pieces", pieces).finish()
            }
            TestFunction::Smooth { support, .. } => f.debug_struct("Smooth").field("support", support).finish(),
        }
    }
}

impl TestFunction {
    pub fn zero(support: Window) -> Self {
        TestFunction::Step { support, pieces: Vec::new() }
    }

    pub fn step(support: Window, pieces: Vec<(Window, f64)>) -> Result<Self> {
        for (w, c) in &pieces {
            if !support.contains_window(w) {
                return Err(Error::InvalidParameter(format!("piece {w:?} leaves the support {support:?}")));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParameter(format!("step height {c}")));
            }
        }
        Ok(TestFunction::Step { support, pieces })
    }

    pub fn from_fn<F>(support: Window, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        TestFunction::Smooth { support, f: Arc::new(f) }
    }

    pub fn support(&self) -> &Window {
        match self {
            TestFunction::Step { support, .. } | TestFunction::Smooth { support, .. } => support,
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        if !self.support().contains(x) {
            return 0.0;
        }
        match self {
            TestFunction::Step { pieces, .. } => pieces.iter().filter(|(w, _)| w.contains(x)).map(|(_, c)| c).sum(),
            TestFunction::Smooth { f, .. } => f(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, TestFunction::Step { pieces, .. } if pieces.iter().all(|(_, c)| *c == 0.0))
    }

    /// `self - other`, again a step function when both are.
    pub fn difference(&self, other: &TestFunction) -> Result<TestFunction> {
        let support = self.support().hull(other.support())?;
        match (self, other) {
            (TestFunction::Step { pieces: a, .. }, TestFunction::Step { pieces: b, .. }) => {
                let pieces = a.iter().cloned().chain(b.iter().map(|(w, c)| (w.clone(), -c))).collect();
                TestFunction::step(support, pieces)
            }
            _ => {
                let (p, q) = (self.clone(), other.clone());
                Ok(TestFunction::from_fn(support, move |x| p.eval(x) - q.eval(x)))
            }
        }
    }

    /// Disjoint boxes with the non-zero values of a step function, from the
    /// grid spanned by all piece edges. `None` for smooth functions.
    pub fn cells(&self) -> Option<Vec<(Window, f64)>> {
        let TestFunction::Step { support, pieces } = self else {
            return None;
        };
        if pieces.is_empty() {
            return Some(Vec::new());
        }
        let d = support.dim();
        let edges: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                let mut e: Vec<f64> = pieces.iter().flat_map(|(w, _)| [w.lower()[i], w.upper()[i]]).collect();
                e.sort_by(f64::total_cmp);
                e.dedup();
                e
            })
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; d];
        loop {
            let lower: Vec<f64> = (0..d).map(|i| edges[i][idx[i]]).collect();
            let upper: Vec<f64> = (0..d).map(|i| edges[i][idx[i] + 1]).collect();
            let cell = Window::new(lower, upper).expect("distinct sorted edges");
            let value: f64 =
                pieces.iter().filter(|(w, _)| w.contains_window(&cell)).map(|(_, c)| c).sum();
            if value != 0.0 {
                out.push((cell, value));
            }
            let mut i = 0;
            loop {
                if i == d {
                    return Some(out);
                }
                idx[i] += 1;
                if idx[i] + 1 < edges[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}
