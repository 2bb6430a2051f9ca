use super::window::Window;
use crate::error::{Error, Result};
use std::fmt;
use std::sync::Arc;

type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Relative change at which midpoint refinement of `μ(Λ)` stops.
pub const MASS_REL_TOL: f64 = 1e-9;

/// Largest number of midpoint cells tried before giving up.
const MAX_CELLS: usize = 1 << 24;

/// Intensity measure `μ(dx) = ρ(x) dx` with a declared bound `sup ρ`.
#[derive(Clone)]
pub struct IntensityMeasure {
    density: Density,
}

#[derive(Clone)]
enum Density {
    Constant(f64),
    Function { f: DensityFn, sup: f64 },
}

impl fmt::Debug for IntensityMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.density {
            Density::Constant(c) => write!(f, "IntensityMeasure::Constant({c})"),
            Density::Function { sup, .. } => write!(f, "IntensityMeasure::Function {{ sup: {sup} }}"),
        }
    }
}

impl IntensityMeasure {
    pub fn constant(rho: f64) -> Result<Self> {
        if !(rho >= 0.0 && rho.is_finite()) {
            return Err(Error::InvalidParameter(format!("density {rho} must be finite and non-negative")));
        }
        Ok(Self { density: Density::Constant(rho) })
    }

    /// `ρ` must satisfy `0 <= ρ <= sup`; violations are caught while
    /// sampling.
    pub fn from_fn<F>(f: F, sup: f64) -> Result<Self>
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        if !(sup > 0.0 && sup.is_finite()) {
            return Err(Error::InvalidParameter(format!("declared sup {sup} must be finite and positive")));
        }
        Ok(Self { density: Density::Function { f: Arc::new(f), sup } })
    }

    pub fn density(&self, x: &[f64]) -> f64 {
        match &self.density {
            Density::Constant(c) => *c,
            Density::Function { f, .. } => f(x),
        }
    }

    pub fn sup(&self) -> f64 {
        match &self.density {
            Density::Constant(c) => *c,
            Density::Function { sup, .. } => *sup,
        }
    }

    pub fn constant_value(&self) -> Option<f64> {
        match self.density {
            Density::Constant(c) => Some(c),
            Density::Function { .. } => None,
        }
    }

    /// `μ(Λ)`: closed form for a constant density, otherwise the midpoint
    /// rule on `m^d` cells with `m` doubling, Richardson-extrapolated, until
    /// two successive values agree to [`MASS_REL_TOL`].
    pub fn mass(&self, w: &Window) -> Result<f64> {
        match self.density {
            Density::Constant(c) => Ok(c * w.volume()),
            Density::Function { .. } => self.integrate(w, |_| 1.0),
        }
    }

    /// `∫_Λ g dμ` by the same refinement as [`IntensityMeasure::mass`].
    pub fn integrate<T, G>(&self, w: &Window, g: G) -> Result<T>
    where
        T: Copy + std::ops::Add<Output = T> + std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + Norm,
        G: Fn(&[f64]) -> T,
    {
        let d = w.dim();
        let mut m = 2usize;
        let mut prev_mid: Option<T> = None;
        let mut prev_extra: Option<T> = None;
        while m.checked_pow(d as u32).is_some_and(|c| c <= MAX_CELLS) {
            let mid = midpoint(w, m, |x| g(x) * self.density(x));
            if let Some(pm) = prev_mid {
                let extra = mid + (mid - pm) * (1.0 / 3.0);
                if let Some(pe) = prev_extra {
                    if (extra - pe).norm() <= MASS_REL_TOL * extra.norm() {
                        return Ok(extra);
                    }
                }
                prev_extra = Some(extra);
            }
            prev_mid = Some(mid);
            m *= 2;
        }
        Err(Error::Quadrature(format!(
            "midpoint refinement on a {d}-dimensional window did not settle to {MASS_REL_TOL:e}"
        )))
    }
}

/// Magnitude used in the convergence test of [`IntensityMeasure::integrate`].
pub trait Norm {
    fn norm(&self) -> f64;
}

impl Norm for f64 {
    fn norm(&self) -> f64 {
        self.abs()
    }
}

impl Norm for num_complex::Complex64 {
    fn norm(&self) -> f64 {
        num_complex::Complex64::norm(*self)
    }
}

fn midpoint<T, G>(w: &Window, m: usize, g: G) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    G: Fn(&[f64]) -> T,
{
    let d = w.dim();
    let cells = m.pow(d as u32);
    let mut idx = vec![0usize; d];
    let mut u = vec![0.0; d];
    let mut sum: Option<T> = None;
    for _ in 0..cells {
        for i in 0..d {
            u[i] = (idx[i] as f64 + 0.5) / m as f64;
        }
        let v = g(&w.at(&u));
        sum = Some(match sum {
            Some(s) => s + v,
            None => v,
        });
        for slot in idx.iter_mut() {
            *slot += 1;
            if *slot < m {
                break;
            }
            *slot = 0;
        }
    }
    sum.expect("at least one cell") * (w.volume() / cells as f64)
}
