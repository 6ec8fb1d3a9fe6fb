use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::Result;
use crate::quad::PoleSequence;

pub type Evaluator = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;

/// A lazily evaluated complex function together with the analytic data the
/// integrators need: declared pole sequences and the exponential growth
/// rate `ε` in `|f(x + iy)| <= C e^{ε |x|}`.
#[derive(Clone)]
pub struct FunctionHandle {
    eval: Evaluator,
    pub poles: Vec<PoleSequence>,
    pub growth_rate: f64,
    /// Power `p` with `|f(x)| = O(|x|^{-p})`, for integrands without exponential decay.
    pub algebraic_decay: Option<f64>,
    /// Interval of `Im z` known to be free of poles.
    pub pole_free_strip: (f64, f64),
}

impl fmt::Debug for FunctionHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionHandle")
            .field("poles", &self.poles)
            .field("growth_rate", &self.growth_rate)
            .field("algebraic_decay", &self.algebraic_decay)
            .field("pole_free_strip", &self.pole_free_strip)
            .finish()
    }
}

impl FunctionHandle {
    pub fn new<F>(f: F, growth_rate: f64) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        FunctionHandle {
            eval: Arc::new(f),
            poles: Vec::new(),
            growth_rate,
            algebraic_decay: None,
            pole_free_strip: (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// An entire function that cannot fail.
    pub fn entire<F>(f: F, growth_rate: f64) -> Self
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self::new(move |z| Ok(f(z)), growth_rate)
    }

    pub fn with_poles(mut self, poles: Vec<PoleSequence>) -> Self {
        self.poles = poles;
        self
    }

    pub fn with_algebraic_decay(mut self, p: f64) -> Self {
        self.algebraic_decay = Some(p);
        self
    }

    pub fn with_strip(mut self, lo: f64, hi: f64) -> Self {
        self.pole_free_strip = (lo, hi);
        self
    }

    #[inline]
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        (self.eval)(z)
    }

    pub fn evaluator(&self) -> Evaluator {
        self.eval.clone()
    }

    /// `z ↦ conj(f(conj z))`.
    pub fn reflected(&self) -> FunctionHandle {
        let e = self.eval.clone();
        let poles = self.poles.iter().map(|p| p.conjugated()).collect();
        let (lo, hi) = self.pole_free_strip;
        FunctionHandle {
            eval: Arc::new(move |z: Complex64| Ok(e(z.conj())?.conj())),
            poles,
            growth_rate: self.growth_rate,
            algebraic_decay: self.algebraic_decay,
            pole_free_strip: (-hi, -lo),
        }
    }

    /// Pointwise product; growth rates add.
    pub fn mul(&self, other: &FunctionHandle) -> FunctionHandle {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut poles = self.poles.clone();
        poles.extend(other.poles.iter().cloned());
        FunctionHandle {
            eval: Arc::new(move |z| Ok(a(z)? * b(z)?)),
            poles,
            growth_rate: self.growth_rate + other.growth_rate,
            algebraic_decay: match (self.algebraic_decay, other.algebraic_decay) {
                (Some(p), Some(q)) => Some(p + q),
                (Some(p), None) | (None, Some(p)) => Some(p),
                _ => None,
            },
            pole_free_strip: (
                self.pole_free_strip.0.max(other.pole_free_strip.0),
                self.pole_free_strip.1.min(other.pole_free_strip.1),
            ),
        }
    }
}
