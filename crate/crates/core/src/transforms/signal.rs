use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::groups::GroupSpec;

/// Complex samples of a function on a group grid, row-major in the
/// parametrization order of the group.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledSignal {
    group: Arc<GroupSpec>,
    values: Vec<Complex64>,
}

impl SampledSignal {
    pub fn new(group: Arc<GroupSpec>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.len() {
            return Err(Error::Dimension {
                expected: group.len(),
                actual: values.len(),
            });
        }
        if values
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::Precondition("signal has non-finite samples".into()));
        }
        Ok(SampledSignal { group, values })
    }

    pub fn zeros(group: Arc<GroupSpec>) -> Self {
        let n = group.len();
        SampledSignal {
            group,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    /// Samples `f` at every grid cell; `f` receives the cell coordinates.
    pub fn from_fn(group: Arc<GroupSpec>, f: impl Fn(&[f64]) -> Complex64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = group.axes().iter().map(|a| a.points()).collect();
        let shape: Vec<usize> = pts.iter().map(Vec::len).collect();
        let total: usize = shape.iter().product();
        let mut idx = vec![0usize; shape.len()];
        let mut coord: Vec<f64> = pts.iter().map(|p| p[0]).collect();
        let mut values = Vec::with_capacity(total);
        for _ in 0..total {
            values.push(f(&coord));
            for ax in (0..shape.len()).rev() {
                idx[ax] += 1;
                if idx[ax] < shape[ax] {
                    coord[ax] = pts[ax][idx[ax]];
                    break;
                }
                idx[ax] = 0;
                coord[ax] = pts[ax][0];
            }
        }
        Self::new(group, values)
    }

    /// Real-valued convenience constructor.
    pub fn from_real_fn(group: Arc<GroupSpec>, f: impl Fn(&[f64]) -> f64) -> Result<Self> {
        Self::from_fn(group, |x| Complex64::new(f(x), 0.0))
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn group_arc(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn shape(&self) -> Vec<usize> {
        self.group.shape()
    }

    /// ∫|f|² dg with the Haar cell measure.
    pub fn l2_norm_sq(&self) -> f64 {
        self.values
            .iter()
            .zip(self.group.haar_cell_measure())
            .map(|(v, w)| v.norm_sqr() * w)
            .sum()
    }

    pub fn scaled(&self, s: Complex64) -> SampledSignal {
        SampledSignal {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// `a·self + b·other` on the same group.
    pub fn combine(
        &self,
        a: Complex64,
        other: &SampledSignal,
        b: Complex64,
    ) -> Result<SampledSignal> {
        if self.group != other.group {
            return Err(Error::Kind("signals live on different groups".into()));
        }
        Ok(SampledSignal {
            group: self.group.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn conj(&self) -> SampledSignal {
        SampledSignal {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }
}
