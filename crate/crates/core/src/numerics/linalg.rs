use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense row-major complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Configuration(
                "matrix dimensions must be positive".into(),
            ));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Precondition("matrix has non-finite entries".into()));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension {
                expected: self.cols,
                actual: other.rows,
            });
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.data[r * self.cols + c].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Entrywise `a*self + b*other`; shapes must agree.
    pub fn axpby(
        &self,
        a: Complex64,
        other: &ComplexMatrix,
        b: Complex64,
    ) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension {
                expected: self.rows * self.cols,
                actual: other.rows * other.cols,
            });
        }
        Ok(ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Squared Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm_sq(m: &ComplexMatrix) -> f64 {
    m.data.iter().map(|z| z.norm_sqr()).sum()
}

/// Householder reflector `I - 2 v v* / (v* v)`; unitary and Hermitian.
pub fn householder(v: &[Complex64]) -> ComplexMatrix {
    let n = v.len();
    let vv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    let mut m = ComplexMatrix::identity(n);
    if vv == 0.0 {
        return m;
    }
    for r in 0..n {
        for c in 0..n {
            let delta = v[r] * v[c].conj() * (2.0 / vv);
            m.data[r * n + c] -= delta;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hs_norm_examples() {
        assert_eq!(hs_norm_sq(&ComplexMatrix::identity(2)), 2.0);
        assert_eq!(hs_norm_sq(&ComplexMatrix::zeros(3, 2)), 0.0);
        let ones = ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0); 4]).unwrap();
        assert_eq!(hs_norm_sq(&ones), 4.0);
    }

    #[test]
    fn hs_norm_is_sum_of_column_norms() {
        let m = ComplexMatrix::from_vec(
            2,
            3,
            (0..6).map(|k| c(k as f64, -(k as f64) / 2.0)).collect(),
        )
        .unwrap();
        let mut cols = 0.0;
        for j in 0..3 {
            let mut e = ComplexMatrix::zeros(3, 1);
            e.set(j, 0, c(1.0, 0.0));
            cols += hs_norm_sq(&m.matmul(&e).unwrap());
        }
        assert!((cols - hs_norm_sq(&m)).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_finite_entries() {
        let err = ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err =
            ComplexMatrix::from_vec(1, 2, vec![c(f64::INFINITY, 0.0), c(0.0, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn householder_is_unitary() {
        let v = vec![c(1.0, 2.0), c(-0.5, 0.25), c(0.0, 1.0)];
        let h = householder(&v);
        let p = h.adjoint().matmul(&h).unwrap();
        let diff = p
            .axpby(c(1.0, 0.0), &ComplexMatrix::identity(3), c(-1.0, 0.0))
            .unwrap();
        assert!(diff.max_abs() < 1e-14);
    }

    #[test]
    fn hs_norm_is_unitarily_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(2..9);
            let m = ComplexMatrix::from_vec(
                n,
                n,
                (0..n * n)
                    .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                    .collect(),
            )
            .unwrap();
            let v: Vec<Complex64> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let w: Vec<Complex64> = (0..n)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let u = householder(&v).matmul(&householder(&w)).unwrap();
            let base = hs_norm_sq(&m);
            let left = hs_norm_sq(&u.matmul(&m).unwrap());
            let right = hs_norm_sq(&m.matmul(&u).unwrap());
            assert!((left - base).abs() <= 1e-10 * base);
            assert!((right - base).abs() <= 1e-10 * base);
        }
    }
}
