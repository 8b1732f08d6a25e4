use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place forward DFT (`e^{-2πi jk/n}`, unnormalized) along one axis of a
/// row-major array with the given shape.
pub fn fft_along_axis(data: &mut [Complex64], shape: &[usize], axis: usize) {
    transform_along_axis(data, shape, axis, false);
}

/// In-place inverse DFT (`e^{+2πi jk/n}`, unnormalized) along one axis.
pub fn ifft_along_axis(data: &mut [Complex64], shape: &[usize], axis: usize) {
    transform_along_axis(data, shape, axis, true);
}

fn transform_along_axis(data: &mut [Complex64], shape: &[usize], axis: usize, inverse: bool) {
    let n = shape[axis];
    let inner: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    debug_assert_eq!(outer * n * inner, data.len());
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    if inner == 1 {
        fft.process(data);
        return;
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for o in 0..outer {
        let base = o * n * inner;
        for i in 0..inner {
            for (k, v) in line.iter_mut().enumerate() {
                *v = data[base + k * inner + i];
            }
            fft.process(&mut line);
            for (k, v) in line.iter().enumerate() {
                data[base + k * inner + i] = *v;
            }
        }
    }
}

/// Integer frequency index of FFT-shifted position `q` for length `n`.
pub fn shifted_index(q: usize, n: usize) -> i64 {
    q as i64 - (n / 2) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_fft_matches_naive_dft() {
        let shape = [3, 5, 4];
        let data: Vec<Complex64> = (0..60)
            .map(|k| Complex64::new((k as f64 * 0.37).sin(), (k as f64 * 0.11).cos()))
            .collect();
        for axis in 0..3 {
            let mut got = data.clone();
            fft_along_axis(&mut got, &shape, axis);
            let strides = [20, 4, 1];
            for (idx, want) in got.iter().enumerate() {
                let coords = [idx / 20, (idx / 4) % 5, idx % 4];
                let n = shape[axis];
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let mut c = coords;
                    c[axis] = j;
                    let src = c[0] * strides[0] + c[1] * strides[1] + c[2];
                    let ang = -2.0 * std::f64::consts::PI * (j * coords[axis]) as f64 / n as f64;
                    acc += data[src] * Complex64::from_polar(1.0, ang);
                }
                assert!((acc - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let shape = [8, 6];
        let data: Vec<Complex64> = (0..48)
            .map(|k| Complex64::new(k as f64, -(k as f64)))
            .collect();
        let mut w = data.clone();
        fft_along_axis(&mut w, &shape, 1);
        ifft_along_axis(&mut w, &shape, 1);
        for (a, b) in w.iter().zip(&data) {
            assert!((a / 6.0 - b).norm() < 1e-12);
        }
    }
}
