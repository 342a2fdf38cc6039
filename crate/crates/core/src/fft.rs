use num_complex::Complex64;
use rustfft::FftPlanner;

/// In-place d-dimensional FFT on a cube of side `n` stored row-major.
/// The forward transform uses the e^{-i k x} sign; the inverse is unnormalized.
pub fn fft_nd(data: &mut [Complex64], d: usize, n: usize, inverse: bool) {
    assert_eq!(data.len(), n.pow(d as u32));
    let mut planner = FftPlanner::new();
    let fft = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                if stride == 1 {
                    fft.process_with_scratch(&mut data[start..start + n], &mut scratch);
                    continue;
                }
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, v) in line.iter().enumerate() {
                    data[start + i * stride] = *v;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_2d() {
        let n = 5;
        let orig: Vec<Complex64> = (0..n * n)
            .map(|i| Complex64::new(i as f64 * 0.3 - 1.0, (i % 3) as f64))
            .collect();
        let mut data = orig.clone();
        fft_nd(&mut data, 2, n, false);
        fft_nd(&mut data, 2, n, true);
        for (a, b) in data.iter().zip(&orig) {
            assert!((a / (n * n) as f64 - b).norm() < 1e-12);
        }
    }

    #[test]
    fn matches_direct_dft_3d() {
        let n = 3;
        let vals: Vec<Complex64> = (0..27).map(|i| Complex64::new((i * i % 7) as f64, 0.0)).collect();
        let mut data = vals.clone();
        fft_nd(&mut data, 3, n, false);
        for k in 0..27 {
            let kk = [k / 9, (k / 3) % 3, k % 3];
            let mut acc = Complex64::new(0.0, 0.0);
            for x in 0..27 {
                let xx = [x / 9, (x / 3) % 3, x % 3];
                let phase: f64 = (0..3).map(|j| (kk[j] * xx[j]) as f64).sum::<f64>();
                acc += vals[x] * Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * phase / 3.0);
            }
            assert!((acc - data[k]).norm() < 1e-10);
        }
    }
}
