//! Iterative radix-2 FFT for power-of-two lengths.
//!
//! Grids in this crate always have power-of-two point counts, so a single
//! decimation-in-time kernel with a precomputed twiddle table covers every
//! transform. The forward transform uses the sign convention
//! X_k = sum_j x_j e^{-2 pi i j k / n}; the inverse includes the 1/n factor,
//! matching the continuum pair F u(xi) = int e^{-i x xi} u dx on the torus.

use crate::C64;
use alloc::vec;
use alloc::vec::Vec;

/// Precomputed plan for one transform length.
pub struct FftPlan {
    n: usize,
    // e^{-2 pi i j / n} for j < n/2
    twiddles: Vec<C64>,
    bitrev: Vec<u32>,
}

impl FftPlan {
    /// `n` must be a power of two (n >= 1).
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "FFT length must be a power of two");
        let mut twiddles = Vec::with_capacity(n / 2);
        for j in 0..n / 2 {
            let angle = -2.0 * core::f64::consts::PI * j as f64 / n as f64;
            twiddles.push(C64::new(libm::cos(angle), libm::sin(angle)));
        }
        let bits = n.trailing_zeros();
        let mut bitrev = vec![0u32; n];
        for (i, r) in bitrev.iter_mut().enumerate() {
            *r = (i as u32).reverse_bits() >> (32 - bits.max(1)) as u32;
        }
        if n == 1 {
            bitrev[0] = 0;
        }
        Self { n, twiddles, bitrev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn permute(&self, buf: &mut [C64]) {
        for i in 0..self.n {
            let j = self.bitrev[i] as usize;
            if i < j {
                buf.swap(i, j);
            }
        }
    }

    fn butterflies(&self, buf: &mut [C64], conj: bool) {
        let n = self.n;
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let step = n / len;
            let mut start = 0;
            while start < n {
                for k in 0..half {
                    let mut w = self.twiddles[k * step];
                    if conj {
                        w = w.conj();
                    }
                    let lo = start + k;
                    let hi = lo + half;
                    let t = buf[hi] * w;
                    buf[hi] = buf[lo] - t;
                    buf[lo] += t;
                }
                start += len;
            }
            len <<= 1;
        }
    }

    /// In-place forward DFT (no normalization).
    pub fn forward(&self, buf: &mut [C64]) {
        debug_assert_eq!(buf.len(), self.n);
        if self.n == 1 {
            return;
        }
        self.permute(buf);
        self.butterflies(buf, false);
    }

    /// In-place inverse DFT, scaled by 1/n so that inverse(forward(x)) = x.
    pub fn inverse(&self, buf: &mut [C64]) {
        debug_assert_eq!(buf.len(), self.n);
        if self.n == 1 {
            return;
        }
        self.permute(buf);
        self.butterflies(buf, true);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_dft(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                let mut s = C64::new(0.0, 0.0);
                for (j, &v) in x.iter().enumerate() {
                    let ang = -2.0 * core::f64::consts::PI * (j * k % n) as f64 / n as f64;
                    s += v * C64::new(libm::cos(ang), libm::sin(ang));
                }
                s
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        for n in [1usize, 2, 4, 8, 32] {
            let x: Vec<C64> = (0..n)
                .map(|i| C64::new((i as f64).sin() + 0.3, (i as f64 * 0.7).cos()))
                .collect();
            let mut y = x.clone();
            let plan = FftPlan::new(n);
            plan.forward(&mut y);
            let want = naive_dft(&x);
            for (a, b) in y.iter().zip(&want) {
                assert!((a - b).norm() < 1e-10 * (n as f64));
            }
        }
    }

    #[test]
    fn roundtrip() {
        let n = 1024;
        let x: Vec<C64> = (0..n)
            .map(|i| C64::new((0.01 * i as f64).sin(), (0.03 * i as f64).cos()))
            .collect();
        let mut y = x.clone();
        let plan = FftPlan::new(n);
        plan.forward(&mut y);
        plan.inverse(&mut y);
        let max: f64 = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(max < 1e-12);
    }

    #[test]
    fn pure_mode_lands_on_single_bin() {
        let n = 64;
        let k0 = 5usize;
        let x: Vec<C64> = (0..n)
            .map(|j| {
                let ang = 2.0 * core::f64::consts::PI * (j * k0) as f64 / n as f64;
                C64::new(libm::cos(ang), libm::sin(ang))
            })
            .collect();
        let mut y = x.clone();
        FftPlan::new(n).forward(&mut y);
        for (k, v) in y.iter().enumerate() {
            if k == k0 {
                assert!((v.re - n as f64).abs() < 1e-9 && v.im.abs() < 1e-9);
            } else {
                assert!(v.norm() < 1e-9);
            }
        }
    }
}
