//! Radix-2 complex FFT.
//!
//! Grids in this crate always have a power-of-two number of samples, so a
//! plain iterative Cooley-Tukey transform covers every caller. Twiddle
//! factors are evaluated with direct trigonometric calls (no recurrence
//! accumulation) to keep rounding at the few-ulp level; the forward and
//! inverse passes are exact inverses of each other up to that rounding.

use alloc::vec::Vec;

use num_complex::Complex64;
// With std the inherent f64 methods win and this import goes unused.
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// In-place FFT. `buf.len()` must be a power of two.
///
/// Forward: `X_m = Σ_j x_j e^{-2πi jm/n}`. Inverse applies the conjugate
/// kernel and divides by `n`, so `inverse(forward(x)) == x` up to rounding.
pub fn fft_in_place(buf: &mut [Complex64], dir: Direction) {
    let n = buf.len();
    assert!(n.is_power_of_two(), "FFT length must be a power of two");
    if n <= 1 {
        return;
    }

    // Bit-reversal permutation.
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }

    let sign = match dir {
        Direction::Forward => -1.0,
        Direction::Inverse => 1.0,
    };

    // Twiddle table for the full length; stage `len` uses stride n/len.
    let half = n / 2;
    let mut twiddle = Vec::with_capacity(half);
    for k in 0..half {
        let angle = sign * 2.0 * core::f64::consts::PI * (k as f64) / (n as f64);
        twiddle.push(Complex64::new(angle.cos(), angle.sin()));
    }

    let mut len = 2;
    while len <= n {
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..len / 2 {
                let w = twiddle[k * stride];
                let a = buf[start + k];
                let b = buf[start + k + len / 2] * w;
                buf[start + k] = a + b;
                buf[start + k + len / 2] = a - b;
            }
        }
        len <<= 1;
    }

    if dir == Direction::Inverse {
        let scale = 1.0 / n as f64;
        for z in buf.iter_mut() {
            *z *= scale;
        }
    }
}

/// Convenience wrapper returning a new buffer.
pub fn fft(input: &[Complex64], dir: Direction) -> Vec<Complex64> {
    let mut buf = input.to_vec();
    fft_in_place(&mut buf, dir);
    buf
}
