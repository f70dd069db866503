//! Separable discrete Fourier transform on a torus.
//!
//! Plain O(N²) per axis: lattice sizes here stay in the low thousands and
//! exact twiddle indexing (`j·k mod N`) keeps the round-off uniform.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::Complex;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::lattice::Torus;

/// `out[k] = (1/S) Σ_j values[j] e^{−2πi j·k/N}` over the whole torus.
///
/// Returns the real part and the largest absolute imaginary part.
pub(crate) fn inverse_real(values: &[f64], torus: &Torus) -> (Vec<f64>, f64) {
    let mut buf: Vec<Complex<f64>> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let extents = torus.extents();
    let total = buf.len();
    for (axis, &n) in extents.iter().enumerate() {
        let stride: usize = extents[axis + 1..].iter().product();
        let twiddle: Vec<Complex<f64>> = (0..n)
            .map(|m| {
                let a = -2.0 * PI * m as f64 / n as f64;
                Complex::new(a.cos(), a.sin())
            })
            .collect();
        let mut line = vec![Complex::new(0.0, 0.0); n];
        let block = n * stride;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for k in 0..n {
                    let mut acc = Complex::new(0.0, 0.0);
                    for j in 0..n {
                        acc += buf[base + j * stride] * twiddle[(j * k) % n];
                    }
                    line[k] = acc;
                }
                for k in 0..n {
                    buf[base + k * stride] = line[k];
                }
            }
        }
    }
    let scale = 1.0 / total as f64;
    let imag = buf.iter().map(|c| (c.im * scale).abs()).fold(0.0, f64::max);
    (buf.into_iter().map(|c| c.re * scale).collect(), imag)
}
