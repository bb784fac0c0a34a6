use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::{self, Direction};
use crate::grid::ComplexGrid;

/// Which kernel produced a transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformPath {
    /// Radix-2 Cooley-Tukey along both axes.
    Radix2,
    /// Direct double sum; used whenever a dimension is not a power of two.
    Oracle,
}

/// `exp(sign * 2*pi*i*k/n)` for `k in 0..n`.
fn roots(n: usize, sign: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let angle = sign * 2.0 * PI * k as f64 / n as f64;
            Complex64::new(libm::cos(angle), libm::sin(angle))
        })
        .collect()
}

fn direct_sum(g: &ComplexGrid, sign: f64) -> ComplexGrid {
    let (m, n) = g.shape();
    let row_roots = roots(m, sign);
    let col_roots = roots(n, sign);
    ComplexGrid::build(m, n, |u, v| {
        let mut acc = Complex64::new(0.0, 0.0);
        for x in 0..m {
            let wr = row_roots[(u * x) % m];
            for y in 0..n {
                acc += g.get(x, y) * wr * col_roots[(v * y) % n];
            }
        }
        acc
    })
}

/// Reference forward DFT by the direct `O(M^2 N^2)` double sum:
/// `F(u,v) = sum_{x,y} g(x,y) exp(-2*pi*i*(ux/M + vy/N))`.
pub fn dft2_oracle(g: &ComplexGrid) -> ComplexGrid {
    direct_sum(g, -1.0)
}

/// Reference inverse DFT, scaled by `1/(MN)`.
pub fn idft2_oracle(spectrum: &ComplexGrid) -> ComplexGrid {
    let scale = 1.0 / spectrum.len() as f64;
    direct_sum(spectrum, 1.0).map(|z| z * scale)
}

fn fast_path(g: &ComplexGrid) -> bool {
    g.rows().is_power_of_two() && g.cols().is_power_of_two()
}

/// Forward transform, reporting which kernel ran.
pub fn fft2_with_path(g: &ComplexGrid) -> (ComplexGrid, TransformPath) {
    if !fast_path(g) {
        return (dft2_oracle(g), TransformPath::Oracle);
    }
    let (m, n) = g.shape();
    let mut data = g.as_slice().to_vec();
    fft::transform_2d(m, n, &mut data, Direction::Forward);
    (ComplexGrid::from_raw(m, n, data), TransformPath::Radix2)
}

/// Inverse transform (scaled by `1/(MN)`), reporting which kernel ran.
pub fn ifft2_with_path(spectrum: &ComplexGrid) -> (ComplexGrid, TransformPath) {
    if !fast_path(spectrum) {
        return (idft2_oracle(spectrum), TransformPath::Oracle);
    }
    let (m, n) = spectrum.shape();
    let mut data = spectrum.as_slice().to_vec();
    fft::transform_2d(m, n, &mut data, Direction::Inverse);
    let scale = 1.0 / (m * n) as f64;
    data.iter_mut().for_each(|z| *z *= scale);
    (ComplexGrid::from_raw(m, n, data), TransformPath::Radix2)
}

/// Forward transform; radix-2 for power-of-two shapes, otherwise the oracle.
pub fn fft2(g: &ComplexGrid) -> ComplexGrid {
    fft2_with_path(g).0
}

/// Inverse of [`fft2`].
pub fn ifft2(spectrum: &ComplexGrid) -> ComplexGrid {
    ifft2_with_path(spectrum).0
}

/// `f(2x, 2y) = g(x, y)`, zero elsewhere, on a `2M x 2N` grid.
pub fn zero_insert2x(g: &ComplexGrid) -> ComplexGrid {
    let (m, n) = g.shape();
    ComplexGrid::build(2 * m, 2 * n, |x, y| {
        if x % 2 == 0 && y % 2 == 0 {
            g.get(x / 2, y / 2)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Circular shift by `floor(M/2)` rows and `floor(N/2)` columns, moving the
/// zero frequency to the centre.
pub fn fftshift2(spectrum: &ComplexGrid) -> ComplexGrid {
    let (m, n) = spectrum.shape();
    let (dr, dc) = (m / 2, n / 2);
    ComplexGrid::build(m, n, |u, v| {
        spectrum.get((u + m - dr) % m, (v + n - dc) % n)
    })
}

/// Multiplies sample `(x, y)` by `(-1)^(x+y)`.
pub fn checkerboard_modulate(g: &ComplexGrid) -> ComplexGrid {
    let (m, n) = g.shape();
    ComplexGrid::build(m, n, |x, y| {
        let z = g.get(x, y);
        if (x + y) % 2 == 0 {
            z
        } else {
            -z
        }
    })
}
