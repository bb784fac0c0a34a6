//! Iterative radix-2 Cooley-Tukey kernel (decimation in time).

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Twiddles and bit-reversal table for one power-of-two length.
pub(crate) struct Radix2Plan {
    len: usize,
    twiddles: Vec<Complex64>,
    reversed: Vec<usize>,
}

impl Radix2Plan {
    pub(crate) fn new(len: usize, direction: Direction) -> Self {
        assert!(len.is_power_of_two());
        let sign = match direction {
            Direction::Forward => -1.0,
            Direction::Inverse => 1.0,
        };
        // Each twiddle is evaluated directly; a running product drifts.
        let twiddles = (0..len / 2)
            .map(|k| {
                let angle = sign * 2.0 * PI * k as f64 / len as f64;
                Complex64::new(libm::cos(angle), libm::sin(angle))
            })
            .collect();
        let bits = len.trailing_zeros();
        let reversed = (0..len)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (usize::BITS - bits)
                }
            })
            .collect();
        Self {
            len,
            twiddles,
            reversed,
        }
    }

    /// Unnormalized transform of `buf` in place.
    pub(crate) fn process(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.len);
        for i in 0..self.len {
            let j = self.reversed[i];
            if i < j {
                buf.swap(i, j);
            }
        }
        let mut half = 1;
        while half < self.len {
            let stride = self.len / (2 * half);
            for start in (0..self.len).step_by(2 * half) {
                for k in 0..half {
                    let w = self.twiddles[k * stride];
                    let a = buf[start + k];
                    let b = buf[start + k + half] * w;
                    buf[start + k] = a + b;
                    buf[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// Row-major 2D transform: every row, then every column.
pub(crate) fn transform_2d(rows: usize, cols: usize, data: &mut [Complex64], direction: Direction) {
    let row_plan = Radix2Plan::new(cols, direction);
    for row in data.chunks_exact_mut(cols) {
        row_plan.process(row);
    }
    let col_plan = Radix2Plan::new(rows, direction);
    let mut column = alloc::vec![Complex64::new(0.0, 0.0); rows];
    for c in 0..cols {
        for r in 0..rows {
            column[r] = data[r * cols + c];
        }
        col_plan.process(&mut column);
        for r in 0..rows {
            data[r * cols + c] = column[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn length_one_is_identity() {
        let plan = Radix2Plan::new(1, Direction::Forward);
        let mut buf = vec![Complex64::new(3.0, -1.0)];
        plan.process(&mut buf);
        assert_eq!(buf[0], Complex64::new(3.0, -1.0));
    }

    #[test]
    fn length_two_butterfly() {
        let plan = Radix2Plan::new(2, Direction::Forward);
        let mut buf = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        plan.process(&mut buf);
        assert_eq!(
            buf,
            vec![Complex64::new(3.0, 0.0), Complex64::new(-1.0, 0.0)]
        );
    }

    #[test]
    fn impulse_gives_flat_spectrum() {
        let plan = Radix2Plan::new(8, Direction::Forward);
        let mut buf = vec![Complex64::new(0.0, 0.0); 8];
        buf[0] = Complex64::new(1.0, 0.0);
        plan.process(&mut buf);
        assert!(buf.iter().all(|z| *z == Complex64::new(1.0, 0.0)));
    }
}
