use alloc::vec::Vec;
use core::ops::Index;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A sample type that can live in a [`Grid`].
pub trait Sample: Copy + PartialEq + core::fmt::Debug {
    const ZERO: Self;
    fn is_finite(&self) -> bool;
}

impl Sample for f64 {
    const ZERO: Self = 0.0;
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Sample for Complex64 {
    const ZERO: Self = Complex64::new(0.0, 0.0);
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Dense row-major `rows x cols` grid. The shape is fixed at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Spatial maps and spectra.
pub type ComplexGrid = Grid<Complex64>;
/// Amplitude, phase, or one component of a complex grid.
pub type RealGrid = Grid<f64>;

impl<T: Sample> Grid<T> {
    /// Builds a grid from row-major samples, rejecting empty shapes, a wrong
    /// sample count, and non-finite samples.
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        check_shape(rows, cols)?;
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                actual: data.len(),
            });
        }
        if let Some(index) = data.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        check_shape(rows, cols)?;
        Ok(Self::zeros_unchecked(rows, cols))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Result<Self> {
        check_shape(rows, cols)?;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self::new(rows, cols, data)
    }

    /// Builds a grid from nested rows; handy for literals in tests.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, data)
    }

    pub(crate) fn zeros_unchecked(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: alloc::vec![T::ZERO; rows * cols],
        }
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub(crate) fn build(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len()
    }

    /// Always false: grids have at least one sample.
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> T {
        self.data[row * self.cols + col]
    }

    #[inline]
    pub(crate) fn set(&mut self, row: usize, col: usize, value: T) {
        self.data[row * self.cols + col] = value;
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn row(&self, row: usize) -> &[T] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn map<U: Sample>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Combines two equally shaped grids sample by sample.
    pub fn zip_map<U: Sample, V: Sample>(
        &self,
        other: &Grid<U>,
        mut f: impl FnMut(T, U) -> V,
    ) -> Result<Grid<V>> {
        self.ensure_shape(other.shape())?;
        Ok(Grid {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn ensure_shape(&self, expected: (usize, usize)) -> Result<()> {
        if self.shape() != expected {
            return Err(Error::ShapeMismatch {
                expected,
                actual: self.shape(),
            });
        }
        Ok(())
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;

    #[inline]
    fn index(&self, (row, col): (usize, usize)) -> &T {
        &self.data[row * self.cols + col]
    }
}

impl RealGrid {
    /// Lifts a real grid to a complex grid with zero imaginary part.
    pub fn to_complex(&self) -> ComplexGrid {
        self.map(|&v| Complex64::new(v, 0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest absolute sample-wise difference to `other`.
    pub fn max_abs_diff(&self, other: &RealGrid) -> Result<f64> {
        self.ensure_shape(other.shape())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }
}

impl ComplexGrid {
    pub fn re(&self) -> RealGrid {
        self.map(|z| z.re)
    }

    pub fn im(&self) -> RealGrid {
        self.map(|z| z.im)
    }

    /// Reassembles a complex grid from its real and imaginary parts.
    pub fn from_parts(re: &RealGrid, im: &RealGrid) -> Result<Self> {
        re.zip_map(im, Complex64::new)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &ComplexGrid) -> Result<f64> {
        self.ensure_shape(other.shape())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `alpha * self + beta * other`.
    pub fn axpby(&self, alpha: Complex64, other: &ComplexGrid, beta: Complex64) -> Result<Self> {
        self.zip_map(other, |a, b| alpha * a + beta * b)
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::EmptyGrid { rows, cols });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn rejects_empty_shapes() {
        assert_eq!(
            RealGrid::new(0, 3, vec![]),
            Err(Error::EmptyGrid { rows: 0, cols: 3 })
        );
        assert!(ComplexGrid::zeros(2, 0).is_err());
    }

    #[test]
    fn rejects_wrong_length() {
        assert_eq!(
            RealGrid::new(2, 2, vec![1.0; 3]),
            Err(Error::LengthMismatch {
                expected: 4,
                actual: 3
            })
        );
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(
            RealGrid::new(1, 3, vec![0.0, f64::NAN, 1.0]),
            Err(Error::NonFinite { index: 1 })
        );
        let bad = vec![Complex64::new(0.0, f64::INFINITY)];
        assert_eq!(
            ComplexGrid::new(1, 1, bad),
            Err(Error::NonFinite { index: 0 })
        );
    }

    #[test]
    fn from_rows_is_row_major() {
        let g = RealGrid::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        assert_eq!(g.shape(), (2, 3));
        assert_eq!(g[(1, 0)], 4.0);
        assert_eq!(g.get(0, 2), 3.0);
        assert_eq!(g.row(1), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows: [&[f64]; 2] = [&[1.0, 2.0], &[3.0]];
        assert!(RealGrid::from_rows(&rows).is_err());
    }

    #[test]
    fn parts_round_trip() {
        let z = ComplexGrid::from_rows(&[[Complex64::new(1.0, -2.0), Complex64::new(0.5, 3.0)]])
            .unwrap();
        let back = ComplexGrid::from_parts(&z.re(), &z.im()).unwrap();
        assert_eq!(back, z);
    }
}
