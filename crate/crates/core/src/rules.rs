//! The 2x up-sampling rules act on real grids. Each rule is linear, so
//! applying it to the real and imaginary parts of a spectrum separately is the
//! same as applying it to the complex spectrum; [`apply_complex`] does that.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, RealGrid};

/// Tiles the grid 2x2: `out(u, v) = G(u mod M, v mod N)`.
///
/// This is the exact spectrum of the zero-inserted map.
pub fn periodic_pad2x(g: &RealGrid) -> RealGrid {
    let (m, n) = g.shape();
    RealGrid::build(2 * m, 2 * n, |u, v| g.get(u % m, v % n))
}

/// Replicates every sample into a 2x2 block.
pub fn area_interpolate2x(g: &RealGrid) -> RealGrid {
    let (m, n) = g.shape();
    RealGrid::build(2 * m, 2 * n, |u, v| g.get(u / 2, v / 2))
}

/// What corner interpolation does with the Nyquist row/column of an
/// even-sized input, which lands twice in the doubled grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NyquistSplit {
    /// Both copies carry half the value, so the pair sums to the original.
    #[default]
    Halve,
    /// Both copies carry the full value. Used for phase maps, where the
    /// split belongs to the amplitude alone.
    Copy,
}

/// Corner interpolation (spectral zero padding) with the Nyquist split.
pub fn corner_interpolate2x(g: &RealGrid) -> RealGrid {
    corner_interpolate2x_with(g, NyquistSplit::Halve)
}

/// Moves the four frequency corners of `g` into the corners of a zeroed
/// `2M x 2N` grid.
///
/// For odd `r` the first `r/2 + 1` rows go to the top and the remaining rows
/// to the bottom. For even `r` the Nyquist row `r/2` goes to both output rows
/// `r/2` and `r/2 + r`. Columns follow the same rule.
pub fn corner_interpolate2x_with(g: &RealGrid, split: NyquistSplit) -> RealGrid {
    let (r, c) = g.shape();
    let (ir1, ir2) = split_indices(r);
    let (ic1, ic2) = split_indices(c);
    let mut out = RealGrid::zeros_unchecked(2 * r, 2 * c);

    let row_blocks = [(0..ir1, 0), (ir2..r, r)];
    let col_blocks = [(0..ic1, 0), (ic2..c, c)];
    for (rows, row_offset) in row_blocks.iter().cloned() {
        for i in rows {
            for (cols, col_offset) in col_blocks.iter().cloned() {
                for j in cols {
                    out.set(i + row_offset, j + col_offset, g.get(i, j));
                }
            }
        }
    }

    if split == NyquistSplit::Halve {
        if r % 2 == 0 {
            for row in [ir2, ir2 + r] {
                for j in 0..2 * c {
                    out.set(row, j, out.get(row, j) * 0.5);
                }
            }
        }
        if c % 2 == 0 {
            for col in [ic2, ic2 + c] {
                for i in 0..2 * r {
                    out.set(i, col, out.get(i, col) * 0.5);
                }
            }
        }
    }
    out
}

fn split_indices(len: usize) -> (usize, usize) {
    if len % 2 == 1 {
        (len / 2 + 1, len / 2 + 1)
    } else {
        (len / 2 + 1, len / 2)
    }
}

/// Applies a real rule to the real and imaginary parts of a complex grid.
pub fn apply_complex(g: &ComplexGrid, rule: impl Fn(&RealGrid) -> RealGrid) -> ComplexGrid {
    ComplexGrid::from_parts(&rule(&g.re()), &rule(&g.im()))
        .expect("rules map equal shapes to equal shapes")
}

/// The area-interpolation attenuation factor
/// `A(x, y) = 1 + e^{i pi x/M} + e^{i pi y/N} + e^{i pi (x/M + y/N)}`.
///
/// The inverse transform of an area-interpolated spectrum is `A/4` times the
/// periodically extended original map.
pub fn a_factor(x: i64, y: i64, m: usize, n: usize) -> Complex64 {
    let ax = PI * x as f64 / m as f64;
    let ay = PI * y as f64 / n as f64;
    let e = |t: f64| Complex64::new(libm::cos(t), libm::sin(t));
    Complex64::new(1.0, 0.0) + e(ax) + e(ay) + e(ax + ay)
}

/// Default corner crop for a `2M x 2N` map: `ceil(M/2) x ceil(N/2)`.
pub fn default_crop(rows: usize, cols: usize) -> (usize, usize) {
    let (m, n) = (rows / 2, cols / 2);
    (m.div_ceil(2).max(1), n.div_ceil(2).max(1))
}

fn validate_crop(shape: (usize, usize), crop: Option<(usize, usize)>) -> Result<(usize, usize)> {
    let (rows, cols) = shape;
    if rows % 2 != 0 || cols % 2 != 0 {
        return Err(Error::InvalidArgument(
            "corner cropping needs an even-sized map",
        ));
    }
    let crop = crop.unwrap_or_else(|| default_crop(rows, cols));
    if crop.0 == 0 || crop.1 == 0 {
        return Err(Error::InvalidArgument("crop dimensions must be positive"));
    }
    let quadrant = (rows / 2, cols / 2);
    if crop.0 > quadrant.0 || crop.1 > quadrant.1 {
        return Err(Error::CropTooLarge { crop, quadrant });
    }
    Ok(crop)
}

/// Source index in the full map for position `i` of the merged corners.
#[inline]
fn corner_source(i: usize, crop: usize, full: usize) -> usize {
    if i < crop {
        i
    } else {
        full - 2 * crop + i
    }
}

/// Keeps the four `crop`-sized corners of a `2M x 2N` map, where the
/// area-interpolation factor is largest, stitches them together in place,
/// and resizes the result back to `2M x 2N` bilinearly.
pub fn corner_crop_merge_resize(h: &RealGrid, crop: Option<(usize, usize)>) -> Result<RealGrid> {
    let (cr, cc) = validate_crop(h.shape(), crop)?;
    let (rows, cols) = h.shape();
    let merged = RealGrid::build(2 * cr, 2 * cc, |i, j| {
        h.get(corner_source(i, cr, rows), corner_source(j, cc, cols))
    });
    bilinear_resize(&merged, rows, cols)
}

/// Transpose of [`corner_crop_merge_resize`] as a linear map.
pub(crate) fn corner_crop_merge_resize_adjoint(
    grad: &RealGrid,
    crop: Option<(usize, usize)>,
) -> Result<RealGrid> {
    let (cr, cc) = validate_crop(grad.shape(), crop)?;
    let (rows, cols) = grad.shape();
    let merged = bilinear_resize_adjoint(grad, 2 * cr, 2 * cc);
    let mut out = RealGrid::zeros_unchecked(rows, cols);
    for i in 0..2 * cr {
        for j in 0..2 * cc {
            let (si, sj) = (corner_source(i, cr, rows), corner_source(j, cc, cols));
            out.set(si, sj, out.get(si, sj) + merged.get(i, j));
        }
    }
    Ok(out)
}

/// One output coordinate's two source taps and the weight of the second.
#[derive(Debug, Clone, Copy)]
struct Tap {
    lo: usize,
    hi: usize,
    frac: f64,
}

fn axis_taps(len_in: usize, len_out: usize) -> Vec<Tap> {
    let scale = len_in as f64 / len_out as f64;
    let last = (len_in - 1) as f64;
    (0..len_out)
        .map(|t| {
            let s = ((t as f64 + 0.5) * scale - 0.5).clamp(0.0, last);
            let lo = libm::floor(s) as usize;
            let hi = (lo + 1).min(len_in - 1);
            Tap {
                lo,
                hi,
                frac: s - lo as f64,
            }
        })
        .collect()
}

/// Bilinear resize with half-pixel centres and edge clamping: output index
/// `t` samples source coordinate `(t + 0.5) * in/out - 0.5`.
pub fn bilinear_resize(g: &RealGrid, out_rows: usize, out_cols: usize) -> Result<RealGrid> {
    if out_rows == 0 || out_cols == 0 {
        return Err(Error::EmptyGrid {
            rows: out_rows,
            cols: out_cols,
        });
    }
    let row_taps = axis_taps(g.rows(), out_rows);
    let col_taps = axis_taps(g.cols(), out_cols);
    Ok(RealGrid::build(out_rows, out_cols, |r, c| {
        let (tr, tc) = (row_taps[r], col_taps[c]);
        let top = (1.0 - tc.frac) * g.get(tr.lo, tc.lo) + tc.frac * g.get(tr.lo, tc.hi);
        let bottom = (1.0 - tc.frac) * g.get(tr.hi, tc.lo) + tc.frac * g.get(tr.hi, tc.hi);
        (1.0 - tr.frac) * top + tr.frac * bottom
    }))
}

/// Transpose of [`bilinear_resize`]: scatters `grad` back onto an
/// `in_rows x in_cols` grid with the same weights.
pub(crate) fn bilinear_resize_adjoint(grad: &RealGrid, in_rows: usize, in_cols: usize) -> RealGrid {
    let row_taps = axis_taps(in_rows, grad.rows());
    let col_taps = axis_taps(in_cols, grad.cols());
    let mut out = RealGrid::zeros_unchecked(in_rows, in_cols);
    for (r, tr) in row_taps.iter().enumerate() {
        for (c, tc) in col_taps.iter().enumerate() {
            let v = grad.get(r, c);
            let mut add = |i: usize, j: usize, w: f64| out.set(i, j, out.get(i, j) + w * v);
            add(tr.lo, tc.lo, (1.0 - tr.frac) * (1.0 - tc.frac));
            add(tr.lo, tc.hi, (1.0 - tr.frac) * tc.frac);
            add(tr.hi, tc.lo, tr.frac * (1.0 - tc.frac));
            add(tr.hi, tc.hi, tr.frac * tc.frac);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid(rows: &[&[f64]]) -> RealGrid {
        let data: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        RealGrid::new(rows.len(), rows[0].len(), data).unwrap()
    }

    #[test]
    fn periodic_pad_tiles() {
        let out = periodic_pad2x(&grid(&[&[1.0, 2.0], &[3.0, 4.0]]));
        let expected = grid(&[
            &[1.0, 2.0, 1.0, 2.0],
            &[3.0, 4.0, 3.0, 4.0],
            &[1.0, 2.0, 1.0, 2.0],
            &[3.0, 4.0, 3.0, 4.0],
        ]);
        assert_eq!(out, expected);
        assert_eq!(
            periodic_pad2x(&grid(&[&[5.0]])),
            grid(&[&[5.0, 5.0], &[5.0, 5.0]])
        );
    }

    #[test]
    fn area_interpolate_replicates_blocks() {
        let out = area_interpolate2x(&grid(&[&[1.0, 2.0], &[3.0, 4.0]]));
        let expected = grid(&[
            &[1.0, 1.0, 2.0, 2.0],
            &[1.0, 1.0, 2.0, 2.0],
            &[3.0, 3.0, 4.0, 4.0],
            &[3.0, 3.0, 4.0, 4.0],
        ]);
        assert_eq!(out, expected);
        assert_eq!(
            area_interpolate2x(&grid(&[&[-2.0]])),
            grid(&[&[-2.0; 2], &[-2.0; 2]])
        );
        let constant = RealGrid::new(3, 2, vec![0.25; 6]).unwrap();
        assert_eq!(
            area_interpolate2x(&constant),
            RealGrid::new(6, 4, vec![0.25; 24]).unwrap()
        );
    }

    #[test]
    fn corner_single_sample() {
        assert_eq!(
            corner_interpolate2x(&grid(&[&[7.0]])),
            grid(&[&[7.0, 0.0], &[0.0, 0.0]])
        );
    }

    #[test]
    fn corner_two_by_two_hand_trace() {
        let (a, b, c, d) = (1.0, 2.0, 3.0, 4.0);
        let out = corner_interpolate2x(&grid(&[&[a, b], &[c, d]]));
        let expected = grid(&[
            &[a, b / 2.0, 0.0, b / 2.0],
            &[c / 2.0, d / 4.0, 0.0, d / 4.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[c / 2.0, d / 4.0, 0.0, d / 4.0],
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn corner_copy_split_keeps_nyquist_values() {
        let out = corner_interpolate2x_with(&grid(&[&[1.0, 2.0], &[3.0, 4.0]]), NyquistSplit::Copy);
        let expected = grid(&[
            &[1.0, 2.0, 0.0, 2.0],
            &[3.0, 4.0, 0.0, 4.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[3.0, 4.0, 0.0, 4.0],
        ]);
        assert_eq!(out, expected);
    }

    #[test]
    fn corner_odd_three_by_three_layout() {
        let g = RealGrid::build(3, 3, |i, j| (3 * i + j + 1) as f64);
        let out = corner_interpolate2x(&g);
        // rows 0,1 -> 0,1 ; row 2 -> 5 ; same for columns; no halving
        assert_eq!(out.get(0, 0), 1.0);
        assert_eq!(out.get(1, 1), 5.0);
        assert_eq!(out.get(0, 5), 3.0);
        assert_eq!(out.get(5, 0), 7.0);
        assert_eq!(out.get(5, 5), 9.0);
        assert_eq!(out.get(2, 2), 0.0);
        assert_eq!(out.get(3, 0), 0.0);
        let total: f64 = out.as_slice().iter().sum();
        assert_eq!(total, 45.0);
    }

    #[test]
    fn corner_of_zeros_is_zeros() {
        let z = RealGrid::zeros(4, 3).unwrap();
        assert_eq!(corner_interpolate2x(&z), RealGrid::zeros(8, 6).unwrap());
    }

    #[test]
    fn a_factor_values() {
        assert_eq!(a_factor(0, 0, 3, 5), Complex64::new(4.0, 0.0));
        // 1 + i + i - 1
        let v = a_factor(1, 1, 2, 2);
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((v.norm() - 2.0).abs() < 1e-15);
        for y in 0..10 {
            assert!(a_factor(4, y, 4, 5).norm() < 1e-15);
        }
    }

    #[test]
    fn bilinear_half_pixel_example() {
        let out = bilinear_resize(&grid(&[&[0.0, 2.0]]), 1, 4).unwrap();
        assert_eq!(out, grid(&[&[0.0, 0.5, 1.5, 2.0]]));
    }

    #[test]
    fn bilinear_constant_and_identity() {
        let c = grid(&[&[3.5]]);
        let out = bilinear_resize(&c, 3, 7).unwrap();
        assert!(out.as_slice().iter().all(|&v| v == 3.5));
        let g = RealGrid::build(3, 4, |i, j| (i * 7 + j * j) as f64 - 1.5);
        assert_eq!(bilinear_resize(&g, 3, 4).unwrap(), g);
        assert!(bilinear_resize(&g, 0, 4).is_err());
    }

    #[test]
    fn crop_merge_of_corners() {
        let (p, q, r, s) = (1.0, 2.0, 3.0, 4.0);
        let h = RealGrid::build(4, 4, |i, j| match (i, j) {
            (0, 0) => p,
            (0, 3) => q,
            (3, 0) => r,
            (3, 3) => s,
            _ => 100.0,
        });
        let out = corner_crop_merge_resize(&h, Some((1, 1))).unwrap();
        let merged = grid(&[&[p, q], &[r, s]]);
        assert_eq!(out, bilinear_resize(&merged, 4, 4).unwrap());
        // half-pixel taps on 2 -> 4: coordinates -0.25, 0.25, 0.75, 1.25
        assert_eq!(out.row(0), &[1.0, 1.25, 1.75, 2.0]);
        assert_eq!(out.row(3), &[3.0, 3.25, 3.75, 4.0]);
    }

    #[test]
    fn crop_merge_constant_and_full_quadrant() {
        let c = RealGrid::new(6, 4, vec![0.75; 24]).unwrap();
        assert_eq!(corner_crop_merge_resize(&c, None).unwrap(), c);
        let h = RealGrid::build(6, 4, |i, j| (i * 4 + j) as f64);
        assert_eq!(corner_crop_merge_resize(&h, Some((3, 2))).unwrap(), h);
    }

    #[test]
    fn crop_errors() {
        let h = RealGrid::zeros(4, 6).unwrap();
        assert_eq!(
            corner_crop_merge_resize(&h, Some((3, 1))),
            Err(Error::CropTooLarge {
                crop: (3, 1),
                quadrant: (2, 3)
            })
        );
        assert!(corner_crop_merge_resize(&h, Some((0, 1))).is_err());
        let odd = RealGrid::zeros(3, 4).unwrap();
        assert!(corner_crop_merge_resize(&odd, None).is_err());
    }

    #[test]
    fn default_crop_rounds_up() {
        assert_eq!(default_crop(6, 10), (2, 3));
        assert_eq!(default_crop(2, 2), (1, 1));
        assert_eq!(default_crop(8, 8), (2, 2));
    }

    fn dot(a: &RealGrid, b: &RealGrid) -> f64 {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| x * y)
            .sum()
    }

    fn pseudo_random(rows: usize, cols: usize, seed: u64) -> RealGrid {
        RealGrid::build(rows, cols, |i, j| {
            let k = (i * 131 + j * 17) as u64 ^ seed;
            libm::sin(k as f64 * 1.618) * 2.0
        })
    }

    #[test]
    fn resize_adjoint_is_transpose() {
        for &(ri, ci, ro, co) in &[(2, 3, 5, 4), (4, 4, 8, 8), (1, 5, 3, 2), (6, 2, 3, 7)] {
            let x = pseudo_random(ri, ci, 3);
            let y = pseudo_random(ro, co, 11);
            let lhs = dot(&bilinear_resize(&x, ro, co).unwrap(), &y);
            let rhs = dot(&x, &bilinear_resize_adjoint(&y, ri, ci));
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn crop_adjoint_is_transpose() {
        for &(rows, cols, crop) in &[(4, 4, None), (6, 8, Some((2, 3))), (8, 6, Some((4, 3)))] {
            let x = pseudo_random(rows, cols, 5);
            let y = pseudo_random(rows, cols, 9);
            let lhs = dot(&corner_crop_merge_resize(&x, crop).unwrap(), &y);
            let rhs = dot(&x, &corner_crop_merge_resize_adjoint(&y, crop).unwrap());
            assert!((lhs - rhs).abs() < 1e-12, "{lhs} vs {rhs}");
        }
    }
}
