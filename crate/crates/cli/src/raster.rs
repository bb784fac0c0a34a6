//! Conversions between 8-bit rasters and unit-scale feature tensors, the
//! simple spatial resamplers used as baselines, and PSNR.

use fourierup_core::fourierup::FeatureTensor;
use fourierup_core::RealGrid;
use thiserror::Error;

use crate::pnm::RasterImage;

/// Returned for zero-MSE comparisons.
pub const PSNR_CAP_DB: f64 = 99.0;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("image shapes differ: {left:?} vs {right:?}")]
pub struct ShapeMismatch {
    pub left: (usize, usize, usize),
    pub right: (usize, usize, usize),
}

fn shape(img: &RasterImage) -> (usize, usize, usize) {
    (img.width(), img.height(), img.channels())
}

/// `10 log10(255^2 / MSE)` over every sample, capped at [`PSNR_CAP_DB`].
pub fn psnr(a: &RasterImage, b: &RasterImage) -> Result<f64, ShapeMismatch> {
    if shape(a) != shape(b) {
        return Err(ShapeMismatch {
            left: shape(a),
            right: shape(b),
        });
    }
    let sse: u64 = a
        .samples()
        .iter()
        .zip(b.samples())
        .map(|(&p, &q)| {
            let d = p.abs_diff(q) as u64;
            d * d
        })
        .sum();
    if sse == 0 {
        return Ok(PSNR_CAP_DB);
    }
    let mse = sse as f64 / a.samples().len() as f64;
    Ok((10.0 * (255.0f64 * 255.0 / mse).log10()).min(PSNR_CAP_DB))
}

/// One grid per channel, samples divided by 255.
pub fn to_tensor(img: &RasterImage) -> FeatureTensor {
    let (w, h, c) = shape(img);
    let channels = (0..c)
        .map(|ch| {
            RealGrid::from_fn(h, w, |y, x| img.get(x, y, ch) as f64 / 255.0)
                .expect("raster dimensions are positive")
        })
        .collect();
    FeatureTensor::new(channels).expect("channels share one shape")
}

/// Clamps to `[0, 1]`, rescales and rounds to the nearest 8-bit value.
pub fn from_tensor(t: &FeatureTensor) -> RasterImage {
    let (c, h, w) = t.shape();
    let mut samples = Vec::with_capacity(c * h * w);
    for y in 0..h {
        for x in 0..w {
            for grid in t.channels() {
                samples.push((grid.get(y, x).clamp(0.0, 1.0) * 255.0).round() as u8);
            }
        }
    }
    RasterImage::new(w, h, c, samples).expect("tensor shape is a valid raster")
}

/// Mean of each 2x2 block, rounded half up. Odd trailing rows/columns are dropped.
pub fn average_pool2x(img: &RasterImage) -> Option<RasterImage> {
    let (w, h, c) = shape(img);
    let (ow, oh) = (w / 2, h / 2);
    if ow == 0 || oh == 0 {
        return None;
    }
    let mut samples = Vec::with_capacity(ow * oh * c);
    for y in 0..oh {
        for x in 0..ow {
            for ch in 0..c {
                let sum: u32 = [(0, 0), (1, 0), (0, 1), (1, 1)]
                    .iter()
                    .map(|&(dx, dy)| img.get(2 * x + dx, 2 * y + dy, ch) as u32)
                    .sum();
                samples.push(((sum + 2) / 4) as u8);
            }
        }
    }
    RasterImage::new(ow, oh, c, samples).ok()
}

pub fn nearest_upsample2x(img: &RasterImage) -> RasterImage {
    let (w, h, c) = shape(img);
    let mut samples = Vec::with_capacity(4 * w * h * c);
    for y in 0..2 * h {
        for x in 0..2 * w {
            for ch in 0..c {
                samples.push(img.get(x / 2, y / 2, ch));
            }
        }
    }
    RasterImage::new(2 * w, 2 * h, c, samples).expect("doubled raster is valid")
}
