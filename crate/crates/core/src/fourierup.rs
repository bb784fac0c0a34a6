//! Every pipeline runs the same steps: forward transform, amplitude/phase
//! split, a 2x rule applied to both maps, per-pixel channel mixing,
//! recombination, inverse transform, real part. The area variant also
//! crops the four corners and resizes them.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexGrid, RealGrid};
use crate::polar::{from_polar, to_polar, PolarGrid};
use crate::rules::{
    area_interpolate2x, bilinear_resize, corner_crop_merge_resize,
    corner_crop_merge_resize_adjoint, corner_interpolate2x_with, periodic_pad2x, NyquistSplit,
};
use crate::spectral::{fft2, ifft2};

/// `C` real channels of one `H x W` shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTensor {
    channels: Vec<RealGrid>,
}

impl FeatureTensor {
    pub fn new(channels: Vec<RealGrid>) -> Result<Self> {
        let first = channels.first().ok_or(Error::InvalidArgument(
            "a feature tensor needs at least one channel",
        ))?;
        let shape = first.shape();
        for ch in &channels[1..] {
            ch.ensure_shape(shape)?;
        }
        Ok(Self { channels })
    }

    pub fn single(channel: RealGrid) -> Self {
        Self {
            channels: alloc::vec![channel],
        }
    }

    pub fn zeros(channels: usize, height: usize, width: usize) -> Result<Self> {
        let grid = RealGrid::zeros(height, width)?;
        Self::new(alloc::vec![grid; channels])
    }

    pub fn channels(&self) -> &[RealGrid] {
        &self.channels
    }

    pub fn into_channels(self) -> Vec<RealGrid> {
        self.channels
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    pub fn height(&self) -> usize {
        self.channels[0].rows()
    }

    pub fn width(&self) -> usize {
        self.channels[0].cols()
    }

    /// `(C, H, W)`.
    pub fn shape(&self) -> (usize, usize, usize) {
        (self.channel_count(), self.height(), self.width())
    }

    pub fn max_abs_diff(&self, other: &FeatureTensor) -> Result<f64> {
        self.ensure_shape(other.shape())?;
        self.channels
            .iter()
            .zip(&other.channels)
            .try_fold(0.0_f64, |m, (a, b)| Ok(m.max(a.max_abs_diff(b)?)))
    }

    fn ensure_shape(&self, (c, h, w): (usize, usize, usize)) -> Result<()> {
        if self.channel_count() != c {
            return Err(Error::ChannelMismatch {
                expected: c,
                actual: self.channel_count(),
            });
        }
        self.channels[0].ensure_shape((h, w))
    }
}

/// Two bias-free `C x C` channel-mixing matrices, one applied to amplitudes
/// and one to phases. A 1x1 convolution with `C` inputs and `C` outputs is
/// exactly this per-pixel map.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMixer {
    channels: usize,
    amp: Vec<f64>,
    phase: Vec<f64>,
}

impl ChannelMixer {
    /// Row-major `C x C` weights; `out[i] = sum_j w[i][j] * in[j]`.
    pub fn new(channels: usize, amp: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if channels == 0 {
            return Err(Error::InvalidArgument("mixer needs at least one channel"));
        }
        for w in [&amp, &phase] {
            if w.len() != channels * channels {
                return Err(Error::LengthMismatch {
                    expected: channels * channels,
                    actual: w.len(),
                });
            }
            if let Some(index) = w.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(Self {
            channels,
            amp,
            phase,
        })
    }

    pub fn identity(channels: usize) -> Self {
        let eye: Vec<f64> = (0..channels * channels)
            .map(|k| {
                if k / channels == k % channels {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            channels,
            amp: eye.clone(),
            phase: eye,
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn amp_weights(&self) -> &[f64] {
        &self.amp
    }

    pub fn phase_weights(&self) -> &[f64] {
        &self.phase
    }

    pub(crate) fn amp_weights_mut(&mut self) -> &mut [f64] {
        &mut self.amp
    }

    pub(crate) fn phase_weights_mut(&mut self) -> &mut [f64] {
        &mut self.phase
    }

    fn check_channels(&self, actual: usize) -> Result<()> {
        if actual != self.channels {
            return Err(Error::ChannelMismatch {
                expected: self.channels,
                actual,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Padding,
    Area,
    Corner,
}

/// How the Fourier branch is fused with spatial up-sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Combine {
    #[default]
    FourierOnly,
    /// Element-wise mean with the bilinear 2x up-sample of the input.
    AverageWithBilinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct UpsampleConfig {
    pub variant: Variant,
    pub combine: Combine,
    /// Corner crop for the area variant; `None` means `ceil(H/2) x ceil(W/2)`.
    pub crop: Option<(usize, usize)>,
}

impl UpsampleConfig {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            ..Self::default()
        }
    }

    pub fn with_combine(mut self, combine: Combine) -> Self {
        self.combine = combine;
        self
    }

    pub fn with_crop(mut self, crop: (usize, usize)) -> Self {
        self.crop = Some(crop);
        self
    }
}

/// Pipeline output plus the largest imaginary magnitude dropped when taking
/// the real part of the inverse transform.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierUpOutput {
    pub output: FeatureTensor,
    pub max_imag_residue: f64,
}

/// Per-pixel channel mixing of amplitudes and phases. Phases are mixed raw,
/// without wrapping.
pub fn mixer_apply(p: &[PolarGrid], m: &ChannelMixer) -> Result<Vec<PolarGrid>> {
    m.check_channels(p.len())?;
    let shape = p
        .first()
        .ok_or(Error::InvalidArgument("no channels to mix"))?
        .shape();
    for grid in p {
        if grid.shape() != shape {
            return Err(Error::ShapeMismatch {
                expected: shape,
                actual: grid.shape(),
            });
        }
    }
    let amps: Vec<&RealGrid> = p.iter().map(PolarGrid::amplitude).collect();
    let phases: Vec<&RealGrid> = p.iter().map(PolarGrid::phase).collect();
    (0..m.channels)
        .map(|i| {
            let amp = mix_row(&amps, &m.amp[i * m.channels..(i + 1) * m.channels]);
            let phase = mix_row(&phases, &m.phase[i * m.channels..(i + 1) * m.channels]);
            PolarGrid::new(amp, phase)
        })
        .collect()
}

fn mix_row(inputs: &[&RealGrid], weights: &[f64]) -> RealGrid {
    let (rows, cols) = inputs[0].shape();
    RealGrid::build(rows, cols, |r, c| {
        inputs
            .iter()
            .zip(weights)
            .map(|(g, w)| w * g.get(r, c))
            .sum()
    })
}

/// Transform, split and up-sample every channel.
fn upsampled_spectra(x: &FeatureTensor, variant: Variant) -> Vec<PolarGrid> {
    x.channels
        .iter()
        .map(|ch| {
            let polar = to_polar(&fft2(&ch.to_complex()));
            let (amp, phase) = polar.into_parts();
            let (amp, phase) = match variant {
                Variant::Padding => (periodic_pad2x(&amp), periodic_pad2x(&phase)),
                Variant::Area => (area_interpolate2x(&amp), area_interpolate2x(&phase)),
                Variant::Corner => (
                    corner_interpolate2x_with(&amp, NyquistSplit::Halve),
                    corner_interpolate2x_with(&phase, NyquistSplit::Copy),
                ),
            };
            PolarGrid::new(amp, phase).expect("rules preserve matching shapes")
        })
        .collect()
}

struct Forward {
    /// Up-sampled, unmixed spectra.
    upsampled: Vec<PolarGrid>,
    mixed: Vec<PolarGrid>,
    output: FourierUpOutput,
}

fn forward(x: &FeatureTensor, m: &ChannelMixer, cfg: &UpsampleConfig) -> Result<Forward> {
    m.check_channels(x.channel_count())?;
    let upsampled = upsampled_spectra(x, cfg.variant);
    let mixed = mixer_apply(&upsampled, m)?;
    let mut max_imag_residue = 0.0_f64;
    let mut channels = Vec::with_capacity(mixed.len());
    for p in &mixed {
        let spatial = ifft2(&from_polar(p));
        max_imag_residue = max_imag_residue.max(spatial.im().max_abs());
        let real = spatial.re();
        channels.push(match cfg.variant {
            Variant::Area => corner_crop_merge_resize(&real, cfg.crop)?,
            Variant::Padding | Variant::Corner => real,
        });
    }
    Ok(Forward {
        upsampled,
        mixed,
        output: FourierUpOutput {
            output: FeatureTensor { channels },
            max_imag_residue,
        },
    })
}

/// Runs the variant selected by `cfg` (without spatial fusion).
pub fn fourierup(
    x: &FeatureTensor,
    m: &ChannelMixer,
    cfg: &UpsampleConfig,
) -> Result<FourierUpOutput> {
    forward(x, m, cfg).map(|f| f.output)
}

/// Periodic-padding pipeline. With the identity mixer the output is exactly
/// the zero-inserted input.
pub fn fourierup_padding(x: &FeatureTensor, m: &ChannelMixer) -> Result<FeatureTensor> {
    fourierup(x, m, &UpsampleConfig::new(Variant::Padding)).map(|o| o.output)
}

/// Area-interpolation pipeline followed by corner crop, merge and resize.
pub fn fourierup_area(
    x: &FeatureTensor,
    m: &ChannelMixer,
    cfg: &UpsampleConfig,
) -> Result<FeatureTensor> {
    let cfg = UpsampleConfig {
        variant: Variant::Area,
        ..*cfg
    };
    fourierup(x, m, &cfg).map(|o| o.output)
}

/// Corner-interpolation pipeline.
pub fn fourierup_corner(x: &FeatureTensor, m: &ChannelMixer) -> Result<FeatureTensor> {
    fourierup(x, m, &UpsampleConfig::new(Variant::Corner)).map(|o| o.output)
}

/// Bilinear 2x up-sample of every channel.
pub fn bilinear_upsample2x(x: &FeatureTensor) -> FeatureTensor {
    let channels = x
        .channels
        .iter()
        .map(|ch| {
            bilinear_resize(ch, 2 * ch.rows(), 2 * ch.cols()).expect("doubled shape is positive")
        })
        .collect();
    FeatureTensor { channels }
}

/// Fuses a Fourier-branch output with spatial up-sampling of its input.
pub fn combine_with_spatial(
    y_fourier: &FeatureTensor,
    x: &FeatureTensor,
    cfg: &UpsampleConfig,
) -> Result<FeatureTensor> {
    y_fourier.ensure_shape((x.channel_count(), 2 * x.height(), 2 * x.width()))?;
    match cfg.combine {
        Combine::FourierOnly => Ok(y_fourier.clone()),
        Combine::AverageWithBilinear => {
            let spatial = bilinear_upsample2x(x);
            let channels = y_fourier
                .channels
                .iter()
                .zip(&spatial.channels)
                .map(|(a, b)| a.zip_map(b, |p, q| 0.5 * (p + q)))
                .collect::<Result<Vec<_>>>()?;
            Ok(FeatureTensor { channels })
        }
    }
}

/// Pipeline followed by [`combine_with_spatial`].
pub fn upsample(
    x: &FeatureTensor,
    m: &ChannelMixer,
    cfg: &UpsampleConfig,
) -> Result<FeatureTensor> {
    let y = fourierup(x, m, cfg)?.output;
    combine_with_spatial(&y, x, cfg)
}

/// Loss and its derivatives with respect to every mixer weight.
#[derive(Debug, Clone, PartialEq)]
pub struct MixerGradient {
    pub loss: f64,
    /// Row-major `C x C`, aligned with [`ChannelMixer::amp_weights`].
    pub amp: Vec<f64>,
    /// Row-major `C x C`, aligned with [`ChannelMixer::phase_weights`].
    pub phase: Vec<f64>,
}

/// `0.5 * sum (Y - target)^2` for `Y = upsample(x, m, cfg)`.
pub fn pipeline_loss(
    x: &FeatureTensor,
    m: &ChannelMixer,
    target: &FeatureTensor,
    cfg: &UpsampleConfig,
) -> Result<f64> {
    let y = upsample(x, m, cfg)?;
    residual_loss(&y, target)
}

fn residual_loss(y: &FeatureTensor, target: &FeatureTensor) -> Result<f64> {
    target.ensure_shape(y.shape())?;
    Ok(y.channels
        .iter()
        .zip(&target.channels)
        .map(|(a, b)| {
            a.as_slice()
                .iter()
                .zip(b.as_slice())
                .map(|(p, q)| 0.5 * (p - q) * (p - q))
                .sum::<f64>()
        })
        .sum())
}

/// Analytic gradient of [`pipeline_loss`] with respect to both mixers.
///
/// With `Y_c = Re(ifft(Z_c))` and `Z_c = Â_c e^{i P̂_c}`, the loss gradient
/// with respect to `Z_c` (as `dL/dRe + i dL/dIm`) is `fft(R_c) / S` where
/// `R_c` is the residual pulled back through the post-processing and `S`
/// is the number of output samples. Then
/// `dL/dÂ = Re(G e^{-iP̂})` and `dL/dP̂ = Â Im(G e^{-iP̂})`, and each weight
/// collects `sum_k dL/dÂ_i(k) Ã_j(k)` over pixels.
pub fn mixer_gradient(
    x: &FeatureTensor,
    m: &ChannelMixer,
    target: &FeatureTensor,
    cfg: &UpsampleConfig,
) -> Result<MixerGradient> {
    let fwd = forward(x, m, cfg)?;
    let y = combine_with_spatial(&fwd.output.output, x, cfg)?;
    let loss = residual_loss(&y, target)?;

    let residual_scale = match cfg.combine {
        Combine::FourierOnly => 1.0,
        Combine::AverageWithBilinear => 0.5,
    };
    let c = m.channels;
    let mut amp_grad = alloc::vec![0.0; c * c];
    let mut phase_grad = alloc::vec![0.0; c * c];

    for i in 0..c {
        let residual = y.channels[i]
            .zip_map(&target.channels[i], |a, b| residual_scale * (a - b))
            .expect("shapes checked by residual_loss");
        let pulled = match cfg.variant {
            Variant::Area => corner_crop_merge_resize_adjoint(&residual, cfg.crop)?,
            Variant::Padding | Variant::Corner => residual,
        };
        let samples = pulled.len() as f64;
        let grad_z: ComplexGrid = fft2(&pulled.to_complex()).map(|z| z / samples);

        let mixed = &fwd.mixed[i];
        let (d_amp, d_phase): (Vec<f64>, Vec<f64>) = grad_z
            .as_slice()
            .iter()
            .zip(mixed.amplitude().as_slice())
            .zip(mixed.phase().as_slice())
            .map(|((&g, &a), &p)| {
                let rotated = g * Complex64::new(libm::cos(p), -libm::sin(p));
                (rotated.re, a * rotated.im)
            })
            .unzip();

        for j in 0..c {
            let src = &fwd.upsampled[j];
            amp_grad[i * c + j] = dot(&d_amp, src.amplitude().as_slice());
            phase_grad[i * c + j] = dot(&d_phase, src.phase().as_slice());
        }
    }

    Ok(MixerGradient {
        loss,
        amp: amp_grad,
        phase: phase_grad,
    })
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Central finite differences of [`pipeline_loss`] over every mixer weight.
pub fn mixer_gradient_numeric(
    x: &FeatureTensor,
    m: &ChannelMixer,
    target: &FeatureTensor,
    cfg: &UpsampleConfig,
    step: f64,
) -> Result<MixerGradient> {
    let loss = pipeline_loss(x, m, target, cfg)?;
    let n = m.channels * m.channels;
    let mut amp = alloc::vec![0.0; n];
    let mut phase = alloc::vec![0.0; n];
    for k in 0..n {
        for (is_phase, out) in [(false, &mut amp), (true, &mut phase)] {
            let probe = |delta: f64| -> Result<f64> {
                let mut perturbed = m.clone();
                let weights = if is_phase {
                    perturbed.phase_weights_mut()
                } else {
                    perturbed.amp_weights_mut()
                };
                weights[k] += delta;
                pipeline_loss(x, &perturbed, target, cfg)
            };
            out[k] = (probe(step)? - probe(-step)?) / (2.0 * step);
        }
    }
    Ok(MixerGradient { loss, amp, phase })
}
