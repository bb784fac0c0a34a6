use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::Result;
use crate::grid::{ComplexGrid, RealGrid};

/// Amplitude and phase maps of one spectrum.
///
/// Grids produced by [`to_polar`] are canonical: amplitude `>= 0` and phase in
/// `(-pi, pi]`. After channel mixing both maps are arbitrary linear
/// combinations, so amplitudes may turn negative and phases leave the
/// principal range; [`from_polar`] accepts either.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    amplitude: RealGrid,
    phase: RealGrid,
}

impl PolarGrid {
    pub fn new(amplitude: RealGrid, phase: RealGrid) -> Result<Self> {
        amplitude.ensure_shape(phase.shape())?;
        Ok(Self { amplitude, phase })
    }

    pub fn amplitude(&self) -> &RealGrid {
        &self.amplitude
    }

    pub fn phase(&self) -> &RealGrid {
        &self.phase
    }

    pub fn shape(&self) -> (usize, usize) {
        self.amplitude.shape()
    }

    pub fn into_parts(self) -> (RealGrid, RealGrid) {
        (self.amplitude, self.phase)
    }

    /// Amplitude nonnegative and phase in `(-pi, pi]` everywhere.
    pub fn is_canonical(&self) -> bool {
        self.amplitude.as_slice().iter().all(|&a| a >= 0.0)
            && self.phase.as_slice().iter().all(|&p| p > -PI && p <= PI)
    }
}

/// Modulus and argument of every sample. A zero sample gets phase 0, and an
/// argument of exactly `-pi` is folded to `pi`.
pub fn to_polar(z: &ComplexGrid) -> PolarGrid {
    let amplitude = z.map(|s| libm::hypot(s.re, s.im));
    let phase = z.map(|s| {
        if s.re == 0.0 && s.im == 0.0 {
            0.0
        } else {
            let p = libm::atan2(s.im, s.re);
            if p <= -PI {
                PI
            } else {
                p
            }
        }
    });
    PolarGrid { amplitude, phase }
}

/// `A * exp(i P)` sample by sample, without wrapping the phase.
pub fn from_polar(p: &PolarGrid) -> ComplexGrid {
    p.amplitude
        .zip_map(&p.phase, |a, ph| {
            if a == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(a * libm::cos(ph), a * libm::sin(ph))
            }
        })
        .expect("PolarGrid shapes agree by construction")
}
