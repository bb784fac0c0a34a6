//! Checkers for the spectral identities behind the up-sampling rules.
//!
//! Random inputs are uniform on `[-1, 1)`, drawn from a ChaCha8 stream
//! seeded with `seed_from_u64(seed)`, so reports are bit-reproducible across
//! platforms. Every check runs against the reference transforms, never
//! against the fast path, and compares with tolerances from [`tol`].

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fourierup::{
    mixer_gradient, mixer_gradient_numeric, upsample, ChannelMixer, Combine, FeatureTensor,
    UpsampleConfig, Variant,
};
use crate::grid::{ComplexGrid, RealGrid};
use crate::rules::{self, apply_complex, NyquistSplit};
use crate::spectral::{checkerboard_modulate, dft2_oracle, fftshift2, idft2_oracle, zero_insert2x};

/// Tolerances applied by the checkers.
pub mod tol {
    /// Zero insertion vs. periodic padding of the spectrum.
    pub const THEOREM1: f64 = 1e-10;
    /// Area-interpolation quadrant law `h = A/4 g`.
    pub const QUADRANT_LAW: f64 = 1e-9;
    /// Four-fold symmetry of `|A|`.
    pub const A_SYMMETRY: f64 = 1e-12;
    /// `|A|` on the lines `x = M` and `y = N`.
    pub const A_ZERO_LINE: f64 = 1e-10;
    /// Largest allowed increase of `|A|` between neighbours moving inward.
    pub const A_DECAY: f64 = 1e-12;
    /// Corner-interpolation even-lattice law `f(2x, 2y) = g(x, y)/4`.
    pub const EVEN_LATTICE: f64 = 1e-9;
    /// Imaginary part of a corner-interpolated real map.
    pub const REALNESS: f64 = 1e-10;
    /// `ifft(fftshift(G)) = (-1)^(x+y) ifft(G)`.
    pub const SHIFT_IDENTITY: f64 = 1e-11;
    /// Analytic vs. central-difference mixer gradients, relative.
    pub const GRADIENT: f64 = 1e-5;
    /// Gradient magnitude at an exact minimizer.
    pub const STATIONARY: f64 = 1e-12;
    /// Central-difference step.
    pub const FD_STEP: f64 = 1e-5;
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub name: String,
    pub sizes_tested: Vec<(usize, usize)>,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl VerificationReport {
    /// `passed` is derived: `max_error <= tolerance` (a NaN error fails).
    pub fn new(
        name: &str,
        sizes_tested: Vec<(usize, usize)>,
        max_error: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: String::from(name),
            sizes_tested,
            max_error,
            tolerance,
            passed: max_error <= tolerance,
        }
    }
}

impl fmt::Display for VerificationReport {
    /// `name=<id> sizes=<list> max_error=<float> tol=<float> passed=<bool>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "name={} sizes=", self.name)?;
        for (i, (m, n)) in self.sizes_tested.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}x{n}")?;
        }
        write!(
            f,
            " max_error={:e} tol={:e} passed={}",
            self.max_error, self.tolerance, self.passed
        )
    }
}

/// The rule implementations under test. Checkers take this as a parameter
/// so a corrupted implementation can be substituted.
pub trait SpectralRules {
    fn periodic_pad2x(&self, g: &RealGrid) -> RealGrid {
        rules::periodic_pad2x(g)
    }

    fn area_interpolate2x(&self, g: &RealGrid) -> RealGrid {
        rules::area_interpolate2x(g)
    }

    fn corner_interpolate2x(&self, g: &RealGrid) -> RealGrid {
        rules::corner_interpolate2x_with(g, NyquistSplit::Halve)
    }

    fn zero_insert2x(&self, g: &ComplexGrid) -> ComplexGrid {
        zero_insert2x(g)
    }
}

/// The crate's own rules.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardRules;

impl SpectralRules for StandardRules {}

/// Deterministic uniform `[-1, 1)` samples.
pub struct SampleSource(ChaCha8Rng);

impl SampleSource {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.gen_range(-1.0..1.0)
    }

    pub fn real_grid(&mut self, rows: usize, cols: usize) -> RealGrid {
        RealGrid::build(rows, cols, |_, _| self.uniform())
    }

    pub fn complex_grid(&mut self, rows: usize, cols: usize) -> ComplexGrid {
        ComplexGrid::build(rows, cols, |_, _| {
            Complex64::new(self.uniform(), self.uniform())
        })
    }

    pub fn tensor(&mut self, channels: usize, rows: usize, cols: usize) -> FeatureTensor {
        let grids = (0..channels).map(|_| self.real_grid(rows, cols)).collect();
        FeatureTensor::new(grids).expect("channels share one shape")
    }
}

fn ensure_args(sizes: &[(usize, usize)], trials: usize) {
    assert!(!sizes.is_empty(), "at least one size is required");
    assert!(
        sizes.iter().all(|&(m, n)| m > 0 && n > 0),
        "sizes must be positive"
    );
    assert!(trials >= 1, "at least one trial is required");
}

/// Zero insertion in space is periodic padding in frequency: the spectrum
/// of `zero_insert2x(g)` repeats with periods `M` and `N` and equals
/// `periodic_pad2x` of the spectrum of `g`.
pub fn verify_theorem1(sizes: &[(usize, usize)], trials: usize, seed: u64) -> VerificationReport {
    verify_theorem1_with(&StandardRules, sizes, trials, seed)
}

pub fn verify_theorem1_with(
    rules: &dyn SpectralRules,
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> VerificationReport {
    ensure_args(sizes, trials);
    let mut rng = SampleSource::new(seed);
    let mut max_error = 0.0_f64;
    for &(m, n) in sizes {
        for _ in 0..trials {
            let g = rng.real_grid(m, n);
            max_error = max_error.max(theorem1_error(rules, &g));
        }
    }
    VerificationReport::new("theorem1", sizes.to_vec(), max_error, tol::THEOREM1)
}

/// Worst deviation from periodicity of the zero-inserted spectrum and from
/// periodic padding of the original spectrum, for one map.
pub fn theorem1_error(rules: &dyn SpectralRules, g: &RealGrid) -> f64 {
    let (m, n) = g.shape();
    let g = g.to_complex();
    let big = dft2_oracle(&rules.zero_insert2x(&g));
    if big.shape() != (2 * m, 2 * n) {
        return f64::INFINITY;
    }
    let mut max_error = 0.0_f64;
    for u in 0..m {
        for v in 0..n {
            let base = big.get(u, v);
            for (du, dv) in [(m, 0), (0, n), (m, n)] {
                max_error = max_error.max((big.get(u + du, v + dv) - base).norm());
            }
        }
    }
    let padded = apply_complex(&dft2_oracle(&g), |p| rules.periodic_pad2x(p));
    max_error.max(padded.max_abs_diff(&big).unwrap_or(f64::INFINITY))
}

/// Area interpolation of the spectrum scales the periodically extended map
/// by `A(x, y)/4`, with `A` from [`rules::a_factor`].
///
/// Produces four reports: the quadrant law over the whole doubled grid, the
/// four-fold symmetry of `|A|`, the zero lines `x = M` and `y = N` (of both
/// `|A|` and the reconstructed map), and the monotone decay of `|A|` toward
/// the centre.
pub fn verify_theorem2(
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Vec<VerificationReport> {
    verify_theorem2_with(&StandardRules, sizes, trials, seed)
}

pub fn verify_theorem2_with(
    rules: &dyn SpectralRules,
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Vec<VerificationReport> {
    ensure_args(sizes, trials);
    let mut rng = SampleSource::new(seed);
    let mut law = 0.0_f64;
    let mut symmetry = 0.0_f64;
    let mut zero_line = 0.0_f64;
    let mut decay = 0.0_f64;

    for &(m, n) in sizes {
        let (mi, ni) = (m as i64, n as i64);
        let abs_a = |x: i64, y: i64| rules::a_factor(x, y, m, n).norm();

        for _ in 0..trials {
            let g = rng.real_grid(m, n).to_complex();
            let spectrum = dft2_oracle(&g);
            let h = idft2_oracle(&apply_complex(&spectrum, |p| rules.area_interpolate2x(p)));
            if h.shape() != (2 * m, 2 * n) {
                law = f64::INFINITY;
                continue;
            }
            for x in 0..2 * m {
                for y in 0..2 * n {
                    let a = rules::a_factor(x as i64, y as i64, m, n);
                    let expected = a / 4.0 * g.get(x % m, y % n);
                    law = law.max((h.get(x, y) - expected).norm());
                }
            }
            for y in 0..2 * n {
                zero_line = zero_line.max(h.get(m, y).norm());
            }
            for x in 0..2 * m {
                zero_line = zero_line.max(h.get(x, n).norm());
            }
        }

        for x in 0..=2 * mi {
            for y in 0..=2 * ni {
                let base = abs_a(x, y);
                for other in [
                    abs_a(2 * mi - x, y),
                    abs_a(x, 2 * ni - y),
                    abs_a(2 * mi - x, 2 * ni - y),
                ] {
                    symmetry = symmetry.max((other - base).abs());
                }
            }
        }
        for y in 0..=2 * ni {
            zero_line = zero_line.max(abs_a(mi, y));
        }
        for x in 0..=2 * mi {
            zero_line = zero_line.max(abs_a(x, ni));
        }
        for y in 0..ni {
            for x in 0..mi {
                decay = decay.max(abs_a(x + 1, y) - abs_a(x, y));
            }
        }
        for x in 0..mi {
            for y in 0..ni {
                decay = decay.max(abs_a(x, y + 1) - abs_a(x, y));
            }
        }
    }

    let sizes = sizes.to_vec();
    alloc::vec![
        VerificationReport::new("theorem2.quadrant", sizes.clone(), law, tol::QUADRANT_LAW),
        VerificationReport::new(
            "theorem2.symmetry",
            sizes.clone(),
            symmetry,
            tol::A_SYMMETRY
        ),
        VerificationReport::new(
            "theorem2.zero_line",
            sizes.clone(),
            zero_line,
            tol::A_ZERO_LINE
        ),
        VerificationReport::new("theorem2.decay", sizes, decay.max(0.0), tol::A_DECAY),
    ]
}

/// Corner interpolation of the spectrum: the even lattice of the inverse
/// equals `g/4` (checked on sizes with both dimensions odd), the inverse of
/// a real map stays real (sizes with an even dimension, where the Nyquist
/// split matters), and the half-period shift of a spectrum equals
/// checkerboard modulation in space (sizes with both dimensions even).
///
/// A category without matching sizes produces no report.
pub fn verify_theorem3(
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Vec<VerificationReport> {
    verify_theorem3_with(&StandardRules, sizes, trials, seed)
}

pub fn verify_theorem3_with(
    rules: &dyn SpectralRules,
    sizes: &[(usize, usize)],
    trials: usize,
    seed: u64,
) -> Vec<VerificationReport> {
    ensure_args(sizes, trials);
    let mut rng = SampleSource::new(seed);
    let (mut lattice, mut realness, mut shift) = (0.0_f64, 0.0_f64, 0.0_f64);
    let (mut lattice_sizes, mut real_sizes, mut shift_sizes) = (Vec::new(), Vec::new(), Vec::new());

    for &(m, n) in sizes {
        let both_odd = m % 2 == 1 && n % 2 == 1;
        let both_even = m % 2 == 0 && n % 2 == 0;
        if both_odd {
            lattice_sizes.push((m, n));
        } else {
            real_sizes.push((m, n));
        }
        if both_even {
            shift_sizes.push((m, n));
        }
        for _ in 0..trials {
            let g = rng.real_grid(m, n);
            let errors = corner_errors(rules, &g);
            if both_odd {
                lattice = lattice.max(errors.even_lattice);
            } else {
                realness = realness.max(errors.imag_residue);
            }
            if both_even {
                let spec = rng.complex_grid(m, n);
                let lhs = idft2_oracle(&fftshift2(&spec));
                let rhs = checkerboard_modulate(&idft2_oracle(&spec));
                shift = shift.max(lhs.max_abs_diff(&rhs).unwrap_or(f64::INFINITY));
            }
        }
    }

    let mut reports = Vec::new();
    if !lattice_sizes.is_empty() {
        reports.push(VerificationReport::new(
            "theorem3.even_lattice",
            lattice_sizes,
            lattice,
            tol::EVEN_LATTICE,
        ));
    }
    if !real_sizes.is_empty() {
        reports.push(VerificationReport::new(
            "theorem3.realness",
            real_sizes,
            realness,
            tol::REALNESS,
        ));
    }
    if !shift_sizes.is_empty() {
        reports.push(VerificationReport::new(
            "theorem3.shift_identity",
            shift_sizes,
            shift,
            tol::SHIFT_IDENTITY,
        ));
    }
    reports
}

/// Deviations measured on the inverse of a corner-interpolated spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerErrors {
    /// `max |f(2x, 2y) - g(x, y)/4|`; infinite if any sample is not finite.
    pub even_lattice: f64,
    /// `max |Im f|`.
    pub imag_residue: f64,
}

pub fn corner_errors(rules: &dyn SpectralRules, g: &RealGrid) -> CornerErrors {
    let (m, n) = g.shape();
    let spectrum = dft2_oracle(&g.to_complex());
    let f = idft2_oracle(&apply_complex(&spectrum, |p| rules.corner_interpolate2x(p)));
    if f.shape() != (2 * m, 2 * n) {
        return CornerErrors {
            even_lattice: f64::INFINITY,
            imag_residue: f64::INFINITY,
        };
    }
    let mut even_lattice = 0.0_f64;
    for x in 0..m {
        for y in 0..n {
            even_lattice = even_lattice.max((f.get(2 * x, 2 * y) - g.get(x, y) / 4.0).norm());
        }
    }
    // odd lattice points are interpolated; only finiteness is required
    if f.as_slice()
        .iter()
        .any(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        even_lattice = f64::INFINITY;
    }
    CornerErrors {
        even_lattice,
        imag_residue: f.im().max_abs(),
    }
}

/// Entry-wise relative error between gradients, judged against the larger
/// of the two values and a floor of `1e-3` times the analytic gradient's
/// largest entry.
pub fn gradient_relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    let scale = analytic.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = (1e-3 * scale).max(f64::MIN_POSITIVE);
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(floor))
        .fold(0.0, f64::max)
}

const GRADIENT_SIZE: usize = 4;

/// Analytic mixer gradients against central differences for every variant,
/// both fusion modes and `C` in `{1, 2, 3}` on 4x4 inputs, plus the
/// gradient at an exact minimizer.
pub fn verify_gradient(trials: usize, seed: u64) -> Vec<VerificationReport> {
    assert!(trials >= 1, "at least one trial is required");
    let mut rng = SampleSource::new(seed);
    let mut worst = 0.0_f64;
    let mut stationary = 0.0_f64;
    let size = (GRADIENT_SIZE, GRADIENT_SIZE);

    for _ in 0..trials {
        for channels in 1..=3 {
            for variant in [Variant::Padding, Variant::Area, Variant::Corner] {
                for combine in [Combine::FourierOnly, Combine::AverageWithBilinear] {
                    let cfg = UpsampleConfig::new(variant).with_combine(combine);
                    let x = rng.tensor(channels, size.0, size.1);
                    let m = random_mixer(&mut rng, channels);
                    let target = rng.tensor(channels, 2 * size.0, 2 * size.1);

                    let analytic = mixer_gradient(&x, &m, &target, &cfg);
                    let numeric = mixer_gradient_numeric(&x, &m, &target, &cfg, tol::FD_STEP);
                    match (analytic, numeric) {
                        (Ok(a), Ok(n)) => {
                            worst = worst
                                .max(gradient_relative_error(&a.amp, &n.amp))
                                .max(gradient_relative_error(&a.phase, &n.phase));
                        }
                        _ => worst = f64::INFINITY,
                    }

                    let exact = upsample(&x, &m, &cfg);
                    let at_min = exact.and_then(|t| mixer_gradient(&x, &m, &t, &cfg));
                    stationary = match at_min {
                        Ok(g) => g
                            .amp
                            .iter()
                            .chain(&g.phase)
                            .fold(stationary.max(g.loss), |s, v| s.max(v.abs())),
                        Err(_) => f64::INFINITY,
                    };
                }
            }
        }
    }
    alloc::vec![
        VerificationReport::new("gradient", alloc::vec![size], worst, tol::GRADIENT),
        VerificationReport::new(
            "gradient.stationary",
            alloc::vec![size],
            stationary,
            tol::STATIONARY
        ),
    ]
}

/// Identity plus uniform noise of half-width `0.5`.
pub fn random_mixer(rng: &mut SampleSource, channels: usize) -> ChannelMixer {
    let mut draw = || -> Vec<f64> {
        (0..channels * channels)
            .map(|k| {
                let eye = if k / channels == k % channels {
                    1.0
                } else {
                    0.0
                };
                eye + 0.5 * rng.uniform()
            })
            .collect()
    };
    let amp = draw();
    let phase = draw();
    ChannelMixer::new(channels, amp, phase).expect("finite square weights")
}

/// Default sizes: every `(M, N)` with `1 <= M, N <= max`.
pub fn all_sizes(max: usize) -> Vec<(usize, usize)> {
    (1..=max)
        .flat_map(|m| (1..=max).map(move |n| (m, n)))
        .collect()
}

/// Which checks to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theorem {
    ZeroInsertion,
    AreaInterpolation,
    CornerInterpolation,
    Gradient,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [
        Theorem::ZeroInsertion,
        Theorem::AreaInterpolation,
        Theorem::CornerInterpolation,
        Theorem::Gradient,
    ];

    /// Runs the checks with the default sizes and trial counts.
    pub fn run(self, seed: u64) -> Vec<VerificationReport> {
        match self {
            Theorem::ZeroInsertion => alloc::vec![verify_theorem1(&all_sizes(8), 5, seed)],
            Theorem::AreaInterpolation => verify_theorem2(&all_sizes(8), 3, seed),
            Theorem::CornerInterpolation => verify_theorem3(&all_sizes(8), 3, seed),
            Theorem::Gradient => verify_gradient(1, seed),
        }
    }
}
