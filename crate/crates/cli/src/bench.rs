//! Wall-clock comparison of the fast transform and the direct sum.

use std::hint::black_box;
use std::time::{Duration, Instant};

use fourierup_core::spectral::{dft2_oracle, fft2};
use fourierup_core::verify::SampleSource;

/// The direct sum is quartic in the side length; larger sizes are skipped.
pub const ORACLE_MAX_SIDE: usize = 64;

const FFT_BUDGET: Duration = Duration::from_millis(50);
const FFT_MAX_REPS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub path: &'static str,
    pub side: usize,
    /// Best observed time per call; `None` when skipped.
    pub millis: Option<f64>,
}

/// Column titles for [`Timing::line`].
pub fn header() -> String {
    format!("{:<8}{:>10}{:>15}", "path", "size", "time_ms")
}

impl Timing {
    /// Fixed-width line under [`header`].
    pub fn line(&self) -> String {
        let size = format!("{0}x{0}", self.side);
        match self.millis {
            Some(ms) => format!("{:<8}{:>10}{:>15.3}", self.path, size, ms),
            None => format!("{:<8}{:>10}{:>15}", self.path, size, "skipped"),
        }
    }
}

/// Times `fft2` (best of several runs) and `dft2_oracle` (one run) on a
/// seeded random `side x side` grid.
pub fn measure(side: usize) -> [Timing; 2] {
    let g = SampleSource::new(side as u64).complex_grid(side, side);

    let mut best = f64::INFINITY;
    let start = Instant::now();
    for _ in 0..FFT_MAX_REPS {
        let t = Instant::now();
        black_box(fft2(black_box(&g)));
        best = best.min(t.elapsed().as_secs_f64() * 1e3);
        if start.elapsed() > FFT_BUDGET {
            break;
        }
    }

    let oracle = (side <= ORACLE_MAX_SIDE).then(|| {
        let t = Instant::now();
        black_box(dft2_oracle(black_box(&g)));
        t.elapsed().as_secs_f64() * 1e3
    });

    [
        Timing {
            path: "fft2",
            side,
            millis: Some(best),
        },
        Timing {
            path: "oracle",
            side,
            millis: oracle,
        },
    ]
}
