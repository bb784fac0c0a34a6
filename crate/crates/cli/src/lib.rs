//! Image IO and the command-line front end for `fourierup-core`.
//!
//! Images are binary or ASCII Netpbm (PGM/PPM) with maxval 255. Each channel
//! is scaled to `[0, 1]`, up-sampled, clamped and written back as 8 bits.

pub mod bench;
pub mod cli;
pub mod pnm;
pub mod raster;
pub mod text;

pub use pnm::{read_pnm, write_pnm, PnmError, RasterImage};
pub use raster::{psnr, PSNR_CAP_DB};
