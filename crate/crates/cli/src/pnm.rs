//! Netpbm reader and writer: P2/P5 (gray) and P3/P6 (RGB), maxval 255 only.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PnmError {
    #[error("bad magic number (expected P2, P3, P5 or P6)")]
    BadMagic,
    #[error("malformed header: {0}")]
    Header(&'static str),
    #[error("unsupported maxval {0} (only 255 is accepted)")]
    Maxval(u64),
    #[error("truncated payload: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed ASCII sample {0:?}")]
    Sample(String),
    #[error("invalid image: {0}")]
    Invalid(&'static str),
}

impl PnmError {
    /// Stable numeric code per failure kind.
    pub fn code(&self) -> u8 {
        match self {
            PnmError::BadMagic => 10,
            PnmError::Header(_) => 11,
            PnmError::Maxval(_) => 12,
            PnmError::Truncated { .. } => 13,
            PnmError::Sample(_) => 14,
            PnmError::Invalid(_) => 15,
        }
    }
}

/// 8-bit raster, row-major with interleaved channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    channels: usize,
    samples: Vec<u8>,
}

impl RasterImage {
    pub const MAXVAL: u8 = 255;

    pub fn new(
        width: usize,
        height: usize,
        channels: usize,
        samples: Vec<u8>,
    ) -> Result<Self, PnmError> {
        if width == 0 || height == 0 {
            return Err(PnmError::Invalid("width and height must be positive"));
        }
        if channels != 1 && channels != 3 {
            return Err(PnmError::Invalid("channels must be 1 or 3"));
        }
        if samples.len() != width * height * channels {
            return Err(PnmError::Invalid(
                "sample count is not width*height*channels",
            ));
        }
        Ok(Self {
            width,
            height,
            channels,
            samples,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn samples(&self) -> &[u8] {
        &self.samples
    }

    /// Sample at column `x`, row `y`, channel `c`.
    pub fn get(&self, x: usize, y: usize, c: usize) -> u8 {
        self.samples[(y * self.width + x) * self.channels + c]
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    /// Skips whitespace and `#` comments (to end of line).
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.pos < self.bytes.len() && !matches!(self.bytes[self.pos], b'\n' | b'\r')
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_blank();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, what: &'static str) -> Result<u64, PnmError> {
        let tok = self.token().ok_or(PnmError::Header(what))?;
        core::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(PnmError::Header(what))
    }
}

pub fn read_pnm(bytes: &[u8]) -> Result<RasterImage, PnmError> {
    let (channels, ascii) = match bytes.get(..2) {
        Some(b"P2") => (1, true),
        Some(b"P3") => (3, true),
        Some(b"P5") => (1, false),
        Some(b"P6") => (3, false),
        _ => return Err(PnmError::BadMagic),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(PnmError::BadMagic);
    }
    let width = cur.header_number("width")? as usize;
    let height = cur.header_number("height")? as usize;
    let maxval = cur.header_number("maxval")?;
    if width == 0 || height == 0 {
        return Err(PnmError::Header("zero dimension"));
    }
    if maxval != 255 {
        return Err(PnmError::Maxval(maxval));
    }
    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or(PnmError::Header("dimensions overflow"))?;

    let samples = if ascii {
        let mut samples = Vec::with_capacity(expected);
        while samples.len() < expected {
            let Some(tok) = cur.token() else {
                return Err(PnmError::Truncated {
                    expected,
                    found: samples.len(),
                });
            };
            let value = core::str::from_utf8(tok)
                .ok()
                .and_then(|s| s.parse::<u8>().ok())
                .ok_or_else(|| PnmError::Sample(String::from_utf8_lossy(tok).into_owned()))?;
            samples.push(value);
        }
        samples
    } else {
        // exactly one whitespace byte separates maxval from the raster
        match cur.bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(PnmError::Truncated { expected, found: 0 }),
        }
        let payload = &bytes[cur.pos..];
        if payload.len() < expected {
            return Err(PnmError::Truncated {
                expected,
                found: payload.len(),
            });
        }
        payload[..expected].to_vec()
    };
    RasterImage::new(width, height, channels, samples)
}

/// Binary encoding: P5 for gray, P6 for RGB, minimal header.
pub fn write_pnm(img: &RasterImage) -> Vec<u8> {
    let magic = if img.channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width, img.height).into_bytes();
    out.extend_from_slice(&img.samples);
    out
}
