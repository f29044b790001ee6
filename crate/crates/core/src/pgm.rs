//! Square grayscale images as PGM files.
//!
//! Binary `P5` with maxval 255 is always written; both `P2` (ASCII) and
//! `P5` are read. Images must be square — a non-square input would silently
//! change the lattice side, and with it the period, so it is rejected
//! rather than padded. The `x` coordinate is the column and `y` the row,
//! origin at the top-left pixel, rows stored top to bottom.

use crate::error::{Error, Result};
use crate::image::Configuration;
use crate::map::Modulus;

/// Serializes a configuration as binary PGM (`P5`, maxval 255).
pub fn save_pgm(c: &Configuration) -> Vec<u8> {
    let n = c.side();
    let mut out = format!("P5\n{n} {n}\n255\n").into_bytes();
    out.extend_from_slice(c.cells());
    out
}

/// Parses a PGM image, requiring maxval 255.
pub fn load_pgm(bytes: &[u8]) -> Result<Configuration> {
    let (configuration, rescaled) = load(bytes, true)?;
    debug_assert!(rescaled.is_none());
    Ok(configuration)
}

/// Parses a PGM image, rescaling samples to 0..=255 when the maxval is not
/// 255; the second value is the original maxval when rescaling happened.
pub fn load_pgm_lenient(bytes: &[u8]) -> Result<(Configuration, Option<u32>)> {
    load(bytes, false)
}

/// Snapshot file name for one iteration count: `step_0000.pgm`, zero-padded
/// to four digits, growing as needed past 9999.
pub fn snapshot_filename(step: u64) -> String {
    format!("step_{step:04}.pgm")
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c => self.pos += 1,
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn next_uint(&mut self, what: &str) -> Result<u64> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::Format(format!("expected {what} in PGM header")));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<u64>()
            .map_err(|_| Error::Format(format!("{what} out of range: {text}")))
    }

    fn at_end_ignoring_whitespace(&mut self) -> bool {
        self.skip_whitespace_and_comments();
        self.pos == self.bytes.len()
    }
}

fn load(bytes: &[u8], strict: bool) -> Result<(Configuration, Option<u32>)> {
    let magic = bytes
        .get(0..2)
        .ok_or_else(|| Error::Format("truncated PGM".into()))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        _ => {
            return Err(Error::Format(format!(
                "bad magic {:?}, expected P2 or P5",
                String::from_utf8_lossy(magic)
            )))
        }
    };
    let mut cursor = Cursor { bytes, pos: 2 };
    let width = cursor.next_uint("width")?;
    let height = cursor.next_uint("height")?;
    let maxval = cursor.next_uint("maxval")?;
    if width != height {
        return Err(Error::Format(format!("non-square image {width}x{height}")));
    }
    if width == 0 {
        return Err(Error::Format("zero-sized image".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Format(format!("maxval {maxval} outside 1..=65535")));
    }
    if strict && maxval != 255 {
        return Err(Error::Format(format!("maxval {maxval}, expected 255")));
    }
    let count = width
        .checked_mul(height)
        .and_then(|c| usize::try_from(c).ok())
        .ok_or_else(|| Error::Format(format!("image {width}x{height} is too large")))?;
    let samples: Vec<u64> = if binary {
        // Exactly one whitespace byte separates the maxval from the raster.
        match bytes.get(cursor.pos) {
            Some(b' ' | b'\t' | b'\r' | b'\n') => cursor.pos += 1,
            _ => {
                return Err(Error::Format(
                    "missing raster separator after maxval".into(),
                ))
            }
        }
        let body = &bytes[cursor.pos..];
        let bytes_per_sample = if maxval < 256 { 1 } else { 2 };
        let expected = count * bytes_per_sample;
        if body.len() < expected {
            return Err(Error::Format(format!(
                "raster has {} bytes, expected {expected}",
                body.len()
            )));
        }
        if body.len() > expected {
            return Err(Error::Format("trailing data after raster".into()));
        }
        if bytes_per_sample == 1 {
            body.iter().map(|&b| b as u64).collect()
        } else {
            body.chunks_exact(2)
                .map(|pair| u64::from(pair[0]) << 8 | u64::from(pair[1]))
                .collect()
        }
    } else {
        let mut values = Vec::with_capacity(count);
        for _ in 0..count {
            values.push(cursor.next_uint("sample")?);
        }
        if !cursor.at_end_ignoring_whitespace() {
            return Err(Error::Format("trailing data after raster".into()));
        }
        values
    };
    for &v in &samples {
        if v > maxval {
            return Err(Error::Format(format!("sample {v} exceeds maxval {maxval}")));
        }
    }
    let cells: Vec<u8> = if maxval == 255 {
        samples.iter().map(|&v| v as u8).collect()
    } else {
        samples
            .iter()
            .map(|&v| ((v * 255 + maxval / 2) / maxval) as u8)
            .collect()
    };
    let configuration = Configuration::new(Modulus::new(width)?, cells)?;
    let rescaled = (maxval != 255).then_some(maxval as u32);
    Ok((configuration, rescaled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: u64) -> Configuration {
        let cells: Vec<u8> = (0..n * n).map(|i| (i * 7 % 256) as u8).collect();
        Configuration::new(Modulus::new(n).unwrap(), cells).unwrap()
    }

    #[test]
    fn save_load_round_trip_is_bit_exact() {
        let c = ramp(9);
        let bytes = save_pgm(&c);
        assert_eq!(load_pgm(&bytes).unwrap(), c);
        assert_eq!(save_pgm(&load_pgm(&bytes).unwrap()), bytes);
    }

    #[test]
    fn ascii_and_binary_encodings_agree() {
        let values = [0u8, 7, 255, 10, 128, 9, 1, 2, 3];
        let mut p2 = String::from("P2\n# comment\n3 3\n255\n");
        for v in values {
            p2.push_str(&format!("{v} "));
        }
        let mut p5 = b"P5\n3 3\n255\n".to_vec();
        p5.extend_from_slice(&values);
        assert_eq!(load_pgm(p2.as_bytes()).unwrap(), load_pgm(&p5).unwrap());
    }

    #[test]
    fn non_square_is_rejected() {
        let mut p5 = b"P5\n2 3\n255\n".to_vec();
        p5.extend_from_slice(&[0; 6]);
        let err = load_pgm(&p5).unwrap_err();
        assert!(err.to_string().contains("non-square"), "{err}");
    }

    #[test]
    fn bad_magic_is_rejected() {
        assert!(load_pgm(b"P6\n2 2\n255\n1234").is_err());
        assert!(load_pgm(b"hello").is_err());
        assert!(load_pgm(b"").is_err());
    }

    #[test]
    fn truncated_raster_is_rejected() {
        let mut p5 = b"P5\n3 3\n255\n".to_vec();
        p5.extend_from_slice(&[0; 8]);
        assert!(load_pgm(&p5).is_err());
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let mut p5 = b"P5\n2 2\n255\n".to_vec();
        p5.extend_from_slice(&[0; 5]);
        assert!(load_pgm(&p5).is_err());
    }

    #[test]
    fn strict_mode_rejects_other_maxvals() {
        let p2 = b"P2\n2 2\n15\n0 5 10 15";
        assert!(load_pgm(p2).is_err());
    }

    #[test]
    fn lenient_mode_rescales_with_notice() {
        let p2 = b"P2\n2 2\n15\n0 5 10 15";
        let (c, rescaled) = load_pgm_lenient(p2).unwrap();
        assert_eq!(rescaled, Some(15));
        assert_eq!(c.cells(), &[0, 85, 170, 255]);
    }

    #[test]
    fn lenient_mode_reads_two_byte_samples() {
        let mut p5 = b"P5\n2 2\n65535\n".to_vec();
        for sample in [0u16, 21845, 43690, 65535] {
            p5.extend_from_slice(&sample.to_be_bytes());
        }
        let (c, rescaled) = load_pgm_lenient(&p5).unwrap();
        assert_eq!(rescaled, Some(65535));
        assert_eq!(c.cells(), &[0, 85, 170, 255]);
    }

    #[test]
    fn sample_above_maxval_is_rejected() {
        let p2 = b"P2\n2 2\n10\n0 5 11 10";
        assert!(load_pgm_lenient(p2).is_err());
    }

    #[test]
    fn comments_are_skipped_in_headers() {
        let mut p5 = b"P5\n# width and height\n2 2\n# maxval\n255\n".to_vec();
        p5.extend_from_slice(&[9, 8, 7, 6]);
        let c = load_pgm(&p5).unwrap();
        assert_eq!(c.cells(), &[9, 8, 7, 6]);
    }

    #[test]
    fn snapshot_names_are_zero_padded() {
        assert_eq!(snapshot_filename(0), "step_0000.pgm");
        assert_eq!(snapshot_filename(42), "step_0042.pgm");
        assert_eq!(snapshot_filename(12345), "step_12345.pgm");
    }
}
