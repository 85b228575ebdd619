//! Binary PGM (P5) and PPM (P6) input, PGM output.

use std::fs;
use std::path::Path;

use super::{to_luminance, GrayImage};
use crate::error::{Error, Result};

/// Reads a grayscale image from disk, dispatching on the file extension.
///
/// `.png` files require the `png` feature; everything else is parsed as
/// binary PNM.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let is_png = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("png"));
    if is_png {
        return read_png(path);
    }
    read_pgm(path)
}

#[cfg(feature = "png")]
fn read_png(path: &Path) -> Result<GrayImage> {
    let img = image::open(path).map_err(|e| Error::Parse {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let rgb = img.to_rgb8();
    let (w, h) = rgb.dimensions();
    if img.color().channel_count() <= 2 {
        let gray = img.to_luma8();
        return GrayImage::new(w as usize, h as usize, gray.pixels().map(|p| f64::from(p.0[0])).collect());
    }
    to_luminance(rgb.as_raw(), w as usize, h as usize)
}

#[cfg(not(feature = "png"))]
fn read_png(path: &Path) -> Result<GrayImage> {
    Err(Error::Parse {
        path: path.to_owned(),
        message: "PNG support was not compiled in (enable the `png` feature)".into(),
    })
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    decode_pnm(&bytes).map_err(|message| Error::Parse {
        path: path.to_owned(),
        message,
    })
}

pub fn write_pgm(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Encodes as P5 with maxval 255, rounding to the nearest integer level.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.data().iter().map(|v| v.round().clamp(0.0, 255.0) as u8));
    out
}

/// Decodes P5 (gray) or P6 (RGB, converted to luminance) with maxval ≤ 255.
pub fn decode_pnm(bytes: &[u8]) -> std::result::Result<GrayImage, String> {
    let mut cursor = Header { bytes, pos: 0 };
    let magic = cursor.token()?;
    let channels = match magic.as_str() {
        "P5" => 1,
        "P6" => 3,
        other => return Err(format!("unsupported PNM magic `{other}` (expected P5 or P6)")),
    };
    let width = cursor.number()?;
    let height = cursor.number()?;
    let maxval = cursor.number()?;
    if width == 0 || height == 0 {
        return Err("zero image dimension".into());
    }
    if maxval == 0 || maxval > 255 {
        return Err(format!("maxval {maxval} unsupported (16-bit samples are not handled)"));
    }
    // Exactly one whitespace byte separates the header from the raster.
    cursor.pos += 1;
    let need = width * height * channels;
    let raster = bytes
        .get(cursor.pos..cursor.pos + need)
        .ok_or_else(|| format!("truncated raster: need {need} bytes"))?;

    let scale = 255.0 / maxval as f64;
    let err = |e: Error| e.to_string();
    if channels == 1 {
        let data = raster.iter().map(|&b| (f64::from(b) * scale).min(255.0)).collect();
        GrayImage::new(width, height, data).map_err(err)
    } else if maxval == 255 {
        to_luminance(raster, width, height).map_err(err)
    } else {
        let scaled: Vec<u8> = raster
            .iter()
            .map(|&b| (f64::from(b) * scale).round().min(255.0) as u8)
            .collect();
        to_luminance(&scaled, width, height).map_err(err)
    }
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Header<'_> {
    fn token(&mut self) -> std::result::Result<String, String> {
        loop {
            match self.bytes.get(self.pos) {
                Some(b) if b.is_ascii_whitespace() => self.pos += 1,
                Some(b'#') => {
                    while self.bytes.get(self.pos).is_some_and(|&b| b != b'\n') {
                        self.pos += 1;
                    }
                }
                Some(_) => break,
                None => return Err("unexpected end of header".into()),
            }
        }
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            self.pos += 1;
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> std::result::Result<usize, String> {
        let t = self.token()?;
        t.parse().map_err(|_| format!("invalid header field `{t}`"))
    }
}
