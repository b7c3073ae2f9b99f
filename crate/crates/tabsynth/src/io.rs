//! PNG encoding for page images and masks.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ExtendedColorType, ImageEncoder};
use tabsynth_core::raster::{Channels, MaskImage, RasterImage};

use crate::error::DatasetError;

fn encode(width: u32, height: u32, pixels: &[u8], color: ExtendedColorType) -> Result<Vec<u8>, DatasetError> {
    let mut buf = Vec::new();
    PngEncoder::new_with_quality(Cursor::new(&mut buf), CompressionType::Default, FilterType::Adaptive)
        .write_image(pixels, width, height, color)?;
    Ok(buf)
}

pub fn encode_image(image: &RasterImage) -> Result<Vec<u8>, DatasetError> {
    let color = match image.channels() {
        Channels::Gray => ExtendedColorType::L8,
        Channels::Rgb => ExtendedColorType::Rgb8,
    };
    encode(image.width(), image.height(), image.pixels(), color)
}

pub fn encode_mask(mask: &MaskImage) -> Result<Vec<u8>, DatasetError> {
    encode(mask.width(), mask.height(), mask.pixels(), ExtendedColorType::L8)
}

pub fn write_image(path: &Path, image: &RasterImage) -> Result<(), DatasetError> {
    write_bytes(path, &encode_image(image)?)
}

pub fn write_mask(path: &Path, mask: &MaskImage) -> Result<(), DatasetError> {
    write_bytes(path, &encode_mask(mask)?)
}

pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    fs::write(path, bytes).map_err(|e| DatasetError::io(path, e))
}

fn decode(path: &Path) -> Result<image::DynamicImage, DatasetError> {
    let bytes = fs::read(path).map_err(|e| DatasetError::io(path, e))?;
    image::load_from_memory_with_format(&bytes, image::ImageFormat::Png).map_err(|source| DatasetError::Image {
        path: path.to_owned(),
        source,
    })
}

pub fn read_image(path: &Path) -> Result<RasterImage, DatasetError> {
    let rgb = decode(path)?.into_rgb8();
    let (w, h) = rgb.dimensions();
    Ok(RasterImage::from_raw(w, h, Channels::Rgb, rgb.into_raw())?)
}

/// Single-channel values as stored, without any binarization.
pub fn read_gray(path: &Path) -> Result<(u32, u32, Vec<u8>), DatasetError> {
    let gray = decode(path)?.into_luma8();
    let (w, h) = gray.dimensions();
    Ok((w, h, gray.into_raw()))
}

/// Fails on any value other than 0 or 255.
pub fn read_mask(path: &Path) -> Result<MaskImage, DatasetError> {
    let (w, h, px) = read_gray(path)?;
    MaskImage::from_raw(w, h, px).map_err(|source| DatasetError::Mask { path: path.to_owned(), source })
}
