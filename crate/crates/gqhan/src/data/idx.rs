//! IDX container parsing (the MNIST file format), gzipped or raw.

use std::io::Read;
use std::path::Path;

use flate2::read::GzDecoder;

use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 2051;
pub const LABELS_MAGIC: u32 = 2049;
pub const IMAGE_SIDE: usize = 28;
pub const IMAGE_PIXELS: usize = IMAGE_SIDE * IMAGE_SIDE;

/// One 28x28 greyscale image with its class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawImage {
    pub pixels: Box<[u8; IMAGE_PIXELS]>,
    pub label: u8,
}

/// Decoded unsigned-byte IDX payload.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxTensor {
    pub magic: u32,
    pub dims: Vec<usize>,
    pub data: Vec<u8>,
}

fn ingest(offset: usize, msg: impl std::fmt::Display) -> Error {
    Error::Ingest(format!("at byte {offset}: {msg}"))
}

/// Inflates gzip input; anything without the gzip signature passes through.
pub fn decompress(bytes: &[u8]) -> Result<Vec<u8>> {
    if bytes.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(bytes)
            .read_to_end(&mut out)
            .map_err(|e| ingest(out.len(), format!("gzip stream: {e}")))?;
        Ok(out)
    } else {
        Ok(bytes.to_vec())
    }
}

/// Parses an unsigned-byte IDX file (magic 2049 or 2051).
///
/// Offsets in errors refer to the decompressed stream.
pub fn parse_idx(bytes: &[u8]) -> Result<IdxTensor> {
    let raw = decompress(bytes)?;
    if raw.len() < 4 {
        return Err(ingest(raw.len(), "stream ends inside the magic number"));
    }
    let magic = u32::from_be_bytes([raw[0], raw[1], raw[2], raw[3]]);
    let ndims = match magic {
        IMAGES_MAGIC => 3,
        LABELS_MAGIC => 1,
        other => return Err(ingest(0, format!("unsupported magic number {other}"))),
    };
    let header = 4 + 4 * ndims;
    if raw.len() < header {
        return Err(ingest(raw.len(), "stream ends inside the dimension header"));
    }
    let dims: Vec<usize> = raw[4..header]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]) as usize)
        .collect();
    let len = dims
        .iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| ingest(4, format!("dimensions {dims:?} overflow")))?;
    let available = raw.len() - header;
    if available < len {
        return Err(ingest(
            raw.len(),
            format!("payload truncated: {available} of {len} bytes present"),
        ));
    }
    if available > len {
        return Err(ingest(header + len, format!("{} trailing bytes", available - len)));
    }
    Ok(IdxTensor {
        magic,
        dims,
        data: raw[header..].to_vec(),
    })
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Ingest(format!("{}: {e}", path.display())))
}

fn with_path<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Ingest(msg) => Error::Ingest(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Reads an image file and its label file into [`RawImage`]s.
pub fn load_images(images: &Path, labels: &Path) -> Result<Vec<RawImage>> {
    let img = with_path(images, parse_idx(&read(images)?))?;
    let lab = with_path(labels, parse_idx(&read(labels)?))?;
    images_from_tensors(&img, &lab).map_err(|e| match e {
        Error::Ingest(msg) => Error::Ingest(format!(
            "{} / {}: {msg}",
            images.display(),
            labels.display()
        )),
        other => other,
    })
}

/// Pairs an image tensor with a label tensor.
pub fn images_from_tensors(images: &IdxTensor, labels: &IdxTensor) -> Result<Vec<RawImage>> {
    if images.magic != IMAGES_MAGIC || labels.magic != LABELS_MAGIC {
        return Err(Error::Ingest("expected an image file and a label file".into()));
    }
    if images.dims[1..] != [IMAGE_SIDE, IMAGE_SIDE] {
        return Err(Error::Ingest(format!(
            "images are {:?}, expected 28x28",
            &images.dims[1..]
        )));
    }
    if images.dims[0] != labels.dims[0] {
        return Err(Error::Ingest(format!(
            "{} images but {} labels",
            images.dims[0], labels.dims[0]
        )));
    }
    images
        .data
        .chunks_exact(IMAGE_PIXELS)
        .zip(&labels.data)
        .enumerate()
        .map(|(i, (px, &label))| {
            if label > 9 {
                return Err(ingest(8 + i, format!("label {label} outside 0..=9")));
            }
            let pixels: Box<[u8; IMAGE_PIXELS]> = px.to_vec().into_boxed_slice().try_into().unwrap();
            Ok(RawImage { pixels, label })
        })
        .collect()
}
