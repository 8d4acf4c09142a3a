//! Dataset persistence: a versioned little-endian binary cache plus a CSV
//! mirror for inspection.
//!
//! Cache layout:
//!
//! ```text
//! magic   8 bytes  "GQHANDS\0"
//! version u32
//! width   u32      features per sample
//! n_train u32
//! n_test  u32
//! then n_train + n_test records of: label u8, width x f64
//! ```

use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use gqhan_core::train::Dataset;
use gqhan_core::{Label, Sample};

use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"GQHANDS\0";
pub const CACHE_VERSION: u32 = 1;

pub fn encode_cache(data: &Dataset) -> Result<Vec<u8>> {
    let width = data
        .train
        .first()
        .or(data.test.first())
        .map_or(0, |s| s.features.len());
    let all = data.train.iter().chain(&data.test);
    if all.clone().any(|s| s.features.len() != width) {
        return Err(Error::Config("samples have differing feature widths".into()));
    }
    let mut out = Vec::with_capacity(24 + (data.train.len() + data.test.len()) * (1 + 8 * width));
    out.extend_from_slice(CACHE_MAGIC);
    for v in [CACHE_VERSION, width as u32, data.train.len() as u32, data.test.len() as u32] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for s in all {
        out.push(s.label.class());
        for x in s.features.values() {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_cache(bytes: &[u8]) -> Result<Dataset> {
    let bad = |offset: usize, msg: &str| Error::Ingest(format!("dataset cache at byte {offset}: {msg}"));
    if bytes.len() < 24 || &bytes[..8] != CACHE_MAGIC {
        return Err(bad(0, "not a dataset cache"));
    }
    let word = |i: usize| u32::from_le_bytes(bytes[8 + 4 * i..12 + 4 * i].try_into().unwrap()) as usize;
    if word(0) != CACHE_VERSION as usize {
        return Err(bad(8, &format!("unsupported version {}", word(0))));
    }
    let (width, n_train, n_test) = (word(1), word(2), word(3));
    let record = 1 + 8 * width;
    let want = 24 + (n_train + n_test) * record;
    if bytes.len() != want {
        return Err(bad(bytes.len(), &format!("expected {want} bytes")));
    }
    let mut samples = Vec::with_capacity(n_train + n_test);
    for (i, rec) in bytes[24..].chunks_exact(record).enumerate() {
        let offset = 24 + i * record;
        let label = Label::from_class(rec[0]).map_err(|_| bad(offset, "label is not binary"))?;
        let features = rec[1..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        samples.push(Sample::new(features, label).map_err(|e| bad(offset, &e.to_string()))?);
    }
    let test = samples.split_off(n_train);
    Ok(Dataset { train: samples, test })
}

/// Hex SHA-256 of the cache encoding, used as the dataset identity.
pub fn dataset_hash(data: &Dataset) -> Result<String> {
    Ok(hex::encode(Sha256::digest(encode_cache(data)?)))
}

/// Writes `bytes` to `path` through a sibling temporary file and a rename,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    let write = || -> std::io::Result<()> {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        std::fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

pub fn write_cache(path: &Path, data: &Dataset) -> Result<()> {
    write_atomic(path, &encode_cache(data)?)
}

pub fn read_cache(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_cache(&bytes).map_err(|e| match e {
        Error::Ingest(msg) => Error::Ingest(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// `split,label,f0..f{w-1}`, one row per sample.
pub fn csv_bytes(data: &Dataset) -> Result<Vec<u8>> {
    let width = data.train.first().map_or(0, |s| s.features.len());
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["split".to_string(), "label".to_string()];
    header.extend((0..width).map(|i| format!("f{i}")));
    w.write_record(&header)?;
    for (split, samples) in [("train", &data.train), ("test", &data.test)] {
        for s in samples {
            let mut row = vec![split.to_string(), s.label.class().to_string()];
            row.extend(s.features.values().iter().map(|x| x.to_string()));
            w.write_record(&row)?;
        }
    }
    w.into_inner().map_err(|e| Error::io("dataset.csv", e.into_error()))
}

pub fn write_csv(path: &Path, data: &Dataset) -> Result<()> {
    write_atomic(path, &csv_bytes(data)?)
}
