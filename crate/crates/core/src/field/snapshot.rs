//! Snapshot file format.
//!
//! Layout: magic bytes `QTNSNAP1\n`, one line of UTF-8 JSON metadata, then
//! raw little-endian f64 arrays, row-major, in the order of the header's
//! field list. Round trips are bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

pub const SNAPSHOT_MAGIC: &[u8; 9] = b"QTNSNAP1\n";

/// Model parameters recorded in the header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    #[serde(rename = "L1")]
    pub l1: f64,
    #[serde(rename = "L2")]
    pub l2: f64,
    #[serde(rename = "L3")]
    pub l3: f64,
    pub xi: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    pub nu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub schema: u32,
    pub nx: usize,
    pub ny: usize,
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Ly")]
    pub ly: f64,
    pub t: f64,
    pub eps: f64,
    pub params: SnapshotParams,
    pub fields: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub meta: SnapshotMeta,
    /// One (ny, nx) array per header field, in header order.
    pub data: Vec<Array2<f64>>,
}

impl Snapshot {
    pub fn field(&self, name: &str) -> Option<&Array2<f64>> {
        self.meta
            .fields
            .iter()
            .position(|f| f == name)
            .map(|i| &self.data[i])
    }
}

/// Write a snapshot; `fields` must match `meta.fields` in order and count.
pub fn save_snapshot(path: &Path, meta: &SnapshotMeta, fields: &[&Array2<f64>]) -> Result<()> {
    assert_eq!(meta.fields.len(), fields.len(), "field list mismatch");
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(SNAPSHOT_MAGIC)?;
    let mut header = serde_json::to_vec(meta)?;
    header.push(b'\n');
    w.write_all(&header)?;
    for (name, arr) in meta.fields.iter().zip(fields.iter()) {
        let expected = meta.nx * meta.ny;
        if arr.len() != expected {
            return Err(CoreError::SnapshotDimensions {
                field: name.clone(),
                expected,
                actual: arr.len(),
            });
        }
        let slice = arr.as_slice().expect("row-major layout");
        let mut bytes = Vec::with_capacity(slice.len() * 8);
        for v in slice {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        w.write_all(&bytes)?;
    }
    w.flush()?;
    Ok(())
}

fn read_header(r: &mut impl Read) -> Result<SnapshotMeta> {
    let mut magic = [0u8; 9];
    r.read_exact(&mut magic).map_err(|_| CoreError::SnapshotMagic)?;
    if &magic != SNAPSHOT_MAGIC {
        return Err(CoreError::SnapshotMagic);
    }
    let mut line = Vec::new();
    let mut byte = [0u8; 1];
    loop {
        r.read_exact(&mut byte).map_err(|_| CoreError::SnapshotMagic)?;
        if byte[0] == b'\n' {
            break;
        }
        line.push(byte[0]);
        if line.len() > 1 << 20 {
            return Err(CoreError::SnapshotMagic);
        }
    }
    Ok(serde_json::from_slice(&line)?)
}

/// Read only the metadata line, without loading the arrays.
pub fn load_snapshot_header(path: &Path) -> Result<SnapshotMeta> {
    let mut r = BufReader::new(File::open(path)?);
    read_header(&mut r)
}

pub fn load_snapshot(path: &Path) -> Result<Snapshot> {
    let mut r = BufReader::new(File::open(path)?);
    let meta = read_header(&mut r)?;
    let n = meta.nx * meta.ny;
    let mut data = Vec::with_capacity(meta.fields.len());
    for name in &meta.fields {
        let mut bytes = vec![0u8; n * 8];
        r.read_exact(&mut bytes)
            .map_err(|_| CoreError::SnapshotTruncated {
                field: name.clone(),
            })?;
        let values: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let arr = Array2::from_shape_vec((meta.ny, meta.nx), values).map_err(|_| {
            CoreError::SnapshotDimensions {
                field: name.clone(),
                expected: n,
                actual: 0,
            }
        })?;
        data.push(arr);
    }
    // Trailing garbage means the header lied about the field list.
    let mut extra = [0u8; 1];
    if r.read(&mut extra)? != 0 {
        return Err(CoreError::SnapshotDimensions {
            field: "<trailing>".to_string(),
            expected: 0,
            actual: 1,
        });
    }
    Ok(Snapshot { meta, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn demo_meta(nx: usize, ny: usize, fields: Vec<String>) -> SnapshotMeta {
        SnapshotMeta {
            schema: 1,
            nx,
            ny,
            lx: 1.0,
            ly: 1.0,
            t: 0.125,
            eps: 0.03,
            params: SnapshotParams {
                a: 1.0 / 3.0,
                b: 3.0,
                c: 1.0,
                l1: 1.0,
                l2: 0.0,
                l3: 0.0,
                xi: 0.0,
                gamma: 1.0,
                nu: 1.0,
            },
            fields,
        }
    }

    #[test]
    fn roundtrip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.qtn");
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let (ny, nx) = (4, 8);
        let arrays: Vec<Array2<f64>> = (0..3)
            .map(|_| Array2::from_shape_fn((ny, nx), |_| rng.gen_range(-1e3..1e3)))
            .collect();
        let meta = demo_meta(nx, ny, vec!["q0".into(), "q1".into(), "vx".into()]);
        let refs: Vec<&Array2<f64>> = arrays.iter().collect();
        save_snapshot(&path, &meta, &refs).unwrap();
        let back = load_snapshot(&path).unwrap();
        assert_eq!(back.meta, meta);
        for (a, b) in arrays.iter().zip(back.data.iter()) {
            for (x, y) in a.iter().zip(b.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
        assert!(back.field("vx").is_some());
        assert!(back.field("nope").is_none());
    }

    #[test]
    fn header_only_read_skips_arrays() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.qtn");
        let arr = Array2::from_elem((2, 2), 3.5);
        let meta = demo_meta(2, 2, vec!["q0".into()]);
        save_snapshot(&path, &meta, &[&arr]).unwrap();
        let header = load_snapshot_header(&path).unwrap();
        assert_eq!(header, meta);
    }

    #[test]
    fn corrupted_magic_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.qtn");
        let arr = Array2::from_elem((2, 2), 1.0);
        let meta = demo_meta(2, 2, vec!["q0".into()]);
        save_snapshot(&path, &meta, &[&arr]).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        bytes[0] = b'X';
        std::fs::write(&path, &bytes).unwrap();
        assert!(matches!(
            load_snapshot(&path),
            Err(CoreError::SnapshotMagic)
        ));
    }

    #[test]
    fn truncated_payload_names_the_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("state.qtn");
        let arr = Array2::from_elem((4, 4), 2.0);
        let meta = demo_meta(4, 4, vec!["q0".into(), "q1".into()]);
        save_snapshot(&path, &meta, &[&arr, &arr]).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 40]).unwrap();
        match load_snapshot(&path) {
            Err(CoreError::SnapshotTruncated { field }) => assert_eq!(field, "q1"),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn roundtrip_arbitrary_values(values in proptest::collection::vec(-1e12f64..1e12, 12)) {
            let dir = tempfile::tempdir().unwrap();
            let path = dir.path().join("state.qtn");
            let arr = Array2::from_shape_vec((3, 4), values).unwrap();
            let meta = demo_meta(4, 3, vec!["f".into()]);
            save_snapshot(&path, &meta, &[&arr]).unwrap();
            let back = load_snapshot(&path).unwrap();
            for (x, y) in arr.iter().zip(back.data[0].iter()) {
                prop_assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
