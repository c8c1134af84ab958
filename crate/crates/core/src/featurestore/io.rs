//! On-disk bank formats.
//!
//! Binary (little-endian):
//!
//! ```text
//! "FBK1" | version u32 = 1 | feature_dim u32 | n_classes u32 | n_samples u64
//! per class:  split_tag u8 (0 base, 1 val, 2 novel) | name_len u16 | name bytes
//! per sample: class_id u32 | feature_dim × f32
//! ```
//!
//! CSV: header `class_id,f0,...,f{d-1}`, one sample per row, with the split
//! assignment in a companion JSON file `{"base":[..],"val":[..],"novel":[..]}`
//! (optionally `"names":[..]`). Feature values are stored with `f32`
//! precision in both formats and widened to `f64` on load.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::bank::{FeatureBank, Split};
use crate::error::{Error, Result};
use crate::numcore::Matrix;

pub const BINARY_MAGIC: &[u8; 4] = b"FBK1";
pub const BINARY_VERSION: u32 = 1;
/// Bytes before the per-class table.
pub const BINARY_HEADER_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BankFormat {
    Binary,
    Csv,
}

impl BankFormat {
    /// `.csv` means CSV, anything else binary.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => BankFormat::Csv,
            _ => BankFormat::Binary,
        }
    }
}

impl FromStr for BankFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" | "fbk" => Ok(BankFormat::Binary),
            "csv" => Ok(BankFormat::Csv),
            other => Err(Error::InvalidArgument(format!(
                "unknown bank format {other:?}, expected binary or csv"
            ))),
        }
    }
}

/// Companion split file of a CSV bank: `bank.csv` → `bank.splits.json`.
pub fn splits_path_for(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("splits.json")
}

pub fn load_bank(path: &Path, format: BankFormat) -> Result<FeatureBank> {
    match format {
        BankFormat::Binary => load_binary(path),
        BankFormat::Csv => load_csv(path, &splits_path_for(path)),
    }
}

pub fn save_bank(bank: &FeatureBank, path: &Path, format: BankFormat) -> Result<()> {
    check_storable(bank)?;
    match format {
        BankFormat::Binary => {
            let file = File::create(path).map_err(|e| Error::io(path, e))?;
            let mut w = BufWriter::new(file);
            write_binary(bank, &mut w)
                .and_then(|_| w.flush().map_err(|e| Error::io(path, e)))
                .map_err(|e| with_path(e, path))
        }
        BankFormat::Csv => save_csv(bank, path, &splits_path_for(path)),
    }
}

fn check_storable(bank: &FeatureBank) -> Result<()> {
    if let Some(i) = bank
        .features()
        .data()
        .iter()
        .position(|&v| !(v as f32).is_finite())
    {
        return Err(Error::Data(format!(
            "feature value {} at flat index {i} does not fit in f32",
            bank.features().data()[i]
        )));
    }
    if let Some(c) = bank
        .class_names()
        .iter()
        .position(|n| n.len() > u16::MAX as usize)
    {
        return Err(Error::Data(format!(
            "name of class {c} is longer than 65535 bytes"
        )));
    }
    Ok(())
}

fn with_path(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    }
}

pub fn load_binary(path: &Path) -> Result<FeatureBank> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_binary(&mut BufReader::new(file)).map_err(|e| with_path(e, path))
}

pub fn write_binary<W: Write>(bank: &FeatureBank, w: &mut W) -> Result<()> {
    let io = |e| Error::io("<writer>", e);
    let mut buf = Vec::with_capacity(BINARY_HEADER_LEN);
    buf.extend_from_slice(BINARY_MAGIC);
    buf.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    buf.extend_from_slice(&(bank.feature_dim() as u32).to_le_bytes());
    buf.extend_from_slice(&(bank.n_classes() as u32).to_le_bytes());
    buf.extend_from_slice(&(bank.n_samples() as u64).to_le_bytes());
    for (split, name) in bank.splits().iter().zip(bank.class_names()) {
        buf.push(split.tag());
        buf.extend_from_slice(&(name.len() as u16).to_le_bytes());
        buf.extend_from_slice(name.as_bytes());
    }
    w.write_all(&buf).map_err(io)?;

    let mut row = Vec::with_capacity(4 + 4 * bank.feature_dim());
    for (i, &label) in bank.labels().iter().enumerate() {
        row.clear();
        row.extend_from_slice(&label.to_le_bytes());
        for &x in bank.feature(i) {
            row.extend_from_slice(&(x as f32).to_le_bytes());
        }
        w.write_all(&row).map_err(io)?;
    }
    Ok(())
}

pub fn read_binary<R: Read>(r: &mut R) -> Result<FeatureBank> {
    let mut header = [0u8; BINARY_HEADER_LEN];
    read_exact(r, &mut header, "header")?;
    if &header[0..4] != BINARY_MAGIC {
        return Err(Error::Format(format!(
            "bad magic {:?}, expected {:?}",
            String::from_utf8_lossy(&header[0..4]),
            std::str::from_utf8(BINARY_MAGIC).unwrap()
        )));
    }
    let u32_at = |o: usize| u32::from_le_bytes(header[o..o + 4].try_into().unwrap());
    let version = u32_at(4);
    if version != BINARY_VERSION {
        return Err(Error::Format(format!(
            "unsupported version {version}, expected {BINARY_VERSION}"
        )));
    }
    let dim = u32_at(8) as usize;
    let n_classes = u32_at(12) as usize;
    let n_samples = u64::from_le_bytes(header[16..24].try_into().unwrap()) as usize;

    let mut splits = Vec::with_capacity(n_classes);
    let mut names = Vec::with_capacity(n_classes);
    for c in 0..n_classes {
        let mut entry = [0u8; 3];
        read_exact(r, &mut entry, "class table")?;
        let split = Split::from_tag(entry[0])
            .ok_or_else(|| Error::Format(format!("class {c} has split tag {}", entry[0])))?;
        let len = u16::from_le_bytes([entry[1], entry[2]]) as usize;
        let mut name = vec![0u8; len];
        read_exact(r, &mut name, "class name")?;
        let name = String::from_utf8(name)
            .map_err(|_| Error::Format(format!("name of class {c} is not UTF-8")))?;
        splits.push(split);
        names.push(name);
    }

    let mut labels = Vec::with_capacity(n_samples);
    let mut data = Vec::with_capacity(n_samples.saturating_mul(dim));
    let mut row = vec![0u8; 4 + 4 * dim];
    for _ in 0..n_samples {
        read_exact(r, &mut row, "sample")?;
        labels.push(u32::from_le_bytes(row[0..4].try_into().unwrap()));
        data.extend(
            row[4..]
                .chunks_exact(4)
                .map(|b| f32::from_le_bytes(b.try_into().unwrap()) as f64),
        );
    }
    let mut probe = [0u8; 1];
    if r.read(&mut probe).map_err(|e| Error::io("<reader>", e))? != 0 {
        return Err(Error::Format("trailing bytes after last sample".into()));
    }

    FeatureBank::new(Matrix::new(n_samples, dim, data)?, labels, splits, names)
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Format(format!("file truncated in {what}"))
        } else {
            Error::io("<reader>", e)
        }
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SplitMap {
    base: Vec<u32>,
    val: Vec<u32>,
    novel: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    names: Vec<String>,
}

pub fn load_csv(csv_path: &Path, splits_path: &Path) -> Result<FeatureBank> {
    let map_text = std::fs::read_to_string(splits_path).map_err(|e| Error::io(splits_path, e))?;
    let map: SplitMap = serde_json::from_str(&map_text)
        .map_err(|e| Error::Format(format!("{}: {e}", splits_path.display())))?;

    let mut assigned: BTreeMap<u32, Split> = BTreeMap::new();
    for (split, ids) in [
        (Split::Base, &map.base),
        (Split::Validation, &map.val),
        (Split::Novel, &map.novel),
    ] {
        for &id in ids {
            if let Some(prev) = assigned.insert(id, split) {
                return Err(Error::Validation(format!(
                    "class {id} is listed in both {prev} and {split}"
                )));
            }
        }
    }
    let n_classes = assigned.len();
    if let Some((&id, _)) = assigned.iter().find(|(&id, _)| id as usize >= n_classes) {
        return Err(Error::Validation(format!(
            "split map must cover class ids 0..{n_classes} exactly, found {id}"
        )));
    }
    let splits: Vec<Split> = assigned.into_values().collect();

    let file = File::open(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let header = loop {
        match lines.next() {
            Some((_, line)) => {
                let line = line.map_err(|e| Error::io(csv_path, e))?;
                if !line.trim().is_empty() {
                    break line;
                }
            }
            None => return Err(Error::Format("CSV file is empty".into())),
        }
    };
    let columns: Vec<&str> = header.split(',').map(str::trim).collect();
    let dim = columns.len().saturating_sub(1);
    let well_formed = columns.first() == Some(&"class_id")
        && columns[1..]
            .iter()
            .enumerate()
            .all(|(j, c)| *c == format!("f{j}"));
    if !well_formed || dim == 0 {
        return Err(Error::Format(format!(
            "CSV header must be class_id,f0,...,f{{d-1}}, got {header:?}"
        )));
    }

    let mut labels = Vec::new();
    let mut data = Vec::new();
    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(csv_path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let bad = |what: &str| Error::Format(format!("CSV line {}: {what}", lineno + 1));
        let label: u32 = fields
            .next()
            .unwrap_or("")
            .parse()
            .map_err(|_| bad("class_id is not a non-negative integer"))?;
        let mut count = 0;
        for f in fields {
            let v: f32 = f.parse().map_err(|_| bad(&format!("cannot parse {f:?}")))?;
            data.push(v as f64);
            count += 1;
        }
        if count != dim {
            return Err(bad(&format!(
                "{count} feature values, header declares {dim}"
            )));
        }
        labels.push(label);
    }

    let n = labels.len();
    FeatureBank::new(Matrix::new(n, dim, data)?, labels, splits, map.names)
}

pub fn save_csv(bank: &FeatureBank, csv_path: &Path, splits_path: &Path) -> Result<()> {
    check_storable(bank)?;
    let file = File::create(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let mut w = BufWriter::new(file);
    let io = |e| Error::io(csv_path, e);
    let mut line = String::from("class_id");
    for j in 0..bank.feature_dim() {
        line.push_str(&format!(",f{j}"));
    }
    writeln!(w, "{line}").map_err(io)?;
    for (i, label) in bank.labels().iter().enumerate() {
        line.clear();
        line.push_str(&label.to_string());
        for &x in bank.feature(i) {
            line.push(',');
            line.push_str(&(x as f32).to_string());
        }
        writeln!(w, "{line}").map_err(io)?;
    }
    w.flush().map_err(io)?;

    let ids = |s: Split| -> Vec<u32> { bank.classes_in(s).into_iter().map(|c| c as u32).collect() };
    let names = if bank.class_names().iter().all(String::is_empty) {
        Vec::new()
    } else {
        bank.class_names().to_vec()
    };
    let map = SplitMap {
        base: ids(Split::Base),
        val: ids(Split::Validation),
        novel: ids(Split::Novel),
        names,
    };
    let text = serde_json::to_string(&map)?;
    std::fs::write(splits_path, text).map_err(|e| Error::io(splits_path, e))
}
