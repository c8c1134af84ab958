//! Self-describing model checkpoints.
//!
//! ```text
//! "CCF1" | version u32 = 1 | feature_dim u32 | hidden_dim u32 | latent_dim u32
//! | W1, b1, W2, b2, W3, b3 as little-endian f64, row-major
//! | trailer_len u64 | JSON trailer (CheckpointMeta)
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::network::CcfModel;
use super::train::TrainConfig;
use crate::error::{Error, Result};
use crate::numcore::Matrix;
use crate::preprocess::BoxCoxParams;

pub const CHECKPOINT_MAGIC: &[u8; 4] = b"CCF1";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Everything needed to reuse a model: how it was trained and which
/// transform its inputs must go through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointMeta {
    pub train_config: TrainConfig,
    /// `None` when features were used untransformed.
    pub boxcox: Option<BoxCoxParams>,
    /// Free-form provenance, e.g. the effective run configuration.
    #[serde(default)]
    pub provenance: serde_json::Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub model: CcfModel,
    pub meta: CheckpointMeta,
}

pub fn write_checkpoint<W: Write>(ckpt: &Checkpoint, w: &mut W) -> Result<()> {
    let m = &ckpt.model;
    if m.architecture() != &ckpt.meta.train_config.architecture {
        return Err(Error::InvalidArgument(
            "checkpoint metadata describes a different architecture".into(),
        ));
    }
    let io = |e| Error::io("<writer>", e);
    let mut buf = Vec::with_capacity(20 + 8 * m.n_parameters());
    buf.extend_from_slice(CHECKPOINT_MAGIC);
    buf.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
    for d in [m.feature_dim(), m.hidden_dim(), m.latent_dim()] {
        buf.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for b in m.buffers() {
        for v in b {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    let trailer = serde_json::to_vec(&ckpt.meta)?;
    buf.extend_from_slice(&(trailer.len() as u64).to_le_bytes());
    buf.extend_from_slice(&trailer);
    w.write_all(&buf).map_err(io)
}

pub fn read_checkpoint<R: Read>(r: &mut R) -> Result<Checkpoint> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)
        .map_err(|e| Error::io("<reader>", e))?;
    let mut cursor = bytes.as_slice();
    let mut take = |n: usize, what: &str| -> Result<&[u8]> {
        if cursor.len() < n {
            return Err(Error::Format(format!("checkpoint truncated in {what}")));
        }
        let (head, tail) = cursor.split_at(n);
        cursor = tail;
        Ok(head)
    };
    if take(4, "magic")? != CHECKPOINT_MAGIC {
        return Err(Error::Format("not a CCF1 checkpoint".into()));
    }
    let u32_le = |b: &[u8]| u32::from_le_bytes(b.try_into().unwrap());
    let version = u32_le(take(4, "header")?);
    if version != CHECKPOINT_VERSION {
        return Err(Error::Format(format!(
            "unsupported checkpoint version {version}"
        )));
    }
    let d = u32_le(take(4, "header")?) as usize;
    let h = u32_le(take(4, "header")?) as usize;
    let c = u32_le(take(4, "header")?) as usize;
    let mut floats = |n: usize, what: &str| -> Result<Vec<f64>> {
        let raw = take(
            n.checked_mul(8)
                .ok_or_else(|| Error::Format("size overflow".into()))?,
            what,
        )?;
        Ok(raw
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().unwrap()))
            .collect())
    };
    let w1 = Matrix::new(d, h, floats(d * h, "W1")?)?;
    let b1 = floats(h, "b1")?;
    let w2 = Matrix::new(h, c, floats(h * c, "W2")?)?;
    let b2 = floats(c, "b2")?;
    let w3 = Matrix::new(c, d, floats(c * d, "W3")?)?;
    let b3 = floats(d, "b3")?;
    let len = u64::from_le_bytes(take(8, "trailer length")?.try_into().unwrap()) as usize;
    let trailer = take(len, "trailer")?;
    let meta: CheckpointMeta = serde_json::from_slice(trailer)
        .map_err(|e| Error::Format(format!("checkpoint trailer: {e}")))?;
    if !cursor.is_empty() {
        return Err(Error::Format(
            "trailing bytes after checkpoint trailer".into(),
        ));
    }
    let model = CcfModel::from_parts(meta.train_config.architecture, w1, b1, w2, b2, w3, b3)
        .map_err(|e| Error::Format(format!("checkpoint parameters: {e}")))?;
    Ok(Checkpoint { model, meta })
}

pub fn save_checkpoint(ckpt: &Checkpoint, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_checkpoint(ckpt, &mut w)?;
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_checkpoint(&mut BufReader::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}
