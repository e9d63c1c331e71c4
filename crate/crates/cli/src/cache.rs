//! Binary cache of the `Sp(4,3)` element list.
//!
//! Each matrix is one little-endian `u32`: its 16 entries in row-major
//! order read as base-3 digits, entry `k` carrying weight `3^k`.

use std::fs;
use std::path::{Path, PathBuf};

use spcodes_core::symp::{self, GroupTable, Which};
use spcodes_core::{FieldCtx, MatrixGF};

use crate::error::CliError;

pub const FILE_NAME: &str = "sp4_q3.bin";

pub fn encode(m: &MatrixGF) -> u32 {
    m.entries()
        .iter()
        .rev()
        .fold(0u32, |acc, e| acc * 3 + e.index() as u32)
}

pub fn decode(ctx: &FieldCtx, mut word: u32) -> Option<MatrixGF> {
    let mut entries = Vec::with_capacity(16);
    for _ in 0..16 {
        entries.push(ctx.element((word % 3) as usize));
        word /= 3;
    }
    if word != 0 {
        return None;
    }
    MatrixGF::from_entries(4, entries).ok()
}

pub fn to_bytes(table: &GroupTable) -> Vec<u8> {
    table
        .elements()
        .unwrap_or(&[])
        .iter()
        .flat_map(|m| encode(m).to_le_bytes())
        .collect()
}

/// `None` when the bytes are not a valid `Sp(4,3)` list.
pub fn from_bytes(ctx: &FieldCtx, bytes: &[u8]) -> Option<GroupTable> {
    if !bytes.len().is_multiple_of(4) {
        return None;
    }
    let elements = bytes
        .chunks_exact(4)
        .map(|c| decode(ctx, u32::from_le_bytes(c.try_into().unwrap())))
        .collect::<Option<Vec<_>>>()?;
    GroupTable::from_elements(ctx, Which::Sp4, elements).ok()
}

pub enum Source {
    Computed,
    Loaded,
    Rebuilt,
}

/// Loads the cached group from `dir`, or enumerates it and writes the cache.
pub fn load_or_build(ctx: &FieldCtx, dir: &Path) -> Result<(GroupTable, Source), CliError> {
    let path: PathBuf = dir.join(FILE_NAME);
    let io = |source| CliError::Io {
        path: path.clone(),
        source,
    };
    let existing = match fs::read(&path) {
        Ok(b) => Some(b),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => None,
        Err(e) => return Err(io(e)),
    };
    if let Some(bytes) = &existing {
        if let Some(t) = from_bytes(ctx, bytes) {
            return Ok((t, Source::Loaded));
        }
    }
    let table = symp::enumerate_sp4(ctx)?;
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(&path, to_bytes(&table)).map_err(io)?;
    let source = if existing.is_some() {
        Source::Rebuilt
    } else {
        Source::Computed
    };
    Ok((table, source))
}
