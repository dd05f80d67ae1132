//! Binary caches for the divisor table and the zeta sample grid.
//!
//! Divisor cache: magic "ZDL1", limit as little-endian u64, then
//! d(1..=limit) as little-endian u32 values. Prefix sums are recomputed
//! on load and validated against the hyperbola identity, so a corrupted
//! payload cannot be used silently.
//!
//! Grid cache: magic "ZGR1", t_start/t_end/step as little-endian f64,
//! one method tag byte, then the |ζ(½+it)|² samples as little-endian
//! f64. Length and sample sanity are checked on load.
//!
//! Writes go to a temporary file in the same directory followed by a
//! rename, so concurrent readers never observe a partial file.

use crate::divisor::DivisorTable;
use crate::error::{Error, Result};
use crate::zeta::{GridMethod, ZetaSampleGrid};
use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

const DIVISOR_MAGIC: &[u8; 4] = b"ZDL1";
const GRID_MAGIC: &[u8; 4] = b"ZGR1";

fn corrupt(path: &Path, reason: impl Into<String>) -> Error {
    Error::CacheCorrupt {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

fn atomic_write(path: &Path, write_body: impl FnOnce(&mut BufWriter<fs::File>) -> Result<()>) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("cache"),
        std::process::id()
    ));
    {
        let mut writer = BufWriter::new(fs::File::create(&tmp)?);
        write_body(&mut writer)?;
        writer.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Serialize a divisor table ("ZDL1" format).
pub fn write_divisor_table(table: &DivisorTable, path: &Path) -> Result<()> {
    atomic_write(path, |w| {
        w.write_all(DIVISOR_MAGIC)?;
        w.write_all(&table.limit().to_le_bytes())?;
        for &d in &table.divisor_counts()[1..] {
            w.write_all(&d.to_le_bytes())?;
        }
        Ok(())
    })
}

/// Load a divisor table, rebuilding prefix sums and validating them
/// against the hyperbola identity.
pub fn read_divisor_table(path: &Path) -> Result<DivisorTable> {
    let bytes = fs::read(path)?;
    if bytes.len() < 12 || &bytes[0..4] != DIVISOR_MAGIC {
        return Err(corrupt(path, "bad magic or truncated header"));
    }
    let limit = u64::from_le_bytes(bytes[4..12].try_into().unwrap());
    let expected_len = 12 + 4 * limit as usize;
    if limit == 0 || bytes.len() != expected_len {
        return Err(corrupt(
            path,
            format!("length {} != expected {expected_len}", bytes.len()),
        ));
    }
    let mut d = Vec::with_capacity(limit as usize + 1);
    d.push(0u32);
    for chunk in bytes[12..].chunks_exact(4) {
        d.push(u32::from_le_bytes(chunk.try_into().unwrap()));
    }
    let table = DivisorTable::from_divisor_counts(limit, d);
    table
        .validate_hyperbola()
        .map_err(|e| corrupt(path, format!("prefix validation failed: {e}")))?;
    Ok(table)
}

/// Serialize a zeta grid ("ZGR1" format).
pub fn write_zeta_grid(grid: &ZetaSampleGrid, path: &Path) -> Result<()> {
    atomic_write(path, |w| {
        w.write_all(GRID_MAGIC)?;
        w.write_all(&grid.t_start().to_le_bytes())?;
        w.write_all(&grid.t_end().to_le_bytes())?;
        w.write_all(&grid.step().to_le_bytes())?;
        w.write_all(&[grid.method().tag_byte()])?;
        for &v in grid.samples() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    })
}

/// Load a zeta grid, checking the header, the sample count implied by
/// (t_start, t_end, step), and sample sanity.
pub fn read_zeta_grid(path: &Path) -> Result<ZetaSampleGrid> {
    let mut file = fs::File::open(path)?;
    let mut header = [0u8; 4 + 24 + 1];
    file.read_exact(&mut header)
        .map_err(|_| corrupt(path, "truncated header"))?;
    if &header[0..4] != GRID_MAGIC {
        return Err(corrupt(path, "bad magic"));
    }
    let t_start = f64::from_le_bytes(header[4..12].try_into().unwrap());
    let t_end = f64::from_le_bytes(header[12..20].try_into().unwrap());
    let step = f64::from_le_bytes(header[20..28].try_into().unwrap());
    let method = GridMethod::from_tag_byte(header[28])
        .ok_or_else(|| corrupt(path, format!("unknown method tag {}", header[28])))?;
    if !(step > 0.0) || !(t_end > t_start) || !t_start.is_finite() {
        return Err(corrupt(path, "nonsensical grid header"));
    }
    let count = ((t_end - t_start) / step).round() as usize + 1;
    let mut payload = Vec::new();
    file.read_to_end(&mut payload)?;
    if payload.len() != 8 * count {
        return Err(corrupt(
            path,
            format!("sample payload {} bytes, expected {}", payload.len(), 8 * count),
        ));
    }
    let mut values = Vec::with_capacity(count);
    for chunk in payload.chunks_exact(8) {
        let v = f64::from_le_bytes(chunk.try_into().unwrap());
        if !v.is_finite() || v < 0.0 {
            return Err(corrupt(path, format!("invalid sample {v}")));
        }
        values.push(v);
    }
    if values.len() % 2 == 0 {
        return Err(corrupt(path, "grid must hold an odd sample count"));
    }
    Ok(ZetaSampleGrid::assemble(t_start, step, values, method))
}

/// Load a cached divisor table if it exists, is intact, and covers
/// `limit`; otherwise sieve and (re)write the cache. Returns the table
/// and whether it was rebuilt.
pub fn load_or_build_divisor_table(path: &Path, limit: u64) -> Result<(DivisorTable, bool)> {
    if path.exists() {
        match read_divisor_table(path) {
            Ok(table) if table.limit() >= limit => return Ok((table, false)),
            Ok(_) | Err(Error::CacheCorrupt { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let table = DivisorTable::sieve(limit)?;
    write_divisor_table(&table, path)?;
    Ok((table, true))
}

/// Load a cached grid if it exists, is intact, starts at 0, matches the
/// step and covers `t_end`; otherwise build and (re)write. Returns the
/// grid and whether it was rebuilt.
pub fn load_or_build_zeta_grid(
    path: &Path,
    t_end: f64,
    step: f64,
    rs_order: u8,
) -> Result<(ZetaSampleGrid, bool)> {
    if path.exists() {
        match read_zeta_grid(path) {
            Ok(grid)
                if grid.t_start() == 0.0
                    && (grid.step() - step).abs() <= 1e-12 * step
                    && grid.t_end() >= t_end =>
            {
                return Ok((grid, false));
            }
            Ok(_) | Err(Error::CacheCorrupt { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let grid = ZetaSampleGrid::build_with_order(0.0, t_end, step, rs_order)?;
    write_zeta_grid(&grid, path)?;
    Ok((grid, true))
}
