use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;
use crate::spectral::SpectralField;

/// Canonical float formatting: 17 significant digits, scientific notation.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// RFC 4180 CSV writer: header row, CRLF line endings, canonical float
/// formatting.
pub struct CsvWriter {
    buf: String,
    columns: usize,
}

impl CsvWriter {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str(&header.join(","));
        buf.push_str("\r\n");
        Self {
            buf,
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "column count mismatch");
        self.buf.push_str(&fields.join(","));
        self.buf.push_str("\r\n");
    }

    pub fn row_mixed(&mut self, label: &str, values: &[f64]) {
        let mut fields = vec![label.to_string()];
        fields.extend(values.iter().map(|&v| format_float(v)));
        self.row(&fields);
    }

    pub fn row_floats(&mut self, values: &[f64]) {
        let fields: Vec<String> = values.iter().map(|&v| format_float(v)).collect();
        self.row(&fields);
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        fs::write(path, self.buf.as_bytes())?;
        Ok(())
    }
}

/// JSON with stable key order (struct declaration order; maps are sorted).
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text.as_bytes())?;
    Ok(())
}

/// FNV-1a 64-bit hash of the canonical config serialization.
pub fn fnv1a64(data: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in data {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    hash
}

/// Binary snapshot dump: header (N, M, stride, count as little-endian u32),
/// then per snapshot the f64 time followed by 2N little-endian f64 values
/// (re, im per mode).
pub fn write_snapshots(
    path: &Path,
    n_max: u32,
    m_phys: u32,
    stride: u32,
    times: &[f64],
    states: &[SpectralField],
) -> Result<()> {
    assert_eq!(times.len(), states.len());
    let mut file = fs::File::create(path)?;
    file.write_all(&n_max.to_le_bytes())?;
    file.write_all(&m_phys.to_le_bytes())?;
    file.write_all(&stride.to_le_bytes())?;
    file.write_all(&(states.len() as u32).to_le_bytes())?;
    for (t, s) in times.iter().zip(states) {
        file.write_all(&t.to_le_bytes())?;
        for c in s.coeffs() {
            file.write_all(&c.re.to_le_bytes())?;
            file.write_all(&c.im.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read back a snapshot dump (used by `report` and tests).
pub fn read_snapshots(path: &Path) -> Result<(u32, u32, u32, Vec<(f64, Vec<(f64, f64)>)>)> {
    let data = fs::read(path)?;
    let u32_at = |off: usize| u32::from_le_bytes(data[off..off + 4].try_into().unwrap());
    let n_max = u32_at(0);
    let m_phys = u32_at(4);
    let stride = u32_at(8);
    let count = u32_at(12) as usize;
    let mut out = Vec::with_capacity(count);
    let mut off = 16;
    let f64_at = |off: usize| f64::from_le_bytes(data[off..off + 8].try_into().unwrap());
    for _ in 0..count {
        let t = f64_at(off);
        off += 8;
        let mut coeffs = Vec::with_capacity(n_max as usize);
        for _ in 0..n_max {
            let re = f64_at(off);
            let im = f64_at(off + 8);
            off += 16;
            coeffs.push((re, im));
        }
        out.push((t, coeffs));
    }
    Ok((n_max, m_phys, stride, out))
}

/// Root directory for run outputs: $SKDVB_OUT or ./runs.
pub fn output_root() -> PathBuf {
    std::env::var_os("SKDVB_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs"))
}
