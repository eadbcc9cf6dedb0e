//! Textual forms of 16-bit differences.
//!
//! Accepted: `0x0424`, `0424`, and four comma-separated 4-bit groups,
//! most significant first: `0000, 0100, 0010, 0100`.

use crate::error::{Error, Result};

pub fn parse_difference(text: &str) -> Result<u16> {
    let t = text.trim();
    let bad = || Error::BadDifference(text.to_string());
    if t.contains(',') {
        let groups: Vec<&str> = t.split(',').map(str::trim).collect();
        if groups.len() != 4 {
            return Err(bad());
        }
        let mut v = 0u16;
        for g in groups {
            if g.len() != 4 || !g.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(bad());
            }
            v = (v << 4) | u16::from_str_radix(g, 2).map_err(|_| bad())?;
        }
        return Ok(v);
    }
    let hex = t
        .strip_prefix("0x")
        .or_else(|| t.strip_prefix("0X"))
        .unwrap_or(t);
    if hex.is_empty() || hex.len() > 4 {
        return Err(bad());
    }
    u16::from_str_radix(hex, 16).map_err(|_| bad())
}

/// `0x0424`
pub fn format_hex(d: u16) -> String {
    format!("0x{d:04X}")
}

/// `0000, 0100, 0010, 0100`
pub fn format_nibbles(d: u16) -> String {
    (0..4)
        .map(|n| format!("{:04b}", (d >> (12 - 4 * n)) & 0xF))
        .collect::<Vec<_>>()
        .join(", ")
}
