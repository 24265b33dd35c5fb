//! Shared pieces of machine-readable output: provenance and number
//! formatting.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: &str = "1";

/// Significant digits of every floating-point field in JSON and CSV output.
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Serialize)]
pub struct Provenance {
    pub schema_version: &'static str,
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub input_sha256: Vec<String>,
    pub float_precision: String,
}

impl Provenance {
    pub fn new(inputs: &[&[u8]]) -> Self {
        Provenance {
            schema_version: SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            input_sha256: inputs.iter().map(|b| sha256_hex(b)).collect(),
            float_precision: format!("{SIGNIFICANT_DIGITS} significant digits"),
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `x` rounded to twelve significant digits, in plain decimal notation when
/// the exponent is moderate and scientific notation otherwise.
pub fn sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-6..=15).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
    let fixed = format!("{x:.decimals$}");
    if fixed.contains('.') {
        fixed.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        fixed
    }
}

/// Fixed number of decimals, for human-readable lines.
pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}
