//! Reals rendered with nine decimal places in every structured output, so
//! epsilon-level comparisons can be audited from the text.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};

/// Wrapper that serializes as a JSON number with exactly nine decimals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixed9(pub f64);

impl Serialize for Fixed9 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_str(if self.0 > 0.0 { "inf" } else { "nan" });
        }
        let number: serde_json::Number = format_fixed(self.0).parse().map_err(S::Error::custom)?;
        number.serialize(s)
    }
}

pub fn format_fixed(v: f64) -> String {
    let text = format!("{v:.9}");
    // Normalize negative zero.
    if text.starts_with('-') && text[1..].chars().all(|c| c == '0' || c == '.') {
        text[1..].to_string()
    } else {
        text
    }
}

pub(crate) fn opt_fixed<S: Serializer>(v: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    v.map(Fixed9).serialize(s)
}
