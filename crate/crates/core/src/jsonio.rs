//! JSON state-file schema and the canonical writer.
//!
//! Floats are written with 17 significant digits so every finite double
//! survives a write/parse cycle bit-exactly, and objects are emitted with
//! sorted keys so equal values produce equal bytes. Test fixtures and the
//! CLI both lean on byte comparison.

use std::io;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::state::PureMultipartiteState;
use crate::C64;

/// One complex amplitude as stored on disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeJson {
    pub re: f64,
    pub im: f64,
}

/// On-disk form of a pure state: local dimension, party count, and the
/// amplitudes in canonical flat order (party 1 slowest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateJson {
    pub parties: usize,
    pub dim: usize,
    pub amplitudes: Vec<AmplitudeJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl StateJson {
    pub fn from_state(state: &PureMultipartiteState, label: Option<String>) -> Self {
        Self {
            parties: state.parties(),
            dim: state.dim(),
            amplitudes: state
                .amplitudes()
                .iter()
                .map(|a| AmplitudeJson { re: a.re, im: a.im })
                .collect(),
            label,
        }
    }

    /// Validates the payload through the state constructor.
    pub fn to_state(&self) -> Result<PureMultipartiteState> {
        let amps: Vec<C64> = self
            .amplitudes
            .iter()
            .map(|a| C64::new(a.re, a.im))
            .collect();
        PureMultipartiteState::new(self.parties, self.dim, amps)
    }
}

/// Compact formatter whose only deviation from the default is the float
/// encoding: `d.dddddddddddddddde[-]x`, 17 significant digits.
struct CanonicalFormatter;

impl serde_json::ser::Formatter for CanonicalFormatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        write!(writer, "{value:.16e}")
    }
}

/// Serializes any value to canonical JSON: sorted keys, compact separators,
/// 17-significant-digit floats, trailing newline.
///
/// Panics if the value cannot be represented as JSON (e.g. a map with
/// non-string keys); every type in this crate can.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // Round-tripping through Value sorts object keys.
    let tree = serde_json::to_value(value).expect("value must be JSON-representable");
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CanonicalFormatter);
    tree.serialize(&mut ser).expect("in-memory write");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lu::random_state;
    use crate::state::{make_named, NamedKind};

    #[test]
    fn float_encoding_is_fixed_width_scientific() {
        assert_eq!(to_canonical_json(&0.5), "5.0000000000000000e-1\n");
        assert_eq!(to_canonical_json(&0.0), "0.0000000000000000e0\n");
        assert_eq!(to_canonical_json(&-1.0), "-1.0000000000000000e0\n");
    }

    #[test]
    fn keys_come_out_sorted_and_label_is_omitted_when_absent() {
        let state = make_named(NamedKind::Bell, 2, 2).unwrap();
        let text = to_canonical_json(&StateJson::from_state(&state, None));
        assert!(text.starts_with("{\"amplitudes\":"));
        assert!(!text.contains("label"));
        let idx_dim = text.find("\"dim\"").unwrap();
        let idx_parties = text.find("\"parties\"").unwrap();
        assert!(idx_dim < idx_parties);

        let labeled = to_canonical_json(&StateJson::from_state(&state, Some("bell".into())));
        assert!(labeled.contains("\"label\":\"bell\""));
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let state = random_state(3, 3, 20_250_816).unwrap();
        let text = to_canonical_json(&StateJson::from_state(&state, Some("fixture".into())));
        let parsed: StateJson = serde_json::from_str(&text).unwrap();
        let back = parsed.to_state().unwrap();
        assert_eq!(state.amplitudes().len(), back.amplitudes().len());
        for (a, b) in state.amplitudes().iter().zip(back.amplitudes()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        // A second write of the parsed value reproduces the bytes.
        assert_eq!(text, to_canonical_json(&parsed));
    }

    #[test]
    fn to_state_rejects_bad_payloads() {
        let mut bad = StateJson {
            parties: 2,
            dim: 2,
            amplitudes: vec![AmplitudeJson { re: 1.0, im: 0.0 }; 4],
            label: None,
        };
        assert!(bad.to_state().is_err(), "norm is 2, not 1");
        bad.amplitudes.truncate(3);
        assert!(bad.to_state().is_err(), "3 amplitudes cannot fill 2x2");
    }
}
