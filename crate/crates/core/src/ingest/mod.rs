//! Newform coefficient tables (TOML) and certificate files (JSON with a
//! SHA-256 digest of the canonical body).
//!
//! # Newform table format
//!
//! ```toml
//! format_version = 1
//!
//! [[newform]]
//! label = "38.2.a.a"
//! level = 38
//! field_poly = [0, 1]      # monic, coefficients low-to-high; x = rationals
//! char_modulus = 1
//! char_order = 1
//!
//! [newform.ap]             # prime -> power-basis coordinates
//! 3 = [-1]
//! 5 = ["1/2"]              # integers or "p/q" strings
//!
//! [newform.eps]            # residue mod char_modulus -> coordinates
//! 0 = [1]                  # optional when char_order = 1
//! ```

mod certificate;
mod newform;

pub use certificate::{
    canonical_body, read_certificate, sha256_hex, read_certificate_str, write_certificate, write_certificate_string,
    CertificateEnvelope, CERTIFICATE_FORMAT_VERSION,
};
pub use newform::{
    load_newforms, parse_newforms, ramanujan_ok, NewformRecord, NEWFORM_FORMAT_VERSION,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported format_version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("newform '{label}': {reason}")]
    Record { label: String, reason: String },
    #[error("duplicate newform label '{0}'")]
    DuplicateLabel(String),
    #[error("certificate digest mismatch: stored {stored}, computed {computed}")]
    DigestMismatch { stored: String, computed: String },
}
