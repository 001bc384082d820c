use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::Path;

use super::IngestError;

pub const CERTIFICATE_FORMAT_VERSION: u32 = 1;

/// On-disk wrapper. Only `body` is hashed; `created` may differ between
/// runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEnvelope {
    pub format_version: u32,
    pub created: String,
    /// Hex SHA-256 of [`canonical_body`].
    pub digest: String,
    pub body: serde_json::Value,
}

/// Compact JSON with object keys sorted.
pub fn canonical_body<T: Serialize>(body: &T) -> Result<String, IngestError> {
    // serde_json's Map is a BTreeMap, so going through Value sorts keys
    let v = serde_json::to_value(body).map_err(|e| IngestError::Parse(e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| IngestError::Parse(e.to_string()))
}

/// Hex SHA-256, used both for certificate bodies and for input tables.
pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn digest(s: &str) -> String {
    sha256_hex(s.as_bytes())
}

pub fn write_certificate_string<T: Serialize>(body: &T) -> Result<String, IngestError> {
    let canonical = canonical_body(body)?;
    let env = CertificateEnvelope {
        format_version: CERTIFICATE_FORMAT_VERSION,
        created: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        digest: digest(&canonical),
        body: serde_json::from_str(&canonical).expect("canonical JSON reparses"),
    };
    let mut s = serde_json::to_string_pretty(&env).map_err(|e| IngestError::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_certificate<T: Serialize>(body: &T, path: impl AsRef<Path>) -> Result<(), IngestError> {
    let path = path.as_ref();
    let text = write_certificate_string(body)?;
    std::fs::write(path, text).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Parse an envelope, check its digest and decode the body.
pub fn read_certificate_str<T: DeserializeOwned>(text: &str) -> Result<(CertificateEnvelope, T), IngestError> {
    let env: CertificateEnvelope = serde_json::from_str(text).map_err(|e| IngestError::Parse(e.to_string()))?;
    if env.format_version != CERTIFICATE_FORMAT_VERSION {
        return Err(IngestError::Version {
            found: env.format_version,
            expected: CERTIFICATE_FORMAT_VERSION,
        });
    }
    let computed = digest(&canonical_body(&env.body)?);
    if computed != env.digest {
        return Err(IngestError::DigestMismatch {
            stored: env.digest.clone(),
            computed,
        });
    }
    let body = serde_json::from_value(env.body.clone()).map_err(|e| IngestError::Parse(e.to_string()))?;
    Ok((env, body))
}

pub fn read_certificate<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<(CertificateEnvelope, T), IngestError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    read_certificate_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[derive(Debug, PartialEq, Serialize, Deserialize)]
    struct Body {
        zeta: u32,
        alpha: Vec<String>,
        map: BTreeMap<String, i64>,
    }

    fn body() -> Body {
        Body {
            zeta: 7,
            alpha: vec!["123456789012345678901234567890".into()],
            map: [("b".to_string(), 2), ("a".to_string(), 1)].into_iter().collect(),
        }
    }

    #[test]
    fn round_trip_and_sorted_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        write_certificate(&body(), &path).unwrap();
        let (env, back): (_, Body) = read_certificate(&path).unwrap();
        assert_eq!(back, body());
        let canon = canonical_body(&body()).unwrap();
        assert!(canon.find("\"alpha\"").unwrap() < canon.find("\"zeta\"").unwrap());
        assert_eq!(env.digest.len(), 64);
    }

    #[test]
    fn tampering_is_detected() {
        let text = write_certificate_string(&body()).unwrap();
        let tampered = text.replace("\"zeta\": 7", "\"zeta\": 8");
        assert_ne!(text, tampered);
        assert!(matches!(
            read_certificate_str::<Body>(&tampered),
            Err(IngestError::DigestMismatch { .. })
        ));
    }

    #[test]
    fn digest_ignores_timestamp() {
        let a: CertificateEnvelope = serde_json::from_str(&write_certificate_string(&body()).unwrap()).unwrap();
        let b: CertificateEnvelope = serde_json::from_str(&write_certificate_string(&body()).unwrap()).unwrap();
        assert_eq!(a.digest, b.digest);
        assert_eq!(a.body, b.body);
    }
}
