//! Versioned model artifacts.
//!
//! Every persisted model is wrapped in an envelope carrying a format name and
//! version, serialized as JSON. serde_json emits the shortest decimal that
//! parses back to the same f64, so round-trips are bit-exact for finite
//! values, and struct fields serialize in declaration order, so writes are
//! byte-deterministic.

use std::path::Path;

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ARTIFACT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Envelope<T> {
    format: String,
    version: u32,
    data: T,
}

pub fn save<T: Serialize>(path: impl AsRef<Path>, format: &str, data: &T) -> Result<()> {
    let path = path.as_ref();
    let env = Envelope {
        format: format.to_string(),
        version: ARTIFACT_VERSION,
        data,
    };
    let json = serde_json::to_string(&env).map_err(|e| Error::BadArtifact {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
}

pub fn load<T: DeserializeOwned>(path: impl AsRef<Path>, format: &str) -> Result<T> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let env: Envelope<T> = serde_json::from_slice(&bytes).map_err(|e| Error::BadArtifact {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    if env.format != format {
        return Err(Error::BadArtifact {
            path: path.display().to_string(),
            message: format!("expected format '{format}', found '{}'", env.format),
        });
    }
    if env.version != ARTIFACT_VERSION {
        return Err(Error::BadArtifact {
            path: path.display().to_string(),
            message: format!(
                "unsupported version {} (supported: {ARTIFACT_VERSION})",
                env.version
            ),
        });
    }
    Ok(env.data)
}
