use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use ch2_billiards::hypersurface::SceneSpec;
use ch2_billiards::verify::CheckResult;

/// Writes next to the target and renames, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.partial"));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// SHA-256 of the scene's compact JSON form.
pub fn scene_hash(spec: &SceneSpec) -> String {
    let canonical = serde_json::to_string(spec).expect("scene serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

#[derive(Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub scene_hash: String,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn new(spec: &SceneSpec, checks: Vec<CheckResult>) -> Self {
        Self { version: env!("CARGO_PKG_VERSION"), scene_hash: scene_hash(spec), checks }
    }
}
