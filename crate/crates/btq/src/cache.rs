//! Optional on-disk memoization of canonical outputs, keyed by the
//! validated parameters. Enabled by setting `BTQ_CACHE_DIR`.

use std::path::PathBuf;

use anyhow::Context;

use crate::error::CliResult;

pub const CACHE_ENV: &str = "BTQ_CACHE_DIR";

fn cache_path(key: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(CACHE_ENV)?;
    let clean: String = key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' }).collect();
    Some(PathBuf::from(dir).join(format!("v{}-{clean}", env!("CARGO_PKG_VERSION"))))
}

/// Returns the cached text for `key`, or computes and stores it.
pub fn memoize(key: &str, compute: impl FnOnce() -> CliResult<String>) -> CliResult<String> {
    let Some(path) = cache_path(key) else {
        return compute();
    };
    if let Ok(text) = std::fs::read_to_string(&path) {
        return Ok(text);
    }
    let text = compute()?;
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
    }
    // Write then rename so concurrent runs never read a partial entry.
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    std::fs::write(&tmp, &text).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok(text)
}
