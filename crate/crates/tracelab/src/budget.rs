//! Memory cap for large matrices, read once from `TRACELAB_BUDGET_MB`.

use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Rough cost of one stored sparse entry. Columns are separate vectors, so
/// the very sparse matrices that dominate here pay a header per entry.
const BYTES_PER_ENTRY: u64 = 32;

/// Cap used when the variable is unset or unparsable, further limited to
/// half of the memory the kernel reports as available.
const DEFAULT_MB: u64 = 8192;

fn available_mb() -> Option<u64> {
    let info = std::fs::read_to_string("/proc/meminfo").ok()?;
    let line = info.lines().find(|l| l.starts_with("MemAvailable:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb >> 10)
}

fn limit_bytes() -> Option<u64> {
    static LIMIT: OnceLock<Option<u64>> = OnceLock::new();
    *LIMIT.get_or_init(|| {
        let mb = std::env::var("TRACELAB_BUDGET_MB").ok().and_then(|s| s.trim().parse::<u64>().ok()).unwrap_or_else(|| {
            available_mb().map_or(DEFAULT_MB, |a| DEFAULT_MB.min(a / 2))
        });
        Some(mb.saturating_mul(1 << 20))
    })
}

/// Fails if a structure with `entries` stored coefficients would exceed the cap.
pub fn check(entries: u64, what: &str) -> Result<()> {
    match limit_bytes() {
        Some(lim) if entries.saturating_mul(BYTES_PER_ENTRY) > lim => Err(Error::budget(format!(
            "{what} needs about {} MB",
            (entries * BYTES_PER_ENTRY) >> 20
        ))),
        _ => Ok(()),
    }
}
