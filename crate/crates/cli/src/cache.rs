//! On-disk cache of decomposition tables, one JSON file per problem.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};
use tensorstat::charalg::klimyk::tensor_power_decompose;
use tensorstat::{DecompositionTable, Result, RootSystem, Weight};

pub const ENV_VAR: &str = "TENSORSTAT_CACHE_DIR";

/// `$TENSORSTAT_CACHE_DIR`, else `$XDG_CACHE_HOME/tensorstat`, else `~/.cache/tensorstat`.
pub fn cache_dir() -> PathBuf {
    if let Some(d) = std::env::var_os(ENV_VAR) {
        return PathBuf::from(d);
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME") {
        return PathBuf::from(d).join("tensorstat");
    }
    match std::env::var_os("HOME") {
        Some(h) => PathBuf::from(h).join(".cache").join("tensorstat"),
        None => std::env::temp_dir().join("tensorstat"),
    }
}

/// Merges repeated modules, drops zero powers and sorts, so equal products share a key.
pub fn canonical_problem(problem: &[(Weight, u64)]) -> Vec<(Weight, u64)> {
    let mut merged: std::collections::BTreeMap<Weight, u64> = Default::default();
    for (nu, n) in problem {
        *merged.entry(nu.clone()).or_default() += n;
    }
    merged.into_iter().filter(|(_, n)| *n > 0).collect()
}

/// Hex SHA-256 of the canonical problem description.
pub fn cache_key(rs: &RootSystem, problem: &[(Weight, u64)]) -> String {
    let mut text = format!("tensorstat decomposition v1\nalgebra {}\n", rs.spec());
    for (nu, n) in canonical_problem(problem) {
        text.push_str(&format!("{nu}^{n}\n"));
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Loads the table from the cache or computes and stores it. Unreadable or
/// mismatching cache files are recomputed and overwritten.
pub fn load_or_compute(rs: &RootSystem, problem: &[(Weight, u64)], use_cache: bool) -> Result<DecompositionTable> {
    let problem = canonical_problem(problem);
    if !use_cache {
        return tensor_power_decompose(rs, &problem);
    }
    let dir = cache_dir();
    let path = dir.join(format!("{}.json", cache_key(rs, &problem)));
    if let Ok(text) = fs::read_to_string(&path) {
        if let Ok(table) = serde_json::from_str(&text).map_err(Into::into).and_then(|v| DecompositionTable::from_json(&v)) {
            if table.algebra() == rs.spec() && table.problem() == problem.as_slice() {
                return Ok(table);
            }
        }
    }
    let table = tensor_power_decompose(rs, &problem)?;
    fs::create_dir_all(&dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", cache_key(rs, &problem), std::process::id()));
    fs::write(&tmp, serde_json::to_string(&table.to_json())?)?;
    fs::rename(&tmp, &path)?;
    Ok(table)
}
