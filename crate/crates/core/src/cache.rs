//! On-disk cache of character tables, one JSON file per (kind, n, q).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::chartab::{CharacterTable, ConjClasses};
use crate::error::Result;
use crate::group::{GroupKind, GroupTable};

pub const CACHE_FORMAT_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "GELFAND_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CachedTable {
    pub format_version: u32,
    pub kind: GroupKind,
    pub n: usize,
    pub q: u32,
    pub modulus: u64,
    pub root: u64,
    pub exponent: u64,
    pub group_order: u64,
    pub class_reps: Vec<String>,
    pub class_sizes: Vec<usize>,
    pub degrees: Vec<u64>,
    pub values: Vec<Vec<u64>>,
}

impl CachedTable {
    pub fn new(group: &GroupTable, classes: &ConjClasses, table: &CharacterTable) -> Self {
        CachedTable {
            format_version: CACHE_FORMAT_VERSION,
            kind: group.kind(),
            n: group.n(),
            q: group.field().q(),
            modulus: table.modulus,
            root: table.root,
            exponent: table.exponent,
            group_order: table.group_order,
            class_reps: classes.reps.iter().map(|&r| group.element(r).to_literal()).collect(),
            class_sizes: classes.sizes.clone(),
            degrees: table.degrees.clone(),
            values: table.values.clone(),
        }
    }

    /// The table, if it was computed for exactly these classes.
    pub fn table_for(&self, group: &GroupTable, classes: &ConjClasses) -> Option<CharacterTable> {
        let reps: Vec<String> = classes.reps.iter().map(|&r| group.element(r).to_literal()).collect();
        let matches = self.format_version == CACHE_FORMAT_VERSION
            && self.kind == group.kind()
            && self.n == group.n()
            && self.q == group.field().q()
            && self.group_order == group.order() as u64
            && self.class_reps == reps
            && self.class_sizes == classes.sizes;
        matches.then(|| CharacterTable {
            modulus: self.modulus,
            root: self.root,
            exponent: self.exponent,
            group_order: self.group_order,
            values: self.values.clone(),
            degrees: self.degrees.clone(),
        })
    }
}

pub fn cache_path(dir: &Path, kind: GroupKind, n: usize, q: u32) -> PathBuf {
    dir.join(format!("chartab-{}-{n}-{q}-v{CACHE_FORMAT_VERSION}.json", kind.tag()))
}

/// Loads a cached table; stale or unreadable entries count as misses.
pub fn load(dir: &Path, group: &GroupTable, classes: &ConjClasses) -> Option<CharacterTable> {
    let path = cache_path(dir, group.kind(), group.n(), group.field().q());
    let text = fs::read_to_string(&path).ok()?;
    let cached: CachedTable = match serde_json::from_str(&text) {
        Ok(c) => c,
        Err(e) => {
            log::warn!("ignoring unreadable cache file {}: {e}", path.display());
            return None;
        }
    };
    let table = cached.table_for(group, classes);
    if table.is_none() {
        log::warn!("ignoring stale cache file {}", path.display());
    }
    table
}

pub fn store(dir: &Path, group: &GroupTable, classes: &ConjClasses, table: &CharacterTable) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = cache_path(dir, group.kind(), group.n(), group.field().q());
    let body = serde_json::to_string_pretty(&CachedTable::new(group, classes, table))?;
    // write-then-rename so concurrent sweeps never observe a partial file
    let tmp = path.with_extension(format!("json.tmp{}", std::process::id()));
    fs::write(&tmp, body)?;
    fs::rename(&tmp, &path)?;
    Ok(path)
}
