//! The end-to-end verification pipeline for one pair (G, H) = (X_{n+1}, X_n),
//! and sweeps over grids of pairs.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::chartab::{
    central_characters_coherent, character_table_with, conjugacy_classes_with, dim_invariants,
    transpose_preserves_classes, verify_pair, CharacterTable, IrrepInvariants,
};
use crate::cosets::{border_zero_pattern, double_cosets, involution_action};
use crate::error::{Error, Result};
use crate::field::{field_of_order, DEFAULT_FIELD_CAP};
use crate::group::{embed_standard, enumerate, GroupKind, DEFAULT_GROUP_CAP};
use crate::reflect::pair_orbit_count;

pub const REPORT_SCHEMA: &str = "gelfand-report/1";

trait StageExt<T> {
    fn stage(self, stage: &'static str) -> Result<T>;
}

impl<T> StageExt<T> for Result<T> {
    fn stage(self, stage: &'static str) -> Result<T> {
        self.map_err(|e| Error::Stage {
            stage,
            source: Box::new(e),
        })
    }
}

/// A pair (X_{n+1}(F_q), X_n(F_q)); `n` is the size of the subgroup's matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PairSpec {
    pub kind: GroupKind,
    pub n: usize,
    pub q: u32,
}

impl fmt::Display for PairSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{k}_{}(F_{q}) > {k}_{}(F_{q})",
            self.n + 1,
            self.n,
            k = self.kind,
            q = self.q
        )
    }
}

impl FromStr for PairSpec {
    type Err = Error;

    /// `kind:n:q`, e.g. `gl:2:3` for (GL_3(F_3), GL_2(F_3)).
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let [kind, n, q] = parts.as_slice() else {
            return Err(Error::Parse(format!("grid point {s:?} is not kind:n:q")));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::Parse(format!("bad number {t:?} in grid point {s:?}")))
        };
        Ok(PairSpec {
            kind: kind.parse()?,
            n: num(n)? as usize,
            q: num(q)?,
        })
    }
}

/// Parses a comma-separated list of grid points; empty input is an empty grid.
pub fn parse_grid(s: &str) -> Result<Vec<PairSpec>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(str::parse)
        .collect()
}

pub fn default_gl_grid() -> Vec<PairSpec> {
    [(1, 2), (1, 3), (1, 4), (1, 5), (2, 2), (2, 3), (3, 2)]
        .into_iter()
        .map(|(n, q)| PairSpec { kind: GroupKind::GL, n, q })
        .collect()
}

pub fn default_o_grid() -> Vec<PairSpec> {
    [(1, 3), (2, 3), (1, 5)]
        .into_iter()
        .map(|(n, q)| PairSpec { kind: GroupKind::O, n, q })
        .collect()
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub group_cap: u64,
    pub field_cap: u32,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            group_cap: DEFAULT_GROUP_CAP,
            field_cap: DEFAULT_FIELD_CAP,
            cache_dir: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetSummary {
    pub plain_count: usize,
    pub mod_center_count: usize,
    pub sigma_fixed: usize,
    pub sigma_nonfixed: usize,
    pub k: u64,
    /// representatives of the transpose-moved mod-center cosets
    pub nonfixed_reps: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub schema: String,
    pub pair: PairSpec,
    pub group: String,
    pub subgroup: String,
    pub group_order: usize,
    pub subgroup_order: usize,
    pub center_order: usize,
    pub cosets: CosetSummary,
    pub character_modulus: u64,
    pub characters: Vec<IrrepInvariants>,
    pub histogram: BTreeMap<u64, usize>,
    pub max_dim_inv: u64,
    pub bound: u64,
    pub family_bound: u64,
    pub bound_attained: bool,
    pub checks: BTreeMap<String, bool>,
    pub violations: Vec<String>,
    pub pass: bool,
    /// Wall-clock milliseconds per stage; not covered by the determinism
    /// contract.
    pub timings_ms: BTreeMap<String, u64>,
}

impl VerificationReport {
    /// JSON with the timing field emptied; byte-identical across runs.
    pub fn deterministic_json(&self) -> Result<String> {
        let mut copy = self.clone();
        copy.timings_ms.clear();
        Ok(serde_json::to_string_pretty(&copy)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(name, _)| name.as_str())
            .collect()
    }
}

struct Timer {
    start: Instant,
    timings: BTreeMap<String, u64>,
}

impl Timer {
    fn new() -> Self {
        Timer {
            start: Instant::now(),
            timings: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        let now = Instant::now();
        self.timings
            .insert(stage.to_string(), now.duration_since(self.start).as_millis() as u64);
        self.start = now;
    }
}

/// Runs every stage for one pair and collects the named checks.
pub fn run_verify(pair: PairSpec, opts: &RunOptions) -> Result<VerificationReport> {
    let PairSpec { kind, n, q } = pair;
    if n == 0 {
        return Err(Error::domain("the subgroup size n must be at least 1"));
    }
    if kind == GroupKind::O && q % 2 == 0 {
        return Err(Error::domain(format!(
            "orthogonal pairs need q not a power of 2, got q = {q}"
        )));
    }
    let mut timer = Timer::new();
    let field = field_of_order(q, opts.field_cap).stage("build_field")?;
    timer.lap("build_field");

    let big = enumerate(kind, n + 1, &field, opts.group_cap).stage("enumerate")?;
    let small = enumerate(kind, n, &field, opts.group_cap).stage("enumerate")?;
    let emb = embed_standard(&small, &big).stage("embed")?;
    let center = big.center_ids();
    let transposed = big.transpose_ids().stage("enumerate")?;
    let inverses = big.inverse_ids().stage("enumerate")?;
    timer.lap("enumerate");

    let plain = double_cosets(&big, &emb, false, opts.group_cap).stage("double_cosets")?;
    let modz = double_cosets(&big, &emb, true, opts.group_cap).stage("double_cosets")?;
    let plain_action = involution_action(&plain).stage("involution_action")?;
    let action = involution_action(&modz).stage("involution_action")?;
    timer.lap("cosets");

    let classes = conjugacy_classes_with(&big, &inverses, opts.group_cap).stage("conjugacy_classes")?;
    timer.lap("conjugacy_classes");

    let table = obtain_table(&big, &classes, &inverses, opts).stage("character_table")?;
    timer.lap("character_table");

    let report = dim_invariants(&table, &classes, &emb).stage("dim_invariants")?;
    let k = action.k() as u64;
    let outcome = verify_pair(kind, &report, k);
    timer.lap("dim_invariants");

    let mut checks = BTreeMap::new();
    let nonfixed_reps: Vec<String> = action.nonfixed_reps().iter().map(|m| m.to_literal()).collect();
    match kind {
        GroupKind::GL => {
            let cs = action.nonfixed_cosets();
            let swapped = cs.len() == 2 && action.perm[cs[0] as usize] == cs[1];
            let mut patterns: Vec<(bool, bool)> =
                action.nonfixed_reps().into_iter().map(border_zero_pattern).collect();
            patterns.sort();
            let classified = patterns == [(false, true), (true, false)];
            checks.insert("transpose_swaps_two_cosets".to_string(), action.nonfixed_count == 2 && swapped && classified);
            checks.insert("gl_multiplicity_at_most_two".to_string(), report.max_dim_inv <= 2);
        }
        GroupKind::O => {
            let sphere_pairs = pair_orbit_count(&big).stage("sphere_orbits")?;
            checks.insert(
                "orthogonal_multiplicity_free".to_string(),
                action.nonfixed_count == 0 && plain_action.nonfixed_count == 0 && report.max_dim_inv <= 1,
            );
            checks.insert("sphere_pair_orbits".to_string(), sphere_pairs == plain.count());
        }
    }
    checks.insert("weak_gelfand_bound".to_string(), outcome.pass);
    checks.insert("mackey_sum".to_string(), report.sum_of_squares() == plain.count() as u64);
    checks.insert("dual_dims".to_string(), report.dual_dims_agree());
    checks.insert(
        "transpose_classes".to_string(),
        transpose_preserves_classes(&big, &classes).stage("conjugacy_classes")?,
    );
    let mut h_image = emb.map.clone();
    h_image.sort_unstable();
    let h_stable = emb
        .map
        .iter()
        .all(|&h| h_image.binary_search(&transposed[h as usize]).is_ok());
    let center_fixed = center.iter().all(|&z| transposed[z as usize] == z);
    checks.insert("transpose_preserves_subgroup".to_string(), h_stable && center_fixed);
    checks.insert(
        "central_characters".to_string(),
        central_characters_coherent(&table, &classes, &center),
    );
    timer.lap("checks");

    let pass = checks.values().all(|&ok| ok);
    let mut violations = outcome.violations.clone();
    violations.extend(
        checks
            .iter()
            .filter(|(_, &ok)| !ok)
            .map(|(name, _)| format!("check {name} failed")),
    );
    Ok(VerificationReport {
        schema: REPORT_SCHEMA.to_string(),
        pair,
        group: big.name(),
        subgroup: small.name(),
        group_order: big.order(),
        subgroup_order: small.order(),
        center_order: center.len(),
        cosets: CosetSummary {
            plain_count: plain.count(),
            mod_center_count: modz.count(),
            sigma_fixed: action.fixed_count,
            sigma_nonfixed: action.nonfixed_count,
            k,
            nonfixed_reps,
        },
        character_modulus: table.modulus,
        histogram: report.histogram.clone(),
        characters: report.characters,
        max_dim_inv: report.max_dim_inv,
        bound: outcome.bound,
        family_bound: outcome.family_bound,
        bound_attained: outcome.attained,
        checks,
        violations,
        pass,
        timings_ms: timer.timings,
    })
}

fn obtain_table(
    group: &crate::group::GroupTable,
    classes: &crate::chartab::ConjClasses,
    inverses: &[u32],
    opts: &RunOptions,
) -> Result<CharacterTable> {
    if let Some(dir) = &opts.cache_dir {
        if let Some(t) = cache::load(dir, group, classes) {
            if t.validate(classes).is_ok() {
                log::debug!("{}: character table loaded from cache", group.name());
                return Ok(t);
            }
            log::warn!("{}: cached character table failed validation, recomputing", group.name());
        }
    }
    let t = character_table_with(group, classes, inverses)?;
    if let Some(dir) = &opts.cache_dir {
        cache::store(dir, group, classes, &t)?;
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub pair: PairSpec,
    pub k: Option<u64>,
    pub max_dim_inv: Option<u64>,
    pub bound: Option<u64>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub rows: Vec<SweepRow>,
}

impl SweepSummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn has_errors(&self) -> bool {
        self.rows.iter().any(|r| r.error.is_some())
    }

    pub fn to_table(&self) -> String {
        let opt = |x: Option<u64>| x.map_or("-".to_string(), |v| v.to_string());
        let mut out = format!(
            "{:<28} {:>3} {:>7} {:>5} {:>5} {:>10}\n",
            "pair", "k", "max_dim", "bound", "pass", "runtime_ms"
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{:<28} {:>3} {:>7} {:>5} {:>5} {:>10}",
                r.pair.to_string(),
                opt(r.k),
                opt(r.max_dim_inv),
                opt(r.bound),
                if r.pass { "yes" } else { "no" },
                r.runtime_ms
            ));
            if let Some(e) = &r.error {
                out.push_str(&format!("  error: {e}"));
            }
            out.push('\n');
        }
        out
    }
}

pub fn report_path(dir: &Path, pair: PairSpec) -> PathBuf {
    dir.join(format!("report-{}-{}-{}.json", pair.kind.tag(), pair.n, pair.q))
}

/// Runs every grid point in parallel, writes one report per point and a
/// summary table; failing points are recorded and do not stop the sweep.
pub fn run_sweep(grid: &[PairSpec], out_dir: &Path, opts: &RunOptions) -> Result<SweepSummary> {
    fs::create_dir_all(out_dir)?;
    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|&pair| {
            let start = Instant::now();
            let result = run_verify(pair, opts).and_then(|report| {
                fs::write(report_path(out_dir, pair), report.to_json()?)?;
                Ok(report)
            });
            let runtime_ms = start.elapsed().as_millis() as u64;
            match result {
                Ok(r) => SweepRow {
                    pair,
                    k: Some(r.cosets.k),
                    max_dim_inv: Some(r.max_dim_inv),
                    bound: Some(r.bound),
                    pass: r.pass,
                    runtime_ms,
                    error: None,
                },
                Err(e) => SweepRow {
                    pair,
                    k: None,
                    max_dim_inv: None,
                    bound: None,
                    pass: false,
                    runtime_ms,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let summary = SweepSummary { rows };
    fs::write(out_dir.join("summary.txt"), summary.to_table())?;
    fs::write(out_dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(
            parse_grid("gl:1:2, o:2:3").unwrap(),
            vec![
                PairSpec { kind: GroupKind::GL, n: 1, q: 2 },
                PairSpec { kind: GroupKind::O, n: 2, q: 3 },
            ]
        );
        assert!(parse_grid("").unwrap().is_empty());
        assert!(matches!(parse_grid("sp:1:2"), Err(Error::Parse(_))));
        assert!(matches!(parse_grid("gl:1"), Err(Error::Parse(_))));
        assert_eq!(
            PairSpec { kind: GroupKind::GL, n: 2, q: 3 }.to_string(),
            "GL_3(F_3) > GL_2(F_3)"
        );
    }

    #[test]
    fn smallest_gl_pair() {
        let r = run_verify(PairSpec { kind: GroupKind::GL, n: 1, q: 2 }, &RunOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.cosets.k, 1);
        assert_eq!(r.max_dim_inv, 2);
        assert!(r.bound_attained);
        assert_eq!(r.cosets.plain_count, 6);
    }

    #[test]
    fn orthogonal_pair_and_char_two_rejection() {
        let r = run_verify(PairSpec { kind: GroupKind::O, n: 2, q: 3 }, &RunOptions::default()).unwrap();
        assert!(r.pass, "{:?}", r.violations);
        assert_eq!(r.cosets.k, 0);
        assert!(r.max_dim_inv <= 1);
        let err = run_verify(PairSpec { kind: GroupKind::O, n: 2, q: 4 }, &RunOptions::default()).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn stage_errors_name_the_stage() {
        let opts = RunOptions {
            group_cap: 100,
            ..RunOptions::default()
        };
        let err = run_verify(PairSpec { kind: GroupKind::GL, n: 2, q: 3 }, &opts).unwrap_err();
        assert!(err.to_string().starts_with("stage enumerate"), "{err}");
        assert!(err.is_usage());
        let err = run_verify(PairSpec { kind: GroupKind::GL, n: 1, q: 6 }, &opts).unwrap_err();
        assert!(err.to_string().starts_with("stage build_field"), "{err}");
    }
}
