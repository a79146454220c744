//! Suite configuration: JSON in, validated [`SuiteConfig`] out. Validation
//! errors carry JSON-pointer paths so a bad field is addressable directly.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::Value;

use qstft_core::corpus::Preset;
use qstft_core::group::Context;

/// A configuration problem, with the JSON pointer of the offending value.
#[derive(Debug, Clone, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct ConfigError {
    pub pointer: String,
    pub message: String,
}

fn bad(pointer: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// The verification suites the runner knows about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    Weil,
    Slice,
    Stft,
    DstftOrtho,
    Inversion,
    Multiplier,
    Schatten,
    LpBounds,
    Schur,
    Trace,
    Lps,
    Radon,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::Weil,
        Suite::Slice,
        Suite::Stft,
        Suite::DstftOrtho,
        Suite::Inversion,
        Suite::Multiplier,
        Suite::Schatten,
        Suite::LpBounds,
        Suite::Schur,
        Suite::Trace,
        Suite::Lps,
        Suite::Radon,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Weil => "weil",
            Suite::Slice => "slice",
            Suite::Stft => "stft",
            Suite::DstftOrtho => "dstft_ortho",
            Suite::Inversion => "inversion",
            Suite::Multiplier => "multiplier",
            Suite::Schatten => "schatten",
            Suite::LpBounds => "lp_bounds",
            Suite::Schur => "schur",
            Suite::Trace => "trace",
            Suite::Lps => "lps",
            Suite::Radon => "radon",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.iter().copied().find(|s| s.name() == name)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One group under test: cyclic factors plus subgroup generators.
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub factors: Vec<u32>,
    pub subgroup: Vec<Vec<i64>>,
}

impl GroupSpec {
    pub fn build(&self) -> Result<Arc<Context>, qstft_core::Error> {
        Context::new(&self.factors, &self.subgroup)
    }
}

/// One region member: either a canonical index or a coordinate tuple.
#[derive(Debug, Clone)]
pub enum RegionEntry {
    Index(usize),
    Tuple(Vec<i64>),
}

/// Explicit localization regions for the `lps` suite.
#[derive(Debug, Clone)]
pub struct RegionSpec {
    pub c1: Vec<RegionEntry>,
    pub c2: Vec<RegionEntry>,
    pub d: Vec<RegionEntry>,
    pub omega: Vec<RegionEntry>,
}

/// Validated configuration with defaults filled in.
#[derive(Debug, Clone)]
pub struct SuiteConfig {
    pub groups: Vec<GroupSpec>,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub trials: usize,
    pub cases: usize,
    pub windows: Vec<Preset>,
    pub wavelets: Vec<Preset>,
    pub symbols: Vec<Preset>,
    pub tolerances: BTreeMap<String, f64>,
    pub regions: Option<RegionSpec>,
    pub image: Option<Vec<Vec<f64>>>,
    /// The raw document, echoed into reports.
    pub echo: Value,
}

impl SuiteConfig {
    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }
}

/// Parse and validate a JSON configuration document.
pub fn parse_config(text: &str) -> Result<SuiteConfig, ConfigError> {
    let doc: Value =
        serde_json::from_str(text).map_err(|e| bad("", format!("malformed JSON: {e}")))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| bad("", "top level must be an object"))?;

    const KNOWN: [&str; 11] = [
        "groups",
        "suites",
        "seed",
        "trials",
        "cases",
        "windows",
        "wavelets",
        "symbols",
        "tolerances",
        "regions",
        "image",
    ];
    for key in obj.keys() {
        if !KNOWN.contains(&key.as_str()) {
            return Err(bad(format!("/{key}"), "unknown configuration key"));
        }
    }

    let groups_val = obj
        .get("groups")
        .ok_or_else(|| bad("/groups", "at least one group is required"))?;
    let groups = parse_groups(groups_val)?;
    if groups.is_empty() {
        return Err(bad("/groups", "at least one group is required"));
    }

    let suites_val = obj
        .get("suites")
        .ok_or_else(|| bad("/suites", "at least one suite is required"))?;
    let suites = parse_suites(suites_val)?;
    if suites.is_empty() {
        return Err(bad("/suites", "at least one suite is required"));
    }

    let seed = match obj.get("seed") {
        None => 0,
        Some(v) => v
            .as_u64()
            .ok_or_else(|| bad("/seed", "seed must be a nonnegative integer"))?,
    };
    let trials = parse_count(obj.get("trials"), "/trials", 1000)?;
    let cases = parse_count(obj.get("cases"), "/cases", 4)?;

    let windows = parse_presets(obj.get("windows"), "/windows")?;
    let wavelets = parse_presets(obj.get("wavelets"), "/wavelets")?;
    let symbols = parse_presets(obj.get("symbols"), "/symbols")?;

    let tolerances = match obj.get("tolerances") {
        None => BTreeMap::new(),
        Some(v) => {
            let map = v
                .as_object()
                .ok_or_else(|| bad("/tolerances", "tolerances must be an object"))?;
            let mut out = BTreeMap::new();
            for (k, val) in map {
                let t = val.as_f64().filter(|t| *t > 0.0).ok_or_else(|| {
                    bad(format!("/tolerances/{k}"), "tolerance must be a positive number")
                })?;
                out.insert(k.clone(), t);
            }
            out
        }
    };

    let regions = match obj.get("regions") {
        None => None,
        Some(v) => Some(parse_regions(v)?),
    };

    let image = match obj.get("image") {
        None => None,
        Some(v) => Some(parse_image(v)?),
    };

    // Structural validation of the groups: factors positive, generators in
    // range. Building the contexts here surfaces bad generators at parse
    // time rather than mid-run.
    for (i, spec) in groups.iter().enumerate() {
        if let Some(j) = spec.factors.iter().position(|&f| f == 0) {
            return Err(bad(
                format!("/groups/{i}/factors/{j}"),
                "factors must be positive",
            ));
        }
        spec.build()
            .map_err(|e| bad(format!("/groups/{i}"), format!("invalid group spec: {e}")))?;
    }

    Ok(SuiteConfig {
        groups,
        suites,
        seed,
        trials,
        cases,
        windows,
        wavelets,
        symbols,
        tolerances,
        regions,
        image,
        echo: doc,
    })
}

fn parse_count(v: Option<&Value>, pointer: &str, default: usize) -> Result<usize, ConfigError> {
    match v {
        None => Ok(default),
        Some(v) => {
            let n = v
                .as_u64()
                .ok_or_else(|| bad(pointer, "must be a nonnegative integer"))?;
            if n == 0 {
                return Err(bad(pointer, "must be at least 1"));
            }
            Ok(n as usize)
        }
    }
}

fn parse_groups(v: &Value) -> Result<Vec<GroupSpec>, ConfigError> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad("/groups", "groups must be an array"))?;
    let mut out = Vec::new();
    for (i, g) in arr.iter().enumerate() {
        let obj = g
            .as_object()
            .ok_or_else(|| bad(format!("/groups/{i}"), "group spec must be an object"))?;
        for key in obj.keys() {
            if key != "factors" && key != "subgroup" {
                return Err(bad(format!("/groups/{i}/{key}"), "unknown group key"));
            }
        }
        let factors_val = obj
            .get("factors")
            .ok_or_else(|| bad(format!("/groups/{i}/factors"), "factors are required"))?;
        let factors_arr = factors_val.as_array().ok_or_else(|| {
            bad(format!("/groups/{i}/factors"), "factors must be an array of integers")
        })?;
        let mut factors = Vec::new();
        for (j, f) in factors_arr.iter().enumerate() {
            let n = f.as_u64().filter(|&n| n > 0).ok_or_else(|| {
                bad(format!("/groups/{i}/factors/{j}"), "factors must be positive integers")
            })?;
            factors.push(n as u32);
        }
        let subgroup = match obj.get("subgroup") {
            None => Vec::new(),
            Some(s) => parse_tuples(s, &format!("/groups/{i}/subgroup"), factors.len())?,
        };
        out.push(GroupSpec { factors, subgroup });
    }
    Ok(out)
}

fn parse_tuples(v: &Value, pointer: &str, dims: usize) -> Result<Vec<Vec<i64>>, ConfigError> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad(pointer, "must be an array of coordinate tuples"))?;
    let mut out = Vec::new();
    for (i, t) in arr.iter().enumerate() {
        let tup = t
            .as_array()
            .ok_or_else(|| bad(format!("{pointer}/{i}"), "tuple must be an array"))?;
        if tup.len() != dims {
            return Err(bad(
                format!("{pointer}/{i}"),
                format!("tuple needs {dims} coordinates, got {}", tup.len()),
            ));
        }
        let mut coords = Vec::new();
        for (j, c) in tup.iter().enumerate() {
            let n = c
                .as_i64()
                .ok_or_else(|| bad(format!("{pointer}/{i}/{j}"), "coordinate must be an integer"))?;
            coords.push(n);
        }
        out.push(coords);
    }
    Ok(out)
}

fn parse_suites(v: &Value) -> Result<Vec<Suite>, ConfigError> {
    let arr = v
        .as_array()
        .ok_or_else(|| bad("/suites", "suites must be an array of names"))?;
    let mut out = Vec::new();
    for (i, s) in arr.iter().enumerate() {
        let name = s
            .as_str()
            .ok_or_else(|| bad(format!("/suites/{i}"), "suite name must be a string"))?;
        let suite = Suite::parse(name).ok_or_else(|| {
            bad(
                format!("/suites/{i}"),
                format!(
                    "unknown suite \"{name}\"; known suites: {}",
                    Suite::ALL.map(|s| s.name()).join(", ")
                ),
            )
        })?;
        if !out.contains(&suite) {
            out.push(suite);
        }
    }
    Ok(out)
}

fn parse_presets(v: Option<&Value>, pointer: &str) -> Result<Vec<Preset>, ConfigError> {
    match v {
        None => Ok(vec![Preset::Random]),
        Some(v) => {
            let arr = v
                .as_array()
                .ok_or_else(|| bad(pointer, "must be an array of preset names"))?;
            if arr.is_empty() {
                return Err(bad(pointer, "at least one preset is required"));
            }
            let mut out = Vec::new();
            for (i, p) in arr.iter().enumerate() {
                let name = p
                    .as_str()
                    .ok_or_else(|| bad(format!("{pointer}/{i}"), "preset must be a string"))?;
                let preset = Preset::parse(name).ok_or_else(|| {
                    bad(
                        format!("{pointer}/{i}"),
                        format!("unknown preset \"{name}\"; known: delta, constant, indicator, random"),
                    )
                })?;
                out.push(preset);
            }
            Ok(out)
        }
    }
}

fn parse_regions(v: &Value) -> Result<RegionSpec, ConfigError> {
    let obj = v
        .as_object()
        .ok_or_else(|| bad("/regions", "regions must be an object"))?;
    let mut fields: BTreeMap<&str, Vec<RegionEntry>> = BTreeMap::new();
    for key in ["c1", "c2", "d", "omega"] {
        let val = obj
            .get(key)
            .ok_or_else(|| bad(format!("/regions/{key}"), "region is required"))?;
        let arr = val.as_array().ok_or_else(|| {
            bad(
                format!("/regions/{key}"),
                "region must be an array of indices or coordinate tuples",
            )
        })?;
        let mut entries = Vec::new();
        for (i, t) in arr.iter().enumerate() {
            if let Some(idx) = t.as_u64() {
                entries.push(RegionEntry::Index(idx as usize));
            } else if let Some(tup) = t.as_array() {
                let mut coords = Vec::new();
                for (j, c) in tup.iter().enumerate() {
                    let n = c.as_i64().ok_or_else(|| {
                        bad(format!("/regions/{key}/{i}/{j}"), "coordinate must be an integer")
                    })?;
                    coords.push(n);
                }
                entries.push(RegionEntry::Tuple(coords));
            } else {
                return Err(bad(
                    format!("/regions/{key}/{i}"),
                    "region entry must be an index or a coordinate tuple",
                ));
            }
        }
        fields.insert(key, entries);
    }
    for key in obj.keys() {
        if !["c1", "c2", "d", "omega"].contains(&key.as_str()) {
            return Err(bad(format!("/regions/{key}"), "unknown region key"));
        }
    }
    Ok(RegionSpec {
        c1: fields.remove("c1").unwrap(),
        c2: fields.remove("c2").unwrap(),
        d: fields.remove("d").unwrap(),
        omega: fields.remove("omega").unwrap(),
    })
}

fn parse_image(v: &Value) -> Result<Vec<Vec<f64>>, ConfigError> {
    let rows = v
        .as_array()
        .ok_or_else(|| bad("/image", "image must be an array of rows"))?;
    let n = rows.len();
    if n == 0 {
        return Err(bad("/image", "image must be nonempty"));
    }
    let mut out = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| bad(format!("/image/{i}"), "row must be an array of numbers"))?;
        if cells.len() != n {
            return Err(bad(
                format!("/image/{i}"),
                format!("image must be square; row has {} cells, expected {n}", cells.len()),
            ));
        }
        let mut vals = Vec::new();
        for (j, c) in cells.iter().enumerate() {
            let x = c
                .as_f64()
                .ok_or_else(|| bad(format!("/image/{i}/{j}"), "pixel must be a number"))?;
            vals.push(x);
        }
        out.push(vals);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_fills_defaults() {
        let cfg = parse_config(
            r#"{"groups":[{"factors":[4],"subgroup":[[2]]}],"suites":["weil"]}"#,
        )
        .unwrap();
        assert_eq!(cfg.seed, 0);
        assert_eq!(cfg.trials, 1000);
        assert_eq!(cfg.suites, vec![Suite::Weil]);
        assert_eq!(cfg.windows, vec![Preset::Random]);
        assert_eq!(cfg.groups[0].factors, vec![4]);
    }

    #[test]
    fn unknown_suite_is_named_in_the_error() {
        let err = parse_config(
            r#"{"groups":[{"factors":[4]}],"suites":["bogus"]}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer, "/suites/0");
        assert!(err.message.contains("bogus"));
    }

    #[test]
    fn zero_factor_is_rejected_with_pointer() {
        let err = parse_config(
            r#"{"groups":[{"factors":[4,0]}],"suites":["weil"]}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer, "/groups/0/factors/1");
    }

    #[test]
    fn empty_suites_are_rejected() {
        let err =
            parse_config(r#"{"groups":[{"factors":[4]}],"suites":[]}"#).unwrap_err();
        assert_eq!(err.pointer, "/suites");
    }

    #[test]
    fn generator_arity_is_checked() {
        let err = parse_config(
            r#"{"groups":[{"factors":[2,2],"subgroup":[[1]]}],"suites":["weil"]}"#,
        )
        .unwrap_err();
        assert_eq!(err.pointer, "/groups/0/subgroup/0");
    }

    #[test]
    fn malformed_json_is_a_root_error() {
        let err = parse_config("{not json").unwrap_err();
        assert_eq!(err.pointer, "");
    }

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(Suite::parse(s.name()), Some(s));
        }
    }
}
