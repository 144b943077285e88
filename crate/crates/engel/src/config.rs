//! Line-based `key = value` run configuration: set construction keys with
//! a `variant` discriminator, sampler and tolerance knobs, and a stable
//! content hash so reports can name the exact configuration they came
//! from.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::pdi::Region;
use crate::pwl::PiecewiseLinear;
use crate::sets::{CalibratedSetSpec, HalfSpaceAxis};
use crate::{tolerances, Error, Result};

/// Keys that describe the set itself; these may be supplied inline or
/// through a `spec = path` indirection to a second file.
const SPEC_KEYS: [&str; 6] = ["variant", "axis", "offset", "f", "g", "k"];

const RUN_KEYS: [&str; 11] = [
    "spec",
    "seed",
    "out",
    "tol_pdi",
    "tol_quad",
    "tol_bisect",
    "grid",
    "samples",
    "a",
    "region",
    "half_width",
];

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub spec: CalibratedSetSpec,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub tol_pdi: f64,
    pub tol_quad: f64,
    pub tol_bisect: f64,
    /// Grid points per axis for exported sample grids.
    pub grid: usize,
    /// Random sample count for the monotonicity checks.
    pub samples: usize,
    /// Horizontal slopes `a` for the intrinsic-graph exports.
    pub directions: Vec<f64>,
    /// Region of the `(x3, x4)` plane for the derivative checks.
    pub region: Region,
    /// Half-width of the rotated-graph grid.
    pub half_width: f64,
    /// FNV-1a hash (hex) of the resolved key-value content.
    pub hash: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_map(BTreeMap::new()).expect("empty config is valid")
    }
}

/// Command-line overrides applied on top of the file values.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub tol_pdi: Option<f64>,
    pub tol_bisect: Option<f64>,
    pub grid: Option<usize>,
}

impl RunConfig {
    /// Load a config file, resolving a `spec = path` indirection relative
    /// to the file's directory.
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut map = parse_config_text(&text)?;
        if let Some(spec_path) = map.get("spec").cloned() {
            let resolved = match path.parent() {
                Some(dir) if !Path::new(&spec_path).is_absolute() => dir.join(&spec_path),
                _ => PathBuf::from(&spec_path),
            };
            let spec_text = std::fs::read_to_string(&resolved).map_err(|e| {
                Error::Config(format!(
                    "could not read spec file {}: {e}",
                    resolved.display()
                ))
            })?;
            let spec_map = parse_config_text(&spec_text)?;
            if spec_map.contains_key("spec") {
                return Err(Error::Config(
                    "spec files may not chain to further spec files".to_string(),
                ));
            }
            for (k, v) in spec_map {
                if !SPEC_KEYS.contains(&k.as_str()) {
                    return Err(Error::Config(format!(
                        "spec file may only hold set-description keys, found `{k}`"
                    )));
                }
                // Inline keys win over the referenced file.
                map.entry(k).or_insert(v);
            }
            map.remove("spec");
        }
        RunConfig::from_map(map)
    }

    /// Build from resolved key-value pairs. Unknown keys are rejected so
    /// typos fail loudly instead of silently using defaults.
    pub fn from_map(map: BTreeMap<String, String>) -> Result<RunConfig> {
        for key in map.keys() {
            if !SPEC_KEYS.contains(&key.as_str()) && !RUN_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`")));
            }
        }
        let hash = format!("{:016x}", fnv1a_64(canonical_text(&map).as_bytes()));

        let get = |k: &str| map.get(k).map(String::as_str);
        let spec = build_spec(&map)?;
        let seed = match get("seed") {
            Some(s) => s
                .parse::<u64>()
                .map_err(|_| Error::Config(format!("seed must be a non-negative integer, got `{s}`")))?,
            None => 0,
        };
        let out = get("out").map(PathBuf::from);
        let tol_pdi = parse_float_key(&map, "tol_pdi", tolerances::PDI)?;
        let tol_quad = parse_float_key(&map, "tol_quad", tolerances::QUADRATURE)?;
        let tol_bisect = parse_float_key(&map, "tol_bisect", tolerances::BISECTION)?;
        for (name, v) in [("tol_pdi", tol_pdi), ("tol_quad", tol_quad), ("tol_bisect", tol_bisect)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        let grid = parse_usize_key(&map, "grid", 50)?;
        let samples = parse_usize_key(&map, "samples", 10_000)?;
        if grid < 2 {
            return Err(Error::Config(format!("grid must be at least 2, got {grid}")));
        }
        let directions = match get("a") {
            Some(s) => {
                let ds = parse_float_list(s)
                    .map_err(|e| Error::Config(format!("key `a`: {e}")))?;
                if ds.is_empty() {
                    return Err(Error::Config("key `a` must list at least one slope".into()));
                }
                ds
            }
            None => vec![1.0],
        };
        let region = match get("region") {
            Some(s) => {
                let vals = parse_float_list(s)
                    .map_err(|e| Error::Config(format!("key `region`: {e}")))?;
                let [x3_lo, x3_hi, x4_lo, x4_hi] = vals.as_slice() else {
                    return Err(Error::Config(format!(
                        "region needs four numbers `x3_lo, x3_hi, x4_lo, x4_hi`, got {}",
                        vals.len()
                    )));
                };
                Region::new((*x3_lo, *x3_hi), (*x4_lo, *x4_hi))
                    .map_err(|e| Error::Config(format!("key `region`: {e}")))?
            }
            None => Region::new((-2.0, 2.0), (0.5, 4.0)).expect("default region is valid"),
        };
        let half_width = parse_float_key(&map, "half_width", 1.0)?;
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Config(format!(
                "half_width must be positive, got {half_width}"
            )));
        }

        Ok(RunConfig {
            spec,
            seed,
            out,
            tol_pdi,
            tol_quad,
            tol_bisect,
            grid,
            samples,
            directions,
            region,
            half_width,
            hash,
        })
    }

    pub fn apply_overrides(&mut self, ov: &Overrides) {
        if let Some(seed) = ov.seed {
            self.seed = seed;
        }
        if let Some(out) = &ov.out {
            self.out = Some(out.clone());
        }
        if let Some(t) = ov.tol_pdi {
            self.tol_pdi = t;
        }
        if let Some(t) = ov.tol_bisect {
            self.tol_bisect = t;
        }
        if let Some(g) = ov.grid {
            self.grid = g;
        }
    }
}

fn build_spec(map: &BTreeMap<String, String>) -> Result<CalibratedSetSpec> {
    let variant = map.get("variant").map(String::as_str).unwrap_or("cone");
    match variant {
        "cone" => Ok(CalibratedSetSpec::cone()),
        "halfspace" => {
            let axis = match map.get("axis").map(String::as_str) {
                None | Some("x2") => HalfSpaceAxis::X2,
                Some("x4") => HalfSpaceAxis::X4,
                Some(other) => {
                    return Err(Error::Config(format!(
                        "axis must be `x2` or `x4`, got `{other}`"
                    )))
                }
            };
            let offset = parse_float_key(map, "offset", 0.0)?;
            CalibratedSetSpec::half_space(axis, offset)
        }
        "monotone_g" => {
            let g = required_pwl(map, "g")?;
            Ok(CalibratedSetSpec::monotone_g(g))
        }
        "fgk" => {
            let f = required_pwl(map, "f")?;
            let g = required_pwl(map, "g")?;
            let k = map
                .get("k")
                .ok_or_else(|| Error::Config("variant `fgk` needs key `k`".into()))?
                .parse::<f64>()
                .map_err(|_| Error::Config("key `k` must be a number".into()))?;
            CalibratedSetSpec::fgk(f, g, k)
        }
        other => Err(Error::Config(format!(
            "unknown variant `{other}` (expected cone | halfspace | monotone_g | fgk)"
        ))),
    }
}

fn required_pwl(map: &BTreeMap<String, String>, key: &str) -> Result<PiecewiseLinear> {
    let raw = map
        .get(key)
        .ok_or_else(|| Error::Config(format!("variant needs key `{key}`")))?;
    parse_pwl(raw).map_err(|e| Error::Config(format!("key `{key}`: {e}")))
}

fn parse_float_key(map: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match map.get(key) {
        Some(s) => s
            .parse::<f64>()
            .map_err(|_| Error::Config(format!("key `{key}` must be a number, got `{s}`"))),
        None => Ok(default),
    }
}

fn parse_usize_key(map: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match map.get(key) {
        Some(s) => s
            .parse::<usize>()
            .map_err(|_| Error::Config(format!("key `{key}` must be a count, got `{s}`"))),
        None => Ok(default),
    }
}

/// Parse `key = value` lines. `#` starts a comment; blank lines are
/// skipped; keys may not repeat.
pub fn parse_config_text(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::Config(format!(
                "line {}: expected `key = value`, got `{}`",
                lineno + 1,
                line
            )));
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
        }
        if map.insert(key.clone(), value).is_some() {
            return Err(Error::Config(format!(
                "line {}: key `{key}` appears twice",
                lineno + 1
            )));
        }
    }
    Ok(map)
}

/// Parse a piecewise-linear table `x:y, x:y, ...`. A repeated abscissa
/// declares a jump; the earlier entry is the left value.
pub fn parse_pwl(text: &str) -> Result<PiecewiseLinear> {
    let mut points = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let Some((x, y)) = part.split_once(':') else {
            return Err(Error::Config(format!(
                "expected `x:y` breakpoint, got `{part}`"
            )));
        };
        let x: f64 = x
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad abscissa in `{part}`")))?;
        let y: f64 = y
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("bad ordinate in `{part}`")))?;
        points.push((x, y));
    }
    if points.is_empty() {
        return Err(Error::Config("empty piecewise-linear table".to_string()));
    }
    PiecewiseLinear::new(points)
}

fn parse_float_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| format!("`{s}` is not a number"))
        })
        .collect()
}

fn canonical_text(map: &BTreeMap<String, String>) -> String {
    map.iter()
        .map(|(k, v)| format!("{k} = {v}"))
        .collect::<Vec<_>>()
        .join("\n")
}

/// 64-bit FNV-1a over raw bytes.
pub fn fnv1a_64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
