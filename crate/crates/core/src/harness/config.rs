use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::coloring::{Color, ColoringParams, Painter, ThetaMode};
use crate::cseq::{self, CSeq};
use crate::ordinal::Ordinal;

/// Everything an experiment or property-suite run depends on.
///
/// Parsed from `key=value` lines (`#` starts a comment). Keys: `builder`,
/// `painter`, `mu`, `mode`, `chi`, `bound`, `sigma`, `blocks`, `window-lo`,
/// `window-hi`, `trials`, `seed`, `eps-grid`, `samples`, `out`, `csv`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub builder: String,
    pub painter: Painter,
    pub mu: u64,
    pub mode: ThetaMode,
    pub chi: u64,
    pub bound: Ordinal,
    pub sigma: usize,
    pub blocks: usize,
    pub window_lo: Ordinal,
    pub window_hi: Ordinal,
    pub trials: usize,
    pub seed: u64,
    pub eps_grid: Vec<Color>,
    /// Sample count for the property suites.
    pub samples: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub csv: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let bound: Ordinal = Ordinal::omega_pow(Ordinal::from(5));
        let mu = 8;
        ExperimentConfig {
            builder: "single-term".into(),
            painter: Painter::Paper,
            mu,
            mode: ThetaMode::Small,
            chi: 3,
            window_lo: Ordinal::one(),
            window_hi: bound.clone(),
            bound,
            sigma: 2,
            blocks: 20,
            trials: 10,
            seed: 0,
            eps_grid: default_eps_grid(ThetaMode::Small, mu, &Ordinal::omega_pow(Ordinal::from(5))),
            samples: 10_000,
            out: None,
            csv: None,
        }
    }
}

/// `{0, …, μ−1}` in small mode; `{0, 1, ω, ω², ω³, ω⁴}` (below the bound) in
/// large mode.
pub fn default_eps_grid(mode: ThetaMode, mu: u64, bound: &Ordinal) -> Vec<Color> {
    match mode {
        ThetaMode::Small => (0..mu).map(Color::from).collect(),
        ThetaMode::Large => std::iter::once(Ordinal::zero())
            .chain((0..5u64).map(|k| Ordinal::omega_pow(Ordinal::from(k))))
            .filter(|x| x < bound)
            .map(Color)
            .collect(),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_text(&text, path.parent())
    }

    /// Relative `table:` and output paths are resolved against `base_dir`.
    pub fn from_text(text: &str, base_dir: Option<&Path>) -> Result<Self, HarnessError> {
        let mut values: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(HarnessError::config(i + 1, "expected key=value"));
            };
            let key = key.trim().to_string();
            if !KEYS.contains(&key.as_str()) {
                return Err(HarnessError::config(i + 1, format!("unknown key {key:?}")));
            }
            if values.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(HarnessError::config(i + 1, format!("duplicate key {key:?}")));
            }
        }
        let resolve = |p: &str| match base_dir {
            Some(dir) if Path::new(p).is_relative() => dir.join(p),
            _ => PathBuf::from(p),
        };

        let mut cfg = ExperimentConfig::default();
        let get = |k: &str| values.get(k);
        macro_rules! parse_field {
            ($key:literal, $field:expr) => {
                if let Some((line, v)) = get($key) {
                    $field = v
                        .parse()
                        .map_err(|e| HarnessError::config(*line, format!("{}: {e}", $key)))?;
                }
            };
        }
        if let Some((_, v)) = get("builder") {
            cfg.builder = v.clone();
        }
        if let Some((line, v)) = get("painter") {
            cfg.painter = match v.strip_prefix("table:") {
                Some(file) => Painter::table_from_file(resolve(file)),
                None => Painter::from_spec(v),
            }
            .map_err(|e| HarnessError::config(*line, e.to_string()))?;
        }
        parse_field!("mu", cfg.mu);
        parse_field!("mode", cfg.mode);
        parse_field!("chi", cfg.chi);
        parse_field!("bound", cfg.bound);
        parse_field!("sigma", cfg.sigma);
        parse_field!("blocks", cfg.blocks);
        parse_field!("trials", cfg.trials);
        parse_field!("seed", cfg.seed);
        parse_field!("samples", cfg.samples);
        cfg.window_hi = cfg.bound.clone();
        parse_field!("window-lo", cfg.window_lo);
        parse_field!("window-hi", cfg.window_hi);
        cfg.eps_grid = match get("eps-grid") {
            Some((line, v)) => v
                .split(',')
                .map(|s| s.trim().parse::<Color>())
                .collect::<Result<_, _>>()
                .map_err(|e| HarnessError::config(*line, format!("eps-grid: {e}")))?,
            None => default_eps_grid(cfg.mode, cfg.mu, &cfg.bound),
        };
        cfg.out = get("out").map(|(_, v)| resolve(v));
        cfg.csv = get("csv").map(|(_, v)| resolve(v));
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let invalid = |msg: String| Err(HarnessError::InvalidConfig(msg));
        cseq::from_token(&self.builder, self.bound.clone())?;
        self.params()?;
        self.painter.validate(self.mu)?;
        if self.bound.is_zero() {
            return invalid("bound must be positive".into());
        }
        if self.sigma == 0 || self.sigma as u64 >= self.chi {
            return invalid(format!("sigma must satisfy 0 < sigma < chi, got sigma = {}, chi = {}", self.sigma, self.chi));
        }
        if self.blocks < 2 {
            return invalid(format!("blocks must be at least 2, got {}", self.blocks));
        }
        if self.window_hi > self.bound || self.window_lo >= self.window_hi {
            return invalid(format!(
                "window [{}, {}) must be nonempty and lie below the bound {}",
                self.window_lo, self.window_hi, self.bound
            ));
        }
        if self.trials == 0 {
            return invalid("trials must be positive".into());
        }
        Ok(())
    }

    pub fn params(&self) -> Result<ColoringParams, HarnessError> {
        Ok(ColoringParams::new(self.mu, self.mode, self.chi)?)
    }

    pub fn build_seq(&self) -> Result<Box<dyn CSeq>, HarnessError> {
        Ok(cseq::from_token(&self.builder, self.bound.clone())?)
    }
}

const KEYS: &[&str] = &[
    "builder", "painter", "mu", "mode", "chi", "bound", "sigma", "blocks", "window-lo", "window-hi", "trials",
    "seed", "eps-grid", "samples", "out", "csv",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        ExperimentConfig::default().validate().unwrap();
        let cfg = ExperimentConfig::from_text("", None).unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.eps_grid.len(), 8);
    }

    #[test]
    fn parses_all_keys() {
        let text = "\
# demo
builder = ladder
painter = hash:9
mu = 4
mode = large
chi = 5
bound = w^3
sigma = 3
blocks = 7
window-lo = w
window-hi = w^2
trials = 2
seed = 42
eps-grid = 0, w, w+1
samples = 100
out = report.json
";
        let cfg = ExperimentConfig::from_text(text, Some(Path::new("/tmp/x"))).unwrap();
        assert_eq!(cfg.builder, "ladder");
        assert_eq!(cfg.painter, Painter::Hash { seed: 9 });
        assert_eq!(cfg.mode, ThetaMode::Large);
        assert_eq!(cfg.bound.to_string(), "w^3");
        assert_eq!(cfg.window_hi.to_string(), "w^2");
        assert_eq!(cfg.eps_grid.len(), 3);
        assert_eq!(cfg.out.as_deref(), Some(Path::new("/tmp/x/report.json")));
    }

    #[test]
    fn large_mode_default_grid_stays_below_bound() {
        let cfg = ExperimentConfig::from_text("mode=large\nbound=w^2", None).unwrap();
        let grid: Vec<String> = cfg.eps_grid.iter().map(|c| c.to_string()).collect();
        assert_eq!(grid, ["0", "1", "w"]);
    }

    #[test]
    fn rejects_bad_configs() {
        for bad in [
            "sigma=3",
            "blocks=1",
            "builder=square",
            "mu=1",
            "window-hi=w^6",
            "window-lo=w^2\nwindow-hi=w",
            "colour=red",
            "mu",
            "mu=2\nmu=3",
            "bound=w^(w",
            "painter=rainbow",
        ] {
            assert!(ExperimentConfig::from_text(bad, None).is_err(), "{bad:?} accepted");
        }
    }
}
