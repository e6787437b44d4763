//! Colorings derived from walks.
//!
//! A [`Painter`] labels every ordinal α by a color in `[0, μ)` that depends
//! only on `min(C_α)`. The coloring `d(α, β)` is the largest label seen along
//! `tr(α, β)`. In `small` mode `c = d`; in `large` mode `c(α, β)` is the
//! largest trace ordinal whose label equals `d(α, β)`.
//!
//! Family scans look for block pairs `(a, b)` with `max(a) < min(b)` whose
//! whole product `a × b` receives a single color.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::RwLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cseq::{CSeq, CSeqError};
use crate::ordinal::{Ordinal, OrdinalError};
use crate::walks::{WalkError, WalkMemo};

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    CSeq(#[from] CSeqError),
    #[error("invalid coloring parameters: {0}")]
    Params(String),
    #[error("invalid painter spec {spec:?}: {reason}")]
    PainterSpec { spec: String, reason: String },
    #[error("table line {line}: {reason}")]
    TableLine { line: usize, reason: String },
    #[error("table assigns color {color} to {key}, outside [0, {mu})")]
    TableColorOutOfRange { key: Ordinal, color: u64, mu: u64 },
    #[error("invalid family: {0}")]
    Family(String),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaMode {
    /// Few colors: `c = d`.
    Small,
    /// Ordinal-valued `c`.
    Large,
}

impl FromStr for ThetaMode {
    type Err = ColoringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "small" => Ok(ThetaMode::Small),
            "large" => Ok(ThetaMode::Large),
            other => Err(ColoringError::Params(format!(
                "mode must be small or large, got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for ThetaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThetaMode::Small => "small",
            ThetaMode::Large => "large",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringParams {
    /// Number of painter labels.
    pub mu: u64,
    pub theta_mode: ThetaMode,
    /// Blocks of a family must have fewer than `chi` elements.
    pub chi: u64,
}

impl ColoringParams {
    pub fn new(mu: u64, theta_mode: ThetaMode, chi: u64) -> Result<Self, ColoringError> {
        if mu < 2 {
            return Err(ColoringError::Params(format!("mu must be at least 2, got {mu}")));
        }
        if chi < 2 {
            return Err(ColoringError::Params(format!("chi must be at least 2, got {chi}")));
        }
        Ok(ColoringParams {
            mu,
            theta_mode,
            chi,
        })
    }
}

/// A color: a natural number for `d`, possibly infinite for `c` in large mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub Ordinal);

impl From<u64> for Color {
    fn from(v: u64) -> Self {
        Color(Ordinal::from(v))
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Color {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse().map(Color)
    }
}

/// The rule assigning a label in `[0, μ)` to each ordinal through `min(C_α)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "lowercase")]
pub enum Painter {
    /// `h(α) = min(C_α)` if that is below μ, else 0.
    Paper,
    /// Explicit finite map on `min(C_α)`; unmapped values get 0.
    Table { entries: BTreeMap<Ordinal, u64> },
    /// SHA-256 of the seed and the normal form of `min(C_α)`, reduced mod μ.
    Hash { seed: u64 },
}

impl Painter {
    /// Parses `paper`, `hash:<seed>` or `table:<file>`.
    pub fn from_spec(spec: &str) -> Result<Painter, ColoringError> {
        let bad = |reason: &str| ColoringError::PainterSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        if spec == "paper" {
            return Ok(Painter::Paper);
        }
        if let Some(seed) = spec.strip_prefix("hash:") {
            let seed = seed.parse().map_err(|_| bad("seed must be a u64"))?;
            return Ok(Painter::Hash { seed });
        }
        if let Some(path) = spec.strip_prefix("table:") {
            return Painter::table_from_file(path);
        }
        Err(bad("expected paper, hash:<seed> or table:<file>"))
    }

    pub fn table_from_file(path: impl AsRef<Path>) -> Result<Painter, ColoringError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ColoringError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Painter::table_from_str(&text)
    }

    /// Lines `<ordinal> <color>`; blank lines and `#` comments are skipped.
    pub fn table_from_str(text: &str) -> Result<Painter, ColoringError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: String| ColoringError::TableLine { line: i + 1, reason };
            let mut fields = line.split_whitespace();
            let (Some(key), Some(color), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(err("expected `<ordinal> <color>`".into()));
            };
            let key: Ordinal = key.parse().map_err(|e: OrdinalError| err(e.to_string()))?;
            let color: u64 = color
                .parse()
                .map_err(|_| err(format!("color {color:?} is not a natural number")))?;
            if entries.insert(key.clone(), color).is_some() {
                return Err(err(format!("duplicate entry for {key}")));
            }
        }
        Ok(Painter::Table { entries })
    }

    /// The label of an ordinal whose C-set has minimum `min`.
    pub fn label_for_min(&self, min: &Ordinal, mu: u64) -> u64 {
        match self {
            Painter::Paper => min.to_u64().filter(|&v| v < mu).unwrap_or(0),
            Painter::Table { entries } => entries.get(min).copied().unwrap_or(0),
            Painter::Hash { seed } => {
                let mut hasher = Sha256::new();
                hasher.update(seed.to_le_bytes());
                hasher.update(min.to_string().as_bytes());
                let digest = hasher.finalize();
                let word: [u8; 8] = digest[..8].try_into().expect("32-byte digest");
                u64::from_le_bytes(word) % mu
            }
        }
    }

    /// Rejects table colors outside `[0, μ)`.
    pub fn validate(&self, mu: u64) -> Result<(), ColoringError> {
        if let Painter::Table { entries } = self {
            if let Some((key, &color)) = entries.iter().find(|(_, &c)| c >= mu) {
                return Err(ColoringError::TableColorOutOfRange {
                    key: key.clone(),
                    color,
                    mu,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Painter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Painter::Paper => f.write_str("paper"),
            Painter::Hash { seed } => write!(f, "hash:{seed}"),
            Painter::Table { entries } => write!(f, "table({} entries)", entries.len()),
        }
    }
}

/// Which coloring a family scan evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColorFn {
    D,
    C,
}

/// A finite post-map on colors; unmapped colors are left alone.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorRemap(pub BTreeMap<Color, Color>);

impl ColorRemap {
    pub fn apply(&self, color: Color) -> Color {
        self.0.get(&color).cloned().unwrap_or(color)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub trial: u64,
    pub window_lo: Ordinal,
    pub window_hi: Ordinal,
}

/// A pairwise disjoint family of equal-size finite sets of ordinals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySample {
    blocks: Vec<Vec<Ordinal>>,
    sigma: usize,
    provenance: Option<Provenance>,
}

impl FamilySample {
    /// Validates and normalizes (sorts) the blocks.
    pub fn new(blocks: Vec<Vec<Ordinal>>, bound: &Ordinal) -> Result<Self, ColoringError> {
        let sigma = blocks.first().map_or(0, Vec::len);
        if sigma == 0 {
            return Err(ColoringError::Family("blocks must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        let mut sorted = Vec::with_capacity(blocks.len());
        for (i, mut block) in blocks.into_iter().enumerate() {
            if block.len() != sigma {
                return Err(ColoringError::Family(format!(
                    "block {i} has {} elements, expected {sigma}",
                    block.len()
                )));
            }
            block.sort();
            for x in &block {
                if x > bound {
                    return Err(ColoringError::Family(format!("{x} exceeds the bound {bound}")));
                }
                if !seen.insert(x.clone()) {
                    return Err(ColoringError::Family(format!("{x} occurs twice")));
                }
            }
            sorted.push(block);
        }
        Ok(FamilySample {
            blocks: sorted,
            sigma,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn blocks(&self) -> &[Vec<Ordinal>] {
        &self.blocks
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Index pairs `(i, j)` with `max(blocks[i]) < min(blocks[j])`, in
    /// lexicographic order.
    pub fn separated_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.blocks.len();
        let mut pairs = Vec::new();
        for i in 0..n {
            let top = self.blocks[i].last().expect("nonempty");
            for j in 0..n {
                if i != j && top < &self.blocks[j][0] {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum U1Outcome {
    Witness {
        a: usize,
        b: usize,
        tau: Color,
        scanned_pairs: usize,
    },
    /// No witness in this finite family. Not a refutation of anything.
    Exhausted { scanned_pairs: usize },
}

impl U1Outcome {
    pub fn tau(&self) -> Option<&Color> {
        match self {
            U1Outcome::Witness { tau, .. } => Some(tau),
            U1Outcome::Exhausted { .. } => None,
        }
    }
}

/// Monochromatic colors of every separated pair, computed once per family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairTable {
    pub cells: Vec<(usize, usize, Option<Color>)>,
}

impl PairTable {
    pub fn witness_above(&self, epsilon: &Color) -> U1Outcome {
        for (k, (a, b, color)) in self.cells.iter().enumerate() {
            if let Some(tau) = color.as_ref().filter(|&t| t > epsilon) {
                return U1Outcome::Witness {
                    a: *a,
                    b: *b,
                    tau: tau.clone(),
                    scanned_pairs: k + 1,
                };
            }
        }
        U1Outcome::Exhausted {
            scanned_pairs: self.cells.len(),
        }
    }

    pub fn realized(&self) -> BTreeSet<Color> {
        self.cells.iter().filter_map(|(_, _, c)| c.clone()).collect()
    }
}

/// The coloring pipeline `h → d → c` over one C-sequence.
pub struct Colorer<'a> {
    painter: Painter,
    params: ColoringParams,
    walks: WalkMemo<'a>,
    labels: RwLock<HashMap<Ordinal, u64>>,
}

impl<'a> Colorer<'a> {
    pub fn new(seq: &'a dyn CSeq, painter: Painter, params: ColoringParams) -> Result<Self, ColoringError> {
        painter.validate(params.mu)?;
        Ok(Colorer {
            painter,
            params,
            walks: WalkMemo::new(seq),
            labels: RwLock::new(HashMap::new()),
        })
    }

    pub fn seq(&self) -> &'a dyn CSeq {
        self.walks.seq()
    }

    pub fn painter(&self) -> &Painter {
        &self.painter
    }

    pub fn params(&self) -> &ColoringParams {
        &self.params
    }

    pub fn h(&self, alpha: &Ordinal) -> Result<u64, ColoringError> {
        let min = self.seq().min_element(alpha)?;
        if let Some(&hit) = self.labels.read().expect("poisoned").get(&min) {
            return Ok(hit);
        }
        let label = self.painter.label_for_min(&min, self.params.mu);
        self.labels.write().expect("poisoned").insert(min, label);
        Ok(label)
    }

    pub fn tr_h(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Vec<u64>, ColoringError> {
        let result = self.walks.walk(alpha, beta)?;
        result.trace.iter().map(|x| self.h(x)).collect()
    }

    fn d_raw(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<u64, ColoringError> {
        Ok(self
            .tr_h(alpha, beta)?
            .into_iter()
            .max()
            .expect("traces are never empty"))
    }

    pub fn d(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Color, ColoringError> {
        self.d_raw(alpha, beta).map(Color::from)
    }

    pub fn c(&self, alpha: &Ordinal, beta: &Ordinal) -> Result<Color, ColoringError> {
        match self.params.theta_mode {
            ThetaMode::Small => self.d(alpha, beta),
            ThetaMode::Large => {
                let result = self.walks.walk(alpha, beta)?;
                let labels = result
                    .trace
                    .iter()
                    .map(|x| self.h(x))
                    .collect::<Result<Vec<_>, _>>()?;
                let top = *labels.iter().max().expect("traces are never empty");
                // the trace is decreasing, so the first hit is the largest
                let pos = labels.iter().position(|&l| l == top).expect("max is attained");
                Ok(Color(result.trace[pos].clone()))
            }
        }
    }

    pub fn color(&self, which: ColorFn, alpha: &Ordinal, beta: &Ordinal) -> Result<Color, ColoringError> {
        match which {
            ColorFn::D => self.d(alpha, beta),
            ColorFn::C => self.c(alpha, beta),
        }
    }

    /// The single color of `a × b`, if there is one.
    fn mono_color(
        &self,
        which: ColorFn,
        a: &[Ordinal],
        b: &[Ordinal],
        remap: Option<&ColorRemap>,
    ) -> Result<Option<Color>, ColoringError> {
        let mut seen: Option<Color> = None;
        for alpha in a {
            for beta in b {
                let mut color = self.color(which, alpha, beta)?;
                if let Some(remap) = remap {
                    color = remap.apply(color);
                }
                match &seen {
                    None => seen = Some(color),
                    Some(prev) if *prev != color => return Ok(None),
                    Some(_) => {}
                }
            }
        }
        Ok(seen)
    }

    /// `T(𝒜)`: colors realized monochromatically on some separated pair.
    pub fn color_trace_set(
        &self,
        family: &FamilySample,
        which: ColorFn,
        remap: Option<&ColorRemap>,
    ) -> Result<BTreeSet<Color>, ColoringError> {
        let blocks = family.blocks();
        let mut out = BTreeSet::new();
        for (i, j) in family.separated_pairs() {
            if let Some(color) = self.mono_color(which, &blocks[i], &blocks[j], remap)? {
                out.insert(color);
            }
        }
        Ok(out)
    }

    /// First separated pair (in lexicographic order) whose product is
    /// `c`-monochromatic in a color above `epsilon`.
    pub fn u1_witness(&self, family: &FamilySample, epsilon: &Color) -> Result<U1Outcome, ColoringError> {
        let blocks = family.blocks();
        let pairs = family.separated_pairs();
        for (k, &(i, j)) in pairs.iter().enumerate() {
            if let Some(tau) = self.mono_color(ColorFn::C, &blocks[i], &blocks[j], None)? {
                if tau > *epsilon {
                    return Ok(U1Outcome::Witness {
                        a: i,
                        b: j,
                        tau,
                        scanned_pairs: k + 1,
                    });
                }
            }
        }
        Ok(U1Outcome::Exhausted {
            scanned_pairs: pairs.len(),
        })
    }

    pub fn pr1_hit(&self, family: &FamilySample, tau: &Color) -> Result<bool, ColoringError> {
        let blocks = family.blocks();
        for (i, j) in family.separated_pairs() {
            if self.mono_color(ColorFn::C, &blocks[i], &blocks[j], None)?.as_ref() == Some(tau) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// `c`-monochromatic colors of every separated pair, evaluated in
    /// parallel. Answers every ε probe for the family without rescanning.
    pub fn pair_table(&self, family: &FamilySample) -> Result<PairTable, ColoringError> {
        let blocks = family.blocks();
        let cells = family
            .separated_pairs()
            .into_par_iter()
            .map(|(i, j)| {
                self.mono_color(ColorFn::C, &blocks[i], &blocks[j], None)
                    .map(|c| (i, j, c))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(PairTable { cells })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cseq::{CSeqBuilder, CSeqKind};

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn single() -> CSeqBuilder {
        CSeqBuilder::new(CSeqKind::SingleTerm, o("w^5"))
    }

    fn table() -> Painter {
        Painter::table_from_str("0 1\nw 2\n").unwrap()
    }

    fn zero_painter() -> Painter {
        Painter::Table {
            entries: BTreeMap::new(),
        }
    }

    fn params(mu: u64, mode: ThetaMode) -> ColoringParams {
        ColoringParams::new(mu, mode, 3).unwrap()
    }

    #[test]
    fn h_examples() {
        let seq = single();
        let paper = Colorer::new(&seq, Painter::Paper, params(4, ThetaMode::Small)).unwrap();
        assert_eq!(paper.h(&o("w+7")).unwrap(), 0);
        assert_eq!(paper.h(&o("w*2")).unwrap(), 0);
        assert_eq!(paper.h(&o("4")).unwrap(), 0);
        assert!(paper.h(&o("0")).is_err());
        let t = Colorer::new(&seq, table(), params(4, ThetaMode::Small)).unwrap();
        assert_eq!(t.h(&o("w*2")).unwrap(), 2);
    }

    #[test]
    fn paper_painter_uses_small_minima() {
        let ladder = CSeqBuilder::new(CSeqKind::Ladder, o("w^5"));
        let paper = Colorer::new(&ladder, Painter::Paper, params(4, ThetaMode::Small)).unwrap();
        // the head of 3 + w is absorbed, so min(C_w) = 0
        assert_eq!(paper.h(&o("w")).unwrap(), 0);
        assert_eq!(Painter::Paper.label_for_min(&o("3"), 4), 3);
        assert_eq!(Painter::Paper.label_for_min(&o("4"), 4), 0);
        assert_eq!(Painter::Paper.label_for_min(&o("w"), 4), 0);
    }

    #[test]
    fn d_examples() {
        let seq = single();
        let zero = Colorer::new(&seq, zero_painter(), params(4, ThetaMode::Small)).unwrap();
        assert_eq!(zero.d(&o("w+1"), &o("w^2")).unwrap(), Color::from(0));
        let t = Colorer::new(&seq, table(), params(4, ThetaMode::Small)).unwrap();
        assert_eq!(t.tr_h(&o("w+1"), &o("w^2")).unwrap(), vec![1, 2]);
        assert_eq!(t.d(&o("w+1"), &o("w^2")).unwrap(), Color::from(2));
        let paper = Colorer::new(&seq, Painter::Paper, params(4, ThetaMode::Small)).unwrap();
        assert_eq!(paper.d(&o("3"), &o("w")).unwrap(), Color::from(0));
    }

    #[test]
    fn c_examples() {
        let seq = single();
        let t = Colorer::new(&seq, table(), params(4, ThetaMode::Large)).unwrap();
        assert_eq!(t.c(&o("w+1"), &o("w^2")).unwrap(), Color(o("w*2")));
        let zero = Colorer::new(&seq, zero_painter(), params(4, ThetaMode::Large)).unwrap();
        assert_eq!(zero.c(&o("w^3+5"), &o("w^3+6")).unwrap(), Color(o("w^3+6")));
        let small = Colorer::new(&seq, table(), params(4, ThetaMode::Small)).unwrap();
        assert_eq!(small.c(&o("w+1"), &o("w^2")).unwrap(), small.d(&o("w+1"), &o("w^2")).unwrap());
    }

    #[test]
    fn table_validation() {
        let seq = single();
        assert!(matches!(
            Colorer::new(&seq, Painter::table_from_str("w 9").unwrap(), params(4, ThetaMode::Small)),
            Err(ColoringError::TableColorOutOfRange { .. })
        ));
        assert!(matches!(
            Painter::table_from_str("w"),
            Err(ColoringError::TableLine { line: 1, .. })
        ));
        assert!(matches!(
            Painter::table_from_str("# c\n\nw 1\nw 2"),
            Err(ColoringError::TableLine { line: 4, .. })
        ));
        assert!(Painter::from_spec("hash:x").is_err());
        assert!(Painter::from_spec("rainbow").is_err());
        assert_eq!(Painter::from_spec("hash:7").unwrap(), Painter::Hash { seed: 7 });
    }

    #[test]
    fn hash_painter_is_stable_and_in_range() {
        let p = Painter::Hash { seed: 11 };
        for s in ["0", "w", "w^4*2+w^3", "17"] {
            let a = p.label_for_min(&o(s), 8);
            assert!(a < 8);
            assert_eq!(a, p.label_for_min(&o(s), 8));
        }
    }

    #[test]
    fn params_validation() {
        assert!(ColoringParams::new(1, ThetaMode::Small, 3).is_err());
        assert!(ColoringParams::new(2, ThetaMode::Small, 1).is_err());
        assert_eq!("large".parse::<ThetaMode>().unwrap(), ThetaMode::Large);
        assert!("huge".parse::<ThetaMode>().is_err());
    }

    #[test]
    fn family_validation() {
        let b = o("w^5");
        assert!(FamilySample::new(vec![vec![o("1")], vec![o("1")]], &b).is_err());
        assert!(FamilySample::new(vec![vec![o("1")], vec![o("2"), o("3")]], &b).is_err());
        assert!(FamilySample::new(vec![vec![o("w^6")]], &b).is_err());
        assert!(FamilySample::new(vec![], &b).is_err());
        let f = FamilySample::new(vec![vec![o("w"), o("3")], vec![o("w+1"), o("w+5")]], &b).unwrap();
        assert_eq!(f.blocks()[0], vec![o("3"), o("w")]);
        assert_eq!(f.separated_pairs(), vec![(0, 1)]);
    }

    #[test]
    fn singleton_family_scan() {
        let seq = single();
        let t = Colorer::new(&seq, table(), params(4, ThetaMode::Small)).unwrap();
        let f = FamilySample::new(vec![vec![o("w^2")], vec![o("w+1")]], &o("w^5")).unwrap();
        let set = t.color_trace_set(&f, ColorFn::D, None).unwrap();
        assert_eq!(set, BTreeSet::from([Color::from(2)]));
        assert_eq!(
            t.u1_witness(&f, &Color::from(1)).unwrap(),
            U1Outcome::Witness {
                a: 1,
                b: 0,
                tau: Color::from(2),
                scanned_pairs: 1
            }
        );
        assert_eq!(
            t.u1_witness(&f, &Color::from(2)).unwrap(),
            U1Outcome::Exhausted { scanned_pairs: 1 }
        );
        assert!(t.pr1_hit(&f, &Color::from(2)).unwrap());
        assert!(!t.pr1_hit(&f, &Color::from(7)).unwrap());
        let remap = ColorRemap(BTreeMap::from([(Color::from(2), Color::from(0))]));
        assert_eq!(
            t.color_trace_set(&f, ColorFn::D, Some(&remap)).unwrap(),
            BTreeSet::from([Color::from(0)])
        );
    }

    #[test]
    fn zero_painter_realizes_only_zero() {
        let seq = single();
        let zero = Colorer::new(&seq, zero_painter(), params(4, ThetaMode::Small)).unwrap();
        let f = FamilySample::new(
            vec![vec![o("3"), o("5")], vec![o("w+1"), o("w+3")], vec![o("w^2"), o("w^3")]],
            &o("w^5"),
        )
        .unwrap();
        let set = zero.color_trace_set(&f, ColorFn::D, None).unwrap();
        assert!(set.iter().all(|c| *c == Color::from(0)));
        assert_eq!(zero.pair_table(&f).unwrap().realized(), set);
    }
}
