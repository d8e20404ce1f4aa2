//! Job spec files.

use std::ops::RangeInclusive;
use std::path::Path;

use serde::Deserialize;
use subshift::automata::{DirectedGraph, LabeledGraph};
use subshift::escape::{HoleFamily, Point};
use subshift::perturbation::{ForbiddenSet, WordFamily};
use subshift::shifts::GapSet;
use subshift::system::System;
use subshift::word::Word;
use subshift::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub system: SystemSpec,
    #[serde(default)]
    pub words: Vec<String>,
    pub u: Option<String>,
    pub w: Option<String>,
    pub family: Option<FamilySpec>,
    pub n_range: Option<(usize, usize)>,
    #[serde(default)]
    pub points: Vec<String>,
    pub candidate: Option<String>,
    pub horizon: Option<usize>,
    pub tol: Option<f64>,
    pub nmax: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemSpec {
    Full { symbols: u32 },
    Sft { adjacency: Vec<Vec<u64>> },
    Sofic { vertices: usize, edges: Vec<(usize, usize, u32)> },
    Sgap {
        #[serde(default)]
        preperiod: String,
        #[serde(default)]
        period: String,
        elements: Option<Vec<usize>>,
    },
    Dgap { d: usize },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Power { symbol: u32 },
    Prefixes {
        #[serde(default)]
        pre: String,
        period: String,
    },
    Explicit { words: Vec<String> },
}

pub fn load(path: &Path) -> Result<JobSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn word(s: &str) -> Result<Word> {
    s.parse()
}

impl JobSpec {
    pub fn system(&self) -> Result<System> {
        Ok(match &self.system {
            SystemSpec::Full { symbols } => System::Full { symbols: *symbols },
            SystemSpec::Sft { adjacency } => System::Sft { graph: DirectedGraph::from_adjacency(adjacency)? },
            SystemSpec::Sofic { vertices, edges } => System::Sofic { graph: LabeledGraph::new(*vertices, edges)? },
            SystemSpec::Sgap { elements: Some(els), .. } => System::SGap { gaps: GapSet::finite(els)? },
            SystemSpec::Sgap { preperiod, period, elements: None } => {
                System::SGap { gaps: GapSet::from_bits(preperiod, period)? }
            }
            SystemSpec::Dgap { d } => System::DGap { d: *d },
        })
    }

    pub fn words(&self) -> Result<Vec<Word>> {
        self.words.iter().map(|s| word(s)).collect()
    }

    pub fn forbidden(&self) -> Result<ForbiddenSet> {
        let words = self.words()?;
        if words.is_empty() {
            return Err(Error::Parse("job needs at least one word".into()));
        }
        ForbiddenSet::new(words)
    }

    pub fn pair(&self) -> Result<(Word, Word)> {
        match (&self.u, &self.w) {
            (Some(u), Some(w)) => Ok((word(u)?, word(w)?)),
            _ => Err(Error::Parse("job needs both u and w".into())),
        }
    }

    pub fn family(&self) -> Result<WordFamily> {
        Ok(match self.family.as_ref().ok_or_else(|| Error::Parse("job needs a family".into()))? {
            FamilySpec::Power { symbol } => WordFamily::Power { symbol: *symbol },
            FamilySpec::Prefixes { pre, period } => WordFamily::Prefixes { pre: word(pre)?, period: word(period)? },
            FamilySpec::Explicit { words } => {
                WordFamily::Explicit { words: words.iter().map(|s| word(s)).collect::<Result<_>>()? }
            }
        })
    }

    pub fn range(&self) -> Result<RangeInclusive<usize>> {
        let (lo, hi) = self.n_range.ok_or_else(|| Error::Parse("job needs n_range".into()))?;
        if lo > hi {
            return Err(Error::Parse(format!("empty n_range [{lo}, {hi}]")));
        }
        Ok(lo..=hi)
    }

    pub fn symbols(&self) -> Result<u32> {
        match self.system {
            SystemSpec::Full { symbols } => Ok(symbols),
            _ => Err(Error::Unsupported("escape rates are defined on full shifts".into())),
        }
    }

    pub fn holes(&self) -> Result<HoleFamily> {
        let points = self.points.iter().map(|p| p.parse::<Point>()).collect::<Result<Vec<_>>>()?;
        HoleFamily::new(self.symbols()?, points)
    }

    pub fn candidate(&self) -> Result<Option<Word>> {
        self.candidate.as_deref().map(word).transpose()
    }
}
