use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aggregation::AggregationKind;
use crate::measures::MeasureKind;
use crate::{Error, Result};

/// How a seed set is chosen from the learning network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Strategy {
    /// Top-ranked nodes by an aggregated measure.
    Ranked {
        measure: MeasureKind,
        aggregation: AggregationKind,
    },
    /// Uniform draw over the learning nodes.
    Random,
    /// Draw weighted by the number of learning windows a node occurs in.
    RandomFreq,
}

const NAMED: [(&str, &str, MeasureKind, AggregationKind); 5] = [
    ("inexp", "InExp", MeasureKind::InDegree, AggregationKind::Ef),
    ("outexp", "OutExp", MeasureKind::OutDegree, AggregationKind::Ef),
    ("totlog", "TotLog", MeasureKind::TotalDegree, AggregationKind::SumLog),
    ("bethyp", "BetHyp", MeasureKind::Betweenness, AggregationKind::Hf),
    ("clopow", "CloPow", MeasureKind::Closeness, AggregationKind::SumPow),
];

impl Strategy {
    pub const IN_EXP: Strategy = Strategy::Ranked {
        measure: MeasureKind::InDegree,
        aggregation: AggregationKind::Ef,
    };
    pub const OUT_EXP: Strategy = Strategy::Ranked {
        measure: MeasureKind::OutDegree,
        aggregation: AggregationKind::Ef,
    };
    pub const TOT_LOG: Strategy = Strategy::Ranked {
        measure: MeasureKind::TotalDegree,
        aggregation: AggregationKind::SumLog,
    };
    pub const BET_HYP: Strategy = Strategy::Ranked {
        measure: MeasureKind::Betweenness,
        aggregation: AggregationKind::Hf,
    };
    pub const CLO_POW: Strategy = Strategy::Ranked {
        measure: MeasureKind::Closeness,
        aggregation: AggregationKind::SumPow,
    };

    /// The five ranked strategies followed by both random baselines.
    pub fn standard_set() -> Vec<Strategy> {
        vec![
            Strategy::IN_EXP,
            Strategy::OUT_EXP,
            Strategy::TOT_LOG,
            Strategy::BET_HYP,
            Strategy::CLO_POW,
            Strategy::Random,
            Strategy::RandomFreq,
        ]
    }

    pub fn is_random(self) -> bool {
        !matches!(self, Strategy::Ranked { .. })
    }

    /// Display label, e.g. `OutExp` or `closeness:maxlog`.
    pub fn label(self) -> String {
        match self {
            Strategy::Random => "Random".into(),
            Strategy::RandomFreq => "RandomFreq".into(),
            Strategy::Ranked { measure, aggregation } => NAMED
                .iter()
                .find(|n| n.2 == measure && n.3 == aggregation)
                .map(|n| n.1.to_owned())
                .unwrap_or_else(|| format!("{measure}:{aggregation}")),
        }
    }

    /// Lower-case token usable in file names.
    pub fn file_stem(self) -> String {
        self.label().to_ascii_lowercase().replace(':', "-")
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "random" => return Ok(Strategy::Random),
            "randomfreq" | "random_freq" => return Ok(Strategy::RandomFreq),
            _ => {}
        }
        if let Some(n) = NAMED.iter().find(|n| n.0 == lower) {
            return Ok(Strategy::Ranked {
                measure: n.2,
                aggregation: n.3,
            });
        }
        match lower.split_once(':') {
            Some((m, a)) => Ok(Strategy::Ranked {
                measure: m.parse()?,
                aggregation: a.parse()?,
            }),
            None => Err(Error::Config(format!(
                "unknown strategy `{s}` (expected inexp, outexp, totlog, bethyp, clopow, random, randomfreq or <measure>:<aggregation>)"
            ))),
        }
    }
}

impl TryFrom<String> for Strategy {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Strategy> for String {
    fn from(s: Strategy) -> String {
        s.label()
    }
}
