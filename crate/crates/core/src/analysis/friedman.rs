//! Friedman rank test with the Nemenyi post-hoc comparison.
//!
//! Within each block the treatment with the largest value gets rank 1; ties
//! share the average of the ranks they span.

use serde::Serialize;

use super::special::{chi_square_sf, erfc};
use crate::{Error, Result};

/// Blocks (rows, e.g. datasets) by treatments (columns, e.g. network types).
#[derive(Debug, Clone, PartialEq)]
pub struct ResultMatrix {
    blocks: Vec<String>,
    treatments: Vec<String>,
    cells: Vec<Vec<f64>>,
}

impl ResultMatrix {
    pub fn new(blocks: Vec<String>, treatments: Vec<String>, cells: Vec<Vec<f64>>) -> Result<Self> {
        if blocks.len() < 2 || treatments.len() < 2 {
            return Err(Error::DegenerateMatrix {
                blocks: blocks.len(),
                treatments: treatments.len(),
            });
        }
        if cells.len() != blocks.len() {
            return Err(Error::IncompleteMatrix(format!(
                "{} rows for {} blocks",
                cells.len(),
                blocks.len()
            )));
        }
        for (b, row) in blocks.iter().zip(&cells) {
            if row.len() != treatments.len() {
                return Err(Error::IncompleteMatrix(format!(
                    "block `{b}` has {} cells, expected {}",
                    row.len(),
                    treatments.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                return Err(Error::IncompleteMatrix(format!("block `{b}` holds {x}")));
            }
        }
        Ok(ResultMatrix {
            blocks,
            treatments,
            cells,
        })
    }

    pub fn blocks(&self) -> &[String] {
        &self.blocks
    }

    pub fn treatments(&self) -> &[String] {
        &self.treatments
    }

    pub fn cells(&self) -> &[Vec<f64>] {
        &self.cells
    }
}

/// Ranks `1..=k` with 1 for the largest value; ties get average ranks.
pub fn rank_descending(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = shared;
        }
        start = end;
    }
    ranks
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FriedmanResult {
    pub treatments: Vec<String>,
    pub mean_ranks: Vec<f64>,
    pub statistic: f64,
    pub p_value: f64,
    pub blocks: usize,
}

pub fn friedman_test(m: &ResultMatrix) -> FriedmanResult {
    let n = m.blocks.len() as f64;
    let k = m.treatments.len() as f64;
    let mut mean_ranks = vec![0.0; m.treatments.len()];
    for row in &m.cells {
        for (acc, r) in mean_ranks.iter_mut().zip(rank_descending(row)) {
            *acc += r;
        }
    }
    for r in &mut mean_ranks {
        *r /= n;
    }

    let sum_sq: f64 = mean_ranks.iter().map(|r| r * r).sum();
    let raw = 12.0 * n / (k * (k + 1.0)) * (sum_sq - k * (k + 1.0).powi(2) / 4.0);
    // all-tied blocks leave only rounding noise
    let statistic = if raw <= 1e-12 { 0.0 } else { raw };
    let p_value = if statistic == 0.0 {
        1.0
    } else {
        chi_square_sf(statistic, k - 1.0)
    };

    FriedmanResult {
        treatments: m.treatments.clone(),
        mean_ranks,
        statistic,
        p_value,
        blocks: m.blocks.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairwiseComparison {
    pub first: String,
    pub second: String,
    pub z: f64,
    pub p_unadjusted: f64,
    /// `p_unadjusted` times the number of comparisons; may exceed 1 unless clamped.
    pub p_adjusted: f64,
}

impl PairwiseComparison {
    pub fn label(&self) -> String {
        format!("{} vs {}", self.first, self.second)
    }
}

/// All `k(k-1)/2` pairwise comparisons of mean ranks, in treatment order.
pub fn nemenyi_posthoc(m: &ResultMatrix, clamp: bool) -> Vec<PairwiseComparison> {
    let f = friedman_test(m);
    let k = m.treatments.len();
    let n = m.blocks.len() as f64;
    let se = ((k * (k + 1)) as f64 / (6.0 * n)).sqrt();
    let comparisons = (k * (k - 1) / 2) as f64;

    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            let z = (f.mean_ranks[i] - f.mean_ranks[j]).abs() / se;
            let p = erfc(z / std::f64::consts::SQRT_2);
            let adjusted = p * comparisons;
            out.push(PairwiseComparison {
                first: m.treatments[i].clone(),
                second: m.treatments[j].clone(),
                z,
                p_unadjusted: p,
                p_adjusted: if clamp { adjusted.min(1.0) } else { adjusted },
            });
        }
    }
    out
}
