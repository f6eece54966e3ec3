//! With-replacement bootstrap replicates stored as row-index vectors.
//!
//! Replicate `0` is the original data (identity indices); replicates
//! `1..=B` are the bootstrap resamples.

use std::borrow::Cow;

use serde::{Deserialize, Serialize};

use crate::error::{GpcError, Result};
use crate::model::{Dataset, DatasetView};
use crate::numkit::{uniform_index, RandomStream};

const PLAN_TAG: u64 = 0xB007_5743;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BootstrapPlan {
    n: usize,
    master_seed: u64,
    identity: Vec<usize>,
    replicates: Vec<Vec<usize>>,
}

/// What is persisted for a plan; the index vectors are regenerated on load.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanSidecar {
    pub n: usize,
    pub b: usize,
    pub master_seed: u64,
}

pub fn make_plan(n: usize, b: usize, master_seed: u64) -> Result<BootstrapPlan> {
    if n == 0 || b == 0 {
        return Err(GpcError::domain(format!(
            "bootstrap plan needs N >= 1 and B >= 1, got N={n}, B={b}"
        )));
    }
    let replicates = (1..=b)
        .map(|r| {
            let mut rng = RandomStream::derive(master_seed, PLAN_TAG, r as u64);
            (0..n)
                .map(|_| uniform_index(n, &mut rng).expect("n >= 1"))
                .collect()
        })
        .collect();
    Ok(BootstrapPlan {
        n,
        master_seed,
        identity: (0..n).collect(),
        replicates,
    })
}

impl BootstrapPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of bootstrap replicates `B` (replicate 0 not counted).
    pub fn b(&self) -> usize {
        self.replicates.len()
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    /// Index vector of replicate `r`; `r = 0` is the identity.
    pub fn indices(&self, r: usize) -> &[usize] {
        if r == 0 {
            &self.identity
        } else {
            &self.replicates[r - 1]
        }
    }

    pub fn bootstrap_indices(&self) -> &[Vec<usize>] {
        &self.replicates
    }

    pub fn view<'a>(&'a self, data: &'a Dataset, r: usize) -> Result<DatasetView<'a>> {
        if data.len() != self.n {
            return Err(GpcError::domain(format!(
                "plan built for N={} applied to a dataset with {} rows",
                self.n,
                data.len()
            )));
        }
        DatasetView::new(data, Cow::Borrowed(self.indices(r)))
    }

    pub fn sidecar(&self) -> PlanSidecar {
        PlanSidecar {
            n: self.n,
            b: self.b(),
            master_seed: self.master_seed,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.sidecar())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: PlanSidecar = serde_json::from_str(text)?;
        make_plan(s.n, s.b, s.master_seed)
    }
}
