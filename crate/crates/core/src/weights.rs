use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Multiset of point weights of a linear set: weight -> number of points.
///
/// Only points of the set (weight >= 1) are recorded. The nonzero vectors of
/// U are partitioned by the points they span, which gives the identity
/// `sum_w n_w (q^w - 1) = q^rank - 1` checked on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightDistribution {
    q: u32,
    rank: u32,
    #[serde(rename = "weights")]
    counts: BTreeMap<u32, u64>,
}

impl WeightDistribution {
    pub fn new(q: u32, rank: u32, counts: BTreeMap<u32, u64>) -> Result<Self> {
        let counts: BTreeMap<u32, u64> = counts.into_iter().filter(|&(_, n)| n > 0).collect();
        let d = WeightDistribution { q, rank, counts };
        d.validate()?;
        Ok(d)
    }

    /// From a dense array indexed by weight (index 0 is ignored).
    pub fn from_dense(q: u32, rank: u32, dense: &[u64; 6]) -> Result<Self> {
        let counts = (1..=5u32).map(|w| (w, dense[w as usize])).collect();
        WeightDistribution::new(q, rank, counts)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=5).contains(&self.rank) {
            return Err(Error::Invariant(format!("rank {} outside 1..=5", self.rank)));
        }
        if let Some((&w, _)) = self.counts.iter().find(|&(&w, _)| w == 0 || w > self.rank) {
            return Err(Error::Invariant(format!("weight {w} outside 1..={}", self.rank)));
        }
        let q = self.q as u128;
        let lhs: u128 = self.counts.iter().map(|(&w, &n)| n as u128 * (q.pow(w) - 1)).sum();
        let rhs = q.pow(self.rank) - 1;
        if lhs != rhs {
            return Err(Error::Invariant(format!(
                "partition identity fails for {self}: sum n_w (q^w - 1) = {lhs}, expected q^{} - 1 = {rhs}",
                self.rank
            )));
        }
        if self.counts.contains_key(&5) && self.counts.len() != 1 {
            return Err(Error::Invariant("a weight-5 point must be the only point".into()));
        }
        Ok(())
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn counts(&self) -> &BTreeMap<u32, u64> {
        &self.counts
    }

    pub fn count(&self, weight: u32) -> u64 {
        self.counts.get(&weight).copied().unwrap_or(0)
    }

    /// Number of points of the linear set.
    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_weight(&self) -> u32 {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn dense(&self) -> [u64; 6] {
        let mut d = [0; 6];
        for (&w, &n) in &self.counts {
            d[w as usize] = n;
        }
        d
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().rev().map(|(w, n)| format!("{w}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
