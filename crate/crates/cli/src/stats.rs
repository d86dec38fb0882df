//! Monte-Carlo summary statistics.

use serde::{Deserialize, Serialize};

/// Normal quantile for two-sided 99% intervals.
pub const Z99: f64 = 2.5758293035489004;

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagCounts {
    pub acc: u64,
    pub rej: u64,
    pub cont: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BranchStats {
    pub trials: u64,
    pub accepts: u64,
    pub rate: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunSummary {
    pub protocol: String,
    pub trials: u64,
    pub accepts: u64,
    pub flag_counts: FlagCounts,
    pub success_rate: f64,
    pub wilson_99: (f64, f64),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preimage_branch: Option<BranchStats>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation_branch: Option<BranchStats>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_contains_the_point_estimate() {
        for (s, n) in [(0u64, 10u64), (5, 10), (10, 10), (853, 1000)] {
            let (lo, hi) = wilson_interval(s, n, Z99);
            let p = s as f64 / n as f64;
            assert!(lo <= p && p <= hi, "({s}, {n}): [{lo}, {hi}] vs {p}");
            assert!((0.0..=1.0).contains(&lo) && (0.0..=1.0).contains(&hi));
        }
    }

    #[test]
    fn wilson_interval_narrows_with_more_data() {
        let (lo1, hi1) = wilson_interval(75, 100, Z99);
        let (lo2, hi2) = wilson_interval(7500, 10_000, Z99);
        assert!(hi2 - lo2 < hi1 - lo1);
    }
}
