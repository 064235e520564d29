use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Val,
    Test,
}

/// Disjoint, exhaustive train/val/test assignment of `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitAssignment {
    pub seed: u64,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitAssignment {
    pub fn len(&self) -> usize {
        self.train.len() + self.val.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn part(&self, p: Partition) -> &[usize] {
        match p {
            Partition::Train => &self.train,
            Partition::Val => &self.val,
            Partition::Test => &self.test,
        }
    }

    /// Partition of every item, indexed by item.
    pub fn assignment(&self) -> Vec<Partition> {
        let mut out = vec![Partition::Train; self.len()];
        for &i in &self.val {
            out[i] = Partition::Val;
        }
        for &i in &self.test {
            out[i] = Partition::Test;
        }
        out
    }
}

/// Seeded shuffle of `0..n`, then contiguous slices of sizes
/// `round(n·f_train)`, `round(n·f_val)` and the remainder.
pub fn make_split(n: usize, fractions: [f64; 3], seed: u64) -> Result<SplitAssignment> {
    if fractions.iter().any(|&f| !(f >= 0.0)) || (fractions.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig(format!(
            "split fractions {fractions:?} must be non-negative and sum to 1"
        )));
    }
    let n_train = (n as f64 * fractions[0]).round() as usize;
    let n_val = (n as f64 * fractions[1]).round() as usize;
    if n_train == 0 || n_val == 0 || n_train + n_val >= n {
        return Err(Error::InvalidInput(format!(
            "split of {n} items with fractions {fractions:?} leaves an empty partition"
        )));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng::stream(seed, rng::SPLIT));
    let test = order.split_off(n_train + n_val);
    let val = order.split_off(n_train);
    Ok(SplitAssignment {
        seed,
        train: order,
        val,
        test,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_and_graph_ratios() {
        let s = make_split(100, [0.48, 0.32, 0.20], 1).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (48, 32, 20));
        let s = make_split(10, [0.8, 0.1, 0.1], 1).unwrap();
        assert_eq!((s.train.len(), s.val.len(), s.test.len()), (8, 1, 1));
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(make_split(50, [0.6, 0.2, 0.2], 3).unwrap(), make_split(50, [0.6, 0.2, 0.2], 3).unwrap());
        assert_ne!(make_split(50, [0.6, 0.2, 0.2], 3).unwrap(), make_split(50, [0.6, 0.2, 0.2], 4).unwrap());
    }

    #[test]
    fn empty_partition_rejected() {
        assert!(make_split(3, [0.8, 0.1, 0.1], 0).is_err());
        assert!(make_split(10, [0.5, 0.6, -0.1], 0).is_err());
    }
}
