use crate::error::{Error, Result};
use crate::partition::{block_count, blocks, set_partitions};

/// Grouping of parties into blocks, listed with sorted blocks ordered by
/// their smallest member.
pub type Partition = Vec<Vec<usize>>;

/// A nontrivial partition of the parties together with a key-rate bound
/// valid across it.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionBoundInput {
    partition: Partition,
    value: f64,
}

impl PartitionBoundInput {
    pub fn new(n_parties: usize, partition: Partition, value: f64) -> Result<Self> {
        let k = partition.len();
        if k < 2 || k + 1 > n_parties {
            return Err(Error::InvalidPartition(format!("{k} blocks for {n_parties} parties")));
        }
        let mut seen = vec![false; n_parties];
        for &p in partition.iter().flatten() {
            if p >= n_parties || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidPartition(format!("party {p} out of range or repeated")));
            }
        }
        if seen.iter().any(|s| !s) || partition.iter().any(Vec::is_empty) {
            return Err(Error::InvalidPartition("partition does not cover every party".into()));
        }
        if !value.is_finite() {
            return Err(Error::OutOfRange(format!("cut bound {value}")));
        }
        Ok(Self { partition, value })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// Minimum of the supplied cut bounds.
pub fn partition_bound(values: &[PartitionBoundInput]) -> Result<f64> {
    values
        .iter()
        .map(PartitionBoundInput::value)
        .reduce(f64::min)
        .ok_or_else(|| Error::InvalidPartition("no partitions supplied".into()))
}

/// Every partition of `n_parties` into between 2 and N-1 blocks.
pub fn enumerate_partitions(n_parties: usize) -> Result<Vec<Partition>> {
    if n_parties < 3 {
        return Err(Error::OutOfRange(format!("need at least 3 parties, got {n_parties}")));
    }
    Ok(set_partitions(n_parties)
        .filter(|labels| (2..n_parties).contains(&block_count(labels)))
        .map(|labels| blocks(&labels))
        .collect())
}

/// For parties on a path with bipartite key bounds `edge_bounds[i]` on the
/// link `(i, i+1)`, the bound across a cut is the sum over the links it
/// severs.
pub fn path_cut_value(edge_bounds: &[f64], partition: &Partition) -> f64 {
    let n = edge_bounds.len() + 1;
    let mut block_of = vec![0; n];
    for (b, members) in partition.iter().enumerate() {
        for &p in members {
            block_of[p] = b;
        }
    }
    edge_bounds.iter().enumerate().filter(|&(i, _)| block_of[i] != block_of[i + 1]).map(|(_, &v)| v).sum()
}

/// `partition_bound` over every nontrivial cut of a path network.
pub fn path_partition_bound(edge_bounds: &[f64]) -> Result<f64> {
    let n = edge_bounds.len() + 1;
    let inputs = enumerate_partitions(n)?
        .into_iter()
        .map(|p| {
            let v = path_cut_value(edge_bounds, &p);
            PartitionBoundInput::new(n, p, v)
        })
        .collect::<Result<Vec<_>>>()?;
    partition_bound(&inputs)
}
