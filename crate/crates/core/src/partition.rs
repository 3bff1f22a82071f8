//! Set partitions as restricted growth strings.
//!
//! A partition of `{0, …, n-1}` is encoded by labels `l` with `l[0] = 0` and
//! `l[i] <= 1 + max(l[..i])`; elements sharing a label share a block. The
//! iterator walks these strings in lexicographic order.

/// Iterator over all set partitions of an `n`-element set.
#[derive(Debug, Clone)]
pub struct SetPartitions {
    labels: Vec<usize>,
    // prefix_max[i] = max(labels[..=i])
    prefix_max: Vec<usize>,
    started: bool,
    done: bool,
}

impl SetPartitions {
    pub fn new(n: usize) -> Self {
        Self { labels: vec![0; n], prefix_max: vec![0; n], started: false, done: false }
    }

    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        for i in (1..n).rev() {
            if self.labels[i] <= self.prefix_max[i - 1] {
                self.labels[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(self.labels[i]);
                for j in (i + 1)..n {
                    self.labels[j] = 0;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for SetPartitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else if !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.labels.clone())
    }
}

pub fn set_partitions(n: usize) -> SetPartitions {
    SetPartitions::new(n)
}

pub fn block_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

/// Blocks of a labelling, each sorted, ordered by smallest element.
pub fn blocks(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); block_count(labels)];
    for (i, &l) in labels.iter().enumerate() {
        out[l].push(i);
    }
    out
}

/// Number of partitions of an `n`-set into exactly `k` blocks.
pub fn stirling2(n: usize, k: usize) -> u64 {
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for m in 1..=n {
        for j in (1..=k.min(m)).rev() {
            row[j] = j as u64 * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    row[k]
}

pub fn bell_number(n: usize) -> u64 {
    (0..=n).map(|k| stirling2(n, k)).sum()
}
