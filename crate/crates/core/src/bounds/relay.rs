use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};

/// One run of the one-time-pad relay along the path `1 - 2 - … - N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelayTranscript {
    /// Secret key shared by parties `i` and `i+1`.
    pub edge_keys: Vec<Vec<bool>>,
    /// Party 1's fresh random string.
    pub r: Vec<bool>,
    /// Public messages; message `i` is sent by party `i` (0-based) and equals
    /// `r ⊕ k_{i,i+1}`.
    pub broadcasts: Vec<Vec<bool>>,
    /// What each party ends up holding.
    pub outputs: Vec<Vec<bool>>,
}

impl RelayTranscript {
    pub fn all_agree(&self) -> bool {
        self.outputs.iter().all(|o| *o == self.r)
    }
}

fn xor(a: &[bool], b: &[bool]) -> Vec<bool> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

/// Runs the relay given the edge keys and party 1's string.
pub fn relay_run(edge_keys: &[Vec<bool>], r: &[bool]) -> Result<RelayTranscript> {
    if edge_keys.len() < 2 {
        return Err(Error::OutOfRange(format!("a relay needs at least 3 parties, got {}", edge_keys.len() + 1)));
    }
    if r.is_empty() || edge_keys.iter().any(|k| k.len() != r.len()) {
        return Err(Error::DimensionMismatch("edge keys and r must share a nonzero length".into()));
    }
    let mut outputs = vec![r.to_vec()];
    let mut broadcasts = Vec::with_capacity(edge_keys.len());
    for (i, key) in edge_keys.iter().enumerate() {
        let msg = xor(&outputs[i], key);
        outputs.push(xor(&msg, key));
        broadcasts.push(msg);
    }
    Ok(RelayTranscript { edge_keys: edge_keys.to_vec(), r: r.to_vec(), broadcasts, outputs })
}

/// Samples uniform edge keys and `r` from a seeded generator and runs the relay.
pub fn relay_simulate(n_parties: usize, key_len: usize, seed: u64) -> Result<RelayTranscript> {
    if n_parties < 3 || key_len == 0 {
        return Err(Error::OutOfRange(format!("relay needs N >= 3 and key_len >= 1, got {n_parties}, {key_len}")));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let bits = |rng: &mut Xoshiro256PlusPlus| (0..key_len).map(|_| rng.gen::<bool>()).collect::<Vec<_>>();
    let edge_keys: Vec<Vec<bool>> = (0..n_parties - 1).map(|_| bits(&mut rng)).collect();
    let r = bits(&mut rng);
    relay_run(&edge_keys, &r)
}

/// Exact statistics of the relay over every assignment of edge keys and `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelayEnumeration {
    pub branches: u64,
    pub all_agree: bool,
    /// Every transcript has the same probability for every value of `r`.
    pub transcript_uniform_given_r: bool,
    /// `I(transcript : r)` in bits from exact counts.
    pub mutual_information: f64,
    /// Best probability of naming `r` from the transcript alone.
    pub guessing_probability: f64,
}

/// Enumerates all `2^{N·key_len}` branches. Limited to 24 random bits.
pub fn relay_enumerate(n_parties: usize, key_len: usize) -> Result<RelayEnumeration> {
    let total_bits = n_parties * key_len;
    if n_parties < 3 || key_len == 0 || total_bits > 24 {
        return Err(Error::OutOfRange(format!("enumeration over {total_bits} bits not supported")));
    }
    let msg_bits = (n_parties - 1) * key_len;
    let n_r = 1usize << key_len;
    let n_t = 1usize << msg_bits;
    let mut counts = vec![0u64; n_r * n_t];
    let mut all_agree = true;
    let unpack = |word: usize, offset: usize| (0..key_len).map(|b| (word >> (offset + b)) & 1 == 1).collect::<Vec<_>>();
    for word in 0..(1usize << total_bits) {
        let r = unpack(word, 0);
        let keys: Vec<Vec<bool>> = (0..n_parties - 1).map(|i| unpack(word, (i + 1) * key_len)).collect();
        let t = relay_run(&keys, &r)?;
        all_agree &= t.all_agree();
        let t_index = t.broadcasts.iter().flatten().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i));
        let r_index = r.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i));
        counts[r_index * n_t + t_index] += 1;
    }
    let branches = 1u64 << total_bits;
    let transcript_uniform_given_r = counts.iter().all(|&c| c == counts[0]);
    let p = |c: u64| c as f64 / branches as f64;
    let mut mi = 0.0;
    let mut guess = 0.0;
    for t in 0..n_t {
        let pt: u64 = (0..n_r).map(|r| counts[r * n_t + t]).sum();
        guess += p((0..n_r).map(|r| counts[r * n_t + t]).max().unwrap_or(0));
        for r in 0..n_r {
            let c = counts[r * n_t + t];
            if c > 0 {
                let pr: u64 = (0..n_t).map(|s| counts[r * n_t + s]).sum();
                mi += p(c) * (p(c) / (p(pt) * p(pr))).log2();
            }
        }
    }
    Ok(RelayEnumeration {
        branches,
        all_agree,
        transcript_uniform_given_r,
        mutual_information: mi,
        guessing_probability: guess,
    })
}
