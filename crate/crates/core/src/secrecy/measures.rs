//! Classical multipartite correlation measures, computed from marginal
//! Shannon entropies.

use super::distribution::JointDistribution;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// `I(A₁:…:A_N|E) = Σ_i H(A_i|E) - H(A₁…A_N|E)`.
pub fn shannon_cmi<T: Real>(p: &JointDistribution<T>) -> T {
    let n = p.parties();
    let eve = n;
    let h = |vars: &[usize]| p.entropy(vars).expect("variables in range");
    let h_e = h(&[eve]);
    let mut total = T::zero();
    for i in 0..n {
        total += h(&[i, eve]) - h_e;
    }
    let all: Vec<usize> = (0..=n).collect();
    total - (h(&all) - h_e)
}

/// `I(A₁:…:A_N)` ignoring Eve.
pub fn shannon_cmi_unconditioned<T: Real>(p: &JointDistribution<T>) -> T {
    shannon_cmi(&p.forget_eve())
}

/// `S_N` in the canonical party order:
/// `I(A₁:A₂…A_N|E) + I(A₂:A₃…A_N|A₁E) + … + I(A_{N-1}:A_N|A₁…A_{N-2}E)`.
pub fn s_n<T: Real>(p: &JointDistribution<T>) -> T {
    let order: Vec<usize> = (0..p.parties()).collect();
    s_n_ordered(p, &order).expect("identity order is a permutation")
}

/// `S_N` with the parties taken in `order`.
pub fn s_n_ordered<T: Real>(p: &JointDistribution<T>, order: &[usize]) -> Result<T> {
    let n = p.parties();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidPartition(format!("{order:?} is not a party ordering")));
    }
    let eve = n;
    let mut total = T::zero();
    for k in 0..n.saturating_sub(1) {
        let mut cond: Vec<usize> = order[..k].to_vec();
        cond.push(eve);
        total += p.conditional_mutual_information(&[order[k]], &order[k + 1..], &cond)?;
    }
    Ok(total)
}

/// `S_N` minimized over all party orderings, with the minimizing order.
pub fn s_n_symmetrized<T: Real>(p: &JointDistribution<T>) -> (T, Vec<usize>) {
    let mut best = (T::infinity(), Vec::new());
    for order in permutations(p.parties()) {
        let v = s_n_ordered(p, &order).expect("generated permutation");
        if v < best.0 {
            best = (v, order);
        }
    }
    best
}

/// `Σ_i I(A_i : A_rest)` ignoring Eve.
pub fn sum_party_rest_mutual_information<T: Real>(p: &JointDistribution<T>) -> T {
    let q = p.forget_eve();
    let n = q.parties();
    (0..n)
        .map(|i| {
            let rest: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            q.conditional_mutual_information(&[i], &rest, &[]).expect("in range")
        })
        .sum()
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).expect("exists by choice of i");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
}

/// `g(ε) = (1+ε) log₂(1+ε) - ε log₂ ε`, with `g(0) = 0`.
pub fn continuity_g<T: Real>(eps: T) -> T {
    let one = T::one();
    let a = (one + eps) * (one + eps).log2();
    if eps <= T::zero() {
        a
    } else {
        a - eps * eps.log2()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContinuityFlavor {
    /// `2ε log d + g(ε)` for conditional entropies.
    ConditionalEntropy,
    /// `2ε log d + 2 g(ε)` for conditional mutual information.
    Cmi,
}

pub fn continuity_envelope<T: Real>(eps: T, log_dim: T, flavor: ContinuityFlavor) -> Result<T> {
    if !(eps >= T::zero() && eps <= T::one()) {
        return Err(Error::OutOfRange(format!("trace distance {eps} outside [0, 1]")));
    }
    let g = continuity_g(eps);
    let base = T::lit(2.0) * eps * log_dim;
    Ok(match flavor {
        ContinuityFlavor::ConditionalEntropy => base + g,
        ContinuityFlavor::Cmi => base + T::lit(2.0) * g,
    })
}
