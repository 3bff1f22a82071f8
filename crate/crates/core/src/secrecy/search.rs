//! Minimization of a secrecy measure over Eve's classical post-processing.
//!
//! Every objective handled here conditions all of its entropies on Eve, so it
//! splits into a sum over Eve's symbols of a function of the (unnormalized)
//! column `P(·, e)`. Merging symbols adds columns, which lets the exhaustive
//! search over deterministic channels (set partitions of Eve's alphabet)
//! precompute one value per subset of symbols. The reported value is always
//! recomputed through [`apply_channel`] and the public measure so the
//! witness attains it.

use std::collections::BTreeMap;

use super::channel::{apply_channel, ClassicalChannel};
use super::distribution::JointDistribution;
use super::measures::{permutations, s_n_ordered, shannon_cmi};
use crate::behaviors::{decode, encode};
use crate::error::{Error, Result};
use crate::partition::set_partitions;
use crate::scalar::Real;

/// Channel search budget.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Largest Eve alphabet for which every set partition is enumerated.
    pub max_exhaustive_alphabet: usize,
    /// Run coordinate descent on stochastic channels after the exhaustive stage.
    pub refine: bool,
    pub sweeps: usize,
    pub initial_step: f64,
    /// A sweep improving the objective by less than this halves the step.
    pub min_improvement: f64,
    pub min_step: f64,
    /// Output alphabet of the refinement stage is `|E| + extra_outputs`.
    pub extra_outputs: usize,
    /// For `S_N`: minimize over all party orderings.
    pub symmetrize: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_exhaustive_alphabet: 10,
            refine: true,
            sweeps: 200,
            initial_step: 0.25,
            min_improvement: 1e-9,
            min_step: 1e-6,
            extra_outputs: 0,
            symmetrize: false,
        }
    }
}

impl SearchConfig {
    pub fn exhaustive_only() -> Self {
        Self { refine: false, ..Self::default() }
    }
}

/// Outcome of a channel search. `value` is an upper bound on the infimum
/// over all channels; it is attained by `witness`.
#[derive(Debug, Clone)]
pub struct ChannelSearch<T: Real = f64> {
    pub value: T,
    pub witness: ClassicalChannel<T>,
    /// Best value over deterministic channels (or the identity channel when
    /// the alphabet is too large to enumerate).
    pub deterministic_value: T,
    pub partitions_searched: u64,
    /// Party ordering used for `S_N` objectives.
    pub order: Vec<usize>,
}

/// `Σ_mask coef · H̃(marginal on mask)` of an unnormalized party column,
/// with `H̃(v) = -Σ v log₂ v`.
struct ColumnObjective<T: Real> {
    terms: Vec<(T, Vec<usize>, usize)>,
}

impl<T: Real> ColumnObjective<T> {
    fn from_masks(alphabets: &[usize], coefs: BTreeMap<u32, i64>) -> Self {
        let n_a: usize = alphabets.iter().product();
        let terms = coefs
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(mask, c)| {
                let vars: Vec<usize> = (0..alphabets.len()).filter(|&i| mask & (1 << i) != 0).collect();
                let sub: Vec<usize> = vars.iter().map(|&i| alphabets[i]).collect();
                let proj = (0..n_a)
                    .map(|a| {
                        let d = decode(a, alphabets);
                        encode(&vars.iter().map(|&i| d[i]).collect::<Vec<_>>(), &sub)
                    })
                    .collect();
                (T::lit(c as f64), proj, sub.iter().product())
            })
            .collect();
        Self { terms }
    }

    fn cmi(alphabets: &[usize]) -> Self {
        let n = alphabets.len();
        let mut c = BTreeMap::new();
        for i in 0..n {
            *c.entry(1u32 << i).or_insert(0) += 1;
        }
        *c.entry((1u32 << n) - 1).or_insert(0) -= 1;
        *c.entry(0).or_insert(0) -= n as i64 - 1;
        Self::from_masks(alphabets, c)
    }

    fn s_n(alphabets: &[usize], order: &[usize]) -> Self {
        let n = alphabets.len();
        let mask = |s: &[usize]| s.iter().fold(0u32, |m, &i| m | (1 << i));
        let mut c = BTreeMap::new();
        for k in 0..n.saturating_sub(1) {
            let z = mask(&order[..k]);
            let x = mask(&order[k..=k]);
            let y = mask(&order[k + 1..]);
            *c.entry(z | x).or_insert(0) += 1;
            *c.entry(z | y).or_insert(0) += 1;
            *c.entry(z).or_insert(0) -= 1;
            *c.entry(z | x | y).or_insert(0) -= 1;
        }
        Self::from_masks(alphabets, c)
    }

    fn eval(&self, col: &[T]) -> T {
        let mut total = T::zero();
        let mut buf = Vec::new();
        for (coef, proj, size) in &self.terms {
            buf.clear();
            buf.resize(*size, T::zero());
            for (a, &p) in col.iter().enumerate() {
                buf[proj[a]] += p;
            }
            total += *coef * buf.iter().map(|&v| v.plogp()).sum::<T>();
        }
        total
    }
}

/// Multipartite intrinsic information `I(A₁:…:A_N ↓ E)`: the smallest
/// `shannon_cmi` over the searched channels on Eve's symbol.
pub fn intrinsic_information<T: Real>(p: &JointDistribution<T>, cfg: &SearchConfig) -> Result<ChannelSearch<T>> {
    let obj = ColumnObjective::cmi(p.party_alphabets());
    let order: Vec<usize> = (0..p.parties()).collect();
    search(p, cfg, &obj, |q| Ok(shannon_cmi(q)), order)
}

/// `S_N(A₁:…:A_N ↓ E)`: the smallest `S_N` over the searched channels.
pub fn dual_intrinsic<T: Real>(p: &JointDistribution<T>, cfg: &SearchConfig) -> Result<ChannelSearch<T>> {
    let orders = if cfg.symmetrize { permutations(p.parties()) } else { vec![(0..p.parties()).collect()] };
    let mut best: Option<ChannelSearch<T>> = None;
    for order in orders {
        let obj = ColumnObjective::s_n(p.party_alphabets(), &order);
        let o = order.clone();
        let found = search(p, cfg, &obj, move |q| s_n_ordered(q, &o), order)?;
        if best.as_ref().is_none_or(|b| found.value < b.value) {
            best = Some(found);
        }
    }
    Ok(best.expect("at least one ordering"))
}

fn search<T: Real>(
    p: &JointDistribution<T>,
    cfg: &SearchConfig,
    obj: &ColumnObjective<T>,
    exact: impl Fn(&JointDistribution<T>) -> Result<T>,
    order: Vec<usize>,
) -> Result<ChannelSearch<T>> {
    let n_e = p.eve_alphabet();
    let columns: Vec<Vec<T>> = (0..n_e).map(|e| p.eve_column(e)).collect();

    let (labels, partitions_searched) = if n_e <= cfg.max_exhaustive_alphabet {
        best_partition(&columns, obj)?
    } else {
        ((0..n_e).collect(), 0)
    };
    let blocks = labels.iter().max().map_or(1, |m| m + 1);
    let det_channel = ClassicalChannel::deterministic(&labels, blocks)?;
    let deterministic_value = exact(&apply_channel(p, &det_channel)?)?;

    let mut witness = det_channel;
    let mut value = deterministic_value;
    if cfg.refine {
        let n_f = (n_e + cfg.extra_outputs).max(blocks);
        let mut lam = vec![T::zero(); n_e * n_f];
        for (e, &l) in labels.iter().enumerate() {
            lam[e * n_f + l] = T::one();
        }
        let lam = coordinate_descent(&columns, obj, lam, n_f, cfg);
        let refined = ClassicalChannel::new(n_e, n_f, lam)?;
        let refined_value = exact(&apply_channel(p, &refined)?)?;
        if refined_value < value - T::lit(cfg.min_improvement) {
            witness = refined;
            value = refined_value;
        }
    }
    Ok(ChannelSearch { value, witness, deterministic_value, partitions_searched, order })
}

/// Exhaustive minimum over all set partitions of Eve's alphabet.
fn best_partition<T: Real>(columns: &[Vec<T>], obj: &ColumnObjective<T>) -> Result<(Vec<usize>, u64)> {
    let n_e = columns.len();
    if n_e > 24 {
        return Err(Error::Unsupported(format!("cannot enumerate partitions of {n_e} symbols")));
    }
    let n_a = columns.first().map_or(0, Vec::len);
    // value of each merged block, indexed by subset bitmask
    let subsets = 1usize << n_e;
    let mut sums = vec![T::zero(); subsets * n_a];
    let mut block_value = vec![T::zero(); subsets];
    for mask in 1..subsets {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        for a in 0..n_a {
            sums[mask * n_a + a] = sums[rest * n_a + a] + columns[low][a];
        }
        block_value[mask] = obj.eval(&sums[mask * n_a..(mask + 1) * n_a]);
    }

    let mut best = (T::infinity(), Vec::new());
    let mut count = 0u64;
    let mut masks = vec![0usize; n_e];
    for labels in set_partitions(n_e) {
        count += 1;
        masks.iter_mut().for_each(|m| *m = 0);
        for (e, &l) in labels.iter().enumerate() {
            masks[l] |= 1 << e;
        }
        let v: T = masks.iter().take_while(|&&m| m != 0).map(|&m| block_value[m]).sum();
        if v < best.0 {
            best = (v, labels);
        }
    }
    Ok((best.1, count))
}

/// Coordinate descent over rows of `Λ`: each move pulls row `e` toward or
/// away from the point mass on output `f`.
fn coordinate_descent<T: Real>(
    columns: &[Vec<T>],
    obj: &ColumnObjective<T>,
    mut lam: Vec<T>,
    n_f: usize,
    cfg: &SearchConfig,
) -> Vec<T> {
    let n_e = columns.len();
    let n_a = columns.first().map_or(0, Vec::len);
    let mut out_cols = vec![vec![T::zero(); n_a]; n_f];
    for e in 0..n_e {
        for f in 0..n_f {
            let w = lam[e * n_f + f];
            if w != T::zero() {
                for a in 0..n_a {
                    out_cols[f][a] += w * columns[e][a];
                }
            }
        }
    }
    let mut col_value: Vec<T> = out_cols.iter().map(|c| obj.eval(c)).collect();
    let mut step = T::lit(cfg.initial_step);
    let accept_margin = T::epsilon() * T::lit(64.0);
    let mut trial = vec![T::zero(); n_a];

    for _ in 0..cfg.sweeps {
        let mut gained = T::zero();
        for e in 0..n_e {
            for f in 0..n_f {
                for toward in [true, false] {
                    let row: Vec<T> = lam[e * n_f..(e + 1) * n_f].to_vec();
                    let new_row: Vec<T> = if toward {
                        if row[f] >= T::one() {
                            continue;
                        }
                        row.iter().enumerate().map(|(g, &r)| r * (T::one() - step) + if g == f { step } else { T::zero() }).collect()
                    } else {
                        let t = step.min(row[f]);
                        if t <= T::zero() || row[f] >= T::one() {
                            continue;
                        }
                        row.iter()
                            .enumerate()
                            .map(|(g, &r)| (if g == f { r - t } else { r }) / (T::one() - t))
                            .collect()
                    };
                    let mut delta_value = T::zero();
                    let mut changed = Vec::new();
                    for g in 0..n_f {
                        let d = new_row[g] - row[g];
                        if d == T::zero() {
                            continue;
                        }
                        for a in 0..n_a {
                            trial[a] = (out_cols[g][a] + d * columns[e][a]).max(T::zero());
                        }
                        let v = obj.eval(&trial);
                        delta_value += v - col_value[g];
                        changed.push((g, d, v));
                    }
                    if delta_value < -accept_margin {
                        for (g, d, v) in changed {
                            for a in 0..n_a {
                                out_cols[g][a] = (out_cols[g][a] + d * columns[e][a]).max(T::zero());
                            }
                            col_value[g] = v;
                        }
                        lam[e * n_f..(e + 1) * n_f].copy_from_slice(&new_row);
                        gained -= delta_value;
                    }
                }
            }
        }
        if gained < T::lit(cfg.min_improvement) {
            step *= T::lit(0.5);
            if step < T::lit(cfg.min_step) {
                break;
            }
        }
    }
    // rows drift from exact stochasticity by rounding only
    for row in lam.chunks_mut(n_f) {
        let s: T = row.iter().copied().sum();
        row.iter_mut().for_each(|x| *x /= s);
    }
    lam
}
