use std::io::{Read, Write};

use crate::behaviors::{decode, encode};
use crate::error::{Error, Result};
use crate::io::format_sig;
use crate::scalar::Real;

/// Joint distribution `P(a₁, …, a_N, e)` of N parties and an eavesdropper.
///
/// Entries are stored with the party symbols as the most significant digits
/// and Eve's symbol last. Variable `i < N` is party `i`; variable `N` is Eve.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T: Real = f64> {
    party_alphabets: Vec<usize>,
    eve_alphabet: usize,
    probs: Vec<T>,
}

impl<T: Real> JointDistribution<T> {
    pub fn new(party_alphabets: Vec<usize>, eve_alphabet: usize, mut probs: Vec<T>) -> Result<Self> {
        if party_alphabets.is_empty() || party_alphabets.contains(&0) || eve_alphabet == 0 {
            return Err(Error::InvalidDistribution(format!(
                "bad alphabets: parties {party_alphabets:?}, eve {eve_alphabet}"
            )));
        }
        let n: usize = party_alphabets.iter().product::<usize>() * eve_alphabet;
        if probs.len() != n {
            return Err(Error::DimensionMismatch(format!("{} probabilities for {n} outcomes", probs.len())));
        }
        let window = T::lit(T::PROB_CLAMP);
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -window {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative")));
            }
            *p = p.max(T::zero());
        }
        let total: T = probs.iter().copied().sum();
        if (total - T::one()).abs() > T::lit(T::NORM_TOL) {
            return Err(Error::InvalidDistribution(format!("total probability {total}")));
        }
        Ok(Self { party_alphabets, eve_alphabet, probs })
    }

    /// A distribution with a one-symbol (uninformative) eavesdropper.
    pub fn without_eve(party_alphabets: Vec<usize>, probs: Vec<T>) -> Result<Self> {
        Self::new(party_alphabets, 1, probs)
    }

    pub fn parties(&self) -> usize {
        self.party_alphabets.len()
    }

    pub fn party_alphabets(&self) -> &[usize] {
        &self.party_alphabets
    }

    pub fn eve_alphabet(&self) -> usize {
        self.eve_alphabet
    }

    pub fn num_party_outcomes(&self) -> usize {
        self.party_alphabets.iter().product()
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob(&self, parties: &[usize], eve: usize) -> T {
        self.probs[encode(parties, &self.party_alphabets) * self.eve_alphabet + eve]
    }

    /// `P(·, e)` over joint party outcomes, unnormalized.
    pub fn eve_column(&self, e: usize) -> Vec<T> {
        (0..self.num_party_outcomes()).map(|a| self.probs[a * self.eve_alphabet + e]).collect()
    }

    pub fn eve_marginal(&self) -> Vec<T> {
        (0..self.eve_alphabet).map(|e| self.eve_column(e).into_iter().sum()).collect()
    }

    /// Drops Eve: the party marginal with a trivial eavesdropper.
    pub fn forget_eve(&self) -> Self {
        let probs = (0..self.num_party_outcomes())
            .map(|a| self.probs[a * self.eve_alphabet..(a + 1) * self.eve_alphabet].iter().copied().sum())
            .collect();
        Self { party_alphabets: self.party_alphabets.clone(), eve_alphabet: 1, probs }
    }

    /// Same distribution with the parties relabelled: new party `k` is old
    /// party `order[k]`.
    pub fn permute_parties(&self, order: &[usize]) -> Result<Self> {
        let n = self.parties();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidPartition(format!("{order:?} is not a permutation of {n} parties")));
        }
        let new_alph: Vec<usize> = order.iter().map(|&i| self.party_alphabets[i]).collect();
        let mut probs = vec![T::zero(); self.probs.len()];
        for a in 0..self.num_party_outcomes() {
            let d = decode(a, &self.party_alphabets);
            let nd: Vec<usize> = order.iter().map(|&i| d[i]).collect();
            let na = encode(&nd, &new_alph);
            for e in 0..self.eve_alphabet {
                probs[na * self.eve_alphabet + e] = self.probs[a * self.eve_alphabet + e];
            }
        }
        Ok(Self { party_alphabets: new_alph, eve_alphabet: self.eve_alphabet, probs })
    }

    fn radices(&self) -> Vec<usize> {
        let mut r = self.party_alphabets.clone();
        r.push(self.eve_alphabet);
        r
    }

    /// Shannon entropy in bits of the marginal on `vars` (indices into
    /// parties, with `N` meaning Eve). The empty set has entropy 0.
    pub fn entropy(&self, vars: &[usize]) -> Result<T> {
        let radices = self.radices();
        if let Some(&bad) = vars.iter().find(|&&v| v >= radices.len()) {
            return Err(Error::IndexOutOfRange { index: bad, count: radices.len() });
        }
        if vars.is_empty() {
            return Ok(T::zero());
        }
        let sub: Vec<usize> = vars.iter().map(|&v| radices[v]).collect();
        let mut marginal = vec![T::zero(); sub.iter().product()];
        for (idx, &p) in self.probs.iter().enumerate() {
            let d = decode(idx, &radices);
            let key: Vec<usize> = vars.iter().map(|&v| d[v]).collect();
            marginal[encode(&key, &sub)] += p;
        }
        Ok(marginal.into_iter().map(T::plogp).sum())
    }

    /// `I(X:Y|Z)` on variable sets (party indices, `N` for Eve).
    pub fn conditional_mutual_information(&self, x: &[usize], y: &[usize], z: &[usize]) -> Result<T> {
        let xz = [x, z].concat();
        let yz = [y, z].concat();
        let xyz = [x, y, z].concat();
        Ok(self.entropy(&xz)? + self.entropy(&yz)? - self.entropy(z)? - self.entropy(&xyz)?)
    }

    /// CSV with header `a1,…,aN,e,p`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let n = self.parties();
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<String> = (1..=n).map(|i| format!("a{i}")).chain(["e".into(), "p".into()]).collect();
        w.write_record(&header)?;
        let radices = self.radices();
        for (idx, &p) in self.probs.iter().enumerate() {
            let mut row: Vec<String> = decode(idx, &radices).iter().map(usize::to_string).collect();
            row.push(format_sig(p.as_f64(), 15));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV written by [`JointDistribution::write_csv`]; alphabets
    /// are inferred from the largest symbol in each column.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let width = r.headers()?.len();
        if width < 3 {
            return Err(Error::Parse(format!("distribution CSV needs N+2 columns, got {width}")));
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let syms = rec
                .iter()
                .take(width - 1)
                .map(|f| f.trim().parse::<usize>().map_err(|e| Error::Parse(format!("symbol {f:?}: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            let p = rec[width - 1].trim().parse::<f64>().map_err(|e| Error::Parse(format!("probability: {e}")))?;
            rows.push((syms, p));
        }
        let mut radices = vec![1usize; width - 1];
        for (s, _) in &rows {
            for (r, &v) in radices.iter_mut().zip(s) {
                *r = (*r).max(v + 1);
            }
        }
        let mut probs = vec![T::zero(); radices.iter().product()];
        for (s, p) in rows {
            probs[encode(&s, &radices)] = T::lit(p);
        }
        let eve = radices.pop().expect("width >= 3");
        Self::new(radices, eve, probs)
    }
}
