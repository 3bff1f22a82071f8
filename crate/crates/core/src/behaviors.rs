//! Multi-party behaviors `p(a|x)`, their distances, and the parity-CHSH game.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::io::format_sig;
use crate::qmat::{pauli, ComplexMatrix, DensityMatrix, Povm};
use crate::scalar::Real;

/// Inputs `(x, y₁, y₂)` of the key-generating round.
pub const KEY_SETTING: [usize; 3] = [0, 2, 0];
/// Fixed input of Bob₂ in parity-CHSH rounds.
pub const GAME_BOB2_INPUT: usize = 1;

pub(crate) fn decode(mut idx: usize, radices: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; radices.len()];
    for i in (0..radices.len()).rev() {
        digits[i] = idx % radices[i];
        idx /= radices[i];
    }
    digits
}

pub(crate) fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits.iter().zip(radices).fold(0, |acc, (&d, &r)| acc * r + d)
}

/// Conditional distribution over joint outputs for every joint input.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior<T: Real = f64> {
    input_alphabets: Vec<usize>,
    output_alphabets: Vec<usize>,
    table: Vec<T>,
}

impl<T: Real> Behavior<T> {
    /// `table[input_index * n_outputs + output_index]`, both indices mixed
    /// radix with party 0 most significant.
    pub fn new(input_alphabets: Vec<usize>, output_alphabets: Vec<usize>, mut table: Vec<T>) -> Result<Self> {
        if input_alphabets.is_empty() || input_alphabets.len() != output_alphabets.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} input alphabets vs {} output alphabets",
                input_alphabets.len(),
                output_alphabets.len()
            )));
        }
        if input_alphabets.iter().chain(&output_alphabets).any(|&s| s == 0) {
            return Err(Error::AlphabetMismatch("empty alphabet".into()));
        }
        let n_in: usize = input_alphabets.iter().product();
        let n_out: usize = output_alphabets.iter().product();
        if table.len() != n_in * n_out {
            return Err(Error::DimensionMismatch(format!("table has {} entries, expected {}", table.len(), n_in * n_out)));
        }
        let window = T::lit(T::PROB_CLAMP);
        for p in table.iter_mut() {
            if !p.is_finite() || *p < -window || *p > T::one() + window {
                return Err(Error::InvalidDistribution(format!("probability {p} out of range")));
            }
            *p = p.max(T::zero()).min(T::one());
        }
        for x in 0..n_in {
            let s: T = table[x * n_out..(x + 1) * n_out].iter().copied().sum();
            if (s - T::one()).abs() > T::lit(T::NORM_TOL) {
                return Err(Error::InvalidDistribution(format!(
                    "conditional for inputs {:?} sums to {s}",
                    decode(x, &input_alphabets)
                )));
            }
        }
        Ok(Self { input_alphabets, output_alphabets, table })
    }

    pub fn from_fn(
        input_alphabets: Vec<usize>,
        output_alphabets: Vec<usize>,
        mut f: impl FnMut(&[usize], &[usize]) -> T,
    ) -> Result<Self> {
        let n_in: usize = input_alphabets.iter().product();
        let n_out: usize = output_alphabets.iter().product();
        let mut table = Vec::with_capacity(n_in * n_out);
        for x in 0..n_in {
            let xs = decode(x, &input_alphabets);
            for a in 0..n_out {
                table.push(f(&xs, &decode(a, &output_alphabets)));
            }
        }
        Self::new(input_alphabets, output_alphabets, table)
    }

    pub fn uniform(input_alphabets: Vec<usize>, output_alphabets: Vec<usize>) -> Self {
        let n_out: usize = output_alphabets.iter().product();
        let w = T::one() / T::lit(n_out as f64);
        Self::from_fn(input_alphabets, output_alphabets, |_, _| w).expect("uniform is normalized")
    }

    /// Local deterministic behavior; `responses[i][x_i]` is party `i`'s output.
    pub fn deterministic(
        input_alphabets: Vec<usize>,
        output_alphabets: Vec<usize>,
        responses: &[Vec<usize>],
    ) -> Result<Self> {
        if responses.len() != input_alphabets.len()
            || responses.iter().zip(&input_alphabets).any(|(r, &k)| r.len() != k)
            || responses.iter().zip(&output_alphabets).any(|(r, &m)| r.iter().any(|&o| o >= m))
        {
            return Err(Error::AlphabetMismatch("response table does not fit the alphabets".into()));
        }
        Self::from_fn(input_alphabets, output_alphabets, |x, a| {
            if x.iter().enumerate().all(|(i, &xi)| responses[i][xi] == a[i]) {
                T::one()
            } else {
                T::zero()
            }
        })
    }

    /// Convex combination of behaviors with identical alphabets.
    pub fn mixture(terms: &[(T, &Behavior<T>)]) -> Result<Self> {
        let first = terms.first().ok_or_else(|| Error::InvalidDistribution("empty mixture".into()))?.1;
        let mut table = vec![T::zero(); first.table.len()];
        for (w, b) in terms {
            first.check_same_alphabets(b)?;
            for (t, p) in table.iter_mut().zip(&b.table) {
                *t += *w * *p;
            }
        }
        Self::new(first.input_alphabets.clone(), first.output_alphabets.clone(), table)
    }

    pub fn parties(&self) -> usize {
        self.input_alphabets.len()
    }

    pub fn input_alphabets(&self) -> &[usize] {
        &self.input_alphabets
    }

    pub fn output_alphabets(&self) -> &[usize] {
        &self.output_alphabets
    }

    pub fn num_joint_inputs(&self) -> usize {
        self.input_alphabets.iter().product()
    }

    pub fn num_joint_outputs(&self) -> usize {
        self.output_alphabets.iter().product()
    }

    fn input_index(&self, x: &[usize]) -> Result<usize> {
        if x.len() != self.parties() || x.iter().zip(&self.input_alphabets).any(|(&xi, &k)| xi >= k) {
            return Err(Error::AlphabetMismatch(format!("inputs {x:?} do not fit {:?}", self.input_alphabets)));
        }
        Ok(encode(x, &self.input_alphabets))
    }

    /// `p(·|x)` as a slice indexed by joint output.
    pub fn conditional(&self, x: &[usize]) -> Result<&[T]> {
        let n_out = self.num_joint_outputs();
        let i = self.input_index(x)?;
        Ok(&self.table[i * n_out..(i + 1) * n_out])
    }

    pub fn prob(&self, x: &[usize], a: &[usize]) -> Result<T> {
        if a.len() != self.parties() || a.iter().zip(&self.output_alphabets).any(|(&ai, &m)| ai >= m) {
            return Err(Error::AlphabetMismatch(format!("outputs {a:?} do not fit {:?}", self.output_alphabets)));
        }
        Ok(self.conditional(x)?[encode(a, &self.output_alphabets)])
    }

    /// The behavior restricted to one joint input, as a single-input behavior.
    pub fn slice(&self, x: &[usize]) -> Result<Self> {
        let table = self.conditional(x)?.to_vec();
        Ok(Self { input_alphabets: vec![1; self.parties()], output_alphabets: self.output_alphabets.clone(), table })
    }

    /// Marginal of the parties in `subset` (sorted ascending) at joint input `x`.
    pub fn marginal(&self, x: &[usize], subset: &[usize]) -> Result<Vec<T>> {
        let radices: Vec<usize> = subset.iter().map(|&i| self.output_alphabets[i]).collect();
        let mut out = vec![T::zero(); radices.iter().product()];
        for (a, &p) in self.conditional(x)?.iter().enumerate() {
            let digits = decode(a, &self.output_alphabets);
            let sub: Vec<usize> = subset.iter().map(|&i| digits[i]).collect();
            out[encode(&sub, &radices)] += p;
        }
        Ok(out)
    }

    fn check_same_alphabets(&self, other: &Self) -> Result<()> {
        if self.input_alphabets != other.input_alphabets || self.output_alphabets != other.output_alphabets {
            return Err(Error::AlphabetMismatch(format!(
                "inputs {:?}/{:?}, outputs {:?}/{:?}",
                self.input_alphabets, other.input_alphabets, self.output_alphabets, other.output_alphabets
            )));
        }
        Ok(())
    }

    /// CSV with header `x1,…,xN,a1,…,aN,p`, one row per table entry.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let n = self.parties();
        let mut w = csv::Writer::from_writer(writer);
        let header: Vec<String> =
            (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("a{i}"))).chain(["p".into()]).collect();
        w.write_record(&header)?;
        let n_out = self.num_joint_outputs();
        for (k, &p) in self.table.iter().enumerate() {
            let mut row: Vec<String> = decode(k / n_out, &self.input_alphabets).iter().map(usize::to_string).collect();
            row.extend(decode(k % n_out, &self.output_alphabets).iter().map(usize::to_string));
            row.push(format_sig(p.as_f64(), 15));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV written by [`Behavior::write_csv`]; alphabets are the
    /// largest symbol seen plus one, and missing rows are zero.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let width = r.headers()?.len();
        if width < 3 || width % 2 == 0 {
            return Err(Error::Parse(format!("behavior CSV needs 2N+1 columns, got {width}")));
        }
        let n = (width - 1) / 2;
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            let mut syms = Vec::with_capacity(2 * n);
            for f in rec.iter().take(2 * n) {
                syms.push(f.trim().parse::<usize>().map_err(|e| Error::Parse(format!("symbol {f:?}: {e}")))?);
            }
            let p = rec[2 * n].trim().parse::<f64>().map_err(|e| Error::Parse(format!("probability: {e}")))?;
            rows.push((syms, p));
        }
        let mut alph = vec![1usize; 2 * n];
        for (syms, _) in &rows {
            for (a, &s) in alph.iter_mut().zip(syms) {
                *a = (*a).max(s + 1);
            }
        }
        let (ins, outs) = (alph[..n].to_vec(), alph[n..].to_vec());
        let n_out: usize = outs.iter().product();
        let mut table = vec![T::zero(); ins.iter().product::<usize>() * n_out];
        for (syms, p) in rows {
            table[encode(&syms[..n], &ins) * n_out + encode(&syms[n..], &outs)] = T::lit(p);
        }
        Self::new(ins, outs, table)
    }
}

/// Born-rule behavior `p(a|x) = Tr[(⊗_i M^{x_i}_{a_i}) ρ]`, one factor per party.
pub fn behavior_from_measurement<T: Real>(rho: &DensityMatrix<T>, povms: &[Vec<Povm<T>>]) -> Result<Behavior<T>> {
    if povms.len() != rho.num_subsystems() {
        return Err(Error::DimensionMismatch(format!(
            "{} parties measured on a state with {} factors",
            povms.len(),
            rho.num_subsystems()
        )));
    }
    let mut outputs = Vec::with_capacity(povms.len());
    for (i, party) in povms.iter().enumerate() {
        let first = party.first().ok_or_else(|| Error::InvalidMeasurement(format!("party {i} has no inputs")))?;
        if party.iter().any(|m| m.dim() != rho.dims()[i]) {
            return Err(Error::DimensionMismatch(format!("party {i} POVM dimension differs from factor {}", rho.dims()[i])));
        }
        if party.iter().any(|m| m.num_outcomes() != first.num_outcomes()) {
            return Err(Error::InvalidMeasurement(format!("party {i} inputs have differing outcome counts")));
        }
        outputs.push(first.num_outcomes());
    }
    let inputs: Vec<usize> = povms.iter().map(Vec::len).collect();
    Behavior::from_fn(inputs, outputs, |x, a| {
        let mut op = ComplexMatrix::identity(1);
        for (i, (&xi, &ai)) in x.iter().zip(a).enumerate() {
            op = op.kron(&povms[i][xi].effects()[ai]);
        }
        op.trace_product(rho.matrix()).expect("matching dimensions").re
    })
}

/// `max_x ‖p(·|x) - q(·|x)‖₁`.
pub fn behavior_distance<T: Real>(p: &Behavior<T>, q: &Behavior<T>) -> Result<T> {
    p.check_same_alphabets(q)?;
    let n_out = p.num_joint_outputs();
    Ok(p.table
        .chunks(n_out)
        .zip(q.table.chunks(n_out))
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum::<T>())
        .fold(T::zero(), T::max))
}

/// True when, for every proper subset of parties, the marginal output
/// distribution does not depend on the inputs of the parties outside it.
pub fn is_nonsignaling<T: Real>(p: &Behavior<T>, tol: T) -> bool {
    let n = p.parties();
    let n_in = p.num_joint_inputs();
    for mask in 1u32..((1u32 << n) - 1) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let sub_inputs: Vec<usize> = subset.iter().map(|&i| p.input_alphabets[i]).collect();
        let mut reference: Vec<Option<Vec<T>>> = vec![None; sub_inputs.iter().product()];
        for xi in 0..n_in {
            let x = decode(xi, &p.input_alphabets);
            let key = encode(&subset.iter().map(|&i| x[i]).collect::<Vec<_>>(), &sub_inputs);
            let m = p.marginal(&x, &subset).expect("valid inputs");
            match &reference[key] {
                None => reference[key] = Some(m),
                Some(r) => {
                    if r.iter().zip(&m).any(|(a, b)| (*a - *b).abs() > tol) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

type Predicate = dyn Fn(&[usize], &[usize]) -> bool + Send + Sync;

/// A nonlocal game: a distribution over joint inputs and a win predicate
/// `(inputs, outputs) -> bool`.
pub struct GameSpec<T: Real = f64> {
    input_distribution: Vec<(Vec<usize>, T)>,
    predicate: Box<Predicate>,
}

impl<T: Real> GameSpec<T> {
    pub fn new(
        input_distribution: Vec<(Vec<usize>, T)>,
        predicate: impl Fn(&[usize], &[usize]) -> bool + Send + Sync + 'static,
    ) -> Result<Self> {
        let total: T = input_distribution.iter().map(|(_, w)| *w).sum();
        if (total - T::one()).abs() > T::lit(1e-12).max(T::epsilon() * T::lit(8.0))
            || input_distribution.iter().any(|(_, w)| *w < T::zero())
        {
            return Err(Error::InvalidDistribution(format!("input distribution sums to {total}")));
        }
        Ok(Self { input_distribution, predicate: Box::new(predicate) })
    }

    pub fn input_distribution(&self) -> &[(Vec<usize>, T)] {
        &self.input_distribution
    }

    pub fn wins(&self, inputs: &[usize], outputs: &[usize]) -> bool {
        (self.predicate)(inputs, outputs)
    }

    pub fn value(&self, p: &Behavior<T>) -> Result<T> {
        let mut total = T::zero();
        for (x, w) in &self.input_distribution {
            let cond = p.conditional(x)?;
            for (ai, &prob) in cond.iter().enumerate() {
                if self.wins(x, &decode(ai, &p.output_alphabets)) {
                    total += *w * prob;
                }
            }
        }
        Ok(total)
    }
}

/// Parity-CHSH: Alice and Bob₁ get uniform bits `x, y`; Bob_i (i ≥ 2) gets
/// `fixed_inputs[i-2]`; the players win iff `a ⊕ b₁ = x·(y ⊕ b̄)` where `b̄`
/// is the parity of the other Bobs' outputs.
pub fn parity_chsh_game<T: Real>(n_parties: usize, fixed_inputs: &[usize]) -> Result<GameSpec<T>> {
    if n_parties < 2 || fixed_inputs.len() != n_parties - 2 {
        return Err(Error::AlphabetMismatch(format!(
            "{n_parties} parties need {} fixed inputs, got {}",
            n_parties.saturating_sub(2),
            fixed_inputs.len()
        )));
    }
    let quarter = T::lit(0.25);
    let dist = (0..4)
        .map(|k| {
            let mut x = vec![k >> 1, k & 1];
            x.extend_from_slice(fixed_inputs);
            (x, quarter)
        })
        .collect();
    GameSpec::new(dist, |x, a| {
        let parity = a[2..].iter().fold(0, |acc, &b| acc ^ b);
        (a[0] ^ a[1]) == (x[0] & (x[1] ^ parity))
    })
}

pub fn parity_chsh_value<T: Real>(p: &Behavior<T>, fixed_inputs: &[usize]) -> Result<T> {
    if p.output_alphabets.iter().any(|&m| m != 2) {
        return Err(Error::AlphabetMismatch(format!("parity-CHSH needs binary outputs, got {:?}", p.output_alphabets)));
    }
    if p.parties() < 2 || p.input_alphabets[0] < 2 || p.input_alphabets[1] < 2 {
        return Err(Error::AlphabetMismatch("Alice and Bob1 need at least two inputs".into()));
    }
    parity_chsh_game(p.parties(), fixed_inputs)?.value(p)
}

/// Largest game value over every local deterministic behavior with the given
/// alphabets.
pub fn max_deterministic_value<T: Real>(
    input_alphabets: &[usize],
    output_alphabets: &[usize],
    game: &GameSpec<T>,
) -> Result<T> {
    // party i has output_alphabets[i]^input_alphabets[i] response functions
    let counts: Vec<usize> =
        input_alphabets.iter().zip(output_alphabets).map(|(&k, &m)| m.pow(k as u32)).collect();
    let total: usize = counts.iter().product();
    let mut best = T::neg_infinity();
    for s in 0..total {
        let choice = decode(s, &counts);
        let responses: Vec<Vec<usize>> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| decode(c, &vec![output_alphabets[i]; input_alphabets[i]]))
            .collect();
        let b = Behavior::deterministic(input_alphabets.to_vec(), output_alphabets.to_vec(), &responses)?;
        best = best.max(game.value(&b)?);
    }
    Ok(best)
}

/// `1/2 + (1-ν)^N/(2√2) + (1-ν)²(1-(1-ν)^{N-2})/(8√2)`.
pub fn expected_winning_probability<T: Real>(nu: T, n_parties: usize) -> T {
    let keep = T::one() - nu;
    let s2 = T::SQRT_2();
    let half = T::lit(0.5);
    half + keep.powi(n_parties as i32) / (T::lit(2.0) * s2)
        + keep * keep * (T::one() - keep.powi(n_parties as i32 - 2)) / (T::lit(8.0) * s2)
}

/// Noise at which the expected winning probability drops to the classical
/// bound 3/4, by bisection on `(0, 1)`.
pub fn critical_noise<T: Real>(n_parties: usize) -> Result<T> {
    if n_parties < 3 {
        return Err(Error::OutOfRange(format!("critical noise needs N >= 3, got {n_parties}")));
    }
    let target = T::lit(0.75);
    let f = |nu: T| expected_winning_probability(nu, n_parties) - target;
    let (mut lo, mut hi) = (T::zero(), T::one());
    if f(lo) <= T::zero() || f(hi) >= T::zero() {
        return Err(Error::NoRoot(format!("p_exp - 3/4 does not change sign on (0,1) for N={n_parties}")));
    }
    let tol = T::lit(1e-12).max(T::epsilon());
    for _ in 0..200 {
        let mid = (lo + hi) * T::lit(0.5);
        if f(mid) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    Ok((lo + hi) * T::lit(0.5))
}

/// Largest disagreement probability `P(a ≠ b_i | key_inputs)` over the Bobs.
pub fn qber<T: Real>(p: &Behavior<T>, key_inputs: &[usize]) -> Result<T> {
    let cond = p.conditional(key_inputs)?;
    let mut worst = T::zero();
    for bob in 1..p.parties() {
        let err: T = cond
            .iter()
            .enumerate()
            .filter(|(a, _)| {
                let d = decode(*a, &p.output_alphabets);
                d[0] != d[bob]
            })
            .map(|(_, &q)| q)
            .sum();
        worst = worst.max(err);
    }
    Ok(worst)
}

/// Observable angles in the x–z plane (`cos θ σ_z + sin θ σ_x`) of the honest
/// measurement set: Alice `[σ_z, σ_x]`, Bob₁ `[(σ_z+σ_x)/√2, (σ_z-σ_x)/√2, σ_z]`,
/// Bob₂ `[σ_z, σ_x]`.
pub fn default_measurement_angles<T: Real>() -> Vec<Vec<T>> {
    let q = T::FRAC_PI_4();
    let h = T::FRAC_PI_2();
    vec![vec![T::zero(), h], vec![q, -q, T::zero()], vec![T::zero(), h]]
}

pub fn measurements_from_angles<T: Real>(angles: &[Vec<T>]) -> Result<Vec<Vec<Povm<T>>>> {
    angles
        .iter()
        .map(|party| party.iter().map(|&t| Povm::from_observable(&pauli::xz_plane(t))).collect())
        .collect()
}

pub fn default_measurements<T: Real>() -> Vec<Vec<Povm<T>>> {
    measurements_from_angles(&default_measurement_angles()).expect("qubit observables")
}
