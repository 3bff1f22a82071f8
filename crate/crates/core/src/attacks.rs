//! Convex-combination attack on the three-party parity-CHSH protocol.
//!
//! Eve splits the key-round statistics of the noisy GHZ device into a GHZ
//! part, about which she learns nothing, and a local part whose outputs she
//! knows. Only the key-generating setting is modelled.

use crate::behaviors::{behavior_from_measurement, decode, default_measurements, Behavior, KEY_SETTING};
use crate::error::{Error, Result};
use crate::secrecy::{apply_channel, ClassicalChannel, JointDistribution};
use crate::states::{noisy_ghz3, NoiseParameter};

/// Eve's symbol for "no information".
pub const EVE_UNKNOWN: usize = 0;
/// Size of Eve's alphabet: `?` plus one symbol per output triple.
pub const EVE_ALPHABET: usize = 9;
/// Post-processed symbol `?` (symbols 0 and 1 are key guesses).
pub const GUESS_UNKNOWN: usize = 2;

const OUTPUTS: [usize; 3] = [2, 2, 2];

/// Eve's symbol recording the output triple `(a, b₁, b₂)`.
pub fn eve_symbol(outputs: &[usize]) -> usize {
    1 + (outputs[0] << 2 | outputs[1] << 1 | outputs[2])
}

#[derive(Debug, Clone)]
pub struct CcAttack {
    pub nu: NoiseParameter<f64>,
    pub local_weight: f64,
    /// Key-round behavior of the noiseless GHZ device.
    pub p_ghz: Behavior<f64>,
    /// Key-round behavior of the local component.
    pub p_local: Behavior<f64>,
    /// `P(a, b₁, b₂, e)` over the 9-symbol Eve alphabet.
    pub joint: JointDistribution<f64>,
}

impl CcAttack {
    /// Key-round behavior of the attacked device, i.e. the joint with Eve
    /// traced out.
    pub fn device_behavior(&self) -> Behavior<f64> {
        Behavior::mixture(&[(1.0 - self.local_weight, &self.p_ghz), (self.local_weight, &self.p_local)])
            .expect("same alphabets")
    }
}

fn key_slice(rho: &crate::qmat::DensityMatrix<f64>) -> Behavior<f64> {
    behavior_from_measurement(rho, &default_measurements())
        .and_then(|b| b.slice(&KEY_SETTING))
        .expect("three-qubit state and qubit measurements")
}

/// Key-round behavior of the biseparable remainder `χ_ν`.
pub fn local_behavior_from_chi(nu: NoiseParameter<f64>) -> Behavior<f64> {
    key_slice(&noisy_ghz3(nu).chi)
}

/// Attack with the natural split `local_weight = 1 - (1-ν)³`.
pub fn build_cc_attack(nu: NoiseParameter<f64>) -> CcAttack {
    let dec = noisy_ghz3(nu);
    let p_ghz = key_slice(&dec.ghz);
    let p_local = key_slice(&dec.chi);
    let joint = attack_joint(&p_ghz, &p_local, dec.biseparable_weight);
    CcAttack { nu, local_weight: dec.biseparable_weight, p_ghz, p_local, joint }
}

/// Attack with a caller-chosen local weight `w`. The local part is
/// `(P_ν - (1-w) P_GHZ) / w`, which must be a valid distribution.
pub fn build_cc_attack_with_local_weight(nu: NoiseParameter<f64>, local_weight: f64) -> Result<CcAttack> {
    if !(0.0..=1.0).contains(&local_weight) {
        return Err(Error::OutOfRange(format!("local weight {local_weight} outside [0, 1]")));
    }
    let dec = noisy_ghz3(nu);
    let p_ghz = key_slice(&dec.ghz);
    let p_device = key_slice(&dec.state);
    let p_local = if local_weight == 0.0 {
        let gap: f64 = p_device.conditional(&[0, 0, 0]).unwrap().iter().zip(p_ghz.conditional(&[0, 0, 0]).unwrap())
            .map(|(a, b)| (a - b).abs())
            .sum();
        if gap > 1e-10 {
            return Err(Error::InvalidDistribution(format!("zero local weight but device differs from GHZ by {gap:e}")));
        }
        p_ghz.clone()
    } else {
        let dev = p_device.conditional(&[0, 0, 0]).unwrap();
        let g = p_ghz.conditional(&[0, 0, 0]).unwrap();
        let table: Vec<f64> = dev.iter().zip(g).map(|(d, g)| (d - (1.0 - local_weight) * g) / local_weight).collect();
        Behavior::new(vec![1, 1, 1], OUTPUTS.to_vec(), table).map_err(|e| {
            Error::InvalidDistribution(format!("local weight {local_weight} leaves no valid local part: {e}"))
        })?
    };
    let joint = attack_joint(&p_ghz, &p_local, local_weight);
    Ok(CcAttack { nu, local_weight, p_ghz, p_local, joint })
}

fn attack_joint(p_ghz: &Behavior<f64>, p_local: &Behavior<f64>, local_weight: f64) -> JointDistribution<f64> {
    let g = p_ghz.conditional(&[0, 0, 0]).expect("single-input slice");
    let l = p_local.conditional(&[0, 0, 0]).expect("single-input slice");
    let mut probs = vec![0.0; 8 * EVE_ALPHABET];
    for a in 0..8 {
        let outs = decode(a, &OUTPUTS);
        probs[a * EVE_ALPHABET + EVE_UNKNOWN] = (1.0 - local_weight) * g[a];
        probs[a * EVE_ALPHABET + eve_symbol(&outs)] = local_weight * l[a];
    }
    JointDistribution::new(OUTPUTS.to_vec(), EVE_ALPHABET, probs).expect("mixture of normalized behaviors")
}

/// Eve's guessing map: a recorded all-equal triple becomes the key bit, any
/// other symbol becomes `?`.
pub fn eve_guess_channel() -> ClassicalChannel<f64> {
    let map: Vec<usize> = (0..EVE_ALPHABET)
        .map(|e| {
            if e == EVE_UNKNOWN {
                return GUESS_UNKNOWN;
            }
            let outs = decode(e - 1, &OUTPUTS);
            if outs.iter().all(|&o| o == outs[0]) {
                outs[0]
            } else {
                GUESS_UNKNOWN
            }
        })
        .collect();
    ClassicalChannel::deterministic(&map, 3).expect("symbols below 3")
}

/// The attack joint with Eve's symbol replaced by her guess `F ∈ {0, 1, ?}`.
pub fn eve_postprocess(attack: &CcAttack) -> JointDistribution<f64> {
    apply_channel(&attack.joint, &eve_guess_channel()).expect("channel input matches Eve alphabet")
}
