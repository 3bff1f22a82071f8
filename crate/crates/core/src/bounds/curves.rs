use std::io::Write;

use rayon::prelude::*;

use crate::attacks::{build_cc_attack, eve_postprocess};
use crate::error::{Error, Result};
use crate::io::format_sig;
use crate::secrecy::{dual_intrinsic, intrinsic_information, s_n, shannon_cmi, JointDistribution, SearchConfig};
use crate::states::NoiseParameter;

/// A named bound sampled on an increasing noise grid, values in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    name: String,
    samples: Vec<(f64, f64)>,
}

impl BoundCurve {
    pub fn new(name: impl Into<String>, samples: Vec<(f64, f64)>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || name.contains([',', '\n', '"']) {
            return Err(Error::Parse(format!("curve name {name:?} is not a plain CSV field")));
        }
        if samples.windows(2).any(|w| w[1].0.partial_cmp(&w[0].0) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::OutOfRange(format!("{name}: noise values are not strictly increasing")));
        }
        if let Some(&(nu, v)) = samples.iter().find(|(_, v)| !v.is_finite() || *v < -1e-9) {
            return Err(Error::OutOfRange(format!("{name}: value {v} at nu={nu}")));
        }
        Ok(Self { name, samples })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.1)
    }

    /// Value at the grid point closest to `nu`, if one lies within 1e-12.
    pub fn value_at(&self, nu: f64) -> Option<f64> {
        self.samples.iter().find(|s| (s.0 - nu).abs() < 1e-12).map(|s| s.1)
    }
}

/// Grid `min, min+step, …` up to `max` inclusive (within 1e-9 of a step).
pub fn nu_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if step.is_nan() || step <= 0.0 || !(0.0..1.0).contains(&min) || !(max > min && max <= 1.0) {
        return Err(Error::OutOfRange(format!("grid min={min} max={max} step={step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| min + step * i as f64).collect())
}

/// `0, 0.0025, …, 0.13`.
pub fn default_grid() -> Vec<f64> {
    nu_grid(0.0, 0.13, 0.0025).expect("valid default grid")
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSettings {
    pub n_parties: usize,
    pub search: SearchConfig,
}

impl Default for CurveSettings {
    fn default() -> Self {
        Self { n_parties: 3, search: SearchConfig::default() }
    }
}

fn flag(minimize: bool) -> &'static str {
    if minimize {
        "on"
    } else {
        "off"
    }
}

fn check_grid(grid: &[f64], settings: &CurveSettings) -> Result<()> {
    if settings.n_parties != 3 {
        return Err(Error::Unsupported(format!(
            "the attack decomposition is only available for 3 parties, not {}",
            settings.n_parties
        )));
    }
    if let Some(nu) = grid.iter().find(|nu| !(0.0..1.0).contains(*nu)) {
        return Err(Error::OutOfRange(format!("grid point {nu} outside [0, 1)")));
    }
    Ok(())
}

fn evaluate(grid: &[f64], f: impl Fn(f64) -> Result<f64> + Sync) -> Result<Vec<(f64, f64)>> {
    grid.par_iter().map(|&nu| f(nu).map(|v| (nu, v))).collect()
}

fn attack_joint(nu: f64) -> JointDistribution<f64> {
    build_cc_attack(NoiseParameter::new(nu).expect("grid checked")).joint
}

pub fn intrinsic_bound_curve(grid: &[f64], minimize: bool) -> Result<BoundCurve> {
    intrinsic_bound_curve_with(grid, minimize, &CurveSettings::default())
}

/// `I(A₁:…:A_N ↓ E) / (N-1)` on the attack statistics. Without minimization
/// Eve's guessing map is the only channel; with it the channel search runs
/// on the 9-symbol attack joint and the result is still an upper bound.
pub fn intrinsic_bound_curve_with(grid: &[f64], minimize: bool, settings: &CurveSettings) -> Result<BoundCurve> {
    check_grid(grid, settings)?;
    let scale = 1.0 / (settings.n_parties - 1) as f64;
    let samples = evaluate(grid, |nu| {
        let att = build_cc_attack(NoiseParameter::new(nu)?);
        Ok(scale
            * if minimize {
                intrinsic_information(&att.joint, &settings.search)?.value
            } else {
                shannon_cmi(&eve_postprocess(&att))
            })
    })?;
    BoundCurve::new(format!("intrinsic_upper_minimize_{}", flag(minimize)), samples)
}

pub fn dual_bound_curve(grid: &[f64], minimize: bool) -> Result<BoundCurve> {
    dual_bound_curve_with(grid, minimize, &CurveSettings::default())
}

/// `S_N ↓ E` on the attack statistics, no prefactor.
pub fn dual_bound_curve_with(grid: &[f64], minimize: bool, settings: &CurveSettings) -> Result<BoundCurve> {
    check_grid(grid, settings)?;
    let samples = evaluate(grid, |nu| {
        let att = build_cc_attack(NoiseParameter::new(nu)?);
        Ok(if minimize { dual_intrinsic(&att.joint, &settings.search)?.value } else { s_n(&eve_postprocess(&att)) })
    })?;
    BoundCurve::new(format!("dual_upper_minimize_{}", flag(minimize)), samples)
}

/// `1 - ν`: weight of the undepolarized part of a single qubit times `log 2`.
pub fn trivial_bound_curve(grid: &[f64]) -> Result<BoundCurve> {
    BoundCurve::new("trivial_upper", grid.iter().map(|&nu| (nu, 1.0 - nu)).collect())
}

/// One-way rate `max(0, H(A|E) - max_i H(A|B_i))` on the attack joint.
/// This is a stand-in, not a proven lower bound for the protocol.
pub fn dw_lower_proxy_curve(grid: &[f64]) -> Result<BoundCurve> {
    check_grid(grid, &CurveSettings::default())?;
    let samples = evaluate(grid, |nu| Ok(dw_proxy(&attack_joint(nu))))?;
    BoundCurve::new("dw_lower_PROXY", samples)
}

pub(crate) fn dw_proxy(p: &JointDistribution<f64>) -> f64 {
    let eve = p.parties();
    let h = |vars: &[usize]| p.entropy(vars).expect("valid variables");
    let a_given_e = h(&[0, eve]) - h(&[eve]);
    let worst_bob = (1..p.parties()).map(|b| h(&[0, b]) - h(&[b])).fold(0.0, f64::max);
    (a_given_e - worst_bob).max(0.0)
}

/// All four curves in output order: intrinsic, dual, trivial, proxy.
pub fn all_curves(grid: &[f64], minimize: bool, settings: &CurveSettings) -> Result<Vec<BoundCurve>> {
    Ok(vec![
        intrinsic_bound_curve_with(grid, minimize, settings)?,
        dual_bound_curve_with(grid, minimize, settings)?,
        trivial_bound_curve(grid)?,
        dw_lower_proxy_curve(grid)?,
    ])
}

/// CSV with header `nu,value,name`, 12 significant digits.
pub fn write_curves_csv<W: Write>(mut w: W, curves: &[BoundCurve]) -> Result<()> {
    writeln!(w, "nu,value,name")?;
    for c in curves {
        for &(nu, v) in c.samples() {
            writeln!(w, "{},{},{}", format_sig(nu, 12), format_sig(v, 12), c.name())?;
        }
    }
    Ok(())
}
