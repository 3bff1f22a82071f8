use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use dicka::attacks::{build_cc_attack, eve_postprocess, EVE_UNKNOWN};
use dicka::behaviors::{
    behavior_from_measurement, critical_noise, default_measurements, expected_winning_probability,
    max_deterministic_value, parity_chsh_game, parity_chsh_value, GAME_BOB2_INPUT,
};
use dicka::bounds::{
    all_curves, enumerate_partitions, nu_grid, relay_enumerate, relay_simulate, write_curves_csv, BoundCurve,
    CurveSettings,
};
use dicka::checks::{run_suite, Suite};
use dicka::io::format_sig;
use dicka::secrecy::{intrinsic_information, s_n, shannon_cmi, SearchConfig};
use dicka::states::{ghz, NoiseParameter};

use crate::config::RunConfig;
use crate::error::CliError;

const IDENTITY_TOL: f64 = 1e-9;
const NU_CRIT_REFERENCE: f64 = 0.1189;
const NU_CRIT_BAND: f64 = 5e-4;

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn io_err(path: Option<&Path>) -> impl Fn(dicka::Error) -> CliError + '_ {
    move |e| match path {
        Some(p) => CliError::Io(format!("writing {}: {e}", p.display())),
        None => CliError::Io(format!("writing output: {e}")),
    }
}

fn on_off(flag: bool) -> &'static str {
    if flag {
        "on"
    } else {
        "off"
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn curves(cfg: &RunConfig) -> Result<(), CliError> {
    let grid = nu_grid(cfg.nu_min, cfg.nu_max, cfg.nu_step).map_err(|e| CliError::Usage(e.to_string()))?;
    if grid.last().is_some_and(|&nu| nu >= 1.0) {
        return Err(CliError::Usage("curve grids must stay below nu = 1".into()));
    }
    let curves = all_curves(&grid, cfg.minimize, &CurveSettings::default())?;

    // summaries go wherever the CSV does not
    let mut log: Box<dyn Write> = if cfg.out.is_some() { Box::new(io::stdout()) } else { Box::new(io::stderr()) };
    let mut failures = Vec::new();
    for c in &curves {
        let (first, last) = (c.samples()[0], c.samples()[c.samples().len() - 1]);
        writeln!(
            log,
            "curve {} minimize={} points={} value(nu={})={} value(nu={})={}",
            c.name(),
            on_off(cfg.minimize),
            c.samples().len(),
            format_sig(first.0, 6),
            format_sig(first.1, 8),
            format_sig(last.0, 6),
            format_sig(last.1, 8),
        )
        .ok();
        if first.0 == 0.0 && (first.1 - 1.0).abs() > 1e-8 {
            failures.push(format!("{} is {} at nu=0, expected 1", c.name(), first.1));
        }
    }
    report_ordering(&curves, &mut log);

    match &cfg.out {
        Some(path) => {
            let mut w = create(path)?;
            write_curves_csv(&mut w, &curves).map_err(io_err(Some(path)))?;
            w.flush().map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
            writeln!(log, "wrote {} rows to {}", curves.len() * grid.len(), path.display()).ok();
        }
        None => write_curves_csv(io::stdout().lock(), &curves).map_err(io_err(None))?,
    }
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verification(failures.join("; ")))
    }
}

/// Trivial bound above the unminimized intrinsic bound up to the critical
/// noise; violations are reported, not fatal.
fn report_ordering(curves: &[BoundCurve], log: &mut dyn Write) {
    let (Some(intr), Some(triv)) = (
        curves.iter().find(|c| c.name().starts_with("intrinsic_upper")),
        curves.iter().find(|c| c.name() == "trivial_upper"),
    ) else {
        return;
    };
    let crit = critical_noise::<f64>(3).unwrap_or(1.0);
    let violations: Vec<f64> = intr
        .samples()
        .iter()
        .zip(triv.samples())
        .filter(|((nu, y), (_, r))| *nu <= crit && r < y)
        .map(|((nu, _), _)| *nu)
        .collect();
    if violations.is_empty() {
        writeln!(log, "check trivial_upper >= {} up to nu_crit: ok", intr.name()).ok();
    } else {
        writeln!(log, "check trivial_upper >= {} violated at nu = {violations:?}", intr.name()).ok();
    }
}

pub fn verify(cfg: &RunConfig, instances: Option<usize>, corrupt: bool) -> Result<(), CliError> {
    let mut failed = Vec::new();
    println!("verify seed={} tolerance={IDENTITY_TOL:e}", cfg.seed);
    for suite in Suite::ALL {
        let n = instances.unwrap_or(if suite == Suite::Duality { 200 } else { 100 });
        let rep = run_suite(suite, cfg.seed, n, IDENTITY_TOL, corrupt);
        println!(
            "suite {:<14} instances={:<4} max_error={:.3e} {}",
            suite.name(),
            rep.instances,
            rep.max_error,
            pass(rep.passed())
        );
        if !rep.passed() {
            let shown: Vec<String> = rep.failing_seeds.iter().take(20).map(u64::to_string).collect();
            let more = rep.failing_seeds.len().saturating_sub(20);
            println!(
                "  failing seeds: {}{}",
                shown.join(" "),
                if more > 0 { format!(" (+{more} more)") } else { String::new() }
            );
            failed.push(suite.name());
        }
    }
    if failed.is_empty() {
        println!("all suites passed");
        Ok(())
    } else {
        Err(CliError::Verification(format!("suites {}", failed.join(", "))))
    }
}

pub fn game() -> Result<(), CliError> {
    let p0 = expected_winning_probability(0.0f64, 3);
    let tsirelson = 0.5 + 1.0 / (2.0 * std::f64::consts::SQRT_2);
    let measured = behavior_from_measurement(&ghz::<f64>(3, 2)?, &default_measurements())?;
    let measured = parity_chsh_value(&measured, &[GAME_BOB2_INPUT])?;
    let game = parity_chsh_game::<f64>(3, &[GAME_BOB2_INPUT])?;
    let classical = max_deterministic_value(&[2, 3, 2], &[2, 2, 2], &game)?;
    let crit = critical_noise::<f64>(3)?;

    let tsirelson_ok = (measured - tsirelson).abs() < 1e-6 && (p0 - tsirelson).abs() < 1e-12;
    let classical_ok = classical == 0.75;
    let crit_ok = (crit - NU_CRIT_REFERENCE).abs() <= NU_CRIT_BAND;
    println!("p_exp(0) = {p0:.6}");
    println!("classical bound = {:.6} (deterministic strategies: {classical:.6}) {}", 0.75, pass(classical_ok));
    println!(
        "tsirelson check: measured {measured:.6} vs 1/2+1/(2*sqrt(2)) = {tsirelson:.6}, |diff| = {:.1e} {}",
        (measured - tsirelson).abs(),
        pass(tsirelson_ok)
    );
    println!("nu_crit = {crit:.6} (expected {NU_CRIT_REFERENCE} +/- {NU_CRIT_BAND}) {}", pass(crit_ok));
    if tsirelson_ok && classical_ok && crit_ok {
        Ok(())
    } else {
        Err(CliError::Verification("game diagnostics out of tolerance".into()))
    }
}

pub fn attack(cfg: &RunConfig, nu: f64, postprocess: bool) -> Result<(), CliError> {
    let nu = NoiseParameter::new(nu).map_err(|e| CliError::Usage(e.to_string()))?;
    let att = build_cc_attack(nu);
    let post = eve_postprocess(&att);
    println!("nu = {}", format_sig(nu.value(), 8));
    println!("local_weight = {}", format_sig(att.local_weight, 12));
    println!("P(e=?) = {}", format_sig(att.joint.eve_marginal()[EVE_UNKNOWN], 12));
    println!("intrinsic_upper_minimize_off = {}", format_sig(shannon_cmi(&post) / 2.0, 12));
    println!("dual_upper_minimize_off = {}", format_sig(s_n(&post), 12));
    if cfg.minimize {
        let found = intrinsic_information(&att.joint, &SearchConfig::default())?;
        println!(
            "intrinsic_upper_minimize_on = {} (channel search over {} partitions, an upper bound)",
            format_sig(found.value / 2.0, 12),
            found.partitions_searched
        );
    }
    if let Some(path) = &cfg.out {
        let joint = if postprocess { &post } else { &att.joint };
        let mut w = create(path)?;
        joint.write_csv(&mut w).map_err(io_err(Some(path)))?;
        w.flush().map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))?;
        println!("wrote {} joint to {}", if postprocess { "post-processed" } else { "attack" }, path.display());
    }
    Ok(())
}

fn bits(b: &[bool]) -> String {
    b.iter().map(|&x| if x { '1' } else { '0' }).collect()
}

pub fn relay(cfg: &RunConfig, parties: usize, key_len: usize, exhaustive: bool) -> Result<(), CliError> {
    let t = relay_simulate(parties, key_len, cfg.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    println!("relay parties={parties} key_len={key_len} seed={}", cfg.seed);
    for (i, k) in t.edge_keys.iter().enumerate() {
        println!("edge key k{}{} = {}", i + 1, i + 2, bits(k));
    }
    println!("r = {}", bits(&t.r));
    for (i, m) in t.broadcasts.iter().enumerate() {
        println!("broadcast {} (party {}) = {}", i + 1, i + 1, bits(m));
    }
    for (i, o) in t.outputs.iter().enumerate() {
        println!("party {} output = {}", i + 1, bits(o));
    }
    let mut ok = t.all_agree();
    println!("all parties agree: {}", if ok { "yes" } else { "no" });
    if exhaustive {
        let e = relay_enumerate(parties, key_len).map_err(|e| CliError::Usage(e.to_string()))?;
        let exact = e.all_agree && e.transcript_uniform_given_r && e.mutual_information == 0.0;
        println!(
            "exhaustive: branches={} agree={} transcript_uniform_given_r={} I(transcript:r)={} guess_probability={} {}",
            e.branches,
            e.all_agree,
            e.transcript_uniform_given_r,
            e.mutual_information,
            e.guessing_probability,
            pass(exact)
        );
        ok &= exact;
    }
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification("relay did not deliver a common secret".into()))
    }
}

pub fn partitions(parties: usize) -> Result<(), CliError> {
    let all = enumerate_partitions(parties).map_err(|e| CliError::Usage(e.to_string()))?;
    for p in &all {
        let blocks: Vec<String> = p
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|i| format!("A{}", i + 1)).collect::<Vec<_>>().join(",")))
            .collect();
        println!("{}", blocks.join(" | "));
    }
    println!("{} nontrivial partitions of {parties} parties", all.len());
    Ok(())
}
