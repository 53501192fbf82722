//! Subcommand bodies. Each writes its files under the output directory and
//! returns a short summary for the terminal.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use spinchain::compiler::{compile_program, cnot_sweep, parse_gate_list};
use spinchain::shor::{run_shor_on, TARGETS};
use spinchain::spectrum::assign_labels_with;
use spinchain::{build_hamiltonian, diagonalize, ChainConfig, Device, Error, Label, TransitionTable};

use crate::config::ExperimentConfig;
use crate::error::CliError;

/// Couplings below this magnitude are treated as forbidden.
const COUPLING_FLOOR: f64 = 1e-12;

fn prepare(cfg: &ExperimentConfig) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.out).map_err(CliError::io(&cfg.out))?;
    write_text(&cfg.out.join("config.txt"), &cfg.to_string())?;
    Ok(cfg.out.clone())
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(CliError::io(path))
}

fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    w.flush().map_err(CliError::io(path))
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

/// Eigenvalues, transitions and reachability from the ground state.
///
/// When the levels cannot be labeled (for instance in a uniform field) the
/// eigenstates are listed by energy index and transitions refer to `e<n>`.
pub fn spectrum(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let chain = cfg.chain()?;
    let scale = cfg.scale()?;
    let out = prepare(cfg)?;
    let spec = diagonalize(&build_hamiltonian(&chain)?)?;
    let labeled = match assign_labels_with(&spec, cfg.strategy) {
        Ok(l) => Some(l),
        Err(e @ Error::LabelAmbiguous { .. }) => {
            log::warn!("levels left unlabeled: {e}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let spins = chain.spins();
    let mut levels = Vec::with_capacity(spec.dim());
    let mut transitions = Vec::new();
    let mut report = String::new();
    match &labeled {
        Some(l) => {
            for n in 0..spec.dim() {
                let label = l.label_of(n);
                levels.push(vec![
                    n.to_string(),
                    label.binary(spins),
                    num(spec.energies()[n] / scale),
                    num(spec.m_values()[n]),
                    num(l.overlap_quality(label)),
                ]);
            }
            for t in TransitionTable::new(l, chain.rabi()).entries() {
                transitions.push(vec![
                    t.from.binary(spins),
                    t.to.binary(spins),
                    num(t.frequency / scale),
                    num(t.effective_rabi / scale),
                ]);
            }
            let reach = l.reachable_labels(Label(0));
            let names: Vec<String> = reach.iter().map(|x| x.binary(spins)).collect();
            writeln!(report, "reachable from ground: {} of {} levels", reach.len(), spec.dim()).unwrap();
            writeln!(report, "levels: {}", names.join(" ")).unwrap();
            if spins == 2 {
                let e = |n| l.energy(Label(n));
                writeln!(report, "E1-E0 = {:?}", (e(1) - e(0)) / scale).unwrap();
                writeln!(report, "E3-E2 = {:?}", (e(3) - e(2)) / scale).unwrap();
                writeln!(
                    report,
                    "(E1-E0)-(E3-E2)-2J = {:?} (sum rule; the frequently quoted E1-E0 = 99.98 at J=1, dw=50 violates it)",
                    ((e(1) - e(0)) - (e(3) - e(2)) - 2.0 * chain.coupling()) / scale
                )
                .unwrap();
            }
        }
        None => {
            for n in 0..spec.dim() {
                levels.push(vec![
                    n.to_string(),
                    String::new(),
                    num(spec.energies()[n] / scale),
                    num(spec.m_values()[n]),
                    String::new(),
                ]);
            }
            for upper in 0..spec.dim() {
                for lower in 0..spec.dim() {
                    let g = spec.lowering_element(lower, upper);
                    if g.norm() > COUPLING_FLOOR && spec.m_values()[upper] - spec.m_values()[lower] > 0.5 {
                        transitions.push(vec![
                            format!("e{upper}"),
                            format!("e{lower}"),
                            num((spec.energies()[lower] - spec.energies()[upper]) / scale),
                            num(chain.rabi() * g.norm() / scale),
                        ]);
                    }
                }
            }
            let reach = spec.reachable_levels(0);
            let names: Vec<String> = reach.iter().map(|n| format!("e{n}")).collect();
            writeln!(report, "reachable from ground: {} of {} levels", reach.len(), spec.dim()).unwrap();
            writeln!(report, "levels: {}", names.join(" ")).unwrap();
        }
    }
    write_csv(&out.join("spectrum.csv"), &["index", "label", "energy", "m", "overlap_quality"], &levels)?;
    write_csv(
        &out.join("transitions.csv"),
        &["from_label", "to_label", "frequency", "effective_rabi"],
        &transitions,
    )?;
    write_text(&out.join("report.txt"), &report)?;
    Ok(report)
}

/// CNOT π-pulse from `(|00> + |10>)/√2` over `δω × Ω`.
pub fn cnot_sweep_cmd(cfg: &ExperimentConfig) -> Result<String, CliError> {
    if cfg.spins != 2 {
        return Err(CliError::Config(format!("cnot-sweep needs 2 spins, got {}", cfg.spins)));
    }
    let scale = cfg.scale()?;
    let template = ChainConfig::two_spin(cfg.coupling, cfg.omega0, cfg.delta_omegas[0], cfg.rabi)?;
    let out = prepare(cfg)?;
    let rabis = cfg.rabi_grid.points();
    let rows = cnot_sweep(&template, &rabis, &cfg.delta_omegas, cfg.engine)?;
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![num(r.delta_omega / scale), num(r.rabi / scale)];
            v.extend(r.probabilities.iter().map(|p| num(*p)));
            v
        })
        .collect();
    write_csv(
        &out.join("cnot_sweep.csv"),
        &["delta_omega", "rabi", "p00", "p01", "p10", "p11"],
        &table,
    )?;
    let mut summary = format!("{} rows ({} engine)\n", rows.len(), cfg.engine);
    for &d in &cfg.delta_omegas {
        let leak = rows
            .iter()
            .filter(|r| r.delta_omega == d)
            .map(|r| r.leakage())
            .fold(0.0, f64::max);
        writeln!(summary, "delta_omega = {:?}: max p01+p10 = {leak:?}", d / scale).unwrap();
    }
    Ok(summary)
}

/// The order-finding program on four spins.
pub fn shor(cfg: &ExperimentConfig) -> Result<String, CliError> {
    let device = Device::new(cfg.chain()?, cfg.strategy)?;
    let out = prepare(cfg)?;
    let (program, report) = run_shor_on(&device, cfg.engine)?;
    let rows: Vec<Vec<String>> = report
        .probabilities
        .iter()
        .zip(&report.ideal_probabilities)
        .enumerate()
        .map(|(n, (p, q))| vec![n.to_string(), num(*p), num(*q)])
        .collect();
    write_csv(&out.join("shor.csv"), &["state_label", "probability", "ideal_probability"], &rows)?;
    write_text(&out.join("pulses.txt"), &program.sequence().to_string())?;
    let mut summary = String::new();
    writeln!(summary, "engine = {}", report.engine).unwrap();
    writeln!(summary, "pulses = {} ({} + {} + {})", report.pulses, program.stage1.len(), program.stage2.len(), program.stage3.len()).unwrap();
    writeln!(summary, "targets = {}", TARGETS.map(|n| n.to_string()).join(",")).unwrap();
    writeln!(summary, "max_target_deviation = {:?}", report.max_target_deviation).unwrap();
    writeln!(summary, "max_unwanted = {:?}", report.max_unwanted).unwrap();
    writeln!(summary, "unwanted_sum = {:?}", report.unwanted_sum).unwrap();
    writeln!(summary, "max_norm_drift = {:?}", report.max_norm_drift).unwrap();
    write_text(&out.join("summary.txt"), &summary)?;
    Ok(summary)
}

/// Gate list to pulse schedule.
pub fn compile(cfg: &ExperimentConfig, gates: &Path) -> Result<String, CliError> {
    let text = fs::read_to_string(gates).map_err(CliError::io(gates))?;
    let intents = parse_gate_list(&text)?;
    let device = Device::new(cfg.chain()?, cfg.strategy)?;
    let seq = compile_program(device.spectrum(), device.table(), &intents, cfg.rabi)?;
    let out = prepare(cfg)?;
    write_text(&out.join("pulses.txt"), &seq.to_string())?;
    Ok(format!("{} gates -> {} pulses, total duration {:?}\n", intents.len(), seq.len(), seq.total_duration()))
}
