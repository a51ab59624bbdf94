//! Experiment dispatch.

use freqwalk_core::band::{band_grid, eigen_spinor, Branch};
use freqwalk_core::baselines::{classical_walk_distribution, dtqw_diffusion};
use freqwalk_core::gates::{
    gate_half_width, gate_matrix_analytic, gate_spec, prepare_state_sequence, reconstruct_matrix, run_preparation, sequence_matrix,
    solve_modulation, state_fidelity, GateName, QubitState,
};
use freqwalk_core::two_qubit::{reconstruct_4x4, TwoQubitGate};
use freqwalk_core::{evolve, Engine, LatticeConfig, LatticeState, ModulationParams, Polarization, Record, Schedule, WavepacketSpec};
use serde_json::{json, Map, Value};

use crate::config::{Experiment, RunConfig};
use crate::emit::{matrix_json, vector_json, Body, Cell, Dataset};
use crate::error::Result;

/// Execute the experiment described by `cfg`.
pub fn run(cfg: &RunConfig) -> Result<Dataset> {
    let body = match cfg.experiment {
        Experiment::Band => band(cfg)?,
        Experiment::Evolve => evolve_rows(cfg)?,
        Experiment::Diffusion => diffusion(cfg)?,
        Experiment::Gate => gate(cfg)?,
        Experiment::Prepare => prepare(cfg)?,
        Experiment::Cnot => cnot(cfg)?,
    };
    if let Body::Table { rows, .. } = &body {
        log::info!("{}: {} rows", cfg.experiment, rows.len());
    }
    Ok(Dataset { config: cfg.clone(), body })
}

// Fields below are guaranteed by `RunConfig::resolve` for the experiment.

fn walk_params(cfg: &RunConfig, gamma: f64) -> Result<ModulationParams> {
    Ok(ModulationParams::new(gamma, cfg.phi_h.unwrap(), cfg.phi_v.unwrap(), cfg.theta.unwrap())?)
}

fn engine(cfg: &RunConfig) -> Engine {
    cfg.engine.expect("resolved").into()
}

fn band(cfg: &RunConfig) -> Result<Body> {
    let p = walk_params(cfg, cfg.gamma[0])?;
    let grid = band_grid(&p, cfg.n_k.unwrap())?;
    let rows = grid.points.iter().map(|pt| [pt.q, pt.eps_plus, pt.eps_minus, pt.nz_plus, pt.nz_minus].map(Cell::Real).to_vec()).collect();
    Ok(Body::Table { columns: vec!["q", "eps_plus", "eps_minus", "nz_plus", "nz_minus"], rows })
}

/// `|0,H⟩`, or a Gaussian on the upper branch when `delta` is set.
fn initial_state(cfg: &RunConfig, p: &ModulationParams, lattice: LatticeConfig) -> Result<LatticeState> {
    Ok(match (cfg.delta, cfg.q) {
        (Some(delta), Some(q)) => {
            let spin = eigen_spinor(p, q, Branch::Plus)?;
            LatticeState::make_gaussian(&WavepacketSpec::new(delta, q, spin)?, lattice)?
        }
        _ => LatticeState::make_single_site(0, Polarization::H, lattice)?,
    })
}

fn evolve_rows(cfg: &RunConfig) -> Result<Body> {
    let p = walk_params(cfg, cfg.gamma[0])?;
    let engine = engine(cfg);
    let lattice = LatticeConfig::new(cfg.half_width.unwrap(), engine.boundary())?;
    let s0 = initial_state(cfg, &p, lattice)?;
    let traj = evolve(&s0, &Schedule::uniform(p, cfg.steps.unwrap()), engine, Record::DISTRIBUTION)?;
    let mut rows = Vec::new();
    for rec in &traj.records {
        let dist = rec.distribution.as_ref().expect("distribution recorded");
        for (m, prob) in lattice.sites().zip(dist) {
            rows.push(vec![Cell::Int(rec.step as i64), Cell::Int(m), Cell::Real(*prob)]);
        }
    }
    Ok(Body::Table { columns: vec!["step", "m", "prob"], rows })
}

fn diffusion(cfg: &RunConfig) -> Result<Body> {
    let n = cfg.steps.unwrap();
    let engine = engine(cfg);
    let mut rows = Vec::new();
    let mut push = |model: &str, series: &[f64]| {
        for (step, m) in series.iter().enumerate() {
            rows.push(vec![Cell::Int(step as i64), Cell::Text(model.to_string()), Cell::Real(*m)]);
        }
    };
    let classical: Vec<f64> = (0..=n).map(|k| classical_walk_distribution(k).diffusion_distance()).collect();
    push("classical", &classical);
    let mut dtqw = vec![0.0];
    dtqw.extend(dtqw_diffusion(n));
    push("dtqw", &dtqw);
    let lattice = LatticeConfig::new(cfg.half_width.unwrap(), engine.boundary())?;
    let s0 = LatticeState::make_single_site(0, Polarization::H, lattice)?;
    for &gamma in &cfg.gamma {
        let p = walk_params(cfg, gamma)?;
        let traj = evolve(&s0, &Schedule::uniform(p, n), engine, Record::SCALARS)?;
        push(&format!("synthetic:{gamma}"), &traj.diffusion_series());
    }
    Ok(Body::Table { columns: vec!["step", "model", "M"], rows })
}

fn params_json(p: &ModulationParams) -> Value {
    json!({ "gamma": p.gamma(), "phi_h": p.phi_h(), "phi_v": p.phi_v(), "theta": p.theta() })
}

fn gate(cfg: &RunConfig) -> Result<Body> {
    let name = GateName::parse(cfg.gate_name.as_deref().unwrap(), cfg.rz_phi)?;
    let (delta, q) = (cfg.delta.unwrap(), cfg.q.unwrap());
    let sp = solve_modulation(&gate_spec(name), q, cfg.gamma.first().copied())?;
    let report = reconstruct_matrix(&sp, delta, engine(cfg))?;
    let mut map = Map::new();
    map.insert("gate".into(), json!(name.label()));
    map.insert("q_star".into(), json!(q));
    map.insert("delta".into(), json!(delta));
    map.insert("half_width".into(), json!(gate_half_width(delta)?));
    map.insert("params".into(), params_json(&sp.params));
    map.insert("target".into(), matrix_json(&report.target));
    map.insert("analytic".into(), matrix_json(&gate_matrix_analytic(&sp)));
    map.insert("reconstructed".into(), matrix_json(&report.reconstructed));
    map.insert("hs_distance".into(), json!(report.hs_distance));
    map.insert("fidelity".into(), json!(report.gate_fidelity));
    map.insert("column_fidelities".into(), json!(report.column_fidelities));
    Ok(Body::Report(map))
}

fn prepare(cfg: &RunConfig) -> Result<Body> {
    let (phi1, phi2) = (cfg.phi1.unwrap(), cfg.phi2.unwrap());
    let (delta, q) = (cfg.delta.unwrap(), cfg.q.unwrap());
    let schedule = prepare_state_sequence(phi1, phi2, q)?;
    let product = sequence_matrix(&schedule, q);
    let target = QubitState::from_angles(phi1, phi2).amplitudes();
    let matrix_fidelity = state_fidelity(&product.column(0), &target)?;
    let (out, fidelity) = run_preparation(phi1, phi2, delta, q, engine(cfg))?;
    let labels = ["H", "Rz(phi1)", "H", "Rz(phi2+pi/2)"];
    let steps: Vec<Value> = labels.iter().zip(schedule.iter()).map(|(l, p)| json!({ "gate": l, "params": params_json(p) })).collect();
    let mut map = Map::new();
    map.insert("phi1".into(), json!(phi1));
    map.insert("phi2".into(), json!(phi2));
    map.insert("q_star".into(), json!(q));
    map.insert("delta".into(), json!(delta));
    map.insert("schedule".into(), Value::Array(steps));
    map.insert("sequence_matrix".into(), matrix_json(&product));
    map.insert("target".into(), vector_json(&target));
    map.insert("output".into(), vector_json(&out.amplitudes()));
    map.insert("fidelity".into(), json!(fidelity));
    map.insert("matrix_fidelity".into(), json!(matrix_fidelity));
    Ok(Body::Report(map))
}

fn cnot(cfg: &RunConfig) -> Result<Body> {
    let ops = cfg.sequence.as_ref().unwrap().iter().map(|t| TwoQubitGate::parse(t)).collect::<std::result::Result<Vec<_>, _>>()?;
    let (delta, q) = (cfg.delta.unwrap(), cfg.q.unwrap());
    let report = reconstruct_4x4(&ops, delta, q, engine(cfg))?;
    let mut map = Map::new();
    map.insert("sequence".into(), json!(cfg.sequence));
    map.insert("q_star".into(), json!(q));
    map.insert("delta".into(), json!(delta));
    map.insert("expected".into(), matrix_json(&report.expected));
    map.insert("reconstructed".into(), matrix_json(&report.reconstructed));
    map.insert("max_entry_error".into(), json!(report.max_entry_error));
    map.insert("hs_distance".into(), json!(report.hs_distance));
    map.insert("fidelity".into(), json!(report.gate_fidelity));
    Ok(Body::Report(map))
}
