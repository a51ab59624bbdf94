//! Single-roundtrip gates on the polarization qubit at a fixed quasimomentum.
//!
//! At `q*` one roundtrip acts on the spinor as the 2×2 matrix of
//! [`crate::band::uk_matrix`]. Choosing `θ` and the two products
//! `a = Γcos(q*+φ_H)`, `b = Γcos(q*+φ_V)` selects the gate:
//!
//! | gate  | θ     | a   | b   |
//! |-------|-------|-----|-----|
//! | X     | π     | π   | 0   |
//! | Y     | π     | π/2 | π/2 |
//! | Z     | 0     | 0   | π   |
//! | H     | -π/2  | 0   | π   |
//! | Rz(φ) | 0     | 0   | φ   |

use alloc::string::ToString;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use crate::band::uk_matrix;
use crate::error::WalkError;
use crate::lattice::{LatticeConfig, LatticeState, WavepacketSpec};
use crate::math::{acos, ceil, cis, cos, sin, sqrt, C64};
use crate::matrix::{Mat2, SquareMatrix};
use crate::step::{evolve, Engine, ModulationParams, Record, Schedule};
use crate::Result;

/// Working quasimomentum used when none is given.
pub const DEFAULT_Q_STAR: f64 = 2.0 * PI / 3.0;

/// Smallest modulation strength chosen by default.
pub const DEFAULT_GAMMA: f64 = PI;

/// Gate family. `Rz` carries its phase.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateName {
    X,
    Y,
    Z,
    H,
    Rz(f64),
}

impl GateName {
    /// Case-insensitive lookup; `rz` needs `phi`.
    pub fn parse(name: &str, phi: Option<f64>) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "x" => Ok(GateName::X),
            "y" => Ok(GateName::Y),
            "z" => Ok(GateName::Z),
            "h" => Ok(GateName::H),
            "rz" => match phi {
                Some(p) if p.is_finite() => Ok(GateName::Rz(p)),
                Some(_) => Err(WalkError::NonFinite),
                None => Err(WalkError::Config("Rz needs a phase".into())),
            },
            _ => Err(WalkError::UnknownGate(name.to_string())),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            GateName::X => "X",
            GateName::Y => "Y",
            GateName::Z => "Z",
            GateName::H => "H",
            GateName::Rz(_) => "Rz",
        }
    }
}

/// One row of the gate table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateSpec {
    pub name: GateName,
    pub theta: f64,
    /// Required `Γcos(q*+φ_H)`.
    pub a: f64,
    /// Required `Γcos(q*+φ_V)`.
    pub b: f64,
    pub target: Mat2,
}

pub fn gate_spec(name: GateName) -> GateSpec {
    let zero = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let (theta, a, b, target) = match name {
        GateName::X => (PI, PI, 0.0, Mat2::new([[zero, one], [one, zero]])),
        GateName::Y => (PI, FRAC_PI_2, FRAC_PI_2, Mat2::new([[zero, -i], [i, zero]])),
        GateName::Z => (0.0, 0.0, PI, Mat2::new([[one, zero], [zero, -one]])),
        GateName::H => {
            let r = C64::new(FRAC_1_SQRT_2, 0.0);
            (-FRAC_PI_2, 0.0, PI, Mat2::new([[r, r], [r, -r]]))
        }
        GateName::Rz(phi) => (0.0, 0.0, phi, Mat2::new([[one, zero], [zero, cis(phi)]])),
    };
    GateSpec { name, theta, a, b, target }
}

/// [`gate_spec`] by name.
pub fn table_gate(name: &str, phi: Option<f64>) -> Result<GateSpec> {
    GateName::parse(name, phi).map(gate_spec)
}

/// Which solution of `cos x = t` to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArccosBranch {
    /// `x = arccos t`
    #[default]
    Principal,
    /// `x = -arccos t`
    Negative,
}

/// Ring parameters that realize a gate at `q_star`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolvedParams {
    pub params: ModulationParams,
    pub q_star: f64,
    pub target: Mat2,
}

/// Invert the table constraints on the principal branch.
pub fn solve_modulation(spec: &GateSpec, q_star: f64, gamma: Option<f64>) -> Result<SolvedParams> {
    solve_modulation_branch(spec, q_star, gamma, ArccosBranch::Principal)
}

/// Invert the table constraints: `φ_H = -q* ± arccos(a/Γ)`, likewise `φ_V`.
/// `Γ` defaults to `max(π, |a|, |b|)`.
pub fn solve_modulation_branch(spec: &GateSpec, q_star: f64, gamma: Option<f64>, branch: ArccosBranch) -> Result<SolvedParams> {
    if !q_star.is_finite() || !spec.a.is_finite() || !spec.b.is_finite() {
        return Err(WalkError::NonFinite);
    }
    let gamma = gamma.unwrap_or(DEFAULT_GAMMA.max(spec.a.abs()).max(spec.b.abs()));
    if !gamma.is_finite() {
        return Err(WalkError::NonFinite);
    }
    for target in [spec.a, spec.b] {
        if target.abs() > gamma || gamma < 1e-9 {
            return Err(WalkError::Infeasible { target, gamma });
        }
    }
    let sign = match branch {
        ArccosBranch::Principal => 1.0,
        ArccosBranch::Negative => -1.0,
    };
    let solve = |t: f64| -q_star + sign * acos((t / gamma).clamp(-1.0, 1.0));
    let params = ModulationParams::new(gamma, solve(spec.a), solve(spec.b), spec.theta)?;
    Ok(SolvedParams { params, q_star, target: spec.target })
}

/// The roundtrip matrix at `q*`.
pub fn gate_matrix_analytic(sp: &SolvedParams) -> Mat2 {
    uk_matrix(&sp.params, sp.q_star).matrix
}

/// `Tr[(U_t - U_o)†(U_t - U_o)]`, the squared Hilbert–Schmidt distance.
pub fn hs_distance<const N: usize>(u_o: &SquareMatrix<N>, u_t: &SquareMatrix<N>) -> f64 {
    u_o.entries.iter().flatten().zip(u_t.entries.iter().flatten()).map(|(a, b)| (a - b).norm_sqr()).sum()
}

/// `|Tr(U_t† U_o)|² / N²`; 1 exactly when the two agree up to a global phase.
pub fn gate_fidelity<const N: usize>(u_o: &SquareMatrix<N>, u_t: &SquareMatrix<N>) -> f64 {
    let tr = (u_t.adjoint() * *u_o).trace();
    (tr.norm_sqr() / (N * N) as f64).min(1.0)
}

/// Unit polarization spinor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitState {
    amp: [C64; 2],
    angles: Option<(f64, f64)>,
}

impl QubitState {
    /// Accepts vectors whose norm is 1 within `1e-10`.
    pub fn new(amp: [C64; 2]) -> Result<Self> {
        check_unit(&amp)?;
        Ok(QubitState { amp, angles: None })
    }

    /// Rescale any nonzero vector.
    pub fn normalized(amp: [C64; 2]) -> Result<Self> {
        let norm = spinor_norm(&amp);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(WalkError::NotNormalized(norm));
        }
        Ok(QubitState { amp: [amp[0] / norm, amp[1] / norm], angles: None })
    }

    /// `cos(φ₁/2)|H⟩ + sin(φ₁/2)e^{iφ₂}|V⟩`.
    pub fn from_angles(phi1: f64, phi2: f64) -> Self {
        QubitState { amp: [C64::new(cos(phi1 / 2.0), 0.0), cis(phi2) * sin(phi1 / 2.0)], angles: Some((phi1, phi2)) }
    }

    pub fn amplitudes(&self) -> [C64; 2] {
        self.amp
    }

    pub fn angles(&self) -> Option<(f64, f64)> {
        self.angles
    }
}

fn spinor_norm(v: &[C64; 2]) -> f64 {
    sqrt(v[0].norm_sqr() + v[1].norm_sqr())
}

fn check_unit(v: &[C64; 2]) -> Result<()> {
    let norm = spinor_norm(v);
    if (norm - 1.0).abs() > 1e-10 || !norm.is_finite() {
        return Err(WalkError::NotNormalized(norm));
    }
    Ok(())
}

/// `|⟨ψ_o|ψ_t⟩|²` for unit spinors.
pub fn state_fidelity(psi_o: &[C64; 2], psi_t: &[C64; 2]) -> Result<f64> {
    check_unit(psi_o)?;
    check_unit(psi_t)?;
    let ip = psi_o[0].conj() * psi_t[0] + psi_o[1].conj() * psi_t[1];
    Ok(ip.norm_sqr().min(1.0))
}

/// Half-width used for gate runs: the Gaussian edge tail needs `M > 4.3Δ`,
/// and the margin absorbs one roundtrip of spreading.
pub fn gate_half_width(delta: f64) -> Result<usize> {
    if !delta.is_finite() {
        return Err(WalkError::NonFinite);
    }
    if delta <= 0.0 {
        return Err(WalkError::Config("wavepacket width must be positive".into()));
    }
    Ok(ceil(5.0 * delta) as usize + 32)
}

/// Run a Gaussian packet through `schedule` and return the output
/// `q*`-component divided by the input packet's `q*`-amplitude.
fn run_packet(schedule: &Schedule, delta: f64, q_star: f64, spin: [C64; 2], engine: Engine) -> Result<[C64; 2]> {
    let config = LatticeConfig::new(gate_half_width(delta)?, engine.boundary())?;
    let spec = WavepacketSpec::new(delta, q_star, spin)?;
    let input = LatticeState::make_gaussian(&spec, config)?;
    let scale = spinor_norm(&input.q_component(q_star));
    if scale <= 1e-300 {
        return Err(WalkError::NoAmplitudeAtQ { q: q_star });
    }
    let out = evolve(&input, schedule, engine, Record::SCALARS)?.final_state;
    let v = out.q_component(q_star);
    Ok([v[0] / scale, v[1] / scale])
}

/// One gate roundtrip on a Gaussian packet; the normalized output spinor at `q*`.
pub fn execute_gate_lattice(sp: &SolvedParams, delta: f64, input_spin: [C64; 2], engine: Engine) -> Result<[C64; 2]> {
    let raw = run_packet(&Schedule::uniform(sp.params, 1), delta, sp.q_star, input_spin, engine)?;
    QubitState::normalized(raw).map(|s| s.amplitudes()).map_err(|_| WalkError::NoAmplitudeAtQ { q: sp.q_star })
}

/// Lattice-level reconstruction of one gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GateReport {
    pub reconstructed: Mat2,
    pub target: Mat2,
    pub hs_distance: f64,
    pub gate_fidelity: f64,
    /// State fidelity of each normalized column with the target column.
    pub column_fidelities: [f64; 2],
}

/// Rebuild the gate matrix column by column from `|H⟩` and `|V⟩` packets.
pub fn reconstruct_matrix(sp: &SolvedParams, delta: f64, engine: Engine) -> Result<GateReport> {
    let schedule = Schedule::uniform(sp.params, 1);
    let mut cols = [[C64::new(0.0, 0.0); 2]; 2];
    for (j, col) in cols.iter_mut().enumerate() {
        let mut spin = [C64::new(0.0, 0.0); 2];
        spin[j] = C64::new(1.0, 0.0);
        *col = run_packet(&schedule, delta, sp.q_star, spin, engine)?;
    }
    let reconstructed = Mat2::from_columns(cols);
    let mut column_fidelities = [0.0; 2];
    for (j, f) in column_fidelities.iter_mut().enumerate() {
        let got = QubitState::normalized(cols[j]).map_err(|_| WalkError::NoAmplitudeAtQ { q: sp.q_star })?;
        *f = state_fidelity(&got.amplitudes(), &sp.target.column(j))?;
    }
    Ok(GateReport {
        reconstructed,
        target: sp.target,
        hs_distance: hs_distance(&reconstructed, &sp.target),
        gate_fidelity: gate_fidelity(&reconstructed, &sp.target),
        column_fidelities,
    })
}

/// `[H, Rz(φ₁), H, Rz(φ₂+π/2)]` in application order, each solved at `q*`
/// with the default modulation strength.
pub fn prepare_state_sequence(phi1: f64, phi2: f64, q_star: f64) -> Result<Schedule> {
    let h = solve_modulation(&gate_spec(GateName::H), q_star, None)?;
    let r1 = solve_modulation(&gate_spec(GateName::Rz(phi1)), q_star, None)?;
    let r2 = solve_modulation(&gate_spec(GateName::Rz(phi2 + FRAC_PI_2)), q_star, None)?;
    Ok(Schedule(alloc::vec![h.params, r1.params, h.params, r2.params]))
}

/// Product of the roundtrip matrices at `q`, last roundtrip leftmost.
pub fn sequence_matrix(schedule: &Schedule, q: f64) -> Mat2 {
    schedule.iter().fold(Mat2::identity(), |acc, p| uk_matrix(p, q).matrix * acc)
}

/// Prepare `|φ₁,φ₂⟩` from an `|H⟩` packet and compare with the target.
pub fn run_preparation(phi1: f64, phi2: f64, delta: f64, q_star: f64, engine: Engine) -> Result<(QubitState, f64)> {
    let schedule = prepare_state_sequence(phi1, phi2, q_star)?;
    let raw = run_packet(&schedule, delta, q_star, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)], engine)?;
    let out = QubitState::normalized(raw).map_err(|_| WalkError::NoAmplitudeAtQ { q: q_star })?;
    let target = QubitState::from_angles(phi1, phi2);
    let f = state_fidelity(&out.amplitudes(), &target.amplitudes())?;
    Ok((out, f))
}
