//! Path ⊗ polarization register.
//!
//! Basis order is `|0H⟩, |0V⟩, |1H⟩, |1V⟩` (index `2·path + pol`). On the
//! lattice each path is its own synthetic lattice; a CNOT drives the path-1
//! ring with the X-gate parameters and leaves the path-0 ring idle, and the
//! path flip swaps the two lattices.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::mem;

use crate::error::WalkError;
use crate::gates::{gate_fidelity, gate_half_width, gate_spec, hs_distance, solve_modulation, GateName};
use crate::lattice::{LatticeConfig, LatticeState, Polarization, WavepacketSpec};
use crate::math::{sqrt, C64};
use crate::matrix::{kron2, Mat2, Mat4};
use crate::step::{Engine, ModulationParams, Stepper, BOUNDARY_LIMIT};
use crate::Result;

/// Controlled-X with the path as control.
pub fn cnot_matrix() -> Mat4 {
    Mat4::from_real([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 1.0, 0.0]])
}

/// `X ⊗ I`: exchange the two paths.
pub fn path_x() -> Mat4 {
    let x = Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]);
    kron2(&x, &Mat2::identity())
}

/// `path_x · CNOT · path_x`.
pub fn sequence_ms() -> Mat4 {
    path_x() * cnot_matrix() * path_x()
}

/// Register primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TwoQubitGate {
    Cnot,
    PathX,
    Identity,
}

impl TwoQubitGate {
    /// Accepts `cnot`, `x`/`path_x`, and `i`/`id`/`identity`, in any case.
    pub fn parse(tag: &str) -> Result<Self> {
        match tag.trim().to_ascii_lowercase().as_str() {
            "cnot" => Ok(TwoQubitGate::Cnot),
            "x" | "path_x" | "pathx" => Ok(TwoQubitGate::PathX),
            "i" | "id" | "identity" => Ok(TwoQubitGate::Identity),
            _ => Err(WalkError::UnknownGate(tag.to_string())),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            TwoQubitGate::Cnot => "cnot",
            TwoQubitGate::PathX => "path_x",
            TwoQubitGate::Identity => "identity",
        }
    }

    pub fn matrix(self) -> Mat4 {
        match self {
            TwoQubitGate::Cnot => cnot_matrix(),
            TwoQubitGate::PathX => path_x(),
            TwoQubitGate::Identity => Mat4::identity(),
        }
    }
}

/// The path-flip, CNOT, path-flip sequence.
pub const MS_SEQUENCE: [TwoQubitGate; 3] = [TwoQubitGate::PathX, TwoQubitGate::Cnot, TwoQubitGate::PathX];

/// Matrix of a sequence given in application order.
pub fn sequence_product(ops: &[TwoQubitGate]) -> Mat4 {
    ops.iter().fold(Mat4::identity(), |acc, op| op.matrix() * acc)
}

/// One lattice per path, sharing a configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitLattice {
    pub paths: [LatticeState; 2],
}

impl TwoQubitLattice {
    /// Gaussian packet at `q*` in basis state `index`; the other path is empty.
    pub fn basis_packet(index: usize, delta: f64, q_star: f64, config: LatticeConfig) -> Result<Self> {
        if index > 3 {
            return Err(WalkError::Config("two-qubit basis index must be 0..=3".into()));
        }
        let pol = Polarization::ALL[index % 2];
        let spec = WavepacketSpec::new(delta, q_star, pol.basis())?;
        let packet = LatticeState::make_gaussian(&spec, config)?;
        let empty = LatticeState::vacuum(config);
        let paths = if index / 2 == 0 { [packet, empty] } else { [empty, packet] };
        Ok(TwoQubitLattice { paths })
    }

    /// Raw `q`-components in register order.
    pub fn q_components(&self, q: f64) -> [C64; 4] {
        let [a, b] = self.paths[0].q_component(q);
        let [c, d] = self.paths[1].q_component(q);
        [a, b, c, d]
    }
}

struct Drive {
    x_gate: ModulationParams,
    steppers: [Stepper; 2],
}

impl Drive {
    fn apply(&mut self, reg: &mut TwoQubitLattice, op: TwoQubitGate, index: usize) -> Result<()> {
        let params = match op {
            TwoQubitGate::PathX => {
                let [p0, p1] = &mut reg.paths;
                mem::swap(p0, p1);
                return Ok(());
            }
            TwoQubitGate::Cnot => [ModulationParams::identity(), self.x_gate],
            TwoQubitGate::Identity => [ModulationParams::identity(); 2],
        };
        for ((path, stepper), p) in reg.paths.iter_mut().zip(&mut self.steppers).zip(&params) {
            let (next, _) = stepper.step(path, p)?;
            let mass = next.boundary_mass();
            if mass > BOUNDARY_LIMIT {
                return Err(WalkError::BoundaryLeak { step: index + 1, mass });
            }
            *path = next;
        }
        Ok(())
    }
}

/// Run `ops` on the basis packet `input`; the output register amplitudes at
/// `q*`, divided by the input packet's `q*`-amplitude.
pub fn execute_two_qubit_lattice(ops: &[TwoQubitGate], input: usize, delta: f64, q_star: f64, engine: Engine) -> Result<[C64; 4]> {
    let config = LatticeConfig::new(gate_half_width(delta)?, engine.boundary())?;
    let mut reg = TwoQubitLattice::basis_packet(input, delta, q_star, config)?;
    let scale = sqrt(reg.q_components(q_star).iter().map(|z| z.norm_sqr()).sum());
    if scale <= 1e-300 {
        return Err(WalkError::NoAmplitudeAtQ { q: q_star });
    }
    let x_gate = solve_modulation(&gate_spec(GateName::X), q_star, None)?.params;
    let mut drive = Drive { x_gate, steppers: [Stepper::new(config, engine), Stepper::new(config, engine)] };
    for (i, &op) in ops.iter().enumerate() {
        drive.apply(&mut reg, op, i)?;
    }
    Ok(reg.q_components(q_star).map(|z| z / scale))
}

/// Lattice reconstruction against the matrix-level product.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitReport {
    pub reconstructed: Mat4,
    pub expected: Mat4,
    /// Largest entrywise `|reconstructed - expected|`.
    pub max_entry_error: f64,
    pub hs_distance: f64,
    pub gate_fidelity: f64,
}

/// Rebuild the 4×4 matrix of `ops` from the four basis packets.
pub fn reconstruct_4x4(ops: &[TwoQubitGate], delta: f64, q_star: f64, engine: Engine) -> Result<TwoQubitReport> {
    let mut cols = [[C64::new(0.0, 0.0); 4]; 4];
    for (j, col) in cols.iter_mut().enumerate() {
        *col = execute_two_qubit_lattice(ops, j, delta, q_star, engine)?;
    }
    let reconstructed = Mat4::from_columns(cols);
    let expected = sequence_product(ops);
    Ok(TwoQubitReport {
        reconstructed,
        expected,
        max_entry_error: reconstructed.max_abs_diff(&expected),
        hs_distance: hs_distance(&reconstructed, &expected),
        gate_fidelity: gate_fidelity(&reconstructed, &expected),
    })
}

/// Comma-separated op tags, e.g. `"x,cnot,x"`.
pub fn parse_sequence(text: &str) -> Result<Vec<TwoQubitGate>> {
    text.split(',').filter(|t| !t.trim().is_empty()).map(TwoQubitGate::parse).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::DEFAULT_Q_STAR;

    fn basis(i: usize) -> [C64; 4] {
        let mut v = [C64::new(0.0, 0.0); 4];
        v[i] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn cnot_structure() {
        let c = cnot_matrix();
        assert_eq!(c * c, Mat4::identity());
        assert_eq!(c.apply(&basis(2)), basis(3));
        assert_eq!(c.apply(&basis(0)), basis(0));
        assert!(c.is_permutation());
    }

    #[test]
    fn path_flip() {
        let x = path_x();
        assert_eq!(x * x, Mat4::identity());
        assert_eq!(x.apply(&basis(1)), basis(3));
        assert!(x.is_permutation());
    }

    #[test]
    fn ms_matrix() {
        let ms = sequence_ms();
        let want = Mat4::from_real([[0.0, 1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]]);
        assert_eq!(ms, want);
        assert_eq!(ms.apply(&basis(0)), basis(1));
        assert_eq!(ms.apply(&basis(3)), basis(3));
        assert_eq!(ms.adjoint(), ms);
        assert_eq!(sequence_product(&MS_SEQUENCE), ms);
        // flipping the polarization instead leaves the CNOT unchanged
        let pol_x = kron2(&Mat2::identity(), &Mat2::from_real([[0.0, 1.0], [1.0, 0.0]]));
        assert_eq!(pol_x * cnot_matrix() * pol_x, cnot_matrix());
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_sequence("x, CNOT ,path_x").unwrap(), MS_SEQUENCE.to_vec());
        assert_eq!(parse_sequence("").unwrap(), Vec::new());
        assert_eq!(parse_sequence("cnot,swap"), Err(WalkError::UnknownGate("swap".into())));
    }

    #[test]
    fn identity_sequence_on_lattice() {
        for input in 0..4 {
            let out = execute_two_qubit_lattice(&[TwoQubitGate::Identity], input, 15.0, 0.9, Engine::Spectral).unwrap();
            let f = out[input].norm_sqr();
            assert!(f >= 1.0 - 1e-10, "input {input}: {f}");
        }
        assert!(execute_two_qubit_lattice(&[], 4, 15.0, 0.9, Engine::Spectral).is_err());
    }

    #[test]
    fn small_cnot_on_lattice() {
        let out = execute_two_qubit_lattice(&[TwoQubitGate::Cnot], 2, 30.0, DEFAULT_Q_STAR, Engine::Spectral).unwrap();
        for (i, z) in out.iter().enumerate() {
            let want = if i == 3 { 1.0 } else { 0.0 };
            assert!((z.norm() - want).abs() < 1e-9, "entry {i}");
        }
    }
}
