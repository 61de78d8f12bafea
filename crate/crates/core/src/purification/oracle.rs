//! Branch-by-branch reference for one purification round.
//!
//! Both input pairs are Bell-diagonal, so the state is a mixture of 16 error
//! pairs `(E1, E2)` sitting on Bob's halves. Each branch is pushed through the
//! round as a two-qubit Pauli frame (qubit 0 = kept pair, qubit 1 = measured
//! pair):
//!
//! * DEJMPS first rotates each half about X, which fixes X and exchanges the
//!   Y and Z error components;
//! * the bilateral CNOT (kept -> measured) conjugates the frame;
//! * the measured pair's outcomes agree iff its residual error commutes with Z.
//!
//! Cliffords are applied by multiplying the images of the single-qubit
//! generators, so this path shares only the Pauli algebra with
//! [`purify_step`](super::purify_step).

use crate::pauli::{Letter, PauliString, Phase};
use crate::scalar::Real;

use super::{PauliDistribution, Protocol1G, StepOutcome};

/// Clifford given by the images of `X_j` and `Z_j` on each qubit.
struct Clifford {
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl Clifford {
    fn conjugate(&self, p: &PauliString) -> PauliString {
        let n = p.num_qubits();
        let mut out = PauliString::identity(n).expect("small frame");
        for q in 0..n {
            if p.x_bits() >> q & 1 == 1 {
                out = out.multiply(&self.x_images[q]).expect("same width");
            }
            if p.z_bits() >> q & 1 == 1 {
                out = out.multiply(&self.z_images[q]).expect("same width");
            }
        }
        out.unsigned()
    }
}

fn single(letters: [Letter; 2]) -> PauliString {
    PauliString::from_letters(&letters).expect("two qubits")
}

fn cnot_kept_to_measured() -> Clifford {
    use Letter::*;
    Clifford {
        x_images: vec![single([X, X]), single([I, X])],
        z_images: vec![single([Z, I]), single([Z, Z])],
    }
}

fn x_rotation_both() -> Clifford {
    use Letter::*;
    // R_X(pi/2): X -> X, Z -> -Y. The sign is irrelevant for error frames.
    Clifford {
        x_images: vec![single([X, I]), single([I, X])],
        z_images: vec![
            single([Y, I]).with_phase(Phase::MinusOne),
            single([I, Y]).with_phase(Phase::MinusOne),
        ],
    }
}

fn probability<T: Real>(d: &PauliDistribution<T>, l: Letter) -> T {
    match l {
        Letter::I => d.p_i,
        Letter::X => d.p_x,
        Letter::Y => d.p_y,
        Letter::Z => d.p_z,
    }
}

/// One round, computed by exhausting all 16 error branches.
pub fn circuit_oracle<T: Real>(protocol: Protocol1G, d: &PauliDistribution<T>) -> StepOutcome<T> {
    const LETTERS: [Letter; 4] = [Letter::I, Letter::X, Letter::Y, Letter::Z];
    let cnot = cnot_kept_to_measured();
    let rot = x_rotation_both();
    let z_measured = single([Letter::I, Letter::Z]);
    let mut kept = [T::zero(); 4];
    for e1 in LETTERS {
        for e2 in LETTERS {
            let weight = probability(d, e1) * probability(d, e2);
            let mut frame = single([e1, e2]);
            if protocol == Protocol1G::Dejmps {
                frame = rot.conjugate(&frame);
            }
            frame = cnot.conjugate(&frame);
            if frame.commutes_with(&z_measured).expect("same width") {
                let slot = LETTERS.iter().position(|&l| l == frame.letter(0)).expect("letter");
                kept[slot] = kept[slot] + weight;
            }
        }
    }
    let kept = PauliDistribution {
        p_i: kept[0],
        p_x: kept[1],
        p_y: kept[2],
        p_z: kept[3],
    };
    StepOutcome::from_kept(kept)
}
