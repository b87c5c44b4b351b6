//! Unrotated planar surface codes on a `d_x` by `d_z` lattice.
//!
//! Qubits sit on lattice links and are numbered row-major over alternating
//! link rows: even rows carry `d_z` qubits, odd rows carry `d_z - 1`. For the
//! 3x3 lattice this gives
//!
//! ```text
//!   1 - 2 - 3        row 0
//!     4   5          row 1
//!   6 - 7 - 8        row 2
//!     9  10          row 3
//!  11 -12 -13        row 4
//! ```
//!
//! X-type site checks sit between neighbouring qubits of an even row and
//! also touch the odd-row qubits directly above and below. Z-type plaquette
//! checks sit on odd rows and touch the two odd-row neighbours and the
//! even-row qubits above and below. Generators are listed row by row, X
//! sites on even rows and Z plaquettes on odd rows, which reproduces the
//! usual G1..G12 listing of the 13-qubit code. `Z_L` is the Z-chain along
//! row 0 (weight `d_z`), `X_L` the X-chain down the first column (weight
//! `d_x`).

use serde::{Deserialize, Serialize};

use crate::code::{CodeSpec, Distance, StabilizerCode};
use crate::error::CodeError;
use crate::pauli::{Pauli, PauliOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckKind {
    /// X-type site check; detects Z errors.
    Site,
    /// Z-type plaquette check; detects X errors.
    Plaquette,
}

/// Lattice geometry emitted alongside a built surface code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceLayout {
    pub d_x: usize,
    pub d_z: usize,
    /// `(row, column)` of each qubit on the doubled grid; even rows use even
    /// columns, odd rows odd columns.
    pub qubit_coords: Vec<(usize, usize)>,
    /// Kind and `(row, column)` of each generator on the doubled grid.
    pub checks: Vec<(CheckKind, (usize, usize))>,
}

impl SurfaceLayout {
    pub fn n(&self) -> usize {
        self.qubit_coords.len()
    }

    /// Text drawing of the qubit numbering (1-based).
    pub fn diagram(&self) -> String {
        let rows = 2 * self.d_x - 1;
        let mut out = String::new();
        let mut q = 0;
        for r in 0..rows {
            let count = if r.is_multiple_of(2) { self.d_z } else { self.d_z - 1 };
            let mut line = String::new();
            if r % 2 == 1 {
                line.push_str("   ");
            }
            for c in 0..count {
                q += 1;
                if c > 0 {
                    line.push_str(if r.is_multiple_of(2) { " - " } else { "   " });
                }
                line.push_str(&format!("{q:>3}"));
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

struct Lattice {
    d_x: usize,
    d_z: usize,
}

impl Lattice {
    fn row_len(&self, r: usize) -> usize {
        if r.is_multiple_of(2) {
            self.d_z
        } else {
            self.d_z - 1
        }
    }

    fn rows(&self) -> usize {
        2 * self.d_x - 1
    }

    /// 0-based qubit index of position `c` in link row `r`.
    fn qubit(&self, r: usize, c: usize) -> usize {
        debug_assert!(c < self.row_len(r));
        let pairs = r / 2;
        let base = pairs * (2 * self.d_z - 1);
        if r.is_multiple_of(2) {
            base + c
        } else {
            base + self.d_z + c
        }
    }

    fn n(&self) -> usize {
        self.d_x * self.d_z + (self.d_x - 1) * (self.d_z - 1)
    }
}

/// Builds the `[[n,1,d_x/d_z]]` planar surface code.
pub fn build_surface_code(d_x: usize, d_z: usize) -> Result<StabilizerCode, CodeError> {
    if d_x < 3 || d_z < 3 || d_x.is_multiple_of(2) || d_z.is_multiple_of(2) {
        return Err(CodeError::BadSurfaceDimensions { d_x, d_z });
    }
    let lat = Lattice { d_x, d_z };
    let n = lat.n();
    let mut generators = Vec::new();
    let mut checks = Vec::new();
    let mut qubit_coords = vec![(0, 0); n];
    for r in 0..lat.rows() {
        for c in 0..lat.row_len(r) {
            let col = if r.is_multiple_of(2) { 2 * c } else { 2 * c + 1 };
            qubit_coords[lat.qubit(r, c)] = (r, col);
        }
    }
    for r in 0..lat.rows() {
        if r.is_multiple_of(2) {
            for g in 0..d_z - 1 {
                let mut op = PauliOperator::identity(n);
                op.set(lat.qubit(r, g), Pauli::X);
                op.set(lat.qubit(r, g + 1), Pauli::X);
                if r > 0 {
                    op.set(lat.qubit(r - 1, g), Pauli::X);
                }
                if r + 1 < lat.rows() {
                    op.set(lat.qubit(r + 1, g), Pauli::X);
                }
                generators.push(op);
                checks.push((CheckKind::Site, (r, 2 * g + 1)));
            }
        } else {
            for c in 0..d_z {
                let mut op = PauliOperator::identity(n);
                if c > 0 {
                    op.set(lat.qubit(r, c - 1), Pauli::Z);
                }
                if c < d_z - 1 {
                    op.set(lat.qubit(r, c), Pauli::Z);
                }
                op.set(lat.qubit(r - 1, c), Pauli::Z);
                op.set(lat.qubit(r + 1, c), Pauli::Z);
                generators.push(op);
                checks.push((CheckKind::Plaquette, (r, 2 * c)));
            }
        }
    }
    let mut logical_z = PauliOperator::identity(n);
    for c in 0..d_z {
        logical_z.set(lat.qubit(0, c), Pauli::Z);
    }
    let mut logical_x = PauliOperator::identity(n);
    for r in (0..lat.rows()).step_by(2) {
        logical_x.set(lat.qubit(r, 0), Pauli::X);
    }
    let spec = CodeSpec {
        name: format!("surface-{d_x}x{d_z}"),
        n,
        k: 1,
        generators,
        logical_x: vec![logical_x],
        logical_z: vec![logical_z],
    };
    let distance = if d_x == d_z {
        Distance::Symmetric(d_x)
    } else {
        Distance::Asymmetric { d_x, d_z }
    };
    let layout = SurfaceLayout {
        d_x,
        d_z,
        qubit_coords,
        checks,
    };
    Ok(StabilizerCode::new(spec)?
        .with_distance(distance)
        .with_layout(layout))
}
