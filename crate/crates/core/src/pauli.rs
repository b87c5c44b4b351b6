//! Phaseless n-qubit Pauli operators in binary symplectic form.
//!
//! An operator is a pair of packed bit rows `(x, z)`: qubit `q` carries
//! `I`, `X`, `Z`, `Y` exactly when `(x_q, z_q)` is `(0,0)`, `(1,0)`, `(0,1)`,
//! `(1,1)`. Phases are dropped everywhere, so the product of two operators
//! is the componentwise XOR of their rows.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::PauliError;

/// Number of `u64` words needed to hold `n` bits.
pub(crate) const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOperator {
    n: usize,
    x: Vec<u64>,
    z: Vec<u64>,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        let w = words_for(n);
        PauliOperator {
            n,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// Operator with a single non-identity letter on qubit `q` (0-based).
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut op = Self::identity(n);
        op.set(q, p);
        op
    }

    /// Builds an operator from packed rows. Bits at positions `>= n` must be clear.
    pub fn from_words(n: usize, x: Vec<u64>, z: Vec<u64>) -> Self {
        assert_eq!(x.len(), words_for(n), "x row has wrong word count");
        assert_eq!(z.len(), words_for(n), "z row has wrong word count");
        let op = PauliOperator { n, x, z };
        debug_assert!(op.tail_clear());
        op
    }

    /// Builds an operator on at most 64 qubits from single-word masks.
    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        assert!(n <= 64, "from_masks supports at most 64 qubits");
        let keep = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        assert!(x & !keep == 0 && z & !keep == 0, "mask bits beyond n");
        if n == 0 {
            return Self::identity(0);
        }
        PauliOperator {
            n,
            x: vec![x],
            z: vec![z],
        }
    }

    /// Parses a string over `{I,X,Y,Z}`; leftmost character is qubit 1.
    pub fn parse(s: &str) -> Result<Self, PauliError> {
        let chars: Vec<char> = s.chars().collect();
        if chars.is_empty() {
            return Err(PauliError::Empty);
        }
        let mut op = Self::identity(chars.len());
        for (q, c) in chars.into_iter().enumerate() {
            let p = Pauli::from_char(c).ok_or(PauliError::InvalidChar {
                position: q + 1,
                found: c,
            })?;
            op.set(q, p);
        }
        Ok(op)
    }

    /// Parses sparse notation such as `X2 Y3` or `Z1Z4Z6` on `n` qubits (1-based indices).
    pub fn parse_sparse(n: usize, s: &str) -> Result<Self, PauliError> {
        let mut op = Self::identity(n);
        let mut chars = s.chars().filter(|c| !c.is_whitespace()).peekable();
        let mut position = 0;
        while let Some(c) = chars.next() {
            position += 1;
            let p = Pauli::from_char(c).ok_or(PauliError::InvalidChar { position, found: c })?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(d);
                chars.next();
            }
            let q: usize = digits.parse().map_err(|_| PauliError::InvalidChar {
                position,
                found: c,
            })?;
            if q == 0 || q > n {
                return Err(PauliError::QubitOutOfRange { qubit: q, n });
            }
            op.set(q - 1, p);
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn get(&self, q: usize) -> Pauli {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        Pauli::from_bits((self.x[w] >> b) & 1 == 1, (self.z[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (w, b) = (q / 64, q % 64);
        let (xb, zb) = p.bits();
        self.x[w] = (self.x[w] & !(1 << b)) | ((xb as u64) << b);
        self.z[w] = (self.z[w] & !(1 << b)) | ((zb as u64) << b);
    }

    pub fn is_identity(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(x, z)| (x | z).count_ones() as usize)
            .sum()
    }

    /// Counts of `(X, Y, Z)` letters.
    pub fn letter_counts(&self) -> (usize, usize, usize) {
        self.x
            .iter()
            .zip(&self.z)
            .fold((0, 0, 0), |(nx, ny, nz), (&x, &z)| {
                (
                    nx + (x & !z).count_ones() as usize,
                    ny + (x & z).count_ones() as usize,
                    nz + (z & !x).count_ones() as usize,
                )
            })
    }

    /// 0-based qubits carrying a non-identity letter.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&q| self.get(q) != Pauli::I).collect()
    }

    /// Symplectic product; `true` when the operators commute.
    pub fn try_commutes(&self, other: &Self) -> Result<bool, PauliError> {
        self.check_len(other)?;
        Ok(symplectic_product(&self.x, &self.z, &other.x, &other.z) == 0)
    }

    /// Panics on length mismatch; see [`try_commutes`](Self::try_commutes).
    pub fn commutes(&self, other: &Self) -> bool {
        self.try_commutes(other).expect("pauli length mismatch")
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    /// In-place product; operands must have the same length.
    pub fn mul_assign(&mut self, other: &Self) {
        assert_eq!(self.n, other.n, "pauli length mismatch");
        self.mul_assign_unchecked(other);
    }

    fn mul_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }

    /// Operator with only the X-part kept (Y becomes X).
    pub fn x_component(&self) -> Self {
        PauliOperator {
            n: self.n,
            x: self.x.clone(),
            z: vec![0; self.z.len()],
        }
    }

    /// Operator with only the Z-part kept (Y becomes Z).
    pub fn z_component(&self) -> Self {
        PauliOperator {
            n: self.n,
            x: vec![0; self.x.len()],
            z: self.z.clone(),
        }
    }

    fn check_len(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            Err(PauliError::LengthMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    fn tail_clear(&self) -> bool {
        let rem = self.n % 64;
        if rem == 0 || self.x.is_empty() {
            return true;
        }
        let mask = !((1u64 << rem) - 1);
        let last = self.x.len() - 1;
        self.x[last] & mask == 0 && self.z[last] & mask == 0
    }
}

/// Parity of `<ax, bz> + <az, bx>` over packed rows.
pub(crate) fn symplectic_product(ax: &[u64], az: &[u64], bx: &[u64], bz: &[u64]) -> u32 {
    let mut acc = 0u32;
    for i in 0..ax.len() {
        acc ^= ((ax[i] & bz[i]) ^ (az[i] & bx[i])).count_ones() & 1;
    }
    acc & 1
}

impl Mul for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.try_mul(rhs).expect("pauli length mismatch")
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n).map(|q| self.get(q).as_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

impl FromStr for PauliOperator {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}
