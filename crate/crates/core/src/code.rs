//! Stabilizer codes: validation, syndromes and classification of residual operators.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CodeError, PauliError};
use crate::gf2;
use crate::pauli::{symplectic_product, words_for, PauliOperator};
use crate::surface::SurfaceLayout;

/// Declared minimum distance, either symmetric `d` or `d_X/d_Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Distance {
    Symmetric(usize),
    Asymmetric { d_x: usize, d_z: usize },
}

impl Distance {
    pub fn min(&self) -> usize {
        match *self {
            Distance::Symmetric(d) => d,
            Distance::Asymmetric { d_x, d_z } => d_x.min(d_z),
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Symmetric(d) => write!(f, "{d}"),
            Distance::Asymmetric { d_x, d_z } => write!(f, "{d_x}/{d_z}"),
        }
    }
}

/// Unvalidated description of a stabilizer code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeSpec {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub generators: Vec<PauliOperator>,
    pub logical_x: Vec<PauliOperator>,
    pub logical_z: Vec<PauliOperator>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongLength { what: String, found: usize, n: usize },
    GeneratorCount { found: usize, expected: usize },
    LogicalCount { x: usize, z: usize, k: usize },
    TooManyLogicals { k: usize },
    AnticommutingGenerators { a: usize, b: usize },
    RankDeficient { rank: usize, expected: usize },
    LogicalAnticommutesWithGenerator { logical: String, generator: usize },
    BadLogicalPairing { a: String, b: String, expected_commute: bool },
    LogicalInStabilizer { logical: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongLength { what, found, n } => {
                write!(f, "{what} acts on {found} qubits, expected {n}")
            }
            Violation::GeneratorCount { found, expected } => {
                write!(f, "{found} generators given, n-k = {expected}")
            }
            Violation::LogicalCount { x, z, k } => {
                write!(f, "{x} LX and {z} LZ operators given, k = {k}")
            }
            Violation::TooManyLogicals { k } => write!(f, "k = {k} exceeds supported 32"),
            Violation::AnticommutingGenerators { a, b } => {
                write!(f, "G{} anticommutes with G{}", a + 1, b + 1)
            }
            Violation::RankDeficient { rank, expected } => {
                write!(f, "generators have rank {rank}, expected {expected}")
            }
            Violation::LogicalAnticommutesWithGenerator { logical, generator } => {
                write!(f, "{logical} anticommutes with G{}", generator + 1)
            }
            Violation::BadLogicalPairing {
                a,
                b,
                expected_commute,
            } => {
                let want = if *expected_commute { "commute" } else { "anticommute" };
                write!(f, "{a} and {b} should {want}")
            }
            Violation::LogicalInStabilizer { logical } => {
                write!(f, "{logical} lies in the stabilizer group")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Symplectic row laid out as `(z | x)` so that its inner product with an
/// operator's `(x | z)` row is the commutation bit.
fn check_row(g: &PauliOperator) -> Vec<u64> {
    let n = g.num_qubits();
    let mut row = vec![0u64; words_for(2 * n)];
    for q in 0..n {
        let (xb, zb) = g.get(q).bits();
        if zb {
            row[q / 64] |= 1 << (q % 64);
        }
        if xb {
            let c = n + q;
            row[c / 64] |= 1 << (c % 64);
        }
    }
    row
}

/// Checks the algebraic conditions on a raw code description.
pub fn validate_code(spec: &CodeSpec) -> ValidationReport {
    let mut v = Vec::new();
    let n = spec.n;
    let labelled = spec
        .generators
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("G{}", i + 1), g))
        .chain(spec.logical_x.iter().enumerate().map(|(i, g)| (format!("LX{}", i + 1), g)))
        .chain(spec.logical_z.iter().enumerate().map(|(i, g)| (format!("LZ{}", i + 1), g)));
    for (what, op) in labelled {
        if op.num_qubits() != n {
            v.push(Violation::WrongLength {
                what,
                found: op.num_qubits(),
                n,
            });
        }
    }
    if !v.is_empty() {
        return ValidationReport { violations: v };
    }
    if spec.k > n {
        v.push(Violation::GeneratorCount {
            found: spec.generators.len(),
            expected: 0,
        });
        return ValidationReport { violations: v };
    }
    if spec.generators.len() != n - spec.k {
        v.push(Violation::GeneratorCount {
            found: spec.generators.len(),
            expected: n - spec.k,
        });
    }
    if spec.logical_x.len() != spec.k || spec.logical_z.len() != spec.k {
        v.push(Violation::LogicalCount {
            x: spec.logical_x.len(),
            z: spec.logical_z.len(),
            k: spec.k,
        });
    }
    if spec.k > 32 {
        v.push(Violation::TooManyLogicals { k: spec.k });
    }
    let gens = &spec.generators;
    for a in 0..gens.len() {
        for b in a + 1..gens.len() {
            if !gens[a].commutes(&gens[b]) {
                v.push(Violation::AnticommutingGenerators { a, b });
            }
        }
    }
    let rows: Vec<Vec<u64>> = gens.iter().map(check_row).collect();
    let rank = gf2::rank(&rows, 2 * n);
    if rank != gens.len() {
        v.push(Violation::RankDeficient {
            rank,
            expected: gens.len(),
        });
    }
    let logicals: Vec<(String, &PauliOperator)> = spec
        .logical_x
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("LX{}", i + 1), g))
        .chain(spec.logical_z.iter().enumerate().map(|(i, g)| (format!("LZ{}", i + 1), g)))
        .collect();
    for (name, l) in &logicals {
        for (gi, g) in gens.iter().enumerate() {
            if !l.commutes(g) {
                v.push(Violation::LogicalAnticommutesWithGenerator {
                    logical: name.clone(),
                    generator: gi,
                });
            }
        }
        let mut with_l = rows.clone();
        with_l.push(check_row(l));
        if gf2::rank(&with_l, 2 * n) == rank {
            v.push(Violation::LogicalInStabilizer {
                logical: name.clone(),
            });
        }
    }
    let kx = spec.logical_x.len().min(spec.logical_z.len());
    for i in 0..kx {
        for j in 0..kx {
            let a = &spec.logical_x[i];
            let b = &spec.logical_z[j];
            let expected_commute = i != j;
            if a.commutes(b) != expected_commute {
                v.push(Violation::BadLogicalPairing {
                    a: format!("LX{}", i + 1),
                    b: format!("LZ{}", j + 1),
                    expected_commute,
                });
            }
            if j > i {
                for (xs, tag) in [(&spec.logical_x, "LX"), (&spec.logical_z, "LZ")] {
                    if !xs[i].commutes(&xs[j]) {
                        v.push(Violation::BadLogicalPairing {
                            a: format!("{tag}{}", i + 1),
                            b: format!("{tag}{}", j + 1),
                            expected_commute: true,
                        });
                    }
                }
            }
        }
    }
    ValidationReport { violations: v }
}

/// Commutation pattern of an operator against the generators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Syndrome {
    len: usize,
    words: Vec<u64>,
}

impl Syndrome {
    pub fn zeros(len: usize) -> Self {
        Syndrome {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut s = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    /// Syndrome of length `len <= 64` from a packed index.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= 64);
        let mut s = Self::zeros(len);
        if len > 0 {
            s.words[0] = index;
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bit(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Packed value when the syndrome fits one word.
    pub fn index(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn xor(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len);
        Syndrome {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.bit(i) { '1' } else { '0' }).collect();
        f.write_str(&s)
    }
}

/// Where a syndrome-free (or not) residual operator lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidualClass {
    InStabilizer,
    /// Zero syndrome, non-trivial action. Bit `i` of the signature is set when
    /// the operator anticommutes with `LX_{i+1}`, bit `k+i` with `LZ_{i+1}`.
    LogicalOperator { signature: u64 },
    Detectable,
}

#[derive(Clone, Debug)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    k: usize,
    generators: Vec<PauliOperator>,
    logical_x: Vec<PauliOperator>,
    logical_z: Vec<PauliOperator>,
    declared_distance: Option<Distance>,
    layout: Option<SurfaceLayout>,
    /// `pure_errors[i]` has syndrome `e_i` and commutes with every logical.
    pure_errors: Vec<PauliOperator>,
}

impl StabilizerCode {
    pub fn new(spec: CodeSpec) -> Result<Self, CodeError> {
        let report = validate_code(&spec);
        if !report.passed() {
            return Err(CodeError::Validation(report));
        }
        let mut code = StabilizerCode {
            name: spec.name,
            n: spec.n,
            k: spec.k,
            generators: spec.generators,
            logical_x: spec.logical_x,
            logical_z: spec.logical_z,
            declared_distance: None,
            layout: None,
            pure_errors: Vec::new(),
        };
        code.pure_errors = code.compute_pure_errors();
        Ok(code)
    }

    pub fn with_distance(mut self, d: Distance) -> Self {
        self.declared_distance = Some(d);
        self
    }

    pub(crate) fn with_layout(mut self, layout: SurfaceLayout) -> Self {
        self.layout = Some(layout);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_x(&self) -> &[PauliOperator] {
        &self.logical_x
    }

    pub fn logical_z(&self) -> &[PauliOperator] {
        &self.logical_z
    }

    pub fn declared_distance(&self) -> Option<Distance> {
        self.declared_distance
    }

    pub fn layout(&self) -> Option<&SurfaceLayout> {
        self.layout.as_ref()
    }

    /// `[[n,k,d]]` label.
    pub fn label(&self) -> String {
        match self.declared_distance {
            Some(d) => format!("[[{},{},{}]]", self.n, self.k, d),
            None => format!("[[{},{}]]", self.n, self.k),
        }
    }

    pub fn to_spec(&self) -> CodeSpec {
        CodeSpec {
            name: self.name.clone(),
            n: self.n,
            k: self.k,
            generators: self.generators.clone(),
            logical_x: self.logical_x.clone(),
            logical_z: self.logical_z.clone(),
        }
    }

    /// True when every generator is purely X-type or purely Z-type.
    pub fn is_css(&self) -> bool {
        self.generators.iter().all(|g| {
            g.x_words().iter().all(|&w| w == 0) || g.z_words().iter().all(|&w| w == 0)
        })
    }

    pub fn try_syndrome(&self, e: &PauliOperator) -> Result<Syndrome, PauliError> {
        if e.num_qubits() != self.n {
            return Err(PauliError::LengthMismatch {
                left: self.n,
                right: e.num_qubits(),
            });
        }
        Ok(self.syndrome(e))
    }

    /// Panics on length mismatch; see [`try_syndrome`](Self::try_syndrome).
    pub fn syndrome(&self, e: &PauliOperator) -> Syndrome {
        assert_eq!(e.num_qubits(), self.n, "pauli length mismatch");
        let mut s = Syndrome::zeros(self.generators.len());
        for (i, g) in self.generators.iter().enumerate() {
            if symplectic_product(g.x_words(), g.z_words(), e.x_words(), e.z_words()) == 1 {
                s.words[i / 64] |= 1 << (i % 64);
            }
        }
        s
    }

    /// Anticommutation pattern with the logical representatives.
    pub fn logical_signature(&self, r: &PauliOperator) -> u64 {
        let mut sig = 0u64;
        for (i, lx) in self.logical_x.iter().enumerate() {
            if !r.commutes(lx) {
                sig |= 1 << i;
            }
        }
        for (i, lz) in self.logical_z.iter().enumerate() {
            if !r.commutes(lz) {
                sig |= 1 << (self.k + i);
            }
        }
        sig
    }

    pub fn try_classify_residual(&self, r: &PauliOperator) -> Result<ResidualClass, PauliError> {
        if r.num_qubits() != self.n {
            return Err(PauliError::LengthMismatch {
                left: self.n,
                right: r.num_qubits(),
            });
        }
        Ok(self.classify_residual(r))
    }

    pub fn classify_residual(&self, r: &PauliOperator) -> ResidualClass {
        if !self.syndrome(r).is_zero() {
            return ResidualClass::Detectable;
        }
        match self.logical_signature(r) {
            0 => ResidualClass::InStabilizer,
            signature => ResidualClass::LogicalOperator { signature },
        }
    }

    /// Logical representative with the given coset index: bit `i` of `index`
    /// selects `LX_{i+1}`, bit `k+i` selects `LZ_{i+1}`.
    pub fn logical_by_index(&self, index: u64) -> PauliOperator {
        let mut op = PauliOperator::identity(self.n);
        for i in 0..self.k {
            if (index >> i) & 1 == 1 {
                op.mul_assign(&self.logical_x[i]);
            }
            if (index >> (self.k + i)) & 1 == 1 {
                op.mul_assign(&self.logical_z[i]);
            }
        }
        op
    }

    pub fn pure_errors(&self) -> &[PauliOperator] {
        &self.pure_errors
    }

    /// An operator with the given syndrome and trivial logical signature.
    pub fn pure_error(&self, s: &Syndrome) -> PauliOperator {
        assert_eq!(s.len(), self.generators.len());
        let mut op = PauliOperator::identity(self.n);
        for (i, t) in self.pure_errors.iter().enumerate() {
            if s.bit(i) {
                op.mul_assign(t);
            }
        }
        op
    }

    fn compute_pure_errors(&self) -> Vec<PauliOperator> {
        let n = self.n;
        let rows: Vec<Vec<u64>> = self.generators.iter().map(check_row).collect();
        let (reduced, pivots) = gf2::reduce_tracked(&rows, 2 * n);
        let basis: Vec<PauliOperator> = pivots
            .iter()
            .map(|&c| {
                if c < n {
                    PauliOperator::single(n, c, crate::pauli::Pauli::X)
                } else {
                    PauliOperator::single(n, c - n, crate::pauli::Pauli::Z)
                }
            })
            .collect();
        (0..self.generators.len())
            .map(|i| {
                let mut t = PauliOperator::identity(n);
                for (r, row) in reduced.iter().enumerate().take(pivots.len()) {
                    if (row.combo[i / 64] >> (i % 64)) & 1 == 1 {
                        t.mul_assign(&basis[r]);
                    }
                }
                // Strip any logical component so the pure error has signature 0.
                let sig = self.logical_signature(&t);
                for j in 0..self.k {
                    if (sig >> j) & 1 == 1 {
                        t.mul_assign(&self.logical_z[j]);
                    }
                    if (sig >> (self.k + j)) & 1 == 1 {
                        t.mul_assign(&self.logical_x[j]);
                    }
                }
                t
            })
            .collect()
    }
}

impl PartialEq for StabilizerCode {
    fn eq(&self, other: &Self) -> bool {
        self.to_spec() == other.to_spec()
    }
}
