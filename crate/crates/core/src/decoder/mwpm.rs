//! Exact minimum-weight perfect matching for graph-like CSS codes.
//!
//! Each check type forms a graph: checks are nodes, a qubit touching two
//! checks is an edge, a qubit touching one check is an edge to the boundary.
//! Defects either pair up along shortest paths or leave through the nearest
//! boundary. The optimal pairing is found by dynamic programming over defect
//! subsets: the lowest-indexed defect is matched first, to the boundary or to
//! a later defect. With few checks the whole subset table is precomputed.

use std::collections::VecDeque;

use crate::code::{StabilizerCode, Syndrome};
use crate::error::DecodeError;
use crate::pauli::{words_for, PauliOperator};

use super::{Correction, SyndromeDecoder};

const INF: u32 = u32::MAX / 4;
const BOUNDARY: u8 = u8::MAX;
/// Largest check count whose full subset table is precomputed.
pub const TABLE_MAX_CHECKS: usize = 22;
/// Largest defect count handled by the per-call matcher.
pub const MAX_DEFECTS: usize = 24;

/// Which candidate wins among equal-cost options for the lowest defect.
/// Boundary nodes rank after all defects by default, giving lexicographic
/// pairing order over defects numbered in generator order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieOrder {
    #[default]
    PartnersFirst,
    BoundaryFirst,
}

struct Table {
    choice: Vec<u8>,
    tie: Vec<bool>,
    /// Correction mask per defect subset, kept when `n <= 64`.
    corr64: Option<Vec<u64>>,
}

/// Matching graph of one check type.
pub struct MatchingGraph {
    n: usize,
    words: usize,
    checks: Vec<usize>,
    qubit_defects: Vec<u64>,
    dist: Vec<u32>,
    bdist: Vec<u32>,
    paths: Vec<u64>,
    bpaths: Vec<u64>,
    order: TieOrder,
    table: Option<Table>,
}

impl MatchingGraph {
    /// `checks` are generator indices; `support(g)` gives the qubit mask of
    /// generator `g` restricted to the relevant Pauli component.
    fn build(
        n: usize,
        checks: Vec<usize>,
        support: impl Fn(usize) -> Vec<u64>,
        order: TieOrder,
        label: &str,
    ) -> Result<Self, DecodeError> {
        let m = checks.len();
        if m > 64 {
            return Err(DecodeError::GeometryMissing(format!(
                "{m} {label} checks, at most 64 supported"
            )));
        }
        let words = words_for(n);
        let supports: Vec<Vec<u64>> = checks.iter().map(|&g| support(g)).collect();
        let mut qubit_defects = vec![0u64; n];
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); m + 1];
        for q in 0..n {
            let touching: Vec<usize> = (0..m)
                .filter(|&c| (supports[c][q / 64] >> (q % 64)) & 1 == 1)
                .collect();
            match touching.as_slice() {
                [] => {}
                [a] => {
                    adj[*a].push((m, q));
                }
                [a, b] => {
                    adj[*a].push((*b, q));
                    adj[*b].push((*a, q));
                }
                _ => {
                    return Err(DecodeError::GeometryMissing(format!(
                        "qubit {} touches {} {label} checks",
                        q + 1,
                        touching.len()
                    )))
                }
            }
            for c in touching {
                qubit_defects[q] |= 1 << c;
            }
        }

        let mut dist = vec![INF; m * m];
        let mut bdist = vec![INF; m];
        let mut paths = vec![0u64; m * m * words];
        let mut bpaths = vec![0u64; m * words];
        for u in 0..m {
            let mut level = vec![INF; m + 1];
            let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX); m + 1];
            level[u] = 0;
            let mut queue = VecDeque::from([u]);
            while let Some(a) = queue.pop_front() {
                for &(b, q) in &adj[a] {
                    if level[b] == INF {
                        level[b] = level[a] + 1;
                        parent[b] = (a, q);
                        if b != m {
                            queue.push_back(b);
                        }
                    }
                }
            }
            let trace = |mut v: usize, out: &mut [u64]| {
                while v != u {
                    let (p, q) = parent[v];
                    out[q / 64] ^= 1 << (q % 64);
                    v = p;
                }
            };
            for v in 0..m {
                dist[u * m + v] = level[v];
                if level[v] != INF {
                    trace(v, &mut paths[(u * m + v) * words..(u * m + v + 1) * words]);
                }
            }
            bdist[u] = level[m];
            if level[m] != INF {
                trace(m, &mut bpaths[u * words..(u + 1) * words]);
            }
        }

        let mut graph = MatchingGraph {
            n,
            words,
            checks,
            qubit_defects,
            dist,
            bdist,
            paths,
            bpaths,
            order,
            table: None,
        };
        if m <= TABLE_MAX_CHECKS {
            graph.table = Some(graph.build_table());
        }
        Ok(graph)
    }

    /// Exact matching over the defect `nodes`, solved for every subset.
    /// Returns, per subset of local indices, the partner of the lowest member
    /// (`BOUNDARY` for the boundary) and whether a tie was broken.
    fn solve(&self, nodes: &[usize]) -> (Vec<u8>, Vec<bool>) {
        let m = self.checks.len();
        let size = 1usize << nodes.len();
        let mut cost = vec![0u32; size];
        let mut choice = vec![BOUNDARY; size];
        let mut tie = vec![false; size];
        let mut cands: Vec<usize> = Vec::with_capacity(nodes.len() + 1);
        for s in 1..size {
            let a = s.trailing_zeros() as usize;
            let rest = s & !(1 << a);
            let u = nodes[a];
            cands.clear();
            if self.order == TieOrder::BoundaryFirst {
                cands.push(BOUNDARY as usize);
            }
            cands.extend((a + 1..nodes.len()).filter(|b| (rest >> b) & 1 == 1));
            if self.order == TieOrder::PartnersFirst {
                cands.push(BOUNDARY as usize);
            }
            let mut best = INF;
            let mut best_choice = BOUNDARY;
            let mut best_sub = 0usize;
            let mut ties = 0;
            for &b in &cands {
                let (edge, sub) = if b == BOUNDARY as usize {
                    (self.bdist[u], rest)
                } else {
                    (self.dist[u * m + nodes[b]], rest & !(1 << b))
                };
                let c = edge.saturating_add(cost[sub]).min(INF);
                if c < best {
                    best = c;
                    best_choice = b as u8;
                    best_sub = sub;
                    ties = 1;
                } else if c == best && c < INF {
                    ties += 1;
                }
            }
            cost[s] = best;
            choice[s] = best_choice;
            tie[s] = ties > 1 || tie[best_sub];
        }
        (choice, tie)
    }

    fn build_table(&self) -> Table {
        let m = self.checks.len();
        let size = 1usize << m;
        let nodes: Vec<usize> = (0..m).collect();
        let (choice, tie) = self.solve(&nodes);
        let corr64 = (self.n <= 64).then(|| {
            let mut corr = vec![0u64; size];
            for s in 1..size {
                let u = s.trailing_zeros() as usize;
                let (path, sub) = match choice[s] {
                    BOUNDARY => (self.bpaths[u * self.words], s & !(1 << u)),
                    v => {
                        let v = v as usize;
                        (self.paths[(u * m + v) * self.words], s & !(1 << u) & !(1 << v))
                    }
                };
                corr[s] = path ^ corr[sub];
            }
            corr
        });
        Table {
            choice,
            tie,
            corr64,
        }
    }

    pub fn num_checks(&self) -> usize {
        self.checks.len()
    }

    /// Generator indices of the checks, in node order.
    pub fn checks(&self) -> &[usize] {
        &self.checks
    }

    /// Mask of checks flipped by an error on qubit `q` (0-based).
    pub fn qubit_defects(&self, q: usize) -> u64 {
        self.qubit_defects[q]
    }

    pub fn distance(&self, u: usize, v: usize) -> u32 {
        self.dist[u * self.checks.len() + v]
    }

    pub fn boundary_distance(&self, u: usize) -> u32 {
        self.bdist[u]
    }

    /// Correction for a defect mask as a qubit mask when `n <= 64`, from the
    /// precomputed table.
    pub fn correct_fast(&self, defects: u64) -> Option<(u64, bool)> {
        let t = self.table.as_ref()?;
        let corr = t.corr64.as_ref()?;
        Some((corr[defects as usize], t.tie[defects as usize]))
    }

    /// Correction qubit mask (packed words) and tie flag for a defect mask.
    pub fn correct(&self, defects: u64) -> Result<(Vec<u64>, bool), DecodeError> {
        let m = self.checks.len();
        let mut out = vec![0u64; self.words];
        let xor_in = |out: &mut [u64], src: &[u64]| {
            for (o, s) in out.iter_mut().zip(src) {
                *o ^= s;
            }
        };
        if let Some(t) = &self.table {
            let mut s = defects as usize;
            while s != 0 {
                let u = s.trailing_zeros() as usize;
                let c = t.choice[s];
                s &= !(1 << u);
                match c {
                    BOUNDARY => xor_in(&mut out, &self.bpaths[u * self.words..(u + 1) * self.words]),
                    v => {
                        let v = v as usize;
                        s &= !(1 << v);
                        let at = (u * m + v) * self.words;
                        xor_in(&mut out, &self.paths[at..at + self.words]);
                    }
                }
            }
            return Ok((out, t.tie[defects as usize]));
        }
        let nodes: Vec<usize> = (0..m).filter(|&c| (defects >> c) & 1 == 1).collect();
        let d = nodes.len();
        if d > MAX_DEFECTS {
            return Err(DecodeError::TooManyDefects(d, MAX_DEFECTS));
        }
        let size = 1usize << d;
        let (choice, tie) = self.solve(&nodes);
        let mut s = size - 1;
        while s != 0 {
            let a = s.trailing_zeros() as usize;
            let u = nodes[a];
            match choice[s] {
                BOUNDARY => {
                    xor_in(&mut out, &self.bpaths[u * self.words..(u + 1) * self.words]);
                    s &= !(1 << a);
                }
                b => {
                    let b = b as usize;
                    let at = (u * m + nodes[b]) * self.words;
                    xor_in(&mut out, &self.paths[at..at + self.words]);
                    s &= !(1 << a) & !(1 << b);
                }
            }
        }
        Ok((out, tie[size - 1]))
    }
}

/// Matching decoder: Z errors are matched on the X-check graph and X errors
/// on the Z-check graph, independently.
pub struct MwpmDecoder {
    code: StabilizerCode,
    x_checks: MatchingGraph,
    z_checks: MatchingGraph,
}

impl MwpmDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self, DecodeError> {
        Self::with_tie_order(code, TieOrder::default())
    }

    pub fn with_tie_order(code: &StabilizerCode, order: TieOrder) -> Result<Self, DecodeError> {
        if !code.is_css() {
            return Err(DecodeError::GeometryMissing(format!(
                "{} has mixed-type generators",
                code.name()
            )));
        }
        let gens = code.generators();
        let is_zero = |w: &[u64]| w.iter().all(|&x| x == 0);
        let x_type: Vec<usize> = (0..gens.len())
            .filter(|&g| is_zero(gens[g].z_words()))
            .collect();
        let z_type: Vec<usize> = (0..gens.len())
            .filter(|&g| !is_zero(gens[g].z_words()))
            .collect();
        let n = code.n();
        let x_checks =
            MatchingGraph::build(n, x_type, |g| gens[g].x_words().to_vec(), order, "X-type")?;
        let z_checks =
            MatchingGraph::build(n, z_type, |g| gens[g].z_words().to_vec(), order, "Z-type")?;
        Ok(MwpmDecoder {
            code: code.clone(),
            x_checks,
            z_checks,
        })
    }

    /// Graph of the X-type checks, which detect Z errors.
    pub fn x_check_graph(&self) -> &MatchingGraph {
        &self.x_checks
    }

    /// Graph of the Z-type checks, which detect X errors.
    pub fn z_check_graph(&self) -> &MatchingGraph {
        &self.z_checks
    }

    /// Residual mask and tie flag for a Z error given as a qubit mask, when
    /// the precomputed table covers it.
    pub fn z_residual_fast(&self, z: u64) -> Option<(u64, bool)> {
        residual_fast(&self.x_checks, z)
    }

    /// Same as [`z_residual_fast`](Self::z_residual_fast) for X errors.
    pub fn x_residual_fast(&self, x: u64) -> Option<(u64, bool)> {
        residual_fast(&self.z_checks, x)
    }
}

fn residual_fast(graph: &MatchingGraph, e: u64) -> Option<(u64, bool)> {
    let mut defects = 0u64;
    let mut rest = e;
    while rest != 0 {
        defects ^= graph.qubit_defects[rest.trailing_zeros() as usize];
        rest &= rest - 1;
    }
    graph.correct_fast(defects).map(|(c, tie)| (e ^ c, tie))
}

fn local_defects(graph: &MatchingGraph, s: &Syndrome) -> u64 {
    graph
        .checks
        .iter()
        .enumerate()
        .filter(|(_, &g)| s.bit(g))
        .fold(0, |acc, (c, _)| acc | (1 << c))
}

impl SyndromeDecoder for MwpmDecoder {
    fn code(&self) -> &StabilizerCode {
        &self.code
    }

    fn as_matching(&self) -> Option<&MwpmDecoder> {
        Some(self)
    }

    fn decode(&self, s: &Syndrome) -> Result<Correction, DecodeError> {
        if s.len() != self.code.num_generators() {
            return Err(DecodeError::SyndromeMismatch);
        }
        let (z, tie_z) = self.x_checks.correct(local_defects(&self.x_checks, s))?;
        let (x, tie_x) = self.z_checks.correct(local_defects(&self.z_checks, s))?;
        Ok(Correction {
            operator: PauliOperator::from_words(self.code.n(), x, z),
            tie: tie_x || tie_z,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::ResidualClass;
    use crate::decoder::decode_error;
    use crate::pauli::Pauli;
    use crate::registry::builtin;

    #[test]
    fn z2z3_goes_to_the_near_boundary() {
        let code = builtin("surface-3x3").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let e = PauliOperator::parse_sparse(13, "Z2 Z3").unwrap();
        let s = code.syndrome(&e);
        assert_eq!(s.weight(), 1);
        assert!(s.bit(0));
        let out = decode_error(&dec, &e).unwrap();
        assert_eq!(out.correction.to_string(), "ZIIIIIIIIIIII");
        assert_eq!(out.residual_class, ResidualClass::LogicalOperator { signature: 1 });
    }

    #[test]
    fn zero_syndrome_is_identity() {
        let code = builtin("surface-3x5").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let c = dec.decode(&Syndrome::zeros(22)).unwrap();
        assert!(c.operator.is_identity());
        assert!(!c.tie);
    }

    #[test]
    fn weight_one_errors_are_corrected() {
        for name in ["surface-3x3", "surface-3x5", "surface-5x5"] {
            let code = builtin(name).unwrap();
            let dec = MwpmDecoder::new(&code).unwrap();
            for q in 0..code.n() {
                for p in Pauli::NONTRIVIAL {
                    let e = PauliOperator::single(code.n(), q, p);
                    let out = decode_error(&dec, &e).unwrap();
                    assert_eq!(out.residual_class, ResidualClass::InStabilizer, "{name} {e}");
                }
            }
        }
    }

    #[test]
    fn distances_are_symmetric() {
        let code = builtin("surface-5x5").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        for g in [dec.x_check_graph(), dec.z_check_graph()] {
            let m = g.num_checks();
            for u in 0..m {
                assert_eq!(g.distance(u, u), 0);
                for v in 0..m {
                    assert_eq!(g.distance(u, v), g.distance(v, u));
                }
                assert!(g.boundary_distance(u) >= 1);
            }
        }
    }

    #[test]
    fn table_and_direct_matcher_agree() {
        let code = builtin("surface-3x5").unwrap();
        let dec = MwpmDecoder::new(&code).unwrap();
        let mut direct = MwpmDecoder::new(&code).unwrap();
        direct.x_checks.table = None;
        direct.z_checks.table = None;
        for g in [0usize, 1] {
            let (a, b) = if g == 0 {
                (&dec.x_checks, &direct.x_checks)
            } else {
                (&dec.z_checks, &direct.z_checks)
            };
            for defects in 0..(1u64 << a.num_checks()) {
                assert_eq!(a.correct(defects).unwrap(), b.correct(defects).unwrap());
                let (fast, tie) = a.correct_fast(defects).unwrap();
                assert_eq!((vec![fast], tie), a.correct(defects).unwrap());
            }
        }
    }

    #[test]
    fn non_graph_codes_are_rejected() {
        let steane = builtin("steane").unwrap();
        assert!(matches!(
            MwpmDecoder::new(&steane),
            Err(DecodeError::GeometryMissing(_))
        ));
        let five = builtin("five-qubit").unwrap();
        assert!(MwpmDecoder::new(&five).is_err());
    }
}

