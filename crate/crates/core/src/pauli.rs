//! Sign-free Pauli operators and stabilizer groups in binary symplectic form.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::f2::{BitVector, EchelonBasis};
use crate::lattice::{Color, Direction, HoneycombTorus, HEX_DIRECTIONS};

/// A Pauli operator up to phase: `X^x Z^z` on each qubit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliWord {
    x: BitVector,
    z: BitVector,
}

impl PauliWord {
    pub fn identity(n: usize) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::zeros(n),
        }
    }

    pub fn from_parts(x: BitVector, z: BitVector) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::LengthMismatch {
                expected: x.len(),
                found: z.len(),
            });
        }
        Ok(Self { x, z })
    }

    pub fn x_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVector::from_indices(n, qubits),
            z: BitVector::zeros(n),
        }
    }

    pub fn z_on(n: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        Self {
            x: BitVector::zeros(n),
            z: BitVector::from_indices(n, qubits),
        }
    }

    /// Inverse of [`PauliWord::to_symplectic`].
    pub fn from_symplectic(v: &BitVector) -> Result<Self> {
        if !v.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "symplectic vector has odd length {}",
                v.len()
            )));
        }
        let (x, z) = v.split_at(v.len() / 2);
        Ok(Self { x, z })
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_part(&self) -> &BitVector {
        &self.x
    }

    pub fn z_part(&self) -> &BitVector {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero()
    }

    /// Number of qubits acted on non-trivially.
    pub fn weight(&self) -> usize {
        self.x
            .words()
            .iter()
            .zip(self.z.words())
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Qubits acted on non-trivially, ascending.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.x.iter_ones().chain(self.z.iter_ones()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// `(x | z)` as a single vector of length `2n`.
    pub fn to_symplectic(&self) -> BitVector {
        self.x.concat(&self.z)
    }

    /// Phase-free product.
    pub fn mul_assign(&mut self, other: &PauliWord) {
        self.x ^= &other.x;
        self.z ^= &other.z;
    }

    pub fn product(&self, other: &PauliWord) -> PauliWord {
        let mut out = self.clone();
        out.mul_assign(other);
        out
    }

    /// Keeps only the given qubits, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliWord {
        PauliWord {
            x: self.x.select(qubits),
            z: self.z.select(qubits),
        }
    }

    /// Unchecked symplectic product for equal-length words.
    #[inline]
    pub(crate) fn anticommutes(&self, other: &PauliWord) -> bool {
        let ones: u32 = self
            .x
            .words()
            .iter()
            .zip(other.z.words())
            .zip(self.z.words().iter().zip(other.x.words()))
            .map(|((xa, zb), (za, xb))| ((xa & zb) ^ (za & xb)).count_ones())
            .sum();
        ones & 1 == 1
    }
}

/// `a.x · b.z + a.z · b.x mod 2`; true means the operators anticommute.
pub fn symplectic_product(a: &PauliWord, b: &PauliWord) -> Result<bool> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::LengthMismatch {
            expected: a.n_qubits(),
            found: b.n_qubits(),
        });
    }
    Ok(a.anticommutes(b))
}

impl fmt::Display for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.n_qubits())
            .map(|i| match (self.x.get(i), self.z.get(i)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            })
            .collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliWord({self})")
    }
}

impl FromStr for PauliWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        let mut p = PauliWord::identity(n);
        for (i, c) in s.chars().enumerate() {
            match c {
                'I' | '_' => {}
                'X' => p.x.set(i, true),
                'Z' => p.z.set(i, true),
                'Y' => {
                    p.x.set(i, true);
                    p.z.set(i, true);
                }
                other => return Err(Error::Parse(format!("invalid Pauli letter {other:?}"))),
            }
        }
        Ok(p)
    }
}

/// The stabilizer group of a (possibly mixed) stabilizer state.
///
/// Generators pairwise commute and are independent; the represented state is
/// the normalised projector onto their joint eigenspace.
#[derive(Clone, Debug)]
pub struct StabilizerState {
    n_qubits: usize,
    pub(crate) generators: Vec<PauliWord>,
    basis: OnceLock<EchelonBasis>,
}

/// Above this many generators the per-mutation debug check is skipped.
const DEBUG_CHECK_LIMIT: usize = 128;

impl StabilizerState {
    /// Validates commutation and independence.
    pub fn new(n_qubits: usize, generators: Vec<PauliWord>) -> Result<Self> {
        let s = Self::from_generators_unchecked(n_qubits, generators);
        s.check_invariants()?;
        Ok(s)
    }

    pub(crate) fn from_generators_unchecked(n_qubits: usize, generators: Vec<PauliWord>) -> Self {
        Self {
            n_qubits,
            generators,
            basis: OnceLock::new(),
        }
    }

    /// The maximally mixed state.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        Self::from_generators_unchecked(n_qubits, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[PauliWord] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Echelon basis of the symplectic generator vectors, built on first use.
    pub fn basis(&self) -> &EchelonBasis {
        self.basis.get_or_init(|| {
            let mut b = EchelonBasis::new(2 * self.n_qubits);
            for g in &self.generators {
                b.insert(g.to_symplectic());
            }
            b
        })
    }

    pub(crate) fn invalidate(&mut self) {
        self.basis = OnceLock::new();
        if cfg!(debug_assertions) && self.generators.len() <= DEBUG_CHECK_LIMIT {
            if let Err(e) = self.check_invariants() {
                panic!("stabilizer invariant broken: {e}");
            }
        }
    }

    fn check_len(&self, p: &PauliWord) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::LengthMismatch {
                expected: self.n_qubits,
                found: p.n_qubits(),
            });
        }
        Ok(())
    }

    pub fn check_invariants(&self) -> Result<()> {
        for g in &self.generators {
            self.check_len(g)?;
        }
        for (i, a) in self.generators.iter().enumerate() {
            for (j, b) in self.generators.iter().enumerate().skip(i + 1) {
                if a.anticommutes(b) {
                    return Err(Error::InvalidArgument(format!(
                        "generators {i} and {j} anticommute"
                    )));
                }
            }
        }
        let rank = EchelonBasis::from_rows(
            2 * self.n_qubits,
            self.generators
                .iter()
                .map(|g| g.to_symplectic())
                .collect::<Vec<_>>()
                .iter(),
        )
        .rank();
        if rank != self.generators.len() {
            return Err(Error::InvalidArgument(format!(
                "{} generators but only {rank} independent",
                self.generators.len()
            )));
        }
        Ok(())
    }

    /// Sign-free group membership.
    pub fn is_stabilized_by(&self, p: &PauliWord) -> Result<bool> {
        self.check_len(p)?;
        Ok(self.basis().contains(&p.to_symplectic()))
    }

    /// True iff `p` commutes with every generator, i.e. conjugation by `p` leaves the state invariant.
    pub fn commutes_with_all(&self, p: &PauliWord) -> Result<bool> {
        self.check_len(p)?;
        Ok(self.anticommuting(p).is_empty())
    }

    /// Indices of generators anticommuting with `p`.
    pub fn anticommuting(&self, p: &PauliWord) -> Vec<usize> {
        let xs: Vec<usize> = p.x.iter_ones().collect();
        let zs: Vec<usize> = p.z.iter_ones().collect();
        if xs.len() + zs.len() <= 16 {
            // Sparse probe: read only the bits under p's support.
            self.generators
                .iter()
                .enumerate()
                .filter(|(_, g)| {
                    let a = xs.iter().filter(|&&i| g.z.get(i)).count();
                    let b = zs.iter().filter(|&&i| g.x.get(i)).count();
                    (a + b) % 2 == 1
                })
                .map(|(i, _)| i)
                .collect()
        } else {
            self.generators
                .iter()
                .enumerate()
                .filter(|(_, g)| g.anticommutes(p))
                .map(|(i, _)| i)
                .collect()
        }
    }

    /// True iff both generator lists span the same group.
    pub fn same_group(&self, other: &StabilizerState) -> bool {
        self.n_qubits == other.n_qubits
            && self.basis().rank() == other.basis().rank()
            && other
                .generators
                .iter()
                .all(|g| self.basis().contains(&g.to_symplectic()))
    }

    /// One generator per line over `{I, X, Y, Z}`.
    pub fn to_tableau_text(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    /// Parses [`StabilizerState::to_tableau_text`] output. Blank lines and `#` comments are skipped.
    pub fn from_tableau_text(n_qubits: usize, text: &str) -> Result<Self> {
        let gens = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(PauliWord::from_str)
            .collect::<Result<Vec<_>>>()?;
        Self::new(n_qubits, gens)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliKind {
    X,
    Z,
}

pub fn plaquette_operator(
    t: &HoneycombTorus,
    kind: PauliKind,
    plaquette: usize,
) -> Result<PauliWord> {
    let vs = t.plaquette(plaquette)?.vertices;
    Ok(match kind {
        PauliKind::X => PauliWord::x_on(t.n_vertices(), vs),
        PauliKind::Z => PauliWord::z_on(t.n_vertices(), vs),
    })
}

/// The four plaquettes omitted from the generating set to remove redundancy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RemovedPlaquettes {
    pub red: usize,
    pub green: usize,
}

/// Red and green plaquettes farthest from `protected` (lowest index on ties).
pub fn removed_plaquettes(t: &HoneycombTorus, protected: usize) -> RemovedPlaquettes {
    let far = |c: Color| {
        t.plaquettes_of_color(c)
            .max_by_key(|&p| (t.hex_distance(p, protected), std::cmp::Reverse(p)))
            .expect("colour class is non-empty")
    };
    RemovedPlaquettes {
        red: far(Color::Red),
        green: far(Color::Green),
    }
}

/// The default protected zone: the middle of the torus, where presets are placed.
pub fn default_protected_zone(t: &HoneycombTorus) -> usize {
    t.plaquette_index(t.lx() as i64 / 2, t.ly() as i64 / 2)
}

/// Fresh colour code: all X and Z plaquettes except one red and one green of each type.
pub fn color_code_state(t: &HoneycombTorus) -> StabilizerState {
    color_code_state_with(t, default_protected_zone(t))
}

pub fn color_code_state_with(t: &HoneycombTorus, protected: usize) -> StabilizerState {
    let removed = removed_plaquettes(t, protected);
    let mut gens = Vec::with_capacity(2 * t.n_plaquettes() - 4);
    for p in 0..t.n_plaquettes() {
        if p == removed.red || p == removed.green {
            continue;
        }
        for kind in [PauliKind::X, PauliKind::Z] {
            gens.push(plaquette_operator(t, kind, p).expect("valid plaquette"));
        }
    }
    StabilizerState::from_generators_unchecked(t.n_vertices(), gens)
}

/// X or Z on every vertex of a colour-fixed non-contractible string.
pub fn loop_operator(
    t: &HoneycombTorus,
    kind: PauliKind,
    color: Color,
    direction: Direction,
) -> PauliWord {
    let path = t.loop_path(color, direction);
    match kind {
        PauliKind::X => PauliWord::x_on(t.n_vertices(), path.vertices),
        PauliKind::Z => PauliWord::z_on(t.n_vertices(), path.vertices),
    }
}

/// The eight logical string operators.
#[derive(Clone, Debug)]
pub struct LogicalLoops {
    /// `Z_1..Z_4`
    pub z: [PauliWord; 4],
    /// `X_1..X_4`
    pub x: [PauliWord; 4],
}

impl LogicalLoops {
    /// `(name, operator)` in the order Z1..Z4, X1..X4.
    pub fn named(&self) -> Vec<(String, &PauliWord)> {
        let zs = self
            .z
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("Z{}", i + 1), p));
        let xs = self
            .x
            .iter()
            .enumerate()
            .map(|(i, p)| (format!("X{}", i + 1), p));
        zs.chain(xs).collect()
    }
}

/// Colour and direction of each logical string, as `(Z_β, X_β)` pairs.
pub const LOGICAL_PATHS: [((Color, Direction), (Color, Direction)); 4] = [
    ((Color::Red, Direction::X), (Color::Green, Direction::Y)),
    ((Color::Green, Direction::X), (Color::Red, Direction::Y)),
    ((Color::Red, Direction::Y), (Color::Green, Direction::X)),
    ((Color::Green, Direction::Y), (Color::Red, Direction::X)),
];

pub fn logical_loops(t: &HoneycombTorus) -> LogicalLoops {
    let z = LOGICAL_PATHS.map(|((c, d), _)| loop_operator(t, PauliKind::Z, c, d));
    let x = LOGICAL_PATHS.map(|(_, (c, d))| loop_operator(t, PauliKind::X, c, d));
    LogicalLoops { z, x }
}

/// Contractible loop operators, each a product of plaquettes of two colours.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LoopKind {
    /// X plaquettes of green and blue.
    RX,
    /// X plaquettes of red and blue.
    GX,
    /// Z plaquettes of red and blue.
    GZ,
    /// Z plaquettes of red and green.
    BZ,
}

impl LoopKind {
    fn parts(self) -> (PauliKind, [Color; 2]) {
        match self {
            LoopKind::RX => (PauliKind::X, [Color::Green, Color::Blue]),
            LoopKind::GX => (PauliKind::X, [Color::Red, Color::Blue]),
            LoopKind::GZ => (PauliKind::Z, [Color::Red, Color::Blue]),
            LoopKind::BZ => (PauliKind::Z, [Color::Red, Color::Green]),
        }
    }
}

/// Product of the `kind` plaquette operators over the plaquette set `sigma`.
///
/// `sigma` must be connected and must not wind around the torus.
pub fn contractible_loop_operator(
    t: &HoneycombTorus,
    kind: LoopKind,
    sigma: &[usize],
) -> Result<PauliWord> {
    check_contractible(t, sigma)?;
    let (pk, colors) = kind.parts();
    let mut w = PauliWord::identity(t.n_vertices());
    for &p in sigma {
        if colors.contains(&t.plaquette(p)?.color) {
            w.mul_assign(&plaquette_operator(t, pk, p)?);
        }
    }
    Ok(w)
}

/// Lifts `sigma` to the plane by breadth-first search; a plaquette reached at
/// two different lifts means the set winds around the torus.
fn check_contractible(t: &HoneycombTorus, sigma: &[usize]) -> Result<()> {
    let Some(&first) = sigma.first() else {
        return Ok(());
    };
    let mut member = HashMap::new();
    for &p in sigma {
        t.plaquette(p)?;
        member.insert(p, None::<(i64, i64)>);
    }
    let start = t.coords(first);
    member.insert(first, Some(start));
    let mut queue = VecDeque::from([(first, start)]);
    while let Some((_, (q, r))) = queue.pop_front() {
        for (dq, dr) in HEX_DIRECTIONS {
            let lift = (q + dq, r + dr);
            let n = t.plaquette_index(lift.0, lift.1);
            match member.get(&n) {
                None => {}
                Some(None) => {
                    member.insert(n, Some(lift));
                    queue.push_back((n, lift));
                }
                Some(Some(seen)) if *seen != lift => {
                    return Err(Error::NonContractible(format!(
                        "plaquette {n} is reached at two different lifts"
                    )));
                }
                Some(Some(_)) => {}
            }
        }
    }
    if member.values().any(Option::is_none) {
        return Err(Error::NonContractible(
            "plaquette set is not connected".into(),
        ));
    }
    Ok(())
}
