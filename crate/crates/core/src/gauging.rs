//! The gauge group generated by the code stabilizers and red-link XX, and its center.

use serde::Serialize;

use crate::channels::{apply_maximal, link_operator};
use crate::error::Result;
use crate::f2::{kernel_f2, BitMatrix, EchelonBasis};
use crate::lattice::{Color, HoneycombTorus};
use crate::pauli::{
    color_code_state, default_protected_zone, logical_loops, plaquette_operator,
    removed_plaquettes, PauliKind, PauliWord, StabilizerState,
};

/// A list of (not necessarily commuting) Paulis with their commutation matrix.
#[derive(Clone, Debug)]
pub struct PauliGroupSpan {
    pub generators: Vec<PauliWord>,
    pub labels: Vec<String>,
    /// `gram[i][j] = 1` iff generators `i` and `j` anticommute.
    pub gram: BitMatrix,
}

impl PauliGroupSpan {
    pub fn new(generators: Vec<PauliWord>, labels: Vec<String>) -> Self {
        let m = generators.len();
        let mut gram = BitMatrix::zeros(m, m);
        for i in 0..m {
            for j in (i + 1)..m {
                if generators[i].anticommutes(&generators[j]) {
                    gram.set(i, j, true);
                    gram.set(j, i, true);
                }
            }
        }
        PauliGroupSpan {
            generators,
            labels,
            gram,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn n_qubits(&self) -> usize {
        self.generators.first().map_or(0, PauliWord::n_qubits)
    }

    /// Copy without generator `index`.
    pub fn without(&self, index: usize) -> PauliGroupSpan {
        let mut gens = self.generators.clone();
        let mut labels = self.labels.clone();
        gens.remove(index);
        labels.remove(index);
        PauliGroupSpan::new(gens, labels)
    }
}

/// Red-link XX, the kept red X plaquettes, the kept red and green Z plaquettes and every blue Z plaquette.
///
/// "Kept" means not among the plaquettes dropped from the fresh code's generating set.
pub fn gauge_group(t: &HoneycombTorus) -> PauliGroupSpan {
    let removed = removed_plaquettes(t, default_protected_zone(t));
    let mut gens = Vec::new();
    let mut labels = Vec::new();
    for l in t.links_of_color(Color::Red) {
        gens.push(link_operator(t, l));
        labels.push(format!("XX[link {l}]"));
    }
    let mut push = |kind: PauliKind, color: Color, skip: Option<usize>| {
        for p in t.plaquettes_of_color(color) {
            if Some(p) == skip {
                continue;
            }
            gens.push(plaquette_operator(t, kind, p).expect("valid plaquette"));
            labels.push(format!("{kind:?}[{color} plaquette {p}]"));
        }
    };
    push(PauliKind::X, Color::Red, Some(removed.red));
    push(PauliKind::Z, Color::Red, Some(removed.red));
    push(PauliKind::Z, Color::Green, Some(removed.green));
    push(PauliKind::Z, Color::Blue, None);
    PauliGroupSpan::new(gens, labels)
}

/// Basis of the span elements commuting with every generator.
///
/// A product `prod_i g_i^{c_i}` is central iff `gram * c = 0`.
pub fn center_of(g: &PauliGroupSpan) -> Vec<PauliWord> {
    let n = g.n_qubits();
    let kernel = kernel_f2(&g.gram);
    let mut basis = EchelonBasis::new(2 * n);
    let mut out = Vec::new();
    for c in kernel.rows() {
        let mut w = PauliWord::identity(n);
        for i in c.iter_ones() {
            w.mul_assign(&g.generators[i]);
        }
        if basis.insert(w.to_symplectic()) {
            out.push(w);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub matches: bool,
    pub center_rank: usize,
    pub state_rank: usize,
    /// Center basis elements outside the decohered stabilizer group.
    pub missing_from_state: Vec<String>,
    /// Decohered generators outside the center.
    pub missing_from_center: Vec<String>,
}

/// Compares the span of `center` with the group of `state`.
pub fn compare_center(center: &[PauliWord], state: &StabilizerState) -> CenterReport {
    let n = state.n_qubits();
    let mut basis = EchelonBasis::new(2 * n);
    for w in center {
        basis.insert(w.to_symplectic());
    }
    let missing_from_state: Vec<String> = center
        .iter()
        .filter(|w| !state.basis().contains(&w.to_symplectic()))
        .map(|w| w.to_string())
        .collect();
    let missing_from_center: Vec<String> = state
        .generators()
        .iter()
        .filter(|w| !basis.contains(&w.to_symplectic()))
        .map(|w| w.to_string())
        .collect();
    CenterReport {
        matches: missing_from_state.is_empty() && missing_from_center.is_empty(),
        center_rank: basis.rank(),
        state_rank: state.basis().rank(),
        missing_from_state,
        missing_from_center,
    }
}

/// Checks that the center of the gauge group equals the maximally decohered stabilizer group.
pub fn center_matches_decohered_state(t: &HoneycombTorus) -> CenterReport {
    let center = center_of(&gauge_group(t));
    let decohered = apply_maximal(&color_code_state(t), t);
    compare_center(&center, &decohered)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogicalStatus {
    /// Member of the stabilizer group.
    Stabilizer,
    /// Commutes with every stabilizer but is not one.
    WeakOnly,
    /// Anticommutes with some stabilizer.
    Annihilated,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalEntry {
    pub name: String,
    pub status: LogicalStatus,
}

#[derive(Clone, Debug, Serialize)]
pub struct SurvivalReport {
    pub entries: Vec<LogicalEntry>,
    /// `β` values for which `Z_β` and `X_β` both survive as weak symmetries and anticommute.
    pub surviving_pairs: Vec<usize>,
}

pub fn classify(state: &StabilizerState, op: &PauliWord) -> Result<LogicalStatus> {
    Ok(if state.is_stabilized_by(op)? {
        LogicalStatus::Stabilizer
    } else if state.commutes_with_all(op)? {
        LogicalStatus::WeakOnly
    } else {
        LogicalStatus::Annihilated
    })
}

pub fn logical_survival_report(
    t: &HoneycombTorus,
    state: &StabilizerState,
) -> Result<SurvivalReport> {
    let lg = logical_loops(t);
    let mut entries = Vec::new();
    for (name, op) in lg.named() {
        entries.push(LogicalEntry {
            name,
            status: classify(state, op)?,
        });
    }
    let mut surviving_pairs = Vec::new();
    for b in 0..4 {
        let z_ok = entries[b].status == LogicalStatus::WeakOnly;
        let x_ok = entries[4 + b].status == LogicalStatus::WeakOnly;
        if z_ok && x_ok && lg.z[b].anticommutes(&lg.x[b]) {
            surviving_pairs.push(b + 1);
        }
    }
    Ok(SurvivalReport {
        entries,
        surviving_pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauge_group_size_and_gram() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let g = gauge_group(&t);
        assert_eq!(g.len(), 36 + 11 + 11 + 11 + 12);
        assert!(g.gram.is_symmetric());
        for i in 0..g.len() {
            assert!(!g.gram.get(i, i));
        }
        // only XX versus red Z plaquettes anticommute
        for i in 0..g.len() {
            for j in 0..g.len() {
                if g.gram.get(i, j) {
                    let (a, b) = (&g.labels[i], &g.labels[j]);
                    let pair = (a.starts_with("XX") && b.starts_with("Z[red"))
                        || (b.starts_with("XX") && a.starts_with("Z[red"));
                    assert!(pair, "{a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn center_of_abelian_span_is_everything() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let s = color_code_state(&t);
        let span = PauliGroupSpan::new(s.generators().to_vec(), vec![String::new(); s.len()]);
        let c = center_of(&span);
        assert!(compare_center(&c, &s).matches);
    }

    #[test]
    fn center_membership_at_l6() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let center = center_of(&gauge_group(&t));
        let state = StabilizerState::new(t.n_vertices(), center.clone()).unwrap();
        assert_eq!(state.len(), 59);
        for a in &center {
            for g in &gauge_group(&t).generators {
                assert!(!a.anticommutes(g));
            }
        }
        let lg = logical_loops(&t);
        assert!(state.is_stabilized_by(&lg.x[1]).unwrap());
        assert!(state.is_stabilized_by(&lg.x[3]).unwrap());
        let mut all_red = PauliWord::identity(t.n_vertices());
        for p in t.plaquettes_of_color(Color::Red) {
            let z = plaquette_operator(&t, PauliKind::Z, p).unwrap();
            assert!(!state.is_stabilized_by(&z).unwrap());
            all_red.mul_assign(&z);
        }
        assert!(state.is_stabilized_by(&all_red).unwrap());
    }

    #[test]
    fn center_rank_is_order_invariant() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let g = gauge_group(&t);
        let mut gens = g.generators.clone();
        gens.reverse();
        let rev = PauliGroupSpan::new(gens, g.labels.iter().rev().cloned().collect());
        assert_eq!(center_of(&g).len(), center_of(&rev).len());
    }

    #[test]
    fn matches_decohered_state_at_l6() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let r = center_matches_decohered_state(&t);
        assert!(r.matches, "{r:?}");
        assert_eq!(r.center_rank, 59);
    }

    #[test]
    fn perturbed_gauge_group_fails_with_named_element() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let g = gauge_group(&t);
        let blue = g.labels.iter().position(|l| l.contains("blue")).unwrap();
        let center = center_of(&g.without(blue));
        let r = compare_center(&center, &apply_maximal(&color_code_state(&t), &t));
        assert!(!r.matches);
        assert!(!r.missing_from_center.is_empty());
    }

    #[test]
    fn survival_fresh_and_maximal() {
        let t = HoneycombTorus::new(6, 6).unwrap();
        let fresh = color_code_state(&t);
        let r = logical_survival_report(&t, &fresh).unwrap();
        assert_eq!(r.surviving_pairs, vec![1, 2, 3, 4]);
        assert!(r
            .entries
            .iter()
            .all(|e| e.status == LogicalStatus::WeakOnly));

        let d = apply_maximal(&fresh, &t);
        let r = logical_survival_report(&t, &d).unwrap();
        assert_eq!(r.surviving_pairs, vec![1, 3]);
        let status = |n: &str| r.entries.iter().find(|e| e.name == n).unwrap().status;
        assert_eq!(status("Z2"), LogicalStatus::Annihilated);
        assert_eq!(status("Z4"), LogicalStatus::Annihilated);
        assert_eq!(status("X2"), LogicalStatus::Stabilizer);
        assert_eq!(status("X4"), LogicalStatus::Stabilizer);
        // Z2 anticommutes with at least one red link
        let lg = logical_loops(&t);
        assert!(t
            .links_of_color(Color::Red)
            .any(|l| lg.z[1].anticommutes(&link_operator(&t, l))));
    }
}
