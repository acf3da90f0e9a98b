//! Red-link XX dephasing acting on stabilizer states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{left_kernel_f2, BitMatrix, BitVector};
use crate::lattice::{Color, HoneycombTorus};
use crate::pauli::{PauliWord, StabilizerState};

#[derive(Clone, Debug, Serialize)]
pub struct ChannelConfig {
    /// Probability that the maximal channel is applied to a given link.
    pub p: f64,
    pub seed: u64,
    pub link_set: Vec<usize>,
}

impl ChannelConfig {
    /// All red links of `t`, in index order.
    pub fn red_links(t: &HoneycombTorus, p: f64, seed: u64) -> Result<Self> {
        let cfg = ChannelConfig {
            p,
            seed,
            link_set: t.links_of_color(Color::Red).collect(),
        };
        cfg.validate(t)?;
        Ok(cfg)
    }

    pub fn validate(&self, t: &HoneycombTorus) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidArgument(format!(
                "p = {} is outside [0, 1]",
                self.p
            )));
        }
        if self.link_set.is_empty() {
            return Err(Error::InvalidArgument("empty link set".into()));
        }
        for &l in &self.link_set {
            let link = t.links().get(l).ok_or(Error::IndexOutOfRange {
                index: l,
                size: t.links().len(),
            })?;
            if link.color != Color::Red {
                return Err(Error::InvalidArgument(format!(
                    "link {l} is {}, not red",
                    link.color
                )));
            }
        }
        Ok(())
    }

    /// Links selected by the seeded draw, one uniform per link in `link_set` order.
    pub fn selected_links(&self) -> Vec<usize> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        self.link_set
            .iter()
            .copied()
            .filter(|_| rng.random::<f64>() < self.p)
            .collect()
    }
}

/// `XX` on the endpoints of link `l`.
pub fn link_operator(t: &HoneycombTorus, l: usize) -> PauliWord {
    PauliWord::x_on(t.n_vertices(), t.links()[l].endpoints)
}

/// Completely dephases `s` with respect to `p_op`.
///
/// Generators anticommuting with `p_op` are multiplied by the first of them,
/// which is then dropped. Returns whether the state changed.
pub fn dephase_in_place(s: &mut StabilizerState, p_op: &PauliWord) -> bool {
    let anti = s.anticommuting(p_op);
    let Some((&g0, rest)) = anti.split_first() else {
        return false;
    };
    let pivot = s.generators[g0].clone();
    for &i in rest {
        s.generators[i].mul_assign(&pivot);
    }
    s.generators.remove(g0);
    s.invalidate();
    true
}

pub fn dephase_with(s: &StabilizerState, p_op: &PauliWord) -> StabilizerState {
    let mut out = s.clone();
    dephase_in_place(&mut out, p_op);
    out
}

/// Dephases along `links` and then adds back every product of the applied
/// link operators that commutes with the input state.
///
/// Those products are the non-local strings that the measured links build up
/// (closed red-link loops, including the logical ones). Together with the
/// dephased generators they span the center of the group generated by the
/// input stabilizers and the applied link operators.
pub fn apply_links(s: &StabilizerState, t: &HoneycombTorus, links: &[usize]) -> StabilizerState {
    let mut out = s.clone();
    if links.is_empty() {
        return out;
    }
    let ops: Vec<PauliWord> = links.iter().map(|&l| link_operator(t, l)).collect();
    for op in &ops {
        dephase_in_place(&mut out, op);
    }

    // Row k of `anti`: which input generators anticommute with link k.
    let mut anti = BitMatrix::zeros(0, s.len());
    for op in &ops {
        let hits = s.anticommuting(op);
        anti.push_row(BitVector::from_indices(s.len(), hits))
            .expect("row length matches generator count");
    }
    let combos = left_kernel_f2(&anti);
    if combos.n_rows() == 0 {
        return out;
    }
    let mut span = s.basis().clone();
    let mut added = Vec::new();
    for c in combos.rows() {
        let mut w = PauliWord::identity(t.n_vertices());
        for k in c.iter_ones() {
            w.mul_assign(&ops[k]);
        }
        // Independence modulo the input group is independence modulo the
        // dephased group, which is contained in it.
        if span.insert(w.to_symplectic()) {
            added.push(w);
        }
    }
    if !added.is_empty() {
        out.generators.extend(added);
        out.invalidate();
    }
    out
}

/// Maximal decoherence on every red link.
pub fn apply_maximal(s: &StabilizerState, t: &HoneycombTorus) -> StabilizerState {
    let links: Vec<usize> = t.links_of_color(Color::Red).collect();
    apply_links(s, t, &links)
}

/// Applies the maximal channel on each link of `cfg.link_set` independently with probability `cfg.p`.
pub fn apply_stochastic(
    s: &StabilizerState,
    t: &HoneycombTorus,
    cfg: &ChannelConfig,
) -> StabilizerState {
    apply_links(s, t, &cfg.selected_links())
}
