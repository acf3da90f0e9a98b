//! Dense partial-transpose negativity for small stabilizer states.
//!
//! The unnormalised state `M = prod_l (1 + g_l)` is built as an explicit
//! matrix of Gaussian integers. After the partial transpose, `Q = M^2` is
//! checked to satisfy `Q^2 = c Q` for a scalar `c`; then every non-zero
//! eigenvalue of `M` has modulus `sqrt(c)` and their number is `tr Q / c`.
//! All arithmetic is exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::f2::{BitVector, EchelonBasis};
use crate::negativity::{negativity, HalfInt};
use crate::pauli::{PauliWord, StabilizerState};
use crate::region::Region;

pub const MAX_ORACLE_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Gauss {
    re: i128,
    im: i128,
}

impl Gauss {
    const ZERO: Gauss = Gauss { re: 0, im: 0 };

    fn mul(self, o: Gauss) -> Gauss {
        Gauss {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn add_assign(&mut self, o: Gauss) {
        self.re += o.re;
        self.im += o.im;
    }

    /// `i^k`
    fn i_pow(k: u32) -> Gauss {
        match k % 4 {
            0 => Gauss { re: 1, im: 0 },
            1 => Gauss { re: 0, im: 1 },
            2 => Gauss { re: -1, im: 0 },
            _ => Gauss { re: 0, im: -1 },
        }
    }
}

/// `i^phase X^x Z^z` on at most 64 qubits; qubit `q` is bit `q`.
#[derive(Clone, Copy, Debug)]
struct DensePauli {
    x: u64,
    z: u64,
    phase: u32,
}

impl DensePauli {
    fn hermitian(p: &PauliWord) -> DensePauli {
        let bits = |v: &BitVector| v.iter_ones().fold(0u64, |acc, i| acc | (1 << i));
        let (x, z) = (bits(p.x_part()), bits(p.z_part()));
        // Y = i X Z
        DensePauli {
            x,
            z,
            phase: (x & z).count_ones() % 4,
        }
    }

    fn mul(self, o: DensePauli) -> DensePauli {
        // Z^z1 X^x2 = (-1)^{z1 . x2} X^x2 Z^z1
        let swap = 2 * ((self.z & o.x).count_ones() % 2);
        DensePauli {
            x: self.x ^ o.x,
            z: self.z ^ o.z,
            phase: (self.phase + o.phase + swap) % 4,
        }
    }
}

struct Dense {
    dim: usize,
    data: Vec<Gauss>,
}

impl Dense {
    fn zeros(dim: usize) -> Self {
        Dense {
            dim,
            data: vec![Gauss::ZERO; dim * dim],
        }
    }

    fn at(&self, r: usize, c: usize) -> Gauss {
        self.data[r * self.dim + c]
    }

    fn matmul(&self, o: &Dense) -> Dense {
        let n = self.dim;
        let mut out = Dense::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a == Gauss::ZERO {
                    continue;
                }
                for j in 0..n {
                    let b = o.data[k * n + j];
                    if b != Gauss::ZERO {
                        out.data[i * n + j].add_assign(a.mul(b));
                    }
                }
            }
        }
        out
    }

    fn trace(&self) -> Gauss {
        let mut t = Gauss::ZERO;
        for i in 0..self.dim {
            t.add_assign(self.at(i, i));
        }
        t
    }
}

/// `2^n rho = sum over group elements`, summed by Gray code over the generators.
fn unnormalised_state(s: &StabilizerState) -> Dense {
    let n = s.n_qubits();
    let dim = 1usize << n;
    let gens: Vec<DensePauli> = s.generators().iter().map(DensePauli::hermitian).collect();
    let mut m = Dense::zeros(dim);
    let mut cur = DensePauli {
        x: 0,
        z: 0,
        phase: 0,
    };
    for step in 0..(1u64 << gens.len()) {
        if step > 0 {
            let flip = step.trailing_zeros() as usize;
            cur = cur.mul(gens[flip]);
        }
        // i^phase X^x Z^z |j> = i^phase (-1)^{z.j} |j ^ x>
        for j in 0..dim {
            let sign = if (cur.z & j as u64).count_ones() % 2 == 1 {
                2
            } else {
                0
            };
            let row = j ^ cur.x as usize;
            m.data[row * dim + j].add_assign(Gauss::i_pow(cur.phase + sign));
        }
    }
    m
}

/// Transposes the tensor factors of the qubits in `mask`.
fn partial_transpose(m: &Dense, mask: usize) -> Dense {
    let mut out = Dense::zeros(m.dim);
    for r in 0..m.dim {
        for c in 0..m.dim {
            let r2 = (r & !mask) | (c & mask);
            let c2 = (c & !mask) | (r & mask);
            out.data[r2 * m.dim + c2] = m.at(r, c);
        }
    }
    out
}

/// `log2 || rho^{T_A} ||_1`, computed densely.
pub fn dense_negativity_oracle(s: &StabilizerState, r: &Region) -> Result<f64> {
    let n = s.n_qubits();
    if n > MAX_ORACLE_QUBITS {
        return Err(Error::OracleTooLarge {
            n,
            max: MAX_ORACLE_QUBITS,
        });
    }
    let mut mask = 0usize;
    for &v in &r.vertices {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, size: n });
        }
        mask |= 1 << v;
    }
    let m = partial_transpose(&unnormalised_state(s), mask);
    let q = m.matmul(&m);
    let q2 = q.matmul(&q);
    // Q is positive semidefinite and non-zero, so some diagonal entry is positive.
    let (k, qk) = (0..q.dim)
        .map(|i| (i, q.at(i, i)))
        .find(|(_, d)| d.re != 0)
        .ok_or_else(|| Error::Oracle("partial transpose squared to zero".into()))?;
    let q2k = q2.at(k, k);
    if q2k.re % qk.re != 0 {
        return Err(Error::Oracle("eigenvalue moduli are not uniform".into()));
    }
    let c = q2k.re / qk.re;
    let uniform = q2
        .data
        .iter()
        .zip(&q.data)
        .all(|(a, b)| a.re == c * b.re && a.im == c * b.im);
    if !uniform || c <= 0 {
        return Err(Error::Oracle("eigenvalue moduli are not uniform".into()));
    }
    let tr = q.trace();
    if tr.im != 0 || tr.re % c != 0 {
        return Err(Error::Oracle("non-integral rank".into()));
    }
    let rank = tr.re / c;
    // ||M||_1 / 2^n = rank * sqrt(c) / 2^n
    let log2 = |v: i128| -> f64 {
        if v.count_ones() == 1 {
            v.trailing_zeros() as f64
        } else {
            (v as f64).log2()
        }
    };
    Ok(log2(rank) + log2(c) / 2.0 - n as f64)
}

/// Random commuting independent generators; attempts that fail either test are discarded.
pub fn random_stabilizer_state<R: Rng>(rng: &mut R, n: usize, k: usize) -> StabilizerState {
    let mut gens: Vec<PauliWord> = Vec::new();
    let mut basis = EchelonBasis::new(2 * n);
    let mut attempts = 0;
    while gens.len() < k.min(n) && attempts < 10_000 {
        attempts += 1;
        let x = BitVector::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
        let z = BitVector::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
        let p = PauliWord::from_parts(x, z).expect("equal lengths");
        if gens.iter().all(|g| !g.anticommutes(&p)) && basis.insert(p.to_symplectic()) {
            gens.push(p);
        }
    }
    StabilizerState::new(n, gens).expect("generators are commuting and independent")
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleFailure {
    pub trial: usize,
    pub n_qubits: usize,
    pub tableau: String,
    pub region: Vec<usize>,
    pub rank_formula: f64,
    pub dense: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub trials: usize,
    pub exact: usize,
    pub seed: u64,
    pub max_qubits: usize,
    pub failures: Vec<OracleFailure>,
}

impl OracleReport {
    pub fn all_exact(&self) -> bool {
        self.exact == self.trials
    }

    pub fn summary(&self) -> String {
        format!("{}/{} exact", self.exact, self.trials)
    }
}

/// Compares the rank formula with the dense oracle on random states and regions.
pub fn oracle_check(trials: usize, max_qubits: usize, seed: u64) -> Result<OracleReport> {
    if max_qubits == 0 || max_qubits > MAX_ORACLE_QUBITS {
        return Err(Error::OracleTooLarge {
            n: max_qubits,
            max: MAX_ORACLE_QUBITS,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exact = 0;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let n = rng.random_range(1..=max_qubits);
        let k = rng.random_range(0..=n);
        let s = random_stabilizer_state(&mut rng, n, k);
        let vertices: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        let region = Region {
            name: format!("trial-{trial}"),
            vertices,
            boundary_honeycomb: 0,
            boundary_triangular: None,
            commensurate: false,
        };
        let formula: HalfInt = negativity(&s, &region)?;
        let dense = dense_negativity_oracle(&s, &region);
        match dense {
            Ok(d) if d == formula.to_f64() => exact += 1,
            other => failures.push(OracleFailure {
                trial,
                n_qubits: n,
                tableau: s.to_tableau_text(),
                region: region.vertices.clone(),
                rank_formula: formula.to_f64(),
                dense: other.as_ref().ok().copied(),
                error: other.err().map(|e| e.to_string()),
            }),
        }
    }
    Ok(OracleReport {
        trials,
        exact,
        seed,
        max_qubits,
        failures,
    })
}
