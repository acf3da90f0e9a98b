//! Negativity of stabilizer mixed states from the rank of truncated-generator commutators.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::f2::{rank_f2, BitMatrix, BitVector};
use crate::pauli::{PauliWord, StabilizerState};
use crate::region::{Region, TenComplex};

/// An exact multiple of 1/2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + o.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, o: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - o.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}", self.to_f64())
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.to_f64())
    }
}

/// Restriction of a generator to a region, in the region's vertex order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedGenerator(pub PauliWord);

pub fn truncate(g: &PauliWord, r: &Region) -> Result<TruncatedGenerator> {
    if let Some(&v) = r.vertices.last() {
        if v >= g.n_qubits() {
            return Err(Error::IndexOutOfRange {
                index: v,
                size: g.n_qubits(),
            });
        }
    }
    Ok(TruncatedGenerator(g.restrict(&r.vertices)))
}

fn region_mask(n: usize, r: &Region) -> Result<BitVector> {
    if let Some(&v) = r.vertices.last() {
        if v >= n {
            return Err(Error::IndexOutOfRange { index: v, size: n });
        }
    }
    Ok(BitVector::from_indices(n, r.vertices.iter().copied()))
}

/// Generators with non-trivial truncation, truncated.
///
/// Generators acting as identity on the region only add zero rows and columns to K.
fn truncated_touching(s: &StabilizerState, r: &Region) -> Result<Vec<PauliWord>> {
    let mask = region_mask(s.n_qubits(), r)?;
    let touches = |g: &PauliWord| {
        g.x_part()
            .words()
            .iter()
            .zip(g.z_part().words())
            .zip(mask.words())
            .any(|((x, z), m)| (x | z) & m != 0)
    };
    Ok(s.generators()
        .iter()
        .filter(|g| touches(g))
        .map(|g| g.restrict(&r.vertices))
        .collect())
}

fn anticommutation_matrix(gens: &[PauliWord]) -> BitMatrix {
    let m = gens.len();
    let mut k = BitMatrix::zeros(m, m);
    for i in 0..m {
        for j in (i + 1)..m {
            if gens[i].anticommutes(&gens[j]) {
                k.set(i, j, true);
                k.set(j, i, true);
            }
        }
    }
    k
}

/// Full `m x m` anticommutation matrix of the truncated generators.
pub fn k_matrix(s: &StabilizerState, r: &Region) -> Result<BitMatrix> {
    let truncated = s
        .generators()
        .iter()
        .map(|g| truncate(g, r).map(|t| t.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(anticommutation_matrix(&truncated))
}

/// Logarithmic (base 2) negativity: half the rank of K.
pub fn negativity(s: &StabilizerState, r: &Region) -> Result<HalfInt> {
    let gens = truncated_touching(s, r)?;
    let rank = rank_f2(&anticommutation_matrix(&gens));
    Ok(HalfInt::from_twice(rank as i64))
}

/// Negativity recomputed on a reduced-row-echelon generator basis of the same group.
pub fn negativity_canonical(s: &StabilizerState, r: &Region) -> Result<HalfInt> {
    let basis = s
        .basis()
        .rows()
        .iter()
        .map(PauliWord::from_symplectic)
        .collect::<Result<Vec<_>>>()?;
    let canon = StabilizerState::from_generators_unchecked(s.n_qubits(), basis);
    negativity(&canon, r)
}

/// Topological negativity `N_AB + N_BC + N_AC - N_A - N_B - N_C - N_ABC`.
pub fn ten(s: &StabilizerState, c: &TenComplex) -> Result<HalfInt> {
    let n = |r: &Region| negativity(s, r);
    Ok(n(&c.ab)? + n(&c.bc)? + n(&c.ac)? - n(&c.a)? - n(&c.b)? - n(&c.c)? - n(&c.abc)?)
}

/// `-log2 tr rho^2`: qubits minus independent generators.
pub fn log_purity(s: &StabilizerState) -> usize {
    s.n_qubits() - s.basis().rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::apply_maximal;
    use crate::lattice::{Color, HoneycombTorus};
    use crate::pauli::color_code_state;
    use crate::region::{ten_complex, RegionPreset};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn region(n: usize, vs: &[usize]) -> Region {
        Region {
            name: "test".into(),
            vertices: {
                let mut v = vs.to_vec();
                v.sort_unstable();
                v.dedup();
                assert!(v.iter().all(|&x| x < n));
                v
            },
            boundary_honeycomb: 0,
            boundary_triangular: None,
            commensurate: false,
        }
    }

    fn bell() -> StabilizerState {
        StabilizerState::new(2, vec!["XX".parse().unwrap(), "ZZ".parse().unwrap()]).unwrap()
    }

    #[test]
    fn half_int_display_and_arith() {
        assert_eq!(HalfInt::from_twice(7).to_string(), "3.5");
        assert_eq!(HalfInt::from_twice(-3).to_string(), "-1.5");
        assert_eq!(HalfInt::from_int(4).to_string(), "4");
        assert_eq!(
            HalfInt::from_int(2) - HalfInt::from_twice(1),
            HalfInt::from_twice(3)
        );
        assert_eq!(
            serde_json::to_string(&HalfInt::from_twice(5)).unwrap(),
            "2.5"
        );
    }

    #[test]
    fn truncation_examples() {
        let p: PauliWord = "XYZIX".parse().unwrap();
        assert_eq!(truncate(&p, &region(5, &[0, 1, 2, 3, 4])).unwrap().0, p);
        assert_eq!(truncate(&p, &region(5, &[])).unwrap().0.n_qubits(), 0);
        assert_eq!(
            truncate(&p, &region(5, &[1, 3])).unwrap().0.to_string(),
            "YI"
        );
        let t = HoneycombTorus::new(6, 6).unwrap();
        let plaq = crate::pauli::plaquette_operator(&t, crate::pauli::PauliKind::Z, 0).unwrap();
        let vs = t.plaquettes()[0].vertices;
        let r = region(t.n_vertices(), &[vs[0], vs[3], 40]);
        assert_eq!(truncate(&plaq, &r).unwrap().0.weight(), 2);
        assert!(truncate(&p, &region(9, &[8])).is_err());
    }

    #[test]
    fn bell_pair() {
        let s = bell();
        let r = region(2, &[0]);
        let k = k_matrix(&s, &r).unwrap();
        assert_eq!(k, BitMatrix::from_strs(&["01", "10"]).unwrap());
        assert_eq!(negativity(&s, &r).unwrap(), HalfInt::from_int(1));
        assert_eq!(negativity(&s, &region(2, &[])).unwrap(), HalfInt::ZERO);
        assert_eq!(negativity(&s, &region(2, &[0, 1])).unwrap(), HalfInt::ZERO);
    }

    #[test]
    fn purity_examples() {
        assert_eq!(log_purity(&bell()), 0);
        assert_eq!(log_purity(&StabilizerState::maximally_mixed(3)), 3);
        let t = HoneycombTorus::new(6, 6).unwrap();
        let s = color_code_state(&t);
        assert_eq!(log_purity(&s), 4);
        assert_eq!(log_purity(&apply_maximal(&s, &t)), 13);
    }

    #[test]
    fn fig2_values() {
        let t = HoneycombTorus::new(12, 12).unwrap();
        let s = color_code_state(&t);
        let r = RegionPreset::Fig2Parallelogram.build(&t).unwrap();
        assert_eq!(negativity(&s, &r).unwrap(), HalfInt::from_int(8));
        let d = apply_maximal(&s, &t);
        assert_eq!(negativity(&d, &r).unwrap(), HalfInt::from_int(7));
        assert_eq!(negativity_canonical(&d, &r).unwrap(), HalfInt::from_int(7));
        // full region
        let all = region(t.n_vertices(), &(0..t.n_vertices()).collect::<Vec<_>>());
        assert_eq!(negativity(&s, &all).unwrap(), HalfInt::ZERO);
        let k = k_matrix(&s, &all).unwrap();
        assert!(k.rows().iter().all(|r| r.is_zero()));
    }

    #[test]
    fn ten_7_endpoints() {
        let t = HoneycombTorus::new(24, 24).unwrap();
        let s = color_code_state(&t);
        let d = apply_maximal(&s, &t);
        for color in Color::ALL {
            let c = ten_complex(&t, 7, color).unwrap();
            assert_eq!(ten(&s, &c).unwrap(), HalfInt::from_int(2), "{color}");
            assert_eq!(ten(&d, &c).unwrap(), HalfInt::from_int(1), "{color}");
        }
        let empty = StabilizerState::maximally_mixed(t.n_vertices());
        assert_eq!(
            ten(&empty, &ten_complex(&t, 7, Color::Red).unwrap()).unwrap(),
            HalfInt::ZERO
        );
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize, k: usize) -> StabilizerState {
        let mut gens: Vec<PauliWord> = Vec::new();
        let mut basis = crate::f2::EchelonBasis::new(2 * n);
        let mut tries = 0;
        while gens.len() < k && tries < 1000 {
            tries += 1;
            let x = BitVector::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
            let z = BitVector::from_indices(n, (0..n).filter(|_| rng.random_bool(0.5)));
            let p = PauliWord::from_parts(x, z).unwrap();
            if gens.iter().all(|g| !g.anticommutes(&p)) && basis.insert(p.to_symplectic()) {
                gens.push(p);
            }
        }
        StabilizerState::new(n, gens).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn complement_symmetry(seed in any::<u64>(), n in 2usize..12, k in 0usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_state(&mut rng, n, k.min(n));
            let vs: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            let r = region(n, &vs);
            let comp = region(n, &(0..n).filter(|v| !vs.contains(v)).collect::<Vec<_>>());
            prop_assert_eq!(negativity(&s, &r).unwrap(), negativity(&s, &comp).unwrap());
            prop_assert_eq!(negativity(&s, &r).unwrap(), negativity_canonical(&s, &r).unwrap());
            let kfull = k_matrix(&s, &r).unwrap();
            prop_assert!(kfull.is_symmetric());
            prop_assert_eq!(HalfInt::from_twice(rank_f2(&kfull) as i64), negativity(&s, &r).unwrap());
        }
    }
}
