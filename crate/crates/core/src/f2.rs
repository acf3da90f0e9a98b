//! Bit-packed linear algebra over GF(2).
//!
//! Rows are packed into `u64` words. Everything else in the crate (Pauli
//! words, stabilizer tableaux, anticommutation matrices) bottoms out here.

use std::fmt;
use std::ops::BitXorAssign;

use crate::error::{Error, Result};

const WORD_BITS: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; words_for(len)],
            len,
        }
    }

    /// Builds a vector of length `len` with ones at `indices`.
    ///
    /// Panics if an index is out of range.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i),
        )
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        (self.words[i / WORD_BITS] >> (i % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(
            i < self.len,
            "bit index {i} out of range for length {}",
            self.len
        );
        self.words[i / WORD_BITS] ^= 1u64 << (i % WORD_BITS);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Parity of the bitwise AND, i.e. the standard dot product mod 2.
    pub fn dot(&self, other: &BitVector) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    /// Index of the lowest set bit, searching from word `start_word` on.
    #[inline]
    fn lowest_set_bit_from(&self, start_word: usize) -> Option<usize> {
        self.words[start_word..]
            .iter()
            .position(|w| *w != 0)
            .map(|k| {
                let w = start_word + k;
                w * WORD_BITS + self.words[w].trailing_zeros() as usize
            })
    }

    pub fn lowest_set_bit(&self) -> Option<usize> {
        self.lowest_set_bit_from(0)
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD_BITS + tz)
            })
        })
    }

    /// Keeps only the listed positions, in the order given.
    pub fn select(&self, positions: &[usize]) -> BitVector {
        BitVector::from_indices(
            positions.len(),
            positions
                .iter()
                .enumerate()
                .filter(|(_, &p)| self.get(p))
                .map(|(k, _)| k),
        )
    }

    /// Concatenates `self` followed by `other`.
    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut out = BitVector::zeros(self.len + other.len);
        out.words[..self.words.len()].copy_from_slice(&self.words);
        for i in other.iter_ones() {
            out.flip(self.len + i);
        }
        out
    }

    /// Splits into `[0, at)` and `[at, len)`.
    pub fn split_at(&self, at: usize) -> (BitVector, BitVector) {
        assert!(at <= self.len);
        let head = BitVector::from_indices(at, self.iter_ones().take_while(|&i| i < at));
        let tail = BitVector::from_indices(
            self.len - at,
            self.iter_ones().filter(|&i| i >= at).map(|i| i - at),
        );
        (head, tail)
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        debug_assert_eq!(self.len, rhs.len);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        f.write_str("]")
    }
}

/// A dense matrix over GF(2) stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    n_cols: usize,
}

impl BitMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(n_cols); n_rows],
            n_cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::from_indices(n, [i])).collect(),
            n_cols: n,
        }
    }

    /// Builds a matrix from rows that must all have length `n_cols`.
    pub fn from_rows(n_cols: usize, rows: Vec<BitVector>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != n_cols) {
            return Err(Error::LengthMismatch {
                expected: n_cols,
                found: bad.len(),
            });
        }
        Ok(Self { rows, n_cols })
    }

    /// Parses rows of `0`/`1` digits; whitespace inside a row is ignored.
    pub fn from_strs(rows: &[&str]) -> Result<Self> {
        let parsed: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .filter(|c| !c.is_whitespace())
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!("unexpected matrix digit {other:?}"))),
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let n_cols = parsed.first().map_or(0, Vec::len);
        Self::from_rows(
            n_cols,
            parsed.iter().map(|r| BitVector::from_bools(r)).collect(),
        )
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        self.rows[r].set(c, value);
    }

    pub fn push_row(&mut self, row: BitVector) -> Result<()> {
        if row.len() != self.n_cols {
            return Err(Error::LengthMismatch {
                expected: self.n_cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.n_cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.iter_ones() {
                t.rows[c].flip(r);
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.n_rows() == self.n_cols && *self == self.transpose()
    }

    /// Matrix-vector product `self * v` over GF(2).
    pub fn mul_vec(&self, v: &BitVector) -> Result<BitVector> {
        if v.len() != self.n_cols {
            return Err(Error::LengthMismatch {
                expected: self.n_cols,
                found: v.len(),
            });
        }
        Ok(BitVector::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(v))
                .map(|(i, _)| i),
        ))
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix {}x{}", self.rows.len(), self.n_cols)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

/// Incrementally built row-echelon basis, pivoting on the lowest set bit.
///
/// Each stored row has a distinct lowest set bit. Reducing a vector against
/// the basis only ever touches bits above the current pivot, so reduction is
/// a single left-to-right sweep.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    n_cols: usize,
    rows: Vec<BitVector>,
    pivot_row: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(n_cols: usize) -> Self {
        Self {
            n_cols,
            rows: Vec::new(),
            pivot_row: vec![None; n_cols],
        }
    }

    pub fn from_rows<'a>(n_cols: usize, rows: impl IntoIterator<Item = &'a BitVector>) -> Self {
        let mut basis = Self::new(n_cols);
        for r in rows {
            basis.insert(r.clone());
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    /// Reduces `v` in place; on return `v` is zero iff it was in the span.
    pub fn reduce(&self, v: &mut BitVector) {
        debug_assert_eq!(v.len(), self.n_cols);
        let mut word = 0;
        while let Some(bit) = v.lowest_set_bit_from(word) {
            match self.pivot_row[bit] {
                Some(i) => {
                    *v ^= &self.rows[i];
                    word = bit / WORD_BITS;
                }
                None => return,
            }
        }
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_zero()
    }

    /// Adds `v` to the basis. Returns `false` if it was already in the span.
    pub fn insert(&mut self, mut v: BitVector) -> bool {
        self.reduce(&mut v);
        match v.lowest_set_bit() {
            Some(bit) => {
                self.pivot_row[bit] = Some(self.rows.len());
                self.rows.push(v);
                true
            }
            None => false,
        }
    }
}

/// Dimension of the row space of `m`.
pub fn rank_f2(m: &BitMatrix) -> usize {
    EchelonBasis::from_rows(m.n_cols(), m.rows()).rank()
}

/// Reduced row-echelon form over GF(2) and its (strictly increasing) pivot columns.
///
/// Zero rows are kept at the bottom so the shape of the input is preserved.
pub fn rref_f2(m: &BitMatrix) -> (BitMatrix, Vec<usize>) {
    let mut rows = m.rows.clone();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.n_cols {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                *row ^= &pivot;
            }
        }
        pivots.push(col);
        next += 1;
    }
    (
        BitMatrix {
            rows,
            n_cols: m.n_cols,
        },
        pivots,
    )
}

/// Is `v` a GF(2) combination of the rows of `m`?
pub fn in_row_space(m: &BitMatrix, v: &BitVector) -> Result<bool> {
    if v.len() != m.n_cols() {
        return Err(Error::LengthMismatch {
            expected: m.n_cols(),
            found: v.len(),
        });
    }
    Ok(EchelonBasis::from_rows(m.n_cols(), m.rows()).contains(v))
}

/// Basis of the right null space `{ x : m x = 0 }`, one basis vector per row.
pub fn kernel_f2(m: &BitMatrix) -> BitMatrix {
    let (reduced, pivots) = rref_f2(m);
    let n = m.n_cols();
    let mut is_pivot = vec![false; n];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let rows = (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = BitVector::from_indices(n, [free]);
            for (i, &p) in pivots.iter().enumerate() {
                if reduced.get(i, free) {
                    x.flip(p);
                }
            }
            x
        })
        .collect();
    BitMatrix { rows, n_cols: n }
}

/// Basis of the left null space, expressed as coefficient vectors over the rows.
///
/// Each returned vector `c` (length `m.n_rows()`) satisfies `sum_i c_i m_i = 0`.
pub fn left_kernel_f2(m: &BitMatrix) -> BitMatrix {
    kernel_f2(&m.transpose())
}
