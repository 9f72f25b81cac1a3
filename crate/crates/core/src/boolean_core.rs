//! Dense truth tables for switching functions.
//!
//! A table over `n` variables stores `2^n` bits. Row `j` assigns `X_1..X_n`
//! the binary digits of `j` with `X_1` as the most significant digit, so
//! variable `i` (1-based) sits at bit position `n - i` of the row number.
//! Rows are packed little-endian into `u64` words: row `j` is bit `j % 64`
//! of word `j / 64`. Bits past row `2^n - 1` in the last word are always 0.
//!
//! Every other representation in the crate (cubes, symmetric functions,
//! threshold systems) is checked against these tables.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Largest variable count supported by dense tables (2^24 bits = 2 MiB).
pub const N_MAX: usize = 24;

/// `MASKS[k]` selects the low `2^k` bits of every `2^(k+1)`-bit block.
const MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

fn word_count(n: usize) -> usize {
    if n <= 6 {
        1
    } else {
        1 << (n - 6)
    }
}

fn tail_mask(n: usize) -> u64 {
    if n >= 6 {
        !0
    } else {
        (1u64 << (1u32 << n)) - 1
    }
}

/// Packs the bits selected by `MASKS[p]` into the low 32 bits, preserving order.
fn compress(mut x: u64, p: usize) -> u64 {
    for k in p..5 {
        x = (x | (x >> (1u32 << k))) & MASKS[k + 1];
    }
    x
}

/// Pointwise binary connectives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Connective {
    And,
    Or,
    Xor,
}

impl Connective {
    #[inline]
    fn apply(self, a: u64, b: u64) -> u64 {
        match self {
            Connective::And => a & b,
            Connective::Or => a | b,
            Connective::Xor => a ^ b,
        }
    }
}

/// The output column of a switching function's truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruthTable {
    n: usize,
    words: Vec<u64>,
}

impl TruthTable {
    fn check_arity(n: usize) -> Result<()> {
        if n > N_MAX {
            Err(Error::ArityTooLarge { n, max: N_MAX })
        } else {
            Ok(())
        }
    }

    /// Builds a table from raw words; the tail is masked off.
    pub(crate) fn from_words(n: usize, mut words: Vec<u64>) -> TruthTable {
        debug_assert_eq!(words.len(), word_count(n));
        if let Some(last) = words.last_mut() {
            *last &= tail_mask(n);
        }
        TruthTable { n, words }
    }

    /// The constant function `value` over `n` variables.
    pub fn constant(n: usize, value: bool) -> Result<TruthTable> {
        Self::check_arity(n)?;
        let fill = if value { !0 } else { 0 };
        Ok(Self::from_words(n, vec![fill; word_count(n)]))
    }

    /// The projection `f(X) = X_i`.
    pub fn variable(n: usize, i: usize) -> Result<TruthTable> {
        Self::check_arity(n)?;
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
        let p = n - i;
        Ok(Self::from_fn_unchecked(n, |row| (row >> p) & 1 == 1))
    }

    /// Evaluates `f` on every row number `0..2^n`.
    pub fn from_fn(n: usize, f: impl FnMut(usize) -> bool) -> Result<TruthTable> {
        Self::check_arity(n)?;
        Ok(Self::from_fn_unchecked(n, f))
    }

    fn from_fn_unchecked(n: usize, mut f: impl FnMut(usize) -> bool) -> TruthTable {
        let mut words = vec![0u64; word_count(n)];
        for row in 0..(1usize << n) {
            if f(row) {
                words[row >> 6] |= 1 << (row & 63);
            }
        }
        TruthTable { n, words }
    }

    /// Builds a table from bits listed in row order.
    pub fn from_bits(bits: &[bool]) -> Result<TruthTable> {
        let len = bits.len();
        if !len.is_power_of_two() {
            return Err(Error::BadTable(format!(
                "length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        Self::from_fn(n, |row| bits[row])
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn num_rows(&self) -> usize {
        1 << self.n
    }

    /// Value at row `row`.
    pub fn get(&self, row: usize) -> bool {
        assert!(row < self.num_rows(), "row {row} out of range");
        (self.words[row >> 6] >> (row & 63)) & 1 == 1
    }

    /// Evaluates the function at an explicit assignment `x[0] = X_1, ..`.
    pub fn eval(&self, x: &[bool]) -> Result<bool> {
        if x.len() != self.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: x.len(),
            });
        }
        let row = x.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        Ok(self.get(row))
    }

    /// Iterator over the rows on which the function is 1.
    pub fn true_rows(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some((w << 6) | b)
                }
            })
        })
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        let last = self.words.len() - 1;
        self.words[..last].iter().all(|&w| w == !0) && self.words[last] == tail_mask(self.n)
    }

    fn check_index(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n,
            })
        } else {
            Ok(self.n - i)
        }
    }

    /// Splits the table on `X_i` and combines the `X_i = 0` half with the
    /// `X_i = 1` half cell-wise, yielding an `(n-1)`-variable table.
    fn fold(&self, i: usize, op: impl Fn(u64, u64) -> u64) -> Result<TruthTable> {
        let p = self.check_index(i)?;
        let out_n = self.n - 1;
        let mut out = Vec::with_capacity(word_count(out_n));
        if p >= 6 {
            let block = 1usize << (p - 6);
            for chunk in self.words.chunks(2 * block) {
                let (lo, hi) = chunk.split_at(block);
                out.extend(lo.iter().zip(hi).map(|(&a, &b)| op(a, b)));
            }
        } else {
            let shift = 1u32 << p;
            let mask = MASKS[p];
            let mut halves = self
                .words
                .iter()
                .map(|&w| compress(op(w & mask, (w >> shift) & mask) & mask, p));
            if self.words.len() == 1 {
                out.push(halves.next().unwrap_or(0));
            } else {
                while let (Some(a), Some(b)) = (halves.next(), halves.next()) {
                    out.push(a | (b << 32));
                }
            }
        }
        Ok(Self::from_words(out_n, out))
    }

    /// The subfunction `f(X | X_i = value)` over the remaining `n-1`
    /// variables, which keep their relative order.
    pub fn restrict(&self, i: usize, value: bool) -> Result<TruthTable> {
        if value {
            self.fold(i, |_, hi| hi)
        } else {
            self.fold(i, |lo, _| lo)
        }
    }

    /// `∂f/∂X_i = f(X|X_i=0) ⊕ f(X|X_i=1)`, an `(n-1)`-variable table.
    pub fn boolean_difference(&self, i: usize) -> Result<TruthTable> {
        self.fold(i, |lo, hi| lo ^ hi)
    }

    /// Pointwise combination of two tables of equal arity.
    pub fn connective(&self, other: &TruthTable, op: Connective) -> Result<TruthTable> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| op.apply(a, b))
            .collect();
        Ok(Self::from_words(self.n, words))
    }

    pub fn and(&self, other: &TruthTable) -> Result<TruthTable> {
        self.connective(other, Connective::And)
    }

    pub fn or(&self, other: &TruthTable) -> Result<TruthTable> {
        self.connective(other, Connective::Or)
    }

    pub fn xor(&self, other: &TruthTable) -> Result<TruthTable> {
        self.connective(other, Connective::Xor)
    }

    pub fn complement(&self) -> TruthTable {
        Self::from_words(self.n, self.words.iter().map(|&w| !w).collect())
    }

    /// Number of true rows.
    pub fn weight(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// `weight / 2^n`.
    pub fn syndrome(&self) -> Ratio<u64> {
        Ratio::new(self.weight(), 1u64 << self.n)
    }

    /// `f(X|X_i=1) >= f(X|X_i=0)` for every variable.
    pub fn is_monotone(&self) -> bool {
        (1..=self.n).all(|i| {
            self.fold(i, |lo, hi| lo & !hi)
                .map(|t| t.is_zero())
                .unwrap_or(false)
        })
    }

    /// `f(0) = 0` and `f(1) = 1`.
    pub fn is_causal(&self) -> bool {
        !self.get(0) && self.get(self.num_rows() - 1)
    }

    /// True iff the function does not depend on `X_i`.
    pub fn is_vacuous_in(&self, i: usize) -> Result<bool> {
        Ok(self.boolean_difference(i)?.is_zero())
    }

    /// Indices (1-based) of every variable the function ignores.
    pub fn vacuous_vars(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&i| {
                self.fold(i, |lo, hi| lo ^ hi)
                    .map(|t| t.is_zero())
                    .unwrap_or(false)
            })
            .collect()
    }

    /// Drops every vacuous variable. Returns the reduced table and the
    /// original indices of the variables it keeps, in order.
    pub fn essential_support(&self) -> (TruthTable, Vec<usize>) {
        let vacuous = self.vacuous_vars();
        let mut table = self.clone();
        for &i in vacuous.iter().rev() {
            table = table.restrict(i, false).expect("index in range");
        }
        let kept = (1..=self.n).filter(|i| !vacuous.contains(i)).collect();
        (table, kept)
    }

    /// True iff exchanging `X_i` and `X_j` leaves the function unchanged.
    ///
    /// Compares the cofactors `(X_i, X_j) = (0, 1)` and `(1, 0)`; rows with
    /// `X_i = X_j` are fixed by the transposition.
    pub fn is_symmetric_in(&self, i: usize, j: usize) -> Result<bool> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Ok(true);
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        let a0b1 = self.restrict(b, true)?.restrict(a, false)?;
        let a1b0 = self.restrict(b, false)?.restrict(a, true)?;
        Ok(a0b1 == a1b0)
    }

    /// The function with `X_i` and `X_j` exchanged.
    pub fn swap_vars(&self, i: usize, j: usize) -> Result<TruthTable> {
        let pi = self.check_index(i)?;
        let pj = self.check_index(j)?;
        Ok(Self::from_fn_unchecked(self.n, |row| {
            let bi = (row >> pi) & 1;
            let bj = (row >> pj) & 1;
            let swapped = if bi == bj {
                row
            } else {
                row ^ (1 << pi) ^ (1 << pj)
            };
            self.get(swapped)
        }))
    }
}

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({self})")
    }
}

/// `n=<k>` on the first line, then `2^k` characters `0`/`1` in row order.
impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        let bits: String = (0..self.num_rows())
            .map(|r| if self.get(r) { '1' } else { '0' })
            .collect();
        f.write_str(&bits)
    }
}

impl FromStr for TruthTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<TruthTable> {
        let s = s.trim_start();
        let rest = s
            .strip_prefix("n=")
            .ok_or_else(|| Error::BadTable("missing `n=` header".into()))?;
        let digits_end = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        let n: usize = rest[..digits_end]
            .parse()
            .map_err(|_| Error::BadTable("bad variable count".into()))?;
        Self::check_arity(n)?;
        let mut bits = Vec::with_capacity(1 << n);
        for c in rest[digits_end..].chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(Error::BadTable(format!("unexpected character `{c}`"))),
            }
        }
        if bits.len() != 1 << n {
            return Err(Error::BadTable(format!(
                "expected {} bits for n={n}, found {}",
                1usize << n,
                bits.len()
            )));
        }
        Self::from_bits(&bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_of_three() -> TruthTable {
        TruthTable::from_fn(3, |r| r.count_ones() >= 2).unwrap()
    }

    fn eec() -> TruthTable {
        let w = [4u32, 4, 4, 2, 2, 1];
        TruthTable::from_fn(6, |r| {
            (0..6)
                .map(|k| if (r >> (5 - k)) & 1 == 1 { w[k] } else { 0 })
                .sum::<u32>()
                >= 12
        })
        .unwrap()
    }

    /// Per-row reference restriction, independent of the word-level fold.
    fn restrict_slow(f: &TruthTable, i: usize, v: bool) -> TruthTable {
        let n = f.num_vars();
        let p = n - i;
        TruthTable::from_fn(n - 1, |r| {
            let high = (r >> p) << (p + 1);
            let low = r & ((1 << p) - 1);
            f.get(high | ((v as usize) << p) | low)
        })
        .unwrap()
    }

    fn arb_table(max_n: usize) -> impl Strategy<Value = TruthTable> {
        (0..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), 1 << n)
                .prop_map(|bits| TruthTable::from_bits(&bits).unwrap())
        })
    }

    #[test]
    fn restrict_two_of_three_gives_or() {
        let r = two_of_three().restrict(1, true).unwrap();
        assert_eq!(r.num_vars(), 2);
        assert_eq!(r, TruthTable::from_fn(2, |r| r != 0).unwrap());
        assert_eq!(r.weight(), 3);
    }

    #[test]
    fn restrict_constant() {
        let one = TruthTable::constant(3, true).unwrap();
        assert_eq!(
            one.restrict(2, false).unwrap(),
            TruthTable::constant(2, true).unwrap()
        );
    }

    #[test]
    fn eec_cofactors_on_l_agree() {
        let f = eec();
        assert_eq!(f.restrict(6, false).unwrap(), f.restrict(6, true).unwrap());
        assert!(f.is_vacuous_in(6).unwrap());
        assert_eq!(f.vacuous_vars(), vec![6]);
    }

    #[test]
    fn restrict_rejects_bad_index() {
        let f = two_of_three();
        assert_eq!(
            f.restrict(0, true),
            Err(Error::IndexOutOfRange { index: 0, n: 3 })
        );
        assert_eq!(
            f.restrict(4, true),
            Err(Error::IndexOutOfRange { index: 4, n: 3 })
        );
        let z = TruthTable::constant(0, true).unwrap();
        assert!(z.boolean_difference(1).is_err());
    }

    #[test]
    fn derivative_of_two_of_three() {
        let d = two_of_three().boolean_difference(1).unwrap();
        // Sy(2;{1}): exactly one of X2, X3.
        assert_eq!(d, TruthTable::from_fn(2, |r| r.count_ones() == 1).unwrap());
        assert_eq!(d.weight(), 2);
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        for v in [false, true] {
            let c = TruthTable::constant(4, v).unwrap();
            for i in 1..=4 {
                assert!(c.boolean_difference(i).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn connective_and_complement() {
        let zero = TruthTable::constant(4, false).unwrap();
        assert_eq!(zero.complement().weight(), 16);
        assert!(zero.complement().is_one());
        let f = eec();
        assert!(f.xor(&f).unwrap().is_zero());
        assert_eq!(two_of_three().complement().weight(), 4);
        assert_eq!(
            f.and(&two_of_three()),
            Err(Error::ArityMismatch { left: 6, right: 3 })
        );
    }

    #[test]
    fn weights_and_syndrome() {
        assert_eq!(two_of_three().weight(), 4);
        assert_eq!(TruthTable::constant(7, false).unwrap().weight(), 0);
        // 64-row enumeration of (12; 4,4,4,2,2,1).
        assert_eq!(eec().weight(), 14);
        assert_eq!(two_of_three().syndrome(), Ratio::new(1, 2));
        assert_eq!(
            TruthTable::constant(5, true).unwrap().syndrome(),
            Ratio::from_integer(1)
        );
        assert_eq!(
            TruthTable::constant(5, false).unwrap().syndrome(),
            Ratio::from_integer(0)
        );
    }

    #[test]
    fn structure_checks() {
        let f = eec();
        assert!(f.is_monotone());
        assert!(f.is_causal());
        assert!(!TruthTable::constant(3, false).unwrap().is_causal());
        let x1bar = TruthTable::variable(2, 1).unwrap().complement();
        assert!(!x1bar.is_monotone());
    }

    #[test]
    fn text_round_trip() {
        let f = two_of_three();
        let s = f.to_string();
        assert_eq!(s, "n=3\n00010111");
        assert_eq!(s.parse::<TruthTable>().unwrap(), f);
        assert!("n=2\n010".parse::<TruthTable>().is_err());
        assert!("n=1\n0x".parse::<TruthTable>().is_err());
        assert!("2\n0101".parse::<TruthTable>().is_err());
    }

    #[test]
    fn arity_limit() {
        assert_eq!(
            TruthTable::constant(N_MAX + 1, false),
            Err(Error::ArityTooLarge {
                n: N_MAX + 1,
                max: N_MAX
            })
        );
    }

    #[test]
    fn symmetry_by_transposition() {
        let f = eec();
        assert!(f.is_symmetric_in(1, 3).unwrap());
        assert!(f.is_symmetric_in(4, 5).unwrap());
        assert!(!f.is_symmetric_in(1, 4).unwrap());
    }

    #[test]
    fn large_table_fold_matches_slow_path() {
        let f = TruthTable::from_fn(12, |r| (r.wrapping_mul(2654435761) >> 7) & 1 == 1).unwrap();
        for i in 1..=12 {
            for v in [false, true] {
                assert_eq!(
                    f.restrict(i, v).unwrap(),
                    restrict_slow(&f, i, v),
                    "i={i} v={v}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn fold_matches_per_row_restriction(f in arb_table(9), i in 1usize..=9, v: bool) {
            prop_assume!(i <= f.num_vars());
            prop_assert_eq!(f.restrict(i, v).unwrap(), restrict_slow(&f, i, v));
        }

        #[test]
        fn cofactor_weights_add_up(f in arb_table(9), i in 1usize..=9) {
            prop_assume!(i <= f.num_vars());
            let w0 = f.restrict(i, false).unwrap().weight();
            let w1 = f.restrict(i, true).unwrap().weight();
            prop_assert_eq!(w0 + w1, f.weight());
        }

        #[test]
        fn complement_weight(f in arb_table(10)) {
            prop_assert_eq!(f.complement().weight(), (1u64 << f.num_vars()) - f.weight());
        }

        #[test]
        fn symmetric_in_matches_swap(f in arb_table(6), i in 1usize..=6, j in 1usize..=6) {
            prop_assume!(i <= f.num_vars() && j <= f.num_vars());
            let by_swap = f.swap_vars(i, j).unwrap() == f;
            prop_assert_eq!(f.is_symmetric_in(i, j).unwrap(), by_swap);
        }

        #[test]
        fn true_rows_match_get(f in arb_table(8)) {
            let rows: Vec<usize> = f.true_rows().collect();
            let expected: Vec<usize> = (0..f.num_rows()).filter(|&r| f.get(r)).collect();
            prop_assert_eq!(rows, expected);
        }
    }
}
