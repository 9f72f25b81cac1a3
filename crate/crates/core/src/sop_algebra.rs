//! Cubes and sum-of-products expressions.
//!
//! A [`Cube`] is a product of literals stored as two bitmasks: bit `i - 1`
//! of `pos` marks an uncomplemented `X_i`, bit `i - 1` of `neg` a
//! complemented one. The zero product (a variable in both masks) is never
//! stored; operations that could produce it return `None` instead.
//!
//! Weights can be computed three ways: summing `2^(n - ℓ)` over a disjoint
//! cover, inclusion-exclusion over an arbitrary cover, or evaluating the
//! real transform at the all-½ point.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::boolean_core::{TruthTable, N_MAX};
use crate::error::{Error, Result};

/// Variable limit for cube expressions (one bit per variable).
pub const MAX_SOP_VARS: usize = 64;

/// Inclusion-exclusion enumerates `2^m` subsets; refuse beyond this many cubes.
pub const IE_MAX_CUBES: usize = 20;

fn var_mask(n: usize) -> u64 {
    if n >= 64 {
        !0
    } else {
        (1u64 << n) - 1
    }
}

fn bit_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b + 1)
        }
    })
}

/// A product term: uncomplemented literals `pos`, complemented literals `neg`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cube {
    pos: u64,
    neg: u64,
}

impl Cube {
    /// The empty product, constant 1.
    pub const ONE: Cube = Cube { pos: 0, neg: 0 };

    /// Builds `Π_{i∈pos} X_i · Π_{i∈neg} X̄_i` from 1-based indices.
    /// Returns `None` for the zero product.
    ///
    /// # Panics
    /// If an index is 0 or exceeds [`MAX_SOP_VARS`].
    pub fn new(pos: &[usize], neg: &[usize]) -> Option<Cube> {
        let mask = |idx: &[usize]| {
            idx.iter().fold(0u64, |m, &i| {
                assert!(
                    (1..=MAX_SOP_VARS).contains(&i),
                    "variable index {i} out of range"
                );
                m | 1 << (i - 1)
            })
        };
        Self::from_masks(mask(pos), mask(neg))
    }

    pub fn from_masks(pos: u64, neg: u64) -> Option<Cube> {
        (pos & neg == 0).then_some(Cube { pos, neg })
    }

    /// A single literal `X_i` or `X̄_i`.
    pub fn literal(i: usize, positive: bool) -> Cube {
        assert!(
            (1..=MAX_SOP_VARS).contains(&i),
            "variable index {i} out of range"
        );
        let bit = 1u64 << (i - 1);
        if positive {
            Cube { pos: bit, neg: 0 }
        } else {
            Cube { pos: 0, neg: bit }
        }
    }

    pub fn pos_mask(&self) -> u64 {
        self.pos
    }

    pub fn neg_mask(&self) -> u64 {
        self.neg
    }

    /// Uncomplemented variable indices, ascending.
    pub fn positives(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.pos)
    }

    /// Complemented variable indices, ascending.
    pub fn negatives(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.neg)
    }

    /// Number of literals `ℓ`.
    pub fn literal_count(&self) -> u32 {
        (self.pos | self.neg).count_ones()
    }

    /// Largest variable index used, 0 for the constant-1 cube.
    pub fn max_var(&self) -> usize {
        64 - (self.pos | self.neg).leading_zeros() as usize
    }

    pub fn conjoin(&self, other: &Cube) -> Option<Cube> {
        Self::from_masks(self.pos | other.pos, self.neg | other.neg)
    }

    /// True iff some variable appears with opposite polarity in the two cubes.
    pub fn is_disjoint_from(&self, other: &Cube) -> bool {
        (self.pos & other.neg) | (self.neg & other.pos) != 0
    }

    /// True iff every point of `self` lies in `other`.
    pub fn implies(&self, other: &Cube) -> bool {
        other.pos & !self.pos == 0 && other.neg & !self.neg == 0
    }

    /// Value at an assignment given as a bitmask (bit `i - 1` is `X_i`).
    pub fn eval_mask(&self, x: u64) -> bool {
        x & self.pos == self.pos && x & self.neg == 0
    }

    /// `self · ¬other` as pairwise disjoint cubes, expanding the complement
    /// of `other` one variable at a time in ascending index order.
    pub fn sharp(&self, other: &Cube) -> Vec<Cube> {
        if self.is_disjoint_from(other) {
            return vec![*self];
        }
        let missing_pos = other.pos & !self.pos;
        let missing_neg = other.neg & !self.neg;
        let mut acc = *self;
        let mut out = Vec::new();
        for i in bit_indices(missing_pos | missing_neg) {
            let bit = 1u64 << (i - 1);
            let positive = missing_pos & bit != 0;
            let (flip, keep) = if positive {
                (
                    Cube {
                        pos: acc.pos,
                        neg: acc.neg | bit,
                    },
                    Cube {
                        pos: acc.pos | bit,
                        neg: acc.neg,
                    },
                )
            } else {
                (
                    Cube {
                        pos: acc.pos | bit,
                        neg: acc.neg,
                    },
                    Cube {
                        pos: acc.pos,
                        neg: acc.neg | bit,
                    },
                )
            };
            out.push(flip);
            acc = keep;
        }
        out
    }

    fn render(&self, names: &[String]) -> String {
        if self.pos | self.neg == 0 {
            return "1".to_string();
        }
        bit_indices(self.pos | self.neg)
            .map(|i| {
                let name = &names[i - 1];
                if self.neg & (1 << (i - 1)) != 0 {
                    format!("{name}'")
                } else {
                    name.clone()
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `2^(n - ℓ(c))`, the number of minterms of `c` over `n` variables.
pub fn cube_weight(c: &Cube, n: usize) -> u128 {
    debug_assert!(c.max_var() <= n);
    1u128 << (n - c.literal_count() as usize)
}

/// An ordered disjunction of cubes over `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SopExpr {
    n: usize,
    cubes: Vec<Cube>,
    disjoint: bool,
}

impl SopExpr {
    /// Validates indices against `n` and certifies disjointness by pairwise test.
    pub fn new(n: usize, cubes: Vec<Cube>) -> Result<SopExpr> {
        if n > MAX_SOP_VARS {
            return Err(Error::ArityTooLarge {
                n,
                max: MAX_SOP_VARS,
            });
        }
        if let Some(c) = cubes.iter().find(|c| c.max_var() > n) {
            return Err(Error::IndexOutOfRange {
                index: c.max_var(),
                n,
            });
        }
        let disjoint = pairwise_disjoint(&cubes);
        Ok(SopExpr { n, cubes, disjoint })
    }

    /// For covers that are disjoint by construction.
    fn certified(n: usize, cubes: Vec<Cube>) -> SopExpr {
        debug_assert!(cubes.len() > 2000 || pairwise_disjoint(&cubes));
        SopExpr {
            n,
            cubes,
            disjoint: true,
        }
    }

    /// The constant-0 expression.
    pub fn empty(n: usize) -> SopExpr {
        SopExpr {
            n,
            cubes: Vec::new(),
            disjoint: true,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    /// Disjointness certificate.
    pub fn is_disjoint(&self) -> bool {
        self.disjoint
    }

    /// Re-checks the certificate from scratch.
    pub fn verify_disjoint(&self) -> bool {
        pairwise_disjoint(&self.cubes)
    }

    /// Parses `text` against the declared variable names; see [`parse_sop`].
    pub fn parse<S: AsRef<str>>(text: &str, names: &[S]) -> Result<SopExpr> {
        parse_sop(text, names)
    }

    /// Sequential disjointing: cube `k` is replaced by its products with the
    /// expanded complements of cubes `1..k-1`, in list order.
    pub fn make_disjoint(&self) -> SopExpr {
        if self.disjoint {
            return self.clone();
        }
        let mut out = Vec::new();
        for (k, cube) in self.cubes.iter().enumerate() {
            let mut pieces = vec![*cube];
            for earlier in &self.cubes[..k] {
                if pieces.is_empty() {
                    break;
                }
                pieces = pieces.iter().flat_map(|p| p.sharp(earlier)).collect();
            }
            out.extend(pieces);
        }
        Self::certified(self.n, out)
    }

    /// Disjoint cover of `c_1 ⊕ c_2 ⊕ … ⊕ c_m`.
    pub fn xor_of_cubes(n: usize, cubes: &[Cube]) -> Result<SopExpr> {
        Self::new(n, cubes.to_vec())?;
        let mut acc: Vec<Cube> = Vec::new();
        for c in cubes {
            let mut inside = vec![*c];
            for d in &acc {
                inside = inside.iter().flat_map(|p| p.sharp(d)).collect();
            }
            let mut next: Vec<Cube> = acc.iter().flat_map(|d| d.sharp(c)).collect();
            next.extend(inside);
            acc = next;
        }
        Ok(Self::certified(n, acc))
    }

    /// `Σ 2^(n - ℓ(D_k))` over a certified-disjoint cover.
    pub fn weight_disjoint(&self) -> Result<u128> {
        if !self.disjoint {
            return Err(Error::NotDisjoint);
        }
        Ok(self.cubes.iter().map(|c| cube_weight(c, self.n)).sum())
    }

    /// Inclusion-exclusion over all non-empty cube subsets. Subsets whose
    /// conjunction clashes contribute 0, and so do all their supersets.
    pub fn weight_ie(&self) -> Result<u128> {
        if self.cubes.len() > IE_MAX_CUBES {
            return Err(Error::TooManyCubes {
                cubes: self.cubes.len(),
                max: IE_MAX_CUBES,
            });
        }
        fn walk(cubes: &[Cube], n: usize, acc: Cube, depth: usize, total: &mut i128) {
            for (k, c) in cubes.iter().enumerate() {
                if let Some(prod) = acc.conjoin(c) {
                    let w = cube_weight(&prod, n) as i128;
                    if depth.is_multiple_of(2) {
                        *total += w;
                    } else {
                        *total -= w;
                    }
                    walk(&cubes[k + 1..], n, prod, depth + 1, total);
                }
            }
        }
        let mut total = 0i128;
        walk(&self.cubes, self.n, Cube::ONE, 0, &mut total);
        debug_assert!(total >= 0);
        Ok(total as u128)
    }

    fn check_probabilities(&self, len: usize) -> Result<()> {
        if !self.disjoint {
            return Err(Error::NotDisjoint);
        }
        if len != self.n {
            return Err(Error::BadProbability(format!(
                "expected {} entries, got {len}",
                self.n
            )));
        }
        Ok(())
    }

    /// Real transform `Σ_k Π_{pos} p_i Π_{neg} (1 - p_i)` in exact arithmetic.
    pub fn real_transform(&self, p: &[BigRational]) -> Result<BigRational> {
        self.check_probabilities(p.len())?;
        let one = BigRational::one();
        if let Some(bad) = p.iter().find(|x| **x < BigRational::zero() || **x > one) {
            return Err(Error::BadProbability(format!("{bad} outside [0, 1]")));
        }
        let mut sum = BigRational::zero();
        for c in &self.cubes {
            let mut term = BigRational::one();
            for i in c.positives() {
                term *= &p[i - 1];
            }
            for i in c.negatives() {
                term *= &one - &p[i - 1];
            }
            sum += term;
        }
        Ok(sum)
    }

    /// Floating-point real transform.
    pub fn real_transform_f64(&self, p: &[f64]) -> Result<f64> {
        self.check_probabilities(p.len())?;
        if let Some(bad) = p.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::BadProbability(format!("{bad} outside [0, 1]")));
        }
        Ok(self
            .cubes
            .iter()
            .map(|c| {
                c.positives().map(|i| p[i - 1]).product::<f64>()
                    * c.negatives().map(|i| 1.0 - p[i - 1]).product::<f64>()
            })
            .sum())
    }

    /// `2^n · R(½, …, ½)`, evaluated exactly.
    pub fn weight_real_transform(&self) -> Result<u128> {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let r = self.real_transform(&vec![half; self.n])?;
        let scaled = r * BigRational::from_integer(BigInt::one() << self.n);
        if !scaled.is_integer() {
            return Err(Error::Overflow("extracting an integral weight"));
        }
        scaled
            .to_integer()
            .to_u128()
            .ok_or(Error::Overflow("extracting an integral weight"))
    }

    /// Dense table of the function.
    pub fn to_truth_table(&self) -> Result<TruthTable> {
        if self.n > N_MAX {
            return Err(Error::ArityTooLarge {
                n: self.n,
                max: N_MAX,
            });
        }
        let n = self.n;
        let mut words = vec![0u64; if n <= 6 { 1 } else { 1 << (n - 6) }];
        let full = var_mask(n);
        for c in &self.cubes {
            // Row bit of X_i is n - i; cube bit is i - 1.
            let to_row = |m: u64| bit_indices(m).fold(0usize, |r, i| r | 1 << (n - i));
            let fixed = to_row(c.pos);
            let free = to_row(full & !(c.pos | c.neg));
            let mut sub = 0usize;
            loop {
                let row = fixed | sub;
                words[row >> 6] |= 1 << (row & 63);
                if sub == free {
                    break;
                }
                sub = (sub.wrapping_sub(free)) & free;
            }
        }
        Ok(TruthTable::from_words(n, words))
    }

    /// Minterm canonical form: one full-length cube per true row.
    pub fn minterms(f: &TruthTable) -> SopExpr {
        let n = f.num_vars();
        let full = var_mask(n);
        let cubes = f
            .true_rows()
            .map(|row| {
                let pos = (1..=n)
                    .filter(|&i| (row >> (n - i)) & 1 == 1)
                    .fold(0u64, |m, i| m | 1 << (i - 1));
                Cube {
                    pos,
                    neg: full & !pos,
                }
            })
            .collect();
        Self::certified(n, cubes)
    }

    /// Disjoint cover by recursive Boole-Shannon expansion in variable
    /// order; variables a subfunction ignores contribute no literal.
    pub fn shannon_cover(f: &TruthTable) -> SopExpr {
        fn walk(f: &TruthTable, var: usize, prefix: Cube, out: &mut Vec<Cube>) {
            if f.is_zero() {
                return;
            }
            if f.is_one() {
                out.push(prefix);
                return;
            }
            let lo = f
                .restrict(1, false)
                .expect("non-constant table has a variable");
            let hi = f
                .restrict(1, true)
                .expect("non-constant table has a variable");
            if lo == hi {
                walk(&lo, var + 1, prefix, out);
            } else {
                let bit = 1u64 << (var - 1);
                walk(
                    &lo,
                    var + 1,
                    Cube {
                        pos: prefix.pos,
                        neg: prefix.neg | bit,
                    },
                    out,
                );
                walk(
                    &hi,
                    var + 1,
                    Cube {
                        pos: prefix.pos | bit,
                        neg: prefix.neg,
                    },
                    out,
                );
            }
        }
        let mut out = Vec::new();
        walk(f, 1, Cube::ONE, &mut out);
        Self::certified(f.num_vars(), out)
    }

    /// Renders with the given names: cubes joined by ` | `, literals by a
    /// space, complement as a trailing `'`. Constants print as `0` / `1`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if self.cubes.is_empty() {
            return "0".to_string();
        }
        self.cubes
            .iter()
            .map(|c| c.render(&names))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

impl fmt::Display for SopExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.n).map(|i| format!("X{i}")).collect();
        f.write_str(&self.render(&names))
    }
}

fn pairwise_disjoint(cubes: &[Cube]) -> bool {
    cubes
        .iter()
        .enumerate()
        .all(|(k, a)| cubes[k + 1..].iter().all(|b| a.is_disjoint_from(b)))
}

fn is_name_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    /// Skips whitespace; reports whether any was skipped.
    fn skip_ws(&mut self) -> bool {
        let start = self.pos;
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
        self.pos > start
    }

    fn syntax(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }
}

/// Parses a sum-of-products expression.
///
/// ```text
/// expr    := '0' | term ('|' term)*
/// term    := '1' | literal (('&' | whitespace) literal)*
/// literal := NAME '\''?
/// NAME    := [A-Za-z_][A-Za-z0-9_]*
/// ```
///
/// Variable `i` is `names[i - 1]`. Repeated literals collapse; a product
/// containing a literal and its complement is rejected. Blank input is the
/// empty (constant-0) expression.
pub fn parse_sop<S: AsRef<str>>(text: &str, names: &[S]) -> Result<SopExpr> {
    let n = names.len();
    if n > MAX_SOP_VARS {
        return Err(Error::ArityTooLarge {
            n,
            max: MAX_SOP_VARS,
        });
    }
    let mut index: HashMap<&str, usize> = HashMap::with_capacity(n);
    for (k, name) in names.iter().enumerate() {
        let name = name.as_ref();
        if name.is_empty() || !name.starts_with(is_name_start) || !name.chars().all(is_name_char) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("invalid variable name `{name}`"),
            });
        }
        if index.insert(name, k + 1).is_some() {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("duplicate variable name `{name}`"),
            });
        }
    }

    let mut cur = Cursor { text, pos: 0 };
    cur.skip_ws();
    if cur.peek().is_none() {
        return SopExpr::new(n, Vec::new());
    }
    if cur.peek() == Some('0') {
        cur.pos += 1;
        cur.skip_ws();
        return match cur.peek() {
            None => SopExpr::new(n, Vec::new()),
            Some(c) => Err(cur.syntax(format!("unexpected `{c}` after constant 0"))),
        };
    }

    let mut cubes = Vec::new();
    'terms: loop {
        let (mut pos, mut neg) = (0u64, 0u64);
        cur.skip_ws();
        if cur.peek() == Some('1') {
            cur.pos += 1;
            cur.skip_ws();
            cubes.push(Cube { pos, neg });
            match cur.peek() {
                None => break 'terms,
                Some('|') => {
                    cur.pos += 1;
                    continue 'terms;
                }
                Some(c) => return Err(cur.syntax(format!("unexpected `{c}` after constant 1"))),
            }
        }
        loop {
            cur.skip_ws();
            let start = cur.pos;
            match cur.peek() {
                Some(c) if is_name_start(c) => {}
                Some(c) => return Err(cur.syntax(format!("expected variable name, found `{c}`"))),
                None => return Err(cur.syntax("expected variable name, found end of input")),
            }
            while cur.peek().is_some_and(is_name_char) {
                cur.pos += 1;
            }
            let name = &text[start..cur.pos];
            let var = *index.get(name).ok_or_else(|| Error::UnknownVariable {
                name: name.to_string(),
                pos: start,
            })?;
            let complemented = cur.peek() == Some('\'');
            if complemented {
                cur.pos += 1;
            }
            let bit = 1u64 << (var - 1);
            if complemented {
                neg |= bit;
            } else {
                pos |= bit;
            }
            if pos & neg != 0 {
                return Err(Error::ContradictoryProduct {
                    name: name.to_string(),
                    pos: start,
                });
            }

            let spaced = cur.skip_ws();
            match cur.peek() {
                None => {
                    cubes.push(Cube { pos, neg });
                    break 'terms;
                }
                Some('|') => {
                    cur.pos += 1;
                    cubes.push(Cube { pos, neg });
                    continue 'terms;
                }
                Some('&') => cur.pos += 1,
                Some(c) if spaced && is_name_start(c) => {}
                Some(c) => return Err(cur.syntax(format!("unexpected `{c}`"))),
            }
        }
    }
    SopExpr::new(n, cubes)
}
