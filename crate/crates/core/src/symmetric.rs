//! Symmetric switching functions `Sy(n; A; X)`.
//!
//! `Sy(n; A; X)` is 1 iff the number of inputs at 1 lies in the
//! characteristic set `A ⊆ {0, …, n}`. Connectives act on the sets; the
//! derivative with respect to any input is again symmetric.

use std::fmt;
use std::str::FromStr;

use crate::boolean_core::{TruthTable, N_MAX};
use crate::error::{Error, Result};

/// Largest arity; characteristic sets are `u128` bitmasks over `0..=n`.
pub const SYM_MAX_ARITY: usize = 64;

/// `C(n, k)` from Pascal's triangle; 0 when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    pascal_row(n)[k]
}

fn pascal_row(n: usize) -> Vec<u128> {
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(1);
        next.extend(row.windows(2).map(|w| w[0] + w[1]));
        next.push(1);
        row = next;
    }
    row
}

fn universe(n: usize) -> u128 {
    if n + 1 >= 128 {
        !0
    } else {
        (1u128 << (n + 1)) - 1
    }
}

/// A symmetric switching function of `n` inputs with characteristic set `A`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymFn {
    n: usize,
    charset: u128,
}

impl SymFn {
    pub fn new(n: usize, charset: &[usize]) -> Result<SymFn> {
        if n > SYM_MAX_ARITY {
            return Err(Error::ArityTooLarge {
                n,
                max: SYM_MAX_ARITY,
            });
        }
        let mut mask = 0u128;
        for &a in charset {
            if a > n {
                return Err(Error::BadCharset { element: a, n });
            }
            mask |= 1 << a;
        }
        Ok(SymFn { n, charset: mask })
    }

    /// `Sy(n; {k, …, n})`: the k-out-of-n function.
    pub fn at_least(n: usize, k: usize) -> Result<SymFn> {
        let set: Vec<usize> = (k..=n).collect();
        Self::new(n, &set)
    }

    pub fn constant(n: usize, value: bool) -> Result<SymFn> {
        let f = Self::new(n, &[])?;
        Ok(if value { f.not() } else { f })
    }

    pub fn arity(&self) -> usize {
        self.n
    }

    /// Characteristic set, ascending.
    pub fn charset(&self) -> Vec<usize> {
        (0..=self.n).filter(|&a| self.contains(a)).collect()
    }

    pub fn contains(&self, count: usize) -> bool {
        count <= self.n && (self.charset >> count) & 1 == 1
    }

    pub fn is_constant_one(&self) -> bool {
        self.charset == universe(self.n)
    }

    pub fn is_constant_zero(&self) -> bool {
        self.charset == 0
    }

    /// Complement: the set difference `{0..n} − A`.
    pub fn not(&self) -> SymFn {
        SymFn {
            n: self.n,
            charset: universe(self.n) & !self.charset,
        }
    }

    fn combine(&self, other: &SymFn, op: impl Fn(u128, u128) -> u128) -> Result<SymFn> {
        if self.n != other.n {
            return Err(Error::ArityMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(SymFn {
            n: self.n,
            charset: op(self.charset, other.charset),
        })
    }

    pub fn and(&self, other: &SymFn) -> Result<SymFn> {
        self.combine(other, |a, b| a & b)
    }

    pub fn or(&self, other: &SymFn) -> Result<SymFn> {
        self.combine(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &SymFn) -> Result<SymFn> {
        self.combine(other, |a, b| a ^ b)
    }

    /// Boole-Shannon expansion about any input `X_m`:
    /// `Sy(n; A) = X̄_m·Sy(n-1; B) ⊕ X_m·Sy(n-1; C)` with `B = A ∩ {0..n-1}`
    /// and `C = {a - 1 : a ∈ A} ∩ {0..n-1}`. Returns `(B, C)` as functions.
    pub fn expand(&self) -> Result<(SymFn, SymFn)> {
        if self.n == 0 {
            return Err(Error::ZeroArity);
        }
        let inner = universe(self.n - 1);
        let low = SymFn {
            n: self.n - 1,
            charset: self.charset & inner,
        };
        let high = SymFn {
            n: self.n - 1,
            charset: (self.charset >> 1) & inner,
        };
        Ok((low, high))
    }

    /// `∂Sy(n; A)/∂X_m = Sy(n-1; B ⊕ C)`, the same for every input.
    pub fn derivative(&self) -> Result<SymFn> {
        let (low, high) = self.expand()?;
        low.xor(&high)
    }

    /// `Σ_{a∈A} C(n, a)`.
    pub fn weight(&self) -> u128 {
        let row = pascal_row(self.n);
        (0..=self.n)
            .filter(|&a| self.contains(a))
            .map(|a| row[a])
            .sum()
    }

    /// Raw Banzhaf power of every input: `Σ_{a∈B⊕C} C(n-1, a)`.
    pub fn tbp(&self) -> Result<u128> {
        Ok(self.derivative()?.weight())
    }

    /// Dense table over `n_total` variables with the inputs placed at the
    /// given 1-based indices, vacuous elsewhere.
    pub fn to_truth_table(&self, placement: &[usize], n_total: usize) -> Result<TruthTable> {
        if placement.len() != self.n {
            return Err(Error::BadPlacement(format!(
                "{} positions for an arity-{} function",
                placement.len(),
                self.n
            )));
        }
        if n_total > N_MAX {
            return Err(Error::ArityTooLarge {
                n: n_total,
                max: N_MAX,
            });
        }
        let mut mask = 0usize;
        for &i in placement {
            if i == 0 || i > n_total {
                return Err(Error::BadPlacement(format!(
                    "index {i} outside 1..={n_total}"
                )));
            }
            let bit = 1 << (n_total - i);
            if mask & bit != 0 {
                return Err(Error::BadPlacement(format!("index {i} repeated")));
            }
            mask |= bit;
        }
        TruthTable::from_fn(n_total, |row| {
            self.contains((row & mask).count_ones() as usize)
        })
    }

    /// Table over its own inputs, `X_1..X_n` in order.
    pub fn truth_table(&self) -> Result<TruthTable> {
        let placement: Vec<usize> = (1..=self.n).collect();
        self.to_truth_table(&placement, self.n)
    }
}

impl fmt::Display for SymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self.charset().iter().map(|a| a.to_string()).collect();
        write!(f, "Sy({}; {{{}}})", self.n, set.join(","))
    }
}

/// A symmetric function together with the names of its inputs, in the
/// textual form `Sy(n; {a1,a2,...}; v1,v2,...)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedSymFn {
    pub function: SymFn,
    pub inputs: Vec<String>,
}

impl fmt::Display for NamedSymFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let set: Vec<String> = self
            .function
            .charset()
            .iter()
            .map(|a| a.to_string())
            .collect();
        write!(
            f,
            "Sy({}; {{{}}}; {})",
            self.function.arity(),
            set.join(","),
            self.inputs.join(",")
        )
    }
}

impl FromStr for NamedSymFn {
    type Err = Error;

    /// Whitespace-insensitive. The input list may be omitted, in which case
    /// inputs are named `X1..Xn`.
    fn from_str(s: &str) -> Result<NamedSymFn> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let syntax = |msg: &str| Error::Syntax {
            pos: 0,
            msg: msg.to_string(),
        };
        let body = compact
            .strip_prefix("Sy(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(|| syntax("expected `Sy( … )`"))?;
        let mut parts = body.splitn(3, ';');
        let n: usize = parts
            .next()
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| syntax("bad arity"))?;
        let set_text = parts
            .next()
            .and_then(|p| p.strip_prefix('{'))
            .and_then(|p| p.strip_suffix('}'))
            .ok_or_else(|| syntax("expected `{…}` characteristic set"))?;
        let set = if set_text.is_empty() {
            Vec::new()
        } else {
            set_text
                .split(',')
                .map(|a| a.parse::<usize>().map_err(|_| syntax("bad set element")))
                .collect::<Result<Vec<_>>>()?
        };
        let function = SymFn::new(n, &set)?;
        let inputs: Vec<String> = match parts.next() {
            Some(list) if !list.is_empty() => list.split(',').map(str::to_string).collect(),
            _ => (1..=n).map(|i| format!("X{i}")).collect(),
        };
        if inputs.len() != n {
            return Err(syntax("input list length differs from arity"));
        }
        Ok(NamedSymFn { function, inputs })
    }
}
