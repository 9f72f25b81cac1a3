//! Weighted voting systems `(T; W_1, …, W_n)` and their threshold functions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::boolean_core::{TruthTable, N_MAX};
use crate::error::{Error, Result};

/// A quota-and-weights yes-no voting system. A bill passes iff the total
/// weight of the yes-voters reaches the quota.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemDocument", into = "SystemDocument")]
pub struct VotingSystem {
    quota: u64,
    weights: Vec<u64>,
    names: Option<Vec<String>>,
}

/// On-disk form: `quota`, `weights`, optional `names`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDocument {
    quota: u64,
    weights: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    names: Option<Vec<String>>,
}

impl TryFrom<SystemDocument> for VotingSystem {
    type Error = Error;

    fn try_from(doc: SystemDocument) -> Result<VotingSystem> {
        let sys = VotingSystem::new(doc.quota, doc.weights)?;
        match doc.names {
            Some(names) => sys.with_names(names),
            None => Ok(sys),
        }
    }
}

impl From<VotingSystem> for SystemDocument {
    fn from(sys: VotingSystem) -> SystemDocument {
        SystemDocument {
            quota: sys.quota,
            weights: sys.weights,
            names: sys.names,
        }
    }
}

impl VotingSystem {
    /// Requires at least one voter and a positive quota. A quota above the
    /// total weight is accepted; the system is then constant 0.
    pub fn new(quota: u64, weights: Vec<u64>) -> Result<VotingSystem> {
        if weights.is_empty() {
            return Err(Error::InvalidSystem(
                "at least one voter is required".into(),
            ));
        }
        if quota == 0 {
            return Err(Error::InvalidSystem("quota must be positive".into()));
        }
        Ok(VotingSystem {
            quota,
            weights,
            names: None,
        })
    }

    pub fn with_names(mut self, names: Vec<String>) -> Result<VotingSystem> {
        if names.len() != self.weights.len() {
            return Err(Error::InvalidSystem(format!(
                "{} names for {} voters",
                names.len(),
                self.weights.len()
            )));
        }
        for (k, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidSystem("empty voter name".into()));
            }
            if names[..k].contains(name) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate voter name `{name}`"
                )));
            }
        }
        self.names = Some(names);
        Ok(self)
    }

    /// Parses the JSON document form.
    pub fn from_json(text: &str) -> Result<VotingSystem> {
        serde_json::from_str(text).map_err(|e| Error::InvalidSystem(e.to_string()))
    }

    /// Parses the TOML document form.
    pub fn from_toml(text: &str) -> Result<VotingSystem> {
        toml::from_str(text).map_err(|e| Error::InvalidSystem(e.to_string()))
    }

    /// Reads a system file; `.toml` files are TOML, anything else JSON.
    pub fn load(path: &Path) -> Result<VotingSystem> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSystem(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "toml") {
            Self::from_toml(&text)
        } else {
            Self::from_json(&text)
        }
    }

    pub fn num_voters(&self) -> usize {
        self.weights.len()
    }

    pub fn quota(&self) -> u64 {
        self.quota
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    /// Declared names, if any.
    pub fn declared_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Voter labels, defaulting to `X1..Xn`.
    pub fn names(&self) -> Vec<String> {
        match &self.names {
            Some(names) => names.clone(),
            None => (1..=self.num_voters()).map(|i| format!("X{i}")).collect(),
        }
    }

    /// 1-based index of the voter called `name`; plain integers are taken
    /// as indices.
    pub fn voter_index(&self, name: &str) -> Option<usize> {
        if let Some(i) = self.names().iter().position(|n| n == name) {
            return Some(i + 1);
        }
        name.parse::<usize>()
            .ok()
            .filter(|&i| (1..=self.num_voters()).contains(&i))
    }

    pub fn total_weight(&self) -> u128 {
        self.weights.iter().map(|&w| u128::from(w)).sum()
    }

    /// `quota <= Σ W`: the grand coalition wins. (The empty coalition
    /// always loses since the quota is positive.)
    pub fn quota_reachable(&self) -> bool {
        u128::from(self.quota) <= self.total_weight()
    }

    /// Every weight and the quota multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Result<VotingSystem> {
        if factor == 0 {
            return Err(Error::InvalidSystem("scale factor must be positive".into()));
        }
        let mul = |x: u64| {
            x.checked_mul(factor)
                .ok_or(Error::Overflow("scaling a system"))
        };
        Ok(VotingSystem {
            quota: mul(self.quota)?,
            weights: self
                .weights
                .iter()
                .map(|&w| mul(w))
                .collect::<Result<_>>()?,
            names: self.names.clone(),
        })
    }

    /// Dense table: row `j` is 1 iff `Σ W_i t_ji >= T`.
    pub fn truth_table(&self) -> Result<TruthTable> {
        let n = self.num_voters();
        if n > N_MAX {
            return Err(Error::ArityTooLarge { n, max: N_MAX });
        }
        // The low six row bits are the last six variables; row bit b is X_{n-b}.
        let low_vars = n.min(6);
        let weight_at_bit = |b: usize| u128::from(self.weights[n - 1 - b]);
        let low_sums: Vec<u128> = (0..1usize << low_vars)
            .map(|t| {
                (0..low_vars)
                    .filter(|b| (t >> b) & 1 == 1)
                    .map(weight_at_bit)
                    .sum()
            })
            .collect();
        let quota = u128::from(self.quota);
        let word_total = if n <= 6 { 1 } else { 1usize << (n - 6) };
        let words = (0..word_total)
            .map(|w| {
                let high: u128 = (0..n.saturating_sub(6))
                    .filter(|b| (w >> b) & 1 == 1)
                    .map(|b| weight_at_bit(b + 6))
                    .sum();
                low_sums
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| high + s >= quota)
                    .fold(0u64, |acc, (t, _)| acc | 1 << t)
            })
            .collect();
        Ok(TruthTable::from_words(n, words))
    }

    /// Voters whose variable the threshold function ignores (1-based).
    pub fn dummies(&self) -> Result<Vec<usize>> {
        Ok(self.truth_table()?.vacuous_vars())
    }

    /// Functional symmetry classes of the threshold table.
    pub fn symmetry_classes(&self) -> Result<SymmetryClasses> {
        let table = self.truth_table()?;
        Ok(SymmetryClasses::detect(&table, |i, j| {
            self.weights[i - 1] == self.weights[j - 1]
        }))
    }

    /// Symmetry classes by subset-sum arithmetic, without a truth table.
    ///
    /// Voters `i`, `j` with `W_i <= W_j` are interchangeable iff no subset
    /// of the remaining voters has total weight in `[T - W_j, T - W_i - 1]`.
    pub fn symmetry_classes_arithmetic(&self) -> SymmetryClasses {
        let n = self.num_voters();
        let mut class_of: Vec<Option<usize>> = vec![None; n];
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i].is_some() {
                continue;
            }
            let id = classes.len();
            class_of[i] = Some(id);
            let mut class = vec![i + 1];
            for (j, slot) in class_of.iter_mut().enumerate().skip(i + 1) {
                if slot.is_none() && self.interchangeable(i, j) {
                    *slot = Some(id);
                    class.push(j + 1);
                }
            }
            classes.push(class);
        }
        SymmetryClasses { classes }
    }

    /// 0-based voters.
    fn interchangeable(&self, i: usize, j: usize) -> bool {
        let (wi, wj) = (self.weights[i], self.weights[j]);
        if wi == wj {
            return true;
        }
        let (lo, hi) = if wi < wj { (wi, wj) } else { (wj, wi) };
        let q = self.quota;
        // Sums of interest lie in [q - hi, q - lo - 1], all below q.
        let upper = match q.checked_sub(lo + 1) {
            Some(u) => u,
            None => return true,
        };
        let lower = q.saturating_sub(hi);
        let cap = upper as usize;
        let mut reachable = vec![false; cap + 1];
        reachable[0] = true;
        for (k, &w) in self.weights.iter().enumerate() {
            if k == i || k == j || w == 0 {
                continue;
            }
            let w = w as usize;
            for s in (w..=cap).rev() {
                if reachable[s - w] {
                    reachable[s] = true;
                }
            }
        }
        !(lower as usize..=cap).any(|s| reachable[s])
    }

    /// Whether scaling by `factor` leaves the threshold table unchanged.
    pub fn check_scale_invariance(&self, factor: u64) -> Result<bool> {
        Ok(self.truth_table()? == self.scaled(factor)?.truth_table()?)
    }
}

/// A partition of the voters (1-based indices) into classes of mutually
/// interchangeable variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SymmetryClasses {
    classes: Vec<Vec<usize>>,
}

impl SymmetryClasses {
    /// Groups variables by the transposition test. `known_equal(i, j)` may
    /// certify a pair without testing; it must only return true for pairs
    /// that really are interchangeable.
    pub fn detect(
        table: &TruthTable,
        known_equal: impl Fn(usize, usize) -> bool,
    ) -> SymmetryClasses {
        let n = table.num_vars();
        let mut assigned = vec![false; n + 1];
        let mut classes = Vec::new();
        for i in 1..=n {
            if assigned[i] {
                continue;
            }
            assigned[i] = true;
            let mut class = vec![i];
            for (j, done) in assigned.iter_mut().enumerate().skip(i + 1) {
                if !*done
                    && (known_equal(i, j) || table.is_symmetric_in(i, j).expect("indices in range"))
                {
                    *done = true;
                    class.push(j);
                }
            }
            classes.push(class);
        }
        SymmetryClasses { classes }
    }

    /// Transposition test on an arbitrary table.
    pub fn of_table(table: &TruthTable) -> SymmetryClasses {
        Self::detect(table, |_, _| false)
    }

    /// Every voter in its own class.
    pub fn singletons(n: usize) -> SymmetryClasses {
        SymmetryClasses {
            classes: (1..=n).map(|i| vec![i]).collect(),
        }
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn num_voters(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    /// First member of each class.
    pub fn representatives(&self) -> impl Iterator<Item = usize> + '_ {
        self.classes.iter().map(|c| c[0])
    }

    /// True iff the classes partition `1..=n` and each pair within a class
    /// passes the transposition test on `table`.
    pub fn is_valid_for(&self, table: &TruthTable) -> bool {
        let n = table.num_vars();
        let mut seen = vec![false; n + 1];
        for class in &self.classes {
            for &i in class {
                if i == 0 || i > n || seen[i] {
                    return false;
                }
                seen[i] = true;
            }
        }
        seen[1..].iter().all(|&s| s)
            && self.classes.iter().all(|c| {
                c.iter()
                    .all(|&j| table.is_symmetric_in(c[0], j).unwrap_or(false))
            })
    }
}
