//! Total and normalized Banzhaf power.
//!
//! The raw power of voter `m` is the weight of `∂f/∂X_m`, taken over the
//! variables `f` actually depends on: vacuous variables are dropped first,
//! so a dummy elsewhere in the system does not double everyone's count.
//! Equivalently, it is the full-space swing count divided by `2^d`, where
//! `d` is the number of dummy voters other than `m`.
//!
//! [`analyze`] computes powers from the dense threshold table and checks
//! them against two independent oracles: exhaustive swing enumeration and a
//! subset-sum count.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::boolean_core::{TruthTable, N_MAX};
use crate::error::{Error, Result};
use crate::threshold::{SymmetryClasses, VotingSystem};

/// Largest system the enumeration oracle will walk.
pub const ENUM_MAX: usize = N_MAX;

/// Largest system the subset-sum path accepts; keeps every count and the
/// sum of all counts within `u128`.
pub const DP_MAX_VOTERS: usize = 120;

/// `wt(∂f/∂X_i)` over all `n - 1` remaining variables.
pub fn derivative_weight(f: &TruthTable, i: usize) -> Result<u64> {
    Ok(f.boolean_difference(i)?.weight())
}

/// Raw Banzhaf power of `X_i`: derivative weight over the essential support.
pub fn tbp(f: &TruthTable, i: usize) -> Result<u64> {
    let raw = derivative_weight(f, i)?;
    if raw == 0 {
        return Ok(0);
    }
    let others_vacuous = f.vacuous_vars().len();
    Ok(raw >> others_vacuous)
}

/// Raw power of every variable, differentiating once per class and
/// broadcasting the value to the rest of the class.
pub fn tbp_all(f: &TruthTable, classes: &SymmetryClasses) -> Result<Vec<u64>> {
    let n = f.num_vars();
    if classes.num_voters() != n {
        return Err(Error::ArityMismatch {
            left: n,
            right: classes.num_voters(),
        });
    }
    let vacuous = f.vacuous_vars().len();
    let mut out = vec![0u64; n];
    for class in classes.classes() {
        let value = derivative_weight(f, class[0])? >> vacuous;
        for &i in class {
            out[i - 1] = value;
        }
    }
    Ok(out)
}

/// Each power divided by their sum, in lowest terms.
pub fn normalize(tbp: &[u128]) -> Result<Vec<Ratio<u128>>> {
    let total = tbp
        .iter()
        .try_fold(0u128, |acc, &t| acc.checked_add(t))
        .ok_or(Error::Overflow("summing powers"))?;
    if total == 0 {
        return Err(Error::NoDecisiveVoter);
    }
    Ok(tbp.iter().map(|&t| Ratio::new(t, total)).collect())
}

/// Scales raw swing counts down by `2^(number of voters that never swing)`.
fn discount_dummies(raw: Vec<u128>) -> Result<Vec<u128>> {
    let dummies = raw.iter().filter(|&&c| c == 0).count() as u32;
    raw.into_iter()
        .map(|c| {
            if c % (1u128 << dummies) != 0 {
                Err(Error::OracleDisagreement {
                    voter: 0,
                    detail: format!("swing count {c} not divisible by 2^{dummies}"),
                })
            } else {
                Ok(c >> dummies)
            }
        })
        .collect()
}

/// Swing counts of every voter by walking all `2^n` coalitions.
///
/// A swing for voter `k` is a winning coalition containing `k` that loses
/// when `k` alone defects. Coalition sums are maintained along a Gray code.
pub fn swing_counts_enum(sys: &VotingSystem) -> Result<Vec<u128>> {
    let n = sys.num_voters();
    if n > ENUM_MAX {
        return Err(Error::ArityTooLarge { n, max: ENUM_MAX });
    }
    let w: Vec<u128> = sys.weights().iter().map(|&x| u128::from(x)).collect();
    let quota = u128::from(sys.quota());
    let mut raw = vec![0u128; n];
    let mut members = 0usize;
    let mut sum = 0u128;
    for step in 0..(1usize << n) {
        if step > 0 {
            let k = step.trailing_zeros() as usize;
            members ^= 1 << k;
            if members & (1 << k) != 0 {
                sum += w[k];
            } else {
                sum -= w[k];
            }
        }
        if sum >= quota {
            let mut rest = members;
            while rest != 0 {
                let k = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if sum - w[k] < quota {
                    raw[k] += 1;
                }
            }
        }
    }
    Ok(raw)
}

/// Enumeration oracle for voter `i` (1-based).
pub fn tbp_oracle_enum(sys: &VotingSystem, i: usize) -> Result<u128> {
    check_voter(sys, i)?;
    Ok(discount_dummies(swing_counts_enum(sys)?)?[i - 1])
}

/// Swing counts of every voter by subset-sum counting: voter `k` swings
/// with the others' subset `S` iff `T - W_k <= Σ_S W <= T - 1`.
pub fn swing_counts_dp(sys: &VotingSystem) -> Result<Vec<u128>> {
    let n = sys.num_voters();
    if n > DP_MAX_VOTERS {
        return Err(Error::ArityTooLarge {
            n,
            max: DP_MAX_VOTERS,
        });
    }
    let quota =
        usize::try_from(sys.quota()).map_err(|_| Error::Overflow("sizing the count table"))?;
    (0..n)
        .map(|k| {
            let wk = sys.weights()[k];
            if wk == 0 {
                return Ok(0);
            }
            // counts[s] = number of subsets of the other voters summing to s, for s < quota.
            let mut counts = vec![0u128; quota];
            counts[0] = 1;
            for (j, &wj) in sys.weights().iter().enumerate() {
                if j == k {
                    continue;
                }
                let wj = wj as usize;
                if wj == 0 {
                    for c in counts.iter_mut() {
                        *c = c
                            .checked_mul(2)
                            .ok_or(Error::Overflow("counting subsets"))?;
                    }
                    continue;
                }
                for s in (wj..quota).rev() {
                    counts[s] = counts[s]
                        .checked_add(counts[s - wj])
                        .ok_or(Error::Overflow("counting subsets"))?;
                }
            }
            let lo = quota.saturating_sub(wk as usize);
            counts[lo..]
                .iter()
                .try_fold(0u128, |acc, &c| acc.checked_add(c))
                .ok_or(Error::Overflow("counting subsets"))
        })
        .collect()
}

/// Subset-sum oracle for voter `i` (1-based).
pub fn tbp_oracle_dp(sys: &VotingSystem, i: usize) -> Result<u128> {
    check_voter(sys, i)?;
    Ok(discount_dummies(swing_counts_dp(sys)?)?[i - 1])
}

fn check_voter(sys: &VotingSystem, i: usize) -> Result<()> {
    if i == 0 || i > sys.num_voters() {
        Err(Error::IndexOutOfRange {
            index: i,
            n: sys.num_voters(),
        })
    } else {
        Ok(())
    }
}

/// Structural findings about the voting function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StructuralChecks {
    pub monotone: bool,
    pub causal: bool,
    pub constant: bool,
}

/// How the powers in a report were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Derivative weights on the dense truth table.
    DerivativeWeight,
    /// Subset-sum counting only; used above the dense-table limit.
    SubsetSum,
}

fn serialize_ratios<S: Serializer>(
    v: &[Ratio<u128>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())))
}

/// Result of a power analysis. Voter indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerReport {
    pub tbp: Vec<u128>,
    /// Empty when no voter is decisive.
    #[serde(serialize_with = "serialize_ratios")]
    pub ntbp: Vec<Ratio<u128>>,
    pub dummies: Vec<usize>,
    pub classes: SymmetryClasses,
    pub checks: StructuralChecks,
    pub method: Method,
    pub oracle_verified: bool,
}

impl PowerReport {
    pub fn num_voters(&self) -> usize {
        self.tbp.len()
    }

    pub fn total_tbp(&self) -> u128 {
        self.tbp.iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Cross-check against the oracles; a mismatch is a hard error.
    pub verify: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { verify: true }
    }
}

/// Full analysis with oracle verification.
pub fn analyze(sys: &VotingSystem) -> Result<PowerReport> {
    analyze_with(sys, AnalyzeOptions::default())
}

pub fn analyze_with(sys: &VotingSystem, opts: AnalyzeOptions) -> Result<PowerReport> {
    let n = sys.num_voters();
    if n > N_MAX {
        return analyze_subset_sum(sys);
    }
    let table = sys.truth_table()?;
    let weights = sys.weights();
    let classes = SymmetryClasses::detect(&table, |i, j| weights[i - 1] == weights[j - 1]);
    let mut report = report_from_table(&table, classes)?;

    if opts.verify {
        let by_enum = discount_dummies(swing_counts_enum(sys)?)?;
        let by_dp = discount_dummies(swing_counts_dp(sys)?)?;
        for k in 0..n {
            if report.tbp[k] != by_enum[k] || report.tbp[k] != by_dp[k] {
                return Err(Error::OracleDisagreement {
                    voter: k + 1,
                    detail: format!(
                        "derivative weight {}, enumeration {}, subset-sum {}",
                        report.tbp[k], by_enum[k], by_dp[k]
                    ),
                });
            }
        }
        report.oracle_verified = true;
    }
    Ok(report)
}

/// Powers of an arbitrary switching function (not necessarily threshold);
/// no oracle applies, classes come from the transposition test.
pub fn analyze_function(f: &TruthTable) -> Result<PowerReport> {
    report_from_table(f, SymmetryClasses::of_table(f))
}

fn report_from_table(table: &TruthTable, classes: SymmetryClasses) -> Result<PowerReport> {
    let tbp: Vec<u128> = tbp_all(table, &classes)?
        .into_iter()
        .map(u128::from)
        .collect();
    let dummies = table.vacuous_vars();
    let constant = table.is_zero() || table.is_one();
    let ntbp = if constant {
        Vec::new()
    } else {
        normalize(&tbp)?
    };
    Ok(PowerReport {
        tbp,
        ntbp,
        dummies,
        classes,
        checks: StructuralChecks {
            monotone: table.is_monotone(),
            causal: table.is_causal(),
            constant,
        },
        method: Method::DerivativeWeight,
        oracle_verified: false,
    })
}

fn analyze_subset_sum(sys: &VotingSystem) -> Result<PowerReport> {
    let tbp = discount_dummies(swing_counts_dp(sys)?)?;
    let dummies: Vec<usize> = (1..=tbp.len()).filter(|&i| tbp[i - 1] == 0).collect();
    let constant = !sys.quota_reachable();
    let ntbp = if constant {
        Vec::new()
    } else {
        normalize(&tbp)?
    };
    Ok(PowerReport {
        tbp,
        ntbp,
        dummies,
        classes: sys.symmetry_classes_arithmetic(),
        checks: StructuralChecks {
            monotone: true,
            causal: !constant,
            constant,
        },
        method: Method::SubsetSum,
        oracle_verified: false,
    })
}
