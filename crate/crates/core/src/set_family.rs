//! Families of subsets of `[q]` and the union condition on them.
//!
//! A family satisfies the *union condition* when every non-empty index set
//! `I` either covers `[q]` or contains a member contributing an element no
//! other member of `I` has. Families of more than `2q - 2` members always
//! violate it; [`exhaustive_verify_bound`] checks that claim at small `q`.

use std::fmt;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::budget::Budget;
use crate::error::{Error, Result};

/// Largest supported ground set.
pub const MAX_GROUND: usize = 64;

fn full_mask(q: usize) -> u64 {
    if q == 64 {
        u64::MAX
    } else {
        (1u64 << q) - 1
    }
}

/// `p` subsets of `[q] = {1, ..., q}` stored as bitmasks (bit `i - 1` for
/// element `i`). Members must be non-empty and proper; duplicates are kept.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    q: usize,
    members: Vec<u64>,
}

impl SetFamily {
    pub fn new(q: usize, members: &[Vec<usize>]) -> Result<Self> {
        let masks = members
            .iter()
            .map(|m| {
                m.iter().try_fold(0u64, |acc, &x| {
                    if x == 0 || x > q {
                        Err(Error::InvalidSetFamily(format!(
                            "element {x} outside [1, {q}]"
                        )))
                    } else {
                        Ok(acc | 1 << (x - 1))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_masks(q, masks)
    }

    pub fn from_masks(q: usize, members: Vec<u64>) -> Result<Self> {
        if q == 0 || q > MAX_GROUND {
            return Err(Error::InvalidSetFamily(format!(
                "ground set size {q} outside [1, {MAX_GROUND}]"
            )));
        }
        let full = full_mask(q);
        for (i, &m) in members.iter().enumerate() {
            if m & !full != 0 {
                return Err(Error::InvalidSetFamily(format!(
                    "member {} leaves [{q}]",
                    i + 1
                )));
            }
            if m == 0 {
                return Err(Error::InvalidSetFamily(format!(
                    "member {} is empty",
                    i + 1
                )));
            }
            if m == full {
                return Err(Error::InvalidSetFamily(format!(
                    "member {} is all of [{q}]",
                    i + 1
                )));
            }
        }
        Ok(SetFamily { q, members })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn masks(&self) -> &[u64] {
        &self.members
    }

    /// Members as sorted 1-based element lists.
    pub fn members(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|&m| mask_elements(m)).collect()
    }

    pub fn has_duplicates(&self) -> bool {
        self.members.iter().duplicates().next().is_some()
    }

    pub fn full(&self) -> u64 {
        full_mask(self.q)
    }

    /// Union of the members at the given (0-based) indices.
    pub fn union_of(&self, indices: &[usize]) -> u64 {
        indices.iter().fold(0, |acc, &i| acc | self.members[i])
    }

    /// True when `I` is a redundant union: the union is proper and removing
    /// any single member leaves it unchanged.
    pub fn is_redundant_union(&self, indices: &[usize]) -> bool {
        if indices.is_empty() {
            return false;
        }
        let union = self.union_of(indices);
        union != self.full()
            && (0..indices.len()).all(|skip| {
                let rest = indices
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != skip)
                    .fold(0, |acc, (_, &i)| acc | self.members[i]);
                rest == union
            })
    }

    /// Returns a copy with one more member.
    pub fn with_member(&self, mask: u64) -> Result<Self> {
        let mut members = self.members.clone();
        members.push(mask);
        Self::from_masks(self.q, members)
    }
}

/// Sorted 1-based elements of a mask.
pub fn mask_elements(mask: u64) -> Vec<usize> {
    (0..64)
        .filter(|b| mask >> b & 1 == 1)
        .map(|b| b + 1)
        .collect()
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .members()
            .iter()
            .map(|m| format!("{{{}}}", m.iter().join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Outcome of [`lemma_condition_holds`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionVerdict {
    pub holds: bool,
    /// Lexicographically least violating index set (0-based), when the
    /// condition fails.
    pub violating: Option<Vec<usize>>,
}

fn check_size(fam: &SetFamily, budget: &Budget) -> Result<()> {
    if fam.len() > budget.set_family_members {
        return Err(Error::BudgetExceeded {
            what: "set family members (2^p scan)".into(),
            required: fam.len() as u128,
            budget: budget.set_family_members as u128,
        });
    }
    Ok(())
}

/// Checks the union condition over every non-empty `I`.
///
/// Index sets are visited in lexicographic order of their sorted element
/// sequences, so the first violation found is the least one. Subtrees whose
/// union already covers `[q]` are skipped, since every superset then covers
/// it as well.
pub fn lemma_condition_holds(fam: &SetFamily, budget: &Budget) -> Result<ConditionVerdict> {
    check_size(fam, budget)?;
    let mut path = Vec::with_capacity(fam.len());
    let found = dfs_violation(fam, 0, 0, 0, &mut path);
    Ok(match found {
        Some(i) => ConditionVerdict {
            holds: false,
            violating: Some(i),
        },
        None => ConditionVerdict {
            holds: true,
            violating: None,
        },
    })
}

fn dfs_violation(
    fam: &SetFamily,
    start: usize,
    union: u64,
    twice: u64,
    path: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let full = fam.full();
    for j in start..fam.len() {
        let m = fam.members[j];
        let twice2 = twice | (union & m);
        let union2 = union | m;
        path.push(j);
        if union2 != full {
            let unique = union2 & !twice2;
            if path.iter().all(|&i| fam.members[i] & unique == 0) {
                return Some(path.clone());
            }
            if let Some(v) = dfs_violation(fam, j + 1, union2, twice2, path) {
                return Some(v);
            }
        }
        path.pop();
    }
    None
}

/// A redundant-union certificate: `members` (0-based) with proper union
/// `union`, each member removable without changing the union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedundantUnion {
    pub members: Vec<usize>,
    pub union: u64,
}

impl RedundantUnion {
    pub fn union_elements(&self) -> Vec<usize> {
        mask_elements(self.union)
    }
}

/// Smallest redundant union (by size, then lexicographically), if any.
/// Such a set always has at least two members.
pub fn find_redundant_union_witness(
    fam: &SetFamily,
    budget: &Budget,
) -> Result<Option<RedundantUnion>> {
    check_size(fam, budget)?;
    for size in 2..=fam.len() {
        for combo in (0..fam.len()).combinations(size) {
            if fam.is_redundant_union(&combo) {
                let union = fam.union_of(&combo);
                return Ok(Some(RedundantUnion {
                    members: combo,
                    union,
                }));
            }
        }
    }
    Ok(None)
}

/// The two nested chains `{1} ⊂ {1,2} ⊂ ... ⊂ [q-1]` and
/// `{q} ⊂ {q,q-1} ⊂ ... ⊂ {q,...,2}`: `2q - 2` distinct members satisfying
/// the union condition.
pub fn extremal_family(q: usize) -> Result<SetFamily> {
    if !(2..=MAX_GROUND).contains(&q) {
        return Err(Error::InvalidSetFamily(format!(
            "extremal family needs 2 <= q <= {MAX_GROUND}, got {q}"
        )));
    }
    let mut members = Vec::with_capacity(2 * q - 2);
    for t in 1..q {
        members.push((1..=t).collect::<Vec<_>>());
    }
    for t in 1..q {
        members.push((q + 1 - t..=q).rev().collect::<Vec<_>>());
    }
    SetFamily::new(q, &members)
}

/// All non-empty proper subsets of `[q]` as masks, in increasing order.
pub fn proper_subsets(q: usize) -> Vec<u64> {
    (1..full_mask(q)).collect()
}

/// Summary of a bound verification run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub q: usize,
    /// Family size checked, `2q - 1`.
    pub family_size: usize,
    pub candidates: usize,
    pub families_checked: u64,
    /// Families that (correctly) violate the union condition.
    pub families_failing_condition: u64,
    pub exhaustive: bool,
    /// A family of `2q - 1` distinct members satisfying the condition. Never
    /// expected; its presence would contradict the bound.
    pub counterexample: Option<SetFamily>,
}

impl BoundReport {
    pub fn verified(&self) -> bool {
        self.counterexample.is_none() && self.families_failing_condition == self.families_checked
    }
}

/// Checks that every family of `2q - 1` distinct non-empty proper subsets
/// of `[q]` violates the union condition. Exhaustive for `q <= 4`;
/// `q = 5` requires `samples` and draws that many random families.
pub fn exhaustive_verify_bound(q: usize, samples: Option<u64>, seed: u64) -> Result<BoundReport> {
    let size = (2 * q).saturating_sub(1);
    let budget = Budget::default();
    let candidates = if (1..=5).contains(&q) {
        proper_subsets(q)
    } else {
        return Err(Error::Unsupported(format!(
            "bound verification supports 1 <= q <= 5, got {q}"
        )));
    };

    let check = |masks: Vec<u64>| -> Result<Option<SetFamily>> {
        let fam = SetFamily::from_masks(q, masks)?;
        let verdict = lemma_condition_holds(&fam, &budget)?;
        Ok(verdict.holds.then_some(fam))
    };

    let (exhaustive, results): (bool, Vec<Result<Option<SetFamily>>>) = if q <= 4 {
        let combos: Vec<Vec<usize>> = (0..candidates.len()).combinations(size).collect();
        let res = combos
            .into_par_iter()
            .map(|c| check(c.iter().map(|&i| candidates[i]).collect()))
            .collect();
        (true, res)
    } else {
        let Some(n) = samples else {
            return Err(Error::Unsupported(
                "q = 5 is too large for exhaustion; pass a sample count".into(),
            ));
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<Vec<u64>> = (0..n)
            .map(|_| {
                let mut idx = sample(&mut rng, candidates.len(), size).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| candidates[i]).collect()
            })
            .collect();
        (false, draws.into_par_iter().map(check).collect())
    };

    let mut report = BoundReport {
        q,
        family_size: size,
        candidates: candidates.len(),
        families_checked: 0,
        families_failing_condition: 0,
        exhaustive,
        counterexample: None,
    };
    for r in results {
        report.families_checked += 1;
        match r? {
            None => report.families_failing_condition += 1,
            Some(fam) => {
                if report.counterexample.is_none() {
                    report.counterexample = Some(fam);
                }
            }
        }
    }
    Ok(report)
}
