use crate::error::{Error, Result};

/// Enumeration limits. Exceeding one is an error, never a silent truncation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Max `p^d` for projective point enumeration.
    pub projective_points: u128,
    /// Max number of subspaces enumerated by the invariant-subspace oracle.
    pub subspaces: u128,
    /// Max number of operator subsets in a Helly sweep.
    pub subsets: u128,
    /// Max family size `p` for the 2^p scans over set families.
    pub set_family_members: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            projective_points: 1_000_000,
            subspaces: 1_000_000,
            subsets: 100_000,
            set_family_members: 24,
        }
    }
}

impl Budget {
    /// Sets every count budget to `n` (the set-family exponent is kept).
    pub fn with_count_limit(mut self, n: u128) -> Self {
        self.projective_points = n;
        self.subspaces = n;
        self.subsets = n;
        self
    }

    pub(crate) fn check(what: &str, required: u128, budget: u128) -> Result<()> {
        if required > budget {
            Err(Error::BudgetExceeded {
                what: what.to_string(),
                required,
                budget,
            })
        } else {
            Ok(())
        }
    }
}
