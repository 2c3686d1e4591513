//! Work limits for the enumeration routines.

/// Upper bounds on enumeration sizes. Exceeding one yields
/// [`Error::TooLarge`](crate::Error::TooLarge).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Source words enumerated by partitions and histograms (`2^n`).
    pub words: u128,
    /// Codeword pairs compared by the exhaustive HDS oracle (`Σ|C_m|²`).
    pub pairs: u128,
    /// Shift evaluations or flip lookups (`binom(n,d)·2^d` per distance).
    pub shifts: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            words: 1 << 26,
            pairs: 1 << 36,
            shifts: 1 << 34,
        }
    }
}

impl Budget {
    pub const UNLIMITED: Budget = Budget {
        words: u128::MAX,
        pairs: u128::MAX,
        shifts: u128::MAX,
    };

    pub(crate) fn check(what: &'static str, required: u128, budget: u128) -> crate::Result<()> {
        if required > budget {
            Err(crate::Error::TooLarge {
                what,
                required,
                budget,
            })
        } else {
            Ok(())
        }
    }
}
