//! Working-precision policy for computations along completions.
//!
//! Truncation levels start at `level` and double on demand up to `cap`;
//! callers raise [`crate::CoreError::PrecisionExhausted`] when the cap is hit
//! without a verified answer.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    /// Current truncation level (power of the defining equations retained).
    pub level: u32,
    /// Hard ceiling for escalation.
    pub cap: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { level: 8, cap: 64 }
    }
}

impl Precision {
    pub fn new(level: u32, cap: u32) -> Self {
        Precision { level, cap }
    }

    /// Double the level, clamped to the cap. Returns false when already at
    /// the cap (caller should stop and report exhaustion).
    pub fn escalate(&mut self) -> bool {
        if self.level >= self.cap {
            return false;
        }
        self.level = (self.level.saturating_mul(2)).min(self.cap);
        true
    }

    /// Iterator over the escalation ladder starting at the current level.
    pub fn ladder(&self) -> impl Iterator<Item = u32> {
        let mut p = *self;
        let mut first = true;
        std::iter::from_fn(move || {
            if first {
                first = false;
                Some(p.level)
            } else if p.escalate() {
                Some(p.level)
            } else {
                None
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_doubles_to_cap() {
        let p = Precision::new(8, 64);
        let steps: Vec<u32> = p.ladder().collect();
        assert_eq!(steps, vec![8, 16, 32, 64]);
    }

    #[test]
    fn uneven_cap_is_clamped() {
        let p = Precision::new(5, 12);
        let steps: Vec<u32> = p.ladder().collect();
        assert_eq!(steps, vec![5, 10, 12]);
    }
}
