use serde::{Deserialize, Serialize};

/// Default bound on brute-force enumerations.
pub const DEFAULT_CAP: u64 = 4096;

/// Knobs shared by every randomized or enumerative routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Settings {
    pub seed: u64,
    pub cap: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings { seed: 0, cap: DEFAULT_CAP }
    }
}

impl Settings {
    pub fn check_cap(&self, size: Option<u128>) -> crate::Result<u128> {
        match size {
            Some(s) if s <= self.cap as u128 => Ok(s),
            Some(s) => Err(crate::Error::CapExceeded { size: s, cap: self.cap }),
            None => Err(crate::Error::CapExceeded { size: u128::MAX, cap: self.cap }),
        }
    }
}
