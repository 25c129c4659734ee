use serde::{Deserialize, Serialize};

use super::EndoRecord;

/// The integral matrix
///
/// ```text
/// [ (a + b d)/2        b       ]
/// [ b (Delta - d)/4   (a - b d)/2 ]
/// ```
///
/// with `d = 0` or `1` as `Delta = 0` or `1 (mod 4)`, reduced mod `n`.
/// Its trace is `a` and its determinant `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobMatrix {
    pub n: u64,
    pub entries: [[u64; 2]; 2],
}

impl FrobMatrix {
    pub fn trace(&self) -> u64 {
        (self.entries[0][0] + self.entries[1][1]) % self.n
    }

    pub fn det(&self) -> u64 {
        let n = self.n as u128;
        let [[w, x], [y, z]] = self.entries.map(|row| row.map(u128::from));
        ((w * z % n + n - x * y % n) % n) as u64
    }

    pub fn is_scalar(&self) -> bool {
        let [[w, x], [y, z]] = self.entries;
        x == 0 && y == 0 && w == z
    }
}

pub fn duke_toth_matrix(rec: &EndoRecord, n: u64) -> FrobMatrix {
    assert!(n >= 2, "modulus must be at least 2");
    let (a, b, delta) = (rec.a as i128, rec.b as i128, rec.delta as i128);
    let d = rec.delta_parity() as i128;
    let raw = [[(a + b * d) / 2, b], [b * (delta - d) / 4, (a - b * d) / 2]];
    let entries = raw.map(|row| row.map(|v| v.rem_euclid(n as i128) as u64));
    FrobMatrix { n, entries }
}
