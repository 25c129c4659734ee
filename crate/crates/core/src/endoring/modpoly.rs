//! Classical modular polynomials `Phi_l(X, Y)` read from a text table of
//! integer coefficients and reduced modulo `p` on demand.

use std::collections::BTreeMap;
use std::path::Path;

use crate::arith::{Poly, PrimeField};
use crate::error::{Error, Result};

/// Table shipped with the crate.
pub const BUILTIN_PHI: &str = include_str!("../../data/phi_l.dat");
/// File name looked up inside `FROBDISC_DATA`.
pub const PHI_FILE: &str = "phi_l.dat";
pub const DATA_ENV: &str = "FROBDISC_DATA";

#[derive(Debug, Clone, PartialEq, Eq)]
struct Coefficient {
    i: usize,
    j: usize,
    negative: bool,
    digits: String,
}

impl Coefficient {
    fn reduce(&self, field: &PrimeField) -> u64 {
        let p = field.modulus() as u128;
        let mut acc: u128 = 0;
        for chunk in self.digits.as_bytes().chunks(9) {
            let mut scale: u128 = 1;
            let mut part: u128 = 0;
            for &d in chunk {
                part = part * 10 + (d - b'0') as u128;
                scale *= 10;
            }
            acc = (acc * scale + part) % p;
        }
        let v = acc as u64;
        if self.negative {
            field.neg(v)
        } else {
            v
        }
    }
}

/// Integer coefficients of `Phi_l` for every `l` present in the table.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModularPolynomials {
    table: BTreeMap<u64, Vec<Coefficient>>,
}

impl ModularPolynomials {
    /// Parses `l i j c` lines (stored for `i >= j`, symmetric in `X`, `Y`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut table: BTreeMap<u64, Vec<Coefficient>> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("{PHI_FILE} line {}: {msg}", lineno + 1));
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [l, i, j, c] = fields[..] else {
                return Err(err("expected four fields"));
            };
            let l: u64 = l.parse().map_err(|_| err("bad l"))?;
            let i: usize = i.parse().map_err(|_| err("bad exponent"))?;
            let j: usize = j.parse().map_err(|_| err("bad exponent"))?;
            if i < j || i > l as usize + 1 {
                return Err(err("exponents out of range"));
            }
            let (negative, digits) = match c.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, c.strip_prefix('+').unwrap_or(c)),
            };
            if digits.is_empty() || !digits.bytes().all(|d| d.is_ascii_digit()) {
                return Err(err("bad coefficient"));
            }
            table.entry(l).or_default().push(Coefficient {
                i,
                j,
                negative,
                digits: digits.to_string(),
            });
        }
        Ok(ModularPolynomials { table })
    }

    pub fn builtin() -> Self {
        Self::parse(BUILTIN_PHI).expect("shipped modular polynomial table parses")
    }

    pub fn from_dir(dir: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(dir.join(PHI_FILE))?)
    }

    /// The table under `$FROBDISC_DATA` if that is set, the shipped one otherwise.
    pub fn load() -> Result<Self> {
        match std::env::var_os(DATA_ENV) {
            Some(dir) => Self::from_dir(Path::new(&dir)),
            None => Ok(Self::builtin()),
        }
    }

    pub fn levels(&self) -> impl Iterator<Item = u64> + '_ {
        self.table.keys().copied()
    }

    pub fn has(&self, ell: u64) -> bool {
        self.table.contains_key(&ell)
    }

    pub fn reduce(&self, ell: u64, field: PrimeField) -> Result<ReducedModPoly> {
        let coeffs = self.table.get(&ell).ok_or(Error::DataMissing(ell))?;
        let n = ell as usize + 2;
        let mut grid = vec![vec![0u64; n]; n];
        for c in coeffs {
            let v = c.reduce(&field);
            grid[c.i][c.j] = v;
            grid[c.j][c.i] = v;
        }
        Ok(ReducedModPoly { ell, field, grid })
    }
}

/// `Phi_l(X, Y) mod p`, with `grid[i][j]` the coefficient of `X^i Y^j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedModPoly {
    ell: u64,
    field: PrimeField,
    grid: Vec<Vec<u64>>,
}

impl ReducedModPoly {
    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `Phi_l(x0, Y)` as a polynomial in `Y`.
    pub fn at_x(&self, x0: u64) -> Poly {
        let f = &self.field;
        let n = self.grid.len();
        let mut out = vec![0u64; n];
        let mut xp = 1u64;
        for row in &self.grid {
            for (slot, &c) in out.iter_mut().zip(row) {
                *slot = f.add(*slot, f.mul(c, xp));
            }
            xp = f.mul(xp, x0);
        }
        Poly::new(out)
    }

    pub fn eval(&self, x0: u64, y0: u64) -> u64 {
        self.at_x(x0).eval(y0, &self.field)
    }

    /// Roots of `Phi_l(j, Y)` in `F_p`, repeated according to multiplicity.
    pub fn neighbors(&self, j: u64) -> Vec<u64> {
        self.at_x(j).roots_with_multiplicity(&self.field)
    }
}
