use crate::error::{Error, Result};

use super::CurveQ;

/// Shipped curves: globally minimal, non-CM models from the standard tables.
pub const BUILTIN_REGISTRY: &str = "\
11a1:0,-1,1,-10,-20
37a1:0,0,1,-1,0
389a1:0,1,1,-2,0
5077a1:0,0,1,-7,6
";

#[derive(Debug, Clone, Default)]
pub struct Registry {
    curves: Vec<CurveQ>,
}

impl Registry {
    pub fn curves(&self) -> &[CurveQ] {
        &self.curves
    }

    pub fn get(&self, label: &str) -> Option<&CurveQ> {
        self.curves.iter().find(|c| c.label == label)
    }

    pub fn lookup(&self, label: &str) -> Result<&CurveQ> {
        self.get(label).ok_or_else(|| Error::UnknownCurve(label.to_string()))
    }

    pub fn extend(&mut self, other: Registry) {
        for c in other.curves {
            self.curves.retain(|e| e.label != c.label);
            self.curves.push(c);
        }
    }
}

/// Parses `label:a1,a2,a3,a4,a6` lines; blank lines and `#` comments are skipped.
pub fn parse_registry(text: &str) -> Result<Registry> {
    let mut curves = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse(format!("registry line {}: {msg}: {raw:?}", lineno + 1));
        let (label, coeffs) = line.split_once(':').ok_or_else(|| err("missing ':'"))?;
        let label = label.trim();
        if label.is_empty() {
            return Err(err("empty label"));
        }
        let values: Vec<i64> = coeffs
            .split(',')
            .map(|s| s.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| err("bad integer"))?;
        let a: [i64; 5] = values.try_into().map_err(|_| err("expected five coefficients"))?;
        curves.push(CurveQ::new(label, a)?);
    }
    Ok(Registry { curves })
}

pub fn builtin_registry() -> Registry {
    parse_registry(BUILTIN_REGISTRY).expect("builtin registry parses")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_curves() {
        let reg = builtin_registry();
        assert_eq!(reg.curves().len(), 4);
        let discs: Vec<i128> = reg.curves().iter().map(|c| c.disc).collect();
        assert_eq!(discs, [-161051, 37, 389, 5077]);
        for c in reg.curves() {
            assert_eq!(c.c4.pow(3) - c.c6.pow(2), 1728 * c.disc);
        }
        assert_eq!(reg.lookup("11a1").unwrap().a, [0, -1, 1, -10, -20]);
        assert!(reg.lookup("nope").is_err());
    }

    #[test]
    fn parse_errors() {
        assert!(parse_registry("x:1,2,3").is_err());
        assert!(parse_registry("x 1,2,3,4,5").is_err());
        assert!(parse_registry("x:1,2,a,4,5").is_err());
        let reg = parse_registry("# comment\n\n  e1 : 0, 0, 1, -1, 0 \n").unwrap();
        assert_eq!(reg.curves()[0].label, "e1");
        assert_eq!(reg.curves()[0].disc, 37);
    }
}
