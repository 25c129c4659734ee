//! Height of `j(E)` above the floor of its `l`-isogeny volcano, walked
//! through roots of `Phi_l(j, Y)`. The height equals `v_l(b_p)`.

use crate::curve::CurveFp;
use crate::error::{Error, Result};

use super::modpoly::{ModularPolynomials, ReducedModPoly};

/// Bound on the number of descent rounds before giving up.
const MAX_LEVELS: u32 = 64;

fn is_collision(j: u64, p: u64) -> bool {
    j == 0 || j == 1728 % p
}

/// A vertex is on the floor when it has fewer than `l + 1` neighbors.
fn on_floor(phi: &ReducedModPoly, neighbors: &[u64]) -> bool {
    (neighbors.len() as u64) < phi.ell() + 1
}

pub fn volcano_level(e: &CurveFp, ell: u64, db: &ModularPolynomials) -> Result<u32> {
    let phi = db.reduce(ell, e.field())?;
    volcano_level_with(e, &phi)
}

/// Breadth-first descent over all non-backtracking paths at once; the
/// first round that reaches a floor vertex gives the height.
pub fn volcano_level_with(e: &CurveFp, phi: &ReducedModPoly) -> Result<u32> {
    let p = e.p();
    let j0 = e.j_invariant();
    if is_collision(j0, p) {
        return Err(Error::JInvariantCollision { j: j0, p });
    }
    let first = phi.neighbors(j0);
    if on_floor(phi, &first) {
        return Ok(0);
    }
    // (previous, current) pairs
    let mut frontier: Vec<(u64, u64)> = first.into_iter().map(|j| (j0, j)).collect();
    for level in 1..=MAX_LEVELS {
        let mut next = Vec::new();
        for &(prev, cur) in &frontier {
            if is_collision(cur, p) {
                return Err(Error::JInvariantCollision { j: cur, p });
            }
            let mut nbrs = phi.neighbors(cur);
            if on_floor(phi, &nbrs) {
                return Ok(level);
            }
            if let Some(pos) = nbrs.iter().position(|&j| j == prev) {
                nbrs.swap_remove(pos);
            }
            next.extend(nbrs.into_iter().map(|j| (cur, j)));
        }
        frontier = next;
    }
    Err(Error::WalkDiverged)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::builtin_registry;

    #[test]
    fn example_11a1_13() {
        let db = ModularPolynomials::builtin();
        let e = builtin_registry().lookup("11a1").unwrap().reduce(13).unwrap();
        assert_eq!(volcano_level(&e, 3, &db).unwrap(), 0);
    }

    #[test]
    fn collisions_and_missing_data() {
        let db = ModularPolynomials::builtin();
        let e = CurveFp::from_coeffs(101, 1, 0).unwrap();
        assert!(matches!(volcano_level(&e, 2, &db), Err(Error::JInvariantCollision { .. })));
        let e = CurveFp::from_coeffs(101, 0, 1).unwrap();
        assert!(matches!(volcano_level(&e, 3, &db), Err(Error::JInvariantCollision { .. })));
        let e = CurveFp::from_coeffs(101, 2, 3).unwrap();
        assert!(matches!(volcano_level(&e, 37, &db), Err(Error::DataMissing(37))));
    }
}
