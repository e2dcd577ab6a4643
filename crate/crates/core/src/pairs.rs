//! Slope calculus for coherent pairs (a sheaf with a one-dimensional space
//! of sections) relative to a positive parameter alpha, and the finder for
//! the walls where strictly semistable pairs occur.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{int, ratio, Rational};
use crate::sheafcalc::HilbertPoly;
use crate::topology::{p_product, p_projective, PoincarePoly};

/// Numerical datum of a coherent pair: the section-space dimension and the
/// Hilbert polynomial of the underlying sheaf.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairClass {
    pub gamma_dim: u32,
    pub poly: HilbertPoly,
}

impl PairClass {
    pub fn new(gamma_dim: u32, poly: HilbertPoly) -> PairClass {
        PairClass { gamma_dim, poly }
    }
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(gamma {}, {})", self.gamma_dim, self.poly)
    }
}

/// p_alpha = (gamma * alpha + t) / (r + s), exactly.
pub fn pair_slope(pc: &PairClass, alpha: &Rational) -> Result<Rational> {
    let (r, s, t) = pc.poly.linear_parts()?;
    let denom = &r + &s;
    if denom.is_zero() || denom.is_negative() {
        return Err(Error::RejectedInput(format!(
            "pair slope of {} needs positive r + s",
            pc.poly
        )));
    }
    Ok((int(pc.gamma_dim as i64) * alpha + t) / denom)
}

/// A wall: the parameter value where a destabilizing subpair has the same
/// alpha-slope as the whole, together with the two summands of the
/// S-equivalence type, the section-carrying part first.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Wall {
    pub alpha: Rational,
    pub destabilizer: PairClass,
    pub complement: PairClass,
}

/// Solve the wall equation for the section-carrying part (r', s', t')
/// inside the whole (r, s, t):
///
/// (alpha + t') / (r' + s') = (alpha + t) / (r + s).
///
/// Returns the strictly positive solution if any. A vanishing denominator
/// with identical slopes means every alpha solves the equation, which is
/// reported as a degenerate wall rather than guessed away.
pub fn wall_alpha(whole: (i64, i64, i64), sub: (i64, i64, i64)) -> Result<Option<Rational>> {
    let (r, s, t) = whole;
    let (r_sub, s_sub, t_sub) = sub;
    let d = (r + s) - (r_sub + s_sub);
    if d == 0 {
        if t * (r_sub + s_sub) == t_sub * (r + s) {
            return Err(Error::DegenerateWall(format!(
                "subpair ({r_sub}m + {s_sub}n + {t_sub}) matches ({r}m + {s}n + {t}) at every alpha"
            )));
        }
        return Ok(None);
    }
    let alpha = ratio(t * (r_sub + s_sub) - t_sub * (r + s), d);
    if alpha.is_positive() {
        Ok(Some(alpha))
    } else {
        Ok(None)
    }
}

/// Enumerate the walls for a linear Hilbert polynomial with r, s >= 0 and
/// r + s > 0. The section-carrying part runs over proper nonzero
/// sub-bidegrees with t' >= r' + s' - r's' (one section generating away from
/// finitely many points); the complement receives section dimension 0.
/// Output is deduplicated and sorted by ascending alpha.
pub fn find_walls(p: &HilbertPoly) -> Result<Vec<Wall>> {
    let (r, s, t) = p.linear_parts_int()?;
    if r < 0 || s < 0 || r + s == 0 {
        return Err(Error::RejectedInput(format!(
            "wall search needs r, s >= 0 and r + s > 0, got {p}"
        )));
    }
    let mut seen: BTreeSet<(Rational, i64, i64, i64)> = BTreeSet::new();
    for r_sub in 0..=r {
        for s_sub in 0..=s {
            if (r_sub, s_sub) == (0, 0) || (r_sub, s_sub) == (r, s) {
                continue;
            }
            let t_min = r_sub + s_sub - r_sub * s_sub;
            // Positivity fails once t' reaches (r'+s')t/(r+s); one past the
            // ceiling is a safe cut-off, asserted below rather than assumed.
            let bound = ((r_sub + s_sub) * t).div_euclid(r + s) + 2;
            if let Some(alpha) = wall_alpha((r, s, t), (r_sub, s_sub, bound))? {
                return Err(Error::InvariantViolation(format!(
                    "wall enumeration bound missed a positive solution alpha = {alpha} \
                     at t' = {bound} for sub ({r_sub}, {s_sub})"
                )));
            }
            for t_sub in t_min..bound {
                if let Some(alpha) = wall_alpha((r, s, t), (r_sub, s_sub, t_sub))? {
                    seen.insert((alpha, r_sub, s_sub, t_sub));
                }
            }
        }
    }
    Ok(seen
        .into_iter()
        .map(|(alpha, r_sub, s_sub, t_sub)| Wall {
            alpha,
            destabilizer: PairClass::new(1, HilbertPoly::linear(r_sub, s_sub, t_sub)),
            complement: PairClass::new(0, HilbertPoly::linear(r - r_sub, s - s_sub, t - t_sub)),
        })
        .collect())
}

/// Wall-crossing geometry for the one supported instance 3m + 2n + 1:
/// the single wall, the Poincare polynomial of the flipping base, and the
/// projective fiber dimensions on the two sides.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WallCrossingData {
    pub wall: Rational,
    pub base_poincare: PoincarePoly,
    /// (fiber dimension above the wall, fiber dimension below).
    pub fiber_dims: (u32, u32),
}

pub fn wall_crossing_data(p: &HilbertPoly) -> Result<WallCrossingData> {
    if *p != HilbertPoly::linear(3, 2, 1) {
        return Err(Error::UnsupportedInstance(format!(
            "wall-crossing data is tabulated for 3m + 2n + 1 only, got {p}"
        )));
    }
    let base = p_product(
        &p_projective(8).expect("P8"),
        &p_projective(1).expect("P1"),
    );
    Ok(WallCrossingData {
        wall: ratio(4, 1),
        base_poincare: base,
        fiber_dims: (2, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::euler;

    fn hp(src: &str) -> HilbertPoly {
        HilbertPoly::parse(src).unwrap()
    }

    /// Exhaustive oracle: scan the full (r', s', t') grid with a wide t'
    /// range and solve the slope equality directly.
    fn oracle_walls(p: &HilbertPoly) -> Vec<(Rational, i64, i64, i64)> {
        let (r, s, t) = p.linear_parts_int().unwrap();
        let mut out = BTreeSet::new();
        for r_sub in 0..=r {
            for s_sub in 0..=s {
                if (r_sub, s_sub) == (0, 0) || (r_sub, s_sub) == (r, s) {
                    continue;
                }
                for t_sub in (r_sub + s_sub - r_sub * s_sub)..=(t.abs() + 20) {
                    // cross-multiplied equality (alpha+t')(r+s) = (alpha+t)(r'+s')
                    let denom = (r + s) - (r_sub + s_sub);
                    if denom == 0 {
                        continue;
                    }
                    let alpha = ratio(t * (r_sub + s_sub) - t_sub * (r + s), denom);
                    if alpha > ratio(0, 1) {
                        out.insert((alpha, r_sub, s_sub, t_sub));
                    }
                }
            }
        }
        out.into_iter().collect()
    }

    #[test]
    fn pair_slope_examples() {
        for a in [ratio(1, 2), ratio(3, 1), ratio(7, 3)] {
            let lhs = pair_slope(&PairClass::new(1, hp("3m+2n+1")), &a).unwrap();
            assert_eq!(lhs, (&a + ratio(1, 1)) / ratio(5, 1));
        }
        let at_wall = pair_slope(&PairClass::new(1, hp("2m+2n")), &ratio(4, 1)).unwrap();
        assert_eq!(at_wall, ratio(1, 1));
        assert_eq!(
            at_wall,
            pair_slope(&PairClass::new(1, hp("3m+2n+1")), &ratio(4, 1)).unwrap()
        );
        for a in [ratio(1, 1), ratio(9, 2)] {
            assert_eq!(
                pair_slope(&PairClass::new(0, hp("m+1")), &a).unwrap(),
                ratio(1, 1)
            );
        }
        assert!(pair_slope(&PairClass::new(1, hp("5")), &ratio(1, 1)).is_err());
    }

    #[test]
    fn single_wall_at_four() {
        let walls = find_walls(&hp("3m+2n+1")).unwrap();
        assert_eq!(walls.len(), 1);
        let wall = &walls[0];
        assert_eq!(wall.alpha, ratio(4, 1));
        assert_eq!(wall.destabilizer, PairClass::new(1, hp("2m+2n")));
        assert_eq!(wall.complement, PairClass::new(0, hp("m+1")));
    }

    #[test]
    fn no_walls_for_small_polynomials() {
        assert!(find_walls(&hp("m+n+1")).unwrap().is_empty());
        assert_eq!(oracle_walls(&hp("m+n+1")), vec![]);
    }

    #[test]
    fn enumeration_matches_oracle() {
        for src in ["3m+2n+1", "2m+2n+1", "m+n+1", "3m+3n+3", "2m+n+2", "4m+2n+3"] {
            let p = hp(src);
            let got: Vec<(Rational, i64, i64, i64)> = find_walls(&p)
                .unwrap()
                .into_iter()
                .map(|w| {
                    let (r, s, t) = w.destabilizer.poly.linear_parts_int().unwrap();
                    (w.alpha, r, s, t)
                })
                .collect();
            assert_eq!(got, oracle_walls(&p), "walls for {src}");
        }
    }

    #[test]
    fn wall_invariants() {
        for src in ["3m+2n+1", "3m+3n+3", "4m+2n+3"] {
            let p = hp(src);
            for wall in find_walls(&p).unwrap() {
                let whole = pair_slope(&PairClass::new(1, p.clone()), &wall.alpha).unwrap();
                let sub = pair_slope(&wall.destabilizer, &wall.alpha).unwrap();
                let quot = pair_slope(&wall.complement, &wall.alpha).unwrap();
                assert_eq!(sub, whole);
                assert_eq!(quot, whole);
                assert_eq!(
                    wall.destabilizer.poly.add(&wall.complement.poly),
                    p,
                    "additivity at alpha = {}",
                    wall.alpha
                );
                assert_eq!(
                    wall.destabilizer.gamma_dim + wall.complement.gamma_dim,
                    1
                );
            }
        }
    }

    #[test]
    fn walls_sorted_and_deduplicated() {
        let walls = find_walls(&hp("3m+3n+3")).unwrap();
        assert!(!walls.is_empty());
        for pair in walls.windows(2) {
            assert!(pair[0].alpha <= pair[1].alpha, "not sorted ascending");
            assert_ne!(pair[0], pair[1], "duplicate wall");
        }
        let keys: BTreeSet<String> = walls
            .iter()
            .map(|w| format!("{}|{}", w.alpha, w.destabilizer))
            .collect();
        assert_eq!(keys.len(), walls.len());
    }

    #[test]
    fn swapping_roles_finds_the_same_walls() {
        // Enumerating the section-free side and taking complements must hit
        // the same (alpha, destabilizer) set.
        for src in ["3m+2n+1", "3m+3n+3"] {
            let p = hp(src);
            let (r, s, t) = p.linear_parts_int().unwrap();
            let mut swapped = BTreeSet::new();
            for r_quot in 0..=r {
                for s_quot in 0..=s {
                    if (r_quot, s_quot) == (0, 0) || (r_quot, s_quot) == (r, s) {
                        continue;
                    }
                    let (r_sub, s_sub) = (r - r_quot, s - s_quot);
                    if (r_sub, s_sub) == (0, 0) {
                        continue;
                    }
                    let t_min = r_sub + s_sub - r_sub * s_sub;
                    for t_sub in t_min..=(t.abs() + 20) {
                        if let Some(alpha) =
                            wall_alpha((r, s, t), (r_sub, s_sub, t_sub)).unwrap()
                        {
                            swapped.insert((alpha, r_sub, s_sub, t_sub));
                        }
                    }
                }
            }
            let direct: BTreeSet<_> = find_walls(&p)
                .unwrap()
                .into_iter()
                .map(|w| {
                    let (a, b, c) = w.destabilizer.poly.linear_parts_int().unwrap();
                    (w.alpha, a, b, c)
                })
                .collect();
            assert_eq!(direct, swapped, "role swap for {src}");
        }
    }

    #[test]
    fn degenerate_wall_reported() {
        // Same total degree and identical slope: every alpha solves.
        let err = wall_alpha((1, 1, 2), (2, 0, 2)).unwrap_err();
        assert!(matches!(err, Error::DegenerateWall(_)));
        // Same total degree, different slope: no solution.
        assert_eq!(wall_alpha((1, 1, 2), (2, 0, 1)).unwrap(), None);
    }

    #[test]
    fn crossing_data_for_the_instance() {
        let data = wall_crossing_data(&hp("3m+2n+1")).unwrap();
        assert_eq!(data.wall, ratio(4, 1));
        assert_eq!(data.fiber_dims, (2, 1));
        assert_eq!(euler(&data.base_poincare), 18.into());
        assert_eq!(data.base_poincare.degree(), 9);
        assert!(matches!(
            wall_crossing_data(&hp("2m+2n+1")).unwrap_err(),
            Error::UnsupportedInstance(_)
        ));
    }

    #[test]
    fn rejected_inputs() {
        assert!(matches!(
            find_walls(&hp("mn")).unwrap_err(),
            Error::RejectedInput(_)
        ));
        assert!(matches!(
            find_walls(&hp("7")).unwrap_err(),
            Error::RejectedInput(_)
        ));
    }
}
