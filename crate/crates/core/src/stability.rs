//! Finite semistability case analyses.
//!
//! Three enumerations drive the classification: destabilizing
//! structure-sheaf injections into twists of F (Table 1), ideal-sheaf
//! quotients of a twisted structure sheaf (Table 2), and the kernel of the
//! tableau morphism classified by the gcd bidegree of its maximal minors
//! (Table 3). The closed-form inequality 0 <= rr'(s-s') + ss'(r-r') is
//! checked against a brute-force slope comparison on demand.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactpoly::{ratio, Rational};
use crate::sheafcalc::{chi, slope, structure_sheaf_poly, twist, HilbertPoly, KClass};

/// Outcome of a slope comparison against the ambient sheaf.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Destabilizes,
    Allowed,
}

/// Tie handling: semistability tolerates equality, stability does not.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TieMode {
    /// `allowed` on slope <= threshold.
    Semistable,
    /// `allowed` on slope < threshold (strict).
    Stable,
}

/// Verdict of one candidate slope against a threshold.
pub fn verdict_for(slope: &Rational, threshold: &Rational, mode: TieMode) -> Verdict {
    let ok = match mode {
        TieMode::Semistable => slope <= threshold,
        TieMode::Stable => slope < threshold,
    };
    if ok {
        Verdict::Allowed
    } else {
        Verdict::Destabilizes
    }
}

/// One row of a case table.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TableRow {
    /// deg(C), deg(C') or deg(g) depending on the table.
    pub bidegree: (i64, i64),
    /// Kernel line-bundle twist, present in Table 3 only.
    pub kernel_twist: Option<(i64, i64)>,
    pub polys: Vec<HilbertPoly>,
    pub slopes: Vec<Rational>,
    pub verdict: Verdict,
}

/// A candidate subsheaf datum: a subcurve bidegree, a zero-dimensional
/// colength, and the twist applied before comparing slopes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SubsheafCandidate {
    pub bidegree: (i64, i64),
    pub colength: i64,
    pub twist: (i64, i64),
}

impl SubsheafCandidate {
    /// Hilbert polynomial of the ideal I' of C' in O_C, minus the colength.
    pub fn ideal_poly(&self, ambient: (i64, i64)) -> Result<HilbertPoly> {
        let ambient_poly = structure_sheaf_poly(ambient)?;
        let sub_poly = if self.bidegree == (0, 0) {
            HilbertPoly::linear(0, 0, 0)
        } else {
            structure_sheaf_poly(self.bidegree)?
        };
        Ok(ambient_poly
            .sub(&sub_poly)
            .sub(&HilbertPoly::linear(0, 0, self.colength)))
    }

    /// Slope of the twisted ideal sheaf.
    pub fn twisted_slope(&self, ambient: (i64, i64)) -> Result<Rational> {
        slope(&twist(&self.ideal_poly(ambient)?, self.twist))
    }
}

/// Slope of the ambient class 3m + 2n + 1: the comparison threshold.
fn ambient_slope() -> Rational {
    ratio(1, 5)
}

/// All nonzero (s', r') with componentwise bounds, in the printed order:
/// total degree descending, then s' descending.
fn bidegrees_sorted(max_s: i64, max_r: i64, include_ambient: bool) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for s in 0..=max_s {
        for r in 0..=max_r {
            if (s, r) == (0, 0) {
                continue;
            }
            if !include_ambient && (s, r) == (max_s, max_r) {
                continue;
            }
            out.push((s, r));
        }
    }
    out.sort_by(|a, b| {
        (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0))
    });
    out
}

/// Table 1: possibilities for a curve C with an injection O_C -> F(i,j),
/// (i,j) in {(-1,0), (0,-1)}. Columns: P_{O_C}, p(O_C(1,0)), p(O_C(0,1));
/// a row is allowed when either twisted slope stays within 1/5.
pub fn table1() -> Vec<TableRow> {
    let threshold = ambient_slope();
    bidegrees_sorted(2, 3, true)
        .into_iter()
        .map(|bd| {
            let p = structure_sheaf_poly(bd).expect("nonzero bidegree");
            let slopes = vec![
                slope(&twist(&p, (1, 0))).expect("linear"),
                slope(&twist(&p, (0, 1))).expect("linear"),
            ];
            let verdict = if slopes
                .iter()
                .any(|sl| verdict_for(sl, &threshold, TieMode::Semistable) == Verdict::Allowed)
            {
                Verdict::Allowed
            } else {
                Verdict::Destabilizes
            };
            TableRow {
                bidegree: bd,
                kernel_twist: None,
                polys: vec![p],
                slopes,
                verdict,
            }
        })
        .collect()
}

/// Table 2: possibilities for a subcurve C' of the (2,3) curve C. Columns:
/// P_{O_C'}, P_{I'} at colength zero, p(I'(0,1)); allowed on strict
/// comparison with p(O_C(0,1)) = 1/5.
pub fn table2() -> Vec<TableRow> {
    let threshold = ambient_slope();
    bidegrees_sorted(2, 3, false)
        .into_iter()
        .map(|bd| {
            let candidate = SubsheafCandidate {
                bidegree: bd,
                colength: 0,
                twist: (0, 1),
            };
            let sub_poly = structure_sheaf_poly(bd).expect("nonzero bidegree");
            let ideal = candidate.ideal_poly((2, 3)).expect("ambient (2,3)");
            let sl = candidate.twisted_slope((2, 3)).expect("linear");
            let verdict = verdict_for(&sl, &threshold, TieMode::Stable);
            TableRow {
                bidegree: bd,
                kernel_twist: None,
                polys: vec![sub_poly, ideal],
                slopes: vec![sl],
                verdict,
            }
        })
        .collect()
}

/// Gcd bidegrees admissible for a common factor of the maximal minors.
pub const TABLE3_GCD_BIDEGREES: [(i64, i64); 4] = [(1, 0), (0, 1), (0, 2), (1, 1)];

/// Table 3: kernel classification by deg(g). The kernel line bundle is
/// O(g1 - 2, g2 - 3) and the subsheaf it generates has Hilbert polynomial
/// chi([O] - [O(i,j)]); allowed when that subsheaf does not destabilize.
pub fn table3() -> Vec<TableRow> {
    let threshold = ambient_slope();
    TABLE3_GCD_BIDEGREES
        .iter()
        .map(|&(g1, g2)| {
            let kernel = (g1 - 2, g2 - 3);
            let class = KClass::line_bundle(0, 0).sub(&KClass::line_bundle(kernel.0, kernel.1));
            let p = chi(&class);
            let sl = slope(&p).expect("linear");
            TableRow {
                bidegree: (g1, g2),
                kernel_twist: Some(kernel),
                polys: vec![p],
                slopes: vec![sl.clone()],
                verdict: verdict_for(&sl, &threshold, TieMode::Semistable),
            }
        })
        .collect()
}

/// Stability verdict for the structure sheaf of a curve.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum StructureVerdict {
    Stable,
    Semistable,
    /// Reserved for inputs outside the one-dimensional analysis; the
    /// current entry points reject those instead.
    NotApplicable,
}

/// Decide stability of O_C for a curve of bidegree (s, r) by enumerating
/// proper subcurve bidegrees at colength zero, the binding case.
pub fn structure_semistable((s, r): (i64, i64)) -> Result<StructureVerdict> {
    if s < 0 || r < 0 || (s == 0 && r == 0) {
        return Err(Error::RejectedInput(format!(
            "curve bidegree ({s}, {r}) must be nonnegative and nonzero"
        )));
    }
    let ambient = structure_sheaf_poly((s, r))?;
    let threshold = slope(&ambient)?;
    let mut tight = false;
    for s_sub in 0..=s {
        for r_sub in 0..=r {
            if (s_sub, r_sub) == (0, 0) || (s_sub, r_sub) == (s, r) {
                continue;
            }
            let candidate = SubsheafCandidate {
                bidegree: (s_sub, r_sub),
                colength: 0,
                twist: (0, 0),
            };
            let sl = candidate.twisted_slope((s, r))?;
            if sl > threshold {
                return Err(Error::InvariantViolation(format!(
                    "subcurve ({s_sub}, {r_sub}) destabilizes O_C of bidegree ({s}, {r})"
                )));
            }
            if sl == threshold {
                tight = true;
            }
        }
    }
    Ok(if tight {
        StructureVerdict::Semistable
    } else {
        StructureVerdict::Stable
    })
}

/// Closed-form twin of [`structure_semistable`], via the inequality
/// 0 <= rr'(s-s') + ss'(r-r').
pub fn structure_semistable_closed_form((s, r): (i64, i64)) -> Result<StructureVerdict> {
    if s < 0 || r < 0 || (s == 0 && r == 0) {
        return Err(Error::RejectedInput(format!(
            "curve bidegree ({s}, {r}) must be nonnegative and nonzero"
        )));
    }
    let mut tight = false;
    for s_sub in 0..=s {
        for r_sub in 0..=r {
            if (s_sub, r_sub) == (0, 0) || (s_sub, r_sub) == (s, r) {
                continue;
            }
            let value = r * r_sub * (s - s_sub) + s * s_sub * (r - r_sub);
            if value < 0 {
                return Err(Error::InvariantViolation(format!(
                    "inequality fails at ({s_sub}, {r_sub}) inside ({s}, {r})"
                )));
            }
            if value == 0 {
                tight = true;
            }
        }
    }
    Ok(if tight {
        StructureVerdict::Semistable
    } else {
        StructureVerdict::Stable
    })
}

fn equivalence_holds_at(s: i64, r: i64) -> bool {
    let ambient_poly = structure_sheaf_poly((s, r)).expect("nonzero ambient");
    let threshold = slope(&ambient_poly).expect("linear");
    for s_sub in 0..=s {
        for r_sub in 0..=r {
            if (s_sub, r_sub) == (s, r) {
                continue;
            }
            let candidate = SubsheafCandidate {
                bidegree: (s_sub, r_sub),
                colength: 0,
                twist: (0, 0),
            };
            let sl = candidate.twisted_slope((s, r)).expect("proper sub");
            let slope_ok = sl <= threshold;
            let closed_form_ok = r * r_sub * (s - s_sub) + s * s_sub * (r - r_sub) >= 0;
            if slope_ok != closed_form_ok {
                return false;
            }
        }
    }
    true
}

/// Check, over every ambient bidegree within `range`, that the brute-force
/// slope comparison agrees with the closed-form inequality for every proper
/// sub-bidegree. Data-parallel over the ambient grid.
pub fn inequality_equivalence_check(range: i64) -> bool {
    let grid: Vec<(i64, i64)> = (0..=range)
        .flat_map(|s| (0..=range).map(move |r| (s, r)))
        .filter(|&(s, r)| (s, r) != (0, 0))
        .collect();
    #[cfg(feature = "parallel")]
    {
        grid.par_iter().all(|&(s, r)| equivalence_holds_at(s, r))
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid.iter().all(|&(s, r)| equivalence_holds_at(s, r))
    }
}

/// Sequential variant kept callable for benchmarking against the
/// data-parallel path.
pub fn inequality_equivalence_check_serial(range: i64) -> bool {
    (0..=range)
        .flat_map(|s| (0..=range).map(move |r| (s, r)))
        .filter(|&(s, r)| (s, r) != (0, 0))
        .all(|(s, r)| equivalence_holds_at(s, r))
}

/// True when the moduli space of semistable sheaves with polynomial rm + t
/// is empty: both vanishing predicates fire, forcing chi = t = 0 against
/// 0 < t < r.
pub fn empty_moduli(r: i64, t: i64) -> Result<bool> {
    if r < 2 || t <= 0 || t >= r {
        return Err(Error::RejectedInput(format!(
            "empty-moduli test needs r >= 2 and 0 < t < r, got r = {r}, t = {t}"
        )));
    }
    let p = HilbertPoly::linear(r, 0, t);
    Ok(crate::sheafcalc::h0_vanishes(&p, (0, 0))? && crate::sheafcalc::h1_vanishes(&p, (0, 0))?)
}
