//! The stratification ledger: a hard-coded data table of the strata of the
//! 13-dimensional moduli space and of their images under the duality
//! isomorphism, with consistency checks instead of derived geometry.

use super::{is_palindromic, p_bundle, p_product, p_projective, PoincarePoly};
use crate::error::{Error, Result};

/// One stratum of the moduli space decomposition.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Stratum {
    pub name: &'static str,
    pub description: &'static str,
    pub codim: u32,
    pub dim: u32,
    /// Absent for the open stratum, whose Betti data the table does not fix.
    pub poincare: Option<PoincarePoly>,
}

const TOTAL_DIM: u32 = 13;

/// The eight ledger entries: M0..M3 and their duals, identical numerics.
pub fn stratum_ledger() -> Vec<Stratum> {
    let m1 = p_bundle(
        &p_product(
            &p_projective(1).expect("P1"),
            &p_projective(2).expect("P2"),
        ),
        9,
    );
    let m2 = p_projective(11).expect("P11");
    let m3 = p_bundle(
        &p_product(
            &p_projective(8).expect("P8"),
            &p_projective(1).expect("P1"),
        ),
        1,
    );
    let primal: [(&'static str, &'static str, u32, Option<PoincarePoly>); 4] = [
        ("M0", "open stratum", 0, None),
        ("M1", "P9-bundle over P1 x P2", 1, Some(m1)),
        ("M2", "P11 of twisted structure sheaves", 2, Some(m2)),
        ("M3", "P1-bundle over P8 x P1", 3, Some(m3)),
    ];
    let dual_names: [(&'static str, &'static str); 4] = [
        ("M0^D", "dual image of M0"),
        ("M1^D", "dual image of M1"),
        ("M2^D", "dual image of M2"),
        ("M3^D", "dual image of M3"),
    ];
    let mut out = Vec::with_capacity(8);
    for (name, description, codim, poincare) in primal.iter().cloned() {
        out.push(Stratum {
            name,
            description,
            codim,
            dim: TOTAL_DIM - codim,
            poincare,
        });
    }
    for (idx, (name, description)) in dual_names.iter().enumerate() {
        let src = &out[idx];
        out.push(Stratum {
            name,
            description,
            codim: src.codim,
            dim: src.dim,
            poincare: src.poincare.clone(),
        });
    }
    out
}

/// Consistency of the ledger: codimensions are exactly {0,1,2,3} on each
/// side, dimensions complement them in 13, and every recorded Poincare
/// polynomial is palindromic of the stratum dimension.
pub fn validate_ledger(strata: &[Stratum]) -> Result<()> {
    let primal: Vec<&Stratum> = strata.iter().filter(|s| !s.name.ends_with("^D")).collect();
    let mut codims: Vec<u32> = primal.iter().map(|s| s.codim).collect();
    codims.sort_unstable();
    if codims != vec![0, 1, 2, 3] {
        return Err(Error::InvariantViolation(format!(
            "stratum codimensions {codims:?} are not {{0,1,2,3}}"
        )));
    }
    for s in strata {
        if s.dim + s.codim != TOTAL_DIM {
            return Err(Error::InvariantViolation(format!(
                "stratum {} has dim {} + codim {} != {TOTAL_DIM}",
                s.name, s.dim, s.codim
            )));
        }
        if let Some(p) = &s.poincare {
            if p.degree() != s.dim as usize {
                return Err(Error::InvariantViolation(format!(
                    "stratum {} polynomial has degree {} but dim {}",
                    s.name,
                    p.degree(),
                    s.dim
                )));
            }
            if !is_palindromic(p, s.dim as usize) {
                return Err(Error::InvariantViolation(format!(
                    "stratum {} polynomial is not palindromic",
                    s.name
                )));
            }
        }
    }
    Ok(())
}
