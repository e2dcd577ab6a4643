//! Poincare-polynomial calculus for the geometric operations of the
//! classification: projective spaces, products, projective bundles,
//! blow-ups and blow-downs, flips, and the generating function for Hilbert
//! schemes of points on a surface.
//!
//! The variable xi carries H^2, so a smooth projective variety of complex
//! dimension d has a degree-d polynomial. Every space in scope has no odd
//! cohomology; an odd-degree term surfacing anywhere is reported as an
//! invariant violation rather than silently dropped.

mod space;
mod strata;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{vars_xi, Poly, Rational};

pub use space::{evaluate_space, parse_space_expr, SpaceExpr};
pub use strata::{stratum_ledger, validate_ledger, Stratum};

/// Betti numbers (b0, b1, b2, b3, b4) of a smooth projective surface.
pub type Betti = (u64, u64, u64, u64, u64);

/// Polynomial with nonnegative integer coefficients indexed by half-degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PoincarePoly {
    coeffs: Vec<BigInt>,
}

impl PoincarePoly {
    /// Validate and normalize a coefficient list (trailing zeros trimmed).
    pub fn new(mut coeffs: Vec<BigInt>) -> Result<PoincarePoly> {
        if let Some(bad) = coeffs.iter().find(|c| c.is_negative()) {
            return Err(Error::InvariantViolation(format!(
                "negative Betti coefficient {bad}"
            )));
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Ok(PoincarePoly { coeffs })
    }

    pub fn from_ints(coeffs: &[u64]) -> PoincarePoly {
        PoincarePoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
            .expect("nonnegative input")
    }

    pub fn zero() -> PoincarePoly {
        PoincarePoly { coeffs: Vec::new() }
    }

    pub fn one() -> PoincarePoly {
        PoincarePoly::from_ints(&[1])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Degree in xi = complex dimension of the space it describes.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn add(&self, other: &PoincarePoly) -> PoincarePoly {
        PoincarePoly::new(add_signed(&self.coeffs, &other.coeffs)).expect("sum of nonnegatives")
    }

    pub fn mul(&self, other: &PoincarePoly) -> PoincarePoly {
        PoincarePoly::new(mul_signed(&self.coeffs, &other.coeffs))
            .expect("product of nonnegatives")
    }

    /// Subtraction that must stay nonnegative.
    pub fn sub_checked(&self, other: &PoincarePoly) -> Result<PoincarePoly> {
        PoincarePoly::new(sub_signed(&self.coeffs, &other.coeffs))
    }

    /// Interpret an exact polynomial in xi, requiring integer nonnegative
    /// coefficients.
    pub fn from_xi_poly(p: &Poly) -> Result<PoincarePoly> {
        if p.vars() != &vars_xi() {
            return Err(Error::VariableMismatch(
                p.vars().names().join(","),
                "xi".into(),
            ));
        }
        let mut coeffs = vec![BigInt::zero(); p.degree_in(0) as usize + 1];
        for (m, c) in p.terms() {
            if !c.denom().is_one() {
                return Err(Error::RejectedInput(format!(
                    "non-integer coefficient {c} in Poincare polynomial"
                )));
            }
            coeffs[m.0[0] as usize] = c.numer().clone();
        }
        PoincarePoly::new(coeffs)
    }

    pub fn to_xi_poly(&self) -> Poly {
        Poly::from_terms(
            &vars_xi(),
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], Rational::from_integer(c.clone()))),
        )
        .expect("xi terms")
    }

    pub fn parse(src: &str) -> Result<PoincarePoly> {
        PoincarePoly::from_xi_poly(&Poly::parse(src, &vars_xi())?)
    }
}

impl fmt::Display for PoincarePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_xi_poly().fmt(f)
    }
}

pub(crate) fn add_signed(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] += c;
    }
    out
}

pub(crate) fn sub_signed(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] -= c;
    }
    out
}

pub(crate) fn mul_signed(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    out
}

/// P(P^n) = 1 + xi + ... + xi^n.
pub fn p_projective(n: i64) -> Result<PoincarePoly> {
    if n < 0 {
        return Err(Error::RejectedInput(format!(
            "projective space of negative dimension {n}"
        )));
    }
    Ok(PoincarePoly::from_ints(&vec![1u64; n as usize + 1]))
}

/// Kuenneth: P(A x B) = P(A) P(B).
pub fn p_product(a: &PoincarePoly, b: &PoincarePoly) -> PoincarePoly {
    a.mul(b)
}

/// A Zariski-locally-trivial P^k-bundle multiplies by P(P^k).
pub fn p_bundle(base: &PoincarePoly, fiber_dim: u32) -> PoincarePoly {
    base.mul(&p_projective(fiber_dim as i64).expect("nonnegative fiber"))
}

/// Blow-up along a smooth center of the given codimension:
/// P(Bl) = P(X) + (P(P^{codim-1}) - 1) P(Z).
pub fn p_blowup(total: &PoincarePoly, center: &PoincarePoly, codim: u32) -> Result<PoincarePoly> {
    if codim < 1 {
        return Err(Error::RejectedInput(
            "blow-up codimension must be at least 1".into(),
        ));
    }
    let factor = exceptional_factor(codim);
    Ok(total.add(&factor.mul(center)))
}

/// Inverse of [`p_blowup`]; fails when the subtraction goes negative.
pub fn p_blowdown(total: &PoincarePoly, center: &PoincarePoly, codim: u32) -> Result<PoincarePoly> {
    if codim < 1 {
        return Err(Error::RejectedInput(
            "blow-down codimension must be at least 1".into(),
        ));
    }
    let factor = exceptional_factor(codim);
    total
        .sub_checked(&factor.mul(center))
        .map_err(|_| Error::InvariantViolation(
            "blow-down subtraction produced a negative coefficient".into(),
        ))
}

/// xi + xi^2 + ... + xi^{codim-1}, the exceptional-divisor correction.
fn exceptional_factor(codim: u32) -> PoincarePoly {
    let mut coeffs = vec![1u64; codim as usize];
    coeffs[0] = 0;
    PoincarePoly::from_ints(&coeffs)
}

/// Crossing a wall replaces a P^old-bundle over the flipping base by a
/// P^new-bundle: P' = P + (P(P^new) - P(P^old)) P(base). Inconsistent
/// inputs reveal themselves as negative coefficients.
pub fn p_flip(
    total_inf: &PoincarePoly,
    base: &PoincarePoly,
    old_fiber: u32,
    new_fiber: u32,
) -> Result<PoincarePoly> {
    let new_part = p_bundle(base, new_fiber);
    let old_part = p_bundle(base, old_fiber);
    let signed = sub_signed(&add_signed(total_inf.coeffs(), new_part.coeffs()), old_part.coeffs());
    PoincarePoly::new(signed).map_err(|_| {
        Error::InvariantViolation("flip produced a negative coefficient".into())
    })
}

/// Euler characteristic: evaluation at xi = 1.
pub fn euler(p: &PoincarePoly) -> BigInt {
    p.coeffs.iter().sum()
}

/// Poincare duality check: coefficient k equals coefficient dim - k.
pub fn is_palindromic(p: &PoincarePoly, dim: usize) -> bool {
    if p.degree() > dim && !p.is_zero() {
        return false;
    }
    (0..=dim).all(|k| p.coeff(k) == p.coeff(dim - k))
}

/// Dimension 2rs + 1 of the moduli space of sheaves with Hilbert polynomial
/// rm + sn + t on P1 x P1.
pub fn moduli_dimension(r: i64, s: i64) -> Result<i64> {
    if r < 1 || s < 1 {
        return Err(Error::RejectedInput(format!(
            "moduli dimension needs r, s >= 1, got ({r}, {s})"
        )));
    }
    Ok(2 * r * s + 1)
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k.min(n - k) {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

/// Coefficient of x^n in the Hilbert-scheme generating product
///
/// ```text
///            (1 + t^{2k-1} x^k)^{b1} (1 + t^{2k+1} x^k)^{b3}
///  prod  -------------------------------------------------------------
///  k>=1  (1 - t^{2k-2} x^k)^{b0} (1 - t^{2k} x^k)^{b2} (1 - t^{2k+2} x^k)^{b4}
/// ```
///
/// expressed in xi = t^2. Factors with k > truncation are dropped, which is
/// harmless for the x^n coefficient as soon as truncation >= n. Surfaces
/// with odd cohomology produce odd powers of t, which have no xi
/// representation and are reported as an error.
pub fn gottsche(betti: Betti, n: u32, truncation: u32) -> Result<PoincarePoly> {
    if truncation < n {
        return Err(Error::RejectedInput(format!(
            "truncation {truncation} below requested point count {n}"
        )));
    }
    let n = n as usize;
    // acc[d] = coefficient of x^d, a dense polynomial in t.
    let mut acc: Vec<Vec<BigInt>> = vec![Vec::new(); n + 1];
    acc[0] = vec![BigInt::one()];
    let (b0, b1, b2, b3, b4) = betti;
    for k in 1..=(truncation as u64) {
        let kk = k as usize;
        if kk > n {
            break;
        }
        let families: [(u64, u64, bool); 5] = [
            (2 * k - 2, b0, false),
            (2 * k - 1, b1, true),
            (2 * k, b2, false),
            (2 * k + 1, b3, true),
            (2 * k + 2, b4, false),
        ];
        for (t_step, exponent, numerator) in families {
            if exponent == 0 {
                continue;
            }
            let mut factor: Vec<(usize, usize, BigInt)> = Vec::new();
            let mut j = 0u64;
            while (j as usize) * kk <= n {
                let coeff = if numerator {
                    if j > exponent {
                        break;
                    }
                    binomial(exponent, j)
                } else {
                    binomial(exponent + j - 1, j)
                };
                factor.push(((j as usize) * kk, (t_step * j) as usize, coeff));
                j += 1;
            }
            acc = multiply_truncated(&acc, &factor, n);
        }
    }
    let t_poly = &acc[n];
    let mut coeffs = vec![BigInt::zero(); t_poly.len() / 2 + 1];
    for (t_deg, c) in t_poly.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if t_deg % 2 != 0 {
            return Err(Error::InvariantViolation(format!(
                "odd cohomology: t^{t_deg} term survives in the x^{n} coefficient"
            )));
        }
        coeffs[t_deg / 2] = c.clone();
    }
    PoincarePoly::new(coeffs)
}

/// Hilbert scheme of n points with the default truncation n.
pub fn hilb_poincare(betti: Betti, n: u32) -> Result<PoincarePoly> {
    gottsche(betti, n, n)
}

fn multiply_truncated(
    acc: &[Vec<BigInt>],
    factor: &[(usize, usize, BigInt)],
    n: usize,
) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); n + 1];
    for (x_deg, t_poly) in acc.iter().enumerate() {
        if t_poly.is_empty() {
            continue;
        }
        for (fx, ft, fc) in factor {
            let target = x_deg + fx;
            if target > n || fc.is_zero() {
                continue;
            }
            let cell = &mut out[target];
            if cell.len() < t_poly.len() + ft {
                cell.resize(t_poly.len() + ft, BigInt::zero());
            }
            for (t_deg, c) in t_poly.iter().enumerate() {
                if !c.is_zero() {
                    cell[t_deg + ft] += c * fc;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pp(src: &str) -> PoincarePoly {
        PoincarePoly::parse(src).unwrap()
    }

    const P1XP1: Betti = (1, 0, 2, 0, 1);

    #[test]
    fn projective_spaces() {
        assert_eq!(p_projective(0).unwrap(), PoincarePoly::one());
        assert_eq!(p_projective(1).unwrap(), pp("xi + 1"));
        assert_eq!(euler(&p_projective(11).unwrap()), 12.into());
        assert!(matches!(
            p_projective(-1).unwrap_err(),
            Error::RejectedInput(_)
        ));
    }

    #[test]
    fn products() {
        let p8p1 = p_product(&p_projective(8).unwrap(), &p_projective(1).unwrap());
        assert_eq!(
            p8p1,
            PoincarePoly::from_ints(&[1, 2, 2, 2, 2, 2, 2, 2, 2, 1])
        );
        let sq = p_product(&p_projective(1).unwrap(), &p_projective(1).unwrap());
        assert_eq!(sq, pp("xi^2 + 2xi + 1"));
        let any = pp("xi^3 + 5xi + 2");
        assert_eq!(p_product(&any, &PoincarePoly::one()), any);
    }

    #[test]
    fn bundles_and_dimensions() {
        let m1 = p_bundle(
            &p_product(&p_projective(1).unwrap(), &p_projective(2).unwrap()),
            9,
        );
        assert_eq!(m1.degree(), 12);
        let m3 = p_bundle(
            &p_product(&p_projective(8).unwrap(), &p_projective(1).unwrap()),
            1,
        );
        assert_eq!(m3.degree(), 10);
        let base = pp("xi^2 + 3xi + 1");
        assert_eq!(p_bundle(&base, 0), base);
    }

    #[test]
    fn blowup_formula() {
        // Blowing up a 13-fold along P^11 in codimension 2 adds xi P(P^11).
        let m = pp("xi^13 + 1");
        let out = p_blowup(&m, &p_projective(11).unwrap(), 2).unwrap();
        // 1 + xi(1 + ... + xi^11) + xi^13
        assert_eq!(out.coeff(0), 1.into());
        for k in 1..=12 {
            assert_eq!(out.coeff(k), 1.into(), "coefficient {k}");
        }
        assert_eq!(out.coeff(13), 1.into());

        // Codimension 1 leaves the polynomial unchanged.
        assert_eq!(p_blowup(&m, &p_projective(12).unwrap(), 1).unwrap(), m);

        // Del Pezzo check: blow up P^2 at a point.
        let bl = p_blowup(&p_projective(2).unwrap(), &PoincarePoly::one(), 2).unwrap();
        assert_eq!(bl, pp("xi^2 + 2xi + 1"));

        assert!(matches!(
            p_blowup(&m, &PoincarePoly::one(), 0).unwrap_err(),
            Error::RejectedInput(_)
        ));
    }

    #[test]
    fn flip_formula() {
        let total = p_bundle(&hilb_poincare(P1XP1, 2).unwrap(), 9);
        let base = p_product(&p_projective(8).unwrap(), &p_projective(1).unwrap());
        let flipped = p_flip(&total, &base, 2, 1).unwrap();
        assert_eq!(
            flipped,
            PoincarePoly::from_ints(&[1, 4, 9, 11, 12, 12, 12, 12, 12, 12, 11, 9, 4, 1])
        );
        assert_eq!(euler(&flipped), 122.into());
        assert_eq!(euler(&total), 140.into());
        assert_eq!(
            euler(&total) + euler(&p_bundle(&base, 1)) - euler(&p_bundle(&base, 2)),
            (140 + 18 * 2 - 18 * 3).into()
        );

        // Equal fibers change nothing.
        assert_eq!(p_flip(&total, &base, 2, 2).unwrap(), total);

        // Inconsistent inputs go negative and are flagged.
        assert!(matches!(
            p_flip(&PoincarePoly::one(), &p_projective(3).unwrap(), 5, 0).unwrap_err(),
            Error::InvariantViolation(_)
        ));
    }

    #[test]
    fn gottsche_two_points_on_the_quadric() {
        let h2 = gottsche(P1XP1, 2, 2).unwrap();
        assert_eq!(h2, pp("xi^4 + 3xi^3 + 6xi^2 + 3xi + 1"));
        assert_eq!(euler(&h2), 14.into());
    }

    #[test]
    fn gottsche_small_cases() {
        assert_eq!(gottsche(P1XP1, 0, 0).unwrap(), PoincarePoly::one());
        assert_eq!(gottsche(P1XP1, 1, 1).unwrap(), pp("xi^2 + 2xi + 1"));
        assert!(matches!(
            gottsche(P1XP1, 3, 2).unwrap_err(),
            Error::RejectedInput(_)
        ));
    }

    #[test]
    fn gottsche_truncation_stability() {
        for n in 0..=4u32 {
            assert_eq!(
                gottsche(P1XP1, n, n).unwrap(),
                gottsche(P1XP1, n, n + 2).unwrap(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn gottsche_rejects_odd_cohomology() {
        // b1 = 2 (an abelian surface shape) creates odd powers of t.
        let err = gottsche((1, 2, 2, 2, 1), 1, 1).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
    }

    #[test]
    fn palindromic_checks() {
        assert!(is_palindromic(&p_projective(7).unwrap(), 7));
        assert!(!is_palindromic(&pp("2xi + 1"), 2));
        assert!(is_palindromic(&pp("xi^2 + 3xi + 1"), 2));
        assert!(!is_palindromic(&pp("xi^3 + 1"), 2));
    }

    #[test]
    fn moduli_dimensions() {
        assert_eq!(moduli_dimension(3, 2).unwrap(), 13);
        assert_eq!(moduli_dimension(1, 1).unwrap(), 3);
        assert_eq!(moduli_dimension(2, 2).unwrap(), 9);
        assert!(matches!(
            moduli_dimension(0, 2).unwrap_err(),
            Error::RejectedInput(_)
        ));
    }

    proptest! {
        #[test]
        fn hilb_one_is_the_surface(b0 in 1u64..=2, b2 in 0u64..=4, b4 in 1u64..=2) {
            let betti = (b0, 0, b2, 0, b4);
            let surface = PoincarePoly::new(vec![b0.into(), b2.into(), b4.into()]).unwrap();
            prop_assert_eq!(gottsche(betti, 1, 1).unwrap(), surface);
        }

        #[test]
        fn blowup_euler_bookkeeping(
            total in proptest::collection::vec(0u64..5, 1..6),
            center in proptest::collection::vec(0u64..5, 1..4),
            codim in 1u32..=4,
        ) {
            let x = PoincarePoly::from_ints(&total);
            let z = PoincarePoly::from_ints(&center);
            let bl = p_blowup(&x, &z, codim).unwrap();
            let expected = euler(&x)
                + (euler(&p_projective(codim as i64 - 1).unwrap()) - BigInt::from(1u8)) * euler(&z);
            prop_assert_eq!(euler(&bl), expected);
            // Blow-down inverts exactly.
            prop_assert_eq!(p_blowdown(&bl, &z, codim).unwrap(), x);
        }

        #[test]
        fn flip_euler_drop(
            base in proptest::collection::vec(0u64..4, 1..4),
            fiber in 1u32..=3,
            total_pad in 0u64..4,
        ) {
            // When the fiber drops by one projective dimension the Euler
            // characteristic drops by exactly euler(base).
            let b = PoincarePoly::from_ints(&base);
            let old_part = p_bundle(&b, fiber);
            // Build a total that dominates the old bundle so the flip stays
            // nonnegative.
            let total = old_part.add(&PoincarePoly::from_ints(&[total_pad]));
            let flipped = p_flip(&total, &b, fiber, fiber - 1).unwrap();
            prop_assert_eq!(euler(&flipped), euler(&total) - euler(&b));
        }
    }
}
