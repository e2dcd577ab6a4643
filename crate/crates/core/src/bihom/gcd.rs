//! Greatest common divisor of bihomogeneous forms.
//!
//! Strategy: strip the monomial content of each input, dehomogenize at
//! y = 1, w = 1 into Q[x, z], run a primitive-PRS Euclidean algorithm on the
//! result viewed as a polynomial in x with coefficients in Q[z], then
//! rehomogenize using the recorded degrees. The common monomial factor is
//! restored at the end and the output is normalized to leading coefficient 1
//! under the graded-lex term order.

use super::BihomForm;
use crate::error::{Error, Result};
use crate::exactpoly::{vars_xz, Poly, Rational};

/// gcd of a family of forms; at least one input must be nonzero.
pub fn gcd_forms(fs: &[BihomForm]) -> Result<BihomForm> {
    let nonzero: Vec<&BihomForm> = fs.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::UndefinedGcd);
    }

    let mut mono = monomial_content(nonzero[0]);
    for f in &nonzero[1..] {
        let c = monomial_content(f);
        mono = (
            mono.0.min(c.0),
            mono.1.min(c.1),
            mono.2.min(c.2),
            mono.3.min(c.3),
        );
    }

    let mut gcd_affine: Option<Poly> = None;
    for f in &nonzero {
        let affine = dehomogenize(&strip_content(f));
        gcd_affine = Some(match gcd_affine {
            None => affine,
            Some(prev) => bivariate_gcd(&prev, &affine)?,
        });
    }
    let h = gcd_affine.expect("nonzero family");

    let core = rehomogenize(&h)?;
    let (alpha, beta, gamma, delta) = mono;
    let mono_form = BihomForm::monomial(
        (alpha + beta, gamma + delta),
        (alpha, gamma),
        Rational::from_integer(1.into()),
    )?;
    let g = core.form_mul(&mono_form).monic();

    debug_assert!(nonzero.iter().all(|f| {
        g.bidegree().0 <= f.bidegree().0 && g.bidegree().1 <= f.bidegree().1
    }));
    Ok(g)
}

/// Largest monomial x^a y^b z^c w^d dividing the form.
fn monomial_content(f: &BihomForm) -> (u32, u32, u32, u32) {
    let (a, b) = f.bidegree();
    let mut min_x = a;
    let mut max_x = 0;
    let mut min_z = b;
    let mut max_z = 0;
    for (&(i, j), _) in f.terms() {
        min_x = min_x.min(i);
        max_x = max_x.max(i);
        min_z = min_z.min(j);
        max_z = max_z.max(j);
    }
    (min_x, a - max_x, min_z, b - max_z)
}

fn strip_content(f: &BihomForm) -> BihomForm {
    let (alpha, beta, gamma, delta) = monomial_content(f);
    let (a, b) = f.bidegree();
    let mut out = BihomForm::zero((a - alpha - beta, b - gamma - delta));
    for (&(i, j), c) in f.terms() {
        out.insert((i - alpha, j - gamma), c.clone())
            .expect("stripped exponents stay in the box");
    }
    out
}

fn dehomogenize(f: &BihomForm) -> Poly {
    Poly::from_terms(
        &vars_xz(),
        f.terms().map(|(&(i, j), c)| (vec![i, j], c.clone())),
    )
    .expect("two-variable terms")
}

/// Inverse of [`dehomogenize`] for content-free forms: the bidegree is read
/// off the affine degrees.
fn rehomogenize(p: &Poly) -> Result<BihomForm> {
    let dx = p.degree_in(0);
    let dz = p.degree_in(1);
    let mut out = BihomForm::zero((dx, dz));
    for (m, c) in p.terms() {
        out.insert((m.0[0], m.0[1]), c.clone())?;
    }
    Ok(out)
}

fn deg_x(p: &Poly) -> u32 {
    p.degree_in(0)
}

fn deg_z(p: &Poly) -> u32 {
    p.degree_in(1)
}

/// Coefficient of x^k, a polynomial in z alone.
fn x_coeff(p: &Poly, k: u32) -> Poly {
    Poly::from_terms(
        &vars_xz(),
        p.terms()
            .filter(|(m, _)| m.0[0] == k)
            .map(|(m, c)| (vec![0, m.0[1]], c.clone())),
    )
    .expect("projection keeps arity")
}

fn z_monomial(k: u32, c: Rational) -> Poly {
    Poly::from_terms(&vars_xz(), [(vec![0u32, k], c)]).expect("monomial")
}

/// Division with remainder for polynomials in z alone.
fn divmod_z(a: &Poly, b: &Poly) -> (Poly, Poly) {
    let db = deg_z(b);
    let lcb = b.coeff(&[0, db]);
    let mut r = a.clone();
    let mut q = Poly::zero(&vars_xz());
    while !r.is_zero() && deg_z(&r) >= db {
        let dr = deg_z(&r);
        let lcr = r.coeff(&[0, dr]);
        let step = z_monomial(dr - db, lcr / &lcb);
        q = q.add(&step).expect("same vars");
        r = r.sub(&step.mul(b).expect("same vars")).expect("same vars");
    }
    (q, r)
}

/// Monic gcd in Q[z].
fn gcd_z(a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let (_, r) = divmod_z(&a, &b);
        a = b;
        b = r;
    }
    if a.is_zero() {
        return a;
    }
    let lc = a.coeff(&[0, deg_z(&a)]);
    a.scale(&lc.recip())
}

/// Content in Q[z] of a polynomial viewed in Q[z][x].
fn content_x(p: &Poly) -> Poly {
    let mut c = Poly::zero(&vars_xz());
    for k in 0..=deg_x(p) {
        let coeff = x_coeff(p, k);
        if coeff.is_zero() {
            continue;
        }
        c = gcd_z(&c, &coeff);
        if deg_z(&c) == 0 && !c.is_zero() {
            break;
        }
    }
    c
}

/// Pseudo-remainder of `a` by `b` in Q[z][x]; only used up to content.
fn prem_x(a: &Poly, b: &Poly) -> Poly {
    let db = deg_x(b);
    let lcb = x_coeff(b, db);
    let mut r = a.clone();
    while !r.is_zero() && deg_x(&r) >= db {
        let dr = deg_x(&r);
        let lcr = x_coeff(&r, dr);
        let shift = Poly::from_terms(&vars_xz(), [(vec![dr - db, 0], Rational::from_integer(1.into()))])
            .expect("monomial");
        let lead = lcr.mul(&shift).expect("same vars").mul(b).expect("same vars");
        r = lcb
            .mul(&r)
            .expect("same vars")
            .sub(&lead)
            .expect("same vars");
    }
    r
}

/// Primitive-PRS gcd in Q[x, z].
fn bivariate_gcd(f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Ok(g.clone());
    }
    if g.is_zero() {
        return Ok(f.clone());
    }
    let cf = content_x(f);
    let cg = content_x(g);
    let c = gcd_z(&cf, &cg);
    let mut a = f.div_exact(&cf)?;
    let mut b = g.div_exact(&cg)?;
    if deg_x(&a) < deg_x(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if b.is_zero() {
            break;
        }
        if deg_x(&b) == 0 {
            // primitive and x-free means a unit
            a = Poly::one(&vars_xz());
            break;
        }
        let r = prem_x(&a, &b);
        a = b;
        b = if r.is_zero() {
            r
        } else {
            let cr = content_x(&r);
            r.div_exact(&cr)?
        };
    }
    c.mul(&a)
}

#[cfg(test)]
mod tests {
    use super::super::vars_xyzw;
    use super::*;
    use crate::exactpoly::int;
    use proptest::prelude::*;

    fn form(src: &str) -> BihomForm {
        BihomForm::parse(src).unwrap()
    }

    #[test]
    fn gcd_of_monomials() {
        let g = gcd_forms(&[form("xz @(1,1)"), form("xw @(1,1)")]).unwrap();
        assert_eq!(g, BihomForm::x());
    }

    #[test]
    fn coprime_forms_have_unit_gcd() {
        let g = gcd_forms(&[form("xz - yw @(1,1)"), form("xw @(1,1)")]).unwrap();
        assert_eq!(g, BihomForm::one());
        // Resultant oracle: Res_x of the dehomogenized pair must be nonzero
        // for x-coprimality; monomial contents share no factor either.
        let f1 = Poly::parse("xz - 1", &vars_xz()).unwrap();
        let f2 = Poly::parse("x", &vars_xz()).unwrap();
        assert!(!resultant_x(&f1, &f2).is_zero());
    }

    /// Sylvester resultant in x of two polynomials in Q[z][x] (test oracle).
    fn resultant_x(f: &Poly, g: &Poly) -> Poly {
        let df = deg_x(f) as usize;
        let dg = deg_x(g) as usize;
        let n = df + dg;
        let mut rows: Vec<Vec<Poly>> = Vec::new();
        for shift in 0..dg {
            let mut row = vec![Poly::zero(&vars_xz()); n];
            for (k, cell) in row.iter_mut().enumerate().skip(shift).take(df + 1) {
                *cell = x_coeff(f, (df - (k - shift)) as u32);
            }
            rows.push(row);
        }
        for shift in 0..df {
            let mut row = vec![Poly::zero(&vars_xz()); n];
            for (k, cell) in row.iter_mut().enumerate().skip(shift).take(dg + 1) {
                *cell = x_coeff(g, (dg - (k - shift)) as u32);
            }
            rows.push(row);
        }
        poly_det(&rows)
    }

    fn poly_det(m: &[Vec<Poly>]) -> Poly {
        let n = m.len();
        if n == 0 {
            return Poly::one(&vars_xz());
        }
        let mut acc = Poly::zero(&vars_xz());
        for col in 0..n {
            if m[0][col].is_zero() {
                continue;
            }
            let sub: Vec<Vec<Poly>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != col)
                        .map(|(_, p)| p.clone())
                        .collect()
                })
                .collect();
            let mut term = m[0][col].mul(&poly_det(&sub)).unwrap();
            if col % 2 == 1 {
                term = -term;
            }
            acc = acc.add(&term).unwrap();
        }
        acc
    }

    #[test]
    fn gcd_pulls_out_common_monomial() {
        // gcd must see factors of y and w that vanish on dehomogenization.
        let g = gcd_forms(&[form("yz @(1,1)"), form("yw @(1,1)")]).unwrap();
        assert_eq!(g, BihomForm::y());
        let g = gcd_forms(&[form("xyzw @(2,2)"), form("y^2w^2 @(2,2)")]).unwrap();
        assert_eq!(g, form("yw @(1,1)"));
    }

    #[test]
    fn gcd_divides_every_input() {
        let inputs = [
            form("x^2z + xyz @(2,1)"),
            form("x^2w + xyw @(2,1)"),
            form("x^3z^2 + x^2yz^2 @(3,2)"),
        ];
        let g = gcd_forms(&inputs).unwrap();
        assert_eq!(g, form("x^2 + xy @(2,0)").monic());
        for f in &inputs {
            let q = f.divide_exact(&g).unwrap();
            assert_eq!(q.form_mul(&g), *f);
        }
    }

    #[test]
    fn all_zero_inputs_rejected() {
        let err = gcd_forms(&[BihomForm::zero((1, 1)), BihomForm::zero((2, 0))]).unwrap_err();
        assert_eq!(err, Error::UndefinedGcd);
    }

    #[test]
    fn zero_entries_are_skipped() {
        let g = gcd_forms(&[BihomForm::zero((3, 3)), form("xw @(1,1)")]).unwrap();
        assert_eq!(g, form("xw @(1,1)"));
    }

    #[test]
    fn table_kernel_case() {
        // A 3x4 matrix whose minors share the factor w: the kernel twist
        // drops by (0, 1), the surviving case of the classification.
        use super::super::BihomMatrix;
        let m = BihomMatrix::new(
            vec![(0, -1), (-1, 0), (-1, 0)],
            vec![(-1, -1); 4],
            vec![
                vec![
                    BihomForm::x(),
                    BihomForm::y(),
                    BihomForm::zero((1, 0)),
                    BihomForm::zero((1, 0)),
                ],
                vec![
                    BihomForm::z(),
                    BihomForm::zero((0, 1)),
                    BihomForm::w(),
                    BihomForm::zero((0, 1)),
                ],
                vec![
                    BihomForm::zero((0, 1)),
                    BihomForm::z(),
                    BihomForm::zero((0, 1)),
                    BihomForm::w(),
                ],
            ],
        )
        .unwrap();
        let minors = m.maximal_minors().unwrap();
        let g = gcd_forms(&minors).unwrap();
        assert_eq!(g, BihomForm::w());
        // eta = zeta / g still composes to zero with the matrix.
        let eta: Vec<BihomForm> = minors
            .iter()
            .map(|z| z.divide_exact(&g).unwrap())
            .collect();
        let eta_col = BihomMatrix::new(
            vec![(-1, -1); 4],
            vec![(-2, -2)],
            eta.into_iter().map(|f| vec![f]).collect(),
        )
        .unwrap();
        assert!(m.compose_zero(&eta_col).unwrap());
    }

    fn arb_form(max_bi: (u32, u32)) -> impl Strategy<Value = BihomForm> {
        (0..=max_bi.0, 0..=max_bi.1).prop_flat_map(|(a, b)| {
            proptest::collection::vec((0..=a, 0..=b, -3i64..=3), 1..=3).prop_map(
                move |terms| {
                    let mut f = BihomForm::zero((a, b));
                    for (i, j, c) in terms {
                        f.insert((i, j), int(c)).unwrap();
                    }
                    f
                },
            )
        })
    }

    proptest! {
        #[test]
        fn multiply_then_gcd(f in arb_form((2, 1)), g in arb_form((1, 2))) {
            prop_assume!(!f.is_zero() && !g.is_zero());
            prop_assume!(gcd_forms(&[f.clone(), g.clone()]).unwrap() == BihomForm::one());
            let x = BihomForm::x();
            let got = gcd_forms(&[x.form_mul(&f), x.form_mul(&g)]).unwrap();
            prop_assert_eq!(got, x);
        }

        #[test]
        fn gcd_output_divides_inputs(f in arb_form((2, 2)), g in arb_form((2, 2))) {
            prop_assume!(!f.is_zero() || !g.is_zero());
            let d = gcd_forms(&[f.clone(), g.clone()]).unwrap();
            for input in [&f, &g] {
                if !input.is_zero() {
                    let q = input.divide_exact(&d).unwrap();
                    prop_assert_eq!(q.form_mul(&d), input.clone());
                }
            }
        }

        #[test]
        fn common_factor_detected(h in arb_form((1, 1)), f in arb_form((1, 1)), g in arb_form((1, 1))) {
            prop_assume!(!h.is_zero() && !f.is_zero() && !g.is_zero());
            let d = gcd_forms(&[h.form_mul(&f), h.form_mul(&g)]).unwrap();
            // h divides the gcd of its multiples.
            prop_assert!(d.divide_exact(&h.monic()).is_ok());
        }

        #[test]
        fn dehom_rehom_roundtrip(f in arb_form((3, 3))) {
            prop_assume!(!f.is_zero());
            let stripped = strip_content(&f);
            let back = rehomogenize(&dehomogenize(&stripped)).unwrap();
            prop_assert_eq!(back, stripped);
        }
    }

    #[test]
    fn four_var_poly_conversion() {
        let f = form("x^2zw + 2xyw^2 @(2,2)");
        let p = f.to_poly();
        assert_eq!(p.vars(), &vars_xyzw());
        assert_eq!(BihomForm::from_poly(&p, (2, 2)).unwrap(), f);
    }
}
