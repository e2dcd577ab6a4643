//! Hilbert-polynomial and slope calculus on P1 x P1.
//!
//! Euler characteristics are computed on K-theory classes of line bundles
//! via chi(O(a,b)(m,n)) = (m+a+1)(n+b+1) and additivity. A one-dimensional
//! sheaf has linear Hilbert polynomial rm + sn + t and slope t/(r+s).
//!
//! Bidegree convention: a curve of bidegree (s, r) has Hilbert polynomial
//! rm + sn + r + s - rs, so the support bidegree reads (coefficient of n,
//! coefficient of m) — note the transposition. Every function here sticks
//! to that reading.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exactpoly::{int, ratio_display, vars_mn, Poly, Rational};

/// The line bundle O(a, b).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LineBundle {
    pub a: i64,
    pub b: i64,
}

/// The canonical bundle of P1 x P1.
pub const CANONICAL: LineBundle = LineBundle { a: -2, b: -2 };

impl LineBundle {
    pub fn new(a: i64, b: i64) -> LineBundle {
        LineBundle { a, b }
    }

    pub fn twist(self, (i, j): (i64, i64)) -> LineBundle {
        LineBundle {
            a: self.a + i,
            b: self.b + j,
        }
    }

    /// chi(O(a,b)(m,n)) = (m+a+1)(n+b+1), exactly.
    fn chi_poly(self) -> Poly {
        let vars = vars_mn();
        let m = Poly::variable(&vars, "m").expect("m");
        let n = Poly::variable(&vars, "n").expect("n");
        let left = m.add(&Poly::constant(&vars, int(self.a + 1))).expect("vars");
        let right = n.add(&Poly::constant(&vars, int(self.b + 1))).expect("vars");
        left.mul(&right).expect("vars")
    }
}

impl fmt::Display for LineBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({},{})", self.a, self.b)
    }
}

/// Formal integer combination of line bundles; the K-theory shadow of a
/// complex or resolution. No zero multiplicities are stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct KClass {
    terms: BTreeMap<LineBundle, i64>,
}

impl KClass {
    pub fn zero() -> KClass {
        KClass::default()
    }

    pub fn line_bundle(a: i64, b: i64) -> KClass {
        let mut k = KClass::zero();
        k.add_multiple(LineBundle::new(a, b), 1);
        k
    }

    pub fn add_multiple(&mut self, lb: LineBundle, mult: i64) {
        let entry = self.terms.entry(lb).or_insert(0);
        *entry += mult;
        if *entry == 0 {
            self.terms.remove(&lb);
        }
    }

    pub fn add(&self, other: &KClass) -> KClass {
        let mut out = self.clone();
        for (&lb, &mult) in &other.terms {
            out.add_multiple(lb, mult);
        }
        out
    }

    pub fn neg(&self) -> KClass {
        let mut out = KClass::zero();
        for (&lb, &mult) in &self.terms {
            out.add_multiple(lb, -mult);
        }
        out
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> KClass {
        let mut out = KClass::zero();
        for (&lb, &mult) in &self.terms {
            out.add_multiple(lb, mult * k);
        }
        out
    }

    /// Twist every summand by (i, j).
    pub fn twist(&self, shift: (i64, i64)) -> KClass {
        let mut out = KClass::zero();
        for (&lb, &mult) in &self.terms {
            out.add_multiple(lb.twist(shift), mult);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LineBundle, &i64)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Parse `O(0,0) - 4 O(-1,-2) + O(-2,-2) + 2 O(-1,-3)`.
    pub fn parse(src: &str) -> Result<KClass> {
        parse_kclass(src)
    }
}

impl fmt::Display for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (lb, &mult)) in self.terms.iter().enumerate() {
            if idx == 0 {
                if mult < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if mult < 0 { "-" } else { "+" })?;
            }
            if mult.abs() != 1 {
                write!(f, "{} ", mult.abs())?;
            }
            write!(f, "{}", lb)?;
        }
        Ok(())
    }
}

/// Hilbert polynomial: a polynomial in m, n. Linear rm + sn + t for classes
/// of one-dimensional sheaves; linearity is checked where an operation
/// requires it, never assumed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HilbertPoly(Poly);

impl HilbertPoly {
    pub fn from_poly(p: Poly) -> Result<HilbertPoly> {
        if p.vars() != &vars_mn() {
            return Err(Error::VariableMismatch(
                p.vars().names().join(","),
                "m,n".into(),
            ));
        }
        Ok(HilbertPoly(p))
    }

    /// rm + sn + t.
    pub fn linear(r: i64, s: i64, t: i64) -> HilbertPoly {
        let vars = vars_mn();
        HilbertPoly(
            Poly::from_terms(
                &vars,
                [
                    (vec![1, 0], int(r)),
                    (vec![0, 1], int(s)),
                    (vec![0, 0], int(t)),
                ],
            )
            .expect("linear terms"),
        )
    }

    pub fn parse(src: &str) -> Result<HilbertPoly> {
        Ok(HilbertPoly(Poly::parse(src, &vars_mn())?))
    }

    pub fn poly(&self) -> &Poly {
        &self.0
    }

    pub fn is_linear(&self) -> bool {
        self.0.total_degree() <= 1
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// (r, s, t) of a linear polynomial, as exact rationals.
    pub fn linear_parts(&self) -> Result<(Rational, Rational, Rational)> {
        if !self.is_linear() {
            return Err(Error::RejectedInput(format!(
                "nonlinear Hilbert polynomial {}",
                self.0
            )));
        }
        Ok((
            self.0.coeff(&[1, 0]),
            self.0.coeff(&[0, 1]),
            self.0.coeff(&[0, 0]),
        ))
    }

    /// (r, s, t) of a linear polynomial with integer coefficients.
    pub fn linear_parts_int(&self) -> Result<(i64, i64, i64)> {
        let (r, s, t) = self.linear_parts()?;
        let to_i64 = |q: &Rational, name: &str| -> Result<i64> {
            if q.denom().is_one() {
                q.numer()
                    .try_into()
                    .map_err(|_| Error::RejectedInput(format!("{name} coefficient out of range")))
            } else {
                Err(Error::RejectedInput(format!(
                    "non-integer {name} coefficient {}",
                    ratio_display(q)
                )))
            }
        };
        Ok((to_i64(&r, "m")?, to_i64(&s, "n")?, to_i64(&t, "constant")?))
    }

    pub fn add(&self, other: &HilbertPoly) -> HilbertPoly {
        HilbertPoly(self.0.add(&other.0).expect("shared m,n variables"))
    }

    pub fn sub(&self, other: &HilbertPoly) -> HilbertPoly {
        HilbertPoly(self.0.sub(&other.0).expect("shared m,n variables"))
    }

    /// Exact value chi(F(i,j)) = P(i,j).
    pub fn value_at(&self, (i, j): (i64, i64)) -> Rational {
        self.0
            .eval(&[("m", int(i)), ("n", int(j))])
            .expect("m,n covered")
    }
}

impl fmt::Display for HilbertPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Euler characteristic of a K-class, additive over summands.
pub fn chi(k: &KClass) -> HilbertPoly {
    let mut acc = Poly::zero(&vars_mn());
    for (lb, &mult) in k.terms() {
        acc = acc
            .add(&lb.chi_poly().scale(&int(mult)))
            .expect("shared variables");
    }
    HilbertPoly(acc)
}

/// Hilbert polynomial of the structure sheaf of a curve of bidegree (s, r):
/// rm + sn + r + s - rs.
pub fn structure_sheaf_poly((s, r): (i64, i64)) -> Result<HilbertPoly> {
    if s < 0 || r < 0 || (s == 0 && r == 0) {
        return Err(Error::RejectedInput(format!(
            "curve bidegree ({s}, {r}) must be nonnegative and nonzero"
        )));
    }
    Ok(HilbertPoly::linear(r, s, r + s - r * s))
}

/// Slope t/(r+s) of a linear Hilbert polynomial with r+s > 0.
pub fn slope(p: &HilbertPoly) -> Result<Rational> {
    let (r, s, t) = p.linear_parts()?;
    let denom = &r + &s;
    if denom.is_zero() || denom.is_negative() {
        return Err(Error::RejectedInput(format!(
            "slope of {} needs positive r + s",
            p
        )));
    }
    Ok(t / denom)
}

/// P(m+i, n+j), the Hilbert polynomial of the twisted sheaf.
pub fn twist(p: &HilbertPoly, (i, j): (i64, i64)) -> HilbertPoly {
    HilbertPoly(
        p.0.shift(&[("m", i), ("n", j)])
            .expect("m,n are the variables"),
    )
}

/// Hilbert polynomial of the dual sheaf: rm + sn + t goes to rm + sn - t.
pub fn dual(p: &HilbertPoly) -> Result<HilbertPoly> {
    let (r, s, t) = p.linear_parts()?;
    let vars = vars_mn();
    Ok(HilbertPoly(
        Poly::from_terms(
            &vars,
            [(vec![1, 0], r), (vec![0, 1], s), (vec![0, 0], -t)],
        )
        .expect("linear terms"),
    ))
}

/// Sufficient condition for H^0(F(i,j)) = 0 over every semistable F with
/// Hilbert polynomial P: max{i,j} < 1 - (rs+t)/(r+s). Returns false when
/// inconclusive; it never claims nonvanishing.
pub fn h0_vanishes(p: &HilbertPoly, (i, j): (i64, i64)) -> Result<bool> {
    let (r, s, t) = p.linear_parts()?;
    let denom = &r + &s;
    if !denom.is_positive() {
        return Err(Error::RejectedInput(format!(
            "vanishing test for {} needs positive r + s",
            p
        )));
    }
    let bound = int(1) - (&r * &s + t) / denom;
    Ok(int(i.max(j)) < bound)
}

/// Sufficient condition for H^1(F(i,j)) = 0: min{i,j} > -1 + (rs-t)/(r+s).
pub fn h1_vanishes(p: &HilbertPoly, (i, j): (i64, i64)) -> Result<bool> {
    let (r, s, t) = p.linear_parts()?;
    let denom = &r + &s;
    if !denom.is_positive() {
        return Err(Error::RejectedInput(format!(
            "vanishing test for {} needs positive r + s",
            p
        )));
    }
    let bound = int(-1) + (&r * &s - t) / denom;
    Ok(int(i.min(j)) > bound)
}

/// Support bidegree (s, r) of a linear polynomial: the coefficient of n,
/// then the coefficient of m (the transposed convention noted above).
pub fn support_bidegree(p: &HilbertPoly) -> Result<(i64, i64)> {
    let (r, s, _) = p.linear_parts_int()?;
    Ok((s, r))
}

/// The four twists indexing a cohomology table, in fixed order.
pub const TABLE_TWISTS: [(i64, i64); 4] = [(0, 0), (-1, 0), (0, -1), (-1, -1)];

/// (h^0, h^1) of F at the four twists of [`TABLE_TWISTS`]. Consistency with
/// a Hilbert polynomial means h^0 - h^1 = P(i, j) at each twist.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CohomologyTable {
    pub h: [(u64, u64); 4],
}

impl CohomologyTable {
    pub fn new(h: [(u64, u64); 4]) -> CohomologyTable {
        CohomologyTable { h }
    }

    fn check_consistent(&self, p: &HilbertPoly) -> Result<()> {
        for (idx, &(i, j)) in TABLE_TWISTS.iter().enumerate() {
            let (h0, h1) = self.h[idx];
            let expected = p.value_at((i, j));
            let got = int(h0 as i64) - int(h1 as i64);
            if got != expected {
                return Err(Error::InvariantViolation(format!(
                    "table entry at twist ({i}, {j}) has h0 - h1 = {} but chi = {}",
                    ratio_display(&got),
                    ratio_display(&expected)
                )));
            }
        }
        Ok(())
    }
}

/// First-level tableau of the spectral sequence, as K-classes.
/// `cells[c][j]` holds the class in column i = -c, row j.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BeilinsonTableau {
    pub cells: [[KClass; 2]; 3],
}

/// Build the tableau from a cohomology table and check the K-theory
/// identity: the alternating sum of cell Euler characteristics recovers P.
/// Returns the tableau together with the residual P - sum, which is zero for
/// every consistent table.
pub fn beilinson_identity(
    table: &CohomologyTable,
    p: &HilbertPoly,
) -> Result<(BeilinsonTableau, HilbertPoly)> {
    table.check_consistent(p)?;
    let mut cells: [[KClass; 2]; 3] = Default::default();
    for j in [0usize, 1] {
        let h = |twist_idx: usize| -> i64 {
            let (h0, h1) = table.h[twist_idx];
            if j == 0 {
                h0 as i64
            } else {
                h1 as i64
            }
        };
        cells[0][j] = KClass::line_bundle(0, 0).scale(h(0));
        cells[1][j] = KClass::line_bundle(0, -1)
            .scale(h(2))
            .add(&KClass::line_bundle(-1, 0).scale(h(1)));
        cells[2][j] = KClass::line_bundle(-1, -1).scale(h(3));
    }
    let mut total = Poly::zero(&vars_mn());
    for (c, col) in cells.iter().enumerate() {
        for (j, cell) in col.iter().enumerate() {
            let sign = if (c + j) % 2 == 0 { 1 } else { -1 };
            total = total
                .add(&chi(cell).poly().scale(&int(sign)))
                .expect("shared variables");
        }
    }
    let residual = HilbertPoly(p.poly().sub(&total).expect("shared variables"));
    Ok((BeilinsonTableau { cells }, residual))
}

/// A random cohomology table consistent with P (used by randomized checks).
pub fn random_consistent_table(p: &HilbertPoly, rng: &mut impl Rng) -> Result<CohomologyTable> {
    let mut h = [(0u64, 0u64); 4];
    for (idx, &(i, j)) in TABLE_TWISTS.iter().enumerate() {
        let value = p.value_at((i, j));
        if !value.denom().is_one() {
            return Err(Error::RejectedInput(format!(
                "chi({i}, {j}) = {} is not an integer",
                ratio_display(&value)
            )));
        }
        let chi_val: i64 = value
            .numer()
            .try_into()
            .map_err(|_| Error::RejectedInput("chi out of range".into()))?;
        let h1 = rng.random_range(0..=6i64) + (-chi_val).max(0);
        let h0 = chi_val + h1;
        h[idx] = (h0 as u64, h1 as u64);
    }
    Ok(CohomologyTable::new(h))
}

fn parse_kclass(src: &str) -> Result<KClass> {
    let bytes = src.as_bytes();
    let mut pos = 0usize;
    let mut out = KClass::zero();
    let mut first = true;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    loop {
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            if first {
                return Err(Error::parse(0, "empty K-class"));
            }
            break;
        }
        let sign = match bytes[pos] {
            b'-' => {
                pos += 1;
                -1i64
            }
            b'+' => {
                pos += 1;
                1
            }
            _ if first => 1,
            _ => {
                return Err(Error::parse(pos, "expected `+` or `-` between terms"));
            }
        };
        first = false;
        skip_ws(&mut pos);
        let mut mult = 1i64;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            mult = src[start..pos]
                .parse()
                .map_err(|_| Error::parse(start, "multiplicity out of range"))?;
            skip_ws(&mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                skip_ws(&mut pos);
            }
        }
        if pos >= bytes.len() || bytes[pos] != b'O' {
            return Err(Error::parse(pos, "expected a line bundle `O(a,b)`"));
        }
        pos += 1;
        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != b'(' {
            return Err(Error::parse(pos, "expected `(` after `O`"));
        }
        pos += 1;
        let a = parse_int(src, &mut pos)?;
        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != b',' {
            return Err(Error::parse(pos, "expected `,` in `O(a,b)`"));
        }
        pos += 1;
        let b = parse_int(src, &mut pos)?;
        skip_ws(&mut pos);
        if pos >= bytes.len() || bytes[pos] != b')' {
            return Err(Error::parse(pos, "expected `)` closing `O(a,b)`"));
        }
        pos += 1;
        out.add_multiple(LineBundle::new(a, b), sign * mult);
    }
    Ok(out)
}

fn parse_int(src: &str, pos: &mut usize) -> Result<i64> {
    let bytes = src.as_bytes();
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
    let start = *pos;
    if *pos < bytes.len() && (bytes[*pos] == b'-' || bytes[*pos] == b'+') {
        *pos += 1;
    }
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    src[start..*pos]
        .parse()
        .map_err(|_| Error::parse(start, "expected an integer"))
}
