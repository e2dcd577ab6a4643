//! Bihomogeneous forms in (x, y; z, w) and matrices of such forms.
//!
//! A form of bidegree (a, b) is homogeneous of degree a in x, y and of
//! degree b in z, w. Matrices carry row labels (target bundle twists) and
//! column labels (source bundle twists); a nonzero entry in row k, column l
//! must have bidegree target_k - source_l. This is the machinery behind the
//! kernel classification: maximal minors, their gcd, and exact division.

mod gcd;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{ratio_display, Poly, Rational, VarSet};

pub use gcd::gcd_forms;

/// Variables of the ambient bihomogeneous coordinate ring.
pub fn vars_xyzw() -> VarSet {
    VarSet::new(["x", "y", "z", "w"])
}

/// Graded-lex order on the (x-exponent, z-exponent) key of a term.
fn term_cmp(a: (u32, u32), b: (u32, u32)) -> std::cmp::Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

/// A bihomogeneous form. The key (i, j) stores the coefficient of
/// x^i y^(a-i) z^j w^(b-j); the explicit bidegree tag keeps zero forms
/// label-consistent inside matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BihomForm {
    bidegree: (u32, u32),
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BihomForm {
    pub fn zero(bidegree: (u32, u32)) -> BihomForm {
        BihomForm {
            bidegree,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> BihomForm {
        BihomForm::monomial((0, 0), (0, 0), Rational::one()).expect("unit form")
    }

    pub fn monomial(bidegree: (u32, u32), key: (u32, u32), coeff: Rational) -> Result<BihomForm> {
        let mut f = BihomForm::zero(bidegree);
        f.insert(key, coeff)?;
        Ok(f)
    }

    /// The coordinate forms x, y (bidegree (1,0)) and z, w (bidegree (0,1)).
    pub fn x() -> BihomForm {
        BihomForm::monomial((1, 0), (1, 0), Rational::one()).unwrap()
    }
    pub fn y() -> BihomForm {
        BihomForm::monomial((1, 0), (0, 0), Rational::one()).unwrap()
    }
    pub fn z() -> BihomForm {
        BihomForm::monomial((0, 1), (0, 1), Rational::one()).unwrap()
    }
    pub fn w() -> BihomForm {
        BihomForm::monomial((0, 1), (0, 0), Rational::one()).unwrap()
    }

    fn insert(&mut self, key: (u32, u32), coeff: Rational) -> Result<()> {
        if key.0 > self.bidegree.0 || key.1 > self.bidegree.1 {
            return Err(Error::RejectedInput(format!(
                "exponent pair ({}, {}) outside bidegree box ({}, {})",
                key.0, key.1, self.bidegree.0, self.bidegree.1
            )));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(key).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn bidegree(&self) -> (u32, u32) {
        self.bidegree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<((u32, u32), &Rational)> {
        self.terms
            .iter()
            .max_by(|(k1, _), (k2, _)| term_cmp(**k1, **k2))
            .map(|(k, c)| (*k, c))
    }

    pub fn add(&self, other: &BihomForm) -> Result<BihomForm> {
        if self.bidegree != other.bidegree {
            return Err(Error::RejectedInput(format!(
                "form sum of bidegrees ({}, {}) and ({}, {})",
                self.bidegree.0, self.bidegree.1, other.bidegree.0, other.bidegree.1
            )));
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &BihomForm) -> Result<BihomForm> {
        self.add(&-other.clone())
    }

    pub fn scale(&self, k: &Rational) -> BihomForm {
        let mut out = BihomForm::zero(self.bidegree);
        if k.is_zero() {
            return out;
        }
        for (key, c) in &self.terms {
            out.terms.insert(*key, c * k);
        }
        out
    }

    /// Product of forms; bidegrees add componentwise.
    pub fn form_mul(&self, other: &BihomForm) -> BihomForm {
        let bidegree = (
            self.bidegree.0 + other.bidegree.0,
            self.bidegree.1 + other.bidegree.1,
        );
        let mut out = BihomForm::zero(bidegree);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                out.insert((ka.0 + kb.0, ka.1 + kb.1), ca * cb)
                    .expect("product stays in the summed box");
            }
        }
        out
    }

    /// Rescale so the graded-lex leading coefficient is 1.
    pub fn monic(&self) -> BihomForm {
        match self.leading() {
            Some((_, lc)) => self.scale(&lc.recip()),
            None => self.clone(),
        }
    }

    /// Exact division; errors when `divisor` does not divide.
    pub fn divide_exact(&self, divisor: &BihomForm) -> Result<BihomForm> {
        if divisor.is_zero() {
            return Err(Error::Indivisible("division by the zero form".into()));
        }
        let a = self.bidegree.0.checked_sub(divisor.bidegree.0);
        let b = self.bidegree.1.checked_sub(divisor.bidegree.1);
        let (Some(a), Some(b)) = (a, b) else {
            return Err(Error::Indivisible(format!("{} by {}", self, divisor)));
        };
        if self.is_zero() {
            return Ok(BihomForm::zero((a, b)));
        }
        let quotient = self
            .to_poly()
            .div_exact(&divisor.to_poly())
            .map_err(|_| Error::Indivisible(format!("{} by {}", self, divisor)))?;
        BihomForm::from_poly(&quotient, (a, b))
    }

    /// View as a polynomial in x, y, z, w.
    pub fn to_poly(&self) -> Poly {
        let (a, b) = self.bidegree;
        Poly::from_terms(
            &vars_xyzw(),
            self.terms
                .iter()
                .map(|(&(i, j), c)| (vec![i, a - i, j, b - j], c.clone())),
        )
        .expect("in-box exponents")
    }

    /// Read a 4-variable polynomial back as a form of the stated bidegree.
    pub fn from_poly(p: &Poly, bidegree: (u32, u32)) -> Result<BihomForm> {
        if p.vars() != &vars_xyzw() {
            return Err(Error::VariableMismatch(
                p.vars().names().join(","),
                "x,y,z,w".into(),
            ));
        }
        let mut f = BihomForm::zero(bidegree);
        for (m, c) in p.terms() {
            let (ex, ey, ez, ew) = (m.0[0], m.0[1], m.0[2], m.0[3]);
            if ex + ey != bidegree.0 || ez + ew != bidegree.1 {
                return Err(Error::RejectedInput(format!(
                    "term x^{ex}y^{ey}z^{ez}w^{ew} is not bihomogeneous of bidegree ({}, {})",
                    bidegree.0, bidegree.1
                )));
            }
            f.insert((ex, ez), c.clone())?;
        }
        Ok(f)
    }

    /// Parse `<poly> @(a,b)`, e.g. `xz - yw @(1,1)`.
    pub fn parse(src: &str) -> Result<BihomForm> {
        parse::parse_form(src)
    }
}

impl std::ops::Neg for BihomForm {
    type Output = BihomForm;

    fn neg(mut self) -> BihomForm {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl fmt::Display for BihomForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 @({},{})", self.bidegree.0, self.bidegree.1);
        }
        let mut keys: Vec<(u32, u32)> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| term_cmp(*b, *a));
        let (a, b) = self.bidegree;
        let mut out = String::new();
        for (idx, key) in keys.iter().enumerate() {
            let c = &self.terms[key];
            if idx == 0 {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let abs = c.abs();
            let mut mono = String::new();
            for (name, e) in [
                ("x", key.0),
                ("y", a - key.0),
                ("z", key.1),
                ("w", b - key.1),
            ] {
                if e == 0 {
                    continue;
                }
                mono.push_str(name);
                if e > 1 {
                    mono.push('^');
                    mono.push_str(&e.to_string());
                }
            }
            if mono.is_empty() {
                out.push_str(&ratio_display(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&ratio_display(&abs));
                }
                out.push_str(&mono);
            }
        }
        write!(f, "{} @({},{})", out, a, b)
    }
}

/// A matrix of forms representing a morphism between direct sums of line
/// bundles. Rows are indexed by the target summands, columns by the source
/// summands; the label arithmetic pins every entry's bidegree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BihomMatrix {
    targets: Vec<(i64, i64)>,
    sources: Vec<(i64, i64)>,
    entries: Vec<Vec<BihomForm>>,
}

impl BihomMatrix {
    pub fn new(
        targets: Vec<(i64, i64)>,
        sources: Vec<(i64, i64)>,
        entries: Vec<Vec<BihomForm>>,
    ) -> Result<BihomMatrix> {
        if entries.len() != targets.len() || entries.iter().any(|row| row.len() != sources.len()) {
            return Err(Error::RejectedInput(format!(
                "entry grid does not match {} rows x {} columns",
                targets.len(),
                sources.len()
            )));
        }
        let m = BihomMatrix {
            targets,
            sources,
            entries,
        };
        m.validate()?;
        Ok(m)
    }

    fn expected_bidegree(&self, row: usize, col: usize) -> (i64, i64) {
        (
            self.targets[row].0 - self.sources[col].0,
            self.targets[row].1 - self.sources[col].1,
        )
    }

    fn validate(&self) -> Result<()> {
        for (k, row) in self.entries.iter().enumerate() {
            for (l, entry) in row.iter().enumerate() {
                let (da, db) = self.expected_bidegree(k, l);
                let fits = da >= 0 && db >= 0;
                if entry.is_zero() {
                    if fits && entry.bidegree() != (da as u32, db as u32) {
                        return Err(Error::IllFormedMorphism(format!(
                            "zero entry ({k}, {l}) tagged ({}, {}) but labels give ({da}, {db})",
                            entry.bidegree().0,
                            entry.bidegree().1
                        )));
                    }
                } else if !fits || entry.bidegree() != (da as u32, db as u32) {
                    return Err(Error::IllFormedMorphism(format!(
                        "entry ({k}, {l}) has bidegree ({}, {}) but labels give ({da}, {db})",
                        entry.bidegree().0,
                        entry.bidegree().1
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.targets.len()
    }

    pub fn cols(&self) -> usize {
        self.sources.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> &BihomForm {
        &self.entries[row][col]
    }

    pub fn targets(&self) -> &[(i64, i64)] {
        &self.targets
    }

    pub fn sources(&self) -> &[(i64, i64)] {
        &self.sources
    }

    /// Determinant over a choice of rows and columns (cofactor expansion).
    fn minor_det(&self, rows: &[usize], cols: &[usize]) -> BihomForm {
        debug_assert_eq!(rows.len(), cols.len());
        let expected = {
            let t: (i64, i64) = rows.iter().fold((0, 0), |acc, &k| {
                (acc.0 + self.targets[k].0, acc.1 + self.targets[k].1)
            });
            let s: (i64, i64) = cols.iter().fold((0, 0), |acc, &l| {
                (acc.0 + self.sources[l].0, acc.1 + self.sources[l].1)
            });
            (t.0 - s.0, t.1 - s.1)
        };
        // A negative expected bidegree forces the determinant to vanish;
        // clamp the tag so the zero form stays representable.
        let tag = (expected.0.max(0) as u32, expected.1.max(0) as u32);
        if rows.is_empty() {
            return BihomForm::one();
        }
        let mut acc = BihomForm::zero(tag);
        let row = rows[0];
        let rest: Vec<usize> = rows[1..].to_vec();
        for (pos, &col) in cols.iter().enumerate() {
            let e = &self.entries[row][col];
            if e.is_zero() {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != pos)
                .map(|(_, &c)| c)
                .collect();
            let mut term = e.form_mul(&self.minor_det(&rest, &sub_cols));
            if pos % 2 == 1 {
                term = -term;
            }
            acc = acc.add(&term).expect("cofactor terms share a bidegree");
        }
        acc
    }

    /// Determinant of a 2x2 matrix. The label arithmetic guarantees both
    /// diagonal products share a bidegree; a non-square input is rejected.
    pub fn det2(&self) -> Result<BihomForm> {
        if self.rows() != 2 || self.cols() != 2 {
            return Err(Error::IllFormedMorphism(format!(
                "det2 needs a 2x2 matrix, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        Ok(self.minor_det(&[0, 1], &[0, 1]))
    }

    /// Signed maximal minors of a k x (k+1) matrix: entry j is
    /// (-1)^j times the determinant with column j deleted, so the vector
    /// composes to zero with the matrix (Laplace identity).
    pub fn maximal_minors(&self) -> Result<Vec<BihomForm>> {
        let k = self.rows();
        if self.cols() != k + 1 {
            return Err(Error::RejectedInput(format!(
                "maximal minors need a k x (k+1) matrix, got {}x{}",
                k,
                self.cols()
            )));
        }
        let rows: Vec<usize> = (0..k).collect();
        let mut out = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let cols: Vec<usize> = (0..=k).filter(|&c| c != j).collect();
            let mut minor = self.minor_det(&rows, &cols);
            if j % 2 == 1 {
                minor = -minor;
            }
            out.push(minor);
        }
        Ok(out)
    }

    /// Column matrix whose entries are the signed maximal minors, labelled
    /// so that `self` composes with it: one source summand of twist
    /// sum(targets) - sum(sources).
    pub fn minor_column(&self) -> Result<BihomMatrix> {
        let minors = self.maximal_minors()?;
        let t: (i64, i64) = self
            .targets
            .iter()
            .fold((0, 0), |acc, &v| (acc.0 + v.0, acc.1 + v.1));
        let s: (i64, i64) = self
            .sources
            .iter()
            .fold((0, 0), |acc, &v| (acc.0 + v.0, acc.1 + v.1));
        let kernel_twist = (s.0 - t.0, s.1 - t.1);
        BihomMatrix::new(
            self.sources.clone(),
            vec![kernel_twist],
            minors.into_iter().map(|f| vec![f]).collect(),
        )
    }

    /// True iff the composite `self` after `other` is the zero morphism.
    pub fn compose_zero(&self, other: &BihomMatrix) -> Result<bool> {
        if self.sources != other.targets {
            return Err(Error::RejectedInput(format!(
                "composition shape mismatch: {}x{} after {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        for i in 0..self.rows() {
            for j in 0..other.cols() {
                let (da, db) = (
                    self.targets[i].0 - other.sources[j].0,
                    self.targets[i].1 - other.sources[j].1,
                );
                let tag = (da.max(0) as u32, db.max(0) as u32);
                let mut acc = BihomForm::zero(tag);
                for l in 0..self.cols() {
                    let a = &self.entries[i][l];
                    let b = &other.entries[l][j];
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.form_mul(b))?;
                }
                if !acc.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Parse a row-major bracketed list of forms against the given labels.
    pub fn parse(
        targets: Vec<(i64, i64)>,
        sources: Vec<(i64, i64)>,
        src: &str,
    ) -> Result<BihomMatrix> {
        parse::parse_matrix(targets, sources, src)
    }
}

impl fmt::Display for BihomMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, row) in self.entries.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (l, e) in row.iter().enumerate() {
                if l > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", e)?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
