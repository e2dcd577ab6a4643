//! Sparse exact polynomial arithmetic over the rationals in named variables.
//!
//! Polynomials are term maps from exponent vectors to nonzero rational
//! coefficients, kept in graded-lexicographic order so printing and golden
//! files are deterministic. Coefficients are arbitrary-precision rationals;
//! nothing in this module ever rounds.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Rational = num_rational::BigRational;

/// Integer part of a [`Rational`].
pub type Integer = num_bigint::BigInt;

/// Build a rational from an integer pair.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

/// Build a rational from an integer.
pub fn int(num: i64) -> Rational {
    Rational::from(Integer::from(num))
}

/// Render a rational as `num/den`, keeping an explicit `/1` for integers.
///
/// Used for JSON payloads, where rationals must never be mistaken for floats.
pub fn ratio_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Render a rational the way a person would write it: `2/5`, `-1`, `0`.
pub fn ratio_display(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An ordered set of variable names shared by a family of polynomials.
///
/// Lexing is greedy on the longest name, so `xi` is one variable while `mn`
/// splits into `m` and `n` when both are declared.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarSet(Arc<[String]>);

impl VarSet {
    pub fn new<I, S>(names: I) -> VarSet
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        VarSet(names.into_iter().map(Into::into).collect())
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|v| v == name)
    }

    fn joined(&self) -> String {
        self.0.join(",")
    }
}

/// Variables of Hilbert polynomials.
pub fn vars_mn() -> VarSet {
    VarSet::new(["m", "n"])
}

/// Variable of Poincare polynomials.
pub fn vars_xi() -> VarSet {
    VarSet::new(["xi"])
}

/// Affine chart variables used by the bihomogeneous-form gcd.
pub fn vars_xz() -> VarSet {
    VarSet::new(["x", "z"])
}

/// Exponent vector of a term, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise difference, `None` when `other` does not divide `self`.
    fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<u32>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Invariants: no stored zero coefficient; every exponent vector has the
/// arity of the variable set.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    vars: VarSet,
    terms: BTreeMap<Monomial, Rational>,
}

impl Poly {
    pub fn zero(vars: &VarSet) -> Poly {
        Poly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &VarSet, value: Rational) -> Poly {
        let mut p = Poly::zero(vars);
        if !value.is_zero() {
            p.terms.insert(Monomial(vec![0; vars.len()]), value);
        }
        p
    }

    pub fn one(vars: &VarSet) -> Poly {
        Poly::constant(vars, Rational::one())
    }

    pub fn variable(vars: &VarSet, name: &str) -> Result<Poly> {
        let idx = vars
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut exps = vec![0u32; vars.len()];
        exps[idx] = 1;
        let mut p = Poly::zero(vars);
        p.terms.insert(Monomial(exps), Rational::one());
        Ok(p)
    }

    /// Build from raw `(exponents, coefficient)` pairs; zero terms are pruned
    /// and repeated monomials accumulate.
    pub fn from_terms<I>(vars: &VarSet, terms: I) -> Result<Poly>
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Poly::zero(vars);
        for (exps, coeff) in terms {
            if exps.len() != vars.len() {
                return Err(Error::RejectedInput(format!(
                    "exponent vector of arity {} for variable set [{}]",
                    exps.len(),
                    vars.joined()
                )));
            }
            p.add_term(Monomial(exps), coeff);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_constant)
    }

    /// Total degree; zero polynomial reports degree 0.
    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent of one variable across all terms.
    pub fn degree_in(&self, var_index: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var_index]).max().unwrap_or(0)
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.vars.len()])
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    /// Leading term under graded-lex (the largest monomial).
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    fn check_same_vars(&self, other: &Poly) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch(
                self.vars.joined(),
                other.vars.joined(),
            ))
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&-other.clone())
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero(&self.vars);
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same_vars(other)?;
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut out = Poly::one(&self.vars);
        for _ in 0..exp {
            out = out.mul(self).expect("same variable set");
        }
        out
    }

    /// Substitute `v -> v + offset` for each listed variable.
    pub fn shift(&self, offsets: &[(&str, i64)]) -> Result<Poly> {
        let mut delta = vec![0i64; self.vars.len()];
        for (name, off) in offsets {
            let idx = self
                .vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            delta[idx] += off;
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut term = Poly::constant(&self.vars, c.clone());
            for (idx, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let var = Poly::variable(&self.vars, &self.vars.names()[idx])?;
                let base = var.add(&Poly::constant(&self.vars, int(delta[idx])))?;
                term = term.mul(&base.pow(e))?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Evaluate at a point covering every variable.
    pub fn eval(&self, point: &[(&str, Rational)]) -> Result<Rational> {
        let mut values: Vec<Option<&Rational>> = vec![None; self.vars.len()];
        for (name, value) in point {
            let idx = self
                .vars
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            values[idx] = Some(value);
        }
        for (idx, v) in values.iter().enumerate() {
            if v.is_none() {
                return Err(Error::MissingAssignment(self.vars.names()[idx].clone()));
            }
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (idx, &e) in m.0.iter().enumerate() {
                let v = values[idx].expect("checked above");
                for _ in 0..e {
                    term *= v;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact multivariate division; `Err(Indivisible)` when the divisor does
    /// not divide. Repeatedly cancels graded-lex leading terms, which is
    /// complete for exact divisions.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        self.check_same_vars(divisor)?;
        if divisor.is_zero() {
            return Err(Error::Indivisible("division by zero polynomial".into()));
        }
        let (dm, dc) = divisor.leading_term().expect("nonzero divisor");
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Poly::zero(&self.vars);
        while let Some((lm, lc)) = rem.leading_term() {
            let Some(q) = lm.div(&dm) else {
                return Err(Error::Indivisible(format!("{} by {}", self, divisor)));
            };
            let qc = lc / &dc;
            quot.add_term(q.clone(), qc.clone());
            let mut partial = Poly::zero(&self.vars);
            partial.terms.insert(q, qc);
            rem = rem.sub(&partial.mul(divisor)?)?;
        }
        Ok(quot)
    }

    /// Parse text in this variable set; see the module-level grammar notes.
    pub fn parse(src: &str, vars: &VarSet) -> Result<Poly> {
        parse::parse_poly(src, vars)
    }

    /// Canonical compact rendering without spaces, e.g. `3m+2n-1`.
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if spaced {
                out.push_str(if neg { " - " } else { " + " });
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                out.push_str(&ratio_display(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&ratio_display(&abs));
                }
                out.push_str(&mono);
            }
        }
        out
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        let mut out = String::new();
        for (idx, &e) in m.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            out.push_str(&self.vars.names()[idx]);
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
        out
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;

    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}
