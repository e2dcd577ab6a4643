//! Textual polynomial syntax: sums of monomial terms like `3m + 2n + 1`,
//! `mn`, `xi^4 + 3xi^3`, `1/2m - 2/3`. Whitespace is insignificant and a
//! `*` between factors is optional. Variable names are matched greedily
//! against the declared variable set.

use num_traits::{One, Zero};

use super::{int, Monomial, Poly, Rational, VarSet};
use crate::error::{Error, Result};

struct Scanner<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.src.len()
    }

    fn parse_nat(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, "expected a number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse::<u64>()
            .map_err(|_| Error::parse(start, "number out of range"))
    }

    /// Longest variable name from `vars` starting at the cursor.
    fn parse_var(&mut self, vars: &VarSet) -> Option<usize> {
        let rest = &self.src[self.pos..];
        let mut best: Option<(usize, usize)> = None;
        for (idx, name) in vars.names().iter().enumerate() {
            let bytes = name.as_bytes();
            if rest.starts_with(bytes) && best.is_none_or(|(_, len)| bytes.len() > len) {
                best = Some((idx, bytes.len()));
            }
        }
        best.map(|(idx, len)| {
            self.pos += len;
            idx
        })
    }
}

pub(super) fn parse_poly(src: &str, vars: &VarSet) -> Result<Poly> {
    let mut sc = Scanner::new(src);
    let mut poly = Poly::zero(vars);
    let mut first = true;
    loop {
        if sc.at_end() {
            break;
        }
        let sign = if sc.eat(b'-') {
            -1i64
        } else if sc.eat(b'+') || first {
            1
        } else {
            return Err(Error::parse(sc.pos, "expected `+` or `-` between terms"));
        };
        first = false;
        let (mono, coeff) = parse_term(&mut sc, vars)?;
        poly = poly.add(&{
            let mut t = Poly::zero(vars);
            if !coeff.is_zero() {
                t = Poly::from_terms(vars, [(mono.0, coeff * int(sign))])?;
            }
            t
        })?;
    }
    if first {
        return Err(Error::parse(0, "empty polynomial"));
    }
    Ok(poly)
}

fn parse_term(sc: &mut Scanner, vars: &VarSet) -> Result<(Monomial, Rational)> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u32; vars.len()];
    let mut saw_atom = false;
    loop {
        sc.skip_ws();
        let allow_number = !saw_atom || {
            // a `*` permits any following atom, including another number
            if sc.eat(b'*') {
                sc.skip_ws();
                true
            } else {
                false
            }
        };
        match sc.peek() {
            Some(b) if b.is_ascii_digit() && allow_number => {
                let num = sc.parse_nat()?;
                let mut q = int(num as i64);
                if sc.eat(b'/') {
                    let den_pos = sc.pos;
                    let den = sc.parse_nat()?;
                    if den == 0 {
                        return Err(Error::parse(den_pos, "zero denominator"));
                    }
                    q /= int(den as i64);
                }
                coeff *= q;
                saw_atom = true;
            }
            _ => {
                let var_pos = sc.pos;
                match sc.parse_var(vars) {
                    Some(idx) => {
                        let exp = if sc.eat(b'^') { sc.parse_nat()? } else { 1 };
                        let exp = u32::try_from(exp)
                            .map_err(|_| Error::parse(var_pos, "exponent out of range"))?;
                        exps[idx] += exp;
                        saw_atom = true;
                    }
                    None => {
                        if saw_atom {
                            break;
                        }
                        return Err(Error::parse(
                            var_pos,
                            format!(
                                "expected a coefficient or one of the variables [{}]",
                                vars.names().join(", ")
                            ),
                        ));
                    }
                }
            }
        }
    }
    Ok((Monomial(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::super::{ratio, vars_mn, vars_xi, Poly};
    use crate::error::Error;

    #[test]
    fn parses_spec_forms() {
        let p = Poly::parse("3m + 2n + 1", &vars_mn()).unwrap();
        assert_eq!(p.to_compact_string(), "3m+2n+1");
        let q = Poly::parse("mn", &vars_mn()).unwrap();
        assert_eq!(q.coeff(&[1, 1]), ratio(1, 1));
        let g = Poly::parse("xi^4 + 3xi^3", &vars_xi()).unwrap();
        assert_eq!(g.coeff(&[3]), ratio(3, 1));
    }

    #[test]
    fn parses_rational_coefficients() {
        let p = Poly::parse("1/2m - 2/3", &vars_mn()).unwrap();
        assert_eq!(p.coeff(&[1, 0]), ratio(1, 2));
        assert_eq!(p.constant_term(), ratio(-2, 3));
    }

    #[test]
    fn parses_explicit_star_and_powers() {
        let p = Poly::parse("2*m^2n + m*n", &vars_mn()).unwrap();
        assert_eq!(p.coeff(&[2, 1]), ratio(2, 1));
        assert_eq!(p.coeff(&[1, 1]), ratio(1, 1));
    }

    #[test]
    fn error_positions() {
        let err = Poly::parse("3m + 2q", &vars_mn()).unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 6, .. }), "{err:?}");
        let err = Poly::parse("", &vars_mn()).unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 0, .. }));
        let err = Poly::parse("m n 3", &vars_mn()).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = Poly::parse("1/0", &vars_mn()).unwrap_err();
        assert!(matches!(err, Error::Parse { pos: 2, .. }));
    }

    #[test]
    fn xi_is_one_variable() {
        // Greedy matching: `xi` must not split even though `x` could prefix it.
        let vars = super::super::VarSet::new(["x", "xi"]);
        let p = Poly::parse("xi + x", &vars).unwrap();
        assert_eq!(p.coeff(&[0, 1]), ratio(1, 1));
        assert_eq!(p.coeff(&[1, 0]), ratio(1, 1));
    }
}
