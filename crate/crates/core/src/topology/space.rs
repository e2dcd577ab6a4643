//! The space-expression DSL: an AST of geometric operations evaluating to a
//! Poincare polynomial, plus its parser.
//!
//! Grammar (whitespace-insensitive, `*` binds tighter than `+`/`-`):
//!
//! ```text
//! expr := mul (('+' | '-') mul)*
//! mul  := atom ('*' atom)*
//! atom := 'P' nat
//!       | 'Hilb(' nat ',' '(' nat ',' nat ',' nat ',' nat ',' nat ')' ')'
//!       | 'bundle(' expr ',' nat ')'
//!       | 'blowup(' expr ',' expr ',' nat ')'
//!       | 'blowdown(' expr ',' expr ',' nat ')'
//!       | 'flip(' expr ',' expr ',' nat ',' nat ')'
//!       | 'xi' ['^' nat] | nat ['xi' ['^' nat]] | '(' expr ')'
//! ```
//!
//! Sums and differences evaluate over signed intermediates, so the raw
//! wall-crossing identity `P9*H + (P1 - P2)*B - xi*P11` is expressible; the
//! final value and every operand of a geometric node must be nonnegative.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{
    add_signed, hilb_poincare, mul_signed, p_blowdown, p_blowup, p_bundle, p_flip, p_projective,
    sub_signed, Betti, PoincarePoly,
};
use crate::error::{Error, Result};

/// AST of a space construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SpaceExpr {
    ProjectiveSpace(i64),
    Product(Box<SpaceExpr>, Box<SpaceExpr>),
    Sum(Box<SpaceExpr>, Box<SpaceExpr>),
    Difference(Box<SpaceExpr>, Box<SpaceExpr>),
    Bundle {
        base: Box<SpaceExpr>,
        fiber_dim: u32,
    },
    Blowup {
        total: Box<SpaceExpr>,
        center: Box<SpaceExpr>,
        codim: u32,
    },
    Blowdown {
        total: Box<SpaceExpr>,
        center: Box<SpaceExpr>,
        codim: u32,
    },
    Flip {
        total: Box<SpaceExpr>,
        base: Box<SpaceExpr>,
        old_fiber: u32,
        new_fiber: u32,
    },
    HilbSurface {
        betti: Betti,
        n: u32,
    },
    Literal(PoincarePoly),
}

/// Evaluate an expression; dimension inconsistencies and negative
/// coefficients are reported with the offending node path.
pub fn evaluate_space(expr: &SpaceExpr) -> Result<PoincarePoly> {
    let signed = eval(expr, "root")?;
    PoincarePoly::new(signed)
        .map_err(|_| Error::InvariantViolation("negative coefficient in final value (at root)".into()))
}

fn eval(expr: &SpaceExpr, path: &str) -> Result<Vec<BigInt>> {
    match expr {
        SpaceExpr::ProjectiveSpace(n) => {
            Ok(p_projective(*n).map_err(|e| at(e, path))?.coeffs().to_vec())
        }
        SpaceExpr::Product(l, r) => Ok(mul_signed(
            &eval(l, &format!("{path}.product[0]"))?,
            &eval(r, &format!("{path}.product[1]"))?,
        )),
        SpaceExpr::Sum(l, r) => Ok(add_signed(
            &eval(l, &format!("{path}.sum[0]"))?,
            &eval(r, &format!("{path}.sum[1]"))?,
        )),
        SpaceExpr::Difference(l, r) => Ok(sub_signed(
            &eval(l, &format!("{path}.difference[0]"))?,
            &eval(r, &format!("{path}.difference[1]"))?,
        )),
        SpaceExpr::Bundle { base, fiber_dim } => {
            let base_path = format!("{path}.bundle.base");
            let base = nonnegative(eval(base, &base_path)?, &base_path)?;
            Ok(p_bundle(&base, *fiber_dim).coeffs().to_vec())
        }
        SpaceExpr::Blowup {
            total,
            center,
            codim,
        } => {
            let total_path = format!("{path}.blowup.total");
            let center_path = format!("{path}.blowup.center");
            let total = nonnegative(eval(total, &total_path)?, &total_path)?;
            let center = nonnegative(eval(center, &center_path)?, &center_path)?;
            check_center_dim(&total, &center, *codim, path)?;
            Ok(p_blowup(&total, &center, *codim)
                .map_err(|e| at(e, path))?
                .coeffs()
                .to_vec())
        }
        SpaceExpr::Blowdown {
            total,
            center,
            codim,
        } => {
            let total_path = format!("{path}.blowdown.total");
            let center_path = format!("{path}.blowdown.center");
            let total = nonnegative(eval(total, &total_path)?, &total_path)?;
            let center = nonnegative(eval(center, &center_path)?, &center_path)?;
            check_center_dim(&total, &center, *codim, path)?;
            Ok(p_blowdown(&total, &center, *codim)
                .map_err(|e| at(e, path))?
                .coeffs()
                .to_vec())
        }
        SpaceExpr::Flip {
            total,
            base,
            old_fiber,
            new_fiber,
        } => {
            let total_path = format!("{path}.flip.total");
            let base_path = format!("{path}.flip.base");
            let total = nonnegative(eval(total, &total_path)?, &total_path)?;
            let base = nonnegative(eval(base, &base_path)?, &base_path)?;
            for fiber in [*old_fiber, *new_fiber] {
                if base.degree() + fiber as usize >= total.degree() {
                    return Err(Error::InvariantViolation(format!(
                        "flipping locus of dimension {} does not embed in a {}-fold (at {path})",
                        base.degree() + fiber as usize,
                        total.degree()
                    )));
                }
            }
            Ok(p_flip(&total, &base, *old_fiber, *new_fiber)
                .map_err(|e| at(e, path))?
                .coeffs()
                .to_vec())
        }
        SpaceExpr::HilbSurface { betti, n } => Ok(hilb_poincare(*betti, *n)
            .map_err(|e| at(e, path))?
            .coeffs()
            .to_vec()),
        SpaceExpr::Literal(p) => Ok(p.coeffs().to_vec()),
    }
}

fn nonnegative(coeffs: Vec<BigInt>, path: &str) -> Result<PoincarePoly> {
    if coeffs.iter().any(|c| c.is_negative()) {
        return Err(Error::InvariantViolation(format!(
            "negative coefficient in a space operand (at {path})"
        )));
    }
    PoincarePoly::new(coeffs)
}

fn check_center_dim(
    total: &PoincarePoly,
    center: &PoincarePoly,
    codim: u32,
    path: &str,
) -> Result<()> {
    if center.degree() + codim as usize != total.degree() {
        return Err(Error::InvariantViolation(format!(
            "center of dimension {} with codimension {codim} does not fit a {}-fold (at {path})",
            center.degree(),
            total.degree()
        )));
    }
    Ok(())
}

fn at(err: Error, path: &str) -> Error {
    match err {
        Error::InvariantViolation(msg) => Error::InvariantViolation(format!("{msg} (at {path})")),
        Error::RejectedInput(msg) => Error::RejectedInput(format!("{msg} (at {path})")),
        other => other,
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Ident(String),
    Nat(u64),
    Symbol(u8),
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Scan the token at the cursor: (token, start, end).
    fn scan(&mut self) -> Result<Option<(Token, usize, usize)>> {
        self.skip_ws();
        let start = self.pos;
        if start >= self.src.len() {
            return Ok(None);
        }
        let b = self.src[start];
        if b.is_ascii_alphabetic() {
            let mut end = start;
            while end < self.src.len() && self.src[end].is_ascii_alphabetic() {
                end += 1;
            }
            let ident = std::str::from_utf8(&self.src[start..end])
                .expect("ascii")
                .to_string();
            Ok(Some((Token::Ident(ident), start, end)))
        } else if b.is_ascii_digit() {
            let mut end = start;
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
            }
            let text = std::str::from_utf8(&self.src[start..end]).expect("ascii");
            let value = text
                .parse::<u64>()
                .map_err(|_| Error::parse(start, "number out of range"))?;
            Ok(Some((Token::Nat(value), start, end)))
        } else if b"+-*(),^".contains(&b) {
            Ok(Some((Token::Symbol(b), start, start + 1)))
        } else {
            Err(Error::parse(
                start,
                format!("unexpected character `{}`", b as char),
            ))
        }
    }

    fn peek(&mut self) -> Result<Option<(Token, usize)>> {
        Ok(self.scan()?.map(|(t, start, _)| (t, start)))
    }

    fn next(&mut self) -> Result<Option<(Token, usize)>> {
        match self.scan()? {
            Some((t, start, end)) => {
                self.pos = end;
                Ok(Some((t, start)))
            }
            None => Ok(None),
        }
    }

    fn expect_symbol(&mut self, sym: u8) -> Result<()> {
        match self.next()? {
            Some((Token::Symbol(b), _)) if b == sym => Ok(()),
            Some((_, pos)) => Err(Error::parse(pos, format!("expected `{}`", sym as char))),
            None => Err(Error::parse(self.src.len(), format!("expected `{}`", sym as char))),
        }
    }

    fn expect_nat(&mut self) -> Result<u64> {
        match self.next()? {
            Some((Token::Nat(v), _)) => Ok(v),
            Some((_, pos)) => Err(Error::parse(pos, "expected a number")),
            None => Err(Error::parse(self.src.len(), "expected a number")),
        }
    }
}

/// Parse the space-expression DSL.
pub fn parse_space_expr(src: &str) -> Result<SpaceExpr> {
    let mut lx = Lexer::new(src);
    let expr = parse_expr(&mut lx)?;
    if let Some((_, pos)) = lx.peek()? {
        return Err(Error::parse(pos, "trailing input after expression"));
    }
    Ok(expr)
}

fn parse_expr(lx: &mut Lexer) -> Result<SpaceExpr> {
    let mut acc = parse_mul(lx)?;
    loop {
        match lx.peek()? {
            Some((Token::Symbol(b'+'), _)) => {
                lx.next()?;
                let rhs = parse_mul(lx)?;
                acc = SpaceExpr::Sum(Box::new(acc), Box::new(rhs));
            }
            Some((Token::Symbol(b'-'), _)) => {
                lx.next()?;
                let rhs = parse_mul(lx)?;
                acc = SpaceExpr::Difference(Box::new(acc), Box::new(rhs));
            }
            _ => break,
        }
    }
    Ok(acc)
}

fn parse_mul(lx: &mut Lexer) -> Result<SpaceExpr> {
    let mut acc = parse_atom(lx)?;
    while let Some((Token::Symbol(b'*'), _)) = lx.peek()? {
        lx.next()?;
        let rhs = parse_atom(lx)?;
        acc = SpaceExpr::Product(Box::new(acc), Box::new(rhs));
    }
    Ok(acc)
}

fn parse_xi_power(lx: &mut Lexer) -> Result<SpaceExpr> {
    let exp = if let Some((Token::Symbol(b'^'), _)) = lx.peek()? {
        lx.next()?;
        lx.expect_nat()?
    } else {
        1
    };
    let mut coeffs = vec![0u64; exp as usize + 1];
    coeffs[exp as usize] = 1;
    Ok(SpaceExpr::Literal(PoincarePoly::from_ints(&coeffs)))
}

fn parse_betti(lx: &mut Lexer) -> Result<Betti> {
    lx.expect_symbol(b'(')?;
    let b0 = lx.expect_nat()?;
    lx.expect_symbol(b',')?;
    let b1 = lx.expect_nat()?;
    lx.expect_symbol(b',')?;
    let b2 = lx.expect_nat()?;
    lx.expect_symbol(b',')?;
    let b3 = lx.expect_nat()?;
    lx.expect_symbol(b',')?;
    let b4 = lx.expect_nat()?;
    lx.expect_symbol(b')')?;
    Ok((b0, b1, b2, b3, b4))
}

fn nat_u32(value: u64, pos: usize) -> Result<u32> {
    u32::try_from(value).map_err(|_| Error::parse(pos, "number out of range"))
}

fn parse_atom(lx: &mut Lexer) -> Result<SpaceExpr> {
    match lx.next()? {
        Some((Token::Ident(name), pos)) => match name.as_str() {
            "P" => {
                let n = lx.expect_nat()?;
                Ok(SpaceExpr::ProjectiveSpace(n as i64))
            }
            "Hilb" => {
                lx.expect_symbol(b'(')?;
                let n = nat_u32(lx.expect_nat()?, pos)?;
                lx.expect_symbol(b',')?;
                let betti = parse_betti(lx)?;
                lx.expect_symbol(b')')?;
                Ok(SpaceExpr::HilbSurface { betti, n })
            }
            "bundle" => {
                lx.expect_symbol(b'(')?;
                let base = parse_expr(lx)?;
                lx.expect_symbol(b',')?;
                let fiber = nat_u32(lx.expect_nat()?, pos)?;
                lx.expect_symbol(b')')?;
                Ok(SpaceExpr::Bundle {
                    base: Box::new(base),
                    fiber_dim: fiber,
                })
            }
            "blowup" | "blowdown" => {
                lx.expect_symbol(b'(')?;
                let total = parse_expr(lx)?;
                lx.expect_symbol(b',')?;
                let center = parse_expr(lx)?;
                lx.expect_symbol(b',')?;
                let codim = nat_u32(lx.expect_nat()?, pos)?;
                lx.expect_symbol(b')')?;
                if name == "blowup" {
                    Ok(SpaceExpr::Blowup {
                        total: Box::new(total),
                        center: Box::new(center),
                        codim,
                    })
                } else {
                    Ok(SpaceExpr::Blowdown {
                        total: Box::new(total),
                        center: Box::new(center),
                        codim,
                    })
                }
            }
            "flip" => {
                lx.expect_symbol(b'(')?;
                let total = parse_expr(lx)?;
                lx.expect_symbol(b',')?;
                let base = parse_expr(lx)?;
                lx.expect_symbol(b',')?;
                let old_fiber = nat_u32(lx.expect_nat()?, pos)?;
                lx.expect_symbol(b',')?;
                let new_fiber = nat_u32(lx.expect_nat()?, pos)?;
                lx.expect_symbol(b')')?;
                Ok(SpaceExpr::Flip {
                    total: Box::new(total),
                    base: Box::new(base),
                    old_fiber,
                    new_fiber,
                })
            }
            "xi" => parse_xi_power(lx),
            other => Err(Error::parse(pos, format!("unknown construction `{other}`"))),
        },
        Some((Token::Nat(value), _)) => {
            // `3xi^2` style literal: an optional juxtaposed xi power.
            if let Some((Token::Ident(name), _)) = lx.peek()? {
                if name == "xi" {
                    lx.next()?;
                    let power = parse_xi_power(lx)?;
                    let scalar =
                        SpaceExpr::Literal(PoincarePoly::from_ints(&[value]));
                    return Ok(SpaceExpr::Product(Box::new(scalar), Box::new(power)));
                }
            }
            Ok(SpaceExpr::Literal(PoincarePoly::from_ints(&[value])))
        }
        Some((Token::Symbol(b'('), _)) => {
            let inner = parse_expr(lx)?;
            lx.expect_symbol(b')')?;
            Ok(inner)
        }
        Some((_, pos)) => Err(Error::parse(pos, "expected an atom")),
        None => Err(Error::parse(lx.src.len(), "unexpected end of input")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{euler, is_palindromic, PoincarePoly};
    use super::*;

    fn eval_str(src: &str) -> Result<PoincarePoly> {
        evaluate_space(&parse_space_expr(src)?)
    }

    const PIPELINE: &str = "blowdown(flip(bundle(Hilb(2,(1,0,2,0,1)), 9), P8 * P1, 2, 1), P11, 2)";

    #[test]
    fn full_pipeline_reproduces_the_betti_numbers() {
        let got = eval_str(PIPELINE).unwrap();
        let expected =
            PoincarePoly::from_ints(&[1, 3, 8, 10, 11, 11, 11, 11, 11, 11, 10, 8, 3, 1]);
        assert_eq!(got, expected);
        assert_eq!(euler(&got), 110.into());
        assert!(is_palindromic(&got, 13));
    }

    #[test]
    fn raw_arithmetic_form_of_the_pipeline() {
        // Same value through signed polynomial arithmetic alone.
        let raw = eval_str(
            "P9*Hilb(2,(1,0,2,0,1)) + (P1 - P2)*P8*P1 - xi*P11",
        )
        .unwrap();
        assert_eq!(raw, eval_str(PIPELINE).unwrap());
    }

    #[test]
    fn simple_atoms() {
        assert_eq!(eval_str("P9").unwrap(), PoincarePoly::from_ints(&[1; 10]));
        assert_eq!(
            eval_str("bundle(P1 * P2, 9)").unwrap().degree(),
            12
        );
        assert_eq!(eval_str("3xi^2 + 1").unwrap(), PoincarePoly::from_ints(&[1, 0, 3]));
        assert_eq!(eval_str("xi").unwrap(), PoincarePoly::from_ints(&[0, 1]));
    }

    #[test]
    fn precedence_star_over_plus() {
        // 1 + xi*xi = 1 + xi^2, not (1 + xi)*xi.
        assert_eq!(
            eval_str("1 + xi*xi").unwrap(),
            PoincarePoly::from_ints(&[1, 0, 1])
        );
    }

    #[test]
    fn dimension_errors_carry_node_paths() {
        // P11 has codimension 2 in a 13-fold, not 3.
        let err = eval_str(&PIPELINE.replace("P11, 2", "P11, 3")).unwrap_err();
        match err {
            Error::InvariantViolation(msg) => assert!(msg.contains("at root"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }

        let err = eval_str("flip(P3, P2, 2, 1)").unwrap_err();
        match err {
            Error::InvariantViolation(msg) => assert!(msg.contains("flip"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_operand_rejected() {
        let err = eval_str("bundle(P1 - P2, 3)").unwrap_err();
        match err {
            Error::InvariantViolation(msg) => {
                assert!(msg.contains("bundle.base"), "{msg}")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn negative_final_value_rejected() {
        assert!(matches!(
            eval_str("P1 - P2").unwrap_err(),
            Error::InvariantViolation(_)
        ));
    }

    #[test]
    fn parse_errors_have_positions() {
        assert!(matches!(
            parse_space_expr("bundle(P2").unwrap_err(),
            Error::Parse { .. }
        ));
        assert!(matches!(
            parse_space_expr("spin(P2, 1)").unwrap_err(),
            Error::Parse { pos: 0, .. }
        ));
        assert!(matches!(
            parse_space_expr("P2 $").unwrap_err(),
            Error::Parse { pos: 3, .. }
        ));
    }
}
