//! Exact multivariate polynomials over Q in the base parameter `t` and the
//! fibre variables `z_1..z_n`, with `t`-adic truncation.

mod monomial;
mod parse;
mod polynomial;

pub use monomial::{Monomial, MonomialOrder, OrderKind};
pub use polynomial::{combination, poly_arith, ArithOp, Polynomial};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Name of the distinguished base parameter.
pub const BASE_VAR: &str = "t";

/// Variable context: the names of the fibre variables. `t` is always present.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
}

impl Ring {
    pub fn new<I, S>(vars: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Invalid(format!("`{v}` is not a valid variable name")));
            }
            if v == BASE_VAR {
                return Err(Error::Invalid(
                    "`t` is the base parameter and cannot be a fibre variable".into(),
                ));
            }
            if vars[..i].contains(v) {
                return Err(Error::Invalid(format!("variable `{v}` declared twice")));
            }
        }
        Ok(Ring { vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var(&self, name: &str) -> Option<Polynomial> {
        if name == BASE_VAR {
            return Some(Polynomial::t(self.nvars()));
        }
        self.index_of(name).map(|i| Polynomial::z(self.nvars(), i))
    }

    pub fn zero(&self) -> Polynomial {
        Polynomial::zero(self.nvars())
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(self.nvars())
    }

    /// A ring with extra fibre variables appended; names that clash get a `_` suffix.
    pub fn extended<I, S>(&self, extra: I) -> Ring
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut vars = self.vars.clone();
        for name in extra {
            let mut name: String = name.into();
            while name == BASE_VAR || vars.contains(&name) {
                name.push('_');
            }
            vars.push(name);
        }
        Ring { vars }
    }

    pub fn parse(&self, text: &str) -> Result<Polynomial> {
        parse::parse_polynomial(self, text)
    }

    pub fn parse_list(&self, text: &str) -> Result<Vec<Polynomial>> {
        parse::parse_list(self, text)
    }

    pub fn render(&self, p: &Polynomial) -> String {
        parse::render(self, p)
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        parse::render_monomial(self, m)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Work modulo `t^order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationContext {
    pub order: u32,
}

impl TruncationContext {
    pub fn new(order: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::Invalid("truncation order must be at least 1".into()));
        }
        Ok(TruncationContext { order })
    }

    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        p.truncate(self.order)
    }
}

/// Removes every term of `t`-degree `>= ctx.order`.
pub fn truncate(p: &Polynomial, ctx: TruncationContext) -> Polynomial {
    ctx.apply(p)
}

/// Total order on monomials of one context.
pub fn compare_monomials(order: &MonomialOrder, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    order.compare(a, b)
}
