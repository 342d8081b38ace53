use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{exponent_vectors, Monomial, MonomialOrder};

/// Guard rails for Groebner computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Limits {
    /// Largest total degree of an S-pair that will be processed.
    pub max_degree: u32,
    /// Largest number of S-pairs processed by a single Buchberger run.
    pub max_pairs: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 40,
            max_pairs: 200_000,
        }
    }
}

/// Standard-graded polynomial ring `k[x_0, ..., x_n]` with a monomial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyRing<F: Field> {
    field: F,
    vars: Vec<String>,
    order: MonomialOrder,
    limits: Limits,
}

pub type RingRef<F> = Arc<PolyRing<F>>;

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl<F: Field> PolyRing<F> {
    pub fn new<S: AsRef<str>>(field: F, vars: &[S], order: MonomialOrder) -> Result<RingRef<F>> {
        Self::with_limits(field, vars, order, Limits::default())
    }

    pub fn with_limits<S: AsRef<str>>(
        field: F,
        vars: &[S],
        order: MonomialOrder,
        limits: Limits,
    ) -> Result<RingRef<F>> {
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_name(v) {
                return Err(Error::InvalidInput(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
        if vars.len() > u16::MAX as usize {
            return Err(Error::InvalidInput("too many variables".into()));
        }
        Ok(Arc::new(PolyRing {
            field,
            vars,
            order,
            limits,
        }))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables and field under a different order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef<F> {
        Arc::new(PolyRing {
            order,
            ..self.clone()
        })
    }

    /// A ring sharing field and limits with `self` but with other variables.
    pub fn derive<S: AsRef<str>>(&self, vars: &[S], order: MonomialOrder) -> Result<RingRef<F>> {
        Self::with_limits(self.field.clone(), vars, order, self.limits)
    }

    pub fn with_limits_replaced(&self, limits: Limits) -> RingRef<F> {
        Arc::new(PolyRing {
            limits,
            ..self.clone()
        })
    }

    /// Variable names not already used in this ring, built from `stem`.
    pub fn fresh_names(&self, stem: &str, count: usize) -> Vec<String> {
        let mut out = Vec::with_capacity(count);
        let mut i = 0usize;
        while out.len() < count {
            let name = format!("{stem}{i}");
            if !self.vars.contains(&name) {
                out.push(name);
            }
            i += 1;
        }
        out
    }

    pub fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
        self.order.cmp(a, b)
    }
}

/// All monomials of degree `d`, listed in descending ring order.
pub fn monomials_of_degree<F: Field>(ring: &PolyRing<F>, d: u32) -> Vec<Monomial> {
    let mut out = exponent_vectors(ring.nvars(), d);
    out.sort_by(|a, b| ring.cmp_monomials(b, a));
    out
}

/// `C(n, k)` with saturation on overflow.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}
