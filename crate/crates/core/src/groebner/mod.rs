//! Groebner bases and the ideal operations built on them.

mod buchberger;
mod ops;

pub use buchberger::buchberger;
pub use ops::{
    colon_by_poly, colon_ideal, eliminate, ideal_membership, intersect, normal_form, saturate,
    saturate_by_poly,
};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{same_ring, Poly};
use crate::ring::{monomials_of_degree, RingRef};

/// An ideal given by generators. Zero generators are dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal<F: Field> {
    ring: RingRef<F>,
    gens: Vec<Poly<F>>,
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &RingRef<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if !same_ring(g.ring(), ring) {
                return Err(Error::RingMismatch);
            }
            if !g.is_zero() {
                out.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out,
        })
    }

    /// Like [`Ideal::new`] but verifies every generator is homogeneous.
    pub fn homogeneous(ring: &RingRef<F>, gens: Vec<Poly<F>>) -> Result<Self> {
        let ideal = Self::new(ring, gens)?;
        if let Some(bad) = ideal.gens.iter().find(|g| !g.is_homogeneous()) {
            return Err(Error::InvalidInput(format!(
                "generator `{bad}` is not homogeneous"
            )));
        }
        Ok(ideal)
    }

    pub fn zero(ring: &RingRef<F>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly<F>] {
        &self.gens
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.is_homogeneous())
    }

    /// `self + other`.
    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_generators(&self, extra: &[Poly<F>]) -> Result<Ideal<F>> {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn groebner(&self) -> Result<GroebnerBasis<F>> {
        buchberger(self, self.ring.order())
    }
}

/// A reduced Groebner basis: elements normalized (primitive with positive
/// leading coefficient over the rationals, monic over a prime field) and
/// sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis<F: Field> {
    ring: RingRef<F>,
    elements: Vec<Poly<F>>,
    leading: Vec<Monomial>,
}

impl<F: Field> GroebnerBasis<F> {
    pub(crate) fn from_reduced(ring: &RingRef<F>, elements: Vec<Poly<F>>) -> Self {
        let leading = elements
            .iter()
            .map(|p| p.leading_monomial().expect("nonzero basis element").clone())
            .collect();
        GroebnerBasis {
            ring: ring.clone(),
            elements,
            leading,
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Poly<F>] {
        &self.elements
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn ideal(&self) -> Ideal<F> {
        Ideal {
            ring: self.ring.clone(),
            gens: self.elements.clone(),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.elements.is_empty()
    }

    /// `true` when `m` lies outside the leading-term ideal.
    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading.iter().any(|l| l.divides(m))
    }

    /// Standard monomials of degree `d`, descending in the ring order.
    pub fn standard_monomials(&self, d: u32) -> Vec<Monomial> {
        monomials_of_degree(&self.ring, d)
            .into_iter()
            .filter(|m| self.is_standard(m))
            .collect()
    }

    /// The normal form of `f`, linear in `f`. `f` must live in this ring.
    pub fn reduce(&self, f: &Poly<F>) -> Poly<F> {
        buchberger::reduce_linear(f, &self.elements, &self.leading)
    }

    pub fn contains(&self, f: &Poly<F>) -> bool {
        self.reduce(f).is_zero()
    }

    /// `true` when every generator of `other` reduces to zero here.
    pub fn contains_all(&self, other: &[Poly<F>]) -> bool {
        other.iter().all(|g| self.contains(g))
    }

    /// Normal forms of every S-polynomial; all zero certifies a basis.
    pub fn s_pair_remainders(&self) -> Vec<Poly<F>> {
        let mut out = Vec::new();
        for i in 0..self.elements.len() {
            for j in (i + 1)..self.elements.len() {
                let s = buchberger::s_polynomial(&self.elements[i], &self.elements[j]);
                out.push(self.reduce(&s));
            }
        }
        out
    }

    /// Checks the reduced-basis invariants.
    pub fn is_reduced(&self) -> bool {
        for (i, g) in self.elements.iter().enumerate() {
            for (j, l) in self.leading.iter().enumerate() {
                if i != j && g.terms().iter().any(|(m, _)| l.divides(m)) {
                    return false;
                }
            }
            if g.normalized() != *g {
                return false;
            }
        }
        true
    }
}
