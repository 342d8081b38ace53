use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::monomial::Monomial;
use crate::ring::{PolyRing, RingRef};

pub type Term<F> = (Monomial, <F as Field>::Elem);

/// A polynomial in canonical form: terms strictly descending in the ring's
/// order, no zero coefficients.
pub struct Poly<F: Field> {
    ring: RingRef<F>,
    terms: Vec<Term<F>>,
}

impl<F: Field> Clone for Poly<F> {
    fn clone(&self) -> Self {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.clone(),
        }
    }
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Poly<F> {}

impl<F: Field> std::hash::Hash for Poly<F> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

pub(crate) fn same_ring<F: Field>(a: &RingRef<F>, b: &RingRef<F>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic on two polynomials.
pub fn poly_arith<F: Field>(op: ArithOp, a: &Poly<F>, b: &Poly<F>) -> Result<Poly<F>> {
    if !same_ring(&a.ring, &b.ring) {
        return Err(Error::RingMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
    })
}

impl<F: Field> Poly<F> {
    pub fn zero(ring: &RingRef<F>) -> Self {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &RingRef<F>, c: F::Elem) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &RingRef<F>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &RingRef<F>, index: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), index), ring.field().one())
    }

    pub fn monomial(ring: &RingRef<F>, m: Monomial, c: F::Elem) -> Self {
        debug_assert_eq!(m.nvars(), ring.nvars());
        let terms = if ring.field().is_zero(&c) {
            Vec::new()
        } else {
            vec![(m, c)]
        };
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a canonical polynomial from arbitrary (unsorted, repeated) terms.
    pub fn from_terms(ring: &RingRef<F>, mut terms: Vec<Term<F>>) -> Self {
        let field = ring.field();
        terms.sort_by(|a, b| ring.cmp_monomials(&b.0, &a.0));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = field.add(&last.1, &c),
                _ => {
                    if let Some(last) = out.last() {
                        if field.is_zero(&last.1) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some(last) = out.last() {
            if field.is_zero(&last.1) {
                out.pop();
            }
        }
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    /// Wraps terms already in canonical order. Used by hot paths.
    pub(crate) fn from_sorted_terms(ring: &RingRef<F>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.cmp_monomials(&w[0].0, &w[1].0) == Ordering::Greater));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn field(&self) -> &F {
        self.ring.field()
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term<F>> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// Largest term under the ring's order.
    pub fn leading_term(&self) -> Result<(&Monomial, &F::Elem)> {
        self.terms
            .first()
            .map(|(m, c)| (m, c))
            .ok_or(Error::ZeroPolynomial)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.1)
    }

    /// Maximal total degree of a term; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m0, _)) => self.terms.iter().all(|(m, _)| m.degree() == m0.degree()),
        }
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        if self.is_zero() || !self.is_homogeneous() {
            None
        } else {
            self.total_degree()
        }
    }

    pub fn coefficient(&self, m: &Monomial) -> F::Elem {
        self.terms
            .binary_search_by(|(t, _)| self.ring.cmp_monomials(m, t))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| self.field().zero())
    }

    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.iter().any(|(m, _)| m.exponents()[index] > 0)
    }

    pub fn scalar_mul(&self, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, c)))
                .collect(),
        }
    }

    /// `c * m * self`.
    pub fn mul_term(&self, m: &Monomial, c: &F::Elem) -> Self {
        let field = self.field();
        if field.is_zero(c) {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.mul(m), field.mul(a, c)))
                .collect(),
        }
    }

    /// `a * self + b * m * other` computed by a single sorted merge.
    pub fn combine(&self, a: &F::Elem, other: &Poly<F>, b: &F::Elem, m: &Monomial) -> Self {
        let field = self.field();
        let ring = &self.ring;
        let scale_self = !field.is_one(a);
        let mut out: Vec<Term<F>> = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let mut shifted: Option<Monomial> = other.terms.first().map(|t| t.0.mul(m));
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), &shifted) {
                (Some(t), Some(s)) => ring.cmp_monomials(&t.0, s),
                (Some(_), None) => Ordering::Greater,
                (None, _) => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    let (mon, c) = &self.terms[i];
                    let c = if scale_self {
                        field.mul(c, a)
                    } else {
                        c.clone()
                    };
                    out.push((mon.clone(), c));
                    i += 1;
                }
                Ordering::Less => {
                    let c = field.mul(&other.terms[j].1, b);
                    out.push((shifted.take().unwrap(), c));
                    j += 1;
                    shifted = other.terms.get(j).map(|t| t.0.mul(m));
                }
                Ordering::Equal => {
                    let lhs = if scale_self {
                        field.mul(&self.terms[i].1, a)
                    } else {
                        self.terms[i].1.clone()
                    };
                    let c = field.add(&lhs, &field.mul(&other.terms[j].1, b));
                    let mon = shifted.take().unwrap();
                    if !field.is_zero(&c) {
                        out.push((mon, c));
                    }
                    i += 1;
                    j += 1;
                    shifted = other.terms.get(j).map(|t| t.0.mul(m));
                }
            }
        }
        out.retain(|(_, c)| !field.is_zero(c));
        Poly {
            ring: ring.clone(),
            terms: out,
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Projective normal form: primitive integer coefficients with a
    /// positive leading coefficient over the rationals, monic over a prime
    /// field.
    pub fn normalized(&self) -> Self {
        let mut p = self.clone();
        p.normalize_in_place();
        p
    }

    pub(crate) fn normalize_in_place(&mut self) -> F::Elem {
        let field = self.ring.field().clone();
        let mut coeffs: Vec<F::Elem> = self.terms.iter().map(|t| t.1.clone()).collect();
        let s = field.normalize(&mut coeffs);
        for (t, c) in self.terms.iter_mut().zip(coeffs) {
            t.1 = c;
        }
        s
    }

    /// A form of degree `d` with a random coefficient on every monomial.
    pub fn random_form<R: rand::Rng + ?Sized>(ring: &RingRef<F>, d: u32, rng: &mut R) -> Self {
        let field = ring.field();
        let terms = crate::ring::monomials_of_degree(ring, d)
            .into_iter()
            .map(|m| (m, field.random(rng)))
            .filter(|(_, c)| !field.is_zero(c))
            .collect();
        Poly::from_sorted_terms(ring, terms)
    }

    /// `Σ coeffs[i] * monos[i]`.
    pub fn from_coefficients(ring: &RingRef<F>, monos: &[Monomial], coeffs: &[F::Elem]) -> Self {
        let field = ring.field();
        let terms = monos
            .iter()
            .zip(coeffs)
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly::from_terms(ring, terms)
    }

    /// Coefficients of `self` on `monos`, in that order.
    pub fn coefficients_on(&self, monos: &[Monomial]) -> Vec<F::Elem> {
        monos.iter().map(|m| self.coefficient(m)).collect()
    }

    /// Image over a prime field ring with the same variables, `None` when a
    /// coefficient has no reduction.
    pub fn reduce_mod(&self, target: &RingRef<PrimeField>) -> Option<Poly<PrimeField>> {
        let pf = target.field();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let v = self.field().reduce_mod(c, pf)?;
            if v != 0 {
                terms.push((m.clone(), v));
            }
        }
        Some(Poly::from_terms(target, terms))
    }

    /// Substitutes `images[i]` for variable `i`. All images must share one
    /// target ring.
    pub fn compose(&self, images: &[Poly<F>]) -> Result<Poly<F>> {
        if images.len() != self.ring.nvars() {
            return Err(Error::InvalidInput(format!(
                "composition needs {} images, got {}",
                self.ring.nvars(),
                images.len()
            )));
        }
        let Some(target) = images.first().map(|p| p.ring.clone()) else {
            // constant ring: nothing to substitute
            return Err(Error::InvalidInput("composition with no variables".into()));
        };
        if images.iter().any(|p| !same_ring(&p.ring, &target)) {
            return Err(Error::RingMismatch);
        }
        let mut powers: Vec<Vec<Poly<F>>> = vec![vec![Poly::one(&target)]; images.len()];
        let mut acc: Vec<Term<F>> = Vec::new();
        for (m, c) in &self.terms {
            let mut prod = Poly::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
            }
            acc.extend(prod.terms);
        }
        Ok(Poly::from_terms(&target, acc))
    }

    /// Re-expresses `self` in `target`, sending variable `i` to variable
    /// `var_map[i]` of the target ring.
    pub fn map_to_ring(&self, target: &RingRef<F>, var_map: &[usize]) -> Poly<F> {
        debug_assert_eq!(var_map.len(), self.ring.nvars());
        let n = target.nvars();
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u16; n];
                for (i, &x) in m.exponents().iter().enumerate() {
                    e[var_map[i]] += x;
                }
                (Monomial::from_exponents(&e), c.clone())
            })
            .collect();
        Poly::from_terms(target, terms)
    }

    /// Moves `self` into a ring with the same variable names (possibly a
    /// different order), matching variables by name.
    pub fn to_ring_by_name(&self, target: &RingRef<F>) -> Result<Poly<F>> {
        let map = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                target.var_index(v).ok_or_else(|| {
                    Error::InvalidInput(format!("variable `{v}` missing in target ring"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if self.ring.field() != target.field() {
            return Err(Error::RingMismatch);
        }
        Ok(self.map_to_ring(target, &map))
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        let field = self.field();
        let mut acc = field.zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    v = field.mul(&v, &point[i]);
                }
            }
            acc = field.add(&acc, &v);
        }
        acc
    }

    /// Exact quotient `self / divisor` when the division leaves no
    /// remainder.
    pub fn exact_div(&self, divisor: &Poly<F>) -> Option<Poly<F>> {
        let (lm, lc) = divisor.leading_term().ok()?;
        let field = self.field();
        let lc_inv = field.inv(lc);
        let mut rem = self.clone();
        let mut quot: Vec<Term<F>> = Vec::new();
        while let Some((m, c)) = rem.terms.first().cloned() {
            if !lm.divides(&m) {
                return None;
            }
            let q_m = lm.quotient_of(&m);
            let q_c = field.mul(&c, &lc_inv);
            rem = rem.combine(&field.one(), divisor, &field.neg(&q_c), &q_m);
            quot.push((q_m, q_c));
        }
        Some(Poly::from_sorted_terms(&self.ring, quot))
    }

    pub fn max_var_degree(&self, index: usize) -> u16 {
        self.terms
            .iter()
            .map(|(m, _)| m.exponents()[index])
            .max()
            .unwrap_or(0)
    }
}

impl<F: Field> PolyRing<F> {
    pub fn zero_poly(self: &RingRef<F>) -> Poly<F> {
        Poly::zero(self)
    }
}

impl<'a, F: Field> Add<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: &'a Poly<F>) -> Poly<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in add");
        let one = self.field().one();
        self.combine(&one, rhs, &one, &Monomial::one(self.ring.nvars()))
    }
}

impl<'a, F: Field> Sub<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: &'a Poly<F>) -> Poly<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in sub");
        let field = self.field();
        self.combine(
            &field.one(),
            rhs,
            &field.neg(&field.one()),
            &Monomial::one(self.ring.nvars()),
        )
    }
}

impl<'a, F: Field> Mul<&'a Poly<F>> for &'a Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: &'a Poly<F>) -> Poly<F> {
        assert!(same_ring(&self.ring, &rhs.ring), "ring mismatch in mul");
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(&self.ring);
        }
        if rhs.terms.len() == 1 {
            return self.mul_term(&rhs.terms[0].0, &rhs.terms[0].1);
        }
        if self.terms.len() == 1 {
            return rhs.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let field = self.field();
        let mut acc = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                acc.push((m1.mul(m2), field.mul(c1, c2)));
            }
        }
        Poly::from_terms(&self.ring, acc)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        let field = self.field();
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = field.is_negative(c);
            let abs = if negative { field.neg(c) } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mono = format_monomial(&self.ring, m);
            let coeff = field.format(&abs);
            let coeff = if field.is_integral(&abs) {
                coeff
            } else {
                format!("({coeff})")
            };
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if field.is_one(&abs) {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{coeff}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

pub fn format_monomial<F: Field>(ring: &PolyRing<F>, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.vars()[i].clone()),
            _ => parts.push(format!("{}^{}", ring.vars()[i], e)),
        }
    }
    parts.join("*")
}
