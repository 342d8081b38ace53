use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Poly, Term};
use crate::ring::RingRef;

use super::{GroebnerBasis, Ideal};

#[derive(Debug, Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u32,
}

struct State<F: Field> {
    ring: RingRef<F>,
    polys: Vec<Poly<F>>,
    leads: Vec<Monomial>,
    sugars: Vec<u32>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

/// S-polynomial `x*(L/lm f)*f - y*(L/lm g)*g` with `x*lc f = y*lc g`.
pub(crate) fn s_polynomial<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Poly<F> {
    let field = f.field();
    let (lf, cf) = f.leading_term().expect("nonzero");
    let (lg, cg) = g.leading_term().expect("nonzero");
    let l = lf.lcm(lg);
    let (x, y) = field.cancel_pair(cf, cg);
    let a = f.mul_term(&lf.quotient_of(&l), &x);
    a.combine(&field.one(), g, &field.neg(&y), &lg.quotient_of(&l))
}

fn find_divisor(leads: &[&Monomial], m: &Monomial) -> Option<usize> {
    leads.iter().position(|l| l.divides(m))
}

/// Full reduction of `f` by `basis`. Returns `(r, s)` where `r = s * NF(f)`;
/// over the rationals `r` stays integral (fraction-free), over a prime field
/// `s` is one.
fn reduce_scaled<F: Field>(
    f: &Poly<F>,
    basis: &[&Poly<F>],
    leads: &[&Monomial],
) -> (Poly<F>, F::Elem) {
    let ring = f.ring().clone();
    let field = ring.field().clone();
    let fraction_free = field.spec() == crate::field::FieldSpec::Rationals;
    let mut scale = field.one();
    let mut p = f.clone();
    let mut rem: Vec<Term<F>> = Vec::new();
    while let Some((m, c)) = p.terms().first().cloned() {
        match find_divisor(leads, &m) {
            Some(k) => {
                let g = basis[k];
                let (lg, cg) = g.leading_term().expect("nonzero");
                let (x, y) = field.cancel_pair(&c, cg);
                p = p.combine(&x, g, &field.neg(&y), &lg.quotient_of(&m));
                if !field.is_one(&x) {
                    scale = field.mul(&scale, &x);
                    for t in rem.iter_mut() {
                        t.1 = field.mul(&t.1, &x);
                    }
                }
                if fraction_free {
                    let mut coeffs: Vec<F::Elem> = p
                        .terms()
                        .iter()
                        .chain(rem.iter())
                        .map(|t| t.1.clone())
                        .collect();
                    let content = field.make_primitive(&mut coeffs);
                    if !field.is_one(&content) {
                        let inv = field.inv(&content);
                        p = p.scalar_mul(&inv);
                        for t in rem.iter_mut() {
                            t.1 = field.mul(&t.1, &inv);
                        }
                        scale = field.mul(&scale, &inv);
                    }
                }
            }
            None => {
                let mut terms = p.into_terms();
                let lead = terms.remove(0);
                rem.push(lead);
                p = Poly::from_sorted_terms(&ring, terms);
            }
        }
    }
    (Poly::from_sorted_terms(&ring, rem), scale)
}

/// Normal form that is linear in `f`.
pub(crate) fn reduce_linear<F: Field>(
    f: &Poly<F>,
    basis: &[Poly<F>],
    leads: &[Monomial],
) -> Poly<F> {
    let b: Vec<&Poly<F>> = basis.iter().collect();
    let l: Vec<&Monomial> = leads.iter().collect();
    let (r, scale) = reduce_scaled(f, &b, &l);
    let field = f.field();
    if field.is_one(&scale) {
        r
    } else {
        r.scalar_mul(&field.inv(&scale))
    }
}

impl<F: Field> State<F> {
    fn active_refs(&self) -> (Vec<&Poly<F>>, Vec<&Monomial>) {
        (
            self.active.iter().map(|&i| &self.polys[i]).collect(),
            self.active.iter().map(|&i| &self.leads[i]).collect(),
        )
    }

    fn insert(&mut self, mut h: Poly<F>, sugar: u32) {
        h.normalize_in_place();
        let lh = h.leading_monomial().unwrap().clone();
        let h_idx = self.polys.len();
        self.polys.push(h);
        self.leads.push(lh.clone());
        self.sugars.push(sugar);

        // Gebauer-Moeller update.
        let mut cands: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| {
                let lcm = self.leads[g].lcm(&lh);
                let sugar = (self.sugars[g] + lcm.degree() - self.leads[g].degree())
                    .max(sugar + lcm.degree() - lh.degree());
                Pair {
                    i: g,
                    j: h_idx,
                    lcm,
                    sugar,
                }
            })
            .collect();
        let mut kept: Vec<Pair> = Vec::new();
        while let Some(p) = cands.pop() {
            let coprime = self.leads[p.i].is_coprime(&lh);
            let dominated = cands
                .iter()
                .chain(kept.iter())
                .any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                kept.push(p);
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|p| !self.leads[p.i].is_coprime(&lh))
            .collect();

        let leads = &self.leads;
        self.pairs.retain(|p| {
            !(lh.divides(&p.lcm) && leads[p.i].lcm(&lh) != p.lcm && leads[p.j].lcm(&lh) != p.lcm)
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !lh.divides(&leads[g]));
        self.active.push(h_idx);
    }

    fn select(&mut self) -> Option<Pair> {
        let order = self.ring.order();
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }
}

/// Reduced Groebner basis of `ideal` under `order`.
pub fn buchberger<F: Field>(ideal: &Ideal<F>, order: MonomialOrder) -> Result<GroebnerBasis<F>> {
    let ring = if ideal.ring().order() == order {
        ideal.ring().clone()
    } else {
        ideal.ring().with_order(order)
    };
    let limits = ring.limits();
    let mut gens: Vec<Poly<F>> = ideal
        .generators()
        .iter()
        .map(|g| {
            if std::sync::Arc::ptr_eq(g.ring(), &ring) {
                g.clone()
            } else {
                g.to_ring_by_name(&ring).expect("same variables")
            }
        })
        .collect();
    gens.sort_by(|a, b| {
        a.total_degree().cmp(&b.total_degree()).then_with(|| {
            ring.cmp_monomials(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
        })
    });

    let mut st = State {
        ring: ring.clone(),
        polys: Vec::new(),
        leads: Vec::new(),
        sugars: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
    };
    for g in gens {
        let deg = g.total_degree().unwrap_or(0);
        if deg > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "generator degree {deg} exceeds max degree {}",
                limits.max_degree
            )));
        }
        let (basis, leads) = st.active_refs();
        let (h, _) = reduce_scaled(&g, &basis, &leads);
        if !h.is_zero() {
            st.insert(h, deg);
        }
    }

    let mut processed = 0usize;
    while let Some(pair) = st.select() {
        processed += 1;
        if processed > limits.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "more than {} S-pairs processed",
                limits.max_pairs
            )));
        }
        if pair.lcm.degree() > limits.max_degree {
            return Err(Error::ResourceLimit(format!(
                "S-pair degree {} exceeds max degree {}",
                pair.lcm.degree(),
                limits.max_degree
            )));
        }
        let s = s_polynomial(&st.polys[pair.i], &st.polys[pair.j]);
        let (basis, leads) = st.active_refs();
        let (h, _) = reduce_scaled(&s, &basis, &leads);
        if !h.is_zero() {
            if h.is_constant() {
                let one = Poly::one(&ring);
                return Ok(GroebnerBasis::from_reduced(&ring, vec![one]));
            }
            st.insert(h, pair.sugar);
        }
    }

    Ok(GroebnerBasis::from_reduced(&ring, interreduce(&ring, st)))
}

fn interreduce<F: Field>(ring: &RingRef<F>, st: State<F>) -> Vec<Poly<F>> {
    let mut minimal: Vec<Poly<F>> = st.active.iter().map(|&i| st.polys[i].clone()).collect();
    // drop elements whose leading monomial is divisible by another one
    minimal.sort_by(|a, b| {
        ring.cmp_monomials(a.leading_monomial().unwrap(), b.leading_monomial().unwrap())
    });
    let mut kept: Vec<Poly<F>> = Vec::new();
    for p in minimal {
        let lm = p.leading_monomial().unwrap();
        if !kept
            .iter()
            .any(|q| q.leading_monomial().unwrap().divides(lm))
        {
            kept.push(p);
        }
    }
    let mut out = Vec::with_capacity(kept.len());
    for k in 0..kept.len() {
        let others: Vec<&Poly<F>> = kept
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, p)| p)
            .collect();
        let leads: Vec<&Monomial> = others
            .iter()
            .map(|p| p.leading_monomial().unwrap())
            .collect();
        let (mut r, _) = reduce_scaled(&kept[k], &others, &leads);
        r.normalize_in_place();
        out.push(r);
    }
    out.sort_by(|a, b| {
        match ring.cmp_monomials(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()) {
            Ordering::Equal => Ordering::Equal,
            o => o,
        }
    });
    out
}
