//! Probabilistic degree of the generic fiber of a rational map.
//!
//! A random point `q ∈ X` is found over a prime field by cutting `X` with
//! `dim X` random hyperplanes and an affine chart, solving the resulting
//! zero-dimensional system from a lex basis. The fiber over `h(q)` is
//! `p + (h_i w_j - h_j w_i)` with `w = h(q)`, saturated by a random member of
//! the base ideal; its multiplicity is the number of points in the fiber.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec, PrimeField};
use crate::groebner::{buchberger, saturate_by_poly, Ideal};
use crate::invariants::HilbertData;
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{PolyRing, RingRef};

use super::map::RationalMap;

/// Prime used when the map is defined over the rationals.
pub const PROBE_PRIME: u32 = 32003;

const POINT_ATTEMPTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberProbe {
    pub prime: u32,
    /// Fiber degree at each sampled point; `None` when the fiber is not
    /// finite there.
    pub degrees: Vec<Option<i64>>,
    /// Samples for which no usable point was found.
    pub failed: usize,
}

impl FiberProbe {
    /// Smallest finite fiber degree seen.
    pub fn min_degree(&self) -> Option<i64> {
        self.degrees.iter().flatten().min().copied()
    }
}

fn probe_field<F: Field>(field: &F) -> Result<PrimeField> {
    match field.spec() {
        FieldSpec::PrimeField(p) => PrimeField::new(p),
        FieldSpec::Rationals => PrimeField::new(PROBE_PRIME),
    }
}

fn reduce_all<F: Field>(
    polys: &[Poly<F>],
    ring: &RingRef<PrimeField>,
) -> Result<Vec<Poly<PrimeField>>> {
    polys
        .iter()
        .map(|p| {
            p.reduce_mod(ring).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "`{p}` has no reduction modulo {}",
                    ring.field().modulus()
                ))
            })
        })
        .collect()
}

/// Degree of the fiber of `h` through `samples` random points of `X`.
pub fn fiber_degree_probe<F: Field>(
    h: &RationalMap<F>,
    samples: usize,
    seed: u64,
) -> Result<FiberProbe> {
    let v = h.variety();
    let pf = probe_field(v.ring().field())?;
    let ring = PolyRing::with_limits(
        pf,
        v.ring().vars(),
        MonomialOrder::GrevLex,
        v.ring().limits(),
    )?;
    let ideal = reduce_all(v.ideal().generators(), &ring)?;
    let forms = reduce_all(h.forms(), &ring)?;
    let cut = (v.dim() - 1).max(0) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degrees = Vec::with_capacity(samples);
    let mut failed = 0;
    for _ in 0..samples {
        match sample_fiber(&ring, &ideal, &forms, cut, &mut rng)? {
            Some(d) => degrees.push(d),
            None => failed += 1,
        }
    }
    Ok(FiberProbe {
        prime: pf.modulus(),
        degrees,
        failed,
    })
}

fn sample_fiber<R: Rng>(
    ring: &RingRef<PrimeField>,
    ideal: &[Poly<PrimeField>],
    forms: &[Poly<PrimeField>],
    cut: usize,
    rng: &mut R,
) -> Result<Option<Option<i64>>> {
    let field = *ring.field();
    for _ in 0..POINT_ATTEMPTS {
        let Some(q) = random_point(ring, ideal, cut, rng)? else {
            continue;
        };
        let w: Vec<u32> = forms.iter().map(|f| f.evaluate(&q)).collect();
        if w.iter().all(|c| *c == 0) {
            continue;
        }
        let mut gens = ideal.to_vec();
        for i in 0..forms.len() {
            for j in (i + 1)..forms.len() {
                let a = forms[i].scalar_mul(&w[j]);
                let b = forms[j].scalar_mul(&w[i]);
                gens.push(&a - &b);
            }
        }
        let mut b = Poly::zero(ring);
        for f in forms {
            b = &b + &f.scalar_mul(&field.random(rng));
        }
        if b.is_zero() || b.evaluate(&q) == 0 {
            continue;
        }
        let fiber = saturate_by_poly(&Ideal::new(ring, gens)?, &b)?;
        let gb = fiber.groebner()?;
        let hd = HilbertData::from_leading_monomials(gb.leading_monomials(), ring.nvars());
        return Ok(Some(match hd.dim {
            1 => Some(hd.multiplicity),
            d if d > 1 => None,
            _ => continue,
        }));
    }
    Ok(None)
}

/// A point of `V(ideal) ⊆ P^n` over the prime field, found by slicing with
/// `cut` random hyperplanes and a random affine chart.
pub fn random_point<R: Rng>(
    ring: &RingRef<PrimeField>,
    ideal: &[Poly<PrimeField>],
    cut: usize,
    rng: &mut R,
) -> Result<Option<Vec<u32>>> {
    let field = *ring.field();
    let lex = ring.with_order(MonomialOrder::Lex);
    let n1 = ring.nvars();
    let linear = |rng: &mut R| {
        let mut l = Poly::zero(&lex);
        for i in 0..n1 {
            l = &l + &Poly::var(&lex, i).scalar_mul(&field.random(rng));
        }
        l
    };
    let mut gens: Vec<Poly<PrimeField>> = ideal
        .iter()
        .map(|p| p.to_ring_by_name(&lex))
        .collect::<Result<_>>()?;
    for _ in 0..cut {
        gens.push(linear(rng));
    }
    let chart = &linear(rng) - &Poly::one(&lex);
    gens.push(chart);
    let gb = buchberger(&Ideal::new(&lex, gens)?, MonomialOrder::Lex)?;
    if gb.is_unit() {
        return Ok(None);
    }
    let mut point: Vec<Option<u32>> = vec![None; n1];
    for var in (0..n1).rev() {
        let mut univariate: Vec<Vec<u32>> = Vec::new();
        for g in gb.elements() {
            let uses_earlier = (0..var).any(|i| g.uses_var(i));
            if uses_earlier || !g.uses_var(var) {
                continue;
            }
            let deg = g.max_var_degree(var) as usize;
            let mut coeffs = vec![0u32; deg + 1];
            for (m, c) in g.terms() {
                let mut val = *c;
                for (i, &e) in m.exponents().iter().enumerate().skip(var + 1) {
                    for _ in 0..e {
                        val = field.mul(&val, &point[i].expect("assigned"));
                    }
                }
                let k = m.exponents()[var] as usize;
                coeffs[k] = field.add(&coeffs[k], &val);
            }
            if coeffs.iter().any(|c| *c != 0) {
                univariate.push(coeffs);
            }
        }
        if univariate.is_empty() {
            // a free coordinate: the slice was not zero-dimensional
            return Ok(None);
        }
        let roots = common_roots(&field, &univariate);
        match roots.choose(rng) {
            Some(r) => point[var] = Some(*r),
            None => return Ok(None),
        }
    }
    Ok(Some(point.into_iter().map(|c| c.unwrap()).collect()))
}

fn eval_univariate(field: &PrimeField, coeffs: &[u32], x: u32) -> u32 {
    coeffs
        .iter()
        .rev()
        .fold(0u32, |acc, c| field.add(&field.mul(&acc, &x), c))
}

fn common_roots(field: &PrimeField, polys: &[Vec<u32>]) -> Vec<u32> {
    (0..field.modulus())
        .filter(|&x| polys.iter().all(|p| eval_univariate(field, p, x) == 0))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::invariants::VarietyPresentation;
    use crate::parse::parse_poly;
    use std::sync::Arc;

    fn space(vars: &[&str]) -> Arc<VarietyPresentation<Rationals>> {
        let r = PolyRing::new(Rationals, vars, MonomialOrder::GrevLex).unwrap();
        Arc::new(VarietyPresentation::projective_space(&r).unwrap())
    }

    fn map(v: &Arc<VarietyPresentation<Rationals>>, forms: &[&str]) -> RationalMap<Rationals> {
        let fs = forms
            .iter()
            .map(|f| parse_poly(f, v.ring()).unwrap())
            .collect();
        RationalMap::new(v, fs).unwrap()
    }

    #[test]
    fn squaring_on_the_line_has_two_point_fibers() {
        let v = space(&["x", "y"]);
        let p = fiber_degree_probe(&map(&v, &["x^2", "y^2"]), 3, 7).unwrap();
        assert_eq!(p.degrees, vec![Some(2); 3]);
    }

    #[test]
    fn linear_maps_have_one_point_fibers() {
        let v = space(&["x", "y", "z"]);
        let p = fiber_degree_probe(&map(&v, &["x + y", "y + z", "x + z"]), 3, 1).unwrap();
        assert_eq!(p.degrees, vec![Some(1); 3]);
        let q = fiber_degree_probe(&map(&v, &["y*z", "x*z", "x*y"]), 2, 1).unwrap();
        assert_eq!(q.degrees, vec![Some(1); 2]);
    }

    #[test]
    fn points_lie_on_the_variety() {
        let pf = PrimeField::new(PROBE_PRIME).unwrap();
        let r = PolyRing::new(pf, &["x", "y", "z"], MonomialOrder::GrevLex).unwrap();
        let conic = parse_poly("y^2 - x*z", &r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        for _ in 0..5 {
            if let Some(q) = random_point(&r, std::slice::from_ref(&conic), 1, &mut rng).unwrap() {
                assert_eq!(conic.evaluate(&q), 0);
                found += 1;
            }
        }
        assert!(found > 0);
    }
}
