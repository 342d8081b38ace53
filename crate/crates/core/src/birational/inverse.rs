use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{eliminate, Ideal};
use crate::monomial::MonomialOrder;
use crate::poly::Poly;

use super::map::{is_dominant, is_well_defined, proportional_mod, solve_slots, RationalMap};

/// An inverse found by [`find_inverse`].
#[derive(Debug, Clone)]
pub struct Inverse<F: Field> {
    pub map: RationalMap<F>,
    pub degree: u32,
    /// Dimension of the solution space at that degree.
    pub solution_dim: usize,
}

/// `true` when `g ∘ f` and `f ∘ g` both agree with the identity modulo `p`
/// (`h_i x_j - h_j x_i ∈ p`) and neither composite vanishes on `X`.
pub fn verify_inverse_pair<F: Field>(f: &RationalMap<F>, g: &RationalMap<F>) -> Result<bool> {
    let v = f.variety();
    if g.variety().ideal() != v.ideal() {
        return Err(Error::RingMismatch);
    }
    let ring = v.ring();
    let xs: Vec<Poly<F>> = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
    for h in [g.compose_forms(f.forms())?, f.compose_forms(g.forms())?] {
        let mut all_zero = true;
        for c in &h {
            if !v.contains(c)? {
                all_zero = false;
                break;
            }
        }
        if all_zero || !proportional_mod(v, &h, &xs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default search cap `d^(n-1) + 2`.
pub fn default_inverse_cap<F: Field>(h: &RationalMap<F>) -> u32 {
    let n = h.variety().ambient_dim() as u32;
    let d = h.degree() as u64;
    let pow = d.saturating_pow(n.saturating_sub(1));
    pow.saturating_add(2).min(u32::MAX as u64) as u32
}

/// Searches degrees `1..=cap` for a representative `g` of the inverse.
///
/// At each degree `e`, the conditions `g_i(f) x_j - g_j(f) x_i ∈ p` are
/// linear in the coefficients of `g` (taken on standard monomials), so the
/// candidates form the nullspace of an exact linear system. Every candidate
/// is confirmed with [`verify_inverse_pair`].
pub fn find_inverse<F: Field>(h: &RationalMap<F>, cap: u32) -> Result<Option<Inverse<F>>> {
    if !is_well_defined(h)? {
        return Err(Error::PreconditionViolated(
            "the map is not well defined on X".into(),
        ));
    }
    if !is_dominant(h)? {
        return Err(Error::PreconditionViolated(
            "the map is not dominant".into(),
        ));
    }
    let v = h.variety();
    let ring = v.ring();
    let field = ring.field();
    let n1 = v.nvars();
    let pairs: Vec<(usize, usize)> = (0..n1)
        .flat_map(|i| ((i + 1)..n1).map(move |j| (i, j)))
        .collect();
    let xs: Vec<Poly<F>> = (0..n1).map(|i| Poly::var(ring, i)).collect();
    for e in 1..=cap {
        let monos = v.gb().standard_monomials(e);
        if monos.is_empty() {
            continue;
        }
        let mut images: Vec<Vec<Poly<F>>> = Vec::with_capacity(n1 * monos.len());
        let pulled: Vec<Poly<F>> = monos
            .iter()
            .map(|u| {
                Poly::monomial(ring, u.clone(), field.one())
                    .compose(h.forms())
                    .map(|p| v.gb().reduce(&p))
            })
            .collect::<Result<_>>()?;
        for i in 0..n1 {
            for uf in &pulled {
                let slots = pairs
                    .iter()
                    .map(|&(a, b)| {
                        if a == i {
                            v.gb().reduce(&(uf * &xs[b]))
                        } else if b == i {
                            -&v.gb().reduce(&(uf * &xs[a]))
                        } else {
                            Poly::zero(ring)
                        }
                    })
                    .collect();
                images.push(slots);
            }
        }
        let basis = solve_slots(v, &images, pairs.len());
        if basis.is_empty() {
            continue;
        }
        let s = monos.len();
        let mut candidates: Vec<Vec<F::Elem>> = basis.clone();
        if basis.len() > 1 {
            // a generic member, in case individual basis vectors fail
            let mut sum = vec![field.zero(); basis[0].len()];
            for (k, b) in basis.iter().enumerate() {
                let w = field.from_i64(k as i64 + 1);
                for (acc, c) in sum.iter_mut().zip(b) {
                    *acc = field.add(acc, &field.mul(&w, c));
                }
            }
            candidates.push(sum);
        }
        for coords in candidates {
            let forms: Vec<Poly<F>> = coords
                .chunks(s)
                .map(|c| Poly::from_coefficients(ring, &monos, c))
                .collect();
            let Ok(g) = RationalMap::new(v, forms) else {
                continue;
            };
            if verify_inverse_pair(h, &g)? {
                return Ok(Some(Inverse {
                    map: g,
                    degree: e,
                    solution_dim: basis.len(),
                }));
            }
        }
    }
    Ok(None)
}

/// Ideal of the graph of `h` in `k[x, y]`: `p(x) + (y_i - t h_i(x))` with
/// `t` eliminated. The `y` variables get fresh names.
pub fn graph_ideal<F: Field>(h: &RationalMap<F>) -> Result<Ideal<F>> {
    let v = h.variety();
    let ring = v.ring();
    let n1 = ring.nvars();
    let mut names = ring.fresh_names("t", 1);
    let ys = ring.fresh_names("y", n1);
    names.extend(ring.vars().iter().cloned());
    names.extend(ys);
    let big = ring.derive(&names, MonomialOrder::GrevLex)?;
    let embed: Vec<usize> = (1..=n1).collect();
    let t = Poly::var(&big, 0);
    let mut gens: Vec<Poly<F>> = v
        .ideal()
        .generators()
        .iter()
        .map(|p| p.map_to_ring(&big, &embed))
        .collect();
    for (i, f) in h.forms().iter().enumerate() {
        gens.push(&Poly::var(&big, 1 + n1 + i) - &(&t * &f.map_to_ring(&big, &embed)));
    }
    let keep: Vec<usize> = (1..big.nvars()).collect();
    eliminate(&Ideal::new(&big, gens)?, &keep)
}
