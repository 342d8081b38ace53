use crate::error::{Error, Result};
use crate::field::Field;
use crate::monomial::MonomialOrder;
use crate::poly::{same_ring, Poly};
use crate::ring::RingRef;

use super::{buchberger, GroebnerBasis, Ideal};

fn check_ring<F: Field>(p: &Poly<F>, ring: &RingRef<F>) -> Result<Poly<F>> {
    if std::sync::Arc::ptr_eq(p.ring(), ring) {
        return Ok(p.clone());
    }
    if p.ring().vars() != ring.vars() || p.ring().field() != ring.field() {
        return Err(Error::RingMismatch);
    }
    p.to_ring_by_name(ring)
}

/// Normal form of `f` modulo the basis `gb`. `f` may come from a ring that
/// differs from the basis ring only in its monomial order.
pub fn normal_form<F: Field>(f: &Poly<F>, gb: &GroebnerBasis<F>) -> Result<Poly<F>> {
    let f = check_ring(f, gb.ring())?;
    Ok(gb.reduce(&f))
}

pub fn ideal_membership<F: Field>(f: &Poly<F>, ideal: &Ideal<F>) -> Result<bool> {
    if !same_ring(f.ring(), ideal.ring()) {
        return Err(Error::RingMismatch);
    }
    let gb = ideal.groebner()?;
    Ok(gb.contains(f))
}

/// `I ∩ J` via the auxiliary-variable construction `tI + (1-t)J` and
/// elimination of `t`.
pub fn intersect<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    let ring = i.ring();
    if !same_ring(ring, j.ring()) {
        return Err(Error::RingMismatch);
    }
    if i.generators().is_empty() || j.generators().is_empty() {
        return Ok(Ideal::zero(ring));
    }
    let t_name = ring.fresh_names("t", 1).remove(0);
    let mut vars = vec![t_name];
    vars.extend(ring.vars().iter().cloned());
    let big = ring.derive(&vars, MonomialOrder::BlockElim(1))?;
    let shift: Vec<usize> = (1..=ring.nvars()).collect();
    let t = Poly::var(&big, 0);
    let one_minus_t = &Poly::one(&big) - &t;
    let mut gens = Vec::new();
    for g in i.generators() {
        gens.push(&t * &g.map_to_ring(&big, &shift));
    }
    for g in j.generators() {
        gens.push(&one_minus_t * &g.map_to_ring(&big, &shift));
    }
    let gb = buchberger(&Ideal::new(&big, gens)?, MonomialOrder::BlockElim(1))?;
    let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..ring.nvars()).collect();
    let kept = gb
        .elements()
        .iter()
        .filter(|p| !p.uses_var(0))
        .map(|p| drop_leading_vars(p, ring, &back))
        .collect();
    Ideal::new(ring, kept)
}

/// Maps a polynomial that does not involve the eliminated variables back
/// into `target`; `map[i] == usize::MAX` marks an eliminated variable.
fn drop_leading_vars<F: Field>(p: &Poly<F>, target: &RingRef<F>, map: &[usize]) -> Poly<F> {
    let n = target.nvars();
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let mut e = vec![0u16; n];
            for (i, &x) in m.exponents().iter().enumerate() {
                if map[i] != usize::MAX {
                    e[map[i]] = x;
                }
            }
            (crate::monomial::Monomial::from_exponents(&e), c.clone())
        })
        .collect();
    Poly::from_terms(target, terms)
}

/// `I : (g)`, computed as `(I ∩ (g)) / g`.
pub fn colon_by_poly<F: Field>(i: &Ideal<F>, g: &Poly<F>) -> Result<Ideal<F>> {
    if !same_ring(i.ring(), g.ring()) {
        return Err(Error::RingMismatch);
    }
    let ring = i.ring();
    if g.is_zero() {
        return Ideal::new(ring, vec![Poly::one(ring)]);
    }
    let inter = intersect(i, &Ideal::new(ring, vec![g.clone()])?)?;
    let quots = inter
        .generators()
        .iter()
        .map(|h| {
            h.exact_div(g).ok_or_else(|| {
                Error::InvalidInput(
                    "intersection element not divisible by the colon generator".into(),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ideal::new(ring, quots)
}

/// `I : J = ∩_g (I : g)` over the generators of `J`.
pub fn colon_ideal<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    if !same_ring(i.ring(), j.ring()) {
        return Err(Error::RingMismatch);
    }
    let ring = i.ring();
    let mut acc: Option<Ideal<F>> = None;
    for g in j.generators() {
        let c = colon_by_poly(i, g)?;
        acc = Some(match acc {
            None => c,
            Some(a) => intersect(&a, &c)?,
        });
    }
    Ok(match acc {
        Some(a) => Ideal::new(ring, a.groebner()?.elements().to_vec())?,
        None => Ideal::new(ring, vec![Poly::one(ring)])?,
    })
}

/// `I : J^∞`, iterating colons until the reduced basis stabilizes.
pub fn saturate<F: Field>(i: &Ideal<F>, j: &Ideal<F>) -> Result<Ideal<F>> {
    let mut current = Ideal::new(i.ring(), i.groebner()?.elements().to_vec())?;
    let mut gb = current.groebner()?;
    loop {
        let next = colon_ideal(&current, j)?;
        let next_gb = next.groebner()?;
        if next_gb == gb {
            return Ok(current);
        }
        current = next;
        gb = next_gb;
    }
}

/// `I : g^∞` as `(I + (1 - t*g)) ∩ k[x]`.
pub fn saturate_by_poly<F: Field>(i: &Ideal<F>, g: &Poly<F>) -> Result<Ideal<F>> {
    let ring = i.ring();
    if !same_ring(ring, g.ring()) {
        return Err(Error::RingMismatch);
    }
    if g.is_zero() {
        return Ideal::new(ring, vec![Poly::one(ring)]);
    }
    let t_name = ring.fresh_names("t", 1).remove(0);
    let mut vars = vec![t_name];
    vars.extend(ring.vars().iter().cloned());
    let big = ring.derive(&vars, MonomialOrder::BlockElim(1))?;
    let shift: Vec<usize> = (1..=ring.nvars()).collect();
    let mut gens: Vec<Poly<F>> = i
        .generators()
        .iter()
        .map(|p| p.map_to_ring(&big, &shift))
        .collect();
    gens.push(&Poly::one(&big) - &(&Poly::var(&big, 0) * &g.map_to_ring(&big, &shift)));
    let gb = buchberger(&Ideal::new(&big, gens)?, MonomialOrder::BlockElim(1))?;
    let back: Vec<usize> = std::iter::once(usize::MAX).chain(0..ring.nvars()).collect();
    let kept = gb
        .elements()
        .iter()
        .filter(|p| !p.uses_var(0))
        .map(|p| drop_leading_vars(p, ring, &back))
        .collect();
    Ideal::new(ring, kept)
}

/// Elimination ideal `I ∩ k[keep]`, returned in a ring on the kept
/// variables (original relative order, graded reverse lex).
pub fn eliminate<F: Field>(ideal: &Ideal<F>, keep: &[usize]) -> Result<Ideal<F>> {
    let ring = ideal.ring();
    let n = ring.nvars();
    if keep.iter().any(|&k| k >= n) {
        return Err(Error::InvalidInput("variable index out of range".into()));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let elim: Vec<usize> = (0..n).filter(|i| !keep_sorted.contains(i)).collect();
    let keep_names: Vec<String> = keep_sorted
        .iter()
        .map(|&i| ring.vars()[i].clone())
        .collect();
    let sub = ring.derive(&keep_names, MonomialOrder::GrevLex)?;
    if elim.is_empty() {
        let gens = ideal
            .generators()
            .iter()
            .map(|g| g.to_ring_by_name(&sub))
            .collect::<Result<Vec<_>>>()?;
        return Ideal::new(&sub, gens);
    }

    let mut order_vars: Vec<String> = elim.iter().map(|&i| ring.vars()[i].clone()).collect();
    order_vars.extend(keep_names.iter().cloned());
    let block = ring.derive(&order_vars, MonomialOrder::BlockElim(elim.len()))?;
    let gens = ideal
        .generators()
        .iter()
        .map(|g| g.to_ring_by_name(&block))
        .collect::<Result<Vec<_>>>()?;
    let gb = buchberger(
        &Ideal::new(&block, gens)?,
        MonomialOrder::BlockElim(elim.len()),
    )?;
    let back: Vec<usize> = (0..block.nvars())
        .map(|i| {
            if i < elim.len() {
                usize::MAX
            } else {
                i - elim.len()
            }
        })
        .collect();
    let kept = gb
        .elements()
        .iter()
        .filter(|p| (0..elim.len()).all(|v| !p.uses_var(v)))
        .map(|p| drop_leading_vars(p, &sub, &back))
        .collect();
    Ideal::new(&sub, kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::parse::parse_poly;
    use crate::ring::PolyRing;

    fn ring() -> RingRef<Rationals> {
        PolyRing::new(Rationals, &["x", "y", "z"], MonomialOrder::GrevLex).unwrap()
    }

    fn ideal(r: &RingRef<Rationals>, gens: &[&str]) -> Ideal<Rationals> {
        Ideal::new(r, gens.iter().map(|g| parse_poly(g, r).unwrap()).collect()).unwrap()
    }

    fn same(a: &Ideal<Rationals>, b: &Ideal<Rationals>) -> bool {
        a.groebner().unwrap() == b.groebner().unwrap()
    }

    #[test]
    fn intersection_of_coordinate_ideals() {
        let r = ring();
        let got = intersect(&ideal(&r, &["x"]), &ideal(&r, &["y"])).unwrap();
        assert!(same(&got, &ideal(&r, &["x*y"])));
    }

    #[test]
    fn colon_of_monomial_ideal() {
        let r = ring();
        let got =
            colon_by_poly(&ideal(&r, &["x^2*y", "x*z"]), &parse_poly("x", &r).unwrap()).unwrap();
        assert!(same(&got, &ideal(&r, &["x*y", "z"])));
    }

    #[test]
    fn saturation_removes_embedded_component() {
        let r = ring();
        // (x^2, x*y) = (x) ∩ (x^2, y); saturating by (x, y) leaves (x)
        let got = saturate(&ideal(&r, &["x^2", "x*y"]), &ideal(&r, &["x", "y"])).unwrap();
        assert!(same(&got, &ideal(&r, &["x"])));
    }

    #[test]
    fn saturation_by_one_polynomial() {
        let r = ring();
        let got = saturate_by_poly(&ideal(&r, &["x^2*y"]), &parse_poly("y", &r).unwrap()).unwrap();
        assert!(same(&got, &ideal(&r, &["x^2"])));
        let unit = saturate_by_poly(&ideal(&r, &["x"]), &parse_poly("x", &r).unwrap()).unwrap();
        assert!(unit.groebner().unwrap().is_unit());
    }

    #[test]
    fn twisted_cubic_implicitization() {
        let r = PolyRing::new(
            Rationals,
            &["s", "t", "x", "y", "z", "w"],
            MonomialOrder::GrevLex,
        )
        .unwrap();
        let i = ideal(&r, &["x - s^3", "y - s^2*t", "z - s*t^2", "w - t^3"]);
        let e = eliminate(&i, &[2, 3, 4, 5]).unwrap();
        assert_eq!(e.ring().vars(), &["x", "y", "z", "w"]);
        let expected = ideal(e.ring(), &["x*z - y^2", "y*w - z^2", "x*w - y*z"]);
        assert!(same(&e, &expected));
    }
}
