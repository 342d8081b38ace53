use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{analytic_spread, VarietyPresentation};
use crate::linalg;
use crate::monomial::Monomial;
use crate::poly::Poly;

/// A rational self-map of `X ⊆ P^n` given by a representative: `n + 1`
/// forms of one degree, not all in `p`.
#[derive(Debug)]
pub struct RationalMap<F: Field> {
    variety: Arc<VarietyPresentation<F>>,
    forms: Vec<Poly<F>>,
    degree: u32,
    well_defined: OnceLock<bool>,
    dominant: OnceLock<bool>,
}

impl<F: Field> Clone for RationalMap<F> {
    fn clone(&self) -> Self {
        RationalMap {
            variety: self.variety.clone(),
            forms: self.forms.clone(),
            degree: self.degree,
            well_defined: self.well_defined.clone(),
            dominant: self.dominant.clone(),
        }
    }
}

impl<F: Field> RationalMap<F> {
    pub fn new(variety: &Arc<VarietyPresentation<F>>, forms: Vec<Poly<F>>) -> Result<Self> {
        if forms.len() != variety.nvars() {
            return Err(Error::InvalidInput(format!(
                "a map needs {} forms, got {}",
                variety.nvars(),
                forms.len()
            )));
        }
        let forms = forms
            .iter()
            .map(|f| variety.lift(f))
            .collect::<Result<Vec<_>>>()?;
        let mut degree = None;
        for f in forms.iter().filter(|f| !f.is_zero()) {
            let d = f
                .homogeneous_degree()
                .ok_or_else(|| Error::InvalidInput(format!("form `{f}` is not homogeneous")))?;
            if *degree.get_or_insert(d) != d {
                return Err(Error::InvalidInput(
                    "all forms must have the same degree".into(),
                ));
            }
        }
        let degree = degree.ok_or_else(|| Error::InvalidInput("all forms are zero".into()))?;
        let mut all_in = true;
        for f in &forms {
            if !variety.contains(f)? {
                all_in = false;
                break;
            }
        }
        if all_in {
            return Err(Error::InvalidInput(
                "every form lies in the defining ideal".into(),
            ));
        }
        Ok(RationalMap {
            variety: variety.clone(),
            forms,
            degree,
            well_defined: OnceLock::new(),
            dominant: OnceLock::new(),
        })
    }

    /// Like [`RationalMap::new`] but also checks a declared degree.
    pub fn with_degree(
        variety: &Arc<VarietyPresentation<F>>,
        forms: Vec<Poly<F>>,
        degree: u32,
    ) -> Result<Self> {
        let map = Self::new(variety, forms)?;
        if map.degree != degree {
            return Err(Error::InvalidInput(format!(
                "forms have degree {}, declared {degree}",
                map.degree
            )));
        }
        Ok(map)
    }

    pub fn variety(&self) -> &Arc<VarietyPresentation<F>> {
        &self.variety
    }

    pub fn forms(&self) -> &[Poly<F>] {
        &self.forms
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Forms of `self ∘ inner`: each form of `self` with the forms of
    /// `inner` substituted.
    pub fn compose_forms(&self, inner: &[Poly<F>]) -> Result<Vec<Poly<F>>> {
        self.forms.iter().map(|f| f.compose(inner)).collect()
    }

    pub fn identity(variety: &Arc<VarietyPresentation<F>>) -> Result<Self> {
        let ring = variety.ring();
        let forms = (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect();
        Self::new(variety, forms)
    }
}

/// `p_i(h_0, ..., h_n) ∈ p` for every generator `p_i` of `p`.
pub fn is_well_defined<F: Field>(h: &RationalMap<F>) -> Result<bool> {
    if let Some(v) = h.well_defined.get() {
        return Ok(*v);
    }
    let v = h.variety();
    let mut ok = true;
    for p in v.ideal().generators() {
        if !v.contains(&p.compose(h.forms())?)? {
            ok = false;
            break;
        }
    }
    let _ = h.well_defined.set(ok);
    Ok(ok)
}

/// `a_i b_j - a_j b_i ∈ p` for all `i < j`.
pub fn proportional_mod<F: Field>(
    v: &VarietyPresentation<F>,
    a: &[Poly<F>],
    b: &[Poly<F>],
) -> Result<bool> {
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let cross = &(&a[i] * &b[j]) - &(&a[j] * &b[i]);
            if !v.contains(&cross)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Two representatives define the same map on `X`.
pub fn same_map<F: Field>(h: &RationalMap<F>, other: &RationalMap<F>) -> Result<bool> {
    if !Arc::ptr_eq(h.variety(), other.variety()) && h.variety().ideal() != other.variety().ideal()
    {
        return Err(Error::RingMismatch);
    }
    proportional_mod(h.variety(), h.forms(), other.forms())
}

/// Normal-form coordinates of `f` on `monos`.
pub(crate) fn nf_coordinates<F: Field>(
    v: &VarietyPresentation<F>,
    f: &Poly<F>,
    monos: &[Monomial],
) -> Vec<F::Elem> {
    v.gb().reduce(f).coefficients_on(monos)
}

/// The linear space of tuples `g` of degree-`e` forms (taken modulo `p`,
/// in standard-monomial coordinates) with `g_i h_j - g_j h_i ∈ p`.
pub struct RepresentativeSpace<F: Field> {
    pub degree: u32,
    pub monomials: Vec<Monomial>,
    pub basis: Vec<Vec<F::Elem>>,
}

impl<F: Field> RepresentativeSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The tuple of forms encoded by a coordinate vector.
    pub fn tuple(&self, v: &VarietyPresentation<F>, coords: &[F::Elem]) -> Vec<Poly<F>> {
        let s = self.monomials.len();
        coords
            .chunks(s.max(1))
            .take(v.nvars())
            .map(|c| Poly::from_coefficients(v.ring(), &self.monomials, c))
            .collect()
    }

    pub fn basis_tuples(&self, v: &VarietyPresentation<F>) -> Vec<Vec<Poly<F>>> {
        self.basis.iter().map(|b| self.tuple(v, b)).collect()
    }

    /// `true` when the tuple, reduced modulo `p`, lies in the space.
    pub fn contains(&self, v: &VarietyPresentation<F>, tuple: &[Poly<F>]) -> Result<bool> {
        let mut coords = Vec::new();
        for g in tuple {
            coords.extend(nf_coordinates(v, &v.lift(g)?, &self.monomials));
        }
        Ok(linalg::in_row_space(v.ring().field(), &self.basis, &coords))
    }
}

/// Solves `Σ_k c_k images[k][slot] = 0` for every slot, where `images[k]`
/// holds the polynomials unknown `k` contributes to each slot. Returns a
/// basis of the solution space.
pub(crate) fn solve_slots<F: Field>(
    v: &VarietyPresentation<F>,
    images: &[Vec<Poly<F>>],
    nslots: usize,
) -> Vec<Vec<F::Elem>> {
    let field = v.ring().field();
    let nunknowns = images.len();
    // collect every monomial per slot to index rows
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for slot in 0..nslots {
        let mut monos: Vec<Monomial> = Vec::new();
        let mut index = std::collections::HashMap::new();
        for img in images {
            for (m, _) in img[slot].terms() {
                if !index.contains_key(m) {
                    index.insert(m.clone(), monos.len());
                    monos.push(m.clone());
                }
            }
        }
        let mut block = vec![vec![field.zero(); nunknowns]; monos.len()];
        for (k, img) in images.iter().enumerate() {
            for (m, c) in img[slot].terms() {
                block[index[m]][k] = c.clone();
            }
        }
        rows.extend(block);
    }
    linalg::nullspace(field, &rows, nunknowns)
}

/// All degree-`e` representatives of `h`, as a linear space.
pub fn representatives_of_degree<F: Field>(
    h: &RationalMap<F>,
    e: u32,
) -> Result<RepresentativeSpace<F>> {
    if e == 0 {
        return Err(Error::PreconditionViolated(
            "representative degree must be at least 1".into(),
        ));
    }
    let v = h.variety();
    let n1 = v.nvars();
    let monos = v.gb().standard_monomials(e);
    let s = monos.len();
    let pairs: Vec<(usize, usize)> = (0..n1)
        .flat_map(|i| ((i + 1)..n1).map(move |j| (i, j)))
        .collect();
    let ring = v.ring();
    let one = ring.field().one();
    // unknown (i, u): g_i gets the monomial u; it enters pair (i, j) as
    // u*h_j and pair (a, i) as -u*h_a
    let mut images: Vec<Vec<Poly<F>>> = Vec::with_capacity(n1 * s);
    for i in 0..n1 {
        for u in &monos {
            let slots = pairs
                .iter()
                .map(|&(a, b)| {
                    if a == i {
                        v.gb().reduce(&h.forms()[b].mul_term(u, &one))
                    } else if b == i {
                        -&v.gb().reduce(&h.forms()[a].mul_term(u, &one))
                    } else {
                        Poly::zero(ring)
                    }
                })
                .collect();
            images.push(slots);
        }
    }
    let basis = solve_slots(v, &images, pairs.len());
    Ok(RepresentativeSpace {
        degree: e,
        monomials: monos,
        basis,
    })
}

/// Dominance: the analytic spread of the base ideal equals `dim R`.
///
/// The spread is computed for any tuple of forms; for a tuple that does not
/// map `X` into itself it measures the closure of the image in `P^n`.
pub fn is_dominant<F: Field>(h: &RationalMap<F>) -> Result<bool> {
    if let Some(v) = h.dominant.get() {
        return Ok(*v);
    }
    let ok = analytic_spread(h.variety(), h.forms())? == h.variety().dim();
    let _ = h.dominant.set(ok);
    Ok(ok)
}

/// Normal-form coefficient vectors of all forms on the standard monomials
/// of degree `d`, concatenated and scaled so the first nonzero entry is 1.
pub fn canonical_coordinates<F: Field>(h: &RationalMap<F>) -> Result<Vec<F::Elem>> {
    if !is_well_defined(h)? {
        return Err(Error::PreconditionViolated(
            "the map is not well defined on X".into(),
        ));
    }
    let v = h.variety();
    let monos = v.gb().standard_monomials(h.degree());
    let mut out = Vec::with_capacity(monos.len() * h.forms().len());
    for f in h.forms() {
        out.extend(nf_coordinates(v, f, &monos));
    }
    let field = v.ring().field();
    if let Some(lead) = out.iter().find(|c| !field.is_zero(c)).cloned() {
        let inv = field.inv(&lead);
        for c in out.iter_mut() {
            *c = field.mul(c, &inv);
        }
    }
    Ok(out)
}
