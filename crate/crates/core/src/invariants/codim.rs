//! Dimension-theoretic tests on ideals of `R = S/p`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{colon_ideal, eliminate, Ideal};
use crate::linalg;
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::Poly;

use super::variety::VarietyPresentation;

/// `dim S/I` from the leading monomials of a Groebner basis of `I`: the
/// largest set of variables containing the support of no leading monomial.
/// Returns `-1` when `1` is a leading monomial.
pub fn dim_from_leading(leads: &[Monomial], nvars: usize) -> i64 {
    if leads.iter().any(|m| m.is_one()) {
        return -1;
    }
    assert!(
        nvars <= 128,
        "dimension search supports at most 128 variables"
    );
    let supports: Vec<u128> = leads
        .iter()
        .map(|m| m.support().fold(0u128, |acc, v| acc | (1u128 << v)))
        .collect();
    let full: u128 = if nvars == 128 {
        u128::MAX
    } else {
        (1u128 << nvars) - 1
    };
    let mut best = 0u32;
    independent_set(full, &supports, &mut best);
    best as i64
}

fn independent_set(set: u128, supports: &[u128], best: &mut u32) {
    let size = set.count_ones();
    if size <= *best {
        return;
    }
    match supports.iter().find(|&&s| s & !set == 0) {
        None => *best = size,
        Some(&s) => {
            let mut bits = s;
            while bits != 0 {
                let v = bits.trailing_zeros();
                bits &= bits - 1;
                independent_set(set & !(1u128 << v), supports, best);
            }
        }
    }
}

/// Krull dimension of `S/I`, `-1` for the unit ideal.
pub fn krull_dim<F: Field>(ideal: &Ideal<F>) -> Result<i64> {
    let gb = crate::groebner::buchberger(ideal, MonomialOrder::GrevLex)?;
    Ok(dim_from_leading(
        gb.leading_monomials(),
        ideal.ring().nvars(),
    ))
}

fn check_forms<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
) -> Result<(Vec<Poly<F>>, u32)> {
    if forms.is_empty() {
        return Err(Error::PreconditionViolated(
            "at least one form is required".into(),
        ));
    }
    let lifted = forms
        .iter()
        .map(|f| v.lift(f))
        .collect::<Result<Vec<_>>>()?;
    let mut degree = None;
    for f in &lifted {
        let d = f.homogeneous_degree().ok_or_else(|| {
            Error::InvalidInput(format!("form `{f}` is not homogeneous or is zero"))
        })?;
        match degree {
            None => degree = Some(d),
            Some(e) if e != d => {
                return Err(Error::InvalidInput("forms must share one degree".into()));
            }
            _ => {}
        }
    }
    Ok((lifted, degree.unwrap()))
}

/// `dim R/(forms)`.
pub fn quotient_dim<F: Field>(v: &VarietyPresentation<F>, forms: &[Poly<F>]) -> Result<i64> {
    krull_dim(&v.extend(forms)?)
}

/// `true` when the `j` forms generate an ideal of codimension `j` in `R`.
pub fn principal_class_test<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
) -> Result<bool> {
    let j = forms.len() as i64;
    if j == 0 || j > v.dim() {
        return Err(Error::PreconditionViolated(format!(
            "need between 1 and {} forms, got {j}",
            v.dim()
        )));
    }
    for f in forms {
        if v.contains(&v.lift(f)?)? {
            return Ok(false);
        }
    }
    Ok(quotient_dim(v, forms)? == v.dim() - j)
}

/// The multiplication map `R_{m-d}^j -> R_m`, `(u_i) ↦ Σ u_i f_i`, written
/// in standard-monomial coordinates. Row `k` is the coordinate of the `k`-th
/// standard monomial of degree `m`; column block `i` holds the images
/// `NF(u * f_i)` for the standard monomials `u` of degree `m - d`.
#[derive(Debug, Clone)]
pub struct TauMatrix<F: Field> {
    pub m: u32,
    pub degree: u32,
    pub row_monomials: Vec<Monomial>,
    pub column_monomials: Vec<Monomial>,
    pub blocks: usize,
    pub entries: Vec<Vec<F::Elem>>,
}

impl<F: Field> TauMatrix<F> {
    pub fn nrows(&self) -> usize {
        self.row_monomials.len()
    }

    pub fn ncols(&self) -> usize {
        self.blocks * self.column_monomials.len()
    }

    pub fn rank(&self, field: &F) -> usize {
        linalg::rank(field, &self.entries)
    }
}

/// Smallest admissible `m` for the matrix test: `max(d, d0)`.
pub fn tau_floor<F: Field>(v: &VarietyPresentation<F>, d: u32) -> u32 {
    d.max(v.d0())
}

pub fn tau_matrix<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
    m: u32,
) -> Result<TauMatrix<F>> {
    let (forms, d) = check_forms(v, forms)?;
    let floor = tau_floor(v, d);
    if m < floor {
        return Err(Error::PreconditionViolated(format!(
            "m = {m} is below the floor {floor}"
        )));
    }
    let ring = v.ring();
    let field = ring.field();
    let rows = v.gb().standard_monomials(m);
    let cols = v.gb().standard_monomials(m - d);
    let index: std::collections::HashMap<&Monomial, usize> =
        rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let ncols = forms.len() * cols.len();
    let mut entries = vec![vec![field.zero(); ncols]; rows.len()];
    for (i, f) in forms.iter().enumerate() {
        for (k, u) in cols.iter().enumerate() {
            let prod = f.mul_term(u, &field.one());
            let nf = v.gb().reduce(&prod);
            for (mono, c) in nf.terms() {
                let r = index[mono];
                entries[r][i * cols.len() + k] = c.clone();
            }
        }
    }
    Ok(TauMatrix {
        m,
        degree: d,
        row_monomials: rows,
        column_monomials: cols,
        blocks: forms.len(),
        entries,
    })
}

/// `true` when the matrix at `m` has full row rank `dim_k R_m`.
pub fn tau_surjective<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
    m: u32,
) -> Result<bool> {
    if forms.len() as i64 != v.dim() {
        return Err(Error::PreconditionViolated(format!(
            "the matrix test takes exactly {} forms, got {}",
            v.dim(),
            forms.len()
        )));
    }
    let t = tau_matrix(v, forms, m)?;
    Ok(t.rank(v.ring().field()) == t.nrows())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum TauSweep {
    Surjective { m: u32 },
    Indeterminate { from: u32, to: u32 },
}

/// Tries `m = floor ..= floor + cap` and reports the first surjective `m`.
pub fn tau_sweep<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
    cap: u32,
) -> Result<TauSweep> {
    let (_, d) = check_forms(v, forms)?;
    let floor = tau_floor(v, d);
    for m in floor..=floor + cap {
        if tau_surjective(v, forms, m)? {
            return Ok(TauSweep::Surjective { m });
        }
    }
    Ok(TauSweep::Indeterminate {
        from: floor,
        to: floor + cap,
    })
}

/// `grade(I R) >= 2` for `I` generated by `gens`.
///
/// With `g` the first generator outside `p` (a nonzerodivisor, `R` being a
/// domain), the grade is at least two exactly when `I` holds a nonzerodivisor
/// of `R/(g)`, i.e. when `(p + (g)) : (p + I) = p + (g)`.
pub fn grade_at_least_2<F: Field>(v: &VarietyPresentation<F>, gens: &[Poly<F>]) -> Result<bool> {
    let lifted = gens.iter().map(|f| v.lift(f)).collect::<Result<Vec<_>>>()?;
    let mut g = None;
    for f in &lifted {
        if !v.contains(f)? {
            g = Some(f.clone());
            break;
        }
    }
    let Some(g) = g else {
        return Ok(false);
    };
    let a = v.extend(std::slice::from_ref(&g))?;
    let a_gb = a.groebner()?;
    if a_gb.is_unit() {
        return Ok(true);
    }
    // generators already in p + (g) contribute the unit ideal to the colon
    let rest: Vec<Poly<F>> = lifted.into_iter().filter(|f| !a_gb.contains(f)).collect();
    if rest.is_empty() {
        return Ok(false);
    }
    let colon = colon_ideal(&a, &Ideal::new(v.ring(), rest)?)?;
    Ok(colon.groebner()? == a_gb)
}

/// Kernel of `k[y_1..y_s] -> R`, `y_i ↦ f_i`, in a ring on fresh `y`
/// variables.
pub fn fiber_kernel<F: Field>(v: &VarietyPresentation<F>, forms: &[Poly<F>]) -> Result<Ideal<F>> {
    let (forms, _) = check_forms_allow_zero(v, forms)?;
    let ring = v.ring();
    let n = ring.nvars();
    let ys = ring.fresh_names("y", forms.len());
    let mut vars: Vec<String> = ring.vars().to_vec();
    vars.extend(ys.iter().cloned());
    let big = ring.derive(&vars, MonomialOrder::GrevLex)?;
    let embed: Vec<usize> = (0..n).collect();
    let mut gens: Vec<Poly<F>> = v
        .ideal()
        .generators()
        .iter()
        .map(|p| p.map_to_ring(&big, &embed))
        .collect();
    for (i, f) in forms.iter().enumerate() {
        gens.push(&Poly::var(&big, n + i) - &f.map_to_ring(&big, &embed));
    }
    let keep: Vec<usize> = (n..n + forms.len()).collect();
    eliminate(&Ideal::new(&big, gens)?, &keep)
}

fn check_forms_allow_zero<F: Field>(
    v: &VarietyPresentation<F>,
    forms: &[Poly<F>],
) -> Result<(Vec<Poly<F>>, u32)> {
    if forms.is_empty() {
        return Err(Error::PreconditionViolated(
            "at least one form is required".into(),
        ));
    }
    let lifted = forms
        .iter()
        .map(|f| v.lift(f))
        .collect::<Result<Vec<_>>>()?;
    let degrees: Vec<u32> = lifted
        .iter()
        .filter(|f| !f.is_zero())
        .map(|f| {
            f.homogeneous_degree()
                .ok_or_else(|| Error::InvalidInput(format!("form `{f}` is not homogeneous")))
        })
        .collect::<Result<_>>()?;
    let Some(&d) = degrees.first() else {
        return Err(Error::PreconditionViolated("all forms are zero".into()));
    };
    if degrees.iter().any(|&e| e != d) {
        return Err(Error::InvalidInput("forms must share one degree".into()));
    }
    Ok((lifted, d))
}

/// Analytic spread of `(forms) R`: the dimension of `k[f_1..f_s] ⊆ R`.
pub fn analytic_spread<F: Field>(v: &VarietyPresentation<F>, forms: &[Poly<F>]) -> Result<i64> {
    let mut all_in = true;
    for f in forms {
        if !v.contains(&v.lift(f)?)? {
            all_in = false;
            break;
        }
    }
    if all_in {
        return Err(Error::PreconditionViolated(
            "every form lies in the defining ideal".into(),
        ));
    }
    krull_dim(&fiber_kernel(v, forms)?)
}
