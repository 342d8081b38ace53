use num_bigint::BigInt;
use num_traits::{pow, One};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::invariants::{quotient_dim, VarietyPresentation};

use super::map::{is_dominant, RationalMap};

/// Refuse to materialize bounds longer than this many bits.
const MAX_BOUND_BITS: f64 = 64_000_000.0;

fn as_decimal<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Upper bound on the degree of an inverse representative,
/// `2n * ceil(δ^a / 2 + δ)^b` with `a = 2(n + m + 1 - dim X)^2`,
/// `b = 2^(dim X + 2)`, `m = n` and `δ = max(d + 1, d0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InverseBound {
    pub n: u64,
    pub m: u64,
    pub d: u64,
    pub d0: u64,
    pub delta: u64,
    pub dim_x: u64,
    pub inner_exponent: u64,
    pub outer_exponent: u64,
    #[serde(serialize_with = "as_decimal")]
    pub value: BigInt,
    /// `d^(n-1)`, the classical bound for Cremona maps of `P^n`.
    #[serde(serialize_with = "as_decimal")]
    pub cremona_bound: BigInt,
    pub exceeds_cremona_bound: bool,
}

pub fn inverse_degree_bound<F: Field>(v: &VarietyPresentation<F>, d: u32) -> Result<InverseBound> {
    if d == 0 {
        return Err(Error::PreconditionViolated(
            "degree must be at least 1".into(),
        ));
    }
    if !v.is_nondegenerate() {
        return Err(Error::PreconditionViolated("X lies in a hyperplane".into()));
    }
    if v.projective_dim() < 0 {
        return Err(Error::PreconditionViolated("X is empty".into()));
    }
    let n = v.ambient_dim() as u64;
    let m = n;
    let dim_x = v.projective_dim() as u64;
    let d0 = v.d0() as u64;
    let delta = (d as u64 + 1).max(d0);
    let base = n + m + 1 - dim_x;
    let inner_exponent = 2 * base * base;
    let outer_exponent = 1u64
        .checked_shl((dim_x + 2) as u32)
        .ok_or_else(|| Error::ResourceLimit("bound exponent overflows".into()))?;
    let bits = outer_exponent as f64 * (inner_exponent as f64 * (delta as f64).log2() + 1.0);
    if bits > MAX_BOUND_BITS {
        return Err(Error::ResourceLimit(format!(
            "the bound has about {bits:.0} bits"
        )));
    }
    let big_delta = BigInt::from(delta);
    let power: BigInt = pow(big_delta.clone(), inner_exponent as usize);
    // ceil(power / 2 + delta)
    let bracket: BigInt = (power + BigInt::one()) / 2 + &big_delta;
    let value = BigInt::from(2 * n) * pow(bracket, outer_exponent as usize);
    let cremona_bound: BigInt = pow(BigInt::from(d), n.saturating_sub(1) as usize);
    Ok(InverseBound {
        n,
        m,
        d: d as u64,
        d0,
        delta,
        dim_x,
        inner_exponent,
        outer_exponent,
        exceeds_cremona_bound: value > cremona_bound,
        value,
        cremona_bound,
    })
}

/// Multiplicity comparison `e(R) <= e(R) d^(r-1)` for a dominant map whose
/// base ideal defines the empty set in `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuvReport {
    pub lhs: i64,
    pub rhs: i64,
    pub equality: bool,
    pub applicable: bool,
    pub r: i64,
    /// Height of the base ideal in `R`.
    pub height: i64,
    /// `r <= height + 1`, under which equality is equivalent to birationality.
    pub criterion_applies: bool,
    pub birational_by_criterion: Option<bool>,
}

pub fn suv_check<F: Field>(h: &RationalMap<F>) -> Result<SuvReport> {
    if !is_dominant(h)? {
        return Err(Error::PreconditionViolated(
            "the map is not dominant".into(),
        ));
    }
    let v = h.variety();
    let r = v.dim();
    let base_dim = quotient_dim(v, h.forms())?;
    if base_dim > 0 {
        return Err(Error::NotApplicable(format!(
            "the base locus is not empty (dim R/I = {base_dim}); local multiplicities would be needed"
        )));
    }
    let height = r - base_dim.max(0);
    let e = v.multiplicity();
    let rhs = (h.degree() as i64)
        .checked_pow((r - 1).max(0) as u32)
        .and_then(|p| p.checked_mul(e))
        .ok_or_else(|| Error::ResourceLimit("multiplicity bound overflows".into()))?;
    let equality = e == rhs;
    let criterion_applies = r <= height + 1;
    Ok(SuvReport {
        lhs: e,
        rhs,
        equality,
        applicable: true,
        r,
        height,
        criterion_applies,
        birational_by_criterion: criterion_applies.then_some(equality),
    })
}

/// `(n + 1) HF_R(d) - 1` together with the flag `HF_p(d) = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdimBound {
    pub degree: u32,
    pub hf_r: u64,
    pub hf_ideal: u64,
    pub bound: u64,
    pub quasi_projective: bool,
}

pub fn edim_bound<F: Field>(v: &VarietyPresentation<F>, d: u32) -> Result<EdimBound> {
    if d == 0 {
        return Err(Error::PreconditionViolated(
            "degree must be at least 1".into(),
        ));
    }
    let hf_r = v.hilbert_function(d);
    let hf_ideal = v.ideal_hf(d);
    Ok(EdimBound {
        degree: d,
        hf_r,
        hf_ideal,
        bound: v.nvars() as u64 * hf_r - 1,
        quasi_projective: hf_ideal == 0,
    })
}
