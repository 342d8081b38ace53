use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::groebner::{normal_form, GroebnerBasis, Ideal};
use crate::monomial::MonomialOrder;
use crate::poly::Poly;
use crate::ring::{binomial, RingRef};

use super::hilbert::HilbertData;

/// A projective variety `X = V(p)` through its homogeneous ideal `p`, with a
/// cached graded reverse lex basis and Hilbert data of `R = S/p`.
///
/// Primality of `p` is trusted, only homogeneity is checked.
#[derive(Debug)]
pub struct VarietyPresentation<F: Field> {
    ring: RingRef<F>,
    ideal: Ideal<F>,
    gb: GroebnerBasis<F>,
    hilbert: HilbertData,
    minimal_generators: Vec<Poly<F>>,
    hf_cache: Mutex<HashMap<u32, u64>>,
}

impl<F: Field> Clone for VarietyPresentation<F> {
    fn clone(&self) -> Self {
        let cache = self.hf_cache.lock().expect("hf cache").clone();
        VarietyPresentation {
            ring: self.ring.clone(),
            ideal: self.ideal.clone(),
            gb: self.gb.clone(),
            hilbert: self.hilbert.clone(),
            minimal_generators: self.minimal_generators.clone(),
            hf_cache: Mutex::new(cache),
        }
    }
}

impl<F: Field> VarietyPresentation<F> {
    pub fn new(ideal: &Ideal<F>) -> Result<Self> {
        if !ideal.is_homogeneous() {
            return Err(Error::InvalidInput(
                "the defining ideal must be homogeneous".into(),
            ));
        }
        let ring = if ideal.ring().order() == MonomialOrder::GrevLex {
            ideal.ring().clone()
        } else {
            ideal.ring().with_order(MonomialOrder::GrevLex)
        };
        let gens = ideal
            .generators()
            .iter()
            .map(|g| g.to_ring_by_name(&ring))
            .collect::<Result<Vec<_>>>()?;
        let ideal = Ideal::new(&ring, gens)?;
        let gb = ideal.groebner()?;
        let hilbert = HilbertData::from_leading_monomials(gb.leading_monomials(), ring.nvars());
        let minimal_generators = minimal_generators(&ideal)?;
        Ok(VarietyPresentation {
            ring,
            ideal,
            gb,
            hilbert,
            minimal_generators,
            hf_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Projective space itself (`p = 0`).
    pub fn projective_space(ring: &RingRef<F>) -> Result<Self> {
        Self::new(&Ideal::zero(ring))
    }

    pub fn ring(&self) -> &RingRef<F> {
        &self.ring
    }

    pub fn ideal(&self) -> &Ideal<F> {
        &self.ideal
    }

    pub fn gb(&self) -> &GroebnerBasis<F> {
        &self.gb
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    /// `n` for `X ⊆ P^n`.
    pub fn ambient_dim(&self) -> usize {
        self.ring.nvars() - 1
    }

    /// Krull dimension `r` of `R`.
    pub fn dim(&self) -> i64 {
        self.hilbert.dim
    }

    /// Dimension of `X` as a projective variety, `r - 1`.
    pub fn projective_dim(&self) -> i64 {
        self.hilbert.dim - 1
    }

    pub fn hilbert_data(&self) -> &HilbertData {
        &self.hilbert
    }

    pub fn multiplicity(&self) -> i64 {
        self.hilbert.multiplicity
    }

    pub fn minimal_generators(&self) -> &[Poly<F>] {
        &self.minimal_generators
    }

    /// Largest degree in a minimal generating set of `p`; zero when `p = 0`.
    pub fn d0(&self) -> u32 {
        self.minimal_generators
            .iter()
            .filter_map(|g| g.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn generator_degrees(&self) -> Vec<u32> {
        self.minimal_generators
            .iter()
            .filter_map(|g| g.total_degree())
            .collect()
    }

    /// `HF_R(d)`, memoized.
    pub fn hilbert_function(&self, d: u32) -> u64 {
        if let Some(v) = self.hf_cache.lock().expect("hf cache").get(&d) {
            return *v;
        }
        let v = self.hilbert.hf(d);
        self.hf_cache.lock().expect("hf cache").insert(d, v);
        v
    }

    /// `dim_k S_d`.
    pub fn ambient_hf(&self, d: u32) -> u64 {
        let n = self.ambient_dim() as u64;
        binomial(n + d as u64, d as u64)
    }

    /// `HF_p(d) = dim_k p_d`.
    pub fn ideal_hf(&self, d: u32) -> u64 {
        self.ambient_hf(d) - self.hilbert_function(d)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.ideal_hf(1) == 0
    }

    /// `f` moved into this presentation's ring (same variable names).
    pub fn lift(&self, f: &Poly<F>) -> Result<Poly<F>> {
        if Arc::ptr_eq(f.ring(), &self.ring) {
            return Ok(f.clone());
        }
        if f.ring().vars() != self.ring.vars() || f.ring().field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        f.to_ring_by_name(&self.ring)
    }

    pub fn reduce(&self, f: &Poly<F>) -> Result<Poly<F>> {
        normal_form(f, &self.gb)
    }

    /// `f ∈ p`.
    pub fn contains(&self, f: &Poly<F>) -> Result<bool> {
        Ok(self.reduce(f)?.is_zero())
    }

    /// `p + (extra)` as an ideal of this ring.
    pub fn extend(&self, extra: &[Poly<F>]) -> Result<Ideal<F>> {
        let lifted = extra
            .iter()
            .map(|f| self.lift(f))
            .collect::<Result<Vec<_>>>()?;
        self.ideal.with_generators(&lifted)
    }
}

/// Greedy minimal generating set of a homogeneous ideal: generators are
/// visited by increasing degree and kept when not already in the ideal of
/// those kept so far.
fn minimal_generators<F: Field>(ideal: &Ideal<F>) -> Result<Vec<Poly<F>>> {
    let mut gens: Vec<Poly<F>> = ideal.generators().to_vec();
    gens.sort_by_key(|g| g.total_degree());
    let mut kept: Vec<Poly<F>> = Vec::new();
    let mut gb: Option<GroebnerBasis<F>> = None;
    for g in gens {
        let redundant = match &gb {
            Some(b) => b.contains(&g),
            None => false,
        };
        if !redundant {
            kept.push(g.normalized());
            gb = Some(Ideal::new(ideal.ring(), kept.clone())?.groebner()?);
        }
    }
    Ok(kept)
}
