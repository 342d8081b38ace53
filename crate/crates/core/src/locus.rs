//! Parameter loci of tuples of forms: linear equations for compositions
//! landing in an ideal, symbolic minors of the multiplication matrix, and
//! Monte Carlo density probes over prime fields.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::groebner::Ideal;
use crate::invariants::{
    analytic_spread, grade_at_least_2, principal_class_test, tau_floor, VarietyPresentation,
};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Poly, Term};
use crate::ring::{monomials_of_degree, PolyRing, RingRef};

/// Largest number of parameter variables a symbolic construction may use.
pub const MAX_PARAMETERS: usize = 400;
/// Largest number of minors `tau_minor_ideal` will expand.
pub const MAX_MINORS: u64 = 20_000;
/// Largest size of a symbolic minor.
pub const MAX_MINOR_SIZE: usize = 8;

/// Basis of the degree-`d` piece of a homogeneous ideal, as coefficient
/// vectors on `monomials_of_degree(d)`.
///
/// Every non-standard monomial `M` gives `M - NF(M)`; their leading
/// monomials are distinct, so they are independent, and they span.
pub fn vpz_basis<F: Field>(ideal: &Ideal<F>, d: u32) -> Result<Vec<Vec<F::Elem>>> {
    if !ideal.is_homogeneous() {
        return Err(Error::PreconditionViolated(
            "the ideal must be homogeneous".into(),
        ));
    }
    let ring = ideal.ring();
    let gb = ideal.groebner()?;
    let monos = monomials_of_degree(ring, d);
    let one = ring.field().one();
    Ok(monos
        .iter()
        .filter(|m| !gb.is_standard(m))
        .map(|m| {
            let mp = Poly::monomial(ring, m.clone(), one.clone());
            (&mp - &gb.reduce(&mp)).coefficients_on(&monos)
        })
        .collect())
}

/// Parameters `a_{i,j}` for `blocks` forms of degree `d`: form `i` is
/// `Σ_j a_{i,j} M_j` over `monomials_of_degree(d)`.
#[derive(Debug, Clone)]
pub struct ParameterSpace<F: Field> {
    pub ring: RingRef<F>,
    pub monomials: Vec<Monomial>,
    pub blocks: usize,
}

impl<F: Field> ParameterSpace<F> {
    pub fn new(base: &RingRef<F>, blocks: usize, d: u32) -> Result<Self> {
        let monomials = monomials_of_degree(base, d);
        let count = blocks * monomials.len();
        if count > MAX_PARAMETERS {
            return Err(Error::ResourceLimit(format!(
                "{count} parameter variables (limit {MAX_PARAMETERS})"
            )));
        }
        let stem = ["a", "b", "c", "w"]
            .into_iter()
            .find(|s| base.vars().iter().all(|v| !v.starts_with(s)))
            .ok_or_else(|| Error::InvalidInput("no free stem for parameter names".into()))?;
        let names: Vec<String> = (1..=blocks)
            .flat_map(|i| (1..=monomials.len()).map(move |j| format!("{stem}{i}_{j}")))
            .collect();
        let ring = PolyRing::with_limits(
            base.field().clone(),
            &names,
            MonomialOrder::GrevLex,
            base.limits(),
        )?;
        Ok(ParameterSpace {
            ring,
            monomials,
            blocks,
        })
    }

    pub fn width(&self) -> usize {
        self.monomials.len()
    }

    /// Index of `a_{i,j}` (both zero-based).
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.width() + j
    }

    /// The forms a point of the parameter space stands for.
    pub fn forms_at(&self, base: &RingRef<F>, point: &[F::Elem]) -> Vec<Poly<F>> {
        point
            .chunks(self.width())
            .map(|c| Poly::from_coefficients(base, &self.monomials, c))
            .collect()
    }
}

/// `p(z_1..z_m)` to be evaluated at `m` forms of degree `d`, with the result
/// tested against `target`.
#[derive(Debug, Clone)]
pub struct CompositionTemplate<F: Field> {
    pub p: Poly<F>,
    pub target: Ideal<F>,
    pub arg_degree: u32,
}

impl<F: Field> CompositionTemplate<F> {
    pub fn new(p: Poly<F>, target: Ideal<F>, arg_degree: u32) -> Result<Self> {
        if !p.is_zero() && !p.is_homogeneous() {
            return Err(Error::PreconditionViolated(
                "the template must be homogeneous".into(),
            ));
        }
        if !target.is_homogeneous() {
            return Err(Error::PreconditionViolated(
                "the target ideal must be homogeneous".into(),
            ));
        }
        if p.ring().field() != target.ring().field() {
            return Err(Error::RingMismatch);
        }
        Ok(CompositionTemplate {
            p,
            target,
            arg_degree,
        })
    }

    pub fn arity(&self) -> usize {
        self.p.ring().nvars()
    }

    /// `p(f_1, ..., f_m)` in the ring of the target ideal.
    pub fn substitute(&self, forms: &[Poly<F>]) -> Result<Poly<F>> {
        if self.p.is_zero() {
            return Ok(Poly::zero(self.target.ring()));
        }
        self.p.compose(forms)
    }
}

/// Equations on the parameters `a_{i,j}` cutting out the points with
/// `p(f_{a_1}, ..., f_{a_m}) ∈ b`.
#[derive(Debug, Clone)]
pub struct LocusEquations<F: Field> {
    pub parameters: ParameterSpace<F>,
    pub equations: Vec<Poly<F>>,
}

impl<F: Field> LocusEquations<F> {
    pub fn parameter_ring(&self) -> &RingRef<F> {
        &self.parameters.ring
    }

    pub fn vanish_at(&self, point: &[F::Elem]) -> bool {
        let field = self.parameters.ring.field();
        self.equations
            .iter()
            .all(|e| field.is_zero(&e.evaluate(point)))
    }
}

/// Expands the template over generic forms and reads off, by linearity of
/// the normal form, one linear combination of coefficients per standard
/// monomial of the result's degree.
pub fn locus_equations<F: Field>(t: &CompositionTemplate<F>) -> Result<LocusEquations<F>> {
    let base = t.target.ring();
    let params = ParameterSpace::new(base, t.arity(), t.arg_degree)?;
    if t.p.is_zero() {
        return Ok(LocusEquations {
            parameters: params,
            equations: Vec::new(),
        });
    }
    let na = params.ring.nvars();
    let nx = base.nvars();
    let mut names: Vec<String> = params.ring.vars().to_vec();
    names.extend(base.vars().iter().cloned());
    let big = PolyRing::with_limits(
        base.field().clone(),
        &names,
        MonomialOrder::GrevLex,
        base.limits(),
    )?;
    let field = base.field();
    let generic: Vec<Poly<F>> = (0..params.blocks)
        .map(|i| {
            let terms = params
                .monomials
                .iter()
                .enumerate()
                .map(|(j, m)| {
                    let mut e = vec![0u16; na + nx];
                    e[params.index(i, j)] = 1;
                    e[na..].copy_from_slice(m.exponents());
                    (Monomial::from_exponents(&e), field.one())
                })
                .collect();
            Poly::from_terms(&big, terms)
        })
        .collect();
    let expanded = t.p.compose(&generic)?;

    // group by the x-part of each monomial
    let mut by_x: HashMap<Monomial, Vec<Term<F>>> = HashMap::new();
    for (m, c) in expanded.terms() {
        let e = m.exponents();
        by_x.entry(Monomial::from_exponents(&e[na..]))
            .or_default()
            .push((Monomial::from_exponents(&e[..na]), c.clone()));
    }
    let gb = t.target.groebner()?;
    let mut eqs: HashMap<Monomial, Poly<F>> = HashMap::new();
    for (u, coeff_terms) in by_x {
        let coeff = Poly::from_terms(&params.ring, coeff_terms);
        let nf = gb.reduce(&Poly::monomial(base, u, field.one()));
        for (w, lambda) in nf.terms() {
            let entry = eqs
                .entry(w.clone())
                .or_insert_with(|| Poly::zero(&params.ring));
            *entry = &*entry + &coeff.scalar_mul(lambda);
        }
    }
    let mut keyed: Vec<(Monomial, Poly<F>)> =
        eqs.into_iter().filter(|(_, e)| !e.is_zero()).collect();
    keyed.sort_by(|a, b| base.cmp_monomials(&b.0, &a.0));
    let mut equations: Vec<Poly<F>> = Vec::with_capacity(keyed.len());
    for (_, e) in keyed {
        let e = e.normalized();
        if !equations.contains(&e) {
            equations.push(e);
        }
    }
    Ok(LocusEquations {
        parameters: params,
        equations,
    })
}

/// Ideal of maximal minors of the multiplication matrix at `m` for `r`
/// generic forms of degree `d`, `r = dim R`.
#[derive(Debug, Clone)]
pub struct TauMinors<F: Field> {
    pub parameters: ParameterSpace<F>,
    pub m: u32,
    pub rows: usize,
    pub cols: usize,
    pub ideal: Ideal<F>,
}

impl<F: Field> TauMinors<F> {
    /// `true` when every minor vanishes at `point`.
    pub fn vanishes_at(&self, point: &[F::Elem]) -> bool {
        let field = self.parameters.ring.field();
        self.ideal
            .generators()
            .iter()
            .all(|g| field.is_zero(&g.evaluate(point)))
    }
}

pub fn tau_minor_ideal<F: Field>(
    v: &VarietyPresentation<F>,
    d: u32,
    m: u32,
) -> Result<TauMinors<F>> {
    let r = usize::try_from(v.dim()).unwrap_or(0);
    if r == 0 {
        return Err(Error::PreconditionViolated("R has dimension zero".into()));
    }
    let floor = tau_floor(v, d);
    if m < floor {
        return Err(Error::PreconditionViolated(format!(
            "m = {m} is below the floor {floor}"
        )));
    }
    let base = v.ring();
    let field = base.field();
    let params = ParameterSpace::new(base, r, d)?;
    let rows = v.gb().standard_monomials(m);
    let cols = v.gb().standard_monomials(m - d);
    let ncols = r * cols.len();
    if rows.len() > ncols {
        return Ok(TauMinors {
            parameters: params.clone(),
            m,
            rows: rows.len(),
            cols: ncols,
            ideal: Ideal::new(&params.ring, vec![Poly::zero(&params.ring)])?,
        });
    }
    if rows.len() > MAX_MINOR_SIZE {
        return Err(Error::ResourceLimit(format!(
            "minors of size {} (limit {MAX_MINOR_SIZE})",
            rows.len()
        )));
    }
    let count = crate::ring::binomial(ncols as u64, rows.len() as u64);
    if count > MAX_MINORS {
        return Err(Error::ResourceLimit(format!(
            "{count} minors (limit {MAX_MINORS})"
        )));
    }
    let row_index: HashMap<&Monomial, usize> =
        rows.iter().enumerate().map(|(i, m)| (m, i)).collect();
    // entry (row, column) is a linear form in the a_{i,j}
    let mut matrix = vec![vec![Poly::zero(&params.ring); ncols]; rows.len()];
    for i in 0..r {
        for (k, u) in cols.iter().enumerate() {
            for (j, mj) in params.monomials.iter().enumerate() {
                let nf = v.gb().reduce(&Poly::monomial(base, u.mul(mj), field.one()));
                let a = Poly::var(&params.ring, params.index(i, j));
                for (w, c) in nf.terms() {
                    let cell = &mut matrix[row_index[w]][i * cols.len() + k];
                    *cell = &*cell + &a.scalar_mul(c);
                }
            }
        }
    }
    let mut minors = Vec::new();
    for chosen in combinations(ncols, rows.len()) {
        let sub: Vec<Vec<Poly<F>>> = matrix
            .iter()
            .map(|row| chosen.iter().map(|&c| row[c].clone()).collect())
            .collect();
        let det = determinant(sub)?;
        if !det.is_zero() {
            let det = det.normalized();
            if !minors.contains(&det) {
                minors.push(det);
            }
        }
    }
    Ok(TauMinors {
        parameters: params.clone(),
        m,
        rows: rows.len(),
        cols: ncols,
        ideal: Ideal::new(&params.ring, minors)?,
    })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in (i + 1)..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Fraction-free (Bareiss) determinant of a square matrix of polynomials.
fn determinant<F: Field>(mut a: Vec<Vec<Poly<F>>>) -> Result<Poly<F>> {
    let n = a.len();
    let ring = a[0][0].ring().clone();
    if n == 0 {
        return Ok(Poly::one(&ring));
    }
    let mut negate = false;
    let mut prev = Poly::one(&ring);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Ok(Poly::zero(&ring));
        };
        if piv != k {
            a.swap(piv, k);
            negate = !negate;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).ok_or_else(|| {
                    Error::InvalidInput("inexact division in a determinant".into())
                })?;
            }
            a[i][k] = Poly::zero(&ring);
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    Ok(if negate { -&det } else { det })
}

/// Loci probed by [`sample_locus`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locus {
    /// `j` forms generating an ideal of codimension `j`.
    PrincipalClass(usize),
    /// `n + 1` forms whose ideal has grade at least two.
    Grade2,
    /// `count` forms of maximal analytic spread.
    MaxSpread(usize),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::PrincipalClass(j) => write!(f, "C_{j}"),
            Locus::Grade2 => write!(f, "G_2"),
            Locus::MaxSpread(s) => write!(f, "N_{s}"),
        }
    }
}

impl FromStr for Locus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidInput(format!("unknown locus `{s}` (expected C_j, G_2 or N_s)"));
        let t = s.trim();
        let (head, tail) = t.split_at(t.len().min(1));
        let num: usize = tail.trim_start_matches('_').parse().map_err(|_| bad())?;
        match head {
            "C" | "c" if num >= 1 => Ok(Locus::PrincipalClass(num)),
            "G" | "g" if num == 2 => Ok(Locus::Grade2),
            "N" | "n" if num >= 1 => Ok(Locus::MaxSpread(num)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for Locus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub locus: Locus,
    pub prime: u32,
    pub trials: usize,
    pub hits: usize,
    pub seed: u64,
}

impl DensityReport {
    pub const CSV_HEADER: &'static str = "locus,prime,trials,hits,seed";

    pub fn fraction(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.locus, self.prime, self.trials, self.hits, self.seed
        )
    }
}

/// `V` over `GF(p)`. A variety already over a prime field must use `p`.
pub fn reduce_variety<F: Field>(
    v: &VarietyPresentation<F>,
    p: u32,
) -> Result<VarietyPresentation<PrimeField>> {
    let pf = PrimeField::new(p)?;
    let ring = PolyRing::with_limits(
        pf,
        v.ring().vars(),
        MonomialOrder::GrevLex,
        v.ring().limits(),
    )?;
    let gens = v
        .ideal()
        .generators()
        .iter()
        .map(|g| {
            g.reduce_mod(&ring)
                .ok_or_else(|| Error::InvalidInput(format!("`{g}` has no reduction modulo {p}")))
        })
        .collect::<Result<Vec<_>>>()?;
    VarietyPresentation::new(&Ideal::new(&ring, gens)?)
}

fn classify(
    v: &VarietyPresentation<PrimeField>,
    locus: Locus,
    forms: &[Poly<PrimeField>],
) -> Result<bool> {
    match locus {
        Locus::PrincipalClass(_) => principal_class_test(v, forms),
        Locus::Grade2 => grade_at_least_2(v, forms),
        Locus::MaxSpread(_) => match analytic_spread(v, forms) {
            Ok(l) => Ok(l == v.dim()),
            Err(Error::PreconditionViolated(_)) => Ok(false),
            Err(e) => Err(e),
        },
    }
}

/// Draws `trials` uniform tuples of degree-`d` forms over `GF(prime)` and
/// counts those in `locus`. Trial `t` uses ChaCha8 seeded with `seed` on
/// stream `t`, so the count does not depend on `jobs`.
pub fn sample_locus<F: Field>(
    v: &VarietyPresentation<F>,
    locus: Locus,
    d: u32,
    trials: usize,
    prime: u32,
    seed: u64,
    jobs: Option<usize>,
) -> Result<DensityReport> {
    if trials == 0 {
        return Err(Error::InvalidInput("at least one trial is needed".into()));
    }
    if d == 0 {
        return Err(Error::PreconditionViolated(
            "degree must be at least 1".into(),
        ));
    }
    let vp = reduce_variety(v, prime)?;
    let count = match locus {
        Locus::PrincipalClass(j) => {
            if j as i64 > vp.dim() {
                return Err(Error::PreconditionViolated(format!(
                    "C_{j} needs j <= dim R = {}",
                    vp.dim()
                )));
            }
            j
        }
        Locus::Grade2 => vp.nvars(),
        Locus::MaxSpread(s) => s,
    };
    let trial = |t: usize| -> Result<bool> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let forms: Vec<Poly<PrimeField>> = (0..count)
            .map(|_| Poly::random_form(vp.ring(), d, &mut rng))
            .collect();
        if forms.iter().all(|f| f.is_zero()) {
            return Ok(false);
        }
        classify(&vp, locus, &forms)
    };
    let outcomes: Vec<Result<bool>> = match jobs {
        Some(k) if k > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InvalidInput(e.to_string()))?;
            pool.install(|| (0..trials).into_par_iter().map(trial).collect())
        }
        _ => (0..trials).map(trial).collect(),
    };
    let mut hits = 0;
    for o in outcomes {
        if o? {
            hits += 1;
        }
    }
    Ok(DensityReport {
        locus,
        prime,
        trials,
        hits,
        seed,
    })
}
