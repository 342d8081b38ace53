use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::field::Field;
use crate::invariants::grade_at_least_2;
use crate::poly::Poly;

use super::inverse::{default_inverse_cap, find_inverse};
use super::map::{is_dominant, is_well_defined, representatives_of_degree, RationalMap};
use super::probe::fiber_degree_probe;

/// Outcome of the search for a representative whose base ideal has grade
/// at least two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClearDegree<F: Field> {
    Yes { witness: Vec<Poly<F>> },
    No { reason: String },
    Unknown { trials: usize, space_dim: usize },
}

impl<F: Field> ClearDegree<F> {
    pub fn is_yes(&self) -> bool {
        matches!(self, ClearDegree::Yes { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            ClearDegree::Yes { .. } => "yes",
            ClearDegree::No { .. } => "no",
            ClearDegree::Unknown { .. } => "unknown",
        }
    }
}

/// Looks for a degree-`e` representative of `h` whose base ideal has grade
/// at least two in `R`.
///
/// The given representative is tried first when its degree is `e`. If the
/// space of degree-`e` representatives is one-dimensional its generator
/// decides the question; otherwise `trials` seeded random members are
/// tested and a failure is reported as unknown.
pub fn clear_degree_check<F: Field>(
    h: &RationalMap<F>,
    e: u32,
    trials: usize,
    seed: u64,
) -> Result<ClearDegree<F>> {
    let v = h.variety();
    if e == h.degree() && grade_at_least_2(v, h.forms())? {
        return Ok(ClearDegree::Yes {
            witness: h.forms().to_vec(),
        });
    }
    let space = representatives_of_degree(h, e)?;
    match space.dim() {
        0 => {
            return Ok(ClearDegree::No {
                reason: format!("no representative of degree {e}"),
            })
        }
        1 => {
            let t = space.basis_tuples(v).remove(0);
            return Ok(if grade_at_least_2(v, &t)? {
                ClearDegree::Yes { witness: t }
            } else {
                ClearDegree::No {
                    reason: format!(
                        "the unique degree-{e} representative has a base ideal of grade 1"
                    ),
                }
            });
        }
        _ => {}
    }
    let field = v.ring().field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let mut coords = vec![field.zero(); space.basis[0].len()];
        for b in &space.basis {
            let w = field.random(&mut rng);
            for (acc, c) in coords.iter_mut().zip(b) {
                *acc = field.add(acc, &field.mul(&w, c));
            }
        }
        if coords.iter().all(|c| field.is_zero(c)) {
            continue;
        }
        let t = space.tuple(v, &coords);
        if grade_at_least_2(v, &t)? {
            return Ok(ClearDegree::Yes { witness: t });
        }
    }
    Ok(ClearDegree::Unknown {
        trials,
        space_dim: space.dim(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Birationality<F: Field> {
    Yes {
        inverse: Vec<Poly<F>>,
        inverse_degree: u32,
    },
    No {
        reason: String,
    },
    Indeterminate {
        search_cap: u32,
    },
}

impl<F: Field> Birationality<F> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Birationality::Yes { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Birationality::Yes { .. } => "yes",
            Birationality::No { .. } => "no",
            Birationality::Indeterminate { .. } => "indeterminate",
        }
    }
}

/// Knobs shared by the pipeline stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnalysisOptions {
    /// Inverse search cap; `None` uses `d^(n-1) + 2`.
    pub cap: Option<u32>,
    pub trials: usize,
    pub seed: u64,
    pub probe_points: usize,
    /// Degree at which clear degree is judged; `None` uses the degree of
    /// the given representative.
    pub target_degree: Option<u32>,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            cap: None,
            trials: 32,
            seed: 0,
            probe_points: 3,
            target_degree: None,
        }
    }
}

/// Decides birationality: an explicit inverse proves it, a fiber of degree
/// at least two at every probed point (or failure of well-definedness or
/// dominance) disproves it.
pub fn is_birational<F: Field>(
    h: &RationalMap<F>,
    opts: &AnalysisOptions,
) -> Result<Birationality<F>> {
    if !is_well_defined(h)? {
        return Ok(Birationality::No {
            reason: "not well defined on X".into(),
        });
    }
    if !is_dominant(h)? {
        return Ok(Birationality::No {
            reason: "not dominant".into(),
        });
    }
    let cap = opts.cap.unwrap_or_else(|| default_inverse_cap(h));
    if let Some(inv) = find_inverse(h, cap)? {
        return Ok(Birationality::Yes {
            inverse: inv.map.forms().to_vec(),
            inverse_degree: inv.degree,
        });
    }
    let probe = fiber_degree_probe(h, opts.probe_points, opts.seed)?;
    let finite: Vec<i64> = probe.degrees.iter().flatten().copied().collect();
    if !finite.is_empty() && finite.iter().all(|&d| d >= 2) {
        return Ok(Birationality::No {
            reason: format!(
                "generic fiber has degree {} (probed over GF({}))",
                finite.iter().min().unwrap(),
                probe.prime
            ),
        });
    }
    Ok(Birationality::Indeterminate { search_cap: cap })
}

/// The full membership verdict for `Bir(X)_d`, with `d` from
/// [`AnalysisOptions::target_degree`] or else the degree of the given
/// representative.
#[derive(Debug, Clone)]
pub struct MapVerdict<F: Field> {
    pub degree: u32,
    pub well_defined: bool,
    pub dominant: bool,
    pub clear_degree: ClearDegree<F>,
    pub birational: Birationality<F>,
    pub in_bir_xd: bool,
    pub diagnostics: Vec<String>,
}

pub fn bir_xd_membership<F: Field>(
    h: &RationalMap<F>,
    opts: &AnalysisOptions,
) -> Result<MapVerdict<F>> {
    let degree = opts.target_degree.unwrap_or(h.degree());
    let mut diagnostics = Vec::new();
    let well_defined = is_well_defined(h)?;
    if !well_defined {
        diagnostics.push("the forms do not map X into X; later stages skipped".to_string());
        return Ok(MapVerdict {
            degree,
            well_defined,
            dominant: false,
            clear_degree: ClearDegree::Unknown {
                trials: 0,
                space_dim: 0,
            },
            birational: Birationality::No {
                reason: "not well defined on X".into(),
            },
            in_bir_xd: false,
            diagnostics,
        });
    }
    let dominant = is_dominant(h)?;
    if !dominant {
        diagnostics.push("analytic spread of the base ideal is below dim R".to_string());
    }
    let birational = is_birational(h, opts)?;
    let clear_degree = clear_degree_check(h, degree, opts.trials, opts.seed)?;
    match &clear_degree {
        ClearDegree::Unknown { trials, space_dim } => diagnostics.push(format!(
            "no grade-2 representative among {trials} random members of a {space_dim}-dimensional space"
        )),
        ClearDegree::No { reason } => diagnostics.push(reason.clone()),
        ClearDegree::Yes { .. } => {}
    }
    if let Birationality::Indeterminate { search_cap } = &birational {
        diagnostics.push(format!(
            "no inverse up to degree {search_cap} and no fiber disproof"
        ));
    }
    let in_bir_xd = well_defined && dominant && birational.is_yes() && clear_degree.is_yes();
    Ok(MapVerdict {
        degree,
        well_defined,
        dominant,
        clear_degree,
        birational,
        in_bir_xd,
        diagnostics,
    })
}
