//! Hilbert series of monomial ideals by pivot splitting.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::monomial::Monomial;
use crate::ring::binomial;

/// Hilbert data of `S/I` where `S` has `nvars` variables.
///
/// The series is `numerator(t) / (1-t)^nvars`; `reduced` is the numerator
/// after cancelling every factor `(1-t)`, so that the series equals
/// `reduced(t) / (1-t)^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HilbertData {
    pub nvars: usize,
    pub numerator: Vec<i64>,
    pub reduced: Vec<i64>,
    /// Krull dimension; `-1` for the zero ring.
    pub dim: i64,
    pub multiplicity: i64,
}

impl HilbertData {
    pub fn from_leading_monomials(leads: &[Monomial], nvars: usize) -> Self {
        let numerator = hilbert_numerator(leads);
        Self::from_numerator(numerator, nvars)
    }

    fn from_numerator(numerator: Vec<i64>, nvars: usize) -> Self {
        if numerator.iter().all(|c| *c == 0) {
            return HilbertData {
                nvars,
                numerator,
                reduced: Vec::new(),
                dim: -1,
                multiplicity: 0,
            };
        }
        let mut reduced = numerator.clone();
        let mut k = 0usize;
        while reduced.iter().sum::<i64>() == 0 {
            reduced = divide_by_one_minus_t(&reduced);
            k += 1;
        }
        let multiplicity = reduced.iter().sum();
        HilbertData {
            nvars,
            dim: nvars as i64 - k as i64,
            numerator,
            reduced,
            multiplicity,
        }
    }

    /// `dim_k (S/I)_d`.
    pub fn hf(&self, d: u32) -> u64 {
        if self.nvars == 0 {
            return self
                .numerator
                .get(d as usize)
                .map(|c| *c as u64)
                .unwrap_or(0);
        }
        let n = self.nvars as u64;
        let mut acc = BigInt::zero();
        for (i, &c) in self.numerator.iter().enumerate() {
            if i as u32 > d || c == 0 {
                continue;
            }
            let k = d as u64 - i as u64;
            acc += BigInt::from(c) * BigInt::from(binomial(n - 1 + k, n - 1));
        }
        if acc.is_negative() {
            0
        } else {
            acc.to_u64().unwrap_or(u64::MAX)
        }
    }
}

fn divide_by_one_minus_t(p: &[i64]) -> Vec<i64> {
    // p(t) = (1-t) q(t)  =>  q_i = sum_{k<=i} p_k
    let mut q = Vec::with_capacity(p.len().saturating_sub(1));
    let mut acc = 0i64;
    for &c in &p[..p.len() - 1] {
        acc += c;
        q.push(acc);
    }
    while q.len() > 1 && *q.last().unwrap() == 0 {
        q.pop();
    }
    q
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shifted(acc: &mut Vec<i64>, p: &[i64], shift: usize) {
    if acc.len() < p.len() + shift {
        acc.resize(p.len() + shift, 0);
    }
    for (i, &c) in p.iter().enumerate() {
        acc[i + shift] += c;
    }
}

/// Removes generators divisible by another generator.
pub fn minimalize(gens: &[Monomial]) -> Vec<Monomial> {
    let mut sorted: Vec<Monomial> = gens.to_vec();
    sorted.sort_by_key(|m| m.degree());
    sorted.dedup();
    let mut out: Vec<Monomial> = Vec::new();
    for m in sorted {
        if !out.iter().any(|g| g.divides(&m)) {
            out.push(m);
        }
    }
    out
}

/// Numerator `N(t)` with `HS(S/I) = N(t) / (1-t)^n` for the monomial ideal
/// generated by `gens` in `n` variables.
pub fn hilbert_numerator(gens: &[Monomial]) -> Vec<i64> {
    let mut out = numerator_rec(minimalize(gens));
    while out.len() > 1 && *out.last().unwrap() == 0 {
        out.pop();
    }
    out
}

fn numerator_rec(gens: Vec<Monomial>) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    if gens.iter().any(|g| g.is_one()) {
        return vec![0];
    }
    let nvars = gens[0].nvars();
    // pairwise coprime generators: product of (1 - t^deg)
    let mut used = vec![false; nvars];
    let mut coprime = true;
    'outer: for g in &gens {
        for v in g.support() {
            if used[v] {
                coprime = false;
                break 'outer;
            }
        }
        for v in g.support() {
            used[v] = true;
        }
    }
    if coprime {
        let mut acc = vec![1i64];
        for g in &gens {
            let mut f = vec![0i64; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }

    // pivot on the variable shared by the most generators
    let mut counts = vec![0usize; nvars];
    for g in &gens {
        for v in g.support() {
            counts[v] += 1;
        }
    }
    let pivot_var = (0..nvars)
        .max_by_key(|&v| (counts[v], std::cmp::Reverse(v)))
        .unwrap();
    // exponents from mixed generators only, so the pivot never lies in I
    let mut exps: Vec<u16> = gens
        .iter()
        .filter(|g| g.support().count() > 1)
        .map(|g| g.exponents()[pivot_var])
        .filter(|&e| e > 0)
        .collect();
    exps.sort_unstable();
    let e = exps[exps.len() / 2].max(1);
    let mut pe = vec![0u16; nvars];
    pe[pivot_var] = e;
    let pivot = Monomial::from_exponents(&pe);

    // N(I) = N(I + (p)) + t^deg(p) N(I : p)
    let mut plus: Vec<Monomial> = gens.iter().filter(|g| !pivot.divides(g)).cloned().collect();
    plus.push(pivot.clone());
    let colon: Vec<Monomial> = gens
        .iter()
        .map(|g| {
            let mut ex = g.exponents().to_vec();
            ex[pivot_var] = ex[pivot_var].saturating_sub(e);
            Monomial::from_exponents(&ex)
        })
        .collect();
    let mut acc = numerator_rec(minimalize(&plus));
    let rhs = numerator_rec(minimalize(&colon));
    poly_add_shifted(&mut acc, &rhs, e as usize);
    acc
}

/// Formats an integer polynomial in `t`, e.g. `1 + t - t^3`.
pub fn format_series(coeffs: &[i64]) -> String {
    let mut out = String::new();
    for (i, &c) in coeffs.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let mag = c.unsigned_abs();
        if out.is_empty() {
            if c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0 { " - " } else { " + " });
        }
        let body = match i {
            0 => mag.to_string(),
            1 if mag == 1 => "t".to_string(),
            1 => format!("{mag}*t"),
            _ if mag == 1 => format!("t^{i}"),
            _ => format!("{mag}*t^{i}"),
        };
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
