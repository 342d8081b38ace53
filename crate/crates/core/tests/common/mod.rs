#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use birkit_core::birational::RationalMap;
use birkit_core::invariants::VarietyPresentation;
use birkit_core::session::{load_session, AnySession, Session};
use birkit_core::{parse_poly, Field, Ideal, MonomialOrder, PolyRing, PrimeField, Rationals};

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

pub fn fixture(name: &str) -> Session<Rationals> {
    match load_session(&fixture_path(name)).expect("fixture loads") {
        AnySession::Rationals(s) => s,
        AnySession::Prime(_) => panic!("fixture {name} is not over the rationals"),
    }
}

pub fn named(s: &Session<Rationals>, name: &str) -> RationalMap<Rationals> {
    s.map(name)
        .unwrap_or_else(|| panic!("no map {name}"))
        .map
        .clone()
}

pub fn variety<F: Field>(field: F, vars: &[&str], ideal: &[&str]) -> Arc<VarietyPresentation<F>> {
    let r = PolyRing::new(field, vars, MonomialOrder::GrevLex).unwrap();
    let gens = ideal.iter().map(|g| parse_poly(g, &r).unwrap()).collect();
    Arc::new(VarietyPresentation::new(&Ideal::new(&r, gens).unwrap()).unwrap())
}

pub fn map<F: Field>(v: &Arc<VarietyPresentation<F>>, forms: &[&str]) -> RationalMap<F> {
    let fs = forms
        .iter()
        .map(|f| parse_poly(f, v.ring()).unwrap())
        .collect();
    RationalMap::new(v, fs).unwrap()
}

pub fn conic_mod(p: u32) -> Arc<VarietyPresentation<PrimeField>> {
    variety(
        PrimeField::new(p).unwrap(),
        &["x", "y", "z"],
        &["y^2 - x*z"],
    )
}

pub fn cusp_mod(p: u32) -> Arc<VarietyPresentation<PrimeField>> {
    variety(
        PrimeField::new(p).unwrap(),
        &["x", "y", "z"],
        &["y^3 - x^2*z"],
    )
}
