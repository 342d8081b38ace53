//! Shared inputs for the benchmarks.

use std::path::PathBuf;

use birkit_core::session::{load_session, AnySession, Session};
use birkit_core::Rationals;

pub fn fixture(name: &str) -> Session<Rationals> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"));
    match load_session(&path).expect("fixture loads") {
        AnySession::Rationals(s) => s,
        AnySession::Prime(_) => panic!("{name} is not over the rationals"),
    }
}
