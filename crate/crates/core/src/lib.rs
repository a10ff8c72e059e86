//! Exact radial solutions, discrete spectra and an independent shooting
//! oracle for the Dirac–Kähler field on the 3-sphere (curvature radius 1).

pub mod closed_form;
pub mod error;
pub mod hypergeo;
pub mod io;
pub mod jet;
pub mod model;
pub mod oracle;
pub mod verification;

pub use error::{Error, Result};

#[cfg(feature = "parallel")]
pub(crate) fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn par_map<T: Sync, U: Send>(items: &[T], f: impl Fn(&T) -> U + Sync + Send) -> Vec<U> {
    items.iter().map(f).collect()
}
