//! The two Bessel law semigroups: the classical one on the integer lattice
//! (double precision, explicit truncation bookkeeping) and the free one
//! (exact polynomials in the truncation ratio `t`), with both transform
//! apparatuses — Fourier on the classical side, free cumulants and the
//! R-transform on the free side.

mod classical;
mod free;

pub use classical::{bessel_first_kind, classical_bessel, convolve, fourier, AtomicMeasure};
pub use free::{
    free_bessel_generating, free_bessel_moment, free_convolve, free_cumulants_to_moments,
    fuss_catalan, fuss_narayana, moments_to_free_cumulants, r_transform, CumulantSequence,
    GeneratingReport, MomentSequence,
};
