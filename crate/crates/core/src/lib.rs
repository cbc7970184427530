//! Exact combinatorics of cyclic quotient singularities: Hirzebruch–Jung
//! continued fractions, Wahl chains, extremal P-resolutions, wormhole
//! singularities and the numerical data of mk1A/mk2A neighbourhoods.
//!
//! All arithmetic is exact. Statements that are theorems about the data
//! are re-checked at run time and reported as
//! [`Error::TheoremViolation`] if they ever fail.

pub mod cfrac;
pub mod error;
pub mod mmp;
pub mod pres;
pub mod sweep;
pub mod wahl;

pub use cfrac::{
    blow_down, blow_up, catalan, dual, dual_by_dots, enumerate_zero_cfs, evaluate, expand,
    intersection_matrix_rank, CFrac, Convergents, Mat2, Rational, Triangulation,
};
pub use error::{Error, Result};
pub use mmp::{
    classify, flip_replacement, k_dot_minus_one_curve, mk1a_data, mk2a_data, mk2a_delta,
    ContractionKind, ContractionOutcome, Mk1A, Mk2A,
};
pub use pres::{
    center_from_chains, classify_type, detect_wormhole, enumerate_pres, indicator_sequence,
    pair_case, trace_invariant, verify_pres, ww_pairs, zero_pairs, ExtremalPRes, IndicatorSequence,
    PResType, PairCase, Side, TraceReport, Wormhole, WwSequence,
};
pub use sweep::{
    census, census_with, counterexample_family, delta2_family, delta_absence, delta_absence_with,
    exploratory_sweep, pi1_indices, CensusOptions, SweepCache, SweepRecord, SweepReport,
};
pub use wahl::{
    as_wahl_chain, classify_mb, discrepancies, generate_wahl, is_wahl, wahl_chain, ChainShape, Cqs,
    Discrepancies, EndDiscrepancies, WahlChain,
};
