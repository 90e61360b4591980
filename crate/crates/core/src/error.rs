use thiserror::Error;

use crate::model::{AtomId, EventId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid event: {0}")]
    InvalidEvent(String),
    #[error("atom {atom} out of range (m = {m})")]
    AtomOutOfRange { atom: AtomId, m: usize },
    #[error("atom {atom} is not in the support of event {event}")]
    NotInSupport { atom: AtomId, event: EventId },
    #[error("partial configuration: atom {0} is unassigned")]
    PartialConfiguration(AtomId),
    #[error("value {value} outside the domain of atom {atom}")]
    ValueOutOfDomain { atom: AtomId, value: usize },
    #[error("support of size {size} too large to enumerate (cap {cap})")]
    EnumerationCap { size: usize, cap: usize },
    #[error("neighborhood of event {event} has {size} events, above the cap {cap}; use xi_clique")]
    NeighborhoodCap { event: EventId, size: usize, cap: usize },
    #[error("series divergent at xi = {xi} (radius {radius})")]
    SeriesDivergent { xi: f64, radius: f64 },
    #[error("spectrum is not uniform")]
    NonUniformSpectrum,
    #[error("instance is not uniform")]
    NonUniformInstance,
    #[error("criterion not satisfied (rho = {0})")]
    CriterionNotSatisfied(f64),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid faces: {0}")]
    InvalidFaces(String),
    #[error("record integrity: {0}")]
    Integrity(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
