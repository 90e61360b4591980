//! Seed-aware resampling for the variable setting of the Lovász Local
//! Lemma.
//!
//! * [`model`]: atoms, domains, tempered events with seeds, instances.
//! * [`graph`]: simple graphs, path/facial-path/star enumeration.
//! * [`criteria`]: local and global convergence criteria.
//! * [`solvers`]: resampling, the Forest-Algorithm, entropy compression.
//! * [`witness`]: witness forests, the S-check, the `Q_n` recurrence.
//! * [`applications`]: nonrepetitive, facial Thue and frugal coloring.
//! * [`experiment`]: seeded trial batches and CSV output.

pub mod applications;
pub mod criteria;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod model;
pub mod solvers;
pub mod witness;

pub use error::{Error, Result};
pub use model::{AtomId, Configuration, Domain, Event, EventId, EventKind, Instance, PartialConfiguration};
