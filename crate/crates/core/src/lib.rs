//! Adjusted teleportation: destination geometry, interleaved 1-up-1-down
//! staircases, simulated psychometric observers, block/experiment
//! orchestration, and the statistics used to analyse detection thresholds.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, configuration
//! loading and the command-line surface live in the `adjtele` companion crate.

#![cfg_attr(not(test), no_std)]

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod analysis;
pub mod condition;
pub mod error;
pub mod geometry;
pub mod math;
pub mod observer;
pub mod rng;
pub mod session;
pub mod staircase;

pub use condition::{Condition, ConditionMap};
pub use error::{AnalysisError, GeometryError, ObserverError, SessionError, StaircaseError};
pub use geometry::{AdjustmentDirection, Position2, ProxemicZone, RangeKind, RoomLayout};
pub use observer::{ObserverModel, PopulationParams};
pub use rng::SimRng;
pub use session::{BlockConfig, BlockResult, ExperimentConfig, TrialRecord};
pub use staircase::{StaircaseConfig, StaircasePair, ThresholdEstimate};
