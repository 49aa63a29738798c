//! Quantum reference frames for U(1) and SU(2): frame states, G-twirls,
//! encoding and recovery channels, the relational change-of-frame
//! instrument and balanced-homodyne statistics.

pub mod bhd;
pub mod change_frame;
pub mod channels;
pub mod error;
pub mod frames;
pub mod group;
pub mod hilbert;
pub mod linalg;
pub mod random;

pub use change_frame::{change_frame, predicted_final_state, InstrumentOutcome, ProcedureSpec, RelationalMeasurement};
pub use channels::{Channel, TraceBehavior};
pub use error::{Error, Result};
pub use frames::FrameFamily;
pub use group::{compose, haar_grid, inverse, Group, GroupElement, HaarGrid};
pub use hilbert::{fidelity, partial_trace, trace_distance, DensityOperator, Ket, Representation, SectorSpec, Space, SpaceSpec};
pub use linalg::C64;
