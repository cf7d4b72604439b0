//! Hard instances for diameter distinction in the CONGEST model.
//!
//! Set disjointness instances are encoded as orthogonal vectors instances
//! ([`ov`]), which are turned into path gadgets whose diameter reveals
//! whether an orthogonal pair exists ([`gadget`]). [`metrics`] checks every
//! distance guarantee of the gadget with exact BFS, and [`congest`] runs
//! synchronous message-passing programs on it while accounting the bits that
//! cross the left/right cut.

pub mod bits;
pub mod cli;
pub mod congest;
pub mod gadget;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod ov;
