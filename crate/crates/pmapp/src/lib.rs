//! Minimal-period, collision-free periodic plans for streams of agents
//! crossing a shared 2D environment, and their deployment as an online
//! dispatcher for randomly arriving agents.
//!
//! The pipeline:
//! 1. [`geometry`] builds an intersection-style scene and the shortest
//!    reference path of each agent stream.
//! 2. [`seed`] orders the passes at every path crossing, solves the
//!    constraint DAG for the earliest feasible schedule, and synthesizes a
//!    relaxed (radius-zero) initial plan together with its minimal period.
//! 3. [`optim`] deforms that plan with Levenberg-Marquardt under an annealed
//!    penalty objective until the full-size agents fit and the period is as
//!    small as the constraints allow.
//! 4. [`plan::validate_plan`] checks the result exactly in continuous time.
//! 5. [`sim`] replays a plan as an online dispatcher under stochastic
//!    arrivals and compares throughput and delay against M/D/1 predictions.
//!
//! Every capability has a runnable example under `examples/`; the `pmapp`
//! binary exposes the same steps as subcommands.

pub mod geometry;
pub mod plan;
