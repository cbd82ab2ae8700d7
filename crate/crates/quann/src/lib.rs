//! Simulator for quantum artificial neural networks.
//!
//! Neurons are qubits and links are conditional unitaries. The crate covers
//! the two-stage feedforward computation (a learning stage that correlates
//! output neurons with input firing patterns, followed by a backpropagation
//! stage that conditionally transforms the input register), general digraph
//! architectures with permuted activation orders, and the environment-coupled
//! iterated dynamics whose mean firing-energy series feeds recurrence
//! analysis.

pub mod architecture;
pub mod envdyn;
mod error;
pub mod feedforward;
pub mod neuron;
pub mod qcore;

pub use error::{Error, Result};
