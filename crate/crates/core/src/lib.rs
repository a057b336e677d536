//! Classical and quantum bounds for standard and binary random access codes,
//! the entropy scan for the critical YES probability, a pure-state simulator
//! of the two-dit qudit protocol, and a dimension-witness certifier.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod exact;
pub mod payoff;
pub mod pcrit;
pub mod quantum;
pub mod strategy;
pub mod witness;

pub use bounds::{
    binary_classical_n2, binary_from_standard, binary_quantum_n2, binary_rac_classical_value,
    bound_report, quantum_classical_gap, BoundProvenance, BoundReport,
};
pub use combinatorics::{
    composition_count, enumerate_compositions, multinomial, standard_rac_classical_value,
    Composition, TaskParams, DEFAULT_COMPOSITION_CAP,
};
pub use error::{Error, Result, Side};
pub use exact::{ExactRational, RationalValue};
pub use payoff::PayoffConfig;
pub use pcrit::{find_pcrit, PcritResult, StepDistribution};
pub use quantum::{
    fourier_vector, measurement, prepare_state, simulate_binary_payoff,
    ProjectiveBinaryMeasurement, QuantumState, StateConvention,
};
pub use strategy::{
    brute_force_binary, brute_force_standard, BinaryDecodingTable, DitString, EncodingStrategy,
    Guess, SearchMode, StandardDecoding,
};
pub use witness::{
    certify_dimension, payoff_from_statistics, CertificationReport, StatisticsFormat,
    StatisticsTable, Verdict,
};
