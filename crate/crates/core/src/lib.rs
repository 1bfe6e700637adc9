//! Size-scalable tensor-network motifs, exact evaluation of the resulting
//! ansatz states, and an evolutionary search over motifs.

pub mod analytic;
pub mod ansatz;
pub mod dsl;
pub mod evo;
pub mod hamiltonian;
pub mod optimize;
pub mod sim;
pub mod symmetry;

pub use num_complex::Complex64;
