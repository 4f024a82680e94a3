//! Computational module theory over finite rings.
//!
//! Rings and left modules are stored as dense Cayley tables over element
//! indices. On top of that representation the crate computes submodule
//! lattices, homomorphism sets, the submodule product `K_M L`, annihilators,
//! prime spectra, injective hulls, and endomorphism-ring invariants, and it can
//! check a catalogue of structural statements about these objects with full
//! witnesses.

pub mod analysis;
pub mod config;
pub mod endo;
pub mod error;
pub mod findings;
pub mod hom;
pub mod injective;
pub mod laws;
pub mod module;
mod par;
pub mod product;
pub mod ring;
pub mod spectrum;
pub mod submodule;

pub use analysis::ModuleAnalysis;
pub use config::{Caps, Config, Execution, Fault};
pub use error::{Error, Result};

pub use hom::{are_isomorphic, hom_set, Homomorphism};
pub use module::{direct_sum, quotient, regular_module, validate_module, FiniteModule, ModuleTables};
pub use ring::{ideals, ring_cyclic, ring_trivial_extension, validate_ring, FiniteRing, Ideal, RingTables};
pub use submodule::{all_submodules, submodule_generate, Submodule, SubmoduleLattice};
pub use endo::{endomorphism_ring, goldie_data, jacobson_radical, EndoRing, GoldieReport};
pub use findings::{Finding, Hypotheses, StructureReport, Verdict};
pub use injective::{injective_hull, m_injective_hull, m_singular_submodule, InjectiveHull};
pub use laws::{goldie_report, verify_goldie_structure, verify_semiprime_structure, Context};
pub use spectrum::{spec_min, SpectrumReport};
