//! Exact finite computations: weight systems, dimensions, characters, decompositions.

pub mod character;
pub mod freudenthal;
pub mod klimyk;
pub mod naive;

pub use character::{character_value, CharacterEvaluator, CharacterMethod, WeylQuotient};
pub use freudenthal::{weight_multiplicities, weyl_dimension, WeightSystem};
pub use klimyk::{klimyk_tensor_step, tensor_power_decompose, DecompositionTable, DEFAULT_ENTRY_CAP};
