//! Finite modules given by tables, with the exhaustive algorithms that need them.

mod congruence;
mod enumerate;
mod exact;
mod hom;
mod map;
mod module;
mod saturate;
mod sub;

pub use congruence::{cancellative_reflection, quotient_by_sub, Congruence, CongruenceKind};
pub use enumerate::{commutative_monoids, enumerate_modules};
pub use exact::{exactness_check, short_sequence, ExactMode, ExactnessReport, JointVerdict};
pub use hom::{find_isomorphism, hom_enumerate, HomSet};
pub use map::{first_iso_map, MapPredicates, TableMap};
pub use module::{check_semimodule_axioms, direct_sum, Action, FiniteModule};
pub use saturate::{finite_tensor_of_maps, saturation_tensor, FiniteTensor};
pub use sub::{all_subs, Sub};
