//! Digital spaces (finite simple graphs treated as topological objects):
//! contractibility, simple points and edges, the six contractible
//! transformations, clique counts and the Euler characteristic, canonical
//! forms, fixture generators and file formats.

mod bits;
pub mod canon;
pub mod catalog;
pub mod cli;
pub mod contract;
pub mod error;
pub mod euler;
pub mod io;
pub mod par;
pub mod space;
pub mod transform;

pub use canon::{are_isomorphic, canonical_form, CanonicalKey};
pub use contract::{is_contractible, is_simple_pair, is_simple_point, simple_points, ContractibilityVerdict, Contractor};
pub use error::{Error, Result};
pub use euler::{cone_evector, e_vector, euler_characteristic, EVector};
pub use par::Execution;
pub use space::{pid, DigitalSpace, PointId, PointSet};
pub use transform::{Equivalence, ReductionPolicy, ReductionTrace, Rewriter, TransformKind, TransformStep};
