//! Homomorphism densities in step bigraphons, the regularization transforms
//! that turn an arbitrary bigraphon into a biregular one while controlling
//! every density, reflective tree decompositions, and numerical tools for
//! probing Sidorenko-type inequalities.
//!
//! ```
//! use bigraphon::{Bigraph, DensityMethod, StepBigraphon};
//!
//! let c4 = Bigraph::even_cycle(4).unwrap();
//! let w = StepBigraphon::uniform(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
//! assert!((w.density(&c4, DensityMethod::Auto) - 0.125).abs() < 1e-15);
//! ```

pub mod bigraph;
pub mod decomp;
mod error;
pub mod flag;
pub mod io;
pub mod iso;
pub mod par;
pub mod search;
pub mod stepfn;
pub mod tolerance;
pub mod transforms;

pub use bigraph::{Bigraph, DegreeProfile, Side, StandardKind};
pub use error::{Error, Result};
pub use flag::Flag;
pub use stepfn::{DensityMethod, FlagDensityTable, Selection, StepBigraphon};
