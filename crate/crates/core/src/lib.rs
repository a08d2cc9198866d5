//! Exact convex hulls of planar IFS fractals of unity.
//!
//! A fractal of unity is the attractor of finitely many similarity
//! contractions whose rotation angles are rational multiples of a full turn.
//! Such attractors have finitely many extremal points, each of the form
//! `T_b(p_x)` with `x` a focal address. This crate finds them.
//!
//! ```
//! use ifs_hull::{compute_hull, parse_ifs_file, HullConfig, MethodChoice};
//!
//! let file = parse_ifs_file(
//!     "map 0 0 0.70710678118654752 -1/8\nmap 1 0 0.70710678118654752 1/8\n",
//! )
//! .unwrap();
//! let hull = compute_hull(&file.system, MethodChoice::Auto, &HullConfig::default()).unwrap();
//! assert!(hull.verified);
//! assert_eq!(hull.extrema.len(), 8);
//! ```

pub mod error;
pub mod focality;
pub mod format;
pub mod geometry;
pub mod hull;
pub mod ifs;
pub mod loaf;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
pub use focality::{
    blow_up, classify, efoc_level, reduce_form, value_set_cardinality, IrreducibleForm, SystemClass,
};
pub use format::{emit, parse_address, parse_ifs_file, parse_target, IfsFile, Settings};
pub use geometry::{ComplexValue, RationalAngle};
pub use hull::{
    armadillo_hull, compute_hull, consecutiveness_check, equiangular_hull, general_hull,
    heuristic_hull, predict_principal_form, principal_direction, verify_hull, Extremum, HullConfig,
    HullResult, Method, MethodChoice,
};
pub use ifs::{normalize_bifractal, Address, Contraction, IfsSystem, NormalMap};
pub use loaf::{
    argmax_step, dominates, ideal_bounding_circle, loaf, BoundingCircle, LoafConfig, Maximizer,
    MaximizerResult, Target,
};
