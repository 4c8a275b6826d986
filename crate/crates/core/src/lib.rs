//! Anti-van der Waerden numbers `aw(G,3)` and `awu(G,3)` of finite abelian
//! groups.
//!
//! The crate has two independent routes to each value: closed forms in
//! [`formulas`] and exhaustive search in [`oracle`]. [`constructions`]
//! builds rainbow-free colorings that realize the lower bounds, and
//! [`diagnostics`] turns the fiber lemmas into executable checks.
//! [`Classifier`] sits in front of the oracle with an in-memory memo and an
//! optional on-disk [`Cache`]; [`certify`] and [`table`] run sweeps over
//! all isomorphism classes up to a given order.
//!
//! ```
//! use aw_core::{aw_abelian3, Classifier, GroupSpec, Mode};
//!
//! let cls = Classifier::default();
//! let g: GroupSpec = "Z4xZ2".parse().unwrap();
//! assert_eq!(aw_abelian3(&g, &cls).unwrap().value, 5);
//! assert_eq!(cls.exact(&g, 3, Mode::Aw).unwrap().value, 5);
//! ```

pub mod ap;
pub mod cache;
pub mod certify;
pub mod classify;
pub mod coloring;
pub mod constructions;
pub mod diagnostics;
pub mod error;
pub mod formulas;
pub mod group;
pub mod oracle;
pub mod record;
pub mod table;

pub use ap::{enumerate_aps, find_rainbow, is_rainbow, is_rainbow_free, ApCatalog};
pub use cache::{Cache, CacheKey, VerifyReport};
pub use classify::{Classifier, PrimeClass};
pub use coloring::Coloring;
pub use constructions::{
    build_extremal, mod2_coloring, product_coloring_odd, singleton_zero_coloring, unitary_extension,
};
pub use diagnostics::{
    aux_coloring, check_aux_lemma, check_fiber_lemma, fiber_color_profile, AuxColoring, AuxLabel,
    FiberLemmaReport, FiberSplit,
};
pub use error::{Error, Result};
pub use formulas::{aw_abelian3, aw_cyclic3, aw_equals_awu, awu_abelian3, formula_record};
pub use group::{parse_group_spec, Element, GroupSpec, PrimaryDecomposition, PrimePower};
pub use oracle::{aw_exact, awu_exact, max_rainbow_free, OracleConfig, SearchMode, SearchResult};
pub use record::{AwRecord, Mode, Provenance};
pub use table::{build_table, TableRow};
