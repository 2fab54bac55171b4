//! Level-by-level enumeration, catalogs and their persistence.

mod catalog;
mod classify;
mod crosscheck;
mod enumerate;

pub use catalog::{Catalog, CatalogDiff, CatalogEntry, CatalogKind, Refusal, MANIFEST};
pub use classify::{
    classify_extensions, filter_extensions, orbit_hash, representatives, Classified, CocycleSpaces,
};
pub use crosscheck::{crosscheck_correspondences, CrosscheckReport};
pub use enumerate::{
    enumerate, enumerate_order, has_catalog, to_quandle_catalog, trivial_catalog, EnumerationJob,
    JobSpec,
};
