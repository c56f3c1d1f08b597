//! Hypercube points, concept classes, shattering and VC dimension.

mod class;
mod point;
mod shatter;

pub use class::{
    all_functions_class, eval_concept, AllKeyword, ClassKind, ClassSpec, ConceptClass, ConceptId, ProjectionClass,
    TableClass, TablesSpec, MAX_ALL_FUNCTIONS_DOMAIN, MAX_TABLE_DOMAIN,
};
pub(crate) use point::BitIter;
pub use point::{tail_mask, words_for, Point, WORD_BITS};
pub use shatter::{
    build_shattered_set, default_universe, full_universe, is_shattered, vc_dimension_bruteforce,
    MAX_FULL_UNIVERSE_DIM, MAX_SHATTER_POINTS,
};
