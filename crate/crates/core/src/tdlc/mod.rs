mod cosets;
mod folner;
mod tree;

pub use cosets::{
    coset_decomposition, haar_ratio, haar_ratio_by_index, level_constant_subgroup, level_stabilizer, CosetUnion, LevelStabilizer,
    TruncatedSubgroup, ENUMERATION_CAP,
};
pub use folner::{
    folner_certificate_check, folner_search, ExhaustionReport, FolnerCertificate, FolnerOptions, FolnerOutcome,
    LevelAttempt, EXHAUSTIVE_MAX,
};
pub use tree::{Portrait, RootedTreeGroup, MAX_ARITY};
