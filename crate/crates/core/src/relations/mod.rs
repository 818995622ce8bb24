//! Relations between representation counts: generating-function identities,
//! linear rules on residue classes, correction rules, and the machinery that
//! checks them.

mod check;
mod corpus;
mod generate;
mod model;
mod partition;
mod report;
mod suite;

pub use check::{
    check_correction_rule, check_gf_identity, check_identity, check_linear_rule, predicted_correction,
    CheckContext, DEFAULT_MEM_LIMIT,
};
pub use corpus::{load_corpus, parse_json_corpus, Corpus, CorpusError, JsonCorpus, SuiteItem};
pub use generate::{generate_ach_rules, DEFAULT_ODD_PAIR_BOUND, GROUP_ODD_PAIR, GROUP_SMALL, GROUP_WEIGHT8};
pub use model::{
    AffineIndex, CorrectionRule, FamilyValue, GfIdentity, LinearRule, QuadraticFamily, Ratio, ResidueClass, RhsTerm,
    SeqAt,
};
pub use partition::{residue_cover, ResidueCover};
pub use report::{CheckedRange, Engine, Exceptional, ItemKind, Status, VerificationReport, Witness};
pub use suite::{run_item, run_suite, run_suite_with, SuiteSettings, DEFAULT_N_MAX, DEFAULT_ORDER};
