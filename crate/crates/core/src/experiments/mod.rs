//! Monte Carlo experiments and exhaustive checks, each producing a typed
//! result plus a generic [`Report`] for output.

mod claim;
mod conditional;
mod config;
mod domination;
mod exponent;
mod mirror;
mod report;
mod sandwich;
mod words;

pub use claim::{verify_claim, ClaimReport, OffsetCell, CLAIM_COLUMNS, RETURN_TIME_BINS};
pub use conditional::{
    verify_conditional_law, ConditionalReport, OffsetBoundRow, VisitBin, CONDITIONAL_COLUMNS,
};
pub use config::{ExperimentConfig, Tolerances};
pub use domination::{
    bonferroni_critical, verify_domination, DominationReport, SqrtMeans, TailRow,
    DOMINATION_COLUMNS,
};
pub use exponent::{estimate_exponent, ExponentReport, ExponentRow, EXPONENT_COLUMNS};
pub use mirror::{verify_mirror, MirrorReport, MirrorRow, MIRROR_COLUMNS};
pub use report::{
    build_id, emit_report, Check, CheckStatus, EmitError, OutputFormat, Report, CSV_COLUMNS,
    REPORT_SCHEMA, SCHEMA_VERSION,
};
pub use sandwich::{
    key_hex, relative_upper_bound, relative_upper_word, sandwich_point, verify_sandwich,
    SandwichLayer, SandwichReport, SandwichViolation, SANDWICH_COLUMNS,
};
pub use words::{
    cycle_word_bound, random_permutation, verify_words, TranspositionRow, WordFailure, WordsReport,
    WORDS_COLUMNS,
};
