//! Derandomized FT-sampling: small-bias hashing, perfect hash families, FT-universal sets.

pub mod driver;
pub mod gf2;
pub mod hash;
pub mod perfect;
pub mod universal;

pub use hash::{BitLinear, HashFamily};
pub use perfect::{PerfectAudit, PerfectFamily, PerfectMode};
pub use universal::{
    audit_masks, randomized_family_search, verify_universal, AuditMode, MemberSet, SampledFamily, UniversalFamily,
    UniversalReport,
};
pub use driver::{deterministic_min_cut, family_for, path_fault_audit, TransferReport};
