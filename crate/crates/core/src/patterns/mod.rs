//! Zero-patterns, shatter functions and packings, and forbidden-pattern search.

pub mod family;
pub mod forbidden;
pub mod zero;

pub use family::{
    neighborhood_family, separated_packing, shatter_function, weak_vc_report, SetFamily, WeakVcRow,
    DEFAULT_SHATTER_BUDGET, DEFAULT_Z_MAX,
};
pub use forbidden::{
    find_focused_m, find_m_member, find_m_member_any, find_n_member, FocusedWitness, MRow, MWitness, NWitness,
    SearchOutcome,
};
pub use zero::{zero_patterns, ZeroPatternReport};
