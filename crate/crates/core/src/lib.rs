//! Geometric algorithms for two-generator subgroups of PSL(2,R).

pub mod adjoin;
pub mod error;
pub mod fixtures;
pub mod geodesic;
pub mod hexagon;
pub mod moebius;
pub mod tolerance;
pub mod verifier;

pub use adjoin::{
    decide_adjoin, decide_adjoin_with, decide_rational_power, decide_rational_power_with,
    exit_side, reduce_rational_power, root_line_fan, AdjoinOptions, ExitSide, ExitTag, FanLine,
    Flag, IeReading, Outcome, Role, RootLineFan, Verdict,
};
pub use error::{Error, Result};
pub use geodesic::*;
pub use hexagon::{
    build_hexagon, classify_stopping, cyclic_rotate, hexagon_from_lines, HexagonConfig,
    NotStopping, Shape, StoppingClass, StoppingTag,
};
pub use moebius::*;
pub use tolerance::Tolerances;
pub use verifier::{
    certify_region_free, cross_check, evaluate_word, infinite_order_elliptic_witness,
    near_identity_search, nielsen_trace_reduce, CheckStatus, FEntry, FSequence, Letter, Move,
    Reduction, ReductionStatus, RegionCertificate, Report, WordWitness,
};
