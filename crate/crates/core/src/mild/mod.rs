//! Picard fixed-point solver for the mild (Duhamel) formulation of the
//! truncated system, with the data- and path-dependent local existence time
//! and an empirically calibrated contraction constant.

mod picard;

pub use picard::{
    calibrate_contraction_constant, duhamel_map, linear_part, phi_path_field, picard_solve,
    stopping_time, Calibration, ContractionConfig, MildProblem, PicardResult,
};
