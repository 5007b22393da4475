//! Differentially closed sets given by generators: characteristic-set
//! certification, saturation membership, naive versus τ prolongation, and
//! instances of the geometric axiom scheme.

mod axiom;
mod charset;
mod demo;
pub mod grid;
mod instance;

pub use axiom::{
    evaluate_checks, instance_validate, instance_validate_with, projection_closure_check, truncated_w_ideal,
    witness_search, witness_search_file, AxiomInstance, CheckKind, CheckRecord, InstanceRejection,
    ProjectionVerdict, SearchStats, WitnessReport, WitnessStatus,
};
pub use charset::{charset_certify, charset_certify_with, sat_ideal_member, CertStatus, CharSetCertificate, RejectionStage};
pub use demo::{
    in_open_set, naive_prolongation_gens, naive_vs_tau_demo, open_set_equality_check, sample_points,
    saturation_members, DemoReport, Discrepancy, OpenSetVerdict,
};
pub use instance::{Bounds, InstanceFile};
