//! Numeric zeta values with rigorous absolute error bounds, and the audits
//! built on them.

pub mod audit;
pub mod bigfloat;
pub mod reconstruct;
pub mod zeta;

pub use audit::{
    audit_euler, audit_euler_constant, audit_h_ab, eval_products, inverse_closure, AuditReport,
    EulerAudit, HAbAudit,
};
pub use bigfloat::{BigFloat, Precision};
pub use reconstruct::rational_reconstruct;
pub use zeta::{pi_value, zeta_double, zeta_single, ZetaEngine};
