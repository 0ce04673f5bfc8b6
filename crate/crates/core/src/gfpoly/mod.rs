//! Finite-field laboratory: arithmetic in `F_{p^m}`, dense forms, rational
//! points and lines, excess decisions and tuple enumeration.

mod enumerate;
mod excess;
mod field;
mod form;
mod io;
mod points;
mod resultant;

pub use enumerate::{enumerate_locus, estimate_codim_sweep, CountReport, LabConfig, Mode, TupleLab, DEFAULT_SIZE_GUARD};
pub use excess::{
    default_extension_degrees, positive_dim_test, positive_dim_test_with, Certificate, ExcessMethod,
    ExcessTester, ExtensionSchedule, Verdict, POINT_BUDGET,
};
pub use field::{first_irreducible, is_prime, prime_power, FieldEmbedding, GaloisField, MAX_FIELD_ORDER};
pub use form::{monomial_count, monomial_rank, monomials, Form, TupleInstance};
pub use io::TupleFile;
pub use points::{line_count, projective_point_count, projective_points, rational_lines, Line, ProjectivePoints};
pub use resultant::{common_component_test, CommonComponentOracle};

/// `F_q` from a field order.
pub fn field_make(p: u64, m: u32) -> crate::Result<GaloisField> {
    GaloisField::new(p, m)
}
