//! Exact commutative algebra for amalgamated algebras `A ⋈^f J`.
//!
//! Polynomial arithmetic over ℚ or a prime field, a Buchberger kernel over
//! free modules, finitely presented modules and complexes, Koszul grade,
//! Krull dimension and height, and the amalgamation construction itself.

#![no_std]

extern crate alloc;

pub mod amalgam;
pub mod checkers;
pub mod dimension;
pub mod error;
pub mod field;
pub mod grade;
pub mod groebner;
pub mod modvec;
pub mod module;
pub mod monomial;
pub mod parse;
pub mod poly;
pub mod ring;

pub use amalgam::{amalgam_as_a_module, build_amalgamation, defining_ideal_via_product, duplication, extend_ideal, j_module_presentation, prime_p_prime, prime_q_bar, trivial_extension, verify_generation, AmalgamDatum, AmalgamRing, Construction, Generation, JModule, Mode, Trust};
pub use checkers::{check_flat_integral_criterion, check_j_grade_height, check_grade_min, check_maximal_criterion, check_nilpotent_criterion, cm_in_sense_of, fingerprint, CmReport, CmRow, FamilyKind, GradeMinReport, IdealFamily, JGradeReport, JGradeRow, MaximalReport, RowKind, RowStatus, TransferReport, TransferRow, Verdict};
pub use dimension::{dim_quotient, height, height_on_module, is_certified_prime, krull_dim, minimal_primes, verify_decomposition, Dimension};
pub use error::{Error, Result};
pub use field::{Field, Scalar, DEFAULT_PRIME};
pub use grade::{ext_grade, hom_koszul_complex, koszul_grade, GradeValue, HeightValue};
pub use groebner::{Kernel, KernelStats, DEFAULT_BUDGET};
pub use monomial::{Monomial, MonomialOrder, TermOrder, MAX_VARS};
pub use module::{free_resolution_steps, syzygies, Direction, FPModule, FiniteComplex, Homology, ModuleMap};
pub use poly::Polynomial;
pub use ring::{is_nilpotent, IdealHandle, Ring, RingMap, RingPresentation};
