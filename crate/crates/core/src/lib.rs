#![no_std]

extern crate alloc;

pub mod algebra;
pub mod error;
pub mod fields;
pub mod fmanifold;
pub mod forms;
pub mod jet;
pub mod poisson;
pub mod random;
pub mod tensor;

pub use algebra::{Matrix, RatFun, Rational, SparsePoly};
pub use error::{CoreError, Result};
pub use jet::{is_total_derivative, jet_partial, total_derivative, variational_derivative, JetExpression, JetMonomial, JetVar};
pub use fields::{ev_commutator, EvField};
pub use fmanifold::{
    build_flow, check_av_symmetry, check_fmanifold, check_invariance, epsilon_system, involution_check, pullback_metric,
    verify_field_recursion, verify_form_recursion, ConnectionData, FManifoldReport, FlatMap, HierarchyForm, ProductStructure,
    StructureSpec,
};
pub use forms::{contract_one, contract_two, delta_form, exactness_defect, lie_derivative, pairing, reduce_form, FunctionalDensity, OneForm, TwoFormRep};
pub use poisson::{antihom_defect, apply_p, bracket, cartan_defect, check_flat, functional_bracket, jacobi_defect, lie_derivative_p, BracketMode, MetricData};
pub use tensor::{Defect, Tensor3};
