//! The dual sextic, the form G and its gradient, and lattices on the dual variety.

mod classify;
mod enumerate;
mod forms;
mod lattice;

pub use classify::{classify_dual_point, normalize_t, DualClass};
pub use enumerate::{
    count_dual_points, count_dual_points_by_abc, enumerate_dual_points, for_each_dual_point, naive_dual_points, DualCounts,
    COUNT_MAX_M, LIST_MAX_M, NAIVE_MAX_M, VISIT_MAX_M,
};
pub use forms::{cubic, dual_form, dual_via_abc, g_form, grad_cubic, grad_g, l_forms, poly_div_check};
pub use lattice::{
    for_each_kernel_point_in_box, gauss_reduce, hnf_rows, is_primitive, kernel_basis, lambda_basis, lambda_perp_basis, lll,
    successive_minima, LatticeBasis, Parent,
};
