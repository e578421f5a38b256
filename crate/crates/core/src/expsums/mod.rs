//! Exact evaluation of S_q(m, n) = Σ*_a Σ_{x,y} e_q(a F(x,y) + m·x + n·y) and its
//! decompositions.

mod audit;
mod brute;
mod closed;
mod convolution;
mod dual;
mod eval;
mod prime_power;
mod reduced;

pub use audit::{audit_frequencies, lemma_audit, AuditReport, LemmaId, Witness};
pub use brute::{brute_force_full, naive_definition, BruteForce, BRUTE_MAX_Q};
pub use closed::{closed_form_prime, qfrak, s_q_00};
pub use convolution::{convolution_check, s1, s1_prime_power, s2, s2_prime_power, s2_support, s2_with, S2Reason, S2Support};
pub use dual::{
    active_characters, delta_monomial, dual_decomposition, lattice_average_s_prime, s_double_prime_at_prime, s_prime, xi,
    xi_prime_power_list, DualDecomposition, DualExact, LATTICE_AVERAGE_MAX_Q,
};
pub use eval::{s_q, Evaluator, Method};
pub use prime_power::{prime_power, PrimePower, PRIME_POWER_MAX_Q};
pub use reduced::{reduced_sum, ReducedSum, REDUCED_MAX_Q};
