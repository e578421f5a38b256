//! Elementary number theory: factorization, valuations, residue symbols,
//! square roots modulo prime powers, and the Hooley Δ-function.

mod factor;
mod functions;
mod hooley;
mod modular;

pub use factor::{factor, is_prime, primes_up_to, spf_sieve, FactoredModulus};
pub use functions::{eta, kappa, mu, omega, phi, square_gcd, tau, v_p, v_p_or_inf};
pub use hooley::hooley_delta;
pub use modular::{
    ext_gcd, gcd, jacobi, legendre, mod_inv, mod_pow, mul_mod, rem, sqrt_mod_prime_power, tonelli_shanks,
};

pub(crate) use factor::factor_nonzero;
