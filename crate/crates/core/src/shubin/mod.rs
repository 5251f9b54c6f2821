//! Tau-quantization `Op_tau(a)`: two construction routes, the adjoint law, twisted
//! composition and tau-Wigner distributions.

mod kernel;
mod operator;
mod symbol;
mod twisted;
mod wigner;

pub use kernel::{kernel_entry_direct, op_tau_kernel, polynomial_operator, polynomial_operator_bj, QuadSpec, NONDECAY_LIMIT};
pub use operator::{momentum_map, momentum_power_map, position_map, position_power_map, OperatorMatrix};
pub use symbol::{plane_wave, ClosedForm, Poly2, SymbolSpec, MAX_DEGREE};
pub use twisted::{compose_twisted, compose_twisted_tau, op_tau_twisted, BOUNDARY_LIMIT};
pub use wigner::{marginal_residuals, pairing_check, phase_pairing, wigner_tau, wigner_tau_at, PairingResult};

use crate::error::Result;
use crate::gridfield::Grid1D;
use crate::scalar::Real;

/// `||Op_tau(a)^* - Op_{1-tau}(conj a)||_F / ||Op_tau(a)||_F`.
pub fn adjoint_check<T: Real>(a: &SymbolSpec<T>, tau: T, grid: &Grid1D<T>) -> Result<T> {
    let q = QuadSpec::default();
    let op = op_tau_kernel(a, tau, grid, q)?;
    let other = op_tau_kernel(&a.conj(), T::one() - tau, grid, q)?;
    Ok(crate::cmat::fro_dist(op.adjoint().kernel.view(), other.kernel.view()) / crate::cmat::fro_norm(op.kernel.view()))
}

#[cfg(test)]
mod tests;
