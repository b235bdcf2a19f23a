//! Central tolerance configuration. Every numerical threshold used by the
//! library lives here so that the CLI can override them uniformly.

use crate::error::{Error, Result};

/// ħ used throughout the evolution and phase computations. The connection
/// form is ħ-independent (ħ cancels in I⁻¹J), so phases do not depend on it.
pub const HBAR: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity deviation allowed by `HermitianMatrix`.
    pub hermiticity_tol: f64,
    /// Allowed deviation of V†V from the identity for eigenframes and unitaries.
    pub orthonormality_tol: f64,
    /// Eigenvalue gap (relative to spectral range, floored at 1) below which
    /// eigenvalues belong to one degeneracy cluster (single linkage).
    pub degeneracy_tol: f64,
    /// Allowed deviation of Tr ρ from 1.
    pub trace_tol: f64,
    /// Allowed deviation of ‖ψ‖_HS from 1 for purifications.
    pub norm_tol: f64,
    /// Smallest admissible density-operator eigenvalue (invertibility).
    pub pd_floor: f64,
    /// Smallest admissible singular value of a purification.
    pub sv_floor: f64,
    /// Margin keeping Bloch curves strictly inside the unit ball.
    pub pd_margin: f64,
    /// Allowed |Re⟨base, dir⟩| for tangency at unit-norm base points.
    pub tangency_tol: f64,
    /// Allowed ‖φ†φ − ψ†ψ‖_F drift off a momentum level set.
    pub level_tol: f64,
    /// Residual bound for the positive-definite Sylvester solve.
    pub solve_tol: f64,
    /// Allowed ‖Π(ψ(t)) − ρ(t)‖_F along horizontal lifts.
    pub lift_proj_tol: f64,
    /// Bound on ‖ρ(t_{i+1}) − ρ(t_i)‖_F / dt for sampled density curves.
    pub continuity_bound: f64,
    /// Gram-Schmidt drop threshold for subspace basis construction.
    pub basis_drop_tol: f64,
    /// Inter-cluster gap below which lift diagnostics carry a conditioning warning.
    pub gap_warn: f64,
    /// Residual allowed by the parallel-transport precondition check.
    pub parallel_transport_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            hermiticity_tol: 1e-10,
            orthonormality_tol: 1e-12,
            degeneracy_tol: 1e-8,
            trace_tol: 1e-10,
            norm_tol: 1e-10,
            pd_floor: 1e-10,
            sv_floor: 1e-10,
            pd_margin: 1e-8,
            tangency_tol: 1e-8,
            level_tol: 1e-8,
            solve_tol: 1e-10,
            lift_proj_tol: 1e-7,
            continuity_bound: 100.0,
            basis_drop_tol: 1e-7,
            gap_warn: 1e-4,
            parallel_transport_tol: 1e-5,
        }
    }
}

impl Tolerances {
    /// Apply named overrides (used by the CLI `tolerances` map). Unknown names
    /// are rejected so that configuration typos surface immediately.
    pub fn apply_override(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Config(format!(
                "tolerance `{name}` must be a positive finite number, got {value}"
            )));
        }
        match name {
            "hermiticity_tol" => self.hermiticity_tol = value,
            "orthonormality_tol" => self.orthonormality_tol = value,
            "degeneracy_tol" => self.degeneracy_tol = value,
            "trace_tol" => self.trace_tol = value,
            "norm_tol" => self.norm_tol = value,
            "pd_floor" => self.pd_floor = value,
            "sv_floor" => self.sv_floor = value,
            "pd_margin" => self.pd_margin = value,
            "tangency_tol" => self.tangency_tol = value,
            "level_tol" => self.level_tol = value,
            "solve_tol" => self.solve_tol = value,
            "lift_proj_tol" => self.lift_proj_tol = value,
            "continuity_bound" => self.continuity_bound = value,
            "basis_drop_tol" => self.basis_drop_tol = value,
            "gap_warn" => self.gap_warn = value,
            "parallel_transport_tol" => self.parallel_transport_tol = value,
            other => {
                return Err(Error::Config(format!("unknown tolerance field `{other}`")));
            }
        }
        Ok(())
    }
}
