use crate::error::{Error, Result};
use crate::sparse::{dotc, norm2, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaChoice<S> {
    pub omega: S,
    /// `|(Au)^H u| / (‖Au‖₂ ‖u‖₂)` before the safeguard.
    pub rho_abs: f64,
}

/// Minimizes `‖u − ω·Au‖₂` over ω, then pushes ω away from zero when the
/// cosine between `Au` and `u` falls below `kappa`.
pub fn choose_omega<S: Scalar>(au: &[S], u: &[S], kappa: f64) -> Result<OmegaChoice<S>> {
    if au.len() != u.len() {
        return Err(Error::mismatch("choose_omega", au.len(), u.len()));
    }
    let zz = dotc(au, au).re();
    let zu = dotc(au, u);
    safeguarded_omega(zz, zu, norm2(u), kappa)
}

/// Same as [`choose_omega`] from precomputed `‖Au‖²`, `(Au)^H u` and `‖u‖`.
pub(crate) fn safeguarded_omega<S: Scalar>(
    au_norm_sqr: f64,
    au_dot_u: S,
    u_norm: f64,
    kappa: f64,
) -> Result<OmegaChoice<S>> {
    if au_norm_sqr == 0.0 {
        return Err(Error::ZeroDenominator);
    }
    let mut omega = au_dot_u.scale(1.0 / au_norm_sqr);
    let denom = au_norm_sqr.sqrt() * u_norm;
    let rho_abs = if denom > 0.0 { au_dot_u.abs() / denom } else { 0.0 };
    if kappa > 0.0 && rho_abs < kappa && rho_abs != 0.0 {
        omega = omega.scale(kappa / rho_abs);
    }
    if omega == S::zero() {
        return Err(Error::OmegaBreakdown);
    }
    Ok(OmegaChoice { omega, rho_abs })
}
