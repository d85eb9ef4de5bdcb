//! Time-averaged densities of the ensemble of classical Kepler ellipses that
//! share a hydrogen eigenstate's energy, angular momentum and `L_z`.
//!
//! With `a = hbar = m_e = 1` the orbits have `ell^2 = l(l+1)`, semi-latus
//! rectum `ell^2`, eccentricity `sqrt(1 - ell^2/n^2)`, semi-major axis `n^2`
//! and period `2 pi n^3`. Densities are defined on the open classical support
//! and are zero outside it; they are never evaluated at a turning point.
//!
//! `l = 0` is the degenerate straight-line ellipse (`e = 1`). Its angular
//! distribution is not fixed by the orbit geometry; this module treats that
//! ensemble as isotropic (`sin(theta)/2`), which is a convention, see
//! [`L0_ANGULAR_CONVENTION`].

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hydrogen::QuantumNumbers;
use crate::quadrature::{integrate, QuadOptions};

/// Metadata note attached to any output that uses the `l = 0` angular convention.
pub const L0_ANGULAR_CONVENTION: &str =
    "l=0 classical angular density taken as isotropic sin(theta)/2 (convention, not derived)";

/// Inclination data, only defined for `l >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Inclination {
    /// Angle between the orbital angular momentum and the z axis, `cos(alpha) = m / ell`.
    pub alpha: f64,
    pub sin_alpha: f64,
    /// `e / sin(alpha)`; the polar-angle form of the orbit is `r = ell^2 / (1 - tau cos(theta))`.
    pub tau: f64,
    /// Edge of the angular support, `sin(theta_min) = m / ell`.
    pub theta_min: f64,
}

/// Derived classical quantities for the orbit ensemble of `(n, l, |m|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitEnsembleParams {
    pub n: u32,
    pub l: u32,
    /// `|m|`; negative `m` is folded since all densities depend on `m^2`.
    pub m: u32,
    pub ell: f64,
    pub ell_sq: f64,
    pub eccentricity: f64,
    pub semi_latus: f64,
    pub semi_major: f64,
    /// Inner turning point (perihelion); 0 for `l = 0`.
    pub r_peri: f64,
    /// Outer turning point (aphelion); `2 n^2` for `l = 0`.
    pub r_apo: f64,
    pub period: f64,
    inclination: Option<Inclination>,
}

/// Which of the two mirror-image orbit forms a density refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// `r = p / (1 - e cos(gamma))`.
    One,
    /// `r = p / (1 + e cos(gamma))`.
    Two,
}

impl OrbitEnsembleParams {
    pub fn new(qn: QuantumNumbers) -> Self {
        let (n, l, m) = (qn.n(), qn.l(), qn.abs_m());
        let nf = f64::from(n);
        let n_sq = nf * nf;
        let ell_sq = f64::from(l) * f64::from(l + 1);
        let ell = ell_sq.sqrt();
        // n^2 - l(l+1) is an exact integer, so e = 2/3 for (6, 4) comes out correctly rounded.
        let eccentricity = (n_sq - ell_sq).sqrt() / nf;
        let r_peri = ell_sq / (1.0 + eccentricity);
        let r_apo = 2.0 * n_sq - r_peri;
        let inclination = (l >= 1).then(|| {
            let mf = f64::from(m);
            assert!(mf < ell, "m = ell cannot occur for integer l >= m");
            let sin_alpha = (ell_sq - mf * mf).sqrt() / ell;
            Inclination {
                alpha: (mf / ell).acos(),
                sin_alpha,
                tau: eccentricity / sin_alpha,
                theta_min: (mf / ell).asin(),
            }
        });
        Self {
            n,
            l,
            m,
            ell,
            ell_sq,
            eccentricity,
            semi_latus: ell_sq,
            semi_major: n_sq,
            r_peri,
            r_apo,
            period: 2.0 * PI * nf * n_sq,
            inclination,
        }
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }

    pub fn inclination(&self) -> Result<Inclination> {
        self.inclination.ok_or(Error::AngularUndefinedForL0)
    }

    /// Width of the radial support.
    pub fn support_width(&self) -> f64 {
        self.r_apo - self.r_peri
    }

    /// Angular support `(theta_min, pi - theta_min)`; all of `[0, pi]` for `l = 0`.
    pub fn angular_support(&self) -> (f64, f64) {
        match self.inclination {
            Some(inc) => (inc.theta_min, PI - inc.theta_min),
            None => (0.0, PI),
        }
    }

    /// Radius at eccentric anomaly `u`, `n^2 (1 - e cos u)`.
    pub fn radius_at(&self, u: f64) -> f64 {
        self.semi_major * (1.0 - self.eccentricity * u.cos())
    }
}

pub fn make_params(qn: QuantumNumbers) -> OrbitEnsembleParams {
    OrbitEnsembleParams::new(qn)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what: "r",
            value: r,
            domain: "(0, inf)",
        })
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if (0.0..=PI).contains(&theta) {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            what: "theta",
            value: theta,
            domain: "[0, pi]",
        })
    }
}

/// Radial density of the `l = 0` (straight-line) ensemble,
/// `1 / (pi n^3 sqrt(2/r - 1/n^2))` on `0 < r < 2 n^2`.
pub fn radial_density_l0(n: u32, r: f64) -> Result<f64> {
    check_radius(r)?;
    let nf = f64::from(n);
    let r_c = 2.0 * nf * nf;
    if r >= r_c {
        return Ok(0.0);
    }
    // 2/r - 1/n^2 written as (2n^2 - r) / (r n^2)
    let speed = ((r_c - r) / (r * nf * nf)).sqrt();
    Ok(1.0 / (PI * nf * nf * nf * speed))
}

/// Radial density of the ensemble, time spent per unit radius over a period.
///
/// For `l >= 1` this is
/// `sqrt(1 + ell^4 / (r^2 [e^2 - (1 - ell^2/r)^2])) / (pi n^3 sqrt(2/r - 1/n^2))`
/// on `(r_peri, r_apo)`, with the bracket evaluated in its factored form
/// `(ell^2/n^2) (r_apo - r)(r - r_peri) / r^2`. For `l = 0` it is
/// [`radial_density_l0`].
pub fn radial_density(params: &OrbitEnsembleParams, r: f64) -> Result<f64> {
    if params.l == 0 {
        return radial_density_l0(params.n, r);
    }
    check_radius(r)?;
    if r <= params.r_peri || r >= params.r_apo {
        return Ok(0.0);
    }
    let nf = params.n_f64();
    let n_sq = nf * nf;
    let r_sq_bracket = params.ell_sq / n_sq * (params.r_apo - r) * (r - params.r_peri);
    let path = (1.0 + params.ell_sq * params.ell_sq / r_sq_bracket).sqrt();
    let speed = ((2.0 * n_sq - r) / (r * n_sq)).sqrt();
    Ok(path / (PI * nf * n_sq * speed))
}

/// Eccentric anomaly `u` in `[0, pi]` with `r = n^2 (1 - e cos u)`.
pub fn eccentric_anomaly_of_radius(params: &OrbitEnsembleParams, r: f64) -> f64 {
    let gap = ((r - params.r_peri) * (params.r_apo - r)).max(0.0);
    gap.sqrt().atan2(params.semi_major - r)
}

/// The same radial density through the eccentric anomaly:
/// `p dr = (1/pi)(1 - e cos u) du`, hence `p = (1 - e cos u) / (pi n^2 e sin u)`.
/// Covers `l = 0` through `e = 1`.
pub fn radial_density_eccentric(params: &OrbitEnsembleParams, r: f64) -> Result<f64> {
    check_radius(r)?;
    if r <= params.r_peri || r >= params.r_apo {
        return Ok(0.0);
    }
    let u = eccentric_anomaly_of_radius(params, r);
    let e = params.eccentricity;
    Ok((1.0 - e * u.cos()) / (PI * params.semi_major * e * u.sin()))
}

/// Probability that the radius lies in `[lo, hi]`: the elapsed mean anomaly
/// `(M(u_hi) - M(u_lo)) / pi` with `M = u - e sin u`.
pub fn radial_probability(params: &OrbitEnsembleParams, lo: f64, hi: f64) -> Result<f64> {
    let lo = lo.clamp(params.r_peri, params.r_apo);
    let hi = hi.clamp(params.r_peri, params.r_apo);
    if hi <= lo {
        return Ok(0.0);
    }
    let e = params.eccentricity;
    let mean = |r: f64| {
        let u = eccentric_anomaly_of_radius(params, r);
        u - e * u.sin()
    };
    Ok(((mean(hi) - mean(lo)) / PI).max(0.0))
}

/// [`radial_probability`] by quadrature of [`radial_density`] in the
/// eccentric anomaly, so the apsidal singularities are never sampled.
pub fn radial_probability_quadrature(params: &OrbitEnsembleParams, lo: f64, hi: f64) -> Result<f64> {
    let lo = lo.clamp(params.r_peri, params.r_apo);
    let hi = hi.clamp(params.r_peri, params.r_apo);
    if hi <= lo {
        return Ok(0.0);
    }
    let u_lo = eccentric_anomaly_of_radius(params, lo);
    let u_hi = eccentric_anomaly_of_radius(params, hi);
    let dr_du = params.semi_major * params.eccentricity;
    let integrand = |u: f64| {
        let r = params.radius_at(u);
        if r <= 0.0 {
            return 0.0;
        }
        radial_density(params, r).unwrap_or(0.0) * dr_du * u.sin()
    };
    // r - r_peri loses digits near the apsides, so ask for less than full precision
    Ok(integrate(integrand, u_lo, u_hi, &QuadOptions::tolerances(1e-13, 1e-11))?.value)
}

/// `int p_c(r) dr` over the full support, by quadrature.
pub fn radial_norm(params: &OrbitEnsembleParams) -> Result<f64> {
    radial_probability_quadrature(params, params.r_peri, params.r_apo)
}

/// Branch density evaluated from `c = cos(theta)`, `sin(theta)` and the gap
/// `sin^2(alpha) - c^2 > 0`. Branch two is branch one with `c -> -c`.
fn branch_from_cos(params: &OrbitEnsembleParams, inc: &Inclination, c: f64, sin_theta: f64, gap: f64, branch: Branch) -> f64 {
    let c = match branch {
        Branch::One => c,
        Branch::Two => -c,
    };
    let nf = params.n_f64();
    let one_minus = 1.0 - inc.tau * c;
    let path = (inc.tau * inc.tau + one_minus * one_minus / gap).sqrt();
    let speed = (2.0 * one_minus / params.ell_sq - 1.0 / (nf * nf)).sqrt();
    path / (PI * nf * nf * nf * speed) * params.ell_sq * sin_theta / (one_minus * one_minus)
}

/// Angular density of one orbit form: time spent per unit polar angle.
pub fn angular_density_branch(params: &OrbitEnsembleParams, theta: f64, branch: Branch) -> Result<f64> {
    check_theta(theta)?;
    let inc = params.inclination()?;
    let c = theta.cos();
    let gap = (inc.sin_alpha - c) * (inc.sin_alpha + c);
    if gap <= 0.0 {
        return Ok(0.0);
    }
    Ok(branch_from_cos(params, &inc, c, theta.sin(), gap, branch))
}

/// Ensemble angular density, the mean of the two branches. For `l = 0` the
/// isotropic convention `sin(theta)/2` applies.
pub fn angular_density(params: &OrbitEnsembleParams, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if params.l == 0 {
        return Ok(0.5 * theta.sin());
    }
    let one = angular_density_branch(params, theta, Branch::One)?;
    let two = angular_density_branch(params, theta, Branch::Two)?;
    Ok(0.5 * (one + two))
}

/// Angular density when the orbit-plane angle is uniform in time, as for an
/// ensemble with uniformly distributed perihelion phase:
/// `sin(theta) / (pi sqrt(sin^2(alpha) - cos^2(theta)))`.
pub fn angular_density_uniform_phase(params: &OrbitEnsembleParams, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if params.l == 0 {
        return Ok(0.5 * theta.sin());
    }
    let inc = params.inclination()?;
    let c = theta.cos();
    let gap = (inc.sin_alpha - c) * (inc.sin_alpha + c);
    if gap <= 0.0 {
        return Ok(0.0);
    }
    Ok(theta.sin() / (PI * gap.sqrt()))
}

/// Polar angle reached at orbit-plane angle `gamma`: `cos(theta) = sin(alpha) cos(gamma)`.
pub fn theta_of_gamma(inc: &Inclination, gamma: f64) -> f64 {
    (inc.sin_alpha * gamma.cos()).clamp(-1.0, 1.0).acos()
}

fn gamma_of_theta(inc: &Inclination, theta: f64) -> f64 {
    (theta.cos() / inc.sin_alpha).clamp(-1.0, 1.0).acos()
}

/// Probability that the polar angle lies in `[lo, hi]`.
///
/// Integrates in `gamma`, where the inverse-square-root edge singularity of the
/// density cancels against `d theta / d gamma`.
pub fn angular_probability(params: &OrbitEnsembleParams, lo: f64, hi: f64) -> Result<f64> {
    let opts = QuadOptions::tolerances(1e-14, 1e-12);
    if params.l == 0 {
        let (lo, hi) = (lo.clamp(0.0, PI), hi.clamp(0.0, PI));
        return Ok(0.5 * (lo.cos() - hi.cos()).max(0.0));
    }
    let inc = params.inclination()?;
    let (t0, t1) = params.angular_support();
    let (lo, hi) = (lo.clamp(t0, t1), hi.clamp(t0, t1));
    if hi <= lo {
        return Ok(0.0);
    }
    let integrand = |g: f64| {
        let c = inc.sin_alpha * g.cos();
        let s = (1.0 - c * c).sqrt();
        let sg = g.sin();
        let gap = inc.sin_alpha * inc.sin_alpha * sg * sg;
        if gap <= 0.0 || s <= 0.0 {
            return 0.0;
        }
        let mean = 0.5
            * (branch_from_cos(params, &inc, c, s, gap, Branch::One)
                + branch_from_cos(params, &inc, c, s, gap, Branch::Two));
        mean * inc.sin_alpha * sg / s
    };
    let g_lo = gamma_of_theta(&inc, lo);
    let g_hi = gamma_of_theta(&inc, hi);
    Ok(integrate(integrand, g_lo, g_hi, &opts)?.value)
}

/// `int p_c(theta) d theta` over `[0, pi]`.
pub fn angular_norm(params: &OrbitEnsembleParams) -> Result<f64> {
    angular_probability(params, 0.0, PI)
}

/// Product-ansatz 3D density in `a^-3`,
/// `p_c(r) p_c(theta) / (2 pi r^2 sin(theta))`.
///
/// Its radial and polar marginals are the ensemble densities by construction.
pub fn density3d_product(params: &OrbitEnsembleParams, r: f64, theta: f64) -> Result<f64> {
    check_theta(theta)?;
    let pr = radial_density(params, r)?;
    let s = theta.sin();
    if pr == 0.0 || s <= 0.0 {
        return Ok(0.0);
    }
    let pt = angular_density(params, theta)?;
    Ok(pr * pt / (2.0 * PI * r * r * s))
}

/// Classical oscillator density at energy `n + 1/2`,
/// `1 / (pi sqrt(2E - x^2))` between the turning points.
pub fn oscillator_classical_density(n: u32, x: f64) -> f64 {
    let two_e = 2.0 * f64::from(n) + 1.0;
    let gap = two_e - x * x;
    if gap <= 0.0 {
        0.0
    } else {
        1.0 / (PI * gap.sqrt())
    }
}

/// Oscillator turning point `sqrt(2n + 1)`.
pub fn oscillator_turning_point(n: u32) -> f64 {
    (2.0 * f64::from(n) + 1.0).sqrt()
}
