//! Geometry of the polarization frame on the light cone: the circular
//! polarization vector e(k), the beam-gauge connection alpha(k) it induces,
//! and the curvature check that pins the gauge-independent content.
//!
//! The gauge is chosen so that alpha = (cot(theta)/k) (-sin phi, cos phi, 0),
//! which is regular everywhere except the k_z axis. On the axis the phase of
//! e(k) is fixed by the phi = 0 limit.

use crate::error::{Error, Result};
use crate::math::{
    cvec3_dot, vec3_add, vec3_norm, vec3_scale, C64, CVec3, Vec3,
};

/// Below this value of sin(theta) the beam gauge is treated as singular.
pub const AXIS_SIN_TOL: f64 = 1e-8;

/// Circular polarization vector for the direction (theta, phi).
///
/// Unit norm, transverse, and satisfying k x e = -i |k| e (c = 1). On the
/// polar axis the phi -> 0 limit is used, a pure gauge choice.
pub fn polarization_vector(theta: f64, phi: f64) -> CVec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = if st.abs() < AXIS_SIN_TOL {
        (0.0, 1.0)
    } else {
        phi.sin_cos()
    };
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    [
        C64::new(-ct * cp, sp) * inv_sqrt2,
        C64::new(-ct * sp, -cp) * inv_sqrt2,
        C64::new(st, 0.0) * inv_sqrt2,
    ]
}

/// Polarization vector from a Cartesian wave vector.
pub fn polarization_vector_cartesian(k: Vec3) -> CVec3 {
    let kmag = vec3_norm(k);
    let kperp = (k[0] * k[0] + k[1] * k[1]).sqrt();
    let theta = kperp.atan2(k[2]);
    let phi = if kperp == 0.0 { 0.0 } else { k[1].atan2(k[0]) };
    let _ = kmag;
    polarization_vector(theta, phi)
}

/// Beam-gauge connection alpha(k) = (cot theta / k) (-sin phi, cos phi, 0).
///
/// Fails on the polar axis where this gauge is singular.
pub fn connection_alpha(k: f64, theta: f64, phi: f64) -> Result<Vec3> {
    let st = theta.sin();
    if st.abs() < AXIS_SIN_TOL {
        return Err(Error::AxisSingular(st));
    }
    let cot = theta.cos() / st;
    let (sp, cp) = phi.sin_cos();
    Ok([-cot * sp / k, cot * cp / k, 0.0])
}

/// Connection from a Cartesian wave vector.
pub fn connection_alpha_cartesian(k: Vec3) -> Result<Vec3> {
    let kmag = vec3_norm(k);
    let kperp = (k[0] * k[0] + k[1] * k[1]).sqrt();
    if kmag == 0.0 {
        return Err(Error::AxisSingular(0.0));
    }
    let theta = kperp.atan2(k[2]);
    let phi = if kperp == 0.0 { 0.0 } else { k[1].atan2(k[0]) };
    connection_alpha(kmag, theta, phi)
}

/// Numerical connection i e*(k) . d e(k), componentwise, by central
/// differences of the polarization vector in Cartesian k space.
///
/// The product is purely imaginary up to discretization, so the real part of
/// i e* . de is returned.
pub fn connection_alpha_numeric(k: Vec3, step: f64) -> Vec3 {
    let mut alpha = [0.0; 3];
    let e0 = polarization_vector_cartesian(k);
    for axis in 0..3 {
        let mut kp = k;
        let mut km = k;
        kp[axis] += step;
        km[axis] -= step;
        let ep = polarization_vector_cartesian(kp);
        let em = polarization_vector_cartesian(km);
        let de = [
            (ep[0] - em[0]) / (2.0 * step),
            (ep[1] - em[1]) / (2.0 * step),
            (ep[2] - em[2]) / (2.0 * step),
        ];
        let val = C64::new(0.0, 1.0) * cvec3_dot(e0, de);
        alpha[axis] = val.re;
    }
    alpha
}

/// Curl of the closed-form connection by central differences.
pub fn connection_curl_fd(k: Vec3, step: f64) -> Result<Vec3> {
    let partial = |axis: usize| -> Result<Vec3> {
        let mut kp = k;
        let mut km = k;
        kp[axis] += step;
        km[axis] -= step;
        let ap = connection_alpha_cartesian(kp)?;
        let am = connection_alpha_cartesian(km)?;
        Ok([
            (ap[0] - am[0]) / (2.0 * step),
            (ap[1] - am[1]) / (2.0 * step),
            (ap[2] - am[2]) / (2.0 * step),
        ])
    };
    let dx = partial(0)?;
    let dy = partial(1)?;
    let dz = partial(2)?;
    Ok([dy[2] - dz[1], dz[0] - dx[2], dx[1] - dy[0]])
}

/// Residual of the curvature law curl(alpha) = -k / k^3 at the given point,
/// evaluated with central differences of the closed-form connection.
pub fn curvature_residual(k: Vec3, step: f64) -> Result<f64> {
    let curl = connection_curl_fd(k, step)?;
    let kmag = vec3_norm(k);
    let monopole = vec3_scale(k, 1.0 / (kmag * kmag * kmag));
    Ok(vec3_norm(vec3_add(curl, monopole)))
}
