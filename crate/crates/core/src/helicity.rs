//! Helicity analysis of classical fields: the nonlocal helicity operator,
//! the projectors that split a field into its two helicity parts, the
//! Landau-Peierls rescaling and its expectation rule, and Stokes parameters
//! with the Poincare-sphere map.
//!
//! The Fourier route is the reference implementation: per mode the helicity
//! operator acts as (i k x)/|k|, and the Landau-Peierls transform divides by
//! sqrt(|k|). The slowly decaying real-space kernels are kept as independent
//! cross-validation oracles, evaluated as circular convolutions of the
//! half-box-truncated kernel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::Generator;
use crate::grid::{PositionGrid, SpectralOps, VectorField3};
use crate::math::{cvec3_dot, pairwise_sum_by, C64, CVec3, Vec3};
use crate::synthesis::HelicityField;

/// Which discretization of the helicity operator to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HelicityMethod {
    Fourier,
    Kernel,
}

/// Smooth truncation window: 1 below `r0`, smootherstep down to 0 at `r1`.
/// A hard cutoff of a slowly decaying kernel rings like cos(k r1)/(k r1) in
/// every Fourier mode; the C^2 taper trades that for a (k (r1 - r0))^-3
/// tail.
pub fn smooth_taper(r: f64, r0: f64, r1: f64) -> f64 {
    if r <= r0 {
        1.0
    } else if r >= r1 {
        0.0
    } else {
        let t = (r - r0) / (r1 - r0);
        1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0)
    }
}

/// Apply the helicity operator to a field.
///
/// Fourier: per-mode (i k x)/|k| with the zero mode annihilated. Kernel:
/// convolution of curl F against the |r|^-2 kernel, smoothly truncated at
/// half the box (or `kernel_radius` if given); agreement with the Fourier
/// route is truncation limited.
pub fn helicity_apply(
    field: &VectorField3,
    method: HelicityMethod,
    ops: &SpectralOps,
    kernel_radius: Option<f64>,
) -> Result<VectorField3> {
    match method {
        HelicityMethod::Fourier => ops.apply_mode_map(field, chi_mode),
        HelicityMethod::Kernel => {
            let curl = ops.curl(field)?;
            let lengths = field.grid.lengths();
            let r_max = kernel_radius
                .unwrap_or_else(|| 0.5 * lengths.iter().cloned().fold(f64::INFINITY, f64::min));
            let norm = 1.0 / (2.0 * std::f64::consts::PI * std::f64::consts::PI);
            apply_isotropic_kernel(&curl, ops, |r| norm / (r * r), r_max)
        }
    }
}

#[inline]
fn chi_mode(k: Vec3, v: CVec3) -> CVec3 {
    let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
    if kk == 0.0 {
        return [C64::default(); 3];
    }
    let i = C64::new(0.0, 1.0 / kk);
    [
        i * (k[1] * v[2] - k[2] * v[1]),
        i * (k[2] * v[0] - k[0] * v[2]),
        i * (k[0] * v[1] - k[1] * v[0]),
    ]
}

/// Split a field into its helicity components: psi_plus = P+ F and
/// psi_minus = (P- F)*, with P+- = (1 +- chi)/2. The zero mode carries no
/// helicity and is shared equally, so F = psi_plus + conj(psi_minus) holds
/// identically.
pub fn helicity_project(
    field: &VectorField3,
    time: f64,
    ops: &SpectralOps,
) -> Result<HelicityField> {
    let mut hats: [Vec<C64>; 3] = [
        field.comps[0].clone(),
        field.comps[1].clone(),
        field.comps[2].clone(),
    ];
    for c in hats.iter_mut() {
        ops.fft3_forward(c);
    }
    let n = field.num_nodes();
    let halves: Vec<(CVec3, CVec3)> = (0..n)
        .into_par_iter()
        .map(|idx| {
            let k = ops.mode_k(idx);
            let v = [hats[0][idx], hats[1][idx], hats[2][idx]];
            let chi = chi_mode(k, v);
            let plus = [
                (v[0] + chi[0]) * 0.5,
                (v[1] + chi[1]) * 0.5,
                (v[2] + chi[2]) * 0.5,
            ];
            let minus = [
                (v[0] - chi[0]) * 0.5,
                (v[1] - chi[1]) * 0.5,
                (v[2] - chi[2]) * 0.5,
            ];
            (plus, minus)
        })
        .collect();
    let mut plus = VectorField3::zeros(field.grid);
    let mut minus = VectorField3::zeros(field.grid);
    for (idx, (p, m)) in halves.iter().enumerate() {
        plus.set(idx, *p);
        minus.set(idx, *m);
    }
    for c in 0..3 {
        ops.fft3_inverse(&mut plus.comps[c]);
        ops.fft3_inverse(&mut minus.comps[c]);
    }
    // psi_minus is the conjugate of the negative-helicity projection.
    let minus = minus.conjugated();
    HelicityField::from_parts(plus, minus, time)
}

/// Apply an isotropic real-space kernel K(|r|), smoothly truncated at
/// `r_max`, to a field on a periodic grid.
///
/// The kernel's radial Fourier transform
///
/// ```text
/// M(k) = (4 pi / k) int_0^rmax  r K(r) T(r) sin(k r) dr
/// ```
///
/// is evaluated by composite Simpson quadrature in the substituted variable
/// u = sqrt(r) (which regularizes kernels as singular as r^-5/2) and applied
/// per Fourier mode. A direct lattice sum of a singular kernel is only
/// second-order accurate; computing the transform from the same radial
/// profile keeps the oracle's analytic content (the kernel shape, constant,
/// and truncation window) while removing the sampling error. The truncation
/// taper runs from 0.2 r_max to r_max; the residual truncation error falls
/// below 1e-3 for wavelengths shorter than about a third of r_max. The zero
/// mode is annihilated.
pub fn apply_isotropic_kernel(
    field: &VectorField3,
    ops: &SpectralOps,
    radial: impl Fn(f64) -> f64 + Sync,
    r_max: f64,
) -> Result<VectorField3> {
    let r_on = 0.2 * r_max;
    // u-substituted integrand: with r = u^2, dr = 2 u du,
    // M(k) = (8 pi / k) int_0^sqrt(rmax) u^3 K(u^2) T(u^2) sin(k u^2) du.
    let u_max = r_max.sqrt();
    let multiplier = |k: f64| -> f64 {
        if k == 0.0 {
            return 0.0;
        }
        // Simpson resolution follows the oscillation count k*r_max.
        let n = ((k * r_max * 8.0 / std::f64::consts::PI) as usize).max(512).next_multiple_of(2);
        let du = u_max / n as f64;
        let eval = |u: f64| -> f64 {
            if u == 0.0 {
                return 0.0;
            }
            let r = u * u;
            u * u * u * radial(r) * smooth_taper(r, r_on, r_max) * (k * r).sin()
        };
        let mut acc = eval(0.0) + eval(u_max);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * eval(i as f64 * du);
        }
        acc * du / 3.0 * 8.0 * std::f64::consts::PI / k
    };

    // Distinct |k|^2 values repeat heavily on cubic lattices; memoize.
    let n = field.num_nodes();
    let mut k_sq: Vec<f64> = Vec::with_capacity(n);
    for idx in 0..n {
        let k = ops.mode_k(idx);
        k_sq.push(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
    }
    let mut table: std::collections::HashMap<u64, f64> = std::collections::HashMap::new();
    for &ksq in &k_sq {
        table.entry(ksq.to_bits()).or_insert(0.0);
    }
    let mut keys: Vec<u64> = table.keys().cloned().collect();
    keys.sort_unstable();
    let values: Vec<(u64, f64)> = keys
        .par_iter()
        .map(|&bits| (bits, multiplier(f64::from_bits(bits).sqrt())))
        .collect();
    for (bits, val) in values {
        table.insert(bits, val);
    }

    let mut out = VectorField3::zeros(field.grid);
    for c in 0..3 {
        let mut hat = field.comps[c].clone();
        ops.fft3_forward(&mut hat);
        for (idx, z) in hat.iter_mut().enumerate() {
            *z *= table[&k_sq[idx].to_bits()];
        }
        ops.fft3_inverse(&mut hat);
        out.comps[c] = hat;
    }
    Ok(out)
}

/// Landau-Peierls pair: position wave functions with probability-density
/// normalization, one per helicity.
#[derive(Debug, Clone)]
pub struct LPWaveFunction {
    pub grid: PositionGrid,
    pub time: f64,
    pub phi_plus: VectorField3,
    pub phi_minus: VectorField3,
}

impl LPWaveFunction {
    pub fn norm_sq(&self) -> f64 {
        self.phi_plus.l2_norm_sq() + self.phi_minus.l2_norm_sq()
    }
}

/// Fraction of a component's L2 weight sitting in the zero Fourier mode.
fn zero_mode_fraction(v: &VectorField3) -> f64 {
    let mean = v.mean();
    let mean_sq: f64 = mean.iter().map(|z| z.norm_sqr()).sum();
    let total = v.l2_norm_sq() / v.grid.cell_volume() / v.num_nodes() as f64;
    if total == 0.0 {
        0.0
    } else {
        (mean_sq / total).sqrt()
    }
}

fn lp_scale(field: &VectorField3, ops: &SpectralOps, forward: bool) -> Result<VectorField3> {
    ops.apply_mode_map(field, |k, v| {
        let kk = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).sqrt();
        if kk == 0.0 {
            return [C64::default(); 3];
        }
        let s = if forward { kk.powf(-0.5) } else { kk.sqrt() };
        [v[0] * s, v[1] * s, v[2] * s]
    })
}

/// Forward Landau-Peierls transform: per-mode division by sqrt(|k|)
/// (sqrt(hbar omega) in natural units). Fails when the field carries a
/// static (zero-mode) component, for which the transform is undefined;
/// sub-percent leakage from quadrature synthesis is zeroed silently.
pub fn landau_peierls_forward(
    field: &HelicityField,
    ops: &SpectralOps,
) -> Result<LPWaveFunction> {
    for v in [&field.psi_plus, &field.psi_minus] {
        if v.l2_norm_sq() > 0.0 {
            let frac = zero_mode_fraction(v);
            if frac > 1e-2 {
                return Err(Error::LpStaticComponent(frac));
            }
        }
    }
    Ok(LPWaveFunction {
        grid: field.grid,
        time: field.time,
        phi_plus: lp_scale(&field.psi_plus, ops, true)?,
        phi_minus: lp_scale(&field.psi_minus, ops, true)?,
    })
}

/// Inverse Landau-Peierls transform: per-mode multiplication by sqrt(|k|).
pub fn landau_peierls_inverse(lp: &LPWaveFunction, ops: &SpectralOps) -> Result<HelicityField> {
    HelicityField::from_parts(
        lp_scale(&lp.phi_plus, ops, false)?,
        lp_scale(&lp.phi_minus, ops, false)?,
        lp.time,
    )
}

/// Expectation value of a Poincare generator in the Landau-Peierls position
/// representation: int Phi* G Phi / int |Phi|^2, summed over helicities.
///
/// Energy acts as lambda curl, momentum as -i grad, angular momentum as the
/// orbital part plus the spin matrices. Boosts are excluded: their position
/// form is not implemented and the momentum representation is authoritative.
pub fn lp_expectation(lp: &LPWaveFunction, g: Generator, ops: &SpectralOps) -> Result<f64> {
    let den = lp.norm_sq();
    if den <= 0.0 {
        return Err(Error::ZeroState);
    }
    let mut num = C64::default();
    for (phi, lambda) in [(&lp.phi_plus, 1.0), (&lp.phi_minus, -1.0)] {
        if phi.l2_norm_sq() == 0.0 {
            continue;
        }
        let gphi: VectorField3 = match g {
            Generator::H => ops.curl(phi)?.scaled(C64::new(lambda, 0.0)),
            Generator::Px | Generator::Py | Generator::Pz => {
                let axis = match g {
                    Generator::Px => 0,
                    Generator::Py => 1,
                    _ => 2,
                };
                // -i d/dr_axis acts per mode as k_axis.
                ops.apply_mode_map(phi, move |k, v| {
                    [v[0] * k[axis], v[1] * k[axis], v[2] * k[axis]]
                })?
            }
            Generator::Jx | Generator::Jy | Generator::Jz => {
                let axis = match g {
                    Generator::Jx => 0,
                    Generator::Jy => 1,
                    _ => 2,
                };
                let (a, b) = match axis {
                    0 => (1, 2),
                    1 => (2, 0),
                    _ => (0, 1),
                };
                // Orbital part -i (r_a d_b - r_b d_a).
                let da = ops.apply_mode_map(phi, move |k, v| {
                    [
                        v[0] * C64::new(0.0, k[a]),
                        v[1] * C64::new(0.0, k[a]),
                        v[2] * C64::new(0.0, k[a]),
                    ]
                })?;
                let db = ops.apply_mode_map(phi, move |k, v| {
                    [
                        v[0] * C64::new(0.0, k[b]),
                        v[1] * C64::new(0.0, k[b]),
                        v[2] * C64::new(0.0, k[b]),
                    ]
                })?;
                let grid = phi.grid;
                let i_unit = C64::new(0.0, 1.0);
                let mut out = VectorField3::zeros(grid);
                for idx in 0..grid.num_nodes() {
                    let r = grid.position(idx);
                    let orbital = [
                        -i_unit * (r[a] * db.comps[0][idx] - r[b] * da.comps[0][idx]),
                        -i_unit * (r[a] * db.comps[1][idx] - r[b] * da.comps[1][idx]),
                        -i_unit * (r[a] * db.comps[2][idx] - r[b] * da.comps[2][idx]),
                    ];
                    // Spin part (s_axis Phi) = +i e_axis x Phi, from
                    // (s_i)_{jk} = -i eps_{ijk}.
                    let v = phi.at(idx);
                    let mut e_axis = [0.0; 3];
                    e_axis[axis] = 1.0;
                    let spin = [
                        i_unit * (e_axis[1] * v[2] - e_axis[2] * v[1]),
                        i_unit * (e_axis[2] * v[0] - e_axis[0] * v[2]),
                        i_unit * (e_axis[0] * v[1] - e_axis[1] * v[0]),
                    ];
                    out.set(idx, [
                        orbital[0] + spin[0],
                        orbital[1] + spin[1],
                        orbital[2] + spin[2],
                    ]);
                }
                out
            }
            Generator::Nx | Generator::Ny | Generator::Nz => {
                return Err(Error::Unsupported(
                    "boost expectation is only defined through the momentum representation".into(),
                ));
            }
        };
        num += phi.inner(&gphi)?;
    }
    Ok(num.re / den)
}

/// Pointwise Stokes parameters of a two-component field.
#[derive(Debug, Clone)]
pub struct StokesMap {
    pub grid: PositionGrid,
    /// S0..S3, one array per parameter.
    pub s: [Vec<f64>; 4],
}

impl StokesMap {
    /// Volume-integrated Stokes parameters.
    pub fn integrated(&self) -> [f64; 4] {
        let dv = self.grid.cell_volume();
        [0, 1, 2, 3].map(|i| dv * pairwise_sum_by(self.s[i].len(), |q| self.s[i][q]))
    }

    /// Poincare point (S1, S2, S3)/S0 of the integrated parameters.
    pub fn poincare(&self) -> Option<Vec3> {
        let tot = self.integrated();
        if tot[0] <= 0.0 {
            return None;
        }
        Some([tot[1] / tot[0], tot[2] / tot[0], tot[3] / tot[0]])
    }

    /// Pointwise Poincare point, None where the intensity vanishes.
    pub fn poincare_at(&self, idx: usize) -> Option<Vec3> {
        let s0 = self.s[0][idx];
        if s0 <= 0.0 {
            return None;
        }
        Some([self.s[1][idx] / s0, self.s[2][idx] / s0, self.s[3][idx] / s0])
    }
}

/// Stokes parameters as bilinear combinations of the helicity components:
/// S0 = |psi+|^2 + |psi-|^2, S1 + i S2 = 2 psi+* . psi-, S3 = |psi+|^2 -
/// |psi-|^2, evaluated pointwise.
pub fn stokes(field: &HelicityField) -> StokesMap {
    let n = field.grid.num_nodes();
    let mut s = [vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for idx in 0..n {
        let p = field.psi_plus.at(idx);
        let m = field.psi_minus.at(idx);
        let pp = crate::math::cvec3_norm_sq(p);
        let mm = crate::math::cvec3_norm_sq(m);
        let cross = cvec3_dot(p, m);
        s[0][idx] = pp + mm;
        s[1][idx] = 2.0 * cross.re;
        s[2][idx] = 2.0 * cross.im;
        s[3][idx] = pp - mm;
    }
    StokesMap { grid: field.grid, s }
}
