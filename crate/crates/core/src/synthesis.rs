//! Synthesis of position-representation wave functions from momentum states
//! (plane-wave expansion against the polarization frame), conversion between
//! the complex field and the real D/B pair, and field-level observables:
//! wave-equation residuals, the spin-matrix form of the curl, energy and
//! momentum integrals, and per-volume helicity energy fractions.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{PositionGrid, SpectralOps, VectorField3};
use crate::math::{
    cis, cvec3_conj, cvec3_norm_sq, pairwise_sum_by, C64, CVec3, Vec3,
};
use crate::momentum::MomentumWaveFunction;
use crate::polarization::polarization_vector;

/// Two-component position-representation state: the positive- and
/// negative-helicity wave functions on a common grid at a common time.
/// The full complex field is psi_plus + conj(psi_minus).
#[derive(Debug, Clone)]
pub struct HelicityField {
    pub grid: PositionGrid,
    pub time: f64,
    pub psi_plus: VectorField3,
    pub psi_minus: VectorField3,
}

impl HelicityField {
    pub fn zeros(grid: PositionGrid, time: f64) -> Self {
        Self { grid, time, psi_plus: VectorField3::zeros(grid), psi_minus: VectorField3::zeros(grid) }
    }

    pub fn from_parts(psi_plus: VectorField3, psi_minus: VectorField3, time: f64) -> Result<Self> {
        if !psi_plus.grid.same_grid(&psi_minus.grid) {
            return Err(Error::GridMismatch("helicity components on different grids".into()));
        }
        Ok(Self { grid: psi_plus.grid, time, psi_plus, psi_minus })
    }

    /// Full complex field F = psi_plus + conj(psi_minus).
    pub fn rs_vector(&self) -> VectorField3 {
        self.psi_plus
            .zip(&self.psi_minus, |p, m| {
                [p[0] + m[0].conj(), p[1] + m[1].conj(), p[2] + m[2].conj()]
            })
            .expect("components share a grid by construction")
    }

    /// Integrals of |psi_plus|^2 and |psi_minus|^2 over the box.
    pub fn energy_split(&self) -> (f64, f64) {
        (self.psi_plus.l2_norm_sq(), self.psi_minus.l2_norm_sq())
    }

    pub fn total_energy(&self) -> f64 {
        let (p, m) = self.energy_split();
        p + m
    }

    pub fn all_finite(&self) -> bool {
        self.psi_plus.all_finite() && self.psi_minus.all_finite()
    }
}

/// Real electromagnetic field pair on a grid.
#[derive(Debug, Clone)]
pub struct EMFields {
    pub grid: PositionGrid,
    pub d: [Vec<f64>; 3],
    pub b: [Vec<f64>; 3],
}

/// Synthesize the position-representation pair from a momentum state at the
/// given time by direct plane-wave summation over the quadrature samples.
///
/// Each sample contributes with the synthesis measure k * weight (the
/// invariant-measure weight restored to d3k) and the prefactor (2 pi)^{-3/2};
/// natural units make sqrt(hbar c) = 1. Fails when the grid cannot resolve
/// the largest sampled wave number.
pub fn synthesize(
    f: &MomentumWaveFunction,
    grid: &PositionGrid,
    time: f64,
) -> Result<HelicityField> {
    let samples = f.samples();
    for axis in 0..3 {
        let k_max = samples
            .iter()
            .map(|s| s.wave_vector()[axis].abs())
            .fold(0.0f64, f64::max);
        if k_max > 0.0 {
            let limit = std::f64::consts::PI / k_max;
            if grid.spacing[axis] >= limit {
                return Err(Error::NyquistViolation { axis, spacing: grid.spacing[axis], limit });
            }
        }
    }

    let has_plus = f.amp_plus().iter().any(|a| a.norm_sqr() > 0.0);
    let has_minus = f.amp_minus().iter().any(|a| a.norm_sqr() > 0.0);
    let pre = (2.0 * std::f64::consts::PI).powf(-1.5);

    struct Term {
        e: CVec3,
        e_conj: CVec3,
        amp_plus: C64,
        amp_minus: C64,
    }
    let terms: Vec<Term> = samples
        .iter()
        .enumerate()
        .map(|(q, s)| {
            let e = polarization_vector(s.theta, s.phi);
            let fold = pre * s.k * s.weight;
            let osc = cis(-s.omega() * time);
            Term {
                e,
                e_conj: cvec3_conj(e),
                amp_plus: f.amp_plus()[q] * fold * osc,
                amp_minus: f.amp_minus()[q] * fold * osc,
            }
        })
        .collect();

    // Per-axis phase tables exp(i k_axis * coordinate).
    let [nx, ny, nz] = grid.shape;
    let table = |axis: usize| -> Vec<Vec<C64>> {
        samples
            .iter()
            .map(|s| {
                let k_axis = s.wave_vector()[axis];
                (0..grid.shape[axis])
                    .map(|i| cis(k_axis * (grid.origin[axis] + i as f64 * grid.spacing[axis])))
                    .collect()
            })
            .collect()
    };
    let px = table(0);
    let py = table(1);
    let pz = table(2);

    let plane = nx * ny;
    type Slab = ([Vec<C64>; 3], [Vec<C64>; 3]);
    let slabs: Vec<Slab> = (0..nz)
        .into_par_iter()
        .map(|iz| {
            let mut plus = [
                vec![C64::default(); plane],
                vec![C64::default(); plane],
                vec![C64::default(); plane],
            ];
            let mut minus = plus.clone();
            for (q, term) in terms.iter().enumerate() {
                let cz = pz[q][iz];
                let ap_z = term.amp_plus * cz;
                let am_z = term.amp_minus * cz;
                let pxq = &px[q];
                for iy in 0..ny {
                    let cy = py[q][iy];
                    let row = iy * nx;
                    if has_plus {
                        let a_y = ap_z * cy;
                        for ix in 0..nx {
                            let a = a_y * pxq[ix];
                            plus[0][row + ix] += term.e[0] * a;
                            plus[1][row + ix] += term.e[1] * a;
                            plus[2][row + ix] += term.e[2] * a;
                        }
                    }
                    if has_minus {
                        let a_y = am_z * cy;
                        for ix in 0..nx {
                            let a = a_y * pxq[ix];
                            minus[0][row + ix] += term.e_conj[0] * a;
                            minus[1][row + ix] += term.e_conj[1] * a;
                            minus[2][row + ix] += term.e_conj[2] * a;
                        }
                    }
                }
            }
            (plus, minus)
        })
        .collect();

    let mut out = HelicityField::zeros(*grid, time);
    for (iz, (plus, minus)) in slabs.into_iter().enumerate() {
        let base = iz * plane;
        for c in 0..3 {
            out.psi_plus.comps[c][base..base + plane].copy_from_slice(&plus[c]);
            out.psi_minus.comps[c][base..base + plane].copy_from_slice(&minus[c]);
        }
    }
    Ok(out)
}

/// D = sqrt(2) Re F, B = sqrt(2) Im F in natural units.
pub fn rs_to_em(f: &VectorField3) -> EMFields {
    let s = std::f64::consts::SQRT_2;
    let n = f.num_nodes();
    let mut d = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    let mut b = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
    for c in 0..3 {
        for i in 0..n {
            d[c][i] = s * f.comps[c][i].re;
            b[c][i] = s * f.comps[c][i].im;
        }
    }
    EMFields { grid: f.grid, d, b }
}

/// F = (D + i B)/sqrt(2) in natural units.
pub fn em_to_rs(em: &EMFields) -> VectorField3 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut out = VectorField3::zeros(em.grid);
    for c in 0..3 {
        for i in 0..em.grid.num_nodes() {
            out.comps[c][i] = C64::new(em.d[c][i], em.b[c][i]) * s;
        }
    }
    out
}

/// Wave-equation residuals of a two-component field.
#[derive(Debug, Clone, Copy)]
pub struct MaxwellResidual {
    /// Worst relative curl-equation residual over the populated components.
    pub curl: f64,
    /// Worst relative divergence residual over the populated components.
    pub divergence: f64,
}

fn component_residuals(
    psi: &VectorField3,
    lambda: f64,
    time_derivative: &VectorField3,
    ops: &SpectralOps,
) -> Result<(f64, f64)> {
    // i dPsi/dt = lambda c curl Psi; time_derivative holds i dPsi/dt.
    let curl = ops.curl(psi)?;
    let scale = time_derivative.l2_norm();
    let diff = time_derivative.sub(&curl.scaled(C64::new(lambda, 0.0)))?;
    let curl_res = diff.l2_norm() / scale;
    let div = ops.divergence(psi)?;
    let dv = psi.grid.cell_volume();
    let div_norm = (dv * pairwise_sum_by(div.len(), |i| div[i].norm_sqr())).sqrt();
    Ok((curl_res, div_norm / scale))
}

/// Residuals for a monochromatic field, where i d/dt acts as omega.
pub fn maxwell_residual_monochromatic(
    field: &HelicityField,
    ops: &SpectralOps,
    omega: f64,
) -> Result<MaxwellResidual> {
    let (ep, em) = field.energy_split();
    let total = ep + em;
    if total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let mut curl = 0.0f64;
    let mut div = 0.0f64;
    for (psi, lambda, energy) in
        [(&field.psi_plus, 1.0, ep), (&field.psi_minus, -1.0, em)]
    {
        if energy <= 1e-28 * total {
            continue;
        }
        let dpsi = psi.scaled(C64::new(omega, 0.0));
        let (c, d) = component_residuals(psi, lambda, &dpsi, ops)?;
        curl = curl.max(c);
        div = div.max(d);
    }
    Ok(MaxwellResidual { curl, divergence: div })
}

/// Residuals for a general field from a snapshot pair bracketing `center`:
/// i d/dt is the centered difference of the pair.
pub fn maxwell_residual_snapshots(
    earlier: &HelicityField,
    center: &HelicityField,
    later: &HelicityField,
    ops: &SpectralOps,
) -> Result<MaxwellResidual> {
    if !earlier.grid.same_grid(&center.grid) || !later.grid.same_grid(&center.grid) {
        return Err(Error::GridMismatch("snapshots on different grids".into()));
    }
    let dt_lo = center.time - earlier.time;
    let dt_hi = later.time - center.time;
    if dt_lo <= 0.0 || (dt_lo - dt_hi).abs() > 1e-12 * dt_lo {
        return Err(Error::InvalidField("snapshots must bracket the center symmetrically".into()));
    }
    let (ep, em) = center.energy_split();
    let total = ep + em;
    if total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let inv = C64::new(0.0, 1.0 / (dt_lo + dt_hi));
    let mut curl = 0.0f64;
    let mut div = 0.0f64;
    for (psi, before, after, lambda, energy) in [
        (&center.psi_plus, &earlier.psi_plus, &later.psi_plus, 1.0, ep),
        (&center.psi_minus, &earlier.psi_minus, &later.psi_minus, -1.0, em),
    ] {
        if energy <= 1e-28 * total {
            continue;
        }
        let dpsi = after.sub(before)?.scaled(inv);
        let (c, d) = component_residuals(psi, lambda, &dpsi, ops)?;
        curl = curl.max(c);
        div = div.max(d);
    }
    Ok(MaxwellResidual { curl, divergence: div })
}

/// Residual of the algebraic identity (s . grad) F = i curl F built from the
/// explicit spin-1 matrices (s_i)_{jk} = -i eps_{ijk}, evaluated on the same
/// spectral derivatives on both sides. Zero up to roundoff for any field.
pub fn spin_curl_equivalence(field: &VectorField3, ops: &SpectralOps) -> Result<f64> {
    // Nine partial derivatives d_i F_k.
    let mut partials: Vec<Vec<C64>> = Vec::with_capacity(9);
    for axis in 0..3 {
        for comp in 0..3 {
            let mut hat = field.comps[comp].clone();
            ops.fft3_forward(&mut hat);
            let n = hat.len();
            let mut d: Vec<C64> = (0..n)
                .into_par_iter()
                .map(|i| C64::new(0.0, ops.mode_k(i)[axis]) * hat[i])
                .collect();
            ops.fft3_inverse(&mut d);
            partials.push(d);
        }
    }
    let part = |axis: usize, comp: usize| &partials[axis * 3 + comp];

    // Spin-1 matrices (s_i)_{jk} = -i eps_{ijk}, written out explicitly.
    let i_unit = C64::new(0.0, 1.0);
    let s_matrices: [[[C64; 3]; 3]; 3] = {
        let z = C64::default();
        [
            [[z, z, z], [z, z, -i_unit], [z, i_unit, z]],
            [[z, z, i_unit], [z, z, z], [-i_unit, z, z]],
            [[z, -i_unit, z], [i_unit, z, z], [z, z, z]],
        ]
    };

    let n = field.num_nodes();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..3 {
        // (s . grad F)_j = sum_i sum_k (s_i)_{jk} d_i F_k.
        let row: Vec<C64> = (0..n)
            .into_par_iter()
            .map(|idx| {
                let mut acc = C64::default();
                for i in 0..3 {
                    for k in 0..3 {
                        let m = s_matrices[i][j][k];
                        if m != C64::default() {
                            acc += m * part(i, k)[idx];
                        }
                    }
                }
                acc
            })
            .collect();
        // i (curl F)_j from the same partials.
        let (a, b) = match j {
            0 => ((1, 2), (2, 1)),
            1 => ((2, 0), (0, 2)),
            _ => ((0, 1), (1, 0)),
        };
        for idx in 0..n {
            let curl_j = part(a.0, a.1)[idx] - part(b.0, b.1)[idx];
            let rhs = i_unit * curl_j;
            num += (row[idx] - rhs).norm_sqr();
            den += rhs.norm_sqr();
        }
    }
    if den == 0.0 {
        return Ok(0.0);
    }
    Ok((num / den).sqrt())
}

/// Field energy and momentum: E = int F* . F, P = -i int F* x F.
///
/// The momentum integrand is Hermitian, so the imaginary part is pure
/// roundoff; it is checked and discarded.
pub fn field_energy_momentum(field: &HelicityField) -> Result<(f64, Vec3)> {
    let f = field.rs_vector();
    let dv = f.grid.cell_volume();
    let energy = f.l2_norm_sq();
    let mut p = [0.0; 3];
    for axis in 0..3 {
        let (a, b) = match axis {
            0 => (1, 2),
            1 => (2, 0),
            _ => (0, 1),
        };
        let val: C64 = pairwise_sum_by(f.num_nodes(), |i| {
            let fa = f.comps[a][i];
            let fb = f.comps[b][i];
            C64::new(0.0, -1.0) * (fa.conj() * fb - fb.conj() * fa)
        }) * C64::new(dv, 0.0);
        if energy > 0.0 && val.im.abs() > 1e-10 * (val.re.abs() + energy) {
            return Err(Error::InvalidField(format!(
                "momentum integral has imaginary residue {}",
                val.im
            )));
        }
        p[axis] = val.re;
    }
    Ok((energy, p))
}

/// Helicity energy fractions over a volume mask: p_lambda(V) =
/// int_V |psi_lambda|^2 / int (|psi_plus|^2 + |psi_minus|^2).
pub fn energy_fraction<F>(field: &HelicityField, mask: F) -> Result<(f64, f64)>
where
    F: Fn(Vec3) -> bool + Sync,
{
    let total = field.total_energy();
    if total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    let dv = field.grid.cell_volume();
    let n = field.grid.num_nodes();
    let part = |v: &VectorField3| -> f64 {
        dv * pairwise_sum_by(n, |i| {
            if mask(field.grid.position(i)) {
                cvec3_norm_sq(v.at(i))
            } else {
                0.0
            }
        })
    };
    Ok((part(&field.psi_plus) / total, part(&field.psi_minus) / total))
}

/// Coherent-state mean-field scaling: amplitudes times sqrt(N), so the
/// synthesized field is the average field of an N-photon coherent state.
pub fn coherent_average(f: &MomentumWaveFunction, photon_number: f64) -> Result<MomentumWaveFunction> {
    if photon_number < 0.0 {
        return Err(Error::Unsupported("photon number must be non-negative".into()));
    }
    Ok(f.scaled(C64::new(photon_number.sqrt(), 0.0)))
}
