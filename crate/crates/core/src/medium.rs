//! Two-helicity propagation through static inhomogeneous media.
//!
//! The coupled first-order system evolved here is
//!
//! ```text
//! i dPsi+/dt =  v(r) [ curl Psi+ + grad ln sqrt(v) x Psi+ + grad ln sqrt(h) x Psi- ]
//! i dPsi-/dt = -v(r) [ curl Psi- + grad ln sqrt(v) x Psi- + grad ln sqrt(h) x Psi+ ]
//! ```
//!
//! with v = 1/sqrt(eps mu) the local light velocity and h = sqrt(mu/eps) the
//! local impedance. Only the impedance gradient couples the helicities; with
//! grad h = 0 an initially pure state stays pure. In vacuum the system
//! reduces exactly to i dPsi/dt = +- c curl Psi, which fixes every sign.
//! Time stepping is classical RK4 with spectral or 4th-order finite
//! difference space derivatives on a periodic box.

use crate::error::{Error, Result};
use crate::grid::{curl_fd4, gradient_real_fd4, Boundary, PositionGrid, SpectralOps, VectorField3};
use crate::math::C64;
use crate::synthesis::HelicityField;

/// Spatial derivative scheme for the stepper and the medium gradients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeScheme {
    Rk4Spectral,
    Rk4Fd4,
}

/// Static medium sampled on the grid, with the precomputed gradient fields
/// the evolution equations need.
#[derive(Debug, Clone)]
pub struct MediumMap {
    pub grid: PositionGrid,
    pub v: Vec<f64>,
    pub h: Vec<f64>,
    pub grad_ln_sqrt_v: [Vec<f64>; 3],
    pub grad_ln_sqrt_h: [Vec<f64>; 3],
    /// Set when some medium property jumps by more than 50% between
    /// neighboring cells; gradients are then under-resolved.
    pub aliasing_warning: bool,
    pub v_max: f64,
}

impl MediumMap {
    pub fn is_vacuum(&self) -> bool {
        self.v.iter().all(|&x| (x - 1.0).abs() < 1e-14)
            && self.h.iter().all(|&x| (x - 1.0).abs() < 1e-14)
    }

    /// True when the impedance is uniform, i.e. the helicities decouple.
    pub fn constant_impedance(&self) -> bool {
        self.grad_ln_sqrt_h.iter().all(|c| c.iter().all(|&x| x == 0.0))
    }
}

fn relative_jump_exceeds(grid: &PositionGrid, data: &[f64], threshold: f64) -> bool {
    let [nx, ny, nz] = grid.shape;
    for iz in 0..nz {
        for iy in 0..ny {
            for ix in 0..nx {
                let idx = grid.index(ix, iy, iz);
                for (axis, up) in [
                    grid.index((ix + 1) % nx, iy, iz),
                    grid.index(ix, (iy + 1) % ny, iz),
                    grid.index(ix, iy, (iz + 1) % nz),
                ]
                .into_iter()
                .enumerate()
                {
                    let _ = axis;
                    let a = data[idx];
                    let b = data[up];
                    if (a - b).abs() / a.min(b) > threshold {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Build a medium from permittivity and permeability arrays on the grid.
///
/// Gradients of ln sqrt(v) and ln sqrt(h) are computed with the same scheme
/// the stepper will use. Constant fields get exactly zero gradients, so the
/// decoupling of helicities at uniform impedance is exact in arithmetic.
pub fn build_medium(
    grid: &PositionGrid,
    eps: &[f64],
    mu: &[f64],
    scheme: DerivativeScheme,
) -> Result<MediumMap> {
    let n = grid.num_nodes();
    if eps.len() != n || mu.len() != n {
        return Err(Error::InvalidMedium(format!(
            "need {n} values of eps and mu, got {} and {}",
            eps.len(),
            mu.len()
        )));
    }
    if grid.boundary != Boundary::Periodic {
        return Err(Error::InvalidMedium("propagation needs a periodic grid".into()));
    }
    for (i, (&e, &m)) in eps.iter().zip(mu.iter()).enumerate() {
        if !(e > 0.0) || !(m > 0.0) || !e.is_finite() || !m.is_finite() {
            return Err(Error::InvalidMedium(format!(
                "eps and mu must be positive and finite (node {i}: eps = {e}, mu = {m})"
            )));
        }
    }
    let v: Vec<f64> = eps.iter().zip(mu).map(|(&e, &m)| 1.0 / (e * m).sqrt()).collect();
    let h: Vec<f64> = eps.iter().zip(mu).map(|(&e, &m)| (m / e).sqrt()).collect();
    let aliasing_warning = relative_jump_exceeds(grid, eps, 0.5)
        || relative_jump_exceeds(grid, mu, 0.5);

    let log_half = |data: &[f64]| -> Vec<f64> { data.iter().map(|&x| 0.5 * x.ln()).collect() };
    let is_const = |data: &[f64]| data.windows(2).all(|w| (w[0] - w[1]).abs() < 1e-15);
    let gradient = |data: &[f64]| -> Result<[Vec<f64>; 3]> {
        if is_const(data) {
            return Ok([vec![0.0; n], vec![0.0; n], vec![0.0; n]]);
        }
        Ok(match scheme {
            DerivativeScheme::Rk4Spectral => SpectralOps::new(grid)?.gradient_real(data),
            DerivativeScheme::Rk4Fd4 => gradient_real_fd4(grid, data),
        })
    };
    let grad_ln_sqrt_v = gradient(&log_half(&v))?;
    let grad_ln_sqrt_h = gradient(&log_half(&h))?;
    let v_max = v.iter().cloned().fold(0.0, f64::max);
    Ok(MediumMap {
        grid: *grid,
        v,
        h,
        grad_ln_sqrt_v,
        grad_ln_sqrt_h,
        aliasing_warning,
        v_max,
    })
}

/// Uniform vacuum medium.
pub fn vacuum_medium(grid: &PositionGrid, scheme: DerivativeScheme) -> Result<MediumMap> {
    let ones = vec![1.0; grid.num_nodes()];
    build_medium(grid, &ones, &ones, scheme)
}

/// Smooth periodic slab profile: rises to 1 around `rise`, falls back after
/// `fall`, with tanh walls of the given `width` along one axis. Interfaces
/// must be resolved by at least a few cells.
pub fn tanh_slab_profile(
    grid: &PositionGrid,
    axis: usize,
    rise: f64,
    fall: f64,
    width: f64,
) -> Vec<f64> {
    (0..grid.num_nodes())
        .map(|i| {
            let x = grid.position(i)[axis];
            0.5 * (((x - rise) / width).tanh() - ((x - fall) / width).tanh())
        })
        .collect()
}

/// Time-stepper configuration. `dt = None` picks the CFL-limited step.
#[derive(Debug, Clone, Copy)]
pub struct StepperConfig {
    pub dt: Option<f64>,
    pub cfl: f64,
    pub scheme: DerivativeScheme,
    /// Record diagnostics every this many steps (0 = only first and last).
    pub diag_every: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self { dt: None, cfl: 0.5, scheme: DerivativeScheme::Rk4Spectral, diag_every: 10 }
    }
}

/// One row of per-step diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DiagnosticsRow {
    pub step: usize,
    pub time: f64,
    pub energy: f64,
    pub mixing: f64,
    pub max_amp: f64,
}

/// Final state of an evolution run.
#[derive(Debug)]
pub struct PropagationState {
    pub field: HelicityField,
    pub step_count: usize,
}

/// Energy fraction in the minus component; the mixing measure for runs that
/// start in a pure plus state.
pub fn mixing_measure(field: &HelicityField) -> Result<f64> {
    let (p, m) = field.energy_split();
    let total = p + m;
    if total <= 0.0 {
        return Err(Error::ZeroEnergy);
    }
    Ok(m / total)
}

/// The propagation operator for one medium: owns the derivative plan.
pub struct Propagator {
    pub medium: MediumMap,
    scheme: DerivativeScheme,
    ops: Option<SpectralOps>,
}

impl Propagator {
    pub fn new(medium: MediumMap, scheme: DerivativeScheme) -> Result<Self> {
        let ops = match scheme {
            DerivativeScheme::Rk4Spectral => Some(SpectralOps::new(&medium.grid)?),
            DerivativeScheme::Rk4Fd4 => None,
        };
        Ok(Self { medium, scheme, ops })
    }

    fn curl(&self, field: &VectorField3) -> Result<VectorField3> {
        match self.scheme {
            DerivativeScheme::Rk4Spectral => self.ops.as_ref().unwrap().curl(field),
            DerivativeScheme::Rk4Fd4 => Ok(curl_fd4(field)),
        }
    }

    /// Time derivatives (dPsi+/dt, dPsi-/dt) of the coupled system.
    pub fn rhs(&self, field: &HelicityField) -> Result<(VectorField3, VectorField3)> {
        if !field.grid.same_grid(&self.medium.grid) {
            return Err(Error::GridMismatch("state and medium on different grids".into()));
        }
        let curl_p = self.curl(&field.psi_plus)?;
        let curl_m = self.curl(&field.psi_minus)?;
        let m = &self.medium;
        let n = field.grid.num_nodes();
        let mut out_p = VectorField3::zeros(field.grid);
        let mut out_m = VectorField3::zeros(field.grid);
        let gv = &m.grad_ln_sqrt_v;
        let gh = &m.grad_ln_sqrt_h;
        for i in 0..n {
            let v = m.v[i];
            let gvi = [gv[0][i], gv[1][i], gv[2][i]];
            let ghi = [gh[0][i], gh[1][i], gh[2][i]];
            let pp = field.psi_plus.at(i);
            let pm = field.psi_minus.at(i);
            let cp = curl_p.at(i);
            let cm = curl_m.at(i);
            let cross = |a: [f64; 3], b: [C64; 3]| -> [C64; 3] {
                [
                    b[2] * a[1] - b[1] * a[2],
                    b[0] * a[2] - b[2] * a[0],
                    b[1] * a[0] - b[0] * a[1],
                ]
            };
            let gv_x_pp = cross(gvi, pp);
            let gh_x_pm = cross(ghi, pm);
            let gv_x_pm = cross(gvi, pm);
            let gh_x_pp = cross(ghi, pp);
            let miv = C64::new(0.0, -v);
            let piv = C64::new(0.0, v);
            let mut rp = [C64::default(); 3];
            let mut rm = [C64::default(); 3];
            for c in 0..3 {
                rp[c] = miv * (cp[c] + gv_x_pp[c] + gh_x_pm[c]);
                rm[c] = piv * (cm[c] + gv_x_pm[c] + gh_x_pp[c]);
            }
            out_p.set(i, rp);
            out_m.set(i, rm);
        }
        Ok((out_p, out_m))
    }

    /// CFL-limited maximum step.
    pub fn cfl_limit(&self, cfl: f64) -> f64 {
        let min_spacing = self.medium.grid.spacing.iter().cloned().fold(f64::INFINITY, f64::min);
        cfl * min_spacing / self.medium.v_max
    }

    /// RK4 evolution from the field's own time to `t_end`, with diagnostics.
    ///
    /// The step count is chosen so the run lands exactly on `t_end`; the
    /// requested dt (or the CFL limit) is never exceeded. NaN amplitudes
    /// abort with the offending step number.
    pub fn evolve(
        &self,
        field: HelicityField,
        config: &StepperConfig,
        t_end: f64,
    ) -> Result<(PropagationState, Vec<DiagnosticsRow>)> {
        let span = t_end - field.time;
        if span < 0.0 {
            return Err(Error::Unsupported("t_end precedes the state's time".into()));
        }
        let limit = self.cfl_limit(config.cfl);
        let dt_req = config.dt.unwrap_or(limit);
        if dt_req > limit * (1.0 + 1e-12) {
            return Err(Error::CflViolation { dt: dt_req, limit });
        }
        if span == 0.0 {
            let row = self.diag_row(&field, 0)?;
            return Ok((PropagationState { field, step_count: 0 }, vec![row]));
        }
        let n_steps = (span / dt_req).ceil().max(1.0) as usize;
        let dt = span / n_steps as f64;

        let mut psi = field;
        let mut rows = vec![self.diag_row(&psi, 0)?];
        for step in 1..=n_steps {
            psi = self.rk4_step(&psi, dt)?;
            let record = (config.diag_every > 0 && step % config.diag_every == 0)
                || step == n_steps;
            if record {
                let row = self.diag_row(&psi, step)?;
                if !row.max_amp.is_finite() {
                    return Err(Error::NanDetected { step, time: psi.time });
                }
                rows.push(row);
            }
        }
        Ok((PropagationState { field: psi, step_count: n_steps }, rows))
    }

    fn diag_row(&self, field: &HelicityField, step: usize) -> Result<DiagnosticsRow> {
        let (p, m) = field.energy_split();
        let energy = p + m;
        let mixing = if energy > 0.0 { m / energy } else { 0.0 };
        let max_amp = field.psi_plus.max_abs().max(field.psi_minus.max_abs());
        Ok(DiagnosticsRow { step, time: field.time, energy, mixing, max_amp })
    }

    fn rk4_step(&self, field: &HelicityField, dt: f64) -> Result<HelicityField> {
        let stage = |base: &HelicityField, k: &(VectorField3, VectorField3), scale: f64| {
            let s = C64::new(scale, 0.0);
            HelicityField {
                grid: base.grid,
                time: base.time + scale,
                psi_plus: base.psi_plus.add(&k.0.scaled(s)).unwrap(),
                psi_minus: base.psi_minus.add(&k.1.scaled(s)).unwrap(),
            }
        };
        let k1 = self.rhs(field)?;
        let y2 = stage(field, &k1, 0.5 * dt);
        let k2 = self.rhs(&y2)?;
        let y3 = stage(field, &k2, 0.5 * dt);
        let k3 = self.rhs(&y3)?;
        let y4 = stage(field, &k3, dt);
        let k4 = self.rhs(&y4)?;
        let w = dt / 6.0;
        let combine = |a: &VectorField3, k1: &VectorField3, k2: &VectorField3, k3: &VectorField3, k4: &VectorField3| {
            let mut out = a.clone();
            for c in 0..3 {
                for i in 0..out.comps[c].len() {
                    out.comps[c][i] +=
                        (k1.comps[c][i] + (k2.comps[c][i] + k3.comps[c][i]) * 2.0 + k4.comps[c][i])
                            * w;
                }
            }
            out
        };
        Ok(HelicityField {
            grid: field.grid,
            time: field.time + dt,
            psi_plus: combine(&field.psi_plus, &k1.0, &k2.0, &k3.0, &k4.0),
            psi_minus: combine(&field.psi_minus, &k1.1, &k2.1, &k3.1, &k4.1),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cis, vec3_dot};
    use crate::polarization::polarization_vector_cartesian;

    fn grid(n: usize) -> PositionGrid {
        PositionGrid::centered_cube(n, 2.0 * std::f64::consts::PI)
    }

    fn circular_mode(g: PositionGrid, modes: [i64; 3]) -> VectorField3 {
        let k = [g.lattice_k(0, modes[0]), g.lattice_k(1, modes[1]), g.lattice_k(2, modes[2])];
        let e = polarization_vector_cartesian(k);
        VectorField3::from_fn(g, move |r| {
            let ph = cis(vec3_dot(k, r));
            [e[0] * ph, e[1] * ph, e[2] * ph]
        })
    }

    #[test]
    fn vacuum_medium_is_trivial() {
        let g = grid(8);
        let m = vacuum_medium(&g, DerivativeScheme::Rk4Spectral).unwrap();
        assert!(m.is_vacuum());
        assert!(m.constant_impedance());
        assert!(!m.aliasing_warning);
        for axis in 0..3 {
            assert!(m.grad_ln_sqrt_v[axis].iter().all(|&x| x == 0.0));
            assert!(m.grad_ln_sqrt_h[axis].iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn constant_product_gives_uniform_velocity() {
        // eps * mu constant, eps / mu varying: v uniform, h varying.
        let g = grid(8);
        let eps: Vec<f64> = (0..g.num_nodes())
            .map(|i| 1.0 + 0.3 * (g.position(i)[0].sin()))
            .collect();
        let mu: Vec<f64> = eps.iter().map(|&e| 1.0 / e).collect();
        let m = build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Spectral).unwrap();
        for &v in &m.v {
            assert!((v - 1.0).abs() < 1e-12);
        }
        assert!(m.grad_ln_sqrt_v.iter().all(|c| c.iter().all(|&x| x == 0.0)));
        assert!(!m.constant_impedance());
    }

    #[test]
    fn constant_ratio_gives_uniform_impedance() {
        // eps / mu constant, eps * mu varying: h uniform, coupling absent.
        let g = grid(8);
        let eps: Vec<f64> = (0..g.num_nodes())
            .map(|i| 1.0 + 0.25 * (g.position(i)[2].cos()))
            .collect();
        let mu = eps.clone();
        let m = build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Spectral).unwrap();
        for &h in &m.h {
            assert!((h - 1.0).abs() < 1e-12);
        }
        assert!(m.constant_impedance());
        assert!(!m.grad_ln_sqrt_v.iter().all(|c| c.iter().all(|&x| x == 0.0)));
    }

    #[test]
    fn non_positive_medium_rejected() {
        let g = grid(4);
        let mut eps = vec![1.0; g.num_nodes()];
        let mu = vec![1.0; g.num_nodes()];
        eps[3] = -0.5;
        assert!(matches!(
            build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Fd4).unwrap_err(),
            Error::InvalidMedium(_)
        ));
    }

    #[test]
    fn vacuum_rhs_is_monochromatic_law() {
        let g = grid(16);
        let m = vacuum_medium(&g, DerivativeScheme::Rk4Spectral).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Spectral).unwrap();
        let modes = [0i64, 0, 3];
        let omega = g.lattice_k(2, 3);
        let psi = circular_mode(g, modes);
        let field = HelicityField::from_parts(psi.clone(), VectorField3::zeros(g), 0.0).unwrap();
        let (rp, rm) = prop.rhs(&field).unwrap();
        // dPsi+/dt = -i omega Psi+ for a positive-helicity mode.
        let expect = psi.scaled(C64::new(0.0, -omega));
        assert!(crate::grid::relative_l2_difference(&rp, &expect).unwrap() < 1e-12);
        assert!(rm.l2_norm() == 0.0);
    }

    #[test]
    fn constant_impedance_keeps_minus_component_silent() {
        let g = grid(12);
        let eps: Vec<f64> = (0..g.num_nodes())
            .map(|i| 1.2 + 0.2 * (g.position(i)[0].cos()))
            .collect();
        let mu = eps.clone();
        let m = build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Spectral).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Spectral).unwrap();
        let field = HelicityField::from_parts(
            circular_mode(g, [1, 0, 2]),
            VectorField3::zeros(g),
            0.0,
        )
        .unwrap();
        let (_, rm) = prop.rhs(&field).unwrap();
        assert_eq!(rm.l2_norm(), 0.0);
    }

    #[test]
    fn rhs_mirror_symmetry() {
        // Swapping the components and flipping the overall sign exchanges the
        // two equations.
        let g = grid(12);
        let eps: Vec<f64> = (0..g.num_nodes())
            .map(|i| 1.0 + 0.2 * (g.position(i)[1].sin()))
            .collect();
        let mu: Vec<f64> = (0..g.num_nodes())
            .map(|i| 1.0 + 0.1 * (g.position(i)[0].cos()))
            .collect();
        let m = build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Spectral).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Spectral).unwrap();
        let a = circular_mode(g, [1, 0, 2]);
        let b = circular_mode(g, [0, 1, 1]).scaled(C64::new(0.4, 0.3));
        let field = HelicityField::from_parts(a.clone(), b.clone(), 0.0).unwrap();
        let swapped = HelicityField::from_parts(b, a, 0.0).unwrap();
        let (rp, rm) = prop.rhs(&field).unwrap();
        let (sp, sm) = prop.rhs(&swapped).unwrap();
        // rhs_minus(swapped) = -rhs_plus(original) and vice versa.
        let neg_rp = rp.scaled(C64::new(-1.0, 0.0));
        let neg_rm = rm.scaled(C64::new(-1.0, 0.0));
        assert!(crate::grid::relative_l2_difference(&sm, &neg_rp).unwrap() < 1e-13);
        assert!(crate::grid::relative_l2_difference(&sp, &neg_rm).unwrap() < 1e-13);
    }

    #[test]
    fn cfl_violation_detected() {
        let g = grid(8);
        let m = vacuum_medium(&g, DerivativeScheme::Rk4Spectral).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Spectral).unwrap();
        let field = HelicityField::zeros(g, 0.0);
        let config = StepperConfig { dt: Some(10.0), ..Default::default() };
        assert!(matches!(
            prop.evolve(field, &config, 1.0).unwrap_err(),
            Error::CflViolation { .. }
        ));
    }

    #[test]
    fn short_vacuum_evolution_tracks_phase() {
        let g = grid(16);
        let m = vacuum_medium(&g, DerivativeScheme::Rk4Spectral).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Spectral).unwrap();
        let omega = g.lattice_k(2, 2);
        let psi0 = circular_mode(g, [0, 0, 2]);
        let field = HelicityField::from_parts(psi0.clone(), VectorField3::zeros(g), 0.0).unwrap();
        let t_end = 0.5;
        let config = StepperConfig {
            dt: Some(0.02 / omega),
            diag_every: 5,
            ..Default::default()
        };
        let (state, rows) = prop.evolve(field, &config, t_end).unwrap();
        let expect = psi0.scaled(cis(-omega * t_end));
        let err = crate::grid::relative_l2_difference(&state.field.psi_plus, &expect).unwrap();
        assert!(err < 1e-8, "phase evolution error {err}");
        // Energy stays put and the mixing column stays at zero.
        let e0 = rows.first().unwrap().energy;
        let e1 = rows.last().unwrap().energy;
        assert!(((e1 - e0) / e0).abs() < 1e-9);
        assert!(rows.iter().all(|r| r.mixing == 0.0));
    }

    #[test]
    fn nan_state_aborts_with_step_report() {
        let g = grid(8);
        let m = vacuum_medium(&g, DerivativeScheme::Rk4Fd4).unwrap();
        let prop = Propagator::new(m, DerivativeScheme::Rk4Fd4).unwrap();
        let mut psi = circular_mode(g, [0, 0, 1]);
        psi.comps[0][5] = C64::new(f64::NAN, 0.0);
        let field = HelicityField::from_parts(psi, VectorField3::zeros(g), 0.0).unwrap();
        let config = StepperConfig { dt: None, diag_every: 1, ..Default::default() };
        let err = prop.evolve(field, &config, 0.2).unwrap_err();
        assert!(matches!(err, Error::NanDetected { step: 1, .. }), "{err}");
    }

    #[test]
    fn sharp_interface_sets_aliasing_warning() {
        let g = grid(8);
        let mut eps = vec![1.0; g.num_nodes()];
        for i in 0..g.num_nodes() {
            if g.position(i)[2] > 0.0 {
                eps[i] = 2.0;
            }
        }
        let mu = vec![1.0; g.num_nodes()];
        let m = build_medium(&g, &eps, &mu, DerivativeScheme::Rk4Fd4).unwrap();
        assert!(m.aliasing_warning);
    }

    #[test]
    fn mixing_measure_basics() {
        let g = grid(8);
        let plus = circular_mode(g, [0, 0, 1]);
        let pure = HelicityField::from_parts(plus.clone(), VectorField3::zeros(g), 0.0).unwrap();
        assert_eq!(mixing_measure(&pure).unwrap(), 0.0);
        let mixed = HelicityField::from_parts(plus.clone(), plus.scaled(C64::new(0.5, 0.0)), 0.0)
            .unwrap();
        let m = mixing_measure(&mixed).unwrap();
        assert!((m - 0.25 / 1.25).abs() < 1e-12);
        assert!(mixing_measure(&HelicityField::zeros(g, 0.0)).is_err());
    }
}
