//! The ten Poincare generators acting on momentum-representation states:
//! multiplicative energy and momentum, and the angular-momentum / boost
//! family built on the covariant derivative D = d - i lambda alpha(k).
//!
//! Derivative availability follows the sample layout. Azimuthal derivatives
//! are spectral on the uniform phi rings every product layout carries; in the
//! beam gauge the z angular momentum reduces to -i d/dphi because the
//! helicity term cancels against the connection, so J_z is available on all
//! product layouts. The remaining J and N components need all three
//! k-derivatives and are restricted to grid3d layouts, where radial and
//! polar derivatives use sliding Fornberg stencils on the quadrature nodes.

use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::math::{
    derivative_stencils, pairwise_sum_by, C64, CVec3, Vec3,
};
use crate::momentum::{Layout, MomentumWaveFunction, WaveVectorSample};
use crate::polarization::connection_alpha;

/// Generator selector for the ten Poincare generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    H,
    Px,
    Py,
    Pz,
    Jx,
    Jy,
    Jz,
    Nx,
    Ny,
    Nz,
}

impl Generator {
    pub fn as_str(&self) -> &'static str {
        match self {
            Generator::H => "H",
            Generator::Px => "Px",
            Generator::Py => "Py",
            Generator::Pz => "Pz",
            Generator::Jx => "Jx",
            Generator::Jy => "Jy",
            Generator::Jz => "Jz",
            Generator::Nx => "Nx",
            Generator::Ny => "Ny",
            Generator::Nz => "Nz",
        }
    }
}

/// Multiply both helicity components by a real per-sample factor.
fn multiplicative(f: &MomentumWaveFunction, factor: impl Fn(&WaveVectorSample) -> f64) -> MomentumWaveFunction {
    let samples = f.samples();
    f.map_amplitudes(|i, p, m| {
        let c = factor(&samples[i]);
        (p * c, m * c)
    })
}

/// Spectral d/dphi of one amplitude array along each uniform-phi ring of the
/// layout. Rings are contiguous blocks of length n_phi.
fn phi_derivative(layout: Layout, samples: &[WaveVectorSample], amps: &[C64]) -> Result<Vec<C64>> {
    let n_phi = layout.n_phi();
    if n_phi < 2 {
        return Err(Error::ManifoldLacksDerivatives("azimuthal ring too small".into()));
    }
    // Uniform-phi check on the first ring of each block.
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    for ring in 0..samples.len() / n_phi {
        for j in 0..n_phi {
            let expected = j as f64 * dphi;
            let actual = samples[ring * n_phi + j].phi;
            if (actual - expected).abs() > 1e-9 {
                return Err(Error::ManifoldLacksDerivatives(
                    "nonuniform azimuthal grid; spectral d/dphi unavailable".into(),
                ));
            }
        }
    }
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n_phi);
    let inv = planner.plan_fft_inverse(n_phi);
    let mut out = vec![C64::default(); amps.len()];
    let mut buf = vec![C64::default(); n_phi];
    for ring in 0..amps.len() / n_phi {
        let base = ring * n_phi;
        buf.copy_from_slice(&amps[base..base + n_phi]);
        fwd.process(&mut buf);
        for (j, z) in buf.iter_mut().enumerate() {
            let m = if j <= n_phi / 2 { j as i64 } else { j as i64 - n_phi as i64 };
            // Zero the unpaired Nyquist mode.
            let m = if n_phi % 2 == 0 && j == n_phi / 2 { 0 } else { m };
            *z *= C64::new(0.0, m as f64);
        }
        inv.process(&mut buf);
        let scale = 1.0 / n_phi as f64;
        for j in 0..n_phi {
            out[base + j] = buf[j] * scale;
        }
    }
    Ok(out)
}

/// Validated product-grid view of a grid3d layout.
struct Grid3dView {
    n_k: usize,
    n_theta: usize,
    n_phi: usize,
    k_nodes: Vec<f64>,
    theta_nodes: Vec<f64>,
}

impl Grid3dView {
    fn new(f: &MomentumWaveFunction) -> Result<Self> {
        let Some(Layout::Grid3d { n_k, n_theta, n_phi }) = f.layout() else {
            return Err(Error::ManifoldLacksDerivatives(
                "operator needs k and theta derivatives; only grid3d layouts carry them".into(),
            ));
        };
        let samples = f.samples();
        let k_nodes: Vec<f64> =
            (0..n_k).map(|i| samples[(i * n_theta) * n_phi].k).collect();
        let theta_nodes: Vec<f64> = (0..n_theta).map(|j| samples[j * n_phi].theta).collect();
        // Defensive product-structure check.
        for i in 0..n_k {
            for j in 0..n_theta {
                let s = &samples[(i * n_theta + j) * n_phi];
                if (s.k - k_nodes[i]).abs() > 1e-9 || (s.theta - theta_nodes[j]).abs() > 1e-9 {
                    return Err(Error::ManifoldLacksDerivatives(
                        "samples do not form a (k, theta, phi) product grid".into(),
                    ));
                }
            }
        }
        Ok(Self { n_k, n_theta, n_phi, k_nodes, theta_nodes })
    }

    #[inline]
    fn index(&self, ik: usize, it: usize, ip: usize) -> usize {
        (ik * self.n_theta + it) * self.n_phi + ip
    }
}

/// Cartesian momentum-space gradient of one amplitude array on a grid3d
/// layout: spherical chain rule with Fornberg stencils in k and theta and a
/// spectral derivative in phi.
fn cartesian_gradient(
    f: &MomentumWaveFunction,
    view: &Grid3dView,
    amps: &[C64],
) -> Result<Vec<CVec3>> {
    let samples = f.samples();
    let n = amps.len();
    let k_stencils = derivative_stencils(&view.k_nodes);
    let t_stencils = derivative_stencils(&view.theta_nodes);

    let mut dk = vec![C64::default(); n];
    let mut dt = vec![C64::default(); n];
    for ik in 0..view.n_k {
        let (klo, kw) = &k_stencils[ik];
        for it in 0..view.n_theta {
            let (tlo, tw) = &t_stencils[it];
            for ip in 0..view.n_phi {
                let idx = view.index(ik, it, ip);
                let mut dv = C64::default();
                for (off, w) in kw.iter().enumerate() {
                    dv += amps[view.index(klo + off, it, ip)] * *w;
                }
                dk[idx] = dv;
                let mut tv = C64::default();
                for (off, w) in tw.iter().enumerate() {
                    tv += amps[view.index(ik, tlo + off, ip)] * *w;
                }
                dt[idx] = tv;
            }
        }
    }
    let dphi = phi_derivative(f.layout().unwrap(), samples, amps)?;

    let mut out = vec![[C64::default(); 3]; n];
    for (i, s) in samples.iter().enumerate() {
        let (st, ct) = s.theta.sin_cos();
        if st.abs() < crate::polarization::AXIS_SIN_TOL {
            return Err(Error::AxisSingular(st));
        }
        let (sp, cp) = s.phi.sin_cos();
        let e_k = [st * cp, st * sp, ct];
        let e_t = [ct * cp, ct * sp, -st];
        let e_p = [-sp, cp, 0.0];
        let inv_k = 1.0 / s.k;
        let inv_ks = 1.0 / (s.k * st);
        for axis in 0..3 {
            out[i][axis] =
                dk[i] * e_k[axis] + dt[i] * (e_t[axis] * inv_k) + dphi[i] * (e_p[axis] * inv_ks);
        }
    }
    Ok(out)
}

/// Covariant derivative D f_lambda = grad f_lambda - i lambda alpha f_lambda
/// per sample, for one helicity component.
fn covariant_derivative(
    f: &MomentumWaveFunction,
    view: &Grid3dView,
    amps: &[C64],
    lambda: f64,
) -> Result<Vec<CVec3>> {
    let mut grad = cartesian_gradient(f, view, amps)?;
    let i_unit = C64::new(0.0, 1.0);
    for (q, s) in f.samples().iter().enumerate() {
        let alpha = connection_alpha(s.k, s.theta, s.phi)?;
        for axis in 0..3 {
            grad[q][axis] -= i_unit * lambda * alpha[axis] * amps[q];
        }
    }
    Ok(grad)
}

/// Full J or N vector action on one helicity component (grid3d layouts).
/// Returns the three Cartesian component arrays.
fn j_or_n_full(
    f: &MomentumWaveFunction,
    view: &Grid3dView,
    amps: &[C64],
    lambda: f64,
    boost: bool,
) -> Result<[Vec<C64>; 3]> {
    let d = covariant_derivative(f, view, amps, lambda)?;
    let n = amps.len();
    let mut out = [vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]];
    let i_unit = C64::new(0.0, 1.0);
    for (q, s) in f.samples().iter().enumerate() {
        if boost {
            // N = i omega D.
            let w = s.omega();
            for axis in 0..3 {
                out[axis][q] = i_unit * w * d[q][axis];
            }
        } else {
            // J = -i k x D + lambda n_k.
            let k = s.wave_vector();
            let cross = [
                k[1] * d[q][2] - k[2] * d[q][1],
                k[2] * d[q][0] - k[0] * d[q][2],
                k[0] * d[q][1] - k[1] * d[q][0],
            ];
            let nk = s.unit();
            for axis in 0..3 {
                out[axis][q] = -i_unit * cross[axis] + lambda * nk[axis] * amps[q];
            }
        }
    }
    Ok(out)
}

/// Apply a Poincare generator, returning a new state on the same support.
pub fn apply_generator(f: &MomentumWaveFunction, g: Generator) -> Result<MomentumWaveFunction> {
    match g {
        Generator::H => Ok(multiplicative(f, |s| s.omega())),
        Generator::Px => Ok(multiplicative(f, |s| s.wave_vector()[0])),
        Generator::Py => Ok(multiplicative(f, |s| s.wave_vector()[1])),
        Generator::Pz => Ok(multiplicative(f, |s| s.wave_vector()[2])),
        Generator::Jz => {
            let layout = f.layout().ok_or_else(|| {
                Error::ManifoldLacksDerivatives(
                    "J_z needs an azimuthal product layout".into(),
                )
            })?;
            // Beam gauge: the helicity term cancels the connection term, so
            // J_z = -i d/dphi on both components.
            let dp = phi_derivative(layout, f.samples(), f.amp_plus())?;
            let dm = phi_derivative(layout, f.samples(), f.amp_minus())?;
            let i_unit = C64::new(0.0, 1.0);
            Ok(f.map_amplitudes(|i, _, _| (-i_unit * dp[i], -i_unit * dm[i])))
        }
        Generator::Jx | Generator::Jy => {
            let view = Grid3dView::new(f)?;
            let axis = if g == Generator::Jx { 0 } else { 1 };
            let plus = j_or_n_full(f, &view, f.amp_plus(), 1.0, false)?;
            let minus = j_or_n_full(f, &view, f.amp_minus(), -1.0, false)?;
            Ok(f.map_amplitudes(|i, _, _| (plus[axis][i], minus[axis][i])))
        }
        Generator::Nx | Generator::Ny | Generator::Nz => {
            let view = Grid3dView::new(f)?;
            let axis = match g {
                Generator::Nx => 0,
                Generator::Ny => 1,
                _ => 2,
            };
            let plus = j_or_n_full(f, &view, f.amp_plus(), 1.0, true)?;
            let minus = j_or_n_full(f, &view, f.amp_minus(), -1.0, true)?;
            Ok(f.map_amplitudes(|i, _, _| (plus[axis][i], minus[axis][i])))
        }
    }
}

/// J_z via the full covariant formula instead of the reduced -i d/dphi;
/// cross-validation path for grid3d layouts.
pub fn apply_jz_covariant(f: &MomentumWaveFunction) -> Result<MomentumWaveFunction> {
    let view = Grid3dView::new(f)?;
    let plus = j_or_n_full(f, &view, f.amp_plus(), 1.0, false)?;
    let minus = j_or_n_full(f, &view, f.amp_minus(), -1.0, false)?;
    Ok(f.map_amplitudes(|i, _, _| (plus[2][i], minus[2][i])))
}

/// Expectation value <f| g f> / <f|f>, reported per unit norm.
///
/// The imaginary part is a Hermiticity diagnostic and is discarded; it
/// vanishes to machine precision for H, P, and J_z and to quadrature
/// accuracy for the stencil-based components.
pub fn expectation_value(f: &MomentumWaveFunction, g: Generator) -> Result<f64> {
    Ok(expectation_complex(f, g)?.re)
}

/// Expectation value with its residual imaginary part.
pub fn expectation_complex(f: &MomentumWaveFunction, g: Generator) -> Result<C64> {
    let gf = apply_generator(f, g)?;
    let num = crate::momentum::scalar_product(f, &gf)?;
    let den = f.norm_sq();
    if den <= 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(num / den)
}

/// Relative eigen-residual ||g f - value f|| / ||f|| in the scalar-product
/// norm.
pub fn eigen_residual(f: &MomentumWaveFunction, g: Generator, value: f64) -> Result<f64> {
    let gf = apply_generator(f, g)?;
    let samples = f.samples();
    let num = pairwise_sum_by(f.len(), |i| {
        samples[i].weight
            * ((gf.amp_plus()[i] - f.amp_plus()[i] * value).norm_sqr()
                + (gf.amp_minus()[i] - f.amp_minus()[i] * value).norm_sqr())
    })
    .sqrt();
    let den = f.norm_sq().sqrt();
    if den == 0.0 {
        return Err(Error::ZeroState);
    }
    Ok(num / den)
}

/// Orbital/spin decomposition of the angular momentum along z, available on
/// every product layout: L_z = <-i d/dphi> - lambda <cos theta>, S_z =
/// lambda <cos theta>, each summed over helicities and per unit norm.
pub fn angular_momentum_z_split(f: &MomentumWaveFunction) -> Result<(f64, f64)> {
    let layout = f.layout().ok_or_else(|| {
        Error::ManifoldLacksDerivatives("orbital split needs a product layout".into())
    })?;
    let den = f.norm_sq();
    if den <= 0.0 {
        return Err(Error::ZeroState);
    }
    let samples = f.samples();
    let mut lz = 0.0;
    let mut sz = 0.0;
    for (amps, lambda) in [(f.amp_plus(), 1.0), (f.amp_minus(), -1.0)] {
        let dphi = phi_derivative(layout, samples, amps)?;
        let i_unit = C64::new(0.0, 1.0);
        let orbital: C64 = pairwise_sum_by(f.len(), |q| {
            let w = samples[q].weight;
            let ct = samples[q].theta.cos();
            // -i d/dphi minus the connection term lambda cos(theta).
            (amps[q].conj() * (-i_unit * dphi[q] - lambda * ct * amps[q])) * w
        });
        let spin: f64 = pairwise_sum_by(f.len(), |q| {
            lambda * samples[q].theta.cos() * amps[q].norm_sqr() * samples[q].weight
        });
        lz += orbital.re;
        sz += spin;
    }
    Ok((lz / den, sz / den))
}

/// Full orbital/spin expectation split (L, S) on grid3d layouts:
/// L = <-i k x D> and S = sum_lambda lambda <n_k> per unit norm, so that
/// L + S = <J>.
pub fn orbital_spin_split(f: &MomentumWaveFunction) -> Result<(Vec3, Vec3)> {
    let view = Grid3dView::new(f)?;
    let den = f.norm_sq();
    if den <= 0.0 {
        return Err(Error::ZeroState);
    }
    let samples = f.samples();
    let mut l = [0.0; 3];
    let mut s = [0.0; 3];
    let i_unit = C64::new(0.0, 1.0);
    for (amps, lambda) in [(f.amp_plus(), 1.0), (f.amp_minus(), -1.0)] {
        let d = covariant_derivative(f, &view, amps, lambda)?;
        for axis in 0..3 {
            let orbital: C64 = pairwise_sum_by(f.len(), |q| {
                let k = samples[q].wave_vector();
                let cross = [
                    k[1] * d[q][2] - k[2] * d[q][1],
                    k[2] * d[q][0] - k[0] * d[q][2],
                    k[0] * d[q][1] - k[1] * d[q][0],
                ];
                amps[q].conj() * (-i_unit * cross[axis]) * samples[q].weight
            });
            let spin: f64 = pairwise_sum_by(f.len(), |q| {
                lambda * samples[q].unit()[axis] * amps[q].norm_sqr() * samples[q].weight
            });
            l[axis] += orbital.re;
            s[axis] += spin;
        }
    }
    for axis in 0..3 {
        l[axis] /= den;
        s[axis] /= den;
    }
    Ok((l, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{beam_bessel, beam_exponential, beam_laguerre_gauss, product_grid3d, BeamSpec, Helicity};
    use crate::math::cis;
    use crate::momentum::scalar_product;

    fn bessel(m: i32, omega: f64, qz: f64) -> MomentumWaveFunction {
        beam_bessel(&BeamSpec::Bessel { m, omega, qz, helicity: Helicity::Plus }, 32).unwrap()
    }

    #[test]
    fn bessel_energy_and_momentum_eigenstates() {
        let f = bessel(2, 1.3, 0.6);
        assert!(eigen_residual(&f, Generator::H, 1.3).unwrap() < 1e-12);
        assert!(eigen_residual(&f, Generator::Pz, 0.6).unwrap() < 1e-12);
    }

    #[test]
    fn bessel_jz_eigenvalues_across_m() {
        for m in -3..=3 {
            let f = bessel(m, 1.0, 0.4);
            let r = eigen_residual(&f, Generator::Jz, m as f64).unwrap();
            assert!(r < 1e-8, "M = {m}: residual {r}");
        }
    }

    #[test]
    fn wrong_jz_eigenvalue_is_order_one() {
        let f = bessel(1, 1.0, 0.4);
        let r = eigen_residual(&f, Generator::Jz, 2.0).unwrap();
        assert!(r > 0.99, "sanity residual {r}");
    }

    #[test]
    fn expectation_h_matches_trapezoid_oracle() {
        // <H> of an exponential beam as the ratio of two radial integrals.
        let m = 1i32;
        let qz = 0.8;
        let tau = 1.4;
        let f = beam_exponential(
            &BeamSpec::Exponential { m, qz, tau, helicity: Helicity::Plus },
            64,
            16,
        )
        .unwrap();
        let got = expectation_value(&f, Generator::H).unwrap();

        // Independent fine trapezoid in k_perp:
        // num = int kp^{2M+1} e^{-2 k tau} / k^2 dkp, den = same with /k^3.
        let n = 400_000;
        let kp_max = 12.0;
        let h = kp_max / n as f64;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..=n {
            let kp = i as f64 * h;
            let k = (kp * kp + qz * qz).sqrt();
            let common = kp.powi(2 * m + 1) * (-2.0 * k * tau).exp();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            num += w * common / (k * k);
            den += w * common / (k * k * k);
        }
        let oracle = num / den;
        assert!(
            (got - oracle).abs() / oracle < 1e-6,
            "<H> = {got} vs oracle {oracle}"
        );
    }

    #[test]
    fn jz_expectation_equals_m_for_beams() {
        let lg = beam_laguerre_gauss(
            &BeamSpec::LaguerreGauss {
                m: 2,
                n: 1,
                paraxial_omega: 2.0,
                width: 2.0,
                helicity: Helicity::Minus,
            },
            32,
            16,
        )
        .unwrap();
        assert!((expectation_value(&lg, Generator::Jz).unwrap() - 2.0).abs() < 1e-10);
        let ex = beam_exponential(
            &BeamSpec::Exponential { m: 1, qz: 0.5, tau: 1.0, helicity: Helicity::Plus },
            32,
            16,
        )
        .unwrap();
        assert!((expectation_value(&ex, Generator::Jz).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn transverse_momentum_vanishes_for_axisymmetric_beams() {
        let f = beam_exponential(
            &BeamSpec::Exponential { m: 2, qz: 0.7, tau: 1.2, helicity: Helicity::Plus },
            24,
            16,
        )
        .unwrap();
        assert!(expectation_value(&f, Generator::Px).unwrap().abs() < 1e-12);
        assert!(expectation_value(&f, Generator::Py).unwrap().abs() < 1e-12);
        assert!(expectation_value(&f, Generator::Pz).unwrap() > 0.0);
    }

    #[test]
    fn hermiticity_on_disc_states() {
        // <g f | h> = <f | g h> for H, Pz, Jz on two different disc states.
        let f = beam_exponential(
            &BeamSpec::Exponential { m: 1, qz: 0.6, tau: 1.0, helicity: Helicity::Plus },
            24,
            16,
        )
        .unwrap();
        // A second state on the same support with mixed components.
        let h = f.map_amplitudes(|i, p, _| {
            let s = &f.samples()[i];
            (p * cis(2.0 * s.phi) * s.k, C64::new(0.3, -0.2) * cis(-s.phi))
        });
        for g in [Generator::H, Generator::Pz, Generator::Jz] {
            let gf = apply_generator(&f, g).unwrap();
            let gh = apply_generator(&h, g).unwrap();
            let lhs = scalar_product(&gf, &h).unwrap();
            let rhs = scalar_product(&f, &gh).unwrap();
            let scale = lhs.norm().max(1.0);
            assert!(
                (lhs - rhs).norm() / scale < 1e-8,
                "{}: {lhs} vs {rhs}",
                g.as_str()
            );
        }
    }

    fn gaussian_packet() -> MomentumWaveFunction {
        // Smooth grid3d state, concentrated near theta = pi/3, k = 2.
        product_grid3d(20, 0.8, 3.5, 24, 16, |s| {
            let radial = (-((s.k - 2.0) / 0.4).powi(2)).exp();
            let angular = (-((s.theta - 1.0) / 0.35).powi(2)).exp();
            (radial * angular * cis(s.phi), C64::default())
        })
        .unwrap()
    }

    #[test]
    fn jz_covariant_matches_spectral_reduction() {
        let f = gaussian_packet();
        let spectral = apply_generator(&f, Generator::Jz).unwrap();
        let full = apply_jz_covariant(&f).unwrap();
        let d = crate::momentum::state_distance(&spectral, &full).unwrap();
        let scale = f.norm_sq().sqrt();
        assert!(d / scale < 1e-10, "distance {d}");
    }

    #[test]
    fn j_projected_on_momentum_direction_is_helicity() {
        // (J . n_k) f = lambda f pointwise; checked through the full J action.
        let f = gaussian_packet();
        let jx = apply_generator(&f, Generator::Jx).unwrap();
        let jy = apply_generator(&f, Generator::Jy).unwrap();
        let jz = apply_generator(&f, Generator::Jz).unwrap();
        let mut worst = 0.0f64;
        for (q, s) in f.samples().iter().enumerate() {
            let n = s.unit();
            let proj = jx.amp_plus()[q] * n[0] + jy.amp_plus()[q] * n[1] + jz.amp_plus()[q] * n[2];
            worst = worst.max((proj - f.amp_plus()[q]).norm());
        }
        assert!(worst < 1e-9, "worst pointwise residual {worst}");
    }

    #[test]
    fn boost_expectation_is_hermitian_to_quadrature_accuracy() {
        let f = gaussian_packet();
        let v = expectation_complex(&f, Generator::Nz).unwrap();
        assert!(v.im.abs() < 1e-4 * (1.0 + v.re.abs()), "imag part {}", v.im);
    }

    #[test]
    fn ring_rejects_boost_and_transverse_j() {
        let f = bessel(1, 1.0, 0.3);
        assert!(matches!(
            apply_generator(&f, Generator::Jx).unwrap_err(),
            Error::ManifoldLacksDerivatives(_)
        ));
        assert!(matches!(
            apply_generator(&f, Generator::Nz).unwrap_err(),
            Error::ManifoldLacksDerivatives(_)
        ));
    }

    #[test]
    fn orbital_plus_spin_equals_total_jz() {
        let lg = beam_laguerre_gauss(
            &BeamSpec::LaguerreGauss {
                m: 2,
                n: 0,
                paraxial_omega: 2.0,
                width: 2.0,
                helicity: Helicity::Plus,
            },
            32,
            16,
        )
        .unwrap();
        let (lz, sz) = angular_momentum_z_split(&lg).unwrap();
        let jz = expectation_value(&lg, Generator::Jz).unwrap();
        assert!((lz + sz - jz).abs() < 1e-6, "Lz = {lz}, Sz = {sz}, Jz = {jz}");
        assert!((jz - 2.0).abs() < 1e-8);
    }

    #[test]
    fn full_split_consistent_with_axial_split() {
        let f = gaussian_packet();
        let (l, s) = orbital_spin_split(&f).unwrap();
        let (lz, sz) = angular_momentum_z_split(&f).unwrap();
        assert!((l[2] - lz).abs() < 1e-8);
        assert!((s[2] - sz).abs() < 1e-12);
        // L + S along z equals <Jz>.
        let jz = expectation_value(&f, Generator::Jz).unwrap();
        assert!((l[2] + s[2] - jz).abs() < 1e-8);
    }

    #[test]
    fn spin_aligns_with_axis_for_forward_packet() {
        // Pure-plus packet concentrated near k parallel to z.
        let f = product_grid3d(16, 1.5, 2.5, 24, 12, |s| {
            let radial = (-((s.k - 2.0) / 0.3).powi(2)).exp();
            let angular = (-(s.theta / 0.15).powi(2)).exp();
            (radial * angular * cis(s.phi), C64::default())
        })
        .unwrap();
        let (_, s) = orbital_spin_split(&f).unwrap();
        assert!(s[0].abs() < 1e-10 && s[1].abs() < 1e-10);
        assert!(s[2] > 0.95 && s[2] <= 1.0 + 1e-12, "S_z = {}", s[2]);
    }

    #[test]
    fn parity_mirror_flips_spin() {
        // Swapping the helicity components flips the sign of S.
        let f = product_grid3d(8, 1.0, 2.0, 12, 8, |s| {
            let a = (-((s.k - 1.5) / 0.4).powi(2)).exp() * (-((s.theta - 0.9) / 0.4).powi(2)).exp();
            (a * cis(s.phi), C64::default())
        })
        .unwrap();
        let mirrored = f.apply_rho(crate::momentum::RhoMatrix::Rho1);
        let (_, s1) = orbital_spin_split(&f).unwrap();
        let (_, s2) = orbital_spin_split(&mirrored).unwrap();
        for axis in 0..3 {
            assert!((s1[axis] + s2[axis]).abs() < 1e-12);
        }
    }
}
