//! Photon states in the momentum representation: two-component helicity
//! amplitudes sampled on a reduced quadrature manifold, with the invariant
//! scalar product, helicity matrices, translation phases, and the discrete
//! symmetries.
//!
//! A state stores one complex amplitude per helicity per wave-vector sample.
//! The quadrature weight attached to each sample approximates the invariant
//! measure d3k/k, so sums over samples stand in for the light-cone integrals.

use crate::error::{Error, Result};
use crate::math::{cis, pairwise_sum_by, vec3_dot, wrap_angle, C64, Vec3};

/// Tolerance used when matching two supports sample by sample.
const SUPPORT_TOL: f64 = 1e-12;

/// One wave-vector sample in spherical coordinates plus its quadrature
/// weight for the invariant measure d3k/k = k dk sin(theta) dtheta dphi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveVectorSample {
    /// Wave-vector magnitude, > 0.
    pub k: f64,
    /// Polar angle in [0, pi].
    pub theta: f64,
    /// Azimuthal angle in [0, 2 pi).
    pub phi: f64,
    /// Quadrature weight, >= 0.
    pub weight: f64,
}

impl WaveVectorSample {
    pub fn new(k: f64, theta: f64, phi: f64, weight: f64) -> Self {
        Self { k, theta, phi, weight }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0) || !self.k.is_finite() {
            return Err(Error::InvalidQuadrature(format!("k = {} must be positive", self.k)));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(Error::InvalidQuadrature(format!("theta = {} out of [0, pi]", self.theta)));
        }
        if !(0.0..2.0 * std::f64::consts::PI).contains(&self.phi) {
            return Err(Error::InvalidQuadrature(format!("phi = {} out of [0, 2 pi)", self.phi)));
        }
        if !(self.weight >= 0.0) || !self.weight.is_finite() {
            return Err(Error::InvalidQuadrature(format!("weight = {} must be >= 0", self.weight)));
        }
        Ok(())
    }

    /// Photon frequency; natural units (c = 1) make it equal to |k|.
    #[inline]
    pub fn omega(&self) -> f64 {
        self.k
    }

    /// Unit propagation direction n_k.
    #[inline]
    pub fn unit(&self) -> Vec3 {
        crate::math::direction(self.theta, self.phi)
    }

    /// Cartesian wave vector.
    #[inline]
    pub fn wave_vector(&self) -> Vec3 {
        crate::math::vec3_scale(self.unit(), self.k)
    }

    /// Transverse wave number k sin(theta).
    #[inline]
    pub fn k_perp(&self) -> f64 {
        self.k * self.theta.sin()
    }

    /// Longitudinal wave number k cos(theta).
    #[inline]
    pub fn k_z(&self) -> f64 {
        self.k * self.theta.cos()
    }
}

/// Which delta functions were analytically reduced out of the state.
///
/// `Ring` states (two deltas reduced: frequency and k_z) are delta-normalized
/// and flagged non-normalizable; `Disc` (one delta) and `Grid3d` (none) carry
/// a finite reduced norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ManifoldKind {
    Ring,
    Disc,
    Grid3d,
}

impl ManifoldKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ManifoldKind::Ring => "ring",
            ManifoldKind::Disc => "disc",
            ManifoldKind::Grid3d => "grid3d",
        }
    }

    pub fn from_str(s: &str) -> Result<Self> {
        match s {
            "ring" => Ok(ManifoldKind::Ring),
            "disc" => Ok(ManifoldKind::Disc),
            "grid3d" => Ok(ManifoldKind::Grid3d),
            other => Err(Error::InvalidField(format!("unknown manifold tag '{other}'"))),
        }
    }
}

/// Fixed quantum numbers absorbed by the delta reduction.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ReducedParams {
    pub omega: Option<f64>,
    pub qz: Option<f64>,
    /// Frequency scale tying k_z to k_perp on paraxial-family discs.
    pub paraxial_omega: Option<f64>,
}

/// Product structure of the sample set, when it has one. Derivative-based
/// operators (J, N, orbital split) need this; states assembled from scattered
/// samples (e.g. lattice-locked beams) leave it unset and support only
/// multiplicative operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    /// Samples indexed by i_phi on a uniform azimuthal grid.
    Ring { n_phi: usize },
    /// Samples indexed by i_radial * n_phi + i_phi.
    Disc { n_radial: usize, n_phi: usize },
    /// Samples indexed by (i_k * n_theta + i_theta) * n_phi + i_phi.
    Grid3d { n_k: usize, n_theta: usize, n_phi: usize },
}

impl Layout {
    pub fn n_phi(&self) -> usize {
        match *self {
            Layout::Ring { n_phi } => n_phi,
            Layout::Disc { n_phi, .. } => n_phi,
            Layout::Grid3d { n_phi, .. } => n_phi,
        }
    }

    pub fn total(&self) -> usize {
        match *self {
            Layout::Ring { n_phi } => n_phi,
            Layout::Disc { n_radial, n_phi } => n_radial * n_phi,
            Layout::Grid3d { n_k, n_theta, n_phi } => n_k * n_theta * n_phi,
        }
    }
}

/// Two-component photon wave function in the momentum representation.
#[derive(Debug, Clone)]
pub struct MomentumWaveFunction {
    pub(crate) samples: Vec<WaveVectorSample>,
    pub(crate) amp_plus: Vec<C64>,
    pub(crate) amp_minus: Vec<C64>,
    pub(crate) manifold: ManifoldKind,
    pub(crate) reduced: ReducedParams,
    pub(crate) layout: Option<Layout>,
}

/// Dirac's rho matrices acting on the two helicity components; numerically
/// the Pauli matrices. Rho3 is the helicity sign operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhoMatrix {
    Rho1,
    Rho2,
    Rho3,
}

/// Discrete symmetry selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscreteSymmetry {
    Parity,
    TimeReversal,
}

impl MomentumWaveFunction {
    /// Build a validated state from samples and per-sample amplitudes.
    pub fn new(
        samples: Vec<WaveVectorSample>,
        amp_plus: Vec<C64>,
        amp_minus: Vec<C64>,
        manifold: ManifoldKind,
        reduced: ReducedParams,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySupport);
        }
        if amp_plus.len() != samples.len() {
            return Err(Error::MismatchedLengths(samples.len(), amp_plus.len()));
        }
        if amp_minus.len() != samples.len() {
            return Err(Error::MismatchedLengths(samples.len(), amp_minus.len()));
        }
        for s in &samples {
            s.validate()?;
        }
        for (i, (p, m)) in amp_plus.iter().zip(amp_minus.iter()).enumerate() {
            if !p.re.is_finite() || !p.im.is_finite() || !m.re.is_finite() || !m.im.is_finite() {
                return Err(Error::NonFiniteAmplitude(i));
            }
        }
        Ok(Self { samples, amp_plus, amp_minus, manifold, reduced, layout: None })
    }

    /// Attach a product layout; the sample count must match.
    pub fn with_layout(mut self, layout: Layout) -> Result<Self> {
        if layout.total() != self.samples.len() {
            return Err(Error::MismatchedLengths(self.samples.len(), layout.total()));
        }
        self.layout = Some(layout);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[WaveVectorSample] {
        &self.samples
    }

    pub fn amp_plus(&self) -> &[C64] {
        &self.amp_plus
    }

    pub fn amp_minus(&self) -> &[C64] {
        &self.amp_minus
    }

    pub fn manifold(&self) -> ManifoldKind {
        self.manifold
    }

    pub fn reduced_params(&self) -> ReducedParams {
        self.reduced
    }

    pub fn layout(&self) -> Option<Layout> {
        self.layout
    }

    /// Ring-manifold states are delta-normalized and cannot be normalized.
    pub fn is_normalizable(&self) -> bool {
        self.manifold != ManifoldKind::Ring
    }

    /// True when both states live on the same sample set and manifold.
    pub fn same_support(&self, other: &Self) -> bool {
        if self.manifold != other.manifold || self.samples.len() != other.samples.len() {
            return false;
        }
        self.samples.iter().zip(other.samples.iter()).all(|(a, b)| {
            (a.k - b.k).abs() <= SUPPORT_TOL
                && (a.theta - b.theta).abs() <= SUPPORT_TOL
                && (a.phi - b.phi).abs() <= SUPPORT_TOL
                && (a.weight - b.weight).abs() <= SUPPORT_TOL
        })
    }

    /// Map both amplitude arrays in place (per-sample, same closure).
    pub fn map_amplitudes<F>(&self, mut f: F) -> Self
    where
        F: FnMut(usize, C64, C64) -> (C64, C64),
    {
        let mut out = self.clone();
        for i in 0..self.len() {
            let (p, m) = f(i, self.amp_plus[i], self.amp_minus[i]);
            out.amp_plus[i] = p;
            out.amp_minus[i] = m;
        }
        out
    }

    /// Uniform complex rescaling of both components.
    pub fn scaled(&self, factor: C64) -> Self {
        self.map_amplitudes(|_, p, m| (p * factor, m * factor))
    }

    /// Squared norm under the invariant scalar product (of the reduced state).
    pub fn norm_sq(&self) -> f64 {
        pairwise_sum_by(self.len(), |i| {
            self.samples[i].weight
                * (self.amp_plus[i].norm_sqr() + self.amp_minus[i].norm_sqr())
        })
    }

    /// Rescale to unit norm.
    ///
    /// Fails for ring-manifold (delta-normalized) states and for the zero
    /// state; the result has norm 1 to machine precision.
    pub fn normalize(&self) -> Result<Self> {
        if !self.is_normalizable() {
            return Err(Error::NonNormalizable(
                "ring manifold states are delta-normalized".into(),
            ));
        }
        let n2 = self.norm_sq();
        if n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    /// Componentwise action of a rho matrix.
    pub fn apply_rho(&self, which: RhoMatrix) -> Self {
        let i = C64::new(0.0, 1.0);
        match which {
            RhoMatrix::Rho1 => self.map_amplitudes(|_, p, m| (m, p)),
            RhoMatrix::Rho2 => self.map_amplitudes(|_, p, m| (-i * m, i * p)),
            RhoMatrix::Rho3 => self.map_amplitudes(|_, p, m| (p, -m)),
        }
    }

    /// The helicity sign operator (rho3).
    pub fn helicity_sign(&self) -> Self {
        self.apply_rho(RhoMatrix::Rho3)
    }

    /// Translation phase law: f'(k) = exp(i (k.r0 - omega t0)) f(k).
    pub fn translate_phase(&self, displacement: Vec3, time: f64) -> Self {
        self.map_amplitudes(|i, p, m| {
            let s = &self.samples[i];
            let phase = cis(vec3_dot(s.wave_vector(), displacement) - s.omega() * time);
            (p * phase, m * phase)
        })
    }

    /// Space or time reflection. Both swap the helicity components and move
    /// amplitudes to the inverted wave vector; time reversal also conjugates.
    ///
    /// The sample set must be closed under k -> -k (the amplitudes are then
    /// re-indexed onto the original samples, keeping supports comparable);
    /// otherwise this fails rather than resampling.
    pub fn discrete_symmetry(&self, which: DiscreteSymmetry) -> Result<Self> {
        let inv = self.inversion_permutation().ok_or(Error::SupportNotClosed)?;
        let mut out = self.clone();
        for p in 0..self.len() {
            let src = inv[p];
            let (fp, fm) = (self.amp_plus[src], self.amp_minus[src]);
            // New state at sample p takes the opposite component from -k_p.
            let (gp, gm) = match which {
                DiscreteSymmetry::Parity => (fm, fp),
                DiscreteSymmetry::TimeReversal => (fm.conj(), fp.conj()),
            };
            out.amp_plus[p] = gp;
            out.amp_minus[p] = gm;
        }
        if which == DiscreteSymmetry::Parity {
            if let Some(qz) = out.reduced.qz {
                out.reduced.qz = Some(-qz);
            }
        }
        Ok(out)
    }

    /// For each sample index p, the index of the sample at -k_p, if the
    /// support is closed under inversion.
    fn inversion_permutation(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut perm = vec![usize::MAX; n];
        for p in 0..n {
            let s = &self.samples[p];
            let ti = std::f64::consts::PI - s.theta;
            let pi_ = wrap_angle(s.phi + std::f64::consts::PI);
            let mut found = None;
            for (q, c) in self.samples.iter().enumerate() {
                let dphi = {
                    let raw = (c.phi - pi_).abs();
                    raw.min(2.0 * std::f64::consts::PI - raw)
                };
                if (c.k - s.k).abs() <= 1e-9 * s.k.max(1.0)
                    && (c.theta - ti).abs() <= 1e-9
                    && dphi <= 1e-9
                {
                    found = Some(q);
                    break;
                }
            }
            perm[p] = found?;
        }
        Some(perm)
    }
}

/// Invariant scalar product <f|g> = sum_lambda sum_q w_q f*_lambda g_lambda.
pub fn scalar_product(f: &MomentumWaveFunction, g: &MomentumWaveFunction) -> Result<C64> {
    if !f.same_support(g) {
        return Err(Error::IncompatibleSupports(
            "scalar product requires identical sample sets and manifold".into(),
        ));
    }
    Ok(pairwise_sum_by(f.len(), |i| {
        let w = f.samples[i].weight;
        (f.amp_plus[i].conj() * g.amp_plus[i] + f.amp_minus[i].conj() * g.amp_minus[i]) * w
    }))
}

/// L2 distance between two states on the same support.
pub fn state_distance(f: &MomentumWaveFunction, g: &MomentumWaveFunction) -> Result<f64> {
    if !f.same_support(g) {
        return Err(Error::IncompatibleSupports("distance requires identical supports".into()));
    }
    Ok(pairwise_sum_by(f.len(), |i| {
        f.samples[i].weight
            * ((f.amp_plus[i] - g.amp_plus[i]).norm_sqr()
                + (f.amp_minus[i] - g.amp_minus[i]).norm_sqr())
    })
    .sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring_state(n: usize, m: i32) -> MomentumWaveFunction {
        // Uniform ring at k = 1, theta = pi/2, amplitudes exp(i m phi).
        let dphi = 2.0 * std::f64::consts::PI / n as f64;
        let samples: Vec<WaveVectorSample> = (0..n)
            .map(|j| WaveVectorSample::new(1.0, std::f64::consts::FRAC_PI_2, j as f64 * dphi, dphi))
            .collect();
        let amp: Vec<C64> = samples.iter().map(|s| cis(m as f64 * s.phi)).collect();
        let zeros = vec![C64::new(0.0, 0.0); n];
        MomentumWaveFunction::new(samples, amp, zeros, ManifoldKind::Ring, ReducedParams::default())
            .unwrap()
            .with_layout(Layout::Ring { n_phi: n })
            .unwrap()
    }

    fn small_grid3d(amp: impl Fn(&WaveVectorSample) -> (C64, C64)) -> MomentumWaveFunction {
        // Inversion-closed product grid: k x theta x phi with theta symmetric
        // about pi/2 and even phi count.
        let ks = [0.8, 1.0, 1.3];
        let thetas = [0.6, std::f64::consts::FRAC_PI_2, std::f64::consts::PI - 0.6];
        let n_phi = 8;
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut samples = Vec::new();
        for &k in &ks {
            for &t in &thetas {
                for j in 0..n_phi {
                    samples.push(WaveVectorSample::new(k, t, j as f64 * dphi, 0.1 * k * t.sin()));
                }
            }
        }
        let (ap, am): (Vec<C64>, Vec<C64>) = samples.iter().map(|s| amp(s)).unzip();
        MomentumWaveFunction::new(samples, ap, am, ManifoldKind::Grid3d, ReducedParams::default())
            .unwrap()
            .with_layout(Layout::Grid3d { n_k: 3, n_theta: 3, n_phi })
            .unwrap()
    }

    #[test]
    fn single_sample_pure_plus_is_valid() {
        let s = vec![WaveVectorSample::new(1.0, 0.3, 0.2, 1.0)];
        let f = MomentumWaveFunction::new(
            s,
            vec![C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0)],
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap();
        assert_eq!(f.len(), 1);
        assert!(f.amp_minus()[0].norm() == 0.0);
    }

    #[test]
    fn empty_support_rejected() {
        let err = MomentumWaveFunction::new(
            vec![],
            vec![],
            vec![],
            ManifoldKind::Disc,
            ReducedParams::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::EmptySupport));
    }

    #[test]
    fn negative_weight_rejected() {
        let s = vec![WaveVectorSample::new(1.0, 0.3, 0.2, -1.0)];
        let err = MomentumWaveFunction::new(
            s,
            vec![C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0)],
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidQuadrature(_)));
    }

    #[test]
    fn non_finite_amplitude_rejected() {
        let s = vec![WaveVectorSample::new(1.0, 0.3, 0.2, 1.0)];
        let err = MomentumWaveFunction::new(
            s,
            vec![C64::new(f64::NAN, 0.0)],
            vec![C64::new(0.0, 0.0)],
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NonFiniteAmplitude(0)));
    }

    #[test]
    fn mismatched_amplitude_lengths_rejected() {
        let s = vec![WaveVectorSample::new(1.0, 0.3, 0.2, 1.0)];
        let err = MomentumWaveFunction::new(
            s,
            vec![C64::new(1.0, 0.0); 2],
            vec![C64::new(0.0, 0.0)],
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::MismatchedLengths(1, 2)));
    }

    #[test]
    fn scalar_product_diagonal_real_nonnegative() {
        let f = small_grid3d(|s| (cis(s.phi) * s.k, C64::new(0.3, -0.1)));
        let ip = scalar_product(&f, &f).unwrap();
        assert!(ip.im.abs() < 1e-14 * ip.re);
        assert!(ip.re >= 0.0);
        assert!((ip.re - f.norm_sq()).abs() < 1e-12 * ip.re);
    }

    #[test]
    fn helicity_orthogonality() {
        // Pure-plus and pure-minus states with the same scalar profile.
        let f = small_grid3d(|s| (cis(s.phi), C64::new(0.0, 0.0)));
        let g = small_grid3d(|s| (C64::new(0.0, 0.0), cis(s.phi)));
        let ip = scalar_product(&f, &g).unwrap();
        assert!(ip.norm() < 1e-15);
    }

    #[test]
    fn scalar_product_gaussian_matches_trapezoid_oracle() {
        // Radial profile f+(k) = exp(-k^2), isotropic. The invariant-measure
        // norm is 4 pi * int k exp(-2 k^2) dk = pi.
        let n_k = 80;
        let n_theta = 24;
        let n_phi = 16;
        let (knodes, kw) = crate::math::gauss_legendre(n_k, 1e-6, 7.0);
        let (munodes, muw) = crate::math::gauss_legendre(n_theta, -1.0, 1.0);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut samples = Vec::new();
        let mut amp = Vec::new();
        for i in 0..n_k {
            for j in 0..n_theta {
                let theta = munodes[j].acos();
                for p in 0..n_phi {
                    // d3k/k = k dk dmu dphi in (k, mu = cos theta, phi).
                    samples.push(WaveVectorSample::new(
                        knodes[i],
                        theta,
                        p as f64 * dphi,
                        knodes[i] * kw[i] * muw[j] * dphi,
                    ));
                    amp.push(C64::new((-knodes[i] * knodes[i]).exp(), 0.0));
                }
            }
        }
        let zeros = vec![C64::new(0.0, 0.0); amp.len()];
        let f = MomentumWaveFunction::new(
            samples,
            amp,
            zeros,
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap();
        let got = scalar_product(&f, &f).unwrap().re;

        // Independent fine-grid trapezoid oracle for 4 pi * int k e^{-2k^2} dk.
        let n = 400_000;
        let kmax = 8.0;
        let h = kmax / n as f64;
        let mut oracle = 0.0;
        for i in 0..=n {
            let k = i as f64 * h;
            let f_val = k * (-2.0 * k * k).exp();
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            oracle += w * f_val;
        }
        oracle *= 4.0 * std::f64::consts::PI * h;
        assert!((oracle - std::f64::consts::PI).abs() < 1e-9, "oracle sanity");
        assert!(
            (got - oracle).abs() / oracle < 1e-6,
            "quadrature {got} vs oracle {oracle}"
        );
    }

    #[test]
    fn normalize_is_idempotent_and_scale_invariant() {
        let f = small_grid3d(|s| (C64::new(s.k, 0.2), C64::new(0.0, s.theta)));
        let n1 = f.normalize().unwrap();
        assert!((n1.norm_sq() - 1.0).abs() < 1e-12);
        let n2 = n1.normalize().unwrap();
        assert!(state_distance(&n1, &n2).unwrap() < 1e-12);
        let doubled = f.scaled(C64::new(2.0, 0.0)).normalize().unwrap();
        assert!(state_distance(&n1, &doubled).unwrap() < 1e-12);
    }

    #[test]
    fn normalize_rejects_ring_and_zero() {
        let ring = ring_state(8, 1);
        assert!(matches!(ring.normalize().unwrap_err(), Error::NonNormalizable(_)));
        let zero = small_grid3d(|_| (C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
        assert!(matches!(zero.normalize().unwrap_err(), Error::ZeroState));
    }

    #[test]
    fn rho3_fixes_pure_plus_and_squares_to_identity() {
        let f = small_grid3d(|s| (cis(2.0 * s.phi), C64::new(0.0, 0.0)));
        let h = f.helicity_sign();
        assert!(state_distance(&f, &h).unwrap() < 1e-15);
        let g = small_grid3d(|s| (cis(s.phi), C64::new(0.4, s.k)));
        let hh = g.helicity_sign().helicity_sign();
        assert!(state_distance(&g, &hh).unwrap() < 1e-15);
    }

    #[test]
    fn rho1_swaps_components() {
        let f = small_grid3d(|s| (C64::new(s.k, 0.0), C64::new(0.0, s.theta)));
        let g = f.apply_rho(RhoMatrix::Rho1);
        for i in 0..f.len() {
            assert_eq!(g.amp_plus()[i], f.amp_minus()[i]);
            assert_eq!(g.amp_minus()[i], f.amp_plus()[i]);
        }
    }

    #[test]
    fn translate_identity_and_monochromatic_period() {
        let f = ring_state(16, 2);
        let id = f.translate_phase([0.0, 0.0, 0.0], 0.0);
        assert!(state_distance(&f, &id).unwrap() == 0.0);
        // One optical period on a monochromatic ring multiplies by e^{-2 pi i}.
        let period = 2.0 * std::f64::consts::PI / 1.0;
        let g = f.translate_phase([0.0, 0.0, 0.0], period);
        assert!(state_distance(&f, &g).unwrap() < 1e-12);
    }

    #[test]
    fn parity_swaps_components_and_squares_to_identity() {
        let f = small_grid3d(|s| (cis(s.phi) * s.k, C64::new(0.0, 0.0)));
        let p = f.discrete_symmetry(DiscreteSymmetry::Parity).unwrap();
        // Pure-plus input becomes pure-minus.
        assert!(p.amp_plus().iter().all(|a| a.norm() == 0.0));
        assert!(p.amp_minus().iter().any(|a| a.norm() > 0.0));
        let pp = p.discrete_symmetry(DiscreteSymmetry::Parity).unwrap();
        for i in 0..f.len() {
            assert_eq!(pp.amp_plus()[i], f.amp_plus()[i]);
            assert_eq!(pp.amp_minus()[i], f.amp_minus()[i]);
        }
    }

    #[test]
    fn time_reversal_squares_to_identity() {
        let f = small_grid3d(|s| (cis(s.phi) * s.k, C64::new(0.1, -0.7)));
        let t = f.discrete_symmetry(DiscreteSymmetry::TimeReversal).unwrap();
        let tt = t.discrete_symmetry(DiscreteSymmetry::TimeReversal).unwrap();
        for i in 0..f.len() {
            assert_eq!(tt.amp_plus()[i], f.amp_plus()[i]);
            assert_eq!(tt.amp_minus()[i], f.amp_minus()[i]);
        }
    }

    #[test]
    fn parity_rejects_open_support() {
        // A single off-axis sample is not inversion closed.
        let s = vec![WaveVectorSample::new(1.0, 0.4, 0.1, 1.0)];
        let f = MomentumWaveFunction::new(
            s,
            vec![C64::new(1.0, 0.0)],
            vec![C64::new(0.0, 0.0)],
            ManifoldKind::Grid3d,
            ReducedParams::default(),
        )
        .unwrap();
        assert!(matches!(
            f.discrete_symmetry(DiscreteSymmetry::Parity).unwrap_err(),
            Error::SupportNotClosed
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn conjugate_symmetry(seed in 0u64..1000) {
            let f = small_grid3d(|s| (cis(s.phi * (seed % 5) as f64), C64::new(0.3, seed as f64 * 1e-3)));
            let g = small_grid3d(|s| (C64::new(s.k, -0.2), cis(-s.phi)));
            let fg = scalar_product(&f, &g).unwrap();
            let gf = scalar_product(&g, &f).unwrap();
            prop_assert!((fg - gf.conj()).norm() < 1e-12 * (1.0 + fg.norm()));
        }

        #[test]
        fn translation_preserves_scalar_products(
            x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0, t in -5.0f64..5.0
        ) {
            let f = small_grid3d(|s| (cis(s.phi), C64::new(0.2, 0.1) * s.k));
            let g = small_grid3d(|s| (C64::new(-0.4, s.theta), cis(2.0 * s.phi)));
            let before = scalar_product(&f, &g).unwrap();
            let after = scalar_product(
                &f.translate_phase([x, y, z], t),
                &g.translate_phase([x, y, z], t),
            ).unwrap();
            prop_assert!((before - after).norm() < 1e-12 * (1.0 + before.norm()));
        }

        #[test]
        fn rho_algebra(which in 0usize..3, other in 0usize..3) {
            // rho_i rho_j = delta_ij + i eps_ijk rho_k, as actions on a state.
            let mats = [RhoMatrix::Rho1, RhoMatrix::Rho2, RhoMatrix::Rho3];
            let f = small_grid3d(|s| (cis(s.phi) * s.k, C64::new(0.7, -0.2) * s.theta));
            let lhs = f.apply_rho(mats[other]).apply_rho(mats[which]);
            // Right-hand side.
            let i = C64::new(0.0, 1.0);
            let mut expected = if which == other { f.clone() } else { f.scaled(C64::new(0.0, 0.0)) };
            let eps = |a: usize, b: usize, c: usize| -> f64 {
                match (a, b, c) {
                    (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
                    (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
                    _ => 0.0,
                }
            };
            for kk in 0..3 {
                let e = eps(which, other, kk);
                if e != 0.0 {
                    let term = f.apply_rho(mats[kk]).scaled(i * e);
                    expected = expected.map_amplitudes(|idx, p, m| {
                        (p + term.amp_plus()[idx], m + term.amp_minus()[idx])
                    });
                }
            }
            prop_assert!(state_distance(&lhs, &expected).unwrap() < 1e-12);
        }
    }
}
