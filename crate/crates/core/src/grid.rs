//! Uniform position grids, complex 3-vector fields on them, and spectral /
//! finite-difference derivative machinery for periodic boxes.
//!
//! All reductions (norms, integrals) use deterministic pairwise summation so
//! repeated runs produce bit-identical results regardless of thread count.

use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::math::{pairwise_sum_by, C64, CVec3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

/// Uniform rectilinear grid of sample points r = origin + (i dx, j dy, k dz).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionGrid {
    pub origin: Vec3,
    pub spacing: Vec3,
    pub shape: [usize; 3],
    pub boundary: Boundary,
}

impl PositionGrid {
    pub fn new(origin: Vec3, spacing: Vec3, shape: [usize; 3], boundary: Boundary) -> Result<Self> {
        for axis in 0..3 {
            if !(spacing[axis] > 0.0) {
                return Err(Error::GridMismatch(format!(
                    "spacing must be positive on axis {axis}"
                )));
            }
            if shape[axis] < 2 {
                return Err(Error::GridMismatch(format!(
                    "need at least 2 nodes per axis, got {} on axis {axis}",
                    shape[axis]
                )));
            }
        }
        Ok(Self { origin, spacing, shape, boundary })
    }

    /// Periodic cube of side `length` centered on the origin.
    pub fn centered_cube(n: usize, length: f64) -> Self {
        let d = length / n as f64;
        Self {
            origin: [-0.5 * length, -0.5 * length, -0.5 * length],
            spacing: [d, d, d],
            shape: [n, n, n],
            boundary: Boundary::Periodic,
        }
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.shape[0] * self.shape[1] * self.shape[2]
    }

    /// Box side lengths (periodic extent): N * spacing per axis.
    #[inline]
    pub fn lengths(&self) -> Vec3 {
        [
            self.shape[0] as f64 * self.spacing[0],
            self.shape[1] as f64 * self.spacing[1],
            self.shape[2] as f64 * self.spacing[2],
        ]
    }

    #[inline]
    pub fn cell_volume(&self) -> f64 {
        self.spacing[0] * self.spacing[1] * self.spacing[2]
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.shape[1] + iy) * self.shape[0] + ix
    }

    #[inline]
    pub fn coords(&self, idx: usize) -> (usize, usize, usize) {
        let nx = self.shape[0];
        let ny = self.shape[1];
        (idx % nx, (idx / nx) % ny, idx / (nx * ny))
    }

    #[inline]
    pub fn position(&self, idx: usize) -> Vec3 {
        let (ix, iy, iz) = self.coords(idx);
        [
            self.origin[0] + ix as f64 * self.spacing[0],
            self.origin[1] + iy as f64 * self.spacing[1],
            self.origin[2] + iz as f64 * self.spacing[2],
        ]
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0);
        self.shape == other.shape
            && self.boundary == other.boundary
            && (0..3).all(|i| {
                close(self.origin[i], other.origin[i]) && close(self.spacing[i], other.spacing[i])
            })
    }

    /// Reciprocal-lattice wave number 2 pi m / L on the given axis.
    #[inline]
    pub fn lattice_k(&self, axis: usize, mode: i64) -> f64 {
        2.0 * std::f64::consts::PI * mode as f64 / self.lengths()[axis]
    }

    /// Nearest reciprocal-lattice mode to a wave number on the given axis.
    pub fn snap_to_lattice(&self, axis: usize, k: f64) -> (i64, f64) {
        let base = 2.0 * std::f64::consts::PI / self.lengths()[axis];
        let m = (k / base).round() as i64;
        (m, m as f64 * base)
    }

    /// FFT-ordered wave numbers for one axis (index n/2.. mapped to negative).
    pub fn fourier_wavenumbers(&self, axis: usize) -> Vec<f64> {
        let n = self.shape[axis];
        let l = self.lengths()[axis];
        (0..n)
            .map(|i| {
                let m = if i <= n / 2 { i as i64 } else { i as i64 - n as i64 };
                2.0 * std::f64::consts::PI * m as f64 / l
            })
            .collect()
    }
}

/// Complex 3-vector field sampled on a grid, stored one component at a time
/// with x fastest.
#[derive(Debug, Clone)]
pub struct VectorField3 {
    pub grid: PositionGrid,
    pub comps: [Vec<C64>; 3],
}

impl VectorField3 {
    pub fn zeros(grid: PositionGrid) -> Self {
        let n = grid.num_nodes();
        Self { grid, comps: [vec![C64::default(); n], vec![C64::default(); n], vec![C64::default(); n]] }
    }

    /// Build from a per-node closure evaluated in parallel.
    pub fn from_fn<F>(grid: PositionGrid, f: F) -> Self
    where
        F: Fn(Vec3) -> CVec3 + Sync,
    {
        let n = grid.num_nodes();
        let values: Vec<CVec3> = (0..n).into_par_iter().map(|idx| f(grid.position(idx))).collect();
        let mut out = Self::zeros(grid);
        for (idx, v) in values.into_iter().enumerate() {
            out.comps[0][idx] = v[0];
            out.comps[1][idx] = v[1];
            out.comps[2][idx] = v[2];
        }
        out
    }

    #[inline]
    pub fn at(&self, idx: usize) -> CVec3 {
        [self.comps[0][idx], self.comps[1][idx], self.comps[2][idx]]
    }

    #[inline]
    pub fn set(&mut self, idx: usize, v: CVec3) {
        self.comps[0][idx] = v[0];
        self.comps[1][idx] = v[1];
        self.comps[2][idx] = v[2];
    }

    pub fn num_nodes(&self) -> usize {
        self.grid.num_nodes()
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(usize, CVec3) -> CVec3 + Sync,
    {
        let n = self.num_nodes();
        let values: Vec<CVec3> = (0..n).into_par_iter().map(|i| f(i, self.at(i))).collect();
        let mut out = Self::zeros(self.grid);
        for (i, v) in values.into_iter().enumerate() {
            out.set(i, v);
        }
        out
    }

    pub fn scaled(&self, s: C64) -> Self {
        self.map(|_, v| [v[0] * s, v[1] * s, v[2] * s])
    }

    pub fn conjugated(&self) -> Self {
        self.map(|_, v| crate::math::cvec3_conj(v))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| crate::math::cvec3_add(a, b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| crate::math::cvec3_sub(a, b))
    }

    pub fn zip<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(CVec3, CVec3) -> CVec3 + Sync,
    {
        if !self.grid.same_grid(&other.grid) {
            return Err(Error::GridMismatch("fields live on different grids".into()));
        }
        let n = self.num_nodes();
        let values: Vec<CVec3> = (0..n).into_par_iter().map(|i| f(self.at(i), other.at(i))).collect();
        let mut out = Self::zeros(self.grid);
        for (i, v) in values.into_iter().enumerate() {
            out.set(i, v);
        }
        Ok(out)
    }

    /// Integral of |V|^2 over the box (cell-volume weighted).
    pub fn l2_norm_sq(&self) -> f64 {
        let dv = self.grid.cell_volume();
        dv * pairwise_sum_by(self.num_nodes(), |i| {
            self.comps[0][i].norm_sqr() + self.comps[1][i].norm_sqr() + self.comps[2][i].norm_sqr()
        })
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// Integral of a* . b over the box.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if !self.grid.same_grid(&other.grid) {
            return Err(Error::GridMismatch("inner product on different grids".into()));
        }
        let dv = self.grid.cell_volume();
        Ok(pairwise_sum_by(self.num_nodes(), |i| crate::math::cvec3_dot(self.at(i), other.at(i)))
            * C64::new(dv, 0.0))
    }

    /// Maximum pointwise magnitude; NaN anywhere yields NaN (unlike
    /// f64::max, which would silently drop it).
    pub fn max_abs(&self) -> f64 {
        (0..self.num_nodes())
            .map(|i| crate::math::cvec3_norm_sq(self.at(i)).sqrt())
            .fold(0.0f64, |a, b| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) })
    }

    pub fn all_finite(&self) -> bool {
        self.comps
            .iter()
            .all(|c| c.iter().all(|z| z.re.is_finite() && z.im.is_finite()))
    }

    /// Mean value of each component over the box.
    pub fn mean(&self) -> CVec3 {
        let n = self.num_nodes() as f64;
        [
            pairwise_sum_by(self.num_nodes(), |i| self.comps[0][i]) / n,
            pairwise_sum_by(self.num_nodes(), |i| self.comps[1][i]) / n,
            pairwise_sum_by(self.num_nodes(), |i| self.comps[2][i]) / n,
        ]
    }
}

/// Cached FFT plans and wave numbers for one periodic grid.
pub struct SpectralOps {
    grid: PositionGrid,
    forward: [Arc<dyn Fft<f64>>; 3],
    inverse: [Arc<dyn Fft<f64>>; 3],
    /// FFT-ordered wave numbers per axis.
    pub k: [Vec<f64>; 3],
    /// Same but with the unpaired Nyquist mode zeroed; used for derivatives.
    pub k_deriv: [Vec<f64>; 3],
}

impl SpectralOps {
    pub fn new(grid: &PositionGrid) -> Result<Self> {
        if grid.boundary != Boundary::Periodic {
            return Err(Error::GridMismatch("spectral operations need a periodic grid".into()));
        }
        let mut planner = FftPlanner::new();
        let forward = [
            planner.plan_fft_forward(grid.shape[0]),
            planner.plan_fft_forward(grid.shape[1]),
            planner.plan_fft_forward(grid.shape[2]),
        ];
        let inverse = [
            planner.plan_fft_inverse(grid.shape[0]),
            planner.plan_fft_inverse(grid.shape[1]),
            planner.plan_fft_inverse(grid.shape[2]),
        ];
        let k = [
            grid.fourier_wavenumbers(0),
            grid.fourier_wavenumbers(1),
            grid.fourier_wavenumbers(2),
        ];
        let mut k_deriv = k.clone();
        for axis in 0..3 {
            let n = grid.shape[axis];
            if n % 2 == 0 {
                k_deriv[axis][n / 2] = 0.0;
            }
        }
        Ok(Self { grid: *grid, forward, inverse, k, k_deriv })
    }

    pub fn grid(&self) -> &PositionGrid {
        &self.grid
    }

    fn fft_axis(&self, data: &mut [C64], axis: usize, inv: bool) {
        let [nx, ny, nz] = self.grid.shape;
        let plan = if inv { &self.inverse[axis] } else { &self.forward[axis] };
        match axis {
            0 => {
                data.par_chunks_mut(nx).for_each(|line| plan.process(line));
            }
            1 => {
                // Gather y-lines (stride nx) into contiguous buffers.
                let mut buf = vec![C64::default(); data.len()];
                for iz in 0..nz {
                    for ix in 0..nx {
                        let line = (iz * nx + ix) * ny;
                        let base = iz * ny * nx + ix;
                        for iy in 0..ny {
                            buf[line + iy] = data[base + iy * nx];
                        }
                    }
                }
                buf.par_chunks_mut(ny).for_each(|line| plan.process(line));
                for iz in 0..nz {
                    for ix in 0..nx {
                        let line = (iz * nx + ix) * ny;
                        let base = iz * ny * nx + ix;
                        for iy in 0..ny {
                            data[base + iy * nx] = buf[line + iy];
                        }
                    }
                }
            }
            _ => {
                let plane = nx * ny;
                let mut buf = vec![C64::default(); data.len()];
                for iy in 0..ny {
                    for ix in 0..nx {
                        let line = (iy * nx + ix) * nz;
                        let base = iy * nx + ix;
                        for iz in 0..nz {
                            buf[line + iz] = data[base + iz * plane];
                        }
                    }
                }
                buf.par_chunks_mut(nz).for_each(|line| plan.process(line));
                for iy in 0..ny {
                    for ix in 0..nx {
                        let line = (iy * nx + ix) * nz;
                        let base = iy * nx + ix;
                        for iz in 0..nz {
                            data[base + iz * plane] = buf[line + iz];
                        }
                    }
                }
            }
        }
    }

    /// Unnormalized forward 3-D FFT in place.
    pub fn fft3_forward(&self, data: &mut [C64]) {
        self.fft_axis(data, 0, false);
        self.fft_axis(data, 1, false);
        self.fft_axis(data, 2, false);
    }

    /// Inverse 3-D FFT in place, normalized by 1/N.
    pub fn fft3_inverse(&self, data: &mut [C64]) {
        self.fft_axis(data, 0, true);
        self.fft_axis(data, 1, true);
        self.fft_axis(data, 2, true);
        let scale = 1.0 / self.grid.num_nodes() as f64;
        data.par_iter_mut().for_each(|z| *z *= scale);
    }

    /// Wave vector of the FFT mode with flat index `idx` (derivative
    /// convention: Nyquist zeroed).
    #[inline]
    pub fn mode_k(&self, idx: usize) -> Vec3 {
        let (ix, iy, iz) = self.grid.coords(idx);
        [self.k_deriv[0][ix], self.k_deriv[1][iy], self.k_deriv[2][iz]]
    }

    /// Apply a per-Fourier-mode map to a vector field: transform, apply
    /// f(k_mode, V_hat), transform back.
    pub fn apply_mode_map<F>(&self, field: &VectorField3, f: F) -> Result<VectorField3>
    where
        F: Fn(Vec3, CVec3) -> CVec3 + Sync,
    {
        if !self.grid.same_grid(&field.grid) {
            return Err(Error::GridMismatch("spectral ops built for a different grid".into()));
        }
        let mut cx = field.comps[0].clone();
        let mut cy = field.comps[1].clone();
        let mut cz = field.comps[2].clone();
        self.fft3_forward(&mut cx);
        self.fft3_forward(&mut cy);
        self.fft3_forward(&mut cz);
        let n = field.num_nodes();
        let mapped: Vec<CVec3> = (0..n)
            .into_par_iter()
            .map(|i| f(self.mode_k(i), [cx[i], cy[i], cz[i]]))
            .collect();
        for (i, v) in mapped.iter().enumerate() {
            cx[i] = v[0];
            cy[i] = v[1];
            cz[i] = v[2];
        }
        self.fft3_inverse(&mut cx);
        self.fft3_inverse(&mut cy);
        self.fft3_inverse(&mut cz);
        Ok(VectorField3 { grid: field.grid, comps: [cx, cy, cz] })
    }

    /// Spectral curl.
    pub fn curl(&self, field: &VectorField3) -> Result<VectorField3> {
        let i = C64::new(0.0, 1.0);
        self.apply_mode_map(field, |k, v| {
            [
                i * (k[1] * v[2] - k[2] * v[1]),
                i * (k[2] * v[0] - k[0] * v[2]),
                i * (k[0] * v[1] - k[1] * v[0]),
            ]
        })
    }

    /// Spectral divergence, returned as a scalar field.
    pub fn divergence(&self, field: &VectorField3) -> Result<Vec<C64>> {
        if !self.grid.same_grid(&field.grid) {
            return Err(Error::GridMismatch("spectral ops built for a different grid".into()));
        }
        let mut cx = field.comps[0].clone();
        let mut cy = field.comps[1].clone();
        let mut cz = field.comps[2].clone();
        self.fft3_forward(&mut cx);
        self.fft3_forward(&mut cy);
        self.fft3_forward(&mut cz);
        let n = field.num_nodes();
        let i = C64::new(0.0, 1.0);
        let mut div: Vec<C64> = (0..n)
            .into_par_iter()
            .map(|idx| {
                let k = self.mode_k(idx);
                i * (k[0] * cx[idx] + k[1] * cy[idx] + k[2] * cz[idx])
            })
            .collect();
        self.fft3_inverse(&mut div);
        Ok(div)
    }

    /// Spectral gradient of a real scalar field.
    pub fn gradient_real(&self, scalar: &[f64]) -> [Vec<f64>; 3] {
        let n = self.grid.num_nodes();
        assert_eq!(scalar.len(), n);
        let mut hat: Vec<C64> = scalar.iter().map(|&x| C64::new(x, 0.0)).collect();
        self.fft3_forward(&mut hat);
        let mut out = [vec![0.0; n], vec![0.0; n], vec![0.0; n]];
        for axis in 0..3 {
            let mut d: Vec<C64> = (0..n)
                .into_par_iter()
                .map(|idx| {
                    let k = self.mode_k(idx);
                    C64::new(0.0, k[axis]) * hat[idx]
                })
                .collect();
            self.fft3_inverse(&mut d);
            for (o, z) in out[axis].iter_mut().zip(d.iter()) {
                *o = z.re;
            }
        }
        out
    }
}

/// 4th-order centered periodic finite difference along one axis.
pub fn fd4_partial(grid: &PositionGrid, data: &[C64], axis: usize) -> Vec<C64> {
    let [nx, ny, _nz] = grid.shape;
    let n_axis = grid.shape[axis];
    let stride = match axis {
        0 => 1,
        1 => nx,
        _ => nx * ny,
    };
    let h = grid.spacing[axis];
    let n = grid.num_nodes();
    let c1 = 8.0 / (12.0 * h);
    let c2 = 1.0 / (12.0 * h);
    (0..n)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy, iz) = grid.coords(idx);
            let i_axis = [ix, iy, iz][axis];
            let base = idx - i_axis * stride;
            let at = |j: i64| {
                let jj = (i_axis as i64 + j).rem_euclid(n_axis as i64) as usize;
                data[base + jj * stride]
            };
            (at(1) - at(-1)) * c1 - (at(2) - at(-2)) * c2
        })
        .collect()
}

/// 4th-order periodic finite-difference curl.
pub fn curl_fd4(field: &VectorField3) -> VectorField3 {
    let g = &field.grid;
    let dy_vz = fd4_partial(g, &field.comps[2], 1);
    let dz_vy = fd4_partial(g, &field.comps[1], 2);
    let dz_vx = fd4_partial(g, &field.comps[0], 2);
    let dx_vz = fd4_partial(g, &field.comps[2], 0);
    let dx_vy = fd4_partial(g, &field.comps[1], 0);
    let dy_vx = fd4_partial(g, &field.comps[0], 1);
    let n = field.num_nodes();
    let mut out = VectorField3::zeros(*g);
    for i in 0..n {
        out.comps[0][i] = dy_vz[i] - dz_vy[i];
        out.comps[1][i] = dz_vx[i] - dx_vz[i];
        out.comps[2][i] = dx_vy[i] - dy_vx[i];
    }
    out
}

/// 4th-order periodic finite-difference gradient of a real scalar field.
pub fn gradient_real_fd4(grid: &PositionGrid, scalar: &[f64]) -> [Vec<f64>; 3] {
    let as_c: Vec<C64> = scalar.iter().map(|&x| C64::new(x, 0.0)).collect();
    let mut out = [Vec::new(), Vec::new(), Vec::new()];
    for (axis, slot) in out.iter_mut().enumerate() {
        *slot = fd4_partial(grid, &as_c, axis).into_iter().map(|z| z.re).collect();
    }
    out
}

/// Relative L2 difference between two fields on the same grid.
pub fn relative_l2_difference(a: &VectorField3, b: &VectorField3) -> Result<f64> {
    let diff = a.sub(b)?;
    let denom = b.l2_norm();
    if denom == 0.0 {
        return Ok(diff.l2_norm());
    }
    Ok(diff.l2_norm() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::cis;

    fn plane_wave(grid: PositionGrid, kvec: Vec3, pol: CVec3) -> VectorField3 {
        VectorField3::from_fn(grid, |r| {
            let ph = cis(crate::math::vec3_dot(kvec, r));
            [pol[0] * ph, pol[1] * ph, pol[2] * ph]
        })
    }

    #[test]
    fn grid_indexing_roundtrip() {
        let g = PositionGrid::centered_cube(8, 4.0);
        for idx in [0usize, 5, 63, 200, 511] {
            let (ix, iy, iz) = g.coords(idx);
            assert_eq!(g.index(ix, iy, iz), idx);
        }
        assert!((g.cell_volume() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn spectral_curl_exact_for_lattice_mode() {
        let g = PositionGrid::centered_cube(16, 2.0 * std::f64::consts::PI);
        let ops = SpectralOps::new(&g).unwrap();
        let kvec = [g.lattice_k(0, 2), g.lattice_k(1, -1), g.lattice_k(2, 3)];
        let pol = [C64::new(0.3, 0.1), C64::new(-0.2, 0.5), C64::new(0.0, 1.0)];
        let f = plane_wave(g, kvec, pol);
        let curl = ops.curl(&f).unwrap();
        // Expected: i k x pol times the same phase.
        let i = C64::new(0.0, 1.0);
        let expected_pol = [
            i * (kvec[1] * pol[2] - kvec[2] * pol[1]),
            i * (kvec[2] * pol[0] - kvec[0] * pol[2]),
            i * (kvec[0] * pol[1] - kvec[1] * pol[0]),
        ];
        let expected = plane_wave(g, kvec, expected_pol);
        assert!(relative_l2_difference(&curl, &expected).unwrap() < 1e-13);
    }

    #[test]
    fn divergence_of_transverse_mode_vanishes() {
        let g = PositionGrid::centered_cube(16, 2.0 * std::f64::consts::PI);
        let ops = SpectralOps::new(&g).unwrap();
        let kvec = [g.lattice_k(0, 1), 0.0, g.lattice_k(2, 2)];
        // Polarization orthogonal to k.
        let pol = [C64::new(0.0, 0.0), C64::new(1.0, -0.3), C64::new(0.0, 0.0)];
        let f = plane_wave(g, kvec, pol);
        let div = ops.divergence(&f).unwrap();
        let max = div.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
        assert!(max < 1e-12);
    }

    #[test]
    fn fd4_derivative_is_fourth_order() {
        // d/dx sin(x) on shrinking grids; expect ~16x error reduction.
        let errs: Vec<f64> = [16usize, 32]
            .iter()
            .map(|&n| {
                let g = PositionGrid::centered_cube(n, 2.0 * std::f64::consts::PI);
                let data: Vec<C64> = (0..g.num_nodes())
                    .map(|i| C64::new(g.position(i)[0].sin(), 0.0))
                    .collect();
                let d = fd4_partial(&g, &data, 0);
                (0..g.num_nodes())
                    .map(|i| (d[i].re - g.position(i)[0].cos()).abs())
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let ratio = errs[0] / errs[1];
        assert!(ratio > 12.0 && ratio < 20.0, "observed ratio {ratio}");
    }

    #[test]
    fn forward_inverse_fft_roundtrip() {
        let g = PositionGrid::centered_cube(8, 3.0);
        let ops = SpectralOps::new(&g).unwrap();
        let orig: Vec<C64> = (0..g.num_nodes())
            .map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut data = orig.clone();
        ops.fft3_forward(&mut data);
        ops.fft3_inverse(&mut data);
        let max_err = orig
            .iter()
            .zip(&data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0f64, f64::max);
        assert!(max_err < 1e-13);
    }

    #[test]
    fn open_boundary_rejected_for_spectral() {
        let g = PositionGrid::new([0.0; 3], [0.1; 3], [4, 4, 4], Boundary::Open).unwrap();
        assert!(SpectralOps::new(&g).is_err());
    }
}
