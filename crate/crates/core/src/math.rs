//! Small numeric utilities shared across the crate: 3-vector algebra over
//! real and complex components, deterministic pairwise summation, Gauss-
//! Legendre quadrature rules, and finite-difference weights on arbitrary
//! node sets.

use num_complex::Complex64;

pub type C64 = Complex64;

/// Real 3-vector.
pub type Vec3 = [f64; 3];
/// Complex 3-vector.
pub type CVec3 = [C64; 3];

pub const ZERO_CVEC3: CVec3 = [C64::new(0.0, 0.0); 3];

#[inline]
pub fn vec3_dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn vec3_cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn vec3_norm(a: Vec3) -> f64 {
    vec3_dot(a, a).sqrt()
}

#[inline]
pub fn vec3_scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn vec3_add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn vec3_sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cvec3_add(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn cvec3_sub(a: CVec3, b: CVec3) -> CVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cvec3_scale(a: CVec3, s: C64) -> CVec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn cvec3_conj(a: CVec3) -> CVec3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

/// Hermitian inner product a* . b.
#[inline]
pub fn cvec3_dot(a: CVec3, b: CVec3) -> C64 {
    a[0].conj() * b[0] + a[1].conj() * b[1] + a[2].conj() * b[2]
}

/// Bilinear (unconjugated) product a . b.
#[inline]
pub fn cvec3_dot_bilinear(a: CVec3, b: CVec3) -> C64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cvec3_cross(a: CVec3, b: CVec3) -> CVec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn cvec3_norm_sq(a: CVec3) -> f64 {
    a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()
}

#[inline]
pub fn cvec3_from_real(a: Vec3) -> CVec3 {
    [C64::new(a[0], 0.0), C64::new(a[1], 0.0), C64::new(a[2], 0.0)]
}

/// exp(i phase).
#[inline]
pub fn cis(phase: f64) -> C64 {
    let (s, c) = phase.sin_cos();
    C64::new(c, s)
}

/// Deterministic pairwise summation. The reduction tree depends only on the
/// slice length, so results are reproducible regardless of thread count.
pub fn pairwise_sum<T>(values: &[T]) -> T
where
    T: Copy + std::ops::Add<Output = T> + Default,
{
    match values.len() {
        0 => T::default(),
        1 => values[0],
        2 => values[0] + values[1],
        n => {
            let mid = n / 2;
            pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
        }
    }
}

/// Pairwise sum of `f(i)` over `0..n` without materializing the terms for
/// small blocks; block results are combined pairwise in a fixed order.
pub fn pairwise_sum_by<T, F>(n: usize, f: F) -> T
where
    T: Copy + std::ops::Add<Output = T> + Default,
    F: Fn(usize) -> T,
{
    const BLOCK: usize = 64;
    if n == 0 {
        return T::default();
    }
    let n_blocks = n.div_ceil(BLOCK);
    let blocks: Vec<T> = (0..n_blocks)
        .map(|b| {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(n);
            let mut acc = f(lo);
            for i in lo + 1..hi {
                acc = acc + f(i);
            }
            acc
        })
        .collect();
    pairwise_sum(&blocks)
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [a, b].
///
/// Nodes are found by Newton iteration on the Legendre polynomial with the
/// Chebyshev-based initial guess; accurate to machine precision for the
/// orders used here (n <= 256).
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be positive");
    assert!(b > a, "empty quadrature interval");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess: Chebyshev points.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    // Affine map [-1, 1] -> [a, b].
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
    (nodes, weights)
}

/// Fornberg finite-difference weights for the `order`-th derivative at `x0`
/// from the given (arbitrary, distinct) nodes. Returns one weight per node.
pub fn fd_weights(x0: f64, nodes: &[f64], order: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > order, "need more nodes than derivative order");
    let mut c = vec![vec![0.0; order + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mi = i.min(order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mi).rev() {
                    c[i][k] = c1 * ((k as f64) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mi).rev() {
                c[j][k] = (c4 * c[j][k] - (k as f64) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// First-derivative matrix rows for a set of 1-D nodes.
///
/// Uses the full node set per row (global polynomial differentiation) up to
/// 64 nodes, which is spectrally accurate on Gauss-Legendre grids; beyond
/// that, sliding 9-point Fornberg stencils.
pub fn derivative_stencils(nodes: &[f64]) -> Vec<(usize, Vec<f64>)> {
    let n = nodes.len();
    let width = if n <= 64 { n } else { 9 };
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(width / 2).min(n - width);
            let w = fd_weights(nodes[i], &nodes[lo..lo + width], 1);
            (lo, w)
        })
        .collect()
}

/// Wrap an angle to [0, 2 pi).
#[inline]
pub fn wrap_angle(phi: f64) -> f64 {
    let tau = 2.0 * std::f64::consts::PI;
    let mut p = phi % tau;
    if p < 0.0 {
        p += tau;
    }
    p
}

/// Direction unit vector for polar angles (theta, phi).
#[inline]
pub fn direction(theta: f64, phi: f64) -> Vec3 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    [st * cp, st * sp, ct]
}
