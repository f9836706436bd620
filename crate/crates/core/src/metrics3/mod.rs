//! Curvature of diagonal 3-dimensional metrics in the orthonormal frame
//! `eᵢ = gᵢ^{−1/2} ∂ᵢ`, and the identities satisfied by metrics whose Ricci
//! tensor has rank one.
//!
//! Frame connection: `Γ^i_{jk} = ⟨∇_{e_k} e_j, e_i⟩`, skew in `(i, j)`.
//! With `e₁ = ∂x` this gives `H = (Γ¹_{ij})_{i,j=2,3} = −diag(μ₂′/μ₂, μ₃′/μ₃)`
//! for `g₂ = μ₂²`, `g₃ = μ₃²`. Metric components are differentiated exactly;
//! finite differences are used only for derived quantities (`f`, `ρ`, `H`).

mod chart;
mod jet;
mod milnor;

use serde::{Deserialize, Serialize};

pub use chart::{lookup, MetricChart, NamedMetric, COORDINATES, METRIC_NAMES};
pub use jet::Jet;
pub use milnor::milnor_ricci;

use crate::curvature::{bianchi_residuals_raw, constant_curvature, r_phi, reflection, ricci, CurvatureTensor};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat};

/// `Γ[i][j][k] = Γ^i_{jk}`.
pub type Connection = [[[f64; 3]; 3]; 3];

pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Frame connection and frame curvature at one point.
#[derive(Clone, Debug)]
struct FrameData {
    gamma: Connection,
    riemann: Vec<f64>,
    /// `gᵢ^{−1/2}`: coordinate components of `eᵢ`.
    h: [f64; 3],
}

fn frame_data(chart: &MetricChart, p: [f64; 3]) -> Result<FrameData> {
    let g = chart.components(p)?;
    // dg[i][k] = ∂_k g_i, carried to first order
    let dg: [[Jet; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|k| g[i].partial(k)));
    let zero = Jet::constant(0.0);
    let delta = |a: usize, b: usize, j: Jet| if a == b { j } else { zero };
    // coordinate Christoffels Γ^i_{jk} (symmetric in j, k) as first-order jets
    let cg: [[[Jet; 3]; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            std::array::from_fn(|k| {
                let num = delta(i, j, dg[i][k]) + delta(i, k, dg[i][j]) - delta(j, k, dg[j][i]);
                num / (g[i] * 2.0)
            })
        })
    });
    // Rup[r][s][m][n]: r-component of R(∂_m, ∂_n)∂_s
    let mut rup = [[[[0.0; 3]; 3]; 3]; 3];
    for r in 0..3 {
        for s in 0..3 {
            for m in 0..3 {
                for n in 0..3 {
                    let mut v = cg[r][n][s].g[m] - cg[r][m][s].g[n];
                    for l in 0..3 {
                        v += cg[r][m][l].v * cg[l][n][s].v - cg[r][n][l].v * cg[l][m][s].v;
                    }
                    rup[r][s][m][n] = v;
                }
            }
        }
    }
    let gv = [g[0].v, g[1].v, g[2].v];
    let h = gv.map(|x| 1.0 / x.sqrt());
    // R_{abcd} = ⟨R(e_a,e_b)e_d, e_c⟩
    let mut riemann = vec![0.0; 81];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                for d in 0..3 {
                    riemann[((a * 3 + b) * 3 + c) * 3 + d] = gv[c] * rup[c][d][a][b] * h[a] * h[b] * h[c] * h[d];
                }
            }
        }
    }
    let mut gamma = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                let mut v = h[k] * h[j] * cg[i][k][j].v / h[i];
                if i == j {
                    // e_k(g_j^{-1/2}) / g_j^{-1/2}
                    v -= 0.5 * h[k] * dg[j][k].v / gv[j];
                }
                gamma[i][j][k] = v;
            }
        }
    }
    Ok(FrameData { gamma, riemann, h })
}

/// Frame connection coefficients `Γ^i_{jk}`.
pub fn christoffel(chart: &MetricChart, p: [f64; 3]) -> Result<Connection> {
    Ok(frame_data(chart, p)?.gamma)
}

/// Raw frame components `R_{ijkl}` before any symmetry validation.
pub fn frame_curvature_components(chart: &MetricChart, p: [f64; 3]) -> Result<Vec<f64>> {
    Ok(frame_data(chart, p)?.riemann)
}

pub fn frame_curvature(chart: &MetricChart, p: [f64; 3]) -> Result<CurvatureTensor> {
    CurvatureTensor::from_components(3, frame_curvature_components(chart, p)?)
}

/// Symmetry residuals of the raw frame curvature.
pub fn frame_curvature_defect(chart: &MetricChart, p: [f64; 3]) -> Result<f64> {
    Ok(bianchi_residuals_raw(3, &frame_curvature_components(chart, p)?).max())
}

fn frame_ricci_of(fd: &FrameData) -> Mat {
    Mat::from_fn(3, 3, |j, l| (0..3).map(|i| fd.riemann[((i * 3 + j) * 3 + i) * 3 + l]).sum())
}

pub fn frame_ricci(chart: &MetricChart, p: [f64; 3]) -> Result<Mat> {
    Ok(frame_ricci_of(&frame_data(chart, p)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RicciReport {
    pub point: [f64; 3],
    /// Ascending.
    pub eigenvalues: [f64; 3],
    /// Orthonormal frame components, one per eigenvalue.
    pub directions: [[f64; 3]; 3],
    /// The same directions as coordinate vectors (not normalized).
    pub coordinate_directions: [[f64; 3]; 3],
    pub rank: usize,
    pub tol: f64,
}

impl RicciReport {
    /// Index of the eigenvalue of largest magnitude.
    pub fn principal_index(&self) -> usize {
        (0..3).max_by(|&a, &b| self.eigenvalues[a].abs().total_cmp(&self.eigenvalues[b].abs())).expect("three values")
    }
}

/// Eigen-decomposition of the frame Ricci tensor; rank counts `|ρᵢ| > tol`.
pub fn ricci_report(chart: &MetricChart, p: [f64; 3], tol: f64) -> Result<RicciReport> {
    let fd = frame_data(chart, p)?;
    let rho = frame_ricci_of(&fd);
    let rho = Mat::from_fn(3, 3, |i, j| 0.5 * (rho[(i, j)] + rho[(j, i)]));
    let spec = sym_eigen(&rho, 1e-8)?;
    let eigenvalues = [spec.eigenvalues[0], spec.eigenvalues[1], spec.eigenvalues[2]];
    let directions: [[f64; 3]; 3] =
        std::array::from_fn(|c| std::array::from_fn(|r| spec.eigenvectors[(r, c)]));
    let coordinate_directions = directions.map(|d| std::array::from_fn(|r| d[r] * fd.h[r]));
    let rank = eigenvalues.iter().filter(|v| v.abs() > tol).count();
    Ok(RicciReport { point: p, eigenvalues, directions, coordinate_directions, rank, tol })
}

/// Frame data at `p ± δ·∂_k` combined by one Richardson step.
fn frame_derivative<T>(
    chart: &MetricChart,
    p: [f64; 3],
    k: usize,
    step: f64,
    quantity: impl Fn(&FrameData) -> T,
    combine: impl Fn(&T, &T, f64) -> T,
    richardson: impl Fn(&T, &T) -> T,
) -> Result<T> {
    let central = |h: f64| -> Result<T> {
        let mut a = p;
        let mut b = p;
        a[k] += h;
        b[k] -= h;
        Ok(combine(&quantity(&frame_data(chart, a)?), &quantity(&frame_data(chart, b)?), 2.0 * h))
    };
    let coarse = central(step)?;
    let fine = central(0.5 * step)?;
    Ok(richardson(&fine, &coarse))
}

fn scalar_derivative(chart: &MetricChart, p: [f64; 3], k: usize, step: f64, q: impl Fn(&FrameData) -> f64) -> Result<f64> {
    frame_derivative(chart, p, k, step, q, |a, b, w| (a - b) / w, |f, c| (4.0 * f - c) / 3.0)
}

fn matrix_derivative(chart: &MetricChart, p: [f64; 3], k: usize, step: f64, q: impl Fn(&FrameData) -> Mat) -> Result<Mat> {
    frame_derivative(
        chart,
        p,
        k,
        step,
        q,
        |a, b, w| (a - b).scaled(1.0 / w),
        |f, c| (&f.scaled(4.0) - c).scaled(1.0 / 3.0),
    )
}

fn half_rho11(fd: &FrameData) -> f64 {
    0.5 * frame_ricci_of(fd)[(0, 0)]
}

/// Requires Ricci rank one with principal direction `e₁`; returns `f`.
fn adapted_f(chart: &MetricChart, p: [f64; 3]) -> Result<f64> {
    let rep = ricci_report(chart, p, 1e-9)?;
    if rep.rank != 1 {
        return Err(Error::RankNotOne(rep.rank));
    }
    let dir = rep.directions[rep.principal_index()];
    if dir[0].abs() < 1.0 - 1e-8 {
        return Err(Error::FrameNotAdapted(format!("principal Ricci direction {dir:?} is not e1")));
    }
    Ok(0.5 * rep.eigenvalues[rep.principal_index()])
}

/// Residuals of `eᵢ(f)/(2f) = Γ¹₂₂ + Γ¹₃₃, Γ²₁₁, Γ³₁₁` for `i = 1, 2, 3`.
pub fn second_bianchi_frame_check(chart: &MetricChart, p: [f64; 3], step: f64) -> Result<[f64; 3]> {
    let f = adapted_f(chart, p)?;
    let fd = frame_data(chart, p)?;
    let g = &fd.gamma;
    let expected = [g[0][1][1] + g[0][2][2], g[1][0][0], g[2][0][0]];
    let mut out = [0.0; 3];
    for i in 0..3 {
        let ef = fd.h[i] * scalar_derivative(chart, p, i, step, half_rho11)?;
        out[i] = (ef / (2.0 * f) - expected[i]).abs();
    }
    Ok(out)
}

/// `H = (Γ¹_{ij})_{i,j ∈ {2,3}}`.
pub fn second_fundamental_form(chart: &MetricChart, p: [f64; 3]) -> Result<Mat> {
    let g = christoffel(chart, p)?;
    Ok(h_of(&g))
}

fn h_of(g: &Connection) -> Mat {
    Mat::from_fn(2, 2, |i, j| g[0][i + 1][j + 1])
}

fn check_geodesic_family(chart: &MetricChart, p: [f64; 3]) -> Result<()> {
    let g = chart.components(p)?;
    let g1_const = (g[0].v - 1.0).abs() < 1e-14 && g[0].g.iter().all(|d| *d == 0.0);
    let x_only = g[1..].iter().all(|c| c.g[1] == 0.0 && c.g[2] == 0.0);
    if !(g1_const && x_only) {
        return Err(Error::NotGeodesicFrame(format!("{} is not of the form dx² + g₂(x)dy² + g₃(x)dz²", chart.name())));
    }
    Ok(())
}

/// `‖e₁(H) − H² − f·I‖`.
pub fn h_evolution_check(chart: &MetricChart, p: [f64; 3], step: f64) -> Result<f64> {
    check_geodesic_family(chart, p)?;
    let f = half_rho11(&frame_data(chart, p)?);
    let h = second_fundamental_form(chart, p)?;
    let dh = matrix_derivative(chart, p, 0, step, |fd| h_of(&fd.gamma))?;
    Ok((&(&dh - &(&h * &h)) - &Mat::identity(2).scaled(f)).frobenius_norm())
}

/// `|Tr H − e₁(f)/(2f)|`.
pub fn trace_h_check(chart: &MetricChart, p: [f64; 3], step: f64) -> Result<f64> {
    let f = adapted_f(chart, p)?;
    let fd = frame_data(chart, p)?;
    let ef = fd.h[0] * scalar_derivative(chart, p, 0, step, half_rho11)?;
    Ok((h_of(&fd.gamma).trace() - ef / (2.0 * f)).abs())
}

/// `d(√|f| ω²∧ω³) = e₁(√|f|·√(g₂g₃)) ω¹∧ω²∧ω³ / √(g₂g₃)`; returns the
/// coefficient divided by `√|f|`, which is scale free.
pub fn area_form_check(chart: &MetricChart, p: [f64; 3], step: f64) -> Result<f64> {
    let f = adapted_f(chart, p)?;
    let density = |q: [f64; 3]| -> Result<f64> {
        let g = chart.components(q)?;
        Ok(half_rho11(&frame_data(chart, q)?).abs().sqrt() * (g[1].v * g[2].v).sqrt())
    };
    let central = |h: f64| -> Result<f64> {
        let mut a = p;
        let mut b = p;
        a[0] += h;
        b[0] -= h;
        Ok((density(a)? - density(b)?) / (2.0 * h))
    };
    let d = (4.0 * central(0.5 * step)? - central(step)?) / 3.0;
    let g = chart.components(p)?;
    let h1 = 1.0 / g[0].v.sqrt();
    Ok((h1 * d / (f.abs().sqrt() * (g[1].v * g[2].v).sqrt())).abs())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiProfile {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Sign `ε` of `f`.
    pub epsilon: f64,
    pub max_residual: f64,
}

/// Least-squares fit of `|f|^{−1/2} = Ax² + Bx + C` along `x` through
/// `(x, y₀, z₀)`.
pub fn phi_profile_check(chart: &MetricChart, xs: &[f64], yz: [f64; 2]) -> Result<PhiProfile> {
    if xs.len() < 3 {
        return Err(Error::InvalidParameter("need at least 3 sample abscissae".into()));
    }
    let mut fs = Vec::with_capacity(xs.len());
    for &x in xs {
        fs.push(half_rho11(&frame_data(chart, [x, yz[0], yz[1]])?));
    }
    let scale = fs.iter().fold(0.0f64, |m, f| m.max(f.abs()));
    if fs.iter().any(|f| f.abs() <= 1e-12 * scale.max(1.0)) || fs.iter().any(|f| f.signum() != fs[0].signum()) {
        return Err(Error::SignChange);
    }
    let phi2: Vec<f64> = fs.iter().map(|f| f.abs().powf(-0.5)).collect();
    // normal equations for the basis (x², x, 1)
    let basis = |x: f64| [x * x, x, 1.0];
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for (&x, &y) in xs.iter().zip(&phi2) {
        let r = basis(x);
        for i in 0..3 {
            atb[i] += r[i] * y;
            for j in 0..3 {
                ata[i][j] += r[i] * r[j];
            }
        }
    }
    let [a, b, c] = solve3(ata, atb).ok_or_else(|| Error::InvalidParameter("sample abscissae are degenerate".into()))?;
    let max_residual = xs.iter().zip(&phi2).map(|(&x, &y)| (a * x * x + b * x + c - y).abs()).fold(0.0, f64::max);
    Ok(PhiProfile { a, b, c, epsilon: fs[0].signum(), max_residual })
}

fn solve3(m: [[f64; 3]; 3], v: [f64; 3]) -> Option<[f64; 3]> {
    let det = |m: [[f64; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(m);
    let norm = m.iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
    if d.abs() <= 1e-14 * norm.powi(3) {
        return None;
    }
    Some(std::array::from_fn(|k| {
        let mut mk = m;
        for r in 0..3 {
            mk[r][k] = v[r];
        }
        det(mk) / d
    }))
}

/// `max |T(eᵢ,eⱼ,e_k) − T(eⱼ,eᵢ,e_k)|` with
/// `T(X,Y,Z) = (∇_Xρ)(Y,Z) − ¼⟨Y,Z⟩X(s)`.
pub fn conformal_flat_residual(chart: &MetricChart, p: [f64; 3], step: f64) -> Result<f64> {
    let fd = frame_data(chart, p)?;
    let rho = frame_ricci_of(&fd);
    let g = &fd.gamma;
    let mut drho = Vec::with_capacity(3);
    let mut ds = [0.0; 3];
    for i in 0..3 {
        let d = matrix_derivative(chart, p, i, step, frame_ricci_of)?.scaled(fd.h[i]);
        ds[i] = d.trace();
        drho.push(d);
    }
    // (∇_{e_i}ρ)(e_j,e_k) = e_i(ρ_jk) − Σ_m Γ^m_{ji} ρ_mk − Σ_m Γ^m_{ki} ρ_jm
    let nabla = |i: usize, j: usize, k: usize| {
        let mut v = drho[i][(j, k)];
        for m in 0..3 {
            v -= g[m][j][i] * rho[(m, k)] + g[m][k][i] * rho[(j, m)];
        }
        v
    };
    let t = |i: usize, j: usize, k: usize| nabla(i, j, k) - if j == k { 0.25 * ds[i] } else { 0.0 };
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                worst = worst.max((t(i, j, k) - t(j, i, k)).abs());
            }
        }
    }
    Ok(worst)
}

/// `dt² + f(t)ds²_K` with `f = Kt² + At + B`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WarpedProduct {
    pub k: f64,
    pub a: f64,
    pub b: f64,
}

impl WarpedProduct {
    pub fn warp(&self, t: f64) -> f64 {
        self.k * t * t + self.a * t + self.b
    }

    /// `C(t) = (4KB − A²)/(4f²)`.
    pub fn c(&self, t: f64) -> f64 {
        (4.0 * self.k * self.b - self.a * self.a) / (4.0 * self.warp(t).powi(2))
    }

    pub fn chart(&self) -> MetricChart {
        MetricChart::Warped { k: self.k, a: self.a, b: self.b }
    }
}

/// Curvature of the warped product at height `t` in the frame
/// `(∂t, base orthonormal frame)`, together with `C(t)`.
///
/// Built from the general formulas for `dt² + w(t)g_K`: mixed planes have
/// curvature `(w′² − 2ww″)/(4w²)` and base planes `(4Kw − w′²)/(4w²)`.
pub fn warped_curvature(wp: &WarpedProduct, base_dim: usize, t: f64) -> Result<(CurvatureTensor, f64)> {
    let w = wp.warp(t);
    if !(w > 0.0) {
        return Err(Error::DegenerateWarp(w));
    }
    let dim = base_dim + 1;
    let w1 = 2.0 * wp.k * t + wp.a;
    let w2 = 2.0 * wp.k;
    let mixed = (w1 * w1 - 2.0 * w * w2) / (4.0 * w * w);
    let base = (4.0 * wp.k * w - w1 * w1) / (4.0 * w * w);
    // R = base·R¹ on the base directions plus mixed·R¹ on planes through ∂t
    let full = constant_curvature(dim, 1.0)?;
    let mut comps = full.components().to_vec();
    let n = dim;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let slot = ((i * n + j) * n + k) * n + l;
                    if comps[slot] != 0.0 {
                        let touches_t = [i, j, k, l].contains(&0);
                        comps[slot] *= if touches_t { mixed } else { base };
                    }
                }
            }
        }
    }
    Ok((CurvatureTensor::from_components(dim, comps)?, wp.c(t)))
}

/// `R^{C(t)}_φ` with `φ` the reflection in the hyperplane orthogonal to `∂t`.
pub fn warped_model(wp: &WarpedProduct, base_dim: usize, t: f64) -> Result<CurvatureTensor> {
    r_phi(base_dim + 1, wp.c(t), &reflection(base_dim + 1, 1))
}

/// Frame Ricci tensor via the generic contraction, for cross-checks.
pub fn ricci_from_tensor(chart: &MetricChart, p: [f64; 3]) -> Result<Mat> {
    Ok(ricci(&frame_curvature(chart, p)?))
}
