//! Algebraic curvature tensors and their skew-symmetric curvature operators.
//!
//! Conventions used throughout the crate:
//!
//! * `R(X,Y,Z,W) = ⟨R(X,Y)W, Z⟩` and `R_{ijkl} = R(e_i, e_j, e_k, e_l)`.
//! * Constant curvature `C` is `R(X,Y)Z = C(⟨Y,Z⟩X − ⟨X,Z⟩Y)`, so the unit
//!   sphere has `R_{1212} = +1`.
//! * Ricci is `ρ_{jl} = Σ_i R_{ijil}`; constant curvature `C` in dimension
//!   `n` gives `(n − 1)C·I`.

mod file;
mod structure;

pub use file::{parse_tensor_file, write_tensor_file, TensorEntry, TensorFile};
pub use structure::{eigenvalue_structure, is_ip, EigenPair, EigenStructure, IpMismatch, IpReport};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{wedge_norm, Mat, OrientedPlane, Vector};

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 8;

/// Absolute symmetry tolerance, scaled by `max(1, max |R_{ijkl}|)`.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Dense `(0,4)` tensor with the symmetries of a Riemannian curvature tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTensor", into = "RawTensor")]
pub struct CurvatureTensor {
    dim: usize,
    comps: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawTensor {
    dim: usize,
    components: Vec<f64>,
}

impl TryFrom<RawTensor> for CurvatureTensor {
    type Error = Error;
    fn try_from(raw: RawTensor) -> Result<Self> {
        CurvatureTensor::from_components(raw.dim, raw.components)
    }
}

impl From<CurvatureTensor> for RawTensor {
    fn from(t: CurvatureTensor) -> Self {
        RawTensor { dim: t.dim, components: t.comps }
    }
}

#[inline]
pub(crate) fn idx(dim: usize, i: usize, j: usize, k: usize, l: usize) -> usize {
    ((i * dim + j) * dim + k) * dim + l
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::DimUnsupported(dim))
    }
}

pub(crate) fn orbit([i, j, k, l]: [usize; 4]) -> [([usize; 4], f64); 8] {
    [
        ([i, j, k, l], 1.0),
        ([j, i, k, l], -1.0),
        ([i, j, l, k], -1.0),
        ([j, i, l, k], 1.0),
        ([k, l, i, j], 1.0),
        ([l, k, i, j], -1.0),
        ([k, l, j, i], -1.0),
        ([l, k, j, i], 1.0),
    ]
}

impl CurvatureTensor {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, comps: vec![0.0; dim.pow(4)] })
    }

    /// Validates every curvature symmetry before accepting the components.
    pub fn from_components(dim: usize, comps: Vec<f64>) -> Result<Self> {
        check_dim(dim)?;
        if comps.len() != dim.pow(4) {
            return Err(Error::DimMismatch { expected: dim.pow(4), got: comps.len() });
        }
        if comps.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidTensor("non-finite component".into()));
        }
        let res = bianchi_residuals_raw(dim, &comps);
        let scale = comps.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        if res.max() > SYMMETRY_TOL * scale {
            return Err(Error::InvalidTensor(format!(
                "residuals {res:?} exceed {:e}",
                SYMMETRY_TOL * scale
            )));
        }
        Ok(Self { dim, comps })
    }

    /// Caller guarantees the symmetries (used by constructors that build
    /// components through [`set_symmetric`] or an exact projection).
    pub(crate) fn from_components_unchecked(dim: usize, comps: Vec<f64>) -> Self {
        debug_assert_eq!(comps.len(), dim.pow(4));
        Self { dim, comps }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn components(&self) -> &[f64] {
        &self.comps
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.comps[idx(self.dim, i, j, k, l)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.comps.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.comps.iter().zip(&other.comps).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { dim: self.dim, comps: self.comps.iter().map(|x| s * x).collect() }
    }

    /// `self + s · other`
    pub fn axpy(&self, s: f64, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch { expected: self.dim, got: other.dim });
        }
        Ok(Self {
            dim: self.dim,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a + s * b).collect(),
        })
    }

    /// `⟨R(X,Y)W, Z⟩` for arbitrary vectors.
    pub fn evaluate(&self, x: &Vector, y: &Vector, z: &Vector, w: &Vector) -> f64 {
        let n = self.dim;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        acc += xy * z[k] * w[l] * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }
}

/// `R^C`: constant sectional curvature `c`.
pub fn constant_curvature(dim: usize, c: f64) -> Result<CurvatureTensor> {
    r_phi(dim, c, &Mat::identity(dim))
}

/// `R^C_φ(X,Y) = R^C(φX, φY)` for an orthogonal involution `φ`.
pub fn r_phi(dim: usize, c: f64, phi: &Mat) -> Result<CurvatureTensor> {
    check_dim(dim)?;
    if phi.rows() != dim || phi.cols() != dim {
        return Err(Error::DimMismatch { expected: dim, got: phi.rows() });
    }
    let defect = phi.orthogonality_defect().max((&(phi * phi) - &Mat::identity(dim)).frobenius_norm());
    if defect > 1e-10 {
        return Err(Error::BadInvolution(defect));
    }
    let n = dim;
    let mut comps = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    comps[idx(n, i, j, k, l)] =
                        c * (phi[(k, i)] * phi[(l, j)] - phi[(l, i)] * phi[(k, j)]);
                }
            }
        }
    }
    // φ is symmetric only up to rounding; enforce the symmetries exactly
    Ok(CurvatureTensor::from_components_unchecked(n, symmetrize_pairs(n, &comps)))
}

/// Average over the eight-element symmetry group (antisymmetries and pair
/// swap). Exact projection onto `S²(Λ²)`.
pub(crate) fn symmetrize_pairs(n: usize, t: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; n.pow(4)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let s: f64 = orbit([i, j, k, l])
                        .iter()
                        .map(|([a, b, c, d], sign)| sign * t[idx(n, *a, *b, *c, *d)])
                        .sum();
                    out[idx(n, i, j, k, l)] = s / 8.0;
                }
            }
        }
    }
    out
}

/// Matrix of the skew endomorphism `R(X,Y)`: `(R(X,Y)W)_k = Σ_l M_{kl} W_l`.
pub fn curvature_operator(r: &CurvatureTensor, x: &Vector, y: &Vector) -> Result<Mat> {
    let n = r.dim();
    for v in [x, y] {
        if v.dim() != n {
            return Err(Error::DimMismatch { expected: n, got: v.dim() });
        }
    }
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let xy = x[i] * y[j];
            if xy == 0.0 {
                continue;
            }
            for k in 0..n {
                for l in 0..n {
                    m[(k, l)] += xy * r.get(i, j, k, l);
                }
            }
        }
    }
    Ok(m)
}

/// `R(π) = ‖X∧Y‖⁻¹ R(X,Y)`.
pub fn plane_operator(r: &CurvatureTensor, plane: &OrientedPlane) -> Result<Mat> {
    let w = wedge_norm(&plane.x, &plane.y);
    if w < 1e-10 {
        return Err(Error::DegeneratePlane(w));
    }
    Ok(curvature_operator(r, &plane.x, &plane.y)?.scaled(1.0 / w))
}

pub fn ricci(r: &CurvatureTensor) -> Mat {
    let n = r.dim();
    Mat::from_fn(n, n, |j, l| (0..n).map(|i| r.get(i, j, i, l)).sum())
}

pub fn scalar_curvature(r: &CurvatureTensor) -> f64 {
    ricci(r).trace()
}

/// Largest absolute violation of each symmetry family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BianchiResiduals {
    /// `R_{ijkl} + R_{jikl}` and `R_{ijkl} + R_{ijlk}`.
    pub antisym: f64,
    /// `R_{ijkl} − R_{klij}`.
    pub pair_sym: f64,
    /// `R_{ijkl} + R_{jkil} + R_{kijl}`.
    pub first_bianchi: f64,
    /// Index at which the overall maximum occurs.
    pub worst_index: [usize; 4],
}

impl BianchiResiduals {
    pub fn max(&self) -> f64 {
        self.antisym.max(self.pair_sym).max(self.first_bianchi)
    }
}

pub fn bianchi_residuals(r: &CurvatureTensor) -> BianchiResiduals {
    bianchi_residuals_raw(r.dim(), r.components())
}

/// Residuals for an arbitrary `dim⁴` array.
pub fn bianchi_residuals_raw(n: usize, t: &[f64]) -> BianchiResiduals {
    let mut res = BianchiResiduals { antisym: 0.0, pair_sym: 0.0, first_bianchi: 0.0, worst_index: [0; 4] };
    let mut worst = 0.0;
    let g = |i, j, k, l| t[idx(n, i, j, k, l)];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let v = g(i, j, k, l);
                    let a = (v + g(j, i, k, l)).abs().max((v + g(i, j, l, k)).abs());
                    let p = (v - g(k, l, i, j)).abs();
                    let b = (v + g(j, k, i, l) + g(k, i, j, l)).abs();
                    res.antisym = res.antisym.max(a);
                    res.pair_sym = res.pair_sym.max(p);
                    res.first_bianchi = res.first_bianchi.max(b);
                    let m = a.max(p).max(b);
                    if m > worst {
                        worst = m;
                        res.worst_index = [i, j, k, l];
                    }
                }
            }
        }
    }
    res
}

/// Diagonal involution with `minus` leading `−1` entries.
pub fn reflection(dim: usize, minus: usize) -> Mat {
    Mat::diag(&(0..dim).map(|i| if i < minus { -1.0 } else { 1.0 }).collect::<Vec<_>>())
}
