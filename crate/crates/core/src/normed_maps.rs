//! Skew bilinear maps `R⁷ × R⁷ → R⁷` with `‖B(X,Y)‖ = ‖X∧Y‖`, realized by
//! the octonion cross product, and the orthogonal operator `U` built from
//! the extended normed map `B̄(X,Y) = ⟨X,Y⟩e₀ + B(X,Y)`.
//!
//! Octonion convention: imaginary units `e₁…e₇` with `e_a e_b = e_c` for the
//! cyclic triples (123), (145), (176), (246), (257), (347), (365). Any other
//! sign convention is related to this one by an orthogonal change of basis.
//! In code the units are 0-based, so `e₁ ↦ 0`.

use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, svd, Mat, Vector, DEFAULT_RANK_TOL};

pub const OCTONION_TRIPLES: [[usize; 3]; 7] =
    [[1, 2, 3], [1, 4, 5], [1, 7, 6], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 6, 5]];

/// Structure constants `b_{ijk}` with `B(e_i, e_j) = Σ_k b_{ijk} e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearMap7 {
    b: [[[f64; 7]; 7]; 7],
}

impl BilinearMap7 {
    pub fn from_structure_constants(b: [[[f64; 7]; 7]; 7]) -> Self {
        Self { b }
    }

    /// Imaginary part of the octonion product.
    pub fn octonion() -> Self {
        let mut b = [[[0.0; 7]; 7]; 7];
        for t in OCTONION_TRIPLES {
            let [a, c, d] = t.map(|x| x - 1);
            for (i, j, k) in [(a, c, d), (c, d, a), (d, a, c)] {
                b[i][j][k] = 1.0;
                b[j][i][k] = -1.0;
            }
        }
        Self { b }
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.b[i][j][k]
    }

    pub fn apply(&self, x: &Vector, y: &Vector) -> Vector {
        assert!(x.dim() == 7 && y.dim() == 7, "bilinear map acts on R⁷");
        let mut out = Vector::zeros(7);
        for i in 0..7 {
            if x[i] == 0.0 {
                continue;
            }
            for j in 0..7 {
                let xy = x[i] * y[j];
                if xy == 0.0 {
                    continue;
                }
                for k in 0..7 {
                    out[k] += xy * self.b[i][j][k];
                }
            }
        }
        out
    }

    /// `B̄(X,Y) = ⟨X,Y⟩e₀ + B(X,Y) ∈ R⁸`, with `e₀` as coordinate 0.
    pub fn extended(&self, x: &Vector, y: &Vector) -> Vector {
        let b = self.apply(x, y);
        let mut out = Vec::with_capacity(8);
        out.push(x.dot(y));
        out.extend_from_slice(b.as_slice());
        Vector::new(out)
    }

    /// Largest `|b_{ijk} + b_{jik}|`.
    pub fn skew_defect(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                for k in 0..7 {
                    m = m.max((self.b[i][j][k] + self.b[j][i][k]).abs());
                }
            }
        }
        m
    }
}

/// The octonion cross product `Im(XY)` for imaginary octonions `X, Y`.
pub fn octonion_cross(x: &Vector, y: &Vector) -> Vector {
    BilinearMap7::octonion().apply(x, y)
}

/// `A_X : R⁸ → R⁷` defined by `⟨A_X Z, Y⟩ = ⟨B̄(X,Y), Z⟩`, as a 7×8 matrix.
pub fn a_operator(b: &BilinearMap7, x: &Vector) -> Mat {
    let rows: Vec<Vector> = (0..7).map(|y| b.extended(x, &Vector::basis(7, y))).collect();
    Mat::from_fn(7, 8, |r, c| rows[r][c])
}

/// Unit vector spanning `Ker A_{X₀}`.
///
/// Accepted when the smallest singular value is below `1e-9` and the next
/// one exceeds `1e-6`.
pub fn kernel_vector(a0: &Mat) -> Result<Vector> {
    let s = svd(a0);
    let n = s.singular_values.len();
    let (smallest, second) = (s.singular_values[n - 1], s.singular_values[n - 2]);
    if smallest > 1e-9 || second < 1e-6 {
        return Err(Error::KernelNotOneDim { smallest, second });
    }
    Ok(s.right_vectors.column(n - 1))
}

/// The orthogonal operator `U` with `UX ⊥ B(X, Y)` for all `X, Y`.
///
/// `V X₀ = Z₀` and `V X = −A₀ᵗ A_X Z₀` for `X ⊥ X₀`, extended linearly;
/// `U` drops the `e₀` component of `V`.
pub fn build_u(b: &BilinearMap7, x0: &Vector) -> Result<Mat> {
    if x0.dim() != 7 {
        return Err(Error::DimMismatch { expected: 7, got: x0.dim() });
    }
    if (x0.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("X₀ must be a unit vector (norm {})", x0.norm())));
    }
    let a0 = a_operator(b, x0);
    let z0 = kernel_vector(&a0)?;
    let a0t = a0.transpose();
    let columns: Vec<Vector> = (0..7)
        .map(|i| {
            let e = Vector::basis(7, i);
            let along = e.dot(x0);
            let perp = e.axpy(-along, x0);
            let ax = a_operator(b, &perp);
            let v_perp = a0t.mul_vec(&ax.mul_vec(&z0)).scaled(-1.0);
            v_perp.axpy(along, &z0)
        })
        .collect();
    let v = Mat::from_columns(&columns);
    Ok(v.block(1, 0, 7, 7))
}

/// `dim 𝒦(X)`: numeric rank of the matrix with columns `B(X, e_j)`.
pub fn kx_dimension(b: &BilinearMap7, x: &Vector) -> usize {
    let cols: Vec<Vector> = (0..7).map(|j| b.apply(x, &Vector::basis(7, j))).collect();
    numeric_rank(&Mat::from_columns(&cols), DEFAULT_RANK_TOL)
}
