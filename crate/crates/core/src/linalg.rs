//! Small dense linear algebra for dimensions up to eight.
//!
//! Everything here is deliberately plain: row-major `f64` storage, cyclic
//! Jacobi for symmetric eigenproblems and one-sided (Hestenes) Jacobi for
//! singular values. At these sizes both are accurate to a few ulps and need
//! no pivoting heuristics.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seedable generator used by every sampling routine in the crate.
pub type Rng = ChaCha8Rng;

/// Default relative tolerance for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

const JACOBI_OFF_DIAG: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense real vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(entries: Vec<f64>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// Standard basis vector `e_index` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = 1.0;
        v
    }

    pub fn gaussian(dim: usize, rng: &mut Rng) -> Self {
        Self((0..dim).map(|_| StandardNormal.sample(rng)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn dot(&self, other: &Vector) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> Vector {
        Vector(self.0.iter().map(|x| x * s).collect())
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + s * b).collect())
    }

    pub fn normalized(&self) -> Vector {
        self.scaled(1.0 / self.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Index<usize> for Vector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.axpy(-1.0, rhs)
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:>12.6} ", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vector]) -> Self {
        let rows = columns.first().map_or(0, Vector::dim);
        Self::from_fn(rows, columns.len(), |i, j| columns[j][i])
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn outer(a: &Vector, b: &Vector) -> Self {
        Self::from_fn(a.dim(), b.dim(), |i, j| a[i] * b[j])
    }

    /// Block-diagonal assembly of square or rectangular blocks.
    pub fn block_diag(blocks: &[Mat]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)];
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn gaussian(rows: usize, cols: usize, rng: &mut Rng) -> Self {
        Self::from_fn(rows, cols, |_, _| StandardNormal.sample(rng))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: f64) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim());
        Vector::new((0..self.rows).map(|i| dot(self.row(i), v.as_slice())).collect())
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `‖M − Mᵗ‖_F`.
    pub fn asymmetry(&self) -> f64 {
        assert!(self.is_square());
        (self - &self.transpose()).frobenius_norm()
    }

    /// `‖M + Mᵗ‖_F`.
    pub fn skew_defect(&self) -> f64 {
        assert!(self.is_square());
        (self + &self.transpose()).frobenius_norm()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square() && self.asymmetry() <= tol * self.frobenius_norm().max(1.0)
    }

    pub fn is_skew(&self, tol: f64) -> bool {
        self.is_square() && self.skew_defect() <= tol * self.frobenius_norm().max(1.0)
    }

    /// `‖MᵗM − I‖_F`.
    pub fn orthogonality_defect(&self) -> f64 {
        (&(&self.transpose() * self) - &Mat::identity(self.cols)).frobenius_norm()
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.is_square() && self.orthogonality_defect() <= tol
    }

    /// Submatrix of rows `r0..r0+rows` and columns `c0..c0+cols`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        self.scaled(-1.0)
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the unit eigenvector for `eigenvalues[k]`.
    pub eigenvectors: Mat,
}

impl Spectrum {
    /// `Q Λ Qᵗ`.
    pub fn reconstruct(&self) -> Mat {
        let q = &self.eigenvectors;
        let lambda = Mat::diag(&self.eigenvalues);
        &(q * &lambda) * &q.transpose()
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn sym_eigen(m: &Mat, tol: f64) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::DimMismatch { expected: m.rows(), got: m.cols() });
    }
    let norm = m.frobenius_norm();
    let asym = m.asymmetry();
    if asym > tol * norm {
        return Err(Error::NotSymmetric { asymmetry: asym, tol });
    }
    let n = m.rows();
    // symmetrize so that rounding in the input cannot bias the rotations
    let mut a = Mat::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut v = Mat::identity(n);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum::<f64>()
            .sqrt();
        if off <= JACOBI_OFF_DIAG * norm {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    Ok(Spectrum {
        eigenvalues: order.iter().map(|&i| a[(i, i)]).collect(),
        eigenvectors: Mat::from_fn(n, n, |r, c| v[(r, order[c])]),
    })
}

/// Right-sided singular value decomposition `M V = U Σ`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// One value per column of the input, descending. When `cols > rows`
    /// the trailing `cols − rows` values are (numerically) zero.
    pub singular_values: Vec<f64>,
    /// Orthogonal `cols × cols`; column `k` pairs with `singular_values[k]`.
    pub right_vectors: Mat,
}

/// One-sided Jacobi SVD.
pub fn svd(m: &Mat) -> Svd {
    let (rows, cols) = (m.rows(), m.cols());
    let mut u = m.clone();
    let mut v = Mat::identity(cols);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, 0.0);
                for i in 0..rows {
                    alpha += u[(i, p)] * u[(i, p)];
                    beta += u[(i, q)] * u[(i, q)];
                    gamma += u[(i, p)] * u[(i, q)];
                }
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..rows {
                    let (up, uq) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = c * up - s * uq;
                    u[(i, q)] = s * up + c * uq;
                }
                for i in 0..cols {
                    let (vp, vq) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let norms: Vec<f64> = (0..cols).map(|j| u.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Svd {
        singular_values: order.iter().map(|&j| norms[j]).collect(),
        right_vectors: Mat::from_fn(cols, cols, |r, c| v[(r, order[c])]),
    }
}

/// The `min(rows, cols)` singular values, descending.
pub fn singular_values(m: &Mat) -> Vec<f64> {
    // work on the orientation with fewer columns so no spurious zeros appear
    let mut s = if m.cols() <= m.rows() { svd(m) } else { svd(&m.transpose()) }.singular_values;
    s.truncate(m.rows().min(m.cols()));
    s
}

/// Number of singular values above `tol · max(1, σ_max)`.
pub fn numeric_rank(m: &Mat, tol: f64) -> usize {
    let s = singular_values(m);
    let cutoff = tol * s.first().copied().unwrap_or(0.0).max(1.0);
    s.iter().filter(|&&x| x > cutoff).count()
}

/// Ordered orthonormal pair spanning an oriented 2-plane.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane {
    pub x: Vector,
    pub y: Vector,
}

impl OrientedPlane {
    /// Gram–Schmidt on `(x, y)`; fails when the pair is (nearly) parallel.
    pub fn from_spanning(x: &Vector, y: &Vector) -> Result<Self> {
        if x.dim() != y.dim() {
            return Err(Error::DimMismatch { expected: x.dim(), got: y.dim() });
        }
        let w = wedge_norm(x, y);
        if w < 1e-10 * x.norm().max(1.0) * y.norm().max(1.0) {
            return Err(Error::DegeneratePlane(w));
        }
        let e1 = x.normalized();
        let e2 = y.axpy(-y.dot(&e1), &e1).normalized();
        Ok(Self { x: e1, y: e2 })
    }

    pub fn dim(&self) -> usize {
        self.x.dim()
    }

    /// The same plane with the opposite orientation.
    pub fn flipped(&self) -> Self {
        Self { x: self.y.clone(), y: self.x.clone() }
    }

    /// Basis rotated by `theta` inside the plane; orientation is preserved.
    pub fn rotated(&self, theta: f64) -> Self {
        let (c, s) = (theta.cos(), theta.sin());
        Self {
            x: self.x.scaled(c).axpy(s, &self.y),
            y: self.x.scaled(-s).axpy(c, &self.y),
        }
    }
}

/// `(‖X‖²‖Y‖² − ⟨X,Y⟩²)^{1/2}`, the area of the parallelogram on `X, Y`.
pub fn wedge_norm(x: &Vector, y: &Vector) -> f64 {
    let (xx, yy, xy) = (x.dot(x), y.dot(y), x.dot(y));
    (xx * yy - xy * xy).max(0.0).sqrt()
}

/// Uniformly distributed oriented plane, drawn from `rng`.
pub fn sample_plane(dim: usize, rng: &mut Rng) -> OrientedPlane {
    loop {
        let x = Vector::gaussian(dim, rng);
        let y = Vector::gaussian(dim, rng);
        if let Ok(p) = OrientedPlane::from_spanning(&x, &y) {
            return p;
        }
    }
}

/// Uniformly distributed oriented plane, deterministic in `seed`.
pub fn random_orthonormal_pair(dim: usize, seed: u64) -> OrientedPlane {
    assert!(dim >= 2, "need at least two dimensions");
    sample_plane(dim, &mut rng_from_seed(seed))
}

/// Haar-distributed orthogonal matrix (Gaussian matrix, then Gram–Schmidt).
pub fn random_orthogonal(dim: usize, rng: &mut Rng) -> Mat {
    loop {
        let g = Mat::gaussian(dim, dim, rng);
        let mut cols: Vec<Vector> = Vec::with_capacity(dim);
        let mut ok = true;
        for j in 0..dim {
            let mut c = g.column(j);
            // two passes of modified Gram-Schmidt
            for _ in 0..2 {
                for prev in &cols {
                    c = c.axpy(-c.dot(prev), prev);
                }
            }
            let n = c.norm();
            if n < 1e-8 {
                ok = false;
                break;
            }
            cols.push(c.scaled(1.0 / n));
        }
        if ok {
            return Mat::from_columns(&cols);
        }
    }
}
