//! Operator identities around the two candidate eigenvalue structures
//! (1,2,4) and (3,4) in dimension 7, checked on conjugated normal forms.
//!
//! Normal form (a) is `blockdiag(𝒥, αJ, 0)` and (b) is `blockdiag(𝒥, 0₃)`,
//! with `𝒥 = [[0, I₂], [−I₂, 0]]` and `J = [[0, 1], [−1, 0]]`.

use serde::{Deserialize, Serialize};

use crate::curvature::{r_phi, CurvatureTensor};
use crate::error::{Error, Result};
use crate::linalg::{numeric_rank, rng_from_seed, singular_values, Mat, Vector};
use crate::normed_maps::kernel_vector;

/// `𝒥 = [[0, I₂], [−I₂, 0]]`.
pub fn calj() -> Mat {
    Mat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 2) | (1, 3) => 1.0,
        (2, 0) | (3, 1) => -1.0,
        _ => 0.0,
    })
}

/// `J = [[0, 1], [−1, 0]]`.
pub fn small_j() -> Mat {
    Mat::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]])
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NormalFormKind {
    A { alpha: f64 },
    B,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormFamily {
    pub kind: NormalFormKind,
    pub q: Mat,
    pub scale: f64,
}

impl NormalFormFamily {
    pub fn new(kind: NormalFormKind, q: Mat, scale: f64) -> Result<Self> {
        if let NormalFormKind::A { alpha } = kind {
            if alpha == 0.0 || alpha.abs() == 1.0 || !alpha.is_finite() {
                return Err(Error::InvalidParameter(format!("alpha must avoid 0 and ±1, got {alpha}")));
            }
        }
        if !(scale >= 0.0) {
            return Err(Error::InvalidParameter(format!("scale must be nonnegative, got {scale}")));
        }
        if q.rows() != 7 || !q.is_orthogonal(1e-9) {
            return Err(Error::InvalidParameter("conjugator must be orthogonal 7×7".into()));
        }
        Ok(Self { kind, q, scale })
    }

    pub fn normal_form(kind: NormalFormKind) -> Mat {
        match kind {
            NormalFormKind::A { alpha } => {
                Mat::block_diag(&[calj(), small_j().scaled(alpha), Mat::zeros(1, 1)])
            }
            NormalFormKind::B => Mat::block_diag(&[calj(), Mat::zeros(3, 3)]),
        }
    }

    /// `s·Q·N·Qᵗ`.
    pub fn member(&self) -> Mat {
        let n = Self::normal_form(self.kind);
        (&(&self.q * &n) * &self.q.transpose()).scaled(self.scale)
    }

    /// `Q e₇`, a unit vector spanning the kernel in case (a).
    pub fn kernel_unit(&self) -> Vector {
        self.q.column(6)
    }
}

fn check_skew(s: &Mat) -> Result<()> {
    if !s.is_square() {
        return Err(Error::DimMismatch { expected: s.rows(), got: s.cols() });
    }
    if !s.is_skew(1e-9) {
        return Err(Error::NotSkew { defect: s.skew_defect(), tol: 1e-9 });
    }
    Ok(())
}

/// `(S² + w²I)(S² + α²w²I)`.
pub fn w_operator(s: &Mat, w: f64, alpha: f64) -> Result<Mat> {
    check_skew(s)?;
    let n = s.rows();
    let s2 = s * s;
    let id = Mat::identity(n);
    let a = &s2 + &id.scaled(w * w);
    let b = &s2 + &id.scaled(alpha * alpha * w * w);
    Ok(&a * &b)
}

/// Unit vector spanning the kernel of `S`.
pub fn kernel_direction(s: &Mat) -> Result<Vector> {
    check_skew(s)?;
    kernel_vector(s)
}

/// `G = S² + ‖Y‖²I − bbᵗ`, where `b` spans `Ker S` with `‖b‖ = ‖Y‖`.
pub fn g_operator(s: &Mat, norm_y: f64, b: &Vector) -> Result<Mat> {
    check_skew(s)?;
    if b.dim() != s.rows() {
        return Err(Error::DimMismatch { expected: s.rows(), got: b.dim() });
    }
    let sb = s.mul_vec(b).norm();
    if sb > 1e-9 {
        return Err(Error::KernelMismatch(sb));
    }
    let scale_defect = (b.norm() - norm_y).abs();
    if scale_defect > 1e-9 {
        return Err(Error::KernelMismatch(scale_defect));
    }
    let n = s.rows();
    Ok(&(&(s * s) + &Mat::identity(n).scaled(norm_y * norm_y)) - &Mat::outer(b, b))
}

/// `M(Y,t) = (S + tαI)·G(Y)`.
pub fn m_operator(s: &Mat, norm_y: f64, b: &Vector, alpha: f64, t: f64) -> Result<Mat> {
    let g = g_operator(s, norm_y, b)?;
    Ok(&(s + &Mat::identity(s.rows()).scaled(t * alpha)) * &g)
}

/// `‖M² − 2α(1−α²)‖Y‖²t·M + α²(1−α²)‖Y‖²(‖Y‖²+t²)·G‖`.
///
/// The coefficient of `G` is `α²`: on the two-dimensional block where `G` is
/// nonzero, `M = f(tI + ‖Y‖J)` with `f = α(1−α²)‖Y‖²`, so the left side is
/// `−f²(‖Y‖²+t²)I`, and `G = (1−α²)‖Y‖²I` there.
pub fn m_identity_residual(s: &Mat, norm_y: f64, b: &Vector, alpha: f64, t: f64) -> Result<f64> {
    m_identity_residual_with(s, norm_y, b, alpha, t, alpha * alpha)
}

/// Same residual with an arbitrary coefficient `c` in place of `α²`.
pub fn m_identity_residual_with(
    s: &Mat,
    norm_y: f64,
    b: &Vector,
    alpha: f64,
    t: f64,
    c: f64,
) -> Result<f64> {
    let g = g_operator(s, norm_y, b)?;
    let m = &(s + &Mat::identity(s.rows()).scaled(t * alpha)) * &g;
    let y2 = norm_y * norm_y;
    let one_minus = 1.0 - alpha * alpha;
    let lhs = &(&m * &m) - &m.scaled(2.0 * alpha * one_minus * y2 * t);
    let rhs = g.scaled(c * one_minus * y2 * (y2 + t * t));
    Ok((&lhs + &rhs).frobenius_norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl PencilResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }
}

/// Norms of the `y²`, `y¹` and `y⁰` coefficients of
/// `(yK + L)³ + (y² + ‖Z‖²)(yK + L)`, assuming `K³ = −K`.
pub fn cubic_pencil_residuals(k: &Mat, l: &Mat, norm_z: f64) -> Result<PencilResiduals> {
    check_skew(k)?;
    check_skew(l)?;
    if k.rows() != l.rows() {
        return Err(Error::DimMismatch { expected: k.rows(), got: l.rows() });
    }
    let z2 = norm_z * norm_z;
    let k2 = k * k;
    let l2 = l * l;
    let r1 = &(&(&(&k2 * l) + &(l * &k2)) + &(&(k * l) * k)) + l;
    let r2 = &(&(&(&l2 * k) + &(k * &l2)) + &(&(l * k) * l)) + &k.scaled(z2);
    let r3 = &(&l2 * l) + &l.scaled(z2);
    Ok(PencilResiduals {
        r1: r1.frobenius_norm(),
        r2: r2.frobenius_norm(),
        r3: r3.frobenius_norm(),
    })
}

/// `‖Bᵗ𝒥B‖` for a 4×3 block.
pub fn isotropy_residual(b: &Mat) -> Result<f64> {
    if b.rows() != 4 || b.cols() != 3 {
        return Err(Error::DimMismatch { expected: 4, got: b.rows() });
    }
    Ok((&(&b.transpose() * &calj()) * b).frobenius_norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleCheck {
    pub ok: bool,
    pub c: f64,
    pub singular_values: [f64; 3],
}

/// Whether the singular values of a 4×3 block have the form `(c, c, 0)`.
pub fn singular_triple_check(b: &Mat, tol: f64) -> Result<TripleCheck> {
    if b.rows() != 4 || b.cols() != 3 {
        return Err(Error::DimMismatch { expected: 4, got: b.rows() });
    }
    let s = singular_values(b);
    let sv = [s[0], s[1], s[2]];
    let scale = sv[0].max(1.0);
    let ok = (sv[0] - sv[1]).abs() <= tol * scale && sv[2] <= tol * scale;
    Ok(TripleCheck { ok, c: 0.5 * (sv[0] + sv[1]), singular_values: sv })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Cc0Verdict {
    FailsProperty { coefficients: [f64; 4], witness: Vec<f64>, singular_values: [f64; 3], sample: usize },
    Inconclusive { samples: usize },
}

impl Cc0Verdict {
    pub fn fails(&self) -> bool {
        matches!(self, Cc0Verdict::FailsProperty { .. })
    }
}

/// Searches random combinations of a 4-dimensional space of 4×3 matrices
/// for one whose singular values are not `(c, c, 0)`.
pub fn cc0_probe(basis: &[Mat], samples: usize, tol: f64, seed: u64) -> Result<Cc0Verdict> {
    if basis.len() != 4 {
        return Err(Error::InvalidParameter(format!("need 4 basis matrices, got {}", basis.len())));
    }
    if let Some(bad) = basis.iter().find(|m| m.rows() != 4 || m.cols() != 3) {
        return Err(Error::DimMismatch { expected: 4, got: bad.rows() });
    }
    let flat = Mat::from_fn(4, 12, |r, c| basis[r].as_slice()[c]);
    if numeric_rank(&flat, tol) < 4 {
        return Err(Error::DependentBasis);
    }
    let stacked = Mat::from_fn(16, 3, |r, c| basis[r / 4][(r % 4, c)]);
    if numeric_rank(&stacked, tol) < 3 {
        return Err(Error::CommonKernel);
    }
    let mut rng = rng_from_seed(seed);
    for sample in 0..samples {
        let coeffs = Vector::gaussian(4, &mut rng);
        let mut m = Mat::zeros(4, 3);
        for (c, bm) in coeffs.as_slice().iter().zip(basis) {
            m = &m + &bm.scaled(*c);
        }
        let check = singular_triple_check(&m, tol)?;
        if !check.ok {
            return Ok(Cc0Verdict::FailsProperty {
                coefficients: coeffs.as_slice().try_into().expect("four coefficients"),
                witness: m.as_slice().to_vec(),
                singular_values: check.singular_values,
                sample,
            });
        }
    }
    Ok(Cc0Verdict::Inconclusive { samples })
}

/// Skew 3×3 matrix of `v ×` padded with a zero fourth row.
pub fn model_block(v: [f64; 3]) -> Mat {
    let [a, b, c] = v;
    Mat::from_rows(&[vec![0.0, -c, b], vec![c, 0.0, -a], vec![-b, a, 0.0], vec![0.0, 0.0, 0.0]])
}

/// `R − ε·R^α_U`.
pub fn split_tensor(r: &CurvatureTensor, u: &Mat, alpha: f64, epsilon: f64) -> Result<CurvatureTensor> {
    if epsilon.abs() != 1.0 {
        return Err(Error::InvalidParameter(format!("epsilon must be ±1, got {epsilon}")));
    }
    let ru = r_phi(r.dim(), alpha, u)?;
    r.axpy(-epsilon, &ru)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{constant_curvature, reflection};
    use crate::linalg::{random_orthogonal, sym_eigen, Rng};

    fn family(kind: NormalFormKind, scale: f64, rng: &mut Rng) -> NormalFormFamily {
        NormalFormFamily::new(kind, random_orthogonal(7, rng), scale).unwrap()
    }

    fn plain(kind: NormalFormKind, scale: f64) -> NormalFormFamily {
        NormalFormFamily::new(kind, Mat::identity(7), scale).unwrap()
    }

    const A2: NormalFormKind = NormalFormKind::A { alpha: 2.0 };

    #[test]
    fn family_rejects_forbidden_alpha() {
        for alpha in [0.0, 1.0, -1.0] {
            assert!(NormalFormFamily::new(NormalFormKind::A { alpha }, Mat::identity(7), 1.0).is_err());
        }
    }

    #[test]
    fn w_operator_on_normal_form() {
        let s = plain(A2, 1.0).member();
        let w = w_operator(&s, 1.0, 2.0).unwrap();
        assert_eq!(numeric_rank(&w, 1e-9), 1);
        let spec = sym_eigen(&w, 1e-9).unwrap();
        assert!((spec.eigenvalues[6] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn w_operator_of_zero() {
        let w = w_operator(&Mat::zeros(7, 7), 1.0, 2.0).unwrap();
        assert_eq!(w, Mat::identity(7).scaled(4.0));
    }

    #[test]
    fn w_operator_conjugation_and_scale_invariance() {
        let mut rng = rng_from_seed(21);
        for i in 0..100 {
            let s = [0.5, 1.0, 2.0][i % 3];
            let f = family(A2, s, &mut rng);
            let w = w_operator(&f.member(), s, 2.0).unwrap();
            assert_eq!(numeric_rank(&w, 1e-9), 1);
            assert!((w.trace() / s.powi(4) - 4.0).abs() < 1e-9);
        }
    }

    #[test]
    fn g_operator_spectrum() {
        let f = plain(A2, 1.0);
        let g = g_operator(&f.member(), 1.0, &f.kernel_unit()).unwrap();
        let ev = sym_eigen(&g, 1e-9).unwrap().eigenvalues;
        assert!((ev[0] + 3.0).abs() < 1e-12 && (ev[1] + 3.0).abs() < 1e-12);
        assert!(ev[2..].iter().all(|e| e.abs() < 1e-12));

        let mut rng = rng_from_seed(4);
        let f = family(A2, 2.0, &mut rng);
        let g = g_operator(&f.member(), 2.0, &f.kernel_unit().scaled(2.0)).unwrap();
        let ev = sym_eigen(&g, 1e-9).unwrap().eigenvalues;
        assert!((ev[0] + 12.0).abs() < 1e-9 && (ev[1] + 12.0).abs() < 1e-9);
        assert!(ev[2..].iter().all(|e| e.abs() < 1e-9));
    }

    #[test]
    fn g_operator_kernel_mismatch() {
        let f = plain(A2, 1.0);
        let wrong = Vector::basis(7, 0);
        assert!(matches!(g_operator(&f.member(), 1.0, &wrong), Err(Error::KernelMismatch(_))));
        let unit = Vector::basis(7, 0);
        assert!(matches!(g_operator(&Mat::zeros(7, 7), 2.0, &unit), Err(Error::KernelMismatch(_))));
    }

    #[test]
    fn m_identity_holds_on_family() {
        let mut rng = rng_from_seed(31);
        for alpha in [1.5, 2.0, 3.0, -0.5] {
            for s in [0.5, 1.0, 2.0] {
                let f = family(NormalFormKind::A { alpha }, s, &mut rng);
                let b = f.kernel_unit().scaled(s);
                for t in [-1.0, 0.0, 0.7, 2.0] {
                    let res = m_identity_residual(&f.member(), s, &b, alpha, t).unwrap();
                    assert!(res <= 1e-8 * s.powi(6).max(1.0), "alpha {alpha} s {s} t {t}: {res}");
                }
            }
        }
    }

    #[test]
    fn m_identity_at_zero_t() {
        let f = plain(A2, 1.0);
        let b = f.kernel_unit();
        let s = f.member();
        let m = m_operator(&s, 1.0, &b, 2.0, 0.0).unwrap();
        let g = g_operator(&s, 1.0, &b).unwrap();
        let direct = (&(&m * &m) + &g.scaled(4.0 * (1.0 - 4.0))).frobenius_norm();
        assert!(direct < 1e-12);
        assert!(m_identity_residual(&s, 1.0, &b, 2.0, 0.0).unwrap() < 1e-12);
    }

    #[test]
    fn cubed_coefficient_does_not_vanish() {
        let f = plain(A2, 1.0);
        let res = m_identity_residual_with(&f.member(), 1.0, &f.kernel_unit(), 2.0, 0.7, 8.0).unwrap();
        assert!(res > 1.0);
    }

    #[test]
    fn m_identity_detects_perturbation() {
        let mut rng = rng_from_seed(32);
        let f = family(A2, 1.0, &mut rng);
        let noise = Mat::gaussian(7, 7, &mut rng);
        let noise = (&noise - &noise.transpose()).scaled(0.5e-3);
        let s = &f.member() + &noise;
        let b = kernel_direction(&s).unwrap();
        let res = m_identity_residual(&s, 1.0, &b, 2.0, 0.7).unwrap();
        assert!(res > 1e-4, "{res}");
    }

    fn block_a(a: f64, b: f64) -> Mat {
        let j = small_j();
        let mut m = Mat::zeros(4, 4);
        for r in 0..2 {
            for c in 0..2 {
                m[(r, c)] = a * j[(r, c)];
                m[(r, c + 2)] = b * j[(r, c)];
                m[(r + 2, c)] = b * j[(r, c)];
                m[(r + 2, c + 2)] = -a * j[(r, c)];
            }
        }
        m
    }

    /// `‖(yK + L)³ + (y² + z²)(yK + L)‖` evaluated directly.
    fn pencil_direct(k: &Mat, l: &Mat, z: f64, y: f64) -> f64 {
        let p = &k.scaled(y) + l;
        (&(&(&p * &p) * &p) + &p.scaled(y * y + z * z)).frobenius_norm()
    }

    #[test]
    fn pencil_vanishes_on_block_family() {
        let k = NormalFormFamily::normal_form(NormalFormKind::B);
        let zero = cubic_pencil_residuals(&k, &Mat::zeros(7, 7), 0.0).unwrap();
        assert_eq!(zero.max(), 0.0);
        for a in -2..=2 {
            for b in -2..=2 {
                let (a, b) = (a as f64, b as f64);
                let z = (a * a + b * b).sqrt();
                let l = Mat::block_diag(&[block_a(a, b), Mat::zeros(3, 3)]);
                let r = cubic_pencil_residuals(&k, &l, z).unwrap();
                assert!(r.max() <= 1e-12, "{a} {b}: {r:?}");
                for y in [-1.3, 0.4, 2.0] {
                    assert!(pencil_direct(&k, &l, z, y) <= 1e-11);
                }
            }
        }
    }

    #[test]
    fn pencil_residuals_match_direct_expansion() {
        let mut rng = rng_from_seed(40);
        let k = NormalFormFamily::normal_form(NormalFormKind::B);
        let g = Mat::gaussian(7, 7, &mut rng);
        let l = &g - &g.transpose();
        let r = cubic_pencil_residuals(&k, &l, 1.3).unwrap();
        assert!(r.r1 > 1e-3);
        // with K³ = −K the pencil is y²·E1 + y·E2 + E3, so zero coefficients
        // would force zero pencil at every y
        assert!(pencil_direct(&k, &l, 1.3, 0.0) - r.r3 < 1e-9);
        assert!(pencil_direct(&k, &l, 1.3, 0.5) > 1e-3);
    }

    #[test]
    fn isotropy_examples() {
        let e = |i| Vector::basis(4, i);
        let b = Mat::from_columns(&[e(0), e(1), Vector::zeros(4)]);
        assert_eq!(isotropy_residual(&b).unwrap(), 0.0);
        let b = Mat::from_columns(&[e(0), e(2), Vector::zeros(4)]);
        assert!((isotropy_residual(&b).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(isotropy_residual(&Mat::zeros(4, 3)).unwrap(), 0.0);
    }

    #[test]
    fn isotropic_blocks_have_rank_at_most_two() {
        // isotropic planes of 𝒥: span(u, v) with ⟨𝒥u, v⟩ = 0
        let mut rng = rng_from_seed(41);
        for _ in 0..100 {
            let u = Vector::gaussian(4, &mut rng);
            let w = Vector::gaussian(4, &mut rng);
            let ju = calj().mul_vec(&u);
            let v = w.axpy(-w.dot(&ju) / ju.dot(&ju), &ju);
            let c = Mat::gaussian(2, 3, &mut rng);
            let b = &Mat::from_columns(&[u.clone(), v]) * &c;
            assert!(isotropy_residual(&b).unwrap() < 1e-10);
            assert!(numeric_rank(&b, 1e-8) <= 2);
        }
    }

    #[test]
    fn singular_triples() {
        let b = Mat::from_fn(4, 3, |i, j| if i == j && i < 2 { 1.0 } else { 0.0 });
        let r = singular_triple_check(&b, 1e-10).unwrap();
        assert!(r.ok && (r.c - 1.0).abs() < 1e-15);
        let d = Mat::from_fn(4, 3, |i, j| if i == j && i < 2 { (i + 1) as f64 } else { 0.0 });
        assert!(!singular_triple_check(&d, 1e-10).unwrap().ok);

        let mut rng = rng_from_seed(42);
        let q4 = random_orthogonal(4, &mut rng);
        let q3 = random_orthogonal(3, &mut rng);
        let b = (&(&q4.block(0, 0, 4, 2) * &q3.block(0, 0, 2, 3))).scaled(2.5);
        let r = singular_triple_check(&b, 1e-10).unwrap();
        assert!(r.ok && (r.c - 2.5).abs() < 1e-10);
    }

    #[test]
    fn model_space_has_singular_triples() {
        let mut rng = rng_from_seed(43);
        for _ in 0..20 {
            let v = Vector::gaussian(3, &mut rng);
            let r = singular_triple_check(&model_block([v[0], v[1], v[2]]), 1e-10).unwrap();
            assert!(r.ok && (r.c - v.norm()).abs() < 1e-12);
        }
    }

    fn model_basis() -> Vec<Mat> {
        vec![model_block([1.0, 0.0, 0.0]), model_block([0.0, 1.0, 0.0]), model_block([0.0, 0.0, 1.0])]
    }

    #[test]
    fn cc0_finds_witness_for_extended_model() {
        let mut basis = model_basis();
        basis.push(Mat::from_fn(4, 3, |i, j| if i == 3 && j == 0 { 1.0 } else { 0.0 }));
        match cc0_probe(&basis, 100, 1e-9, 1).unwrap() {
            Cc0Verdict::FailsProperty { witness, singular_values: sv, .. } => {
                let w = Mat::from_row_major(4, 3, witness);
                assert!(!singular_triple_check(&w, 1e-9).unwrap().ok);
                assert_eq!(sv.to_vec(), singular_values(&w));
            }
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn cc0_rejects_dependent_basis() {
        let mut basis = model_basis();
        basis.push(&basis[0] + &basis[1].scaled(2.0));
        assert_eq!(cc0_probe(&basis, 10, 1e-9, 1), Err(Error::DependentBasis));
    }

    #[test]
    fn cc0_rejects_common_kernel() {
        let e = |r: usize, c: usize| Mat::from_fn(4, 3, move |i, j| if (i, j) == (r, c) { 1.0 } else { 0.0 });
        let basis = vec![e(0, 0), e(1, 1), e(2, 0), e(3, 1)];
        assert_eq!(cc0_probe(&basis, 10, 1e-9, 1), Err(Error::CommonKernel));
    }

    #[test]
    fn cc0_on_random_spaces() {
        let mut rng = rng_from_seed(44);
        for seed in 0..200 {
            let basis: Vec<Mat> = (0..4).map(|_| Mat::gaussian(4, 3, &mut rng)).collect();
            assert!(cc0_probe(&basis, 50, 1e-9, seed).unwrap().fails());
        }
    }

    #[test]
    fn split_examples() {
        let u = reflection(7, 2);
        let ru = r_phi(7, 1.5, &u).unwrap();
        assert_eq!(split_tensor(&ru, &u, 1.5, 1.0).unwrap().frobenius_norm(), 0.0);

        let cc = constant_curvature(7, 0.8).unwrap();
        assert!(split_tensor(&cc, &Mat::identity(7), 0.8, 1.0).unwrap().frobenius_norm() < 1e-15);

        let phi = reflection(7, 1);
        let psi = reflection(7, 3);
        let sum = r_phi(7, 1.0, &phi).unwrap().axpy(1.0, &r_phi(7, 2.0, &psi).unwrap()).unwrap();
        let back = split_tensor(&sum, &psi, 2.0, 1.0).unwrap();
        assert!(back.max_abs_diff(&r_phi(7, 1.0, &phi).unwrap()) < 1e-12);
    }

    #[test]
    fn split_rejects_non_involution() {
        let cc = constant_curvature(7, 1.0).unwrap();
        assert!(matches!(split_tensor(&cc, &Mat::identity(7).scaled(2.0), 1.0, 1.0), Err(Error::BadInvolution(_))));
    }
}
