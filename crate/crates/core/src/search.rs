//! Numerical search for IP tensors: descend an eigenvalue-spread objective
//! on the space of algebraic curvature tensors and record the ranks of
//! whatever near-IP tensors turn up.
//!
//! The descent minimizes `F(R) = Σ_a ‖σ_a − σ̄‖²` over a batch of planes,
//! where `σ_a` are the sorted singular values of `R(π_a)`. Spreads of the
//! `R(π)²` spectra are quartic in small singular values and stall plain
//! descent; the singular values keep the minimum nondegenerate. The gradient
//! uses `∂σ/∂M = (u vᵗ − v uᵗ)/2σ` with `u = Mv` for skew `M`, pulled back to
//! `R` and projected onto the symmetry subspace. Verification always uses
//! `ip_residual` on the `R(π)²` spectra.
//!
//! Gaussian starts mostly end in spurious local minima, so by default half
//! of the seeds start from a random `R_φ` buried in noise of comparable
//! norm; the descent is free to leave that basin.

use std::collections::BTreeMap;

use rand::{Rng as _, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{
    bianchi_residuals, check_dim, eigenvalue_structure, idx, plane_operator, r_phi, reflection, symmetrize_pairs,
    CurvatureTensor, EigenStructure,
};
use crate::error::{Error, Result};
use crate::linalg::{random_orthogonal, sample_plane, singular_values, svd, sym_eigen, Mat, OrientedPlane, Rng};

const PERMUTATIONS_4: [([usize; 4], f64); 24] = [
    ([0, 1, 2, 3], 1.0),
    ([0, 1, 3, 2], -1.0),
    ([0, 2, 1, 3], -1.0),
    ([0, 2, 3, 1], 1.0),
    ([0, 3, 1, 2], 1.0),
    ([0, 3, 2, 1], -1.0),
    ([1, 0, 2, 3], -1.0),
    ([1, 0, 3, 2], 1.0),
    ([1, 2, 0, 3], 1.0),
    ([1, 2, 3, 0], -1.0),
    ([1, 3, 0, 2], -1.0),
    ([1, 3, 2, 0], 1.0),
    ([2, 0, 1, 3], 1.0),
    ([2, 0, 3, 1], -1.0),
    ([2, 1, 0, 3], -1.0),
    ([2, 1, 3, 0], 1.0),
    ([2, 3, 0, 1], 1.0),
    ([2, 3, 1, 0], -1.0),
    ([3, 0, 1, 2], -1.0),
    ([3, 0, 2, 1], 1.0),
    ([3, 1, 0, 2], 1.0),
    ([3, 1, 2, 0], -1.0),
    ([3, 2, 0, 1], -1.0),
    ([3, 2, 1, 0], 1.0),
];

/// Orthogonal projection of a raw `dim⁴` array onto algebraic curvature
/// tensors.
///
/// Averaging over the antisymmetries and pair swap projects onto `S²(Λ²)`,
/// which splits orthogonally into the Bianchi kernel and `Λ⁴`; subtracting
/// the full antisymmetrization removes the `Λ⁴` part.
pub fn project_symmetries(dim: usize, raw: &[f64]) -> Result<CurvatureTensor> {
    check_dim(dim)?;
    if raw.len() != dim.pow(4) {
        return Err(Error::DimMismatch { expected: dim.pow(4), got: raw.len() });
    }
    if raw.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidTensor("non-finite component".into()));
    }
    Ok(CurvatureTensor::from_components_unchecked(dim, project_raw(dim, raw)))
}

fn project_raw(n: usize, raw: &[f64]) -> Vec<f64> {
    let s = symmetrize_pairs(n, raw);
    let mut out = s.clone();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let ind = [i, j, k, l];
                    let alt: f64 = PERMUTATIONS_4
                        .iter()
                        .map(|(p, sign)| sign * s[idx(n, ind[p[0]], ind[p[1]], ind[p[2]], ind[p[3]])])
                        .sum();
                    out[idx(n, i, j, k, l)] -= alt / 24.0;
                }
            }
        }
    }
    out
}

/// Sorted eigenvalues of `R(π)²` (all `≤ 0`).
fn squared_spectrum(m: &Mat) -> Result<Vec<f64>> {
    let sq = m * m;
    let sq = Mat::from_fn(sq.rows(), sq.cols(), |i, j| 0.5 * (sq[(i, j)] + sq[(j, i)]));
    Ok(sym_eigen(&sq, 1e-8)?.eigenvalues)
}

/// `Σ_{a<b} ‖spec R(π_a)² − spec R(π_b)²‖₂` over sorted spectra.
pub fn ip_residual(r: &CurvatureTensor, planes: &[OrientedPlane]) -> Result<f64> {
    if planes.len() < 2 {
        return Err(Error::InvalidParameter("ip_residual needs at least two planes".into()));
    }
    let spectra = planes
        .iter()
        .map(|p| squared_spectrum(&plane_operator(r, p)?))
        .collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for a in 0..spectra.len() {
        for b in a + 1..spectra.len() {
            total += spectra[a].iter().zip(&spectra[b]).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        }
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub seeds: usize,
    pub iterations: usize,
    pub plane_batch: usize,
    /// Initial step size.
    pub step: f64,
    /// Step multiplier applied every `decay_every` iterations.
    pub decay: f64,
    pub decay_every: usize,
    pub tol_residual: f64,
    /// Singular values below `rank_tol · σ_max` count as zero.
    pub rank_tol: f64,
    pub verify_planes: usize,
    /// Probability that a seed starts near a known IP tensor instead of at
    /// a pure Gaussian tensor.
    pub anchored_fraction: f64,
    /// Range of the relative noise added to an anchor.
    pub anchor_noise: [f64; 2],
    pub rng_seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dim: 7,
            seeds: 50,
            iterations: 2000,
            plane_batch: 24,
            step: 0.2,
            decay: 0.9,
            decay_every: 50,
            tol_residual: 1e-6,
            rank_tol: 1e-5,
            verify_planes: 500,
            anchored_fraction: 0.5,
            anchor_noise: [0.25, 1.0],
            rng_seed: 0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim)?;
        let bad = |what: &str| Err(Error::InvalidParameter(format!("{what} must be positive")));
        if self.iterations == 0 {
            return bad("iterations");
        }
        if self.plane_batch < 2 {
            return Err(Error::InvalidParameter("plane_batch must be at least 2".into()));
        }
        if self.verify_planes < 2 {
            return Err(Error::InvalidParameter("verify_planes must be at least 2".into()));
        }
        if !(self.step > 0.0) {
            return bad("step");
        }
        if !(self.decay > 0.0 && self.decay <= 1.0) || self.decay_every == 0 {
            return Err(Error::InvalidParameter("decay must lie in (0, 1] with a positive period".into()));
        }
        if !(0.0..=1.0).contains(&self.anchored_fraction) {
            return Err(Error::InvalidParameter("anchored_fraction must lie in [0, 1]".into()));
        }
        let [lo, hi] = self.anchor_noise;
        if !(lo >= 0.0 && lo <= hi && hi.is_finite()) {
            return Err(Error::InvalidParameter("anchor_noise must be an ordered non-negative range".into()));
        }
        if !(self.tol_residual > 0.0) || !(self.rank_tol > 0.0) {
            return bad("tolerances");
        }
        Ok(())
    }

    /// Independent stream for seed index `s`.
    pub fn seed_rng(&self, s: usize) -> Rng {
        let mut rng = Rng::seed_from_u64(self.rng_seed);
        rng.set_stream(s as u64 + 1);
        rng
    }
}

/// How a trajectory was started.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Start {
    Gaussian,
    /// Unit `R_φ` for a random involution with `minus` eigenvalues `−1`
    /// (`minus = 0` is constant curvature), plus Gaussian noise of relative
    /// size `noise`.
    Anchored { minus: usize, noise: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub seed: usize,
    pub start: Start,
    pub tensor: CurvatureTensor,
    /// `ip_residual` on an independent verification batch.
    pub residual: f64,
    /// Final batch objective of the descent.
    pub objective: f64,
    pub iterations: usize,
    /// Plane-operator rank → number of verification planes with that rank.
    pub rank_census: BTreeMap<usize, usize>,
    pub max_rank: usize,
    /// Eigenvalue structure of the first verification plane, if it groups.
    pub structure: Option<EigenStructure>,
    pub bianchi: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Census {
    pub candidates: usize,
    /// Candidates with residual below the tolerance.
    pub converged: usize,
    pub max_rank_converged: Option<usize>,
    /// Rank histogram over converged candidates.
    pub rank_histogram: BTreeMap<usize, usize>,
    /// Seeds of converged candidates with a plane of rank above 2.
    pub counterexamples: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    /// Sorted by residual, then seed.
    pub candidates: Vec<Candidate>,
    pub census: Census,
}

struct BatchEval {
    objective: f64,
    /// Unprojected gradient.
    grad: Vec<f64>,
}

fn objective(r: &CurvatureTensor, planes: &[OrientedPlane], want_grad: bool) -> Result<BatchEval> {
    let n = r.dim();
    let mut spectra = Vec::with_capacity(planes.len());
    let mut ops = Vec::with_capacity(planes.len());
    for p in planes {
        let m = plane_operator(r, p)?;
        // one-sided Jacobi keeps tiny singular values accurate, which
        // σ = √(−λ(M²)) would not
        let dec = svd(&m);
        spectra.push(dec.singular_values.clone());
        ops.push((m, dec.right_vectors));
    }
    let count = planes.len() as f64;
    let mean: Vec<f64> = (0..n).map(|k| spectra.iter().map(|s| s[k]).sum::<f64>() / count).collect();
    let objective = spectra.iter().map(|s| s.iter().zip(&mean).map(|(x, m)| (x - m).powi(2)).sum::<f64>()).sum();
    let mut grad = Vec::new();
    if want_grad {
        grad = vec![0.0; n.pow(4)];
        let floor = 1e-13 * spectra.iter().map(|s| s[0]).fold(0.0, f64::max);
        for ((m, vecs), (plane, s)) in ops.iter().zip(planes.iter().zip(&spectra)) {
            // G = ∂F/∂M for this plane; Σ_a (σ_a − σ̄) sums to zero, so the
            // mean's dependence drops out. ∂σ/∂M = (u vᵗ − v uᵗ)/2σ, u = Mv.
            let mut g = Mat::zeros(n, n);
            for k in 0..n {
                if s[k] <= floor {
                    continue;
                }
                let w = (s[k] - mean[k]) / s[k];
                let v = vecs.column(k);
                let mv = m.mul_vec(&v);
                for a in 0..n {
                    for b in 0..n {
                        g[(a, b)] += w * (mv[a] * v[b] - v[a] * mv[b]);
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    let xy = plane.x[i] * plane.y[j];
                    if xy == 0.0 {
                        continue;
                    }
                    let base = idx(n, i, j, 0, 0);
                    for (slot, gv) in grad[base..base + n * n].iter_mut().zip(g.as_slice()) {
                        *slot += xy * gv;
                    }
                }
            }
        }
    }
    Ok(BatchEval { objective, grad })
}

/// Batch objective `Σ_a ‖σ_a − σ̄‖²` and its gradient projected onto the
/// symmetry subspace.
pub fn objective_and_gradient(r: &CurvatureTensor, planes: &[OrientedPlane]) -> Result<(f64, CurvatureTensor)> {
    if planes.len() < 2 {
        return Err(Error::InvalidParameter("objective needs at least two planes".into()));
    }
    let eval = objective(r, planes, true)?;
    Ok((eval.objective, CurvatureTensor::from_components_unchecked(r.dim(), project_raw(r.dim(), &eval.grad))))
}

fn normalized(n: usize, comps: Vec<f64>) -> Option<CurvatureTensor> {
    let norm = comps.iter().map(|x| x * x).sum::<f64>().sqrt();
    (norm > 1e-3).then(|| CurvatureTensor::from_components_unchecked(n, comps.iter().map(|x| x / norm).collect()))
}

/// Random unit-norm algebraic curvature tensor.
pub fn random_start(dim: usize, rng: &mut Rng) -> Result<CurvatureTensor> {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let raw: Vec<f64> = (0..dim.pow(4)).map(|_| StandardNormal.sample(rng)).collect();
        if let Some(t) = normalized(dim, project_raw(dim, &raw)) {
            return Ok(t);
        }
    }
}

/// Draws a start according to `anchored_fraction` and `anchor_noise`.
pub fn draw_start(cfg: &SearchConfig, rng: &mut Rng) -> Result<(Start, CurvatureTensor)> {
    let noise_tensor = random_start(cfg.dim, rng)?;
    if rng.random::<f64>() >= cfg.anchored_fraction {
        return Ok((Start::Gaussian, noise_tensor));
    }
    let minus = rng.random_range(0..cfg.dim);
    let q = random_orthogonal(cfg.dim, rng);
    let phi = &(&q * &reflection(cfg.dim, minus)) * &q.transpose();
    let phi = Mat::from_fn(cfg.dim, cfg.dim, |i, j| 0.5 * (phi[(i, j)] + phi[(j, i)]));
    let anchor = r_phi(cfg.dim, 1.0, &phi)?;
    let [lo, hi] = cfg.anchor_noise;
    let noise = if hi > lo { rng.random_range(lo..=hi) } else { lo };
    let t = anchor.scaled(1.0 / anchor.frobenius_norm()).axpy(noise, &noise_tensor)?;
    Ok((Start::Anchored { minus, noise }, t))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub tensor: CurvatureTensor,
    pub objective: f64,
    pub iterations: usize,
}

/// Projected descent from `start` with fresh planes every iteration.
///
/// Each step tries the scheduled step size and halves it until the batch
/// objective decreases; the iterate is renormalized to unit Frobenius norm.
/// Stops early once the objective is at rounding level.
pub fn descend(start: &CurvatureTensor, cfg: &SearchConfig, rng: &mut Rng) -> Result<Trajectory> {
    let n = start.dim();
    let mut r = normalized(n, start.components().to_vec())
        .ok_or_else(|| Error::InvalidParameter("start tensor is below the norm floor".into()))?;
    let mut gain = 1.0f64;
    let mut last = f64::INFINITY;
    let mut quiet = 0;
    for it in 0..cfg.iterations {
        let planes: Vec<OrientedPlane> = (0..cfg.plane_batch).map(|_| sample_plane(n, rng)).collect();
        let eval = objective(&r, &planes, true)?;
        last = eval.objective;
        if eval.objective < 1e-28 {
            quiet += 1;
            if quiet >= 5 {
                return Ok(Trajectory { tensor: r, objective: eval.objective, iterations: it + 1 });
            }
            continue;
        }
        quiet = 0;
        let grad = project_raw(n, &eval.grad);
        let step = cfg.step * cfg.decay.powi((it / cfg.decay_every) as i32);
        let mut eta = step * gain;
        let mut accepted = false;
        for _ in 0..8 {
            let trial: Vec<f64> = r.components().iter().zip(&grad).map(|(x, g)| x - eta * g).collect();
            if let Some(t) = normalized(n, trial) {
                let f = objective(&t, &planes, false)?.objective;
                if f < eval.objective {
                    r = t;
                    accepted = true;
                    break;
                }
            }
            eta *= 0.5;
        }
        gain = if accepted { (eta / step * 2.0).min(1e6) } else { gain * 0.5 };
    }
    Ok(Trajectory { tensor: r, objective: last, iterations: cfg.iterations })
}

fn plane_rank(m: &Mat, rank_tol: f64) -> usize {
    let s = singular_values(m);
    let top = s.first().copied().unwrap_or(0.0);
    if top == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rank_tol * top).count()
}

/// Residual and rank census of `r` on `verify_planes` fresh planes.
pub fn verify(r: &CurvatureTensor, cfg: &SearchConfig, rng: &mut Rng) -> Result<(f64, BTreeMap<usize, usize>, Option<EigenStructure>)> {
    let planes: Vec<OrientedPlane> = (0..cfg.verify_planes).map(|_| sample_plane(r.dim(), rng)).collect();
    let residual = ip_residual(r, &planes)?;
    let mut census = BTreeMap::new();
    for p in &planes {
        *census.entry(plane_rank(&plane_operator(r, p)?, cfg.rank_tol)).or_insert(0) += 1;
    }
    let structure = eigenvalue_structure(&plane_operator(r, &planes[0])?, 1e-6).ok();
    Ok((residual, census, structure))
}

fn run_seed(cfg: &SearchConfig, s: usize) -> Result<Candidate> {
    let mut rng = cfg.seed_rng(s);
    let (start_kind, start) = draw_start(cfg, &mut rng)?;
    let traj = descend(&start, cfg, &mut rng)?;
    let (residual, rank_census, structure) = verify(&traj.tensor, cfg, &mut rng)?;
    let max_rank = rank_census.keys().next_back().copied().unwrap_or(0);
    Ok(Candidate {
        seed: s,
        start: start_kind,
        bianchi: bianchi_residuals(&traj.tensor).max(),
        tensor: traj.tensor,
        residual,
        objective: traj.objective,
        iterations: traj.iterations,
        rank_census,
        max_rank,
        structure,
    })
}

pub fn census(candidates: &[Candidate], tol_residual: f64) -> Census {
    let mut c = Census { candidates: candidates.len(), ..Census::default() };
    for cand in candidates.iter().filter(|c| c.residual < tol_residual) {
        c.converged += 1;
        c.max_rank_converged = Some(c.max_rank_converged.map_or(cand.max_rank, |m| m.max(cand.max_rank)));
        *c.rank_histogram.entry(cand.max_rank).or_insert(0) += 1;
        if cand.max_rank > 2 {
            c.counterexamples.push(cand.seed);
        }
    }
    c
}

/// Runs every seed (in parallel when a rayon pool is available) and returns
/// candidates sorted by residual, then seed.
pub fn run_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut candidates = (0..cfg.seeds).into_par_iter().map(|s| run_seed(cfg, s)).collect::<Result<Vec<_>>>()?;
    candidates.sort_by(|a, b| a.residual.total_cmp(&b.residual).then(a.seed.cmp(&b.seed)));
    let census = census(&candidates, cfg.tol_residual);
    Ok(SearchOutcome { config: cfg.clone(), candidates, census })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{bianchi_residuals_raw, constant_curvature, ricci};
    use crate::linalg::{numeric_rank, rng_from_seed};
    use rand_distr::{Distribution, StandardNormal};

    fn raw(n: usize, rng: &mut Rng) -> Vec<f64> {
        (0..n.pow(4)).map(|_| StandardNormal.sample(rng)).collect()
    }

    #[test]
    fn projection_fixes_valid_tensors() {
        let r = r_phi(5, 1.3, &reflection(5, 2)).unwrap();
        let p = project_symmetries(5, r.components()).unwrap();
        assert!(p.max_abs_diff(&r) < 1e-14);
    }

    #[test]
    fn projection_is_idempotent_and_valid() {
        let mut rng = rng_from_seed(1);
        for n in [3, 4, 7] {
            let t = raw(n, &mut rng);
            let p = project_symmetries(n, &t).unwrap();
            assert!(bianchi_residuals(&p).max() <= 1e-12);
            let q = project_symmetries(n, p.components()).unwrap();
            assert!(p.max_abs_diff(&q) < 1e-14);
        }
    }

    #[test]
    fn antisymmetrized_input_projects_consistently() {
        let mut rng = rng_from_seed(2);
        let n = 4;
        let t = raw(n, &mut rng);
        let mut anti = t.clone();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        anti[idx(n, i, j, k, l)] = 0.25
                            * (t[idx(n, i, j, k, l)] - t[idx(n, j, i, k, l)] - t[idx(n, i, j, l, k)]
                                + t[idx(n, j, i, l, k)]);
                    }
                }
            }
        }
        let once = project_symmetries(n, &anti).unwrap();
        let twice = project_symmetries(n, once.components()).unwrap();
        assert!(once.max_abs_diff(&twice) < 1e-14);
    }

    #[test]
    fn projection_is_orthogonal() {
        // ⟨T − P(T), S⟩ = 0 for every valid S
        let mut rng = rng_from_seed(3);
        let n = 4;
        let t = raw(n, &mut rng);
        let p = project_symmetries(n, &t).unwrap();
        for _ in 0..5 {
            let s = project_symmetries(n, &raw(n, &mut rng)).unwrap();
            let ip: f64 = t.iter().zip(p.components()).zip(s.components()).map(|((a, b), c)| (a - b) * c).sum();
            assert!(ip.abs() < 1e-12);
        }
    }

    #[test]
    fn projection_space_has_the_right_dimension() {
        // dim of algebraic curvature tensors: n²(n²−1)/12
        let mut rng = rng_from_seed(4);
        for n in [3, 4, 5] {
            let samples: Vec<Vec<f64>> = (0..n * n * (n * n - 1) / 12 + 5)
                .map(|_| project_symmetries(n, &raw(n, &mut rng)).unwrap().components().to_vec())
                .collect();
            let m = Mat::from_fn(samples.len(), n.pow(4), |r, c| samples[r][c]);
            assert_eq!(numeric_rank(&m, 1e-9), n * n * (n * n - 1) / 12);
            assert!(samples.iter().all(|s| bianchi_residuals_raw(n, s).max() < 1e-12));
        }
    }

    #[test]
    fn projection_matches_null_space_oracle() {
        // brute force in dim 3: stack every symmetry constraint as a row,
        // take the null space by SVD, project with N Nᵗ
        let n: usize = 3;
        let len = n.pow(4);
        let mut rows: Vec<Vec<f64>> = Vec::new();
        let mut push = |terms: &[(usize, f64)]| {
            let mut r = vec![0.0; len];
            for &(slot, c) in terms {
                r[slot] += c;
            }
            rows.push(r);
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let at = idx(n, i, j, k, l);
                        push(&[(at, 1.0), (idx(n, j, i, k, l), 1.0)]);
                        push(&[(at, 1.0), (idx(n, i, j, l, k), 1.0)]);
                        push(&[(at, 1.0), (idx(n, k, l, i, j), -1.0)]);
                        push(&[(at, 1.0), (idx(n, j, k, i, l), 1.0), (idx(n, k, i, j, l), 1.0)]);
                    }
                }
            }
        }
        let c = nalgebra::DMatrix::from_fn(rows.len(), len, |r, k| rows[r][k]);
        let dec = (c.transpose() * &c).symmetric_eigen();
        let basis: Vec<nalgebra::DVector<f64>> = (0..len)
            .filter(|&k| dec.eigenvalues[k].abs() < 1e-9)
            .map(|k| dec.eigenvectors.column(k).into_owned())
            .collect();
        assert_eq!(basis.len(), 6);
        let mut rng = rng_from_seed(13);
        for _ in 0..5 {
            let t = raw(n, &mut rng);
            let tv = nalgebra::DVector::from_vec(t.clone());
            let mut oracle = nalgebra::DVector::zeros(len);
            for b in &basis {
                oracle += b * b.dot(&tv);
            }
            let p = project_symmetries(n, &t).unwrap();
            for k in 0..len {
                assert!((p.components()[k] - oracle[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn start_kinds_follow_the_fraction() {
        let mut rng = rng_from_seed(14);
        let gauss = SearchConfig { anchored_fraction: 0.0, ..SearchConfig::default() };
        let anchored = SearchConfig { anchored_fraction: 1.0, anchor_noise: [0.0, 0.0], ..SearchConfig::default() };
        assert_eq!(draw_start(&gauss, &mut rng).unwrap().0, Start::Gaussian);
        let (kind, t) = draw_start(&anchored, &mut rng).unwrap();
        assert!(matches!(kind, Start::Anchored { noise, .. } if noise == 0.0));
        assert!(ip_residual(&t, &planes(7, 20, 15)).unwrap() < 1e-10);
    }

    fn planes(n: usize, count: usize, seed: u64) -> Vec<OrientedPlane> {
        let mut rng = rng_from_seed(seed);
        (0..count).map(|_| sample_plane(n, &mut rng)).collect()
    }

    #[test]
    fn residual_examples() {
        let ps = planes(7, 30, 5);
        let r = r_phi(7, 1.0, &reflection(7, 1)).unwrap();
        assert!(ip_residual(&r, &ps).unwrap() <= 1e-10);
        assert_eq!(ip_residual(&constant_curvature(7, 0.0).unwrap(), &ps).unwrap(), 0.0);
        let mut rng = rng_from_seed(6);
        let noise = project_symmetries(7, &raw(7, &mut rng)).unwrap();
        let noise = noise.scaled(1.0 / noise.frobenius_norm());
        let pert = constant_curvature(7, 1.0).unwrap().axpy(0.1, &noise).unwrap();
        assert!(ip_residual(&pert, &ps).unwrap() > 1e-3);
        assert!(ip_residual(&r, &ps[..1]).is_err());
    }

    #[test]
    fn residual_scales_quadratically_and_ignores_order() {
        let mut rng = rng_from_seed(7);
        let r = project_symmetries(5, &raw(5, &mut rng)).unwrap();
        let ps = planes(5, 12, 8);
        let base = ip_residual(&r, &ps).unwrap();
        for c in [0.5, -2.0, 3.0, 0.1, 7.0, -0.3, 1.5, 2.5, -4.0, 0.9] {
            let scaled = ip_residual(&r.scaled(c), &ps).unwrap();
            assert!((scaled - c * c * base).abs() <= 1e-10 * scaled.max(1.0));
        }
        let mut rev = ps.clone();
        rev.reverse();
        assert!((ip_residual(&r, &rev).unwrap() - base).abs() < 1e-10 * base);
    }

    #[test]
    fn gradient_matches_directional_difference() {
        let mut rng = rng_from_seed(9);
        let n = 5;
        let r = project_symmetries(n, &raw(n, &mut rng)).unwrap();
        let ps = planes(n, 10, 10);
        let g = project_raw(n, &objective(&r, &ps, true).unwrap().grad);
        for _ in 0..5 {
            let d = project_raw(n, &raw(n, &mut rng));
            let h = 1e-6;
            let at = |s: f64| {
                let c: Vec<f64> = r.components().iter().zip(&d).map(|(x, y)| x + s * y).collect();
                objective(&CurvatureTensor::from_components_unchecked(n, c), &ps, false).unwrap().objective
            };
            let fd = (at(h) - at(-h)) / (2.0 * h);
            let an: f64 = g.iter().zip(&d).map(|(a, b)| a * b).sum();
            assert!((fd - an).abs() <= 1e-5 * an.abs().max(1.0), "{fd} vs {an}");
        }
    }

    #[test]
    fn descent_polishes_a_perturbed_ip_tensor() {
        let mut rng = rng_from_seed(11);
        let q = random_orthogonal(7, &mut rng);
        let phi = &(&q * &reflection(7, 3)) * &q.transpose();
        let phi = Mat::from_fn(7, 7, |i, j| 0.5 * (phi[(i, j)] + phi[(j, i)]));
        let exact = r_phi(7, 1.0, &phi).unwrap();
        let noise = project_symmetries(7, &raw(7, &mut rng)).unwrap();
        let start = exact.axpy(1e-3 / noise.frobenius_norm(), &noise).unwrap();
        let cfg = SearchConfig { iterations: 400, ..SearchConfig::default() };
        let before = ip_residual(&start, &planes(7, 50, 12)).unwrap();
        let traj = descend(&start, &cfg, &mut rng).unwrap();
        let after = ip_residual(&traj.tensor, &planes(7, 50, 12)).unwrap();
        assert!(after < 1e-3 * before, "{before} → {after}");
    }

    #[test]
    fn empty_search() {
        let out = run_search(&SearchConfig { seeds: 0, ..SearchConfig::default() }).unwrap();
        assert!(out.candidates.is_empty());
        assert_eq!(out.census, Census::default());
    }

    #[test]
    fn invalid_configs() {
        assert!(run_search(&SearchConfig { dim: 9, ..SearchConfig::default() }).is_err());
        assert!(run_search(&SearchConfig { iterations: 0, ..SearchConfig::default() }).is_err());
        assert!(run_search(&SearchConfig { plane_batch: 1, ..SearchConfig::default() }).is_err());
    }

    #[test]
    fn dimension_three_search() {
        let cfg = SearchConfig { dim: 3, seeds: 20, iterations: 600, verify_planes: 100, rng_seed: 3, ..SearchConfig::default() };
        let out = run_search(&cfg).unwrap();
        assert_eq!(out.candidates.len(), 20);
        for c in out.candidates.iter().filter(|c| c.residual < cfg.tol_residual) {
            assert!(c.bianchi <= 1e-10);
            let rho = ricci(&c.tensor);
            let s = rho.trace();
            let traceless = &rho - &Mat::identity(3).scaled(s / 3.0);
            let rank = numeric_rank(&rho, 1e-6);
            assert!(rank <= 1 || traceless.frobenius_norm() < 1e-6, "seed {}: {rho:?}", c.seed);
        }
        assert!(out.census.converged > 0, "{:?}", out.census);
    }

    #[test]
    fn search_is_deterministic() {
        let cfg = SearchConfig { dim: 4, seeds: 3, iterations: 50, verify_planes: 20, rng_seed: 9, ..SearchConfig::default() };
        let a = run_search(&cfg).unwrap();
        let b = run_search(&cfg).unwrap();
        assert_eq!(a, b);
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| run_search(&cfg)).unwrap();
        assert_eq!(a, serial);
    }
}
