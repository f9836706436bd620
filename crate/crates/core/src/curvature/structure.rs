use serde::{Deserialize, Serialize};

use super::{plane_operator, CurvatureTensor};
use crate::error::{Error, Result};
use crate::linalg::{rng_from_seed, sample_plane, sym_eigen, Mat, OrientedPlane};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    /// Magnitude of the purely imaginary eigenvalue pair `±iλ`.
    pub lambda: f64,
    pub multiplicity: usize,
}

/// Kernel dimension of a skew operator plus its grouped `±iλ` eigenvalues.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenStructure {
    pub kernel_dim: usize,
    /// Sorted by multiplicity, then by `lambda`.
    pub pairs: Vec<EigenPair>,
}

impl EigenStructure {
    pub fn dim(&self) -> usize {
        self.kernel_dim + self.pairs.iter().map(|p| p.multiplicity).sum::<usize>()
    }

    pub fn rank(&self) -> usize {
        self.dim() - self.kernel_dim
    }

    /// The ordered multiplicity list `(n₀, n₁, …)`.
    pub fn multiplicities(&self) -> Vec<usize> {
        std::iter::once(self.kernel_dim).chain(self.pairs.iter().map(|p| p.multiplicity)).collect()
    }

    /// Same shape, and every `λ` agreeing within `tol · max(1, λ)`.
    pub fn matches(&self, other: &Self, tol: f64) -> bool {
        self.multiplicities() == other.multiplicities()
            && self
                .pairs
                .iter()
                .zip(&other.pairs)
                .all(|(a, b)| (a.lambda - b.lambda).abs() <= tol * a.lambda.max(1.0))
    }

    fn spread(&self, other: &Self) -> f64 {
        self.pairs.iter().zip(&other.pairs).fold(0.0, |m, (a, b)| m.max((a.lambda - b.lambda).abs()))
    }
}

/// Groups the spectrum of a skew matrix through its symmetric square.
///
/// Eigenvalues `−λ²` of `M²` are merged when consecutive values differ by at
/// most `tol · max(1, λ_max²)`; an odd-sized nonzero group is an error rather
/// than a silent merge.
pub fn eigenvalue_structure(m: &Mat, tol: f64) -> Result<EigenStructure> {
    if !m.is_square() {
        return Err(Error::DimMismatch { expected: m.rows(), got: m.cols() });
    }
    let defect = m.skew_defect();
    let allowed = tol * m.frobenius_norm().max(1.0);
    if defect > allowed {
        return Err(Error::NotSkew { defect, tol });
    }
    let sq = m * m;
    let sq = Mat::from_fn(sq.rows(), sq.cols(), |i, j| 0.5 * (sq[(i, j)] + sq[(j, i)]));
    let spec = sym_eigen(&sq, 1e-8)?;
    let lam2_max = spec.eigenvalues.first().map_or(0.0, |&mu| (-mu).max(0.0));
    let gap = tol * lam2_max.max(1.0);

    let mut kernel_dim = 0;
    let mut groups: Vec<Vec<f64>> = Vec::new();
    // most negative first, i.e. largest λ first
    for &mu in &spec.eigenvalues {
        if mu.abs() <= gap {
            kernel_dim += 1;
            continue;
        }
        if mu > 0.0 {
            return Err(Error::NotSkew { defect: mu, tol });
        }
        match groups.last_mut() {
            Some(g) if (mu - g[g.len() - 1]).abs() <= gap => g.push(mu),
            _ => groups.push(vec![mu]),
        }
    }

    let mut pairs = Vec::with_capacity(groups.len());
    for g in groups {
        let lambda = (-g.iter().sum::<f64>() / g.len() as f64).sqrt();
        if g.len() % 2 != 0 {
            return Err(Error::OddMultiplicity { lambda, multiplicity: g.len() });
        }
        pairs.push(EigenPair { lambda, multiplicity: g.len() });
    }
    pairs.sort_by(|a, b| a.multiplicity.cmp(&b.multiplicity).then(a.lambda.total_cmp(&b.lambda)));
    Ok(EigenStructure { kernel_dim, pairs })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpMismatch {
    pub first_plane: OrientedPlane,
    pub second_plane: OrientedPlane,
    pub first: EigenStructure,
    pub second: EigenStructure,
    /// Sample index of the second plane.
    pub sample: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IpReport {
    pub verdict: bool,
    pub samples: usize,
    /// Structure of the first sampled plane.
    pub structure: EigenStructure,
    pub rank: usize,
    /// Largest `|λ_j(π) − λ_j(π₀)|` over the planes that matched.
    pub max_spread: f64,
    pub mismatch: Option<IpMismatch>,
}

/// Sampling test of the IP property over uniformly random oriented planes.
pub fn is_ip(r: &CurvatureTensor, samples: usize, tol: f64, seed: u64) -> Result<IpReport> {
    if samples < 2 {
        return Err(Error::InvalidParameter("is_ip needs at least two samples".into()));
    }
    let mut rng = rng_from_seed(seed);
    let first_plane = sample_plane(r.dim(), &mut rng);
    let first = eigenvalue_structure(&plane_operator(r, &first_plane)?, tol)?;
    let mut max_spread: f64 = 0.0;
    for s in 1..samples {
        let plane = sample_plane(r.dim(), &mut rng);
        let st = eigenvalue_structure(&plane_operator(r, &plane)?, tol)?;
        if !first.matches(&st, tol) {
            return Ok(IpReport {
                verdict: false,
                samples: s + 1,
                rank: first.rank(),
                structure: first.clone(),
                max_spread,
                mismatch: Some(IpMismatch {
                    first_plane,
                    second_plane: plane,
                    first,
                    second: st,
                    sample: s,
                }),
            });
        }
        max_spread = max_spread.max(first.spread(&st));
    }
    Ok(IpReport { verdict: true, samples, rank: first.rank(), structure: first, max_spread, mismatch: None })
}
