//! Shared fixtures for the criterion benches.

use curvtool_core::curvature::{r_phi, reflection, CurvatureTensor};
use curvtool_core::linalg::{random_orthogonal, rng_from_seed, sample_plane, OrientedPlane, Vector};
use curvtool_core::quotient_ring::{parse_elem, QuotElem};
use curvtool_core::search::project_symmetries;

/// `R_φ` for a conjugated reflection with `minus` negative eigenvalues.
pub fn rphi(dim: usize, minus: usize, seed: u64) -> CurvatureTensor {
    let q = random_orthogonal(dim, &mut rng_from_seed(seed));
    let phi = &(&q * &reflection(dim, minus)) * &q.transpose();
    r_phi(dim, 1.0, &phi).expect("valid involution")
}

/// A generic algebraic curvature tensor.
pub fn generic(dim: usize, seed: u64) -> CurvatureTensor {
    let raw = Vector::gaussian(dim.pow(4), &mut rng_from_seed(seed)).into_inner();
    project_symmetries(dim, &raw).expect("supported dimension")
}

pub fn planes(dim: usize, count: usize, seed: u64) -> Vec<OrientedPlane> {
    let mut rng = rng_from_seed(seed);
    (0..count).map(|_| sample_plane(dim, &mut rng)).collect()
}

/// A pair of dense ring elements in `nvars` variables.
pub fn ring_pair(nvars: usize) -> (QuotElem, QuotElem) {
    let a = parse_elem("3/2*y1^2*t - y2*y3 + t^2 + 5*y1*y2^2 - 1/7", nvars).expect("literal parses");
    let b = parse_elem("y1*t + y2^2 - 2*y3*t + 4/3*y1*y2*y3", nvars).expect("literal parses");
    (a, b)
}
