//! Text format for curvature tensors.
//!
//! ```json
//! { "dim": 3,
//!   "entries": [ { "i": 0, "j": 1, "k": 0, "l": 1, "value": 1.0 } ] }
//! ```
//!
//! Indices are 0-based. Every listed component is propagated to its orbit
//! under the antisymmetries and the pair symmetry; unlisted components stay
//! zero. Entries that disagree on a shared slot are rejected, as is any
//! result that violates the first Bianchi identity.

use serde::{Deserialize, Serialize};

use super::{check_dim, idx, orbit, CurvatureTensor, SYMMETRY_TOL};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TensorFile {
    pub dim: usize,
    pub entries: Vec<TensorEntry>,
}

pub fn parse_tensor_file(text: &str) -> Result<CurvatureTensor> {
    let file: TensorFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("tensor file: {e}")))?;
    check_dim(file.dim)?;
    let n = file.dim;
    let mut comps = vec![0.0; n.pow(4)];
    let mut set = vec![false; n.pow(4)];
    for (pos, e) in file.entries.iter().enumerate() {
        if [e.i, e.j, e.k, e.l].iter().any(|&x| x >= n) {
            return Err(Error::Parse(format!("entry {pos}: index out of range for dim {n}")));
        }
        if !e.value.is_finite() {
            return Err(Error::Parse(format!("entry {pos}: non-finite value")));
        }
        for ([a, b, c, d], sign) in orbit([e.i, e.j, e.k, e.l]) {
            let slot = idx(n, a, b, c, d);
            let v = sign * e.value;
            if set[slot] && (comps[slot] - v).abs() > SYMMETRY_TOL * v.abs().max(1.0) {
                return Err(Error::InvalidTensor(format!(
                    "entry {pos} ({},{},{},{}) conflicts at slot ({a},{b},{c},{d}): {} vs {}",
                    e.i, e.j, e.k, e.l, comps[slot], v
                )));
            }
            comps[slot] = v;
            set[slot] = true;
        }
    }
    CurvatureTensor::from_components(n, comps)
}

/// Lists one representative per orbit (`i < j`, `k < l`, `(i,j) ≤ (k,l)`),
/// skipping zeros.
pub fn write_tensor_file(r: &CurvatureTensor) -> String {
    let n = r.dim();
    let mut entries = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    if (i, j) > (k, l) {
                        continue;
                    }
                    let value = r.get(i, j, k, l);
                    if value != 0.0 {
                        entries.push(TensorEntry { i, j, k, l, value });
                    }
                }
            }
        }
    }
    serde_json::to_string_pretty(&TensorFile { dim: n, entries }).expect("tensor file serializes")
}
