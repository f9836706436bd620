use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::jet::Jet;
use crate::error::{Error, Result};

/// Diagonal metric `g₁dx² + g₂dy² + g₃dz²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum MetricChart {
    Euclid,
    /// `dx² + e^{2ax}dy² + e^{−2ax}dz²`.
    E11 { a: f64 },
    /// `dx² + x^{1+a}dy² + x^{1−a}dz²`, `x > 0`.
    Power { a: f64 },
    /// `e^y dx² + (e^y/y) dy² + y dz²`, `y > 0`.
    ExpExample,
    /// `dx² + w(x)(dy² + s_K(y)² dz²)` with `w = Kx² + Ax + B`.
    Warped { k: f64, a: f64, b: f64 },
    /// `dx² + e^{2x}(dy² + dz²)`, curvature −1.
    Hyperbolic,
}

pub const COORDINATES: [&str; 3] = ["x", "y", "z"];

fn warp(k: f64, a: f64, b: f64, x: f64) -> f64 {
    k * x * x + a * x + b
}

/// `s_K(y)`: `sin(√K y)/√K`, `y`, or `sinh(√−K y)/√−K`.
fn s_k(k: f64, y: Jet) -> Jet {
    if k > 0.0 {
        let r = k.sqrt();
        (y * r).sin() * (1.0 / r)
    } else if k < 0.0 {
        let r = (-k).sqrt();
        (y * r).sinh() * (1.0 / r)
    } else {
        y
    }
}

impl MetricChart {
    pub fn name(&self) -> &'static str {
        match self {
            MetricChart::Euclid => "euclid",
            MetricChart::E11 { .. } => "e11",
            MetricChart::Power { .. } => "power",
            MetricChart::ExpExample => "exp_example",
            MetricChart::Warped { .. } => "warped",
            MetricChart::Hyperbolic => "hyperbolic",
        }
    }

    pub fn in_domain(&self, p: [f64; 3]) -> bool {
        if !p.iter().all(|c| c.is_finite()) {
            return false;
        }
        match *self {
            MetricChart::Euclid | MetricChart::E11 { .. } | MetricChart::Hyperbolic => true,
            MetricChart::Power { .. } => p[0] > 0.0,
            MetricChart::ExpExample => p[1] > 0.0,
            MetricChart::Warped { k, a, b } => {
                let y_ok = if k > 0.0 { p[1] > 0.0 && p[1] < std::f64::consts::PI / k.sqrt() } else { p[1] > 0.0 };
                warp(k, a, b, p[0]) > 0.0 && y_ok
            }
        }
    }

    /// `(g₁, g₂, g₃)` with exact first and second derivatives.
    pub fn components(&self, p: [f64; 3]) -> Result<[Jet; 3]> {
        if !self.in_domain(p) {
            return Err(Error::OutOfDomain(p));
        }
        let [x, y, _z] = Jet::seed(p);
        let one = Jet::constant(1.0);
        Ok(match *self {
            MetricChart::Euclid => [one, one, one],
            MetricChart::E11 { a } => [one, (x * (2.0 * a)).exp(), (x * (-2.0 * a)).exp()],
            MetricChart::Power { a } => [one, x.powf(1.0 + a), x.powf(1.0 - a)],
            MetricChart::ExpExample => [y.exp(), y.exp() / y, y],
            MetricChart::Warped { k, a, b } => {
                let w = x * x * k + x * a + b;
                let s = s_k(k, y);
                [one, w, w * s * s]
            }
            MetricChart::Hyperbolic => {
                let e = (x * 2.0).exp();
                [one, e, e]
            }
        })
    }

    /// A deterministic point inside the domain, away from its boundary.
    pub fn sample_point(&self, u: [f64; 3]) -> [f64; 3] {
        // u ∈ [0,1)³
        let spread = |t: f64| 2.0 * t - 1.0;
        match *self {
            MetricChart::Power { .. } => [0.5 + 2.0 * u[0], spread(u[1]), spread(u[2])],
            MetricChart::ExpExample => [spread(u[0]), 0.5 + 2.0 * u[1], spread(u[2])],
            MetricChart::Warped { k, a, b } => {
                let y = if k > 0.0 { (0.2 + 0.6 * u[1]) * std::f64::consts::PI / k.sqrt() } else { 0.5 + u[1] };
                let mut x = spread(u[0]);
                // shrink toward 0 until the warp is comfortably positive
                while warp(k, a, b, x) < 0.1 && x.abs() > 1e-3 {
                    x *= 0.5;
                }
                [x, y, spread(u[2])]
            }
            _ => [spread(u[0]), spread(u[1]), spread(u[2])],
        }
    }
}

/// A named metric: a diagonal chart, or a left-invariant metric given by
/// Milnor structure constants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NamedMetric {
    Chart(MetricChart),
    Milnor([f64; 3]),
}

pub const METRIC_NAMES: [&str; 7] = ["euclid", "e11", "power", "exp_example", "warped", "hyperbolic", "milnor"];

/// Looks up `name` with parameters `params`; missing parameters take the
/// defaults `e11: a=1`, `power: a=2`, `warped: K=1, A=0, B=1`,
/// `milnor: l1=1, l2=1, l3=2`.
pub fn lookup(name: &str, params: &BTreeMap<String, f64>) -> Result<NamedMetric> {
    let allowed: &[(&str, f64)] = match name {
        "euclid" | "exp_example" | "hyperbolic" => &[],
        "e11" => &[("a", 1.0)],
        "power" => &[("a", 2.0)],
        "warped" => &[("K", 1.0), ("A", 0.0), ("B", 1.0)],
        "milnor" => &[("l1", 1.0), ("l2", 1.0), ("l3", 2.0)],
        _ => return Err(Error::UnknownMetric(name.to_string())),
    };
    if let Some(k) = params.keys().find(|k| !allowed.iter().any(|(a, _)| a == k)) {
        return Err(Error::InvalidParameter(format!("metric {name} has no parameter {k}")));
    }
    let get = |key: &str| {
        let default = allowed.iter().find(|(a, _)| *a == key).map(|(_, d)| *d).expect("declared parameter");
        params.get(key).copied().unwrap_or(default)
    };
    Ok(match name {
        "euclid" => NamedMetric::Chart(MetricChart::Euclid),
        "exp_example" => NamedMetric::Chart(MetricChart::ExpExample),
        "hyperbolic" => NamedMetric::Chart(MetricChart::Hyperbolic),
        "e11" => NamedMetric::Chart(MetricChart::E11 { a: get("a") }),
        "power" => NamedMetric::Chart(MetricChart::Power { a: get("a") }),
        "warped" => NamedMetric::Chart(MetricChart::Warped { k: get("K"), a: get("A"), b: get("B") }),
        _ => NamedMetric::Milnor([get("l1"), get("l2"), get("l3")]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_match_finite_differences() {
        let charts = [
            MetricChart::E11 { a: 0.7 },
            MetricChart::Power { a: 2.0 },
            MetricChart::ExpExample,
            MetricChart::Warped { k: 1.0, a: 0.0, b: 1.0 },
            MetricChart::Warped { k: -1.0, a: 1.0, b: 2.0 },
            MetricChart::Hyperbolic,
        ];
        let h = 1e-5;
        for c in charts {
            let p = c.sample_point([0.3, 0.6, 0.2]);
            let g = c.components(p).unwrap();
            for i in 0..3 {
                assert!(g[i].v > 0.0);
                for k in 0..3 {
                    let mut a = p;
                    let mut b = p;
                    a[k] += h;
                    b[k] -= h;
                    let ga = c.components(a).unwrap()[i];
                    let gb = c.components(b).unwrap()[i];
                    let d = (ga.v - gb.v) / (2.0 * h);
                    assert!((d - g[i].g[k]).abs() <= 1e-6 * g[i].g[k].abs().max(1.0), "{c:?} {i} {k}");
                    for l in 0..3 {
                        let d2 = (ga.g[l] - gb.g[l]) / (2.0 * h);
                        assert!((d2 - g[i].h[k][l]).abs() <= 1e-6 * g[i].h[k][l].abs().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn domains() {
        assert!(MetricChart::Power { a: 2.0 }.components([-1.0, 0.0, 0.0]).is_err());
        assert!(MetricChart::ExpExample.components([0.0, 0.0, 0.0]).is_err());
        assert!(MetricChart::Warped { k: 0.0, a: 1.0, b: 1.0 }.components([-2.0, 1.0, 0.0]).is_err());
        assert!(MetricChart::Euclid.components([1e9, -3.0, 2.0]).is_ok());
    }

    #[test]
    fn registry() {
        let mut p = BTreeMap::new();
        assert_eq!(lookup("e11", &p).unwrap(), NamedMetric::Chart(MetricChart::E11 { a: 1.0 }));
        p.insert("a".to_string(), 0.5);
        assert_eq!(lookup("power", &p).unwrap(), NamedMetric::Chart(MetricChart::Power { a: 0.5 }));
        assert!(matches!(lookup("nope", &p), Err(Error::UnknownMetric(_))));
        assert!(matches!(lookup("euclid", &p), Err(Error::InvalidParameter(_))));
        for name in METRIC_NAMES {
            assert!(lookup(name, &BTreeMap::new()).is_ok());
        }
    }
}
