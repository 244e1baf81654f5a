//! Gauss–Hermite quadrature.
//!
//! Each node is bracketed by bisection on the Sturm count of the Hermite
//! Jacobi matrix (diagonal 0, off-diagonal `sqrt(k/2)`), then polished by
//! Newton steps on the orthonormal Hermite recurrence, which also supplies
//! the weight `2 / h'_n(t)²`.

use std::sync::OnceLock;

use crate::error::{validation, Result};

/// Nodes and weights for `∫ f(t) exp(-t²) dt ≈ Σ w_i f(t_i)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// π^(-1/4)
const PI_M4: f64 = 0.751_125_544_464_942_5;

impl GaussHermite {
    pub fn new(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(validation("Gauss-Hermite order must be at least 1"));
        }
        let n = order;
        let nf = n as f64;
        let bound = (2.0 * nf + 1.0).sqrt() + 1.0;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            // The i-th smallest eigenvalue: count(< x) crosses from i to i + 1.
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid == lo || mid == hi {
                    break;
                }
                if sturm_count(n, mid) > i {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let mut z = 0.5 * (lo + hi);
            for _ in 0..3 {
                let (p1, p2) = hermite_orthonormal(n, z);
                let step = p1 / ((2.0 * nf).sqrt() * p2);
                if step.is_finite() && step.abs() < (hi - lo).max(1e-12) {
                    z -= step;
                }
            }
            let (_, p2) = hermite_orthonormal(n, z);
            let derivative = (2.0 * nf).sqrt() * p2;
            nodes.push(z);
            weights.push(2.0 / (derivative * derivative));
        }
        // Enforce exact symmetry.
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let t = 0.5 * (nodes[j] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            nodes[i] = -t;
            nodes[j] = t;
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(Self { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// The rule rescaled for a standard normal variable: returns
    /// `(z_i, p_i)` with `E[f(Z)] ≈ Σ p_i f(z_i)`, `Σ p_i = 1`.
    pub fn standard_normal(&self) -> StandardNormalRule {
        let scale = std::f64::consts::PI.sqrt().recip();
        let sqrt2 = std::f64::consts::SQRT_2;
        let mut points: Vec<f64> = self.nodes.iter().map(|t| sqrt2 * t).collect();
        let mut probs: Vec<f64> = self.weights.iter().map(|w| w * scale).collect();
        // Renormalize so constant integrands are exact to the last bit.
        let total: f64 = probs.iter().sum();
        probs.iter_mut().for_each(|p| *p /= total);
        points.shrink_to_fit();
        StandardNormalRule { points, probs }
    }
}

/// Number of eigenvalues of the order-`n` Hermite Jacobi matrix below `x`.
fn sturm_count(n: usize, x: f64) -> usize {
    let mut count = 0;
    let mut q = -x;
    for k in 0..n {
        if k > 0 {
            let b2 = k as f64 / 2.0;
            q = -x - b2 / q;
        }
        if q == 0.0 {
            q = -f64::EPSILON * (1.0 + x.abs());
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Returns `(h_n(z), h_{n-1}(z))` for the orthonormal Hermite polynomials.
fn hermite_orthonormal(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI_M4;
    let mut p2 = 0.0;
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
    }
    (p1, p2)
}

#[derive(Debug, Clone)]
pub struct StandardNormalRule {
    pub points: Vec<f64>,
    pub probs: Vec<f64>,
}

impl StandardNormalRule {
    pub fn expect(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.probs)
            .map(|(&z, &p)| p * f(z))
            .sum()
    }
}

/// Shared rule at the default order used by the MI engine.
pub fn default_rule() -> &'static StandardNormalRule {
    static RULE: OnceLock<StandardNormalRule> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussHermite::new(crate::mi::DEFAULT_QUADRATURE_ORDER)
            .expect("default order is positive")
            .standard_normal()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    #[test]
    fn two_point_rule() {
        let gh = GaussHermite::new(2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((gh.nodes()[0] + r).abs() < 1e-15);
        assert!((gh.nodes()[1] - r).abs() < 1e-15);
        for w in gh.weights() {
            assert!((w - SQRT_PI / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn odd_order_has_center_node() {
        let gh = GaussHermite::new(5).unwrap();
        assert_eq!(gh.nodes()[2], 0.0);
        // Known value: w_center = 8√π/15 for n = 5.
        assert!((gh.weights()[2] - 8.0 * SQRT_PI / 15.0).abs() < 1e-14);
    }

    #[test]
    fn exact_for_even_moments() {
        // ∫ t^{2k} e^{-t²} dt = Γ(k + 1/2) = (2k-1)!! √π / 2^k
        for &n in &[8usize, 64, 128, 200] {
            let gh = GaussHermite::new(n).unwrap();
            let mut expected = SQRT_PI;
            for k in 0..6 {
                let got: f64 = gh
                    .nodes()
                    .iter()
                    .zip(gh.weights())
                    .map(|(t, w)| w * t.powi(2 * k))
                    .sum();
                assert!(
                    (got - expected).abs() <= 1e-12 * expected,
                    "n={n} k={k} got={got} expected={expected}"
                );
                expected *= (2 * k + 1) as f64 / 2.0;
            }
        }
    }

    #[test]
    fn nodes_are_sorted_and_symmetric() {
        let gh = GaussHermite::new(128).unwrap();
        assert!(gh.nodes().windows(2).all(|w| w[0] < w[1]));
        for i in 0..64 {
            assert_eq!(gh.nodes()[i], -gh.nodes()[127 - i]);
        }
        assert!(gh.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn standard_normal_rule_matches_moments() {
        let rule = GaussHermite::new(64).unwrap().standard_normal();
        assert!((rule.probs.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(rule.expect(|z| z).abs() < 1e-14);
        assert!((rule.expect(|z| z * z) - 1.0).abs() < 1e-13);
        assert!((rule.expect(|z| z.powi(4)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(GaussHermite::new(0).is_err());
    }
}
