//! Seeded random sampling of spacetime points and parameters.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spinors::SpinorField;
use crate::symexpr::SpacetimePoint;

/// Half-width of the sampling box, in units of `1/m`.
pub const BOX_HALF_WIDTH: f64 = 2.0;

/// Draws points uniformly from `[−2, 2]⁴/m`.
#[derive(Debug, Clone)]
pub struct PointSampler {
    rng: ChaCha8Rng,
    half_width: f64,
}

impl PointSampler {
    pub fn new(seed: u64, mass: f64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            half_width: BOX_HALF_WIDTH / mass,
        }
    }

    pub fn with_half_width(seed: u64, half_width: f64) -> Self {
        PointSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            half_width,
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn point(&mut self) -> SpacetimePoint {
        let w = self.half_width;
        let mut c = || self.rng.gen_range(-w..=w);
        SpacetimePoint::new(c(), c(), c(), c())
    }

    pub fn points(&mut self, n: usize) -> Vec<SpacetimePoint> {
        (0..n).map(|_| self.point()).collect()
    }

    /// `n` points at which every guard exponent of `field` stays within
    /// `±cap`; gives up after `1000·n` draws and returns what it has.
    pub fn sample_within(&mut self, field: &SpinorField, n: usize, cap: f64) -> Vec<SpacetimePoint> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n.saturating_mul(1000) {
            if out.len() == n {
                break;
            }
            let p = self.point();
            if field.within(&p, cap) {
                out.push(p);
            }
        }
        out
    }

    /// Points for the closed-form degenerate family at angle `xi`: `t, x, y`
    /// from the box and `z` chosen so the real exponent
    /// `(m/sin²ξ)(z − t cos ξ)` is uniform in `[−cap, cap]`.
    pub fn degenerate_points(&mut self, xi: f64, mass: f64, n: usize, cap: f64) -> Vec<SpacetimePoint> {
        let (s, c) = xi.sin_cos();
        (0..n)
            .map(|_| {
                let mut p = self.point();
                let u = self.rng.gen_range(-cap..=cap);
                p.z = p.t * c + u * s * s / mass;
                p
            })
            .collect()
    }

    /// Angle drawn uniformly from the open interval `(0, π)`.
    pub fn angle(&mut self) -> f64 {
        loop {
            let xi = self.rng.gen_range(0.0..std::f64::consts::PI);
            if xi > 0.0 {
                return xi;
            }
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }
}
