//! Seeded perturbation recipes and same-trace competitor fields.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elastic::{ElasticProfile, ModeProfile};
use crate::energy::Perturbation;
use crate::error::{invalid, Result};
use crate::grid::Grid1D;

/// Named distribution for random decaying perturbations of the upper trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Distribution {
    /// One Gaussian bump.
    GaussianBump,
    /// Sum of one to three Gaussian bumps.
    GaussianMix,
}

/// Amplitudes are in units of b, widths and centers in units of zeta.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    pub distribution: Distribution,
    pub seed: u64,
    pub count: usize,
    pub amp_min: f64,
    pub amp_max: f64,
    pub width_min: f64,
    pub width_max: f64,
    pub center_max: f64,
}

impl Recipe {
    pub fn in_range(seed: u64, count: usize) -> Self {
        Self {
            distribution: Distribution::GaussianMix,
            seed,
            count,
            amp_min: 0.01,
            amp_max: 0.2,
            width_min: 0.5,
            width_max: 3.0,
            center_max: 5.0,
        }
    }

    /// Amplitudes large enough to push u1 + phi1 past +-b/4.
    pub fn out_of_range(seed: u64, count: usize) -> Self {
        Self {
            amp_min: 0.3,
            amp_max: 0.8,
            ..Self::in_range(seed, count)
        }
    }

    fn check(&self) -> Result<()> {
        let ok = |lo: f64, hi: f64| lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo <= hi;
        if !ok(self.amp_min, self.amp_max) {
            return Err(invalid("amp_min", "need 0 <= amp_min <= amp_max"));
        }
        if !ok(self.width_min, self.width_max) || self.width_min <= 0.0 {
            return Err(invalid("width_min", "need 0 < width_min <= width_max"));
        }
        if !(self.center_max >= 0.0 && self.center_max.is_finite()) {
            return Err(invalid("center_max", "must be finite and >= 0"));
        }
        Ok(())
    }

    pub fn generate(&self, grid: &Grid1D, b: f64, zeta: f64) -> Result<Vec<Perturbation>> {
        self.check()?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let x = grid.nodes();
        let mut out = Vec::with_capacity(self.count);
        for _ in 0..self.count {
            let bumps = match self.distribution {
                Distribution::GaussianBump => 1,
                Distribution::GaussianMix => rng.gen_range(1..=3),
            };
            let mut phi = vec![0.0; x.len()];
            for i in 0..bumps {
                let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                // the first bump carries the requested amplitude, the rest are smaller
                let scale = if i == 0 { 1.0 } else { 0.5 };
                let a = sign * scale * b * rng.gen_range(self.amp_min..=self.amp_max);
                let w = zeta * rng.gen_range(self.width_min..=self.width_max);
                let c = zeta * rng.gen_range(-self.center_max..=self.center_max);
                for (f, xj) in phi.iter_mut().zip(&x) {
                    let s = (xj - c) / w;
                    *f += a * (-s * s).exp();
                }
            }
            out.push(Perturbation::new(grid, phi)?);
        }
        Ok(out)
    }
}

/// Same-trace y-profiles that differ from the elastic extension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Competitor {
    /// g1 = e^{-t}, no normal displacement.
    PureDecay,
    /// Extension g1 with the normal displacement removed.
    NoNormal,
    /// Extension with the normal displacement scaled by 1.5.
    ScaledNormal,
    /// g1 = (1 + t) e^{-2t} with the extension g2.
    FastDecay,
    /// Extension stretched by a factor 2 in y.
    Stretched,
}

impl Competitor {
    pub const ALL: [Competitor; 5] = [
        Competitor::PureDecay,
        Competitor::NoNormal,
        Competitor::ScaledNormal,
        Competitor::FastDecay,
        Competitor::Stretched,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Competitor::PureDecay => "pure-decay",
            Competitor::NoNormal => "no-normal",
            Competitor::ScaledNormal => "scaled-normal",
            Competitor::FastDecay => "fast-decay",
            Competitor::Stretched => "stretched",
        }
    }
}

/// A competitor bound to a Poisson ratio.
#[derive(Debug, Clone, Copy)]
pub struct CompetitorProfile {
    pub kind: Competitor,
    pub nu: f64,
}

impl ModeProfile for CompetitorProfile {
    fn eval(&self, t: f64) -> [f64; 4] {
        let ext = ElasticProfile { nu: self.nu };
        let [g1, d1, g2, d2] = ext.eval(t);
        match self.kind {
            Competitor::PureDecay => {
                let e = (-t).exp();
                [e, -e, 0.0, 0.0]
            }
            Competitor::NoNormal => [g1, d1, 0.0, 0.0],
            Competitor::ScaledNormal => [g1, d1, 1.5 * g2, 1.5 * d2],
            Competitor::FastDecay => {
                let e = (-2.0 * t).exp();
                [(1.0 + t) * e, -(1.0 + 2.0 * t) * e, g2, d2]
            }
            Competitor::Stretched => {
                let [s1, e1, s2, e2] = ext.eval(0.5 * t);
                [s1, 0.5 * e1, s2, 0.5 * e2]
            }
        }
    }
}
