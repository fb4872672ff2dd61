use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heisenberg::{dilate, group_mul, HPoint};

const BURN_IN: usize = 100;

/// `p ↦ g ∗ dilate(λ, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IfsMap {
    pub scale: f64,
    pub translation: HPoint,
}

impl IfsMap {
    pub fn apply(&self, p: HPoint) -> HPoint {
        group_mul(self.translation, dilate(self.scale, p))
    }
}

/// Iterated function system sampled by the chaos game with `ChaCha8Rng`.
/// `depth` is the number of random map applications between recorded points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IfsSpec {
    pub maps: Vec<IfsMap>,
    pub depth: usize,
    pub seed: u64,
}

impl IfsSpec {
    pub fn new(maps: Vec<IfsMap>, depth: usize, seed: u64) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::domain("an IFS needs at least one map"));
        }
        if maps.iter().any(|m| !(m.scale > 0.0 && m.scale < 1.0)) {
            return Err(Error::domain("IFS scales must lie in (0, 1)"));
        }
        if depth == 0 {
            return Err(Error::domain("IFS depth must be positive"));
        }
        Ok(Self { maps, depth, seed })
    }

    /// Two maps of ratio 1/3 with horizontal translations 0 and 2/3.
    pub fn horizontal_cantor(seed: u64) -> Self {
        Self::horizontal(1.0 / 3.0, 2.0 / 3.0, seed)
    }

    /// Two maps of ratio 1/2 covering the segment `[0, 1] × {0} × {0}`.
    pub fn horizontal_segment(seed: u64) -> Self {
        Self::horizontal(0.5, 0.5, seed)
    }

    /// Two maps of ratio `1/√2` covering the `t`-segment `{0} × [0, 1]`.
    pub fn vertical_segment(seed: u64) -> Self {
        Self {
            maps: vec![
                IfsMap {
                    scale: std::f64::consts::FRAC_1_SQRT_2,
                    translation: HPoint::IDENTITY,
                },
                IfsMap {
                    scale: std::f64::consts::FRAC_1_SQRT_2,
                    translation: HPoint { zx: 0.0, zy: 0.0, t: 0.5 },
                },
            ],
            depth: 1,
            seed,
        }
    }

    fn horizontal(scale: f64, shift: f64, seed: u64) -> Self {
        Self {
            maps: vec![
                IfsMap {
                    scale,
                    translation: HPoint::IDENTITY,
                },
                IfsMap {
                    scale,
                    translation: HPoint { zx: shift, zy: 0.0, t: 0.0 },
                },
            ],
            depth: 1,
            seed,
        }
    }
}

/// Chaos-game orbit from the origin after a burn-in of 100 iterates.
pub fn ifs_sample(spec: &IfsSpec, n_points: usize) -> Result<Vec<HPoint>> {
    let spec = IfsSpec::new(spec.maps.clone(), spec.depth, spec.seed)?;
    if n_points == 0 {
        return Err(Error::domain("n_points must be positive"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n_maps = spec.maps.len();
    let mut p = HPoint::IDENTITY;
    let step = |p: HPoint, rng: &mut ChaCha8Rng| spec.maps[rng.random_range(0..n_maps)].apply(p);
    for _ in 0..BURN_IN {
        p = step(p, &mut rng);
    }
    let mut out = Vec::with_capacity(n_points);
    for _ in 0..n_points {
        for _ in 0..spec.depth {
            p = step(p, &mut rng);
        }
        out.push(p);
    }
    Ok(out)
}
