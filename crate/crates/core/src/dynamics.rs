//! Noisy one-dimensional maps on the unit interval.
//!
//! Iteration is `x' = f(x) + ξ` with `ξ ~ N(0, σ²)`. States pushed outside
//! [0, 1] by the noise are reflected back (`x < 0 → −x`, `x > 1 → 2 − x`)
//! until they land inside.

use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Normal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapFamily {
    /// f(x) = r x (1 − x)
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    pub family: MapFamily,
    pub r: f64,
}

impl MapSpec {
    pub fn logistic(r: f64) -> Result<Self> {
        if !(r > 0.0 && r <= 4.0) {
            return Err(Error::Domain {
                what: "logistic r",
                value: r,
                expected: "0 < r <= 4",
            });
        }
        Ok(Self {
            family: MapFamily::Logistic,
            r,
        })
    }

    fn eval(&self, x: f64) -> f64 {
        match self.family {
            MapFamily::Logistic => self.r * x * (1.0 - x),
        }
    }

    /// f′(x).
    pub fn derivative(&self, x: f64) -> f64 {
        match self.family {
            MapFamily::Logistic => self.r - 2.0 * self.r * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub sigma: f64,
}

impl NoiseSpec {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(Error::Domain {
                what: "noise sigma",
                value: sigma,
                expected: "finite sigma >= 0",
            });
        }
        Ok(Self { sigma })
    }

    pub fn none() -> Self {
        Self { sigma: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub map: MapSpec,
    pub noise: NoiseSpec,
    /// `None` when the initial condition was supplied by the caller.
    pub seed: Option<u64>,
    pub transient: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    states: Vec<f64>,
    meta: TrajectoryMeta,
}

impl Trajectory {
    /// Wraps externally produced states. Every state must lie in [0, 1].
    pub fn from_states(states: Vec<f64>, meta: TrajectoryMeta) -> Result<Self> {
        if let Some(&bad) = states.iter().find(|x| !(0.0..=1.0).contains(*x)) {
            return Err(Error::Domain {
                what: "trajectory state",
                value: bad,
                expected: "0 <= x <= 1",
            });
        }
        Ok(Self { states, meta })
    }

    pub fn states(&self) -> &[f64] {
        &self.states
    }

    pub fn meta(&self) -> &TrajectoryMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            what: "map argument",
            value: x,
            expected: "0 <= x <= 1",
        })
    }
}

/// Noiseless map application.
pub fn map_apply(spec: &MapSpec, x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(spec.eval(x))
}

fn reflect(mut x: f64) -> f64 {
    loop {
        if x < 0.0 {
            x = -x;
        } else if x > 1.0 {
            x = 2.0 - x;
        } else {
            return x;
        }
    }
}

/// Draws an initial condition uniformly on the open interval (0, 1), discards
/// `transient` iterates and records `n` states.
pub fn generate_trajectory(
    map: &MapSpec,
    noise: &NoiseSpec,
    n: usize,
    transient: usize,
    seed: u64,
) -> Result<Trajectory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0: f64 = rng.sample(Open01);
    let mut traj = iterate(map, noise, n, transient, x0, &mut rng)?;
    traj.meta.seed = Some(seed);
    Ok(traj)
}

/// Same as [`generate_trajectory`] but starting from a caller-chosen state
/// and drawing noise from `rng`.
pub fn iterate<R: Rng + ?Sized>(
    map: &MapSpec,
    noise: &NoiseSpec,
    n: usize,
    transient: usize,
    x0: f64,
    rng: &mut R,
) -> Result<Trajectory> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "trajectory length must be at least 1".into(),
        ));
    }
    check_unit(x0)?;
    let normal = if noise.sigma > 0.0 {
        Some(Normal::new(0.0, noise.sigma).map_err(|e| Error::InvalidArgument(e.to_string()))?)
    } else {
        None
    };
    let mut step = |x: f64| -> f64 {
        let y = map.eval(x);
        match &normal {
            Some(dist) => reflect(y + dist.sample(rng)),
            None => y,
        }
    };

    let mut x = x0;
    for _ in 0..transient {
        x = step(x);
    }
    let mut states = Vec::with_capacity(n);
    states.push(x);
    for _ in 1..n {
        x = step(x);
        states.push(x);
    }
    Ok(Trajectory {
        states,
        meta: TrajectoryMeta {
            map: *map,
            noise: *noise,
            seed: None,
            transient,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovEstimate {
    /// Mean of log₂|f′(x_t)|; −∞ when some derivative is exactly zero.
    pub bits_per_step: f64,
    /// Number of states where f′ vanished.
    pub zero_derivatives: usize,
}

impl LyapunovEstimate {
    pub fn is_degenerate(&self) -> bool {
        self.zero_derivatives > 0
    }
}

/// Lyapunov exponent along `traj` using the known derivative of `map`.
pub fn lyapunov_exponent(map: &MapSpec, traj: &Trajectory) -> Result<LyapunovEstimate> {
    if traj.is_empty() {
        return Err(Error::SequenceTooShort { len: 0, needed: 1 });
    }
    let mut sum = 0.0;
    let mut zero_derivatives = 0;
    for &x in traj.states() {
        let slope = map.derivative(x).abs();
        if slope == 0.0 {
            zero_derivatives += 1;
        } else {
            sum += slope.log2();
        }
    }
    let bits_per_step = if zero_derivatives > 0 {
        log::warn!("{zero_derivatives} trajectory states have f'(x) = 0");
        f64::NEG_INFINITY
    } else {
        sum / traj.len() as f64
    };
    Ok(LyapunovEstimate {
        bits_per_step,
        zero_derivatives,
    })
}
