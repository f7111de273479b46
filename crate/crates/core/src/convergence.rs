//! Scheme descriptors, uniform time marching and observed-order fitting.

use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::iterative::{combined_step, iterative_step, InitStrategy, IterativeConfig, SweepSide};
use crate::linalg::{Vector, VectorNorm};
use crate::propagator::{
    exact_step, lie_trotter_step, strang_step, zassenhaus_step, SplitProblem,
};

/// Errors below this floor sit in the roundoff plateau and are excluded
/// from order fits.
pub const ERROR_FIT_FLOOR: f64 = 100.0 * f64::EPSILON;

/// A one-step scheme together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeDescriptor {
    Exact,
    Lie,
    Strang,
    Zassenhaus { order: u32 },
    Iterative { iterations: u32, init: InitStrategy, side: SweepSide },
    Combined { zassenhaus_order: u32, iterations: u32 },
}

impl SchemeDescriptor {
    /// One-sided iterative scheme with the default subgrid.
    pub fn iterative(iterations: u32, init: InitStrategy) -> Self {
        SchemeDescriptor::Iterative { iterations, init, side: SweepSide::OneSidedA }
    }
}

impl fmt::Display for InitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitStrategy::HoldConstant => write!(f, "hold-constant"),
            InitStrategy::ExpA => write!(f, "exp-A"),
            InitStrategy::LieTrotter => write!(f, "lie-trotter"),
            InitStrategy::Zassenhaus(order) => write!(f, "zassenhaus-{order}"),
        }
    }
}

impl FromStr for InitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hold-constant" => Ok(InitStrategy::HoldConstant),
            "exp-A" => Ok(InitStrategy::ExpA),
            "lie-trotter" => Ok(InitStrategy::LieTrotter),
            _ => match s.strip_prefix("zassenhaus-") {
                Some(order) => order
                    .parse::<u32>()
                    .map(InitStrategy::Zassenhaus)
                    .map_err(|_| Error::Invalid("malformed zassenhaus init order")),
                None => Err(Error::Invalid("unknown initialization strategy")),
            },
        }
    }
}

impl fmt::Display for SchemeDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeDescriptor::Exact => write!(f, "exact"),
            SchemeDescriptor::Lie => write!(f, "lie"),
            SchemeDescriptor::Strang => write!(f, "strang"),
            SchemeDescriptor::Zassenhaus { order } => write!(f, "zassenhaus-{order}"),
            SchemeDescriptor::Iterative { iterations, init, side } => {
                write!(f, "iterative:{iterations}:{init}")?;
                if *side == SweepSide::Alternating {
                    write!(f, ":alternating")?;
                }
                Ok(())
            }
            SchemeDescriptor::Combined { zassenhaus_order, iterations } => {
                write!(f, "combined:{zassenhaus_order}:{iterations}")
            }
        }
    }
}

impl FromStr for SchemeDescriptor {
    type Err = Error;

    /// Parses labels like `lie`, `zassenhaus-2`, `iterative:3:exp-A`,
    /// `iterative:2:lie-trotter:alternating`, `combined:2:2`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => return Ok(SchemeDescriptor::Exact),
            "lie" => return Ok(SchemeDescriptor::Lie),
            "strang" => return Ok(SchemeDescriptor::Strang),
            _ => {}
        }
        if let Some(order) = s.strip_prefix("zassenhaus-") {
            let order =
                order.parse::<u32>().map_err(|_| Error::Invalid("malformed zassenhaus order"))?;
            return Ok(SchemeDescriptor::Zassenhaus { order });
        }
        if let Some(rest) = s.strip_prefix("iterative:") {
            let mut parts = rest.splitn(3, ':');
            let iterations = parts
                .next()
                .and_then(|p| p.parse::<u32>().ok())
                .ok_or(Error::Invalid("malformed iteration count"))?;
            let init: InitStrategy =
                parts.next().ok_or(Error::Invalid("missing initialization strategy"))?.parse()?;
            let side = match parts.next() {
                None | Some("one-sided-A") => SweepSide::OneSidedA,
                Some("alternating") => SweepSide::Alternating,
                Some(_) => return Err(Error::Invalid("unknown sweep side")),
            };
            return Ok(SchemeDescriptor::Iterative { iterations, init, side });
        }
        if let Some(rest) = s.strip_prefix("combined:") {
            let mut parts = rest.splitn(2, ':');
            let zassenhaus_order = parts
                .next()
                .and_then(|p| p.parse::<u32>().ok())
                .ok_or(Error::Invalid("malformed zassenhaus order"))?;
            let iterations = parts
                .next()
                .and_then(|p| p.parse::<u32>().ok())
                .ok_or(Error::Invalid("malformed iteration count"))?;
            return Ok(SchemeDescriptor::Combined { zassenhaus_order, iterations });
        }
        Err(Error::Invalid("unknown scheme label"))
    }
}

/// Applies one step of the described scheme with the configured subgrid
/// size for the iterative variants.
pub fn scheme_step_with_substeps(
    p: &SplitProblem,
    tau: f64,
    scheme: &SchemeDescriptor,
    substeps: u32,
    c: &Vector,
) -> Result<Vector> {
    match scheme {
        SchemeDescriptor::Exact => exact_step(p, tau, c),
        SchemeDescriptor::Lie => lie_trotter_step(p, tau, c),
        SchemeDescriptor::Strang => strang_step(p, tau, c),
        SchemeDescriptor::Zassenhaus { order } => zassenhaus_step(p, tau, *order, c),
        SchemeDescriptor::Iterative { iterations, init, side } => {
            let cfg = IterativeConfig { iterations: *iterations, init: *init, substeps, side: *side };
            iterative_step(p, tau, &cfg, c)
        }
        SchemeDescriptor::Combined { zassenhaus_order, iterations } => {
            combined_step(p, tau, *zassenhaus_order, *iterations, c)
        }
    }
}

/// Applies one step of the described scheme with default parameters.
pub fn scheme_step(
    p: &SplitProblem,
    tau: f64,
    scheme: &SchemeDescriptor,
    c: &Vector,
) -> Result<Vector> {
    scheme_step_with_substeps(p, tau, scheme, crate::iterative::DEFAULT_SUBSTEPS, c)
}

/// Marches the scheme from 0 to `t_end` in uniform steps of `tau`,
/// starting from the problem's initial vector. Iterative schemes are
/// re-seeded each step from the previous endpoint.
///
/// `tau` must divide `t_end` to within `1e-12`.
pub fn march(
    p: &SplitProblem,
    scheme: &SchemeDescriptor,
    tau: f64,
    t_end: f64,
    substeps: u32,
) -> Result<Vector> {
    if !(tau > 0.0) || !tau.is_finite() || !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Invalid("step size and horizon must be positive and finite"));
    }
    let steps = libm::round(t_end / tau);
    if steps < 1.0 || libm::fabs(steps * tau - t_end) > 1e-12 * f64::max(1.0, libm::fabs(t_end)) {
        return Err(Error::Invalid("step size must divide the horizon"));
    }
    let mut state = p.c0().clone();
    for _ in 0..steps as u64 {
        state = scheme_step_with_substeps(p, tau, scheme, substeps, &state)?;
    }
    Ok(state)
}

/// Least-squares slope of `log(error)` against `log(tau)`.
///
/// Needs at least three pairs; every error must be strictly positive.
pub fn estimate_order(pairs: &[(f64, f64)]) -> Result<f64> {
    if pairs.len() < 3 {
        return Err(Error::Invalid("order fit needs at least 3 (tau, error) pairs"));
    }
    let mut xs = [0.0; 2]; // running sums: x, x^2
    let mut ys = 0.0;
    let mut xy = 0.0;
    let n = pairs.len() as f64;
    for &(tau, err) in pairs {
        if !(tau > 0.0) || !(err > 0.0) {
            return Err(Error::Domain("order fit requires positive step sizes and errors"));
        }
        let x = libm::log(tau);
        let y = libm::log(err);
        xs[0] += x;
        xs[1] += x * x;
        ys += y;
        xy += x * y;
    }
    let denom = xs[1] - xs[0] * xs[0] / n;
    if denom == 0.0 {
        return Err(Error::Domain("order fit requires distinct step sizes"));
    }
    Ok((xy - xs[0] * ys / n) / denom)
}

/// Maximum over the standard basis of the max-norm difference between two
/// linear maps; the probe norm used for operator-error statements.
pub fn operator_error_max<F, G>(dim: usize, mut f: F, mut g: G) -> Result<f64>
where
    F: FnMut(&Vector) -> Result<Vector>,
    G: FnMut(&Vector) -> Result<Vector>,
{
    let mut worst: f64 = 0.0;
    for j in 0..dim {
        let probe = Vector::basis(dim, j);
        let diff = f(&probe)?.sub(&g(&probe)?);
        worst = worst.max(diff.norm(VectorNorm::Max)?);
    }
    Ok(worst)
}
