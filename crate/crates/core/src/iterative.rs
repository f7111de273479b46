//! Iterative (waveform-relaxation style) operator splitting.
//!
//! Each sweep solves the linear nonhomogeneous problem
//!
//! ```text
//! c_i'(s) = A c_i(s) + B c_{i-1}(s),   c_i(0) = c(t^n),
//! ```
//!
//! with the previous iterate as frozen source, gaining one order of
//! accuracy per sweep relative to the accuracy of iterate 0. Iterate 0 is
//! produced by an [`InitStrategy`]; seeding with the Zassenhaus product of
//! order `k` starts the ladder `k` orders higher (see [`combined_step`]).
//!
//! The sweep ODE is integrated with a classical fixed-step fourth-order
//! method on a uniform subgrid of the step, and the previous iterate is
//! queried between nodes through a piecewise-cubic dense output
//! ([`SampledTrajectory`]). Both inner errors are `O(h^4)` in the substep
//! `h`, far below the splitting error for the supported step sizes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, Matrix, Vector};
use crate::propagator::SplitProblem;
use crate::zassenhaus::ZassenhausExpansion;

/// Default number of subintervals in the inner solve.
pub const DEFAULT_SUBSTEPS: u32 = 64;

/// Rule producing iterate 0 on a time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitStrategy {
    /// Iterate 0 is frozen at the step's initial value (weakest baseline).
    HoldConstant,
    /// Iterate 0 follows the `A`-flow alone: `exp(A s) c`.
    ExpA,
    /// Iterate 0 steps the Lie-Trotter product per subinterval.
    LieTrotter,
    /// Iterate 0 steps the Zassenhaus-corrected product of the given order.
    Zassenhaus(u32),
}

/// Which operator sits under the derivative in each sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepSide {
    /// Every sweep integrates `c_i' = A c_i + B c_{i-1}`.
    OneSidedA,
    /// Odd sweeps keep `A` under the derivative, even sweeps swap to `B`.
    Alternating,
}

/// Configuration of the iterative scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterativeConfig {
    /// Number of sweeps (>= 1).
    pub iterations: u32,
    pub init: InitStrategy,
    /// Subintervals of the inner solve (>= 4 so the cubic dense output is
    /// well defined).
    pub substeps: u32,
    pub side: SweepSide,
}

impl IterativeConfig {
    /// One-sided configuration with the default subgrid.
    pub fn new(iterations: u32, init: InitStrategy) -> Self {
        Self { iterations, init, substeps: DEFAULT_SUBSTEPS, side: SweepSide::OneSidedA }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations < 1 {
            return Err(Error::Invalid("iterative scheme needs at least one sweep"));
        }
        if self.substeps < 4 {
            return Err(Error::Invalid("inner solve needs at least 4 substeps"));
        }
        if let InitStrategy::Zassenhaus(order) = self.init {
            if !(1..=crate::zassenhaus::MAX_ORDER).contains(&order) {
                return Err(Error::UnsupportedOrder(order));
            }
        }
        Ok(())
    }
}

/// A trajectory sampled on a uniform grid with piecewise-cubic dense output.
#[derive(Debug, Clone)]
pub struct SampledTrajectory {
    start: f64,
    step: f64,
    values: Vec<Vector>,
}

impl SampledTrajectory {
    /// Wraps `values` sampled at `start + j * step`, `j = 0..values.len()-1`.
    pub fn new(start: f64, step: f64, values: Vec<Vector>) -> Result<Self> {
        if values.len() < 4 {
            return Err(Error::Invalid("dense output needs at least 4 grid nodes"));
        }
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::Invalid("grid spacing must be positive and finite"));
        }
        Ok(Self { start, step, values })
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    pub fn node(&self, j: usize) -> &Vector {
        &self.values[j]
    }

    pub fn end(&self) -> &Vector {
        self.values.last().expect("trajectory has nodes")
    }

    /// Piecewise-cubic interpolant at `s`, exact on grid nodes and on
    /// cubic-polynomial data; interpolation error `O(step^4)` otherwise.
    /// Queries outside the sampled interval are a domain error.
    pub fn value_at(&self, s: f64) -> Result<Vector> {
        let n = self.values.len() - 1; // interval count
        let u = (s - self.start) / self.step;
        let slack = 1e-9;
        if !(-slack..=n as f64 + slack).contains(&u) {
            return Err(Error::Domain("query point outside the sampled interval"));
        }

        // snap to a node so grid values are reproduced exactly
        let nearest = libm::round(u);
        if libm::fabs(u - nearest) <= slack {
            return Ok(self.values[nearest as usize].clone());
        }

        // 4-node Lagrange window, clamped at the interval ends
        let cell = libm::floor(u) as usize;
        let base = cell.saturating_sub(1).min(n - 3);
        let x = u - base as f64;
        let w = [
            -(x - 1.0) * (x - 2.0) * (x - 3.0) / 6.0,
            x * (x - 2.0) * (x - 3.0) / 2.0,
            -x * (x - 1.0) * (x - 3.0) / 2.0,
            x * (x - 1.0) * (x - 2.0) / 6.0,
        ];
        let mut out = Vector::zeros(self.values[0].dim());
        for (offset, weight) in w.iter().enumerate() {
            out.add_scaled(*weight, &self.values[base + offset]);
        }
        Ok(out)
    }
}

/// Builds the iterate-0 trajectory on the subgrid by stepping the chosen
/// product scheme on each subinterval.
fn initial_trajectory(
    p: &SplitProblem,
    h: f64,
    substeps: usize,
    init: &InitStrategy,
    c: &Vector,
) -> Result<SampledTrajectory> {
    let mut values = Vec::with_capacity(substeps + 1);
    values.push(c.clone());

    match init {
        InitStrategy::HoldConstant => {
            for _ in 0..substeps {
                values.push(c.clone());
            }
        }
        _ => {
            let mut factors: Vec<Matrix> = Vec::new();
            match init {
                InitStrategy::ExpA => factors.push(matrix_exp(p.a(), h)?),
                InitStrategy::LieTrotter => {
                    factors.push(matrix_exp(p.a(), h)?);
                    factors.push(matrix_exp(p.b(), h)?);
                }
                InitStrategy::Zassenhaus(order) => {
                    factors.push(matrix_exp(p.a(), h)?);
                    factors.push(matrix_exp(p.b(), h)?);
                    let expansion = ZassenhausExpansion::new(p.a(), p.b(), *order)?;
                    for (idx, correction) in expansion.corrections().iter().enumerate() {
                        factors.push(matrix_exp(correction, libm::pow(h, (idx + 2) as f64))?);
                    }
                }
                InitStrategy::HoldConstant => unreachable!(),
            }
            for _ in 0..substeps {
                let mut v = values.last().expect("nonempty").clone();
                for factor in factors.iter().rev() {
                    v = factor.matvec(&v);
                }
                values.push(v);
            }
        }
    }

    SampledTrajectory::new(0.0, h, values)
}

/// One step of the iterative splitting scheme: `cfg.iterations` sweeps of
/// the relaxation above, started from the iterate produced by `cfg.init`.
pub fn iterative_step(
    p: &SplitProblem,
    tau: f64,
    cfg: &IterativeConfig,
    c: &Vector,
) -> Result<Vector> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Invalid("step size must be positive and finite"));
    }
    if c.dim() != p.dim() {
        return Err(Error::Shape("state dimension must match the problem"));
    }
    cfg.validate()?;

    let substeps = cfg.substeps as usize;
    let h = tau / substeps as f64;
    let mut previous = initial_trajectory(p, h, substeps, &cfg.init, c)?;

    for sweep in 1..=cfg.iterations {
        let (under_derivative, source) = match cfg.side {
            SweepSide::OneSidedA => (p.a(), p.b()),
            SweepSide::Alternating => {
                if sweep % 2 == 1 {
                    (p.a(), p.b())
                } else {
                    (p.b(), p.a())
                }
            }
        };
        previous = relaxation_sweep(under_derivative, source, &previous, h, substeps, c)?;
    }
    Ok(previous.end().clone())
}

/// Integrates `y' = M y + N g(s)` over the subgrid with the classical
/// fourth-order one-step method, `g` being the dense output of the
/// previous iterate.
fn relaxation_sweep(
    m: &Matrix,
    n: &Matrix,
    previous: &SampledTrajectory,
    h: f64,
    substeps: usize,
    c: &Vector,
) -> Result<SampledTrajectory> {
    let mut values = Vec::with_capacity(substeps + 1);
    values.push(c.clone());
    let mut y = c.clone();

    for j in 0..substeps {
        // source at the left node, midpoint and right node of the cell
        let g0 = n.matvec(previous.node(j));
        let gm = n.matvec(&previous.value_at((j as f64 + 0.5) * h)?);
        let g1 = n.matvec(previous.node(j + 1));

        let k1 = m.matvec(&y).add(&g0);
        let mut stage = y.clone();
        stage.add_scaled(0.5 * h, &k1);
        let k2 = m.matvec(&stage).add(&gm);
        let mut stage = y.clone();
        stage.add_scaled(0.5 * h, &k2);
        let k3 = m.matvec(&stage).add(&gm);
        let mut stage = y.clone();
        stage.add_scaled(h, &k3);
        let k4 = m.matvec(&stage).add(&g1);

        y.add_scaled(h / 6.0, &k1);
        y.add_scaled(h / 3.0, &k2);
        y.add_scaled(h / 3.0, &k3);
        y.add_scaled(h / 6.0, &k4);
        values.push(y.clone());
    }

    SampledTrajectory::new(0.0, h, values)
}

/// One step of the combined scheme: Zassenhaus initialization of order
/// `zassenhaus_order` followed by `iterations` one-sided sweeps. Local
/// error order is the sum of both contributions.
pub fn combined_step(
    p: &SplitProblem,
    tau: f64,
    zassenhaus_order: u32,
    iterations: u32,
    c: &Vector,
) -> Result<Vector> {
    let cfg = IterativeConfig::new(iterations, InitStrategy::Zassenhaus(zassenhaus_order));
    iterative_step(p, tau, &cfg, c)
}
