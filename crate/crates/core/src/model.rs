//! Benchmark problem generators: the 2x2 matrix demo, a two-species
//! convection-diffusion-decay system on a 1D grid, and the mobile/immobile
//! multiphase decay chain.
//!
//! All PDE models are semidiscretized with the same stencils on a uniform
//! grid with zero-inflow Dirichlet data: central second differences for
//! diffusion, first-order upwind (for `v >= 0`) for convection. The
//! displayed matrices already encode the boundary rows; the outflow side
//! is the natural upwind exit row.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, Matrix, Vector};
use crate::propagator::SplitProblem;

/// The 2x2 demo: `u' = [[1,2],[3,0]] u`, `u(0) = (0,1)`, split into
/// `A = [[1,1],[1,0]]` and `B = [[0,1],[2,0]]`, horizon 1.
///
/// The first solution component is `2 (e^{3t} - e^{-2t}) / 5` in closed
/// form, making this the one exact anchor of the benchmark suite.
pub fn matrix_demo() -> SplitProblem {
    SplitProblem::new(
        Matrix::from_vec(2, 2, vec![1.0, 1.0, 1.0, 0.0]).expect("static entries"),
        Matrix::from_vec(2, 2, vec![0.0, 1.0, 2.0, 0.0]).expect("static entries"),
        Vector::from_vec(vec![0.0, 1.0]).expect("static entries"),
        1.0,
    )
    .expect("demo problem is well formed")
}

/// Closed-form first component of the matrix demo solution.
pub fn matrix_demo_exact_u1(t: f64) -> f64 {
    2.0 * (libm::exp(3.0 * t) - libm::exp(-2.0 * t)) / 5.0
}

/// Unit rectangular pulse on the leading `fraction` of the grid cells.
pub fn pulse_profile(cells: usize, fraction: f64) -> Vec<f64> {
    let mut profile = vec![0.0; cells];
    if fraction > 0.0 {
        let count = libm::round(fraction * cells as f64) as usize;
        let count = count.clamp(1, cells);
        for value in profile.iter_mut().take(count) {
            *value = 1.0;
        }
    }
    profile
}

/// Two-species transport chain `c1 -> c2` with shared velocity and
/// diffusion on a 1D grid of `cells` points.
#[derive(Debug, Clone)]
pub struct OnePhaseSpec {
    pub cells: usize,
    /// Grid spacing (m).
    pub dx: f64,
    /// Convection velocity (m/s), nonnegative for the upwind stencil.
    pub velocity: f64,
    /// Diffusion coefficient (m^2/s).
    pub diffusion: f64,
    /// Decay rates of the two species (1/s).
    pub lambda1: f64,
    pub lambda2: f64,
    /// Horizon (s).
    pub t_end: f64,
    /// Initial per-cell profiles of both species.
    pub c1_initial: Vec<f64>,
    pub c2_initial: Vec<f64>,
}

impl OnePhaseSpec {
    /// Spec with the default initial data: a unit pulse on the first 20%
    /// of cells for species 1, species 2 empty.
    pub fn new(
        cells: usize,
        dx: f64,
        velocity: f64,
        diffusion: f64,
        lambda1: f64,
        lambda2: f64,
        t_end: f64,
    ) -> Self {
        Self {
            cells,
            dx,
            velocity,
            diffusion,
            lambda1,
            lambda2,
            t_end,
            c1_initial: pulse_profile(cells, 0.2),
            c2_initial: vec![0.0; cells],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.cells == 0 {
            return Err(Error::Invalid("cell count must be positive"));
        }
        if !(self.dx > 0.0) || !self.dx.is_finite() {
            return Err(Error::Invalid("grid spacing must be positive"));
        }
        if self.diffusion < 0.0 || self.lambda1 < 0.0 || self.lambda2 < 0.0 {
            return Err(Error::Invalid("diffusion and decay rates must be nonnegative"));
        }
        if self.velocity < 0.0 {
            return Err(Error::Invalid("upwind stencil requires nonnegative velocity"));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::Invalid("horizon must be positive"));
        }
        if self.c1_initial.len() != self.cells || self.c2_initial.len() != self.cells {
            return Err(Error::Shape("initial profiles must have one value per cell"));
        }
        Ok(())
    }
}

/// Central-difference diffusion block `(D/dx^2) tridiag(1, -2, 1)`.
fn diffusion_block(cells: usize, diffusion: f64, dx: f64) -> Matrix {
    let r = diffusion / (dx * dx);
    let mut m = Matrix::zeros(cells, cells);
    for i in 0..cells {
        m[(i, i)] = -2.0 * r;
        if i > 0 {
            m[(i, i - 1)] = r;
        }
        if i + 1 < cells {
            m[(i, i + 1)] = r;
        }
    }
    m
}

/// Upwind convection block `-(v/dx) (I - shift)`, lower bidiagonal.
fn convection_block(cells: usize, velocity: f64, dx: f64) -> Matrix {
    let r = velocity / dx;
    let mut m = Matrix::zeros(cells, cells);
    for i in 0..cells {
        m[(i, i)] = -r;
        if i > 0 {
            m[(i, i - 1)] = r;
        }
    }
    m
}

/// Assembles the one-phase system: `A1` carries the diffusion blocks,
/// `A2` the convection blocks plus the decay chain
/// `[[-L1, 0], [L1, -L2]]`. Both are `2 cells x 2 cells`.
pub fn build_one_phase(spec: &OnePhaseSpec) -> Result<(Matrix, Matrix, Vector)> {
    spec.validate()?;
    let i = spec.cells;

    let diff = diffusion_block(i, spec.diffusion, spec.dx);
    let conv = convection_block(i, spec.velocity, spec.dx);

    let mut a1 = Matrix::zeros(2 * i, 2 * i);
    let mut a2 = Matrix::zeros(2 * i, 2 * i);
    for r in 0..i {
        for c in 0..i {
            a1[(r, c)] = diff[(r, c)];
            a1[(i + r, i + c)] = diff[(r, c)];
            a2[(r, c)] = conv[(r, c)];
            a2[(i + r, i + c)] = conv[(r, c)];
        }
    }
    for k in 0..i {
        a2[(k, k)] -= spec.lambda1;
        a2[(i + k, k)] += spec.lambda1;
        a2[(i + k, i + k)] -= spec.lambda2;
    }

    let mut c0 = Vec::with_capacity(2 * i);
    c0.extend_from_slice(&spec.c1_initial);
    c0.extend_from_slice(&spec.c2_initial);
    Ok((a1, a2, Vector::from_vec(c0)?))
}

/// Mobile/immobile decay chain of `species` components with per-species
/// retardation and a mobile-immobile exchange rate.
#[derive(Debug, Clone)]
pub struct MultiphaseSpec {
    pub species: usize,
    pub cells: usize,
    pub dx: f64,
    pub velocity: f64,
    pub diffusion: f64,
    /// Decay rates `lambda_0 .. lambda_m` with `lambda_0 = 0`.
    pub lambdas: Vec<f64>,
    /// Retardation factors `R_1 .. R_m`, nonnegative.
    pub retardations: Vec<f64>,
    /// Mobile-immobile exchange rate (1/s).
    pub beta: f64,
    pub t_end: f64,
    /// Initial per-cell profiles, one row per species.
    pub mobile_initial: Vec<Vec<f64>>,
    pub immobile_initial: Vec<Vec<f64>>,
}

impl MultiphaseSpec {
    /// Spec with a pulse in the first mobile species and all other
    /// profiles empty.
    pub fn new(
        species: usize,
        cells: usize,
        dx: f64,
        velocity: f64,
        diffusion: f64,
        lambdas: Vec<f64>,
        retardations: Vec<f64>,
        beta: f64,
        t_end: f64,
    ) -> Self {
        let mut mobile_initial = vec![vec![0.0; cells]; species];
        if species > 0 {
            mobile_initial[0] = pulse_profile(cells, 0.2);
        }
        Self {
            species,
            cells,
            dx,
            velocity,
            diffusion,
            lambdas,
            retardations,
            beta,
            t_end,
            mobile_initial,
            immobile_initial: vec![vec![0.0; cells]; species],
        }
    }

    fn validate(&self) -> Result<()> {
        if self.species == 0 || self.cells == 0 {
            return Err(Error::Invalid("species and cell counts must be positive"));
        }
        if !(self.dx > 0.0) || !self.dx.is_finite() {
            return Err(Error::Invalid("grid spacing must be positive"));
        }
        if self.velocity < 0.0 || self.diffusion < 0.0 || self.beta < 0.0 {
            return Err(Error::Invalid("velocity, diffusion and beta must be nonnegative"));
        }
        if self.lambdas.len() != self.species + 1 {
            return Err(Error::Shape("need species + 1 decay rates (lambda_0 first)"));
        }
        if self.lambdas[0] != 0.0 {
            return Err(Error::Invalid("lambda_0 must be zero"));
        }
        if self.lambdas.iter().any(|l| *l < 0.0) {
            return Err(Error::Invalid("decay rates must be nonnegative"));
        }
        if self.retardations.len() != self.species {
            return Err(Error::Shape("need one retardation factor per species"));
        }
        if self.retardations.iter().any(|r| *r < 0.0) {
            return Err(Error::Invalid("retardation factors must be nonnegative"));
        }
        if !(self.t_end > 0.0) {
            return Err(Error::Invalid("horizon must be positive"));
        }
        if self.mobile_initial.len() != self.species || self.immobile_initial.len() != self.species
        {
            return Err(Error::Shape("need one initial profile per species and phase"));
        }
        for profile in self.mobile_initial.iter().chain(&self.immobile_initial) {
            if profile.len() != self.cells {
                return Err(Error::Shape("initial profiles must have one value per cell"));
            }
        }
        Ok(())
    }
}

/// Assembles the multiphase system with state ordering
/// `(u_1 .. u_m, g_1 .. g_m)`, each block holding one per-cell profile.
///
/// `A1` carries the transport (diffusion + convection) on the mobile
/// blocks only, scaled by `1/R_i`; `A2` carries the decay chain and the
/// beta-exchange for both phases, scaled by `1/R_i`. Immobile rows never
/// touch transport entries. A species with `R_i = 0` is rejected whenever
/// it is coupled (transport, exchange or inflowing decay); a fully
/// decoupled `R_i = 0` species degenerates to frozen zero rows.
pub fn build_multiphase(spec: &MultiphaseSpec) -> Result<(Matrix, Matrix, Vector)> {
    spec.validate()?;
    let m = spec.species;
    let i = spec.cells;
    let dim = 2 * m * i;

    let diff = diffusion_block(i, spec.diffusion, spec.dx);
    let conv = convection_block(i, spec.velocity, spec.dx);
    let transport = diff.add(&conv);

    let mut a1 = Matrix::zeros(dim, dim);
    let mut a2 = Matrix::zeros(dim, dim);

    for s in 0..m {
        let r_i = spec.retardations[s];
        let own_decay = spec.lambdas[s + 1];
        let inflow = if s > 0 { spec.lambdas[s] * spec.retardations[s - 1] } else { 0.0 };
        let coupled = spec.velocity != 0.0
            || spec.diffusion != 0.0
            || spec.beta != 0.0
            || inflow != 0.0;
        if r_i == 0.0 {
            if coupled {
                return Err(Error::SingularScaling { species: s + 1 });
            }
            continue; // frozen species: the time-derivative term vanishes
        }

        let mobile = s * i;
        let immobile = (m + s) * i;
        let inv_r = 1.0 / r_i;

        for row in 0..i {
            for col in 0..i {
                a1[(mobile + row, mobile + col)] = inv_r * transport[(row, col)];
            }
        }
        for k in 0..i {
            a2[(mobile + k, mobile + k)] -= own_decay + spec.beta * inv_r;
            a2[(mobile + k, immobile + k)] += spec.beta * inv_r;
            a2[(immobile + k, immobile + k)] -= own_decay + spec.beta * inv_r;
            a2[(immobile + k, mobile + k)] += spec.beta * inv_r;
            if s > 0 {
                a2[(mobile + k, (s - 1) * i + k)] += inflow * inv_r;
                a2[(immobile + k, (m + s - 1) * i + k)] += inflow * inv_r;
            }
        }
    }

    let mut c0 = Vec::with_capacity(dim);
    for profile in spec.mobile_initial.iter().chain(&spec.immobile_initial) {
        c0.extend_from_slice(profile);
    }
    Ok((a1, a2, Vector::from_vec(c0)?))
}

/// Dense-exponential reference `exp((A1 + A2) t) c0`, the error baseline
/// for every PDE experiment.
pub fn reference_solution(a1: &Matrix, a2: &Matrix, c0: &Vector, t: f64) -> Result<Vector> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Invalid("reference time must be nonnegative and finite"));
    }
    if !a1.is_square() || !a2.is_square() || a1.rows() != a2.rows() {
        return Err(Error::Shape("A1 and A2 must be square and of equal dimension"));
    }
    if c0.dim() != a1.rows() {
        return Err(Error::Shape("initial vector dimension must match the operators"));
    }
    Ok(matrix_exp(&a1.add(a2), t)?.matvec(c0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::VectorNorm;

    #[test]
    fn demo_split_sums_to_full_generator() {
        let p = matrix_demo();
        let g = p.generator();
        let expected = Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 0.0]).unwrap();
        assert_eq!(g, expected);
        assert_eq!(matrix_demo_exact_u1(0.0), 0.0);
    }

    #[test]
    fn demo_exact_value_at_one() {
        let u1 = matrix_demo_exact_u1(1.0);
        assert!((u1 - 7.980080655980422).abs() < 1e-12);
    }

    #[test]
    fn one_phase_stencil_entries() {
        // D/dx^2 = 1 and v/dx = 1 with the benchmark parameters
        let spec = OnePhaseSpec::new(3, 0.1, 0.1, 0.01, 0.0, 0.0, 1.0);
        let (a1, a2, _) = build_one_phase(&spec).unwrap();
        let diff_expected = [[-2.0, 1.0, 0.0], [1.0, -2.0, 1.0], [0.0, 1.0, -2.0]];
        let conv_expected = [[-1.0, 0.0, 0.0], [1.0, -1.0, 0.0], [0.0, 1.0, -1.0]];
        for r in 0..3 {
            for c in 0..3 {
                assert!((a1[(r, c)] - diff_expected[r][c]).abs() < 1e-15);
                assert!((a2[(r, c)] - conv_expected[r][c]).abs() < 1e-15);
                // species blocks are identical
                assert_eq!(a1[(r, c)], a1[(3 + r, 3 + c)]);
                assert_eq!(a2[(r, c)], a2[(3 + r, 3 + c)]);
            }
        }
    }

    #[test]
    fn one_phase_dimensions_and_decoupling() {
        let spec = OnePhaseSpec::new(10, 0.1, 0.1, 0.01, 0.0, 0.0, 1.0);
        let (a1, a2, c0) = build_one_phase(&spec).unwrap();
        assert_eq!((a1.rows(), a1.cols()), (20, 20));
        assert_eq!((a2.rows(), a2.cols()), (20, 20));
        assert_eq!(c0.dim(), 20);
        // without decay the species decouple: no entries between blocks
        for r in 0..10 {
            for c in 0..10 {
                assert_eq!(a2[(10 + r, c)], 0.0);
                assert_eq!(a2[(r, 10 + c)], 0.0);
            }
        }
    }

    #[test]
    fn one_phase_symmetry_without_transport_and_decay() {
        let mut spec = OnePhaseSpec::new(6, 0.1, 0.0, 0.01, 0.0, 0.0, 1.0);
        spec.velocity = 0.0;
        let (a1, a2, _) = build_one_phase(&spec).unwrap();
        let sum = a1.add(&a2);
        for r in 0..12 {
            for c in 0..12 {
                assert_eq!(sum[(r, c)], sum[(c, r)]);
            }
        }
    }

    #[test]
    fn one_phase_rejects_bad_spec() {
        let spec = OnePhaseSpec::new(0, 0.1, 0.1, 0.01, 0.1, 0.1, 1.0);
        assert!(build_one_phase(&spec).is_err());
        let spec = OnePhaseSpec::new(4, 0.0, 0.1, 0.01, 0.1, 0.1, 1.0);
        assert!(build_one_phase(&spec).is_err());
    }

    #[test]
    fn multiphase_exchange_decouples_without_beta() {
        let spec = MultiphaseSpec::new(
            2,
            3,
            0.1,
            0.1,
            0.01,
            vec![0.0, 0.1, 0.2],
            vec![1.0, 1.0],
            0.0,
            1.0,
        );
        let (_, a2, _) = build_multiphase(&spec).unwrap();
        let m = 2;
        let i = 3;
        // no entries between the mobile and immobile halves
        for r in 0..m * i {
            for c in 0..m * i {
                assert_eq!(a2[(r, m * i + c)], 0.0);
                assert_eq!(a2[(m * i + r, c)], 0.0);
            }
        }
    }

    #[test]
    fn multiphase_single_species_matches_one_phase_block() {
        // m = 1, beta = 0, R = 1: the mobile block of A1 + A2 equals the
        // species-1 block of the one-phase system
        let spec = MultiphaseSpec::new(1, 5, 0.1, 0.1, 0.01, vec![0.0, 0.1], vec![1.0], 0.0, 1.0);
        let (a1, a2, _) = build_multiphase(&spec).unwrap();
        let one = OnePhaseSpec::new(5, 0.1, 0.1, 0.01, 0.1, 0.0, 1.0);
        let (b1, b2, _) = build_one_phase(&one).unwrap();
        let sum_multi = a1.add(&a2);
        let sum_one = b1.add(&b2);
        for r in 0..5 {
            for c in 0..5 {
                assert!((sum_multi[(r, c)] - sum_one[(r, c)]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn multiphase_row_assembly_oracle() {
        // m = 2, R = (1,1), lambda = (0, 0.1, 0.1), beta = 0.5, I = 2,
        // no transport. Row of u1 at cell 0 assembled by hand:
        // du1/dt = -(lambda1 + beta) u1 + beta g1.
        let spec = MultiphaseSpec::new(
            2,
            2,
            0.1,
            0.0,
            0.0,
            vec![0.0, 0.1, 0.1],
            vec![1.0, 1.0],
            0.5,
            1.0,
        );
        let (a1, a2, _) = build_multiphase(&spec).unwrap();
        assert_eq!(a1.norm_max(), 0.0);
        // state ordering: u1(2 cells), u2(2), g1(2), g2(2)
        assert!((a2[(0, 0)] - (-0.6)).abs() < 1e-15);
        assert!((a2[(0, 4)] - 0.5).abs() < 1e-15);
        // u2 row: inflow from u1, own decay + exchange
        assert!((a2[(2, 0)] - 0.1).abs() < 1e-15);
        assert!((a2[(2, 2)] - (-0.6)).abs() < 1e-15);
        assert!((a2[(2, 6)] - 0.5).abs() < 1e-15);
        // g1 row: exchange with u1 only
        assert!((a2[(4, 4)] - (-0.6)).abs() < 1e-15);
        assert!((a2[(4, 0)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn multiphase_rejects_zero_retardation_with_transport() {
        let spec = MultiphaseSpec::new(1, 3, 0.1, 0.1, 0.0, vec![0.0, 0.1], vec![0.0], 0.0, 1.0);
        assert!(matches!(
            build_multiphase(&spec),
            Err(Error::SingularScaling { species: 1 })
        ));
    }

    #[test]
    fn multiphase_requires_zero_lambda0() {
        let spec = MultiphaseSpec::new(1, 3, 0.1, 0.1, 0.01, vec![0.5, 0.1], vec![1.0], 0.0, 1.0);
        assert!(build_multiphase(&spec).is_err());
    }

    #[test]
    fn reference_solution_at_zero_is_initial_data() {
        let spec = OnePhaseSpec::new(4, 0.1, 0.1, 0.01, 0.1, 0.1, 1.0);
        let (a1, a2, c0) = build_one_phase(&spec).unwrap();
        let r = reference_solution(&a1, &a2, &c0, 0.0).unwrap();
        assert!(r.sub(&c0).norm(VectorNorm::Max).unwrap() < 1e-15);
    }

    #[test]
    fn reference_solution_diagonal_case() {
        let a1 = Matrix::from_diagonal(&[-1.0, -2.0]).unwrap();
        let a2 = Matrix::from_diagonal(&[-0.5, 0.25]).unwrap();
        let c0 = Vector::from_vec(vec![2.0, 3.0]).unwrap();
        let r = reference_solution(&a1, &a2, &c0, 0.7).unwrap();
        assert!((r[0] - 2.0 * libm::exp(-1.5 * 0.7)).abs() < 1e-13);
        assert!((r[1] - 3.0 * libm::exp(-1.75 * 0.7)).abs() < 1e-13);
    }

    #[test]
    fn pulse_profile_covers_leading_cells() {
        let p = pulse_profile(10, 0.2);
        assert_eq!(&p[..2], &[1.0, 1.0]);
        assert!(p[2..].iter().all(|x| *x == 0.0));
        assert_eq!(pulse_profile(10, 0.0), vec![0.0; 10]);
    }
}
