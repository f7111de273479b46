//! One-step propagators for the split Cauchy problem `c' = (A + B) c`:
//! the exact flow, Lie-Trotter and Strang products, and Zassenhaus-corrected
//! products of any supported order.

use crate::error::{Error, Result};
use crate::linalg::{matrix_exp, Matrix, Vector};
use crate::zassenhaus::ZassenhausExpansion;

/// The split linear initial value problem `c' = A c + B c`, `c(0) = c0`,
/// on the horizon `[0, t_end]`.
#[derive(Debug, Clone)]
pub struct SplitProblem {
    a: Matrix,
    b: Matrix,
    c0: Vector,
    t_end: f64,
}

impl SplitProblem {
    pub fn new(a: Matrix, b: Matrix, c0: Vector, t_end: f64) -> Result<Self> {
        if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
            return Err(Error::Shape("A and B must be square and of equal dimension"));
        }
        if c0.dim() != a.rows() {
            return Err(Error::Shape("initial vector dimension must match the operators"));
        }
        if !(t_end > 0.0) || !t_end.is_finite() {
            return Err(Error::Invalid("time horizon must be positive and finite"));
        }
        Ok(Self { a, b, c0, t_end })
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c0(&self) -> &Vector {
        &self.c0
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn dim(&self) -> usize {
        self.c0.dim()
    }

    /// The unsplit generator `A + B`.
    pub fn generator(&self) -> Matrix {
        self.a.add(&self.b)
    }
}

fn check_step_inputs(p: &SplitProblem, tau: f64, c: &Vector) -> Result<()> {
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::Invalid("step size must be positive and finite"));
    }
    if c.dim() != p.dim() {
        return Err(Error::Shape("state dimension must match the problem"));
    }
    Ok(())
}

/// One step of the exact flow: `exp((A+B) tau) c`.
///
/// This is the reference against which every splitting error is measured.
pub fn exact_step(p: &SplitProblem, tau: f64, c: &Vector) -> Result<Vector> {
    check_step_inputs(p, tau, c)?;
    Ok(matrix_exp(&p.generator(), tau)?.matvec(c))
}

/// One Lie-Trotter step: `exp(A tau) exp(B tau) c`. First order; exact
/// when `[A, B] = 0`.
pub fn lie_trotter_step(p: &SplitProblem, tau: f64, c: &Vector) -> Result<Vector> {
    check_step_inputs(p, tau, c)?;
    let eb = matrix_exp(&p.b, tau)?;
    let ea = matrix_exp(&p.a, tau)?;
    Ok(ea.matvec(&eb.matvec(c)))
}

/// One Strang step: `exp(A tau/2) exp(B tau) exp(A tau/2) c`. Second order.
pub fn strang_step(p: &SplitProblem, tau: f64, c: &Vector) -> Result<Vector> {
    check_step_inputs(p, tau, c)?;
    let ea_half = matrix_exp(&p.a, 0.5 * tau)?;
    let eb = matrix_exp(&p.b, tau)?;
    Ok(ea_half.matvec(&eb.matvec(&ea_half.matvec(c))))
}

/// One Zassenhaus-corrected step of the given order:
/// `exp(A tau) exp(B tau) exp(C2 tau^2) ... exp(C_order tau^order) c`,
/// rightmost factor applied first. Local error `O(tau^(order+1))`;
/// order 1 coincides with [`lie_trotter_step`].
pub fn zassenhaus_step(p: &SplitProblem, tau: f64, order: u32, c: &Vector) -> Result<Vector> {
    check_step_inputs(p, tau, c)?;
    let expansion = ZassenhausExpansion::new(&p.a, &p.b, order)?;
    zassenhaus_step_with(p, tau, &expansion, c)
}

/// Like [`zassenhaus_step`] but reusing an already certified expansion,
/// avoiding the per-call construction when marching many steps.
pub fn zassenhaus_step_with(
    p: &SplitProblem,
    tau: f64,
    expansion: &ZassenhausExpansion,
    c: &Vector,
) -> Result<Vector> {
    check_step_inputs(p, tau, c)?;
    let mut v = c.clone();
    let mut weight = expansion.corrections().len() + 1;
    for correction in expansion.corrections().iter().rev() {
        let scale = libm::pow(tau, weight as f64);
        v = matrix_exp(correction, scale)?.matvec(&v);
        weight -= 1;
    }
    v = matrix_exp(&p.b, tau)?.matvec(&v);
    v = matrix_exp(&p.a, tau)?.matvec(&v);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::VectorNorm;
    use alloc::vec;

    fn demo_problem() -> SplitProblem {
        SplitProblem::new(
            Matrix::from_vec(2, 2, vec![1.0, 1.0, 1.0, 0.0]).unwrap(),
            Matrix::from_vec(2, 2, vec![0.0, 1.0, 2.0, 0.0]).unwrap(),
            Vector::from_vec(vec![0.0, 1.0]).unwrap(),
            1.0,
        )
        .unwrap()
    }

    fn max_diff(x: &Vector, y: &Vector) -> f64 {
        x.sub(y).norm(VectorNorm::Max).unwrap()
    }

    #[test]
    fn zero_generator_is_identity_flow() {
        let p = SplitProblem::new(
            Matrix::zeros(3, 3),
            Matrix::zeros(3, 3),
            Vector::from_vec(vec![1.0, -2.0, 0.5]).unwrap(),
            1.0,
        )
        .unwrap();
        let c = p.c0().clone();
        assert!(max_diff(&exact_step(&p, 0.7, &c).unwrap(), &c) < 1e-15);
    }

    #[test]
    fn exact_step_matches_eigendecomposition_oracle() {
        // eigenvalues 3 and -2 of [[1,2],[3,0]] give
        // u(1) = (0.4 e^3 - 0.4 e^-2, 0.4 e^3 + 0.6 e^-2)
        let p = demo_problem();
        let u = exact_step(&p, 1.0, p.c0()).unwrap();
        let e3 = libm::exp(3.0);
        let em2 = libm::exp(-2.0);
        assert!((u[0] - (0.4 * e3 - 0.4 * em2)).abs() < 1e-12);
        assert!((u[1] - (0.4 * e3 + 0.6 * em2)).abs() < 1e-12);
    }

    #[test]
    fn exact_step_semigroup() {
        let p = demo_problem();
        let tau = 0.4;
        let full = exact_step(&p, tau, p.c0()).unwrap();
        let half = exact_step(&p, tau / 2.0, p.c0()).unwrap();
        let two = exact_step(&p, tau / 2.0, &half).unwrap();
        assert!(max_diff(&full, &two) < 1e-10);
    }

    #[test]
    fn one_operator_degeneracy() {
        // B = 0 collapses every product to exp(A tau)
        let a = Matrix::from_vec(2, 2, vec![0.3, -0.2, 0.1, 0.4]).unwrap();
        let p = SplitProblem::new(
            a,
            Matrix::zeros(2, 2),
            Vector::from_vec(vec![1.0, 2.0]).unwrap(),
            1.0,
        )
        .unwrap();
        let tau = 0.35;
        let reference = exact_step(&p, tau, p.c0()).unwrap();
        assert!(max_diff(&lie_trotter_step(&p, tau, p.c0()).unwrap(), &reference) < 1e-13);
        assert!(max_diff(&strang_step(&p, tau, p.c0()).unwrap(), &reference) < 1e-13);
    }

    #[test]
    fn commuting_diagonal_pair_is_exact() {
        let p = SplitProblem::new(
            Matrix::from_diagonal(&[1.0, 2.0]).unwrap(),
            Matrix::from_diagonal(&[3.0, 4.0]).unwrap(),
            Vector::from_vec(vec![1.0, 1.0]).unwrap(),
            1.0,
        )
        .unwrap();
        let tau = 0.3;
        let reference = exact_step(&p, tau, p.c0()).unwrap();
        assert!(max_diff(&lie_trotter_step(&p, tau, p.c0()).unwrap(), &reference) < 1e-12);
        assert!(max_diff(&strang_step(&p, tau, p.c0()).unwrap(), &reference) < 1e-12);
        for order in 1..=4 {
            let z = zassenhaus_step(&p, tau, order, p.c0()).unwrap();
            assert!(max_diff(&z, &reference) < 1e-12);
        }
    }

    #[test]
    fn order_one_zassenhaus_is_lie_trotter() {
        let p = demo_problem();
        let tau = 0.17;
        let z = zassenhaus_step(&p, tau, 1, p.c0()).unwrap();
        let lt = lie_trotter_step(&p, tau, p.c0()).unwrap();
        assert!(max_diff(&z, &lt) < 1e-15);
    }

    #[test]
    fn local_error_ratios() {
        // halving tau divides the local defect by ~2^(order+1)
        let p = demo_problem();
        let tau = 0.1;
        let err = |t: f64| {
            let lt = lie_trotter_step(&p, t, p.c0()).unwrap();
            max_diff(&lt, &exact_step(&p, t, p.c0()).unwrap())
        };
        let ratio = err(tau) / err(tau / 2.0);
        assert!((3.0..5.5).contains(&ratio), "lie-trotter local ratio {ratio}");

        let strang_err = |t: f64| {
            let s = strang_step(&p, t, p.c0()).unwrap();
            max_diff(&s, &exact_step(&p, t, p.c0()).unwrap())
        };
        let ratio = strang_err(tau) / strang_err(tau / 2.0);
        assert!((6.5..10.0).contains(&ratio), "strang local ratio {ratio}");
    }

    #[test]
    fn invalid_step_inputs() {
        let p = demo_problem();
        assert!(matches!(exact_step(&p, 0.0, p.c0()), Err(Error::Invalid(_))));
        let wrong = Vector::zeros(3);
        assert!(matches!(exact_step(&p, 0.1, &wrong), Err(Error::Shape(_))));
    }
}
