//! Problem containers for quadratic minimization over the unit ball or unit
//! sphere, KKT residual evaluation, and the doubled-variable lifting.

use crate::error::{Result, TrsError};
use crate::linalg::{dot, norm_sq};
use crate::operator::SymmetricOperator;

/// Feasible set of a quadratic problem: the closed unit ball or its boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    Ball,
    Sphere,
}

/// Shared surface of ball- and sphere-constrained quadratic problems
/// `min 1/2 x'Hx + c'x`.
pub trait QuadraticProblem {
    fn op(&self) -> &SymmetricOperator;
    fn linear(&self) -> &[f64];
    fn constraint(&self) -> Constraint;

    fn dim(&self) -> usize {
        self.op().n()
    }

    /// Objective value; one mat-vec.
    fn objective(&self, x: &[f64]) -> f64 {
        let hx = self.op().apply(x).expect("dimension checked by caller");
        0.5 * dot(x, &hx) + dot(self.linear(), x)
    }

    /// Gradient Hx + c; one mat-vec.
    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut g = self.op().apply(x).expect("dimension checked by caller");
        for (gi, ci) in g.iter_mut().zip(self.linear()) {
            *gi += ci;
        }
        g
    }
}

/// Quadratic minimization over the unit ball.
#[derive(Clone, Debug)]
pub struct TrsProblem {
    op: SymmetricOperator,
    c: Vec<f64>,
}

/// Quadratic minimization over the unit sphere.
#[derive(Clone, Debug)]
pub struct TrseProblem {
    op: SymmetricOperator,
    c: Vec<f64>,
}

impl TrsProblem {
    pub fn new(op: SymmetricOperator, c: Vec<f64>) -> Result<Self> {
        check_linear_len(&op, &c)?;
        Ok(Self { op, c })
    }

    /// The same data constrained to the sphere.
    pub fn to_sphere(&self) -> TrseProblem {
        TrseProblem {
            op: self.op.clone(),
            c: self.c.clone(),
        }
    }

    pub fn lift(&self) -> LiftedProblem<'_> {
        LiftedProblem {
            op: &self.op,
            c: &self.c,
            constraint: Constraint::Ball,
        }
    }
}

impl TrseProblem {
    pub fn new(op: SymmetricOperator, c: Vec<f64>) -> Result<Self> {
        check_linear_len(&op, &c)?;
        Ok(Self { op, c })
    }

    pub fn lift(&self) -> LiftedProblem<'_> {
        LiftedProblem {
            op: &self.op,
            c: &self.c,
            constraint: Constraint::Sphere,
        }
    }
}

fn check_linear_len(op: &SymmetricOperator, c: &[f64]) -> Result<()> {
    if c.len() != op.n() {
        return Err(TrsError::DimensionMismatch {
            expected: op.n(),
            got: c.len(),
        });
    }
    Ok(())
}

impl QuadraticProblem for TrsProblem {
    fn op(&self) -> &SymmetricOperator {
        &self.op
    }
    fn linear(&self) -> &[f64] {
        &self.c
    }
    fn constraint(&self) -> Constraint {
        Constraint::Ball
    }
}

impl QuadraticProblem for TrseProblem {
    fn op(&self) -> &SymmetricOperator {
        &self.op
    }
    fn linear(&self) -> &[f64] {
        &self.c
    }
    fn constraint(&self) -> Constraint {
        Constraint::Sphere
    }
}

/// The 2n-dimensional problem over z = (x, y) with block-diagonal Hessian
/// diag(H, H) and linear term (c, 0). The block operator is realized by two
/// applications of H; its spectral norm equals that of H.
#[derive(Clone, Debug)]
pub struct LiftedProblem<'a> {
    op: &'a SymmetricOperator,
    c: &'a [f64],
    constraint: Constraint,
}

impl<'a> LiftedProblem<'a> {
    pub fn base_op(&self) -> &SymmetricOperator {
        self.op
    }

    pub fn dim(&self) -> usize {
        2 * self.op.n()
    }

    pub fn constraint(&self) -> Constraint {
        self.constraint
    }

    /// (c, 0) as an owned vector.
    pub fn linear(&self) -> Vec<f64> {
        let n = self.op.n();
        let mut a = vec![0.0; 2 * n];
        a[..n].copy_from_slice(self.c);
        a
    }

    /// A·z = (H x, H y) for z = (x, y).
    pub fn apply_block(&self, z: &[f64]) -> Result<Vec<f64>> {
        let n = self.op.n();
        if z.len() != 2 * n {
            return Err(TrsError::DimensionMismatch {
                expected: 2 * n,
                got: z.len(),
            });
        }
        let mut out = vec![0.0; 2 * n];
        self.op.apply_into(&z[..n], &mut out[..n]);
        let (_, tail) = out.split_at_mut(n);
        self.op.apply_into(&z[n..], tail);
        Ok(out)
    }

    /// a'z = c'x.
    pub fn linear_dot(&self, z: &[f64]) -> f64 {
        let n = self.op.n();
        dot(self.c, &z[..n])
    }

    /// f(z) = 1/2 z'Az + a'z.
    pub fn objective(&self, z: &[f64]) -> Result<f64> {
        let az = self.apply_block(z)?;
        Ok(0.5 * dot(z, &az) + self.linear_dot(z))
    }

    /// Materializes diag(H, H) as an explicit 2n-dimensional operator.
    pub fn to_operator(&self) -> SymmetricOperator {
        let n = self.op.n();
        let mut triplets = Vec::with_capacity(2 * self.op.stored_nnz());
        for (r, c, v) in self.op.lower_entries() {
            triplets.push((r, c, v));
            triplets.push((r + n, c + n, v));
        }
        SymmetricOperator::from_triplets(2 * n, triplets)
            .expect("block duplication of valid triplets is valid")
    }

    /// The lifted problem as an explicit ball problem (2n variables).
    pub fn to_ball_problem(&self) -> TrsProblem {
        TrsProblem {
            op: self.to_operator(),
            c: self.linear(),
        }
    }

    /// The lifted problem as an explicit sphere problem (2n variables).
    pub fn to_sphere_problem(&self) -> TrseProblem {
        TrseProblem {
            op: self.to_operator(),
            c: self.linear(),
        }
    }
}

/// A candidate point with its multiplier and KKT diagnostics. The stored
/// multiplier is the value appearing in `(H + lambda I)x + c = 0`; ball
/// solutions require it to be nonnegative.
#[derive(Clone, Debug)]
pub struct KktPoint {
    pub x: Vec<f64>,
    pub lambda: f64,
    pub stationarity_residual: f64,
    pub feasibility_residual: f64,
    pub complementarity_residual: f64,
}

impl KktPoint {
    pub fn max_residual(&self) -> f64 {
        self.stationarity_residual
            .max(self.feasibility_residual)
            .max(self.complementarity_residual)
    }
}

/// Evaluates KKT residuals of (x, lambda):
/// stationarity `||(H + lambda I)x + c||`; feasibility `max(0, x'x - 1)` for
/// the ball, `|x'x - 1|` for the sphere; complementarity `|lambda (x'x - 1)|`
/// for the ball, zero for the sphere.
pub fn kkt_residuals<P: QuadraticProblem>(p: &P, x: &[f64], lambda: f64) -> Result<KktPoint> {
    if x.len() != p.dim() {
        return Err(TrsError::DimensionMismatch {
            expected: p.dim(),
            got: x.len(),
        });
    }
    let mut r = p.op().apply(x)?;
    for i in 0..x.len() {
        r[i] += lambda * x[i] + p.linear()[i];
    }
    let stationarity = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    let slack = norm_sq(x) - 1.0;
    let (feasibility, complementarity) = match p.constraint() {
        Constraint::Ball => (slack.max(0.0), (lambda * slack).abs()),
        Constraint::Sphere => (slack.abs(), 0.0),
    };
    Ok(KktPoint {
        x: x.to_vec(),
        lambda,
        stationarity_residual: stationarity,
        feasibility_residual: feasibility,
        complementarity_residual: complementarity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm;

    fn example1() -> TrsProblem {
        let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        TrsProblem::new(op, vec![-250.0 / 169.0, 3456.0 / 169.0]).unwrap()
    }

    #[test]
    fn lift_stacks_linear_term() {
        let p = example1();
        let l = p.lift();
        assert_eq!(l.dim(), 4);
        assert_eq!(
            l.linear(),
            vec![-250.0 / 169.0, 3456.0 / 169.0, 0.0, 0.0]
        );
        assert_eq!(l.constraint(), Constraint::Ball);
    }

    #[test]
    fn lift_identity_block_action() {
        let op = SymmetricOperator::identity(2);
        let p = TrsProblem::new(op, vec![0.0, 0.0]).unwrap();
        let l = p.lift();
        let z = vec![0.1, -0.2, 0.3, 0.4];
        assert_eq!(l.apply_block(&z).unwrap(), z);
        assert_eq!(l.linear_dot(&z), 0.0);
    }

    #[test]
    fn lift_value_identity_on_x_slice() {
        // f((x, 0)) = q(x) exactly in stored arithmetic.
        let op =
            SymmetricOperator::from_dense(3, &[2.0, -1.0, 0.5, -1.0, 1.0, 0.0, 0.5, 0.0, -3.0])
                .unwrap();
        let p = TrsProblem::new(op, vec![0.3, -0.7, 1.1]).unwrap();
        let l = p.lift();
        let mut rng_x: f64 = 0.37;
        for _ in 0..100 {
            // cheap deterministic pseudo-random points
            let x: Vec<f64> = (0..3)
                .map(|_| {
                    rng_x = (rng_x * 997.13).fract();
                    rng_x - 0.5
                })
                .collect();
            let mut z = x.clone();
            z.extend_from_slice(&[0.0, 0.0, 0.0]);
            assert_eq!(l.objective(&z).unwrap(), p.objective(&x));
        }
    }

    #[test]
    fn kkt_residuals_at_example1_saddle() {
        let p = example1();
        let x = [-5.0 / 13.0, -12.0 / 13.0];
        let k = kkt_residuals(&p, &x, 119.0 / 13.0).unwrap();
        assert!(k.max_residual() <= 1e-12, "residuals: {k:?}");
    }

    #[test]
    fn kkt_residuals_wrong_multiplier() {
        let p = example1();
        let x = [-5.0 / 13.0, -12.0 / 13.0];
        let k = kkt_residuals(&p, &x, 0.0).unwrap();
        let expected = norm(&[595.0 / 169.0, 1428.0 / 169.0]);
        assert!((k.stationarity_residual - expected).abs() < 1e-12);
    }

    #[test]
    fn kkt_residuals_at_origin() {
        let p = example1();
        let k = kkt_residuals(&p, &[0.0, 0.0], 0.0).unwrap();
        let cn = norm(p.linear());
        assert!((k.stationarity_residual - cn).abs() < 1e-14);
        assert_eq!(k.feasibility_residual, 0.0);
        assert_eq!(k.complementarity_residual, 0.0);
    }

    #[test]
    fn sphere_feasibility_is_two_sided() {
        let op = SymmetricOperator::identity(2);
        let p = TrseProblem::new(op, vec![0.0, 0.0]).unwrap();
        let k = kkt_residuals(&p, &[0.5, 0.0], -1.0).unwrap();
        assert!((k.feasibility_residual - 0.75).abs() < 1e-15);
        assert_eq!(k.complementarity_residual, 0.0);
    }
}
