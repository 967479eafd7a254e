//! Instance generators: the three worked 2-d examples plus seeded random
//! instances of each case. Every generated instance is post-verified by
//! oracle classification before it is returned.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TrsError};
use crate::io::AnyProblem;
use crate::linalg::{dot, norm};
use crate::operator::SymmetricOperator;
use crate::oracle::{classify_case, HardnessCase};
use crate::problem::{QuadraticProblem, TrsProblem, TrseProblem};

/// Instance kinds. The example kinds have dimensions fixed by their data;
/// the random kinds honor `n` and `seed`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GenKind {
    /// 2-d ball instance whose plain projected-gradient basins split between
    /// the global minimizer and a saddle.
    Example1,
    /// 2-d ball family with a local non-global minimizer whose gap above the
    /// global value shrinks with tau.
    Example2 { tau: f64 },
    /// 2-d sphere instance with both a global and a local non-global minimizer.
    Example3,
    /// Random instance with c having a guaranteed component on the
    /// lambda_1-eigenspace.
    Easy,
    /// c orthogonal to the lambda_1-eigenspace with pseudoinverse-solution
    /// norm strictly inside the sphere.
    Hard2,
    /// Same orthogonality with pseudoinverse-solution norm exactly one.
    Ill,
    /// Positive definite Hessian.
    Convex,
    /// Scalar Hessian L*I on the sphere.
    Scalar,
}

/// Builds an instance. Examples 1 and 2 and the random ball kinds return
/// ball problems; example 3 and `Scalar` return sphere problems.
pub fn generate(kind: GenKind, n: usize, seed: u64) -> Result<AnyProblem> {
    match kind {
        GenKind::Example1 => {
            let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0])?;
            let p = TrsProblem::new(op, vec![-250.0 / 169.0, 3456.0 / 169.0])?;
            Ok(AnyProblem::Ball(p))
        }
        GenKind::Example2 { tau } => {
            if tau < 0.0 {
                return Err(TrsError::InvalidInput("tau must be nonnegative".into()));
            }
            // Expanded standard form; the additive constant tau*165/169 is
            // dropped, so objective comparisons are on differences only.
            let op = SymmetricOperator::from_diagonal(&[13.0, -13.0 + 2.0 * tau])?;
            let c = vec![4.0, -2.0 * tau * 165.0f64.sqrt() / 13.0];
            Ok(AnyProblem::Ball(TrsProblem::new(op, c)?))
        }
        GenKind::Example3 => {
            let op = SymmetricOperator::from_diagonal(&[27.0, 53.0])?;
            Ok(AnyProblem::Sphere(TrseProblem::new(op, vec![-4.0, 9.0])?))
        }
        GenKind::Easy => {
            let p = gen_easy(n, seed)?;
            verify_case(&p, HardnessCase::Easy)?;
            Ok(AnyProblem::Ball(p))
        }
        GenKind::Hard2 => {
            let p = gen_hard(n, seed, false)?;
            verify_case(&p, HardnessCase::HardII)?;
            Ok(AnyProblem::Ball(p))
        }
        GenKind::Ill => {
            let p = gen_hard(n, seed, true)?;
            verify_case(&p, HardnessCase::Ill)?;
            Ok(AnyProblem::Ball(p))
        }
        GenKind::Convex => {
            let p = gen_convex(n, seed)?;
            let lam1 = p.op().eigendecompose()?.lambda_min();
            if lam1 <= 0.0 {
                return Err(TrsError::SolverAnomaly(
                    "convex generator produced an indefinite Hessian".into(),
                ));
            }
            Ok(AnyProblem::Ball(p))
        }
        GenKind::Scalar => {
            if n == 0 {
                return Err(TrsError::InvalidInput("dimension must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ca1a5);
            let l = 1.0 + 4.0 * rng.gen_range(0.0..1.0);
            let mut c: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            if norm(&c) < 1e-6 {
                c[0] = 1.0;
            }
            let op = SymmetricOperator::scaled_identity(n, l);
            Ok(AnyProblem::Sphere(TrseProblem::new(op, c)?))
        }
    }
}

fn verify_case(p: &TrsProblem, want: HardnessCase) -> Result<()> {
    let got = classify_case(p, 1e-9)?.case;
    if got != want {
        return Err(TrsError::SolverAnomaly(format!(
            "generator post-verification failed: wanted {want:?}, oracle says {got:?}"
        )));
    }
    Ok(())
}

/// Random orthogonal matrix from the QR factorization of a Gaussian matrix.
fn random_orthogonal(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    a.qr().q()
}

/// Ascending eigenvalues with multiplicative separation, lambda_1 forced into
/// [-3, -0.5] and the rest spread over [-0.3, 3].
fn spread_eigenvalues(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let mut eigs = vec![-(0.5 + 2.5 * rng.gen_range(0.0..1.0))];
        for _ in 1..n {
            eigs.push(-0.3 + 3.3 * rng.gen_range(0.0..1.0));
        }
        eigs.sort_by(f64::total_cmp);
        let mut ok = true;
        for w in eigs.windows(2) {
            if (w[1] - w[0]).abs() < 0.05 {
                ok = false;
                break;
            }
        }
        if ok {
            return eigs;
        }
    }
}

fn operator_from_spectrum(q: &DMatrix<f64>, eigs: &[f64]) -> Result<SymmetricOperator> {
    let n = eigs.len();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(eigs));
    let h = q * d * q.transpose();
    // Symmetrize away the last-bit asymmetry of the triple product.
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            entries[i * n + j] = 0.5 * (h[(i, j)] + h[(j, i)]);
        }
    }
    SymmetricOperator::from_dense(n, &entries)
}

fn gen_easy(n: usize, seed: u64) -> Result<TrsProblem> {
    if n < 2 {
        return Err(TrsError::InvalidInput("random kinds need n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let eigs = spread_eigenvalues(n, &mut rng);
    let op = operator_from_spectrum(&q, &eigs)?;
    let u1: Vec<f64> = (0..n).map(|i| q[(i, 0)]).collect();
    let mut c: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    // Guarantee a solid component on the lambda_1-eigenspace.
    let proj = dot(&c, &u1);
    let cn = norm(&c).max(1.0);
    if proj.abs() < 0.1 * cn {
        let bump = 0.25 * cn * if proj < 0.0 { -1.0 } else { 1.0 };
        for (ci, ui) in c.iter_mut().zip(&u1) {
            *ci += bump * ui;
        }
    }
    TrsProblem::new(op, c)
}

fn gen_hard(n: usize, seed: u64, ill: bool) -> Result<TrsProblem> {
    if n < 2 {
        return Err(TrsError::InvalidInput("random kinds need n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let eigs = spread_eigenvalues(n, &mut rng);
    let op = operator_from_spectrum(&q, &eigs)?;
    let spec = op.eigendecompose()?;
    let lam1 = spec.lambda_min();

    // c = (H - l1 I) w puts c in the range; the pseudoinverse solution is the
    // range-projection of w, rescaled to the target norm (1 exactly for ill).
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    let shifted = op.shifted(-lam1);
    let mut c = shifted.apply(&w)?;
    let (pinv, _) = spec.pinv_apply(-lam1, &c, 1e-8)?;
    let rho = norm(&pinv);
    if rho < 1e-9 {
        return gen_hard(n, seed.wrapping_add(0x9e3779b97f4a7c15), ill);
    }
    let target = if ill {
        1.0
    } else {
        0.3 + 0.4 * rng.gen_range(0.0..1.0)
    };
    let s = target / rho;
    for ci in c.iter_mut() {
        *ci *= s;
    }
    TrsProblem::new(op.clone(), c)
}

fn gen_convex(n: usize, seed: u64) -> Result<TrsProblem> {
    if n < 2 {
        return Err(TrsError::InvalidInput("random kinds need n >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let mut eigs: Vec<f64> = (0..n).map(|_| 0.5 + 3.5 * rng.gen_range(0.0..1.0)).collect();
    eigs.sort_by(f64::total_cmp);
    for i in 1..n {
        if eigs[i] - eigs[i - 1] < 0.05 {
            eigs[i] = eigs[i - 1] + 0.05;
        }
    }
    let op = operator_from_spectrum(&q, &eigs)?;
    let c: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
    TrsProblem::new(op, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::solve_trs_reference;

    #[test]
    fn example1_matches_paper_points() {
        let p = generate(GenKind::Example1, 2, 0).unwrap();
        let p = p.as_ball().unwrap();
        let (x, _, _) = solve_trs_reference(p, 1e-10).unwrap();
        assert!((x[0] - 0.687).abs() < 1e-3 && (x[1] + 0.726).abs() < 1e-3);
    }

    #[test]
    fn example2_zero_tau_is_hard_case() {
        let p = generate(GenKind::Example2 { tau: 0.0 }, 2, 0).unwrap();
        let p = p.as_ball().unwrap();
        let label = classify_case(p, 1e-9).unwrap();
        assert_eq!(label.case, HardnessCase::HardII);
    }

    #[test]
    fn example2_rejects_negative_tau() {
        assert!(generate(GenKind::Example2 { tau: -0.1 }, 2, 0).is_err());
    }

    #[test]
    fn hard2_hand_instance_pseudonorm() {
        // H = diag(-2, 1), c = (0, 0.5): ||(H - l1 I)^+ c|| = 1/6 < 1.
        let op = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        let p = TrsProblem::new(op, vec![0.0, 0.5]).unwrap();
        assert_eq!(classify_case(&p, 1e-9).unwrap().case, HardnessCase::HardII);
    }

    #[test]
    fn ill_hand_instance_pseudonorm() {
        let op = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        let p = TrsProblem::new(op, vec![0.0, 3.0]).unwrap();
        assert_eq!(classify_case(&p, 1e-9).unwrap().case, HardnessCase::Ill);
    }

    #[test]
    fn random_kinds_classify_as_claimed() {
        for seed in 0..20 {
            assert!(generate(GenKind::Easy, 4, seed).is_ok(), "easy seed {seed}");
            assert!(generate(GenKind::Hard2, 4, seed).is_ok(), "hard2 seed {seed}");
            assert!(generate(GenKind::Ill, 4, seed).is_ok(), "ill seed {seed}");
            assert!(generate(GenKind::Convex, 4, seed).is_ok(), "convex seed {seed}");
        }
    }

    #[test]
    fn scalar_kind_is_scalar_matrix() {
        let p = generate(GenKind::Scalar, 3, 7).unwrap();
        let op = p.op();
        let l = op.entry(0, 0);
        for i in 0..3 {
            assert_eq!(op.entry(i, i), l);
        }
        assert_eq!(op.entry(1, 0), 0.0);
        assert!(norm(p.linear()) > 0.0);
    }

    #[test]
    fn generators_are_deterministic() {
        let a = generate(GenKind::Easy, 5, 11).unwrap();
        let b = generate(GenKind::Easy, 5, 11).unwrap();
        assert_eq!(a.linear(), b.linear());
        assert_eq!(a.op().entry(3, 2), b.op().entry(3, 2));
    }
}
