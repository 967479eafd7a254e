//! Reference global solver and case classifier built on the dense
//! eigendecomposition and the secular equation. Exists to verify the
//! projected-gradient paths, not to compete with them.

use crate::error::{Result, TrsError};
use crate::linalg::{dist, norm};
use crate::operator::{Spectrum, DEFAULT_DENSE_LIMIT, DEFAULT_DROP_TOL};
use crate::problem::{
    kkt_residuals, Constraint, KktPoint, QuadraticProblem, TrsProblem, TrseProblem,
};
use crate::secular::{
    escape_pole, escape_pole_left, minimize_convex, newton_bisect, SecularFunction,
};

/// Case taxonomy for ball problems: easy when c has a component outside
/// Range(H - l1 I); the hard subcases split on the optimal multiplier and the
/// pseudoinverse-solution norm, with the boundary case called ill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardnessCase {
    Easy,
    HardI,
    HardII,
    Ill,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseLabel {
    pub case: HardnessCase,
    /// Global solution strictly inside the ball (ball problems only).
    pub interior: bool,
}

/// Tunables of the oracle paths.
#[derive(Clone, Debug)]
pub struct OracleConfig {
    /// Cap for dense eigendecomposition.
    pub dense_limit: usize,
    /// Relative threshold for treating shifted eigenvalues as null modes.
    pub drop_tol: f64,
    /// Component of c on the l1-eigenspace below `hard_case_tol * ||c||`
    /// triggers the hard-case branch. Matches drop_tol so classification and
    /// solving agree.
    pub hard_case_tol: f64,
    /// Eigenvalues within this relative distance are grouped as equal.
    pub cluster_tol: f64,
    /// Largest dimension for exhaustive KKT enumeration.
    pub enumerate_limit: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            dense_limit: DEFAULT_DENSE_LIMIT,
            drop_tol: DEFAULT_DROP_TOL,
            hard_case_tol: 1e-8,
            cluster_tol: 1e-10,
            enumerate_limit: 6,
        }
    }
}

struct BoundarySolve {
    x: Vec<f64>,
    lambda: f64,
    case: HardnessCase,
}

/// Spectral scratch data shared by the oracle entry points.
struct Workspace<'a> {
    spec: &'a Spectrum,
    sec: SecularFunction,
    w: Vec<f64>,
    c: Vec<f64>,
    c_norm: f64,
    scale: f64,
    cutoff: f64,
}

impl<'a> Workspace<'a> {
    fn build<P: QuadraticProblem>(cfg: &OracleConfig, p: &'a P) -> Result<Self> {
        let spec = p.op().eigendecompose_with_limit(cfg.dense_limit)?;
        let c = p.linear().to_vec();
        let sec = SecularFunction::new(spec, &c, cfg.cluster_tol, cfg.hard_case_tol);
        let w = spec.project(&c);
        let scale = spec.spectral_norm();
        Ok(Self {
            spec,
            sec,
            w,
            c_norm: norm(&c),
            c,
            scale,
            cutoff: cfg.drop_tol * (1.0 + scale),
        })
    }

    /// x(lambda) = -(H + lambda I)^-1 c built spectrally; near-singular modes
    /// are dropped (the hard-case completion covers those separately).
    fn x_from_multiplier(&self, lambda: f64) -> Vec<f64> {
        let eig = self.spec.eigenvalues();
        let coeff: Vec<f64> = (0..self.spec.n())
            .map(|i| {
                let d = eig[i] + lambda;
                if d.abs() <= self.cutoff {
                    0.0
                } else {
                    -self.w[i] / d
                }
            })
            .collect();
        self.spec.combine(&coeff)
    }

    fn bracket_width(&self) -> f64 {
        self.c_norm + self.scale + 1.0
    }

    /// Unique root of phi on (lo, lo + width); `lo` is either an active pole
    /// or a point with phi(lo) > 0. Degenerates to `lo` when no bracket
    /// exists (the root collapsed onto lo).
    fn rightmost_root(&self, lo: f64, tol: f64) -> f64 {
        let phi = |l: f64| self.sec.value(l);
        let dphi = |l: f64| self.sec.derivative(l);
        let width = self.bracket_width();
        match escape_pole(phi, lo, width) {
            Some(a) => newton_bisect(phi, dphi, a, lo + width, tol),
            None => lo,
        }
    }

    /// Boundary global solution with multiplier at least `lo`.
    fn solve_boundary(&self, lo: f64, lam1: f64, tol: f64, cfg: &OracleConfig) -> BoundarySolve {
        if self.sec.groups()[0].active {
            let lambda = self.rightmost_root(lo, tol);
            return BoundarySolve {
                x: self.x_from_multiplier(lambda),
                lambda,
                case: HardnessCase::Easy,
            };
        }
        // c lies in Range(H - l1 I): either a root strictly beyond lo or the
        // eigenvector completion at lambda = -l1.
        let (pinv, _) = self
            .spec
            .pinv_apply(-lam1, &self.c, cfg.drop_tol)
            .expect("dimensions fixed");
        let rho = norm(&pinv);
        if rho > 1.0 + tol {
            let lambda = self.rightmost_root(lo, tol);
            return BoundarySolve {
                x: self.x_from_multiplier(lambda),
                lambda,
                case: HardnessCase::HardI,
            };
        }
        let alpha = (1.0 - rho * rho).max(0.0).sqrt();
        let u1 = self.spec.eigenvector(0);
        let x: Vec<f64> = pinv
            .iter()
            .zip(u1)
            .map(|(pi, ui)| -pi + alpha * ui)
            .collect();
        let case = if (rho - 1.0).abs() <= tol {
            HardnessCase::Ill
        } else {
            HardnessCase::HardII
        };
        BoundarySolve {
            x,
            lambda: lo,
            case,
        }
    }

    /// Label for an interior solution (multiplier zero).
    fn classify_interior(&self, lam1: f64, tol: f64, cfg: &OracleConfig) -> HardnessCase {
        if self.sec.groups()[0].active {
            return HardnessCase::Easy;
        }
        if lam1 > tol {
            // lambda* = 0 > -l1.
            return HardnessCase::HardI;
        }
        let (pinv, _) = self
            .spec
            .pinv_apply(-lam1, &self.c, cfg.drop_tol)
            .expect("dimensions fixed");
        let rho = norm(&pinv);
        if (rho - 1.0).abs() <= tol {
            HardnessCase::Ill
        } else {
            HardnessCase::HardII
        }
    }
}

/// Reference global solver for the ball problem. Returns a global minimizer,
/// its KKT diagnostics and the case label. The returned multiplier satisfies
/// the global certificate `lambda >= max(0, -l1) - tol`.
pub fn solve_trs_reference(p: &TrsProblem, tol: f64) -> Result<(Vec<f64>, KktPoint, CaseLabel)> {
    solve_trs_reference_with(&OracleConfig::default(), p, tol)
}

pub fn solve_trs_reference_with(
    cfg: &OracleConfig,
    p: &TrsProblem,
    tol: f64,
) -> Result<(Vec<f64>, KktPoint, CaseLabel)> {
    let ws = Workspace::build(cfg, p)?;
    let lam1 = ws.spec.eigenvalues()[0];

    // Interior candidate: unconstrained (range) solution of a PSD Hessian.
    if lam1 >= 0.0 {
        let (xu_neg, in_range) = ws.spec.pinv_apply(0.0, p.linear(), cfg.drop_tol)?;
        let xu: Vec<f64> = xu_neg.iter().map(|v| -v).collect();
        if in_range && norm(&xu) <= 1.0 {
            let kkt = kkt_residuals(p, &xu, 0.0)?;
            let case = ws.classify_interior(lam1, tol, cfg);
            return Ok((
                xu,
                kkt,
                CaseLabel {
                    case,
                    interior: true,
                },
            ));
        }
    }

    let lo = (-lam1).max(0.0);
    let sol = ws.solve_boundary(lo, lam1, tol, cfg);
    let kkt = kkt_residuals(p, &sol.x, sol.lambda)?;
    Ok((
        sol.x,
        kkt,
        CaseLabel {
            case: sol.case,
            interior: false,
        },
    ))
}

/// Reference global solver for the sphere problem: the multiplier is free in
/// sign but still satisfies `mu >= -l1` at the global point.
pub fn solve_trse_reference(p: &TrseProblem, tol: f64) -> Result<(Vec<f64>, KktPoint)> {
    solve_trse_reference_with(&OracleConfig::default(), p, tol)
}

pub fn solve_trse_reference_with(
    cfg: &OracleConfig,
    p: &TrseProblem,
    tol: f64,
) -> Result<(Vec<f64>, KktPoint)> {
    let ws = Workspace::build(cfg, p)?;
    let lam1 = ws.spec.eigenvalues()[0];
    let sol = ws.solve_boundary(-lam1, lam1, tol, cfg);
    let kkt = kkt_residuals(p, &sol.x, sol.lambda)?;
    Ok((sol.x, kkt))
}

/// Case classification per the hard-case taxonomy.
pub fn classify_case(p: &TrsProblem, tol: f64) -> Result<CaseLabel> {
    classify_case_with(&OracleConfig::default(), p, tol)
}

pub fn classify_case_with(cfg: &OracleConfig, p: &TrsProblem, tol: f64) -> Result<CaseLabel> {
    solve_trs_reference_with(cfg, p, tol).map(|(_, _, label)| label)
}

/// True iff (x, lambda) satisfies the KKT residuals at `tol` and the global
/// certificate `lambda >= -l1 - tol` (plus `lambda >= -tol` on the ball).
/// Stationarity is compared against `tol * (1 + ||c||)` and complementarity
/// against `tol * (1 + |lambda|)`.
pub fn check_global<P: QuadraticProblem>(p: &P, x: &[f64], lambda: f64, tol: f64) -> Result<bool> {
    check_global_with(&OracleConfig::default(), p, x, lambda, tol)
}

pub fn check_global_with<P: QuadraticProblem>(
    cfg: &OracleConfig,
    p: &P,
    x: &[f64],
    lambda: f64,
    tol: f64,
) -> Result<bool> {
    let spec = p.op().eigendecompose_with_limit(cfg.dense_limit)?;
    let lam1 = spec.eigenvalues()[0];
    let kkt = kkt_residuals(p, x, lambda)?;
    let c_norm = norm(p.linear());
    let residuals_ok = kkt.stationarity_residual <= tol * (1.0 + c_norm)
        && kkt.feasibility_residual <= tol
        && kkt.complementarity_residual <= tol * (1.0 + lambda.abs());
    let multiplier_ok =
        lambda >= -lam1 - tol && (p.constraint() == Constraint::Sphere || lambda >= -tol);
    Ok(residuals_ok && multiplier_ok)
}

/// Exhaustively enumerates KKT points of a small problem: the interior
/// candidate (ball), every root of phi over the pole-free intervals, and the
/// eigenvector-completion families at inactive poles (one representative per
/// completion sign). Results are sorted by objective, then lexicographically.
pub fn enumerate_kkt<P: QuadraticProblem>(p: &P, tol: f64) -> Result<Vec<KktPoint>> {
    enumerate_kkt_with(&OracleConfig::default(), p, tol)
}

pub fn enumerate_kkt_with<P: QuadraticProblem>(
    cfg: &OracleConfig,
    p: &P,
    tol: f64,
) -> Result<Vec<KktPoint>> {
    if p.dim() > cfg.enumerate_limit {
        return Err(TrsError::Capability(format!(
            "exhaustive KKT enumeration limited to n <= {} (got n = {})",
            cfg.enumerate_limit,
            p.dim()
        )));
    }
    let ws = Workspace::build(cfg, p)?;
    let ball = p.constraint() == Constraint::Ball;
    let phi = |l: f64| ws.sec.value(l);
    let dphi = |l: f64| ws.sec.derivative(l);

    let mut raw: Vec<(Vec<f64>, f64)> = Vec::new();

    // Interior candidate.
    if ball {
        let (xu_neg, in_range) = ws.spec.pinv_apply(0.0, p.linear(), cfg.drop_tol)?;
        if in_range {
            let xu: Vec<f64> = xu_neg.iter().map(|v| -v).collect();
            if norm(&xu) <= 1.0 + tol {
                raw.push((xu, 0.0));
            }
        }
    }

    // Roots of phi over pole-free intervals.
    let poles = ws.sec.active_poles();
    let width = ws.bracket_width();
    if !poles.is_empty() {
        // Leftmost interval: phi increases from -1 to +infinity.
        let first = poles[0];
        if let Some(b) = escape_pole_left(phi, first, width) {
            let root = newton_bisect(phi, dphi, first - width, b, tol);
            raw.push((ws.x_from_multiplier(root), root));
        }
        // Interior intervals: strictly convex, up to two roots.
        for pair in poles.windows(2) {
            let (pa, pb) = (pair[0], pair[1]);
            let gap = pb - pa;
            let mut frac = 1e-9;
            let (mut a, mut b) = (pa + gap * frac, pb - gap * frac);
            // Shrink toward the poles until both endpoint values are positive.
            while (phi(a) <= 0.0 || phi(b) <= 0.0) && frac > 1e-15 {
                frac *= 0.1;
                a = pa + gap * frac;
                b = pb - gap * frac;
            }
            if phi(a) <= 0.0 || phi(b) <= 0.0 {
                continue;
            }
            let m = minimize_convex(dphi, a, b);
            let pm = phi(m);
            if pm.abs() <= tol {
                raw.push((ws.x_from_multiplier(m), m));
            } else if pm < 0.0 {
                let r1 = newton_bisect(phi, dphi, a, m, tol);
                let r2 = newton_bisect(phi, dphi, m, b, tol);
                raw.push((ws.x_from_multiplier(r1), r1));
                raw.push((ws.x_from_multiplier(r2), r2));
            }
        }
        // Rightmost interval: phi decreases from +infinity to -1.
        let last = poles[poles.len() - 1];
        if let Some(a) = escape_pole(phi, last, width) {
            let root = newton_bisect(phi, dphi, a, last + width, tol);
            raw.push((ws.x_from_multiplier(root), root));
        }
    }

    // Hard-case families at inactive poles.
    for g in ws.sec.groups() {
        if g.active {
            continue;
        }
        let lambda = -g.eigenvalue;
        if ball && lambda < -tol {
            continue;
        }
        let (pinv, _) = ws.spec.pinv_apply(-g.eigenvalue, p.linear(), cfg.drop_tol)?;
        let rho = norm(&pinv);
        if rho > 1.0 + tol {
            continue;
        }
        let alpha = (1.0 - rho * rho).max(0.0).sqrt();
        let u = ws.spec.eigenvector(g.first_index);
        let plus: Vec<f64> = pinv.iter().zip(u).map(|(pi, ui)| -pi + alpha * ui).collect();
        raw.push((plus, lambda));
        if alpha > 1e-12 {
            let minus: Vec<f64> = pinv.iter().zip(u).map(|(pi, ui)| -pi - alpha * ui).collect();
            raw.push((minus, lambda));
        }
    }

    // Residual filter and deduplication.
    let c_norm = ws.c_norm;
    let mut kept: Vec<KktPoint> = Vec::new();
    for (x, lambda) in raw {
        if ball && lambda < -tol {
            continue;
        }
        let kkt = kkt_residuals(p, &x, lambda)?;
        let ok = kkt.stationarity_residual <= tol * (1.0 + c_norm)
            && kkt.feasibility_residual <= tol
            && kkt.complementarity_residual <= tol * (1.0 + lambda.abs());
        if !ok {
            continue;
        }
        let dup = kept.iter().any(|k| {
            (k.lambda - lambda).abs() <= 1e-5 * (1.0 + lambda.abs()) && dist(&k.x, &x) <= 1e-5
        });
        if !dup {
            kept.push(kkt);
        }
    }

    kept.sort_by(|a, b| {
        let qa = p.objective(&a.x);
        let qb = p.objective(&b.x);
        qa.total_cmp(&qb).then_with(|| {
            a.x.iter()
                .zip(&b.x)
                .map(|(u, v)| u.total_cmp(v))
                .find(|o| *o != std::cmp::Ordering::Equal)
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    });
    Ok(kept)
}
