//! The secular function phi(lambda) = ||(H + lambda I)^-1 c||^2 - 1 in
//! spectral form, with the root-finding machinery the oracle is built on.
//!
//! phi is strictly convex on every interval between consecutive poles and
//! monotone on the two outer intervals, so each pole-free interval carries
//! at most two roots and the outer ones at most one each.

use crate::linalg::norm;
use crate::operator::Spectrum;

/// A cluster of numerically equal eigenvalues with the squared projection of
/// c onto its eigenspace. Groups whose projection is negligible relative to
/// ||c|| are inactive: they contribute no pole (hard-case candidates).
#[derive(Clone, Debug)]
pub struct PoleGroup {
    pub eigenvalue: f64,
    /// Sum of (u_i'c)^2 over the group.
    pub coeff: f64,
    pub active: bool,
    pub first_index: usize,
    pub len: usize,
}

#[derive(Clone, Debug)]
pub struct SecularFunction {
    groups: Vec<PoleGroup>,
    c_norm: f64,
}

impl SecularFunction {
    /// Builds from a spectrum and linear term. Eigenvalues within
    /// `cluster_tol` relative are grouped; groups with projection below
    /// `active_tol * ||c||` are marked inactive and excluded from evaluation.
    pub fn new(spectrum: &Spectrum, c: &[f64], cluster_tol: f64, active_tol: f64) -> Self {
        let eig = spectrum.eigenvalues();
        let n = spectrum.n();
        let scale = 1.0 + spectrum.spectral_norm();
        let w = spectrum.project(c);
        let c_norm = norm(c);
        let mut groups: Vec<PoleGroup> = Vec::new();
        let mut i = 0;
        while i < n {
            let mut j = i + 1;
            while j < n && (eig[j] - eig[i]).abs() <= cluster_tol * scale {
                j += 1;
            }
            let coeff: f64 = (i..j).map(|k| w[k] * w[k]).sum();
            let active = coeff.sqrt() > active_tol * c_norm;
            groups.push(PoleGroup {
                eigenvalue: eig[i],
                coeff,
                active,
                first_index: i,
                len: j - i,
            });
            i = j;
        }
        Self { groups, c_norm }
    }

    pub fn groups(&self) -> &[PoleGroup] {
        &self.groups
    }

    pub fn c_norm(&self) -> f64 {
        self.c_norm
    }

    /// phi(lambda) over active groups.
    pub fn value(&self, lambda: f64) -> f64 {
        let mut s = -1.0;
        for g in &self.groups {
            if g.active {
                let d = g.eigenvalue + lambda;
                s += g.coeff / (d * d);
            }
        }
        s
    }

    /// phi'(lambda) over active groups.
    pub fn derivative(&self, lambda: f64) -> f64 {
        let mut s = 0.0;
        for g in &self.groups {
            if g.active {
                let d = g.eigenvalue + lambda;
                s -= 2.0 * g.coeff / (d * d * d);
            }
        }
        s
    }

    /// Pole locations `-eigenvalue` of active groups, ascending.
    pub fn active_poles(&self) -> Vec<f64> {
        let mut p: Vec<f64> = self
            .groups
            .iter()
            .filter(|g| g.active)
            .map(|g| -g.eigenvalue)
            .collect();
        p.sort_by(f64::total_cmp);
        p
    }
}

/// Finds `a > lo` with `phi(a)` finite and positive, growing the offset
/// geometrically from 1e-12 (relative to the local scale). Returns None when
/// no such point exists below `lo + width`, i.e. there is no root to bracket.
pub(crate) fn escape_pole<F: Fn(f64) -> f64>(phi: F, lo: f64, width: f64) -> Option<f64> {
    let mut delta = 1e-12 * (1.0 + lo.abs());
    while delta < width {
        let v = phi(lo + delta);
        if v.is_finite() && v > 0.0 {
            return Some(lo + delta);
        }
        delta *= 10.0;
    }
    None
}

/// Mirror of `escape_pole` approaching `hi` from the left.
pub(crate) fn escape_pole_left<F: Fn(f64) -> f64>(phi: F, hi: f64, width: f64) -> Option<f64> {
    let mut delta = 1e-12 * (1.0 + hi.abs());
    while delta < width {
        let v = phi(hi - delta);
        if v.is_finite() && v > 0.0 {
            return Some(hi - delta);
        }
        delta *= 10.0;
    }
    None
}

/// Safeguarded Newton on a bracket with a sign change. Newton steps are
/// accepted only inside the current bracket, otherwise the step bisects.
/// Stops at `|phi| <= tol` or when the bracket collapses.
pub(crate) fn newton_bisect<F, D>(phi: F, dphi: D, mut a: f64, mut b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    debug_assert!(a < b);
    let mut fa = phi(a);
    let fb = phi(b);
    debug_assert!(
        fa == 0.0 || fb == 0.0 || (fa > 0.0) != (fb > 0.0),
        "bracket must carry a sign change: phi({a})={fa}, phi({b})={fb}"
    );
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    let increasing = fb > 0.0;
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = phi(x);
        if fx.abs() <= tol {
            return x;
        }
        let positive_side_right = (fx > 0.0) == increasing;
        if positive_side_right {
            b = x;
        } else {
            a = x;
            fa = fx;
        }
        let _ = fa;
        let d = dphi(x);
        let mut next = if d != 0.0 { x - fx / d } else { f64::NAN };
        if !(next > a && next < b) {
            next = 0.5 * (a + b);
        }
        if (b - a) <= 1e-15 * (1.0 + x.abs()) {
            return 0.5 * (a + b);
        }
        x = next;
    }
    x
}

/// Minimizes a strictly convex function on (a, b) by bisecting its derivative.
/// Assumes `dphi(a) < 0 < dphi(b)` (guaranteed next to active poles).
pub(crate) fn minimize_convex<D: Fn(f64) -> f64>(dphi: D, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if dphi(m) < 0.0 {
            a = m;
        } else {
            b = m;
        }
        if (b - a) <= 1e-14 * (1.0 + m.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::SymmetricOperator;

    fn example1_secular() -> SecularFunction {
        let op = SymmetricOperator::from_diagonal(&[-13.0, 13.0]).unwrap();
        let spec = op.eigendecompose().unwrap().clone();
        SecularFunction::new(&spec, &[-250.0 / 169.0, 3456.0 / 169.0], 1e-10, 1e-8)
    }

    #[test]
    fn value_matches_closed_form() {
        let sec = example1_secular();
        let c1: f64 = -250.0 / 169.0;
        let c2: f64 = 3456.0 / 169.0;
        for &l in &[14.0, 20.0, 0.0, -20.0] {
            let direct = c1 * c1 / ((l - 13.0) * (l - 13.0)) + c2 * c2 / ((l + 13.0) * (l + 13.0))
                - 1.0;
            assert!((sec.value(l) - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn newton_bisect_finds_example1_root() {
        let sec = example1_secular();
        let a = escape_pole(|l| sec.value(l), 13.0, 100.0).unwrap();
        let root = newton_bisect(|l| sec.value(l), |l| sec.derivative(l), a, 113.0, 1e-12);
        assert!((root - 15.152385545211683).abs() < 1e-8, "root {root}");
    }

    #[test]
    fn convex_minimum_hits_double_root() {
        // Between the poles of the first example the minimum of phi touches
        // zero exactly at 119/13.
        let sec = example1_secular();
        let m = minimize_convex(|l| sec.derivative(l), -12.99, 12.99);
        assert!((m - 119.0 / 13.0).abs() < 1e-6, "minimizer {m}");
        assert!(sec.value(m).abs() < 1e-10);
    }

    #[test]
    fn inactive_groups_are_skipped() {
        let op = SymmetricOperator::from_diagonal(&[-2.0, 1.0]).unwrap();
        let spec = op.eigendecompose().unwrap().clone();
        let sec = SecularFunction::new(&spec, &[0.0, 3.0], 1e-10, 1e-8);
        let g = sec.groups();
        assert!(!g[0].active && g[1].active);
        // phi(2) = 9/9 - 1 = 0 at the dropped pole.
        assert!(sec.value(2.0).abs() < 1e-14);
        assert_eq!(sec.active_poles(), vec![-1.0]);
    }
}
