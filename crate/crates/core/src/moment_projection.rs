//! Restriction maps `p: g* -> b*` and `p1: g* -> b1*` on elliptic orbits,
//! their images, properness diagnostics and the transversality rank test.

use nalgebra::{DMatrix, Matrix3};
use serde::Serialize;

use crate::coadjoint_orbits::OrbitDescriptor;
use crate::discrete_series::{DiscreteSeriesParam, DsClass};
use crate::lie_su21::{
    b1_basis, b_basis, bracket, coadjoint_b, coadjoint_g, frac, g_basis, killing_dualize, AlgebraElement, BasisTag,
    DualForm, GroupElementB, KElement, Scalar, KERNEL_REL_TOL,
};
use crate::linalg::null_space_real;
use crate::{q, Error, Result, Sign, C64, Q};

/// `p1(f) = f|_{b1}` in the basis `(S*, E1*, E1'*, E2*)`.
pub fn project_p1<T: Scalar>(f: &DualForm<T>) -> DualForm<T> {
    DualForm::new(BasisTag::B1Star, b1_basis::<T>().iter().map(|y| f.eval_g(y)).collect())
}

/// `p(f) = f|_b` in the basis `(W*, S*, E1*, E1'*, E2*)`.
pub fn project_p<T: Scalar>(f: &DualForm<T>) -> DualForm<T> {
    DualForm::new(BasisTag::BStar, b_basis::<T>().iter().map(|y| f.eval_g(y)).collect())
}

/// `k . (f0H H* + f0Z Z*)`.
pub fn k_translate(f0h: f64, f0z: f64, k: &KElement) -> DualForm<f64> {
    coadjoint_g(&k.matrix(), &DualForm::cartan(f0h, f0z))
}

fn check_regular(f0h: f64, f0z: f64) -> Result<()> {
    if !(f0h.is_finite() && f0z.is_finite()) || f0h == 0.0 || f0h.abs() == f0z.abs() {
        return Err(Error::InvalidParameter(format!("(f0H, f0Z) = ({f0h}, {f0z}) is not strongly regular")));
    }
    Ok(())
}

/// `|f0H| < |f0Z|`.
pub fn holomorphic_cone(f0h: f64, f0z: f64) -> Result<bool> {
    check_regular(f0h, f0z)?;
    Ok(f0h.abs() < f0z.abs())
}

/// One sample of a fiber curve.
#[derive(Debug, Clone, Serialize)]
pub struct WitnessSample {
    pub t: f64,
    /// Distance of the projected point from the base point of the fiber.
    pub fiber_deviation: f64,
    /// Frobenius norm of the orbit point (through the trace pairing).
    pub norm: f64,
}

/// A curve inside a single fiber of the projection leaving every compact set.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub description: String,
    pub samples: Vec<WitnessSample>,
}

impl Witness {
    pub fn max_fiber_deviation(&self) -> f64 {
        self.samples.iter().map(|s| s.fiber_deviation).fold(0.0, f64::max)
    }

    pub fn max_norm(&self) -> f64 {
        self.samples.iter().map(|s| s.norm).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropernessVerdict {
    pub weakly_proper: bool,
    pub proper: bool,
    pub witness: Option<Witness>,
}

fn orbit_norm(g: &Matrix3<C64>, g_inv: &Matrix3<C64>, f0: &DualForm<f64>) -> f64 {
    let x = killing_dualize(f0).to_matrix3();
    (g * x * g_inv).norm()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Element of `B1` carrying `sign(e) E2*` to the `b1*` form `(s, a, b, e)`.
fn b1_section(h: &DualForm<f64>) -> GroupElementB {
    let [s, a, b, e] = [h.coeffs[0], h.coeffs[1], h.coeffs[2], h.coeffs[3]];
    GroupElementB { w: 0.0, s: -0.5 * e.abs().ln(), x: -b / e, y: a / e, z: s / (2.0 * e) }
}

/// Largest norm the fiber witnesses are pushed to.
pub const WITNESS_TARGET_NORM: f64 = 1e7;

/// Smallest `t` on the grid `step, 2 step, ...` with `norm(t) >= WITNESS_TARGET_NORM`.
fn reach_target(step: f64, t_max: f64, norm: impl Fn(f64) -> f64) -> f64 {
    let mut t = step;
    while norm(t) < WITNESS_TARGET_NORM && t < t_max {
        t += step;
    }
    t
}

// Fiber points are evaluated through the closed-form action of `B` on `b*`
// (the projections are `B`-equivariant), which stays accurate when the
// group element itself is huge; the 3x3 matrices only feed the norm.

/// Properness of `p1` on the orbit of `f0H H* + f0Z Z*`.
pub fn p1_properness(f0h: f64, f0z: f64) -> Result<PropernessVerdict> {
    if holomorphic_cone(f0h, f0z)? {
        return Ok(PropernessVerdict { weakly_proper: true, proper: true, witness: None });
    }
    // <k_theta f0, E2> = f0H cos(theta) + f0Z vanishes at theta*; approach it
    // from theta = 0 and pull each point back to the fiber over p1(f0).
    let f0 = DualForm::cartan(f0h, f0z);
    let theta_star = (-f0z / f0h).acos();
    let h0 = project_p1(&f0);
    let l0 = b1_section(&h0);
    let (l0m, l0i) = (l0.matrix(), l0.inverse().matrix());
    let sample = |t: f64| {
        let k = KElement { zeta: 0.0, phi: 0.0, theta: theta_star * (1.0 - (-t).exp()), psi: 0.0 };
        let kf = k_translate(f0h, f0z, &k);
        let lt = b1_section(&project_p1(&kf));
        let l = l0.compose(&lt.inverse());
        let moved = coadjoint_b(&l, &project_p(&kf));
        let km = k.matrix();
        let g = l0m * lt.inverse().matrix() * km;
        let gi = km.adjoint() * lt.matrix() * l0i;
        WitnessSample { t, fiber_deviation: max_abs_diff(&moved.coeffs[1..], &h0.coeffs), norm: orbit_norm(&g, &gi, &f0) }
    };
    let t_end = reach_target(0.25, 60.0, |t| sample(t).norm);
    let samples = (0..=60).map(|i| sample(t_end * i as f64 / 60.0)).collect();
    let witness = Witness {
        description: format!(
            "t -> l_t^-1 k_t . f0 with k_t = exp(-(theta_t/2)V), theta_t = {theta_star:.6}(1 - e^-t), l_t in B1 mapping p1(f0) to p1(k_t f0)"
        ),
        samples,
    };
    Ok(PropernessVerdict { weakly_proper: false, proper: false, witness: Some(witness) })
}

/// Properness of `p` on the orbit of `f0H H* + f0Z Z*`; always weakly proper.
pub fn p_properness(f0h: f64, f0z: f64) -> Result<PropernessVerdict> {
    if holomorphic_cone(f0h, f0z)? {
        return Ok(PropernessVerdict { weakly_proper: true, proper: true, witness: None });
    }
    let f0 = DualForm::cartan(f0h, f0z);
    let theta_star = (-f0z / f0h).acos();
    let k = KElement { zeta: 0.0, phi: 0.0, theta: theta_star, psi: 0.0 };
    let km = k.matrix();
    let ki = km.adjoint();
    let mut base = project_p(&k_translate(f0h, f0z, &k));
    // <k.f0, E2> vanishes exactly at theta*; its rounding error would be
    // multiplied by t along exp(tE2).
    base.coeffs[4] = 0.0;
    let e2 = AlgebraElement::<f64>::e2().to_matrix3();
    let sample = |t: f64| {
        let moved = coadjoint_b(&GroupElementB { w: 0.0, s: 0.0, x: 0.0, y: 0.0, z: t }, &base);
        let g = (Matrix3::identity() + e2 * C64::from(t)) * km;
        let gi = ki * (Matrix3::identity() - e2 * C64::from(t));
        WitnessSample { t, fiber_deviation: max_abs_diff(&moved.coeffs, &base.coeffs), norm: orbit_norm(&g, &gi, &f0) }
    };
    let mut t_end = 50.0;
    while sample(t_end).norm < WITNESS_TARGET_NORM && t_end < 1e6 {
        t_end *= 2.0;
    }
    let samples = (0..=60).map(|i| sample(t_end * i as f64 / 60.0)).collect();
    let witness = Witness {
        description: format!("t -> exp(tE2) k . f0 with k = exp(-(theta/2)V), theta = {theta_star:.6}, <k.f0, E2> = 0"),
        samples,
    };
    Ok(PropernessVerdict { weakly_proper: true, proper: false, witness: Some(witness) })
}

/// `r(k) = f0Z/3 + (f0H^2 - f0Z^2) / (2 <k.f0, E2>)`.
pub fn r_of_k<T: Scalar>(f0h: T, f0z: T, e2_pairing: T) -> Result<T> {
    if e2_pairing.is_zero() {
        return Err(Error::NotInRegularSet);
    }
    Ok(f0z.clone() / frac(3, 1) + (f0h.clone() * f0h - f0z.clone() * f0z) / (e2_pairing * frac(2, 1)))
}

/// Progression of `B`-orbits `Omega_{start + N step, sign}`, `N >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitFamily {
    pub start: Q,
    pub step: Q,
    pub sign: Sign,
}

impl OrbitFamily {
    pub fn iter(&self) -> impl Iterator<Item = OrbitDescriptor> + '_ {
        (0i64..).map(move |n| OrbitDescriptor::B { r: &self.start + &self.step * q(n, 1), sign: self.sign })
    }
}

/// Admissible `B`-orbits contained in `p(O_{f0})`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitImage {
    pub finite: Vec<OrbitDescriptor>,
    pub families: Vec<OrbitFamily>,
    pub derived_by_symmetry: bool,
}

impl OrbitImage {
    /// All finite orbits followed by the first `n_max` orbits of each family.
    pub fn take(&self, n_max: usize) -> Vec<OrbitDescriptor> {
        let mut v = self.finite.clone();
        for f in &self.families {
            v.extend(f.iter().take(n_max));
        }
        v
    }
}

pub fn admissible_orbits_in_image(ds: &DiscreteSeriesParam) -> OrbitImage {
    let (h, z) = (ds.f0h, ds.f0z);
    match ds.class {
        DsClass::Holo => {
            let top = q(3 * h - z, 6);
            let finite = (0..3 * h)
                .map(|m| OrbitDescriptor::B { r: &top + q(1 - m, 3) - q(1, 2), sign: Sign::Minus })
                .collect();
            OrbitImage { finite, families: Vec::new(), derived_by_symmetry: false }
        }
        DsClass::AntiHolo => {
            let img = admissible_orbits_in_image(&ds.mirror());
            let finite = img
                .finite
                .into_iter()
                .map(|o| match o {
                    OrbitDescriptor::B { r, sign } => OrbitDescriptor::B { r: -r, sign: sign.flip() },
                    other => other,
                })
                .collect();
            OrbitImage { finite, families: Vec::new(), derived_by_symmetry: true }
        }
        DsClass::Neither => OrbitImage {
            finite: Vec::new(),
            families: vec![
                OrbitFamily { start: -q(3 * h + z, 6) - q(1, 2), step: q(-1, 3), sign: Sign::Minus },
                OrbitFamily { start: q(3 * h - z, 6) + q(1, 2), step: q(1, 3), sign: Sign::Plus },
            ],
            derived_by_symmetry: false,
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subalgebra {
    B,
    B1,
}

/// `dim(g(f) ∩ h)` for `h = b` or `b1`, by a numeric kernel.
pub fn transversality_dim(f: &DualForm<f64>, sub: Subalgebra) -> usize {
    let h = match sub {
        Subalgebra::B => b_basis::<f64>(),
        Subalgebra::B1 => b1_basis::<f64>(),
    };
    let g = g_basis::<f64>();
    let m = DMatrix::from_fn(g.len(), h.len(), |i, j| f.eval_g(&bracket(&h[j], &g[i])));
    null_space_real(&m, KERNEL_REL_TOL).len()
}

/// Reference form used by the sampling checks.
pub fn cartan_form_exact(f0h: i64, f0z: i64) -> DualForm<Q> {
    DualForm::cartan(q(f0h, 1), q(f0z, 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn witnesses_leave_compacts() {
        let v = p1_properness(3.0, 1.0).unwrap();
        let w = v.witness.unwrap();
        assert!(w.max_norm() > 1e6, "{}", w.max_norm());
        assert!(w.max_fiber_deviation() < 1e-9, "{}", w.max_fiber_deviation());
        let v = p_properness(3.0, 1.0).unwrap();
        let w = v.witness.unwrap();
        assert!(w.max_norm() > 1e6, "{}", w.max_norm());
        assert!(w.max_fiber_deviation() < 1e-9, "{}", w.max_fiber_deviation());
    }
}
