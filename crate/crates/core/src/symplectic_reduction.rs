//! Reduced spaces `p^-1(Omega) / B` and `p1^-1(Omega) / B1` of an elliptic
//! orbit, their volumes and the point-quantization rule.
//!
//! Over a point of the orbit the `E2`-pairing is `e2 = f0H cos(theta) + f0Z`
//! (polar angle on the `K`-orbit sphere), and the `B`-invariant of the image is
//! `phi(cos theta) = (2 f0Z - 3 (f0Z^2 - f0H^2) / (f0H cos theta + f0Z)) / 6`.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::coadjoint_orbits::{orbit_to_repr, OrbitDescriptor, ReprLabel};
use crate::discrete_series::{central_character_selects, DiscreteSeriesParam, Target};
use crate::moment_projection::{admissible_orbits_in_image, holomorphic_cone};
use crate::{q, Error, Result, Sign, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ReducedKind {
    Point,
    Sphere2,
    NoncompactSurface,
    Empty,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedVariety {
    pub kind: ReducedKind,
    /// Symplectic volume divided by `2 pi`; only for `Sphere2`.
    pub volume: Option<f64>,
}

/// Quadrature nodes used for the volume attached to a `Sphere2` result.
pub const DEFAULT_VOLUME_NODES: usize = 2000;

/// Range `[f0Z - |f0H|, f0Z + |f0H|]` of the `E2`-pairing on the orbit.
pub fn e2_range(f0h: &Q, f0z: &Q) -> (Q, Q) {
    (f0z - f0h.abs(), f0z + f0h.abs())
}

/// Whether the `B`-orbit `Omega_{r,sign}` meets `p(O_{f0})`.
///
/// `phi(e2) = f0Z/3 + (f0H^2 - f0Z^2) / (2 e2)` is inverted exactly:
/// `e2 = (f0H^2 - f0Z^2) / (2 (r - f0Z/3))` must lie in the pairing range
/// with the sign of the orbit.
pub fn b_orbit_meets_image(f0h: &Q, f0z: &Q, r: &Q, sign: Sign) -> bool {
    let shift = r - f0z / q(3, 1);
    if shift.is_zero() {
        return false;
    }
    let e2 = (f0h * f0h - f0z * f0z) / (shift * q(2, 1));
    let (lo, hi) = e2_range(f0h, f0z);
    let sign_ok = match sign {
        Sign::Plus => e2.is_positive(),
        Sign::Minus => e2.is_negative(),
    };
    sign_ok && lo <= e2 && e2 <= hi
}

/// Whether `Omega^sign` meets `p1(O_{f0})`: some pairing in the range has that sign.
pub fn b1_orbit_meets_image(f0h: &Q, f0z: &Q, sign: Sign) -> bool {
    let (lo, hi) = e2_range(f0h, f0z);
    match sign {
        Sign::Plus => hi.is_positive(),
        Sign::Minus => lo.is_negative(),
    }
}

/// Reduced space of `O_{f0}` over `orbit` for the `B` or `B1` moment map.
pub fn classify_reduced(f0h: i64, f0z: i64, target: Target, orbit: &OrbitDescriptor) -> Result<ReducedVariety> {
    let cone = holomorphic_cone(f0h as f64, f0z as f64)?;
    let (h, z) = (q(f0h, 1), q(f0z, 1));
    let empty = ReducedVariety { kind: ReducedKind::Empty, volume: None };
    Ok(match (target, orbit) {
        (Target::B, OrbitDescriptor::B { r, sign }) => {
            if b_orbit_meets_image(&h, &z, r, *sign) {
                ReducedVariety { kind: ReducedKind::Point, volume: None }
            } else {
                empty
            }
        }
        (Target::B1, OrbitDescriptor::B1 { sign }) => {
            if !b1_orbit_meets_image(&h, &z, *sign) {
                empty
            } else if cone {
                let volume = reduced_volume(f0h as f64, f0z as f64, DEFAULT_VOLUME_NODES)?;
                ReducedVariety { kind: ReducedKind::Sphere2, volume: Some(volume) }
            } else {
                ReducedVariety { kind: ReducedKind::NoncompactSurface, volume: None }
            }
        }
        _ => empty,
    })
}

/// Density of the pulled-back symplectic form in `d theta ^ d phi`.
fn volume_density(f0h: f64, f0z: f64, theta: f64) -> f64 {
    let den = f0z + f0h * theta.cos();
    0.5 * f0h * theta.sin() * (f0z * f0z - f0h * f0h) / (den * den)
}

/// `(1 / 2 pi) |int_0^pi int_0^2pi density d phi d theta|`: composite
/// Simpson with `n` intervals in `theta` (`n` rounded up to even), periodic
/// trapezoid in `phi`.
pub fn reduced_volume(f0h: f64, f0z: f64, n: usize) -> Result<f64> {
    if !holomorphic_cone(f0h, f0z)? {
        return Err(Error::InvalidParameter(format!(
            "({f0h}, {f0z}) is outside the holomorphic cone; the density has a pole in (0, pi)"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter("need at least 2 quadrature nodes".into()));
    }
    let n = n + n % 2;
    let h = std::f64::consts::PI / n as f64;
    let mut s = volume_density(f0h, f0z, 0.0) + volume_density(f0h, f0z, std::f64::consts::PI);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * volume_density(f0h, f0z, i as f64 * h);
    }
    let theta_integral = s * h / 3.0;
    // The density does not depend on phi and the periodic trapezoid rule
    // integrates constants exactly, so the phi axis contributes 2 pi and
    // cancels the normalisation.
    Ok(theta_integral.abs())
}

/// The antiderivative evaluated in closed form: `|f0H|`.
pub fn reduced_volume_closed_form(f0h: f64, f0z: f64) -> Result<f64> {
    if !holomorphic_cone(f0h, f0z)? {
        return Err(Error::InvalidParameter(format!("({f0h}, {f0z}) is outside the holomorphic cone")));
    }
    let (a, b) = (f0z.abs(), f0h.abs());
    Ok(0.5 * (f0z * f0z - f0h * f0h) * (1.0 / (a - b) - 1.0 / (a + b)))
}

/// Observed convergence order from three successive doublings.
pub fn observed_order(coarse: f64, mid: f64, fine: f64) -> f64 {
    ((coarse - mid) / (mid - fine)).abs().log2()
}

/// `phi(cos theta)`, the `W`-pairing of the reduced point over `p(f_theta)`.
pub fn reduced_point_coordinate(f0h: f64, f0z: f64, theta: f64) -> Result<f64> {
    let den = f0h * theta.cos() + f0z;
    if den.abs() <= 1e-12 * (f0h.abs() + f0z.abs()) {
        return Err(Error::NotInRegularSet);
    }
    Ok((2.0 * f0z - 3.0 * (f0z * f0z - f0h * f0h) / den) / 6.0)
}

/// Multiplicity the reduced point `X_{r,sign}` contributes to the restriction
/// to `B`: 1 when `Omega_{m/3 + sign/2, sign}` is an admissible orbit of the
/// image and the central characters agree, 0 otherwise (empty reductions
/// included).
pub fn quantize_point(ds: &DiscreteSeriesParam, m: i64, sign: Sign) -> u64 {
    let Some(orbit) = ReprLabel::b(m, sign).orbit() else {
        return 0;
    };
    let image = admissible_orbits_in_image(ds);
    let in_image = image.finite.contains(&orbit)
        || image.families.iter().any(|f| match &orbit {
            OrbitDescriptor::B { r, sign: s } if *s == f.sign => {
                let k = (r - &f.start) / &f.step;
                k.is_integer() && !k.is_negative()
            }
            _ => false,
        });
    if in_image && central_character_selects(ds, m) {
        1
    } else {
        0
    }
}

/// Labels `(m, sign)` of the admissible orbits in the image, families cut at `n_max` terms.
pub fn image_labels(ds: &DiscreteSeriesParam, n_max: usize) -> Vec<(i64, Sign)> {
    admissible_orbits_in_image(ds)
        .take(n_max)
        .iter()
        .filter_map(orbit_to_repr)
        .filter_map(|l| l.m.map(|m| (m, l.sign)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_coordinate_at_pole() {
        assert!((reduced_point_coordinate(2.0, -6.0, 0.0).unwrap() - 2.0).abs() < 1e-14);
        let theta = (-1.0f64 / 3.0).acos();
        assert!(matches!(reduced_point_coordinate(3.0, 1.0, theta), Err(Error::NotInRegularSet)));
    }

    #[test]
    fn simpson_volume() {
        let v = reduced_volume(2.0, -6.0, 2000).unwrap();
        assert!((v - 2.0).abs() < 1e-8, "{v}");
        assert!(reduced_volume(3.0, 1.0, 100).is_err());
    }
}
