//! Strongly regular coadjoint orbits of `B` and `B1`, admissibility, and the
//! dictionary between orbits and representation labels.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::lie_su21::{frac, BasisTag, DualForm, Scalar};
use crate::{q, Sign, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Group {
    G,
    B,
    B1,
}

/// A strongly regular orbit with its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OrbitDescriptor {
    /// `G`-orbit through `f0H H* + f0Z Z*`.
    G { f0h: Q, f0z: Q },
    /// `Omega_{r,sign}`.
    B { r: Q, sign: Sign },
    /// `Omega^sign`.
    B1 { sign: Sign },
}

impl OrbitDescriptor {
    pub fn group(&self) -> Group {
        match self {
            OrbitDescriptor::G { .. } => Group::G,
            OrbitDescriptor::B { .. } => Group::B,
            OrbitDescriptor::B1 { .. } => Group::B1,
        }
    }
}

impl std::fmt::Display for OrbitDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OrbitDescriptor::G { f0h, f0z } => write!(f, "G.({f0h} H* + {f0z} Z*)"),
            OrbitDescriptor::B { r, sign } => write!(f, "Omega_{{{r},{sign}}}"),
            OrbitDescriptor::B1 { sign } => write!(f, "Omega^{sign}"),
        }
    }
}

/// Outcome of classifying a form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    Regular(OrbitDescriptor),
    NotStronglyRegular,
}

impl Classification {
    pub fn descriptor(&self) -> Option<&OrbitDescriptor> {
        match self {
            Classification::Regular(d) => Some(d),
            Classification::NotStronglyRegular => None,
        }
    }
}

/// Label `T_{m,sign}` (for `B`) or `T_sign` (for `B1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReprLabel {
    pub group: Group,
    pub m: Option<i64>,
    pub sign: Sign,
}

impl ReprLabel {
    pub fn b(m: i64, sign: Sign) -> Self {
        ReprLabel { group: Group::B, m: Some(m), sign }
    }

    /// Orbit parameter `r = m/3 + sign/2` attached to a `B` label.
    pub fn orbit(&self) -> Option<OrbitDescriptor> {
        let m = self.m?;
        Some(OrbitDescriptor::B { r: q(m, 3) + q(self.sign.as_i64(), 2), sign: self.sign })
    }
}

impl std::fmt::Display for ReprLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.m {
            Some(m) => write!(f, "T_{{{m},{}}}", self.sign),
            None => write!(f, "T_{}", self.sign),
        }
    }
}

/// The invariants `(r, sign z)` of a `b*` form with `z != 0`.
pub fn b_invariants<T: Scalar>(f: &DualForm<T>) -> Option<(T, Sign)> {
    assert_eq!(f.tag, BasisTag::BStar);
    let [w, _s, x, y, z] = <[T; 5]>::try_from(f.coeffs.clone()).ok()?;
    if z.is_zero() {
        return None;
    }
    let r = w + (x.clone() * x + y.clone() * y) / (z.clone() * frac(2, 1));
    let sign = if z.is_positive() { Sign::Plus } else { Sign::Minus };
    Some((r, sign))
}

/// Classify an exact `b*` form: `Omega_{r, sign z}` with `r = w + (x^2+y^2)/(2z)`.
pub fn classify_b_form(f: &DualForm<Q>) -> Classification {
    match b_invariants(f) {
        Some((r, sign)) => Classification::Regular(OrbitDescriptor::B { r, sign }),
        None => Classification::NotStronglyRegular,
    }
}

/// Default denominator bound when turning floating orbit parameters into rationals.
pub const DEFAULT_MAX_DENOMINATOR: i64 = 1_000_000;

/// Classify a floating `b*` form, reconstructing `r` as a rational with
/// denominator at most `max_den`.
pub fn classify_b_form_f64(f: &DualForm<f64>, max_den: i64) -> Classification {
    match b_invariants(f) {
        Some((r, sign)) => Classification::Regular(OrbitDescriptor::B { r: rational_approx(r, max_den), sign }),
        None => Classification::NotStronglyRegular,
    }
}

/// Best rational approximation with bounded denominator (continued fractions).
pub fn rational_approx(x: f64, max_den: i64) -> Q {
    assert!(x.is_finite() && max_den >= 1);
    let (mut h0, mut h1, mut k0, mut k1) = (0i128, 1i128, 1i128, 0i128);
    let mut v = x;
    loop {
        let a = v.floor();
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac_part = v - a;
        if frac_part.abs() < 1e-15 * v.abs().max(1.0) {
            break;
        }
        v = 1.0 / frac_part;
    }
    Q::new(BigInt::from(h1), BigInt::from(k1))
}

/// Classify a `b1*` form by the sign of its `E2` coefficient.
pub fn classify_b1_form<T: Scalar>(f: &DualForm<T>) -> Classification {
    assert_eq!(f.tag, BasisTag::B1Star);
    let z = &f.coeffs[3];
    if z.is_zero() {
        Classification::NotStronglyRegular
    } else {
        let sign = if z.is_positive() { Sign::Plus } else { Sign::Minus };
        Classification::Regular(OrbitDescriptor::B1 { sign })
    }
}

/// `3(r + 1/2)` is an integer.
pub fn b_orbit_admissible(r: &Q) -> bool {
    ((r + q(1, 2)) * q(3, 1)).is_integer()
}

/// `Omega_{r,-} -> T_{3(r+1/2),-}`, `Omega_{r,+} -> T_{3(r-1/2),+}`.
pub fn orbit_to_repr(o: &OrbitDescriptor) -> Option<ReprLabel> {
    match o {
        OrbitDescriptor::B { r, sign } => {
            let m = (r - q(sign.as_i64(), 2)) * q(3, 1);
            if m.is_integer() {
                Some(ReprLabel::b(m.to_integer().to_i64()?, *sign))
            } else {
                None
            }
        }
        OrbitDescriptor::B1 { sign } => Some(ReprLabel { group: Group::B1, m: None, sign: *sign }),
        OrbitDescriptor::G { .. } => None,
    }
}

/// The entire form `g = (m/3) W* + sign E2*` and the admissible form
/// `f = (m/3 + sign/2) W* + sign E2*`, which differ by `sign W*/2`.
pub fn auslander_kostant_translate(m: i64, sign: Sign) -> (DualForm<Q>, DualForm<Q>) {
    let e = q(sign.as_i64(), 1);
    let g = DualForm::b(q(m, 3), Q::zero(), Q::zero(), Q::zero(), e.clone());
    let f = DualForm::b(q(m, 3) + q(sign.as_i64(), 2), Q::zero(), Q::zero(), Q::zero(), e);
    (g, f)
}

/// Parameter `m` read from an entire (Auslander-Kostant) form `(m/3) W* + sign E2*`.
pub fn ak_label(g: &DualForm<Q>) -> Option<ReprLabel> {
    let (r, sign) = b_invariants(g)?;
    let m = r * q(3, 1);
    m.is_integer().then(|| ReprLabel::b(m.to_integer().to_i64().unwrap(), sign))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_reconstruction() {
        assert_eq!(rational_approx(11.0 / 6.0, 1000), q(11, 6));
        assert_eq!(rational_approx(-13.0 / 6.0, 1000), q(-13, 6));
        assert_eq!(rational_approx(2.0, 10), q(2, 1));
        assert_eq!(rational_approx(0.0, 10), q(0, 1));
    }
}
