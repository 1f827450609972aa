//! The first-order systems `D±_m`:
//! `y'(t) = (t^-1 A + t^-2 B + t^-3 C) y(t)` on `t > 0`, their `z = 1/t`
//! form `z x'(z) = (M0 + M1 z + M2 z^2) x(z)` and the closed-form spectrum
//! of `M0`.

use serde::Serialize;

use crate::discrete_series::{DiscreteSeriesParam, DsClass};
use crate::linalg::CMat;
use crate::{Error, Result, Sign, C64};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OdeSystem {
    pub f0h: i64,
    pub f0z: i64,
    pub m: i64,
    pub sign: Sign,
    #[serde(serialize_with = "ser_mat")]
    pub a: CMat,
    #[serde(serialize_with = "ser_mat")]
    pub b: CMat,
    #[serde(serialize_with = "ser_mat")]
    pub c: CMat,
}

impl OdeSystem {
    pub fn size(&self) -> usize {
        self.a.nrows()
    }

    /// `m >= f0H`.
    pub fn is_large(&self) -> bool {
        self.m >= self.f0h
    }

    /// Right-hand side matrix `t^-1 A + t^-2 B + t^-3 C`.
    pub fn t_matrix(&self, t: f64) -> CMat {
        let it = C64::from(1.0 / t);
        &self.a * it + &self.b * (it * it) + &self.c * (it * it * it)
    }
}

/// Row-major `[[ [re, im], ... ], ...]`.
fn ser_mat<S: serde::Serializer>(m: &CMat, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.nrows()))?;
    for i in 0..m.nrows() {
        let row: Vec<[f64; 2]> = (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect();
        seq.serialize_element(&row)?;
    }
    seq.end()
}

/// Size of `D±_m`: `2 f0H` when `m >= f0H`, `2m + 1` otherwise.
pub fn system_size(f0h: i64, m: i64) -> usize {
    if m >= f0h {
        2 * f0h as usize
    } else {
        2 * m as usize + 1
    }
}

fn a_block(f0h: i64, f0z: i64, n: i64, sign: Sign) -> [[C64; 2]; 2] {
    let k = (n + 1) as f64;
    let (h, z) = (f0h as f64, f0z as f64);
    let s2 = std::f64::consts::SQRT_2;
    match sign {
        Sign::Minus => {
            let d = k + (z - h) / 2.0;
            [[C64::from(-d), C64::new(0.0, s2 * k)], [C64::new(0.0, -s2 * (h - k)), C64::from(d)]]
        }
        Sign::Plus => {
            let d = (z + h) / 2.0 - k;
            [[C64::from(d), C64::new(0.0, -s2 * k)], [C64::new(0.0, s2 * (h - k)), C64::from(-d)]]
        }
    }
}

/// Assemble `D±_m` for a parameter of class `Neither`.
pub fn build_system(ds: &DiscreteSeriesParam, m: i64, sign: Sign) -> Result<OdeSystem> {
    if ds.class != DsClass::Neither {
        return Err(Error::InvalidParameter(format!(
            "systems D±_m are built for the non-holomorphic class only; got {:?} (use holomorphic_kernel_dims)",
            ds.class
        )));
    }
    if m < 0 {
        return Err(Error::InvalidParameter(format!("m = {m} must be non-negative")));
    }
    let (h, z) = (ds.f0h, ds.f0z);
    let l = system_size(h, m);
    let large = m >= h;
    let mut a = CMat::zeros(l, l);
    let mut b = CMat::zeros(l, l);
    let mut c = CMat::zeros(l, l);
    let r_minus = (z - h) as f64 / 2.0;
    let r_plus = -(z + h) as f64 / 2.0;
    let (r, s) = match sign {
        Sign::Minus => (r_minus, r_plus),
        Sign::Plus => (r_plus, r_minus),
    };
    a[(0, 0)] = C64::from(r);
    let a_blocks = if large { h - 1 } else { m };
    for n in 0..a_blocks {
        let i = 1 + 2 * n as usize;
        let blk = a_block(h, z, n, sign);
        for (p, row) in blk.iter().enumerate() {
            for (q, v) in row.iter().enumerate() {
                a[(i + p, i + q)] = *v;
            }
        }
    }
    if large {
        a[(l - 1, l - 1)] = C64::from(s);
    }
    let bc_blocks = if large { h } else { m };
    let e = sign.as_f64();
    for n in 0..bc_blocks {
        let i = 2 * n as usize;
        b[(i, i + 1)] = C64::from(e);
        b[(i + 1, i)] = C64::from(e * 2.0 * (m - n) as f64);
        c[(i, i)] = C64::from(-1.0);
        c[(i + 1, i + 1)] = C64::from(1.0);
    }
    if !large {
        c[(l - 1, l - 1)] = C64::from(-1.0);
    }
    Ok(OdeSystem { f0h: h, f0z: z, m, sign, a, b, c })
}

/// `(M0, M1, M2) = (-A, -B, -C)`: with `x(z) = y(1/z)`,
/// `z x'(z) = (M0 + M1 z + M2 z^2) x(z)`.
pub fn to_z_variable(sys: &OdeSystem) -> (CMat, CMat, CMat) {
    (-&sys.a, -&sys.b, -&sys.c)
}

/// An eigenvalue `±sqrt(square)` with integer radicand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Surd {
    pub negative: bool,
    pub square: i64,
}

impl Surd {
    pub fn value(&self) -> f64 {
        let v = (self.square as f64).sqrt();
        if self.negative {
            -v
        } else {
            v
        }
    }
}

/// Eigenvalues of `M0 = -A±_m` in closed form. With `a = (f0H - f0Z)/2`,
/// `b = (f0H + f0Z)/2` and `k = n + 1`, the scalar entries contribute `a`
/// and `b` and each block contributes `±sqrt(a^2 + b^2 - (k - c)^2)` where
/// `c = b` for `D-` and `c = a` for `D+`.
pub fn closed_form_spectrum_exact(ds: &DiscreteSeriesParam, m: i64, sign: Sign) -> Vec<Surd> {
    let a = (ds.f0h - ds.f0z) / 2;
    let b = (ds.f0h + ds.f0z) / 2;
    let large = m >= ds.f0h;
    let (lead, trail, shift) = match sign {
        Sign::Minus => (a, b, b),
        Sign::Plus => (b, a, a),
    };
    let scalar = |x: i64| Surd { negative: x < 0, square: x * x };
    let mut out = vec![scalar(lead)];
    let blocks = if large { ds.f0h - 1 } else { m };
    for n in 0..blocks {
        let k = n + 1;
        let sq = a * a + b * b - (k - shift) * (k - shift);
        out.push(Surd { negative: false, square: sq });
        out.push(Surd { negative: true, square: sq });
    }
    if large {
        out.push(scalar(trail));
    }
    out
}

pub fn closed_form_spectrum(ds: &DiscreteSeriesParam, m: i64, sign: Sign) -> Vec<f64> {
    closed_form_spectrum_exact(ds, m, sign).iter().map(Surd::value).collect()
}

/// Kernel dimensions `(h0_minus, h0_plus)` in the holomorphic case, where
/// every component solves a scalar equation with solution
/// `t^((f0H+f0Z)/2 - n) exp(t^-2 / 2)`: nothing is square integrable on the
/// minus side and the plus side contributes `f0H` vectors.
pub fn holomorphic_kernel_dims(ds: &DiscreteSeriesParam) -> Result<(u64, u64)> {
    match ds.class {
        DsClass::Holo | DsClass::AntiHolo => Ok((0, ds.f0h as u64)),
        DsClass::Neither => Err(Error::InvalidParameter("holomorphic_kernel_dims needs a (anti)holomorphic parameter".into())),
    }
}

/// CSV dump: header `matrix,row,col,re,im`, one line per entry, row-major.
pub fn to_csv(sys: &OdeSystem) -> String {
    let mut out = String::from("matrix,row,col,re,im\n");
    for (name, m) in [("A", &sys.a), ("B", &sys.b), ("C", &sys.c)] {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out.push_str(&format!("{name},{i},{j},{},{}\n", m[(i, j)].re, m[(i, j)].im));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let ds = DiscreteSeriesParam::new(2, 0).unwrap();
        let s = build_system(&ds, 0, Sign::Minus).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.a[(0, 0)], C64::from(-1.0));
        assert_eq!(s.b[(0, 0)], C64::from(0.0));
        assert_eq!(s.c[(0, 0)], C64::from(-1.0));
        let s = build_system(&ds, 2, Sign::Minus).unwrap();
        assert_eq!(s.size(), 4);
        assert_eq!(s.a[(1, 2)], C64::new(0.0, std::f64::consts::SQRT_2));
        assert_eq!(s.a[(2, 1)], C64::new(0.0, -std::f64::consts::SQRT_2));
        assert_eq!(s.a[(1, 1)], C64::from(0.0));
        assert_eq!(s.a[(3, 3)], C64::from(-1.0));
        let ds = DiscreteSeriesParam::new(3, 1).unwrap();
        let s = build_system(&ds, 5, Sign::Plus).unwrap();
        assert_eq!(s.size(), 6);
        assert_eq!(s.a[(0, 0)], C64::from(-2.0));
        assert_eq!(s.a[(5, 5)], C64::from(-1.0));
    }

    #[test]
    fn holo_rejected() {
        let ds = DiscreteSeriesParam::new(2, -6).unwrap();
        assert!(matches!(build_system(&ds, 0, Sign::Minus), Err(Error::InvalidParameter(_))));
        assert_eq!(holomorphic_kernel_dims(&ds).unwrap(), (0, 2));
    }
}
