//! Integrators for linear systems.
//!
//! [`propagate_polynomial`] integrates `z X'(z) = (M0 + M1 z + M2 z^2) X(z)`
//! with local Taylor expansions (the coefficients are entire away from
//! `z = 0`, so the step is bounded by half the distance to the origin).
//! The frame is re-orthonormalized after every step; the triangular factors
//! are multiplied into a running matrix that is kept at unit scale with a
//! separate log-magnitude, so the represented frame is `Q R exp(log_scale)`.
//!
//! [`dopri5`] is a general adaptive Dormand-Prince 5(4) integrator used for
//! independent cross-checks.

use crate::linalg::{fro, thin_qr, CMat, CVec};
use crate::{Error, Result, C64};

/// Frame `Q R exp(log_scale)` with orthonormal `Q` and upper-triangular `R`.
#[derive(Debug, Clone)]
pub struct ScaledFrame {
    pub q: CMat,
    pub r: CMat,
    pub log_scale: f64,
}

impl ScaledFrame {
    pub fn new(x: &CMat) -> Self {
        let (q, r, _) = thin_qr(x);
        let mut f = ScaledFrame { q, r, log_scale: 0.0 };
        f.rescale();
        f
    }

    fn rescale(&mut self) {
        let s = self.r.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if s > 0.0 && s.is_finite() {
            self.r /= C64::from(s);
            self.log_scale += s.ln();
        }
    }

    /// `Q R`, i.e. the frame divided by `exp(log_scale)`.
    pub fn unscaled(&self) -> CMat {
        &self.q * &self.r
    }
}

/// Step statistics of a propagation.
#[derive(Debug, Clone, Default)]
pub struct PropagationStats {
    pub steps: usize,
    pub max_terms: usize,
}

/// Upper bound on Taylor terms per step.
const MAX_TERMS: usize = 400;

/// Advance `x` from `zc` to `zc + h` along `z X' = (M0 + M1 z + M2 z^2) X`.
/// Returns the number of Taylor terms used.
fn taylor_step(m: &[CMat; 3], zc: f64, h: f64, x: &CMat, tol: f64) -> Result<(CMat, usize)> {
    let zcc = C64::from(zc);
    let q0 = &m[0] + &m[1] * zcc + &m[2] * (zcc * zcc);
    let q1 = &m[1] + &m[2] * (zcc * C64::from(2.0));
    let q2 = &m[2];
    let scale = fro(x).max(f64::MIN_POSITIVE);
    let mut c: Vec<CMat> = vec![x.clone()];
    let mut sum = x.clone();
    let mut hp = 1.0;
    let mut small_run = 0;
    for n in 0..MAX_TERMS {
        let mut next = &q0 * &c[n] - &c[n] * C64::from(n as f64);
        if n >= 1 {
            next += &q1 * &c[n - 1];
        }
        if n >= 2 {
            next += q2 * &c[n - 2];
        }
        next /= C64::from(zc * (n + 1) as f64);
        hp *= h;
        let term = &next * C64::from(hp);
        let tn = fro(&term);
        if !tn.is_finite() {
            return Err(Error::Numeric(format!("Taylor step diverged at z = {zc}")));
        }
        sum += term;
        c.push(next);
        // The recurrence has memory three, so require three consecutive small terms.
        if tn <= tol * scale.max(fro(&sum)) {
            small_run += 1;
            if small_run >= 3 {
                return Ok((sum, n + 2));
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::Numeric(format!("Taylor series did not converge in {MAX_TERMS} terms at z = {zc}, h = {h}")))
}

/// Propagate a frame from `z0` to `z1 > z0 > 0`.
///
/// `tol` is the relative truncation tolerance of each Taylor step; the step
/// is at most `min(z/2, h_max)`.
pub fn propagate_polynomial(
    m: &[CMat; 3],
    x0: &ScaledFrame,
    z0: f64,
    z1: f64,
    tol: f64,
    h_max: f64,
) -> Result<(ScaledFrame, PropagationStats)> {
    if !(z0 > 0.0 && z1 > z0) {
        return Err(Error::InvalidParameter(format!("need 0 < z0 < z1, got z0 = {z0}, z1 = {z1}")));
    }
    let mut frame = x0.clone();
    let mut z = z0;
    let mut stats = PropagationStats::default();
    while z < z1 {
        let h = (0.5 * z).min(h_max).min(z1 - z);
        if h < 1e-14 * z {
            return Err(Error::StepUnderflow { z });
        }
        let (qn, terms) = taylor_step(m, z, h, &frame.q, tol)?;
        let (q, r, _) = thin_qr(&qn);
        frame.q = q;
        frame.r = r * &frame.r;
        frame.rescale();
        z += h;
        if z1 - z < 1e-14 * z1 {
            z = z1;
        }
        stats.steps += 1;
        stats.max_terms = stats.max_terms.max(terms);
    }
    Ok((frame, stats))
}

/// Dormand-Prince 5(4) integration of `y' = f(t, y)` from `t0` to `t1`
/// (either direction) with mixed absolute/relative error control.
pub fn dopri5<F>(f: F, t0: f64, y0: &CVec, t1: f64, rtol: f64, atol: f64) -> Result<CVec>
where
    F: Fn(f64, &CVec) -> CVec,
{
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] =
        [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

    let dir = (t1 - t0).signum();
    let span = (t1 - t0).abs();
    let mut t = t0;
    let mut y = y0.clone();
    let mut h = 1e-3 * span.max(1e-12);
    let mut k: Vec<CVec> = Vec::with_capacity(7);
    let mut steps = 0usize;
    while (t1 - t) * dir > 0.0 {
        h = h.min((t1 - t).abs());
        if h < 1e-14 * span.max(t.abs()) {
            return Err(Error::StepUnderflow { z: t });
        }
        k.clear();
        for s in 0..7 {
            let mut ys = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[s][j] != 0.0 {
                    ys += kj * C64::from(dir * h * A[s][j]);
                }
            }
            k.push(f(t + dir * h * C[s], &ys));
        }
        let mut y5 = y.clone();
        let mut err = CVec::zeros(y.len());
        for s in 0..7 {
            y5 += &k[s] * C64::from(dir * h * B5[s]);
            err += &k[s] * C64::from(dir * h * (B5[s] - B4[s]));
        }
        let en = (0..y.len())
            .map(|i| {
                let sc = atol + rtol * y[i].norm().max(y5[i].norm());
                (err[i].norm() / sc).powi(2)
            })
            .sum::<f64>()
            / y.len().max(1) as f64;
        let en = en.sqrt();
        if en <= 1.0 {
            t += dir * h;
            y = y5;
        }
        let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        steps += 1;
        if steps > 10_000_000 {
            return Err(Error::Numeric("dopri5: too many steps".into()));
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_growth() {
        // z x' = (1 + z^2) x has x = z exp(z^2/2).
        let m = [CMat::from_element(1, 1, C64::from(1.0)), CMat::zeros(1, 1), CMat::from_element(1, 1, C64::from(1.0))];
        let (z0, z1): (f64, f64) = (0.1, 6.0);
        let x0 = ScaledFrame::new(&CMat::from_element(1, 1, C64::from(z0 * (z0 * z0 / 2.0).exp())));
        let (f, _) = propagate_polynomial(&m, &x0, z0, z1, 1e-15, 0.5).unwrap();
        let got = f.unscaled()[(0, 0)].norm().ln() + f.log_scale;
        let want = z1.ln() + z1 * z1 / 2.0;
        assert!((got - want).abs() < 1e-11, "{got} {want}");
    }

    #[test]
    fn dopri_exponential() {
        let y0 = CVec::from_element(1, C64::from(1.0));
        let y = dopri5(|_, y| y * C64::new(0.0, 1.0), 0.0, &y0, 3.0, 1e-12, 1e-14).unwrap();
        assert!((y[0] - C64::new(3f64.cos(), 3f64.sin())).norm() < 1e-10);
        let back = dopri5(|_, y| y * C64::new(0.0, 1.0), 3.0, &y, 0.0, 1e-12, 1e-14).unwrap();
        assert!((back[0] - C64::from(1.0)).norm() < 1e-9);
    }
}
