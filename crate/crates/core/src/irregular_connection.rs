//! Behaviour of `D±_m` at `z = infinity` and the global count of solutions
//! that are square integrable on the whole half-line.
//!
//! In the `z` variable the system reads `z x' = z^2 (M2 + z^-1 M1 + z^-2 M0) x`
//! with `M2 = -C` diagonal in `{+1, -1}`. After permuting the `+1` entries
//! first, a formal transform `x = T(z) w`, `T = I + sum_n T_n z^-n` with
//! block-off-diagonal `T_n`, reduces it to `z w' = z^2 H(z) w` with `H`
//! block diagonal. The first block grows like `exp(z^2/2)`, the second
//! decays like `exp(-z^2/2)`.
//!
//! Matching powers of `z^-n` gives, with `E_n = M1~ T_{n-1} + (M0~ + (n-2)) T_{n-2}
//! - sum_{k=1}^{n-1} T_k H_{n-k}`, the split `H_n = diag blocks of E_n`,
//! `T_n^12 = -E_n^12 / 2`, `T_n^21 = E_n^21 / 2`.

use rayon::prelude::*;
use serde::Serialize;

use crate::discrete_series::{branch_to_b, DiscreteSeriesParam, DsClass};
use crate::integrate::{propagate_polynomial, ScaledFrame};
use crate::linalg::{singular_values_c, CMat};
use crate::ode_builder::{build_system, holomorphic_kernel_dims, to_z_variable, OdeSystem};
use crate::regular_singular::{l2_basis_with_retry, reduce_series, ReductionOptions, RegularSingularData};
use crate::{Error, Result, Sign, C64};

#[derive(Debug, Clone)]
pub struct InfinitySplitting {
    /// `perm[i]` is the original index placed at position `i`.
    pub permutation: Vec<usize>,
    /// Size of the growing block (`C = -1` entries).
    pub growing: usize,
    /// `T_1, ..., T_J`.
    pub t_series: Vec<CMat>,
    /// `H_0, ..., H_J` (block diagonal).
    pub h_series: Vec<CMat>,
}

impl InfinitySplitting {
    pub fn size(&self) -> usize {
        self.permutation.len()
    }

    pub fn decaying(&self) -> usize {
        self.size() - self.growing
    }

    /// Diagonal block `H^11_n` (`first = true`) or `H^22_n`.
    pub fn h_block(&self, n: usize, first: bool) -> CMat {
        let (p, l) = (self.growing, self.size());
        let h = &self.h_series[n];
        if first {
            h.view((0, 0), (p, p)).into_owned()
        } else {
            h.view((p, p), (l - p, l - p)).into_owned()
        }
    }

    /// `T(z) = I + sum_n T_n z^-n`.
    pub fn t_at(&self, z: f64) -> CMat {
        let l = self.size();
        let mut acc = CMat::identity(l, l);
        let mut zp = 1.0;
        for t in &self.t_series {
            zp /= z;
            acc += t * C64::from(zp);
        }
        acc
    }

    /// Rows of a matrix in permuted order.
    pub fn permute_rows(&self, x: &CMat) -> CMat {
        CMat::from_fn(x.nrows(), x.ncols(), |r, c| x[(self.permutation[r], c)])
    }
}

fn permute(m: &CMat, perm: &[usize]) -> CMat {
    CMat::from_fn(m.nrows(), m.ncols(), |r, c| m[(perm[r], perm[c])])
}

/// Formal block splitting at infinity up to order `order`.
pub fn split_at_infinity(sys: &OdeSystem, order: usize) -> Result<InfinitySplitting> {
    let (m0, m1, m2) = to_z_variable(sys);
    split_polynomial(&m0, &m1, &m2, order)
}

/// Splitting for `z x' = (M0 + M1 z + M2 z^2) x` with `M2` diagonal in `{+1, -1}`.
pub fn split_polynomial(m0: &CMat, m1: &CMat, m2: &CMat, order: usize) -> Result<InfinitySplitting> {
    let l = m0.nrows();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for i in 0..l {
        for j in 0..l {
            if i != j && m2[(i, j)].norm() > 0.0 {
                return Err(Error::InvalidParameter("leading coefficient at infinity must be diagonal".into()));
            }
        }
        let v = m2[(i, i)];
        if (v - C64::from(1.0)).norm() < 1e-12 {
            plus.push(i);
        } else if (v + C64::from(1.0)).norm() < 1e-12 {
            minus.push(i);
        } else {
            return Err(Error::InvalidParameter(format!("leading eigenvalue {v} is not +1 or -1")));
        }
    }
    let p = plus.len();
    let perm: Vec<usize> = plus.into_iter().chain(minus).collect();
    let a = permute(m0, &perm);
    let b = permute(m1, &perm);
    let c = permute(m2, &perm);
    let mut t: Vec<CMat> = vec![CMat::identity(l, l)];
    let mut h: Vec<CMat> = vec![c];
    for n in 1..=order {
        let mut e = &b * &t[n - 1];
        if n >= 2 {
            e += (&a + CMat::identity(l, l) * C64::from(n as f64 - 2.0)) * &t[n - 2];
        }
        for k in 1..n {
            e -= &t[k] * &h[n - k];
        }
        let mut hn = CMat::zeros(l, l);
        let mut tn = CMat::zeros(l, l);
        for i in 0..l {
            for j in 0..l {
                match (i < p, j < p) {
                    (true, true) | (false, false) => hn[(i, j)] = e[(i, j)],
                    (true, false) => tn[(i, j)] = e[(i, j)] * C64::from(-0.5),
                    (false, true) => tn[(i, j)] = e[(i, j)] * C64::from(0.5),
                }
            }
        }
        t.push(tn);
        h.push(hn);
    }
    t.remove(0);
    Ok(InfinitySplitting { permutation: perm, growing: p, t_series: t, h_series: h })
}

/// Numerical settings of the global computation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConnectionConfig {
    pub z0: f64,
    pub z1: f64,
    /// Relative rank threshold.
    pub rank_tol: f64,
    /// Relative truncation tolerance of the propagator.
    pub integration_tol: f64,
    /// Order of the formal transform at infinity.
    pub order: usize,
    /// Accepted remainder of the series at `z0`.
    pub series_tol: f64,
}

impl Default for ConnectionConfig {
    fn default() -> Self {
        ConnectionConfig { z0: 0.1, z1: 8.0, rank_tol: 1e-6, integration_tol: 1e-12, order: 12, series_tol: 1e-13 }
    }
}

/// Required separation at the rank cut.
pub const RANK_GAP: f64 = 1e3;
/// The fallback frame is taken at `FALLBACK_FACTOR * z1`.
pub const FALLBACK_FACTOR: f64 = 1.2;

#[derive(Debug, Clone, Serialize)]
pub struct GlobalDimension {
    pub dim: usize,
    /// Number of solutions square integrable near 0.
    pub basis_dim: usize,
    pub rank: usize,
    /// Singular values of the growing-coefficient matrix, divided by the largest.
    pub rank_spectrum: Vec<f64>,
    pub fallback_rank: usize,
    pub fallback_spectrum: Vec<f64>,
    /// `|G(1.2 z1)| / |G(z1)|` after stripping the envelopes; close to 1.
    pub envelope_ratio: f64,
    pub z0: f64,
    pub z1: f64,
    pub steps: usize,
}

/// Fundamental solution of the growing block after the scalar envelope
/// `exp(z^2/2 + c z)` is removed, `c` being the (scalar) `H^11_1`.
///
/// The remaining block `Psi' = (H_2/z + H_3/z^2 + ...) Psi` is regular
/// singular at infinity; in `u = 1/z` it reads `u Psi_u = -(H_2 + H_3 u + ...) Psi`.
/// Its exponents can differ by integers, so a diagonal `z^H2` strip leaves
/// polynomially growing cross terms and the full `Psi` is needed.
pub struct GrowingEnvelope {
    pub linear: C64,
    pub reduced: RegularSingularData,
}

impl GrowingEnvelope {
    pub fn new(split: &InfinitySplitting) -> Result<Self> {
        let p = split.growing;
        let h1 = split.h_block(1, true);
        let linear = if p > 0 { h1[(0, 0)] } else { C64::from(0.0) };
        if (h1 - CMat::identity(p, p) * linear).iter().any(|v| v.norm() > 1e-12) {
            return Err(Error::InvalidParameter("first-order term of the growing block is not scalar".into()));
        }
        let coeffs: Vec<CMat> = (2..split.h_series.len()).map(|n| -split.h_block(n, true)).collect();
        let reduced = reduce_series(&coeffs, &ReductionOptions::default())?;
        Ok(GrowingEnvelope { linear, reduced })
    }

    /// `Psi(z)`.
    pub fn psi(&self, z: f64) -> CMat {
        self.reduced.fundamental(1.0 / z)
    }
}

/// Growing coefficients at `z` of the frame `x` with the envelope removed,
/// and the log of the removed scalar factor.
fn growing_coefficients(split: &InfinitySplitting, env: &GrowingEnvelope, frame: &ScaledFrame, z: f64) -> Result<(CMat, f64)> {
    let x = split.permute_rows(&frame.unscaled());
    let w = split.t_at(z).lu().solve(&x).ok_or_else(|| Error::Numeric(format!("T({z}) is singular")))?;
    let p = split.growing;
    let g = w.rows(0, p).into_owned();
    let c = env.psi(z).lu().solve(&g).ok_or_else(|| Error::Numeric(format!("growing fundamental matrix singular at {z}")))?;
    Ok((c, frame.log_scale - z * z / 2.0 - (env.linear * z).re))
}

/// Rows and columns of the growing-coefficient matrix below this fraction of
/// the largest are integration noise and are zeroed before equilibration.
pub const NOISE_FLOOR: f64 = 1e-10;

/// Alternate row and column scaling to unit Euclidean norm. Rank is
/// unchanged; the arbitrary normalisations of the bases at both ends are
/// removed from the singular values.
pub fn equilibrate(g: &CMat) -> CMat {
    let mut g = g.clone();
    let big = (0..g.ncols()).map(|c| g.column(c).norm()).fold(0.0, f64::max);
    for r in 0..g.nrows() {
        if g.row(r).norm() <= NOISE_FLOOR * big {
            g.row_mut(r).fill(C64::from(0.0));
        }
    }
    for c in 0..g.ncols() {
        if g.column(c).norm() <= NOISE_FLOOR * big {
            g.column_mut(c).fill(C64::from(0.0));
        }
    }
    for _ in 0..50 {
        let mut change: f64 = 0.0;
        for r in 0..g.nrows() {
            let n = g.row(r).norm();
            if n > 0.0 {
                g.row_mut(r).unscale_mut(n);
                change = change.max((n.ln()).abs());
            }
        }
        for c in 0..g.ncols() {
            let n = g.column(c).norm();
            if n > 0.0 {
                g.column_mut(c).unscale_mut(n);
                change = change.max((n.ln()).abs());
            }
        }
        if change < 1e-6 {
            break;
        }
    }
    g
}

fn rank_with_gap(sv: &[f64], tol: f64) -> (usize, Vec<f64>, bool) {
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return (0, sv.to_vec(), false);
    }
    let rel: Vec<f64> = sv.iter().map(|s| s / smax).collect();
    let r = rel.iter().filter(|&&s| s > tol).count();
    let ambiguous = r > 0 && r < rel.len() && rel[r - 1] / rel[r].max(f64::MIN_POSITIVE) < RANK_GAP;
    (r, rel, ambiguous)
}

/// `dim` of the solutions square integrable on `(0, infinity)` for `dz/z`.
pub fn global_l2_dimension(sys: &OdeSystem, cfg: &ConnectionConfig) -> Result<GlobalDimension> {
    let (m0, m1, m2) = to_z_variable(sys);
    global_l2_dimension_polynomial(&[m0, m1, m2], cfg)
}

pub fn global_l2_dimension_polynomial(m: &[CMat; 3], cfg: &ConnectionConfig) -> Result<GlobalDimension> {
    if !(cfg.z0 > 0.0 && cfg.z1 > cfg.z0 && cfg.rank_tol > 0.0 && cfg.integration_tol > 0.0) {
        return Err(Error::InvalidParameter(format!("invalid connection settings {cfg:?}")));
    }
    let (_, basis) = l2_basis_with_retry(m, cfg.z0, cfg.series_tol, &ReductionOptions::default())?;
    let k = basis.ncols();
    let split = split_polynomial(&m[0], &m[1], &m[2], cfg.order)?;
    if k == 0 || split.growing == 0 {
        return Ok(GlobalDimension {
            dim: k,
            basis_dim: k,
            rank: 0,
            rank_spectrum: Vec::new(),
            fallback_rank: 0,
            fallback_spectrum: Vec::new(),
            envelope_ratio: 1.0,
            z0: cfg.z0,
            z1: cfg.z1,
            steps: 0,
        });
    }
    // Columns are rescaled to unit length; the span is what matters.
    let mut b = basis.clone();
    for c in 0..k {
        let n = b.column(c).norm();
        b.column_mut(c).unscale_mut(n);
    }
    let h_max = 0.5;
    let start = ScaledFrame::new(&b);
    let (f1, s1) = propagate_polynomial(m, &start, cfg.z0, cfg.z1, cfg.integration_tol, h_max)?;
    let z2 = FALLBACK_FACTOR * cfg.z1;
    let (f2, s2) = propagate_polynomial(m, &f1, cfg.z1, z2, cfg.integration_tol, h_max)?;
    let env = GrowingEnvelope::new(&split)?;
    let (g1, log1) = growing_coefficients(&split, &env, &f1, cfg.z1)?;
    let (g2, log2) = growing_coefficients(&split, &env, &f2, z2)?;
    let sv1 = singular_values_c(&equilibrate(&g1));
    let sv2 = singular_values_c(&equilibrate(&g2));
    let (rank, spec1, amb1) = rank_with_gap(&sv1, cfg.rank_tol);
    let (fallback_rank, spec2, amb2) = rank_with_gap(&sv2, cfg.rank_tol);
    let n1 = sv1.first().copied().unwrap_or(0.0);
    let n2 = sv2.first().copied().unwrap_or(0.0);
    let envelope_ratio = if n1 > 0.0 { (n2.ln() + log2 - n1.ln() - log1).exp() } else { f64::NAN };
    if amb1 || amb2 || rank != fallback_rank {
        let mut spectrum = spec1;
        spectrum.extend(spec2);
        return Err(Error::AmbiguousRank { spectrum });
    }
    Ok(GlobalDimension {
        dim: k - rank,
        basis_dim: k,
        rank,
        rank_spectrum: spec1,
        fallback_rank,
        fallback_spectrum: spec2,
        envelope_ratio,
        z0: cfg.z0,
        z1: cfg.z1,
        steps: s1.steps + s2.steps,
    })
}

/// One computed summand of the `B`-decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct DimensionRecord {
    #[serde(rename = "f0H")]
    pub f0h: i64,
    #[serde(rename = "f0Z")]
    pub f0z: i64,
    pub m: i64,
    pub sign: Sign,
    pub dim: usize,
    pub details: DimensionDetails,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimensionDetails {
    pub rank_spectrum: Vec<f64>,
    pub z0: f64,
    pub z1: f64,
}

/// Label index of the summand fed by `D±_m`: `D-_m -> T_{3m - (3f0H+f0Z)/2, +}`,
/// `D+_m -> T_{-(3m - (3f0H-f0Z)/2), -}`.
pub fn label_of_system(ds: &DiscreteSeriesParam, m: i64, sign: Sign) -> (i64, Sign) {
    match sign {
        Sign::Minus => (3 * m - ds.minus_start(), Sign::Plus),
        Sign::Plus => (-(3 * m - ds.plus_start()), Sign::Minus),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DiffEntry {
    pub m: i64,
    pub sign: Sign,
    pub expected: u64,
    pub computed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    #[serde(rename = "f0H")]
    pub f0h: i64,
    #[serde(rename = "f0Z")]
    pub f0z: i64,
    pub class: DsClass,
    pub records: Vec<DimensionRecord>,
    /// Holomorphic case: `(h0_minus, h0_plus)` from the closed-form solutions.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holomorphic_kernels: Option<(u64, u64)>,
    pub diff: Vec<DiffEntry>,
}

/// Dimensions for `m` in `ms` and both signs, computed in parallel and
/// returned in parameter order.
pub fn dimension_table(ds: &DiscreteSeriesParam, ms: &[i64], signs: &[Sign], cfg: &ConnectionConfig) -> Result<Vec<DimensionRecord>> {
    let jobs: Vec<(i64, Sign)> = ms.iter().flat_map(|&m| signs.iter().map(move |&s| (m, s))).collect();
    jobs.par_iter()
        .map(|&(m, sign)| {
            let sys = build_system(ds, m, sign)?;
            let g = global_l2_dimension(&sys, cfg)?;
            Ok(DimensionRecord {
                f0h: ds.f0h,
                f0z: ds.f0z,
                m,
                sign,
                dim: g.dim,
                details: DimensionDetails { rank_spectrum: g.rank_spectrum, z0: g.z0, z1: g.z1 },
            })
        })
        .collect()
}

/// Assemble the `B`-decomposition from computed dimensions for `m <= m_max`
/// and compare it with the branching table on the same index window.
pub fn verify_thm_6_8_consistency(ds: &DiscreteSeriesParam, m_max: i64, cfg: &ConnectionConfig) -> Result<ConsistencyReport> {
    if ds.class != DsClass::Neither {
        let kernels = holomorphic_kernel_dims(ds)?;
        let mut diff = Vec::new();
        let expected = crate::discrete_series::branch_to_b1(ds);
        let want = match expected.entries.first().map(|e| e.mult) {
            Some(crate::discrete_series::Mult::Finite(n)) => n,
            _ => 0,
        };
        if kernels.1 != want || kernels.0 != 0 {
            diff.push(DiffEntry { m: 0, sign: expected.entries[0].sign, expected: want, computed: kernels.1 });
        }
        return Ok(ConsistencyReport {
            f0h: ds.f0h,
            f0z: ds.f0z,
            class: ds.class,
            records: Vec::new(),
            holomorphic_kernels: Some(kernels),
            diff,
        });
    }
    let ms: Vec<i64> = (0..=m_max).collect();
    let records = dimension_table(ds, &ms, &[Sign::Minus, Sign::Plus], cfg)?;
    let table = branch_to_b(ds, 0);
    let mut diff = Vec::new();
    for r in &records {
        let (label, lsign) = label_of_system(ds, r.m, r.sign);
        let expected = table.multiplicity(label, lsign);
        if expected != r.dim as u64 {
            diff.push(DiffEntry { m: label, sign: lsign, expected, computed: r.dim as u64 });
        }
    }
    // Labels of the table inside the window that no system produced.
    for fam in &table.infinite_families {
        for label in fam.iter().take(m_max as usize + 1) {
            let hit = records.iter().any(|r| label_of_system(ds, r.m, r.sign) == (label, fam.sign));
            if !hit {
                diff.push(DiffEntry { m: label, sign: fam.sign, expected: 1, computed: 0 });
            }
        }
    }
    Ok(ConsistencyReport { f0h: ds.f0h, f0z: ds.f0z, class: ds.class, records, holomorphic_kernels: None, diff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_sizes() {
        let ds = DiscreteSeriesParam::new(2, 0).unwrap();
        let s = split_at_infinity(&build_system(&ds, 2, Sign::Minus).unwrap(), 12).unwrap();
        assert_eq!(s.decaying(), 2);
        let ds = DiscreteSeriesParam::new(3, 1).unwrap();
        let s = split_at_infinity(&build_system(&ds, 2, Sign::Minus).unwrap(), 12).unwrap();
        assert_eq!(s.decaying(), 2);
    }

    #[test]
    fn scalar_dimension() {
        let ds = DiscreteSeriesParam::new(2, 0).unwrap();
        let g = global_l2_dimension(&build_system(&ds, 0, Sign::Minus).unwrap(), &ConnectionConfig::default()).unwrap();
        assert_eq!((g.basis_dim, g.rank, g.dim), (1, 1, 0));
    }

    #[test]
    fn large_m_dimension_one() {
        let ds = DiscreteSeriesParam::new(3, 1).unwrap();
        let g = global_l2_dimension(&build_system(&ds, 4, Sign::Minus).unwrap(), &ConnectionConfig::default()).unwrap();
        assert_eq!((g.basis_dim, g.rank, g.dim), (4, 3, 1), "{g:?}");
        let g = global_l2_dimension(&build_system(&ds, 2, Sign::Plus).unwrap(), &ConnectionConfig::default()).unwrap();
        assert_eq!((g.basis_dim, g.rank, g.dim), (3, 3, 0), "{g:?}");
    }

    fn c(x: f64) -> C64 {
        C64::from(x)
    }

    #[test]
    fn coupled_decaying_solution_is_found() {
        // z x' = [[1 - z^2, 0], [z, 1 + z^2]] x has the solution
        // x1 = z exp(-z^2/2), x2 = -z exp(z^2/2) int_z^inf exp(-s^2) ds,
        // square integrable at both ends. The other one grows.
        let m0 = CMat::identity(2, 2);
        let m1 = CMat::from_row_slice(2, 2, &[c(0.0), c(0.0), c(1.0), c(0.0)]);
        let m2 = CMat::from_row_slice(2, 2, &[c(-1.0), c(0.0), c(0.0), c(1.0)]);
        let g = global_l2_dimension_polynomial(&[m0, m1, m2], &ConnectionConfig::default()).unwrap();
        assert_eq!((g.basis_dim, g.rank, g.dim), (2, 1, 1), "{g:?}");
    }

    #[test]
    fn equilibration_keeps_zero_columns() {
        let g = CMat::from_row_slice(1, 2, &[c(1e-17), c(3.0)]);
        let e = equilibrate(&g);
        assert_eq!(e[(0, 0)], c(0.0));
        assert!((e[(0, 1)] - c(1.0)).norm() < 1e-12);
    }
}
