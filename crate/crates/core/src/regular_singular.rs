//! Fundamental solutions at a first-kind singular point `z = 0` of
//! `z Y'(z) = M(z) Y(z)`, `M(z) = M0 + M1 z + M2 z^2`.
//!
//! The pipeline:
//!
//! 1. `S^-1 M0 S = J`, lower-triangular Jordan form whose diagonal has
//!    ascending integer parts `d_1 <= ... <= d_l` (`D = diag(d)`);
//!    eigenvalues whose differences are integers are snapped to a common
//!    fractional part.
//! 2. `P(z) = I + sum P_j z^j` with `(j - ad J) P_j = B_j + Psi_j`, solved on
//!    each eigenspace `E_k = {X : [D, X] = k X}`. For `j != k` the operator is
//!    invertible and `B_j|E_k = 0`; for `j = k` the part of `Psi_j` outside the
//!    image of `ad(D - J)` (Frobenius-orthogonal complement) goes into `B_j`.
//! 3. `P y` solves `z u' = (J + sum_k B_k z^k) u`; the shear `z^D` turns this
//!    into the constant system `L = J - D + sum_k B_k`.
//! 4. `L T = T (Lambda + N)` with `T` unit lower triangular, `Lambda` diagonal
//!    and `N` nilpotent, coupling only equal diagonal entries.
//! 5. `Y(z) = U(z) z^Delta0 z^N` with `Delta0 = D + Lambda` and
//!    `U(z) = S P(z)^-1 z^D T z^-D`.

use nalgebra::DVector;
use serde::Serialize;

use crate::linalg::{eigenvalues_c, fro, svd_c, CMat};
use crate::{Error, Result, C64};

/// Tolerances of the reduction.
#[derive(Debug, Clone, Copy)]
pub struct ReductionOptions {
    /// Eigenvalues closer than this (relative to `max(1, |lambda|)`) form one cluster.
    pub cluster_tol: f64,
    /// Differences within this distance of an integer are treated as resonant.
    pub resonance_tol: f64,
    /// Series truncation order; `None` selects `d + 25`.
    pub truncation: Option<usize>,
}

impl Default for ReductionOptions {
    fn default() -> Self {
        ReductionOptions { cluster_tol: 1e-8, resonance_tol: 1e-8, truncation: None }
    }
}

/// Lower-triangular Jordan data of `M0`.
#[derive(Debug, Clone)]
pub struct JordanForm {
    /// Columns form the Jordan basis.
    pub s: CMat,
    pub s_inv: CMat,
    /// `J = diag(lambda) + subdiagonal ones inside each chain`.
    pub j: CMat,
    /// Diagonal of `J` after snapping.
    pub lambda: Vec<C64>,
    /// Integer parts `d_a = floor(Re lambda_a)`, ascending.
    pub d: Vec<i64>,
    /// Fractional parts `lambda_a - d_a`, shared exactly within a resonance class.
    pub mu: Vec<C64>,
    /// Resonance class of each index.
    pub class: Vec<usize>,
}

/// Output of [`reduce_at_zero`].
#[derive(Debug, Clone)]
pub struct RegularSingularData {
    /// Coefficients `M_0, M_1, ...` of `z Y' = (sum M_i z^i) Y`.
    pub m: Vec<CMat>,
    pub jordan: JordanForm,
    /// Exponents `delta_a` (diagonal of `Delta0`).
    pub delta0: Vec<C64>,
    /// Nilpotent part, strictly lower triangular.
    pub n: CMat,
    /// `U_0, ..., U_K` with `U(z) = sum U_j z^j`.
    pub u_series: Vec<CMat>,
    /// Largest spread `d_a - d_b`.
    pub d: i64,
    /// Non-zero `B_k`, in Jordan coordinates.
    pub b_list: Vec<(usize, CMat)>,
    /// `P_1, ..., P_K`, in Jordan coordinates.
    pub p1_series: Vec<CMat>,
    /// Constant matrix of the sheared system.
    pub l: CMat,
    pub t: CMat,
    /// Diagnostics for selected columns that touch exponents with `Re <= 0`.
    pub flags: Vec<String>,
}

fn floor_int(x: f64, tol: f64) -> i64 {
    (x + tol).floor() as i64
}

/// Smallest right singular vectors of `m`: the last `count` columns of `V`.
fn smallest_right_vectors(m: &CMat, count: usize) -> CMat {
    let v = svd_c(m).v;
    let n = v.ncols();
    v.columns(n - count, count).into_owned()
}

fn singular_values_sorted(m: &CMat) -> Vec<f64> {
    crate::linalg::singular_values_c(m)
}

fn mat_pow(m: &CMat, p: usize) -> CMat {
    let mut out = CMat::identity(m.nrows(), m.ncols());
    for _ in 0..p {
        out = &out * m;
    }
    out
}

/// Orthonormal basis of the part of `cand` (columns) outside `span` (orthonormal columns).
fn complement_in(cand: &CMat, span: &CMat, count: usize) -> CMat {
    let proj = if span.ncols() == 0 { cand.clone() } else { cand - span * (span.adjoint() * cand) };
    if count == 0 {
        return CMat::zeros(cand.nrows(), 0);
    }
    svd_c(&proj).u.columns(0, count).into_owned()
}

fn orthonormalize(m: &CMat) -> CMat {
    if m.ncols() == 0 {
        return m.clone();
    }
    let tol = 1e-10 * fro(m).max(1.0);
    crate::linalg::column_span_c(m, tol)
}

/// Jordan chains `[v, Nv, N^2 v, ...]` of a nilpotent matrix, concatenated.
/// Returns the basis and the chain lengths.
fn jordan_chains(nil: &CMat) -> (CMat, Vec<usize>) {
    let m = nil.nrows();
    let scale = fro(nil).max(1.0);
    // Kernel dimensions of N^i.
    let mut kernels: Vec<CMat> = vec![CMat::zeros(m, 0)];
    let mut dims = vec![0usize];
    for i in 1..=m {
        let p = mat_pow(nil, i);
        let sv = singular_values_sorted(&p);
        let rank = sv.iter().filter(|&&s| s > 1e-6 * scale.powi(i as i32)).count();
        let k = m - rank;
        kernels.push(smallest_right_vectors(&p, k));
        dims.push(k);
        if k == m {
            break;
        }
    }
    let top = dims.len() - 1;
    let mut chains: Vec<(usize, CMat)> = Vec::new();
    for level in (1..=top).rev() {
        let above = if level < top { dims[level + 1] - dims[level] } else { 0 };
        let new_count = (dims[level] - dims[level - 1]).saturating_sub(above);
        if new_count == 0 {
            continue;
        }
        // Span to avoid: ker N^(level-1) and the level-th vectors of longer chains.
        let mut avoid: Vec<DVector<C64>> = (0..kernels[level - 1].ncols()).map(|c| kernels[level - 1].column(c).into_owned()).collect();
        for (len, v) in &chains {
            let w = mat_pow(nil, len - level) * v;
            avoid.push(w.column(0).into_owned());
        }
        let avoid_m = if avoid.is_empty() { CMat::zeros(m, 0) } else { orthonormalize(&CMat::from_columns(&avoid)) };
        let fresh = complement_in(&kernels[level], &avoid_m, new_count);
        for c in 0..fresh.ncols() {
            chains.push((level, fresh.columns(c, 1).into_owned()));
        }
    }
    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(m);
    let mut lengths = Vec::new();
    for (len, v) in &chains {
        let mut w = v.clone();
        for _ in 0..*len {
            cols.push(w.column(0).into_owned());
            w = nil * &w;
        }
        lengths.push(*len);
    }
    (CMat::from_columns(&cols), lengths)
}

struct Cluster {
    mu: C64,
    members: Vec<C64>,
}

/// Lower-triangular Jordan form of `m0` sorted by ascending integer parts.
pub fn jordanize(m0: &CMat, opts: &ReductionOptions) -> Result<JordanForm> {
    let l = m0.nrows();
    let mut ev = eigenvalues_c(m0);
    if ev.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
        return Err(Error::Numeric("non-finite eigenvalue of M0".into()));
    }
    ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
    // Single-linkage clustering.
    let mut clusters: Vec<Cluster> = Vec::new();
    for e in ev {
        let hit = clusters.iter_mut().find(|c| c.members.iter().any(|m| (m - e).norm() <= opts.cluster_tol * m.norm().max(1.0)));
        match hit {
            Some(c) => c.members.push(e),
            None => clusters.push(Cluster { mu: e, members: vec![e] }),
        }
    }
    for c in &mut clusters {
        c.mu = c.members.iter().sum::<C64>() / C64::from(c.members.len() as f64);
    }
    // A defective eigenvalue splits by about sqrt(eps) under roundoff. Two
    // neighbouring clusters are merged when `(M0 - mu)^n`, `n` the combined
    // multiplicity, has `n` singular values at roundoff level: then they
    // span one generalized eigenspace (derogatory or not).
    loop {
        let mut merged = false;
        'outer: for i in 0..clusters.len() {
            for k in i + 1..clusters.len() {
                let (a, b) = (clusters[i].mu, clusters[k].mu);
                if (a - b).norm() > 1e-4 * a.norm().max(1.0) {
                    continue;
                }
                let n = clusters[i].members.len() + clusters[k].members.len();
                let mu = clusters[i].members.iter().chain(&clusters[k].members).sum::<C64>() / C64::from(n as f64);
                let shifted = m0 - CMat::identity(l, l) * mu;
                let scale = fro(&shifted).max(1.0).powi(n as i32);
                let sv = singular_values_sorted(&mat_pow(&shifted, n));
                if sv[l - n] <= 1e-11 * scale {
                    let mut mem = std::mem::take(&mut clusters[k].members);
                    clusters[i].members.append(&mut mem);
                    clusters[i].mu = mu;
                    clusters.remove(k);
                    merged = true;
                    break 'outer;
                }
            }
        }
        if !merged {
            break;
        }
    }
    // Snap resonance classes to a common fractional part.
    let tol_d = opts.resonance_tol;
    let nc = clusters.len();
    let mut class = vec![usize::MAX; nc];
    let mut next_class = 0;
    for i in 0..nc {
        if class[i] != usize::MAX {
            continue;
        }
        class[i] = next_class;
        for k in i + 1..nc {
            let diff = clusters[k].mu - clusters[i].mu;
            if class[k] == usize::MAX && (diff.re - diff.re.round()).abs() < tol_d && diff.im.abs() < tol_d {
                class[k] = next_class;
            }
        }
        next_class += 1;
    }
    let mut fracs = vec![(C64::from(0.0), 0usize); next_class];
    for (i, c) in clusters.iter().enumerate() {
        let d = floor_int(c.mu.re, tol_d);
        fracs[class[i]].0 += c.mu - C64::from(d as f64);
        fracs[class[i]].1 += 1;
    }
    // (lambda, d, mu)
    let snapped: Vec<(C64, i64, C64)> = clusters
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let d = floor_int(c.mu.re, tol_d);
            let (sum, cnt) = fracs[class[i]];
            let mu = sum / C64::from(cnt as f64);
            (C64::from(d as f64) + mu, d, mu)
        })
        .collect();
    let mut order: Vec<usize> = (0..nc).collect();
    order.sort_by(|&a, &b| snapped[a].1.cmp(&snapped[b].1).then(snapped[a].0.im.partial_cmp(&snapped[b].0.im).unwrap()));

    let mut cols: Vec<DVector<C64>> = Vec::with_capacity(l);
    let mut lambda = Vec::with_capacity(l);
    let mut d = Vec::with_capacity(l);
    let mut mu = Vec::with_capacity(l);
    let mut cls = Vec::with_capacity(l);
    let mut j = CMat::zeros(l, l);
    for &ci in &order {
        let c = &clusters[ci];
        let mult = c.members.len();
        let shifted = m0 - CMat::identity(l, l) * c.mu;
        let v = smallest_right_vectors(&mat_pow(&shifted, mult), mult);
        let restricted = v.adjoint() * &shifted * &v;
        let (chains, lengths) = jordan_chains(&restricted);
        let basis = &v * chains;
        let start = cols.len();
        let mut pos = start;
        for len in lengths {
            for t in 0..len {
                if t + 1 < len {
                    j[(pos + t + 1, pos + t)] = C64::from(1.0);
                }
            }
            pos += len;
        }
        for k in 0..mult {
            cols.push(basis.column(k).into_owned());
            lambda.push(snapped[ci].0);
            d.push(snapped[ci].1);
            mu.push(snapped[ci].2);
            cls.push(class[ci]);
        }
    }
    for a in 0..l {
        j[(a, a)] = lambda[a];
    }
    let s = CMat::from_columns(&cols);
    let s_inv = s.clone().try_inverse().ok_or_else(|| Error::Numeric("Jordan basis is singular".into()))?;
    Ok(JordanForm { s, s_inv, j, lambda, d, mu, class: cls })
}

/// Series inverse of `I + sum_{j>=1} P_j z^j` up to order `k`.
fn series_inverse(p: &[CMat], k: usize, n: usize) -> Vec<CMat> {
    let mut q = vec![CMat::identity(n, n)];
    for j in 1..=k {
        let mut acc = CMat::zeros(n, n);
        for i in 1..=j.min(p.len()) {
            acc -= &p[i - 1] * &q[j - i];
        }
        q.push(acc);
    }
    q
}

/// Run the reduction and assemble `Y(z) = U(z) z^Delta0 z^N`.
pub fn reduce_at_zero(m0: &CMat, m1: &CMat, m2: &CMat, opts: &ReductionOptions) -> Result<RegularSingularData> {
    reduce_series(&[m0.clone(), m1.clone(), m2.clone()], opts)
}

/// [`reduce_at_zero`] for `z Y' = (M_0 + M_1 z + ... + M_p z^p) Y`.
pub fn reduce_series(m: &[CMat], opts: &ReductionOptions) -> Result<RegularSingularData> {
    let m0 = m.first().ok_or_else(|| Error::InvalidParameter("empty coefficient list".into()))?;
    let l = m0.nrows();
    if m.iter().any(|mi| mi.shape() != (l, l)) {
        return Err(Error::InvalidParameter("coefficients must be square of equal size".into()));
    }
    let jf = jordanize(m0, opts)?;
    let dspread = match (jf.d.first(), jf.d.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0,
    };
    let kmax = opts.truncation.unwrap_or(dspread as usize + 25).max(dspread as usize + 1);
    let mh: Vec<CMat> =
        std::iter::once(jf.j.clone()).chain(m[1..].iter().map(|mi| &jf.s_inv * mi * &jf.s)).collect();
    let mut l0 = jf.j.clone();
    for a in 0..l {
        l0[(a, a)] = jf.mu[a];
    }
    // Entries of each ad(D)-eigenspace.
    let mut spaces: std::collections::BTreeMap<i64, Vec<(usize, usize)>> = Default::default();
    for a in 0..l {
        for b in 0..l {
            spaces.entry(jf.d[a] - jf.d[b]).or_default().push((a, b));
        }
    }
    // Matrix of X -> [L0, X] restricted to one eigenspace.
    let ad_l0 = |idx: &[(usize, usize)]| {
        let n = idx.len();
        let mut op = CMat::zeros(n, n);
        for (p, &(a, b)) in idx.iter().enumerate() {
            for (q, &(c, e)) in idx.iter().enumerate() {
                let mut v = C64::from(0.0);
                if e == b {
                    v += l0[(a, c)];
                }
                if c == a {
                    v -= l0[(e, b)];
                }
                op[(p, q)] = v;
            }
        }
        op
    };
    let space_ops: Vec<(i64, &Vec<(usize, usize)>, CMat)> = spaces.iter().map(|(&k, idx)| (k, idx, ad_l0(idx))).collect();
    let mut p_series: Vec<CMat> = Vec::with_capacity(kmax);
    let mut b_series: Vec<CMat> = Vec::with_capacity(kmax);
    for jj in 1..=kmax {
        let mut psi = CMat::zeros(l, l);
        for i in 1..jj {
            if i <= b_series.len() {
                let prev = if jj - i == 0 { CMat::identity(l, l) } else { p_series[jj - i - 1].clone() };
                psi += &b_series[i - 1] * prev;
            }
        }
        for i in 1..=jj.min(mh.len() - 1) {
            let prev = if jj - i == 0 { CMat::identity(l, l) } else { p_series[jj - i - 1].clone() };
            psi -= prev * &mh[i];
        }
        let mut pj = CMat::zeros(l, l);
        let mut bj = CMat::zeros(l, l);
        for (k, idx, ad) in &space_ops {
            let (k, idx) = (*k, *idx);
            let rhs = DVector::from_iterator(idx.len(), idx.iter().map(|&(a, b)| psi[(a, b)]));
            if k != jj as i64 {
                // ad(L0) is triangular here with eigenvalues mu_a - mu_b.
                let shift = (jj as i64 - k) as f64;
                if let Some(&(a, b)) = idx.iter().find(|&&(a, b)| (C64::from(shift) - (jf.mu[a] - jf.mu[b])).norm() < 1e-10) {
                    return Err(Error::ResonanceFailure { j: jj, pair: (jf.lambda[a].re, jf.lambda[b].re) });
                }
                let op = CMat::identity(idx.len(), idx.len()) * C64::from(shift) - ad;
                let x = op.lu().solve(&rhs).ok_or(Error::ResonanceFailure { j: jj, pair: (k as f64, jj as f64) })?;
                for (p, &(a, b)) in idx.iter().enumerate() {
                    pj[(a, b)] = x[p];
                }
            } else {
                // -ad(L0) X = B + Psi: B removes the part of Psi outside the image.
                let op = -ad;
                let n = idx.len();
                let svd = svd_c(&op);
                let smax = svd.s.first().copied().unwrap_or(0.0);
                let cut = 1e-9 * smax.max(1.0);
                let ur = svd.left_range(cut);
                let rhs_m = CMat::from_column_slice(n, 1, rhs.as_slice());
                let in_image = &ur * (ur.adjoint() * &rhs_m);
                let b_vec = -(&rhs_m - &in_image);
                let x = svd.solve(&in_image, cut);
                for (p, &(a, b)) in idx.iter().enumerate() {
                    pj[(a, b)] = x[(p, 0)];
                    bj[(a, b)] = b_vec[(p, 0)];
                }
            }
        }
        p_series.push(pj);
        b_series.push(bj);
    }
    let b_tol = 1e-12 * (1.0 + m.iter().map(fro).sum::<f64>());
    let b_list: Vec<(usize, CMat)> =
        b_series.iter().enumerate().filter(|(_, b)| fro(b) > b_tol).map(|(i, b)| (i + 1, b.clone())).collect();

    // Constant sheared system.
    let mut lmat = l0.clone();
    for (_, b) in &b_list {
        lmat += b;
    }
    // L T = T (Lambda + N).
    let mu = &jf.mu;
    let mut t = CMat::identity(l, l);
    let mut nmat = CMat::zeros(l, l);
    for dist in 1..l {
        for b in 0..l - dist {
            let a = b + dist;
            let mut acc = -lmat[(a, b)];
            for c in b + 1..a {
                acc += t[(a, c)] * nmat[(c, b)] - lmat[(a, c)] * t[(c, b)];
            }
            if jf.class[a] == jf.class[b] {
                nmat[(a, b)] = -acc;
            } else {
                t[(a, b)] = acc / (mu[a] - mu[b]);
            }
        }
    }
    let delta0: Vec<C64> = (0..l).map(|a| mu[a] + C64::from(jf.d[a] as f64)).collect();

    // U(z) = S P(z)^-1 W(z), W(z) = z^D T z^-D.
    let q = series_inverse(&p_series, kmax, l);
    let mut w: Vec<CMat> = vec![CMat::zeros(l, l); dspread as usize + 1];
    for a in 0..l {
        for b in 0..=a {
            let p = (jf.d[a] - jf.d[b]) as usize;
            w[p][(a, b)] = t[(a, b)];
        }
    }
    let mut u_series = Vec::with_capacity(kmax + 1);
    for jj in 0..=kmax {
        let mut acc = CMat::zeros(l, l);
        for (p, wp) in w.iter().enumerate() {
            if p <= jj {
                acc += &q[jj - p] * wp;
            }
        }
        u_series.push(&jf.s * acc);
    }
    let mut data = RegularSingularData {
        m: m.to_vec(),
        jordan: jf,
        delta0,
        n: nmat,
        u_series,
        d: dspread,
        b_list,
        p1_series: p_series,
        l: lmat,
        t,
        flags: Vec::new(),
    };
    data.flags = data.selection_flags();
    Ok(data)
}

impl RegularSingularData {
    pub fn size(&self) -> usize {
        self.m[0].nrows()
    }

    pub fn truncation(&self) -> usize {
        self.u_series.len() - 1
    }

    /// `N` split by degree: `z^Delta0 N z^-Delta0 = sum_k N_k z^k`.
    pub fn n_graded(&self) -> Vec<CMat> {
        let l = self.size();
        let mut out = vec![CMat::zeros(l, l); self.d as usize + 1];
        for a in 0..l {
            for b in 0..l {
                let v = self.n[(a, b)];
                if v != C64::from(0.0) {
                    let k = (self.delta0[a] - self.delta0[b]).re.round() as usize;
                    out[k][(a, b)] = v;
                }
            }
        }
        out
    }

    /// Norms of the series-substitution residual coefficients
    /// `R_j = j U_j + U_j Delta0 + sum_k U_{j-k} N_k - sum_i M_i U_{j-i}`,
    /// `j = 0 ..= K + extra`, with `U_j = 0` beyond the truncation.
    pub fn residual_coefficients(&self, extra: usize) -> Vec<f64> {
        let l = self.size();
        let kk = self.truncation();
        let uj = |j: usize| if j <= kk { self.u_series[j].clone() } else { CMat::zeros(l, l) };
        let ng = self.n_graded();
        let delta = CMat::from_diagonal(&DVector::from_vec(self.delta0.clone()));
        (0..=kk + extra)
            .map(|j| {
                let mut r = uj(j) * C64::from(j as f64) + uj(j) * &delta;
                for (k, nk) in ng.iter().enumerate() {
                    if k <= j {
                        r += uj(j - k) * nk;
                    }
                }
                for i in 0..self.m.len() {
                    if i <= j {
                        r -= &self.m[i] * uj(j - i);
                    }
                }
                fro(&r)
            })
            .collect()
    }

    pub fn eval_u(&self, z: f64) -> CMat {
        let l = self.size();
        let mut acc = CMat::zeros(l, l);
        for u in self.u_series.iter().rev() {
            acc = acc * C64::from(z) + u;
        }
        acc
    }

    fn eval_u_prime(&self, z: f64) -> CMat {
        let l = self.size();
        let mut acc = CMat::zeros(l, l);
        for (j, u) in self.u_series.iter().enumerate().skip(1).rev() {
            acc = acc * C64::from(z) + u * C64::from(j as f64);
        }
        acc
    }

    /// `(z^Delta0, z^N)` for real `z > 0`.
    fn power_factors(&self, z: f64) -> (CMat, CMat) {
        let l = self.size();
        let lz = z.ln();
        let zd = CMat::from_diagonal(&DVector::from_iterator(l, self.delta0.iter().map(|d| (d * lz).exp())));
        let mut zn = CMat::identity(l, l);
        let mut term = CMat::identity(l, l);
        for p in 1..l {
            term = term * &self.n * C64::from(lz / p as f64);
            zn += &term;
        }
        (zd, zn)
    }

    fn monodromy_factor(&self, z: f64) -> CMat {
        let (zd, zn) = self.power_factors(z);
        zd * zn
    }

    /// Fundamental matrix `U(z) z^Delta0 z^N`.
    pub fn fundamental(&self, z: f64) -> CMat {
        self.eval_u(z) * self.monodromy_factor(z)
    }

    /// Relative residual `|z Y' - M Y| / |Y|` of the truncated fundamental matrix.
    pub fn ode_residual(&self, z: f64) -> f64 {
        let y = self.fundamental(z);
        let (zd, zn) = self.power_factors(z);
        let f = &zd * &zn;
        let delta = CMat::from_diagonal(&DVector::from_vec(self.delta0.clone()));
        // z d/dz (z^Delta0 z^N) = Delta0 z^Delta0 z^N + z^Delta0 N z^N.
        let dfac = &delta * &f + zd * &self.n * zn;
        let zy = self.eval_u_prime(z) * &f * C64::from(z) + self.eval_u(z) * dfac;
        let mut mz = CMat::zeros(self.size(), self.size());
        for mi in self.m.iter().rev() {
            mz = mz * C64::from(z) + mi;
        }
        fro(&(zy - mz * &y)) / fro(&y).max(f64::MIN_POSITIVE)
    }

    /// Indices of the columns with `Re delta > 0`.
    pub fn selected_columns(&self) -> Vec<usize> {
        (0..self.size()).filter(|&a| self.delta0[a].re > 0.0).collect()
    }

    fn selection_flags(&self) -> Vec<String> {
        let l = self.size();
        let mut flags = Vec::new();
        let mut reach = CMat::identity(l, l);
        let mut pw = CMat::identity(l, l);
        for _ in 1..l {
            pw = &pw * &self.n;
            reach += &pw;
        }
        for b in self.selected_columns() {
            for a in 0..l {
                if reach[(a, b)] != C64::from(0.0) && self.delta0[a].re <= 0.0 {
                    flags.push(format!("column {b} mixes in z^{} with non-positive real part", self.delta0[a]));
                }
            }
        }
        flags
    }
}

/// Number of eigenvalues of `M0` with positive real part.
pub fn l2_dimension_at_zero(m0: &CMat) -> Result<usize> {
    let ev = eigenvalues_c(m0);
    if let Some(e) = ev.iter().find(|e| e.re.abs() < 1e-9) {
        return Err(Error::BoundaryEigenvalue { re: e.re, im: e.im });
    }
    Ok(ev.iter().filter(|e| e.re > 0.0).count())
}

/// Values at `z0` of the solutions with `Re delta > 0`, one per column.
///
/// Fails with [`Error::RadiusError`] when the last two series terms at `z0`
/// exceed `tol` relative to `|U(z0)|`.
pub fn l2_basis_at_zero(data: &RegularSingularData, z0: f64, tol: f64) -> Result<CMat> {
    let kk = data.truncation();
    let u = data.eval_u(z0);
    let tail = (kk.saturating_sub(1)..=kk).map(|j| fro(&data.u_series[j]) * z0.powi(j as i32)).sum::<f64>();
    let rel = tail / fro(&u).max(f64::MIN_POSITIVE);
    if !(rel <= tol) {
        let shrink = if rel.is_finite() && rel > 0.0 { (tol / rel).powf(1.0 / kk as f64) } else { 0.5 };
        return Err(Error::RadiusError { z0, remainder: rel, suggested_z0: 0.9 * z0 * shrink.min(1.0) });
    }
    let y = data.fundamental(z0);
    let sel = data.selected_columns();
    Ok(CMat::from_fn(y.nrows(), sel.len(), |r, c| y[(r, sel[c])]))
}

/// [`reduce_at_zero`] followed by [`l2_basis_at_zero`], doubling the
/// truncation order (up to 200) while the radius check fails.
pub fn l2_basis_with_retry(m: &[CMat; 3], z0: f64, tol: f64, opts: &ReductionOptions) -> Result<(RegularSingularData, CMat)> {
    let mut o = *opts;
    loop {
        let data = reduce_at_zero(&m[0], &m[1], &m[2], &o)?;
        match l2_basis_at_zero(&data, z0, tol) {
            Ok(b) => return Ok((data, b)),
            Err(Error::RadiusError { .. }) if data.truncation() < 200 => {
                o.truncation = Some((data.truncation() * 2).min(200));
            }
            Err(e) => return Err(e),
        }
    }
}

/// Summary of a reduction for reports.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionSummary {
    pub size: usize,
    pub exponents: Vec<[f64; 2]>,
    pub d: i64,
    pub b_degrees: Vec<usize>,
    pub nilpotent_norm: f64,
    pub truncation: usize,
    pub max_residual_coefficient: f64,
}

impl From<&RegularSingularData> for ReductionSummary {
    fn from(r: &RegularSingularData) -> Self {
        let res = r.residual_coefficients(0);
        ReductionSummary {
            size: r.size(),
            exponents: r.delta0.iter().map(|d| [d.re, d.im]).collect(),
            d: r.d,
            b_degrees: r.b_list.iter().map(|(k, _)| *k).collect(),
            nilpotent_norm: fro(&r.n),
            truncation: r.truncation(),
            max_residual_coefficient: res.iter().copied().fold(0.0, f64::max),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> C64 {
        C64::from(x)
    }

    #[test]
    fn scalar_constant() {
        let m0 = CMat::from_element(1, 1, c(0.7));
        let z = CMat::zeros(1, 1);
        let r = reduce_at_zero(&m0, &z, &z, &ReductionOptions::default()).unwrap();
        assert!((r.delta0[0] - c(0.7)).norm() < 1e-14);
        assert_eq!(fro(&r.n), 0.0);
        assert!((r.u_series[0][(0, 0)] - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn resonant_pair() {
        let m0 = CMat::from_diagonal(&DVector::from_vec(vec![c(1.0), c(2.0)]));
        let mut m1 = CMat::zeros(2, 2);
        m1[(1, 0)] = c(1.0);
        let r = reduce_at_zero(&m0, &m1, &CMat::zeros(2, 2), &ReductionOptions::default()).unwrap();
        assert_eq!(r.d, 1);
        assert_eq!(r.b_list.len(), 1);
        assert!(fro(&r.n) > 0.5);
        let res = r.residual_coefficients(6);
        assert!(res[..=r.truncation()].iter().all(|&x| x < 1e-12), "{res:?}");
        assert!(r.ode_residual(0.2) < 1e-12);
    }

    #[test]
    fn jordan_block() {
        let m0 = CMat::from_row_slice(2, 2, &[c(2.0), c(1.0), c(0.0), c(2.0)]);
        let r = reduce_at_zero(&m0, &CMat::zeros(2, 2), &CMat::zeros(2, 2), &ReductionOptions::default()).unwrap();
        assert!(fro(&r.n) > 0.5);
        assert!(r.ode_residual(0.3) < 1e-12);
    }
}

