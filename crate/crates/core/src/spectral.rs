//! Laplacians, dense symmetric eigensolvers, spectral distance and
//! Rayleigh-quotient diagnostics.

use serde::{Deserialize, Serialize};

use crate::coarse::{CoarsenedGraph, ProjectionMap};
use crate::engine::{achieved_ratio, Partition};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Dense symmetric matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    order: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(order: usize) -> Self {
        SymMatrix {
            order,
            data: vec![0.0; order * order],
        }
    }

    /// Fails when a pair of mirrored entries differs by more than `1e-12`
    /// relative to the larger magnitude.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        let mut m = SymMatrix::zeros(order);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::Degenerate("matrix rows must have equal length"));
            }
            m.data[i * order..(i + 1) * order].copy_from_slice(row);
        }
        m.check_symmetric()?;
        Ok(m)
    }

    pub fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.order {
            for j in i + 1..self.order {
                let (a, b) = (self.get(i, j), self.get(j, i));
                let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
                if (a - b).abs() > 1e-12 * scale {
                    return Err(Error::NonSymmetric { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.order + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.order + j] = value;
    }

    pub fn set_sym(&mut self, i: usize, j: usize, value: f64) {
        self.set(i, j, value);
        self.set(j, i, value);
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.order.max(1)).take(self.order)
    }

    /// `xᵀ M x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        self.rows()
            .zip(x)
            .map(|(row, &xi)| xi * row.iter().zip(x).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    /// `D^{-1/2} M D^{-1/2}` with `D = diag(M)`; rows and columns with a zero
    /// diagonal become zero.
    pub fn degree_normalized(&self) -> SymMatrix {
        let scale: Vec<f64> = (0..self.order)
            .map(|i| {
                let d = self.get(i, i);
                if d > 0.0 {
                    d.sqrt().recip()
                } else {
                    0.0
                }
            })
            .collect();
        let mut out = self.clone();
        for i in 0..self.order {
            for j in 0..self.order {
                out.set(i, j, self.get(i, j) * scale[i] * scale[j]);
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    #[default]
    Combinatorial,
    Normalized,
}

/// `D - A`, or `D^{-1/2} (D - A) D^{-1/2}` for the normalized kind.
pub fn laplacian(g: &Graph, kind: LaplacianKind) -> SymMatrix {
    let n = g.node_count();
    let mut m = SymMatrix::zeros(n);
    for u in 0..n {
        m.set(u, u, g.degree(u) as f64);
        for &v in g.neighbors(u) {
            m.set(u, v, -1.0);
        }
    }
    match kind {
        LaplacianKind::Combinatorial => m,
        LaplacianKind::Normalized => m.degree_normalized(),
    }
}

/// Eigenvalues sorted ascending.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        Spectrum { eigenvalues }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Eigenvalues with optional unit eigenvectors; `vectors[i]` belongs to
/// `values[i]`. Sorted ascending.
#[derive(Clone, Debug)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Option<Vec<Vec<f64>>>,
}

pub const DEFAULT_JACOBI_TOL: f64 = 1e-10;
const MAX_JACOBI_SWEEPS: usize = 100;
/// Above this order the Householder/QL path is used by [`symmetric_eigen`].
pub const JACOBI_MAX_ORDER: usize = 64;

/// All eigenvalues by cyclic Jacobi rotations.
pub fn eigenvalues_symmetric(m: &SymMatrix, tol: f64) -> Result<Spectrum> {
    m.check_symmetric()?;
    let eig = jacobi(m, tol, false)?;
    Ok(Spectrum::new(eig.values))
}

/// Cyclic Jacobi. Sweeps until the off-diagonal Frobenius mass drops below
/// `tol * max(1, ||M||_F)`.
pub fn jacobi(m: &SymMatrix, tol: f64, want_vectors: bool) -> Result<Eigen> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidConfig(format!("jacobi tolerance {tol} must be positive")));
    }
    let n = m.order;
    let mut a = m.data.clone();
    let mut v = if want_vectors {
        let mut id = vec![0.0; n * n];
        for i in 0..n {
            id[i * n + i] = 1.0;
        }
        Some(id)
    } else {
        None
    };
    let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = tol * norm.max(1.0);
    let mut converged = false;
    for _ in 0..MAX_JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += 2.0 * a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() < threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = (t * t + 1.0).sqrt().recip();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let (vkp, vkq) = (v[k * n + p], v[k * n + q]);
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    if !converged {
        return Err(Error::Degenerate("jacobi iteration did not converge"));
    }
    let values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    let vectors = v.map(|v| (0..n).map(|j| (0..n).map(|k| v[k * n + j]).collect()).collect());
    Ok(sorted_eigen(values, vectors))
}

fn sorted_eigen(values: Vec<f64>, vectors: Option<Vec<Vec<f64>>>) -> Eigen {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]).then(i.cmp(&j)));
    Eigen {
        values: idx.iter().map(|&i| values[i]).collect(),
        vectors: vectors.map(|vs| idx.iter().map(|&i| vs[i].clone()).collect()),
    }
}

/// Householder tridiagonalization followed by implicit QL with shifts.
#[allow(clippy::needless_range_loop)]
pub fn tridiagonal_ql(m: &SymMatrix, want_vectors: bool) -> Result<Eigen> {
    let n = m.order;
    if n == 0 {
        return Ok(Eigen {
            values: Vec::new(),
            vectors: want_vectors.then(Vec::new),
        });
    }
    let mut a: Vec<Vec<f64>> = m.rows().map(<[f64]>::to_vec).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = (0..=l).map(|k| a[i][k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let mut f = a[i][l];
                let mut g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                f = 0.0;
                for j in 0..=l {
                    a[j][i] = a[i][j] / h;
                    g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in j + 1..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if want_vectors {
            if d[i] != 0.0 {
                for j in 0..i {
                    let g: f64 = (0..i).map(|k| a[i][k] * a[k][j]).sum();
                    for k in 0..i {
                        a[k][j] -= g * a[k][i];
                    }
                }
            }
            d[i] = a[i][i];
            a[i][i] = 1.0;
            for j in 0..i {
                a[j][i] = 0.0;
                a[i][j] = 0.0;
            }
        } else {
            d[i] = a[i][i];
        }
    }

    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m_idx = l;
            while m_idx + 1 < n {
                let dd = d[m_idx].abs() + d[m_idx + 1].abs();
                if e[m_idx].abs() <= f64::EPSILON * dd {
                    break;
                }
                m_idx += 1;
            }
            if m_idx == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::Degenerate("QL iteration did not converge"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m_idx] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m_idx).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m_idx] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if want_vectors {
                    for row in a.iter_mut() {
                        let f = row[i + 1];
                        row[i + 1] = s * row[i] + c * f;
                        row[i] = c * row[i] - s * f;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m_idx] = 0.0;
        }
    }
    let vectors = want_vectors.then(|| (0..n).map(|j| a.iter().map(|row| row[j]).collect()).collect());
    Ok(sorted_eigen(d, vectors))
}

/// Eigen-decomposition choosing Jacobi for small orders and Householder/QL
/// otherwise.
pub fn symmetric_eigen(m: &SymMatrix, want_vectors: bool) -> Result<Eigen> {
    m.check_symmetric()?;
    if m.order <= JACOBI_MAX_ORDER {
        jacobi(m, DEFAULT_JACOBI_TOL, want_vectors)
    } else {
        tridiagonal_ql(m, want_vectors)
    }
}

pub fn spectrum(m: &SymMatrix) -> Result<Spectrum> {
    Ok(Spectrum::new(symmetric_eigen(m, false)?.values))
}

/// Euclidean distance between ascending spectra; the shorter one is padded
/// with leading zeros.
pub fn spectral_distance(a: &Spectrum, b: &Spectrum) -> f64 {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let pad = long.len() - short.len();
    long.eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let y = if i < pad { 0.0 } else { short.eigenvalues[i - pad] };
            (x - y) * (x - y)
        })
        .sum::<f64>()
        .sqrt()
}

pub fn rayleigh_quotient(m: &SymMatrix, x: &[f64]) -> Result<f64> {
    if x.len() != m.order() {
        return Err(Error::Degenerate("vector length differs from matrix order"));
    }
    let denom: f64 = x.iter().map(|v| v * v).sum();
    if denom == 0.0 {
        return Err(Error::Degenerate("zero vector in Rayleigh quotient"));
    }
    Ok(m.quadratic_form(x) / denom)
}

/// `(xᵀLx / xᵀx, yᵀL̄y / yᵀy)` with `y = Cᵀx`.
pub fn rayleigh_pair(
    l: &SymMatrix,
    lbar: &SymMatrix,
    c: &ProjectionMap,
    x: &[f64],
) -> Result<(f64, f64)> {
    if c.rows != l.order() || c.cols != lbar.order() {
        return Err(Error::Degenerate("projection shape does not match the Laplacians"));
    }
    let original = rayleigh_quotient(l, x)?;
    let coarse = rayleigh_quotient(lbar, &c.restrict(x))?;
    Ok((original, coarse))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SdMode {
    /// Spectrum of `Cᵀ L C`.
    #[default]
    Projected,
    /// Spectrum of the Laplacian of the 0/1 superedge graph.
    Unweighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub laplacian: LaplacianKind,
    pub sd_mode: SdMode,
    pub rayleigh_samples: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            laplacian: LaplacianKind::Combinatorial,
            sd_mode: SdMode::Projected,
            rayleigh_samples: 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayleighSample {
    pub original: f64,
    pub coarse: f64,
    /// `|R_c - R_o| / max(|R_o|, |R_c|)`, 0 when both vanish.
    pub relative_gap: f64,
}

impl RayleighSample {
    pub fn new(original: f64, coarse: f64) -> Self {
        let scale = original.abs().max(coarse.abs());
        let relative_gap = if scale == 0.0 {
            0.0
        } else {
            (coarse - original).abs() / scale
        };
        RayleighSample {
            original,
            coarse,
            relative_gap,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralReport {
    pub sd: f64,
    pub r_a: f64,
    pub rayleigh_samples: Vec<RayleighSample>,
    pub laplacian_kind: LaplacianKind,
    pub sd_mode: SdMode,
}

/// Spectral distance between `g` and its coarsening, using the configured
/// Laplacian kind on both sides.
pub fn coarse_spectral_distance(g: &Graph, cg: &CoarsenedGraph, cfg: &EvalConfig) -> Result<f64> {
    let original = spectrum(&laplacian(g, cfg.laplacian))?;
    let coarse = spectrum(&coarse_laplacian(cg, cfg))?;
    Ok(spectral_distance(&original, &coarse))
}

fn coarse_laplacian(cg: &CoarsenedGraph, cfg: &EvalConfig) -> SymMatrix {
    match (cfg.sd_mode, cfg.laplacian) {
        (SdMode::Projected, LaplacianKind::Combinatorial) => cg.projected_laplacian(),
        (SdMode::Projected, LaplacianKind::Normalized) => cg.projected_laplacian().degree_normalized(),
        (SdMode::Unweighted, kind) => laplacian(&cg.superedge_graph(), kind),
    }
}

/// Test vectors for the Rayleigh diagnostic: lifted eigenvectors of `L̄`
/// (ascending eigenvalue) for half the budget, then indicator vectors of the
/// largest balls, then further eigenvectors if balls run out.
fn rayleigh_vectors(lbar_eigen: &Eigen, c: &ProjectionMap, budget: usize) -> Vec<Vec<f64>> {
    let eigvecs = lbar_eigen.vectors.as_deref().unwrap_or(&[]);
    let sizes = c.column_sizes();
    let mut by_size: Vec<usize> = (0..c.cols).collect();
    by_size.sort_by_key(|&b| (std::cmp::Reverse(sizes[b]), b));

    let from_eigen = eigvecs.len().min(budget.div_ceil(2));
    let mut out: Vec<Vec<f64>> = eigvecs[..from_eigen].iter().map(|u| c.lift(u)).collect();
    for &b in by_size.iter().take(budget - out.len()) {
        out.push(c.column_of.iter().map(|&col| if col == b { 1.0 } else { 0.0 }).collect());
    }
    for u in eigvecs.iter().skip(from_eigen) {
        if out.len() >= budget {
            break;
        }
        out.push(c.lift(u));
    }
    out
}

/// Spectral distance, achieved ratio and Rayleigh samples for one coarsening.
pub fn evaluate(
    g: &Graph,
    cg: &CoarsenedGraph,
    p: &Partition,
    c: &ProjectionMap,
    cfg: &EvalConfig,
) -> Result<SpectralReport> {
    if c.rows != g.node_count() || c.cols != cg.supernode_count || p.len() != c.cols {
        return Err(Error::InvalidPartition(
            "graph, partition and coarsened graph disagree in size".into(),
        ));
    }
    let sd = coarse_spectral_distance(g, cg, cfg)?;

    let l = laplacian(g, LaplacianKind::Combinatorial);
    let lbar = cg.projected_laplacian();
    let lbar_eigen = symmetric_eigen(&lbar, cfg.rayleigh_samples > 0)?;
    let mut rayleigh_samples = Vec::new();
    for x in rayleigh_vectors(&lbar_eigen, c, cfg.rayleigh_samples) {
        let (original, coarse) = rayleigh_pair(&l, &lbar, c, &x)?;
        rayleigh_samples.push(RayleighSample::new(original, coarse));
    }
    Ok(SpectralReport {
        sd,
        r_a: achieved_ratio(p, g.node_count()),
        rayleigh_samples,
        laplacian_kind: cfg.laplacian,
        sd_mode: cfg.sd_mode,
    })
}
