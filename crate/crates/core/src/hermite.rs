//! Hermite interpolation with doubled nodes.
//!
//! Given prescribed pairs `(z_i, alpha_i)`, builds the least-degree `H` with
//! `H(z_i) = z_i` and `H'(z_i) = alpha_i`: every `z_i` becomes a fixed point
//! of `H` with multiplier `alpha_i`. The Newton coefficients come from a
//! divided-difference table over `z_1, z_1, z_2, z_2, ..., z_n, z_n`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::{check_finite, Polynomial};

/// Default minimum separation between distinct nodes, relative to spread.
pub const SEPARATION_RELATIVE: f64 = 1e-8;
/// Absolute floor for the separation threshold.
pub const SEPARATION_ABSOLUTE: f64 = 1e-12;

/// A prescribed fixed point and its multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub z: Complex64,
    pub alpha: Complex64,
}

impl Node {
    pub fn new(z: Complex64, alpha: Complex64) -> Self {
        Self { z, alpha }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeSystem {
    nodes: Vec<Node>,
}

impl NodeSystem {
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        Self::with_separation(nodes, SEPARATION_RELATIVE)
    }

    /// Validates with a custom relative separation threshold.
    pub fn with_separation(nodes: Vec<Node>, relative: f64) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::NoNodes);
        }
        for n in &nodes {
            check_finite(n.z, "node")?;
            check_finite(n.alpha, "multiplier")?;
        }
        let mut spread: f64 = 0.0;
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                spread = spread.max((nodes[i].z - nodes[j].z).norm());
            }
        }
        let threshold = (relative * spread).max(SEPARATION_ABSOLUTE);
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if (nodes[i].z - nodes[j].z).norm() < threshold {
                    return Err(Error::NodesTooClose { i, j, threshold });
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn from_pairs(pairs: &[(Complex64, Complex64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(z, a)| Node::new(z, a)).collect())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn z(&self, i: usize) -> Complex64 {
        self.nodes[i].z
    }

    pub fn alpha(&self, i: usize) -> Complex64 {
        self.nodes[i].alpha
    }

    /// `prod_{j < k, j != i} (z_i - z_j)^2` over the first `k` nodes.
    pub fn pi(&self, k: usize, i: usize) -> Complex64 {
        (0..k)
            .filter(|&j| j != i)
            .map(|j| {
                let d = self.z(i) - self.z(j);
                d * d
            })
            .product()
    }

    /// The positional doubled list `z_1, z_1, ..., z_n, z_n`.
    pub fn doubled_nodes(&self) -> Vec<Complex64> {
        self.nodes.iter().flat_map(|n| [n.z, n.z]).collect()
    }
}

/// `entries[k][i] = f[x_i, ..., x_{i+k}]` over the doubled node list.
#[derive(Debug, Clone, PartialEq)]
pub struct DividedDifferenceTable {
    pub doubled_nodes: Vec<Complex64>,
    pub entries: Vec<Vec<Complex64>>,
}

impl DividedDifferenceTable {
    /// Newton coefficients `f[x_0..=x_k]` for `k = 0..2n`.
    pub fn diagonal(&self) -> Vec<Complex64> {
        self.entries.iter().map(|row| row[0]).collect()
    }

    pub fn entry(&self, k: usize, i: usize) -> Complex64 {
        self.entries[k][i]
    }

    /// `f[z_1, z_1, ..., z_n, z_n]`.
    pub fn top(&self) -> Complex64 {
        self.entries[self.entries.len() - 1][0]
    }
}

fn check_index_list(n: usize, indices: &[usize]) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::InvalidIndexList("empty".into()));
    }
    let mut seen = vec![false; n];
    let mut pos = 0;
    while pos < indices.len() {
        let idx = indices[pos];
        if idx >= n {
            return Err(Error::InvalidIndexList(format!("index {idx} out of range for {n} nodes")));
        }
        if seen[idx] {
            return Err(Error::InvalidIndexList(format!("index {idx} repeats non-adjacently")));
        }
        seen[idx] = true;
        let mut run = 1;
        while pos + run < indices.len() && indices[pos + run] == idx {
            run += 1;
        }
        if run > 2 {
            return Err(Error::InvalidIndexList(format!("index {idx} has multiplicity {run} > 2")));
        }
        pos += run;
    }
    Ok(())
}

/// Full triangular recursion over a node index list.
fn triangle(sys: &NodeSystem, indices: &[usize]) -> Vec<Vec<Complex64>> {
    let x: Vec<Complex64> = indices.iter().map(|&i| sys.z(i)).collect();
    let mut rows = vec![x.clone()];
    for k in 1..indices.len() {
        let prev = &rows[k - 1];
        let row = (0..indices.len() - k)
            .map(|i| {
                if indices[i] == indices[i + k] {
                    // only reachable for k == 1: a repeated node
                    sys.alpha(indices[i])
                } else {
                    (prev[i + 1] - prev[i]) / (x[i + k] - x[i])
                }
            })
            .collect();
        rows.push(row);
    }
    rows
}

/// Divided difference `f[z_{i_1}, ..., z_{i_k}]` for a list of node indices
/// (0-based) in which each index appears at most twice, and adjacently.
pub fn divided_difference(sys: &NodeSystem, indices: &[usize]) -> Result<Complex64> {
    check_index_list(sys.len(), indices)?;
    let rows = triangle(sys, indices);
    Ok(rows[rows.len() - 1][0])
}

pub fn build_table(sys: &NodeSystem) -> DividedDifferenceTable {
    let indices: Vec<usize> = (0..sys.len()).flat_map(|i| [i, i]).collect();
    DividedDifferenceTable { doubled_nodes: sys.doubled_nodes(), entries: triangle(sys, &indices) }
}

fn guard_pi(pi: Complex64, sys: &NodeSystem) -> Result<Complex64> {
    if pi.norm() == 0.0 || !pi.re.is_finite() || !pi.im.is_finite() {
        Err(Error::NodesTooClose { i: 0, j: sys.len().saturating_sub(1), threshold: SEPARATION_ABSOLUTE })
    } else {
        Ok(pi)
    }
}

/// `f[z_1, z_1, ..., z_k, z_k] = sum_{i<=k} (alpha_i - 1) / pi^k_i`, for `2 <= k <= n`.
pub fn closed_form_even(sys: &NodeSystem, k: usize) -> Result<Complex64> {
    if k < 2 || k > sys.len() {
        return Err(Error::InvalidSpan { k, lo: 2, hi: sys.len() });
    }
    let one = Complex64::new(1.0, 0.0);
    (0..k).try_fold(Complex64::new(0.0, 0.0), |acc, i| {
        let pi = guard_pi(sys.pi(k, i), sys)?;
        Ok(acc + (sys.alpha(i) - one) / pi)
    })
}

/// `f[z_1, z_2, z_2, ..., z_k, z_k, z_{k+1}]
///  = sum_{i=2}^{k} (alpha_i - 1)(z_i - z_1)(z_i - z_{k+1}) / pi^{k+1}_i`,
/// for `2 <= k <= n - 1`.
pub fn closed_form_bridge(sys: &NodeSystem, k: usize) -> Result<Complex64> {
    if k < 2 || k + 1 > sys.len() {
        return Err(Error::InvalidSpan { k, lo: 2, hi: sys.len().saturating_sub(1) });
    }
    let one = Complex64::new(1.0, 0.0);
    let first = sys.z(0);
    let last = sys.z(k);
    (1..k).try_fold(Complex64::new(0.0, 0.0), |acc, i| {
        let pi = guard_pi(sys.pi(k + 1, i), sys)?;
        let zi = sys.z(i);
        Ok(acc + (sys.alpha(i) - one) * (zi - first) * (zi - last) / pi)
    })
}

/// `sum_k c_k prod_{j<k} (z - x_j)` expanded, evaluated from the top term down.
pub fn newton_to_monomial(newton_coeffs: &[Complex64], nodes: &[Complex64]) -> Result<Polynomial> {
    if newton_coeffs.is_empty() {
        return Err(Error::EmptyPolynomial);
    }
    if nodes.len() + 1 < newton_coeffs.len() {
        return Err(Error::LengthMismatch(format!(
            "{} Newton coefficients need at least {} nodes, got {}",
            newton_coeffs.len(),
            newton_coeffs.len() - 1,
            nodes.len()
        )));
    }
    let m = newton_coeffs.len();
    let mut acc = vec![newton_coeffs[m - 1]];
    for k in (0..m - 1).rev() {
        // acc <- acc * (z - x_k) + c_k
        let x = nodes[k];
        acc.push(Complex64::new(0.0, 0.0));
        for d in (1..acc.len()).rev() {
            acc[d] = acc[d - 1] - x * acc[d];
        }
        acc[0] = -x * acc[0] + newton_coeffs[k];
    }
    Polynomial::new(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    pub h: Polynomial,
    pub newton_coeffs: Vec<Complex64>,
    pub doubled_nodes: Vec<Complex64>,
    /// Table value `f[z_1, z_1, ..., z_n, z_n]`, reported before trimming.
    pub leading_coefficient: Complex64,
    pub achieved_degree: usize,
}

/// Largest relative interpolation residuals over the nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals {
    pub value: f64,
    pub derivative: f64,
}

impl SynthesisResult {
    /// Residuals `|H(z_i) - z_i|` and `|H'(z_i) - alpha_i|`, each divided by
    /// `max(1, sum_k |h_k| |z_i|^k)` of the polynomial being evaluated.
    pub fn residuals(&self, sys: &NodeSystem) -> Residuals {
        let dh = self.h.derivative();
        let mut out = Residuals { value: 0.0, derivative: 0.0 };
        for n in sys.nodes() {
            let v = (self.h.eval(n.z) - n.z).norm() / self.h.eval_scale(n.z).max(1.0);
            let d = (dh.eval(n.z) - n.alpha).norm() / dh.eval_scale(n.z).max(1.0);
            out.value = out.value.max(v);
            out.derivative = out.derivative.max(d);
        }
        out
    }

    /// For nodes on a common line with unit direction `d`, every
    /// `pi^n_i = r_i * d^{2(n-1)}` with `r_i > 0`. Multiplying the leading
    /// coefficient by `d^{2(n-1)}` leaves `sum (alpha_i - 1) / r_i`, whose
    /// real part is negative when all `|alpha_i| < 1`.
    pub fn rotated_leading_coefficient(&self, direction: Complex64) -> Complex64 {
        let n = self.newton_coeffs.len() / 2;
        let d = direction / direction.norm();
        self.leading_coefficient * d.powu(2 * (n as u32).saturating_sub(1))
    }
}

pub fn synthesize(sys: &NodeSystem) -> SynthesisResult {
    let table = build_table(sys);
    let newton_coeffs = table.diagonal();
    let h = newton_to_monomial(&newton_coeffs, &table.doubled_nodes)
        .expect("table diagonal and doubled nodes have matching lengths");
    SynthesisResult {
        achieved_degree: h.degree(),
        leading_coefficient: table.top(),
        h,
        newton_coeffs,
        doubled_nodes: table.doubled_nodes,
    }
}
