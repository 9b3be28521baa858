//! Discretized energy minimization: W(K) = inf wᵀMw over the probability
//! simplex for the kernel |ln|x−y||^σ, and C(K) = 1/W(K).
//!
//! Grids store offsets from a common origin, so kernel entries depend only on
//! point differences and translating a grid leaves the matrix, the energy,
//! and the capacity bit-for-bit unchanged. The minimizer is Frank–Wolfe with
//! exact line search for the quadratic objective; the duality gap at
//! termination certifies how far the reported energy can sit above the
//! discrete optimum (for positive-definite kernels, i.e. σ = 1).

use crate::error::{Error, Result};

/// Finite grid on a compact subset of the line, diameter < 1.
#[derive(Debug, Clone)]
pub struct CompactSetGrid {
    origin: f64,
    /// Sorted, distinct, first offset is 0.
    offsets: Vec<f64>,
    /// Representative cell width per point.
    cell: Vec<f64>,
}

impl CompactSetGrid {
    /// Cell-centered uniform grid over a union of disjoint closed intervals;
    /// `points_per_unit` is the resolution (points per unit length).
    pub fn from_intervals(intervals: &[(f64, f64)], points_per_unit: u32) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidInput("no intervals".into()));
        }
        if points_per_unit == 0 {
            return Err(Error::InvalidInput("resolution must be positive".into()));
        }
        let mut sorted = intervals.to_vec();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        for w in sorted.windows(2) {
            if w[0].1 >= w[1].0 {
                return Err(Error::InvalidInput("intervals must be disjoint".into()));
            }
        }
        let origin = sorted[0].0;
        let diameter = sorted.last().unwrap().1 - origin;
        if !(diameter < 1.0) {
            return Err(Error::InvalidInput(format!(
                "set diameter {diameter} must be < 1 for the log kernel"
            )));
        }
        let mut offsets = Vec::new();
        let mut cell = Vec::new();
        for &(a, b) in &sorted {
            if !(a < b) {
                return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
            }
            let len = b - a;
            let n = ((len * points_per_unit as f64).ceil() as usize).max(2);
            let h = len / n as f64;
            for j in 0..n {
                offsets.push((a - origin) + (j as f64 + 0.5) * h);
                cell.push(h);
            }
        }
        Ok(CompactSetGrid {
            origin,
            offsets,
            cell,
        })
    }

    /// A point cloud with a common cell width `delta` per point.
    pub fn from_points(points: &[f64], delta: f64) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty point cloud".into()));
        }
        if !(delta > 0.0) {
            return Err(Error::InvalidInput("cell width must be positive".into()));
        }
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.dedup();
        let origin = sorted[0];
        let diameter = sorted.last().unwrap() - origin;
        if !(diameter < 1.0) {
            return Err(Error::InvalidInput(format!(
                "cloud diameter {diameter} must be < 1"
            )));
        }
        let offsets: Vec<f64> = sorted.iter().map(|&p| p - origin).collect();
        let cell = vec![delta; offsets.len()];
        Ok(CompactSetGrid {
            origin,
            offsets,
            cell,
        })
    }

    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }

    pub fn points(&self) -> Vec<f64> {
        self.offsets.iter().map(|o| self.origin + o).collect()
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    pub fn cell_widths(&self) -> &[f64] {
        &self.cell
    }

    /// Shift every point by a constant. Kernel entries are functions of
    /// offset differences, so this cannot change any downstream number.
    pub fn translate(&self, c: f64) -> Self {
        CompactSetGrid {
            origin: self.origin + c,
            offsets: self.offsets.clone(),
            cell: self.cell.clone(),
        }
    }

    /// Keep only the points whose indices are in `keep` (for subset audits).
    pub fn subset(&self, keep: &[usize]) -> Result<Self> {
        let mut offsets = Vec::with_capacity(keep.len());
        let mut cell = Vec::with_capacity(keep.len());
        for &i in keep {
            if i >= self.len() {
                return Err(Error::InvalidInput(format!("index {i} out of range")));
            }
            offsets.push(self.offsets[i]);
            cell.push(self.cell[i]);
        }
        if offsets.is_empty() {
            return Err(Error::InvalidInput("empty subset".into()));
        }
        Ok(CompactSetGrid {
            origin: self.origin,
            offsets,
            cell,
        })
    }
}

/// Diagonal (self-energy) model for a grid cell of width δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelfEnergyRule {
    /// |ln(δ/2)|^σ: a point carrying the mass of a width-δ cell.
    HalfCell,
    /// |ln(d/2)|^σ with d the distance to the nearest neighbor.
    NearestNeighbor,
    /// Exact self-energy of uniform mass on a width-δ cell, σ = 1 only:
    /// (1/δ²)∬ −ln|u−v| = 3/2 − ln δ.
    CellIntegral,
}

/// Dense symmetric kernel matrix.
#[derive(Debug, Clone)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

/// M[i][j] = |ln|xᵢ−xⱼ||^σ off the diagonal, with the chosen self-energy rule
/// on the diagonal.
pub fn kernel_matrix(grid: &CompactSetGrid, sigma: f64, rule: SelfEnergyRule) -> Result<SymMatrix> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidInput("sigma must be positive".into()));
    }
    if rule == SelfEnergyRule::CellIntegral && sigma != 1.0 {
        return Err(Error::InvalidInput(
            "the exact cell integral is implemented for sigma = 1 only".into(),
        ));
    }
    let n = grid.len();
    let off = grid.offsets();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (off[j] - off[i]).abs();
            if d == 0.0 {
                return Err(Error::InvalidInput("duplicate grid points".into()));
            }
            let v = d.ln().abs().powf(sigma);
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    for i in 0..n {
        let v = match rule {
            SelfEnergyRule::HalfCell => (grid.cell[i] / 2.0).ln().abs().powf(sigma),
            SelfEnergyRule::NearestNeighbor => {
                let mut nn = f64::INFINITY;
                if i > 0 {
                    nn = nn.min(off[i] - off[i - 1]);
                }
                if i + 1 < n {
                    nn = nn.min(off[i + 1] - off[i]);
                }
                if !nn.is_finite() {
                    nn = grid.cell[i];
                }
                (nn / 2.0).ln().abs().powf(sigma)
            }
            SelfEnergyRule::CellIntegral => 1.5 - grid.cell[i].ln(),
        };
        data[i * n + i] = v;
    }
    Ok(SymMatrix { n, data })
}

/// Output of the simplex energy minimization.
#[derive(Debug, Clone)]
pub struct EquilibriumResult {
    pub weights: Vec<f64>,
    pub energy: f64,
    pub capacity: f64,
    pub iterations: usize,
    pub duality_gap: f64,
    pub converged: bool,
}

/// Frank–Wolfe from the uniform start: move toward the vertex of smallest
/// gradient coordinate (ties to the lowest index) with exact line search,
/// until the duality gap drops below `tol` or `max_iter` is reached.
pub fn minimize_energy(m: &SymMatrix, tol: f64, max_iter: usize) -> Result<EquilibriumResult> {
    let n = m.dim();
    if n == 0 {
        return Err(Error::InvalidInput("empty matrix".into()));
    }
    let mut x = vec![1.0 / n as f64; n];
    // s = Mx, maintained incrementally; E = xᵀMx
    let mut s = vec![0.0; n];
    for i in 0..n {
        s[i] = m.row(i).iter().zip(&x).map(|(a, b)| a * b).sum();
    }
    let mut energy: f64 = x.iter().zip(&s).map(|(a, b)| a * b).sum();
    let mut iterations = 0;
    while iterations < max_iter {
        // gradient of xᵀMx is 2s; the linear minimization oracle is a vertex
        let mut i_min = 0;
        let mut s_min = s[0];
        for (i, &si) in s.iter().enumerate().skip(1) {
            if si < s_min {
                s_min = si;
                i_min = i;
            }
        }
        if 2.0 * (energy - s_min) < tol {
            break;
        }
        // exact line search along d = e_{i_min} − x for the quadratic:
        // η* = (E − s_i)/(E − 2s_i + M_ii), clamped to [0, 1]
        let denom = energy - 2.0 * s_min + m.at(i_min, i_min);
        let eta = if denom > 0.0 {
            ((energy - s_min) / denom).clamp(0.0, 1.0)
        } else {
            1.0
        };
        energy = (1.0 - eta) * (1.0 - eta) * energy
            + 2.0 * eta * (1.0 - eta) * s_min
            + eta * eta * m.at(i_min, i_min);
        let one_minus = 1.0 - eta;
        for xi in x.iter_mut() {
            *xi *= one_minus;
        }
        x[i_min] += eta;
        let col = m.row(i_min);
        for (si, &ci) in s.iter_mut().zip(col) {
            *si = one_minus * *si + eta * ci;
        }
        iterations += 1;
        if iterations % 4096 == 0 {
            // counter simplex drift; the update is affine so this is cheap
            let sum: f64 = x.iter().sum();
            for xi in x.iter_mut() {
                *xi /= sum;
            }
            for si in s.iter_mut() {
                *si /= sum;
            }
            energy /= sum * sum;
        }
    }
    // recompute the certificate from scratch before reporting
    for i in 0..n {
        s[i] = m.row(i).iter().zip(&x).map(|(a, b)| a * b).sum();
    }
    energy = x.iter().zip(&s).map(|(a, b)| a * b).sum();
    let s_min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    let gap = 2.0 * (energy - s_min);
    let converged = gap < tol;
    Ok(EquilibriumResult {
        weights: x,
        energy,
        capacity: 1.0 / energy,
        iterations,
        duality_gap: gap,
        converged,
    })
}

/// One refinement level of a capacity run.
#[derive(Debug, Clone)]
pub struct RefinementRow {
    pub resolution: u32,
    pub points: usize,
    pub energy: f64,
    pub capacity: f64,
    pub duality_gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Minimum energy and capacity of an interval union across grid resolutions.
pub fn capacity(
    intervals: &[(f64, f64)],
    sigma: f64,
    resolutions: &[u32],
    rule: SelfEnergyRule,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<RefinementRow>> {
    let mut rows = Vec::with_capacity(resolutions.len());
    for &r in resolutions {
        let grid = CompactSetGrid::from_intervals(intervals, r)?;
        let m = kernel_matrix(&grid, sigma, rule)?;
        let eq = minimize_energy(&m, tol, max_iter)?;
        rows.push(RefinementRow {
            resolution: r,
            points: grid.len(),
            energy: eq.energy,
            capacity: eq.capacity,
            duality_gap: eq.duality_gap,
            iterations: eq.iterations,
            converged: eq.converged,
        });
    }
    Ok(rows)
}

/// One refinement level of a zero-capacity audit.
#[derive(Debug, Clone)]
pub struct EvidenceRow {
    pub delta: f64,
    pub energy: f64,
    pub capacity: f64,
    pub duality_gap: f64,
    /// ΔW/Δln(1/δ) against the previous row.
    pub log_slope: Option<f64>,
}

/// Shrinks the cell width over a finite point cloud and reports the growth of
/// the minimum energy: W → ∞ (so C → 0) as δ → 0 is the computable evidence
/// that the cloud's limit set carries no capacity.
pub fn zero_capacity_evidence(
    points: &[f64],
    sigma: f64,
    deltas: &[f64],
    rule: SelfEnergyRule,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<EvidenceRow>> {
    if deltas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::InvalidInput("delta schedule must be strictly decreasing".into()));
    }
    let mut rows: Vec<EvidenceRow> = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        let grid = CompactSetGrid::from_points(points, delta)?;
        let m = kernel_matrix(&grid, sigma, rule)?;
        let eq = minimize_energy(&m, tol, max_iter)?;
        let log_slope = rows.last().map(|prev: &EvidenceRow| {
            (eq.energy - prev.energy) / ((1.0 / delta).ln() - (1.0 / prev.delta).ln())
        });
        rows.push(EvidenceRow {
            delta,
            energy: eq.energy,
            capacity: eq.capacity,
            duality_gap: eq.duality_gap,
            log_slope,
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_matrix() {
        let grid = CompactSetGrid::from_points(&[0.25, 0.75], 1e-3).unwrap();
        let m = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        assert!((m.at(0, 1) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((m.at(0, 0) - (5e-4f64).ln().abs()).abs() < 1e-12);
        // σ = 2 entries are squares of σ = 1 entries
        let m2 = kernel_matrix(&grid, 2.0, SelfEnergyRule::HalfCell).unwrap();
        assert!((m2.at(0, 1) - m.at(0, 1) * m.at(0, 1)).abs() < 1e-15);
    }

    #[test]
    fn single_point_weight_one() {
        let grid = CompactSetGrid::from_points(&[0.3], 1e-2).unwrap();
        let m = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        let eq = minimize_energy(&m, 1e-9, 100).unwrap();
        assert_eq!(eq.weights, vec![1.0]);
        assert_eq!(eq.energy, (5e-3f64).ln().abs());
        assert!(eq.converged);
    }

    #[test]
    fn symmetric_pair_splits_evenly() {
        let grid = CompactSetGrid::from_points(&[0.2, 0.8], 1e-3).unwrap();
        let m = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        let eq = minimize_energy(&m, 1e-12, 200_000).unwrap();
        assert!((eq.weights[0] - 0.5).abs() < 1e-6, "{:?}", eq.weights);
        assert!(eq.converged);
    }

    #[test]
    fn interval_robin_constant() {
        // interval of length 1/2: continuum energy ln(4/L) = ln 8
        let rows = capacity(
            &[(0.1, 0.6)],
            1.0,
            &[802],
            SelfEnergyRule::HalfCell,
            1e-4,
            2_000_000,
        )
        .unwrap();
        let w = rows[0].energy;
        let target = 8f64.ln();
        assert!((w - target).abs() / target < 0.02, "W = {w}, want {target}");
        assert!(rows[0].converged);
    }

    #[test]
    fn translation_invariance_exact() {
        let grid = CompactSetGrid::from_intervals(&[(0.1, 0.35), (0.4, 0.6)], 300).unwrap();
        let shifted = grid.translate(0.17);
        let m1 = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        let m2 = kernel_matrix(&shifted, 1.0, SelfEnergyRule::HalfCell).unwrap();
        assert_eq!(m1.data, m2.data);
        let e1 = minimize_energy(&m1, 1e-5, 100_000).unwrap();
        let e2 = minimize_energy(&m2, 1e-5, 100_000).unwrap();
        assert_eq!(e1.energy, e2.energy);
        assert_eq!(e1.capacity, e2.capacity);
        assert_eq!(e1.weights, e2.weights);
    }

    #[test]
    fn monotone_under_set_inclusion() {
        let big = CompactSetGrid::from_intervals(&[(0.1, 0.6)], 400).unwrap();
        let keep: Vec<usize> = (0..big.len() / 2).collect();
        let small = big.subset(&keep).unwrap();
        let tol = 1e-6;
        let w_big = minimize_energy(
            &kernel_matrix(&big, 1.0, SelfEnergyRule::HalfCell).unwrap(),
            tol,
            500_000,
        )
        .unwrap();
        let w_small = minimize_energy(
            &kernel_matrix(&small, 1.0, SelfEnergyRule::HalfCell).unwrap(),
            tol,
            500_000,
        )
        .unwrap();
        assert!(w_small.energy >= w_big.energy - tol);
    }

    #[test]
    fn simplex_feasible_throughout() {
        let grid = CompactSetGrid::from_intervals(&[(0.2, 0.5)], 200).unwrap();
        let m = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        let eq = minimize_energy(&m, 1e-5, 200_000).unwrap();
        let sum: f64 = eq.weights.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(eq.weights.iter().all(|&w| w >= 0.0));
        assert!(eq.duality_gap >= 0.0);
    }

    #[test]
    fn single_point_formula_along_schedule() {
        let rows = zero_capacity_evidence(
            &[0.42],
            1.0,
            &[1e-2, 1e-4, 1e-6],
            SelfEnergyRule::HalfCell,
            1e-9,
            100,
        )
        .unwrap();
        for row in &rows {
            assert_eq!(row.energy, (row.delta / 2.0).ln().abs());
        }
        assert!(rows[1].energy > rows[0].energy);
        assert!(rows[2].energy > rows[1].energy);
        // d|ln(δ/2)|/d ln(1/δ) = 1
        assert!((rows[1].log_slope.unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cloud_energy_grows_under_refinement() {
        let pts: Vec<f64> = (0..10).map(|i| 0.3 + 0.02 * i as f64).collect();
        let rows = zero_capacity_evidence(
            &pts,
            2.0,
            &[1e-2, 1e-3, 1e-4],
            SelfEnergyRule::HalfCell,
            1e-8,
            200_000,
        )
        .unwrap();
        assert!(rows[1].energy > rows[0].energy);
        assert!(rows[2].energy > rows[1].energy);
    }

    #[test]
    fn energy_nonincreasing_over_iterations() {
        let grid = CompactSetGrid::from_intervals(&[(0.15, 0.55)], 150).unwrap();
        let m = kernel_matrix(&grid, 1.0, SelfEnergyRule::HalfCell).unwrap();
        let coarse = minimize_energy(&m, 0.0, 50).unwrap();
        let fine = minimize_energy(&m, 0.0, 5000).unwrap();
        assert!(fine.energy <= coarse.energy + 1e-12);
    }

    #[test]
    fn diameter_guard() {
        assert!(CompactSetGrid::from_intervals(&[(0.0, 1.2)], 10).is_err());
        assert!(CompactSetGrid::from_points(&[0.0, 0.5, 1.5], 1e-3).is_err());
    }
}
