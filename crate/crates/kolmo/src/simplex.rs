//! Phase-one simplex for feasibility of `A x = b, x ≥ 0`.
//!
//! Dense tableau with one artificial variable per row and Bland's rule for
//! both the entering and the leaving variable, so the method terminates
//! without cycling. Intended for the small systems produced by the
//! correlation polytope (a few dozen rows, up to `2^16` columns).

/// Outcome of a feasibility solve.
#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    /// A basic feasible point; `residual` is `‖A x − b‖_∞`.
    Feasible { x: Vec<f64>, residual: f64 },
    /// The minimal total artificial mass is `infeasibility > tolerance`.
    Infeasible { infeasibility: f64 },
}

const PIVOT_EPS: f64 = 1e-12;

/// Solves the phase-one problem `min Σ a  s.t.  A x + a = b, x, a ≥ 0`.
/// `rows` is row-major with equal lengths.
pub fn phase_one(rows: &[Vec<f64>], rhs: &[f64], tolerance: f64) -> Feasibility {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    assert_eq!(rhs.len(), m, "one right-hand side per row");
    assert!(rows.iter().all(|r| r.len() == n), "rows must have equal length");

    // Tableau columns: n structural, m artificial, then the rhs.
    let width = n + m + 1;
    let mut t = vec![0.0; m * width];
    for (i, (row, &b)) in rows.iter().zip(rhs).enumerate() {
        let sign = if b < 0.0 { -1.0 } else { 1.0 };
        let r = &mut t[i * width..(i + 1) * width];
        for (dst, &a) in r[..n].iter_mut().zip(row) {
            *dst = sign * a;
        }
        r[n + i] = 1.0;
        r[width - 1] = sign * b;
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective: c_j - c_B B^{-1} A_j with
    // c = 1 on artificials, so z_j = -Σ_i t_ij over structural columns.
    let mut cost = vec![0.0; width];
    for i in 0..m {
        for j in 0..width {
            if j < n || j == width - 1 {
                cost[j] -= t[i * width + j];
            }
        }
    }

    // Bland: lowest-index column with negative reduced cost.
    while let Some(enter) = (0..n + m).find(|&j| cost[j] < -PIVOT_EPS) {
        // Ratio test; ties broken by the lowest basic variable index.
        let mut leave: Option<(usize, f64)> = None;
        for i in 0..m {
            let a = t[i * width + enter];
            if a > PIVOT_EPS {
                let ratio = t[i * width + width - 1] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio < best - PIVOT_EPS || (ratio <= best + PIVOT_EPS && basis[i] < basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
        }
        let Some((row, _)) = leave else {
            // Unbounded direction cannot occur for a bounded-below objective;
            // treat it as numerical noise and stop.
            break;
        };
        pivot(&mut t, &mut cost, width, m, row, enter);
        basis[row] = enter;
    }

    let infeasibility: f64 = -cost[width - 1];
    if infeasibility > tolerance {
        return Feasibility::Infeasible { infeasibility };
    }
    let mut x = vec![0.0; n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i * width + width - 1].max(0.0);
        }
    }
    let residual = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| (row.iter().zip(&x).map(|(a, v)| a * v).sum::<f64>() - b).abs())
        .fold(0.0, f64::max);
    Feasibility::Feasible { x, residual }
}

fn pivot(t: &mut [f64], cost: &mut [f64], width: usize, m: usize, row: usize, col: usize) {
    let p = t[row * width + col];
    for v in &mut t[row * width..(row + 1) * width] {
        *v /= p;
    }
    let pivot_row: Vec<f64> = t[row * width..(row + 1) * width].to_vec();
    for i in 0..m {
        if i == row {
            continue;
        }
        let f = t[i * width + col];
        if f != 0.0 {
            for (dst, &src) in t[i * width..(i + 1) * width].iter_mut().zip(&pivot_row) {
                *dst -= f * src;
            }
        }
    }
    let f = cost[col];
    if f != 0.0 {
        for (dst, &src) in cost.iter_mut().zip(&pivot_row) {
            *dst -= f * src;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_a_feasible_point() {
        // x + y = 1, x - y = 0
        let rows = vec![vec![1.0, 1.0], vec![1.0, -1.0]];
        match phase_one(&rows, &[1.0, 0.0], 1e-9) {
            Feasibility::Feasible { x, residual } => {
                assert!((x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12);
                assert!(residual < 1e-12);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn detects_infeasibility() {
        // x + y = 1, x + y = 2
        let rows = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(matches!(phase_one(&rows, &[1.0, 2.0], 1e-9), Feasibility::Infeasible { .. }));
        // x = -1 with x >= 0
        assert!(matches!(phase_one(&[vec![1.0]], &[-1.0], 1e-9), Feasibility::Infeasible { .. }));
    }

    #[test]
    fn degenerate_system_terminates() {
        // Redundant and degenerate rows that would cycle under Dantzig's rule
        // on some orderings; Bland's rule must terminate.
        let rows = vec![
            vec![1.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ];
        match phase_one(&rows, &[1.0, 0.0, 0.0, 0.0], 1e-9) {
            Feasibility::Feasible { x, residual } => {
                assert!(residual < 1e-12);
                assert!(x[0].abs() < 1e-12 && x[2].abs() < 1e-12);
            }
            other => panic!("expected feasible, got {other:?}"),
        }
    }
}
