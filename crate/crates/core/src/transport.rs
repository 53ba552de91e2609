//! Exact optimal transport between finite distributions and the Hausdorff
//! distance between finite subsets.

use crate::behavior::{support, Dist};
use crate::error::{Error, Result};
use crate::fibers::{Metric, TOL};

const PIVOT_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct TransportSolution {
    /// Support of the supply distribution, in carrier order.
    pub rows: Vec<usize>,
    /// Support of the demand distribution, in carrier order.
    pub cols: Vec<usize>,
    /// `plan[i][j]` is the mass moved from `rows[i]` to `cols[j]`.
    pub plan: Vec<Vec<f64>>,
    pub cost_value: f64,
    /// A nonexpansive potential over the whole carrier with minimum 0.
    pub potentials: Vec<f64>,
}

/// Kantorovich distance between two distributions over `d`'s carrier, with
/// an optimal plan and a dual certificate.
pub fn kantorovich(d: &Metric, mu: &Dist, nu: &Dist) -> Result<TransportSolution> {
    let n = d.carrier().size();
    if mu.carrier().size() != n || nu.carrier().size() != n {
        return Err(Error::CarrierMismatch {
            expected: n,
            found: if mu.carrier().size() != n { mu.carrier().size() } else { nu.carrier().size() },
        });
    }
    kantorovich_weights(d, mu.weights(), nu.weights())
}

pub(crate) fn kantorovich_weights(d: &Metric, mu: &[f64], nu: &[f64]) -> Result<TransportSolution> {
    let n = d.carrier().size();
    if mu.len() != n || nu.len() != n {
        return Err(Error::InvalidDistribution(format!(
            "weight vectors of length {} and {} over {n} points",
            mu.len(),
            nu.len()
        )));
    }
    let rows = support(mu);
    let cols = support(nu);
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::InvalidDistribution("empty support".into()));
    }
    let smass: f64 = rows.iter().map(|&i| mu[i]).sum();
    let tmass: f64 = cols.iter().map(|&j| nu[j]).sum();
    let supply: Vec<f64> = rows.iter().map(|&i| mu[i] / smass).collect();
    let demand: Vec<f64> = cols.iter().map(|&j| nu[j] / tmass).collect();
    let cost: Vec<Vec<f64>> = rows.iter().map(|&i| cols.iter().map(|&j| d.get(i, j)).collect()).collect();
    let (plan, _u, v) = transportation_simplex(&supply, &demand, &cost)?;
    let cost_value = plan.iter().zip(&cost).map(|(pr, cr)| pr.iter().zip(cr).map(|(p, c)| p * c).sum::<f64>()).sum();
    // k(z) = min_j (d(z, y_j) − v_j) is nonexpansive and attains the dual value.
    let mut potentials: Vec<f64> =
        (0..n).map(|z| cols.iter().zip(&v).map(|(&y, vj)| d.get(z, y) - vj).fold(f64::INFINITY, f64::min)).collect();
    let lo = potentials.iter().copied().fold(f64::INFINITY, f64::min);
    for p in potentials.iter_mut() {
        *p -= lo;
    }
    Ok(TransportSolution { rows, cols, plan, cost_value, potentials })
}

/// Just the optimal value.
pub(crate) fn kantorovich_value(d: &Metric, mu: &[f64], nu: &[f64]) -> Result<f64> {
    if mu.iter().zip(nu).all(|(a, b)| a == b) {
        return Ok(0.0);
    }
    Ok(kantorovich_weights(d, mu, nu)?.cost_value)
}

/// Plan, row potentials, column potentials.
pub type SimplexOutput = (Vec<Vec<f64>>, Vec<f64>, Vec<f64>);

/// Balanced transportation problem by the primal simplex on spanning-tree
/// bases: north-west-corner start, Bland's rule for entering and leaving
/// cells. Returns the plan and the dual potentials `(u, v)` with `u[0] = 0`.
pub fn transportation_simplex(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<SimplexOutput> {
    let (n, m) = (supply.len(), demand.len());
    if n == 0 || m == 0 {
        return Err(Error::InvalidDistribution("empty transport problem".into()));
    }
    let idx = |i: usize, j: usize| i * m + j;
    let mut flow = vec![0.0f64; n * m];
    let mut basic = vec![false; n * m];

    let (mut s, mut t) = (supply.to_vec(), demand.to_vec());
    let (mut i, mut j) = (0, 0);
    loop {
        let q = s[i].min(t[j]);
        flow[idx(i, j)] = q;
        basic[idx(i, j)] = true;
        s[i] -= q;
        t[j] -= q;
        if i == n - 1 && j == m - 1 {
            break;
        }
        if i == n - 1 {
            j += 1;
        } else if j == m - 1 || s[i] <= t[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    // Any rounding left over lands in the last cell.
    flow[idx(n - 1, m - 1)] += s[n - 1].max(t[m - 1]);

    let max_iter = 10_000 * (n + m);
    for _ in 0..max_iter {
        let (u, v) = potentials(n, m, &basic, cost);
        let entering = (0..n * m).find(|&c| !basic[c] && cost[c / m][c % m] - u[c / m] - v[c % m] < -PIVOT_TOL);
        let Some(e) = entering else {
            let plan = (0..n).map(|i| flow[i * m..(i + 1) * m].to_vec()).collect();
            return Ok((plan, u, v));
        };
        let (ei, ej) = (e / m, e % m);
        // Tree path from column node ej back to row node ei.
        let path = tree_path(n, m, &basic, ei, n + ej);
        // Cells along the path alternate −, +, −, ... starting at the row.
        let cells: Vec<usize> = path
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                if a < n {
                    idx(a, b - n)
                } else {
                    idx(b, a - n)
                }
            })
            .collect();
        let minus: Vec<usize> = cells.iter().copied().step_by(2).collect();
        let theta = minus.iter().map(|&c| flow[c]).fold(f64::INFINITY, f64::min);
        let leaving = *minus.iter().filter(|&&c| flow[c] <= theta).min().expect("cycle has a decreasing cell");
        for (k, &c) in cells.iter().enumerate() {
            if k % 2 == 0 {
                flow[c] -= theta;
            } else {
                flow[c] += theta;
            }
        }
        flow[e] = theta;
        basic[e] = true;
        basic[leaving] = false;
        flow[leaving] = 0.0;
    }
    Err(Error::Precondition("transportation simplex exceeded its iteration limit".into()))
}

fn tree_adjacency(n: usize, m: usize, basic: &[bool]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n + m];
    for (c, _) in basic.iter().enumerate().filter(|(_, &b)| b) {
        let (i, j) = (c / m, c % m);
        adj[i].push(n + j);
        adj[n + j].push(i);
    }
    adj
}

fn potentials(n: usize, m: usize, basic: &[bool], cost: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let adj = tree_adjacency(n, m, basic);
    let mut val = vec![f64::NAN; n + m];
    val[0] = 0.0;
    let mut stack = vec![0usize];
    while let Some(a) = stack.pop() {
        for &b in &adj[a] {
            if val[b].is_nan() {
                val[b] = if a < n { cost[a][b - n] - val[a] } else { cost[b][a - n] - val[a] };
                stack.push(b);
            }
        }
    }
    (val[..n].to_vec(), val[n..].to_vec())
}

/// Node path from `from` to `to` in the basis tree, both endpoints included.
fn tree_path(n: usize, m: usize, basic: &[bool], from: usize, to: usize) -> Vec<usize> {
    let adj = tree_adjacency(n, m, basic);
    let mut parent = vec![usize::MAX; n + m];
    parent[from] = from;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(a) = queue.pop_front() {
        if a == to {
            break;
        }
        for &b in &adj[a] {
            if parent[b] == usize::MAX {
                parent[b] = a;
                queue.push_back(b);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = parent[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Checks the plan marginals, nonexpansiveness of the potentials, and that
/// the potentials attain the primal cost.
pub fn verify_duality(sol: &TransportSolution, d: &Metric, mu: &Dist, nu: &Dist) -> bool {
    let n = d.carrier().size();
    if sol.potentials.len() != n {
        return false;
    }
    let k = &sol.potentials;
    for x in 0..n {
        for y in 0..n {
            if (k[x] - k[y]).abs() > d.get(x, y) + TOL {
                return false;
            }
        }
    }
    let dual: f64 = (0..n).map(|x| k[x] * (mu.weights()[x] - nu.weights()[x])).sum();
    if (dual.abs() - sol.cost_value).abs() > 1e-7 {
        return false;
    }
    let primal: f64 = sol
        .rows
        .iter()
        .enumerate()
        .map(|(i, &x)| sol.cols.iter().enumerate().map(|(j, &y)| sol.plan[i][j] * d.get(x, y)).sum::<f64>())
        .sum();
    if (primal - sol.cost_value).abs() > 1e-9 {
        return false;
    }
    marginal_error(sol, mu, nu) <= 1e-9
}

/// Largest deviation of the plan's row and column sums from the marginals.
pub fn marginal_error(sol: &TransportSolution, mu: &Dist, nu: &Dist) -> f64 {
    let mut err: f64 = 0.0;
    for (i, &x) in sol.rows.iter().enumerate() {
        err = err.max((sol.plan[i].iter().sum::<f64>() - mu.weights()[x]).abs());
    }
    for (j, &y) in sol.cols.iter().enumerate() {
        err = err.max((sol.plan.iter().map(|r| r[j]).sum::<f64>() - nu.weights()[y]).abs());
    }
    if sol.plan.iter().flatten().any(|&p| p < -1e-12) {
        return f64::INFINITY;
    }
    err
}

/// `max(sup_{a∈A} inf_{b∈B} d(a,b), sup_{b∈B} inf_{a∈A} d(a,b))` with
/// `sup ∅ = 0` and `inf ∅ = 1`.
pub fn hausdorff(d: &Metric, a: &[usize], b: &[usize]) -> f64 {
    hausdorff_by(a.len(), b.len(), |i, j| d.get(a[i], b[j]))
}

/// Hausdorff formula over an arbitrary distance between index sets.
pub(crate) fn hausdorff_by(na: usize, nb: usize, dist: impl Fn(usize, usize) -> f64) -> f64 {
    let inf_over_b = |i: usize| (0..nb).map(|j| dist(i, j)).fold(1.0, f64::min);
    let inf_over_a = |j: usize| (0..na).map(|i| dist(i, j)).fold(1.0, f64::min);
    let left = (0..na).map(inf_over_b).fold(0.0, f64::max);
    let right = (0..nb).map(inf_over_a).fold(0.0, f64::max);
    left.max(right)
}
