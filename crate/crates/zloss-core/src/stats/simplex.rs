//! Derivative-free Nelder-Mead simplex minimizer, used by the skew-normal
//! maximum-likelihood fit.

pub(crate) struct SimplexResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub converged: bool,
}

/// Minimizes `f` starting from `x0` with per-dimension initial steps.
///
/// Terminates when both the simplex spread in parameter space and the spread
/// of function values fall under the tolerances, or after `max_iter`
/// iterations. Standard reflection/expansion/contraction/shrink coefficients.
pub(crate) fn nelder_mead<F>(
    f: F,
    x0: &[f64],
    steps: &[f64],
    x_tol: f64,
    f_tol: f64,
    max_iter: usize,
) -> SimplexResult
where
    F: Fn(&[f64]) -> f64,
{
    let dim = x0.len();
    let (rho, chi, gamma, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += steps[i];
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let mut converged = false;
    for _ in 0..max_iter {
        // Order best to worst.
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap_or(std::cmp::Ordering::Equal));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        let x_spread = (0..dim)
            .map(|d| {
                let lo = simplex.iter().map(|v| v[d]).fold(f64::INFINITY, f64::min);
                let hi = simplex.iter().map(|v| v[d]).fold(f64::NEG_INFINITY, f64::max);
                hi - lo
            })
            .fold(0.0_f64, f64::max);
        let f_spread = values[dim] - values[0];
        if x_spread <= x_tol && f_spread.abs() <= f_tol && values[0].is_finite() {
            converged = true;
            break;
        }

        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for v in simplex.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += v[d] / dim as f64;
            }
        }

        let worst = simplex[dim].clone();
        let reflect: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + rho * (centroid[d] - worst[d]))
            .collect();
        let f_reflect = f(&reflect);

        if f_reflect < values[0] {
            let expand: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + chi * (reflect[d] - centroid[d]))
                .collect();
            let f_expand = f(&expand);
            if f_expand < f_reflect {
                simplex[dim] = expand;
                values[dim] = f_expand;
            } else {
                simplex[dim] = reflect;
                values[dim] = f_reflect;
            }
        } else if f_reflect < values[dim - 1] {
            simplex[dim] = reflect;
            values[dim] = f_reflect;
        } else {
            let (anchor, f_anchor) = if f_reflect < values[dim] {
                (&reflect, f_reflect)
            } else {
                (&worst, values[dim])
            };
            let contract: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + gamma * (anchor[d] - centroid[d]))
                .collect();
            let f_contract = f(&contract);
            if f_contract < f_anchor {
                simplex[dim] = contract;
                values[dim] = f_contract;
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].clone();
                for v in simplex.iter_mut().skip(1) {
                    for d in 0..dim {
                        v[d] = best[d] + sigma * (v[d] - best[d]);
                    }
                }
                for i in 1..=dim {
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=dim {
        if values[i] < values[best] {
            best = i;
        }
    }
    SimplexResult {
        x: simplex[best].clone(),
        f: values[best],
        converged,
    }
}
