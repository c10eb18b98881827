//! Derivative-free Nelder-Mead simplex search.
//!
//! Works in any dimension >= 1 (in one dimension the simplex is an interval
//! and the moves reduce to a bracketing search). Objective values of NaN are
//! treated as negative infinity, so likelihood code can signal invalid
//! regions without special-casing.

#[derive(Debug, Clone)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn worst_first(points: &mut [(Vec<f64>, f64)]) {
    // ascending by objective: best first (we maximize via negation outside)
    points.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Maximizes `f` starting from `x0`; the initial simplex steps `step` in
/// each coordinate. Convergence: simplex diameter below `rel_tol` relative
/// to the scale of the best vertex.
pub fn maximize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: &[f64],
    step: f64,
    rel_tol: f64,
    max_iter: usize,
) -> SimplexResult {
    let dim = x0.len();
    assert!(dim >= 1);
    let g = |x: &[f64]| sanitize(-f(x));

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((x0.to_vec(), g(x0)));
    for i in 0..dim {
        let mut x = x0.to_vec();
        x[i] += step;
        let fx = g(&x);
        simplex.push((x, fx));
    }

    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        worst_first(&mut simplex);

        let scale = 1.0 + simplex[0].0.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let diameter = simplex
            .iter()
            .skip(1)
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if diameter < rel_tol * scale {
            converged = true;
            break;
        }

        iterations += 1;
        let worst = simplex.len() - 1;
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..worst].iter().map(|(x, _)| x[j]).sum::<f64>() / worst as f64)
            .collect();

        let reflect: Vec<f64> = (0..dim)
            .map(|j| centroid[j] + alpha * (centroid[j] - simplex[worst].0[j]))
            .collect();
        let f_reflect = g(&reflect);

        if f_reflect < simplex[0].1 {
            // try expanding further
            let expand: Vec<f64> = (0..dim)
                .map(|j| centroid[j] + gamma * (reflect[j] - centroid[j]))
                .collect();
            let f_expand = g(&expand);
            simplex[worst] = if f_expand < f_reflect {
                (expand, f_expand)
            } else {
                (reflect, f_reflect)
            };
            continue;
        }
        if f_reflect < simplex[worst - 1].1 {
            simplex[worst] = (reflect, f_reflect);
            continue;
        }

        let contract: Vec<f64> = if f_reflect < simplex[worst].1 {
            (0..dim)
                .map(|j| centroid[j] + rho * (reflect[j] - centroid[j]))
                .collect()
        } else {
            (0..dim)
                .map(|j| centroid[j] - rho * (centroid[j] - simplex[worst].0[j]))
                .collect()
        };
        let f_contract = g(&contract);
        if f_contract < simplex[worst].1.min(f_reflect) {
            simplex[worst] = (contract, f_contract);
            continue;
        }

        // shrink toward the best vertex
        let best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for j in 0..dim {
                x[j] = best[j] + sigma * (x[j] - best[j]);
            }
            *fx = g(x);
        }
    }

    worst_first(&mut simplex);
    let (x, fneg) = simplex.swap_remove(0);
    SimplexResult {
        x,
        fx: -fneg,
        iterations,
        converged,
    }
}
