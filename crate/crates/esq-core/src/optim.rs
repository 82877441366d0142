//! Gradient-free minimizers: golden-section line search and a fixed-coefficient
//! Nelder-Mead simplex. Both are deterministic given their inputs.

/// Golden-section minimization of `f` on `[a, b]`.
/// Runs `iters` interval reductions; returns the best point and value.
pub fn golden_section<F: FnMut(f64) -> f64>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    iters: usize,
    evals: &mut u64,
) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    *evals += 2;
    for _ in 0..iters {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        *evals += 1;
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Standard Nelder-Mead with fixed coefficients
/// (reflect 1, expand 2, contract 0.5, shrink 0.5).
///
/// The initial simplex is `x0` plus one vertex per coordinate at
/// `x0 + step·e_i`. Stops after `max_iters` iterations or when the spread
/// of vertex values falls below `value_tol`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    step: f64,
    max_iters: usize,
    value_tol: f64,
    evals: &mut u64,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();
    *evals += (n + 1) as u64;

    for _ in 0..max_iters {
        // order: best first
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("non-NaN objective"));
        let reordered: Vec<Vec<f64>> = order.iter().map(|&i| simplex[i].clone()).collect();
        let revalues: Vec<f64> = order.iter().map(|&i| values[i]).collect();
        simplex = reordered;
        values = revalues;

        if values[n] - values[0] < value_tol {
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let worst = simplex[n].clone();
        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(1.0);
        let fr = f(&reflected);
        *evals += 1;
        if fr < values[0] {
            let expanded = lerp(2.0);
            let fe = f(&expanded);
            *evals += 1;
            if fe < fr {
                simplex[n] = expanded;
                values[n] = fe;
            } else {
                simplex[n] = reflected;
                values[n] = fr;
            }
        } else if fr < values[n - 1] {
            simplex[n] = reflected;
            values[n] = fr;
        } else {
            let contracted = if fr < values[n] { lerp(0.5) } else { lerp(-0.5) };
            let fc = f(&contracted);
            *evals += 1;
            if fc < values[n].min(fr) {
                simplex[n] = contracted;
                values[n] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0].clone();
                for (v, val) in simplex.iter_mut().zip(values.iter_mut()).skip(1) {
                    for (x, b) in v.iter_mut().zip(&best) {
                        *x = b + 0.5 * (*x - b);
                    }
                    *val = f(v);
                    *evals += 1;
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    (simplex[best].clone(), values[best])
}
