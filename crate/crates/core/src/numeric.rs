//! Small numerical kernels: compensated summation, elementary symmetric
//! polynomials and sweep statistics.

/// Neumaier-compensated sum. Result does not depend on where large and
/// small terms sit in the sequence beyond the last ulp.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Elementary symmetric polynomials `e_0..=e_n` of `xs`, via the
/// product-expansion recurrence `e_k <- e_k + x * e_{k-1}`.
pub fn elementary_symmetric(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut e = vec![0.0; n + 1];
    e[0] = 1.0;
    for (i, &x) in xs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += x * e[k - 1];
        }
    }
    e
}

/// Mean, maximum absolute deviation from the mean, and max |sample|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub max_abs_dev: f64,
    pub max_abs: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleStats {
    pub fn of(samples: &[f64]) -> Self {
        assert!(!samples.is_empty(), "statistics of an empty sample");
        let mean = compensated_sum(samples.iter().copied()) / samples.len() as f64;
        let mut max_abs_dev = 0.0_f64;
        let mut max_abs = 0.0_f64;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for &s in samples {
            max_abs_dev = max_abs_dev.max((s - mean).abs());
            max_abs = max_abs.max(s.abs());
            min = min.min(s);
            max = max.max(s);
        }
        SampleStats {
            mean,
            max_abs_dev,
            max_abs,
            min,
            max,
        }
    }

    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// `n` uniform samples of `[start, start + period)`.
pub fn uniform_grid(start: f64, period: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|j| start + period * j as f64 / n as f64)
        .collect()
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting. `None` if
/// a pivot falls below `1e-14` times the largest entry of `a`.
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let norm = a.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-14 * norm {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let (top, bottom) = a.split_at_mut(row);
            let pivot_row = &top[col];
            let f = bottom[0][col] / pivot_row[col];
            for (dst, src) in bottom[0][col..].iter_mut().zip(&pivot_row[col..]) {
                *dst -= f * src;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Median of a non-empty sample.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
