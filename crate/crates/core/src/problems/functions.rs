// Family definitions. Indices are 0-based; comments use the same convention.

use super::Problem;

pub(super) fn srosenbr(name: &str, n: usize) -> Problem {
    let x0 = (0..n).map(|i| if i % 2 == 0 { -1.2 } else { 1.0 }).collect();
    Problem::from_fns(
        name,
        x0,
        |x| {
            x.chunks_exact(2)
                .map(|c| {
                    let t = c[1] - c[0] * c[0];
                    100.0 * t * t + (c[0] - 1.0).powi(2)
                })
                .sum()
        },
        |x, g| {
            for (c, gc) in x.chunks_exact(2).zip(g.chunks_exact_mut(2)) {
                let t = c[1] - c[0] * c[0];
                gc[0] = -400.0 * t * c[0] + 2.0 * (c[0] - 1.0);
                gc[1] = 200.0 * t;
            }
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn arwhead(name: &str, n: usize) -> Problem {
    let mut xstar = vec![1.0; n];
    xstar[n - 1] = 0.0;
    Problem::from_fns(
        name,
        vec![1.0; n],
        |x| {
            let last = x[x.len() - 1];
            x[..x.len() - 1]
                .iter()
                .map(|&xi| {
                    let q = xi * xi + last * last;
                    q * q - 4.0 * xi + 3.0
                })
                .sum()
        },
        |x, g| {
            let n = x.len();
            let last = x[n - 1];
            let mut gl = 0.0;
            for i in 0..n - 1 {
                let q = x[i] * x[i] + last * last;
                g[i] = 4.0 * q * x[i] - 4.0;
                gl += 4.0 * q * last;
            }
            g[n - 1] = gl;
        },
    )
    .with_minimizer(xstar, 0.0)
}

pub(super) fn woods(name: &str, n: usize) -> Problem {
    let x0 = (0..n).map(|i| if i % 2 == 0 { -3.0 } else { -1.0 }).collect();
    Problem::from_fns(
        name,
        x0,
        |x| {
            x.chunks_exact(4)
                .map(|c| {
                    let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
                    100.0 * (b - a * a).powi(2)
                        + (1.0 - a).powi(2)
                        + 90.0 * (d - cc * cc).powi(2)
                        + (1.0 - cc).powi(2)
                        + 10.1 * ((b - 1.0).powi(2) + (d - 1.0).powi(2))
                        + 19.8 * (b - 1.0) * (d - 1.0)
                })
                .sum()
        },
        |x, g| {
            for (c, gc) in x.chunks_exact(4).zip(g.chunks_exact_mut(4)) {
                let (a, b, cc, d) = (c[0], c[1], c[2], c[3]);
                gc[0] = -400.0 * a * (b - a * a) - 2.0 * (1.0 - a);
                gc[1] = 200.0 * (b - a * a) + 20.2 * (b - 1.0) + 19.8 * (d - 1.0);
                gc[2] = -360.0 * cc * (d - cc * cc) - 2.0 * (1.0 - cc);
                gc[3] = 180.0 * (d - cc * cc) + 20.2 * (d - 1.0) + 19.8 * (b - 1.0);
            }
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn liarwhd(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![4.0; n],
        |x| {
            let x1 = x[0];
            x.iter()
                .map(|&xi| 4.0 * (xi * xi - x1).powi(2) + (xi - 1.0).powi(2))
                .sum()
        },
        |x, g| {
            let x1 = x[0];
            let mut g1 = 0.0;
            for (gi, &xi) in g.iter_mut().zip(x) {
                let t = xi * xi - x1;
                *gi = 16.0 * xi * t + 2.0 * (xi - 1.0);
                g1 -= 8.0 * t;
            }
            g[0] += g1;
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn dqdrtic(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![3.0; n],
        |x| {
            x.windows(3)
                .map(|w| w[0] * w[0] + 100.0 * w[1] * w[1] + 100.0 * w[2] * w[2])
                .sum()
        },
        |x, g| {
            for i in 0..x.len() - 2 {
                g[i] += 2.0 * x[i];
                g[i + 1] += 200.0 * x[i + 1];
                g[i + 2] += 200.0 * x[i + 2];
            }
        },
    )
    .with_minimizer(vec![0.0; n], 0.0)
}

/// DQRTIC and QUARTC share the same definition: sum of (x_i - (i+1))^4.
pub(super) fn quartic(name: &str, n: usize) -> Problem {
    let xstar = (1..=n).map(|i| i as f64).collect();
    Problem::from_fns(
        name,
        vec![2.0; n],
        |x| {
            x.iter()
                .enumerate()
                .map(|(i, &xi)| (xi - (i + 1) as f64).powi(4))
                .sum()
        },
        |x, g| {
            for (i, (gi, &xi)) in g.iter_mut().zip(x).enumerate() {
                *gi = 4.0 * (xi - (i + 1) as f64).powi(3);
            }
        },
    )
    .with_minimizer(xstar, 0.0)
}

pub(super) fn tridia(name: &str, n: usize) -> Problem {
    let xstar = (0..n).map(|i| 0.5f64.powi(i as i32)).collect();
    Problem::from_fns(
        name,
        vec![1.0; n],
        |x| {
            let mut f = (x[0] - 1.0).powi(2);
            for i in 1..x.len() {
                let t = 2.0 * x[i] - x[i - 1];
                f += (i + 1) as f64 * t * t;
            }
            f
        },
        |x, g| {
            g[0] = 2.0 * (x[0] - 1.0);
            for i in 1..x.len() {
                let w = (i + 1) as f64;
                let t = 2.0 * x[i] - x[i - 1];
                g[i] += 4.0 * w * t;
                g[i - 1] -= 2.0 * w * t;
            }
        },
    )
    .with_minimizer(xstar, 0.0)
}

pub(super) fn dixon3dq(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![-1.0; n],
        |x| {
            let n = x.len();
            let mut f = (x[0] - 1.0).powi(2) + (x[n - 1] - 1.0).powi(2);
            for i in 1..n.saturating_sub(1) {
                f += (x[i] - x[i + 1]).powi(2);
            }
            f
        },
        |x, g| {
            let n = x.len();
            g[0] += 2.0 * (x[0] - 1.0);
            g[n - 1] += 2.0 * (x[n - 1] - 1.0);
            for i in 1..n.saturating_sub(1) {
                let t = 2.0 * (x[i] - x[i + 1]);
                g[i] += t;
                g[i + 1] -= t;
            }
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn powellsg(name: &str, n: usize) -> Problem {
    let x0 = (0..n).map(|i| [3.0, -1.0, 0.0, 1.0][i % 4]).collect();
    Problem::from_fns(
        name,
        x0,
        |x| {
            x.chunks_exact(4)
                .map(|c| {
                    (c[0] + 10.0 * c[1]).powi(2)
                        + 5.0 * (c[2] - c[3]).powi(2)
                        + (c[1] - 2.0 * c[2]).powi(4)
                        + 10.0 * (c[0] - c[3]).powi(4)
                })
                .sum()
        },
        |x, g| {
            for (c, gc) in x.chunks_exact(4).zip(g.chunks_exact_mut(4)) {
                let a = c[0] + 10.0 * c[1];
                let b = c[2] - c[3];
                let cc = (c[1] - 2.0 * c[2]).powi(3);
                let d = (c[0] - c[3]).powi(3);
                gc[0] = 2.0 * a + 40.0 * d;
                gc[1] = 20.0 * a + 4.0 * cc;
                gc[2] = 10.0 * b - 8.0 * cc;
                gc[3] = -10.0 * b - 40.0 * d;
            }
        },
    )
    .with_minimizer(vec![0.0; n], 0.0)
}

/// (sum_i (i+1) x_i^2)^2
pub(super) fn power(name: &str, n: usize) -> Problem {
    fn weighted(x: &[f64]) -> f64 {
        x.iter().enumerate().map(|(i, &v)| (i + 1) as f64 * v * v).sum()
    }
    Problem::from_fns(
        name,
        vec![1.0; n],
        |x| weighted(x).powi(2),
        |x, g| {
            let s = weighted(x);
            for (i, (gi, &xi)) in g.iter_mut().zip(x).enumerate() {
                *gi = 4.0 * s * (i + 1) as f64 * xi;
            }
        },
    )
    .with_minimizer(vec![0.0; n], 0.0)
}

pub(super) fn nondia(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![-1.0; n],
        |x| {
            let x1 = x[0];
            let mut f = (x1 - 1.0).powi(2);
            for &xj in &x[..x.len() - 1] {
                f += 100.0 * (x1 - xj * xj).powi(2);
            }
            f
        },
        |x, g| {
            let n = x.len();
            g[0] = 2.0 * (x[0] - 1.0);
            for j in 0..n - 1 {
                let t = x[0] - x[j] * x[j];
                g[0] += 200.0 * t;
                g[j] -= 400.0 * t * x[j];
            }
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn nonscomp(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![3.0; n],
        |x| {
            let mut f = (x[0] - 1.0).powi(2);
            for w in x.windows(2) {
                f += 4.0 * (w[1] - w[0] * w[0]).powi(2);
            }
            f
        },
        |x, g| {
            g[0] = 2.0 * (x[0] - 1.0);
            for i in 1..x.len() {
                let t = x[i] - x[i - 1] * x[i - 1];
                g[i] += 8.0 * t;
                g[i - 1] -= 16.0 * t * x[i - 1];
            }
        },
    )
    .with_minimizer(vec![1.0; n], 0.0)
}

pub(super) fn engval1(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![2.0; n],
        |x| {
            x.windows(2)
                .map(|w| {
                    let q = w[0] * w[0] + w[1] * w[1];
                    q * q - 4.0 * w[0] + 3.0
                })
                .sum()
        },
        |x, g| {
            for i in 0..x.len() - 1 {
                let q = x[i] * x[i] + x[i + 1] * x[i + 1];
                g[i] += 4.0 * q * x[i] - 4.0;
                g[i + 1] += 4.0 * q * x[i + 1];
            }
        },
    )
}

pub(super) fn edensch(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![0.0; n],
        |x| {
            16.0 + x
                .windows(2)
                .map(|w| {
                    (w[0] - 2.0).powi(4) + (w[1] * (w[0] - 2.0)).powi(2) + (w[1] + 1.0).powi(2)
                })
                .sum::<f64>()
        },
        |x, g| {
            for i in 0..x.len() - 1 {
                let (u, v) = (x[i], x[i + 1]);
                let a = v * (u - 2.0);
                g[i] += 4.0 * (u - 2.0).powi(3) + 2.0 * a * v;
                g[i + 1] += 2.0 * a * (u - 2.0) + 2.0 * (v + 1.0);
            }
        },
    )
}

pub(super) fn freuroth(name: &str, n: usize) -> Problem {
    let mut x0 = vec![0.0; n];
    x0[0] = 0.5;
    x0[1] = -2.0;
    fn residuals(u: f64, v: f64) -> (f64, f64) {
        (
            -13.0 + u + ((5.0 - v) * v - 2.0) * v,
            -29.0 + u + ((v + 1.0) * v - 14.0) * v,
        )
    }
    Problem::from_fns(
        name,
        x0,
        |x| {
            x.windows(2)
                .map(|w| {
                    let (r1, r2) = residuals(w[0], w[1]);
                    r1 * r1 + r2 * r2
                })
                .sum()
        },
        |x, g| {
            for i in 0..x.len() - 1 {
                let v = x[i + 1];
                let (r1, r2) = residuals(x[i], v);
                g[i] += 2.0 * (r1 + r2);
                g[i + 1] += 2.0 * r1 * (10.0 * v - 3.0 * v * v - 2.0)
                    + 2.0 * r2 * (3.0 * v * v + 2.0 * v - 14.0);
            }
        },
    )
}

pub(super) fn bdqrtic(name: &str, n: usize) -> Problem {
    fn inner(x: &[f64], i: usize, last: f64) -> f64 {
        x[i] * x[i]
            + 2.0 * x[i + 1] * x[i + 1]
            + 3.0 * x[i + 2] * x[i + 2]
            + 4.0 * x[i + 3] * x[i + 3]
            + 5.0 * last * last
    }
    Problem::from_fns(
        name,
        vec![1.0; n],
        |x| {
            let n = x.len();
            let last = x[n - 1];
            (0..n - 4)
                .map(|i| (3.0 - 4.0 * x[i]).powi(2) + inner(x, i, last).powi(2))
                .sum()
        },
        |x, g| {
            let n = x.len();
            let last = x[n - 1];
            for i in 0..n - 4 {
                let q = inner(x, i, last);
                g[i] += -8.0 * (3.0 - 4.0 * x[i]);
                for j in 0..4 {
                    g[i + j] += 4.0 * q * (j + 1) as f64 * x[i + j];
                }
                g[n - 1] += 20.0 * q * last;
            }
        },
    )
}

pub(super) fn cosine(name: &str, n: usize) -> Problem {
    Problem::from_fns(
        name,
        vec![1.0; n],
        |x| x.windows(2).map(|w| (w[0] * w[0] - 0.5 * w[1]).cos()).sum(),
        |x, g| {
            for i in 0..x.len() - 1 {
                let s = (x[i] * x[i] - 0.5 * x[i + 1]).sin();
                g[i] -= 2.0 * x[i] * s;
                g[i + 1] += 0.5 * s;
            }
        },
    )
}

pub(super) fn cragglvy(name: &str, n: usize) -> Problem {
    let mut x0 = vec![2.0; n];
    x0[0] = 1.0;
    Problem::from_fns(
        name,
        x0,
        |x| {
            (0..(x.len() - 2) / 2)
                .map(|j| {
                    let (a, b, c, d) = (x[2 * j], x[2 * j + 1], x[2 * j + 2], x[2 * j + 3]);
                    let w = (c - d).tan() + c - d;
                    (a.exp() - b).powi(4)
                        + 100.0 * (b - c).powi(6)
                        + w.powi(4)
                        + a.powi(8)
                        + (d - 1.0).powi(2)
                })
                .sum()
        },
        |x, g| {
            for j in 0..(x.len() - 2) / 2 {
                let (a, b, c, d) = (x[2 * j], x[2 * j + 1], x[2 * j + 2], x[2 * j + 3]);
                let ea = a.exp();
                let e3 = 4.0 * (ea - b).powi(3);
                let bc = 600.0 * (b - c).powi(5);
                let t = (c - d).tan();
                let w3 = 4.0 * (t + c - d).powi(3) * (t * t + 2.0);
                g[2 * j] += e3 * ea + 8.0 * a.powi(7);
                g[2 * j + 1] += -e3 + bc;
                g[2 * j + 2] += -bc + w3;
                g[2 * j + 3] += -w3 + 2.0 * (d - 1.0);
            }
        },
    )
}

/// Coefficients (alpha, beta, gamma, delta) and exponents k1..k4 of one
/// DIXMAAN variant.
#[derive(Debug, Clone, Copy)]
struct DixmaanParams {
    coef: [f64; 4],
    k: [i32; 4],
}

fn dixmaan_params(variant: char) -> DixmaanParams {
    let coef = match variant {
        'A' | 'E' | 'I' => [1.0, 0.0, 0.125, 0.125],
        'B' | 'F' | 'J' => [1.0, 0.0625, 0.0625, 0.0625],
        'C' | 'G' | 'K' => [1.0, 0.125, 0.125, 0.125],
        'D' | 'H' | 'L' => [1.0, 0.26, 0.26, 0.26],
        _ => unreachable!("unregistered DIXMAAN variant {variant}"),
    };
    let k = match variant {
        'A' | 'C' | 'D' => [0, 0, 0, 0],
        'B' => [0, 0, 0, 1],
        'E'..='H' => [1, 0, 0, 1],
        _ => [2, 0, 0, 2],
    };
    DixmaanParams { coef, k }
}

pub(super) fn dixmaan(name: &str, n: usize) -> Problem {
    let variant = name.chars().last().expect("non-empty name");
    let DixmaanParams { coef: [al, be, ga, de], k } = dixmaan_params(variant);
    let m = n / 3;
    let weight = move |i: usize, e: i32| ((i + 1) as f64 / n as f64).powi(e);
    Problem::from_fns(
        name,
        vec![2.0; n],
        move |x| {
            let mut f = 1.0;
            for i in 0..n {
                f += al * x[i] * x[i] * weight(i, k[0]);
            }
            for i in 0..n - 1 {
                let t = x[i + 1] + x[i + 1] * x[i + 1];
                f += be * x[i] * x[i] * t * t * weight(i, k[1]);
            }
            for i in 0..2 * m {
                f += ga * x[i] * x[i] * x[i + m].powi(4) * weight(i, k[2]);
            }
            for i in 0..m {
                f += de * x[i] * x[i + 2 * m] * weight(i, k[3]);
            }
            f
        },
        move |x, g| {
            for i in 0..n {
                g[i] += 2.0 * al * x[i] * weight(i, k[0]);
            }
            for i in 0..n - 1 {
                let w = be * weight(i, k[1]);
                let v = x[i + 1];
                let t = v + v * v;
                g[i] += 2.0 * w * x[i] * t * t;
                g[i + 1] += 2.0 * w * x[i] * x[i] * t * (1.0 + 2.0 * v);
            }
            for i in 0..2 * m {
                let w = ga * weight(i, k[2]);
                let v = x[i + m];
                g[i] += 2.0 * w * x[i] * v.powi(4);
                g[i + m] += 4.0 * w * x[i] * x[i] * v.powi(3);
            }
            for i in 0..m {
                let w = de * weight(i, k[3]);
                g[i] += w * x[i + 2 * m];
                g[i + 2 * m] += w * x[i];
            }
        },
    )
}
