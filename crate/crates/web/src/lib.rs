//! Browser bindings for the solver demo.
//!
//! Every export returns a JSON string; the plain Rust functions underneath
//! are what the host tests exercise.

use natr::solver::{self, shrink_factor, Observer, OuterEvent, Policy, TrialEvent, TrustRegionConfig};
use natr::{HessianApprox, Problem};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Two-variable test surfaces offered by the page.
pub const SURFACES: [&str; 3] = ["rosenbrock", "himmelblau", "beale"];

pub fn surface(name: &str, x0: [f64; 2]) -> Result<Problem, String> {
    let p = match name {
        "rosenbrock" => Problem::from_fns(
            name,
            x0.to_vec(),
            |x: &[f64]| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            |x: &[f64], g: &mut [f64]| {
                let t = x[1] - x[0] * x[0];
                g[0] = -400.0 * x[0] * t - 2.0 * (1.0 - x[0]);
                g[1] = 200.0 * t;
            },
        ),
        "himmelblau" => Problem::from_fns(
            name,
            x0.to_vec(),
            |x: &[f64]| (x[0] * x[0] + x[1] - 11.0).powi(2) + (x[0] + x[1] * x[1] - 7.0).powi(2),
            |x: &[f64], g: &mut [f64]| {
                let a = x[0] * x[0] + x[1] - 11.0;
                let b = x[0] + x[1] * x[1] - 7.0;
                g[0] = 4.0 * x[0] * a + 2.0 * b;
                g[1] = 2.0 * a + 4.0 * x[1] * b;
            },
        ),
        "beale" => Problem::from_fns(
            name,
            x0.to_vec(),
            |x: &[f64]| {
                beale_terms(x).iter().map(|(r, _, _)| r * r).sum()
            },
            |x: &[f64], g: &mut [f64]| {
                g[0] = 0.0;
                g[1] = 0.0;
                for (r, dr0, dr1) in beale_terms(x) {
                    g[0] += 2.0 * r * dr0;
                    g[1] += 2.0 * r * dr1;
                }
            },
        ),
        _ => return Err(format!("unknown surface '{name}'")),
    };
    Ok(p)
}

// residual and its partials for each of the three Beale terms
fn beale_terms(x: &[f64]) -> [(f64, f64, f64); 3] {
    let (a, b) = (x[0], x[1]);
    let c = [1.5, 2.25, 2.625];
    std::array::from_fn(|i| {
        let p = (i + 1) as i32;
        let bp = b.powi(p);
        (c[i] - a + a * bp, bp - 1.0, a * p as f64 * b.powi(p - 1))
    })
}

#[derive(Default)]
struct PathRecorder {
    x: Vec<f64>,
    path: Vec<Value>,
    trials: Vec<Value>,
}

impl Observer for PathRecorder {
    fn outer(&mut self, ev: &OuterEvent<'_>) {
        self.x = ev.x.to_vec();
        self.path.push(json!({
            "k": ev.k, "x": ev.x[0], "y": ev.x[1], "f": ev.f,
            "delta0": ev.delta0, "reference": ev.reference,
        }));
    }

    fn trial(&mut self, ev: &TrialEvent<'_>) {
        self.trials.push(json!({
            "k": ev.k, "p": ev.p, "delta": ev.delta,
            "x": self.x[0] + ev.step.d[0], "y": self.x[1] + ev.step.d[1],
            "ratio": if ev.ratio.is_finite() { json!(ev.ratio) } else { Value::Null },
            "accepted": ev.accepted,
        }));
    }
}

/// Runs one policy from `(x0, y0)` and reports every iterate and trial step.
pub fn solve_path_json(surface_name: &str, x0: f64, y0: f64, policy: &str) -> Result<String, String> {
    let policy: Policy = policy.parse().map_err(|e| format!("{e}"))?;
    let p = surface(surface_name, [x0, y0])?;
    let cfg = TrustRegionConfig { max_iters: 2000, ..TrustRegionConfig::with_policy(policy) };
    let mut rec = PathRecorder::default();
    let res = solver::solve_observed(&p, &cfg, HessianApprox::identity(2).map_err(|e| e.to_string())?, &mut rec)
        .map_err(|e| e.to_string())?;
    let out = json!({
        "policy": policy.name(),
        "status": res.status.to_string(),
        "iters": res.iters,
        "fevals": res.fevals,
        "x": res.x,
        "f": res.final_f,
        "path": rec.path,
        "trials": rec.trials,
    });
    Ok(out.to_string())
}

/// Samples `log10(1 + f)` on an `nx` by `ny` grid, row-major from `ymin`.
pub fn contour_grid_json(
    surface_name: &str,
    bounds: [f64; 4],
    nx: usize,
    ny: usize,
) -> Result<String, String> {
    let [xmin, xmax, ymin, ymax] = bounds;
    if nx < 2 || ny < 2 || nx * ny > 250_000 {
        return Err(format!("grid {nx}x{ny} out of range"));
    }
    if !(xmin < xmax && ymin < ymax) {
        return Err("empty plotting window".into());
    }
    let p = surface(surface_name, [0.0, 0.0])?;
    let mut values = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = ymin + (ymax - ymin) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = xmin + (xmax - xmin) * i as f64 / (nx - 1) as f64;
            values.push((1.0 + p.eval_f(&[x, y])).log10());
        }
    }
    Ok(json!({ "nx": nx, "ny": ny, "bounds": bounds, "values": values }).to_string())
}

/// The radius shrink factor as a function of the current radius.
pub fn shrink_curve_json(alpha0: f64, alpha1: f64, delta_bar: f64, samples: usize) -> Result<String, String> {
    let cfg = TrustRegionConfig { alpha0, alpha1, delta_bar, ..TrustRegionConfig::default() };
    cfg.validate().map_err(|e| e.to_string())?;
    if samples < 2 {
        return Err("need at least two samples".into());
    }
    let points: Vec<[f64; 2]> = (0..samples)
        .map(|i| {
            let d = delta_bar * i as f64 / (samples - 1) as f64;
            [d, shrink_factor(d, &cfg)]
        })
        .collect();
    Ok(json!({ "alpha0": alpha0, "alpha1": alpha1, "delta_bar": delta_bar, "points": points }).to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsValue> {
    r.map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn solve_path(surface: &str, x0: f64, y0: f64, policy: &str) -> Result<String, JsValue> {
    js(solve_path_json(surface, x0, y0, policy))
}

#[wasm_bindgen]
pub fn contour_grid(
    surface: &str,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    nx: usize,
    ny: usize,
) -> Result<String, JsValue> {
    js(contour_grid_json(surface, [xmin, xmax, ymin, ymax], nx, ny))
}

#[wasm_bindgen]
pub fn shrink_curve(alpha0: f64, alpha1: f64, delta_bar: f64, samples: usize) -> Result<String, JsValue> {
    js(shrink_curve_json(alpha0, alpha1, delta_bar, samples))
}

#[wasm_bindgen]
pub fn policies() -> String {
    json!(Policy::ALL.iter().map(|p| p.name()).collect::<Vec<_>>()).to_string()
}
