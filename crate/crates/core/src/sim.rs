//! Monte Carlo simulation of the reflected process.
//!
//! Each step draws a Gaussian increment `dx = θ dt + L ξ √dt` of the driving
//! Brownian motion (`L Lᵀ = Γ`) and projects back onto the orthant with the
//! one-step Skorokhod problem: find `dy ≥ 0` with `z′ = z + dx + R dy ≥ 0`
//! and `z′ᵢ dyᵢ = 0`. Path `k` uses a ChaCha8 stream seeded with
//! `seed.wrapping_add(k)`, so results do not depend on thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::matrix::Matrix;
use crate::normalization::ProblemData;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: f64,
    pub seed: u64,
    pub n_paths: usize,
    /// Radius of the target ball `{|z|₁ ≤ r}`.
    pub hitting_radius: f64,
    /// Record every `record_stride`-th step in a [`PathTrace`].
    pub record_stride: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            dt: 1e-3,
            horizon: 100.0,
            seed: 0,
            n_paths: 200,
            hitting_radius: 0.1,
            record_stride: 1,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidInput(format!("simulation config: {what}")));
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return bad("dt must be positive");
        }
        if !(self.horizon.is_finite() && self.horizon >= 0.0) {
            return bad("horizon must be nonnegative");
        }
        if self.n_paths == 0 {
            return bad("n_paths must be at least 1");
        }
        if !(self.hitting_radius.is_finite() && self.hitting_radius > 0.0) {
            return bad("hitting_radius must be positive");
        }
        if self.record_stride == 0 {
            return bad("record_stride must be at least 1");
        }
        Ok(())
    }

    fn n_steps(&self) -> usize {
        (self.horizon / self.dt + 1e-9).floor() as usize
    }
}

/// One recorded state. `x` is the driving path `z0 + Σ dx`, so
/// `z = x + R y` up to round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub z: Vec<f64>,
    pub y: Vec<f64>,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathTrace {
    /// Post-step states at `t = k·dt` for every `record_stride`-th step and
    /// the final step.
    pub samples: Vec<Sample>,
    /// First sampled time with `|z|₁ ≤ hitting_radius`; `None` when censored.
    pub hit_time: Option<f64>,
    pub final_z: Vec<f64>,
    pub steps: usize,
    /// Largest `max(|z′ᵢ dyᵢ|, -z′ᵢ, -dyᵢ)` over all steps.
    pub max_step_residual: f64,
}

impl PathTrace {
    pub fn censored(&self) -> bool {
        self.hit_time.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HittingStats {
    pub n_paths: usize,
    pub n_hit: usize,
    pub n_censored: usize,
    pub mean_hit_time: Option<f64>,
    pub censor_rate: f64,
    /// Pooled least-squares slope of `|z|₁` against `t` over censored paths.
    pub growth_rate: Option<f64>,
    pub max_step_residual: f64,
}

const MAX_DIM: usize = 3;

/// Solves the one-step Skorokhod problem by support enumeration, smallest
/// support first. Pushed coordinates land exactly on zero.
pub fn skorokhod_step(z: &[f64], dx: &[f64], r: &Matrix<f64>) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = z.len();
    if dx.len() != d || r.dim() != d {
        return Err(Error::InvalidInput("z, dx and R dimensions differ".into()));
    }
    let mut w = [0.0; MAX_DIM];
    for i in 0..d {
        w[i] = z[i] + dx[i];
    }
    let mut rm = [[0.0; MAX_DIM]; MAX_DIM];
    for (i, row) in rm.iter_mut().enumerate().take(d) {
        for (j, x) in row.iter_mut().enumerate().take(d) {
            *x = r[(i, j)];
        }
    }
    let (zn, dy) = step_arrays(&w[..d], &rm, d).ok_or(Error::StepInfeasible)?;
    Ok((zn[..d].to_vec(), dy[..d].to_vec()))
}

type Row = [f64; MAX_DIM];

fn step_arrays(w: &[f64], r: &[Row; MAX_DIM], d: usize) -> Option<(Row, Row)> {
    let scale = 1.0 + w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let tol = 1e-12 * scale;
    for support in IndexSet::all_subsets(d) {
        let idx = support.to_vec();
        let k = idx.len();
        let mut dy = [0.0; MAX_DIM];
        if k > 0 {
            let mut a = [[0.0; MAX_DIM]; MAX_DIM];
            let mut b = [0.0; MAX_DIM];
            for (p, &i) in idx.iter().enumerate() {
                for (q, &j) in idx.iter().enumerate() {
                    a[p][q] = r[i][j];
                }
                b[p] = -w[i];
            }
            let Some(sol) = solve_small(&mut a, &mut b, k) else {
                continue;
            };
            if sol[..k].iter().any(|&x| x < -tol) {
                continue;
            }
            for (p, &i) in idx.iter().enumerate() {
                dy[i] = sol[p].max(0.0);
            }
        }
        let mut zn = [0.0; MAX_DIM];
        let mut feasible = true;
        for i in 0..d {
            if support.contains(i) {
                continue;
            }
            let mut v = w[i];
            for &j in &idx {
                v += r[i][j] * dy[j];
            }
            if v < -tol {
                feasible = false;
                break;
            }
            zn[i] = v.max(0.0);
        }
        if feasible {
            return Some((zn, dy));
        }
    }
    None
}

fn solve_small(a: &mut [Row; MAX_DIM], b: &mut Row, k: usize) -> Option<Row> {
    let scale = a.iter().take(k).flat_map(|r| r[..k].iter()).fold(0.0_f64, |m, x| m.max(x.abs()));
    for col in 0..k {
        let pivot = (col..k).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-12 * scale.max(1.0) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            for c in col..k {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; MAX_DIM];
    for row in (0..k).rev() {
        let mut s = b[row];
        for c in row + 1..k {
            s -= a[row][c] * x[c];
        }
        x[row] = s / a[row][row];
    }
    Some(x)
}

fn cholesky(gamma: &Matrix<f64>) -> Result<[Row; MAX_DIM]> {
    let d = gamma.dim();
    let mut l = [[0.0; MAX_DIM]; MAX_DIM];
    for i in 0..d {
        for j in 0..=i {
            let mut s = gamma[(i, j)];
            for k in 0..j {
                s -= l[i][k] * l[j][k];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(Error::CovarianceNotPositiveDefinite);
                }
                l[i][i] = s.sqrt();
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Ok(l)
}

struct Setup {
    d: usize,
    theta: Row,
    r: [Row; MAX_DIM],
    chol: [Row; MAX_DIM],
}

impl Setup {
    fn new(data: &ProblemData<f64>, z0: &[f64], config: &SimConfig) -> Result<Self> {
        config.validate()?;
        let d = data.dim();
        if z0.len() != d {
            return Err(Error::InvalidInput(format!("z0 has {} entries, expected {d}", z0.len())));
        }
        if z0.iter().any(|z| !z.is_finite() || *z < 0.0) {
            return Err(Error::Precondition("z0 must be nonnegative".into()));
        }
        let mut theta = [0.0; MAX_DIM];
        theta[..d].copy_from_slice(data.theta());
        let mut r = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, row) in r.iter_mut().enumerate().take(d) {
            for (j, x) in row.iter_mut().enumerate().take(d) {
                *x = data.r()[(i, j)];
            }
        }
        Ok(Setup {
            d,
            theta,
            r,
            chol: cholesky(data.gamma())?,
        })
    }
}

/// Running sums for a pooled regression of `|z|₁` on `t`.
#[derive(Debug, Clone, Copy, Default)]
struct Regression {
    n: f64,
    st: f64,
    sz: f64,
    stt: f64,
    stz: f64,
}

impl Regression {
    fn add(&mut self, t: f64, z: f64) {
        self.n += 1.0;
        self.st += t;
        self.sz += z;
        self.stt += t * t;
        self.stz += t * z;
    }

    fn merge(mut self, o: Regression) -> Regression {
        self.n += o.n;
        self.st += o.st;
        self.sz += o.sz;
        self.stt += o.stt;
        self.stz += o.stz;
        self
    }

    fn slope(&self) -> Option<f64> {
        let denom = self.n * self.stt - self.st * self.st;
        (self.n >= 2.0 && denom > 0.0).then(|| (self.n * self.stz - self.st * self.sz) / denom)
    }
}

struct PathRun {
    trace: PathTrace,
    regression: Regression,
}

fn run_path(setup: &Setup, z0: &[f64], config: &SimConfig, path_index: u64, record: bool) -> Result<PathRun> {
    let d = setup.d;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(path_index));
    let sqrt_dt = config.dt.sqrt();
    let mut z = [0.0; MAX_DIM];
    z[..d].copy_from_slice(z0);
    let mut x = z;
    let mut y = [0.0; MAX_DIM];
    let mut samples = Vec::new();
    let mut regression = Regression::default();
    let mut max_residual = 0.0_f64;
    let norm = |v: &Row| v[..d].iter().map(|c| c.abs()).sum::<f64>();

    let mut hit_time = (norm(&z) <= config.hitting_radius).then_some(0.0);
    let n_steps = if hit_time.is_some() { 0 } else { config.n_steps() };
    let mut steps = 0;
    for k in 1..=n_steps {
        let mut xi = [0.0; MAX_DIM];
        for v in xi.iter_mut().take(d) {
            *v = StandardNormal.sample(&mut rng);
        }
        let mut w = [0.0; MAX_DIM];
        for i in 0..d {
            let noise: f64 = (0..=i).map(|j| setup.chol[i][j] * xi[j]).sum();
            let dx = setup.theta[i] * config.dt + noise * sqrt_dt;
            x[i] += dx;
            w[i] = z[i] + dx;
        }
        let (zn, dy) = step_arrays(&w[..d], &setup.r, d).ok_or(Error::StepInfeasible)?;
        for i in 0..d {
            let res = (zn[i] * dy[i]).abs().max(-zn[i]).max(-dy[i]);
            if res > max_residual {
                max_residual = res;
            }
            y[i] += dy[i];
        }
        z = zn;
        steps = k;
        let t = k as f64 * config.dt;
        let size = norm(&z);
        regression.add(t, size);
        let hit = size <= config.hitting_radius;
        if record && (k % config.record_stride == 0 || k == n_steps || hit) {
            samples.push(Sample {
                t,
                z: z[..d].to_vec(),
                y: y[..d].to_vec(),
                x: x[..d].to_vec(),
            });
        }
        if hit {
            hit_time = Some(t);
            break;
        }
    }
    Ok(PathRun {
        trace: PathTrace {
            samples,
            hit_time,
            final_z: z[..d].to_vec(),
            steps,
            max_step_residual: max_residual,
        },
        regression,
    })
}

/// Simulates path 0 of `config` and records its states.
pub fn simulate_path(data: &ProblemData<f64>, z0: &[f64], config: &SimConfig) -> Result<PathTrace> {
    let setup = Setup::new(data, z0, config)?;
    Ok(run_path(&setup, z0, config, 0, true)?.trace)
}

/// Simulates path `path_index` with its derived seed.
pub fn simulate_path_index(
    data: &ProblemData<f64>,
    z0: &[f64],
    config: &SimConfig,
    path_index: u64,
) -> Result<PathTrace> {
    let setup = Setup::new(data, z0, config)?;
    Ok(run_path(&setup, z0, config, path_index, true)?.trace)
}

/// Runs `n_paths` independent paths in parallel and summarizes hitting times.
pub fn estimate_hitting_time(data: &ProblemData<f64>, z0: &[f64], config: &SimConfig) -> Result<HittingStats> {
    let setup = Setup::new(data, z0, config)?;
    let runs: Vec<PathRun> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|k| run_path(&setup, z0, config, k, false))
        .collect::<Result<_>>()?;

    let hits: Vec<f64> = runs.iter().filter_map(|r| r.trace.hit_time).collect();
    let n_hit = hits.len();
    let n_censored = config.n_paths - n_hit;
    let growth = runs
        .iter()
        .filter(|r| r.trace.censored())
        .fold(Regression::default(), |acc, r| acc.merge(r.regression));
    Ok(HittingStats {
        n_paths: config.n_paths,
        n_hit,
        n_censored,
        mean_hit_time: (n_hit > 0).then(|| hits.iter().sum::<f64>() / n_hit as f64),
        censor_rate: n_censored as f64 / config.n_paths as f64,
        growth_rate: growth.slope(),
        max_step_residual: runs.iter().map(|r| r.trace.max_step_residual).fold(0.0, f64::max),
    })
}
