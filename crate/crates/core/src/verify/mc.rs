//! Euler–Maruyama simulation of wealth under the analytic strategy.
//!
//! Paths are grouped in blocks of [`BLOCK_PATHS`]; path `i` draws from its
//! own xoshiro256++ generator keyed by `(seed, i)`, so a block's [`Tally`]
//! does not depend on which thread ran it. Merging tallies in block order gives bit-identical
//! results for any degree of parallelism.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{Error, Result};
use crate::math;
use crate::model::SafeLevel;
use crate::ruin::RuinSolution;
use crate::value::PenaltyFunction;

pub const BLOCK_PATHS: u64 = 4096;
/// Share of paths hitting the horizon cap above which a result is flagged.
pub const MAX_CAPPED_SHARE: f64 = 0.01;
/// Nodes of the interpolated strategy below the kink.
pub const POLICY_TABLE_NODES: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    pub dt: f64,
    pub n_paths: u64,
    pub seed: u64,
    pub w_init: f64,
    pub m_init: f64,
    /// Longest simulated life in years.
    pub horizon_cap: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { dt: 1.0 / 250.0, n_paths: 200_000, seed: 0, w_init: 2.0, m_init: 2.0, horizon_cap: 500.0 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams("dt must be positive"));
        }
        if self.n_paths == 0 {
            return Err(Error::InvalidParams("n_paths must be at least 1"));
        }
        if !(self.m_init <= self.w_init) || !self.w_init.is_finite() {
            return Err(Error::InvalidParams("m_init must not exceed w_init"));
        }
        if !(self.horizon_cap > 0.0) {
            return Err(Error::InvalidParams("horizon_cap must be positive"));
        }
        Ok(())
    }

    pub fn n_blocks(&self) -> u64 {
        self.n_paths.div_ceil(BLOCK_PATHS)
    }

    fn block_range(&self, block: u64) -> core::ops::Range<u64> {
        let start = block * BLOCK_PATHS;
        start..(start + BLOCK_PATHS).min(self.n_paths)
    }

    fn max_steps(&self) -> u64 {
        libm::ceil(self.horizon_cap / self.dt) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_effective: u64,
    pub ci95: (f64, f64),
    pub n_capped: u64,
    pub reliable: bool,
}

/// Moment accumulator, with sums taken about the first value seen so a
/// constant sample has an exact mean and zero variance. Merging in a fixed
/// order is deterministic.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Tally {
    pub n: u64,
    pub shift: f64,
    pub sum: f64,
    pub sum_sq: f64,
    pub capped: u64,
}

impl Tally {
    fn push(&mut self, x: f64) {
        if self.n == 0 {
            self.shift = x;
        }
        let d = x - self.shift;
        self.n += 1;
        self.sum += d;
        self.sum_sq += d * d;
    }

    pub fn merge(&mut self, other: &Tally) {
        if other.n == 0 {
            self.capped += other.capped;
            return;
        }
        if self.n == 0 {
            let capped = self.capped;
            *self = *other;
            self.capped += capped;
            return;
        }
        let d = other.shift - self.shift;
        let k = other.n as f64;
        self.sum_sq += other.sum_sq + 2.0 * d * other.sum + k * d * d;
        self.sum += other.sum + k * d;
        self.n += other.n;
        self.capped += other.capped;
    }

    pub fn finish(&self) -> SimResult {
        let n = self.n as f64;
        let centred = self.sum / n;
        let mean = self.shift + centred;
        let var = if self.n > 1 { ((self.sum_sq - n * centred * centred) / (n - 1.0)).max(0.0) } else { 0.0 };
        let se = math::sqrt(var / n);
        SimResult {
            estimate: mean,
            std_error: se,
            n_effective: self.n,
            ci95: (mean - 1.96 * se, mean + 1.96 * se),
            n_capped: self.capped,
            reliable: (self.capped as f64) <= MAX_CAPPED_SHARE * n,
        }
    }
}

/// `π*` below the kink by cubic interpolation on a cache-sized table, from
/// its affine closed form above it, and exactly below the table.
#[derive(Debug, Clone)]
pub struct PolicyTable<'a> {
    sol: &'a RuinSolution,
    kappa: f64,
    lo: f64,
    inv_step: f64,
    values: Vec<f64>,
    /// `π* = slope·w + intercept` on `[κ, w^s)`.
    slope: f64,
    intercept: f64,
}

impl<'a> PolicyTable<'a> {
    pub fn new(sol: &'a RuinSolution, lo: f64) -> Result<Self> {
        let kappa = sol.kappa();
        let at_kappa = sol.pi_star(kappa)?;
        let probe = match sol.safe_level() {
            SafeLevel::Finite(ws) => 0.5 * (kappa + ws),
            SafeLevel::Unbounded => kappa + 1.0,
        };
        let slope = (sol.pi_star(probe)? - at_kappa) / (probe - kappa);
        let intercept = at_kappa - slope * kappa;
        let mut table = PolicyTable { sol, kappa, lo: kappa, inv_step: 0.0, values: Vec::new(), slope, intercept };
        if lo < kappa {
            let n = POLICY_TABLE_NODES;
            let step = (kappa - lo) / (n - 1) as f64;
            let mut cache = None;
            for i in 0..n {
                let w = if i == n - 1 { kappa } else { lo + step * i as f64 };
                table.values.push(sol.pi_star_near(w, &mut cache)?);
            }
            table.lo = lo;
            table.inv_step = 1.0 / step;
        }
        Ok(table)
    }

    #[inline]
    pub fn eval(&self, w: f64, cache: &mut Option<f64>) -> Result<f64> {
        if w >= self.kappa {
            return Ok(self.slope * w + self.intercept);
        }
        if w < self.lo {
            return self.sol.pi_star_near(w, cache);
        }
        // four-point Lagrange cubic on the cell's neighbours
        let s = (w - self.lo) * self.inv_step;
        let last = self.values.len() - 1;
        let i = (s as usize).clamp(1, last - 2);
        let t = s - i as f64;
        let v = &self.values[i - 1..i + 3];
        let (a, b, c) = (t + 1.0, t - 1.0, t - 2.0);
        Ok((-v[0] * t * b * c + 3.0 * v[1] * a * b * c - 3.0 * v[2] * a * t * c + v[3] * a * t * b) / 6.0)
    }
}

#[derive(Debug, Clone, Copy)]
struct Dynamics {
    r: f64,
    excess: f64,
    sigma: f64,
    c_floor: f64,
    kappa: f64,
    rho: f64,
    lambda: f64,
    w_safe: Option<f64>,
}

impl Dynamics {
    fn new(sol: &RuinSolution) -> Self {
        let m = sol.problem().market();
        let c = sol.problem().consumption();
        Dynamics {
            r: m.r,
            excess: m.mu - m.r,
            sigma: m.sigma,
            c_floor: c.floor_rate(),
            kappa: c.kappa,
            rho: c.rho,
            lambda: m.lambda,
            w_safe: match sol.safe_level() {
                SafeLevel::Finite(x) => Some(x),
                SafeLevel::Unbounded => None,
            },
        }
    }

    #[inline]
    fn step(&self, w: f64, pi: f64, dt: f64, sqrt_dt: f64, z: f64) -> f64 {
        let c = self.c_floor + self.rho * (w - self.kappa).max(0.0);
        w + (self.r * w + self.excess * pi - c) * dt + self.sigma * pi * sqrt_dt * z
    }

    #[inline]
    fn safe(&self, w: f64) -> bool {
        self.w_safe.is_some_and(|s| w >= s)
    }
}

/// SplitMix64 output function.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Distinct path indices give distinct keys, hence distinct generator states.
fn path_rng(seed: u64, path: u64) -> Xoshiro256PlusPlus {
    Xoshiro256PlusPlus::seed_from_u64(mix64(seed) ^ path)
}

/// Paths advanced together by one worker. Their steps are independent, so
/// the processor overlaps them; each path's arithmetic is unchanged.
const LANES: usize = 4;

enum Start<S> {
    Done(f64, bool),
    Running(S),
}

/// Runs the paths of `range` through `LANES` slots and tallies the scores
/// in path order.
fn run_block<S>(
    range: core::ops::Range<u64>,
    mut start: impl FnMut(u64) -> Result<Start<S>>,
    mut advance: impl FnMut(&mut S) -> Result<Option<(f64, bool)>>,
) -> Result<Tally> {
    let first = range.start;
    let mut scores = alloc::vec![(0.0, false); (range.end - range.start) as usize];
    let mut next = range.start;
    let mut slots: [Option<(usize, S)>; LANES] = core::array::from_fn(|_| None);
    let mut refill = |slot: &mut Option<(usize, S)>, scores: &mut [(f64, bool)]| -> Result<()> {
        while next < range.end {
            let i = (next - first) as usize;
            next += 1;
            match start(next - 1)? {
                Start::Done(x, capped) => scores[i] = (x, capped),
                Start::Running(s) => {
                    *slot = Some((i, s));
                    return Ok(());
                }
            }
        }
        Ok(())
    };
    for slot in slots.iter_mut() {
        refill(slot, &mut scores)?;
    }
    loop {
        let mut active = false;
        for slot in slots.iter_mut() {
            let Some((i, s)) = slot else { continue };
            active = true;
            if let Some(score) = advance(s)? {
                scores[*i] = score;
                *slot = None;
                refill(slot, &mut scores)?;
            }
        }
        if !active {
            break;
        }
    }
    let mut t = Tally::default();
    for (x, capped) in scores {
        t.push(x);
        t.capped += capped as u64;
    }
    Ok(t)
}

/// Ruin-probability simulator: each path scores `e^{−λ τ_b}` if it reaches
/// `b` before the safe level, so no death time is drawn.
#[derive(Debug)]
pub struct RuinSimulator<'a> {
    cfg: SimConfig,
    b: f64,
    policy: PolicyTable<'a>,
    dynamics: Dynamics,
}

struct RuinPath {
    w: f64,
    k: u64,
    rng: Xoshiro256PlusPlus,
    cache: Option<f64>,
}

impl<'a> RuinSimulator<'a> {
    pub fn new(cfg: SimConfig, sol: &'a RuinSolution, b: f64) -> Result<Self> {
        cfg.validate()?;
        if !sol.safe_level().is_below(b) {
            return Err(Error::Domain { what: "ruin level must lie below the safe level", value: b });
        }
        Ok(RuinSimulator { cfg, b, policy: PolicyTable::new(sol, b)?, dynamics: Dynamics::new(sol) })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn block(&self, block: u64) -> Result<Tally> {
        let cfg = &self.cfg;
        let sqrt_dt = math::sqrt(cfg.dt);
        let discount = -self.dynamics.lambda * cfg.dt;
        let max_steps = cfg.max_steps();
        let start = |index| {
            let w = cfg.w_init;
            Ok(if w <= self.b {
                Start::Done(1.0, false)
            } else if self.dynamics.safe(w) {
                Start::Done(0.0, false)
            } else {
                Start::Running(RuinPath { w, k: 0, rng: path_rng(cfg.seed, index), cache: None })
            })
        };
        let advance = |p: &mut RuinPath| {
            p.k += 1;
            let pi = self.policy.eval(p.w, &mut p.cache)?;
            let z: f64 = p.rng.sample(StandardNormal);
            p.w = self.dynamics.step(p.w, pi, cfg.dt, sqrt_dt, z);
            Ok(if p.w <= self.b {
                Some((math::exp(discount * p.k as f64), false))
            } else if self.dynamics.safe(p.w) {
                Some((0.0, false))
            } else if p.k == max_steps {
                Some((0.0, true))
            } else {
                None
            })
        };
        run_block(cfg.block_range(block), start, advance)
    }
}

/// Penalty simulator: draws the death time and tracks the running minimum.
#[derive(Debug)]
pub struct PenaltySimulator<'a> {
    cfg: SimConfig,
    f: &'a PenaltyFunction,
    policy: PolicyTable<'a>,
    dynamics: Dynamics,
}

/// Width below the start of the strategy table for penalty paths, in units
/// of `κ − min(m_init, 0)`.
const PENALTY_TABLE_MARGIN: f64 = 2.0;

struct PenaltyPath {
    w: f64,
    m: f64,
    t: f64,
    tau_d: f64,
    rng: Xoshiro256PlusPlus,
    cache: Option<f64>,
}

impl<'a> PenaltySimulator<'a> {
    pub fn new(cfg: SimConfig, sol: &'a RuinSolution, f: &'a PenaltyFunction) -> Result<Self> {
        cfg.validate()?;
        let kappa = sol.kappa();
        let base = cfg.m_init.min(0.0);
        let lo = base - PENALTY_TABLE_MARGIN * (kappa - base);
        Ok(PenaltySimulator { cfg, f, policy: PolicyTable::new(sol, lo)?, dynamics: Dynamics::new(sol) })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn block(&self, block: u64) -> Result<Tally> {
        let cfg = &self.cfg;
        let start = |index| {
            let mut rng = path_rng(cfg.seed, index);
            let u: f64 = rng.gen();
            let tau_d = -math::ln(1.0 - u) / self.dynamics.lambda;
            let w = cfg.w_init;
            let m = cfg.m_init.min(w);
            Ok(if tau_d > 0.0 && !self.dynamics.safe(w) {
                Start::Running(PenaltyPath { w, m, t: 0.0, tau_d, rng, cache: None })
            } else {
                Start::Done(self.f.eval(m), false)
            })
        };
        let advance = |p: &mut PenaltyPath| {
            let h = cfg.dt.min(p.tau_d - p.t);
            let pi = self.policy.eval(p.w, &mut p.cache)?;
            let z: f64 = p.rng.sample(StandardNormal);
            p.w = self.dynamics.step(p.w, pi, h, math::sqrt(h), z);
            p.m = p.m.min(p.w);
            p.t += h;
            Ok(if !(p.t < p.tau_d) || self.dynamics.safe(p.w) {
                Some((self.f.eval(p.m), false))
            } else if p.t >= cfg.horizon_cap {
                Some((self.f.eval(p.m), true))
            } else {
                None
            })
        };
        run_block(cfg.block_range(block), start, advance)
    }
}

pub fn simulate_ruin(cfg: &SimConfig, sol: &RuinSolution, b: f64) -> Result<SimResult> {
    let sim = RuinSimulator::new(*cfg, sol, b)?;
    let mut total = Tally::default();
    for block in 0..cfg.n_blocks() {
        total.merge(&sim.block(block)?);
    }
    Ok(total.finish())
}

pub fn simulate_penalty(cfg: &SimConfig, sol: &RuinSolution, f: &PenaltyFunction) -> Result<SimResult> {
    let sim = PenaltySimulator::new(*cfg, sol, f)?;
    let mut total = Tally::default();
    for block in 0..cfg.n_blocks() {
        total.merge(&sim.block(block)?);
    }
    Ok(total.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{ConsumptionSpec, MarketParams, Problem};

    fn solve(rho: f64, c_bar: f64) -> RuinSolution {
        let p = Problem::new(
            MarketParams { r: 0.02, mu: 0.06, sigma: 0.2, lambda: 0.04, rho },
            ConsumptionSpec { c_bar, kappa: 1.0, rho },
        )
        .unwrap();
        RuinSolution::new(&p).unwrap()
    }

    #[test]
    fn table_matches_exact_strategy() {
        for (rho, c_bar, hi) in [(0.05, 0.01, 9.0), (0.02, 0.03, 9.0), (0.01, 0.03, 2.99)] {
            let s = solve(rho, c_bar);
            let t = PolicyTable::new(&s, -2.0).unwrap();
            let mut worst: f64 = 0.0;
            for i in 0..997 {
                let w = -3.0 + (hi + 3.0) * (i as f64 + 0.37) / 997.0;
                let exact = s.pi_star(w).unwrap();
                worst = worst.max((t.eval(w, &mut None).unwrap() / exact - 1.0).abs());
            }
            assert!(worst < 1e-8, "{worst}");
        }
    }

    #[test]
    fn start_at_ruin_level() {
        let s = solve(0.05, 0.01);
        let cfg = SimConfig { n_paths: 100, w_init: 0.0, m_init: 0.0, ..SimConfig::default() };
        let r = simulate_ruin(&cfg, &s, 0.0).unwrap();
        assert_eq!((r.estimate, r.std_error), (1.0, 0.0));
    }

    #[test]
    fn constant_penalty_has_no_variance() {
        let s = solve(0.05, 0.01);
        let f = PenaltyFunction::constant(0.3).unwrap();
        let cfg = SimConfig { n_paths: 50, ..SimConfig::default() };
        let r = simulate_penalty(&cfg, &s, &f).unwrap();
        assert_eq!((r.estimate, r.std_error), (0.3, 0.0));
    }

    #[test]
    fn near_safe_level() {
        let s = solve(0.01, 0.03);
        let cfg = SimConfig { n_paths: 200, w_init: 3.0 - 1e-9, m_init: 3.0 - 1e-9, ..SimConfig::default() };
        let r = simulate_ruin(&cfg, &s, 0.0).unwrap();
        assert!(r.estimate < 1e-3);
    }

    #[test]
    fn tally_merge_is_order_exact_per_block() {
        let s = solve(0.05, 0.01);
        let cfg = SimConfig { n_paths: 2 * BLOCK_PATHS + 7, dt: 1.0 / 20.0, seed: 9, ..SimConfig::default() };
        let sim = RuinSimulator::new(cfg, &s, 0.0).unwrap();
        let a = sim.block(1).unwrap();
        let b = sim.block(1).unwrap();
        assert_eq!(a, b);
        assert_eq!(sim.block(2).unwrap().n, 7);
    }
}
