//! The edge-swap Markov chain over simple connected graphs, with four
//! interchangeable strategies for amortizing connectivity tests:
//!
//! * `Naive` — full connectivity test after every applied swap, single-swap
//!   rollback on disconnection.
//! * `Gkantsidis` — apply a window of T swaps, test once, cancel the whole
//!   window on failure; T += 1 on success, T /= 2 on failure.
//! * `Geometric` — same windowing with multiplicative updates T·(1+q⁺) /
//!   T·(1−q⁻); with q⁺/q⁻ = e−1 the window self-tunes to the optimum.
//! * `Final` — windowed chain where every applied swap is immediately
//!   screened by bounded isolation tests of width K on both endpoints of
//!   the first removed edge; K doubles when a window still manages to
//!   disconnect the graph, and drifts back down after long success streaks.
//!
//! All strategies commit only simple connected states and never change any
//! degree. Runs are bit-reproducible for a fixed seed.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError, IsolationResult, SwapOutcome, TraversalScratch};

/// Default geometric shrink factor; chosen small enough to track the
/// optimum without oscillating.
pub const DEFAULT_Q_MINUS: f64 = 0.1;

/// Matching growth factor satisfying q⁺/q⁻ = e − 1, the condition under
/// which the window converges to the optimal value.
pub fn default_q_plus() -> f64 {
    DEFAULT_Q_MINUS * (std::f64::consts::E - 1.0)
}

#[derive(Debug, Error, PartialEq)]
pub enum ShuffleError {
    #[error("input graph must be simple, connected, and have at least 2 edges")]
    BadInput,
    #[error("heuristic has no windowed update rule")]
    WrongHeuristic,
    #[error("disconnection probability must lie in (0, 1]")]
    DegenerateP,
    #[error("no swap passed the filters within the sampling budget")]
    NoValidSwaps,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HeuristicKind {
    Naive,
    Gkantsidis,
    Geometric { q_minus: f64, q_plus: f64 },
    Final,
}

impl HeuristicKind {
    /// Geometric updates with the default q⁻ = 0.1, q⁺ = 0.1·(e−1).
    pub fn geometric_default() -> HeuristicKind {
        HeuristicKind::Geometric {
            q_minus: DEFAULT_Q_MINUS,
            q_plus: default_q_plus(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShuffleConfig {
    /// Swap budget factor γ: the run commits ⌈γ·m⌉ valid swaps.
    pub swap_budget_factor: f64,
    pub heuristic: HeuristicKind,
    /// Starting window for the windowed strategies (≥ 1).
    pub initial_t: f64,
    /// Starting isolation width for the final strategy (≥ 1).
    pub initial_k: u32,
    /// Abort isolation probes early on meeting a vertex of degree > K.
    pub degree_stop: bool,
    pub rng_seed: u64,
    /// Report progress every this many valid swaps (0 = never).
    pub progress_interval: u64,
}

impl ShuffleConfig {
    pub fn new(heuristic: HeuristicKind, rng_seed: u64) -> ShuffleConfig {
        ShuffleConfig {
            heuristic,
            rng_seed,
            ..ShuffleConfig::default()
        }
    }
}

impl Default for ShuffleConfig {
    fn default() -> ShuffleConfig {
        ShuffleConfig {
            swap_budget_factor: 10.0,
            heuristic: HeuristicKind::Final,
            initial_t: 1.0,
            initial_k: 1,
            degree_stop: true,
            rng_seed: 0,
            progress_interval: 0,
        }
    }
}

/// Counters describing one shuffle run.
///
/// Equality ignores `wall_time`, so that reproducibility checks can compare
/// whole stats objects.
#[derive(Debug, Clone, Default)]
pub struct ShuffleStats {
    pub transitions_attempted: u64,
    pub valid_swaps: u64,
    pub simplicity_rejections: u64,
    pub isolation_rejections: u64,
    pub disconnection_rollbacks: u64,
    /// Full connectivity tests executed.
    pub windows_tested: u64,
    pub windows_succeeded: u64,
    /// Committed valid swaps per full connectivity test.
    pub realized_theta: f64,
    pub final_t: f64,
    pub final_k: u32,
    /// Set when the chain stopped making progress before reaching the
    /// budget (no accepting move found within the attempt cap); the
    /// returned graph is the last committed state.
    pub stalled: bool,
    pub wall_time: Duration,
}

impl PartialEq for ShuffleStats {
    fn eq(&self, other: &Self) -> bool {
        self.transitions_attempted == other.transitions_attempted
            && self.valid_swaps == other.valid_swaps
            && self.simplicity_rejections == other.simplicity_rejections
            && self.isolation_rejections == other.isolation_rejections
            && self.disconnection_rollbacks == other.disconnection_rollbacks
            && self.windows_tested == other.windows_tested
            && self.windows_succeeded == other.windows_succeeded
            && self.realized_theta == other.realized_theta
            && self.final_t == other.final_t
            && self.final_k == other.final_k
            && self.stalled == other.stalled
    }
}

/// Speed-up factor θ(T) = T·(1−p)^T: expected swaps committed per
/// connectivity test when each swap disconnects independently with
/// probability p.
pub fn theta(t: f64, p: f64) -> f64 {
    debug_assert!(t >= 0.0 && (0.0..=1.0).contains(&p));
    t * (1.0 - p).powf(t)
}

/// The window maximizing θ and the maximum itself: T = 1/p,
/// θ_max = 1/(p·e).
pub fn theta_max(p: f64) -> Result<(f64, f64), ShuffleError> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(ShuffleError::DegenerateP);
    }
    Ok((1.0 / p, 1.0 / (p * std::f64::consts::E)))
}

/// One window-update step. Gkantsidis: T+1 on success, T/2 on
/// disconnection. Geometric: T·(1+q⁺) on success, T·(1−q⁻) on
/// disconnection. Results are clamped to ≥ 1.
pub fn update_window(
    h: HeuristicKind,
    t: f64,
    window_connected: bool,
) -> Result<f64, ShuffleError> {
    let next = match h {
        HeuristicKind::Gkantsidis => {
            if window_connected {
                t + 1.0
            } else {
                t / 2.0
            }
        }
        HeuristicKind::Geometric { q_minus, q_plus } => {
            if window_connected {
                t * (1.0 + q_plus)
            } else {
                t * (1.0 - q_minus)
            }
        }
        HeuristicKind::Naive | HeuristicKind::Final => return Err(ShuffleError::WrongHeuristic),
    };
    Ok(next.max(1.0))
}

/// Applies `swap` if it keeps the graph simple and, when `width > 0`, if no
/// endpoint of the removed edge `e1` ends up in a component of at most
/// `width` vertices. A swap cancelled by the isolation probe leaves the
/// graph untouched and reports the offending component size.
///
/// The probe width is clamped to n−1 so that a width of n or more behaves
/// as a full component check without rejecting still-connected states.
pub fn apply_swap_isolated(
    g: &mut Graph,
    swap: &crate::graph::EdgeSwap,
    width: u32,
    degree_stop: bool,
    scratch: &mut TraversalScratch,
) -> Result<SwapOutcome, GraphError> {
    let outcome = g.try_swap(swap)?;
    let SwapOutcome::Applied { created } = outcome else {
        return Ok(outcome);
    };
    if width == 0 {
        return Ok(outcome);
    }
    let k_eff = width.min(g.vertex_count() as u32 - 1);
    // Any component split off by the swap contains one endpoint of the
    // removed edge (a, b); the window-level connectivity test catches the
    // rare case where both sides are larger than K.
    let (a, b) = swap.e1;
    for probe in [a, b] {
        if let (IsolationResult::Isolated(size), _) =
            g.isolation_test_with(probe, k_eff, degree_stop, scratch)
        {
            let undone = g.try_swap(&swap.inverse())?;
            debug_assert!(matches!(undone, SwapOutcome::Applied { .. }));
            return Ok(SwapOutcome::RejectedIsolation {
                component_size: size,
            });
        }
    }
    Ok(SwapOutcome::Applied { created })
}

enum Mode {
    Naive,
    Window(HeuristicKind),
    /// Before each window, estimate p and set T = 1/p̂ (capped at m).
    /// Reference only; the estimation cost is excluded from θ by design.
    OptimalReference,
    Final,
}

/// A paused edge-swap chain that can be advanced to any committed
/// valid-swap count, snapshotting states in between. Used directly by the
/// uniformity harness; the `run_shuffle*` entry points are thin wrappers.
pub struct ChainSampler {
    g: Graph,
    rng: ChaCha8Rng,
    scratch: TraversalScratch,
    undo: Vec<crate::graph::EdgeSwap>,
    stats: ShuffleStats,
    mode: Mode,
    m: usize,
    /// Current window parameter for the windowed modes.
    t: f64,
    t_floor: f64,
    t_cap: f64,
    /// Current isolation width (final mode).
    k: u32,
    /// The width never drifts below its configured starting point.
    k_floor: u32,
    degree_stop: bool,
    success_streak: u32,
    stall_cap: u64,
    progress_interval: u64,
    started: Instant,
}

impl ChainSampler {
    pub fn new(g: Graph, cfg: &ShuffleConfig) -> Result<ChainSampler, ShuffleError> {
        let m = g.edge_count();
        if m < 2 || !g.is_connected() {
            return Err(ShuffleError::BadInput);
        }
        let mode = match cfg.heuristic {
            HeuristicKind::Naive => Mode::Naive,
            HeuristicKind::Final => Mode::Final,
            h => Mode::Window(h),
        };
        Ok(ChainSampler::with_mode(g, cfg, mode))
    }

    fn with_mode(g: Graph, cfg: &ShuffleConfig, mode: Mode) -> ChainSampler {
        let m = g.edge_count();
        // The final strategy keeps the window at or above m/10 (capped at
        // m); with fewer than 10 edges it is pinned to m.
        let (t_floor, t_cap) = match mode {
            Mode::Final => {
                if m < 10 {
                    (m as f64, m as f64)
                } else {
                    ((m as f64 / 10.0).max(1.0), m as f64)
                }
            }
            _ => (1.0, f64::INFINITY),
        };
        let scratch = g.scratch();
        ChainSampler {
            g,
            rng: ChaCha8Rng::seed_from_u64(cfg.rng_seed),
            scratch,
            undo: Vec::new(),
            stats: ShuffleStats::default(),
            mode,
            m,
            t: cfg.initial_t.max(1.0).clamp(t_floor, t_cap),
            t_floor,
            t_cap,
            k: cfg.initial_k.max(1),
            k_floor: cfg.initial_k.max(1),
            degree_stop: cfg.degree_stop,
            success_streak: 0,
            stall_cap: 10_000u64.max(200 * m as u64),
            progress_interval: cfg.progress_interval,
            started: Instant::now(),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn stats(&self) -> &ShuffleStats {
        &self.stats
    }

    /// Runs until at least `target` valid swaps are committed (absolute
    /// count), or the chain stalls.
    pub fn advance_to(
        &mut self,
        target: u64,
        mut observer: Option<&mut dyn FnMut(u64, u64)>,
    ) -> Result<(), ShuffleError> {
        let mut next_report = if self.progress_interval > 0 {
            (self.stats.valid_swaps / self.progress_interval + 1) * self.progress_interval
        } else {
            u64::MAX
        };
        while self.stats.valid_swaps < target && !self.stats.stalled {
            match self.mode {
                Mode::Naive => self.naive_step()?,
                Mode::Window(h) => self.window_step(h, target)?,
                Mode::OptimalReference => self.optimal_step(target)?,
                Mode::Final => self.final_step()?,
            }
            while self.stats.valid_swaps >= next_report {
                if let Some(obs) = observer.as_deref_mut() {
                    obs(self.stats.valid_swaps.min(target), target);
                }
                next_report += self.progress_interval;
            }
        }
        Ok(())
    }

    pub fn into_result(mut self) -> (Graph, ShuffleStats) {
        self.stats.realized_theta = if self.stats.windows_tested > 0 {
            self.stats.valid_swaps as f64 / self.stats.windows_tested as f64
        } else {
            0.0
        };
        self.stats.final_t = self.t;
        self.stats.final_k = self.k;
        self.stats.wall_time = self.started.elapsed();
        (self.g, self.stats)
    }

    fn naive_step(&mut self) -> Result<(), ShuffleError> {
        let mut attempts_since_commit = 0u64;
        loop {
            let swap = self.g.sample_swap(&mut self.rng)?;
            self.stats.transitions_attempted += 1;
            attempts_since_commit += 1;
            match self.g.try_swap(&swap)? {
                SwapOutcome::RejectedSimplicity => {
                    self.stats.simplicity_rejections += 1;
                }
                SwapOutcome::RejectedIsolation { .. } => unreachable!(),
                SwapOutcome::Applied { .. } => {
                    self.stats.windows_tested += 1;
                    if self.g.is_connected_with(&mut self.scratch) {
                        self.stats.windows_succeeded += 1;
                        self.stats.valid_swaps += 1;
                        return Ok(());
                    }
                    let undone = self.g.try_swap(&swap.inverse())?;
                    debug_assert!(matches!(undone, SwapOutcome::Applied { .. }));
                    self.stats.disconnection_rollbacks += 1;
                }
            }
            if attempts_since_commit >= self.stall_cap {
                self.stats.stalled = true;
                return Ok(());
            }
        }
    }

    /// Applies up to `want` swaps, recording them in the undo log. Returns
    /// the number applied, or None when the chain stalled (the partial
    /// window is already rolled back).
    fn fill_window(&mut self, want: u64, width: u32) -> Result<Option<u64>, ShuffleError> {
        let mut applied = 0u64;
        let mut attempts_since_apply = 0u64;
        while applied < want {
            let swap = self.g.sample_swap(&mut self.rng)?;
            self.stats.transitions_attempted += 1;
            attempts_since_apply += 1;
            match apply_swap_isolated(
                &mut self.g,
                &swap,
                width,
                self.degree_stop,
                &mut self.scratch,
            )? {
                SwapOutcome::RejectedSimplicity => {
                    self.stats.simplicity_rejections += 1;
                }
                SwapOutcome::RejectedIsolation { .. } => {
                    self.stats.isolation_rejections += 1;
                }
                SwapOutcome::Applied { .. } => {
                    self.undo.push(swap);
                    applied += 1;
                    attempts_since_apply = 0;
                }
            }
            if attempts_since_apply >= self.stall_cap {
                self.rollback();
                self.stats.stalled = true;
                return Ok(None);
            }
        }
        Ok(Some(applied))
    }

    fn rollback(&mut self) {
        while let Some(swap) = self.undo.pop() {
            let undone = self
                .g
                .try_swap(&swap.inverse())
                .expect("undo log replays cleanly");
            debug_assert!(matches!(undone, SwapOutcome::Applied { .. }));
        }
    }

    fn window_step(&mut self, h: HeuristicKind, target: u64) -> Result<(), ShuffleError> {
        let remaining = target - self.stats.valid_swaps;
        let want = (self.t.ceil() as u64).clamp(1, remaining);
        let Some(applied) = self.fill_window(want, 0)? else {
            return Ok(());
        };
        let connected = self.test_window(applied);
        self.t = update_window(h, self.t, connected)?;
        Ok(())
    }

    fn optimal_step(&mut self, target: u64) -> Result<(), ShuffleError> {
        // Sample count scales with the expected window so that each window
        // sees a handful of disconnection events.
        let samples = ((8.0 * self.t).ceil() as u64).clamp(48, 8000);
        let p_hat = match estimate_p_inplace(
            &mut self.g,
            0,
            self.degree_stop,
            samples,
            &mut self.rng,
            &mut self.scratch,
        )? {
            est if est.applied == 0 => return Err(ShuffleError::NoValidSwaps),
            est => est.p_hat(),
        };
        self.t = if p_hat > 0.0 {
            (1.0 / p_hat).min(self.m as f64)
        } else {
            self.m as f64
        }
        .max(1.0);
        let remaining = target - self.stats.valid_swaps;
        let want = (self.t.ceil() as u64).clamp(1, remaining);
        let Some(applied) = self.fill_window(want, 0)? else {
            return Ok(());
        };
        self.test_window(applied);
        Ok(())
    }

    fn final_step(&mut self) -> Result<(), ShuffleError> {
        let want = (self.t.ceil() as u64).max(1);
        let Some(applied) = self.fill_window(want, self.k)? else {
            return Ok(());
        };
        if self.test_window(applied) {
            self.success_streak += 1;
            self.t = (self.t * (1.0 + default_q_plus())).clamp(self.t_floor, self.t_cap);
            // Let K drift back down after a long streak of clean windows.
            if self.success_streak % 32 == 0 && self.k > self.k_floor {
                self.k -= 1;
            }
        } else {
            self.success_streak = 0;
            self.k = self.k.saturating_mul(2).min(self.g.vertex_count() as u32);
        }
        Ok(())
    }

    /// Full connectivity test closing a window: commit on success, replay
    /// the undo log on failure. Returns whether the window survived.
    fn test_window(&mut self, applied: u64) -> bool {
        self.stats.windows_tested += 1;
        if self.g.is_connected_with(&mut self.scratch) {
            self.stats.windows_succeeded += 1;
            self.stats.valid_swaps += applied;
            self.undo.clear();
            true
        } else {
            self.rollback();
            self.stats.disconnection_rollbacks += 1;
            false
        }
    }
}

fn budget(g: &Graph, cfg: &ShuffleConfig) -> u64 {
    (cfg.swap_budget_factor * g.edge_count() as f64).ceil() as u64
}

/// Runs the configured strategy until ⌈γ·m⌉ valid swaps are committed and
/// returns the shuffled graph with run statistics. The output is always
/// simple, connected, and has the input's exact degree vector.
pub fn run_shuffle(g: Graph, cfg: &ShuffleConfig) -> Result<(Graph, ShuffleStats), ShuffleError> {
    run_shuffle_observed(g, cfg, None)
}

/// [`run_shuffle`] with a progress callback receiving
/// `(valid_swaps_done, target)` every `cfg.progress_interval` valid swaps.
pub fn run_shuffle_observed(
    g: Graph,
    cfg: &ShuffleConfig,
    observer: Option<&mut dyn FnMut(u64, u64)>,
) -> Result<(Graph, ShuffleStats), ShuffleError> {
    let target = budget(&g, cfg);
    let mut sampler = ChainSampler::new(g, cfg)?;
    sampler.advance_to(target, observer)?;
    Ok(sampler.into_result())
}

/// Runs the final strategy (isolation tests + adaptive K and T) regardless
/// of `cfg.heuristic`.
pub fn run_shuffle_final(
    g: Graph,
    cfg: &ShuffleConfig,
) -> Result<(Graph, ShuffleStats), ShuffleError> {
    let cfg = ShuffleConfig {
        heuristic: HeuristicKind::Final,
        ..cfg.clone()
    };
    run_shuffle(g, &cfg)
}

/// Reference strategy: before each window, estimate the disconnection
/// probability and set T = 1/p̂ (capped at m; the cap also covers p̂ = 0).
/// Expensive — the estimation does a connectivity check per sampled swap —
/// so it serves only as the θ_max baseline. The estimation probes are not
/// counted as window tests, so `realized_theta` reflects the windows alone.
pub fn optimal_reference_shuffle(
    g: Graph,
    cfg: &ShuffleConfig,
) -> Result<(Graph, ShuffleStats), ShuffleError> {
    let target = budget(&g, cfg);
    let m = g.edge_count();
    if m < 2 || !g.is_connected() {
        return Err(ShuffleError::BadInput);
    }
    let mut sampler = ChainSampler::with_mode(g, cfg, Mode::OptimalReference);
    sampler.advance_to(target, None)?;
    Ok(sampler.into_result())
}

/// Monte-Carlo estimate of the disconnection probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PEstimate {
    /// Swaps that passed the simplicity (and isolation, if any) filters.
    pub applied: u64,
    /// How many of those left the graph disconnected.
    pub disconnections: u64,
}

impl PEstimate {
    pub fn p_hat(&self) -> f64 {
        if self.applied == 0 {
            0.0
        } else {
            self.disconnections as f64 / self.applied as f64
        }
    }

    /// Binomial standard error √(p̂(1−p̂)/samples).
    pub fn std_error(&self) -> f64 {
        if self.applied == 0 {
            0.0
        } else {
            let p = self.p_hat();
            (p * (1.0 - p) / self.applied as f64).sqrt()
        }
    }
}

/// Estimates the probability that a random swap which passes the
/// simplicity and isolation filters (width 0 disables the isolation
/// filter, giving the plain disconnection probability) leaves the graph
/// disconnected. Each probe is applied, tested, and undone; the graph is
/// unchanged on return.
pub fn estimate_p<R: Rng>(
    g: &Graph,
    width: u32,
    samples: u64,
    rng: &mut R,
) -> Result<f64, ShuffleError> {
    Ok(estimate_p_counts(g, width, samples, rng)?.p_hat())
}

/// [`estimate_p`] with the raw counts for error bars.
pub fn estimate_p_counts<R: Rng>(
    g: &Graph,
    width: u32,
    samples: u64,
    rng: &mut R,
) -> Result<PEstimate, ShuffleError> {
    if g.edge_count() < 2 || !g.is_connected() {
        return Err(ShuffleError::BadInput);
    }
    let mut work = g.clone();
    let mut scratch = work.scratch();
    let est = estimate_p_inplace(&mut work, width, true, samples, rng, &mut scratch)?;
    if est.applied == 0 {
        return Err(ShuffleError::NoValidSwaps);
    }
    Ok(est)
}

/// Core estimator; the graph must be connected on entry and is restored
/// after every probe. Post-swap connectivity is decided by the two-sided
/// component query on the removed edge's endpoints, which is exact here
/// because the pre-swap graph is connected.
fn estimate_p_inplace<R: Rng>(
    g: &mut Graph,
    width: u32,
    degree_stop: bool,
    samples: u64,
    rng: &mut R,
    scratch: &mut TraversalScratch,
) -> Result<PEstimate, ShuffleError> {
    let budget = samples.saturating_mul(400).max(10_000);
    let mut applied = 0u64;
    let mut disconnections = 0u64;
    let mut attempts = 0u64;
    while applied < samples && attempts < budget {
        let swap = g.sample_swap(rng)?;
        attempts += 1;
        if let SwapOutcome::Applied { .. } =
            apply_swap_isolated(g, &swap, width, degree_stop, scratch)?
        {
            applied += 1;
            let (a, b) = swap.e1;
            if !g.in_same_component(a, b, scratch) {
                disconnections += 1;
            }
            let undone = g.try_swap(&swap.inverse())?;
            debug_assert!(matches!(undone, SwapOutcome::Applied { .. }));
        }
    }
    Ok(PEstimate {
        applied,
        disconnections,
    })
}

/// Exhaustive disconnection probability over every (ordered edge pair,
/// pairing) candidate: the fraction of filter-passing swaps that
/// disconnect. Returns 0 when no candidate passes (e.g. complete graphs).
/// Small graphs only.
pub fn exact_p(g: &Graph, width: u32) -> f64 {
    let m = g.edge_count();
    let mut work = g.clone();
    let mut scratch = work.scratch();
    let mut passed = 0u64;
    let mut disconnections = 0u64;
    for i in 0..m {
        for j in 0..m {
            if i == j {
                continue;
            }
            for pairing in [crate::graph::Pairing::Cross, crate::graph::Pairing::Parallel] {
                let swap = crate::graph::EdgeSwap {
                    slot1: i as u32,
                    slot2: j as u32,
                    e1: work.edges()[i],
                    e2: work.edges()[j],
                    pairing,
                };
                if let SwapOutcome::Applied { .. } =
                    apply_swap_isolated(&mut work, &swap, width, false, &mut scratch)
                        .expect("slots are in range")
                {
                    passed += 1;
                    let (a, b) = swap.e1;
                    if !work.in_same_component(a, b, &mut scratch) {
                        disconnections += 1;
                    }
                    work.try_swap(&swap.inverse()).expect("undo applies");
                }
            }
        }
    }
    if passed == 0 {
        0.0
    } else {
        disconnections as f64 / passed as f64
    }
}

/// Graph-free window simulation: each window of ⌈T⌉ swaps survives with
/// probability (1−p)^⌈T⌉ and T follows the chosen update rule. Returns the
/// (T, survived) trace. Only the Gkantsidis and geometric rules apply.
pub fn simulate_heuristic<R: Rng>(
    h: HeuristicKind,
    p: f64,
    steps: usize,
    rng: &mut R,
) -> Result<Vec<(f64, bool)>, ShuffleError> {
    if matches!(h, HeuristicKind::Naive | HeuristicKind::Final) {
        return Err(ShuffleError::WrongHeuristic);
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(ShuffleError::DegenerateP);
    }
    let ln_q = (1.0 - p).ln();
    let mut t = 1.0f64;
    let mut trace = Vec::with_capacity(steps);
    for _ in 0..steps {
        let survive_prob = (t.ceil() * ln_q).exp();
        let ok = rng.gen::<f64>() < survive_prob;
        trace.push((t, ok));
        t = update_window(h, t, ok)?;
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Pairing;
    use crate::realization::{havel_hakimi, DegreeSequence};

    fn cycle(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let edges: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|u| (u + 1..n as u32).map(move |v| (u, v)))
            .collect();
        Graph::from_edge_list(n, &edges).unwrap()
    }

    /// Complete bipartite K_{3,3} (a 3-edge-connected core) with a pendant
    /// vertex on each of 0, 1, 2. The only disconnecting swaps pair two
    /// pendant edges, isolating a component of exactly 2 vertices.
    fn core_with_pendants() -> Graph {
        let mut edges = Vec::new();
        for u in 0..3u32 {
            for v in 3..6u32 {
                edges.push((u, v));
            }
        }
        edges.extend_from_slice(&[(0, 6), (1, 7), (2, 8)]);
        Graph::from_edge_list(9, &edges).unwrap()
    }

    #[test]
    fn theta_formula() {
        assert_eq!(theta(10.0, 0.0), 10.0);
        assert!((theta(10.0, 0.1) - 3.4867844).abs() < 1e-6);
        assert_eq!(theta(2.0, 1.0), 0.0);
    }

    #[test]
    fn theta_max_values() {
        let (t, th) = theta_max(0.1).unwrap();
        assert!((t - 10.0).abs() < 1e-12);
        assert!((th - 3.6787944).abs() < 1e-6);

        let (t, th) = theta_max(0.5).unwrap();
        assert!((t - 2.0).abs() < 1e-12);
        assert!((th - 0.7357589).abs() < 1e-6);

        let e = std::f64::consts::E;
        let (t, th) = theta_max(1.0 / e).unwrap();
        assert!((t - e).abs() < 1e-12);
        assert!((th - 1.0).abs() < 1e-12);

        assert_eq!(theta_max(0.0), Err(ShuffleError::DegenerateP));
    }

    #[test]
    fn update_window_rules() {
        assert_eq!(
            update_window(HeuristicKind::Gkantsidis, 8.0, false).unwrap(),
            4.0
        );
        assert_eq!(
            update_window(HeuristicKind::Gkantsidis, 8.0, true).unwrap(),
            9.0
        );
        let g = HeuristicKind::Geometric {
            q_minus: 0.1,
            q_plus: 0.1718,
        };
        assert!((update_window(g, 100.0, true).unwrap() - 117.18).abs() < 1e-9);
        assert!((update_window(g, 100.0, false).unwrap() - 90.0).abs() < 1e-9);
        // Clamped to at least 1.
        assert_eq!(update_window(HeuristicKind::Gkantsidis, 1.0, false).unwrap(), 1.0);
        assert_eq!(
            update_window(HeuristicKind::Naive, 5.0, true),
            Err(ShuffleError::WrongHeuristic)
        );
        assert_eq!(
            update_window(HeuristicKind::Final, 5.0, true),
            Err(ShuffleError::WrongHeuristic)
        );
    }

    #[test]
    fn zero_budget_returns_input_unchanged() {
        let g = havel_hakimi(&DegreeSequence::new(vec![1, 2, 2, 1])).unwrap();
        let before = g.clone();
        let cfg = ShuffleConfig {
            swap_budget_factor: 0.0,
            ..ShuffleConfig::new(HeuristicKind::Gkantsidis, 5)
        };
        let (out, stats) = run_shuffle(g, &cfg).unwrap();
        assert_eq!(out, before);
        assert_eq!(stats.valid_swaps, 0);
        assert_eq!(stats.transitions_attempted, 0);
    }

    #[test]
    fn bad_input_rejected() {
        let disconnected = Graph::from_edge_list(4, &[(0, 1), (2, 3)]).unwrap();
        let cfg = ShuffleConfig::default();
        assert!(matches!(
            run_shuffle(disconnected, &cfg),
            Err(ShuffleError::BadInput)
        ));
        let tiny = Graph::from_edge_list(2, &[(0, 1)]).unwrap();
        assert!(matches!(run_shuffle(tiny, &cfg), Err(ShuffleError::BadInput)));
    }

    #[test]
    fn all_variants_preserve_structure_on_six_cycle() {
        for h in [
            HeuristicKind::Naive,
            HeuristicKind::Gkantsidis,
            HeuristicKind::geometric_default(),
            HeuristicKind::Final,
        ] {
            let cfg = ShuffleConfig {
                swap_budget_factor: 20.0,
                ..ShuffleConfig::new(h, 99)
            };
            let (out, stats) = run_shuffle(cycle(6), &cfg).unwrap();
            out.assert_invariants();
            assert!(out.is_connected());
            assert_eq!(out.degrees(), vec![2; 6], "{h:?}");
            assert!(stats.valid_swaps >= 120, "{h:?}: {stats:?}");
            assert!(!stats.stalled);
        }
    }

    #[test]
    fn runs_are_bit_reproducible() {
        for h in [
            HeuristicKind::Naive,
            HeuristicKind::Gkantsidis,
            HeuristicKind::geometric_default(),
            HeuristicKind::Final,
        ] {
            let g = havel_hakimi(&DegreeSequence::new(vec![3, 3, 2, 2, 2, 2, 1, 1])).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
            let g = crate::realization::connect(g, &mut rng).unwrap();
            let cfg = ShuffleConfig::new(h, 1234);
            let (out1, stats1) = run_shuffle(g.clone(), &cfg).unwrap();
            let (out2, stats2) = run_shuffle(g, &cfg).unwrap();
            assert_eq!(out1, out2, "{h:?}");
            assert_eq!(stats1, stats2, "{h:?}");
        }
    }

    #[test]
    fn triangle_stalls_and_returns_input() {
        let g = complete(3);
        let before = g.clone();
        for h in [
            HeuristicKind::Naive,
            HeuristicKind::Gkantsidis,
            HeuristicKind::Final,
        ] {
            let cfg = ShuffleConfig::new(h, 0);
            let (out, stats) = run_shuffle(g.clone(), &cfg).unwrap();
            assert!(stats.stalled, "{h:?}");
            assert_eq!(stats.valid_swaps, 0);
            assert_eq!(out, before);
        }
    }

    #[test]
    fn exact_p_on_six_cycle_is_one_quarter() {
        // 24 candidates pass simplicity, 6 of them disconnect.
        let p = exact_p(&cycle(6), 0);
        assert!((p - 0.25).abs() < 1e-12, "p = {p}");
    }

    #[test]
    fn exact_p_on_clique_is_zero() {
        assert_eq!(exact_p(&complete(6), 0), 0.0);
    }

    #[test]
    fn exact_p_with_full_width_is_zero() {
        let g = cycle(8);
        assert_eq!(exact_p(&g, 8), 0.0);
        assert_eq!(exact_p(&g, 1000), 0.0);
    }

    #[test]
    fn estimate_p_matches_exact_on_six_cycle() {
        let g = cycle(6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let est = estimate_p_counts(&g, 0, 40_000, &mut rng).unwrap();
        let exact = 0.25;
        let dev = (est.p_hat() - exact).abs();
        assert!(dev <= 5.0 * est.std_error(), "p̂ = {}", est.p_hat());
    }

    #[test]
    fn estimate_p_errors_when_nothing_applies() {
        let g = complete(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            estimate_p(&g, 0, 100, &mut rng),
            Err(ShuffleError::NoValidSwaps)
        );
    }

    #[test]
    fn estimate_p_zero_at_width_n() {
        let g = cycle(10);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let p = estimate_p(&g, 10, 2000, &mut rng).unwrap();
        assert_eq!(p, 0.0);
    }

    #[test]
    fn estimate_p_decreases_with_width() {
        // Sparse ring of small cliques has plenty of small-component cuts.
        let g = {
            let mut edges = Vec::new();
            for b in 0..8u32 {
                let base = 3 * b;
                edges.push((base, base + 1));
                edges.push((base + 1, base + 2));
                edges.push((base, base + 2));
                edges.push((base + 2, (base + 3) % 24));
            }
            Graph::from_edge_list(24, &edges).unwrap()
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let a = estimate_p_counts(&g, 1, 30_000, &mut rng).unwrap();
        let b = estimate_p_counts(&g, 4, 30_000, &mut rng).unwrap();
        let sigma = (a.std_error().powi(2) + b.std_error().powi(2)).sqrt();
        assert!(
            a.p_hat() >= b.p_hat() - 3.0 * sigma,
            "p(1) = {}, p(4) = {}",
            a.p_hat(),
            b.p_hat()
        );
    }

    #[test]
    fn isolation_probe_cancels_small_splits() {
        let mut g = core_with_pendants();
        let mut scratch = g.scratch();
        // Pairing the two pendant edges (0,6), (1,7) in parallel isolates
        // the pair {6,7}.
        let swap = g.swap_for_edges((0, 6), (1, 7), Pairing::Parallel).unwrap();
        let before = g.clone();
        let out = apply_swap_isolated(&mut g, &swap, 2, true, &mut scratch).unwrap();
        assert_eq!(out, SwapOutcome::RejectedIsolation { component_size: 2 });
        assert_eq!(g, before);
        // Width 1 misses it.
        let out = apply_swap_isolated(&mut g, &swap, 1, true, &mut scratch).unwrap();
        assert!(matches!(out, SwapOutcome::Applied { .. }));
        assert!(!g.is_connected());
    }

    #[test]
    fn final_with_width_two_never_rolls_back_on_pendant_graph() {
        let cfg = ShuffleConfig {
            swap_budget_factor: 50.0,
            initial_k: 2,
            ..ShuffleConfig::new(HeuristicKind::Final, 7)
        };
        let (out, stats) = run_shuffle(core_with_pendants(), &cfg).unwrap();
        assert!(out.is_connected());
        assert_eq!(stats.disconnection_rollbacks, 0);
        assert!(stats.isolation_rejections > 0, "{stats:?}");
        assert!(!stats.stalled);
    }

    #[test]
    fn final_with_width_at_least_n_never_rolls_back() {
        let g = havel_hakimi(&DegreeSequence::new(vec![3, 2, 2, 2, 2, 2, 2, 2, 2, 1])).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let g = crate::realization::connect(g, &mut rng).unwrap();
        let cfg = ShuffleConfig {
            swap_budget_factor: 30.0,
            initial_k: 10_000,
            ..ShuffleConfig::new(HeuristicKind::Final, 3)
        };
        let (out, stats) = run_shuffle(g, &cfg).unwrap();
        assert!(out.is_connected());
        assert_eq!(stats.disconnection_rollbacks, 0, "{stats:?}");
    }

    #[test]
    fn window_rollback_restores_pre_window_state() {
        let mut g = cycle(12);
        let snapshot = g.clone();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut undo = Vec::new();
        let mut applied = 0;
        while applied < 6 {
            let s = g.sample_swap(&mut rng).unwrap();
            if let SwapOutcome::Applied { .. } = g.try_swap(&s).unwrap() {
                undo.push(s);
                applied += 1;
            }
        }
        assert_ne!(g, snapshot);
        for s in undo.into_iter().rev() {
            let out = g.try_swap(&s.inverse()).unwrap();
            assert!(matches!(out, SwapOutcome::Applied { .. }));
        }
        assert_eq!(g, snapshot);
    }

    #[test]
    fn simulate_rejects_wrong_heuristics_and_bad_p() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            simulate_heuristic(HeuristicKind::Naive, 0.1, 10, &mut rng),
            Err(ShuffleError::WrongHeuristic)
        );
        assert_eq!(
            simulate_heuristic(HeuristicKind::Final, 0.1, 10, &mut rng),
            Err(ShuffleError::WrongHeuristic)
        );
        assert_eq!(
            simulate_heuristic(HeuristicKind::Gkantsidis, 0.0, 10, &mut rng),
            Err(ShuffleError::DegenerateP)
        );
    }

    #[test]
    fn simulated_gkantsidis_window_tracks_mean_field() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let trace = simulate_heuristic(HeuristicKind::Gkantsidis, 0.01, 200_000, &mut rng).unwrap();
        let skip = trace.len() / 10;
        let mean: f64 =
            trace[skip..].iter().map(|&(t, _)| t).sum::<f64>() / (trace.len() - skip) as f64;
        let predicted = (2.0f64 / 0.01).sqrt();
        assert!(
            (mean - predicted).abs() / predicted < 0.2,
            "mean window {mean} vs {predicted}"
        );
    }

    #[test]
    fn optimal_reference_converges_on_small_graph() {
        let g = havel_hakimi(&DegreeSequence::new(vec![3, 2, 2, 2, 2, 2, 2, 1])).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let g = crate::realization::connect(g, &mut rng).unwrap();
        let cfg = ShuffleConfig {
            swap_budget_factor: 20.0,
            ..ShuffleConfig::new(HeuristicKind::Final, 17)
        };
        let degrees = g.degrees();
        let (out, stats) = optimal_reference_shuffle(g, &cfg).unwrap();
        assert!(out.is_connected());
        assert_eq!(out.degrees(), degrees);
        assert!(stats.valid_swaps >= 140);
        assert!(stats.windows_tested > 0);
    }
}
