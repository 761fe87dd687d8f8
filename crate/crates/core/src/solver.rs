//! Damped Newton iteration with adaptive load increments and recovery.
//!
//! Each increment advances the prescribed displacements by
//! `alpha * loaded / max_increments` and iterates
//! `K du = lambda F_ext - F_int` on the free DOFs until `|du|` drops below
//! the tolerance. An increment that needs too many iterations is rolled
//! back: the step is halved for the first ten consecutive failures, after
//! which the step grows and the update is relaxed instead.

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{partition_free_dofs, Assembler};
use crate::error::{Error, Result};
use crate::math::vec_norm;
use crate::scene::Scene;
use crate::sparse::{CsrMatrix, SkylinePlan};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub max_increments: usize,
    pub max_iterations: usize,
    /// Convergence threshold on `|du|` over the free DOFs; defaults to
    /// `1e-8` times the mean element edge length.
    pub tolerance: Option<f64>,
    /// Consecutive failed attempts tolerated before giving up.
    pub max_recoveries: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_increments: 100,
            max_iterations: 50,
            tolerance: None,
            max_recoveries: 20,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, reason| Err(Error::InvalidParameter { name, reason });
        if self.max_increments == 0 {
            return bad("solver.max_increments", "must be positive");
        }
        if self.max_iterations == 0 {
            return bad("solver.max_iterations", "must be positive");
        }
        if self.max_recoveries == 0 {
            return bad("solver.max_recoveries", "must be at least 1");
        }
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return bad("solver.tolerance", "must be positive");
            }
        }
        Ok(())
    }
}

/// Solves `K[free, free] x = rhs`.
pub trait LinearSolver {
    fn solve(&mut self, k: &CsrMatrix, free: &[usize], rhs: &[f64]) -> Result<Vec<f64>>;
}

/// Sparse profile LDL^T; the symbolic plan is reused while the free set is
/// unchanged.
#[derive(Debug, Default)]
pub struct DirectSolver {
    plan: Option<SkylinePlan>,
}

impl LinearSolver for DirectSolver {
    fn solve(&mut self, k: &CsrMatrix, free: &[usize], rhs: &[f64]) -> Result<Vec<f64>> {
        if free.is_empty() {
            return Ok(Vec::new());
        }
        let reuse = matches!(&self.plan, Some(p) if p.free() == free);
        if !reuse {
            self.plan = Some(SkylinePlan::new(k, free));
        }
        let plan = self.plan.as_ref().expect("plan built above");
        plan.factor(k)?.solve(rhs)
    }
}

/// Why an attempt was rolled back.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Accepted,
    /// The iteration count tripped the failure test.
    TooManyIterations,
    /// Assembly or the linear solve failed, or the state stopped being
    /// finite.
    Diverged(Error),
}

/// Solver state after one increment attempt, with the counters already
/// updated by the acceptance or recovery rules.
#[derive(Debug, Clone, PartialEq)]
pub struct AttemptRecord {
    pub increment: usize,
    /// Step factor used by this attempt.
    pub step: f64,
    pub iterations: usize,
    pub residual: f64,
    pub outcome: Outcome,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub recoveries: usize,
}

/// Progress hooks. All methods default to no-ops.
pub trait Observer {
    fn iteration(&mut self, _increment: usize, _iteration: usize, _norm: f64) {}
    fn attempt(&mut self, _record: &AttemptRecord) {}
    /// Called after every attempt, once the state is accepted or rolled back.
    fn state(&mut self, _state: &SolverState) {}
}

impl Observer for () {}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub increment: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub iterations: usize,
    pub residual: f64,
    pub energy: f64,
    pub crease_energy: f64,
    pub displacement: Vec<f64>,
}

/// The initial state followed by every accepted increment, plus the log of
/// all attempts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub attempts: Vec<AttemptRecord>,
}

impl Trajectory {
    pub fn last(&self) -> Option<&TrajectoryPoint> {
        self.points.last()
    }

    pub fn final_lambda(&self) -> f64 {
        self.last().map_or(0.0, |p| p.lambda)
    }
}

/// A run that stopped early, with everything accepted up to that point.
#[derive(Debug, Clone)]
pub struct SolveFailure {
    pub error: Error,
    pub trajectory: Trajectory,
}

impl core::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} after {} accepted increments", self.error, self.trajectory.points.len().saturating_sub(1))
    }
}

#[cfg(feature = "std")]
impl std::error::Error for SolveFailure {}

impl From<Error> for SolveFailure {
    fn from(error: Error) -> Self {
        SolveFailure {
            error,
            trajectory: Trajectory::default(),
        }
    }
}

/// Mutable state of the increment loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub u: Vec<f64>,
    pub lambda: f64,
    pub alpha: f64,
    pub beta: f64,
    pub recoveries: usize,
    pub increment: usize,
}

impl SolverState {
    pub fn new(total_dofs: usize) -> Self {
        SolverState {
            u: vec![0.0; total_dofs],
            lambda: 0.0,
            alpha: 1.0,
            beta: 1.0,
            recoveries: 0,
            increment: 0,
        }
    }

    /// The failure test on the iteration count, evaluated as written.
    pub fn attempt_failed(&self, iterations: usize, max_iterations: usize) -> bool {
        let factor = if self.alpha > 1.0 { 2.0 } else { 1.0 };
        iterations as f64 >= factor * max_iterations as f64 / (self.beta + 1.0)
    }

    /// Counter updates after a rejected attempt (the rollback of `u` is
    /// done by the caller).
    pub fn recover(&mut self) {
        self.recoveries += 1;
        self.increment -= 1;
        if self.recoveries <= 10 {
            self.alpha /= 2.0;
        } else {
            self.alpha = self.alpha.max(1.0) * 1.5;
            self.beta *= 0.75;
        }
    }

    /// Counter updates after an accepted attempt that advanced the load by
    /// `step / max_increments`.
    pub fn accept(&mut self, step: f64, max_increments: usize, reaches_end: bool) {
        self.lambda = if reaches_end {
            1.0
        } else {
            self.lambda + step / max_increments as f64
        };
        self.recoveries = 0;
        self.beta = 1.0;
        self.alpha = if self.alpha < 1.0 {
            (self.alpha * 1.1).min(1.0)
        } else {
            (self.alpha * 0.9).max(1.0)
        };
    }
}

pub fn run(scene: &Scene, config: &SolverConfig) -> core::result::Result<Trajectory, SolveFailure> {
    run_with(scene, config, &mut DirectSolver::default(), &mut ())
}

pub fn run_with<L: LinearSolver, O: Observer>(
    scene: &Scene,
    config: &SolverConfig,
    linear: &mut L,
    observer: &mut O,
) -> core::result::Result<Trajectory, SolveFailure> {
    config.validate()?;
    let mesh = &scene.mesh;
    let n = mesh.total_dofs();
    let assembler = Assembler::new(mesh)?;
    let bcs = scene.boundary_conditions()?;
    let free = partition_free_dofs(&bcs, n)?;
    let f_ext = bcs.external_force(n);
    let steps = config.max_increments;
    let du_presc: Vec<f64> = bcs
        .loaded_displacement(n)
        .iter()
        .map(|v| v / steps as f64)
        .collect();
    let tolerance = config.tolerance.unwrap_or(1e-8 * mesh.characteristic_size());

    let mut state = SolverState::new(n);
    let mut traj = Trajectory::default();
    let e0 = assembler.energy(&state.u)?;
    traj.points.push(TrajectoryPoint {
        increment: 0,
        lambda: 0.0,
        alpha: state.alpha,
        beta: state.beta,
        iterations: 0,
        residual: 0.0,
        energy: e0,
        crease_energy: assembler.crease_energy(&state.u)?,
        displacement: state.u.clone(),
    });

    while state.lambda < 1.0 && state.recoveries <= config.max_recoveries {
        state.increment += 1;
        let u_prev = state.u.clone();
        // the last increment is shortened so the load lands exactly on 1,
        // and a rounding-sized remainder is absorbed into the current one
        let remaining = (1.0 - state.lambda) * steps as f64;
        let reaches_end = state.alpha >= remaining - 1e-9;
        let step = if reaches_end { remaining } else { state.alpha };
        for (u, d) in state.u.iter_mut().zip(&du_presc) {
            *u += step * d;
        }
        for &d in &bcs.fixed {
            state.u[d] = 0.0;
        }
        let lambda_target = if reaches_end {
            1.0
        } else {
            state.lambda + step / steps as f64
        };

        let mut eps = f64::INFINITY;
        let mut iterations = 0;
        let mut hard_failure = None;
        while eps > tolerance && iterations < config.max_iterations {
            let sys = match assembler.assemble(&state.u) {
                Ok(s) if s.energy.is_finite() => s,
                Ok(_) => {
                    hard_failure = Some(Error::SingularSystem);
                    break;
                }
                Err(e) => {
                    hard_failure = Some(e);
                    break;
                }
            };
            let rhs: Vec<f64> = free
                .iter()
                .map(|&d| lambda_target * f_ext[d] - sys.internal_force[d])
                .collect();
            let du = match linear.solve(&sys.stiffness, &free, &rhs) {
                Ok(x) => x,
                Err(e) => {
                    hard_failure = Some(e);
                    iterations += 1;
                    break;
                }
            };
            for (k, &d) in free.iter().enumerate() {
                state.u[d] += state.beta * du[k];
            }
            eps = vec_norm(&du);
            iterations += 1;
            observer.iteration(state.increment, iterations, eps);
            if !eps.is_finite() {
                hard_failure = Some(Error::SingularSystem);
                break;
            }
        }
        // never accept a state past the fold barrier
        let mut energies = None;
        if hard_failure.is_none() {
            match (assembler.energy(&state.u), assembler.crease_energy(&state.u)) {
                (Ok(e), Ok(c)) if e.is_finite() => energies = Some((e, c)),
                (Err(e), _) | (_, Err(e)) => hard_failure = Some(e),
                _ => hard_failure = Some(Error::SingularSystem),
            }
        }

        let outcome = match hard_failure {
            Some(e) => Outcome::Diverged(e),
            None if state.attempt_failed(iterations, config.max_iterations) => Outcome::TooManyIterations,
            None => Outcome::Accepted,
        };
        if outcome == Outcome::Accepted {
            state.accept(step, steps, reaches_end);
            let (energy, crease_energy) = energies.expect("evaluated for accepted states");
            traj.points.push(TrajectoryPoint {
                increment: state.increment,
                lambda: state.lambda,
                alpha: step,
                beta: 1.0,
                iterations,
                residual: eps,
                energy,
                crease_energy,
                displacement: state.u.clone(),
            });
        } else {
            state.recover();
            state.u = u_prev;
        }
        let record = AttemptRecord {
            increment: state.increment,
            step,
            iterations,
            residual: eps,
            outcome,
            lambda: state.lambda,
            alpha: state.alpha,
            beta: state.beta,
            recoveries: state.recoveries,
        };
        observer.attempt(&record);
        observer.state(&state);
        traj.attempts.push(record);
    }

    if state.lambda < 1.0 {
        return Err(SolveFailure {
            error: Error::RecoveryExhausted { lambda: state.lambda },
            trajectory: traj,
        });
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovery_rules() {
        let mut s = SolverState::new(0);
        s.increment = 1;
        for want in [0.5, 0.25, 0.125] {
            s.recover();
            s.increment += 1;
            assert_eq!(s.alpha, want);
        }
        assert_eq!(s.recoveries, 3);
        s.alpha = 0.5;
        s.accept(0.5, 10, false);
        assert!((s.alpha - 0.55).abs() < 1e-15);
        assert_eq!((s.beta, s.recoveries), (1.0, 0));
        assert!((s.lambda - 0.05).abs() < 1e-15);
        s.alpha = 1.5;
        s.accept(1.5, 10, false);
        assert!((s.alpha - 1.35).abs() < 1e-15);
        s.alpha = 1.05;
        s.accept(1.05, 10, false);
        assert_eq!(s.alpha, 1.0);
    }

    #[test]
    fn late_recoveries_grow_the_step() {
        let mut s = SolverState::new(0);
        s.increment = 20;
        for _ in 0..10 {
            s.recover();
        }
        assert_eq!(s.alpha, 1.0 / 1024.0);
        s.recover();
        assert_eq!((s.alpha, s.beta), (1.5, 0.75));
        s.recover();
        assert_eq!((s.alpha, s.beta), (2.25, 0.5625));
    }

    #[test]
    fn failure_threshold() {
        let mut s = SolverState::new(0);
        assert!(s.attempt_failed(25, 50));
        assert!(!s.attempt_failed(24, 50));
        s.alpha = 1.5;
        s.beta = 0.75;
        // 2 * 50 / 1.75 > 50: the test cannot trip
        assert!(!s.attempt_failed(50, 50));
    }
}
