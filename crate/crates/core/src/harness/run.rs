use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::scenario::{
    region_geometry, LambdaCMode, Method, ModelSpec, Partition, Prepared, Scenario,
};
use crate::closed_form::{
    asymptotic_entropy, asymptotic_negativity, lmg_f1, lmg_f1_minus, lmg_pt_eigenvalue,
    lmg_reduced_eigenvalue, pair_negativity, LinkStrengths, PairFlag,
};
use crate::lattice::{
    boundary_measure_1, boundary_measure_2, pair_boundary_measure_1, pair_boundary_measure_2,
    PairSpec,
};
use crate::model::{critical_lambda, solve_ground_state, CouplingTemplate};
use crate::symplectic::{
    self, entanglement_entropy, log_negativity, partial_transpose_spectrum,
    pure_bipartition_log_negativity, pure_state_reduced_spectrum, symplectic_eigenvalues,
    ContractionMatrix, LogBase, Tolerances,
};
use crate::weak::{
    approx_entropy, approx_log_negativity, approx_pt_spectrum, approx_reduced_spectrum,
};
use crate::{Error, Result};

pub const DEFAULT_MEMORY_CAP: u64 = 4 << 30;

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// worker threads for the sweep; None uses rayon's default
    pub threads: Option<usize>,
    /// overrides the scenario's base
    pub log_base: Option<LogBase>,
    pub memory_cap: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: None,
            log_base: None,
            memory_cap: DEFAULT_MEMORY_CAP,
        }
    }
}

/// One line of the results table. Optional cells are empty in CSV.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultRow {
    pub scenario: String,
    pub partition: String,
    pub method: Method,
    pub lambda_over_lc: f64,
    pub lambda: f64,
    pub lambda_c: f64,
    /// link strength |D-_x| / (4 lambda) on lattices, |F-_1| when fully connected
    pub sigma: Option<f64>,
    pub entropy: Option<f64>,
    pub log_negativity: Option<f64>,
    pub measure_1: f64,
    pub measure_2: f64,
    pub entropy_over_m2: Option<f64>,
    pub negativity_over_m2: Option<f64>,
    pub negativity_over_m1: Option<f64>,
    pub flags: Vec<String>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LambdaC {
    pub value: f64,
    pub mode: LambdaCMode,
    pub estimate: Option<f64>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SweepTiming {
    pub lambda_over_lc: f64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutput {
    pub scenario: String,
    pub log_base: LogBase,
    pub lambda_c: LambdaC,
    pub rows: Vec<ResultRow>,
    #[serde(skip)]
    pub timings: Vec<SweepTiming>,
    #[serde(skip)]
    pub threads: usize,
}

/// Bytes held by one dense solve: about eight complex 2n x 2n buffers.
pub fn memory_estimate(n_modes: usize) -> u64 {
    let m = 2 * n_modes as u64;
    8 * m * m * 16
}

pub fn resolve_lambda_c(scenario: &Scenario, template: &CouplingTemplate) -> Result<LambdaC> {
    let estimate = template.estimate();
    let value = match scenario.lambda_c {
        LambdaCMode::Fixed(v) => v,
        LambdaCMode::Estimate => match &scenario.model {
            ModelSpec::FullyConnected {
                n,
                delta_x,
                delta_y,
            } => crate::closed_form::lmg_critical_lambda(*n, *delta_x, *delta_y),
            ModelSpec::Explicit { .. } => critical_lambda(template)?.lambda_c,
            ModelSpec::Lattice { .. } => estimate,
        },
        LambdaCMode::Exact => critical_lambda(template)?.lambda_c,
    };
    if !(value > 0.0) {
        return Err(Error::NoCriticalPoint);
    }
    Ok(LambdaC {
        value,
        mode: scenario.lambda_c,
        estimate: Some(estimate),
    })
}

pub fn run(scenario: &Scenario, opts: &RunOptions) -> Result<RunOutput> {
    scenario.validate()?;
    let prep = scenario.prepare()?;
    let base = opts.log_base.unwrap_or(scenario.log_base);
    let lambda_c = resolve_lambda_c(scenario, &prep.template)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let threads = pool.current_num_threads();
    let concurrent = threads.min(scenario.sweep.len()) as u64;
    let need = memory_estimate(scenario.n_modes()) * concurrent;
    if need > opts.memory_cap {
        return Err(Error::MemoryCap {
            need,
            cap: opts.memory_cap,
        });
    }

    let measures = prep
        .partitions
        .iter()
        .map(|p| partition_measures(&prep, p))
        .collect::<Result<Vec<_>>>()?;

    // sweep points run in parallel; dense kernels stay sequential inside each
    faer::set_global_parallelism(faer::Par::Seq);
    let ctx = Context {
        scenario,
        prep: &prep,
        measures: &measures,
        base,
        lambda_c: lambda_c.value,
    };
    let results: Vec<Result<(Vec<ResultRow>, SweepTiming)>> = pool.install(|| {
        scenario
            .sweep
            .par_iter()
            .map(|&ratio| ctx.sweep_point(ratio))
            .collect()
    });
    let mut rows = Vec::new();
    let mut timings = Vec::new();
    for r in results {
        let (mut r, t) = r?;
        rows.append(&mut r);
        timings.push(t);
    }
    Ok(RunOutput {
        scenario: scenario.id.clone(),
        log_base: base,
        lambda_c,
        rows,
        timings,
        threads,
    })
}

fn partition_measures(prep: &Prepared, p: &Partition) -> Result<(f64, f64)> {
    let m = &prep.adjacency;
    match p {
        Partition::Region { region, .. } => Ok((
            boundary_measure_1(m, region)?.trace_norm,
            boundary_measure_2(m, region),
        )),
        Partition::Pair { b, c, .. } => Ok((
            pair_boundary_measure_1(m, b, c)?,
            pair_boundary_measure_2(m, b, c)?,
        )),
    }
}

struct Context<'a> {
    scenario: &'a Scenario,
    prep: &'a Prepared,
    measures: &'a [(f64, f64)],
    base: LogBase,
    lambda_c: f64,
}

/// Values produced by one method on one partition.
#[derive(Default)]
struct Cell {
    entropy: Option<f64>,
    negativity: Option<f64>,
    flags: Vec<String>,
}

impl Context<'_> {
    fn sweep_point(&self, ratio: f64) -> Result<(Vec<ResultRow>, SweepTiming)> {
        let start = Instant::now();
        let lambda = ratio * self.lambda_c;
        let h = self.prep.template.hamiltonian(lambda)?;
        let methods = &self.scenario.methods;
        let d = if methods.contains(&Method::Exact) || methods.contains(&Method::Weak) {
            Some(solve_ground_state(&h)?.1)
        } else {
            None
        };
        let sigma = self.sigma(lambda)?;
        let mut rows = Vec::new();
        for (p, &(m1, m2)) in self.prep.partitions.iter().zip(self.measures) {
            for &method in methods {
                let cell = match method {
                    Method::Exact => Some(exact(d.as_ref().expect("solved"), p, self.base)?),
                    Method::Weak => Some(self.weak(d.as_ref().expect("solved"), p)?),
                    Method::ClosedForm => self.closed_form(p, lambda)?,
                };
                let Some(cell) = cell else {
                    log::debug!("no closed form for partition {}", p.id());
                    continue;
                };
                let scale = |v: Option<f64>, m: f64| v.filter(|_| m > 0.0).map(|v| v / m);
                rows.push(ResultRow {
                    scenario: self.scenario.id.clone(),
                    partition: p.id().to_string(),
                    method,
                    lambda_over_lc: ratio,
                    lambda,
                    lambda_c: self.lambda_c,
                    sigma,
                    entropy: cell.entropy,
                    log_negativity: cell.negativity,
                    measure_1: m1,
                    measure_2: m2,
                    entropy_over_m2: scale(cell.entropy, m2),
                    negativity_over_m2: scale(cell.negativity, m2),
                    negativity_over_m1: scale(cell.negativity, m1),
                    flags: cell.flags,
                });
            }
        }
        let timing = SweepTiming {
            lambda_over_lc: ratio,
            seconds: start.elapsed().as_secs_f64(),
        };
        Ok((rows, timing))
    }

    fn sigma(&self, lambda: f64) -> Result<Option<f64>> {
        Ok(match &self.scenario.model {
            ModelSpec::Lattice { .. } => Some(self.links(lambda).sigma_x),
            ModelSpec::FullyConnected {
                n,
                delta_x,
                delta_y,
            } => Some(lmg_f1_minus(*n, lmg_f1(*n, lambda, *delta_x, *delta_y)?)),
            ModelSpec::Explicit { .. } => None,
        })
    }

    fn links(&self, lambda: f64) -> LinkStrengths {
        match &self.prep.template {
            CouplingTemplate::Lattice { couplings, .. } => LinkStrengths::new(couplings, lambda),
            _ => unreachable!("lattice model"),
        }
    }

    fn weak(&self, d: &ContractionMatrix, p: &Partition) -> Result<Cell> {
        let opts = &self.prep.weak;
        let est = match p {
            Partition::Region { region, .. } => approx_reduced_spectrum(d, region, opts)?,
            Partition::Pair { b, c, .. } => approx_pt_spectrum(d, b, c, 1, opts)?,
        };
        let mut flags = Vec::new();
        if est.degraded {
            flags.push("degraded".to_string());
        }
        let flagged = est.condition_flags.iter().filter(|&&f| f).count();
        if flagged > 0 {
            flags.push(format!("negative_modes={flagged}"));
        }
        let entropy =
            matches!(p, Partition::Region { .. }).then(|| approx_entropy(&est, self.base).value);
        Ok(Cell {
            entropy,
            negativity: Some(approx_log_negativity(&est, self.base).value),
            flags,
        })
    }

    fn closed_form(&self, p: &Partition, lambda: f64) -> Result<Option<Cell>> {
        let base = self.base;
        match &self.scenario.model {
            ModelSpec::Lattice { .. } => {
                let s = self.links(lambda);
                match p {
                    Partition::Region { spec, .. } => {
                        let Some(geom) = region_geometry(spec, &self.prep.lattice) else {
                            return Ok(None);
                        };
                        let mode = self.scenario.asymptotic;
                        Ok(Some(Cell {
                            entropy: Some(asymptotic_entropy(geom, &s, mode, base)?.value),
                            negativity: Some(asymptotic_negativity(geom, &s, mode, base)?.value),
                            flags: Vec::new(),
                        }))
                    }
                    Partition::Pair { spec, .. } => {
                        let (orientation, separation, n, depth) = match *spec {
                            PairSpec::BlockPair {
                                orientation,
                                separation,
                                n,
                                depth,
                            } => (orientation, separation, n, depth),
                            PairSpec::LinePair {
                                orientation,
                                separation,
                                n,
                            } => (orientation, separation, n, 1),
                            PairSpec::Regions { .. } => return Ok(None),
                        };
                        let r = pair_negativity(
                            orientation,
                            n,
                            &s,
                            separation,
                            depth,
                            &self.scenario.pairs,
                            base,
                        )?;
                        let flags = match r.flag {
                            Some(PairFlag::VanishesAtThisOrder) => {
                                vec!["vanishes_at_this_order".to_string()]
                            }
                            None => Vec::new(),
                        };
                        Ok(Some(Cell {
                            entropy: None,
                            negativity: Some(r.negativity.value),
                            flags,
                        }))
                    }
                }
            }
            ModelSpec::FullyConnected {
                n,
                delta_x,
                delta_y,
            } => {
                let f1 = lmg_f1(*n, lambda, *delta_x, *delta_y)?;
                Ok(Some(match p {
                    Partition::Region { region, .. } => {
                        let f = lmg_reduced_eigenvalue(*n, region.len(), f1);
                        Cell {
                            entropy: Some(symplectic::h(f) * base.from_nats()),
                            negativity: Some(2.0 * f.sqrt().asinh() * base.from_nats()),
                            flags: Vec::new(),
                        }
                    }
                    Partition::Pair { b, c, .. } => {
                        let f = lmg_pt_eigenvalue(*n, b.len(), c.len(), f1);
                        let neg = if f < 0.0 { symplectic::g(f) } else { 0.0 };
                        Cell {
                            entropy: None,
                            negativity: Some(neg * base.from_nats()),
                            flags: Vec::new(),
                        }
                    }
                }))
            }
            ModelSpec::Explicit { .. } => Ok(None),
        }
    }
}

fn exact(d: &ContractionMatrix, p: &Partition, base: LogBase) -> Result<Cell> {
    match p {
        Partition::Region { region, .. } => {
            let spec = symplectic_eigenvalues(&d.restrict(region.sites())?)?;
            let pure = pure_state_reduced_spectrum(d, region.sites(), &Tolerances::default())?;
            Ok(Cell {
                entropy: Some(entanglement_entropy(&spec, base)?.value),
                negativity: Some(pure_bipartition_log_negativity(&pure, base)?.value),
                flags: Vec::new(),
            })
        }
        Partition::Pair { b, c, .. } => {
            let spec = partial_transpose_spectrum(d, b.sites(), c.sites(), &Tolerances::default())?;
            let neg = log_negativity(&spec, base)?;
            let flags = if neg.diverging {
                vec!["diverging".to_string()]
            } else {
                Vec::new()
            };
            Ok(Cell {
                entropy: None,
                negativity: Some(neg.value),
                flags,
            })
        }
    }
}
