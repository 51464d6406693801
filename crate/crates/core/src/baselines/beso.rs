use std::cmp::Ordering;

use crate::driver::{run_schedule, validate_schedule, BinaryRun, DriverError, GainMeasure, Method, Schedule, StepChoice};
use crate::fem::StructuralModel;
use crate::knapsack::{BinaryDensity, KnapsackInstance, VOLUME_RTOL};

#[derive(Debug, Clone, PartialEq)]
pub struct BesoConfig {
    pub volfrac: f64,
    pub mu: f64,
    pub omega2: f64,
    pub max_outer: usize,
    pub gain: GainMeasure,
}

impl Default for BesoConfig {
    fn default() -> Self {
        Self { volfrac: 0.5, mu: 0.975, omega2: 1e-2, max_outer: 2000, gain: GainMeasure::Stored }
    }
}

impl BesoConfig {
    pub fn new(volfrac: f64, mu: f64) -> Result<Self, DriverError> {
        let c = Self { volfrac, mu, ..Default::default() };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), DriverError> {
        validate_schedule(self.volfrac, self.mu, self.omega2, self.max_outer)
    }

    fn schedule(&self) -> Schedule {
        Schedule {
            method: Method::Beso,
            volfrac: self.volfrac,
            mu: self.mu,
            omega2: self.omega2,
            max_outer: self.max_outer,
            gain: self.gain,
        }
    }
}

/// Keeps the elements with the largest gains until the budget is full.
/// Equal gains go to currently solid elements first, then to the lower index.
/// Elements that no longer fit are skipped, so unequal volumes still fill
/// the budget greedily.
pub fn greedy_select(instance: &KnapsackInstance, current: &BinaryDensity) -> BinaryDensity {
    let (w, v) = (instance.gains(), instance.volumes());
    let mut order: Vec<usize> = (0..instance.len()).collect();
    order.sort_by(|&a, &b| {
        w[b].partial_cmp(&w[a])
            .unwrap_or(Ordering::Equal)
            .then_with(|| current.get(b).cmp(&current.get(a)))
            .then(a.cmp(&b))
    });
    let limit = instance.budget() + VOLUME_RTOL * instance.total_volume();
    let mut keep = vec![false; instance.len()];
    let mut used = 0.0;
    for e in order {
        if used + v[e] <= limit {
            used += v[e];
            keep[e] = true;
        }
    }
    BinaryDensity::from_bools(keep)
}

/// One outer step of a traced BESO run: the knapsack it faced and the
/// subset it kept.
#[derive(Debug, Clone, PartialEq)]
pub struct BesoStep {
    pub instance: KnapsackInstance,
    pub chosen: BinaryDensity,
}

pub fn run_beso(model: &StructuralModel, config: &BesoConfig) -> Result<BinaryRun, DriverError> {
    config.validate()?;
    run_schedule(model, &config.schedule(), |_, instance, current| Ok(choice(instance, current)))
}

/// As [`run_beso`], also returning every step's instance and selection.
pub fn run_beso_traced(
    model: &StructuralModel,
    config: &BesoConfig,
) -> Result<(BinaryRun, Vec<BesoStep>), DriverError> {
    config.validate()?;
    let mut steps = Vec::new();
    let run = run_schedule(model, &config.schedule(), |_, instance, current| {
        let c = choice(instance, current);
        steps.push(BesoStep { instance: instance.clone(), chosen: c.density.clone() });
        Ok(c)
    })?;
    Ok((run, steps))
}

fn choice(instance: &KnapsackInstance, current: &BinaryDensity) -> StepChoice {
    StepChoice {
        density: greedy_select(instance, current),
        inner_iters: 0,
        p_dual: None,
        tau: None,
        beta: None,
        perturbed: false,
    }
}
