use std::collections::BTreeMap;

use super::{
    essential_background, essential_superset, pseudospectrum, resolve_block_size, spectrum_superset,
    Grid, InclusionResult,
};
use crate::error::{Error, Result};
use crate::operator::{BandOperator, IndexDomain};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskParams {
    /// Window width in blocks.
    pub n: usize,
    pub block_size: Option<usize>,
    pub eps: f64,
    pub closed: bool,
}

/// A spectral set that can be enclosed on a grid.
pub trait InclusionTask: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    fn run(&self, a: &BandOperator, params: &TaskParams, grid: &Grid) -> Result<InclusionResult>;

    /// Periodic bi-infinite operator whose symbol curve is the reference set
    /// for this task, if there is one.
    fn reference_operator(&self, a: &BandOperator, params: &TaskParams) -> Option<BandOperator>;
}

pub struct PseudospectrumTask;
pub struct SpectrumTask;
pub struct EssentialTask;

fn periodic_bi(a: &BandOperator) -> Option<BandOperator> {
    (a.domain() == IndexDomain::BiInfinite && a.is_periodic()).then(|| a.clone())
}

impl InclusionTask for PseudospectrumTask {
    fn name(&self) -> &'static str {
        "pseudospectrum"
    }

    fn description(&self) -> &'static str {
        "points with mu_n < eps (inside) and mu_n < eps + eps_n (possibly inside)"
    }

    fn run(&self, a: &BandOperator, p: &TaskParams, grid: &Grid) -> Result<InclusionResult> {
        pseudospectrum(a, p.n, resolve_block_size(a, p.block_size), p.eps, p.closed, grid)
    }

    fn reference_operator(&self, a: &BandOperator, _: &TaskParams) -> Option<BandOperator> {
        periodic_bi(a)
    }
}

impl InclusionTask for SpectrumTask {
    fn name(&self) -> &'static str {
        "spectrum"
    }

    fn description(&self) -> &'static str {
        "points with mu_n <= eps_n"
    }

    fn run(&self, a: &BandOperator, p: &TaskParams, grid: &Grid) -> Result<InclusionResult> {
        spectrum_superset(a, p.n, resolve_block_size(a, p.block_size), grid)
    }

    fn reference_operator(&self, a: &BandOperator, _: &TaskParams) -> Option<BandOperator> {
        periodic_bi(a)
    }
}

impl InclusionTask for EssentialTask {
    fn name(&self) -> &'static str {
        "essential"
    }

    fn description(&self) -> &'static str {
        "spectrum enclosure of the periodic tail"
    }

    fn run(&self, a: &BandOperator, p: &TaskParams, grid: &Grid) -> Result<InclusionResult> {
        essential_superset(a, p.n, resolve_block_size(a, p.block_size), grid)
    }

    fn reference_operator(&self, a: &BandOperator, p: &TaskParams) -> Option<BandOperator> {
        let s = resolve_block_size(a, p.block_size);
        match a.domain() {
            IndexDomain::SemiInfinite => essential_background(a, p.n, s).ok(),
            IndexDomain::BiInfinite => {
                let bg = a.background();
                bg.is_periodic().then_some(bg)
            }
            IndexDomain::Finite(_) => None,
        }
    }
}

/// Tasks keyed by name.
pub struct TaskRegistry {
    tasks: BTreeMap<&'static str, Box<dyn InclusionTask>>,
}

impl TaskRegistry {
    pub fn empty() -> Self {
        Self { tasks: BTreeMap::new() }
    }

    pub fn with_defaults() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(PseudospectrumTask));
        r.register(Box::new(SpectrumTask));
        r.register(Box::new(EssentialTask));
        r
    }

    /// Adds a task, replacing any task of the same name.
    pub fn register(&mut self, task: Box<dyn InclusionTask>) {
        self.tasks.insert(task.name(), task);
    }

    pub fn get(&self, name: &str) -> Result<&dyn InclusionTask> {
        self.tasks.get(name).map(|t| t.as_ref()).ok_or_else(|| {
            Error::UnknownTask(format!(
                "\"{name}\" (available: {})",
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.tasks.keys().copied().collect()
    }
}

impl Default for TaskRegistry {
    fn default() -> Self {
        Self::with_defaults()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = TaskRegistry::with_defaults();
        assert_eq!(r.names(), vec!["essential", "pseudospectrum", "spectrum"]);
        assert_eq!(r.get("spectrum").unwrap().name(), "spectrum");
        let err = r.get("nope").err().unwrap().to_string();
        assert!(err.contains("available: essential"), "{err}");
    }
}
