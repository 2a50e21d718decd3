use std::sync::Arc;

use super::map::{same_module, TableMap};
use super::module::FiniteModule;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExactMode {
    /// f(X) = Ker g and g is k-uniform.
    Exact,
    /// closure of f(X) = Ker g.
    Semi,
    /// f(X) = Ker g.
    Proper,
    /// closure of f(X) = Ker g and g is k-uniform.
    Quasi,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointVerdict {
    /// Index of the incoming map of the joint.
    pub position: usize,
    pub image_equals_kernel: bool,
    pub closure_equals_kernel: bool,
    pub outgoing_k_uniform: bool,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactnessReport {
    pub holds: bool,
    pub joints: Vec<JointVerdict>,
}

/// Checks every joint X → Y → Z of a composable sequence.
pub fn exactness_check(seq: &[TableMap], mode: ExactMode) -> Result<ExactnessReport> {
    for w in seq.windows(2) {
        if !same_module(w[0].target(), w[1].source()) {
            return Err(Error::NotComposable(format!(
                "{} does not feed {}",
                w[0].target().name(),
                w[1].source().name()
            )));
        }
    }
    let mut joints = Vec::new();
    for (i, w) in seq.windows(2).enumerate() {
        let (f, g) = (&w[0], &w[1]);
        let y = f.target();
        let img = f.image();
        let ker = g.kernel();
        let clos = img.closure();
        let image_equals_kernel = img == ker;
        let closure_equals_kernel = clos == ker;
        let outgoing_k_uniform = g.is_k_uniform();
        let holds = match mode {
            ExactMode::Exact => image_equals_kernel && outgoing_k_uniform,
            ExactMode::Semi => closure_equals_kernel,
            ExactMode::Proper => image_equals_kernel,
            ExactMode::Quasi => closure_equals_kernel && outgoing_k_uniform,
        };
        let witness = if holds {
            None
        } else {
            let uses_closure = matches!(mode, ExactMode::Semi | ExactMode::Quasi);
            let reference = if uses_closure { &clos } else { &img };
            let differs = y.elements().find(|&e| reference.contains(e) != ker.contains(e));
            Some(match differs {
                Some(e) if reference.contains(e) => {
                    format!("at {}: {} is in the image side but not in Ker", y.name(), y.label(e))
                }
                Some(e) => format!("at {}: {} is in Ker but not in the image side", y.name(), y.label(e)),
                None => format!("at {}: outgoing map is not k-uniform", y.name()),
            })
        };
        joints.push(JointVerdict {
            position: i,
            image_equals_kernel,
            closure_equals_kernel,
            outgoing_k_uniform,
            holds,
            witness,
        });
    }
    Ok(ExactnessReport { holds: joints.iter().all(|j| j.holds), joints })
}

/// 0 → X → Y → Z → 0 for the given pair of maps.
pub fn short_sequence(f: &TableMap, g: &TableMap) -> Vec<TableMap> {
    let base = f.source().base();
    let zero = Arc::new(FiniteModule::zero_module(base));
    vec![TableMap::zero(&zero, f.source()), f.clone(), g.clone(), TableMap::zero(g.target(), &zero)]
}
