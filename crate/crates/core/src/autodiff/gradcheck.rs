use serde::Serialize;

use super::{ParamStore, Tape, Var};
use crate::error::Result;

/// Gradients smaller than this are compared on an absolute scale.
pub const GRAD_SCALE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct ParamCheck {
    pub name: String,
    pub checked: usize,
    /// Entries whose ±step perturbation changed a discrete decision
    /// (ReLU mask, top-k selection); the function is not smooth there.
    pub excluded: usize,
    pub max_rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradCheckReport {
    pub step: f64,
    pub tolerance: f64,
    pub params: Vec<ParamCheck>,
    pub max_rel_err: f64,
    pub passed: bool,
}

impl GradCheckReport {
    pub fn total_checked(&self) -> usize {
        self.params.iter().map(|p| p.checked).sum()
    }

    pub fn total_excluded(&self) -> usize {
        self.params.iter().map(|p| p.excluded).sum()
    }
}

/// Relative error with a floor on the denominator.
pub fn relative_error(analytic: f64, numeric: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(GRAD_SCALE_FLOOR)
}

/// Compares reverse-mode gradients of `f` against central differences for
/// every scalar of every parameter in `store`.
///
/// `f` records the scalar loss on the supplied tape, reading parameters
/// through [`Tape::param`].
pub fn finite_diff_check<F>(store: &ParamStore, f: F, step: f64, tol: f64) -> Result<GradCheckReport>
where
    F: Fn(&mut Tape, &ParamStore) -> Result<Var>,
{
    let mut tape = Tape::new();
    let loss = f(&mut tape, store)?;
    let base_branch = tape.branch_signature();
    let grads = tape.backward(loss)?;

    let eval = |s: &ParamStore| -> Result<(f64, u64)> {
        let mut t = Tape::new();
        let l = f(&mut t, s)?;
        Ok((t.value(l).get(0, 0), t.branch_signature()))
    };

    let mut work = store.clone();
    let mut params = Vec::new();
    for id in store.ids() {
        let analytic = grads.param(id).cloned();
        let mut check = ParamCheck {
            name: store.name(id).to_string(),
            checked: 0,
            excluded: 0,
            max_rel_err: 0.0,
        };
        for i in 0..store.value(id).len() {
            let orig = store.value(id).data()[i];
            work.value_mut(id).data_mut()[i] = orig + step;
            let (plus, b_plus) = eval(&work)?;
            work.value_mut(id).data_mut()[i] = orig - step;
            let (minus, b_minus) = eval(&work)?;
            work.value_mut(id).data_mut()[i] = orig;

            if b_plus != base_branch || b_minus != base_branch {
                check.excluded += 1;
                continue;
            }
            let numeric = (plus - minus) / (2.0 * step);
            let a = analytic.as_ref().map_or(0.0, |g| g.data()[i]);
            check.checked += 1;
            check.max_rel_err = check.max_rel_err.max(relative_error(a, numeric));
        }
        params.push(check);
    }
    let max_rel_err = params.iter().map(|p| p.max_rel_err).fold(0.0, f64::max);
    Ok(GradCheckReport {
        step,
        tolerance: tol,
        passed: max_rel_err < tol,
        params,
        max_rel_err,
    })
}
