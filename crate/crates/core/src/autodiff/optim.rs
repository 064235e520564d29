use serde::{Deserialize, Serialize};

use super::{Matrix, ParamId, ParamStore};

/// Adam with decoupled weight decay.
///
/// `θ ← θ − lr·wd·θ − lr·m̂/(√v̂ + ε)`. Moments and step counts are kept per
/// parameter, so parameters created mid-training start their own bias
/// correction. Parameters without a gradient in a step are left untouched.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Adam {
    pub lr: f64,
    pub weight_decay: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    state: Vec<Option<Moments>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Moments {
    m: Matrix,
    v: Matrix,
    t: i32,
}

impl Adam {
    pub fn new(lr: f64, weight_decay: f64) -> Self {
        Adam {
            lr,
            weight_decay,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            state: Vec::new(),
        }
    }

    pub fn step<'g>(&mut self, store: &mut ParamStore, grads: impl IntoIterator<Item = (ParamId, &'g Matrix)>) {
        for (id, g) in grads {
            if self.state.len() <= id.0 {
                self.state.resize(id.0 + 1, None);
            }
            let (rows, cols) = g.shape();
            let st = self.state[id.0].get_or_insert_with(|| Moments {
                m: Matrix::zeros(rows, cols),
                v: Matrix::zeros(rows, cols),
                t: 0,
            });
            st.t += 1;
            let bc1 = 1.0 - self.beta1.powi(st.t);
            let bc2 = 1.0 - self.beta2.powi(st.t);
            let theta = store.value_mut(id);
            let it = theta
                .data_mut()
                .iter_mut()
                .zip(st.m.data_mut().iter_mut().zip(st.v.data_mut().iter_mut()))
                .zip(g.data());
            for ((p, (m, v)), &gi) in it {
                *m = self.beta1 * *m + (1.0 - self.beta1) * gi;
                *v = self.beta2 * *v + (1.0 - self.beta2) * gi * gi;
                let m_hat = *m / bc1;
                let v_hat = *v / bc2;
                *p -= self.lr * self.weight_decay * *p + self.lr * m_hat / (v_hat.sqrt() + self.eps);
            }
        }
    }
}
