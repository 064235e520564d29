use std::collections::HashMap;

use super::{Matrix, ParamId, ParamStore};
use crate::error::{Error, Result};

/// Handle to a value recorded on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Var(usize);

#[derive(Debug, Clone)]
enum Op {
    Leaf,
    MatMul(Var, Var),
    Transpose(Var),
    Add(Var, Var),
    AddRow(Var, Var),
    Hadamard(Var, Var),
    ScaleRows(Var, Var),
    Scale(Var, f64),
    Relu(Var),
    Tanh(Var),
    SoftmaxRows(Var),
    MeanRows(Var),
    SumAll(Var),
    ConcatCols(Vec<Var>),
    ConcatRows(Vec<Var>),
    SliceCols(Var, usize),
    GatherRows(Var, Vec<usize>),
    ScatterRows(Var, Vec<usize>),
    RepeatRows(Var),
    CrossEntropy(Var, Vec<usize>, Matrix),
}

#[derive(Debug)]
struct Node {
    value: Matrix,
    op: Op,
    requires_grad: bool,
}

/// Records one forward episode for reverse-mode differentiation.
///
/// Nodes are appended in execution order, which is a topological order, so
/// `backward` is a single reverse sweep. Non-smooth decisions (ReLU masks,
/// top-k selections) are folded into [`Tape::branch_signature`] so gradient
/// checks can detect when a perturbation crossed a kink.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
    params: HashMap<ParamId, Var>,
    branch: u64,
}

/// Gradients produced by [`Tape::backward`].
#[derive(Debug)]
pub struct Gradients {
    grads: Vec<Option<Matrix>>,
    params: Vec<(ParamId, Var)>,
}

impl Gradients {
    pub fn of(&self, v: Var) -> Option<&Matrix> {
        self.grads.get(v.0).and_then(Option::as_ref)
    }

    /// Gradient of a registered parameter, if it took part in the episode.
    pub fn param(&self, id: ParamId) -> Option<&Matrix> {
        self.params
            .iter()
            .find(|(p, _)| *p == id)
            .and_then(|&(_, v)| self.of(v))
    }

    /// `(parameter, gradient)` for every parameter used on the tape.
    pub fn param_grads(&self) -> Vec<(ParamId, &Matrix)> {
        let mut out: Vec<_> = self
            .params
            .iter()
            .filter_map(|&(p, v)| self.of(v).map(|g| (p, g)))
            .collect();
        out.sort_by_key(|(p, _)| *p);
        out
    }
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6).wrapping_add(h >> 2))
        .wrapping_mul(0x1000_0000_01B3)
}

impl Tape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn value(&self, v: Var) -> &Matrix {
        &self.nodes[v.0].value
    }

    pub fn shape(&self, v: Var) -> (usize, usize) {
        self.nodes[v.0].value.shape()
    }

    /// Hash of every discrete decision taken so far.
    pub fn branch_signature(&self) -> u64 {
        self.branch
    }

    /// Folds an externally made discrete decision (e.g. a top-k selection)
    /// into the branch signature.
    pub fn note_branch(&mut self, decision: &[usize]) {
        self.branch = mix(self.branch, decision.len() as u64);
        for &d in decision {
            self.branch = mix(self.branch, d as u64);
        }
    }

    fn push(&mut self, value: Matrix, op: Op, requires_grad: bool, name: &'static str) -> Result<Var> {
        if !value.is_finite() {
            return Err(Error::NonFinite(name));
        }
        self.nodes.push(Node {
            value,
            op,
            requires_grad,
        });
        Ok(Var(self.nodes.len() - 1))
    }

    fn rg(&self, v: Var) -> bool {
        self.nodes[v.0].requires_grad
    }

    pub fn constant(&mut self, value: Matrix) -> Result<Var> {
        self.push(value, Op::Leaf, false, "constant")
    }

    /// Leaf that receives a gradient.
    pub fn variable(&mut self, value: Matrix) -> Result<Var> {
        self.push(value, Op::Leaf, true, "variable")
    }

    /// Leaf bound to a stored parameter; repeated calls return the same var
    /// so gradients from every use accumulate.
    pub fn param(&mut self, store: &ParamStore, id: ParamId) -> Result<Var> {
        if let Some(&v) = self.params.get(&id) {
            return Ok(v);
        }
        let v = self.variable(store.value(id).clone())?;
        self.params.insert(id, v);
        Ok(v)
    }

    pub fn matmul(&mut self, a: Var, b: Var) -> Result<Var> {
        let value = self.value(a).matmul(self.value(b))?;
        let rg = self.rg(a) || self.rg(b);
        self.push(value, Op::MatMul(a, b), rg, "matmul")
    }

    pub fn transpose(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).transpose();
        let rg = self.rg(a);
        self.push(value, Op::Transpose(a), rg, "transpose")
    }

    fn same_shape(&self, op: &'static str, a: Var, b: Var) -> Result<()> {
        if self.shape(a) != self.shape(b) {
            return Err(Error::ShapeMismatch {
                op,
                lhs: self.shape(a),
                rhs: self.shape(b),
            });
        }
        Ok(())
    }

    pub fn add(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("add", a, b)?;
        let value = self.value(a).zip_map(self.value(b), |x, y| x + y);
        let rg = self.rg(a) || self.rg(b);
        self.push(value, Op::Add(a, b), rg, "add")
    }

    /// `a + 1·bias`, broadcasting a `1 × c` row over every row of `a`.
    pub fn add_row(&mut self, a: Var, bias: Var) -> Result<Var> {
        let (r, c) = self.shape(a);
        if self.shape(bias) != (1, c) {
            return Err(Error::ShapeMismatch {
                op: "add_row",
                lhs: (r, c),
                rhs: self.shape(bias),
            });
        }
        let mut value = self.value(a).clone();
        let b = self.value(bias).data().to_vec();
        for i in 0..r {
            for (x, y) in value.row_mut(i).iter_mut().zip(&b) {
                *x += y;
            }
        }
        let rg = self.rg(a) || self.rg(bias);
        self.push(value, Op::AddRow(a, bias), rg, "add_row")
    }

    pub fn hadamard(&mut self, a: Var, b: Var) -> Result<Var> {
        self.same_shape("hadamard", a, b)?;
        let value = self.value(a).zip_map(self.value(b), |x, y| x * y);
        let rg = self.rg(a) || self.rg(b);
        self.push(value, Op::Hadamard(a, b), rg, "hadamard")
    }

    /// Multiplies row `i` of `a` by `s[i]`, where `s` is `rows × 1`.
    pub fn scale_rows(&mut self, a: Var, s: Var) -> Result<Var> {
        let (r, c) = self.shape(a);
        if self.shape(s) != (r, 1) {
            return Err(Error::ShapeMismatch {
                op: "scale_rows",
                lhs: (r, c),
                rhs: self.shape(s),
            });
        }
        let mut value = self.value(a).clone();
        for i in 0..r {
            let k = self.value(s).get(i, 0);
            value.row_mut(i).iter_mut().for_each(|x| *x *= k);
        }
        let rg = self.rg(a) || self.rg(s);
        self.push(value, Op::ScaleRows(a, s), rg, "scale_rows")
    }

    pub fn scale(&mut self, a: Var, k: f64) -> Result<Var> {
        let value = self.value(a).map(|x| x * k);
        let rg = self.rg(a);
        self.push(value, Op::Scale(a, k), rg, "scale")
    }

    pub fn relu(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(|x| x.max(0.0));
        let mut h = self.branch;
        for &x in self.value(a).data() {
            h = mix(h, u64::from(x > 0.0) | (u64::from(x == 0.0) << 1));
        }
        self.branch = h;
        let rg = self.rg(a);
        self.push(value, Op::Relu(a), rg, "relu")
    }

    pub fn tanh(&mut self, a: Var) -> Result<Var> {
        let value = self.value(a).map(f64::tanh);
        let rg = self.rg(a);
        self.push(value, Op::Tanh(a), rg, "tanh")
    }

    /// Row-wise softmax, max-shifted for stability.
    pub fn softmax_rows(&mut self, a: Var) -> Result<Var> {
        let mut value = self.value(a).clone();
        for i in 0..value.rows() {
            softmax_in_place(value.row_mut(i));
        }
        let rg = self.rg(a);
        self.push(value, Op::SoftmaxRows(a), rg, "softmax_rows")
    }

    /// Column means as a `1 × cols` row.
    pub fn mean_rows(&mut self, a: Var) -> Result<Var> {
        let (r, c) = self.shape(a);
        if r == 0 {
            return Err(Error::InvalidInput("mean_rows of an empty matrix".into()));
        }
        let m = self.value(a);
        let mut out = vec![0.0; c];
        for i in 0..r {
            for (o, x) in out.iter_mut().zip(m.row(i)) {
                *o += x;
            }
        }
        out.iter_mut().for_each(|o| *o /= r as f64);
        let rg = self.rg(a);
        self.push(Matrix::row_vector(&out), Op::MeanRows(a), rg, "mean_rows")
    }

    pub fn sum_all(&mut self, a: Var) -> Result<Var> {
        let s = self.value(a).sum();
        let rg = self.rg(a);
        self.push(Matrix::filled(1, 1, s), Op::SumAll(a), rg, "sum_all")
    }

    pub fn concat_cols(&mut self, parts: &[Var]) -> Result<Var> {
        let rows = parts.first().map_or(0, |&p| self.shape(p).0);
        if let Some(&bad) = parts.iter().find(|&&p| self.shape(p).0 != rows) {
            return Err(Error::ShapeMismatch {
                op: "concat_cols",
                lhs: self.shape(parts[0]),
                rhs: self.shape(bad),
            });
        }
        let cols: usize = parts.iter().map(|&p| self.shape(p).1).sum();
        let mut value = Matrix::zeros(rows, cols);
        for i in 0..rows {
            let mut offset = 0;
            for &p in parts {
                let src = self.value(p).row(i);
                value.row_mut(i)[offset..offset + src.len()].copy_from_slice(src);
                offset += src.len();
            }
        }
        let rg = parts.iter().any(|&p| self.rg(p));
        self.push(value, Op::ConcatCols(parts.to_vec()), rg, "concat_cols")
    }

    pub fn concat_rows(&mut self, parts: &[Var]) -> Result<Var> {
        let cols = parts.first().map_or(0, |&p| self.shape(p).1);
        if let Some(&bad) = parts.iter().find(|&&p| self.shape(p).1 != cols) {
            return Err(Error::ShapeMismatch {
                op: "concat_rows",
                lhs: self.shape(parts[0]),
                rhs: self.shape(bad),
            });
        }
        let mut data = Vec::new();
        for &p in parts {
            data.extend_from_slice(self.value(p).data());
        }
        let rows = data.len() / cols.max(1);
        let value = Matrix::from_vec(if cols == 0 { 0 } else { rows }, cols, data)?;
        let rg = parts.iter().any(|&p| self.rg(p));
        self.push(value, Op::ConcatRows(parts.to_vec()), rg, "concat_rows")
    }

    /// Columns `start..end` of `a`.
    pub fn slice_cols(&mut self, a: Var, start: usize, end: usize) -> Result<Var> {
        let (r, c) = self.shape(a);
        if start > end || end > c {
            return Err(Error::IndexOutOfRange {
                op: "slice_cols",
                index: end,
                len: c,
            });
        }
        let mut value = Matrix::zeros(r, end - start);
        for i in 0..r {
            value.row_mut(i).copy_from_slice(&self.value(a).row(i)[start..end]);
        }
        let rg = self.rg(a);
        self.push(value, Op::SliceCols(a, start), rg, "slice_cols")
    }

    /// Rows `idx[0], idx[1], …` of `a`.
    pub fn gather_rows(&mut self, a: Var, idx: &[usize]) -> Result<Var> {
        let (r, c) = self.shape(a);
        let mut value = Matrix::zeros(idx.len(), c);
        for (i, &src) in idx.iter().enumerate() {
            if src >= r {
                return Err(Error::IndexOutOfRange {
                    op: "gather_rows",
                    index: src,
                    len: r,
                });
            }
            value.row_mut(i).copy_from_slice(self.value(a).row(src));
        }
        let rg = self.rg(a);
        self.push(value, Op::GatherRows(a, idx.to_vec()), rg, "gather_rows")
    }

    /// `out` has `rows` rows; row `i` of `a` is added into row `idx[i]`.
    pub fn scatter_rows(&mut self, a: Var, idx: &[usize], rows: usize) -> Result<Var> {
        let (r, c) = self.shape(a);
        if idx.len() != r {
            return Err(Error::ShapeMismatch {
                op: "scatter_rows",
                lhs: (r, c),
                rhs: (idx.len(), 1),
            });
        }
        let mut value = Matrix::zeros(rows, c);
        for (i, &dst) in idx.iter().enumerate() {
            if dst >= rows {
                return Err(Error::IndexOutOfRange {
                    op: "scatter_rows",
                    index: dst,
                    len: rows,
                });
            }
            for (o, x) in value.row_mut(dst).iter_mut().zip(self.value(a).row(i)) {
                *o += x;
            }
        }
        let rg = self.rg(a);
        self.push(value, Op::ScatterRows(a, idx.to_vec()), rg, "scatter_rows")
    }

    /// Stacks `n` copies of the `1 × c` row `a`.
    pub fn repeat_rows(&mut self, a: Var, n: usize) -> Result<Var> {
        let (r, c) = self.shape(a);
        if r != 1 {
            return Err(Error::ShapeMismatch {
                op: "repeat_rows",
                lhs: (r, c),
                rhs: (1, c),
            });
        }
        let row = self.value(a).data().to_vec();
        let value = Matrix::from_vec(n, c, row.repeat(n))?;
        let rg = self.rg(a);
        self.push(value, Op::RepeatRows(a), rg, "repeat_rows")
    }

    /// Mean negative log-likelihood of `targets` under row-wise softmax of `logits`.
    pub fn cross_entropy(&mut self, logits: Var, targets: &[usize]) -> Result<Var> {
        let (r, c) = self.shape(logits);
        if targets.len() != r || r == 0 {
            return Err(Error::ShapeMismatch {
                op: "cross_entropy",
                lhs: (r, c),
                rhs: (targets.len(), 1),
            });
        }
        let mut probs = self.value(logits).clone();
        let mut loss = 0.0;
        for (i, &t) in targets.iter().enumerate() {
            if t >= c {
                return Err(Error::IndexOutOfRange {
                    op: "cross_entropy",
                    index: t,
                    len: c,
                });
            }
            let row = self.value(logits).row(i);
            let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = max + row.iter().map(|x| (x - max).exp()).sum::<f64>().ln();
            loss += lse - row[t];
            softmax_in_place(probs.row_mut(i));
        }
        let rg = self.rg(logits);
        self.push(
            Matrix::filled(1, 1, loss / r as f64),
            Op::CrossEntropy(logits, targets.to_vec(), probs),
            rg,
            "cross_entropy",
        )
    }

    /// Reverse sweep from a `1 × 1` loss.
    pub fn backward(&self, loss: Var) -> Result<Gradients> {
        if self.shape(loss) != (1, 1) {
            return Err(Error::NonScalarLoss(self.shape(loss)));
        }
        let mut grads: Vec<Option<Matrix>> = vec![None; loss.0 + 1];
        grads[loss.0] = Some(Matrix::filled(1, 1, 1.0));

        for idx in (0..=loss.0).rev() {
            let Some(g) = grads[idx].take() else { continue };
            let node = &self.nodes[idx];
            if !node.requires_grad {
                continue;
            }
            self.propagate(node, &g, &mut grads)?;
            if !g.is_finite() {
                return Err(Error::NonFinite("backward"));
            }
            grads[idx] = Some(g);
        }

        let mut params: Vec<(ParamId, Var)> = self.params.iter().map(|(&p, &v)| (p, v)).collect();
        params.sort_by_key(|(p, _)| *p);
        Ok(Gradients { grads, params })
    }

    fn accumulate(&self, grads: &mut [Option<Matrix>], v: Var, g: Matrix) {
        if !self.rg(v) {
            return;
        }
        match &mut grads[v.0] {
            Some(acc) => acc.add_assign(&g),
            slot @ None => *slot = Some(g),
        }
    }

    fn propagate(&self, node: &Node, g: &Matrix, grads: &mut [Option<Matrix>]) -> Result<()> {
        let y = &node.value;
        match &node.op {
            Op::Leaf => {}
            Op::MatMul(a, b) => {
                if self.rg(*a) {
                    self.accumulate(grads, *a, g.matmul_t(self.value(*b))?);
                }
                if self.rg(*b) {
                    self.accumulate(grads, *b, self.value(*a).t_matmul(g)?);
                }
            }
            Op::Transpose(a) => self.accumulate(grads, *a, g.transpose()),
            Op::Add(a, b) => {
                self.accumulate(grads, *a, g.clone());
                self.accumulate(grads, *b, g.clone());
            }
            Op::AddRow(a, bias) => {
                self.accumulate(grads, *a, g.clone());
                self.accumulate(grads, *bias, column_sums(g));
            }
            Op::Hadamard(a, b) => {
                self.accumulate(grads, *a, g.zip_map(self.value(*b), |x, y| x * y));
                self.accumulate(grads, *b, g.zip_map(self.value(*a), |x, y| x * y));
            }
            Op::ScaleRows(a, s) => {
                let (av, sv) = (self.value(*a), self.value(*s));
                let mut ga = g.clone();
                let mut gs = Matrix::zeros(sv.rows(), 1);
                for i in 0..g.rows() {
                    let k = sv.get(i, 0);
                    ga.row_mut(i).iter_mut().for_each(|x| *x *= k);
                    gs.set(i, 0, g.row(i).iter().zip(av.row(i)).map(|(x, y)| x * y).sum());
                }
                self.accumulate(grads, *a, ga);
                self.accumulate(grads, *s, gs);
            }
            Op::Scale(a, k) => self.accumulate(grads, *a, g.map(|x| x * k)),
            Op::Relu(a) => {
                let mask = self.value(*a);
                self.accumulate(grads, *a, g.zip_map(mask, |x, m| if m > 0.0 { x } else { 0.0 }));
            }
            Op::Tanh(a) => self.accumulate(grads, *a, g.zip_map(y, |x, t| x * (1.0 - t * t))),
            Op::SoftmaxRows(a) => {
                let mut ga = Matrix::zeros(y.rows(), y.cols());
                for i in 0..y.rows() {
                    let (gr, yr) = (g.row(i), y.row(i));
                    let dot: f64 = gr.iter().zip(yr).map(|(a, b)| a * b).sum();
                    for (o, (gx, yx)) in ga.row_mut(i).iter_mut().zip(gr.iter().zip(yr)) {
                        *o = yx * (gx - dot);
                    }
                }
                self.accumulate(grads, *a, ga);
            }
            Op::MeanRows(a) => {
                let r = self.shape(*a).0;
                let row: Vec<f64> = g.data().iter().map(|x| x / r as f64).collect();
                self.accumulate(grads, *a, Matrix::from_vec(r, row.len(), row.repeat(r))?);
            }
            Op::SumAll(a) => {
                let (r, c) = self.shape(*a);
                self.accumulate(grads, *a, Matrix::filled(r, c, g.get(0, 0)));
            }
            Op::ConcatCols(parts) => {
                let mut offset = 0;
                for &p in parts {
                    let (r, c) = self.shape(p);
                    let mut gp = Matrix::zeros(r, c);
                    for i in 0..r {
                        gp.row_mut(i).copy_from_slice(&g.row(i)[offset..offset + c]);
                    }
                    offset += c;
                    self.accumulate(grads, p, gp);
                }
            }
            Op::ConcatRows(parts) => {
                let mut offset = 0;
                for &p in parts {
                    let (r, c) = self.shape(p);
                    let slice = g.data()[offset * c..(offset + r) * c].to_vec();
                    offset += r;
                    self.accumulate(grads, p, Matrix::from_vec(r, c, slice)?);
                }
            }
            Op::SliceCols(a, start) => {
                let (r, c) = self.shape(*a);
                let mut ga = Matrix::zeros(r, c);
                for i in 0..r {
                    ga.row_mut(i)[*start..*start + g.cols()].copy_from_slice(g.row(i));
                }
                self.accumulate(grads, *a, ga);
            }
            Op::GatherRows(a, idx) => {
                let (r, c) = self.shape(*a);
                let mut ga = Matrix::zeros(r, c);
                for (i, &src) in idx.iter().enumerate() {
                    for (o, x) in ga.row_mut(src).iter_mut().zip(g.row(i)) {
                        *o += x;
                    }
                }
                self.accumulate(grads, *a, ga);
            }
            Op::ScatterRows(a, idx) => {
                let (r, c) = self.shape(*a);
                let mut ga = Matrix::zeros(r, c);
                for (i, &dst) in idx.iter().enumerate() {
                    ga.row_mut(i).copy_from_slice(g.row(dst));
                }
                self.accumulate(grads, *a, ga);
            }
            Op::RepeatRows(a) => self.accumulate(grads, *a, column_sums(g)),
            Op::CrossEntropy(logits, targets, probs) => {
                let n = targets.len() as f64;
                let scale = g.get(0, 0) / n;
                let mut gl = probs.clone();
                for (i, &t) in targets.iter().enumerate() {
                    let row = gl.row_mut(i);
                    row[t] -= 1.0;
                    row.iter_mut().for_each(|x| *x *= scale);
                }
                self.accumulate(grads, *logits, gl);
            }
        }
        Ok(())
    }
}

fn column_sums(g: &Matrix) -> Matrix {
    let mut out = vec![0.0; g.cols()];
    for i in 0..g.rows() {
        for (o, x) in out.iter_mut().zip(g.row(i)) {
            *o += x;
        }
    }
    Matrix::row_vector(&out)
}

pub(crate) fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut total = 0.0;
    for x in row.iter_mut() {
        *x = (*x - max).exp();
        total += *x;
    }
    row.iter_mut().for_each(|x| *x /= total);
}
