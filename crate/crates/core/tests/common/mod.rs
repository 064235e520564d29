//! Brute-force oracles shared by the integration tests. Each one follows the
//! textbook definition as literally as possible and shares no code with the
//! library beyond the `Graph` container.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cacose::autodiff::{finite_diff_check, GradCheckReport, Matrix, ParamStore, Tape, Var};
use cacose::decomposition::SubgraphFamily;
use cacose::graph::{erdos_renyi, Graph, NodeFeatures};
use cacose::model::CacoseModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graphs with up to `max_n` nodes and densities spread over
/// `[0.02, 0.6]`, plus a few structured members.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        Graph::empty(0),
        Graph::empty(5),
        complete(6),
        cycle(7),
        path(9),
    ];
    while out.len() < count {
        let n = rng.gen_range(1..=max_n);
        let p = rng.gen_range(0.02..0.6);
        out.push(erdos_renyi(n, p, rng.gen()).unwrap());
    }
    out
}

pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
}

/// Adjacency sets, built from the edge list only.
pub fn adjacency(g: &Graph) -> Vec<BTreeSet<usize>> {
    let mut adj = vec![BTreeSet::new(); g.num_nodes()];
    for &(u, v) in g.edges() {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    adj
}

/// Nodes of the `k`-core: repeatedly delete nodes with fewer than `k`
/// surviving neighbors.
pub fn k_core_members(g: &Graph, k: usize) -> Vec<bool> {
    let adj = adjacency(g);
    let mut alive = vec![true; g.num_nodes()];
    loop {
        let mut changed = false;
        for v in 0..g.num_nodes() {
            if alive[v] && adj[v].iter().filter(|&&w| alive[w]).count() < k {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            return alive;
        }
    }
}

/// Largest `k` whose `k`-core contains each node.
pub fn core_oracle(g: &Graph) -> Vec<usize> {
    let mut core = vec![0; g.num_nodes()];
    for k in 1.. {
        let alive = k_core_members(g, k);
        if !alive.iter().any(|&a| a) {
            break;
        }
        for v in 0..g.num_nodes() {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

/// Largest `k` whose `k`-core contains both endpoints of each edge.
pub fn edge_core_oracle(g: &Graph) -> Vec<usize> {
    let mut score = vec![0; g.num_edges()];
    for k in 1.. {
        let alive = k_core_members(g, k);
        let mut any = false;
        for (id, &(u, v)) in g.edges().iter().enumerate() {
            if alive[u] && alive[v] {
                score[id] = k;
                any = true;
            }
        }
        if !any {
            break;
        }
    }
    score
}

/// All-pairs hop distances.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<Option<usize>>> {
    let n = g.num_nodes();
    let mut d = vec![vec![None; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in g.edges() {
        d[u][v] = Some(1);
        d[v][u] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|c| a + b < c) {
                        d[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    d
}

pub fn component_count(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    let mut count = n;
    for &(u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// Edges whose removal increases the component count.
pub fn bridges_oracle(g: &Graph) -> Vec<(usize, usize)> {
    let base = component_count(g.num_nodes(), g.edges());
    g.edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| {
            let rest: Vec<_> = g.edges().iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &e)| e).collect();
            component_count(g.num_nodes(), &rest) > base
        })
        .map(|(_, &e)| e)
        .collect()
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// W1 between the uniform neighbor measures of `u` and `v`, by enumerating
/// couplings: split both measures into `L = lcm(deg u, deg v)` atoms of mass
/// `1/L` and find the cheapest perfect matching of atoms by bitmask DP.
/// Exact for uniform measures; limited to `L ≤ 16`.
pub fn w1_oracle(g: &Graph, u: usize, v: usize) -> f64 {
    let adj = adjacency(g);
    let dist = floyd_warshall(g);
    let (a, b): (Vec<usize>, Vec<usize>) = (adj[u].iter().copied().collect(), adj[v].iter().copied().collect());
    let l = a.len() / gcd(a.len(), b.len()) * b.len();
    assert!(l <= 16, "coupling oracle limited to 16 atoms");
    let src: Vec<usize> = a.iter().flat_map(|&x| std::iter::repeat(x).take(l / a.len())).collect();
    let dst: Vec<usize> = b.iter().flat_map(|&x| std::iter::repeat(x).take(l / b.len())).collect();
    let mut best = vec![usize::MAX; 1 << l];
    best[0] = 0;
    for mask in 0..(1usize << l) {
        if best[mask] == usize::MAX {
            continue;
        }
        let i = mask.count_ones() as usize;
        if i == l {
            continue;
        }
        for (j, &t) in dst.iter().enumerate() {
            if mask & (1 << j) == 0 {
                let c = best[mask] + dist[src[i]][t].expect("neighbors of adjacent nodes are connected");
                let m = mask | (1 << j);
                if c < best[m] {
                    best[m] = c;
                }
            }
        }
    }
    best[(1 << l) - 1] as f64 / l as f64
}

/// Simple paths with `n` edges from `v`: extend vertex sequences breadth
/// first and discard any sequence that repeats a vertex.
pub fn paths_oracle(g: &Graph, v: usize, n: usize) -> u64 {
    let adj = adjacency(g);
    let mut walks: Vec<Vec<usize>> = vec![vec![v]];
    for _ in 0..n {
        walks = walks
            .into_iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                adj[last].iter().map(move |&x| {
                    let mut w2 = w.clone();
                    w2.push(x);
                    w2
                })
            })
            .filter(|w| {
                let set: BTreeSet<_> = w.iter().collect();
                set.len() == w.len()
            })
            .collect();
    }
    walks.len() as u64
}

pub type Mat = Vec<Vec<f64>>;

pub fn mm(a: &Mat, b: &Mat) -> Mat {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

pub fn to_mat(m: &cacose::autodiff::Matrix) -> Mat {
    m.to_rows()
}

fn param(model: &CacoseModel, name: &str) -> Mat {
    let id = model.store.find(name).unwrap_or_else(|| panic!("no parameter {name}"));
    to_mat(model.store.value(id))
}

fn softmax(row: &[f64]) -> Vec<f64> {
    let m = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = row.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|x| x / s).collect()
}

/// Intermediate values of the scripted pipeline.
pub struct Scripted {
    /// `(k, global nodes, H_k)` per level.
    pub h: Vec<(usize, Vec<usize>, Mat)>,
    pub z_attn: Mat,
    pub z_v: Mat,
    pub z_g: Vec<f64>,
    pub attention: Vec<Mat>,
}

/// Recomputes the model's forward pass from the parameter values with plain
/// nested vectors: per-level GCN stack, score-weighted top-k mean pooling,
/// multi-head scaled dot-product attention, mean readout and the per-node
/// sum of `h ∥ z_attn` over the levels containing the node.
pub fn scripted_forward(model: &CacoseModel, x: &NodeFeatures, family: &SubgraphFamily) -> Scripted {
    let cfg = &model.config;
    let xs = to_mat(x.matrix());
    let mut hs = Vec::new();
    let mut pooled = Vec::new();
    for level in family.levels() {
        let k = level.k;
        let nodes = level.subgraph.nodes().to_vec();
        let n = nodes.len();
        let local = |g: usize| nodes.binary_search(&g).unwrap();
        let mut deg = vec![1.0f64; n];
        let mut adj = vec![vec![0.0f64; n]; n];
        for (i, row) in adj.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        for (gu, gv) in level.subgraph.global_edges() {
            let (a, b) = (local(gu), local(gv));
            adj[a][b] = 1.0;
            adj[b][a] = 1.0;
            deg[a] += 1.0;
            deg[b] += 1.0;
        }
        let a_hat: Mat = (0..n)
            .map(|i| (0..n).map(|j| adj[i][j] / (deg[i] * deg[j]).sqrt()).collect())
            .collect();
        let mut h: Mat = nodes.iter().map(|&v| xs[v].clone()).collect();
        for i in 0..cfg.num_gcn_layers {
            let w = param(model, &format!("level{k}.gcn{i}.weight"));
            h = mm(&mm(&a_hat, &h), &w)
                .into_iter()
                .map(|r| r.into_iter().map(|v| v.max(0.0)).collect())
                .collect();
        }
        let theta = param(model, &format!("level{k}.pool.score.weight"));
        let raw = mm(&mm(&a_hat, &h), &theta);
        let scores: Vec<f64> = raw
            .iter()
            .map(|r| match cfg.score_activation {
                cacose::layers::Activation::Relu => r[0].max(0.0),
                cacose::layers::Activation::Tanh => r[0].tanh(),
                cacose::layers::Activation::Identity => r[0],
            })
            .collect();
        let keep = ((cfg.pooling_ratio * n as f64) - 1e-9).ceil().max(1.0) as usize;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
        let d = h[0].len();
        let mut z = vec![0.0; d];
        for &i in order.iter().take(keep.min(n)) {
            for c in 0..d {
                z[c] += h[i][c] * scores[i] / keep.min(n) as f64;
            }
        }
        pooled.push(z);
        hs.push((k, nodes, h));
    }

    let mut zs = pooled;
    if let Some(p) = model.store.find("pool_proj") {
        zs = mm(&zs, &to_mat(model.store.value(p)));
    }
    let ds = cfg.subgraph_dim;
    let (q, kk, v) = (
        mm(&zs, &param(model, "attention.wq")),
        mm(&zs, &param(model, "attention.wk")),
        mm(&zs, &param(model, "attention.wv")),
    );
    let dh = ds / cfg.heads;
    let ns = zs.len();
    let mut concat = vec![vec![0.0; ds]; ns];
    let mut attention = Vec::new();
    for head in 0..cfg.heads {
        let cols = head * dh..(head + 1) * dh;
        let mut att = Vec::new();
        for i in 0..ns {
            let logits: Vec<f64> = (0..ns)
                .map(|j| cols.clone().map(|c| q[i][c] * kk[j][c]).sum::<f64>() / (dh as f64).sqrt())
                .collect();
            let w = softmax(&logits);
            for c in cols.clone() {
                concat[i][c] = (0..ns).map(|j| w[j] * v[j][c]).sum();
            }
            att.push(w);
        }
        attention.push(att);
    }
    let z_attn = if cfg.heads > 1 {
        mm(&concat, &param(model, "attention.wo"))
    } else {
        concat
    };
    let z_g: Vec<f64> = (0..ds).map(|c| z_attn.iter().map(|r| r[c]).sum::<f64>() / ns as f64).collect();

    let hd = cfg.hidden_dim;
    let mut z_v = vec![vec![0.0; hd + ds]; x.num_nodes()];
    for (li, (_, nodes, h)) in hs.iter().enumerate() {
        for (i, &g) in nodes.iter().enumerate() {
            for c in 0..hd {
                z_v[g][c] += h[i][c];
            }
            for c in 0..ds {
                z_v[g][hd + c] += z_attn[li][c];
            }
        }
    }
    Scripted {
        h: hs,
        z_attn,
        z_v,
        z_g,
        attention,
    }
}

pub fn max_abs_diff(a: &Mat, b: &Mat) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .flat_map(|(r, s)| {
            assert_eq!(r.len(), s.len());
            r.iter().zip(s).map(|(x, y)| (x - y).abs())
        })
        .fold(0.0, f64::max)
}

pub fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_vec(rows, cols, (0..rows * cols).map(|_| rng.gen_range(-1.5..1.5)).collect()).unwrap()
}

type Primitive = fn(&mut Tape, &[Var]) -> cacose::Result<Var>;

/// Central-difference check of every tape primitive. Each primitive's
/// output is reduced to a scalar through a fixed random weighting so that
/// every output entry contributes a distinct gradient.
pub fn primitive_checks(step: f64, tol: f64) -> Vec<(&'static str, GradCheckReport)> {
    let cases: Vec<(&'static str, Vec<(usize, usize)>, Primitive)> = vec![
        ("matmul", vec![(3, 4), (4, 2)], |t, v| t.matmul(v[0], v[1])),
        ("transpose", vec![(3, 4)], |t, v| t.transpose(v[0])),
        ("add", vec![(3, 4), (3, 4)], |t, v| t.add(v[0], v[1])),
        ("add_row", vec![(3, 4), (1, 4)], |t, v| t.add_row(v[0], v[1])),
        ("hadamard", vec![(3, 4), (3, 4)], |t, v| t.hadamard(v[0], v[1])),
        ("scale_rows", vec![(3, 4), (3, 1)], |t, v| t.scale_rows(v[0], v[1])),
        ("scale", vec![(3, 4)], |t, v| t.scale(v[0], -0.7)),
        ("relu", vec![(4, 5)], |t, v| t.relu(v[0])),
        ("tanh", vec![(3, 4)], |t, v| t.tanh(v[0])),
        ("softmax_rows", vec![(3, 4)], |t, v| t.softmax_rows(v[0])),
        ("mean_rows", vec![(3, 4)], |t, v| t.mean_rows(v[0])),
        ("sum_all", vec![(3, 4)], |t, v| t.sum_all(v[0])),
        ("concat_cols", vec![(3, 2), (3, 3)], |t, v| t.concat_cols(&[v[0], v[1]])),
        ("concat_rows", vec![(2, 3), (1, 3)], |t, v| t.concat_rows(&[v[0], v[1]])),
        ("slice_cols", vec![(3, 5)], |t, v| t.slice_cols(v[0], 1, 4)),
        ("gather_rows", vec![(4, 3)], |t, v| t.gather_rows(v[0], &[2, 0, 2])),
        ("scatter_rows", vec![(3, 2)], |t, v| t.scatter_rows(v[0], &[4, 1, 4], 5)),
        ("repeat_rows", vec![(1, 3)], |t, v| t.repeat_rows(v[0], 4)),
        ("cross_entropy", vec![(4, 3)], |t, v| t.cross_entropy(v[0], &[0, 2, 1, 2])),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    cases
        .into_iter()
        .map(|(name, shapes, op)| {
            let mut store = ParamStore::new();
            let ids: Vec<_> = shapes
                .iter()
                .enumerate()
                .map(|(i, &(r, c))| store.register(format!("{name}.in{i}"), random_matrix(r, c, &mut rng)).unwrap())
                .collect();
            let probe = {
                let mut t = Tape::new();
                let vars: Vec<Var> = ids.iter().map(|&id| t.param(&store, id).unwrap()).collect();
                let out = op(&mut t, &vars).unwrap();
                random_matrix(t.shape(out).0, t.shape(out).1, &mut rng)
            };
            let report = finite_diff_check(
                &store,
                |t, s| {
                    let vars: Vec<Var> = ids.iter().map(|&id| t.param(s, id)).collect::<cacose::Result<_>>()?;
                    let out = op(t, &vars)?;
                    let w = t.constant(probe.clone())?;
                    let weighted = t.hadamard(out, w)?;
                    t.sum_all(weighted)
                },
                step,
                tol,
            )
            .unwrap();
            (name, report)
        })
        .collect()
}
