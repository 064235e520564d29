use super::Graph;

/// Bridges of `g` as canonical `(u, v)` pairs, sorted.
///
/// Iterative low-link DFS, `O(V + E)`. The parent edge is skipped by edge id,
/// which is sufficient because the graph is simple.
pub fn find_bridges(g: &Graph) -> Vec<(usize, usize)> {
    let n = g.num_nodes();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut bridges = Vec::new();
    // (node, parent, next neighbor position)
    let mut stack: Vec<(usize, usize, usize)> = Vec::new();

    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        stack.push((root, usize::MAX, 0));

        while let Some(&mut (u, parent, ref mut pos)) = stack.last_mut() {
            let nbrs = g.neighbors(u);
            if *pos < nbrs.len() {
                let w = nbrs[*pos];
                *pos += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, u, 0));
                } else {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] > disc[parent] {
                        bridges.push((parent.min(u), parent.max(u)));
                    }
                }
            }
        }
    }
    bridges.sort_unstable();
    bridges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    #[test]
    fn path_edges_are_all_bridges() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3)], 4).unwrap();
        assert_eq!(find_bridges(&g), vec![(0, 1), (1, 2), (2, 3)]);
    }

    #[test]
    fn cycle_has_no_bridges() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)], 5).unwrap();
        assert!(find_bridges(&g).is_empty());
    }

    #[test]
    fn two_triangles_joined_by_an_edge() {
        let g = build_graph(&[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)], 6).unwrap();
        assert_eq!(find_bridges(&g), vec![(2, 3)]);
    }
}
