#![allow(dead_code)]

use periodforge::graph::Graph;
use periodforge::poly::Poly;
use rand::Rng;

/// Spanning-tree polynomial by brute force over edge subsets.
pub fn spanning_tree_oracle(g: &Graph) -> Poly {
    let n = g.num_vertices();
    let m = g.num_edges();
    let mut psi = Poly::zero();
    if n == 0 {
        return psi;
    }
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut tree = true;
        for e in 0..m {
            if mask >> e & 1 == 1 {
                let (a, b) = g.edges()[e];
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra == rb {
                    tree = false;
                    break;
                }
                parent[ra] = rb;
            }
        }
        if tree {
            let outside: Vec<usize> = (0..m).filter(|e| mask >> e & 1 == 0).collect();
            psi = psi.add(&Poly::product_of(&outside));
        }
    }
    psi
}

/// Connected multigraph, possibly with self-edges and parallel edges.
pub fn random_connected_graph<R: Rng>(rng: &mut R, max_vertices: usize, max_edges: usize) -> Graph {
    loop {
        let n = rng.gen_range(1..=max_vertices);
        let m = rng.gen_range(n.saturating_sub(1).max(1)..=max_edges);
        let edges: Vec<(usize, usize)> = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
        let g = Graph::new(n, &edges).expect("endpoints in range");
        if g.is_connected() {
            return g;
        }
    }
}

/// Polynomial from a list of monomials given as 1-based variable lists.
pub fn poly_of(monomials: &[&[usize]]) -> Poly {
    monomials.iter().fold(Poly::zero(), |acc, m| {
        let vars: Vec<usize> = m.iter().map(|v| v - 1).collect();
        acc.add(&Poly::product_of(&vars))
    })
}
