use super::{canonical_form, Graph};
use crate::error::{Error, Result};

/// Named graph families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Hub joined to an `n`-cycle; spokes are edges `0..n`, rim edges follow.
    Wheel,
    /// Chain of triangles on `n + 1` vertices with its two ends joined.
    Zigzag,
    /// The `n`-gon.
    Cycle,
    /// Two vertices joined by `n` parallel edges.
    Sunrise,
    Complete,
    /// `K_{a,n}`.
    CompleteBipartite(usize),
}

pub fn builtin_graph(family: Family, n: usize) -> Result<Graph> {
    let bad = |msg: &str| Err(Error::InvalidBuilder(format!("{family:?}({n}): {msg}")));
    match family {
        Family::Wheel => {
            if n < 3 {
                return bad("wheel needs at least 3 spokes");
            }
            let mut edges: Vec<(usize, usize)> = (1..=n).map(|i| (0, i)).collect();
            edges.extend((1..=n).map(|i| (i, i % n + 1)));
            Graph::new(n + 1, &edges)
        }
        Family::Zigzag => {
            if n < 3 {
                return bad("zigzag needs at least 3 loops");
            }
            let m = n + 1;
            let mut edges: Vec<(usize, usize)> = (0..m - 1).map(|i| (i, i + 1)).collect();
            edges.extend((0..m - 2).map(|i| (i, i + 2)));
            edges.push((0, m - 1));
            Graph::new(m, &edges)
        }
        Family::Cycle => {
            if n < 1 {
                return bad("cycle needs at least one edge");
            }
            let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
            Graph::new(n, &edges)
        }
        Family::Sunrise => {
            if n < 1 {
                return bad("needs at least one edge");
            }
            Graph::new(2, &vec![(0, 1); n])
        }
        Family::Complete => {
            if n < 1 {
                return bad("needs at least one vertex");
            }
            let edges: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            Graph::new(n, &edges)
        }
        Family::CompleteBipartite(a) => {
            if a < 1 || n < 1 {
                return bad("both parts must be nonempty");
            }
            let edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (0..n).map(move |j| (i, a + j))).collect();
            Graph::new(a + n, &edges)
        }
    }
}

/// Resolves names such as `wheel5`, `zigzag5`, `cycle4`, `sunrise`,
/// `sunrise4`, `bubble`, `k6`, `k3,4`, `dunce`, `dumbbell`.
pub fn named_graph(name: &str) -> Result<Graph> {
    let lower = name.trim().to_ascii_lowercase();
    let fixed = match lower.as_str() {
        "bubble" => Some(builtin_graph(Family::Sunrise, 2)),
        "sunrise" | "theta" => Some(builtin_graph(Family::Sunrise, 3)),
        "dunce" => Some(Graph::new(3, &[(0, 1), (0, 2), (1, 2), (1, 2)])),
        "dumbbell" => Some(Graph::new(2, &[(0, 0), (0, 1), (1, 1)])),
        _ => None,
    };
    if let Some(g) = fixed {
        return g;
    }
    let unknown = || Error::InvalidBuilder(format!("unknown graph name {name:?}"));
    let split = lower.find(|c: char| c.is_ascii_digit()).ok_or_else(unknown)?;
    let (prefix, rest) = lower.split_at(split);
    if prefix == "k" {
        if let Some((a, b)) = rest.split_once(',') {
            let a = a.parse().map_err(|_| unknown())?;
            let b = b.parse().map_err(|_| unknown())?;
            return builtin_graph(Family::CompleteBipartite(a), b);
        }
    }
    let n: usize = rest.parse().map_err(|_| unknown())?;
    let family = match prefix {
        "wheel" | "w" => Family::Wheel,
        "zigzag" | "z" => Family::Zigzag,
        "cycle" | "c" => Family::Cycle,
        "sunrise" | "banana" => Family::Sunrise,
        "k" | "complete" => Family::Complete,
        _ => return Err(unknown()),
    };
    builtin_graph(family, n)
}

/// Identifies the endpoints of `e1` with those of `e2` (first with first)
/// and removes both edges. Edges of `g1` come first in the result.
pub fn two_vertex_join(g1: &Graph, e1: usize, g2: &Graph, e2: usize) -> Result<Graph> {
    let (u1, v1) = g1.edge(e1)?;
    let (u2, v2) = g2.edge(e2)?;
    if u1 == v1 || u2 == v2 {
        return Err(Error::InvalidGraph("two-vertex join along a self-edge".into()));
    }
    let n1 = g1.num_vertices();
    let mut weights = g1.weights().to_vec();
    let mut map = vec![0; g2.num_vertices()];
    for w in 0..g2.num_vertices() {
        map[w] = if w == u2 {
            u1
        } else if w == v2 {
            v1
        } else {
            weights.push(0);
            weights.len() - 1
        };
        weights[map[w]] += g2.weight(w);
    }
    debug_assert!(weights.len() == n1 + g2.num_vertices() - 2);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(g1.num_edges() + g2.num_edges() - 2);
    edges.extend(g1.edges().iter().enumerate().filter(|&(i, _)| i != e1).map(|(_, &e)| e));
    edges.extend(g2.edges().iter().enumerate().filter(|&(i, _)| i != e2).map(|(_, &(a, b))| (map[a], map[b])));
    Ok(Graph::from_parts(weights, edges))
}

/// Adds a vertex joined to the four degree-3 vertices of `g`.
pub fn completion(g: &Graph) -> Result<Graph> {
    let deg = g.degrees();
    let threes: Vec<usize> = (0..g.num_vertices()).filter(|&v| deg[v] == 3).collect();
    if threes.len() != 4 || deg.iter().any(|&d| d != 3 && d != 4) {
        return Err(Error::InvalidGraph("completion needs four degree-3 vertices and all others of degree 4".into()));
    }
    let n = g.num_vertices();
    let mut edges = g.edges().to_vec();
    edges.extend(threes.iter().map(|&v| (v, n)));
    let mut weights = g.weights().to_vec();
    weights.push(0);
    Ok(Graph::from_parts(weights, edges))
}

/// Canonical forms of `gh` minus each vertex, deduplicated, in order of first
/// appearance.
pub fn decompletions(gh: &Graph) -> Result<Vec<Graph>> {
    if gh.degrees().iter().any(|&d| d != 4) {
        return Err(Error::InvalidGraph("decompletion needs a 4-regular graph".into()));
    }
    let mut out: Vec<Graph> = Vec::new();
    for v in 0..gh.num_vertices() {
        let relabel = |w: usize| if w > v { w - 1 } else { w };
        let edges: Vec<(usize, usize)> =
            gh.edges().iter().filter(|&&(a, b)| a != v && b != v).map(|&(a, b)| (relabel(a), relabel(b))).collect();
        let mut weights = gh.weights().to_vec();
        weights.remove(v);
        let (c, _) = canonical_form(&Graph::from_parts(weights, edges));
        if !out.contains(&c) {
            out.push(c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        assert_eq!((w3.num_vertices(), w3.num_edges()), (4, 6));
        let k34 = builtin_graph(Family::CompleteBipartite(3), 4).unwrap();
        assert_eq!((k34.num_edges(), k34.loop_number()), (12, 6));
        let z5 = builtin_graph(Family::Zigzag, 5).unwrap();
        assert_eq!((z5.num_vertices(), z5.num_edges(), z5.loop_number()), (6, 10, 5));
        assert!(builtin_graph(Family::Wheel, 2).is_err());
    }

    #[test]
    fn small_zigzags_are_wheels() {
        for n in [3, 4] {
            let z = canonical_form(&builtin_graph(Family::Zigzag, n).unwrap()).0;
            let w = canonical_form(&builtin_graph(Family::Wheel, n).unwrap()).0;
            assert_eq!(z, w);
        }
    }

    #[test]
    fn completion_of_w3_is_k5() {
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        let k5 = builtin_graph(Family::Complete, 5).unwrap();
        assert_eq!(canonical_form(&completion(&w3).unwrap()).0, canonical_form(&k5).0);
        let dec = decompletions(&k5).unwrap();
        assert_eq!(dec, vec![canonical_form(&w3).0]);
    }

    #[test]
    fn join_counts() {
        let w3 = builtin_graph(Family::Wheel, 3).unwrap();
        let j = two_vertex_join(&w3, 3, &w3, 3).unwrap();
        assert_eq!((j.num_edges(), j.loop_number()), (10, 5));
        let b = builtin_graph(Family::Sunrise, 2).unwrap();
        let j = two_vertex_join(&b, 0, &b, 0).unwrap();
        assert_eq!((j.num_vertices(), j.num_edges()), (2, 2));
    }

    #[test]
    fn names() {
        assert_eq!(named_graph("k3,4").unwrap().num_edges(), 12);
        assert_eq!(named_graph("wheel5").unwrap().num_edges(), 10);
        assert_eq!(named_graph("dunce").unwrap().loop_number(), 2);
        assert!(named_graph("petersen").is_err());
    }
}
