//! Small named graphs and a random regular generator.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Graph, Vertex};

pub fn complete(n: usize) -> Graph {
    let n32 = n as Vertex;
    Graph::from_edges(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v)))).unwrap()
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let n32 = n as Vertex;
    Graph::from_edges(n, (0..n32).map(|u| (u, (u + 1) % n32))).unwrap()
}

pub fn path(n: usize) -> Graph {
    let n32 = n as Vertex;
    Graph::from_edges(n, (1..n32).map(|u| (u - 1, u))).unwrap()
}

/// `K_{1,leaves}` with the centre at vertex 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_edges(leaves + 1, (1..=leaves as Vertex).map(|v| (0, v))).unwrap()
}

/// Petersen graph: outer 5-cycle `0..5`, spokes `i -- i+5`, inner pentagram
/// `5+i -- 5+(i+2)%5`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

/// Uniform-ish random `d`-regular simple graph on `n` vertices: a circulant
/// start followed by `n * d` random double-edge switches that keep the graph
/// simple. Requires `n * d` even and `d < n`.
pub fn random_regular<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Graph {
    assert!(d < n && (n * d).is_multiple_of(2), "no {d}-regular graph on {n} vertices");
    let mut adj: Vec<Vec<Vertex>> = vec![Vec::with_capacity(d); n];
    for (u, row) in adj.iter_mut().enumerate() {
        for off in 1..=d / 2 {
            row.push(((u + off) % n) as Vertex);
            row.push(((u + n - off) % n) as Vertex);
        }
        if d % 2 == 1 {
            row.push(((u + n / 2) % n) as Vertex);
        }
    }
    let mut edges: Vec<(Vertex, Vertex)> = Vec::with_capacity(n * d / 2);
    for (u, row) in adj.iter().enumerate() {
        for &v in row {
            if (u as Vertex) < v {
                edges.push((u as Vertex, v));
            }
        }
    }
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(rng);
    for e in &mut edges {
        *e = (perm[e.0 as usize], perm[e.1 as usize]);
    }
    let mut set: std::collections::HashSet<(Vertex, Vertex)> =
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let key = |a: Vertex, b: Vertex| (a.min(b), a.max(b));
    for _ in 0..n * d {
        let i = rng.random_range(0..edges.len());
        let j = rng.random_range(0..edges.len());
        let (a, b) = edges[i];
        let (mut c, mut e) = edges[j];
        if rng.random_bool(0.5) {
            std::mem::swap(&mut c, &mut e);
        }
        // a-b, c-e  ->  a-c, b-e
        if a == c || a == e || b == c || b == e {
            continue;
        }
        if set.contains(&key(a, c)) || set.contains(&key(b, e)) {
            continue;
        }
        set.remove(&key(a, b));
        set.remove(&key(c, e));
        set.insert(key(a, c));
        set.insert(key(b, e));
        edges[i] = (a, c);
        edges[j] = (b, e);
    }
    Graph::from_edges(n, edges).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_regular_is_regular_and_simple() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (n, d) in [(10, 3), (50, 4), (101, 6), (64, 7)] {
            let g = random_regular(n, d, &mut rng);
            assert_eq!(g.regular_degree(), Some(d as u32));
        }
    }

    #[test]
    fn named_graphs() {
        assert_eq!(petersen().m(), 15);
        assert_eq!(petersen().regular_degree(), Some(3));
        assert_eq!(complete(5).m(), 10);
        assert_eq!(path(5).m(), 4);
        assert_eq!(star(4).m(), 4);
    }
}
