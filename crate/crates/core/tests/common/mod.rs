//! Independent oracles for the integration tests. Nothing here calls the
//! library's adjacency, distance or search code.

#![allow(dead_code)]

use std::collections::VecDeque;

use digitop_core::{AdjacencySpec, DigitalImage};

/// `c_u` rule written out directly: differ in 1..=u coordinates, each by 1.
pub fn cu_adj(p: &[i64], q: &[i64], u: usize) -> bool {
    let mut differing = 0;
    for (a, b) in p.iter().zip(q) {
        match (a - b).abs() {
            0 => {}
            1 => differing += 1,
            _ => return false,
        }
    }
    (1..=u).contains(&differing)
}

/// Adjacency matrix of a `c_u` image recomputed from its coordinates.
pub fn cu_matrix(x: &DigitalImage) -> Vec<Vec<bool>> {
    let AdjacencySpec::Cu { u } = x.adjacency() else {
        panic!("oracle matrices are only for c_u images");
    };
    let pts = x.points();
    pts.iter()
        .map(|p| pts.iter().map(|q| cu_adj(p.coords(), q.coords(), *u)).collect())
        .collect()
}

pub fn close(adj: &[Vec<bool>], a: usize, b: usize) -> bool {
    a == b || adj[a][b]
}

pub fn continuous(adj: &[Vec<bool>], f: &[usize]) -> bool {
    let n = adj.len();
    (0..n).all(|a| (0..n).all(|b| !adj[a][b] || close(adj, f[a], f[b])))
}

/// Every continuous self-map, found by running through all `n^n`
/// functions in lexicographic order.
pub fn brute_force_self_maps(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut f = vec![0usize; n];
    let mut out = Vec::new();
    loop {
        if continuous(adj, &f) {
            out.push(f.clone());
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
        }
    }
}

/// Distances and geodesic counts (saturating at 2) from `s`.
pub fn bfs_counts(adj: &[Vec<bool>], s: usize) -> (Vec<Option<usize>>, Vec<u8>) {
    let n = adj.len();
    let mut dist = vec![None; n];
    let mut count = vec![0u8; n];
    dist[s] = Some(0);
    count[s] = 1;
    let mut q = VecDeque::from([s]);
    while let Some(a) = q.pop_front() {
        let da = dist[a].unwrap();
        for b in 0..n {
            if !adj[a][b] {
                continue;
            }
            match dist[b] {
                None => {
                    dist[b] = Some(da + 1);
                    count[b] = count[a];
                    q.push_back(b);
                }
                Some(db) if db == da + 1 => count[b] = (count[b] + count[a]).min(2),
                _ => {}
            }
        }
    }
    (dist, count)
}

/// The unique shortest path from `s` to `t` as a vertex list, if the
/// shortest path is unique.
pub fn unique_path(adj: &[Vec<bool>], s: usize, t: usize) -> Option<Vec<usize>> {
    let (ds, cs) = bfs_counts(adj, s);
    ds[t]?;
    if cs[t] != 1 {
        return None;
    }
    let (dt, _) = bfs_counts(adj, t);
    let total = ds[t].unwrap();
    let mut path: Vec<usize> = (0..adj.len())
        .filter(|&v| matches!((ds[v], dt[v]), (Some(a), Some(b)) if a + b == total))
        .collect();
    path.sort_by_key(|&v| ds[v]);
    Some(path)
}

pub fn connected(adj: &[Vec<bool>]) -> bool {
    adj.is_empty() || bfs_counts(adj, 0).0.iter().all(Option::is_some)
}

/// Connected and 2-regular with at least 4 points: a cycle without chords.
pub fn is_cycle_graph(adj: &[Vec<bool>]) -> bool {
    adj.len() >= 4 && connected(adj) && adj.iter().all(|row| row.iter().filter(|&&b| b).count() == 2)
}

/// Largest distance any point is moved by `f`.
pub fn max_move(adj: &[Vec<bool>], f: &[usize]) -> Option<usize> {
    let mut worst = 0;
    for (x, &y) in f.iter().enumerate() {
        worst = worst.max(bfs_counts(adj, x).0[y]?);
    }
    Some(worst)
}
