use std::collections::VecDeque;

const NIL: usize = usize::MAX;

/// Size of a maximum matching in a bipartite graph, by Hopcroft-Karp.
/// `adjacency[u]` lists the right vertices (`< right_len`) adjacent to left vertex `u`.
pub fn max_bipartite_matching(adjacency: &[Vec<usize>], right_len: usize) -> usize {
    let left_len = adjacency.len();
    let mut match_left = vec![NIL; left_len];
    let mut match_right = vec![NIL; right_len];
    let mut dist = vec![0usize; left_len];
    let mut matched = 0;
    loop {
        // BFS layers from free left vertices.
        let mut queue = VecDeque::new();
        for u in 0..left_len {
            if match_left[u] == NIL {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let w = match_right[v];
                if w == NIL {
                    found = true;
                } else if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            return matched;
        }
        let mut next_edge = vec![0usize; left_len];
        for u in 0..left_len {
            if match_left[u] == NIL && augment(u, adjacency, &mut match_left, &mut match_right, &mut dist, &mut next_edge) {
                matched += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adjacency: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    dist: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    while next_edge[u] < adjacency[u].len() {
        let v = adjacency[u][next_edge[u]];
        next_edge[u] += 1;
        let w = match_right[v];
        if w == NIL || (dist[w] == dist[u] + 1 && augment(w, adjacency, match_left, match_right, dist, next_edge)) {
            match_left[u] = v;
            match_right[v] = u;
            return true;
        }
    }
    dist[u] = usize::MAX;
    false
}
