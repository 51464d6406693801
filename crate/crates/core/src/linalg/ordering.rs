use std::collections::VecDeque;

use super::CsrPattern;

/// Reverse Cuthill–McKee ordering. Returns `perm` with `perm[new] = old`.
///
/// Each connected component starts from a pseudo-peripheral node found by
/// repeated breadth-first sweeps; neighbours are visited by ascending degree
/// with ties broken by index, so the ordering is deterministic.
pub fn reverse_cuthill_mckee(pattern: &CsrPattern) -> Vec<usize> {
    let n = pattern.dim();
    let degree: Vec<usize> = (0..n).map(|i| pattern.row(i).len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        let start = pseudo_peripheral(pattern, &degree, seed);
        let mut queue = VecDeque::new();
        visited[start] = true;
        queue.push_back(start);
        while let Some(node) = queue.pop_front() {
            order.push(node);
            let mut next: Vec<usize> =
                pattern.row(node).iter().copied().filter(|&j| !visited[j]).collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

fn pseudo_peripheral(pattern: &CsrPattern, degree: &[usize], seed: usize) -> usize {
    let mut node = seed;
    let mut eccentricity = 0;
    for _ in 0..8 {
        let levels = bfs_levels(pattern, node);
        let depth = *levels.iter().filter_map(|l| l.as_ref()).max().unwrap_or(&0);
        if depth <= eccentricity && eccentricity > 0 {
            break;
        }
        eccentricity = depth;
        // lowest-degree node in the last level
        node = levels
            .iter()
            .enumerate()
            .filter(|(_, l)| **l == Some(depth))
            .map(|(i, _)| i)
            .min_by_key(|&i| (degree[i], i))
            .unwrap_or(node);
    }
    node
}

fn bfs_levels(pattern: &CsrPattern, start: usize) -> Vec<Option<usize>> {
    let mut level = vec![None; pattern.dim()];
    let mut queue = VecDeque::new();
    level[start] = Some(0);
    queue.push_back(start);
    while let Some(i) = queue.pop_front() {
        let next_level = level[i].map(|l| l + 1);
        for &j in pattern.row(i) {
            if level[j].is_none() {
                level[j] = next_level;
                queue.push_back(j);
            }
        }
    }
    level
}
