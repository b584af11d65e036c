//! Progressive edge growth for a variable-regular parity-check graph.

use rand::Rng;

/// Builds check adjacency lists (`m` checks over `n` variables, every
/// variable of degree `dv`).
///
/// Each new edge of variable `v` goes to a check as far from `v` as possible
/// in the graph built so far: either one not reachable at all, or, when every
/// check is reachable, one first reached at the deepest level. Ties go to the
/// least-loaded check, then uniformly at random.
pub(crate) fn peg_checks<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    dv: usize,
    rng: &mut R,
) -> Vec<Vec<usize>> {
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut var_checks: Vec<Vec<usize>> = vec![Vec::with_capacity(dv); n];
    let mut check_mark = vec![0usize; m];
    let mut var_mark = vec![0usize; n];
    let mut bfs = 0usize;
    let mut frontier = Vec::new();
    let mut next = Vec::new();
    let mut pool = Vec::new();
    let mut candidates = Vec::new();

    for v in 0..n {
        for _ in 0..dv {
            bfs += 1;
            pool.clear();
            if var_checks[v].is_empty() {
                pool.extend(0..m);
            } else {
                frontier.clear();
                for &c in &var_checks[v] {
                    check_mark[c] = bfs;
                    frontier.push(c);
                }
                let mut reached = frontier.len();
                var_mark[v] = bfs;
                loop {
                    next.clear();
                    for &c in &frontier {
                        for &w in &checks[c] {
                            if var_mark[w] == bfs {
                                continue;
                            }
                            var_mark[w] = bfs;
                            for &c2 in &var_checks[w] {
                                if check_mark[c2] != bfs {
                                    check_mark[c2] = bfs;
                                    next.push(c2);
                                }
                            }
                        }
                    }
                    reached += next.len();
                    if next.is_empty() {
                        pool.extend((0..m).filter(|&c| check_mark[c] != bfs));
                        break;
                    }
                    if reached == m {
                        pool.extend_from_slice(&next);
                        break;
                    }
                    std::mem::swap(&mut frontier, &mut next);
                }
            }
            let best = pool
                .iter()
                .map(|&c| checks[c].len())
                .min()
                .expect("a candidate check exists");
            candidates.clear();
            candidates.extend(pool.iter().copied().filter(|&c| checks[c].len() == best));
            candidates.sort_unstable();
            let c = candidates[rng.random_range(0..candidates.len())];
            checks[c].push(v);
            var_checks[v].push(c);
        }
    }
    for row in &mut checks {
        row.sort_unstable();
    }
    checks
}
