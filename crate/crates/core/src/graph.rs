//! Weighted bipartite graph between information symbols (variables) and coded
//! symbols (checks), i.e. the sparse generator matrix `G`.

use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::weights::{DegreeDistribution, WeightSet};

/// Signed row template of the seamless baseline: every row sums to zero.
pub const SEAMLESS_ROW: [f64; 8] = [-4.0, -4.0, -2.0, -1.0, 1.0, 2.0, 4.0, 4.0];

/// How a coded symbol picks its neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selection {
    UniformRandom,
    /// Neighbours are drawn uniformly among the variables of currently
    /// smallest degree, spilling into the next degree class when needed.
    #[default]
    MinDegreeFirst,
}

/// How the `d` edge weights of one coded symbol are drawn from the weight set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightAssignment {
    WithReplacement,
    WithoutReplacement,
    /// Each row uses every weight exactly once, in random order. Needs `d = f`.
    PermutationOfSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncoderPolicy {
    pub selection: Selection,
    pub weight_assignment: WeightAssignment,
}

impl EncoderPolicy {
    /// Min-degree selection, with permutation assignment when every row has
    /// degree `f` and assignment without replacement otherwise (falling back
    /// to replacement only when some degree exceeds `f`).
    pub fn default_for(dist: &DegreeDistribution, ws: &WeightSet) -> Self {
        let f = ws.len();
        let support: Vec<usize> = dist
            .omega()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w > 0.0)
            .map(|(i, _)| i + 1)
            .collect();
        let weight_assignment = if support.iter().all(|&d| d == f) {
            WeightAssignment::PermutationOfSet
        } else if dist.max_degree() <= f {
            WeightAssignment::WithoutReplacement
        } else {
            WeightAssignment::WithReplacement
        };
        EncoderPolicy {
            selection: Selection::MinDegreeFirst,
            weight_assignment,
        }
    }

    pub fn with_selection(mut self, selection: Selection) -> Self {
        self.selection = selection;
        self
    }
}

/// Sparse `N × k` generator matrix in compressed row form.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorGraph {
    k: usize,
    row_start: Vec<usize>,
    vars: Vec<usize>,
    weights: Vec<f64>,
    var_degrees: Vec<usize>,
}

impl FactorGraph {
    /// Builds a graph from explicit `(variable, weight)` rows.
    pub fn from_rows(k: usize, rows: &[Vec<(usize, f64)>]) -> Result<Self> {
        let mut g = FactorGraph::empty(k);
        for row in rows {
            g.push_row(row.iter().copied())?;
        }
        Ok(g)
    }

    pub fn empty(k: usize) -> Self {
        FactorGraph {
            k,
            row_start: vec![0],
            vars: Vec::new(),
            weights: Vec::new(),
            var_degrees: vec![0; k],
        }
    }

    /// Appends one check row.
    pub fn push_row(&mut self, row: impl IntoIterator<Item = (usize, f64)>) -> Result<()> {
        let start = self.vars.len();
        for (v, w) in row {
            if v >= self.k {
                self.truncate_to(start);
                return Err(Error::InvalidConfiguration(format!(
                    "variable {v} out of range 0..{}",
                    self.k
                )));
            }
            if self.vars[start..].contains(&v) {
                self.truncate_to(start);
                return Err(Error::InvalidConfiguration(format!(
                    "variable {v} repeated in a row"
                )));
            }
            if !w.is_finite() {
                self.truncate_to(start);
                return Err(Error::InvalidConfiguration("non-finite weight".into()));
            }
            self.vars.push(v);
            self.weights.push(w);
        }
        for &v in &self.vars[start..] {
            self.var_degrees[v] += 1;
        }
        self.row_start.push(self.vars.len());
        Ok(())
    }

    fn truncate_to(&mut self, len: usize) {
        self.vars.truncate(len);
        self.weights.truncate(len);
    }

    /// Number of variable nodes.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of check rows `N`.
    pub fn n_rows(&self) -> usize {
        self.row_start.len() - 1
    }

    pub fn n_edges(&self) -> usize {
        self.vars.len()
    }

    /// Variable indices and weights of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_start[i]..self.row_start[i + 1];
        (&self.vars[r.clone()], &self.weights[r])
    }

    pub fn rows(&self) -> impl Iterator<Item = (&[usize], &[f64])> + '_ {
        (0..self.n_rows()).map(move |i| self.row(i))
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }

    /// Flat edge arrays, in row order.
    pub fn edge_vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn var_degrees(&self) -> &[usize] {
        &self.var_degrees
    }

    pub fn max_row_degree(&self) -> usize {
        self.row_start
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Copy of the graph with every weight multiplied by `scale`.
    pub fn scaled(&self, scale: f64) -> Self {
        let mut g = self.clone();
        g.weights.iter_mut().for_each(|w| *w *= scale);
        g
    }

    /// Copy restricted to the first `n` rows.
    pub fn truncated(&self, n: usize) -> Self {
        let mut g = FactorGraph::empty(self.k);
        for i in 0..n.min(self.n_rows()) {
            let (v, w) = self.row(i);
            g.push_row(v.iter().copied().zip(w.iter().copied()))
                .expect("rows of a valid graph");
        }
        g
    }

    /// Fraction of variables not connected to any check.
    pub fn isolated_fraction(&self) -> f64 {
        if self.k == 0 {
            return 0.0;
        }
        self.var_degrees.iter().filter(|&&d| d == 0).count() as f64 / self.k as f64
    }
}

/// Average variable degree `α = N μ / k`.
pub fn average_variable_degree(k: usize, n_rows: usize, dist: &DegreeDistribution) -> f64 {
    n_rows as f64 * dist.mu() / k as f64
}

/// Variables bucketed by current degree, with O(1) random removal.
struct DegreeBuckets {
    buckets: Vec<Vec<usize>>,
    pos: Vec<usize>,
    degree: Vec<usize>,
    min: usize,
}

impl DegreeBuckets {
    fn new(k: usize) -> Self {
        DegreeBuckets {
            buckets: vec![(0..k).collect()],
            pos: (0..k).collect(),
            degree: vec![0; k],
            min: 0,
        }
    }

    fn remove_random<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        let mut b = self.min;
        while self.buckets[b].is_empty() {
            b += 1;
        }
        let bucket = &mut self.buckets[b];
        let i = rng.random_range(0..bucket.len());
        let v = bucket.swap_remove(i);
        if i < bucket.len() {
            self.pos[bucket[i]] = i;
        }
        v
    }

    fn reinsert_incremented(&mut self, v: usize) {
        self.degree[v] += 1;
        let d = self.degree[v];
        if self.buckets.len() <= d {
            self.buckets.resize_with(d + 1, Vec::new);
        }
        self.pos[v] = self.buckets[d].len();
        self.buckets[d].push(v);
    }

    fn settle_min(&mut self) {
        while self.min + 1 < self.buckets.len() && self.buckets[self.min].is_empty() {
            self.min += 1;
        }
    }
}

pub(crate) fn draw_weights<R: Rng + ?Sized>(
    d: usize,
    ws: &WeightSet,
    assignment: WeightAssignment,
    rng: &mut R,
    out: &mut Vec<f64>,
) {
    out.clear();
    let values = ws.values();
    match assignment {
        WeightAssignment::WithReplacement => {
            out.extend((0..d).map(|_| values[ws.sample_index(rng)]));
        }
        WeightAssignment::PermutationOfSet => {
            out.extend_from_slice(values);
            out.shuffle(rng);
        }
        WeightAssignment::WithoutReplacement => {
            if ws.is_uniform() {
                out.extend(
                    index::sample(rng, values.len(), d)
                        .into_iter()
                        .map(|i| values[i]),
                );
            } else {
                // Sequential draws, renormalising over the remaining weights.
                let mut remaining: Vec<(f64, f64)> = values
                    .iter()
                    .copied()
                    .zip(ws.probs().iter().copied())
                    .collect();
                for _ in 0..d {
                    let total: f64 = remaining.iter().map(|r| r.1).sum();
                    let mut x = rng.random::<f64>() * total;
                    let mut pick = remaining.len() - 1;
                    for (j, r) in remaining.iter().enumerate() {
                        if x < r.1 {
                            pick = j;
                            break;
                        }
                        x -= r.1;
                    }
                    out.push(remaining.swap_remove(pick).0);
                }
            }
        }
    }
}

/// Samples a degree, a neighbourhood and edge weights for each of `n_rows`
/// coded symbols.
pub fn build_graph<R: Rng + ?Sized>(
    k: usize,
    n_rows: usize,
    dist: &DegreeDistribution,
    ws: &WeightSet,
    policy: EncoderPolicy,
    rng: &mut R,
) -> Result<FactorGraph> {
    let max_d = dist.max_degree();
    if max_d > k {
        return Err(Error::InvalidConfiguration(format!(
            "degree {max_d} exceeds k = {k}"
        )));
    }
    let f = ws.len();
    match policy.weight_assignment {
        WeightAssignment::PermutationOfSet => {
            let bad = dist
                .omega()
                .iter()
                .enumerate()
                .any(|(i, w)| *w > 0.0 && i + 1 != f);
            if bad {
                return Err(Error::InvalidConfiguration(format!(
                    "permutation assignment needs every degree to equal f = {f}"
                )));
            }
        }
        WeightAssignment::WithoutReplacement if max_d > f => {
            return Err(Error::InvalidConfiguration(format!(
                "degree {max_d} exceeds the {f} weights available without replacement"
            )));
        }
        _ => {}
    }

    let mut graph = FactorGraph::empty(k);
    graph.row_start.reserve(n_rows);
    graph.vars.reserve(n_rows * dist.mu().ceil() as usize);
    graph.weights.reserve(n_rows * dist.mu().ceil() as usize);
    let mut buckets = match policy.selection {
        Selection::MinDegreeFirst => Some(DegreeBuckets::new(k)),
        Selection::UniformRandom => None,
    };
    let mut neighbours = Vec::with_capacity(max_d);
    let mut weights = Vec::with_capacity(max_d);
    for _ in 0..n_rows {
        let d = dist.sample(rng);
        neighbours.clear();
        match buckets.as_mut() {
            Some(b) => {
                for _ in 0..d {
                    neighbours.push(b.remove_random(rng));
                }
                for &v in &neighbours {
                    b.reinsert_incremented(v);
                }
                b.settle_min();
            }
            None => neighbours.extend(index::sample(rng, k, d)),
        }
        draw_weights(d, ws, policy.weight_assignment, rng, &mut weights);
        graph.push_row(neighbours.iter().copied().zip(weights.iter().copied()))?;
    }
    Ok(graph)
}

/// Graph of seamless-baseline rows: each row applies a random permutation of
/// [`SEAMLESS_ROW`] to 8 distinct uniformly chosen variables.
pub fn build_seamless_graph<R: Rng + ?Sized>(
    k: usize,
    n_rows: usize,
    rng: &mut R,
) -> Result<FactorGraph> {
    if k < SEAMLESS_ROW.len() {
        return Err(Error::InvalidConfiguration(format!(
            "seamless rows need k >= 8, got {k}"
        )));
    }
    let mut graph = FactorGraph::empty(k);
    let mut template = SEAMLESS_ROW.to_vec();
    for _ in 0..n_rows {
        template.shuffle(rng);
        let vars = index::sample(rng, k, SEAMLESS_ROW.len());
        graph.push_row(vars.into_iter().zip(template.iter().copied()))?;
    }
    Ok(graph)
}
