//! Pattern analysis of nonnegative matrices.
//!
//! The positivity digraph of `M` has an edge `j -> i` whenever `M[i][j]`
//! exceeds the positivity threshold, so that walks in the digraph follow the
//! flow of individuals from class `j` into class `i`. Irreducibility is strong
//! connectivity of that digraph (excluding the 1×1 zero matrix) and the
//! imprimitivity index is the gcd of its cycle lengths.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Positivity threshold applied to computed matrices such as `Q` before their
/// zero pattern is read off. User-supplied matrices use exact positivity.
pub const COMPUTED_PATTERN_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    /// Strongly connected components in topological order of the
    /// condensation (upstream components first). Indices inside each
    /// component are ascending and 0-based.
    pub components: Vec<Vec<usize>>,
    pub irreducible: bool,
    /// Only defined for irreducible matrices.
    pub imprimitivity_index: Option<usize>,
    pub primitive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QPatternReport {
    /// Nonzero rows of `Q` first, then the zero rows; both in ascending order.
    pub permutation: Vec<usize>,
    /// Index set of the irreducible leading block `Q11`.
    pub q11_indices: Vec<usize>,
    pub zero_rows: Vec<usize>,
    pub q_irreducible: bool,
}

/// Adjacency lists of the positivity digraph (`adj[j]` lists every `i` with
/// `M[i][j] > threshold`).
pub fn positivity_digraph(m: &Matrix, threshold: f64) -> Vec<Vec<usize>> {
    let n = m.order();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for (j, &v) in m.row(i).iter().enumerate() {
            if v > threshold {
                adj[j].push(i);
            }
        }
    }
    adj
}

/// Tarjan's algorithm, iterative. Components come out in reverse topological
/// order of the condensation.
pub fn strong_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    // (vertex, position in its adjacency list)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps
}

/// Gcd of cycle lengths through the strongly connected vertex set `comp`,
/// or `None` when the set carries no cycle (a single vertex without a loop).
pub fn component_period(adj: &[Vec<usize>], comp: &[usize]) -> Option<usize> {
    let n = adj.len();
    let mut member = vec![false; n];
    for &v in comp {
        member[v] = true;
    }
    let mut level = vec![usize::MAX; n];
    let start = comp[0];
    level[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &w in &adj[u] {
            if member[w] && level[w] == usize::MAX {
                level[w] = level[u] + 1;
                queue.push_back(w);
            }
        }
    }
    let mut d = 0usize;
    for &u in comp {
        for &w in &adj[u] {
            if member[w] {
                let diff = (level[u] + 1).abs_diff(level[w]);
                d = gcd(d, diff);
            }
        }
    }
    (d > 0).then_some(d)
}

pub fn analyze_structure(m: &Matrix) -> StructureReport {
    analyze_structure_with_threshold(m, 0.0)
}

pub fn analyze_structure_with_threshold(m: &Matrix, threshold: f64) -> StructureReport {
    let adj = positivity_digraph(m, threshold);
    let mut components = strong_components(&adj);
    components.reverse();

    let irreducible = components.len() == 1 && component_period(&adj, &components[0]).is_some();
    let imprimitivity_index = if irreducible { component_period(&adj, &components[0]) } else { None };
    StructureReport {
        components,
        irreducible,
        imprimitivity_index,
        primitive: imprimitivity_index == Some(1),
    }
}

/// `reach[j][i]` is true when `i` can be reached from `j` by a walk of
/// length zero or more in the positivity digraph.
pub fn reachability(adj: &[Vec<usize>]) -> Vec<Vec<bool>> {
    let n = adj.len();
    let mut reach = vec![vec![false; n]; n];
    let mut stack = Vec::new();
    for (src, row) in reach.iter_mut().enumerate() {
        row[src] = true;
        stack.push(src);
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !row[w] {
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    reach
}

/// Block pattern of the next generation matrix `Q = F (I - T)^{-1}`.
///
/// Requires `T + F` irreducible upstream; any violation of the expected
/// pattern laws is reported as a consistency error.
pub fn next_gen_pattern(f: &Matrix, q: &Matrix) -> Result<QPatternReport> {
    let n = f.order();
    if q.order() != n {
        return Err(Error::DimensionMismatch { expected: n, found: q.order() });
    }
    let thr = COMPUTED_PATTERN_THRESHOLD;
    let q_row_zero = |i: usize| q.row(i).iter().all(|&v| v <= thr);

    let zero_rows: Vec<usize> = (0..n).filter(|&i| f.row_is_zero(i)).collect();
    let q_zero_rows: Vec<usize> = (0..n).filter(|&i| q_row_zero(i)).collect();
    if zero_rows != q_zero_rows {
        return Err(Error::Consistency(format!(
            "zero rows of Q {:?} differ from zero rows of F {:?}",
            q_zero_rows, zero_rows
        )));
    }
    let nonzero: Vec<usize> = (0..n).filter(|&i| !f.row_is_zero(i)).collect();
    if nonzero.is_empty() {
        return Err(Error::ZeroFertility);
    }

    let q11 = q.principal_submatrix(&nonzero);
    if !analyze_structure_with_threshold(&q11, thr).irreducible {
        return Err(Error::Consistency(format!(
            "leading block of Q on rows {:?} is not irreducible",
            nonzero
        )));
    }
    if let Some(j) = (0..n).find(|&j| nonzero.iter().all(|&i| q.get(i, j) <= thr)) {
        return Err(Error::Consistency(format!("column {} of (Q11, Q12) has no positive entry", j + 1)));
    }

    let q_irreducible = analyze_structure_with_threshold(q, thr).irreducible;
    if q_irreducible != zero_rows.is_empty() {
        return Err(Error::Consistency(format!(
            "Q irreducible = {q_irreducible} but F has {} zero rows",
            zero_rows.len()
        )));
    }

    let mut permutation = nonzero.clone();
    permutation.extend_from_slice(&zero_rows);
    Ok(QPatternReport { permutation, q11_indices: nonzero, zero_rows, q_irreducible })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
