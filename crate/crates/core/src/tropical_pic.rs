//! Chip firing on finite multigraphs: Laplacians, Jacobian groups, reduced
//! divisors and firing scripts.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{check_dim, Error, Result};

/// A connected loop-free multigraph on vertices `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

/// Chips per vertex.
pub type Divisor = Vec<i64>;

/// Net number of times each vertex fires.
pub type FiringScript = Vec<i64>;

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::InvalidInput("a graph needs at least one vertex".into()));
        }
        for &(u, v) in &edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidInput(format!("edge ({u},{v}) has an endpoint outside 0..{vertices}")));
            }
            if u == v {
                return Err(Error::InvalidInput(format!("loop at vertex {u}")));
            }
        }
        let edges = edges.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        let g = Graph { vertices, edges };
        if g.distances(0).iter().any(Option::is_none) {
            return Err(Error::InvalidInput("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        Self::new(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.vertices]; self.vertices];
        for &(u, v) in &self.edges {
            a[u][v] += 1;
            a[v][u] += 1;
        }
        a
    }

    /// Breadth-first distances from `base`.
    fn distances(&self, base: usize) -> Vec<Option<usize>> {
        let a = self.adjacency();
        let mut dist = vec![None; self.vertices];
        dist[base] = Some(0);
        let mut queue = VecDeque::from([base]);
        while let Some(u) = queue.pop_front() {
            for v in 0..self.vertices {
                if a[u][v] > 0 && dist[v].is_none() {
                    dist[v] = Some(dist[u].unwrap() + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }
}

/// `L = D − A`.
pub fn laplacian(g: &Graph) -> Vec<Vec<i64>> {
    let mut l = g.adjacency();
    for (i, row) in l.iter_mut().enumerate() {
        let deg: i64 = row.iter().sum();
        for x in row.iter_mut() {
            *x = -*x;
        }
        row[i] = deg;
    }
    l
}

/// Diagonal of the Smith normal form, as nonnegative integers. The pivot is
/// the entry of least nonzero absolute value, ties broken by position.
pub fn smith_normal_form(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::with_capacity(rows.min(cols));
    for t in 0..rows.min(cols) {
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                diag.extend((t..rows.min(cols)).map(|_| BigInt::zero()));
                return diag;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&p);
                if !q.is_zero() {
                    for j in t..cols {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                clean &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&p);
                if !q.is_zero() {
                    for i in t..rows {
                        let d = &q * &m[i][t];
                        m[i][j] -= d;
                    }
                }
                clean &= m[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let x = m[i][j].clone();
                        m[t][j] += x;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

/// Invariant factors (all `> 1`) of the Jacobian group, from the Smith normal
/// form of the Laplacian with vertex 0 deleted; empty for the trivial group.
pub fn jacobian_group(g: &Graph) -> Vec<BigInt> {
    let l = laplacian(g);
    let reduced: Vec<Vec<BigInt>> = l[1..].iter().map(|r| r[1..].iter().map(|&x| BigInt::from(x)).collect()).collect();
    smith_normal_form(reduced).into_iter().filter(|d| *d > BigInt::one()).collect()
}

/// `D − L·s`: every vertex `v` fires `s[v]` times.
pub fn apply_script(g: &Graph, d: &[i64], s: &[i64]) -> Result<Divisor> {
    check_dim(g.vertices, d.len())?;
    check_dim(g.vertices, s.len())?;
    let l = laplacian(g);
    Ok((0..g.vertices).map(|v| d[v] - (0..g.vertices).map(|u| l[v][u] * s[u]).sum::<i64>()).collect())
}

fn fire_set(l: &[Vec<i64>], d: &mut [i64], script: &mut [i64], set: &[bool], times: i64) {
    let n = d.len();
    for v in 0..n {
        let change: i64 = (0..n).filter(|&u| set[u]).map(|u| l[v][u]).sum();
        d[v] -= times * change;
    }
    for (s, &inside) in script.iter_mut().zip(set) {
        if inside {
            *s += times;
        }
    }
}

/// The `base`-reduced divisor equivalent to `d`, with the script reaching it.
fn reduce_with_script(g: &Graph, d: &[i64], base: usize) -> Result<(Divisor, FiringScript)> {
    let n = g.vertices;
    check_dim(n, d.len())?;
    if base >= n {
        return Err(Error::InvalidInput(format!("base vertex {base} out of range")));
    }
    let l = laplacian(g);
    let a = g.adjacency();
    let mut d = d.to_vec();
    let mut script = vec![0i64; n];

    // Move chips outward layer by layer until every non-base vertex is nonnegative.
    let dist: Vec<usize> = g.distances(base).into_iter().map(|x| x.expect("connected")).collect();
    let depth = dist.iter().copied().max().unwrap_or(0);
    for k in (0..depth).rev() {
        let ball: Vec<bool> = dist.iter().map(|&x| x <= k).collect();
        let mut times = 0i64;
        for v in (0..n).filter(|&v| dist[v] == k + 1 && d[v] < 0) {
            let inward: i64 = (0..n).filter(|&u| ball[u]).map(|u| a[v][u]).sum();
            times = times.max(Integer::div_ceil(&-d[v], &inward));
        }
        if times > 0 {
            fire_set(&l, &mut d, &mut script, &ball, times);
        }
    }

    // Dhar's burning algorithm: fire the unburnt set until everything burns.
    loop {
        let mut burnt = vec![false; n];
        burnt[base] = true;
        loop {
            let next = (0..n).find(|&v| !burnt[v] && (0..n).filter(|&u| burnt[u]).map(|u| a[v][u]).sum::<i64>() > d[v]);
            match next {
                Some(v) => burnt[v] = true,
                None => break,
            }
        }
        if burnt.iter().all(|&b| b) {
            break;
        }
        let unburnt: Vec<bool> = burnt.iter().map(|b| !b).collect();
        let times = (0..n)
            .filter(|&v| unburnt[v])
            .filter_map(|v| {
                let out: i64 = (0..n).filter(|&u| burnt[u]).map(|u| a[v][u]).sum();
                (out > 0).then(|| d[v] / out)
            })
            .min()
            .expect("the unburnt set has a boundary vertex");
        fire_set(&l, &mut d, &mut script, &unburnt, times.max(1));
    }
    Ok((d, script))
}

/// The unique `base`-reduced divisor linearly equivalent to `d`.
pub fn reduced_divisor(g: &Graph, d: &[i64], base: usize) -> Result<Divisor> {
    Ok(reduce_with_script(g, d, base)?.0)
}

pub fn is_chip_firing_equivalent(g: &Graph, d1: &[i64], d2: &[i64]) -> Result<bool> {
    check_dim(g.vertices, d1.len())?;
    check_dim(g.vertices, d2.len())?;
    if d1.iter().sum::<i64>() != d2.iter().sum::<i64>() {
        return Ok(false);
    }
    Ok(reduced_divisor(g, d1, 0)? == reduced_divisor(g, d2, 0)?)
}

/// A script `s` with `d1 − L·s = d2` and `min(s) = 0`, if the divisors are equivalent.
pub fn firing_script(g: &Graph, d1: &[i64], d2: &[i64]) -> Result<Option<FiringScript>> {
    check_dim(g.vertices, d1.len())?;
    check_dim(g.vertices, d2.len())?;
    if d1.iter().sum::<i64>() != d2.iter().sum::<i64>() {
        return Ok(None);
    }
    let (r1, s1) = reduce_with_script(g, d1, 0)?;
    let (r2, s2) = reduce_with_script(g, d2, 0)?;
    if r1 != r2 {
        return Ok(None);
    }
    let mut s: Vec<i64> = s1.iter().zip(&s2).map(|(a, b)| a - b).collect();
    let m = s.iter().copied().min().unwrap_or(0);
    for x in s.iter_mut() {
        *x -= m;
    }
    if apply_script(g, d1, &s)? != d2 {
        return Err(Error::InvalidInput("internal error: firing script failed to replay".into()));
    }
    Ok(Some(s))
}
