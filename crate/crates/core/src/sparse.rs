//! Symmetric sparse storage and a profile (skyline) LDL^T factorization.
//!
//! The stiffness pattern depends only on connectivity, so it is built once
//! and values are refreshed in place. Free-DOF subsystems are reordered with
//! reverse Cuthill-McKee before factorization to keep the profile narrow.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
#[cfg(not(feature = "std"))]
use num_traits::Float;

use crate::error::{Error, Result};

/// Square matrix in compressed sparse row form with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Pattern coupling every pair of indices within each group.
    pub fn from_groups<'a, I>(n: usize, groups: I) -> Self
    where
        I: IntoIterator<Item = &'a [usize]>,
    {
        let mut rows: Vec<Vec<usize>> = vec![Vec::new(); n];
        for g in groups {
            for &i in g {
                rows[i].extend_from_slice(g);
            }
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        row_ptr.push(0);
        for (i, mut r) in rows.into_iter().enumerate() {
            r.push(i);
            r.sort_unstable();
            r.dedup();
            cols.extend_from_slice(&r);
            row_ptr.push(cols.len());
        }
        let nnz = cols.len();
        CsrMatrix {
            n,
            row_ptr,
            cols,
            values: vec![0.0; nnz],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::from_groups(n, core::iter::empty());
        m.values.iter_mut().for_each(|v| *v = 1.0);
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.values[r])
    }

    /// Storage index of entry `(i, j)` if it is in the pattern.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (c, _) = self.row(i);
        c.binary_search(&j).ok().map(|k| self.row_ptr[i] + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |p| self.values[p])
    }

    /// Storage indices of the dense block `dofs x dofs`, row-major.
    pub fn block_positions(&self, dofs: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(dofs.len() * dofs.len());
        for &i in dofs {
            for &j in dofs {
                out.push(self.position(i, j).expect("entry in pattern"));
            }
        }
        out
    }

    pub fn clear(&mut self) {
        self.values.iter_mut().for_each(|v| *v = 0.0);
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum()
            })
            .collect()
    }

    /// Largest `|a_ij - a_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                worst = worst.max((a - self.get(j, i)).abs());
            }
        }
        worst / scale
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                d[i][j] = a;
            }
        }
        d
    }
}

/// Reverse Cuthill-McKee order of a graph given as adjacency lists.
pub fn reverse_cuthill_mckee(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    let bfs_last = |start: usize, visited: &[bool]| -> (usize, usize) {
        // returns the last node reached and the eccentricity
        let mut level = vec![usize::MAX; n];
        let mut q = VecDeque::new();
        level[start] = 0;
        q.push_back(start);
        let mut last = start;
        while let Some(v) = q.pop_front() {
            last = v;
            for &w in &adj[v] {
                if !visited[w] && level[w] == usize::MAX {
                    level[w] = level[v] + 1;
                    q.push_back(w);
                }
            }
        }
        (last, level[last])
    };
    for seed in 0..n {
        if visited[seed] {
            continue;
        }
        // pseudo-peripheral start
        let mut start = seed;
        let mut ecc = bfs_last(start, &visited).1;
        for _ in 0..4 {
            let (far, _) = bfs_last(start, &visited);
            let (_, e) = bfs_last(far, &visited);
            if e <= ecc {
                break;
            }
            start = far;
            ecc = e;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = adj[v].iter().copied().filter(|&w| !visited[w]).collect();
            next.sort_by_key(|&w| (adj[w].len(), w));
            for w in next {
                visited[w] = true;
                queue.push_back(w);
            }
        }
    }
    order.reverse();
    order
}

/// Symbolic part of a free-DOF factorization: ordering and profile layout.
#[derive(Debug, Clone)]
pub struct SkylinePlan {
    free: Vec<usize>,
    /// Position in the factor of each free DOF.
    rank: Vec<usize>,
    first: Vec<usize>,
    start: Vec<usize>,
    /// `(csr index, skyline index)` of every lower-profile entry.
    fill: Vec<(usize, usize)>,
    diag_csr: Vec<usize>,
}

impl SkylinePlan {
    pub fn new(matrix: &CsrMatrix, free: &[usize]) -> Self {
        let mut local = vec![usize::MAX; matrix.dim()];
        for (k, &g) in free.iter().enumerate() {
            local[g] = k;
        }
        let m = free.len();
        let adj: Vec<Vec<usize>> = free
            .iter()
            .map(|&g| {
                let (c, _) = matrix.row(g);
                c.iter().filter(|&&j| local[j] != usize::MAX && j != g).map(|&j| local[j]).collect()
            })
            .collect();
        let order = reverse_cuthill_mckee(&adj);
        let mut rank = vec![0; m];
        for (r, &k) in order.iter().enumerate() {
            rank[k] = r;
        }
        let mut first: Vec<usize> = (0..m).collect();
        for k in 0..m {
            for &l in &adj[k] {
                let (i, j) = (rank[k], rank[l]);
                if j < i && j < first[i] {
                    first[i] = j;
                }
            }
        }
        let mut start = Vec::with_capacity(m + 1);
        start.push(0);
        for i in 0..m {
            start.push(start[i] + (i - first[i] + 1));
        }
        let mut fill = Vec::new();
        let mut diag_csr = vec![0; m];
        for (k, &g) in free.iter().enumerate() {
            let i = rank[k];
            let (c, _) = matrix.row(g);
            for (off, &col) in c.iter().enumerate() {
                let l = local[col];
                if l == usize::MAX {
                    continue;
                }
                let j = rank[l];
                let csr = matrix.row_ptr[g] + off;
                if j == i {
                    diag_csr[i] = csr;
                }
                if j <= i {
                    fill.push((csr, start[i] + (j - first[i])));
                }
            }
        }
        SkylinePlan {
            free: free.to_vec(),
            rank,
            first,
            start,
            fill,
            diag_csr,
        }
    }

    pub fn free(&self) -> &[usize] {
        &self.free
    }

    /// Entries stored in the profile.
    pub fn profile_size(&self) -> usize {
        *self.start.last().unwrap_or(&0)
    }

    /// Numeric factorization of the free block of `matrix` with symmetric
    /// diagonal scaling.
    pub fn factor(&self, matrix: &CsrMatrix) -> Result<SkylineFactor<'_>> {
        let m = self.free.len();
        let scale: Vec<f64> = self
            .diag_csr
            .iter()
            .map(|&p| {
                let d = matrix.values[p].abs();
                if d > 0.0 && d.is_finite() {
                    1.0 / d.sqrt()
                } else {
                    1.0
                }
            })
            .collect();
        // position -> row lookup for the scaling
        let mut row_of = vec![0; self.profile_size()];
        for i in 0..m {
            for p in self.start[i]..self.start[i + 1] {
                row_of[p] = i;
            }
        }
        let mut a = vec![0.0; self.profile_size()];
        for &(csr, sky) in &self.fill {
            let i = row_of[sky];
            let j = self.first[i] + (sky - self.start[i]);
            a[sky] = matrix.values[csr] * scale[i] * scale[j];
        }
        let original = a.clone();
        let mut d = vec![0.0; m];
        for i in 0..m {
            let fi = self.first[i];
            let si = self.start[i];
            let (done, row) = a.split_at_mut(si);
            for j in fi..i {
                let fj = self.first[j];
                let sj = self.start[j];
                let lo = fi.max(fj);
                let s = dot(&row[lo - fi..j - fi], &done[sj + (lo - fj)..sj + (j - fj)]);
                row[j - fi] -= s;
            }
            let mut dii = a[si + (i - fi)];
            for j in fi..i {
                let w = a[si + (j - fi)];
                let l = w / d[j];
                a[si + (j - fi)] = l;
                dii -= w * l;
            }
            if !dii.is_finite() || dii.abs() < 1e-14 {
                return Err(Error::SingularSystem);
            }
            d[i] = dii;
            a[si + (i - fi)] = 1.0;
        }
        Ok(SkylineFactor {
            plan: self,
            scale,
            factor: a,
            diag: d,
            scaled: original,
        })
    }
}

/// Dot product with four independent accumulators so the loop vectorizes.
fn dot(x: &[f64], y: &[f64]) -> f64 {
    let mut acc = [0.0; 4];
    let (xc, yc) = (x.chunks_exact(4), y.chunks_exact(4));
    let (xr, yr) = (xc.remainder(), yc.remainder());
    for (p, q) in xc.zip(yc) {
        for k in 0..4 {
            acc[k] += p[k] * q[k];
        }
    }
    let tail: f64 = xr.iter().zip(yr).map(|(p, q)| p * q).sum();
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

#[derive(Debug)]
pub struct SkylineFactor<'p> {
    plan: &'p SkylinePlan,
    scale: Vec<f64>,
    factor: Vec<f64>,
    diag: Vec<f64>,
    scaled: Vec<f64>,
}

impl SkylineFactor<'_> {
    fn solve_permuted(&self, b: &mut [f64]) {
        let p = self.plan;
        let m = b.len();
        for i in 0..m {
            let fi = p.first[i];
            let si = p.start[i];
            let mut s = b[i];
            for j in fi..i {
                s -= self.factor[si + (j - fi)] * b[j];
            }
            b[i] = s;
        }
        for i in 0..m {
            b[i] /= self.diag[i];
        }
        for i in (0..m).rev() {
            let fi = p.first[i];
            let si = p.start[i];
            let bi = b[i];
            for j in fi..i {
                b[j] -= self.factor[si + (j - fi)] * bi;
            }
        }
    }

    /// `A_scaled x` in permuted order, from the unfactored profile.
    fn apply_scaled(&self, x: &[f64]) -> Vec<f64> {
        let p = self.plan;
        let m = x.len();
        let mut y = vec![0.0; m];
        for i in 0..m {
            let fi = p.first[i];
            let si = p.start[i];
            for j in fi..i {
                let a = self.scaled[si + (j - fi)];
                y[i] += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += self.scaled[si + (i - fi)] * x[i];
        }
        y
    }

    /// Solves with the free block; `rhs` and the result are indexed like
    /// the plan's free list. One step of iterative refinement is applied and
    /// an unreliable solution reports a singular system.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let p = self.plan;
        let m = rhs.len();
        let mut b = vec![0.0; m];
        for k in 0..m {
            b[p.rank[k]] = rhs[k] * self.scale[p.rank[k]];
        }
        let mut x = b.clone();
        self.solve_permuted(&mut x);
        let ax = self.apply_scaled(&x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        self.solve_permuted(&mut r);
        for i in 0..m {
            x[i] += r[i];
        }
        let ax = self.apply_scaled(&x);
        let res = b.iter().zip(&ax).map(|(b, a)| (b - a) * (b - a)).sum::<f64>().sqrt();
        let bn = b.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !res.is_finite() || res > 1e-6 * (bn + xn).max(f64::MIN_POSITIVE) {
            return Err(Error::SingularSystem);
        }
        Ok((0..m).map(|k| x[p.rank[k]] * self.scale[p.rank[k]]).collect())
    }

    /// Number of negative pivots (the inertia of the free block).
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|d| **d < 0.0).count()
    }
}
