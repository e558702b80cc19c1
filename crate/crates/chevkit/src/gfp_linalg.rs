//! Exact linear algebra over prime fields F_p.
//!
//! Two tools live here: a dense [`FpMatrix`] with reduced row echelon form and
//! kernel extraction, and a [`StreamingEliminator`] that absorbs equation rows
//! one at a time while keeping its pivot rows fully reduced. The eliminator is
//! what makes the large derivation systems tractable: rows are consumed and
//! discarded, so a system with millions of equations never has to exist as a
//! matrix.

/// Modular inverse of `a` mod the prime `p` (extended Euclid).
///
/// Panics if `a ≡ 0 (mod p)`.
pub fn mod_inverse(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "zero has no inverse mod {p}");
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, a as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i64) as u64
}

/// Trial-division primality test, enough for moduli below 2^31.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Dense matrix over F_p, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from rows, reducing every entry mod p.
    pub fn from_rows(p: u64, rows: &[Vec<u64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r.iter().map(|&x| x % p));
        }
        Self {
            p,
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.p;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    acc = (acc + self.get(i, j) * (v[j] % self.p)) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with the rank.
    pub fn rref(&self) -> (FpMatrix, usize) {
        let mut m = self.clone();
        let p = m.p;
        let mut pivot_row = 0;
        for col in 0..m.cols {
            let Some(src) = (pivot_row..m.rows).find(|&r| m.get(r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for j in 0..m.cols {
                    let a = m.get(pivot_row, j);
                    let b = m.get(src, j);
                    m.set(pivot_row, j, b);
                    m.set(src, j, a);
                }
            }
            let inv = mod_inverse(m.get(pivot_row, col), p);
            for j in col..m.cols {
                let v = m.get(pivot_row, j) * inv % p;
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let f = m.get(r, col);
                if f == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let v = (m.get(r, j) + (p - f) * m.get(pivot_row, j)) % p;
                    m.set(r, j, v);
                }
            }
            pivot_row += 1;
            if pivot_row == m.rows {
                break;
            }
        }
        (m, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Basis of the right kernel {v : M v = 0}, one vector per free column,
    /// in ascending free-column order.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let (r, rank) = self.rref();
        let p = self.p;
        let mut pivot_col_of_row = Vec::with_capacity(rank);
        let mut is_pivot = vec![false; self.cols];
        for i in 0..rank {
            let col = (0..self.cols)
                .find(|&j| r.get(i, j) != 0)
                .expect("rank row has a pivot");
            pivot_col_of_row.push(col);
            is_pivot[col] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - rank);
        for free in (0..self.cols).filter(|&j| !is_pivot[j]) {
            let mut v = vec![0u64; self.cols];
            v[free] = 1;
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                let a = r.get(row, free);
                if a != 0 {
                    v[pc] = p - a;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// Incremental Gauss–Jordan elimination over F_p.
///
/// Rows are pushed one at a time; the eliminator keeps the accumulated row
/// space in reduced echelon form at all times. A pivot row therefore has
/// support only on its own pivot column plus free columns, which keeps every
/// row short once the rank is close to final — the property that lets the
/// full derivation systems (tens of thousands of unknowns, millions of rows)
/// run in seconds.
pub struct StreamingEliminator {
    p: u64,
    num_unknowns: usize,
    /// pivot column -> row id, or NONE.
    pivot_row_of_col: Vec<u32>,
    /// Reduced rows, sorted by column; entry 0 is the pivot with value 1.
    rows: Vec<Vec<(u32, u32)>>,
    /// col -> row ids that may hold a nonzero tail entry there (lazily pruned).
    col_index: Vec<Vec<u32>>,
    scratch: Vec<u64>,
    touched: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl StreamingEliminator {
    pub fn new(p: u64, num_unknowns: usize) -> Self {
        assert!(is_prime(p), "modulus {p} is not prime");
        assert!(p < 1 << 31, "modulus {p} too large");
        Self {
            p,
            num_unknowns,
            pivot_row_of_col: vec![NONE; num_unknowns],
            rows: Vec::new(),
            col_index: vec![Vec::new(); num_unknowns],
            scratch: vec![0; num_unknowns],
            touched: Vec::new(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn num_unknowns(&self) -> usize {
        self.num_unknowns
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Unknowns minus rank: the dimension of the solution space so far.
    pub fn solution_dim(&self) -> usize {
        self.num_unknowns - self.rank()
    }

    /// Pushes a dense equation row. Returns true iff the rank increased.
    pub fn push_dense(&mut self, row: &[u64]) -> bool {
        assert_eq!(row.len(), self.num_unknowns, "row length mismatch");
        let p = self.p;
        let entries: Vec<(u32, u64)> = row
            .iter()
            .enumerate()
            .filter_map(|(j, &v)| {
                let v = v % p;
                (v != 0).then_some((j as u32, v))
            })
            .collect();
        self.push_sparse(&entries)
    }

    /// Pushes a sparse equation row given as (column, coefficient) pairs.
    /// Duplicate columns accumulate. Returns true iff the rank increased.
    pub fn push_sparse(&mut self, entries: &[(u32, u64)]) -> bool {
        let p = self.p;
        // Load into the scratch accumulator.
        let mut initial: Vec<u32> = Vec::with_capacity(entries.len());
        for &(c, v) in entries {
            let v = v % p;
            if v == 0 {
                continue;
            }
            let cell = &mut self.scratch[c as usize];
            if *cell == 0 {
                initial.push(c);
                self.touched.push(c);
            }
            *cell = (*cell + v) % p;
        }
        initial.sort_unstable();

        // Cancel pivot columns in ascending order. Reduced pivot rows have
        // support only on their pivot and on free columns, so an axpy never
        // introduces a new pivot column: one pass suffices.
        for &c in &initial {
            let v = self.scratch[c as usize];
            if v == 0 {
                continue;
            }
            let rid = self.pivot_row_of_col[c as usize];
            if rid == NONE {
                continue;
            }
            let mult = p - v; // add (p - v) * pivot_row
            for &(c2, w) in &self.rows[rid as usize] {
                let cell = &mut self.scratch[c2 as usize];
                if *cell == 0 {
                    self.touched.push(c2);
                }
                *cell = (*cell + mult * w as u64) % p;
            }
            debug_assert_eq!(self.scratch[c as usize], 0);
        }

        // Gather the remainder, zeroing the scratch as we go.
        let mut remainder: Vec<(u32, u32)> = Vec::new();
        for idx in 0..self.touched.len() {
            let c = self.touched[idx];
            let v = self.scratch[c as usize];
            if v != 0 {
                remainder.push((c, v as u32));
                self.scratch[c as usize] = 0;
            }
        }
        self.touched.clear();
        if remainder.is_empty() {
            return false;
        }
        remainder.sort_unstable_by_key(|&(c, _)| c);

        // Normalize so the leading entry is 1 and install as a new pivot row.
        let pivot_col = remainder[0].0;
        let inv = mod_inverse(remainder[0].1 as u64, p);
        for e in &mut remainder {
            e.1 = (e.1 as u64 * inv % p) as u32;
        }
        let new_id = self.rows.len() as u32;
        self.pivot_row_of_col[pivot_col as usize] = new_id;

        // Clear the new pivot column from every older row that carries it.
        let affected = std::mem::take(&mut self.col_index[pivot_col as usize]);
        for rid in affected {
            if rid == new_id {
                continue;
            }
            let row = &self.rows[rid as usize];
            let Ok(pos) = row.binary_search_by_key(&pivot_col, |&(c, _)| c) else {
                continue; // stale index entry
            };
            let coef = row[pos].1 as u64;
            let merged = self.axpy_rows(row, &remainder, p - coef);
            for &(c, _) in &remainder[1..] {
                self.col_index[c as usize].push(rid);
            }
            self.rows[rid as usize] = merged;
        }
        for &(c, _) in &remainder[1..] {
            self.col_index[c as usize].push(new_id);
        }
        self.rows.push(remainder);
        true
    }

    /// row + mult * other, both sorted sparse; zero results dropped.
    fn axpy_rows(&self, row: &[(u32, u32)], other: &[(u32, u32)], mult: u64) -> Vec<(u32, u32)> {
        let p = self.p;
        let mut out = Vec::with_capacity(row.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() && j < other.len() {
            match row[i].0.cmp(&other[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(row[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let v = mult * other[j].1 as u64 % p;
                    if v != 0 {
                        out.push((other[j].0, v as u32));
                    }
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let v = (row[i].1 as u64 + mult * other[j].1 as u64) % p;
                    if v != 0 {
                        out.push((row[i].0, v as u32));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&row[i..]);
        for &(c, w) in &other[j..] {
            let v = mult * w as u64 % p;
            if v != 0 {
                out.push((c, v as u32));
            }
        }
        out
    }

    /// True iff the row lies in the span of the rows pushed so far.
    pub fn contains_row(&mut self, entries: &[(u32, u64)]) -> bool {
        let p = self.p;
        let mut initial: Vec<u32> = Vec::new();
        for &(c, v) in entries {
            let v = v % p;
            if v == 0 {
                continue;
            }
            let cell = &mut self.scratch[c as usize];
            if *cell == 0 {
                initial.push(c);
                self.touched.push(c);
            }
            *cell = (*cell + v) % p;
        }
        initial.sort_unstable();
        for &c in &initial {
            let v = self.scratch[c as usize];
            if v == 0 {
                continue;
            }
            let rid = self.pivot_row_of_col[c as usize];
            if rid == NONE {
                continue;
            }
            let mult = p - v;
            for &(c2, w) in &self.rows[rid as usize] {
                let cell = &mut self.scratch[c2 as usize];
                if *cell == 0 {
                    self.touched.push(c2);
                }
                *cell = (*cell + mult * w as u64) % p;
            }
        }
        let mut zero = true;
        for idx in 0..self.touched.len() {
            let c = self.touched[idx];
            if self.scratch[c as usize] != 0 {
                zero = false;
            }
            self.scratch[c as usize] = 0;
        }
        self.touched.clear();
        zero
    }

    /// The reduced pivot rows sorted by pivot column. Because reduced echelon
    /// form is unique per row space, this is a canonical fingerprint.
    pub fn reduced_rows(&self) -> Vec<Vec<(u32, u32)>> {
        let mut rows: Vec<Vec<(u32, u32)>> = self.rows.clone();
        rows.sort_unstable_by_key(|r| r[0].0);
        rows
    }

    /// Basis of the solution space, one vector per free column in ascending
    /// order (the canonical kernel basis of the reduced echelon form).
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let free_cols: Vec<u32> = (0..self.num_unknowns as u32)
            .filter(|&c| self.pivot_row_of_col[c as usize] == NONE)
            .collect();
        let mut slot_of_col = vec![NONE; self.num_unknowns];
        for (s, &c) in free_cols.iter().enumerate() {
            slot_of_col[c as usize] = s as u32;
        }
        let mut basis: Vec<Vec<u64>> = free_cols
            .iter()
            .map(|&c| {
                let mut v = vec![0u64; self.num_unknowns];
                v[c as usize] = 1;
                v
            })
            .collect();
        for row in &self.rows {
            let pivot = row[0].0 as usize;
            for &(c, w) in &row[1..] {
                let slot = slot_of_col[c as usize];
                debug_assert_ne!(slot, NONE, "tail entry on a pivot column");
                basis[slot as usize][pivot] = p - w as u64;
            }
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn inverse_small_fields() {
        for p in [2u64, 3, 5, 7, 31] {
            for a in 1..p {
                assert_eq!(a * mod_inverse(a, p) % p, 1);
            }
        }
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(5) && is_prime(101));
        assert!(!is_prime(0) && !is_prime(1) && !is_prime(4) && !is_prime(49));
    }

    #[test]
    fn rref_zero_matrix_has_rank_zero() {
        let m = FpMatrix::zeros(5, 3, 4);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn rref_identity_has_full_rank() {
        for n in 1..6 {
            assert_eq!(FpMatrix::identity(7, n).rank(), n);
        }
    }

    #[test]
    fn rref_ones_over_f2() {
        let m = FpMatrix::from_rows(2, &[vec![1, 1], vec![1, 1]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(FpMatrix::identity(3, 4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let m = FpMatrix::zeros(5, 2, 3);
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn kernel_of_sum_row_over_f3() {
        // Oracle: enumerate all 27 vectors of F_3^3 with x+y+z = 0.
        let m = FpMatrix::from_rows(3, &[vec![1, 1, 1]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(m.mul_vec(v), vec![0]);
        }
        let mut solutions = 0;
        for x in 0..3u64 {
            for y in 0..3u64 {
                for z in 0..3u64 {
                    if (x + y + z) % 3 == 0 {
                        solutions += 1;
                    }
                }
            }
        }
        assert_eq!(solutions, 9); // 3^2 = p^kernel_dim
    }

    /// Rank by brute-force row-space enumeration (p^rank elements), feasible
    /// for tiny systems only; independent of the elimination code.
    fn rank_by_enumeration(m: &FpMatrix) -> usize {
        let p = m.p();
        let mut space: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        space.insert(vec![0; m.cols()]);
        loop {
            let mut grew = false;
            let snapshot: Vec<Vec<u64>> = space.iter().cloned().collect();
            for v in &snapshot {
                for i in 0..m.rows() {
                    let mut w = v.clone();
                    for j in 0..m.cols() {
                        w[j] = (w[j] + m.get(i, j)) % p;
                    }
                    if space.insert(w) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let mut k = 0;
        while p.pow(k) < space.len() as u64 {
            k += 1;
        }
        assert_eq!(p.pow(k), space.len() as u64);
        k as usize
    }

    #[test]
    fn rank_matches_row_space_enumeration() {
        let mut rng = StdRng::seed_from_u64(11);
        for p in [2u64, 3, 5, 7] {
            // Keep p^rank enumerable.
            let dim = match p {
                2 => 8,
                3 => 6,
                _ => 4,
            };
            for _ in 0..20 {
                let rows: Vec<Vec<u64>> = (0..dim)
                    .map(|_| (0..dim).map(|_| rng.gen_range(0..p)).collect())
                    .collect();
                let m = FpMatrix::from_rows(p, &rows);
                assert_eq!(m.rank(), rank_by_enumeration(&m));
            }
        }
    }

    #[test]
    fn streaming_redundant_row_keeps_rank() {
        let mut e = StreamingEliminator::new(5, 4);
        assert!(e.push_dense(&[1, 2, 3, 4]));
        assert!(e.push_dense(&[0, 1, 1, 0]));
        assert_eq!(e.rank(), 2);
        // 2*(first) + 3*(second), already in the row space
        assert!(!e.push_dense(&[2, 4 + 3, 6 + 3, 8]));
        assert_eq!(e.rank(), 2);
        assert_eq!(e.solution_dim(), 2);
    }

    #[test]
    fn streaming_full_rank_leaves_no_solutions() {
        let n = 6;
        let mut e = StreamingEliminator::new(3, n);
        assert_eq!(e.solution_dim(), n);
        for i in 0..n {
            // Triangular rows: independent by construction.
            let mut row = vec![0u64; n];
            row[i] = 2;
            if i + 1 < n {
                row[i + 1] = 1;
            }
            e.push_dense(&row);
        }
        assert_eq!(e.rank(), n);
        assert_eq!(e.solution_dim(), 0);
    }

    #[test]
    fn streaming_matches_dense_and_is_order_independent() {
        let mut rng = StdRng::seed_from_u64(7);
        for p in [2u64, 3, 5, 7] {
            for _ in 0..25 {
                let rows = rng.gen_range(1..14);
                let cols = rng.gen_range(1..12);
                let mat: Vec<Vec<u64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                    .collect();
                let dense_rank = FpMatrix::from_rows(p, &mat).rank();

                let mut e = StreamingEliminator::new(p, cols);
                for r in &mat {
                    e.push_dense(r);
                }
                assert_eq!(e.rank(), dense_rank);

                // Permute the stream: same rank, same reduced rows, same kernel.
                let mut perm: Vec<usize> = (0..rows).collect();
                for i in (1..rows).rev() {
                    perm.swap(i, rng.gen_range(0..=i));
                }
                let mut e2 = StreamingEliminator::new(p, cols);
                for &i in &perm {
                    e2.push_dense(&mat[i]);
                }
                assert_eq!(e2.rank(), dense_rank);
                assert_eq!(e.reduced_rows(), e2.reduced_rows());
                assert_eq!(e.kernel_basis(), e2.kernel_basis());
            }
        }
    }

    #[test]
    fn streaming_kernel_vectors_solve_the_system() {
        let mut rng = StdRng::seed_from_u64(3);
        for p in [2u64, 5] {
            let cols = 9;
            let mat: Vec<Vec<u64>> = (0..6)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let m = FpMatrix::from_rows(p, &mat);
            let mut e = StreamingEliminator::new(p, cols);
            for r in &mat {
                e.push_dense(r);
            }
            let kernel = e.kernel_basis();
            assert_eq!(kernel.len(), e.solution_dim());
            for v in &kernel {
                assert!(m.mul_vec(v).iter().all(|&x| x == 0));
            }
            // Independence: stacking the kernel vectors has full rank.
            assert_eq!(FpMatrix::from_rows(p, &kernel).rank(), kernel.len());
        }
    }

    #[test]
    fn streaming_survives_medium_sparse_systems() {
        // Heavier systems with many redundant rows and duplicate columns,
        // cross-checked against the dense path.
        let mut rng = StdRng::seed_from_u64(41);
        for p in [2u64, 3, 5] {
            let cols = 60;
            let mut e = StreamingEliminator::new(p, cols);
            let mut dense_rows: Vec<Vec<u64>> = Vec::new();
            for round in 0..400 {
                let mut sparse: Vec<(u32, u64)> = Vec::new();
                let mut dense = vec![0u64; cols];
                for _ in 0..rng.gen_range(1..8) {
                    let c = rng.gen_range(0..cols as u32);
                    let v = rng.gen_range(0..p);
                    sparse.push((c, v));
                    dense[c as usize] = (dense[c as usize] + v) % p;
                }
                // Periodically push an exact linear combination of earlier rows.
                if round % 5 == 4 && dense_rows.len() >= 2 {
                    let a = rng.gen_range(0..dense_rows.len());
                    let b = rng.gen_range(0..dense_rows.len());
                    let ca = rng.gen_range(1..p.max(2));
                    for j in 0..cols {
                        dense[j] = (dense_rows[a][j] * ca + dense_rows[b][j]) % p;
                    }
                    sparse = dense
                        .iter()
                        .enumerate()
                        .filter_map(|(j, &v)| (v != 0).then_some((j as u32, v)))
                        .collect();
                }
                e.push_sparse(&sparse);
                dense_rows.push(dense);
            }
            let dense_rank = FpMatrix::from_rows(p, &dense_rows).rank();
            assert_eq!(e.rank(), dense_rank, "p={p}");
            assert_eq!(
                e.kernel_basis(),
                FpMatrix::from_rows(p, &dense_rows).kernel_basis()
            );
        }
    }

    #[test]
    fn streaming_kernel_equals_dense_kernel() {
        // Both sides compute the canonical kernel basis of the reduced
        // echelon form, so they must agree exactly.
        let mut rng = StdRng::seed_from_u64(23);
        for p in [2u64, 3, 7] {
            for _ in 0..30 {
                let rows = rng.gen_range(1..10);
                let cols = rng.gen_range(1..10);
                let mat: Vec<Vec<u64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                    .collect();
                let dense = FpMatrix::from_rows(p, &mat);
                let mut e = StreamingEliminator::new(p, cols);
                for r in &mat {
                    e.push_dense(r);
                }
                assert_eq!(e.kernel_basis(), dense.kernel_basis());
            }
        }
    }

    #[test]
    fn contains_row_detects_membership() {
        let mut e = StreamingEliminator::new(7, 5);
        e.push_dense(&[1, 0, 2, 0, 0]);
        e.push_dense(&[0, 1, 3, 0, 0]);
        assert!(e.contains_row(&[(0, 2), (2, 4)]));
        assert!(e.contains_row(&[(0, 1), (1, 1), (2, 5)]));
        assert!(!e.contains_row(&[(3, 1)]));
        assert_eq!(e.rank(), 2);
    }

    proptest! {
        #[test]
        fn prop_rank_nullity(seed in 0u64..500) {
            let mut rng = StdRng::seed_from_u64(seed);
            let p = [2u64, 3, 5, 7][(seed % 4) as usize];
            let rows = rng.gen_range(1..10);
            let cols = rng.gen_range(1..10);
            let mat: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let m = FpMatrix::from_rows(p, &mat);
            let (_, rank) = m.rref();
            prop_assert_eq!(rank + m.kernel_basis().len(), cols);
        }

        #[test]
        fn prop_rref_idempotent(seed in 0u64..200) {
            let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(0x9e37));
            let p = [2u64, 3, 5][(seed % 3) as usize];
            let rows = rng.gen_range(1..8);
            let cols = rng.gen_range(1..8);
            let mat: Vec<Vec<u64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.gen_range(0..p)).collect())
                .collect();
            let (r1, rank1) = FpMatrix::from_rows(p, &mat).rref();
            let (r2, rank2) = r1.rref();
            prop_assert_eq!(rank1, rank2);
            prop_assert_eq!(r1, r2);
        }
    }
}
