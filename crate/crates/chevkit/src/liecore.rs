//! Bracket evaluation, adjoint maps, center, Killing form and ad-dimension
//! for a [`LieAlgebraFp`].

use thiserror::Error;

use crate::chevalley::{ChevalleyBasisZ, ChevalleyError, LieAlgebraFp};
use crate::gfp_linalg::{FpMatrix, StreamingEliminator};

#[derive(Debug, Error)]
pub enum LieCoreError {
    #[error("vector length {0} does not match algebra dimension {1}")]
    LengthMismatch(usize, usize),
}

/// A subspace of F_p^n, basis kept in reduced echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    p: u64,
    ambient_dim: usize,
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    /// Normalizes arbitrary spanning vectors into an echelon basis.
    pub fn from_vectors(p: u64, ambient_dim: usize, vectors: &[Vec<u64>]) -> Self {
        if vectors.is_empty() {
            return Subspace {
                p,
                ambient_dim,
                basis: Vec::new(),
            };
        }
        let (r, rank) = FpMatrix::from_rows(p, vectors).rref();
        let basis = (0..rank).map(|i| r.row(i).to_vec()).collect();
        Subspace {
            p,
            ambient_dim,
            basis,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let p = self.p;
        let mut w: Vec<u64> = v.iter().map(|&x| x % p).collect();
        for row in &self.basis {
            let pivot = row
                .iter()
                .position(|&x| x != 0)
                .expect("echelon rows are nonzero");
            let c = w[pivot];
            if c != 0 {
                for (wi, &ri) in w.iter_mut().zip(row) {
                    *wi = (*wi + (p - c) * ri) % p;
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// True iff every basis vector is supported on the given positions.
    pub fn supported_on(&self, positions: &[usize]) -> bool {
        let allowed: std::collections::HashSet<usize> = positions.iter().copied().collect();
        self.basis.iter().all(|v| {
            v.iter()
                .enumerate()
                .all(|(i, &x)| x == 0 || allowed.contains(&i))
        })
    }
}

/// Bilinear bracket of two coefficient vectors.
pub fn bracket(l: &LieAlgebraFp, x: &[u64], y: &[u64]) -> Result<Vec<u64>, LieCoreError> {
    let n = l.dim();
    if x.len() != n {
        return Err(LieCoreError::LengthMismatch(x.len(), n));
    }
    if y.len() != n {
        return Err(LieCoreError::LengthMismatch(y.len(), n));
    }
    let p = l.p();
    let mut out = vec![0u64; n];
    for i in 0..n {
        for j in (i + 1)..n {
            // [x,y] = Σ_{i<j} (x_i y_j - x_j y_i) [b_i, b_j]
            let coef = (x[i] % p * (y[j] % p) + (p - y[i] % p) * (x[j] % p)) % p;
            if coef == 0 {
                continue;
            }
            let (slice, _) = l.pair_slice(i, j);
            for &(k, c) in slice {
                out[k as usize] = (out[k as usize] + coef * c) % p;
            }
        }
    }
    Ok(out)
}

/// Matrix of ad(x): column j is [x, b_j].
pub fn ad_matrix(l: &LieAlgebraFp, x: &[u64]) -> Result<FpMatrix, LieCoreError> {
    let n = l.dim();
    if x.len() != n {
        return Err(LieCoreError::LengthMismatch(x.len(), n));
    }
    let p = l.p();
    let mut m = FpMatrix::zeros(p, n, n);
    for j in 0..n {
        for i in 0..n {
            let xi = x[i] % p;
            if xi == 0 || i == j {
                continue;
            }
            let (slice, negate) = l.pair_slice(i, j);
            for &(k, c) in slice {
                let c = if negate { p - c } else { c };
                let cur = m.get(k as usize, j);
                m.set(k as usize, j, cur + xi * c);
            }
        }
    }
    Ok(m)
}

/// Center Z(L) = {z : [z, b_j] = 0 for all j}, computed as one stacked kernel.
pub fn center(l: &LieAlgebraFp) -> Subspace {
    let n = l.dim();
    let p = l.p();
    let mut elim = StreamingEliminator::new(p, n);
    let mut rows: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n];
    for j in 0..n {
        // Condition [x, b_j] = 0: coefficient of x_k at output t is c_{k,j}^t.
        let mut used: Vec<usize> = Vec::new();
        for k in 0..n {
            if k == j {
                continue;
            }
            let (slice, negate) = l.pair_slice(k, j);
            for &(t, c) in slice {
                let c = if negate { p - c } else { c };
                if rows[t as usize].is_empty() {
                    used.push(t as usize);
                }
                rows[t as usize].push((k as u32, c));
            }
        }
        for &t in &used {
            elim.push_sparse(&rows[t]);
            rows[t].clear();
        }
    }
    Subspace::from_vectors(p, n, &elim.kernel_basis())
}

/// dim ad(L) = dim L − dim Z(L).
pub fn ad_dimension(l: &LieAlgebraFp) -> usize {
    l.dim() - center(l).dim()
}

/// Sparse ad entries of every basis element: (target, source, coefficient).
fn ad_entries(l: &LieAlgebraFp) -> Vec<Vec<(u32, u32, u64)>> {
    let n = l.dim();
    let p = l.p();
    let mut out = vec![Vec::new(); n];
    for a in 0..n {
        for s in 0..n {
            if a == s {
                continue;
            }
            let (slice, negate) = l.pair_slice(a, s);
            for &(t, c) in slice {
                let c = if negate { p - c } else { c };
                out[a].push((t, s as u32, c));
            }
        }
    }
    out
}

/// Killing form matrix k(b_i, b_j) = tr(ad(b_i) ∘ ad(b_j)) over F_p.
pub fn killing_matrix(l: &LieAlgebraFp) -> FpMatrix {
    let n = l.dim();
    let p = l.p();
    let ads = ad_entries(l);
    let mut k = FpMatrix::zeros(p, n, n);
    let mut dense = vec![0u64; n * n];
    for b in 0..n {
        for &(t, s, c) in &ads[b] {
            dense[t as usize * n + s as usize] = c;
        }
        for a in 0..=b {
            // tr(M_a M_b) = Σ M_a[t][s] · M_b[s][t]
            let mut acc = 0u64;
            for &(t, s, c) in &ads[a] {
                acc = (acc + c * dense[s as usize * n + t as usize]) % p;
            }
            k.set(a, b, acc);
            k.set(b, a, acc);
        }
        for &(t, s, _) in &ads[b] {
            dense[t as usize * n + s as usize] = 0;
        }
    }
    k
}

/// The subset of the given primes p for which the Killing form of the
/// reduction mod p is singular; exactly the primes dividing det k.
pub fn killing_singular_primes(
    cb: &ChevalleyBasisZ,
    primes: &[u64],
) -> Result<Vec<u64>, ChevalleyError> {
    let mut out = Vec::new();
    for &p in primes {
        let l = cb.reduce_mod_p(p)?;
        let k = killing_matrix(&l);
        if k.rank() < l.dim() {
            out.push(p);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}
