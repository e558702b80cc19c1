//! Integer structure constants of the Chevalley basis {h_1..h_r} ∪ {v_α},
//! and their reduction to a Lie algebra over F_p.
//!
//! The table satisfies the four defining properties: `[h_i,h_j] = 0`,
//! `[h_i,v_α] = <α,α_i>·v_α`, `[v_α,v_{-α}] = h_α` with integer coroot
//! coefficients, and `[v_α,v_β] = ±(r+1)·v_{α+β}` where r comes from the
//! α-string through β. Signs are anchored on extraspecial pairs (the
//! lexicographically first decomposition of each positive root) and
//! propagated through the standard rational identities; the constructor then
//! certifies the result by an exhaustive Jacobi check over ℤ.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::gfp_linalg::is_prime;
use crate::rootsys::RootSystem;

#[derive(Debug, Error)]
pub enum ChevalleyError {
    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),
    #[error("structure-constant bookkeeping failed: {0}")]
    Inconsistent(String),
    #[error("{0} is not a prime in [2, 2^31)")]
    BadModulus(u64),
    #[error("basis index out of range: {0}")]
    BadIndex(usize),
}

/// Index of the (i,j) slot, i < j, in a flat upper-triangular pair table.
#[inline]
pub(crate) fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// The integer Chevalley basis of an exceptional type.
///
/// Basis order: positions 0..r are the Cartan generators h_1..h_r, position
/// r+t is v_α for the t-th root of the underlying [`RootSystem`].
#[derive(Debug, Clone)]
pub struct ChevalleyBasisZ {
    rs: RootSystem,
    n: usize,
    n_consts: HashMap<(u32, u32), i64>,
    coroots: Vec<Vec<i64>>,
    /// Bracket table for basis pairs i < j, entries sorted by target index.
    pairs: Vec<Vec<(u32, i64)>>,
}

/// Computes the structure constants with the default sign convention
/// (+(r+1) on every extraspecial pair).
pub fn structure_constants(rs: &RootSystem) -> Result<ChevalleyBasisZ, ChevalleyError> {
    structure_constants_with_flips(rs, &[])
}

/// Same as [`structure_constants`], but with the extraspecial sign negated
/// for the listed positive roots. Any choice of extraspecial signs yields an
/// isomorphic algebra; this entry point exists so tests can demonstrate that
/// the computed dimensions do not depend on the convention.
pub fn structure_constants_with_flips(
    rs: &RootSystem,
    flipped: &[usize],
) -> Result<ChevalleyBasisZ, ChevalleyError> {
    let m = rs.num_positive();
    let rank = rs.rank();
    let flipped: HashSet<usize> = flipped.iter().copied().collect();

    // N_{α,β} for positive pairs, 0 = not yet assigned.
    let mut npos = vec![vec![0i64; m]; m];

    // N for arbitrary root indices (positives 0..m, negatives m..2m), using
    // the reflection identities to reduce mixed-sign pairs to positive pairs
    // whose sums have smaller height. Returns 0 when α+β is not a root.
    fn n_any(rs: &RootSystem, npos: &[Vec<i64>], m: usize, x: usize, y: usize) -> i64 {
        let sum: Vec<i64> = rs
            .root(x)
            .coords
            .iter()
            .zip(&rs.root(y).coords)
            .map(|(a, b)| a + b)
            .collect();
        let Some(s) = rs.root_index(&sum) else {
            return 0;
        };
        let xp = x < m;
        let yp = y < m;
        match (xp, yp) {
            (true, true) => {
                debug_assert_ne!(x, y);
                if x < y {
                    npos[x][y]
                } else {
                    -npos[y][x]
                }
            }
            (false, false) => -n_any(rs, npos, m, rs.neg(x), rs.neg(y)),
            (true, false) => mixed_n(rs, npos, m, x, y, s),
            (false, true) => -mixed_n(rs, npos, m, y, x, s),
        }
    }

    // a positive, b negative, s = index of a+b. From the identity
    // N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y) for x+y+z = 0.
    fn mixed_n(rs: &RootSystem, npos: &[Vec<i64>], m: usize, a: usize, b: usize, s: usize) -> i64 {
        let d = rs.neg(b);
        if s < m {
            // a = d + s with d, s positive: N_{a,-d} = -N_{d,s}·(s,s)/(a,a)
            let nds = if d < s { npos[d][s] } else { -npos[s][d] };
            debug_assert_ne!(nds, 0);
            let num = -nds * rs.norm2(s);
            let den = rs.norm2(a);
            debug_assert_eq!(num % den, 0);
            num / den
        } else {
            // d = e + a with e = -s positive: N_{a,-d} = N_{e,a}·(e,e)/(d,d)
            let e = rs.neg(s);
            let nea = if e < a { npos[e][a] } else { -npos[a][e] };
            debug_assert_ne!(nea, 0);
            let num = nea * rs.norm2(e);
            let den = rs.norm2(d);
            debug_assert_eq!(num % den, 0);
            num / den
        }
    }

    // Positive roots come sorted by (height, lex), so ascending index order
    // is an induction on height. For each non-simple γ, anchor the sign on
    // its extraspecial pair and derive every other special pair from the
    // Jacobi identity on (v_{β1}, v_{-α}, v_{-β}).
    for gamma in 0..m {
        if rs.root(gamma).height == 1 {
            continue;
        }
        let gcoords = &rs.root(gamma).coords;
        let mut specials: Vec<(usize, usize)> = Vec::new();
        for a in 0..m {
            let rest: Vec<i64> = gcoords
                .iter()
                .zip(&rs.root(a).coords)
                .map(|(g, x)| g - x)
                .collect();
            if let Some(b) = rs.root_index(&rest) {
                if b < m && a < b {
                    specials.push((a, b));
                }
            }
        }
        let Some(&(a1, b1)) = specials.first() else {
            return Err(ChevalleyError::Inconsistent(format!(
                "positive root {gamma} has no decomposition into positive roots"
            )));
        };
        let (r_str, _) = rs
            .alpha_string(a1, b1)
            .map_err(|e| ChevalleyError::Inconsistent(e.to_string()))?;
        let sign = if flipped.contains(&gamma) { -1 } else { 1 };
        npos[a1][b1] = sign * (r_str + 1);

        for &(alpha, beta) in &specials[1..] {
            let t = n_any(rs, &npos, m, b1, rs.neg(gamma));
            if t == 0 {
                return Err(ChevalleyError::Inconsistent(format!(
                    "vanishing anchor constant for root {gamma}"
                )));
            }
            let mut num = 0i64;
            let diff_bb: Vec<i64> = rs
                .root(b1)
                .coords
                .iter()
                .zip(&rs.root(beta).coords)
                .map(|(x, y)| x - y)
                .collect();
            if let Some(d_idx) = rs.root_index(&diff_bb) {
                num += n_any(rs, &npos, m, rs.neg(beta), b1)
                    * n_any(rs, &npos, m, rs.neg(alpha), d_idx);
            }
            let diff_ba: Vec<i64> = rs
                .root(b1)
                .coords
                .iter()
                .zip(&rs.root(alpha).coords)
                .map(|(x, y)| x - y)
                .collect();
            if let Some(e_idx) = rs.root_index(&diff_ba) {
                num += n_any(rs, &npos, m, b1, rs.neg(alpha))
                    * n_any(rs, &npos, m, rs.neg(beta), e_idx);
            }
            if num % t != 0 {
                return Err(ChevalleyError::Inconsistent(format!(
                    "non-integral constant for pair ({alpha}, {beta})"
                )));
            }
            let val = num / t;
            let (r_ab, _) = rs
                .alpha_string(alpha, beta)
                .map_err(|e| ChevalleyError::Inconsistent(e.to_string()))?;
            if val.abs() != r_ab + 1 {
                return Err(ChevalleyError::Inconsistent(format!(
                    "|N| = {} but the α-string through β gives r+1 = {} for pair ({alpha}, {beta})",
                    val.abs(),
                    r_ab + 1
                )));
            }
            npos[alpha][beta] = val;
        }
    }

    // Full N map over all ordered root pairs with α+β ∈ Φ, with the string
    // law |N| = r+1 checked on every one of them.
    let total = rs.num_roots();
    let mut n_consts: HashMap<(u32, u32), i64> = HashMap::new();
    for x in 0..total {
        for y in 0..total {
            if x == y || y == rs.neg(x) {
                continue;
            }
            let val = n_any(rs, &npos, m, x, y);
            if val != 0 {
                let (r_str, _) = rs
                    .alpha_string(x, y)
                    .map_err(|e| ChevalleyError::Inconsistent(e.to_string()))?;
                if val.abs() != r_str + 1 {
                    return Err(ChevalleyError::Inconsistent(format!(
                        "|N| = {} but r+1 = {} for root pair ({x}, {y})",
                        val.abs(),
                        r_str + 1
                    )));
                }
                n_consts.insert((x as u32, y as u32), val);
            } else {
                let sum: Vec<i64> = rs
                    .root(x)
                    .coords
                    .iter()
                    .zip(&rs.root(y).coords)
                    .map(|(a, b)| a + b)
                    .collect();
                if rs.root_index(&sum).is_some() {
                    return Err(ChevalleyError::Inconsistent(format!(
                        "vanishing constant on root pair ({x}, {y}) with α+β ∈ Φ"
                    )));
                }
            }
        }
    }

    // Coroot coefficient vectors: h_α = Σ_j c_j h_j with c_j = a_j(α_j,α_j)/(α,α).
    let mut coroots = Vec::with_capacity(total);
    for t in 0..total {
        coroots.push(coroot_coeffs(rs, t)?);
    }

    // Assemble the bracket table.
    let n = rank + total;
    let mut pairs: Vec<Vec<(u32, i64)>> = vec![Vec::new(); n * (n - 1) / 2];
    for i in 0..rank {
        for t in 0..total {
            let c = rs.pairing_with_simple(t, i);
            if c != 0 {
                pairs[pair_index(i, rank + t, n)].push(((rank + t) as u32, c));
            }
        }
    }
    for s in 0..total {
        for t in (s + 1)..total {
            let slot = &mut pairs[pair_index(rank + s, rank + t, n)];
            if t == rs.neg(s) {
                // s is positive here (positives precede negatives).
                for (j, &c) in coroots[s].iter().enumerate() {
                    if c != 0 {
                        slot.push((j as u32, c));
                    }
                }
            } else if let Some(&nv) = n_consts.get(&(s as u32, t as u32)) {
                let sum: Vec<i64> = rs
                    .root(s)
                    .coords
                    .iter()
                    .zip(&rs.root(t).coords)
                    .map(|(a, b)| a + b)
                    .collect();
                let u = rs.root_index(&sum).expect("nonzero N implies α+β ∈ Φ");
                slot.push(((rank + u) as u32, nv));
            }
        }
    }

    let cb = ChevalleyBasisZ {
        rs: rs.clone(),
        n,
        n_consts,
        coroots,
        pairs,
    };
    cb.verify_jacobi()?;
    Ok(cb)
}

/// Coefficients of h_α in the basis h_1..h_r.
pub fn coroot_coeffs(rs: &RootSystem, root_idx: usize) -> Result<Vec<i64>, ChevalleyError> {
    if root_idx >= rs.num_roots() {
        return Err(ChevalleyError::BadIndex(root_idx));
    }
    let norm = rs.norm2(root_idx);
    rs.root(root_idx)
        .coords
        .iter()
        .enumerate()
        .map(|(j, &aj)| {
            let simple = {
                let mut c = vec![0i64; rs.rank()];
                c[j] = 1;
                rs.root_index(&c).expect("simple roots are roots")
            };
            let num = aj * rs.norm2(simple);
            if num % norm != 0 {
                return Err(ChevalleyError::Inconsistent(format!(
                    "non-integral coroot coefficient for root {root_idx}"
                )));
            }
            Ok(num / norm)
        })
        .collect()
}

impl ChevalleyBasisZ {
    pub fn rs(&self) -> &RootSystem {
        &self.rs
    }

    /// Total basis dimension rank + |Φ|.
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    /// N_{α,β} by root index; 0 when α+β is not a root.
    pub fn n_constant(&self, alpha: usize, beta: usize) -> i64 {
        self.n_consts
            .get(&(alpha as u32, beta as u32))
            .copied()
            .unwrap_or(0)
    }

    /// Coefficients of h_α = [v_α, v_{-α}] in the h basis.
    pub fn coroot(&self, root_idx: usize) -> &[i64] {
        &self.coroots[root_idx]
    }

    /// Bracket of basis elements i, j as (target, coefficient) pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        let (slice, negate) = self.pair_slice(i, j);
        slice
            .iter()
            .map(|&(k, c)| (k as usize, if negate { -c } else { c }))
            .collect()
    }

    #[inline]
    pub(crate) fn pair_slice(&self, i: usize, j: usize) -> (&[(u32, i64)], bool) {
        if i == j {
            (&[], false)
        } else if i < j {
            (&self.pairs[pair_index(i, j, self.n)], false)
        } else {
            (&self.pairs[pair_index(j, i, self.n)], true)
        }
    }

    /// Exhaustive Jacobi check over ℤ for all basis triples.
    pub fn verify_jacobi(&self) -> Result<(), ChevalleyError> {
        let n = self.n;
        let mut acc = vec![0i64; n];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let (inner, neg_inner) = self.pair_slice(a, b);
                        for &(t, ct) in inner {
                            let ct = if neg_inner { -ct } else { ct };
                            let (outer, neg_outer) = self.pair_slice(t as usize, c);
                            for &(u, cu) in outer {
                                let cu = if neg_outer { -cu } else { cu };
                                if acc[u as usize] == 0 {
                                    touched.push(u);
                                }
                                acc[u as usize] += ct * cu;
                            }
                        }
                    }
                    let mut ok = true;
                    for &u in &touched {
                        if acc[u as usize] != 0 {
                            ok = false;
                        }
                        acc[u as usize] = 0;
                    }
                    touched.clear();
                    if !ok {
                        return Err(ChevalleyError::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Reduces the table mod p, producing the Chevalley algebra over F_p
    /// with the h-span designated as Cartan part.
    pub fn reduce_mod_p(&self, p: u64) -> Result<LieAlgebraFp, ChevalleyError> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(ChevalleyError::BadModulus(p));
        }
        let pairs: Vec<Vec<(u32, u64)>> = self
            .pairs
            .iter()
            .map(|slot| {
                slot.iter()
                    .filter_map(|&(k, c)| {
                        let v = c.rem_euclid(p as i64) as u64;
                        (v != 0).then_some((k, v))
                    })
                    .collect()
            })
            .collect();
        Ok(LieAlgebraFp {
            p,
            n: self.n,
            pairs,
            cartan_indices: Some((0..self.rank()).collect()),
        })
    }

    /// Structure-constant dump: lines `i j k c` (1-based, lexicographic),
    /// both orientations of every pair.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let (slice, negate) = self.pair_slice(i, j);
                for &(k, c) in slice {
                    let c = if negate { -c } else { c };
                    out.push_str(&format!("{} {} {} {}\n", i + 1, j + 1, k as usize + 1, c));
                }
            }
        }
        out
    }
}

/// A finite-dimensional Lie algebra over F_p given by a sparse
/// structure-constant table (antisymmetry implicit in the storage).
#[derive(Debug, Clone)]
pub struct LieAlgebraFp {
    p: u64,
    n: usize,
    pairs: Vec<Vec<(u32, u64)>>,
    cartan_indices: Option<Vec<usize>>,
}

impl LieAlgebraFp {
    /// Builds an algebra from explicit entries `(i, j, k, c)` with i < j,
    /// meaning `[b_i, b_j] = Σ c·b_k`. Entries are reduced mod p and zero
    /// results dropped; antisymmetry is supplied by construction.
    pub fn from_table(
        p: u64,
        n: usize,
        entries: &[(usize, usize, usize, u64)],
        cartan_indices: Option<Vec<usize>>,
    ) -> Result<Self, ChevalleyError> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(ChevalleyError::BadModulus(p));
        }
        let mut pairs: Vec<Vec<(u32, u64)>> = vec![Vec::new(); n * (n - 1) / 2];
        for &(i, j, k, c) in entries {
            if i >= j || j >= n || k >= n {
                return Err(ChevalleyError::BadIndex(j.max(k)));
            }
            let v = c % p;
            if v != 0 {
                pairs[pair_index(i, j, n)].push((k as u32, v));
            }
        }
        for slot in &mut pairs {
            slot.sort_unstable_by_key(|&(k, _)| k);
        }
        if let Some(ci) = &cartan_indices {
            if ci.iter().any(|&c| c >= n) {
                return Err(ChevalleyError::BadIndex(n));
            }
        }
        Ok(LieAlgebraFp {
            p,
            n,
            pairs,
            cartan_indices,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Basis positions spanning the designated Cartan part, if one is set.
    pub fn cartan_indices(&self) -> Option<&[usize]> {
        self.cartan_indices.as_deref()
    }

    #[inline]
    pub(crate) fn pair_slice(&self, i: usize, j: usize) -> (&[(u32, u64)], bool) {
        if i == j {
            (&[], false)
        } else if i < j {
            (&self.pairs[pair_index(i, j, self.n)], false)
        } else {
            (&self.pairs[pair_index(j, i, self.n)], true)
        }
    }

    /// Bracket of basis elements i and j as (target, residue) pairs.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, u64)> {
        let (slice, negate) = self.pair_slice(i, j);
        slice
            .iter()
            .map(|&(k, c)| (k as usize, if negate { self.p - c } else { c }))
            .collect()
    }

    /// Exhaustive Jacobi check over F_p; returns the first violating triple.
    pub fn verify_jacobi(&self) -> Result<(), (usize, usize, usize)> {
        let n = self.n;
        let p = self.p;
        let mut acc = vec![0u64; n];
        let mut touched: Vec<u32> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let (inner, neg_inner) = self.pair_slice(a, b);
                        for &(t, ct) in inner {
                            let ct = if neg_inner { p - ct } else { ct };
                            let (outer, neg_outer) = self.pair_slice(t as usize, c);
                            for &(u, cu) in outer {
                                let cu = if neg_outer { p - cu } else { cu };
                                if acc[u as usize] == 0 {
                                    touched.push(u);
                                }
                                acc[u as usize] = (acc[u as usize] + ct * cu) % p;
                            }
                        }
                    }
                    let mut ok = true;
                    for &u in &touched {
                        if acc[u as usize] != 0 {
                            ok = false;
                        }
                        acc[u as usize] = 0;
                    }
                    touched.clear();
                    if !ok {
                        return Err((i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    /// Structure-constant dump, same `i j k c` format as the ℤ table with
    /// least nonnegative residues.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if i == j {
                    continue;
                }
                let (slice, negate) = self.pair_slice(i, j);
                for &(k, c) in slice {
                    let c = if negate { self.p - c } else { c };
                    out.push_str(&format!("{} {} {} {}\n", i + 1, j + 1, k as usize + 1, c));
                }
            }
        }
        out
    }
}
