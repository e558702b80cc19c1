//! Dimension of the derivation algebra Der(L), computed two independent
//! ways, and the inner/non-inner verdict.
//!
//! The full method imposes the Leibniz condition
//! `D[b_i,b_j] = [Db_i,b_j] + [b_i,Db_j]` on a completely general n×n
//! unknown matrix, for every unordered basis pair, and streams the
//! resulting sparse equations through the incremental eliminator. The V
//! method instead computes the space V of
//! derivations mapping the Cartan part into the center; such derivations
//! preserve every weight block, so the unknown matrix is block diagonal and
//! dim Der follows from dim Der = dim L + dim V − dim H.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan_decomp::{decompose, CartanDecomposition, DecompError};
use crate::chevalley::LieAlgebraFp;
use crate::gfp_linalg::{FpMatrix, StreamingEliminator};
use crate::liecore::{center, Subspace};
use crate::rootsys::LieType;

/// Dimension cap for the naive full system; larger algebras need an
/// explicit override (only e8 exceeds it).
pub const NAIVE_CAP: usize = 150;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DerivationsError {
    #[error("dimension {n} exceeds the naive-system cap {cap}; pass the large-system override to run it anyway")]
    CapExceeded { n: usize, cap: usize },
    #[error("derivation dimensions disagree: full system gives {full}, V method gives {vspace}")]
    MethodsDisagree { full: usize, vspace: usize },
    #[error("method requires inputs that were not computed")]
    MissingInputs,
    #[error("algebra has no designated Cartan part, V method unavailable")]
    MissingCartan,
    #[error("supplied subspace is not the center of the algebra")]
    InconsistentCenter,
    #[error("supplied decomposition does not match the algebra: {0}")]
    InconsistentDecomposition(String),
}

impl From<DecompError> for DerivationsError {
    fn from(e: DecompError) -> Self {
        DerivationsError::InconsistentDecomposition(e.to_string())
    }
}

/// How a derivation dimension was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Full,
    Vspace,
    Both,
}

impl Method {
    /// Escalation mirroring the practical cost: brute force while it is
    /// cheap, both routes in the mid range, block method alone for e8.
    pub fn auto_for_dim(n: usize) -> Method {
        if n <= 52 {
            Method::Full
        } else if n <= 133 {
            Method::Both
        } else {
            Method::Vspace
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Full => "full",
            Method::Vspace => "vspace",
            Method::Both => "both",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The result tuple for one (algebra, characteristic) cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationReport {
    pub algebra: LieType,
    pub p: u64,
    pub dim_l: usize,
    pub dim_z: usize,
    pub dim_h: usize,
    pub dim_ad: usize,
    pub dim_v: Option<usize>,
    pub dim_der: usize,
    pub method: Method,
    pub inner: bool,
}

impl DerivationReport {
    /// One line in the result-table column order.
    pub fn table_row(&self) -> String {
        format!(
            "{} {} {} {} {} {} {}",
            self.algebra,
            self.p,
            self.dim_l,
            self.dim_z,
            self.dim_ad,
            self.dim_der,
            if self.inner { "yes" } else { "no" }
        )
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.algebra,
            self.p,
            self.dim_l,
            self.dim_z,
            self.dim_ad,
            self.dim_der,
            if self.inner { "yes" } else { "no" }
        )
    }
}

/// Streams the full Leibniz system into an eliminator over the n² unknowns
/// d_{t,src} (index src·n + t).
fn full_system(l: &LieAlgebraFp) -> StreamingEliminator {
    let n = l.dim();
    let p = l.p();

    // obs[j][k] lists the pairs (t, c) with [b_t, b_j] carrying c·b_k.
    let mut obs: Vec<Vec<Vec<(u32, u64)>>> = vec![vec![Vec::new(); n]; n];
    for j in 0..n {
        for t in 0..n {
            if t == j {
                continue;
            }
            let (slice, negate) = l.pair_slice(t, j);
            for &(k, c) in slice {
                let c = if negate { p - c } else { c };
                obs[j][k as usize].push((t as u32, c));
            }
        }
    }

    let mut elim = StreamingEliminator::new(p, n * n);
    let mut row: Vec<(u32, u64)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let (bracket_ij, _) = l.pair_slice(i, j);
            for out in 0..n {
                row.clear();
                // D applied to [b_i, b_j]: Σ_m c_{ij}^m d_{out,m}
                for &(m, cm) in bracket_ij {
                    row.push((m * n as u32 + out as u32, cm));
                }
                // −[D b_i, b_j]: −c_{t,j}^out · d_{t,i}
                for &(t, c) in &obs[j][out] {
                    row.push(((i * n) as u32 + t, p - c));
                }
                // −[b_i, D b_j] = +c_{t,i}^out · d_{t,j}
                for &(t, c) in &obs[i][out] {
                    row.push(((j * n) as u32 + t, c));
                }
                if !row.is_empty() {
                    elim.push_sparse(&row);
                }
            }
        }
    }
    elim
}

/// dim Der(L) from the full Leibniz system on an unconstrained n×n matrix.
pub fn derivations_full(l: &LieAlgebraFp, allow_large: bool) -> Result<usize, DerivationsError> {
    let n = l.dim();
    if n > NAIVE_CAP && !allow_large {
        return Err(DerivationsError::CapExceeded { n, cap: NAIVE_CAP });
    }
    Ok(full_system(l).solution_dim())
}

/// The full derivation space as explicit matrices (columns are images of
/// basis vectors). Intended for the smaller algebras.
pub fn derivations_full_basis(
    l: &LieAlgebraFp,
    allow_large: bool,
) -> Result<Vec<FpMatrix>, DerivationsError> {
    let n = l.dim();
    if n > NAIVE_CAP && !allow_large {
        return Err(DerivationsError::CapExceeded { n, cap: NAIVE_CAP });
    }
    let p = l.p();
    let mats = full_system(l)
        .kernel_basis()
        .into_iter()
        .map(|v| {
            let mut m = FpMatrix::zeros(p, n, n);
            for src in 0..n {
                for t in 0..n {
                    m.set(t, src, v[src * n + t]);
                }
            }
            m
        })
        .collect();
    Ok(mats)
}

/// dim V: derivations mapping the Cartan part into the center. The unknowns
/// are one square matrix per weight block plus an arbitrary linear map
/// H → Z; Leibniz is imposed on all basis pairs.
pub fn derivations_v(
    l: &LieAlgebraFp,
    d: &CartanDecomposition,
    z: &Subspace,
) -> Result<usize, DerivationsError> {
    let n = l.dim();
    let p = l.p();
    // Cross-check the inputs against the algebra before trusting them.
    let fresh = decompose(l)?;
    if fresh.cartan_indices != d.cartan_indices || fresh.blocks != d.blocks {
        return Err(DerivationsError::InconsistentDecomposition(
            "weight blocks do not match the algebra".into(),
        ));
    }
    if !d.zero_class.is_empty() {
        // A zero-weight block would not be preserved by d (its image may
        // also meet the Cartan span), so the block-diagonal shape would
        // undercount V. Never the case for Chevalley reductions.
        return Err(DerivationsError::InconsistentDecomposition(
            "zero-weight basis vectors present; the block shape does not apply".into(),
        ));
    }
    if center(l) != *z {
        return Err(DerivationsError::InconsistentCenter);
    }

    let r = d.cartan_indices.len();
    let zdim = z.dim();
    let y_total = r * zdim;
    let mut unknowns = y_total;
    let mut block_base = Vec::with_capacity(d.blocks.len());
    for b in &d.blocks {
        block_base.push(unknowns);
        unknowns += b.members.len() * b.members.len();
    }

    // Symbolic image of each basis vector: list of (target, unknown, coeff).
    let mut dcol: Vec<Vec<(u32, u32, u64)>> = vec![Vec::new(); n];
    for (i, &c) in d.cartan_indices.iter().enumerate() {
        for (tz, zvec) in z.basis().iter().enumerate() {
            let unk = (i * zdim + tz) as u32;
            for (pos, &val) in zvec.iter().enumerate() {
                if val != 0 {
                    dcol[c].push((pos as u32, unk, val));
                }
            }
        }
    }
    for (b, block) in d.blocks.iter().enumerate() {
        let s = block.members.len();
        for (v, &mv) in block.members.iter().enumerate() {
            for (u, &mu) in block.members.iter().enumerate() {
                dcol[mv].push((mu as u32, (block_base[b] + u * s + v) as u32, 1));
            }
        }
    }

    let mut elim = StreamingEliminator::new(p, unknowns);
    let mut contrib: Vec<(u32, u32, u64)> = Vec::new();
    let mut row: Vec<(u32, u64)> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            contrib.clear();
            let (bracket_ij, _) = l.pair_slice(i, j);
            for &(m, cm) in bracket_ij {
                for &(t, unk, cf) in &dcol[m as usize] {
                    contrib.push((t, unk, cm * cf % p));
                }
            }
            for &(t, unk, cf) in &dcol[i] {
                let (slice, negate) = l.pair_slice(t as usize, j);
                for &(lt, c2) in slice {
                    let c2 = if negate { p - c2 } else { c2 };
                    contrib.push((lt, unk, (p - c2) * cf % p));
                }
            }
            for &(t, unk, cf) in &dcol[j] {
                let (slice, negate) = l.pair_slice(i, t as usize);
                for &(lt, c2) in slice {
                    let c2 = if negate { p - c2 } else { c2 };
                    contrib.push((lt, unk, (p - c2) * cf % p));
                }
            }
            if contrib.is_empty() {
                continue;
            }
            contrib.sort_unstable_by_key(|&(t, _, _)| t);
            let mut start = 0;
            while start < contrib.len() {
                let t = contrib[start].0;
                let mut end = start;
                row.clear();
                while end < contrib.len() && contrib[end].0 == t {
                    row.push((contrib[end].1, contrib[end].2));
                    end += 1;
                }
                elim.push_sparse(&row);
                start = end;
            }
        }
    }
    Ok(elim.solution_dim())
}

/// dim {x : [x, H] ⊆ Z}. Always comes out as dim H for these algebras.
pub fn ad_v_intersection_dim(l: &LieAlgebraFp, d: &CartanDecomposition, z: &Subspace) -> usize {
    let n = l.dim();
    let p = l.p();
    let mut elim = StreamingEliminator::new(p, n);
    // Pivot positions of the center's echelon basis.
    let z_pivots: Vec<usize> = z
        .basis()
        .iter()
        .map(|v| {
            v.iter()
                .position(|&x| x != 0)
                .expect("echelon rows are nonzero")
        })
        .collect();
    let mut bmat = vec![0u64; n * n];
    for &c in &d.cartan_indices {
        // B[t][k] = coefficient of b_t in [b_k, b_c].
        bmat.iter_mut().for_each(|x| *x = 0);
        for k in 0..n {
            if k == c {
                continue;
            }
            let (slice, negate) = l.pair_slice(k, c);
            for &(t, cv) in slice {
                let cv = if negate { p - cv } else { cv };
                bmat[t as usize * n + k] = cv;
            }
        }
        // Quotient by Z: subtract ζ_z[t] times the pivot rows.
        for t in 0..n {
            let mut row: Vec<u64> = bmat[t * n..(t + 1) * n].to_vec();
            for (zv, &pz) in z.basis().iter().zip(&z_pivots) {
                let coef = zv[t];
                if coef != 0 {
                    for k in 0..n {
                        row[k] = (row[k] + (p - coef) * bmat[pz * n + k]) % p;
                    }
                }
            }
            elim.push_dense(&row);
        }
    }
    elim.solution_dim()
}

/// Assembles a [`DerivationReport`] from computed dimensions, enforcing the
/// cross-checks: when both routes ran they must agree, never reconciled.
#[allow(clippy::too_many_arguments)]
pub fn der_dimension(
    algebra: LieType,
    p: u64,
    dim_l: usize,
    dim_z: usize,
    dim_h: usize,
    dim_v: Option<usize>,
    dim_der_full: Option<usize>,
    method: Method,
) -> Result<DerivationReport, DerivationsError> {
    let dim_ad = dim_l - dim_z;
    let from_v = dim_v.map(|v| dim_l + v - dim_h);
    let dim_der = match (method, dim_der_full, from_v) {
        (Method::Full, Some(f), _) => f,
        (Method::Vspace, _, Some(v)) => v,
        (Method::Both, Some(f), Some(v)) => {
            if f != v {
                return Err(DerivationsError::MethodsDisagree { full: f, vspace: v });
            }
            f
        }
        _ => return Err(DerivationsError::MissingInputs),
    };
    Ok(DerivationReport {
        algebra,
        p,
        dim_l,
        dim_z,
        dim_h,
        dim_ad,
        dim_v,
        dim_der,
        method,
        inner: dim_der == dim_ad,
    })
}

/// Runs the requested method(s) on an algebra and assembles the report.
/// The V method needs a designated Cartan part; the full method works on
/// any table (generator-pipeline algebras included).
pub fn analyze(
    ty: LieType,
    l: &LieAlgebraFp,
    method: Method,
    allow_large: bool,
) -> Result<DerivationReport, DerivationsError> {
    let dim_l = l.dim();
    let dim_z = center(l).dim();
    let dim_h = l.cartan_indices().map_or(ty.rank(), <[usize]>::len);
    let needs_v = matches!(method, Method::Vspace | Method::Both);
    let dim_v = if needs_v {
        if l.cartan_indices().is_none() {
            return Err(DerivationsError::MissingCartan);
        }
        let d = decompose(l)?;
        let z = center(l);
        Some(derivations_v(l, &d, &z)?)
    } else {
        None
    };
    let full = if matches!(method, Method::Full | Method::Both) {
        Some(derivations_full(l, allow_large)?)
    } else {
        None
    };
    der_dimension(ty, l.p(), dim_l, dim_z, dim_h, dim_v, full, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan_decomp::decompose;
    use crate::chevalley::structure_constants;
    use crate::liecore::killing_matrix;
    use crate::rootsys::{LieType, RootSystem};

    fn algebra(t: LieType, p: u64) -> LieAlgebraFp {
        structure_constants(&RootSystem::new(t))
            .unwrap()
            .reduce_mod_p(p)
            .unwrap()
    }

    #[test]
    fn g2_full_derivations() {
        assert_eq!(
            derivations_full(&algebra(LieType::G2, 2), false).unwrap(),
            21
        );
        assert_eq!(
            derivations_full(&algebra(LieType::G2, 3), false).unwrap(),
            14
        );
    }

    #[test]
    fn f4_full_derivations() {
        assert_eq!(
            derivations_full(&algebra(LieType::F4, 2), false).unwrap(),
            52
        );
        assert_eq!(
            derivations_full(&algebra(LieType::F4, 3), false).unwrap(),
            52
        );
    }

    #[test]
    fn g2_vspace_dimensions() {
        let l2 = algebra(LieType::G2, 2);
        let d2 = decompose(&l2).unwrap();
        let z2 = center(&l2);
        // Forced by dim Der = dim L + dim V − dim H: 21 = 14 + 9 − 2.
        assert_eq!(derivations_v(&l2, &d2, &z2).unwrap(), 9);

        let l3 = algebra(LieType::G2, 3);
        let d3 = decompose(&l3).unwrap();
        let z3 = center(&l3);
        // 14 = 14 + 2 − 2.
        assert_eq!(derivations_v(&l3, &d3, &z3).unwrap(), 2);
    }

    #[test]
    fn ad_v_intersection_equals_rank() {
        for (t, p) in [
            (LieType::G2, 2),
            (LieType::G2, 3),
            (LieType::F4, 2),
            (LieType::E6, 3),
        ] {
            let l = algebra(t, p);
            let d = decompose(&l).unwrap();
            let z = center(&l);
            assert_eq!(
                ad_v_intersection_dim(&l, &d, &z),
                t.rank(),
                "type {t}, p={p}"
            );
        }
    }

    #[test]
    fn zassenhaus_holds_where_killing_is_nondegenerate() {
        for p in [5u64, 7] {
            let l = algebra(LieType::G2, p);
            assert_eq!(killing_matrix(&l).rank(), 14);
            assert_eq!(derivations_full(&l, false).unwrap(), 14);
        }
    }

    #[test]
    fn analyze_both_methods_agree_on_g2() {
        let l = algebra(LieType::G2, 2);
        let report = analyze(LieType::G2, &l, Method::Both, false).unwrap();
        assert_eq!(report.dim_der, 21);
        assert_eq!(report.dim_v, Some(9));
        assert_eq!(report.dim_ad, 14);
        assert!(!report.inner);
        assert_eq!(report.table_row(), "g2 2 14 0 14 21 no");
    }

    #[test]
    fn disagreement_is_a_hard_failure() {
        let err = der_dimension(LieType::G2, 2, 14, 0, 2, Some(8), Some(21), Method::Both);
        assert_eq!(
            err,
            Err(DerivationsError::MethodsDisagree {
                full: 21,
                vspace: 20
            })
        );
    }

    #[test]
    fn cap_blocks_oversized_naive_systems() {
        let l = algebra(LieType::E8, 2);
        assert_eq!(
            derivations_full(&l, false),
            Err(DerivationsError::CapExceeded {
                n: 248,
                cap: NAIVE_CAP
            })
        );
    }

    #[test]
    fn derivation_space_contains_ad_and_is_closed_under_commutator() {
        let l = algebra(LieType::G2, 2);
        let p = l.p();
        let n = l.dim();
        let ders = derivations_full_basis(&l, false).unwrap();
        assert_eq!(ders.len(), 21);
        let rows: Vec<Vec<u64>> = ders
            .iter()
            .map(|m| {
                let mut v = Vec::with_capacity(n * n);
                for src in 0..n {
                    for t in 0..n {
                        v.push(m.get(t, src));
                    }
                }
                v
            })
            .collect();
        let base_rank = FpMatrix::from_rows(p, &rows).rank();
        assert_eq!(base_rank, 21);

        // Membership of every ad(b_i): appending it must not raise the rank.
        for i in 0..n {
            let mut x = vec![0u64; n];
            x[i] = 1;
            let ad = crate::liecore::ad_matrix(&l, &x).unwrap();
            let mut stacked = rows.clone();
            let mut v = Vec::with_capacity(n * n);
            for src in 0..n {
                for t in 0..n {
                    v.push(ad.get(t, src));
                }
            }
            stacked.push(v);
            assert_eq!(FpMatrix::from_rows(p, &stacked).rank(), 21);
        }

        // Closure under the matrix commutator.
        let mut stacked = rows.clone();
        for a in 0..ders.len() {
            for b in (a + 1)..ders.len() {
                let mut comm = vec![0u64; n * n];
                for src in 0..n {
                    for t in 0..n {
                        let mut acc = 0u64;
                        for k in 0..n {
                            acc = (acc + ders[a].get(t, k) * ders[b].get(k, src)) % p;
                            acc =
                                (acc + (p - 1) * (ders[b].get(t, k) * ders[a].get(k, src) % p)) % p;
                        }
                        comm[src * n + t] = acc;
                    }
                }
                stacked.push(comm);
            }
        }
        assert_eq!(FpMatrix::from_rows(p, &stacked).rank(), 21);
    }

    #[test]
    fn derivation_dimension_survives_basis_rescaling() {
        // v_α ↦ c·v_α rescales c_{ij}^k by c_i c_j / c_k on root positions.
        let l = algebra(LieType::G2, 5);
        let n = l.dim();
        let p = l.p();
        let mut scale = vec![1u64; n];
        scale[3] = 2; // one root vector rescaled by a unit
        scale[3 + 6] = 3; // and its opposite by an unrelated unit
        let inv: Vec<u64> = scale
            .iter()
            .map(|&c| crate::gfp_linalg::mod_inverse(c, p))
            .collect();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for (k, c) in l.bracket_basis(i, j) {
                    entries.push((i, j, k, c * scale[i] % p * scale[j] % p * inv[k] % p));
                }
            }
        }
        let rescaled =
            LieAlgebraFp::from_table(p, n, &entries, l.cartan_indices().map(<[usize]>::to_vec))
                .unwrap();
        assert!(rescaled.verify_jacobi().is_ok());
        assert_eq!(
            derivations_full(&rescaled, false).unwrap(),
            derivations_full(&l, false).unwrap()
        );
        assert_eq!(center(&rescaled).dim(), center(&l).dim());
    }

    #[test]
    fn full_system_agrees_with_dense_elimination_on_g2() {
        // Independent oracle for the streaming path: stack the very same
        // Leibniz equations densely and take the dense rref nullity.
        let l = algebra(LieType::G2, 2);
        let n = l.dim();
        let p = l.p();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for out in 0..n {
                    let mut row = vec![0u64; n * n];
                    for (m, cm) in l.bracket_basis(i, j) {
                        row[m * n + out] = (row[m * n + out] + cm) % p;
                    }
                    for t in 0..n {
                        for (k, c) in l.bracket_basis(t, j) {
                            if k == out {
                                row[i * n + t] = (row[i * n + t] + p - c) % p;
                            }
                        }
                        for (k, c) in l.bracket_basis(i, t) {
                            if k == out {
                                row[t + j * n] = (row[t + j * n] + p - c) % p;
                            }
                        }
                    }
                    if row.iter().any(|&x| x != 0) {
                        rows.push(row);
                    }
                }
            }
        }
        let dense = FpMatrix::from_rows(p, &rows);
        let (_, rank) = dense.rref();
        assert_eq!(n * n - rank, 21);
        assert_eq!(derivations_full(&l, false).unwrap(), 21);
    }

    #[test]
    fn dimensions_are_independent_of_the_sign_convention() {
        // Flip one extraspecial sign in g2 and rerun: center, Killing rank
        // and derivation dimensions must not move.
        let rs = RootSystem::new(LieType::G2);
        let gamma = (0..rs.num_positive())
            .find(|&g| rs.root(g).height > 1)
            .unwrap();
        let flipped = crate::chevalley::structure_constants_with_flips(&rs, &[gamma]).unwrap();
        let base = structure_constants(&rs).unwrap();
        for p in [2u64, 3] {
            let lf = flipped.reduce_mod_p(p).unwrap();
            let lb = base.reduce_mod_p(p).unwrap();
            assert_eq!(center(&lf).dim(), center(&lb).dim());
            assert_eq!(killing_matrix(&lf).rank(), killing_matrix(&lb).rank());
            assert_eq!(
                derivations_full(&lf, false).unwrap(),
                derivations_full(&lb, false).unwrap()
            );
        }
    }

    #[test]
    fn report_serializes_and_round_trips() {
        let l = algebra(LieType::G2, 3);
        let report = analyze(LieType::G2, &l, Method::Both, false).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        let back: DerivationReport = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        assert!(json.contains("\"method\":\"both\""));
        assert!(json.contains("\"algebra\":\"g2\""));
    }

    #[test]
    fn auto_method_escalation() {
        assert_eq!(Method::auto_for_dim(14), Method::Full);
        assert_eq!(Method::auto_for_dim(52), Method::Full);
        assert_eq!(Method::auto_for_dim(78), Method::Both);
        assert_eq!(Method::auto_for_dim(133), Method::Both);
        assert_eq!(Method::auto_for_dim(248), Method::Vspace);
    }
}
