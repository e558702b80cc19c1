//! Weight-space decomposition of a Chevalley algebra over F_p relative to
//! its designated Cartan part.
//!
//! Every non-Cartan basis vector b_j is a simultaneous eigenvector of the
//! maps ad(h) for h in the Cartan span; its weight is the tuple of
//! eigenvalues mod p. Basis vectors sharing a weight tuple form one block —
//! a root space of the modular algebra, possibly fusing several
//! characteristic-zero roots when p divides their pairing differences.

use thiserror::Error;

use crate::chevalley::LieAlgebraFp;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DecompError {
    #[error("algebra has no designated Cartan part")]
    MissingCartan,
    #[error("Cartan part is not abelian: [b_{0}, b_{1}] ≠ 0")]
    NonAbelianCartan(usize, usize),
    #[error("ad(b_{h}) is not diagonal on basis vector b_{j}; basis not adapted to H")]
    NotDiagonal { h: usize, j: usize },
}

/// One weight class: the basis positions carrying the same eigenvalue tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub weight: Vec<u64>,
    pub members: Vec<usize>,
}

/// Grouping of the basis into the Cartan part and weight blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDecomposition {
    pub cartan_indices: Vec<usize>,
    /// Weight tuple of each non-Cartan basis position (None on Cartan ones).
    pub weights: Vec<Option<Vec<u64>>>,
    /// Blocks ordered by their smallest member.
    pub blocks: Vec<Block>,
    /// Non-Cartan positions whose weight tuple is zero (empty in every case
    /// this crate targets).
    pub zero_class: Vec<usize>,
}

/// Splits the basis into ad(H)-eigenspaces keyed by weight tuple.
pub fn decompose(l: &LieAlgebraFp) -> Result<CartanDecomposition, DecompError> {
    let cartan: Vec<usize> = l
        .cartan_indices()
        .ok_or(DecompError::MissingCartan)?
        .to_vec();
    let n = l.dim();
    let p = l.p();
    for (a, &ca) in cartan.iter().enumerate() {
        for &cb in &cartan[a + 1..] {
            let (slice, _) = l.pair_slice(ca, cb);
            if !slice.is_empty() {
                return Err(DecompError::NonAbelianCartan(ca, cb));
            }
        }
    }
    let in_cartan = {
        let mut flags = vec![false; n];
        for &c in &cartan {
            flags[c] = true;
        }
        flags
    };

    let mut weights: Vec<Option<Vec<u64>>> = vec![None; n];
    for j in (0..n).filter(|&j| !in_cartan[j]) {
        let mut w = Vec::with_capacity(cartan.len());
        for &h in &cartan {
            let (slice, negate) = l.pair_slice(h, j);
            let lambda = match slice {
                [] => 0,
                [(k, c)] if *k as usize == j => {
                    if negate {
                        p - c
                    } else {
                        *c
                    }
                }
                _ => return Err(DecompError::NotDiagonal { h, j }),
            };
            w.push(lambda);
        }
        weights[j] = Some(w);
    }

    let mut by_weight: std::collections::HashMap<Vec<u64>, Vec<usize>> =
        std::collections::HashMap::new();
    for j in (0..n).filter(|&j| !in_cartan[j]) {
        by_weight
            .entry(weights[j].clone().unwrap())
            .or_default()
            .push(j);
    }
    let zero_weight = vec![0u64; cartan.len()];
    let zero_class = by_weight.get(&zero_weight).cloned().unwrap_or_default();
    let mut blocks: Vec<Block> = by_weight
        .into_iter()
        .map(|(weight, members)| Block { weight, members })
        .collect();
    for b in &mut blocks {
        b.members.sort_unstable();
    }
    blocks.sort_unstable_by_key(|b| b.members[0]);

    Ok(CartanDecomposition {
        cartan_indices: cartan,
        weights,
        blocks,
        zero_class,
    })
}

/// True iff every non-Cartan basis vector carries a nonzero weight tuple.
pub fn verify_nonzero_weights(d: &CartanDecomposition) -> bool {
    d.zero_class.is_empty()
}

/// Checks the grading: for blocks of weights w1 and w2, the bracket of their
/// members lands in the block of weight w1+w2, or in the Cartan span when
/// w1+w2 = 0. Returns the first violating pair.
pub fn verify_grading(l: &LieAlgebraFp, d: &CartanDecomposition) -> Result<(), (usize, usize)> {
    let p = l.p();
    let in_cartan: std::collections::HashSet<usize> = d.cartan_indices.iter().copied().collect();
    let mut block_of: std::collections::HashMap<&[u64], usize> = std::collections::HashMap::new();
    for (bi, b) in d.blocks.iter().enumerate() {
        block_of.insert(&b.weight, bi);
    }
    let member_sets: Vec<std::collections::HashSet<usize>> = d
        .blocks
        .iter()
        .map(|b| b.members.iter().copied().collect())
        .collect();
    for (b1, blk1) in d.blocks.iter().enumerate() {
        for blk2 in d.blocks.iter().skip(b1) {
            let sum: Vec<u64> = blk1
                .weight
                .iter()
                .zip(&blk2.weight)
                .map(|(x, y)| (x + y) % p)
                .collect();
            let target = block_of.get(sum.as_slice()).copied();
            let sum_is_zero = sum.iter().all(|&x| x == 0);
            for &x in &blk1.members {
                for &y in &blk2.members {
                    if x == y {
                        continue;
                    }
                    let (slice, _) = l.pair_slice(x.min(y), x.max(y));
                    for &(k, _) in slice {
                        let k = k as usize;
                        let ok = if sum_is_zero {
                            in_cartan.contains(&k)
                        } else {
                            target.is_some_and(|t| member_sets[t].contains(&k))
                        };
                        if !ok {
                            return Err((x, y));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

impl CartanDecomposition {
    /// Census of block sizes: how many blocks have each size.
    pub fn size_census(&self) -> std::collections::BTreeMap<usize, usize> {
        let mut census = std::collections::BTreeMap::new();
        for b in &self.blocks {
            *census.entry(b.members.len()).or_insert(0) += 1;
        }
        census
    }

    /// Report: one line per block, `block k: size s, weight (w_1,…,w_r)`.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (k, b) in self.blocks.iter().enumerate() {
            let ws: Vec<String> = b.weight.iter().map(|w| w.to_string()).collect();
            out.push_str(&format!(
                "block {}: size {}, weight ({})\n",
                k + 1,
                b.members.len(),
                ws.join(",")
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::structure_constants;
    use crate::rootsys::{LieType, RootSystem};

    fn algebra(t: LieType, p: u64) -> LieAlgebraFp {
        structure_constants(&RootSystem::new(t))
            .unwrap()
            .reduce_mod_p(p)
            .unwrap()
    }

    #[test]
    fn e6_char2_has_36_blocks_of_size_2() {
        let d = decompose(&algebra(LieType::E6, 2)).unwrap();
        assert_eq!(d.blocks.len(), 36);
        assert!(d.blocks.iter().all(|b| b.members.len() == 2));
        assert!(verify_nonzero_weights(&d));
    }

    #[test]
    fn e6_char3_has_72_singleton_blocks() {
        let d = decompose(&algebra(LieType::E6, 3)).unwrap();
        assert_eq!(d.blocks.len(), 72);
        assert!(d.blocks.iter().all(|b| b.members.len() == 1));
    }

    #[test]
    fn g2_char2_census() {
        let d = decompose(&algebra(LieType::G2, 2)).unwrap();
        assert_eq!(d.cartan_indices.len(), 2);
        let weighted: usize = d.blocks.iter().map(|b| b.members.len()).sum();
        assert_eq!(weighted, 12);
        assert!(verify_nonzero_weights(&d));
    }

    #[test]
    fn weights_match_root_pairings_mod_p() {
        for (t, p) in [(LieType::G2, 3), (LieType::F4, 2)] {
            let rs = RootSystem::new(t);
            let l = algebra(t, p);
            let d = decompose(&l).unwrap();
            let rank = rs.rank();
            for tdx in 0..rs.num_roots() {
                let w = d.weights[rank + tdx].as_ref().unwrap();
                for i in 0..rank {
                    let expected = rs.pairing_with_simple(tdx, i).rem_euclid(p as i64) as u64;
                    assert_eq!(w[i], expected);
                }
            }
        }
    }

    #[test]
    fn char2_blocks_pair_opposite_roots() {
        // Mod 2 the weights of α and -α coincide, fusing the 72 e6 roots
        // into 36 two-element classes.
        let rs = RootSystem::new(LieType::E6);
        let d = decompose(&algebra(LieType::E6, 2)).unwrap();
        let rank = rs.rank();
        for b in &d.blocks {
            let t0 = b.members[0] - rank;
            let t1 = b.members[1] - rank;
            assert_eq!(rs.neg(t0), t1);
        }
    }

    #[test]
    fn grading_holds_for_small_types() {
        for (t, p) in [(LieType::G2, 2), (LieType::G2, 3), (LieType::F4, 2)] {
            let l = algebra(t, p);
            let d = decompose(&l).unwrap();
            assert_eq!(verify_grading(&l, &d), Ok(()));
        }
    }

    #[test]
    fn abelian_algebra_fails_nonzero_weight_check() {
        // All brackets zero, one designated Cartan position: every other
        // basis vector has weight 0.
        let l = LieAlgebraFp::from_table(2, 3, &[], Some(vec![0])).unwrap();
        let d = decompose(&l).unwrap();
        assert!(!verify_nonzero_weights(&d));
        assert_eq!(d.zero_class, vec![1, 2]);
    }

    #[test]
    fn missing_cartan_is_an_error() {
        let l = LieAlgebraFp::from_table(2, 3, &[], None).unwrap();
        assert_eq!(decompose(&l), Err(DecompError::MissingCartan));
    }

    #[test]
    fn non_abelian_cartan_is_rejected() {
        let rs = RootSystem::new(LieType::G2);
        let cb = structure_constants(&rs).unwrap();
        let l = cb.reduce_mod_p(3).unwrap();
        // Positions {0, 3}: h_1 and v_{α_1} with [h_1, v_{α_1}] = 2·v ≠ 0.
        let alpha1 = rs.root_index(&[1, 0]).unwrap();
        let pos = rs.rank() + alpha1;
        let entries: Vec<(usize, usize, usize, u64)> = (0..l.dim())
            .flat_map(|i| ((i + 1)..l.dim()).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                l.bracket_basis(i, j)
                    .into_iter()
                    .map(move |(k, c)| (i, j, k, c))
            })
            .collect();
        let relabeled = LieAlgebraFp::from_table(3, l.dim(), &entries, Some(vec![0, pos])).unwrap();
        assert!(matches!(
            decompose(&relabeled),
            Err(DecompError::NonAbelianCartan(0, _))
        ));
    }

    #[test]
    fn non_diagonal_action_is_rejected() {
        // Designate a single root vector as "Cartan": abelian (one element),
        // but its ad is not diagonal on the Chevalley basis.
        let l0 = algebra(LieType::G2, 3);
        let entries: Vec<(usize, usize, usize, u64)> = (0..l0.dim())
            .flat_map(|i| ((i + 1)..l0.dim()).map(move |j| (i, j)))
            .flat_map(|(i, j)| {
                l0.bracket_basis(i, j)
                    .into_iter()
                    .map(move |(k, c)| (i, j, k, c))
            })
            .collect();
        let l = LieAlgebraFp::from_table(3, l0.dim(), &entries, Some(vec![2])).unwrap();
        assert!(matches!(
            decompose(&l),
            Err(DecompError::NotDiagonal { h: 2, .. })
        ));
    }

    #[test]
    fn g2_char3_fuses_short_and_long_roots() {
        // Mod 3 the g2 pairings of some short and long roots coincide, so
        // blocks of size 3 appear; the weighted positions still add to 12.
        let d = decompose(&algebra(LieType::G2, 3)).unwrap();
        assert_eq!(d.blocks.iter().map(|b| b.members.len()).sum::<usize>(), 12);
        assert!(d.blocks.iter().any(|b| b.members.len() > 1));
        assert!(verify_nonzero_weights(&d));
    }

    #[test]
    fn report_format() {
        let d = decompose(&algebra(LieType::E6, 3)).unwrap();
        let report = d.report();
        let first = report.lines().next().unwrap();
        assert!(
            first.starts_with("block 1: size 1, weight ("),
            "got: {first}"
        );
        assert_eq!(report.lines().count(), d.blocks.len());
    }
}
