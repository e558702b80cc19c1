//! The `selftest` subcommand: invariant suites over every module, with
//! per-suite timing. Exits nonzero naming the first failing check.

use std::collections::HashMap;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use chevkit::cartan_decomp::{decompose, verify_grading, verify_nonzero_weights};
use chevkit::chevalley::{structure_constants, ChevalleyBasisZ, LieAlgebraFp};
use chevkit::derivations::{
    ad_v_intersection_dim, analyze, derivations_full, derivations_v, Method,
};
use chevkit::genbasis::{
    abstract_from_matrix_basis, basis_builder, load_generators, GeneratorFile,
};
use chevkit::gfp_linalg::{is_prime, FpMatrix, StreamingEliminator};
use chevkit::liecore::{center, killing_singular_primes};
use chevkit::rootsys::{LieType, RootSystem};

use crate::CliError;

type Constants = HashMap<LieType, ChevalleyBasisZ>;
type Suite = Box<dyn FnMut(&mut Constants) -> Result<(), String>>;

fn check(cond: bool, msg: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.to_string())
    }
}

fn algebra(cs: &Constants, t: LieType, p: u64) -> Result<LieAlgebraFp, String> {
    cs[&t].reduce_mod_p(p).map_err(|e| e.to_string())
}

pub fn run() -> Result<(), CliError> {
    // Structure constants are shared across suites; building them runs the
    // exhaustive integer Jacobi check for every type.
    let mut constants: Constants = HashMap::new();

    let suites: Vec<(&str, Suite)> = vec![
        ("root-systems", Box::new(suite_root_systems)),
        ("root-strings", Box::new(suite_root_strings)),
        ("chevalley-constants", Box::new(suite_chevalley)),
        ("mod-p-reduction", Box::new(suite_reduction)),
        ("linear-algebra", Box::new(suite_linalg)),
        ("weight-blocks", Box::new(suite_decomposition)),
        ("killing-forms", Box::new(suite_killing)),
        ("derivations", Box::new(suite_derivations)),
        ("pipeline-concordance", Box::new(suite_concordance)),
    ];

    let mut failed = false;
    for (name, mut suite) in suites {
        let t0 = Instant::now();
        match suite(&mut constants) {
            Ok(()) => println!("suite {name}: ok ({:.2?})", t0.elapsed()),
            Err(msg) => {
                println!("suite {name}: FAILED: {msg}");
                failed = true;
                break;
            }
        }
    }
    if failed {
        Err(CliError::Failure("selftest failed".into()))
    } else {
        println!("selftest: all suites passed");
        Ok(())
    }
}

fn suite_root_systems(_: &mut Constants) -> Result<(), String> {
    for t in LieType::ALL {
        let rs = RootSystem::new(t);
        check(
            rs.num_roots() == t.root_count(),
            &format!("{t}: wrong root count"),
        )?;
        for i in 0..rs.num_roots() {
            let neg: Vec<i64> = rs.root(i).coords.iter().map(|&c| -c).collect();
            check(
                rs.root_index(&neg) == Some(rs.neg(i)),
                &format!("{t}: negation closure"),
            )?;
        }
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                let pair = rs.pairing(a, b);
                let refl: Vec<i64> = rs
                    .root(a)
                    .coords
                    .iter()
                    .zip(&rs.root(b).coords)
                    .map(|(&x, &y)| x - pair * y)
                    .collect();
                check(
                    rs.root_index(&refl).is_some(),
                    &format!("{t}: reflection escapes"),
                )?;
            }
        }
    }
    Ok(())
}

fn suite_root_strings(_: &mut Constants) -> Result<(), String> {
    for t in [LieType::G2, LieType::F4] {
        let rs = RootSystem::new(t);
        for a in 0..rs.num_roots() {
            for b in 0..rs.num_roots() {
                if b == a || b == rs.neg(a) {
                    continue;
                }
                let (r, q) = rs.alpha_string(a, b).map_err(|e| e.to_string())?;
                check(
                    r - q == rs.pairing(b, a),
                    &format!("{t}: string law fails on roots {a},{b}"),
                )?;
            }
        }
    }
    Ok(())
}

fn suite_chevalley(cs: &mut Constants) -> Result<(), String> {
    for t in LieType::ALL {
        // The constructor runs the exhaustive Jacobi check over ℤ and the
        // |N| = r+1 law for every root pair.
        let cb = structure_constants(&RootSystem::new(t)).map_err(|e| format!("{t}: {e}"))?;
        check(cb.dim() == t.dim(), &format!("{t}: wrong dimension"))?;
        cs.insert(t, cb);
    }
    Ok(())
}

fn suite_reduction(cs: &mut Constants) -> Result<(), String> {
    for t in [LieType::G2, LieType::F4] {
        for p in [2u64, 3, 5] {
            let cb = &cs[&t];
            let l = algebra(cs, t, p)?;
            for i in 0..cb.dim() {
                for j in 0..cb.dim() {
                    let reduced: Vec<(usize, u64)> = cb
                        .bracket_basis(i, j)
                        .into_iter()
                        .filter_map(|(k, c)| {
                            let v = c.rem_euclid(p as i64) as u64;
                            (v != 0).then_some((k, v))
                        })
                        .collect();
                    check(
                        l.bracket_basis(i, j) == reduced,
                        &format!(
                            "{t} mod {p}: reduction does not commute with bracket at ({i},{j})"
                        ),
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn suite_linalg(_: &mut Constants) -> Result<(), String> {
    let mut rng = StdRng::seed_from_u64(17);
    for trial in 0..300 {
        let p = [2u64, 3, 5, 7][trial % 4];
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
        check(
            e.rank() == dense_rank,
            "streaming rank differs from dense rank",
        )?;
        let mut perm: Vec<usize> = (0..rows).collect();
        for i in (1..rows).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let mut e2 = StreamingEliminator::new(p, cols);
        for &i in &perm {
            e2.push_dense(&mat[i]);
        }
        check(
            e.reduced_rows() == e2.reduced_rows(),
            "streaming elimination is order-dependent",
        )?;
    }
    Ok(())
}

fn suite_decomposition(cs: &mut Constants) -> Result<(), String> {
    // In characteristic 2 the weights of α and −α coincide, pairing the
    // root vectors into two-dimensional blocks for every type.
    let expect: [(LieType, u64, usize, usize); 7] = [
        (LieType::E6, 2, 36, 2),
        (LieType::E6, 3, 72, 1),
        (LieType::E7, 2, 63, 2),
        (LieType::E7, 3, 126, 1),
        (LieType::E8, 2, 120, 2),
        (LieType::E8, 3, 240, 1),
        (LieType::E8, 5, 240, 1),
    ];
    for (t, p, blocks, size) in expect {
        let l = algebra(cs, t, p)?;
        let d = decompose(&l).map_err(|e| e.to_string())?;
        check(
            d.blocks.len() == blocks && d.blocks.iter().all(|b| b.members.len() == size),
            &format!("{t} mod {p}: expected {blocks} blocks of size {size}"),
        )?;
        check(
            verify_nonzero_weights(&d),
            &format!("{t} mod {p}: zero weight appears"),
        )?;
    }
    for (t, p) in [
        (LieType::G2, 2u64),
        (LieType::G2, 3),
        (LieType::F4, 2),
        (LieType::F4, 3),
    ] {
        let l = algebra(cs, t, p)?;
        let d = decompose(&l).map_err(|e| e.to_string())?;
        check(
            verify_nonzero_weights(&d),
            &format!("{t} mod {p}: zero weight appears"),
        )?;
        check(
            verify_grading(&l, &d).is_ok(),
            &format!("{t} mod {p}: bracket grading violated"),
        )?;
    }
    Ok(())
}

fn suite_killing(cs: &mut Constants) -> Result<(), String> {
    let primes: Vec<u64> = (2..=50).filter(|&x| is_prime(x)).collect();
    for t in LieType::ALL {
        let singular = killing_singular_primes(&cs[&t], &primes).map_err(|e| e.to_string())?;
        let expected: Vec<u64> = t.relevant_primes().to_vec();
        check(
            singular == expected,
            &format!("{t}: singular primes {singular:?}, expected {expected:?}"),
        )?;
    }
    Ok(())
}

fn suite_derivations(cs: &mut Constants) -> Result<(), String> {
    let l = algebra(cs, LieType::G2, 2)?;
    check(
        derivations_full(&l, false) == Ok(21),
        "g2 mod 2: dim Der ≠ 21",
    )?;
    let d = decompose(&l).map_err(|e| e.to_string())?;
    let z = center(&l);
    check(derivations_v(&l, &d, &z) == Ok(9), "g2 mod 2: dim V ≠ 9")?;
    check(
        ad_v_intersection_dim(&l, &d, &z) == 2,
        "g2 mod 2: {x : [x,H] ⊆ Z} ≠ H",
    )?;

    let l = algebra(cs, LieType::G2, 3)?;
    check(
        derivations_full(&l, false) == Ok(14),
        "g2 mod 3: dim Der ≠ 14",
    )?;
    for p in [2u64, 3] {
        let l = algebra(cs, LieType::F4, p)?;
        check(derivations_full(&l, false) == Ok(52), "f4: dim Der ≠ 52")?;
    }
    // Both routes must agree through e7; e8 runs the block method.
    for (t, p) in [
        (LieType::E6, 2u64),
        (LieType::E6, 3),
        (LieType::E7, 2),
        (LieType::E7, 3),
    ] {
        let l = algebra(cs, t, p)?;
        let report = analyze(t, &l, Method::Both, false).map_err(|e| e.to_string())?;
        check(
            report.dim_der == t.dim(),
            &format!("{t} mod {p}: dim Der ≠ {}", t.dim()),
        )?;
    }
    for p in [2u64, 3, 5] {
        let l = algebra(cs, LieType::E8, p)?;
        let report = analyze(LieType::E8, &l, Method::Vspace, false).map_err(|e| e.to_string())?;
        check(report.dim_v == Some(8), &format!("e8 mod {p}: dim V ≠ 8"))?;
        check(report.inner, &format!("e8 mod {p}: expected inner"))?;
    }
    Ok(())
}

fn suite_concordance(cs: &mut Constants) -> Result<(), String> {
    // Generator pipeline must reproduce the Chevalley dimensions for e6/e7.
    for (t, which) in [
        (LieType::E6, GeneratorFile::E6),
        (LieType::E7, GeneratorFile::E7Alt),
    ] {
        for p in [2u64, 3] {
            let gens = load_generators(which.builtin_text(), p).map_err(|e| e.to_string())?;
            let basis = basis_builder(&gens, Some(2 * t.dim())).map_err(|e| e.to_string())?;
            check(
                basis.len() == t.dim(),
                &format!("{t} mod {p}: generator basis has {} elements", basis.len()),
            )?;
            let gen_l = abstract_from_matrix_basis(&basis).map_err(|e| e.to_string())?;
            let chev_l = algebra(cs, t, p)?;
            let gen_report = analyze(t, &gen_l, Method::Full, false).map_err(|e| e.to_string())?;
            let chev_report =
                analyze(t, &chev_l, Method::Full, false).map_err(|e| e.to_string())?;
            check(
                (gen_report.dim_l, gen_report.dim_z, gen_report.dim_der)
                    == (chev_report.dim_l, chev_report.dim_z, chev_report.dim_der),
                &format!("{t} mod {p}: generator and Chevalley dimensions differ"),
            )?;
        }
    }
    Ok(())
}
