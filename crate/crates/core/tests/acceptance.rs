//! Acceptance suite: ten criteria, each reported on its own PASS/FAIL line.
//!
//! Every criterion runs even when an earlier one fails; the test fails at the end if any did.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use eqbundle_core::classify::{
    averaging_intertwiner, decompose, is_unipotent, pullback_structure, rep_decompose, verify_certificate,
    Block, DecompositionCertificate, RepBlocks, RepMode,
};
use eqbundle_core::equivariant::{
    canonical_structure, constant_line_structures, existence, reference_cocycle, structure_quotient,
    Canonical, EquivariantStructure, Violation,
};
use eqbundle_core::fuzz::{planted_bundle, planted_structure, random_klein_odd_rep};
use eqbundle_core::{Acting, CycNum, Error, GroupSpec, LaurentMatrix, LaurentPoly, Matrix, VectorBundle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn rng(criterion: u64, case: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(criterion << 32 | case)
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn fail(e: Error) -> String {
    format!("unexpected error: {e}")
}

fn splitting_oracle() -> Outcome {
    let mut ok = 0;
    for i in 0..200u64 {
        let mut r = rng(1, i);
        let m = [1, 2, 3, 4][(i % 4) as usize];
        let rank = r.gen_range(1..=4);
        let p = planted_bundle(&mut r, m, rank, -5, 5);
        let found = p.bundle.splitting_type().map_err(fail)?;
        ensure!(
            found.degrees() == p.degrees.as_slice(),
            "case {i}: planted {:?}, found {}",
            p.degrees,
            found
        );
        ok += 1;
    }
    Ok(format!("{ok}/200 planted splitting types recovered"))
}

fn h0_law() -> Outcome {
    for n in -5..=5 {
        let h = VectorBundle::line(1, n).h0(0);
        ensure!(h == (n + 1).max(0) as usize, "h0(O({n})) = {h}");
    }
    for i in 0..100u64 {
        let mut r = rng(2, i);
        let rank = r.gen_range(1..=4);
        let m = r.gen_range(1..=4);
        let p = planted_bundle(&mut r, m, rank, -5, 5);
        let profile = p.bundle.h0_profile();
        let diffs = profile.differences();
        ensure!(
            diffs.iter().all(|&(_, d)| (0..=rank as i64).contains(&d))
                && diffs.windows(2).all(|w| w[0].1 <= w[1].1),
            "case {i}: differences {diffs:?}"
        );
    }
    Ok("h0(O(n)) = max(0, n+1) on [-5, 5]; monotone differences on 100 bundles".into())
}

fn functoriality() -> Outcome {
    for i in 0..100u64 {
        let mut r = rng(3, i);
        let m = r.gen_range(1..=4);
        let (ra, rb) = (r.gen_range(1..=3), r.gen_range(1..=2));
        let a = planted_bundle(&mut r, m, ra, -4, 4);
        let b = planted_bundle(&mut r, m, rb, -4, 4);
        let k = r.gen_range(-3..=3);
        let dual = a.bundle.dual().splitting_type().map_err(fail)?;
        let mut expect: Vec<i32> = a.degrees.iter().rev().map(|d| -d).collect();
        ensure!(
            dual.degrees() == expect.as_slice(),
            "case {i}: dual of {:?} gave {dual}",
            a.degrees
        );
        let twisted = a.bundle.twist(k).splitting_type().map_err(fail)?;
        expect = a.degrees.iter().map(|d| d + k).collect();
        ensure!(
            twisted.degrees() == expect.as_slice(),
            "case {i}: twist by {k} gave {twisted}"
        );
        let sum = a
            .bundle
            .direct_sum(&b.bundle)
            .map_err(fail)?
            .splitting_type()
            .map_err(fail)?;
        expect = a.degrees.iter().chain(&b.degrees).copied().collect();
        expect.sort_unstable_by(|x, y| y.cmp(x));
        ensure!(
            sum.degrees() == expect.as_slice(),
            "case {i}: sum gave {sum}, expected {expect:?}"
        );
    }
    Ok("dual, twist and direct-sum identities on 100 bundles".into())
}

fn klein_parity() -> Outcome {
    let k = GroupSpec::klein();
    for d in -6..=6 {
        let exists = existence(&VectorBundle::line(4, d), &k).map_err(fail)?;
        ensure!(exists == (d % 2 == 0), "existence(O({d})) = {exists}");
        if d % 2 != 0 {
            ensure!(
                matches!(
                    canonical_structure(k, Canonical::Line(d)),
                    Err(Error::NoSuchStructure(_))
                ),
                "canonical_structure(O({d})) did not refuse"
            );
        }
    }
    let one = LaurentPoly::one(4);
    let z = LaurentPoly::z_pow(4, 1);
    let forged: Vec<LaurentMatrix> = [&one, &one, &z, &z]
        .into_iter()
        .map(|p| LaurentMatrix::diagonal(4, vec![p.clone()]))
        .collect();
    let s = EquivariantStructure::new(VectorBundle::line(4, -1), Acting::Genuine(k), forged).map_err(fail)?;
    // N_{a2}(a1·z)·N_{a1}(z) against N_{a1a2}(z).
    let composed = &k.moebius(1).pull_matrix(s.map(2)) * s.map(1);
    let minus_z = LaurentMatrix::diagonal(4, vec![z.scale(&CycNum::from_i64(4, -1))]);
    ensure!(
        composed == minus_z && s.map(3).get(0, 0) == &z,
        "forged maps do not show -z vs z"
    );
    ensure!(
        matches!(s.violation().map_err(fail)?, Some(Violation::Cocycle { .. }))
            && !s.validate().map_err(fail)?,
        "forged cocycle was accepted"
    );
    Ok("existence = (d even) on [-6, 6]; odd lines refused; forged O(-1) fails with -z vs z".into())
}

fn cyclic_torsor() -> Outcome {
    for n in 2..=4u32 {
        let g = GroupSpec::cyclic(n).map_err(fail)?;
        for d in -2..=2 {
            let bundle = VectorBundle::line(g.conductor(), d);
            let all = constant_line_structures(&bundle, g).map_err(fail)?;
            ensure!(
                all.len() == n as usize,
                "cyclic({n}) on O({d}): {} structures",
                all.len()
            );
            for a in &all {
                for b in &all {
                    let chi = structure_quotient(b, a).map_err(fail)?;
                    let moved = a.twist_by_character(&chi).map_err(fail)?;
                    ensure!(
                        moved == *b,
                        "cyclic({n}) on O({d}): twist by {} misses",
                        chi.label()
                    );
                    let back = structure_quotient(&moved, a).map_err(fail)?;
                    ensure!(
                        back == chi,
                        "cyclic({n}) on O({d}): quotient does not invert twist"
                    );
                }
            }
        }
    }
    Ok("n constant structures, simply transitive under characters, n in {2,3,4}, d in [-2, 2]".into())
}

fn canonical_validate() -> Outcome {
    let mut done = Vec::new();
    for n in 2..=4 {
        let s =
            canonical_structure(GroupSpec::cyclic(n).map_err(fail)?, Canonical::Line(-1)).map_err(fail)?;
        ensure!(
            s.validate().map_err(fail)?,
            "cyclic({n}) tautological structure fails"
        );
        done.push(format!("cyclic({n}) O(-1)"));
    }
    let k = GroupSpec::klein();
    let tangent = canonical_structure(k, Canonical::Tangent).map_err(fail)?;
    ensure!(tangent.validate().map_err(fail)?, "Klein tangent structure fails");
    for g in 0..4 {
        let jac = k.moebius(g).derivative();
        ensure!(
            tangent.map(g).get(0, 0) == &jac,
            "tangent map at {} is not the derivative",
            k.name(g)
        );
    }
    let pair = canonical_structure(k, Canonical::OddPair(-1)).map_err(fail)?;
    ensure!(pair.validate().map_err(fail)?, "Klein O(-1)^2 structure fails");
    done.push("klein tangent".into());
    done.push("klein O(-1)^2".into());
    Ok(done.join(", "))
}

fn fuzzed_structures(
    criterion: u64,
    count: u64,
    klein_only: bool,
) -> Vec<(u64, GroupSpec, Vec<Block>, EquivariantStructure)> {
    (0..count)
        .map(|i| {
            let mut r = rng(criterion, i);
            let group = match (klein_only, i % 4) {
                (true, _) | (false, 3) => GroupSpec::klein(),
                (false, c) => GroupSpec::cyclic(c as u32 + 2).expect("small order"),
            };
            let rank = r.gen_range(1..=4);
            let p = planted_structure(&mut r, group, rank, -3, 3).expect("planted structure builds");
            (i, group, p.blocks, p.structure)
        })
        .collect()
}

fn decomposition_shape() -> Outcome {
    let k = GroupSpec::klein();
    let pair = decompose(&canonical_structure(k, Canonical::OddPair(-1)).map_err(fail)?).map_err(fail)?;
    ensure!(
        pair.m() == 0 && pair.n() == 1 && pair.odd_blocks() == vec![-1],
        "O(-1)^2 decomposed as {pair}"
    );
    let even = canonical_structure(k, Canonical::Line(2))
        .and_then(|a| a.direct_sum(&canonical_structure(k, Canonical::Line(0))?))
        .map_err(fail)?;
    let cert = decompose(&even).map_err(fail)?;
    ensure!(cert.m() == 2 && cert.n() == 0, "O(2)+O(0) decomposed as {cert}");
    let mut checked = 0;
    for (i, _, _, s) in fuzzed_structures(7, 40, true) {
        let cert = decompose(&s).map_err(|e| format!("case {i}: {e}"))?;
        ensure!(
            cert.m() + 2 * cert.n() == s.rank(),
            "case {i}: {cert} has wrong rank"
        );
        let parity = cert.even_blocks().iter().all(|(d, _)| d % 2 == 0)
            && cert.odd_blocks().iter().all(|d| d % 2 != 0);
        ensure!(parity, "case {i}: {cert} has wrong parities");
        checked += 1;
    }
    Ok(format!(
        "O(-1)^2 -> M=0 N=1; O(2)+O(0) -> M=2 N=0; {checked} fuzzed Klein certificates"
    ))
}

fn averaging() -> Outcome {
    let cases = fuzzed_structures(8, 100, false);
    for (i, group, planted, s) in &cases {
        let iso = s.bundle().model_isomorphism().map_err(fail)?;
        let n = pullback_structure(s, &iso).map_err(|e| format!("case {i}: {e}"))?;
        let r = n.block_diagonal_part();
        let avg = averaging_intertwiner(&n, &r).map_err(|e| format!("case {i}: {e}"))?;
        ensure!(
            is_unipotent(&avg, n.degrees()),
            "case {i}: intertwiner not unipotent"
        );
        for g in 0..n.maps.len() {
            let lhs = &n.maps[g] * &avg;
            let rhs = &n.acting.moebius(g).pull_matrix(&avg) * &r.maps[g];
            ensure!(lhs == rhs, "case {i}: intertwining fails at element {g}");
        }
        let cert = decompose(s).map_err(|e| format!("case {i} ({group}): {e}"))?;
        ensure!(
            cert.blocks == *planted,
            "case {i} ({group}): planted {planted:?}, found {cert}"
        );
    }
    Ok(format!(
        "{}/100 structures: unipotent intertwiners, certificates reproduced",
        cases.len()
    ))
}

/// The genuine Klein structure `N_g = ν_g(z)·ρ_g` on `O(d)^{2r'}` for a lift representation `ρ`.
fn klein_odd_structure(rho: &[Matrix], d: i32) -> Result<EquivariantStructure, Error> {
    let k = GroupSpec::klein();
    let lift = Acting::KleinLift(k);
    let dim = rho[0].rows();
    let maps = (0..4)
        .map(|g| LaurentMatrix::from_constant(&rho[g]).scale(&reference_cocycle(&lift, d, g)))
        .collect();
    EquivariantStructure::new(VectorBundle::split(4, &vec![d; dim]), Acting::Genuine(k), maps)
}

fn pairing() -> Outcome {
    let lift = Acting::KleinLift(GroupSpec::klein());
    let minus = CycNum::from_i64(4, -1);
    let mut count = 0;
    for i in 0..30u64 {
        let mut r = rng(9, i);
        let pairs = 1 + (i % 3) as usize;
        let rho = random_klein_odd_rep(&mut r, 4, pairs);
        let dim = 2 * pairs;
        let (a1, a2) = (&rho[1], &rho[2]);
        ensure!(
            a1 * a2 == (a2 * a1).scale(&minus),
            "case {i}: A1, A2 do not anticommute"
        );
        let plus = a1.sub(&Matrix::identity(4, dim)).kernel().len();
        let neg = a1.sub(&Matrix::identity(4, dim).scale(&minus)).kernel().len();
        ensure!(
            plus == pairs && neg == pairs,
            "case {i}: dim V+ = {plus}, dim V- = {neg}"
        );
        match rep_decompose(&lift, &rho, RepMode::KleinLift).map_err(fail)? {
            RepBlocks::Pairs(p) => ensure!(p.len() == pairs, "case {i}: {} pairs for r' = {pairs}", p.len()),
            other => return Err(format!("case {i}: expected pairs, got {other:?}")),
        }
        count += 1;
    }
    Ok(format!(
        "{count} representations of dimension 2, 4, 6 split into r' anticommuting pairs"
    ))
}

/// Each single-field mutation of a valid certificate must be rejected.
fn mutations(cert: &DecompositionCertificate) -> Vec<(String, DecompositionCertificate)> {
    let mut out = Vec::new();
    for delta in [-1, 1] {
        let mut c = cert.clone();
        c.blocks[0] = match c.blocks[0] {
            Block::Line { degree, character } => Block::Line {
                degree: degree + delta,
                character,
            },
            Block::Pair { degree } => Block::Pair {
                degree: degree + delta,
            },
        };
        out.push((format!("degree {delta:+}"), c));
    }
    if let Some(pos) = cert.blocks.iter().position(|b| matches!(b, Block::Line { .. })) {
        let Block::Line { degree, character } = cert.blocks[pos] else {
            unreachable!()
        };
        let other = cert
            .group
            .characters()
            .into_iter()
            .find(|c| *c != character)
            .expect("nontrivial group");
        let mut c = cert.clone();
        c.blocks[pos] = Block::Line {
            degree,
            character: other,
        };
        out.push(("character swap".into(), c));
    }
    out
}

fn end_to_end() -> Outcome {
    let k = GroupSpec::klein();
    let mut structures: Vec<(String, EquivariantStructure)> = vec![
        (
            "klein O(-1)^2".into(),
            canonical_structure(k, Canonical::OddPair(-1)).map_err(fail)?,
        ),
        (
            "klein O(2)+O(0)".into(),
            canonical_structure(k, Canonical::Line(2))
                .and_then(|a| a.direct_sum(&canonical_structure(k, Canonical::Line(0))?))
                .map_err(fail)?,
        ),
    ];
    structures.extend(
        fuzzed_structures(7, 40, true)
            .into_iter()
            .map(|(i, _, _, s)| (format!("suite 7 case {i}"), s)),
    );
    structures.extend(
        fuzzed_structures(8, 100, false)
            .into_iter()
            .map(|(i, _, _, s)| (format!("suite 8 case {i}"), s)),
    );
    for i in 0..30u64 {
        let mut r = rng(9, i);
        let rho = random_klein_odd_rep(&mut r, 4, 1 + (i % 3) as usize);
        let d = [-3, -1, 1, 3][(i % 4) as usize];
        structures.push((
            format!("suite 9 case {i}"),
            klein_odd_structure(&rho, d).map_err(fail)?,
        ));
    }
    let (mut accepted, mut rejected) = (0, 0);
    for (name, s) in &structures {
        let cert = decompose(s).map_err(|e| format!("{name}: {e}"))?;
        let verdict = verify_certificate(&cert, s);
        ensure!(
            verdict.ok,
            "{name}: rejected its own certificate: {:?}",
            verdict.reason
        );
        accepted += 1;
        for (what, bad) in mutations(&cert) {
            let v = verify_certificate(&bad, s);
            ensure!(!v.ok, "{name}: mutation '{what}' was accepted");
            rejected += 1;
        }
    }
    Ok(format!(
        "{accepted} certificates verified; {rejected} mutations rejected"
    ))
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("splitting-type oracle", splitting_oracle),
        ("h0 law", h0_law),
        ("Grothendieck functoriality", functoriality),
        ("Klein parity obstruction", klein_parity),
        ("cyclic torsor", cyclic_torsor),
        ("canonical structures validate", canonical_validate),
        ("decomposition shape", decomposition_shape),
        ("averaging intertwiner", averaging),
        ("Klein odd pairing", pairing),
        ("end-to-end verifier", end_to_end),
    ];
    // Written to the stderr handle directly so the lines appear even when output is captured.
    let mut log = std::io::stderr();
    let mut failures = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => {
                let _ = writeln!(log, "criterion {:>2} PASS  {name}: {detail}", n + 1);
            }
            Err(why) => {
                failures += 1;
                let _ = writeln!(log, "criterion {:>2} FAIL  {name}: {why}", n + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
