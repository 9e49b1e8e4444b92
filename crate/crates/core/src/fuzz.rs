//! Random instances with planted answers, for oracle tests and the command-line fuzzer.
//!
//! Every generator takes an explicit RNG; nothing draws from ambient randomness.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bundle::VectorBundle;
use crate::classify::{build_structure, Block, DecompositionCertificate};
use crate::equivariant::EquivariantStructure;
use crate::error::Result;
use crate::exactalg::{CycNum, LaurentMatrix, LaurentPoly, Matrix};
use crate::group::{lift_group, Character, GroupSpec};

/// A nonzero scalar: a small integer, occasionally times a root of unity.
fn unit_scalar<R: Rng>(rng: &mut R, m: u32) -> CycNum {
    let mags = [1i64, 1, 1, 2, 3];
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let c = CycNum::from_i64(m, sign * mags[rng.gen_range(0..mags.len())]);
    if m > 2 && rng.gen_bool(0.25) {
        &c * &CycNum::root_of_unity(m, rng.gen_range(0..m as i64))
    } else {
        c
    }
}

fn small_scalar<R: Rng>(rng: &mut R, m: u32) -> CycNum {
    let c = CycNum::from_i64(m, rng.gen_range(-3..=3));
    if m > 2 && rng.gen_bool(0.2) {
        &c * &CycNum::root_of_unity(m, rng.gen_range(0..m as i64))
    } else {
        c
    }
}

/// A random polynomial of degree `≤ max_deg` in `z`.
pub fn random_poly<R: Rng>(rng: &mut R, m: u32, max_deg: i32) -> LaurentPoly {
    let mut terms: Vec<(i32, CycNum)> = Vec::new();
    for e in 0..=max_deg.max(0) {
        if rng.gen_bool(0.6) {
            terms.push((e, small_scalar(rng, m)));
        }
    }
    LaurentPoly::from_terms(m, terms).expect("single conductor")
}

/// An invertible constant matrix: elementary operations, a permutation and a unit diagonal.
pub fn random_invertible<R: Rng>(rng: &mut R, m: u32, r: usize) -> Matrix {
    let mut a = Matrix::identity(m, r);
    let mut perm: Vec<usize> = (0..r).collect();
    perm.shuffle(rng);
    a = Matrix::from_fn(m, r, r, |i, j| a.get(perm[i], j).clone());
    for i in 0..r {
        let c = unit_scalar(rng, m);
        for j in 0..r {
            let v = a.get(i, j) * &c;
            a.set(i, j, v);
        }
    }
    if r > 1 {
        for _ in 0..r + 1 {
            let i = rng.gen_range(0..r);
            let mut j = rng.gen_range(0..r - 1);
            if j >= i {
                j += 1;
            }
            let c = small_scalar(rng, m);
            for k in 0..r {
                let v = a.get(i, k) + &(a.get(j, k) * &c);
                a.set(i, k, v);
            }
        }
    }
    a
}

/// A polynomial matrix with constant nonzero determinant (an element of `GL_r(K[z])`).
pub fn random_unimodular<R: Rng>(rng: &mut R, m: u32, r: usize, steps: usize, max_deg: i32) -> LaurentMatrix {
    let mut a = LaurentMatrix::from_constant(&random_invertible(rng, m, r));
    if r == 1 {
        return a;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..r);
        let mut j = rng.gen_range(0..r - 1);
        if j >= i {
            j += 1;
        }
        let mut e = LaurentMatrix::identity(m, r);
        e.set(i, j, random_poly(rng, m, max_deg));
        a = &a * &e;
    }
    a
}

/// A bundle `T = A(z)·diag(z^{n_i})·B(1/z)` together with its planted splitting type.
#[derive(Clone, Debug)]
pub struct PlantedBundle {
    pub bundle: VectorBundle,
    pub degrees: Vec<i32>,
    pub a: LaurentMatrix,
}

pub fn random_degrees<R: Rng>(rng: &mut R, r: usize, lo: i32, hi: i32) -> Vec<i32> {
    let mut d: Vec<i32> = (0..r).map(|_| rng.gen_range(lo..=hi)).collect();
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// Plants the degrees behind a random frame: `A ∈ GL_r(K[z])`, `B ∈ GL_r(K[w])`.
pub fn planted_bundle_with<R: Rng>(rng: &mut R, m: u32, degrees: &[i32]) -> PlantedBundle {
    let r = degrees.len();
    let a = random_unimodular(rng, m, r, r + 1, 2);
    let b = random_unimodular(rng, m, r, r + 1, 2)
        .substitute(&CycNum::one(m), -1)
        .expect("unit");
    let t = &(&a * &LaurentMatrix::diag_z_pows(m, degrees)) * &b;
    PlantedBundle {
        bundle: VectorBundle::new(t).expect("unimodular by construction"),
        degrees: degrees.to_vec(),
        a,
    }
}

pub fn planted_bundle<R: Rng>(rng: &mut R, m: u32, r: usize, lo: i32, hi: i32) -> PlantedBundle {
    let degrees = random_degrees(rng, r, lo, hi);
    planted_bundle_with(rng, m, &degrees)
}

/// A random automorphism of `⊕O(d_j)` (degrees descending): entry `(i, j)` is a polynomial of
/// degree `≤ d_i − d_j`, with invertible constant equal-degree blocks.
pub fn random_model_automorphism<R: Rng>(rng: &mut R, m: u32, degrees: &[i32]) -> LaurentMatrix {
    let r = degrees.len();
    let mut u = LaurentMatrix::zeros(m, r, r);
    let mut i = 0;
    while i < r {
        let len = degrees[i..].iter().take_while(|&&d| d == degrees[i]).count();
        let block = random_invertible(rng, m, len);
        for a in 0..len {
            for b in 0..len {
                u.set(i + a, i + b, LaurentPoly::constant(block.get(a, b).clone()));
            }
        }
        i += len;
    }
    for i in 0..r {
        for j in 0..r {
            if degrees[i] > degrees[j] {
                u.set(i, j, random_poly(rng, m, degrees[i] - degrees[j]));
            }
        }
    }
    u
}

/// Random canonical blocks of total rank `r`, sorted: for the Klein group, even degrees give
/// line blocks and odd degrees paired blocks (so the rank may force an even line degree).
pub fn random_blocks<R: Rng>(rng: &mut R, group: GroupSpec, r: usize, lo: i32, hi: i32) -> Vec<Block> {
    let chars = group.characters();
    let mut blocks = Vec::new();
    let mut left = r;
    let evens: Vec<i32> = (lo..=hi).filter(|d| d.rem_euclid(2) == 0).collect();
    let odds: Vec<i32> = (lo..=hi).filter(|d| d.rem_euclid(2) == 1).collect();
    while left > 0 {
        if group.is_klein() && left >= 2 && !odds.is_empty() && (evens.is_empty() || rng.gen_bool(0.5)) {
            blocks.push(Block::Pair {
                degree: *odds.choose(rng).expect("nonempty"),
            });
            left -= 2;
        } else {
            let pool = if group.is_klein() {
                &evens
            } else {
                &(lo..=hi).collect::<Vec<_>>()
            };
            let degree = match pool.choose(rng) {
                Some(&d) => d,
                None => 2 * lo.div_euclid(2),
            };
            blocks.push(Block::Line {
                degree,
                character: *chars.choose(rng).expect("nonempty"),
            });
            left -= 1;
        }
    }
    let cert = DecompositionCertificate {
        group,
        blocks,
        change_of_frame: LaurentMatrix::identity(group.conductor(), r),
    };
    cert.sorted_blocks()
}

/// A structure with planted decomposition: the canonical blocks, conjugated by a random model
/// automorphism, then transported to a random non-split frame.
#[derive(Clone, Debug)]
pub struct PlantedStructure {
    pub blocks: Vec<Block>,
    pub structure: EquivariantStructure,
}

pub fn planted_structure<R: Rng>(
    rng: &mut R,
    group: GroupSpec,
    r: usize,
    lo: i32,
    hi: i32,
) -> Result<PlantedStructure> {
    let m = group.conductor();
    let blocks = random_blocks(rng, group, r, lo, hi);
    let cert = DecompositionCertificate {
        group,
        change_of_frame: LaurentMatrix::identity(m, r),
        blocks: blocks.clone(),
    };
    let model = build_structure(&cert, None)?;
    let degrees = cert.model_degrees();
    let u = random_model_automorphism(rng, m, &degrees);
    let conjugated = model.push_forward(&u, model.bundle().clone())?;
    let planted = planted_bundle_with(rng, m, &degrees);
    let structure = conjugated.push_forward(&planted.a, planted.bundle)?;
    Ok(PlantedStructure { blocks, structure })
}

/// `P·(⊕ standard pair)·P⁻¹` on `K^{2r'}`, indexed by the eight lift elements.
pub fn random_klein_odd_rep<R: Rng>(rng: &mut R, m: u32, pairs: usize) -> Vec<Matrix> {
    let g = GroupSpec::klein_in(m).expect("conductor divisible by 4");
    let dim = 2 * pairs;
    let p = random_invertible(rng, m, dim);
    let p_inv = p.inverse().expect("invertible");
    lift_group(&g)
        .into_iter()
        .map(|e| {
            let sum = Matrix::from_fn(m, dim, dim, |i, j| {
                if i / 2 == j / 2 {
                    e.matrix.get(i % 2, j % 2).clone()
                } else {
                    CycNum::zero(m)
                }
            });
            &(&p * &sum) * &p_inv
        })
        .collect()
}

/// A random character of `group`.
pub fn random_character<R: Rng>(rng: &mut R, group: GroupSpec) -> Character {
    *group.characters().choose(rng).expect("nonempty")
}
