use std::fmt;

use crate::bundle::VectorBundle;
use crate::equivariant::{canonical_structure, Canonical, EquivariantStructure};
use crate::error::{Error, Result};
use crate::exactalg::LaurentMatrix;
use crate::group::{Character, GroupSpec};

use super::rep::{rep_decompose, RepBlocks, RepMode};
use super::{averaging_intertwiner, extract_residual_rep, pullback_structure};

/// One summand of the equivariant decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    /// An equivariant line bundle: `O(d)` with its reference structure twisted by `χ`.
    Line { degree: i32, character: Character },
    /// `O(d)⊕O(d)`, `d` odd, with the paired Klein structure.
    Pair { degree: i32 },
}

impl Block {
    pub fn degree(&self) -> i32 {
        match self {
            Block::Line { degree, .. } | Block::Pair { degree } => *degree,
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Block::Line { .. } => 1,
            Block::Pair { .. } => 2,
        }
    }

    /// Degree descending, then characters in canonical order.
    fn sort_key(&self) -> (i32, usize) {
        match self {
            Block::Line { degree, character } => (-degree, character.index()),
            Block::Pair { degree } => (-degree, 0),
        }
    }

    fn structure(&self, group: GroupSpec) -> Result<EquivariantStructure> {
        match *self {
            Block::Line { degree, character } => {
                canonical_structure(group, Canonical::Line(degree))?.twist_by_character(&character)
            }
            Block::Pair { degree } => canonical_structure(group, Canonical::OddPair(degree)),
        }
    }
}

/// The output of [`decompose`]: summands with `change_of_frame` mapping their direct sum
/// (in block order) isomorphically onto the bundle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub group: GroupSpec,
    pub blocks: Vec<Block>,
    pub change_of_frame: LaurentMatrix,
}

impl DecompositionCertificate {
    /// Rank-one blocks `(degree, character)`.
    pub fn even_blocks(&self) -> Vec<(i32, Character)> {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Line { degree, character } => Some((degree, character)),
                Block::Pair { .. } => None,
            })
            .collect()
    }

    /// Degrees of the paired blocks.
    pub fn odd_blocks(&self) -> Vec<i32> {
        self.blocks
            .iter()
            .filter_map(|b| match *b {
                Block::Pair { degree } => Some(degree),
                Block::Line { .. } => None,
            })
            .collect()
    }

    /// Number of line blocks.
    pub fn m(&self) -> usize {
        self.even_blocks().len()
    }

    /// Number of paired blocks.
    pub fn n(&self) -> usize {
        self.odd_blocks().len()
    }

    pub fn rank(&self) -> usize {
        self.blocks.iter().map(Block::rank).sum()
    }

    /// Splitting degrees of the model, one per column of `change_of_frame`.
    pub fn model_degrees(&self) -> Vec<i32> {
        self.blocks
            .iter()
            .flat_map(|b| vec![b.degree(); b.rank()])
            .collect()
    }

    pub fn is_sorted(&self) -> bool {
        self.blocks.windows(2).all(|w| w[0].sort_key() <= w[1].sort_key())
    }

    /// Blocks in canonical order.
    pub fn sorted_blocks(&self) -> Vec<Block> {
        let mut b = self.blocks.clone();
        b.sort_by_key(Block::sort_key);
        b
    }
}

impl fmt::Display for DecompositionCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} M={} N={} [", self.group, self.m(), self.n())?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match b {
                Block::Line { degree, character } => write!(f, "O({degree})⊗{character}")?,
                Block::Pair { degree } => write!(f, "O({degree})^2")?,
            }
        }
        write!(f, "]")
    }
}

/// Runs the full pipeline on a genuine structure.
pub fn decompose(s: &EquivariantStructure) -> Result<DecompositionCertificate> {
    if !s.is_genuine() {
        return Err(Error::NotGenuine);
    }
    if let Some(v) = s.violation()? {
        return Err(Error::InvalidStructure(v.to_string()));
    }
    let group = s.group();
    let m = s.conductor();
    let iso = s.bundle().model_isomorphism()?;
    let n = pullback_structure(s, &iso)?;
    let r = n.block_diagonal_part();
    let avg = averaging_intertwiner(&n, &r)?;
    let mut blocks = Vec::new();
    let mut frames = Vec::new();
    for (d, mult) in n.model.grouped() {
        let rep = extract_residual_rep(&r, d)?;
        let mode = if rep.acting.is_lift() {
            RepMode::KleinLift
        } else {
            RepMode::Abelian
        };
        let parts = rep_decompose(&rep.acting, &rep.rho, mode)?;
        frames.push(parts.frame(m, mult));
        match parts {
            RepBlocks::Characters(list) => blocks.extend(
                list.into_iter()
                    .map(|(character, _)| Block::Line { degree: d, character }),
            ),
            RepBlocks::Pairs(list) => blocks.extend(list.iter().map(|_| Block::Pair { degree: d })),
        }
    }
    let p = frames
        .iter()
        .map(LaurentMatrix::from_constant)
        .reduce(|a, b| a.block_diag(&b).expect("same conductor"))
        .expect("nonzero rank");
    let change_of_frame = &(&iso.psi * &avg) * &p;
    let cert = DecompositionCertificate {
        group,
        blocks,
        change_of_frame,
    };
    let verdict = verify_certificate(&cert, s);
    if !verdict.ok {
        return Err(Error::InternalInconsistency(format!(
            "decomposition failed its own verification: {}",
            verdict.reason.unwrap_or_default()
        )));
    }
    Ok(cert)
}

/// The direct sum of the certified blocks, transported onto `target` along the change of
/// frame when a target is given.
pub fn build_structure(
    cert: &DecompositionCertificate,
    target: Option<&VectorBundle>,
) -> Result<EquivariantStructure> {
    if cert.blocks.is_empty() {
        return Err(Error::ShapeMismatch("certificate has no blocks".into()));
    }
    let group = cert.group;
    let mut sum: Option<EquivariantStructure> = None;
    for b in &cert.blocks {
        let mut s = b.structure(group)?;
        if s.conductor() != group.conductor() {
            s = s.embed(group.conductor())?;
        }
        sum = Some(match sum {
            None => s,
            Some(acc) => acc.direct_sum(&s)?,
        });
    }
    let model = sum.expect("nonempty");
    let Some(target) = target else {
        return Ok(model);
    };
    let f = &cert.change_of_frame;
    if target.rank() != cert.rank() || f.rows() != cert.rank() || f.cols() != cert.rank() {
        return Err(Error::ShapeMismatch(format!(
            "certificate of rank {} with a {}x{} frame for a rank {} bundle",
            cert.rank(),
            f.rows(),
            f.cols(),
            target.rank()
        )));
    }
    model.push_forward(f, target.clone())
}

/// Result of [`verify_certificate`], with a stable reason code on failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub ok: bool,
    pub reason: Option<String>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            ok: true,
            reason: None,
        }
    }

    fn fail(code: &str, detail: impl fmt::Display) -> Self {
        Verdict {
            ok: false,
            reason: Some(format!("{code}: {detail}")),
        }
    }
}

/// Checks a certificate against a structure: group, rank accounting `M + 2N = rank`,
/// parities, canonical order, the frame certificates of `change_of_frame`, and exact
/// equality of the transported block structure with the input, element by element.
pub fn verify_certificate(cert: &DecompositionCertificate, s: &EquivariantStructure) -> Verdict {
    if !s.is_genuine() || cert.group != s.group() {
        return Verdict::fail(
            "E_GROUP",
            format!("certificate for {} on {}", cert.group, s.acting()),
        );
    }
    if cert.m() + 2 * cert.n() != s.rank() {
        return Verdict::fail(
            "E_RANK",
            format!("M + 2N = {} + 2·{} ≠ {}", cert.m(), cert.n(), s.rank()),
        );
    }
    for b in &cert.blocks {
        let parity_ok = match (b, cert.group.is_klein()) {
            (Block::Line { degree, .. }, true) => degree.rem_euclid(2) == 0,
            (Block::Pair { degree }, true) => degree.rem_euclid(2) == 1,
            (Block::Line { .. }, false) => true,
            (Block::Pair { .. }, false) => false,
        };
        if !parity_ok {
            return Verdict::fail("E_PARITY", format!("{b:?} for {}", cert.group));
        }
        if let Block::Line { character, .. } = b {
            if character.group() != cert.group {
                return Verdict::fail("E_GROUP", format!("character of {}", character.group()));
            }
        }
    }
    if !cert.is_sorted() {
        return Verdict::fail("E_ORDER", "blocks are not in canonical order");
    }
    let f = &cert.change_of_frame;
    if f.rows() != s.rank() || f.cols() != s.rank() || f.conductor() != s.conductor() {
        return Verdict::fail("E_SHAPE", "change of frame has the wrong shape or field");
    }
    match s.bundle().is_model_frame(&cert.model_degrees(), f) {
        Ok(true) => {}
        Ok(false) => return Verdict::fail("E_FRAME", "change of frame is not a bundle isomorphism"),
        Err(e) => return Verdict::fail("E_FRAME", e),
    }
    let built = match build_structure(cert, Some(s.bundle())) {
        Ok(b) => b,
        Err(e) => return Verdict::fail("E_BUILD", e),
    };
    for g in 0..s.acting().order() {
        if built.map(g) != s.map(g) {
            return Verdict::fail(
                "E_MISMATCH",
                format!("transported map differs at {}", s.acting().name(g)),
            );
        }
    }
    Verdict::pass()
}
