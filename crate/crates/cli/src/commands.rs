use std::fs;

use clap::{Parser, Subcommand};
use eqbundle_core::{
    build_structure, canonical_structure, decompose, existence, is_bundle_map, structures_equivalent,
    verify_certificate, Block, Canonical, Character, DecompositionCertificate, EquivariantStructure,
    GroupSpec, VectorBundle,
};
use serde_json::{json, Value};

use crate::document::{poly_value, Document, Report};
use crate::error::{CliError, Context};
use crate::fuzz::{run_fuzz, FuzzArgs};
use crate::inputs::{align, load_bundle, load_document, load_structure, parse_group, parse_matrix_operand};

#[derive(Debug, Parser)]
#[command(
    name = "eqbundle",
    version,
    about = "Exact computations with equivariant bundles on P^1"
)]
pub struct Cli {
    /// Print a JSON report document instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a document and check its mathematical invariants.
    Validate { file: String },
    /// Degree of a bundle.
    Degree {
        #[arg(long)]
        bundle: String,
    },
    /// Splitting type, degrees descending.
    SplitType {
        #[arg(long)]
        bundle: String,
    },
    /// A basis of the global sections of E(k).
    Sections {
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i32,
    },
    /// Harder–Narasimhan data: (slope, rank) pairs.
    Hn {
        #[arg(long)]
        bundle: String,
    },
    /// Whether a matrix (`a,b;c,d`) is a bundle map over a group element.
    EquivCheck {
        #[arg(long)]
        bundle: String,
        #[arg(long)]
        group: String,
        #[arg(long)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        map: String,
    },
    /// Whether a bundle admits any structure for the group.
    Obstruction {
        #[arg(long)]
        bundle: String,
        #[arg(long)]
        group: String,
    },
    /// The distinguished structure on `O(d)+…`, `pair:O(d)`, `lift:O(d)` or `tangent`.
    Canonical {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Twist a structure by a character label such as `chi1` or `chi(+1,-1)`.
    TwistChar {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        character: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Decompose a structure into irreducible blocks.
    Decompose {
        #[arg(long)]
        structure: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Check a certificate against a structure.
    VerifyCert {
        #[arg(long)]
        certificate: String,
        #[arg(long)]
        structure: String,
    },
    /// Assemble the structure a certificate describes, optionally on a given bundle.
    Build {
        #[arg(long)]
        certificate: String,
        #[arg(long)]
        bundle: Option<String>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Whether two structures are equivalent.
    Equivalent {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Randomized oracle runs against planted answers.
    Fuzz(FuzzArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Degree { .. } => "degree",
            Command::SplitType { .. } => "split-type",
            Command::Sections { .. } => "sections",
            Command::Hn { .. } => "hn",
            Command::EquivCheck { .. } => "equiv-check",
            Command::Obstruction { .. } => "obstruction",
            Command::Canonical { .. } => "canonical",
            Command::TwistChar { .. } => "twist-char",
            Command::Decompose { .. } => "decompose",
            Command::VerifyCert { .. } => "verify-cert",
            Command::Build { .. } => "build",
            Command::Equivalent { .. } => "equivalent",
            Command::Fuzz(_) => "fuzz",
        }
    }
}

/// The result of a command, before it is printed.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub exit: i32,
    pub summary: String,
    /// Extra lines printed after the summary in plain mode.
    pub details: Vec<String>,
    pub result: Value,
    /// A document produced by the command, printed (or written to `out`) in plain mode.
    pub document: Option<Document>,
    pub out: Option<String>,
}

impl Outcome {
    fn answer(holds: bool, summary: impl Into<String>, result: Value) -> Self {
        Outcome {
            exit: if holds { 0 } else { 1 },
            summary: summary.into(),
            details: Vec::new(),
            result,
            document: None,
            out: None,
        }
    }

    fn ok(summary: impl Into<String>, result: Value) -> Self {
        Self::answer(true, summary, result)
    }

    fn document(doc: Document, out: Option<String>) -> Self {
        let summary = match &out {
            Some(path) => format!("wrote {} document to {path}", doc.kind()),
            None => format!("{} document", doc.kind()),
        };
        Outcome {
            exit: 0,
            summary,
            details: Vec::new(),
            result: doc.to_value(),
            document: Some(doc),
            out,
        }
    }

    pub fn report(&self, command: &str) -> Report {
        Report {
            command: command.to_string(),
            status: match self.exit {
                0 => "ok",
                1 => "false",
                _ => "error",
            }
            .to_string(),
            exit: self.exit,
            summary: self.summary.clone(),
            result: self.result.clone(),
        }
    }

    /// The text written to stdout.
    pub fn render(&self, command: &str, json: bool) -> String {
        if json {
            return Document::Report(self.report(command)).render();
        }
        match (&self.document, &self.out) {
            (Some(doc), None) => doc.render(),
            _ => {
                let mut s = self.summary.clone();
                s.push('\n');
                for line in &self.details {
                    s.push_str(line);
                    s.push('\n');
                }
                s
            }
        }
    }

    /// Writes the document to `out`, if both are present.
    pub fn write_output(&self) -> Result<(), CliError> {
        if let (Some(doc), Some(path)) = (&self.document, &self.out) {
            fs::write(path, doc.render()).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
        }
        Ok(())
    }

    /// How a failed command is reported.
    pub fn from_error(err: &CliError) -> Self {
        let exit = match err {
            CliError::Validation {
                source: eqbundle_core::Error::NoSuchStructure(_),
                ..
            } => 1,
            _ => 2,
        };
        Outcome {
            exit,
            summary: format!("error[{}]: {err}", err.code()),
            details: Vec::new(),
            result: json!({ "code": err.code(), "message": err.to_string() }),
            document: None,
            out: None,
        }
    }
}

fn group_operand(label: &str) -> Result<GroupSpec, CliError> {
    parse_group(label, None).map_err(|e| CliError::usage(format!("--group: {e}")))
}

pub fn run(command: &Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { file } => validate(file),
        Command::Degree { bundle } => {
            let b = load_bundle(bundle)?;
            let d = b.degree();
            Ok(Outcome::ok(d.to_string(), json!({ "degree": d })))
        }
        Command::SplitType { bundle } => {
            let t = load_bundle(bundle)?
                .splitting_type()
                .context(|| "split-type".into())?;
            Ok(Outcome::ok(
                t.to_string(),
                json!({ "splitting_type": t.degrees() }),
            ))
        }
        Command::Sections { bundle, twist } => sections(&load_bundle(bundle)?, *twist),
        Command::Hn { bundle } => {
            let hn = load_bundle(bundle)?.hn_data().context(|| "hn".into())?;
            let steps: Vec<Value> = hn
                .steps
                .iter()
                .map(|(s, r)| json!({ "slope": s, "rank": r }))
                .collect();
            Ok(Outcome::ok(
                hn.to_string(),
                json!({ "steps": steps, "semistable": hn.is_semistable() }),
            ))
        }
        Command::EquivCheck {
            bundle,
            group,
            element,
            map,
        } => {
            let (b, g) = align(load_bundle(bundle)?, group_operand(group)?)?;
            let i = g
                .index_of(element)
                .ok_or_else(|| CliError::usage(format!("--element: {g} has no element {element:?}")))?;
            let n = parse_matrix_operand(map, b.conductor())?;
            let holds = is_bundle_map(&b, &g.moebius(i), &n).context(|| "equiv-check".into())?;
            let verdict = if holds { "is" } else { "is not" };
            Ok(Outcome::answer(
                holds,
                format!("the map {verdict} a bundle map over {element}"),
                json!({ "element": element, "bundle_map": holds }),
            ))
        }
        Command::Obstruction { bundle, group } => obstruction(load_bundle(bundle)?, group_operand(group)?),
        Command::Canonical { group, target, out } => {
            let s = canonical_target(group_operand(group)?, target)?;
            Ok(Outcome::document(Document::Structure(s), out.clone()))
        }
        Command::TwistChar {
            structure,
            character,
            out,
        } => {
            let s = load_structure(structure)?;
            let chi = Character::parse(s.group(), character).ok_or_else(|| {
                CliError::usage(format!(
                    "--character: {} has no character {character:?}",
                    s.group()
                ))
            })?;
            let t = s.twist_by_character(&chi).context(|| "twist-char".into())?;
            Ok(Outcome::document(Document::Structure(t), out.clone()))
        }
        Command::Decompose { structure, out } => {
            let cert = decompose(&load_structure(structure)?).context(|| "decompose".into())?;
            Ok(Outcome::document(Document::Certificate(cert), out.clone()))
        }
        Command::VerifyCert {
            certificate,
            structure,
        } => {
            let cert = load_certificate(certificate)?;
            let s = load_structure(structure)?;
            let verdict = verify_certificate(&cert, &s);
            let summary = match &verdict.reason {
                None => "certificate verified".to_string(),
                Some(reason) => format!("certificate rejected: {reason}"),
            };
            Ok(Outcome::answer(
                verdict.ok,
                summary,
                json!({ "ok": verdict.ok, "reason": verdict.reason }),
            ))
        }
        Command::Build {
            certificate,
            bundle,
            out,
        } => {
            let cert = load_certificate(certificate)?;
            let target = bundle.as_deref().map(load_bundle).transpose()?;
            let target = target
                .map(|b| {
                    if b.conductor() == cert.group.conductor() {
                        Ok(b)
                    } else {
                        b.embed(cert.group.conductor())
                    }
                })
                .transpose()
                .context(|| "--bundle".into())?;
            let s = build_structure(&cert, target.as_ref()).context(|| "build".into())?;
            Ok(Outcome::document(Document::Structure(s), out.clone()))
        }
        Command::Equivalent { left, right } => {
            let (a, b) = (load_structure(left)?, load_structure(right)?);
            let holds = structures_equivalent(&a, &b).context(|| "equivalent".into())?;
            let verdict = if holds { "equivalent" } else { "not equivalent" };
            Ok(Outcome::answer(
                holds,
                format!("structures are {verdict}"),
                json!({ "equivalent": holds }),
            ))
        }
        Command::Fuzz(args) => run_fuzz(args),
    }
}

fn load_certificate(path: &str) -> Result<DecompositionCertificate, CliError> {
    match load_document(path)? {
        Document::Certificate(c) => Ok(c),
        other => Err(CliError::usage(format!(
            "{path}: expected a certificate document, found a {} document",
            other.kind()
        ))),
    }
}

fn validate(path: &str) -> Result<Outcome, CliError> {
    let doc = load_document(path)?;
    let kind = doc.kind();
    match doc {
        Document::Bundle(b) => Ok(Outcome::ok(
            format!(
                "valid bundle: rank {}, degree {}, conductor {}",
                b.rank(),
                b.degree(),
                b.conductor()
            ),
            json!({ "kind": kind, "valid": true }),
        )),
        Document::Structure(s) => {
            let violation = s.violation().context(|| "structure".into())?;
            let summary = match &violation {
                None => format!("valid structure: {} on a rank {} bundle", s.acting(), s.rank()),
                Some(v) => format!("invalid structure: {v}"),
            };
            Ok(Outcome::answer(
                violation.is_none(),
                summary,
                json!({ "kind": kind, "valid": violation.is_none(), "violation": violation.map(|v| v.to_string()) }),
            ))
        }
        Document::Certificate(c) => {
            let problem = certificate_problem(&c);
            let summary = match &problem {
                None => format!(
                    "well-formed certificate: {} blocks of total rank {}",
                    c.blocks.len(),
                    c.rank()
                ),
                Some(p) => format!("malformed certificate: {p}"),
            };
            Ok(Outcome::answer(
                problem.is_none(),
                summary,
                json!({ "kind": kind, "valid": problem.is_none(), "reason": problem }),
            ))
        }
        Document::Report(r) => Ok(Outcome::ok(
            format!("well-formed report from {}", r.command),
            json!({ "kind": kind, "valid": true }),
        )),
    }
}

/// Self-consistency of a certificate without a structure to compare against.
fn certificate_problem(c: &DecompositionCertificate) -> Option<String> {
    for b in &c.blocks {
        let parity_ok = match b {
            Block::Line { degree, .. } => !c.group.is_klein() || degree.rem_euclid(2) == 0,
            Block::Pair { degree } => c.group.is_klein() && degree.rem_euclid(2) == 1,
        };
        if !parity_ok {
            return Some(format!(
                "E_PARITY: block {b:?} has the wrong parity for {}",
                c.group
            ));
        }
    }
    if !c.is_sorted() {
        return Some("E_ORDER: blocks are not in canonical order".into());
    }
    let f = &c.change_of_frame;
    if f.rows() != c.rank() || f.cols() != c.rank() {
        return Some(format!(
            "E_SHAPE: change of frame is {}x{} for rank {}",
            f.rows(),
            f.cols(),
            c.rank()
        ));
    }
    if f.inverse().is_err() {
        return Some("E_FRAME: change of frame is not invertible".into());
    }
    None
}

fn sections(b: &VectorBundle, k: i32) -> Result<Outcome, CliError> {
    let basis = b.twisted_sections(k);
    let mut out = Outcome::ok(
        format!("h0(E({k})) = {}", basis.len()),
        json!({
            "twist": k,
            "h0": basis.len(),
            "sections": basis
                .iter()
                .map(|s| json!({
                    "s_zero": s.s_zero.iter().map(poly_value).collect::<Vec<_>>(),
                    "s_infty": s.s_infty.iter().map(poly_value).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>(),
        }),
    );
    out.details = basis
        .iter()
        .map(|s| {
            let parts: Vec<String> = s.s_zero.iter().map(|p| p.to_string()).collect();
            format!("[{}]", parts.join(", "))
        })
        .collect();
    Ok(out)
}

fn obstruction(bundle: VectorBundle, group: GroupSpec) -> Result<Outcome, CliError> {
    let (bundle, group) = align(bundle, group)?;
    let admits = existence(&bundle, &group).context(|| "obstruction".into())?;
    let t = bundle.splitting_type().context(|| "obstruction".into())?;
    if admits {
        return Ok(Outcome::ok(
            format!("unobstructed: {t} admits a {group} structure"),
            json!({ "admits": true, "splitting_type": t.degrees() }),
        ));
    }
    let (d, mult) = t
        .grouped()
        .into_iter()
        .find(|&(d, mult)| d.rem_euclid(2) == 1 && mult % 2 == 1)
        .expect("an obstructed splitting type has an odd degree of odd multiplicity");
    Ok(Outcome::answer(
        false,
        format!("obstructed: odd degree {d} occurs with odd multiplicity {mult} in {t}"),
        json!({ "admits": false, "splitting_type": t.degrees(), "reason": "odd degree", "degree": d, "multiplicity": mult }),
    ))
}

/// Expands a canonical target to a structure over the group's natural conductor.
fn canonical_target(group: GroupSpec, target: &str) -> Result<EquivariantStructure, CliError> {
    let target = target.trim();
    let line_degree = |text: &str| -> Result<i32, CliError> {
        text.trim()
            .strip_prefix("O(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|d| d.trim().parse().ok())
            .ok_or_else(|| CliError::usage(format!("--target: cannot read {text:?} as O(d)")))
    };
    let single = |c: Canonical| canonical_structure(group, c).context(|| format!("canonical {target}"));
    if target == "tangent" {
        return single(Canonical::Tangent);
    }
    if let Some(rest) = target.strip_prefix("lift:") {
        return single(Canonical::LiftLine(line_degree(rest)?));
    }
    if let Some(rest) = target.strip_prefix("pair:") {
        return single(Canonical::OddPair(line_degree(rest)?));
    }
    // A direct sum of `tangent` and powers of lines; under the Klein group equal odd degrees
    // are paired, at the position of their first occurrence.
    let mut summands: Vec<Option<i32>> = Vec::new();
    for summand in target.split('+') {
        if summand.trim() == "tangent" {
            summands.push(None);
            continue;
        }
        let (line, power) = match summand.split_once('^') {
            Some((l, p)) => (
                l,
                p.trim()
                    .parse::<usize>()
                    .ok()
                    .filter(|&p| p > 0)
                    .ok_or_else(|| CliError::usage(format!("--target: bad power in {summand:?}")))?,
            ),
            None => (summand, 1),
        };
        let d = line_degree(line)?;
        summands.extend(std::iter::repeat_n(Some(d), power));
    }
    let mut parts = Vec::new();
    let mut unpaired: Vec<i32> = Vec::new();
    for summand in &summands {
        match *summand {
            None => parts.push(single(Canonical::Tangent)?),
            Some(d) if group.is_klein() && d.rem_euclid(2) == 1 => {
                if let Some(at) = unpaired.iter().position(|&u| u == d) {
                    unpaired.remove(at);
                } else {
                    unpaired.push(d);
                    parts.push(single(Canonical::OddPair(d))?);
                }
            }
            Some(d) => parts.push(single(Canonical::Line(d))?),
        }
    }
    if let Some(&d) = unpaired.first() {
        let mult = summands.iter().filter(|&&s| s == Some(d)).count();
        return Err(CliError::Validation {
            context: format!("canonical {target}"),
            source: eqbundle_core::Error::NoSuchStructure(format!(
                "odd degree {d} occurs with odd multiplicity {mult}"
            )),
        });
    }
    let mut iter = parts.into_iter();
    let first = iter.next().ok_or_else(|| CliError::usage("--target is empty"))?;
    iter.try_fold(first, |acc, s| acc.direct_sum(&s))
        .context(|| format!("canonical {target}"))
}
