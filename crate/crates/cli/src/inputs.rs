//! Command-line operands: named bundle shortcuts, group labels, and document files.

use std::fs;

use eqbundle_core::{EquivariantStructure, GroupKind, GroupSpec, LaurentMatrix, VectorBundle};
use num_integer::Integer;

use crate::document::Document;
use crate::error::{CliError, Context};

/// `klein` or `cyclic(n)`, realized over the given conductor or the natural one.
pub fn parse_group(label: &str, conductor: Option<u32>) -> Result<GroupSpec, String> {
    let label = label.trim();
    let group = if label == "klein" {
        GroupSpec::klein()
    } else if let Some(n) = label.strip_prefix("cyclic(").and_then(|r| r.strip_suffix(')')) {
        let n: u32 = n
            .trim()
            .parse()
            .map_err(|_| format!("group order in {label:?} is not a positive integer"))?;
        GroupSpec::cyclic(n).map_err(|e| e.to_string())?
    } else {
        return Err(format!(
            "unknown group {label:?}; expected \"klein\" or \"cyclic(n)\""
        ));
    };
    match conductor {
        None => Ok(group),
        Some(m) => match group.kind() {
            GroupKind::Klein => GroupSpec::klein_in(m),
            GroupKind::Cyclic(n) => GroupSpec::cyclic_in(n, m),
        }
        .map_err(|e| e.to_string()),
    }
}

/// Expands `O(d)`, `O(d)^k`, `O(d)+O(e)+…` and `tangent` over conductor 1.
pub fn parse_shortcut(text: &str) -> Option<VectorBundle> {
    let text = text.trim();
    if text == "tangent" {
        return Some(VectorBundle::tangent(1));
    }
    let mut degrees = Vec::new();
    for summand in text.split('+') {
        let summand = summand.trim();
        let (line, power) = match summand.split_once('^') {
            Some((l, p)) => (l.trim(), p.trim().parse::<usize>().ok().filter(|&p| p > 0)?),
            None => (summand, 1),
        };
        let d: i32 = line.strip_prefix("O(")?.strip_suffix(')')?.trim().parse().ok()?;
        degrees.extend(std::iter::repeat_n(d, power));
    }
    Some(VectorBundle::split(1, &degrees))
}

pub fn read_text(path: &str) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

pub fn load_document(path: &str) -> Result<Document, CliError> {
    Document::parse(&read_text(path)?, path)
}

/// A shortcut, the path of a bundle document, or of a structure document (its bundle).
pub fn load_bundle(operand: &str) -> Result<VectorBundle, CliError> {
    if let Some(b) = parse_shortcut(operand) {
        return Ok(b);
    }
    match load_document(operand)? {
        Document::Bundle(b) => Ok(b),
        Document::Structure(s) => Ok(s.bundle().clone()),
        other => Err(CliError::usage(format!(
            "{operand}: expected a bundle document, found a {} document",
            other.kind()
        ))),
    }
}

pub fn load_structure(path: &str) -> Result<EquivariantStructure, CliError> {
    match load_document(path)? {
        Document::Structure(s) => Ok(s),
        other => Err(CliError::usage(format!(
            "{path}: expected a structure document, found a {} document",
            other.kind()
        ))),
    }
}

/// The smallest conductor containing both the bundle's scalars and the group's action.
pub fn common_conductor(bundle_conductor: u32, group: &GroupSpec) -> u32 {
    bundle_conductor.lcm(&group.conductor())
}

/// Realizes a bundle and a group over a shared conductor.
pub fn align(bundle: VectorBundle, group: GroupSpec) -> Result<(VectorBundle, GroupSpec), CliError> {
    let m = common_conductor(bundle.conductor(), &group);
    let bundle = bundle.embed(m).context(|| "bundle".to_string())?;
    let group = group.with_conductor(m).context(|| "group".to_string())?;
    Ok((bundle, group))
}

/// Parses a square matrix operand: rows separated by `;`, entries by `,`, as in `z^2,0;0,1`.
pub fn parse_matrix_operand(text: &str, conductor: u32) -> Result<LaurentMatrix, CliError> {
    let rows = text
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    eqbundle_core::exactalg::parse_laurent(e.trim(), conductor)
                        .context(|| format!("matrix entry {:?}", e.trim()))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    LaurentMatrix::from_rows(conductor, rows).context(|| "matrix".to_string())
}
