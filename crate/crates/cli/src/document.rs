//! JSON documents: `bundle`, `structure`, `certificate` and `report`.
//!
//! Every document declares its conductor explicitly. Laurent polynomials are rendered as
//! exponent → coefficient maps (exponents descending, coefficients in canonical scalar text);
//! on input a plain expression string such as `"z^2-1"` is accepted as well.

use eqbundle_core::exactalg::{parse_cycnum, parse_laurent};
use eqbundle_core::{
    Acting, Block, Character, DecompositionCertificate, EquivariantStructure, GroupSpec, LaurentMatrix,
    LaurentPoly, VectorBundle,
};
use serde_json::{json, Map, Value};

use crate::error::{CliError, Context};
use crate::inputs::parse_group;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub exit: i32,
    pub summary: String,
    pub result: Value,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Document {
    Bundle(VectorBundle),
    Structure(EquivariantStructure),
    Certificate(DecompositionCertificate),
    Report(Report),
}

impl Document {
    pub fn kind(&self) -> &'static str {
        match self {
            Document::Bundle(_) => "bundle",
            Document::Structure(_) => "structure",
            Document::Certificate(_) => "certificate",
            Document::Report(_) => "report",
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Document::Bundle(b) => bundle_value(b),
            Document::Structure(s) => structure_value(s),
            Document::Certificate(c) => certificate_value(c),
            Document::Report(r) => json!({
                "kind": "report",
                "command": r.command,
                "status": r.status,
                "exit": r.exit,
                "summary": r.summary,
                "result": r.result,
            }),
        }
    }

    /// Canonical text, newline-terminated: one field per line, with values that fit on a
    /// line (matrix rows, polynomials) kept inline.
    pub fn render(&self) -> String {
        let mut s = String::new();
        layout(&self.to_value(), 0, &mut s);
        s.push('\n');
        s
    }

    pub fn parse(text: &str, path: &str) -> Result<Document, CliError> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::parse(path, e.line(), e.column(), e.to_string()))?;
        Reader { text, path }.document(&value)
    }
}

const LINE_WIDTH: usize = 100;

fn inline(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        Value::Object(map) => format!(
            "{{{}}}",
            map.iter()
                .map(|(k, v)| format!("{}: {}", Value::String(k.clone()), inline(v)))
                .collect::<Vec<_>>()
                .join(", ")
        ),
        scalar => scalar.to_string(),
    }
}

fn layout(v: &Value, indent: usize, out: &mut String) {
    let flat = inline(v);
    let pad = "  ".repeat(indent + 1);
    match v {
        Value::Array(items) if indent + flat.len() > LINE_WIDTH && !items.is_empty() => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                layout(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push(']');
        }
        Value::Object(map)
            if (indent > 0 && indent + flat.len() > LINE_WIDTH) || (indent == 0 && !map.is_empty()) =>
        {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                out.push_str(&pad);
                out.push_str(&Value::String(k.clone()).to_string());
                out.push_str(": ");
                layout(item, indent + 1, out);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&"  ".repeat(indent));
            out.push('}');
        }
        _ => out.push_str(&flat),
    }
}

pub fn poly_value(p: &LaurentPoly) -> Value {
    let mut terms: Vec<(i32, String)> = p.terms().map(|(e, c)| (e, c.to_string())).collect();
    terms.sort_by_key(|t| std::cmp::Reverse(t.0));
    Value::Object(
        terms
            .into_iter()
            .map(|(e, c)| (e.to_string(), Value::String(c)))
            .collect(),
    )
}

pub fn matrix_value(m: &LaurentMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(poly_value).collect()))
            .collect(),
    )
}

fn bundle_value(b: &VectorBundle) -> Value {
    json!({
        "kind": "bundle",
        "conductor": b.conductor(),
        "rank": b.rank(),
        "transition": matrix_value(b.transition()),
    })
}

fn acting_label(a: &Acting) -> &'static str {
    if a.is_lift() {
        "klein-lift"
    } else {
        "genuine"
    }
}

fn structure_value(s: &EquivariantStructure) -> Value {
    let acting = s.acting();
    let maps: Map<String, Value> = (0..acting.order())
        .map(|g| (acting.name(g), matrix_value(s.map(g))))
        .collect();
    json!({
        "kind": "structure",
        "group": s.group().label(),
        "acting": acting_label(&acting),
        "bundle": bundle_value(s.bundle()),
        "maps": maps,
    })
}

fn block_value(b: &Block) -> Value {
    match b {
        Block::Line { degree, character } => json!({
            "type": "line",
            "degree": degree,
            "character": character.label(),
        }),
        Block::Pair { degree } => json!({ "type": "pair", "degree": degree }),
    }
}

fn certificate_value(c: &DecompositionCertificate) -> Value {
    json!({
        "kind": "certificate",
        "group": c.group.label(),
        "conductor": c.group.conductor(),
        "blocks": c.blocks.iter().map(block_value).collect::<Vec<_>>(),
        "change_of_frame": matrix_value(&c.change_of_frame),
    })
}

/// Converts JSON values into documents, attributing errors to source positions.
struct Reader<'a> {
    text: &'a str,
    path: &'a str,
}

impl Reader<'_> {
    /// Position of the first occurrence of a string literal, for error messages.
    fn locate(&self, literal: &str, inner: usize) -> (usize, usize) {
        let quoted = serde_json::to_string(literal).expect("strings serialize");
        let Some(at) = self.text.find(&quoted) else {
            return (1, 1);
        };
        let before = &self.text[..at];
        let line = before.matches('\n').count() + 1;
        let col = before.rfind('\n').map_or(at, |nl| at - nl - 1) + 2 + inner;
        (line, col)
    }

    fn err(&self, where_: &str, message: impl Into<String>) -> CliError {
        CliError::parse(self.path, 1, 1, format!("{where_}: {}", message.into()))
    }

    fn literal_err(&self, literal: &str, offset: usize, message: impl Into<String>) -> CliError {
        let (line, column) = self.locate(literal, offset);
        CliError::parse(self.path, line, column, message)
    }

    fn field<'v>(&self, obj: &'v Value, key: &str, where_: &str) -> Result<&'v Value, CliError> {
        obj.get(key)
            .ok_or_else(|| self.err(where_, format!("missing field \"{key}\"")))
    }

    fn string<'v>(&self, obj: &'v Value, key: &str, where_: &str) -> Result<&'v str, CliError> {
        self.field(obj, key, where_)?
            .as_str()
            .ok_or_else(|| self.err(where_, format!("\"{key}\" must be a string")))
    }

    fn integer(&self, obj: &Value, key: &str, where_: &str) -> Result<i64, CliError> {
        self.field(obj, key, where_)?
            .as_i64()
            .ok_or_else(|| self.err(where_, format!("\"{key}\" must be an integer")))
    }

    fn conductor(&self, obj: &Value, where_: &str) -> Result<u32, CliError> {
        let m = self.integer(obj, "conductor", where_)?;
        u32::try_from(m)
            .ok()
            .filter(|&m| m > 0)
            .ok_or_else(|| self.err(where_, format!("conductor must be a positive integer, got {m}")))
    }

    fn document(&self, v: &Value) -> Result<Document, CliError> {
        if !v.is_object() {
            return Err(self.err("document", "expected a JSON object"));
        }
        match self.string(v, "kind", "document")? {
            "bundle" => Ok(Document::Bundle(self.bundle(v, "bundle")?)),
            "structure" => Ok(Document::Structure(self.structure(v)?)),
            "certificate" => Ok(Document::Certificate(self.certificate(v)?)),
            "report" => Ok(Document::Report(Report {
                command: self.string(v, "command", "report")?.to_string(),
                status: self.string(v, "status", "report")?.to_string(),
                exit: self.integer(v, "exit", "report")? as i32,
                summary: self.string(v, "summary", "report")?.to_string(),
                result: self.field(v, "result", "report")?.clone(),
            })),
            other => Err(self.err("document", format!("unknown kind \"{other}\""))),
        }
    }

    fn poly(&self, v: &Value, m: u32, where_: &str) -> Result<LaurentPoly, CliError> {
        match v {
            Value::String(s) => parse_laurent(s, m).map_err(|e| match e {
                eqbundle_core::Error::Parse { offset, message } => {
                    self.literal_err(s, offset, format!("{where_}: {message}"))
                }
                other => self.literal_err(s, 0, format!("{where_}: {other}")),
            }),
            Value::Object(terms) => {
                let mut out = Vec::with_capacity(terms.len());
                for (e, c) in terms {
                    let exp: i32 = e.trim().parse().map_err(|_| {
                        self.literal_err(e, 0, format!("{where_}: exponent \"{e}\" is not an integer"))
                    })?;
                    let text = c
                        .as_str()
                        .ok_or_else(|| self.err(where_, "coefficients must be strings"))?;
                    let coeff = parse_cycnum(text, m).map_err(|err| match err {
                        eqbundle_core::Error::Parse { offset, message } => {
                            self.literal_err(text, offset, format!("{where_}: {message}"))
                        }
                        other => self.literal_err(text, 0, format!("{where_}: {other}")),
                    })?;
                    out.push((exp, coeff));
                }
                LaurentPoly::from_terms(m, out).context(|| where_.to_string())
            }
            Value::Number(n) if n.is_i64() => Ok(LaurentPoly::from_i64(m, n.as_i64().expect("checked"))),
            _ => Err(self.err(where_, "expected an expression string or exponent map")),
        }
    }

    fn matrix(&self, v: &Value, m: u32, where_: &str) -> Result<LaurentMatrix, CliError> {
        let rows = v
            .as_array()
            .ok_or_else(|| self.err(where_, "expected an array of rows"))?;
        let mut out = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let entries = row
                .as_array()
                .ok_or_else(|| self.err(where_, format!("row {i} is not an array")))?;
            out.push(
                entries
                    .iter()
                    .enumerate()
                    .map(|(j, e)| self.poly(e, m, &format!("{where_}[{i}][{j}]")))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        LaurentMatrix::from_rows(m, out).context(|| where_.to_string())
    }

    fn bundle(&self, v: &Value, where_: &str) -> Result<VectorBundle, CliError> {
        let m = self.conductor(v, where_)?;
        let rank = self.integer(v, "rank", where_)?;
        let t = self.matrix(
            self.field(v, "transition", where_)?,
            m,
            &format!("{where_}.transition"),
        )?;
        if t.rows() as i64 != rank || t.cols() as i64 != rank {
            return Err(self.err(
                where_,
                format!(
                    "declared rank {rank} but the transition is {}x{}",
                    t.rows(),
                    t.cols()
                ),
            ));
        }
        VectorBundle::new(t).context(|| format!("{where_}.transition"))
    }

    fn group(&self, v: &Value, where_: &str, conductor: u32) -> Result<GroupSpec, CliError> {
        let label = self.string(v, "group", where_)?;
        parse_group(label, Some(conductor))
            .map_err(|e| self.literal_err(label, 0, format!("{where_}.group: {e}")))
    }

    fn structure(&self, v: &Value) -> Result<EquivariantStructure, CliError> {
        let bundle_v = self.field(v, "bundle", "structure")?;
        let bundle = self.bundle(bundle_v, "structure.bundle")?;
        let m = bundle.conductor();
        let group = self.group(v, "structure", m)?;
        let acting = match v.get("acting").map(|a| a.as_str()) {
            None | Some(Some("genuine")) => Acting::Genuine(group),
            Some(Some("klein-lift")) if group.is_klein() => Acting::KleinLift(group),
            Some(Some(other)) => {
                return Err(self.literal_err(
                    other,
                    0,
                    format!("structure.acting: unknown acting group \"{other}\""),
                ))
            }
            Some(None) => return Err(self.err("structure", "\"acting\" must be a string")),
        };
        let maps = self
            .field(v, "maps", "structure")?
            .as_object()
            .ok_or_else(|| self.err("structure", "\"maps\" must map element names to matrices"))?;
        let named = maps
            .iter()
            .map(|(name, mat)| {
                Ok((
                    name.clone(),
                    self.matrix(mat, m, &format!("structure.maps.{name}"))?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        EquivariantStructure::from_named(bundle, acting, named).context(|| "structure".to_string())
    }

    fn certificate(&self, v: &Value) -> Result<DecompositionCertificate, CliError> {
        let m = self.conductor(v, "certificate")?;
        let group = self.group(v, "certificate", m)?;
        let blocks_v = self
            .field(v, "blocks", "certificate")?
            .as_array()
            .ok_or_else(|| self.err("certificate", "\"blocks\" must be an array"))?;
        let mut blocks = Vec::with_capacity(blocks_v.len());
        for (i, b) in blocks_v.iter().enumerate() {
            let where_ = format!("certificate.blocks[{i}]");
            let degree = i32::try_from(self.integer(b, "degree", &where_)?)
                .map_err(|_| self.err(&where_, "degree out of range"))?;
            blocks.push(match self.string(b, "type", &where_)? {
                "line" => {
                    let label = self.string(b, "character", &where_)?;
                    let character = Character::parse(group, label).ok_or_else(|| {
                        self.literal_err(label, 0, format!("{where_}: no character \"{label}\" of {group}"))
                    })?;
                    Block::Line { degree, character }
                }
                "pair" => Block::Pair { degree },
                other => return Err(self.err(&where_, format!("unknown block type \"{other}\""))),
            });
        }
        let change_of_frame = self.matrix(
            self.field(v, "change_of_frame", "certificate")?,
            m,
            "certificate.change_of_frame",
        )?;
        Ok(DecompositionCertificate {
            group,
            blocks,
            change_of_frame,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundle_from_expression_strings() {
        let text = r#"{"kind": "bundle", "conductor": 4, "rank": 1, "transition": [["z^-1"]]}"#;
        let Document::Bundle(b) = Document::parse(text, "inline").unwrap() else {
            panic!("expected a bundle");
        };
        assert_eq!(b, VectorBundle::line(4, -1));
        let again = Document::parse(&Document::Bundle(b.clone()).render(), "rendered").unwrap();
        assert_eq!(again, Document::Bundle(b));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\"kind\": \"bundle\", \"conductor\": 1, \"rank\": 1,\n \"transition\": [[\"z^^2\"]]}";
        match Document::parse(text, "bad.json") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 21)),
            other => panic!("unexpected {other:?}"),
        }
        match Document::parse("{\"kind\": ", "cut.json") {
            Err(CliError::Parse { line: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
