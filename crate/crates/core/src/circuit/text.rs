//! Line-oriented circuit text format.
//!
//! ```text
//! CIRCUIT n=2
//! # layers are applied top to bottom
//! L u(0;1.0000000000000000e0,2.5000000000000000e-1,0.0000000000000000e0) c1(1;3)
//! E cnot(0,1)
//! M c1(0;7) cnot(1,2)
//! ```
//!
//! `L` lines hold single-qubit gates, `E` lines hold `cnot` gates and `M`
//! lines may hold both. `u(q;psi,phi,theta)` is the ZXZXZ gate with `psi`
//! applied first; `c1(q;id)` is a Clifford from the canonical table. Blank
//! lines and `#` comments are ignored. Angles are written with 17
//! significant digits so parsing recovers them bit for bit.

use std::fmt::Write as _;

use super::{Circuit, Gate, Layer, LayerKind};
use crate::clifford::CliffordId;
use crate::error::{Error, Result};

pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("CIRCUIT n={}\n", c.width());
    for l in c.layers() {
        out.push(l.kind().tag());
        for g in l.gates() {
            out.push(' ');
            match g {
                Gate::U { qubit, angles } => {
                    let _ = write!(
                        out,
                        "u({qubit};{:.16e},{:.16e},{:.16e})",
                        angles.psi, angles.phi, angles.theta
                    );
                }
                Gate::Clifford { qubit, id } => {
                    let _ = write!(out, "c1({qubit};{id})");
                }
                Gate::Cnot { control, target } => {
                    let _ = write!(out, "cnot({control},{target})");
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with_comments(text).map(|(c, _)| c)
}

/// Parses a circuit and also returns its comment lines (without the `#`),
/// each paired with its 1-based line number.
pub fn parse_circuit_with_comments(text: &str) -> Result<(Circuit, Vec<(usize, String)>)> {
    let mut comments = Vec::new();
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim_start();
        let indent = raw.len() - trimmed.len();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('#') {
            comments.push((line_no, rest.trim().to_string()));
            continue;
        }
        match &mut circuit {
            None => circuit = Some(parse_header(trimmed, line_no, indent)?),
            Some(c) => {
                let layer = parse_layer(trimmed, c.width(), line_no, indent)?;
                c.push(layer)?;
            }
        }
    }
    let circuit = circuit.ok_or_else(|| Error::EmptyInput("missing CIRCUIT header".into()))?;
    Ok((circuit, comments))
}

fn parse_header(line: &str, line_no: usize, indent: usize) -> Result<Circuit> {
    let rest = line
        .strip_prefix("CIRCUIT")
        .ok_or_else(|| Error::parse(line_no, indent + 1, "expected `CIRCUIT n=<width>` header"))?;
    let rest = rest.trim();
    let n = rest
        .strip_prefix("n=")
        .and_then(|v| v.trim().parse::<usize>().ok())
        .ok_or_else(|| {
            Error::parse(
                line_no,
                indent + 9,
                format!("bad width in header: {rest:?}"),
            )
        })?;
    if n > crate::bits::MAX_QUBITS {
        return Err(Error::WidthLimit {
            what: "circuit",
            n,
            limit: crate::bits::MAX_QUBITS,
        });
    }
    Ok(Circuit::new(n))
}

fn parse_layer(line: &str, n: usize, line_no: usize, indent: usize) -> Result<Layer> {
    let mut chars = line.char_indices();
    let kind = match chars.next() {
        Some((_, 'L')) => LayerKind::Local,
        Some((_, 'E')) => LayerKind::Entangling,
        Some((_, 'M')) => LayerKind::Mixed,
        _ => {
            return Err(Error::parse(
                line_no,
                indent + 1,
                "layer lines start with L, E or M",
            ))
        }
    };
    let body = &line[1..];
    if !body.is_empty() && !body.starts_with(char::is_whitespace) {
        return Err(Error::parse(
            line_no,
            indent + 2,
            "expected whitespace after layer tag",
        ));
    }
    let mut gates = Vec::new();
    let mut pos = 1;
    while pos < line.len() {
        let rest = &line[pos..];
        let skip = rest.len() - rest.trim_start().len();
        pos += skip;
        if pos >= line.len() {
            break;
        }
        let col = indent + pos + 1;
        let rest = &line[pos..];
        let open = rest
            .find('(')
            .ok_or_else(|| Error::parse(line_no, col, "expected `(` after gate name"))?;
        let close = rest
            .find(')')
            .ok_or_else(|| Error::parse(line_no, col, "unterminated gate arguments"))?;
        if close < open {
            return Err(Error::parse(line_no, col, "unbalanced parentheses"));
        }
        let name = &rest[..open];
        let args = &rest[open + 1..close];
        gates.push(parse_gate(name, args, line_no, col)?);
        pos += close + 1;
    }
    Layer::new(n, kind, gates).map_err(|e| match e {
        Error::InvalidArgument(m) => Error::parse(line_no, indent + 1, m),
        other => other,
    })
}

fn parse_index(s: &str, line_no: usize, col: usize) -> Result<usize> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line_no, col, format!("bad qubit index {s:?}")))
}

fn parse_angle(s: &str, line_no: usize, col: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::parse(line_no, col, format!("bad angle {s:?}")))?;
    if !v.is_finite() {
        return Err(Error::parse(line_no, col, "angles must be finite"));
    }
    Ok(v)
}

fn parse_gate(name: &str, args: &str, line_no: usize, col: usize) -> Result<Gate> {
    match name.trim() {
        "u" => {
            let (q, angles) = args
                .split_once(';')
                .ok_or_else(|| Error::parse(line_no, col, "u gate needs `q;psi,phi,theta`"))?;
            let a: Vec<&str> = angles.split(',').collect();
            if a.len() != 3 {
                return Err(Error::parse(line_no, col, "u gate needs three angles"));
            }
            Ok(Gate::u(
                parse_index(q, line_no, col)?,
                parse_angle(a[0], line_no, col)?,
                parse_angle(a[1], line_no, col)?,
                parse_angle(a[2], line_no, col)?,
            ))
        }
        "c1" => {
            let (q, id) = args
                .split_once(';')
                .ok_or_else(|| Error::parse(line_no, col, "c1 gate needs `q;id`"))?;
            let id: u32 = id
                .trim()
                .parse()
                .map_err(|_| Error::parse(line_no, col, format!("bad Clifford id {id:?}")))?;
            Ok(Gate::clifford(
                parse_index(q, line_no, col)?,
                CliffordId::new(id)?,
            ))
        }
        "cnot" => {
            let (c, t) = args
                .split_once(',')
                .ok_or_else(|| Error::parse(line_no, col, "cnot needs `control,target`"))?;
            Ok(Gate::cnot(
                parse_index(c, line_no, col)?,
                parse_index(t, line_no, col)?,
            ))
        }
        other => Err(Error::UnsupportedGate(format!(
            "{other:?} at line {line_no}, column {col}"
        ))),
    }
}
