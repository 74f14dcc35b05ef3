use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;

use super::{Circuit, ControlTable, Gate, GateKind};
use crate::error::{parse_err, Error, Result};

fn strip_comment(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

/// Parses circuit text; `ctrl` suffixes are rejected (no file access).
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with(text, &mut |name: &str| {
        Err(Error::InvalidArgument(format!(
            "control table `{name}` referenced but no loader is available"
        )))
    })
}

/// Parses a circuit file, resolving control tables relative to its directory.
pub fn parse_circuit_file(path: &Path) -> Result<Circuit> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_circuit_with(&text, &mut |name: &str| {
        Ok(std::fs::read_to_string(dir.join(name))?)
    })
}

/// Parses circuit text with `load` supplying control-table contents by name.
pub fn parse_circuit_with(
    text: &str,
    load: &mut dyn FnMut(&str) -> Result<String>,
) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let Some(c) = circuit.as_mut() else {
            circuit = Some(parse_header(line, lineno)?);
            continue;
        };
        let (gate_part, ctrl) = match line.split_once(" ctrl ") {
            Some((g, f)) => (g.trim(), Some(f.trim())),
            None => (line, None),
        };
        let gate = parse_gate_line(gate_part).map_err(|m| parse_err(lineno, m))?;
        c.push(gate).map_err(|e| parse_err(lineno, e.to_string()))?;
        if let Some(name) = ctrl {
            let body = load(name).map_err(|e| parse_err(lineno, e.to_string()))?;
            let table = parse_table(&body)
                .map_err(|e| parse_err(lineno, format!("in control table {name}: {e}")))?;
            c.control_last(table)
                .map_err(|e| parse_err(lineno, e.to_string()))?;
        }
    }
    circuit.ok_or_else(|| parse_err(0, "missing `qubits N` header"))
}

fn parse_header(line: &str, lineno: usize) -> Result<Circuit> {
    let mut it = line.split_whitespace();
    match (it.next(), it.next(), it.next()) {
        (Some("qubits"), Some(n), None) => {
            let n: usize = n
                .parse()
                .map_err(|_| parse_err(lineno, format!("invalid qubit count `{n}`")))?;
            if n > crate::bits::MAX_BITS {
                return Err(parse_err(lineno, "at most 64 qubits"));
            }
            Ok(Circuit::new(n))
        }
        _ => Err(parse_err(lineno, "expected `qubits N`")),
    }
}

fn parse_table(text: &str) -> Result<ControlTable> {
    let mut table: Option<ControlTable> = None;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match (head, table.as_mut()) {
            ("controls", None) => {
                let qs = rest
                    .split_whitespace()
                    .map(|t| parse_qubit(t).map_err(|m| parse_err(lineno, m)))
                    .collect::<Result<Vec<_>>>()?;
                if qs.is_empty() {
                    return Err(parse_err(lineno, "no control qubits"));
                }
                table = Some(ControlTable::new(qs));
            }
            ("when", Some(t)) => {
                let rest = rest.trim();
                let (bits, gate) = rest
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| parse_err(lineno, "expected `when <bits> <gate>`"))?;
                if bits.len() != t.controls.len() {
                    return Err(parse_err(
                        lineno,
                        format!("expected {} control bits", t.controls.len()),
                    ));
                }
                let mut v = 0u64;
                for (k, ch) in bits.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' => v |= 1 << k,
                        _ => return Err(parse_err(lineno, format!("bad control bit {ch:?}"))),
                    }
                }
                let g = parse_gate_line(gate.trim()).map_err(|m| parse_err(lineno, m))?;
                t.table.insert(v, g);
            }
            ("controls", Some(_)) => return Err(parse_err(lineno, "duplicate `controls` line")),
            (_, None) => return Err(parse_err(lineno, "expected `controls q...` first")),
            (other, Some(_)) => {
                return Err(parse_err(lineno, format!("unknown directive `{other}`")))
            }
        }
    }
    table.ok_or_else(|| parse_err(0, "empty control table"))
}

fn parse_qubit(tok: &str) -> std::result::Result<usize, String> {
    tok.parse()
        .map_err(|_| format!("invalid qubit index `{tok}`"))
}

/// Parses a real number, also accepting `pi` expressions such as `-3*pi/4`.
pub(crate) fn parse_real(tok: &str) -> std::result::Result<f64, String> {
    if let Ok(v) = tok.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("invalid number `{tok}`");
    let (sign, body) = match tok.strip_prefix('-') {
        Some(b) => (-1.0, b),
        None => (1.0, tok),
    };
    let (num, den) = match body.split_once('/') {
        Some((a, b)) => (a, b.parse::<f64>().map_err(|_| bad())?),
        None => (body, 1.0),
    };
    let factor = match num.strip_suffix("pi") {
        Some("") => 1.0,
        Some(k) => k
            .strip_suffix('*')
            .and_then(|k| k.parse::<f64>().ok())
            .ok_or_else(bad)?,
        None => return Err(bad()),
    };
    Ok(sign * factor * PI / den)
}

pub(crate) fn parse_complex(tok: &str) -> std::result::Result<Complex64, String> {
    match tok.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse_real(re)?, parse_real(im)?)),
        None => Ok(Complex64::new(parse_real(tok)?, 0.0)),
    }
}

/// Parses a single gate description such as `h 0`, `rz 1 0.25` or
/// `matrix 1 0 0,0 1,0 1,0 0,0`.
pub fn parse_gate_line(line: &str) -> std::result::Result<Gate, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    let (&name, args) = toks.split_first().ok_or("empty gate line")?;
    let name = name.to_ascii_lowercase();
    let qubits = |k: usize| -> std::result::Result<Vec<usize>, String> {
        if args.len() != k {
            return Err(format!("`{name}` takes {k} qubit argument(s)"));
        }
        args.iter().map(|t| parse_qubit(t)).collect()
    };
    let one = |f: fn(usize) -> Gate| qubits(1).map(|q| f(q[0]));
    let two = |f: fn(usize, usize) -> Gate| -> std::result::Result<Gate, String> {
        let q = qubits(2)?;
        if q[0] == q[1] {
            return Err(format!("`{name}` needs two distinct qubits"));
        }
        Ok(f(q[0], q[1]))
    };
    match name.as_str() {
        "h" => one(Gate::h),
        "s" => one(Gate::s),
        "sdg" => one(Gate::sdg),
        "t" => one(Gate::t),
        "tdg" => one(Gate::tdg),
        "x" => one(Gate::x),
        "y" => one(Gate::y),
        "z" => one(Gate::z),
        "cz" => two(Gate::cz),
        "cx" | "cnot" => two(Gate::cnot),
        "rz" => {
            if args.len() != 2 {
                return Err("`rz` takes a qubit and an angle".into());
            }
            Ok(Gate::rz(parse_qubit(args[0])?, parse_real(args[1])?))
        }
        "matrix" => {
            let (&w, rest) = args.split_first().ok_or("`matrix` needs an arity")?;
            let w: usize = w.parse().map_err(|_| format!("invalid arity `{w}`"))?;
            if w == 0 || w > super::MAX_ARITY {
                return Err(format!("matrix arity must be in 1..={}", super::MAX_ARITY));
            }
            if rest.len() < w {
                return Err("missing support qubits".into());
            }
            let support = rest[..w]
                .iter()
                .map(|t| parse_qubit(t))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let dim = 1usize << w;
            let entries = &rest[w..];
            if entries.len() != dim * dim {
                return Err(format!(
                    "expected {} matrix entries, found {}",
                    dim * dim,
                    entries.len()
                ));
            }
            let m = entries
                .iter()
                .map(|t| parse_complex(t))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Gate::from_matrix(m, support, "matrix").map_err(|e| e.to_string())
        }
        other => Err(format!("unknown gate `{other}`")),
    }
}

pub(super) fn gate_to_line(g: &Gate) -> String {
    let qs: Vec<String> = g.support().iter().map(|q| q.to_string()).collect();
    match g.kind() {
        GateKind::Rz(theta) => format!("rz {} {}", qs[0], theta),
        GateKind::Matrix => {
            let entries: Vec<String> = g
                .matrix()
                .iter()
                .map(|z| format!("{},{}", z.re, z.im))
                .collect();
            format!(
                "matrix {} {} {}",
                g.arity(),
                qs.join(" "),
                entries.join(" ")
            )
        }
        k => format!("{} {}", k.name(), qs.join(" ")),
    }
}

pub(super) fn table_to_text(t: &ControlTable) -> String {
    let qs: Vec<String> = t.controls.iter().map(|q| q.to_string()).collect();
    let mut out = format!("controls {}\n", qs.join(" "));
    for (&v, g) in &t.table {
        let bits: String = (0..t.controls.len())
            .map(|k| if (v >> k) & 1 == 1 { '1' } else { '0' })
            .collect();
        out.push_str(&format!("when {bits} {}\n", gate_to_line(g)));
    }
    out
}
