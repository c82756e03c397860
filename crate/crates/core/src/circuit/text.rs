//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! qubits 3
//! lambda 3
//! rz(1.5707963267948966) 0
//! sx 1
//! x 2
//! cx 0 1
//! u 0 re00 im00 re01 im01 re10 im10 re11 im11
//! ```

use std::fmt::Write;

use num_complex::Complex64;

use crate::circuit::{check_lambda, Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::mat2;

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut lambda: Option<u32> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let head = tokens.next().expect("non-empty line");
        let rest: Vec<&str> = tokens.collect();

        match head {
            "qubits" => {
                if circuit.is_some() {
                    return Err(err("duplicate qubits header".into()));
                }
                let n = single_usize(&rest).ok_or_else(|| err(format!("bad qubit count {rest:?}")))?;
                if n == 0 {
                    return Err(err("circuit needs at least one qubit".into()));
                }
                circuit = Some(Circuit::new(n));
            }
            "lambda" => {
                let raw_value = match rest.as_slice() {
                    [v] => v.parse::<i64>().map_err(|_| err(format!("bad lambda {v:?}")))?,
                    _ => return Err(err("lambda takes one integer".into())),
                };
                lambda = Some(check_lambda(raw_value).map_err(|e| err(e.to_string()))?);
            }
            _ => {
                let c = circuit.as_mut().ok_or_else(|| err("gate before qubits header".into()))?;
                let gate = parse_gate(head, &rest).map_err(&err)?;
                c.push(gate).map_err(|e| err(e.to_string()))?;
            }
        }
    }

    let mut circuit = circuit.ok_or(Error::Parse { line: 0, message: "missing qubits header".into() })?;
    if let Some(l) = lambda {
        circuit.set_lambda(l)?;
    }
    Ok(circuit)
}

fn single_usize(rest: &[&str]) -> Option<usize> {
    match rest {
        [v] => v.parse().ok(),
        _ => None,
    }
}

fn parse_qubit(tok: &str) -> Result<usize, String> {
    tok.parse().map_err(|_| format!("bad qubit index {tok:?}"))
}

fn parse_gate(head: &str, rest: &[&str]) -> Result<Gate, String> {
    if let Some(inner) = head.strip_prefix("rz(") {
        let angle_text = inner.strip_suffix(')').ok_or_else(|| format!("malformed angle in {head:?}"))?;
        let angle: f64 = angle_text.parse().map_err(|_| format!("malformed angle {angle_text:?}"))?;
        if !angle.is_finite() {
            return Err(format!("malformed angle {angle_text:?}"));
        }
        return match rest {
            [q] => Ok(Gate::rz(parse_qubit(q)?, angle)),
            _ => Err("rz takes one qubit".into()),
        };
    }
    match (head, rest) {
        ("sx", [q]) => Ok(Gate::sx(parse_qubit(q)?)),
        ("x", [q]) => Ok(Gate::x(parse_qubit(q)?)),
        ("cx", [c, t]) => Ok(Gate::cx(parse_qubit(c)?, parse_qubit(t)?)),
        ("u", [q, vals @ ..]) if vals.len() == 8 => {
            let v: Vec<f64> = vals
                .iter()
                .map(|s| s.parse::<f64>().map_err(|_| format!("bad matrix entry {s:?}")))
                .collect::<Result<_, _>>()?;
            let z = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
            Ok(Gate::u(parse_qubit(q)?, mat2(z(0), z(1), z(2), z(3))))
        }
        ("sx" | "x" | "cx" | "u" | "rz", _) => Err(format!("wrong operand count for {head}")),
        _ => Err(format!("unknown gate {head:?}")),
    }
}

/// Canonical text. Angles use the shortest representation that parses back
/// to the same `f64`; `u` entries are printed with 17 significant digits.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = String::new();
    let _ = write!(out, "qubits {}", c.num_qubits());
    if c.lambda() != 1 {
        let _ = write!(out, "\nlambda {}", c.lambda());
    }
    for g in c.gates() {
        out.push('\n');
        let _ = match *g {
            Gate::Rz { qubit, angle } => write!(out, "rz({angle:?}) {qubit}"),
            Gate::Sx { qubit } => write!(out, "sx {qubit}"),
            Gate::X { qubit } => write!(out, "x {qubit}"),
            Gate::Cx { control, target } => write!(out, "cx {control} {target}"),
            Gate::U { qubit, matrix } => {
                let _ = write!(out, "u {qubit}");
                for i in 0..2 {
                    for j in 0..2 {
                        let z = matrix[(i, j)];
                        let _ = write!(out, " {:.16e} {:.16e}", z.re, z.im);
                    }
                }
                Ok(())
            }
        };
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::sx_matrix;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn single_gate_file() {
        let c = parse_circuit("qubits 1\nx 0").unwrap();
        assert_eq!(c.num_qubits(), 1);
        assert_eq!(c.gates(), &[Gate::x(0)]);
    }

    #[test]
    fn round_trip_modulo_whitespace() {
        let text = "qubits 2\ncx 0 1\ncx 0 1";
        let c = parse_circuit("  qubits   2 \n\n cx 0 1 # first\ncx 0   1\n").unwrap();
        assert_eq!(serialize_circuit(&c), text);
    }

    #[test]
    fn formatting_contract() {
        let mut c = Circuit::new(2);
        c.cx(0, 1);
        assert_eq!(serialize_circuit(&c), "qubits 2\ncx 0 1");
        let mut c = Circuit::new(1);
        c.rz(0, FRAC_PI_2);
        assert_eq!(serialize_circuit(&c), "qubits 1\nrz(1.5707963267948966) 0");
    }

    #[test]
    fn u_gate_round_trips_exactly() {
        let mut c = Circuit::new(1);
        c.push(Gate::u(0, sx_matrix().adjoint())).unwrap();
        c.push(Gate::rz(0, -0.1234567890123456789)).unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_circuit("qubits 2\ncx 0 5").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse_circuit("qubits 2\nh 0").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_circuit("qubits 1\nrz(abc) 0").unwrap_err();
        assert!(e.to_string().contains("malformed angle"));
        let e = parse_circuit("qubits 1\nlambda 4").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        assert!(parse_circuit("x 0").is_err());
        assert!(parse_circuit("# nothing").is_err());
    }

    #[test]
    fn lambda_header_is_kept() {
        let c = parse_circuit("qubits 2\nlambda 3\ncx 0 1").unwrap();
        assert_eq!(c.lambda(), 3);
        assert_eq!(serialize_circuit(&c), "qubits 2\nlambda 3\ncx 0 1");
    }
}
