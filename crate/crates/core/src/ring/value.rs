use std::fmt;

use serde::{Deserialize, Serialize};

/// Structured payload of a ring element, one shape per construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    /// A residue in `Z(n)`.
    Residue(u64),
    /// A tuple in a direct product.
    Tuple(Vec<Value>),
    /// A full square matrix, row-major, zero entries included.
    Matrix(Vec<Vec<Value>>),
    /// `(r, m)` in a trivial extension.
    Pair(Box<Value>, Box<Value>),
    /// Truncated polynomial coefficients, constant term first.
    Poly(Vec<Value>),
    /// A `T_n^k` element: Toeplitz band values `x_1..x_k` followed by the
    /// free entries above the band, row-major.
    Tnk { band: Vec<Value>, free: Vec<Value> },
    /// Coset in a quotient ring, named by its least representative.
    Coset(Box<Value>),
    /// Member of a generated subring, named by its value in the parent ring.
    Member(Box<Value>),
    /// Element of an opposite ring.
    Opposite(Box<Value>),
}

impl Value {
    pub fn int(v: u64) -> Value {
        Value::Residue(v)
    }

    pub fn pair(r: Value, m: Value) -> Value {
        Value::Pair(Box::new(r), Box::new(m))
    }

    /// Matrix of residues from integer rows.
    pub fn int_matrix<R: AsRef<[u64]>>(rows: &[R]) -> Value {
        Value::Matrix(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Value::Residue(v)).collect())
                .collect(),
        )
    }

    pub fn int_tuple(vs: &[u64]) -> Value {
        Value::Tuple(vs.iter().map(|&v| Value::Residue(v)).collect())
    }

    pub fn int_poly(vs: &[u64]) -> Value {
        Value::Poly(vs.iter().map(|&v| Value::Residue(v)).collect())
    }

    pub fn int_tnk(band: &[u64], free: &[u64]) -> Value {
        Value::Tnk {
            band: band.iter().map(|&v| Value::Residue(v)).collect(),
            free: free.iter().map(|&v| Value::Residue(v)).collect(),
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(self, Value::Residue(_))
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[Value]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Residue(v) => write!(f, "{v}"),
            Value::Tuple(vs) => {
                f.write_str("(")?;
                join(f, vs)?;
                f.write_str(")")
            }
            Value::Matrix(rows) => {
                f.write_str("[")?;
                for (i, row) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str("[")?;
                    join(f, row)?;
                    f.write_str("]")?;
                }
                f.write_str("]")
            }
            Value::Pair(r, m) => write!(f, "({r}, {m})"),
            Value::Poly(cs) => {
                let mut wrote = false;
                for (deg, c) in cs.iter().enumerate() {
                    if *c == Value::Residue(0) {
                        continue;
                    }
                    if wrote {
                        f.write_str(" + ")?;
                    }
                    wrote = true;
                    let coeff = if c.is_atomic() {
                        c.to_string()
                    } else {
                        format!("({c})")
                    };
                    match deg {
                        0 => write!(f, "{coeff}")?,
                        _ if *c == Value::Residue(1) => {}
                        _ => write!(f, "{coeff}")?,
                    }
                    match deg {
                        0 => {}
                        1 => f.write_str("x")?,
                        _ => write!(f, "x^{deg}")?,
                    }
                }
                if !wrote {
                    // a zero polynomial over a non-residue base still prints its coefficients
                    if cs.iter().all(|c| *c == Value::Residue(0)) {
                        f.write_str("0")?;
                    } else {
                        f.write_str("[")?;
                        join(f, cs)?;
                        f.write_str("]")?;
                    }
                }
                Ok(())
            }
            Value::Tnk { band, free } => {
                f.write_str("T{x: [")?;
                join(f, band)?;
                f.write_str("], a: [")?;
                join(f, free)?;
                f.write_str("]}")
            }
            Value::Coset(v) => write!(f, "{v} + I"),
            Value::Member(v) => write!(f, "{v}"),
            Value::Opposite(v) => write!(f, "{v}°"),
        }
    }
}
