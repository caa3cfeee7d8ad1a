//! File formats: the matrix JSON schema and the table dumps.
//!
//! Matrix files: `{"ring": "int"|"rat"|"fp", "p": optional prime,
//! "rows": 56, "cols": 56, "entries": [[...]]}`.  Integer entries are JSON
//! numbers (arbitrary precision), rationals are `"a/b"` strings, prime
//! field entries are canonical representatives `0..p-1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use e756::matrix::Matrix;
use e756::ring::{IntRing, PrimeField, RatField, Ring};

#[derive(Debug)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError(msg.into()))
}

#[derive(Serialize, Deserialize)]
pub struct MatrixFile {
    pub ring: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<serde_json::Value>>,
}

/// A parsed matrix over one of the supported exact rings.
pub enum AnyMatrix {
    Int(Matrix<IntRing>),
    Rat(Matrix<RatField>),
    Fp(Matrix<PrimeField>),
}

impl AnyMatrix {
    pub fn ring_name(&self) -> String {
        match self {
            AnyMatrix::Int(m) => m.ring().name(),
            AnyMatrix::Rat(m) => m.ring().name(),
            AnyMatrix::Fp(m) => m.ring().name(),
        }
    }
}

fn value_to_bigint(v: &serde_json::Value) -> Result<BigInt, ParseError> {
    match v {
        serde_json::Value::Number(n) => BigInt::from_str(&n.to_string())
            .map_err(|_| ParseError(format!("not an integer: {n}"))),
        serde_json::Value::String(s) => {
            BigInt::from_str(s).map_err(|_| ParseError(format!("not an integer: {s}")))
        }
        other => err(format!("expected integer entry, got {other}")),
    }
}

fn value_to_rational(v: &serde_json::Value) -> Result<BigRational, ParseError> {
    match v {
        serde_json::Value::String(s) => match s.split_once('/') {
            Some((num, den)) => {
                let n = BigInt::from_str(num)
                    .map_err(|_| ParseError(format!("bad numerator: {num}")))?;
                let d = BigInt::from_str(den)
                    .map_err(|_| ParseError(format!("bad denominator: {den}")))?;
                if d == BigInt::from(0) {
                    return err("zero denominator");
                }
                Ok(BigRational::new(n, d))
            }
            None => Ok(BigRational::from_integer(
                BigInt::from_str(s).map_err(|_| ParseError(format!("not a rational: {s}")))?,
            )),
        },
        serde_json::Value::Number(_) => Ok(BigRational::from_integer(value_to_bigint(v)?)),
        other => err(format!("expected rational entry, got {other}")),
    }
}

pub fn parse_matrix(text: &str) -> Result<AnyMatrix, ParseError> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| ParseError(format!("bad matrix JSON: {e}")))?;
    if file.rows != 56 || file.cols != 56 {
        return err(format!(
            "expected a 56x56 matrix, got {}x{}",
            file.rows, file.cols
        ));
    }
    if file.entries.len() != file.rows || file.entries.iter().any(|r| r.len() != file.cols) {
        return err("entry grid does not match the declared dimensions");
    }
    match file.ring.as_str() {
        "int" => {
            let rows = file
                .entries
                .iter()
                .map(|r| r.iter().map(value_to_bigint).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyMatrix::Int(Matrix::from_rows(IntRing, rows)))
        }
        "rat" => {
            let rows = file
                .entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(value_to_rational)
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyMatrix::Rat(Matrix::from_rows(RatField, rows)))
        }
        "fp" => {
            let Some(p) = file.p else {
                return err("ring \"fp\" requires the field \"p\"");
            };
            if !e756::ring::is_prime(p) {
                return err(format!("p = {p} is not prime"));
            }
            let fp = PrimeField::new(p);
            let rows = file
                .entries
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|v| {
                            let n = value_to_bigint(v)?;
                            if n < BigInt::from(0) || n >= BigInt::from(p) {
                                return err(format!("entry {n} outside 0..{p}"));
                            }
                            Ok(fp.from_bigint(&n))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(AnyMatrix::Fp(Matrix::from_rows(fp, rows)))
        }
        other => err(format!("unknown ring \"{other}\"")),
    }
}

pub fn matrix_to_file<R: Ring>(m: &Matrix<R>) -> MatrixFile {
    let ring = m.ring();
    let (ring_name, p) = match ring.kind() {
        e756::ring::RingKind::Int => ("int", None),
        e756::ring::RingKind::Rat => ("rat", None),
        e756::ring::RingKind::Fp(p) => ("fp", Some(p)),
    };
    let entries = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    let s = ring.format(m.get(i, j));
                    match ring.kind() {
                        e756::ring::RingKind::Rat if s.contains('/') => {
                            serde_json::Value::String(s)
                        }
                        _ => serde_json::Value::Number(
                            serde_json::Number::from_string_unchecked(s),
                        ),
                    }
                })
                .collect()
        })
        .collect();
    MatrixFile {
        ring: ring_name.to_string(),
        p,
        rows: m.rows(),
        cols: m.cols(),
        entries,
    }
}

// ---------------------------------------------------------------------------
// dump records

#[derive(Serialize)]
pub struct RootRecord {
    pub index: usize,
    pub coeffs: [i32; 8],
}

#[derive(Serialize)]
pub struct WeightRecord {
    pub ordinal: u8,
    pub label: i8,
    pub coeffs: [i32; 8],
}

#[derive(Serialize)]
pub struct Monomial {
    pub i: u8,
    pub j: u8,
    pub c: i64,
}

#[derive(Serialize)]
pub struct QuadricRecord {
    pub name: String,
    pub monomials: Vec<Monomial>,
}

#[derive(Serialize)]
pub struct FormFRecord {
    pub quad: [u8; 4],
    pub c: i64,
}

#[derive(Serialize)]
pub struct FormHRecord {
    pub pair: [u8; 2],
    pub c: i64,
}
