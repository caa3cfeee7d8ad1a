//! Deterministic table dumps.  JSON is the machine contract; the text
//! renderings are human-oriented.

use e756::quadrics::GenName;
use e756::ChevalleyBasis;

use crate::json::{FormFRecord, FormHRecord, Monomial, QuadricRecord, RootRecord, WeightRecord};
use crate::suites::Tables;

pub fn dump_roots(cb: &ChevalleyBasis) -> Vec<RootRecord> {
    cb.roots()
        .roots()
        .iter()
        .enumerate()
        .map(|(index, r)| RootRecord {
            index,
            coeffs: r.0,
        })
        .collect()
}

pub fn dump_weights(cb: &ChevalleyBasis) -> Vec<WeightRecord> {
    cb.roots()
        .weights()
        .iter()
        .map(|w| WeightRecord {
            ordinal: w.ordinal,
            label: w.label,
            coeffs: w.root.0,
        })
        .collect()
}

/// All defined structure constants as `(α-index, β-index, sign)` triples,
/// indices into the root dump order.
pub fn dump_constants(cb: &ChevalleyBasis) -> Vec<[i64; 3]> {
    let roots = cb.roots().roots();
    let mut out = Vec::new();
    for (ia, a) in roots.iter().enumerate() {
        for (ib, b) in roots.iter().enumerate() {
            let n = cb.n(a, b);
            if n != 0 {
                out.push([ia as i64, ib as i64, n]);
            }
        }
    }
    out
}

pub fn dump_quadrics(t: &Tables) -> Vec<QuadricRecord> {
    t.basis
        .generators()
        .iter()
        .map(|(name, q)| QuadricRecord {
            name: match name {
                GenName::F(i, j) => format!("f[{i},{j}]"),
                GenName::G(k) => format!("g[{k}]"),
            },
            monomials: q
                .terms()
                .map(|(&(i, j), c)| Monomial {
                    i,
                    j,
                    c: i64::try_from(c.clone()).expect("small coefficients"),
                })
                .collect(),
        })
        .collect()
}

pub fn dump_form_f(t: &Tables) -> Vec<FormFRecord> {
    t.f4
        .entries()
        .iter()
        .map(|&(a, b, c, d, coeff)| FormFRecord {
            quad: [a, b, c, d],
            c: coeff as i64,
        })
        .collect()
}

pub fn dump_form_h(t: &Tables) -> Vec<FormHRecord> {
    t.h
        .pairs()
        .into_iter()
        .map(|(a, b, c)| FormHRecord { pair: [a, b], c })
        .collect()
}

/// Human-oriented text rendering of any dump (not golden-tested).
pub fn to_text<T: serde::Serialize>(records: &[T]) -> String {
    let mut out = String::new();
    for r in records {
        out.push_str(&serde_json::to_string(r).expect("serializable record"));
        out.push('\n');
    }
    out
}

