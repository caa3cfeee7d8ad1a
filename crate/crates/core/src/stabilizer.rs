//! Lie algebras of the three stabilizer group schemes and exact membership
//! decision procedures.
//!
//! The Lie algebra of the ideal stabilizer is the kernel of
//! `E ↦ (Σ E_{rc} x_c ∂q/∂x_r mod span of the 133 generators)` over all
//! generators `q`, `E` ranging over 56×56 matrices.  The Lie algebras of
//! the form stabilizers are kernels of the derivation conditions on `f`
//! and `h`, optionally extended by similarity unknowns
//! `(ε-1, ε'-1, c₂, c₃, c₄)`.  All ranks are computed by exact sparse
//! elimination, over the rationals or any prime field.
//!
//! Membership is decided two independent ways: by reducing the pullback of
//! every generator (ideal route) and by testing exact similarity of `h`
//! and `f` (forms route); the two must agree on every invertible matrix.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::chevalley::ChevalleyBasis;
use crate::forms::{FourLinearForm, SymplecticForm};
use crate::matrix::Matrix;
use crate::quadrics::{QuadraticForm, QuadricBasis, Reducer};
use crate::rep56::DIM;
use crate::ring::{Field, Ring, RingKind};
use crate::roots::Root;
use crate::solve::Eliminator;

/// Column index of the operator entry `E[r][c]` (1-based weight ordinals).
pub fn op_col(r: u8, c: u8) -> u32 {
    (r as u32 - 1) * DIM as u32 + (c as u32 - 1)
}

const N_OP: usize = DIM * DIM;
// auxiliary unknowns of the extended similarity system
const COL_EPS_F: u32 = N_OP as u32;
const COL_EPS_H: u32 = N_OP as u32 + 1;
const COL_C2: u32 = N_OP as u32 + 2;
const COL_C3: u32 = N_OP as u32 + 3;
const COL_C4: u32 = N_OP as u32 + 4;

/// Sparse operator `d/dξ x_γ(ξ)|₀`: entries `(λ, λ-γ) ↦ N_{γ,λ-γ}`.
pub fn unipotent_derivative(cb: &ChevalleyBasis, gamma: &Root) -> Vec<(u32, i64)> {
    let rs = cb.roots();
    let mut out = Vec::with_capacity(12);
    for w in rs.weights() {
        let dn = w.root.sub(gamma);
        if let Some(src) = rs.weight_of_root(&dn) {
            out.push((op_col(w.ordinal, src), cb.n(gamma, &dn)));
        }
    }
    out.sort_unstable_by_key(|e| e.0);
    out
}

/// Diagonal operator `diag(⟨λ, H⟩)` for a Cartan element over the
/// fundamental coroots.
pub fn toral_diag(cb: &ChevalleyBasis, h: &[i64; 8]) -> Vec<(u32, i64)> {
    cb.roots()
        .weights()
        .iter()
        .filter_map(|w| {
            let v = cb.pair_with_cartan(&w.root, h);
            (v != 0).then_some((op_col(w.ordinal, w.ordinal), v))
        })
        .collect()
}

/// Diagonal operator of the grading torus direction, `diag(2 - c7(λ))`.
pub fn grading_diag(cb: &ChevalleyBasis) -> Vec<(u32, i64)> {
    cb.roots()
        .weights()
        .iter()
        .filter_map(|w| {
            let v = crate::rep56::torus_exponent(&w.root);
            (v != 0).then_some((op_col(w.ordinal, w.ordinal), v))
        })
        .collect()
}

/// `Σ E_{rc} x_c ∂q/∂x_r` for a sparse operator; the derivative of
/// `q ∘ (1 + tE)` at `t = 0`.
pub fn derivative_form<R: Ring>(
    ring: &R,
    q: &QuadraticForm<R>,
    entries: &[(u32, i64)],
) -> QuadraticForm<R> {
    let mut out = QuadraticForm::zero(ring.clone());
    for &(col, v) in entries {
        let r = (col / DIM as u32) as u8 + 1;
        let c = (col % DIM as u32) as u8 + 1;
        for (&(a, b), s) in q.terms_map() {
            // ∂(x_a x_b)/∂x_r
            if a == r {
                let t = ring.mul(s, &ring.from_i64(v));
                out.add_term(c, b, if a == b { ring.add(&t, &t) } else { t });
            } else if b == r && a != b {
                let t = ring.mul(s, &ring.from_i64(v));
                out.add_term(c, a, t);
            }
        }
    }
    out
}

/// Result of one Lie-algebra kernel computation.
#[derive(Clone, Debug)]
pub struct LieSolveReport {
    pub ring: String,
    pub unknowns: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    /// Sparse kernel vectors with formatted entries, when requested.
    pub kernel_basis: Option<Vec<Vec<(u32, String)>>>,
}

/// Kernel dimension of the ideal-stabilizer derivation condition:
/// every generator's derivative along `E` must stay in the degree-2 span.
pub fn lie_dim_gi<R: Field>(
    cb: &ChevalleyBasis,
    basis: &QuadricBasis,
    ring: &R,
    want_basis: bool,
) -> LieSolveReport
where
    R::Elem: Ord,
{
    let reducer = Reducer::new(cb, basis, ring.clone());
    let mut elim = Eliminator::new(ring.clone());
    let mut rank = 0;
    for (_, q) in basis.generators() {
        // monomial → functional in the operator entries
        let mut table: BTreeMap<(u8, u8), Vec<(u32, R::Elem)>> = BTreeMap::new();
        for (&(a, b), s) in q.terms_map() {
            let s64 = i64::try_from(s.clone()).expect("generator coefficients are small");
            // r = a: s·x_c·x_b entries E[a][c]; r = b: s·x_c·x_a entries E[b][c]
            for cc in 1..=DIM as u8 {
                let key1 = if cc <= b { (cc, b) } else { (b, cc) };
                table
                    .entry(key1)
                    .or_default()
                    .push((op_col(a, cc), ring.from_i64(s64)));
                if a != b {
                    let key2 = if cc <= a { (cc, a) } else { (a, cc) };
                    table
                        .entry(key2)
                        .or_default()
                        .push((op_col(b, cc), ring.from_i64(s64)));
                }
            }
        }
        for f in table.values_mut() {
            f.sort_unstable_by_key(|e| e.0);
            // merge duplicate columns
            let mut merged: Vec<(u32, R::Elem)> = Vec::with_capacity(f.len());
            for (c, v) in f.drain(..) {
                match merged.last_mut() {
                    Some((lc, lv)) if *lc == c => {
                        *lv = ring.add(lv, &v);
                    }
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|(_, v)| !ring.is_zero(v));
            *f = merged;
        }
        for row in reducer.reduce_functionals(table) {
            if elim.insert(row) {
                rank += 1;
            }
        }
    }
    let kernel_dim = N_OP - rank;
    let kernel_basis = want_basis.then(|| {
        let pinned = alloc::vec![false; N_OP];
        format_basis(ring, elim.kernel_basis(N_OP as u32, &pinned))
    });
    LieSolveReport {
        ring: ring.name(),
        unknowns: N_OP,
        rank,
        kernel_dim,
        kernel_basis,
    }
}

fn format_basis<R: Ring>(ring: &R, basis: Vec<Vec<(u32, R::Elem)>>) -> Vec<Vec<(u32, String)>> {
    basis
        .into_iter()
        .map(|v| v.into_iter().map(|(c, e)| (c, ring.format(&e))).collect())
        .collect()
}

fn pack_quad(i: u8, j: u8, k: u8, l: u8) -> u32 {
    (((i as u32 - 1) * 56 + (j as u32 - 1)) * 56 + (k as u32 - 1)) * 56 + (l as u32 - 1)
}

fn unpack_quad(q: u32) -> (u8, u8, u8, u8) {
    let l = q % 56;
    let k = q / 56 % 56;
    let j = q / (56 * 56) % 56;
    let i = q / (56 * 56 * 56);
    (i as u8 + 1, j as u8 + 1, k as u8 + 1, l as u8 + 1)
}

/// Shared tables for the similarity-derivation system.
struct FhSystem<'a> {
    cb: &'a ChevalleyBasis,
    f4: &'a FourLinearForm,
    h: &'a SymplecticForm,
    /// `comp[idx3(a,b,c)]` = ordinal of the weight `2δ - a - b - c`, or 0.
    comp: Vec<u8>,
    candidates: Vec<u32>,
}

fn idx3(a: u8, b: u8, c: u8) -> usize {
    ((a as usize - 1) * DIM + (b as usize - 1)) * DIM + (c as usize - 1)
}

impl<'a> FhSystem<'a> {
    fn new(cb: &'a ChevalleyBasis, f4: &'a FourLinearForm, h: &'a SymplecticForm) -> Self {
        let rs = cb.roots();
        let two_delta = rs.delta().add(&rs.delta());
        let mut comp = alloc::vec![0u8; DIM * DIM * DIM];
        for a in 1..=DIM as u8 {
            let ra = rs.weight_root(a);
            for b in 1..=DIM as u8 {
                let rab = two_delta.sub(&ra).sub(&rs.weight_root(b));
                for c in 1..=DIM as u8 {
                    let r = rab.sub(&rs.weight_root(c));
                    if let Some(o) = rs.weight_of_root(&r) {
                        comp[idx3(a, b, c)] = o;
                    }
                }
            }
        }

        let mut candidates: Vec<u32> =
            Vec::with_capacity(f4.support_len() * 4 * DIM + 3 * DIM * DIM);
        for &(a, b, c, d, _) in f4.entries() {
            for x in 1..=DIM as u8 {
                candidates.push(pack_quad(x, b, c, d));
                candidates.push(pack_quad(a, x, c, d));
                candidates.push(pack_quad(a, b, x, d));
                candidates.push(pack_quad(a, b, c, x));
            }
        }
        // quadruples where only the h·h products can fire
        for i in 1..=DIM as u8 {
            let bi = rs.bar(i);
            for k in 1..=DIM as u8 {
                let bk = rs.bar(k);
                candidates.push(pack_quad(i, bi, k, bk));
                candidates.push(pack_quad(i, k, bi, bk));
                candidates.push(pack_quad(i, k, bk, bi));
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        FhSystem {
            cb,
            f4,
            h,
            comp,
            candidates,
        }
    }

    /// The constraint row of one basis quadruple, with auxiliary entries;
    /// sorted, duplicates merged, exact integer coefficients.
    fn row(&self, quad: u32, extended: bool) -> Vec<(u32, i64)> {
        let (i, j, k, l) = unpack_quad(quad);
        let mut ents: Vec<(u32, i64)> = Vec::with_capacity(9);
        let l1 = self.comp[idx3(j, k, l)];
        if l1 != 0 {
            let c = self.f4.coeff(l1, j, k, l);
            if c != 0 {
                ents.push((op_col(l1, i), c));
            }
        }
        let l2 = self.comp[idx3(i, k, l)];
        if l2 != 0 {
            let c = self.f4.coeff(i, l2, k, l);
            if c != 0 {
                ents.push((op_col(l2, j), c));
            }
        }
        let l3 = self.comp[idx3(i, j, l)];
        if l3 != 0 {
            let c = self.f4.coeff(i, j, l3, l);
            if c != 0 {
                ents.push((op_col(l3, k), c));
            }
        }
        let l4 = self.comp[idx3(i, j, k)];
        if l4 != 0 {
            let c = self.f4.coeff(i, j, k, l4);
            if c != 0 {
                ents.push((op_col(l4, l), c));
            }
        }
        if extended {
            let c0 = if l4 == l { self.f4.coeff(i, j, k, l) } else { 0 };
            if c0 != 0 {
                ents.push((COL_EPS_F, -c0));
            }
            let p2 = self.h.coeff(i, j) * self.h.coeff(k, l);
            if p2 != 0 {
                ents.push((COL_C2, -p2));
            }
            let p3 = self.h.coeff(i, k) * self.h.coeff(j, l);
            if p3 != 0 {
                ents.push((COL_C3, -p3));
            }
            let p4 = self.h.coeff(i, l) * self.h.coeff(j, k);
            if p4 != 0 {
                ents.push((COL_C4, -p4));
            }
        }
        merge_row(ents)
    }

    /// The derivation row of `h` at a basis pair.
    fn h_row(&self, i: u8, j: u8, extended: bool) -> Vec<(u32, i64)> {
        let rs = self.cb.roots();
        let mut ents: Vec<(u32, i64)> = Vec::with_capacity(3);
        let bj = rs.bar(j);
        let hj = self.h.coeff(bj, j);
        if hj != 0 {
            ents.push((op_col(bj, i), hj));
        }
        let bi = rs.bar(i);
        let hi = self.h.coeff(i, bi);
        if hi != 0 {
            ents.push((op_col(bi, j), hi));
        }
        if extended {
            let hij = self.h.coeff(i, j);
            if hij != 0 {
                ents.push((COL_EPS_H, -hij));
            }
        }
        merge_row(ents)
    }
}

fn merge_row(mut ents: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    ents.sort_unstable_by_key(|e| e.0);
    let mut merged: Vec<(u32, i64)> = Vec::with_capacity(ents.len());
    for (c, v) in ents {
        match merged.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|(_, v)| *v != 0);
    merged
}

fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Kernel dimension of the form-similarity derivation system; `extended`
/// adds the five similarity unknowns.
pub fn lie_dim_fh<R: Field>(
    cb: &ChevalleyBasis,
    f4: &FourLinearForm,
    h: &SymplecticForm,
    ring: &R,
    extended: bool,
    want_basis: bool,
) -> LieSolveReport
where
    R::Elem: Ord,
{
    let sys = FhSystem::new(cb, f4, h);
    let ncols = N_OP + if extended { 5 } else { 0 };
    let p = ring.kind().characteristic();
    let live = |v: i64| -> bool {
        if p == 0 {
            v != 0
        } else {
            v.rem_euclid(p as i64) != 0
        }
    };

    // Phase 1: propagate forced-zero columns from singleton rows.
    let mut zero = alloc::vec![false; ncols];
    let mut nzeroed = 0usize;
    loop {
        let mut changed = false;
        let note = |row: &[(u32, i64)], zero: &mut [bool], nzeroed: &mut usize| {
            let mut it = row
                .iter()
                .filter(|(c, v)| !zero[*c as usize] && live(*v));
            if let (Some(&(c, _)), None) = (it.next(), it.next()) {
                zero[c as usize] = true;
                *nzeroed += 1;
                true
            } else {
                false
            }
        };
        for &q in &sys.candidates {
            changed |= note(&sys.row(q, extended), &mut zero, &mut nzeroed);
        }
        for i in 1..=DIM as u8 {
            for j in 1..=DIM as u8 {
                changed |= note(&sys.h_row(i, j, extended), &mut zero, &mut nzeroed);
            }
        }
        if !changed {
            break;
        }
    }

    // Phase 2: deduplicate surviving rows and eliminate.
    let normalize = |row: &mut Vec<(u32, i64)>| {
        if p > 0 {
            let fp = crate::ring::PrimeField::new(p);
            for (_, v) in row.iter_mut() {
                *v = v.rem_euclid(p as i64);
            }
            let inv = fp.inv(&(row[0].1 as u64)).unwrap() as i64;
            for (_, v) in row.iter_mut() {
                *v = (*v * inv).rem_euclid(p as i64);
            }
        } else {
            let g = row.iter().fold(0i64, |acc, &(_, v)| gcd64(acc, v));
            if g > 1 {
                for (_, v) in row.iter_mut() {
                    *v /= g;
                }
            }
            if row[0].1 < 0 {
                for (_, v) in row.iter_mut() {
                    *v = -*v;
                }
            }
        }
    };
    let mut dedup: alloc::collections::BTreeSet<Vec<(u32, i64)>> =
        alloc::collections::BTreeSet::new();
    let mut elim = Eliminator::new(ring.clone());
    let mut rank = nzeroed;
    {
        let mut feed = |row: Vec<(u32, i64)>| {
            let mut liverow: Vec<(u32, i64)> = row
                .into_iter()
                .filter(|(c, v)| !zero[*c as usize] && live(*v))
                .collect();
            if liverow.len() < 2 {
                debug_assert!(liverow.is_empty(), "phase 1 reached a fixpoint");
                return;
            }
            normalize(&mut liverow);
            if dedup.insert(liverow.clone()) {
                let frow: Vec<(u32, R::Elem)> = liverow
                    .into_iter()
                    .map(|(c, v)| (c, ring.from_i64(v)))
                    .collect();
                if elim.insert(frow) {
                    rank += 1;
                }
            }
        };
        for &q in &sys.candidates {
            feed(sys.row(q, extended));
        }
        for i in 1..=DIM as u8 {
            for j in 1..=DIM as u8 {
                feed(sys.h_row(i, j, extended));
            }
        }
    }

    let kernel_dim = ncols - rank;
    let kernel_basis =
        want_basis.then(|| format_basis(ring, elim.kernel_basis(ncols as u32, &zero)));
    LieSolveReport {
        ring: ring.name(),
        unknowns: ncols,
        rank,
        kernel_dim,
        kernel_basis,
    }
}

/// Checks that a sparse operator (with optional auxiliary values) satisfies
/// every similarity-derivation constraint; used to certify kernel members
/// independently of the elimination.
pub fn fh_kernel_contains(
    cb: &ChevalleyBasis,
    f4: &FourLinearForm,
    h: &SymplecticForm,
    op: &[(u32, i64)],
    aux: Option<[i64; 5]>,
) -> bool {
    let sys = FhSystem::new(cb, f4, h);
    let extended = aux.is_some();
    let aux = aux.unwrap_or([0; 5]);
    let value = |row: &[(u32, i64)]| -> i64 {
        let mut s = 0i64;
        for &(c, v) in row {
            if c >= N_OP as u32 {
                s += v * aux[(c - N_OP as u32) as usize];
            } else if let Ok(pos) = op.binary_search_by_key(&c, |e| e.0) {
                s += v * op[pos].1;
            }
        }
        s
    };
    sys.candidates.iter().all(|&q| value(&sys.row(q, extended)) == 0)
        && (1..=DIM as u8)
            .all(|i| (1..=DIM as u8).all(|j| value(&sys.h_row(i, j, extended)) == 0))
}

/// Outcome of a membership query.
#[derive(Clone, Debug)]
pub struct MembershipVerdict<E> {
    pub member: bool,
    pub eps_h: Option<E>,
    pub eps_f: Option<E>,
    /// `(generator or form name, nonzero remainder / discrepancy)` on
    /// rejection.
    pub witness: Option<(String, String)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipError {
    SingularMatrix,
}

impl core::fmt::Display for MembershipError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "matrix is singular")
    }
}

/// Ideal route: member exactly when the pullback of every one of the 133
/// generators reduces to zero remainder.
pub fn membership_gi<R: Field>(
    basis: &QuadricBasis,
    reducer: &Reducer<R>,
    ring: &R,
    m: &Matrix<R>,
) -> Result<MembershipVerdict<R::Elem>, MembershipError>
where
    R::Elem: Ord,
{
    if ring.is_zero(&m.det()) {
        return Err(MembershipError::SingularMatrix);
    }
    // Integer fast path: pull back over the integers after clearing any
    // denominators (scaling a form by d² does not move it across the span).
    let int_matrix = ring
        .clear_denominators(m.data())
        .map(|(nums, _)| Matrix::from_rows(
            crate::ring::IntRing,
            nums.chunks(DIM).map(|r| r.to_vec()).collect(),
        ));
    for (name, q) in basis.generators() {
        let pulled: QuadraticForm<R> = match &int_matrix {
            Some(mi) => q.pullback(mi).map_ring(ring, |v| ring.from_bigint(v)),
            None => q
                .map_ring(ring, |v| ring.from_bigint(v))
                .pullback(m),
        };
        let (_, rem) = reducer.reduce(&pulled);
        if !rem.is_zero() {
            let shown: Vec<String> = rem
                .terms()
                .take(3)
                .map(|(&(a, b), v)| format!("{}*x{}*x{}", ring.format(v), a, b))
                .collect();
            return Ok(MembershipVerdict {
                member: false,
                eps_h: None,
                eps_f: None,
                witness: Some((format!("{name}"), shown.join(" + "))),
            });
        }
    }
    Ok(MembershipVerdict {
        member: true,
        eps_h: None,
        eps_f: None,
        witness: None,
    })
}

/// Forms route: member exactly when `h(M·, M·) = ε_h h` and
/// `f(M·, M·, M·, M·) = ε_f f` on all basis tuples, for some scalars.
/// When accepting, `ε_f = ε_h²` is asserted (similarity multipliers).
pub fn membership_forms<R: Field>(
    cb: &ChevalleyBasis,
    h: &SymplecticForm,
    f4: &FourLinearForm,
    ring: &R,
    m: &Matrix<R>,
) -> Result<MembershipVerdict<R::Elem>, MembershipError> {
    if ring.is_zero(&m.det()) {
        return Err(MembershipError::SingularMatrix);
    }
    match ring.kind() {
        RingKind::Fp(p) => {
            // entries as canonical representatives; kernel works modulo p
            let ints: Vec<i128> = m
                .data()
                .iter()
                .map(|e| {
                    ring.canonical_i128(e)
                        .expect("prime field elements are small integers")
                })
                .collect();
            forms_check_i128(cb, h, f4, &ints, Some(p))
                .map(|r| lift_verdict(ring, r, &BigInt::from(1)))
        }
        RingKind::Int | RingKind::Rat => {
            let (nums, d) = ring
                .clear_denominators(m.data())
                .expect("integer-embedded ring");
            let max_bits = nums.iter().map(|n| n.bits()).max().unwrap_or(0);
            if max_bits <= 26 {
                let ints: Vec<i128> = nums.iter().map(|n| n.to_i128().unwrap()).collect();
                forms_check_i128(cb, h, f4, &ints, None).map(|r| lift_verdict(ring, r, &d))
            } else {
                forms_check_bigint(cb, h, f4, &nums).map(|r| lift_verdict_big(ring, r, &d))
            }
        }
    }
}

struct RawVerdict<T> {
    member: bool,
    s_h: Option<T>,
    s_f: Option<T>,
    witness: Option<(String, String)>,
}

fn lift_verdict<R: Field>(
    ring: &R,
    raw: RawVerdict<i128>,
    d: &BigInt,
) -> MembershipVerdict<R::Elem> {
    lift_verdict_big(
        ring,
        RawVerdict {
            member: raw.member,
            s_h: raw.s_h.map(BigInt::from),
            s_f: raw.s_f.map(BigInt::from),
            witness: raw.witness,
        },
        d,
    )
}

fn lift_verdict_big<R: Field>(
    ring: &R,
    raw: RawVerdict<BigInt>,
    d: &BigInt,
) -> MembershipVerdict<R::Elem> {
    // scaled multipliers: s_h = ε_h·d², s_f = ε_f·d⁴
    let d2 = ring.from_bigint(&(d * d));
    let d4 = ring.mul(&d2, &d2);
    let eps_h = raw
        .s_h
        .map(|s| ring.div(&ring.from_bigint(&s), &d2));
    let eps_f = raw
        .s_f
        .map(|s| ring.div(&ring.from_bigint(&s), &d4));
    if raw.member {
        let (Some(eh), Some(ef)) = (&eps_h, &eps_f) else {
            panic!("accepting verdict carries both multipliers");
        };
        assert_eq!(*ef, ring.mul(eh, eh), "similarity multipliers: ε_f = ε_h²");
    }
    MembershipVerdict {
        member: raw.member,
        eps_h: if raw.member { eps_h } else { None },
        eps_f: if raw.member { eps_f } else { None },
        witness: raw.witness,
    }
}

/// Exact similarity check over machine integers, with an optional modulus.
/// `ints` is the (denominator-cleared) matrix, row major.
fn forms_check_i128(
    cb: &ChevalleyBasis,
    h: &SymplecticForm,
    f4: &FourLinearForm,
    ints: &[i128],
    modulus: Option<u64>,
) -> Result<RawVerdict<i128>, MembershipError> {
    let md = |v: i128| -> i128 {
        match modulus {
            Some(p) => v.rem_euclid(p as i128),
            None => v,
        }
    };
    let at = |r: usize, c: usize| ints[r * DIM + c];

    // h-similarity: P = MᵀHM must be a scalar multiple of H
    let mut p_mat = [[0i128; DIM]; DIM];
    for (a, b, c) in h.pairs() {
        let (ia, ib) = (a as usize - 1, b as usize - 1);
        for i in 0..DIM {
            let va = at(ia, i);
            let vb = at(ib, i);
            for j in 0..DIM {
                // c·(M[a,i]M[b,j] − M[b,i]M[a,j])
                p_mat[i][j] += c as i128 * (va * at(ib, j) - vb * at(ia, j));
            }
        }
    }
    let bar1 = cb.roots().bar(1) as usize - 1;
    let h11 = h.coeff(1, cb.roots().bar(1)) as i128;
    let s_h = md(p_mat[0][bar1] * h11);
    for i in 0..DIM {
        for j in 0..DIM {
            let expect = s_h * h.coeff(i as u8 + 1, j as u8 + 1) as i128;
            if md(p_mat[i][j] - expect) != 0 {
                return Ok(RawVerdict {
                    member: false,
                    s_h: None,
                    s_f: None,
                    witness: Some((
                        format!("h[{},{}]", i + 1, j + 1),
                        format!("{}", md(p_mat[i][j] - expect)),
                    )),
                });
            }
        }
    }

    // f-similarity: per output pair (i,j), W[ν,ρ] = Σ c·M[λ,i]M[μ,j],
    // then MᵀWM must equal s_f·c(i,j,·,·).
    let probe = f4
        .entries()
        .iter()
        .find(|e| e.4.abs() == 1)
        .expect("unit coefficients exist");
    let mut s_f: Option<i128> = None;
    let mut w = [[0i128; DIM]; DIM];
    let mut t = [[0i128; DIM]; DIM];
    // probe pass first to fix s_f, then the full sweep
    let mut order: Vec<(u8, u8)> = Vec::with_capacity(DIM * DIM);
    order.push((probe.0, probe.1));
    for i in 1..=DIM as u8 {
        for j in 1..=DIM as u8 {
            if (i, j) != (probe.0, probe.1) {
                order.push((i, j));
            }
        }
    }
    for (i, j) in order {
        for row in w.iter_mut() {
            row.fill(0);
        }
        let (ci, cj) = (i as usize - 1, j as usize - 1);
        for &(a, b, c, d, coeff) in f4.entries() {
            let prod = at(a as usize - 1, ci) * at(b as usize - 1, cj);
            if prod != 0 {
                w[c as usize - 1][d as usize - 1] += coeff as i128 * prod;
            }
        }
        if modulus.is_some() {
            for row in w.iter_mut() {
                for v in row.iter_mut() {
                    *v = md(*v);
                }
            }
        }
        // T = MᵀWM
        let mut wm = [[0i128; DIM]; DIM];
        for r in 0..DIM {
            for c in 0..DIM {
                let v = w[r][c];
                if v != 0 {
                    for l in 0..DIM {
                        wm[r][l] += v * at(c, l);
                    }
                }
            }
        }
        if modulus.is_some() {
            for row in wm.iter_mut() {
                for v in row.iter_mut() {
                    *v = md(*v);
                }
            }
        }
        for k in 0..DIM {
            for l in 0..DIM {
                let mut acc = 0i128;
                for r in 0..DIM {
                    let v = at(r, k);
                    if v != 0 {
                        acc += v * wm[r][l];
                    }
                }
                t[k][l] = md(acc);
            }
        }
        if s_f.is_none() {
            // s_f from the unit-coefficient probe entry
            let tv = t[probe.2 as usize - 1][probe.3 as usize - 1];
            s_f = Some(md(tv * probe.4 as i128));
        }
        let sf = s_f.unwrap();
        for k in 1..=DIM as u8 {
            for l in 1..=DIM as u8 {
                let expect = sf * f4.coeff(i, j, k, l) as i128;
                if md(t[k as usize - 1][l as usize - 1] - expect) != 0 {
                    return Ok(RawVerdict {
                        member: false,
                        s_h: None,
                        s_f: None,
                        witness: Some((
                            format!("f[{i},{j},{k},{l}]"),
                            format!("{}", md(t[k as usize - 1][l as usize - 1] - expect)),
                        )),
                    });
                }
            }
        }
    }
    Ok(RawVerdict {
        member: true,
        s_h: Some(s_h),
        s_f,
        witness: None,
    })
}

/// Arbitrary-precision variant of [`forms_check_i128`] for matrices whose
/// cleared entries exceed the machine-integer bound.
fn forms_check_bigint(
    cb: &ChevalleyBasis,
    h: &SymplecticForm,
    f4: &FourLinearForm,
    ints: &[BigInt],
) -> Result<RawVerdict<BigInt>, MembershipError> {
    let at = |r: usize, c: usize| &ints[r * DIM + c];
    let mut p_mat: Vec<BigInt> = alloc::vec![BigInt::zero(); DIM * DIM];
    for (a, b, c) in h.pairs() {
        let (ia, ib) = (a as usize - 1, b as usize - 1);
        for i in 0..DIM {
            for j in 0..DIM {
                p_mat[i * DIM + j] +=
                    BigInt::from(c) * (at(ia, i) * at(ib, j) - at(ib, i) * at(ia, j));
            }
        }
    }
    let bar1 = cb.roots().bar(1) as usize - 1;
    let h11 = BigInt::from(h.coeff(1, cb.roots().bar(1)));
    let s_h = &p_mat[bar1] * &h11;
    for i in 0..DIM {
        for j in 0..DIM {
            let expect = &s_h * BigInt::from(h.coeff(i as u8 + 1, j as u8 + 1));
            if p_mat[i * DIM + j] != expect {
                return Ok(RawVerdict {
                    member: false,
                    s_h: None,
                    s_f: None,
                    witness: Some((
                        format!("h[{},{}]", i + 1, j + 1),
                        format!("{}", &p_mat[i * DIM + j] - expect),
                    )),
                });
            }
        }
    }
    let probe = f4
        .entries()
        .iter()
        .find(|e| e.4.abs() == 1)
        .expect("unit coefficients exist");
    let mut s_f: Option<BigInt> = None;
    let mut order: Vec<(u8, u8)> = Vec::with_capacity(DIM * DIM);
    order.push((probe.0, probe.1));
    for i in 1..=DIM as u8 {
        for j in 1..=DIM as u8 {
            if (i, j) != (probe.0, probe.1) {
                order.push((i, j));
            }
        }
    }
    for (i, j) in order {
        let (ci, cj) = (i as usize - 1, j as usize - 1);
        let mut w: Vec<BigInt> = alloc::vec![BigInt::zero(); DIM * DIM];
        for &(a, b, c, d, coeff) in f4.entries() {
            let prod = at(a as usize - 1, ci) * at(b as usize - 1, cj);
            if !prod.is_zero() {
                w[(c as usize - 1) * DIM + (d as usize - 1)] += BigInt::from(coeff) * prod;
            }
        }
        let mut wm: Vec<BigInt> = alloc::vec![BigInt::zero(); DIM * DIM];
        for r in 0..DIM {
            for c in 0..DIM {
                if !w[r * DIM + c].is_zero() {
                    for l in 0..DIM {
                        let t = &w[r * DIM + c] * at(c, l);
                        wm[r * DIM + l] += t;
                    }
                }
            }
        }
        for k in 1..=DIM as u8 {
            for l in 1..=DIM as u8 {
                let mut acc = BigInt::zero();
                for r in 0..DIM {
                    let v = at(r, k as usize - 1);
                    if !v.is_zero() {
                        acc += v * &wm[r * DIM + (l as usize - 1)];
                    }
                }
                if s_f.is_none() && (i, j, k, l) == (probe.0, probe.1, probe.2, probe.3) {
                    s_f = Some(&acc * BigInt::from(probe.4));
                }
                if let Some(sf) = &s_f {
                    let expect = sf * BigInt::from(f4.coeff(i, j, k, l));
                    if acc != expect {
                        return Ok(RawVerdict {
                            member: false,
                            s_h: None,
                            s_f: None,
                            witness: Some((
                                format!("f[{i},{j},{k},{l}]"),
                                format!("{}", acc - expect),
                            )),
                        });
                    }
                }
            }
        }
    }
    Ok(RawVerdict {
        member: true,
        s_h: Some(s_h),
        s_f,
        witness: None,
    })
}

/// Agreement report of the two membership routes over a list of matrices.
#[derive(Clone, Debug)]
pub struct CrossCheckReport {
    pub total: usize,
    pub accepted: usize,
    pub rejected: usize,
    /// indices where the two routes disagreed, with their verdicts
    pub disagreements: Vec<(usize, bool, bool)>,
}

/// Runs both membership routes on every matrix and records disagreements;
/// agreement (in both directions) is the assertion, not the accept rate.
pub fn cross_check<R: Field>(
    cb: &ChevalleyBasis,
    basis: &QuadricBasis,
    reducer: &Reducer<R>,
    h: &SymplecticForm,
    f4: &FourLinearForm,
    ring: &R,
    ms: &[Matrix<R>],
) -> Result<CrossCheckReport, MembershipError>
where
    R::Elem: Ord,
{
    let mut report = CrossCheckReport {
        total: ms.len(),
        accepted: 0,
        rejected: 0,
        disagreements: Vec::new(),
    };
    for (i, m) in ms.iter().enumerate() {
        let gi = membership_gi(basis, reducer, ring, m)?;
        let forms = membership_forms(cb, h, f4, ring, m)?;
        if gi.member != forms.member {
            report.disagreements.push((i, gi.member, forms.member));
        } else if gi.member {
            report.accepted += 1;
        } else {
            report.rejected += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{build_f, build_h};
    use crate::quadrics::build_basis;
    use crate::rep56::{evaluate_word, random_word, torus_weight};
    use crate::ring::{IntRing, PrimeField, RatField};

    struct Ctx {
        cb: ChevalleyBasis,
        basis: QuadricBasis,
        h: SymplecticForm,
        f4: FourLinearForm,
    }

    fn ctx() -> Ctx {
        let cb = ChevalleyBasis::new();
        let basis = build_basis(&cb, &[2, 3]);
        let h = build_h(&cb);
        let f4 = build_f(&cb);
        Ctx { cb, basis, h, f4 }
    }

    #[test]
    fn gi_kernel_dimension_f5() {
        let c = ctx();
        let f5 = PrimeField::new(5);
        let rep = lie_dim_gi(&c.cb, &c.basis, &f5, false);
        assert_eq!(rep.unknowns, 3136);
        assert_eq!(rep.kernel_dim, 134);
        assert_eq!(rep.rank, 3136 - 134);
    }

    #[test]
    fn gi_kernel_contains_root_elements_and_torals() {
        let c = ctx();
        let q = RatField;
        let reducer = Reducer::new(&c.cb, &c.basis, q);
        let mut ops: Vec<Vec<(u32, i64)>> = Vec::new();
        for gamma in c.cb.roots().e7_roots().collect::<Vec<_>>() {
            ops.push(unipotent_derivative(&c.cb, &gamma));
        }
        for i in 0..7 {
            let mut hvec = [0i64; 8];
            hvec[i] = 1;
            ops.push(toral_diag(&c.cb, &hvec));
        }
        ops.push(grading_diag(&c.cb));
        assert_eq!(ops.len(), 134);
        for op in &ops {
            for (_, qf) in c.basis.generators() {
                let qr = qf.map_ring(&q, |v| q.from_bigint(v));
                let d = derivative_form(&q, &qr, op);
                let (_, rem) = reducer.reduce(&d);
                assert!(rem.is_zero(), "derivative stays in the span");
            }
        }
        // the 134 operators are linearly independent
        let f101 = PrimeField::new(101);
        let mut elim = Eliminator::new(f101);
        let mut rank = 0;
        for op in &ops {
            let row: Vec<(u32, u64)> = op
                .iter()
                .map(|&(c, v)| (c, f101.from_i64(v)))
                .collect();
            if elim.insert(row) {
                rank += 1;
            }
        }
        assert_eq!(rank, 134);
    }

    #[test]
    fn gi_kernel_vanishing_on_distance_three_entries() {
        let c = ctx();
        let f5 = PrimeField::new(5);
        let rep = lie_dim_gi(&c.cb, &c.basis, &f5, true);
        let basis = rep.kernel_basis.unwrap();
        assert_eq!(basis.len(), 134);
        let rs = c.cb.roots();
        for vec in &basis {
            for &(col, _) in vec {
                let r = (col / 56) as u8 + 1;
                let cc = (col % 56) as u8 + 1;
                assert!(
                    rs.distance(r, cc) <= 1,
                    "kernel supported on distance ≤ 1 entries only"
                );
            }
        }
    }

    #[test]
    fn fh_dimensions_f5() {
        let c = ctx();
        let f5 = PrimeField::new(5);
        let plain = lie_dim_fh(&c.cb, &c.f4, &c.h, &f5, false, false);
        assert_eq!(plain.unknowns, 3136);
        assert_eq!(plain.kernel_dim, 133);
        let ext = lie_dim_fh(&c.cb, &c.f4, &c.h, &f5, true, false);
        assert_eq!(ext.unknowns, 3141);
        assert_eq!(ext.kernel_dim, 134);
    }

    #[test]
    fn fh_kernel_certificates() {
        let c = ctx();
        // ad e_γ and the E7 Cartan satisfy the plain derivation system
        let gamma = c.cb.roots().e7_roots().nth(3).unwrap();
        let op = unipotent_derivative(&c.cb, &gamma);
        assert!(fh_kernel_contains(&c.cb, &c.f4, &c.h, &op, None));
        let mut hvec = [0i64; 8];
        hvec[4] = 1;
        let top = toral_diag(&c.cb, &hvec);
        assert!(fh_kernel_contains(&c.cb, &c.f4, &c.h, &top, None));
        // the grading direction needs the similarity unknowns (ε-1 = 2,
        // ε'-1 = 1), and fails the plain system
        let gop = grading_diag(&c.cb);
        assert!(!fh_kernel_contains(&c.cb, &c.f4, &c.h, &gop, None));
        assert!(fh_kernel_contains(
            &c.cb,
            &c.f4,
            &c.h,
            &gop,
            Some([2, 1, 0, 0, 0])
        ));
    }

    #[test]
    fn membership_accepts_words_and_torus() {
        let c = ctx();
        let f7 = PrimeField::new(7);
        let reducer = Reducer::new(&c.cb, &c.basis, f7);
        for seed in [1u64, 2, 3] {
            let w = random_word(&c.cb, &f7, seed, 9);
            let m = evaluate_word(&c.cb, &f7, &w).unwrap();
            let gi = membership_gi(&c.basis, &reducer, &f7, &m).unwrap();
            assert!(gi.member, "group word is a member (ideal route)");
            let fo = membership_forms(&c.cb, &c.h, &c.f4, &f7, &m).unwrap();
            assert!(fo.member, "group word is a member (forms route)");
            let (eh, ef) = (fo.eps_h.unwrap(), fo.eps_f.unwrap());
            assert_eq!(ef, f7.mul(&eh, &eh));
        }
        let id = Matrix::identity(f7, DIM);
        assert!(membership_gi(&c.basis, &reducer, &f7, &id)
            .unwrap()
            .member);
    }

    #[test]
    fn membership_torus_multipliers_over_q() {
        let c = ctx();
        let q = RatField;
        let m = torus_weight(&c.cb, &q, &q.from_i64(2)).unwrap();
        let fo = membership_forms(&c.cb, &c.h, &c.f4, &q, &m).unwrap();
        assert!(fo.member);
        assert_eq!(fo.eps_h.unwrap(), q.from_i64(2), "h scales by η");
        assert_eq!(fo.eps_f.unwrap(), q.from_i64(4), "f scales by η²");
        let reducer = Reducer::new(&c.cb, &c.basis, q);
        assert!(membership_gi(&c.basis, &reducer, &q, &m)
            .unwrap()
            .member);
    }

    #[test]
    fn membership_rejects_diag_2() {
        let c = ctx();
        let q = RatField;
        let mut m = Matrix::identity(q, DIM);
        m.set(0, 0, q.from_i64(2));
        let reducer = Reducer::new(&c.cb, &c.basis, q);
        let gi = membership_gi(&c.basis, &reducer, &q, &m).unwrap();
        assert!(!gi.member);
        assert!(gi.witness.is_some(), "rejection names a witness");
        let fo = membership_forms(&c.cb, &c.h, &c.f4, &q, &m).unwrap();
        assert!(!fo.member);
    }

    #[test]
    fn membership_rejects_singular() {
        let c = ctx();
        let f7 = PrimeField::new(7);
        let zero = Matrix::zero(f7, DIM, DIM);
        assert_eq!(
            membership_forms(&c.cb, &c.h, &c.f4, &f7, &zero).unwrap_err(),
            MembershipError::SingularMatrix
        );
    }

    #[test]
    fn cross_check_on_random_invertibles() {
        let c = ctx();
        let f7 = PrimeField::new(7);
        let reducer = Reducer::new(&c.cb, &c.basis, f7);
        let mut rng = crate::rep56::Lcg::new(2718);
        let mut ms = Vec::new();
        // a few random invertible matrices: almost surely non-members
        while ms.len() < 5 {
            let mut m = Matrix::zero(f7, DIM, DIM);
            for i in 0..DIM {
                for j in 0..DIM {
                    m.set(i, j, rng.below(7) as u64);
                }
            }
            if !f7.is_zero(&m.det()) {
                ms.push(m);
            }
        }
        // and a few members
        for seed in [11u64, 12] {
            let w = random_word(&c.cb, &f7, seed, 8);
            ms.push(evaluate_word(&c.cb, &f7, &w).unwrap());
        }
        let rep = cross_check(&c.cb, &c.basis, &reducer, &c.h, &c.f4, &f7, &ms).unwrap();
        assert!(rep.disagreements.is_empty(), "the two routes agree");
        assert_eq!(rep.accepted, 2);
        assert_eq!(rep.rejected, 5);
    }

    #[test]
    fn conjugation_consistency() {
        let c = ctx();
        let f7 = PrimeField::new(7);
        let w = random_word(&c.cb, &f7, 99, 7);
        let m = evaluate_word(&c.cb, &f7, &w).unwrap();
        let minv = m.inverse().unwrap();
        let gamma = c.cb.roots().e7_roots().nth(40).unwrap();
        let x = crate::rep56::root_unipotent(&c.cb, &f7, &gamma, &f7.from_i64(3)).unwrap();
        let conj = m.mul(&x).mul(&minv);
        let fo = membership_forms(&c.cb, &c.h, &c.f4, &f7, &conj).unwrap();
        assert!(fo.member);
        assert!(f7.is_one(&fo.eps_h.unwrap()));
        assert!(f7.is_one(&fo.eps_f.unwrap()));
    }

    #[test]
    fn lie_dims_match_over_int_cleared_path() {
        // the rational solver agrees with the prime-field one
        let c = ctx();
        let q = RatField;
        let rep = lie_dim_fh(&c.cb, &c.f4, &c.h, &q, false, false);
        assert_eq!(rep.kernel_dim, 133);
        let _ = IntRing;
    }
}
