//! The 133 quadratic generators of the invariant ideal, degree-2 ideal
//! membership, and the closed-form invariance identities for root
//! unipotents.
//!
//! For every maximal square `Ω(α)` there is one square equation
//! `f_{ρ,σ} = x_ρ x_σ - Σ N_{ρ,-λ} N_{σ,-λ*} x_λ x_{λ*}`, summed over the
//! other orthogonal pairs of the square; together with the forms
//! `g_α = Σ_{λ∈Ω(α)} N_{λ,λ̄} x_λ x_{λ̄}` for the seven fundamental roots
//! this gives 126 + 7 = 133 generators, linearly independent over the
//! rationals and modulo every prime.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::chevalley::ChevalleyBasis;
use crate::matrix::Matrix;
use crate::rep56::{Token, DIM};
use crate::ring::{Field, IntRing, Ring};
use crate::roots::{Root, RootError, WeightIndex};

/// Unordered monomial key `(a, b)` with `a ≤ b`; `a = b` encodes a square
/// monomial `x_a²`.
pub type PairKey = (u8, u8);

fn ukey(a: u8, b: u8) -> PairKey {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A sparse quadratic form in the 56 weight coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticForm<R: Ring> {
    ring: R,
    terms: BTreeMap<PairKey, R::Elem>,
}

impl<R: Ring> QuadraticForm<R> {
    pub fn zero(ring: R) -> Self {
        QuadraticForm {
            ring,
            terms: BTreeMap::new(),
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn add_term(&mut self, a: u8, b: u8, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        let key = ukey(a, b);
        match self.terms.get_mut(&key) {
            Some(slot) => {
                let s = self.ring.add(slot, &c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&key);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn coeff(&self, a: u8, b: u8) -> R::Elem {
        self.terms
            .get(&ukey(a, b))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PairKey, &R::Elem)> {
        self.terms.iter()
    }

    pub fn terms_map(&self) -> &BTreeMap<PairKey, R::Elem> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = self.ring.neg(v);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), v) in &other.terms {
            out.add_term(a, b, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = QuadraticForm::zero(self.ring.clone());
        for (&(a, b), v) in &self.terms {
            out.add_term(a, b, self.ring.mul(v, c));
        }
        out
    }

    pub fn map_ring<S: Ring>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> QuadraticForm<S> {
        let mut out = QuadraticForm::zero(ring.clone());
        for (&(a, b), v) in &self.terms {
            out.add_term(a, b, f(v));
        }
        out
    }

    /// Value at a vector: `Σ c_{ab} v_a v_b`.
    pub fn eval(&self, v: &[R::Elem]) -> R::Elem {
        assert_eq!(v.len(), DIM);
        let mut acc = self.ring.zero();
        for (&(a, b), c) in &self.terms {
            let t = self.ring.mul(&v[a as usize - 1], &v[b as usize - 1]);
            self.ring.mul_add_assign(&mut acc, c, &t);
        }
        acc
    }

    /// The linear substitution `(q ∘ M)(x) = q(M x)`, expanded exactly.
    pub fn pullback(&self, m: &Matrix<R>) -> Self {
        assert_eq!(m.rows(), DIM);
        assert_eq!(m.cols(), DIM);
        let r = &self.ring;
        let mut out = QuadraticForm::zero(r.clone());
        for (&(a, b), c) in &self.terms {
            let ra = m.row(a as usize - 1);
            let rb = m.row(b as usize - 1);
            for i in 0..DIM {
                if r.is_zero(&ra[i]) {
                    continue;
                }
                let cai = r.mul(c, &ra[i]);
                for j in 0..DIM {
                    if r.is_zero(&rb[j]) {
                        continue;
                    }
                    out.add_term(i as u8 + 1, j as u8 + 1, r.mul(&cai, &rb[j]));
                }
            }
        }
        out
    }

    /// Pullback along one generator token, using its sparse structure.
    pub fn pullback_token(&self, cb: &ChevalleyBasis, token: &Token<R::Elem>) -> Self {
        let r = &self.ring;
        let rs = cb.roots();
        match token {
            Token::TorusWeight { eta } => {
                let mut out = QuadraticForm::zero(r.clone());
                for (&(a, b), c) in &self.terms {
                    let e = crate::rep56::torus_exponent(&rs.weight_root(a))
                        + crate::rep56::torus_exponent(&rs.weight_root(b));
                    out.add_term(a, b, r.mul(c, &r.pow_i64(eta, e)));
                }
                out
            }
            Token::RootUnipotent { gamma, xi } => {
                // x_a ← x_a + ξ N_{γ, a-γ} x_{a-γ} when a-γ is a weight
                let mut down: [Option<(u8, i64)>; DIM] = [None; DIM];
                for w in rs.weights() {
                    let dn = w.root.sub(gamma);
                    if let Some(i) = rs.weight_of_root(&dn) {
                        down[w.ordinal as usize - 1] = Some((i, cb.n(gamma, &dn)));
                    }
                }
                let mut out = QuadraticForm::zero(r.clone());
                for (&(a, b), c) in &self.terms {
                    out.add_term(a, b, c.clone());
                    if let Some((a2, n)) = down[a as usize - 1] {
                        let t = r.mul(&r.mul(c, xi), &r.from_i64(n));
                        out.add_term(a2, b, t);
                    }
                    if let Some((b2, n)) = down[b as usize - 1] {
                        let t = r.mul(&r.mul(c, xi), &r.from_i64(n));
                        out.add_term(a, b2, t);
                    }
                    if let (Some((a2, na)), Some((b2, nb))) =
                        (down[a as usize - 1], down[b as usize - 1])
                    {
                        let t = r.mul(&r.mul(c, xi), &r.mul(xi, &r.from_i64(na * nb)));
                        out.add_term(a2, b2, t);
                    }
                }
                out
            }
            Token::WeylElem { alpha, eps } => {
                let inv = r.inv(eps).expect("Weyl parameter is a unit");
                let t1 = Token::RootUnipotent {
                    gamma: *alpha,
                    xi: eps.clone(),
                };
                let t2 = Token::RootUnipotent {
                    gamma: alpha.negate(),
                    xi: r.neg(&inv),
                };
                self.pullback_token(cb, &t1)
                    .pullback_token(cb, &t2)
                    .pullback_token(cb, &t1)
            }
        }
    }
}

/// Name of a generator in the fixed basis ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenName {
    /// Square equation on the canonical pair `(i, j)` of its square.
    F(u8, u8),
    /// `g_k = g_{α_k}` for a fundamental root, `k = 1..7`.
    G(u8),
}

impl fmt::Display for GenName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenName::F(i, j) => write!(f, "f[{i},{j}]"),
            GenName::G(k) => write!(f, "g[{k}]"),
        }
    }
}

/// The square equation `f_{ρ,σ}` of the maximal square through `{ρ, σ}`.
pub fn square_equation(
    cb: &ChevalleyBasis,
    rho: WeightIndex,
    sigma: WeightIndex,
) -> Result<QuadraticForm<IntRing>, RootError> {
    let rs = cb.roots();
    let sq = rs.square_of_pair(rho, sigma)?;
    let mut q = QuadraticForm::zero(IntRing);
    q.add_term(rho, sigma, IntRing.one());
    let rho_root = rs.weight_root(rho);
    let sigma_root = rs.weight_root(sigma);
    for &(a, b) in &sq.pairs {
        if ukey(rho, sigma) == (a, b) {
            continue;
        }
        let la = rs.weight_root(a).negate();
        let lb = rs.weight_root(b).negate();
        let c = cb.n(&rho_root, &la) * cb.n(&sigma_root, &lb);
        // the coefficient must not depend on the orientation of the pair
        debug_assert_eq!(c, cb.n(&rho_root, &lb) * cb.n(&sigma_root, &la));
        q.add_term(a, b, IntRing.from_i64(-c));
    }
    debug_assert_eq!(q.len(), 6);
    Ok(q)
}

/// `g_α = Σ_{λ∈Ω(α)} N_{λ,λ̄} x_λ x_{λ̄}`.
pub fn g_form(cb: &ChevalleyBasis, alpha: &Root) -> Result<QuadraticForm<IntRing>, RootError> {
    let rs = cb.roots();
    let sq = rs.maximal_square(alpha)?;
    let mut q = QuadraticForm::zero(IntRing);
    for &m in &sq.members {
        let bar = rs.bar(m);
        let n = cb.n(&rs.weight_root(m), &rs.weight_root(bar));
        q.add_term(m, bar, IntRing.from_i64(n));
    }
    debug_assert_eq!(q.len(), 12);
    Ok(q)
}

/// The fundamental roots of E7 inside E8 (`α1..α7`).
pub fn fundamental_e7() -> [Root; 7] {
    core::array::from_fn(|i| {
        let mut c = [0i32; 8];
        c[i] = 1;
        Root(c)
    })
}

/// The 133 generators with independence verified over the rationals and a
/// configured list of primes.
pub struct QuadricBasis {
    gens: Vec<(GenName, QuadraticForm<IntRing>)>,
    /// E7 roots in generator order (one square equation per root).
    square_roots: Vec<Root>,
}

impl QuadricBasis {
    pub fn generators(&self) -> &[(GenName, QuadraticForm<IntRing>)] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn square_roots(&self) -> &[Root] {
        &self.square_roots
    }
}

/// Builds the 133 generators: one square equation per E7 root (canonical
/// pair, E7 roots in the deterministic global order), then `g_1..g_7`.
/// Verifies linear independence over the rationals and over `F_p` for the
/// given primes; an independence failure is a construction bug and panics.
pub fn build_basis(cb: &ChevalleyBasis, primes: &[u64]) -> QuadricBasis {
    let rs = cb.roots();
    let mut gens = Vec::with_capacity(133);
    let mut square_roots = Vec::with_capacity(126);
    for alpha in rs.e7_roots().collect::<Vec<_>>() {
        let sq = rs.maximal_square(&alpha).expect("E7 root");
        let (a, b) = sq.canonical_pair();
        let q = square_equation(cb, a, b).expect("canonical pair lies in the square");
        gens.push((GenName::F(a, b), q));
        square_roots.push(alpha);
    }
    for (k, alpha) in fundamental_e7().iter().enumerate() {
        let q = g_form(cb, alpha).expect("fundamental root");
        gens.push((GenName::G(k as u8 + 1), q));
    }
    assert_eq!(gens.len(), 133);

    let basis = QuadricBasis { gens, square_roots };
    assert_eq!(
        rank_over(&basis, &crate::ring::RatField),
        133,
        "independence over the rationals"
    );
    for &p in primes {
        assert_eq!(
            rank_over(&basis, &crate::ring::PrimeField::new(p)),
            133,
            "independence modulo {p}"
        );
    }
    basis
}

/// Rank of the generator family as vectors in the 1596-dimensional space
/// of degree-2 monomials, over any field.
pub fn rank_over<R: Field>(basis: &QuadricBasis, ring: &R) -> usize {
    let key_index = |&(a, b): &PairKey| -> usize { (a as usize - 1) * DIM + (b as usize - 1) };
    let rows: Vec<Vec<(u32, R::Elem)>> = basis
        .gens
        .iter()
        .map(|(_, q)| {
            let mut row: Vec<(u32, R::Elem)> = q
                .terms()
                .map(|(k, v)| {
                    let bi: &num_bigint::BigInt = v;
                    let as_i64 = i64::try_from(bi.clone()).expect("generator coefficients fit");
                    (key_index(k) as u32, ring.from_i64(as_i64))
                })
                .collect();
            row.sort_unstable_by_key(|e| e.0);
            row
        })
        .collect();
    let mut elim = crate::solve::Eliminator::new(ring.clone());
    let mut rank = 0;
    for row in rows {
        if elim.insert(row) {
            rank += 1;
        }
    }
    rank
}

/// Precomputed reduction data for degree-2 span membership over a field.
///
/// Pivots are fixed by lexicographic monomial order over pair ordinals:
/// each square equation pivots on its canonical monomial (disjoint
/// supports make this immediate), and the seven `g` forms are put in
/// reduced row echelon form over the 28 bar-pair monomials.
pub struct Reducer<R: Field> {
    ring: R,
    /// canonical pivot key per square generator
    square_pivot: Vec<PairKey>,
    /// square equations as int terms for expansion
    square_terms: Vec<Vec<(PairKey, i64)>>,
    /// RREF of the g block over the bar-pair monomials: rows of
    /// (pivot key, tail entries, combination over original g_1..g_7)
    g_rows: Vec<GRow<R>>,
}

struct GRow<R: Field> {
    pivot: PairKey,
    tail: Vec<(PairKey, R::Elem)>,
    combo: Vec<(usize, R::Elem)>,
}

impl<R: Field> Reducer<R> {
    pub fn new(cb: &ChevalleyBasis, basis: &QuadricBasis, ring: R) -> Self {
        let _ = cb;
        let mut seen_pairs: BTreeMap<PairKey, ()> = BTreeMap::new();
        let mut square_pivot = Vec::new();
        let mut square_terms = Vec::new();
        for (idx, (name, q)) in basis.gens.iter().enumerate() {
            match name {
                GenName::F(a, b) => {
                    let terms: Vec<(PairKey, i64)> = q
                        .terms()
                        .map(|(k, v)| (*k, i64::try_from(v.clone()).unwrap()))
                        .collect();
                    let _ = idx;
                    for (k, _) in &terms {
                        let prev = seen_pairs.insert(*k, ());
                        assert!(prev.is_none(), "square supports are disjoint");
                    }
                    square_pivot.push(ukey(*a, *b));
                    square_terms.push(terms);
                }
                GenName::G(_) => {}
            }
        }

        // g block RREF over the 28 bar-pair monomials (columns keyed by the
        // smaller ordinal), tracking the combination over the original g's.
        let bar_cols: Vec<PairKey> = (1..=28u8).map(|a| (a, 57 - a)).collect();
        let col_of = |k: &PairKey| -> usize { k.0 as usize - 1 };
        let mut rows: Vec<(Vec<R::Elem>, Vec<R::Elem>)> = Vec::new();
        for (j, (name, q)) in basis.gens.iter().enumerate().skip(126) {
            assert!(matches!(name, GenName::G(_)));
            let mut row = alloc::vec![ring.zero(); 28];
            for (k, v) in q.terms() {
                row[col_of(k)] = ring.from_i64(i64::try_from(v.clone()).unwrap());
            }
            let mut combo = alloc::vec![ring.zero(); 7];
            combo[j - 126] = ring.one();
            rows.push((row, combo));
        }
        // Gauss-Jordan with lexicographically first pivot columns
        let mut pivot_cols = Vec::new();
        let mut r0 = 0;
        for col in 0..28 {
            let Some(p) = (r0..rows.len()).find(|&i| !ring.is_zero(&rows[i].0[col])) else {
                continue;
            };
            rows.swap(r0, p);
            let inv = ring.inv(&rows[r0].0[col]).unwrap();
            for x in rows[r0].0.iter_mut() {
                *x = ring.mul(x, &inv);
            }
            for x in rows[r0].1.iter_mut() {
                *x = ring.mul(x, &inv);
            }
            for i in 0..rows.len() {
                if i != r0 && !ring.is_zero(&rows[i].0[col]) {
                    let f = rows[i].0[col].clone();
                    for c in 0..28 {
                        let t = ring.mul(&f, &rows[r0].0[c]);
                        rows[i].0[c] = ring.sub(&rows[i].0[c], &t);
                    }
                    for c in 0..7 {
                        let t = ring.mul(&f, &rows[r0].1[c]);
                        rows[i].1[c] = ring.sub(&rows[i].1[c], &t);
                    }
                }
            }
            pivot_cols.push(col);
            r0 += 1;
            if r0 == rows.len() {
                break;
            }
        }
        assert_eq!(r0, 7, "the seven g forms are independent");

        let g_rows: Vec<GRow<R>> = (0..7)
            .map(|i| {
                let pc = pivot_cols[i];
                let tail: Vec<(PairKey, R::Elem)> = (0..28)
                    .filter(|&c| c != pc && !ring.is_zero(&rows[i].0[c]))
                    .map(|c| (bar_cols[c], rows[i].0[c].clone()))
                    .collect();
                let combo: Vec<(usize, R::Elem)> = (0..7)
                    .filter(|&c| !ring.is_zero(&rows[i].1[c]))
                    .map(|c| (126 + c, rows[i].1[c].clone()))
                    .collect();
                GRow {
                    pivot: bar_cols[pc],
                    tail,
                    combo,
                }
            })
            .collect();

        Reducer {
            ring,
            square_pivot,
            square_terms,
            g_rows,
        }
    }

    /// Expresses `q = Σ coordᵢ·genᵢ + remainder` with the remainder in the
    /// fixed complement of the span; the remainder is zero exactly when
    /// `q` lies in the span of the 133 generators.
    pub fn reduce(&self, q: &QuadraticForm<R>) -> (Vec<R::Elem>, QuadraticForm<R>) {
        let ring = &self.ring;
        let mut coords = alloc::vec![ring.zero(); 133];
        let mut work = q.clone();

        // square pivots: subtract coeff × (square equation)
        for (idx, pivot) in self.square_pivot.iter().enumerate() {
            let c = work.coeff(pivot.0, pivot.1);
            if ring.is_zero(&c) {
                continue;
            }
            coords[idx] = c.clone();
            for (k, s) in &self.square_terms[idx] {
                let t = ring.mul(&c, &ring.from_i64(*s));
                work.add_term(k.0, k.1, ring.neg(&t));
            }
        }
        // g block pivots
        for row in &self.g_rows {
            let c = work.coeff(row.pivot.0, row.pivot.1);
            if ring.is_zero(&c) {
                continue;
            }
            for (gi, gc) in &row.combo {
                let t = ring.mul(&c, gc);
                coords[*gi] = ring.add(&coords[*gi], &t);
            }
            work.add_term(row.pivot.0, row.pivot.1, ring.neg(&c));
            for (k, v) in &row.tail {
                let t = ring.mul(&c, v);
                work.add_term(k.0, k.1, ring.neg(&t));
            }
        }
        (coords, work)
    }

    /// Reduction with linear-functional coefficients: the elimination run
    /// over a map `monomial → sparse functional`, as used by the
    /// Lie-algebra solver.  Returns the non-pivot rows.
    pub fn reduce_functionals(
        &self,
        mut table: BTreeMap<PairKey, Vec<(u32, R::Elem)>>,
    ) -> Vec<Vec<(u32, R::Elem)>> {
        let ring = &self.ring;
        let sub_scaled = |dst: &mut Vec<(u32, R::Elem)>, src: &[(u32, R::Elem)], s: &R::Elem| {
            // dst -= s·src, both sorted by column
            let mut out = Vec::with_capacity(dst.len() + src.len());
            let mut i = 0;
            let mut j = 0;
            while i < dst.len() || j < src.len() {
                if j >= src.len() || (i < dst.len() && dst[i].0 < src[j].0) {
                    out.push(dst[i].clone());
                    i += 1;
                } else if i >= dst.len() || src[j].0 < dst[i].0 {
                    let v = ring.neg(&ring.mul(s, &src[j].1));
                    if !ring.is_zero(&v) {
                        out.push((src[j].0, v));
                    }
                    j += 1;
                } else {
                    let v = ring.sub(&dst[i].1, &ring.mul(s, &src[j].1));
                    if !ring.is_zero(&v) {
                        out.push((dst[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            *dst = out;
        };

        for (idx, pivot) in self.square_pivot.iter().enumerate() {
            let Some(f) = table.remove(pivot) else {
                continue;
            };
            for (k, s) in &self.square_terms[idx] {
                if k == pivot {
                    continue;
                }
                let sc = self.ring.from_i64(*s);
                let dst = table.entry(*k).or_default();
                sub_scaled(dst, &f, &sc);
                if dst.is_empty() {
                    table.remove(k);
                }
            }
        }
        for row in &self.g_rows {
            let Some(f) = table.remove(&row.pivot) else {
                continue;
            };
            for (k, v) in &row.tail {
                let dst = table.entry(*k).or_default();
                sub_scaled(dst, &f, v);
                if dst.is_empty() {
                    table.remove(k);
                }
            }
        }
        table.into_values().filter(|v| !v.is_empty()).collect()
    }
}

/// A failed invariance check, naming the offending generator and case.
#[derive(Clone, Debug)]
pub struct InvarianceFailure {
    pub gamma: Root,
    pub xi: i64,
    pub what: String,
}

impl fmt::Display for InvarianceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "invariance failure at γ = {:?}, ξ = {}: {}",
            self.gamma, self.xi, self.what
        )
    }
}

/// Span stability: the pullback of every generator under `x_γ(ξ)` reduces
/// to zero remainder.
pub fn verify_span_stability(
    cb: &ChevalleyBasis,
    basis: &QuadricBasis,
    reducer: &Reducer<crate::ring::RatField>,
    gamma: &Root,
    xi: i64,
) -> Result<(), InvarianceFailure> {
    use crate::ring::RatField;
    if !cb.roots().is_e7_root(gamma) {
        return Err(InvarianceFailure {
            gamma: *gamma,
            xi,
            what: String::from("not an E7 root"),
        });
    }
    let q_ring = RatField;
    let tok = Token::RootUnipotent {
        gamma: *gamma,
        xi: IntRing.from_i64(xi),
    };
    for (name, q) in basis.generators() {
        let pulled = q.pullback_token(cb, &tok);
        let rat = pulled.map_ring(&q_ring, |v| {
            num_rational::BigRational::from_integer(v.clone())
        });
        let (_, rem) = reducer.reduce(&rat);
        if !rem.is_zero() {
            return Err(InvarianceFailure {
                gamma: *gamma,
                xi,
                what: alloc::format!("pullback of {name} leaves the span"),
            });
        }
    }
    Ok(())
}

/// The closed-form identities for both generator families, all five
/// inner-product cases, coefficient-exact over the integers.
pub fn verify_identities(
    cb: &ChevalleyBasis,
    gamma: &Root,
    xi: i64,
) -> Result<(), InvarianceFailure> {
    let rs = cb.roots();
    if !rs.is_e7_root(gamma) {
        return Err(InvarianceFailure {
            gamma: *gamma,
            xi,
            what: String::from("not an E7 root"),
        });
    }
    let tok = Token::RootUnipotent {
        gamma: *gamma,
        xi: IntRing.from_i64(xi),
    };
    for alpha in rs.e7_roots().collect::<Vec<_>>() {
        check_square_identity(cb, gamma, xi, &alpha, &tok).map_err(|what| InvarianceFailure {
            gamma: *gamma,
            xi,
            what,
        })?;
        check_g_identity(cb, gamma, xi, &alpha, &tok).map_err(|what| InvarianceFailure {
            gamma: *gamma,
            xi,
            what,
        })?;
    }
    Ok(())
}

/// Per-unipotent invariance verification: every generator's pullback under
/// `x_γ(ξ)` reduces to zero remainder, and the closed-form identities for
/// all five inner-product cases hold coefficient-exactly over the
/// integers.
pub fn verify_invariance(
    cb: &ChevalleyBasis,
    basis: &QuadricBasis,
    reducer: &Reducer<crate::ring::RatField>,
    gamma: &Root,
    xi: i64,
) -> Result<(), InvarianceFailure> {
    verify_span_stability(cb, basis, reducer, gamma, xi)?;
    verify_identities(cb, gamma, xi)
}

fn check_square_identity(
    cb: &ChevalleyBasis,
    gamma: &Root,
    xi: i64,
    alpha: &Root,
    tok: &Token<num_bigint::BigInt>,
) -> Result<(), String> {
    let rs = cb.roots();
    let sq = rs.maximal_square(alpha).unwrap();
    let (mut rho, mut sigma) = sq.canonical_pair();
    let p = alpha.pairing(gamma);
    // orient so that (ρ, γ) = 1 in the mixed case
    if p == 1 && rs.weight_root(rho).pairing(gamma) != 1 {
        core::mem::swap(&mut rho, &mut sigma);
    }
    let f_rs = square_equation(cb, rho, sigma).unwrap();
    let pulled = f_rs.pullback_token(cb, tok);
    let rho_root = rs.weight_root(rho);
    let sigma_root = rs.weight_root(sigma);

    let expected = match p {
        -2 | -1 | 0 => f_rs.clone(),
        1 => {
            debug_assert_eq!(rho_root.pairing(gamma), 1);
            debug_assert_eq!(sigma_root.pairing(gamma), 0);
            let rho2 = rs.weight_of_root(&rho_root.sub(gamma)).unwrap();
            let n = cb.n(gamma, &rho_root.sub(gamma));
            let f2 = square_equation(cb, rho2, sigma).unwrap();
            f_rs.add(&f2.scale(&IntRing.from_i64(xi * n)))
        }
        2 => {
            // γ = α: f + ξ N_{γ,σ-γ} N_{ρ,σ-γ} g_α + ξ² N_{γ,ρ-γ} N_{γ,σ-γ} f_{ρ-γ,σ-γ}
            let rho2 = rs.weight_of_root(&rho_root.sub(gamma)).unwrap();
            let sigma2 = rs.weight_of_root(&sigma_root.sub(gamma)).unwrap();
            let n_g_s = cb.n(gamma, &sigma_root.sub(gamma));
            let n_r_s = cb.n(&rho_root, &sigma_root.sub(gamma));
            let n_g_r = cb.n(gamma, &rho_root.sub(gamma));
            let g = g_form(cb, alpha).unwrap();
            let f2 = square_equation(cb, rho2, sigma2).unwrap();
            f_rs.add(&g.scale(&IntRing.from_i64(xi * n_g_s * n_r_s)))
                .add(&f2.scale(&IntRing.from_i64(xi * xi * n_g_r * n_g_s)))
        }
        _ => unreachable!("(α, γ) pairing of two roots lies in -2..=2"),
    };
    if pulled != expected {
        return Err(alloc::format!(
            "square-equation identity fails for α = {:?} (case (α,γ) = {})",
            alpha,
            p
        ));
    }
    Ok(())
}

fn check_g_identity(
    cb: &ChevalleyBasis,
    gamma: &Root,
    xi: i64,
    alpha: &Root,
    tok: &Token<num_bigint::BigInt>,
) -> Result<(), String> {
    let rs = cb.roots();
    let g_a = g_form(cb, alpha).unwrap();
    let pulled = g_a.pullback_token(cb, tok);
    let p = alpha.pairing(gamma);

    let correction = match p {
        0 => QuadraticForm::zero(IntRing),
        -2 => {
            // γ = -α: through g_α = -g_{-α} this is the γ = α case of
            // g_{-α}, so the correction is -2ξ N_{ρ+γ,σ} N_{γ,ρ} f_{ρ,σ}
            // with λ₀ ∈ Ω(-α) = Ω(γ).  (A direct expansion confirms the
            // second factors x_λ̄ of g_α do move under x_γ.)
            let sq = rs.maximal_square(&alpha.negate()).unwrap();
            let lam0 = sq.members[0];
            let rho = rs.weight_of_root(&rs.weight_root(lam0).sub(gamma)).unwrap();
            let sigma = rs.bar(lam0);
            let coeff = coeff_for_g_case(cb, gamma, rho, sigma);
            square_equation(cb, rho, sigma)
                .unwrap()
                .scale(&IntRing.from_i64(-2 * xi * coeff))
        }
        2 => {
            // γ = α: 2ξ N_{ρ+γ,σ} N_{γ,ρ} f_{ρ,σ}, ρ = λ₀-γ, σ = bar λ₀
            let sq = rs.maximal_square(alpha).unwrap();
            let lam0 = sq.members[0];
            let rho = rs.weight_of_root(&rs.weight_root(lam0).sub(gamma)).unwrap();
            let sigma = rs.bar(lam0);
            let coeff = coeff_for_g_case(cb, gamma, rho, sigma);
            square_equation(cb, rho, sigma)
                .unwrap()
                .scale(&IntRing.from_i64(2 * xi * coeff))
        }
        1 => {
            // (λ, γ) = 1 for 6 of the 12 members; λ₀ the least of those
            let sq = rs.maximal_square(alpha).unwrap();
            let lam0 = *sq
                .members
                .iter()
                .find(|&&m| rs.weight_root(m).pairing(gamma) == 1)
                .expect("six members pair to 1 with γ");
            let rho = rs.weight_of_root(&rs.weight_root(lam0).sub(gamma)).unwrap();
            let sigma = rs.bar(lam0);
            let coeff = coeff_for_g_case(cb, gamma, rho, sigma);
            square_equation(cb, rho, sigma)
                .unwrap()
                .scale(&IntRing.from_i64(xi * coeff))
        }
        -1 => {
            // g_α = -g_{-α} and (-α, γ) = 1
            let neg = alpha.negate();
            let sq = rs.maximal_square(&neg).unwrap();
            let lam0 = *sq
                .members
                .iter()
                .find(|&&m| rs.weight_root(m).pairing(gamma) == 1)
                .expect("six members pair to 1 with γ");
            let rho = rs.weight_of_root(&rs.weight_root(lam0).sub(gamma)).unwrap();
            let sigma = rs.bar(lam0);
            let coeff = coeff_for_g_case(cb, gamma, rho, sigma);
            square_equation(cb, rho, sigma)
                .unwrap()
                .scale(&IntRing.from_i64(-xi * coeff))
        }
        _ => unreachable!(),
    };
    let expected = g_a.add(&correction);
    if pulled != expected {
        return Err(alloc::format!(
            "g-form identity fails for α = {:?} (case (α,γ) = {})",
            alpha,
            p
        ));
    }
    Ok(())
}

/// The sign `N_{ρ+γ,σ} N_{γ,ρ}` in the `g` identities.
fn coeff_for_g_case(cb: &ChevalleyBasis, gamma: &Root, rho: WeightIndex, sigma: WeightIndex) -> i64 {
    let rs = cb.roots();
    let rho_root = rs.weight_root(rho);
    let sigma_root = rs.weight_root(sigma);
    cb.n(&rho_root.add(gamma), &sigma_root) * cb.n(gamma, &rho_root)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep56::Lcg;
    use crate::ring::{PrimeField, RatField};

    fn setup() -> (ChevalleyBasis, QuadricBasis) {
        let cb = ChevalleyBasis::new();
        let basis = build_basis(&cb, &[2, 3, 5, 7, 11, 13]);
        (cb, basis)
    }

    #[test]
    fn basis_has_133_generators_of_full_rank() {
        let (_, basis) = setup();
        assert_eq!(basis.len(), 133);
        // ranks are re-verified here through the public entry point
        assert_eq!(rank_over(&basis, &PrimeField::new(2)), 133);
        assert_eq!(rank_over(&basis, &RatField), 133);
    }

    #[test]
    fn square_equation_shape() {
        let (cb, basis) = setup();
        let rs = cb.roots();
        for (name, q) in basis.generators().iter().take(126) {
            let GenName::F(a, b) = name else { panic!() };
            assert_eq!(q.len(), 6, "6 monomials, one per orthogonal pair");
            assert_eq!(q.coeff(*a, *b), IntRing.one(), "leading coefficient 1");
            for (k, _) in q.terms() {
                assert_ne!(k.0, k.1, "zero diagonal");
                assert_eq!(rs.distance(k.0, k.1), 2);
            }
            // vanishes on every basis vector
            for l in 0..DIM {
                let mut v = alloc::vec![IntRing.zero(); DIM];
                v[l] = IntRing.one();
                assert!(IntRing.is_zero(&q.eval(&v)));
            }
        }
    }

    #[test]
    fn square_equation_pair_choice_changes_sign_only() {
        let (cb, _) = setup();
        let rs = cb.roots();
        let alpha = rs.e7_roots().nth(17).unwrap();
        let sq = rs.maximal_square(&alpha).unwrap();
        let (r0, s0) = sq.canonical_pair();
        let base = square_equation(&cb, r0, s0).unwrap();
        for &(a, b) in &sq.pairs {
            for (x, y) in [(a, b), (b, a)] {
                let other = square_equation(&cb, x, y).unwrap();
                assert!(
                    other == base || other == base.neg(),
                    "same square equation up to sign"
                );
            }
        }
    }

    #[test]
    fn square_equation_rejects_bad_pairs() {
        let (cb, _) = setup();
        let rs = cb.roots();
        // distance 1 pair
        let a = 1u8;
        let b = (2..=56u8).find(|&b| rs.distance(a, b) == 1).unwrap();
        assert!(square_equation(&cb, a, b).is_err());
        // bar pair (distance 3)
        assert!(square_equation(&cb, a, rs.bar(a)).is_err());
    }

    #[test]
    fn g_form_shape_and_relations() {
        let (cb, _) = setup();
        let rs = cb.roots();
        let e7: Vec<Root> = rs.e7_roots().collect();
        for alpha in e7.iter().take(20) {
            let g = g_form(&cb, alpha).unwrap();
            assert_eq!(g.len(), 12);
            for (k, _) in g.terms() {
                assert_eq!(rs.distance(k.0, k.1), 3, "bar-pair monomials only");
            }
            let gneg = g_form(&cb, &alpha.negate()).unwrap();
            assert_eq!(gneg, g.neg(), "g_(-α) = -g_α");
        }
        // additivity: g_{α+β} = g_α + g_β after cancellation
        let mut checked = 0;
        'outer: for a in &e7 {
            for b in &e7 {
                let sum = a.add(b);
                if rs.is_e7_root(&sum) {
                    let ga = g_form(&cb, a).unwrap();
                    let gb = g_form(&cb, b).unwrap();
                    let gs = g_form(&cb, &sum).unwrap();
                    assert_eq!(ga.add(&gb), gs, "g is additive in the root");
                    checked += 1;
                    if checked >= 60 {
                        break 'outer;
                    }
                }
            }
        }
        assert!(checked >= 60);
    }

    #[test]
    fn span_contains_every_g() {
        let (cb, basis) = setup();
        let reducer = Reducer::new(&cb, &basis, RatField);
        for alpha in cb.roots().e7_roots().collect::<Vec<_>>() {
            let g = g_form(&cb, &alpha).unwrap();
            let rat = g.map_ring(&RatField, |v| {
                num_rational::BigRational::from_integer(v.clone())
            });
            let (_, rem) = reducer.reduce(&rat);
            assert!(rem.is_zero(), "g_α lies in the span for every E7 root");
        }
    }

    #[test]
    fn reduce_identities() {
        let (cb, basis) = setup();
        let reducer = Reducer::new(&cb, &basis, RatField);
        let to_rat = |q: &QuadraticForm<IntRing>| {
            q.map_ring(&RatField, |v| {
                num_rational::BigRational::from_integer(v.clone())
            })
        };
        // reduce(0) = 0
        let (c0, r0) = reducer.reduce(&QuadraticForm::zero(RatField));
        assert!(r0.is_zero() && c0.iter().all(|x| RatField.is_zero(x)));
        // reduce(basis element) = unit coordinate vector
        for (i, (_, q)) in basis.generators().iter().enumerate() {
            let (coords, rem) = reducer.reduce(&to_rat(q));
            assert!(rem.is_zero());
            for (j, c) in coords.iter().enumerate() {
                if j == i {
                    assert!(RatField.is_one(c));
                } else {
                    assert!(RatField.is_zero(c));
                }
            }
        }
        // a square monomial has nonzero remainder
        let mut sq = QuadraticForm::zero(RatField);
        sq.add_term(5, 5, RatField.one());
        let (_, rem) = reducer.reduce(&sq);
        assert!(!rem.is_zero(), "x_λ² does not occur in any generator");
    }

    #[test]
    fn pullback_contravariance() {
        let (cb, basis) = setup();
        let f5 = PrimeField::new(5);
        let q = basis.generators()[40]
            .1
            .map_ring(&f5, |v| f5.from_i64(i64::try_from(v.clone()).unwrap()));
        let id = Matrix::identity(f5, DIM);
        assert_eq!(q.pullback(&id), q);
        let w1 = crate::rep56::random_word(&cb, &f5, 5, 6);
        let w2 = crate::rep56::random_word(&cb, &f5, 6, 6);
        let m1 = crate::rep56::evaluate_word(&cb, &f5, &w1).unwrap();
        let m2 = crate::rep56::evaluate_word(&cb, &f5, &w2).unwrap();
        assert_eq!(
            q.pullback(&m1.mul(&m2)),
            q.pullback(&m1).pullback(&m2),
            "(q ∘ (MN)) = ((q ∘ M) ∘ N)"
        );
    }

    #[test]
    fn pullback_token_agrees_with_dense() {
        let (cb, basis) = setup();
        let f7 = PrimeField::new(7);
        let e7: Vec<Root> = cb.roots().e7_roots().collect();
        let mut rng = Lcg::new(31);
        for _ in 0..12 {
            let q = &basis.generators()[rng.below(133) as usize].1;
            let qf = q.map_ring(&f7, |v| f7.from_i64(i64::try_from(v.clone()).unwrap()));
            let gamma = e7[rng.below(126) as usize];
            let xi = f7.from_i64(rng.below(6) as i64 + 1);
            let tok = Token::RootUnipotent { gamma, xi };
            let m = crate::rep56::root_unipotent(&cb, &f7, &gamma, &xi).unwrap();
            assert_eq!(qf.pullback_token(&cb, &tok), qf.pullback(&m));
        }
    }

    #[test]
    fn mixed_case_pullback_formula() {
        // (α,γ) = 1 case: f_{ρ,σ}(gx) = f_{ρ,σ}(x) + ξ N_{γ,ρ-γ} f_{ρ-γ,σ}(x)
        let (cb, _) = setup();
        let rs = cb.roots();
        let e7: Vec<Root> = rs.e7_roots().collect();
        let mut checked = 0;
        'outer: for alpha in &e7 {
            for gamma in &e7 {
                if alpha.pairing(gamma) != 1 {
                    continue;
                }
                for xi in [1i64, -1, 2] {
                    check_square_identity(
                        &cb,
                        gamma,
                        xi,
                        alpha,
                        &Token::RootUnipotent {
                            gamma: *gamma,
                            xi: IntRing.from_i64(xi),
                        },
                    )
                    .unwrap();
                }
                checked += 1;
                if checked > 30 {
                    break 'outer;
                }
            }
        }
        assert!(checked > 30);
    }

    #[test]
    fn full_invariance_for_a_few_roots() {
        let (cb, basis) = setup();
        let reducer = Reducer::new(&cb, &basis, RatField);
        let e7: Vec<Root> = cb.roots().e7_roots().collect();
        for gamma in [&e7[0], &e7[63], &e7[125]] {
            for xi in [1, -1, 2, 3] {
                verify_invariance(&cb, &basis, &reducer, gamma, xi).unwrap();
            }
        }
    }

    #[test]
    fn orbit_vanishing_on_random_words() {
        let (cb, basis) = setup();
        let f5 = PrimeField::new(5);
        for seed in 0..10u64 {
            let word = crate::rep56::random_word(&cb, &f5, seed, 12);
            let lam = (seed % 56) as u8 + 1;
            let mut v = alloc::vec![f5.zero(); DIM];
            v[lam as usize - 1] = f5.one();
            let gv = crate::rep56::apply_word(&cb, &f5, &word, &v).unwrap();
            for (name, q) in basis.generators() {
                let qf = q.map_ring(&f5, |x| f5.from_i64(i64::try_from(x.clone()).unwrap()));
                assert!(
                    f5.is_zero(&qf.eval(&gv)),
                    "{name} must vanish on the highest weight orbit"
                );
            }
        }
    }
}
