//! The invariant symplectic form `h` and four-linear form `f` of the
//! minimal module, built from Lie brackets in the graded E8 algebra, with
//! evaluation and vector orbit classification.
//!
//! Both forms come from one source of truth, the structure table:
//! `h(e_λ, e_μ) e_δ = [e_λ, e_μ]` for `λ + μ = δ`, and `c(λ,μ,ν,ρ)` is the
//! `e_δ`-coefficient of `[[[[e_{-δ}, e_λ], e_μ], e_ν], e_ρ]`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::chevalley::{ChevalleyBasis, LieElement};
use crate::matrix::Matrix;
use crate::rep56::{Token, DIM};
use crate::ring::{Field, Ring};
use crate::roots::WeightIndex;

/// The unimodular symplectic form: `h(e_λ, e_μ) = N_{λμ}` when
/// `λ + μ = δ`, zero otherwise.
pub struct SymplecticForm {
    /// Dense 56×56 coefficient matrix (entries in `{0, ±1}`).
    mat: Vec<i8>,
}

impl SymplecticForm {
    pub fn coeff(&self, a: WeightIndex, b: WeightIndex) -> i64 {
        self.mat[(a as usize - 1) * DIM + (b as usize - 1)] as i64
    }

    /// The nonzero coefficients on ordered pairs `(a, b)` with `a < b`.
    pub fn pairs(&self) -> Vec<(WeightIndex, WeightIndex, i64)> {
        let mut out = Vec::with_capacity(28);
        for a in 1..=DIM as u8 {
            for b in (a + 1)..=DIM as u8 {
                let c = self.coeff(a, b);
                if c != 0 {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn matrix<R: Ring>(&self, ring: &R) -> Matrix<R> {
        let mut m = Matrix::zero(ring.clone(), DIM, DIM);
        for i in 0..DIM {
            for j in 0..DIM {
                let c = self.mat[i * DIM + j];
                if c != 0 {
                    m.set(i, j, ring.from_i64(c as i64));
                }
            }
        }
        m
    }

    pub fn eval<R: Ring>(&self, ring: &R, u: &[R::Elem], v: &[R::Elem]) -> R::Elem {
        assert_eq!(u.len(), DIM);
        assert_eq!(v.len(), DIM);
        let mut acc = ring.zero();
        for (a, b, c) in self.pairs() {
            let (ia, ib) = (a as usize - 1, b as usize - 1);
            let cc = ring.from_i64(c);
            // c·(u_a v_b - u_b v_a)
            let t = ring.sub(&ring.mul(&u[ia], &v[ib]), &ring.mul(&u[ib], &v[ia]));
            ring.mul_add_assign(&mut acc, &cc, &t);
        }
        acc
    }
}

/// Builds `h` from the `g₁ × g₁ → g₂` bracket coefficients.
pub fn build_h(cb: &ChevalleyBasis) -> SymplecticForm {
    let rs = cb.roots();
    let mut mat = alloc::vec![0i8; DIM * DIM];
    for a in rs.weights() {
        let b = rs.bar(a.ordinal);
        let n = cb.n(&a.root, &rs.weight_root(b));
        debug_assert!(n == 1 || n == -1);
        mat[(a.ordinal as usize - 1) * DIM + (b as usize - 1)] = n as i8;
    }
    SymplecticForm { mat }
}

/// The four-linear form as a sparse table of coefficients `c(λ,μ,ν,ρ)`,
/// nonzero only when the four weight roots sum to `2δ`.
pub struct FourLinearForm {
    /// Sorted support: `(λ, μ, ν, ρ, c)`.
    entries: Vec<(u8, u8, u8, u8, i8)>,
    /// Dense index over `(λ, μ, ν)`: the unique closing weight `ρ`
    /// (0 when none) and the coefficient.
    rho: Vec<u8>,
    c3: Vec<i8>,
}

impl FourLinearForm {
    #[inline]
    fn idx3(a: u8, b: u8, c: u8) -> usize {
        ((a as usize - 1) * DIM + (b as usize - 1)) * DIM + (c as usize - 1)
    }

    /// `c(λ,μ,ν,ρ)`.
    pub fn coeff(&self, l: u8, m: u8, n: u8, r: u8) -> i64 {
        let i = Self::idx3(l, m, n);
        if self.rho[i] == r {
            self.c3[i] as i64
        } else {
            0
        }
    }

    /// For fixed `(λ,μ,ν)`, the unique `(ρ, c)` with `c ≠ 0`, if any.
    pub fn closing(&self, l: u8, m: u8, n: u8) -> Option<(u8, i64)> {
        let i = Self::idx3(l, m, n);
        if self.rho[i] == 0 {
            None
        } else {
            Some((self.rho[i], self.c3[i] as i64))
        }
    }

    pub fn entries(&self) -> &[(u8, u8, u8, u8, i8)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn eval<R: Ring>(
        &self,
        ring: &R,
        u: &[R::Elem],
        v: &[R::Elem],
        w: &[R::Elem],
        z: &[R::Elem],
    ) -> R::Elem {
        assert!(u.len() == DIM && v.len() == DIM && w.len() == DIM && z.len() == DIM);
        let mut acc = ring.zero();
        for &(a, b, c, d, coeff) in &self.entries {
            let ua = &u[a as usize - 1];
            if ring.is_zero(ua) {
                continue;
            }
            let vb = &v[b as usize - 1];
            if ring.is_zero(vb) {
                continue;
            }
            let wc = &w[c as usize - 1];
            if ring.is_zero(wc) {
                continue;
            }
            let zd = &z[d as usize - 1];
            if ring.is_zero(zd) {
                continue;
            }
            let t = ring.mul(&ring.mul(ua, vb), &ring.mul(wc, zd));
            ring.mul_add_assign(&mut acc, &ring.from_i64(coeff as i64), &t);
        }
        acc
    }

    /// The quartic `Q(v) = f(v, v, v, v)`.
    pub fn quartic<R: Ring>(&self, ring: &R, v: &[R::Elem]) -> R::Elem {
        self.eval(ring, v, v, v, v)
    }
}

/// The `e_δ`-coefficient of `[[[[e_{-δ}, e_λ], e_μ], e_ν], e_ρ]`, computed
/// directly from brackets.
pub fn coeff_c(cb: &ChevalleyBasis, l: u8, m: u8, n: u8, r: u8) -> i64 {
    let rs = cb.roots();
    let neg_delta = rs.root_index(&rs.delta().negate()).unwrap();
    let widx = |o: u8| rs.root_index(&rs.weight_root(o)).unwrap();
    let mut x = LieElement::basis(neg_delta);
    for o in [l, m, n, r] {
        x = cb.bracket(&x, &LieElement::basis(widx(o)));
        if x.is_zero() {
            return 0;
        }
    }
    let delta_idx = rs.root_index(&rs.delta()).unwrap();
    debug_assert!(x.root_part.len() <= 1 && x.cartan_part == [0; 8]);
    x.root_part.get(&delta_idx).copied().unwrap_or(0)
}

/// Builds the complete sparse table of the four-linear form.
pub fn build_f(cb: &ChevalleyBasis) -> FourLinearForm {
    let rs = cb.roots();
    let neg_delta = rs.root_index(&rs.delta().negate()).unwrap();
    let delta_idx = rs.root_index(&rs.delta()).unwrap();
    let widx: Vec<u16> = (1..=DIM as u8)
        .map(|o| rs.root_index(&rs.weight_root(o)).unwrap())
        .collect();

    let mut entries = Vec::new();
    let mut rho = alloc::vec![0u8; DIM * DIM * DIM];
    let mut c3 = alloc::vec![0i8; DIM * DIM * DIM];

    for l in 1..=DIM as u8 {
        let s1 = cb.bracket(
            &LieElement::basis(neg_delta),
            &LieElement::basis(widx[l as usize - 1]),
        );
        for m in 1..=DIM as u8 {
            let s2 = cb.bracket(&s1, &LieElement::basis(widx[m as usize - 1]));
            if s2.is_zero() {
                continue;
            }
            for n in 1..=DIM as u8 {
                let s3 = cb.bracket(&s2, &LieElement::basis(widx[n as usize - 1]));
                if s3.is_zero() {
                    continue;
                }
                for r in 1..=DIM as u8 {
                    let s4 = cb.bracket(&s3, &LieElement::basis(widx[r as usize - 1]));
                    if let Some(&c) = s4.root_part.get(&delta_idx) {
                        if c != 0 {
                            let i = FourLinearForm::idx3(l, m, n);
                            debug_assert_eq!(rho[i], 0, "ρ is unique given (λ,μ,ν)");
                            rho[i] = r;
                            c3[i] = i8::try_from(c).expect("coefficients lie in {±1, ±2}");
                            entries.push((l, m, n, r, c3[i]));
                        }
                    }
                }
            }
        }
    }
    entries.sort_unstable();
    FourLinearForm { entries, rho, c3 }
}

/// A pulled-back coefficient table of `f`, keyed by ordered weight
/// quadruples.
pub type FTable<E> = BTreeMap<(u8, u8, u8, u8), E>;

/// The table of `f` with coefficients mapped into a ring.
pub fn f_table_in_ring<R: Ring>(f4: &FourLinearForm, ring: &R) -> FTable<R::Elem> {
    f4.entries
        .iter()
        .map(|&(a, b, c, d, coeff)| ((a, b, c, d), ring.from_i64(coeff as i64)))
        .collect()
}

fn table_add<R: Ring>(ring: &R, out: &mut FTable<R::Elem>, key: (u8, u8, u8, u8), val: R::Elem) {
    if ring.is_zero(&val) {
        return;
    }
    match out.get_mut(&key) {
        Some(slot) => {
            let s = ring.add(slot, &val);
            if ring.is_zero(&s) {
                out.remove(&key);
            } else {
                *slot = s;
            }
        }
        None => {
            out.insert(key, val);
        }
    }
}

/// Pulls back a coefficient table along one generator token:
/// `(f ∘ g)(x) = f(g x)`.  Torus tokens scale entries; a root unipotent
/// distributes each entry over the 2⁴ choices of identity-or-nilpotent per
/// slot; a Weyl element expands into its three unipotent factors.
pub fn pullback_f_token<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    table: &FTable<R::Elem>,
    token: &Token<R::Elem>,
) -> FTable<R::Elem> {
    let rs = cb.roots();
    match token {
        Token::TorusWeight { eta } => {
            let exps: Vec<i64> = rs
                .weights()
                .iter()
                .map(|w| crate::rep56::torus_exponent(&w.root))
                .collect();
            table
                .iter()
                .map(|(&(a, b, c, d), v)| {
                    let e = exps[a as usize - 1]
                        + exps[b as usize - 1]
                        + exps[c as usize - 1]
                        + exps[d as usize - 1];
                    ((a, b, c, d), ring.mul(v, &ring.pow_i64(eta, e)))
                })
                .collect()
        }
        Token::RootUnipotent { gamma, xi } => {
            // In x_γ(ξ), column i feeds row λ = i + γ with coefficient
            // ξ N_{γ,i}; so the table entry at row index λ emits to column
            // index i = λ - γ with that coefficient.
            let mut down: [Option<(u8, i64)>; DIM] = [None; DIM];
            for w in rs.weights() {
                let dn = w.root.sub(gamma);
                if let Some(i) = rs.weight_of_root(&dn) {
                    down[w.ordinal as usize - 1] = Some((i, cb.n(gamma, &rs.weight_root(i))));
                }
            }
            let mut out: FTable<R::Elem> = BTreeMap::new();
            for (&(a, b, c, d), v) in table {
                let idx = [a, b, c, d];
                for mask in 0u8..16 {
                    let mut key = idx;
                    let mut factor_n = 1i64;
                    let mut xi_pow = 0u32;
                    let mut ok = true;
                    for (slot, k) in key.iter_mut().enumerate() {
                        if mask >> slot & 1 == 1 {
                            match down[*k as usize - 1] {
                                Some((i, n)) => {
                                    *k = i;
                                    factor_n *= n;
                                    xi_pow += 1;
                                }
                                None => {
                                    ok = false;
                                    break;
                                }
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let mut val = ring.mul(v, &ring.from_i64(factor_n));
                    for _ in 0..xi_pow {
                        val = ring.mul(&val, xi);
                    }
                    table_add(ring, &mut out, (key[0], key[1], key[2], key[3]), val);
                }
            }
            out
        }
        Token::WeylElem { alpha, eps } => {
            let inv = ring.inv(eps).expect("Weyl parameter is a unit");
            let t1 = Token::RootUnipotent {
                gamma: *alpha,
                xi: eps.clone(),
            };
            let t2 = Token::RootUnipotent {
                gamma: alpha.negate(),
                xi: ring.neg(&inv),
            };
            let s = pullback_f_token(cb, ring, table, &t1);
            let s = pullback_f_token(cb, ring, &s, &t2);
            pullback_f_token(cb, ring, &s, &t1)
        }
    }
}

/// Pulls back the table along a whole word, left factor first.
pub fn pullback_f_word<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    f4: &FourLinearForm,
    tokens: &[Token<R::Elem>],
) -> FTable<R::Elem> {
    let mut t = f_table_in_ring(f4, ring);
    for tok in tokens {
        t = pullback_f_token(cb, ring, &t, tok);
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitClass {
    Zero,
    Singular,
    Brilliant,
    Luminous,
    Dark,
}

impl fmt::Display for OrbitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrbitClass::Zero => "zero",
            OrbitClass::Singular => "singular",
            OrbitClass::Brilliant => "brilliant",
            OrbitClass::Luminous => "luminous",
            OrbitClass::Dark => "dark",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BadCharacteristic(pub u64);

impl fmt::Display for BadCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "orbit classification needs characteristic not in {{2, 3}}, got {}",
            self.0
        )
    }
}

/// Classifies a vector by the vanishing pattern of the 4-form, from the
/// most special applicable class: `F(u,u,·,·) ≡ 0` (singular), then
/// `F(u,u,u,·) ≡ 0` (brilliant), then `F(u,u,u,u) = 0` (luminous),
/// otherwise dark.  Characteristics 2 and 3 are rejected.
pub fn orbit_class<R: Field>(
    f4: &FourLinearForm,
    ring: &R,
    v: &[R::Elem],
) -> Result<OrbitClass, BadCharacteristic> {
    let ch = ring.kind().characteristic();
    if ch == 2 || ch == 3 {
        return Err(BadCharacteristic(ch));
    }
    assert_eq!(v.len(), DIM);
    if v.iter().all(|x| ring.is_zero(x)) {
        return Ok(OrbitClass::Zero);
    }
    // W2[ν][ρ] = Σ c(λ,μ,ν,ρ) v_λ v_μ: probes F(u,u,·,·) on all basis pairs
    let mut w2 = alloc::vec![ring.zero(); DIM * DIM];
    for &(a, b, c, d, coeff) in f4.entries() {
        let va = &v[a as usize - 1];
        if ring.is_zero(va) {
            continue;
        }
        let vb = &v[b as usize - 1];
        if ring.is_zero(vb) {
            continue;
        }
        let t = ring.mul(&ring.mul(va, vb), &ring.from_i64(coeff as i64));
        let slot = &mut w2[(c as usize - 1) * DIM + (d as usize - 1)];
        *slot = ring.add(slot, &t);
    }
    if w2.iter().all(|x| ring.is_zero(x)) {
        return Ok(OrbitClass::Singular);
    }
    let mut w3 = alloc::vec![ring.zero(); DIM];
    for n in 0..DIM {
        if ring.is_zero(&v[n]) {
            continue;
        }
        for r in 0..DIM {
            let x = &w2[n * DIM + r];
            if !ring.is_zero(x) {
                let t = ring.mul(x, &v[n]);
                w3[r] = ring.add(&w3[r], &t);
            }
        }
    }
    if w3.iter().all(|x| ring.is_zero(x)) {
        return Ok(OrbitClass::Brilliant);
    }
    let mut w4 = ring.zero();
    for r in 0..DIM {
        if !ring.is_zero(&w3[r]) && !ring.is_zero(&v[r]) {
            ring.mul_add_assign(&mut w4, &w3[r], &v[r]);
        }
    }
    if ring.is_zero(&w4) {
        Ok(OrbitClass::Luminous)
    } else {
        Ok(OrbitClass::Dark)
    }
}
