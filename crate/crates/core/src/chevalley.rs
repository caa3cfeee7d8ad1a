//! Structure constants of the E8 Chevalley basis and Lie bracket
//! evaluation in the 5-graded algebra.
//!
//! Signs are fixed by a bimultiplicative asymmetry form on the root
//! lattice, seeded on the fundamental basis in lexicographic order
//! (`ε(α_i, α_i) = -1`, `ε(α_i, α_j) = (-1)^{(α_i, α_j)}` for `i < j`,
//! `ε(α_j, α_i) = 1`), then twisted by root positivity so the Chevalley
//! symmetries `N_{αβ} = N_{-β,-α} = -N_{-α,-β}` hold on the nose.  The
//! construction asserts all identity families exhaustively; a failure is a
//! bug, not an input error.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::roots::{Root, RootSystem};

/// An element of the E8 Lie algebra over the integers: a sparse combination
/// of root vectors plus a Cartan part over the fundamental coroots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LieElement {
    /// root index (into [`RootSystem::roots`]) → coefficient; no zeros.
    pub root_part: BTreeMap<u16, i64>,
    /// Coefficients over the fundamental coroots `H_{α1}..H_{α8}`.
    pub cartan_part: [i64; 8],
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(root_idx: u16) -> Self {
        let mut e = Self::default();
        e.root_part.insert(root_idx, 1);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.root_part.is_empty() && self.cartan_part == [0; 8]
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        let mut out = self.clone();
        for (&k, &v) in &other.root_part {
            let entry = out.root_part.entry(k).or_insert(0);
            *entry += v;
            if *entry == 0 {
                out.root_part.remove(&k);
            }
        }
        for i in 0..8 {
            out.cartan_part[i] += other.cartan_part[i];
        }
        out
    }

    pub fn scale(&self, c: i64) -> LieElement {
        if c == 0 {
            return LieElement::zero();
        }
        let mut out = self.clone();
        for v in out.root_part.values_mut() {
            *v *= c;
        }
        for v in &mut out.cartan_part {
            *v *= c;
        }
        out
    }
}

/// The root system together with a consistent sign table `N_{αβ}`.
pub struct ChevalleyBasis {
    rs: RootSystem,
    /// Dense 240×240 table; 0 where `α+β` is not a root.
    n: Vec<i8>,
}

impl ChevalleyBasis {
    /// Builds the table and verifies every contracted identity family:
    /// antisymmetry, the ±-symmetries under negation, the triple-sum
    /// symmetry, and the cocycle identity.  Panics on any violation.
    pub fn new() -> Self {
        let rs = RootSystem::new();
        let n_roots = rs.roots().len();

        // Seed matrix of the asymmetry form on the fundamental basis.
        let mut seed = [[1i32; 8]; 8];
        for (i, row) in seed.iter_mut().enumerate() {
            for (j, s) in row.iter_mut().enumerate() {
                use crate::roots::CARTAN_E8;
                if i == j {
                    *s = -1;
                } else if i < j && CARTAN_E8[i][j] % 2 != 0 {
                    *s = -1;
                }
            }
        }
        let eps = |a: &Root, b: &Root| -> i32 {
            let mut parity = 0u32;
            for i in 0..8 {
                for j in 0..8 {
                    if seed[i][j] < 0 {
                        parity ^= (a.0[i] * b.0[j]) as u32 & 1;
                    }
                }
            }
            if parity & 1 == 1 {
                -1
            } else {
                1
            }
        };
        let sgn = |r: &Root| -> i32 {
            if r.height() > 0 {
                1
            } else {
                -1
            }
        };

        let mut n = alloc::vec![0i8; n_roots * n_roots];
        for (ia, a) in rs.roots().iter().enumerate() {
            for (ib, b) in rs.roots().iter().enumerate() {
                let sum = a.add(b);
                if rs.is_root(&sum) {
                    let v = sgn(a) * sgn(b) * sgn(&sum) * eps(a, b);
                    n[ia * n_roots + ib] = v as i8;
                }
            }
        }

        let cb = ChevalleyBasis { rs, n };
        cb.verify_consistency();
        cb
    }

    fn verify_consistency(&self) {
        let rs = &self.rs;
        let roots = rs.roots();
        for (ia, a) in roots.iter().enumerate() {
            for (ib, b) in roots.iter().enumerate() {
                let nab = self.n_idx(ia as u16, ib as u16);
                let sum = a.add(b);
                if !rs.is_root(&sum) {
                    assert_eq!(nab, 0);
                    continue;
                }
                assert!(nab == 1 || nab == -1, "simply laced: |N| = 1");
                let nba = self.n_idx(ib as u16, ia as u16);
                assert_eq!(nab, -nba, "N_ab = -N_ba");
                let na = rs.root_index(&a.negate()).unwrap();
                let nb = rs.root_index(&b.negate()).unwrap();
                assert_eq!(nab, self.n_idx(nb, na), "N_ab = N_neg_b_neg_a");
                assert_eq!(nab, -self.n_idx(na, nb), "N_ab = neg N_neg_a_neg_b");
                // triple symmetry with c = -(a+b)
                let ic = rs.root_index(&sum.negate()).unwrap();
                assert_eq!(nab, self.n_idx(ib as u16, ic), "N_ab = N_bc");
                assert_eq!(nab, self.n_idx(ic, ia as u16), "N_ab = N_ca");
            }
        }
        // Cocycle identity over all root triples with every factor defined:
        // N_bc N_{a,b+c} = N_{a+b,c} N_ab.
        for (ia, a) in roots.iter().enumerate() {
            for (ib, b) in roots.iter().enumerate() {
                let ab = a.add(b);
                if !rs.is_root(&ab) {
                    continue;
                }
                let iab = rs.root_index(&ab).unwrap();
                for (ic, c) in roots.iter().enumerate() {
                    let bc = b.add(c);
                    if !rs.is_root(&bc) || !rs.is_root(&ab.add(c)) {
                        continue;
                    }
                    let ibc = rs.root_index(&bc).unwrap();
                    let lhs = self.n_idx(ib as u16, ic as u16) as i32
                        * self.n_idx(ia as u16, ibc) as i32;
                    let rhs =
                        self.n_idx(iab, ic as u16) as i32 * self.n_idx(ia as u16, ib as u16) as i32;
                    assert_eq!(lhs, rhs, "cocycle identity");
                }
            }
        }
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    fn n_idx(&self, a: u16, b: u16) -> i8 {
        self.n[a as usize * self.rs.roots().len() + b as usize]
    }

    /// `N_{αβ}`, or 0 when `α + β` is not a root.
    pub fn n(&self, a: &Root, b: &Root) -> i64 {
        let (Some(ia), Some(ib)) = (self.rs.root_index(a), self.rs.root_index(b)) else {
            return 0;
        };
        self.n_idx(ia, ib) as i64
    }

    /// Cartan integer `⟨β, α∨⟩`, in `{0, ±1, ±2}` (simply laced the pairing
    /// is symmetric and agrees with the lattice form).
    pub fn cartan_pairing(&self, beta: &Root, alpha: &Root) -> i64 {
        beta.pairing(alpha) as i64
    }

    /// Coroot `H_α` expanded over the fundamental coroots; simply-laced, so
    /// coroots add like roots.
    pub fn coroot(&self, alpha: &Root) -> [i64; 8] {
        let mut h = [0i64; 8];
        for (i, c) in alpha.0.iter().enumerate() {
            h[i] = *c as i64;
        }
        h
    }

    /// `⟨β, H⟩` for a Cartan element `H` over the fundamental coroots.
    pub fn pair_with_cartan(&self, beta: &Root, h: &[i64; 8]) -> i64 {
        let mut s = 0i64;
        for (i, &hi) in h.iter().enumerate() {
            let mut ei = [0i32; 8];
            ei[i] = 1;
            s += hi * beta.pairing(&Root(ei)) as i64;
        }
        s
    }

    /// Lie bracket in the Chevalley basis:
    /// `[e_α, e_β] = N_{αβ} e_{α+β}`, `[e_α, e_{-α}] = H_α`,
    /// `[H, e_β] = ⟨β, H⟩ e_β`.
    pub fn bracket(&self, x: &LieElement, y: &LieElement) -> LieElement {
        let rs = &self.rs;
        let mut out = LieElement::zero();

        // root × root
        for (&ia, &ca) in &x.root_part {
            let a = rs.roots()[ia as usize];
            for (&ib, &cb) in &y.root_part {
                let b = rs.roots()[ib as usize];
                let c = ca * cb;
                let sum = a.add(&b);
                if sum == Root([0; 8]) {
                    let h = self.coroot(&a);
                    for i in 0..8 {
                        out.cartan_part[i] += c * h[i];
                    }
                } else if let Some(isum) = rs.root_index(&sum) {
                    let v = c * self.n_idx(ia, ib) as i64;
                    if v != 0 {
                        let entry = out.root_part.entry(isum).or_insert(0);
                        *entry += v;
                        if *entry == 0 {
                            out.root_part.remove(&isum);
                        }
                    }
                }
            }
        }
        // cartan × root and root × cartan
        for (&ib, &cb) in &y.root_part {
            let b = rs.roots()[ib as usize];
            let p = self.pair_with_cartan(&b, &x.cartan_part);
            let v = cb * p;
            if v != 0 {
                let entry = out.root_part.entry(ib).or_insert(0);
                *entry += v;
                if *entry == 0 {
                    out.root_part.remove(&ib);
                }
            }
        }
        for (&ia, &ca) in &x.root_part {
            let a = rs.roots()[ia as usize];
            let p = self.pair_with_cartan(&a, &y.cartan_part);
            let v = -ca * p;
            if v != 0 {
                let entry = out.root_part.entry(ia).or_insert(0);
                *entry += v;
                if *entry == 0 {
                    out.root_part.remove(&ia);
                }
            }
        }
        out
    }

    /// Projection onto the grading component of `α8`-height `k`; `k = 0`
    /// keeps the Cartan part.
    pub fn height_component(&self, x: &LieElement, k: i32) -> LieElement {
        assert!((-2..=2).contains(&k));
        let mut out = LieElement::zero();
        for (&i, &c) in &x.root_part {
            if self.rs.roots()[i as usize].alpha8_height() == k {
                out.root_part.insert(i, c);
            }
        }
        if k == 0 {
            out.cartan_part = x.cartan_part;
        }
        out
    }
}

impl Default for ChevalleyBasis {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb() -> ChevalleyBasis {
        ChevalleyBasis::new()
    }

    #[test]
    fn antisymmetry_of_bracket() {
        let cb = cb();
        let e0 = LieElement::basis(0);
        assert!(cb.bracket(&e0, &e0).is_zero());
    }

    #[test]
    fn delta_coroot_normalization() {
        let cb = cb();
        let rs = cb.roots();
        let delta = rs.delta();
        let id = rs.root_index(&delta).unwrap();
        let ind = rs.root_index(&delta.negate()).unwrap();
        let h = cb.bracket(&LieElement::basis(id), &LieElement::basis(ind));
        assert!(h.root_part.is_empty());
        assert_eq!(h.cartan_part, cb.coroot(&delta));
        assert_eq!(cb.pair_with_cartan(&delta, &h.cartan_part), 2);
    }

    #[test]
    fn microweight_constants_are_units() {
        let cb = cb();
        let rs = cb.roots();
        for gamma in rs.e7_roots().collect::<alloc::vec::Vec<_>>() {
            for w in rs.weights() {
                let diff = w.root.sub(&gamma);
                if rs.weight_of_root(&diff).is_some() {
                    let n = cb.n(&gamma, &diff);
                    assert!(n == 1 || n == -1);
                }
            }
        }
    }

    #[test]
    fn grading_respected_by_bracket() {
        let cb = cb();
        let rs = cb.roots();
        // [g_i, g_j] ⊆ g_{i+j}, zero when |i+j| > 2; checked on all basis pairs
        for (ia, a) in rs.roots().iter().enumerate() {
            for (ib, b) in rs.roots().iter().enumerate() {
                let k = a.alpha8_height() + b.alpha8_height();
                let br = cb.bracket(
                    &LieElement::basis(ia as u16),
                    &LieElement::basis(ib as u16),
                );
                if k.abs() > 2 {
                    assert!(br.is_zero());
                } else {
                    assert_eq!(cb.height_component(&br, k.clamp(-2, 2)), br);
                }
            }
        }
    }

    #[test]
    fn grading_decomposition_sums_back() {
        let cb = cb();
        let rs = cb.roots();
        let delta_idx = rs.root_index(&rs.delta()).unwrap();
        let mut x = LieElement::basis(delta_idx);
        x.cartan_part = [1, -2, 3, 0, 0, 1, 0, 5];
        x.root_part.insert(100, 7);
        x.root_part.insert(230, -3);
        let mut sum = LieElement::zero();
        for k in -2..=2 {
            sum = sum.add(&cb.height_component(&x, k));
        }
        assert_eq!(sum, x);
        assert_eq!(
            cb.height_component(&LieElement::basis(delta_idx), 2),
            LieElement::basis(delta_idx)
        );
    }

    #[test]
    fn jacobi_on_random_basis_triples() {
        let cb = cb();
        // deterministic 64-bit linear congruential generator
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as usize
        };
        for _ in 0..1000 {
            let x = LieElement::basis((next() % 240) as u16);
            let y = LieElement::basis((next() % 240) as u16);
            let z = LieElement::basis((next() % 240) as u16);
            let j = cb
                .bracket(&cb.bracket(&x, &y), &z)
                .add(&cb.bracket(&cb.bracket(&y, &z), &x))
                .add(&cb.bracket(&cb.bracket(&z, &x), &y));
            assert!(j.is_zero(), "Jacobi identity");
        }
    }
}
