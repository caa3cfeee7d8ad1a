//! Exact 56×56 matrices for the generators of the extended Chevalley group
//! acting on the minimal module, plus reproducible random words in those
//! generators.
//!
//! The action of a root unipotent is the one of the Matsumoto lemma:
//! `(x_γ(ξ)v)_λ = v_λ + N_{γ,λ-γ} ξ v_{λ-γ}` whenever `λ - γ` is again a
//! weight, and the identity elsewhere.  The weight element `torus_weight(η)`
//! is diagonal with entry `η^{2 - c7(λ)}` at the weight `λ`, where `c7` is
//! the `α7`-coefficient; this is the paper convention `h_{ϖ7}(η^{-1})`, so
//! that `h` scales by `η` and `f` by `η²` while `h_{ϖ7}(η)` itself is
//! recovered as `torus_weight(η^{-1})`.

use alloc::vec::Vec;
use core::fmt;

use crate::chevalley::ChevalleyBasis;
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::roots::Root;

pub const DIM: usize = 56;

#[derive(Clone, Debug, PartialEq)]
pub enum RepError {
    NotAnE7Root(Root),
    NotInvertible,
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::NotAnE7Root(r) => write!(f, "{:?} is not a root of E7", r),
            RepError::NotInvertible => write!(f, "parameter is not invertible in the ring"),
        }
    }
}

/// `x_γ(ξ)`: identity plus a square-zero nilpotent part supported on the
/// 12 entries `(λ, λ-γ)`, `λ ∈ Ω(γ)`.
pub fn root_unipotent<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    gamma: &Root,
    xi: &R::Elem,
) -> Result<Matrix<R>, RepError> {
    let rs = cb.roots();
    if !rs.is_e7_root(gamma) {
        return Err(RepError::NotAnE7Root(*gamma));
    }
    let mut m = Matrix::identity(ring.clone(), DIM);
    for w in rs.weights() {
        let diff = w.root.sub(gamma);
        if let Some(src) = rs.weight_of_root(&diff) {
            let n = ring.from_i64(cb.n(gamma, &diff));
            m.set(w.ordinal as usize - 1, src as usize - 1, ring.mul(&n, xi));
        }
    }
    Ok(m)
}

/// Exponent of `η` at the weight `λ` in `torus_weight(η)`.
pub fn torus_exponent(lambda_root: &Root) -> i64 {
    2 - lambda_root.alpha7_coeff() as i64
}

/// The weight element of the extended torus, `diag(η^{2 - c7(λ)})`.
/// Exponent multiset `{-1×1, 0×27, 1×27, 2×1}`; determinant `η^{28}`.
pub fn torus_weight<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    eta: &R::Elem,
) -> Result<Matrix<R>, RepError> {
    if ring.inv(eta).is_none() {
        return Err(RepError::NotInvertible);
    }
    let mut m = Matrix::identity(ring.clone(), DIM);
    for w in cb.roots().weights() {
        let e = torus_exponent(&w.root);
        m.set(
            w.ordinal as usize - 1,
            w.ordinal as usize - 1,
            ring.pow_i64(eta, e),
        );
    }
    Ok(m)
}

/// `w_α(ε) = x_α(ε) x_{-α}(-ε^{-1}) x_α(ε)`, a monomial matrix.
pub fn weyl_element<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    alpha: &Root,
    eps: &R::Elem,
) -> Result<Matrix<R>, RepError> {
    let inv = ring.inv(eps).ok_or(RepError::NotInvertible)?;
    let a = root_unipotent(cb, ring, alpha, eps)?;
    let b = root_unipotent(cb, ring, &alpha.negate(), &ring.neg(&inv))?;
    Ok(a.mul(&b).mul(&a))
}

/// One generator token of a group word.
#[derive(Clone, Debug, PartialEq)]
pub enum Token<E> {
    RootUnipotent { gamma: Root, xi: E },
    TorusWeight { eta: E },
    WeylElem { alpha: Root, eps: E },
}

/// A word in the generators of the extended group, with parameters already
/// living in the active ring (torus and Weyl parameters are units by
/// construction).
#[derive(Clone, Debug, PartialEq)]
pub struct GroupWord<R: Ring> {
    pub tokens: Vec<Token<R::Elem>>,
}

impl<R: Ring> GroupWord<R> {
    pub fn empty() -> Self {
        GroupWord { tokens: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

/// Evaluates a word as the ordered product of its generator matrices.
pub fn evaluate_word<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    word: &GroupWord<R>,
) -> Result<Matrix<R>, RepError> {
    let mut m = Matrix::identity(ring.clone(), DIM);
    for tok in &word.tokens {
        let g = match tok {
            Token::RootUnipotent { gamma, xi } => root_unipotent(cb, ring, gamma, xi)?,
            Token::TorusWeight { eta } => torus_weight(cb, ring, eta)?,
            Token::WeylElem { alpha, eps } => weyl_element(cb, ring, alpha, eps)?,
        };
        m = m.mul(&g);
    }
    Ok(m)
}

/// Deterministic 64-bit linear congruential generator with Knuth's MMIX
/// constants (`a = 6364136223846793005`, `c = 1442695040888963407`); samples
/// are taken from the top 31 bits.  Used for all reproducible randomness.
#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.state >> 33) as u32
    }

    pub fn below(&mut self, n: u32) -> u32 {
        self.next_u32() % n
    }
}

/// Pool of unipotent parameters for random words.
const XI_POOL: [i64; 4] = [-2, -1, 1, 2];
/// Candidate unit parameters for torus and Weyl tokens; `-1` is a unit in
/// every ring, so the invertibility scan below always terminates.
const UNIT_POOL: [i64; 4] = [2, 3, 5, -1];

fn draw_unit<R: Ring>(ring: &R, rng: &mut Lcg) -> R::Elem {
    let start = rng.below(UNIT_POOL.len() as u32) as usize;
    for k in 0..UNIT_POOL.len() {
        let cand = ring.from_i64(UNIT_POOL[(start + k) % UNIT_POOL.len()]);
        if ring.inv(&cand).is_some() {
            return cand;
        }
    }
    unreachable!("-1 is always a unit")
}

/// Reproducible pseudo-random word: half root unipotents, a quarter Weyl
/// elements, a quarter torus weights.  The same seed yields the identical
/// word over the same ring.
pub fn random_word<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    seed: u64,
    length: usize,
) -> GroupWord<R> {
    let e7: Vec<Root> = cb.roots().e7_roots().collect();
    let mut rng = Lcg::new(seed);
    let mut tokens = Vec::with_capacity(length);
    for _ in 0..length {
        let kind = rng.below(4);
        let tok = match kind {
            0 | 1 => Token::RootUnipotent {
                gamma: e7[rng.below(126) as usize],
                xi: ring.from_i64(XI_POOL[rng.below(4) as usize]),
            },
            2 => Token::WeylElem {
                alpha: e7[rng.below(126) as usize],
                eps: draw_unit(ring, &mut rng),
            },
            _ => Token::TorusWeight {
                eta: draw_unit(ring, &mut rng),
            },
        };
        tokens.push(tok);
    }
    GroupWord { tokens }
}

/// Like [`random_word`] but using only root unipotents (elements of the
/// elementary subgroup).
pub fn random_elementary_word<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    seed: u64,
    length: usize,
) -> GroupWord<R> {
    let e7: Vec<Root> = cb.roots().e7_roots().collect();
    let mut rng = Lcg::new(seed);
    let tokens = (0..length)
        .map(|_| Token::RootUnipotent {
            gamma: e7[rng.below(126) as usize],
            xi: ring.from_i64(XI_POOL[rng.below(4) as usize]),
        })
        .collect();
    GroupWord { tokens }
}

/// Applies a word to a vector without materializing the product matrix.
pub fn apply_word<R: Ring>(
    cb: &ChevalleyBasis,
    ring: &R,
    word: &GroupWord<R>,
    v: &[R::Elem],
) -> Result<Vec<R::Elem>, RepError> {
    let mut v = v.to_vec();
    for tok in word.tokens.iter().rev() {
        let g = match tok {
            Token::RootUnipotent { gamma, xi } => root_unipotent(cb, ring, gamma, xi)?,
            Token::TorusWeight { eta } => torus_weight(cb, ring, eta)?,
            Token::WeylElem { alpha, eps } => weyl_element(cb, ring, alpha, eps)?,
        };
        v = g.mul_vec(&v);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{IntRing, PrimeField, RatField};

    fn cb() -> ChevalleyBasis {
        ChevalleyBasis::new()
    }

    fn some_e7_root(cb: &ChevalleyBasis) -> Root {
        cb.roots().e7_roots().next().unwrap()
    }

    #[test]
    fn unipotent_at_zero_is_identity() {
        let cb = cb();
        let g = root_unipotent(&cb, &IntRing, &some_e7_root(&cb), &IntRing.zero()).unwrap();
        assert!(g.is_identity());
    }

    #[test]
    fn unipotent_one_parameter_subgroup() {
        let cb = cb();
        let gamma = some_e7_root(&cb);
        let a = root_unipotent(&cb, &IntRing, &gamma, &IntRing.from_i64(3)).unwrap();
        let b = root_unipotent(&cb, &IntRing, &gamma, &IntRing.from_i64(4)).unwrap();
        let c = root_unipotent(&cb, &IntRing, &gamma, &IntRing.from_i64(7)).unwrap();
        assert_eq!(a.mul(&b), c);
    }

    #[test]
    fn unipotent_offdiagonal_support_is_12() {
        let cb = cb();
        for gamma in cb.roots().e7_roots().collect::<Vec<_>>() {
            let g = root_unipotent(&cb, &IntRing, &gamma, &IntRing.one()).unwrap();
            let mut nnz = 0;
            for i in 0..DIM {
                for j in 0..DIM {
                    if i != j && !IntRing.is_zero(g.get(i, j)) {
                        nnz += 1;
                    }
                }
            }
            assert_eq!(nnz, 12, "support matches the maximal square size");
            assert_eq!(g.det(), IntRing.one());
        }
    }

    #[test]
    fn unipotent_nilpotent_part_squares_to_zero() {
        let cb = cb();
        let gamma = some_e7_root(&cb);
        let g = root_unipotent(&cb, &IntRing, &gamma, &IntRing.from_i64(5)).unwrap();
        let id = Matrix::identity(IntRing, DIM);
        // (g - 1)^2 = 0  ⟺  g^2 = 2g - 1
        let g2 = g.mul(&g);
        for i in 0..DIM {
            for j in 0..DIM {
                let expect = IntRing.sub(
                    &IntRing.mul(&IntRing.from_i64(2), g.get(i, j)),
                    id.get(i, j),
                );
                assert_eq!(*g2.get(i, j), expect);
            }
        }
    }

    #[test]
    fn unipotent_rejects_non_e7() {
        let cb = cb();
        let delta = cb.roots().delta();
        assert!(root_unipotent(&cb, &IntRing, &delta, &IntRing.one()).is_err());
    }

    #[test]
    fn torus_identity_and_determinant() {
        let cb = cb();
        let q = RatField;
        assert!(torus_weight(&cb, &q, &q.one()).unwrap().is_identity());
        let two = q.from_i64(2);
        let t = torus_weight(&cb, &q, &two).unwrap();
        assert_eq!(t.det(), q.pow_i64(&two, 28), "det torus_weight(η) = η^28");
        // the weight element in the paper's parameterization is
        // torus_weight(η^{-1}); its determinant is η^{-28}
        let half = q.inv(&two).unwrap();
        let h = torus_weight(&cb, &q, &half).unwrap();
        assert_eq!(h.det(), q.pow_i64(&two, -28));
        assert!(torus_weight(&cb, &IntRing, &IntRing.from_i64(2)).is_err());
    }

    #[test]
    fn torus_exponent_multiset() {
        let cb = cb();
        let mut counts = alloc::collections::BTreeMap::new();
        for w in cb.roots().weights() {
            *counts.entry(torus_exponent(&w.root)).or_insert(0) += 1;
        }
        let expected: alloc::collections::BTreeMap<i64, i32> =
            [(-1, 1), (0, 27), (1, 27), (2, 1)].into_iter().collect();
        assert_eq!(counts, expected);
        // highest weight carries η^{-1}
        assert_eq!(torus_exponent(&cb.roots().weight_root(1)), -1);
    }

    #[test]
    fn weyl_element_is_monomial_of_order_dividing_four() {
        let cb = cb();
        let q = RatField;
        let alpha = some_e7_root(&cb);
        let w = weyl_element(&cb, &q, &alpha, &q.one()).unwrap();
        for i in 0..DIM {
            let row_nnz = (0..DIM).filter(|&j| !q.is_zero(w.get(i, j))).count();
            let col_nnz = (0..DIM).filter(|&j| !q.is_zero(w.get(j, i))).count();
            assert_eq!((row_nnz, col_nnz), (1, 1), "monomial matrix");
        }
        let w2 = w.mul(&w);
        assert!(w2.mul(&w2).is_identity(), "w_α(1)^4 = 1");
    }

    #[test]
    fn weyl_conjugation_reflects_roots() {
        let cb = cb();
        let q = RatField;
        let e7: Vec<Root> = cb.roots().e7_roots().collect();
        let alpha = e7[5];
        let w = weyl_element(&cb, &q, &alpha, &q.one()).unwrap();
        let winv = w.inverse().unwrap();
        for &beta in [&e7[0], &e7[17], &e7[80]].iter() {
            let x = root_unipotent(&cb, &q, &beta, &q.one()).unwrap();
            let conj = w.mul(&x).mul(&winv);
            // s_α(β) = β - (β,α)α
            let p = beta.pairing(&alpha);
            let mut refl = *beta;
            for _ in 0..p.abs() {
                refl = if p > 0 {
                    refl.sub(&alpha)
                } else {
                    refl.add(&alpha)
                };
            }
            let plus = root_unipotent(&cb, &q, &refl, &q.one()).unwrap();
            let minus = root_unipotent(&cb, &q, &refl, &q.from_i64(-1)).unwrap();
            assert!(
                conj == plus || conj == minus,
                "conjugation sends a root subgroup to the reflected one"
            );
        }
    }

    #[test]
    fn empty_and_cancelling_words() {
        let cb = cb();
        let ring = IntRing;
        assert!(evaluate_word(&cb, &ring, &GroupWord::empty())
            .unwrap()
            .is_identity());
        let gamma = some_e7_root(&cb);
        let word = GroupWord {
            tokens: alloc::vec![
                Token::RootUnipotent {
                    gamma,
                    xi: ring.one()
                },
                Token::RootUnipotent {
                    gamma,
                    xi: ring.from_i64(-1)
                },
            ],
        };
        assert!(evaluate_word(&cb, &ring, &word).unwrap().is_identity());
    }

    #[test]
    fn random_words_are_deterministic_and_invertible() {
        let cb = cb();
        let f5 = PrimeField::new(5);
        let w1 = random_word(&cb, &f5, 42, 50);
        let w2 = random_word(&cb, &f5, 42, 50);
        assert_eq!(w1, w2, "same seed, same word");
        assert_ne!(w1, random_word(&cb, &f5, 43, 50));
        assert!(random_word(&cb, &f5, 7, 0).is_empty());
        let m = evaluate_word(&cb, &f5, &w1).unwrap();
        assert!(
            !f5.is_zero(&m.det()),
            "word evaluates to an invertible matrix"
        );
    }

    #[test]
    fn word_determinants_come_from_torus_factors() {
        let cb = cb();
        let q = RatField;
        let word = random_word(&cb, &q, 2024, 24);
        let m = evaluate_word(&cb, &q, &word).unwrap();
        let mut expected = q.one();
        for tok in &word.tokens {
            if let Token::TorusWeight { eta } = tok {
                expected = q.mul(&expected, &q.pow_i64(eta, 28));
            }
        }
        assert_eq!(m.det(), expected);
    }

    #[test]
    fn microweight_commutator_formula() {
        let cb = cb();
        let rs = cb.roots();
        let ring = RatField;
        let e7: Vec<Root> = rs.e7_roots().collect();
        let mut checked_sum = 0;
        let mut checked_commuting = 0;
        'outer: for (i, &g1) in e7.iter().enumerate() {
            for &g2 in e7.iter().skip(i + 1) {
                let xi = ring.from_i64(2);
                let zeta = ring.from_i64(3);
                let a = root_unipotent(&cb, &ring, &g1, &xi).unwrap();
                let b = root_unipotent(&cb, &ring, &g2, &zeta).unwrap();
                let comm = a
                    .mul(&b)
                    .mul(&a.inverse().unwrap())
                    .mul(&b.inverse().unwrap());
                let sum = g1.add(&g2);
                if rs.is_root(&sum) {
                    let n = cb.n(&g1, &g2);
                    let c = ring.from_i64(n * 6);
                    let expect = root_unipotent(&cb, &ring, &sum, &c).unwrap();
                    assert_eq!(comm, expect, "commutator lands on the sum root");
                    checked_sum += 1;
                } else if sum != Root([0; 8]) {
                    assert!(comm.is_identity(), "commutator trivial off the root");
                    checked_commuting += 1;
                }
                if checked_sum > 40 && checked_commuting > 40 {
                    break 'outer;
                }
            }
        }
        assert!(checked_sum > 40 && checked_commuting > 40);
    }
}
