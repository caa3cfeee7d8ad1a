//! The E8 root system, the E7 subsystem, and the 56 weights of the minimal
//! E7 module.
//!
//! Roots are stored as integer coefficient vectors over the fundamental
//! roots `α1..α8` in Bourbaki numbering.  The lattice pairing is normalized
//! so that every root has squared length 2; the inner-product values
//! `1, 1/2, 0, -1/2` of the length-1 normalization become `2, 1, 0, -1`.
//!
//! The weights of the 56-dimensional module are identified with the E8
//! roots whose `α8`-coefficient is 1, the E7 roots with those of
//! `α8`-coefficient 0, and `δ` (the E8 maximal root) is the unique root of
//! `α8`-coefficient 2.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Reverse;
use core::fmt;

/// Cartan matrix of E8, Bourbaki numbering: the chain 1-3-4-5-6-7-8 with
/// node 2 attached to node 4.
pub const CARTAN_E8: [[i32; 8]; 8] = {
    let mut a = [[0i32; 8]; 8];
    let mut i = 0;
    while i < 8 {
        a[i][i] = 2;
        i += 1;
    }
    let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
    let mut e = 0;
    while e < edges.len() {
        let (x, y) = edges[e];
        a[x][y] = -1;
        a[y][x] = -1;
        e += 1;
    }
    a
};

/// Coefficients of the maximal root `δ` of E8 over the fundamental roots.
pub const DELTA: [i32; 8] = [2, 3, 4, 6, 5, 4, 3, 2];

/// Coefficients of the unique submaximal root of E8 (the highest weight of
/// the 56-dimensional module).
pub const SUBMAXIMAL: [i32; 8] = [2, 3, 4, 6, 5, 4, 3, 1];

/// An E8 root, as integer coefficients over the fundamental roots.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root(pub [i32; 8]);

impl Root {
    /// Sum of coefficients over the fundamental roots.
    pub fn height(&self) -> i32 {
        self.0.iter().sum()
    }

    /// Coefficient of `α8`; grades the Lie algebra of E8 in five levels.
    pub fn alpha8_height(&self) -> i32 {
        self.0[7]
    }

    /// Coefficient of `α7`; drives the action of the weight element
    /// `h_{ϖ7}` on the module.
    pub fn alpha7_coeff(&self) -> i32 {
        self.0[6]
    }

    pub fn negate(&self) -> Root {
        let mut c = self.0;
        for x in &mut c {
            *x = -*x;
        }
        Root(c)
    }

    pub fn add(&self, other: &Root) -> Root {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(other.0.iter()) {
            *x += *y;
        }
        Root(c)
    }

    pub fn sub(&self, other: &Root) -> Root {
        let mut c = self.0;
        for (x, y) in c.iter_mut().zip(other.0.iter()) {
            *x -= *y;
        }
        Root(c)
    }

    /// Lattice pairing `(a, b)` with `(α, α) = 2` for all roots.
    pub fn pairing(&self, other: &Root) -> i32 {
        let mut s = 0;
        for i in 0..8 {
            for j in 0..8 {
                s += self.0[i] * CARTAN_E8[i][j] * other.0[j];
            }
        }
        s
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root{:?}", self.0)
    }
}

/// One of the 56 weights of the minimal E7 module, with its deterministic
/// numbering data.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Weight {
    /// Position 1..=56 in the deterministic ordering (1 = highest weight).
    pub ordinal: u8,
    /// Signed label: `1..28` for ordinals 1..28, `-28..-1` for 29..56, so
    /// that the bar involution negates the label.
    pub label: i8,
    /// The underlying E8 root of `α8`-coefficient 1.
    pub root: Root,
}

/// A validated weight index (ordinal 1..=56).  The ordinal is the only
/// sanctioned way to address weights; raw vectors are resolved at the
/// [`RootSystem::weight_of_root`] boundary.
pub type WeightIndex = u8;

/// The 12 weights moved by a root unipotent `x_α`, organized as 6
/// orthogonal pairs each summing to `δ + α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalSquare {
    pub alpha: Root,
    /// The 12 members, sorted by ordinal.
    pub members: [WeightIndex; 12],
    /// Six orthogonal pairs `{λ, λ*}` with `λ + λ* = δ + α`; each pair has
    /// its smaller ordinal first and pairs are sorted by first ordinal.
    pub pairs: [(WeightIndex, WeightIndex); 6],
}

impl MaximalSquare {
    /// The distinguished pair used for the square equation: the pair whose
    /// first member has the smallest ordinal in the square.
    pub fn canonical_pair(&self) -> (WeightIndex, WeightIndex) {
        self.pairs[0]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootError {
    /// The given vector is not a root of E7 (as embedded in E8).
    NotAnE7Root(Root),
    /// The two weights do not span a maximal square (distance must be 2 and
    /// the sum must differ from `δ`).
    NotASquarePair(WeightIndex, WeightIndex),
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::NotAnE7Root(r) => write!(f, "{:?} is not a root of E7", r),
            RootError::NotASquarePair(a, b) => {
                write!(f, "weights {a}, {b} do not lie in a common maximal square")
            }
        }
    }
}

/// The E8 root system with all derived weight combinatorics, immutable
/// after construction.
pub struct RootSystem {
    roots: Vec<Root>,
    index: BTreeMap<Root, u16>,
    pairing: Vec<i8>, // 240*240 lattice pairings
    delta: Root,
    e7: Vec<u16>,
    weights: Vec<Weight>,
    weight_of_root: BTreeMap<Root, u8>,
    bar: [u8; 56],
    /// orth[k] = bitmask of ordinals (0-based) at distance 2 from ordinal k+1.
    orth: [u64; 56],
}

impl RootSystem {
    /// Builds the 240 roots of E8 by closing the fundamental roots under
    /// simple reflections, then derives the E7 subsystem and the weight
    /// tables.
    pub fn new() -> Self {
        let mut set: BTreeMap<Root, ()> = BTreeMap::new();
        let mut work: Vec<Root> = (0..8)
            .map(|i| {
                let mut c = [0i32; 8];
                c[i] = 1;
                Root(c)
            })
            .collect();
        for r in &work {
            set.insert(*r, ());
        }
        while let Some(r) = work.pop() {
            for i in 0..8 {
                // s_i(r) = r - (r, α_i) α_i
                let p: i32 = (0..8).map(|j| r.0[j] * CARTAN_E8[j][i]).sum();
                let mut c = r.0;
                c[i] -= p;
                let refl = Root(c);
                if set.insert(refl, ()).is_none() {
                    work.push(refl);
                }
            }
        }
        let mut roots: Vec<Root> = set.into_keys().collect();
        assert_eq!(roots.len(), 240, "E8 must have 240 roots");

        // Deterministic global ordering: height descending, then lex.
        roots.sort_by_key(|r| (Reverse(r.height()), r.0));

        let index: BTreeMap<Root, u16> = roots
            .iter()
            .enumerate()
            .map(|(i, r)| (*r, i as u16))
            .collect();

        let mut pairing = Vec::with_capacity(240 * 240);
        for a in &roots {
            for b in &roots {
                let p = a.pairing(b);
                debug_assert!((-2..=2).contains(&p));
                pairing.push(p as i8);
            }
        }

        for r in &roots {
            assert_eq!(r.pairing(r), 2, "every root has squared length 2");
            assert!(index.contains_key(&r.negate()), "closed under negation");
        }

        let delta = Root(DELTA);
        assert!(index.contains_key(&delta));
        assert_eq!(roots[0], delta, "δ is the unique root of maximal height");

        let e7: Vec<u16> = roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.alpha8_height() == 0)
            .map(|(i, _)| i as u16)
            .collect();
        assert_eq!(e7.len(), 126);

        // Weights: α8-coefficient 1, ordered by height descending then lex.
        // The global root order is already that order, so a filter keeps it.
        let weight_roots: Vec<Root> = roots
            .iter()
            .copied()
            .filter(|r| r.alpha8_height() == 1)
            .collect();
        assert_eq!(weight_roots.len(), 56);
        assert_eq!(weight_roots[0], Root(SUBMAXIMAL));

        let weights: Vec<Weight> = weight_roots
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let ordinal = (i + 1) as u8;
                let label = if ordinal <= 28 {
                    ordinal as i8
                } else {
                    ordinal as i8 - 57
                };
                Weight {
                    ordinal,
                    label,
                    root: *r,
                }
            })
            .collect();
        let weight_of_root: BTreeMap<Root, u8> =
            weights.iter().map(|w| (w.root, w.ordinal)).collect();

        let mut bar = [0u8; 56];
        for w in &weights {
            let partner = delta.sub(&w.root);
            let b = *weight_of_root
                .get(&partner)
                .expect("δ - λ is again a weight");
            bar[w.ordinal as usize - 1] = b;
            assert_eq!(
                b,
                57 - w.ordinal,
                "bar involution reverses the deterministic ordering"
            );
        }

        let mut orth = [0u64; 56];
        for a in &weights {
            for b in &weights {
                if a.root.pairing(&b.root) == 0 {
                    orth[a.ordinal as usize - 1] |= 1u64 << (b.ordinal - 1);
                }
            }
        }

        RootSystem {
            roots,
            index,
            pairing,
            delta,
            e7,
            weights,
            weight_of_root,
            bar,
            orth,
        }
    }

    /// All 240 roots in the deterministic global order.
    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn root_index(&self, r: &Root) -> Option<u16> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    /// The maximal root `δ` of E8.
    pub fn delta(&self) -> Root {
        self.delta
    }

    /// Lattice pairing via the precomputed table.
    pub fn pairing_idx(&self, a: u16, b: u16) -> i32 {
        self.pairing[a as usize * 240 + b as usize] as i32
    }

    /// The 126 roots of E7: exactly the E8 roots of `α8`-coefficient 0.
    pub fn e7_roots(&self) -> impl Iterator<Item = Root> + '_ {
        self.e7.iter().map(move |&i| self.roots[i as usize])
    }

    pub fn is_e7_root(&self, r: &Root) -> bool {
        r.alpha8_height() == 0 && self.is_root(r)
    }

    /// The 56 weights in the deterministic ordering (ordinal 1 first).
    pub fn weights(&self) -> &[Weight] {
        &self.weights
    }

    pub fn weight(&self, ordinal: WeightIndex) -> &Weight {
        &self.weights[ordinal as usize - 1]
    }

    pub fn weight_root(&self, ordinal: WeightIndex) -> Root {
        self.weights[ordinal as usize - 1].root
    }

    /// Resolves a raw root vector to a weight ordinal; the single parsing
    /// boundary for weight-valued input.
    pub fn weight_of_root(&self, r: &Root) -> Option<WeightIndex> {
        self.weight_of_root.get(r).copied()
    }

    /// Distance in the weight graph, from the lattice pairing:
    /// `2 ↦ 0`, `1 ↦ 1`, `0 ↦ 2`, `-1 ↦ 3`.
    pub fn distance(&self, a: WeightIndex, b: WeightIndex) -> u8 {
        let p = self.weight_root(a).pairing(&self.weight_root(b));
        match p {
            2 => 0,
            1 => 1,
            0 => 2,
            -1 => 3,
            _ => unreachable!("pairing of two weights is in -1..=2"),
        }
    }

    /// The unique weight at distance 3: `bar(λ) = δ - λ`.
    pub fn bar(&self, a: WeightIndex) -> WeightIndex {
        self.bar[a as usize - 1]
    }

    /// The maximal square `Ω(α) = {λ : λ - α ∈ Λ}` of an E7 root.
    pub fn maximal_square(&self, alpha: &Root) -> Result<MaximalSquare, RootError> {
        if !self.is_e7_root(alpha) {
            return Err(RootError::NotAnE7Root(*alpha));
        }
        let mut members: Vec<WeightIndex> = self
            .weights
            .iter()
            .filter(|w| self.weight_of_root(&w.root.sub(alpha)).is_some())
            .map(|w| w.ordinal)
            .collect();
        members.sort_unstable();
        assert_eq!(members.len(), 12, "a maximal square has 12 weights");

        let sum = self.delta.add(alpha);
        let mut pairs: Vec<(WeightIndex, WeightIndex)> = Vec::with_capacity(6);
        for &m in &members {
            let partner_root = sum.sub(&self.weight_root(m));
            let partner = self
                .weight_of_root(&partner_root)
                .expect("partner λ* = δ + α - λ is a member");
            if m < partner {
                pairs.push((m, partner));
            }
        }
        pairs.sort_unstable();
        assert_eq!(pairs.len(), 6);

        Ok(MaximalSquare {
            alpha: *alpha,
            members: members.try_into().unwrap(),
            pairs: pairs.try_into().unwrap(),
        })
    }

    /// The square through a given orthogonal pair: `α = ρ + σ - δ`.
    pub fn square_of_pair(
        &self,
        rho: WeightIndex,
        sigma: WeightIndex,
    ) -> Result<MaximalSquare, RootError> {
        if self.distance(rho, sigma) != 2 {
            return Err(RootError::NotASquarePair(rho, sigma));
        }
        let alpha = self
            .weight_root(rho)
            .add(&self.weight_root(sigma))
            .sub(&self.delta);
        self.maximal_square(&alpha)
            .map_err(|_| RootError::NotASquarePair(rho, sigma))
    }

    /// All unordered quadruples of pairwise orthogonal weights.
    pub fn tetrads(&self) -> Vec<[WeightIndex; 4]> {
        let mut out = Vec::new();
        let above = |k: u8| -> u64 {
            // ordinals strictly greater than k, as a bitmask
            if k >= 56 {
                0
            } else {
                !0u64 << k & ((1u64 << 56) - 1)
            }
        };
        for a in 1..=56u8 {
            let ma = self.orth[a as usize - 1] & above(a);
            let mut bits_b = ma;
            while bits_b != 0 {
                let b = bits_b.trailing_zeros() as u8 + 1;
                bits_b &= bits_b - 1;
                let mab = ma & self.orth[b as usize - 1] & above(b);
                let mut bits_c = mab;
                while bits_c != 0 {
                    let c = bits_c.trailing_zeros() as u8 + 1;
                    bits_c &= bits_c - 1;
                    let mabc = mab & self.orth[c as usize - 1] & above(c);
                    let mut bits_d = mabc;
                    while bits_d != 0 {
                        let d = bits_d.trailing_zeros() as u8 + 1;
                        bits_d &= bits_d - 1;
                        out.push([a, b, c, d]);
                    }
                }
            }
        }
        out
    }
}

impl Default for RootSystem {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_is_as_printed() {
        let rs = RootSystem::new();
        assert_eq!(rs.delta(), Root([2, 3, 4, 6, 5, 4, 3, 2]));
        assert!(rs.is_root(&rs.delta().negate()));
    }

    #[test]
    fn root_count_is_240() {
        assert_eq!(RootSystem::new().roots().len(), 240);
    }

    #[test]
    fn e7_count_and_orthogonality_to_delta() {
        let rs = RootSystem::new();
        let delta = rs.delta();
        let mut n = 0;
        for alpha in rs.e7_roots() {
            assert_eq!(delta.pairing(&alpha), 0, "δ ⊥ E7");
            assert!(rs.is_e7_root(&alpha.negate()));
            n += 1;
        }
        assert_eq!(n, 126);
        // α7 is a fundamental root of E7
        let mut a7 = [0i32; 8];
        a7[6] = 1;
        assert!(rs.is_e7_root(&Root(a7)));
    }

    #[test]
    fn weights_count_and_highest() {
        let rs = RootSystem::new();
        assert_eq!(rs.weights().len(), 56);
        assert_eq!(rs.weight_root(1), Root([2, 3, 4, 6, 5, 4, 3, 1]));
        for w in rs.weights() {
            assert!(rs.weight_of_root(&rs.delta().sub(&w.root)).is_some());
        }
    }

    #[test]
    fn labels_follow_bar() {
        let rs = RootSystem::new();
        for w in rs.weights() {
            let b = rs.bar(w.ordinal);
            assert_eq!(rs.weight(b).label, -w.label);
            assert_eq!(rs.bar(b), w.ordinal, "bar is an involution");
            assert_ne!(b, w.ordinal);
            assert_eq!(
                rs.weight_root(w.ordinal).add(&rs.weight_root(b)),
                rs.delta()
            );
        }
        assert_eq!(rs.weight(1).label, 1);
        assert_eq!(rs.weight(rs.bar(1)).label, -1);
    }

    #[test]
    fn distance_partition() {
        let rs = RootSystem::new();
        for a in 1..=56u8 {
            let mut counts = [0usize; 4];
            for b in 1..=56u8 {
                counts[rs.distance(a, b) as usize] += 1;
            }
            assert_eq!(counts, [1, 27, 27, 1], "56 = 1 + 27 + 27 + 1");
            assert_eq!(rs.distance(a, rs.bar(a)), 3);
            assert_eq!(rs.distance(a, a), 0);
        }
    }

    #[test]
    fn distance_is_symmetric() {
        let rs = RootSystem::new();
        for a in 1..=56u8 {
            for b in 1..=56u8 {
                assert_eq!(rs.distance(a, b), rs.distance(b, a));
            }
        }
    }

    #[test]
    fn squares_have_12_members_and_constant_pair_sum() {
        let rs = RootSystem::new();
        let mut seen = alloc::collections::BTreeSet::new();
        for alpha in rs.e7_roots().collect::<Vec<_>>() {
            let sq = rs.maximal_square(&alpha).unwrap();
            let sum = rs.delta().add(&alpha);
            for &(a, b) in &sq.pairs {
                assert_eq!(rs.weight_root(a).add(&rs.weight_root(b)), sum);
                assert_eq!(rs.distance(a, b), 2);
            }
            // Ω(-α) = bar(Ω(α)), and the two are disjoint
            let neg = rs.maximal_square(&alpha.negate()).unwrap();
            let mut barred: Vec<u8> = sq.members.iter().map(|&m| rs.bar(m)).collect();
            barred.sort_unstable();
            assert_eq!(neg.members.to_vec(), barred);
            assert!(sq.members.iter().all(|m| !neg.members.contains(m)));
            seen.insert(sq.members);
        }
        assert_eq!(seen.len(), 126, "one distinct square per E7 root");
    }

    #[test]
    fn every_orthogonal_nonbar_pair_lies_in_one_square() {
        let rs = RootSystem::new();
        for a in 1..=56u8 {
            for b in (a + 1)..=56u8 {
                if rs.distance(a, b) != 2 {
                    continue;
                }
                let sq = rs.square_of_pair(a, b).unwrap();
                assert!(sq.members.contains(&a) && sq.members.contains(&b));
                // membership in a second square would mean a second α with
                // λ + μ = δ + α; the sum determines α uniquely
            }
        }
    }

    #[test]
    fn square_rejects_non_e7_input() {
        let rs = RootSystem::new();
        assert!(rs.maximal_square(&rs.delta()).is_err());
        assert!(rs.maximal_square(&Root([1, 0, 0, 0, 0, 0, 0, 1])).is_err());
    }

    #[test]
    fn tetrad_counts() {
        let rs = RootSystem::new();
        let tetrads = rs.tetrads();
        assert_eq!(tetrads.len(), 630);
        assert_eq!(tetrads.len() * 24, 56 * 27 * 10, "|Θ| = 56·27·10 ordered");
        let two_delta = rs.delta().add(&rs.delta());
        for t in &tetrads {
            let mut sum = Root([0; 8]);
            for &w in t {
                sum = sum.add(&rs.weight_root(w));
            }
            assert_eq!(sum, two_delta, "tetrad roots sum to 2δ");
        }
    }

    /// Independent oracle: enumerate E8 in the even coordinate model
    /// (doubled coordinates to stay integral), change basis to fundamental
    /// root coordinates, and compare with the reflection-closure result.
    #[test]
    fn even_coordinate_model_oracle() {
        let rs = RootSystem::new();

        // Doubled fundamental roots in the even coordinate model.
        let fund: [[i64; 8]; 8] = [
            [1, -1, -1, -1, -1, -1, -1, 1],
            [2, 2, 0, 0, 0, 0, 0, 0],
            [-2, 2, 0, 0, 0, 0, 0, 0],
            [0, -2, 2, 0, 0, 0, 0, 0],
            [0, 0, -2, 2, 0, 0, 0, 0],
            [0, 0, 0, -2, 2, 0, 0, 0],
            [0, 0, 0, 0, -2, 2, 0, 0],
            [0, 0, 0, 0, 0, -2, 2, 0],
        ];

        // All 240 roots, doubled: ±2e_i ± 2e_j and (±1)^8 with evenly many
        // minus signs.
        let mut doubled: Vec<[i64; 8]> = Vec::new();
        for i in 0..8 {
            for j in (i + 1)..8 {
                for (si, sj) in [(2, 2), (2, -2), (-2, 2), (-2, -2)] {
                    let mut v = [0i64; 8];
                    v[i] = si;
                    v[j] = sj;
                    doubled.push(v);
                }
            }
        }
        for mask in 0u32..256 {
            if mask.count_ones() % 2 == 0 {
                let mut v = [1i64; 8];
                for (i, x) in v.iter_mut().enumerate() {
                    if mask >> i & 1 == 1 {
                        *x = -1;
                    }
                }
                doubled.push(v);
            }
        }
        assert_eq!(doubled.len(), 240);

        // Solve fund^T-as-columns · x = v exactly over the rationals
        // (numerators/denominators stay tiny).
        let solve = |v: [i64; 8]| -> [i32; 8] {
            // Gaussian elimination on the 8x9 augmented rational system,
            // with i128 cross-multiplication.
            let mut m = [[0i128; 9]; 8];
            for r in 0..8 {
                for c in 0..8 {
                    m[r][c] = fund[c][r] as i128;
                }
                m[r][8] = v[r] as i128;
            }
            for col in 0..8 {
                let piv = (col..8).find(|&r| m[r][col] != 0).unwrap();
                m.swap(col, piv);
                for r in 0..8 {
                    if r != col && m[r][col] != 0 {
                        let a = m[col][col];
                        let b = m[r][col];
                        for c in 0..9 {
                            m[r][c] = m[r][c] * a - m[col][c] * b;
                        }
                        let g = m[r].iter().fold(0i128, |acc, &x| gcd(acc, x.abs()));
                        if g > 1 {
                            for c in 0..9 {
                                m[r][c] /= g;
                            }
                        }
                    }
                }
            }
            let mut out = [0i32; 8];
            for r in 0..8 {
                assert_eq!(m[r][8] % m[r][r], 0, "coefficients must be integral");
                out[r] = (m[r][8] / m[r][r]) as i32;
            }
            out
        };

        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }

        let mut mapped: Vec<Root> = doubled.into_iter().map(|v| Root(solve(v))).collect();
        mapped.sort();
        mapped.dedup();
        assert_eq!(mapped.len(), 240);
        for r in &mapped {
            assert!(rs.is_root(r), "even-coordinate root {:?} missing", r);
        }

        // δ = e7 + e8 in the even coordinate model.
        assert_eq!(solve([0, 0, 0, 0, 0, 0, 2, 2]), DELTA);
    }
}
