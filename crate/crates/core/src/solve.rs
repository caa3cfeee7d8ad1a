//! Sparse exact Gaussian elimination over a field, tuned for the large,
//! extremely sparse constraint systems of the Lie-algebra solver.
//!
//! Rows are sorted `(column, value)` vectors.  The eliminator keeps one
//! pivot row per column, normalized to leading coefficient one; insertion
//! reduces an incoming row against existing pivots and either absorbs it
//! (rank +1) or discards it as dependent.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::ring::Field;

pub type SparseRow<E> = Vec<(u32, E)>;

pub struct Eliminator<R: Field> {
    ring: R,
    pivots: BTreeMap<u32, SparseRow<R::Elem>>,
}

impl<R: Field> Eliminator<R> {
    pub fn new(ring: R) -> Self {
        Eliminator {
            ring,
            pivots: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// `dst - s·src`, both sorted by column.
    fn sub_scaled(
        ring: &R,
        dst: &SparseRow<R::Elem>,
        src: &SparseRow<R::Elem>,
        s: &R::Elem,
    ) -> SparseRow<R::Elem> {
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
        out
    }

    /// Reduces the row against current pivots; if a nonzero remainder
    /// survives it becomes a new pivot and the rank grows.
    pub fn insert(&mut self, mut row: SparseRow<R::Elem>) -> bool {
        debug_assert!(row.windows(2).all(|w| w[0].0 < w[1].0));
        loop {
            row.retain(|(_, v)| !self.ring.is_zero(v));
            let Some(&(lead, ref v0)) = row.first() else {
                return false;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let s = v0.clone();
                    row = Self::sub_scaled(&self.ring, &row, p, &s);
                }
                None => {
                    let inv = self
                        .ring
                        .inv(v0)
                        .expect("field element with nonzero value is a unit");
                    for (_, v) in row.iter_mut() {
                        *v = self.ring.mul(v, &inv);
                    }
                    self.pivots.insert(lead, row);
                    return true;
                }
            }
        }
    }

    /// Back-substitutes to reduced row echelon form and reads off a kernel
    /// basis of the column space `0..ncols`; `pinned` columns are forced
    /// zero by singleton rows handled outside the eliminator and are
    /// neither pivots nor free.
    pub fn kernel_basis(&mut self, ncols: u32, pinned: &[bool]) -> Vec<SparseRow<R::Elem>> {
        let cols: Vec<u32> = self.pivots.keys().copied().collect();
        for &c in cols.iter().rev() {
            let row = self.pivots.remove(&c).unwrap();
            let others: Vec<u32> = self.pivots.keys().copied().collect();
            for oc in others {
                let or = self.pivots.get(&oc).unwrap();
                if let Ok(pos) = or.binary_search_by_key(&c, |e| e.0) {
                    let s = or[pos].1.clone();
                    let newr = Self::sub_scaled(&self.ring, or, &row, &s);
                    self.pivots.insert(oc, newr);
                }
            }
            self.pivots.insert(c, row);
        }
        let mut basis = Vec::new();
        for free in 0..ncols {
            if self.pivots.contains_key(&free) || pinned.get(free as usize).copied().unwrap_or(false)
            {
                continue;
            }
            let mut vec: SparseRow<R::Elem> = Vec::new();
            for (&p, row) in &self.pivots {
                if let Ok(pos) = row.binary_search_by_key(&free, |e| e.0) {
                    vec.push((p, self.ring.neg(&row[pos].1)));
                }
            }
            vec.push((free, self.ring.one()));
            vec.sort_unstable_by_key(|e| e.0);
            basis.push(vec);
        }
        basis
    }

    /// Evaluates a row (as a functional) against current pivots without
    /// inserting; true when the row is in the current row space.
    pub fn reduces_to_zero(&self, mut row: SparseRow<R::Elem>) -> bool {
        loop {
            row.retain(|(_, v)| !self.ring.is_zero(v));
            let Some(&(lead, ref v0)) = row.first() else {
                return true;
            };
            match self.pivots.get(&lead) {
                Some(p) => {
                    let s = v0.clone();
                    row = Self::sub_scaled(&self.ring, &row, p, &s);
                }
                None => return false,
            }
        }
    }
}

/// Accumulates rows in two phases: single-entry rows zero out their column
/// immediately (these dominate the Lie-algebra systems), the rest are
/// deduplicated and eliminated.  Rank = zeroed columns + eliminator rank.
pub struct RowAccumulator<R: Field>
where
    R::Elem: Ord,
{
    ring: R,
    pub zero_cols: Vec<bool>,
    nzeroed: usize,
    dedup: alloc::collections::BTreeSet<SparseRow<R::Elem>>,
    elim: Eliminator<R>,
}

impl<R: Field> RowAccumulator<R>
where
    R::Elem: Ord,
{
    pub fn new(ring: R, ncols: usize) -> Self {
        RowAccumulator {
            ring: ring.clone(),
            zero_cols: alloc::vec![false; ncols],
            nzeroed: 0,
            dedup: alloc::collections::BTreeSet::new(),
            elim: Eliminator::new(ring),
        }
    }

    /// Phase-1 pass: record forced-zero columns from singleton rows.
    /// Returns true if the set of zeroed columns grew.
    pub fn note_singleton(&mut self, row: &SparseRow<R::Elem>) -> bool {
        let mut live = row
            .iter()
            .filter(|(c, v)| !self.zero_cols[*c as usize] && !self.ring.is_zero(v));
        match (live.next(), live.next()) {
            (Some(&(c, _)), None) => {
                if !self.zero_cols[c as usize] {
                    self.zero_cols[c as usize] = true;
                    self.nzeroed += 1;
                    true
                } else {
                    false
                }
            }
            _ => false,
        }
    }

    /// Phase-2 pass: eliminate a row restricted to the surviving columns.
    pub fn add_row(&mut self, row: &SparseRow<R::Elem>) {
        let mut filtered: SparseRow<R::Elem> = row
            .iter()
            .filter(|(c, v)| !self.zero_cols[*c as usize] && !self.ring.is_zero(v))
            .cloned()
            .collect();
        match filtered.len() {
            0 => return,
            1 => {
                // late singleton: still a forced-zero column
                let c = filtered[0].0;
                if !self.zero_cols[c as usize] {
                    self.zero_cols[c as usize] = true;
                    self.nzeroed += 1;
                }
                return;
            }
            _ => {}
        }
        // normalize for deduplication
        let inv = self.ring.inv(&filtered[0].1).unwrap();
        for (_, v) in filtered.iter_mut() {
            *v = self.ring.mul(v, &inv);
        }
        if self.dedup.insert(filtered.clone()) {
            self.elim.insert(filtered);
        }
    }

    pub fn rank(&self) -> usize {
        self.nzeroed + self.elim.rank()
    }

    pub fn into_parts(self) -> (Vec<bool>, Eliminator<R>) {
        (self.zero_cols, self.elim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, RatField, Ring};

    #[test]
    fn rank_of_small_system() {
        let f7 = PrimeField::new(7);
        let mut e = Eliminator::new(f7);
        assert!(e.insert(alloc::vec![(0, 1), (1, 2)]));
        assert!(e.insert(alloc::vec![(1, 1), (2, 3)]));
        // dependent row: row0 + 2*row1 → (0,1),(1,2),(1,2),(2,6)...
        assert!(!e.insert(alloc::vec![(0, 2), (1, 4)]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn kernel_of_rank_two_in_four_cols() {
        let q = RatField;
        let mut e = Eliminator::new(q);
        let one = q.one();
        let two = q.from_i64(2);
        e.insert(alloc::vec![(0, one.clone()), (2, two.clone())]);
        e.insert(alloc::vec![(1, one.clone()), (3, q.from_i64(-1))]);
        let basis = e.kernel_basis(4, &[false; 4]);
        assert_eq!(basis.len(), 2);
        // each kernel vector satisfies both rows
        for v in &basis {
            let get = |c: u32| {
                v.iter()
                    .find(|e| e.0 == c)
                    .map(|e| e.1.clone())
                    .unwrap_or_else(|| q.zero())
            };
            let r1 = q.add(&get(0), &q.mul(&two, &get(2)));
            assert!(q.is_zero(&r1));
            let r2 = q.sub(&get(1), &get(3));
            assert!(q.is_zero(&r2));
        }
    }

    #[test]
    fn accumulator_singleton_propagation() {
        let f5 = PrimeField::new(5);
        let mut acc = RowAccumulator::new(f5, 4);
        let r1: SparseRow<u64> = alloc::vec![(0, 3)];
        let r2: SparseRow<u64> = alloc::vec![(0, 1), (1, 2)];
        // first pass: r1 zeroes column 0, making r2 a singleton on col 1
        assert!(acc.note_singleton(&r1));
        assert!(acc.note_singleton(&r2));
        acc.add_row(&alloc::vec![(1, 4), (2, 1), (3, 2)]);
        assert_eq!(acc.rank(), 3);
    }
}
