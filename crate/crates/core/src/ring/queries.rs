//! Structural queries: center, annihilators, idempotents, nilpotents,
//! ideal closure, quotients and generated subrings.

use std::collections::HashSet;

use rayon::prelude::*;

use super::{Element, Idx, Kind, Ring, Subset};
use crate::constructions::RingDescriptor;
use crate::error::{Result, RingError};

impl Ring {
    /// Commutes with every element. Testing against an additive generating
    /// set is exact, since `x·g = g·x` for all generators extends to sums.
    fn commutes_with_generators(&self, x: Idx) -> bool {
        self.additive_generators()
            .iter()
            .all(|&g| self.mul_idx(x, g) == self.mul_idx(g, x))
    }

    fn center_mask(&self) -> &[bool] {
        self.inner.center.get_or_init(|| {
            (0..self.order() as Idx)
                .map(|x| self.commutes_with_generators(x))
                .collect()
        })
    }

    pub fn is_central_idx(&self, x: Idx) -> bool {
        self.center_mask()[x as usize]
    }

    /// Least `r` in canonical order with `x·r ≠ r·x`.
    pub fn first_noncommuting(&self, x: Idx) -> Option<Idx> {
        (0..self.order() as Idx).find(|&r| self.mul_idx(x, r) != self.mul_idx(r, x))
    }

    pub fn center(&self) -> Subset {
        Subset::from_mask(self, self.center_mask())
    }

    pub fn right_annihilator(&self, a: Element<'_>) -> Subset {
        Subset::new(self, self.right_annihilator_idx(a.index()).to_vec())
    }

    pub fn left_annihilator(&self, a: Element<'_>) -> Subset {
        let members = (0..self.order() as Idx)
            .filter(|&b| self.mul_idx(b, a.index()) == 0)
            .collect();
        Subset::new(self, members)
    }

    /// `{ b : a·b = 0 }`, ascending.
    pub fn right_annihilator_idx(&self, a: Idx) -> &[Idx] {
        &self.right_annihilators()[a as usize]
    }

    /// Right annihilators of every element, indexed by element.
    pub fn right_annihilators(&self) -> &[Vec<Idx>] {
        self.inner.right_anns.get_or_init(|| {
            (0..self.order() as Idx)
                .map(|a| {
                    if a == 0 {
                        return (0..self.order() as Idx).collect();
                    }
                    (0..self.order() as Idx)
                        .filter(|&b| self.mul_idx(a, b) == 0)
                        .collect()
                })
                .collect()
        })
    }

    pub fn idempotents(&self) -> Subset {
        let members = (0..self.order() as Idx)
            .into_par_iter()
            .filter(|&e| self.mul_idx(e, e) == e)
            .collect();
        Subset::new(self, members)
    }

    /// Walks the powers of `a` until they reach zero or repeat.
    pub fn is_nilpotent_idx(&self, a: Idx) -> bool {
        if let Some(mask) = self.inner.nilpotent.get() {
            return mask[a as usize];
        }
        let mut seen = HashSet::new();
        let mut p = a;
        loop {
            if p == 0 {
                return true;
            }
            if !seen.insert(p) {
                return false;
            }
            p = self.mul_idx(p, a);
        }
    }

    /// Smallest `m ≥ 1` with `a^m = 0`.
    pub fn nilpotency_index(&self, a: Idx) -> Option<u64> {
        if !self.is_nilpotent_idx(a) {
            return None;
        }
        let (mut p, mut m) = (a, 1u64);
        while p != 0 {
            p = self.mul_idx(p, a);
            m += 1;
        }
        Some(m)
    }

    fn nilpotent_mask(&self) -> &[bool] {
        self.inner.nilpotent.get_or_init(|| {
            // status: 0 unknown, 1 nilpotent, 2 not nilpotent. Every power of a
            // shares the status of a, so whole power chains are settled at once.
            let n = self.order();
            let mut status = vec![0u8; n];
            let mut stamp = vec![u32::MAX; n];
            let mut chain = Vec::new();
            for a in 0..n as Idx {
                if status[a as usize] != 0 {
                    continue;
                }
                chain.clear();
                let mut p = a;
                let verdict = loop {
                    if p == 0 {
                        break 1;
                    }
                    match status[p as usize] {
                        0 => {}
                        s => break s,
                    }
                    if stamp[p as usize] == a {
                        break 2;
                    }
                    stamp[p as usize] = a;
                    chain.push(p);
                    p = self.mul_idx(p, a);
                };
                for &c in &chain {
                    status[c as usize] = verdict;
                }
            }
            status.into_iter().map(|s| s != 2).collect()
        })
    }

    pub fn nilpotents(&self) -> Subset {
        Subset::from_mask(self, self.nilpotent_mask())
    }

    /// Smallest two-sided ideal containing `gens`.
    pub fn ideal_closure(&self, gens: &[Idx]) -> Subset {
        Subset::from_mask(self, &self.ideal_mask(gens))
    }

    fn ideal_mask(&self, gens: &[Idx]) -> Vec<bool> {
        let n = self.order();
        let mut mask = vec![false; n];
        let mut members: Vec<Idx> = Vec::new();
        let mut queue: Vec<Idx> = Vec::new();
        let push = |x: Idx, mask: &mut Vec<bool>, queue: &mut Vec<Idx>| {
            if !mask[x as usize] {
                mask[x as usize] = true;
                queue.push(x);
            }
        };
        push(0, &mut mask, &mut queue);
        for &g in gens {
            push(g, &mut mask, &mut queue);
        }
        while let Some(x) = queue.pop() {
            push(self.neg_idx(x), &mut mask, &mut queue);
            for r in 0..n as Idx {
                push(self.mul_idx(r, x), &mut mask, &mut queue);
                push(self.mul_idx(x, r), &mut mask, &mut queue);
            }
            members.push(x);
            for &m in &members {
                push(self.add_idx(x, m), &mut mask, &mut queue);
            }
        }
        mask
    }

    /// Least subset of `ideal` whose ideal closure is `ideal` when scanning
    /// members in ascending order.
    fn ideal_generators(&self, ideal: &Subset) -> Vec<Idx> {
        let mut gens = Vec::new();
        let mut covered = self.ideal_mask(&gens);
        for &m in ideal.members() {
            if !covered[m as usize] {
                gens.push(m);
                covered = self.ideal_mask(&gens);
            }
        }
        gens
    }

    /// Ring of cosets `R/I`, each coset named by its least member.
    pub fn quotient_ring(&self, ideal: &Subset) -> Result<Ring> {
        if !ideal.ring().same_ring(self) {
            return Err(RingError::MixedRings);
        }
        if !ideal.is_ideal() {
            return Err(RingError::NotAnIdeal(format!(
                "{:?} is not closed under addition and two-sided multiplication",
                ideal.members()
            )));
        }
        let n = self.order();
        let mut rep_of = vec![Idx::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n as Idx {
            if rep_of[x as usize] != Idx::MAX {
                continue;
            }
            // x is the least member of its coset
            let q = reps.len() as Idx;
            reps.push(x);
            for &i in ideal.members() {
                rep_of[self.add_idx(x, i) as usize] = q;
            }
        }
        let gens = self.ideal_generators(ideal);
        let descriptor = RingDescriptor::Quot(Box::new(self.descriptor().clone()), gens);
        let order = reps.len();
        Ok(Ring::from_kind(
            descriptor,
            order,
            Kind::Quotient {
                base: self.clone(),
                reps,
                class_of: rep_of,
            },
            self.inner.table_cap,
        ))
    }

    /// Smallest subring containing `gens` and 1.
    pub fn subring_generated(&self, gens: &[Idx]) -> Ring {
        let n = self.order();
        let mut mask = vec![false; n];
        let mut members: Vec<Idx> = Vec::new();
        let mut queue = vec![0, self.one_idx()];
        queue.extend_from_slice(gens);
        while let Some(x) = queue.pop() {
            if mask[x as usize] {
                continue;
            }
            mask[x as usize] = true;
            queue.push(self.neg_idx(x));
            queue.push(self.mul_idx(x, x));
            queue.push(self.add_idx(x, x));
            for &m in &members {
                queue.push(self.add_idx(x, m));
                queue.push(self.mul_idx(x, m));
                queue.push(self.mul_idx(m, x));
            }
            members.push(x);
        }
        members.sort_unstable();
        let mut position = vec![Idx::MAX; n];
        for (p, &m) in members.iter().enumerate() {
            position[m as usize] = p as Idx;
        }
        let mut g = gens.to_vec();
        g.sort_unstable();
        g.dedup();
        let descriptor = RingDescriptor::Sub(Box::new(self.descriptor().clone()), g);
        Ring::from_kind(
            descriptor,
            members.len(),
            Kind::Sub {
                base: self.clone(),
                members,
                position,
            },
            self.inner.table_cap,
        )
    }

    /// Embedding of a subring element into its parent, when `self` is a
    /// generated subring.
    pub fn parent_index(&self, idx: Idx) -> Option<Idx> {
        match self.kind() {
            Kind::Sub { members, .. } => Some(members[idx as usize]),
            _ => None,
        }
    }

    /// The quotient map `R → R/I` on indices, when `self` is a quotient.
    pub fn quotient_class(&self, base_idx: Idx) -> Option<Idx> {
        match self.kind() {
            Kind::Quotient { class_of, .. } => Some(class_of[base_idx as usize]),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use crate::constructions::{
        make_matrix, make_trivial_extension, make_upper_triangular, make_zn,
    };
    use crate::ring::Value;

    #[test]
    fn center_examples() {
        let z4 = make_zn(4).unwrap();
        assert!(z4.center().is_whole_ring());
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        assert_eq!(m.center().members(), &[0, m.one_idx()]);
        let ut = make_upper_triangular(&make_zn(2).unwrap(), 2).unwrap();
        assert_eq!(ut.center().members(), &[0, ut.one_idx()]);
    }

    #[test]
    fn e11_is_not_central() {
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        let e11 = m.elem(&Value::int_matrix(&[[1, 0], [0, 0]])).unwrap();
        let e12 = m.elem(&Value::int_matrix(&[[0, 1], [0, 0]])).unwrap();
        assert!(!e11.is_central());
        assert_ne!(e11.mul(e12).unwrap(), e12.mul(e11).unwrap());
        assert!(e11.is_idempotent());
        assert_eq!(e11.mul(e12).unwrap(), e12);
    }

    #[test]
    fn annihilators_in_z4() {
        let z4 = make_zn(4).unwrap();
        assert_eq!(z4.right_annihilator(z4.element(2)).members(), &[0, 2]);
        assert!(z4.right_annihilator(z4.zero()).is_whole_ring());
        assert_eq!(z4.right_annihilator(z4.one()).members(), &[0]);
        assert_eq!(z4.left_annihilator(z4.element(2)).members(), &[0, 2]);
    }

    #[test]
    fn idempotents_and_nilpotents() {
        let z4 = make_zn(4).unwrap();
        assert_eq!(z4.nilpotents().members(), &[0, 2]);
        assert!(z4.element(2).is_nilpotent());
        assert!(!z4.element(3).is_nilpotent());
        let z6 = make_zn(6).unwrap();
        assert_eq!(z6.idempotents().members(), &[0, 1, 3, 4]);
        assert!(z6.element(3).is_idempotent());
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        assert_eq!(m.idempotents().len(), 8);
    }

    #[test]
    fn nilpotent_mask_matches_power_walk() {
        let t = make_trivial_extension(&make_zn(8).unwrap()).unwrap();
        let walked: Vec<u32> = (0..t.order() as u32)
            .filter(|&a| {
                let mut p = a;
                for _ in 0..=t.order() {
                    if p == 0 {
                        return true;
                    }
                    p = t.mul_idx(p, a);
                }
                false
            })
            .collect();
        assert_eq!(t.nilpotents().members(), walked.as_slice());
        assert_eq!(
            t.nilpotency_index(
                t.encode(&Value::pair(Value::int(0), Value::int(1)))
                    .unwrap()
            ),
            Some(2)
        );
    }

    #[test]
    fn ideal_closures() {
        let z6 = make_zn(6).unwrap();
        assert_eq!(z6.ideal_closure(&[2]).members(), &[0, 2, 4]);
        assert_eq!(z6.ideal_closure(&[0]).members(), &[0]);
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        let e11 = m.encode(&Value::int_matrix(&[[1, 0], [0, 0]])).unwrap();
        assert!(m.ideal_closure(&[e11]).is_whole_ring());
    }

    #[test]
    fn quotients() {
        let z6 = make_zn(6).unwrap();
        let q = z6.quotient_ring(&z6.ideal_closure(&[2])).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(q.label(), "Quot(Z(6), [2])");
        let z2 = make_zn(2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(q.mul_idx(a, b), z2.mul_idx(a, b));
                assert_eq!(q.add_idx(a, b), z2.add_idx(a, b));
            }
        }
        let z4 = make_zn(4).unwrap();
        let q4 = z4.quotient_ring(&z4.ideal_closure(&[2])).unwrap();
        assert_eq!(q4.order(), 2);
        assert_eq!(q4.add_idx(q4.one_idx(), q4.one_idx()), 0);
        let same = z4.quotient_ring(&z4.ideal_closure(&[0])).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(same.mul_idx(a, b), z4.mul_idx(a, b));
            }
        }
    }

    #[test]
    fn quotient_rejects_non_ideal() {
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        let e11 = m.encode(&Value::int_matrix(&[[1, 0], [0, 0]])).unwrap();
        let not_ideal = crate::ring::Subset::new(&m, vec![0, e11]);
        assert!(matches!(
            m.quotient_ring(&not_ideal),
            Err(crate::RingError::NotAnIdeal(_))
        ));
    }

    #[test]
    fn generated_subrings() {
        let z4 = make_zn(4).unwrap();
        assert_eq!(z4.subring_generated(&[]).order(), 4);
        let m = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        let e11 = m.encode(&Value::int_matrix(&[[1, 0], [0, 0]])).unwrap();
        let s = m.subring_generated(&[e11]);
        assert_eq!(s.order(), 4);
        let t = make_trivial_extension(&make_zn(2).unwrap()).unwrap();
        let m01 = t
            .encode(&Value::pair(Value::int(0), Value::int(1)))
            .unwrap();
        assert_eq!(t.subring_generated(&[m01]).order(), 4);
    }
}
