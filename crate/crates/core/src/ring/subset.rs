use std::fmt;

use super::{Element, Idx, Ring};

/// A subset of a ring's elements, kept sorted and duplicate free.
#[derive(Clone)]
pub struct Subset {
    ring: Ring,
    members: Vec<Idx>,
}

impl Subset {
    pub fn new(ring: &Ring, mut members: Vec<Idx>) -> Subset {
        members.sort_unstable();
        members.dedup();
        assert!(
            members.last().is_none_or(|&m| (m as usize) < ring.order()),
            "subset member out of range"
        );
        Subset {
            ring: ring.clone(),
            members,
        }
    }

    pub(crate) fn from_mask(ring: &Ring, mask: &[bool]) -> Subset {
        let members = mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i as Idx))
            .collect();
        Subset {
            ring: ring.clone(),
            members,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn members(&self) -> &[Idx] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, idx: Idx) -> bool {
        self.members.binary_search(&idx).is_ok()
    }

    pub fn is_whole_ring(&self) -> bool {
        self.members.len() == self.ring.order()
    }

    pub fn elements(&self) -> impl Iterator<Item = Element<'_>> + '_ {
        self.members.iter().map(|&i| self.ring.element(i))
    }

    pub fn is_closed_under_add(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.contains(self.ring.add_idx(a, b)))
        })
    }

    pub fn is_closed_under_neg(&self) -> bool {
        self.members
            .iter()
            .all(|&a| self.contains(self.ring.neg_idx(a)))
    }

    pub fn is_closed_under_mul(&self) -> bool {
        self.members.iter().all(|&a| {
            self.members
                .iter()
                .all(|&b| self.contains(self.ring.mul_idx(a, b)))
        })
    }

    /// `R·S ⊆ S` (`left`) or `S·R ⊆ S`.
    pub fn absorbs(&self, left: bool) -> bool {
        let n = self.ring.order() as Idx;
        self.members.iter().all(|&s| {
            (0..n).all(|r| {
                let p = if left {
                    self.ring.mul_idx(r, s)
                } else {
                    self.ring.mul_idx(s, r)
                };
                self.contains(p)
            })
        })
    }

    /// Two-sided ideal test: additive subgroup absorbing ring multiplication.
    pub fn is_ideal(&self) -> bool {
        self.contains(0)
            && self.is_closed_under_add()
            && self.is_closed_under_neg()
            && self.absorbs(true)
            && self.absorbs(false)
    }

    /// No nonzero member is nilpotent. This is the reducedness notion for
    /// non-unital ideals.
    pub fn is_reduced(&self) -> bool {
        self.members
            .iter()
            .all(|&m| m == 0 || !self.ring.is_nilpotent_idx(m))
    }
}

impl PartialEq for Subset {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.members == other.members
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subset({}, {:?})", self.ring.label(), self.members)
    }
}
