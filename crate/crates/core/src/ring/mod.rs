//! Concrete finite unital rings with a dense element codec.
//!
//! Every ring numbers its elements `0..order` in a canonical, construction
//! defined order with zero at index 0. Arithmetic works on these indices;
//! rings up to the table cap answer from cached Cayley tables, larger ones
//! compute products structurally through their base rings.

mod axioms;
mod queries;
mod subset;
mod value;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::constructions::RingDescriptor;
use crate::error::{Result, RingError};

pub use axioms::{check_axioms, AxiomMode, RingArith};
pub use subset::Subset;
pub use value::Value;

/// Dense element index.
pub type Idx = u32;

/// A finite unital associative ring. Cheap to clone; clones share identity.
#[derive(Clone)]
pub struct Ring {
    inner: Arc<RingData>,
}

pub(crate) struct RingData {
    descriptor: RingDescriptor,
    order: usize,
    one: Idx,
    kind: Kind,
    table_cap: usize,
    additive_gens: Vec<Idx>,
    tables: OnceLock<Tables>,
    center: OnceLock<Vec<bool>>,
    nilpotent: OnceLock<Vec<bool>>,
    right_anns: OnceLock<Vec<Vec<Idx>>>,
}

struct Tables {
    add: Vec<Idx>,
    mul: Vec<Idx>,
    neg: Vec<Idx>,
}

pub(crate) enum Kind {
    Zn {
        modulus: u64,
    },
    Params(ParamRing),
    Quotient {
        base: Ring,
        reps: Vec<Idx>,
        class_of: Vec<Idx>,
    },
    Sub {
        base: Ring,
        members: Vec<Idx>,
        position: Vec<Idx>,
    },
    Opposite {
        base: Ring,
    },
}

/// Rings whose elements are parameter vectors over base rings, encoded in
/// mixed radix with the first parameter most significant.
pub(crate) struct ParamRing {
    pub bases: Vec<Ring>,
    pub layout: Layout,
}

pub(crate) enum Layout {
    Product,
    Trivial,
    PolyMod,
    Matrix(MatrixLayout),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MatShape {
    Full,
    Upper,
    Tnk { k: usize },
}

pub(crate) struct MatrixLayout {
    pub n: usize,
    pub shape: MatShape,
    /// Flat positions `i * n + j` driven by each parameter.
    pub slots: Vec<Vec<usize>>,
    /// One position per parameter, read back when encoding a product.
    pub reps: Vec<(usize, usize)>,
}

impl MatrixLayout {
    pub fn new(n: usize, shape: MatShape) -> Self {
        let mut slots = Vec::new();
        let mut reps = Vec::new();
        match shape {
            MatShape::Full => {
                for i in 0..n {
                    for j in 0..n {
                        slots.push(vec![i * n + j]);
                        reps.push((i, j));
                    }
                }
            }
            MatShape::Upper => {
                for i in 0..n {
                    for j in i..n {
                        slots.push(vec![i * n + j]);
                        reps.push((i, j));
                    }
                }
            }
            MatShape::Tnk { k } => {
                // band x_{t+1} fills superdiagonal t
                for t in 0..k {
                    slots.push((0..n - t).map(|i| i * n + i + t).collect());
                    reps.push((0, t));
                }
                // free entries: row j, columns j + k ..= n - 1
                for j in 0..n - k {
                    for s in j + k..n {
                        slots.push(vec![j * n + s]);
                        reps.push((j, s));
                    }
                }
            }
        }
        MatrixLayout {
            n,
            shape,
            slots,
            reps,
        }
    }

    pub fn band_len(&self) -> usize {
        match self.shape {
            MatShape::Tnk { k } => k,
            _ => 0,
        }
    }
}

impl ParamRing {
    fn len(&self) -> usize {
        self.bases.len()
    }

    fn split(&self, mut idx: usize) -> Vec<Idx> {
        let mut out = vec![0; self.len()];
        for p in (0..self.len()).rev() {
            let r = self.bases[p].order();
            out[p] = (idx % r) as Idx;
            idx /= r;
        }
        out
    }

    fn join(&self, ps: &[Idx]) -> Idx {
        ps.iter()
            .zip(&self.bases)
            .fold(0usize, |acc, (&p, b)| acc * b.order() + p as usize) as Idx
    }

    fn dense(&self, m: &MatrixLayout, ps: &[Idx]) -> Vec<Idx> {
        let mut out = vec![0; m.n * m.n];
        for (p, slots) in m.slots.iter().enumerate() {
            for &s in slots {
                out[s] = ps[p];
            }
        }
        out
    }

    fn add(&self, a: Idx, b: Idx) -> Idx {
        let (pa, pb) = (self.split(a as usize), self.split(b as usize));
        let sum: Vec<Idx> = (0..self.len())
            .map(|p| self.bases[p].add_idx(pa[p], pb[p]))
            .collect();
        self.join(&sum)
    }

    fn neg(&self, a: Idx) -> Idx {
        let pa = self.split(a as usize);
        let out: Vec<Idx> = (0..self.len())
            .map(|p| self.bases[p].neg_idx(pa[p]))
            .collect();
        self.join(&out)
    }

    fn mul(&self, a: Idx, b: Idx) -> Idx {
        let (pa, pb) = (self.split(a as usize), self.split(b as usize));
        let out: Vec<Idx> = match &self.layout {
            Layout::Product => (0..self.len())
                .map(|p| self.bases[p].mul_idx(pa[p], pb[p]))
                .collect(),
            Layout::Trivial => {
                let r = &self.bases[0];
                let m = r.add_idx(r.mul_idx(pa[0], pb[1]), r.mul_idx(pa[1], pb[0]));
                vec![r.mul_idx(pa[0], pb[0]), m]
            }
            Layout::PolyMod => {
                let r = &self.bases[0];
                let n = self.len();
                let mut out = vec![0; n];
                for i in 0..n {
                    if pa[i] == 0 {
                        continue;
                    }
                    for j in 0..n - i {
                        out[i + j] = r.add_idx(out[i + j], r.mul_idx(pa[i], pb[j]));
                    }
                }
                out
            }
            Layout::Matrix(m) => {
                let r = &self.bases[0];
                let (da, db) = (self.dense(m, &pa), self.dense(m, &pb));
                let n = m.n;
                m.reps
                    .iter()
                    .map(|&(i, j)| {
                        let range = match m.shape {
                            MatShape::Full => 0..n,
                            _ => i..j + 1,
                        };
                        range.fold(0, |acc, t| {
                            r.add_idx(acc, r.mul_idx(da[i * n + t], db[t * n + j]))
                        })
                    })
                    .collect()
            }
        };
        self.join(&out)
    }

    fn decode(&self, idx: Idx) -> Value {
        let ps = self.split(idx as usize);
        let vals = || {
            ps.iter()
                .zip(&self.bases)
                .map(|(&p, b)| b.decode(p))
                .collect::<Vec<_>>()
        };
        match &self.layout {
            Layout::Product => Value::Tuple(vals()),
            Layout::Trivial => {
                let mut v = vals();
                let m = v.pop().unwrap();
                let r = v.pop().unwrap();
                Value::pair(r, m)
            }
            Layout::PolyMod => Value::Poly(vals()),
            Layout::Matrix(m) => match m.shape {
                MatShape::Tnk { k } => {
                    let mut v = vals();
                    let free = v.split_off(k);
                    Value::Tnk { band: v, free }
                }
                _ => {
                    let base = &self.bases[0];
                    let dense = self.dense(m, &ps);
                    Value::Matrix(
                        dense
                            .chunks(m.n)
                            .map(|row| row.iter().map(|&e| base.decode(e)).collect())
                            .collect(),
                    )
                }
            },
        }
    }

    fn encode(&self, v: &Value) -> Option<Idx> {
        let enc_all = |vs: &[Value]| -> Option<Vec<Idx>> {
            if vs.len() != self.len() {
                return None;
            }
            vs.iter()
                .zip(&self.bases)
                .map(|(v, b)| b.encode(v))
                .collect()
        };
        let ps = match (&self.layout, v) {
            (Layout::Product, Value::Tuple(vs)) => enc_all(vs)?,
            (Layout::Trivial, Value::Pair(r, m)) => enc_all(&[(**r).clone(), (**m).clone()])?,
            (Layout::PolyMod, Value::Poly(cs)) => enc_all(cs)?,
            (Layout::Matrix(m), Value::Tnk { band, free }) if m.band_len() > 0 => {
                let mut all = band.clone();
                all.extend(free.iter().cloned());
                enc_all(&all)?
            }
            (Layout::Matrix(m), Value::Matrix(rows)) if m.band_len() == 0 => {
                let base = &self.bases[0];
                if rows.len() != m.n || rows.iter().any(|r| r.len() != m.n) {
                    return None;
                }
                let mut dense = Vec::with_capacity(m.n * m.n);
                for row in rows {
                    for e in row {
                        dense.push(base.encode(e)?);
                    }
                }
                let ps: Vec<Idx> = m.reps.iter().map(|&(i, j)| dense[i * m.n + j]).collect();
                // entries outside the shape must be zero
                if self.dense(m, &ps) != dense {
                    return None;
                }
                ps
            }
            _ => return None,
        };
        Some(self.join(&ps))
    }
}

impl RingData {
    fn add_structural(&self, a: Idx, b: Idx) -> Idx {
        match &self.kind {
            Kind::Zn { modulus } => ((a as u64 + b as u64) % modulus) as Idx,
            Kind::Params(p) => p.add(a, b),
            Kind::Quotient {
                base,
                reps,
                class_of,
            } => class_of[base.add_idx(reps[a as usize], reps[b as usize]) as usize],
            Kind::Sub {
                base,
                members,
                position,
            } => position[base.add_idx(members[a as usize], members[b as usize]) as usize],
            Kind::Opposite { base } => base.add_idx(a, b),
        }
    }

    fn mul_structural(&self, a: Idx, b: Idx) -> Idx {
        match &self.kind {
            Kind::Zn { modulus } => ((a as u64 * b as u64) % modulus) as Idx,
            Kind::Params(p) => p.mul(a, b),
            Kind::Quotient {
                base,
                reps,
                class_of,
            } => class_of[base.mul_idx(reps[a as usize], reps[b as usize]) as usize],
            Kind::Sub {
                base,
                members,
                position,
            } => position[base.mul_idx(members[a as usize], members[b as usize]) as usize],
            Kind::Opposite { base } => base.mul_idx(b, a),
        }
    }

    fn neg_structural(&self, a: Idx) -> Idx {
        match &self.kind {
            Kind::Zn { modulus } => ((modulus - a as u64) % modulus) as Idx,
            Kind::Params(p) => p.neg(a),
            Kind::Quotient {
                base,
                reps,
                class_of,
            } => class_of[base.neg_idx(reps[a as usize]) as usize],
            Kind::Sub {
                base,
                members,
                position,
            } => position[base.neg_idx(members[a as usize]) as usize],
            Kind::Opposite { base } => base.neg_idx(a),
        }
    }
}

impl Ring {
    /// Assembles a ring from its parts. `order` must already respect the caps.
    pub(crate) fn from_kind(
        descriptor: RingDescriptor,
        order: usize,
        kind: Kind,
        table_cap: usize,
    ) -> Ring {
        let one = match &kind {
            Kind::Zn { modulus } => (1 % modulus) as Idx,
            Kind::Params(p) => {
                let ones: Vec<Idx> = match &p.layout {
                    Layout::Product => p.bases.iter().map(|b| b.one_idx()).collect(),
                    Layout::Trivial => vec![p.bases[0].one_idx(), 0],
                    Layout::PolyMod => {
                        let mut v = vec![0; p.len()];
                        v[0] = p.bases[0].one_idx();
                        v
                    }
                    Layout::Matrix(m) => {
                        let one = p.bases[0].one_idx();
                        match m.shape {
                            MatShape::Tnk { .. } => {
                                let mut v = vec![0; p.len()];
                                v[0] = one;
                                v
                            }
                            _ => m
                                .reps
                                .iter()
                                .map(|&(i, j)| if i == j { one } else { 0 })
                                .collect(),
                        }
                    }
                };
                p.join(&ones)
            }
            Kind::Quotient { base, class_of, .. } => class_of[base.one_idx() as usize],
            Kind::Sub { base, position, .. } => position[base.one_idx() as usize],
            Kind::Opposite { base } => base.one_idx(),
        };
        let additive_gens = match &kind {
            Kind::Zn { modulus } => {
                if *modulus > 1 {
                    vec![1]
                } else {
                    vec![]
                }
            }
            Kind::Params(p) => {
                let mut gens = Vec::new();
                for (pos, b) in p.bases.iter().enumerate() {
                    for &g in &b.inner.additive_gens {
                        let mut ps = vec![0; p.len()];
                        ps[pos] = g;
                        gens.push(p.join(&ps));
                    }
                }
                gens
            }
            Kind::Quotient { base, class_of, .. } => {
                let mut gens: Vec<Idx> = base
                    .inner
                    .additive_gens
                    .iter()
                    .map(|&g| class_of[g as usize])
                    .filter(|&g| g != 0)
                    .collect();
                gens.sort_unstable();
                gens.dedup();
                gens
            }
            Kind::Sub { members, .. } => (1..members.len() as Idx).collect(),
            Kind::Opposite { base } => base.inner.additive_gens.clone(),
        };
        Ring {
            inner: Arc::new(RingData {
                descriptor,
                order,
                one,
                kind,
                table_cap,
                additive_gens,
                tables: OnceLock::new(),
                center: OnceLock::new(),
                nilpotent: OnceLock::new(),
                right_anns: OnceLock::new(),
            }),
        }
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.inner.kind
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.inner.descriptor
    }

    /// Canonical textual identity of the ring.
    pub fn label(&self) -> String {
        self.inner.descriptor.to_string()
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    /// Whether products and sums are answered from cached tables.
    pub fn is_tabulated(&self) -> bool {
        self.inner.order <= self.inner.table_cap
    }

    pub(crate) fn table_cap(&self) -> usize {
        self.inner.table_cap
    }

    pub fn same_ring(&self, other: &Ring) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
    }

    /// A generating set of the additive group.
    pub fn additive_generators(&self) -> &[Idx] {
        &self.inner.additive_gens
    }

    fn tables(&self) -> Option<&Tables> {
        if !self.is_tabulated() {
            return None;
        }
        Some(self.inner.tables.get_or_init(|| {
            let n = self.inner.order;
            let data = &self.inner;
            let build = |f: &(dyn Fn(Idx, Idx) -> Idx + Sync)| -> Vec<Idx> {
                // plain scoped threads: a rayon worker here could steal a job
                // that re-enters this same initializer
                let mut t = vec![0; n * n];
                let workers = std::thread::available_parallelism().map_or(1, |w| w.get());
                let rows = n.div_ceil(workers.min(n).max(1));
                std::thread::scope(|s| {
                    for (c, chunk) in t.chunks_mut(rows * n).enumerate() {
                        s.spawn(move || {
                            for (i, slot) in chunk.iter_mut().enumerate() {
                                let (a, b) = (c * rows + i / n, i % n);
                                *slot = f(a as Idx, b as Idx);
                            }
                        });
                    }
                });
                t
            };
            Tables {
                add: build(&|a, b| data.add_structural(a, b)),
                mul: build(&|a, b| data.mul_structural(a, b)),
                neg: (0..n as Idx).map(|a| data.neg_structural(a)).collect(),
            }
        }))
    }

    #[inline]
    pub fn zero_idx(&self) -> Idx {
        0
    }

    #[inline]
    pub fn one_idx(&self) -> Idx {
        self.inner.one
    }

    #[inline]
    pub fn add_idx(&self, a: Idx, b: Idx) -> Idx {
        match self.tables() {
            Some(t) => t.add[a as usize * self.inner.order + b as usize],
            None => self.inner.add_structural(a, b),
        }
    }

    #[inline]
    pub fn mul_idx(&self, a: Idx, b: Idx) -> Idx {
        match self.tables() {
            Some(t) => t.mul[a as usize * self.inner.order + b as usize],
            None => self.inner.mul_structural(a, b),
        }
    }

    #[inline]
    pub fn neg_idx(&self, a: Idx) -> Idx {
        match self.tables() {
            Some(t) => t.neg[a as usize],
            None => self.inner.neg_structural(a),
        }
    }

    pub fn sub_idx(&self, a: Idx, b: Idx) -> Idx {
        self.add_idx(a, self.neg_idx(b))
    }

    /// `a^e` with `a^0 = 1`.
    pub fn pow_idx(&self, a: Idx, mut e: u64) -> Idx {
        let (mut base, mut acc) = (a, self.one_idx());
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_idx(acc, base);
            }
            base = self.mul_idx(base, base);
            e >>= 1;
        }
        acc
    }

    /// Structured value of the element at `idx`.
    pub fn decode(&self, idx: Idx) -> Value {
        assert!((idx as usize) < self.order(), "index {idx} out of range");
        match &self.inner.kind {
            Kind::Zn { .. } => Value::Residue(idx as u64),
            Kind::Params(p) => p.decode(idx),
            Kind::Quotient { base, reps, .. } => {
                Value::Coset(Box::new(base.decode(reps[idx as usize])))
            }
            Kind::Sub { base, members, .. } => {
                Value::Member(Box::new(base.decode(members[idx as usize])))
            }
            Kind::Opposite { base } => Value::Opposite(Box::new(base.decode(idx))),
        }
    }

    /// Dense index of a structured value, `None` if it is not an element.
    pub fn encode(&self, v: &Value) -> Option<Idx> {
        match (&self.inner.kind, v) {
            (Kind::Zn { modulus }, Value::Residue(r)) => (r < modulus).then_some(*r as Idx),
            (Kind::Params(p), v) => p.encode(v),
            (
                Kind::Quotient {
                    base,
                    class_of,
                    reps,
                },
                Value::Coset(inner),
            ) => {
                let c = class_of[base.encode(inner)? as usize];
                // cosets are named by their least representative only
                (base.encode(inner)? == reps[c as usize]).then_some(c)
            }
            (Kind::Sub { base, position, .. }, Value::Member(inner)) => {
                let p = position[base.encode(inner)? as usize];
                (p != Idx::MAX).then_some(p)
            }
            (Kind::Opposite { base }, Value::Opposite(inner)) => base.encode(inner),
            _ => None,
        }
    }

    pub fn element(&self, idx: Idx) -> Element<'_> {
        assert!((idx as usize) < self.order(), "index {idx} out of range");
        Element {
            ring: self,
            index: idx,
        }
    }

    pub fn try_element(&self, idx: Idx) -> Option<Element<'_>> {
        ((idx as usize) < self.order()).then_some(Element {
            ring: self,
            index: idx,
        })
    }

    /// The element carrying `v`.
    pub fn elem(&self, v: &Value) -> Result<Element<'_>> {
        self.encode(v)
            .map(|index| Element { ring: self, index })
            .ok_or_else(|| RingError::NotAnElement {
                ring: self.label(),
                detail: v.to_string(),
            })
    }

    pub fn zero(&self) -> Element<'_> {
        self.element(0)
    }

    pub fn one(&self) -> Element<'_> {
        self.element(self.one_idx())
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> impl Iterator<Item = Element<'_>> + '_ {
        (0..self.order() as Idx).map(move |index| Element { ring: self, index })
    }

    pub fn add<'r>(&'r self, a: Element<'r>, b: Element<'r>) -> Result<Element<'r>> {
        self.owns(&a)?;
        self.owns(&b)?;
        Ok(self.element(self.add_idx(a.index, b.index)))
    }

    pub fn mul<'r>(&'r self, a: Element<'r>, b: Element<'r>) -> Result<Element<'r>> {
        self.owns(&a)?;
        self.owns(&b)?;
        Ok(self.element(self.mul_idx(a.index, b.index)))
    }

    pub fn neg<'r>(&'r self, a: Element<'r>) -> Result<Element<'r>> {
        self.owns(&a)?;
        Ok(self.element(self.neg_idx(a.index)))
    }

    fn owns(&self, e: &Element<'_>) -> Result<()> {
        if self.same_ring(e.ring) {
            Ok(())
        } else {
            Err(RingError::MixedRings)
        }
    }
}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({}, order {})", self.label(), self.order())
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An element tagged with its ring.
#[derive(Clone, Copy)]
pub struct Element<'r> {
    ring: &'r Ring,
    index: Idx,
}

#[allow(clippy::should_implement_trait)]
impl<'r> Element<'r> {
    pub fn ring(&self) -> &'r Ring {
        self.ring
    }

    pub fn index(&self) -> Idx {
        self.index
    }

    pub fn value(&self) -> Value {
        self.ring.decode(self.index)
    }

    pub fn add(self, other: Element<'r>) -> Result<Element<'r>> {
        self.ring.add(self, other)
    }

    pub fn mul(self, other: Element<'r>) -> Result<Element<'r>> {
        self.ring.mul(self, other)
    }

    pub fn neg(self) -> Element<'r> {
        self.ring.element(self.ring.neg_idx(self.index))
    }

    pub fn is_zero(&self) -> bool {
        self.index == 0
    }

    pub fn is_nilpotent(&self) -> bool {
        self.ring.is_nilpotent_idx(self.index)
    }

    pub fn is_idempotent(&self) -> bool {
        self.ring.mul_idx(self.index, self.index) == self.index
    }

    pub fn is_central(&self) -> bool {
        self.ring.is_central_idx(self.index)
    }
}

impl PartialEq for Element<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(other.ring) && self.index == other.index
    }
}

impl Eq for Element<'_> {}

impl fmt::Debug for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{} = {}", self.ring.label(), self.index, self.value())
    }
}

impl fmt::Display for Element<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}
