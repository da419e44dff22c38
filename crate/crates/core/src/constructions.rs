//! Builders for the concrete ring families: residue rings, direct products,
//! full and upper triangular matrix rings, the banded subrings `T_n^k(R)`,
//! trivial extensions `T(R, R)`, truncated polynomial rings `R[x]/(x^n)`,
//! and (for tests and configuration files) quotients, generated subrings and
//! opposite rings.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dsl;
use crate::error::{Result, RingError};
use crate::ring::{Idx, Kind, Layout, MatShape, MatrixLayout, ParamRing, Ring};

/// Size limits shared by every builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest ring that may be built at all.
    pub order_cap: u64,
    /// Rings up to this order keep cached Cayley tables.
    pub table_cap: usize,
    /// Rings up to this order get exhaustive axiom sweeps.
    pub axiom_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            order_cap: 65_536,
            table_cap: 4_096,
            axiom_cap: 64,
        }
    }
}

/// Construction tree of a ring. `Display` prints the DSL form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingDescriptor {
    Zn(u64),
    Prod(Vec<RingDescriptor>),
    Mat(Box<RingDescriptor>, usize),
    UT(Box<RingDescriptor>, usize),
    Tnk(Box<RingDescriptor>, usize, usize),
    Triv(Box<RingDescriptor>),
    PolyMod(Box<RingDescriptor>, usize),
    /// Quotient by the ideal generated by the listed base indices.
    Quot(Box<RingDescriptor>, Vec<Idx>),
    /// Subring generated by the listed base indices (and 1).
    Sub(Box<RingDescriptor>, Vec<Idx>),
    Opp(Box<RingDescriptor>),
}

impl RingDescriptor {
    pub fn build(&self) -> Result<Ring> {
        self.build_with(&Limits::default())
    }

    pub fn build_with(&self, limits: &Limits) -> Result<Ring> {
        use RingDescriptor::*;
        match self {
            Zn(n) => limits.zn(*n),
            Prod(fs) => {
                let rings = fs
                    .iter()
                    .map(|f| f.build_with(limits))
                    .collect::<Result<Vec<_>>>()?;
                limits.product(&rings)
            }
            Mat(b, n) => limits.matrix(&b.build_with(limits)?, *n),
            UT(b, n) => limits.upper_triangular(&b.build_with(limits)?, *n),
            Tnk(b, n, k) => limits.tnk(&b.build_with(limits)?, *n, *k),
            Triv(b) => limits.trivial_extension(&b.build_with(limits)?),
            PolyMod(b, n) => limits.poly_mod(&b.build_with(limits)?, *n),
            Quot(b, gens) => {
                let base = b.build_with(limits)?;
                check_indices(&base, gens)?;
                base.quotient_ring(&base.ideal_closure(gens))
            }
            Sub(b, gens) => {
                let base = b.build_with(limits)?;
                check_indices(&base, gens)?;
                Ok(base.subring_generated(gens))
            }
            Opp(b) => Ok(make_opposite(&b.build_with(limits)?)),
        }
    }

    /// Whether the descriptor only uses the core grammar (no index lists).
    pub fn is_core(&self) -> bool {
        use RingDescriptor::*;
        match self {
            Zn(_) => true,
            Prod(fs) => fs.iter().all(|f| f.is_core()),
            Mat(b, _) | UT(b, _) | Tnk(b, _, _) | Triv(b) | PolyMod(b, _) => b.is_core(),
            Quot(..) | Sub(..) | Opp(_) => false,
        }
    }
}

fn check_indices(base: &Ring, gens: &[Idx]) -> Result<()> {
    match gens.iter().find(|&&g| g as usize >= base.order()) {
        Some(g) => Err(RingError::InvalidParameter(format!(
            "index {g} out of range for {} (order {})",
            base.label(),
            base.order()
        ))),
        None => Ok(()),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[Idx]) -> fmt::Result {
    f.write_str("[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str("]")
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use RingDescriptor::*;
        match self {
            Zn(n) => write!(f, "Z({n})"),
            Prod(fs) => {
                f.write_str("Prod(")?;
                for (i, d) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{d}")?;
                }
                f.write_str(")")
            }
            Mat(b, n) => write!(f, "Mat({b}, {n})"),
            UT(b, n) => write!(f, "UT({b}, {n})"),
            Tnk(b, n, k) => write!(f, "Tnk({b}, {n}, {k})"),
            Triv(b) => write!(f, "Triv({b})"),
            PolyMod(b, n) => write!(f, "PolyMod({b}, {n})"),
            Quot(b, g) => {
                write!(f, "Quot({b}, ")?;
                write_list(f, g)?;
                f.write_str(")")
            }
            Sub(b, g) => {
                write!(f, "Sub({b}, ")?;
                write_list(f, g)?;
                f.write_str(")")
            }
            Opp(b) => write!(f, "Opp({b})"),
        }
    }
}

impl FromStr for RingDescriptor {
    type Err = dsl::ParseError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        dsl::parse_extended(s).map(|e| e.to_descriptor())
    }
}

impl Serialize for RingDescriptor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RingDescriptor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Limits {
    fn checked_order(&self, what: &str, base: usize, params: usize) -> Result<usize> {
        let mut order: u128 = 1;
        for _ in 0..params {
            order = order.saturating_mul(base as u128);
            if order > self.order_cap as u128 {
                return Err(RingError::OrderOverflow {
                    order: format!("{what}: {base}^{params}"),
                    cap: self.order_cap,
                });
            }
        }
        Ok(order as usize)
    }

    fn params_ring(
        &self,
        descriptor: RingDescriptor,
        bases: Vec<Ring>,
        layout: Layout,
        order: usize,
    ) -> Ring {
        Ring::from_kind(
            descriptor,
            order,
            Kind::Params(ParamRing { bases, layout }),
            self.table_cap,
        )
    }

    pub fn zn(&self, n: u64) -> Result<Ring> {
        if n == 0 {
            return Err(RingError::InvalidParameter("Z(n) needs n >= 1".into()));
        }
        if n > self.order_cap {
            return Err(RingError::OrderOverflow {
                order: n.to_string(),
                cap: self.order_cap,
            });
        }
        Ok(Ring::from_kind(
            RingDescriptor::Zn(n),
            n as usize,
            Kind::Zn { modulus: n },
            self.table_cap,
        ))
    }

    pub fn product(&self, factors: &[Ring]) -> Result<Ring> {
        if factors.is_empty() {
            return Err(RingError::InvalidParameter(
                "a product needs at least one factor".into(),
            ));
        }
        let mut order: u128 = 1;
        for f in factors {
            order = order.saturating_mul(f.order() as u128);
            if order > self.order_cap as u128 {
                return Err(RingError::OrderOverflow {
                    order: format!(
                        "product of orders {:?}",
                        factors.iter().map(Ring::order).collect::<Vec<_>>()
                    ),
                    cap: self.order_cap,
                });
            }
        }
        let d = RingDescriptor::Prod(factors.iter().map(|f| f.descriptor().clone()).collect());
        Ok(self.params_ring(d, factors.to_vec(), Layout::Product, order as usize))
    }

    fn matrix_like(&self, base: &Ring, n: usize, shape: MatShape) -> Result<Ring> {
        let layout = MatrixLayout::new(n, shape);
        let params = layout.slots.len();
        let (name, d) = match shape {
            MatShape::Full => (
                "Mat",
                RingDescriptor::Mat(Box::new(base.descriptor().clone()), n),
            ),
            MatShape::Upper => (
                "UT",
                RingDescriptor::UT(Box::new(base.descriptor().clone()), n),
            ),
            MatShape::Tnk { k } => (
                "Tnk",
                RingDescriptor::Tnk(Box::new(base.descriptor().clone()), n, k),
            ),
        };
        let order = self.checked_order(name, base.order(), params)?;
        Ok(self.params_ring(d, vec![base.clone(); params], Layout::Matrix(layout), order))
    }

    pub fn matrix(&self, base: &Ring, n: usize) -> Result<Ring> {
        if n == 0 {
            return Err(RingError::InvalidParameter("Mat(R, n) needs n >= 1".into()));
        }
        self.matrix_like(base, n, MatShape::Full)
    }

    pub fn upper_triangular(&self, base: &Ring, n: usize) -> Result<Ring> {
        if n == 0 {
            return Err(RingError::InvalidParameter("UT(R, n) needs n >= 1".into()));
        }
        self.matrix_like(base, n, MatShape::Upper)
    }

    pub fn tnk(&self, base: &Ring, n: usize, k: usize) -> Result<Ring> {
        if n < 2 || k < 1 || k > n - 1 {
            return Err(RingError::InvalidParameter(format!(
                "Tnk(R, n, k) needs n >= 2 and 1 <= k <= n - 1, got n = {n}, k = {k}"
            )));
        }
        self.matrix_like(base, n, MatShape::Tnk { k })
    }

    pub fn trivial_extension(&self, base: &Ring) -> Result<Ring> {
        let order = self.checked_order("Triv", base.order(), 2)?;
        let d = RingDescriptor::Triv(Box::new(base.descriptor().clone()));
        Ok(self.params_ring(d, vec![base.clone(); 2], Layout::Trivial, order))
    }

    pub fn poly_mod(&self, base: &Ring, n: usize) -> Result<Ring> {
        if n == 0 {
            return Err(RingError::InvalidParameter(
                "PolyMod(R, n) needs n >= 1".into(),
            ));
        }
        let order = self.checked_order("PolyMod", base.order(), n)?;
        let d = RingDescriptor::PolyMod(Box::new(base.descriptor().clone()), n);
        Ok(self.params_ring(d, vec![base.clone(); n], Layout::PolyMod, order))
    }
}

pub fn make_zn(n: u64) -> Result<Ring> {
    Limits::default().zn(n)
}

pub fn make_product(factors: &[Ring]) -> Result<Ring> {
    Limits::default().product(factors)
}

pub fn make_matrix(base: &Ring, n: usize) -> Result<Ring> {
    Limits::default().matrix(base, n)
}

pub fn make_upper_triangular(base: &Ring, n: usize) -> Result<Ring> {
    Limits::default().upper_triangular(base, n)
}

pub fn make_tnk(base: &Ring, n: usize, k: usize) -> Result<Ring> {
    Limits::default().tnk(base, n, k)
}

pub fn make_trivial_extension(base: &Ring) -> Result<Ring> {
    Limits::default().trivial_extension(base)
}

pub fn make_poly_mod(base: &Ring, n: usize) -> Result<Ring> {
    Limits::default().poly_mod(base, n)
}

/// `R^op`: same elements and addition, multiplication reversed.
pub fn make_opposite(base: &Ring) -> Ring {
    Ring::from_kind(
        RingDescriptor::Opp(Box::new(base.descriptor().clone())),
        base.order(),
        Kind::Opposite { base: base.clone() },
        base.table_cap(),
    )
}

/// Shape of the matrix-like ring `ring`, if it is one: `(n, k)` with
/// `k = None` for full and upper triangular rings.
pub fn matrix_shape(ring: &Ring) -> Option<(usize, Option<usize>)> {
    match ring.kind() {
        Kind::Params(ParamRing {
            layout: Layout::Matrix(m),
            ..
        }) => Some((
            m.n,
            match m.shape {
                MatShape::Tnk { k } => Some(k),
                _ => None,
            },
        )),
        _ => None,
    }
}

/// Full `n × n` matrix of base-ring indices for an element of a matrix-like
/// ring.
pub fn matrix_entries(ring: &Ring, idx: Idx) -> Option<Vec<Idx>> {
    match ring.kind() {
        Kind::Params(
            p @ ParamRing {
                layout: Layout::Matrix(m),
                ..
            },
        ) => Some(dense_of(p, m, idx)),
        _ => None,
    }
}

/// Inverse of [`matrix_entries`]: `None` if the matrix lies outside the ring.
pub fn from_matrix_entries(ring: &Ring, entries: &[Idx]) -> Option<Idx> {
    match ring.kind() {
        Kind::Params(
            p @ ParamRing {
                layout: Layout::Matrix(m),
                ..
            },
        ) => {
            if entries.len() != m.n * m.n {
                return None;
            }
            let ps: Vec<Idx> = m.reps.iter().map(|&(i, j)| entries[i * m.n + j]).collect();
            let idx = join_params(p, &ps);
            (dense_of(p, m, idx) == entries).then_some(idx)
        }
        _ => None,
    }
}

/// The base ring of a matrix-like, trivial-extension or truncated polynomial ring.
pub fn base_ring(ring: &Ring) -> Option<&Ring> {
    match ring.kind() {
        Kind::Params(ParamRing {
            bases,
            layout: Layout::Matrix(_) | Layout::Trivial | Layout::PolyMod,
        }) => bases.first(),
        Kind::Quotient { base, .. } | Kind::Sub { base, .. } | Kind::Opposite { base } => {
            Some(base)
        }
        _ => None,
    }
}

fn join_params(p: &ParamRing, ps: &[Idx]) -> Idx {
    ps.iter()
        .zip(&p.bases)
        .fold(0usize, |acc, (&x, b)| acc * b.order() + x as usize) as Idx
}

fn dense_of(p: &ParamRing, m: &MatrixLayout, idx: Idx) -> Vec<Idx> {
    let mut rest = idx as usize;
    let mut ps = vec![0; p.bases.len()];
    for i in (0..ps.len()).rev() {
        let r = p.bases[i].order();
        ps[i] = (rest % r) as Idx;
        rest /= r;
    }
    let mut out = vec![0; m.n * m.n];
    for (q, slots) in m.slots.iter().enumerate() {
        for &s in slots {
            out[s] = ps[q];
        }
    }
    out
}

/// Verifies that a matrix-like ring is closed under the full matrix product:
/// every entry of `A·B` agrees with the element the product encodes to.
/// Exhaustive when `order^2 <= pair_cap`, otherwise `samples` seeded pairs.
pub fn check_matrix_closure(ring: &Ring, pair_cap: usize, samples: usize, seed: u64) -> Result<()> {
    let Kind::Params(
        p @ ParamRing {
            layout: Layout::Matrix(m),
            ..
        },
    ) = ring.kind()
    else {
        return Ok(());
    };
    let base = &p.bases[0];
    let n = m.n;
    let check = |a: Idx, b: Idx| -> Result<()> {
        let (da, db) = (dense_of(p, m, a), dense_of(p, m, b));
        let mut full = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                full[i * n + j] = (0..n).fold(0, |acc, t| {
                    base.add_idx(acc, base.mul_idx(da[i * n + t], db[t * n + j]))
                });
            }
        }
        if dense_of(p, m, ring.mul_idx(a, b)) != full {
            return Err(RingError::AxiomViolation {
                law: "closure under matrix multiplication",
                a,
                b,
                c: 0,
            });
        }
        // additive closure is entrywise, so it suffices to compare the sum too
        let sum: Vec<Idx> = da
            .iter()
            .zip(&db)
            .map(|(&x, &y)| base.add_idx(x, y))
            .collect();
        if dense_of(p, m, ring.add_idx(a, b)) != sum {
            return Err(RingError::AxiomViolation {
                law: "closure under matrix addition",
                a,
                b,
                c: 0,
            });
        }
        Ok(())
    };
    let order = ring.order();
    if order.saturating_mul(order) <= pair_cap {
        for a in 0..order as Idx {
            for b in 0..order as Idx {
                check(a, b)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            check(
                rng.gen_range(0..order) as Idx,
                rng.gen_range(0..order) as Idx,
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{check_axioms, AxiomMode, Value};

    fn z(n: u64) -> Ring {
        make_zn(n).unwrap()
    }

    #[test]
    fn residue_arithmetic() {
        let z4 = z(4);
        assert_eq!(z4.add_idx(3, 3), 2);
        assert_eq!(z4.mul_idx(2, 2), 0);
        assert_eq!(z4.neg_idx(1), 3);
        assert_eq!(z(2).neg_idx(1), 1);
        assert_eq!(z(1).order(), 1);
        assert_eq!(z(1).one_idx(), 0);
        assert!(make_zn(0).is_err());
    }

    #[test]
    fn trivial_extension_products() {
        let t = make_trivial_extension(&z(4)).unwrap();
        let p = |r, m| {
            t.encode(&Value::pair(Value::int(r), Value::int(m)))
                .unwrap()
        };
        assert_eq!(t.add_idx(p(2, 1), p(2, 3)), p(0, 0));
        assert_eq!(t.mul_idx(p(2, 0), p(2, 1)), p(0, 2));
        assert_eq!(t.one_idx(), p(1, 0));
        for m in 0..4 {
            assert_eq!(t.mul_idx(p(0, m), p(0, m)), 0);
        }
    }

    #[test]
    fn matrix_orders_and_units() {
        let m = make_matrix(&z(2), 2).unwrap();
        assert_eq!(m.order(), 16);
        assert_eq!(make_upper_triangular(&z(2), 2).unwrap().order(), 8);
        let e11 = m.encode(&Value::int_matrix(&[[1, 0], [0, 0]])).unwrap();
        let e12 = m.encode(&Value::int_matrix(&[[0, 1], [0, 0]])).unwrap();
        assert_eq!(m.mul_idx(e11, e12), e12);
        assert_eq!(m.mul_idx(e12, e11), 0);
        let ut = make_upper_triangular(&z(2), 2).unwrap();
        assert!(ut.encode(&Value::int_matrix(&[[0, 0], [1, 0]])).is_none());
    }

    #[test]
    fn tnk_orders() {
        assert_eq!(make_tnk(&z(2), 3, 1).unwrap().order(), 16);
        assert_eq!(make_tnk(&z(2), 3, 2).unwrap().order(), 8);
        assert_eq!(make_tnk(&z(4), 4, 2).unwrap().order(), 1024);
        assert!(make_tnk(&z(2), 3, 3).is_err());
        assert!(make_tnk(&z(2), 1, 1).is_err());
        assert!(matches!(
            make_matrix(&z(4), 3),
            Err(RingError::OrderOverflow { .. })
        ));
    }

    #[test]
    fn tnk_layout_matches_display() {
        // T_4^2: x1 on the diagonal, x2 on the first superdiagonal, free a13, a14, a24
        let t = make_tnk(&z(7), 4, 2).unwrap();
        let v = Value::int_tnk(&[1, 2], &[3, 4, 5]);
        let idx = t.encode(&v).unwrap();
        let e = matrix_entries(&t, idx).unwrap();
        assert_eq!(e, vec![1, 2, 3, 4, 0, 1, 2, 5, 0, 0, 1, 2, 0, 0, 0, 1]);
        assert_eq!(from_matrix_entries(&t, &e), Some(idx));
        assert_eq!(t.decode(idx), v);
    }

    #[test]
    fn poly_mod_truncates() {
        let r = make_poly_mod(&z(2), 3).unwrap();
        let x = r.encode(&Value::int_poly(&[0, 1, 0])).unwrap();
        let x2 = r.encode(&Value::int_poly(&[0, 0, 1])).unwrap();
        assert_eq!(r.mul_idx(x, x), x2);
        assert_eq!(r.mul_idx(x, x2), 0);
        let p = make_poly_mod(&z(2), 2).unwrap();
        let px = p.encode(&Value::int_poly(&[0, 1])).unwrap();
        assert!(p.is_nilpotent_idx(px));
    }

    #[test]
    fn product_matches_z6_under_crt() {
        let p = make_product(&[z(2), z(3)]).unwrap();
        let z6 = z(6);
        let crt = |x: u32| {
            p.encode(&Value::int_tuple(&[(x % 2) as u64, (x % 3) as u64]))
                .unwrap()
        };
        for a in 0..6 {
            for b in 0..6 {
                assert_eq!(crt(z6.mul_idx(a, b)), p.mul_idx(crt(a), crt(b)));
                assert_eq!(crt(z6.add_idx(a, b)), p.add_idx(crt(a), crt(b)));
            }
        }
        let e = p.encode(&Value::int_tuple(&[1, 0])).unwrap();
        assert!(p.is_central_idx(e));
        assert!(p.element(e).is_idempotent());
    }

    #[test]
    fn constructed_rings_satisfy_axioms() {
        let rings = [
            make_product(&[z(2), z(2)]).unwrap(),
            make_matrix(&z(2), 2).unwrap(),
            make_upper_triangular(&z(3), 2).unwrap(),
            make_trivial_extension(&z(4)).unwrap(),
            make_poly_mod(&z(2), 3).unwrap(),
            make_tnk(&z(2), 3, 2).unwrap(),
            make_tnk(&z(2), 4, 2).unwrap(),
            make_tnk(&z(4), 3, 1).unwrap(),
            make_opposite(&make_upper_triangular(&z(2), 2).unwrap()),
        ];
        for r in &rings {
            check_axioms(r, AxiomMode::auto(r.order(), 64, 11)).unwrap();
            check_matrix_closure(r, 1 << 16, 10_000, 5).unwrap();
        }
    }

    #[test]
    fn large_tnk_is_structural_and_closed() {
        let t = make_tnk(&z(4), 4, 1).unwrap();
        assert_eq!(t.order(), 16_384);
        assert!(!t.is_tabulated());
        check_matrix_closure(&t, 0, 5_000, 3).unwrap();
        check_axioms(
            &t,
            AxiomMode::Sampled {
                samples: 5_000,
                seed: 9,
            },
        )
        .unwrap();
    }

    #[test]
    fn descriptor_display() {
        let t = make_tnk(&z(4), 3, 1).unwrap();
        assert_eq!(t.label(), "Tnk(Z(4), 3, 1)");
        let p = make_product(&[z(2), z(3)]).unwrap();
        assert_eq!(p.label(), "Prod(Z(2), Z(3))");
        assert_eq!(make_poly_mod(&z(2), 2).unwrap().label(), "PolyMod(Z(2), 2)");
    }
}
