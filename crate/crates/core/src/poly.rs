//! Bounded-degree polynomials and the annihilating-pair sweep.
//!
//! A pair `(f, g)` of degree-`d` coefficient vectors is annihilating when the
//! full convolution `f·g` vanishes. The sweep enumerates such pairs in
//! lexicographic order of `(a_0, .., a_d, b_0, .., b_d)` indices, pruning
//! each `b_k` to the solutions of `a_0·b_k = -(a_1·b_{k-1} + .. + a_k·b_0)`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, RingError};
use crate::ring::{Element, Idx, Ring};

#[derive(Clone)]
pub struct BoundedPoly {
    ring: Ring,
    coeffs: Vec<Idx>,
}

impl BoundedPoly {
    /// Coefficients constant term first. An empty list is read as the zero
    /// constant.
    pub fn new(ring: &Ring, coeffs: Vec<Idx>) -> Result<BoundedPoly> {
        if let Some(&bad) = coeffs.iter().find(|&&c| c as usize >= ring.order()) {
            return Err(RingError::NotAnElement {
                ring: ring.label(),
                detail: format!("index {bad}"),
            });
        }
        let coeffs = if coeffs.is_empty() { vec![0] } else { coeffs };
        Ok(BoundedPoly {
            ring: ring.clone(),
            coeffs,
        })
    }

    pub fn from_elements(coeffs: &[Element<'_>]) -> Result<BoundedPoly> {
        let ring = coeffs
            .first()
            .ok_or_else(|| RingError::InvalidParameter("a polynomial needs a coefficient".into()))?
            .ring();
        if coeffs.iter().any(|c| !c.ring().same_ring(ring)) {
            return Err(RingError::MixedRings);
        }
        BoundedPoly::new(ring, coeffs.iter().map(|c| c.index()).collect())
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Length of the coefficient vector minus one; trailing zeros count.
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Idx] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Element<'_> {
        self.ring.element(self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl PartialEq for BoundedPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_ring(&other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for BoundedPoly {}

impl std::fmt::Debug for BoundedPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let vals: Vec<String> = self
            .coeffs
            .iter()
            .map(|&c| self.ring.decode(c).to_string())
            .collect();
        write!(f, "[{}] over {}", vals.join(", "), self.ring.label())
    }
}

/// Full convolution, no truncation.
pub fn conv_mul(f: &BoundedPoly, g: &BoundedPoly) -> Result<BoundedPoly> {
    if !f.ring.same_ring(&g.ring) {
        return Err(RingError::MixedRings);
    }
    Ok(BoundedPoly {
        ring: f.ring.clone(),
        coeffs: convolve(&f.ring, &f.coeffs, &g.coeffs),
    })
}

pub(crate) fn convolve(r: &Ring, a: &[Idx], b: &[Idx]) -> Vec<Idx> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = r.add_idx(out[i + j], r.mul_idx(x, y));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnPairBudget {
    pub max_pairs_examined: u64,
    /// Milliseconds; 0 means no time cap.
    pub elapsed_cap_ms: u64,
}

impl Default for AnnPairBudget {
    fn default() -> Self {
        AnnPairBudget {
            max_pairs_examined: 1_000_000_000,
            elapsed_cap_ms: 0,
        }
    }
}

impl AnnPairBudget {
    pub fn with_max(max_pairs_examined: u64) -> Self {
        AnnPairBudget {
            max_pairs_examined,
            ..Default::default()
        }
    }
}

/// What the sweep does with one annihilating pair.
pub enum Step<T> {
    Skip,
    Keep(T),
    Stop(T),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sweep<T> {
    /// Items returned as [`Step::Keep`], in canonical order.
    pub kept: Vec<T>,
    /// The first [`Step::Stop`] item, if any.
    pub stopped: Option<T>,
    /// Candidate coefficient assignments examined.
    pub work: u64,
}

/// Rows of `a_0` handed to the thread pool at once. Fixed so that budget
/// accounting does not depend on the number of threads.
const CHUNK: usize = 64;

enum RowEnd {
    Done,
    Stopped,
    Limit,
    Timeout,
}

struct Row<T> {
    kept: Vec<T>,
    stopped: Option<T>,
    nodes: u64,
    end: RowEnd,
}

struct RowCtx<'a, F> {
    ring: &'a Ring,
    d: usize,
    visit: &'a F,
    limit: u64,
    start: Instant,
    time_cap: u64,
    row: usize,
    best: &'a AtomicUsize,
}

/// `b` grouped by the value of `a·b`, each group ascending.
struct Fiber {
    offsets: Vec<u32>,
    members: Vec<Idx>,
}

impl Fiber {
    fn new(r: &Ring, a: Idx) -> Fiber {
        let n = r.order();
        let prods: Vec<Idx> = (0..n as Idx).map(|b| r.mul_idx(a, b)).collect();
        let mut offsets = vec![0u32; n + 1];
        for &p in &prods {
            offsets[p as usize + 1] += 1;
        }
        for c in 0..n {
            offsets[c + 1] += offsets[c];
        }
        let mut fill = offsets.clone();
        let mut members = vec![0; n];
        for (b, &p) in prods.iter().enumerate() {
            members[fill[p as usize] as usize] = b as Idx;
            fill[p as usize] += 1;
        }
        Fiber { offsets, members }
    }

    fn solutions(&self, c: Idx) -> &[Idx] {
        &self.members[self.offsets[c as usize] as usize..self.offsets[c as usize + 1] as usize]
    }
}

impl<T, F> RowCtx<'_, F>
where
    F: Fn(&[Idx], &[Idx]) -> Step<T>,
{
    fn run(&self, a0: Idx) -> Row<T> {
        let r = self.ring;
        let n = r.order();
        let fiber = Fiber::new(r, a0);
        let mut out = Row {
            kept: Vec::new(),
            stopped: None,
            nodes: 0,
            end: RowEnd::Done,
        };
        let mut a = vec![0; self.d + 1];
        a[0] = a0;
        let mut b = vec![0; self.d + 1];
        loop {
            if self.best.load(Ordering::Relaxed) < self.row {
                // an earlier row already stopped the sweep
                out.end = RowEnd::Stopped;
                return out;
            }
            if !self.assign(&fiber, &a, &mut b, 0, &mut out) {
                return out;
            }
            // next (a_1, .., a_d) in lexicographic order
            let mut i = self.d;
            loop {
                if i == 0 {
                    return out;
                }
                a[i] += 1;
                if (a[i] as usize) < n {
                    break;
                }
                a[i] = 0;
                i -= 1;
            }
        }
    }

    /// Assigns `b_k` and deeper; false once the row must end.
    fn assign(&self, fiber: &Fiber, a: &[Idx], b: &mut [Idx], k: usize, out: &mut Row<T>) -> bool {
        let r = self.ring;
        let d = self.d;
        let mut s = 0;
        for i in 1..=k {
            s = r.add_idx(s, r.mul_idx(a[i], b[k - i]));
        }
        for &x in fiber.solutions(r.neg_idx(s)) {
            out.nodes += 1;
            if out.nodes > self.limit {
                out.end = RowEnd::Limit;
                return false;
            }
            if self.time_cap > 0
                && out.nodes.is_multiple_of(65_536)
                && self.start.elapsed().as_millis() as u64 > self.time_cap
            {
                out.end = RowEnd::Timeout;
                return false;
            }
            b[k] = x;
            if k < d {
                if !self.assign(fiber, a, b, k + 1, out) {
                    return false;
                }
                continue;
            }
            if !tail_vanishes(r, a, b) {
                continue;
            }
            match (self.visit)(a, b) {
                Step::Skip => {}
                Step::Keep(t) => out.kept.push(t),
                Step::Stop(t) => {
                    out.stopped = Some(t);
                    out.end = RowEnd::Stopped;
                    self.best.fetch_min(self.row, Ordering::Relaxed);
                    return false;
                }
            }
        }
        true
    }
}

/// Coefficients `d+1 ..= 2d` of the convolution are zero.
fn tail_vanishes(r: &Ring, a: &[Idx], b: &[Idx]) -> bool {
    let d = a.len() - 1;
    (d + 1..=2 * d).all(|m| {
        let mut s = 0;
        for i in m - d..=d {
            s = r.add_idx(s, r.mul_idx(a[i], b[m - i]));
        }
        s == 0
    })
}

/// Visits every annihilating pair of degree-`d` coefficient vectors in
/// canonical order until `visit` stops the sweep.
///
/// Work is distributed over `a_0` in parallel; results are merged row by row,
/// so kept items, the stop item and the work count match a sequential run.
pub fn sweep_annihilating<T, F>(
    ring: &Ring,
    d: usize,
    budget: AnnPairBudget,
    visit: F,
) -> Result<Sweep<T>>
where
    T: Send,
    F: Fn(&[Idx], &[Idx]) -> Step<T> + Sync,
{
    if d == 0 {
        return Err(RingError::InvalidParameter(
            "annihilating pairs need degree >= 1".into(),
        ));
    }
    let n = ring.order();
    let start = Instant::now();
    let best = AtomicUsize::new(usize::MAX);
    let mut done = Sweep {
        kept: Vec::new(),
        stopped: None,
        work: 0,
    };
    for chunk_start in (0..n).step_by(CHUNK) {
        let limit = budget.max_pairs_examined - done.work;
        let rows: Vec<Row<T>> = (chunk_start..n.min(chunk_start + CHUNK))
            .into_par_iter()
            .map(|a0| {
                RowCtx {
                    ring,
                    d,
                    visit: &visit,
                    limit,
                    start,
                    time_cap: budget.elapsed_cap_ms,
                    row: a0,
                    best: &best,
                }
                .run(a0 as Idx)
            })
            .collect();
        for row in rows {
            match row.end {
                RowEnd::Limit => {
                    return Err(RingError::BudgetExhausted {
                        examined: budget.max_pairs_examined,
                    })
                }
                RowEnd::Timeout => {
                    return Err(RingError::BudgetExhausted {
                        examined: done.work + row.nodes,
                    })
                }
                _ => {}
            }
            if done.work + row.nodes > budget.max_pairs_examined {
                return Err(RingError::BudgetExhausted {
                    examined: budget.max_pairs_examined,
                });
            }
            done.work += row.nodes;
            done.kept.extend(row.kept);
            if row.stopped.is_some() {
                done.stopped = row.stopped;
                return Ok(done);
            }
        }
        if budget.elapsed_cap_ms > 0 && start.elapsed().as_millis() as u64 > budget.elapsed_cap_ms {
            return Err(RingError::BudgetExhausted {
                examined: done.work,
            });
        }
    }
    Ok(done)
}

/// Every `(a_0, a_1, b_0, b_1)` with `(a_0 + a_1 x)(b_0 + b_1 x) = 0`,
/// lexicographically ordered.
pub fn annihilating_linear_pairs(ring: &Ring, budget: AnnPairBudget) -> Result<Vec<[Idx; 4]>> {
    let s = sweep_annihilating(ring, 1, budget, |a, b| Step::Keep([a[0], a[1], b[0], b[1]]))?;
    Ok(s.kept)
}

/// Every pair of coefficient vectors of degree `<= d` whose product is zero,
/// lexicographically ordered.
pub fn annihilating_pairs_degree(
    ring: &Ring,
    d: usize,
    budget: AnnPairBudget,
) -> Result<Vec<(Vec<Idx>, Vec<Idx>)>> {
    let s = sweep_annihilating(ring, d, budget, |a, b| Step::Keep((a.to_vec(), b.to_vec())))?;
    Ok(s.kept)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{make_matrix, make_opposite, make_trivial_extension, make_zn};
    use crate::ring::Value;

    /// Every tuple of `|R|^(2d+2)`, kept when the product vanishes.
    fn naive(r: &Ring, d: usize) -> Vec<(Vec<Idx>, Vec<Idx>)> {
        let n = r.order() as Idx;
        let len = 2 * d + 2;
        let mut t = vec![0; len];
        let mut out = Vec::new();
        loop {
            let (a, b) = t.split_at(d + 1);
            if convolve(r, a, b).iter().all(|&c| c == 0) {
                out.push((a.to_vec(), b.to_vec()));
            }
            let mut i = len;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                t[i] += 1;
                if t[i] < n {
                    break;
                }
                t[i] = 0;
            }
        }
    }

    #[test]
    fn conv_matches_linear_system() {
        let r = make_trivial_extension(&make_zn(4).unwrap()).unwrap();
        let c = r
            .encode(&Value::pair(Value::int(2), Value::int(0)))
            .unwrap();
        let d = r
            .encode(&Value::pair(Value::int(2), Value::int(1)))
            .unwrap();
        let f = BoundedPoly::new(&r, vec![c, d]).unwrap();
        let sq = conv_mul(&f, &f).unwrap();
        assert_eq!(sq.coeffs(), &[0, 0, 0]);
        let one = BoundedPoly::new(&r, vec![r.one_idx()]).unwrap();
        assert_eq!(conv_mul(&f, &one).unwrap(), f);
        let z = make_zn(4).unwrap();
        let g = BoundedPoly::new(&z, vec![1]).unwrap();
        assert!(matches!(conv_mul(&f, &g), Err(RingError::MixedRings)));
    }

    #[test]
    fn linear_pairs_match_naive_loop() {
        for n in [1, 2, 3, 4, 6] {
            let r = make_zn(n).unwrap();
            let fast = annihilating_linear_pairs(&r, AnnPairBudget::default()).unwrap();
            let slow: Vec<[Idx; 4]> = naive(&r, 1)
                .into_iter()
                .map(|(a, b)| [a[0], a[1], b[0], b[1]])
                .collect();
            assert_eq!(fast, slow, "Z({n})");
        }
        let z2 = annihilating_linear_pairs(&make_zn(2).unwrap(), AnnPairBudget::default()).unwrap();
        assert_eq!(z2.len(), 7);
    }

    #[test]
    fn zero_polynomial_annihilates_everything() {
        let r = make_zn(3).unwrap();
        let pairs = annihilating_linear_pairs(&r, AnnPairBudget::default()).unwrap();
        for b0 in 0..3 {
            for b1 in 0..3 {
                assert!(pairs.contains(&[0, 0, b0, b1]));
            }
        }
    }

    #[test]
    fn degree_two_matches_naive_on_z4() {
        let r = make_zn(4).unwrap();
        let fast = annihilating_pairs_degree(&r, 2, AnnPairBudget::default()).unwrap();
        assert_eq!(fast, naive(&r, 2));
    }

    #[test]
    fn degree_one_agrees_with_linear() {
        let r = make_trivial_extension(&make_zn(2).unwrap()).unwrap();
        let lin = annihilating_linear_pairs(&r, AnnPairBudget::default()).unwrap();
        let deg: Vec<[Idx; 4]> = annihilating_pairs_degree(&r, 1, AnnPairBudget::default())
            .unwrap()
            .into_iter()
            .map(|(a, b)| [a[0], a[1], b[0], b[1]])
            .collect();
        assert_eq!(lin, deg);
    }

    #[test]
    fn example_quadruple_is_present() {
        let r = make_trivial_extension(&make_zn(4).unwrap()).unwrap();
        let c = r
            .encode(&Value::pair(Value::int(2), Value::int(0)))
            .unwrap();
        let d = r
            .encode(&Value::pair(Value::int(2), Value::int(1)))
            .unwrap();
        let pairs = annihilating_linear_pairs(&r, AnnPairBudget::default()).unwrap();
        assert!(pairs.contains(&[c, d, c, d]));
    }

    #[test]
    fn opposite_ring_mirrors_pairs() {
        // f·g = 0 in R iff g·f = 0 in R^op, coefficientwise
        let r = make_matrix(&make_zn(2).unwrap(), 2).unwrap();
        let op = make_opposite(&r);
        let mut left: Vec<[Idx; 4]> = annihilating_linear_pairs(&r, AnnPairBudget::default())
            .unwrap()
            .into_iter()
            .map(|[a0, a1, b0, b1]| [b0, b1, a0, a1])
            .collect();
        left.sort_unstable();
        let right = annihilating_linear_pairs(&op, AnnPairBudget::default()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn thread_count_does_not_change_order_or_work() {
        let r = make_trivial_extension(&make_zn(8).unwrap()).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    sweep_annihilating(&r, 1, AnnPairBudget::default(), |a, b| {
                        Step::Keep((a[0], a[1], b[0], b[1]))
                    })
                    .unwrap()
                })
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn stop_is_canonical_under_parallelism() {
        let r = make_trivial_extension(&make_zn(8).unwrap()).unwrap();
        let find = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| {
                    sweep_annihilating(&r, 1, AnnPairBudget::default(), |a, b| {
                        if r.mul_idx(a[1], b[0]) != 0 {
                            Step::Stop((a.to_vec(), b.to_vec()))
                        } else {
                            Step::<(Vec<Idx>, Vec<Idx>)>::Skip
                        }
                    })
                    .unwrap()
                })
        };
        let one = find(1);
        assert!(one.stopped.is_some());
        assert_eq!(one, find(6));
    }

    #[test]
    fn budget_is_reported() {
        let r = make_zn(8).unwrap();
        let err = annihilating_linear_pairs(&r, AnnPairBudget::with_max(10)).unwrap_err();
        assert_eq!(err, RingError::BudgetExhausted { examined: 10 });
        assert!(
            sweep_annihilating(&r, 0, AnnPairBudget::default(), |_, _| Step::<()>::Skip).is_err()
        );
    }
}
