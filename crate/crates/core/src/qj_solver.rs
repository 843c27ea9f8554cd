//! The invariants `q_j` and `M(p)`: for each supersingular `j` in F_p, the
//! least `q` with `End(E_j)` isomorphic to `O(q)` or `O'(q)`, found by an
//! ascending sweep over `q` that intersects root sets of class polynomials.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{is_prime, sqrt_mod_prime, PolyRing, PrimeField};
use crate::error::{arg_err, Error, Result};
use crate::hilbert::HilbertCache;
use crate::quad_class::{prime_form_class, QuadForm};
use crate::ss_curves::supersingular_j_list;

pub use crate::quaternion::{q_condition, OrderKind};

/// Mirror mode skips any `q` whose root intersection is not a single point;
/// strict mode first intersects with one more class polynomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Mirror,
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct QjRecord {
    pub j: u64,
    pub q: u64,
    pub kind: OrderKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedQ {
    pub q: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MpResult {
    pub p: u64,
    /// The `q` at which the sweep terminated.
    #[serde(rename = "M")]
    pub m: u64,
    pub mode: Mode,
    /// First hit for each `j`, sorted by `j`.
    pub records: Vec<QjRecord>,
    pub skipped_q: Vec<SkippedQ>,
    /// Non-principal ideal classes of `Q(sqrt(-p))` met during the sweep.
    pub xe_classes: usize,
}

impl MpResult {
    pub fn record_for(&self, j: u64) -> Option<&QjRecord> {
        self.records.iter().find(|r| r.j == j)
    }

    /// `p,M,M/sqrt(p),M/(p log^2 p)` with two and three decimals.
    pub fn csv_row(&self) -> String {
        csv_row(self.p, self.m)
    }
}

pub const CSV_HEADER: &str = "p,M,M_over_sqrtp,M_over_plog2p";

pub fn csv_row(p: u64, m: u64) -> String {
    let pf = p as f64;
    let lg = pf.ln();
    format!(
        "{p},{m},{:.2},{:.3}",
        m as f64 / pf.sqrt(),
        m as f64 / (pf * lg * lg)
    )
}

/// Published `M(p)` rows for `p < 2000`, in the `CSV_HEADER` format.
pub const PUBLISHED_TABLE: &str = include_str!("../data/mp_tables.csv");

/// The published CSV row for `p`, if the table has one.
pub fn published_row(p: u64) -> Option<&'static str> {
    PUBLISHED_TABLE
        .lines()
        .skip(1)
        .find(|l| l.split(',').next().and_then(|v| v.parse::<u64>().ok()) == Some(p))
}

/// `ceil(p log^2 p)`, the default sweep ceiling.
pub fn default_ceiling(p: u64) -> u64 {
    let lg = (p as f64).ln();
    (p as f64 * lg * lg).ceil() as u64
}

fn fp_roots(cache: &HilbertCache, d: i64, p: u64) -> Result<BTreeSet<u64>> {
    let h = cache.get_mod(d, p)?;
    let ring = PolyRing::new(PrimeField::new(p)?);
    Ok(ring.roots(&h)?.into_iter().map(|r| r.0).collect())
}

/// The discriminants whose class polynomials share the `j` of the order of
/// the given kind and `q`: three for mirror mode, a fourth for strict mode.
pub fn discriminants(q: u64, p: u64, kind: OrderKind) -> Result<[i64; 4]> {
    let (qi, pi) = (q as i64, p as i64);
    Ok(match kind {
        OrderKind::O => {
            let r = sqrt_mod_prime(-pi, q)?
                .ok_or_else(|| Error::Argument(format!("-{p} is not a square mod {q}")))?
                as i64;
            [
                -qi,
                -4 * pi,
                -4 * (r * r + pi) / qi,
                -((2 * r + qi).pow(2) + 4 * pi) / qi,
            ]
        }
        OrderKind::OPrime => {
            let m = 4 * qi;
            let r = (0..m)
                .find(|&r| (r * r + pi) % m == 0)
                .ok_or_else(|| Error::Argument(format!("-{p} is not a square mod {m}")))?;
            [
                -pi,
                -4 * qi,
                -(r * r + pi) / qi,
                -((r + 2 * qi).pow(2) + pi) / qi,
            ]
        }
    })
}

/// Common F_p-roots of the class polynomials for `(q, kind)`.
pub fn candidate_js(
    q: u64,
    p: u64,
    kind: OrderKind,
    mode: Mode,
    cache: &HilbertCache,
) -> Result<BTreeSet<u64>> {
    let ds = discriminants(q, p, kind)?;
    let mut a = fp_roots(cache, ds[0], p)?;
    for &d in &ds[1..3] {
        if a.is_empty() {
            break;
        }
        let b = fp_roots(cache, d, p)?;
        a.retain(|x| b.contains(x));
    }
    if mode == Mode::Strict && a.len() > 1 {
        let b = fp_roots(cache, ds[3], p)?;
        a.retain(|x| b.contains(x));
    }
    Ok(a)
}

/// The `j` with `End(E_j) = O(q)`, or `None` when the intersection of root
/// sets is not a single point.
pub fn j_from_q(q: u64, p: u64, cache: &HilbertCache) -> Result<Option<u64>> {
    if !q_condition(q, p) {
        return arg_err(format!("q = {q} fails q = 3 mod 8, (p/q) = -1 for p = {p}"));
    }
    let a = candidate_js(q, p, OrderKind::O, Mode::Mirror, cache)?;
    Ok(if a.len() == 1 { a.first().copied() } else { None })
}

/// `j_q` for every admissible `q <= q_max`, computed in parallel.
pub fn sweep_qj(p: u64, q_max: u64, cache: &HilbertCache) -> Result<Vec<(u64, Option<u64>)>> {
    let qs: Vec<u64> = (3..=q_max).filter(|&q| q_condition(q, p)).collect();
    qs.par_iter()
        .map(|&q| j_from_q(q, p, cache).map(|j| (q, j)))
        .collect()
}

fn check_p(p: u64) -> Result<()> {
    if p <= 3 || !is_prime(p) {
        return arg_err(format!("{p} is not a prime greater than 3"));
    }
    Ok(())
}

/// Sweeps admissible `q` in ascending order until every supersingular `j`
/// in F_p is accounted for, returning the final `q` as `M(p)`.
///
/// For `p = 1 mod 4` only `O(q)` occurs. For `p = 3 mod 4` the `O'(q)`
/// side is counted through the ideal classes of the primes above `q` in
/// `Q(sqrt(-p))`: each pair of non-principal classes `{[a], [a]^-1}` is one
/// further vertex, and `j = 1728` carries `O'(1)`.
pub fn compute_mp(p: u64, q_ceiling: Option<u64>, mode: Mode, cache: &HilbertCache) -> Result<MpResult> {
    check_p(p)?;
    let ceiling = q_ceiling.unwrap_or_else(|| default_ceiling(p));
    let three_mod_4 = p % 4 == 3;
    let target: BTreeSet<u64> = supersingular_j_list(p)?
        .into_iter()
        .filter(|&j| !(three_mod_4 && j == 1728 % p))
        .collect();

    let mut se: BTreeSet<u64> = BTreeSet::new();
    let mut xe: BTreeSet<QuadForm> = BTreeSet::new();
    let mut records: BTreeMap<u64, QjRecord> = BTreeMap::new();
    let mut skipped = Vec::new();
    // O'(q) classes whose root intersection was not a single point.
    let mut pending: Vec<(u64, BTreeSet<u64>)> = Vec::new();
    if three_mod_4 {
        records.insert(1728 % p, QjRecord { j: 1728 % p, q: 1, kind: OrderKind::OPrime });
    }

    let chunk = 4 * rayon::current_num_threads().max(1);
    let mut next_q = 3u64;
    let mut terminated: Option<u64> = None;
    // The comparison runs after every prime q >= 3, so an empty target stops
    // the sweep at q = 3 whether or not 3 is admissible.
    if target.is_empty() {
        terminated = Some(3);
    }
    'sweep: while terminated.is_none() && next_q <= ceiling {
        let mut batch = Vec::with_capacity(chunk);
        while batch.len() < chunk && next_q <= ceiling {
            if q_condition(next_q, p) {
                batch.push(next_q);
            }
            next_q += 1;
        }
        let found: Vec<Result<BTreeSet<u64>>> = batch
            .par_iter()
            .map(|&q| candidate_js(q, p, OrderKind::O, mode, cache))
            .collect();
        for (&q, a) in batch.iter().zip(found) {
            let a = a?;
            if a.len() == 1 {
                let j = *a.first().unwrap();
                if !(three_mod_4 && j == 1728 % p) && se.insert(j) {
                    records.entry(j).or_insert(QjRecord { j, q, kind: OrderKind::O });
                }
            } else {
                skipped.push(SkippedQ {
                    q,
                    reason: format!("O({q}) root intersection has {} elements", a.len()),
                });
            }
            if three_mod_4 {
                let (f, principal) = prime_form_class(-(p as i64), q)?
                    .ok_or_else(|| Error::Internal(format!("{q} is inert in Q(sqrt(-{p}))")))?;
                if !principal && !xe.contains(&f) {
                    let g = f.inverse().reduce();
                    if g == f {
                        skipped.push(SkippedQ {
                            q,
                            reason: format!("ideal class {f} is its own inverse"),
                        });
                    }
                    xe.insert(f);
                    xe.insert(g);
                    let a = candidate_js(q, p, OrderKind::OPrime, mode, cache)?;
                    if a.len() == 1 {
                        let j = *a.first().unwrap();
                        records.entry(j).or_insert(QjRecord { j, q, kind: OrderKind::OPrime });
                    } else {
                        skipped.push(SkippedQ {
                            q,
                            reason: format!("O'({q}) root intersection has {} elements", a.len()),
                        });
                        pending.push((q, a));
                    }
                }
            }
            if se.len() + xe.len() / 2 == target.len() {
                terminated = Some(q);
                break 'sweep;
            }
        }
    }
    resolve_by_elimination(&mut records, pending);
    let result = MpResult {
        p,
        m: terminated.unwrap_or(0),
        mode,
        records: records.into_values().collect(),
        skipped_q: skipped,
        xe_classes: xe.len(),
    };
    if terminated.is_none() {
        return Err(Error::Incomplete {
            reason: format!(
                "p = {p}: q ceiling {ceiling} reached with {} of {} invariants accounted for",
                se.len() + xe.len() / 2,
                target.len()
            ),
            partial: serde_json::to_string(&result).ok(),
        });
    }
    Ok(result)
}

/// Assigns an ambiguous `O'(q)` class to its only candidate not already
/// carrying another endomorphism ring; repeats until nothing changes.
fn resolve_by_elimination(records: &mut BTreeMap<u64, QjRecord>, mut pending: Vec<(u64, BTreeSet<u64>)>) {
    loop {
        let before = pending.len();
        pending.retain(|(q, cands)| {
            let open: Vec<u64> = cands.iter().copied().filter(|j| !records.contains_key(j)).collect();
            match open.as_slice() {
                [j] => {
                    records.insert(*j, QjRecord { j: *j, q: *q, kind: OrderKind::OPrime });
                    false
                }
                [] => false,
                _ => true,
            }
        });
        if pending.len() == before {
            break;
        }
    }
}

/// `q_j` and the order kind for one supersingular `j` in F_p.
pub fn qj_for_j(p: u64, j: u64, mode: Mode, cache: &HilbertCache) -> Result<QjRecord> {
    check_p(p)?;
    let j = j % p;
    if !supersingular_j_list(p)?.contains(&j) {
        return arg_err(format!("j = {j} is not supersingular over F_{p}"));
    }
    if j == 1728 % p && p % 4 == 3 {
        return Ok(QjRecord { j, q: 1, kind: OrderKind::OPrime });
    }
    if j == 0 {
        return Ok(QjRecord { j, q: 3, kind: OrderKind::O });
    }
    let res = compute_mp(p, None, mode, cache)?;
    res.record_for(j).copied().ok_or_else(|| Error::Incomplete {
        reason: format!("the sweep for p = {p} did not identify the order of j = {j}"),
        partial: serde_json::to_string(&res).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::orders_isomorphic;

    #[test]
    fn condition_examples() {
        assert!(q_condition(11, 101));
        assert!(!q_condition(7, 101));
        assert!(!q_condition(19, 101));
        assert!(q_condition(3, 101));
    }

    #[test]
    fn single_q_examples() {
        let cache = HilbertCache::in_memory();
        assert_eq!(j_from_q(11, 101, &cache).unwrap(), Some(57));
        assert_eq!(j_from_q(59, 101, &cache).unwrap(), Some(59));
        for p in [5u64, 11, 17, 23, 29, 41, 47] {
            assert_eq!(j_from_q(3, p, &cache).unwrap(), Some(0), "p = {p}");
        }
        assert!(j_from_q(7, 101, &cache).is_err());
    }

    #[test]
    fn table_rows() {
        let cache = HilbertCache::in_memory();
        for (p, m) in [(5, 3), (7, 3), (11, 3), (41, 211), (59, 307)] {
            let r = compute_mp(p, None, Mode::Mirror, &cache).unwrap();
            assert_eq!(r.m, m, "p = {p}");
        }
        assert_eq!(csv_row(41, 211), "41,211,32.95,0.373");
        assert_eq!(published_row(41), Some("41,211,32.95,0.373"));
        assert_eq!(published_row(42), None);
    }

    #[test]
    fn records_for_101() {
        let cache = HilbertCache::in_memory();
        let r = compute_mp(101, None, Mode::Mirror, &cache).unwrap();
        let got: Vec<(u64, u64)> = r.records.iter().map(|x| (x.j, x.q)).collect();
        assert_eq!(
            got,
            vec![(0, 3), (3, 139), (21, 163), (57, 11), (59, 59), (64, 83), (66, 67)]
        );
        assert!(r.records.iter().all(|x| x.kind == OrderKind::O));
        assert_eq!(r.m, 163);
    }

    #[test]
    fn o_prime_records_for_311() {
        let cache = HilbertCache::in_memory();
        let r = compute_mp(311, None, Mode::Mirror, &cache).unwrap();
        assert_eq!(r.record_for(225).unwrap(), &QjRecord { j: 225, q: 67, kind: OrderKind::OPrime });
        // O'(419) and O'(107) are isomorphic (14^2 + 311*24^2 = 4*107*419); that
        // order belongs to j = 102.
        assert_eq!(r.record_for(19).unwrap(), &QjRecord { j: 19, q: 523, kind: OrderKind::OPrime });
        assert_eq!(r.record_for(102).unwrap().q, 107);
        assert!(orders_isomorphic(OrderKind::OPrime, 107, 419, 311).unwrap());
        assert_eq!(r.m, 571);
        assert_eq!(r.record_for(197).unwrap().q, 3);
    }

    #[test]
    fn sweep_invariants_below_300() {
        let cache = HilbertCache::in_memory();
        for p in crate::arith::primes_up_to(300).into_iter().filter(|&p| p > 3) {
            let r = compute_mp(p, None, Mode::Mirror, &cache).unwrap();
            let ss = supersingular_j_list(p).unwrap();
            let js: Vec<u64> = r.records.iter().map(|x| x.j).collect();
            assert_eq!(js, ss, "p = {p}: every invariant gets a record");
            if p % 4 == 1 {
                assert!(r.records.iter().all(|x| x.kind == OrderKind::O));
            } else {
                let o_prime = r.records.iter().filter(|x| x.kind == OrderKind::OPrime && x.q > 1).count();
                assert_eq!(2 * o_prime, r.xe_classes, "p = {p}");
            }
            if p != 7 {
                assert_eq!(r.m, r.records.iter().map(|x| x.q).max().unwrap(), "p = {p}");
            }
            for a in &r.records {
                for b in r.records.iter().filter(|b| b.kind == a.kind && b.q < a.q && b.q > 1) {
                    assert!(!orders_isomorphic(a.kind, b.q, a.q, p).unwrap(), "p = {p}: {a:?} vs {b:?}");
                }
            }
        }
    }

    #[test]
    fn ceiling_gives_partial_result() {
        let cache = HilbertCache::in_memory();
        match compute_mp(41, Some(100), Mode::Mirror, &cache) {
            Err(Error::Incomplete { partial: Some(json), .. }) => assert!(json.contains("\"records\"")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn strict_agrees_with_mirror_when_unambiguous() {
        let cache = HilbertCache::in_memory();
        for p in [101u64, 103, 127, 149] {
            let a = compute_mp(p, None, Mode::Mirror, &cache).unwrap();
            let b = compute_mp(p, None, Mode::Strict, &cache).unwrap();
            if a.skipped_q.is_empty() {
                assert_eq!(a.records, b.records);
                assert_eq!(a.m, b.m);
            }
        }
    }
}
