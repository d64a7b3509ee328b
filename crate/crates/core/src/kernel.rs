//! Empirical rank of the ℤ-module spanned by the p-kernel of a sequence.
//!
//! Kernel subsequences `a(p^e n + i)` are compared through their first `L`
//! terms. Nodes are explored breadth first from `a` itself; a node whose
//! prefix lies in the span of the prefixes already collected is not
//! expanded, since the decimation maps are linear and its children are then
//! spanned by the children of the basis nodes.

use std::collections::{HashMap, HashSet, VecDeque};
use std::io::Write;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lengyel::Lengyel;
use crate::linalg::integer_rank;
use crate::periods::PeriodData;
use crate::primes::{primes_up_to, Prime, PrimeClass};
use crate::rep::LinearRep;

/// The subsequence `a(p^depth · n + offset)`, `0 <= offset < p^depth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct KernelNode {
    pub depth: u32,
    pub offset: u64,
}

impl KernelNode {
    pub const ROOT: KernelNode = KernelNode {
        depth: 0,
        offset: 0,
    };

    pub fn stride(&self, p: u64) -> Option<u64> {
        p.checked_pow(self.depth)
    }

    /// `(depth + 1, offset + j·p^depth)` for `0 <= j < p`.
    pub fn children(&self, p: u64) -> Option<Vec<KernelNode>> {
        let stride = self.stride(p)?;
        (0..p)
            .map(|j| {
                Some(KernelNode {
                    depth: self.depth + 1,
                    offset: self.offset.checked_add(j.checked_mul(stride)?)?,
                })
            })
            .collect()
    }
}

/// Nonzero entries `(index, value)` of a vector, sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SparseVec(pub Vec<(u32, i64)>);

impl SparseVec {
    pub fn from_dense(values: &[i64]) -> Self {
        SparseVec(
            values
                .iter()
                .enumerate()
                .filter(|(_, &v)| v != 0)
                .map(|(i, &v)| (i as u32, v))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Divided by the gcd of its entries, with a positive leading entry.
    fn primitive(&self) -> SparseVec {
        let g = self.0.iter().fold(0i64, |g, &(_, v)| g.gcd(&v));
        if g == 0 {
            return SparseVec::default();
        }
        let g = if self.0[0].1 < 0 { -g } else { g };
        SparseVec(self.0.iter().map(|&(i, v)| (i, v / g)).collect())
    }
}

/// A sequence that can be sampled along arithmetic progressions.
pub trait SequenceOracle: Sync {
    fn term(&self, n: u64) -> i64;

    /// Terms `a(start + stride·t)` for `0 <= t < len`.
    fn progression(&self, start: u64, stride: u64, len: usize) -> SparseVec {
        SparseVec(
            (0..len as u64)
                .filter_map(|t| {
                    let v = self.term(start + stride * t);
                    (v != 0).then_some((t as u32, v))
                })
                .collect(),
        )
    }
}

impl<F: Fn(u64) -> i64 + Sync> SequenceOracle for F {
    fn term(&self, n: u64) -> i64 {
        self(n)
    }
}

/// `a(n) = ν_p(F_{n+1})` from the closed form.
#[derive(Debug, Clone, Copy)]
pub struct FibValuationSequence {
    formula: Lengyel,
}

impl FibValuationSequence {
    pub fn new(formula: Lengyel) -> Self {
        FibValuationSequence { formula }
    }
}

impl SequenceOracle for FibValuationSequence {
    fn term(&self, n: u64) -> i64 {
        self.formula.valuation_unchecked(n + 1) as i64
    }

    /// Only indices with `α(p) | start + stride·t + 1` are nonzero (for every
    /// prime, including 2 and 5), so just those are visited.
    fn progression(&self, start: u64, stride: u64, len: usize) -> SparseVec {
        let alpha = self.formula.alpha() as i128;
        let stride_mod = stride as i128 % alpha;
        let target = (-(start as i128 + 1)).rem_euclid(alpha);
        // stride·t ≡ target (mod α)
        let g = stride_mod.extended_gcd(&alpha);
        if target % g.gcd != 0 {
            return SparseVec::default();
        }
        let step = (alpha / g.gcd) as u64;
        let first = ((target / g.gcd) * g.x).rem_euclid(step as i128) as u64;
        let mut out = Vec::with_capacity(len / step as usize + 1);
        let mut t = first;
        while t < len as u64 {
            let m = start + stride * t + 1;
            let v = self.formula.valuation_unchecked(m) as i64;
            if v != 0 {
                out.push((t as u32, v));
            }
            t += step;
        }
        SparseVec(out)
    }
}

/// Row-echelon basis over ℤ of sparse integer vectors; every row has a
/// distinct leading index.
#[derive(Debug, Default)]
struct EchelonBasis {
    rows: Vec<SparseVec>,
    by_lead: HashMap<u32, usize>,
    seen: HashSet<SparseVec>,
}

fn combine(a: &SparseVec, ca: i128, b: &SparseVec, cb: i128) -> Result<Vec<(u32, i128)>> {
    // ca·a - cb·b
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.0.len() + b.0.len());
    let mul = |c: i128, v: i64| c.checked_mul(v as i128).ok_or(Error::Overflow);
    while i < a.0.len() || j < b.0.len() {
        let ia = a.0.get(i).map_or(u32::MAX, |e| e.0);
        let jb = b.0.get(j).map_or(u32::MAX, |e| e.0);
        let (idx, v) = if ia < jb {
            i += 1;
            (ia, mul(ca, a.0[i - 1].1)?)
        } else if jb < ia {
            j += 1;
            (jb, -mul(cb, b.0[j - 1].1)?)
        } else {
            i += 1;
            j += 1;
            let v = mul(ca, a.0[i - 1].1)?
                .checked_sub(mul(cb, b.0[j - 1].1)?)
                .ok_or(Error::Overflow)?;
            (ia, v)
        };
        if v != 0 {
            out.push((idx, v));
        }
    }
    Ok(out)
}

fn shrink(entries: Vec<(u32, i128)>) -> Result<SparseVec> {
    let g = entries.iter().fold(0i128, |g, &(_, v)| g.gcd(&v));
    let g = if g == 0 { 1 } else { g };
    entries
        .into_iter()
        .map(|(i, v)| {
            i64::try_from(v / g)
                .map(|v| (i, v))
                .map_err(|_| Error::Overflow)
        })
        .collect::<Result<Vec<_>>>()
        .map(SparseVec)
}

impl EchelonBasis {
    fn len(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it is independent of the rows; returns whether it was.
    fn insert(&mut self, v: SparseVec) -> Result<bool> {
        let key = v.primitive();
        if key.is_zero() || !self.seen.insert(key.clone()) {
            return Ok(false);
        }
        let mut v = key;
        while let Some(&(lead, lead_value)) = v.0.first() {
            let Some(&row) = self.by_lead.get(&lead) else {
                break;
            };
            let pivot = &self.rows[row];
            let pivot_value = pivot.0[0].1;
            let g = pivot_value.gcd(&lead_value);
            v = shrink(combine(
                &v,
                (pivot_value / g) as i128,
                pivot,
                (lead_value / g) as i128,
            )?)?;
        }
        if v.is_zero() {
            return Ok(false);
        }
        let v = v.primitive();
        debug_assert!(v.0[0].1 != 0);
        self.by_lead.insert(v.0[0].0, self.rows.len());
        self.rows.push(v);
        Ok(true)
    }

    /// Leading entries are nonzero and their indices distinct, so the rows
    /// are independent and the echelon form has no zero row.
    fn is_echelon(&self) -> bool {
        let leads: HashSet<u32> = self
            .rows
            .iter()
            .filter_map(|r| r.0.first().map(|e| e.0))
            .collect();
        leads.len() == self.rows.len() && self.rows.iter().all(|r| !r.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exploration {
    pub truncation: usize,
    pub rank: usize,
    pub basis: Vec<KernelNode>,
    pub nodes_tested: usize,
    pub depth_explored: u32,
    /// An independent node sat at `max_depth`, so its children went unseen.
    pub depth_exhausted: bool,
    /// Independent nodes found among children of dependent nodes (cross-check
    /// mode only); nonzero means the truncation is too short.
    pub probe_gains: usize,
}

const BATCH: usize = 64;

/// One breadth-first closure at a fixed truncation.
pub fn explore_kernel(
    p: u64,
    seq: &dyn SequenceOracle,
    truncation: usize,
    max_depth: u32,
    cross_check: bool,
) -> Result<Exploration> {
    if p < 2 {
        return Err(Error::InvalidBase(p));
    }
    if truncation < 2 || truncation > u32::MAX as usize {
        return Err(Error::InvalidArgument(format!(
            "truncation must be in [2, 2^32), got {truncation}"
        )));
    }
    let mut basis = EchelonBasis::default();
    let mut out = Exploration {
        truncation,
        rank: 0,
        basis: Vec::new(),
        nodes_tested: 0,
        depth_explored: 0,
        depth_exhausted: false,
        probe_gains: 0,
    };
    // (node, is a child of a dependent node)
    let mut queue: VecDeque<(KernelNode, bool)> = VecDeque::from([(KernelNode::ROOT, false)]);
    while !queue.is_empty() {
        let batch: Vec<(KernelNode, bool)> = queue.drain(..queue.len().min(BATCH)).collect();
        let vectors = batch
            .par_iter()
            .map(|(node, _)| {
                let stride = node.stride(p).ok_or(Error::Overflow)?;
                stride
                    .checked_mul(truncation as u64)
                    .and_then(|x| x.checked_add(node.offset + 1))
                    .ok_or(Error::Overflow)?;
                Ok(seq.progression(node.offset, stride, truncation))
            })
            .collect::<Result<Vec<_>>>()?;
        for ((node, probe), v) in batch.into_iter().zip(vectors) {
            out.nodes_tested += 1;
            out.depth_explored = out.depth_explored.max(node.depth);
            let independent = basis.insert(v)?;
            if independent {
                out.basis.push(node);
                if probe {
                    out.probe_gains += 1;
                }
            }
            let expand = independent || (cross_check && !probe);
            if !expand {
                continue;
            }
            if node.depth >= max_depth {
                if independent {
                    out.depth_exhausted = true;
                }
                continue;
            }
            let children = node.children(p).ok_or(Error::Overflow)?;
            queue.extend(children.into_iter().map(|c| (c, !independent)));
        }
    }
    assert!(basis.is_echelon(), "echelon basis lost a pivot");
    out.rank = basis.len();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelConfig {
    /// Prefix length; `None` picks `max(1024, 8·p·α(p))`.
    pub truncation: Option<usize>,
    pub max_depth: u32,
    /// How many times the truncation is doubled when testing stabilization.
    pub doublings: u32,
    pub cross_check: bool,
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig {
            truncation: None,
            max_depth: 16,
            doublings: 2,
            cross_check: false,
        }
    }
}

pub fn default_truncation(p: u64, alpha: u64) -> usize {
    1024usize.max((8 * p * alpha) as usize)
}

/// Rank bound proved for `ν_p(F_{n+1})` in `p`'s class (exact for 2 and 5).
pub fn theorem_bound(p: Prime) -> usize {
    let p_val = p.get() as usize;
    match p.class() {
        PrimeClass::Two => 5,
        PrimeClass::Five => 2,
        PrimeClass::OneFourMod5 => p_val,
        PrimeClass::ThirteenSeventeenMod20 => (p_val + 3) / 2,
        PrimeClass::ThreeSevenMod20 => p_val + 2,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankReport {
    pub p: u64,
    pub class: PrimeClass,
    pub alpha: u64,
    pub pisano: u64,
    pub rank: usize,
    pub theorem_bound: usize,
    pub alpha_plus_one: u64,
    /// `rank = α(p) + 1`; `None` for 2 and 5, which the conjecture excludes,
    /// and for unstabilized runs.
    pub conjecture_holds: Option<bool>,
    pub truncation_length: usize,
    pub depth_explored: u32,
    pub stabilized: bool,
    /// `(truncation, rank)` for every run.
    pub ranks_by_truncation: Vec<(usize, usize)>,
    pub nodes_tested: usize,
    pub probe_gains: usize,
}

impl RankReport {
    pub fn within_bound(&self) -> bool {
        self.rank <= self.theorem_bound
    }

    /// A stabilized rank above the proved bound.
    pub fn violates_bound(&self) -> bool {
        self.stabilized && !self.within_bound()
    }

    pub const CSV_HEADER: [&'static str; 10] = [
        "prime",
        "class",
        "alpha",
        "pisano",
        "rank",
        "theorem_bound",
        "alpha_plus_1",
        "conjecture_holds",
        "L",
        "stabilized",
    ];

    pub fn csv_record(&self) -> [String; 10] {
        [
            self.p.to_string(),
            self.class.name().to_string(),
            self.alpha.to_string(),
            self.pisano.to_string(),
            self.rank.to_string(),
            self.theorem_bound.to_string(),
            self.alpha_plus_one.to_string(),
            self.conjecture_holds
                .map_or_else(String::new, |b| b.to_string()),
            self.truncation_length.to_string(),
            self.stabilized.to_string(),
        ]
    }
}

/// Writes reports as CSV in the order given.
pub fn write_rank_csv<W: Write>(reports: &[RankReport], out: W) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(RankReport::CSV_HEADER)?;
    for r in reports {
        writer.write_record(r.csv_record())?;
    }
    writer.flush()
}

/// Rank of the p-kernel of `ν_p(F_{n+1})`.
pub fn kernel_rank(p: u64, config: &KernelConfig) -> Result<RankReport> {
    let prime = Prime::new(p)?;
    let seq = FibValuationSequence::new(Lengyel::new(prime)?);
    kernel_rank_with(p, &seq, config)
}

/// Rank of the p-kernel of an arbitrary sequence; the period fields of the
/// report still describe `p`.
pub fn kernel_rank_with(
    p: u64,
    seq: &dyn SequenceOracle,
    config: &KernelConfig,
) -> Result<RankReport> {
    let prime = Prime::new(p)?;
    let periods = PeriodData::compute(p)?;
    let base = config
        .truncation
        .unwrap_or_else(|| default_truncation(p, periods.restricted));
    let mut runs = Vec::new();
    for k in 0..=config.doublings {
        let len = base.checked_shl(k).ok_or(Error::Overflow)?;
        runs.push(explore_kernel(
            p,
            seq,
            len,
            config.max_depth,
            config.cross_check,
        )?);
    }
    let last = runs.last().expect("at least one run");
    let stabilized = runs
        .iter()
        .all(|r| r.rank == last.rank && !r.depth_exhausted)
        && runs.iter().all(|r| r.probe_gains == 0);
    let conjecture_holds =
        (stabilized && !matches!(p, 2 | 5)).then_some(last.rank as u64 == periods.restricted + 1);
    Ok(RankReport {
        p,
        class: prime.class(),
        alpha: periods.restricted,
        pisano: periods.pisano,
        rank: last.rank,
        theorem_bound: theorem_bound(prime),
        alpha_plus_one: periods.restricted + 1,
        conjecture_holds,
        truncation_length: base,
        depth_explored: last.depth_explored,
        stabilized,
        ranks_by_truncation: runs.iter().map(|r| (r.truncation, r.rank)).collect(),
        nodes_tested: runs.iter().map(|r| r.nodes_tested).sum(),
        probe_gains: runs.iter().map(|r| r.probe_gains).sum(),
    })
}

/// [`kernel_rank`] for every prime `<= p_max`, sorted by prime.
pub fn conjecture_scan(p_max: u64, config: &KernelConfig) -> Result<Vec<RankReport>> {
    primes_up_to(p_max)
        .into_par_iter()
        .map(|p| kernel_rank(p, config))
        .collect()
}

/// Rank of the module spanned by the generator sequences of `rep`, each cut
/// to its first `truncation` terms.
pub fn rank_of_rep(rep: &LinearRep, truncation: usize) -> usize {
    let rows: Vec<_> = (0..rep.rank())
        .into_par_iter()
        .map(|g| {
            (0..truncation as u64)
                .map(|n| rep.generator_value(g, n))
                .collect::<Vec<_>>()
        })
        .collect();
    integer_rank(&rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::{build_nu_k, build_p2, build_thm14};
    use proptest::prelude::*;

    fn small_config() -> KernelConfig {
        KernelConfig {
            truncation: Some(512),
            ..KernelConfig::default()
        }
    }

    #[test]
    fn children_layout() {
        let node = KernelNode {
            depth: 2,
            offset: 7,
        };
        let kids = node.children(3).unwrap();
        assert_eq!(kids.len(), 3);
        assert_eq!(
            kids[2],
            KernelNode {
                depth: 3,
                offset: 7 + 2 * 9
            }
        );
        assert!(KernelNode {
            depth: 40,
            offset: 0
        }
        .children(3)
        .is_none());
    }

    #[test]
    fn sparse_progression_matches_dense() {
        for p in [2u64, 3, 5, 7, 11, 13, 29] {
            let seq = FibValuationSequence::new(Lengyel::new(Prime::new(p).unwrap()).unwrap());
            let dense = |n: u64| seq.term(n);
            for depth in 0..4 {
                let stride = p.pow(depth);
                for offset in (0..stride).step_by(((stride / 5).max(1)) as usize) {
                    assert_eq!(
                        seq.progression(offset, stride, 700),
                        SequenceOracle::progression(&dense, offset, stride, 700),
                        "p = {p}, stride = {stride}, offset = {offset}"
                    );
                }
            }
        }
    }

    #[test]
    fn nu_k_plus_one_has_rank_two() {
        for k in [2u64, 3, 7, 10] {
            let seq = move |n: u64| crate::fib::nu(k, n + 1).unwrap() as i64;
            let e = explore_kernel(k, &seq, 2048, 12, false).unwrap();
            assert_eq!(e.rank, 2, "k = {k}");
            assert!(!e.depth_exhausted);
        }
    }

    #[test]
    fn small_primes() {
        let r = kernel_rank(2, &small_config()).unwrap();
        assert_eq!((r.rank, r.theorem_bound), (5, 5));
        assert!(r.stabilized);
        assert_eq!(r.conjecture_holds, None);
        let r = kernel_rank(5, &small_config()).unwrap();
        assert_eq!(r.rank, 2);
        let r = kernel_rank(11, &KernelConfig::default()).unwrap();
        assert_eq!(r.rank, 11);
        assert_eq!(r.conjecture_holds, Some(true));
        assert_eq!(r.truncation_length, 1024);
        assert_eq!(r.ranks_by_truncation.len(), 3);
    }

    #[test]
    fn cross_check_mode_finds_nothing_new() {
        for p in [3u64, 7, 11, 13] {
            let config = KernelConfig {
                cross_check: true,
                ..KernelConfig::default()
            };
            let r = kernel_rank(p, &config).unwrap();
            assert_eq!(r.probe_gains, 0, "p = {p}");
            assert!(r.stabilized);
            assert_eq!(r.rank as u64, r.alpha + 1);
        }
    }

    #[test]
    fn depth_budget_is_reported() {
        let config = KernelConfig {
            max_depth: 1,
            ..small_config()
        };
        let r = kernel_rank(2, &config).unwrap();
        assert!(!r.stabilized);
        assert_eq!(r.conjecture_holds, None);
    }

    #[test]
    fn too_short_prefixes_undercount() {
        // a sequence that is zero on its first 100 terms
        let seq = |n: u64| (n == 150) as i64;
        let e = explore_kernel(3, &seq, 64, 8, false).unwrap();
        assert_eq!(e.rank, 0);
        let e = explore_kernel(3, &seq, 256, 8, false).unwrap();
        assert!(e.rank > 0);
    }

    #[test]
    fn rank_of_representations() {
        assert_eq!(rank_of_rep(&build_nu_k(2).unwrap(), 64), 2);
        assert_eq!(rank_of_rep(&build_p2(), 64), 5);
        let r = rank_of_rep(&build_thm14(29).unwrap(), 2000);
        assert!((15..=29).contains(&r), "rank {r}");
        assert_eq!(rank_of_rep(&build_thm14(11).unwrap(), 2000), 11);
    }

    #[test]
    fn truncation_monotonicity() {
        for p in [3u64, 7, 13, 17] {
            let seq = FibValuationSequence::new(Lengyel::new(Prime::new(p).unwrap()).unwrap());
            let mut prev = 0;
            for len in [8usize, 16, 32, 64, 128, 256, 512, 1024] {
                let rank = explore_kernel(p, &seq, len, 12, false).unwrap().rank;
                assert!(rank >= prev, "p = {p}, L = {len}: {rank} < {prev}");
                prev = rank;
            }
        }
    }

    #[test]
    fn csv_layout() {
        let reports = conjecture_scan(7, &small_config()).unwrap();
        let mut buf = Vec::new();
        write_rank_csv(&reports, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "prime,class,alpha,pisano,rank,theorem_bound,alpha_plus_1,conjecture_holds,L,stabilized"
        );
        assert_eq!(lines.next().unwrap(), "2,two,3,3,5,5,4,,512,true");
        assert_eq!(
            lines.next().unwrap(),
            "3,\"3,7 mod 20\",4,8,5,5,5,true,512,true"
        );
        assert_eq!(text.lines().count(), 5);
    }

    /// Dense fraction-free rank of the same prefixes, for cross-checking the
    /// incremental sparse basis.
    fn dense_rank(vectors: &[Vec<i64>]) -> usize {
        crate::linalg::integer_rank_i64(vectors)
    }

    proptest! {
        #[test]
        fn echelon_basis_matches_bareiss(
            rows in proptest::collection::vec(proptest::collection::vec(-3i64..4, 8), 0..10)
        ) {
            let mut basis = EchelonBasis::default();
            for r in &rows {
                basis.insert(SparseVec::from_dense(r)).unwrap();
            }
            prop_assert!(basis.is_echelon());
            prop_assert_eq!(basis.len(), dense_rank(&rows));
        }
    }
}
