//! Exhaustive exact searches: a box of `(n, l, k, m)`, the `m = 1` branch, and
//! the generalisation `F_n = a^k (b^m - 1)`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fibkit::{fib, fib_table};

/// Inclusive integer range; `lo > hi` is an empty range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Range {
    pub lo: u64,
    pub hi: u64,
}

impl Range {
    pub fn new(lo: u64, hi: u64) -> Self {
        Range { lo, hi }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<u64> {
        self.lo..=self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBox {
    pub n: Range,
    pub l: Range,
    pub k: Range,
    pub m: Range,
}

impl SearchBox {
    pub fn new(n: (u64, u64), l: (u64, u64), k: (u64, u64), m: (u64, u64)) -> Self {
        SearchBox {
            n: Range::new(n.0, n.1),
            l: Range::new(l.0, l.1),
            k: Range::new(k.0, k.1),
            m: Range::new(m.0, m.1),
        }
    }

    /// Box left after both reduction rounds.
    pub fn final_box() -> Self {
        SearchBox::new((9, 869), (3, 18), (3, 24), (2, 27))
    }

    /// Box for the `m = 1` branch, where `n <= 12`.
    pub fn m1_box() -> Self {
        SearchBox::new((1, 12), (3, 12), (1, 12), (1, 1))
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty() || self.l.is_empty() || self.k.is_empty() || self.m.is_empty()
    }
}

impl fmt::Display for SearchBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{},{}:{},{}:{},{}:{}",
            self.n.lo, self.n.hi, self.l.lo, self.l.hi, self.k.lo, self.k.hi, self.m.lo, self.m.hi
        )
    }
}

/// `n_lo:n_hi,l_lo:l_hi,k_lo:k_hi,m_lo:m_hi`
impl FromStr for SearchBox {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected n_lo:n_hi,l_lo:l_hi,k_lo:k_hi,m_lo:m_hi, got {s:?}"));
        let parts: Vec<Range> = s
            .split(',')
            .map(|p| {
                let (a, b) = p.trim().split_once(':').ok_or_else(bad)?;
                Ok(Range::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
            })
            .collect::<Result<_>>()?;
        match parts.as_slice() {
            [n, l, k, m] => Ok(SearchBox { n: *n, l: *l, k: *k, m: *m }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Solution {
    pub n: u64,
    pub l: u64,
    pub k: u64,
    pub m: u64,
}

impl Solution {
    /// `F_n = F_l^k (F_l^m - 1)`, recomputed from scratch.
    pub fn verify(&self) -> bool {
        let fl = fib(self.l);
        fib(self.n) == fl.pow(self.k as u32) * (fl.pow(self.m as u32) - 1u32)
    }

    pub fn row(&self) -> SolutionRow {
        let fl = fib(self.l);
        SolutionRow {
            n: self.n,
            l: self.l,
            k: self.k,
            m: self.m,
            lhs: fib(self.n).to_string(),
            rhs: (fl.pow(self.k as u32) * (fl.pow(self.m as u32) - 1u32)).to_string(),
        }
    }
}

impl fmt::Display for Solution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.n, self.l, self.k, self.m)
    }
}

/// A solution with both sides written out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub n: u64,
    pub l: u64,
    pub k: u64,
    pub m: u64,
    pub lhs: String,
    pub rhs: String,
}

/// Map `F_n -> [n, ...]` for `1 <= n <= n_hi`; the value 1 carries both 1 and 2.
#[derive(Debug, Clone)]
pub struct FibTable {
    index: HashMap<BigInt, Vec<u64>>,
    pub n_hi: u64,
    pub max_value: BigInt,
}

impl FibTable {
    pub fn lookup(&self, v: &BigInt) -> &[u64] {
        self.index.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len(&self) -> usize {
        self.index.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

pub fn build_fib_table(n_hi: u64) -> Result<FibTable> {
    if n_hi < 1 {
        return Err(Error::PreconditionViolated("n_hi must be >= 1".into()));
    }
    let values = fib_table(n_hi);
    let mut index: HashMap<BigInt, Vec<u64>> = HashMap::with_capacity(values.len());
    for (n, v) in values.iter().enumerate().skip(1) {
        index.entry(v.clone()).or_default().push(n as u64);
    }
    Ok(FibTable { index, n_hi, max_value: values[n_hi as usize].clone() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Skip tuples with `n` forced outside `(l-2)(k+m) <= n <= 2 + (l-1)(k+m)`.
    pub prefilter: bool,
    pub jobs: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prefilter: true, jobs: 0 }
    }
}

/// Any solution with `l >= 3` satisfies `(l-2)(k+m) <= n <= 2 + (l-1)(k+m)`.
pub fn size_window(l: u64, k: u64, m: u64) -> (u64, u64) {
    let u = k + m;
    ((l - 2) * u, 2 + (l - 1) * u)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub search_box: SearchBox,
    pub solutions: Vec<Solution>,
    /// `(l, k, m)` tuples whose right-hand side was evaluated.
    pub evaluated: u64,
    /// `(l, k, m)` tuples dropped by the prefilter.
    pub pruned: u64,
}

fn search_slice(b: &SearchBox, table: &FibTable, l: u64, prefilter: bool) -> (Vec<Solution>, u64, u64) {
    let mut found = Vec::new();
    let (mut evaluated, mut pruned) = (0u64, 0u64);
    let fl = fib(l);
    if fl <= BigInt::one() {
        // F_l^m - 1 = 0 never equals F_n for n >= 1
        return (found, 0, (b.k.iter().count() * b.m.iter().count()) as u64);
    }
    let mut flk = fl.pow(b.k.lo as u32);
    for k in b.k.iter() {
        let mut flm = fl.pow(b.m.lo as u32);
        for m in b.m.iter() {
            let (lo, hi) = size_window(l, k, m);
            if prefilter && (hi < b.n.lo || lo > b.n.hi) {
                pruned += 1;
            } else {
                evaluated += 1;
                let v = &flk * (&flm - 1u32);
                if v <= table.max_value {
                    for &n in table.lookup(&v) {
                        if b.n.iter().contains(&n) {
                            found.push(Solution { n, l, k, m });
                        }
                    }
                }
            }
            flm *= &fl;
        }
        flk *= &fl;
    }
    (found, evaluated, pruned)
}

/// Every `(n, l, k, m)` in the box with `F_n = F_l^k (F_l^m - 1)`.
pub fn search_box(b: &SearchBox, opts: &SearchOptions) -> Result<SearchResult> {
    if b.is_empty() || b.n.hi < 1 {
        return Ok(SearchResult { search_box: *b, solutions: Vec::new(), evaluated: 0, pruned: 0 });
    }
    if b.l.lo < 3 && opts.prefilter {
        return Err(Error::PreconditionViolated("the size prefilter needs l >= 3".into()));
    }
    let table = build_fib_table(b.n.hi)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::PreconditionViolated(e.to_string()))?;
    let slices: Vec<_> = pool.install(|| {
        b.l.iter()
            .collect::<Vec<_>>()
            .par_iter()
            .map(|&l| search_slice(b, &table, l, opts.prefilter))
            .collect()
    });
    let mut result = SearchResult { search_box: *b, solutions: Vec::new(), evaluated: 0, pruned: 0 };
    for (found, evaluated, pruned) in slices {
        result.solutions.extend(found);
        result.evaluated += evaluated;
        result.pruned += pruned;
    }
    result.solutions.sort();
    if let Some(s) = result.solutions.iter().find(|s| !s.verify()) {
        return Err(Error::VerificationFailed(format!("{s} does not re-verify")));
    }
    Ok(result)
}

/// The `m = 1` branch: `F_n = F_l^k (F_l - 1)` with `n <= 12`, `l >= 3`, `k >= 1`.
pub fn search_m1_case() -> Result<SearchResult> {
    search_box(&SearchBox::m1_box(), &SearchOptions { prefilter: false, jobs: 1 })
}

/// Keep solutions with `k >= 3`.
pub fn keep_k_at_least_3(solutions: &[Solution]) -> Vec<Solution> {
    let mut out: Vec<_> = solutions.iter().copied().filter(|s| s.k >= 3).collect();
    out.sort();
    out.dedup();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OracleHit {
    pub n: u64,
    pub a: u64,
    pub k: u64,
    pub b: u64,
    pub m: u64,
}

impl OracleHit {
    pub fn verify(&self) -> bool {
        fib(self.n) == BigInt::from(self.a).pow(self.k as u32) * (BigInt::from(self.b).pow(self.m as u32) - 1u32)
    }
}

/// Every `(n, a, k, b, m)` with `a^k (b^m - 1) = F_n`, `n <= n_hi`, over the given ranges.
pub fn open_problem_oracle(a: Range, b: Range, k: Range, m: Range, n_hi: u64) -> Result<Vec<OracleHit>> {
    if (!a.is_empty() && a.lo < 2) || (!b.is_empty() && b.lo < 2) {
        return Err(Error::PreconditionViolated("need a >= 2 and b >= 2".into()));
    }
    if a.is_empty() || b.is_empty() || k.is_empty() || m.is_empty() || n_hi < 1 {
        return Ok(Vec::new());
    }
    let table = build_fib_table(n_hi)?;
    let mut hits: Vec<OracleHit> = a
        .iter()
        .collect::<Vec<_>>()
        .par_iter()
        .flat_map_iter(|&av| {
            let mut out = Vec::new();
            let base = BigInt::from(av);
            let mut ak = base.pow(k.lo as u32);
            for kv in k.iter() {
                if ak > table.max_value {
                    break;
                }
                for bv in b.iter() {
                    let bb = BigInt::from(bv);
                    let mut bm = bb.pow(m.lo as u32);
                    for mv in m.iter() {
                        let v = &ak * (&bm - 1u32);
                        if v > table.max_value {
                            break;
                        }
                        out.extend(table.lookup(&v).iter().map(|&n| OracleHit { n, a: av, k: kv, b: bv, m: mv }));
                        bm *= &bb;
                    }
                }
                ak *= &base;
            }
            out
        })
        .collect();
    hits.sort();
    if let Some(h) = hits.iter().find(|h| !h.verify()) {
        return Err(Error::VerificationFailed(format!("{h:?} does not re-verify")));
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sol(n: u64, l: u64, k: u64, m: u64) -> Solution {
        Solution { n, l, k, m }
    }

    #[test]
    fn table_basics() {
        let t = build_fib_table(3).unwrap();
        assert_eq!(t.lookup(&BigInt::from(1)), &[1, 2]);
        assert_eq!(t.lookup(&BigInt::from(2)), &[3]);
        assert_eq!(build_fib_table(10).unwrap().lookup(&BigInt::from(8)), &[6]);
        let big = build_fib_table(869).unwrap();
        assert_eq!(big.len(), 869);
        assert_eq!(big.max_value.to_string().len(), 182);
    }

    #[test]
    fn final_box_is_empty() {
        let r = search_box(&SearchBox::final_box(), &SearchOptions::default()).unwrap();
        assert!(r.solutions.is_empty());
        let unfiltered = search_box(&SearchBox::final_box(), &SearchOptions { prefilter: false, jobs: 0 }).unwrap();
        assert!(unfiltered.solutions.is_empty());
        assert_eq!(unfiltered.pruned, 0);
    }

    #[test]
    fn m1_branch() {
        assert_eq!(search_m1_case().unwrap().solutions, vec![sol(3, 3, 1, 1), sol(6, 3, 3, 1)]);
        assert_eq!(keep_k_at_least_3(&search_m1_case().unwrap().solutions), vec![sol(6, 3, 3, 1)]);
    }

    #[test]
    fn empty_box() {
        let b = SearchBox::new((1, 10), (5, 4), (1, 3), (1, 3));
        assert!(search_box(&b, &SearchOptions::default()).unwrap().solutions.is_empty());
    }

    #[test]
    fn parse_box() {
        let b: SearchBox = "9:869,3:18,3:24,2:27".parse().unwrap();
        assert_eq!(b, SearchBox::final_box());
        assert_eq!(b.to_string(), "9:869,3:18,3:24,2:27");
        assert!("1:2,3".parse::<SearchBox>().is_err());
    }

    #[test]
    fn oracle_examples() {
        let hits = open_problem_oracle(Range::new(2, 2), Range::new(2, 2), Range::new(3, 3), Range::new(1, 1), 10).unwrap();
        assert!(hits.contains(&OracleHit { n: 6, a: 2, k: 3, b: 2, m: 1 }));
        assert!(open_problem_oracle(Range::new(1, 3), Range::new(2, 3), Range::new(1, 2), Range::new(1, 2), 10).is_err());
    }
}
