//! Binomial coefficients, factorials, problem instances (n, k, L), and the
//! decomposition of L into maximal blocks of consecutive integers.

use crate::error::{Error, Result};
use crate::rational::Int;
use num_traits::One;

/// Binomial coefficient C(n, r) in exact integers.
///
/// Returns 0 for r < 0 or r > n. Negative n is rejected: nothing in this
/// library evaluates binomials below the diagonal.
pub fn binom(n: i64, r: i64) -> Int {
    assert!(n >= 0, "binom: negative n ({n}) is not supported");
    if r < 0 || r > n {
        return Int::from(0);
    }
    let r = r.min(n - r);
    let mut acc = Int::one();
    for j in 0..r {
        acc = acc * Int::from(n - j) / Int::from(j + 1);
    }
    acc
}

/// m! in exact integers.
pub fn factorial(m: u64) -> Int {
    let mut acc = Int::one();
    for j in 2..=m {
        acc *= Int::from(j);
    }
    acc
}

/// A problem instance: ground-set size n, block size k, and the set L of
/// allowed intersection sizes, kept sorted and strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LSpec {
    n: u64,
    k: u64,
    ell: Vec<u64>,
}

impl LSpec {
    /// Build an instance. L is canonicalized (sorted, deduplicated); values
    /// must lie in [0, k-1] and n > k >= 1 must hold. Scheme-backed
    /// operations additionally require n >= 2k, checked at their entry points.
    pub fn new(n: u64, k: u64, ell: impl IntoIterator<Item = u64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidSpec("k must be at least 1".into()));
        }
        if n <= k {
            return Err(Error::InvalidSpec(format!("need n > k, got n={n}, k={k}")));
        }
        let mut ell: Vec<u64> = ell.into_iter().collect();
        ell.sort_unstable();
        ell.dedup();
        if let Some(&bad) = ell.iter().find(|&&l| l >= k) {
            return Err(Error::InvalidSpec(format!(
                "intersection size {bad} is out of range [0, {}]",
                k - 1
            )));
        }
        Ok(LSpec { n, k, ell })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// The sorted values of L.
    pub fn ell(&self) -> &[u64] {
        &self.ell
    }

    /// s = |L|.
    pub fn s(&self) -> usize {
        self.ell.len()
    }

    /// Same n, k with L replaced by [0, k-1] \ L.
    pub fn complement(&self) -> LSpec {
        let ell = (0..self.k).filter(|l| !self.ell.contains(l)).collect();
        LSpec {
            n: self.n,
            k: self.k,
            ell,
        }
    }

    /// The nonzero scheme classes i = k - ell meeting the instance, in
    /// increasing order of i. Together with class 0 this is the set M.
    pub fn class_indices(&self) -> Vec<u64> {
        self.ell.iter().rev().map(|l| self.k - l).collect()
    }

    /// Checks the scheme precondition n >= 2k.
    pub fn require_scheme(&self) -> Result<()> {
        if self.n < 2 * self.k {
            Err(Error::SchemePrecondition {
                n: self.n,
                k: self.k,
            })
        } else {
            Ok(())
        }
    }

    /// Membership test for L.
    pub fn allows(&self, intersection: u64) -> bool {
        self.ell.binary_search(&intersection).is_ok()
    }
}

impl std::fmt::Display for LSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ell: Vec<String> = self.ell.iter().map(|l| l.to_string()).collect();
        write!(f, "(n={}, k={}, L={{{}}})", self.n, self.k, ell.join(","))
    }
}

/// One maximal block of consecutive integers inside L.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub start: u64,
    pub len: usize,
}

/// The unique decomposition of L into maximal consecutive blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunDecomposition {
    pub runs: Vec<Run>,
}

impl RunDecomposition {
    /// b, the number of blocks.
    pub fn count(&self) -> usize {
        self.runs.len()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.runs.iter().map(|r| r.len).collect()
    }
}

/// Decompose a strictly increasing list into maximal runs of consecutive
/// integers. Empty input yields zero runs.
pub fn full_runs(ell: &[u64]) -> RunDecomposition {
    debug_assert!(ell.windows(2).all(|w| w[0] < w[1]));
    let mut runs = Vec::new();
    let mut iter = ell.iter().copied();
    if let Some(first) = iter.next() {
        let mut start = first;
        let mut len = 1usize;
        let mut prev = first;
        for v in iter {
            if v == prev + 1 {
                len += 1;
            } else {
                runs.push(Run { start, len });
                start = v;
                len = 1;
            }
            prev = v;
        }
        runs.push(Run { start, len });
    }
    RunDecomposition { runs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    /// Pascal-triangle oracle, independent of the multiplicative formula.
    fn binom_pascal(n: usize, r: usize) -> Int {
        let mut row = vec![Int::from(1)];
        for _ in 0..n {
            let mut next = vec![Int::from(1)];
            for j in 1..row.len() {
                next.push(&row[j - 1] + &row[j]);
            }
            next.push(Int::from(1));
            row = next;
        }
        row.get(r).cloned().unwrap_or_default()
    }

    #[test]
    fn binom_small_values() {
        assert_eq!(binom(5, 2), int(10));
        assert_eq!(binom(0, 0), int(1));
        assert_eq!(binom(7, 0), int(1));
        assert_eq!(binom(7, 7), int(1));
        assert_eq!(binom(4, 9), int(0));
    }

    #[test]
    fn binom_negative_r_is_zero() {
        for n in 0..6 {
            assert_eq!(binom(n, -1), int(0));
            assert_eq!(binom(n, -3), int(0));
        }
    }

    #[test]
    fn binom_matches_pascal_oracle() {
        // includes the value frozen from the oracle: C(30,15)
        assert_eq!(binom(30, 15), int(155_117_520));
        for n in 0..=30 {
            for r in 0..=n {
                assert_eq!(binom(n as i64, r as i64), binom_pascal(n, r), "({n},{r})");
            }
        }
    }

    #[test]
    #[should_panic(expected = "negative n")]
    fn binom_rejects_negative_n() {
        binom(-2, 1);
    }

    #[test]
    fn factorial_values() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(1), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(factorial(10), int(3_628_800));
    }

    #[test]
    fn runs_of_mixed_set() {
        let d = full_runs(&[1, 3, 4, 7, 8, 9, 11]);
        assert_eq!(d.count(), 4);
        assert_eq!(d.lengths(), vec![1, 2, 3, 1]);
        assert_eq!(
            d.runs,
            vec![
                Run { start: 1, len: 1 },
                Run { start: 3, len: 2 },
                Run { start: 7, len: 3 },
                Run { start: 11, len: 1 },
            ]
        );
    }

    #[test]
    fn runs_single_block_and_empty() {
        assert_eq!(full_runs(&[0, 1, 2]).lengths(), vec![3]);
        assert_eq!(full_runs(&[]).count(), 0);
    }

    #[test]
    fn complement_examples() {
        let spec = LSpec::new(10, 3, [1]).unwrap();
        assert_eq!(spec.complement().ell(), &[0, 2]);
        let spec = LSpec::new(11, 5, []).unwrap();
        assert_eq!(spec.complement().ell(), &[0, 1, 2, 3, 4]);
        let spec = LSpec::new(9, 4, [0, 1, 2, 3]).unwrap();
        assert_eq!(spec.complement().ell(), &[] as &[u64]);
    }

    #[test]
    fn class_indices_are_increasing() {
        let spec = LSpec::new(12, 5, [0, 2, 3]).unwrap();
        // k - ell for ell = 3, 2, 0
        assert_eq!(spec.class_indices(), vec![2, 3, 5]);
    }

    #[test]
    fn spec_validation() {
        assert!(LSpec::new(3, 3, []).is_err());
        assert!(LSpec::new(4, 0, []).is_err());
        assert!(LSpec::new(8, 3, [3]).is_err());
        // canonicalization: order and duplicates
        let spec = LSpec::new(8, 3, [2, 0, 2]).unwrap();
        assert_eq!(spec.ell(), &[0, 2]);
    }

    /// Run lengths of L equal the nonempty gap-interval lengths of its
    /// complement extended by sentinels -1 and k; exhaustive for k <= 12.
    #[test]
    fn runs_match_complement_gaps() {
        for k in 1u64..=12 {
            for mask in 0u64..(1 << k) {
                let ell: Vec<u64> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
                let spec = LSpec::new(2 * k + 1, k, ell.clone()).unwrap();
                let comp = spec.complement();
                let mut fence: Vec<i64> = vec![-1];
                fence.extend(comp.ell().iter().map(|&l| l as i64));
                fence.push(k as i64);
                let gaps: Vec<usize> = fence
                    .windows(2)
                    .map(|w| (w[1] - w[0] - 1) as usize)
                    .filter(|&g| g > 0)
                    .collect();
                assert_eq!(full_runs(&ell).lengths(), gaps, "k={k} L={ell:?}");
            }
        }
    }

    proptest! {
        #[test]
        fn pascal_rule(n in 1i64..60, r in 0i64..60) {
            prop_assert_eq!(binom(n, r), binom(n - 1, r - 1) + binom(n - 1, r));
        }

        #[test]
        fn complement_is_involution(k in 1u64..12, mask in 0u64..4096) {
            let ell: Vec<u64> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
            let spec = LSpec::new(2 * k + 3, k, ell).unwrap();
            prop_assert_eq!(spec.complement().complement(), spec);
        }

        #[test]
        fn runs_partition_l(k in 1u64..14, mask in 0u64..16384) {
            let ell: Vec<u64> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
            let d = full_runs(&ell);
            // concatenating the runs reproduces L
            let mut rebuilt = Vec::new();
            for r in &d.runs {
                rebuilt.extend((0..r.len as u64).map(|j| r.start + j));
            }
            prop_assert_eq!(rebuilt, ell);
            // maximality: the next run starts past the missing value after
            // the previous one ends
            for w in d.runs.windows(2) {
                prop_assert!(w[1].start > w[0].start + w[0].len as u64);
            }
        }
    }
}
