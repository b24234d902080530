//! Explicit construction of G(n,k,L) at small scale, an exact
//! branch-and-bound independence number as ground truth, and the
//! prime-power family exhibiting the capacity gap.

use crate::asympt::{def_bound, rcw_bound, DefBound};
use crate::combinat::{binom, LSpec};
use crate::error::{Error, Result};
use crate::lp::{sigma, theta};
use crate::rational::{ln_approx, rat_int, Int, Rational};
use num_traits::ToPrimitive;

/// Fixed-width bitset over vertex indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitset::new(len);
        for (i, w) in b.words.iter_mut().enumerate() {
            let remaining = len - i * 64;
            *w = if remaining >= 64 {
                u64::MAX
            } else {
                (1u64 << remaining) - 1
            };
        }
        b
    }

    pub fn insert(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn lowest(&self) -> Option<usize> {
        self.words
            .iter()
            .position(|&w| w != 0)
            .map(|i| i * 64 + self.words[i].trailing_zeros() as usize)
    }

    pub fn intersect_with(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &Bitset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset_of(&self, other: &Bitset) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

/// The graph on all k-subsets of [n] (colex order) with edges exactly
/// between pairs whose intersection size is not in L.
#[derive(Debug, Clone)]
pub struct JohnsonGraph {
    pub spec: LSpec,
    /// Sorted k-subsets in colexicographic order.
    pub vertices: Vec<Vec<u64>>,
    adj: Vec<Bitset>,
}

fn colex_subsets(n: u64, k: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur: Vec<u64> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // smallest position that can advance without colliding
        let mut i = 0;
        while i < k as usize {
            let limit = if i + 1 < k as usize { cur[i + 1] } else { n };
            if cur[i] + 1 < limit {
                break;
            }
            i += 1;
        }
        if i == k as usize {
            return out;
        }
        cur[i] += 1;
        for (j, slot) in cur.iter_mut().enumerate().take(i) {
            *slot = j as u64;
        }
    }
}

fn intersection_size(a: &[u64], b: &[u64]) -> u64 {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

pub fn build_graph(spec: &LSpec, vertex_cap: u64) -> Result<JohnsonGraph> {
    let count = binom(spec.n() as i64, spec.k() as i64);
    if count > Int::from(vertex_cap) {
        return Err(Error::CapExceeded {
            vertices: count.to_u64().unwrap_or(u64::MAX),
            cap: vertex_cap,
        });
    }
    let vertices = colex_subsets(spec.n(), spec.k());
    let v = vertices.len();
    let mut adj = vec![Bitset::new(v); v];
    for a in 0..v {
        for b in a + 1..v {
            if !spec.allows(intersection_size(&vertices[a], &vertices[b])) {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
    }
    Ok(JohnsonGraph {
        spec: spec.clone(),
        vertices,
        adj,
    })
}

impl JohnsonGraph {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> &Bitset {
        &self.adj[v]
    }

    /// Closed-form degree of every vertex:
    /// sum over intersection sizes j outside L of C(k,j) C(n-k,k-j).
    pub fn expected_degree(&self) -> Int {
        let (n, k) = (self.spec.n() as i64, self.spec.k() as i64);
        (0..self.spec.k())
            .filter(|j| !self.spec.allows(*j))
            .map(|j| binom(k, j as i64) * binom(n - k, k - j as i64))
            .sum()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(idx, &a)| {
            set[idx + 1..].iter().all(|&b| !self.adjacent(a, b))
        })
    }
}

/// Outcome of the independence-number search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaResult {
    /// Independence number when exact, otherwise a certified lower bound.
    pub size: u64,
    pub exact: bool,
    /// An independent set attaining `size`, ascending vertex indices.
    pub witness: Vec<usize>,
    /// Branch nodes visited.
    pub nodes: u64,
}

struct Search<'g> {
    adj: &'g [Bitset],
    budget: u64,
    nodes: u64,
    truncated: bool,
    best: u64,
    cur: Vec<usize>,
    witness: Vec<usize>,
}

impl Search<'_> {
    /// Greedy clique partition of `cands`; vertices come back grouped by
    /// clique, paired with the 1-based clique number. Any independent set
    /// inside the first t groups has at most t vertices, so the number is
    /// an upper bound usable for pruning once the list is walked backwards.
    fn clique_cover(&self, cands: &Bitset) -> (Vec<u32>, Vec<u32>) {
        let mut order = Vec::with_capacity(cands.count());
        let mut numbers = Vec::with_capacity(order.capacity());
        let mut uncovered = cands.clone();
        let mut clique = 0u32;
        while let Some(first) = uncovered.lowest() {
            clique += 1;
            let mut avail = uncovered.clone();
            let mut v = first;
            loop {
                order.push(v as u32);
                numbers.push(clique);
                uncovered.remove(v);
                avail.remove(v);
                avail.intersect_with(&self.adj[v]);
                match avail.lowest() {
                    Some(w) => v = w,
                    None => break,
                }
            }
        }
        (order, numbers)
    }

    fn expand(&mut self, cands: Bitset) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            return;
        }
        let (order, numbers) = self.clique_cover(&cands);
        let mut cands = cands;
        for i in (0..order.len()).rev() {
            if self.truncated {
                return;
            }
            if self.cur.len() as u64 + numbers[i] as u64 <= self.best {
                return;
            }
            let v = order[i] as usize;
            let mut next = cands.clone();
            next.remove(v);
            next.subtract(&self.adj[v]);
            self.cur.push(v);
            if self.cur.len() as u64 > self.best {
                self.best = self.cur.len() as u64;
                self.witness = self.cur.clone();
            }
            if !next.is_empty() {
                self.expand(next);
            }
            self.cur.pop();
            cands.remove(v);
        }
    }
}

fn greedy_independent(adj: &[Bitset], seed: &Bitset) -> Vec<usize> {
    let mut picked = Vec::new();
    let mut cands = seed.clone();
    while let Some(v) = cands.lowest() {
        picked.push(v);
        cands.remove(v);
        cands.subtract(&adj[v]);
    }
    picked
}

/// Exact maximum independent set by branch and bound: greedy clique-cover
/// upper bounds, root-level neighborhood domination, deterministic
/// lowest-index tie-breaking throughout. When the node budget runs out the
/// best set found so far is returned with `exact: false`.
pub fn alpha_bruteforce(graph: &JohnsonGraph, node_budget: u64) -> AlphaResult {
    let v = graph.vertex_count();
    let adj = &graph.adj;

    // dominated vertices can be dropped: if the closed neighborhood of w
    // contains that of u, some maximum independent set avoids w
    let closed: Vec<Bitset> = (0..v)
        .map(|i| {
            let mut c = adj[i].clone();
            c.insert(i);
            c
        })
        .collect();
    let mut alive = Bitset::full(v);
    for w in 0..v {
        if !alive.contains(w) {
            continue;
        }
        for u in 0..v {
            if u == w || !alive.contains(u) {
                continue;
            }
            if closed[u].is_subset_of(&closed[w]) && (closed[u] != closed[w] || u < w) {
                alive.remove(w);
                break;
            }
        }
    }

    // incumbent: index-greedy over the surviving vertices plus one seeded
    // run per ground-set element, restricted to the subsets containing it
    let mut incumbent = greedy_independent(adj, &alive);
    for x in 0..graph.spec.n() {
        let mut seed = Bitset::new(v);
        for (i, vert) in graph.vertices.iter().enumerate() {
            if alive.contains(i) && vert.contains(&x) {
                seed.insert(i);
            }
        }
        let mut fam = greedy_independent(adj, &seed);
        // extend to a maximal set over everything still alive
        let mut rest = alive.clone();
        for &p in &fam {
            rest.remove(p);
            rest.subtract(&adj[p]);
        }
        fam.extend(greedy_independent(adj, &rest));
        if fam.len() > incumbent.len() {
            incumbent = fam;
        }
    }

    let mut search = Search {
        adj,
        budget: node_budget,
        nodes: 0,
        truncated: false,
        best: incumbent.len() as u64,
        cur: Vec::new(),
        witness: incumbent,
    };
    // deep include-chains recurse once per chosen vertex; give the worker
    // room for graphs at the vertex cap
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(256 << 20)
            .spawn_scoped(scope, || search.expand(alive.clone()))
            .expect("spawning search thread")
            .join()
            .expect("search thread panicked");
    });

    let mut witness = search.witness;
    witness.sort_unstable();
    debug_assert!(graph.is_independent(&witness));
    AlphaResult {
        size: witness.len() as u64,
        exact: !search.truncated,
        witness,
        nodes: search.nodes,
    }
}

/// Exact three-way comparison of the ground truth against both program
/// bounds; any violation is a solver bug and errors out loudly.
#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub alpha: AlphaResult,
    pub sigma: Rational,
    pub theta: Rational,
}

pub fn sandwich_check(spec: &LSpec, vertex_cap: u64, node_budget: u64) -> Result<SandwichReport> {
    let graph = build_graph(spec, vertex_cap)?;
    let alpha = alpha_bruteforce(&graph, node_budget);
    let sig = sigma(spec)?;
    let th = theta(spec)?;
    let a = rat_int(Int::from(alpha.size));
    if a > sig || sig > th {
        return Err(Error::Internal(format!(
            "bound ordering violated at {spec}: alpha {} (exact: {}), sigma {sig}, theta {th}",
            alpha.size, alpha.exact
        )));
    }
    Ok(SandwichReport {
        alpha,
        sigma: sig,
        theta: th,
    })
}

/// Decompose q as p^m with p prime, if possible.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..).find(|&d| q.is_multiple_of(d) && !(2..d).any(|e| d.is_multiple_of(e)))?;
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1).then_some((p, m))
}

/// One row of the capacity-gap experiment for the graph family with
/// k = q^2 - 1 and edges exactly between subsets whose intersection is
/// congruent to -1 mod q.
#[derive(Debug, Clone)]
pub struct GapReport {
    pub q: u64,
    pub p: u64,
    pub m: u32,
    pub k: u64,
    pub n: u64,
    pub ell: Vec<u64>,
    /// Total vertex count C(n,k).
    pub vertex_count: Int,
    pub theta: Rational,
    pub sigma: Rational,
    /// C(n, q-1), an upper bound on minrank and hence on the capacity.
    pub minrank_bound: Int,
    pub def_bound: DefBound,
    pub rcw_bound: Int,
    /// Present only when the graph fits under the vertex cap.
    pub alpha: Option<AlphaResult>,
    /// ln(theta / minrank_bound) / ln(vertex_count).
    pub exponent_estimate: f64,
    /// 1 - 2/(q+1), the limiting exponent.
    pub exponent_target: f64,
}

pub fn gap_report(q: u64, n: u64, vertex_cap: u64, node_budget: u64) -> Result<GapReport> {
    let (p, m) = prime_power(q).ok_or(Error::NotPrimePower { q })?;
    let k = q * q - 1;
    // allowed intersections: everything not congruent to -1 mod q
    let ell: Vec<u64> = (0..k).filter(|l| (l + 1) % q != 0).collect();
    if ell.len() as u64 != q * q - q {
        return Err(Error::Internal(format!(
            "allowed-intersection count {} differs from q^2-q = {}",
            ell.len(),
            q * q - q
        )));
    }
    let spec = LSpec::new(n, k, ell.iter().copied())?;
    spec.require_scheme()?;
    let th = theta(&spec)?;
    let sig = sigma(&spec)?;
    let vertex_count = binom(n as i64, k as i64);
    let minrank_bound = binom(n as i64, q as i64 - 1);
    let alpha = match build_graph(&spec, vertex_cap) {
        Ok(g) => Some(alpha_bruteforce(&g, node_budget)),
        Err(Error::CapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    let ratio = th.clone() / rat_int(minrank_bound.clone());
    let exponent_estimate = ln_approx(&ratio) / ln_approx(&rat_int(vertex_count.clone()));
    Ok(GapReport {
        q,
        p,
        m,
        k,
        n,
        ell: ell.clone(),
        vertex_count,
        theta: th,
        sigma: sig,
        minrank_bound,
        def_bound: def_bound(&spec),
        rcw_bound: rcw_bound(&spec),
        alpha,
        exponent_estimate,
        exponent_target: (q as f64 - 1.0) / (q as f64 + 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn spec(n: u64, k: u64, ell: &[u64]) -> LSpec {
        LSpec::new(n, k, ell.iter().copied()).unwrap()
    }

    fn graph(n: u64, k: u64, ell: &[u64]) -> JohnsonGraph {
        build_graph(&spec(n, k, ell), 5000).unwrap()
    }

    /// Plain exhaustive recursion, no bounds at all.
    fn alpha_exhaustive(g: &JohnsonGraph) -> u64 {
        fn rec(g: &JohnsonGraph, cands: Bitset, size: u64) -> u64 {
            match cands.lowest() {
                None => size,
                Some(v) => {
                    let mut without = cands.clone();
                    without.remove(v);
                    let mut with = without.clone();
                    with.subtract(g.neighbors(v));
                    rec(g, with, size + 1).max(rec(g, without, size))
                }
            }
        }
        rec(g, Bitset::full(g.vertex_count()), 0)
    }

    #[test]
    fn colex_order_pinned() {
        assert_eq!(
            colex_subsets(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3],
            ]
        );
        assert_eq!(colex_subsets(5, 1).len(), 5);
        assert_eq!(colex_subsets(6, 3).len(), 20);
    }

    #[test]
    fn bitset_basics() {
        let mut b = Bitset::new(130);
        b.insert(0);
        b.insert(64);
        b.insert(129);
        assert_eq!(b.count(), 3);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(b.lowest(), Some(0));
        b.remove(0);
        assert_eq!(b.lowest(), Some(64));
        assert!(b.contains(129));
        assert!(!b.contains(1));
        assert_eq!(Bitset::full(130).count(), 130);
        assert!(b.is_subset_of(&Bitset::full(130)));
    }

    #[test]
    fn petersen_structure() {
        let g = graph(5, 2, &[1]);
        assert_eq!(g.vertex_count(), 10);
        for v in 0..10 {
            assert_eq!(g.degree(v), 3);
        }
        assert_eq!(g.expected_degree(), Int::from(3));
        let a = alpha_bruteforce(&g, 1 << 20);
        assert!(a.exact);
        assert_eq!(a.size, 4);
        assert!(g.is_independent(&a.witness));
    }

    #[test]
    fn one_overlap_graph() {
        let g = graph(5, 2, &[0]);
        for v in 0..10 {
            assert_eq!(g.degree(v), 6);
        }
        // independent sets are pairwise-disjoint families
        assert_eq!(alpha_bruteforce(&g, 1 << 20).size, 2);
    }

    #[test]
    fn degree_formula_everywhere() {
        for (n, k, ell) in [
            (6u64, 2u64, vec![0u64]),
            (7, 3, vec![1, 2]),
            (8, 3, vec![0, 2]),
            (9, 4, vec![0, 1, 3]),
            (7, 2, vec![]),
        ] {
            let g = graph(n, k, &ell);
            let expect = g.expected_degree();
            for v in 0..g.vertex_count() {
                assert_eq!(Int::from(g.degree(v) as u64), expect, "n={n} k={k} v={v}");
            }
        }
    }

    #[test]
    fn edgeless_and_complete() {
        let g = graph(6, 2, &[0, 1]);
        assert_eq!(g.expected_degree(), Int::from(0));
        let a = alpha_bruteforce(&g, 1 << 20);
        assert_eq!(a.size, 15);
        assert!(a.exact);

        let g = graph(6, 2, &[]);
        assert_eq!(g.degree(3), 14);
        assert_eq!(alpha_bruteforce(&g, 1 << 20).size, 1);
    }

    #[test]
    fn complement_adjacency() {
        let sp = spec(7, 3, &[0, 2]);
        let g = build_graph(&sp, 5000).unwrap();
        let h = build_graph(&sp.complement(), 5000).unwrap();
        for a in 0..g.vertex_count() {
            for b in 0..g.vertex_count() {
                if a != b {
                    assert_ne!(g.adjacent(a, b), h.adjacent(a, b), "{a} {b}");
                }
            }
        }
    }

    #[test]
    fn matches_exhaustive_oracle() {
        // disjointness graphs: alpha is a maximum matching of K_n
        for n in 4u64..=8 {
            let g = graph(n, 2, &[0]);
            let fast = alpha_bruteforce(&g, 1 << 24);
            assert!(fast.exact);
            assert_eq!(fast.size, alpha_exhaustive(&g));
            assert_eq!(fast.size, n / 2);
        }
        // assorted tiny instances
        for (n, k, ell) in [
            (6u64, 3u64, vec![0u64]),
            (6, 3, vec![1]),
            (7, 3, vec![0, 1]),
            (6, 2, vec![1]),
        ] {
            let g = graph(n, k, &ell);
            let fast = alpha_bruteforce(&g, 1 << 24);
            assert!(fast.exact);
            assert_eq!(fast.size, alpha_exhaustive(&g), "n={n} k={k} L={ell:?}");
        }
    }

    #[test]
    fn nested_interval_alpha() {
        // L = [t, k-1]: the largest L-system has C(n-t, k-t) members once
        // n reaches (t+1)(k-t+1); below that a fatter local family wins
        for (n, k, t) in [(8u64, 3u64, 1u64), (9, 3, 1), (9, 4, 2), (7, 3, 2)] {
            let ell: Vec<u64> = (t..k).collect();
            let g = graph(n, k, &ell);
            let a = alpha_bruteforce(&g, 1 << 24);
            assert!(a.exact);
            assert_eq!(
                Int::from(a.size),
                binom((n - t) as i64, (k - t) as i64),
                "n={n} k={k} t={t}"
            );
        }
    }

    #[test]
    fn budget_exhaustion_flags_inexact() {
        let g = graph(8, 3, &[0, 1]);
        let a = alpha_bruteforce(&g, 1);
        assert!(!a.exact);
        assert!(g.is_independent(&a.witness));
        let full = alpha_bruteforce(&g, 1 << 24);
        assert!(full.exact);
        assert!(a.size <= full.size);
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(
            build_graph(&spec(30, 5, &[1]), 5000),
            Err(Error::CapExceeded { vertices: 142506, cap: 5000 })
        ));
    }

    #[test]
    fn sandwich_small_instances() {
        let r = sandwich_check(&spec(5, 2, &[1]), 5000, 1 << 24).unwrap();
        assert_eq!(r.alpha.size, 4);
        assert_eq!(r.sigma, rat(4, 1));
        assert_eq!(r.theta, rat(4, 1));

        let r = sandwich_check(&spec(9, 3, &[1, 2]), 5000, 1 << 24).unwrap();
        assert_eq!(r.alpha.size, 28);
        assert_eq!(r.theta, rat(28, 1));

        let r = sandwich_check(&spec(6, 3, &[0]), 5000, 1 << 24).unwrap();
        assert!(rat_int(Int::from(r.alpha.size)) <= r.theta);
    }

    #[test]
    fn prime_power_decomposition() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(125), Some((5, 3)));
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(0), None);
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(100), None);
    }

    #[test]
    fn gap_report_small() {
        let r = gap_report(2, 10, 5000, 1 << 22).unwrap();
        assert_eq!(r.k, 3);
        assert_eq!(r.ell, vec![0, 2]);
        assert_eq!(r.minrank_bound, Int::from(10));
        assert_eq!(r.vertex_count, Int::from(120));
        assert!(r.alpha.is_some());
        let alpha = r.alpha.unwrap();
        assert!(rat_int(Int::from(alpha.size)) <= r.sigma);
        assert!(r.sigma <= r.theta);
        assert!((r.exponent_target - 1.0 / 3.0).abs() < 1e-12);

        assert!(matches!(gap_report(6, 80, 5000, 1), Err(Error::NotPrimePower { q: 6 })));
        // vertex cap exceeded: alpha omitted, the rest still reported
        let r = gap_report(2, 40, 5000, 1).unwrap();
        assert!(r.alpha.is_none());
        assert!(r.theta > rat(1, 1));
    }
}
