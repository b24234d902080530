//! The linear program whose optimum is the Lovasz number of G(n,k,L), built
//! over the subset scheme and solved in exact rational arithmetic, plus the
//! nonnegative-variable variant giving the Delsarte-style bound.

use crate::combinat::LSpec;
use crate::error::{Error, Result};
use crate::rational::{rat_int, Int, Rational};
use crate::scheme::JohnsonScheme;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignMode {
    /// Unrestricted a_i.
    Free,
    /// All a_i >= 0; tightens the program to the Delsarte-style bound.
    Nonnegative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

impl std::fmt::Display for LpStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Unbounded => "unbounded",
            LpStatus::Infeasible => "infeasible",
        })
    }
}

/// max 1 + sum_j a_j subject to, for each u in [0,k],
///
///   mu_u + sum_j a_j (mu_u / nu_{i_j}) P_{i_j}^u >= 0,
///
/// one variable per class i_j = k - ell_j. Rows are cleared of denominators
/// by D = lcm of the nu_{i_j}, so all stored coefficients are integers.
#[derive(Debug, Clone)]
pub struct LpProblem {
    pub spec: LSpec,
    pub sign_mode: SignMode,
    /// Classes i = k - ell carrying a variable, in increasing order.
    pub classes: Vec<u64>,
    /// coeff[u][j] = D mu_u P_{i_j}^u / nu_{i_j}.
    pub coeff: Vec<Vec<Int>>,
    /// rhs[u] = -D mu_u; row u reads sum_j coeff[u][j] a_j >= rhs[u].
    pub rhs: Vec<Int>,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// 1 + sum of the assignment values.
    pub optimum: Rational,
    /// (class index, a value), in the problem's variable order.
    pub assignment: Vec<(u64, Rational)>,
    /// One nonnegative multiplier per constraint row, proving optimality:
    /// checked exactly against the tableau data before returning.
    pub dual: Vec<Rational>,
}

pub fn build_lp(spec: &LSpec, sign_mode: SignMode) -> Result<LpProblem> {
    spec.require_scheme()?;
    let scheme = JohnsonScheme::build(spec.n(), spec.k())?;
    let classes = spec.class_indices();
    let d = classes
        .iter()
        .fold(Int::one(), |acc, &i| acc.lcm(&scheme.nu[i as usize]));
    let factors: Vec<Int> = classes.iter().map(|&i| &d / &scheme.nu[i as usize]).collect();
    let k = spec.k() as usize;
    let mut coeff = Vec::with_capacity(k + 1);
    let mut rhs = Vec::with_capacity(k + 1);
    for u in 0..=k {
        let row: Vec<Int> = classes
            .iter()
            .zip(&factors)
            .map(|(&i, f)| &scheme.mu[u] * &scheme.p[i as usize][u] * f)
            .collect();
        coeff.push(row);
        rhs.push(-(&scheme.mu[u] * &d));
    }
    Ok(LpProblem {
        spec: spec.clone(),
        sign_mode,
        classes,
        coeff,
        rhs,
    })
}

/// Simplex on the dense rational tableau. Bland's rule everywhere: the
/// entering column is the lowest index with a negative reduced cost, and
/// ratio ties resolve to the lowest basis index, so the walk cannot cycle
/// and is fully deterministic.
pub fn solve_exact(problem: &LpProblem) -> Result<LpSolution> {
    let s = problem.classes.len();
    let m = problem.rhs.len();
    let nvars = match problem.sign_mode {
        SignMode::Free => 2 * s,
        SignMode::Nonnegative => s,
    };
    let ncols = nvars + m + 1; // variables, slacks, rhs
    let fail = |status: LpStatus, detail: &str| {
        Error::Internal(format!(
            "linear program for {} is {status}: {detail}",
            problem.spec
        ))
    };

    // standard form: maximize c x, A x <= b, x >= 0. The stored rows are
    // >= with nonpositive rhs, so negating both sides puts the origin in
    // the feasible region and the all-slack basis starts the walk.
    let row_at = |u: usize, col: usize| -> Rational {
        let c = &problem.coeff[u];
        let v = match problem.sign_mode {
            SignMode::Free => {
                if col.is_multiple_of(2) {
                    -c[col / 2].clone()
                } else {
                    c[col / 2].clone()
                }
            }
            SignMode::Nonnegative => -c[col].clone(),
        };
        rat_int(v)
    };
    let b: Vec<Rational> = problem.rhs.iter().map(|r| rat_int(-r)).collect();
    if b.iter().any(|v| v.is_negative()) {
        return Err(fail(LpStatus::Infeasible, "a scaled multiplicity went negative"));
    }
    let cost = |col: usize| -> Rational {
        match problem.sign_mode {
            SignMode::Free if col % 2 == 1 => -Rational::one(),
            _ => Rational::one(),
        }
    };

    let mut rows: Vec<Vec<Rational>> = (0..m)
        .map(|u| {
            let mut r: Vec<Rational> = (0..nvars).map(|j| row_at(u, j)).collect();
            r.extend((0..m).map(|i| {
                if i == u {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r.push(b[u].clone());
            r
        })
        .collect();
    let mut obj: Vec<Rational> = (0..ncols)
        .map(|j| if j < nvars { -cost(j) } else { Rational::zero() })
        .collect();
    let mut basis: Vec<usize> = (nvars..nvars + m).collect();

    while let Some(e) = (0..ncols - 1).find(|&j| obj[j].is_negative()) {
        let mut leave: Option<(Rational, usize, usize)> = None;
        for (i, row) in rows.iter().enumerate() {
            if row[e].is_positive() {
                let ratio = row[ncols - 1].clone() / row[e].clone();
                let better = match &leave {
                    None => true,
                    Some((r, bi, _)) => ratio < *r || (ratio == *r && basis[i] < *bi),
                };
                if better {
                    leave = Some((ratio, basis[i], i));
                }
            }
        }
        let Some((_, _, r)) = leave else {
            return Err(fail(
                LpStatus::Unbounded,
                &format!("column {e} has no blocking row"),
            ));
        };
        let pivot = rows[r][e].clone();
        for v in rows[r].iter_mut() {
            *v /= pivot.clone();
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[e].is_zero() {
                let f = row[e].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        if !obj[e].is_zero() {
            let f = obj[e].clone();
            for j in 0..ncols {
                let delta = &f * &rows[r][j];
                obj[j] -= delta;
            }
        }
        basis[r] = e;
    }

    let mut x = vec![Rational::zero(); nvars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nvars {
            x[bv] = rows[i][ncols - 1].clone();
        }
    }
    let dual: Vec<Rational> = (0..m).map(|u| obj[nvars + u].clone()).collect();

    // exact optimality certificate for the standard form:
    // primal feasible, dual feasible, and equal objectives
    for v in &x {
        if v.is_negative() {
            return Err(fail(LpStatus::Optimal, "negative primal variable"));
        }
    }
    for (u, bu) in b.iter().enumerate() {
        let lhs: Rational = (0..nvars).map(|j| row_at(u, j) * &x[j]).sum();
        if lhs > *bu {
            return Err(fail(LpStatus::Optimal, "primal constraint violated"));
        }
    }
    for y in &dual {
        if y.is_negative() {
            return Err(fail(LpStatus::Optimal, "negative dual multiplier"));
        }
    }
    for j in 0..nvars {
        let lhs: Rational = (0..m).map(|u| row_at(u, j) * &dual[u]).sum();
        if lhs < cost(j) {
            return Err(fail(LpStatus::Optimal, "dual constraint violated"));
        }
    }
    let primal_value: Rational = (0..nvars).map(|j| cost(j) * &x[j]).sum();
    let dual_value: Rational = (0..m).map(|u| b[u].clone() * &dual[u]).sum();
    if primal_value != dual_value {
        return Err(fail(LpStatus::Optimal, "objectives of the two programs differ"));
    }

    let assignment: Vec<(u64, Rational)> = problem
        .classes
        .iter()
        .enumerate()
        .map(|(j, &class)| {
            let a = match problem.sign_mode {
                SignMode::Free => x[2 * j].clone() - x[2 * j + 1].clone(),
                SignMode::Nonnegative => x[j].clone(),
            };
            (class, a)
        })
        .collect();

    // the recovered assignment must satisfy the stored rows verbatim
    for u in 0..m {
        let lhs: Rational = assignment
            .iter()
            .enumerate()
            .map(|(j, (_, a))| rat_int(problem.coeff[u][j].clone()) * a)
            .sum();
        if lhs < rat_int(problem.rhs[u].clone()) {
            return Err(fail(LpStatus::Optimal, "assignment violates a stored row"));
        }
    }

    Ok(LpSolution {
        status: LpStatus::Optimal,
        optimum: Rational::one() + primal_value,
        assignment,
        dual,
    })
}

/// The Lovasz number of G(n,k,L), exactly.
pub fn theta(spec: &LSpec) -> Result<Rational> {
    Ok(solve_exact(&build_lp(spec, SignMode::Free)?)?.optimum)
}

/// The nonnegative-variable optimum, a lower bound on theta and an upper
/// bound on the independence number.
pub fn sigma(spec: &LSpec) -> Result<Rational> {
    Ok(solve_exact(&build_lp(spec, SignMode::Nonnegative)?)?.optimum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binom;
    use crate::rational::rat;
    use proptest::prelude::*;

    fn spec(n: u64, k: u64, ell: &[u64]) -> LSpec {
        LSpec::new(n, k, ell.iter().copied()).unwrap()
    }

    #[test]
    fn problem_shape() {
        let p = build_lp(&spec(10, 3, &[0, 2]), SignMode::Free).unwrap();
        assert_eq!(p.coeff.len(), 4);
        assert_eq!(p.rhs.len(), 4);
        assert!(p.coeff.iter().all(|row| row.len() == 2));
        assert_eq!(p.classes, vec![1, 3]);
        // row u = 0 encodes sum_j a_j nu-normalized valencies >= -D
        assert!(p.rhs.iter().all(|r| r.is_negative()));
    }

    #[test]
    fn kneser_petersen() {
        // disjointness graph on 2-subsets of [5]
        assert_eq!(theta(&spec(5, 2, &[1])).unwrap(), rat(4, 1));
        assert_eq!(sigma(&spec(5, 2, &[1])).unwrap(), rat(4, 1));
    }

    #[test]
    fn nested_interval_value() {
        // L = [t, k-1] in the range where the optimum is C(n-t, k-t)
        assert_eq!(theta(&spec(9, 3, &[1, 2])).unwrap(), rat(28, 1));
        assert_eq!(theta(&spec(8, 2, &[1])).unwrap(), rat(7, 1));
        assert_eq!(theta(&spec(12, 4, &[2, 3])).unwrap(), rat_int(binom(10, 2)));
    }

    #[test]
    fn trivial_ends() {
        // no allowed intersections: complete graph
        assert_eq!(theta(&spec(7, 3, &[])).unwrap(), rat(1, 1));
        assert_eq!(sigma(&spec(7, 3, &[])).unwrap(), rat(1, 1));
        // all intersections allowed: edgeless graph
        assert_eq!(theta(&spec(7, 3, &[0, 1, 2])).unwrap(), rat_int(binom(7, 3)));
        assert_eq!(theta(&spec(8, 2, &[0, 1])).unwrap(), rat(28, 1));
    }

    #[test]
    fn complement_product_is_vertex_count() {
        for (n, k) in [(10u64, 3u64), (8, 3), (12, 4)] {
            let all: Vec<u64> = (0..k).collect();
            for mask in 0u64..(1 << k) {
                let ell: Vec<u64> = all.iter().copied().filter(|l| mask >> l & 1 == 1).collect();
                let sp = spec(n, k, &ell);
                let product =
                    theta(&sp).unwrap() * theta(&sp.complement()).unwrap();
                assert_eq!(
                    product,
                    rat_int(binom(n as i64, k as i64)),
                    "n={n} k={k} L={ell:?}"
                );
            }
        }
    }

    #[test]
    fn sigma_at_most_theta() {
        for (n, k, ell) in [
            (10u64, 3u64, vec![1u64]),
            (10, 3, vec![0, 2]),
            (12, 4, vec![0, 3]),
            (11, 4, vec![1, 2]),
            (9, 4, vec![0, 1, 2]),
        ] {
            let sp = spec(n, k, &ell);
            let t = theta(&sp).unwrap();
            let s = sigma(&sp).unwrap();
            assert!(s <= t, "sigma {s} > theta {t} at {sp}");
            assert!(s >= rat(1, 1));
        }
    }

    #[test]
    fn monotone_in_allowed_intersections() {
        // adding an allowed size can only enlarge the optimum
        for (n, k) in [(10u64, 3u64), (11, 4)] {
            for mask in 0u64..(1 << k) {
                let ell: Vec<u64> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
                let base = theta(&spec(n, k, &ell)).unwrap();
                for extra in 0..k {
                    if mask >> extra & 1 == 1 {
                        continue;
                    }
                    let mut bigger = ell.clone();
                    bigger.push(extra);
                    let t = theta(&spec(n, k, &bigger)).unwrap();
                    assert!(t >= base, "n={n} k={k} {ell:?} + {extra}");
                }
            }
        }
    }

    #[test]
    fn deterministic_resolve() {
        let p = build_lp(&spec(12, 4, &[1, 3]), SignMode::Free).unwrap();
        let a = solve_exact(&p).unwrap();
        let b = solve_exact(&p).unwrap();
        assert_eq!(a.assignment, b.assignment);
        assert_eq!(a.dual, b.dual);
        assert_eq!(a.optimum, b.optimum);
        assert_eq!(a.status, LpStatus::Optimal);
    }

    #[test]
    fn unbounded_is_loud() {
        // hand-built program: maximize a subject to a >= -1, no upper bound
        let p = LpProblem {
            spec: spec(6, 2, &[1]),
            sign_mode: SignMode::Nonnegative,
            classes: vec![1],
            coeff: vec![vec![Int::one()], vec![Int::one()], vec![Int::one()]],
            rhs: vec![-Int::one(), -Int::one(), -Int::one()],
        };
        assert!(matches!(solve_exact(&p), Err(Error::Internal(_))));
    }

    #[test]
    fn dual_certificate_is_exposed() {
        let p = build_lp(&spec(10, 3, &[1]), SignMode::Free).unwrap();
        let sol = solve_exact(&p).unwrap();
        assert_eq!(sol.dual.len(), 4);
        assert!(sol.dual.iter().all(|y| !y.is_negative()));
        // with one variable split in two, at least one row must bind
        assert!(sol.dual.iter().any(|y| y.is_positive()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn solver_is_exact_and_bounded(
            k in 2u64..5,
            extra in 0u64..6,
            mask in 1u64..32,
        ) {
            let n = 2 * k + extra;
            let ell: Vec<u64> = (0..k).filter(|l| mask >> l & 1 == 1).collect();
            let sp = spec(n, k, &ell);
            let t = theta(&sp).unwrap();
            prop_assert!(t >= rat(1, 1));
            prop_assert!(t <= rat_int(binom(n as i64, k as i64)));
            let s = sigma(&sp).unwrap();
            prop_assert!(s <= t);
            prop_assert!(s >= rat(1, 1));
        }
    }
}
