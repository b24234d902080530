//! Closed forms and asymptotics: the leading coefficient of the Lovasz
//! number as n grows, exact values for singleton L, the complementary
//! constant product, intersection-family cardinality bounds, the explicit
//! near-optimal assignment, and the determinant prediction backing it.

use crate::combinat::{binom, factorial, full_runs, LSpec};
use crate::error::{Error, Result};
use crate::linalg::{bareiss_det, bareiss_solve};
use crate::lp::{build_lp, SignMode};
use crate::rational::{rat_int, Int, Rational};
use crate::scheme::build_p_matrix;
use num_traits::{One, Zero};

/// Leading term constant * n^exponent of the Lovasz number for fixed k, L.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeadingTerm {
    /// Coefficient of n^s; positive whenever s >= 1.
    pub constant: Rational,
    /// s = |L|.
    pub exponent: usize,
    /// Product of the factorials of the full-run lengths of L.
    pub run_product: Int,
}

fn canonical_ell(k: u64, ell: &[u64]) -> Result<Vec<u64>> {
    if k == 0 {
        return Err(Error::InvalidSpec("k must be at least 1".into()));
    }
    let mut ell: Vec<u64> = ell.to_vec();
    ell.sort_unstable();
    ell.dedup();
    if let Some(&bad) = ell.iter().find(|&&l| l >= k) {
        return Err(Error::InvalidSpec(format!(
            "intersection size {bad} is out of range [0, {}]",
            k - 1
        )));
    }
    Ok(ell)
}

/// The n^s coefficient for possibly empty L; empty products give 1.
fn constant_allow_empty(k: u64, ell: &[u64]) -> Rational {
    let runs = full_runs(ell);
    let run_product: Int = runs.lengths().iter().map(|&m| factorial(m as u64)).product();
    let mut numer = run_product;
    let ki = k as i64;
    for (j, &l) in ell.iter().enumerate() {
        let top = if j == 0 { ki } else { ki - ell[j - 1] as i64 - 1 };
        numer *= binom(top, ki - l as i64);
    }
    let mut denom = Int::one();
    for &l in ell {
        denom *= Int::from(l + 1) * Int::from(k - l);
    }
    rat_int(numer) / rat_int(denom)
}

/// The coefficient of n^s in the two-sided asymptotic bound
///
///   theta = prod m_i! * C(k,k-l_1) C(k-l_1-1,k-l_2) ... C(k-l_{s-1}-1,k-l_s)
///           / prod (l_i+1)(k-l_i) * n^s + O(n^{s-1}),
///
/// where the m_i are the lengths of the full runs of L.
pub fn leading_constant(k: u64, ell: &[u64]) -> Result<LeadingTerm> {
    let ell = canonical_ell(k, ell)?;
    if ell.is_empty() {
        return Err(Error::EmptyL);
    }
    let run_product: Int = full_runs(&ell)
        .lengths()
        .iter()
        .map(|&m| factorial(m as u64))
        .product();
    Ok(LeadingTerm {
        constant: constant_allow_empty(k, &ell),
        exponent: ell.len(),
        run_product,
    })
}

/// Product of the leading coefficients for L and its complement in
/// [0, k-1], with the empty set contributing 1. Always equals 1/k!.
pub fn constant_product_identity(k: u64, ell: &[u64]) -> Result<Rational> {
    let ell = canonical_ell(k, ell)?;
    let comp: Vec<u64> = (0..k).filter(|l| !ell.contains(l)).collect();
    Ok(constant_allow_empty(k, &ell) * constant_allow_empty(k, &comp))
}

fn singleton_denominator(n: u64, k: u64, ell: u64) -> Int {
    let (ni, ki, li) = (n as i64, k as i64, ell as i64);
    let mut acc = Int::zero();
    for j in 0..=(ki - li) {
        let term = binom(li + 1, j)
            * binom(ki - li - 1, ki - li - j)
            * binom(ni - ki - li - 1, ki - li - j);
        if j % 2 == 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    acc
}

/// Exact value of
///
///   1 + C(k,k-l) C(n-k,k-l) / sum_{j} (-1)^{j+1} C(l+1,j) C(k-l-1,k-l-j) C(n-k-l-1,k-l-j)
///
/// which equals the Lovasz number of G(n,k,{l}) once n is large enough.
/// The denominator can vanish or go negative at small n; a zero denominator
/// is reported as an error, other small-n values are returned as-is.
pub fn exact_theta_singleton(n: u64, k: u64, ell: u64) -> Result<Rational> {
    if ell >= k || n < 2 * k {
        return Err(Error::InvalidSpec(format!(
            "need l < k and n >= 2k, got n={n}, k={k}, l={ell}"
        )));
    }
    let d = singleton_denominator(n, k, ell);
    if d.is_zero() {
        return Err(Error::ZeroDenominator { n, k, ell });
    }
    let (ni, ki, li) = (n as i64, k as i64, ell as i64);
    let numer = binom(ki, ki - li) * binom(ni - ki, ki - li);
    Ok(Rational::one() + rat_int(numer) / rat_int(d))
}

/// C(n,k) divided by the singleton value: the exact large-n Lovasz number
/// of the complementary instance L = [0,k-1] \ {l}.
pub fn exact_theta_cosingleton(n: u64, k: u64, ell: u64) -> Result<Rational> {
    let theta = exact_theta_singleton(n, k, ell)?;
    Ok(rat_int(binom(n as i64, k as i64)) / theta)
}

/// The frankl-style product bound on families with intersections in L,
/// valid once n > 2^k k^3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefBound {
    pub value: Rational,
    /// Whether n clears the threshold under which the bound is proven.
    pub valid: bool,
}

/// prod_{l in L} (n - l)/(k - l); empty L gives 1.
pub fn def_bound(spec: &LSpec) -> DefBound {
    let (n, k) = (spec.n() as i64, spec.k() as i64);
    let value = spec
        .ell()
        .iter()
        .map(|&l| rat_int(n - l as i64) / rat_int(k - l as i64))
        .product();
    let kc = Int::from(spec.k());
    let threshold = (Int::one() << spec.k() as usize) * &kc * &kc * &kc;
    DefBound {
        value,
        valid: Int::from(spec.n()) > threshold,
    }
}

/// C(n, |L|), the uniform-intersection-count bound.
pub fn rcw_bound(spec: &LSpec) -> Int {
    binom(spec.n() as i64, spec.s() as i64)
}

/// The explicit assignment a_{k-l_i} = C(k,k-l_i) C(n-k,k-l_i) v_i where v
/// solves P v = (0,...,0,-1)^T: feasible for the Lovasz program once n is
/// large, and asymptotically optimal.
#[derive(Debug, Clone)]
pub struct FeasibleVector {
    /// (class index k-l, value), ascending by class.
    pub values: Vec<(u64, Rational)>,
    /// 1 + sum of the values.
    pub objective: Rational,
    /// Whether every constraint row of the program holds at this n.
    pub feasible: bool,
}

pub fn feasible_solution(spec: &LSpec) -> Result<FeasibleVector> {
    let pm = build_p_matrix(spec)?;
    let s = spec.s();
    let mut b = vec![Int::zero(); s];
    b[s - 1] = -Int::one();
    let (_, v) = bareiss_solve(&pm.entries, &b);
    let v = v.ok_or_else(|| Error::SingularMatrix {
        n: spec.n(),
        k: spec.k(),
        l: spec.ell().to_vec(),
    })?;

    let (ni, ki) = (spec.n() as i64, spec.k() as i64);
    // v is indexed by ascending l; reverse to ascend by class k - l
    let mut values: Vec<(u64, Rational)> = spec
        .ell()
        .iter()
        .zip(&v)
        .map(|(&l, vi)| {
            let class = spec.k() - l;
            let scale = binom(ki, ki - l as i64) * binom(ni - ki, ki - l as i64);
            (class, rat_int(scale) * vi)
        })
        .collect();
    values.reverse();

    let lp = build_lp(spec, SignMode::Free)?;
    let feasible = (0..lp.rhs.len()).all(|u| {
        let lhs: Rational = values
            .iter()
            .enumerate()
            .map(|(j, (_, a))| rat_int(lp.coeff[u][j].clone()) * a)
            .sum();
        lhs >= rat_int(lp.rhs[u].clone())
    });
    let objective = Rational::one() + values.iter().map(|(_, a)| a.clone()).sum::<Rational>();
    Ok(FeasibleVector {
        values,
        objective,
        feasible,
    })
}

/// Exact determinant of the P matrix next to its predicted leading term
/// (-1)^s * prod (l_i+1) / (prod m_i! * prod (k-l_i-1)!) * n^{sk - sum l - s}.
#[derive(Debug, Clone)]
pub struct DetReport {
    pub det: Int,
    /// Signed coefficient of n^exponent.
    pub predicted_constant: Rational,
    pub exponent: u64,
}

pub fn det_p_report(spec: &LSpec) -> Result<DetReport> {
    let pm = build_p_matrix(spec)?;
    let det = bareiss_det(&pm.entries);
    let (k, ell) = (spec.k(), spec.ell());
    let s = ell.len() as u64;
    let mut numer: Int = ell.iter().map(|&l| Int::from(l + 1)).product();
    let mut denom: Int = full_runs(ell)
        .lengths()
        .iter()
        .map(|&m| factorial(m as u64))
        .product();
    for &l in ell {
        denom *= factorial(k - l - 1);
    }
    if s % 2 == 1 {
        numer = -numer;
    }
    let sum_l: u64 = ell.iter().sum();
    Ok(DetReport {
        det,
        predicted_constant: rat_int(numer) / rat_int(denom),
        exponent: s * k - sum_l - s,
    })
}
