//! The association scheme on k-subsets of an n-set, classified by the size
//! of the symmetric difference: eigenvalues of the distance relations and the
//! multiplicities of the common eigenspaces.

use crate::combinat::{binom, LSpec};
use crate::error::{Error, Result};
use crate::rational::Int;
use num_traits::Zero;

/// First eigenvalue P_i^u of the distance-i relation on the eigenspace of
/// index u:
///
///   P_i^u = sum_{j=0}^{i} (-1)^j C(u,j) C(k-u, i-j) C(n-k-u, i-j)
///
/// Requires n >= 2k so every binomial argument stays nonnegative.
pub fn p_eigenvalue(n: u64, k: u64, i: u64, u: u64) -> Int {
    assert!(n >= 2 * k, "p_eigenvalue needs n >= 2k, got n={n}, k={k}");
    assert!(i <= k && u <= k, "class {i} and eigenspace {u} must be <= k={k}");
    let (n, k, i, u) = (n as i64, k as i64, i as i64, u as i64);
    let mut acc = Int::zero();
    for j in 0..=i {
        let term = binom(u, j) * binom(k - u, i - j) * binom(n - k - u, i - j);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Eigenvalue and multiplicity tables of the scheme on k-subsets of [n].
#[derive(Debug, Clone)]
pub struct JohnsonScheme {
    pub n: u64,
    pub k: u64,
    /// nu[i] = C(k,i) C(n-k,i), the valency of the distance-i relation.
    pub nu: Vec<Int>,
    /// mu[u] = C(n,u) - C(n,u-1), the dimension of eigenspace u.
    pub mu: Vec<Int>,
    /// p[i][u] = P_i^u.
    pub p: Vec<Vec<Int>>,
}

impl JohnsonScheme {
    pub fn build(n: u64, k: u64) -> Result<Self> {
        if k == 0 || n < 2 * k {
            return Err(Error::SchemePrecondition { n, k });
        }
        let (ni, ki) = (n as i64, k as i64);
        let nu: Vec<Int> = (0..=ki).map(|i| binom(ki, i) * binom(ni - ki, i)).collect();
        let mu: Vec<Int> = (0..=ki).map(|u| binom(ni, u) - binom(ni, u - 1)).collect();
        let p: Vec<Vec<Int>> = (0..=k)
            .map(|i| (0..=k).map(|u| p_eigenvalue(n, k, i, u)).collect())
            .collect();
        Ok(JohnsonScheme { n, k, nu, mu, p })
    }

    /// Number of vertices C(n,k).
    pub fn vertex_count(&self) -> Int {
        binom(self.n as i64, self.k as i64)
    }
}

/// The s x s matrix with (i,j)-entry P_{k-ell_j}^{ell_i + 1}, whose inverse
/// produces the asymptotically feasible point of the linear program.
#[derive(Debug, Clone)]
pub struct PMatrix {
    pub entries: Vec<Vec<Int>>,
}

pub fn build_p_matrix(spec: &LSpec) -> Result<PMatrix> {
    spec.require_scheme()?;
    if spec.s() == 0 {
        return Err(Error::EmptyL);
    }
    let (n, k) = (spec.n(), spec.k());
    let entries = spec
        .ell()
        .iter()
        .map(|&li| {
            spec.ell()
                .iter()
                .map(|&lj| p_eigenvalue(n, k, k - lj, li + 1))
                .collect()
        })
        .collect();
    Ok(PMatrix { entries })
}
