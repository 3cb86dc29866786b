//! Left eigenvectors of a Kronecker product built from factor Jordan chains.
//!
//! For one pair of canonical Jordan blocks P = lambda·I + N (size p) and
//! Q = mu·I + N (size q), [`block_pair_eigenvectors`] writes down every left
//! eigenvector of P (x) Q in coefficient space, split into four cases by
//! which of lambda, mu vanish. [`lifted_eigenvectors`] then carries those
//! coefficient vectors through the stacked factor chains into eigenvectors
//! of the full composite matrix. Grouping block pairs by equal eigenvalue
//! product gives the collision classes the controllability test ranks.
//!
//! Everything here is checked against [`brute_eigenspace`], a brute-force
//! oracle that knows nothing about the construction.

use std::collections::BTreeMap;

use crate::eigen::{Eigenstructure, JordanBlockChain};
use crate::mat::{Mat, RowVec};
use crate::rational::Rational;

/// Left eigenvectors of one canonical Jordan block pair, in the coefficient
/// space R^(p·q). `theta` is the geometric multiplicity of the lone
/// eigenvalue lambda·mu of P (x) Q.
#[derive(Clone, Debug)]
pub struct BlockPairEigenvectors {
    pub lambda: Rational,
    pub mu: Rational,
    pub p: usize,
    pub q: usize,
    pub theta: usize,
    pub vectors: Vec<RowVec>,
}

/// All left eigenvectors of P (x) Q for Jordan blocks of sizes p, q with
/// eigenvalues lambda, mu. Vector count is exactly the geometric
/// multiplicity: min(p,q) when lambda·mu != 0, q when only lambda = 0,
/// p when only mu = 0, and p + q - 1 when both vanish.
pub fn block_pair_eigenvectors(
    p: usize,
    q: usize,
    lambda: &Rational,
    mu: &Rational,
) -> BlockPairEigenvectors {
    assert!(p >= 1 && q >= 1, "block sizes must be positive");
    let dim = p * q;
    // 0-based position of e_a (x) e_b for 1-based block coordinates.
    let pos = |a: usize, b: usize| (a - 1) * q + (b - 1);
    let unit = |a: usize, b: usize| RowVec::unit(dim, pos(a, b));

    let mut vectors: Vec<RowVec> = Vec::new();
    let theta;
    match (lambda.is_zero(), mu.is_zero()) {
        (false, false) => {
            theta = p.min(q);
            // xi_1 = e_q; xi_k mixes the q-side chain with binomial weights.
            let mut xis: Vec<Vec<Rational>> = Vec::with_capacity(theta);
            let mut xi1 = vec![Rational::zero(); q];
            xi1[q - 1] = Rational::one();
            xis.push(xi1);
            for k in 2..=theta {
                let mut xi = vec![Rational::zero(); q];
                let sign = if k % 2 == 1 { Rational::one() } else { -Rational::one() };
                let scale = sign / lambda.pow(k as i32 - 1);
                let mut binom = Rational::one();
                for l in 0..=(k - 2) {
                    // coefficient of e_(q-k+l+1)
                    xi[q - k + l] = &scale * &(&binom * &mu.pow((k - l - 1) as i32));
                    binom = binom * Rational::from((k - 2 - l) as i64)
                        / Rational::from((l + 1) as i64);
                }
                xis.push(xi);
            }
            for k in 1..=theta {
                let mut eta = vec![Rational::zero(); dim];
                for l in 1..=k {
                    let row = p - k + l;
                    for b in 1..=q {
                        let c = &xis[l - 1][b - 1];
                        if !c.is_zero() {
                            eta[pos(row, b)] = c.clone();
                        }
                    }
                }
                vectors.push(RowVec::new(eta));
            }
        }
        (true, false) => {
            theta = q;
            for k in 1..=q {
                vectors.push(unit(p, k));
            }
        }
        (false, true) => {
            theta = p;
            for k in 1..=p {
                vectors.push(unit(k, q));
            }
        }
        (true, true) => {
            theta = p + q - 1;
            for k in 1..=q {
                vectors.push(unit(p, k));
            }
            for j in 1..p {
                vectors.push(unit(p - j, q));
            }
        }
    }
    debug_assert_eq!(vectors.len(), theta);
    BlockPairEigenvectors {
        lambda: lambda.clone(),
        mu: mu.clone(),
        p,
        q,
        theta,
        vectors,
    }
}

/// Stacks a chain in reversed order: rows v^p, ..., v^1. In coefficient
/// space, e_p therefore addresses the top vector v^1.
fn reversed_chain_matrix(chain: &JordanBlockChain) -> Mat {
    let rows: Vec<RowVec> = chain.chain.iter().rev().cloned().collect();
    Mat::from_rows(&rows)
}

/// Left eigenvectors of A1 (x) A2 contributed by one factor block pair:
/// each coefficient vector zeta of the canonical pair maps to
/// zeta · (V (x) W), where V and W stack the factor chains reversed. Every
/// returned vector eta satisfies eta · (A1 (x) A2) = lambda·mu · eta exactly.
pub fn lifted_eigenvectors(first: &JordanBlockChain, second: &JordanBlockChain) -> Vec<RowVec> {
    let lift = reversed_chain_matrix(first).kron(&reversed_chain_matrix(second));
    let pair =
        block_pair_eigenvectors(first.size, second.size, &first.eigenvalue, &second.eigenvalue);
    pair.vectors
        .iter()
        .map(|zeta| zeta.mul_mat(&lift).expect("lift dimensions agree"))
        .collect()
}

/// Block pairs grouped by exact equality of the eigenvalue product, together
/// with the lifted basis of the direct sum of their eigenspaces.
#[derive(Clone, Debug)]
pub struct CollisionClass {
    /// The shared composite eigenvalue sigma = lambda_i · mu_j.
    pub product: Rational,
    /// Indices into the two factors' block lists, lexicographic.
    pub members: Vec<(usize, usize)>,
    /// Linearly independent left eigenvectors spanning the direct sum.
    pub basis: Vec<RowVec>,
}

/// Groups every factor block pair into collision classes, ascending by
/// product. Requires complete eigenstructures.
pub fn collision_classes(es1: &Eigenstructure, es2: &Eigenstructure) -> Vec<CollisionClass> {
    debug_assert!(es1.complete && es2.complete, "collision classes need complete spectra");
    let mut map: BTreeMap<Rational, CollisionClass> = BTreeMap::new();
    for (i, b1) in es1.blocks.iter().enumerate() {
        for (j, b2) in es2.blocks.iter().enumerate() {
            let product = &b1.eigenvalue * &b2.eigenvalue;
            let class = map.entry(product.clone()).or_insert_with(|| CollisionClass {
                product,
                members: Vec::new(),
                basis: Vec::new(),
            });
            class.members.push((i, j));
            class.basis.extend(lifted_eigenvectors(b1, b2));
        }
    }
    map.into_values().collect()
}

/// Brute-force left eigenspace of `m` for `sigma`: the left null space of
/// m - sigma·I, computed with no knowledge of any factor structure. This is
/// the oracle the lifted construction is verified against.
pub fn brute_eigenspace(m: &Mat, sigma: &Rational) -> Vec<RowVec> {
    m.shift(sigma).expect("square matrix").left_null_space()
}
