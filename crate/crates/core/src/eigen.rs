//! Exact left Jordan chains for rational matrices with rational spectra.
//!
//! The chain convention is strict: `v^1` is the top vector (an ordinary left
//! eigenvector), and `v^k (A - lambda I) = v^(k-1)` holds exactly for
//! k = 2..size. Construction walks the nested left null spaces of powers of
//! `A - lambda I`: top-grade vectors are chosen deterministically against the
//! lower space plus the already-propagated longer chains, and the rest of
//! each chain is generated downward by right multiplication.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::mat::{Mat, RowVec};
use crate::rational::Rational;

/// One Jordan block of an eigenvalue together with its left chain, top first.
#[derive(Clone, Debug, Serialize)]
pub struct JordanBlockChain {
    pub eigenvalue: Rational,
    pub size: usize,
    /// `chain[k]` is `v^(k+1)`; `chain[0]` is the top vector.
    pub chain: Vec<RowVec>,
}

impl JordanBlockChain {
    pub fn top(&self) -> &RowVec {
        &self.chain[0]
    }
}

/// All Jordan blocks of a matrix, sorted by (eigenvalue, size descending,
/// construction order). `complete` is true iff the spectrum fully factors
/// over the rationals, in which case block sizes sum to the dimension.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenstructure {
    pub dimension: usize,
    pub blocks: Vec<JordanBlockChain>,
    pub complete: bool,
}

impl Eigenstructure {
    /// Distinct eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = Vec::new();
        for b in &self.blocks {
            if out.last() != Some(&b.eigenvalue) {
                out.push(b.eigenvalue.clone());
            }
        }
        out
    }

    /// Number of blocks carrying `lambda`.
    pub fn geometric_multiplicity(&self, lambda: &Rational) -> usize {
        self.blocks.iter().filter(|b| &b.eigenvalue == lambda).count()
    }

    pub fn has_zero_eigenvalue(&self) -> bool {
        self.blocks.iter().any(|b| b.eigenvalue.is_zero())
    }

    pub fn is_diagonal_form(&self) -> bool {
        self.blocks.iter().all(|b| b.size == 1)
    }
}

/// Exact rational spectrum with algebraic multiplicities, ascending. The flag
/// is false when some eigenvalues are irrational or complex.
pub fn eigenvalues(a: &Mat) -> Result<(Vec<(Rational, usize)>, bool)> {
    let charpoly = a.charpoly()?;
    Ok(charpoly.rational_roots())
}

/// All left Jordan chains of `a` for the eigenvalue `lambda`, one per Jordan
/// block, sizes descending (the Segre characteristic).
pub fn left_jordan_chains(a: &Mat, lambda: &Rational) -> Result<Vec<JordanBlockChain>> {
    let shifted = a.shift(lambda)?;
    let n = a.rows();

    // Nested left null spaces of powers of (A - lambda I); stop on
    // stabilization. powers[k] = (A - lambda I)^k.
    let mut powers = vec![Mat::identity(n)];
    let mut null_bases: Vec<Vec<RowVec>> = vec![Vec::new()];
    loop {
        let next = powers.last().unwrap().matmul(&shifted)?;
        let basis = next.left_null_space();
        if basis.len() == null_bases.last().unwrap().len() {
            break;
        }
        powers.push(next);
        null_bases.push(basis);
    }
    let depth = null_bases.len() - 1;
    if depth == 0 {
        return Err(Error::NotAnEigenvalue(lambda.to_string()));
    }

    let dim = |k: usize| null_bases[k].len();
    // Number of blocks of size >= k equals dim N_k - dim N_(k-1).
    let blocks_at_least = |k: usize| dim(k) - dim(k - 1);

    // Selected (grade, top vector) pairs, highest grade first.
    let mut selected: Vec<(usize, RowVec)> = Vec::new();
    for grade in (1..=depth).rev() {
        let longer = if grade < depth { blocks_at_least(grade + 1) } else { 0 };
        let need = blocks_at_least(grade) - longer;
        if need == 0 {
            continue;
        }
        // Context: N_(grade-1) plus grade-level elements of longer chains.
        let mut context: Vec<RowVec> = null_bases[grade - 1].clone();
        for (g, top) in &selected {
            context.push(top.mul_mat(&powers[g - grade])?);
        }
        let mut have = rank_of(&context);
        let mut chosen = 0;
        for candidate in &null_bases[grade] {
            if chosen == need {
                break;
            }
            let mut trial = context.clone();
            trial.push(candidate.clone());
            let r = rank_of(&trial);
            if r > have {
                context = trial;
                have = r;
                selected.push((grade, candidate.clone()));
                chosen += 1;
            }
        }
        debug_assert_eq!(chosen, need, "top-grade selection exhausted the basis");
    }

    let mut chains = Vec::with_capacity(selected.len());
    for (grade, top) in selected {
        let mut chain = vec![RowVec::zeros(0); grade];
        for idx in 0..grade {
            // chain[idx] = v^(idx+1) = top · (A - lambda I)^(grade-1-idx)
            chain[idx] = top.mul_mat(&powers[grade - 1 - idx])?;
        }
        chains.push(JordanBlockChain {
            eigenvalue: lambda.clone(),
            size: grade,
            chain,
        });
    }
    Ok(chains)
}

fn rank_of(rows: &[RowVec]) -> usize {
    if rows.is_empty() {
        0
    } else {
        Mat::from_rows(rows).rank()
    }
}

/// Complete eigenstructure of `a`: chains for every rational eigenvalue,
/// blocks ordered by (eigenvalue, size descending). `complete` is false when
/// the spectrum does not split over the rationals.
pub fn eigenstructure(a: &Mat) -> Result<Eigenstructure> {
    let (spectrum, fully_factored) = eigenvalues(a)?;
    let mut blocks = Vec::new();
    for (lambda, algebraic) in &spectrum {
        let chains = left_jordan_chains(a, lambda)?;
        debug_assert_eq!(
            chains.iter().map(|c| c.size).sum::<usize>(),
            *algebraic,
            "chain sizes must sum to the algebraic multiplicity"
        );
        blocks.extend(chains);
    }
    Ok(Eigenstructure {
        dimension: a.rows(),
        blocks,
        complete: fully_factored,
    })
}

/// True iff every Jordan block has size one. Errors when the spectrum does
/// not fully factor over the rationals.
pub fn is_diagonalizable(a: &Mat) -> Result<bool> {
    let (spectrum, fully_factored) = eigenvalues(a)?;
    if !fully_factored {
        return Err(Error::IrrationalSpectrum);
    }
    for (lambda, algebraic) in &spectrum {
        let geometric = a.shift(lambda)?.left_null_space().len();
        if geometric != *algebraic {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact self-check: every chain satisfies the strict relations, chain
/// vectors are jointly independent, and (when complete) block sizes sum to
/// the dimension.
pub fn verify_eigenstructure(a: &Mat, es: &Eigenstructure) -> bool {
    if !a.is_square() || a.rows() != es.dimension {
        return false;
    }
    let mut all_rows: Vec<RowVec> = Vec::new();
    for block in &es.blocks {
        if block.size == 0 || block.chain.len() != block.size {
            return false;
        }
        let shifted = match a.shift(&block.eigenvalue) {
            Ok(m) => m,
            Err(_) => return false,
        };
        if block.chain[0].is_zero() {
            return false;
        }
        for (k, v) in block.chain.iter().enumerate() {
            if v.len() != es.dimension {
                return false;
            }
            let image = match v.mul_mat(&shifted) {
                Ok(row) => row,
                Err(_) => return false,
            };
            let expected = if k == 0 {
                RowVec::zeros(es.dimension)
            } else {
                block.chain[k - 1].clone()
            };
            if image != expected {
                return false;
            }
        }
        all_rows.extend(block.chain.iter().cloned());
    }
    if rank_of(&all_rows) != all_rows.len() {
        return false;
    }
    if es.complete && all_rows.len() != es.dimension {
        return false;
    }
    true
}
