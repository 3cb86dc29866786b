//! Controllability decision procedures for Kronecker product systems.
//!
//! The main test ([`check_kron`]) ranks, per eigenvalue collision class, the
//! stacked products of lifted left eigenvectors with the input matrix: the
//! composite pair is controllable iff every class basis stays full rank
//! after multiplication by B1 (x) B2. A nonzero annihilating combination is
//! returned as an explicit witness otherwise.
//!
//! [`check_kron_diagonalizable`] is the cheaper four-condition criterion
//! available when at least one factor is diagonalizable, [`check_mas`] the
//! three-condition criterion for diffusively coupled leader-follower systems,
//! and [`check_mas_legacy`] the two-condition criterion from the earlier
//! literature (necessary but not sufficient, which the path fixture
//! demonstrates). [`kalman_oracle`] and [`pbh_oracle`] are independent
//! full-matrix oracles used for cross-validation.

use serde::{Deserialize, Serialize};

use crate::eigen::{eigenstructure, eigenvalues, is_diagonalizable, Eigenstructure};
use crate::error::{Error, Result};
use crate::graph::{InputSelection, MASystem};
use crate::mat::{Mat, RowVec};
use crate::rational::Rational;
use crate::spectral::{brute_eigenspace, collision_classes};

/// Outcome of a controllability check. `OracleOnly` means the structured
/// eigenvector path could not run (irrational spectrum) and the certified
/// answer came from the Kalman rank oracle instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Controllable,
    Uncontrollable,
    OracleOnly,
}

/// Which decision procedure produced the report.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Per-collision-class rank test on lifted eigenvector bases.
    CollisionRank,
    /// Four-condition fast path requiring a diagonalizable factor.
    DiagonalizableFactor,
    /// Three-condition criterion for leader-follower systems.
    LeaderFollower,
    /// Kalman rank test on the full composite matrix.
    KalmanOracle,
}

/// Rank evidence for one eigenvalue collision class.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassEvidence {
    pub sigma: Rational,
    pub dim: usize,
    pub rank: usize,
    pub pass: bool,
}

/// Verdict plus per-class evidence. `witness`, when present, is a nonzero
/// left eigenvector of the composite state matrix annihilating the input
/// matrix. `oracle_agreement` is filled by the `_with_oracle` variants.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ControllabilityReport {
    pub verdict: Verdict,
    pub method: Method,
    pub classes: Vec<ClassEvidence>,
    pub witness: Option<RowVec>,
    pub oracle_agreement: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
    /// The oracle's answer when `verdict` is `OracleOnly`; not serialized.
    #[serde(skip)]
    pub fallback_controllable: Option<bool>,
}

impl ControllabilityReport {
    /// The boolean answer, independent of which path produced it.
    pub fn is_controllable(&self) -> Option<bool> {
        match self.verdict {
            Verdict::Controllable => Some(true),
            Verdict::Uncontrollable => Some(false),
            Verdict::OracleOnly => self.fallback_controllable,
        }
    }
}

/// One cheap necessary condition and whether it holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Screen {
    pub name: &'static str,
    pub pass: bool,
}

/// Exact Kalman rank test: rank [B, AB, ..., A^(n-1)B] = n.
/// Works for any rational pair; needs no eigenvalue information.
pub fn kalman_oracle(a: &Mat, b: &Mat) -> Result<bool> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "state matrix must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "input matrix has {} rows against a {}x{} state matrix",
            b.rows(),
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut block = b.clone();
    let mut ctrb = b.clone();
    for _ in 1..n {
        block = a.matmul(&block)?;
        ctrb = ctrb.hstack(&block)?;
    }
    Ok(ctrb.rank() == n)
}

/// Eigenvector-orthogonality test: for every rational eigenvalue, the
/// stacked left eigenspace basis must stay full rank after multiplication
/// by `b`. Errors with [`Error::IrrationalSpectrum`] when the spectrum does
/// not split over the rationals.
pub fn pbh_oracle(a: &Mat, b: &Mat) -> Result<bool> {
    Ok(pbh_witness(a, b)?.is_none())
}

/// PBH sweep that also extracts a witness: the first (ascending) eigenvalue
/// whose eigenspace basis drops rank yields a nonzero left eigenvector
/// orthogonal to `b`.
pub fn pbh_witness(a: &Mat, b: &Mat) -> Result<Option<(Rational, RowVec)>> {
    if b.rows() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "input matrix has {} rows against a {}x{} state matrix",
            b.rows(),
            a.rows(),
            a.cols()
        )));
    }
    let (spectrum, fully_factored) = eigenvalues(a)?;
    if !fully_factored {
        return Err(Error::IrrationalSpectrum);
    }
    for (sigma, _) in &spectrum {
        let basis = brute_eigenspace(a, sigma);
        let stacked = Mat::from_rows(&basis);
        let image = stacked.matmul(b)?;
        if image.rank() < basis.len() {
            let z = image
                .left_null_space()
                .into_iter()
                .next()
                .expect("rank deficiency yields a null vector");
            let witness = z.mul_mat(&stacked)?;
            return Ok(Some((sigma.clone(), witness)));
        }
    }
    Ok(None)
}

fn check_selection(a: &Mat, sel: &InputSelection, which: &str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "{which} factor must be square, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if sel.total_nodes() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{which} selection covers {} nodes against a {}x{} matrix",
            sel.total_nodes(),
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}

/// Main structured test for the composite pair (A1 (x) A2, B1 (x) B2).
///
/// Every collision class (including singletons) runs the same rank test:
/// with E stacking the lifted eigenvector basis of the class, the class
/// passes iff rank(E·B) equals the basis size — equivalently, no nonzero
/// combination of the class eigenspace is orthogonal to B. When both factor
/// spectra are rational the verdict is certified by construction; otherwise
/// the report degrades to the Kalman oracle with `OracleOnly`.
///
/// ```
/// use kronctrl_core::{check_kron, fixtures, InputSelection, Verdict};
///
/// let a = fixtures::defective_factor();
/// let b = InputSelection::new(3, [2])?;
/// let report = check_kron(&a, &b, &a, &b)?;
/// assert_eq!(report.verdict, Verdict::Uncontrollable);
/// assert!(report.witness.is_some());
/// # Ok::<(), kronctrl_core::Error>(())
/// ```
pub fn check_kron(
    a1: &Mat,
    b1: &InputSelection,
    a2: &Mat,
    b2: &InputSelection,
) -> Result<ControllabilityReport> {
    check_selection(a1, b1, "first")?;
    check_selection(a2, b2, "second")?;
    let (_, full1) = eigenvalues(a1)?;
    let (_, full2) = eigenvalues(a2)?;
    let input = b1.matrix().kron(&b2.matrix());
    if !full1 || !full2 {
        let composite = a1.kron(a2);
        let ok = kalman_oracle(&composite, &input)?;
        return Ok(ControllabilityReport {
            verdict: Verdict::OracleOnly,
            method: Method::KalmanOracle,
            classes: Vec::new(),
            witness: None,
            oracle_agreement: None,
            note: Some(format!(
                "factor spectrum not fully rational; Kalman rank verdict: {}",
                verdict_word(ok)
            )),
            fallback_controllable: Some(ok),
        });
    }
    let es1 = eigenstructure(a1)?;
    let es2 = eigenstructure(a2)?;
    let mut classes = Vec::new();
    let mut witness = None;
    for class in collision_classes(&es1, &es2) {
        let stacked = Mat::from_rows(&class.basis);
        let image = stacked.matmul(&input)?;
        let dim = class.basis.len();
        let rank = image.rank();
        let pass = rank == dim;
        if !pass && witness.is_none() {
            let z = image
                .left_null_space()
                .into_iter()
                .next()
                .expect("rank deficiency yields a null vector");
            witness = Some(z.mul_mat(&stacked)?);
        }
        classes.push(ClassEvidence {
            sigma: class.product,
            dim,
            rank,
            pass,
        });
    }
    let verdict = if classes.iter().all(|c| c.pass) {
        Verdict::Controllable
    } else {
        Verdict::Uncontrollable
    };
    Ok(ControllabilityReport {
        verdict,
        method: Method::CollisionRank,
        classes,
        witness,
        oracle_agreement: None,
        note: None,
        fallback_controllable: None,
    })
}

/// [`check_kron`] plus a Kalman cross-check on the full composite; any
/// disagreement would indicate an implementation bug.
pub fn check_kron_with_oracle(
    a1: &Mat,
    b1: &InputSelection,
    a2: &Mat,
    b2: &InputSelection,
) -> Result<ControllabilityReport> {
    let mut report = check_kron(a1, b1, a2, b2)?;
    let composite = a1.kron(a2);
    let input = b1.matrix().kron(&b2.matrix());
    let oracle = kalman_oracle(&composite, &input)?;
    report.oracle_agreement = Some(match report.verdict {
        Verdict::Controllable => oracle,
        Verdict::Uncontrollable => !oracle,
        Verdict::OracleOnly => true,
    });
    Ok(report)
}

fn verdict_word(controllable: bool) -> &'static str {
    if controllable {
        "controllable"
    } else {
        "uncontrollable"
    }
}

/// Fast path for a diagonalizable factor: the composite is controllable iff
/// (1) both factor pairs are controllable, (2) a zero eigenvalue of A1
/// forces full actuation of factor 2, (3) symmetrically for A2, and (4) for
/// every nonzero product collision the vectors (v_i·B1) (x) (w_j·B2) built
/// from block-top eigenvectors are linearly independent.
///
/// Agrees with [`check_kron`] on every input it accepts.
pub fn check_kron_diagonalizable(
    a1: &Mat,
    b1: &InputSelection,
    a2: &Mat,
    b2: &InputSelection,
) -> Result<ControllabilityReport> {
    check_selection(a1, b1, "first")?;
    check_selection(a2, b2, "second")?;
    let diag1 = is_diagonalizable(a1)?;
    let diag2 = is_diagonalizable(a2)?;
    if !diag1 && !diag2 {
        return Err(Error::NeitherFactorDiagonalizable);
    }
    let es1 = eigenstructure(a1)?;
    let es2 = eigenstructure(a2)?;
    let s1 = b1.matrix();
    let s2 = b2.matrix();

    let mut failed: Vec<String> = Vec::new();
    let factor1_ok = kalman_oracle(a1, &s1)?;
    let factor2_ok = kalman_oracle(a2, &s2)?;
    if !factor1_ok {
        failed.push("first factor pair uncontrollable".into());
    }
    if !factor2_ok {
        failed.push("second factor pair uncontrollable".into());
    }
    let zero1_ok = !es1.has_zero_eigenvalue() || b2.is_full();
    let zero2_ok = !es2.has_zero_eigenvalue() || b1.is_full();
    if !zero1_ok {
        failed.push("zero eigenvalue in factor 1 requires full actuation of factor 2".into());
    }
    if !zero2_ok {
        failed.push("zero eigenvalue in factor 2 requires full actuation of factor 1".into());
    }

    // Condition 4 on nonzero products, one rank test per collision group of
    // block tops. Singleton groups are subsumed by factor controllability
    // but recorded as evidence anyway.
    let mut classes = Vec::new();
    let mut witness: Option<RowVec> = None;
    let mut products_ok = true;
    for class in collision_classes(&es1, &es2) {
        if class.product.is_zero() {
            continue;
        }
        let tops: Vec<RowVec> = class
            .members
            .iter()
            .map(|&(i, j)| es1.blocks[i].top().kron(es2.blocks[j].top()))
            .collect();
        let images: Vec<RowVec> = class
            .members
            .iter()
            .map(|&(i, j)| {
                let left = es1.blocks[i].top().mul_mat(&s1)?;
                let right = es2.blocks[j].top().mul_mat(&s2)?;
                Ok(left.kron(&right))
            })
            .collect::<Result<_>>()?;
        let rank = Mat::from_rows(&images).rank();
        let dim = images.len();
        let pass = rank == dim;
        if !pass {
            products_ok = false;
            if witness.is_none() {
                let z = Mat::from_rows(&images)
                    .left_null_space()
                    .into_iter()
                    .next()
                    .expect("rank deficiency yields a null vector");
                witness = Some(z.mul_mat(&Mat::from_rows(&tops))?);
            }
        }
        classes.push(ClassEvidence {
            sigma: class.product,
            dim,
            rank,
            pass,
        });
    }
    if !products_ok {
        failed.push("dependent eigenvector products at a nonzero collision".into());
    }

    let controllable = factor1_ok && factor2_ok && zero1_ok && zero2_ok && products_ok;
    if !controllable && witness.is_none() {
        witness = fast_path_witness(
            a1, b1, a2, b2, &es1, &es2, factor1_ok, factor2_ok, zero1_ok,
        )?;
    }
    Ok(ControllabilityReport {
        verdict: if controllable {
            Verdict::Controllable
        } else {
            Verdict::Uncontrollable
        },
        method: Method::DiagonalizableFactor,
        classes,
        witness,
        oracle_agreement: None,
        note: if failed.is_empty() {
            None
        } else {
            Some(format!("failed: {}", failed.join("; ")))
        },
        fallback_controllable: None,
    })
}

/// Witness construction for fast-path failures outside condition 4.
#[allow(clippy::too_many_arguments)]
fn fast_path_witness(
    a1: &Mat,
    b1: &InputSelection,
    a2: &Mat,
    b2: &InputSelection,
    es1: &Eigenstructure,
    es2: &Eigenstructure,
    factor1_ok: bool,
    factor2_ok: bool,
    zero1_ok: bool,
) -> Result<Option<RowVec>> {
    if !factor1_ok {
        // phi·B1 = 0 for a factor eigenvector phi; phi (x) w annihilates the
        // composite input for any eigenvector w of the other factor.
        if let Some((_, phi)) = pbh_witness(a1, &b1.matrix())? {
            return Ok(Some(phi.kron(es2.blocks[0].top())));
        }
    }
    if !factor2_ok {
        if let Some((_, psi)) = pbh_witness(a2, &b2.matrix())? {
            return Ok(Some(es1.blocks[0].top().kron(&psi)));
        }
    }
    if !zero1_ok {
        // v0 (x) e_t with v0 a zero-eigenvalue eigenvector and t unactuated:
        // v0·A1 = 0 makes it an eigenvector regardless of the right factor.
        let v0 = es1
            .blocks
            .iter()
            .find(|b| b.eigenvalue.is_zero())
            .expect("condition 2 failed, so a zero block exists")
            .top();
        let t = (1..=b2.total_nodes())
            .find(|&i| !b2.contains(i))
            .expect("condition 2 failed, so some node is unactuated");
        return Ok(Some(v0.kron(&RowVec::unit(b2.total_nodes(), t - 1))));
    }
    // zero eigenvalue in factor 2 with factor 1 not fully actuated
    let w0 = es2
        .blocks
        .iter()
        .find(|b| b.eigenvalue.is_zero())
        .expect("condition 3 failed, so a zero block exists")
        .top();
    let t = (1..=b1.total_nodes())
        .find(|&i| !b1.contains(i))
        .expect("condition 3 failed, so some node is unactuated");
    Ok(Some(RowVec::unit(b1.total_nodes(), t - 1).kron(w0)))
}

/// Cheap necessary conditions; any failure proves uncontrollability without
/// building the composite. Zero-eigenvalue detection is rank-based, so the
/// screens run even on irrational spectra.
pub fn necessary_screens(
    a1: &Mat,
    b1: &InputSelection,
    a2: &Mat,
    b2: &InputSelection,
) -> Result<Vec<Screen>> {
    check_selection(a1, b1, "first")?;
    check_selection(a2, b2, "second")?;
    let singular1 = a1.rank() < a1.rows();
    let singular2 = a2.rank() < a2.rows();
    Ok(vec![
        Screen {
            name: "factor1_controllable",
            pass: kalman_oracle(a1, &b1.matrix())?,
        },
        Screen {
            name: "factor2_controllable",
            pass: kalman_oracle(a2, &b2.matrix())?,
        },
        Screen {
            name: "zero_eigenvalue_factor1_needs_full_b2",
            pass: !singular1 || b2.is_full(),
        },
        Screen {
            name: "zero_eigenvalue_factor2_needs_full_b1",
            pass: !singular2 || b1.is_full(),
        },
    ])
}

/// The three conditions of the leader-follower criterion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MasConditions {
    /// (L, Delta) is a controllable pair.
    pub pair_controllable: bool,
    /// rank(B) equals the agent dimension.
    pub input_full_rank: bool,
    /// A zero eigenvalue of H forces every agent to be a leader.
    pub coupling_zero_needs_all_leaders: bool,
}

impl MasConditions {
    pub fn all(&self) -> bool {
        self.pair_controllable && self.input_full_rank && self.coupling_zero_needs_all_leaders
    }
}

/// Evaluates the three leader-follower conditions.
pub fn mas_conditions(sys: &MASystem) -> Result<MasConditions> {
    let pair_controllable = kalman_oracle(sys.laplacian(), &sys.leader_selection().matrix())?;
    let input_full_rank = sys.agent_input().rank() == sys.agent_dim();
    let coupling_singular = sys.inner_coupling().rank() < sys.agent_dim();
    Ok(MasConditions {
        pair_controllable,
        input_full_rank,
        coupling_zero_needs_all_leaders: !coupling_singular || sys.leader_selection().is_full(),
    })
}

/// Controllability of the leader-follower pair (-L (x) H, Delta (x) B) via
/// the three-condition criterion. On failure a witness is extracted from the
/// composite when its spectrum is rational.
pub fn check_mas(sys: &MASystem) -> Result<ControllabilityReport> {
    let conditions = mas_conditions(sys)?;
    let controllable = conditions.all();
    let mut failed = Vec::new();
    if !conditions.pair_controllable {
        failed.push("leader selection does not control the coupling graph");
    }
    if !conditions.input_full_rank {
        failed.push("agent input matrix is not full row rank");
    }
    if !conditions.coupling_zero_needs_all_leaders {
        failed.push("singular inner coupling requires every agent to lead");
    }
    let witness = if controllable {
        None
    } else {
        let (state, input) = sys.composite();
        match pbh_witness(&state, &input) {
            Ok(found) => found.map(|(_, w)| w),
            Err(Error::IrrationalSpectrum) => None,
            Err(e) => return Err(e),
        }
    };
    Ok(ControllabilityReport {
        verdict: if controllable {
            Verdict::Controllable
        } else {
            Verdict::Uncontrollable
        },
        method: Method::LeaderFollower,
        classes: Vec::new(),
        witness,
        oracle_agreement: None,
        note: if failed.is_empty() {
            None
        } else {
            Some(format!("failed: {}", failed.join("; ")))
        },
        fallback_controllable: None,
    })
}

/// Outcome of the legacy two-condition criterion next to the exact oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LegacyMasReport {
    /// What the two-condition criterion claims.
    pub legacy_controllable: bool,
    /// Kalman verdict on the full composite.
    pub oracle_controllable: bool,
    pub agrees_with_oracle: bool,
}

/// The two-condition criterion from the earlier literature: (H, B)
/// controllable and (L_ff, L_fl) controllable after permuting leaders to a
/// prefix. Necessary but not sufficient; the report flags any disagreement
/// with the exact Kalman verdict on the composite.
pub fn check_mas_legacy(sys: &MASystem) -> Result<LegacyMasReport> {
    let n = sys.agent_count();
    let leaders = sys.leader_selection().indices();
    let mut order: Vec<usize> = leaders.to_vec();
    order.extend((1..=n).filter(|i| !sys.leader_selection().contains(*i)));
    let permuted = Mat::from_fn(n, n, |i, j| {
        sys.laplacian().at(order[i] - 1, order[j] - 1).clone()
    });
    let nl = leaders.len();
    let coupling_ok = kalman_oracle(sys.inner_coupling(), sys.agent_input())?;
    let graph_ok = if nl == n {
        true
    } else {
        let l_ff = permuted.block(nl, n, nl, n);
        let l_fl = permuted.block(nl, n, 0, nl);
        kalman_oracle(&l_ff, &l_fl)?
    };
    let legacy = coupling_ok && graph_ok;
    let (state, input) = sys.composite();
    let oracle = kalman_oracle(&state, &input)?;
    Ok(LegacyMasReport {
        legacy_controllable: legacy,
        oracle_controllable: oracle,
        agrees_with_oracle: legacy == oracle,
    })
}

/// Observability of the composite pair (A1 (x) A2, C1 (x) C2) with node
/// selections as measurements, decided by duality: controllability of the
/// transposed system.
pub fn check_kron_observability(
    a1: &Mat,
    c1: &InputSelection,
    a2: &Mat,
    c2: &InputSelection,
) -> Result<ControllabilityReport> {
    check_kron(&a1.transpose(), c1, &a2.transpose(), c2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn sel(total: usize, nodes: &[usize]) -> InputSelection {
        InputSelection::new(total, nodes.iter().copied()).unwrap()
    }

    fn in_span_of(v: &RowVec, w: &RowVec) -> bool {
        !v.is_zero() && Mat::from_rows(&[v.clone(), w.clone()]).rank() == 1
    }

    #[test]
    fn defective_square_is_uncontrollable_with_reference_witness() {
        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        let report = check_kron_with_oracle(&a, &b, &a, &b).unwrap();
        assert_eq!(report.verdict, Verdict::Uncontrollable);
        assert_eq!(report.method, Method::CollisionRank);
        assert_eq!(report.oracle_agreement, Some(true));

        // Products of {5,5,12}x{5,5,12}: classes 25, 60, 144 ascending.
        let sigmas: Vec<Rational> = report.classes.iter().map(|c| c.sigma.clone()).collect();
        assert_eq!(sigmas, vec![r(25, 1), r(60, 1), r(144, 1)]);
        let class25 = &report.classes[0];
        assert_eq!(class25.dim, 2);
        assert_eq!(class25.rank, 1);
        assert!(!class25.pass);
        assert!(report.classes[2].pass);

        let witness = report.witness.as_ref().unwrap();
        let eta2 = RowVec::from_i64(&[0, -1, 1, 1, 0, -1, -1, 1, 0]);
        assert!(in_span_of(witness, &eta2));
    }

    #[test]
    fn diagonalizable_defective_pair_is_controllable_both_ways() {
        let a1 = fixtures::diagonalizable_factor();
        let a2 = fixtures::defective_factor();
        let b1 = sel(3, &[1, 2]);
        let b2 = InputSelection::full(3);
        let full = check_kron_with_oracle(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(full.verdict, Verdict::Controllable);
        assert_eq!(full.oracle_agreement, Some(true));

        let fast = check_kron_diagonalizable(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(fast.verdict, Verdict::Controllable);
        assert_eq!(fast.method, Method::DiagonalizableFactor);
    }

    #[test]
    fn dropping_the_third_input_breaks_the_zero_eigenvalue_condition() {
        let a1 = fixtures::diagonalizable_factor();
        let a2 = fixtures::defective_factor();
        let b1 = sel(3, &[1, 2]);
        let b2 = sel(3, &[1, 2]);
        let fast = check_kron_diagonalizable(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(fast.verdict, Verdict::Uncontrollable);
        assert!(fast.note.as_deref().unwrap().contains("zero eigenvalue in factor 1"));

        // The full test and the oracle agree.
        let full = check_kron_with_oracle(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(full.verdict, Verdict::Uncontrollable);
        assert_eq!(full.oracle_agreement, Some(true));

        // The fast-path witness is a genuine annihilating eigenvector.
        let witness = fast.witness.as_ref().unwrap();
        let composite = a1.kron(&a2);
        assert!(witness.mul_mat(&composite).unwrap().is_zero());
        let input = b1.matrix().kron(&b2.matrix());
        assert!(witness.mul_mat(&input).unwrap().is_zero());
    }

    #[test]
    fn triangular_pair_is_controllable_with_full_collision_rank() {
        let a1 = fixtures::triangular_factor_small();
        let a2 = fixtures::triangular_factor_large();
        let b1 = sel(3, &[1, 2]);
        let b2 = sel(3, &[2, 3]);
        let report = check_kron_with_oracle(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(report.verdict, Verdict::Controllable);
        assert_eq!(report.oracle_agreement, Some(true));
        let six = report.classes.iter().find(|c| c.sigma == r(6, 1)).unwrap();
        assert_eq!(six.dim, 3);
        assert_eq!(six.rank, 3);

        let fast = check_kron_diagonalizable(&a1, &b1, &a2, &b2).unwrap();
        assert_eq!(fast.verdict, Verdict::Controllable);
    }

    #[test]
    fn fast_path_requires_a_diagonalizable_factor() {
        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        assert!(matches!(
            check_kron_diagonalizable(&a, &b, &a, &b),
            Err(Error::NeitherFactorDiagonalizable)
        ));
    }

    #[test]
    fn irrational_spectrum_falls_back_to_the_oracle() {
        // Companion of s^2 - 2: spectrum {±sqrt 2}.
        let a1 = Mat::from_i64(&[&[0, 1], &[2, 0]]);
        let a2 = Mat::identity(2);
        let report = check_kron(&a1, &sel(2, &[1]), &a2, &sel(2, &[1, 2])).unwrap();
        assert_eq!(report.verdict, Verdict::OracleOnly);
        assert_eq!(report.method, Method::KalmanOracle);
        assert!(report.classes.is_empty());
        assert!(report.note.is_some());
        // (a1, e1) is controllable and b2 is full, so the oracle says yes.
        assert_eq!(report.fallback_controllable, Some(true));
        assert_eq!(report.is_controllable(), Some(true));

        // Dropping the second factor's input breaks it: a1 (x) 1 with a
        // one-node second factor and no actuation anywhere useful.
        let report = check_kron(&a1, &sel(2, &[2]), &a2, &sel(2, &[1])).unwrap();
        assert_eq!(report.verdict, Verdict::OracleOnly);
        assert_eq!(report.fallback_controllable, Some(false));
    }

    #[test]
    fn screens_behave_as_necessary_conditions() {
        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        // The defective square fails only through collisions; every screen
        // passes even though the composite is uncontrollable.
        let screens = necessary_screens(&a, &b, &a, &b).unwrap();
        assert!(screens.iter().all(|s| s.pass));

        let singular = fixtures::diagonalizable_factor();
        let screens =
            necessary_screens(&singular, &sel(3, &[1, 2]), &a, &sel(3, &[2])).unwrap();
        let zero_screen = screens
            .iter()
            .find(|s| s.name == "zero_eigenvalue_factor1_needs_full_b2")
            .unwrap();
        assert!(!zero_screen.pass);

        let screens =
            necessary_screens(&a, &InputSelection::empty(3), &a, &sel(3, &[2])).unwrap();
        assert!(!screens[0].pass);
    }

    #[test]
    fn kalman_oracle_basics() {
        let zero = Mat::zeros(1, 1);
        let one = Mat::identity(1);
        assert!(kalman_oracle(&zero, &one).unwrap());

        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        let composite = a.kron(&a);
        let input = b.matrix().kron(&b.matrix());
        assert!(!kalman_oracle(&composite, &input).unwrap());

        let (state, input) = fixtures::path_counterexample().system.composite();
        assert!(!kalman_oracle(&state, &input).unwrap());

        assert!(kalman_oracle(&Mat::zeros(2, 3), &one).is_err());
    }

    #[test]
    fn pbh_agrees_with_kalman_and_rejects_irrational_spectra() {
        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        let composite = a.kron(&a);
        let input = b.matrix().kron(&b.matrix());
        assert_eq!(
            pbh_oracle(&composite, &input).unwrap(),
            kalman_oracle(&composite, &input).unwrap()
        );

        let (state, g) = fixtures::path_counterexample().system.composite();
        assert_eq!(
            pbh_oracle(&state, &g).unwrap(),
            kalman_oracle(&state, &g).unwrap()
        );

        let repeated = Mat::identity(2);
        let e1 = sel(2, &[1]).matrix();
        assert!(!pbh_oracle(&repeated, &e1).unwrap());
        let distinct = Mat::from_i64(&[&[1, 0], &[0, 2]]);
        let ones = Mat::from_i64(&[&[1], &[1]]);
        assert!(pbh_oracle(&distinct, &ones).unwrap());

        let rot = Mat::from_i64(&[&[0, 1], &[-1, 0]]);
        assert!(matches!(
            pbh_oracle(&rot, &Mat::identity(2)),
            Err(Error::IrrationalSpectrum)
        ));
    }

    #[test]
    fn path_counterexample_reports() {
        let fixture = fixtures::path_counterexample();
        let conditions = mas_conditions(&fixture.system).unwrap();
        assert!(conditions.pair_controllable);
        assert!(!conditions.input_full_rank);
        assert!(conditions.coupling_zero_needs_all_leaders);

        let report = check_mas(&fixture.system).unwrap();
        assert_eq!(report.verdict, Verdict::Uncontrollable);
        assert_eq!(report.method, Method::LeaderFollower);
        assert!(report.note.as_deref().unwrap().contains("full row rank"));

        // The witness annihilates the input and is a left eigenvector.
        let witness = report.witness.as_ref().unwrap();
        let (state, input) = fixture.system.composite();
        assert!(witness.mul_mat(&input).unwrap().is_zero());
        let image = witness.mul_mat(&state).unwrap();
        // image = sigma * witness for some sigma: rank of the stack is 1.
        assert!(Mat::from_rows(&[witness.clone(), image]).rank() <= 1);

        let legacy = check_mas_legacy(&fixture.system).unwrap();
        assert!(legacy.legacy_controllable);
        assert!(!legacy.oracle_controllable);
        assert!(!legacy.agrees_with_oracle);
    }

    #[test]
    fn full_rank_input_restores_controllability() {
        let fixture = fixtures::path_counterexample();
        let sys = MASystem::new(
            fixture.system.laplacian().clone(),
            fixture.system.inner_coupling().clone(),
            fixture.system.leader_selection().clone(),
            Mat::identity(2),
        )
        .unwrap();
        let report = check_mas(&sys).unwrap();
        assert_eq!(report.verdict, Verdict::Controllable);
        let (state, input) = sys.composite();
        assert!(kalman_oracle(&state, &input).unwrap());

        let legacy = check_mas_legacy(&sys).unwrap();
        assert!(legacy.legacy_controllable);
        assert!(legacy.agrees_with_oracle);
    }

    #[test]
    fn full_actuation_is_always_controllable() {
        let fixture = fixtures::path_counterexample();
        let sys = MASystem::new(
            fixture.system.laplacian().clone(),
            fixture.system.inner_coupling().clone(),
            InputSelection::full(3),
            Mat::identity(2),
        )
        .unwrap();
        assert_eq!(check_mas(&sys).unwrap().verdict, Verdict::Controllable);
    }

    #[test]
    fn disconnected_follower_fails_both_legacy_and_oracle() {
        // Nodes 1-2 coupled, node 3 isolated; leader {1}.
        let g = WeightedDigraphFixture::disconnected();
        let l = g.laplacian().unwrap();
        let fixture = fixtures::path_counterexample();
        let sys = MASystem::new(
            l,
            fixture.system.inner_coupling().clone(),
            InputSelection::new(3, [1]).unwrap(),
            fixture.system.agent_input().clone(),
        )
        .unwrap();
        let legacy = check_mas_legacy(&sys).unwrap();
        assert!(!legacy.legacy_controllable);
        assert!(!legacy.oracle_controllable);
        assert!(legacy.agrees_with_oracle);
    }

    struct WeightedDigraphFixture;

    impl WeightedDigraphFixture {
        fn disconnected() -> crate::graph::WeightedDigraph {
            crate::graph::WeightedDigraph::parse("graph 3 undirected\n1 2 1\n").unwrap()
        }
    }

    #[test]
    fn legacy_handles_non_prefix_leaders() {
        // Leader in the middle of the path: permutation must move it first.
        let laplacian = fixtures::path_graph().laplacian().unwrap();
        let sys = MASystem::new(
            laplacian,
            Mat::identity(2),
            InputSelection::new(3, [2]).unwrap(),
            Mat::identity(2),
        )
        .unwrap();
        let legacy = check_mas_legacy(&sys).unwrap();
        // With the middle node leading, followers 1 and 3 receive identical
        // coupling: (L_ff, L_fl) is rank deficient.
        assert!(!legacy.legacy_controllable);
        assert!(!legacy.oracle_controllable);
        assert!(legacy.agrees_with_oracle);
    }

    #[test]
    fn observability_by_duality() {
        let a1 = fixtures::diagonalizable_factor();
        let a2 = fixtures::defective_factor();
        let c1 = sel(3, &[1, 2]);
        let c2 = InputSelection::full(3);
        // The fixture pair is controllable; its transpose measured the same
        // way need not be, but full measurement always is.
        let report =
            check_kron_observability(&a1, &InputSelection::full(3), &a2, &InputSelection::full(3))
                .unwrap();
        assert_eq!(report.verdict, Verdict::Controllable);

        let dual = check_kron_observability(&a1.transpose(), &c1, &a2.transpose(), &c2).unwrap();
        // Transposing twice recovers the original controllable verdict.
        assert_eq!(dual.verdict, Verdict::Controllable);

        let a = fixtures::defective_factor();
        let c = sel(3, &[2]);
        let dual = check_kron_observability(&a.transpose(), &c, &a.transpose(), &c).unwrap();
        assert_eq!(dual.verdict, Verdict::Uncontrollable);
    }

    #[test]
    fn report_serializes_to_the_documented_schema() {
        let a = fixtures::defective_factor();
        let b = sel(3, &[2]);
        let report = check_kron(&a, &b, &a, &b).unwrap();
        let json: serde_json::Value =
            serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(json["verdict"], "uncontrollable");
        assert_eq!(json["method"], "collision_rank");
        assert_eq!(json["classes"][0]["sigma"], "25");
        assert_eq!(json["classes"][0]["dim"], 2);
        assert_eq!(json["classes"][0]["rank"], 1);
        assert_eq!(json["classes"][0]["pass"], false);
        assert!(json["witness"].as_array().unwrap()[1].is_string());
        assert!(json["oracle_agreement"].is_null());
        assert!(json.get("note").is_none());

        let back: ControllabilityReport = serde_json::from_value(json).unwrap();
        assert_eq!(back.verdict, Verdict::Uncontrollable);
    }
}
