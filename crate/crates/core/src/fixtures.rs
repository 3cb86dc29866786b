//! Bundled worked systems: three Kronecker pairs with known verdicts and the
//! three-node path counterexample where the legacy leader-follower criterion
//! breaks down. The `examples` CLI command and the regression suite both run
//! these.

use crate::graph::{InputSelection, MASystem, WeightedDigraph};
use crate::mat::Mat;
use crate::rational::Rational;

fn halves(entries: [[i64; 3]; 3]) -> Mat {
    Mat::from_fn(3, 3, |i, j| Rational::ratio(entries[i][j], 2))
}

/// Defective 3x3 factor: eigenvalues 12 and a double 5 with a single size-2
/// Jordan block.
pub fn defective_factor() -> Mat {
    halves([[17, 8, -1], [7, 16, 1], [7, 6, 11]])
}

/// The same matrix as a weighted digraph (edge j -> i per nonzero entry).
pub fn defective_factor_graph() -> WeightedDigraph {
    let a = defective_factor();
    let mut edges = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            let w = a.at(i, j);
            if !w.is_zero() {
                edges.push((j + 1, i + 1, w.clone()));
            }
        }
    }
    WeightedDigraph::new(3, edges).expect("fixture graph is valid")
}

/// Diagonalizable 3x3 factor with spectrum {12, 5, 0}.
pub fn diagonalizable_factor() -> Mat {
    halves([[17, 12, -5], [7, 12, 5], [7, 12, 5]])
}

/// Upper-triangular-like factor with spectrum {1, 2, 3}.
pub fn triangular_factor_small() -> Mat {
    Mat::from_i64(&[&[1, 1, 2], &[0, 2, 0], &[0, 1, 3]])
}

/// Upper-triangular-like factor with spectrum {2, 3, 6}.
pub fn triangular_factor_large() -> Mat {
    Mat::from_i64(&[&[6, 1, 2], &[0, 2, 0], &[0, 5, 3]])
}

/// A Kronecker system with its known controllability verdict.
pub struct KronFixture {
    pub name: &'static str,
    pub a1: Mat,
    pub b1: InputSelection,
    pub a2: Mat,
    pub b2: InputSelection,
    pub controllable: bool,
}

/// The three bundled Kronecker systems.
pub fn kron_fixtures() -> Vec<KronFixture> {
    let defective = defective_factor();
    vec![
        KronFixture {
            name: "defective-square",
            a1: defective.clone(),
            b1: InputSelection::new(3, [2]).expect("valid"),
            a2: defective.clone(),
            b2: InputSelection::new(3, [2]).expect("valid"),
            controllable: false,
        },
        KronFixture {
            name: "diagonalizable-defective",
            a1: diagonalizable_factor(),
            b1: InputSelection::new(3, [1, 2]).expect("valid"),
            a2: defective,
            b2: InputSelection::full(3),
            controllable: true,
        },
        KronFixture {
            name: "triangular-pair",
            a1: triangular_factor_small(),
            b1: InputSelection::new(3, [1, 2]).expect("valid"),
            a2: triangular_factor_large(),
            b2: InputSelection::new(3, [2, 3]).expect("valid"),
            controllable: true,
        },
    ]
}

/// Undirected three-node path with unit weights.
pub fn path_graph() -> WeightedDigraph {
    WeightedDigraph::parse("graph 3 undirected\n1 2 1\n2 3 1\n").expect("fixture graph is valid")
}

/// A leader-follower system with its known verdict and the verdict the
/// legacy two-condition criterion reports.
pub struct MasFixture {
    pub name: &'static str,
    pub system: MASystem,
    pub controllable: bool,
    pub legacy_controllable: bool,
}

/// End-leader path with two-dimensional agents: the legacy criterion calls
/// it controllable, the full rank test does not.
pub fn path_counterexample() -> MasFixture {
    let laplacian = path_graph().laplacian().expect("loop-free path");
    let coupling = Mat::from_fn(2, 2, |i, j| {
        if i == j {
            Rational::ratio(3, 2)
        } else {
            Rational::ratio(1, 2)
        }
    });
    let input = Mat::from_i64(&[&[1], &[2]]);
    let system = MASystem::new(
        laplacian,
        coupling,
        InputSelection::new(3, [1]).expect("valid"),
        input,
    )
    .expect("fixture system is valid");
    MasFixture {
        name: "path-leader-coupling",
        system,
        controllable: false,
        legacy_controllable: true,
    }
}
