//! Weighted digraphs, Kronecker product composition, Laplacians and
//! input-node selections.
//!
//! Nodes are 1-based everywhere in this module, matching the text formats.
//! The adjacency convention: entry (i, j) is the weight of the edge j -> i,
//! and the diagonal carries self-loop weights. The composite node (i, p) maps
//! to linear index (i-1)·n + p so that the adjacency matrix of a product
//! graph is exactly the Kronecker product of the factor adjacency matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mat::Mat;
use crate::rational::Rational;

/// Directed graph with nonzero rational edge weights; self-loops allowed,
/// at most one edge per ordered pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeightedDigraph {
    node_count: usize,
    edges: BTreeMap<(usize, usize), Rational>,
}

impl WeightedDigraph {
    /// Builds a graph from `(from, to, weight)` triples (1-based nodes).
    pub fn new(
        node_count: usize,
        edges: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (from, to, weight) in edges {
            Self::check_edge(node_count, from, to, &weight)?;
            if map.insert((from, to), weight).is_some() {
                return Err(Error::Invalid(format!("duplicate edge {from} -> {to}")));
            }
        }
        Ok(WeightedDigraph { node_count, edges: map })
    }

    fn check_edge(node_count: usize, from: usize, to: usize, weight: &Rational) -> Result<()> {
        if from == 0 || from > node_count || to == 0 || to > node_count {
            return Err(Error::Invalid(format!(
                "edge {from} -> {to} out of range 1..={node_count}"
            )));
        }
        if weight.is_zero() {
            return Err(Error::Invalid(format!("zero weight on edge {from} -> {to}")));
        }
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in deterministic (from, to) order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.edges.iter().map(|(&(f, t), w)| (f, t, w))
    }

    pub fn weight(&self, from: usize, to: usize) -> Option<&Rational> {
        self.edges.get(&(from, to))
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.keys().any(|&(f, t)| f == t)
    }

    /// Adjacency matrix: entry (i, j) is the weight of edge j -> i.
    pub fn adjacency(&self) -> Mat {
        let mut a = Mat::zeros(self.node_count, self.node_count);
        for (&(from, to), w) in &self.edges {
            a.set(to - 1, from - 1, w.clone());
        }
        a
    }

    /// Kronecker product graph. Node (i, p) of the result is index
    /// (i-1)·n + p; an edge (i,p) -> (j,q) exists iff i -> j and p -> q do,
    /// with weight equal to the product of the factor weights.
    pub fn kron_graph(&self, other: &WeightedDigraph) -> WeightedDigraph {
        let n = other.node_count;
        let mut edges = BTreeMap::new();
        for (&(i, j), w1) in &self.edges {
            for (&(p, q), w2) in &other.edges {
                let from = (i - 1) * n + p;
                let to = (j - 1) * n + q;
                edges.insert((from, to), w1 * w2);
            }
        }
        WeightedDigraph {
            node_count: self.node_count * n,
            edges,
        }
    }

    /// Laplacian L = D - A with D the diagonal of row sums of the adjacency
    /// matrix. Requires a loop-free graph; every row of L sums to zero.
    pub fn laplacian(&self) -> Result<Mat> {
        if let Some(&(node, _)) = self.edges.keys().find(|&&(f, t)| f == t) {
            return Err(Error::SelfLoopPresent(node));
        }
        let a = self.adjacency();
        let n = self.node_count;
        let mut l = a.neg();
        for i in 0..n {
            let row_sum: Rational = (0..n).map(|j| a.at(i, j).clone()).sum();
            l.set(i, i, row_sum);
        }
        Ok(l)
    }

    /// Graph text format:
    /// header `graph <node_count> directed|undirected`, one `from to weight`
    /// edge per line, `#` comments. Undirected edges expand to symmetric
    /// pairs at parse time.
    ///
    /// ```
    /// use kronctrl_core::WeightedDigraph;
    ///
    /// let g = WeightedDigraph::parse("graph 3 undirected\n1 2 1\n2 3 1/2\n")?;
    /// assert_eq!(g.node_count(), 3);
    /// assert_eq!(g.edge_count(), 4);
    /// # Ok::<(), kronctrl_core::Error>(())
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut node_count = None;
        let mut directed = true;
        let mut edges: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let n = match node_count {
                None => {
                    if fields.len() != 3 || fields[0] != "graph" {
                        return Err(Error::Parse {
                            line: line_no,
                            msg: "expected header 'graph <node_count> directed|undirected'".into(),
                        });
                    }
                    let count: usize = fields[1].parse().map_err(|_| Error::Parse {
                        line: line_no,
                        msg: format!("invalid node count '{}'", fields[1]),
                    })?;
                    directed = match fields[2] {
                        "directed" => true,
                        "undirected" => false,
                        other => {
                            return Err(Error::Parse {
                                line: line_no,
                                msg: format!("expected directed|undirected, found '{other}'"),
                            })
                        }
                    };
                    node_count = Some(count);
                    continue;
                }
                Some(n) => n,
            };
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected 'from to weight', found '{line}'"),
                });
            }
            let parse_node = |tok: &str| -> Result<usize> {
                tok.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("invalid node index '{tok}'"),
                })
            };
            let from = parse_node(fields[0])?;
            let to = parse_node(fields[1])?;
            let weight = Rational::from_str(fields[2]).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            Self::check_edge(n, from, to, &weight).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let mut insert = |f: usize, t: usize| -> Result<()> {
                if edges.insert((f, t), weight.clone()).is_some() {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("duplicate edge {f} -> {t}"),
                    });
                }
                Ok(())
            };
            insert(from, to)?;
            if !directed && from != to {
                insert(to, from)?;
            }
        }
        match node_count {
            Some(n) => Ok(WeightedDigraph { node_count: n, edges }),
            None => Err(Error::Parse {
                line: 1,
                msg: "empty graph file".into(),
            }),
        }
    }

    /// Serializes in directed form; `parse(serialize(g)) == g`.
    pub fn serialize(&self) -> String {
        let mut out = format!("graph {} directed\n", self.node_count);
        for (&(from, to), w) in &self.edges {
            let _ = writeln!(out, "{from} {to} {w}");
        }
        out
    }

    /// DOT export. With `pair_dims = Some((big, small))` node labels render as
    /// "i,p" pairs of the factor indices instead of flat indices.
    pub fn to_dot(&self, pair_dims: Option<(usize, usize)>) -> String {
        let label = |idx: usize| -> String {
            match pair_dims {
                Some((_, n)) => format!("{},{}", (idx - 1) / n + 1, (idx - 1) % n + 1),
                None => idx.to_string(),
            }
        };
        let mut out = String::from("digraph {\n");
        for idx in 1..=self.node_count {
            let _ = writeln!(out, "  n{idx} [label=\"{}\"];", label(idx));
        }
        for (&(from, to), w) in &self.edges {
            let _ = writeln!(out, "  n{from} -> n{to} [label=\"{w}\"];");
        }
        out.push_str("}\n");
        out
    }
}

/// The set of actuated (or measured) nodes of one factor network, kept in
/// column-selection form: as a matrix it is `[e_i1^T, ..., e_im^T]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InputSelection {
    total_nodes: usize,
    actuated: Vec<usize>,
}

impl InputSelection {
    /// Builds a selection from 1-based node indices; duplicates collapse.
    pub fn new(total_nodes: usize, actuated: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut set: Vec<usize> = actuated.into_iter().collect();
        set.sort_unstable();
        set.dedup();
        if let Some(&bad) = set.iter().find(|&&i| i == 0 || i > total_nodes) {
            return Err(Error::Invalid(format!(
                "actuated node {bad} out of range 1..={total_nodes}"
            )));
        }
        Ok(InputSelection {
            total_nodes,
            actuated: set,
        })
    }

    /// All nodes actuated.
    pub fn full(total_nodes: usize) -> Self {
        InputSelection {
            total_nodes,
            actuated: (1..=total_nodes).collect(),
        }
    }

    pub fn empty(total_nodes: usize) -> Self {
        InputSelection {
            total_nodes,
            actuated: Vec::new(),
        }
    }

    pub fn total_nodes(&self) -> usize {
        self.total_nodes
    }

    pub fn indices(&self) -> &[usize] {
        &self.actuated
    }

    pub fn count(&self) -> usize {
        self.actuated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actuated.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.actuated.len() == self.total_nodes
    }

    pub fn contains(&self, node: usize) -> bool {
        self.actuated.binary_search(&node).is_ok()
    }

    /// Column-selection matrix: total_nodes x count, k-th column the unit
    /// vector of the k-th actuated node. Full column rank by construction.
    pub fn matrix(&self) -> Mat {
        let mut m = Mat::zeros(self.total_nodes, self.actuated.len());
        for (k, &node) in self.actuated.iter().enumerate() {
            m.set(node - 1, k, Rational::one());
        }
        m
    }

    /// Diagonal indicator form (total_nodes x total_nodes); encodes the same
    /// actuated set and yields identical controllability verdicts.
    pub fn diag(&self) -> Mat {
        let mut m = Mat::zeros(self.total_nodes, self.total_nodes);
        for &node in &self.actuated {
            m.set(node - 1, node - 1, Rational::one());
        }
        m
    }
}

/// Leader-follower multi-agent system with diffusive coupling: state matrix
/// -L (x) H, input matrix Delta (x) B.
#[derive(Clone, Debug)]
pub struct MASystem {
    laplacian: Mat,
    inner_coupling: Mat,
    leader_selection: InputSelection,
    agent_input: Mat,
}

impl MASystem {
    pub fn new(
        laplacian: Mat,
        inner_coupling: Mat,
        leader_selection: InputSelection,
        agent_input: Mat,
    ) -> Result<Self> {
        if !laplacian.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Laplacian must be square, got {}x{}",
                laplacian.rows(),
                laplacian.cols()
            )));
        }
        if !inner_coupling.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "inner coupling must be square, got {}x{}",
                inner_coupling.rows(),
                inner_coupling.cols()
            )));
        }
        if leader_selection.total_nodes() != laplacian.rows() {
            return Err(Error::DimensionMismatch(format!(
                "leader selection over {} nodes against {}x{} Laplacian",
                leader_selection.total_nodes(),
                laplacian.rows(),
                laplacian.cols()
            )));
        }
        if agent_input.rows() != inner_coupling.rows() {
            return Err(Error::DimensionMismatch(format!(
                "agent input has {} rows, inner coupling is {}x{}",
                agent_input.rows(),
                inner_coupling.rows(),
                inner_coupling.cols()
            )));
        }
        for i in 0..laplacian.rows() {
            let sum: Rational = (0..laplacian.cols()).map(|j| laplacian.at(i, j).clone()).sum();
            if !sum.is_zero() {
                return Err(Error::NotDiffusive(i + 1));
            }
        }
        Ok(MASystem {
            laplacian,
            inner_coupling,
            leader_selection,
            agent_input,
        })
    }

    pub fn laplacian(&self) -> &Mat {
        &self.laplacian
    }

    pub fn inner_coupling(&self) -> &Mat {
        &self.inner_coupling
    }

    pub fn leader_selection(&self) -> &InputSelection {
        &self.leader_selection
    }

    pub fn agent_input(&self) -> &Mat {
        &self.agent_input
    }

    pub fn agent_count(&self) -> usize {
        self.laplacian.rows()
    }

    pub fn agent_dim(&self) -> usize {
        self.inner_coupling.rows()
    }

    /// The composite pair (-L (x) H, Delta (x) B), with the leader selection
    /// in column form.
    pub fn composite(&self) -> (Mat, Mat) {
        let state = self.laplacian.neg().kron(&self.inner_coupling);
        let input = self.leader_selection.matrix().kron(&self.agent_input);
        (state, input)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::RowVec;

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn defective_graph() -> WeightedDigraph {
        crate::fixtures::defective_factor_graph()
    }

    #[test]
    fn adjacency_definition() {
        let g = WeightedDigraph::new(1, [(1, 1, r(5, 1))]).unwrap();
        assert_eq!(g.adjacency(), Mat::from_i64(&[&[5]]));

        let g = WeightedDigraph::new(2, [(1, 2, r(3, 1))]).unwrap();
        assert_eq!(g.adjacency(), Mat::from_i64(&[&[0, 0], &[3, 0]]));

        assert_eq!(defective_graph().adjacency(), crate::fixtures::defective_factor());
    }

    #[test]
    fn kron_graph_simple_cases() {
        let a = WeightedDigraph::new(1, [(1, 1, r(2, 1))]).unwrap();
        let b = WeightedDigraph::new(1, [(1, 1, r(3, 1))]).unwrap();
        let prod = a.kron_graph(&b);
        assert_eq!(prod.node_count(), 1);
        assert_eq!(prod.weight(1, 1), Some(&r(6, 1)));

        let edgeless = WeightedDigraph::new(2, []).unwrap();
        assert_eq!(a.kron_graph(&edgeless).edge_count(), 0);
    }

    #[test]
    fn kron_graph_matches_matrix_kron() {
        let c2 = WeightedDigraph::new(2, [(1, 2, r(1, 1)), (2, 1, r(1, 1))]).unwrap();
        let prod = c2.kron_graph(&c2);
        assert_eq!(
            prod.adjacency(),
            c2.adjacency().kron(&c2.adjacency())
        );

        let g = defective_graph();
        assert_eq!(
            g.kron_graph(&g).adjacency(),
            g.adjacency().kron(&g.adjacency())
        );
    }

    #[test]
    fn laplacian_cases() {
        let edgeless = WeightedDigraph::new(3, []).unwrap();
        assert_eq!(edgeless.laplacian().unwrap(), Mat::zeros(3, 3));

        let path = WeightedDigraph::parse(
            "graph 3 undirected\n1 2 1\n2 3 1\n",
        )
        .unwrap();
        assert_eq!(
            path.laplacian().unwrap(),
            Mat::from_i64(&[&[1, -1, 0], &[-1, 2, -1], &[0, -1, 1]])
        );

        let directed = WeightedDigraph::new(2, [(1, 2, r(2, 1))]).unwrap();
        assert_eq!(
            directed.laplacian().unwrap(),
            Mat::from_i64(&[&[0, 0], &[-2, 2]])
        );

        let looped = WeightedDigraph::new(1, [(1, 1, r(1, 1))]).unwrap();
        assert!(matches!(looped.laplacian(), Err(Error::SelfLoopPresent(1))));
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        let g = WeightedDigraph::parse("graph 4 directed\n1 2 3\n2 3 1/2\n4 1 -2\n3 1 5\n").unwrap();
        let l = g.laplacian().unwrap();
        let ones = Mat::from_i64(&[&[1], &[1], &[1], &[1]]);
        assert!(l.matmul(&ones).unwrap().is_zero());
    }

    #[test]
    fn selection_matrices() {
        let s = InputSelection::new(3, [2]).unwrap();
        let m = s.matrix();
        assert_eq!(m.rows(), 3);
        assert_eq!(m.cols(), 1);
        assert_eq!(m.at(1, 0), &r(1, 1));

        assert_eq!(InputSelection::full(3).matrix(), Mat::identity(3));

        let none = InputSelection::empty(2);
        assert_eq!(none.matrix().cols(), 0);
        assert!(!none.is_full());

        let s = InputSelection::new(4, [3, 1]).unwrap();
        assert_eq!(s.indices(), &[1, 3]);
        assert_eq!(s.matrix().rank(), 2);
        assert_eq!(s.diag(), {
            let mut d = Mat::zeros(4, 4);
            d.set(0, 0, r(1, 1));
            d.set(2, 2, r(1, 1));
            d
        });

        assert!(InputSelection::new(2, [3]).is_err());
    }

    #[test]
    fn parse_round_trip_and_errors() {
        let g = WeightedDigraph::parse(
            "# weighted digraph\ngraph 3 directed\n1 2 17/2\n2 3 -0.5 # comment\n",
        )
        .unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.weight(2, 3), Some(&r(-1, 2)));
        assert_eq!(WeightedDigraph::parse(&g.serialize()).unwrap(), g);

        match WeightedDigraph::parse("graph 2 directed\n1 2 1/0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match WeightedDigraph::parse("graph 2 directed\n1 2 0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected zero-weight rejection, got {other:?}"),
        }
        assert!(WeightedDigraph::parse("graph 2 directed\n1 3 1\n").is_err());
        assert!(WeightedDigraph::parse("graph 2 directed\n1 2 1\n1 2 2\n").is_err());
        assert!(WeightedDigraph::parse("").is_err());
    }

    #[test]
    fn undirected_expansion() {
        let g = WeightedDigraph::parse("graph 2 undirected\n1 2 3\n").unwrap();
        assert_eq!(g.weight(1, 2), Some(&r(3, 1)));
        assert_eq!(g.weight(2, 1), Some(&r(3, 1)));
        // An undirected duplicate of an existing reverse edge is rejected.
        assert!(WeightedDigraph::parse("graph 2 undirected\n1 2 3\n2 1 3\n").is_err());
    }

    #[test]
    fn dot_labels() {
        let g = WeightedDigraph::new(2, [(1, 2, r(3, 1))]).unwrap();
        let dot = g.to_dot(None);
        assert!(dot.contains("n1 -> n2 [label=\"3\"]"));

        let composite = g.kron_graph(&g);
        let dot = composite.to_dot(Some((2, 2)));
        assert!(dot.contains("label=\"1,1\""));
        assert!(dot.contains("label=\"2,2\""));
    }

    #[test]
    fn mas_system_validation() {
        let path = WeightedDigraph::parse("graph 3 undirected\n1 2 1\n2 3 1\n").unwrap();
        let l = path.laplacian().unwrap();
        let h = Mat::from_fn(2, 2, |i, j| if i == j { r(3, 2) } else { r(1, 2) });
        let b = Mat::from_i64(&[&[1], &[2]]);
        let sys = MASystem::new(l.clone(), h.clone(), InputSelection::new(3, [1]).unwrap(), b).unwrap();
        let (f, g) = sys.composite();
        assert_eq!(f.rows(), 6);
        assert_eq!(g.cols(), 1);
        assert_eq!(g.row(0), RowVec::from_i64(&[1]));
        assert_eq!(g.row(1), RowVec::from_i64(&[2]));
        assert_eq!(f.at(0, 0), &r(-3, 2));

        // Non-diffusive matrix rejected.
        let bad = Mat::from_i64(&[&[1, 0], &[0, 1]]);
        assert!(matches!(
            MASystem::new(bad, h.clone(), InputSelection::new(2, [1]).unwrap(), Mat::identity(2)),
            Err(Error::NotDiffusive(1))
        ));
    }
}
