//! Concatenation-DAG words with big-integer lengths.
//!
//! The zero-dominated word is built by the recursion
//! `A_n = A_{n-1} O(|A_{n-1}|^2) Q_{n-1}`: lengths square at every step, so
//! everything downstream (lengths, symbol positions, ones counts) is exact
//! big-integer arithmetic over a shared node arena. `P(n)` is the length-n
//! prefix of `A_n` and `Q_i` enumerates the matrix `P(r) O(r^2+c-1) P(r)`
//! in anti-diagonal order.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default depth cap: big-integer length digits double per step.
pub const DAG_DEPTH_CAP: u32 = 24;

/// Longest literal payload; also the block cap for factor queries.
pub const LITERAL_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

#[derive(Debug, Clone)]
pub enum Node {
    /// Explicit bits, at most [`LITERAL_CAP`] of them.
    Literal(Vec<u8>),
    /// A run of zeros whose length may exceed any machine word.
    ZeroRun(BigUint),
    Concat {
        left: NodeId,
        right: NodeId,
        len: BigUint,
        ones: BigUint,
    },
}

/// Append-only node arena. Children always precede parents, which keeps the
/// structure acyclic by construction.
#[derive(Debug, Clone, Default)]
pub struct WordDag {
    nodes: Vec<Node>,
}

impl WordDag {
    pub fn new() -> Self {
        WordDag::default()
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.0 as usize]
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn literal(&mut self, bits: &[u8]) -> NodeId {
        assert!(bits.len() <= LITERAL_CAP, "literal too long");
        assert!(bits.iter().all(|b| *b <= 1), "literal bits must be 0/1");
        self.push(Node::Literal(bits.to_vec()))
    }

    pub fn zero_run(&mut self, len: BigUint) -> NodeId {
        self.push(Node::ZeroRun(len))
    }

    pub fn concat(&mut self, left: NodeId, right: NodeId) -> NodeId {
        assert!((left.0 as usize) < self.nodes.len());
        assert!((right.0 as usize) < self.nodes.len());
        let len = self.len_of(left) + self.len_of(right);
        let ones = self.ones_of(left) + self.ones_of(right);
        self.push(Node::Concat {
            left,
            right,
            len,
            ones,
        })
    }

    fn push(&mut self, node: Node) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(node);
        id
    }

    pub fn len_of(&self, id: NodeId) -> BigUint {
        match self.node(id) {
            Node::Literal(bits) => BigUint::from(bits.len()),
            Node::ZeroRun(len) => len.clone(),
            Node::Concat { len, .. } => len.clone(),
        }
    }

    pub fn ones_of(&self, id: NodeId) -> BigUint {
        match self.node(id) {
            Node::Literal(bits) => BigUint::from(bits.iter().filter(|b| **b == 1).count()),
            Node::ZeroRun(_) => BigUint::zero(),
            Node::Concat { ones, .. } => ones.clone(),
        }
    }
}

/// A word inside a shared arena.
#[derive(Debug, Clone)]
pub struct DagWord {
    pub dag: Arc<WordDag>,
    pub root: NodeId,
}

impl DagWord {
    pub fn len(&self) -> BigUint {
        self.dag.len_of(self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.len().is_zero()
    }

    pub fn ones(&self) -> BigUint {
        self.dag.ones_of(self.root)
    }

    pub fn symbol_at(&self, index: &BigUint) -> Result<u8> {
        if *index >= self.len() {
            return Err(Error::Bounds {
                what: format!("index {index} beyond word length {}", self.len()),
            });
        }
        let mut id = self.root;
        let mut idx = index.clone();
        loop {
            match self.dag.node(id) {
                Node::Literal(bits) => {
                    return Ok(bits[idx.to_usize().expect("literal index fits usize")]);
                }
                Node::ZeroRun(_) => return Ok(0),
                Node::Concat { left, right, .. } => {
                    let ll = self.dag.len_of(*left);
                    if idx < ll {
                        id = *left;
                    } else {
                        idx -= ll;
                        id = *right;
                    }
                }
            }
        }
    }

    /// First `min(len, cap)` symbols.
    pub fn prefix_syms(&self, cap: usize) -> Vec<u8> {
        fn go(dag: &WordDag, id: NodeId, cap: usize, out: &mut Vec<u8>) {
            if out.len() >= cap {
                return;
            }
            match dag.node(id) {
                Node::Literal(bits) => {
                    for b in bits {
                        if out.len() >= cap {
                            return;
                        }
                        out.push(*b);
                    }
                }
                Node::ZeroRun(len) => {
                    let take = len.to_usize().unwrap_or(usize::MAX).min(cap - out.len());
                    out.extend(std::iter::repeat(0).take(take));
                }
                Node::Concat { left, right, .. } => {
                    go(dag, *left, cap, out);
                    go(dag, *right, cap, out);
                }
            }
        }
        let mut out = Vec::with_capacity(cap);
        go(&self.dag, self.root, cap, &mut out);
        out
    }

    /// Last `min(len, cap)` symbols.
    pub fn suffix_syms(&self, cap: usize) -> Vec<u8> {
        fn go(dag: &WordDag, id: NodeId, cap: usize, out: &mut Vec<u8>) {
            // Builds the suffix reversed; caller un-reverses.
            if out.len() >= cap {
                return;
            }
            match dag.node(id) {
                Node::Literal(bits) => {
                    for b in bits.iter().rev() {
                        if out.len() >= cap {
                            return;
                        }
                        out.push(*b);
                    }
                }
                Node::ZeroRun(len) => {
                    let take = len.to_usize().unwrap_or(usize::MAX).min(cap - out.len());
                    out.extend(std::iter::repeat(0).take(take));
                }
                Node::Concat { left, right, .. } => {
                    go(dag, *right, cap, out);
                    go(dag, *left, cap, out);
                }
            }
        }
        let mut out = Vec::with_capacity(cap);
        go(&self.dag, self.root, cap, &mut out);
        out.reverse();
        out
    }

    /// Fully materialize, refusing words longer than `limit`.
    pub fn materialize(&self, limit: usize) -> Result<Vec<u8>> {
        let len = self.len();
        if len > BigUint::from(limit) {
            return Err(Error::ResourceBound {
                what: "materialize compressed word".into(),
                requested: len.to_string(),
                feasible: limit.to_string(),
            });
        }
        let n = len.to_usize().unwrap();
        Ok(self.prefix_syms(n))
    }

    /// Exact count of ones among the first `len` symbols.
    pub fn prefix_ones(&self, len: &BigUint) -> Result<BigUint> {
        if *len > self.len() {
            return Err(Error::Bounds {
                what: format!("prefix length {len} beyond word length {}", self.len()),
            });
        }
        fn go(dag: &WordDag, id: NodeId, len: BigUint) -> BigUint {
            if len.is_zero() {
                return BigUint::zero();
            }
            match dag.node(id) {
                Node::Literal(bits) => {
                    let take = len.to_usize().expect("literal prefix fits usize");
                    BigUint::from(bits[..take].iter().filter(|b| **b == 1).count())
                }
                Node::ZeroRun(_) => BigUint::zero(),
                Node::Concat { left, right, .. } => {
                    let ll = dag.len_of(*left);
                    if len <= ll {
                        go(dag, *left, len)
                    } else {
                        dag.ones_of(*left) + go(dag, *right, len - ll)
                    }
                }
            }
        }
        Ok(go(&self.dag, self.root, len.clone()))
    }
}

/// Exact (length, ones, density) of a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordStats {
    pub length: BigUint,
    pub ones: BigUint,
    pub density: BigRational,
}

pub fn word_stats(word: &DagWord) -> WordStats {
    let length = word.len();
    let ones = word.ones();
    let density = if length.is_zero() {
        BigRational::zero()
    } else {
        BigRational::new(ones.clone().into(), length.clone().into())
    };
    WordStats {
        length,
        ones,
        density,
    }
}

/// Anti-diagonal cell of index `i`: inverse of
/// `i(r, c) = (r+c-1)(r+c-2)/2 + r`.
pub fn q_cell(i: u64) -> (u64, u64) {
    assert!(i >= 1);
    // Smallest d with d(d+1)/2 >= i is the anti-diagonal index r+c-1.
    let mut d = (((8.0 * i as f64 + 1.0).sqrt() - 1.0) / 2.0).floor() as u64;
    while d * (d + 1) / 2 < i {
        d += 1;
    }
    while d > 1 && (d - 1) * d / 2 >= i {
        d -= 1;
    }
    let r = i - d * (d - 1) / 2;
    let c = d - r + 1;
    (r, c)
}

/// Index of cell (r, c) in the anti-diagonal enumeration.
pub fn q_index(r: u64, c: u64) -> u64 {
    (r + c - 1) * (r + c - 2) / 2 + r
}

/// The staged construction: rows of `A`, their prefixes `P`, and the matrix
/// entries `Q` materialized so far, all sharing one arena.
pub struct OmegaWord {
    dag: Arc<WordDag>,
    depth: u32,
    a_nodes: Vec<NodeId>,           // a_nodes[n-1] = A_n
    p_nodes: Vec<NodeId>,           // p_nodes[n-1] = P(n)
    q_nodes: BTreeMap<u64, NodeId>, // by matrix index i
}

impl OmegaWord {
    /// Build `A_1 .. A_depth`.
    pub fn build(depth: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Bounds {
                what: "depth must be >= 1".into(),
            });
        }
        if depth > DAG_DEPTH_CAP {
            return Err(Error::ResourceBound {
                what: "construction depth".into(),
                requested: depth.to_string(),
                feasible: DAG_DEPTH_CAP.to_string(),
            });
        }
        let mut dag = WordDag::new();
        let a1 = dag.literal(&[1]);
        let mut a_nodes = vec![a1];
        let mut p_nodes = vec![a1];
        let mut q_nodes = BTreeMap::new();
        for n in 2..=depth {
            let i = (n - 1) as u64;
            let (r, c) = q_cell(i);
            // Well-founded: the cell references a row r <= i, whose P is built.
            debug_assert!(r <= i);
            let q = build_q(&mut dag, &p_nodes, r, c);
            q_nodes.insert(i, q);
            let prev = a_nodes[(n - 2) as usize];
            let prev_len = dag.len_of(prev);
            let pad = dag.zero_run(&prev_len * &prev_len);
            let head = dag.concat(prev, pad);
            let an = dag.concat(head, q);
            a_nodes.push(an);
            // P(n) = first n symbols of A_n.
            let prefix = prefix_of(&dag, an, n as usize);
            let pn = dag.literal(&prefix);
            p_nodes.push(pn);
        }
        Ok(OmegaWord {
            dag: Arc::new(dag),
            depth,
            a_nodes,
            p_nodes,
            q_nodes,
        })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn a(&self, n: u32) -> Result<DagWord> {
        if n == 0 || n > self.depth {
            return Err(Error::Bounds {
                what: format!("A_{n} not built at depth {}", self.depth),
            });
        }
        Ok(DagWord {
            dag: Arc::clone(&self.dag),
            root: self.a_nodes[(n - 1) as usize],
        })
    }

    pub fn word(&self) -> DagWord {
        DagWord {
            dag: Arc::clone(&self.dag),
            root: *self.a_nodes.last().unwrap(),
        }
    }

    pub fn p(&self, n: u32) -> Result<Vec<u8>> {
        if n == 0 || n > self.depth {
            return Err(Error::UndeterminedRow {
                row: n as u64,
                depth: self.depth,
            });
        }
        let id = self.p_nodes[(n - 1) as usize];
        match self.dag.node(id) {
            Node::Literal(bits) => Ok(bits.clone()),
            _ => unreachable!("P nodes are literals"),
        }
    }

    /// Whether the matrix entry of index `i` was appended by step `i + 1`.
    pub fn q_appended(&self, i: u64) -> bool {
        self.q_nodes.contains_key(&i)
    }

    /// The matrix entry at (row, col). Errors when the row's P word is not
    /// yet determined at this depth.
    pub fn q_word(&self, row: u64, col: u64) -> Result<DagWord> {
        if row == 0 || col == 0 {
            return Err(Error::Bounds {
                what: "row and col must be >= 1".into(),
            });
        }
        if row > self.depth as u64 {
            return Err(Error::UndeterminedRow {
                row,
                depth: self.depth,
            });
        }
        let i = q_index(row, col);
        if let Some(id) = self.q_nodes.get(&i) {
            return Ok(DagWord {
                dag: Arc::clone(&self.dag),
                root: *id,
            });
        }
        // Not part of the staged construction at this depth; assemble the
        // same content in a fresh arena.
        let mut dag = WordDag::new();
        let p = self.p(row as u32)?;
        let pid = dag.literal(&p);
        let gap = BigUint::from(row) * BigUint::from(row) + BigUint::from(col) - BigUint::one();
        let z = dag.zero_run(gap);
        let head = dag.concat(pid, z);
        let root = dag.concat(head, pid);
        Ok(DagWord {
            dag: Arc::new(dag),
            root,
        })
    }

    /// Prefix identity of the recursion: `A_{n-1}` is literally the left-most
    /// descendant of `A_n`.
    pub fn structural_prefix_holds(&self, n: u32) -> bool {
        if n < 2 || n > self.depth {
            return false;
        }
        let an = self.a_nodes[(n - 1) as usize];
        match self.dag.node(an) {
            Node::Concat { left, .. } => match self.dag.node(*left) {
                Node::Concat { left: ll, .. } => *ll == self.a_nodes[(n - 2) as usize],
                _ => false,
            },
            _ => false,
        }
    }
}

fn build_q(dag: &mut WordDag, p_nodes: &[NodeId], row: u64, col: u64) -> NodeId {
    let p = p_nodes[(row - 1) as usize];
    let gap = BigUint::from(row) * BigUint::from(row) + BigUint::from(col) - BigUint::one();
    let z = dag.zero_run(gap);
    let head = dag.concat(p, z);
    dag.concat(head, p)
}

fn prefix_of(dag: &WordDag, id: NodeId, cap: usize) -> Vec<u8> {
    fn go(dag: &WordDag, id: NodeId, cap: usize, out: &mut Vec<u8>) {
        if out.len() >= cap {
            return;
        }
        match dag.node(id) {
            Node::Literal(bits) => {
                for b in bits {
                    if out.len() >= cap {
                        return;
                    }
                    out.push(*b);
                }
            }
            Node::ZeroRun(len) => {
                let take = len.to_usize().unwrap_or(usize::MAX).min(cap - out.len());
                out.extend(std::iter::repeat(0).take(take));
            }
            Node::Concat { left, right, .. } => {
                go(dag, *left, cap, out);
                go(dag, *right, cap, out);
            }
        }
    }
    let mut out = Vec::with_capacity(cap);
    go(dag, id, cap, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_string(bits: &[u8]) -> String {
        bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect()
    }

    #[test]
    fn a1_and_a2() {
        let c = OmegaWord::build(2).unwrap();
        assert_eq!(to_string(&c.a(1).unwrap().materialize(100).unwrap()), "1");
        assert_eq!(
            to_string(&c.a(2).unwrap().materialize(100).unwrap()),
            "10101"
        );
        assert_eq!(c.p(2).unwrap(), vec![1, 0]);
    }

    #[test]
    fn a3_by_hand() {
        let c = OmegaWord::build(3).unwrap();
        let a3 = c.a(3).unwrap();
        assert_eq!(a3.len(), BigUint::from(34u32));
        let mut expected = vec![1, 0, 1, 0, 1];
        expected.extend(std::iter::repeat(0).take(25));
        expected.extend_from_slice(&[1, 0, 0, 1]);
        assert_eq!(a3.materialize(100).unwrap(), expected);
        assert_eq!(c.p(3).unwrap(), vec![1, 0, 1]);
    }

    #[test]
    fn q_cell_examples() {
        assert_eq!(q_cell(1), (1, 1));
        assert_eq!(q_cell(5), (2, 2));
        assert_eq!(q_cell(7), (1, 4));
        assert_eq!(q_cell(2), (1, 2));
        assert_eq!(q_cell(3), (2, 1));
        assert_eq!(q_cell(6), (3, 1));
    }

    #[test]
    fn q_cell_inverts_index() {
        for r in 1..=100u64 {
            for c in 1..=100u64 {
                assert_eq!(q_cell(q_index(r, c)), (r, c));
            }
        }
    }

    #[test]
    fn q_word_contents() {
        let c = OmegaWord::build(3).unwrap();
        let q11 = c.q_word(1, 1).unwrap();
        assert_eq!(to_string(&q11.materialize(100).unwrap()), "101");
        let q21 = c.q_word(2, 1).unwrap();
        assert_eq!(to_string(&q21.materialize(100).unwrap()), "10000010");
        let q22 = c.q_word(2, 2).unwrap();
        assert_eq!(q22.len(), BigUint::from(9u32));
        assert!(matches!(
            c.q_word(9, 1),
            Err(Error::UndeterminedRow { .. })
        ));
    }

    #[test]
    fn stats_examples() {
        let c = OmegaWord::build(3).unwrap();
        let s2 = word_stats(&c.a(2).unwrap());
        assert_eq!(s2.length, BigUint::from(5u32));
        assert_eq!(s2.ones, BigUint::from(3u32));
        assert_eq!(
            s2.density,
            BigRational::new(3.into(), 5.into())
        );
        let s3 = word_stats(&c.a(3).unwrap());
        assert_eq!(s3.length, BigUint::from(34u32));
        assert_eq!(s3.ones, BigUint::from(5u32));

        let mut dag = WordDag::new();
        let z = dag.zero_run(BigUint::from(1_000_000u32));
        let w = DagWord {
            dag: Arc::new(dag),
            root: z,
        };
        let s = word_stats(&w);
        assert_eq!(s.length, BigUint::from(1_000_000u32));
        assert!(s.ones.is_zero());
        assert!(s.density.is_zero());
    }

    #[test]
    fn recursion_length_law() {
        let c = OmegaWord::build(8).unwrap();
        for n in 2..=8u32 {
            let prev = c.a(n - 1).unwrap().len();
            let q = {
                let i = (n - 1) as u64;
                let (r, cc) = q_cell(i);
                c.q_word(r, cc).unwrap().len()
            };
            let expect = &prev + &prev * &prev + q;
            assert_eq!(c.a(n).unwrap().len(), expect);
            assert!(c.structural_prefix_holds(n));
        }
    }

    #[test]
    fn symbol_access_crosses_runs() {
        let c = OmegaWord::build(3).unwrap();
        let a3 = c.a(3).unwrap();
        assert_eq!(a3.symbol_at(&BigUint::from(0u32)).unwrap(), 1);
        assert_eq!(a3.symbol_at(&BigUint::from(4u32)).unwrap(), 1);
        assert_eq!(a3.symbol_at(&BigUint::from(5u32)).unwrap(), 0);
        assert_eq!(a3.symbol_at(&BigUint::from(30u32)).unwrap(), 1);
        assert_eq!(a3.symbol_at(&BigUint::from(33u32)).unwrap(), 1);
        assert!(a3.symbol_at(&BigUint::from(34u32)).is_err());
    }

    #[test]
    fn prefix_suffix_summaries() {
        let c = OmegaWord::build(3).unwrap();
        let a3 = c.a(3).unwrap();
        assert_eq!(a3.prefix_syms(6), vec![1, 0, 1, 0, 1, 0]);
        assert_eq!(a3.suffix_syms(5), vec![0, 1, 0, 0, 1]);
        assert_eq!(a3.prefix_ones(&BigUint::from(5u32)).unwrap(), BigUint::from(3u32));
        assert_eq!(a3.prefix_ones(&BigUint::from(34u32)).unwrap(), BigUint::from(5u32));
    }

    #[test]
    fn depth_cap() {
        assert!(matches!(
            OmegaWord::build(DAG_DEPTH_CAP + 1),
            Err(Error::ResourceBound { .. })
        ));
    }
}
