use fixedbitset::FixedBitSet;

/// Index arithmetic for a complete `branching`-ary tree of height `height`
/// stored in BFS order: node 0 is the root and the children of node `i` are
/// `i·α + 1 ..= i·α + α`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TreeShape {
    pub branching: usize,
    pub height: usize,
}

impl TreeShape {
    pub fn new(branching: usize, height: usize) -> Self {
        assert!(branching >= 1);
        TreeShape { branching, height }
    }

    /// Index of the first node at `depth`.
    pub fn level_start(&self, depth: usize) -> usize {
        (0..depth).map(|r| self.branching.pow(r as u32)).sum()
    }

    pub fn node_count(&self) -> usize {
        self.level_start(self.height + 1)
    }

    pub fn leaf_count(&self) -> usize {
        self.branching.pow(self.height as u32)
    }

    pub fn first_leaf(&self) -> usize {
        self.level_start(self.height)
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        node >= self.first_leaf()
    }

    pub fn depth(&self, node: usize) -> usize {
        let mut d = 0;
        while self.level_start(d + 1) <= node {
            d += 1;
        }
        d
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        (node > 0).then(|| (node - 1) / self.branching)
    }

    pub fn children(&self, node: usize) -> std::ops::Range<usize> {
        if self.is_leaf(node) {
            return 0..0;
        }
        let first = node * self.branching + 1;
        first..first + self.branching
    }
}

/// One sampling tree: per node, the set of removed elements `A_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingTree {
    pub(crate) shape: TreeShape,
    pub(crate) removed: Vec<FixedBitSet>,
}

impl SamplingTree {
    pub fn shape(&self) -> TreeShape {
        self.shape
    }

    pub fn node_count(&self) -> usize {
        self.removed.len()
    }

    /// Removed-set of `node`.
    pub fn removed(&self, node: usize) -> &FixedBitSet {
        &self.removed[node]
    }

    pub fn depth(&self, node: usize) -> usize {
        self.shape.depth(node)
    }

    pub fn leaves(&self) -> std::ops::Range<usize> {
        self.shape.first_leaf()..self.shape.node_count()
    }
}
