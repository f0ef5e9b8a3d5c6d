use crate::GraphError;
use exact_core::Rational;

/// Boundary cycles with the spectral value carried by each leg.
///
/// Legs are numbered consecutively through the cycles. Leg positions are the labels, so labels are
/// pairwise distinct by construction; coincident values are allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySpec {
    pub cycles: Vec<Vec<Rational>>,
}

impl BoundarySpec {
    pub fn new(cycles: Vec<Vec<Rational>>) -> Result<Self, GraphError> {
        if cycles.iter().any(|c| c.is_empty()) {
            return Err(GraphError::BadBoundary("every cycle needs at least one leg".into()));
        }
        Ok(BoundarySpec { cycles })
    }

    /// The empty boundary (vacuum graphs).
    pub fn vacuum() -> Self {
        BoundarySpec { cycles: Vec::new() }
    }

    pub fn shape(&self) -> Vec<usize> {
        self.cycles.iter().map(|c| c.len()).collect()
    }

    pub fn n(&self) -> usize {
        self.cycles.iter().map(|c| c.len()).sum()
    }

    /// Leg values in leg order.
    pub fn leg_values(&self) -> Vec<Rational> {
        self.cycles.iter().flatten().cloned().collect()
    }
}

/// Target successor permutation for a cycle shape: leg `i` is followed by `next[i]`.
pub(crate) fn successor(shape: &[usize]) -> Vec<usize> {
    let mut next = Vec::new();
    let mut start = 0;
    for &len in shape {
        for k in 0..len {
            next.push(start + (k + 1) % len);
        }
        start += len;
    }
    next
}

/// A Wick pairing of `4v + n` half-edges.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RibbonDiagram {
    pub v: usize,
    pub n: usize,
    /// `mate[h]` is the half-edge paired with `h`.
    pub mate: Vec<u8>,
}

/// Topological data of a connected diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    pub g: usize,
    pub b: usize,
    /// Closed loops.
    pub s: usize,
    /// Ribbons, `2v + n/2`.
    pub r: usize,
    /// `pi[i] = j` when the second index of leg `i` equals the first index of leg `j`.
    pub pi: Vec<usize>,
}

/// Union-find over strand variables, small and allocation-light.
pub(crate) struct Strands {
    parent: Vec<u8>,
}

impl Strands {
    pub(crate) fn new(size: usize) -> Self {
        Strands { parent: (0..size as u8).collect() }
    }
    pub(crate) fn find(&mut self, mut x: u8) -> u8 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }
    fn union(&mut self, a: u8, b: u8) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra as usize] = rb;
        }
    }
}

impl RibbonDiagram {
    pub fn ribbons(&self) -> usize {
        (4 * self.v + self.n) / 2
    }

    /// Strand variable at the first index of half-edge `h`.
    pub(crate) fn first(&self, h: usize) -> u8 {
        let vh = 4 * self.v;
        if h < vh {
            h as u8
        } else {
            (vh + 2 * (h - vh)) as u8
        }
    }

    /// Strand variable at the second index of half-edge `h`.
    pub(crate) fn second(&self, h: usize) -> u8 {
        let vh = 4 * self.v;
        if h < vh {
            (4 * (h / 4) + (h % 4 + 1) % 4) as u8
        } else {
            (vh + 2 * (h - vh) + 1) as u8
        }
    }

    pub(crate) fn strand_count(&self) -> usize {
        4 * self.v + 2 * self.n
    }

    /// Merges strand variables along every ribbon.
    pub(crate) fn strands(&self) -> Strands {
        let mut uf = Strands::new(self.strand_count());
        for h in 0..self.mate.len() {
            let m = self.mate[h] as usize;
            if h < m {
                uf.union(self.first(h), self.second(m));
                uf.union(self.second(h), self.first(m));
            }
        }
        uf
    }

    fn is_connected(&self) -> bool {
        // nodes: vertices 0..v, legs v..v+n
        let nodes = self.v + self.n;
        if nodes == 0 {
            return true;
        }
        let node_of = |h: usize| if h < 4 * self.v { h / 4 } else { self.v + h - 4 * self.v };
        let mut uf = Strands::new(nodes);
        for h in 0..self.mate.len() {
            let (a, b) = (node_of(h) as u8, node_of(self.mate[h] as usize) as u8);
            let (ra, rb) = (uf.find(a), uf.find(b));
            if ra != rb {
                uf.parent[ra as usize] = rb;
            }
        }
        let r0 = uf.find(0);
        (0..nodes as u8).all(|x| uf.find(x) == r0)
    }
}

/// Genus, boundary count, loop count and boundary permutation of a connected diagram.
pub fn classify(d: &RibbonDiagram) -> Result<Topology, GraphError> {
    if d.mate.len() != 4 * d.v + d.n || d.n % 2 == 1 {
        return Err(GraphError::BadBoundary("half-edge count does not match v and n".into()));
    }
    if !d.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let mut uf = d.strands();
    let total = d.strand_count();
    let roots: std::collections::BTreeSet<u8> = (0..total as u8).map(|x| uf.find(x)).collect();
    let vh = 4 * d.v;
    let mut owner = vec![usize::MAX; total];
    for j in 0..d.n {
        let c = uf.find((vh + 2 * j) as u8);
        owner[c as usize] = j;
    }
    let pi: Vec<usize> = (0..d.n).map(|i| owner[uf.find((vh + 2 * i + 1) as u8) as usize]).collect();
    let s = roots.len() - d.n;
    let r = d.ribbons();
    let b = count_cycles(&pi);
    let chi = d.v as i64 - r as i64 + d.n as i64 + s as i64;
    let two_g = 2 - b as i64 - chi;
    debug_assert!(two_g >= 0 && two_g % 2 == 0);
    Ok(Topology { g: (two_g / 2) as usize, b, s, r, pi })
}

pub(crate) fn count_cycles(pi: &[usize]) -> usize {
    let mut seen = vec![false; pi.len()];
    let mut b = 0;
    for i in 0..pi.len() {
        if !seen[i] {
            b += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = pi[j];
            }
        }
    }
    b
}
