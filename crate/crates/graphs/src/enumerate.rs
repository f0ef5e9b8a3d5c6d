use crate::diagram::{classify, successor};
use crate::{GraphError, RibbonDiagram};
use rayon::prelude::*;

/// Default cap on the estimated number of canonical diagrams per enumeration.
pub const DEFAULT_LEAF_BUDGET: u64 = 200_000_000;

const FREE: u8 = u8::MAX;

/// Upper estimate of canonical leaves: `(4v+n−1)!!/(4^v v!)`, times `4v` without legs.
pub fn estimated_leaves(v: usize, n: usize) -> f64 {
    let h = 4 * v + n;
    if h % 2 == 1 {
        return 0.0;
    }
    let mut x = 1.0f64;
    let mut k = h as i64 - 1;
    while k > 1 {
        x *= k as f64;
        k -= 2;
    }
    for t in 1..=v {
        x /= 4.0 * t as f64;
    }
    if n == 0 {
        x *= (4 * v) as f64;
    }
    x
}

#[derive(Clone)]
struct Gen {
    v: usize,
    n: usize,
    mate: Vec<u8>,
    used: usize,
    reached: Vec<bool>,
}

impl Gen {
    fn root(v: usize, n: usize) -> Option<Self> {
        if (4 * v + n) % 2 == 1 || (v == 0 && n == 0) {
            return None;
        }
        let mut g = Gen { v, n, mate: vec![FREE; 4 * v + n], used: 0, reached: vec![false; n] };
        if n > 0 {
            g.reached[0] = true;
        } else {
            g.used = 1;
        }
        Some(g)
    }

    fn ext(&self, i: usize) -> usize {
        4 * self.v + i
    }

    fn lowest_open(&self) -> Option<usize> {
        (0..4 * self.used)
            .find(|&h| self.mate[h] == FREE)
            .or_else(|| (0..self.n).map(|i| self.ext(i)).find(|&h| self.reached[h - 4 * self.v] && self.mate[h] == FREE))
    }

    fn complete(&self) -> bool {
        self.used == self.v && self.reached.iter().all(|&r| r)
    }

    fn link(&mut self, a: usize, b: usize) {
        self.mate[a] = b as u8;
        self.mate[b] = a as u8;
    }

    fn unlink(&mut self, a: usize, b: usize) {
        self.mate[a] = FREE;
        self.mate[b] = FREE;
    }

    /// Candidate partners for the lowest open half-edge `h`.
    fn moves(&self, h: usize) -> Vec<Move> {
        let mut out = Vec::new();
        for h2 in 0..4 * self.used {
            if h2 != h && self.mate[h2] == FREE {
                out.push(Move::Reached(h2));
            }
        }
        for i in 0..self.n {
            let e = self.ext(i);
            if e != h && self.mate[e] == FREE {
                if self.reached[i] {
                    out.push(Move::Reached(e));
                } else {
                    out.push(Move::NewLeg(i));
                }
            }
        }
        if self.used < self.v {
            out.push(Move::NewVertex);
        }
        out
    }

    fn apply(&mut self, h: usize, m: Move) {
        match m {
            Move::Reached(h2) => self.link(h, h2),
            Move::NewLeg(i) => {
                self.reached[i] = true;
                let e = self.ext(i);
                self.link(h, e);
            }
            Move::NewVertex => {
                let t = self.used;
                self.used += 1;
                self.link(h, 4 * t);
            }
        }
    }

    fn undo(&mut self, h: usize, m: Move) {
        match m {
            Move::Reached(h2) => self.unlink(h, h2),
            Move::NewLeg(i) => {
                self.reached[i] = false;
                let e = self.ext(i);
                self.unlink(h, e);
            }
            Move::NewVertex => {
                self.used -= 1;
                self.unlink(h, 4 * self.used);
            }
        }
    }

    fn run(&mut self, out: &mut dyn FnMut(&RibbonDiagram), scratch: &mut RibbonDiagram) {
        let Some(h) = self.lowest_open() else {
            if self.complete() {
                scratch.mate.copy_from_slice(&self.mate);
                out(scratch);
            }
            return;
        };
        for m in self.moves(h) {
            self.apply(h, m);
            self.run(out, scratch);
            self.undo(h, m);
        }
    }
}

#[derive(Clone, Copy)]
enum Move {
    Reached(usize),
    NewLeg(usize),
    NewVertex,
}

fn check_budget(v: usize, n: usize, budget: u64) -> Result<(), GraphError> {
    let est = estimated_leaves(v, n);
    if est > budget as f64 {
        return Err(GraphError::Budget { v, n, estimated: est, budget });
    }
    Ok(())
}

/// Visits every canonical connected diagram with `v` vertices and `n` legs, in deterministic order.
pub fn for_each_diagram(
    v: usize,
    n: usize,
    budget: u64,
    mut f: impl FnMut(&RibbonDiagram),
) -> Result<(), GraphError> {
    check_budget(v, n, budget)?;
    let Some(mut g) = Gen::root(v, n) else { return Ok(()) };
    let mut scratch = RibbonDiagram { v, n, mate: vec![0; 4 * v + n] };
    g.run(&mut f, &mut scratch);
    Ok(())
}

/// Parallel fold over canonical diagrams. The search tree is split at its first two levels and
/// partial results are merged in branch order, so the result does not depend on scheduling.
pub(crate) fn fold_diagrams<A, I, L, M>(
    v: usize,
    n: usize,
    budget: u64,
    init: I,
    leaf: L,
    merge: M,
) -> Result<A, GraphError>
where
    A: Send,
    I: Fn() -> A + Sync,
    L: Fn(&mut A, &RibbonDiagram) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    check_budget(v, n, budget)?;
    let Some(root) = Gen::root(v, n) else { return Ok(init()) };
    // expand two levels to get enough independent branches
    let mut frontier = vec![root];
    for _ in 0..2 {
        let mut next = Vec::new();
        for g in frontier {
            match g.lowest_open() {
                None => next.push(g),
                Some(h) => {
                    for m in g.moves(h) {
                        let mut c = g.clone();
                        c.apply(h, m);
                        next.push(c);
                    }
                }
            }
        }
        frontier = next;
    }
    let parts: Vec<A> = frontier
        .into_par_iter()
        .map(|mut g| {
            let mut acc = init();
            let mut scratch = RibbonDiagram { v, n, mate: vec![0; 4 * v + n] };
            g.run(&mut |d| leaf(&mut acc, d), &mut scratch);
            acc
        })
        .collect();
    Ok(parts.into_iter().fold(init(), merge))
}

/// All canonical connected diagrams whose boundary permutation matches `shape`
/// (consecutive legs per cycle), optionally restricted to one genus.
pub fn enumerate_diagrams(
    v: usize,
    shape: &[usize],
    genus_filter: Option<usize>,
) -> Result<Vec<RibbonDiagram>, GraphError> {
    let n: usize = shape.iter().sum();
    let target = successor(shape);
    let mut out = Vec::new();
    for_each_diagram(v, n, DEFAULT_LEAF_BUDGET, |d| {
        let t = classify(d).expect("generated diagrams are connected");
        if t.pi == target && genus_filter.map_or(true, |g| g == t.g) {
            out.push(d.clone());
        }
    })?;
    Ok(out)
}
