//! Enumeration of connected induced vertex sets.
//!
//! Each connected set is grown from its smallest vertex (the root) by
//! repeatedly adding vertices from an extension list. New candidates are
//! restricted to neighbors of the added vertex that are larger than the root
//! and not yet adjacent to the current set, which makes every connected set
//! of size `<= max_size` appear exactly once.

use crate::graph::Graph;

/// What to do after visiting a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    /// Do not grow this set further.
    Prune,
    Stop,
}

/// The set currently being visited.
pub struct ConnectedView<'a> {
    pub members: &'a [usize],
    pub in_set: &'a [bool],
    /// Edges with both endpoints in the set.
    pub internal_edges: usize,
    /// Sum of degrees in the whole graph.
    pub degree_sum: usize,
}

impl ConnectedView<'_> {
    pub fn boundary(&self) -> usize {
        self.degree_sum - 2 * self.internal_edges
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Finished,
    Stopped,
    /// More than `budget` sets would have been visited.
    BudgetExhausted,
}

pub struct ConnectedSets<'g> {
    g: &'g Graph,
    max_size: usize,
    budget: u64,
    visited: u64,
    members: Vec<usize>,
    in_set: Vec<bool>,
    // number of members equal or adjacent to each vertex
    cover: Vec<u32>,
    internal_edges: usize,
    degree_sum: usize,
}

impl<'g> ConnectedSets<'g> {
    pub fn new(g: &'g Graph, max_size: usize, budget: u64) -> Self {
        let n = g.n();
        Self {
            g,
            max_size,
            budget,
            visited: 0,
            members: Vec::with_capacity(max_size),
            in_set: vec![false; n],
            cover: vec![0; n],
            internal_edges: 0,
            degree_sum: 0,
        }
    }

    pub fn visited(&self) -> u64 {
        self.visited
    }

    pub fn run<F>(&mut self, mut visit: F) -> Outcome
    where
        F: FnMut(&ConnectedView<'_>) -> Control,
    {
        if self.max_size == 0 {
            return Outcome::Finished;
        }
        for root in 0..self.g.n() {
            let ext: Vec<usize> = self
                .g
                .neighbors(root)
                .iter()
                .map(|&u| u as usize)
                .filter(|&u| u > root)
                .collect();
            let outcome = match self.push_and_visit(root, &mut visit) {
                Some(Control::Continue) => self.extend(ext, root, &mut visit),
                Some(Control::Prune) => Outcome::Finished,
                Some(Control::Stop) => Outcome::Stopped,
                None => Outcome::BudgetExhausted,
            };
            self.pop(root);
            if outcome != Outcome::Finished {
                return outcome;
            }
        }
        Outcome::Finished
    }

    fn push_and_visit<F>(&mut self, w: usize, visit: &mut F) -> Option<Control>
    where
        F: FnMut(&ConnectedView<'_>) -> Control,
    {
        if self.visited >= self.budget {
            return None;
        }
        self.visited += 1;
        let inside = self.g.neighbors(w).iter().filter(|&&u| self.in_set[u as usize]).count();
        self.internal_edges += inside;
        self.degree_sum += self.g.degree(w);
        self.in_set[w] = true;
        self.members.push(w);
        self.cover[w] += 1;
        for &u in self.g.neighbors(w) {
            self.cover[u as usize] += 1;
        }
        Some(visit(&ConnectedView {
            members: &self.members,
            in_set: &self.in_set,
            internal_edges: self.internal_edges,
            degree_sum: self.degree_sum,
        }))
    }

    fn pop(&mut self, w: usize) {
        // push_and_visit may have bailed on the budget before pushing
        if self.members.last() != Some(&w) {
            return;
        }
        self.members.pop();
        self.in_set[w] = false;
        self.cover[w] -= 1;
        for &u in self.g.neighbors(w) {
            self.cover[u as usize] -= 1;
        }
        let inside = self.g.neighbors(w).iter().filter(|&&u| self.in_set[u as usize]).count();
        self.internal_edges -= inside;
        self.degree_sum -= self.g.degree(w);
    }

    fn extend<F>(&mut self, mut ext: Vec<usize>, root: usize, visit: &mut F) -> Outcome
    where
        F: FnMut(&ConnectedView<'_>) -> Control,
    {
        if self.members.len() >= self.max_size {
            return Outcome::Finished;
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            next.extend(
                self.g
                    .neighbors(w)
                    .iter()
                    .map(|&u| u as usize)
                    .filter(|&u| u > root && self.cover[u] == 0),
            );
            let outcome = match self.push_and_visit(w, visit) {
                Some(Control::Continue) => self.extend(next, root, visit),
                Some(Control::Prune) => Outcome::Finished,
                Some(Control::Stop) => Outcome::Stopped,
                None => Outcome::BudgetExhausted,
            };
            self.pop(w);
            if outcome != Outcome::Finished {
                return outcome;
            }
        }
        Outcome::Finished
    }
}
