use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::random::RandomSource;
use crate::graph::{Edge, NodeId};

/// A path `a - center - b` with unordered outer endpoints (`a < b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Wedge {
    a: NodeId,
    center: NodeId,
    b: NodeId,
    closed: bool,
}

impl Wedge {
    /// `None` unless the three nodes are distinct.
    pub fn new(x: NodeId, center: NodeId, y: NodeId) -> Option<Wedge> {
        if x == y || x == center || y == center {
            return None;
        }
        Some(Wedge {
            a: x.min(y),
            center,
            b: x.max(y),
            closed: false,
        })
    }

    pub fn center(&self) -> NodeId {
        self.center
    }

    pub fn endpoints(&self) -> (NodeId, NodeId) {
        (self.a, self.b)
    }

    /// The edge that would close this wedge into a triangle.
    pub fn closing_edge(&self) -> Edge {
        Edge::new(self.a, self.b).expect("wedge endpoints are distinct")
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Identity ignoring the closed label.
    pub fn same_path(&self, other: &Wedge) -> bool {
        (self.a, self.center, self.b) == (other.a, other.center, other.b)
    }
}

impl fmt::Display for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = if self.closed { '+' } else { '-' };
        write!(f, "({},{},{}){label}", self.a, self.center, self.b)
    }
}

/// What happened to a candidate wedge offered to the pool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Offer {
    Appended { slot: usize },
    Replaced { slot: usize, evicted: Wedge },
    Rejected,
}

/// Fixed-capacity reservoir of candidate wedges.
///
/// Once full, the `k`-th candidate replaces a uniformly chosen slot with
/// probability `capacity / k`, so every candidate seen so far is present
/// with probability `min(1, capacity / k)`.
#[derive(Debug, Clone)]
pub struct WedgePool {
    capacity: usize,
    slots: Vec<Wedge>,
    by_closing_edge: HashMap<Edge, Vec<usize>>,
    candidates: u64,
    closed: u64,
}

impl WedgePool {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity >= 1, "pool capacity must be at least 1");
        WedgePool {
            capacity,
            slots: Vec::with_capacity(capacity.min(1 << 16)),
            by_closing_edge: HashMap::new(),
            candidates: 0,
            closed: 0,
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn slots(&self) -> &[Wedge] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.slots.len() >= self.capacity
    }

    /// Candidate wedges offered so far.
    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    /// Closed wedges currently in the pool.
    pub fn closed(&self) -> u64 {
        self.closed
    }

    /// Current retention probability `min(1, capacity / candidates)`.
    pub fn retention(&self) -> f64 {
        if self.candidates as f64 <= self.capacity as f64 {
            1.0
        } else {
            self.capacity as f64 / self.candidates as f64
        }
    }

    /// Labels every open pool wedge closed by `e`. Returns how many were newly closed.
    pub fn close_by(&mut self, e: Edge) -> u64 {
        let Some(slots) = self.by_closing_edge.get(&e) else {
            return 0;
        };
        let mut newly = 0;
        for &s in slots {
            let w = &mut self.slots[s];
            if !w.closed {
                w.closed = true;
                newly += 1;
            }
        }
        self.closed += newly;
        newly
    }

    /// Counts `wedge` as a candidate and admits it by reservoir replacement.
    pub fn offer<R: RandomSource + ?Sized>(&mut self, wedge: Wedge, rng: &mut R) -> Offer {
        self.candidates += 1;
        let wedge = Wedge {
            closed: false,
            ..wedge
        };
        if !self.is_full() {
            let slot = self.slots.len();
            self.slots.push(wedge);
            self.index(slot);
            return Offer::Appended { slot };
        }
        let q = self.capacity as f64 / self.candidates as f64;
        if !rng.chance(q) {
            return Offer::Rejected;
        }
        let slot = rng.index(self.slots.len());
        let evicted = self.slots[slot];
        if evicted.closed {
            self.closed -= 1;
        }
        self.unindex(slot, evicted.closing_edge());
        self.slots[slot] = wedge;
        self.index(slot);
        Offer::Replaced { slot, evicted }
    }

    fn index(&mut self, slot: usize) {
        let key = self.slots[slot].closing_edge();
        self.by_closing_edge.entry(key).or_default().push(slot);
    }

    fn unindex(&mut self, slot: usize, key: Edge) {
        if let Some(list) = self.by_closing_edge.get_mut(&key) {
            list.retain(|&s| s != slot);
            if list.is_empty() {
                self.by_closing_edge.remove(&key);
            }
        }
    }

    /// Walks the pool and checks its bookkeeping.
    pub fn audit(&self) -> Result<(), String> {
        let closed = self.slots.iter().filter(|w| w.closed).count() as u64;
        if closed != self.closed {
            return Err(format!(
                "closed counter {} but {closed} closed slots",
                self.closed
            ));
        }
        let expected_len = (self.capacity as u64).min(self.candidates);
        if self.slots.len() as u64 != expected_len {
            return Err(format!(
                "{} slots, expected min(capacity, candidates) = {expected_len}",
                self.slots.len()
            ));
        }
        let indexed: usize = self.by_closing_edge.values().map(Vec::len).sum();
        if indexed != self.slots.len() {
            return Err(format!("{indexed} indexed slots for {} wedges", self.slots.len()));
        }
        for (key, slots) in &self.by_closing_edge {
            for &s in slots {
                if self.slots[s].closing_edge() != *key {
                    return Err(format!("slot {s} indexed under {key}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::random::{Draw, ScriptedRandom, SeededRandom};

    fn w(a: u64, c: u64, b: u64) -> Wedge {
        Wedge::new(NodeId(a), NodeId(c), NodeId(b)).unwrap()
    }

    #[test]
    fn wedge_canonical_form() {
        assert_eq!(w(7, 6, 8), w(8, 6, 7));
        assert_eq!(w(8, 6, 7).endpoints(), (NodeId(7), NodeId(8)));
        assert!(Wedge::new(NodeId(1), NodeId(1), NodeId(2)).is_none());
        assert!(Wedge::new(NodeId(1), NodeId(2), NodeId(1)).is_none());
        assert_eq!(w(9, 6, 8).to_string(), "(8,6,9)-");
    }

    #[test]
    fn fills_then_replaces() {
        let mut pool = WedgePool::new(2);
        let mut rng = ScriptedRandom::new([Draw::Coin(false), Draw::Coin(true), Draw::Index(0)]);
        assert_eq!(pool.offer(w(7, 6, 8), &mut rng), Offer::Appended { slot: 0 });
        assert_eq!(pool.offer(w(1, 6, 8), &mut rng), Offer::Appended { slot: 1 });
        assert_eq!(pool.offer(w(8, 6, 11), &mut rng), Offer::Rejected);
        assert_eq!(
            pool.offer(w(8, 6, 10), &mut rng),
            Offer::Replaced {
                slot: 0,
                evicted: w(7, 6, 8)
            }
        );
        assert_eq!(pool.candidates(), 4);
        assert_eq!(pool.retention(), 0.5);
        pool.audit().unwrap();
    }

    #[test]
    fn closing_and_evicting_closed_wedge() {
        let mut pool = WedgePool::new(1);
        let mut rng = ScriptedRandom::new([Draw::Coin(true), Draw::Index(0)]);
        pool.offer(w(1, 2, 3), &mut rng);
        assert_eq!(pool.close_by(Edge::new(1, 3).unwrap()), 1);
        assert_eq!(pool.close_by(Edge::new(1, 3).unwrap()), 0);
        assert_eq!(pool.closed(), 1);
        pool.offer(w(4, 2, 5), &mut rng);
        assert_eq!(pool.closed(), 0);
        assert_eq!(pool.close_by(Edge::new(1, 3).unwrap()), 0);
        pool.audit().unwrap();
    }

    #[test]
    fn shared_closing_edge_closes_all() {
        let mut pool = WedgePool::new(4);
        let mut rng = SeededRandom::new(0);
        pool.offer(w(1, 2, 3), &mut rng);
        pool.offer(w(1, 4, 3), &mut rng);
        pool.offer(w(1, 5, 6), &mut rng);
        assert_eq!(pool.close_by(Edge::new(3, 1).unwrap()), 2);
        assert_eq!(pool.closed(), 2);
        pool.audit().unwrap();
    }

    #[test]
    fn retention_before_saturation() {
        let pool = WedgePool::new(3);
        assert_eq!(pool.retention(), 1.0);
    }
}
