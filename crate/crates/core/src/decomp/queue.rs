use crate::graph::NodeId;

const ABSENT: usize = usize::MAX;

/// Operation counters, for checking the decomposition's cost accounting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueueStats {
    pub inserts: u64,
    pub extractions: u64,
    pub decrease_keys: u64,
    pub removals: u64,
}

impl QueueStats {
    pub fn total(&self) -> u64 {
        self.inserts + self.extractions + self.decrease_keys + self.removals
    }
}

/// Binary min-heap over node ids with decrease-key and removal by id.
///
/// Entries are ordered by `(key, id)`, so equal keys pop the smallest id.
#[derive(Clone, Debug, Default)]
pub struct AddressableMinQueue {
    heap: Vec<(u32, NodeId)>,
    // heap slot of each id, ABSENT when not queued
    pos: Vec<usize>,
    stats: QueueStats,
}

impl AddressableMinQueue {
    pub fn with_capacity(n: usize) -> Self {
        AddressableMinQueue {
            heap: Vec::with_capacity(n),
            pos: vec![ABSENT; n],
            stats: QueueStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn contains(&self, id: NodeId) -> bool {
        self.pos.get(id.index()).is_some_and(|&p| p != ABSENT)
    }

    pub fn key(&self, id: NodeId) -> Option<u32> {
        self.contains(id).then(|| self.heap[self.pos[id.index()]].0)
    }

    pub fn stats(&self) -> QueueStats {
        self.stats
    }

    pub fn peek_min(&self) -> Option<(NodeId, u32)> {
        self.heap.first().map(|&(k, v)| (v, k))
    }

    /// Panics if `id` is already queued.
    pub fn insert(&mut self, id: NodeId, key: u32) {
        if id.index() >= self.pos.len() {
            self.pos.resize(id.index() + 1, ABSENT);
        }
        assert!(!self.contains(id), "node {id} already queued");
        self.stats.inserts += 1;
        self.heap.push((key, id));
        let last = self.heap.len() - 1;
        self.pos[id.index()] = last;
        self.sift_up(last);
    }

    pub fn pop_min(&mut self) -> Option<(NodeId, u32)> {
        if self.heap.is_empty() {
            return None;
        }
        self.stats.extractions += 1;
        let (key, id) = self.take(0);
        Some((id, key))
    }

    /// Lowers the key of a queued id. Panics if `key` is larger than the
    /// stored key or `id` is not queued.
    pub fn decrease_key(&mut self, id: NodeId, key: u32) {
        assert!(self.contains(id), "node {id} not queued");
        let slot = self.pos[id.index()];
        assert!(key <= self.heap[slot].0, "decrease_key would raise the key of {id}");
        self.stats.decrease_keys += 1;
        self.heap[slot].0 = key;
        self.sift_up(slot);
    }

    /// Drops `id` if present and returns its key.
    pub fn remove(&mut self, id: NodeId) -> Option<u32> {
        if !self.contains(id) {
            return None;
        }
        self.stats.removals += 1;
        let slot = self.pos[id.index()];
        Some(self.take(slot).0)
    }

    fn take(&mut self, slot: usize) -> (u32, NodeId) {
        let last = self.heap.len() - 1;
        self.swap(slot, last);
        let out = self.heap.pop().unwrap();
        self.pos[out.1.index()] = ABSENT;
        if slot < self.heap.len() {
            self.sift_down(slot);
            self.sift_up(slot);
        }
        out
    }

    fn swap(&mut self, a: usize, b: usize) {
        self.heap.swap(a, b);
        self.pos[self.heap[a].1.index()] = a;
        self.pos[self.heap[b].1.index()] = b;
    }

    fn sift_up(&mut self, mut i: usize) {
        while i > 0 {
            let parent = (i - 1) / 2;
            if self.heap[i] >= self.heap[parent] {
                break;
            }
            self.swap(i, parent);
            i = parent;
        }
    }

    fn sift_down(&mut self, mut i: usize) {
        let len = self.heap.len();
        loop {
            let (l, r) = (2 * i + 1, 2 * i + 2);
            let mut smallest = i;
            if l < len && self.heap[l] < self.heap[smallest] {
                smallest = l;
            }
            if r < len && self.heap[r] < self.heap[smallest] {
                smallest = r;
            }
            if smallest == i {
                break;
            }
            self.swap(i, smallest);
            i = smallest;
        }
    }
}
