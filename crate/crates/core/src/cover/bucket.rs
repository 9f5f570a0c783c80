const NIL: usize = usize::MAX;

/// Items bucketed by a non-negative count that only ever decreases.
///
/// Each bucket is an intrusive doubly-linked list, so moving an item to the
/// next lower bucket is O(1). Items whose count reaches zero leave the queue.
pub(crate) struct BucketQueue {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    count: Vec<usize>,
    queued: Vec<bool>,
    top: usize,
}

impl BucketQueue {
    pub(crate) fn new(counts: &[usize]) -> Self {
        let max = counts.iter().copied().max().unwrap_or(0);
        let mut q = Self {
            head: vec![NIL; max + 1],
            next: vec![NIL; counts.len()],
            prev: vec![NIL; counts.len()],
            count: counts.to_vec(),
            queued: vec![false; counts.len()],
            top: max,
        };
        // insert in reverse so each list runs in ascending item order
        for item in (0..counts.len()).rev() {
            if counts[item] > 0 {
                q.link(item);
            }
        }
        q
    }

    #[cfg(test)]
    pub(crate) fn count(&self, item: usize) -> usize {
        self.count[item]
    }

    fn link(&mut self, item: usize) {
        let c = self.count[item];
        let old = self.head[c];
        self.next[item] = old;
        self.prev[item] = NIL;
        if old != NIL {
            self.prev[old] = item;
        }
        self.head[c] = item;
        self.queued[item] = true;
    }

    fn unlink(&mut self, item: usize) {
        let (p, n) = (self.prev[item], self.next[item]);
        if p != NIL {
            self.next[p] = n;
        } else {
            self.head[self.count[item]] = n;
        }
        if n != NIL {
            self.prev[n] = p;
        }
        self.prev[item] = NIL;
        self.next[item] = NIL;
        self.queued[item] = false;
    }

    pub(crate) fn decrement(&mut self, item: usize) {
        if !self.queued[item] {
            return;
        }
        self.unlink(item);
        self.count[item] -= 1;
        if self.count[item] > 0 {
            self.link(item);
        }
    }

    /// Remove and return the lowest-numbered item of the highest non-empty bucket.
    ///
    /// The scan of the top bucket costs at most the number of items, and
    /// there is at most one pop per selected cover point.
    pub(crate) fn pop_max(&mut self) -> Option<(usize, usize)> {
        while self.top > 0 && self.head[self.top] == NIL {
            self.top -= 1;
        }
        if self.top == 0 {
            return None;
        }
        let mut best = self.head[self.top];
        let mut cursor = self.next[best];
        while cursor != NIL {
            if cursor < best {
                best = cursor;
            }
            cursor = self.next[cursor];
        }
        let c = self.count[best];
        self.unlink(best);
        Some((best, c))
    }
}
