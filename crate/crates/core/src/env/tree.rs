//! Persistent weight-balanced tree indexed by position.
//!
//! Adams-style balancing with weight ratio `DELTA = 3` and rotation threshold
//! `RATIO = 2`: for every node, `size(l) + size(r) <= 1` or each side holds at
//! most `DELTA` times as many elements as the other. Splitting by position and
//! joining around a middle element both touch `O(log n)` nodes.

use std::sync::Arc;

const DELTA: usize = 3;
const RATIO: usize = 2;

struct Node<T> {
    size: usize,
    left: Link<T>,
    elem: T,
    right: Link<T>,
}

type Link<T> = Option<Arc<Node<T>>>;

fn size<T>(t: &Link<T>) -> usize {
    t.as_ref().map_or(0, |n| n.size)
}

pub struct WbTree<T> {
    root: Link<T>,
}

impl<T> Clone for WbTree<T> {
    fn clone(&self) -> Self {
        WbTree { root: self.root.clone() }
    }
}

impl<T> Default for WbTree<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> WbTree<T> {
    pub const fn new() -> Self {
        WbTree { root: None }
    }

    pub fn len(&self) -> usize {
        size(&self.root)
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_none()
    }

    pub fn get(&self, mut index: usize) -> Option<&T> {
        let mut cur = self.root.as_deref()?;
        loop {
            let sl = size(&cur.left);
            if index < sl {
                cur = cur.left.as_deref()?;
            } else if index == sl {
                return Some(&cur.elem);
            } else {
                index -= sl + 1;
                cur = cur.right.as_deref()?;
            }
        }
    }

    pub fn iter(&self) -> Iter<'_, T> {
        let mut it = Iter { stack: Vec::new() };
        it.descend(self.root.as_deref());
        it
    }

    /// Whether every node satisfies the weight-balance criterion and carries
    /// a correct size.
    pub fn is_balanced(&self) -> bool {
        fn check<T>(t: &Link<T>) -> Option<usize> {
            match t {
                None => Some(0),
                Some(n) => {
                    let (sl, sr) = (check(&n.left)?, check(&n.right)?);
                    let ok = sl + sr <= 1 || (sl <= DELTA * sr && sr <= DELTA * sl);
                    (ok && n.size == sl + sr + 1).then_some(n.size)
                }
            }
        }
        check(&self.root).is_some()
    }

    pub fn depth(&self) -> usize {
        fn go<T>(t: &Link<T>) -> usize {
            t.as_ref().map_or(0, |n| 1 + go(&n.left).max(go(&n.right)))
        }
        go(&self.root)
    }
}

fn node<T>(left: Link<T>, elem: T, right: Link<T>) -> Link<T> {
    super::count_alloc(super::Backend::Tree, 1);
    let size = size(&left) + size(&right) + 1;
    Some(Arc::new(Node { size, left, elem, right }))
}

// Fields of a node; the children are shared, not copied.
fn open<T: Clone>(n: &Arc<Node<T>>) -> (Link<T>, T, Link<T>) {
    (n.left.clone(), n.elem.clone(), n.right.clone())
}

fn single_left<T: Clone>(l: Link<T>, x: T, r: &Arc<Node<T>>) -> Link<T> {
    let (rl, y, rr) = open(r);
    node(node(l, x, rl), y, rr)
}

fn single_right<T: Clone>(l: &Arc<Node<T>>, x: T, r: Link<T>) -> Link<T> {
    let (ll, y, lr) = open(l);
    node(ll, y, node(lr, x, r))
}

fn double_left<T: Clone>(l: Link<T>, x: T, r: &Arc<Node<T>>) -> Link<T> {
    let (rl, y, rr) = open(r);
    let rl = rl.expect("double rotation needs an inner child");
    let (rll, z, rlr) = open(&rl);
    node(node(l, x, rll), z, node(rlr, y, rr))
}

fn double_right<T: Clone>(l: &Arc<Node<T>>, x: T, r: Link<T>) -> Link<T> {
    let (ll, y, lr) = open(l);
    let lr = lr.expect("double rotation needs an inner child");
    let (lrl, z, lrr) = open(&lr);
    node(node(ll, y, lrl), z, node(lrr, x, r))
}

// Restores balance after one side changed by at most one element or after
// one recursive join step.
fn balance<T: Clone>(l: Link<T>, x: T, r: Link<T>) -> Link<T> {
    let (sl, sr) = (size(&l), size(&r));
    if sl + sr <= 1 {
        node(l, x, r)
    } else if sr > DELTA * sl {
        let rn = r.expect("heavier side is non-empty");
        if size(&rn.left) < RATIO * size(&rn.right) {
            single_left(l, x, &rn)
        } else {
            double_left(l, x, &rn)
        }
    } else if sl > DELTA * sr {
        let ln = l.expect("heavier side is non-empty");
        if size(&ln.right) < RATIO * size(&ln.left) {
            single_right(&ln, x, r)
        } else {
            double_right(&ln, x, r)
        }
    } else {
        node(l, x, r)
    }
}

fn insert_min<T: Clone>(x: T, t: &Link<T>) -> Link<T> {
    match t {
        None => node(None, x, None),
        Some(n) => {
            let (l, y, r) = open(n);
            balance(insert_min(x, &l), y, r)
        }
    }
}

fn insert_max<T: Clone>(x: T, t: &Link<T>) -> Link<T> {
    match t {
        None => node(None, x, None),
        Some(n) => {
            let (l, y, r) = open(n);
            balance(l, y, insert_max(x, &r))
        }
    }
}

// All of `l`, then `x`, then all of `r`.
fn link<T: Clone>(l: Link<T>, x: T, r: Link<T>) -> Link<T> {
    match (&l, &r) {
        (None, _) => insert_min(x, &r),
        (_, None) => insert_max(x, &l),
        (Some(ln), Some(rn)) => {
            if DELTA * ln.size < rn.size {
                let (rl, y, rr) = open(rn);
                balance(link(l, x, rl), y, rr)
            } else if DELTA * rn.size < ln.size {
                let (ll, y, lr) = open(ln);
                balance(ll, y, link(lr, x, r))
            } else {
                node(l, x, r)
            }
        }
    }
}

fn split<T: Clone>(t: &Link<T>, k: usize) -> (Link<T>, Link<T>) {
    match t {
        None => (None, None),
        Some(n) => {
            let sl = size(&n.left);
            if k <= sl {
                let (ll, lr) = split(&n.left, k);
                (ll, link(lr, n.elem.clone(), n.right.clone()))
            } else {
                let (rl, rr) = split(&n.right, k - sl - 1);
                (link(n.left.clone(), n.elem.clone(), rl), rr)
            }
        }
    }
}

impl<T: Clone> WbTree<T> {
    pub fn singleton(x: T) -> Self {
        WbTree { root: node(None, x, None) }
    }

    pub fn from_vec(items: Vec<T>) -> Self {
        fn build<T: Clone>(items: &[T]) -> Link<T> {
            if items.is_empty() {
                return None;
            }
            let mid = items.len() / 2;
            node(build(&items[..mid]), items[mid].clone(), build(&items[mid + 1..]))
        }
        WbTree { root: build(&items) }
    }

    /// `(first k, rest)`; panics when `k > len`.
    pub fn split_at(&self, k: usize) -> (Self, Self) {
        assert!(k <= self.len(), "split_at({k}) on a tree of length {}", self.len());
        if k == 0 {
            return (WbTree::new(), self.clone());
        }
        if k == self.len() {
            return (self.clone(), WbTree::new());
        }
        let (l, r) = split(&self.root, k);
        (WbTree { root: l }, WbTree { root: r })
    }

    pub fn insert_at(&self, k: usize, x: T) -> Self {
        assert!(k <= self.len(), "insert_at({k}) on a tree of length {}", self.len());
        let (l, r) = split(&self.root, k);
        WbTree { root: link(l, x, r) }
    }

    pub fn push_back(&self, x: T) -> Self {
        WbTree { root: insert_max(x, &self.root) }
    }

    /// Inserts `w` after the first `k1`, `k1+k2`, … elements, working from
    /// the rightmost position so earlier positions stay valid.
    pub fn multi_insert(&self, gaps: &[usize], w: T) -> Self {
        let mut positions = Vec::with_capacity(gaps.len());
        let mut acc = 0;
        for &gap in gaps {
            acc += gap;
            positions.push(acc);
        }
        assert!(acc <= self.len(), "multi_insert gaps sum {acc} exceeds length {}", self.len());
        positions
            .iter()
            .rev()
            .fold(self.clone(), |t, &p| t.insert_at(p, w.clone()))
    }
}

pub struct Iter<'a, T> {
    stack: Vec<&'a Node<T>>,
}

impl<'a, T> Iter<'a, T> {
    fn descend(&mut self, mut cur: Option<&'a Node<T>>) {
        while let Some(n) = cur {
            self.stack.push(n);
            cur = n.left.as_deref();
        }
    }
}

impl<'a, T> Iterator for Iter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        let n = self.stack.pop()?;
        self.descend(n.right.as_deref());
        Some(&n.elem)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(t: &WbTree<u32>) -> Vec<u32> {
        t.iter().copied().collect()
    }

    #[test]
    fn split_and_insert_by_position() {
        let t = WbTree::from_vec((0..10).collect());
        let (a, b) = t.split_at(4);
        assert_eq!(items(&a), vec![0, 1, 2, 3]);
        assert_eq!(items(&b), (4..10).collect::<Vec<_>>());
        assert!(a.is_balanced() && b.is_balanced());
        assert_eq!(items(&t.insert_at(10, 99)).last(), Some(&99));
        assert_eq!(t.get(7), Some(&7));
        assert_eq!(t.get(10), None);
    }

    #[test]
    fn sequential_appends_stay_balanced() {
        let mut t = WbTree::new();
        for i in 0..5000u32 {
            t = t.push_back(i);
        }
        assert!(t.is_balanced());
        assert_eq!(items(&t), (0..5000).collect::<Vec<_>>());
        // a weight-balanced tree of n nodes has height below 2·log2(n+1)
        assert!(t.depth() <= 2 * 13, "depth {}", t.depth());
    }

    #[test]
    fn repeated_positions_insert_adjacent_copies() {
        let t: WbTree<u32> = WbTree::new();
        assert_eq!(items(&t.multi_insert(&[0, 0], 7)), vec![7, 7]);
    }
}
