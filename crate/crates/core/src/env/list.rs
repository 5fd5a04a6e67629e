use std::sync::Arc;

struct Cell<T> {
    elem: T,
    next: Option<Arc<Cell<T>>>,
}

/// Persistent singly linked list. Splitting and multi-insertion copy the
/// prefix they touch and share the remaining suffix.
pub struct ConsList<T> {
    head: Option<Arc<Cell<T>>>,
    len: usize,
}

impl<T> Clone for ConsList<T> {
    fn clone(&self) -> Self {
        ConsList { head: self.head.clone(), len: self.len }
    }
}

impl<T> Default for ConsList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> ConsList<T> {
    pub const fn new() -> Self {
        ConsList { head: None, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push_front(&self, elem: T) -> Self {
        super::count_alloc(super::Backend::List, 1);
        ConsList {
            head: Some(Arc::new(Cell { elem, next: self.head.clone() })),
            len: self.len + 1,
        }
    }

    pub fn iter(&self) -> Iter<'_, T> {
        Iter { cur: self.head.as_deref() }
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        self.iter().nth(index)
    }

    fn suffix(&self, k: usize) -> ConsList<T> {
        let mut cur = &self.head;
        for _ in 0..k {
            cur = &cur.as_ref().expect("suffix within bounds").next;
        }
        ConsList { head: cur.clone(), len: self.len - k }
    }
}

impl<T: Clone> ConsList<T> {
    pub fn from_vec(items: Vec<T>) -> Self {
        items.into_iter().rev().fold(ConsList::new(), |acc, x| acc.push_front(x))
    }

    fn prepend_all(items: Vec<T>, tail: ConsList<T>) -> Self {
        items.into_iter().rev().fold(tail, |acc, x| acc.push_front(x))
    }

    /// `(first k, rest)`; panics when `k > len`.
    pub fn split_at(&self, k: usize) -> (Self, Self) {
        assert!(k <= self.len, "split_at({k}) on a list of length {}", self.len);
        let prefix: Vec<T> = self.iter().take(k).cloned().collect();
        (ConsList::from_vec(prefix), self.suffix(k))
    }

    /// Inserts `w` after the first `k1`, `k1+k2`, … elements.
    pub fn multi_insert(&self, gaps: &[usize], w: T) -> Self {
        if gaps.is_empty() {
            return self.clone();
        }
        let total: usize = gaps.iter().sum();
        assert!(total <= self.len, "multi_insert gaps sum {total} exceeds length {}", self.len);
        let mut src = self.iter().cloned();
        let mut out = Vec::with_capacity(total + gaps.len());
        for &gap in gaps {
            out.extend(src.by_ref().take(gap));
            out.push(w.clone());
        }
        ConsList::prepend_all(out, self.suffix(total))
    }
}

impl<T> Drop for ConsList<T> {
    fn drop(&mut self) {
        let mut cur = self.head.take();
        while let Some(cell) = cur {
            match Arc::try_unwrap(cell) {
                Ok(mut cell) => cur = cell.next.take(),
                Err(_) => break,
            }
        }
    }
}

pub struct Iter<'a, T> {
    cur: Option<&'a Cell<T>>,
}

impl<'a, T> Iterator for Iter<'a, T> {
    type Item = &'a T;

    fn next(&mut self) -> Option<&'a T> {
        let cell = self.cur?;
        self.cur = cell.next.as_deref();
        Some(&cell.elem)
    }
}
