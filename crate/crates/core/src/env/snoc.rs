use std::sync::Arc;

struct Cell<T> {
    prev: Option<Arc<Cell<T>>>,
    last: T,
}

/// Persistent list grown at the back in O(1); versions share their prefixes.
/// Holds the argument vector of a spine.
pub struct SnocList<T> {
    tail: Option<Arc<Cell<T>>>,
    len: usize,
}

impl<T> Clone for SnocList<T> {
    fn clone(&self) -> Self {
        SnocList { tail: self.tail.clone(), len: self.len }
    }
}

impl<T> Default for SnocList<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T> SnocList<T> {
    pub const fn new() -> Self {
        SnocList { tail: None, len: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&self, last: T) -> Self {
        SnocList { tail: Some(Arc::new(Cell { prev: self.tail.clone(), last })), len: self.len + 1 }
    }

    /// Elements from last to first.
    pub fn iter_rev(&self) -> impl Iterator<Item = &T> {
        let mut cur = self.tail.as_deref();
        std::iter::from_fn(move || {
            let cell = cur?;
            cur = cell.prev.as_deref();
            Some(&cell.last)
        })
    }

    /// Elements in order, first to last.
    pub fn to_vec_ref(&self) -> Vec<&T> {
        let mut v: Vec<&T> = self.iter_rev().collect();
        v.reverse();
        v
    }
}

impl<T: Clone> SnocList<T> {
    pub fn to_vec(&self) -> Vec<T> {
        self.to_vec_ref().into_iter().cloned().collect()
    }
}

impl<T: Clone> FromIterator<T> for SnocList<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        iter.into_iter().fold(SnocList::new(), |acc, x| acc.push(x))
    }
}

impl<T> Drop for SnocList<T> {
    fn drop(&mut self) {
        let mut cur = self.tail.take();
        while let Some(cell) = cur {
            match Arc::try_unwrap(cell) {
                Ok(mut cell) => cur = cell.prev.take(),
                Err(_) => break,
            }
        }
    }
}
