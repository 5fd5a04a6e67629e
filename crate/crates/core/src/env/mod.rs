//! Substitution lists: persistent sequences with positional split and
//! multi-insertion, backed either by a linked list or by a weight-balanced
//! tree. Elements are shared references and are never deep-copied.

mod list;
mod snoc;
mod tree;

use std::cell::Cell;
use std::fmt;
use std::str::FromStr;

pub use list::ConsList;
pub use snoc::SnocList;
pub use tree::WbTree;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    List,
    Tree,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::List => "list",
            Backend::Tree => "tree",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "list" => Ok(Backend::List),
            "tree" => Ok(Backend::Tree),
            other => Err(format!("unknown environment backend `{other}` (expected list or tree)")),
        }
    }
}

thread_local! {
    static ALLOCS: [Cell<u64>; 2] = const { [Cell::new(0), Cell::new(0)] };
}

fn count_alloc(backend: Backend, n: u64) {
    ALLOCS.with(|a| {
        let c = &a[backend as usize];
        c.set(c.get() + n);
    });
}

/// Sequence nodes allocated by `backend` on the current thread so far.
pub fn allocations(backend: Backend) -> u64 {
    ALLOCS.with(|a| a[backend as usize].get())
}

/// A persistent sequence of values. Operations never mutate their input;
/// earlier versions stay valid and share structure with later ones.
pub struct EnvSeq<T>(Repr<T>);

enum Repr<T> {
    List(ConsList<T>),
    Tree(WbTree<T>),
}

impl<T> Clone for EnvSeq<T> {
    fn clone(&self) -> Self {
        EnvSeq(match &self.0 {
            Repr::List(l) => Repr::List(l.clone()),
            Repr::Tree(t) => Repr::Tree(t.clone()),
        })
    }
}

impl<T> Default for EnvSeq<T> {
    fn default() -> Self {
        EnvSeq(Repr::List(ConsList::new()))
    }
}

impl<T> EnvSeq<T> {
    pub fn empty(backend: Backend) -> Self {
        EnvSeq(match backend {
            Backend::List => Repr::List(ConsList::new()),
            Backend::Tree => Repr::Tree(WbTree::new()),
        })
    }

    pub fn backend(&self) -> Backend {
        match &self.0 {
            Repr::List(_) => Backend::List,
            Repr::Tree(_) => Backend::Tree,
        }
    }

    pub fn len(&self) -> usize {
        match &self.0 {
            Repr::List(l) => l.len(),
            Repr::Tree(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, index: usize) -> Option<&T> {
        match &self.0 {
            Repr::List(l) => l.get(index),
            Repr::Tree(t) => t.get(index),
        }
    }

    pub fn iter(&self) -> Box<dyn Iterator<Item = &T> + '_> {
        match &self.0 {
            Repr::List(l) => Box::new(l.iter()),
            Repr::Tree(t) => Box::new(t.iter()),
        }
    }

    /// Whether the tree backend satisfies its balance criterion; always true
    /// for lists.
    pub fn is_balanced(&self) -> bool {
        match &self.0 {
            Repr::List(_) => true,
            Repr::Tree(t) => t.is_balanced(),
        }
    }
}

impl<T: Clone> EnvSeq<T> {
    pub fn singleton(backend: Backend, v: T) -> Self {
        EnvSeq(match backend {
            Backend::List => Repr::List(ConsList::new().push_front(v)),
            Backend::Tree => Repr::Tree(WbTree::singleton(v)),
        })
    }

    pub fn from_vec(backend: Backend, items: Vec<T>) -> Self {
        EnvSeq(match backend {
            Backend::List => Repr::List(ConsList::from_vec(items)),
            Backend::Tree => Repr::Tree(WbTree::from_vec(items)),
        })
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.iter().cloned().collect()
    }

    /// Splits into the first `k` elements and the rest.
    ///
    /// Panics when `k > len`: callers establish the bound from the term's
    /// split index, so a violation is an evaluator bug.
    pub fn split_at(&self, k: usize) -> (Self, Self) {
        match &self.0 {
            Repr::List(l) => {
                let (a, b) = l.split_at(k);
                (EnvSeq(Repr::List(a)), EnvSeq(Repr::List(b)))
            }
            Repr::Tree(t) => {
                let (a, b) = t.split_at(k);
                (EnvSeq(Repr::Tree(a)), EnvSeq(Repr::Tree(b)))
            }
        }
    }

    /// Inserts `w` at positions `k1, k1+k2, …, Σk` of the original sequence.
    /// With no gaps the input comes back unchanged.
    ///
    /// Panics when the gaps sum past the length.
    pub fn multi_insert(&self, gaps: &[usize], w: T) -> Self {
        match &self.0 {
            Repr::List(l) => EnvSeq(Repr::List(l.multi_insert(gaps, w))),
            Repr::Tree(t) => EnvSeq(Repr::Tree(t.multi_insert(gaps, w))),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for EnvSeq<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const BACKENDS: [Backend; 2] = [Backend::List, Backend::Tree];

    fn seq(b: Backend, items: &[&'static str]) -> EnvSeq<&'static str> {
        EnvSeq::from_vec(b, items.to_vec())
    }

    #[test]
    fn empty_and_singleton() {
        for b in BACKENDS {
            assert!(EnvSeq::<u8>::empty(b).to_vec().is_empty());
            assert_eq!(EnvSeq::singleton(b, 5u8).len(), 1);
            assert_eq!(EnvSeq::singleton(b, 5u8).to_vec(), vec![5]);
        }
    }

    #[test]
    fn split_examples() {
        for b in BACKENDS {
            let (l, r) = seq(b, &["g", "n", "f", "n"]).split_at(2);
            assert_eq!((l.to_vec(), r.to_vec()), (vec!["g", "n"], vec!["f", "n"]));
            let e = seq(b, &["a", "b"]);
            let (l, r) = e.split_at(0);
            assert!(l.is_empty());
            assert_eq!(r.to_vec(), e.to_vec());
            let (l, r) = seq(b, &["a", "b", "c"]).split_at(3);
            assert_eq!((l.to_vec(), r.len()), (vec!["a", "b", "c"], 0));
        }
    }

    #[test]
    fn multi_insert_examples() {
        for b in BACKENDS {
            assert_eq!(seq(b, &["g", "f"]).multi_insert(&[1, 1], "n").to_vec(), ["g", "n", "f", "n"]);
            assert_eq!(seq(b, &[]).multi_insert(&[0], "w").to_vec(), ["w"]);
            assert_eq!(
                seq(b, &["v1", "v2", "v3"]).multi_insert(&[0, 3], "w").to_vec(),
                ["w", "v1", "v2", "v3", "w"]
            );
            assert_eq!(seq(b, &["a"]).multi_insert(&[], "w").to_vec(), ["a"]);
        }
    }

    #[test]
    #[should_panic]
    fn split_past_end_panics() {
        seq(Backend::Tree, &["a"]).split_at(2);
    }

    #[test]
    #[should_panic]
    fn overlong_gaps_panic() {
        seq(Backend::List, &["a"]).multi_insert(&[1, 1], "w");
    }

    #[test]
    fn inputs_are_not_mutated() {
        for b in BACKENDS {
            let e = seq(b, &["a", "b", "c"]);
            let _ = e.split_at(1);
            let _ = e.multi_insert(&[1, 2], "w");
            assert_eq!(e.to_vec(), ["a", "b", "c"]);
        }
    }

    // Independent model of multi-insertion: walk the gaps over a plain vector.
    fn model_insert(v: &[u32], gaps: &[usize], w: u32) -> Vec<u32> {
        let mut out = Vec::new();
        let mut pos = 0;
        for &g in gaps {
            out.extend_from_slice(&v[pos..pos + g]);
            out.push(w);
            pos += g;
        }
        out.extend_from_slice(&v[pos..]);
        out
    }

    #[derive(Debug, Clone)]
    enum Op {
        Split(usize, bool),
        Insert(Vec<usize>, u32),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            (any::<usize>(), any::<bool>()).prop_map(|(k, keep)| Op::Split(k, keep)),
            (prop::collection::vec(0usize..4, 0..5), any::<u32>()).prop_map(|(g, w)| Op::Insert(g, w)),
        ]
    }

    proptest! {
        #[test]
        fn backends_agree_with_model(init in prop::collection::vec(any::<u32>(), 0..40),
                                     ops in prop::collection::vec(op(), 0..30)) {
            let mut model = init.clone();
            let mut list = EnvSeq::from_vec(Backend::List, init.clone());
            let mut tree = EnvSeq::from_vec(Backend::Tree, init);
            for op in ops {
                match op {
                    Op::Split(k, keep_left) => {
                        let k = k % (model.len() + 1);
                        let (ll, lr) = list.split_at(k);
                        let (tl, tr) = tree.split_at(k);
                        let mut joined = ll.to_vec();
                        joined.extend(lr.to_vec());
                        prop_assert_eq!(&joined, &model);
                        if keep_left {
                            model.truncate(k);
                            list = ll;
                            tree = tl;
                        } else {
                            model.drain(..k);
                            list = lr;
                            tree = tr;
                        }
                    }
                    Op::Insert(gaps, w) => {
                        let mut gaps = gaps;
                        while gaps.iter().sum::<usize>() > model.len() {
                            gaps.pop();
                        }
                        let before = list.len();
                        model = model_insert(&model, &gaps, w);
                        list = list.multi_insert(&gaps, w);
                        tree = tree.multi_insert(&gaps, w);
                        prop_assert_eq!(list.len(), before + gaps.len());
                    }
                }
                prop_assert_eq!(list.to_vec(), model.clone());
                prop_assert_eq!(tree.to_vec(), model.clone());
                prop_assert!(tree.is_balanced());
            }
        }
    }

    fn log2_ceil(n: usize) -> u64 {
        (usize::BITS - n.leading_zeros()) as u64
    }

    #[test]
    fn tree_operations_allocate_logarithmically() {
        for m in [1usize << 8, 1 << 12, 1 << 16] {
            let e = EnvSeq::from_vec(Backend::Tree, (0..m as u32).collect());
            let bound = |ops: u64| 6 * ops * (log2_ceil(m) + 1);
            for k in [0, 1, m / 3, m / 2, m - 1, m] {
                let before = allocations(Backend::Tree);
                let _ = e.split_at(k);
                let used = allocations(Backend::Tree) - before;
                assert!(used <= bound(1), "split_at({k}) of {m}: {used} nodes");
            }
            for gaps in [vec![0usize], vec![1, 1], vec![m / 4, m / 4, m / 4], vec![0; 8]] {
                let before = allocations(Backend::Tree);
                let _ = e.multi_insert(&gaps, 0);
                let used = allocations(Backend::Tree) - before;
                let allowed = bound(1 + gaps.len() as u64);
                assert!(used <= allowed, "multi_insert {gaps:?} into {m}: {used} > {allowed}");
            }
        }
    }

    #[test]
    fn list_operations_copy_the_prefix() {
        let e = EnvSeq::from_vec(Backend::List, (0..1000u32).collect());
        let before = allocations(Backend::List);
        let _ = e.split_at(600);
        assert_eq!(allocations(Backend::List) - before, 600);
    }
}
