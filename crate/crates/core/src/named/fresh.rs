use std::collections::HashSet;

use super::Name;

/// First name of the form `z0, z1, …` rejected by neither `taken`.
pub fn fresh_name(taken: impl Fn(&str) -> bool) -> Name {
    (0usize..)
        .map(|i| format!("z{i}"))
        .find(|n| !taken(n))
        .map(Name::from)
        .expect("unbounded name supply")
}

/// Hands out pairwise distinct `z<i>` names that avoid a fixed set.
#[derive(Debug, Clone, Default)]
pub struct FreshSupply {
    avoid: HashSet<Name>,
    next: usize,
}

impl FreshSupply {
    pub fn new(avoid: HashSet<Name>) -> Self {
        FreshSupply { avoid, next: 0 }
    }

    pub fn next_name(&mut self) -> Name {
        loop {
            let candidate = format!("z{}", self.next);
            self.next += 1;
            if !self.avoid.contains(candidate.as_str()) {
                return Name::from(candidate);
            }
        }
    }
}
