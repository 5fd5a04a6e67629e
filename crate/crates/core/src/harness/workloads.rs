use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::named::{parse_surface, NamedTerm};

/// Benchmark term families, each indexed by a size parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Workload {
    /// `add ⌈n/2⌉ ⌊n/2⌋` on Church numerals.
    ChurchAdd,
    /// `mul a b` with `a = ⌊√n⌋` and `b = ⌈n/a⌉`.
    ChurchMul,
    /// `2^k` with `k = ⌊log2 n⌋`, written `(\m.\n. n m) 2 k`.
    ChurchExp,
    /// `n` nested applications of `S K K` to a free variable.
    CombinatorChain,
    /// `(\big. (\x.\y. y) big) BIG` where `BIG` is a spine of `n` value nodes
    /// that is dead once the argument `x` is dropped.
    LeakFamily,
}

impl Workload {
    pub const ALL: [Workload; 5] = [
        Workload::ChurchAdd,
        Workload::ChurchMul,
        Workload::ChurchExp,
        Workload::CombinatorChain,
        Workload::LeakFamily,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Workload::ChurchAdd => "church-add",
            Workload::ChurchMul => "church-mul",
            Workload::ChurchExp => "church-exp",
            Workload::CombinatorChain => "combinator-chain",
            Workload::LeakFamily => "leak-family",
        }
    }

    /// The term for size `n` (treated as at least 1).
    pub fn build(self, n: usize) -> NamedTerm {
        let n = n.max(1);
        match self {
            Workload::ChurchAdd => {
                let add = surface(r"\m.\n.\f.\x. m f (n f x)");
                NamedTerm::apps(add, [church(n.div_ceil(2)), church(n / 2)])
            }
            Workload::ChurchMul => {
                let a = n.isqrt();
                let mul = surface(r"\m.\n.\f. m (n f)");
                NamedTerm::apps(mul, [church(a), church(n.div_ceil(a))])
            }
            Workload::ChurchExp => {
                let k = n.ilog2() as usize;
                NamedTerm::apps(surface(r"\m.\n. n m"), [church(2), church(k)])
            }
            Workload::CombinatorChain => {
                let i = surface(r"(\x.\y.\z. x z (y z)) (\x.\y. x) (\x.\y. x)");
                (0..n).fold(NamedTerm::var("a"), |acc, _| NamedTerm::app(i.clone(), acc))
            }
            Workload::LeakFamily => {
                let big = NamedTerm::apps(NamedTerm::var("c"), (1..n).map(|_| NamedTerm::var("d")));
                NamedTerm::app(surface(r"\big. (\x.\y. y) big"), big)
            }
        }
    }

    /// The normal form `build(n)` should reach.
    pub fn expected(self, n: usize) -> NamedTerm {
        let n = n.max(1);
        match self {
            Workload::ChurchAdd => church(n),
            Workload::ChurchMul => {
                let a = n.isqrt();
                church(a * n.div_ceil(a))
            }
            Workload::ChurchExp => {
                let k = n.ilog2();
                match k {
                    // 0 applied to anything is the identity
                    0 => surface(r"\x. x"),
                    _ => church(1 << k),
                }
            }
            Workload::CombinatorChain => NamedTerm::var("a"),
            Workload::LeakFamily => surface(r"\y. y"),
        }
    }
}

impl fmt::Display for Workload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Workload {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Workload::ALL.into_iter().find(|w| w.name() == s).ok_or_else(|| {
            format!("unknown workload `{s}` (expected church-add, church-mul, church-exp, combinator-chain or leak-family)")
        })
    }
}

fn surface(s: &str) -> NamedTerm {
    parse_surface(s).expect("built-in term parses")
}

/// Church numeral `\f.\x. f (… (f x))` with `n` applications.
pub fn church(n: usize) -> NamedTerm {
    let body = (0..n).fold(NamedTerm::var("x"), |acc, _| NamedTerm::app(NamedTerm::var("f"), acc));
    NamedTerm::lam("f", NamedTerm::lam("x", body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named::{alpha_eq, normalize};

    #[test]
    fn names_round_trip() {
        for w in Workload::ALL {
            assert_eq!(w.name().parse::<Workload>().unwrap(), w);
        }
    }

    #[test]
    fn small_instances_normalize_to_expected() {
        for w in Workload::ALL {
            for n in [1, 2, 3, 7, 8, 10, 16] {
                let got = normalize(&w.build(n), 1_000_000).unwrap();
                assert!(alpha_eq(&got, &w.expected(n)), "{w} {n}: {got}");
            }
        }
    }

    #[test]
    fn leak_family_spine_has_n_nodes() {
        let (head, args) = match &Workload::LeakFamily.build(10) {
            NamedTerm::App(_, big) => {
                let (h, a) = big.spine();
                (h.clone(), a.len())
            }
            _ => panic!("expected an application"),
        };
        assert_eq!(head, NamedTerm::var("c"));
        assert_eq!(args, 9);
    }
}
