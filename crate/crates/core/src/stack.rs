// Deep terms (long spines, large numerals) recurse far past the default
// thread stack; every recursive walk in the crate goes through `guard`.

const RED_ZONE: usize = 128 * 1024;
const GROWTH: usize = 4 * 1024 * 1024;

#[inline]
pub(crate) fn guard<R>(f: impl FnOnce() -> R) -> R {
    stacker::maybe_grow(RED_ZONE, GROWTH, f)
}
