use std::any::Any;
use std::cell::RefCell;

// Dropping a value nested a hundred thousand levels deep would otherwise
// recurse once per level. Children of a dying node are parked here and
// released by the outermost drop in a loop.

thread_local! {
    static QUEUE: RefCell<Option<Vec<Box<dyn Any>>>> = const { RefCell::new(None) };
}

pub(crate) fn defer<T: 'static>(garbage: T) {
    let first = QUEUE.try_with(|q| {
        let mut q = q.borrow_mut();
        match q.as_mut() {
            Some(pending) => {
                pending.push(Box::new(garbage));
                None
            }
            None => {
                *q = Some(Vec::new());
                Some(garbage)
            }
        }
    });
    let garbage = match first {
        Ok(None) => return,
        Ok(Some(g)) => g,
        // thread-local already torn down: plain drop
        Err(_) => return,
    };
    drop(garbage);
    loop {
        let next = QUEUE.with(|q| q.borrow_mut().as_mut().and_then(Vec::pop));
        match next {
            Some(g) => drop(g),
            None => break,
        }
    }
    QUEUE.with(|q| *q.borrow_mut() = None);
}
