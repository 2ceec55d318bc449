//! Ordered parallel map: evaluate independent checks on worker threads and
//! collect results in input order, so reports stay byte-identical whatever
//! the thread count.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

pub fn ordered_map<T, U, E, F>(jobs: usize, items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync,
{
    let jobs = jobs.max(1).min(items.len().max(1));
    if jobs <= 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<U, E>>>> =
        Mutex::new((0..items.len()).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                slots.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_inner().unwrap().into_iter().map(|r| r.expect("slot filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order_across_thread_counts() {
        let items: Vec<usize> = (0..37).collect();
        let seq = ordered_map::<_, _, (), _>(1, &items, |&i| Ok(i * i)).unwrap();
        let par = ordered_map::<_, _, (), _>(4, &items, |&i| Ok(i * i)).unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn propagates_errors() {
        let items: Vec<usize> = (0..5).collect();
        let r = ordered_map(3, &items, |&i| if i == 3 { Err("boom") } else { Ok(i) });
        assert!(r.is_err());
    }
}
