//! Ordered data-parallel helpers. Both paths return results in index
//! order so that callers get identical output in either mode.

use crate::config::Execution;

pub(crate) fn filter_map_range<R, F>(exec: Execution, len: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..len).into_par_iter().filter_map(f).collect()
        }
        _ => (0..len).filter_map(f).collect(),
    }
}

pub(crate) fn filter_map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            items.par_iter().filter_map(f).collect()
        }
        _ => items.iter().filter_map(f).collect(),
    }
}

pub(crate) fn map_slice<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    filter_map_slice(exec, items, |x| Some(f(x)))
}
