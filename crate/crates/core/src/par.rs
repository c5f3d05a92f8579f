#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Below this many items a parallel request still runs sequentially.
pub const PARALLEL_THRESHOLD: usize = 64;

/// Execution strategy for the data-parallel loops of the pipeline.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn parallel_for(self, len: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && len >= PARALLEL_THRESHOLD
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(items.len()) {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn flat_map<T, U, I, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        I: IntoIterator<Item = U>,
        F: Fn(&T) -> I + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel_for(items.len()) {
            return items.par_iter().flat_map_iter(f).collect();
        }
        items.iter().flat_map(f).collect()
    }

    pub fn sort<T: Ord + Send>(self, items: &mut [T]) {
        #[cfg(feature = "parallel")]
        if self.parallel_for(items.len()) {
            items.par_sort_unstable();
            return;
        }
        items.sort_unstable();
    }
}
