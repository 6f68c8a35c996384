//! Order-preserving map over independent work items, sequential or on rayon.

pub trait Executor {
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send;
}

/// Runs on the calling thread.
pub enum Sequential {}

impl Executor for Sequential {
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        items.iter().map(f).collect()
    }
}

/// Runs on the global rayon pool.
#[cfg(feature = "parallel")]
pub enum Parallel {}

#[cfg(feature = "parallel")]
impl Executor for Parallel {
    fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub type DefaultExecutor = Parallel;

#[cfg(not(feature = "parallel"))]
pub type DefaultExecutor = Sequential;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preserves_order() {
        let items: Vec<u32> = (0..1000).collect();
        let a = Sequential::map(&items, |x| x * x);
        let b = DefaultExecutor::map(&items, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[999], 998_001);
    }
}
