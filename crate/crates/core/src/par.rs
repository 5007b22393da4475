//! Data-parallel helpers. With the `parallel` feature these use rayon;
//! without it (or with [`Exec::Sequential`]) they run on the calling thread.
//! Both paths return identical results.

/// Execution strategy for the data-parallel loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Falls back to sequential when built without the `parallel` feature.
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// Map over a slice, preserving order.
pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// The smallest index in `range` for which `f` returns `Some`, with its value.
pub fn find_first<R, F>(exec: Exec, range: std::ops::Range<u64>, f: F) -> Option<(u64, R)>
where
    R: Send,
    F: Fn(u64) -> Option<R> + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            range
                .into_par_iter()
                .find_map_first(|i| f(i).map(|r| (i, r)))
        }
        _ => range.into_iter().find_map(|i| f(i).map(|r| (i, r))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_strategies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let a = map(Exec::Sequential, &xs, |x| x * x);
        let b = map(Exec::Parallel, &xs, |x| x * x);
        assert_eq!(a, b);
        let pred = |i: u64| if i % 97 == 13 && i > 200 { Some(i * 2) } else { None };
        assert_eq!(
            find_first(Exec::Sequential, 0..10_000, pred),
            find_first(Exec::Parallel, 0..10_000, pred)
        );
        assert_eq!(find_first(Exec::Parallel, 0..10_000, pred), Some((207, 414)));
    }
}
