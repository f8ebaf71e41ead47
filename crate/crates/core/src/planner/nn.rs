//! Nearest-neighbor queries. Linear scans; ties go to the lowest key.

use crate::geometry::{CSpace, Configuration};

pub trait Keyed {
    fn key(&self) -> u64;
    fn config(&self) -> &Configuration;
}

/// Index of the item nearest to `q`.
pub fn nearest<T: Keyed>(space: &CSpace, items: &[T], q: &Configuration) -> Option<usize> {
    let mut best: Option<(f64, u64, usize)> = None;
    for (i, it) in items.iter().enumerate() {
        let d = space.dist_sq(it.config(), q);
        let better = match best {
            None => true,
            Some((bd, bk, _)) => d < bd || (d == bd && it.key() < bk),
        };
        if better {
            best = Some((d, it.key(), i));
        }
    }
    best.map(|b| b.2)
}

/// Up to `k` items nearest to `q`, closest first, as `(index, distance)`.
pub fn k_nearest<T: Keyed>(space: &CSpace, items: &[T], q: &Configuration, k: usize) -> Vec<(usize, f64)> {
    let mut all: Vec<(f64, u64, usize)> = items
        .iter()
        .enumerate()
        .map(|(i, it)| (space.dist_sq(it.config(), q), it.key(), i))
        .collect();
    let k = k.min(all.len());
    if k == 0 {
        return Vec::new();
    }
    let cmp = |a: &(f64, u64, usize), b: &(f64, u64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < all.len() {
        all.select_nth_unstable_by(k - 1, cmp);
        all.truncate(k);
    }
    all.sort_by(cmp);
    all.into_iter().map(|(d, _, i)| (i, d.sqrt())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Dim;

    struct P(u64, Configuration);
    impl Keyed for P {
        fn key(&self) -> u64 {
            self.0
        }
        fn config(&self) -> &Configuration {
            &self.1
        }
    }

    #[test]
    fn ties_resolve_to_lowest_key() {
        let s = CSpace::new(vec![Dim::linear(-5.0, 5.0)]).unwrap();
        let items = vec![
            P(9, Configuration::new(vec![1.0])),
            P(4, Configuration::new(vec![-1.0])),
            P(5, Configuration::new(vec![3.0])),
        ];
        let q = Configuration::new(vec![0.0]);
        assert_eq!(nearest(&s, &items, &q), Some(1));
        let k = k_nearest(&s, &items, &q, 2);
        assert_eq!(k.iter().map(|x| x.0).collect::<Vec<_>>(), vec![1, 0]);
        assert_eq!(k_nearest(&s, &items, &q, 10).len(), 3);
        assert!(nearest::<P>(&s, &[], &q).is_none());
    }
}
