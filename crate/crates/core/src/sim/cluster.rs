use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Random partition of `0..n_rrus` into `floor(n_rrus / k)` groups of exactly
/// `k`; the leftover RRUs belong to no cluster.
pub fn form_clusters<R: Rng + ?Sized>(
    n_rrus: usize,
    k: u32,
    rng: &mut R,
) -> Result<Vec<Vec<usize>>> {
    let size = k as usize;
    if k == 0 || n_rrus < size {
        return Err(Error::TooFewRrus { n_rrus, k });
    }
    let mut order: Vec<usize> = (0..n_rrus).collect();
    order.shuffle(rng);
    Ok(order.chunks_exact(size).map(<[usize]>::to_vec).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::stream_rng;

    #[test]
    fn singletons() {
        let mut rng = stream_rng(0, 0);
        let c = form_clusters(7, 1, &mut rng).unwrap();
        assert_eq!(c.len(), 7);
        assert!(c.iter().all(|g| g.len() == 1));
    }

    #[test]
    fn partition_property() {
        let mut rng = stream_rng(0, 1);
        let c = form_clusters(103, 10, &mut rng).unwrap();
        assert_eq!(c.len(), 10);
        let mut seen = [false; 103];
        for g in &c {
            assert_eq!(g.len(), 10);
            for &i in g {
                assert!(!seen[i], "RRU {i} in two clusters");
                seen[i] = true;
            }
        }
        assert_eq!(seen.iter().filter(|&&s| s).count(), 100);
    }

    #[test]
    fn too_few() {
        let mut rng = stream_rng(0, 2);
        assert!(matches!(
            form_clusters(4, 5, &mut rng),
            Err(Error::TooFewRrus { n_rrus: 4, k: 5 })
        ));
    }

    #[test]
    fn membership_is_uniform() {
        // 23 RRUs in clusters of 5: each RRU is clustered with probability 20/23.
        let draws = 20_000;
        let mut rng = stream_rng(0, 3);
        let mut hits = [0u32; 23];
        for _ in 0..draws {
            for g in form_clusters(23, 5, &mut rng).unwrap() {
                for i in g {
                    hits[i] += 1;
                }
            }
        }
        let p = 20.0 / 23.0;
        let sd = (draws as f64 * p * (1.0 - p)).sqrt();
        for (i, &h) in hits.iter().enumerate() {
            let z = (h as f64 - draws as f64 * p) / sd;
            assert!(z.abs() < 4.5, "RRU {i}: z = {z}");
        }
    }
}
