use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator for one path: ChaCha8 keyed by `seed`, with `path_index`
/// selecting an independent stream. Any path can be regenerated in isolation.
pub fn path_rng(seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(path_index);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(7, 3), |r, _: u64| Some(r.random())).collect();
        let b: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(7, 3), |r, _: u64| Some(r.random())).collect();
        let c: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(7, 4), |r, _: u64| Some(r.random())).collect();
        let d: Vec<u64> = (0..4).map(|_| 0).scan(path_rng(8, 3), |r, _: u64| Some(r.random())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
