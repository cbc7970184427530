//! Fixed inputs for the benchmarks in `benches/`.

use wormhole_core::Cqs;

/// Singularities with two, one and no extremal P-resolutions.
pub fn sample_singularities() -> Vec<Cqs> {
    [
        (235, 169),
        (36, 13),
        (400, 361),
        (19, 11),
        (445, 94),
        (9, 2),
    ]
    .into_iter()
    .map(|(n, q)| Cqs::new(n, q).unwrap())
    .collect()
}

/// Coprime pairs `(n, q)` with `n` near `size`.
pub fn coprime_pairs(size: u64) -> Vec<(u64, u64)> {
    (1..size)
        .filter(|q| num_integer::gcd(size, *q) == 1)
        .map(|q| (size, q))
        .collect()
}
