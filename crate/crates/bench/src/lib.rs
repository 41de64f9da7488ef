//! Shared inputs for the benchmarks in `benches/`.

use varextropy::distribution::open_unit;
use varextropy::rng::{substream, StreamDomain};
use varextropy::Sample;

/// A reproducible uniform sample of size `n`.
pub fn uniform_sample(n: usize, seed: u64) -> Sample {
    let mut rng = substream(seed, StreamDomain::Fresh, 0);
    Sample::new((0..n).map(|_| open_unit(&mut rng)).collect::<Vec<_>>()).expect("finite draws")
}
