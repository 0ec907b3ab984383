//! Parameter sets shared by the benchmarks in `benches/`.

use gaussmem_core::ChannelParams;

/// One attenuator below threshold, one amplifier below and one above.
pub fn reference_channels() -> Vec<(&'static str, ChannelParams)> {
    [
        ("attenuator", 0.9, 0.8, 1.0),
        ("amplifier", 1.1, 0.8, 1.0),
        ("above_threshold", 4.0, 0.5, 0.0),
    ]
    .into_iter()
    .map(|(name, k, m, n)| (name, ChannelParams::new(k, m, n).expect("valid reference parameters")))
    .collect()
}
