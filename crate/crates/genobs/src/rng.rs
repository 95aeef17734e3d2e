//! Deterministic random number generation with a pinned algorithm.
//!
//! The generator is xoshiro256** (Blackman/Vigna), state-initialized from the
//! user seed with SplitMix64. Both algorithms have published reference
//! implementations, so ports in other languages can reproduce every sampled
//! count and matrix bit for bit. The derived primitives are pinned too:
//!
//! * `uniform`: `(next_u64() >> 11) * 2^-53`, in `[0, 1)`.
//! * `normal_pair`: Box-Muller on `(1 - uniform, uniform)`; the first draw
//!   feeds the radius, the second the angle.
//! * `complex_gaussian`: one `normal_pair`, real part first.
//!
//! Substreams (`Rng::stream`) hash the stream index into the seed with
//! SplitMix64 so that per-trial streams are independent of evaluation order.

/// Algorithm identifier embedded in sampling reports.
pub const RNG_ALGORITHM: &str = "xoshiro256** (SplitMix64 seeding)";

const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(SPLITMIX_GAMMA);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seedable xoshiro256** generator.
#[derive(Debug, Clone)]
pub struct Rng {
    state: [u64; 4],
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        let mut sm = seed;
        Self {
            state: [
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
                splitmix64(&mut sm),
            ],
        }
    }

    /// Substream `index` of `seed`; distinct indices give decorrelated streams.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut sm = seed ^ index.wrapping_mul(SPLITMIX_GAMMA);
        let derived = splitmix64(&mut sm);
        Self::seeded(derived)
    }

    pub fn next_u64(&mut self) -> u64 {
        let s = &mut self.state;
        let result = s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = s[3].rotate_left(45);
        result
    }

    /// Uniform draw in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by scaling a `uniform` draw.
    pub fn below(&mut self, bound: usize) -> usize {
        debug_assert!(bound > 0);
        ((self.uniform() * bound as f64) as usize).min(bound - 1)
    }

    /// Two independent standard normal draws (Box-Muller).
    pub fn normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform(); // in (0, 1], keeps ln finite
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Standard complex Gaussian: independent N(0,1) real and imaginary parts.
    pub fn complex_gaussian(&mut self) -> num_complex::Complex64 {
        let (re, im) = self.normal_pair();
        num_complex::Complex64::new(re, im)
    }
}
