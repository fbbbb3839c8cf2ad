//! Splittable, counter-based random streams.
//!
//! Every Monte Carlo routine receives an [`RngStream`], a pure value
//! identifying a point in a tree of random sources: a root seed plus a path
//! of `(label, index)` pairs. The generator state for a stream is a hash of
//! that identity, so
//!
//! * deriving the same stream twice yields the same sequence,
//! * distinct paths yield statistically independent sequences,
//! * work can be distributed over threads in chunks indexed by path, with
//!   results that do not depend on the thread count.
//!
//! The stream feeds a ChaCha8 generator: deterministic across platforms and
//! fast; cryptographic strength is not a goal here, uncorrelated streams are.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::scalar::Real;

/// Domain separator so stream seeds cannot collide with other uses of the
/// same root seed.
const DOMAIN_TAG: &[u8] = b"curvestat.stream.v1";

/// Convention for scalar complex Gaussians used program-wide:
/// `E|a|^2 = 1`, i.e. real and imaginary parts are independent centered
/// normals with variance 1/2. All ensemble weights in this crate assume it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplexGaussianConvention;

impl ComplexGaussianConvention {
    /// Variance of each real component.
    pub const COMPONENT_VARIANCE: f64 = 0.5;
    /// Mean squared modulus of one draw.
    pub const MEAN_SQUARED_MODULUS: f64 = 1.0;
}

/// Identity of one random stream: root seed plus derivation path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    root_seed: u64,
    path: Vec<(String, u64)>,
}

impl RngStream {
    /// Stream at the root of the derivation tree.
    pub fn root(root_seed: u64) -> Self {
        RngStream {
            root_seed,
            path: Vec::new(),
        }
    }

    /// Child stream for `(label, index)`. Labels separate roles ("curve",
    /// "line", "chunk", ...), indices enumerate peers within a role.
    pub fn derive_stream(&self, label: &str, index: u64) -> Self {
        let mut path = self.path.clone();
        path.push((label.to_owned(), index));
        RngStream {
            root_seed: self.root_seed,
            path,
        }
    }

    /// The root seed this stream descends from (echoed into result records).
    pub fn root_seed(&self) -> u64 {
        self.root_seed
    }

    /// Hash of the full identity; the generator seed.
    fn seed_bytes(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(DOMAIN_TAG);
        h.update(self.root_seed.to_le_bytes());
        for (label, index) in &self.path {
            // Length-prefix the label so ("ab",1)/("a",...) cannot alias.
            h.update((label.len() as u64).to_le_bytes());
            h.update(label.as_bytes());
            h.update(index.to_le_bytes());
        }
        h.finalize().into()
    }

    /// Materialize the generator for this stream. Calling twice returns
    /// generators that produce identical sequences.
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::from_seed(self.seed_bytes())
    }
}

/// One complex Gaussian under the program convention `E|a|^2 = 1`.
pub fn complex_normal<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let half = T::of(std::f64::consts::FRAC_1_SQRT_2);
    Complex::new(T::standard_normal(rng) * half, T::standard_normal(rng) * half)
}

/// Draw `n` i.i.d. complex Gaussians from the stream's own generator.
/// Deterministic in `(stream, n)`; a prefix of a longer draw agrees with a
/// shorter one.
pub fn sample_cn<T: Real>(stream: &RngStream, n: usize) -> Vec<Complex<T>> {
    let mut rng = stream.rng();
    (0..n).map(|_| complex_normal(&mut rng)).collect()
}
