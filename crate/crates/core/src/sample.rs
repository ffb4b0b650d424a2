//! Seeded random sampling of states and operators for property suites.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bridge::{BlochVector, Spinor};
use crate::quat::{PureUnitQuaternion, Quaternion, UnitQuaternion};

/// Deterministic generator for a seed; every randomized suite takes one.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Uniform on the 3-sphere (normalized 4-vector of gaussians).
pub fn unit_quaternion<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let q = Quaternion::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        let n = q.norm();
        if n > 1e-3 {
            return UnitQuaternion::unchecked(q.scale(1.0 / n));
        }
    }
}

/// Uniform on the 2-sphere of imaginary directions.
pub fn pure_unit<R: Rng + ?Sized>(rng: &mut R) -> PureUnitQuaternion {
    loop {
        let (x, y, z) = (gaussian(rng), gaussian(rng), gaussian(rng));
        let n = (x * x + y * y + z * z).sqrt();
        if n > 1e-3 {
            return PureUnitQuaternion::unchecked(x / n, y / n, z / n);
        }
    }
}

/// Uniform on the Bloch sphere.
pub fn bloch_vector<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let p = pure_unit(rng);
    BlochVector::unchecked(p.x(), p.y(), p.z())
}

/// Haar-uniform normalized spinor, global phase included.
pub fn spinor<R: Rng + ?Sized>(rng: &mut R) -> Spinor {
    loop {
        let a = Complex64::new(gaussian(rng), gaussian(rng));
        let b = Complex64::new(gaussian(rng), gaussian(rng));
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if n > 1e-3 {
            return Spinor::unchecked(a / n, b / n);
        }
    }
}
