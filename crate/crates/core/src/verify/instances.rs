//! Instance sets: seeded random points and exhaustive boxes.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::{Bit, PosRational, Scalar, SlotDomain, TropInt};

use super::VerifyError;

/// Numerators and denominators of sampled rationals are drawn from `[1, SAMPLE_MAX]`.
pub const SAMPLE_MAX: u64 = 1 << 16;

fn random_rational(rng: &mut ChaCha8Rng) -> PosRational {
    let n: u64 = rng.gen_range(1..=SAMPLE_MAX);
    let d: u64 = rng.gen_range(1..=SAMPLE_MAX);
    PosRational::new(num_rational::BigRational::new(n.into(), d.into())).expect("positive")
}

/// One random value of `domain`; integer slots are uniform on `[0, int_bound]`.
pub fn random_scalar(rng: &mut ChaCha8Rng, domain: SlotDomain, int_bound: u64) -> Scalar {
    match domain {
        SlotDomain::PosRational => Scalar::Rat(random_rational(rng)),
        SlotDomain::PosRationalPair => {
            let x = random_rational(rng);
            Scalar::Pair(x, random_rational(rng))
        }
        SlotDomain::NonNegInt => Scalar::Int(TropInt::new(rng.gen_range(0..=int_bound))),
        SlotDomain::Bit => Scalar::Bit(if rng.gen::<bool>() { Bit::ONE } else { Bit::ZERO }),
    }
}

/// `count` points drawn sequentially from a generator seeded with `seed`.
pub fn sample_states(domains: &[SlotDomain], count: usize, seed: u64, int_bound: u64) -> Vec<Vec<Scalar>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| domains.iter().map(|&d| random_scalar(&mut rng, d, int_bound)).collect())
        .collect()
}

/// A finite box: integer slots range over `0..=int_bound`, bits over `{0,1}`.
/// States are numbered lexicographically, last slot fastest.
#[derive(Debug, Clone)]
pub struct BoxEnumeration {
    domains: Vec<SlotDomain>,
    radices: Vec<u64>,
    len: u64,
}

impl BoxEnumeration {
    pub fn new(domains: &[SlotDomain], int_bound: u64, ceiling: u64) -> Result<Self, VerifyError> {
        let mut radices = Vec::with_capacity(domains.len());
        let mut len: u128 = 1;
        for &d in domains {
            let r = match d {
                SlotDomain::NonNegInt => int_bound + 1,
                SlotDomain::Bit => 2,
                _ => {
                    return Err(VerifyError::BackendIncompatible {
                        backend: "exhaustive".into(),
                        reason: format!("slot domain {d} is not finite"),
                    })
                }
            };
            radices.push(r);
            len = len.saturating_mul(r as u128);
        }
        if len > ceiling as u128 {
            return Err(VerifyError::Overflow {
                states: len.to_string(),
                ceiling,
            });
        }
        Ok(BoxEnumeration {
            domains: domains.to_vec(),
            radices,
            len: len as u64,
        })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The `index`-th state.
    pub fn state(&self, mut index: u64) -> Vec<Scalar> {
        let mut digits = vec![0u64; self.radices.len()];
        for (k, &r) in self.radices.iter().enumerate().rev() {
            digits[k] = index % r;
            index /= r;
        }
        digits
            .iter()
            .zip(&self.domains)
            .map(|(&v, &d)| Scalar::from_int(d, BigInt::from(v)).expect("in range"))
            .collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<Scalar>> + '_ {
        (0..self.len).map(move |i| self.state(i))
    }
}

/// Every state of the box, in lexicographic order.
pub fn enumerate_box(domains: &[SlotDomain], int_bound: u64, ceiling: u64) -> Result<Vec<Vec<Scalar>>, VerifyError> {
    let b = BoxEnumeration::new(domains, int_bound, ceiling)?;
    Ok(b.iter().collect())
}
