//! Messages `(d1, d2)` and their raw-bit packing.
//!
//! `d1` ranges over `[1, d1_domain]`. The packed form spends
//! `floor(log2 d1_domain)` bits on `d1 - 1` so that every bit pattern is a
//! valid message, followed by the `d2` bits verbatim.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::bits::BitString;
use crate::error::{Result, SlicedError};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Message {
    pub d1: BigUint,
    pub d2: BitString,
}

impl Message {
    pub fn validate(&self, d1_domain: &BigUint, d2_bits: usize) -> Result<()> {
        if self.d1.is_zero() || self.d1 > *d1_domain {
            return Err(SlicedError::OutOfRange(format!(
                "d1 = {} not in [1, {d1_domain}]",
                self.d1
            )));
        }
        if self.d2.len() != d2_bits {
            return Err(SlicedError::LengthMismatch {
                left: self.d2.len(),
                right: d2_bits,
            });
        }
        Ok(())
    }
}

/// Bits of packed `d1`: `floor(log2 d1_domain)`.
pub fn d1_packed_bits(d1_domain: &BigUint) -> usize {
    (d1_domain.bits() as usize).saturating_sub(1)
}

/// Total packed message length.
pub fn packed_bits(d1_domain: &BigUint, d2_bits: usize) -> usize {
    d1_packed_bits(d1_domain) + d2_bits
}

pub fn message_from_bits(bits: &BitString, d1_domain: &BigUint, d2_bits: usize) -> Result<Message> {
    let head = d1_packed_bits(d1_domain);
    if d1_domain.is_zero() {
        return Err(SlicedError::Infeasible("empty d1 domain".into()));
    }
    if bits.len() != head + d2_bits {
        return Err(SlicedError::LengthMismatch {
            left: bits.len(),
            right: head + d2_bits,
        });
    }
    Ok(Message {
        d1: bits.prefix(head).decimal() + 1u8,
        d2: bits.slice(head, bits.len()),
    })
}

pub fn message_to_bits(msg: &Message, d1_domain: &BigUint, d2_bits: usize) -> Result<BitString> {
    msg.validate(d1_domain, d2_bits)?;
    let head = d1_packed_bits(d1_domain);
    let d1 = BitString::from_biguint(&(&msg.d1 - 1u8), head).map_err(|_| {
        SlicedError::OutOfRange(format!("d1 = {} exceeds the packed range 2^{head}", msg.d1))
    })?;
    Ok(BitString::concat([&d1, &msg.d2]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_widths() {
        assert_eq!(d1_packed_bits(&BigUint::from(1u8)), 0);
        assert_eq!(d1_packed_bits(&BigUint::from(71u8)), 6);
        assert_eq!(d1_packed_bits(&BigUint::from(64u8)), 6);
        assert_eq!(d1_packed_bits(&BigUint::from(63u8)), 5);
    }

    #[test]
    fn every_pattern_round_trips() {
        let domain = BigUint::from(71u8);
        for v in 0..1u64 << 9 {
            let bits = BitString::from_u64(v, 9).unwrap();
            let msg = message_from_bits(&bits, &domain, 3).unwrap();
            msg.validate(&domain, 3).unwrap();
            assert_eq!(message_to_bits(&msg, &domain, 3).unwrap(), bits);
        }
    }

    #[test]
    fn rejects_unpackable_messages() {
        let domain = BigUint::from(71u8);
        let msg = Message {
            d1: BigUint::from(70u8),
            d2: BitString::zeros(2),
        };
        assert!(message_to_bits(&msg, &domain, 2).is_err());
        let msg = Message {
            d1: BigUint::from(0u8),
            d2: BitString::zeros(2),
        };
        assert!(msg.validate(&domain, 2).is_err());
        assert!(message_from_bits(&BitString::zeros(5), &domain, 2).is_err());
    }
}
