//! Fixed-width bit strings.
//!
//! Domain and range elements, verifier nonces and Hadamard outcomes are all
//! n-bit strings. Bytes are stored little-endian (bit `i` lives in byte
//! `i / 8`), which is also the wire convention: strings serialize as
//! `{"hex": <little-endian hex>, "n_bits": n}`.

use num_bigint::BigUint;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    n_bits: usize,
    /// Little-endian payload, exactly `ceil(n_bits / 8)` bytes, unused high
    /// bits of the last byte forced to zero.
    bytes: Vec<u8>,
}

impl Bits {
    pub fn zeros(n_bits: usize) -> Self {
        Bits {
            n_bits,
            bytes: vec![0u8; n_bits.div_ceil(8)],
        }
    }

    /// The low `n_bits` of `value`, little-endian.
    pub fn from_u64(value: u64, n_bits: usize) -> Result<Self> {
        if n_bits < 64 && value >> n_bits != 0 {
            return Err(Error::Validation(format!(
                "value {value} does not fit in {n_bits} bits"
            )));
        }
        let mut out = Bits::zeros(n_bits);
        for (i, byte) in out.bytes.iter_mut().enumerate() {
            *byte = (value >> (8 * i)) as u8;
        }
        Ok(out)
    }

    pub fn from_biguint(value: &BigUint, n_bits: usize) -> Result<Self> {
        if value.bits() as usize > n_bits {
            return Err(Error::Validation(format!(
                "value of {} bits does not fit in {n_bits} bits",
                value.bits()
            )));
        }
        let mut out = Bits::zeros(n_bits);
        for (i, b) in value.to_bytes_le().into_iter().enumerate() {
            out.bytes[i] = b;
        }
        Ok(out)
    }

    pub fn uniform<R: Rng + ?Sized>(n_bits: usize, rng: &mut R) -> Self {
        let mut out = Bits::zeros(n_bits);
        rng.fill_bytes(&mut out.bytes);
        out.mask_top();
        out
    }

    fn mask_top(&mut self) {
        let extra = self.bytes.len() * 8 - self.n_bits;
        if extra > 0 {
            let last = self.bytes.len() - 1;
            self.bytes[last] &= 0xff >> extra;
        }
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn bit(&self, i: usize) -> u8 {
        assert!(i < self.n_bits, "bit index {i} out of range");
        (self.bytes[i / 8] >> (i % 8)) & 1
    }

    pub fn set_bit(&mut self, i: usize, value: u8) {
        assert!(i < self.n_bits, "bit index {i} out of range");
        let mask = 1u8 << (i % 8);
        if value & 1 == 1 {
            self.bytes[i / 8] |= mask;
        } else {
            self.bytes[i / 8] &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.bytes.iter().all(|&b| b == 0)
    }

    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.n_bits, other.n_bits, "width mismatch in xor");
        let bytes = self
            .bytes
            .iter()
            .zip(&other.bytes)
            .map(|(a, b)| a ^ b)
            .collect();
        Bits {
            n_bits: self.n_bits,
            bytes,
        }
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &Bits) -> u8 {
        assert_eq!(self.n_bits, other.n_bits, "width mismatch in dot");
        let mut parity = 0u8;
        for (a, b) in self.bytes.iter().zip(&other.bytes) {
            parity ^= (a & b).count_ones() as u8 & 1;
        }
        parity & 1
    }

    /// `self` followed by `other` (`other`'s bits occupy the high positions).
    pub fn concat(&self, other: &Bits) -> Bits {
        let mut out = Bits::zeros(self.n_bits + other.n_bits);
        for i in 0..self.n_bits {
            out.set_bit(i, self.bit(i));
        }
        for i in 0..other.n_bits {
            out.set_bit(self.n_bits + i, other.bit(i));
        }
        out
    }

    /// Splits into `(low, high)` halves at position `at`.
    pub fn split(&self, at: usize) -> (Bits, Bits) {
        assert!(at <= self.n_bits);
        let mut lo = Bits::zeros(at);
        let mut hi = Bits::zeros(self.n_bits - at);
        for i in 0..at {
            lo.set_bit(i, self.bit(i));
        }
        for i in at..self.n_bits {
            hi.set_bit(i - at, self.bit(i));
        }
        (lo, hi)
    }

    pub fn to_u64(&self) -> u64 {
        assert!(self.n_bits <= 64, "bit string too wide for u64");
        let mut v = 0u64;
        for (i, &b) in self.bytes.iter().enumerate() {
            v |= (b as u64) << (8 * i);
        }
        v
    }

    pub fn to_biguint(&self) -> BigUint {
        BigUint::from_bytes_le(&self.bytes)
    }

    pub fn hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn from_hex(hex: &str, n_bits: usize) -> Result<Self> {
        if hex.len() != n_bits.div_ceil(8) * 2 {
            return Err(Error::Validation(format!(
                "hex length {} does not match {n_bits} bits",
                hex.len()
            )));
        }
        let mut out = Bits::zeros(n_bits);
        for (i, byte) in out.bytes.iter_mut().enumerate() {
            *byte = u8::from_str_radix(&hex[2 * i..2 * i + 2], 16)
                .map_err(|e| Error::Validation(format!("bad hex: {e}")))?;
        }
        let mut check = out.clone();
        check.mask_top();
        if check != out {
            return Err(Error::Validation(
                "hex sets bits beyond the declared width".into(),
            ));
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Bits {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        // Bit 0 printed leftmost.
        let s: String = (0..self.n_bits)
            .map(|i| if self.bit(i) == 1 { '1' } else { '0' })
            .collect();
        write!(f, "{}[{}]", s, self.n_bits)
    }
}

#[derive(Serialize, Deserialize)]
struct BitsWire {
    hex: String,
    n_bits: usize,
}

impl Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        BitsWire {
            hex: self.hex(),
            n_bits: self.n_bits,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = BitsWire::deserialize(deserializer)?;
        Bits::from_hex(&wire.hex, wire.n_bits).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_layout_is_little_endian() {
        let b = Bits::from_u64(0b1101, 6).unwrap();
        assert_eq!(b.bit(0), 1);
        assert_eq!(b.bit(1), 0);
        assert_eq!(b.bit(2), 1);
        assert_eq!(b.bit(3), 1);
        assert_eq!(b.bit(4), 0);
        assert_eq!(b.to_u64(), 13);
    }

    #[test]
    fn dot_is_parity_of_and() {
        let a = Bits::from_u64(0b1011, 4).unwrap();
        let b = Bits::from_u64(0b1110, 4).unwrap();
        // AND = 1010, parity 0.
        assert_eq!(a.dot(&b), 0);
        let c = Bits::from_u64(0b0010, 4).unwrap();
        assert_eq!(a.dot(&c), 1);
    }

    #[test]
    fn from_u64_rejects_oversized_values() {
        assert!(Bits::from_u64(16, 4).is_err());
        assert!(Bits::from_u64(15, 4).is_ok());
    }

    #[test]
    fn hex_round_trip_matches_wire_convention() {
        let b = Bits::from_u64(0x1a5, 9).unwrap();
        let j = serde_json::to_value(&b).unwrap();
        assert_eq!(j["n_bits"], 9);
        let back: Bits = serde_json::from_value(j).unwrap();
        assert_eq!(back, b);
    }

    proptest! {
        #[test]
        fn concat_then_split_round_trips(a in 0u64..256, b in 0u64..64, na in 1usize..9, nb in 1usize..7) {
            let a = Bits::from_u64(a & ((1 << na) - 1), na).unwrap();
            let b = Bits::from_u64(b & ((1 << nb) - 1), nb).unwrap();
            let joined = a.concat(&b);
            prop_assert_eq!(joined.n_bits(), na + nb);
            let (lo, hi) = joined.split(na);
            prop_assert_eq!(lo, a);
            prop_assert_eq!(hi, b);
        }

        #[test]
        fn dot_distributes_over_concat(r0 in 0u64..16, r1 in 0u64..16, x0 in 0u64..16, x1 in 0u64..16) {
            let n = 4;
            let r0 = Bits::from_u64(r0, n).unwrap();
            let r1 = Bits::from_u64(r1, n).unwrap();
            let x0 = Bits::from_u64(x0, n).unwrap();
            let x1 = Bits::from_u64(x1, n).unwrap();
            let lhs = r0.concat(&r1).dot(&x0.concat(&x1));
            prop_assert_eq!(lhs, r0.dot(&x0) ^ r1.dot(&x1));
        }
    }
}
