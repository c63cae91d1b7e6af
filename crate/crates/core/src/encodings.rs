//! Integer-to-binary encodings used to binarize bounded integer variables.
//!
//! Unary encoding spends `d = u - l` weight-1 bits. Log encoding spends
//! `K + 1` bits with `K = floor(log2 d)`: binary weights `2^0 .. 2^(K-1)`
//! plus a residual bit of weight `d - (2^K - 1)`, which covers `[l, u]`
//! exactly with no overshoot. A degenerate range (`l == u`) takes zero bits.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncodingScheme {
    Unary,
    Log,
}

impl std::fmt::Display for EncodingScheme {
    fn fmt(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str(match self {
            EncodingScheme::Unary => "unary",
            EncodingScheme::Log => "log",
        })
    }
}

/// A fixed encoding of the integer range `[lower, upper]` into weighted bits,
/// decoding as `lower + sum_k weight_k * bit_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerEncoding {
    lower: i64,
    upper: i64,
    scheme: EncodingScheme,
    bit_weights: Vec<i64>,
    /// Index of this encoding's first bit within a host model.
    bit_offset: usize,
}

impl IntegerEncoding {
    /// `d` weight-1 bits.
    pub fn unary(lower: i64, upper: i64) -> Result<Self> {
        Self::check_bounds(lower, upper)?;
        let d = (upper - lower) as usize;
        Ok(Self {
            lower,
            upper,
            scheme: EncodingScheme::Unary,
            bit_weights: vec![1; d],
            bit_offset: 0,
        })
    }

    /// `K + 1` bits: binary weights plus the residual `d - (2^K - 1)`.
    pub fn log(lower: i64, upper: i64) -> Result<Self> {
        Self::check_bounds(lower, upper)?;
        let d = upper - lower;
        let mut bit_weights = Vec::new();
        if d > 0 {
            let k = d.ilog2();
            for e in 0..k {
                bit_weights.push(1i64 << e);
            }
            bit_weights.push(d - ((1i64 << k) - 1));
        }
        Ok(Self { lower, upper, scheme: EncodingScheme::Log, bit_weights, bit_offset: 0 })
    }

    pub fn with_scheme(scheme: EncodingScheme, lower: i64, upper: i64) -> Result<Self> {
        match scheme {
            EncodingScheme::Unary => Self::unary(lower, upper),
            EncodingScheme::Log => Self::log(lower, upper),
        }
    }

    fn check_bounds(lower: i64, upper: i64) -> Result<()> {
        if lower > upper {
            return Err(Error::InvalidBounds { lower, upper });
        }
        Ok(())
    }

    pub fn lower(&self) -> i64 {
        self.lower
    }

    pub fn upper(&self) -> i64 {
        self.upper
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    pub fn num_bits(&self) -> usize {
        self.bit_weights.len()
    }

    pub fn bit_weights(&self) -> &[i64] {
        &self.bit_weights
    }

    pub fn bit_offset(&self) -> usize {
        self.bit_offset
    }

    pub fn set_bit_offset(&mut self, offset: usize) {
        self.bit_offset = offset;
    }

    /// Host-model indices of this encoding's bits.
    pub fn bit_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bit_offset..self.bit_offset + self.bit_weights.len()
    }

    pub fn decode(&self, bits: &[bool]) -> Result<i64> {
        if bits.len() != self.bit_weights.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bit_weights.len(),
                got: bits.len(),
            });
        }
        let mut value = self.lower;
        for (w, &b) in self.bit_weights.iter().zip(bits) {
            if b {
                value += w;
            }
        }
        Ok(value)
    }

    /// Canonical bit pattern for a value: the prefix-of-ones form for unary,
    /// residual-bit-first then binary remainder for log.
    pub fn encode_value(&self, value: i64) -> Result<Vec<bool>> {
        if value < self.lower || value > self.upper {
            return Err(Error::ValueOutOfRange {
                value,
                lower: self.lower,
                upper: self.upper,
            });
        }
        let mut rem = value - self.lower;
        let mut bits = vec![false; self.bit_weights.len()];
        match self.scheme {
            EncodingScheme::Unary => {
                for bit in bits.iter_mut().take(rem as usize) {
                    *bit = true;
                }
            }
            EncodingScheme::Log => {
                if let Some((&residual, binary)) = self.bit_weights.split_last() {
                    let binary_max = (1i64 << binary.len()) - 1;
                    if rem > binary_max {
                        *bits.last_mut().expect("residual bit") = true;
                        rem -= residual;
                    }
                    for (k, _) in binary.iter().enumerate() {
                        if rem & (1 << k) != 0 {
                            bits[k] = true;
                        }
                    }
                }
            }
        }
        debug_assert_eq!(self.decode(&bits).expect("length matches"), value);
        Ok(bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn unary_shape_and_decode() {
        let e = IntegerEncoding::unary(2, 5).unwrap();
        assert_eq!(e.num_bits(), 3);
        assert_eq!(e.decode(&[true, true, false]).unwrap(), 4);
        assert_eq!(e.decode(&[false, false, false]).unwrap(), 2);
        assert_eq!(e.decode(&[true, true, true]).unwrap(), 5);
    }

    #[test]
    fn degenerate_range_uses_no_bits() {
        for e in [IntegerEncoding::unary(7, 7).unwrap(), IntegerEncoding::log(3, 3).unwrap()] {
            assert_eq!(e.num_bits(), 0);
            assert_eq!(e.decode(&[]).unwrap(), e.lower());
        }
    }

    #[test]
    fn bounds_are_checked() {
        assert!(matches!(
            IntegerEncoding::unary(5, 2),
            Err(Error::InvalidBounds { lower: 5, upper: 2 })
        ));
        assert!(IntegerEncoding::log(9, 3).is_err());
    }

    #[test]
    fn log_weights_follow_the_residual_rule() {
        let e = IntegerEncoding::log(0, 10).unwrap();
        assert_eq!(e.bit_weights(), &[1, 2, 4, 3]);
        assert_eq!(e.decode(&[true, false, true, true]).unwrap(), 8);
        assert_eq!(e.encode_value(10).unwrap(), vec![true, true, true, true]);

        let one = IntegerEncoding::log(0, 1).unwrap();
        assert_eq!(one.bit_weights(), &[1]);
    }

    #[test]
    fn log_bit_count_is_k_plus_one() {
        for d in 1i64..=200 {
            let e = IntegerEncoding::log(0, d).unwrap();
            assert_eq!(e.num_bits() as u32, d.ilog2() + 1, "d = {d}");
            assert_eq!(e.bit_weights().iter().sum::<i64>(), d);
            assert!(e.bit_weights().iter().all(|&w| w >= 0));
        }
    }

    #[test]
    fn unary_canonical_pattern_is_prefix_of_ones() {
        let e = IntegerEncoding::unary(0, 4).unwrap();
        assert_eq!(e.encode_value(2).unwrap(), vec![true, true, false, false]);
        assert_eq!(e.encode_value(0).unwrap(), vec![false; 4]);
    }

    #[test]
    fn decode_image_is_exactly_the_range() {
        // Exhaustive over all bit patterns for ranges small enough.
        for l in [-5i64, 0, 3] {
            for d in 0i64..=10 {
                for e in [
                    IntegerEncoding::unary(l, l + d).unwrap(),
                    IntegerEncoding::log(l, l + d).unwrap(),
                ] {
                    let n = e.num_bits();
                    let mut image = BTreeSet::new();
                    for pattern in 0u32..(1 << n) {
                        let bits: Vec<bool> = (0..n).map(|k| pattern & (1 << k) != 0).collect();
                        image.insert(e.decode(&bits).unwrap());
                    }
                    let expected: BTreeSet<i64> = (l..=l + d).collect();
                    assert_eq!(image, expected, "{:?} l={l} d={d}", e.scheme());
                }
            }
        }
    }

    #[test]
    fn representability_up_to_1024() {
        for scheme in [EncodingScheme::Unary, EncodingScheme::Log] {
            let e = IntegerEncoding::with_scheme(scheme, -7, -7 + 1024).unwrap();
            for v in e.lower()..=e.upper() {
                assert_eq!(e.decode(&e.encode_value(v).unwrap()).unwrap(), v);
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip_identity(l in -100i64..100, d in 0i64..300, pick in 0.0f64..1.0) {
            let v = l + ((d as f64) * pick).floor() as i64;
            for scheme in [EncodingScheme::Unary, EncodingScheme::Log] {
                let e = IntegerEncoding::with_scheme(scheme, l, l + d).unwrap();
                prop_assert_eq!(e.decode(&e.encode_value(v).unwrap()).unwrap(), v);
            }
        }

        #[test]
        fn decode_lands_in_range(l in -50i64..50, d in 0i64..64, raw in 0u64..u64::MAX) {
            let e = IntegerEncoding::log(l, l + d).unwrap();
            let bits: Vec<bool> = (0..e.num_bits()).map(|k| raw & (1 << k) != 0).collect();
            let v = e.decode(&bits).unwrap();
            prop_assert!(v >= l && v <= l + d);
        }
    }
}
