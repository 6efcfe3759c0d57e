//! Fourier-Walsh expansions. Coefficients of a Boolean function are
//! multiples of 2^-n, so the whole expansion is stored as integers scaled
//! by 2^n: `scaled[S] = 2^n * fhat(S)`, indexed by subset bitmask. All
//! transforms stay in integer arithmetic.

use num::bigint::BigInt;
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::boolfn::BooleanFunction;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FourierExpansion {
    n: u32,
    scaled: Vec<i64>,
}

/// In-place Walsh-Hadamard butterfly. After the call, out[S] is the
/// character sum over the input indexed by subset masks; magnitudes grow by
/// at most a factor 2^stages, so i64 is safe for every table this crate
/// produces (n <= 24 over +-1 inputs).
pub(crate) fn fwht_i64(buf: &mut [i64]) {
    let mut h = 1;
    while h < buf.len() {
        for block in buf.chunks_exact_mut(2 * h) {
            let (lo, hi) = block.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let x = *a;
                let y = *b;
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
}

/// Walsh-Hadamard transform of a +-1 table into `buf` (scaled by 2^n).
pub(crate) fn wht_scaled_into(table: &[i8], buf: &mut Vec<i64>) {
    buf.clear();
    buf.extend(table.iter().map(|&v| v as i64));
    fwht_i64(buf);
}

impl FourierExpansion {
    /// Transform of a truth table. The character chi_S(x) is
    /// (-1)^popcount(S & x) under the index encoding, which is what the
    /// butterfly computes.
    pub fn from_function(f: &BooleanFunction) -> Self {
        let mut scaled = Vec::new();
        wht_scaled_into(f.table(), &mut scaled);
        FourierExpansion { n: f.n(), scaled }
    }

    /// Builds an expansion from exact coefficients, which must all be
    /// multiples of 2^-n.
    pub fn from_coeffs(n: u32, coeffs: &[Rational]) -> Result<Self> {
        if n == 0 || n > crate::boolfn::MAX_N {
            return Err(Error::DimensionTooLarge {
                n,
                max: crate::boolfn::MAX_N,
                what: "dense expansions",
            });
        }
        let len = 1usize << n;
        if coeffs.len() != len {
            return Err(Error::TableLength {
                n,
                expected: len,
                got: coeffs.len(),
            });
        }
        let two_n = BigInt::from(1) << n;
        let mut scaled = Vec::with_capacity(len);
        for (mask, c) in coeffs.iter().enumerate() {
            let (q, r) = num::Integer::div_rem(&two_n, c.denom());
            if !r.is_zero() {
                return Err(Error::NonDyadicCoefficient { mask: mask as u64 });
            }
            let value = c.numer() * q;
            let value = i64::try_from(&value)
                .map_err(|_| Error::CoefficientOverflow { mask: mask as u64 })?;
            scaled.push(value);
        }
        Ok(FourierExpansion { n, scaled })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub(crate) fn scaled(&self) -> &[i64] {
        &self.scaled
    }

    pub fn coeff(&self, mask: usize) -> Rational {
        Rational::new(self.scaled[mask].into(), BigInt::from(1) << self.n)
            .expect("2^n is nonzero")
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.scaled.len()).map(|mask| self.coeff(mask)).collect()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.scaled
            .iter()
            .enumerate()
            .filter(|(_, &w)| w != 0)
            .map(|(mask, _)| mask)
    }

    /// Sum over all masks of fhat(S)^2, times 4^n. Equals 4^n exactly when
    /// the expansion came from a +-1 valued function.
    pub fn norm_sq_scaled(&self) -> i128 {
        self.scaled.iter().map(|&w| (w as i128) * (w as i128)).sum()
    }

    pub fn parseval_holds(&self) -> bool {
        self.norm_sq_scaled() == 1i128 << (2 * self.n)
    }

    /// Inverse transform. Errors if the expansion is not +-1 valued,
    /// naming the first point where it fails.
    pub fn to_function(&self) -> Result<BooleanFunction> {
        let mut buf = self.scaled.clone();
        fwht_i64(&mut buf);
        let two_n = 1i64 << self.n;
        let mut table = Vec::with_capacity(buf.len());
        for (point, &v) in buf.iter().enumerate() {
            if v == two_n {
                table.push(1i8);
            } else if v == -two_n {
                table.push(-1i8);
            } else {
                let value = Rational::new(v.into(), two_n.into()).expect("nonzero");
                return Err(Error::NotBoolean {
                    point,
                    value: value.to_string(),
                });
            }
        }
        BooleanFunction::new(self.n, table)
    }

    /// Multilinear extension evaluated at a point of [-1,1]^n.
    pub fn eval_extension(&self, z: &[Rational]) -> Result<Rational> {
        if z.len() != self.n as usize {
            return Err(Error::ArityMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let one = Rational::one();
        for (index, zi) in z.iter().enumerate() {
            if zi.abs() > one {
                return Err(Error::ExtensionRange { index });
            }
        }
        let mut total = Rational::zero();
        'masks: for mask in self.support() {
            let mut term = Rational::from_int(self.scaled[mask]);
            for (i, zi) in z.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    if zi.is_zero() {
                        continue 'masks;
                    }
                    term = term * zi;
                }
            }
            total = total + term;
        }
        Ok(&total / &Rational::from_bigint(BigInt::from(1) << self.n))
    }
}

impl Serialize for FourierExpansion {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            n: u32,
            coeffs: &'a [Rational],
        }
        let coeffs = self.coeffs();
        Repr { n: self.n, coeffs: &coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierExpansion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            n: u32,
            coeffs: Vec<Rational>,
        }
        let repr = Repr::deserialize(d)?;
        FourierExpansion::from_coeffs(repr.n, &repr.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolfn::LtfSpec;
    use crate::rational::rat;

    /// Definition-level transform: fhat(S) = 2^-n sum_x f(x) chi_S(x).
    fn naive_scaled(f: &BooleanFunction) -> Vec<i64> {
        let len = f.num_points();
        (0..len)
            .map(|s| {
                (0..len)
                    .map(|x| {
                        let chi = if (s & x).count_ones() % 2 == 0 { 1 } else { -1 };
                        f.value(x) as i64 * chi
                    })
                    .sum()
            })
            .collect()
    }

    #[test]
    fn butterfly_matches_definition() {
        for f in [
            BooleanFunction::majority(3).unwrap(),
            BooleanFunction::majority(5).unwrap(),
            BooleanFunction::parity(4).unwrap(),
            BooleanFunction::dictator(2, 4).unwrap(),
            BooleanFunction::from_ltf(&LtfSpec::new(vec![1, -3, 1, -1, 3]).unwrap()).unwrap(),
        ] {
            assert_eq!(FourierExpansion::from_function(&f).scaled(), naive_scaled(&f));
        }
    }

    #[test]
    fn majority3_coefficients() {
        let w = FourierExpansion::from_function(&BooleanFunction::majority(3).unwrap());
        for i in 0..3 {
            assert_eq!(w.coeff(1 << i), rat(1, 2));
        }
        assert_eq!(w.coeff(0b111), rat(-1, 2));
        for mask in [0usize, 0b011, 0b101, 0b110] {
            assert_eq!(w.coeff(mask), Rational::zero());
        }
        assert!(w.parseval_holds());
    }

    #[test]
    fn majority5_coefficients() {
        let w = FourierExpansion::from_function(&BooleanFunction::majority(5).unwrap());
        for mask in 0..32usize {
            let expected = match mask.count_ones() {
                1 => rat(3, 8),
                3 => rat(-1, 8),
                5 => rat(3, 8),
                _ => Rational::zero(),
            };
            assert_eq!(w.coeff(mask), expected, "mask {mask:#b}");
        }
        assert!(w.parseval_holds());
    }

    #[test]
    fn dictator_expansion() {
        let w = FourierExpansion::from_function(&BooleanFunction::dictator(2, 4).unwrap());
        assert_eq!(w.coeff(0b0010), Rational::one());
        assert_eq!(w.support().collect::<Vec<_>>(), vec![0b0010]);
    }

    #[test]
    fn counterexample_coefficients() {
        let f =
            BooleanFunction::from_ltf(&LtfSpec::new(vec![1, -3, 1, -1, 3]).unwrap()).unwrap();
        let w = FourierExpansion::from_function(&f);
        // singles
        assert_eq!(w.coeff(0b00001), rat(1, 4));
        assert_eq!(w.coeff(0b00010), rat(-1, 2));
        assert_eq!(w.coeff(0b00100), rat(1, 4));
        assert_eq!(w.coeff(0b01000), rat(-1, 4));
        assert_eq!(w.coeff(0b10000), rat(1, 2));
        // triples
        assert_eq!(w.coeff(0b01101), rat(1, 4)); // {1,3,4}
        assert_eq!(w.coeff(0b10011), rat(1, 4)); // {1,2,5}
        assert_eq!(w.coeff(0b10110), rat(1, 4)); // {2,3,5}
        assert_eq!(w.coeff(0b11010), rat(-1, 4)); // {2,4,5}
        assert_eq!(w.coeff(0b11111), rat(1, 4));
        // everything else vanishes
        assert_eq!(w.support().count(), 10);
        assert!(w.parseval_holds());
    }

    #[test]
    fn inverse_round_trips() {
        for f in [
            BooleanFunction::majority(5).unwrap(),
            BooleanFunction::parity(3).unwrap(),
            BooleanFunction::constant(2, -1).unwrap(),
        ] {
            let w = FourierExpansion::from_function(&f);
            assert_eq!(w.to_function().unwrap(), f);
        }
    }

    #[test]
    fn from_coeffs_builds_dictator() {
        let mut coeffs = vec![Rational::zero(); 8];
        coeffs[0b001] = Rational::one();
        let w = FourierExpansion::from_coeffs(3, &coeffs).unwrap();
        assert_eq!(w.to_function().unwrap(), BooleanFunction::dictator(1, 3).unwrap());
    }

    #[test]
    fn from_coeffs_rejects_non_dyadic() {
        let mut coeffs = vec![Rational::zero(); 4];
        coeffs[1] = rat(1, 3);
        let err = FourierExpansion::from_coeffs(2, &coeffs).unwrap_err();
        assert!(matches!(err, Error::NonDyadicCoefficient { mask: 1 }));
    }

    #[test]
    fn non_boolean_expansion_names_point() {
        // the zero expansion evaluates to 0 everywhere
        let coeffs = vec![Rational::zero(); 2];
        let w = FourierExpansion::from_coeffs(1, &coeffs).unwrap();
        let err = w.to_function().unwrap_err();
        assert!(matches!(err, Error::NotBoolean { point: 0, .. }));
        // halfway between two dictators
        let mut coeffs = vec![Rational::zero(); 4];
        coeffs[0b01] = rat(1, 2);
        coeffs[0b10] = rat(1, 2);
        let w = FourierExpansion::from_coeffs(2, &coeffs).unwrap();
        assert!(w.to_function().is_err());
    }

    #[test]
    fn extension_values() {
        let maj5 = FourierExpansion::from_function(&BooleanFunction::majority(5).unwrap());
        let z = vec![
            Rational::one(),
            Rational::one(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        assert_eq!(maj5.eval_extension(&z).unwrap(), rat(3, 4));
        // odd function at the origin
        let zeros = vec![Rational::zero(); 5];
        assert_eq!(maj5.eval_extension(&zeros).unwrap(), Rational::zero());
        // restriction to a +-1 point recovers the table value
        let point = vec![
            Rational::one(),
            -Rational::one(),
            Rational::one(),
            Rational::one(),
            -Rational::one(),
        ];
        // index with bits for x_2 and x_5: 0b10010
        let f = BooleanFunction::majority(5).unwrap();
        assert_eq!(
            maj5.eval_extension(&point).unwrap(),
            Rational::from_int(f.value(0b10010) as i64)
        );
        // fractional coordinates
        let half = vec![rat(1, 2); 5];
        // by level: 5*(3/8)(1/2) + 10*(-1/8)(1/8) + (3/8)(1/32) = 203/256
        assert_eq!(maj5.eval_extension(&half).unwrap(), rat(203, 256));
        assert!(maj5.eval_extension(&vec![rat(3, 2); 5]).is_err());
        assert!(maj5.eval_extension(&vec![Rational::zero(); 4]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let w = FourierExpansion::from_function(&BooleanFunction::majority(3).unwrap());
        let json = serde_json::to_string(&w).unwrap();
        let back: FourierExpansion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert!(json.contains(r#""n":3"#));
    }
}
