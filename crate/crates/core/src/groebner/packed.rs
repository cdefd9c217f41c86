//! Exponent vectors packed one byte per variable, eight variables per word,
//! variable 0 in the most significant byte. Exponents stay below 128 so that
//! bytewise comparisons never borrow across bytes.

use std::cmp::Ordering;

use super::{CommMonomial, MonomialOrder};

pub const WORDS: usize = 16;
pub const MAX_VARS: usize = WORDS * 8;
pub const MAX_EXP: u32 = 127;

const H: u64 = 0x8080_8080_8080_8080;
const L: u64 = 0x7f7f_7f7f_7f7f_7f7f;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    deg: u32,
    e: [u64; WORDS],
}

fn shift(i: usize) -> u32 {
    (7 - (i % 8) as u32) * 8
}

/// High bit of each byte set where the byte is nonzero.
fn nonzero_bytes(x: u64) -> u64 {
    (((x & L) + L) | x) & H
}

impl Mono {
    pub fn one() -> Self {
        Mono { deg: 0, e: [0; WORDS] }
    }

    /// `None` when the monomial does not fit.
    pub fn pack(m: &CommMonomial) -> Option<Self> {
        if m.0.len() > MAX_VARS {
            return None;
        }
        let mut out = Mono::one();
        for (i, &x) in m.0.iter().enumerate() {
            if x > MAX_EXP {
                return None;
            }
            out.e[i / 8] |= (x as u64) << shift(i);
            out.deg += x;
        }
        Some(out)
    }

    pub fn unpack(&self, nvars: usize) -> CommMonomial {
        CommMonomial((0..nvars).map(|i| self.exp(i)).collect())
    }

    pub fn exp(&self, i: usize) -> u32 {
        ((self.e[i / 8] >> shift(i)) & 0xff) as u32
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    /// `None` on exponent overflow.
    pub fn mul(&self, o: &Self) -> Option<Self> {
        let mut r = Mono { deg: self.deg + o.deg, e: [0; WORDS] };
        let mut hi = 0;
        for k in 0..WORDS {
            r.e[k] = self.e[k] + o.e[k];
            hi |= r.e[k];
        }
        (hi & H == 0).then_some(r)
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.deg <= o.deg && (0..WORDS).all(|k| ((o.e[k] | H) - self.e[k]) & H == H)
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient(&self, o: &Self) -> Self {
        let mut r = Mono { deg: o.deg - self.deg, e: [0; WORDS] };
        for k in 0..WORDS {
            r.e[k] = o.e[k] - self.e[k];
        }
        r
    }

    pub fn lcm(&self, o: &Self) -> Self {
        let mut r = Mono::one();
        for k in 0..WORDS {
            let (a, b) = (self.e[k], o.e[k]);
            let ge = ((a | H) - b) & H;
            let sel = (ge >> 7) * 0xff;
            r.e[k] = (a & sel) | (b & !sel);
            r.deg += (0..8).map(|s| ((r.e[k] >> (8 * s)) & 0xff) as u32).sum::<u32>();
        }
        r
    }

    pub fn coprime(&self, o: &Self) -> bool {
        (0..WORDS).all(|k| nonzero_bytes(self.e[k]) & nonzero_bytes(o.e[k]) == 0)
    }

    /// Single variable of degree one.
    pub fn as_variable(&self) -> Option<usize> {
        if self.deg != 1 {
            return None;
        }
        let k = self.e.iter().position(|&w| w != 0)?;
        Some(k * 8 + (self.e[k].leading_zeros() / 8) as usize)
    }

    pub fn cmp_in(&self, o: &Self, order: MonomialOrder) -> Ordering {
        match order {
            MonomialOrder::Lex => self.e.cmp(&o.e),
            MonomialOrder::DegRevLex => self.deg.cmp(&o.deg).then_with(|| {
                for k in (0..WORDS).rev() {
                    let x = self.e[k] ^ o.e[k];
                    if x != 0 {
                        let s = (x.trailing_zeros() / 8) * 8;
                        let (a, b) = ((self.e[k] >> s) & 0xff, (o.e[k] >> s) & 0xff);
                        return b.cmp(&a);
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mono(n: usize) -> impl Strategy<Value = CommMonomial> {
        proptest::collection::vec(prop_oneof![Just(0u32), 0u32..=3, 0u32..=60], n).prop_map(CommMonomial)
    }

    fn pair() -> impl Strategy<Value = (CommMonomial, CommMonomial)> {
        (1usize..=70).prop_flat_map(|n| (mono(n), mono(n)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]
        #[test]
        fn agrees_with_exponent_vectors((a, b) in pair()) {
            let n = a.0.len();
            let (pa, pb) = (Mono::pack(&a).unwrap(), Mono::pack(&b).unwrap());
            prop_assert_eq!(pa.unpack(n), a.clone());
            prop_assert_eq!(pa.degree(), a.degree());
            prop_assert_eq!(pa.mul(&pb).unwrap().unpack(n), a.mul(&b));
            prop_assert_eq!(pa.divides(&pb), a.divides(&b));
            prop_assert_eq!(pa.lcm(&pb).unpack(n), a.lcm(&b));
            prop_assert_eq!(pa.lcm(&pb).degree(), a.lcm(&b).degree());
            prop_assert_eq!(pa.coprime(&pb), a.coprime(&b));
            prop_assert_eq!(pa.as_variable(), a.as_variable());
            let l = pa.lcm(&pb);
            prop_assert_eq!(pa.quotient(&l).unpack(n), a.quotient(&a.lcm(&b)));
            for order in [MonomialOrder::Lex, MonomialOrder::DegRevLex] {
                prop_assert_eq!(pa.cmp_in(&pb, order), order.cmp(&a, &b));
            }
        }
    }

    #[test]
    fn limits() {
        assert!(Mono::pack(&CommMonomial(vec![128])).is_none());
        assert!(Mono::pack(&CommMonomial(vec![0; MAX_VARS + 1])).is_none());
        let big = Mono::pack(&CommMonomial(vec![100, 1])).unwrap();
        assert!(big.mul(&big).is_none());
        assert_eq!(Mono::pack(&CommMonomial(vec![0, 0, 1])).unwrap().as_variable(), Some(2));
    }
}
