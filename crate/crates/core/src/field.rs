//! Exact arithmetic in Z_p for an odd prime p, plus binomial coefficients.
//!
//! Binomials mod p are computed by Pascal's rule with reduction at every
//! step, so no factorial ever leaves the machine word. `binom_nat` gives the
//! exact natural-number value (u128) for use as an independent oracle.

use crate::error::{Error, Result};

/// A validated odd prime >= 3.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime> {
        if p < 3 || p % 2 == 0 || !is_prime(p) {
            return Err(Error::NotAnOddPrime(p));
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

impl std::fmt::Display for Prime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A residue in Z_p carrying its modulus. Mixed-modulus arithmetic is an error.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FieldElt {
    value: u64,
    modulus: u64,
}

impl FieldElt {
    pub fn new(value: i64, p: Prime) -> FieldElt {
        FieldElt {
            value: value.rem_euclid(p.get() as i64) as u64,
            modulus: p.get(),
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    fn check(self, rhs: FieldElt) -> Result<()> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.modulus, rhs.modulus))
        }
    }

    pub fn try_add(self, rhs: FieldElt) -> Result<FieldElt> {
        self.check(rhs)?;
        Ok(FieldElt {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn try_sub(self, rhs: FieldElt) -> Result<FieldElt> {
        self.check(rhs)?;
        Ok(FieldElt {
            value: (self.modulus + self.value - rhs.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn try_mul(self, rhs: FieldElt) -> Result<FieldElt> {
        self.check(rhs)?;
        Ok(FieldElt {
            value: (self.value * rhs.value) % self.modulus,
            modulus: self.modulus,
        })
    }

    pub fn neg(self) -> FieldElt {
        FieldElt {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Add for FieldElt {
    type Output = FieldElt;
    fn add(self, rhs: FieldElt) -> FieldElt {
        self.try_add(rhs).expect("modulus mismatch")
    }
}

impl std::ops::Sub for FieldElt {
    type Output = FieldElt;
    fn sub(self, rhs: FieldElt) -> FieldElt {
        self.try_sub(rhs).expect("modulus mismatch")
    }
}

impl std::ops::Mul for FieldElt {
    type Output = FieldElt;
    fn mul(self, rhs: FieldElt) -> FieldElt {
        self.try_mul(rhs).expect("modulus mismatch")
    }
}

impl std::ops::Neg for FieldElt {
    type Output = FieldElt;
    fn neg(self) -> FieldElt {
        FieldElt::neg(self)
    }
}

/// C(n, k) mod p by Pascal's rule; 0 when k > n.
pub fn binom_mod_p(n: u64, k: u64, p: Prime) -> FieldElt {
    let m = p.get();
    if k > n {
        return FieldElt { value: 0, modulus: m };
    }
    // Row-by-row update of C(row, 0..=k), reduced mod p at every step.
    let k = k as usize;
    let mut row = vec![0u64; k + 1];
    row[0] = 1;
    for _ in 1..=n {
        for col in (1..=k).rev() {
            row[col] = (row[col] + row[col - 1]) % m;
        }
    }
    FieldElt { value: row[k], modulus: m }
}

/// Exact C(n, k) over the naturals. None on u128 overflow.
pub fn binom_nat(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc.checked_mul((n - t) as u128)?;
        acc /= (t + 1) as u128; // exact: prefix products of falling factorials divide evenly
    }
    Some(acc)
}

/// True iff C(r+s, k) = sum_i C(r, i) C(s, k-i) holds mod p (it always does;
/// this is a self-test oracle for the binomial routines).
pub fn vandermonde_check(r: u64, s: u64, k: u64, p: Prime) -> bool {
    let lhs = binom_mod_p(r + s, k, p);
    let mut rhs = FieldElt::new(0, p);
    for i in 0..=k {
        rhs = rhs + binom_mod_p(r, i, p) * binom_mod_p(s, k - i, p);
    }
    lhs == rhs
}

/// Dense table of C(n, k) mod p for 0 <= n, k <= max. Backs the hot paths so
/// the sweeps never recompute a Pascal row per call.
#[derive(Debug)]
pub struct BinomTable {
    modulus: u64,
    max: usize,
    data: Vec<u64>,
}

impl BinomTable {
    pub fn new(p: Prime, max: usize) -> BinomTable {
        let m = p.get();
        let w = max + 1;
        let mut data = vec![0u64; w * w];
        for n in 0..=max {
            data[n * w] = 1;
            for k in 1..=n {
                data[n * w + k] = (data[(n - 1) * w + k - 1] + data[(n - 1) * w + k]) % m;
            }
        }
        BinomTable { modulus: m, max, data }
    }

    pub fn get(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let (n, k) = (n as usize, k as usize);
        assert!(n <= self.max, "binomial table too small: C({n}, {k})");
        self.data[n * (self.max + 1) + k]
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn prime_validation() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(5).is_ok());
        assert!(Prime::new(7).is_ok());
        assert!(Prime::new(2).is_err());
        assert!(Prime::new(4).is_err());
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
        assert!(Prime::new(0).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let p3 = p(3);
        let two = FieldElt::new(2, p3);
        assert_eq!((two + two).value(), 1);
        assert_eq!(FieldElt::new(-1, p3).value(), 2);
        assert_eq!((-FieldElt::new(1, p3)).value(), 2);
        let p5 = p(5);
        for x in 0..5 {
            assert!((FieldElt::new(0, p5) * FieldElt::new(x, p5)).is_zero());
        }
        assert!(FieldElt::new(1, p3).try_add(FieldElt::new(1, p5)).is_err());
    }

    #[test]
    fn binom_examples() {
        assert_eq!(binom_mod_p(2, 1, p(3)).value(), 2);
        assert_eq!(binom_mod_p(4, 2, p(3)).value(), 0); // 6 = 0 mod 3
        assert_eq!(binom_mod_p(17, 0, p(5)).value(), 1);
        assert_eq!(binom_mod_p(3, 7, p(5)).value(), 0);
        assert_eq!(binom_nat(60, 30), Some(118264581564861424));
        assert_eq!(binom_nat(12, 5), Some(792));
    }

    #[test]
    fn binom_matches_exact_oracle_up_to_60() {
        for &q in &[3u64, 5, 7] {
            let q = p(q);
            for n in 0..=60u64 {
                for k in 0..=n {
                    let exact = binom_nat(n, k).unwrap() % q.get() as u128;
                    assert_eq!(binom_mod_p(n, k, q).value() as u128, exact, "C({n},{k}) mod {q}");
                }
            }
        }
    }

    #[test]
    fn binom_table_matches_scalar_routine() {
        for &q in &[3u64, 5, 7] {
            let q = p(q);
            let t = BinomTable::new(q, 40);
            for n in 0..=40u64 {
                for k in 0..=42u64 {
                    assert_eq!(t.get(n, k.min(41)), binom_mod_p(n, k.min(41), q).value());
                }
            }
        }
    }

    #[test]
    fn vandermonde_sweep() {
        for &q in &[3u64, 5, 7] {
            let q = p(q);
            for r in 0..=30u64 {
                for s in 0..=(30 - r) {
                    for k in 0..=(r + s) {
                        assert!(vandermonde_check(r, s, k, q), "({r},{s},{k}) mod {q}");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn pascal_recurrence(n in 1u64..60, k in 1u64..60, q in prop::sample::select(vec![3u64, 5, 7])) {
            let q = p(q);
            let lhs = binom_mod_p(n, k, q);
            let rhs = binom_mod_p(n - 1, k - 1, q) + binom_mod_p(n - 1, k, q);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn add_mul_commute_with_lift(a in 0i64..100, b in 0i64..100, q in prop::sample::select(vec![3u64, 5, 7])) {
            let q = p(q);
            let (x, y) = (FieldElt::new(a, q), FieldElt::new(b, q));
            prop_assert_eq!((x + y).value() as i64, (a + b) % q.get() as i64);
            prop_assert_eq!((x * y).value() as i64, (a * b) % q.get() as i64);
        }
    }
}
