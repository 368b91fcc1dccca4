//! Table-driven arithmetic over the small fields GF(q), q = p^k <= 16.
//!
//! Elements are indexed by the integer value of their coefficient vector in
//! base p, the coefficient of highest degree being the most significant
//! digit. Index 0 is zero and index 1 is one. Prime power fields use a fixed
//! irreducible modulus so the indexing is the same on every run:
//!
//! | q  | modulus       |
//! |----|---------------|
//! | 4  | x^2 + x + 1   |
//! | 8  | x^3 + x + 1   |
//! | 9  | x^2 + 1       |
//! | 16 | x^4 + x + 1   |

use std::fmt;

use crate::error::{Error, Result};

/// An element of a [`Field`], identified by its table index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Elem(pub u8);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Monic irreducible moduli, constant term first.
const MODULI: [(u32, u32, &[u8]); 4] = [
    (4, 2, &[1, 1, 1]),
    (8, 2, &[1, 1, 0, 1]),
    (9, 3, &[1, 0, 1]),
    (16, 2, &[1, 1, 0, 0, 1]),
];

const PRIMES: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// The field GF(q) with its full operation tables.
#[derive(Clone, PartialEq, Eq)]
pub struct Field {
    q: u32,
    p: u32,
    k: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    frob: Vec<u8>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

/// Builds GF(q) for a supported prime power `q`.
pub fn make_field(q: u32) -> Result<Field> {
    Field::new(q)
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        if PRIMES.contains(&q) {
            return Ok(Self::from_polynomials(q, q, 1, &[0, 1]));
        }
        match MODULI.iter().find(|(order, _, _)| *order == q) {
            Some(&(order, p, modulus)) => {
                let k = modulus.len() as u32 - 1;
                Ok(Self::from_polynomials(order, p, k, modulus))
            }
            None => Err(Error::UnsupportedOrder(q)),
        }
    }

    /// Tables for GF(p)[x] / (modulus). For prime fields the modulus is `x`,
    /// which reduces everything to the constant term.
    fn from_polynomials(q: u32, p: u32, k: u32, modulus: &[u8]) -> Self {
        let qs = q as usize;
        let pk = p as usize;
        let kk = k as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            let mut out = vec![0; kk];
            for d in out.iter_mut() {
                *d = x % pk;
                x /= pk;
            }
            out
        };
        let undigits = |ds: &[usize]| -> u8 { ds.iter().rev().fold(0, |acc, &d| acc * pk + d) as u8 };

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        for a in 0..qs {
            let da = digits(a);
            for b in 0..qs {
                let db = digits(b);
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % pk).collect();
                add[a * qs + b] = undigits(&sum);

                let mut prod = vec![0usize; 2 * kk - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % pk;
                    }
                }
                for deg in (kk..prod.len()).rev() {
                    let c = prod[deg];
                    if c == 0 {
                        continue;
                    }
                    for (i, &m) in modulus.iter().enumerate() {
                        let slot = deg - kk + i;
                        prod[slot] = (prod[slot] + pk * pk - c * m as usize % pk) % pk;
                    }
                }
                mul[a * qs + b] = undigits(&prod[..kk]);
            }
        }

        let mut neg = vec![0u8; qs];
        let mut inv = vec![0u8; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as u8;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as u8;
                }
            }
        }

        let mut frob = vec![0u8; qs];
        for (a, slot) in frob.iter_mut().enumerate() {
            let mut acc = 1u8;
            for _ in 0..p {
                acc = mul[acc as usize * qs + a];
            }
            *slot = acc;
        }

        Field { q, p, k, add, mul, neg, inv, frob }
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        (0..self.q as u8).map(Elem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = Elem> + Clone {
        (1..self.q as u8).map(Elem)
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.q as usize + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.q as usize + b.index()])
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// Panics if `a` is zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "zero has no inverse");
        Elem(self.inv[a.index()])
    }

    #[inline]
    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// The Frobenius automorphism x -> x^p.
    #[inline]
    pub fn frobenius(&self, a: Elem) -> Elem {
        Elem(self.frob[a.index()])
    }

    /// Applies the Frobenius automorphism `times` times.
    pub fn frobenius_pow(&self, a: Elem, times: u32) -> Elem {
        (0..times % self.k).fold(a, |x, _| self.frobenius(x))
    }

    pub fn pow(&self, a: Elem, e: u32) -> Elem {
        (0..e).fold(Elem::ONE, |acc, _| self.mul(acc, a))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: Elem) -> u32 {
        assert!(!a.is_zero());
        let mut x = a;
        let mut ord = 1;
        while x != Elem::ONE {
            x = self.mul(x, a);
            ord += 1;
        }
        ord
    }

    /// The smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> Elem {
        self.nonzero()
            .find(|&a| self.multiplicative_order(a) == self.q - 1)
            .expect("finite fields have cyclic unit groups")
    }

    /// Field element for the integer `m` (its image under Z -> GF(p)).
    pub fn from_int(&self, m: i64) -> Elem {
        Elem(m.rem_euclid(self.p as i64) as u8)
    }

    pub fn add_table(&self) -> &[u8] {
        &self.add
    }

    pub fn mul_table(&self) -> &[u8] {
        &self.mul
    }

    pub fn inv_table(&self) -> &[u8] {
        &self.inv
    }

    pub fn frobenius_table(&self) -> &[u8] {
        &self.frob
    }
}
