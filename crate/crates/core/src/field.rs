//! Exact arithmetic in GF(q), q = p^k ≤ 2^16.
//!
//! Elements are carried as compact indices. For a prime field the index is the
//! residue; for an extension field it is the coefficient vector of the
//! reduced polynomial written in base p, lowest coefficient first. Either way
//! index 0 is zero and index 1 is one.
//!
//! Prime fields use direct modular arithmetic. Extension fields add digit by
//! digit and multiply through discrete log/exp tables built once from a
//! primitive element.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// A field element, identified by its index in `0..q`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct FieldElement(u16);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn index(self) -> u32 {
        u32::from(self.0)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Field presentation: characteristic, degree and (for k > 1) a monic
/// irreducible modulus given low-to-high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn prime(p: u32) -> Self {
        FieldSpec { p, k: 1, modulus: None }
    }

    pub fn extension(p: u32, k: u32, modulus: Vec<u32>) -> Self {
        FieldSpec { p, k, modulus: Some(modulus) }
    }

    /// Built-in moduli for the small non-prime orders.
    pub fn default_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
        match (p, k) {
            (2, 2) => Some(vec![1, 1, 1]),    // x^2 + x + 1
            (2, 3) => Some(vec![1, 1, 0, 1]), // x^3 + x + 1
            (3, 2) => Some(vec![1, 0, 1]),    // x^2 + 1
            _ => None,
        }
    }

    /// Spec for a field of order `q`, using the built-in modulus when q is a
    /// proper prime power.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q).ok_or_else(|| {
            Error::InvalidFieldSpec(format!("{q} is not a prime power"))
        })?;
        if k == 1 {
            return Ok(FieldSpec::prime(p));
        }
        let modulus = FieldSpec::default_modulus(p, k).ok_or_else(|| {
            Error::InvalidFieldSpec(format!(
                "no built-in modulus for GF({p}^{k}); pass one explicitly"
            ))
        })?;
        Ok(FieldSpec::extension(p, k, modulus))
    }

    /// Parse the command-line form: `P`, `Q` (a prime power with a built-in
    /// modulus) or `P^K`, with an optional `c0,c1,...,ck` modulus.
    pub fn parse(order: &str, modulus: Option<&str>) -> Result<Self> {
        let bad = |what: &str| Error::InvalidFieldSpec(format!("cannot parse {what}"));
        let modulus = modulus
            .map(|s| {
                s.split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad(s)))
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        let spec = match order.split_once('^') {
            Some((p, k)) => {
                let p = p.trim().parse::<u32>().map_err(|_| bad(order))?;
                let k = k.trim().parse::<u32>().map_err(|_| bad(order))?;
                match (k, modulus) {
                    (1, None) => FieldSpec::prime(p),
                    (_, Some(m)) => FieldSpec::extension(p, k, m),
                    (_, None) => FieldSpec::default_modulus(p, k)
                        .map(|m| FieldSpec::extension(p, k, m))
                        .ok_or_else(|| {
                            Error::InvalidFieldSpec(format!("GF({p}^{k}) needs --modulus"))
                        })?,
                }
            }
            None => {
                let q = order.trim().parse::<u32>().map_err(|_| bad(order))?;
                match modulus {
                    None => FieldSpec::from_order(q)?,
                    Some(m) => {
                        let (p, k) = prime_power(q).ok_or_else(|| {
                            Error::InvalidFieldSpec(format!("{q} is not a prime power"))
                        })?;
                        FieldSpec::extension(p, k, m)
                    }
                }
            }
        };
        Ok(spec)
    }
}

#[derive(Debug, Clone)]
enum Arith {
    Prime,
    Extension { exp: Vec<u16>, log: Vec<u16> },
}

/// An immutable GF(q) handle.
#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    arith: Arith,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    pub fn new(spec: FieldSpec) -> Result<Self> {
        let FieldSpec { p, k, modulus } = spec;
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidFieldSpec("extension degree must be at least 1".into()));
        }
        let q = u64::from(p)
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge(u64::from(p).saturating_pow(k)))?;
        // Degree k = 1 is GF(p) whatever modulus was passed.
        if k == 1 {
            return Ok(FiniteField {
                p,
                k,
                q: q as u32,
                modulus: vec![0, 1],
                arith: Arith::Prime,
            });
        }
        let modulus = modulus.ok_or_else(|| {
            Error::InvalidFieldSpec(format!("GF({p}^{k}) requires a modulus"))
        })?;
        if modulus.len() != k as usize + 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidFieldSpec(format!(
                "modulus must have {} coefficients in [0,{p})",
                k + 1
            )));
        }
        if modulus[k as usize] != 1 {
            return Err(Error::InvalidFieldSpec("modulus is not monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::ReducibleModulus(modulus, p));
        }
        let mut field = FiniteField {
            p,
            k,
            q: q as u32,
            modulus,
            arith: Arith::Prime,
        };
        field.arith = field.build_log_tables();
        Ok(field)
    }

    pub fn prime(p: u32) -> Result<Self> {
        FiniteField::new(FieldSpec::prime(p))
    }

    pub fn from_order(q: u32) -> Result<Self> {
        FiniteField::new(FieldSpec::from_order(q)?)
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn spec(&self) -> FieldSpec {
        if self.k == 1 {
            FieldSpec::prime(self.p)
        } else {
            FieldSpec::extension(self.p, self.k, self.modulus.clone())
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    pub fn element(&self, index: u32) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u16))
        } else {
            Err(Error::ElementOutOfRange { index, q: self.q })
        }
    }

    /// All q elements in index order; zero first, one second.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| FieldElement(i as u16))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime => FieldElement(((a.index() + b.index()) % self.p) as u16),
            Arith::Extension { .. } if self.p == 2 => FieldElement(a.0 ^ b.0),
            Arith::Extension { .. } => self.digitwise(a, b, |x, y| (x + y) % self.p),
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime => FieldElement(((self.p - a.index()) % self.p) as u16),
            Arith::Extension { .. } if self.p == 2 => a,
            Arith::Extension { .. } => self.digitwise(a, a, |x, _| (self.p - x) % self.p),
        }
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match self.arith {
            Arith::Prime => FieldElement(((a.index() + self.p - b.index()) % self.p) as u16),
            Arith::Extension { .. } if self.p == 2 => FieldElement(a.0 ^ b.0),
            Arith::Extension { .. } => self.digitwise(a, b, |x, y| (x + self.p - y) % self.p),
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.arith {
            Arith::Prime => FieldElement(((a.index() * b.index()) % self.p) as u16),
            Arith::Extension { exp, log } => {
                if a.is_zero() || b.is_zero() {
                    return FieldElement::ZERO;
                }
                let e = (usize::from(log[a.0 as usize]) + usize::from(log[b.0 as usize]))
                    % (self.q as usize - 1);
                FieldElement(exp[e])
            }
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.arith {
            Arith::Prime => self.pow(a, self.p - 2),
            Arith::Extension { exp, log } => {
                let order = self.q as usize - 1;
                FieldElement(exp[(order - usize::from(log[a.0 as usize])) % order])
            }
        })
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u32) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Uniform element drawn from `rng`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.random_range(0..self.q) as u16)
    }

    /// Uniform nonzero element drawn from `rng`.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.random_range(1..self.q) as u16)
    }

    /// Deterministic element for a seed.
    pub fn seeded_element(&self, seed: u64) -> FieldElement {
        self.random_element(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = vec![0; self.k as usize];
        for slot in d.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn digitwise(&self, a: FieldElement, b: FieldElement, op: impl Fn(u32, u32) -> u32) -> FieldElement {
        let (mut x, mut y) = (a.index(), b.index());
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.k {
            out += op(x % self.p, y % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        FieldElement(out as u16)
    }

    /// Product of two reduced polynomials, reduced mod the modulus.
    fn poly_mul_mod(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let k = self.k as usize;
        let p = u64::from(self.p);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        // x^k = -(m_0 + ... + m_{k-1} x^{k-1})
        for deg in (k..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (t, &m) in self.modulus[..k].iter().enumerate() {
                let idx = deg - k + t;
                prod[idx] = (prod[idx] + (p - c) * u64::from(m)) % p;
            }
        }
        prod.truncate(k);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn build_log_tables(&self) -> Arith {
        let q = self.q as usize;
        let one = self.digits(1);
        for g in 2..self.q {
            let gd = self.digits(g);
            let mut exp = Vec::with_capacity(q - 1);
            let mut cur = one.clone();
            loop {
                exp.push(self.undigits(&cur) as u16);
                cur = self.poly_mul_mod(&cur, &gd);
                if cur == one {
                    break;
                }
            }
            if exp.len() == q - 1 {
                let mut log = vec![0u16; q];
                for (e, &x) in exp.iter().enumerate() {
                    log[x as usize] = e as u16;
                }
                return Arith::Extension { exp, log };
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `(p, k)` with `q = p^k`, if q is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Brute-force factor search: no monic polynomial of degree 1..=k/2 divides.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    for d in 1..=k / 2 {
        let count = u64::from(p).pow(d as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                f.push((c % u64::from(p)) as u32);
                c /= u64::from(p);
            }
            f.push(1);
            if poly_rem_is_zero(modulus, &f, p) {
                return false;
            }
        }
    }
    true
}

/// Whether monic `divisor` divides `dividend` over GF(p).
fn poly_rem_is_zero(dividend: &[u32], divisor: &[u32], p: u32) -> bool {
    let mut r: Vec<u64> = dividend.iter().map(|&c| u64::from(c)).collect();
    let d = divisor.len() - 1;
    let p = u64::from(p);
    for deg in (d..r.len()).rev() {
        let c = r[deg] % p;
        if c == 0 {
            continue;
        }
        for (t, &m) in divisor.iter().enumerate() {
            let idx = deg - d + t;
            r[idx] = (r[idx] + (p - c) * u64::from(m)) % p;
        }
    }
    r[..d].iter().all(|&c| c % p == 0)
}
