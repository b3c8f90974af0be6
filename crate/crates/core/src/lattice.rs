//! The poset `Λ = {0,1}^m`, vectors in `R^Λ`, the parity vectors `ℓ_i` with
//! their derived bases, and the action of the symmetric group.
//!
//! Elements are stored as bitmasks with position 1 as the most significant
//! bit, so the linear index of `λ` is `Σ λ(i)·2^(m-i)` and the natural order
//! of indices is the lexicographic order of the bit strings `00..0 … 11..1`.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{half, Rational};

/// Largest supported number of assets (vectors have `2^MAX_M` entries).
pub const MAX_M: usize = 16;

/// `1 ≤ m ≤ MAX_M`.
pub fn check_m(m: usize) -> Result<()> {
    if m == 0 || m > MAX_M {
        Err(Error::UnsupportedDimension(m))
    } else {
        Ok(())
    }
}

fn check_index(i: usize, m: usize) -> Result<()> {
    if i > m {
        Err(Error::IndexOutOfRange { index: i, max: m })
    } else {
        Ok(())
    }
}

/// An element `λ ∈ Λ`, i.e. a function `{1..m} → {0,1}`.
///
/// `λ(i) = 1` encodes a down move of asset `i`, `λ(i) = 0` an up move.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeElement {
    bits: u32,
    m: u8,
}

impl LatticeElement {
    pub fn from_index(m: usize, index: usize) -> Result<Self> {
        check_m(m)?;
        if index >= 1usize << m {
            return Err(Error::IndexOutOfRange {
                index,
                max: (1usize << m) - 1,
            });
        }
        Ok(Self {
            bits: index as u32,
            m: m as u8,
        })
    }

    /// Parses a bit string `"0101"`, position 1 first.
    pub fn parse(s: &str) -> Result<Self> {
        let m = s.len();
        check_m(m)?;
        let mut bits = 0u32;
        for c in s.chars() {
            bits <<= 1;
            match c {
                '0' => {}
                '1' => bits |= 1,
                _ => return Err(Error::InvalidPolicy(format!("bad lattice element {s:?}"))),
            }
        }
        Ok(Self { bits, m: m as u8 })
    }

    /// Builds `λ` from its values `λ(1), …, λ(m)`.
    pub fn from_values(values: &[u8]) -> Result<Self> {
        check_m(values.len())?;
        let bits = values.iter().fold(0u32, |acc, &v| (acc << 1) | u32::from(v != 0));
        Ok(Self {
            bits,
            m: values.len() as u8,
        })
    }

    pub fn zero(m: usize) -> Result<Self> {
        Self::from_index(m, 0)
    }

    pub fn ones(m: usize) -> Result<Self> {
        check_m(m)?;
        Self::from_index(m, (1usize << m) - 1)
    }

    /// All `2^m` elements in index order.
    pub fn all(m: usize) -> impl Iterator<Item = LatticeElement> {
        let m8 = m as u8;
        (0..(1u32 << m)).map(move |bits| LatticeElement { bits, m: m8 })
    }

    pub fn m(&self) -> usize {
        self.m as usize
    }

    pub fn index(&self) -> usize {
        self.bits as usize
    }

    fn mask(&self, i: usize) -> u32 {
        1u32 << (self.m() - i)
    }

    /// `λ(i)` for `0 ≤ i ≤ m+1`, with `λ(0) = 0` and `λ(m+1) = 1`.
    pub fn get(&self, i: usize) -> u8 {
        let m = self.m();
        match i {
            0 => 0,
            i if i == m + 1 => 1,
            i if i <= m => u8::from(self.bits & self.mask(i) != 0),
            _ => panic!("lattice position {i} out of range for m={m}"),
        }
    }

    pub fn with(&self, i: usize, value: u8) -> Self {
        assert!((1..=self.m()).contains(&i), "position {i} out of range");
        let mask = self.mask(i);
        let bits = if value != 0 {
            self.bits | mask
        } else {
            self.bits & !mask
        };
        Self { bits, m: self.m }
    }

    /// `self ⪯ other`, i.e. `supp(self) ⊆ supp(other)`.
    pub fn precedes(&self, other: &Self) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones() as usize
    }
}

impl fmt::Display for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m() {
            write!(f, "{}", self.get(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LatticeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "λ{self}")
    }
}

/// A dense vector in `R^Λ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeVector {
    m: usize,
    entries: Vec<Rational>,
}

impl LatticeVector {
    pub fn new(m: usize, entries: Vec<Rational>) -> Result<Self> {
        check_m(m)?;
        if entries.len() != 1usize << m {
            return Err(Error::DimensionMismatch {
                expected: 1usize << m,
                found: entries.len(),
            });
        }
        Ok(Self { m, entries })
    }

    /// Infers `m` from the number of entries, which must be a power of two.
    pub fn from_entries(entries: Vec<Rational>) -> Result<Self> {
        let len = entries.len();
        if !len.is_power_of_two() || len < 2 {
            return Err(Error::DimensionMismatch {
                expected: len.next_power_of_two().max(2),
                found: len,
            });
        }
        Self::new(len.trailing_zeros() as usize, entries)
    }

    pub fn zeros(m: usize) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            entries: vec![Rational::zero(); 1 << m],
        })
    }

    pub fn constant(m: usize, value: Rational) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            entries: vec![value; 1 << m],
        })
    }

    /// The standard basis vector `e_λ`.
    pub fn basis(lambda: LatticeElement) -> Self {
        let mut v = Self::zeros(lambda.m()).expect("valid element");
        v.entries[lambda.index()] = Rational::one();
        v
    }

    pub fn from_fn(m: usize, f: impl Fn(LatticeElement) -> Rational) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            entries: LatticeElement::all(m).map(f).collect(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn get(&self, lambda: LatticeElement) -> &Rational {
        &self.entries[lambda.index()]
    }

    pub fn set(&mut self, lambda: LatticeElement, value: Rational) {
        self.entries[lambda.index()] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = (LatticeElement, &Rational)> {
        LatticeElement::all(self.m).zip(self.entries.iter())
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            });
        }
        Ok(())
    }

    /// `⟨x, y⟩ = Σ_λ x(λ)y(λ)`.
    pub fn dot(&self, other: &Self) -> Result<Rational> {
        self.check_same(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            m: self.m,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn support(&self) -> Vec<LatticeElement> {
        self.iter()
            .filter(|(_, x)| !x.is_zero())
            .map(|(l, _)| l)
            .collect()
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|x| !x.is_negative())
    }

    /// Nonnegative entries summing to one.
    pub fn is_density(&self) -> bool {
        self.is_nonnegative() && self.sum().is_one()
    }
}

impl Index<LatticeElement> for LatticeVector {
    type Output = Rational;

    fn index(&self, lambda: LatticeElement) -> &Rational {
        self.get(lambda)
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;

    fn add(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        LatticeVector {
            m: self.m,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;

    fn sub(self, rhs: &LatticeVector) -> LatticeVector {
        assert_eq!(self.m, rhs.m, "dimension mismatch");
        LatticeVector {
            m: self.m,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&LatticeVector> for &Rational {
    type Output = LatticeVector;

    fn mul(self, rhs: &LatticeVector) -> LatticeVector {
        rhs.scale(self)
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.iter().map(|(l, x)| (l.to_string(), x.to_string())))
            .finish()
    }
}

/// `ℓ_i(λ) = (-1)^λ(i)`; `ℓ_0` is the constant one vector.
pub fn ell(i: usize, m: usize) -> Result<LatticeVector> {
    check_m(m)?;
    check_index(i, m)?;
    LatticeVector::from_fn(m, |l| {
        if l.get(i) == 0 {
            Rational::one()
        } else {
            -Rational::one()
        }
    })
}

/// `ℓ'_i = (ℓ_i - ℓ_{i+1})/2` for `i < m` and `ℓ'_m = (ℓ_0 + ℓ_m)/2`.
pub fn ell_prime(i: usize, m: usize) -> Result<LatticeVector> {
    check_m(m)?;
    check_index(i, m)?;
    let combo = if i < m {
        &ell(i, m)? - &ell(i + 1, m)?
    } else {
        &ell(0, m)? + &ell(m, m)?
    };
    Ok(combo.scale(&half()))
}

/// `ℓ''_0 = ℓ_0` and `ℓ''_i = (ℓ_i + ℓ_0)/2`; equivalently `ℓ''_i(λ) = 1 - λ(i)`.
pub fn ell_dprime(i: usize, m: usize) -> Result<LatticeVector> {
    check_m(m)?;
    check_index(i, m)?;
    if i == 0 {
        return ell(0, m);
    }
    Ok((&ell(i, m)? + &ell(0, m)?).scale(&half()))
}

/// The column `c_λ(i) = ℓ'_i(λ) = λ(i+1) - λ(i)`, `0 ≤ i ≤ m`.
pub fn c_vector(lambda: LatticeElement) -> Vec<i8> {
    (0..=lambda.m())
        .map(|i| lambda.get(i + 1) as i8 - lambda.get(i) as i8)
        .collect()
}

/// `μ_i`: zeros in positions `1..=i`, ones in positions `i+1..=m`.
pub fn mu(i: usize, m: usize) -> Result<LatticeElement> {
    check_m(m)?;
    check_index(i, m)?;
    LatticeElement::from_index(m, (1usize << (m - i)) - 1)
}

/// `ν_i(j) = 1 - δ_ij`: `ν_0` is all ones, `ν_i` has a single zero at `i`.
pub fn nu(i: usize, m: usize) -> Result<LatticeElement> {
    check_m(m)?;
    check_index(i, m)?;
    let ones = LatticeElement::ones(m)?;
    Ok(if i == 0 { ones } else { ones.with(i, 0) })
}

/// A permutation `σ` of `{1..m}`, stored by its images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// `images[k-1] = σ(k)`; images are 1-based.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m + 1];
        for &v in &images {
            if v == 0 || v > m || seen[v] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(m: usize) -> Self {
        Self {
            images: (1..=m).collect(),
        }
    }

    pub fn transposition(m: usize, i: usize, j: usize) -> Result<Self> {
        let mut images: Vec<usize> = (1..=m).collect();
        if i == 0 || j == 0 || i > m || j > m {
            return Err(Error::InvalidPermutation(format!("({i} {j}) in S_{m}")));
        }
        images.swap(i - 1, j - 1);
        Ok(Self { images })
    }

    pub fn m(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// `σ(i)`, with `σ(0) = 0`.
    pub fn apply(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else {
            self.images[i - 1]
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.m()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        Self { images }
    }

    /// A permutation `σ` with `σ_*(b)` decreasing. Ties keep ascending index
    /// order.
    pub fn sorting_decreasing(b: &[Rational]) -> Self {
        let order = decreasing_order(b);
        let mut images = vec![0; b.len()];
        for (rank, &i) in order.iter().enumerate() {
            images[i - 1] = rank + 1;
        }
        Self { images }
    }
}

/// Indices `i_1, …, i_m` (1-based) with `b(i_1) ≥ … ≥ b(i_m)`; ties broken
/// by ascending index.
pub fn decreasing_order(b: &[Rational]) -> Vec<usize> {
    let mut order: Vec<usize> = (1..=b.len()).collect();
    order.sort_by(|&i, &j| b[j - 1].cmp(&b[i - 1]).then(i.cmp(&j)));
    order
}

fn check_perm(sigma: &Permutation, m: usize) -> Result<()> {
    if sigma.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: sigma.m(),
        });
    }
    Ok(())
}

/// `σ_*(λ) = λ ∘ σ^{-1}`: the value at position `i` moves to `σ(i)`.
pub fn permute_lattice(sigma: &Permutation, lambda: LatticeElement) -> Result<LatticeElement> {
    let m = lambda.m();
    check_perm(sigma, m)?;
    let mut out = LatticeElement::zero(m)?;
    for i in 1..=m {
        if lambda.get(i) == 1 {
            out = out.with(sigma.apply(i), 1);
        }
    }
    Ok(out)
}

/// `σ_*(x)(λ) = x(λ ∘ σ)`, i.e. `σ_*(x)(σ_*(λ)) = x(λ)`.
pub fn permute_vector(sigma: &Permutation, x: &LatticeVector) -> Result<LatticeVector> {
    check_perm(sigma, x.m())?;
    let mut out = LatticeVector::zeros(x.m())?;
    for (lambda, value) in x.iter() {
        out.set(permute_lattice(sigma, lambda)?, value.clone());
    }
    Ok(out)
}

/// `σ_*(b) = b ∘ σ^{-1}` for `b ∈ R^m`.
pub fn permute_params(sigma: &Permutation, b: &[Rational]) -> Result<Vec<Rational>> {
    check_perm(sigma, b.len())?;
    let mut out = vec![Rational::zero(); b.len()];
    for (k, value) in b.iter().enumerate() {
        out[sigma.apply(k + 1) - 1] = value.clone();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn ints(v: &LatticeVector) -> Vec<i64> {
        v.entries()
            .iter()
            .map(|x| {
                assert!(x.is_integer());
                x.to_integer().try_into().unwrap()
            })
            .collect()
    }

    #[test]
    fn index_is_big_endian() {
        let l = LatticeElement::parse("0101").unwrap();
        assert_eq!(l.index(), 5);
        assert_eq!((l.get(1), l.get(2), l.get(3), l.get(4)), (0, 1, 0, 1));
        assert_eq!((l.get(0), l.get(5)), (0, 1));
        assert_eq!(l.to_string(), "0101");
        assert_eq!(LatticeElement::from_values(&[0, 1, 0, 1]).unwrap(), l);
    }

    #[test]
    fn ell_examples() {
        assert_eq!(ints(&ell(0, 2).unwrap()), vec![1, 1, 1, 1]);
        let mut row = vec![1; 8];
        row.extend(vec![-1; 8]);
        assert_eq!(ints(&ell(1, 4).unwrap()), row);
        assert!(matches!(ell(3, 2), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn ell_prime_examples() {
        let mut row = vec![0; 8];
        row.extend(vec![1; 8]);
        assert_eq!(ints(&ell_prime(0, 4).unwrap()), row);
        let zero = LatticeElement::zero(4).unwrap();
        assert_eq!(ell_prime(4, 4).unwrap()[zero], int(1));
        assert!(ell_prime(5, 4).is_err());
    }

    #[test]
    fn ell_dprime_examples() {
        assert_eq!(ell_dprime(0, 3).unwrap(), ell(0, 3).unwrap());
        let l = LatticeElement::parse("11").unwrap();
        assert_eq!(ell_dprime(2, 2).unwrap()[l], int(0));
        assert!(ell_dprime(3, 2).is_err());
    }

    #[test]
    fn c_vector_examples() {
        assert_eq!(c_vector(LatticeElement::parse("0101").unwrap()), vec![0, 1, -1, 1, 0]);
        assert_eq!(c_vector(LatticeElement::ones(3).unwrap()), vec![1, 0, 0, 0]);
        for i in 0..=4 {
            let mut e = vec![0i8; 5];
            e[i] = 1;
            assert_eq!(c_vector(mu(i, 4).unwrap()), e);
        }
    }

    #[test]
    fn mu_nu_examples() {
        assert_eq!(mu(0, 4).unwrap().to_string(), "1111");
        assert_eq!(mu(4, 4).unwrap().to_string(), "0000");
        assert_eq!(mu(2, 4).unwrap().to_string(), "0011");
        assert_eq!(mu(1, 1).unwrap().to_string(), "0");
        assert_eq!(nu(0, 3).unwrap().to_string(), "111");
        assert_eq!(nu(2, 3).unwrap().to_string(), "101");
        assert_eq!(nu(1, 1).unwrap().to_string(), "0");
        assert!(mu(5, 4).is_err());
    }

    #[test]
    fn mu_chain_is_decreasing() {
        for i in 0..4 {
            let a = mu(i, 4).unwrap();
            let b = mu(i + 1, 4).unwrap();
            assert!(b.precedes(&a) && a != b);
        }
    }

    #[test]
    fn permutation_examples() {
        let swap = Permutation::transposition(2, 1, 2).unwrap();
        let l = LatticeElement::parse("10").unwrap();
        assert_eq!(permute_lattice(&swap, l).unwrap().to_string(), "01");
        let x = LatticeVector::from_fn(3, |l| int(l.index() as i64)).unwrap();
        assert_eq!(permute_vector(&Permutation::identity(3), &x).unwrap(), x);
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(permute_vector(&swap, &x).is_err());
    }

    #[test]
    fn sorting_permutation_sorts() {
        let b = vec![int(0), int(3), int(-1), int(3)];
        let sigma = Permutation::sorting_decreasing(&b);
        let sorted = permute_params(&sigma, &b).unwrap();
        assert_eq!(sorted, vec![int(3), int(3), int(0), int(-1)]);
        assert_eq!(decreasing_order(&b), vec![2, 4, 1, 3]);
    }

    #[test]
    fn rejects_oversized_m() {
        assert!(matches!(ell(0, 17), Err(Error::UnsupportedDimension(17))));
        assert!(LatticeVector::zeros(0).is_err());
    }
}
