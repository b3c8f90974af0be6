//! ℓ-positive vectors `u = Σ a_i ℓ_i` with `a_1, …, a_m > 0`, their
//! truncations, and the coordinate changes between the `ℓ`, `ℓ'` and `ℓ''`
//! bases of `U = span{ℓ_0, …, ℓ_m}`.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{check_m, ell, LatticeElement, LatticeVector};
use crate::rational::{half, int, positive_part, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    Ell,
    EllPrime,
    EllDprime,
}

/// Coordinates of a vector of `U` in one of the three bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllCoefficients {
    basis: Basis,
    coeffs: Vec<Rational>,
}

impl EllCoefficients {
    /// `coeffs` has `m+1` entries.
    pub fn new(basis: Basis, coeffs: Vec<Rational>) -> Result<Self> {
        check_m(coeffs.len().saturating_sub(1))?;
        Ok(Self { basis, coeffs })
    }

    pub fn m(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn to_ell_coeffs(&self) -> Vec<Rational> {
        let a = &self.coeffs;
        let m = self.m();
        match self.basis {
            Basis::Ell => a.clone(),
            // a_0 = (α_0 + α_m)/2, a_i = (α_i - α_{i-1})/2.
            Basis::EllPrime => std::iter::once((&a[0] + &a[m]) * half())
                .chain((1..=m).map(|i| (&a[i] - &a[i - 1]) * half()))
                .collect(),
            // a_i = α_i/2, a_0 = α_0 + Σ_{i≥1} α_i/2.
            Basis::EllDprime => {
                let rest: Vec<Rational> = a[1..].iter().map(|x| x * half()).collect();
                let a0 = &a[0] + rest.iter().sum::<Rational>();
                std::iter::once(a0).chain(rest).collect()
            }
        }
    }

    fn from_ell_coeffs(basis: Basis, a: Vec<Rational>) -> Self {
        let m = a.len() - 1;
        let coeffs = match basis {
            Basis::Ell => a,
            // α_i = Σ_{k≤i} a_k - Σ_{k>i} a_k.
            Basis::EllPrime => {
                let total: Rational = a.iter().sum();
                let mut prefix = Rational::zero();
                (0..=m)
                    .map(|i| {
                        prefix += &a[i];
                        &prefix - (&total - &prefix)
                    })
                    .collect()
            }
            // α_i = 2a_i, α_0 = a_0 - Σ_{i≥1} a_i.
            Basis::EllDprime => {
                let rest_sum: Rational = a[1..].iter().sum();
                std::iter::once(&a[0] - rest_sum)
                    .chain(a[1..].iter().map(|x| x * int(2)))
                    .collect()
            }
        };
        Self { basis, coeffs }
    }

    pub fn to_basis(&self, basis: Basis) -> Self {
        if basis == self.basis {
            return self.clone();
        }
        Self::from_ell_coeffs(basis, self.to_ell_coeffs())
    }

    /// The represented vector in `R^Λ`.
    pub fn to_vector(&self) -> LatticeVector {
        let m = self.m();
        let a = self.to_ell_coeffs();
        LatticeVector::from_fn(m, |lambda| {
            (0..=m)
                .map(|i| if lambda.get(i) == 0 { a[i].clone() } else { -a[i].clone() })
                .sum()
        })
        .expect("m validated at construction")
    }

    /// `a_1, …, a_m > 0` in the `ℓ` basis.
    pub fn is_ell_positive(&self) -> bool {
        self.to_ell_coeffs()[1..].iter().all(Signed::is_positive)
    }

    /// `a_1, …, a_m ≥ 0` in the `ℓ` basis.
    pub fn is_weakly_ell_positive(&self) -> bool {
        !self.to_ell_coeffs()[1..].iter().any(Signed::is_negative)
    }
}

/// Outcome of classifying a raw vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EllPositivity {
    /// In `U` with every `a_i > 0` for `i ≥ 1`.
    Positive(EllCoefficients),
    /// In `U`, no negative `a_i`, but some `a_i = 0` for `i ≥ 1`.
    Borderline(EllCoefficients),
    /// In `U` with some `a_i < 0` for `i ≥ 1`.
    NotPositive(EllCoefficients),
    /// Not in the span of `ℓ_0, …, ℓ_m`.
    OutsideSpan,
}

impl EllPositivity {
    pub fn is_positive(&self) -> bool {
        matches!(self, Self::Positive(_))
    }
}

/// Recovers `a_i = ⟨ℓ_i, x⟩ / 2^m` and classifies `x`. Membership in `U` is
/// decided by exact reconstruction.
pub fn classify(x: &LatticeVector) -> EllPositivity {
    let m = x.m();
    let scale = Rational::from_integer((1u64 << m).into());
    let a: Vec<Rational> = (0..=m)
        .map(|i| ell(i, m).and_then(|l| l.dot(x)).expect("same m") / &scale)
        .collect();
    let coeffs = EllCoefficients {
        basis: Basis::Ell,
        coeffs: a,
    };
    if coeffs.to_vector() != *x {
        return EllPositivity::OutsideSpan;
    }
    let tail = &coeffs.coeffs[1..];
    if tail.iter().all(Signed::is_positive) {
        EllPositivity::Positive(coeffs)
    } else if tail.iter().any(Signed::is_negative) {
        EllPositivity::NotPositive(coeffs)
    } else {
        EllPositivity::Borderline(coeffs)
    }
}

/// `Some(ℓ-coefficients)` iff `x` is ℓ-positive.
pub fn is_ell_positive(x: &LatticeVector) -> Option<EllCoefficients> {
    match classify(x) {
        EllPositivity::Positive(c) => Some(c),
        _ => None,
    }
}

/// `Some(ℓ-coefficients)` iff `x ∈ U` with `a_1, …, a_m ≥ 0`, the closure of
/// the ℓ-positive cone. The one-step factors `u_i` for `m ≥ 2` live here.
pub fn is_weakly_ell_positive(x: &LatticeVector) -> Option<EllCoefficients> {
    match classify(x) {
        EllPositivity::Positive(c) | EllPositivity::Borderline(c) => Some(c),
        _ => None,
    }
}

/// Entrywise `max(x, 0)`.
pub fn truncate(x: &LatticeVector) -> LatticeVector {
    LatticeVector::new(x.m(), x.entries().iter().map(positive_part).collect())
        .expect("same shape")
}

/// The binomial factor `u_i(λ) = U` if `λ(i) = 0` and `D` if `λ(i) = 1`.
pub fn one_step_factor(i: usize, down: &Rational, up: &Rational, m: usize) -> Result<LatticeVector> {
    check_m(m)?;
    if i == 0 || i > m {
        return Err(Error::IndexOutOfRange { index: i, max: m });
    }
    if !down.is_positive() || down >= up {
        return Err(Error::InvalidMarket(format!(
            "one-step factor needs 0 < D < U, got D={down}, U={up}"
        )));
    }
    LatticeVector::from_fn(m, |lambda| {
        if lambda.get(i) == 0 {
            up.clone()
        } else {
            down.clone()
        }
    })
}

/// `x(λ) ≤ x(λ')` whenever `λ' ⪯ λ`. It suffices to compare covering pairs.
pub fn is_order_reversing(x: &LatticeVector) -> bool {
    let m = x.m();
    LatticeElement::all(m).all(|lambda| {
        (1..=m)
            .filter(|&i| lambda.get(i) == 0)
            .all(|i| x[lambda.with(i, 1)] <= x[lambda])
    })
}

/// A certified element `Σ_i u_i^+` of the truncated ℓ-positive cone, or of
/// its closure when built with [`TruncatedSum::closure`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSum {
    m: usize,
    terms: Vec<EllCoefficients>,
    strict: bool,
}

impl TruncatedSum {
    pub fn new(m: usize, terms: Vec<EllCoefficients>) -> Result<Self> {
        Self::build(m, terms, true)
    }

    /// Accepts terms with `a_1, …, a_m ≥ 0`.
    pub fn closure(m: usize, terms: Vec<EllCoefficients>) -> Result<Self> {
        Self::build(m, terms, false)
    }

    fn build(m: usize, terms: Vec<EllCoefficients>, strict: bool) -> Result<Self> {
        check_m(m)?;
        for t in &terms {
            if t.m() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: t.m(),
                });
            }
            let ok = if strict {
                t.is_ell_positive()
            } else {
                t.is_weakly_ell_positive()
            };
            if !ok {
                return Err(Error::InvalidPayoff(format!(
                    "term {:?} is not ℓ-positive",
                    t.coeffs()
                )));
            }
        }
        Ok(Self { m, terms, strict })
    }

    /// Whether every term is strictly ℓ-positive.
    pub fn is_strict(&self) -> bool {
        self.strict || self.terms.iter().all(EllCoefficients::is_ell_positive)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> &[EllCoefficients] {
        &self.terms
    }

    pub fn to_vector(&self) -> LatticeVector {
        self.terms
            .iter()
            .map(|t| truncate(&t.to_vector()))
            .fold(LatticeVector::zeros(self.m).expect("valid m"), |acc, v| &acc + &v)
    }
}
