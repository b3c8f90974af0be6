//! The polytope `P(b) = {x ∈ Δ(Λ) : ⟨ℓ_i, x⟩ = b(i), 1 ≤ i ≤ m}` together
//! with its supervertex `q*` and subvertex `q_*`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    c_vector, check_m, decreasing_order, ell, nu, LatticeElement, LatticeVector,
};
use crate::linalg::Matrix;
use crate::rational::{half, int, Rational};

/// The parameter `b ∈ R^m` with the derived vectors `b'` and `b''`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeSpec {
    b: Vec<Rational>,
    b_prime: Vec<Rational>,
    b_dprime: Vec<Rational>,
    nonempty: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    Supervertex,
    Subvertex,
}

/// A vector supported on a distinguished chain of `m+1` lattice elements.
///
/// `atoms` lists every chain element with its weight, zero weights included,
/// in chain order (`θ_0, …, θ_m` for the supervertex, `ν_0, …, ν_m` for the
/// subvertex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexDensity {
    m: usize,
    kind: VertexKind,
    atoms: Vec<(LatticeElement, Rational)>,
}

impl VertexDensity {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> VertexKind {
        self.kind
    }

    pub fn atoms(&self) -> &[(LatticeElement, Rational)] {
        &self.atoms
    }

    /// Atoms with nonzero weight.
    pub fn support(&self) -> Vec<(LatticeElement, Rational)> {
        self.atoms
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .cloned()
            .collect()
    }

    pub fn weight(&self, lambda: LatticeElement) -> Rational {
        self.atoms
            .iter()
            .find(|(l, _)| *l == lambda)
            .map_or_else(Rational::zero, |(_, w)| w.clone())
    }

    pub fn to_vector(&self) -> LatticeVector {
        let mut v = LatticeVector::zeros(self.m).expect("m validated at construction");
        for (lambda, w) in &self.atoms {
            v.set(*lambda, v[*lambda].clone() + w);
        }
        v
    }

    /// `⟨f, q⟩`.
    pub fn expectation(&self, f: &LatticeVector) -> Rational {
        self.atoms
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(l, w)| w * &f[*l])
            .sum()
    }
}

impl PolytopeSpec {
    pub fn new(b: Vec<Rational>) -> Result<Self> {
        let m = b.len();
        check_m(m)?;
        let ext = |i: usize| -> Rational {
            match i {
                0 => Rational::one(),
                i if i == m + 1 => -Rational::one(),
                i => b[i - 1].clone(),
            }
        };
        let b_prime = (0..=m).map(|i| (ext(i) - ext(i + 1)) * half()).collect();
        let mut b_dprime: Vec<Rational> = std::iter::once(Rational::zero())
            .chain(b.iter().map(|x| (x + Rational::one()) * half()))
            .collect();
        b_dprime[0] = Rational::one() - b_dprime[1..].iter().sum::<Rational>();
        let nonempty = b.iter().all(|x| x.abs() <= Rational::one());
        Ok(Self {
            b,
            b_prime,
            b_dprime,
            nonempty,
        })
    }

    pub fn m(&self) -> usize {
        self.b.len()
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn b_prime(&self) -> &[Rational] {
        &self.b_prime
    }

    pub fn b_dprime(&self) -> &[Rational] {
        &self.b_dprime
    }

    pub fn is_empty(&self) -> bool {
        !self.nonempty
    }

    /// `b(i)` for `0 ≤ i ≤ m+1` with `b(0) = 1`, `b(m+1) = -1`.
    pub fn b_ext(&self, i: usize) -> Rational {
        let m = self.m();
        match i {
            0 => Rational::one(),
            i if i == m + 1 => -Rational::one(),
            i => self.b[i - 1].clone(),
        }
    }

    fn require_nonempty(&self) -> Result<()> {
        if self.nonempty {
            Ok(())
        } else {
            Err(Error::EmptyPolytope)
        }
    }

    fn check_vector(&self, x: &LatticeVector) -> Result<()> {
        if x.m() != self.m() {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.m(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Membership through the `ℓ'` system: `x ≥ 0` and `⟨ℓ'_i, x⟩ = b'(i)`.
    pub fn contains(&self, x: &LatticeVector) -> Result<bool> {
        self.check_vector(x)?;
        if !x.is_nonnegative() {
            return Ok(false);
        }
        let mut lhs = vec![Rational::zero(); self.m() + 1];
        for (lambda, value) in x.iter().filter(|(_, v)| !v.is_zero()) {
            for (acc, c) in lhs.iter_mut().zip(c_vector(lambda)) {
                match c {
                    1 => *acc += value,
                    -1 => *acc -= value,
                    _ => {}
                }
            }
        }
        Ok(lhs == self.b_prime)
    }

    /// Membership through the defining system `⟨ℓ_0,x⟩ = 1`, `⟨ℓ_i,x⟩ = b(i)`.
    pub fn contains_primal(&self, x: &LatticeVector) -> Result<bool> {
        self.check_vector(x)?;
        if !x.is_nonnegative() {
            return Ok(false);
        }
        for i in 0..=self.m() {
            if ell(i, self.m())?.dot(x)? != self.b_ext(i) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The supervertex `q*`, built from the decreasing arrangement of `b`
    /// with ties broken by ascending index.
    pub fn supervertex(&self) -> Result<VertexDensity> {
        self.supervertex_with_order(&decreasing_order(&self.b))
    }

    /// The supervertex computed from an explicit arrangement `i_1, …, i_m`
    /// (1-based) with `b(i_1) ≥ … ≥ b(i_m)`.
    pub fn supervertex_with_order(&self, order: &[usize]) -> Result<VertexDensity> {
        self.require_nonempty()?;
        let m = self.m();
        let mut seen = vec![false; m + 1];
        for &i in order {
            if i == 0 || i > m || seen[i] {
                return Err(Error::InvalidPermutation(format!("{order:?}")));
            }
            seen[i] = true;
        }
        if order.len() != m || order.windows(2).any(|w| self.b_ext(w[0]) < self.b_ext(w[1])) {
            return Err(Error::InvalidPermutation(format!(
                "{order:?} does not sort b decreasingly"
            )));
        }

        // i_0 = 0 and i_{m+1} = m+1.
        let idx = |k: usize| -> usize {
            match k {
                0 => 0,
                k if k == m + 1 => m + 1,
                k => order[k - 1],
            }
        };
        let mut atoms = Vec::with_capacity(m + 1);
        for k in 0..=m {
            // θ_k is the characteristic function of {i_{k+1}, …, i_m}.
            let values: Vec<u8> = (1..=m)
                .map(|pos| u8::from(order[k..].contains(&pos)))
                .collect();
            let theta = LatticeElement::from_values(&values)?;
            let weight = (self.b_ext(idx(k)) - self.b_ext(idx(k + 1))) * half();
            atoms.push((theta, weight));
        }
        Ok(VertexDensity {
            m,
            kind: VertexKind::Supervertex,
            atoms,
        })
    }

    /// The subvertex `q_* = Σ b''(i) e_{ν_i}`. This is a signed vector; it is
    /// a point of `P(b)` exactly when [`Self::subvertex_in_polytope`] holds.
    pub fn subvertex(&self) -> Result<VertexDensity> {
        self.require_nonempty()?;
        let m = self.m();
        let atoms = (0..=m)
            .map(|i| Ok((nu(i, m)?, self.b_dprime[i].clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(VertexDensity {
            m,
            kind: VertexKind::Subvertex,
            atoms,
        })
    }

    /// `Σ_{i=1}^m b(i) ≤ 2 - m`.
    pub fn subvertex_in_polytope(&self) -> Result<bool> {
        self.require_nonempty()?;
        Ok(self.b_sum() <= self.criterion_bound())
    }

    pub fn b_sum(&self) -> Rational {
        self.b.iter().sum()
    }

    /// The right-hand side `2 - m` of the subvertex criterion.
    pub fn criterion_bound(&self) -> Rational {
        int(2) - int(self.m() as i64)
    }

    pub(crate) fn criterion_error(&self) -> Error {
        Error::SubvertexCriterion {
            sum: self.b_sum().to_string(),
            bound: self.criterion_bound().to_string(),
        }
    }

    /// Whether `x ∈ P(b)` is a vertex: no point of `P(b)` has strictly
    /// smaller support, equivalently the defining equations restricted to
    /// `supp(x)` have a unique solution.
    pub fn is_vertex(&self, x: &LatticeVector) -> Result<bool> {
        if !self.contains(x)? {
            return Err(Error::NotInPolytope);
        }
        let m = self.m();
        let support = x.support();
        let rows = (0..=m)
            .map(|i| {
                let l = ell(i, m)?;
                Ok(support.iter().map(|&lambda| l[lambda].clone()).collect())
            })
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        Ok(Matrix::from_rows(rows)?.rank() == support.len())
    }
}

/// Builds the polytope data for `b`.
pub fn make_spec(b: Vec<Rational>) -> Result<PolytopeSpec> {
    PolytopeSpec::new(b)
}
