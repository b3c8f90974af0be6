//! The Λ-labelled tree of height `n`: payoffs on leaves, policies assigning a
//! one-step density to every internal node, the induced measures, backward
//! induction, and the exponential per-node LP algorithm for the extremal
//! expectations over `Γ(Λ^n, b)`.
//!
//! Words of length `k` are indexed big-endian over letters, so the
//! successors of a node with index `w` are `w·2^m + λ` for `λ ∈ Λ`.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{check_m, LatticeElement, LatticeVector};
use crate::lp::{solve, Direction, LpProblem};
use crate::lpos::{is_weakly_ell_positive, TruncatedSum};
use crate::polytope::PolytopeSpec;
use crate::rational::{positive_part, Rational};

pub const DEFAULT_MAX_ORACLE_BITS: usize = 20;

/// A word over `Λ`, i.e. a node of the tree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    m: usize,
    letters: Vec<LatticeElement>,
}

impl Word {
    pub fn empty(m: usize) -> Self {
        Self {
            m,
            letters: Vec::new(),
        }
    }

    pub fn new(m: usize, letters: Vec<LatticeElement>) -> Result<Self> {
        check_m(m)?;
        if let Some(bad) = letters.iter().find(|l| l.m() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.m(),
            });
        }
        Ok(Self { m, letters })
    }

    /// Parses letters separated by whitespace, commas or dots: `"01 10 11"`.
    pub fn parse(m: usize, s: &str) -> Result<Self> {
        let letters = s
            .split(|c: char| c.is_whitespace() || c == ',' || c == '.')
            .filter(|t| !t.is_empty())
            .map(LatticeElement::parse)
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, letters)
    }

    /// The word of length `len` with big-endian index `index`.
    pub fn from_index(m: usize, len: usize, index: usize) -> Self {
        let mask = (1usize << m) - 1;
        let letters = (0..len)
            .rev()
            .map(|pos| {
                LatticeElement::from_index(m, (index >> (pos * m)) & mask).expect("masked index")
            })
            .collect();
        Self { m, letters }
    }

    pub fn index(&self) -> usize {
        self.letters
            .iter()
            .fold(0usize, |acc, l| (acc << self.m) | l.index())
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[LatticeElement] {
        &self.letters
    }

    pub fn push(&mut self, letter: LatticeElement) {
        debug_assert_eq!(letter.m(), self.m);
        self.letters.push(letter);
    }

    pub fn child(&self, letter: LatticeElement) -> Self {
        let mut w = self.clone();
        w.push(letter);
        w
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut w = self.clone();
        w.letters.extend_from_slice(&other.letters);
        w
    }

    /// Prefix order of the tree.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.letters.starts_with(&self.letters)
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(ToString::to_string).collect();
        write!(f, "Word[{}]", parts.join(" "))
    }
}

/// `F(λ_1⋯λ_n) = (Σ_j s_j Π_t u_j(λ_t) - C)^+` with nonnegative factors
/// `u_j` in the closed ℓ-positive cone, weights `s_j ≥ 0` and strike `C ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuropeanPayoff {
    factors: Vec<LatticeVector>,
    weights: Vec<Rational>,
    strike: Rational,
}

impl EuropeanPayoff {
    pub fn new(factors: Vec<LatticeVector>, weights: Vec<Rational>, strike: Rational) -> Result<Self> {
        if factors.is_empty() || factors.len() != weights.len() {
            return Err(Error::InvalidPayoff(format!(
                "{} factors but {} weights",
                factors.len(),
                weights.len()
            )));
        }
        let m = factors[0].m();
        for (j, u) in factors.iter().enumerate() {
            if u.m() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: u.m(),
                });
            }
            if !u.is_nonnegative() || is_weakly_ell_positive(u).is_none() {
                return Err(Error::InvalidPayoff(format!(
                    "factor {} must be nonnegative and ℓ-positive",
                    j + 1
                )));
            }
        }
        if weights.iter().any(Signed::is_negative) || strike.is_negative() {
            return Err(Error::InvalidPayoff("weights and strike must be ≥ 0".into()));
        }
        Ok(Self {
            factors,
            weights,
            strike,
        })
    }

    pub fn m(&self) -> usize {
        self.factors[0].m()
    }

    pub fn factors(&self) -> &[LatticeVector] {
        &self.factors
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn strike(&self) -> &Rational {
        &self.strike
    }

    /// `Π_t u_j(λ_t)` for every factor `j`.
    pub fn factor_products(&self, letters: &[LatticeElement]) -> Vec<Rational> {
        self.factors
            .iter()
            .map(|u| letters.iter().map(|&l| u[l].clone()).product())
            .collect()
    }

    /// Evaluates from per-factor products `Π_t u_j(λ_t)`.
    pub fn evaluate_products(&self, products: &[Rational]) -> Rational {
        let total: Rational = self
            .weights
            .iter()
            .zip(products)
            .filter(|(s, _)| !s.is_zero())
            .map(|(s, p)| s * p)
            .sum();
        positive_part(&(total - &self.strike))
    }

    pub fn evaluate(&self, letters: &[LatticeElement]) -> Rational {
        self.evaluate_products(&self.factor_products(letters))
    }

    /// `F_{ω-}`: again European, with weights `s_j·u_j(ω)`.
    pub fn restrict(&self, prefix: &[LatticeElement]) -> Self {
        let products = self.factor_products(prefix);
        Self {
            factors: self.factors.clone(),
            weights: self.weights.iter().zip(&products).map(|(s, p)| s * p).collect(),
            strike: self.strike.clone(),
        }
    }

    /// For horizon one: the certificate that `F` is `(Σ_j s_j u_j - C·ℓ_0)^+`,
    /// a single truncated ℓ-positive term. `None` when every weight vanishes
    /// (then `F ≡ 0`).
    pub fn one_step_certificate(&self) -> Option<TruncatedSum> {
        if self.weights.iter().all(Zero::is_zero) {
            return None;
        }
        let m = self.m();
        let mut combo = LatticeVector::constant(m, -self.strike.clone()).expect("valid m");
        for (s, u) in self.weights.iter().zip(&self.factors) {
            combo = &combo + &u.scale(s);
        }
        let coeffs = is_weakly_ell_positive(&combo)?;
        TruncatedSum::new(m, vec![coeffs.clone()])
            .or_else(|_| TruncatedSum::closure(m, vec![coeffs]))
            .ok()
    }
}

type PayoffFn = Arc<dyn Fn(&[LatticeElement]) -> Rational + Send + Sync>;

#[derive(Clone)]
enum PayoffKind {
    European(EuropeanPayoff),
    Custom { eval: PayoffFn, symmetric: bool },
}

/// A function `F : Λ^n → R` on the leaves of the tree.
#[derive(Clone)]
pub struct Payoff {
    m: usize,
    n: usize,
    kind: PayoffKind,
}

impl fmt::Debug for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("Payoff");
        d.field("m", &self.m).field("n", &self.n);
        match &self.kind {
            PayoffKind::European(e) => d.field("european", e),
            PayoffKind::Custom { symmetric, .. } => d.field("symmetric", symmetric),
        };
        d.finish()
    }
}

impl Payoff {
    pub fn european(payoff: EuropeanPayoff, n: usize) -> Self {
        Self {
            m: payoff.m(),
            n,
            kind: PayoffKind::European(payoff),
        }
    }

    /// A payoff given by an arbitrary function of the leaf word. `symmetric`
    /// asserts invariance under reordering letters; it is trusted.
    pub fn custom(
        m: usize,
        n: usize,
        symmetric: bool,
        eval: impl Fn(&[LatticeElement]) -> Rational + Send + Sync + 'static,
    ) -> Result<Self> {
        check_m(m)?;
        Ok(Self {
            m,
            n,
            kind: PayoffKind::Custom {
                eval: Arc::new(eval),
                symmetric,
            },
        })
    }

    /// A payoff from its full table of `2^{mn}` leaf values.
    pub fn from_table(m: usize, n: usize, values: Vec<Rational>, symmetric: bool) -> Result<Self> {
        check_m(m)?;
        let expected = 1usize
            .checked_shl((m * n) as u32)
            .filter(|_| m * n < usize::BITS as usize)
            .ok_or(Error::TreeCapExceeded {
                bits: m * n,
                cap: usize::BITS as usize - 1,
            })?;
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        let values = Arc::new(values);
        Self::custom(m, n, symmetric, move |letters| {
            let idx = letters.iter().fold(0usize, |acc, l| (acc << m) | l.index());
            values[idx].clone()
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn horizon(&self) -> usize {
        self.n
    }

    pub fn is_symmetric(&self) -> bool {
        match &self.kind {
            PayoffKind::European(_) => true,
            PayoffKind::Custom { symmetric, .. } => *symmetric,
        }
    }

    pub fn as_european(&self) -> Option<&EuropeanPayoff> {
        match &self.kind {
            PayoffKind::European(e) => Some(e),
            PayoffKind::Custom { .. } => None,
        }
    }

    /// `F(λ_1⋯λ_n)`; `letters` must have length `n`.
    pub fn evaluate(&self, letters: &[LatticeElement]) -> Rational {
        debug_assert_eq!(letters.len(), self.n, "payoff evaluated off the leaves");
        match &self.kind {
            PayoffKind::European(e) => e.evaluate(letters),
            PayoffKind::Custom { eval, .. } => eval(letters),
        }
    }

    pub fn evaluate_word(&self, word: &Word) -> Rational {
        self.evaluate(word.letters())
    }

    /// `F_{ω-}(τ) = F(ωτ)` on `Λ^k`, `k = n - |ω|`.
    pub fn restrict(&self, prefix: &Word) -> Result<Payoff> {
        if prefix.len() > self.n || prefix.m() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: prefix.len(),
            });
        }
        if prefix.is_empty() {
            return Ok(self.clone());
        }
        let k = self.n - prefix.len();
        let kind = match &self.kind {
            PayoffKind::European(e) => PayoffKind::European(e.restrict(prefix.letters())),
            PayoffKind::Custom { eval, symmetric } => {
                let eval = Arc::clone(eval);
                let head = prefix.letters().to_vec();
                let f: PayoffFn = Arc::new(move |tail: &[LatticeElement]| {
                    let mut full = head.clone();
                    full.extend_from_slice(tail);
                    eval(&full)
                });
                PayoffKind::Custom {
                    eval: f,
                    symmetric: *symmetric,
                }
            }
        };
        Ok(Self {
            m: self.m,
            n: k,
            kind,
        })
    }

    /// All `2^{mn}` leaf values in index order.
    pub fn table(&self, max_bits: usize) -> Result<Vec<Rational>> {
        let bits = self.m * self.n;
        if bits > max_bits {
            return Err(Error::TreeCapExceeded {
                bits,
                cap: max_bits,
            });
        }
        Ok((0..1usize << bits)
            .into_par_iter()
            .map(|idx| self.evaluate_word(&Word::from_index(self.m, self.n, idx)))
            .collect())
    }
}

type PolicyFn = Arc<dyn Fn(&Word) -> LatticeVector + Send + Sync>;

/// A map `Φ` from internal nodes (words of length `< n`) to densities on `Λ`.
#[derive(Clone)]
pub enum TreePolicy {
    Constant(LatticeVector),
    /// `levels[d][w]` is the density at the node of depth `d` and index `w`.
    Table(Vec<Vec<LatticeVector>>),
    Function(PolicyFn),
}

impl fmt::Debug for TreePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(q) => f.debug_tuple("Constant").field(q).finish(),
            Self::Table(levels) => write!(f, "Table({} levels)", levels.len()),
            Self::Function(_) => write!(f, "Function(..)"),
        }
    }
}

impl TreePolicy {
    pub fn constant(q: LatticeVector) -> Result<Self> {
        if !q.is_density() {
            return Err(Error::InvalidPolicy("constant policy is not a density".into()));
        }
        Ok(Self::Constant(q))
    }

    pub fn function(f: impl Fn(&Word) -> LatticeVector + Send + Sync + 'static) -> Self {
        Self::Function(Arc::new(f))
    }

    /// `Φ(ω)`.
    pub fn density(&self, node: &Word) -> LatticeVector {
        match self {
            Self::Constant(q) => q.clone(),
            Self::Table(levels) => levels[node.len()][node.index()].clone(),
            Self::Function(f) => f(node),
        }
    }

    /// Checks every assigned density on a tree of height `n` (materialises
    /// functional policies).
    pub fn validate(&self, m: usize, n: usize) -> Result<()> {
        let check = |q: &LatticeVector| {
            if q.m() != m || !q.is_density() {
                Err(Error::InvalidPolicy(format!("{q:?} is not a density on Λ")))
            } else {
                Ok(())
            }
        };
        match self {
            Self::Constant(q) => check(q),
            _ => {
                for depth in 0..n {
                    for idx in 0..1usize << (m * depth) {
                        check(&self.density(&Word::from_index(m, depth, idx)))?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Size limits for the exponential tree algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeConfig {
    /// Refuse trees with more than `2^max_bits` leaves.
    pub max_bits: usize,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self {
            max_bits: DEFAULT_MAX_ORACLE_BITS,
        }
    }
}

impl TreeConfig {
    fn check(&self, m: usize, k: usize) -> Result<()> {
        let bits = m * k;
        if bits > self.max_bits {
            Err(Error::TreeCapExceeded {
                bits,
                cap: self.max_bits,
            })
        } else {
            Ok(())
        }
    }
}

/// `P(Φ, A_ω)` on `Λ^k`: `τ ↦ Π_j Φ(ωτ_1⋯τ_{j-1})(τ_j)`, indexed by `τ`.
pub fn measure_of_policy(
    policy: &TreePolicy,
    prefix: &Word,
    k: usize,
    config: &TreeConfig,
) -> Result<Vec<Rational>> {
    let m = prefix.m();
    config.check(m, k)?;
    let mut level = vec![Rational::one()];
    for depth in 0..k {
        let mut next = Vec::with_capacity(level.len() << m);
        for (idx, mass) in level.iter().enumerate() {
            let node = prefix.concat(&Word::from_index(m, depth, idx));
            let q = policy.density(&node);
            next.extend(q.entries().iter().map(|p| mass * p));
        }
        level = next;
    }
    Ok(level)
}

/// `P(Φ)(A_ω) = Π_j Φ(ω_1⋯ω_{j-1})(ω_j)`.
pub fn cylinder_probability(policy: &TreePolicy, node: &Word) -> Rational {
    let mut prefix = Word::empty(node.m());
    let mut p = Rational::one();
    for &l in node.letters() {
        p *= &policy.density(&prefix)[l];
        prefix.push(l);
    }
    p
}

/// One backward-induction step: `G(ω) = ⟨F|succ(ω), Φ(ω)⟩` for every node of
/// depth `depth` given the values `child` at depth `depth + 1`.
fn induction_step(
    m: usize,
    depth: usize,
    child: &[Rational],
    density_at: impl Fn(&Word) -> LatticeVector + Sync,
) -> Vec<Rational> {
    let fan = 1usize << m;
    (0..child.len() / fan)
        .into_par_iter()
        .map(|idx| {
            let q = density_at(&Word::from_index(m, depth, idx));
            child[idx * fan..(idx + 1) * fan]
                .iter()
                .zip(q.entries())
                .filter(|(_, p)| !p.is_zero())
                .map(|(f, p)| f * p)
                .sum()
        })
        .collect()
}

/// `F^{(k)}_Φ` on all words of length `n - k`, indexed big-endian.
pub fn extend(
    payoff: &Payoff,
    policy: &TreePolicy,
    k: usize,
    config: &TreeConfig,
) -> Result<Vec<Rational>> {
    let (m, n) = (payoff.m(), payoff.horizon());
    if k > n {
        return Err(Error::IndexOutOfRange { index: k, max: n });
    }
    let mut level = payoff.table(config.max_bits)?;
    for depth in (n - k..n).rev() {
        level = induction_step(m, depth, &level, |w| policy.density(w));
    }
    Ok(level)
}

/// `F^{(k)}_Φ(ω)` at a single node, `k = n - |ω|`, without materialising
/// the other branches.
pub fn extend_at(
    payoff: &Payoff,
    policy: &TreePolicy,
    node: &Word,
    config: &TreeConfig,
) -> Result<Rational> {
    let restricted = payoff.restrict(node)?;
    let k = restricted.horizon();
    config.check(payoff.m(), k)?;
    let shifted = TreePolicy::function({
        let policy = policy.clone();
        let node = node.clone();
        move |w: &Word| policy.density(&node.concat(w))
    });
    Ok(extend(&restricted, &shifted, k, config)?.remove(0))
}

/// Result of the per-node LP algorithm.
#[derive(Clone, Debug)]
pub struct TreeExtremum {
    /// `F^{(n)}(∅)`.
    pub value: Rational,
    /// The realising policy, one LP argpoint per internal node.
    pub policy: TreePolicy,
    /// `levels[d][w] = F^{(n-d)}(ω)` for the node of depth `d` and index `w`.
    pub levels: Vec<Vec<Rational>>,
}

impl TreeExtremum {
    pub fn value_at(&self, node: &Word) -> &Rational {
        &self.levels[node.len()][node.index()]
    }
}

/// `F_max(Γ)` or `F_min(Γ)` over `Γ(Λ^n, b)` by backward induction with one
/// exact LP per internal node. Exponential in `n`; an oracle, not a fast path.
pub fn tree_extremum(
    payoff: &Payoff,
    spec: &PolytopeSpec,
    direction: Direction,
    config: &TreeConfig,
) -> Result<TreeExtremum> {
    let (m, n) = (payoff.m(), payoff.horizon());
    if spec.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: spec.m(),
        });
    }
    if spec.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let fan = 1usize << m;
    let mut levels = vec![Vec::new(); n + 1];
    let mut argpoints = vec![Vec::new(); n];
    levels[n] = payoff.table(config.max_bits)?;
    for depth in (0..n).rev() {
        let child = &levels[depth + 1];
        let solved = (0..child.len() / fan)
            .into_par_iter()
            .map(|idx| {
                let objective = LatticeVector::new(m, child[idx * fan..(idx + 1) * fan].to_vec())?;
                let sol = solve(&LpProblem {
                    spec,
                    objective,
                    direction,
                })?
                .optimal()
                .ok_or(Error::EmptyPolytope)?;
                Ok((sol.value, sol.argpoint))
            })
            .collect::<Result<Vec<_>>>()?;
        let (values, points): (Vec<_>, Vec<_>) = solved.into_iter().unzip();
        levels[depth] = values;
        argpoints[depth] = points;
    }
    Ok(TreeExtremum {
        value: levels[0][0].clone(),
        policy: TreePolicy::Table(argpoints),
        levels,
    })
}

/// Recovers a policy with `P(Φ) = P'` from a density `P'` on `Λ^n` via
/// conditional probabilities; null nodes get the uniform density.
pub fn reconstruct_policy(m: usize, n: usize, density: &[Rational]) -> Result<TreePolicy> {
    check_m(m)?;
    if density.len() != 1usize << (m * n) {
        return Err(Error::DimensionMismatch {
            expected: 1usize << (m * n),
            found: density.len(),
        });
    }
    let fan = 1usize << m;
    let uniform = LatticeVector::constant(m, Rational::new(1.into(), (fan as i64).into()))?;
    // Cylinder masses P'(A_ω) by depth.
    let mut masses = vec![Vec::new(); n + 1];
    masses[n] = density.to_vec();
    for depth in (0..n).rev() {
        masses[depth] = masses[depth + 1]
            .chunks(fan)
            .map(|c| c.iter().sum())
            .collect();
    }
    let levels = (0..n)
        .map(|depth| {
            masses[depth]
                .iter()
                .enumerate()
                .map(|(idx, mass)| {
                    if mass.is_zero() {
                        return uniform.clone();
                    }
                    let children = &masses[depth + 1][idx * fan..(idx + 1) * fan];
                    LatticeVector::new(m, children.iter().map(|c| c / mass).collect())
                        .expect("fan entries")
                })
                .collect()
        })
        .collect();
    Ok(TreePolicy::Table(levels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::make_spec;
    use crate::rational::{frac, int};

    fn el(s: &str) -> LatticeElement {
        LatticeElement::parse(s).unwrap()
    }

    #[test]
    fn word_indexing_round_trips() {
        let w = Word::parse(2, "01 10 11").unwrap();
        assert_eq!(w.index(), 0b011011);
        assert_eq!(Word::from_index(2, 3, w.index()), w);
        assert!(Word::empty(2).is_prefix_of(&w));
        assert!(Word::parse(2, "01").unwrap().is_prefix_of(&w));
        assert!(Word::parse(2, "1").is_err());
    }

    #[test]
    fn constant_policy_gives_product_measure() {
        let q = LatticeVector::new(1, vec![frac(1, 3), frac(2, 3)]).unwrap();
        let policy = TreePolicy::constant(q.clone()).unwrap();
        let p = measure_of_policy(&policy, &Word::empty(1), 2, &TreeConfig::default()).unwrap();
        let outer: Vec<Rational> = q
            .entries()
            .iter()
            .flat_map(|a| q.entries().iter().map(move |b| a * b))
            .collect();
        assert_eq!(p, outer);
    }

    #[test]
    fn single_step_measure_is_root_density() {
        let q = LatticeVector::new(2, vec![frac(1, 2), int(0), frac(1, 4), frac(1, 4)]).unwrap();
        let policy = TreePolicy::constant(q.clone()).unwrap();
        let p = measure_of_policy(&policy, &Word::empty(2), 1, &TreeConfig::default()).unwrap();
        assert_eq!(p, q.entries());
    }

    #[test]
    fn extend_base_case_is_payoff() {
        let f = Payoff::custom(1, 2, false, |w| int(w[0].index() as i64 * 2 + w[1].index() as i64))
            .unwrap();
        let policy = TreePolicy::constant(LatticeVector::constant(1, frac(1, 2)).unwrap()).unwrap();
        let level = extend(&f, &policy, 0, &TreeConfig::default()).unwrap();
        assert_eq!(level, vec![int(0), int(1), int(2), int(3)]);
        let root = extend(&f, &policy, 2, &TreeConfig::default()).unwrap();
        assert_eq!(root, vec![frac(3, 2)]);
    }

    #[test]
    fn restrict_empty_is_identity() {
        let f = Payoff::custom(1, 2, false, |w| int(w[0].index() as i64 - w[1].index() as i64))
            .unwrap();
        let r = f.restrict(&Word::empty(1)).unwrap();
        assert_eq!(r.table(20).unwrap(), f.table(20).unwrap());
        let tail = f.restrict(&Word::parse(1, "1").unwrap()).unwrap();
        assert_eq!(tail.horizon(), 1);
        assert_eq!(tail.evaluate(&[el("0")]), int(1));
    }

    #[test]
    fn european_restriction_is_truncated_ell_positive() {
        let u = crate::lpos::one_step_factor(1, &frac(1, 2), &int(2), 1).unwrap();
        let e = EuropeanPayoff::new(vec![u], vec![int(100)], int(100)).unwrap();
        let f = Payoff::european(e, 3);
        let g = f.restrict(&Word::parse(1, "0 1").unwrap()).unwrap();
        let cert = g.as_european().unwrap().one_step_certificate().unwrap();
        let table = g.table(20).unwrap();
        assert_eq!(cert.to_vector().entries(), &table[..]);
    }

    #[test]
    fn tree_extremum_single_step_is_one_lp() {
        let spec = make_spec(vec![int(0), int(0)]).unwrap();
        let f = Payoff::from_table(2, 1, vec![int(1), int(0), int(0), int(1)], true).unwrap();
        let max = tree_extremum(&f, &spec, Direction::Maximize, &TreeConfig::default()).unwrap();
        let min = tree_extremum(&f, &spec, Direction::Minimize, &TreeConfig::default()).unwrap();
        assert_eq!(max.value, int(1));
        assert_eq!(min.value, int(0));
    }

    #[test]
    fn cap_is_enforced() {
        let spec = make_spec(vec![int(0), int(0)]).unwrap();
        let f = Payoff::custom(2, 6, true, |_| int(0)).unwrap();
        let err = tree_extremum(&f, &spec, Direction::Maximize, &TreeConfig { max_bits: 10 });
        assert!(matches!(err, Err(Error::TreeCapExceeded { bits: 12, cap: 10 })));
    }

    #[test]
    fn invalid_constant_policy_rejected() {
        let q = LatticeVector::new(1, vec![frac(1, 2), frac(1, 3)]).unwrap();
        assert!(TreePolicy::constant(q).is_err());
    }

    #[test]
    fn reconstruct_handles_null_nodes() {
        // All mass on the word "0 0".
        let mut density = vec![int(0); 4];
        density[0] = int(1);
        let policy = reconstruct_policy(1, 2, &density).unwrap();
        let p = measure_of_policy(&policy, &Word::empty(1), 2, &TreeConfig::default()).unwrap();
        assert_eq!(p, density);
        assert_eq!(
            policy.density(&Word::parse(1, "1").unwrap()).entries(),
            &[frac(1, 2), frac(1, 2)]
        );
    }
}
