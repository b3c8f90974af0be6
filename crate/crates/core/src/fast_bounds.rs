//! Polynomial-size evaluation of product-measure expectations of symmetric
//! payoffs, and the minimizer lower bound for European payoffs.
//!
//! A symmetric `f` on `Ω^k` satisfies
//! `Σ_x f(x) = Σ_{k_1+…+k_r=k} k!/(k_1!⋯k_r!) · f(ω_1^{k_1}⋯ω_r^{k_r})`, so an
//! expectation under a product measure supported on `r` atoms needs only
//! `C(k+r-1, r-1)` evaluations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{nu, LatticeElement, LatticeVector};
use crate::polytope::{PolytopeSpec, VertexDensity};
use crate::rational::{int, pow, Rational};
use crate::tree::{EuropeanPayoff, Payoff, Word};

/// All compositions of `total` into `parts` nonnegative parts, in
/// reverse-lexicographic order starting from `(total, 0, …, 0)`.
#[derive(Clone, Debug)]
pub struct Compositions {
    current: Option<Vec<usize>>,
}

impl Compositions {
    pub fn new(parts: usize, total: usize) -> Self {
        let current = (parts > 0 || total == 0).then(|| {
            let mut c = vec![0; parts];
            if let Some(first) = c.first_mut() {
                *first = total;
            }
            c
        });
        Self { current }
    }
}

impl Iterator for Compositions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.take()?;
        let mut c = out.clone();
        if let Some(last) = c.len().checked_sub(1) {
            let tail = std::mem::take(&mut c[last]);
            if let Some(j) = (0..last).rev().find(|&j| c[j] > 0) {
                c[j] -= 1;
                c[j + 1] = tail + 1;
                self.current = Some(c);
            }
        }
        Some(out)
    }
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// `k! / (k_1! ⋯ k_r!)`.
pub fn multinomial(parts: &[usize]) -> BigInt {
    let mut total = 0;
    parts.iter().fold(BigInt::one(), |acc, &p| {
        total += p;
        acc * binomial(total, p)
    })
}

/// An exact expectation together with the number of composition terms at
/// which the integrand was evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub value: Rational,
    pub terms: u64,
}

/// Leaf values that can be scaled by an integer coefficient and summed.
trait Term: Clone + Send + Zero {
    fn scaled(&self, c: &BigInt) -> Self;
}

impl Term for BigInt {
    fn scaled(&self, c: &BigInt) -> Self {
        self * c
    }
}

impl Term for Rational {
    fn scaled(&self, c: &BigInt) -> Self {
        self * Rational::from_integer(c.clone())
    }
}

/// State threaded through the composition DFS: `extend` appends `count`
/// copies of atom `atom`, `leaf` evaluates the integrand.
trait Integrand: Sync {
    type State: Clone + Send + Sync;
    type Value: Term;

    fn extend(&self, state: &Self::State, atom: usize, count: usize) -> Self::State;
    fn leaf(&self, state: &Self::State) -> Self::Value;
}

/// Integer numerators over a common denominator.
fn common_denominator(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let d = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let nums = xs.iter().map(|x| x.numer() * (&d / x.denom())).collect();
    (nums, d)
}

/// `[x^0, …, x^k]`.
fn powers<T: Clone + One>(x: &T, k: usize) -> Vec<T>
where
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    let mut p = Vec::with_capacity(k + 1);
    p.push(T::one());
    for c in 1..=k {
        let next = &p[c - 1] * x;
        p.push(next);
    }
    p
}

/// `Σ_{c ∈ compositions} multinomial(c) Π w_t^{c_t} · f(c)`, skipping terms
/// with a vanishing weight raised to a positive power.
///
/// The weights are scaled to integers `W_t = w_t·d`; the returned sum is
/// `d^k` times the expectation.
fn composition_sum<I: Integrand>(
    weights: &[Rational],
    k: usize,
    init: I::State,
    integrand: &I,
) -> (I::Value, BigInt, u64) {
    struct Walk<'a, I: Integrand> {
        /// `pow[t][c] = W_t^c`.
        pow: Vec<Vec<BigInt>>,
        integrand: &'a I,
    }

    impl<I: Integrand> Walk<'_, I> {
        /// Fixes the count of atom `t` given `remaining` letters still to place.
        fn visit(&self, t: usize, remaining: usize, coeff: &BigInt, state: &I::State) -> (I::Value, u64) {
            if t + 1 == self.pow.len() {
                let w = &self.pow[t][remaining];
                if w.is_zero() {
                    return (I::Value::zero(), 0);
                }
                let s = self.integrand.extend(state, t, remaining);
                let v = self.integrand.leaf(&s);
                return (if v.is_zero() { v } else { v.scaled(&(coeff * w)) }, 1);
            }
            let mut acc = I::Value::zero();
            let mut terms = 0;
            for (count, factor) in self.counts(t, remaining) {
                let s = self.integrand.extend(state, t, count);
                let (v, n) = self.visit(t + 1, remaining - count, &(coeff * factor), &s);
                acc = acc + v;
                terms += n;
            }
            (acc, terms)
        }

        /// `(c, C(remaining, c)·W_t^c)` for every admissible count `c`.
        fn counts(&self, t: usize, remaining: usize) -> Vec<(usize, BigInt)> {
            let max = if self.pow[t][1].is_zero() { 0 } else { remaining };
            let mut binom = BigInt::one();
            (0..=max)
                .map(|c| {
                    if c > 0 {
                        binom = &binom * (remaining - c + 1) / c;
                    }
                    (c, &binom * &self.pow[t][c])
                })
                .collect()
        }
    }

    let (nums, d) = common_denominator(weights);
    let scale = pow(&Rational::from_integer(d), k).to_integer();
    if weights.is_empty() {
        return (I::Value::zero(), scale, 0);
    }
    let walk = Walk {
        pow: nums.iter().map(|w| powers(w, k.max(1))).collect(),
        integrand,
    };
    if weights.len() == 1 {
        let (value, terms) = walk.visit(0, k, &BigInt::one(), &init);
        return (value, scale, terms);
    }
    // Split the outermost atom's counts across workers; exact addition makes
    // the result independent of the partition.
    let (value, terms) = walk
        .counts(0, k)
        .into_par_iter()
        .map(|(count, factor)| {
            let s = integrand.extend(&init, 0, count);
            walk.visit(1, k - count, &factor, &s)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold((I::Value::zero(), 0), |(a, n), (b, m)| (a + b, n + m));
    (value, scale, terms)
}

/// `(Σ_j s_j Π_t v_{t,j}^{c_t} - C)^+` over the fixed denominator `den` for
/// exactly `k` letters, with per-factor running integer products.
struct ProductIntegrand {
    /// `powers[t][j][c] = V_{t,j}^c` where `v_{t,j} = V_{t,j} / e_j`.
    powers: Vec<Vec<Vec<BigInt>>>,
    /// `s_j · L / e_j^k` scaled by the weight denominator.
    coeffs: Vec<BigInt>,
    /// `C · L` scaled by the weight denominator.
    threshold: BigInt,
    /// The leaf value is `(Σ_j coeffs_j Π V^c - threshold)^+ / den`.
    den: BigInt,
}

impl ProductIntegrand {
    /// `values[t][j] = v_{t,j}`.
    fn new(values: &[Vec<Rational>], weights: &[Rational], strike: &Rational, k: usize) -> Self {
        let r = weights.len();
        let columns: Vec<(Vec<BigInt>, BigInt)> = (0..r)
            .map(|j| common_denominator(&values.iter().map(|row| row[j].clone()).collect::<Vec<_>>()))
            .collect();
        let powers = (0..values.len())
            .map(|t| (0..r).map(|j| powers(&columns[j].0[t], k)).collect())
            .collect();
        let e_k: Vec<BigInt> = columns.iter().map(|(_, e)| num_traits::pow(e.clone(), k)).collect();
        let l = e_k.iter().fold(BigInt::one(), |acc, e| acc.lcm(e));
        let mut scalars = weights.to_vec();
        scalars.push(strike.clone());
        let (s_nums, sigma) = common_denominator(&scalars);
        let coeffs = (0..r).map(|j| &s_nums[j] * (&l / &e_k[j])).collect();
        Self {
            powers,
            coeffs,
            threshold: &s_nums[r] * &l,
            den: sigma * l,
        }
    }

    fn init(&self) -> Vec<BigInt> {
        vec![BigInt::one(); self.coeffs.len()]
    }
}

impl Integrand for ProductIntegrand {
    type State = Vec<BigInt>;
    type Value = BigInt;

    fn extend(&self, state: &Vec<BigInt>, atom: usize, count: usize) -> Vec<BigInt> {
        if count == 0 {
            return state.clone();
        }
        state
            .iter()
            .zip(&self.powers[atom])
            .map(|(s, p)| s * &p[count])
            .collect()
    }

    fn leaf(&self, state: &Vec<BigInt>) -> BigInt {
        let total: BigInt = self
            .coeffs
            .iter()
            .zip(state)
            .filter(|(c, _)| !c.is_zero())
            .map(|(c, p)| c * p)
            .sum();
        let excess = total - &self.threshold;
        if excess.is_positive() {
            excess
        } else {
            BigInt::zero()
        }
    }
}

/// Runs the integer product path and restores the denominators.
fn product_expectation(
    atom_weights: &[Rational],
    values: &[Vec<Rational>],
    payoff_weights: &[Rational],
    strike: &Rational,
    k: usize,
) -> Expectation {
    let integrand = ProductIntegrand::new(values, payoff_weights, strike, k);
    let (sum, scale, terms) = composition_sum(atom_weights, k, integrand.init(), &integrand);
    Expectation {
        value: Rational::new(sum, scale * &integrand.den),
        terms,
    }
}

/// Evaluates a symmetric payoff on `ω` followed by the chosen atoms.
struct WordIntegrand<'a> {
    payoff: &'a Payoff,
    letters: Vec<LatticeElement>,
}

impl Integrand for WordIntegrand<'_> {
    type State = Vec<LatticeElement>;
    type Value = Rational;

    fn extend(&self, state: &Vec<LatticeElement>, atom: usize, count: usize) -> Vec<LatticeElement> {
        let mut s = state.clone();
        s.extend(std::iter::repeat(self.letters[atom]).take(count));
        s
    }

    fn leaf(&self, state: &Vec<LatticeElement>) -> Rational {
        self.payoff.evaluate(state)
    }
}

fn check_node(payoff: &Payoff, spec: &PolytopeSpec, prefix: &Word, k: usize) -> Result<()> {
    if spec.m() != payoff.m() || prefix.m() != payoff.m() {
        return Err(Error::DimensionMismatch {
            expected: payoff.m(),
            found: spec.m(),
        });
    }
    if prefix.len() + k != payoff.horizon() {
        return Err(Error::DimensionMismatch {
            expected: payoff.horizon() - prefix.len(),
            found: k,
        });
    }
    if !payoff.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if spec.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    Ok(())
}

/// `E_q(F_{ω-})` under the `k`-fold product of a vertex density `q` given by
/// its atoms.
fn vertex_expectation(payoff: &Payoff, vertex: &VertexDensity, prefix: &Word, k: usize) -> Expectation {
    let letters: Vec<LatticeElement> = vertex.atoms().iter().map(|(l, _)| *l).collect();
    let weights: Vec<Rational> = vertex.atoms().iter().map(|(_, w)| w.clone()).collect();
    match payoff.as_european() {
        Some(e) => {
            let restricted = e.restrict(prefix.letters());
            let values: Vec<Vec<Rational>> = letters
                .iter()
                .map(|&l| e.factors().iter().map(|u| u[l].clone()).collect())
                .collect();
            product_expectation(&weights, &values, restricted.weights(), e.strike(), k)
        }
        None => {
            let integrand = WordIntegrand { payoff, letters };
            let (sum, scale, terms) =
                composition_sum(&weights, k, prefix.letters().to_vec(), &integrand);
            Expectation {
                value: sum / Rational::from_integer(scale),
                terms,
            }
        }
    }
}

/// `E_{q*}(F_{ω-})` for a symmetric payoff with `|ω| + k = n`.
///
/// The supervertex atoms are taken along the chain of the decreasing
/// arrangement of `b`, so `b` need not be sorted.
pub fn supervertex_expectation(
    payoff: &Payoff,
    spec: &PolytopeSpec,
    prefix: &Word,
    k: usize,
) -> Result<Expectation> {
    check_node(payoff, spec, prefix, k)?;
    Ok(vertex_expectation(payoff, &spec.supervertex()?, prefix, k))
}

/// `E_{q_*}(F_{ω-})`; refuses when `q_* ∉ P(b)`.
pub fn subvertex_expectation(
    payoff: &Payoff,
    spec: &PolytopeSpec,
    prefix: &Word,
    k: usize,
) -> Result<Expectation> {
    check_node(payoff, spec, prefix, k)?;
    if !spec.subvertex_in_polytope()? {
        return Err(spec.criterion_error());
    }
    Ok(vertex_expectation(payoff, &spec.subvertex()?, prefix, k))
}

/// The numbers defining the minimizer `G` of a European payoff on `P(b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimizerData {
    m: usize,
    /// `β(0) = 1`, `β(i) = b''(i)`.
    beta: Vec<Rational>,
    /// `alpha[j][0] = u_j(ν_0)`, `alpha[j][i] = u_j(ν_i) - u_j(ν_0)`.
    alpha: Vec<Vec<Rational>>,
    weights: Vec<Rational>,
    strike: Rational,
    factors: Vec<LatticeVector>,
}

impl MinimizerData {
    pub fn from_european(payoff: &EuropeanPayoff, spec: &PolytopeSpec) -> Result<Self> {
        let m = payoff.m();
        if spec.m() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: spec.m(),
            });
        }
        if spec.is_empty() {
            return Err(Error::EmptyPolytope);
        }
        let beta = std::iter::once(int(1))
            .chain(spec.b_dprime()[1..].iter().cloned())
            .collect();
        let nus = (0..=m).map(|i| nu(i, m)).collect::<Result<Vec<_>>>()?;
        let alpha = payoff
            .factors()
            .iter()
            .map(|u| {
                let base = u[nus[0]].clone();
                std::iter::once(base.clone())
                    .chain(nus[1..].iter().map(|&l| &u[l] - &base))
                    .collect()
            })
            .collect();
        Ok(Self {
            m,
            beta,
            alpha,
            weights: payoff.weights().to_vec(),
            strike: payoff.strike().clone(),
            factors: payoff.factors().to_vec(),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn alpha(&self) -> &[Vec<Rational>] {
        &self.alpha
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn strike(&self) -> &Rational {
        &self.strike
    }

    fn evaluate(&self, node_weights: Vec<Rational>, k: usize) -> Expectation {
        // Atom i carries the values α_j(i) for every factor j.
        let values: Vec<Vec<Rational>> = (0..=self.m)
            .map(|i| self.alpha.iter().map(|a| a[i].clone()).collect())
            .collect();
        product_expectation(&self.beta, &values, &node_weights, &self.strike, k)
    }
}

/// `G^{(n)}(∅)`, the lower bound for `F_min(Γ)`.
pub fn minimizer_bound(data: &MinimizerData, n: usize) -> Expectation {
    data.evaluate(data.weights.clone(), n)
}

/// `G^{(k)}(ω)` with the per-factor weights `s_j u_j(ω)`.
pub fn minimizer_at_node(data: &MinimizerData, prefix: &Word, k: usize) -> Result<Expectation> {
    if prefix.m() != data.m {
        return Err(Error::DimensionMismatch {
            expected: data.m,
            found: prefix.m(),
        });
    }
    let node_weights = data
        .weights
        .iter()
        .zip(&data.factors)
        .map(|(s, u)| s * prefix.letters().iter().map(|&l| u[l].clone()).product::<Rational>())
        .collect();
    Ok(data.evaluate(node_weights, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lpos::one_step_factor;
    use crate::polytope::make_spec;
    use crate::rational::frac;

    fn crr_payoff(n: usize) -> Payoff {
        let u = one_step_factor(1, &frac(1, 2), &int(2), 1).unwrap();
        Payoff::european(EuropeanPayoff::new(vec![u], vec![int(100)], int(100)).unwrap(), n)
    }

    #[test]
    fn composition_count_matches_binomial() {
        for parts in 1..=5 {
            for total in 0..=7 {
                let all: Vec<_> = Compositions::new(parts, total).collect();
                assert_eq!(all.len() as u64, binomial(total + parts - 1, parts - 1).try_into().unwrap());
                assert!(all.iter().all(|c| c.iter().sum::<usize>() == total));
                let mut dedup = all.clone();
                dedup.sort();
                dedup.dedup();
                assert_eq!(dedup.len(), all.len());
            }
        }
        assert_eq!(Compositions::new(0, 0).count(), 1);
        assert_eq!(Compositions::new(0, 3).count(), 0);
    }

    #[test]
    fn multinomial_small() {
        assert_eq!(multinomial(&[2, 1, 1]), BigInt::from(12));
        assert_eq!(multinomial(&[]), BigInt::one());
        assert_eq!(binomial(54, 4), BigInt::from(316_251));
    }

    #[test]
    fn crr_one_step() {
        let spec = make_spec(vec![frac(-1, 3)]).unwrap();
        let f = crr_payoff(1);
        let e = supervertex_expectation(&f, &spec, &Word::empty(1), 1).unwrap();
        assert_eq!(e.value, frac(100, 3));
        let s = subvertex_expectation(&f, &spec, &Word::empty(1), 1).unwrap();
        assert_eq!(s.value, frac(100, 3));
    }

    #[test]
    fn zero_steps_is_payoff_at_node() {
        let spec = make_spec(vec![frac(-1, 3)]).unwrap();
        let f = crr_payoff(2);
        let w = Word::parse(1, "0 0").unwrap();
        let e = supervertex_expectation(&f, &spec, &w, 0).unwrap();
        assert_eq!(e.value, f.evaluate_word(&w));
        assert_eq!(e.terms, 1);
    }

    #[test]
    fn constant_payoff_has_constant_expectation() {
        let spec = make_spec(vec![frac(-1, 2), frac(-1, 2)]).unwrap();
        let f = Payoff::custom(2, 3, true, |_| frac(7, 2)).unwrap();
        let e = subvertex_expectation(&f, &spec, &Word::empty(2), 3).unwrap();
        assert_eq!(e.value, frac(7, 2));
    }

    #[test]
    fn subvertex_refuses_outside_criterion() {
        let spec = make_spec(vec![frac(1, 2), frac(1, 2)]).unwrap();
        let f = Payoff::custom(2, 1, true, |_| int(1)).unwrap();
        assert!(matches!(
            subvertex_expectation(&f, &spec, &Word::empty(2), 1),
            Err(Error::SubvertexCriterion { .. })
        ));
    }

    #[test]
    fn asymmetric_payoff_rejected() {
        let spec = make_spec(vec![int(0)]).unwrap();
        let f = Payoff::custom(1, 2, false, |w| int(w[0].index() as i64)).unwrap();
        assert_eq!(
            supervertex_expectation(&f, &spec, &Word::empty(1), 2),
            Err(Error::NotSymmetric)
        );
    }

    #[test]
    fn minimizer_without_strike_collapses() {
        let spec = make_spec(vec![frac(-1, 3), frac(1, 5)]).unwrap();
        let u = one_step_factor(2, &frac(1, 2), &int(3), 2).unwrap();
        let e = EuropeanPayoff::new(vec![u], vec![int(1)], int(0)).unwrap();
        let data = MinimizerData::from_european(&e, &spec).unwrap();
        let base: Rational = data
            .beta()
            .iter()
            .zip(&data.alpha()[0])
            .map(|(b, a)| b * a)
            .sum();
        for n in 0..5 {
            assert_eq!(minimizer_bound(&data, n).value, pow(&base, n));
        }
    }

    #[test]
    fn minimizer_at_root_and_leaf() {
        let spec = make_spec(vec![frac(-1, 3)]).unwrap();
        let f = crr_payoff(3);
        let data = MinimizerData::from_european(f.as_european().unwrap(), &spec).unwrap();
        assert_eq!(
            minimizer_at_node(&data, &Word::empty(1), 3).unwrap(),
            minimizer_bound(&data, 3)
        );
        let w = Word::parse(1, "0 1 0").unwrap();
        assert_eq!(minimizer_at_node(&data, &w, 0).unwrap().value, f.evaluate_word(&w));
        assert_eq!(minimizer_bound(&data, 0).value, int(0));
    }
}
