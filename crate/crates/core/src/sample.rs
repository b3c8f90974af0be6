//! Seeded random instances: parameter vectors, ℓ-positive vectors, European
//! payoffs, market models, points of `P(b)` and policies valued in `P(b)`.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::lattice::{LatticeVector, Permutation};
use crate::lp::{solve, Direction, LpProblem};
use crate::lpos::{Basis, EllCoefficients};
use crate::polytope::PolytopeSpec;
use crate::pricing::{Asset, MarketModel};
use crate::rational::{frac, int, Rational};
use crate::tree::{EuropeanPayoff, TreePolicy, Word};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

const DENOMINATORS: [i64; 8] = [1, 2, 3, 4, 5, 6, 8, 12];

fn denominator(rng: &mut SampleRng) -> i64 {
    *DENOMINATORS.choose(rng).expect("nonempty")
}

/// A rational in `[lo, hi]` with a small random denominator.
pub fn rational_in(rng: &mut SampleRng, lo: i64, hi: i64) -> Rational {
    let d = denominator(rng);
    frac(rng.gen_range(lo * d..=hi * d), d)
}

/// A rational in the open interval `(lo, hi)`.
pub fn rational_open(rng: &mut SampleRng, lo: &Rational, hi: &Rational) -> Rational {
    let d = denominator(rng) * 2 + 1;
    let t = frac(rng.gen_range(1..d), d);
    lo + (hi - lo) * t
}

/// `b ∈ [-1, 1]^m`, with occasional ties and boundary values.
pub fn random_b(rng: &mut SampleRng, m: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = (0..m).map(|_| rational_in(rng, -1, 1)).collect();
    if m >= 2 && rng.gen_bool(0.15) {
        let (i, j) = (rng.gen_range(0..m), rng.gen_range(0..m));
        b[i] = b[j].clone();
    }
    if rng.gen_bool(0.1) {
        let i = rng.gen_range(0..m);
        b[i] = if rng.gen_bool(0.5) { int(1) } else { int(-1) };
    }
    b
}

/// `b ∈ [-1, 1]^m` with `Σ b(i) ≤ 2 - m`: `b(i) = -1 + s_i`, `Σ s_i ≤ 2`.
pub fn random_criterion_b(rng: &mut SampleRng, m: usize) -> Vec<Rational> {
    let budget = rational_in(rng, 0, 2);
    split_budget(rng, m, &budget)
}

/// `-1 + s_i` with `s_i > 0` proportional to random weights summing to `budget`.
fn split_budget(rng: &mut SampleRng, m: usize, budget: &Rational) -> Vec<Rational> {
    let w: Vec<Rational> = (0..m).map(|_| rational_in(rng, 1, 4)).collect();
    let total: Rational = w.iter().sum();
    w.into_iter().map(|x| int(-1) + x * budget / &total).collect()
}

/// `u = Σ a_i ℓ_i` with `a_1, …, a_m > 0` and arbitrary `a_0`.
pub fn random_ell_positive(rng: &mut SampleRng, m: usize) -> EllCoefficients {
    let mut a = vec![rational_in(rng, -3, 3)];
    a.extend((0..m).map(|_| rational_open(rng, &Rational::zero(), &int(3))));
    EllCoefficients::new(Basis::Ell, a).expect("valid m")
}

/// A nonnegative ℓ-positive vector: `a_0 ≥ Σ_{i≥1} a_i`.
pub fn random_nonnegative_ell_positive(rng: &mut SampleRng, m: usize) -> LatticeVector {
    let mut a: Vec<Rational> = vec![Rational::zero()];
    a.extend((0..m).map(|_| rational_open(rng, &Rational::zero(), &int(2))));
    a[0] = a[1..].iter().sum::<Rational>() + rational_in(rng, 0, 2);
    EllCoefficients::new(Basis::Ell, a).expect("valid m").to_vector()
}

/// A European payoff with one or two random nonnegative ℓ-positive factors.
pub fn random_european(rng: &mut SampleRng, m: usize) -> EuropeanPayoff {
    let r = rng.gen_range(1..=2);
    let factors = (0..r).map(|_| random_nonnegative_ell_positive(rng, m)).collect();
    let weights = (0..r).map(|_| rational_in(rng, 0, 3)).collect();
    let strike = rational_in(rng, 0, 4);
    EuropeanPayoff::new(factors, weights, strike).expect("valid factors")
}

/// A market with `0 < D_i < R < U_i`: `U = R + h(1 - b)`, `D = R - h(1 + b)`
/// with `h = R·t/2`, `t ∈ (0, 1)`, so that `b(i)` is the sampled value.
pub fn random_market(rng: &mut SampleRng, m: usize, n: usize) -> MarketModel {
    let rate = int(1) + rational_in(rng, 0, 1) / int(4);
    random_market_with_b(rng, m, n, rate, |rng| {
        rational_open(rng, &int(-1), &int(1))
    })
}

/// A market whose `b` satisfies the subvertex criterion, with `|b(i)| < 1`.
pub fn random_criterion_market(rng: &mut SampleRng, m: usize, n: usize) -> MarketModel {
    let rate = int(1) + rational_in(rng, 0, 1) / int(4);
    let budget = rational_open(rng, &Rational::zero(), &int(2));
    let mut it = split_budget(rng, m, &budget).into_iter();
    random_market_with_b(rng, m, n, rate, move |_| it.next().expect("m entries"))
}

fn random_market_with_b(
    rng: &mut SampleRng,
    m: usize,
    n: usize,
    rate: Rational,
    mut draw_b: impl FnMut(&mut SampleRng) -> Rational,
) -> MarketModel {
    let assets = (0..m)
        .map(|_| {
            let b = draw_b(rng);
            let t = rational_open(rng, &Rational::zero(), &int(1));
            let h = &rate * t / int(2);
            Asset {
                s0: rational_in(rng, 1, 20) * int(5),
                up: &rate + &h * (int(1) - &b),
                down: &rate - &h * (int(1) + &b),
            }
        })
        .collect();
    let strike = rational_in(rng, 0, 2) * int(50 * m as i64);
    let mut model = MarketModel::new(n, rate, assets, strike).expect("sampled market is valid");
    if rng.gen_bool(0.3) {
        model.weights = (0..m).map(|_| rational_in(rng, 0, 2)).collect();
    }
    model
}

/// A random density on `Λ` (not necessarily in any `P(b)`).
pub fn random_density(rng: &mut SampleRng, m: usize) -> LatticeVector {
    let raw: Vec<Rational> = (0..1usize << m)
        .map(|_| if rng.gen_bool(0.2) { int(0) } else { rational_in(rng, 1, 4) })
        .collect();
    let total: Rational = raw.iter().sum();
    if total.is_zero() {
        return LatticeVector::constant(m, frac(1, 1 << m)).expect("valid m");
    }
    LatticeVector::new(m, raw.into_iter().map(|x| x / &total).collect()).expect("valid m")
}

/// Vertices of `P(b)` reached by LPs with random objectives (deduplicated).
pub fn random_vertices(rng: &mut SampleRng, spec: &PolytopeSpec, count: usize) -> Result<Vec<LatticeVector>> {
    let m = spec.m();
    let mut out: Vec<LatticeVector> = Vec::new();
    for _ in 0..count {
        let objective = LatticeVector::new(m, (0..1usize << m).map(|_| rational_in(rng, -5, 5)).collect())?;
        if let Some(sol) = solve(&LpProblem {
            spec,
            objective,
            direction: Direction::Maximize,
        })?
        .optimal()
        {
            if !out.contains(&sol.argpoint) {
                out.push(sol.argpoint);
            }
        }
    }
    Ok(out)
}

/// A random convex combination of the given points.
pub fn random_combination(rng: &mut SampleRng, points: &[LatticeVector]) -> LatticeVector {
    let raw: Vec<Rational> = points.iter().map(|_| rational_in(rng, 0, 3)).collect();
    let total: Rational = raw.iter().sum();
    if total.is_zero() {
        return points[rng.gen_range(0..points.len())].clone();
    }
    points
        .iter()
        .zip(raw)
        .fold(LatticeVector::zeros(points[0].m()).expect("valid m"), |acc, (p, w)| {
            &acc + &p.scale(&(w / &total))
        })
}

/// A point of `P(b)`; `None` when `P(b)` is empty.
pub fn random_point(rng: &mut SampleRng, spec: &PolytopeSpec) -> Result<Option<LatticeVector>> {
    let vertices = random_vertices(rng, spec, 4)?;
    if vertices.is_empty() {
        return Ok(None);
    }
    Ok(Some(random_combination(rng, &vertices)))
}

/// A tabulated policy on a tree of height `n` valued in the convex hull of
/// `pool ⊆ P(b)`.
pub fn random_policy(rng: &mut SampleRng, pool: &[LatticeVector], n: usize) -> TreePolicy {
    let m = pool[0].m();
    let levels = (0..n)
        .map(|depth| {
            (0..1usize << (m * depth))
                .map(|_| {
                    if rng.gen_bool(0.5) {
                        pool[rng.gen_range(0..pool.len())].clone()
                    } else {
                        random_combination(rng, pool)
                    }
                })
                .collect()
        })
        .collect();
    TreePolicy::Table(levels)
}

/// A random word of length `len`.
pub fn random_word(rng: &mut SampleRng, m: usize, len: usize) -> Word {
    Word::from_index(m, len, rng.gen_range(0..1usize << (m * len)))
}

/// A uniformly random permutation of `{1, …, m}`.
pub fn random_permutation(rng: &mut SampleRng, m: usize) -> Permutation {
    let mut images: Vec<usize> = (1..=m).collect();
    images.shuffle(rng);
    Permutation::new(images).expect("shuffled identity")
}
