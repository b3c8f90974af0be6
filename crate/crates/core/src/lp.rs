//! Exact linear optimisation over `P(b)`.
//!
//! Two-phase primal simplex on the standard-form system
//! `⟨ℓ_0, x⟩ = 1, ⟨ℓ_i, x⟩ = b(i), x ≥ 0` with Bland's rule, in exact
//! rational arithmetic. The optimal basis yields a dual vector which is
//! returned as a checkable optimality certificate.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{ell, LatticeVector};
use crate::lpos::truncate;
use crate::polytope::PolytopeSpec;
use crate::rational::Rational;

pub const DEFAULT_LP_MAX_M: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug)]
pub struct LpProblem<'a> {
    pub spec: &'a PolytopeSpec,
    pub objective: LatticeVector,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub argpoint: LatticeVector,
    /// Basic columns (lattice indices) of the optimal basis.
    pub basis: Vec<usize>,
    /// Multipliers `y_0, …, y_m` for the rows `⟨ℓ_i, x⟩ = b(i)`.
    pub dual: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Infeasible,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            Self::Optimal(s) => Some(s),
            Self::Infeasible => None,
        }
    }
}

impl LpSolution {
    /// Checks the certificate exactly: primal feasibility, dual feasibility
    /// of every reduced cost, complementary slackness and equal objective
    /// values.
    pub fn verify(&self, problem: &LpProblem<'_>) -> bool {
        let spec = problem.spec;
        let m = spec.m();
        let Ok(true) = spec.contains_primal(&self.argpoint) else {
            return false;
        };
        let Ok(primal) = problem.objective.dot(&self.argpoint) else {
            return false;
        };
        if primal != self.value || self.dual.len() != m + 1 {
            return false;
        }
        let rows: Vec<LatticeVector> = (0..=m).map(|i| ell(i, m).expect("valid m")).collect();
        let dual_value: Rational = (0..=m).map(|i| &self.dual[i] * spec.b_ext(i)).sum();
        if dual_value != self.value {
            return false;
        }
        for (lambda, c) in problem.objective.iter() {
            let ya: Rational = (0..=m).map(|i| &self.dual[i] * &rows[i][lambda]).sum();
            let reduced = c - ya;
            let feasible = match problem.direction {
                Direction::Maximize => !reduced.is_positive(),
                Direction::Minimize => !reduced.is_negative(),
            };
            if !feasible {
                return false;
            }
            if !self.argpoint[lambda].is_zero() && !reduced.is_zero() {
                return false;
            }
        }
        true
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpConfig {
    pub max_m: usize,
}

impl Default for LpConfig {
    fn default() -> Self {
        Self {
            max_m: DEFAULT_LP_MAX_M,
        }
    }
}

pub fn solve(problem: &LpProblem<'_>) -> Result<LpOutcome> {
    solve_with(problem, &LpConfig::default())
}

pub fn solve_with(problem: &LpProblem<'_>, config: &LpConfig) -> Result<LpOutcome> {
    let spec = problem.spec;
    let m = spec.m();
    if m > config.max_m {
        return Err(Error::LpCapExceeded {
            m,
            cap: config.max_m,
        });
    }
    if problem.objective.m() != m {
        return Err(Error::DimensionMismatch {
            expected: 1 << m,
            found: problem.objective.len(),
        });
    }
    // Internally always maximise.
    let cost: Vec<Rational> = match problem.direction {
        Direction::Maximize => problem.objective.entries().to_vec(),
        Direction::Minimize => problem.objective.entries().iter().map(|c| -c).collect(),
    };
    let Some(mut tableau) = Tableau::phase_one(spec) else {
        return Ok(LpOutcome::Infeasible);
    };
    tableau.optimize(&cost, tableau.num_vars);
    let (x, value) = tableau.primal(&cost);
    let dual = tableau.dual(&cost);
    let (value, dual) = match problem.direction {
        Direction::Maximize => (value, dual),
        Direction::Minimize => (-value, dual.into_iter().map(|y| -y).collect()),
    };
    Ok(LpOutcome::Optimal(LpSolution {
        value,
        argpoint: LatticeVector::new(m, x)?,
        basis: tableau.basis.iter().copied().filter(|&j| j < tableau.num_vars).collect(),
        dual,
    }))
}

/// Dense tableau `B^{-1}[A | I | rhs]`. Columns `0..n` are the lattice
/// variables, `n..n+rows` the artificials (kept so that `B^{-1}` can be read
/// off for the dual).
struct Tableau {
    num_vars: usize,
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// `+1`/`-1` sign applied to each original row to make its rhs nonnegative.
    row_sign: Vec<Rational>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.num_vars + self.rows.len()
    }

    fn rhs(&self, r: usize) -> &Rational {
        self.rows[r].last().expect("nonempty row")
    }

    /// Builds the phase-one tableau and drives the artificials out. Returns
    /// `None` when the system is infeasible.
    fn phase_one(spec: &PolytopeSpec) -> Option<Self> {
        let m = spec.m();
        let n = 1usize << m;
        let k = m + 1;
        let mut rows = Vec::with_capacity(k);
        let mut row_sign = Vec::with_capacity(k);
        for i in 0..=m {
            let l = ell(i, m).expect("valid m");
            let rhs = spec.b_ext(i);
            let sign = if rhs.is_negative() { -Rational::one() } else { Rational::one() };
            let mut row: Vec<Rational> = l.entries().iter().map(|a| a * &sign).collect();
            row.extend((0..k).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
            row.push(rhs * &sign);
            rows.push(row);
            row_sign.push(sign);
        }
        let mut t = Self {
            num_vars: n,
            rows,
            basis: (n..n + k).collect(),
            row_sign,
        };
        // Maximise -Σ artificials.
        let cost: Vec<Rational> = (0..n + k)
            .map(|j| if j >= n { -Rational::one() } else { Rational::zero() })
            .collect();
        t.optimize(&cost, n + k);
        let infeasibility: Rational = t
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &j)| j >= n)
            .map(|(r, _)| t.rhs(r).clone())
            .sum();
        if infeasibility.is_positive() {
            return None;
        }
        // Pivot degenerate artificials out of the basis. The rows `ℓ_i` are
        // linearly independent so a pivot column always exists.
        for r in 0..t.rows.len() {
            if t.basis[r] >= n {
                let col = (0..n)
                    .find(|&j| !t.rows[r][j].is_zero())
                    .expect("constraint rows are independent");
                t.pivot(r, col);
            }
        }
        Some(t)
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        for v in self.rows[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        self.basis[r] = col;
    }

    fn reduced_cost(&self, cost: &[Rational], j: usize) -> Rational {
        let mut d = cost[j].clone();
        for (r, &bj) in self.basis.iter().enumerate() {
            let a = &self.rows[r][j];
            if !a.is_zero() && !cost[bj].is_zero() {
                d -= &cost[bj] * a;
            }
        }
        d
    }

    /// Maximises `cost · x` over columns `0..allowed`, Bland's rule.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) {
        loop {
            let entering = (0..allowed)
                .filter(|j| !self.basis.contains(j))
                .find(|&j| self.reduced_cost(cost, j).is_positive());
            let Some(col) = entering else {
                return;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                let better = match &leaving {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leaving = Some((r, ratio));
                }
            }
            // P(b) is bounded, so an improving column always has a ratio.
            let (r, _) = leaving.expect("bounded polytope");
            self.pivot(r, col);
        }
    }

    fn primal(&self, cost: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut x = vec![Rational::zero(); self.num_vars];
        let mut value = Rational::zero();
        for (r, &bj) in self.basis.iter().enumerate() {
            if bj < self.num_vars {
                x[bj] = self.rhs(r).clone();
                value += &cost[bj] * self.rhs(r);
            }
        }
        (x, value)
    }

    /// `y = c_B B^{-1}` mapped back to the unsigned original rows.
    fn dual(&self, cost: &[Rational]) -> Vec<Rational> {
        let k = self.rows.len();
        debug_assert_eq!(self.width() + 1, self.rows[0].len());
        (0..k)
            .map(|i| {
                let col = self.num_vars + i;
                let y: Rational = self
                    .basis
                    .iter()
                    .enumerate()
                    .filter(|(_, &bj)| bj < self.num_vars)
                    .map(|(r, &bj)| &cost[bj] * &self.rows[r][col])
                    .sum();
                y * &self.row_sign[i]
            })
            .collect()
    }
}

/// Both sides of `min_{x∈P(b)} ⟨u^+, x⟩ ≥ ⟨u^+, q_*⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerGap {
    pub lp_min: Rational,
    pub subvertex_bound: Rational,
}

/// Solves the minimisation of `⟨u^+, ·⟩` and evaluates the subvertex bound.
/// `u` must be ℓ-positive; the inequality `lp_min ≥ bound ≥ 0` is checked.
pub fn minimize_lower_gap(spec: &PolytopeSpec, u: &LatticeVector) -> Result<LowerGap> {
    if crate::lpos::is_ell_positive(u).is_none() {
        return Err(Error::InvalidPayoff("u is not ℓ-positive".into()));
    }
    let objective = truncate(u);
    let subvertex_bound = spec.subvertex()?.expectation(&objective);
    let outcome = solve(&LpProblem {
        spec,
        objective,
        direction: Direction::Minimize,
    })?;
    let lp_min = outcome.optimal().ok_or(Error::EmptyPolytope)?.value;
    if lp_min < subvertex_bound || subvertex_bound.is_negative() {
        return Err(Error::InvariantViolated(format!(
            "subvertex bound {subvertex_bound} vs LP minimum {lp_min}"
        )));
    }
    Ok(LowerGap {
        lp_min,
        subvertex_bound,
    })
}
