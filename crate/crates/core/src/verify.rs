//! Seeded randomized cross-checks of the closed-form results against the
//! exact LP and tree oracles. Stops at the first counterexample.

use crate::error::Result;
use crate::fast_bounds::{minimizer_bound, subvertex_expectation, supervertex_expectation, MinimizerData};
use crate::lattice::{LatticeElement, LatticeVector};
use crate::lp::{solve, Direction, LpProblem};
use crate::lpos::truncate;
use crate::polytope::PolytopeSpec;
use crate::pricing::{asset_factors, payoff, spec_from_market};
use crate::rational::{format_rational, frac, Rational};
use crate::sample;
use crate::tree::{tree_extremum, TreeConfig, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub m_max: usize,
    pub n_max: usize,
    pub cases: usize,
    pub seed: u64,
    pub max_bits: usize,
    /// Test hook: perturb the supervertex before comparing it to the LP.
    pub corrupt_supervertex: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            m_max: 3,
            n_max: 4,
            cases: 100,
            seed: 42,
            max_bits: crate::tree::DEFAULT_MAX_ORACLE_BITS,
            corrupt_supervertex: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    SupervertexMaximum,
    SubvertexMinimum,
    LpCertificate,
    FastMaxEqualsTree,
    FastMinEqualsTree,
    MinimizerSandwich,
    Martingale,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::SupervertexMaximum,
        Check::SubvertexMinimum,
        Check::LpCertificate,
        Check::FastMaxEqualsTree,
        Check::FastMinEqualsTree,
        Check::MinimizerSandwich,
        Check::Martingale,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::SupervertexMaximum => "supervertex_maximum",
            Self::SubvertexMinimum => "subvertex_minimum",
            Self::LpCertificate => "lp_certificate",
            Self::FastMaxEqualsTree => "fast_max_equals_tree",
            Self::FastMinEqualsTree => "fast_min_equals_tree",
            Self::MinimizerSandwich => "minimizer_sandwich",
            Self::Martingale => "martingale",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            Self::SupervertexMaximum => "max over P(b) of <u+, x> equals <u+, q*>",
            Self::SubvertexMinimum => "min over P(b) of <u+, x> >= <u+, q_*>, with equality when sum b <= 2 - m",
            Self::LpCertificate => "every LP optimum carries a valid dual certificate",
            Self::FastMaxEqualsTree => "composition sum at q* equals the per-node LP tree maximum",
            Self::FastMinEqualsTree => "composition sum at q_* equals the per-node LP tree minimum when sum b <= 2 - m",
            Self::MinimizerSandwich => "minimizer bound <= tree minimum <= tree maximum",
            Self::Martingale => "<u_i, q*> = R for every asset, and <u_i, q_*> = R when q_* is in P(b)",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckCount {
    pub check: Check,
    pub passed: u64,
}

/// The first failing instance, with rationals as `p/q` strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub check: Check,
    pub case: usize,
    pub m: usize,
    pub n: usize,
    pub b: Vec<String>,
    pub u: Option<Vec<String>>,
    pub expected: String,
    pub found: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub cases_run: usize,
    pub checks: Vec<CheckCount>,
    pub counterexample: Option<Counterexample>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(format_rational).collect()
}

struct Runner<'a> {
    config: &'a VerifyConfig,
    counts: Vec<u64>,
    counterexample: Option<Counterexample>,
}

struct Instance<'a> {
    case: usize,
    m: usize,
    n: usize,
    b: &'a [Rational],
    u: Option<&'a LatticeVector>,
}

impl Runner<'_> {
    /// Records one comparison; returns `false` once a counterexample exists.
    fn record(&mut self, check: Check, ok: bool, inst: &Instance<'_>, expected: &Rational, found: &Rational) -> bool {
        if ok {
            self.counts[Check::ALL.iter().position(|&c| c == check).expect("listed")] += 1;
            return true;
        }
        self.counterexample = Some(Counterexample {
            check,
            case: inst.case,
            m: inst.m,
            n: inst.n,
            b: strings(inst.b),
            u: inst.u.map(|u| strings(u.entries())),
            expected: format_rational(expected),
            found: format_rational(found),
        });
        false
    }

    fn supervertex_vector(&self, spec: &PolytopeSpec) -> Result<LatticeVector> {
        let mut q = spec.supervertex()?.to_vector();
        if self.config.corrupt_supervertex {
            let bottom = LatticeElement::zero(spec.m())?;
            let shifted = &q[bottom] + frac(1, 8);
            q.set(bottom, shifted);
        }
        Ok(q)
    }

    /// Vertex checks on a single `(b, u)` pair.
    fn polytope_case(&mut self, case: usize, rng: &mut sample::SampleRng, m: usize) -> Result<bool> {
        let b = if case % 2 == 0 {
            sample::random_b(rng, m)
        } else {
            sample::random_criterion_b(rng, m)
        };
        let spec = PolytopeSpec::new(b.clone())?;
        let u = sample::random_ell_positive(rng, m).to_vector();
        let uplus = truncate(&u);
        let inst = Instance {
            case,
            m,
            n: 1,
            b: &b,
            u: Some(&u),
        };
        for direction in [Direction::Maximize, Direction::Minimize] {
            let problem = LpProblem {
                spec: &spec,
                objective: uplus.clone(),
                direction,
            };
            let sol = solve(&problem)?.optimal().ok_or(crate::Error::EmptyPolytope)?;
            let zero = Rational::from_integer(0.into());
            if !self.record(Check::LpCertificate, sol.verify(&problem), &inst, &zero, &zero) {
                return Ok(false);
            }
            let ok = match direction {
                Direction::Maximize => {
                    let expected = uplus.dot(&self.supervertex_vector(&spec)?)?;
                    self.record(Check::SupervertexMaximum, sol.value == expected, &inst, &expected, &sol.value)
                }
                Direction::Minimize => {
                    let bound = uplus.dot(&spec.subvertex()?.to_vector())?;
                    let ok = if spec.subvertex_in_polytope()? {
                        sol.value == bound
                    } else {
                        sol.value >= bound
                    };
                    self.record(Check::SubvertexMinimum, ok, &inst, &bound, &sol.value)
                }
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Tree checks on a random market model.
    fn tree_case(&mut self, case: usize, rng: &mut sample::SampleRng, m: usize, n: usize) -> Result<bool> {
        let model = if case % 2 == 0 {
            sample::random_market(rng, m, n)
        } else {
            sample::random_criterion_market(rng, m, n)
        };
        let spec = spec_from_market(&model)?;
        let f = payoff(&model)?;
        let b = spec.b().to_vec();
        let inst = Instance {
            case,
            m,
            n,
            b: &b,
            u: None,
        };

        let q_star = self.supervertex_vector(&spec)?;
        let q_sub = spec.subvertex()?.to_vector();
        let criterion = spec.subvertex_in_polytope()?;
        for u in asset_factors(&model)? {
            let ok = u.dot(&q_star)? == model.rate;
            let found = u.dot(&q_star)?;
            if !self.record(Check::Martingale, ok, &inst, &model.rate, &found) {
                return Ok(false);
            }
            if criterion {
                let found = u.dot(&q_sub)?;
                if !self.record(Check::Martingale, found == model.rate, &inst, &model.rate, &found) {
                    return Ok(false);
                }
            }
        }

        let config = TreeConfig {
            max_bits: self.config.max_bits,
        };
        let root = Word::empty(m);
        let tree_max = tree_extremum(&f, &spec, Direction::Maximize, &config)?.value;
        let tree_min = tree_extremum(&f, &spec, Direction::Minimize, &config)?.value;
        let fast_max = supervertex_expectation(&f, &spec, &root, n)?.value;
        if !self.record(Check::FastMaxEqualsTree, fast_max == tree_max, &inst, &tree_max, &fast_max) {
            return Ok(false);
        }
        if criterion {
            let fast_min = subvertex_expectation(&f, &spec, &root, n)?.value;
            if !self.record(Check::FastMinEqualsTree, fast_min == tree_min, &inst, &tree_min, &fast_min) {
                return Ok(false);
            }
        }
        let data = MinimizerData::from_european(f.as_european().expect("european"), &spec)?;
        let bound = minimizer_bound(&data, n).value;
        let ok = bound <= tree_min && tree_min <= tree_max;
        Ok(self.record(Check::MinimizerSandwich, ok, &inst, &tree_min, &bound))
    }
}

/// Runs `config.cases` seeded instances cycling through `m = 1..=m_max` and
/// `n = 1..=n_max` (shrinking `n` to respect the oracle cap).
pub fn run(config: &VerifyConfig) -> Result<VerifyReport> {
    let mut runner = Runner {
        config,
        counts: vec![0; Check::ALL.len()],
        counterexample: None,
    };
    let mut rng = sample::rng(config.seed);
    let m_max = config.m_max.max(1);
    let n_max = config.n_max.max(1);
    let mut cases_run = 0;
    for case in 0..config.cases {
        let m = 1 + case % m_max;
        crate::lattice::check_m(m)?;
        let mut n = 1 + (case / m_max) % n_max;
        while n > 1 && m * n > config.max_bits {
            n -= 1;
        }
        cases_run += 1;
        if !runner.polytope_case(case, &mut rng, m)? {
            break;
        }
        if m * n <= config.max_bits && !runner.tree_case(case, &mut rng, m, n)? {
            break;
        }
    }
    Ok(VerifyReport {
        cases_run,
        checks: Check::ALL
            .iter()
            .zip(runner.counts)
            .map(|(&check, passed)| CheckCount { check, passed })
            .collect(),
        counterexample: runner.counterexample,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = run(&VerifyConfig {
            m_max: 2,
            n_max: 2,
            cases: 6,
            ..VerifyConfig::default()
        })
        .unwrap();
        assert!(report.passed(), "{:?}", report.counterexample);
        assert_eq!(report.cases_run, 6);
        assert!(report.checks.iter().all(|c| c.passed > 0 || c.check == Check::FastMinEqualsTree));
    }

    #[test]
    fn zero_cases_is_vacuous() {
        let report = run(&VerifyConfig {
            cases: 0,
            ..VerifyConfig::default()
        })
        .unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().all(|c| c.passed == 0));
    }

    #[test]
    fn corrupted_supervertex_is_caught() {
        let report = run(&VerifyConfig {
            cases: 20,
            corrupt_supervertex: true,
            ..VerifyConfig::default()
        })
        .unwrap();
        let cx = report.counterexample.expect("corruption must be detected");
        assert!(cx.u.is_some() || cx.check != Check::SupervertexMaximum);
    }
}
