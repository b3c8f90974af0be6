//! Acceptance gate: one PASS/FAIL line per criterion, exact comparisons.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mb_core::fast_bounds::{
    binomial, minimizer_bound, subvertex_expectation, supervertex_expectation, MinimizerData,
};
use mb_core::lattice::{c_vector, mu};
use mb_core::linalg::{ell_matrix, ell_prime_matrix, ell_prime_transition, Matrix};
use mb_core::lp::{solve, Direction, LpProblem};
use mb_core::lpos::truncate;
use mb_core::pricing::{asset_factors, payoff, price_interval, spec_from_market, Asset, MarketModel};
use mb_core::rational::{frac, int, pow, Rational};
use mb_core::sample;
use mb_core::tree::{tree_extremum, TreeConfig, Word};
use mb_core::PolytopeSpec;

type Outcome = Result<String, String>;

fn lp_value(spec: &PolytopeSpec, objective: &mb_core::LatticeVector, direction: Direction) -> Rational {
    solve(&LpProblem {
        spec,
        objective: objective.clone(),
        direction,
    })
    .expect("lp runs")
    .optimal()
    .expect("nonempty polytope")
    .value
}

fn criterion_1() -> Outcome {
    let mut r = sample::rng(1);
    let mut checked = 0;
    for m in 1..=4 {
        for _ in 0..200 {
            let spec = PolytopeSpec::new(sample::random_b(&mut r, m)).unwrap();
            let uplus = truncate(&sample::random_ell_positive(&mut r, m).to_vector());
            let lp = lp_value(&spec, &uplus, Direction::Maximize);
            let closed = uplus.dot(&spec.supervertex().unwrap().to_vector()).unwrap();
            if lp != closed {
                return Err(format!("m={m} b={:?}: LP max {lp} != <u+, q*> {closed}", spec.b()));
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs, LP max == <u+, q*>"))
}

fn criterion_2() -> Outcome {
    let mut r = sample::rng(2);
    let (mut checked, mut equalities) = (0, 0);
    for m in 1..=4 {
        let mut in_region = 0;
        for s in 0..200 {
            let b = if s % 4 == 0 {
                sample::random_criterion_b(&mut r, m)
            } else {
                sample::random_b(&mut r, m)
            };
            let spec = PolytopeSpec::new(b).unwrap();
            let uplus = truncate(&sample::random_ell_positive(&mut r, m).to_vector());
            let lp = lp_value(&spec, &uplus, Direction::Minimize);
            let bound = uplus.dot(&spec.subvertex().unwrap().to_vector()).unwrap();
            if lp < bound {
                return Err(format!("m={m} b={:?}: LP min {lp} < <u+, q_*> {bound}", spec.b()));
            }
            if spec.subvertex_in_polytope().unwrap() {
                in_region += 1;
                if lp != bound {
                    return Err(format!("m={m} b={:?}: LP min {lp} != <u+, q_*> {bound}", spec.b()));
                }
                equalities += 1;
            }
            checked += 1;
        }
        if in_region < 50 {
            return Err(format!("m={m}: only {in_region} samples in the criterion region"));
        }
    }
    Ok(format!("{checked} pairs, {equalities} exact equalities in the criterion region"))
}

struct TreeInstance {
    m: usize,
    n: usize,
    model: MarketModel,
}

fn tree_instances() -> Vec<TreeInstance> {
    let mut r = sample::rng(3);
    let mut out = Vec::new();
    for (m, n) in [(1, 6), (2, 4), (3, 3)] {
        for s in 0..25 {
            let model = if s % 2 == 0 {
                sample::random_market(&mut r, m, n)
            } else {
                sample::random_criterion_market(&mut r, m, n)
            };
            out.push(TreeInstance { m, n, model });
        }
    }
    out
}

fn criteria_3_and_4() -> (Outcome, Outcome) {
    let config = TreeConfig::default();
    let (mut max_eq, mut min_eq, mut sandwiches) = (0, 0, 0);
    let mut fail3 = None;
    let mut fail4 = None;
    for inst in tree_instances() {
        let spec = spec_from_market(&inst.model).unwrap();
        let f = payoff(&inst.model).unwrap();
        let root = Word::empty(inst.m);
        let tmax = tree_extremum(&f, &spec, Direction::Maximize, &config).unwrap().value;
        let tmin = tree_extremum(&f, &spec, Direction::Minimize, &config).unwrap().value;
        let fmax = supervertex_expectation(&f, &spec, &root, inst.n).unwrap().value;
        if fmax == tmax {
            max_eq += 1;
        } else if fail3.is_none() {
            fail3 = Some(format!("(m,n)=({},{}) b={:?}: fast {fmax} != tree {tmax}", inst.m, inst.n, spec.b()));
        }
        if spec.subvertex_in_polytope().unwrap() {
            let fmin = subvertex_expectation(&f, &spec, &root, inst.n).unwrap().value;
            if fmin == tmin {
                min_eq += 1;
            } else if fail3.is_none() {
                fail3 = Some(format!("(m,n)=({},{}) b={:?}: fast min {fmin} != tree {tmin}", inst.m, inst.n, spec.b()));
            }
        }
        let data = MinimizerData::from_european(f.as_european().unwrap(), &spec).unwrap();
        let g = minimizer_bound(&data, inst.n).value;
        if g <= tmin && tmin <= tmax && tmax == fmax {
            sandwiches += 1;
        } else if fail4.is_none() {
            fail4 = Some(format!("(m,n)=({},{}) b={:?}: G={g} min={tmin} max={tmax}", inst.m, inst.n, spec.b()));
        }
    }
    (
        fail3.map_or_else(|| Ok(format!("75 models, {max_eq} max equalities, {min_eq} min equalities")), Err),
        fail4.map_or_else(|| Ok(format!("{sandwiches} models with G <= F_min <= F_max")), Err),
    )
}

/// Cox-Ross-Rubinstein closed form, written out independently.
fn crr_oracle(n: usize) -> Rational {
    let p = frac(1, 3);
    let q = int(1) - &p;
    (0..=n)
        .map(|k| {
            // k up moves, each with probability p: S0 · 2^k · 2^{-(n-k)}.
            let s = int(100) * pow(&int(2), k) / pow(&int(2), n - k);
            let payoff = (s - int(100)).max(int(0));
            Rational::from_integer(binomial(n, k)) * pow(&p, k) * pow(&q, n - k) * payoff
        })
        .sum()
}

fn criterion_5() -> Outcome {
    for n in 1..=10 {
        let model = MarketModel::new(
            n,
            int(1),
            vec![Asset {
                s0: int(100),
                down: frac(1, 2),
                up: int(2),
            }],
            int(100),
        )
        .unwrap();
        let p = price_interval(&model).unwrap();
        let oracle = crr_oracle(n);
        if p.width() != int(0) || p.f_max != oracle {
            return Err(format!("n={n}: [{}, {}] vs CRR {oracle}", p.f_min, p.f_max));
        }
    }
    Ok(format!("n=1..10 width 0, n=1 price {}", crr_oracle(1)))
}

fn golden(rows: &[&str]) -> Matrix {
    let parsed: Vec<Vec<Rational>> = rows
        .iter()
        .map(|r| {
            r.split_whitespace()
                .map(|t| match t {
                    "-" => int(-1),
                    t => int(t.parse().unwrap()),
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(parsed).unwrap()
}

fn criterion_6() -> Outcome {
    let l = golden(&[
        "1 1 1 1 1 1 1 1 1 1 1 1 1 1 1 1",
        "1 1 1 1 1 1 1 1 - - - - - - - -",
        "1 1 1 1 - - - - 1 1 1 1 - - - -",
        "1 1 - - 1 1 - - 1 1 - - 1 1 - -",
        "1 - 1 - 1 - 1 - 1 - 1 - 1 - 1 -",
    ]);
    let l_prime = golden(&[
        "0 0 0 0 0 0 0 0 1 1 1 1 1 1 1 1",
        "0 0 0 0 1 1 1 1 - - - - 0 0 0 0",
        "0 0 1 1 - - 0 0 0 0 1 1 - - 0 0",
        "0 1 - 0 0 1 - 0 0 1 - 0 0 1 - 0",
        "1 0 1 0 1 0 1 0 1 0 1 0 1 0 1 0",
    ]);
    let t = golden(&[
        "1 - 0 0 0",
        "0 1 - 0 0",
        "0 0 1 - 0",
        "0 0 0 1 -",
        "1 0 0 0 1",
    ])
    .scale(&frac(1, 2));
    let t_inv = golden(&[
        "1 1 1 1 1",
        "- 1 1 1 1",
        "- - 1 1 1",
        "- - - 1 1",
        "- - - - 1",
    ]);
    let gen_t = ell_prime_transition(4).unwrap();
    if ell_matrix(4).unwrap() != l {
        return Err("L differs".into());
    }
    if ell_prime_matrix(4).unwrap() != l_prime {
        return Err("L' differs".into());
    }
    if gen_t != t {
        return Err("T differs".into());
    }
    if gen_t.inverse() != Some(t_inv) {
        return Err("T^-1 differs".into());
    }
    if &gen_t * &l != l_prime {
        return Err("T L != L'".into());
    }
    for i in 0..=4 {
        let c = c_vector(mu(i, 4).unwrap());
        let e: Vec<i8> = (0..=4).map(|j| i8::from(i == j)).collect();
        if c != e {
            return Err(format!("c_mu_{i} = {c:?}"));
        }
    }
    Ok("L, L', T, T^-1 match entry for entry, c_mu_i = e_i".into())
}

fn criterion_7() -> Outcome {
    let mut r = sample::rng(7);
    let (mut checked, mut sub_checked) = (0, 0);
    for s in 0..100 {
        let m = 1 + s % 4;
        let model = if s % 2 == 0 {
            sample::random_market(&mut r, m, 1)
        } else {
            sample::random_criterion_market(&mut r, m, 1)
        };
        let spec = spec_from_market(&model).unwrap();
        let q_star = spec.supervertex().unwrap().to_vector();
        let q_sub = spec.subvertex().unwrap().to_vector();
        let criterion = spec.subvertex_in_polytope().unwrap();
        for (i, u) in asset_factors(&model).unwrap().iter().enumerate() {
            let v = u.dot(&q_star).unwrap();
            if v != model.rate {
                return Err(format!("model {s} asset {}: <u, q*> = {v}, R = {}", i + 1, model.rate));
            }
            if criterion {
                let v = u.dot(&q_sub).unwrap();
                if v != model.rate {
                    return Err(format!("model {s} asset {}: <u, q_*> = {v}, R = {}", i + 1, model.rate));
                }
                sub_checked += 1;
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} models, {sub_checked} subvertex checks"))
}

fn criterion_8() -> Outcome {
    let rate = int(1);
    let b = [frac(1, 2), frac(1, 5), frac(-1, 7), frac(-2, 3)];
    // U = R + h(1 - b), D = R - h(1 + b) with h = 1/4 reproduces b exactly.
    let h = frac(1, 4);
    let assets = b
        .iter()
        .enumerate()
        .map(|(i, bi)| Asset {
            s0: int(20 + 10 * i as i64),
            up: &rate + &h * (int(1) - bi),
            down: &rate - &h * (int(1) + bi),
        })
        .collect();
    let model = MarketModel::new(50, rate, assets, int(100)).unwrap();
    let spec = spec_from_market(&model).unwrap();
    if spec.b() != b || !spec.b_prime().iter().all(|x| *x > int(0)) {
        return Err(format!("setup: b={:?} b'={:?}", spec.b(), spec.b_prime()));
    }
    let f = payoff(&model).unwrap();
    let start = Instant::now();
    let e = supervertex_expectation(&f, &spec, &Word::empty(4), 50).unwrap();
    let elapsed = start.elapsed();
    if e.terms != 316_251 {
        return Err(format!("{} terms", e.terms));
    }
    if elapsed >= Duration::from_secs(10) {
        return Err(format!("{elapsed:.2?}"));
    }
    Ok(format!("{} terms in {elapsed:.2?}", e.terms))
}

fn main() -> ExitCode {
    let (c3, c4) = criteria_3_and_4();
    let results = [
        ("supervertex maximality", criterion_1()),
        ("subvertex minimality and bound", criterion_2()),
        ("fast formula equals exponential tree", c3),
        ("minimizer sandwich", c4),
        ("CRR degeneration", criterion_5()),
        ("golden matrices", criterion_6()),
        ("martingale property", criterion_7()),
        ("complexity budget", criterion_8()),
    ];
    let mut all = true;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                all = false;
                println!("criterion {}: FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
