//! The multi-asset binomial market: `m` assets moving independently up by
//! `U_i` or down by `D_i` each step, a riskless growth factor `R`, and a
//! basket call `(Σ_i w_i S_i(n) - C)^+`.

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::fast_bounds::{
    minimizer_at_node, minimizer_bound, subvertex_expectation, supervertex_expectation,
    MinimizerData,
};
use crate::lattice::check_m;
use crate::lpos::one_step_factor;
use crate::polytope::{PolytopeSpec, VertexDensity};
use crate::rational::{int, pow, Rational};
use crate::tree::{EuropeanPayoff, Payoff, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Asset {
    pub s0: Rational,
    pub down: Rational,
    pub up: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarketModel {
    pub horizon: usize,
    pub rate: Rational,
    pub assets: Vec<Asset>,
    pub strike: Rational,
    pub weights: Vec<Rational>,
    /// Multiply reported values by `R^{-k}` for `k` remaining steps.
    pub discount: bool,
}

impl MarketModel {
    /// A model with unit portfolio weights and no discounting.
    pub fn new(horizon: usize, rate: Rational, assets: Vec<Asset>, strike: Rational) -> Result<Self> {
        let weights = vec![int(1); assets.len()];
        let model = Self {
            horizon,
            rate,
            assets,
            strike,
            weights,
            discount: false,
        };
        model.validate()?;
        Ok(model)
    }

    pub fn m(&self) -> usize {
        self.assets.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.assets.is_empty() {
            return Err(Error::InvalidMarket("at least one asset is required".into()));
        }
        check_m(self.m())?;
        if self.rate < int(1) {
            return Err(Error::InvalidMarket(format!("R = {} must satisfy R ≥ 1", self.rate)));
        }
        for (i, a) in self.assets.iter().enumerate() {
            let i = i + 1;
            if !a.s0.is_positive() {
                return Err(Error::InvalidMarket(format!("S0 of asset {i} must be > 0")));
            }
            if !(a.down.is_positive() && a.down < self.rate && self.rate < a.up) {
                return Err(Error::InvalidMarket(format!(
                    "asset {i} violates 0 < D < R < U (D = {}, R = {}, U = {})",
                    a.down, self.rate, a.up
                )));
            }
        }
        if self.weights.len() != self.m() {
            return Err(Error::InvalidMarket(format!(
                "{} weights for {} assets",
                self.weights.len(),
                self.m()
            )));
        }
        if self.weights.iter().any(Signed::is_negative) {
            return Err(Error::InvalidMarket("weights must be ≥ 0".into()));
        }
        if self.strike.is_negative() {
            return Err(Error::InvalidMarket("strike must be ≥ 0".into()));
        }
        Ok(())
    }

    /// `R^{-k}` when discounting, else 1.
    pub fn discount_factor(&self, k: usize) -> Rational {
        if self.discount {
            pow(&self.rate, k).recip()
        } else {
            Rational::one()
        }
    }
}

/// `b(i) = (2R - U_i - D_i) / (U_i - D_i)`.
pub fn b_from_market(model: &MarketModel) -> Result<Vec<Rational>> {
    model.validate()?;
    Ok(model
        .assets
        .iter()
        .map(|a| (int(2) * &model.rate - &a.up - &a.down) / (&a.up - &a.down))
        .collect())
}

pub fn spec_from_market(model: &MarketModel) -> Result<PolytopeSpec> {
    PolytopeSpec::new(b_from_market(model)?)
}

/// The one-step factors `u_i` of the assets.
pub fn asset_factors(model: &MarketModel) -> Result<Vec<crate::lattice::LatticeVector>> {
    model
        .assets
        .iter()
        .enumerate()
        .map(|(i, a)| one_step_factor(i + 1, &a.down, &a.up, model.m()))
        .collect()
}

/// `F(λ_1⋯λ_n) = (Σ_i w_i S_i(0) Π_t u_i(λ_t) - C)^+`.
pub fn payoff(model: &MarketModel) -> Result<Payoff> {
    model.validate()?;
    let weights = model
        .weights
        .iter()
        .zip(&model.assets)
        .map(|(w, a)| w * &a.s0)
        .collect();
    let european = EuropeanPayoff::new(asset_factors(model)?, weights, model.strike.clone())?;
    Ok(Payoff::european(european, model.horizon))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Exact,
    LowerBound,
}

impl BoundKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::LowerBound => "lower_bound",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriceInterval {
    pub spec: PolytopeSpec,
    pub f_max: Rational,
    pub f_min: Rational,
    pub f_min_kind: BoundKind,
    pub supervertex: VertexDensity,
    pub subvertex: VertexDensity,
    pub criterion_met: bool,
    pub discounted: bool,
    /// Composition terms evaluated for `f_max` and `f_min`.
    pub terms: (u64, u64),
}

impl PriceInterval {
    pub fn width(&self) -> Rational {
        &self.f_max - &self.f_min
    }
}

/// The closed price interval `[F_min, F_max]` over `Γ(Λ^n, b)`.
pub fn price_interval(model: &MarketModel) -> Result<PriceInterval> {
    let spec = spec_from_market(model)?;
    let f = payoff(model)?;
    let n = model.horizon;
    let root = Word::empty(model.m());
    let upper = supervertex_expectation(&f, &spec, &root, n)?;
    let criterion_met = spec.subvertex_in_polytope()?;
    let (lower, kind) = if criterion_met {
        (subvertex_expectation(&f, &spec, &root, n)?, BoundKind::Exact)
    } else {
        let data = MinimizerData::from_european(f.as_european().expect("european"), &spec)?;
        (minimizer_bound(&data, n), BoundKind::LowerBound)
    };
    let scale = model.discount_factor(n);
    Ok(PriceInterval {
        supervertex: spec.supervertex()?,
        subvertex: spec.subvertex()?,
        f_max: upper.value * &scale,
        f_min: lower.value * &scale,
        f_min_kind: kind,
        criterion_met,
        discounted: model.discount,
        terms: (upper.terms, lower.terms),
        spec,
    })
}

/// Envelope of the option value at node `ω` with `k = n - |ω|` steps left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeBounds {
    pub upper: Rational,
    pub lower: Rational,
    pub lower_kind: BoundKind,
}

pub fn option_value_bounds(model: &MarketModel, node: &Word) -> Result<NodeBounds> {
    let spec = spec_from_market(model)?;
    let f = payoff(model)?;
    if node.len() > model.horizon || node.m() != model.m() {
        return Err(Error::DimensionMismatch {
            expected: model.horizon,
            found: node.len(),
        });
    }
    let k = model.horizon - node.len();
    let upper = supervertex_expectation(&f, &spec, node, k)?.value;
    let (lower, lower_kind) = if spec.subvertex_in_polytope()? {
        (subvertex_expectation(&f, &spec, node, k)?.value, BoundKind::Exact)
    } else {
        let data = MinimizerData::from_european(f.as_european().expect("european"), &spec)?;
        (minimizer_at_node(&data, node, k)?.value, BoundKind::LowerBound)
    };
    let scale = model.discount_factor(k);
    Ok(NodeBounds {
        upper: upper * &scale,
        lower: lower * &scale,
        lower_kind,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeElement;
    use crate::rational::frac;

    fn crr(n: usize) -> MarketModel {
        MarketModel::new(
            n,
            int(1),
            vec![Asset {
                s0: int(100),
                down: frac(1, 2),
                up: int(2),
            }],
            int(100),
        )
        .unwrap()
    }

    #[test]
    fn b_examples() {
        assert_eq!(b_from_market(&crr(1)).unwrap(), vec![frac(-1, 3)]);
        let sym = MarketModel::new(
            1,
            int(1),
            vec![Asset {
                s0: int(1),
                down: frac(1, 2),
                up: frac(3, 2),
            }],
            int(0),
        )
        .unwrap();
        assert_eq!(b_from_market(&sym).unwrap(), vec![int(0)]);
    }

    #[test]
    fn boundary_rates_rejected() {
        let mut model = crr(1);
        model.assets[0].down = int(1);
        assert!(matches!(model.validate(), Err(Error::InvalidMarket(_))));
        model.assets[0].down = frac(1, 2);
        model.assets[0].up = int(1);
        assert!(model.validate().is_err());
    }

    #[test]
    fn crr_payoff_values() {
        let f = payoff(&crr(1)).unwrap();
        assert_eq!(f.evaluate(&[LatticeElement::parse("0").unwrap()]), int(100));
        assert_eq!(f.evaluate(&[LatticeElement::parse("1").unwrap()]), int(0));
    }

    #[test]
    fn crr_interval_collapses() {
        let p = price_interval(&crr(1)).unwrap();
        assert_eq!(p.f_max, frac(100, 3));
        assert_eq!(p.f_min, frac(100, 3));
        assert_eq!(p.f_min_kind, BoundKind::Exact);
        assert!(p.criterion_met);
    }

    #[test]
    fn discount_scales_by_rate() {
        let mut model = crr(2);
        model.rate = frac(5, 4);
        model.assets[0].down = frac(1, 2);
        let plain = price_interval(&model).unwrap();
        model.discount = true;
        let disc = price_interval(&model).unwrap();
        assert_eq!(disc.f_max, plain.f_max * frac(16, 25));
    }

    #[test]
    fn node_bounds_at_root_and_leaf() {
        let model = crr(3);
        let root = option_value_bounds(&model, &Word::empty(1)).unwrap();
        assert_eq!(root.upper, price_interval(&model).unwrap().f_max);
        let leaf = Word::parse(1, "0 0 1").unwrap();
        let b = option_value_bounds(&model, &leaf).unwrap();
        let f = payoff(&model).unwrap().evaluate_word(&leaf);
        assert_eq!((b.upper, b.lower), (f.clone(), f));
    }
}
