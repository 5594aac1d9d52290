use std::sync::OnceLock;

use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use super::sampling::{sample_rng, ModelKind, Region, SamplingModel};
use super::ExperimentError;
use crate::arith::{rational_pow, BigRational};
use crate::dseries::{DFamily, ProbabilityTable};
use crate::padic::{count_generating_roots, phi, GaloisRingContext, RootCountResult};

/// Largest tolerated share of rejected samples.
pub const MAX_REJECTED_FRACTION: f64 = 0.01;

/// A Monte Carlo mean with its standard error and exact target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation over the square root of `samples`.
    pub stderr: f64,
    /// Accepted samples.
    pub samples: u64,
    pub rejected: u64,
    pub inconclusive: u64,
    #[serde(skip)]
    pub target: BigRational,
    /// `(mean - target) / stderr`. Zero when both the error and the
    /// deviation vanish, `None` when only the error does.
    pub z: Option<f64>,
}

impl Estimate {
    pub fn from_values(values: &[f64], target: BigRational, rejected: u64, inconclusive: u64) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let stderr = (var / n).sqrt();
        let t = target.to_f64().unwrap_or(f64::NAN);
        let z = if stderr > 0.0 {
            Some((mean - t) / stderr)
        } else if (mean - t).abs() <= 1e-12 * t.abs().max(1.0) {
            Some(0.0)
        } else {
            None
        };
        Estimate {
            mean,
            stderr,
            samples: values.len() as u64,
            rejected,
            inconclusive,
            target,
            z,
        }
    }

    pub fn target_f64(&self) -> f64 {
        self.target.to_f64().unwrap_or(f64::NAN)
    }

    /// `|z| <= sigmas`.
    pub fn within(&self, sigmas: f64) -> bool {
        self.z.is_some_and(|z| z.abs() <= sigmas)
    }

    pub fn inconclusive_fraction(&self) -> f64 {
        self.inconclusive as f64 / self.samples.max(1) as f64
    }
}

fn family() -> &'static DFamily {
    static FAMILY: OnceLock<DFamily> = OnceLock::new();
    FAMILY.get_or_init(DFamily::new)
}

/// `rho`, `alpha`, `beta` from the exact rational functions.
pub fn probability_targets(n: u32, p: u64) -> Result<ProbabilityTable, ExperimentError> {
    Ok(family().probabilities(n as u64, p)?)
}

fn rat(v: u64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Exact `(1/n) E[N(U)]` under the model.
pub fn root_target(model: &SamplingModel, region: Region) -> Result<BigRational, ExperimentError> {
    let t = probability_targets(model.n, model.p)?;
    let p = rat(model.p);
    let pn = rational_pow(&p, model.n as i32);
    let denom = &pn * &p - BigRational::one();
    match (model.kind, region) {
        (ModelKind::Haar, Region::Integers) => Ok((&pn * &p - &pn) / denom * t.alpha),
        (ModelKind::Haar, Region::MaximalIdeal) => Ok((p - BigRational::one()) / denom * t.beta),
        (ModelKind::Haar, Region::All) => Ok(t.rho),
        (ModelKind::Monic, Region::Integers | Region::All) => Ok(t.alpha),
        (ModelKind::MonicXn, _) => Ok(t.beta),
        (kind, region) => Err(ExperimentError::NoTarget { kind, region }),
    }
}

/// Exact `integral of phi` over the region at exponent one.
pub fn phi_target(n: u32, p: u64, region: Region) -> Result<BigRational, ExperimentError> {
    let t = probability_targets(n, p)?;
    let nn = rat(n as u64);
    match region {
        // D_n(p, p^{-n/2}) = n D*_n(p).
        Region::Integers => Ok(nn * t.alpha),
        // p^{-n} D_n(1/p, p^{n/2}) = p^{-n} n D*_n(1/p).
        Region::MaximalIdeal => Ok(nn * t.beta * rational_pow(&rat(p), -(n as i32))),
        Region::All => Err(ExperimentError::InvalidConfig("phi integrals are over OK or MK".into())),
    }
}

/// Root counts for consecutive sample indices, rejected samples dropped.
#[derive(Clone, Debug)]
pub struct RootSamples {
    pub model: SamplingModel,
    pub counts: Vec<RootCountResult>,
    pub rejected: u64,
}

impl RootSamples {
    fn values(&self, pick: impl Fn(&RootCountResult) -> u32) -> Vec<f64> {
        let n = self.model.n as f64;
        self.counts.iter().map(|c| pick(c) as f64 / n).collect()
    }

    pub fn inconclusive(&self) -> u64 {
        self.counts.iter().map(|c| c.inconclusive as u64).sum()
    }

    /// Estimate of `(1/n) E[N(U)]` against its exact target.
    pub fn estimate(&self, region: Region) -> Result<Estimate, ExperimentError> {
        let target = root_target(&self.model, region)?;
        let values = match region {
            Region::Integers => self.values(|c| c.count_ok),
            Region::MaximalIdeal => self.values(|c| c.count_mk),
            Region::All => self.values(|c| c.total()),
        };
        Ok(Estimate::from_values(
            &values,
            target,
            self.rejected,
            self.inconclusive(),
        ))
    }

    /// `(1/n) E[N(K - O_K)]` compared with the maximal-ideal target, which
    /// it equals under the Haar model.
    pub fn estimate_outside(&self) -> Result<Estimate, ExperimentError> {
        let target = root_target(&self.model, Region::MaximalIdeal)?;
        let values = self.values(|c| c.count_outside);
        Ok(Estimate::from_values(
            &values,
            target,
            self.rejected,
            self.inconclusive(),
        ))
    }
}

fn check_samples(samples: u64) -> Result<(), ExperimentError> {
    if samples == 0 {
        return Err(ExperimentError::InvalidConfig("samples must be positive".into()));
    }
    Ok(())
}

/// Draws `samples` polynomials and counts their generating roots.
pub fn sample_root_counts(model: &SamplingModel, samples: u64, seed: u64) -> Result<RootSamples, ExperimentError> {
    check_samples(samples)?;
    let ctx = model.context()?;
    let half = model.precision / 2;
    let outcomes: Vec<Option<RootCountResult>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = sample_rng(seed, i);
            let f = model.sample(&ctx, &mut rng);
            let degenerate = f.coeffs().iter().all(|c| ctx.valuation(c).is_none_or(|v| v >= half));
            if degenerate {
                return Ok(None);
            }
            Ok(Some(count_generating_roots(&f, &ctx)?))
        })
        .collect::<Result<_, ExperimentError>>()?;
    let rejected = outcomes.iter().filter(|o| o.is_none()).count() as u64;
    if rejected as f64 > MAX_REJECTED_FRACTION * samples as f64 || rejected == samples {
        return Err(ExperimentError::DegenerateRate { rejected, samples });
    }
    Ok(RootSamples {
        model: *model,
        counts: outcomes.into_iter().flatten().collect(),
        rejected,
    })
}

pub fn estimate_root_expectation(
    model: &SamplingModel,
    region: Region,
    samples: u64,
    seed: u64,
) -> Result<Estimate, ExperimentError> {
    root_target(model, region)?;
    sample_root_counts(model, samples, seed)?.estimate(region)
}

/// `rho` under the Haar model, `alpha` under the monic one and `beta`
/// under the `X^n mod p` one, each as `(1/n) E[N]`.
pub fn estimate_probability(model: &SamplingModel, samples: u64, seed: u64) -> Result<Estimate, ExperimentError> {
    estimate_root_expectation(model, Region::All, samples, seed)
}

/// Monte Carlo integral of `phi` over `O_K` or the maximal ideal. The
/// ideal is sampled as `p y` with `y` uniform in `O_K`, weighted by its
/// measure `p^{-n}`, on substreams disjoint from the `O_K` ones.
pub fn estimate_phi_integral(
    ctx: &GaloisRingContext,
    region: Region,
    samples: u64,
    seed: u64,
) -> Result<Estimate, ExperimentError> {
    check_samples(samples)?;
    let n = ctx.degree();
    let target = phi_target(n, ctx.p(), region)?;
    let weight = (ctx.p() as f64).powi(-(n as i32));
    let raw: Vec<(f64, bool)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let stream = if region == Region::Integers { i } else { i | 1 << 63 };
            let y = ctx.random_element(&mut sample_rng(seed, stream));
            match region {
                Region::Integers => {
                    let v = phi(ctx, &y);
                    (v.to_f64(), v.is_zero())
                }
                _ => {
                    let v = phi(ctx, &ctx.mul_p_pow(&y, 1));
                    (weight * v.to_f64(), v.is_zero())
                }
            }
        })
        .collect();
    let overflow = raw.iter().filter(|(_, z)| *z).count() as u64;
    let values: Vec<f64> = raw.into_iter().map(|(v, _)| v).collect();
    Ok(Estimate::from_values(&values, target, 0, overflow))
}
