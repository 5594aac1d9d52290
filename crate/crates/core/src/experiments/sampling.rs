use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::padic::{GaloisRingContext, PadicPolynomial, DEFAULT_PRECISION};

/// How the coefficients of `f = xi_0 + ... + xi_n X^n` are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    /// Every coefficient uniform modulo `p^M`.
    Haar,
    /// `xi_n = 1`, the rest uniform.
    Monic,
    /// `xi_n = 1` and the rest uniform in `p Z_p`, so `f = X^n mod p`.
    MonicXn,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [ModelKind::Haar, ModelKind::Monic, ModelKind::MonicXn];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Haar => "haar",
            ModelKind::Monic => "monic",
            ModelKind::MonicXn => "monic_xn",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| ExperimentError::InvalidConfig(format!("unknown model {s:?}")))
    }
}

/// Where the counted roots lie.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `O_K`.
    #[serde(rename = "OK")]
    Integers,
    /// The maximal ideal of `O_K`.
    #[serde(rename = "MK")]
    MaximalIdeal,
    /// All of `K`.
    #[serde(rename = "ALL")]
    All,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Integers => "OK",
            Region::MaximalIdeal => "MK",
            Region::All => "ALL",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "OK" => Ok(Region::Integers),
            "MK" => Ok(Region::MaximalIdeal),
            "ALL" => Ok(Region::All),
            _ => Err(ExperimentError::InvalidConfig(format!("unknown region {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SamplingModel {
    pub kind: ModelKind,
    pub n: u32,
    pub p: u64,
    pub precision: u32,
}

impl SamplingModel {
    pub fn new(kind: ModelKind, n: u32, p: u64) -> Self {
        SamplingModel {
            kind,
            n,
            p,
            precision: DEFAULT_PRECISION,
        }
    }

    pub fn with_precision(mut self, precision: u32) -> Self {
        self.precision = precision;
        self
    }

    pub fn context(&self) -> Result<GaloisRingContext, ExperimentError> {
        Ok(GaloisRingContext::new(self.p, self.n, self.precision)?)
    }

    /// Draws the coefficients of one polynomial. They lie in `Z_p`.
    pub fn sample(&self, ctx: &GaloisRingContext, rng: &mut ChaCha8Rng) -> PadicPolynomial {
        let zm = ctx.ring();
        let n = self.n as usize;
        let coeffs: Vec<u128> = (0..=n)
            .map(|i| match self.kind {
                ModelKind::Haar => zm.random(rng),
                _ if i == n => 1,
                ModelKind::Monic => zm.random(rng),
                ModelKind::MonicXn => zm.mul(zm.random(rng), zm.p_pow(1)),
            })
            .collect();
        PadicPolynomial::from_integers(ctx, &coeffs)
    }
}

/// The generator for sample `index`: a ChaCha8 stream keyed by `seed`, so
/// serial and parallel runs draw the same values.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
