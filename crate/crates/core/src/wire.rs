//! Serialized forms: every value travels as `p`, the order `N`, and
//! expressions in the shared text grammar.

use serde::{Deserialize, Serialize};

use crate::derivation::IterativeDerivation;
use crate::equivalence::Substitution;
use crate::error::Result;
use crate::field::PrimeField;
use crate::module::IdModule;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationRecord {
    pub p: u64,
    #[serde(rename = "N")]
    pub order: usize,
    pub theta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstitutionRecord {
    pub p: u64,
    #[serde(rename = "N")]
    pub order: usize,
    pub lambda: String,
}

/// `A` holds the entries row-major, one expression per entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub p: u64,
    #[serde(rename = "N")]
    pub order: usize,
    pub theta: String,
    pub n: usize,
    #[serde(rename = "A")]
    pub entries: Vec<String>,
}

impl From<&IterativeDerivation> for DerivationRecord {
    fn from(theta: &IterativeDerivation) -> Self {
        Self { p: theta.field().characteristic(), order: theta.order(), theta: theta.generator().to_string() }
    }
}

impl DerivationRecord {
    pub fn decode(&self) -> Result<IterativeDerivation> {
        IterativeDerivation::parse(PrimeField::new(self.p)?, self.order, &self.theta)
    }
}

impl From<&Substitution> for SubstitutionRecord {
    fn from(lambda: &Substitution) -> Self {
        Self { p: lambda.field().characteristic(), order: lambda.order(), lambda: lambda.series().to_string() }
    }
}

impl SubstitutionRecord {
    pub fn decode(&self) -> Result<Substitution> {
        Substitution::parse(PrimeField::new(self.p)?, self.order, &self.lambda)
    }
}

impl From<&IdModule> for ModuleRecord {
    fn from(m: &IdModule) -> Self {
        let theta = m.derivation();
        Self {
            p: theta.field().characteristic(),
            order: theta.order(),
            theta: theta.generator().to_string(),
            n: m.rank(),
            entries: m.entries().iter().map(ToString::to_string).collect(),
        }
    }
}

impl ModuleRecord {
    pub fn decode(&self) -> Result<IdModule> {
        let field = PrimeField::new(self.p)?;
        let theta = IterativeDerivation::parse(field, self.order, &self.theta)?;
        let entries = self
            .entries
            .iter()
            .map(|e| crate::series::TruncSeries::parse(field, self.order, e))
            .collect::<Result<_>>()?;
        IdModule::new(theta, self.n, entries)
    }
}
