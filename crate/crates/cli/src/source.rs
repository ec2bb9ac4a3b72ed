//! Where a sequence comes from: a built-in, a seeded random draw, or a
//! morphism spec file.

use std::path::PathBuf;

use anyhow::Context;
use numwall::ff::{PrimeField, Residue};
use numwall::seq::SequenceSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::Usage;

#[derive(Debug, Clone)]
pub enum Source {
    Morphic { label: String, spec: SequenceSpec },
    Random { seed: u64 },
}

impl Source {
    pub fn parse(arg: &str) -> anyhow::Result<Source> {
        if let Some(rest) = arg.strip_prefix("random:") {
            let seed = rest
                .strip_prefix("seed=")
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Usage(format!("expected random:seed=<integer>, got `{arg}`")))?;
            return Ok(Source::Random { seed });
        }
        if let Ok(spec) = SequenceSpec::builtin(arg) {
            return Ok(Source::Morphic {
                label: arg.to_string(),
                spec,
            });
        }
        let path = PathBuf::from(arg);
        if !path.exists() {
            return Err(Usage(format!(
                "`{arg}` is neither pf1, pf2, thue-morse, random:seed=<s> nor an existing spec file"
            ))
            .into());
        }
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("reading {}", path.display()))?;
        let spec =
            SequenceSpec::parse(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        Ok(Source::Morphic {
            label: path.display().to_string(),
            spec,
        })
    }

    pub fn label(&self) -> String {
        match self {
            Source::Morphic { label, .. } => label.clone(),
            Source::Random { seed } => format!("random:seed={seed}"),
        }
    }

    pub fn prefix(&self, field: &PrimeField, len: usize) -> Vec<Residue> {
        match self {
            Source::Morphic { spec, .. } => spec.coded_prefix(field, len),
            Source::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                (0..len)
                    .map(|_| rng.gen_range(0..field.modulus()))
                    .collect()
            }
        }
    }

    pub fn spec(&self) -> anyhow::Result<&SequenceSpec> {
        match self {
            Source::Morphic { spec, .. } => Ok(spec),
            Source::Random { .. } => {
                Err(Usage("a random sequence has no morphism to tile".into()).into())
            }
        }
    }
}

pub fn field(p: u32) -> anyhow::Result<PrimeField> {
    PrimeField::new(p).map_err(|e| Usage(e.to_string()).into())
}
