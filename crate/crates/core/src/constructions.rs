//! Simplex and identity codes, the power-of-two embedding, general
//! repetition profiles, and the verified QM -> MWS pipeline.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::code::{projective_representative, EnumGuard, LinearCode, SpectrumReport};
use crate::error::{Error, Result};
use crate::gf::{build_field, FieldSpec};

/// Builds GF(q) behind an `Arc`, ready to be shared by codes.
pub fn field(q: u64) -> Result<Arc<FieldSpec>> {
    build_field(q).map(Arc::new)
}

/// The `[(q^k-1)/(q-1), k, q^(k-1)]` simplex code. Column `j` is the `j`-th
/// canonical projective point of GF(q)^k.
pub fn simplex(field: &Arc<FieldSpec>, k: usize, guard: &EnumGuard) -> Result<LinearCode> {
    let q = field.order();
    guard.check(q, k)?;
    let n = crate::code::projective_count(q, k) as usize;
    let mut generator = vec![0u32; k * n];
    for j in 0..n {
        for (i, x) in projective_representative(q, k, j as u64).into_iter().enumerate() {
            generator[i * n + j] = x;
        }
    }
    LinearCode::from_raw(field.clone(), k, n, generator, vec![BigUint::one(); n])
}

/// The `[k, k]` code with identity generator.
pub fn identity_code(field: &Arc<FieldSpec>, k: usize) -> Result<LinearCode> {
    let mut generator = vec![0u32; k * k];
    for i in 0..k {
        generator[i * k + i] = 1;
    }
    LinearCode::from_raw(field.clone(), k, k, generator, vec![BigUint::one(); k])
}

/// Multiplicities `(1, 2, 4, ..., 2^(n-1))`.
pub fn power_of_two_profile(n: usize) -> Vec<BigUint> {
    (0..n).map(|i| BigUint::one() << i).collect()
}

/// Repeats column `i` of a plain code `2^i` times. The result has effective
/// length `2^n - 1` and maps distinct supports to distinct weights.
pub fn embed_f(code: &LinearCode) -> Result<LinearCode> {
    if !code.is_plain() {
        return Err(Error::InvalidConfig(
            "the power-of-two embedding expects a code with unit multiplicities".into(),
        ));
    }
    code.with_multiplicities(power_of_two_profile(code.base_length()))
}

/// Replaces the multiplicity profile of `code`.
pub fn generalized_repetition(code: &LinearCode, profile: Vec<BigUint>) -> Result<LinearCode> {
    code.with_multiplicities(profile)
}

/// Where the pipeline takes its quasi-minimal input from.
#[derive(Clone, Debug)]
pub enum Source {
    Simplex { q: u64, k: usize },
    Identity { q: u64, k: usize },
    External(LinearCode),
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Simplex { .. } => f.write_str("simplex"),
            Source::Identity { .. } => f.write_str("identity"),
            Source::External(_) => f.write_str("external"),
        }
    }
}

impl Source {
    pub fn build(&self, guard: &EnumGuard) -> Result<LinearCode> {
        match self {
            Source::Simplex { q, k } => simplex(&field(*q)?, *k, guard),
            Source::Identity { q, k } => identity_code(&field(*q)?, *k),
            Source::External(code) => Ok(code.clone()),
        }
    }
}

/// Output of [`mws_pipeline`].
#[derive(Clone, Debug)]
pub struct PipelineOutput {
    pub source: LinearCode,
    pub embedded: LinearCode,
    pub report: SpectrumReport,
}

/// Checks that the source is quasi-minimal, embeds it, and re-verifies the
/// result as MWS from multiplicity-aware weights.
pub fn mws_pipeline(source: &Source, guard: &EnumGuard) -> Result<PipelineOutput> {
    let base = source.build(guard)?;
    if !base.is_qm(guard)? {
        return Err(Error::NotQuasiMinimal);
    }
    let embedded = embed_f(&base)?;
    let report = SpectrumReport::build(&embedded, guard)?.with_construction(format!("embed_f({source})"));
    Ok(PipelineOutput {
        source: base,
        embedded,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::support;

    const G: EnumGuard = EnumGuard {
        max_messages: crate::code::DEFAULT_ENUM_LIMIT,
    };

    #[test]
    fn simplex_shapes() {
        let c = simplex(&field(2).unwrap(), 3, &G).unwrap();
        assert_eq!((c.base_length(), c.dimension()), (7, 3));
        let s = c.weight_spectrum(&G).unwrap();
        assert_eq!(s.count(4), 7);
        assert_eq!(s.distinct_weights(), 1);

        let c = simplex(&field(3).unwrap(), 2, &G).unwrap();
        assert_eq!(c.index_rows(), vec![vec![0, 1, 1, 1], vec![1, 0, 1, 2]]);
        assert_eq!(c.weight_spectrum(&G).unwrap().count(3), 8);

        let c = simplex(&field(2).unwrap(), 1, &G).unwrap();
        assert_eq!(c.index_rows(), vec![vec![1]]);
    }

    #[test]
    fn simplex_respects_guard() {
        assert!(matches!(
            simplex(&field(2).unwrap(), 10, &EnumGuard::new(512)),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn identity_codes() {
        for k in 1..=6 {
            assert!(identity_code(&field(2).unwrap(), k).unwrap().is_qm(&G).unwrap());
        }
        assert!(!identity_code(&field(3).unwrap(), 2).unwrap().is_qm(&G).unwrap());
        let tiny = identity_code(&field(2).unwrap(), 1).unwrap();
        assert!(tiny.is_qm(&G).unwrap() && tiny.is_mws(&G).unwrap());
    }

    #[test]
    fn embedding_of_binary_identity() {
        let c = embed_f(&identity_code(&field(2).unwrap(), 3).unwrap()).unwrap();
        assert_eq!(c.effective_length(), &BigUint::from(7u32));
        let s = c.weight_spectrum(&G).unwrap();
        let weights: Vec<u64> = s.counts.keys().map(|w| w.try_into().unwrap()).collect();
        assert_eq!(weights, vec![1, 2, 3, 4, 5, 6, 7]);
        assert!(c.is_mws(&G).unwrap());
    }

    #[test]
    fn embedding_weights_follow_supports() {
        let base = simplex(&field(3).unwrap(), 2, &G).unwrap();
        let c = embed_f(&base).unwrap();
        for msg in c.projective_representatives() {
            let word = c.codeword(&msg).unwrap();
            let expect: BigUint = support(&word).into_iter().map(|i| BigUint::one() << i).sum();
            assert_eq!(crate::code::weighted_weight(&word, c.multiplicities()).unwrap(), expect);
        }
        assert_eq!(c.rows(), base.rows());
    }

    #[test]
    fn embedding_of_binary_simplex() {
        let c = embed_f(&simplex(&field(2).unwrap(), 3, &G).unwrap()).unwrap();
        assert_eq!(c.effective_length(), &BigUint::from(127u32));
        assert!(c.is_mws(&G).unwrap());
        let one = embed_f(&identity_code(&field(5).unwrap(), 1).unwrap()).unwrap();
        assert_eq!(one.effective_length(), &BigUint::one());
        assert!(embed_f(&c).is_err());
    }

    #[test]
    fn repetition_profiles() {
        let base = simplex(&field(2).unwrap(), 3, &G).unwrap();
        let same = generalized_repetition(&base, vec![BigUint::one(); 7]).unwrap();
        assert_eq!(same.weight_spectrum(&G).unwrap(), base.weight_spectrum(&G).unwrap());
        let triple = generalized_repetition(&base, vec![BigUint::from(3u32); 7]).unwrap();
        assert_eq!(triple.weight_spectrum(&G).unwrap().count(12), 7);
        let pow = generalized_repetition(&base, power_of_two_profile(7)).unwrap();
        assert_eq!(pow.multiplicities(), embed_f(&base).unwrap().multiplicities());
        assert!(matches!(
            generalized_repetition(&base, vec![BigUint::one(); 3]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn pipeline_sources() {
        for k in 1..=5 {
            let out = mws_pipeline(&Source::Identity { q: 2, k }, &G).unwrap();
            assert_eq!(out.embedded.effective_length(), &BigUint::from((1u32 << k) - 1));
            assert!(out.report.is_mws);
            assert_eq!(out.report.distinct_weights, (1 << k) - 1);
        }
        let out = mws_pipeline(&Source::Simplex { q: 3, k: 2 }, &G).unwrap();
        assert_eq!(out.report.effective_length, BigUint::from(15u32));
        assert!(out.report.is_mws);
        assert_eq!(out.report.construction.as_deref(), Some("embed_f(simplex)"));
        assert_eq!(
            mws_pipeline(&Source::Identity { q: 3, k: 2 }, &G).unwrap_err(),
            Error::NotQuasiMinimal
        );
    }
}
