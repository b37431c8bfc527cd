//! Linear codes with column multiplicities, weight spectra and the
//! quasi-minimal / maximum-weight-spectrum predicates.
//!
//! A code is stored by its `k x n` generator over GF(q) together with a
//! positive multiplicity `m_i` per column. Column `i` stands for `m_i` equal
//! coordinates of the effective code, so the weight of a codeword `c` is
//! `sum_{i in supp(c)} m_i` and the effective length is `N = sum m_i`.
//! Effective codewords are never materialized.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FieldInfo, FieldSpec};
use crate::json;

/// Default ceiling on `q^k` for exhaustive codeword enumeration.
pub const DEFAULT_ENUM_LIMIT: u128 = 1 << 28;
/// Hard ceiling on any guard override; keeps spectrum counts inside `u128`.
pub const MAX_ENUM_LIMIT: u128 = 1 << 60;
/// Environment variable that overrides [`DEFAULT_ENUM_LIMIT`].
pub const ENUM_LIMIT_ENV: &str = "MWS_ENUM_LIMIT";

const PAR_THRESHOLD: u64 = 1 << 15;
const PAR_CHUNK: u64 = 1 << 12;

/// Limit on the number of messages `q^k` a spectrum computation may visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumGuard {
    pub max_messages: u128,
}

impl Default for EnumGuard {
    fn default() -> Self {
        EnumGuard {
            max_messages: DEFAULT_ENUM_LIMIT,
        }
    }
}

impl EnumGuard {
    pub fn new(max_messages: u128) -> Self {
        EnumGuard {
            max_messages: max_messages.min(MAX_ENUM_LIMIT),
        }
    }

    /// Reads [`ENUM_LIMIT_ENV`], falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(ENUM_LIMIT_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u128>()
                .map(EnumGuard::new)
                .map_err(|_| Error::InvalidConfig(format!("{ENUM_LIMIT_ENV}={v} is not an integer"))),
            Err(_) => Ok(EnumGuard::default()),
        }
    }

    pub fn check(&self, q: u32, k: usize) -> Result<()> {
        let count = checked_pow(u128::from(q), k).unwrap_or(u128::MAX);
        if count > self.max_messages {
            Err(Error::TooLarge {
                count,
                limit: self.max_messages,
            })
        } else {
            Ok(())
        }
    }
}

pub(crate) fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

/// Number of one-dimensional subspaces of GF(q)^k, `(q^k - 1)/(q - 1)`.
pub fn projective_count(q: u32, k: usize) -> u128 {
    let q = u128::from(q);
    (0..k).fold(0u128, |acc, _| acc * q + 1)
}

/// The `r`-th canonical projective representative of GF(q)^k, in
/// lexicographic order, as element indices.
pub fn projective_representative(q: u32, k: usize, r: u64) -> Vec<u32> {
    let mut msg = vec![0u32; k];
    let mut offset = r;
    let mut block = 1u64;
    for j in 0..k {
        if offset < block {
            let lead = k - 1 - j;
            msg[lead] = 1;
            for pos in (lead + 1..k).rev() {
                msg[pos] = (offset % u64::from(q)) as u32;
                offset /= u64::from(q);
            }
            return msg;
        }
        offset -= block;
        block *= u64::from(q);
    }
    panic!("representative index {r} out of range for q={q}, k={k}");
}

/// Advances `msg` to the next canonical representative. Returns false after
/// the last one.
fn next_representative(msg: &mut [u32], q: u32) -> bool {
    let k = msg.len();
    let lead = match msg.iter().position(|&x| x != 0) {
        Some(l) => l,
        None => return false,
    };
    for pos in (lead + 1..k).rev() {
        if msg[pos] + 1 < q {
            msg[pos] += 1;
            return true;
        }
        msg[pos] = 0;
    }
    if lead == 0 {
        return false;
    }
    msg[lead] = 0;
    msg[lead - 1] = 1;
    true
}

/// Iterator over canonical projective representatives: first nonzero
/// coordinate equal to 1, lexicographic order.
pub struct ProjectiveReps {
    q: u32,
    current: Option<Vec<u32>>,
}

impl ProjectiveReps {
    pub fn new(q: u32, k: usize) -> Self {
        let current = (k > 0).then(|| {
            let mut v = vec![0u32; k];
            v[k - 1] = 1;
            v
        });
        ProjectiveReps { q, current }
    }
}

impl Iterator for ProjectiveReps {
    type Item = Vec<FieldElement>;

    fn next(&mut self) -> Option<Self::Item> {
        let cur = self.current.as_mut()?;
        let out = cur.iter().map(|&x| FieldElement::from_raw(x)).collect();
        if !next_representative(cur, self.q) {
            self.current = None;
        }
        Some(out)
    }
}

/// Support of a word: indices of its nonzero entries.
pub fn support(word: &[FieldElement]) -> Vec<usize> {
    word.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

/// `sum_{i in supp(word)} m_i`.
pub fn weighted_weight(word: &[FieldElement], multiplicities: &[BigUint]) -> Result<BigUint> {
    if word.len() != multiplicities.len() {
        return Err(Error::LengthMismatch {
            expected: multiplicities.len(),
            actual: word.len(),
        });
    }
    Ok(word
        .iter()
        .zip(multiplicities)
        .filter(|(x, _)| !x.is_zero())
        .map(|(_, m)| m)
        .sum())
}

/// Rank of a row-major `rows x cols` matrix of element indices.
pub fn rank(field: &FieldSpec, rows: usize, cols: usize, data: &[u32]) -> usize {
    let mut a = data.to_vec();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pivot) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pivot != r {
            for j in 0..cols {
                a.swap(pivot * cols + j, r * cols + j);
            }
        }
        let inv = field.inv_raw(a[r * cols + c]);
        for j in c..cols {
            a[r * cols + j] = field.mul_raw(a[r * cols + j], inv);
        }
        for i in r + 1..rows {
            let f = a[i * cols + c];
            if f == 0 {
                continue;
            }
            let nf = field.neg_raw(f);
            for j in c..cols {
                let t = field.mul_raw(nf, a[r * cols + j]);
                a[i * cols + j] = field.add_raw(a[i * cols + j], t);
            }
        }
        r += 1;
    }
    r
}

/// A `[n, k]_q` code with a multiplicity per generator column.
#[derive(Clone, Debug)]
pub struct LinearCode {
    field: Arc<FieldSpec>,
    k: usize,
    n: usize,
    generator: Vec<u32>,
    multiplicities: Vec<BigUint>,
    effective_length: BigUint,
}

enum Scale {
    Unit,
    Small(Vec<u64>),
    Big,
}

impl LinearCode {
    /// Plain code (all multiplicities 1) from generator rows.
    pub fn new(field: Arc<FieldSpec>, rows: &[Vec<FieldElement>]) -> Result<Self> {
        let k = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        let mut generator = Vec::with_capacity(k * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            generator.extend(row.iter().map(|x| x.index()));
        }
        Self::from_raw(field, k, n, generator, vec![BigUint::one(); n])
    }

    /// Plain code from rows of element indices; validates every index.
    pub fn from_indices(field: Arc<FieldSpec>, rows: &[Vec<u64>]) -> Result<Self> {
        let rows: Vec<Vec<FieldElement>> = rows
            .iter()
            .map(|r| r.iter().map(|&i| field.element(i)).collect())
            .collect::<Result<_>>()?;
        Self::new(field, &rows)
    }

    /// Row-major generator of element indices plus multiplicities. Rejects
    /// rank-deficient generators and zero multiplicities.
    pub fn from_raw(
        field: Arc<FieldSpec>,
        k: usize,
        n: usize,
        generator: Vec<u32>,
        multiplicities: Vec<BigUint>,
    ) -> Result<Self> {
        if k == 0 || n == 0 {
            return Err(Error::InvalidConfig(format!(
                "code dimensions must be positive (k={k}, n={n})"
            )));
        }
        if generator.len() != k * n {
            return Err(Error::LengthMismatch {
                expected: k * n,
                actual: generator.len(),
            });
        }
        if let Some(&bad) = generator.iter().find(|&&x| x >= field.order()) {
            return Err(Error::InvalidElement {
                index: u64::from(bad),
                q: field.order(),
            });
        }
        let r = rank(&field, k, n, &generator);
        if r != k {
            return Err(Error::RankDeficient { rank: r, k });
        }
        let mut code = LinearCode {
            field,
            k,
            n,
            generator,
            multiplicities: Vec::new(),
            effective_length: BigUint::zero(),
        };
        code.set_multiplicities(multiplicities)?;
        Ok(code)
    }

    fn set_multiplicities(&mut self, multiplicities: Vec<BigUint>) -> Result<()> {
        if multiplicities.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: multiplicities.len(),
            });
        }
        if let Some(column) = multiplicities.iter().position(Zero::is_zero) {
            return Err(Error::InvalidMultiplicity { column });
        }
        self.effective_length = multiplicities.iter().sum();
        self.multiplicities = multiplicities;
        Ok(())
    }

    /// Same generator, new multiplicity profile.
    pub fn with_multiplicities(&self, multiplicities: Vec<BigUint>) -> Result<Self> {
        let mut code = LinearCode {
            multiplicities: Vec::new(),
            effective_length: BigUint::zero(),
            ..self.clone()
        };
        code.set_multiplicities(multiplicities)?;
        Ok(code)
    }

    pub fn field(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn base_length(&self) -> usize {
        self.n
    }

    pub fn effective_length(&self) -> &BigUint {
        &self.effective_length
    }

    pub fn multiplicities(&self) -> &[BigUint] {
        &self.multiplicities
    }

    pub fn is_plain(&self) -> bool {
        self.multiplicities.iter().all(One::is_one)
    }

    pub fn entry(&self, row: usize, col: usize) -> FieldElement {
        FieldElement::from_raw(self.generator[row * self.n + col])
    }

    pub fn rows(&self) -> Vec<Vec<FieldElement>> {
        self.generator
            .chunks(self.n)
            .map(|r| r.iter().map(|&x| FieldElement::from_raw(x)).collect())
            .collect()
    }

    /// Generator rows as plain indices.
    pub fn index_rows(&self) -> Vec<Vec<u32>> {
        self.generator.chunks(self.n).map(<[u32]>::to_vec).collect()
    }

    /// Columns that are identically zero.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|&c| (0..self.k).all(|r| self.generator[r * self.n + c] == 0))
            .collect()
    }

    pub fn projective_count(&self) -> u128 {
        projective_count(self.q(), self.k)
    }

    pub fn projective_representatives(&self) -> ProjectiveReps {
        ProjectiveReps::new(self.q(), self.k)
    }

    /// `message * generator`, at base length n.
    pub fn codeword(&self, message: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if message.len() != self.k {
            return Err(Error::LengthMismatch {
                expected: self.k,
                actual: message.len(),
            });
        }
        let msg: Vec<u32> = message.iter().map(|x| x.index()).collect();
        let mut word = vec![0u32; self.n];
        self.encode_into(&msg, &mut word);
        Ok(word.into_iter().map(FieldElement::from_raw).collect())
    }

    #[inline]
    fn encode_into(&self, msg: &[u32], word: &mut [u32]) {
        word.fill(0);
        for (i, &c) in msg.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let row = &self.generator[i * self.n..(i + 1) * self.n];
            if c == 1 {
                for (w, &g) in word.iter_mut().zip(row) {
                    *w = self.field.add_raw(*w, g);
                }
            } else {
                for (w, &g) in word.iter_mut().zip(row) {
                    *w = self.field.add_raw(*w, self.field.mul_raw(c, g));
                }
            }
        }
    }

    fn scale(&self) -> Scale {
        if self.is_plain() {
            Scale::Unit
        } else if self.effective_length.to_u64().is_some() {
            Scale::Small(self.multiplicities.iter().map(|m| m.to_u64().unwrap()).collect())
        } else {
            Scale::Big
        }
    }

    /// Calls `f(word)` for the codeword of every projective representative
    /// with index in `[start, end)`.
    fn scan(&self, start: u64, end: u64, mut f: impl FnMut(&[u32])) {
        if start >= end {
            return;
        }
        let q = self.q();
        let mut msg = projective_representative(q, self.k, start);
        let mut word = vec![0u32; self.n];
        for _ in start..end {
            self.encode_into(&msg, &mut word);
            f(&word);
            next_representative(&mut msg, q);
        }
    }

    fn word_weight_small(word: &[u32], scale: &Scale) -> u64 {
        match scale {
            Scale::Unit => word.iter().filter(|&&x| x != 0).count() as u64,
            Scale::Small(m) => word
                .iter()
                .zip(m)
                .filter(|(&x, _)| x != 0)
                .map(|(_, &mi)| mi)
                .sum(),
            Scale::Big => unreachable!("big weights take the BigUint path"),
        }
    }

    fn word_weight_big(&self, word: &[u32]) -> BigUint {
        word.iter()
            .zip(&self.multiplicities)
            .filter(|(&x, _)| x != 0)
            .map(|(_, m)| m)
            .sum()
    }

    fn count_range(&self, start: u64, end: u64, scale: &Scale) -> BTreeMap<BigUint, u128> {
        match scale {
            Scale::Big => {
                let mut counts = BTreeMap::new();
                self.scan(start, end, |w| *counts.entry(self.word_weight_big(w)).or_insert(0) += 1);
                counts
            }
            _ => {
                let mut counts: HashMap<u64, u128> = HashMap::new();
                self.scan(start, end, |w| {
                    *counts.entry(Self::word_weight_small(w, scale)).or_insert(0) += 1
                });
                counts.into_iter().map(|(w, c)| (BigUint::from(w), c)).collect()
            }
        }
    }

    /// Exact weight spectrum over all `q^k - 1` nonzero codewords.
    pub fn weight_spectrum(&self, guard: &EnumGuard) -> Result<WeightSpectrum> {
        guard.check(self.q(), self.k)?;
        let reps = self.projective_count() as u64;
        let scale = self.scale();
        let per_rep = if reps >= PAR_THRESHOLD {
            let chunks: Vec<(u64, u64)> = (0..reps)
                .step_by(PAR_CHUNK as usize)
                .map(|s| (s, (s + PAR_CHUNK).min(reps)))
                .collect();
            chunks
                .into_par_iter()
                .map(|(s, e)| self.count_range(s, e, &scale))
                .reduce(BTreeMap::new, |mut a, b| {
                    for (w, c) in b {
                        *a.entry(w).or_insert(0) += c;
                    }
                    a
                })
        } else {
            self.count_range(0, reps, &scale)
        };
        let scalar = u128::from(self.q() - 1);
        let counts = per_rep.into_iter().map(|(w, c)| (w, c * scalar)).collect();
        Ok(WeightSpectrum {
            q: self.q(),
            k: self.k,
            effective_length: self.effective_length.clone(),
            counts,
        })
    }

    /// True iff all `(q^k-1)/(q-1)` projective codewords have distinct
    /// weights. Stops at the first repeated weight.
    pub fn is_mws(&self, guard: &EnumGuard) -> Result<bool> {
        guard.check(self.q(), self.k)?;
        let reps = self.projective_count() as u64;
        let scale = self.scale();
        if let Scale::Big = scale {
            let mut seen = HashSet::new();
            let mut distinct = true;
            self.scan(0, reps, |w| distinct &= seen.insert(self.word_weight_big(w)));
            return Ok(distinct);
        }
        // A code can only be MWS if N >= number of representatives.
        if self.effective_length < BigUint::from(reps) {
            return Ok(false);
        }
        let mut weights = Vec::with_capacity(reps as usize);
        self.scan(0, reps, |w| weights.push(Self::word_weight_small(w, &scale)));
        weights.sort_unstable();
        Ok(weights.windows(2).all(|p| p[0] != p[1]))
    }

    /// `sum_w A_w (A_w - (q-1))`.
    pub fn mws_criterion_sum(&self, guard: &EnumGuard) -> Result<u128> {
        Ok(self.weight_spectrum(guard)?.mws_criterion_sum())
    }

    /// The counting criterion: MWS iff the criterion sum is below `2(q-1)^2`.
    pub fn is_mws_by_sum(&self, guard: &EnumGuard) -> Result<bool> {
        Ok(self.weight_spectrum(guard)?.is_mws_by_sum())
    }

    /// True iff the projective codewords have pairwise distinct supports.
    pub fn is_qm(&self, guard: &EnumGuard) -> Result<bool> {
        guard.check(self.q(), self.k)?;
        let reps = self.projective_count() as u64;
        // Distinct nonempty supports need 2^n - 1 >= reps.
        if self.n < 64 && (1u64 << self.n) - 1 < reps {
            return Ok(false);
        }
        let mut distinct = true;
        if self.n <= 64 {
            let mut seen: HashSet<u64> = HashSet::with_capacity(reps as usize);
            self.scan(0, reps, |w| {
                let key = w
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x != 0)
                    .fold(0u64, |acc, (i, _)| acc | (1 << i));
                distinct &= seen.insert(key);
            });
        } else {
            let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(reps as usize);
            self.scan(0, reps, |w| {
                let mut key = vec![0u64; self.n.div_ceil(64)];
                for (i, _) in w.iter().enumerate().filter(|(_, &x)| x != 0) {
                    key[i / 64] |= 1 << (i % 64);
                }
                distinct &= seen.insert(key);
            });
        }
        Ok(distinct)
    }

    /// `d/N > (q-2)/(q-1)`, which guarantees quasi-minimality.
    pub fn qm_sufficient_dn(&self, guard: &EnumGuard) -> Result<bool> {
        Ok(self.weight_spectrum(guard)?.qm_sufficient_dn())
    }

    /// `d/D > (q-2)/(q-1)`, which guarantees quasi-minimality.
    pub fn qm_sufficient_dd(&self, guard: &EnumGuard) -> Result<bool> {
        Ok(self.weight_spectrum(guard)?.qm_sufficient_dd())
    }

    pub fn has_zero_column(&self) -> bool {
        !self.zero_columns().is_empty()
    }
}

/// Counts `A_w` of nonzero codewords per effective weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightSpectrum {
    pub q: u32,
    pub k: usize,
    pub effective_length: BigUint,
    pub counts: BTreeMap<BigUint, u128>,
}

impl WeightSpectrum {
    /// Minimum distance.
    pub fn min_weight(&self) -> BigUint {
        self.counts.keys().next().cloned().unwrap_or_default()
    }

    /// Maximum weight.
    pub fn max_weight(&self) -> BigUint {
        self.counts.keys().next_back().cloned().unwrap_or_default()
    }

    /// Number of distinct nonzero weights.
    pub fn distinct_weights(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn count(&self, w: u64) -> u128 {
        self.counts.get(&BigUint::from(w)).copied().unwrap_or(0)
    }

    pub fn is_mws(&self) -> bool {
        self.distinct_weights() as u128 == projective_count(self.q, self.k)
    }

    pub fn mws_criterion_sum(&self) -> u128 {
        let s = u128::from(self.q - 1);
        self.counts.values().map(|&a| a * (a - s)).sum()
    }

    pub fn is_mws_by_sum(&self) -> bool {
        let s = u128::from(self.q - 1);
        self.mws_criterion_sum() < 2 * s * s
    }

    pub fn qm_sufficient_dn(&self) -> bool {
        let q = BigUint::from(self.q);
        let d = self.min_weight();
        d * (&q - 1u32) > &self.effective_length * (q - 2u32)
    }

    pub fn qm_sufficient_dd(&self) -> bool {
        let q = BigUint::from(self.q);
        self.min_weight() * (&q - 1u32) > self.max_weight() * (q - 2u32)
    }
}

/// JSON view of a code and its spectrum.
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub field: FieldInfo,
    pub q: u32,
    pub k: usize,
    pub n: usize,
    #[serde(rename = "N", serialize_with = "json::big")]
    pub effective_length: BigUint,
    #[serde(serialize_with = "json::big")]
    pub d: BigUint,
    #[serde(rename = "D", serialize_with = "json::big")]
    pub max_weight: BigUint,
    #[serde(rename = "L")]
    pub distinct_weights: usize,
    #[serde(serialize_with = "json::wide")]
    pub projective_count: u128,
    #[serde(serialize_with = "json::big_keyed")]
    pub counts: BTreeMap<BigUint, u128>,
    pub is_mws: bool,
    pub is_qm: bool,
    pub qm_sufficient_dn: bool,
    pub qm_sufficient_dd: bool,
    pub zero_columns: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<String>,
}

impl SpectrumReport {
    pub fn build(code: &LinearCode, guard: &EnumGuard) -> Result<Self> {
        let spectrum = code.weight_spectrum(guard)?;
        let is_qm = code.is_qm(guard)?;
        Ok(SpectrumReport {
            field: code.field().info(),
            q: code.q(),
            k: code.dimension(),
            n: code.base_length(),
            effective_length: code.effective_length().clone(),
            d: spectrum.min_weight(),
            max_weight: spectrum.max_weight(),
            distinct_weights: spectrum.distinct_weights(),
            projective_count: code.projective_count(),
            is_mws: spectrum.is_mws(),
            is_qm,
            qm_sufficient_dn: spectrum.qm_sufficient_dn(),
            qm_sufficient_dd: spectrum.qm_sufficient_dd(),
            counts: spectrum.counts,
            zero_columns: code.zero_columns(),
            construction: None,
        })
    }

    pub fn with_construction(mut self, name: impl Into<String>) -> Self {
        self.construction = Some(name.into());
        self
    }
}
