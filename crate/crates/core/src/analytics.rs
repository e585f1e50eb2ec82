//! Ontology-aware statistics over an annotated corpus.
//!
//! A story annotated with a theme also counts for every ancestor of that
//! theme. Enrichment and differential usage test these propagated incidences;
//! similarity compares propagated tier weights.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::exact::{fisher_two_sided, hypergeometric_upper_tail, Correction};
use crate::{AnnotatedCorpus, Error, StoryEntry, StoryId, ThemeName, ThemeOntology};

pub type StorySet = BTreeSet<StoryId>;

/// Which stories exhibit each theme, directly or through a descendant.
#[derive(Debug, Clone)]
pub struct ThemeIncidence<'o> {
    ontology: &'o ThemeOntology,
    propagated: Vec<StorySet>,
    direct: Vec<usize>,
}

impl<'o> ThemeIncidence<'o> {
    /// Stories annotated with `theme` or any of its descendants.
    pub fn stories(&self, theme: &str) -> Result<&StorySet, Error> {
        Ok(&self.propagated[self.ontology.require(theme)?])
    }

    /// Number of stories annotated with exactly `theme`.
    pub fn direct_count(&self, theme: &str) -> Result<usize, Error> {
        Ok(self.direct[self.ontology.require(theme)?])
    }

    /// Every theme with its propagated story set, in name order.
    pub fn iter(&self) -> impl Iterator<Item = (&'o ThemeName, &StorySet)> + '_ {
        let ontology = self.ontology;
        self.propagated.iter().enumerate().map(move |(id, set)| (ontology.name_of(id), set))
    }
}

/// Builds the propagated incidence. Fails with `UNKNOWN_THEME` when an
/// annotation does not resolve, which cannot happen for corpora that went
/// through the loader's cross-check.
pub fn propagate<'o>(corpus: &AnnotatedCorpus, ontology: &'o ThemeOntology) -> Result<ThemeIncidence<'o>, Error> {
    let mut propagated = vec![StorySet::new(); ontology.len()];
    let mut direct = vec![0usize; ontology.len()];
    for story in corpus.stories() {
        let mut direct_ids = BTreeSet::new();
        for annotation in &story.annotations {
            direct_ids.insert(ontology.require(&annotation.theme)?);
        }
        for &id in &direct_ids {
            direct[id] += 1;
            propagated[id].insert(story.story_id.clone());
            for &a in ontology.ancestor_ids(id) {
                propagated[a].insert(story.story_id.clone());
            }
        }
    }
    Ok(ThemeIncidence { ontology, propagated, direct })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentRow {
    pub theme: ThemeName,
    /// Query stories exhibiting the theme (k).
    pub query_hits: usize,
    /// Query size (n).
    pub query_size: usize,
    /// Background stories exhibiting the theme (K).
    pub background_hits: usize,
    /// Background size (N).
    pub background_size: usize,
    /// Upper-tail hypergeometric probability `P(X >= k)`.
    pub p: f64,
    /// Multiple-testing adjusted `p`.
    pub q: f64,
}

fn require_stories<'a>(corpus: &AnnotatedCorpus, ids: impl IntoIterator<Item = &'a StoryId>) -> Result<(), Error> {
    for id in ids {
        if !corpus.contains(id.as_str()) {
            return Err(Error::UnknownStory(id.as_str().into()));
        }
    }
    Ok(())
}

/// Over-representation of each theme in `query` relative to `background`
/// (all stories when `None`).
///
/// Emits one row per non-root theme with at least `min_count` background
/// hits, sorted by p-value then name.
pub fn enrich(
    corpus: &AnnotatedCorpus,
    ontology: &ThemeOntology,
    query: &StorySet,
    background: Option<&StorySet>,
    min_count: usize,
    correction: Correction,
) -> Result<Vec<EnrichmentRow>, Error> {
    if query.is_empty() {
        return Err(Error::EmptyQuery);
    }
    let all;
    let background = match background {
        Some(set) => set,
        None => {
            all = corpus.ids().cloned().collect::<StorySet>();
            &all
        }
    };
    if background.is_empty() {
        return Err(Error::EmptyBackground);
    }
    require_stories(corpus, background)?;
    require_stories(corpus, query)?;
    if let Some(outside) = query.iter().find(|id| !background.contains(*id)) {
        return Err(Error::QueryNotInBackground(outside.as_str().into()));
    }

    let incidence = propagate(corpus, ontology)?;
    let root = ontology.root_id();
    let (n, big_n) = (query.len(), background.len());
    let mut rows = Vec::new();
    for (id, stories) in incidence.propagated.iter().enumerate() {
        if id == root {
            continue;
        }
        let big_k = stories.intersection(background).count();
        if big_k < min_count {
            continue;
        }
        let k = stories.intersection(query).count();
        let p = hypergeometric_upper_tail(k as u64, big_k as u64, n as u64, big_n as u64)?;
        rows.push(EnrichmentRow {
            theme: ontology.name_of(id).clone(),
            query_hits: k,
            query_size: n,
            background_hits: big_k,
            background_size: big_n,
            p,
            q: p,
        });
    }
    let pvalues: Vec<f64> = rows.iter().map(|r| r.p).collect();
    for (row, q) in rows.iter_mut().zip(correction.adjust(&pvalues)?) {
        row.q = q;
    }
    rows.sort_by(|a, b| a.p.total_cmp(&b.p).then_with(|| a.theme.cmp(&b.theme)));
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialRow {
    pub theme: ThemeName,
    pub a_hits: usize,
    pub a_size: usize,
    pub b_hits: usize,
    pub b_size: usize,
    /// Two-sided Fisher exact p-value on hits/misses by group.
    pub p: f64,
    pub q: f64,
}

/// Themes whose propagated usage differs between two disjoint story groups.
///
/// Emits one row per non-root theme with at least `min_count` hits across
/// both groups, sorted by p-value then name.
pub fn differential_usage(
    corpus: &AnnotatedCorpus,
    ontology: &ThemeOntology,
    group_a: &StorySet,
    group_b: &StorySet,
    min_count: usize,
    correction: Correction,
) -> Result<Vec<DifferentialRow>, Error> {
    if group_a.is_empty() || group_b.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if let Some(shared) = group_a.intersection(group_b).next() {
        return Err(Error::GroupOverlap(shared.as_str().into()));
    }
    require_stories(corpus, group_a)?;
    require_stories(corpus, group_b)?;

    let incidence = propagate(corpus, ontology)?;
    let root = ontology.root_id();
    let (a_size, b_size) = (group_a.len(), group_b.len());
    let mut rows = Vec::new();
    for (id, stories) in incidence.propagated.iter().enumerate() {
        if id == root {
            continue;
        }
        let a_hits = stories.intersection(group_a).count();
        let b_hits = stories.intersection(group_b).count();
        if a_hits + b_hits < min_count {
            continue;
        }
        let p = fisher_two_sided(
            a_hits as u64,
            (a_size - a_hits) as u64,
            b_hits as u64,
            (b_size - b_hits) as u64,
        );
        rows.push(DifferentialRow {
            theme: ontology.name_of(id).clone(),
            a_hits,
            a_size,
            b_hits,
            b_size,
            p,
            q: p,
        });
    }
    let pvalues: Vec<f64> = rows.iter().map(|r| r.p).collect();
    for (row, q) in rows.iter_mut().zip(correction.adjust(&pvalues)?) {
        row.q = q;
    }
    rows.sort_by(|a, b| a.p.total_cmp(&b.p).then_with(|| a.theme.cmp(&b.theme)));
    Ok(rows)
}

/// Sparse propagated tier weights of one story, sorted by theme id. The root
/// is left out.
type WeightVector = Vec<(usize, u32)>;

fn weight_vector(story: &StoryEntry, ontology: &ThemeOntology) -> Result<WeightVector, Error> {
    let root = ontology.root_id();
    let mut weights: BTreeMap<usize, u32> = BTreeMap::new();
    for annotation in &story.annotations {
        let id = ontology.require(&annotation.theme)?;
        let w = annotation.tier.weight();
        for &t in core::iter::once(&id).chain(ontology.ancestor_ids(id)) {
            if t != root {
                let slot = weights.entry(t).or_insert(0);
                *slot = (*slot).max(w);
            }
        }
    }
    Ok(weights.into_iter().collect())
}

/// Propagated weights of a story: for every non-root theme it exhibits, the
/// largest tier weight among its annotations at that theme or below.
pub fn story_weights(
    corpus: &AnnotatedCorpus,
    ontology: &ThemeOntology,
    story: &str,
) -> Result<BTreeMap<ThemeName, u32>, Error> {
    let entry = corpus.get(story).ok_or_else(|| Error::UnknownStory(story.into()))?;
    Ok(weight_vector(entry, ontology)?
        .into_iter()
        .map(|(id, w)| (ontology.name_of(id).clone(), w))
        .collect())
}

/// Weighted Jaccard `sum(min) / sum(max)`; 0 when both are empty.
fn weighted_jaccard(a: &WeightVector, b: &WeightVector) -> f64 {
    let (mut lo, mut hi) = (0u64, 0u64);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let left = a.get(i);
        let right = b.get(j);
        match (left, right) {
            (Some(&(ta, wa)), Some(&(tb, wb))) if ta == tb => {
                lo += u64::from(wa.min(wb));
                hi += u64::from(wa.max(wb));
                i += 1;
                j += 1;
            }
            (Some(&(ta, wa)), Some(&(tb, _))) if ta < tb => {
                hi += u64::from(wa);
                i += 1;
            }
            (Some(_), Some(&(_, wb))) | (None, Some(&(_, wb))) => {
                hi += u64::from(wb);
                j += 1;
            }
            (Some(&(_, wa)), None) => {
                hi += u64::from(wa);
                i += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    if hi == 0 {
        0.0
    } else {
        lo as f64 / hi as f64
    }
}

/// Weighted Jaccard similarity of two stories' propagated tier weights.
pub fn story_similarity(corpus: &AnnotatedCorpus, ontology: &ThemeOntology, a: &str, b: &str) -> Result<f64, Error> {
    let first = corpus.get(a).ok_or_else(|| Error::UnknownStory(a.into()))?;
    let second = corpus.get(b).ok_or_else(|| Error::UnknownStory(b.into()))?;
    Ok(weighted_jaccard(&weight_vector(first, ontology)?, &weight_vector(second, ontology)?))
}

fn all_weight_vectors<'c>(
    corpus: &'c AnnotatedCorpus,
    ontology: &ThemeOntology,
) -> Result<Vec<(&'c StoryId, WeightVector)>, Error> {
    corpus
        .stories()
        .map(|s| Ok((&s.story_id, weight_vector(s, ontology)?)))
        .collect()
}

/// The `k` stories most similar to `story`, most similar first, ties by id.
pub fn recommend(
    corpus: &AnnotatedCorpus,
    ontology: &ThemeOntology,
    story: &str,
    k: usize,
) -> Result<Vec<(StoryId, f64)>, Error> {
    if k == 0 {
        return Err(Error::Domain("recommendation count must be at least 1".into()));
    }
    let entry = corpus.get(story).ok_or_else(|| Error::UnknownStory(story.into()))?;
    let target = weight_vector(entry, ontology)?;
    let mut scored: Vec<(StoryId, f64)> = all_weight_vectors(corpus, ontology)?
        .into_iter()
        .filter(|(id, _)| *id != &entry.story_id)
        .map(|(id, weights)| (id.clone(), weighted_jaccard(&target, &weights)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    scored.truncate(k);
    Ok(scored)
}

/// Average-linkage agglomerative clustering on `1 - similarity`.
///
/// Clusters merge while the closest pair is at distance `<= threshold`. Equal
/// distances merge the pair with the smallest labels first, a label being the
/// smallest story id in the cluster. Clusters come back sorted by label with
/// members in id order.
pub fn agglomerative_cluster(
    corpus: &AnnotatedCorpus,
    ontology: &ThemeOntology,
    threshold: f64,
) -> Result<Vec<Vec<StoryId>>, Error> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Domain(format!("threshold {threshold} is outside [0, 1]")));
    }
    if corpus.is_empty() {
        return Err(Error::Domain("cannot cluster an empty corpus".into()));
    }
    let vectors = all_weight_vectors(corpus, ontology)?;
    let n = vectors.len();
    let mut dist = vec![vec![0.0f64; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = 1.0 - weighted_jaccard(&vectors[i].1, &vectors[j].1);
            dist[i][j] = d;
            dist[j][i] = d;
        }
    }

    // Stories are in id order, so slot index order is label order as long as
    // each merged cluster stays in its lower slot.
    let mut members: Vec<Option<Vec<usize>>> = (0..n).map(|i| Some(vec![i])).collect();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..n {
            if members[i].is_none() {
                continue;
            }
            for j in (i + 1)..n {
                if members[j].is_none() {
                    continue;
                }
                if best.is_none_or(|(d, _, _)| dist[i][j] < d) {
                    best = Some((dist[i][j], i, j));
                }
            }
        }
        let Some((d, i, j)) = best else { break };
        if d > threshold {
            break;
        }
        let absorbed = members[j].take().unwrap();
        let (size_i, size_j) = (members[i].as_ref().unwrap().len() as f64, absorbed.len() as f64);
        for k in 0..n {
            if k == i || members[k].is_none() {
                continue;
            }
            let merged = (size_i * dist[k][i] + size_j * dist[k][j]) / (size_i + size_j);
            dist[k][i] = merged;
            dist[i][k] = merged;
        }
        members[i].as_mut().unwrap().extend(absorbed);
    }

    Ok(members
        .into_iter()
        .flatten()
        .map(|mut group| {
            group.sort_unstable();
            group.into_iter().map(|i| vectors[i].0.clone()).collect()
        })
        .collect())
}
