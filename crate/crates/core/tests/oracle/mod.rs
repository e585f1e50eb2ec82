//! Reference implementations used as test oracles. They favour directness
//! over speed: integer enumeration for the exact tests, and a from-scratch
//! pass over the closure for weights and similarity.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lto_core::{AnnotatedCorpus, ThemeOntology};

/// Pascal's triangle up to row `n`, exact in u128.
pub fn pascal(n: usize) -> Vec<Vec<u128>> {
    let mut rows: Vec<Vec<u128>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![1u128; i + 1];
        for j in 1..i {
            row[j] = rows[i - 1][j - 1] + rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

pub fn choose(table: &[Vec<u128>], n: u64, k: u64) -> u128 {
    if k > n {
        0
    } else {
        table[n as usize][k as usize]
    }
}

/// `P(X >= k)` for X hypergeometric, as an exact ratio of draw counts.
pub fn upper_tail_ratio(table: &[Vec<u128>], k: u64, successes: u64, draws: u64, population: u64) -> (u128, u128) {
    let total = choose(table, population, draws);
    let mut favourable = 0u128;
    for i in k..=draws.min(successes) {
        if draws - i <= population - successes {
            favourable += choose(table, successes, i) * choose(table, population - successes, draws - i);
        }
    }
    (favourable, total)
}

pub fn upper_tail(table: &[Vec<u128>], k: u64, successes: u64, draws: u64, population: u64) -> f64 {
    let (num, den) = upper_tail_ratio(table, k, successes, draws, population);
    num as f64 / den as f64
}

/// Two-sided Fisher p-value by enumerating every table with the observed
/// margins. A table counts when its point mass is at most the observed one
/// times `1 + 1e-7`; the comparison is done on integer counts.
pub fn fisher(table: &[Vec<u128>], a: u64, b: u64, c: u64, d: u64) -> f64 {
    let (row1, row2, col1) = (a + b, c + d, a + c);
    let n = row1 + row2;
    let mass = |x: u64| choose(table, row1, x) * choose(table, row2, col1 - x);
    let observed = mass(a);
    let lo = col1.saturating_sub(row2);
    let hi = row1.min(col1);
    let mut kept = 0u128;
    for x in lo..=hi {
        let m = mass(x);
        if m * 10_000_000 <= observed * 10_000_001 {
            kept += m;
        }
    }
    kept as f64 / choose(table, n, col1) as f64
}

/// Benjamini-Hochberg by the textbook formula, evaluated for every rank.
pub fn benjamini_hochberg(p: &[f64]) -> Vec<f64> {
    let m = p.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| p[i].partial_cmp(&p[j]).unwrap());
    let mut q = vec![0.0; m];
    for (i, &index) in order.iter().enumerate() {
        let mut best = 1.0f64;
        for (j, &other) in order.iter().enumerate().skip(i) {
            best = best.min(p[other] * m as f64 / (j + 1) as f64);
        }
        q[index] = best;
    }
    q
}

/// Propagated weight of every non-root theme for one story, straight from
/// the definition: the largest tier weight among annotations it subsumes.
pub fn weights(corpus: &AnnotatedCorpus, ontology: &ThemeOntology, story: &str) -> BTreeMap<String, u32> {
    let entry = corpus.get(story).expect("story exists");
    let mut out = BTreeMap::new();
    for theme in ontology.themes() {
        if &theme.name == ontology.root() {
            continue;
        }
        let best = entry
            .annotations
            .iter()
            .filter(|a| ontology.subsumes(&theme.name, &a.theme).unwrap())
            .map(|a| a.tier.weight())
            .max();
        if let Some(w) = best {
            out.insert(theme.name.to_string(), w);
        }
    }
    out
}

pub fn jaccard(a: &BTreeMap<String, u32>, b: &BTreeMap<String, u32>) -> f64 {
    let mut lo = 0u32;
    let mut hi = 0u32;
    for key in a.keys().chain(b.keys().filter(|k| !a.contains_key(*k))) {
        let x = a.get(key).copied().unwrap_or(0);
        let y = b.get(key).copied().unwrap_or(0);
        lo += x.min(y);
        hi += x.max(y);
    }
    if hi == 0 {
        0.0
    } else {
        f64::from(lo) / f64::from(hi)
    }
}

pub fn similarity(corpus: &AnnotatedCorpus, ontology: &ThemeOntology, a: &str, b: &str) -> f64 {
    jaccard(&weights(corpus, ontology, a), &weights(corpus, ontology, b))
}

/// Average-linkage clustering recomputing every cluster distance from the
/// pairwise matrix at each step.
pub fn average_linkage(ids: &[String], distance: &dyn Fn(&str, &str) -> f64, threshold: f64) -> Vec<Vec<String>> {
    let mut clusters: Vec<Vec<String>> = ids.iter().map(|id| vec![id.clone()]).collect();
    clusters.sort();
    loop {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in (i + 1)..clusters.len() {
                let mut total = 0.0;
                for x in &clusters[i] {
                    for y in &clusters[j] {
                        total += distance(x, y);
                    }
                }
                let d = total / (clusters[i].len() * clusters[j].len()) as f64;
                // Clusters stay sorted by label, so the first strict minimum
                // is also the smallest label pair among ties.
                if best.is_none_or(|(bd, _, _)| d < bd - 1e-12) {
                    best = Some((d, i, j));
                }
            }
        }
        match best {
            Some((d, i, j)) if d <= threshold => {
                let merged = clusters.remove(j);
                clusters[i].extend(merged);
                clusters[i].sort();
                clusters.sort();
            }
            _ => return clusters,
        }
    }
}
