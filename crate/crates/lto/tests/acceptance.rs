//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Each criterion also has a wall-clock budget.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{load_fixture, oracle, DAY_THE_EARTH, VENUS_ENVOY};
use lto::core::analytics::{enrich, propagate, recommend, story_similarity};
use lto::core::exact::{bh_adjust, fisher_two_sided, hypergeometric_upper_tail, Correction};
use lto::core::{validate, AnnotatedCorpus, Code, StoryEntry, StoryId, Theme, ThemeName, ThemeOntology, Tier};
use lto::snapshot;
use lto::textio::{parse_story_document, parse_theme_document, serialize_story_document, serialize_theme_document};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_260_101;

/// Absolute tolerance for the enumeration oracles.
const ORACLE_TOLERANCE: f64 = 1e-9;
/// Tolerance for the Benjamini-Hochberg comparison.
const BH_TOLERANCE: f64 = 1e-12;

type Outcome = Result<String, String>;

/// Number, title, time budget in seconds, and the check itself.
type Criterion = (u8, &'static str, u64, fn() -> Outcome);

fn check(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "snapshot facts", 5, snapshot_facts),
        (2, "consistency and cycle detection", 10, consistency),
        (3, "hypergeometric oracle", 60, hypergeometric),
        (4, "Fisher oracle", 30, fisher),
        (5, "Benjamini-Hochberg oracle", 5, benjamini_hochberg),
        (6, "canonical round-trip", 30, round_trip),
        (7, "fixture retrieval", 5, fixture_retrieval),
        (8, "CLI determinism", 30, determinism),
        (9, "similarity properties", 30, similarity),
    ];
    let mut failures = 0;
    for (number, title, budget, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(budget) => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget}s"))
            }
            other => other,
        };
        match outcome {
            Ok(detail) => println!("criterion {number} PASS  {title}: {detail} ({elapsed:.2?})"),
            Err(detail) => {
                failures += 1;
                println!("criterion {number} FAIL  {title}: {detail} ({elapsed:.2?})");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}

fn snapshot_facts() -> Outcome {
    let manifest = snapshot::manifest();
    let ontology = snapshot::load().map_err(|r| format!("snapshot does not build: {} errors", r.error_count))?;
    let stats = ontology.stats();
    check(stats.class_count == manifest.class_count, || {
        format!("class_count {} != manifest {}", stats.class_count, manifest.class_count)
    })?;
    check(stats.root_branch_sizes.len() == 3, || format!("{} root branches", stats.root_branch_sizes.len()))?;

    let output = Command::new(env!("CARGO_BIN_EXE_lto"))
        .args(["--snapshot", "stats"])
        .env_remove("LTO_THEME_PATH")
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&output.stdout);
    check(output.status.success(), || format!("`lto --snapshot stats` exited {:?}", output.status.code()))?;
    let expected = format!("class_count\t\t{}\n", manifest.class_count);
    check(stdout.contains(&expected), || format!("stats output lacks {expected:?}"))?;
    check(stdout.contains(&format!("root_children\t{}\t3\n", manifest.root)), || "stats root_children != 3".into())?;
    Ok(format!("{} classes as in the manifest, 3 root branches", stats.class_count))
}

fn snapshot_themes() -> Vec<Theme> {
    parse_theme_document(snapshot::THEMES).0
}

fn consistency() -> Outcome {
    let themes = snapshot_themes();
    let report = validate(&themes, false);
    check(report.count(Code::Cycle) == 0 && report.error_count == 0, || {
        format!("snapshot has {} errors ({} cycles)", report.error_count, report.count(Code::Cycle))
    })?;
    let ontology = ThemeOntology::build(themes.clone()).map_err(|_| "snapshot does not build".to_string())?;
    let candidates: Vec<&Theme> = ontology.themes().filter(|t| t.name != *ontology.root()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut flagged = 0;
    for _ in 0..100 {
        let child = candidates.choose(&mut rng).unwrap();
        let ancestors = ontology.ancestors(&child.name).unwrap();
        let ancestor = ancestors.choose(&mut rng).unwrap();
        let mut mutated = themes.clone();
        let target = mutated.iter_mut().find(|t| t.name == **ancestor).unwrap();
        target.parents.push(child.name.clone());
        if validate(&mutated, false).count(Code::Cycle) >= 1 {
            flagged += 1;
        }
    }
    check(flagged == 100, || format!("only {flagged}/100 back-edge mutations flagged"))?;
    Ok("0 cycles in the snapshot; 100/100 back-edge mutations flagged CYCLE".into())
}

fn hypergeometric() -> Outcome {
    let table = oracle::pascal(25);
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    for population in 0..=25u64 {
        for successes in 0..=population {
            for draws in 0..=population {
                for k in 0..=draws.min(successes) {
                    let got = hypergeometric_upper_tail(k, successes, draws, population).map_err(|e| e.to_string())?;
                    let want = oracle::upper_tail(&table, k, successes, draws, population);
                    let diff = (got - want).abs();
                    worst = worst.max(diff);
                    check(diff <= ORACLE_TOLERANCE && (0.0..=1.0).contains(&got), || {
                        format!("k={k} K={successes} n={draws} N={population}: {got} vs {want}")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} tuples, max abs error {worst:.1e}"))
}

fn fisher() -> Outcome {
    let table = oracle::pascal(40);
    let mut cases = 0usize;
    let mut worst = 0.0f64;
    for a in 0..=20u64 {
        for b in 0..=20 - a {
            for c in 0..=20 - a {
                for d in 0..=(20 - c).min(20 - b) {
                    let got = fisher_two_sided(a, b, c, d);
                    let want = oracle::fisher(&table, a, b, c, d);
                    let diff = (got - want).abs();
                    worst = worst.max(diff);
                    check(diff <= ORACLE_TOLERANCE, || format!("({a},{b},{c},{d}): {got} vs {want}"))?;
                    check(got.to_bits() == fisher_two_sided(c, d, a, b).to_bits(), || {
                        format!("row swap changes ({a},{b},{c},{d})")
                    })?;
                    check(got.to_bits() == fisher_two_sided(b, a, d, c).to_bits(), || {
                        format!("column swap changes ({a},{b},{c},{d})")
                    })?;
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} tables with margins <= 20, max abs error {worst:.1e}, swaps exact"))
}

fn benjamini_hochberg() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for round in 0..1000 {
        let m = rng.gen_range(1..=10);
        let p: Vec<f64> = (0..m)
            .map(|_| if rng.gen_bool(0.2) { [0.01, 0.05, 0.5, 1.0][rng.gen_range(0..4)] } else { rng.gen() })
            .collect();
        let got = bh_adjust(&p).map_err(|e| e.to_string())?;
        let want = oracle::benjamini_hochberg(&p);
        for (g, w) in got.iter().zip(&want) {
            check((g - w).abs() <= BH_TOLERANCE, || format!("round {round}: {p:?} gives {got:?}, oracle {want:?}"))?;
        }
    }
    Ok("1000 random vectors (m <= 10) agree within 1e-12".into())
}

const WORDS: &[&str] = &[
    "alien", "war", "love", "Dyson", "sphere", "caf\u{e9}", "robot", "mother", "grief", "x-ray", "time", "the",
    "of", "loss", "100", "ship",
];

fn phrase(rng: &mut ChaCha8Rng, max: usize) -> String {
    let len = rng.gen_range(1..=max);
    (0..len).map(|_| *WORDS.choose(rng).unwrap()).collect::<Vec<_>>().join(" ")
}

fn lines(rng: &mut ChaCha8Rng, max: usize) -> Vec<String> {
    (0..rng.gen_range(0..=max)).map(|_| phrase(rng, 6)).collect()
}

/// A theme document that is well formed but not canonical: random block and
/// section order, repeated and unknown sections, padding, CRLF, extra blanks.
fn generated_document(rng: &mut ChaCha8Rng) -> String {
    let mut blocks = Vec::new();
    for _ in 0..rng.gen_range(0..=8) {
        let name = phrase(rng, 4);
        let mut sections: Vec<(String, Vec<String>)> = vec![
            ("Description".into(), lines(rng, 3)),
            ("Parents".into(), (0..rng.gen_range(0..=3)).map(|_| phrase(rng, 3)).collect()),
            ("Aliases".into(), (0..rng.gen_range(0..=2)).map(|_| phrase(rng, 3)).collect()),
            ("References".into(), lines(rng, 2)),
            ("Examples".into(), lines(rng, 2)),
            ("Notes".into(), lines(rng, 2)),
        ];
        if rng.gen_bool(0.3) {
            sections.push(("Mood".into(), lines(rng, 2)));
        }
        if rng.gen_bool(0.2) {
            sections.push(("Description".into(), lines(rng, 2)));
        }
        sections.shuffle(rng);
        let mut block = format!("{name}\n{}\n", "=".repeat(name.chars().count().max(3) + rng.gen_range(0..3)));
        for (field, body) in sections {
            if body.is_empty() && rng.gen_bool(0.7) {
                continue;
            }
            block.push_str(&format!("\n:: {field}\n"));
            for line in body {
                block.push_str(&line);
                block.push('\n');
            }
        }
        blocks.push(block);
    }
    let document = blocks.join(if rng.gen_bool(0.5) { "\n" } else { "\n\n\n" });
    let pad = rng.gen_bool(0.3);
    let crlf = rng.gen_bool(0.3);
    document
        .lines()
        .map(|l| if pad && !l.is_empty() { format!(" {l}  ") } else { l.to_string() })
        .map(|l| l + if crlf { "\r\n" } else { "\n" })
        .collect()
}

fn sorted(mut themes: Vec<Theme>) -> Vec<Theme> {
    themes.sort_by(|a, b| a.name.cmp(&b.name));
    themes
}

fn round_trip() -> Outcome {
    let fixture = std::fs::read_to_string(common::fixture_themes()).map_err(|e| e.to_string())?;
    let (themes, _) = parse_theme_document(&fixture);
    let once = serialize_theme_document(&themes);
    check(once == fixture, || "fixture theme document is not in canonical form".into())?;
    check(serialize_theme_document(&parse_theme_document(&once).0) == once, || "fixture not idempotent".into())?;
    let stories = std::fs::read_to_string(common::fixture_stories()).map_err(|e| e.to_string())?;
    let story_once = serialize_story_document(&parse_story_document(&stories).0);
    check(story_once == stories, || "fixture story document is not in canonical form".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for index in 0..500 {
        let document = generated_document(&mut rng);
        let (first, _) = parse_theme_document(&document);
        let once = serialize_theme_document(&first);
        let (second, diagnostics) = parse_theme_document(&once);
        check(diagnostics.is_empty(), || format!("document {index}: canonical output has diagnostics"))?;
        check(sorted(first) == second, || format!("document {index}: model changed after canonicalization"))?;
        check(serialize_theme_document(&second) == once, || format!("document {index}: not idempotent"))?;
    }

    let original = snapshot_themes();
    let reparsed = parse_theme_document(&serialize_theme_document(&original)).0;
    check(sorted(original.clone()) == reparsed, || "snapshot model changed after round-trip".into())?;
    Ok(format!("fixture canonical, 500 generated documents idempotent, {} snapshot themes equal", original.len()))
}

fn fixture_retrieval() -> Outcome {
    let loaded = load_fixture();
    let (corpus, ontology) = (&loaded.corpus, &loaded.ontology);
    let incidence = propagate(corpus, ontology).map_err(|e| e.to_string())?;
    let aliens = incidence.stories("extraterrestrial being").map_err(|e| e.to_string())?;
    let envoy = corpus.get(VENUS_ENVOY).ok_or("envoy story missing")?;
    check(
        envoy.annotations.len() == 1 && envoy.annotations[0].theme.as_str() == "Venusian extraterrestrial",
        || "the envoy story is not tagged only with the Venusian theme".into(),
    )?;
    check(aliens.contains(VENUS_ENVOY), || "descendant closure misses the Venusian story".into())?;
    check(aliens.len() == 2, || format!("{} stories under extraterrestrial being", aliens.len()))?;

    let rows = enrich(corpus, ontology, aliens, None, 2, Correction::default()).map_err(|e| e.to_string())?;
    let row = rows
        .iter()
        .find(|r| r.theme.as_str() == "extraterrestrial being")
        .ok_or("no enrichment row for extraterrestrial being")?;
    let want = oracle::upper_tail(&oracle::pascal(12), 2, 2, 2, 12);
    check((row.p - want).abs() <= ORACLE_TOLERANCE && (row.p - 1.0 / 66.0).abs() <= ORACLE_TOLERANCE, || {
        format!("p = {} (want 1/66)", row.p)
    })?;

    let top = recommend(corpus, ontology, DAY_THE_EARTH, 1).map_err(|e| e.to_string())?;
    check(top.first().is_some_and(|(id, _)| id.as_str() == VENUS_ENVOY), || {
        format!("top recommendation is {top:?}")
    })?;
    Ok(format!("incidence holds the Venusian story, p = {:.8}, top recommendation {VENUS_ENVOY}", row.p))
}

struct Run {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
}

fn run_binary(args: &[&str]) -> Result<Run, String> {
    let output = Command::new(env!("CARGO_BIN_EXE_lto"))
        .args(args)
        .env_remove("LTO_THEME_PATH")
        .output()
        .map_err(|e| e.to_string())?;
    Ok(Run { code: output.status.code(), stdout: output.stdout, stderr: output.stderr })
}

/// Writes the blocks of a canonical document in shuffled order.
fn permuted_copy(source: &Path, dest: &Path, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let text = std::fs::read_to_string(source).map_err(|e| e.to_string())?;
    let mut blocks: Vec<&str> = text.split("\n\n\n").map(|b| b.trim_end_matches('\n')).collect();
    blocks.shuffle(rng);
    std::fs::write(dest, blocks.join("\n\n\n") + "\n").map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let query = dir.path().join("query.txt");
    std::fs::write(&query, format!("{DAY_THE_EARTH}\n{VENUS_ENVOY}\n")).map_err(|e| e.to_string())?;
    let query = query.display().to_string();
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate"],
        vec!["lint"],
        vec!["stats"],
        vec!["query", "ancestors", "Venusian extraterrestrial"],
        vec!["query", "descendants", "the human condition thematic entity"],
        vec!["query", "subsumes", "international issue", "nuclear weapons"],
        vec!["search", "weapons"],
        vec!["enrich", "--query", &query],
        vec!["diff", "--group-a", &query],
        vec!["similar", DAY_THE_EARTH, VENUS_ENVOY],
        vec!["recommend", DAY_THE_EARTH],
        vec!["cluster", "--threshold", "0.5"],
        vec!["export-owl"],
    ];
    let themes = common::fixture_themes().display().to_string();
    let stories = common::fixture_stories().display().to_string();

    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut permutations = Vec::new();
    for i in 0..3 {
        let theme_copy = dir.path().join(format!("themes-{i}.lto.txt"));
        let story_copy = dir.path().join(format!("stories-{i}.sto.txt"));
        permuted_copy(Path::new(&themes), &theme_copy, &mut rng)?;
        permuted_copy(Path::new(&stories), &story_copy, &mut rng)?;
        permutations.push((theme_copy.display().to_string(), story_copy.display().to_string()));
    }

    let mut invocations = 0;
    for command in &commands {
        for format in ["tsv", "json-lines"] {
            let with = |t: &str, s: &str| {
                let mut args = command.clone();
                args.extend(["--themes", t, "--stories", s, "--format", format]);
                args.into_iter().map(String::from).collect::<Vec<_>>()
            };
            let base_args = with(&themes, &stories);
            let base_refs: Vec<&str> = base_args.iter().map(String::as_str).collect();
            let base = run_binary(&base_refs)?;
            check(base.code == Some(0) || command[0] == "lint", || format!("{command:?} exited {:?}", base.code))?;
            for _ in 1..5 {
                let again = run_binary(&base_refs)?;
                invocations += 1;
                check(again.code == base.code && again.stdout == base.stdout && again.stderr == base.stderr, || {
                    format!("{command:?} --format {format} differs between runs")
                })?;
            }
            for (t, s) in &permutations {
                let args = with(t, s);
                let refs: Vec<&str> = args.iter().map(String::as_str).collect();
                let permuted = run_binary(&refs)?;
                invocations += 1;
                // Diagnostics carry file names and lines, so only data is compared.
                check(permuted.code == base.code && permuted.stdout == base.stdout, || {
                    format!("{command:?} --format {format} depends on block order")
                })?;
            }
        }
    }
    Ok(format!("{} subcommand forms x 2 formats, {invocations} comparison runs identical", commands.len()))
}

fn random_corpus(ontology: &ThemeOntology, stories: usize, rng: &mut ChaCha8Rng) -> AnnotatedCorpus {
    let themes: Vec<ThemeName> = ontology.themes().map(|t| t.name.clone()).collect();
    let mut corpus = AnnotatedCorpus::new();
    for i in 0..stories {
        let mut entry = StoryEntry::new(StoryId::new(&format!("story-{i:03}")).unwrap());
        for _ in 0..rng.gen_range(0..=6) {
            entry = entry.annotate(themes.choose(rng).unwrap().clone(), *Tier::ALL.choose(rng).unwrap());
        }
        entry.dedup_annotations();
        corpus.insert(entry).unwrap();
    }
    corpus
}

fn similarity() -> Outcome {
    let ontology = snapshot::load().map_err(|_| "snapshot does not build".to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let corpus = random_corpus(&ontology, 300, &mut rng);
    let ids: Vec<String> = corpus.ids().map(|id| id.to_string()).collect();
    let sim = |c: &AnnotatedCorpus, a: &str, b: &str| story_similarity(c, &ontology, a, b).map_err(|e| e.to_string());

    for _ in 0..1000 {
        let a = ids.choose(&mut rng).unwrap();
        let b = ids.choose(&mut rng).unwrap();
        let ab = sim(&corpus, a, b)?;
        check(ab == sim(&corpus, b, a)?, || format!("sim({a},{b}) is not symmetric"))?;
        check((0.0..=1.0).contains(&ab), || format!("sim({a},{b}) = {ab}"))?;
        let annotated = corpus.get(a).unwrap().annotations.iter().any(|x| x.theme != *ontology.root());
        let own = sim(&corpus, a, a)?;
        check(own == if annotated { 1.0 } else { 0.0 }, || format!("sim({a},{a}) = {own}"))?;
    }

    let themes: Vec<ThemeName> = ontology.themes().map(|t| t.name.clone()).collect();
    for round in 0..200 {
        let a = ids.choose(&mut rng).unwrap().clone();
        let b = ids.iter().filter(|id| **id != a).collect::<Vec<_>>().choose(&mut rng).unwrap().to_string();
        let before = sim(&corpus, &a, &b)?;
        let extra = loop {
            let t = themes.choose(&mut rng).unwrap();
            if corpus.get(&a).unwrap().annotation(t).is_none() && corpus.get(&b).unwrap().annotation(t).is_none() {
                break t.clone();
            }
        };
        let tier = *Tier::ALL.choose(&mut rng).unwrap();
        let pair: Vec<StoryEntry> = [&a, &b]
            .iter()
            .map(|id| corpus.get(id).unwrap().clone().annotate(extra.clone(), tier))
            .collect();
        let (mutated, _) = AnnotatedCorpus::from_stories(pair);
        let after = sim(&mutated, &a, &b)?;
        check(after >= before, || format!("round {round}: adding {extra} lowered {before} to {after}"))?;
    }
    Ok("1000 pairs symmetric, bounded, self-similar; 200 shared-theme additions never lowered similarity".into())
}
