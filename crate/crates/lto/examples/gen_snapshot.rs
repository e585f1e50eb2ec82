//! Regenerates the bundled stand-in snapshot under `data/snapshot/`.
//!
//! Run with `cargo run -p lto --example gen_snapshot`. Output is a pure
//! function of the seed below.

use std::collections::BTreeSet;
use std::path::Path;

use lto::core::{Theme, ThemeName};
use lto::textio::serialize_theme_document;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x4c54_4f5f_3236_3536;
const CLASS_COUNT: usize = 2656;
const VERSION: &str = "2656-synthetic.1";

const ROOT: &str = "literary thematic entity";
const BRANCHES: [&str; 3] = [
    "the human condition thematic entity",
    "the pursuit of knowledge thematic entity",
    "speculative fiction thematic entity",
];

const HUMAN_SEEDS: &[&str] = &[
    "human individual", "human pair", "human society", "the desire for vengeance", "mother and daughter",
    "husband and wife", "friendship", "international issue", "weapons of mass destruction",
    "biological weapons", "chemical weapons", "nuclear weapons", "coming of age", "loyalty", "betrayal",
];
const KNOWLEDGE_SEEDS: &[&str] = &[
    "the pursuit of scientific knowledge", "religious belief", "philosophy of mind", "artistic expression",
    "the limits of knowledge", "moral philosophy",
];
const SPECULATIVE_SEEDS: &[&str] = &[
    "locationally distinguished being", "extraterrestrial being", "Venusian extraterrestrial",
    "mysterious maker alien race", "Dyson sphere", "flying car", "existential risk to civilization",
    "time travel", "artificial intelligence", "faster than light travel",
];

const QUALIFIERS: &[&str] = &[
    "ancient", "forbidden", "hidden", "public", "private", "reluctant", "failed", "sudden", "lost",
    "unrequited", "mutual", "broken", "secret", "collective", "inherited", "forced", "voluntary",
    "accidental", "ritual", "distant", "domestic", "foreign", "rural", "urban", "nomadic", "imperial",
    "colonial", "postwar", "wartime", "interstellar", "subterranean", "aquatic", "robotic", "cybernetic",
    "genetic", "telepathic", "immortal", "artificial", "parallel", "dystopian", "utopian", "posthuman",
    "prophetic", "mythic", "sacred", "profane", "scientific", "mechanical", "digital", "orbital",
];
const SUBJECTS: &[&str] = &[
    "sacrifice", "guilt", "grief", "jealousy", "ambition", "pride", "redemption", "exile", "duty",
    "honor", "deception", "obsession", "madness", "memory", "identity", "freedom", "slavery",
    "rebellion", "tyranny", "justice", "revenge", "forgiveness", "courage", "cowardice", "greed",
    "charity", "rivalry", "mentorship", "inheritance", "marriage", "parenthood", "childhood",
    "old age", "death", "rebirth", "contact", "invasion", "colonization", "quarantine", "surveillance",
    "censorship", "propaganda", "diplomacy", "espionage", "mutiny", "trade", "pilgrimage", "prophecy",
    "experimentation", "discovery", "invention", "automation", "augmentation", "cloning",
    "terraforming", "hibernation", "teleportation", "simulation", "uplift", "evolution",
];

fn name(raw: &str) -> ThemeName {
    ThemeName::new(raw).expect("generator names are valid")
}

fn main() -> std::io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut themes: Vec<Theme> = Vec::with_capacity(CLASS_COUNT);
    let mut taken: BTreeSet<String> = BTreeSet::new();

    themes.push(Theme::new(name(ROOT)).with_definition("Root class of every literary theme."));
    taken.insert(ROOT.to_string());
    // Per branch: indices into `themes` that may serve as parents.
    let mut pools: Vec<Vec<usize>> = Vec::new();
    for branch in BRANCHES {
        taken.insert(branch.to_string());
        pools.push(vec![themes.len()]);
        themes.push(
            Theme::new(name(branch))
                .with_definition(format!("Top-level grouping for {}.", branch.trim_end_matches(" thematic entity")))
                .with_parent(name(ROOT)),
        );
    }
    for (branch, seeds) in [HUMAN_SEEDS, KNOWLEDGE_SEEDS, SPECULATIVE_SEEDS].into_iter().enumerate() {
        for seed in seeds {
            let parent = *pools[branch].choose(&mut rng).unwrap();
            add(&mut themes, &mut taken, &mut pools[branch], seed.to_string(), parent);
        }
    }

    let mut combos: Vec<String> = QUALIFIERS
        .iter()
        .flat_map(|q| SUBJECTS.iter().map(move |s| format!("{q} {s}")))
        .collect();
    combos.shuffle(&mut rng);
    combos.retain(|c| !taken.contains(c));
    let mut combos = combos.into_iter();
    while themes.len() < CLASS_COUNT {
        let branch = match rng.gen_range(0..10) {
            0..=4 => 0,
            5..=6 => 1,
            _ => 2,
        };
        // Bias toward recent entries so branches grow some depth.
        let pool = &pools[branch];
        let pick = if rng.gen_bool(0.6) {
            pool[rng.gen_range(pool.len().saturating_sub(40)..pool.len())]
        } else {
            pool[rng.gen_range(0..pool.len())]
        };
        let raw = combos.next().expect("enough name combinations");
        let at = add(&mut themes, &mut taken, &mut pools[branch], raw, pick);
        // A second parent from any earlier theme keeps the graph acyclic.
        if rng.gen_bool(0.05) {
            let other = rng.gen_range(1..at);
            if other != pick {
                let extra = themes[other].name.clone();
                themes[at].parents.push(extra);
            }
        }
        if rng.gen_bool(0.3) {
            let reference = format!("urn:lto-snapshot:entry:{at}");
            themes[at].references.push(reference);
        }
        if rng.gen_bool(0.02) {
            let (first, rest) = themes[at].name.split_once(' ').unwrap_or((&themes[at].name, ""));
            let alias = format!("{rest} ({first})");
            if taken.insert(alias.clone()) {
                themes[at].aliases.push(name(&alias));
            }
        }
    }

    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/snapshot");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("themes.lto.txt"), serialize_theme_document(&themes))?;
    let manifest = serde_json::json!({
        "name": "literary theme ontology snapshot",
        "version": VERSION,
        "class_count": CLASS_COUNT,
        "root": ROOT,
        "root_children": BRANCHES.len(),
        "source": "deterministic synthetic stand-in",
        "seed": SEED,
    });
    let mut text = serde_json::to_string_pretty(&manifest).unwrap();
    text.push('\n');
    std::fs::write(dir.join("manifest.json"), text)?;
    println!("wrote {} themes to {}", themes.len(), dir.display());
    Ok(())
}

fn add(themes: &mut Vec<Theme>, taken: &mut BTreeSet<String>, pool: &mut Vec<usize>, raw: String, parent: usize) -> usize {
    assert!(taken.insert(raw.clone()), "duplicate generated name {raw}");
    let at = themes.len();
    let parent = themes[parent].name.clone();
    themes.push(
        Theme::new(name(&raw))
            .with_definition(format!("A story gives prominent attention to {raw}."))
            .with_parent(parent),
    );
    pool.push(at);
    at
}
