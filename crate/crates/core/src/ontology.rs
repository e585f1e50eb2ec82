//! The validated theme DAG and its closure queries.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::name::normalize_lookup;
use crate::validate::ValidationReport;
use crate::{Code, Diagnostic, Error, Theme, ThemeName};

/// An immutable, structurally valid is-a DAG of themes with a single root.
///
/// Themes are stored sorted by name, so internal ids order the same way names
/// do. Ancestor and descendant sets are computed once at build time.
#[derive(Debug, Clone)]
pub struct ThemeOntology {
    themes: Vec<Theme>,
    by_name: BTreeMap<ThemeName, usize>,
    by_alias: BTreeMap<ThemeName, usize>,
    root: usize,
    parents: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<usize>,
    // Both closures are sorted by id.
    ancestors: Vec<Vec<usize>>,
    descendants: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyStats {
    pub class_count: usize,
    pub leaf_count: usize,
    /// Longest root path; the root has depth 0.
    pub max_depth: usize,
    /// Descendant count of each child of the root.
    pub root_branch_sizes: BTreeMap<ThemeName, usize>,
    pub multi_parent_count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MatchField {
    Name,
    Alias,
    Definition,
}

impl MatchField {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchField::Name => "name",
            MatchField::Alias => "alias",
            MatchField::Definition => "definition",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub name: ThemeName,
    pub field: MatchField,
    /// Share of the matched field covered by the query, in (0, 1].
    pub score: f64,
}

/// Output of the structural checks, shared by `build` and `validate`.
pub(crate) struct Analysis {
    pub ontology: Option<ThemeOntology>,
    pub issues: Vec<Diagnostic>,
}

impl ThemeOntology {
    /// Builds the DAG, or returns a report listing every structural violation.
    pub fn build(themes: Vec<Theme>) -> Result<Self, ValidationReport> {
        let analysis = analyze(themes);
        match analysis.ontology {
            Some(ontology) => Ok(ontology),
            None => Err(ValidationReport::new(analysis.issues)),
        }
    }

    pub fn len(&self) -> usize {
        self.themes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.themes.is_empty()
    }

    pub fn root(&self) -> &ThemeName {
        &self.themes[self.root].name
    }

    /// Themes in name order.
    pub fn themes(&self) -> impl ExactSizeIterator<Item = &Theme> + '_ {
        self.themes.iter()
    }

    pub fn get(&self, name: &str) -> Option<&Theme> {
        self.id_of(name).map(|id| &self.themes[id])
    }

    /// Resolves a theme name or alias to the canonical theme name.
    pub fn resolve(&self, name: &str) -> Result<&ThemeName, Error> {
        self.id_of(name)
            .map(|id| &self.themes[id].name)
            .ok_or_else(|| Error::UnknownTheme(name.into()))
    }

    /// Longest path length from the root.
    pub fn depth(&self, name: &str) -> Result<usize, Error> {
        Ok(self.depth[self.require(name)?])
    }

    pub fn parents(&self, name: &str) -> Result<Vec<&ThemeName>, Error> {
        let id = self.require(name)?;
        Ok(self.names(self.parents[id].iter().copied()))
    }

    pub fn children(&self, name: &str) -> Result<Vec<&ThemeName>, Error> {
        let id = self.require(name)?;
        Ok(self.names(self.children[id].iter().copied()))
    }

    /// All proper ancestors, ordered by (depth, name).
    pub fn ancestors(&self, name: &str) -> Result<Vec<&ThemeName>, Error> {
        let id = self.require(name)?;
        Ok(self.by_depth_then_name(&self.ancestors[id]))
    }

    /// All proper descendants, ordered by (depth, name).
    pub fn descendants(&self, name: &str) -> Result<Vec<&ThemeName>, Error> {
        let id = self.require(name)?;
        Ok(self.by_depth_then_name(&self.descendants[id]))
    }

    /// Reflexive-transitive is-a: true iff `general` is `specific` or one of
    /// its ancestors.
    pub fn subsumes(&self, general: &str, specific: &str) -> Result<bool, Error> {
        let general = self.require(general)?;
        let specific = self.require(specific)?;
        Ok(self.subsumes_id(general, specific))
    }

    pub fn stats(&self) -> OntologyStats {
        let root_branch_sizes = self.children[self.root]
            .iter()
            .map(|&c| (self.themes[c].name.clone(), self.descendants[c].len()))
            .collect();
        OntologyStats {
            class_count: self.themes.len(),
            leaf_count: self.children.iter().filter(|c| c.is_empty()).count(),
            max_depth: self.depth.iter().copied().max().unwrap_or(0),
            root_branch_sizes,
            multi_parent_count: self.parents.iter().filter(|p| p.len() > 1).count(),
        }
    }

    /// Case-insensitive substring search over names, aliases and definitions.
    ///
    /// Each theme is reported once, under its best field. Hits are ranked by
    /// field (name, alias, definition), then by score descending, then name.
    pub fn search(&self, query: &str) -> Vec<SearchHit> {
        let needle = query.trim().to_lowercase();
        if needle.is_empty() {
            return Vec::new();
        }
        let needle_len = needle.chars().count() as f64;
        let score_of = |text: &str| -> Option<f64> {
            let hay = text.to_lowercase();
            hay.contains(&needle)
                .then(|| needle_len / hay.chars().count() as f64)
        };

        let mut hits: Vec<SearchHit> = Vec::new();
        for theme in &self.themes {
            let best = if let Some(score) = score_of(&theme.name) {
                Some((MatchField::Name, score))
            } else if let Some(score) = theme
                .aliases
                .iter()
                .filter_map(|a| score_of(a))
                .max_by(f64::total_cmp)
            {
                Some((MatchField::Alias, score))
            } else {
                score_of(&theme.definition).map(|s| (MatchField::Definition, s))
            };
            if let Some((field, score)) = best {
                hits.push(SearchHit { name: theme.name.clone(), field, score });
            }
        }
        hits.sort_by(|a, b| {
            a.field
                .cmp(&b.field)
                .then_with(|| b.score.total_cmp(&a.score))
                .then_with(|| a.name.cmp(&b.name))
        });
        hits
    }

    // Id-level access for the analytics module.

    pub(crate) fn id_of(&self, name: &str) -> Option<usize> {
        let key = normalize_lookup(name);
        self.by_name
            .get(key.as_str())
            .or_else(|| self.by_alias.get(key.as_str()))
            .copied()
    }

    pub(crate) fn require(&self, name: &str) -> Result<usize, Error> {
        self.id_of(name).ok_or_else(|| Error::UnknownTheme(name.into()))
    }

    pub(crate) fn root_id(&self) -> usize {
        self.root
    }

    pub(crate) fn name_of(&self, id: usize) -> &ThemeName {
        &self.themes[id].name
    }

    pub(crate) fn ancestor_ids(&self, id: usize) -> &[usize] {
        &self.ancestors[id]
    }

    pub(crate) fn subsumes_id(&self, general: usize, specific: usize) -> bool {
        general == specific || self.ancestors[specific].binary_search(&general).is_ok()
    }

    fn names(&self, ids: impl Iterator<Item = usize>) -> Vec<&ThemeName> {
        ids.map(|id| &self.themes[id].name).collect()
    }

    fn by_depth_then_name(&self, ids: &[usize]) -> Vec<&ThemeName> {
        let mut ordered = ids.to_vec();
        // Ids follow name order, so (depth, id) is (depth, name).
        ordered.sort_by_key(|&id| (self.depth[id], id));
        self.names(ordered.into_iter())
    }
}

pub(crate) fn analyze(mut themes: Vec<Theme>) -> Analysis {
    let mut issues = Vec::new();

    // Sorting the full records makes every later step independent of input order.
    themes.sort();
    let mut unique: Vec<Theme> = Vec::with_capacity(themes.len());
    let mut copies = 0usize;
    for theme in themes {
        match unique.last() {
            Some(prev) if prev.name == theme.name => copies += 1,
            _ => {
                flush_duplicates(&mut issues, unique.last(), copies);
                copies = 0;
                unique.push(theme);
            }
        }
    }
    flush_duplicates(&mut issues, unique.last(), copies);
    let themes = unique;

    let by_name: BTreeMap<ThemeName, usize> = themes
        .iter()
        .enumerate()
        .map(|(id, t)| (t.name.clone(), id))
        .collect();

    // Aliases.
    let mut claims: BTreeMap<&ThemeName, Vec<usize>> = BTreeMap::new();
    for (id, theme) in themes.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for alias in &theme.aliases {
            if !seen.insert(alias) {
                issues.push(
                    Diagnostic::error(
                        Code::DupEntry,
                        format!("alias \"{alias}\" listed twice on \"{}\"", theme.name),
                    )
                    .with_subject(theme.name.as_str()),
                );
                continue;
            }
            if *alias == theme.name {
                issues.push(
                    Diagnostic::error(
                        Code::AliasClash,
                        format!("\"{}\" lists its own name as an alias", theme.name),
                    )
                    .with_subject(theme.name.as_str()),
                );
                continue;
            }
            claims.entry(alias).or_default().push(id);
        }
    }
    let mut by_alias = BTreeMap::new();
    for (alias, owners) in claims {
        if let Some(&named) = by_name.get(alias) {
            for &owner in &owners {
                issues.push(
                    Diagnostic::error(
                        Code::AliasClash,
                        format!(
                            "alias \"{alias}\" of \"{}\" is also the name of theme \"{}\"",
                            themes[owner].name, themes[named].name
                        ),
                    )
                    .with_subject(themes[owner].name.as_str()),
                );
            }
        } else if owners.len() > 1 {
            let list: Vec<&str> = owners.iter().map(|&o| themes[o].name.as_str()).collect();
            issues.push(
                Diagnostic::error(
                    Code::AliasClash,
                    format!("alias \"{alias}\" is claimed by {}", list.join(", ")),
                )
                .with_subject(themes[owners[0]].name.as_str()),
            );
        } else {
            by_alias.insert(alias.clone(), owners[0]);
        }
    }

    // Parent edges.
    let mut parents: Vec<Vec<usize>> = vec![Vec::new(); themes.len()];
    for (id, theme) in themes.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for parent in &theme.parents {
            if !seen.insert(parent) {
                issues.push(
                    Diagnostic::error(
                        Code::DupEntry,
                        format!("parent \"{parent}\" listed twice on \"{}\"", theme.name),
                    )
                    .with_subject(theme.name.as_str()),
                );
                continue;
            }
            match by_name.get(parent) {
                Some(&p) => parents[id].push(p),
                None => {
                    let hint = match by_alias.get(parent) {
                        Some(&owner) => format!(" (it is an alias of \"{}\")", themes[owner].name),
                        None => String::new(),
                    };
                    issues.push(
                        Diagnostic::error(
                            Code::DanglingParent,
                            format!("parent \"{parent}\" of \"{}\" is not a theme{hint}", theme.name),
                        )
                        .with_subject(theme.name.as_str()),
                    );
                }
            }
        }
    }

    // Exactly one theme may lack parents.
    let roots: Vec<usize> = (0..themes.len()).filter(|&id| themes[id].parents.is_empty()).collect();
    match roots.len() {
        1 => {}
        0 => issues.push(Diagnostic::error(
            Code::MultiRoot,
            "no theme is parentless; the ontology has no root",
        )),
        _ => {
            let list: Vec<&str> = roots.iter().map(|&r| themes[r].name.as_str()).collect();
            issues.push(
                Diagnostic::error(
                    Code::MultiRoot,
                    format!("{} parentless themes: {}", roots.len(), list.join(", ")),
                )
                .with_subject(themes[roots[0]].name.as_str()),
            );
        }
    }

    for cycle in witness_cycles(&parents) {
        let path: Vec<&str> = cycle.iter().map(|&id| themes[id].name.as_str()).collect();
        issues.push(
            Diagnostic::error(Code::Cycle, format!("is-a cycle: {}", path.join(" -> ")))
                .with_subject(themes[cycle[0]].name.as_str()),
        );
    }

    if themes.is_empty() {
        issues.push(Diagnostic::error(Code::MultiRoot, "the theme list is empty"));
    }
    if issues.iter().any(Diagnostic::is_error) {
        return Analysis { ontology: None, issues };
    }

    let root = roots[0];
    for list in &mut parents {
        list.sort_unstable();
    }
    let ontology = close(themes, by_name, by_alias, root, parents);
    Analysis { ontology: Some(ontology), issues }
}

fn flush_duplicates(issues: &mut Vec<Diagnostic>, kept: Option<&Theme>, copies: usize) {
    if let (Some(theme), true) = (kept, copies > 0) {
        issues.push(
            Diagnostic::error(
                Code::DupName,
                format!("theme \"{}\" is defined {} times", theme.name, copies + 1),
            )
            .with_subject(theme.name.as_str()),
        );
    }
}

/// Computes depth and both closures. `parents` must be acyclic.
fn close(
    themes: Vec<Theme>,
    by_name: BTreeMap<ThemeName, usize>,
    by_alias: BTreeMap<ThemeName, usize>,
    root: usize,
    parents: Vec<Vec<usize>>,
) -> ThemeOntology {
    let n = themes.len();
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (child, ps) in parents.iter().enumerate() {
        for &p in ps {
            children[p].push(child);
        }
    }

    // Kahn's algorithm: every theme after all of its parents.
    let mut pending: Vec<usize> = parents.iter().map(Vec::len).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&id| pending[id] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(id) = queue.pop_front() {
        order.push(id);
        for &c in &children[id] {
            pending[c] -= 1;
            if pending[c] == 0 {
                queue.push_back(c);
            }
        }
    }
    debug_assert_eq!(order.len(), n);

    let mut depth = vec![0usize; n];
    let mut ancestors: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &id in &order {
        let mut acc = Vec::new();
        for &p in &parents[id] {
            depth[id] = depth[id].max(depth[p] + 1);
            acc.push(p);
            acc.extend_from_slice(&ancestors[p]);
        }
        acc.sort_unstable();
        acc.dedup();
        ancestors[id] = acc;
    }

    let mut descendants: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (id, anc) in ancestors.iter().enumerate() {
        for &a in anc {
            descendants[a].push(id);
        }
    }

    ThemeOntology {
        themes,
        by_name,
        by_alias,
        root,
        parents,
        children,
        depth,
        ancestors,
        descendants,
    }
}

/// One witness per cyclic strongly connected component of the child-to-parent
/// graph: the shortest cycle through the component's smallest id, written as
/// a closed path `[start, .., start]`.
fn witness_cycles(parents: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let components = strongly_connected(parents);
    let mut out = Vec::new();
    for members in components {
        let start = members[0];
        let cyclic = members.len() > 1 || parents[start].contains(&start);
        if !cyclic {
            continue;
        }
        let inside: BTreeSet<usize> = members.iter().copied().collect();
        out.push(shortest_cycle_through(parents, &inside, start));
    }
    out.sort();
    out
}

fn shortest_cycle_through(parents: &[Vec<usize>], inside: &BTreeSet<usize>, start: usize) -> Vec<usize> {
    let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    let mut visited = BTreeSet::from([start]);
    while let Some(node) = queue.pop_front() {
        let mut next: Vec<usize> = parents[node].iter().copied().filter(|p| inside.contains(p)).collect();
        next.sort_unstable();
        next.dedup();
        for p in next {
            if p == start {
                let mut path = vec![start];
                let mut cur = node;
                while cur != start {
                    path.push(cur);
                    cur = prev[&cur];
                }
                path[1..].reverse();
                path.push(start);
                return path;
            }
            if visited.insert(p) {
                prev.insert(p, node);
                queue.push_back(p);
            }
        }
    }
    unreachable!("every member of a cyclic component lies on a cycle through the start")
}

/// Kosaraju's algorithm, iterative. Each component's members are sorted.
fn strongly_connected(edges: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = edges.len();
    let mut reverse: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (from, tos) in edges.iter().enumerate() {
        for &to in tos {
            reverse[to].push(from);
        }
    }

    let mut finished = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some((node, next)) = stack.pop() {
            if next < edges[node].len() {
                stack.push((node, next + 1));
                let to = edges[node][next];
                if !seen[to] {
                    seen[to] = true;
                    stack.push((to, 0));
                }
            } else {
                finished.push(node);
            }
        }
    }

    let mut assigned = vec![false; n];
    let mut components = Vec::new();
    for &s in finished.iter().rev() {
        if assigned[s] {
            continue;
        }
        assigned[s] = true;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(node) = stack.pop() {
            for &to in &reverse[node] {
                if !assigned[to] {
                    assigned[to] = true;
                    members.push(to);
                    stack.push(to);
                }
            }
        }
        members.sort_unstable();
        components.push(members);
    }
    components
}
