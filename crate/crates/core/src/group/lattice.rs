use std::collections::{BTreeMap, HashMap};

use super::{describe_subgroup, FiniteGroup, Subgroup};

/// Every subgroup of `g`, sorted canonically.
pub fn enumerate_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    subgroups_within(g, &g.whole())
}

/// Every subgroup of `ambient ≤ g`, sorted canonically.
///
/// Layered cyclic extension: each layer adjoins one element to every
/// subgroup found in the previous layer and keeps the new closures.
pub fn subgroups_within(g: &FiniteGroup, ambient: &Subgroup) -> Vec<Subgroup> {
    // subgroup -> a short generating set
    let mut found: BTreeMap<Subgroup, Vec<usize>> = BTreeMap::new();
    found.insert(g.trivial(), Vec::new());
    let mut layer = vec![(g.trivial(), Vec::new())];
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (s, gens) in &layer {
            for &x in ambient.elems() {
                if s.contains(x) {
                    continue;
                }
                let mut ext: Vec<usize> = gens.clone();
                ext.push(x);
                let t = g.generate(&ext);
                if !found.contains_key(&t) {
                    found.insert(t.clone(), ext.clone());
                    next.push((t, ext));
                }
            }
        }
        layer = next;
    }
    found.into_keys().collect()
}

/// Subgroups of an ambient subgroup `A ≤ G` partitioned into
/// `A`-conjugacy classes.
#[derive(Clone, Debug)]
pub struct SubgroupClassTable {
    ambient: Subgroup,
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    reps: Vec<usize>,
    index: HashMap<Subgroup, usize>,
    labels: Vec<String>,
}

impl SubgroupClassTable {
    pub fn new(g: &FiniteGroup) -> Self {
        Self::within(g, &g.whole())
    }

    pub fn within(g: &FiniteGroup, ambient: &Subgroup) -> Self {
        let subgroups = subgroups_within(g, ambient);
        let index: HashMap<Subgroup, usize> = subgroups
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, s)| (s, i))
            .collect();
        let mut class_of = vec![usize::MAX; subgroups.len()];
        let mut reps = Vec::new();
        for (i, s) in subgroups.iter().enumerate() {
            if class_of[i] != usize::MAX {
                continue;
            }
            // canonical order means the first unassigned member is the minimum
            let class = reps.len();
            reps.push(i);
            for &a in ambient.elems() {
                class_of[index[&g.conjugate_subgroup(s, a)]] = class;
            }
        }
        let described: Vec<String> = reps
            .iter()
            .map(|&i| describe_subgroup(g, &subgroups[i]))
            .collect();
        let labels = described
            .iter()
            .map(|d| {
                let dupes: Vec<_> = described.iter().filter(|e| *e == d).collect();
                (d, dupes.len())
            })
            .scan(HashMap::<String, usize>::new(), |seen, (d, n)| {
                let k = seen.entry(d.clone()).or_insert(0);
                *k += 1;
                Some(if n > 1 { format!("{d}#{k}") } else { d.clone() })
            })
            .collect();
        SubgroupClassTable {
            ambient: ambient.clone(),
            subgroups,
            class_of,
            reps,
            index,
            labels,
        }
    }

    pub fn ambient(&self) -> &Subgroup {
        &self.ambient
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, class: usize) -> &Subgroup {
        &self.subgroups[self.reps[class]]
    }

    pub fn reps(&self) -> impl Iterator<Item = &Subgroup> + '_ {
        self.reps.iter().map(|&i| &self.subgroups[i])
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Class index of any subgroup of the ambient group.
    pub fn class_of(&self, s: &Subgroup) -> Option<usize> {
        self.index.get(s).map(|&i| self.class_of[i])
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.class_of.iter().filter(|&&c| c == class).count()
    }

    /// Display label of a class representative, e.g. `C2` or `C2#2` when
    /// several classes share a structure description.
    pub fn label(&self, class: usize) -> &str {
        &self.labels[class]
    }
}
