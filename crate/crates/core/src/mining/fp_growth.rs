//! FP-growth frequent-itemset mining and association-rule generation.
//!
//! Transactions are bags of string items; support counts transactions that
//! contain an itemset (duplicates within a transaction count once). Output
//! ordering is deterministic: descending support, then lexicographic items.

use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentItemset {
    /// Items in lexicographic order.
    pub items: Vec<String>,
    pub support: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AssociationRule {
    /// Antecedent items in lexicographic order.
    pub antecedent: Vec<String>,
    pub consequent: String,
    /// Support of antecedent ∪ consequent.
    pub support: u64,
    pub confidence: f64,
}

struct FpNode {
    item: usize,
    count: u64,
    parent: usize,
    children: Vec<usize>,
}

struct FpTree {
    nodes: Vec<FpNode>,
    /// All node indices per item, for prefix-path extraction.
    header: HashMap<usize, Vec<usize>>,
    /// Items by descending support (ties by ascending id), the insertion order.
    item_order: Vec<usize>,
}

const ROOT: usize = 0;

impl FpTree {
    fn build(transactions: &[(Vec<usize>, u64)], min_support: u64) -> FpTree {
        let mut support: HashMap<usize, u64> = HashMap::new();
        for (items, count) in transactions {
            for &item in items {
                *support.entry(item).or_insert(0) += count;
            }
        }
        let mut item_order: Vec<usize> = support
            .iter()
            .filter(|(_, &count)| count >= min_support)
            .map(|(&item, _)| item)
            .collect();
        item_order.sort_by(|a, b| support[b].cmp(&support[a]).then(a.cmp(b)));
        let rank: HashMap<usize, usize> = item_order
            .iter()
            .enumerate()
            .map(|(rank, &item)| (item, rank))
            .collect();

        let mut tree = FpTree {
            nodes: vec![FpNode {
                item: usize::MAX,
                count: 0,
                parent: usize::MAX,
                children: Vec::new(),
            }],
            header: HashMap::new(),
            item_order,
        };

        for (items, count) in transactions {
            let mut path: Vec<usize> = items
                .iter()
                .copied()
                .filter(|item| rank.contains_key(item))
                .collect();
            path.sort_by_key(|item| rank[item]);
            tree.insert(&path, *count);
        }
        tree
    }

    fn insert(&mut self, path: &[usize], count: u64) {
        let mut cur = ROOT;
        for &item in path {
            let existing = self.nodes[cur]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].item == item);
            cur = match existing {
                Some(child) => {
                    self.nodes[child].count += count;
                    child
                }
                None => {
                    let idx = self.nodes.len();
                    self.nodes.push(FpNode {
                        item,
                        count,
                        parent: cur,
                        children: Vec::new(),
                    });
                    self.nodes[cur].children.push(idx);
                    self.header.entry(item).or_default().push(idx);
                    idx
                }
            };
        }
    }

    /// Conditional pattern base of `item`: prefix paths with the item's
    /// node counts.
    fn prefix_paths(&self, item: usize) -> Vec<(Vec<usize>, u64)> {
        let mut paths = Vec::new();
        for &node in self.header.get(&item).into_iter().flatten() {
            let count = self.nodes[node].count;
            let mut path = Vec::new();
            let mut cur = self.nodes[node].parent;
            while cur != ROOT {
                path.push(self.nodes[cur].item);
                cur = self.nodes[cur].parent;
            }
            path.reverse();
            if !path.is_empty() {
                paths.push((path, count));
            }
        }
        paths
    }

    fn item_support(&self, item: usize) -> u64 {
        self.header
            .get(&item)
            .map(|nodes| nodes.iter().map(|&n| self.nodes[n].count).sum())
            .unwrap_or(0)
    }
}

/// All itemsets with support >= `min_support`, exactly those a brute-force
/// enumeration would find.
pub fn fp_growth(transactions: &[Vec<String>], min_support: u64) -> Vec<FrequentItemset> {
    if min_support == 0 {
        // Absolute counts; zero would admit itemsets never observed.
        return Vec::new();
    }

    // Intern item names; ids are assigned in sorted order so id order is
    // lexicographic order.
    let mut names: Vec<String> = transactions
        .iter()
        .flat_map(|t| t.iter().cloned())
        .collect();
    names.sort();
    names.dedup();
    let id_of: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, name)| (name.as_str(), i))
        .collect();

    let encoded: Vec<(Vec<usize>, u64)> = transactions
        .iter()
        .map(|t| {
            let mut items: Vec<usize> = t.iter().map(|item| id_of[item.as_str()]).collect();
            items.sort_unstable();
            items.dedup();
            (items, 1)
        })
        .collect();

    let mut found: Vec<(Vec<usize>, u64)> = Vec::new();
    grow(&encoded, min_support, &mut Vec::new(), &mut found);

    let mut out: Vec<FrequentItemset> = found
        .into_iter()
        .map(|(mut ids, support)| {
            ids.sort_unstable();
            FrequentItemset {
                items: ids.iter().map(|&id| names[id].clone()).collect(),
                support,
            }
        })
        .collect();
    out.sort_by(|a, b| b.support.cmp(&a.support).then_with(|| a.items.cmp(&b.items)));
    out
}

fn grow(
    transactions: &[(Vec<usize>, u64)],
    min_support: u64,
    suffix: &mut Vec<usize>,
    out: &mut Vec<(Vec<usize>, u64)>,
) {
    let tree = FpTree::build(transactions, min_support);
    // Least-frequent first, so each conditional tree only contains items
    // that come before the current one in insertion order.
    for &item in tree.item_order.iter().rev() {
        let support = tree.item_support(item);
        suffix.push(item);
        out.push((suffix.clone(), support));
        let base = tree.prefix_paths(item);
        if !base.is_empty() {
            grow(&base, min_support, suffix, out);
        }
        suffix.pop();
    }
}

/// Single-consequent association rules from frequent itemsets, keeping rules
/// with confidence >= `min_confidence`. Confidence is support(X∪{y}) over
/// support(X); itemsets must be support-closed (as `fp_growth` emits).
pub fn generate_association_rules(
    itemsets: &[FrequentItemset],
    min_confidence: f64,
) -> Vec<AssociationRule> {
    let support_of: HashMap<&[String], u64> = itemsets
        .iter()
        .map(|set| (set.items.as_slice(), set.support))
        .collect();

    let mut rules = Vec::new();
    for itemset in itemsets {
        if itemset.items.len() < 2 {
            continue;
        }
        for (i, consequent) in itemset.items.iter().enumerate() {
            let mut antecedent = itemset.items.clone();
            antecedent.remove(i);
            let Some(&antecedent_support) = support_of.get(antecedent.as_slice()) else {
                continue;
            };
            let confidence = itemset.support as f64 / antecedent_support as f64;
            if confidence >= min_confidence {
                rules.push(AssociationRule {
                    antecedent,
                    consequent: consequent.clone(),
                    support: itemset.support,
                    confidence,
                });
            }
        }
    }
    rules.sort_by(|a, b| {
        b.support
            .cmp(&a.support)
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    rules
}
