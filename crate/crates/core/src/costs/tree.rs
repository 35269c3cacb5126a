//! Class-hierarchy trees and the edge-count distance costs they induce.
//!
//! Trees are read from a two-column `child,parent` CSV. A parent named
//! [`ROOT_TOKEN`] attaches the child directly under the single implicit root.
//! Leaves are the classes, numbered in order of first appearance.

use std::collections::{HashMap, VecDeque};
use std::path::Path;

use super::CostMatrix;
use crate::{Error, Result};

pub const ROOT_TOKEN: &str = "root";

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyTree {
    names: Vec<String>,
    parent: Vec<Option<usize>>,
    depth: Vec<usize>,
    /// `leaves[class]` is the node index of that class's leaf.
    leaves: Vec<usize>,
}

impl HierarchyTree {
    pub fn from_edges<I, S>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut names = vec![ROOT_TOKEN.to_string()];
        let mut index: HashMap<String, usize> = HashMap::from([(ROOT_TOKEN.to_string(), 0)]);
        let mut parent: Vec<Option<usize>> = vec![None];
        let mut declared = vec![true];

        let mut node = |name: &str,
                        names: &mut Vec<String>,
                        parent: &mut Vec<Option<usize>>,
                        declared: &mut Vec<bool>| {
            *index.entry(name.to_string()).or_insert_with(|| {
                names.push(name.to_string());
                parent.push(None);
                declared.push(false);
                names.len() - 1
            })
        };

        for (child, par) in edges {
            let (child, par) = (child.as_ref().trim(), par.as_ref().trim());
            let c = node(child, &mut names, &mut parent, &mut declared);
            if declared[c] {
                return Err(Error::TreeDuplicate {
                    node: child.to_string(),
                });
            }
            let p = node(par, &mut names, &mut parent, &mut declared);
            declared[c] = true;
            parent[c] = Some(p);
        }

        if let Some(orphan) = declared.iter().position(|d| !d) {
            let child = (0..names.len())
                .find(|&i| parent[i] == Some(orphan))
                .map(|i| names[i].clone())
                .unwrap_or_default();
            return Err(Error::TreeOrphan {
                node: child,
                parent: names[orphan].clone(),
            });
        }

        let mut children: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(c);
            }
        }
        let mut depth = vec![usize::MAX; names.len()];
        depth[0] = 0;
        let mut queue = VecDeque::from([0]);
        while let Some(n) = queue.pop_front() {
            for &c in &children[n] {
                depth[c] = depth[n] + 1;
                queue.push_back(c);
            }
        }
        if let Some(stuck) = depth.iter().position(|&d| d == usize::MAX) {
            return Err(Error::TreeCycle {
                node: names[stuck].clone(),
            });
        }

        let leaves: Vec<usize> = (1..names.len()).filter(|&n| children[n].is_empty()).collect();
        if leaves.is_empty() {
            return Err(Error::TreeEmpty);
        }
        Ok(Self {
            names,
            parent,
            depth,
            leaves,
        })
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let mut edges = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::CsvRagged {
                    line: i + 1,
                    expected: 2,
                    found: record.len(),
                });
            }
            if i == 0 && &record[0] == "child" && &record[1] == "parent" {
                continue;
            }
            edges.push((record[0].to_string(), record[1].to_string()));
        }
        Self::from_edges(edges)
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_csv_str(&std::fs::read_to_string(path)?)
    }

    pub fn classes(&self) -> usize {
        self.leaves.len()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> {
        self.leaves.iter().map(|&n| self.names[n].as_str())
    }

    pub fn class_of(&self, name: &str) -> Option<usize> {
        self.leaves.iter().position(|&n| self.names[n] == name)
    }

    /// Node index of each class's leaf.
    pub fn leaf_nodes(&self) -> &[usize] {
        &self.leaves
    }

    /// `(child, parent)` node-index pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| (c, p)))
    }

    /// Number of edges on the path between two nodes.
    pub fn path_length(&self, mut a: usize, mut b: usize) -> usize {
        let mut steps = 0;
        while self.depth[a] > self.depth[b] {
            a = self.parent[a].expect("non-root");
            steps += 1;
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root");
            steps += 1;
        }
        while a != b {
            a = self.parent[a].expect("non-root");
            b = self.parent[b].expect("non-root");
            steps += 2;
        }
        steps
    }
}

/// `C(y, k)` = number of tree edges between the leaves of classes `y` and `k`.
pub fn tree_distance_costs(tree: &HierarchyTree) -> Result<CostMatrix> {
    let k = tree.classes();
    let mut entries = vec![0.0; k * k];
    for y in 0..k {
        for c in 0..k {
            entries[y * k + c] = tree.path_length(tree.leaves[y], tree.leaves[c]) as f64;
        }
    }
    CostMatrix::new(k, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPORTS: &str = "\
child,parent
sports,root
baseball,sports
tennis,sports
baseball-bat,baseball
baseball-glove,baseball
tennis-racket,tennis
tennis-ball,tennis
";

    #[test]
    fn sports_fixture_distances() {
        let tree = HierarchyTree::from_csv_str(SPORTS).unwrap();
        let c = tree_distance_costs(&tree).unwrap();
        let bat = tree.class_of("baseball-bat").unwrap();
        let glove = tree.class_of("baseball-glove").unwrap();
        let racket = tree.class_of("tennis-racket").unwrap();
        assert_eq!(c.get(bat, glove), 2.0);
        assert_eq!(c.get(bat, racket), 4.0);
        assert_eq!(c.get(bat, bat), 0.0);
        assert_eq!(tree.classes(), 4);
    }

    #[test]
    fn classes_follow_first_appearance() {
        let tree = HierarchyTree::from_csv_str(SPORTS).unwrap();
        let names: Vec<&str> = tree.class_names().collect();
        assert_eq!(
            names,
            ["baseball-bat", "baseball-glove", "tennis-racket", "tennis-ball"]
        );
    }

    #[test]
    fn malformed_trees_are_rejected() {
        assert!(matches!(
            HierarchyTree::from_edges([("a", "b"), ("b", "a")]),
            Err(Error::TreeCycle { .. })
        ));
        assert!(matches!(
            HierarchyTree::from_edges([("a", "root"), ("b", "missing")]),
            Err(Error::TreeOrphan { .. })
        ));
        assert!(matches!(
            HierarchyTree::from_edges([("a", "root"), ("a", "root")]),
            Err(Error::TreeDuplicate { .. })
        ));
        assert!(matches!(
            HierarchyTree::from_edges(Vec::<(&str, &str)>::new()),
            Err(Error::TreeEmpty)
        ));
        assert!(matches!(
            HierarchyTree::from_csv_str("a,root,extra\n"),
            Err(Error::CsvRagged { .. }) | Err(Error::Csv(_))
        ));
    }

    #[test]
    fn parents_may_be_declared_after_children() {
        let tree = HierarchyTree::from_edges([("leaf", "mid"), ("other", "mid"), ("mid", "root")]).unwrap();
        let c = tree_distance_costs(&tree).unwrap();
        assert_eq!(c.get(0, 1), 2.0);
    }
}
